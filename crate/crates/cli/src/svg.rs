//! Minimal SVG rendering of fringe counts — two series over the phase grid,
//! with an optional analytic overlay. Hand-assembled markup: the drawing is
//! a fixed 800x500 canvas with a handful of polylines, which does not
//! justify a plotting stack.

use mzsim_core::trials::CountsTable;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 25.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

const COLOR_L: &str = "#1f77b4";
const COLOR_R: &str = "#d62728";

struct Frame {
    x0: f64,
    x1: f64,
    y1: f64, // top of the counts range; bottom is always 0
}

impl Frame {
    fn map_x(&self, phi: f64) -> f64 {
        MARGIN_LEFT + (phi - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn map_y(&self, v: f64) -> f64 {
        let plot_height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        MARGIN_TOP + plot_height - v / self.y1 * plot_height
    }
}

fn fmt(v: f64) -> String {
    // Two decimals are plenty for pixel coordinates and keep files small.
    format!("{v:.2}")
}

fn polyline(points: &[(f64, f64)], color: &str, width: f64, dashed: bool) -> String {
    let coords: Vec<String> = points.iter().map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y))).collect();
    let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
    format!(
        "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\"{dash} points=\"{}\"/>\n",
        coords.join(" ")
    )
}

/// Renders a counts table as a self-contained SVG document. With `overlay`
/// set, dashed curves show the noise-free expectation `n (1 +- cos phi)/2`
/// scaled to the mean per-setting trial count.
pub fn render_counts_svg(table: &CountsTable, overlay: bool) -> String {
    assert!(!table.rows.is_empty(), "cannot plot an empty counts table");
    let rows = &table.rows;

    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut peak = 0u64;
    for row in rows {
        x0 = x0.min(row.phi_nominal);
        x1 = x1.max(row.phi_nominal);
        peak = peak.max(row.n_l).max(row.n_r);
    }
    if x0 == x1 {
        // Single setting: pad the axis so the point sits mid-frame.
        x0 -= 1.0;
        x1 += 1.0;
    }
    let mean_total =
        rows.iter().map(|r| (r.n_l + r.n_r) as f64).sum::<f64>() / rows.len() as f64;
    let mut y1 = peak as f64;
    if overlay {
        y1 = y1.max(mean_total);
    }
    if y1 == 0.0 {
        y1 = 1.0;
    }
    y1 *= 1.05;
    let frame = Frame { x0, x1, y1 };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Grid and tick labels: five divisions per axis, 1 px lines.
    let n_ticks = 5;
    for i in 0..=n_ticks {
        let t = i as f64 / n_ticks as f64;
        let x = MARGIN_LEFT + t * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
        let y = MARGIN_TOP + t * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            fmt(x), fmt(MARGIN_TOP), fmt(x), fmt(HEIGHT - MARGIN_BOTTOM)
        ));
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            fmt(MARGIN_LEFT), fmt(y), fmt(WIDTH - MARGIN_RIGHT), fmt(y)
        ));
        let phi_label = frame.x0 + t * (frame.x1 - frame.x0);
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{:.2}</text>\n",
            fmt(x),
            fmt(HEIGHT - MARGIN_BOTTOM + 18.0),
            phi_label
        ));
        let count_label = frame.y1 * (1.0 - t);
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.0}</text>\n",
            fmt(MARGIN_LEFT - 8.0),
            fmt(y + 4.0),
            count_label
        ));
    }

    // Axis titles.
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">phi (radians)</text>\n",
        fmt((MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0),
        fmt(HEIGHT - 12.0)
    ));
    svg.push_str(&format!(
        "  <text x=\"18\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {})\">counts per setting</text>\n",
        fmt((MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0),
        fmt((MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0)
    ));

    if overlay {
        // Smooth expectation curves sampled across the full axis.
        let n = 200;
        let mut curve_l = Vec::with_capacity(n + 1);
        let mut curve_r = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let phi = frame.x0 + (frame.x1 - frame.x0) * i as f64 / n as f64;
            let p = 0.5 * (1.0 + phi.cos());
            curve_l.push((frame.map_x(phi), frame.map_y(mean_total * p)));
            curve_r.push((frame.map_x(phi), frame.map_y(mean_total * (1.0 - p))));
        }
        svg.push_str(&polyline(&curve_l, COLOR_L, 1.5, true));
        svg.push_str(&polyline(&curve_r, COLOR_R, 1.5, true));
    }

    let series_l: Vec<(f64, f64)> =
        rows.iter().map(|r| (frame.map_x(r.phi_nominal), frame.map_y(r.n_l as f64))).collect();
    let series_r: Vec<(f64, f64)> =
        rows.iter().map(|r| (frame.map_x(r.phi_nominal), frame.map_y(r.n_r as f64))).collect();
    if rows.len() > 1 {
        svg.push_str(&polyline(&series_l, COLOR_L, 2.0, false));
        svg.push_str(&polyline(&series_r, COLOR_R, 2.0, false));
    }
    for (x, y) in &series_l {
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{COLOR_L}\"/>\n",
            fmt(*x), fmt(*y)
        ));
    }
    for (x, y) in &series_r {
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{COLOR_R}\"/>\n",
            fmt(*x), fmt(*y)
        ));
    }

    // Legend.
    let legend_x = MARGIN_LEFT + 12.0;
    svg.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{COLOR_L}\"/>\n  <text x=\"{}\" y=\"{}\" \
         font-size=\"13\">detector L</text>\n",
        fmt(legend_x), fmt(MARGIN_TOP + 12.0), fmt(legend_x + 10.0), fmt(MARGIN_TOP + 16.0)
    ));
    svg.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{COLOR_R}\"/>\n  <text x=\"{}\" y=\"{}\" \
         font-size=\"13\">detector R</text>\n",
        fmt(legend_x), fmt(MARGIN_TOP + 30.0), fmt(legend_x + 10.0), fmt(MARGIN_TOP + 34.0)
    ));
    if overlay {
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"13\">dashed: n(1 &#177; cos phi)/2</text>\n",
            fmt(legend_x),
            fmt(MARGIN_TOP + 48.0)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use mzsim_core::trials::CountsRow;

    fn table() -> CountsTable {
        CountsTable {
            rows: vec![
                CountsRow { phi_nominal: 0.0, n_l: 100, n_r: 0 },
                CountsRow { phi_nominal: 1.0, n_l: 77, n_r: 23 },
                CountsRow { phi_nominal: 2.0, n_l: 29, n_r: 71 },
            ],
        }
    }

    #[test]
    fn renders_well_formed_document() {
        let svg = render_counts_svg(&table(), false);
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("width=\"800\" height=\"500\""));
        // Two data polylines, one marker per row per series.
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 6 + 2); // data + legend
    }

    #[test]
    fn overlay_adds_dashed_expectation_curves() {
        let svg = render_counts_svg(&table(), true);
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
    }

    #[test]
    fn coordinates_stay_inside_the_canvas() {
        let svg = render_counts_svg(&table(), true);
        for chunk in svg.split("points=\"").skip(1) {
            let points = chunk.split('"').next().unwrap();
            for pair in points.split_whitespace() {
                let (x, y) = pair.split_once(',').unwrap();
                let x: f64 = x.parse().unwrap();
                let y: f64 = y.parse().unwrap();
                assert!((0.0..=WIDTH).contains(&x), "x = {x}");
                assert!((0.0..=HEIGHT).contains(&y), "y = {y}");
            }
        }
    }

    #[test]
    fn rendering_is_deterministic_and_handles_single_rows() {
        let one = CountsTable { rows: vec![CountsRow { phi_nominal: 0.5, n_l: 3, n_r: 7 }] };
        let a = render_counts_svg(&one, false);
        let b = render_counts_svg(&one, false);
        assert_eq!(a, b);
        // No polylines for a single point, just markers.
        assert_eq!(a.matches("<polyline").count(), 0);
        assert_eq!(a.matches("<circle").count(), 2 + 2);
    }
}
