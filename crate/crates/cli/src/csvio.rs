//! CSV serialization for trial records and per-setting counts.
//!
//! The formats are deliberately tiny (fixed headers, no quoting, no escape
//! rules), so reading and writing are hand-rolled. Floats are written with
//! the default `Display`, which produces the shortest decimal that parses
//! back to the identical bits — round-tripping a file preserves every value
//! exactly.

use thiserror::Error;

use mzsim_core::trials::{Coin, CountsRow, CountsTable, Outcome, TrialRecord};

pub const RECORDS_HEADER: &str = "setting_index,trial_index,phi_nominal,phi_realized,coin,outcome";
pub const COUNTS_HEADER: &str = "phi_nominal,n_L,n_R";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CsvError {
    #[error("missing or wrong header; expected {expected:?}")]
    Header { expected: &'static str },
    #[error("line {line}: expected {expected} comma-separated fields")]
    ColumnCount { line: usize, expected: usize },
    #[error("line {line}: bad {what}: {value:?}")]
    Field { line: usize, what: &'static str, value: String },
}

fn coin_symbol(coin: Option<Coin>) -> &'static str {
    match coin {
        Some(Coin::Heads) => "H",
        Some(Coin::Tails) => "T",
        None => "-",
    }
}

fn outcome_symbol(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::DetectorL => "L",
        Outcome::DetectorR => "R",
    }
}

pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.setting_index,
            r.trial_index,
            r.phi_nominal,
            r.phi_realized,
            coin_symbol(r.coin),
            outcome_symbol(r.outcome),
        ));
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<TrialRecord>, CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == RECORDS_HEADER => {}
        _ => return Err(CsvError::Header { expected: RECORDS_HEADER }),
    }

    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 6 {
            return Err(CsvError::ColumnCount { line: line_no, expected: 6 });
        }
        let field = |what: &'static str, value: &str| CsvError::Field {
            line: line_no,
            what,
            value: value.to_string(),
        };
        let setting_index =
            fields[0].parse::<usize>().map_err(|_| field("setting_index", fields[0]))?;
        let trial_index =
            fields[1].parse::<usize>().map_err(|_| field("trial_index", fields[1]))?;
        let phi_nominal =
            fields[2].parse::<f64>().map_err(|_| field("phi_nominal", fields[2]))?;
        let phi_realized =
            fields[3].parse::<f64>().map_err(|_| field("phi_realized", fields[3]))?;
        let coin = match fields[4] {
            "H" => Some(Coin::Heads),
            "T" => Some(Coin::Tails),
            "-" => None,
            other => return Err(field("coin", other)),
        };
        let outcome = match fields[5] {
            "L" => Outcome::DetectorL,
            "R" => Outcome::DetectorR,
            other => return Err(field("outcome", other)),
        };
        records.push(TrialRecord {
            setting_index,
            trial_index,
            phi_nominal,
            phi_realized,
            coin,
            outcome,
        });
    }
    Ok(records)
}

pub fn counts_to_csv(table: &CountsTable) -> String {
    let mut out = String::with_capacity(32 * (table.rows.len() + 1));
    out.push_str(COUNTS_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!("{},{},{}\n", row.phi_nominal, row.n_l, row.n_r));
    }
    out
}

pub fn counts_from_csv(text: &str) -> Result<CountsTable, CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == COUNTS_HEADER => {}
        _ => return Err(CsvError::Header { expected: COUNTS_HEADER }),
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 3 {
            return Err(CsvError::ColumnCount { line: line_no, expected: 3 });
        }
        let field = |what: &'static str, value: &str| CsvError::Field {
            line: line_no,
            what,
            value: value.to_string(),
        };
        rows.push(CountsRow {
            phi_nominal: fields[0].parse().map_err(|_| field("phi_nominal", fields[0]))?,
            n_l: fields[1].parse().map_err(|_| field("n_L", fields[1]))?,
            n_r: fields[2].parse().map_err(|_| field("n_R", fields[2]))?,
        });
    }
    Ok(CountsTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mzsim_core::trials::{run_experiment, ExperimentPlan, Mode};

    #[test]
    fn records_round_trip_bit_exactly() {
        let plan = ExperimentPlan {
            mode: Mode::RandomizedNoisy,
            phi_start: -0.4,
            phi_step: std::f64::consts::TAU / 32.0,
            n_settings: 4,
            trials_per_setting: 25,
            sigma: 0.8,
            seed: 31,
        };
        let (records, counts) = run_experiment(&plan);

        let text = records_to_csv(&records);
        assert!(text.starts_with(RECORDS_HEADER));
        let parsed = records_from_csv(&text).unwrap();
        assert_eq!(parsed, records);

        let text = counts_to_csv(&counts);
        let parsed = counts_from_csv(&text).unwrap();
        assert_eq!(parsed, counts);
    }

    #[test]
    fn coin_column_uses_dash_for_ideal_runs() {
        let plan = ExperimentPlan {
            mode: Mode::Ideal,
            phi_start: 0.0,
            phi_step: 1.0,
            n_settings: 1,
            trials_per_setting: 2,
            sigma: 0.0,
            seed: 0,
        };
        let (records, _) = run_experiment(&plan);
        let text = records_to_csv(&records);
        assert_eq!(text.lines().nth(1), Some("0,0,0,0,-,L"));
        assert_eq!(records_from_csv(&text).unwrap(), records);
    }

    #[test]
    fn malformed_inputs_are_rejected_with_positions() {
        assert_eq!(
            records_from_csv(""),
            Err(CsvError::Header { expected: RECORDS_HEADER })
        );
        assert_eq!(
            records_from_csv("phi,count\n1,2\n"),
            Err(CsvError::Header { expected: RECORDS_HEADER })
        );

        let text = format!("{RECORDS_HEADER}\n0,0,0.1\n");
        assert_eq!(
            records_from_csv(&text),
            Err(CsvError::ColumnCount { line: 2, expected: 6 })
        );

        let text = format!("{RECORDS_HEADER}\n0,0,0.1,0.1,X,L\n");
        assert!(matches!(records_from_csv(&text), Err(CsvError::Field { line: 2, what: "coin", .. })));

        let text = format!("{COUNTS_HEADER}\n0.5,three,4\n");
        assert!(matches!(counts_from_csv(&text), Err(CsvError::Field { what: "n_L", .. })));
    }

    #[test]
    fn blank_lines_are_ignored() {
        let text = format!("{COUNTS_HEADER}\n\n0.25,10,20\n\n");
        let table = counts_from_csv(&text).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].n_r, 20);
    }
}
