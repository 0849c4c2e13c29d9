//! Ensemble-averaged density matrices.
//!
//! Aggregated data from randomized or noisy runs is described not by a pure
//! state but by a convex mixture of projectors. This module provides the
//! generic mixer, closed forms for the two mixtures that matter here (fair
//! coin, Gaussian phase noise), and a Monte Carlo estimator to check the
//! closed forms against brute-force averaging.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::interferometer::psi_heads;
use crate::qmath::{DensityMatrix2, StateVector2, EXACT_TOL};
use crate::trials::{keyed_stream, sample_phase, DOMAIN_MIXTURE};

/// Samples per independent stream in [`monte_carlo_mixture`]; partial sums
/// are combined in batch order so the result is bitwise identical for any
/// thread count.
const MC_BATCH: u64 = 4096;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum MixtureError {
    #[error("ensemble weights sum to {sum}, expected 1 within 1e-12")]
    InvalidWeights { sum: f64 },
    #[error("weight {weight} is outside [0, 1]")]
    WeightOutOfRange { weight: f64 },
}

/// Gaussian phase-noise model: realized phase `~ Normal(mu, sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub mu: f64,
    pub sigma: f64,
}

impl NoiseModel {
    pub fn new(mu: f64, sigma: f64) -> Self {
        assert!(mu.is_finite(), "mu must be finite");
        assert!(sigma.is_finite() && sigma >= 0.0, "sigma must be finite and non-negative");
        Self { mu, sigma }
    }
}

/// Finite ensemble of pure states with convex weights, validated on
/// construction so mixing can never fail.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEnsemble {
    components: Vec<(f64, StateVector2)>,
}

impl WeightedEnsemble {
    pub fn new(components: Vec<(f64, StateVector2)>) -> Result<Self, MixtureError> {
        let mut sum = 0.0;
        for &(w, _) in &components {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(MixtureError::WeightOutOfRange { weight: w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > EXACT_TOL {
            return Err(MixtureError::InvalidWeights { sum });
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, StateVector2)] {
        &self.components
    }
}

/// Convex combination `sum_i w_i |psi_i><psi_i|`.
pub fn mix(ensemble: &WeightedEnsemble) -> DensityMatrix2 {
    let mut m00 = 0.0;
    let mut m11 = 0.0;
    let mut m01 = Complex64::ZERO;
    for &(w, state) in &ensemble.components {
        let p = state.projector();
        m00 += w * p.m00().re;
        m11 += w * p.m11().re;
        m01 += Complex64::new(w, 0.0) * p.m01();
    }
    // Hermitian by construction: m10 is the exact conjugate.
    DensityMatrix2::from_entries_unchecked(
        Complex64::new(m00, 0.0),
        m01,
        m01.conj(),
        Complex64::new(m11, 0.0),
    )
}

/// Fair-coin average of the heads and tails final states at phase `phi`:
/// `1/2 [[1, i sin phi], [-i sin phi, 1]]`. The diagonal is flat (no
/// fringe), while the off-diagonal still carries `phi` — the phase
/// information survives aggregation, encrypted rather than destroyed.
pub fn rho_bar_coin(phi: f64) -> DensityMatrix2 {
    let s = 0.5 * phi.sin();
    DensityMatrix2::from_entries_unchecked(
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, s),
        Complex64::new(0.0, -s),
        Complex64::new(0.5, 0.0),
    )
}

/// Eigenvalues of [`rho_bar_coin`] labeled by branch:
/// `(1 + sin phi)/2` and `(1 - sin phi)/2`. Note the `+` branch is the
/// smaller one wherever `sin phi < 0`; sort if magnitude order matters.
pub fn lambda_pm(phi: f64) -> (f64, f64) {
    let s = phi.sin();
    (0.5 * (1.0 + s), 0.5 * (1.0 - s))
}

/// Exact Gaussian-noise average of heads-device projectors.
///
/// With `phi ~ Normal(mu, sigma)`, the only `phi`-dependence in the
/// projector sits in `e^{i phi}`, whose Gaussian average is the
/// characteristic function `E[e^{i phi}] = e^{i mu} e^{-sigma^2 / 2}`.
/// Substituting gives
/// `1/2 (I + e^{-sigma^2/2} [[cos mu, i sin mu], [-i sin mu, -cos mu]])`.
pub fn rho_bar_gaussian(noise: &NoiseModel) -> DensityMatrix2 {
    let damp = fringe_contrast(noise);
    let c = 0.5 * noise.mu.cos() * damp;
    let s = 0.5 * noise.mu.sin() * damp;
    DensityMatrix2::from_entries_unchecked(
        Complex64::new(0.5 + c, 0.0),
        Complex64::new(0.0, s),
        Complex64::new(0.0, -s),
        Complex64::new(0.5 - c, 0.0),
    )
}

/// Fringe visibility under Gaussian phase noise: `e^{-sigma^2 / 2}`.
pub fn fringe_contrast(noise: &NoiseModel) -> f64 {
    (-0.5 * noise.sigma * noise.sigma).exp()
}

/// Brute-force estimate of [`rho_bar_gaussian`]: averages `samples`
/// heads-device projectors at phases drawn from the noise model.
///
/// Deterministic in `(noise, samples, seed)` and independent of the rayon
/// thread count: sampling happens in fixed-size batches with per-batch
/// streams, and the partial sums are reduced sequentially in batch order.
pub fn monte_carlo_mixture(noise: &NoiseModel, samples: u64, seed: u64) -> DensityMatrix2 {
    assert!(samples >= 1, "need at least one sample");
    if noise.sigma == 0.0 {
        // Every draw is exactly mu; return the exact average directly.
        return psi_heads(noise.mu).projector();
    }

    let n_batches = samples.div_ceil(MC_BATCH);
    let partials: Vec<[f64; 4]> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = keyed_stream(DOMAIN_MIXTURE, seed, batch, 0);
            let lo = batch * MC_BATCH;
            let hi = (lo + MC_BATCH).min(samples);
            // Accumulates m00, Re m01, Im m01, m11.
            let mut acc = [0.0f64; 4];
            for _ in lo..hi {
                let phi = sample_phase(&mut rng, noise.mu, noise.sigma);
                let p = psi_heads(phi).projector();
                acc[0] += p.m00().re;
                acc[1] += p.m01().re;
                acc[2] += p.m01().im;
                acc[3] += p.m11().re;
            }
            acc
        })
        .collect();

    let mut total = [0.0f64; 4];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    let inv = 1.0 / samples as f64;
    DensityMatrix2::from_entries_unchecked(
        Complex64::new(total[0] * inv, 0.0),
        Complex64::new(total[1] * inv, total[2] * inv),
        Complex64::new(total[1] * inv, -total[2] * inv),
        Complex64::new(total[3] * inv, 0.0),
    )
}

/// Detector probabilities encoded on the diagonal: `(rho_00, rho_11)`.
pub fn detection_probs_from_density(rho: &DensityMatrix2) -> (f64, f64) {
    (rho.m00().re, rho.m11().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::psi_tails;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn coin_ensemble(phi: f64) -> WeightedEnsemble {
        WeightedEnsemble::new(vec![(0.5, psi_heads(phi)), (0.5, psi_tails(phi))]).unwrap()
    }

    #[test]
    fn ensemble_validation() {
        let s = psi_heads(0.3);
        assert!(matches!(
            WeightedEnsemble::new(vec![(0.6, s), (0.6, s)]),
            Err(MixtureError::InvalidWeights { .. })
        ));
        assert!(matches!(
            WeightedEnsemble::new(vec![(-0.2, s), (1.2, s)]),
            Err(MixtureError::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            WeightedEnsemble::new(vec![]),
            Err(MixtureError::InvalidWeights { .. })
        ));
        // Sum within 1e-12 of 1 passes.
        assert!(WeightedEnsemble::new(vec![(0.5 + 2e-13, s), (0.5, s)]).is_ok());
    }

    #[test]
    fn coin_mixture_matches_closed_form() {
        for phi in [0.0, 0.4, FRAC_PI_2, 2.4, PI, -1.1, 5.9] {
            let averaged = mix(&coin_ensemble(phi));
            let closed = rho_bar_coin(phi);
            assert!(
                averaged.frobenius_distance(&closed) < EXACT_TOL,
                "phi = {phi}: distance {}",
                averaged.frobenius_distance(&closed)
            );
            // Flat diagonal: the fringe is gone from the populations.
            let (p_l, p_r) = detection_probs_from_density(&averaged);
            assert!((p_l - 0.5).abs() < EXACT_TOL && (p_r - 0.5).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn coin_mixture_eigenvalues_and_entropy() {
        // Branch-labeled eigenvalues at phi = pi/6: (3/4, 1/4).
        let (lp, lm) = lambda_pm(PI / 6.0);
        assert!((lp - 0.75).abs() < 1e-15 && (lm - 0.25).abs() < 1e-15);
        // Entropy of spectrum {3/4, 1/4}, frozen from 50-digit arithmetic.
        let s = rho_bar_coin(PI / 6.0).von_neumann_entropy();
        assert!((s - 0.8112781244591329).abs() < 1e-12);

        // phi = 0: maximally mixed, one full bit.
        assert!((rho_bar_coin(0.0).von_neumann_entropy() - 1.0).abs() < 1e-12);
        // phi = pi/2: the mixture is secretly pure; entropy collapses.
        assert!(rho_bar_coin(FRAC_PI_2).von_neumann_entropy() < 1e-9);

        // The + branch is the smaller eigenvalue for negative sin phi.
        let (lp, lm) = lambda_pm(-PI / 6.0);
        assert!(lp < lm);
        let eig = rho_bar_coin(-PI / 6.0).eig_hermitian();
        assert!((eig.lambda_plus - lm).abs() < 1e-15);
        assert!((eig.lambda_minus - lp).abs() < 1e-15);
    }

    #[test]
    fn entropy_equals_shannon_entropy_of_the_spectrum() {
        // The general solver and the branch formula reach the same number
        // through different arithmetic.
        let shannon = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
        for phi in [0.0, 0.3, 1.0, PI / 2.0, 2.5, -0.7] {
            let (lp, lm) = lambda_pm(phi);
            let from_spectrum = shannon(lp) + shannon(lm);
            let from_solver = rho_bar_coin(phi).von_neumann_entropy();
            assert!(
                (from_solver - from_spectrum).abs() < 1e-12,
                "phi = {phi}: {from_solver} vs {from_spectrum}"
            );
        }
    }

    #[test]
    fn gaussian_entropy_is_monotone_in_sigma() {
        for mu in [0.0, 0.9, PI] {
            let mut previous = -1.0;
            for i in 0..=12 {
                let sigma = 0.25 * i as f64;
                let s = rho_bar_gaussian(&NoiseModel::new(mu, sigma)).von_neumann_entropy();
                assert!(s >= previous - 1e-12, "mu = {mu}, sigma = {sigma}: {s} < {previous}");
                previous = s;
            }
        }
    }

    #[test]
    fn gaussian_closed_form_reference_values() {
        // sigma = 1: contrast e^{-1/2}, eigenvalues (1 +- e^{-1/2})/2.
        let noise = NoiseModel::new(0.0, 1.0);
        assert!((fringe_contrast(&noise) - 0.6065306597126334).abs() < 1e-15);
        let rho = rho_bar_gaussian(&noise);
        let eig = rho.eig_hermitian();
        assert!((eig.lambda_plus - 0.8032653298563167).abs() < 1e-12);
        assert!((eig.lambda_minus - 0.19673467014368333).abs() < 1e-12);

        // sigma = 3: contrast e^{-4.5}; nearly maximally mixed.
        let noise = NoiseModel::new(0.0, 3.0);
        assert!((fringe_contrast(&noise) - 0.011108996538242306).abs() < 1e-15);
        assert!(rho_bar_gaussian(&noise).von_neumann_entropy() > 0.999);

        // sigma = 0: no damping; the pure heads projector.
        let noise = NoiseModel::new(0.9, 0.0);
        let rho = rho_bar_gaussian(&noise);
        assert!(rho.frobenius_distance(&psi_heads(0.9).projector()) < EXACT_TOL);

        // mu = pi/2 leaves a purely off-diagonal damped term.
        let rho = rho_bar_gaussian(&NoiseModel::new(FRAC_PI_2, 1.0));
        let (p_l, p_r) = detection_probs_from_density(&rho);
        assert!((p_l - 0.5).abs() < 1e-15 && (p_r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_agrees_with_closed_form() {
        let noise = NoiseModel::new(0.8, 0.7);
        let mc = monte_carlo_mixture(&noise, 1_000_000, 2024);
        let closed = rho_bar_gaussian(&noise);
        let d = mc.frobenius_distance(&closed);
        assert!(d < 3e-3, "distance {d}");
        // The estimate is a genuine density matrix.
        assert!(DensityMatrix2::from_matrix(&mc.as_matrix()).is_ok());
    }

    #[test]
    fn monte_carlo_sigma_zero_is_exact() {
        let noise = NoiseModel::new(1.3, 0.0);
        let mc = monte_carlo_mixture(&noise, 10, 1);
        assert_eq!(mc, psi_heads(1.3).projector());
    }

    #[test]
    fn monte_carlo_is_deterministic_across_thread_counts() {
        let noise = NoiseModel::new(0.4, 1.2);
        let samples = 40_000; // spans several batches
        let reference = monte_carlo_mixture(&noise, samples, 7);

        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let run = pool.install(|| monte_carlo_mixture(&noise, samples, 7));
            // Bitwise equality, not approximate.
            assert_eq!(run, reference, "threads = {threads}");
        }

        // Different seeds give different estimates.
        assert_ne!(monte_carlo_mixture(&noise, samples, 8), reference);
    }

    proptest! {
        #[test]
        fn prop_mix_produces_valid_density(phi in -TAU..TAU, w in 0.0f64..1.0) {
            let ensemble = WeightedEnsemble::new(vec![
                (w, psi_heads(phi)),
                (1.0 - w, psi_tails(phi)),
            ]).unwrap();
            let rho = mix(&ensemble);
            prop_assert!(DensityMatrix2::from_matrix(&rho.as_matrix()).is_ok());
            prop_assert!((rho.trace() - 1.0).abs() < EXACT_TOL);
        }

        #[test]
        fn prop_coin_mixture_spectrum(phi in -TAU..TAU) {
            let (lp, lm) = lambda_pm(phi);
            prop_assert!((lp + lm - 1.0).abs() < 1e-15);
            let eig = rho_bar_coin(phi).eig_hermitian();
            let (hi, lo) = if lp >= lm { (lp, lm) } else { (lm, lp) };
            prop_assert!((eig.lambda_plus - hi).abs() < 1e-12);
            prop_assert!((eig.lambda_minus - lo).abs() < 1e-12);
        }

        #[test]
        fn prop_contrast_damps_entropy(mu in -TAU..TAU, sigma in 0.0f64..4.0) {
            let noise = NoiseModel::new(mu, sigma);
            let rho = rho_bar_gaussian(&noise);
            prop_assert!(DensityMatrix2::from_matrix(&rho.as_matrix()).is_ok());
            // Eigenvalues depend only on the contrast, not on mu.
            let eig = rho.eig_hermitian();
            let contrast = fringe_contrast(&noise);
            prop_assert!((eig.lambda_plus - 0.5 * (1.0 + contrast)).abs() < 1e-12);
            prop_assert!((eig.lambda_minus - 0.5 * (1.0 - contrast)).abs() < 1e-12);
            // More noise, more entropy.
            let wider = rho_bar_gaussian(&NoiseModel::new(mu, sigma + 0.5));
            prop_assert!(wider.von_neumann_entropy() > rho.von_neumann_entropy() - 1e-12);
        }
    }
}
