//! Correlation-decay profiles and their classification, and the two
//! counterexample states separating entanglement from off-diagonal order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::validation;
use crate::freefermion::{transverse_profile, FreeFermionChain};
use crate::hilbert::{equilibrium_state, expectation_complex, observables, Basis, QuantumState, SpinChainSpec};
use crate::{Result, Solver, C64};

/// Values at or below this are treated as an identically zero profile.
pub const ZERO_SIGNAL: f64 = 1e-14;
/// LRO needs the window mean to exceed this many times the rms scatter.
pub const LRO_SIGNAL_TO_NOISE: f64 = 10.0;
/// Largest power-law exponent still counted as quasi-long-range.
pub const MAX_QUASI_EXPONENT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderClass {
    LongRangeOrder,
    QuasiLongRange,
    ShortRange,
}

/// Least-squares fit on log-transformed data: `parameter` is the exponent
/// `p` of `c/r^p` or the rate `1/ξ` of `c e^{-r/ξ}`; `residual` is the rms
/// deviation in `ln value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub parameter: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub points: Vec<(usize, f64)>,
    pub fit_poly: Option<Fit>,
    pub fit_exp: Option<Fit>,
    pub classification: OrderClass,
    pub zero_signal: bool,
}

/// Slope, intercept and rms residual of `y ≈ a + b x`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    (b, a, (rss / n).sqrt())
}

impl DecayProfile {
    /// Classifies magnitudes `points` (sorted by distance) on the window
    /// `r ∈ [r_max/4, r_max]`.
    pub fn classify(mut points: Vec<(usize, f64)>) -> Result<Self> {
        if points.is_empty() {
            return validation("empty correlation profile");
        }
        if points.iter().any(|p| !p.1.is_finite()) {
            return validation("correlation profile has non-finite values");
        }
        points.sort_by_key(|p| p.0);
        let r_max = points.last().unwrap().0;
        let lo = r_max.div_ceil(4);
        let window: Vec<(f64, f64)> =
            points.iter().filter(|p| p.0 >= lo).map(|&(r, v)| (r as f64, v.abs())).collect();

        let short = |points, fit_poly, fit_exp, zero_signal| DecayProfile {
            points,
            fit_poly,
            fit_exp,
            classification: OrderClass::ShortRange,
            zero_signal,
        };
        if window.iter().all(|w| w.1 <= ZERO_SIGNAL) {
            return Ok(short(points, None, None, true));
        }

        let mean = window.iter().map(|w| w.1).sum::<f64>() / window.len() as f64;
        let scatter = (window.iter().map(|w| (w.1 - mean).powi(2)).sum::<f64>() / window.len() as f64).sqrt();

        let positive: Vec<(f64, f64)> = window.iter().copied().filter(|w| w.1 > ZERO_SIGNAL).collect();
        let (fit_poly, fit_exp) = if positive.len() >= 2 {
            let ln_v: Vec<f64> = positive.iter().map(|w| w.1.ln()).collect();
            let ln_r: Vec<f64> = positive.iter().map(|w| w.0.ln()).collect();
            let r: Vec<f64> = positive.iter().map(|w| w.0).collect();
            let (bp, _, rp) = linear_fit(&ln_r, &ln_v);
            let (be, _, re) = linear_fit(&r, &ln_v);
            (Some(Fit { parameter: -bp, residual: rp }), Some(Fit { parameter: -be, residual: re }))
        } else {
            (None, None)
        };

        let classification = if mean > LRO_SIGNAL_TO_NOISE * scatter && positive.len() == window.len() {
            OrderClass::LongRangeOrder
        } else {
            match (fit_poly, fit_exp) {
                (Some(p), Some(e)) if p.residual < e.residual && p.parameter > 0.0 && p.parameter < MAX_QUASI_EXPONENT => {
                    OrderClass::QuasiLongRange
                }
                _ => OrderClass::ShortRange,
            }
        };
        Ok(DecayProfile { points, fit_poly, fit_exp, classification, zero_signal: false })
    }
}

/// `|⟨σ⁺_0 σ⁻_r⟩|` for `r = 1..=r_max`, classified.
pub fn correlation_profile(spec: &SpinChainSpec, r_max: usize, solver: Solver) -> Result<DecayProfile> {
    if r_max < 1 {
        return validation("r_max must be at least 1");
    }
    let points = match solver {
        Solver::ExactDiag => {
            if r_max > 5 {
                return validation("exact diagonalization profiles stop at r = 5; use a free-fermion solver");
            }
            spec.validate_exact()?;
            if r_max >= spec.n_sites {
                return validation(format!("r_max = {r_max} must be below n_sites = {}", spec.n_sites));
            }
            let state = equilibrium_state(spec)?;
            let basis = Arc::clone(state.basis());
            (1..=r_max)
                .map(|r| Ok((r, expectation_complex(&state, &observables::raise_lower(&basis, 0, r))?.norm())))
                .collect::<Result<Vec<_>>>()?
        }
        _ => transverse_profile(&FreeFermionChain::for_solver(spec, solver)?, r_max)?,
    };
    DecayProfile::classify(points)
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` spins.
pub fn ghz_state(n: usize) -> Result<QuantumState> {
    if !(2..=12).contains(&n) {
        return validation(format!("GHZ state needs 2 ≤ n ≤ 12, got {n}"));
    }
    let basis = Arc::new(Basis::full(n, 2));
    let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] = C64::new(h, 0.0);
    amps[basis.dim() - 1] = C64::new(h, 0.0);
    QuantumState::pure(basis, amps)
}

/// Single-mode coherent amplitudes `e^{-|α|²/2} αⁿ/√n!`, `n ≤ n_max`,
/// renormalized. The discarded Poisson weight is below
/// `|α|^{2(n_max+1)}/(n_max+1)!`.
pub fn truncated_coherent(alpha: C64, n_max: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut term = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..=n_max {
        if n > 0 {
            term = term * alpha / (n as f64).sqrt();
        }
        amps.push(term);
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter().map(|a| a / norm).collect()
}

/// `Π_x |α⟩_x` on `n_sites` bosonic sites truncated at `n_max` bosons each.
pub fn coherent_product_state(alpha: C64, n_sites: usize, n_max: usize) -> Result<QuantumState> {
    if n_max < 1 || n_sites < 1 {
        return validation("coherent product needs n_sites ≥ 1 and n_max ≥ 1");
    }
    if alpha.norm_sqr() > n_max as f64 / 4.0 {
        return validation(format!("|α|² = {} exceeds the truncation guard n_max/4 = {}", alpha.norm_sqr(), n_max as f64 / 4.0));
    }
    let d = (n_max + 1) as u64;
    if d.checked_pow(n_sites as u32).is_none_or(|dim| dim > crate::hilbert::MAX_BOSON_DIM) {
        return validation(format!("(n_max+1)^n_sites exceeds {}", crate::hilbert::MAX_BOSON_DIM));
    }
    let single = truncated_coherent(alpha, n_max);
    let basis = Arc::new(Basis::full(n_sites, n_max + 1));
    let amps = (0..basis.dim())
        .map(|i| {
            let code = basis.config(i);
            (0..n_sites).map(|s| single[basis.occupation(code, s)]).product::<C64>()
        })
        .collect();
    QuantumState::pure(basis, amps)
}

/// `|⟨b†_0 b_r⟩|` for `r = 1..n_sites`, on any basis.
pub fn boson_profile(state: &QuantumState) -> Result<Vec<(usize, f64)>> {
    let basis = Arc::clone(state.basis());
    (1..basis.n_sites())
        .map(|r| Ok((r, expectation_complex(state, &observables::boson_hop(&basis, 0, r))?.norm())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{cut_entropy, single_site_entropy};
    use crate::hilbert::{expectation, reduced_density_matrix_dense};
    use std::f64::consts::LN_2;

    #[test]
    fn half_filling_is_quasi_long_range() {
        let spec = SpinChainSpec::new(2, 1.0, 0.0);
        let p = correlation_profile(&spec, 64, Solver::Infinite).unwrap();
        assert_eq!(p.classification, OrderClass::QuasiLongRange);
        assert!((p.fit_poly.unwrap().parameter - 0.5).abs() < 0.05);
        let empty = correlation_profile(&spec.with_mu(1.2), 64, Solver::Infinite).unwrap();
        assert_eq!(empty.classification, OrderClass::ShortRange);
        assert!(empty.zero_signal);
    }

    #[test]
    fn ghz_marginals() {
        let g = ghz_state(4).unwrap();
        let basis = Arc::clone(g.basis());
        let c = expectation_complex(&g, &observables::raise_lower(&basis, 1, 3)).unwrap();
        assert!(c.norm() < 1e-14);
        let z = expectation(&g, &observables::sigma_z(4, 0)).unwrap();
        assert!((single_site_entropy(z).unwrap() - LN_2).abs() < 1e-14);
        let rho = reduced_density_matrix_dense(&g, &[0]).unwrap();
        let s: f64 = crate::linalg::shannon_entropy(crate::linalg::eigh(&rho).unwrap().values);
        assert!((s - LN_2).abs() < 1e-14);
        let bell = ghz_state(2).unwrap();
        let rho2 = reduced_density_matrix_dense(&bell, &[0, 1]).unwrap();
        assert!((crate::entanglement::wootters_concurrence(&rho2).unwrap() - 1.0).abs() < 1e-12);
        assert!(ghz_state(1).is_err() && ghz_state(13).is_err());
    }

    #[test]
    fn coherent_product_has_odlro_without_entanglement() {
        let st = coherent_product_state(C64::new(0.5, 0.0), 4, 6).unwrap();
        let prof = boson_profile(&st).unwrap();
        for &(_, v) in &prof {
            assert!((v - 0.25).abs() < 1e-6);
        }
        for cut in 1..4 {
            assert!(cut_entropy(&st, cut).unwrap().abs() < 1e-12);
        }
        assert_eq!(DecayProfile::classify(prof).unwrap().classification, OrderClass::LongRangeOrder);
        let vac = coherent_product_state(C64::new(0.0, 0.0), 3, 2).unwrap();
        assert!(boson_profile(&vac).unwrap().iter().all(|p| p.1 == 0.0));
        assert!(coherent_product_state(C64::new(1.5, 0.0), 3, 6).is_err());
    }

    #[test]
    fn synthetic_profiles() {
        let pts = |f: &dyn Fn(f64) -> f64| (1..=40).map(|r| (r, f(r as f64))).collect::<Vec<_>>();
        let q = DecayProfile::classify(pts(&|r| 0.7 / r.powf(1.3))).unwrap();
        assert_eq!(q.classification, OrderClass::QuasiLongRange);
        assert!((q.fit_poly.unwrap().parameter - 1.3).abs() < 1e-9);
        let e = DecayProfile::classify(pts(&|r| 0.9 * (-r / 4.0).exp())).unwrap();
        assert_eq!(e.classification, OrderClass::ShortRange);
        assert!((e.fit_exp.unwrap().parameter - 0.25).abs() < 1e-9);
        let c = DecayProfile::classify(pts(&|_| 0.3)).unwrap();
        assert_eq!(c.classification, OrderClass::LongRangeOrder);
    }
}
