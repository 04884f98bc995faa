//! Mean-field spectrum of the anisotropic 2D lattice,
//! `Λ(k) = √(J⊥² cos² k_y + J² sin² k_x)`, and its thermal energy density
//! `U = -(1/2) ∫ d²k/(2π)² Λ tanh(βΛ/2)` over `[-π, π]²`.
//!
//! `Λ` is even in both momenta and symmetric under `k → π - k`, so the zone
//! integral is 16 times the one over `[0, π/2]²`. With `t = π/2 - k_y` the
//! only zero of `Λ` sits at the corner `(k_x, t) = (0, 0)`, where a
//! geometrically graded tensor Gauss-Legendre grid resolves the cone.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::entanglement::{WitnessName, WitnessReport};
use crate::error::{numeric, validation};
use crate::quadrature::{graded_breakpoints, integrate_tensor};
use crate::Result;

pub const MIN_QUADRATURE_POINTS: usize = 64;
pub const DEFAULT_QUADRATURE_POINTS: usize = 128;
/// Relative change allowed when the grid is doubled.
pub const QUADRATURE_RTOL: f64 = 1e-8;
const PANEL_ORDER: usize = 16;
const GRADING: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dim2Spec {
    pub j_parallel: f64,
    pub j_perp: f64,
    pub beta: f64,
    /// Gauss points per axis of the reduced zone (16 per panel).
    pub quadrature_points: usize,
}

impl Dim2Spec {
    pub fn new(j_parallel: f64, j_perp: f64, beta: f64) -> Self {
        Dim2Spec { j_parallel, j_perp, beta, quadrature_points: DEFAULT_QUADRATURE_POINTS }
    }

    fn validate_couplings(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !(ok(self.j_parallel) && ok(self.j_perp) && self.j_parallel + self.j_perp > 0.0) {
            return validation("couplings must be non-negative and not both zero");
        }
        if self.quadrature_points < MIN_QUADRATURE_POINTS {
            return validation(format!("quadrature_points must be at least {MIN_QUADRATURE_POINTS}"));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_couplings()?;
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return validation(format!("beta must be positive and finite, got {}", self.beta));
        }
        Ok(())
    }
}

pub fn lambda_2d(kx: f64, ky: f64, spec: &Dim2Spec) -> f64 {
    let a = spec.j_perp * ky.cos();
    let b = spec.j_parallel * kx.sin();
    a.hypot(b)
}

/// `(16/(2π)²) ∫∫_{[0,π/2]²} g(Λ)` at `points` and `2·points` Gauss points per
/// axis; errors if the two differ by more than [`QUADRATURE_RTOL`].
fn zone_average(spec: &Dim2Spec, g: impl Fn(f64) -> f64) -> Result<f64> {
    let at = |points: usize| {
        let panels = (points / PANEL_ORDER).max(1);
        let bps = graded_breakpoints(FRAC_PI_2, panels, GRADING);
        let (j, jp) = (spec.j_parallel, spec.j_perp);
        16.0 / (4.0 * PI * PI)
            * integrate_tensor(&bps, &bps, PANEL_ORDER, |kx, t| g((jp * t.sin()).hypot(j * kx.sin())))
    };
    let coarse = at(spec.quadrature_points);
    let fine = at(2 * spec.quadrature_points);
    if !fine.is_finite() {
        return numeric("zone integral is not finite");
    }
    if (fine - coarse).abs() > QUADRATURE_RTOL * fine.abs().max(f64::MIN_POSITIVE) {
        return numeric(format!("zone quadrature not converged: {coarse} vs {fine}"));
    }
    Ok(fine)
}

/// `U = -(1/2) ∫ d²k/(2π)² Λ tanh(βΛ/2)` per site.
pub fn energy_density_2d(spec: &Dim2Spec) -> Result<f64> {
    spec.validate()?;
    let beta = spec.beta;
    Ok(-0.5 * zone_average(spec, |l| l * (0.5 * beta * l).tanh())?)
}

/// `T = 0` limit: `-(1/2)` times the zone mean of `Λ`.
pub fn ground_energy_density_2d(spec: &Dim2Spec) -> Result<f64> {
    spec.validate_couplings()?;
    Ok(-0.5 * zone_average(spec, |l| l)?)
}

/// Leading high-temperature behaviour `-β(J² + J⊥²)/8`.
pub fn high_t_energy_asymptote(spec: &Dim2Spec) -> f64 {
    -spec.beta * (spec.j_parallel.powi(2) + spec.j_perp.powi(2)) / 8.0
}

/// `(1/8)(J² + J⊥²)/(J + J⊥)`: below this temperature the high-T energy
/// exceeds the separable bound.
pub fn high_t_entanglement_threshold(spec: &Dim2Spec) -> f64 {
    let (j, jp) = (spec.j_parallel, spec.j_perp);
    (j * j + jp * jp) / (8.0 * (j + jp))
}

/// How the energy density is compared with the separable bound `(J + J⊥)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyAccounting {
    /// `|U|` as returned by [`energy_density_2d`].
    #[default]
    PerSite,
    /// `2|U|`, counting each of a site's two bonds in full.
    PerBondDoubled,
}

/// Fires when the accounted energy exceeds `(J + J⊥)/2`.
pub fn witness_energy_2d(u_density: f64, spec: &Dim2Spec, accounting: EnergyAccounting) -> WitnessReport {
    let factor = match accounting {
        EnergyAccounting::PerSite => 1.0,
        EnergyAccounting::PerBondDoubled => 2.0,
    };
    let bound = 0.5 * (spec.j_parallel + spec.j_perp);
    let mut w = WitnessReport::new(
        WitnessName::Energy2d,
        factor * u_density.abs() - bound,
        &[("u_density", u_density), ("j", spec.j_parallel), ("j_perp", spec.j_perp), ("accounting_factor", factor)],
    );
    if accounting == EnergyAccounting::PerBondDoubled {
        w.caveat.push_str("; energy counted per bond (doubled), a convention choice");
    }
    w
}
