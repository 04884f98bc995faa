//! Superfluid fraction of the XX chain by two routes: the energy cost of a
//! small phase twist, and the nearest-neighbour kinetic correlator.
//!
//! The two normalizations differ by exactly 2 on this model
//! (`fs_kinetic = 2 fs_curvature`), since the Jordan-Wigner current
//! commutes with `H`. Both are exposed.

use serde::{Deserialize, Serialize};

use crate::error::{numeric, validation};
use crate::freefermion::{twist_energy_shift, CorrelatorSet, FermionState, FreeFermionChain};
use crate::hilbert::{
    build_twisted_hamiltonian, eigenvalues, equilibrium_state, expectation, observables, thermal_state, Boundary,
    SpinChainSpec,
};
use crate::{correlators, Result, Solver, C64};

/// Default per-bond twist.
pub const DEFAULT_THETA: f64 = 1e-3;
pub const MAX_THETA: f64 = 1e-2;
/// Per-bond `|⟨σxσx + σyσy⟩|` above which a state counts as critical.
pub const CRITICAL_TOL: f64 = 1e-10;
const RICHARDSON_REL: f64 = 0.01;
const RICHARDSON_FLOOR: f64 = 1e-8;

/// `(⟨H_{θ0+θ}⟩ - ⟨H_{θ0}⟩)/N`.
///
/// At `T = 0` each side is its own ground energy; at `T > 0` both are
/// evaluated in the Gibbs state of the untwisted (`θ0`) Hamiltonian.
fn twist_energy(spec: &SpinChainSpec, theta: f64, solver: Solver) -> Result<f64> {
    match solver {
        Solver::ExactDiag => {
            spec.validate_exact()?;
            let base = build_twisted_hamiltonian(spec)?;
            let twisted = build_twisted_hamiltonian(&spec.clone().with_twist(spec.twist_per_bond + theta))?;
            let n = spec.n_sites as f64;
            match spec.beta() {
                None => Ok((eigenvalues(&twisted)?[0] - eigenvalues(&base)?[0]) / n),
                Some(beta) => {
                    let rho = thermal_state(&base, beta)?;
                    Ok((expectation(&rho, &twisted)? - expectation(&rho, &base)?) / n)
                }
            }
        }
        _ => twist_energy_shift(&FreeFermionChain::for_solver(spec, solver)?, theta),
    }
}

/// `f_s = (⟨H_θ⟩ - ⟨H⟩)/(J N θ²)` with `θ` the per-bond twist, checked
/// against the same quantity at `θ/2` (≤ 1% change, or ≤ 1e-8 absolute).
pub fn superfluid_fraction_curvature(spec: &SpinChainSpec, theta: f64, solver: Solver) -> Result<f64> {
    spec.validate()?;
    if solver != Solver::Infinite && spec.boundary == Boundary::Open {
        return validation("twist is gauge-trivial on open chains");
    }
    if !(theta > 0.0 && theta <= MAX_THETA) {
        return validation(format!("twist θ = {theta} must lie in (0, {MAX_THETA}]"));
    }
    let j = spec.coupling_j;
    let full = twist_energy(spec, theta, solver)? / (j * theta * theta);
    let half = twist_energy(spec, 0.5 * theta, solver)? / (j * 0.25 * theta * theta);
    if (full - half).abs() > (RICHARDSON_REL * full.abs()).max(RICHARDSON_FLOOR) {
        return numeric(format!(
            "twist response is not quadratic: f_s(θ) = {full}, f_s(θ/2) = {half}"
        ));
    }
    Ok(full)
}

/// `f_s = |xx_nn + yy_nn| / 2` per bond.
pub fn superfluid_fraction_kinetic(c: &CorrelatorSet) -> Result<f64> {
    if !(c.xx_nn.is_finite() && c.yy_nn.is_finite()) {
        return validation("kinetic superfluid fraction needs finite ⟨σxσx⟩ and ⟨σyσy⟩");
    }
    Ok((c.xx_nn + c.yy_nn).abs() / 2.0)
}

/// Bond-averaged `⟨-i(e^{iφ} σ⁺_i σ⁻_{i+1} - h.c.)⟩` in the equilibrium state.
fn bond_current(spec: &SpinChainSpec, solver: Solver, phi: f64) -> Result<f64> {
    match solver {
        Solver::ExactDiag => {
            spec.validate_exact()?;
            let state = equilibrium_state(spec)?;
            expectation(&state, &observables::current(spec, phi))
        }
        _ => {
            let chain = FreeFermionChain::for_solver(spec, solver)?;
            let state = FermionState::equilibrium(&chain, 2)?;
            let x = state.boson_hop(1, 0)?;
            Ok(2.0 * (C64::from_polar(1.0, phi) * x).im)
        }
    }
}

/// Current measured with the untwisted operator
/// `-i Σ (σ⁺_i σ⁻_{i+1} - σ⁻_i σ⁺_{i+1})`, per bond.
pub fn superfluid_current(spec: &SpinChainSpec, solver: Solver) -> Result<f64> {
    bond_current(spec, solver, 0.0)
}

/// Current measured with the operator covariant under the chain's own twist,
/// `-(1/J) ∂H_θ/∂θ` per bond. Non-zero in twisted ground states, where the
/// untwisted operator can still read zero because the twisted eigenstates
/// are the untwisted momentum eigenstates.
pub fn twisted_current(spec: &SpinChainSpec, solver: Solver) -> Result<f64> {
    bond_current(spec, solver, spec.twist_per_bond)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Criticality {
    pub critical: bool,
    /// Per-bond `|⟨σxσx + σyσy⟩|` minus [`CRITICAL_TOL`].
    pub margin: f64,
    /// `μ < J`, reported at `T = 0` only.
    pub analytic: Option<bool>,
}

/// Non-zero superfluid density test on the per-bond kinetic correlator.
pub fn criticality_check(spec: &SpinChainSpec, solver: Solver) -> Result<Criticality> {
    let c = correlators(spec, solver, 0)?;
    let value = (c.xx_nn + c.yy_nn).abs();
    Ok(Criticality {
        critical: value > CRITICAL_TOL,
        margin: value - CRITICAL_TOL,
        analytic: (spec.temperature == 0.0).then_some(spec.chem_potential < spec.coupling_j),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperfluidReport {
    pub fs_kinetic: f64,
    /// Absent on open chains, where the twist can be gauged away.
    pub fs_curvature: Option<f64>,
    pub current: f64,
    pub twisted_current: f64,
    pub theta_used: f64,
    /// `fs_kinetic / fs_curvature`; absent when the curvature is (near) zero.
    pub method_agreement: Option<f64>,
    pub critical: bool,
}

pub fn superfluid_report(spec: &SpinChainSpec, theta: f64, solver: Solver) -> Result<SuperfluidReport> {
    let c = correlators(spec, solver, 0)?;
    let fs_kinetic = superfluid_fraction_kinetic(&c)?;
    let open = solver != Solver::Infinite && spec.boundary == Boundary::Open;
    let fs_curvature = if open { None } else { Some(superfluid_fraction_curvature(spec, theta, solver)?) };
    let method_agreement = fs_curvature.filter(|f| f.abs() > RICHARDSON_FLOOR).map(|f| fs_kinetic / f);
    Ok(SuperfluidReport {
        fs_kinetic,
        fs_curvature,
        current: superfluid_current(spec, solver)?,
        twisted_current: twisted_current(spec, solver)?,
        theta_used: theta,
        method_agreement,
        critical: (c.xx_nn + c.yy_nn).abs() > CRITICAL_TOL,
    })
}
