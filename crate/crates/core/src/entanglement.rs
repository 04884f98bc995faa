//! Entanglement quantifiers and witnesses.
//!
//! Entropies are in nats unless a field says otherwise.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{numeric, validation};
use crate::freefermion::CorrelatorSet;
use crate::hilbert::{QuantumState, StateKind};
use crate::linalg::{eigh, hermitian_function, shannon_entropy};
use crate::{Result, C64};

const RADICAND_CLAMP: f64 = -1e-12;
const RADICAND_ERROR: f64 = -1e-9;

/// Binary entropy of `ε± = (1 ± ⟨σz⟩)/2`.
pub fn single_site_entropy(z_expectation: f64) -> Result<f64> {
    if !(z_expectation.abs() <= 1.0 + 1e-12) {
        return validation(format!("⟨σz⟩ = {z_expectation} lies outside [-1, 1]"));
    }
    let z = z_expectation.clamp(-1.0, 1.0);
    Ok(shannon_entropy([(1.0 + z) / 2.0, (1.0 - z) / 2.0]))
}

fn radicand(c: &CorrelatorSet) -> Result<f64> {
    let r = (1.0 + c.zz_nn).powi(2) - 4.0 * c.z_single * c.z_single;
    if r < RADICAND_ERROR {
        return numeric(format!("inconsistent correlators: concurrence radicand {r:e} < 0"));
    }
    if r < RADICAND_CLAMP {
        // tolerated rounding
        return Ok(0.0);
    }
    Ok(r.max(0.0))
}

/// `C = max{0, |⟨σxσx⟩| - √((1 + ⟨σzσz⟩)² - 4⟨σz⟩²)}`.
pub fn concurrence_nn(c: &CorrelatorSet) -> Result<f64> {
    let r = radicand(c)?;
    Ok((c.xx_nn.abs() - r.sqrt()).max(0.0))
}

/// Wootters concurrence of a U(1)-symmetric two-qubit state written in
/// terms of its correlators: `max{0, |⟨σxσx⟩| - ½√((1 + ⟨σzσz⟩)² - 4⟨σz⟩²)}`.
pub fn concurrence_x_state(c: &CorrelatorSet) -> Result<f64> {
    let r = radicand(c)?;
    Ok((c.xx_nn.abs() - 0.5 * r.sqrt()).max(0.0))
}

fn check_two_qubit(rho: &DMatrix<C64>) -> Result<()> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return validation(format!("expected a 4x4 two-qubit density matrix, got {}x{}", rho.nrows(), rho.ncols()));
    }
    let tr: C64 = rho.diagonal().iter().sum();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-9 {
        return validation(format!("density matrix has trace {tr}"));
    }
    Ok(())
}

/// `σy ⊗ σy` in the basis `|00⟩, |10⟩, |01⟩, |11⟩`.
fn sigma_yy() -> DMatrix<C64> {
    let mut m = DMatrix::zeros(4, 4);
    // flips both spins; -1 when they agree
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m
}

/// Wootters concurrence `max{0, λ1 - λ2 - λ3 - λ4}`, `λ` the decreasing
/// square roots of the spectrum of `√ρ ρ̃ √ρ` with `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn wootters_concurrence(rho: &DMatrix<C64>) -> Result<f64> {
    check_two_qubit(rho)?;
    let yy = sigma_yy();
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let sqrt_rho = hermitian_function(rho, |x| x.max(0.0).sqrt())?;
    let mut m = &sqrt_rho * tilde * &sqrt_rho;
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut lam: Vec<f64> = eigh(&m)?.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Smallest eigenvalue of the partial transpose on the second qubit;
/// negative values certify entanglement.
pub fn partial_transpose_min_eigenvalue(rho: &DMatrix<C64>) -> Result<f64> {
    check_two_qubit(rho)?;
    // index = a + 2b; transpose b
    let pt = DMatrix::from_fn(4, 4, |r, c| {
        let (ra, rb) = (r % 2, r / 2);
        let (ca, cb) = (c % 2, c / 2);
        rho[(ra + 2 * cb, ca + 2 * rb)]
    });
    Ok(eigh(&pt)?.values[0])
}

/// Entanglement entropy of sites `0..cut` in a pure state.
pub fn cut_entropy(state: &QuantumState, cut: usize) -> Result<f64> {
    if state.kind() != StateKind::Pure {
        return validation("cut entropy measures entanglement of pure states only");
    }
    let basis = state.basis();
    let n = basis.n_sites();
    if cut == 0 || cut >= n {
        return validation(format!("cut {cut} must lie in 1..{n}"));
    }
    let d = basis.local_dim() as u64;
    let left_dim = d.pow(cut as u32);
    let right_dim = d.pow((n - cut) as u32);
    if left_dim.min(right_dim) > 4096 {
        return validation("smaller side of the cut exceeds 4096 states");
    }
    let amps = state.amplitudes().expect("pure state");
    let mut m = DMatrix::<C64>::zeros(left_dim as usize, right_dim as usize);
    for (i, a) in amps.iter().enumerate() {
        let code = basis.config(i);
        m[((code % left_dim) as usize, (code / left_dim) as usize)] += a;
    }
    let rho = if left_dim <= right_dim { &m * m.adjoint() } else { m.adjoint() * &m };
    Ok(shannon_entropy(eigh(&rho)?.values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessName {
    FsHalf,
    #[serde(rename = "mu_T_disc")]
    MuTDisc,
    Energy1d,
    Energy2d,
    ContinuumEnergy,
}

/// Outcome of a one-sided entanglement test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub witness_name: WitnessName,
    pub fired: bool,
    /// Signed distance to the threshold; positive exactly when fired.
    pub margin: f64,
    pub inputs_echo: BTreeMap<String, f64>,
    pub caveat: String,
}

pub(crate) const ONE_SIDED: &str = "one-sided test: a witness that does not fire is inconclusive";

impl WitnessReport {
    pub(crate) fn new(name: WitnessName, margin: f64, inputs: &[(&str, f64)]) -> Self {
        WitnessReport {
            witness_name: name,
            fired: margin > 0.0,
            margin,
            inputs_echo: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            caveat: ONE_SIDED.to_string(),
        }
    }
}

/// Fires when `fs_kinetic > 1/2`.
pub fn witness_superfluid(fs_kinetic: f64) -> WitnessReport {
    WitnessReport::new(WitnessName::FsHalf, fs_kinetic - 0.5, &[("fs_kinetic", fs_kinetic)])
}

/// Fires when a bond's `|⟨σxσx + σyσy⟩|` exceeds 1, the largest value any
/// product state reaches; margin in those units.
pub fn witness_energy_1d(c: &CorrelatorSet) -> WitnessReport {
    let kinetic = (c.xx_nn + c.yy_nn).abs();
    WitnessReport::new(WitnessName::Energy1d, kinetic - 1.0, &[("xx_nn", c.xx_nn), ("yy_nn", c.yy_nn)])
}

/// Fires inside the disc `μ² + T² < J²`; margin in units of `J²`.
pub fn witness_high_temperature(mu: f64, temperature: f64, j: f64) -> Result<WitnessReport> {
    if !(j > 0.0 && j.is_finite()) || !mu.is_finite() || !(temperature >= 0.0 && temperature.is_finite()) {
        return validation("high-temperature witness needs J > 0, finite μ and T ≥ 0");
    }
    let margin = (j * j - mu * mu - temperature * temperature) / (j * j);
    Ok(WitnessReport::new(WitnessName::MuTDisc, margin, &[("mu", mu), ("temperature", temperature), ("j", j)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub mu_over_j: f64,
    pub sigma_z: f64,
    pub nats: f64,
    pub bits: f64,
    pub saturated: bool,
}

/// Single-site entropy of the `T = 0` infinite chain from
/// `⟨σz⟩ = 1 - (2/π) arccos(μ/J)`; outside `|μ/J| ≤ 1` the chain is
/// saturated and the entropy is 0.
pub fn experiment_entropy_estimate(mu_over_j: f64) -> Result<EntropyEstimate> {
    if !mu_over_j.is_finite() {
        return validation("μ/J must be finite");
    }
    let saturated = mu_over_j.abs() > 1.0;
    let sigma_z = if saturated { mu_over_j.signum() } else { 1.0 - 2.0 / PI * mu_over_j.acos() };
    let nats = single_site_entropy(sigma_z)?;
    Ok(EntropyEstimate { mu_over_j, sigma_z, nats, bits: nats / LN_2, saturated })
}
