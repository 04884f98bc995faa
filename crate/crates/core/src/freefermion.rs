//! Jordan-Wigner solution of the XX chain.
//!
//! With `c_j = Π_{l<j} (1 - 2n_l) b_j` the chain becomes
//! `H = Σ_k ε(k) c†_k c_k - μN` with `ε(k) = -2J cos(k + θ) + 2μ` and
//! `⟨c†_i c_j⟩ = (1/N) Σ_k n_k e^{-ik(j-i)}`. On a periodic ring the
//! boundary bond picks up the fermion parity, so even particle numbers live
//! on antiperiodic momenta `2π(m + ½)/N` and odd ones on periodic momenta
//! `2πm/N`.
//!
//! Every equilibrium state handled here is a weighted sum of Gaussian
//! (possibly non-Hermitian) fermionic operators, and spin correlators are
//! products of Majorana operators `A = c† + c`, `B = c† - c` whose
//! expectations are Pfaffians of two-point contractions. Finite rings at
//! `T > 0` use a discrete Fourier projection onto fixed particle number so
//! that each parity sector sees its own boundary condition.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{numeric, validation};
use crate::hilbert::{Boundary, SpinChainSpec};
use crate::linalg::{eigh, pfaffian};
use crate::quadrature::integrate_adaptive;
use crate::{Result, Solver, C64};

/// Absolute tolerance of the thermodynamic-limit momentum integrals.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Largest string length accepted in the thermodynamic limit.
pub const MAX_STRING_LENGTH: usize = 512;
/// Energies closer to zero than this count as sitting on the Fermi level.
const FERMI_LEVEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    Open(usize),
    Ring(usize),
    Infinite,
}

/// An XX chain prepared for the free-fermion engine.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeFermionChain {
    pub lattice: Lattice,
    pub coupling_j: f64,
    pub chem_potential: f64,
    pub twist_per_bond: f64,
    pub temperature: f64,
}

impl FreeFermionChain {
    /// The same finite chain as `spec`.
    pub fn finite(spec: &SpinChainSpec) -> Result<Self> {
        spec.validate()?;
        let lattice = match spec.boundary {
            Boundary::Open => Lattice::Open(spec.n_sites),
            Boundary::Periodic => Lattice::Ring(spec.n_sites),
        };
        Ok(Self::with_lattice(spec, lattice))
    }

    /// The thermodynamic limit of `spec`; `n_sites` and `boundary` are ignored.
    pub fn infinite(spec: &SpinChainSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self::with_lattice(spec, Lattice::Infinite))
    }

    pub fn for_solver(spec: &SpinChainSpec, solver: Solver) -> Result<Self> {
        match solver {
            Solver::FreeFermion => Self::finite(spec),
            Solver::Infinite => Self::infinite(spec),
            Solver::ExactDiag => validation("exact diagonalization is not a free-fermion solver"),
        }
    }

    fn with_lattice(spec: &SpinChainSpec, lattice: Lattice) -> Self {
        FreeFermionChain {
            lattice,
            coupling_j: spec.coupling_j,
            chem_potential: spec.chem_potential,
            twist_per_bond: spec.twist_per_bond,
            temperature: spec.temperature,
        }
    }

    pub fn with_twist(&self, theta: f64) -> Self {
        FreeFermionChain { twist_per_bond: theta, ..self.clone() }
    }

    fn beta(&self) -> Option<f64> {
        (self.temperature > 0.0).then(|| 1.0 / self.temperature)
    }

    pub fn energy(&self, k: f64) -> f64 {
        band_energy(k, self.coupling_j, self.chem_potential, self.twist_per_bond)
    }
}

fn band_energy(k: f64, j: f64, mu: f64, theta: f64) -> f64 {
    -2.0 * j * (k + theta).cos() + 2.0 * mu
}

/// `ε(k) = -2J cos(k + θ) + 2μ`.
pub fn dispersion(k: f64, spec: &SpinChainSpec) -> f64 {
    band_energy(k, spec.coupling_j, spec.chem_potential, spec.twist_per_bond)
}

/// `1/(e^{βε} + 1)`, a step at `β = ∞` with half filling exactly at zero.
pub fn fermi(energy: f64, beta: Option<f64>) -> f64 {
    match beta {
        None => {
            if energy < 0.0 {
                1.0
            } else if energy > 0.0 {
                0.0
            } else {
                0.5
            }
        }
        Some(b) => {
            let x = b * energy;
            if x > 0.0 {
                let e = (-x).exp();
                e / (1.0 + e)
            } else {
                1.0 / (1.0 + x.exp())
            }
        }
    }
}

/// Momenta of a ring of `n` sites in `(-π, π]`.
pub fn ring_momenta(n: usize, antiperiodic: bool) -> Vec<f64> {
    let shift = if antiperiodic { 0.5 } else { 0.0 };
    (0..n)
        .map(|m| {
            let k = 2.0 * PI * (m as f64 + shift) / n as f64;
            if k > PI {
                k - 2.0 * PI
            } else {
                k
            }
        })
        .collect()
}

/// Single-particle modes of one boundary-condition sector of a ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionModeSpectrum {
    pub momenta: Vec<f64>,
    pub energies: Vec<f64>,
    /// Fermi factors at the chain temperature (a step at `T = 0`).
    pub fillings: Vec<f64>,
}

pub fn mode_spectrum(spec: &SpinChainSpec, antiperiodic: bool) -> Result<FermionModeSpectrum> {
    spec.validate()?;
    let momenta = ring_momenta(spec.n_sites, antiperiodic);
    let energies: Vec<f64> = momenta.iter().map(|&k| dispersion(k, spec)).collect();
    let fillings = energies.iter().map(|&e| fermi(e, spec.beta())).collect();
    Ok(FermionModeSpectrum { momenta, energies, fillings })
}

/// `⟨σz⟩` in the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Magnetization {
    pub value: f64,
    /// The band is empty (or full) at `T = 0`, where the closed form
    /// `1 - (2/π) arccos(μ/J)` leaves its domain.
    pub saturated: bool,
}

/// `⟨σz⟩ = 1 - 2ρ` with `ρ` the filling; closed form at `T = 0`,
/// Fermi-factor integral otherwise. Both arguments in units of `J`.
pub fn magnetization(mu_over_j: f64, temperature: f64) -> Result<Magnetization> {
    if !mu_over_j.is_finite() || !(temperature.is_finite() && temperature >= 0.0) {
        return validation("μ/J must be finite and T/J finite and non-negative");
    }
    if temperature == 0.0 {
        if mu_over_j >= 1.0 {
            return Ok(Magnetization { value: 1.0, saturated: true });
        }
        if mu_over_j <= -1.0 {
            return Ok(Magnetization { value: -1.0, saturated: true });
        }
        return Ok(Magnetization { value: 1.0 - 2.0 / PI * mu_over_j.acos(), saturated: false });
    }
    let beta = Some(1.0 / temperature);
    let rho = integrate_adaptive(|q| fermi(band_energy(q, 1.0, mu_over_j, 0.0), beta), 0.0, PI, QUADRATURE_TOL)? / PI;
    Ok(Magnetization { value: 1.0 - 2.0 * rho, saturated: false })
}

/// Fermi momentum of the `T = 0` infinite chain: `cos k_F = μ/J`.
fn fermi_momentum(j: f64, mu: f64) -> f64 {
    (mu / j).clamp(-1.0, 1.0).acos()
}

/// `g(d) = ⟨c†_0 c_d⟩` of the infinite chain.
fn infinite_g(chain: &FreeFermionChain, d: i64) -> Result<C64> {
    let phase = C64::from_polar(1.0, chain.twist_per_bond * d as f64);
    let (j, mu) = (chain.coupling_j, chain.chem_potential);
    let value = match chain.beta() {
        None => {
            let kf = fermi_momentum(j, mu);
            if d == 0 {
                kf / PI
            } else {
                let df = d as f64;
                (kf * df).sin() / (PI * df)
            }
        }
        Some(beta) => {
            let df = d as f64;
            integrate_adaptive(
                |q| fermi(band_energy(q, j, mu, 0.0), Some(beta)) * (q * df).cos(),
                0.0,
                PI,
                QUADRATURE_TOL,
            )? / PI
        }
    };
    Ok(phase * value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Majorana {
    A(usize),
    B(usize),
}

impl Majorana {
    fn site(self) -> usize {
        match self {
            Majorana::A(s) | Majorana::B(s) => s,
        }
    }
}

/// One Gaussian term: its weight in the mixture and `G_ij = ⟨c†_i c_j⟩`.
#[derive(Debug, Clone)]
struct GaussianTerm {
    weight: C64,
    g: DMatrix<C64>,
}

impl GaussianTerm {
    fn contraction(&self, p: Majorana, q: Majorana) -> C64 {
        let (i, j) = (p.site(), q.site());
        let gij = self.g[(i, j)];
        let gji = self.g[(j, i)];
        let delta = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        match (p, q) {
            (Majorana::A(_), Majorana::A(_)) => gij + delta - gji,
            (Majorana::B(_), Majorana::B(_)) => -gij - delta + gji,
            (Majorana::A(_), Majorana::B(_)) => -gij + delta - gji,
            (Majorana::B(_), Majorana::A(_)) => gij - delta + gji,
        }
    }

    /// Expectation of the ordered product of distinct Majorana operators.
    fn product(&self, ops: &[Majorana]) -> C64 {
        let n = ops.len();
        let mut m = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in (a + 1)..n {
                let v = self.contraction(ops[a], ops[b]);
                m[(a, b)] = v;
                m[(b, a)] = -v;
            }
        }
        pfaffian(&m)
    }
}

/// The equilibrium state of a [`FreeFermionChain`] as a mixture of Gaussian
/// operators, restricted to sites `0..window`.
#[derive(Debug, Clone)]
pub struct FermionState {
    terms: Vec<GaussianTerm>,
    norm: C64,
    window: usize,
    degenerate: bool,
}

/// Particle number and momenta of the `T = 0` ground state of a ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingGround {
    pub n_particles: usize,
    pub antiperiodic: bool,
    /// Total energy including the constant `-μN`.
    pub energy: f64,
    pub occupied: Vec<f64>,
    /// A level crossing or a mode at the Fermi level makes the ground state
    /// non-unique; the state with fewer particles is kept.
    pub degenerate: bool,
}

/// Lowest-energy Slater determinant over all particle numbers, each on the
/// momenta its parity requires.
pub fn ring_ground(n: usize, j: f64, mu: f64, theta: f64) -> RingGround {
    let mut best: Option<RingGround> = None;
    let mut degenerate = false;
    for antiperiodic in [true, false] {
        let ks = ring_momenta(n, antiperiodic);
        let mut modes: Vec<(f64, f64)> = ks.iter().map(|&k| (band_energy(k, j, mu, theta), k)).collect();
        modes.sort_by(|a, b| a.0.total_cmp(&b.0));
        for nf in 0..=n {
            let needs_antiperiodic = nf % 2 == 0;
            if needs_antiperiodic != antiperiodic {
                continue;
            }
            let energy = modes[..nf].iter().map(|m| m.0).sum::<f64>() - mu * n as f64;
            let inner_tie = nf > 0 && nf < n && (modes[nf].0 - modes[nf - 1].0).abs() < FERMI_LEVEL_TOL;
            let candidate = RingGround {
                n_particles: nf,
                antiperiodic,
                energy,
                occupied: modes[..nf].iter().map(|m| m.1).collect(),
                degenerate: inner_tie,
            };
            let tol = FERMI_LEVEL_TOL * energy.abs().max(1.0);
            match &best {
                None => best = Some(candidate),
                Some(b) if energy < b.energy - tol => {
                    degenerate = false;
                    best = Some(candidate);
                }
                Some(b) if (energy - b.energy).abs() <= tol => {
                    degenerate = true;
                    if nf < b.n_particles {
                        best = Some(candidate);
                    }
                }
                _ => {}
            }
        }
    }
    let mut g = best.expect("at least one sector");
    g.degenerate |= degenerate;
    g
}

fn plane_wave_g(n: usize, window: usize, modes: &[(f64, C64)]) -> DMatrix<C64> {
    // G_ij = (1/N) Σ_k f_k e^{-ik(j-i)}; depends on j - i only
    let nf = n as f64;
    let diffs: Vec<C64> = (0..(2 * window).max(1))
        .map(|s| {
            let d = s as f64 - window as f64;
            modes.iter().map(|&(k, f)| f * C64::from_polar(1.0, -k * d)).sum::<C64>() / nf
        })
        .collect();
    DMatrix::from_fn(window, window, |i, j| diffs[j + window - i])
}

/// `ln(1 + w)` without overflow for large `|w|`.
fn ln_one_plus(w: C64, ln_w: C64) -> C64 {
    if w.norm() > 1.0 {
        ln_w + (C64::new(1.0, 0.0) + w.inv()).ln()
    } else {
        (C64::new(1.0, 0.0) + w).ln()
    }
}

impl FermionState {
    /// Equilibrium state on sites `0..window`.
    pub fn equilibrium(chain: &FreeFermionChain, window: usize) -> Result<Self> {
        let (j, mu, theta) = (chain.coupling_j, chain.chem_potential, chain.twist_per_bond);
        let one = C64::new(1.0, 0.0);
        match chain.lattice {
            Lattice::Infinite => {
                if window > MAX_STRING_LENGTH + 1 {
                    return validation(format!("window {window} exceeds {}", MAX_STRING_LENGTH + 1));
                }
                let diffs = (0..(2 * window).max(1))
                    .map(|s| infinite_g(chain, s as i64 - window as i64))
                    .collect::<Result<Vec<_>>>()?;
                let g = DMatrix::from_fn(window, window, |i, jj| diffs[jj + window - i]);
                Ok(FermionState { terms: vec![GaussianTerm { weight: one, g }], norm: one, window, degenerate: false })
            }
            Lattice::Open(n) => {
                if window > n {
                    return validation(format!("window {window} exceeds chain length {n}"));
                }
                let mut h = DMatrix::<C64>::zeros(n, n);
                let hop = C64::from_polar(-j, theta);
                for i in 0..n.saturating_sub(1) {
                    // e^{iθ} b†_{i+1} b_i = e^{iθ} c†_{i+1} c_i
                    h[(i + 1, i)] = hop;
                    h[(i, i + 1)] = hop.conj();
                }
                for i in 0..n {
                    h[(i, i)] = C64::new(2.0 * mu, 0.0);
                }
                let eig = eigh(&h)?;
                let beta = chain.beta();
                let degenerate = beta.is_none() && eig.values.iter().any(|e| e.abs() < FERMI_LEVEL_TOL);
                let f: Vec<f64> = eig
                    .values
                    .iter()
                    .map(|&e| if beta.is_none() && e.abs() < FERMI_LEVEL_TOL { 0.0 } else { fermi(e, beta) })
                    .collect();
                let u = &eig.vectors;
                let g = DMatrix::from_fn(window, window, |a, b| {
                    (0..n).map(|m| u[(a, m)].conj() * u[(b, m)] * f[m]).sum::<C64>()
                });
                Ok(FermionState { terms: vec![GaussianTerm { weight: one, g }], norm: one, window, degenerate })
            }
            Lattice::Ring(n) => {
                if window > n {
                    return validation(format!("window {window} exceeds ring length {n}"));
                }
                match chain.beta() {
                    None => {
                        let gs = ring_ground(n, j, mu, theta);
                        let modes: Vec<(f64, C64)> = gs.occupied.iter().map(|&k| (k, one)).collect();
                        let g = plane_wave_g(n, window, &modes);
                        Ok(FermionState {
                            terms: vec![GaussianTerm { weight: one, g }],
                            norm: one,
                            window,
                            degenerate: gs.degenerate,
                        })
                    }
                    Some(beta) => Self::ring_thermal(n, window, j, mu, theta, beta),
                }
            }
        }
    }

    /// Gibbs state of a ring: `Σ_{N_f} Tr_{BC(N_f)}[P_{N_f} e^{-βH} ·]`, with
    /// each fixed-`N_f` projector written as a Fourier sum over
    /// `e^{iφN}`, `φ = 2πm/M` and `M > N` odd so that `1 + e^{iφ - βε}`
    /// never vanishes.
    fn ring_thermal(n: usize, window: usize, j: f64, mu: f64, theta: f64, beta: f64) -> Result<Self> {
        let m_points = if (n + 1) % 2 == 1 { n + 1 } else { n + 2 };
        let mut raw: Vec<(C64, C64, DMatrix<C64>)> = Vec::with_capacity(2 * m_points);
        for antiperiodic in [true, false] {
            let ks = ring_momenta(n, antiperiodic);
            let parity = if antiperiodic { 0 } else { 1 };
            for m in 0..m_points {
                let phi = 2.0 * PI * m as f64 / m_points as f64;
                let coef: C64 = (0..=n)
                    .filter(|nf| nf % 2 == parity)
                    .map(|nf| C64::from_polar(1.0, -phi * nf as f64))
                    .sum::<C64>()
                    / m_points as f64;
                let mut ln_z = C64::new(0.0, 0.0);
                let mut modes = Vec::with_capacity(n);
                for &k in &ks {
                    let e = band_energy(k, j, mu, theta);
                    let ln_w = C64::new(-beta * e, phi);
                    let w = ln_w.exp();
                    ln_z += ln_one_plus(w, ln_w);
                    // w/(1+w) = 1/(1 + e^{βε - iφ})
                    let f = (C64::new(1.0, 0.0) + (-ln_w).exp()).inv();
                    modes.push((k, f));
                }
                if !ln_z.re.is_finite() || modes.iter().any(|(_, f)| !f.re.is_finite() || !f.im.is_finite()) {
                    return numeric("parity projection produced non-finite weights");
                }
                raw.push((coef, ln_z, plane_wave_g(n, window, &modes)));
            }
        }
        let shift = raw.iter().map(|(_, l, _)| l.re).fold(f64::NEG_INFINITY, f64::max);
        let terms: Vec<GaussianTerm> = raw
            .into_iter()
            .map(|(coef, ln_z, g)| GaussianTerm { weight: coef * (ln_z - shift).exp(), g })
            .collect();
        let norm: C64 = terms.iter().map(|t| t.weight).sum();
        if !(norm.re > 0.0) || norm.im.abs() > 1e-8 * norm.re {
            return numeric(format!("parity-projected partition function is not positive: {norm}"));
        }
        Ok(FermionState { terms, norm, window, degenerate: false })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// The `T = 0` ground state is not unique (see [`RingGround`]).
    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    fn mix(&self, f: impl Fn(&GaussianTerm) -> C64) -> C64 {
        self.terms.iter().map(|t| t.weight * f(t)).sum::<C64>() / self.norm
    }

    fn check_site(&self, s: usize) -> Result<()> {
        if s >= self.window {
            return validation(format!("site {s} outside the configured window of {} sites", self.window));
        }
        Ok(())
    }

    /// `⟨c†_i c_j⟩`.
    pub fn g(&self, i: usize, j: usize) -> Result<C64> {
        self.check_site(i)?;
        self.check_site(j)?;
        Ok(self.mix(|t| t.g[(i, j)]))
    }

    /// `⟨σz_i⟩ = ⟨A_i B_i⟩`.
    pub fn sigma_z(&self, i: usize) -> Result<C64> {
        self.check_site(i)?;
        Ok(self.mix(|t| t.product(&[Majorana::A(i), Majorana::B(i)])))
    }

    /// `⟨σz_i σz_j⟩`, `i ≠ j`.
    pub fn sigma_zz(&self, i: usize, j: usize) -> Result<C64> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return validation("σzσz needs two distinct sites");
        }
        Ok(self.mix(|t| t.product(&[Majorana::A(i), Majorana::B(i), Majorana::A(j), Majorana::B(j)])))
    }

    /// Hard-core boson hopping `⟨b†_i b_j⟩ = ⟨c†_i Π_{l strictly between} (1 - 2n_l) c_j⟩`.
    pub fn boson_hop(&self, i: usize, j: usize) -> Result<C64> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Ok(self.mix(|t| t.g[(i, i)]));
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let mut middle = Vec::with_capacity(2 * (hi - lo));
        for l in (lo + 1)..hi {
            middle.push(Majorana::A(l));
            middle.push(Majorana::B(l));
        }
        Ok(self.mix(|t| {
            let mut total = C64::new(0.0, 0.0);
            // c†_i = (A_i + B_i)/2, c_j = (A_j - B_j)/2
            for (left, ls) in [(Majorana::A(i), 1.0), (Majorana::B(i), 1.0)] {
                for (right, rs) in [(Majorana::A(j), 1.0), (Majorana::B(j), -1.0)] {
                    let mut ops = Vec::with_capacity(middle.len() + 2);
                    ops.push(left);
                    ops.extend_from_slice(&middle);
                    ops.push(right);
                    total += t.product(&ops) * (ls * rs);
                }
            }
            total * 0.25
        }))
    }

    /// `⟨σ⁺_0 σ⁻_r⟩ = ⟨b†_r b_0⟩`.
    pub fn transverse(&self, r: usize) -> Result<C64> {
        self.boson_hop(r, 0)
    }
}

/// Provenance of a [`CorrelatorSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelatorSource {
    ExactDiag,
    FreeFermion,
}

/// Nearest-neighbour spin correlators, single-site magnetization and the
/// transverse profile `⟨σ⁺_0 σ⁻_r⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSet {
    pub xx_nn: f64,
    pub yy_nn: f64,
    pub zz_nn: f64,
    pub z_single: f64,
    pub transverse_profile: Vec<(usize, f64)>,
    pub source: CorrelatorSource,
    pub temperature: f64,
    pub mu_over_j: f64,
}

impl CorrelatorSet {
    /// Largest absolute difference over every entry; `None` if the profiles
    /// cover different distances.
    pub fn max_abs_difference(&self, other: &CorrelatorSet) -> Option<f64> {
        if self.transverse_profile.len() != other.transverse_profile.len() {
            return None;
        }
        let mut worst = [
            self.xx_nn - other.xx_nn,
            self.yy_nn - other.yy_nn,
            self.zz_nn - other.zz_nn,
            self.z_single - other.z_single,
        ]
        .iter()
        .fold(0.0f64, |a, d| a.max(d.abs()));
        for (a, b) in self.transverse_profile.iter().zip(&other.transverse_profile) {
            if a.0 != b.0 {
                return None;
            }
            worst = worst.max((a.1 - b.1).abs());
        }
        Some(worst)
    }
}

fn real_part(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() > 1e-8 * z.re.abs().max(1.0) {
        return numeric(format!("{what} has imaginary part {:e}", z.im));
    }
    Ok(z.re)
}

/// `G(d) = ⟨c†_0 c_d⟩` for `d = 0..=r_max`.
pub fn fermion_correlation_matrix(chain: &FreeFermionChain, r_max: usize) -> Result<Vec<C64>> {
    if r_max < 1 {
        return validation("r_max must be at least 1");
    }
    let state = FermionState::equilibrium(chain, r_max + 1)?;
    (0..=r_max).map(|d| state.g(0, d)).collect()
}

/// Correlators on bond `(0, 1)` plus `⟨σ⁺_0 σ⁻_r⟩` for `r = 1..=r_max`.
///
/// `⟨σxσx⟩ = 2 Re⟨b†_0 b_1⟩` and `⟨σyσy⟩` coincides with it for these
/// number-conserving states; `⟨σzσz⟩` is the four-Majorana Wick
/// contraction, `(1 - 2ρ)² - 4|G(1)|²` for translation-invariant states.
pub fn nn_correlators(chain: &FreeFermionChain, r_max: usize) -> Result<CorrelatorSet> {
    let window = (r_max + 1).max(2);
    let state = FermionState::equilibrium(chain, window)?;
    let hop = state.boson_hop(0, 1)? + state.boson_hop(1, 0)?;
    let xx = real_part(hop, "⟨σxσx⟩")?;
    let zz = real_part(state.sigma_zz(0, 1)?, "⟨σzσz⟩")?;
    let z = real_part(state.sigma_z(0)?, "⟨σz⟩")?;
    let profile = (1..=r_max).map(|r| Ok((r, state.transverse(r)?.re))).collect::<Result<Vec<_>>>()?;
    Ok(CorrelatorSet {
        xx_nn: xx,
        yy_nn: xx,
        zz_nn: zz,
        z_single: z,
        transverse_profile: profile,
        source: CorrelatorSource::FreeFermion,
        temperature: chain.temperature,
        mu_over_j: chain.chem_potential / chain.coupling_j,
    })
}

/// `⟨σ⁺_0 σ⁻_r⟩` from the Jordan-Wigner string as a Pfaffian of Majorana
/// contractions.
pub fn transverse_correlator(r: usize, chain: &FreeFermionChain) -> Result<f64> {
    if r < 1 {
        return validation("r must be at least 1");
    }
    let limit = match chain.lattice {
        Lattice::Infinite => MAX_STRING_LENGTH,
        Lattice::Open(n) | Lattice::Ring(n) => n - 1,
    };
    if r > limit {
        return validation(format!("r = {r} exceeds the configured window (max {limit})"));
    }
    let state = FermionState::equilibrium(chain, r + 1)?;
    Ok(state.transverse(r)?.re)
}

/// `|⟨σ⁺_0 σ⁻_r⟩|` for `r = 1..=r_max`, sharing one equilibrium state.
pub fn transverse_profile(chain: &FreeFermionChain, r_max: usize) -> Result<Vec<(usize, f64)>> {
    let state = FermionState::equilibrium(chain, r_max + 1)?;
    (1..=r_max).map(|r| Ok((r, state.transverse(r)?.norm()))).collect()
}

/// Energy per site of the twisted Hamiltonian with per-bond phase
/// `base + delta`, evaluated in the equilibrium state of the chain with
/// phase `base`. Momentum-space evaluation: `(1/N) Σ_k n_k [ε_{θ+δ}(k) - ε_θ(k)]`.
pub fn twist_energy_shift(chain: &FreeFermionChain, delta: f64) -> Result<f64> {
    let (j, mu, theta) = (chain.coupling_j, chain.chem_potential, chain.twist_per_bond);
    let shift = |k: f64| band_energy(k, j, mu, theta + delta) - band_energy(k, j, mu, theta);
    match chain.lattice {
        Lattice::Open(_) => validation("twist is gauge-trivial on open chains"),
        // n(k) is even in k + θ, so only the cosine part of the shift survives
        Lattice::Infinite => Ok(2.0 * j * (1.0 - delta.cos()) * infinite_g(&chain.with_twist(0.0), 1)?.re),
        Lattice::Ring(n) => match chain.beta() {
            None => {
                let gs = ring_ground(n, j, mu, theta);
                Ok(gs.occupied.iter().map(|&k| shift(k)).sum::<f64>() / n as f64)
            }
            Some(_) => ring_thermal_mode_sum(n, j, mu, theta, chain.temperature, shift),
        },
    }
}

/// `(1/N) Σ_k ⟨n_k⟩ h(k)` in the parity-projected Gibbs ensemble of a ring.
fn ring_thermal_mode_sum(n: usize, j: f64, mu: f64, theta: f64, temperature: f64, h: impl Fn(f64) -> f64) -> Result<f64> {
    let beta = 1.0 / temperature;
    let m_points = if (n + 1) % 2 == 1 { n + 1 } else { n + 2 };
    let mut raw: Vec<(C64, C64, C64)> = Vec::new();
    for antiperiodic in [true, false] {
        let ks = ring_momenta(n, antiperiodic);
        let parity = if antiperiodic { 0 } else { 1 };
        for m in 0..m_points {
            let phi = 2.0 * PI * m as f64 / m_points as f64;
            let coef: C64 = (0..=n)
                .filter(|nf| nf % 2 == parity)
                .map(|nf| C64::from_polar(1.0, -phi * nf as f64))
                .sum::<C64>()
                / m_points as f64;
            let mut ln_z = C64::new(0.0, 0.0);
            let mut acc = C64::new(0.0, 0.0);
            for &k in &ks {
                let ln_w = C64::new(-beta * band_energy(k, j, mu, theta), phi);
                ln_z += ln_one_plus(ln_w.exp(), ln_w);
                acc += (C64::new(1.0, 0.0) + (-ln_w).exp()).inv() * h(k);
            }
            raw.push((coef, ln_z, acc));
        }
    }
    let shift = raw.iter().map(|(_, l, _)| l.re).fold(f64::NEG_INFINITY, f64::max);
    let mut num = C64::new(0.0, 0.0);
    let mut den = C64::new(0.0, 0.0);
    for (coef, ln_z, acc) in raw {
        let w = coef * (ln_z - shift).exp();
        num += w * acc;
        den += w;
    }
    Ok(real_part(num / den, "mode sum")? / n as f64)
}
