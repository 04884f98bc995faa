//! Exact diagonalization in the site-occupation basis.
//!
//! Basis states are encoded as integers with site `i` stored in digit `i`
//! (base `local_dim`), so for spin chains bit `i` is the occupation of site
//! `i` and index 0 is the empty state `|00…0⟩`. Operators are stored as
//! sparse rows; diagonalization is dense, one symmetry block at a time.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{numeric, validation};
use crate::freefermion::{CorrelatorSet, CorrelatorSource};
use crate::linalg::{canonicalize_phase, eigh, shannon_entropy};
use crate::{Error, Result, C64};

/// Largest spin chain accepted by the exact-diagonalization engine.
pub const MAX_EXACT_SITES: usize = 14;
/// Largest product-space dimension accepted for bosonic chains.
pub const MAX_BOSON_DIM: u64 = 1 << 20;
/// Largest site set accepted by [`reduced_density_matrix`].
pub const MAX_REDUCED_SITES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => validation(format!("unknown boundary '{other}'")),
        }
    }
}

/// Parameters of an XX chain `H = -J Σ (e^{iθ} σ⁺_i σ⁻_{i+1} + h.c.) - μ Σ σz_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinChainSpec {
    pub n_sites: usize,
    pub coupling_j: f64,
    pub chem_potential: f64,
    /// Peierls phase per bond, radians.
    pub twist_per_bond: f64,
    pub boundary: Boundary,
    /// Zero selects the ground state.
    pub temperature: f64,
}

impl SpinChainSpec {
    /// Periodic ring at zero temperature without twist.
    pub fn new(n_sites: usize, coupling_j: f64, chem_potential: f64) -> Self {
        SpinChainSpec {
            n_sites,
            coupling_j,
            chem_potential,
            twist_per_bond: 0.0,
            boundary: Boundary::Periodic,
            temperature: 0.0,
        }
    }

    pub fn with_twist(mut self, theta: f64) -> Self {
        self.twist_per_bond = theta;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.chem_potential = mu;
        self
    }

    /// Checks the parameter invariants that do not depend on the solver.
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return validation(format!("n_sites must be at least 2, got {}", self.n_sites));
        }
        if !(self.coupling_j.is_finite() && self.coupling_j > 0.0) {
            return validation(format!("coupling J must be positive and finite, got {}", self.coupling_j));
        }
        if !self.chem_potential.is_finite() {
            return validation("chemical potential must be finite");
        }
        if !self.twist_per_bond.is_finite() {
            return validation("twist per bond must be finite");
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return validation(format!("temperature must be finite and non-negative, got {}", self.temperature));
        }
        Ok(())
    }

    /// Validation plus the exact-diagonalization size guard.
    pub fn validate_exact(&self) -> Result<()> {
        self.validate()?;
        if self.n_sites > MAX_EXACT_SITES {
            return Err(Error::Resource(format!(
                "exact diagonalization is limited to {MAX_EXACT_SITES} sites, got {}",
                self.n_sites
            )));
        }
        Ok(())
    }

    /// Inverse temperature, `None` at `T = 0`.
    pub fn beta(&self) -> Option<f64> {
        (self.temperature > 0.0).then(|| 1.0 / self.temperature)
    }

    /// Bonds `(i, i+1)` of the chain, wrapping around for periodic rings.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        chain_bonds(self.n_sites, self.boundary)
    }
}

pub(crate) fn chain_bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    match boundary {
        Boundary::Open => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        Boundary::Periodic => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    }
}

/// Parameters of a truncated Bose-Hubbard chain
/// `H = -J Σ (b†_i b_{i+1} + h.c.) + (U/2) Σ n_i (n_i - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoseHubbardSpec {
    pub n_sites: usize,
    pub coupling_j: f64,
    pub onsite_u: f64,
    /// Occupation cutoff per site.
    pub n_max: usize,
    pub boundary: Boundary,
    /// Restricts the basis to a fixed total particle number.
    pub n_particles: Option<usize>,
}

impl BoseHubbardSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return validation("n_sites must be at least 2");
        }
        if self.n_max < 1 {
            return validation("n_max must be at least 1");
        }
        if !self.coupling_j.is_finite() || !(self.onsite_u.is_finite() && self.onsite_u >= 0.0) {
            return validation("J must be finite and U finite and non-negative");
        }
        if let Some(np) = self.n_particles {
            if np > self.n_sites * self.n_max {
                return validation(format!("{np} particles do not fit below the cutoff"));
            }
        }
        let dim = (self.n_max as u64 + 1).checked_pow(self.n_sites as u32);
        match dim {
            Some(d) if d <= MAX_BOSON_DIM => Ok(()),
            _ => Err(Error::Resource(format!(
                "(n_max+1)^n_sites exceeds {MAX_BOSON_DIM} for n_max={}, n_sites={}",
                self.n_max, self.n_sites
            ))),
        }
    }
}

/// An ordered set of occupation configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    n_sites: usize,
    local_dim: usize,
    powers: Vec<u64>,
    /// Sorted codes; `None` means the full product space.
    configs: Option<Vec<u64>>,
    dim: usize,
}

impl Basis {
    /// The full product space `local_dim^n_sites`.
    pub fn full(n_sites: usize, local_dim: usize) -> Self {
        let powers = powers(n_sites, local_dim);
        let dim = (local_dim as u64).pow(n_sites as u32) as usize;
        Basis { n_sites, local_dim, powers, configs: None, dim }
    }

    /// Configurations with exactly `n_particles` particles in total.
    pub fn with_particles(n_sites: usize, local_dim: usize, n_particles: usize) -> Self {
        let full = Basis::full(n_sites, local_dim);
        let configs: Vec<u64> = (0..full.dim as u64)
            .filter(|&c| full.particle_count(c) == n_particles)
            .collect();
        let dim = configs.len();
        Basis { configs: Some(configs), dim, ..full }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full(&self) -> bool {
        self.configs.is_none()
    }

    pub fn config(&self, index: usize) -> u64 {
        match &self.configs {
            None => index as u64,
            Some(c) => c[index],
        }
    }

    pub fn index_of(&self, code: u64) -> Option<usize> {
        match &self.configs {
            None => ((code as usize) < self.dim).then_some(code as usize),
            Some(c) => c.binary_search(&code).ok(),
        }
    }

    pub fn occupation(&self, code: u64, site: usize) -> usize {
        ((code / self.powers[site]) % self.local_dim as u64) as usize
    }

    pub fn particle_count(&self, code: u64) -> usize {
        (0..self.n_sites).map(|s| self.occupation(code, s)).sum()
    }

    /// Occupations written site 0 first, e.g. `"0100"`.
    pub fn label(&self, index: usize) -> String {
        let code = self.config(index);
        (0..self.n_sites)
            .map(|s| std::char::from_digit(self.occupation(code, s) as u32, 36).unwrap_or('?'))
            .collect()
    }

    fn power(&self, site: usize) -> u64 {
        self.powers[site]
    }
}

fn powers(n_sites: usize, local_dim: usize) -> Vec<u64> {
    let mut p = Vec::with_capacity(n_sites);
    let mut acc = 1u64;
    for _ in 0..n_sites {
        p.push(acc);
        acc *= local_dim as u64;
    }
    p
}

/// A sparse Hermitian operator (or a general operator, for observables such
/// as `b†_i b_j`) on a [`Basis`].
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    basis: Arc<Basis>,
    rows: Vec<Vec<(usize, C64)>>,
}

impl PartialEq for HamiltonianMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.rows == other.rows
    }
}

impl HamiltonianMatrix {
    pub fn dimension(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn basis_labels(&self) -> Vec<String> {
        (0..self.dimension()).map(|i| self.basis.label(i)).collect()
    }

    /// Non-zero entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => self.rows[i][k].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dimension();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                dev = dev.max((v - self.entry(j, i).conj()).norm());
            }
        }
        dev
    }

    /// `max_i Σ_j |H_ij|`, an upper bound on the spectral norm for Hermitian
    /// matrices.
    pub fn norm_bound(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, h)| h * v[j]).sum())
            .collect()
    }

    /// Largest entry of `[H, D]` for the diagonal operator `D = diag(d)`.
    pub fn commutator_with_diagonal(&self, d: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                worst = worst.max((v * (d[j] - d[i])).norm());
            }
        }
        worst
    }

    /// Connected components of the non-zero pattern, each sorted, ordered by
    /// their smallest index.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dimension();
        let mut label = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut members = vec![start];
            label[start] = id;
            let mut cursor = 0;
            while cursor < members.len() {
                let i = members[cursor];
                cursor += 1;
                for &(j, _) in &self.rows[i] {
                    if label[j] == usize::MAX {
                        label[j] = id;
                        members.push(j);
                    }
                }
            }
            members.sort_unstable();
            blocks.push(members);
        }
        blocks
    }

    fn block_dense(&self, block: &[usize]) -> DMatrix<C64> {
        let pos: HashMap<usize, usize> = block.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = DMatrix::zeros(block.len(), block.len());
        for (a, &i) in block.iter().enumerate() {
            for &(j, v) in &self.rows[i] {
                if let Some(&b) = pos.get(&j) {
                    m[(a, b)] = v;
                }
            }
        }
        m
    }
}

/// Accumulates matrix entries; duplicates are summed on [`finish`](Self::finish).
pub struct OperatorBuilder {
    basis: Arc<Basis>,
    rows: Vec<Vec<(usize, C64)>>,
}

impl OperatorBuilder {
    pub fn new(basis: Arc<Basis>) -> Self {
        let rows = vec![Vec::new(); basis.dim()];
        OperatorBuilder { basis, rows }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn push(&mut self, row: usize, col: usize, value: C64) {
        self.rows[row].push((col, value));
    }

    /// Adds `coeff · b†_to b_from` with bosonic matrix elements.
    pub fn hop(&mut self, from: usize, to: usize, coeff: C64) {
        let basis = Arc::clone(&self.basis);
        let dmax = basis.local_dim() - 1;
        for col in 0..basis.dim() {
            let code = basis.config(col);
            let nf = basis.occupation(code, from);
            if nf == 0 {
                continue;
            }
            if from == to {
                self.push(col, col, coeff * nf as f64);
                continue;
            }
            let nt = basis.occupation(code, to);
            if nt >= dmax {
                continue;
            }
            let new = code - basis.power(from) + basis.power(to);
            if let Some(row) = basis.index_of(new) {
                let amp = ((nf * (nt + 1)) as f64).sqrt();
                self.push(row, col, coeff * amp);
            }
        }
    }

    /// Adds `coeff · f(configuration)` on the diagonal.
    pub fn diagonal(&mut self, f: impl Fn(&Basis, u64) -> f64) {
        let basis = Arc::clone(&self.basis);
        for i in 0..basis.dim() {
            let v = f(&basis, basis.config(i));
            if v != 0.0 {
                self.push(i, i, C64::new(v, 0.0));
            }
        }
    }

    /// Adds `coeff · Π σ^{a}_{site}` for a spin-1/2 basis.
    pub fn pauli(&mut self, factors: &[(usize, Pauli)], coeff: C64) {
        let basis = Arc::clone(&self.basis);
        assert_eq!(basis.local_dim(), 2, "Pauli operators need a spin-1/2 basis");
        for col in 0..basis.dim() {
            let mut code = basis.config(col);
            let mut amp = coeff;
            for &(site, p) in factors {
                let bit = 1u64 << site;
                let occupied = code & bit != 0;
                match p {
                    Pauli::X => code ^= bit,
                    // σy = i(b† - b): |0⟩ → i|1⟩, |1⟩ → -i|0⟩
                    Pauli::Y => {
                        amp *= if occupied { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) };
                        code ^= bit;
                    }
                    Pauli::Z => {
                        if occupied {
                            amp = -amp;
                        }
                    }
                }
            }
            if let Some(row) = basis.index_of(code) {
                self.push(row, col, amp);
            }
        }
    }

    pub fn finish(self) -> HamiltonianMatrix {
        let rows = self
            .rows
            .into_iter()
            .map(|mut r| {
                r.sort_by_key(|&(c, _)| c);
                let mut merged: Vec<(usize, C64)> = Vec::with_capacity(r.len());
                for (c, v) in r {
                    match merged.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|&(_, v)| v != C64::new(0.0, 0.0));
                merged
            })
            .collect();
        HamiltonianMatrix { basis: self.basis, rows }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

fn chain_hamiltonian(spec: &SpinChainSpec, theta: f64) -> Result<HamiltonianMatrix> {
    spec.validate_exact()?;
    if !theta.is_finite() {
        return validation("twist must be finite");
    }
    let basis = Arc::new(Basis::full(spec.n_sites, 2));
    let mut b = OperatorBuilder::new(basis);
    let phase = C64::from_polar(1.0, theta);
    let j = C64::new(spec.coupling_j, 0.0);
    for (i, k) in spec.bonds() {
        // e^{iθ} σ⁺_i σ⁻_k = e^{iθ} b†_k b_i
        b.hop(i, k, -j * phase);
        b.hop(k, i, -j * phase.conj());
    }
    let mu = spec.chem_potential;
    let n = spec.n_sites;
    b.diagonal(|basis, code| -mu * (n as f64 - 2.0 * basis.particle_count(code) as f64));
    Ok(b.finish())
}

/// `H = -J Σ (σ⁺_i σ⁻_{i+1} + σ⁻_i σ⁺_{i+1}) - μ Σ σz_i`; the chain's twist is
/// ignored.
pub fn build_xx_hamiltonian(spec: &SpinChainSpec) -> Result<HamiltonianMatrix> {
    chain_hamiltonian(spec, 0.0)
}

/// The XX Hamiltonian with Peierls phase `e^{iθ}` on every bond, `θ =
/// spec.twist_per_bond`.
pub fn build_twisted_hamiltonian(spec: &SpinChainSpec) -> Result<HamiltonianMatrix> {
    chain_hamiltonian(spec, spec.twist_per_bond)
}

/// Truncated Bose-Hubbard Hamiltonian, hopping sign `-J`.
pub fn build_bose_hubbard(spec: &BoseHubbardSpec) -> Result<HamiltonianMatrix> {
    spec.validate()?;
    let d = spec.n_max + 1;
    let basis = Arc::new(match spec.n_particles {
        Some(np) => Basis::with_particles(spec.n_sites, d, np),
        None => Basis::full(spec.n_sites, d),
    });
    let mut b = OperatorBuilder::new(basis);
    let j = C64::new(spec.coupling_j, 0.0);
    for (i, k) in chain_bonds(spec.n_sites, spec.boundary) {
        b.hop(i, k, -j);
        b.hop(k, i, -j);
    }
    let u = spec.onsite_u;
    b.diagonal(|basis, code| {
        (0..basis.n_sites())
            .map(|s| {
                let n = basis.occupation(code, s) as f64;
                0.5 * u * n * (n - 1.0)
            })
            .sum()
    });
    Ok(b.finish())
}

/// One term of a state: a normalized vector supported on a subset of the
/// basis, with its statistical weight.
#[derive(Debug, Clone)]
pub struct Component {
    pub probability: f64,
    /// Eigenvalue of the generating operator, when there is one.
    pub energy: f64,
    pub support: Arc<Vec<usize>>,
    pub amplitudes: Vec<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Thermal,
}

/// A pure state or a mixed state in spectral form `Σ p_n |n⟩⟨n|`.
#[derive(Debug, Clone)]
pub struct QuantumState {
    basis: Arc<Basis>,
    kind: StateKind,
    beta: Option<f64>,
    components: Vec<Component>,
}

impl QuantumState {
    /// A pure state from a full amplitude vector; must have unit norm.
    pub fn pure(basis: Arc<Basis>, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return validation(format!(
                "amplitude vector has length {}, basis has {}",
                amplitudes.len(),
                basis.dim()
            ));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return validation(format!("state norm is {norm}, expected 1"));
        }
        let (support, amps): (Vec<usize>, Vec<C64>) = amplitudes
            .into_iter()
            .enumerate()
            .filter(|(_, z)| *z != C64::new(0.0, 0.0))
            .unzip();
        Ok(QuantumState {
            basis,
            kind: StateKind::Pure,
            beta: None,
            components: vec![Component {
                probability: 1.0,
                energy: f64::NAN,
                support: Arc::new(support),
                amplitudes: amps,
            }],
        })
    }

    /// A mixed state from its density matrix (Hermitian, positive, unit
    /// trace up to clamping of eigenvalues in `[-1e-12, 0)`).
    pub fn from_density_matrix(basis: Arc<Basis>, rho: &DMatrix<C64>) -> Result<Self> {
        if rho.nrows() != basis.dim() {
            return validation("density matrix does not match the basis");
        }
        let eig = eigh(rho)?;
        if let Some(&min) = eig.values.first() {
            if min < -1e-12 {
                return numeric(format!("density matrix has negative eigenvalue {min:e}"));
            }
        }
        let clamped: Vec<f64> = eig.values.iter().map(|&p| p.max(0.0)).collect();
        let trace: f64 = clamped.iter().sum();
        if trace <= 0.0 {
            return numeric("density matrix has zero trace");
        }
        let support = Arc::new((0..basis.dim()).collect::<Vec<_>>());
        let components = clamped
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| Component {
                probability: p / trace,
                energy: f64::NAN,
                support: Arc::clone(&support),
                amplitudes: eig.vectors.column(k).iter().copied().collect(),
            })
            .collect();
        Ok(QuantumState { basis, kind: StateKind::Thermal, beta: None, components })
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Full amplitude vector of a pure state.
    pub fn amplitudes(&self) -> Option<Vec<C64>> {
        if self.kind != StateKind::Pure {
            return None;
        }
        let c = &self.components[0];
        let mut v = vec![C64::new(0.0, 0.0); self.basis.dim()];
        for (&i, &a) in c.support.iter().zip(&c.amplitudes) {
            v[i] = a;
        }
        Some(v)
    }

    /// Energy of a pure eigenstate, NaN otherwise.
    pub fn energy(&self) -> f64 {
        match self.kind {
            StateKind::Pure => self.components[0].energy,
            StateKind::Thermal => self.components.iter().map(|c| c.probability * c.energy).sum(),
        }
    }

    pub fn density_matrix(&self) -> DMatrix<C64> {
        let n = self.basis.dim();
        let mut rho = DMatrix::zeros(n, n);
        for c in &self.components {
            for (a, &i) in c.support.iter().enumerate() {
                for (b, &j) in c.support.iter().enumerate() {
                    rho[(i, j)] += c.amplitudes[a] * c.amplitudes[b].conj() * c.probability;
                }
            }
        }
        rho
    }

    /// `-Σ p ln p` over the spectral weights; valid for states built from
    /// orthonormal components (eigen-decompositions).
    pub fn von_neumann_entropy(&self) -> f64 {
        shannon_entropy(self.components.iter().map(|c| c.probability))
    }
}

/// Eigen-decomposition of one symmetry block.
#[derive(Debug, Clone)]
pub struct BlockSpectrum {
    pub support: Arc<Vec<usize>>,
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

/// Diagonalizes `h` block by block.
pub fn block_spectra(h: &HamiltonianMatrix) -> Result<Vec<BlockSpectrum>> {
    let dev = h.hermitian_deviation();
    if dev > 1e-12 {
        return validation(format!("matrix is not Hermitian (deviation {dev:e})"));
    }
    h.blocks()
        .into_iter()
        .map(|block| {
            let eig = eigh(&h.block_dense(&block))?;
            Ok(BlockSpectrum { support: Arc::new(block), values: eig.values, vectors: eig.vectors })
        })
        .collect()
}

/// All eigenvalues in ascending order.
pub fn eigenvalues(h: &HamiltonianMatrix) -> Result<Vec<f64>> {
    let mut all: Vec<f64> = block_spectra(h)?.into_iter().flat_map(|b| b.values).collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Lowest eigenvector of `h`.
///
/// Degenerate ground spaces are resolved deterministically: the first block
/// (by smallest basis index) attaining the minimum within `1e-12` relative,
/// then the solver's first eigenvector in that block, with its global phase
/// fixed so that the largest amplitude is real and positive.
pub fn ground_state(h: &HamiltonianMatrix) -> Result<QuantumState> {
    let spectra = block_spectra(h)?;
    let emin = spectra
        .iter()
        .filter_map(|b| b.values.first().copied())
        .fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * emin.abs().max(1.0);
    let chosen = spectra
        .iter()
        .find(|b| b.values.first().is_some_and(|&e| e <= emin + tol))
        .ok_or_else(|| Error::Numeric("empty spectrum".into()))?;

    let e0 = chosen.values[0];
    let mut amps: Vec<C64> = chosen.vectors.column(0).iter().copied().collect();
    canonicalize_phase(&mut amps);

    let mut full = vec![C64::new(0.0, 0.0); h.dimension()];
    for (&i, &a) in chosen.support.iter().zip(&amps) {
        full[i] = a;
    }
    let hv = h.apply(&full);
    let residual: f64 = hv
        .iter()
        .zip(&full)
        .map(|(a, b)| (a - b * e0).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = h.norm_bound().max(1.0);
    if residual > 1e-10 * scale {
        return numeric(format!(
            "ground-state residual {residual:e} exceeds 1e-10·‖H‖ = {:e}",
            1e-10 * scale
        ));
    }
    Ok(QuantumState {
        basis: Arc::clone(h.basis()),
        kind: StateKind::Pure,
        beta: None,
        components: vec![Component {
            probability: 1.0,
            energy: e0,
            support: Arc::clone(&chosen.support),
            amplitudes: amps,
        }],
    })
}

/// Gibbs state `e^{-βH}/Z` from the full spectrum.
pub fn thermal_state(h: &HamiltonianMatrix, beta: f64) -> Result<QuantumState> {
    if !(beta.is_finite() && beta > 0.0) {
        return validation(format!("beta must be positive and finite, got {beta}"));
    }
    let spectra = block_spectra(h)?;
    let emin = spectra
        .iter()
        .filter_map(|b| b.values.first().copied())
        .fold(f64::INFINITY, f64::min);
    let mut components = Vec::with_capacity(h.dimension());
    for block in &spectra {
        for (k, &e) in block.values.iter().enumerate() {
            let w = (-beta * (e - emin)).exp();
            if w > 0.0 {
                components.push(Component {
                    probability: w,
                    energy: e,
                    support: Arc::clone(&block.support),
                    amplitudes: block.vectors.column(k).iter().copied().collect(),
                });
            }
        }
    }
    let z: f64 = components.iter().map(|c| c.probability).sum();
    for c in &mut components {
        c.probability /= z;
    }
    Ok(QuantumState { basis: Arc::clone(h.basis()), kind: StateKind::Thermal, beta: Some(beta), components })
}

/// `Tr(ρ O)` for an arbitrary (not necessarily Hermitian) operator.
pub fn expectation_complex(state: &QuantumState, op: &HamiltonianMatrix) -> Result<C64> {
    if state.basis.as_ref() != op.basis.as_ref() {
        return validation(format!(
            "state dimension {} does not match operator dimension {}",
            state.basis.dim(),
            op.dimension()
        ));
    }
    let mut scratch = vec![C64::new(0.0, 0.0); op.dimension()];
    let mut total = C64::new(0.0, 0.0);
    for c in &state.components {
        for (&i, &a) in c.support.iter().zip(&c.amplitudes) {
            scratch[i] = a;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (&i, &a) in c.support.iter().zip(&c.amplitudes) {
            let hv: C64 = op.rows[i].iter().map(|&(j, h)| h * scratch[j]).sum();
            acc += a.conj() * hv;
        }
        total += acc * c.probability;
        for &i in c.support.iter() {
            scratch[i] = C64::new(0.0, 0.0);
        }
    }
    Ok(total)
}

/// `Tr(ρ O)` for a Hermitian observable.
pub fn expectation(state: &QuantumState, observable: &HamiltonianMatrix) -> Result<f64> {
    let z = expectation_complex(state, observable)?;
    if z.im.abs() > 1e-9 * z.re.abs().max(1.0) {
        return validation(format!(
            "observable is not Hermitian: expectation has imaginary part {:e}",
            z.im
        ));
    }
    Ok(z.re)
}

/// Reduced density matrix on `sites` (in the given order) as a dense matrix
/// over the local product basis, site `sites[0]` in the lowest digit.
pub fn reduced_density_matrix_dense(state: &QuantumState, sites: &[usize]) -> Result<DMatrix<C64>> {
    let basis = &state.basis;
    if sites.is_empty() || sites.len() > MAX_REDUCED_SITES {
        return validation(format!("site set must have 1..={MAX_REDUCED_SITES} sites"));
    }
    for (k, &s) in sites.iter().enumerate() {
        if s >= basis.n_sites() {
            return validation(format!("site {s} outside chain of {} sites", basis.n_sites()));
        }
        if sites[..k].contains(&s) {
            return validation(format!("site {s} listed twice"));
        }
    }
    let d = basis.local_dim();
    let sub_dim = d.pow(sites.len() as u32);
    let mut rho = DMatrix::<C64>::zeros(sub_dim, sub_dim);
    let mut groups: HashMap<u64, Vec<(usize, C64)>> = HashMap::new();
    for c in &state.components {
        groups.clear();
        for (&i, &a) in c.support.iter().zip(&c.amplitudes) {
            let code = basis.config(i);
            let mut sub = 0usize;
            let mut rest = code;
            let mut place = 1usize;
            for &s in sites {
                let occ = basis.occupation(code, s);
                sub += occ * place;
                place *= d;
                rest -= occ as u64 * basis.power(s);
            }
            groups.entry(rest).or_default().push((sub, a));
        }
        for g in groups.values() {
            for &(x, ax) in g {
                for &(y, ay) in g {
                    rho[(x, y)] += ax * ay.conj() * c.probability;
                }
            }
        }
    }
    Ok(rho)
}

/// Reduced state on `sites`, returned in spectral form.
pub fn reduced_density_matrix(state: &QuantumState, sites: &[usize]) -> Result<QuantumState> {
    let rho = reduced_density_matrix_dense(state, sites)?;
    let basis = Arc::new(Basis::full(sites.len(), state.basis.local_dim()));
    QuantumState::from_density_matrix(basis, &rho)
}

/// Equilibrium state of the (twisted) chain: ground state at `T = 0`, Gibbs
/// state otherwise.
pub fn equilibrium_state(spec: &SpinChainSpec) -> Result<QuantumState> {
    let h = build_twisted_hamiltonian(spec)?;
    match spec.beta() {
        None => ground_state(&h),
        Some(beta) => thermal_state(&h, beta),
    }
}

/// Spin-chain observables on the full spin-1/2 basis of `n` sites.
pub mod observables {
    use super::*;

    fn builder(n: usize) -> OperatorBuilder {
        OperatorBuilder::new(Arc::new(Basis::full(n, 2)))
    }

    pub fn pauli_product(n: usize, factors: &[(usize, Pauli)]) -> HamiltonianMatrix {
        let mut b = builder(n);
        b.pauli(factors, C64::new(1.0, 0.0));
        b.finish()
    }

    pub fn sigma_z(n: usize, site: usize) -> HamiltonianMatrix {
        pauli_product(n, &[(site, Pauli::Z)])
    }

    /// `Σ_i σz_i`.
    pub fn total_sigma_z(n: usize) -> HamiltonianMatrix {
        let mut b = builder(n);
        for s in 0..n {
            b.pauli(&[(s, Pauli::Z)], C64::new(1.0, 0.0));
        }
        b.finish()
    }

    /// `σ⁺_i σ⁻_j = b†_j b_i` for `i ≠ j`; on any basis.
    pub fn raise_lower(basis: &Arc<Basis>, i: usize, j: usize) -> HamiltonianMatrix {
        let mut b = OperatorBuilder::new(Arc::clone(basis));
        b.hop(i, j, C64::new(1.0, 0.0));
        b.finish()
    }

    /// `b†_i b_j`; on any basis.
    pub fn boson_hop(basis: &Arc<Basis>, i: usize, j: usize) -> HamiltonianMatrix {
        let mut b = OperatorBuilder::new(Arc::clone(basis));
        b.hop(j, i, C64::new(1.0, 0.0));
        b.finish()
    }

    /// Bond-averaged current `-(i/N_b) Σ (e^{iθ} σ⁺_i σ⁻_{i+1} - e^{-iθ} σ⁻_i σ⁺_{i+1})`.
    pub fn current(spec: &SpinChainSpec, theta: f64) -> HamiltonianMatrix {
        let mut b = builder(spec.n_sites);
        let bonds = spec.bonds();
        let scale = 1.0 / bonds.len() as f64;
        let phase = C64::from_polar(1.0, theta);
        let minus_i = C64::new(0.0, -scale);
        for (i, k) in bonds {
            b.hop(i, k, minus_i * phase);
            b.hop(k, i, -minus_i * phase.conj());
        }
        b.finish()
    }
}

/// Nearest-neighbour and transverse correlators of the equilibrium state,
/// evaluated by exact diagonalization. Bond `(0, 1)` and site 0 are used.
pub fn exact_correlators(spec: &SpinChainSpec, r_max: usize) -> Result<CorrelatorSet> {
    spec.validate_exact()?;
    let n = spec.n_sites;
    if r_max >= n {
        return validation(format!("r_max = {r_max} must be below n_sites = {n}"));
    }
    let state = equilibrium_state(spec)?;
    correlators_of_state(&state, spec, r_max)
}

/// Same as [`exact_correlators`] but for a state computed elsewhere.
pub fn correlators_of_state(state: &QuantumState, spec: &SpinChainSpec, r_max: usize) -> Result<CorrelatorSet> {
    use observables::*;
    let n = spec.n_sites;
    let xx = expectation(state, &pauli_product(n, &[(0, Pauli::X), (1, Pauli::X)]))?;
    let yy = expectation(state, &pauli_product(n, &[(0, Pauli::Y), (1, Pauli::Y)]))?;
    let zz = expectation(state, &pauli_product(n, &[(0, Pauli::Z), (1, Pauli::Z)]))?;
    let z = expectation(state, &sigma_z(n, 0))?;
    let basis = Arc::clone(state.basis());
    let profile = (1..=r_max)
        .map(|r| Ok((r, expectation_complex(state, &raise_lower(&basis, 0, r))?.re)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelatorSet {
        xx_nn: xx,
        yy_nn: yy,
        zz_nn: zz,
        z_single: z,
        transverse_profile: profile,
        source: CorrelatorSource::ExactDiag,
        temperature: spec.temperature,
        mu_over_j: spec.chem_potential / spec.coupling_j,
    })
}
