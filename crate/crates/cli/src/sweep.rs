//! Grid sweeps: one row per grid point, computed in parallel and assembled
//! in index order.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use xxcrit::dim2::{energy_density_2d, ground_energy_density_2d, witness_energy_2d, Dim2Spec, EnergyAccounting};
use xxcrit::entanglement::{
    concurrence_nn, concurrence_x_state, single_site_entropy, witness_energy_1d, witness_high_temperature,
    witness_superfluid,
};
use xxcrit::freefermion::CorrelatorSet;
use xxcrit::hilbert::SpinChainSpec;
use xxcrit::superfluid::{superfluid_fraction_curvature, superfluid_current, superfluid_fraction_kinetic};
use xxcrit::{correlators, Solver};

use crate::args::{BoundaryArg, Observable, SweepParam};
use crate::error::{invalid, CliResult};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub swept_parameter: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log_spacing: bool,
    pub observables: BTreeSet<Observable>,
    pub solver: Solver,
    /// Ignored by the infinite solver and by `j_perp` sweeps.
    pub n_sites: usize,
    pub boundary: BoundaryArg,
    pub j: f64,
    pub mu: f64,
    pub temperature: f64,
    pub theta: f64,
    pub j_perp: f64,
    pub quadrature_points: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.steps < 2 {
            return invalid(format!("steps must be at least 2, got {}", self.steps));
        }
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return invalid(format!("need finite from < to, got {} and {}", self.from, self.to));
        }
        if self.log_spacing && self.from <= 0.0 {
            return invalid("geometric spacing needs from > 0");
        }
        if self.observables.is_empty() {
            return invalid("observables must not be empty");
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                match i {
                    0 => self.from,
                    _ if i == self.steps - 1 => self.to,
                    _ if self.log_spacing => self.from * (self.to / self.from).powf(t),
                    _ => self.from + t * (self.to - self.from),
                }
            })
            .collect()
    }

    fn param_name(&self) -> &'static str {
        match self.swept_parameter {
            SweepParam::Mu => "mu",
            SweepParam::Temperature => "temperature",
            SweepParam::Theta => "theta",
            SweepParam::JPerp => "j_perp",
        }
    }

    fn is_2d(&self) -> bool {
        self.swept_parameter == SweepParam::JPerp
    }

    fn observable_columns(&self, o: Observable) -> &'static [&'static str] {
        match o {
            Observable::FsKinetic => &["fs_kinetic"],
            Observable::FsCurvature => &["fs_curvature"],
            Observable::Entropy => &["entropy"],
            Observable::Concurrence => &["concurrence", "concurrence_x_state"],
            Observable::Correlators => &["xx_nn", "yy_nn", "zz_nn", "z"],
            Observable::Witnesses if self.is_2d() => &["energy_2d_margin"],
            Observable::Witnesses => &["fs_half_margin", "energy_1d_margin", "mu_T_disc_margin"],
            Observable::Current => &["current"],
        }
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["index".to_string(), self.param_name().to_string()];
        if self.is_2d() {
            cols.push("u_2d".into());
        }
        for &o in &self.observables {
            cols.extend(self.observable_columns(o).iter().map(|c| c.to_string()));
        }
        cols.push("status".into());
        cols
    }
}

fn obs_name(o: Observable) -> String {
    serde_json::to_value(o).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

struct Row {
    cells: Vec<Cell>,
    notes: Vec<String>,
}

impl Row {
    fn record(&mut self, name: &str, width: usize, values: xxcrit::Result<Vec<f64>>) {
        match values {
            Ok(v) => self.cells.extend(v.into_iter().map(Cell::num)),
            Err(e) => {
                self.cells.extend(std::iter::repeat_n(Cell::Null, width));
                self.notes.push(format!("{name}: {e}"));
            }
        }
    }
}

fn chain_point(cfg: &SweepConfig, x: f64) -> (SpinChainSpec, f64) {
    let mut spec = SpinChainSpec::new(cfg.n_sites, cfg.j, cfg.mu)
        .with_temperature(cfg.temperature)
        .with_boundary(cfg.boundary.into());
    let mut theta = cfg.theta;
    match cfg.swept_parameter {
        SweepParam::Mu => spec.chem_potential = x,
        SweepParam::Temperature => spec.temperature = x,
        SweepParam::Theta => theta = x,
        SweepParam::JPerp => unreachable!(),
    }
    (spec, theta)
}

fn evaluate_chain(cfg: &SweepConfig, x: f64, row: &mut Row) {
    let (spec, theta) = chain_point(cfg, x);
    let needs_corr = cfg.observables.iter().any(|o| {
        matches!(
            o,
            Observable::FsKinetic | Observable::Entropy | Observable::Concurrence | Observable::Correlators | Observable::Witnesses
        )
    });
    let corr: Option<xxcrit::Result<CorrelatorSet>> = needs_corr.then(|| correlators(&spec, cfg.solver, 0));
    let with_corr = |f: &dyn Fn(&CorrelatorSet) -> xxcrit::Result<Vec<f64>>| match corr.as_ref() {
        Some(Ok(c)) => f(c),
        Some(Err(e)) => Err(e.clone()),
        None => unreachable!(),
    };
    for &o in &cfg.observables {
        let width = cfg.observable_columns(o).len();
        let values = match o {
            Observable::FsKinetic => with_corr(&|c| Ok(vec![superfluid_fraction_kinetic(c)?])),
            Observable::FsCurvature => superfluid_fraction_curvature(&spec, theta, cfg.solver).map(|f| vec![f]),
            Observable::Entropy => with_corr(&|c| Ok(vec![single_site_entropy(c.z_single)?])),
            Observable::Concurrence => with_corr(&|c| Ok(vec![concurrence_nn(c)?, concurrence_x_state(c)?])),
            Observable::Correlators => with_corr(&|c| Ok(vec![c.xx_nn, c.yy_nn, c.zz_nn, c.z_single])),
            Observable::Witnesses => with_corr(&|c| {
                Ok(vec![
                    witness_superfluid(superfluid_fraction_kinetic(c)?).margin,
                    witness_energy_1d(c).margin,
                    witness_high_temperature(spec.chem_potential, spec.temperature, spec.coupling_j)?.margin,
                ])
            }),
            Observable::Current => superfluid_current(&spec, cfg.solver).map(|c| vec![c]),
        };
        row.record(&obs_name(o), width, values);
    }
}

fn evaluate_2d(cfg: &SweepConfig, x: f64, row: &mut Row) {
    let beta = if cfg.temperature > 0.0 { 1.0 / cfg.temperature } else { f64::INFINITY };
    let spec = Dim2Spec { j_parallel: cfg.j, j_perp: x, beta, quadrature_points: cfg.quadrature_points };
    let u = if cfg.temperature > 0.0 { energy_density_2d(&spec) } else { ground_energy_density_2d(&spec) };
    row.record("u_2d", 1, u.clone().map(|u| vec![u]));
    for &o in &cfg.observables {
        let width = cfg.observable_columns(o).len();
        if o == Observable::Witnesses {
            let w = u.clone().map(|u| vec![witness_energy_2d(u, &spec, EnergyAccounting::PerSite).margin]);
            row.record("witnesses", width, w);
        } else {
            row.cells.extend(std::iter::repeat_n(Cell::Null, width));
            row.notes.push(format!("{}: not defined for a j_perp sweep", obs_name(o)));
        }
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Table> {
    cfg.validate()?;
    let grid = cfg.grid();
    let rows: Vec<Row> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut row = Row { cells: vec![Cell::Num(i as f64), Cell::num(x)], notes: Vec::new() };
            if cfg.is_2d() {
                evaluate_2d(cfg, x, &mut row);
            } else {
                evaluate_chain(cfg, x, &mut row);
            }
            row
        })
        .collect();
    let mut table = Table { columns: cfg.columns(), rows: Vec::with_capacity(rows.len()) };
    for mut r in rows {
        let status = if r.notes.is_empty() { "ok".to_string() } else { r.notes.join("; ") };
        r.cells.push(Cell::Text(status));
        table.push(r.cells);
    }
    Ok(table)
}
