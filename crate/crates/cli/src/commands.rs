use std::collections::BTreeSet;
use std::f64::consts::LN_2;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use xxcrit::dim2::{
    energy_density_2d, ground_energy_density_2d, high_t_energy_asymptote, high_t_entanglement_threshold,
    witness_energy_2d, Dim2Spec, EnergyAccounting,
};
use xxcrit::entanglement::{
    concurrence_nn, concurrence_x_state, cut_entropy, single_site_entropy, witness_energy_1d,
    witness_high_temperature, witness_superfluid, WitnessReport,
};
use xxcrit::freefermion::{nn_correlators, FreeFermionChain};
use xxcrit::hilbert::observables::{boson_hop, raise_lower};
use xxcrit::hilbert::{
    build_bose_hubbard, build_xx_hamiltonian, eigenvalues, equilibrium_state, exact_correlators,
    expectation_complex, ground_state, reduced_density_matrix_dense, BoseHubbardSpec, Boundary, SpinChainSpec,
};
use xxcrit::linalg::{eigh, shannon_entropy};
use xxcrit::order::{boson_profile, coherent_product_state, correlation_profile, ghz_state};
use xxcrit::physunits::{experiment_report, PhysicalParams, QuotedValues};
use xxcrit::superfluid::{superfluid_fraction_kinetic, superfluid_report};
use xxcrit::{correlators, Solver, C64};

use crate::args::{ChainArgs, ExperimentArgs, SweepArgs};
use crate::error::{invalid, CliResult};
use crate::sweep::{run_sweep, SweepConfig};
use crate::table::{Cell, Table, SCHEMA_VERSION};

/// A finished computation: the JSON document and its flat table form.
pub struct Report {
    pub json: Value,
    pub table: Table,
    /// Extra JSON written next to a CSV file, with its file-name suffix.
    pub sidecar: Option<(&'static str, Value)>,
}

pub fn document(kind: &str, inputs: impl Serialize, result: impl Serialize) -> CliResult<Value> {
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "inputs": serde_json::to_value(inputs)?,
        "result": serde_json::to_value(result)?,
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainInputs {
    pub n_sites: Option<usize>,
    pub j: f64,
    pub mu: f64,
    pub temperature: f64,
    pub boundary: Boundary,
    pub solver: Solver,
}

/// Picks the solver and checks the request is consistent with it.
pub fn resolve_chain(chain: &ChainArgs, temperature: f64) -> CliResult<(SpinChainSpec, Solver, ChainInputs)> {
    let solver = match (chain.solver.as_str(), chain.n_sites) {
        ("auto", None) => Solver::Infinite,
        ("auto", Some(n)) => Solver::auto(n),
        (s, _) => s.parse()?,
    };
    match (solver, chain.n_sites) {
        (Solver::Infinite, Some(_)) => return invalid("--n-sites cannot be combined with the infinite solver"),
        (Solver::ExactDiag | Solver::FreeFermion, None) => return invalid(format!("solver {solver} needs --n-sites")),
        _ => {}
    }
    let boundary: Boundary = chain.boundary.into();
    if solver == Solver::Infinite && boundary == Boundary::Open {
        return invalid("the infinite chain has no boundary; drop --boundary open");
    }
    let spec = SpinChainSpec::new(chain.n_sites.unwrap_or(2), chain.j, chain.mu)
        .with_temperature(temperature)
        .with_boundary(boundary);
    if solver == Solver::ExactDiag {
        spec.validate_exact()?;
    } else {
        spec.validate()?;
    }
    let inputs = ChainInputs { n_sites: chain.n_sites, j: chain.j, mu: chain.mu, temperature, boundary, solver };
    Ok((spec, solver, inputs))
}

pub fn state_summary(chain: &ChainArgs, temperature: f64) -> CliResult<Report> {
    let (spec, solver, inputs) = resolve_chain(chain, temperature)?;
    let c = correlators(&spec, solver, 0)?;
    let energy_per_site = match solver {
        Solver::ExactDiag => Some(equilibrium_state(&spec)?.energy() / spec.n_sites as f64),
        Solver::Infinite => Some(-spec.coupling_j * (c.xx_nn + c.yy_nn) / 2.0 - spec.chem_potential * c.z_single),
        Solver::FreeFermion if spec.boundary == Boundary::Periodic => {
            let bonds_per_site = spec.bonds().len() as f64 / spec.n_sites as f64;
            Some(-spec.coupling_j * (c.xx_nn + c.yy_nn) / 2.0 * bonds_per_site - spec.chem_potential * c.z_single)
        }
        Solver::FreeFermion => None,
    };
    let entropy = single_site_entropy(c.z_single)?;
    let concurrence = concurrence_nn(&c)?;
    let concurrence_x = concurrence_x_state(&c)?;
    let result = json!({
        "energy_per_site": energy_per_site,
        "sigma_z": c.z_single,
        "entropy_nats": entropy,
        "entropy_bits": entropy / LN_2,
        "concurrence": concurrence,
        "concurrence_x_state": concurrence_x,
        "correlators": c,
    });
    let table = Table::key_values(vec![
        ("energy_per_site", Cell::opt(energy_per_site)),
        ("sigma_z", Cell::num(c.z_single)),
        ("xx_nn", Cell::num(c.xx_nn)),
        ("yy_nn", Cell::num(c.yy_nn)),
        ("zz_nn", Cell::num(c.zz_nn)),
        ("entropy_nats", Cell::num(entropy)),
        ("entropy_bits", Cell::num(entropy / LN_2)),
        ("concurrence", Cell::num(concurrence)),
        ("concurrence_x_state", Cell::num(concurrence_x)),
    ]);
    let kind = if temperature > 0.0 { "thermal" } else { "ground" };
    Ok(Report { json: document(kind, inputs, result)?, table, sidecar: None })
}

pub fn correlator_report(chain: &ChainArgs, temperature: f64, r_max: usize) -> CliResult<Report> {
    let (spec, solver, inputs) = resolve_chain(chain, temperature)?;
    let c = correlators(&spec, solver, r_max)?;
    let mut table = Table::new(&["quantity", "r", "value"]);
    for (name, r, v) in [("xx_nn", 1, c.xx_nn), ("yy_nn", 1, c.yy_nn), ("zz_nn", 1, c.zz_nn), ("z", 0, c.z_single)] {
        table.push(vec![Cell::text(name), Cell::Num(r as f64), Cell::num(v)]);
    }
    for &(r, v) in &c.transverse_profile {
        table.push(vec![Cell::text("transverse"), Cell::Num(r as f64), Cell::num(v)]);
    }
    let json = document("correlators", json!({ "chain": inputs, "r_max": r_max }), &c)?;
    Ok(Report { json, table, sidecar: None })
}

pub fn superfluid(chain: &ChainArgs, temperature: f64, theta: f64) -> CliResult<Report> {
    let (spec, solver, inputs) = resolve_chain(chain, temperature)?;
    let r = superfluid_report(&spec, theta, solver)?;
    let w = witness_superfluid(r.fs_kinetic);
    let table = Table::key_values(vec![
        ("fs_kinetic", Cell::num(r.fs_kinetic)),
        ("fs_curvature", Cell::opt(r.fs_curvature)),
        ("method_agreement", Cell::opt(r.method_agreement)),
        ("current", Cell::num(r.current)),
        ("twisted_current", Cell::num(r.twisted_current)),
        ("theta_used", Cell::num(r.theta_used)),
        ("critical", Cell::flag(r.critical)),
        ("fs_half_fired", Cell::flag(w.fired)),
        ("fs_half_margin", Cell::num(w.margin)),
    ]);
    let json = document("superfluid", json!({ "chain": inputs, "theta": theta }), json!({ "report": r, "witness": w }))?;
    Ok(Report { json, table, sidecar: None })
}

fn witness_table(ws: &[WitnessReport]) -> CliResult<Table> {
    let mut t = Table::new(&["witness_name", "fired", "margin"]);
    for w in ws {
        let name = serde_json::to_value(w.witness_name)?.as_str().unwrap_or_default().to_string();
        t.push(vec![Cell::Text(name), Cell::flag(w.fired), Cell::num(w.margin)]);
    }
    Ok(t)
}

pub fn witness(chain: &ChainArgs, temperature: f64) -> CliResult<Report> {
    let (spec, solver, inputs) = resolve_chain(chain, temperature)?;
    let c = correlators(&spec, solver, 0)?;
    let ws = vec![
        witness_superfluid(superfluid_fraction_kinetic(&c)?),
        witness_energy_1d(&c),
        witness_high_temperature(spec.chem_potential, spec.temperature, spec.coupling_j)?,
    ];
    Ok(Report { table: witness_table(&ws)?, json: document("witness", inputs, &ws)?, sidecar: None })
}

pub fn profile(chain: &ChainArgs, temperature: f64, r_max: usize) -> CliResult<Report> {
    let (spec, solver, inputs) = resolve_chain(chain, temperature)?;
    let p = correlation_profile(&spec, r_max, solver)?;
    let mut table = Table::new(&["r", "value"]);
    for &(r, v) in &p.points {
        table.push(vec![Cell::Num(r as f64), Cell::num(v)]);
    }
    let inputs = json!({ "chain": inputs, "r_max": r_max });
    let classification = json!({
        "classification": p.classification,
        "fit_poly": p.fit_poly,
        "fit_exp": p.fit_exp,
        "zero_signal": p.zero_signal,
    });
    let sidecar = document("profile_classification", &inputs, classification)?;
    Ok(Report { json: document("profile", &inputs, &p)?, table, sidecar: Some(("classification.json", sidecar)) })
}

pub fn sweep(args: &SweepArgs) -> CliResult<Report> {
    let temperature = args.temp;
    let cfg = if args.param == crate::args::SweepParam::JPerp {
        SweepConfig {
            swept_parameter: args.param,
            from: args.from,
            to: args.to,
            steps: args.steps,
            log_spacing: args.log,
            observables: args.observables.iter().copied().collect::<BTreeSet<_>>(),
            solver: Solver::Infinite,
            n_sites: 2,
            boundary: args.chain.boundary,
            j: args.chain.j,
            mu: args.chain.mu,
            temperature,
            theta: args.theta,
            j_perp: args.j_perp,
            quadrature_points: args.points,
        }
    } else {
        let (spec, solver, _) = resolve_chain(&args.chain, temperature)?;
        SweepConfig {
            swept_parameter: args.param,
            from: args.from,
            to: args.to,
            steps: args.steps,
            log_spacing: args.log,
            observables: args.observables.iter().copied().collect(),
            solver,
            n_sites: spec.n_sites,
            boundary: args.chain.boundary,
            j: spec.coupling_j,
            mu: spec.chem_potential,
            temperature,
            theta: args.theta,
            j_perp: args.j_perp,
            quadrature_points: args.points,
        }
    };
    let table = run_sweep(&cfg)?;
    Ok(Report { json: document("sweep", &cfg, &table)?, table, sidecar: None })
}

pub fn dim2(j: f64, j_perp: f64, beta: Option<f64>, points: usize) -> CliResult<Report> {
    let spec = Dim2Spec { j_parallel: j, j_perp, beta: beta.unwrap_or(f64::INFINITY), quadrature_points: points };
    let ground = ground_energy_density_2d(&spec)?;
    let (u, asymptote) = match beta {
        Some(_) => {
            let u = energy_density_2d(&spec)?;
            (u, Some(high_t_energy_asymptote(&spec)))
        }
        None => (ground, None),
    };
    let ratio = asymptote.map(|a| u / a);
    let threshold = high_t_entanglement_threshold(&spec);
    let per_site = witness_energy_2d(u, &spec, EnergyAccounting::PerSite);
    let doubled = witness_energy_2d(u, &spec, EnergyAccounting::PerBondDoubled);
    let table = Table::key_values(vec![
        ("u", Cell::num(u)),
        ("u_ground", Cell::num(ground)),
        ("high_t_asymptote", Cell::opt(asymptote)),
        ("ratio_to_asymptote", Cell::opt(ratio)),
        ("high_t_entanglement_threshold", Cell::num(threshold)),
        ("witness_per_site_fired", Cell::flag(per_site.fired)),
        ("witness_per_site_margin", Cell::num(per_site.margin)),
        ("witness_per_bond_doubled_fired", Cell::flag(doubled.fired)),
        ("witness_per_bond_doubled_margin", Cell::num(doubled.margin)),
    ]);
    let result = json!({
        "u": u,
        "u_ground": ground,
        "high_t_comparison": asymptote.map(|a| json!({
            "asymptote": a,
            "ratio": u / a,
            "relative_deviation": (u / a - 1.0).abs(),
        })),
        "high_t_entanglement_threshold": threshold,
        "witness": { "per_site": per_site, "per_bond_doubled": doubled },
    });
    let inputs = json!({ "j": j, "j_perp": j_perp, "beta": beta, "quadrature_points": points });
    Ok(Report { json: document("dim2", inputs, result)?, table, sidecar: None })
}

pub fn experiment(a: &ExperimentArgs) -> CliResult<Report> {
    let mut p = PhysicalParams::from_amu(a.mass_amu, a.spacing_m, a.temp_kelvin, a.mu_hz);
    p.density = a.density;
    p.scattering_length_m = a.scattering_length_m;
    p.quoted = QuotedValues {
        thermal_wavelength_m: a.quoted_lambda_m,
        disc_holds: a.quoted_disc_holds,
        single_site_entropy: a.quoted_entropy,
    };
    let r = experiment_report(&p)?;
    let mut table = Table::new(&["name", "inequality", "left", "right", "unit", "verdict"]);
    for c in &r.checks {
        let verdict = serde_json::to_value(c.verdict)?.as_str().unwrap_or_default().to_string();
        table.push(vec![
            Cell::text(&c.name),
            Cell::text(&c.inequality),
            Cell::opt(c.left),
            Cell::opt(c.right),
            Cell::text(&c.unit),
            Cell::Text(verdict),
        ]);
    }
    Ok(Report { json: document("experiment", &p, &r)?, table, sidecar: None })
}

pub fn counterexamples(ghz_sizes: &[usize], alpha: f64, n_max: usize, sites: usize) -> CliResult<Report> {
    let mut table = Table::new(&["state", "n_sites", "quantity", "value"]);
    let mut ghz = Vec::new();
    for &n in ghz_sizes {
        let g = ghz_state(n)?;
        let basis = Arc::clone(g.basis());
        let mut max_transverse: f64 = 0.0;
        let mut entropies = Vec::with_capacity(n);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                max_transverse = max_transverse.max(expectation_complex(&g, &raise_lower(&basis, i, j))?.norm());
            }
            entropies.push(shannon_entropy(eigh(&reduced_density_matrix_dense(&g, &[i])?)?.values));
        }
        let dev = entropies.iter().map(|s| (s - LN_2).abs()).fold(0.0, f64::max);
        table.push(vec![Cell::text("ghz"), Cell::Num(n as f64), Cell::text("max_transverse"), Cell::num(max_transverse)]);
        table.push(vec![Cell::text("ghz"), Cell::Num(n as f64), Cell::text("max_entropy_dev_ln2"), Cell::num(dev)]);
        ghz.push(json!({
            "n_sites": n,
            "max_transverse_correlator": max_transverse,
            "single_site_entropies": entropies,
            "max_entropy_deviation_from_ln2": dev,
        }));
    }
    let a = C64::new(alpha, 0.0);
    let coh = coherent_product_state(a, sites, n_max)?;
    let basis = Arc::clone(coh.basis());
    let target = a.norm_sqr();
    let mut odlro_dev: f64 = 0.0;
    for i in 0..sites {
        for j in (0..sites).filter(|&j| j != i) {
            let v = expectation_complex(&coh, &boson_hop(&basis, i, j))?;
            odlro_dev = odlro_dev.max((v - C64::new(target, 0.0)).norm());
        }
    }
    let cuts = (1..sites).map(|c| cut_entropy(&coh, c)).collect::<xxcrit::Result<Vec<_>>>()?;
    let max_cut = cuts.iter().map(|s| s.abs()).fold(0.0, f64::max);
    let n = Cell::Num(sites as f64);
    table.push(vec![Cell::text("coherent"), n.clone(), Cell::text("max_odlro_dev"), Cell::num(odlro_dev)]);
    table.push(vec![Cell::text("coherent"), n, Cell::text("max_cut_entropy"), Cell::num(max_cut)]);
    let result = json!({
        "ghz": ghz,
        "coherent": {
            "expected_hop": target,
            "profile": boson_profile(&coh)?,
            "max_hop_deviation": odlro_dev,
            "cut_entropies": cuts,
            "max_cut_entropy": max_cut,
        },
    });
    let inputs = json!({ "ghz_sizes": ghz_sizes, "alpha": alpha, "n_max": n_max, "coherent_sites": sites });
    Ok(Report { json: document("counterexamples", inputs, result)?, table, sidecar: None })
}

pub fn hardcore(n_sites: usize, bh_sites: usize, particles: usize, u: f64, n_max: usize) -> CliResult<Report> {
    let bh = |n: usize, n_max: usize, np: Option<usize>| BoseHubbardSpec {
        n_sites: n,
        coupling_j: 1.0,
        onsite_u: u,
        n_max,
        boundary: Boundary::Periodic,
        n_particles: np,
    };
    let xx = SpinChainSpec::new(n_sites, 1.0, 0.0);
    xx.validate_exact()?;
    let xx_spectrum = eigenvalues(&build_xx_hamiltonian(&xx)?)?;
    let hc_spectrum = eigenvalues(&build_bose_hubbard(&bh(n_sites, 1, None))?)?;
    if xx_spectrum.len() != hc_spectrum.len() {
        return Err(crate::error::CliError::Numeric("spectra differ in dimension".into()));
    }
    let spectrum_dev = xx_spectrum.iter().zip(&hc_spectrum).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let hop = |spec: &BoseHubbardSpec| -> xxcrit::Result<f64> {
        let h = build_bose_hubbard(spec)?;
        Ok(expectation_complex(&ground_state(&h)?, &boson_hop(h.basis(), 0, 1))?.re)
    };
    let soft = hop(&bh(bh_sites, n_max, Some(particles)))?;
    let hard = hop(&bh(bh_sites, 1, Some(particles)))?;
    let rel = (soft / hard - 1.0).abs();
    let table = Table::key_values(vec![
        ("spectrum_max_deviation", Cell::num(spectrum_dev)),
        ("hop_soft_core", Cell::num(soft)),
        ("hop_hard_core", Cell::num(hard)),
        ("relative_difference", Cell::num(rel)),
    ]);
    let inputs = json!({
        "n_sites": n_sites, "bh_sites": bh_sites, "particles": particles, "onsite_u": u, "n_max": n_max,
    });
    let result = json!({
        "spectrum_max_deviation": spectrum_dev,
        "spectrum_len": xx_spectrum.len(),
        "hop_soft_core": soft,
        "hop_hard_core": hard,
        "relative_difference": rel,
    });
    Ok(Report { json: document("hardcore", inputs, result)?, table, sidecar: None })
}

pub fn oracle(max_sites: usize, mus: &[f64], temps: &[f64], r_max: usize) -> CliResult<Report> {
    if !(2..=xxcrit::hilbert::MAX_EXACT_SITES).contains(&max_sites) {
        return invalid(format!("max-sites must be in 2..={}", xxcrit::hilbert::MAX_EXACT_SITES));
    }
    let grid: Vec<(usize, f64, f64)> = (2..=max_sites)
        .flat_map(|n| mus.iter().flat_map(move |&mu| temps.iter().map(move |&t| (n, mu, t))))
        .collect();
    let diffs = grid
        .par_iter()
        .map(|&(n, mu, t)| -> xxcrit::Result<f64> {
            let spec = SpinChainSpec::new(n, 1.0, mu).with_temperature(t);
            let r = r_max.min(n - 1);
            let ed = exact_correlators(&spec, r)?;
            let ff = nn_correlators(&FreeFermionChain::finite(&spec)?, r)?;
            Ok(ed.max_abs_difference(&ff).unwrap_or(f64::INFINITY))
        })
        .collect::<xxcrit::Result<Vec<_>>>()?;
    let mut table = Table::new(&["n_sites", "mu", "temperature", "max_abs_difference"]);
    for (&(n, mu, t), &d) in grid.iter().zip(&diffs) {
        table.push(vec![Cell::Num(n as f64), Cell::num(mu), Cell::num(t), Cell::num(d)]);
    }
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    let inputs = json!({ "max_sites": max_sites, "mus": mus, "temps": temps, "r_max": r_max });
    let json = document("oracle", inputs, json!({ "max_abs_difference": worst, "table": &table }))?;
    Ok(Report { json, table, sidecar: None })
}
