//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; failures come back as `{"error": ...}`
//! so the page never has to catch a JavaScript exception.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use xxcrit::dim2::{energy_density_2d, ground_energy_density_2d, high_t_energy_asymptote, Dim2Spec};
use xxcrit::entanglement::{concurrence_nn, single_site_entropy};
use xxcrit::hilbert::SpinChainSpec;
use xxcrit::order::correlation_profile;
use xxcrit::superfluid::superfluid_fraction_kinetic;
use xxcrit::{correlators, Solver};

const MAX_STEPS: usize = 2001;
const MAX_R: usize = 256;

fn respond(r: xxcrit::Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn chain(mu: f64, temperature: f64) -> SpinChainSpec {
    SpinChainSpec::new(2, 1.0, mu).with_temperature(temperature)
}

/// Superfluid fraction, single-site entropy and concurrence of the infinite
/// chain on an evenly spaced μ/J grid.
#[wasm_bindgen]
pub fn mu_sweep(from: f64, to: f64, steps: usize, temperature: f64) -> String {
    respond((|| {
        if !(2..=MAX_STEPS).contains(&steps) || !(from < to) {
            return Err(xxcrit::Error::Validation(format!("need from < to and 2..={MAX_STEPS} steps")));
        }
        let (mut mu, mut fs, mut s, mut c) = (vec![], vec![], vec![], vec![]);
        for i in 0..steps {
            let m = from + (to - from) * i as f64 / (steps - 1) as f64;
            let set = correlators(&chain(m, temperature), Solver::Infinite, 0)?;
            mu.push(m);
            fs.push(superfluid_fraction_kinetic(&set)?);
            s.push(single_site_entropy(set.z_single)?);
            c.push(concurrence_nn(&set)?);
        }
        Ok(json!({ "mu": mu, "fs_kinetic": fs, "entropy": s, "concurrence": c }))
    })())
}

/// `|⟨σ⁺_0 σ⁻_r⟩|` for `r = 1..=r_max` with its decay classification.
#[wasm_bindgen]
pub fn decay_profile(mu: f64, temperature: f64, r_max: usize) -> String {
    respond((|| {
        if !(4..=MAX_R).contains(&r_max) {
            return Err(xxcrit::Error::Validation(format!("r_max must be in 4..={MAX_R}")));
        }
        let p = correlation_profile(&chain(mu, temperature), r_max, Solver::Infinite)?;
        Ok(json!({
            "r": p.points.iter().map(|q| q.0).collect::<Vec<_>>(),
            "value": p.points.iter().map(|q| q.1).collect::<Vec<_>>(),
            "classification": p.classification,
            "exponent": p.fit_poly.map(|f| f.parameter),
            "inverse_length": p.fit_exp.map(|f| f.parameter),
        }))
    })())
}

/// 2D energy density against temperature on a log grid, with its T = 0 value
/// and the high-temperature asymptote.
#[wasm_bindgen]
pub fn dim2_energy(j: f64, j_perp: f64, t_min: f64, t_max: f64, steps: usize) -> String {
    respond((|| {
        if !(2..=200).contains(&steps) || !(t_min > 0.0 && t_min < t_max) {
            return Err(xxcrit::Error::Validation("need 0 < t_min < t_max and 2..=200 steps".into()));
        }
        let ground = ground_energy_density_2d(&Dim2Spec::new(j, j_perp, 1.0))?;
        let (mut ts, mut u, mut asym) = (vec![], vec![], vec![]);
        for i in 0..steps {
            let t = t_min * (t_max / t_min).powf(i as f64 / (steps - 1) as f64);
            let spec = Dim2Spec::new(j, j_perp, 1.0 / t);
            ts.push(t);
            u.push(energy_density_2d(&spec)?);
            asym.push(high_t_energy_asymptote(&spec));
        }
        Ok(json!({ "temperature": ts, "u": u, "asymptote": asym, "ground": ground, "separable_bound": -(j + j_perp) / 2.0 }))
    })())
}
