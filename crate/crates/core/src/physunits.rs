//! SI conversions for cold-atom parameters and the resulting entanglement
//! checks. Constants are CODATA 2018 (h and k_B exact by SI definition).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::entanglement::{experiment_entropy_estimate, EntropyEstimate};
use crate::error::validation;
use crate::Result;

/// Planck constant, J s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant, J/K (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Atomic mass constant, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return validation(format!("{name} must be positive and finite, got {x}"));
    }
    Ok(())
}

/// An energy in joules with its `/h` frequency and `/ħ` angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    pub joules: f64,
    pub hz: f64,
    pub rad_per_s: f64,
}

impl Energy {
    pub fn from_joules(joules: f64) -> Self {
        Energy { joules, hz: joules / PLANCK, rad_per_s: joules / HBAR }
    }

    pub fn from_hz(hz: f64) -> Self {
        Self::from_joules(hz * PLANCK)
    }
}

/// `J = ħ²/(2 m a²)`.
pub fn hopping_from_physical(mass_kg: f64, spacing_m: f64) -> Result<Energy> {
    positive("mass", mass_kg)?;
    positive("spacing", spacing_m)?;
    Ok(Energy::from_joules(HBAR * HBAR / (2.0 * mass_kg * spacing_m * spacing_m)))
}

/// `λ_T = h/√(2π m k_B T)`.
pub fn thermal_wavelength(mass_kg: f64, temperature_k: f64) -> Result<f64> {
    positive("mass", mass_kg)?;
    positive("temperature", temperature_k)?;
    Ok(PLANCK / (2.0 * PI * mass_kg * BOLTZMANN * temperature_k).sqrt())
}

/// `a = 1/√(ρ s)`.
pub fn healing_length(density: f64, scattering_length_m: f64) -> Result<f64> {
    positive("density", density)?;
    positive("scattering length", scattering_length_m)?;
    Ok(1.0 / (density * scattering_length_m).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mass_kg: f64,
    /// Effective lattice spacing `a`.
    pub healing_length_m: f64,
    pub temperature_k: f64,
    /// Chemical potential as `μ/h`.
    pub mu_frequency_hz: f64,
    /// Used with `scattering_length_m` to recompute `a` as a cross-check.
    pub density: Option<f64>,
    pub scattering_length_m: Option<f64>,
    /// Reference values to compare against; each adds a discrepancy line
    /// when the computation disagrees.
    pub quoted: QuotedValues,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuotedValues {
    pub thermal_wavelength_m: Option<f64>,
    /// Claimed verdict of `μ² + (kT)² < J²`.
    pub disc_holds: Option<bool>,
    /// Claimed single-site entropy (base unstated).
    pub single_site_entropy: Option<f64>,
}

impl PhysicalParams {
    pub fn from_amu(mass_amu: f64, healing_length_m: f64, temperature_k: f64, mu_frequency_hz: f64) -> Self {
        PhysicalParams {
            mass_kg: mass_amu * ATOMIC_MASS_UNIT,
            healing_length_m,
            temperature_k,
            mu_frequency_hz,
            density: None,
            scattering_length_m: None,
            quoted: QuotedValues::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass_kg)?;
        positive("healing length", self.healing_length_m)?;
        if !(self.temperature_k.is_finite() && self.temperature_k >= 0.0) {
            return validation("temperature must be finite and non-negative");
        }
        if !self.mu_frequency_hz.is_finite() {
            return validation("μ/h must be finite");
        }
        for (name, v) in [("density", self.density), ("scattering length", self.scattering_length_m)] {
            if let Some(x) = v {
                positive(name, x)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    NotEvaluable,
    /// Only the threshold side is known.
    ThresholdOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub inequality: String,
    pub left: Option<f64>,
    pub right: Option<f64>,
    pub unit: String,
    pub verdict: Verdict,
    /// Both sides restated, e.g. in units of `J` or as frequencies.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub j_energy: Energy,
    pub mu_energy: Energy,
    pub thermal_energy: Energy,
    pub mu_over_j: f64,
    pub t_over_j: f64,
    pub thermal_wavelength_m: Option<f64>,
    pub thermal_wavelength_formula: String,
    pub healing_length_echo_m: f64,
    /// `1/√(ρ s)` when both inputs are given.
    pub healing_length_from_density_m: Option<f64>,
    pub entropy_estimate: EntropyEstimate,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<String>,
    pub constants_used: BTreeMap<String, f64>,
}

pub fn experiment_report(p: &PhysicalParams) -> Result<ExperimentReport> {
    p.validate()?;
    let j = hopping_from_physical(p.mass_kg, p.healing_length_m)?;
    let mu = Energy::from_hz(p.mu_frequency_hz);
    let kt = Energy::from_joules(BOLTZMANN * p.temperature_k);
    let mu_over_j = mu.joules / j.joules;
    let t_over_j = kt.joules / j.joules;
    let mut checks = Vec::new();
    let mut discrepancies = Vec::new();

    let left = mu.joules.powi(2) + kt.joules.powi(2);
    let right = j.joules.powi(2);
    let disc_holds = left < right;
    checks.push(Check {
        name: "mu_t_disc".into(),
        inequality: "μ² + (kT)² < J²".into(),
        left: Some(left),
        right: Some(right),
        unit: "J²".into(),
        verdict: if disc_holds { Verdict::Holds } else { Verdict::Fails },
        notes: vec![
            format!("in units of J²: {:.6} < 1", mu_over_j.powi(2) + t_over_j.powi(2)),
            format!("μ/h = {:.2} Hz, kT/h = {:.2} Hz, J/h = {:.2} Hz", mu.hz, kt.hz, j.hz),
        ],
    });
    if let Some(claim) = p.quoted.disc_holds {
        if claim != disc_holds {
            discrepancies.push(format!(
                "μ² + (kT)² < J² quoted as {}, computed {} (μ/J = {mu_over_j:.4}, T/J = {t_over_j:.4})",
                if claim { "holding" } else { "failing" },
                if disc_holds { "holding" } else { "failing" },
            ));
        }
    }

    let lambda = (p.temperature_k > 0.0).then(|| thermal_wavelength(p.mass_kg, p.temperature_k)).transpose()?;
    checks.push(Check {
        name: "thermal_wavelength".into(),
        inequality: "λ_T > a".into(),
        left: lambda,
        right: Some(p.healing_length_m),
        unit: "m".into(),
        verdict: match lambda {
            None => Verdict::NotEvaluable,
            Some(l) if l > p.healing_length_m => Verdict::Holds,
            Some(_) => Verdict::Fails,
        },
        notes: match lambda {
            None => vec!["T = 0: λ_T undefined".into()],
            Some(l) => vec![format!("λ_T/a = {:.4}", l / p.healing_length_m)],
        },
    });
    if let (Some(q), Some(l)) = (p.quoted.thermal_wavelength_m, lambda) {
        if ((q - l) / l).abs() > 0.02 {
            discrepancies.push(format!("λ_T quoted as {q:.3e} m, computed {l:.3e} m from h/√(2π m k_B T)"));
        }
    }

    let threshold = Energy::from_joules(PLANCK * PLANCK / (2.0 * p.mass_kg * p.healing_length_m.powi(2)));
    checks.push(Check {
        name: "continuum_energy".into(),
        inequality: "⟨H⟩ < h²/(2 m a²)".into(),
        left: None,
        right: Some(threshold.joules),
        unit: "J".into(),
        verdict: Verdict::ThresholdOnly,
        notes: vec![format!("threshold = {:.2} Hz = {:.4} J_hop", threshold.hz, threshold.joules / j.joules)],
    });

    let entropy_estimate = experiment_entropy_estimate(mu_over_j)?;
    if let Some(q) = p.quoted.single_site_entropy {
        if (q - entropy_estimate.nats).abs() > 0.01 && (q - entropy_estimate.bits).abs() > 0.01 {
            discrepancies.push(format!(
                "single-site entropy quoted as {q}, computed {:.4} nats / {:.4} bits{}",
                entropy_estimate.nats,
                entropy_estimate.bits,
                if entropy_estimate.saturated { " (|μ/J| > 1: saturated)" } else { "" },
            ));
        }
    }

    let healing_length_from_density_m = match (p.density, p.scattering_length_m) {
        (Some(rho), Some(s)) => Some(healing_length(rho, s)?),
        _ => None,
    };

    let constants_used = [
        ("planck_J_s", PLANCK),
        ("hbar_J_s", HBAR),
        ("boltzmann_J_per_K", BOLTZMANN),
        ("atomic_mass_unit_kg", ATOMIC_MASS_UNIT),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();

    Ok(ExperimentReport {
        j_energy: j,
        mu_energy: mu,
        thermal_energy: kt,
        mu_over_j,
        t_over_j,
        thermal_wavelength_m: lambda,
        thermal_wavelength_formula: "λ_T = h/√(2π m k_B T)".into(),
        healing_length_echo_m: p.healing_length_m,
        healing_length_from_density_m,
        entropy_estimate,
        checks,
        discrepancies,
        constants_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rb87() -> PhysicalParams {
        PhysicalParams::from_amu(87.0, 0.2e-6, 150e-9, 10e3)
    }

    #[test]
    fn hopping_fixture() {
        let j = hopping_from_physical(87.0 * ATOMIC_MASS_UNIT, 0.2e-6).unwrap();
        assert!((j.hz - 1452.2385).abs() < 0.01);
        let j2 = hopping_from_physical(87.0 * ATOMIC_MASS_UNIT, 0.4e-6).unwrap();
        assert!((j.joules / j2.joules - 4.0).abs() < 1e-12);
        let j3 = hopping_from_physical(174.0 * ATOMIC_MASS_UNIT, 0.2e-6).unwrap();
        assert!((j.joules / j3.joules - 2.0).abs() < 1e-12);
        assert!(hopping_from_physical(0.0, 1.0).is_err());
    }

    #[test]
    fn wavelength_fixture() {
        let m = 87.0 * ATOMIC_MASS_UNIT;
        let l = thermal_wavelength(m, 150e-9).unwrap();
        assert!((l - 4.83275e-7).abs() < 5e-11);
        assert!((thermal_wavelength(m, 600e-9).unwrap() * 2.0 - l).abs() < 1e-20);
        let c = l * 150e-9f64.sqrt();
        for t in [50e-9, 100e-9, 200e-9] {
            assert!((thermal_wavelength(m, t).unwrap() * t.sqrt() / c - 1.0).abs() < 1e-14);
        }
        assert!(thermal_wavelength(m, 0.0).is_err());
    }

    #[test]
    fn healing_fixture() {
        assert!((healing_length(25e12, 1.0).unwrap() - 0.2e-6).abs() < 1e-20);
        assert!((healing_length(4.0 * 25e12, 1.0).unwrap() - 0.1e-6).abs() < 1e-20);
    }

    #[test]
    fn scale_invariant_round_trip() {
        let ratios = |rho: f64, s: f64| {
            let a = healing_length(rho, s).unwrap();
            let r = experiment_report(&PhysicalParams { healing_length_m: a, ..rb87() }).unwrap();
            (r.mu_over_j, r.t_over_j)
        };
        let (m1, t1) = ratios(5e13, 0.5);
        let (m2, t2) = ratios(5e13 * 9.0, 0.5 / 9.0);
        assert!((m1 / m2 - 1.0).abs() < 1e-12 && (t1 / t2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_for_rubidium() {
        let mut p = rb87();
        p.quoted = QuotedValues { thermal_wavelength_m: Some(0.3e-6), disc_holds: Some(true), single_site_entropy: Some(0.33) };
        let r = experiment_report(&p).unwrap();
        assert!((r.j_energy.hz / 1452.2385 - 1.0).abs() < 1e-4);
        assert!((r.thermal_energy.hz / 3125.49 - 1.0).abs() < 1e-4);
        assert!((r.mu_over_j - 6.886).abs() < 1e-3);
        let disc = &r.checks[0];
        assert_eq!(disc.verdict, Verdict::Fails);
        assert!(disc.left.unwrap() > disc.right.unwrap());
        assert_eq!(r.checks[1].verdict, Verdict::Holds);
        assert_eq!(r.checks[2].verdict, Verdict::ThresholdOnly);
        assert!(r.entropy_estimate.saturated);
        assert_eq!(r.discrepancies.len(), 3);
    }

    #[test]
    fn zero_temperature_not_evaluable() {
        let r = experiment_report(&PhysicalParams { temperature_k: 0.0, ..rb87() }).unwrap();
        assert_eq!(r.checks[1].verdict, Verdict::NotEvaluable);
        assert_eq!(r.thermal_wavelength_m, None);
    }
}
