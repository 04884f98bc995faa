use serde_json::Value;
use xxcrit_web::{decay_profile, dim2_energy, mu_sweep};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn sweep_vanishes_past_critical_point() {
    let v = parse(mu_sweep(0.0, 2.0, 21, 0.0));
    let mu = v["mu"].as_array().unwrap();
    let fs = v["fs_kinetic"].as_array().unwrap();
    assert_eq!(mu.len(), 21);
    assert!((fs[0].as_f64().unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-9);
    for (m, f) in mu.iter().zip(fs) {
        if m.as_f64().unwrap() >= 1.0 {
            assert!(f.as_f64().unwrap() <= 1e-10);
        }
    }
}

#[test]
fn profile_classifies() {
    let v = parse(decay_profile(0.0, 0.0, 64));
    assert_eq!(v["classification"], "quasi_long_range");
    assert!((v["exponent"].as_f64().unwrap() - 0.5).abs() < 0.05);
    assert_eq!(parse(decay_profile(1.2, 0.0, 64))["classification"], "short_range");
}

#[test]
fn dim2_curve() {
    let v = parse(dim2_energy(1.0, 1.0, 0.1, 100.0, 10));
    let u = v["u"].as_array().unwrap();
    let a = v["asymptote"].as_array().unwrap();
    let (u_hot, a_hot) = (u[9].as_f64().unwrap(), a[9].as_f64().unwrap());
    assert!((u_hot / a_hot - 1.0).abs() < 1e-3);
    assert!((v["ground"].as_f64().unwrap() + 0.479045699341425).abs() < 1e-12);
}

#[test]
fn errors_are_json() {
    assert!(parse(mu_sweep(1.0, 0.0, 10, 0.0))["error"].is_string());
    assert!(parse(decay_profile(0.0, 0.0, 10_000))["error"].is_string());
    assert!(parse(dim2_energy(1.0, 1.0, 0.0, 1.0, 5))["error"].is_string());
}
