use proptest::prelude::*;

use xxcrit::dim2::{energy_density_2d, ground_energy_density_2d, Dim2Spec};
use xxcrit::entanglement::{concurrence_nn, concurrence_x_state, single_site_entropy, witness_superfluid};
use xxcrit::hilbert::SpinChainSpec;
use xxcrit::order::{DecayProfile, OrderClass};
use xxcrit::superfluid::{superfluid_fraction_curvature, superfluid_fraction_kinetic, DEFAULT_THETA};
use xxcrit::{correlators, Solver};

fn chain(mu: f64, t: f64) -> SpinChainSpec {
    SpinChainSpec::new(2, 1.0, mu).with_temperature(t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_symmetric_bounded_monotone(z in -1.0f64..=1.0, dz in 0.0f64..0.5) {
        let s = single_site_entropy(z).unwrap();
        prop_assert_eq!(s, single_site_entropy(-z).unwrap());
        prop_assert!((0.0..=std::f64::consts::LN_2 + 1e-15).contains(&s));
        let outer = (z.abs() + dz).min(1.0);
        prop_assert!(single_site_entropy(outer).unwrap() <= s + 1e-15);
    }

    #[test]
    fn witness_fires_iff_margin_positive(fs in 0.0f64..1.0) {
        let w = witness_superfluid(fs);
        prop_assert_eq!(w.fired, w.margin > 0.0);
        prop_assert_eq!(w.fired, fs > 0.5);
    }

    #[test]
    fn particle_hole_symmetry(mu in -2.0f64..2.0, t in 0.0f64..2.0) {
        let a = correlators(&chain(mu, t), Solver::Infinite, 3).unwrap();
        let b = correlators(&chain(-mu, t), Solver::Infinite, 3).unwrap();
        prop_assert!((a.z_single + b.z_single).abs() < 1e-9);
        prop_assert!((a.xx_nn - b.xx_nn).abs() < 1e-9);
        prop_assert!((a.zz_nn - b.zz_nn).abs() < 1e-9);
    }

    #[test]
    fn concurrences_bounded(mu in -2.0f64..2.0, t in 0.0f64..2.0) {
        let c = correlators(&chain(mu, t), Solver::Infinite, 0).unwrap();
        let spec_form = concurrence_nn(&c).unwrap();
        let x_state = concurrence_x_state(&c).unwrap();
        prop_assert!((0.0..=1.0).contains(&spec_form));
        prop_assert!((0.0..=1.0).contains(&x_state));
        prop_assert!(spec_form <= x_state + 1e-12);
    }

    #[test]
    fn decay_classifier_power_law(p in 0.4f64..1.8, c in 0.05f64..2.0) {
        let pts = (1..=64).map(|r| (r, c * (r as f64).powf(-p))).collect();
        let d = DecayProfile::classify(pts).unwrap();
        prop_assert_eq!(d.classification, OrderClass::QuasiLongRange);
        prop_assert!((d.fit_poly.unwrap().parameter - p).abs() < 1e-9);
    }

    #[test]
    fn decay_classifier_exponential(xi in 1.0f64..8.0, c in 0.05f64..2.0) {
        let pts = (1..=64).map(|r| (r, c * (-(r as f64) / xi).exp())).collect();
        prop_assert_eq!(DecayProfile::classify(pts).unwrap().classification, OrderClass::ShortRange);
    }

    #[test]
    fn decay_classifier_plateau(c in 0.05f64..2.0, eps in 0.0f64..1e-3) {
        let pts = (1..=64).map(|r| (r, c * (1.0 + eps * (r as f64).sin()))).collect();
        prop_assert_eq!(DecayProfile::classify(pts).unwrap().classification, OrderClass::LongRangeOrder);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kinetic_is_twice_curvature(mu in -0.95f64..0.95, t in 0.0f64..1.5) {
        let spec = chain(mu, t);
        let kin = superfluid_fraction_kinetic(&correlators(&spec, Solver::Infinite, 0).unwrap()).unwrap();
        let curv = superfluid_fraction_curvature(&spec, DEFAULT_THETA, Solver::Infinite).unwrap();
        prop_assert!((kin - 2.0 * curv).abs() < 1e-6 * kin.max(1e-3));
    }

    #[test]
    fn dim2_symmetric_and_bounded(j in 0.1f64..2.0, jp in 0.1f64..2.0, beta in 0.05f64..20.0) {
        let u = energy_density_2d(&Dim2Spec::new(j, jp, beta)).unwrap();
        prop_assert!((u - energy_density_2d(&Dim2Spec::new(jp, j, beta)).unwrap()).abs() < 1e-11);
        let u0 = ground_energy_density_2d(&Dim2Spec::new(j, jp, beta)).unwrap();
        prop_assert!(u0 <= u && u < 0.0);
    }
}
