//! Witness verdicts checked against the partial-transpose test on exact
//! two-site reduced states.

use xxcrit::entanglement::{
    partial_transpose_min_eigenvalue, single_site_entropy, witness_energy_1d, witness_high_temperature,
    witness_superfluid,
};
use xxcrit::hilbert::{equilibrium_state, reduced_density_matrix_dense, SpinChainSpec};
use xxcrit::superfluid::superfluid_fraction_kinetic;
use xxcrit::{correlators, Solver};

#[test]
fn fired_witness_implies_npt_bond() {
    let mut fired = 0;
    for n in [4, 6, 8, 10] {
        for mu in [0.0, 0.3, 0.6, 0.9, 1.2] {
            for t in [0.0, 0.3, 1.0] {
                let spec = SpinChainSpec::new(n, 1.0, mu).with_temperature(t);
                let c = correlators(&spec, Solver::ExactDiag, 1).unwrap();
                let rho = reduced_density_matrix_dense(&equilibrium_state(&spec).unwrap(), &[0, 1]).unwrap();
                let npt = partial_transpose_min_eigenvalue(&rho).unwrap() < -1e-12;
                let fs = witness_superfluid(superfluid_fraction_kinetic(&c).unwrap());
                let e1 = witness_energy_1d(&c);
                assert_eq!(fs.fired, e1.fired, "n={n} mu={mu} t={t}");
                if fs.fired {
                    fired += 1;
                    assert!(npt, "witness fired on a PPT bond: n={n} mu={mu} t={t}");
                }
            }
        }
    }
    assert!(fired > 10);
}

#[test]
fn disc_witness_examples() {
    assert!(witness_high_temperature(0.0, 0.5, 1.0).unwrap().fired);
    let w = witness_high_temperature(0.8, 0.8, 1.0).unwrap();
    assert!(!w.fired && (w.margin + 0.28).abs() < 1e-12);
    assert!(witness_high_temperature(0.0, 0.5, 0.0).is_err());
}

#[test]
fn zero_temperature_equivalence_on_sweep() {
    for i in 0..=40 {
        let mu = 0.05 * i as f64;
        let c = correlators(&SpinChainSpec::new(2, 1.0, mu), Solver::Infinite, 0).unwrap();
        let s = single_site_entropy(c.z_single).unwrap();
        let fs = superfluid_fraction_kinetic(&c).unwrap();
        let below = mu < 1.0;
        assert_eq!(s > 1e-10, below, "mu={mu}");
        assert_eq!(fs > 1e-10, below, "mu={mu}");
    }
}
