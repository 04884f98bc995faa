use xxcrit::freefermion::{nn_correlators, FreeFermionChain};
use xxcrit::hilbert::{exact_correlators, Boundary, SpinChainSpec};

fn compare(spec: &SpinChainSpec, r_max: usize) -> f64 {
    let ed = exact_correlators(spec, r_max).unwrap();
    let ff = nn_correlators(&FreeFermionChain::finite(spec).unwrap(), r_max).unwrap();
    assert!((ed.xx_nn - ed.yy_nn).abs() < 1e-12);
    ed.max_abs_difference(&ff).unwrap()
}

#[test]
fn rings_match_exact_diagonalization() {
    for n in [4, 5, 6, 7, 8, 10, 12] {
        for mu in [0.0, 0.5, 0.9, 1.1] {
            for t in [0.0, 0.5] {
                let spec = SpinChainSpec::new(n, 1.0, mu).with_temperature(t);
                let d = compare(&spec, 5.min(n - 1));
                assert!(d < 1e-9, "n={n} mu={mu} T={t}: {d:e}");
            }
        }
    }
}

#[test]
fn reference_point_n10_mu_half_t_fifth() {
    let spec = SpinChainSpec::new(10, 1.0, 0.5).with_temperature(0.2);
    assert!(compare(&spec, 5) < 1e-9);
}

#[test]
fn open_and_twisted_chains_match() {
    for n in [5, 8] {
        let spec = SpinChainSpec::new(n, 1.0, 0.3).with_boundary(Boundary::Open);
        assert!(compare(&spec, n - 1) < 1e-9);
        assert!(compare(&spec.clone().with_temperature(0.7), n - 1) < 1e-9);
    }
    for t in [0.0, 0.4] {
        let spec = SpinChainSpec::new(8, 1.0, 0.2).with_twist(0.3).with_temperature(t);
        assert!(compare(&spec, 4) < 1e-9, "T={t}");
    }
}
