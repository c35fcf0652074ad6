use num_complex::Complex64 as C64;
use proptest::prelude::*;

use super::model;
use crate::config::{MethodSel, RunConfig};
use crate::lattice::transfer_matrix;
use crate::linalg::{commutator, rel_diff};
use crate::qfabricius::DiffSystem;
use crate::qverify::{self, Construction, Method};
use crate::report::{ParamSnapshot, Report, ReportFile};

fn spectral() -> impl Strategy<Value = C64> {
    (-0.45f64..0.45, -0.08f64..0.08).prop_map(|(x, y)| C64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn h_coefficients_swap_under_reflection(u in spectral()) {
        prop_assert!(qverify::h_conj_residual(model(3, 2, 4), u).unwrap() < 1e-12);
    }

    #[test]
    fn transfer_matrices_commute(u in spectral(), v in spectral()) {
        let m = model(2, 2, 4);
        let (a, b) = (transfer_matrix(m, u).unwrap(), transfer_matrix(m, v).unwrap());
        prop_assert!(commutator(&a, &b).norm() < 1e-10 * a.norm() * b.norm());
    }

    #[test]
    fn transfer_adjoint_law(u in spectral()) {
        prop_assert!(qverify::t_adjoint_residual(model(3, 2, 4), u).unwrap() < 1e-8);
    }

    #[test]
    fn baxter_tq(u in spectral()) {
        let m = model(3, 2, 4);
        let c = Construction::new(m, Method::Baxter).unwrap();
        prop_assert!(qverify::tq_residual(m, &c, u).unwrap() < 1e-7);
        prop_assert!(qverify::qt_residual(m, &c, u).unwrap() < 1e-7);
    }

    #[test]
    fn fabricius_tq_and_period(u in spectral()) {
        let m = model(2, 2, 4);
        let c = Construction::new(m, Method::Fabricius).unwrap();
        prop_assert!(qverify::tq_residual(m, &c, u).unwrap() < 1e-7);
        prop_assert!(rel_diff(&c.qr(m, u + 2.0).unwrap(), &c.qr(m, u).unwrap()) < 1e-10);
    }

    #[test]
    fn lemma_products_and_compatibility(u in spectral(), v in spectral()) {
        let sys = DiffSystem::new(model(2, 2, 4), u, v);
        let [a, b] = sys.lemma_residuals().unwrap();
        prop_assert!(a < 1e-9 && b < 1e-9);
        prop_assert!(sys.compatibility_residual().unwrap() < 1e-10);
    }

    #[test]
    fn pass_flag_is_strict_comparison(res in 0.0f64..2.0, tol in 0.0f64..2.0) {
        let p = ParamSnapshot { n: 2, two_l: 1, r: 5, r_prime: 1, eta: 0.2, method: None };
        prop_assert_eq!(Report::new("x", "y", res, tol, p).pass, res < tol);
    }

    #[test]
    fn report_json_round_trip(res in proptest::option::of(-1e3f64..1e3), secs in 0.0f64..10.0) {
        let p = ParamSnapshot { n: 3, two_l: 2, r: 4, r_prime: 1, eta: 0.125, method: Some("baxter".into()) };
        let rec = match res {
            Some(x) => Report::new("a.b", "α = β", x, 1e-7, p),
            None => Report::failed("a.c", "γ", 1e-7, p, "degenerate".into()),
        }
        .timed(secs);
        let f = ReportFile::new(vec![rec]);
        let back: ReportFile = serde_json::from_str(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn config_round_trip(n in 1usize..4, r in 3usize..9, seed in any::<u64>()) {
        let mut c = RunConfig::new(2 * n, 1, r, 1, MethodSel::Both);
        c.seed = seed;
        if c.validate().is_ok() {
            prop_assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
        }
    }
}
