use num_complex::Complex64 as C64;
use proptest::prelude::*;

use super::{sym_direct, theta_direct};
use crate::theta::{ThetaEngine, ThetaParams};

fn eng() -> ThetaEngine {
    ThetaEngine::new(ThetaParams::default()).unwrap()
}

#[test]
fn theta00_at_origin() {
    // π^{1/4} / Γ(3/4)
    let want = 1.0864348112133082;
    assert!((theta_direct(0, 0, C64::new(0.0, 0.0), C64::new(0.0, 1.0)).re - want).abs() < 1e-15);
    assert!((eng().theta(0, 0, C64::new(0.0, 0.0)).unwrap().re - want).abs() < 1e-15);
}

#[test]
fn theta_at_other_moduli() {
    for tau in [C64::new(0.0, 0.5), C64::new(0.0, 2.0)] {
        let e = ThetaEngine::new(ThetaParams { tau, ..Default::default() }).unwrap();
        let z = C64::new(0.21, -0.13);
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let (x, y) = (e.theta(a, b, z).unwrap(), theta_direct(a, b, z, tau));
            assert!((x - y).norm() < 1e-13 * y.norm(), "{a}{b} τ={tau}");
        }
    }
}

proptest! {
    #[test]
    fn recurrence_matches_direct_sum(a in 0u8..2, b in 0u8..2, x in -1.0f64..1.0, y in -1.5f64..1.5) {
        let z = C64::new(x, y);
        let want = theta_direct(a, b, z, C64::new(0.0, 1.0));
        let got = eng().theta(a, b, z).unwrap();
        prop_assert!((got - want).norm() <= 1e-13 * want.norm().max(1e-3));
    }

    #[test]
    fn bracket_sym_matches_direct(x in -0.5f64..0.5, y in -0.3f64..0.3, ar in 0.0f64..0.5, k in 0usize..4) {
        let (z, a, eta) = (C64::new(x, y), C64::new(ar, 0.05), 0.1);
        let want = sym_direct(z, a, k, eta, C64::new(0.0, 1.0));
        let got = eng().bracket_sym(z, a, k, eta).unwrap();
        prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(1e-6));
    }

    #[test]
    fn sym_is_even_and_periodic(x in -0.5f64..0.5, y in -0.3f64..0.3, k in 1usize..4) {
        let e = eng();
        let (z, a) = (C64::new(x, y), C64::new(0.17, -0.02));
        let f = |z: C64| e.bracket_sym(z, a, k, 0.1).unwrap();
        let s = f(z).norm().max(1e-8);
        prop_assert!((f(-z) - f(z)).norm() < 1e-12 * s);
        prop_assert!((f(z + 1.0) - f(z)).norm() < 1e-12 * s);
    }

    #[test]
    fn w_coefficients_are_theta_ratios(a in 0usize..4, x in -0.5f64..0.5, y in -0.3f64..0.3) {
        let tau = C64::new(0.0, 1.0);
        let (p, q) = crate::theta::W_CHARS[a];
        let u = C64::new(x, y);
        let want = theta_direct(p, q, u, tau) / theta_direct(p, q, C64::new(0.2, 0.0), tau);
        let got = eng().coeff_wl(a, u, 0.2).unwrap();
        prop_assert!((got - want).norm() < 1e-12 * want.norm().max(1e-6));
    }
}
