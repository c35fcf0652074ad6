use num_complex::Complex64 as C64;

use super::{form_midpoint, model, sym_direct};
use crate::repspace::{omega_form_closed, sym_form_closed};

const TAU: C64 = C64 { re: 0.0, im: 1.0 };
const CELLS: usize = 96;

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn sym_form_closed_matches_midpoint_rule() {
    for two_l in [1usize, 2] {
        let eta = 0.1;
        let eng = &model(2, two_l, 5).engine;
        for (al, ga) in [(C64::new(0.13, 0.02), C64::new(-0.31, 0.05)), (C64::new(0.4, -0.06), C64::new(0.22, 0.0))] {
            let q = form_midpoint(|z| sym_direct(z, al, two_l, eta, TAU), |z| sym_direct(z, ga, two_l, eta, TAU), two_l, eta, TAU, CELLS);
            let c = sym_form_closed(eng, al, ga, two_l, eta).unwrap();
            assert!(rel(c, q) < 1e-8, "2l={two_l}: closed {c} quadrature {q}");
        }
    }
}

#[test]
fn omega_form_closed_matches_midpoint_rule() {
    let m = model(2, 2, 4);
    let (eta, l) = (m.eta(), 1.0);
    let (lam, lam_p, u, u_p) = (C64::new(0.3, 0.01), C64::new(-0.2, 0.03), C64::new(0.11, -0.02), C64::new(0.07, 0.04));
    for (sg, sg_p) in [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        let (v, v_p) = (C64::new(0.09, 0.0), C64::new(0.05, -0.01));
        let a = (sg * lam - u.conj() - sg * v) / 2.0 + (1.0 - l) * eta;
        let b = (sg_p * lam_p + u_p - sg_p * v_p) / 2.0 + (1.0 - l) * eta;
        let q = form_midpoint(|z| sym_direct(z, a, 2, eta, TAU), |z| sym_direct(z, b, 2, eta, TAU), 2, eta, TAU, CELLS);
        let c = omega_form_closed(&m.engine, 2, eta, (sg, lam, u, v), (sg_p, lam_p, u_p, v_p)).unwrap();
        assert!(rel(c, q) < 1e-8, "σ={sg},{sg_p}: closed {c} quadrature {q}");
    }
}

#[test]
fn gram_matrix_matches_midpoint_rule() {
    for two_l in [1usize, 2] {
        let m = model(2, two_l, 4 + two_l % 2);
        let eta = m.eta();
        let shifts = &m.basis.shifts;
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let (a, b) = (C64::new(shifts[i], 0.0), C64::new(shifts[j], 0.0));
                let q = form_midpoint(|z| sym_direct(z, a, two_l, eta, TAU), |z| sym_direct(z, b, two_l, eta, TAU), two_l, eta, TAU, CELLS);
                let g = m.gram()[(i, j)];
                assert!((g - q).norm() < 1e-8 * m.gram().norm(), "2l={two_l} ({i},{j}): {g} vs {q}");
            }
        }
    }
}
