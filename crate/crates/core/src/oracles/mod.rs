//! Independent reference computations used only by tests: direct theta series,
//! a midpoint-rule Sklyanin form, and chain traces by explicit index summation.

mod chain;
mod forms;
mod invariants;
mod series;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::model::Model;
use crate::params::ModelParams;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `Σ_{|n| <= 40} exp(πi(n+a/2)²τ + 2πi(n+a/2)(z+b/2))`, each term evaluated on its own.
pub fn theta_direct(a: u8, b: u8, z: C64, tau: C64) -> C64 {
    let (ha, hb) = (a as f64 / 2.0, b as f64 / 2.0);
    (-40..=40)
        .map(|n| {
            let m = n as f64 + ha;
            (PI * I * m * m * tau + 2.0 * PI * I * m * (z + hb)).exp()
        })
        .sum()
}

pub fn sym_direct(z: C64, a: C64, k: usize, eta: f64, tau: C64) -> C64 {
    (0..k)
        .map(|j| {
            let s = 2.0 * j as f64 * eta;
            theta_direct(1, 1, z + a + s, tau) * theta_direct(1, 1, -z + a + s, tau)
        })
        .product()
}

/// Sklyanin kernel `μ(z, z̄)` from the direct series.
pub fn kernel_direct(z: C64, two_l: usize, eta: f64, tau: C64) -> C64 {
    let w = z.conj();
    let num = theta_direct(1, 1, 2.0 * z, tau) * theta_direct(1, 1, 2.0 * w, tau);
    let den: C64 = (0..two_l + 2)
        .map(|j| {
            let c = (2.0 * j as f64 - two_l as f64 - 1.0) * eta;
            theta_direct(0, 0, z + w + c, tau) * theta_direct(0, 0, z - w + c, tau)
        })
        .product();
    num / den
}

/// `∫∫ conj(f) g μ` by the midpoint rule with `n × n` cells on `[0,1) × [0, Im τ)`.
pub fn form_midpoint(f: impl Fn(C64) -> C64, g: impl Fn(C64) -> C64, two_l: usize, eta: f64, tau: C64, n: usize) -> C64 {
    let ty = tau.im;
    let h = ty / (n * n) as f64;
    let mut acc = C64::new(0.0, 0.0);
    for ix in 0..n {
        for iy in 0..n {
            let z = C64::new((ix as f64 + 0.5) / n as f64, (iy as f64 + 0.5) * ty / n as f64);
            acc += f(z).conj() * g(z) * kernel_direct(z, two_l, eta, tau) * h;
        }
    }
    acc
}

pub fn model(n: usize, two_l: usize, r: usize) -> &'static Model {
    static CACHE: OnceLock<std::sync::Mutex<Vec<((usize, usize, usize), &'static Model)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut c = cache.lock().unwrap();
    if let Some((_, m)) = c.iter().find(|(k, _)| *k == (n, two_l, r)) {
        return m;
    }
    let m: &'static Model = Box::leak(Box::new(Model::new(ModelParams::new(n, two_l, r, 1)).unwrap()));
    c.push(((n, two_l, r), m));
    m
}
