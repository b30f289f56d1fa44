//! Shared test support: a deterministic corpus of random admissible
//! states, and an adaptive-Simpson quadrature used as the independent
//! oracle for the closed-form time integrals.

use hsx::eulerian::EulerianTriple;
use hsx::pwl::{Atom, PiecewiseLinearFn};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn corpus_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random piecewise-linear state with `μ = ν`: a handful of kinks, the
/// matching cumulative energy, and up to three atoms.
pub fn random_d0_state(rng: &mut ChaCha8Rng) -> EulerianTriple {
    let n = rng.random_range(2..=9usize);
    let mut nodes = Vec::with_capacity(n);
    let mut x = rng.random_range(-3.0..-2.0);
    for _ in 0..n {
        nodes.push(x);
        x += rng.random_range(0.05..1.2);
    }
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5..1.5)).collect();
    let u = PiecewiseLinearFn::new(nodes.clone(), values).unwrap();
    let n_atoms = rng.random_range(0..=3usize);
    let (lo, hi) = (nodes[0], nodes[n - 1]);
    let atoms: Vec<Atom> = (0..n_atoms)
        .map(|_| Atom {
            x: rng.random_range(lo..hi),
            mass: rng.random_range(0.05..1.0),
        })
        .collect();
    let alpha = rng.random_range(0.0..0.95);
    EulerianTriple::from_u_and_atoms(alpha, u, atoms).unwrap()
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
}

fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (left, flm) = simpson(f, a, fa, m, fm);
    let (right, frm) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, fa, m, fm, left, flm, 0.5 * tol, depth - 1)
        + adaptive(f, m, fm, b, fb, right, frm, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature; the oracle against which the closed-form
/// integrals are verified. Independent of the solver code paths.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, fm) = simpson(&f, a, fa, b, fb);
    adaptive(&f, a, fa, b, fb, whole, fm, tol, 48)
}
