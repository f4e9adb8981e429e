#![allow(dead_code)]

use invlearn_core::lp::{LpProblem, DistanceSpec};
use invlearn_core::model::{ForwardInstance, LinearConstraint, ObservationSet, Sense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polytope inside the box `[0, 10]^n` with `m1` random relevant rows, all
/// slack at the box centre, so the region is full dimensional.
pub fn random_instance(r: &mut ChaCha8Rng, n: usize, m1: usize) -> ForwardInstance {
    let centre = vec![5.0; n];
    let mut rows = Vec::new();
    for j in 0..m1 {
        let a: Vec<f64> = loop {
            let a: Vec<f64> = (0..n).map(|_| (r.random_range(-10i32..=10) as f64) / 4.0).collect();
            if a.iter().filter(|v| **v != 0.0).count() >= 1 {
                break a;
            }
        };
        let slack = r.random_range(0.5..4.0);
        let b: f64 = a.iter().zip(&centre).map(|(x, y)| x * y).sum::<f64>() + slack;
        if r.random_bool(0.5) {
            rows.push(LinearConstraint::relevant(format!("r{j}"), a, Sense::Le, b));
        } else {
            let neg: Vec<f64> = a.iter().map(|v| -v).collect();
            rows.push(LinearConstraint::relevant(format!("r{j}"), neg, Sense::Ge, -b));
        }
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        rows.push(LinearConstraint::trivial(format!("lo{i}"), e.clone(), Sense::Ge, 0.0));
        rows.push(LinearConstraint::trivial(format!("hi{i}"), e, Sense::Le, 10.0));
    }
    ForwardInstance::with_dimension(n, rows).unwrap()
}

/// Observations scattered around the box centre, some outside the region.
pub fn random_observations(r: &mut ChaCha8Rng, n: usize, k: usize) -> ObservationSet {
    let rows = (0..k).map(|_| (0..n).map(|_| (r.random_range(0.0..10.0f64) * 4.0).round() / 4.0).collect()).collect();
    ObservationSet::new(n, rows).unwrap()
}

/// Random bounded LP over `[lo, hi]` boxes with a few random rows and a
/// feasible interior point.
pub fn random_lp(r: &mut ChaCha8Rng, n: usize, m: usize) -> LpProblem {
    let mut p = LpProblem::new();
    let x0: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
    for _ in 0..n {
        let lo = r.random_range(-5.0..-2.0);
        let hi = r.random_range(2.0..5.0);
        p.add_var(r.random_range(-3.0..3.0), lo, hi);
    }
    for _ in 0..m {
        let terms: Vec<(usize, f64)> = (0..n).map(|j| (j, r.random_range(-3.0..3.0))).collect();
        let lhs: f64 = terms.iter().map(|&(j, a)| a * x0[j]).sum();
        let cmp = match r.random_range(0..3) {
            0 => invlearn_core::lp::Cmp::Le,
            1 => invlearn_core::lp::Cmp::Ge,
            _ => invlearn_core::lp::Cmp::Eq,
        };
        let rhs = match cmp {
            invlearn_core::lp::Cmp::Le => lhs + r.random_range(0.0..2.0),
            invlearn_core::lp::Cmp::Ge => lhs - r.random_range(0.0..2.0),
            invlearn_core::lp::Cmp::Eq => lhs,
        };
        p.add_row(terms, cmp, rhs);
    }
    p
}

/// Smallest distance over a facet of a 2-D instance: dense samples along the
/// segment `hyperplane ∩ region`, then ternary refinement around the best
/// sample (the distance is convex along a line).
pub fn facet_grid_min(inst: &ForwardInstance, obs: &ObservationSet, spec: DistanceSpec, j: usize, step: f64) -> Option<f64> {
    let c = inst.relevant(j);
    let (a, b) = (&c.coeffs, c.rhs);
    let norm2 = a[0] * a[0] + a[1] * a[1];
    let p0 = [a[0] * b / norm2, a[1] * b / norm2];
    let len = norm2.sqrt();
    let dir = [-a[1] / len, a[0] / len];
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for row in inst.constraints() {
        // slack(p0 + t dir) = s0 + t * ds >= 0
        let n = row.outward_normal();
        let beta = row.outward_bound();
        let s0 = beta - (n[0] * p0[0] + n[1] * p0[1]);
        let ds = -(n[0] * dir[0] + n[1] * dir[1]);
        if ds.abs() < 1e-12 {
            if s0 < -1e-9 {
                return None;
            }
        } else if ds > 0.0 {
            lo = lo.max(-s0 / ds);
        } else {
            hi = hi.min(-s0 / ds);
        }
    }
    if lo > hi + 1e-9 {
        return None;
    }
    let eval = |t: f64| spec.evaluate(obs, &[p0[0] + t * dir[0], p0[1] + t * dir[1]]);
    let steps = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut best_t = lo;
    let mut best = eval(lo);
    for i in 0..=steps {
        let t = (lo + i as f64 * step).min(hi);
        let v = eval(t);
        if v < best {
            best = v;
            best_t = t;
        }
    }
    let (mut a_t, mut b_t) = ((best_t - step).max(lo), (best_t + step).min(hi));
    for _ in 0..100 {
        let m1 = a_t + (b_t - a_t) / 3.0;
        let m2 = b_t - (b_t - a_t) / 3.0;
        if eval(m1) <= eval(m2) {
            b_t = m2;
        } else {
            a_t = m1;
        }
    }
    Some(best.min(eval(0.5 * (a_t + b_t))))
}

pub fn tight_tol() -> f64 {
    1e-7
}
