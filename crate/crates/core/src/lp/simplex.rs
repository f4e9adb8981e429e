//! Bounded-variable revised simplex with an explicit dense basis inverse.
//!
//! Pricing is Dantzig's largest reduced cost; after a run of degenerate
//! pivots the solver switches to Bland's smallest-index rule until the
//! objective moves again, which rules out cycling.

use alloc::vec;
use alloc::vec::Vec;

use super::{Cmp, LpError, LpOptions, LpProblem, LpResult, LpStatus};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free column held at zero.
    Zero,
}

struct Tableau {
    m: usize,
    /// Sparse columns: structurals, then one slack per row, then one artificial per row.
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    binv: Vec<Vec<f64>>,
    opts: LpOptions,
    iterations: usize,
    max_iterations: usize,
    pivots_since_refactor: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

pub fn solve_lp_with(p: &LpProblem, opts: &LpOptions) -> Result<LpResult, LpError> {
    p.check()?;
    let n = p.num_vars();
    let m = p.num_rows();
    for j in 0..n {
        if p.lower[j] > p.upper[j] + opts.feasibility_tol {
            return Ok(infeasible(n, m));
        }
    }

    let mut t = Tableau::new(p, opts);
    let b_scale = 1.0 + t.rhs.iter().fold(0.0f64, |s, v| s.max(v.abs()));

    let mut phase1 = vec![0.0; t.cols.len()];
    for c in phase1.iter_mut().skip(n + m) {
        *c = 1.0;
    }
    t.run(&phase1)?;
    t.refactor()?;
    let infeas: f64 = (n + m..n + 2 * m).map(|j| t.x[j].abs()).sum();
    if infeas > opts.feasibility_tol * b_scale {
        return Ok(LpResult { iterations: t.iterations, ..infeasible(n, m) });
    }
    for j in n + m..n + 2 * m {
        t.upper[j] = 0.0;
        if t.state[j] != VarState::Basic {
            t.x[j] = 0.0;
        }
    }

    let phase1_iterations = t.iterations;
    let mut phase2 = vec![0.0; t.cols.len()];
    phase2[..n].copy_from_slice(&p.costs);
    let end = t.run(&phase2)?;
    if let PhaseEnd::Unbounded = end {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            x: t.x[..n].to_vec(),
            objective: f64::NEG_INFINITY,
            duals: vec![0.0; m],
            reduced_costs: vec![0.0; n],
            iterations: t.iterations,
        });
    }
    log::trace!("simplex: {phase1_iterations} phase-1 of {} iterations, m = {m}, n = {n}", t.iterations);
    t.refactor()?;
    // Snap nonbasic columns and tiny basic bound violations.
    for j in 0..t.cols.len() {
        if t.state[j] == VarState::Basic {
            t.x[j] = t.x[j].clamp(t.lower[j], t.upper[j]);
        }
    }
    let y = t.duals(&phase2);
    let reduced: Vec<f64> = (0..n).map(|j| phase2[j] - t.col_dot(j, &y)).collect();
    let x = t.x[..n].to_vec();
    if p.max_violation(&x) > opts.feasibility_tol * b_scale * 10.0 {
        return Err(LpError::NumericalFailure { iterations: t.iterations });
    }
    Ok(LpResult {
        status: LpStatus::Optimal,
        objective: p.objective_at(&x),
        x,
        duals: y,
        reduced_costs: reduced,
        iterations: t.iterations,
    })
}

fn infeasible(n: usize, m: usize) -> LpResult {
    LpResult {
        status: LpStatus::Infeasible,
        x: vec![0.0; n],
        objective: f64::INFINITY,
        duals: vec![0.0; m],
        reduced_costs: vec![0.0; n],
        iterations: 0,
    }
}

impl Tableau {
    fn new(p: &LpProblem, opts: &LpOptions) -> Self {
        let n = p.num_vars();
        let m = p.num_rows();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + 2 * m];
        for (i, row) in p.rows.iter().enumerate() {
            for &(j, a) in &row.terms {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        // merge duplicate entries in a column
        for col in cols.iter_mut().take(n) {
            col.sort_by_key(|e| e.0);
            col.dedup_by(|later, earlier| {
                if later.0 == earlier.0 {
                    earlier.1 += later.1;
                    true
                } else {
                    false
                }
            });
        }
        let mut lower = p.lower.clone();
        let mut upper = p.upper.clone();
        lower.resize(n + 2 * m, 0.0);
        upper.resize(n + 2 * m, f64::INFINITY);
        let mut x = vec![0.0; n + 2 * m];
        let mut state = vec![VarState::AtLower; n + 2 * m];
        for j in 0..n {
            // boxed columns start at their cheaper bound
            if lower[j].is_finite() && upper[j].is_finite() && p.costs[j] < 0.0 {
                x[j] = upper[j];
                state[j] = VarState::AtUpper;
            } else if lower[j].is_finite() {
                x[j] = lower[j];
                state[j] = VarState::AtLower;
            } else if upper[j].is_finite() {
                x[j] = upper[j];
                state[j] = VarState::AtUpper;
            } else {
                state[j] = VarState::Zero;
            }
        }
        let rhs: Vec<f64> = p.rows.iter().map(|r| r.rhs).collect();
        let mut basis = vec![0; m];
        let mut binv = vec![vec![0.0; m]; m];
        for (i, row) in p.rows.iter().enumerate() {
            let s = n + i;
            let a = n + m + i;
            cols[s].push((i, 1.0));
            let (sl, su) = match row.cmp {
                Cmp::Le => (0.0, f64::INFINITY),
                Cmp::Ge => (f64::NEG_INFINITY, 0.0),
                Cmp::Eq => (0.0, 0.0),
            };
            lower[s] = sl;
            upper[s] = su;
            let activity: f64 = row.terms.iter().map(|&(j, c)| c * x[j]).sum();
            let resid = row.rhs - activity;
            let sign = if resid >= 0.0 { 1.0 } else { -1.0 };
            cols[a].push((i, sign));
            if resid >= sl && resid <= su {
                basis[i] = s;
                state[s] = VarState::Basic;
                x[s] = resid;
                binv[i][i] = 1.0;
            } else {
                basis[i] = a;
                state[a] = VarState::Basic;
                x[a] = resid.abs();
                binv[i][i] = sign;
                state[s] = if sl == 0.0 { VarState::AtLower } else { VarState::AtUpper };
            }
        }
        let max_iterations = opts.iteration_factor * (m + n).max(1);
        Self {
            m,
            cols,
            lower,
            upper,
            rhs,
            x,
            state,
            basis,
            binv,
            opts: *opts,
            iterations: 0,
            max_iterations,
            pivots_since_refactor: 0,
        }
    }

    fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        self.cols[j].iter().map(|&(i, a)| a * y[i]).sum()
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (pos, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (r, yr) in y.iter_mut().enumerate() {
                    *yr += cb * self.binv[pos][r];
                }
            }
        }
        y
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let mut alpha = vec![0.0; self.m];
        for &(r, a) in &self.cols[j] {
            for (pos, al) in alpha.iter_mut().enumerate() {
                *al += self.binv[pos][r] * a;
            }
        }
        alpha
    }

    /// Rebuilds the basis inverse from scratch and recomputes basic values.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        self.pivots_since_refactor = 0;
        if m == 0 {
            return Ok(());
        }
        let mut bmat = vec![vec![0.0; m]; m];
        for (pos, &j) in self.basis.iter().enumerate() {
            for &(r, a) in &self.cols[j] {
                bmat[r][pos] = a;
            }
        }
        self.binv = linalg::invert(&bmat, 1e-13)
            .ok_or(LpError::NumericalFailure { iterations: self.iterations })?;
        let mut resid = self.rhs.clone();
        for j in 0..self.cols.len() {
            if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                for &(r, a) in &self.cols[j] {
                    resid[r] -= a * self.x[j];
                }
            }
        }
        for pos in 0..m {
            let v: f64 = (0..m).map(|r| self.binv[pos][r] * resid[r]).sum();
            self.x[self.basis[pos]] = v;
        }
        Ok(())
    }

    fn run(&mut self, cost: &[f64]) -> Result<PhaseEnd, LpError> {
        let mut degenerate_run = 0usize;
        let mut bland = false;
        // reduced costs only change when the basis does
        let mut reduced: Vec<f64> = Vec::new();
        let mut stale = true;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(LpError::NumericalFailure { iterations: self.iterations });
            }
            if self.pivots_since_refactor >= self.opts.refactor_every {
                self.refactor()?;
                stale = true;
            }
            if stale {
                let y = self.duals(cost);
                reduced = (0..self.cols.len()).map(|j| cost[j] - self.col_dot(j, &y)).collect();
                stale = false;
            }

            // pricing
            let mut entering: Option<(usize, f64, f64)> = None; // (col, d, direction)
            for j in 0..self.cols.len() {
                let st = self.state[j];
                if st == VarState::Basic || self.lower[j] == self.upper[j] {
                    continue;
                }
                let d = reduced[j];
                let dir = match st {
                    VarState::AtLower if d < -self.opts.optimality_tol => 1.0,
                    VarState::AtUpper if d > self.opts.optimality_tol => -1.0,
                    VarState::Zero if d.abs() > self.opts.optimality_tol => -d.signum(),
                    _ => continue,
                };
                if bland {
                    entering = Some((j, d, dir));
                    break;
                }
                if entering.is_none_or(|(_, best, _)| d.abs() > best.abs()) {
                    entering = Some((j, d, dir));
                }
            }
            let Some((q, _, dir)) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            self.iterations += 1;

            let alpha = self.ftran(q);
            let mut theta = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, f64)> = None; // (pos, |alpha|)
            for (pos, &a) in alpha.iter().enumerate() {
                if a.abs() <= self.opts.pivot_tol {
                    continue;
                }
                let b = self.basis[pos];
                let rate = -dir * a;
                let limit = if rate < 0.0 {
                    if self.lower[b].is_finite() {
                        ((self.x[b] - self.lower[b]) / -rate).max(0.0)
                    } else {
                        continue;
                    }
                } else if self.upper[b].is_finite() {
                    ((self.upper[b] - self.x[b]) / rate).max(0.0)
                } else {
                    continue;
                };
                let better = match leave {
                    None => limit < theta || theta.is_infinite(),
                    Some((lp, la)) => {
                        if limit < theta - 1e-12 {
                            true
                        } else if limit <= theta + 1e-12 {
                            if bland {
                                b < self.basis[lp]
                            } else {
                                a.abs() > la
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    theta = if leave.is_none() { limit } else { limit.min(theta) };
                    leave = Some((pos, a.abs()));
                }
            }
            if theta.is_infinite() {
                return Ok(PhaseEnd::Unbounded);
            }

            let step = dir * theta;
            if step != 0.0 {
                self.x[q] += step;
                for (pos, &a) in alpha.iter().enumerate() {
                    if a != 0.0 {
                        self.x[self.basis[pos]] -= step * a;
                    }
                }
            }
            if theta <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > self.opts.degenerate_switch {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = false;
            }

            match leave {
                None => {
                    // bound flip of the entering column
                    if dir > 0.0 {
                        self.x[q] = self.upper[q];
                        self.state[q] = VarState::AtUpper;
                    } else {
                        self.x[q] = self.lower[q];
                        self.state[q] = VarState::AtLower;
                    }
                }
                Some((r, _)) => {
                    let out = self.basis[r];
                    let rate = -dir * alpha[r];
                    if rate < 0.0 {
                        self.x[out] = self.lower[out];
                        self.state[out] = VarState::AtLower;
                    } else {
                        self.x[out] = self.upper[out];
                        self.state[out] = VarState::AtUpper;
                    }
                    self.basis[r] = q;
                    self.state[q] = VarState::Basic;
                    let piv = alpha[r];
                    let prow: Vec<f64> = self.binv[r].iter().map(|v| v / piv).collect();
                    for (pos, row) in self.binv.iter_mut().enumerate() {
                        if pos == r {
                            row.copy_from_slice(&prow);
                        } else if alpha[pos] != 0.0 {
                            let f = alpha[pos];
                            for (v, pv) in row.iter_mut().zip(&prow) {
                                *v -= f * pv;
                            }
                        }
                    }
                    self.pivots_since_refactor += 1;
                    stale = true;
                }
            }
        }
    }
}
