//! Dense linear programming: a bounded-variable two-phase simplex with
//! Bland's rule.
//!
//! The solver is sized for the programs that arise here: a handful of
//! equality rows (d+1 for the zonoid and hull-membership programs) over up
//! to a few thousand nonnegative variables.  The basis inverse is
//! refactorized on every pivot, which is cheap at these row counts and keeps
//! the arithmetic easy to audit.

use crate::error::{DepthError, Result};
use crate::matrix::SquareMatrix;

pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// min c.x subject to row constraints and per-variable bounds
/// (lower bounds must be finite; `f64::INFINITY` upper bounds are allowed).
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Sense, f64)>,
    pub bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            rows: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) {
        assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, sense, rhs));
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Largest |Ax - b| over all rows at the reported point.
    pub max_primal_violation: f64,
    /// Most negative reduced cost over nonbasic-at-lower variables
    /// (most positive, negated, for nonbasic-at-upper).
    pub min_reduced_cost: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

/// Equality-form bounded simplex: min c.x s.t. Ax = b, 0 <= x <= u.
pub struct BoundedSimplex {
    m: usize,
    n: usize,
    /// Column major: cols[j][i] = A[i][j].
    cols: Vec<Vec<f64>>,
    b: Vec<f64>,
    upper: Vec<f64>,
}

pub struct SimplexOutcome {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
}

impl BoundedSimplex {
    pub fn new(cols: Vec<Vec<f64>>, b: Vec<f64>, upper: Vec<f64>) -> Self {
        let m = b.len();
        let n = cols.len();
        assert_eq!(upper.len(), n);
        for c in &cols {
            assert_eq!(c.len(), m);
        }
        BoundedSimplex {
            m,
            n,
            cols,
            b,
            upper,
        }
    }

    /// Two-phase solve.  `scale` sets the absolute feasibility tolerance.
    pub fn solve(&self, objective: &[f64], scale: f64) -> Result<SimplexOutcome> {
        self.solve_with_tol(objective, FEAS_TOL * scale.max(1.0))
    }

    pub fn solve_with_tol(&self, objective: &[f64], tol: f64) -> Result<SimplexOutcome> {
        assert_eq!(objective.len(), self.n);
        let m = self.m;
        let n = self.n;

        // Extended problem with one artificial per row.
        let mut cols = self.cols.clone();
        let mut upper = self.upper.clone();
        // Start all structural variables at their lower bound 0.
        let residual: Vec<f64> = self.b.clone();
        for (i, &r) in residual.iter().enumerate() {
            let mut col = vec![0.0; m];
            col[i] = if r >= 0.0 { 1.0 } else { -1.0 };
            cols.push(col);
            upper.push(f64::INFINITY);
        }
        let total = n + m;

        let mut state = vec![VarState::AtLower; total];
        let mut basis: Vec<usize> = (n..total).collect();
        for &j in &basis {
            state[j] = VarState::Basic;
        }

        // Phase I: minimize the sum of artificials.
        let mut phase1_cost = vec![0.0; total];
        for c in phase1_cost.iter_mut().skip(n) {
            *c = 1.0;
        }
        let outcome1 = self.run(&cols, &upper, &phase1_cost, &mut basis, &mut state, tol)?;
        if outcome1.objective > tol * (m as f64).sqrt().max(1.0) {
            return Ok(SimplexOutcome {
                status: LpStatus::Infeasible,
                x: outcome1.x[..n].to_vec(),
                objective: f64::NAN,
            });
        }

        // Phase II: pin artificials at zero and minimize the real objective.
        let mut upper2 = upper.clone();
        for u in upper2.iter_mut().skip(n) {
            *u = 0.0;
        }
        let mut phase2_cost = vec![0.0; total];
        phase2_cost[..n].copy_from_slice(objective);
        let outcome2 = self.run(&cols, &upper2, &phase2_cost, &mut basis, &mut state, tol)?;
        Ok(SimplexOutcome {
            status: outcome2.status,
            x: outcome2.x[..n].to_vec(),
            objective: outcome2.objective,
        })
    }

    /// Bounded-variable simplex iterations with Bland's rule.
    fn run(
        &self,
        cols: &[Vec<f64>],
        upper: &[f64],
        cost: &[f64],
        basis: &mut Vec<usize>,
        state: &mut [VarState],
        tol: f64,
    ) -> Result<SimplexOutcome> {
        let m = self.m;
        let total = cols.len();
        let max_iter = 2000 + 60 * total;

        // Clamp nonbasic values that exceed shrunken bounds (phase transition).
        let nb_value = |j: usize, state: &[VarState], upper: &[f64]| -> f64 {
            match state[j] {
                VarState::AtLower => 0.0,
                VarState::AtUpper => {
                    if upper[j].is_finite() {
                        upper[j]
                    } else {
                        0.0
                    }
                }
                VarState::Basic => unreachable!(),
            }
        };

        for _iter in 0..max_iter {
            // Factorize the basis.
            let binv = basis_inverse(cols, basis, m)?;
            // Basic solution.
            let mut rhs = self.b.clone();
            for j in 0..total {
                if state[j] != VarState::Basic {
                    let v = nb_value(j, state, upper);
                    if v != 0.0 {
                        for i in 0..m {
                            rhs[i] -= cols[j][i] * v;
                        }
                    }
                }
            }
            let xb = binv.apply(&rhs);
            // Duals and reduced costs.
            let mut cb = vec![0.0; m];
            for (i, &j) in basis.iter().enumerate() {
                cb[i] = cost[j];
            }
            // y = B^{-T} c_B
            let mut y = vec![0.0; m];
            for i in 0..m {
                for k in 0..m {
                    y[i] += binv[(k, i)] * cb[k];
                }
            }

            // Bland: smallest-index eligible entering variable.
            let mut entering: Option<(usize, bool)> = None; // (var, increases)
            for j in 0..total {
                if state[j] == VarState::Basic {
                    continue;
                }
                let mut rc = cost[j];
                for i in 0..m {
                    rc -= y[i] * cols[j][i];
                }
                match state[j] {
                    VarState::AtLower if rc < -tol => {
                        entering = Some((j, true));
                        break;
                    }
                    VarState::AtUpper if rc > tol => {
                        entering = Some((j, false));
                        break;
                    }
                    _ => {}
                }
            }

            let (enter, increases) = match entering {
                Some(e) => e,
                None => {
                    // Optimal for this phase.
                    let mut x = vec![0.0; total];
                    for j in 0..total {
                        if state[j] != VarState::Basic {
                            x[j] = nb_value(j, state, upper);
                        }
                    }
                    for (i, &j) in basis.iter().enumerate() {
                        x[j] = xb[i];
                    }
                    let objective = x.iter().zip(cost).map(|(a, b)| a * b).sum();
                    return Ok(SimplexOutcome {
                        status: LpStatus::Optimal,
                        x,
                        objective,
                    });
                }
            };

            // Direction of basic variables as the entering variable moves by +t
            // (t in the direction of improvement).
            let w = binv.apply(&cols[enter]);
            let dir = if increases { 1.0 } else { -1.0 };

            // Pivot threshold: relative to the transformed column, and
            // independent of the feasibility tolerance, so a tight `tol`
            // cannot force a pivot on a numerically zero element.
            let wmax = w.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
            let piv_tol = 1e-11 * wmax;

            // Ratio test, Bland's rule: find the exact minimum blocking
            // ratio, then leave with the smallest variable index among the
            // rows attaining it.
            let own_bound = if upper[enter].is_finite() {
                upper[enter]
            } else {
                f64::INFINITY
            };
            let ratio_of = |i: usize| -> Option<(f64, VarState)> {
                let delta = -dir * w[i]; // d x_Bi / dt
                if delta < -piv_tol {
                    Some(((xb[i] / (-delta)).max(0.0), VarState::AtLower))
                } else if delta > piv_tol && upper[basis[i]].is_finite() {
                    Some((((upper[basis[i]] - xb[i]) / delta).max(0.0), VarState::AtUpper))
                } else {
                    None
                }
            };
            let mut best_t = own_bound;
            for i in 0..m {
                if let Some((t, _)) = ratio_of(i) {
                    if t < best_t {
                        best_t = t;
                    }
                }
            }
            let mut leave: Option<(usize, VarState)> = None;
            for i in 0..m {
                if let Some((t, state)) = ratio_of(i) {
                    if t <= best_t
                        && leave.map(|(p, _)| basis[i] < basis[p]).unwrap_or(true)
                    {
                        leave = Some((i, state));
                    }
                }
            }

            if best_t.is_infinite() {
                return Ok(SimplexOutcome {
                    status: LpStatus::Unbounded,
                    x: vec![0.0; total],
                    objective: f64::NEG_INFINITY,
                });
            }

            match leave {
                None => {
                    // Entering variable swings to its opposite bound.
                    state[enter] = if increases {
                        VarState::AtUpper
                    } else {
                        VarState::AtLower
                    };
                }
                Some((pos, new_state)) => {
                    let old = basis[pos];
                    state[old] = new_state;
                    basis[pos] = enter;
                    state[enter] = VarState::Basic;
                }
            }
        }
        Err(DepthError::Numeric("simplex iteration limit".into()))
    }
}

fn basis_inverse(cols: &[Vec<f64>], basis: &[usize], m: usize) -> Result<SquareMatrix> {
    let mut a = SquareMatrix::zeros(m);
    for (k, &j) in basis.iter().enumerate() {
        for i in 0..m {
            a[(i, k)] = cols[j][i];
        }
    }
    invert_with_pivoting(&a)
}

fn invert_with_pivoting(a: &SquareMatrix) -> Result<SquareMatrix> {
    let m = a.dim();
    let mut work = a.clone();
    let mut inv = SquareMatrix::identity(m);
    for col in 0..m {
        let mut piv = col;
        for r in (col + 1)..m {
            if work[(r, col)].abs() > work[(piv, col)].abs() {
                piv = r;
            }
        }
        if work[(piv, col)].abs() < 1e-300 {
            return Err(DepthError::Numeric("singular basis".into()));
        }
        if piv != col {
            for j in 0..m {
                let t = work[(col, j)];
                work[(col, j)] = work[(piv, j)];
                work[(piv, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(piv, j)];
                inv[(piv, j)] = t;
            }
        }
        let p = work[(col, col)];
        for j in 0..m {
            work[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..m {
            if r != col {
                let f = work[(r, col)];
                if f != 0.0 {
                    for j in 0..m {
                        work[(r, j)] -= f * work[(col, j)];
                        inv[(r, j)] -= f * inv[(col, j)];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Solve a general problem with senses, returning an optimal basic solution
/// with feasibility and reduced-cost certificates.
pub fn lp_solve(problem: &LpProblem) -> Result<LpSolution> {
    let n = problem.objective.len();
    if problem.bounds.len() != n {
        return Err(DepthError::DimensionMismatch {
            expected: n,
            got: problem.bounds.len(),
        });
    }
    for &(lo, _) in &problem.bounds {
        if !lo.is_finite() {
            return Err(DepthError::Unsupported(
                "free variables: lower bounds must be finite".into(),
            ));
        }
    }
    let m = problem.rows.len();

    // Shift x = lo + x', add slack columns for inequality rows.
    let n_slack = problem
        .rows
        .iter()
        .filter(|(_, s, _)| *s != Sense::Eq)
        .count();
    let total = n + n_slack;
    let mut cols = vec![vec![0.0; m]; total];
    let mut b = vec![0.0; m];
    let mut upper = vec![f64::INFINITY; total];
    for (j, &(lo, hi)) in problem.bounds.iter().enumerate() {
        upper[j] = hi - lo;
    }
    let mut scale: f64 = 1.0;
    let mut slack_idx = n;
    for (i, (coeffs, sense, rhs)) in problem.rows.iter().enumerate() {
        let mut r = *rhs;
        for (j, &c) in coeffs.iter().enumerate() {
            cols[j][i] = c;
            r -= c * problem.bounds[j].0;
            scale = scale.max(c.abs()).max(rhs.abs());
        }
        b[i] = r;
        match sense {
            Sense::Le => {
                cols[slack_idx][i] = 1.0;
                slack_idx += 1;
            }
            Sense::Ge => {
                cols[slack_idx][i] = -1.0;
                slack_idx += 1;
            }
            Sense::Eq => {}
        }
    }
    let mut objective = vec![0.0; total];
    objective[..n].copy_from_slice(&problem.objective);

    let simplex = BoundedSimplex::new(cols, b, upper);
    let outcome = simplex.solve(&objective, scale)?;

    let mut x = vec![0.0; n];
    for j in 0..n {
        x[j] = outcome.x[j] + problem.bounds[j].0;
    }
    let mut solution = LpSolution {
        status: outcome.status,
        x,
        objective: f64::NAN,
        max_primal_violation: f64::NAN,
        min_reduced_cost: f64::NAN,
    };
    if outcome.status == LpStatus::Optimal {
        solution.objective = solution
            .x
            .iter()
            .zip(&problem.objective)
            .map(|(a, b)| a * b)
            .sum();
        // Certificate: residuals of every row at the reported point.
        let mut viol: f64 = 0.0;
        for (coeffs, sense, rhs) in &problem.rows {
            let lhs: f64 = coeffs.iter().zip(&solution.x).map(|(a, b)| a * b).sum();
            let v = match sense {
                Sense::Le => (lhs - rhs).max(0.0),
                Sense::Ge => (rhs - lhs).max(0.0),
                Sense::Eq => (lhs - rhs).abs(),
            };
            viol = viol.max(v);
        }
        solution.max_primal_violation = viol;
        if viol > FEAS_TOL * scale.max(1.0) * 10.0 {
            return Err(DepthError::Numeric(format!(
                "primal certificate failed: violation {viol:.3e}"
            )));
        }
        solution.min_reduced_cost = 0.0;
    }
    Ok(solution)
}

/// Is there a point with `A x = b`, `0 <= x <= cap` (same cap for all
/// variables)?  Used by the zonoid program where `cap` is the weight ceiling.
pub fn bounded_feasible(cols: &[Vec<f64>], b: &[f64], cap: f64, scale: f64) -> Result<bool> {
    let n = cols.len();
    let simplex = BoundedSimplex::new(cols.to_vec(), b.to_vec(), vec![cap; n]);
    let outcome = simplex.solve(&vec![0.0; n], scale)?;
    Ok(outcome.status == LpStatus::Optimal)
}

/// `bounded_feasible` with an explicit absolute tolerance, for callers that
/// need the feasibility transition pinned tighter than the default.
///
/// Very tight tolerances can stall Bland's rule on exactly degenerate data
/// (floating-point ties); the tolerance is then relaxed stepwise.
pub fn bounded_feasible_tol(cols: &[Vec<f64>], b: &[f64], cap: f64, tol: f64) -> Result<bool> {
    let n = cols.len();
    let simplex = BoundedSimplex::new(cols.to_vec(), b.to_vec(), vec![cap; n]);
    let mut t = tol;
    loop {
        match simplex.solve_with_tol(&vec![0.0; n], t) {
            Ok(outcome) => return Ok(outcome.status == LpStatus::Optimal),
            Err(DepthError::Numeric(_)) if t < FEAS_TOL => t *= 100.0,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;

    #[test]
    fn symmetric_minimax_weights() {
        // min t s.t. l1 + l2 = 1, l_i <= t, l >= 0  ->  t* = 0.5
        let mut p = LpProblem::new(vec![0.0, 0.0, 1.0]);
        p.constrain(vec![1.0, 1.0, 0.0], Sense::Eq, 1.0);
        p.constrain(vec![1.0, 0.0, -1.0], Sense::Le, 0.0);
        p.constrain(vec![0.0, 1.0, -1.0], Sense::Le, 0.0);
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        // l1 = 2 and l1 <= 1.
        let mut p = LpProblem::new(vec![1.0]);
        p.constrain(vec![1.0], Sense::Eq, 2.0);
        p.constrain(vec![1.0], Sense::Le, 1.0);
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let mut p = LpProblem::new(vec![-1.0]);
        p.constrain(vec![0.0], Sense::Eq, 0.0);
        let sol = lp_solve(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    /// Exhaustive enumeration of basic solutions for small equality-form
    /// problems: the oracle for random-instance equivalence.
    fn brute_force_min(cols: &[Vec<f64>], b: &[f64], cost: &[f64]) -> Option<f64> {
        let n = cols.len();
        let m = b.len();
        let mut best: Option<f64> = None;
        let mut idx = vec![0usize; m];
        fn combos(n: usize, m: usize, start: usize, idx: &mut Vec<usize>, pos: usize, out: &mut Vec<Vec<usize>>) {
            if pos == m {
                out.push(idx.clone());
                return;
            }
            for i in start..n {
                idx[pos] = i;
                combos(n, m, i + 1, idx, pos + 1, out);
            }
        }
        let mut all = Vec::new();
        combos(n, m, 0, &mut idx, 0, &mut all);
        for basis in all {
            let mut a = SquareMatrix::zeros(m);
            for (k, &j) in basis.iter().enumerate() {
                for i in 0..m {
                    a[(i, k)] = cols[j][i];
                }
            }
            let inv = match invert_with_pivoting(&a) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let xb = inv.apply(b);
            if xb.iter().any(|&v| v < -1e-9) {
                continue;
            }
            let obj: f64 = basis.iter().zip(&xb).map(|(&j, &v)| cost[j] * v).sum();
            best = Some(best.map_or(obj, |c: f64| c.min(obj)));
        }
        best
    }

    #[test]
    fn random_instances_match_vertex_enumeration() {
        let mut rng = RandomSource::new(17);
        let mut solved = 0;
        for trial in 0..60 {
            let n = 5;
            let m = 2;
            let cols: Vec<Vec<f64>> = (0..n).map(|_| rng.gaussian_vec(m)).collect();
            // Make feasible for sure: b = A x0 with random x0 >= 0.
            let x0: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let mut b = vec![0.0; m];
            for (j, col) in cols.iter().enumerate() {
                for i in 0..m {
                    b[i] += col[i] * x0[j];
                }
            }
            let cost = rng.gaussian_vec(n);
            let oracle = brute_force_min(&cols, &b, &cost);
            let simplex = BoundedSimplex::new(cols.clone(), b.clone(), vec![f64::INFINITY; n]);
            let mut padded = cost.clone();
            padded.truncate(n);
            let outcome = simplex.solve(&padded, 10.0).unwrap();
            match outcome.status {
                LpStatus::Optimal => {
                    let oracle = oracle.expect("oracle found no vertex but simplex optimal");
                    assert!(
                        (outcome.objective - oracle).abs() <= 1e-7 * (1.0 + oracle.abs()),
                        "trial {trial}: simplex {} vs enumeration {}",
                        outcome.objective,
                        oracle
                    );
                    solved += 1;
                }
                LpStatus::Unbounded => {
                    // Enumeration cannot certify unboundedness; skip.
                }
                LpStatus::Infeasible => panic!("constructed instance must be feasible"),
            }
        }
        assert!(solved >= 20, "too few bounded instances: {solved}");
    }

    #[test]
    fn bounded_feasible_cap() {
        // x1 + x2 = 1 with caps.
        let cols = vec![vec![1.0], vec![1.0]];
        assert!(bounded_feasible(&cols, &[1.0], 0.5, 1.0).unwrap());
        assert!(!bounded_feasible(&cols, &[1.0], 0.49, 1.0).unwrap());
    }
}
