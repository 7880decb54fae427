//! Feasibility and slack-maximization programs used by the polytope code.
//!
//! The solver itself is `microlp`; this module only phrases the handful of
//! programs the geometry needs.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};

/// Outcome of a linear program.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Unbounded,
    Infeasible,
}

/// An affine inequality `linear · x + constant ≥ 0` in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub linear: Vec<f64>,
    pub constant: f64,
}

impl Halfspace {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.linear.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }
}

fn solve(problem: &Problem, vars: &[microlp::Variable]) -> Result<LpOutcome> {
    match problem.solve() {
        Ok(outcome) => match outcome.into_solution() {
            Ok(sol) => Ok(LpOutcome::Optimal {
                value: sol.objective(),
                point: vars.iter().map(|v| sol.var_value(*v)).collect(),
            }),
            Err(_) => Err(Error::Solver("interrupted".into())),
        },
        Err(microlp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
        Err(microlp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
        Err(e) => Err(Error::Solver(e.to_string())),
    }
}

/// Maximizes `objective · x` over `{x : h(x) ≥ 0 for all h}` with free variables.
pub fn maximize(objective: &[f64], halfspaces: &[Halfspace]) -> Result<LpOutcome> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = objective
        .iter()
        .map(|c| p.add_var(*c, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for h in halfspaces {
        let terms: Vec<_> = vars.iter().zip(&h.linear).map(|(v, c)| (*v, *c)).collect();
        p.add_constraint(terms.as_slice(), ComparisonOp::Ge, -h.constant);
    }
    solve(&p, &vars)
}

/// Largest `s ≤ cap` such that some `x` with `|x_j| ≤ bound` satisfies
/// `h(x) ≥ s·‖linear_h‖` for every halfspace: a Chebyshev-style depth.
///
/// Returns the depth and the maximizing point.
pub fn deepest_point(halfspaces: &[Halfspace], dim: usize, bound: f64, cap: f64) -> Result<(f64, Vec<f64>)> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..dim).map(|_| p.add_var(0.0, (-bound, bound))).collect();
    let s = p.add_var(1.0, (f64::NEG_INFINITY, cap));
    for h in halfspaces {
        let scale = h.linear.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
        let mut terms: Vec<_> = xs.iter().zip(&h.linear).map(|(v, c)| (*v, *c)).collect();
        terms.push((s, -scale));
        p.add_constraint(terms.as_slice(), ComparisonOp::Ge, -h.constant);
    }
    let mut all = xs.clone();
    all.push(s);
    match solve(&p, &all)? {
        LpOutcome::Optimal { value, point } => Ok((value, point[..dim].to_vec())),
        LpOutcome::Infeasible => Ok((f64::NEG_INFINITY, vec![0.0; dim])),
        LpOutcome::Unbounded => Err(Error::Solver("capped program reported unbounded".into())),
    }
}

/// Largest `t` with `x = Σ λ_i p_i`, `Σ λ_i = 1`, `λ_i ≥ t`.
///
/// Positive iff `x` is in the relative interior of the hull of `points`.
pub fn barycentric_margin(points: &[Vec<f64>], x: &[f64]) -> Result<f64> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let t = p.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    let lambdas: Vec<_> = points.iter().map(|_| p.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for (j, xj) in x.iter().enumerate() {
        let terms: Vec<_> = lambdas.iter().zip(points).map(|(l, pt)| (*l, pt[j])).collect();
        p.add_constraint(terms.as_slice(), ComparisonOp::Eq, *xj);
    }
    let ones: Vec<_> = lambdas.iter().map(|l| (*l, 1.0)).collect();
    p.add_constraint(ones.as_slice(), ComparisonOp::Eq, 1.0);
    for l in &lambdas {
        p.add_constraint([(*l, 1.0), (t, -1.0)], ComparisonOp::Ge, 0.0);
    }
    match solve(&p, &[t])? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible => Ok(f64::NEG_INFINITY),
        LpOutcome::Unbounded => Err(Error::Solver("barycentric program unbounded".into())),
    }
}

/// Whether `v` lies in the closed cone generated by `generators`.
pub fn in_cone(generators: &[Vec<f64>], v: &[f64], tol: f64) -> Result<bool> {
    if generators.is_empty() {
        return Ok(v.iter().all(|x| x.abs() <= tol));
    }
    // Minimize the l1 residual of v − Σ μ_j g_j over μ ≥ 0.
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let mus: Vec<_> = generators.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let mut slack = Vec::new();
    for (i, vi) in v.iter().enumerate() {
        let sp = p.add_var(1.0, (0.0, f64::INFINITY));
        let sm = p.add_var(1.0, (0.0, f64::INFINITY));
        let mut terms: Vec<_> = mus.iter().zip(generators).map(|(m, g)| (*m, g[i])).collect();
        terms.push((sp, 1.0));
        terms.push((sm, -1.0));
        p.add_constraint(terms.as_slice(), ComparisonOp::Eq, *vi);
        slack.push(sp);
        slack.push(sm);
    }
    match solve(&p, &slack)? {
        LpOutcome::Optimal { value, .. } => {
            let scale = v.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
            Ok(value <= tol * scale)
        }
        _ => Err(Error::Solver("cone membership program failed".into())),
    }
}
