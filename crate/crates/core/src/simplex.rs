//! Exact two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! Problems are stated as `minimize cᵀx` subject to `Ax = b` and per-variable
//! bounds (`x ≥ 0` or free, optional finite upper bound). Free variables are
//! split and upper bounds become slack rows before the tableau is built.
//! Every pivot choice takes the lowest eligible index, so identical inputs
//! always walk identical pivot sequences.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBound {
    Zero,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub lower: Vec<LowerBound>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
    pub vertex: Option<Vec<Rational>>,
    /// Multipliers of the equality constraints certifying optimality.
    pub dual: Option<Vec<Rational>>,
}

impl LpResult {
    fn without_solution(status: LpStatus) -> Self {
        LpResult { status, optimum: None, vertex: None, dual: None }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LpProblem {
    /// `minimize objective·x` over `x ≥ 0` with no constraints yet.
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            constraints: Vec::new(),
            rhs: Vec::new(),
            lower: vec![LowerBound::Zero; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_equality(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.constraints.push(row);
        self.rhs.push(rhs);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension("bound vectors must match the variable count".into()));
        }
        if self.constraints.len() != self.rhs.len() {
            return Err(Error::Dimension("constraint rows and right-hand sides differ in count".into()));
        }
        if let Some(r) = self.constraints.iter().position(|row| row.len() != n) {
            return Err(Error::Dimension(format!("constraint row {r} has the wrong length")));
        }
        Ok(())
    }

    /// The same problem with the listed variables removed (fixed to zero).
    fn without_vars(&self, fixed: &[bool]) -> LpProblem {
        let keep = |i: &usize| !fixed[*i];
        let pick = |v: &[Rational]| (0..v.len()).filter(keep).map(|i| v[i].clone()).collect();
        LpProblem {
            objective: pick(&self.objective),
            constraints: self.constraints.iter().map(|r| pick(r)).collect(),
            rhs: self.rhs.clone(),
            lower: (0..self.num_vars()).filter(keep).map(|i| self.lower[i]).collect(),
            upper: (0..self.num_vars()).filter(keep).map(|i| self.upper[i].clone()).collect(),
        }
    }
}

pub fn solve_lp(problem: &LpProblem) -> Result<LpResult> {
    problem.validate()?;
    let std = StandardForm::from_problem(problem);
    let Some(mut tab) = Tableau::phase_one(&std)? else {
        return Ok(LpResult::without_solution(LpStatus::Infeasible));
    };
    if !tab.phase_two(&std.cost) {
        return Ok(LpResult::without_solution(LpStatus::Unbounded));
    }
    let x_std = tab.solution(std.cost.len());
    let dual_std = certify_optimality(&std, &tab, &x_std)?;

    let vertex: Vec<Rational> = std
        .columns
        .iter()
        .map(|&(pos, neg)| match neg {
            Some(n) => &x_std[pos] - &x_std[n],
            None => x_std[pos].clone(),
        })
        .collect();
    let optimum: Rational = problem.objective.iter().zip(&vertex).map(|(c, x)| c * x).sum();
    let dual = dual_std[..problem.constraints.len()].to_vec();
    Ok(LpResult {
        status: LpStatus::Optimal,
        optimum: Some(optimum),
        vertex: Some(vertex),
        dual: Some(dual),
    })
}

/// Solves `problem` with `x_i = 0` added for every `i` in `fixed`.
pub fn solve_with_fixed_zero(problem: &LpProblem, fixed: &[usize]) -> Result<LpResult> {
    problem.validate()?;
    let n = problem.num_vars();
    let mut mask = vec![false; n];
    for &i in fixed {
        if i >= n {
            return Err(Error::Dimension(format!("fixed index {i} out of range for {n} variables")));
        }
        mask[i] = true;
    }
    let mut result = solve_lp(&problem.without_vars(&mask))?;
    if let Some(reduced) = result.vertex.take() {
        let mut it = reduced.into_iter();
        let full = mask
            .iter()
            .map(|&f| if f { Rational::zero() } else { it.next().unwrap() })
            .collect();
        result.vertex = Some(full);
    }
    Ok(result)
}

/// `min cᵀy, Ay = b, y ≥ 0` with the column map back to the user's variables.
struct StandardForm {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    cost: Vec<Rational>,
    /// user variable -> (positive column, negative column if free)
    columns: Vec<(usize, Option<usize>)>,
}

impl StandardForm {
    fn from_problem(p: &LpProblem) -> Self {
        let n = p.num_vars();
        let mut columns = Vec::with_capacity(n);
        let mut next = 0;
        for lower in &p.lower {
            match lower {
                LowerBound::Zero => {
                    columns.push((next, None));
                    next += 1;
                }
                LowerBound::Unbounded => {
                    columns.push((next, Some(next + 1)));
                    next += 2;
                }
            }
        }
        let bounded: Vec<usize> = (0..n).filter(|&i| p.upper[i].is_some()).collect();
        let width = next + bounded.len();

        let mut cost = vec![Rational::zero(); width];
        for (j, &(pos, neg)) in columns.iter().enumerate() {
            cost[pos] = p.objective[j].clone();
            if let Some(ng) = neg {
                cost[ng] = -&p.objective[j];
            }
        }
        let spread = |row: &[Rational]| {
            let mut out = vec![Rational::zero(); width];
            for (j, &(pos, neg)) in columns.iter().enumerate() {
                out[pos] = row[j].clone();
                if let Some(ng) = neg {
                    out[ng] = -&row[j];
                }
            }
            out
        };
        let mut a: Vec<Vec<Rational>> = p.constraints.iter().map(|r| spread(r)).collect();
        let mut b = p.rhs.clone();
        for (k, &j) in bounded.iter().enumerate() {
            let mut unit = vec![Rational::zero(); n];
            unit[j] = crate::rational::int(1);
            let mut row = spread(&unit);
            row[next + k] = crate::rational::int(1);
            a.push(row);
            b.push(p.upper[j].clone().unwrap());
        }
        StandardForm { a, b, cost, columns }
    }
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// original row index of each tableau row
    origin: Vec<usize>,
    reduced: Vec<Rational>,
}

impl Tableau {
    /// Phase I with one artificial per row. Returns `None` when infeasible,
    /// otherwise a feasible basis over the original columns only.
    fn phase_one(std: &StandardForm) -> Result<Option<Self>> {
        let rows = std.a.len();
        let width = std.cost.len();
        let mut a = Vec::with_capacity(rows);
        let mut rhs = Vec::with_capacity(rows);
        for (r, (row, b)) in std.a.iter().zip(&std.b).enumerate() {
            let flip = b.is_negative();
            let mut t: Vec<Rational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
            t.extend((0..rows).map(|k| if k == r { crate::rational::int(1) } else { Rational::zero() }));
            a.push(t);
            rhs.push(if flip { -b } else { b.clone() });
        }
        let mut reduced = vec![Rational::zero(); width + rows];
        for row in &a {
            for (d, x) in reduced.iter_mut().zip(&row[..width]) {
                *d -= x;
            }
        }
        let mut tab = Tableau {
            a,
            rhs,
            basis: (width..width + rows).collect(),
            origin: (0..rows).collect(),
            reduced,
        };
        if !tab.run(width + rows) {
            return Err(Error::Invariant("phase I objective is bounded below by zero".into()));
        }
        let infeasibility: Rational = (0..rows)
            .filter(|&r| tab.basis[r] >= width)
            .map(|r| tab.rhs[r].clone())
            .sum();
        if infeasibility.is_positive() {
            return Ok(None);
        }

        // Drive zero-level artificials out of the basis; rows where that is
        // impossible are linear combinations of the others.
        let mut redundant = Vec::new();
        for r in 0..rows {
            if tab.basis[r] < width {
                continue;
            }
            match (0..width).find(|&j| !tab.a[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => redundant.push(r),
            }
        }
        for &r in redundant.iter().rev() {
            tab.a.remove(r);
            tab.rhs.remove(r);
            tab.basis.remove(r);
            tab.origin.remove(r);
        }
        for row in &mut tab.a {
            row.truncate(width);
        }
        tab.reduced.truncate(width);
        Ok(Some(tab))
    }

    /// Returns false when unbounded.
    fn phase_two(&mut self, cost: &[Rational]) -> bool {
        let mut reduced = cost.to_vec();
        for (r, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (d, x) in reduced.iter_mut().zip(&self.a[r]) {
                *d -= cb * x;
            }
        }
        self.reduced = reduced;
        self.run(cost.len())
    }

    /// Bland's rule iterations over the first `width` columns. Returns false
    /// when an improving column has no blocking row.
    fn run(&mut self, width: usize) -> bool {
        loop {
            let Some(enter) = (0..width).find(|&j| self.reduced[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.a.len() {
                if !self.a[r][enter].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.a[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        for x in self.a[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (x, p) in self.a[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.reduced[c].is_zero() {
            let f = self.reduced[c].clone();
            for (d, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *d -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn solution(&self, width: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); width];
        for (r, &bv) in self.basis.iter().enumerate() {
            x[bv] = self.rhs[r].clone();
        }
        x
    }
}

/// Rebuilds the dual multipliers from the final basis against the original
/// data and checks dual feasibility and a zero duality gap exactly.
fn certify_optimality(std: &StandardForm, tab: &Tableau, x: &[Rational]) -> Result<Vec<Rational>> {
    let k = tab.basis.len();
    // Bᵀ y = c_B with B the basic columns of the kept rows.
    let bt: Vec<Vec<Rational>> = tab
        .basis
        .iter()
        .map(|&col| tab.origin.iter().map(|&r| std.a[r][col].clone()).collect())
        .collect();
    let cb: Vec<Rational> = tab.basis.iter().map(|&col| std.cost[col].clone()).collect();
    let y_kept = if k == 0 {
        Vec::new()
    } else {
        linalg::solve(&bt, &cb)
            .ok_or_else(|| Error::Invariant("final simplex basis is singular".into()))?
    };
    let mut y = vec![Rational::zero(); std.a.len()];
    for (val, &r) in y_kept.into_iter().zip(&tab.origin) {
        y[r] = val;
    }
    for j in 0..std.cost.len() {
        let priced: Rational = std.a.iter().zip(&y).map(|(row, yr)| &row[j] * yr).sum();
        if (&std.cost[j] - priced).is_negative() {
            return Err(Error::Invariant(format!("dual infeasible at column {j}")));
        }
    }
    let primal: Rational = std.cost.iter().zip(x).map(|(c, v)| c * v).sum();
    let dual: Rational = std.b.iter().zip(&y).map(|(b, v)| b * v).sum();
    if primal != dual {
        return Err(Error::Invariant(format!("duality gap {primal} vs {dual}")));
    }
    Ok(y)
}
