//! Minimum mean cycle canceling for CVP on zonotopal lattices.
//!
//! CVP with target `t ∈ span L` is the separable convex integer program
//! `min w(v) = Σ g_i (v_i − t_i)²` over `v ∈ L`. Starting from `v = 0`, each
//! iteration finds a strict Voronoi vector `u` of minimum mean cost
//! `c(v, u) / |supp u|` by linear programming and moves to `v + Δu`. The
//! iterate is optimal exactly when `λ(v)`, the negated minimum mean cost
//! clamped at zero, vanishes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{PrimitiveChain, ZonotopalLattice};
use crate::oracle::{certify_closest, OracleLimits};
use crate::rational::{ceil_to_i64, denominator_lcm, int, ln_positive, max_abs, IntVector, Rational};
use crate::simplex::{solve_lp, solve_with_fixed_zero, LpProblem, LpStatus};

/// A lattice together with a target in its span.
#[derive(Debug, Clone)]
pub struct CvpInstance {
    lattice: ZonotopalLattice,
    target: Vec<Rational>,
}

impl CvpInstance {
    /// `target` must already satisfy `M t = 0`.
    pub fn new(lattice: ZonotopalLattice, target: Vec<Rational>) -> Result<Self> {
        if target.len() != lattice.dim() {
            return Err(Error::Dimension(format!(
                "target of length {} for m = {}",
                target.len(),
                lattice.dim()
            )));
        }
        if !lattice.in_span(&target) {
            return Err(Error::InvalidInput("target is not in the span of the lattice".into()));
        }
        Ok(CvpInstance { lattice, target })
    }

    /// Projects `target` onto `span L` first.
    pub fn projected(lattice: ZonotopalLattice, target: &[Rational]) -> Result<Self> {
        let t = lattice.project(target)?;
        Self::new(lattice, t)
    }

    pub fn lattice(&self) -> &ZonotopalLattice {
        &self.lattice
    }

    pub fn target(&self) -> &[Rational] {
        &self.target
    }

    /// `w(v) = (v − t, v − t)_g`
    pub fn objective(&self, v: &[i64]) -> Rational {
        self.lattice.distance_sq(v, &self.target)
    }
}

/// `c_i⁺(v_i) = w_i(v_i + 1) − w_i(v_i) = g_i (2 (v_i − t_i) + 1)`
pub fn right_derivative(i: usize, v_i: i64, instance: &CvpInstance) -> Rational {
    let g = &instance.lattice.weights()[i];
    g * (int(2) * (int(v_i) - &instance.target[i]) + int(1))
}

/// `c_i⁻(v_i) = w_i(v_i) − w_i(v_i − 1) = g_i (2 (v_i − t_i) − 1)`
pub fn left_derivative(i: usize, v_i: i64, instance: &CvpInstance) -> Rational {
    let g = &instance.lattice.weights()[i];
    g * (int(2) * (int(v_i) - &instance.target[i]) - int(1))
}

/// `c(v, u) = Σ_{u⁺} c_i⁺(v_i) − Σ_{u⁻} c_i⁻(v_i)`, which equals
/// `w(v + u) − w(v)`.
pub fn cost(v: &[i64], u: &PrimitiveChain, instance: &CvpInstance) -> Rational {
    let plus: Rational = u.positive().iter().map(|&i| right_derivative(i, v[i], instance)).sum();
    let minus: Rational = u.negative().iter().map(|&i| left_derivative(i, v[i], instance)).sum();
    plus - minus
}

pub fn mean_cost(v: &[i64], u: &PrimitiveChain, instance: &CvpInstance) -> Rational {
    cost(v, u, instance) / int(u.support_len() as i64)
}

/// The LP whose optimum is the minimum mean cost at `v` (when negative):
/// variables `(x⁺, x⁻) ≥ 0`, `M (x⁺ − x⁻) = 0`, `eᵀ (x⁺ + x⁻) = 1`,
/// objective `Σ c_i⁺(v_i) x_i⁺ − c_i⁻(v_i) x_i⁻`.
pub fn lambda_lp(v: &[i64], instance: &CvpInstance) -> LpProblem {
    let m = instance.lattice.dim();
    let mut objective = Vec::with_capacity(2 * m);
    objective.extend((0..m).map(|i| right_derivative(i, v[i], instance)));
    objective.extend((0..m).map(|i| -left_derivative(i, v[i], instance)));
    let mut lp = LpProblem::new(objective);
    let matrix = instance.lattice.matrix();
    for r in 0..matrix.row_count() {
        let mut row: Vec<Rational> = matrix.row(r).map(int).collect();
        row.extend(matrix.row(r).map(|x| int(-x)));
        lp.add_equality(row, Rational::zero());
    }
    lp.add_equality(vec![int(1); 2 * m], int(1));
    lp
}

/// `λ(v) = max(0, −min_u c̄(v, u))`, with the optimal LP vertex.
pub fn compute_lambda(v: &[i64], instance: &CvpInstance) -> Result<(Rational, Vec<Rational>)> {
    check_point(v, instance)?;
    let res = solve_lp(&lambda_lp(v, instance))?;
    // x⁺_i = x⁻_i = 1/2 is always feasible, so the LP is never infeasible.
    if res.status != LpStatus::Optimal {
        return Err(Error::Invariant(format!("lambda LP returned {:?}", res.status)));
    }
    let opt = res.optimum.unwrap();
    let lambda = if opt.is_negative() { -opt } else { Rational::zero() };
    Ok((lambda, res.vertex.unwrap()))
}

fn check_point(v: &[i64], instance: &CvpInstance) -> Result<()> {
    if !instance.lattice.contains(v) {
        return Err(Error::NotInLattice(format!("{v:?}")));
    }
    Ok(())
}

/// A minimum mean strict Voronoi vector at `v` with inclusion-minimal support.
///
/// Requires `λ(v) > 0`.
pub fn min_mean_voronoi_vector(v: &[i64], instance: &CvpInstance) -> Result<PrimitiveChain> {
    let (lambda, vertex) = compute_lambda(v, instance)?;
    if !lambda.is_positive() {
        return Err(Error::InvalidInput("λ(v) = 0: v is already a closest vector".into()));
    }
    extract_chain(v, instance, &lambda, vertex)
}

/// Probes coordinates in ascending order, fixing `x_i⁺ = x_i⁻ = 0` whenever
/// that keeps the optimum at `−λ`; the surviving vertex is a normalized
/// primitive chain.
fn extract_chain(
    v: &[i64],
    instance: &CvpInstance,
    lambda: &Rational,
    mut vertex: Vec<Rational>,
) -> Result<PrimitiveChain> {
    let m = instance.lattice.dim();
    let lp = lambda_lp(v, instance);
    let target = -lambda;
    let mut fixed: Vec<usize> = Vec::new();
    for i in 0..m {
        if vertex[i].is_zero() && vertex[m + i].is_zero() {
            // the current vertex stays feasible, so the optimum is unchanged
            fixed.extend([i, m + i]);
            continue;
        }
        let mut trial = fixed.clone();
        trial.extend([i, m + i]);
        let res = solve_with_fixed_zero(&lp, &trial)?;
        if res.status == LpStatus::Optimal && res.optimum.as_ref() == Some(&target) {
            fixed = trial;
            vertex = res.vertex.unwrap();
        }
    }
    let diff: Vec<Rational> = (0..m).map(|i| &vertex[i] - &vertex[m + i]).collect();
    let scale = max_abs(&diff);
    if scale.is_zero() {
        return Err(Error::Invariant("minimal-support vertex is zero".into()));
    }
    let mut coords: IntVector = Vec::with_capacity(m);
    for d in &diff {
        let q = d / &scale;
        if !q.is_integer() || q.abs() > Rational::one() {
            return Err(Error::Invariant(format!(
                "minimal-support vertex {diff:?} does not rescale to a primitive chain"
            )));
        }
        coords.push(if q.is_zero() { 0 } else if q.is_positive() { 1 } else { -1 });
    }
    let u = PrimitiveChain::new(coords, &instance.lattice)
        .map_err(|e| Error::Invariant(format!("extracted vector is not a primitive chain: {e}")))?;
    if mean_cost(v, &u, instance) != target {
        return Err(Error::Invariant("extracted chain does not attain the minimum mean cost".into()));
    }
    Ok(u)
}

/// Smallest integer `Δ` with `λ/g_i ≤ Δ ≤ λ/g_i + 1` for every coordinate.
pub fn step_size(lambda: &Rational, instance: &CvpInstance) -> Result<i64> {
    if !lambda.is_positive() {
        return Err(Error::InvalidInput("step size needs λ > 0".into()));
    }
    let g = instance.lattice.weights();
    let g_min = g.iter().min().unwrap();
    let g_max = g.iter().max().unwrap();
    let lo = lambda / g_min;
    let hi = lambda / g_max + int(1);
    let delta = ceil_to_i64(&lo)?;
    if int(delta) <= hi {
        Ok(delta.max(1))
    } else {
        Err(Error::StepSize { lo: lo.to_string(), hi: hi.to_string() })
    }
}

/// `Δ = ⌈λ / (2 max_{i ∈ supp u} g_i)⌉`.
///
/// Canceling `u` by this amount leaves both directions of every coordinate
/// in `supp u` with nonnegative reduced cost against the optimal dual of the
/// λ-LP, since `c_i^±` move by `2 g_i` per unit step. No new tight
/// directions appear and the heaviest coordinate of `u` stops being tight.
/// The integer always exists and is at most `1 + λ/g_i` on `supp u`, so `λ`
/// does not increase.
pub fn curvature_step(lambda: &Rational, u: &PrimitiveChain, instance: &CvpInstance) -> Result<i64> {
    if !lambda.is_positive() {
        return Err(Error::InvalidInput("step size needs λ > 0".into()));
    }
    let g = instance.lattice.weights();
    let heaviest = u
        .positive()
        .iter()
        .chain(u.negative())
        .map(|&i| &g[i])
        .max()
        .ok_or_else(|| Error::InvalidInput("empty chain".into()))?;
    Ok(ceil_to_i64(&(lambda / (int(2) * heaviest)))?.max(1))
}

/// How [`solve_cvp`] picks `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepRule {
    /// [`curvature_step`].
    #[default]
    Curvature,
    /// [`step_size`], falling back to `Δ = 1` when the interval is empty.
    /// On `A_1` with `t = (10, −10)` it overshoots every time and `λ` drops
    /// by a constant `2` per iteration.
    Interval,
}

/// Exactness data: every cost `c(v, u)` is a multiple of `1/K`, so
/// `0 < λ(v) < δ = 1/(2Km)` cannot happen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingData {
    pub k: BigInt,
    pub delta: Rational,
    pub initial_lambda: Rational,
    /// Bug-detecting cap on the number of iterations.
    pub iteration_cap: usize,
}

pub fn stopping_data(instance: &CvpInstance) -> Result<StoppingData> {
    let lattice = &instance.lattice;
    let m = lattice.dim();
    let g = lattice.weights();
    let twice_gt: Vec<Rational> = g.iter().zip(&instance.target).map(|(gi, ti)| int(2) * gi * ti).collect();
    let k = denominator_lcm(g.iter().chain(twice_gt.iter()));
    let km = Rational::from_integer(&k * BigInt::from(m));
    let delta = (int(2) * &km).recip();
    let (initial_lambda, _) = compute_lambda(&vec![0; m], instance)?;
    let margin = 16 + 2 * m;
    let iteration_cap = if initial_lambda.is_zero() {
        margin
    } else {
        let span = ln_positive(&(&initial_lambda * int(2) * &km)).max(0.0);
        let shrink = -(1.0 - 1.0 / (2.0 * m as f64)).ln();
        let rounds = (span / shrink).ceil() as usize + 1;
        lattice.rank().max(1) * rounds + margin
    };
    Ok(StoppingData { k, delta, initial_lambda, iteration_cap })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    pub index: usize,
    /// Iterate before the step.
    pub v: IntVector,
    pub lambda: Rational,
    pub u: PrimitiveChain,
    pub step: i64,
    /// `w(v + Δu)`
    pub distance_sq: Rational,
    /// `Δ = 1` was taken instead of the rule's step, because the interval was
    /// empty or the larger step broke descent or monotonicity of `λ`.
    pub step_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvpSolution {
    pub closest: IntVector,
    pub distance_sq: Rational,
    pub trace: Vec<IterationRecord>,
    pub final_lambda: Rational,
    pub stopping: StoppingData,
    /// Set when the Voronoi-cell certificate was checked and holds.
    pub certified: bool,
}

impl CvpSolution {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    /// `λ` at every visited iterate, ending with the final zero.
    pub fn lambda_trace(&self) -> Vec<Rational> {
        self.trace
            .iter()
            .map(|r| r.lambda.clone())
            .chain(std::iter::once(self.final_lambda.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Check the answer against the enumerated Voronoi cell (skipped when the
    /// lattice exceeds the oracle limits).
    pub certify: bool,
    pub limits: OracleLimits,
    pub step_rule: StepRule,
    /// Enforce [`StoppingData::iteration_cap`].
    pub enforce_cap: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            certify: true,
            limits: OracleLimits::default(),
            step_rule: StepRule::default(),
            enforce_cap: true,
        }
    }
}

pub fn solve_cvp(instance: &CvpInstance, options: &SolveOptions) -> Result<CvpSolution> {
    let m = instance.lattice.dim();
    let stopping = stopping_data(instance)?;
    let mut v: IntVector = vec![0; m];
    let mut dist = instance.objective(&v);
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut pending: Option<(Rational, Vec<Rational>)> = None;

    loop {
        let (lambda, vertex) = match pending.take() {
            Some(p) => p,
            None => compute_lambda(&v, instance)?,
        };
        if lambda < stopping.delta && !lambda.is_zero() {
            return Err(Error::Invariant(format!(
                "λ = {lambda} is below δ = {} but not zero",
                stopping.delta
            )));
        }
        if lambda.is_zero() {
            let certified = options.certify
                && m <= options.limits.max_coords
                && certify_closest(&v, instance, &options.limits)?;
            return Ok(CvpSolution {
                closest: v,
                distance_sq: dist,
                trace,
                final_lambda: lambda,
                stopping,
                certified,
            });
        }
        if options.enforce_cap && trace.len() >= stopping.iteration_cap {
            return Err(Error::Invariant(format!(
                "iteration cap {} exceeded",
                stopping.iteration_cap
            )));
        }
        let u = extract_chain(&v, instance, &lambda, vertex)?;
        let (mut step, mut fallback) = match options.step_rule {
            StepRule::Curvature => (curvature_step(&lambda, &u, instance)?, false),
            StepRule::Interval => match step_size(&lambda, instance) {
                Ok(d) => (d, false),
                Err(Error::StepSize { lo, hi }) => {
                    log::debug!("iteration {}: empty step interval [{lo}, {hi}], using 1", trace.len());
                    (1, true)
                }
                Err(e) => return Err(e),
            },
        };
        let mut next = advance(&v, &u, step);
        let mut next_dist = instance.objective(&next);
        let mut next_lambda = compute_lambda(&next, instance)?;
        if step > 1 && (next_dist >= dist || next_lambda.0 > lambda) {
            log::warn!(
                "iteration {}: step {step} did not keep descent and λ monotone; retrying with 1",
                trace.len()
            );
            step = 1;
            fallback = true;
            next = advance(&v, &u, step);
            next_dist = instance.objective(&next);
            next_lambda = compute_lambda(&next, instance)?;
        }
        if next_dist >= dist {
            return Err(Error::Invariant(format!("distance did not decrease at iteration {}", trace.len())));
        }
        if next_lambda.0 > lambda {
            return Err(Error::Invariant(format!("λ increased at iteration {}", trace.len())));
        }
        trace.push(IterationRecord {
            index: trace.len(),
            v: std::mem::replace(&mut v, next),
            lambda,
            u,
            step,
            distance_sq: next_dist.clone(),
            step_fallback: fallback,
        });
        dist = next_dist;
        pending = Some(next_lambda);
    }
}

fn advance(v: &[i64], u: &PrimitiveChain, step: i64) -> IntVector {
    v.iter().zip(u.coords()).map(|(a, b)| a + step * b).collect()
}
