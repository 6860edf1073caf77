//! End-to-end exponents: single-class, two-class for a fixed pair, the
//! optimized pair, and the random-coding baseline.
//!
//! Every grid scan that ends in the top 1% of the grid is repeated on a grid
//! with doubled `rho_max` (up to [`RHO_MAX_CAP`]). The discrete argmax is then
//! refined by golden-section search inside its grid cell. Reported values are
//! always attained by the reported distributions, so they are valid lower
//! bounds even when a search stops early. Exponents are floored at zero.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::golden::golden_max;
use crate::hull::{
    classify_argmax, objective_tail_slope, sup_objective, upper_concave_envelope, Attainment,
    ExponentCurve, HullResult, TAIL_SLOPE_TOL,
};
use crate::kernel::{
    bhattacharyya_matrix, e0_gallager_slice, e_s, set_tail_growth, tail_growth, zero_error_growth,
    BhattacharyyaMatrix, RhoKernel,
};
use crate::partition::gamma_zero;
use crate::simplex::{
    maximize_on_simplex, multi_start, random_simplex_point, SearchTrace, SimplexProduct, SolverConfig,
};
use crate::types::{DistributionSet, InputDistribution, ProblemSpec, RhoGrid};

/// Largest `rho_max` reached by automatic grid extension.
pub const RHO_MAX_CAP: f64 = 1e4;

/// Relative tolerance under which two pair values count as tied.
pub const PAIR_TIE_TOL: f64 = 1e-12;

fn rel_x_tol(rho: f64) -> f64 {
    1e-10 * rho.max(1.0)
}

/// Where and how a supremum over ρ was located.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupInfo {
    pub attainment: Attainment,
    pub tail_slope: f64,
    pub grid_too_coarse: bool,
    /// Final upper end of the grid after extensions.
    pub rho_max: f64,
    pub extensions: usize,
}

impl SupInfo {
    fn unbounded(tail_slope: f64) -> Self {
        Self {
            attainment: Attainment::Unbounded,
            tail_slope,
            grid_too_coarse: false,
            rho_max: f64::INFINITY,
            extensions: 0,
        }
    }
}

fn needs_extension(attainment: Attainment, grid: &RhoGrid) -> bool {
    attainment == Attainment::UpperEdge && grid.rho_max() < RHO_MAX_CAP
}

fn bracket(rhos: &[f64], i: usize) -> (f64, f64) {
    (rhos[i.saturating_sub(1)], rhos[(i + 1).min(rhos.len() - 1)])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QOptimum {
    pub q: InputDistribution,
    pub value: f64,
    pub trace: SearchTrace,
}

/// `max_Q E_x(Q, ρ)` by multi-start search on the simplex.
pub fn max_over_q(rho: f64, db: &BhattacharyyaMatrix, config: &SolverConfig) -> Result<QOptimum> {
    if !(rho >= 1.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!("rho must be finite and >= 1, got {rho}")));
    }
    Ok(max_over_q_with(&RhoKernel::new(db, rho), db.size(), config))
}

fn max_over_q_with(kernel: &RhoKernel, n: usize, config: &SolverConfig) -> QOptimum {
    let f = |p: &[f64]| kernel.cross_slices(p, p);
    let opt = maximize_on_simplex(n, &f, config);
    QOptimum {
        q: InputDistribution::from_simplex_point(opt.point),
        value: opt.value,
        trace: opt.trace,
    }
}

/// Single-class exponent and the distribution/ρ attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleClassResult {
    pub value: f64,
    pub q: InputDistribution,
    pub rho: f64,
    pub sup: SupInfo,
    pub trace: SearchTrace,
}

/// `sup_{ρ≥1} { max_Q E_x(Q,ρ) − t·E_s(ρ) }`.
pub fn single_class_exponent(
    problem: &ProblemSpec,
    grid: &RhoGrid,
    config: &SolverConfig,
) -> Result<SingleClassResult> {
    grid.require_expurgated()?;
    let db = bhattacharyya_matrix(problem.channel());
    let (growth, q_zero) = zero_error_growth(&db);
    let tail_slope = objective_tail_slope(growth, problem);
    if tail_slope > TAIL_SLOPE_TOL {
        return Ok(SingleClassResult {
            value: f64::INFINITY,
            q: q_zero,
            rho: f64::INFINITY,
            sup: SupInfo::unbounded(tail_slope),
            trace: SearchTrace::default(),
        });
    }
    let t = problem.rate();
    let source = problem.source();
    let n = db.size();
    let mut trace = SearchTrace::default();
    let mut g = *grid;
    let mut extensions = 0;
    loop {
        let rhos = g.values();
        let optima: Vec<QOptimum> = rhos
            .par_iter()
            .map(|&rho| max_over_q_with(&RhoKernel::new(&db, rho), n, config))
            .collect();
        let objective: Vec<f64> = optima
            .iter()
            .zip(&rhos)
            .map(|(o, &rho)| o.value - t * e_s(rho, source))
            .collect();
        let (best, attainment, grid_too_coarse) = classify_argmax(&objective);
        if needs_extension(attainment, &g) {
            g = g.extended(RHO_MAX_CAP)?;
            extensions += 1;
            continue;
        }
        for o in &optima {
            trace.absorb(&o.trace);
        }
        let mut result = SingleClassResult {
            value: objective[best],
            q: optima[best].q.clone(),
            rho: rhos[best],
            sup: SupInfo {
                attainment,
                tail_slope,
                grid_too_coarse,
                rho_max: g.rho_max(),
                extensions,
            },
            trace: SearchTrace::default(),
        };
        let (lo, hi) = bracket(&rhos, best);
        let mut seen: Vec<(f64, QOptimum)> = Vec::new();
        golden_max(
            |rho| {
                let o = max_over_q_with(&RhoKernel::new(&db, rho), n, config);
                let v = o.value - t * e_s(rho, source);
                seen.push((rho, o));
                v
            },
            lo,
            hi,
            rel_x_tol(hi),
        );
        for (rho, o) in seen {
            trace.absorb(&o.trace);
            let v = o.value - t * e_s(rho, source);
            if v > result.value {
                result.value = v;
                result.q = o.q;
                result.rho = rho;
            }
        }
        result.value = result.value.max(0.0);
        result.trace = trace;
        return Ok(result);
    }
}

/// Single-class exponent with the input distribution held fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedQResult {
    pub value: f64,
    pub rho: f64,
    pub sup: SupInfo,
}

/// `sup_{ρ≥1} { E_x(Q,ρ) − t·E_s(ρ) }` for a given `Q`.
pub fn single_class_fixed_q(
    q: &InputDistribution,
    problem: &ProblemSpec,
    grid: &RhoGrid,
) -> Result<FixedQResult> {
    grid.require_expurgated()?;
    q.check_for(problem.channel())?;
    let db = bhattacharyya_matrix(problem.channel());
    let tail_slope = objective_tail_slope(tail_growth(q, &db), problem);
    if tail_slope > TAIL_SLOPE_TOL {
        return Ok(FixedQResult {
            value: f64::INFINITY,
            rho: f64::INFINITY,
            sup: SupInfo::unbounded(tail_slope),
        });
    }
    let t = problem.rate();
    let f = |rho: f64| RhoKernel::new(&db, rho).e_x(q) - t * e_s(rho, problem.source());
    let mut g = *grid;
    let mut extensions = 0;
    loop {
        let rhos = g.values();
        let objective: Vec<f64> = rhos.iter().map(|&r| f(r)).collect();
        let (best, attainment, grid_too_coarse) = classify_argmax(&objective);
        if needs_extension(attainment, &g) {
            g = g.extended(RHO_MAX_CAP)?;
            extensions += 1;
            continue;
        }
        let (lo, hi) = bracket(&rhos, best);
        let (r, v) = golden_max(f, lo, hi, rel_x_tol(hi));
        let (value, rho) = if v > objective[best] {
            (v, r)
        } else {
            (objective[best], rhos[best])
        };
        return Ok(FixedQResult {
            value: value.max(0.0),
            rho,
            sup: SupInfo {
                attainment,
                tail_slope,
                grid_too_coarse,
                rho_max: g.rho_max(),
                extensions,
            },
        });
    }
}

/// Threshold and time-sharing data for the two-class construction at ρ*.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSplit {
    /// False when ρ* sits on the curve itself, so no mixing is needed.
    pub mixing: bool,
    pub gamma_prime: f64,
    pub gamma: f64,
    /// Hull vertices bracketing ρ* (equal to ρ* without mixing).
    pub rho1: f64,
    pub rho2: f64,
    /// Index in the pair of the member attaining the set maximum at `rho1`
    /// (low-probability class) and at `rho2` (high-probability class).
    pub class1_member: usize,
    pub class2_member: usize,
    /// Weight of the `rho1` vertex in the convex combination.
    pub weight1: f64,
}

impl GammaSplit {
    fn no_mixing(rho: f64, member: usize) -> Self {
        Self {
            mixing: false,
            gamma_prime: 1.0,
            gamma: 1.0,
            rho1: rho,
            rho2: rho,
            class1_member: member,
            class2_member: member,
            weight1: 1.0,
        }
    }
}

/// Two-class exponent of a fixed distribution set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairExponent {
    pub value: f64,
    pub rho: f64,
    pub split: GammaSplit,
    pub sup: SupInfo,
}

impl PairExponent {
    pub fn gamma0(&self) -> f64 {
        self.split.gamma
    }
}

/// Set maximum `max_{Q∈𝒬} E_x'(Q,𝒬,ρ)` and its argmax at every ρ.
pub fn sample_setmax(set: &DistributionSet, db: &BhattacharyyaMatrix, rhos: &[f64]) -> Vec<(f64, usize)> {
    rhos.iter().map(|&r| RhoKernel::new(db, r).setmax(set)).collect()
}

/// `sup_{ρ≥1} { hull[E_x'(𝒬,·)](ρ) − t·E_s(ρ) }` for a fixed set 𝒬.
pub fn two_class_exponent_fixed_pair(
    pair: &DistributionSet,
    problem: &ProblemSpec,
    grid: &RhoGrid,
) -> Result<PairExponent> {
    if pair.len() != 2 {
        return Err(Error::DimensionMismatch {
            what: "two-class distribution set size",
            expected: 2,
            got: pair.len(),
        });
    }
    set_exponent(pair, problem, grid)
}

/// Same as [`two_class_exponent_fixed_pair`] for a set of any size.
pub fn set_exponent(set: &DistributionSet, problem: &ProblemSpec, grid: &RhoGrid) -> Result<PairExponent> {
    grid.require_expurgated()?;
    for q in set.members() {
        q.check_for(problem.channel())?;
    }
    let db = bhattacharyya_matrix(problem.channel());
    let growth = set_tail_growth(set, &db);
    let tail_slope = objective_tail_slope(growth, problem);
    if tail_slope > TAIL_SLOPE_TOL {
        return Ok(PairExponent {
            value: f64::INFINITY,
            rho: f64::INFINITY,
            split: GammaSplit::no_mixing(f64::INFINITY, 0),
            sup: SupInfo::unbounded(tail_slope),
        });
    }
    let t = problem.rate();
    let source = problem.source();
    let mut g = *grid;
    let mut extensions = 0;
    loop {
        let rhos = g.values();
        let sampled = sample_setmax(set, &db, &rhos);
        let values: Vec<f64> = sampled.iter().map(|s| s.0).collect();
        let curve = ExponentCurve::new(rhos.clone(), values, "setmax")?;
        let hull = upper_concave_envelope(&curve)?;
        let sup = sup_objective(&hull, &curve, problem, growth)?;
        if needs_extension(sup.attainment, &g) {
            g = g.extended(RHO_MAX_CAP)?;
            extensions += 1;
            continue;
        }
        let best = sup.index.expect("bounded objective has an argmax");
        let (lo, hi) = bracket(&rhos, best);
        let refine = |rho: f64| {
            hull.eval(rho).max(RhoKernel::new(&db, rho).setmax(set).0) - t * e_s(rho, source)
        };
        let (r, v) = golden_max(refine, lo, hi, rel_x_tol(hi));
        let (value, rho) = if v > sup.value { (v, r) } else { (sup.value, sup.rho_star) };
        let split = gamma_split(&hull, &sampled, &rhos, rho, set, &db, problem)?;
        return Ok(PairExponent {
            value: value.max(0.0),
            rho,
            split,
            sup: SupInfo {
                attainment: sup.attainment,
                tail_slope,
                grid_too_coarse: sup.grid_too_coarse,
                rho_max: g.rho_max(),
                extensions,
            },
        });
    }
}

fn gamma_split(
    hull: &HullResult,
    sampled: &[(f64, usize)],
    rhos: &[f64],
    rho: f64,
    set: &DistributionSet,
    db: &BhattacharyyaMatrix,
    problem: &ProblemSpec,
) -> Result<GammaSplit> {
    let (here, member) = RhoKernel::new(db, rho).setmax(set);
    let (i1, i2) = hull.bracketing_vertices(rho);
    let on_curve = here >= hull.eval(rho) - 1e-12 * here.abs().max(1.0);
    if on_curve || i1 == i2 || rhos[i2] - rhos[i1] < 1e-12 {
        return Ok(GammaSplit::no_mixing(rho, member));
    }
    let (rho1, rho2) = (rhos[i1], rhos[i2]);
    let gz = gamma_zero(sampled[i1].0, rho1, sampled[i2].0, rho2, rho, problem)?;
    Ok(GammaSplit {
        mixing: true,
        gamma_prime: gz.gamma_prime,
        gamma: gz.gamma,
        rho1,
        rho2,
        class1_member: sampled[i1].1,
        class2_member: sampled[i2].1,
        weight1: (rho2 - rho) / (rho2 - rho1),
    })
}

/// Grid objective of a pair given by its concatenated coordinates.
struct PairObjective {
    n: usize,
    kernels: Vec<RhoKernel>,
    rhos: Vec<f64>,
    penalty: Vec<f64>,
}

impl PairObjective {
    fn new(db: &BhattacharyyaMatrix, rhos: Vec<f64>, problem: &ProblemSpec) -> Self {
        Self {
            n: db.size(),
            kernels: rhos.iter().map(|&r| RhoKernel::new(db, r)).collect(),
            penalty: rhos.iter().map(|&r| problem.rate() * e_s(r, problem.source())).collect(),
            rhos,
        }
    }

    fn eval(&self, point: &[f64]) -> f64 {
        let (a, b) = point.split_at(self.n);
        let values: Vec<f64> = self
            .kernels
            .iter()
            .map(|k| {
                let c12 = k.cross_slices(a, b);
                c12.min(k.cross_slices(a, a).max(k.cross_slices(b, b)))
            })
            .collect();
        if values.iter().any(|v| !v.is_finite()) {
            return f64::NEG_INFINITY;
        }
        let Ok(curve) = ExponentCurve::new(self.rhos.clone(), values, "pair") else {
            return f64::NEG_INFINITY;
        };
        let Ok(hull) = upper_concave_envelope(&curve) else {
            return f64::NEG_INFINITY;
        };
        hull.hull_values
            .iter()
            .zip(&self.penalty)
            .map(|(h, p)| h - p)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Whether an optimal pair was searched for or given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    Optimized,
    Fixed,
}

/// Boundary and resolution flags of every reported value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryFlags {
    pub single_class: SupInfo,
    pub two_class: SupInfo,
    pub baseline_at_edge: Option<bool>,
}

/// Full result of an exponent computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentReport {
    pub pair_mode: PairMode,
    pub rate: f64,
    pub single_class_value: f64,
    pub single_class_q: Vec<f64>,
    pub single_class_rho: f64,
    pub two_class_value: f64,
    pub two_class_pair: Vec<Vec<f64>>,
    pub two_class_rho: f64,
    pub gamma0: f64,
    pub gamma_split: GammaSplit,
    /// Fixed-Q single-class values of the pair members, in pair order.
    pub fixed_q_single_class: Vec<f64>,
    /// Random-coding exponent over ρ ∈ [0, 1]; reference curve only.
    pub baseline_random_coding: Option<f64>,
    pub boundary_flags: BoundaryFlags,
    pub solver_trace: SearchTrace,
    /// Best objective seen by the pair search on the coarse subgrid.
    pub pair_search_value: Option<f64>,
}

impl ExponentReport {
    /// Best of the fixed-Q single-class values of the pair members.
    pub fn best_fixed_q(&self) -> f64 {
        self.fixed_q_single_class
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }
}

fn pair_key(set: &DistributionSet) -> Vec<f64> {
    set.members().iter().flat_map(|q| q.pmf().iter().cloned()).collect()
}

fn is_collapsed(set: &DistributionSet) -> bool {
    set.members().windows(2).all(|w| w[0] == w[1])
}

/// Candidate preference: clearly higher value wins; within [`PAIR_TIE_TOL`]
/// a collapsed pair wins, then the lexicographically smaller pair.
fn prefer(a: &(DistributionSet, PairExponent), b: &(DistributionSet, PairExponent)) -> bool {
    let (va, vb) = (a.1.value, b.1.value);
    if va == vb && va.is_infinite() {
        return is_collapsed(&a.0) && !is_collapsed(&b.0)
            || is_collapsed(&a.0) == is_collapsed(&b.0) && pair_key(&a.0) < pair_key(&b.0);
    }
    let tol = PAIR_TIE_TOL * va.abs().max(vb.abs()).max(1.0);
    if va > vb + tol {
        return true;
    }
    if vb > va + tol {
        return false;
    }
    match (is_collapsed(&a.0), is_collapsed(&b.0)) {
        (true, false) => true,
        (false, true) => false,
        _ => pair_key(&a.0) < pair_key(&b.0),
    }
}

/// Optimized two-class exponent with the full report.
pub fn two_class_exponent_optimal(
    problem: &ProblemSpec,
    grid: &RhoGrid,
    config: &SolverConfig,
) -> Result<ExponentReport> {
    exponent_report(problem, None, grid, config, false)
}

/// Computes the single-class exponent, the two-class exponent (of `pair`
/// when given, of the best pair found otherwise) and optionally the
/// baseline.
pub fn exponent_report(
    problem: &ProblemSpec,
    pair: Option<&DistributionSet>,
    grid: &RhoGrid,
    config: &SolverConfig,
    with_baseline: bool,
) -> Result<ExponentReport> {
    let single = single_class_exponent(problem, grid, config)?;
    let mut trace = single.trace.clone();
    let seed = DistributionSet::pair(single.q.clone(), single.q.clone())?;

    let mut search_value = None;
    let (pair_mode, chosen) = match pair {
        Some(p) => {
            let p = p.canonical();
            let ex = two_class_exponent_fixed_pair(&p, problem, grid)?;
            (PairMode::Fixed, (p, ex))
        }
        None => {
            let mut seed_ex = two_class_exponent_fixed_pair(&seed, problem, grid)?;
            // The seed attains the single-class value at its own ρ*.
            if seed_ex.value < single.value {
                seed_ex.value = single.value;
                seed_ex.rho = single.rho;
                seed_ex.split = GammaSplit::no_mixing(single.rho, 0);
            }
            let mut best = (seed.clone(), seed_ex);
            if best.1.value.is_finite() {
                let (found, value, search_trace) = search_pairs(problem, grid, &single, config)?;
                trace.absorb(&search_trace);
                search_value = Some(value);
                let mut candidates = vec![found.clone()];
                for q in found.members() {
                    candidates.push(DistributionSet::pair(q.clone(), q.clone())?);
                }
                // The seed is kept unless a candidate beats it outside the tie band.
                let seed_value = best.1.value;
                let tol = PAIR_TIE_TOL * seed_value.abs().max(1.0);
                let mut challenger: Option<(DistributionSet, PairExponent)> = None;
                for c in candidates {
                    let c = c.canonical();
                    let ex = two_class_exponent_fixed_pair(&c, problem, grid)?;
                    let cand = (c, ex);
                    if challenger.as_ref().is_none_or(|b| prefer(&cand, b)) {
                        challenger = Some(cand);
                    }
                }
                if let Some(c) = challenger.filter(|c| c.1.value > seed_value + tol) {
                    best = c;
                }
            }
            (PairMode::Optimized, best)
        }
    };
    let (set, ex) = chosen;

    let fixed_q = set
        .members()
        .iter()
        .map(|q| single_class_fixed_q(q, problem, grid).map(|r| r.value))
        .collect::<Result<Vec<f64>>>()?;

    let (baseline, baseline_at_edge) = if with_baseline {
        let b = baseline_random_coding(problem, &RhoGrid::unit_interval(101)?, config)?;
        (Some(b.value), Some(b.at_edge))
    } else {
        (None, None)
    };

    Ok(ExponentReport {
        pair_mode,
        rate: problem.rate(),
        single_class_value: single.value,
        single_class_q: single.q.pmf().to_vec(),
        single_class_rho: single.rho,
        two_class_value: ex.value,
        two_class_pair: set.members().iter().map(|q| q.pmf().to_vec()).collect(),
        two_class_rho: ex.rho,
        gamma0: ex.gamma0(),
        gamma_split: ex.split.clone(),
        fixed_q_single_class: fixed_q,
        baseline_random_coding: baseline,
        boundary_flags: BoundaryFlags {
            single_class: single.sup,
            two_class: ex.sup,
            baseline_at_edge,
        },
        solver_trace: trace,
        pair_search_value: search_value,
    })
}

/// Evenly spaced subset (by index) of the grid values, endpoints included.
/// Being a subset keeps every search value below the full-grid value of the
/// same pair.
fn coarse_subgrid(grid: &RhoGrid, points: usize) -> Vec<f64> {
    let all = grid.values();
    let m = points.clamp(2, all.len());
    let last = all.len() - 1;
    let mut idx: Vec<usize> = (0..m).map(|i| (i * last + (m - 1) / 2) / (m - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| all[i]).collect()
}

/// Multi-start search over pairs on a subset of the grid.
fn search_pairs(
    problem: &ProblemSpec,
    grid: &RhoGrid,
    single: &SingleClassResult,
    config: &SolverConfig,
) -> Result<(DistributionSet, f64, SearchTrace)> {
    let db = bhattacharyya_matrix(problem.channel());
    let n = db.size();
    let objective = PairObjective::new(&db, coarse_subgrid(grid, config.search_grid_points), problem);
    let f = |p: &[f64]| objective.eval(p);

    let q_star = single.q.pmf();
    let mut starts: Vec<Vec<f64>> = vec![[q_star, q_star].concat()];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        starts.push([q_star, &e[..]].concat());
    }
    let budget = config.starts.max(1);
    let random = (budget / 4).max(budget.saturating_sub(starts.len()));
    starts.truncate(budget - random);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    while starts.len() < budget {
        let a = random_simplex_point(n, &mut rng);
        let b = random_simplex_point(n, &mut rng);
        starts.push([a, b].concat());
    }
    let space = SimplexProduct::new(vec![n, n]);
    let opt = multi_start(&space, &starts, &f, config);
    let (a, b) = opt.point.split_at(n);
    let set = DistributionSet::pair(
        InputDistribution::from_simplex_point(a.to_vec()),
        InputDistribution::from_simplex_point(b.to_vec()),
    )?;
    Ok((set, opt.value, opt.trace))
}

/// Random-coding baseline: value, maximizing ρ and whether ρ sits at an end.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineResult {
    pub value: f64,
    pub rho: f64,
    pub at_edge: bool,
}

/// `sup_{ρ∈[0,1]} { max_Q E_0(Q,ρ) − t·E_s(ρ) }`, used only as a reference.
pub fn baseline_random_coding(
    problem: &ProblemSpec,
    grid: &RhoGrid,
    config: &SolverConfig,
) -> Result<BaselineResult> {
    if grid.rho_min() < 0.0 || grid.rho_max() > 1.0 {
        return Err(Error::InvalidGrid(format!(
            "baseline grid must lie in [0, 1], got [{}, {}]",
            grid.rho_min(),
            grid.rho_max()
        )));
    }
    let channel = problem.channel();
    let n = channel.num_inputs();
    let t = problem.rate();
    let f = |rho: f64| {
        let inner = |q: &[f64]| e0_gallager_slice(q, rho, channel);
        maximize_on_simplex(n, &inner, config).value - t * e_s(rho, problem.source())
    };
    let rhos = grid.values();
    let objective: Vec<f64> = rhos.par_iter().map(|&r| f(r)).collect();
    let (best, attainment, _) = classify_argmax(&objective);
    let (lo, hi) = bracket(&rhos, best);
    let (r, v) = golden_max(f, lo, hi, 1e-10);
    let (value, rho) = if v > objective[best] { (v, r) } else { (objective[best], rhos[best]) };
    let at_edge = attainment != Attainment::Interior;
    Ok(BaselineResult {
        value: value.max(0.0),
        rho,
        at_edge,
    })
}
