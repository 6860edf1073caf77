//! Derivative-free maximization over the probability simplex, or over a
//! product of simplices.
//!
//! A search is a coarse lattice scan (single simplex only) followed by
//! Nelder–Mead on reduced coordinates with Euclidean projection back onto
//! the simplex, then a compass polish along mass-transfer directions
//! `e_i − e_j`. Starts run in parallel and are merged by a deterministic
//! reduction, so results do not depend on thread scheduling.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Solver settings shared by every simplex search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub starts: usize,
    pub seed: u64,
    pub lattice_step: f64,
    pub value_tol: f64,
    pub coord_tol: f64,
    pub max_iters: usize,
    /// Grid points used while searching over pairs; the winner is then
    /// re-evaluated on the full grid.
    pub search_grid_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            seed: 0,
            lattice_step: 0.05,
            value_tol: 1e-8,
            coord_tol: 1e-6,
            max_iters: 400,
            search_grid_points: 200,
        }
    }
}

/// Bookkeeping returned alongside every optimum.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchTrace {
    pub lattice_points: usize,
    pub starts: usize,
    pub evaluations: usize,
    /// Starts whose Nelder–Mead phase met both tolerances before the
    /// iteration cap.
    pub converged_starts: usize,
}

impl SearchTrace {
    pub fn absorb(&mut self, other: &SearchTrace) {
        self.lattice_points += other.lattice_points;
        self.starts += other.starts;
        self.evaluations += other.evaluations;
        self.converged_starts += other.converged_starts;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexOptimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub trace: SearchTrace,
}

/// Higher value wins; equal values go to the lexicographically smaller point.
pub fn better(a: (f64, &[f64]), b: (f64, &[f64])) -> bool {
    match a.0.partial_cmp(&b.0) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => a.1.partial_cmp(b.1) == Some(Ordering::Less),
    }
}

/// Euclidean projection onto the probability simplex, in place.
pub fn project_to_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        for x in v.iter_mut() {
            *x /= s;
        }
    } else {
        let n = v.len() as f64;
        v.iter_mut().for_each(|x| *x = 1.0 / n);
    }
}

/// All lattice points `k/N` on the simplex of dimension `dim`, in
/// lexicographically decreasing order of the integer compositions.
pub fn simplex_lattice(dim: usize, divisions: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if dim == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(dim - 1, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut comps = Vec::new();
    rec(dim, divisions, &mut Vec::with_capacity(dim), &mut comps);
    comps
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / divisions as f64).collect())
        .collect()
}

fn lattice_size(dim: usize, divisions: usize) -> f64 {
    // C(divisions + dim - 1, dim - 1)
    let mut acc = 1.0;
    for i in 1..dim {
        acc *= (divisions + i) as f64 / i as f64;
    }
    acc
}

/// Lattice points with their single-unit-move neighbours.
struct Lattice {
    points: Vec<Vec<f64>>,
    neighbors: Vec<Vec<u32>>,
}

impl Lattice {
    fn build(dim: usize, divisions: usize) -> Self {
        let points = simplex_lattice(dim, divisions);
        let key = |p: &[f64]| -> Vec<usize> {
            p.iter().map(|x| (x * divisions as f64).round() as usize).collect()
        };
        let index: HashMap<Vec<usize>, u32> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (key(p), i as u32))
            .collect();
        let neighbors = points
            .iter()
            .map(|p| {
                let k = key(p);
                let mut out = Vec::new();
                for a in (0..dim).filter(|&a| k[a] > 0) {
                    for b in (0..dim).filter(|&b| b != a) {
                        let mut nb = k.clone();
                        nb[a] -= 1;
                        nb[b] += 1;
                        out.extend(index.get(&nb));
                    }
                }
                out
            })
            .collect();
        Self { points, neighbors }
    }
}

type LatticeCache = HashMap<(usize, usize), Arc<Lattice>>;

/// The lattice for a given size is built once per process.
fn cached_lattice(dim: usize, divisions: usize) -> Arc<Lattice> {
    static CACHE: OnceLock<Mutex<LatticeCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry((dim, divisions))
        .or_insert_with(|| Arc::new(Lattice::build(dim, divisions)))
        .clone()
}

/// Uniform random point on the simplex (normalized exponentials).
pub fn random_simplex_point<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Product of simplices: the point is the concatenation of `blocks.len()`
/// probability vectors with the given lengths.
#[derive(Debug, Clone)]
pub struct SimplexProduct {
    blocks: Vec<usize>,
}

impl SimplexProduct {
    pub fn new(blocks: Vec<usize>) -> Self {
        assert!(blocks.iter().all(|&b| b >= 1));
        Self { blocks }
    }

    pub fn full_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    fn reduced_dim(&self) -> usize {
        self.blocks.iter().map(|b| b - 1).sum()
    }

    fn reduce(&self, full: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.reduced_dim());
        let mut off = 0;
        for &b in &self.blocks {
            out.extend_from_slice(&full[off..off + b - 1]);
            off += b;
        }
        out
    }

    /// Expands reduced coordinates and projects every block onto its simplex.
    fn expand(&self, z: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.full_dim());
        let mut off = 0;
        for &b in &self.blocks {
            let part = &z[off..off + b - 1];
            let start = out.len();
            out.extend_from_slice(part);
            out.push(1.0 - part.iter().sum::<f64>());
            project_to_simplex(&mut out[start..]);
            off += b - 1;
        }
        out
    }

    fn project(&self, full: &mut [f64]) {
        let mut off = 0;
        for &b in &self.blocks {
            project_to_simplex(&mut full[off..off + b]);
            off += b;
        }
    }
}

struct Counted<'a, F> {
    f: &'a F,
    evals: usize,
}

impl<F: Fn(&[f64]) -> f64> Counted<'_, F> {
    fn call(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }
}

/// Nelder–Mead (maximizing) followed by a compass polish from one start.
pub fn local_search<F>(
    space: &SimplexProduct,
    start: &[f64],
    f: &F,
    config: &SolverConfig,
) -> SimplexOptimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut counted = Counted { f, evals: 0 };
    let mut start = start.to_vec();
    space.project(&mut start);
    let rd = space.reduced_dim();
    if rd == 0 {
        let value = counted.call(&start);
        return SimplexOptimum {
            point: start,
            value,
            trace: SearchTrace {
                starts: 1,
                evaluations: counted.evals,
                converged_starts: 1,
                ..Default::default()
            },
        };
    }

    // Nelder–Mead on reduced coordinates.
    let z0 = space.reduce(&start);
    let h = config.lattice_step.max(1e-3);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(rd + 1);
    let x0 = space.expand(&z0);
    simplex.push((z0.clone(), counted.call(&x0)));
    for i in 0..rd {
        let mut z = z0.clone();
        // Step towards the interior when possible.
        z[i] += if z0[i] + h <= 1.0 { h } else { -h };
        let x = space.expand(&z);
        let v = counted.call(&x);
        simplex.push((z, v));
    }
    let mut converged = false;
    for _ in 0..config.max_iters {
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
        let spread = simplex[0].1 - simplex[rd].1;
        let diam = simplex[1..]
            .iter()
            .map(|(z, _)| {
                z.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() <= config.value_tol && diam <= config.coord_tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..rd)
            .map(|k| simplex[..rd].iter().map(|(z, _)| z[k]).sum::<f64>() / rd as f64)
            .collect();
        let worst = simplex[rd].clone();
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };
        // Keep candidates feasible by re-reducing their projection.
        let eval_at = |z: Vec<f64>, counted: &mut Counted<F>| {
            let x = space.expand(&z);
            let v = counted.call(&x);
            (space.reduce(&x), v)
        };
        let refl = eval_at(along(1.0), &mut counted);
        if refl.1 > simplex[0].1 {
            let exp = eval_at(along(2.0), &mut counted);
            simplex[rd] = if exp.1 > refl.1 { exp } else { refl };
            continue;
        }
        if refl.1 > simplex[rd - 1].1 {
            simplex[rd] = refl;
            continue;
        }
        if refl.1 > worst.1 {
            let contr = eval_at(along(0.5), &mut counted);
            if contr.1 >= refl.1 {
                simplex[rd] = contr;
                continue;
            }
        } else {
            let contr = eval_at(along(-0.5), &mut counted);
            if contr.1 > worst.1 {
                simplex[rd] = contr;
                continue;
            }
        }
        let best = simplex[0].0.clone();
        for item in simplex.iter_mut().skip(1) {
            let z: Vec<f64> = best
                .iter()
                .zip(&item.0)
                .map(|(b, z)| b + 0.5 * (z - b))
                .collect();
            *item = eval_at(z, &mut counted);
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
    let mut point = space.expand(&simplex[0].0);
    let mut value = counted.call(&point);
    let start_value = counted.call(&start);
    if better((start_value, &start), (value, &point)) {
        point = start;
        value = start_value;
    }

    // Compass polish: move mass between coordinates of the same block.
    let mut step = 0.01f64.max(config.coord_tol);
    while step >= config.coord_tol {
        let mut improved = false;
        let mut off = 0;
        for &b in &space.blocks {
            for i in 0..b {
                for j in 0..b {
                    if i == j {
                        continue;
                    }
                    let moved = step.min(point[off + j]);
                    if moved <= 0.0 {
                        continue;
                    }
                    let mut cand = point.clone();
                    cand[off + i] += moved;
                    cand[off + j] -= moved;
                    space.project(&mut cand);
                    let v = counted.call(&cand);
                    if v > value {
                        point = cand;
                        value = v;
                        improved = true;
                    }
                }
            }
            off += b;
        }
        if !improved {
            step *= 0.5;
        }
    }

    SimplexOptimum {
        point,
        value,
        trace: SearchTrace {
            lattice_points: 0,
            starts: 1,
            evaluations: counted.evals,
            converged_starts: usize::from(converged),
        },
    }
}

/// Runs [`local_search`] from every start in parallel and keeps the best
/// result (ties to the lexicographically smaller point).
pub fn multi_start<F>(
    space: &SimplexProduct,
    starts: &[Vec<f64>],
    f: &F,
    config: &SolverConfig,
) -> SimplexOptimum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let results: Vec<SimplexOptimum> = starts
        .par_iter()
        .map(|s| local_search(space, s, f, config))
        .collect();
    reduce_best(results)
}

fn reduce_best(results: Vec<SimplexOptimum>) -> SimplexOptimum {
    let mut trace = SearchTrace::default();
    let mut best: Option<SimplexOptimum> = None;
    for r in results {
        trace.absorb(&r.trace);
        let replace = match &best {
            None => true,
            Some(b) => better((r.value, &r.point), (b.value, &b.point)),
        };
        if replace {
            best = Some(r);
        }
    }
    let mut best = best.expect("at least one start");
    best.trace = trace;
    best
}

/// Maximizes `f` over the probability simplex of dimension `dim`.
///
/// The lattice scan at `config.lattice_step` picks the starting points: its
/// local maxima, best first, then seeded random points for a quarter of the
/// start budget. The returned value never falls below the best lattice value.
pub fn maximize_on_simplex<F>(dim: usize, f: &F, config: &SolverConfig) -> SimplexOptimum
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(dim >= 1);
    if dim == 1 {
        let point = vec![1.0];
        let value = f(&point);
        return SimplexOptimum {
            point,
            value,
            trace: SearchTrace {
                lattice_points: 1,
                starts: 0,
                evaluations: 1,
                converged_starts: 0,
            },
        };
    }
    let mut divisions = (1.0 / config.lattice_step).round().max(1.0) as usize;
    while divisions > 1 && lattice_size(dim, divisions) > 200_000.0 {
        divisions /= 2;
    }
    let lat = cached_lattice(dim, divisions);
    let comps = &lat.points;
    let values: Vec<f64> = comps
        .iter()
        .map(|p| {
            let v = f(p);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                v
            }
        })
        .collect();

    // Lattice local maxima under single-unit mass moves.
    let local_max: Vec<usize> = (0..comps.len())
        .filter(|&i| lat.neighbors[i].iter().all(|&j| values[j as usize] <= values[i]))
        .collect();
    let mut local_max = local_max;
    let order = |list: &mut Vec<usize>| {
        list.sort_by(|&a, &b| {
            values[b]
                .partial_cmp(&values[a])
                .unwrap_or(Ordering::Equal)
                .then_with(|| comps[a].partial_cmp(&comps[b]).unwrap_or(Ordering::Equal))
        })
    };
    order(&mut local_max);
    let budget = config.starts.max(1);
    let random = budget / 4;
    let mut starts: Vec<Vec<f64>> = local_max
        .iter()
        .take(budget - random)
        .map(|&i| comps[i].clone())
        .collect();
    if starts.len() < budget - random {
        let mut all: Vec<usize> = (0..comps.len()).collect();
        order(&mut all);
        for i in all {
            if starts.len() >= budget - random {
                break;
            }
            if !starts.contains(&comps[i]) {
                starts.push(comps[i].clone());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..random {
        starts.push(random_simplex_point(dim, &mut rng));
    }

    let space = SimplexProduct::new(vec![dim]);
    let results: Vec<SimplexOptimum> = starts
        .iter()
        .map(|s| local_search(&space, s, f, config))
        .collect();
    let mut best = reduce_best(results);
    best.trace.lattice_points = comps.len();
    best.trace.evaluations += comps.len();
    best
}
