//! Upper concave envelope of a sampled function of ρ and the grid supremum
//! of `hull(ρ) − t·E_s(ρ)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::e_s;
use crate::types::ProblemSpec;

/// A function of ρ sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentCurve {
    rho_values: Vec<f64>,
    values: Vec<f64>,
    label: String,
}

impl ExponentCurve {
    pub fn new(rho_values: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if rho_values.len() != values.len() {
            return Err(Error::InvalidCurve(format!(
                "{} rho values vs {} samples",
                rho_values.len(),
                values.len()
            )));
        }
        if rho_values.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidCurve("non-finite rho value".into()));
        }
        if rho_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidCurve("rho values not strictly increasing".into()));
        }
        if let Some(index) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::NonFiniteInput {
                index,
                value: f64::NAN,
            });
        }
        Ok(Self {
            rho_values,
            values,
            label: label.into(),
        })
    }

    pub fn rho_values(&self) -> &[f64] {
        &self.rho_values
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Least concave majorant of a sampled curve, piecewise linear between its
/// vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullResult {
    pub hull_values: Vec<f64>,
    pub vertex_indices: Vec<usize>,
    pub touching: Vec<bool>,
    vertices: Vec<(f64, f64)>,
}

impl HullResult {
    /// Hull value at an arbitrary ρ inside the sampled range.
    pub fn eval(&self, rho: f64) -> f64 {
        let v = &self.vertices;
        let k = v.partition_point(|&(r, _)| r <= rho);
        if k == 0 {
            return v[0].1;
        }
        if k == v.len() {
            return v[v.len() - 1].1;
        }
        let (r0, y0) = v[k - 1];
        let (r1, y1) = v[k];
        y0 + (y1 - y0) * (rho - r0) / (r1 - r0)
    }

    /// The two vertices whose segment contains `rho`. Returns the same vertex
    /// twice at the ends of the range.
    pub fn bracketing_vertices(&self, rho: f64) -> (usize, usize) {
        let v = &self.vertices;
        let k = v.partition_point(|&(r, _)| r <= rho);
        if k == 0 {
            (self.vertex_indices[0], self.vertex_indices[0])
        } else if k == v.len() {
            let last = self.vertex_indices[v.len() - 1];
            if v[v.len() - 1].0 == rho && v.len() > 1 {
                (self.vertex_indices[v.len() - 2], last)
            } else {
                (last, last)
            }
        } else {
            (self.vertex_indices[k - 1], self.vertex_indices[k])
        }
    }

    /// Slope of the hull segment containing `rho`.
    pub fn slope_at(&self, rho: f64) -> f64 {
        let v = &self.vertices;
        if v.len() < 2 {
            return 0.0;
        }
        let k = v.partition_point(|&(r, _)| r <= rho).clamp(1, v.len() - 1);
        let (r0, y0) = v[k - 1];
        let (r1, y1) = v[k];
        (y1 - y0) / (r1 - r0)
    }
}

fn touch_tol(v: f64) -> f64 {
    1e-12 * v.abs().max(1.0)
}

/// Monotone-chain upper hull over the grid points, interpolated linearly
/// between consecutive vertices. Collinear points are not kept as vertices.
pub fn upper_concave_envelope(curve: &ExponentCurve) -> Result<HullResult> {
    if curve.len() < 2 {
        return Err(Error::InvalidCurve("need at least 2 points".into()));
    }
    if let Some(index) = curve.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput {
            index,
            value: curve.values[index],
        });
    }
    let x = &curve.rho_values;
    let y = &curve.values;
    let mut chain: Vec<usize> = Vec::with_capacity(curve.len());
    for i in 0..curve.len() {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            // Pop b when it lies on or below the chord a–i.
            let cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
            if cross >= 0.0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(i);
    }

    let mut hull_values = Vec::with_capacity(curve.len());
    for w in chain.windows(2) {
        let (a, b) = (w[0], w[1]);
        hull_values.push(y[a]);
        for i in (a + 1)..b {
            let lam = (x[i] - x[a]) / (x[b] - x[a]);
            let h = y[a] + (y[b] - y[a]) * lam;
            hull_values.push(h.max(y[i]));
        }
    }
    hull_values.push(y[*chain.last().unwrap()]);

    let touching = hull_values
        .iter()
        .zip(y)
        .map(|(h, v)| (h - v).abs() <= touch_tol(*v))
        .collect();
    let vertices = chain.iter().map(|&i| (x[i], y[i])).collect();
    Ok(HullResult {
        hull_values,
        vertex_indices: chain,
        touching,
        vertices,
    })
}

/// Where the supremum over ρ was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Attainment {
    /// Strictly inside the grid.
    Interior,
    /// At ρ = rho_min.
    LowerEdge,
    /// In the top 1% of the grid; the supremum may lie beyond rho_max.
    UpperEdge,
    /// Objective grows without bound as ρ → ∞ (zero-error regime).
    Unbounded,
}

/// Grid supremum of `hull(ρ) − t·E_s(ρ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupOutcome {
    pub value: f64,
    pub rho_star: f64,
    /// Grid index of the discrete argmax (`None` when unbounded).
    pub index: Option<usize>,
    pub attainment: Attainment,
    /// Asymptotic slope of the objective used for the boundedness decision.
    pub tail_slope: f64,
    /// Set when a grid neighbour of the argmax differs by more than 1e-6.
    pub grid_too_coarse: bool,
}

/// First (smallest-ρ) argmax of a sampled objective, where it sits on the
/// grid, and whether a neighbour differs from it by more than 1e-6.
pub fn classify_argmax(objective: &[f64]) -> (usize, Attainment, bool) {
    let mut best = 0;
    for (i, &v) in objective.iter().enumerate() {
        if v > objective[best] {
            best = i;
        }
    }
    let n = objective.len();
    let top_band = ((n as f64) * 0.01).ceil().max(1.0) as usize;
    let attainment = if best == 0 {
        Attainment::LowerEdge
    } else if best >= n - top_band {
        Attainment::UpperEdge
    } else {
        Attainment::Interior
    };
    let neighbours = [best.checked_sub(1), (best + 1 < n).then_some(best + 1)];
    let grid_too_coarse = neighbours
        .iter()
        .flatten()
        .any(|&j| (objective[j] - objective[best]).abs() > 1e-6);
    (best, attainment, grid_too_coarse)
}

/// Objective tail slope `growth − t·ln|supp P_V|`.
pub fn objective_tail_slope(growth: f64, problem: &ProblemSpec) -> f64 {
    growth - problem.rate() * (problem.source().support_size() as f64).ln()
}

/// Slopes above this are treated as positive (unbounded objective).
pub const TAIL_SLOPE_TOL: f64 = 1e-12;

/// Maximizes `hull(ρ) − t·E_s(ρ, P_V)` over the grid of `curve`.
///
/// `tail_growth` is the linear growth rate of the hulled function as
/// ρ → ∞. A positive objective slope at infinity yields `+∞`. Ties go to the
/// smaller ρ.
pub fn sup_objective(
    hull: &HullResult,
    curve: &ExponentCurve,
    problem: &ProblemSpec,
    tail_growth: f64,
) -> Result<SupOutcome> {
    if hull.hull_values.len() != curve.len() {
        return Err(Error::InvalidCurve("hull and curve lengths differ".into()));
    }
    let tail_slope = objective_tail_slope(tail_growth, problem);
    if tail_slope > TAIL_SLOPE_TOL {
        return Ok(SupOutcome {
            value: f64::INFINITY,
            rho_star: f64::INFINITY,
            index: None,
            attainment: Attainment::Unbounded,
            tail_slope,
            grid_too_coarse: false,
        });
    }
    let t = problem.rate();
    let objective: Vec<f64> = curve
        .rho_values
        .iter()
        .zip(&hull.hull_values)
        .map(|(&rho, &h)| h - t * e_s(rho, problem.source()))
        .collect();
    let (best, attainment, grid_too_coarse) = classify_argmax(&objective);
    Ok(SupOutcome {
        value: objective[best],
        rho_star: curve.rho_values[best],
        index: Some(best),
        attainment,
        tail_slope,
        grid_too_coarse,
    })
}
