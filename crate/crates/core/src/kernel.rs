//! Scalar exponent functions.
//!
//! All logarithms are natural and all results are in nats. Bhattacharyya
//! distances may be `+∞` (disjoint output supports); such pairs contribute
//! `e^{-∞/ρ} = 0` to the expurgated sums.
//!
//! The expurgated double sums are evaluated in a fixed row-major order with
//! Neumaier-compensated accumulation. When the sum is close to one the
//! logarithm is taken through `ln_1p` of the complementary sum of
//! `1 − e^{-d/ρ}` terms, which keeps the large-ρ regime accurate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::{ChannelSpec, DistributionSet, InputDistribution, SourceSpec};

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Symmetric matrix of Bhattacharyya distances `d_B(x, x̄)` between channel
/// rows, in nats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BhattacharyyaMatrix {
    n: usize,
    dist: Vec<f64>,
}

impl BhattacharyyaMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, xbar: usize) -> f64 {
        self.dist[x * self.n + xbar]
    }

    /// Whether `(x, x̄)` can be confused through the channel (finite distance).
    #[inline]
    pub fn confusable(&self, x: usize, xbar: usize) -> bool {
        self.get(x, xbar).is_finite()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// `d_B(x, x̄) = −ln Σ_y √(W(y|x) W(y|x̄))`, with `−ln 0 = +∞`.
pub fn bhattacharyya_matrix(channel: &ChannelSpec) -> BhattacharyyaMatrix {
    let n = channel.num_inputs();
    let mut dist = vec![0.0; n * n];
    for x in 0..n {
        for xbar in (x + 1)..n {
            let coeff: CompensatedSum = channel
                .row(x)
                .iter()
                .zip(channel.row(xbar))
                .map(|(a, b)| (a * b).sqrt())
                .collect();
            let c = coeff.value();
            // Cauchy–Schwarz bounds c by 1; rounding can push it a hair above.
            let d = if c > 0.0 { (-c.ln()).max(0.0) } else { f64::INFINITY };
            dist[x * n + xbar] = d;
            dist[xbar * n + x] = d;
        }
    }
    BhattacharyyaMatrix { n, dist }
}

/// Source exponent `E_s(ρ, P_V) = (1+ρ) ln Σ_v P_V(v)^{1/(1+ρ)}`.
///
/// Zero-probability atoms are skipped. Evaluated as a log-sum-exp so large ρ
/// stays finite.
pub fn e_s(rho: f64, source: &SourceSpec) -> f64 {
    let s = 1.0 / (1.0 + rho);
    let logs: Vec<f64> = source
        .pmf()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| s * p.ln())
        .collect();
    if logs.len() == 1 {
        return 0.0;
    }
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let acc: CompensatedSum = logs.iter().map(|l| (l - top).exp()).collect();
    ((1.0 + rho) * (top + acc.value().ln())).max(0.0)
}

/// Per-ρ cache of `e^{-d_B/ρ}` and its complement `1 − e^{-d_B/ρ}`.
///
/// Building one costs `|𝒳|²` exponentials; every expurgated evaluation at
/// that ρ then reduces to a bilinear form.
#[derive(Debug, Clone)]
pub struct RhoKernel {
    rho: f64,
    n: usize,
    weight: Vec<f64>,
    defect: Vec<f64>,
}

impl RhoKernel {
    pub fn new(db: &BhattacharyyaMatrix, rho: f64) -> Self {
        let weight = db.dist.iter().map(|&d| (-d / rho).exp()).collect();
        let defect = db.dist.iter().map(|&d| -(-d / rho).exp_m1()).collect();
        Self {
            rho,
            n: db.n,
            weight,
            defect,
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `−ρ ln Σ_{x,x̄} a(x) b(x̄) e^{-d_B(x,x̄)/ρ}` on raw slices.
    ///
    /// Not canonicalized: callers wanting exact symmetry go through
    /// [`RhoKernel::cross`].
    pub fn cross_slices(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.n;
        let mut direct = CompensatedSum::new();
        let mut complement = CompensatedSum::new();
        for (x, &ax) in a.iter().enumerate() {
            if ax == 0.0 {
                continue;
            }
            let w = &self.weight[x * n..(x + 1) * n];
            let dfc = &self.defect[x * n..(x + 1) * n];
            for (xbar, &bx) in b.iter().enumerate() {
                if bx == 0.0 {
                    continue;
                }
                let m = ax * bx;
                direct.add(m * w[xbar]);
                complement.add(m * dfc[xbar]);
            }
        }
        let s = direct.value();
        let v = if s <= 0.0 {
            f64::INFINITY
        } else if s < 0.5 {
            -self.rho * s.ln()
        } else {
            -self.rho * (-complement.value()).ln_1p()
        };
        // S ≤ 1, so only rounding (or −0.0) can push this below zero.
        if v > 0.0 {
            v
        } else {
            0.0
        }
    }

    /// Exactly symmetric cross exponent: the pair is put in lexicographic
    /// order before summation.
    pub fn cross(&self, q: &InputDistribution, q_tilde: &InputDistribution) -> f64 {
        let (a, b) = if q_tilde.pmf() < q.pmf() {
            (q_tilde.pmf(), q.pmf())
        } else {
            (q.pmf(), q_tilde.pmf())
        };
        self.cross_slices(a, b)
    }

    pub fn e_x(&self, q: &InputDistribution) -> f64 {
        self.cross_slices(q.pmf(), q.pmf())
    }

    pub fn prime(&self, q: &InputDistribution, set: &DistributionSet) -> f64 {
        set.members()
            .iter()
            .map(|qt| self.cross(q, qt))
            .fold(f64::INFINITY, f64::min)
    }

    /// `(max_{Q∈𝒬} E_x'(Q, 𝒬, ρ), argmax)`, ties to the lowest index.
    pub fn setmax(&self, set: &DistributionSet) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, q) in set.members().iter().enumerate() {
            let v = self.prime(q, set);
            if v > best.0 {
                best = (v, i);
            }
        }
        best
    }
}

fn check_rho_expurgated(rho: f64) -> Result<()> {
    if !(rho >= 1.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "expurgated functions need finite rho >= 1, got {rho}"
        )));
    }
    Ok(())
}

fn check_len(q: &InputDistribution, db: &BhattacharyyaMatrix) -> Result<()> {
    if q.len() != db.size() {
        return Err(Error::DimensionMismatch {
            what: "input distribution length vs Bhattacharyya matrix",
            expected: db.size(),
            got: q.len(),
        });
    }
    Ok(())
}

/// `E_x(Q, ρ) = −ρ ln Σ_{x,x̄} Q(x)Q(x̄) e^{-d_B(x,x̄)/ρ}`. Always finite.
pub fn e_x(q: &InputDistribution, rho: f64, db: &BhattacharyyaMatrix) -> Result<f64> {
    check_rho_expurgated(rho)?;
    check_len(q, db)?;
    Ok(RhoKernel::new(db, rho).e_x(q))
}

/// Cross form `−ρ ln Σ Q(x)Q̃(x̄) e^{-d_B/ρ}`. Returns `+∞` when every pair in
/// the two supports is at infinite distance.
pub fn e_x_cross(
    q: &InputDistribution,
    q_tilde: &InputDistribution,
    rho: f64,
    db: &BhattacharyyaMatrix,
) -> Result<f64> {
    check_rho_expurgated(rho)?;
    check_len(q, db)?;
    check_len(q_tilde, db)?;
    Ok(RhoKernel::new(db, rho).cross(q, q_tilde))
}

/// `E_x'(Q, 𝒬, ρ) = min_{Q̃∈𝒬} e_x_cross(Q, Q̃, ρ)`.
pub fn e_x_prime(
    q: &InputDistribution,
    set: &DistributionSet,
    rho: f64,
    db: &BhattacharyyaMatrix,
) -> Result<f64> {
    check_rho_expurgated(rho)?;
    check_len(q, db)?;
    check_len(&set.members()[0], db)?;
    Ok(RhoKernel::new(db, rho).prime(q, set))
}

/// `E_x'(𝒬, ρ) = max_{Q∈𝒬} E_x'(Q, 𝒬, ρ)` and the attaining index.
pub fn e_x_prime_setmax(
    set: &DistributionSet,
    rho: f64,
    db: &BhattacharyyaMatrix,
) -> Result<(f64, usize)> {
    check_rho_expurgated(rho)?;
    check_len(&set.members()[0], db)?;
    Ok(RhoKernel::new(db, rho).setmax(set))
}

/// Gallager's random-coding function
/// `E_0(Q, ρ) = −ln Σ_y (Σ_x Q(x) W(y|x)^{1/(1+ρ)})^{1+ρ}`.
///
/// Used only for the labeled random-coding baseline; meaningful for
/// `ρ ∈ [0, 1]`.
pub fn e0_gallager_slice(q: &[f64], rho: f64, channel: &ChannelSpec) -> f64 {
    // Identical rows give exactly 0; the powers below would leave rounding.
    if channel.is_useless() {
        return 0.0;
    }
    let s = 1.0 / (1.0 + rho);
    let mut outer = CompensatedSum::new();
    for y in 0..channel.num_outputs() {
        let mut inner = CompensatedSum::new();
        for (x, &qx) in q.iter().enumerate() {
            let w = channel.row(x)[y];
            if qx > 0.0 && w > 0.0 {
                inner.add(qx * w.powf(s));
            }
        }
        let v = inner.value();
        if v > 0.0 {
            outer.add(v.powf(1.0 + rho));
        }
    }
    (-outer.value().ln()).max(0.0)
}

pub fn e0_gallager(q: &InputDistribution, rho: f64, channel: &ChannelSpec) -> Result<f64> {
    q.check_for(channel)?;
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!("rho must be >= 0, got {rho}")));
    }
    Ok(e0_gallager_slice(q.pmf(), rho, channel))
}

/// Mass `Σ_{d_B(x,x̄)<∞} a(x) b(x̄)` on confusable pairs.
fn confusable_mass(a: &[f64], b: &[f64], db: &BhattacharyyaMatrix) -> f64 {
    let mut acc = CompensatedSum::new();
    for (x, &ax) in a.iter().enumerate() {
        for (xbar, &bx) in b.iter().enumerate() {
            if db.confusable(x, xbar) {
                acc.add(ax * bx);
            }
        }
    }
    acc.value()
}

/// Linear growth rate of `E_x'(𝒬, ρ)` as `ρ → ∞`:
/// `max_Q min_Q̃ −ln Σ_{confusable} Q Q̃`. Zero when all distances are finite.
pub fn set_tail_growth(set: &DistributionSet, db: &BhattacharyyaMatrix) -> f64 {
    set.members()
        .iter()
        .map(|q| {
            set.members()
                .iter()
                .map(|qt| -confusable_mass(q.pmf(), qt.pmf(), db).ln())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
}

/// Linear growth rate of `E_x(Q, ρ)` for a single `Q`.
pub fn tail_growth(q: &InputDistribution, db: &BhattacharyyaMatrix) -> f64 {
    (-confusable_mass(q.pmf(), q.pmf(), db).ln()).max(0.0)
}

/// Largest set of pairwise non-confusable inputs (an independent set of the
/// confusability graph). Exact search up to 24 inputs, greedy beyond.
pub fn max_nonconfusable_set(db: &BhattacharyyaMatrix) -> Vec<usize> {
    let n = db.size();
    if n > 24 {
        let mut chosen: Vec<usize> = Vec::new();
        for x in 0..n {
            if chosen.iter().all(|&c| !db.confusable(x, c)) {
                chosen.push(x);
            }
        }
        return chosen;
    }
    let conflicts: Vec<u32> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x && db.confusable(x, y))
                .fold(0u32, |m, y| m | (1 << y))
        })
        .collect();

    fn search(candidates: u32, current: u32, best: &mut u32, conflicts: &[u32]) {
        if candidates == 0 {
            if current.count_ones() > best.count_ones()
                || (current.count_ones() == best.count_ones() && current < *best)
            {
                *best = current;
            }
            return;
        }
        if current.count_ones() + candidates.count_ones() < best.count_ones() {
            return;
        }
        let v = candidates.trailing_zeros();
        let bit = 1u32 << v;
        search(candidates & !bit & !conflicts[v as usize], current | bit, best, conflicts);
        search(candidates & !bit, current, best, conflicts);
    }

    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = 0u32;
    search(all, 0, &mut best, &conflicts);
    (0..n).filter(|&x| best & (1 << x) != 0).collect()
}

/// Growth rate `ln α` of the single-class `max_Q E_x(Q, ρ)` as `ρ → ∞`,
/// with `α` the size of the largest non-confusable input set, and the
/// uniform distribution on that set which attains it.
pub fn zero_error_growth(db: &BhattacharyyaMatrix) -> (f64, InputDistribution) {
    let set = max_nonconfusable_set(db);
    let mut pmf = vec![0.0; db.size()];
    for &x in &set {
        pmf[x] = 1.0 / set.len() as f64;
    }
    let growth = (set.len() as f64).ln();
    (growth, InputDistribution::from_simplex_point(pmf))
}
