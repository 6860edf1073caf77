//! Validated domain objects: channel, source, input distributions, problem
//! instance and the rho evaluation grid.
//!
//! Every constructor enforces the type's invariants. Probability vectors whose
//! sum is within [`STRICT_TOL`] of one are accepted unchanged; those within
//! [`RENORM_TOL`] are renormalized; anything further off is rejected. Zero
//! probabilities are allowed everywhere.

use serde::Serialize;

use crate::error::{Error, Result};

/// Row sums within this distance of one are accepted as-is.
pub const STRICT_TOL: f64 = 1e-12;
/// Row sums within this distance of one are renormalized instead of rejected.
pub const RENORM_TOL: f64 = 1e-9;

fn normalize_pmf(values: &[f64], what: &'static str, row: Option<usize>) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Empty(what));
    }
    let mut out = Vec::with_capacity(values.len());
    let mut clamped = false;
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || !(-RENORM_TOL..=1.0 + RENORM_TOL).contains(&value) {
            return Err(Error::EntryOutOfRange { what, index, value });
        }
        if !(0.0..=1.0).contains(&value) {
            clamped = true;
        }
        out.push(value.clamp(0.0, 1.0));
    }
    let sum: f64 = out.iter().sum();
    let off = (sum - 1.0).abs();
    if off > RENORM_TOL {
        return Err(match row {
            Some(row) => Error::NonStochasticRow { row, sum },
            None => Error::NotNormalized { what, sum },
        });
    }
    if off > STRICT_TOL || clamped {
        for p in &mut out {
            *p /= sum;
        }
    }
    Ok(out)
}

/// A discrete memoryless channel given by its row-stochastic matrix `W(y|x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelSpec {
    num_inputs: usize,
    num_outputs: usize,
    rows: Vec<Vec<f64>>,
}

impl ChannelSpec {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("channel matrix"));
        }
        let num_outputs = rows[0].len();
        if num_outputs == 0 {
            return Err(Error::Empty("channel output alphabet"));
        }
        let mut checked = Vec::with_capacity(rows.len());
        for (row, values) in rows.iter().enumerate() {
            if values.len() != num_outputs {
                return Err(Error::DimensionMismatch {
                    what: "channel row length",
                    expected: num_outputs,
                    got: values.len(),
                });
            }
            checked.push(normalize_pmf(values, "channel row", Some(row))?);
        }
        Ok(Self {
            num_inputs: checked.len(),
            num_outputs,
            rows: checked,
        })
    }

    /// The three-input channel with crossover `eps` between the first two
    /// inputs and leakage `delta` from the third.
    pub fn nonsymmetric_ternary(eps: f64, delta: f64) -> Result<Self> {
        Self::new(vec![
            vec![1.0 - 2.0 * eps, eps, eps],
            vec![eps, 1.0 - 2.0 * eps, eps],
            vec![delta, delta, 1.0 - 2.0 * delta],
        ])
    }

    pub fn binary_symmetric(p: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x]
    }

    /// True when every row is identical, i.e. the output carries no
    /// information about the input.
    pub fn is_useless(&self) -> bool {
        self.rows.iter().all(|r| r == &self.rows[0])
    }
}

/// Source distribution `P_V` over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceSpec {
    pmf: Vec<f64>,
}

impl SourceSpec {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        Ok(Self {
            pmf: normalize_pmf(&pmf, "source pmf", None)?,
        })
    }

    /// Binary source with `P_V(0) = p0`.
    pub fn binary(p0: f64) -> Result<Self> {
        Self::new(vec![p0, 1.0 - p0])
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn alphabet_size(&self) -> usize {
        self.pmf.len()
    }

    pub fn support_size(&self) -> usize {
        self.pmf.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn is_deterministic(&self) -> bool {
        self.support_size() == 1
    }
}

/// Codeword symbol distribution `Q` over the channel input alphabet.
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize)]
pub struct InputDistribution {
    pmf: Vec<f64>,
}

impl InputDistribution {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        Ok(Self {
            pmf: normalize_pmf(&pmf, "input distribution", None)?,
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("input distribution"));
        }
        Ok(Self {
            pmf: vec![1.0 / n as f64; n],
        })
    }

    /// Wraps a vector already known to lie on the simplex (e.g. produced by
    /// projection). Falls back to full validation in debug builds.
    pub(crate) fn from_simplex_point(pmf: Vec<f64>) -> Self {
        debug_assert!(normalize_pmf(&pmf, "simplex point", None).is_ok());
        Self { pmf }
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pmf.is_empty()
    }

    pub fn check_for(&self, channel: &ChannelSpec) -> Result<()> {
        if self.len() != channel.num_inputs() {
            return Err(Error::DimensionMismatch {
                what: "input distribution length vs channel inputs",
                expected: channel.num_inputs(),
                got: self.len(),
            });
        }
        Ok(())
    }

    /// Total variation distance `½ Σ |Q(x) − Q'(x)|`.
    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * self
            .pmf
            .iter()
            .zip(&other.pmf)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

/// Ordered, nonempty set of input distributions sharing one alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSet {
    members: Vec<InputDistribution>,
}

impl DistributionSet {
    pub fn new(members: Vec<InputDistribution>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptySet)?;
        for m in &members[1..] {
            if m.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    what: "distribution set member length",
                    expected: first.len(),
                    got: m.len(),
                });
            }
        }
        Ok(Self { members })
    }

    pub fn pair(a: InputDistribution, b: InputDistribution) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn members(&self) -> &[InputDistribution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.members[0].len()
    }

    /// Same members sorted lexicographically; an unordered pair has one
    /// canonical representative.
    pub fn canonical(&self) -> Self {
        let mut members = self.members.clone();
        members.sort_by(|a, b| {
            a.pmf()
                .partial_cmp(b.pmf())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Self { members }
    }
}

/// One problem instance: channel, source and transmission rate `t = k/n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSpec {
    channel: ChannelSpec,
    source: SourceSpec,
    rate_t: f64,
}

impl ProblemSpec {
    pub fn new(channel: ChannelSpec, source: SourceSpec, rate_t: f64) -> Result<Self> {
        if !(rate_t.is_finite() && rate_t > 0.0) {
            return Err(Error::NonPositiveRate(rate_t));
        }
        Ok(Self {
            channel,
            source,
            rate_t,
        })
    }

    pub fn channel(&self) -> &ChannelSpec {
        &self.channel
    }

    pub fn source(&self) -> &SourceSpec {
        &self.source
    }

    pub fn rate(&self) -> f64 {
        self.rate_t
    }

    /// Re-runs validation. Returns an identical copy for any spec built
    /// through the public constructors.
    pub fn validate(&self) -> Result<Self> {
        validate_problem(self.channel.rows.clone(), self.source.pmf.clone(), self.rate_t)
    }
}

/// Builds and validates a problem from raw matrices.
pub fn validate_problem(rows: Vec<Vec<f64>>, source: Vec<f64>, rate_t: f64) -> Result<ProblemSpec> {
    ProblemSpec::new(ChannelSpec::new(rows)?, SourceSpec::new(source)?, rate_t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Geometric,
    Linear,
}

/// Discretization of the rho half-line used for the suprema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoGrid {
    rho_min: f64,
    rho_max: f64,
    num_points: usize,
    spacing: Spacing,
}

impl Default for RhoGrid {
    fn default() -> Self {
        Self {
            rho_min: 1.0,
            rho_max: 100.0,
            num_points: 2000,
            spacing: Spacing::Geometric,
        }
    }
}

impl RhoGrid {
    pub fn new(rho_min: f64, rho_max: f64, num_points: usize, spacing: Spacing) -> Result<Self> {
        if !(rho_min.is_finite() && rho_max.is_finite()) || rho_min < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "bounds must be finite and nonnegative, got [{rho_min}, {rho_max}]"
            )));
        }
        if rho_max <= rho_min {
            return Err(Error::InvalidGrid(format!(
                "rho_max {rho_max} must exceed rho_min {rho_min}"
            )));
        }
        if num_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {num_points}")));
        }
        if spacing == Spacing::Geometric && rho_min <= 0.0 {
            return Err(Error::InvalidGrid("geometric spacing needs rho_min > 0".into()));
        }
        let grid = Self {
            rho_min,
            rho_max,
            num_points,
            spacing,
        };
        let values = grid.values();
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("grid values not strictly increasing".into()));
        }
        Ok(grid)
    }

    /// Linear grid on `[0, 1]`, used for the random-coding baseline.
    pub fn unit_interval(num_points: usize) -> Result<Self> {
        Self::new(0.0, 1.0, num_points, Spacing::Linear)
    }

    pub fn rho_min(&self) -> f64 {
        self.rho_min
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.num_points;
        let last = (n - 1) as f64;
        let mut out: Vec<f64> = match self.spacing {
            Spacing::Geometric => {
                let log_ratio = (self.rho_max / self.rho_min).ln();
                (0..n)
                    .map(|i| self.rho_min * (log_ratio * i as f64 / last).exp())
                    .collect()
            }
            Spacing::Linear => (0..n)
                .map(|i| self.rho_min + (self.rho_max - self.rho_min) * i as f64 / last)
                .collect(),
        };
        out[0] = self.rho_min;
        out[n - 1] = self.rho_max;
        out
    }

    pub(crate) fn require_expurgated(&self) -> Result<()> {
        if self.rho_min < 1.0 {
            return Err(Error::InvalidGrid(format!(
                "expurgated exponents need rho_min >= 1, got {}",
                self.rho_min
            )));
        }
        Ok(())
    }

    /// Same spacing with `rho_max` doubled (capped at `cap`). The point count
    /// grows so the spacing density stays roughly constant.
    pub fn extended(&self, cap: f64) -> Result<Self> {
        let new_max = (2.0 * self.rho_max).min(cap);
        let scale = match self.spacing {
            Spacing::Geometric => {
                (new_max / self.rho_min).ln() / (self.rho_max / self.rho_min).ln()
            }
            Spacing::Linear => (new_max - self.rho_min) / (self.rho_max - self.rho_min),
        };
        let points = ((self.num_points - 1) as f64 * scale).ceil() as usize + 1;
        Self::new(self.rho_min, new_max, points, self.spacing)
    }

    pub fn with_rho_max(&self, rho_max: f64) -> Result<Self> {
        Self::new(self.rho_min, rho_max, self.num_points, self.spacing)
    }

    pub fn with_points(&self, num_points: usize) -> Result<Self> {
        Self::new(self.rho_min, self.rho_max, num_points, self.spacing)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ternary_rows() -> Vec<Vec<f64>> {
        let (e, d) = (1e-4, 0.1);
        vec![
            vec![1.0 - 2.0 * e, e, e],
            vec![e, 1.0 - 2.0 * e, e],
            vec![d, d, 1.0 - 2.0 * d],
        ]
    }

    #[test]
    fn ternary_instance_is_accepted() {
        let p = validate_problem(ternary_rows(), vec![0.025, 0.975], 0.75).unwrap();
        assert_eq!(p.channel().num_inputs(), 3);
        assert_eq!(p.rate(), 0.75);
    }

    #[test]
    fn row_summing_to_1_1_is_rejected() {
        let err = ChannelSpec::new(vec![vec![0.5, 0.6], vec![0.5, 0.5]]).unwrap_err();
        assert!(matches!(err, Error::NonStochasticRow { row: 0, .. }));
    }

    #[test]
    fn identity_channel_accepted() {
        let p = validate_problem(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![0.5, 0.5],
            1.0,
        )
        .unwrap();
        assert_eq!(p.channel(), &ChannelSpec::identity(2).unwrap());
    }

    #[test]
    fn rate_and_dimension_errors() {
        let ch = ChannelSpec::identity(2).unwrap();
        let src = SourceSpec::binary(0.3).unwrap();
        assert!(matches!(
            ProblemSpec::new(ch.clone(), src.clone(), 0.0),
            Err(Error::NonPositiveRate(_))
        ));
        assert!(matches!(
            ProblemSpec::new(ch, src, f64::NAN),
            Err(Error::NonPositiveRate(_))
        ));
        assert!(matches!(
            ChannelSpec::new(vec![vec![1.0, 0.0], vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        let q = InputDistribution::uniform(3).unwrap();
        assert!(q.check_for(&ChannelSpec::identity(2).unwrap()).is_err());
    }

    #[test]
    fn near_stochastic_rows_are_renormalized() {
        let ch = ChannelSpec::new(vec![vec![0.5 + 5e-10, 0.5]]).unwrap();
        let s: f64 = ch.row(0).iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
        // Within the strict tolerance nothing changes.
        let ch = ChannelSpec::new(vec![vec![0.5 + 1e-13, 0.5]]).unwrap();
        assert_eq!(ch.row(0)[0], 0.5 + 1e-13);
    }

    #[test]
    fn revalidation_is_identity() {
        let p = validate_problem(ternary_rows(), vec![0.025 + 3e-10, 0.975], 0.75).unwrap();
        assert_eq!(p.validate().unwrap(), p);
    }

    #[test]
    fn distribution_set_checks() {
        assert_eq!(DistributionSet::new(vec![]), Err(Error::EmptySet));
        let a = InputDistribution::uniform(2).unwrap();
        let b = InputDistribution::uniform(3).unwrap();
        assert!(DistributionSet::pair(a, b).is_err());
    }

    #[test]
    fn canonical_pair_is_sorted() {
        let a = InputDistribution::new(vec![0.5, 0.5, 0.0]).unwrap();
        let b = InputDistribution::new(vec![0.4, 0.4, 0.2]).unwrap();
        let set = DistributionSet::pair(a.clone(), b.clone()).unwrap().canonical();
        assert_eq!(set.members(), &[b, a]);
    }

    #[test]
    fn grid_defaults_and_extension() {
        let g = RhoGrid::default();
        let v = g.values();
        assert_eq!(v.len(), 2000);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1999], 100.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let e = g.extended(1e4).unwrap();
        assert_eq!(e.rho_max(), 200.0);
        assert!(e.num_points() > 2000);
        let capped = RhoGrid::new(1.0, 8000.0, 10, Spacing::Geometric)
            .unwrap()
            .extended(1e4)
            .unwrap();
        assert_eq!(capped.rho_max(), 1e4);
        assert!(RhoGrid::new(1.0, 1.0, 10, Spacing::Linear).is_err());
        assert!(RhoGrid::new(1.0, 2.0, 1, Spacing::Linear).is_err());
        assert!(RhoGrid::new(0.0, 2.0, 3, Spacing::Geometric).is_err());
    }
}
