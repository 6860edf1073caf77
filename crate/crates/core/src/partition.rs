//! Two-class source partition by probability threshold.
//!
//! Sequences with `P^k(v) ≤ γ^k` form the low-probability class, the rest
//! the high-probability class. Everything here depends on a sequence only
//! through its type, so exact finite-k quantities are computed by enumerating
//! compositions of `k` in the log domain.

use std::io::Write;

use serde::Serialize;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::kernel::{e_s, BhattacharyyaMatrix, RhoKernel};
use crate::types::{DistributionSet, ProblemSpec, SourceSpec};

/// Default cap on the number of type classes enumerated.
pub const DEFAULT_TYPE_BUDGET: u128 = 2_000_000;

/// Which side of the probability threshold a sequence falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    /// `P^k(v) ≤ γ^k` (class 1).
    Low,
    /// `P^k(v) > γ^k` (class 2).
    High,
}

impl Class {
    pub fn id(self) -> u8 {
        match self {
            Class::Low => 1,
            Class::High => 2,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Class::Low),
            2 => Ok(Class::High),
            other => Err(Error::InvalidArgument(format!("class id must be 1 or 2, got {other}"))),
        }
    }
}

/// Threshold `γ ∈ [0, 1]` and block length `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionSpec {
    gamma: f64,
    k: usize,
}

impl PartitionSpec {
    pub fn new(gamma: f64, k: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("block length k must be positive".into()));
        }
        Ok(Self { gamma, k })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `k·ln γ`, `−∞` for `γ = 0`.
    fn log_threshold(&self) -> f64 {
        self.k as f64 * self.gamma.ln()
    }

    /// Class of a type with per-sequence log-probability `log_prob`.
    ///
    /// Exact ties go to the low class; a relative slack of 1e-12 absorbs the
    /// rounding difference between `Σ k_v ln P(v)` and `k ln γ`.
    pub fn classify_log_prob(&self, log_prob: f64) -> Class {
        let thr = self.log_threshold();
        let low = if thr == f64::NEG_INFINITY {
            log_prob == f64::NEG_INFINITY
        } else {
            log_prob <= thr + 1e-12 * thr.abs().max(1.0)
        };
        if low {
            Class::Low
        } else {
            Class::High
        }
    }
}

/// One type class of `𝒱^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeClassRecord {
    pub counts: Vec<usize>,
    /// `ln` of the multinomial coefficient.
    pub log_count: f64,
    /// `Σ_v k_v ln P_V(v)`, the log-probability of each sequence in the class.
    pub log_prob_per_seq: f64,
    /// Empirical entropy in nats.
    pub entropy: f64,
    pub class_id: u8,
}

fn log_prob_of_counts(counts: &[usize], source: &SourceSpec) -> f64 {
    counts
        .iter()
        .zip(source.pmf())
        .map(|(&c, &p)| if c == 0 { 0.0 } else { c as f64 * p.ln() })
        .sum()
}

fn empirical_entropy(counts: &[usize], k: usize) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / k as f64;
            -f * f.ln()
        })
        .sum()
}

/// Number of compositions of `k` into `parts` nonnegative parts, saturating.
pub fn type_count(k: usize, parts: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..parts {
        acc = match acc.checked_mul((k + i) as u128) {
            Some(v) => v / i as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Enumerates every type class of `𝒱^k` and labels it by the threshold
/// partition.
pub fn enumerate_types(
    partition: &PartitionSpec,
    source: &SourceSpec,
    budget: u128,
) -> Result<Vec<TypeClassRecord>> {
    let k = partition.k();
    let parts = source.alphabet_size();
    let needed = type_count(k, parts);
    if needed > budget {
        return Err(Error::EnumerationBudgetExceeded { needed, budget });
    }
    let ln_k_fact = ln_factorial(k as u64);
    let mut out = Vec::with_capacity(needed as usize);
    let mut counts = vec![0usize; parts];

    fn rec(
        pos: usize,
        left: usize,
        counts: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            emit(counts);
            return;
        }
        for c in (0..=left).rev() {
            counts[pos] = c;
            rec(pos + 1, left - c, counts, emit);
        }
    }

    rec(0, k, &mut counts, &mut |c: &[usize]| {
        let log_count = ln_k_fact - c.iter().map(|&x| ln_factorial(x as u64)).sum::<f64>();
        let log_prob = log_prob_of_counts(c, source);
        out.push(TypeClassRecord {
            counts: c.to_vec(),
            log_count,
            log_prob_per_seq: log_prob,
            entropy: empirical_entropy(c, k),
            class_id: partition.classify_log_prob(log_prob).id(),
        });
    });
    Ok(out)
}

/// Class of a concrete source sequence (symbols are alphabet indices).
pub fn classify_sequence(seq: &[usize], partition: &PartitionSpec, source: &SourceSpec) -> Result<Class> {
    if seq.len() != partition.k() {
        return Err(Error::InvalidArgument(format!(
            "sequence length {} differs from k = {}",
            seq.len(),
            partition.k()
        )));
    }
    let size = source.alphabet_size();
    let mut counts = vec![0usize; size];
    for &symbol in seq {
        if symbol >= size {
            return Err(Error::AlphabetMismatch { symbol, size });
        }
        counts[symbol] += 1;
    }
    Ok(partition.classify_log_prob(log_prob_of_counts(&counts, source)))
}

/// Threshold solving the equalization condition between two hull vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaZero {
    pub log_gamma_prime: f64,
    pub gamma_prime: f64,
    /// `min{1, γ'}`, the threshold actually used by the partition.
    pub gamma: f64,
}

/// Solves `t (E_s(ρ₀) − ln γ₀)/(1+ρ₀) = (ex2 − ex1)/(ρ₂ − ρ₁)` for `γ₀`.
pub fn gamma_zero(
    ex1: f64,
    rho1: f64,
    ex2: f64,
    rho2: f64,
    rho0: f64,
    problem: &ProblemSpec,
) -> Result<GammaZero> {
    let width = rho2 - rho1;
    if !(width >= 1e-12) {
        return Err(Error::DegenerateSlope(width));
    }
    if !(rho1 <= rho0 && rho0 <= rho2) {
        return Err(Error::InvalidArgument(format!(
            "rho0 = {rho0} must lie in [{rho1}, {rho2}]"
        )));
    }
    if !(ex1.is_finite() && ex2.is_finite()) {
        return Err(Error::InvalidArgument("vertex values must be finite".into()));
    }
    let slope = (ex2 - ex1) / width;
    let log_gamma_prime = e_s(rho0, problem.source()) - slope * (1.0 + rho0) / problem.rate();
    let gamma_prime = log_gamma_prime.exp();
    Ok(GammaZero {
        log_gamma_prime,
        gamma_prime,
        gamma: gamma_prime.min(1.0),
    })
}

/// Affine function `r(ρ, ρ₀, γ) = E_s(ρ₀) + (E_s(ρ₀) − ln γ)/(1+ρ₀)·(ρ − ρ₀)`.
///
/// `γ = 0` gives an infinite slope: `+∞` above `ρ₀`, `−∞` below.
pub fn r_function(rho: f64, rho0: f64, gamma: f64, source: &SourceSpec) -> f64 {
    let es0 = e_s(rho0, source);
    if rho == rho0 {
        return es0;
    }
    let slope = (es0 - gamma.ln()) / (1.0 + rho0);
    es0 + slope * (rho - rho0)
}

/// Piecewise upper bound `Ē_s^(c)(ρ, ρ₀, γ')` on the per-symbol class
/// source exponent.
pub fn es_bar_class(class: Class, rho: f64, rho0: f64, gamma_prime: f64, source: &SourceSpec) -> f64 {
    let use_full = match class {
        Class::Low => rho > rho0,
        Class::High => rho < rho0,
    };
    if use_full {
        e_s(rho, source)
    } else {
        r_function(rho, rho0, gamma_prime, source)
    }
}

/// `E_s^(c)(ρ, P^k)` computed from already-labelled type records; `−∞` for
/// an empty class.
pub fn es_from_records(records: &[TypeClassRecord], class_id: u8, rho: f64) -> f64 {
    let s = 1.0 / (1.0 + rho);
    let terms: Vec<f64> = records
        .iter()
        .filter(|r| r.class_id == class_id && r.log_prob_per_seq > f64::NEG_INFINITY)
        .map(|r| r.log_count + s * r.log_prob_per_seq)
        .collect();
    if terms.is_empty() {
        return f64::NEG_INFINITY;
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    (1.0 + rho) * (top + sum.ln())
}

/// Exact `E_s^(c)(ρ, P^k) = (1+ρ) ln Σ_{v∈𝒜_c} P^k(v)^{1/(1+ρ)}` by type
/// enumeration.
pub fn es_class_exact(
    class: Class,
    rho: f64,
    partition: &PartitionSpec,
    source: &SourceSpec,
    budget: u128,
) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be >= 0, got {rho}")));
    }
    let records = enumerate_types(partition, source, budget)?;
    Ok(es_from_records(&records, class.id(), rho))
}

/// Natural log of the finite-length error bound
/// `Σ_c exp(−n·E_x'(Q_c, 𝒬, ρ_c) + E_s^(c)(ρ_c, P^k))` for an arbitrary
/// partition into `m = set.len()` classes.
///
/// `records[i].class_id` is the 1-based index of the class (and of its
/// codeword distribution in `set`). Empty classes contribute nothing.
pub fn finite_length_log_bound(
    n: usize,
    records: &[TypeClassRecord],
    set: &DistributionSet,
    rhos: &[f64],
    db: &BhattacharyyaMatrix,
) -> Result<f64> {
    if rhos.len() != set.len() {
        return Err(Error::DimensionMismatch {
            what: "one rho per class",
            expected: set.len(),
            got: rhos.len(),
        });
    }
    if let Some(r) = records
        .iter()
        .find(|r| r.class_id == 0 || r.class_id as usize > set.len())
    {
        return Err(Error::InvalidArgument(format!(
            "class id {} outside 1..={}",
            r.class_id,
            set.len()
        )));
    }
    let mut terms = Vec::with_capacity(set.len());
    for (c, (q, &rho)) in set.members().iter().zip(rhos).enumerate() {
        if rho < 1.0 {
            return Err(Error::InvalidArgument(format!("rho_c must be >= 1, got {rho}")));
        }
        let es_c = es_from_records(records, (c + 1) as u8, rho);
        if es_c == f64::NEG_INFINITY {
            continue;
        }
        let ex = RhoKernel::new(db, rho).prime(q, set);
        terms.push(-(n as f64) * ex + es_c);
    }
    if terms.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(top);
    }
    Ok(top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln())
}

/// Writes type records as CSV: `counts,log_count,log_prob_per_seq,entropy,class_id`.
/// Counts are joined with `;` inside their field.
pub fn write_type_records_csv<W: Write>(records: &[TypeClassRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "counts,log_count,log_prob_per_seq,entropy,class_id")?;
    for r in records {
        let counts: Vec<String> = r.counts.iter().map(usize::to_string).collect();
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{}",
            counts.join(";"),
            r.log_count,
            r.log_prob_per_seq,
            r.entropy,
            r.class_id
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ChannelSpec;

    fn src() -> SourceSpec {
        SourceSpec::binary(0.025).unwrap()
    }

    #[test]
    fn gamma_one_puts_everything_low() {
        let p = PartitionSpec::new(1.0, 6).unwrap();
        for seq in [[0, 0, 0, 0, 0, 0], [1, 1, 1, 1, 1, 1], [0, 1, 0, 1, 1, 1]] {
            assert_eq!(classify_sequence(&seq, &p, &src()).unwrap(), Class::Low);
        }
    }

    #[test]
    fn gamma_zero_puts_full_support_high() {
        let p = PartitionSpec::new(0.0, 4).unwrap();
        for seq in [[0, 0, 0, 0], [1, 1, 1, 1], [0, 1, 1, 0]] {
            assert_eq!(classify_sequence(&seq, &p, &src()).unwrap(), Class::High);
        }
        // A zero-probability symbol makes P^k(v) = 0 = γ^k: low class.
        let s = SourceSpec::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(classify_sequence(&[0, 1, 1, 1], &p, &s).unwrap(), Class::Low);
    }

    #[test]
    fn all_ones_k20_is_high() {
        let p = PartitionSpec::new(0.5, 20).unwrap();
        // 0.975^20 ≈ 0.603 > 0.5^20
        assert_eq!(classify_sequence(&[1; 20], &p, &src()).unwrap(), Class::High);
    }

    #[test]
    fn classification_errors() {
        let p = PartitionSpec::new(0.5, 3).unwrap();
        assert!(matches!(
            classify_sequence(&[0, 2, 1], &p, &src()),
            Err(Error::AlphabetMismatch { symbol: 2, size: 2 })
        ));
        assert!(classify_sequence(&[0, 1], &p, &src()).is_err());
        assert!(PartitionSpec::new(1.5, 3).is_err());
    }

    #[test]
    fn exact_ties_go_low() {
        let uniform = SourceSpec::binary(0.5).unwrap();
        let p = PartitionSpec::new(0.5, 7).unwrap();
        for seq in [[0; 7], [1; 7], [0, 1, 0, 1, 0, 1, 1]] {
            assert_eq!(classify_sequence(&seq, &p, &uniform).unwrap(), Class::Low);
        }
    }

    #[test]
    fn gamma_zero_equalization() {
        let problem = ProblemSpec::new(
            ChannelSpec::binary_symmetric(0.1).unwrap(),
            src(),
            0.75,
        )
        .unwrap();
        let g = gamma_zero(0.4, 1.0, 0.4, 2.0, 1.5, &problem).unwrap();
        assert!((g.log_gamma_prime - e_s(1.5, problem.source())).abs() < 1e-15);
        assert_eq!(g.gamma, 1.0);

        let rho0 = 1.7;
        let slope = problem.rate() * e_s(rho0, problem.source()) / (1.0 + rho0);
        let g = gamma_zero(0.2, 1.0, 0.2 + slope, 2.0, rho0, &problem).unwrap();
        assert!((g.gamma_prime - 1.0).abs() < 1e-14);

        assert!(matches!(
            gamma_zero(0.1, 1.0, 0.2, 1.0, 1.0, &problem),
            Err(Error::DegenerateSlope(_))
        ));
        assert!(gamma_zero(0.1, 1.0, 0.2, 2.0, 3.0, &problem).is_err());
    }

    #[test]
    fn r_function_cases() {
        let s = src();
        assert_eq!(r_function(2.5, 2.5, 0.3, &s), e_s(2.5, &s));
        let det = SourceSpec::new(vec![1.0, 0.0]).unwrap();
        for rho in [1.0, 3.0, 9.0] {
            assert_eq!(r_function(rho, 2.0, 1.0, &det), 0.0);
        }
        // E_s(1) + (E_s(1) + ln 2)/2 with E_s(1) = 0.2717431448842528
        let expected = 0.271_743_144_884_252_8 + (0.271_743_144_884_252_8 + std::f64::consts::LN_2) / 2.0;
        assert!((r_function(2.0, 1.0, 0.5, &s) - expected).abs() < 1e-13);
        assert!((expected - 0.754_188).abs() < 1e-6);
        assert_eq!(r_function(2.0, 1.0, 0.0, &s), f64::INFINITY);
        assert_eq!(r_function(0.5, 1.0, 0.0, &s), f64::NEG_INFINITY);
    }

    #[test]
    fn es_bar_piecewise() {
        let s = src();
        let rho0 = 2.0;
        for class in [Class::Low, Class::High] {
            assert_eq!(es_bar_class(class, rho0, rho0, 0.4, &s), e_s(rho0, &s));
        }
        assert_eq!(es_bar_class(Class::Low, 3.0, rho0, 0.4, &s), e_s(3.0, &s));
        assert!(es_bar_class(Class::High, 3.0, rho0, 0.4, &s) > e_s(rho0, &s));
    }

    #[test]
    fn exact_class_exponents() {
        let s = src();
        let all_low = PartitionSpec::new(1.0, 12).unwrap();
        for rho in [0.5, 1.0, 4.0] {
            let v = es_class_exact(Class::Low, rho, &all_low, &s, DEFAULT_TYPE_BUDGET).unwrap();
            assert!((v - 12.0 * e_s(rho, &s)).abs() < 1e-11, "{v}");
        }
        let none_low = PartitionSpec::new(0.0, 12).unwrap();
        assert_eq!(
            es_class_exact(Class::Low, 1.0, &none_low, &s, DEFAULT_TYPE_BUDGET).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn enumeration_budget() {
        let s = SourceSpec::new(vec![0.2, 0.3, 0.5]).unwrap();
        let p = PartitionSpec::new(0.5, 100).unwrap();
        assert_eq!(type_count(100, 3), 5151);
        assert!(matches!(
            enumerate_types(&p, &s, 5000),
            Err(Error::EnumerationBudgetExceeded { needed: 5151, .. })
        ));
        let recs = enumerate_types(&p, &s, 5151).unwrap();
        assert_eq!(recs.len(), 5151);
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let p = PartitionSpec::new(0.5, 3).unwrap();
        let recs = enumerate_types(&p, &src(), DEFAULT_TYPE_BUDGET).unwrap();
        let mut buf = Vec::new();
        write_type_records_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "counts,log_count,log_prob_per_seq,entropy,class_id");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("3;0,"));
    }
}
