#![allow(dead_code)]

use proptest::prelude::*;

use expurgated_jscc::types::{
    ChannelSpec, DistributionSet, InputDistribution, ProblemSpec, SourceSpec,
};

pub fn normalize(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Probability vector of length `n`; about a quarter of the entries are zero.
pub fn pmf(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0.01f64..1.0, prop::bool::weighted(0.25)), n).prop_map(|w| {
        let mut v: Vec<f64> = w.iter().map(|&(x, zero)| if zero { 0.0 } else { x }).collect();
        if v.iter().all(|&x| x == 0.0) {
            v[0] = 1.0;
        }
        normalize(v)
    })
}

pub fn dense_pmf(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(normalize)
}

pub fn channel(inputs: usize, outputs: usize) -> impl Strategy<Value = ChannelSpec> {
    prop::collection::vec(pmf(outputs), inputs).prop_map(|rows| ChannelSpec::new(rows).unwrap())
}

pub fn dense_channel(inputs: usize, outputs: usize) -> impl Strategy<Value = ChannelSpec> {
    prop::collection::vec(dense_pmf(outputs), inputs)
        .prop_map(|rows| ChannelSpec::new(rows).unwrap())
}

pub fn ternary() -> ChannelSpec {
    ChannelSpec::nonsymmetric_ternary(1e-4, 0.1).unwrap()
}

pub fn ternary_problem(t: f64, p0: f64) -> ProblemSpec {
    ProblemSpec::new(ternary(), SourceSpec::binary(p0).unwrap(), t).unwrap()
}

pub fn q(v: &[f64]) -> InputDistribution {
    InputDistribution::new(v.to_vec()).unwrap()
}

pub fn pair(a: &[f64], b: &[f64]) -> DistributionSet {
    DistributionSet::pair(q(a), q(b)).unwrap()
}

/// Direct evaluation of `−ln Σ_y √(W(y|a) W(y|b))`.
pub fn naive_db(w: &ChannelSpec, a: usize, b: usize) -> f64 {
    let s: f64 = w.row(a).iter().zip(w.row(b)).map(|(x, y)| (x * y).sqrt()).sum();
    -s.ln()
}

/// Direct evaluation of `−ρ ln Σ Q(x) Q̃(x̄) e^{−d_B(x,x̄)/ρ}` from the channel.
pub fn naive_cross(w: &ChannelSpec, q: &[f64], qt: &[f64], rho: f64) -> f64 {
    let mut s = 0.0;
    for (a, &qa) in q.iter().enumerate() {
        for (b, &qb) in qt.iter().enumerate() {
            let d = naive_db(w, a, b);
            if qa > 0.0 && qb > 0.0 && d.is_finite() {
                s += qa * qb * (-d / rho).exp();
            }
        }
    }
    -rho * s.ln()
}

pub fn naive_es(rho: f64, p: &[f64]) -> f64 {
    (1.0 + rho) * p.iter().map(|x| x.powf(1.0 / (1.0 + rho))).sum::<f64>().ln()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
