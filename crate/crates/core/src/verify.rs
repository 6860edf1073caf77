//! Randomized property suites. Each property counts passes and keeps the
//! first counterexample, serialized so it can be replayed.

use std::fmt::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{upper_concave_envelope, ExponentCurve};
use crate::kernel::{bhattacharyya_matrix, e_x_cross};
use crate::optimizer::{
    max_over_q, single_class_fixed_q, two_class_exponent_fixed_pair, two_class_exponent_optimal,
    PairMode,
};
use crate::partition::{
    classify_sequence, enumerate_types, es_bar_class, es_from_records, r_function, Class,
    PartitionSpec, DEFAULT_TYPE_BUDGET,
};
use crate::simplex::{random_simplex_point, SolverConfig};
use crate::types::{ChannelSpec, DistributionSet, InputDistribution, ProblemSpec, RhoGrid, SourceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hull,
    Theorem3,
    Binary,
    Lemma3,
    Limits,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["hull", "theorem3", "binary", "lemma3", "limits", "all"];

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Hull, Suite::Theorem3, Suite::Binary, Suite::Lemma3, Suite::Limits],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hull" => Suite::Hull,
            "theorem3" => Suite::Theorem3,
            "binary" => Suite::Binary,
            "lemma3" => Suite::Lemma3,
            "limits" => Suite::Limits,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Sizes of the randomized suites.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub hull_curves: usize,
    pub theorem3_instances: usize,
    pub binary_channels: usize,
    pub limit_instances: usize,
    /// Grid for the optimized-pair instances.
    pub theorem3_grid: RhoGrid,
    pub solver: SolverConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            hull_curves: 200,
            theorem3_instances: 100,
            binary_channels: 50,
            limit_instances: 20,
            theorem3_grid: RhoGrid::default().with_points(200).expect("valid grid"),
            solver: SolverConfig {
                starts: 8,
                search_grid_points: 100,
                ..SolverConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// Smallest slack seen (negative means violated).
    pub worst_slack: f64,
    pub counterexample: Option<String>,
}

impl PropertyResult {
    fn new(suite: &'static str, name: &str) -> Self {
        Self {
            suite,
            name: name.to_string(),
            passed: 0,
            total: 0,
            worst_slack: f64::INFINITY,
            counterexample: None,
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    /// Counts one check with the given slack; `slack >= 0` passes.
    fn check(&mut self, slack: f64, describe: impl FnOnce() -> String) {
        self.total += 1;
        if slack.is_nan() {
            self.worst_slack = f64::NAN;
        } else if !self.worst_slack.is_nan() {
            self.worst_slack = self.worst_slack.min(slack);
        }
        if slack >= 0.0 {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(PropertyResult::ok)
    }

    pub fn first_counterexample(&self) -> Option<(&PropertyResult, &str)> {
        self.results
            .iter()
            .find_map(|r| r.counterexample.as_deref().map(|c| (r, c)))
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let _ = writeln!(
                s,
                "[{}] {:<9} {:<44} {:>5}/{:<5} worst slack {:.3e}",
                if r.ok() { "PASS" } else { "FAIL" },
                r.suite,
                r.name,
                r.passed,
                r.total,
                r.worst_slack
            );
        }
        s
    }
}

/// Runs a suite with a deterministic seed.
pub fn run(suite: Suite, seed: u64, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut results = Vec::new();
    for s in suite.expand() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        results.extend(match s {
            Suite::Hull => hull_suite(&mut rng, opts)?,
            Suite::Theorem3 => theorem3_suite(&mut rng, opts)?,
            Suite::Binary => binary_suite(&mut rng, opts)?,
            Suite::Lemma3 => lemma3_suite(&mut rng)?,
            Suite::Limits => limits_suite(&mut rng, opts)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(VerifyReport { seed, results })
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Problem file text for `problem` (loadable as a config).
pub fn problem_to_toml(problem: &ProblemSpec, pair: Option<&DistributionSet>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rate = {:?}", problem.rate());
    let _ = writeln!(s, "source = {}", fmt_vec(problem.source().pmf()));
    let _ = writeln!(s, "channel = [");
    for row in problem.channel().rows() {
        let _ = writeln!(s, "    {},", fmt_vec(row));
    }
    let _ = writeln!(s, "]");
    if let Some(p) = pair {
        let members: Vec<String> = p.members().iter().map(|q| fmt_vec(q.pmf())).collect();
        let _ = writeln!(s, "distributions = [{}]", members.join(", "));
    }
    s
}

fn random_row<R: Rng>(rng: &mut R, len: usize, sparse: bool) -> Vec<f64> {
    let mut row = random_simplex_point(len, rng);
    if sparse && len > 1 {
        row[rng.random_range(0..len)] = 0.0;
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= s);
    }
    row
}

/// Random channel with `inputs` rows over `outputs` letters. A quarter of
/// the channels get one zero per row, which can create infinite distances.
pub fn random_channel<R: Rng>(rng: &mut R, inputs: usize, outputs: usize) -> ChannelSpec {
    let sparse = rng.random_bool(0.25);
    let rows = (0..inputs).map(|_| random_row(rng, outputs, sparse)).collect();
    ChannelSpec::new(rows).expect("random rows are stochastic")
}

/// Random instance with `|X|, |Y| ≤ 4`, `|V| ≤ 3` and `t ∈ [0.1, 2]`.
pub fn random_problem<R: Rng>(rng: &mut R) -> ProblemSpec {
    let nx = rng.random_range(2..=4);
    let ny = rng.random_range(2..=4);
    let nv = rng.random_range(1..=3);
    let channel = random_channel(rng, nx, ny);
    let source = SourceSpec::new(random_simplex_point(nv, rng)).expect("random pmf");
    let t = rng.random_range(0.1..=2.0);
    ProblemSpec::new(channel, source, t).expect("positive rate")
}

fn random_curve<R: Rng>(rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(2..=200);
    let mut x = vec![1.0];
    for _ in 1..n {
        let step = rng.random_range(0.001..0.5);
        x.push(x[x.len() - 1] + step);
    }
    let kind = rng.random_range(0..3);
    let y = x
        .iter()
        .scan(0.0, |walk: &mut f64, &xi: &f64| {
            *walk += rng.random_range(-1.0..1.0);
            Some(match kind {
                0 => rng.random_range(-1.0..1.0),
                1 => *walk,
                _ => xi.ln() - 0.05 * xi + 0.05 * rng.random_range(-1.0..1.0),
            })
        })
        .collect();
    (x, y)
}

/// Least concave majorant at every sample by brute force over all chords.
pub fn chord_oracle(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut best = y[i];
            for a in 0..i {
                for b in i + 1..n {
                    let lam = (x[b] - x[i]) / (x[b] - x[a]);
                    best = best.max(lam * y[a] + (1.0 - lam) * y[b]);
                }
            }
            best
        })
        .collect()
}

fn curve_toml(x: &[f64], y: &[f64]) -> String {
    format!("rho = {}\nvalues = {}\n", fmt_vec(x), fmt_vec(y))
}

fn hull_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyResult>> {
    let mut oracle = PropertyResult::new("hull", "monotone chain matches chord oracle (1e-10)");
    let mut dominance = PropertyResult::new("hull", "hull dominates samples");
    let mut concave = PropertyResult::new("hull", "hull slopes nonincreasing");
    let mut touching = PropertyResult::new("hull", "touching mask consistent");
    for _ in 0..opts.hull_curves {
        let (x, y) = random_curve(rng);
        let h = upper_concave_envelope(&ExponentCurve::new(x.clone(), y.clone(), "random")?)?;
        let o = chord_oracle(&x, &y);
        let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let err = h.hull_values.iter().zip(&o).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        oracle.check(1e-10 * scale - err, || curve_toml(&x, &y));
        let dom = h.hull_values.iter().zip(&y).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
        dominance.check(dom, || curve_toml(&x, &y));
        let mut worst = f64::INFINITY;
        for i in 1..x.len().saturating_sub(1) {
            let s0 = (h.hull_values[i] - h.hull_values[i - 1]) / (x[i] - x[i - 1]);
            let s1 = (h.hull_values[i + 1] - h.hull_values[i]) / (x[i + 1] - x[i]);
            let slope_scale = s0.abs().max(s1.abs()).max(1.0);
            worst = worst.min(s0 - s1 + 1e-9 * slope_scale);
        }
        concave.check(worst, || curve_toml(&x, &y));
        let consistent = h
            .touching
            .iter()
            .zip(h.hull_values.iter().zip(&y))
            .all(|(&t, (a, b))| t == ((a - b).abs() <= 1e-12 * b.abs().max(1.0)))
            && h.vertex_indices.iter().all(|&i| h.touching[i]);
        touching.check(if consistent { 0.0 } else { -1.0 }, || curve_toml(&x, &y));
    }
    Ok(vec![oracle, dominance, concave, touching])
}

fn theorem3_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyResult>> {
    let mut dominance = PropertyResult::new("theorem3", "two-class >= single-class - 1e-9");
    let mut sound = PropertyResult::new("theorem3", "search values <= reported value");
    let mut nonneg = PropertyResult::new("theorem3", "exponents >= 0");
    let mut determinism = PropertyResult::new("theorem3", "identical reruns");
    for i in 0..opts.theorem3_instances {
        let problem = random_problem(rng);
        let r = two_class_exponent_optimal(&problem, &opts.theorem3_grid, &opts.solver)?;
        let describe = || {
            format!(
                "# two_class = {:?}\n# single_class = {:?}\n{}",
                r.two_class_value,
                r.single_class_value,
                problem_to_toml(&problem, None)
            )
        };
        let gap = if r.two_class_value == r.single_class_value {
            1e-9
        } else {
            r.two_class_value - r.single_class_value + 1e-9
        };
        dominance.check(gap, describe);
        if let Some(v) = r.pair_search_value {
            let tol = 1e-12 * v.abs().max(1.0);
            sound.check(r.two_class_value - v + tol, describe);
        }
        nonneg.check(r.two_class_value.min(r.single_class_value), describe);
        if i == 0 {
            let again = two_class_exponent_optimal(&problem, &opts.theorem3_grid, &opts.solver)?;
            determinism.check(if again == r { 0.0 } else { -1.0 }, describe);
        }
    }
    Ok(vec![dominance, sound, nonneg, determinism])
}

fn binary_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyResult>> {
    let mut uniform = PropertyResult::new("binary", "argmax E_x within 1e-4 TV of uniform");
    let mut collapse = PropertyResult::new("binary", "optimal pair collapses to uniform");
    let u = InputDistribution::uniform(2)?;
    for c in 0..opts.binary_channels {
        // Identical rows make every Q optimal; those channels are redrawn.
        let channel = loop {
            let ny = rng.random_range(2..=4);
            let ch = random_channel(rng, 2, ny);
            if !ch.is_useless() {
                break ch;
            }
        };
        let db = bhattacharyya_matrix(&channel);
        for rho in [1.0, 2.0, 5.0, 20.0] {
            let o = max_over_q(rho, &db, &SolverConfig::default())?;
            let tv = o.q.total_variation(&u);
            uniform.check(1e-4 - tv, || {
                format!("# rho = {rho}, argmax = {:?}\n{}", o.q.pmf(), channel_toml(&channel))
            });
        }
        if c < 5 {
            let source = SourceSpec::new(random_simplex_point(2, rng))?;
            let t = rng.random_range(0.1..=2.0);
            let problem = ProblemSpec::new(channel.clone(), source, t)?;
            let r = two_class_exponent_optimal(&problem, &opts.theorem3_grid, &opts.solver)?;
            let tv = r
                .two_class_pair
                .iter()
                .map(|q| 0.5 * q.iter().zip(u.pmf()).map(|(a, b)| (a - b).abs()).sum::<f64>())
                .fold(0.0, f64::max);
            let collapsed = r.two_class_pair[0] == r.two_class_pair[1];
            let slack = if collapsed || r.two_class_value.is_infinite() { 1e-4 - tv } else { -1.0 };
            collapse.check(slack, || {
                format!("# pair = {:?}\n{}", r.two_class_pair, problem_to_toml(&problem, None))
            });
            debug_assert_eq!(r.pair_mode, PairMode::Optimized);
        }
    }
    Ok(vec![uniform, collapse])
}

fn channel_toml(channel: &ChannelSpec) -> String {
    let rows: Vec<String> = channel.rows().iter().map(|r| format!("    {},", fmt_vec(r))).collect();
    format!("channel = [\n{}\n]\n", rows.join("\n"))
}

fn lemma3_suite(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyResult>> {
    let mut bound1 = PropertyResult::new("lemma3", "class-1 bound (1/k) E_s^(1) <= bar E_s^(1)");
    let mut bound2 = PropertyResult::new("lemma3", "class-2 bound (1/k) E_s^(2) <= bar E_s^(2)");
    let mut complete = PropertyResult::new("lemma3", "classes carry total probability 1");
    let mut types = PropertyResult::new("lemma3", "method-of-types count bound");
    let mut by_type = PropertyResult::new("lemma3", "class depends only on the type");
    let mut affine = PropertyResult::new("lemma3", "r is affine in rho");

    let sources: Vec<SourceSpec> = [0.025, 0.1, 0.3, 0.5]
        .iter()
        .map(|&p| SourceSpec::binary(p))
        .chain(std::iter::once(SourceSpec::binary(rng.random_range(0.01..0.99))))
        .collect::<Result<_>>()?;
    let rhos: Vec<f64> = (0..=36).map(|i| 1.0 + 0.25 * i as f64).collect();
    for source in &sources {
        for k in [10usize, 20, 40] {
            for gamma_prime in [0.3, 0.7, 1.0] {
                let part = PartitionSpec::new(f64::min(1.0, gamma_prime), k)?;
                let records = enumerate_types(&part, source, DEFAULT_TYPE_BUDGET)?;
                for rho0 in [1.0, 2.0, 5.0] {
                    for &rho in &rhos {
                        for (class, acc) in [(Class::Low, &mut bound1), (Class::High, &mut bound2)] {
                            let exact = es_from_records(&records, class.id(), rho) / k as f64;
                            let bar = es_bar_class(class, rho, rho0, gamma_prime, source);
                            acc.check(bar - exact + 1e-9, || {
                                format!(
                                    "source = {}\nk = {k}\ngamma_prime = {gamma_prime}\nrho0 = {rho0}\nrho = {rho}\nclass = {}\nexact = {exact:?}\nbound = {bar:?}\n",
                                    fmt_vec(source.pmf()),
                                    class.id()
                                )
                            });
                        }
                    }
                }
                let total = es_from_records(&records, 1, 0.0).exp() + es_from_records(&records, 2, 0.0).exp();
                complete.check(1e-9 - (total - 1.0).abs(), || {
                    format!("source = {}\nk = {k}\ngamma = {}\n", fmt_vec(source.pmf()), part.gamma())
                });
                for r in &records {
                    let bound = k as f64 * r.entropy + 2.0 * ((k + 1) as f64).ln();
                    types.check(bound - r.log_count + 1e-9, || format!("counts = {:?}\n", r.counts));
                }
            }
        }
        for _ in 0..4 {
            let rho0 = rng.random_range(1.0..5.0);
            let gamma = rng.random_range(0.05..1.0);
            let r: Vec<f64> = rhos.iter().map(|&x| r_function(x, rho0, gamma, source)).collect();
            let worst = r
                .windows(3)
                .map(|w| (w[0] - 2.0 * w[1] + w[2]).abs() / w[1].abs().max(1.0))
                .fold(0.0, f64::max);
            affine.check(1e-12 - worst, || format!("rho0 = {rho0}\ngamma = {gamma}\n"));
        }
    }

    // Exhaustive over binary sequences of length k ≤ 10.
    for k in [4usize, 7, 10] {
        let source = SourceSpec::binary(rng.random_range(0.05..0.95))?;
        let part = PartitionSpec::new(rng.random_range(0.2..1.0), k)?;
        let records = enumerate_types(&part, &source, DEFAULT_TYPE_BUDGET)?;
        for bits in 0u32..(1 << k) {
            let seq: Vec<usize> = (0..k).map(|i| ((bits >> i) & 1) as usize).collect();
            let zeros = seq.iter().filter(|&&s| s == 0).count();
            let expected = records.iter().find(|r| r.counts[0] == zeros).map(|r| r.class_id);
            let got = classify_sequence(&seq, &part, &source)?.id();
            by_type.check(if Some(got) == expected { 0.0 } else { -1.0 }, || {
                format!("sequence = {seq:?}\ngamma = {}\n", part.gamma())
            });
        }
    }
    Ok(vec![bound1, bound2, complete, types, by_type, affine])
}

fn limits_suite(rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<Vec<PropertyResult>> {
    let mut collapsed = PropertyResult::new("limits", "pair {Q,Q} equals fixed-Q value (1e-12)");
    let mut large_rho = PropertyResult::new("limits", "rho = 1e6 cross value vs sum Q Q' d_B (1e-3)");
    let grid = RhoGrid::default().with_points(400)?;
    for _ in 0..opts.limit_instances {
        let problem = random_problem(rng);
        let n = problem.channel().num_inputs();
        let q = InputDistribution::new(random_simplex_point(n, rng))?;
        let pair = DistributionSet::pair(q.clone(), q.clone())?;
        let a = two_class_exponent_fixed_pair(&pair, &problem, &grid)?.value;
        let b = single_class_fixed_q(&q, &problem, &grid)?.value;
        let diff = if a == b { 0.0 } else { (a - b).abs() };
        collapsed.check(1e-12 - diff, || {
            format!("# pair = {a:?}, fixed = {b:?}\n{}", problem_to_toml(&problem, Some(&pair)))
        });

        let outputs = rng.random_range(2..=4);
        let channel = random_channel(rng, n, outputs);
        let db = bhattacharyya_matrix(&channel);
        if (0..n).any(|x| (0..n).any(|y| !db.get(x, y).is_finite())) {
            continue;
        }
        let qt = InputDistribution::new(random_simplex_point(n, rng))?;
        let v = e_x_cross(&q, &qt, 1e6, &db)?;
        let mut limit = 0.0;
        for x in 0..n {
            for y in 0..n {
                limit += q.pmf()[x] * qt.pmf()[y] * db.get(x, y);
            }
        }
        let rel = (v - limit).abs() / limit.abs().max(1e-300);
        large_rho.check(1e-3 - rel, || {
            format!(
                "# value = {v:?}, limit = {limit:?}\nq = {}\nq_tilde = {}\n{}",
                fmt_vec(q.pmf()),
                fmt_vec(qt.pmf()),
                channel_toml(&channel)
            )
        });
    }
    Ok(vec![collapsed, large_rho])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ProblemConfig;

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            assert!(name.parse::<Suite>().is_ok());
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_problem_round_trips_through_config() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_problem(&mut rng);
            let c = ProblemConfig::from_toml_str(&problem_to_toml(&p, None)).unwrap();
            assert_eq!(c.problem, p);
        }
    }

    #[test]
    fn small_hull_run_passes() {
        let opts = VerifyOptions {
            hull_curves: 20,
            ..VerifyOptions::default()
        };
        let r = run(Suite::Hull, 1, &opts).unwrap();
        assert!(r.all_passed(), "{}", r.summary());
    }

    #[test]
    fn failing_check_keeps_first_counterexample() {
        let mut p = PropertyResult::new("x", "y");
        p.check(1.0, || unreachable!());
        p.check(-1.0, || "first".into());
        p.check(-2.0, || "second".into());
        assert_eq!((p.passed, p.total), (1, 3));
        assert_eq!(p.counterexample.as_deref(), Some("first"));
        assert_eq!(p.worst_slack, -2.0);
    }
}
