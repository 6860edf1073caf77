//! Acceptance criteria, one line each. Run with
//! `cargo test --release --test acceptance`.

use std::path::Path;
use std::time::Instant;

use expurgated_jscc::config::ProblemConfig;
use expurgated_jscc::optimizer::{exponent_report, ExponentReport};
use expurgated_jscc::verify::{self, Suite, VerifyOptions, VerifyReport};

const SEED: u64 = 0;

fn fixed_pair_report(name: &str, with_baseline: bool) -> ExponentReport {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let c = ProblemConfig::load(&path).expect("bundled config");
    exponent_report(&c.problem, c.pair.as_ref(), &c.grid, &c.solver, with_baseline).expect("report")
}

fn suite(name: Suite, opts: &VerifyOptions) -> (bool, String) {
    let r: VerifyReport = verify::run(name, SEED, opts).expect("suite runs");
    let counts: Vec<String> = r
        .results
        .iter()
        .map(|p| format!("{}/{}", p.passed, p.total))
        .collect();
    (r.all_passed(), counts.join(" "))
}

fn main() {
    let start = Instant::now();
    let opts = VerifyOptions::default();
    let mut lines: Vec<(usize, bool, String)> = Vec::new();

    let fig1 = fixed_pair_report("fig1.toml", true);
    let margin = fig1.two_class_value - fig1.best_fixed_q();
    lines.push((
        1,
        margin > 1e-4,
        format!(
            "fig1 two-class {:.6} exceeds both fixed-Q values {:?} by {margin:.3e}",
            fig1.two_class_value, fig1.fixed_q_single_class
        ),
    ));

    let fig2 = fixed_pair_report("fig2.toml", false);
    let margin = fig2.best_fixed_q() - fig2.two_class_value;
    lines.push((
        2,
        margin > 1e-4,
        format!(
            "fig2 best fixed-Q {:.6} exceeds two-class {:.6} by {margin:.3e}",
            fig2.best_fixed_q(),
            fig2.two_class_value
        ),
    ));

    let fig3 = fixed_pair_report("fig3.toml", false);
    let gap_fixed = (fig3.two_class_value - fig3.best_fixed_q()).abs();
    let gap_opt = (fig3.two_class_value - fig3.single_class_value).abs();
    lines.push((
        3,
        gap_fixed <= 1e-4 && gap_opt <= 1e-4,
        format!(
            "fig3 two-class {:.7} vs best fixed-Q {:.7} and optimal single-class {:.7}",
            fig3.two_class_value,
            fig3.best_fixed_q(),
            fig3.single_class_value
        ),
    ));

    let t = Instant::now();
    let (ok, counts) = suite(Suite::Theorem3, &opts);
    lines.push((4, ok, format!("two-class >= single-class - 1e-9 on {} random instances: {counts} ({:.0}s)", opts.theorem3_instances, t.elapsed().as_secs_f64())));

    let (ok, counts) = suite(Suite::Binary, &opts);
    lines.push((5, ok, format!("binary inputs, {} channels x 4 rho: argmax uniform within 1e-4 TV: {counts}", opts.binary_channels)));

    let (ok, counts) = suite(Suite::Hull, &opts);
    lines.push((6, ok, format!("hull vs chord oracle on {} curves, dominance, concavity: {counts}", opts.hull_curves)));

    let (ok, counts) = suite(Suite::Lemma3, &opts);
    lines.push((7, ok, format!("finite-k class exponent bounds, k in 10/20/40: {counts}")));

    let (ok, counts) = suite(Suite::Limits, &opts);
    lines.push((8, ok, format!("pair {{Q,Q}} vs fixed-Q (1e-12) and rho = 1e6 limit (1e-3): {counts}")));

    let baseline = fig1.baseline_random_coding.unwrap_or(f64::INFINITY);
    let expurgated = fig1.two_class_value.min(fig1.single_class_value).min(fig1.best_fixed_q());
    lines.push((
        9,
        expurgated > baseline,
        format!("fig1 expurgated exponents (min {expurgated:.6}) exceed the Gallager baseline {baseline:.6}"),
    ));

    let mut failed = 0;
    for (n, ok, text) in &lines {
        println!("[{}] criterion {n}: {text}", if *ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed in {:.1}s", lines.len() - failed, lines.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
