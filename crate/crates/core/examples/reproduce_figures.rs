//! Fixed-pair reports for the three bundled figure configurations.
//!
//! ```text
//! cargo run --release --example reproduce_figures [fig1|fig2|fig3]
//! ```

use std::path::PathBuf;

use expurgated_jscc::config::ProblemConfig;
use expurgated_jscc::optimizer::exponent_report;
use expurgated_jscc::report::sig;

fn main() {
    let which: Vec<String> = match std::env::args().nth(1) {
        Some(name) => vec![name],
        None => vec!["fig1".into(), "fig2".into(), "fig3".into()],
    };
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in which {
        let c = ProblemConfig::load(&dir.join(format!("{name}.toml"))).expect("bundled config");
        let pair = c.pair.as_ref().expect("figure configs carry a pair");
        let r = exponent_report(&c.problem, Some(pair), &c.grid, &c.solver, true).unwrap();

        println!("{}", c.title.as_deref().unwrap_or(&name));
        println!("  two-class (fixed pair)   {}", sig(r.two_class_value, 6));
        for (i, v) in r.fixed_q_single_class.iter().enumerate() {
            println!("  single-class, Q{}        {}", i + 1, sig(*v, 6));
        }
        println!("  optimal single-class     {}", sig(r.single_class_value, 6));
        if let Some(b) = r.baseline_random_coding {
            println!("  random-coding baseline   {}", sig(b, 6));
        }
        let gap = r.two_class_value - r.best_fixed_q();
        let verdict = if gap > 1e-4 {
            "partitioning helps"
        } else if gap < -1e-4 {
            "single-class is better"
        } else {
            "the two coincide"
        };
        println!("  two-class minus best single-class = {gap:+.3e} ({verdict})\n");
    }
}
