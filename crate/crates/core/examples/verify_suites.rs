//! Runs the randomized property suites with reduced sizes.
//!
//! ```text
//! cargo run --release --example verify_suites [suite] [seed]
//! ```

use expurgated_jscc::verify::{run, VerifyOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let suite = args.next().unwrap_or_else(|| "all".into()).parse().unwrap();
    let seed = args.next().map_or(0, |s| s.parse().expect("seed"));
    let opts = VerifyOptions {
        theorem3_instances: 10,
        ..VerifyOptions::default()
    };
    let report = run(suite, seed, &opts).unwrap();
    print!("{}", report.summary());
    if let Some((p, text)) = report.first_counterexample() {
        println!("\nfirst counterexample ({}):\n{text}", p.name);
    }
}
