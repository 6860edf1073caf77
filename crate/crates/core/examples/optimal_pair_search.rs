//! Searches over pairs of input distributions for the fig1 problem and
//! compares the result with the fixed pair and the single-class optimum.

use std::path::PathBuf;

use expurgated_jscc::config::ProblemConfig;
use expurgated_jscc::optimizer::{two_class_exponent_fixed_pair, two_class_exponent_optimal};
use expurgated_jscc::report::summary;

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/fig1.toml");
    let mut c = ProblemConfig::load(&path).unwrap();
    if let Some(starts) = std::env::args().nth(1) {
        c.solver.starts = starts.parse().expect("starts");
    }
    let fixed = two_class_exponent_fixed_pair(c.pair.as_ref().unwrap(), &c.problem, &c.grid).unwrap();
    let r = two_class_exponent_optimal(&c.problem, &c.grid, &c.solver).unwrap();
    print!("{}", summary(&r));
    println!("fixed pair from the config   {:.6}", fixed.value);
    if let Some(v) = r.pair_search_value {
        println!("best value on the search grid {v:.6}");
    }
}
