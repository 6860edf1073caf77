//! For two inputs the maximizing distribution is uniform at every ρ, and
//! the optimized pair collapses onto it.

use std::path::PathBuf;

use expurgated_jscc::config::ProblemConfig;
use expurgated_jscc::kernel::bhattacharyya_matrix;
use expurgated_jscc::optimizer::{exponent_report, max_over_q};
use expurgated_jscc::report::summary;

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/binary_demo.toml");
    let c = ProblemConfig::load(&path).unwrap();
    let db = bhattacharyya_matrix(c.problem.channel());
    for rho in [1.0, 2.0, 5.0, 20.0] {
        let best = max_over_q(rho, &db, &c.solver).unwrap();
        println!("rho = {rho:5.1}  Q* = ({:.6}, {:.6})  E_x = {:.6}", best.q.pmf()[0], best.q.pmf()[1], best.value);
    }
    println!();
    let r = exponent_report(&c.problem, None, &c.grid, &c.solver, c.baseline).unwrap();
    print!("{}", summary(&r));
}
