//! Pointwise kernel quantities for the bundled ternary channel.

use expurgated_jscc::kernel::{
    bhattacharyya_matrix, e0_gallager, e_s, e_x, e_x_cross, e_x_prime, e_x_prime_setmax,
};
use expurgated_jscc::types::{ChannelSpec, DistributionSet, InputDistribution, SourceSpec};

fn main() {
    let channel = ChannelSpec::nonsymmetric_ternary(1e-4, 0.1).unwrap();
    let db = bhattacharyya_matrix(&channel);
    println!("d_B matrix:");
    for row in db.rows() {
        println!("  {}", row.iter().map(|d| format!("{d:9.5}")).collect::<Vec<_>>().join(" "));
    }

    let q1 = InputDistribution::new(vec![0.4, 0.4, 0.2]).unwrap();
    let q2 = InputDistribution::new(vec![0.5, 0.5, 0.0]).unwrap();
    let set = DistributionSet::pair(q1.clone(), q2.clone()).unwrap();
    let source = SourceSpec::binary(0.025).unwrap();

    println!("\n{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "rho", "E_x(Q1)", "E_x(Q2)", "cross12", "E_x'(Q1)", "setmax", "E_s");
    for rho in [1.0, 1.5, 2.0, 5.0, 20.0, 100.0] {
        println!(
            "{rho:6.1} {:10.6} {:10.6} {:10.6} {:10.6} {:10.6} {:10.6}",
            e_x(&q1, rho, &db).unwrap(),
            e_x(&q2, rho, &db).unwrap(),
            e_x_cross(&q1, &q2, rho, &db).unwrap(),
            e_x_prime(&q1, &set, rho, &db).unwrap(),
            e_x_prime_setmax(&set, rho, &db).unwrap().0,
            e_s(rho, &source),
        );
    }

    println!("\nGallager E0 on [0, 1] for Q1:");
    for rho in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("  rho = {rho:4.2}  E0 = {:.6}", e0_gallager(&q1, rho, &channel).unwrap());
    }
}
