//! Type-class enumeration of a threshold partition and the class source
//! exponents against their piecewise bounds.
//!
//! ```text
//! cargo run --release --example type_enumeration [k] [gamma]
//! ```

use expurgated_jscc::kernel::e_s;
use expurgated_jscc::partition::{
    enumerate_types, es_bar_class, es_from_records, write_type_records_csv, Class, PartitionSpec,
    DEFAULT_TYPE_BUDGET,
};
use expurgated_jscc::types::SourceSpec;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(20, |a| a.parse().expect("k"));
    let gamma: f64 = args.next().map_or(0.48785, |a| a.parse().expect("gamma"));

    let source = SourceSpec::binary(0.025).unwrap();
    let partition = PartitionSpec::new(gamma, k).unwrap();
    let records = enumerate_types(&partition, &source, DEFAULT_TYPE_BUDGET).unwrap();
    let class1: f64 = records
        .iter()
        .filter(|r| r.class_id == Class::Low.id())
        .map(|r| (r.log_count + r.log_prob_per_seq).exp())
        .sum();
    println!("k = {k}, gamma = {gamma}: {} types, P(class 1) = {class1:.6e}", records.len());

    let rho0 = 1.5;
    println!("\n{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}", "rho", "E_s", "E_s1/k", "bound1", "E_s2/k", "bound2");
    for rho in [1.0, 1.25, 1.5, 2.0, 3.0] {
        let c1 = es_from_records(&records, Class::Low.id(), rho) / k as f64;
        let c2 = es_from_records(&records, Class::High.id(), rho) / k as f64;
        println!(
            "{rho:5.2} {:12.6} {c1:12.6} {:12.6} {c2:12.6} {:12.6}",
            e_s(rho, &source),
            es_bar_class(Class::Low, rho, rho0, gamma, &source),
            es_bar_class(Class::High, rho, rho0, gamma, &source),
        );
    }

    println!("\nfirst rows of the type table:");
    let mut buf = Vec::new();
    write_type_records_csv(&records[..records.len().min(5)], &mut buf).unwrap();
    print!("{}", String::from_utf8(buf).unwrap());
}
