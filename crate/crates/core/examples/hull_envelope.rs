//! Concave envelope of the set-maximum curve for the fig1 pair, and the
//! grid supremum of the resulting objective.

use expurgated_jscc::hull::{sup_objective, upper_concave_envelope, ExponentCurve};
use expurgated_jscc::kernel::{bhattacharyya_matrix, set_tail_growth};
use expurgated_jscc::optimizer::sample_setmax;
use expurgated_jscc::types::{
    ChannelSpec, DistributionSet, InputDistribution, ProblemSpec, RhoGrid, SourceSpec,
};

fn main() {
    let problem = ProblemSpec::new(
        ChannelSpec::nonsymmetric_ternary(1e-4, 0.1).unwrap(),
        SourceSpec::binary(0.025).unwrap(),
        0.75,
    )
    .unwrap();
    let set = DistributionSet::pair(
        InputDistribution::new(vec![0.4, 0.4, 0.2]).unwrap(),
        InputDistribution::new(vec![0.5, 0.5, 0.0]).unwrap(),
    )
    .unwrap();
    let db = bhattacharyya_matrix(problem.channel());
    let grid = RhoGrid::default().with_points(400).unwrap();
    let rho = grid.values();

    let samples = sample_setmax(&set, &db, &rho);
    let values: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let curve = ExponentCurve::new(rho.clone(), values.clone(), "setmax").unwrap();
    let hull = upper_concave_envelope(&curve).unwrap();

    println!("{} of {} grid points are hull vertices", hull.vertex_indices.len(), rho.len());
    let lifted = hull
        .touching
        .iter()
        .zip(&rho)
        .filter(|(t, _)| !**t)
        .map(|(_, r)| *r)
        .collect::<Vec<_>>();
    if let (Some(a), Some(b)) = (lifted.first(), lifted.last()) {
        println!("hull strictly above the curve on [{a:.4}, {b:.4}] ({} points)", lifted.len());
    }

    let sup = sup_objective(&hull, &curve, &problem, set_tail_growth(&set, &db)).unwrap();
    println!(
        "grid sup of hull - t E_s = {:.6} at rho = {:.4} ({:?}, tail slope {:.4})",
        sup.value, sup.rho_star, sup.attainment, sup.tail_slope
    );
    let (lo, hi) = hull.bracketing_vertices(sup.rho_star);
    println!(
        "bracketing vertices rho = {:.4} (Q{}) and {:.4} (Q{})",
        rho[lo],
        samples[lo].1 + 1,
        rho[hi],
        samples[hi].1 + 1
    );
}
