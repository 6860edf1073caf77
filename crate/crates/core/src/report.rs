//! Human-readable summaries (6 significant digits).

use std::fmt::Write;

use crate::optimizer::{ExponentReport, PairMode, SupInfo};
use crate::hull::Attainment;

/// `x` with `digits` significant digits; `inf`/`-inf`/`nan` spelled out.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..=6).contains(&mag) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn vec6(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| sig(*x, 6)).collect();
    format!("({})", parts.join(", "))
}

fn flag(s: &SupInfo) -> String {
    let mut parts = vec![match s.attainment {
        Attainment::Interior => "interior".to_string(),
        Attainment::LowerEdge => "at rho_min".to_string(),
        Attainment::UpperEdge => format!("at rho_max = {}", sig(s.rho_max, 6)),
        Attainment::Unbounded => "unbounded".to_string(),
    }];
    if s.extensions > 0 {
        parts.push(format!("{} grid extension(s)", s.extensions));
    }
    if s.grid_too_coarse {
        parts.push("grid too coarse near the maximum".into());
    }
    parts.join(", ")
}

/// Multi-line console summary of a report.
pub fn summary(r: &ExponentReport) -> String {
    let mut s = String::new();
    let mode = match r.pair_mode {
        PairMode::Fixed => "fixed pair",
        PairMode::Optimized => "optimized pair",
    };
    let _ = writeln!(s, "rate t                     {}", sig(r.rate, 6));
    let _ = writeln!(
        s,
        "single-class exponent      {}  rho* = {}  Q* = {}",
        sig(r.single_class_value, 6),
        sig(r.single_class_rho, 6),
        vec6(&r.single_class_q)
    );
    let pair: Vec<String> = r.two_class_pair.iter().map(|q| vec6(q)).collect();
    let _ = writeln!(
        s,
        "two-class exponent         {}  rho* = {}  {} {{{}}}",
        sig(r.two_class_value, 6),
        sig(r.two_class_rho, 6),
        mode,
        pair.join(", ")
    );
    let split = &r.gamma_split;
    if split.mixing {
        let _ = writeln!(
            s,
            "  threshold gamma          {}  (gamma' = {}, mixing rho {} and {})",
            sig(split.gamma, 6),
            sig(split.gamma_prime, 6),
            sig(split.rho1, 6),
            sig(split.rho2, 6)
        );
    } else {
        let _ = writeln!(s, "  threshold gamma          1  (no mixing)");
    }
    let fixed: Vec<String> = r.fixed_q_single_class.iter().map(|v| sig(*v, 6)).collect();
    let _ = writeln!(s, "fixed-Q single-class       {}", fixed.join(", "));
    if let Some(b) = r.baseline_random_coding {
        let _ = writeln!(s, "baseline (random coding)   {}", sig(b, 6));
    }
    let _ = writeln!(s, "single-class sup           {}", flag(&r.boundary_flags.single_class));
    let _ = writeln!(s, "two-class sup              {}", flag(&r.boundary_flags.two_class));
    let _ = writeln!(
        s,
        "solver                     {} starts, {} evaluations",
        r.solver_trace.starts, r.solver_trace.evaluations
    );
    s
}
