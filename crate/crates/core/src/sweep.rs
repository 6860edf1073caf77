//! Per-ρ curves for a fixed pair, as plotted in the figures, plus CSV I/O.

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{upper_concave_envelope, ExponentCurve};
use crate::kernel::{bhattacharyya_matrix, e_s, RhoKernel};
use crate::optimizer::{
    baseline_random_coding, sample_setmax, single_class_fixed_q, two_class_exponent_fixed_pair,
};
use crate::simplex::SolverConfig;
use crate::types::{DistributionSet, ProblemSpec, RhoGrid};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

/// Horizontal reference line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub rho: Vec<f64>,
    pub columns: Vec<Series>,
    pub levels: Vec<Level>,
}

impl SweepOutput {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.values.as_slice())
    }

    pub fn level(&self, name: &str) -> Option<f64> {
        self.levels.iter().find(|l| l.name == name).map(|l| l.value)
    }

    /// One row per ρ. Levels are written as constant columns so the file is
    /// self-contained. Values use 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut header = vec!["rho".to_string()];
        header.extend(self.columns.iter().map(|c| c.name.clone()));
        header.extend(self.levels.iter().map(|l| format!("level_{}", l.name)));
        writeln!(w, "{}", header.join(","))?;
        for (i, rho) in self.rho.iter().enumerate() {
            let mut row = vec![format!("{rho:.16e}")];
            row.extend(self.columns.iter().map(|c| format!("{:.16e}", c.values[i])));
            row.extend(self.levels.iter().map(|l| format!("{:.16e}", l.value)));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Parses a file written by [`SweepOutput::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("sweep csv: {msg}"));
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| bad("missing header".into()))?
            .map_err(|e| bad(e.to_string()))?;
        let names: Vec<&str> = header.split(',').collect();
        if names.first() != Some(&"rho") {
            return Err(bad("first column must be rho".into()));
        }
        let mut table: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
        for (n, line) in lines.enumerate() {
            let line = line.map_err(|e| bad(e.to_string()))?;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() {
                return Err(bad(format!("row {} has {} fields", n + 1, fields.len())));
            }
            for (col, f) in table.iter_mut().zip(fields) {
                col.push(f.parse().map_err(|_| bad(format!("row {}: bad number {f:?}", n + 1)))?);
            }
        }
        let mut out = SweepOutput {
            rho: table[0].clone(),
            columns: Vec::new(),
            levels: Vec::new(),
        };
        for (name, values) in names.iter().zip(table).skip(1) {
            match name.strip_prefix("level_") {
                Some(level) => out.levels.push(Level {
                    name: level.to_string(),
                    value: values.first().copied().unwrap_or(f64::NAN),
                }),
                None => out.columns.push(Series {
                    name: name.to_string(),
                    values,
                }),
            }
        }
        Ok(out)
    }
}

/// Samples, on every grid ρ:
/// `setmax`, its concave `hull`, `objective = hull − t·E_s`, and
/// `single_q1`, `single_q2` (each `E_x(Q_c,ρ) − t·E_s`).
///
/// Levels: `two_class` (fixed pair), `single_class` (best fixed member) and,
/// when requested, `baseline`.
pub fn sweep(
    problem: &ProblemSpec,
    pair: &DistributionSet,
    grid: &RhoGrid,
    config: &SolverConfig,
    with_baseline: bool,
) -> Result<SweepOutput> {
    let two = two_class_exponent_fixed_pair(pair, problem, grid)?;
    let db = bhattacharyya_matrix(problem.channel());
    let rho = grid.values();
    let t = problem.rate();
    let penalty: Vec<f64> = rho.iter().map(|&r| t * e_s(r, problem.source())).collect();

    let setmax: Vec<f64> = sample_setmax(pair, &db, &rho).into_iter().map(|s| s.0).collect();
    let hull = if setmax.iter().all(|v| v.is_finite()) {
        let curve = ExponentCurve::new(rho.clone(), setmax.clone(), "setmax")?;
        upper_concave_envelope(&curve)?.hull_values
    } else {
        setmax.clone()
    };
    let objective: Vec<f64> = hull.iter().zip(&penalty).map(|(h, p)| h - p).collect();

    let mut columns = vec![
        Series {
            name: "setmax".into(),
            values: setmax,
        },
        Series {
            name: "hull".into(),
            values: hull,
        },
        Series {
            name: "objective".into(),
            values: objective,
        },
    ];
    let mut single_best = f64::NEG_INFINITY;
    for (c, q) in pair.members().iter().enumerate() {
        let values = rho
            .iter()
            .zip(&penalty)
            .map(|(&r, p)| RhoKernel::new(&db, r).e_x(q) - p)
            .collect();
        columns.push(Series {
            name: format!("single_q{}", c + 1),
            values,
        });
        single_best = single_best.max(single_class_fixed_q(q, problem, grid)?.value);
    }

    let mut levels = vec![
        Level {
            name: "two_class".into(),
            value: two.value,
        },
        Level {
            name: "single_class".into(),
            value: single_best,
        },
    ];
    if with_baseline {
        let b = baseline_random_coding(problem, &RhoGrid::unit_interval(101)?, config)?;
        levels.push(Level {
            name: "baseline".into(),
            value: b.value,
        });
    }
    Ok(SweepOutput {
        rho,
        columns,
        levels,
    })
}
