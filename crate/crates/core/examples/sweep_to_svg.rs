//! Writes the per-ρ curves of a figure configuration as CSV and SVG.
//!
//! ```text
//! cargo run --release --example sweep_to_svg [fig1|fig2|fig3] [out_dir]
//! ```

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use expurgated_jscc::config::ProblemConfig;
use expurgated_jscc::svg::render_svg;
use expurgated_jscc::sweep::sweep;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig1".into());
    let out_dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../configs/{name}.toml"));
    let c = ProblemConfig::load(&path).unwrap();
    let out = sweep(&c.problem, c.pair.as_ref().unwrap(), &c.grid, &c.solver, c.baseline).unwrap();

    let csv = out_dir.join(format!("{name}.csv"));
    out.write_csv(BufWriter::new(File::create(&csv).unwrap())).unwrap();
    let svg = out_dir.join(format!("{name}.svg"));
    std::fs::write(&svg, render_svg(&out, c.title.as_deref())).unwrap();
    for l in &out.levels {
        println!("{:<13} {:.6}", l.name, l.value);
    }
    println!("wrote {} and {}", csv.display(), svg.display());
}
