//! Nested subspaces with shrinking traces on a model whose tail repeats
//! (-17, 1, 1, 1, 1, 1, 1, 1, 1), then the same for a convex combination.

use numrange::diagonals::{convex_comb_diag_traced, fan_construct_traced};
use numrange::linalg::C64;
use numrange::verify::spike_model;

fn main() {
    let model = spike_model();
    let (report, levels) = fan_construct_traced(&model, -1.0, 1.0, 8).unwrap();
    for l in &levels {
        println!("level {:>2}: dim {:>6}, |trace| {:.1e}", l.level, l.dim, l.trace.norm());
    }
    println!("{} vectors in total", report.len());

    let t = 0.5;
    let (report, levels) = convex_comb_diag_traced(&model, C64::new(-1.0, 0.0), C64::new(1.0, 0.0), t, 6).unwrap();
    let last = levels.last().unwrap();
    println!(
        "t = {t}: {} levels, dim {}, |trace| {:.1e}, {} vectors",
        levels.len(),
        last.dim,
        last.trace.norm(),
        report.len()
    );
}
