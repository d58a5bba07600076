//! A constant diagonal on an operator model: chunks of tail coordinates whose
//! averages hit a point inside the essential range.

use numrange::diagonals::{chunk_selector, constant_diag_basis};
use numrange::linalg::C64;
use numrange::numrange::{essential_range, OperatorModel, TailStream};

fn main() {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let model = OperatorModel::diagonal(vec![TailStream::Periodic(vec![zero, one, i])], vec![zero, one, i]).unwrap();
    let we = essential_range(&model);
    let vertices: Vec<String> = we.vertices().iter().map(|v| format!("{v}")).collect();
    println!("essential range vertices {}", vertices.join(", "));

    let lambda = C64::new(0.3, 0.2);
    let plan = chunk_selector(&model, lambda, 1e-6, 3).unwrap();
    for (chunk, avg) in plan.chunks.iter().zip(&plan.achieved) {
        println!("chunk of {} coordinates starting at {}, average {avg:.6}", chunk.len(), chunk[0]);
    }

    let r = constant_diag_basis(&model, lambda, 500, 1e-6).unwrap();
    println!("{} vectors, max deviation from {lambda} {:.1e}", r.len(), r.max_deviation);
}
