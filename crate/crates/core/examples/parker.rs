//! An orthonormal basis in which a random matrix has constant diagonal.

use numrange::diagonals::{parker_basis_traced, Basis};
use numrange::linalg::ComplexMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let t = ComplexMatrix::random_gaussian(8, &mut rng);
    let (report, drift) = parker_basis_traced(&t, 1e-10).unwrap();
    let Basis::Dense(frame) = &report.basis else { unreachable!() };

    println!("tr T / n = {:.6}", t.trace() / 8.0);
    for (k, v) in report.values.iter().enumerate() {
        println!("  <T u_{k}, u_{k}> = {v:.6}");
    }
    println!("max deviation {:.1e}", report.max_deviation);
    println!("orthonormality defect {:.1e}", frame.orthonormality_defect());
    println!("trace drift {:.1e}", drift.iter().copied().fold(0.0, f64::max));
}
