//! Boundary of the numerical range of a 3×3 matrix, then a unit vector
//! attaining an interior point.

use numrange::linalg::{ComplexMatrix, C64};
use numrange::numrange::{boundary_polygon, inverse_numrange};

fn main() {
    let t = ComplexMatrix::from_rows(vec![
        vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
    ])
    .unwrap();

    let poly = boundary_polygon(&t, 360).unwrap();
    println!("{} boundary vertices", poly.vertices().len());
    for v in poly.vertices().iter().step_by(60) {
        println!("  {:+.4} {:+.4}i", v.re, v.im);
    }

    let lambda = C64::new(0.1, 0.2);
    let x = inverse_numrange(&t, lambda, 1e-12).unwrap();
    let back = t.quadratic_form(x.as_slice());
    println!("target {lambda}, attained {back:.3e}, error {:.1e}", (back - lambda).norm());
}
