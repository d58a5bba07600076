//! Exact projection-diagonal decisions for two diagonals and their average.

use numrange::kadison::{self, Convention};

fn main() {
    let d1 = kadison::d1();
    let d2 = kadison::d2();
    let d0 = kadison::midpoint(&d1, &d2).unwrap();
    for (name, d) in [("d1", &d1), ("d2", &d2), ("d0", &d0)] {
        let s = kadison::sums(d);
        println!("{name} = {d}");
        println!("  a = {}, b = {}, {:?}", s.a, s.b, kadison::decide(d));
    }
    println!(
        "same class: {}",
        kadison::same_projection_class(&d1, &d2).unwrap()
    );
    for (name, d) in kadison::catalog() {
        let strict = kadison::decide_with(&d, Convention::Strict);
        let le = kadison::decide_with(&d, Convention::LeHalf);
        println!("{name:>18}: {strict:?} / {le:?}");
    }
}
