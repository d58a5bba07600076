//! Distance from a target to the joint numerical range of a commuting triple,
//! and to the range built from independent vectors in the unit ball.

use numrange::jointrange::catalog::commuting_triple;
use numrange::jointrange::{min_distance, JointPoint, ProbeConfig, RangeMode};

fn main() {
    let ts = commuting_triple();
    let target = JointPoint::real(&[0.0, 0.25, 0.25]);
    let cfg = ProbeConfig::default();

    for mode in [RangeMode::Joint, RangeMode::Ap] {
        let r = min_distance(&ts, &target, mode, &cfg).unwrap();
        println!(
            "{mode:?}: distance {:.6} after {} restarts (best restart {})",
            r.best_distance, r.restarts_used, r.best_restart
        );
    }
}
