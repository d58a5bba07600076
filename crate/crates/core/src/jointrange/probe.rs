use super::optimizer::{min_distance, ProbeConfig, ProbeReport, RangeMode};
use super::tuple::{JointPoint, OperatorTuple};
use crate::error::{Error, Result};

pub const ENDPOINT_TOL: f64 = 1e-8;
pub const DEFAULT_FLAG_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SegmentSample {
    /// The sample is `t·p + (1-t)·q`.
    pub t: f64,
    pub point: JointPoint,
    pub distance: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct SegmentReport {
    pub p_distance: f64,
    pub q_distance: f64,
    pub samples: Vec<SegmentSample>,
    pub threshold: f64,
    /// Largest interior distance found.
    pub max_distance: f64,
}

impl SegmentReport {
    pub fn flagged(&self) -> impl Iterator<Item = &SegmentSample> {
        self.samples.iter().filter(|s| s.flagged)
    }

    pub fn is_convex_evidence(&self) -> bool {
        self.flagged().next().is_none()
    }
}

/// Scans `samples` interior points of the segment `[q, p]` and flags those
/// whose distance to the joint range exceeds `threshold`. Both endpoints must
/// be attained first.
pub fn convexity_probe(
    ts: &OperatorTuple,
    p: &JointPoint,
    q: &JointPoint,
    samples: usize,
    threshold: f64,
    cfg: &ProbeConfig,
) -> Result<SegmentReport> {
    let endpoint = |z: &JointPoint| -> Result<f64> {
        let mut c = cfg.clone();
        c.stop_below = Some(ENDPOINT_TOL * 0.1);
        let r = min_distance(ts, z, RangeMode::Joint, &c)?;
        if r.best_distance > ENDPOINT_TOL {
            return Err(Error::EndpointNotAttained {
                distance: r.best_distance,
            });
        }
        Ok(r.best_distance)
    };
    let p_distance = endpoint(p)?;
    let q_distance = endpoint(q)?;

    let mut out = Vec::with_capacity(samples);
    for i in 1..=samples {
        let t = i as f64 / (samples + 1) as f64;
        let point = p.lerp(q, t);
        let ProbeReport { best_distance, .. } = min_distance(ts, &point, RangeMode::Joint, cfg)?;
        out.push(SegmentSample {
            t,
            point,
            distance: best_distance,
            flagged: best_distance > threshold,
        });
    }
    let max_distance = out.iter().map(|s| s.distance).fold(0.0, f64::max);
    Ok(SegmentReport {
        p_distance,
        q_distance,
        samples: out,
        threshold,
        max_distance,
    })
}
