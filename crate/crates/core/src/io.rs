//! JSON documents read and written by the command-line tool.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::diagonals::{Basis, DiagonalReport, FanLevel};
use crate::error::{Error, Result};
use crate::jointrange::{OperatorTuple, ProbeReport, RangeMode, SegmentReport};
use crate::kadison::{DiagonalSeq, SeqStream};
use crate::linalg::{ComplexMatrix, C64};
use crate::numrange::{OperatorModel, TailStream};

/// `[re, im]`
pub type Pair = [f64; 2];

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn complex(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses `text`, reporting failures as `what:line:column: message`.
pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.rsplit_once(" at line ").map(|(m, _)| m.to_string()).unwrap_or(msg);
        Error::InvalidInput(format!("{what}:{}:{}: {msg}", e.line(), e.column()))
    })
}

pub fn to_pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub dim: usize,
    pub entries: Vec<Vec<Pair>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        Self {
            dim: n,
            entries: (0..n).map(|i| (0..n).map(|j| pair(m[(i, j)])).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "matrix: dim is {} but there are {} rows",
                self.dim,
                self.entries.len()
            )));
        }
        let mut data = Vec::with_capacity(self.dim * self.dim);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::InvalidInput(format!(
                    "matrix: row {i} has {} entries, expected {}",
                    row.len(),
                    self.dim
                )));
            }
            for p in row {
                if !(p[0].is_finite() && p[1].is_finite()) {
                    return Err(Error::InvalidInput(format!("matrix: row {i} has a non-finite entry")));
                }
                data.push(complex(*p));
            }
        }
        ComplexMatrix::from_row_major(self.dim, data)
    }
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixDoc>(text, "matrix")?.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    to_pretty(&MatrixDoc::from_matrix(m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub members: Vec<MatrixDoc>,
}

pub fn tuple_from_json(text: &str) -> Result<OperatorTuple> {
    let doc: TupleDoc = parse(text, "tuple")?;
    let members = doc.members.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>>>()?;
    OperatorTuple::new(members)
}

pub fn tuple_to_json(ts: &OperatorTuple) -> String {
    to_pretty(&TupleDoc {
        members: ts.members().iter().map(MatrixDoc::from_matrix).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StreamDoc {
    Constant { c: Pair },
    Periodic { values: Vec<Pair> },
    Geometric { c: Pair, r: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub head: MatrixDoc,
    pub tail: Vec<StreamDoc>,
    pub limit_points: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

pub fn model_from_json(text: &str) -> Result<OperatorModel> {
    let doc: ModelDoc = parse(text, "model")?;
    let head = doc.head.to_matrix()?;
    let tail = doc
        .tail
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(match s {
                StreamDoc::Constant { c } => TailStream::Constant(complex(*c)),
                StreamDoc::Periodic { values } => {
                    TailStream::Periodic(values.iter().copied().map(complex).collect())
                }
                StreamDoc::Geometric { c, r } => TailStream::Geometric {
                    c: complex(*c),
                    ratio: Rational64::from_str(r.trim()).map_err(|e| {
                        Error::InvalidInput(format!("model: tail[{i}].r {r:?}: {e}"))
                    })?,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let limit_points = doc.limit_points.iter().copied().map(complex).collect();
    Ok(OperatorModel::new(head, tail, limit_points)?.with_truncation(doc.truncation))
}

/// Only models without an affine entry map have a document form.
pub fn model_to_json(model: &OperatorModel) -> Result<String> {
    if model.entry_map() != (C64::new(1.0, 0.0), C64::new(0.0, 0.0)) {
        return Err(Error::InvalidInput("model has a non-identity entry map".into()));
    }
    let tail = model
        .streams()
        .iter()
        .map(|s| match s {
            TailStream::Constant(c) => StreamDoc::Constant { c: pair(*c) },
            TailStream::Periodic(v) => StreamDoc::Periodic {
                values: v.iter().copied().map(pair).collect(),
            },
            TailStream::Geometric { c, ratio } => StreamDoc::Geometric {
                c: pair(*c),
                r: ratio.to_string(),
            },
        })
        .collect();
    Ok(to_pretty(&ModelDoc {
        head: MatrixDoc::from_matrix(model.head()),
        tail,
        limit_points: model.limit_points().iter().copied().map(pair).collect(),
        truncation: model.truncation(),
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SeqStreamDoc {
    Constant { c: String },
    Geometric { c: String, r: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqDoc {
    pub prefix: Vec<String>,
    pub tails: Vec<SeqStreamDoc>,
    pub interleave: usize,
}

fn rational(s: &str, at: &str) -> Result<BigRational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok();
            let d = BigInt::from_str(d.trim()).ok().filter(|d| d != &BigInt::from(0));
            n.zip(d).map(|(n, d)| BigRational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    };
    parsed.ok_or_else(|| Error::InvalidInput(format!("sequence: {at}: {s:?} is not a rational")))
}

pub fn seq_from_json(text: &str) -> Result<DiagonalSeq> {
    let doc: SeqDoc = parse(text, "sequence")?;
    if doc.interleave != doc.tails.len() {
        return Err(Error::InvalidInput(format!(
            "sequence: interleave is {} but there are {} tails",
            doc.interleave,
            doc.tails.len()
        )));
    }
    let prefix = doc
        .prefix
        .iter()
        .enumerate()
        .map(|(i, s)| rational(s, &format!("prefix[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let tails = doc
        .tails
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Ok(match t {
                SeqStreamDoc::Constant { c } => SeqStream::Constant(rational(c, &format!("tails[{i}].c"))?),
                SeqStreamDoc::Geometric { c, r } => SeqStream::Geometric {
                    c: rational(c, &format!("tails[{i}].c"))?,
                    r: rational(r, &format!("tails[{i}].r"))?,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DiagonalSeq::new(prefix, tails)
}

pub fn seq_to_json(d: &DiagonalSeq) -> String {
    to_pretty(&SeqDoc {
        prefix: d.prefix().iter().map(|x| x.to_string()).collect(),
        tails: d
            .tails()
            .iter()
            .map(|s| match s {
                SeqStream::Constant(c) => SeqStreamDoc::Constant { c: c.to_string() },
                SeqStream::Geometric { c, r } => SeqStreamDoc::Geometric {
                    c: c.to_string(),
                    r: r.to_string(),
                },
            })
            .collect(),
        interleave: d.interleave(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeDoc {
    pub target: Vec<Pair>,
    pub mode: RangeMode,
    pub best_distance: f64,
    pub best_point: Vec<Pair>,
    pub best_x: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_y: Option<Vec<Pair>>,
    pub best_restart: usize,
    pub restarts_used: usize,
    pub seeds: Vec<u64>,
    pub restart_distances: Vec<f64>,
}

impl From<&ProbeReport> for ProbeDoc {
    fn from(r: &ProbeReport) -> Self {
        let v = |x: &[C64]| x.iter().copied().map(pair).collect::<Vec<_>>();
        Self {
            target: v(r.target.coords()),
            mode: r.mode,
            best_distance: r.best_distance,
            best_point: v(r.best_point.coords()),
            best_x: v(&r.best_x),
            best_y: r.best_y.as_deref().map(v),
            best_restart: r.best_restart,
            restarts_used: r.restarts_used,
            seeds: r.seeds.clone(),
            restart_distances: r.restart_distances.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSampleDoc {
    pub t: f64,
    pub point: Vec<Pair>,
    pub distance: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub p_distance: f64,
    pub q_distance: f64,
    pub threshold: f64,
    pub max_distance: f64,
    pub samples: Vec<SegmentSampleDoc>,
}

impl From<&SegmentReport> for SegmentDoc {
    fn from(r: &SegmentReport) -> Self {
        Self {
            p_distance: r.p_distance,
            q_distance: r.q_distance,
            threshold: r.threshold,
            max_distance: r.max_distance,
            samples: r
                .samples
                .iter()
                .map(|s| SegmentSampleDoc {
                    t: s.t,
                    point: s.point.coords().iter().copied().map(pair).collect(),
                    distance: s.distance,
                    flagged: s.flagged,
                })
                .collect(),
        }
    }
}

/// A basis vector: dense components, or `[index, [re, im]]` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorDoc {
    Dense(Vec<Pair>),
    Sparse { entries: Vec<(usize, Pair)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanLevelDoc {
    pub level: usize,
    pub dim: usize,
    pub trace: Pair,
    pub eps: f64,
    pub alpha_count: usize,
    pub n: usize,
    pub gamma: f64,
}

impl From<&FanLevel> for FanLevelDoc {
    fn from(l: &FanLevel) -> Self {
        Self {
            level: l.level,
            dim: l.dim,
            trace: pair(l.trace),
            eps: l.eps,
            alpha_count: l.alpha_count,
            n: l.n,
            gamma: l.gamma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalDoc {
    pub frame: Vec<VectorDoc>,
    pub values: Vec<Pair>,
    pub partial_sums: Vec<Pair>,
    pub checkpoints: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Pair>,
    pub max_deviation: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<FanLevelDoc>,
}

impl DiagonalDoc {
    pub fn new(r: &DiagonalReport, levels: &[FanLevel]) -> Self {
        let frame = match &r.basis {
            Basis::Dense(f) => f
                .vectors()
                .iter()
                .map(|v| VectorDoc::Dense(v.iter().copied().map(pair).collect()))
                .collect(),
            Basis::Sparse(vs) => vs
                .iter()
                .map(|v| VectorDoc::Sparse {
                    entries: v.entries().iter().map(|&(i, z)| (i, pair(z))).collect(),
                })
                .collect(),
        };
        Self {
            frame,
            values: r.values.iter().copied().map(pair).collect(),
            partial_sums: r.partial_sums.iter().copied().map(pair).collect(),
            checkpoints: r.checkpoints.clone(),
            target: r.target.map(pair),
            max_deviation: r.max_deviation,
            levels: levels.iter().map(FanLevelDoc::from).collect(),
        }
    }
}
