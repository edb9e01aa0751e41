//! JSON problem, solution and trace files.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::ZonotopalLattice;
use crate::matrix::{TuMatrix, TuStatus};
use crate::mmcc::{CvpSolution, IterationRecord};
use crate::rational::{int, parse_rational, IntVector, Rational};

/// A rational that serializes as `"p/q"` in lowest terms (or `"p"` when
/// integral) and also deserializes from a bare JSON integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = RationalText;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RationalText, E> {
                parse_rational(v).map(RationalText).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RationalText, E> {
                Ok(RationalText(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RationalText, E> {
                i64::try_from(v).map(|v| RationalText(int(v))).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

fn texts(values: &[Rational]) -> Vec<RationalText> {
    values.iter().cloned().map(RationalText).collect()
}

fn values(texts: &[RationalText]) -> Vec<Rational> {
    texts.iter().map(|r| r.0.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TuMode {
    #[default]
    Verify,
    Assert,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "M")]
    pub matrix: Vec<Vec<i64>>,
    /// All ones when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<RationalText>>,
    pub t: Vec<RationalText>,
    #[serde(default)]
    pub tu_mode: TuMode,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// A problem with zero target for `lattice`.
    pub fn from_lattice(name: impl Into<String>, lattice: &ZonotopalLattice) -> Self {
        let matrix = lattice.matrix();
        ProblemFile {
            name: Some(name.into()),
            m: lattice.dim(),
            n: matrix.row_count(),
            matrix: matrix.to_rows(),
            g: Some(texts(lattice.weights())),
            t: vec![RationalText(int(0)); lattice.dim()],
            tu_mode: match matrix.status() {
                TuStatus::Verified => TuMode::Verify,
                TuStatus::Asserted => TuMode::Assert,
            },
        }
    }

    fn check_shape(&self) -> Result<()> {
        if self.matrix.len() != self.n {
            return Err(Error::Dimension(format!("M has {} rows but n = {}", self.matrix.len(), self.n)));
        }
        if let Some(row) = self.matrix.iter().find(|r| r.len() != self.m) {
            return Err(Error::Dimension(format!("M has a row of length {} but m = {}", row.len(), self.m)));
        }
        if self.t.len() != self.m {
            return Err(Error::Dimension(format!("t has length {} but m = {}", self.t.len(), self.m)));
        }
        if let Some(g) = &self.g {
            if g.len() != self.m {
                return Err(Error::Dimension(format!("g has length {} but m = {}", g.len(), self.m)));
            }
        }
        Ok(())
    }

    pub fn tu_matrix(&self) -> Result<TuMatrix> {
        self.check_shape()?;
        match self.tu_mode {
            TuMode::Verify => TuMatrix::verified(self.matrix.clone(), self.m),
            TuMode::Assert => TuMatrix::asserted(self.matrix.clone(), self.m),
        }
    }

    pub fn weights(&self) -> Vec<Rational> {
        match &self.g {
            Some(g) => values(g),
            None => vec![int(1); self.m],
        }
    }

    pub fn target(&self) -> Vec<Rational> {
        values(&self.t)
    }

    pub fn lattice(&self) -> Result<ZonotopalLattice> {
        ZonotopalLattice::new(self.tu_matrix()?, self.weights())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub closest: IntVector,
    pub distance_sq: RationalText,
    pub iterations: usize,
    pub lambda_trace: Vec<RationalText>,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<bool>,
    pub tool_version: String,
}

impl SolutionFile {
    pub fn from_solution(solution: &CvpSolution, oracle_agreement: Option<bool>) -> Self {
        SolutionFile {
            closest: solution.closest.clone(),
            distance_sq: RationalText(solution.distance_sq.clone()),
            iterations: solution.iterations(),
            lambda_trace: texts(&solution.lambda_trace()),
            certified: solution.certified,
            oracle_agreement,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub index: usize,
    pub v: IntVector,
    pub lambda: RationalText,
    pub u: IntVector,
    pub step: i64,
    pub distance_sq: RationalText,
    pub step_fallback: bool,
}

impl From<&IterationRecord> for TraceEntry {
    fn from(r: &IterationRecord) -> Self {
        TraceEntry {
            index: r.index,
            v: r.v.clone(),
            lambda: RationalText(r.lambda.clone()),
            u: r.u.coords().to_vec(),
            step: r.step,
            distance_sq: RationalText(r.distance_sq.clone()),
            step_fallback: r.step_fallback,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializing plain data cannot fail");
    s.push('\n');
    s
}

/// A Gram matrix file, either a bare array of rows or `{"gram": [...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GramFile {
    Bare(Vec<Vec<RationalText>>),
    Wrapped { gram: Vec<Vec<RationalText>> },
}

impl GramFile {
    pub fn parse(text: &str) -> Result<Vec<Vec<Rational>>> {
        let file: GramFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = match file {
            GramFile::Bare(rows) | GramFile::Wrapped { gram: rows } => rows,
        };
        Ok(rows.iter().map(|r| values(r)).collect())
    }
}
