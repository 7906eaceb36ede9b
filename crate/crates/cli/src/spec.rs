//! ProblemSpec: the JSON input format.
//!
//! ```json
//! {
//!   "version": 1,
//!   "n": 1,
//!   "psi": [[1, 0], [0, 0]],
//!   "steps": [{ "A": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "B": "zero" }],
//!   "mode": "abstract"
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows.

use qaffine_core::addsub::AddSubMode;
use qaffine_core::linalg::{c, ComplexMatrix, ComplexVector};
use qaffine_core::pipeline::{AffineSequence, AffineStep, Translation};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub version: u32,
    pub n: usize,
    pub psi: Vec<Pair>,
    pub steps: Vec<StepSpec>,
    #[serde(default, with = "mode_format")]
    pub mode: AddSubMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    #[serde(rename = "A")]
    pub a: Vec<Vec<Pair>>,
    #[serde(rename = "B")]
    pub b: TranslationSpec,
}

/// Either a list of pairs or the keyword `"zero"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TranslationSpec {
    Vector(Vec<Pair>),
    Keyword(String),
}

mod mode_format {
    use qaffine_core::addsub::AddSubMode;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(mode: &AddSubMode, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&mode.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AddSubMode, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse()
            .map_err(|_| D::Error::custom(format!("unknown mode {raw:?}")))
    }
}

fn to_vector(pairs: &[Pair]) -> ComplexVector {
    ComplexVector::from_iterator(pairs.len(), pairs.iter().map(|p| c(p[0], p[1])))
}

fn from_vector(v: &ComplexVector) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if spec.version != FORMAT_VERSION {
            return Err(CliError::Schema(format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                spec.version
            )));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Structural checks that belong to the file format rather than to the
    /// engine: array shapes and the `n` field.
    fn check_layout(&self) -> Result<(), CliError> {
        let dim = 1usize
            .checked_shl(self.n as u32)
            .filter(|_| self.n < usize::BITS as usize)
            .ok_or_else(|| CliError::Schema(format!("n = {} is out of range", self.n)))?;
        if self.psi.len() != dim {
            return Err(CliError::Schema(format!(
                "psi has {} entries but n = {} needs {dim}",
                self.psi.len(),
                self.n
            )));
        }
        for (j, step) in self.steps.iter().enumerate() {
            let label = j + 1;
            if step.a.len() != dim || step.a.iter().any(|row| row.len() != dim) {
                return Err(CliError::Schema(format!("step {label}: A must be {dim}x{dim}")));
            }
            match &step.b {
                TranslationSpec::Vector(v) if v.len() != dim => {
                    return Err(CliError::Schema(format!(
                        "step {label}: B has {} entries, expected {dim}",
                        v.len()
                    )))
                }
                TranslationSpec::Keyword(k) if k != "zero" => {
                    return Err(CliError::Schema(format!(
                        "step {label}: B must be a list of pairs or \"zero\", got {k:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn step_parts(&self) -> Result<Vec<(ComplexMatrix, Translation)>, CliError> {
        self.check_layout()?;
        let dim = self.psi.len();
        Ok(self
            .steps
            .iter()
            .map(|s| {
                let a = ComplexMatrix::from_fn(dim, dim, |i, j| c(s.a[i][j][0], s.a[i][j][1]));
                let b = match &s.b {
                    TranslationSpec::Vector(v) => Translation::Vector(to_vector(v)),
                    TranslationSpec::Keyword(_) => Translation::Zero,
                };
                (a, b)
            })
            .collect())
    }

    pub fn psi_vector(&self) -> ComplexVector {
        to_vector(&self.psi)
    }

    /// Validate against every pipeline invariant.
    pub fn to_sequence(&self) -> Result<AffineSequence, CliError> {
        let steps = self
            .step_parts()?
            .into_iter()
            .map(|(a, b)| AffineStep::new(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AffineSequence::new(self.psi_vector(), steps)?)
    }

    pub fn from_sequence(seq: &AffineSequence, mode: AddSubMode) -> Self {
        let steps = seq
            .steps()
            .iter()
            .map(|s| StepSpec {
                a: s.a
                    .row_iter()
                    .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
                b: match &s.b {
                    Translation::Zero => TranslationSpec::Keyword("zero".into()),
                    Translation::Vector(v) => TranslationSpec::Vector(from_vector(v)),
                },
            })
            .collect();
        Self {
            version: FORMAT_VERSION,
            n: seq.n(),
            psi: from_vector(seq.psi0()),
            steps,
            mode,
        }
    }
}
