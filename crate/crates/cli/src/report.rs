//! Report files written by `solve` and `path`.

use jordan_wlcp_core::pairs::DegreeReport;
use jordan_wlcp_core::{residuals, PairProblem, ResidualTriple, SolveReport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Residuals {
    pub comp: f64,
    pub lin: f64,
    pub cone: f64,
}

impl From<ResidualTriple> for Residuals {
    fn from(r: ResidualTriple) -> Self {
        Self { comp: r.comp, lin: r.lin, cone: r.cone }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Classification {
    pub r0: bool,
    pub degree: Option<i64>,
    pub p_pair: Option<bool>,
    /// A nonzero solution of the homogeneous problem when `r0` is false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub status: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub residuals: Residuals,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

impl ReportFile {
    pub fn from_solve(r: &SolveReport) -> Self {
        Self {
            status: r.status.as_str().to_string(),
            x: r.x.coords().to_vec(),
            y: r.y.coords().to_vec(),
            residuals: r.residuals.into(),
            iterations: r.iterations,
            classification: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::parse("report", e.to_string()))
    }

    /// Largest deviation between the stored residuals and a recomputation from
    /// the stored `(x, y)`.
    pub fn residual_drift(&self, problem: &PairProblem) -> Result<f64> {
        let alg = problem.algebra();
        if self.x.len() != alg.dim() || self.y.len() != alg.dim() {
            return Err(CliError::Validation(format!(
                "report holds {}/{} coordinates but the instance has dimension {}",
                self.x.len(),
                self.y.len(),
                alg.dim()
            )));
        }
        let x = alg.element(self.x.clone())?;
        let y = alg.element(self.y.clone())?;
        let r = residuals(&x, &y, problem)?;
        Ok((r.comp - self.residuals.comp)
            .abs()
            .max((r.lin - self.residuals.lin).abs())
            .max((r.cone - self.residuals.cone).abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeFile {
    pub degree: i64,
    pub samples_used: usize,
    pub solutions_per_sample: Vec<usize>,
    pub degenerate_retries: usize,
}

impl From<&DegreeReport> for DegreeFile {
    fn from(d: &DegreeReport) -> Self {
        Self {
            degree: d.degree,
            samples_used: d.samples_used,
            solutions_per_sample: d.solutions_per_sample.clone(),
            degenerate_retries: d.degenerate_retries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathLevel {
    pub t: f64,
    #[serde(flatten)]
    pub report: ReportFile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathFile {
    pub levels: Vec<PathLevel>,
    /// Residuals of the last level measured against `w = 0`.
    pub last_level_unweighted: Residuals,
    /// Solve of the `w = 0` problem, warm-started from the last level.
    pub limit: ReportFile,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
