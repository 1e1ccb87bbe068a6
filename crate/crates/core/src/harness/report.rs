//! Simulation reports and their CSV/JSON serialization.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use num_rational::BigRational;
use serde::Serialize;

use super::config::OutputFormat;
use super::stats::MeanEstimate;
use crate::error::Result;
use crate::secretary::analytic::format_ratio;

pub const CSV_HEADER: &str =
    "problem,n,k,policy,param,trials,mean,std_err,ci95,analytic,source,seed";

/// How an analytic reference relates to the estimated quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// The exact expected value; checked to within 4 standard errors.
    Exact,
    /// A guaranteed lower bound; checked one-sided at 4 standard errors.
    LowerBound,
    /// A large-n limit; reported, not checked.
    Limit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticReference {
    pub value: f64,
    pub exact: Option<BigRational>,
    pub source: String,
    pub kind: ReferenceKind,
}

impl AnalyticReference {
    pub fn exact(value: BigRational, source: impl Into<String>) -> Self {
        Self {
            value: crate::secretary::analytic::ratio_to_f64(&value),
            exact: Some(value),
            source: source.into(),
            kind: ReferenceKind::Exact,
        }
    }

    pub fn approx(value: f64, source: impl Into<String>, kind: ReferenceKind) -> Self {
        Self {
            value,
            exact: None,
            source: source.into(),
            kind,
        }
    }

    /// Rendered value: `p/q` when exact, otherwise the float.
    pub fn display_value(&self) -> String {
        match &self.exact {
            Some(r) => format_ratio(r),
            None => format!("{}", self.value),
        }
    }
}

pub const CONSISTENCY_SE: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub problem: String,
    pub n: usize,
    pub k: usize,
    pub policy: String,
    pub param: String,
    pub estimate: MeanEstimate,
    pub analytic: Option<AnalyticReference>,
    pub seed: u64,
    pub wall_time: Duration,
}

/// One flat row; field order is the column order.
#[derive(Debug, Serialize)]
struct Row<'a> {
    problem: &'a str,
    n: usize,
    k: usize,
    policy: &'a str,
    param: &'a str,
    trials: u64,
    mean: f64,
    std_err: f64,
    ci95: f64,
    analytic: String,
    source: &'a str,
    seed: u64,
}

impl SimulationReport {
    pub fn trials(&self) -> u64 {
        self.estimate.count
    }

    pub fn mean(&self) -> f64 {
        self.estimate.mean
    }

    pub fn std_err(&self) -> f64 {
        self.estimate.std_err
    }

    pub fn ci95(&self) -> f64 {
        self.estimate.ci95()
    }

    /// Whether the estimate agrees with a checked reference; `None` when
    /// there is no reference or it is a limit.
    pub fn consistent(&self) -> Option<bool> {
        let a = self.analytic.as_ref()?;
        let z = self.estimate.z_score(a.value);
        match a.kind {
            ReferenceKind::Exact => Some(z.abs() <= CONSISTENCY_SE),
            ReferenceKind::LowerBound => Some(z >= -CONSISTENCY_SE),
            ReferenceKind::Limit => None,
        }
    }

    fn row(&self) -> Row<'_> {
        Row {
            problem: &self.problem,
            n: self.n,
            k: self.k,
            policy: &self.policy,
            param: &self.param,
            trials: self.trials(),
            mean: self.mean(),
            std_err: self.std_err(),
            ci95: self.ci95(),
            analytic: self
                .analytic
                .as_ref()
                .map(AnalyticReference::display_value)
                .unwrap_or_default(),
            source: self.analytic.as_ref().map_or("", |a| a.source.as_str()),
            seed: self.seed,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.serialize(self.row())?;
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.row())? + "\n")
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => {
                let mut buf = Vec::new();
                self.write_csv(&mut buf)?;
                Ok(String::from_utf8(buf).expect("csv output is utf-8"))
            }
        }
    }

    pub fn write_to(&self, path: &Path, format: OutputFormat) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }
}
