//! Flat TOML run configuration.
//!
//! ```toml
//! geometry = "half-plane"
//! alpha = 1.0
//! J = 20
//! T = 0.4
//! dt_rule = "h2"
//! scheme = "newton"
//! initial = "semicircle"
//! ```

use std::path::Path;

use curveflow_core::{
    CurveForcing, CurveScheme, Domain, Example, FieldSource, ForcingTime, InitialCurve,
    InitialField, SimConfig, TimeRule, Vec2,
};
use serde::{Deserialize, Serialize};

use crate::error::AppError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub geometry: String,
    pub alpha: f64,
    #[serde(rename = "J")]
    pub elements: i64,
    #[serde(rename = "T")]
    pub final_time: f64,
    #[serde(default = "default_dt_rule")]
    pub dt_rule: String,
    #[serde(default = "default_scheme")]
    pub scheme: String,
    #[serde(default = "default_none")]
    pub f: String,
    #[serde(default = "default_none")]
    pub g: String,
    #[serde(default)]
    pub w_b: f64,
    pub initial: String,
    /// Node coordinates for `initial = "custom"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_nodes: Option<Vec<[f64; 2]>>,
    /// `"zero"`, `"parabola"` or a constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_field: Option<toml::Value>,
    #[serde(default = "default_tol")]
    pub newton_tol: f64,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    /// `"prev"` or `"curr"`: time level of the explicit `t` in `f`.
    #[serde(default = "default_prev")]
    pub f_time: String,
    /// `"prev"` or `"curr"`: time level of the explicit `t` in `g`.
    #[serde(default = "default_prev")]
    pub g_time: String,
    /// Closed-form solution to measure errors against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

fn default_dt_rule() -> String {
    "h2".into()
}
fn default_scheme() -> String {
    "newton".into()
}
fn default_none() -> String {
    "none".into()
}
fn default_prev() -> String {
    "prev".into()
}
fn default_tol() -> f64 {
    1e-12
}
fn default_stride() -> usize {
    1
}

/// A validated configuration together with its echo.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub sim: SimConfig,
    pub exact: Option<Example>,
}

/// `h2`, `ch:<c>` or `steps:<N>`.
pub fn parse_time_rule(s: &str) -> Result<TimeRule, AppError> {
    let bad = || AppError::Config(format!("dt_rule '{s}' is not one of h2, ch:<c>, steps:<N>"));
    if s == "h2" {
        return Ok(TimeRule::HSquared);
    }
    if let Some(c) = s.strip_prefix("ch:") {
        let c: f64 = c.parse().map_err(|_| bad())?;
        return Ok(TimeRule::ProportionalToH(c));
    }
    if let Some(n) = s.strip_prefix("steps:") {
        return Ok(TimeRule::Steps(n.parse().map_err(|_| bad())?));
    }
    Err(bad())
}

fn parse_forcing_time(key: &str, s: &str) -> Result<ForcingTime, AppError> {
    match s {
        "prev" => Ok(ForcingTime::Previous),
        "curr" => Ok(ForcingTime::Current),
        other => Err(AppError::Config(format!(
            "{key} must be prev or curr, got '{other}'"
        ))),
    }
}

fn parse_initial_field(value: Option<&toml::Value>) -> Result<InitialField, AppError> {
    match value {
        None => Ok(InitialField::Constant(0.0)),
        Some(toml::Value::String(s)) if s == "zero" => Ok(InitialField::Constant(0.0)),
        Some(toml::Value::String(s)) if s == "parabola" => Ok(InitialField::Parabola),
        Some(toml::Value::Float(c)) => Ok(InitialField::Constant(*c)),
        Some(toml::Value::Integer(c)) => Ok(InitialField::Constant(*c as f64)),
        Some(other) => Err(AppError::Config(format!(
            "initial_field must be \"zero\", \"parabola\" or a number, got {other}"
        ))),
    }
}

impl RawConfig {
    pub fn into_run_config(self) -> Result<RunConfig, AppError> {
        let cfg = |e: curveflow_core::Error| AppError::Config(e.to_string());
        if self.elements < 2 {
            return Err(AppError::Config("J must be ≥ 2".into()));
        }
        let domain: Domain = self.geometry.parse().map_err(cfg)?;
        let scheme: CurveScheme = self.scheme.parse().map_err(cfg)?;
        let forcing: CurveForcing = self.f.parse().map_err(cfg)?;
        let source: FieldSource = self.g.parse().map_err(cfg)?;
        let initial_curve = match self.initial.as_str() {
            "semicircle" => InitialCurve::Semicircle,
            "diameter" => InitialCurve::Diameter,
            "custom" => {
                let nodes = self.initial_nodes.as_ref().ok_or_else(|| {
                    AppError::Config("initial = \"custom\" needs initial_nodes".into())
                })?;
                InitialCurve::Nodes(nodes.iter().map(|p| Vec2::new(p[0], p[1])).collect())
            }
            other => {
                return Err(AppError::Config(format!(
                    "initial must be semicircle, diameter or custom, got '{other}'"
                )))
            }
        };
        let exact = self
            .exact
            .as_deref()
            .map(str::parse::<Example>)
            .transpose()
            .map_err(cfg)?;
        let sim = SimConfig {
            domain,
            alpha: self.alpha,
            elements: self.elements as usize,
            final_time: self.final_time,
            time_rule: parse_time_rule(&self.dt_rule)?,
            scheme,
            forcing,
            forcing_time: parse_forcing_time("f_time", &self.f_time)?,
            source,
            source_time: parse_forcing_time("g_time", &self.g_time)?,
            boundary_value: self.w_b,
            initial_curve,
            initial_field: parse_initial_field(self.initial_field.as_ref())?,
            newton_tol: self.newton_tol,
            increment_tol: 1e-12,
            newton_max_iter: 25,
            snapshot_stride: self.snapshot_stride,
        };
        sim.validate().map_err(cfg)?;
        if let Some(ex) = exact {
            if ex.domain() != sim.domain {
                return Err(AppError::Config(format!(
                    "exact solution '{}' lives in the {} domain",
                    ex.name(),
                    ex.domain().name()
                )));
            }
        }
        Ok(RunConfig {
            raw: self,
            sim,
            exact,
        })
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, AppError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| AppError::Config(e.to_string()))?;
    raw.into_run_config()
}

pub fn load_config(path: &Path) -> Result<RunConfig, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_config(&text)
}
