//! Plain-text report emission: aligned tables for people, `key=value` lines
//! for machines. Numbers in machine output carry 12 significant digits and
//! never depend on locale.

use std::fmt::Write as _;

use crate::discord::DiscordReport;
use crate::rsp::{RspReport, SingletRspOutcome};
use crate::verify::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            other => Err(crate::error::Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
    Vec3([f64; 3]),
}

/// 12 significant digits in scientific notation; `-0` prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == 0.0 {
        "0.00000000000e0".into()
    } else {
        format!("{x:.11e}")
    }
}

fn human_num(x: f64) -> String {
    if x.is_nan() {
        "n/a".into()
    } else if x == 0.0 {
        "0".into()
    } else if x.abs() >= 1e-4 && x.abs() < 1e6 {
        format!("{x:.9}")
    } else {
        format!("{x:.6e}")
    }
}

impl Value {
    fn machine(&self) -> String {
        match self {
            Value::Num(x) => fmt_num(*x),
            Value::Int(n) => n.to_string(),
            Value::Text(s) => s.clone(),
            Value::Flag(b) => b.to_string(),
            Value::Vec3(v) => v.map(fmt_num).join(","),
        }
    }

    fn human(&self) -> String {
        match self {
            Value::Num(x) => human_num(*x),
            Value::Vec3(v) => format!("({})", v.map(human_num).join(", ")),
            other => other.machine(),
        }
    }
}

/// A titled list of fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub title: String,
    pub fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            fields: Vec::new(),
        }
    }

    pub fn push(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.push(key, Value::Num(x))
    }

    pub fn int(&mut self, key: &str, n: u64) -> &mut Self {
        self.push(key, Value::Int(n))
    }

    pub fn text(&mut self, key: &str, s: impl Into<String>) -> &mut Self {
        self.push(key, Value::Text(s.into()))
    }

    pub fn emit(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "{k}={}", v.machine());
                }
            }
            Format::Human => {
                let _ = writeln!(out, "{}", self.title);
                let width = self.fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "  {k:<width$}  {}", v.human());
                }
            }
        }
        out
    }
}

fn vec3(v: &nalgebra::Vector3<f64>) -> Value {
    Value::Vec3([v[0], v[1], v[2]])
}

pub fn discord_report(r: &DiscordReport) -> Report {
    let mut rep = Report::new("discord");
    rep.num("mutual_info", r.mutual_info)
        .num("J_BA", r.j_ba)
        .num("J_AB", r.j_ab)
        .num("D_BA", r.d_ba)
        .num("D_AB", r.d_ab)
        .push("u_star_A", vec3(r.u_star_a.vector()))
        .push("u_star_B", vec3(r.u_star_b.vector()))
        .num("geo_discord", r.geo_discord)
        .num("fidelity", r.fidelity)
        .int("optimizer_evals", r.optimizer_evals as u64)
        .push("converged", Value::Flag(r.converged));
    rep
}

pub fn rsp_report(r: &RspReport) -> Report {
    let mut rep = Report::new("remote state preparation");
    rep.text("angles", r.angles_used.to_string());
    if let Some(id) = &r.row_id {
        rep.text("row", id.clone());
    }
    rep.num("pre_geo_discord", r.pre_geo_discord)
        .num("post_geo_discord", r.post_geo_discord)
        .num("fidelity", r.fidelity)
        .num("success_threshold", r.success_threshold)
        .push("success", Value::Flag(r.succeeded()));
    rep
}

pub fn singlet_report(theta: f64, seed: u64, r: &SingletRspOutcome) -> Report {
    let mut rep = Report::new("singlet remote state preparation");
    rep.num("theta", theta)
        .int("seed", seed)
        .int("shots", r.shots)
        .int("bit0", r.bit0)
        .int("bit1", r.shots - r.bit0)
        .num("mean_fidelity", r.mean_fidelity)
        .num("min_fidelity", r.min_fidelity)
        .num("max_state_error", r.max_state_error);
    rep
}

/// Runtime is only shown in human output so machine output stays byte-stable.
pub fn verification_report(r: &VerificationReport, format: Format) -> Report {
    let mut rep = Report::new(format!("verification {}", r.check));
    rep.text("check", r.check.to_string())
        .int("total", r.total as u64)
        .int("passed", r.passed as u64)
        .int("failed", r.failed as u64)
        .int("indeterminate", r.indeterminate as u64)
        .int("excluded", r.excluded as u64)
        .num("min_observed_discord", r.min_observed_discord);
    for w in &r.failure_witnesses {
        rep.text(
            &format!("witness_{:05}", w.index),
            format!("{:?} value={} {}", w.verdict, fmt_num(w.value), w.reason),
        );
    }
    if format == Format::Human {
        rep.text("runtime", format!("{:.3} s", r.runtime.as_secs_f64()));
    }
    rep
}
