//! Certification harness: evaluates the inequalities and identities of the
//! model on a grid of small regions and parameters and reports margins.

mod checks;
mod grid;
mod montecarlo;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use checks::{
    check_crossing_complementarity, check_duality, check_es_identity, check_fkg, check_hamming_inequality, check_orderings, check_self_dual_points,
    check_sharp_threshold, Couplings,
};
pub use grid::{builtin_grid, default_events, BcKind, Grid, NamedRegion, P_GRID, Q_GRID};
pub use montecarlo::{check_gg_corollary, GgOptions};

/// Tolerance for identities and inequalities evaluated by one enumeration.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance when two independent enumerations are compared.
pub const CROSS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportedOnly,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportedOnly => "reported-only",
        })
    }
}

/// One evaluated check at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub region: String,
    /// Edge-weight point; `a->b` for checks comparing two values.
    pub p: String,
    pub q: f64,
    pub bc: String,
    pub event: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub status: Status,
    pub note: String,
}

impl CheckReport {
    /// An inequality `lhs <= rhs` asserted up to `tolerance`.
    pub(crate) fn at_most(point: Point<'_>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        let status = if margin >= -tolerance { Status::Pass } else { Status::Fail };
        point.report(lhs, rhs, margin, tolerance, status)
    }

    /// An identity `lhs == rhs` asserted up to `tolerance`; the margin is
    /// minus the absolute deviation.
    pub(crate) fn equal(point: Point<'_>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = -(lhs - rhs).abs();
        let status = if margin >= -tolerance { Status::Pass } else { Status::Fail };
        point.report(lhs, rhs, margin, tolerance, status)
    }

    pub(crate) fn reported(point: Point<'_>, lhs: f64, rhs: f64, margin: f64) -> Self {
        point.report(lhs, rhs, margin, f64::NAN, Status::ReportedOnly)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Parameter point of a report under construction.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Point<'a> {
    pub check: &'a str,
    pub region: &'a str,
    pub p: &'a str,
    pub q: f64,
    pub bc: &'a str,
    pub event: &'a str,
}

impl Point<'_> {
    fn report(self, lhs: f64, rhs: f64, margin: f64, tolerance: f64, status: Status) -> CheckReport {
        CheckReport {
            check: self.check.into(),
            region: self.region.into(),
            p: self.p.into(),
            q: self.q,
            bc: self.bc.into(),
            event: self.event.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            status,
            note: String::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fkg,
    Orderings,
    Duality,
    Hamming,
    SharpThreshold,
    GgCorollary,
    Es,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = ["fkg", "orderings", "duality", "hamming", "sharp-threshold", "gg-corollary", "es", "all"];

    fn parts(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Fkg, Orderings, Duality, Hamming, SharpThreshold, GgCorollary, Es],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fkg" => Suite::Fkg,
            "orderings" => Suite::Orderings,
            "duality" => Suite::Duality,
            "hamming" => Suite::Hamming,
            "sharp-threshold" => Suite::SharpThreshold,
            "gg-corollary" => Suite::GgCorollary,
            "es" => Suite::Es,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidParameter(format!("unknown suite '{other}' (one of {})", Suite::NAMES.join(", "))))
            }
        })
    }
}

/// Runs a suite on `grid`; reports come back in deterministic grid order.
pub fn run_suite(suite: Suite, grid: &Grid, gg: &[GgOptions]) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for part in suite.parts() {
        match part {
            Suite::Fkg => {
                for region in &grid.regions {
                    out.extend(check_fkg(&default_events(region), region, &grid.p_grid, &grid.q_grid, &grid.bcs)?);
                }
            }
            Suite::Orderings => {
                for region in &grid.regions {
                    for (name, event) in default_events(region) {
                        for &q in &grid.q_grid {
                            out.extend(check_orderings(&name, &event, region, &grid.p_grid, q)?);
                        }
                    }
                }
            }
            Suite::Duality => {
                out.extend(check_self_dual_points(&[1.0, 2.0, 3.0, 4.0]));
                for region in grid.regions.iter().filter(|r| r.has_dual()) {
                    for &q in &grid.q_grid {
                        out.extend(check_duality(region, &grid.p_grid, q)?);
                    }
                }
            }
            Suite::Hamming => {
                for region in &grid.regions {
                    for (name, event) in default_events(region) {
                        for &q in &grid.q_grid {
                            for &bc in &grid.bcs {
                                out.extend(check_hamming_inequality(&name, &event, region, &grid.p_grid, q, bc)?);
                            }
                        }
                    }
                }
            }
            Suite::SharpThreshold => {
                for region in grid.sharp_threshold_regions() {
                    for (name, event) in grid::threshold_events(&region) {
                        for &q in &grid.q_grid {
                            for &bc in &grid.bcs {
                                out.extend(check_sharp_threshold(&name, &event, &region, &grid.fine_p_grid, q, bc)?);
                            }
                        }
                    }
                }
            }
            Suite::GgCorollary => {
                for options in gg {
                    out.push(check_gg_corollary(options)?);
                }
            }
            Suite::Es => {
                for region in &grid.regions {
                    for q in [2, 3] {
                        for &beta in &grid.beta_grid {
                            for couplings in [Couplings::Uniform, Couplings::Varying] {
                                out.push(check_es_identity(region, q, beta, couplings)?);
                            }
                        }
                    }
                }
            }
            Suite::All => unreachable!("expanded by parts()"),
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "check,region,p,q,bc,event,lhs,rhs,margin,tolerance,status,note";

/// Writes reports as CSV preceded by `#` metadata lines.
pub fn write_csv<W: Write>(reports: &[CheckReport], metadata: &[(String, String)], mut out: W) -> Result<()> {
    for (key, value) in metadata {
        writeln!(out, "# {key}: {value}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{:e},{:e},{:e},{:e},{},{}",
            r.check,
            r.region,
            r.p,
            r.q,
            r.bc,
            csv_field(&r.event),
            r.lhs,
            r.rhs,
            r.margin,
            r.tolerance,
            r.status,
            csv_field(&r.note)
        )?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
