//! Scenario files: named sets, a window, a radius policy, a list of checks,
//! and optional render targets, executed deterministically with a JSON
//! report. Schema `addcomp/1`.

use crate::constructions::catalog;
use crate::engine::{
    is_complement_on_window, minimality_witnesses, shrink_complement_demo, CoverStatus,
    CoverageCertificate, MinimalityCertificate, MinimalityOptions, RadiusPolicy, ShrinkReport,
    WitnessOutcome,
};
use crate::error::{Error, Result};
use crate::func::IntFunction;
use crate::group::{GroupElement, GroupSpec, Window};
use crate::moderation::{check_moderation, ModerationReport};
use crate::render::{render_ascii, render_svg, RenderFormat, SliceSpec};
use crate::sets::SymbolicSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA: &str = "addcomp/1";

/// Exit codes shared by the scenario runner and the command line.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 2;
    pub const UNVERIFIED: i32 = 3;
    pub const SCHEMA_VIOLATION: i32 = 64;
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetRef {
    Catalog {
        catalog: String,
        /// Take the catalog entry's paired complement instead of the set.
        #[serde(default)]
        complement: bool,
    },
    Inline(Box<SymbolicSet>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiusRef {
    Named(String),
    Width(u64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Check {
    Complement {
        w: String,
        c: String,
        #[serde(default)]
        window: Option<String>,
    },
    Minimality {
        w: String,
        c: String,
        base_window: String,
        #[serde(default)]
        search_bound: Option<u64>,
    },
    Moderation {
        u: IntFunction,
        v: IntFunction,
        x0_window: String,
        probe_window: String,
        /// When false, the check passes exactly when growth is detected.
        #[serde(default = "default_true")]
        expect_bounded: bool,
    },
    Shrink {
        w: String,
        c: String,
        rounds: usize,
        #[serde(default)]
        removals: Option<Vec<GroupElement>>,
    },
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RenderTarget {
    pub sets: Vec<String>,
    pub format: RenderFormat,
    pub out: String,
    #[serde(default)]
    pub slice: Option<SliceSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub schema: String,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    pub sets: BTreeMap<String, SetRef>,
    #[serde(default)]
    pub window: Option<String>,
    #[serde(default)]
    pub radius: Option<RadiusRef>,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub render: Vec<RenderTarget>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum CheckResult {
    Complement {
        w: String,
        c: String,
        passed: bool,
        certificate: CoverageCertificate,
    },
    Minimality {
        w: String,
        c: String,
        passed: bool,
        removable: usize,
        unverified: usize,
        certificate: MinimalityCertificate,
    },
    Moderation {
        passed: bool,
        report: ModerationReport,
    },
    Shrink {
        w: String,
        c: String,
        passed: bool,
        report: ShrinkReport,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema: String,
    #[serde(default)]
    pub name: Option<String>,
    pub results: Vec<CheckResult>,
    pub renders: Vec<String>,
    pub exit: i32,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let sc: Scenario =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if sc.schema != SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {SCHEMA}, got {}",
                sc.schema
            )));
        }
        Ok(sc)
    }

    fn resolve(&self, name: &str) -> Result<SymbolicSet> {
        let r = self
            .sets
            .get(name)
            .ok_or_else(|| Error::Schema(format!("unknown set reference `{name}`")))?;
        let set = match r {
            SetRef::Catalog { catalog: id, complement } => {
                let entry = catalog(id)?;
                if *complement {
                    entry.complement.ok_or_else(|| {
                        Error::Schema(format!("catalog entry `{id}` has no paired complement"))
                    })?
                } else {
                    entry.set
                }
            }
            SetRef::Inline(s) => {
                s.validate()?;
                (**s).clone()
            }
        };
        if let Some(g) = &self.group {
            if &set.ambient != g {
                return Err(Error::Schema(format!(
                    "set `{name}` lives in {} but the scenario declares {g}",
                    set.ambient
                )));
            }
        }
        Ok(set)
    }

    fn radius_policy(&self) -> Result<RadiusPolicy> {
        match &self.radius {
            None => Ok(RadiusPolicy::Certified),
            Some(RadiusRef::Width(n)) => Ok(RadiusPolicy::Heuristic(*n)),
            Some(RadiusRef::Named(s)) if s == "certified" => Ok(RadiusPolicy::Certified),
            Some(RadiusRef::Named(s)) => {
                Err(Error::Schema(format!("unknown radius policy `{s}`")))
            }
        }
    }

    fn window_of(&self, local: Option<&String>) -> Result<Window> {
        let text = local
            .or(self.window.as_ref())
            .ok_or_else(|| Error::Schema("no window given".into()))?;
        Window::parse(text)
    }

    /// Execute all checks and renders. Render output is returned as
    /// (path, content) pairs; the caller writes files.
    pub fn run(&self) -> Result<(ScenarioReport, Vec<(String, String)>)> {
        let policy = self.radius_policy()?;
        let mut results = Vec::new();
        let mut exit = exit::OK;
        let worst = |code: i32, exit: &mut i32| {
            if code > *exit {
                *exit = code;
            }
        };
        for check in &self.checks {
            match check {
                Check::Complement { w, c, window } => {
                    let ws = self.resolve(w)?;
                    let cs = self.resolve(c)?;
                    let win = self.window_of(window.as_ref())?;
                    let cert = is_complement_on_window(&ws, &cs, &win, &policy)?;
                    let passed = cert.is_covered();
                    match cert.status {
                        CoverStatus::Covered => {}
                        CoverStatus::NotCoveredAt { .. } => worst(exit::CHECK_FAILED, &mut exit),
                        CoverStatus::Unverified { .. } => worst(exit::UNVERIFIED, &mut exit),
                    }
                    results.push(CheckResult::Complement {
                        w: w.clone(),
                        c: c.clone(),
                        passed,
                        certificate: cert,
                    });
                }
                Check::Minimality { w, c, base_window, search_bound } => {
                    let ws = self.resolve(w)?;
                    let cs = self.resolve(c)?;
                    let win = Window::parse(base_window)?;
                    let cert = minimality_witnesses(
                        &ws,
                        &cs,
                        &win,
                        &policy,
                        &MinimalityOptions { search_bound: *search_bound },
                    )?;
                    let removable = cert
                        .entries
                        .iter()
                        .filter(|e| matches!(e.outcome, WitnessOutcome::Removable))
                        .count();
                    let unverified = cert
                        .entries
                        .iter()
                        .filter(|e| matches!(e.outcome, WitnessOutcome::Unverified { .. }))
                        .count();
                    let passed = cert.all_witnessed();
                    if removable > 0 {
                        worst(exit::CHECK_FAILED, &mut exit);
                    } else if unverified > 0 {
                        worst(exit::UNVERIFIED, &mut exit);
                    }
                    results.push(CheckResult::Minimality {
                        w: w.clone(),
                        c: c.clone(),
                        passed,
                        removable,
                        unverified,
                        certificate: cert,
                    });
                }
                Check::Moderation { u, v, x0_window, probe_window, expect_bounded } => {
                    let report = check_moderation(
                        u,
                        v,
                        &Window::parse(x0_window)?,
                        &Window::parse(probe_window)?,
                        None,
                    )?;
                    let passed = if *expect_bounded {
                        !report.growth_suspected && report.violations == 0
                    } else {
                        report.growth_suspected
                    };
                    if !passed {
                        worst(exit::CHECK_FAILED, &mut exit);
                    }
                    results.push(CheckResult::Moderation { passed, report });
                }
                Check::Shrink { w, c, rounds, removals } => {
                    let ws = self.resolve(w)?;
                    let cs = self.resolve(c)?;
                    let win = self.window_of(None)?;
                    let report = shrink_complement_demo(
                        &ws,
                        &cs,
                        &win,
                        *rounds,
                        removals.clone(),
                        &policy,
                    )?;
                    let passed = report.coverage_persisted;
                    if !passed {
                        worst(exit::CHECK_FAILED, &mut exit);
                    }
                    results.push(CheckResult::Shrink {
                        w: w.clone(),
                        c: c.clone(),
                        passed,
                        report,
                    });
                }
            }
        }
        let mut renders = Vec::new();
        let mut files = Vec::new();
        for target in &self.render {
            let sets: Vec<SymbolicSet> = target
                .sets
                .iter()
                .map(|n| self.resolve(n))
                .collect::<Result<Vec<_>>>()?;
            let layers: Vec<(&str, &SymbolicSet)> = target
                .sets
                .iter()
                .map(|n| n.as_str())
                .zip(sets.iter())
                .collect();
            let win = self.window_of(None)?;
            let content = match target.format {
                RenderFormat::Ascii => render_ascii(&layers, &win, target.slice.as_ref())?,
                RenderFormat::Svg => render_svg(&layers, &win, target.slice.as_ref())?,
            };
            renders.push(target.out.clone());
            files.push((target.out.clone(), content));
        }
        let report = ScenarioReport {
            schema: SCHEMA.to_string(),
            name: self.name.clone(),
            results,
            renders,
            exit,
        };
        Ok((report, files))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_runs() {
        let text = r#"{
            "schema": "addcomp/1",
            "name": "spiked parabola pair",
            "sets": {
                "w": {"catalog": "spiked-parabola"},
                "m": {"catalog": "spiked-parabola"}
            },
            "window": "-4..4,-4..4",
            "radius": "certified",
            "checks": [{"type": "complement", "w": "w", "c": "m"}]
        }"#;
        // W is its own complement here (it contains the full axis).
        let sc = Scenario::from_json(text).unwrap();
        let (report, files) = sc.run().unwrap();
        assert!(files.is_empty());
        assert_eq!(report.results.len(), 1);
    }

    #[test]
    fn schema_mismatch_rejected() {
        let text = r#"{"schema": "addcomp/2", "sets": {}, "checks": []}"#;
        assert!(matches!(Scenario::from_json(text), Err(Error::Schema(_))));
    }

    #[test]
    fn catalog_reference_and_render() {
        let text = r#"{
            "schema": "addcomp/1",
            "sets": {"w": {"catalog": "ray-complement"}},
            "window": "-3..3,-3..3",
            "checks": [],
            "render": [{"sets": ["w"], "format": "ascii", "out": "ray.txt"}]
        }"#;
        let sc = Scenario::from_json(text).unwrap();
        let (report, files) = sc.run().unwrap();
        assert_eq!(report.exit, exit::OK);
        assert_eq!(files.len(), 1);
        assert!(files[0].1.contains('#'));
    }

    #[test]
    fn unknown_set_reference_is_schema_error() {
        let text = r#"{
            "schema": "addcomp/1",
            "sets": {},
            "checks": [{"type": "complement", "w": "a", "c": "b", "window": "-1..1,-1..1"}]
        }"#;
        let sc = Scenario::from_json(text).unwrap();
        assert!(matches!(sc.run(), Err(Error::Schema(_))));
    }
}
