//! Command line for building and verifying minimal additive complements.

use addcomp_core::constructions::{
    catalog, catalog_ids, coset_lift, graph_min_complement, masked_max_set, MinCompRecipe,
    SubgroupHandle,
};
use addcomp_core::engine::{
    is_complement_on_window, minimality_witnesses, CoverStatus, MinimalityOptions, RadiusPolicy,
    WitnessOutcome,
};
use addcomp_core::error::Error as CoreError;
use addcomp_core::func::{IntFunction, VectorFunction};
use addcomp_core::group::{GroupElement, SublatticeSpec, Window};
use addcomp_core::moderation::{ball_moderation, poly_moderation, subgroup_valued_moderation};
use addcomp_core::oracle::FiniteGroupTable;
use addcomp_core::render::{render_ascii, render_svg, SliceSpec};
use addcomp_core::scenario::{exit, Scenario};
use addcomp_core::sets::{FiberSplit, SymbolicSet};
use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "addcomp",
    version,
    about = "Minimal additive complements in finitely generated abelian groups: \
             set builders, windowed verification, moderation functions, and a \
             finite-group oracle"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModMethod {
    Ball,
    Poly,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecipeName {
    Graph,
    CosetLift,
    Masked,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify W + C covers a window; exit 0 covered, 2 not covered, 3 unverified.
    CheckComplement {
        /// Set description file (JSON), or catalog:<id>.
        #[arg(long)]
        w: String,
        #[arg(long)]
        c: String,
        /// Window like "-10..10,-10..10".
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// "certified" or an integer search half-width.
        #[arg(long, default_value = "certified")]
        radius: String,
        /// Emit the full certificate as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Search a removal witness for every complement element in a window.
    CheckMinimal {
        #[arg(long)]
        w: String,
        #[arg(long)]
        c: String,
        /// Window over the complement's base coordinates.
        #[arg(long, allow_hyphen_values = true)]
        base_window: String,
        #[arg(long)]
        search_bound: Option<u64>,
        #[arg(long, default_value = "certified")]
        radius: String,
        #[arg(long)]
        json: bool,
    },
    /// Construct a moderation of u and print it with its bound.
    Moderation {
        /// Integer function file (JSON).
        #[arg(long)]
        u: String,
        #[arg(long, value_enum)]
        method: ModMethod,
        /// Reduce values into k·Z^dim afterwards.
        #[arg(long)]
        subgroup_index: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Run a named construction from a JSON parameter file.
    Build {
        #[arg(long, value_enum)]
        recipe: RecipeName,
        #[arg(long)]
        params: PathBuf,
        /// Write the produced complement set here (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a catalog set (or list all ids).
    Catalog {
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        list: bool,
        /// Also print the paired complement when the catalog has one.
        #[arg(long)]
        with_complement: bool,
    },
    /// Exhaustive checks in a small finite abelian group.
    Oracle {
        /// Group like "Z4xZ2".
        #[arg(long)]
        group: String,
        /// Elements like "0,0;1,0".
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// List all minimal complements.
        #[arg(long)]
        list_minimal: bool,
    },
    /// Draw sets on a window as ASCII or SVG.
    Render {
        /// Comma-separated set files or catalog:<id> references.
        #[arg(long)]
        sets: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: CliFormat,
        #[arg(long)]
        out: PathBuf,
        /// Axes for rank > 2, like "0,2".
        #[arg(long)]
        axes: Option<String>,
        /// Fixed values for the remaining coordinates, like "0" or "0,1".
        #[arg(long, allow_hyphen_values = true)]
        fixed: Option<String>,
    },
    /// Execute a scenario file and print its JSON report.
    Run {
        scenario: PathBuf,
        /// Directory for render outputs (default: alongside the scenario).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Ascii,
    Svg,
}

fn parse_radius(text: &str) -> anyhow::Result<RadiusPolicy> {
    if text == "certified" {
        Ok(RadiusPolicy::Certified)
    } else {
        let n: u64 = text
            .parse()
            .map_err(|_| anyhow!("radius must be `certified` or an integer, got `{text}`"))?;
        Ok(RadiusPolicy::Heuristic(n))
    }
}

fn load_set(arg: &str) -> anyhow::Result<SymbolicSet> {
    if let Some(id) = arg.strip_prefix("catalog-complement:") {
        return catalog(id)?
            .complement
            .ok_or_else(|| anyhow!("catalog entry `{id}` has no paired complement"));
    }
    if let Some(id) = arg.strip_prefix("catalog:") {
        return Ok(catalog(id)?.set);
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    let set: SymbolicSet =
        serde_json::from_str(&text).with_context(|| format!("parsing set file {arg}"))?;
    set.validate()?;
    Ok(set)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_elements(text: &str) -> anyhow::Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(|p| {
            p.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| anyhow!("bad coordinate `{x}`"))
                })
                .collect()
        })
        .collect()
}

#[derive(serde::Deserialize)]
struct GraphParams {
    base: SymbolicSet,
    m: SymbolicSet,
    v: VectorFunction,
}

#[derive(serde::Deserialize)]
struct CosetLiftParams {
    m: SymbolicSet,
    h: SubgroupHandle,
    reps: Vec<GroupElement>,
}

#[derive(serde::Deserialize)]
struct MaskedParams {
    split: FiberSplit,
    base: SymbolicSet,
    u: VectorFunction,
    sub: SublatticeSpec,
    #[serde(with = "addcomp_core::jsonutil::bigint_vec")]
    offset: Vec<BigInt>,
    m: SymbolicSet,
}

fn real_main() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::CheckComplement { w, c, window, radius, json } => {
            let ws = load_set(&w)?;
            let cs = load_set(&c)?;
            let win = Window::parse(&window)?;
            let policy = parse_radius(&radius)?;
            let cert = is_complement_on_window(&ws, &cs, &win, &policy)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&cert)?);
            } else {
                match &cert.status {
                    CoverStatus::Covered => {
                        println!("covered: {} points witnessed", cert.witnesses.len())
                    }
                    CoverStatus::NotCoveredAt { point } => println!("not covered at {point}"),
                    CoverStatus::Unverified { reason } => println!("unverified: {reason}"),
                }
            }
            Ok(match cert.status {
                CoverStatus::Covered => exit::OK,
                CoverStatus::NotCoveredAt { .. } => exit::CHECK_FAILED,
                CoverStatus::Unverified { .. } => exit::UNVERIFIED,
            })
        }
        Cmd::CheckMinimal { w, c, base_window, search_bound, radius, json } => {
            let ws = load_set(&w)?;
            let cs = load_set(&c)?;
            let win = Window::parse(&base_window)?;
            let policy = parse_radius(&radius)?;
            let cert =
                minimality_witnesses(&ws, &cs, &win, &policy, &MinimalityOptions { search_bound })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&cert)?);
            } else {
                for e in &cert.entries {
                    match &e.outcome {
                        WitnessOutcome::Witness { point, .. } => {
                            println!("{}: witness {point}", e.removed)
                        }
                        WitnessOutcome::Removable => println!("{}: removable", e.removed),
                        WitnessOutcome::Unverified { reason } => {
                            println!("{}: unverified ({reason})", e.removed)
                        }
                    }
                }
            }
            let removable = cert
                .entries
                .iter()
                .any(|e| matches!(e.outcome, WitnessOutcome::Removable));
            Ok(if removable {
                exit::CHECK_FAILED
            } else if cert.all_witnessed() {
                exit::OK
            } else {
                exit::UNVERIFIED
            })
        }
        Cmd::Moderation { u, method, subgroup_index, json } => {
            let uf: IntFunction = load_json(Path::new(&u))?;
            let (v, bound) = match method {
                ModMethod::Ball => ball_moderation(&uf),
                ModMethod::Poly => {
                    let p = uf
                        .as_poly()
                        .ok_or_else(|| anyhow!("the polynomial recipe needs a polynomial u"))?;
                    let (v, b) = poly_moderation(p);
                    (IntFunction::Poly(v), b)
                }
            };
            let v = match subgroup_index {
                None => VectorFunction::scalar(v),
                Some(k) => {
                    let sub = SublatticeSpec::scaled(1, k)?;
                    subgroup_valued_moderation(&VectorFunction::scalar(v), &sub)?
                }
            };
            let samples: Vec<serde_json::Value> = (-5i64..=5)
                .map(|x0| {
                    let m0 = bound.bound_at(&[BigInt::from(x0)]).ok();
                    json!({"x0": x0, "m0": m0.map(|b| b.to_string())})
                })
                .collect();
            let out = json!({"v": v, "bound": bound, "bound-samples": samples});
            if json {
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("{}", serde_json::to_string(&out)?);
            }
            Ok(exit::OK)
        }
        Cmd::Build { recipe, params, out } => {
            let recipe: MinCompRecipe = match recipe {
                RecipeName::Graph => {
                    let p: GraphParams = load_json(&params)?;
                    p.base.validate()?;
                    p.m.validate()?;
                    graph_min_complement(&p.base, &p.m, &p.v)?
                }
                RecipeName::CosetLift => {
                    let p: CosetLiftParams = load_json(&params)?;
                    p.m.validate()?;
                    coset_lift(&p.m, &p.h, &p.reps)?
                }
                RecipeName::Masked => {
                    let p: MaskedParams = load_json(&params)?;
                    p.base.validate()?;
                    p.m.validate()?;
                    masked_max_set(p.split, &p.base, &p.u, &p.sub, &p.offset, &p.m)?.1
                }
            };
            let text = serde_json::to_string_pretty(&recipe)?;
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{text}"),
            }
            Ok(exit::OK)
        }
        Cmd::Catalog { id, list, with_complement } => {
            if list || id.is_none() {
                for id in catalog_ids() {
                    let e = catalog(id)?;
                    println!("{:32} {}", e.id, e.describe);
                }
                return Ok(exit::OK);
            }
            let e = catalog(&id.unwrap())?;
            if with_complement {
                let out = json!({"set": e.set, "complement": e.complement});
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("{}", serde_json::to_string_pretty(&e.set)?);
            }
            Ok(exit::OK)
        }
        Cmd::Oracle { group, w, list_minimal } => {
            let table = FiniteGroupTable::parse(&group)?;
            let elems = parse_elements(&w)?;
            let spec = table.spec();
            let mut mask = 0u32;
            for coords in elems {
                let e = spec.element(vec![], coords)?;
                mask |= 1 << table.index_of(&e)?;
            }
            if mask == 0 {
                return Err(anyhow!("W must be nonempty"));
            }
            let mut out = json!({
                "group": group,
                "w": table.elements_of(mask),
            });
            if list_minimal {
                let mins: Vec<Vec<GroupElement>> = table
                    .minimal_complements(mask)
                    .into_iter()
                    .map(|m| table.elements_of(m))
                    .collect();
                out["minimal_complements"] = serde_json::to_value(&mins)?;
                out["count"] = json!(mins.len());
            } else {
                let m = table.some_minimal_complement(mask);
                out["some_minimal_complement"] = serde_json::to_value(table.elements_of(m))?;
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(exit::OK)
        }
        Cmd::Render { sets, window, format, out, axes, fixed } => {
            let refs: Vec<&str> = sets.split(',').collect();
            let loaded: Vec<SymbolicSet> = refs
                .iter()
                .map(|r| load_set(r))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let names: Vec<String> = refs
                .iter()
                .map(|r| {
                    r.strip_prefix("catalog-complement:")
                        .map(|id| format!("{id} complement"))
                        .or_else(|| r.strip_prefix("catalog:").map(str::to_string))
                        .unwrap_or_else(|| {
                            Path::new(r)
                                .file_stem()
                                .map(|s| s.to_string_lossy().into_owned())
                                .unwrap_or_else(|| r.to_string())
                        })
                })
                .collect();
            let layers: Vec<(&str, &SymbolicSet)> = names
                .iter()
                .map(|n| n.as_str())
                .zip(loaded.iter())
                .collect();
            let slice = match axes {
                None => None,
                Some(ax) => {
                    let parts: Vec<usize> = ax
                        .split(',')
                        .map(|p| p.trim().parse())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| anyhow!("bad axes `{ax}`"))?;
                    if parts.len() != 2 {
                        return Err(anyhow!("axes must name two coordinates"));
                    }
                    let fixed = match fixed {
                        None => vec![],
                        Some(f) => f
                            .split(',')
                            .map(|p| {
                                p.trim()
                                    .parse::<i64>()
                                    .map(BigInt::from)
                                    .map_err(|_| anyhow!("bad fixed value `{p}`"))
                            })
                            .collect::<anyhow::Result<Vec<_>>>()?,
                    };
                    Some(SliceSpec { axes: (parts[0], parts[1]), fixed })
                }
            };
            let win = Window::parse(&window)?;
            let content = match format {
                CliFormat::Ascii => render_ascii(&layers, &win, slice.as_ref())?,
                CliFormat::Svg => render_svg(&layers, &win, slice.as_ref())?,
            };
            std::fs::write(&out, content)
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(exit::OK)
        }
        Cmd::Run { scenario, out_dir } => {
            let text = std::fs::read_to_string(&scenario)
                .with_context(|| format!("reading {}", scenario.display()))?;
            let sc = Scenario::from_json(&text)?;
            let (report, files) = sc.run()?;
            let dir = out_dir.unwrap_or_else(|| {
                scenario
                    .parent()
                    .map(Path::to_path_buf)
                    .unwrap_or_else(|| PathBuf::from("."))
            });
            for (name, content) in files {
                let path = dir.join(name);
                if let Some(parent) = path.parent() {
                    std::fs::create_dir_all(parent)?;
                }
                std::fs::write(&path, content)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.exit)
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe instead of panicking mid-print.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match real_main() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<CoreError>() {
                Some(CoreError::Schema(_))
                | Some(CoreError::InvalidWindow(_))
                | Some(CoreError::UnknownCatalogId(_))
                | Some(CoreError::InvalidArgument(_)) => exit::SCHEMA_VIOLATION,
                _ => 1,
            };
            ExitCode::from(code as u8)
        }
    }
}
