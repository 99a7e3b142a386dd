//! Command-line pipelines and the plain-text report formats.
//!
//! Reports are flat key-value files (`key<TAB>value`, decimal strings, `inf`
//! for infinity) plus tab-separated tables for level sets and sweeps, so
//! diffs stay reviewable. Space files are single JSON documents with either
//! `points` + `norm` or a row-major `distance_matrix`, plus `weights`;
//! every number is a decimal (or `p/q`) string parsed to an exact rational.

use crate::constants::{constants_report, ConstantsReport, K2Mode, Window};
use crate::covering::{
    full_family_outcome, full_select, make_lacunary, select_with_threshold, sparse_select,
    verify_covering_bounds, BallFamily, RadiiSet, SelectionOutcome, TheoremKind, Verdict,
};
use crate::maximal::{
    empirical_weak_norm, maximal_function, sparse_bound_exact, theoretical_bounds,
    weak_type_profile, BoundValue, Probe, SampleFunction,
};
use crate::rational::{format_q, parse_q, q, Q};
use crate::space::{build_space, Norm, Space, SpaceSpec};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "covering-lab",
    about = "Covering diagnostics for finite metric measure spaces",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Builtin spec (three-point-delta, grid:d=1,hw=2[,w0=1/4],
    /// lshape:pitch=1/12, ngon:n=12) or a space file path.
    #[arg(long)]
    pub space: String,
    /// sparse | bounded | combined
    #[arg(long)]
    pub mode: String,
    /// Reduction parameter in (0, 1].
    #[arg(long)]
    pub t: String,
    /// Lacunarity (sparse) or radius ratio (bounded).
    #[arg(long = "T")]
    pub big_t: Option<String>,
    /// Base radius for bounded mode.
    #[arg(long)]
    pub base: Option<String>,
    /// Comma-separated center:radius list; centers are coordinate labels
    /// (underscore-separated for several dimensions) or #index.
    #[arg(long, allow_hyphen_values = true)]
    pub balls: String,
    /// Acceptance threshold (diagnostic; bounds are proved at 1).
    #[arg(long)]
    pub threshold: Option<String>,
    /// Verify the covering inequalities after selecting.
    #[arg(long)]
    pub verify: bool,
    /// Declared constants file (key-value) to verify against instead of
    /// computing constants from the space.
    #[arg(long)]
    pub constants: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and validate a space; optionally write it as a space file.
    Build {
        #[arg(long)]
        space: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the regularity constants report.
    Constants {
        #[arg(long)]
        space: String,
        #[arg(long)]
        t: String,
        #[arg(long = "T", default_value = "2")]
        big_t: String,
        /// Radius window lo:hi restricting every constant.
        #[arg(long)]
        window: Option<String>,
        /// combined (k2 at ratio 1/t) | bounded (k2 at ratio T)
        #[arg(long, default_value = "combined")]
        k2_mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the selection algorithm on an explicit ball family.
    Select(SelectArgs),
    /// Selection plus verification; exit 1 when an inequality fails.
    Verify(SelectArgs),
    /// Maximal function, weak-type profile, or weak-norm probe.
    Maximal {
        #[arg(long)]
        space: String,
        /// Point mass at this center (label or #index).
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        /// Constant sample value.
        #[arg(long = "const", allow_hyphen_values = true)]
        constant: Option<String>,
        /// Explicit comma-separated sample values.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        /// delta-scan | random
        #[arg(long)]
        probe: Option<String>,
        #[arg(long, default_value_t = 16)]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict the maximal operator to these radii (comma list).
        #[arg(long)]
        radii: Option<String>,
        /// Declared lacunarity of --radii.
        #[arg(long = "T", default_value = "2")]
        big_t: String,
        /// Write the level table as TSV.
        #[arg(long)]
        levels: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid experiments over a list of dimensions.
    Sweep {
        /// Comma-separated dimensions, empty for none.
        #[arg(long, default_value = "")]
        dims: String,
        #[arg(long, default_value_t = 4)]
        hw: u32,
        #[arg(long, default_value_t = 20)]
        families: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of points per space.
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------------------
// Space files

#[derive(Debug, Serialize, Deserialize)]
struct SpaceFileDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance_matrix: Option<Vec<Vec<String>>>,
    weights: Vec<String>,
}

fn parse_doc_q(context: &str, s: &str) -> Result<Q> {
    parse_q(s).map_err(|e| Error::Parse {
        context: context.into(),
        message: e.to_string(),
    })
}

/// Reads a space file (JSON document, numbers as strings).
pub fn read_space_file(path: &Path) -> Result<Space> {
    let text = std::fs::read_to_string(path)?;
    let doc: SpaceFileDoc = serde_json::from_str(&text).map_err(|e| Error::Parse {
        context: format!("space file {}", path.display()),
        message: format!("line {}, column {}: {}", e.line(), e.column(), e),
    })?;
    let weights = doc
        .weights
        .iter()
        .enumerate()
        .map(|(i, s)| parse_doc_q(&format!("weights[{i}]"), s))
        .collect::<Result<Vec<Q>>>()?;
    match (&doc.points, &doc.distance_matrix) {
        (Some(points), None) => {
            let norm = Norm::parse(doc.norm.as_deref().ok_or_else(|| Error::Parse {
                context: "space file".into(),
                message: "field `norm` is required with `points`".into(),
            })?)?;
            let coords = points
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, s)| parse_doc_q(&format!("points[{i}][{j}]"), s))
                        .collect::<Result<Vec<Q>>>()
                })
                .collect::<Result<Vec<Vec<Q>>>>()?;
            Space::from_points(coords, norm, weights)
        }
        (None, Some(rows)) => {
            let n = rows.len();
            let mut dist = Vec::with_capacity(n * n);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Parse {
                        context: "space file".into(),
                        message: format!(
                            "distance_matrix row {i} has {} entries, expected {n}",
                            row.len()
                        ),
                    });
                }
                for (j, s) in row.iter().enumerate() {
                    dist.push(parse_doc_q(&format!("distance_matrix[{i}][{j}]"), s)?);
                }
            }
            Space::from_matrix(dist, weights, false, None)
        }
        _ => Err(Error::Parse {
            context: format!("space file {}", path.display()),
            message: "exactly one of `points` or `distance_matrix` is required".into(),
        }),
    }
}

/// Writes a space as a space file; rational values round-trip bit-exactly.
pub fn write_space_file(space: &Space, path: &Path) -> Result<()> {
    let doc = match (space.points(), space.coord_norm()) {
        (Some(points), Some(norm)) => SpaceFileDoc {
            points: Some(
                points
                    .iter()
                    .map(|row| row.iter().map(format_q).collect())
                    .collect(),
            ),
            norm: Some(norm.name().to_string()),
            distance_matrix: None,
            weights: space.weights().iter().map(format_q).collect(),
        },
        _ => {
            let n = space.len();
            let matrix = (0..n)
                .map(|i| (0..n).map(|j| format_q(&space.dist(i, j))).collect())
                .collect();
            SpaceFileDoc {
                points: None,
                norm: None,
                distance_matrix: Some(matrix),
                weights: space.weights().iter().map(format_q).collect(),
            }
        }
    };
    let text = serde_json::to_string_pretty(&doc).expect("space document serializes");
    std::fs::write(path, text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Argument parsing helpers

/// Parses a builtin space spec or loads a space file.
pub fn load_space(arg: &str) -> Result<Space> {
    if arg == "three-point-delta" {
        return build_space(&SpaceSpec::ThreePointDelta);
    }
    if let Some(rest) = arg.strip_prefix("grid:") {
        let kv = parse_kv_list(rest)?;
        let dim = kv
            .get("d")
            .ok_or_else(|| spec_err("grid needs d="))?
            .parse::<u32>()
            .map_err(|_| spec_err("grid d must be an integer"))?;
        let hw = kv
            .get("hw")
            .ok_or_else(|| spec_err("grid needs hw="))?
            .parse::<u32>()
            .map_err(|_| spec_err("grid hw must be an integer"))?;
        let w0 = match kv.get("w0") {
            Some(s) => parse_doc_q("grid w0", s)?,
            None => Q::one(),
        };
        return build_space(&SpaceSpec::GridZd {
            dim,
            half_width: hw,
            origin_weight: w0,
        });
    }
    if let Some(rest) = arg.strip_prefix("lshape:") {
        let kv = parse_kv_list(rest)?;
        let pitch = parse_doc_q(
            "lshape pitch",
            kv.get("pitch")
                .ok_or_else(|| spec_err("lshape needs pitch="))?,
        )?;
        return build_space(&SpaceSpec::LshapeNet { pitch });
    }
    if let Some(rest) = arg.strip_prefix("ngon:") {
        let kv = parse_kv_list(rest)?;
        let n = kv
            .get("n")
            .ok_or_else(|| spec_err("ngon needs n="))?
            .parse::<usize>()
            .map_err(|_| spec_err("ngon n must be an integer"))?;
        return build_space(&SpaceSpec::NgonChordal { sides: n });
    }
    read_space_file(Path::new(arg))
}

fn spec_err(msg: &str) -> Error {
    Error::InvalidSpec(msg.to_string())
}

fn parse_kv_list(s: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse {
            context: "space spec".into(),
            message: format!("expected key=value, got {part:?}"),
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Resolves a center token: `#i` is an explicit index; otherwise the token
/// is a coordinate label (underscore-separated for several dimensions) on
/// labeled spaces and a bare index on matrix spaces.
pub fn parse_center(space: &Space, token: &str) -> Result<usize> {
    let bad = |msg: String| Error::Parse {
        context: format!("center {token:?}"),
        message: msg,
    };
    if let Some(idx) = token.strip_prefix('#') {
        let i = idx
            .parse::<usize>()
            .map_err(|_| bad("index expected after #".into()))?;
        if i >= space.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: space.len(),
            });
        }
        return Ok(i);
    }
    if space.labels().is_some() {
        let coords = token
            .split('_')
            .map(|c| parse_doc_q("coordinate", c))
            .collect::<Result<Vec<Q>>>()?;
        space
            .point_with_label(&coords)
            .ok_or_else(|| bad(format!("no point with coordinates {token}")))
    } else {
        let i = token
            .parse::<usize>()
            .map_err(|_| bad("point index expected".into()))?;
        if i >= space.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: space.len(),
            });
        }
        Ok(i)
    }
}

/// Parses `center:radius` pairs separated by commas.
pub fn parse_balls(space: &Space, s: &str) -> Result<Vec<(usize, Q)>> {
    let mut out = Vec::new();
    for token in s.split(',').filter(|t| !t.is_empty()) {
        let (center, radius) = token.rsplit_once(':').ok_or_else(|| Error::Parse {
            context: "ball list".into(),
            message: format!("expected center:radius, got {token:?}"),
        })?;
        out.push((
            parse_center(space, center)?,
            parse_doc_q("ball radius", radius)?,
        ));
    }
    Ok(out)
}

fn parse_window_arg(s: &str) -> Result<Window> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| Error::Parse {
        context: "window".into(),
        message: format!("expected lo:hi, got {s:?}"),
    })?;
    Window::new(parse_doc_q("window lo", lo)?, parse_doc_q("window hi", hi)?)
}

// ---------------------------------------------------------------------------
// Report emission

fn kv_text(pairs: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(k);
        out.push('\t');
        out.push_str(v);
        out.push('\n');
    }
    out
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    print!("{text}");
    std::io::stdout().flush()?;
    if let Some(path) = out {
        std::fs::write(path, text)?;
    }
    Ok(())
}

/// Parses a key-value report file back into a map.
pub fn read_kv_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once('\t').ok_or_else(|| Error::Parse {
            context: format!("{} line {}", path.display(), lineno + 1),
            message: "expected key<TAB>value".into(),
        })?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

fn outcome_kv(space: &Space, outcome: &SelectionOutcome) -> Vec<(String, String)> {
    let mut kv = vec![
        ("balls".to_string(), outcome.family.balls.len().to_string()),
        (
            "accepted".to_string(),
            outcome
                .accepted
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("mu_u".to_string(), format_q(&space.measure(&outcome.u_set))),
        ("mu_v".to_string(), format_q(&space.measure(&outcome.v_set))),
        ("max_density".to_string(), format_q(&outcome.max_density())),
        (
            "max_density_support".to_string(),
            format_q(&outcome.max_density_on_support(space)),
        ),
    ];
    for (j, d) in outcome.disjoint.iter().enumerate() {
        kv.push((
            format!("disjoint_{j}"),
            d.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ));
    }
    kv.push((
        "density".to_string(),
        outcome
            .density
            .iter()
            .map(format_q)
            .collect::<Vec<_>>()
            .join(","),
    ));
    kv
}

// ---------------------------------------------------------------------------
// Sweep

/// One dimension of a sweep run.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub dim: u32,
    pub half_width: u32,
    pub points: u64,
    pub max_density: Q,
    /// Density bound `C K + 1` from the run's own constants.
    pub density_bound: Q,
    pub weak_norm: Q,
    pub sparse_bound: Q,
    pub full_bound: BoundValue,
    pub lebesgue_bound: f64,
    pub d_log_d: f64,
    pub density_ok: bool,
    pub weak_ok: bool,
    pub verified: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn all_ok(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.density_ok && r.weak_ok && r.verified)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "d\thw\tpoints\tmax_density\tdensity_bound\tweak_norm\tsparse_bound\tfull_bound\tlebesgue_bound\td_log_d\tdensity_ok\tweak_ok\tverified\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.dim,
                r.half_width,
                r.points,
                format_q(&r.max_density),
                format_q(&r.density_bound),
                format_q(&r.weak_norm),
                format_q(&r.sparse_bound),
                r.full_bound,
                r.lebesgue_bound,
                r.d_log_d,
                r.density_ok,
                r.weak_ok,
                r.verified,
            ));
        }
        out
    }
}

/// Runs grid experiments for each dimension: seeded random families with
/// `t = 1/d^2` over a `max(d,2)`-lacunary large-radius set, selection, exact
/// density maxima, a restricted delta-scan weak norm, and the theoretical
/// bounds.
///
/// The sparse bound column is computed at reduction `1/T`, for which the
/// lacunary covering statement applies to the restricted scan; the density
/// bound column `C K + 1` uses the run's own `t`.
pub fn sweep(
    dims: &[u32],
    half_width: u32,
    families: u32,
    seed: u64,
    budget: u64,
) -> Result<SweepResult> {
    let mut result = SweepResult::default();
    for &dim in dims {
        if dim < 1 {
            return Err(Error::InvalidParameter(
                "sweep dimensions start at 1".into(),
            ));
        }
        let side = 2 * half_width as u64 + 1;
        let points = side.checked_pow(dim).ok_or(Error::BudgetExceeded {
            points: u64::MAX,
            budget,
        })?;
        if points > budget {
            return Err(Error::BudgetExceeded { points, budget });
        }
        let space = build_space(&SpaceSpec::GridZd {
            dim,
            half_width,
            origin_weight: Q::one(),
        })?;
        let t = Q::one() / q((dim as i64) * (dim as i64));
        let big_t = q(dim.max(2) as i64);
        let r0 = q(dim as i64 + 1);
        let r_max = q(2 * half_width as i64);
        let radii = make_lacunary(&r0, &big_t, &r0, &r_max)?;
        // Constants for the run's own reduction parameter.
        let window = Window::new(radii.min() * &t / q(2), radii.max() / &t)?;
        let report = constants_report(&space, &t, &big_t, Some(&window), K2Mode::Combined)?;
        // Constants at reduction 1/T, where the lacunary bound is proved.
        let t_sparse = Q::one() / &big_t;
        let window_sparse = Window::new(radii.min() * &t_sparse / q(2), radii.max().clone())?;
        let report_sparse = constants_report(
            &space,
            &t_sparse,
            &big_t,
            Some(&window_sparse),
            K2Mode::Combined,
        )?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (dim as u64) << 32);
        let mut max_density = Q::zero();
        let mut verified = true;
        for _ in 0..families {
            let size = rng.gen_range(1..=8usize);
            let mut balls: Vec<(usize, Q)> = (0..size)
                .map(|_| {
                    let center = rng.gen_range(0..space.len());
                    let radius = radii.radii()[rng.gen_range(0..radii.radii().len())].clone();
                    (center, radius)
                })
                .collect();
            balls.sort_by(|a, b| b.1.cmp(&a.1));
            let family = BallFamily::combined(balls, t.clone());
            let outcome = full_select(&space, &family)?;
            let v = verify_covering_bounds(&space, &outcome, &report, TheoremKind::Combined)?;
            verified &= v.all_passed();
            let d = outcome.max_density_on_support(&space);
            if d > max_density {
                max_density = d;
            }
        }
        let density_bound = match (report.c_mu.value.as_q(), report.k_blossom.value.as_q()) {
            (Some(c), Some(k)) => c * k + Q::one(),
            _ => unreachable!("counting measure constants are finite"),
        };
        let weak = empirical_weak_norm(&space, &Probe::DeltaScan, Some(&radii))?;
        let sparse_bound = match (
            report_sparse.c_mu.value.as_q(),
            report_sparse.k_blossom.value.as_q(),
        ) {
            (Some(c), Some(k)) => sparse_bound_exact(k, c),
            _ => unreachable!("counting measure constants are finite"),
        };
        let bounds = theoretical_bounds(&report, Some(dim));
        let d_f = dim as f64;
        result.rows.push(SweepRow {
            dim,
            half_width,
            points,
            density_ok: max_density <= density_bound,
            weak_ok: weak.supremum <= sparse_bound,
            max_density,
            density_bound,
            weak_norm: weak.supremum,
            sparse_bound,
            full_bound: bounds.full,
            lebesgue_bound: bounds.lebesgue_sparse.unwrap(),
            d_log_d: d_f * d_f.ln(),
            verified,
        });
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// Command dispatch

/// Executes a parsed command line. Returns the process exit code: 0 on
/// success, 1 when a requested verification fails. Invalid inputs surface
/// as errors (exit 2 in the binary).
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Build { space, out } => {
            let sp = load_space(space)?;
            let kv = vec![
                ("points".to_string(), sp.len().to_string()),
                ("total_measure".to_string(), format_q(sp.total_measure())),
                ("support".to_string(), sp.support().len().to_string()),
                (
                    "critical_radii".to_string(),
                    sp.critical_radii().distances().len().to_string(),
                ),
                (
                    "cmp".to_string(),
                    if sp.cmp_mode().is_exact() {
                        "exact"
                    } else {
                        "approx"
                    }
                    .to_string(),
                ),
            ];
            emit(None, &kv_text(&kv))?;
            if let Some(path) = out {
                write_space_file(&sp, path)?;
            }
            Ok(0)
        }
        Command::Constants {
            space,
            t,
            big_t,
            window,
            k2_mode,
            out,
        } => {
            let sp = load_space(space)?;
            let t = parse_doc_q("t", t)?;
            let big_t = parse_doc_q("T", big_t)?;
            let window = window.as_deref().map(parse_window_arg).transpose()?;
            let mode = match k2_mode.as_str() {
                "combined" => K2Mode::Combined,
                "bounded" => K2Mode::BoundedRadii,
                other => {
                    return Err(Error::Parse {
                        context: "k2-mode".into(),
                        message: format!("expected combined or bounded, got {other:?}"),
                    })
                }
            };
            let report = constants_report(&sp, &t, &big_t, window.as_ref(), mode)?;
            emit(out.as_deref(), &kv_text(&report.to_kv()))?;
            Ok(0)
        }
        Command::Select(args) => run_select(args, false),
        Command::Verify(args) => run_select(args, true),
        Command::Maximal {
            space,
            delta,
            constant,
            values,
            probe,
            count,
            seed,
            radii,
            big_t,
            levels,
            out,
        } => {
            let sp = load_space(space)?;
            let radii_set = radii
                .as_deref()
                .map(|list| -> Result<RadiiSet> {
                    let rs = list
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(|s| parse_doc_q("radius", s))
                        .collect::<Result<Vec<Q>>>()?;
                    RadiiSet::new(rs, parse_doc_q("T", big_t)?)
                })
                .transpose()?;
            if let Some(probe) = probe {
                let probe = match probe.as_str() {
                    "delta-scan" => Probe::DeltaScan,
                    "random" => Probe::Random {
                        count: *count,
                        seed: *seed,
                    },
                    other => {
                        return Err(Error::Parse {
                            context: "probe".into(),
                            message: format!("expected delta-scan or random, got {other:?}"),
                        })
                    }
                };
                let est = empirical_weak_norm(&sp, &probe, radii_set.as_ref())?;
                let kv = vec![
                    ("weak_norm_lower_bound".to_string(), format_q(&est.supremum)),
                    ("witness".to_string(), est.description),
                ];
                emit(out.as_deref(), &kv_text(&kv))?;
                return Ok(0);
            }
            let f = if let Some(center) = delta {
                SampleFunction::delta(sp.len(), parse_center(&sp, center)?)
            } else if let Some(c) = constant {
                SampleFunction::constant(sp.len(), parse_doc_q("const", c)?)
            } else if let Some(list) = values {
                let vals = list
                    .split(',')
                    .map(|s| parse_doc_q("value", s))
                    .collect::<Result<Vec<Q>>>()?;
                if vals.len() != sp.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} values for {} points",
                        vals.len(),
                        sp.len()
                    )));
                }
                SampleFunction::new(vals)
            } else {
                return Err(Error::InvalidParameter(
                    "maximal needs one of --delta, --const, --values or --probe".into(),
                ));
            };
            let mf = maximal_function(&sp, &f, radii_set.as_ref())?;
            let profile = weak_type_profile(&sp, &f, radii_set.as_ref())?;
            let kv = vec![
                ("l1_norm".to_string(), format_q(&profile.l1_norm)),
                ("weak_ratio_sup".to_string(), format_q(&profile.supremum)),
                ("weak_ratio_level".to_string(), format_q(&profile.level)),
                (
                    "maximal".to_string(),
                    mf.values.iter().map(format_q).collect::<Vec<_>>().join(","),
                ),
                ("undefined".to_string(), mf.undefined.len().to_string()),
            ];
            emit(out.as_deref(), &kv_text(&kv))?;
            if let Some(path) = levels {
                let mut tsv =
                    String::from("level\tmu_above\tratio_above\tmu_at_least\tratio_left\n");
                for row in &profile.rows {
                    tsv.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        format_q(&row.level),
                        format_q(&row.mu_above),
                        format_q(&row.ratio_above),
                        format_q(&row.mu_at_least),
                        format_q(&row.ratio_left),
                    ));
                }
                std::fs::write(path, tsv)?;
            }
            Ok(0)
        }
        Command::Sweep {
            dims,
            hw,
            families,
            seed,
            budget,
            out,
        } => {
            let dims = dims
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim().parse::<u32>().map_err(|_| Error::Parse {
                        context: "dims".into(),
                        message: format!("expected an integer, got {s:?}"),
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            let result = sweep(&dims, *hw, *families, *seed, *budget)?;
            emit(out.as_deref(), &result.to_tsv())?;
            Ok(if result.all_ok() { 0 } else { 1 })
        }
    }
}

fn run_select(args: &SelectArgs, verify: bool) -> Result<i32> {
    let space = load_space(&args.space)?;
    let t = parse_doc_q("t", &args.t)?;
    let balls = parse_balls(&space, &args.balls)?;
    let (family, theorem) = match args.mode.as_str() {
        "sparse" => {
            let big_t = parse_doc_q("T", args.big_t.as_deref().unwrap_or("2"))?;
            let mut distinct: Vec<Q> = Vec::new();
            for (_, r) in &balls {
                if !distinct.contains(r) {
                    distinct.push(r.clone());
                }
            }
            let radii = RadiiSet::new(distinct, big_t)?;
            (BallFamily::sparse(balls, t, radii), TheoremKind::Sparse)
        }
        "bounded" => {
            let big_t = parse_doc_q("T", args.big_t.as_deref().unwrap_or("2"))?;
            let base = parse_doc_q(
                "base",
                args.base
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParameter("bounded mode needs --base".into()))?,
            )?;
            (
                BallFamily::bounded(balls, t, base, big_t),
                TheoremKind::Bounded,
            )
        }
        "combined" => (BallFamily::combined(balls, t), TheoremKind::Combined),
        other => {
            return Err(Error::Parse {
                context: "mode".into(),
                message: format!("expected sparse, bounded or combined, got {other:?}"),
            })
        }
    };
    let outcome = match (&family.mode, &args.threshold) {
        (_, Some(th)) => select_with_threshold(&space, &family, &parse_doc_q("threshold", th)?)?,
        (crate::covering::FamilyMode::Sparse(_), None) => sparse_select(&space, &family)?,
        (crate::covering::FamilyMode::Bounded { .. }, None) => {
            full_family_outcome(&space, &family)?
        }
        (crate::covering::FamilyMode::Combined, None) => full_select(&space, &family)?,
    };
    let mut kv = outcome_kv(&space, &outcome);
    let mut exit = 0;
    if verify || args.verify || args.constants.is_some() {
        let report = match &args.constants {
            Some(path) => ConstantsReport::from_kv(&read_kv_file(path)?)?,
            None => crate::covering::family_report(&space, &family)?,
        };
        let verification = verify_covering_bounds(&space, &outcome, &report, theorem)?;
        for entry in &verification.entries {
            kv.push((
                format!("verify_{}", entry.inequality),
                format!("{} lhs={} rhs={}", entry.verdict, entry.lhs, entry.rhs),
            ));
        }
        if !verification.all_passed() {
            exit = 1;
            for entry in verification.failed() {
                eprintln!(
                    "verification failed: {} with lhs = {}, rhs = {}",
                    entry.inequality, entry.lhs, entry.rhs
                );
            }
        }
        let _ = Verdict::Pass;
    }
    emit(args.out.as_deref(), &kv_text(&kv))?;
    Ok(exit)
}
