//! Command-line front end: parse algebra JSON or catalog names, run the
//! analyses, and emit deterministic text/JSON/CSV reports.
//!
//! Exit codes: 0 success, 1 regression/criterion failure, 2 input error.

use carnot_core::algebra::GradedLieAlgebra;
use carnot_core::scalar::{parse_rat, rat_string};
use carnot_core::{catalog, cohomology, forms, freelie, pbw, retract, spectral};
use carnot_core::{Error, RatForm, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Parser)]
#[command(
    name = "carnot",
    version,
    about = "Exact cohomology, retracted-complex, and pinching analysis of graded nilpotent Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full analysis of one algebra: layers, cohomology, pinching,
    /// relations, presentation predicates.
    Analyze {
        /// `catalog:<name[,params]>` or a path to an algebra JSON file
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Seed for the randomized searches (embedded in the report)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also include the retracted differential of this degree
        #[arg(long)]
        dc: Option<usize>,
        /// Skip the randomized presentation searches
        #[arg(long)]
        no_search: bool,
    },
    /// Re-derive every headline number in the built-in regression table.
    Regress {
        /// Only run entries whose spec contains this substring
        #[arg(long)]
        filter: Option<String>,
    },
    /// Dimensions of the free nilpotent Lie algebra on a Hall basis.
    Free {
        #[arg(long)]
        generators: usize,
        #[arg(long)]
        rank: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Relation ideal of a filtered algebra: generator weights per weight.
    Relations {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The retracted differential d_c of one degree, as symbol matrices.
    Dc {
        input: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Floating-point toy model: sublevel areas of x⁴ + y², heat decay,
    /// cone anisotropy. Emits CSV plus a JSON summary.
    SpectralToy {
        #[arg(long, default_value_t = 1e-4)]
        lambda_min: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        t_min: f64,
        #[arg(long, default_value_t = 1e4)]
        t_max: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Analyze {
            input,
            format,
            seed,
            dc,
            no_search,
        } => {
            let alg = load_algebra(&input)?;
            let report = build_report(&alg, seed, dc, no_search)?;
            match format {
                Format::Json => println!("{}", canonical_json(&report)),
                Format::Text => print_report_text(&alg, &report),
            }
            Ok(0)
        }
        Cmd::Regress { filter } => cmd_regress(filter.as_deref()),
        Cmd::Free {
            generators,
            rank,
            format,
        } => cmd_free(generators, rank, format),
        Cmd::Relations { input, format } => {
            let alg = load_algebra(&input)?;
            cmd_relations(&alg, format)
        }
        Cmd::Dc {
            input,
            degree,
            format,
        } => {
            let alg = load_algebra(&input)?;
            if degree >= alg.dim() {
                return Err(Error::Precondition(format!(
                    "degree {degree} out of range for dimension {}",
                    alg.dim()
                )));
            }
            let dc = dc_json(&alg, degree);
            match format {
                Format::Json => println!("{}", canonical_json(&dc)),
                Format::Text => print_dc_text(&alg, degree),
            }
            Ok(0)
        }
        Cmd::SpectralToy {
            lambda_min,
            lambda_max,
            points,
            epsilon,
            t_min,
            t_max,
        } => cmd_spectral_toy(lambda_min, lambda_max, points, epsilon, t_min, t_max),
    }
}

/// Loads `catalog:<spec>` (comma or parenthesis parameter syntax) or an
/// algebra JSON file, and validates the structure constants.
fn load_algebra(input: &str) -> Result<GradedLieAlgebra> {
    let alg = if let Some(spec) = input.strip_prefix("catalog:") {
        if spec.contains('(') {
            catalog::build_spec(spec)?
        } else {
            let mut parts = spec.split(',');
            let name = parts.next().unwrap_or("").trim();
            let params: Vec<i64> = parts
                .map(|p| {
                    p.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad parameter `{p}` in `{spec}`")))
                })
                .collect::<Result<_>>()?;
            catalog::build(name, &params)?
        }
    } else {
        let text = std::fs::read_to_string(input)
            .map_err(|e| Error::Parse(format!("cannot read {input}: {e}")))?;
        GradedLieAlgebra::from_json(&text)?
    };
    let issues = alg.validate_structure();
    if !issues.is_empty() {
        return Err(Error::InvalidAlgebra(issues.join("; ")));
    }
    Ok(alg)
}

/// Worker cap from CC_THREADS (default: available parallelism).
fn thread_cap() -> usize {
    std::env::var("CC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

// ---------------------------------------------------------------------
// analyze

#[derive(Serialize)]
struct Report {
    algebra: AlgebraJson,
    cohomology: Vec<DegreeJson>,
    pinching: PinchingJson,
    relations: Option<RelationsJson>,
    predicates: PredicatesJson,
    seed: u64,
    dc: Option<DcJson>,
}

#[derive(Serialize)]
struct AlgebraJson {
    name: String,
    dim: usize,
    labels: Vec<String>,
    weights: Vec<u32>,
    layer_dims: BTreeMap<u32, usize>,
    homogeneous_dim: u64,
    filtered: bool,
}

#[derive(Serialize)]
struct DegreeJson {
    degree: usize,
    dim: usize,
    weights: Vec<u32>,
    pure_weight: Option<u32>,
}

#[derive(Serialize)]
struct PinchingJson {
    homogeneous_dim: u64,
    degrees: Vec<DegreePinchJson>,
}

#[derive(Serialize)]
struct DegreePinchJson {
    degree: usize,
    dim: usize,
    applicable: bool,
    /// β_k interval as exact rationals `"p/q"`.
    beta: Option<[String; 2]>,
    alpha: Option<[String; 2]>,
    audible_lower_bound: Option<u32>,
}

#[derive(Serialize)]
struct RelationsJson {
    truncation: u32,
    generator_weights: Vec<u32>,
    /// weight → (ideal dim, bracket-part dim, generator count)
    per_weight: BTreeMap<u32, [usize; 3]>,
}

#[derive(Serialize)]
struct PredicatesJson {
    /// `null` when the algebra is not filtered.
    quadratically_presented: Option<bool>,
    /// `"found"`/`"inconclusive"`; `null` when skipped or not 2-step.
    omega_regular: Option<String>,
    /// Rank-2 element in the curvature span (2-step algebras only).
    rank2_curvature: Option<String>,
}

#[derive(Serialize)]
struct DcJson {
    degree: usize,
    source_labels: Vec<String>,
    target_labels: Vec<String>,
    col_weights: Vec<u32>,
    row_weights: Vec<u32>,
    entries: Vec<DcEntryJson>,
}

#[derive(Serialize)]
struct DcEntryJson {
    row: usize,
    col: usize,
    symbol: String,
}

fn build_report(
    alg: &GradedLieAlgebra,
    seed: u64,
    dc_degree: Option<usize>,
    no_search: bool,
) -> Result<Report> {
    let profile = alg.layer_profile();
    let summary = cohomology::cohomology_summary(alg);
    let pinch = cohomology::pinching_report(alg, true);
    let relations = if profile.filtered {
        let p = freelie::relation_profile(alg)?;
        Some(RelationsJson {
            truncation: p.truncation,
            generator_weights: p.generator_weights,
            per_weight: p
                .per_weight
                .into_iter()
                .map(|(w, (a, b, c))| (w, [a, b, c]))
                .collect(),
        })
    } else {
        None
    };
    let quad = if profile.filtered {
        Some(cohomology::is_quadratically_presented(alg)?)
    } else {
        None
    };
    let two_step = profile.layer_dims.keys().max() == Some(&2);
    let omega = if two_step && !no_search {
        Some(match cohomology::omega_regular_search(alg, seed, 200)? {
            cohomology::SearchOutcome::Found(_) => "found".to_string(),
            cohomology::SearchOutcome::Inconclusive => "inconclusive".to_string(),
        })
    } else {
        None
    };
    let rank2 = if two_step {
        let span = catalog::curvature_span(alg);
        Some(match cohomology::rank2_in_span_seeded(alg, &span, seed, 400)? {
            cohomology::Rank2Verdict::Found(f) => format!("found: {}", form_str(alg, &f)),
            cohomology::Rank2Verdict::FoundIrrational(s) => format!("found_irrational: {s}"),
            cohomology::Rank2Verdict::NoneCertified => "none_certified".to_string(),
            cohomology::Rank2Verdict::Inconclusive => "inconclusive".to_string(),
        })
    } else {
        None
    };
    Ok(Report {
        algebra: AlgebraJson {
            name: alg.name().to_string(),
            dim: alg.dim(),
            labels: alg.labels().to_vec(),
            weights: alg.weights().to_vec(),
            layer_dims: profile.layer_dims.clone(),
            homogeneous_dim: profile.homogeneous_dim,
            filtered: profile.filtered,
        },
        cohomology: summary
            .degrees
            .iter()
            .map(|d| DegreeJson {
                degree: d.degree,
                dim: d.dim,
                weights: d.weights.clone(),
                pure_weight: d.pure_weight,
            })
            .collect(),
        pinching: PinchingJson {
            homogeneous_dim: pinch.homogeneous_dim,
            degrees: pinch
                .degrees
                .iter()
                .map(|d| DegreePinchJson {
                    degree: d.degree,
                    dim: d.dim,
                    applicable: d.applicable,
                    beta: d
                        .beta
                        .as_ref()
                        .map(|(lo, hi)| [rat_string(lo), rat_string(hi)]),
                    alpha: d
                        .alpha
                        .as_ref()
                        .map(|(lo, hi)| [rat_string(lo), rat_string(hi)]),
                    audible_lower_bound: d.audible_lower_bound,
                })
                .collect(),
        },
        relations,
        predicates: PredicatesJson {
            quadratically_presented: quad,
            omega_regular: omega,
            rank2_curvature: rank2,
        },
        seed,
        dc: dc_degree.map(|k| dc_json(alg, k)),
    })
}

/// Canonical JSON: serde_json's map is ordered, so serializing through
/// `Value` sorts every object's keys; rationals were normalized at
/// construction.
fn canonical_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("report serializes");
    serde_json::to_string_pretty(&value).expect("value prints")
}

fn form_str(alg: &GradedLieAlgebra, form: &RatForm) -> String {
    if form.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (mask, c) in &form.terms {
        let mono = if *mask == 0 {
            "1".to_string()
        } else {
            forms::mask_indices(*mask)
                .map(|i| alg.labels()[i].clone())
                .collect::<Vec<_>>()
                .join("∧")
        };
        let cs = rat_string(c);
        if out.is_empty() {
            out = match cs.as_str() {
                "1" => mono,
                "-1" => format!("-{mono}"),
                _ => format!("{cs}*{mono}"),
            };
        } else {
            let (sign, mag) = if let Some(m) = cs.strip_prefix('-') {
                ("-", m.to_string())
            } else {
                ("+", cs)
            };
            if mag == "1" {
                out.push_str(&format!(" {sign} {mono}"));
            } else {
                out.push_str(&format!(" {sign} {mag}*{mono}"));
            }
        }
    }
    out
}

fn dc_json(alg: &GradedLieAlgebra, k: usize) -> DcJson {
    let dc = retract::dc_matrix(alg, k);
    let src = cohomology::e0_basis(alg, k);
    let tgt = cohomology::e0_basis(alg, k + 1);
    DcJson {
        degree: k,
        source_labels: src.vectors.iter().map(|f| form_str(alg, f)).collect(),
        target_labels: tgt.vectors.iter().map(|f| form_str(alg, f)).collect(),
        col_weights: dc.col_weights.clone(),
        row_weights: dc.row_weights.clone(),
        entries: dc
            .entries
            .iter()
            .map(|(&(r, c), s)| DcEntryJson {
                row: r,
                col: c,
                symbol: pbw::pretty(alg, s),
            })
            .collect(),
    }
}

fn print_dc_text(alg: &GradedLieAlgebra, k: usize) {
    let dc = dc_json(alg, k);
    println!(
        "d_c : E0^{k} -> E0^{} on {} ({} -> {} basis vectors)",
        k + 1,
        alg.name(),
        dc.source_labels.len(),
        dc.target_labels.len()
    );
    for (c, src) in dc.source_labels.iter().enumerate() {
        let arrows: Vec<String> = dc
            .entries
            .iter()
            .filter(|e| e.col == c)
            .map(|e| format!("({})·[{}]", e.symbol, dc.target_labels[e.row]))
            .collect();
        let rhs = if arrows.is_empty() {
            "0".to_string()
        } else {
            arrows.join("  +  ")
        };
        println!("  [{src}]  --->  {rhs}");
    }
}

fn print_report_text(alg: &GradedLieAlgebra, r: &Report) {
    println!("algebra {}  (dim {})", r.algebra.name, r.algebra.dim);
    let layers: Vec<String> = r
        .algebra
        .layer_dims
        .iter()
        .map(|(w, d)| format!("g_{w}: {d}"))
        .collect();
    println!(
        "  layers: {}   N(G) = {}   filtered: {}",
        layers.join(", "),
        r.algebra.homogeneous_dim,
        r.algebra.filtered
    );
    println!("cohomology E0 = H*(g):");
    for d in &r.cohomology {
        println!(
            "  degree {}: dim {}  weights {:?}",
            d.degree, d.dim, d.weights
        );
    }
    println!("pinching (N(G) = {}):", r.pinching.homogeneous_dim);
    for d in &r.pinching.degrees {
        if !d.applicable {
            println!("  degree {}: not applicable", d.degree);
            continue;
        }
        let (b, a) = (d.beta.as_ref().unwrap(), d.alpha.as_ref().unwrap());
        let audible = d
            .audible_lower_bound
            .map(|r| format!("  (zero-column bound ≥ {r})"))
            .unwrap_or_default();
        println!(
            "  degree {}: beta in [{}, {}], alpha in [{}, {}]{audible}",
            d.degree, b[0], b[1], a[0], a[1]
        );
    }
    match &r.relations {
        Some(rel) => println!(
            "relations: generator weights {:?} (free truncation {})",
            rel.generator_weights, rel.truncation
        ),
        None => println!("relations: n/a (not filtered)"),
    }
    if let Some(q) = r.predicates.quadratically_presented {
        println!("quadratically presented: {q}");
    }
    if let Some(o) = &r.predicates.omega_regular {
        println!("regular commuting horizontal plane search (seed {}): {o}", r.seed);
    }
    if let Some(v) = &r.predicates.rank2_curvature {
        println!("rank-2 element in curvature span: {v}");
    }
    if let Some(dc) = &r.dc {
        print_dc_text(alg, dc.degree);
    }
}

// ---------------------------------------------------------------------
// regress

struct RegressRow {
    spec: String,
    pass: bool,
    detail: String,
}

fn check_entry(entry: &catalog::CatalogEntry) -> RegressRow {
    let mut problems: Vec<String> = Vec::new();
    let mut checked: Vec<String> = Vec::new();
    let alg = match catalog::build_spec(entry.spec) {
        Ok(a) => a,
        Err(e) => {
            return RegressRow {
                spec: entry.spec.to_string(),
                pass: false,
                detail: format!("build failed: {e}"),
            }
        }
    };
    if let Some(k) = entry.degree {
        let d = &cohomology::pinching_degree(&alg, k, true);
        if let Some((lo, hi)) = entry.beta {
            let expect = (parse_rat(lo).unwrap(), parse_rat(hi).unwrap());
            match &d.beta {
                Some(b) if *b == expect => checked.push(format!("beta_{k} = [{lo}, {hi}]")),
                other => problems.push(format!(
                    "beta_{k}: expected [{lo}, {hi}], got {:?}",
                    other
                        .as_ref()
                        .map(|(a, b)| [rat_string(a), rat_string(b)])
                )),
            }
        }
        if let Some((lo, hi)) = entry.alpha {
            let expect = (parse_rat(lo).unwrap(), parse_rat(hi).unwrap());
            match &d.alpha {
                Some(a) if *a == expect => checked.push(format!("alpha_{k} = [{lo}, {hi}]")),
                other => problems.push(format!(
                    "alpha_{k}: expected [{lo}, {hi}], got {:?}",
                    other
                        .as_ref()
                        .map(|(a, b)| [rat_string(a), rat_string(b)])
                )),
            }
        }
    }
    if let Some(q) = entry.quadratically_presented {
        match cohomology::is_quadratically_presented(&alg) {
            Ok(got) if got == q => checked.push(format!("quadratic = {q}")),
            Ok(got) => problems.push(format!("quadratic: expected {q}, got {got}")),
            Err(e) => problems.push(format!("quadratic: {e}")),
        }
    }
    RegressRow {
        spec: entry.spec.to_string(),
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            checked.join("; ")
        } else {
            problems.join("; ")
        },
    }
}

fn cmd_regress(filter: Option<&str>) -> Result<i32> {
    let entries: Vec<catalog::CatalogEntry> = catalog::catalog_list()
        .into_iter()
        .filter(|e| filter.map_or(true, |f| e.spec.contains(f)))
        .collect();
    let cap = thread_cap().max(1);
    let mut rows: Vec<RegressRow> = Vec::with_capacity(entries.len());
    for chunk in entries.chunks(cap) {
        let chunk_rows: Vec<RegressRow> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|e| scope.spawn(move || check_entry(e)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("regression worker panicked"))
                .collect()
        });
        rows.extend(chunk_rows);
    }
    let mut failed = false;
    for row in &rows {
        let status = if row.pass { "PASS" } else { "FAIL" };
        failed |= !row.pass;
        println!("{status}  {:<20} {}", row.spec, row.detail);
    }
    println!(
        "{} entries, {} failed",
        rows.len(),
        rows.iter().filter(|r| !r.pass).count()
    );
    Ok(if failed { 1 } else { 0 })
}

// ---------------------------------------------------------------------
// free / relations

#[derive(Serialize)]
struct FreeJson {
    generators: usize,
    rank: u32,
    dim: usize,
    layer_dims: Vec<usize>,
    witt_dims: Vec<u64>,
    labels: Vec<String>,
}

fn cmd_free(generators: usize, rank: u32, format: Format) -> Result<i32> {
    if generators < 1 || rank < 1 {
        return Err(Error::Precondition(
            "free needs generators ≥ 1 and rank ≥ 1".into(),
        ));
    }
    let hall = freelie::HallBasis::new(generators, rank);
    let alg = hall.to_algebra();
    let layer_dims: Vec<usize> = (1..=rank).map(|w| hall.layer(w).len()).collect();
    let witt_dims: Vec<u64> = (1..=rank as u64)
        .map(|w| freelie::witt_dimension(generators as u64, w))
        .collect();
    let out = FreeJson {
        generators,
        rank,
        dim: alg.dim(),
        layer_dims,
        witt_dims,
        labels: alg.labels().to_vec(),
    };
    match format {
        Format::Json => println!("{}", canonical_json(&out)),
        Format::Text => {
            println!(
                "free nilpotent: {} generators, rank {}, dim {}",
                out.generators, out.rank, out.dim
            );
            println!("  layer dims: {:?} (Witt: {:?})", out.layer_dims, out.witt_dims);
            println!("  Hall basis: {}", out.labels.join(", "));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct RelationsOut {
    algebra: String,
    truncation: u32,
    generator_weights: Vec<u32>,
    per_weight: BTreeMap<u32, [usize; 3]>,
}

fn cmd_relations(alg: &GradedLieAlgebra, format: Format) -> Result<i32> {
    let p = freelie::relation_profile(alg)?;
    let out = RelationsOut {
        algebra: alg.name().to_string(),
        truncation: p.truncation,
        generator_weights: p.generator_weights,
        per_weight: p
            .per_weight
            .into_iter()
            .map(|(w, (a, b, c))| (w, [a, b, c]))
            .collect(),
    };
    match format {
        Format::Json => println!("{}", canonical_json(&out)),
        Format::Text => {
            println!(
                "relation generators of {}: weights {:?} (free truncation {})",
                out.algebra, out.generator_weights, out.truncation
            );
            for (w, [ideal, bracket, gens]) in &out.per_weight {
                println!(
                    "  weight {w}: ideal dim {ideal}, bracket part {bracket}, generators {gens}"
                );
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------
// spectral toy

#[derive(Serialize)]
struct ToySummary {
    epsilon: f64,
    area_slope: f64,
    area_residual: f64,
    heat_slope: f64,
    heat_residual: f64,
    stated_area_asymptotic: String,
    stated_heat_asymptotic: String,
}

fn cmd_spectral_toy(
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
    epsilon: f64,
    t_min: f64,
    t_max: f64,
) -> Result<i32> {
    let cfg = spectral::ToyConfig::new(lambda_min, lambda_max, points, epsilon, t_min, t_max)?;
    let report = spectral::run(&cfg)?;
    println!("lambda,area,inside_cone_fraction,complement_fraction");
    for row in &report.area_rows {
        println!(
            "{:e},{:e},{:e},{:e}",
            row.lambda, row.area, row.inside_cone_fraction, row.complement_fraction
        );
    }
    println!();
    println!("t,heat");
    for row in &report.heat_rows {
        println!("{:e},{:e}", row.t, row.heat);
    }
    println!();
    let summary = ToySummary {
        epsilon: report.epsilon,
        area_slope: report.area_fit.slope,
        area_residual: report.area_fit.residual,
        heat_slope: report.heat_fit.slope,
        heat_residual: report.heat_fit.residual,
        stated_area_asymptotic: report.stated_area_asymptotic.to_string(),
        stated_heat_asymptotic: report.stated_heat_asymptotic.to_string(),
    };
    println!("{}", canonical_json(&summary));
    Ok(0)
}
