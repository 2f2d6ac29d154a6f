//! Command-line parsing and dispatch.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use spheremap_core::bounds::BoundsEngine;
use spheremap_core::harmonics::{fourier_degree, map_fourier_degree};
use spheremap_core::hodge::{
    check_equivariance, equivariance_inputs, fiber_map_matches_hopf, sd_split, EquivarianceReport, HodgeContext,
};
use spheremap_core::hopf::{
    chain_witness, clifford_hopf_map, clifford_system, normed_bilinear_from_clifford, odd_sphere_fibration,
    radon_hurwitz, verify_normed, ChainName,
};
use spheremap_core::maps::{is_constant, verify_sphere_map, PolynomialMap, SphereMap};
use spheremap_core::scalar::Coeff;
use spheremap_core::wilson::{
    check_simple_length_spectrum, enumerate_classes, evaluate_class, sort_entries, ClassEntry,
};
use spheremap_core::{GaussianRational, Rational};

use crate::cert::{emit_certificate, Certificate};
use crate::formats::{
    from_json, BundleDoc, ClassEntryDoc, CliffordDoc, CollisionDoc, GroupDoc, HodgeReportDoc, PolyDoc, SphereMapDoc,
    TableRowDoc,
};
use crate::io::{emit, read_text, to_json_pretty};
use crate::parallel::pool;
use crate::table::{render, Format};
use crate::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "spheremap", version, about = "Polynomial maps between spheres: construction and exact verification")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified bounds on q(n) and the derived group bounds.
    Qtable {
        #[arg(long, default_value_t = 15)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check that a map in JSON form lands in the target sphere.
    VerifyMap {
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Build a Hopf-construction map and verify it.
    Hopf {
        /// `S31_to_S16` or `S47_to_S32`.
        #[arg(long, conflicts_with_all = ["clifford", "odd"])]
        chain: Option<String>,
        /// Clifford module dimension `m` of `S^{m+s-1} -> S^m`.
        #[arg(long, requires = "s", conflicts_with = "odd")]
        clifford: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        /// `k` of `S^{4k-1} -> S^{2k}`.
        #[arg(long)]
        odd: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Build and check the Clifford system on R^m.
    Clifford {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Exact isometry and equivariance checks for the self-dual intertwiner.
    HodgeCheck {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Fourier degree of each coordinate of a map.
    HarmonicDegree {
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Class data, Wilson traces and trace-formula coefficients of a flat bundle.
    Wilson {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_word_len: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the length-spectrum and Wilson-bound report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Parses `argv` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::INPUT } else { exit::PASS };
        }
    };
    let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli, command) {
        Ok(true) => exit::PASS,
        Ok(false) => exit::FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            exit::INPUT
        }
    }
}

fn dispatch(cli: &Cli, command: Vec<String>) -> Result<bool, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Qtable { max_n, format, out, cert } => {
            qtable(*max_n, *format, out.as_deref(), cert.as_deref(), command)
        }
        Command::VerifyMap { map, out, cert } => verify_map(map, out.as_deref(), cert.as_deref(), command),
        Command::Hopf { chain, clifford, s, odd, out, cert } => {
            let (map, label) = match (chain, clifford, odd) {
                (Some(name), _, _) => (chain_witness(ChainName::from_name(name)?)?, name.clone()),
                (None, Some(m), _) => {
                    let s = s.expect("clap enforces --s");
                    (clifford_hopf_map(*m, s)?, format!("clifford_hopf(m={m},s={s})"))
                }
                (None, None, Some(k)) => (odd_sphere_fibration(*k)?, format!("odd_fibration(k={k})")),
                (None, None, None) => {
                    return Err(CliError::Input("one of --chain, --clifford or --odd is required".into()))
                }
            };
            hopf(&map, &label, out.as_deref(), cert.as_deref(), command)
        }
        Command::Clifford { m, out, cert } => clifford(*m, out.as_deref(), cert.as_deref(), command),
        Command::HodgeCheck { dim, trials, out, cert } => {
            hodge_check(*dim, *trials, seed, out.as_deref(), cert.as_deref(), command)
        }
        Command::HarmonicDegree { map, out } => harmonic_degree(map, out.as_deref()),
        Command::Wilson { group, bundle, max_word_len, tol, out, report } => {
            wilson(group, bundle, *max_word_len, *tol, out.as_deref(), report.as_deref())
        }
    }
}

fn write_cert(cert: Option<&Path>, c: &Certificate) -> Result<(), CliError> {
    match cert {
        Some(p) => emit_certificate(c, p),
        None => Ok(()),
    }
}

fn qtable(
    max_n: usize,
    format: Format,
    out: Option<&Path>,
    cert: Option<&Path>,
    command: Vec<String>,
) -> Result<bool, CliError> {
    let mut engine = BoundsEngine::new();
    let rows = engine.table(max_n)?;
    let mut certified = true;
    for r in &rows {
        if let Some(w) = &r.q.witness {
            certified &= engine.certify(w)?;
        }
    }
    let docs: Vec<TableRowDoc> = rows.iter().map(TableRowDoc::from).collect();
    emit(out, &render(&docs, format))?;
    let rules: BTreeSet<String> = docs.iter().flat_map(|d| d.q.provenance.iter().cloned()).collect();
    let c = Certificate::new("qtable", &docs, 0, command)
        .check("witnesses_certified", certified)
        .check("lower_le_upper", docs.iter().all(|d| d.q.lower <= d.q.upper))
        .fact("max_n", max_n)
        .fact("exact_rows", docs.iter().filter(|d| d.q.exact).count())
        .provenance(rules);
    write_cert(cert, &c)?;
    Ok(c.pass())
}

#[derive(Serialize)]
struct MapReport {
    pass: bool,
    source_dim: usize,
    target_dim: usize,
    degree_repr: u32,
    is_constant: bool,
    residual: PolyDoc,
}

fn check_map(map: &SphereMap) -> MapReport {
    let r = verify_sphere_map(map);
    MapReport {
        pass: r.pass,
        source_dim: map.source_dim(),
        target_dim: map.target_dim(),
        degree_repr: map.degree_repr(),
        is_constant: is_constant(map),
        residual: PolyDoc::from_poly(&r.residual),
    }
}

fn map_certificate(kind: &str, map: &SphereMap, report: &MapReport, command: Vec<String>) -> Certificate {
    Certificate::new(kind, &SphereMapDoc::from(map), 0, command)
        .check("sum_of_squares_is_one", report.pass)
        .fact("source_dim", report.source_dim)
        .fact("target_dim", report.target_dim)
        .fact("degree_repr", report.degree_repr)
        .fact("is_constant", report.is_constant)
}

fn load_map(path: &Path) -> Result<SphereMap, CliError> {
    let doc: SphereMapDoc = from_json(&read_text(path)?, "sphere map")?;
    Ok(doc.to_map()?)
}

fn verify_map(path: &Path, out: Option<&Path>, cert: Option<&Path>, command: Vec<String>) -> Result<bool, CliError> {
    let map = load_map(path)?;
    let report = check_map(&map);
    emit(out, &to_json_pretty(&report))?;
    write_cert(cert, &map_certificate("sphere_map", &map, &report, command))?;
    if !report.pass {
        eprintln!("verification failed: |F|^2 - 1 does not vanish on the sphere");
    }
    Ok(report.pass)
}

fn hopf(
    map: &SphereMap,
    label: &str,
    out: Option<&Path>,
    cert: Option<&Path>,
    command: Vec<String>,
) -> Result<bool, CliError> {
    let report = check_map(map);
    emit(out, &to_json_pretty(&SphereMapDoc::from(map)))?;
    let c = map_certificate("sphere_map", map, &report, command)
        .check("non_constant", !report.is_constant)
        .provenance([label.to_string()]);
    write_cert(cert, &c)?;
    Ok(c.pass())
}

fn clifford(m: usize, out: Option<&Path>, cert: Option<&Path>, command: Vec<String>) -> Result<bool, CliError> {
    if m == 0 {
        return Err(CliError::Input("--m must be positive".into()));
    }
    let cs = clifford_system(m);
    let rho = radon_hurwitz(m as u64) as usize;
    let relations = cs.check().is_ok();
    let normed = if cs.is_empty() { true } else { verify_normed(&normed_bilinear_from_clifford(&cs)?) };
    let doc = CliffordDoc::from(&cs);
    emit(out, &to_json_pretty(&doc))?;
    let c = Certificate::new("clifford_system", &doc, 0, command)
        .check("structure_count", cs.len() == rho - 1)
        .check("anticommuting_orthogonal_complex_structures", relations)
        .check("normed_identity", normed)
        .fact("m", m)
        .fact("radon_hurwitz", rho)
        .fact("structures", cs.len());
    write_cert(cert, &c)?;
    Ok(c.pass())
}

fn run_trials<C: Coeff + Send + Sync>(
    ctx: &HodgeContext,
    trials: usize,
    seed: u64,
) -> Result<EquivarianceReport, CliError> {
    let split = sd_split::<C>(ctx)?;
    let inputs = equivariance_inputs(ctx, trials, seed)?;
    let reports = pool().install(|| {
        inputs.par_iter().map(|(r, v)| check_equivariance(ctx, &split, r, v)).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(reports.iter().fold(EquivarianceReport::default(), |acc, r| acc.merge(r)))
}

fn hodge_check(
    dim: usize,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
    cert: Option<&Path>,
    command: Vec<String>,
) -> Result<bool, CliError> {
    if trials == 0 {
        return Err(CliError::Input("--trials must be at least 1".into()));
    }
    let ctx = HodgeContext::new(dim)?;
    let report = if ctx.needs_complex() {
        run_trials::<GaussianRational>(&ctx, trials, seed)?
    } else {
        run_trials::<Rational>(&ctx, trials, seed)?
    };
    let fiber = if dim == 4 { Some(fiber_map_matches_hopf()?) } else { None };
    let doc = HodgeReportDoc::new(dim, seed, &report, fiber);
    emit(out, &to_json_pretty(&doc))?;
    let c = Certificate::new("hodge", &doc, seed, command)
        .check("isometry", doc.isometry)
        .check("equivariance", doc.equivariance.failures == 0)
        .check("exterior_power_orthogonal_and_commutes_with_star", doc.exterior_power_orthogonal)
        .fact("dim", dim)
        .fact("trials", trials);
    let c = match fiber {
        Some(ok) => c.check("fiber_map_matches_hopf", ok),
        None => c,
    };
    write_cert(cert, &c)?;
    Ok(doc.pass())
}

fn harmonic_degree(path: &Path, out: Option<&Path>) -> Result<bool, CliError> {
    let map = load_map(path)?;
    let ctx = map.context();
    let coords = map.coords().iter().map(|p| fourier_degree(p, &ctx)).collect::<Result<Vec<_>, _>>()?;
    let degree = map_fourier_degree(&map)?;
    let constant = is_constant(&map);
    let doc = json!({ "coordinates": coords, "map": degree, "is_constant": constant });
    emit(out, &to_json_pretty(&doc))?;
    Ok((degree == 0) == constant)
}

#[derive(Serialize)]
struct WilsonReport {
    simple_length_spectrum: bool,
    collisions: Vec<CollisionDoc>,
    forced: Vec<CollisionDoc>,
    wilson_bounded_by_rank: bool,
}

fn wilson(
    group: &Path,
    bundle: &Path,
    max_word_len: usize,
    tol: f64,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<bool, CliError> {
    let g = from_json::<GroupDoc>(&read_text(group)?, "group")?.to_group()?;
    let b = from_json::<BundleDoc>(&read_text(bundle)?, "bundle")?.to_bundle()?;
    if b.images().len() != g.rank() {
        return Err(CliError::Input(format!("bundle has {} images for {} generators", b.images().len(), g.rank())));
    }
    let classes = enumerate_classes(g.rank(), max_word_len)?;
    let mut entries: Vec<ClassEntry> =
        pool().install(|| classes.par_iter().map(|c| evaluate_class(&g, &b, c)).collect::<Result<Vec<_>, _>>())?;
    sort_entries(&mut entries);
    let rank2 = GaussianRational::from_int((b.rank() * b.rank()) as i64).re();
    let bounded = entries.iter().all(|e| e.wilson.norm_sqr() <= rank2);
    let spectrum = check_simple_length_spectrum(&entries, tol)?;
    let docs: Vec<ClassEntryDoc> = entries.iter().map(ClassEntryDoc::from).collect();
    emit(out, &to_json_pretty(&docs))?;
    let rep = WilsonReport {
        simple_length_spectrum: spectrum.is_simple(),
        collisions: spectrum.collisions.iter().map(CollisionDoc::from).collect(),
        forced: spectrum.forced.iter().map(CollisionDoc::from).collect(),
        wilson_bounded_by_rank: bounded,
    };
    if let Some(p) = report {
        emit(Some(p), &to_json_pretty(&rep))?;
    }
    for c in &rep.collisions {
        eprintln!("length collision: {} {} (gap {:e})", c.first, c.second, c.gap);
    }
    if !bounded {
        eprintln!("a Wilson trace exceeds the bundle rank");
    }
    Ok(rep.simple_length_spectrum && bounded)
}
