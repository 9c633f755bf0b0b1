//! `twistlab`: command-line front end for the twistlab library.
//!
//! Every subcommand prints a report on stdout (JSON by default) and exits
//! with 0. Usage errors and unreadable input exit with 1, inputs rejected by
//! the mathematics with 2; in both cases stderr carries a one-line JSON
//! envelope `{"error": {kind, message, exit_code, details?}}`.

mod error;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use twistlab::catalog::{
    default_catalog, fermat_nonvanishing_scan, hypersurface_betti, lookup, ExampleRecord,
};
use twistlab::mec::{
    bad_orbit_pairs, build_e1_strata_bw, chi_m_brieskorn, chi_m_bw, chi_m_cover, chi_m_from_e1,
    chi_m_subcritical, e1_page, BWData, BadOrbitCheck, E1Page,
};
use twistlab::profile::{
    alpha0, alpha1, binding_interpolation_check, build_rho, exactness_check, mapping_torus_shift,
    twisting_profile, verify_profile, FunctionTable, ProfileConfig, ProfileError, Residual,
};
use twistlab::rs_index::io::read_path_file_with_tol;
use twistlab::rs_index::{
    bw_exceptional_model, bw_principal_model, hyperbolic_path, iterate, rotation_path,
    rs_index_with, CrossingRecord, SymplecticPath, Tolerances,
};
use twistlab::twist::{decide_triviality, distinct_powers, subcritical_crosscheck};
use twistlab::{HalfInteger, Rational};

use error::CliError;
use output::{cell, Format, Report, Rows};

#[derive(Parser)]
#[command(
    name = "twistlab",
    version,
    about = "Maslov indices, mean Euler characteristics and fibered Dehn twists"
)]
struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "TWISTLAB_FORMAT",
        default_value = "json"
    )]
    format: Format,
    /// Crossing detection threshold on |det(ψ(t) − I)|.
    #[arg(long, global = true, default_value_t = 1e-10)]
    det_tol: f64,
    /// Singular values and crossing-form eigenvalues below this count as zero.
    #[arg(long, global = true, default_value_t = 1e-8)]
    kernel_tol: f64,
    /// Largest accepted symplectic defect of a path sample.
    #[arg(long, global = true, default_value_t = 1e-9)]
    sym_tol: f64,
    /// Golden-section steps per crossing.
    #[arg(long, global = true, default_value_t = 60)]
    refine_iters: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Robbin–Salamon index of a path file or a model path.
    Maslov(MaslovArgs),
    /// Mean Euler characteristic from one of the closed formulas.
    ChiM(ChiMArgs),
    /// Whether a power of the fibered Dehn twist can be isotopic to the identity.
    Decide(DataArgs),
    /// E¹ page of the Morse–Bott spectral sequence for k = 1.
    E1(E1Args),
    /// Numerical checks of the twisting profile and the binding interpolation.
    ProfileVerify(ProfileVerifyArgs),
    /// One profile table as (t, value) rows.
    ProfileTable(ProfileTableArgs),
    /// Built-in hypersurface examples.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Nonvanishing of the Fermat defect polynomial f_n on 2 ≤ d ≤ n.
    FermatScan {
        #[arg(long, default_value_t = 40)]
        n_max: u64,
    },
    /// Verdicts for τ^1 … τ^N_max and which powers are pairwise distinct.
    Powers {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 12)]
        n_max: u64,
    },
    /// Subcritical filling against the k-fold cover of the boundary.
    Crosscheck(DataArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    /// exp(winding · t · J₀) on [0, 2π].
    Rotation,
    /// diag(e^{rate t}, e^{−rate t}) on [0, 1].
    Hyperbolic,
    /// Principal orbit of a Boothby–Wang bundle.
    BwPrincipal,
    /// m-th cover of an exceptional orbit, k = 1.
    BwExceptional,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["file", "model"])))]
struct MaslovArgs {
    /// Path file: JSON {n, grid, samples} or CSV rows `t, row-major entries`.
    file: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelName>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    winding: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    rate: f64,
    #[arg(long, default_value_t = 4)]
    n: u64,
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    c: i64,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long = "N", default_value_t = 1)]
    big_n: u64,
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Grid intervals of a model path; chosen from the expected crossing count if absent.
    #[arg(long)]
    samples: Option<usize>,
    /// Index of the m-fold iterate of a loop instead of the loop itself.
    #[arg(long)]
    cover: Option<usize>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["bw", "brieskorn", "subcritical"])))]
struct ChiMArgs {
    /// Boothby–Wang data `n χ(M) χ(H) c k N`.
    #[arg(long, num_args = 6, value_names = ["n", "chiM", "chiH", "c", "k", "N"], allow_negative_numbers = true)]
    bw: Option<Vec<String>>,
    /// Brieskorn sphere Σ(N, 2, …, 2) of dimension 2n − 1: `n N`.
    #[arg(long, num_args = 2, value_names = ["n", "N"])]
    brieskorn: Option<Vec<u64>>,
    /// Boundary of a subcritical Weinstein domain: `n χ(W)`.
    #[arg(long, num_args = 2, value_names = ["n", "chiW"], allow_negative_numbers = true)]
    subcritical: Option<Vec<String>>,
    /// With --bw: the m-fold cover of the boundary.
    #[arg(long, requires = "bw")]
    cover: Option<u64>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("data").required(true).args(["bw", "catalog"])))]
struct DataArgs {
    /// Boothby–Wang data `n χ(M) χ(H) c k N`.
    #[arg(long, num_args = 6, value_names = ["n", "chiM", "chiH", "c", "k", "N"], allow_negative_numbers = true)]
    bw: Option<Vec<String>>,
    /// Catalog record: `cp-hypersurface n k` or `fermat-pair n d`.
    #[arg(long, num_args = 3, value_names = ["NAME", "P1", "P2"])]
    catalog: Option<Vec<String>>,
    /// Override the period N of a catalog record.
    #[arg(long = "N", conflicts_with = "bw")]
    big_n: Option<u64>,
}

#[derive(Args)]
struct E1Args {
    #[command(flatten)]
    data: DataArgs,
    /// Number of full periods of covers.
    #[arg(long, default_value_t = 2)]
    periods: u64,
    /// Betti numbers of M, comma separated; defaults to those of a hypersurface.
    #[arg(long, value_delimiter = ',')]
    betti_m: Option<Vec<u64>>,
    /// Betti numbers of H, comma separated; defaults to those of a hypersurface.
    #[arg(long, value_delimiter = ',')]
    betti_h: Option<Vec<u64>>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    /// Grid intervals on [−C, T].
    #[arg(long, default_value_t = 10_000)]
    grid: usize,
    /// Constant A of the mapping torus shift.
    #[arg(long = "A", default_value_t = 2.0 * PI, allow_negative_numbers = true)]
    shift: f64,
}

impl ProfileArgs {
    fn config(&self) -> Result<ProfileConfig, CliError> {
        Ok(ProfileConfig::new(self.c, self.eta, self.grid)?)
    }
}

#[derive(Args)]
struct ProfileVerifyArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    /// Residual tolerance of the profile identity.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Tolerance of the exactness identity. Its residual is O(grid⁻²) and
    /// only reported unless this is given.
    #[arg(long)]
    exactness_tol: Option<f64>,
    /// Values of s sampled in the binding interpolation.
    #[arg(long, default_value_t = 21)]
    s_samples: usize,
    /// Check this f table (CSV `t,value`) instead of the built one.
    #[arg(long)]
    f_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    Rho,
    F,
    Shift,
    Alpha0H1,
    Alpha0H2,
    Alpha1H1,
    Alpha1H2,
}

#[derive(Args)]
struct ProfileTableArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[arg(long, value_enum)]
    table: TableName,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// All default records.
    List {
        /// `cp-hypersurface` or `fermat-pair`.
        #[arg(long)]
        family: Option<String>,
    },
    /// One record.
    Show {
        name: String,
        p1: u64,
        p2: u64,
        #[arg(long = "N")]
        big_n: Option<u64>,
    },
}

/// Settings shared by every subcommand.
#[derive(Clone, Copy, Debug)]
struct RunConfig {
    tolerances: Tolerances,
    format: Format,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        for (name, v) in [
            ("det-tol", cli.det_tol),
            ("kernel-tol", cli.kernel_tol),
            ("sym-tol", cli.sym_tol),
        ] {
            check_positive(name, v)?;
        }
        if cli.refine_iters == 0 {
            return Err(CliError::usage(
                "InvalidTolerance",
                "--refine-iters must be positive",
            ));
        }
        Ok(RunConfig {
            tolerances: Tolerances {
                symplectic: cli.sym_tol,
                det: cli.det_tol,
                kernel: cli.kernel_tol,
                refine_iters: cli.refine_iters,
            },
            format: cli.format,
        })
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(
            "InvalidTolerance",
            format!("--{name} must be positive, got {v}"),
        ))
    }
}

fn parse<T: FromStr>(what: &str, s: &str) -> Result<T, CliError> {
    s.parse()
        .map_err(|_| CliError::usage("InvalidArgument", format!("cannot parse {what} from `{s}`")))
}

fn parse_bw(values: &[String]) -> Result<BWData, CliError> {
    let [n, chi_m, chi_h, c, k, big_n] = values else {
        return Err(CliError::usage("InvalidArgument", "--bw takes six values"));
    };
    Ok(BWData::new(
        parse("n", n)?,
        parse::<BigInt>("χ(M)", chi_m)?,
        parse::<BigInt>("χ(H)", chi_h)?,
        parse("c", c)?,
        parse("k", k)?,
        parse("N", big_n)?,
    )?)
}

fn catalog_record(values: &[String], big_n: Option<u64>) -> Result<ExampleRecord, CliError> {
    let [name, p1, p2] = values else {
        return Err(CliError::usage(
            "InvalidArgument",
            "--catalog takes NAME P1 P2",
        ));
    };
    Ok(lookup(name, &[parse("P1", p1)?, parse("P2", p2)?], big_n)?)
}

/// The data and, for catalog records, their Betti numbers.
fn resolve(data: &DataArgs) -> Result<(BWData, Option<ExampleRecord>), CliError> {
    match (&data.bw, &data.catalog) {
        (Some(bw), _) => Ok((parse_bw(bw)?, None)),
        (None, Some(cat)) => {
            let rec = catalog_record(cat, data.big_n)?;
            Ok((rec.data.clone(), Some(rec)))
        }
        (None, None) => Err(CliError::usage(
            "InvalidArgument",
            "one of --bw or --catalog is required",
        )),
    }
}

#[derive(Serialize)]
struct MaslovReport {
    index: HalfInteger,
    crossings: Vec<CrossingRecord>,
    warnings: Vec<String>,
}

fn model_samples(crossings: u64) -> usize {
    256.max(16 * (crossings as usize + 1))
}

fn model_path(args: &MaslovArgs, model: ModelName) -> Result<SymplecticPath, CliError> {
    let path = match model {
        ModelName::Rotation => {
            let samples = args
                .samples
                .unwrap_or(model_samples(args.winding.abs().ceil() as u64));
            rotation_path(args.winding, 2.0 * PI, samples)?
        }
        ModelName::Hyperbolic => hyperbolic_path(args.rate, 1.0, args.samples.unwrap_or(256))?,
        ModelName::BwPrincipal => {
            let winding = (args.big_n as i64 * (args.c - args.k as i64)).unsigned_abs() + args.k;
            let samples = args.samples.unwrap_or(model_samples(winding));
            bw_principal_model(args.n, args.c, args.k, args.big_n, samples)?
        }
        ModelName::BwExceptional => {
            let winding = (args.c - 1).unsigned_abs() * args.m + args.m / args.big_n.max(1);
            let samples = args.samples.unwrap_or(model_samples(winding));
            bw_exceptional_model(args.n, args.c, args.big_n, args.m, samples)?
        }
    };
    Ok(path)
}

fn maslov(args: &MaslovArgs, run: &RunConfig) -> Result<Report, CliError> {
    let mut path = match (&args.file, args.model) {
        (Some(file), _) => read_path_file_with_tol(file, run.tolerances.symplectic)?,
        (None, Some(model)) => model_path(args, model)?,
        (None, None) => {
            return Err(CliError::usage(
                "InvalidArgument",
                "give a path file or --model",
            ))
        }
    };
    if let Some(m) = args.cover {
        path = iterate(&path, m)?;
    }
    let report = rs_index_with(&path, &run.tolerances)?;
    let mut warnings = Vec::new();
    for c in &report.crossings {
        if c.t <= 0.0 || c.t >= path.duration() {
            warnings.push(format!(
                "endpoint t = {} is a crossing and contributes half its signature",
                c.t
            ));
        }
        if c.kernel_dim > 1 {
            warnings.push(format!(
                "crossing at t = {} has kernel dimension {}",
                c.t, c.kernel_dim
            ));
        }
    }
    Report::new(&MaslovReport {
        index: report.index,
        crossings: report.crossings,
        warnings,
    })
}

#[derive(Serialize)]
struct ChiMReport {
    formula: &'static str,
    chi_m: Rational,
    value: f64,
}

fn chi_m(args: &ChiMArgs) -> Result<Report, CliError> {
    let (formula, chi_m) = if let Some(bw) = &args.bw {
        let d = parse_bw(bw)?;
        match args.cover {
            Some(m) => ("cover", chi_m_cover(&d, m)?),
            None => ("boothby-wang", chi_m_bw(&d)?),
        }
    } else if let Some(v) = &args.brieskorn {
        ("brieskorn", chi_m_brieskorn(v[0], v[1])?)
    } else if let Some(v) = &args.subcritical {
        (
            "subcritical",
            chi_m_subcritical(parse("n", &v[0])?, &parse("χ(W)", &v[1])?),
        )
    } else {
        return Err(CliError::usage(
            "InvalidArgument",
            "one of --bw, --brieskorn, --subcritical is required",
        ));
    };
    Report::new(&ChiMReport {
        formula,
        value: chi_m.to_f64(),
        chi_m,
    })
}

fn decide(data: &DataArgs) -> Result<Report, CliError> {
    let (d, _) = resolve(data)?;
    Report::new(&decide_triviality(&d)?)
}

fn crosscheck(data: &DataArgs) -> Result<Report, CliError> {
    let (d, _) = resolve(data)?;
    Report::new(&subcritical_crosscheck(&d)?)
}

fn powers(data: &DataArgs, n_max: u64) -> Result<Report, CliError> {
    let (d, _) = resolve(data)?;
    let report = distinct_powers(&d, n_max)?;
    let rows = Rows {
        header: vec!["N".into(), "status".into(), "nontrivial".into()],
        rows: report
            .verdicts
            .iter()
            .map(|v| {
                vec![
                    v.big_n.to_string(),
                    format!("{:?}", v.status),
                    v.status.is_nontrivial().to_string(),
                ]
            })
            .collect(),
    };
    Ok(Report::new(&report)?.with_rows(rows))
}

#[derive(Serialize)]
struct E1Report {
    data: BWData,
    periods: u64,
    page: E1Page,
    chi_m: Rational,
    chi_m_bw: Rational,
    bad_orbits: Vec<BadOrbitCheck>,
}

fn e1(args: &E1Args) -> Result<Report, CliError> {
    let (d, rec) = resolve(&args.data)?;
    let betti =
        |given: &Option<Vec<u64>>, from_rec: Option<&Vec<u64>>, dim: u64, chi: &BigInt| match (
            given, from_rec,
        ) {
            (Some(b), _) => Ok(b.clone()),
            (None, Some(b)) => Ok(b.clone()),
            (None, None) => hypersurface_betti(dim, chi),
        };
    let betti_m = betti(
        &args.betti_m,
        rec.as_ref().map(|r| &r.betti_m),
        d.n - 1,
        &d.chi_m,
    )?;
    let betti_h = betti(
        &args.betti_h,
        rec.as_ref().map(|r| &r.betti_h),
        d.n - 2,
        &d.chi_h,
    )?;
    let strata = build_e1_strata_bw(&d, &betti_h, &betti_m, args.periods)?;
    let page = e1_page(&strata)?;
    let chi_m = chi_m_from_e1(&page, &d.mu_p())?;
    let report = E1Report {
        chi_m_bw: chi_m_bw(&d)?,
        bad_orbits: bad_orbit_pairs(&strata)?,
        periods: args.periods,
        data: d,
        chi_m,
        page,
    };
    let rows = Rows {
        header: vec!["p".into(), "q".into(), "dim".into()],
        rows: report
            .page
            .entries
            .iter()
            .map(|((p, q), dim)| vec![p.to_string(), q.to_string(), dim.to_string()])
            .collect(),
    };
    let labels: Vec<String> = report
        .page
        .strata
        .iter()
        .map(|s| {
            format!(
                "{} (index {}, column {})",
                s.label,
                s.index,
                s.column().unwrap_or_default()
            )
        })
        .collect();
    let table = format!(
        "{}strata: {}\nchi_m = {}\n",
        report.page.to_table(),
        labels.join(", "),
        report.chi_m
    );
    Ok(Report::new(&report)?.with_rows(rows).with_table(table))
}

#[derive(Serialize)]
struct ShiftCheck {
    a: f64,
    min: f64,
    at_t: f64,
    positive: bool,
}

#[derive(Serialize)]
struct BindingCheck {
    s_samples: usize,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

#[derive(Serialize)]
struct ProfileVerifyReport {
    config: ProfileConfig,
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exactness_tol: Option<f64>,
    profile: Residual,
    exactness: Residual,
    shift: ShiftCheck,
    binding: BindingCheck,
    passed: bool,
}

fn read_table(path: &PathBuf) -> Result<FunctionTable, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage("Io", format!("{}: {e}", path.display())))?;
    Ok(FunctionTable::from_csv(&text)?)
}

fn profile_verify(args: &ProfileVerifyArgs) -> Result<Report, CliError> {
    check_positive("tol", args.tol)?;
    if let Some(tol) = args.exactness_tol {
        check_positive("exactness-tol", tol)?;
    }
    let cfg = args.profile.config()?;
    let rho = build_rho(&cfg)?;
    let f = match &args.f_file {
        Some(path) => read_table(path)?,
        None => twisting_profile(&rho)?,
    };
    let profile = verify_profile(&rho, &f, cfg.c)?;
    let exactness = exactness_check(&f)?;
    let shift = match mapping_torus_shift(&f, cfg.c, args.profile.shift) {
        Ok(h) => {
            let (j, &min) = h
                .values
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(y.1))
                .expect("table is non-empty");
            ShiftCheck {
                a: args.profile.shift,
                min,
                at_t: h.grid[j],
                positive: true,
            }
        }
        Err(ProfileError::NonPositiveShift { t, value }) => ShiftCheck {
            a: args.profile.shift,
            min: value,
            at_t: t,
            positive: false,
        },
        Err(e) => return Err(e.into()),
    };
    let binding = match binding_interpolation_check(&cfg, args.s_samples) {
        Ok(r) => BindingCheck {
            s_samples: r.s_samples,
            passed: r.passed,
            failure: None,
        },
        Err(e @ ProfileError::ConditionViolated { .. }) => BindingCheck {
            s_samples: args.s_samples,
            passed: false,
            failure: Some(e.to_string()),
        },
        Err(e) => return Err(e.into()),
    };
    let passed = profile.within(args.tol)
        && args.exactness_tol.is_none_or(|t| exactness.within(t))
        && shift.positive
        && binding.passed;
    Report::new(&ProfileVerifyReport {
        config: cfg,
        tol: args.tol,
        exactness_tol: args.exactness_tol,
        profile,
        exactness,
        shift,
        binding,
        passed,
    })
}

fn profile_table(args: &ProfileTableArgs) -> Result<Report, CliError> {
    let cfg = args.profile.config()?;
    let table = match args.table {
        TableName::Rho => build_rho(&cfg)?,
        TableName::F => twisting_profile(&build_rho(&cfg)?)?,
        TableName::Shift => mapping_torus_shift(
            &twisting_profile(&build_rho(&cfg)?)?,
            cfg.c,
            args.profile.shift,
        )?,
        TableName::Alpha0H1 => alpha0(&cfg)?.tables().0,
        TableName::Alpha0H2 => alpha0(&cfg)?.tables().1,
        TableName::Alpha1H1 => alpha1(&cfg)?.tables().0,
        TableName::Alpha1H2 => alpha1(&cfg)?.tables().1,
    };
    let rows = Rows {
        header: vec!["t".into(), "value".into()],
        rows: table
            .grid
            .iter()
            .zip(&table.values)
            .map(|(t, v)| vec![t.to_string(), v.to_string()])
            .collect(),
    };
    Ok(Report::new(&table)?.with_rows(rows))
}

fn record_rows(records: &[ExampleRecord]) -> Result<Rows, CliError> {
    let mut rows = Vec::new();
    for r in records {
        let data = serde_json::to_value(&r.data)
            .map_err(|e| CliError::usage("Serialization", e.to_string()))?;
        let mut row = vec![r.name.clone(), r.family.clone()];
        row.extend(
            ["n", "chi_m", "chi_h", "c", "k", "N"]
                .iter()
                .map(|k| cell(&data[*k])),
        );
        rows.push(row);
    }
    Ok(Rows {
        header: ["name", "family", "n", "chi_m", "chi_h", "c", "k", "N"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
    })
}

fn catalog(cmd: &CatalogCommand) -> Result<Report, CliError> {
    match cmd {
        CatalogCommand::List { family } => {
            let mut records = default_catalog()?;
            if let Some(f) = family {
                if f != "cp-hypersurface" && f != "fermat-pair" {
                    return Err(twistlab::catalog::CatalogError::UnknownFamily(f.clone()).into());
                }
                records.retain(|r| &r.family == f);
            }
            let rows = record_rows(&records)?;
            Ok(Report::new(&records)?.with_rows(rows))
        }
        CatalogCommand::Show {
            name,
            p1,
            p2,
            big_n,
        } => {
            let rec = lookup(name, &[*p1, *p2], *big_n)?;
            Report::new(&rec)
        }
    }
}

fn fermat_scan(n_max: u64) -> Result<Report, CliError> {
    let report = fermat_nonvanishing_scan(n_max)?;
    let rows = Rows {
        header: [
            "n",
            "f_at_2",
            "f_at_n_minus_1",
            "f_at_n",
            "f_at_2_sign",
            "derivative_sign",
            "values",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows: report
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.f_at_2_identity.to_string(),
                    r.f_at_n_minus_1_identity.to_string(),
                    r.f_at_n_identity.to_string(),
                    r.f_at_2_sign.to_string(),
                    r.derivative_sign.to_string(),
                    r.values.join(";"),
                ]
            })
            .collect(),
    };
    Ok(Report::new(&report)?.with_rows(rows))
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let config = RunConfig::from_cli(cli)?;
    let report = match &cli.command {
        Command::Maslov(args) => maslov(args, &config)?,
        Command::ChiM(args) => chi_m(args)?,
        Command::Decide(data) => decide(data)?,
        Command::E1(args) => e1(args)?,
        Command::ProfileVerify(args) => profile_verify(args)?,
        Command::ProfileTable(args) => profile_table(args)?,
        Command::Catalog(cmd) => catalog(cmd)?,
        Command::FermatScan { n_max } => fermat_scan(*n_max)?,
        Command::Powers { data, n_max } => powers(data, *n_max)?,
        Command::Crosscheck(data) => crosscheck(data)?,
    };
    Ok(report.render(config.format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::usage("Usage", e.render().to_string().trim_end());
            eprintln!("{}", err.envelope());
            return ExitCode::from(err.exit_code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.envelope());
            ExitCode::from(err.exit_code)
        }
    }
}
