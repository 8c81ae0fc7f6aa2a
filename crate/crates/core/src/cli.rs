//! Command-line front end. [`run`] parses arguments, dispatches, and writes
//! one report: a provenance header followed by the result, as plain text,
//! LaTeX or a JSON document.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::exactalg::{series_of_ratfn, series_of_ratfn_at, DirichletTrunc, RationalFn, Scalar};
use crate::gzeta::{self, GzetaError, QChoice, SplittingData};
use crate::lattice::{parse_lattice_str, LatticeFileError, LieLattice};
use crate::limits::Limits;
use crate::poincare::{self, PoincareError, ProbeStatus};
use crate::qcomb::{self, OrderedSubset, QcombError, SvMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "repzeta", version, about = "Representation zeta functions of 2-nilpotent Lie lattices")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for enumerations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Lift the default caps on enumeration sizes.
    #[arg(long, global = true)]
    pub unsafe_limits: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LocalForm {
    Additive,
    Multiplicative,
    Product,
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    #[value(name = "sv-1.5")]
    Sv,
    Translation,
    RankCount,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Symbolic,
    Random,
}

#[derive(Args, Debug, Clone)]
pub struct Family {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct LatticeAtPrime {
    /// Lattice file (JSON).
    #[arg(long)]
    pub lattice: PathBuf,
    #[arg(long)]
    pub p: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Local zeta function of G_{m x n}.
    LocalZeta {
        #[command(flatten)]
        family: Family,
        /// Specialise q to this prime.
        #[arg(long, conflicts_with = "symbolic")]
        q: Option<u64>,
        /// Keep q symbolic (the default).
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value_t = LocalForm::Multiplicative)]
        form: LocalForm,
        /// Truncation order for `--form series`.
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Global zeta function of G_{m x n} over a number field.
    GlobalZeta {
        #[command(flatten)]
        family: Family,
        /// Only `Q` is built in.
        #[arg(long, conflicts_with = "splitting")]
        field: Option<String>,
        /// Residue-field cardinalities, one per line.
        #[arg(long)]
        splitting: Option<PathBuf>,
        /// Evaluate the truncated Euler product at this rational s.
        #[arg(long, conflicts_with = "coeffs")]
        eval: Option<String>,
        /// Places with residue cardinality below this bound.
        #[arg(long)]
        places: Option<u64>,
        /// Dirichlet coefficients a_1 .. a_K.
        #[arg(long)]
        coeffs: Option<usize>,
    },
    /// Topological zeta function of G_{m x n}.
    Topological {
        #[command(flatten)]
        family: Family,
    },
    /// Local zeta function of the k-fold central product of G_{m x n}.
    CentralProduct {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        k: u32,
    },
    /// Check one of the q-series identities.
    VerifyIdentity {
        #[arg(long, value_enum)]
        id: Identity,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        /// Subset of [j-1]_0 for `translation`, e.g. `0,2` (default: all).
        #[arg(long)]
        subset: Option<String>,
        /// Prime for `rank-count`.
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, value_enum, default_value_t = CheckMode::Symbolic)]
        mode: CheckMode,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Poincare series by direct enumeration.
    PoincareBrute {
        #[command(flatten)]
        target: LatticeAtPrime,
        #[arg(long)]
        max_weight: u32,
    },
    /// Poincare series assembled from kernel classes.
    ThmTech {
        #[command(flatten)]
        target: LatticeAtPrime,
    },
    /// Abscissa invariant of a lattice.
    Alpha {
        #[command(flatten)]
        target: LatticeAtPrime,
    },
    /// Finite check of geometric smoothness of the rank loci.
    Smoothness {
        #[command(flatten)]
        target: LatticeAtPrime,
    },
}

/// A failed run: exit code and message.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<PoincareError> for Failure {
    fn from(e: PoincareError) -> Self {
        let code = match e {
            PoincareError::TooLarge(_) => EXIT_TOO_LARGE,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<GzetaError> for Failure {
    fn from(e: GzetaError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<QcombError> for Failure {
    fn from(e: QcombError) -> Self {
        let code = match e {
            QcombError::TooLarge(_) => EXIT_TOO_LARGE,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<LatticeFileError> for Failure {
    fn from(e: LatticeFileError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<crate::exactalg::ExactError> for Failure {
    fn from(e: crate::exactalg::ExactError) -> Self {
        Failure::usage(e.to_string())
    }
}

/// One result value: canonical text, plus LaTeX where it differs.
#[derive(Clone, Debug, Serialize)]
struct Item {
    key: String,
    text: String,
    #[serde(skip)]
    latex: Option<String>,
}

#[derive(Debug, Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    input_sha256: String,
    parameters: Vec<(String, String)>,
}

#[derive(Debug, Default)]
struct Report {
    items: Vec<Item>,
    probe: Option<String>,
    exit: i32,
}

impl Report {
    fn text(&mut self, key: &str, value: impl ToString) {
        self.items.push(Item {
            key: key.into(),
            text: value.to_string(),
            latex: None,
        });
    }

    fn ratfn(&mut self, key: &str, f: &RationalFn) {
        self.items.push(Item {
            key: key.into(),
            text: f.to_string(),
            latex: Some(f.to_latex()),
        });
    }
}

struct Context {
    limits: Limits,
    seed: u64,
    params: Vec<(String, String)>,
    /// Bytes of every input file, in the order they were read.
    inputs: Vec<u8>,
}

impl Context {
    fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        self.inputs.extend_from_slice(&bytes);
        String::from_utf8(bytes).map_err(|_| Failure::usage(format!("{}: not UTF-8", path.display())))
    }

    fn lattice(&mut self, path: &Path) -> Result<LieLattice, Failure> {
        let text = self.read(path)?;
        let l = parse_lattice_str(&text)?;
        self.param("lattice", l.name());
        self.param("lattice_sha256", sha256_hex(text.as_bytes()));
        Ok(l)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::LocalZeta { .. } => "local-zeta",
        Command::GlobalZeta { .. } => "global-zeta",
        Command::Topological { .. } => "topological",
        Command::CentralProduct { .. } => "central-product",
        Command::VerifyIdentity { .. } => "verify-identity",
        Command::PoincareBrute { .. } => "poincare-brute",
        Command::ThmTech { .. } => "thm-tech",
        Command::Alpha { .. } => "alpha",
        Command::Smoothness { .. } => "smoothness",
    }
}

/// Parses `args` (including the program name), runs, and writes the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = out.write_all(rendered.as_bytes());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        EXIT_OK
                    }
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    run_cli(&cli, out, err)
}

pub fn run_cli(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut ctx = Context {
        limits: if cli.unsafe_limits { Limits::unlimited() } else { Limits::default() },
        seed: cli.seed,
        params: Vec::new(),
        inputs: Vec::new(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(&cli.command, &mut ctx));
    match result {
        Ok(report) => {
            let name = command_name(&cli.command);
            let mut hashed = format!("{name}\n");
            for (k, v) in &ctx.params {
                hashed.push_str(&format!("{k}={v}\n"));
            }
            let mut bytes = hashed.into_bytes();
            bytes.extend_from_slice(&ctx.inputs);
            let prov = Provenance {
                tool: "repzeta",
                version: env!("CARGO_PKG_VERSION"),
                command: name,
                input_sha256: sha256_hex(&bytes),
                parameters: ctx.params,
            };
            let rendered = render(cli.format, &prov, &report);
            let _ = out.write_all(rendered.as_bytes());
            report.exit
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn render(format: Format, prov: &Provenance, report: &Report) -> String {
    let params: Vec<String> = prov.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    match format {
        Format::Structured => {
            let doc = serde_json::json!({
                "inputs": prov.parameters.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect::<serde_json::Map<_, _>>(),
                "result": report.items.iter().map(|i| (i.key.clone(), serde_json::Value::String(i.text.clone()))).collect::<serde_json::Map<_, _>>(),
                "provenance": {
                    "tool": prov.tool,
                    "version": prov.version,
                    "command": prov.command,
                    "input_sha256": prov.input_sha256,
                },
                "probe": report.probe,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text | Format::Latex => {
            let c = if format == Format::Latex { "%" } else { "#" };
            let mut s = format!("{c} {} {}\n{c} command: {}\n", prov.tool, prov.version, prov.command);
            s.push_str(&format!("{c} parameters: {}\n", params.join(" ")));
            s.push_str(&format!("{c} input-sha256: {}\n", prov.input_sha256));
            if let Some(p) = &report.probe {
                s.push_str(&format!("{c} smoothness-probe: {p}\n"));
            }
            let single = report.items.len() == 1;
            for item in &report.items {
                let value = match (format, &item.latex) {
                    (Format::Latex, Some(l)) => l.as_str(),
                    _ => item.text.as_str(),
                };
                if single {
                    s.push_str(value);
                } else {
                    s.push_str(&format!("{} = {value}", item.key));
                }
                s.push('\n');
            }
            s
        }
    }
}

fn dispatch(command: &Command, ctx: &mut Context) -> Result<Report, Failure> {
    match command {
        Command::LocalZeta {
            family,
            q,
            symbolic: _,
            form,
            order,
        } => local_zeta(ctx, family, *q, *form, *order),
        Command::GlobalZeta {
            family,
            field,
            splitting,
            eval,
            places,
            coeffs,
        } => global_zeta(ctx, family, field.as_deref(), splitting.as_deref(), eval.as_deref(), *places, *coeffs),
        Command::Topological { family } => {
            let (m, n) = family_params(ctx, family)?;
            let mut r = Report::default();
            r.ratfn("zeta", &gzeta::topological(m, n)?);
            Ok(r)
        }
        Command::CentralProduct { family, k } => {
            let (m, n) = family_params(ctx, family)?;
            ctx.param("k", k);
            let f = gzeta::central_product(&gzeta::local_product_form(m, n), *k)?;
            let mut r = Report::default();
            r.text("zeta", &f);
            r.text("local_abscissa", gzeta::abscissa_from_factorization(&f)?);
            r.text("global_abscissa", gzeta::global_abscissa(&f)?);
            Ok(r)
        }
        Command::VerifyIdentity {
            id,
            j,
            a,
            i,
            subset,
            p,
            mode,
            trials,
        } => verify_identity(ctx, *id, *j, *a, *i, subset.as_deref(), *p, *mode, *trials),
        Command::PoincareBrute { target, max_weight } => {
            let l = ctx.lattice(&target.lattice)?;
            ctx.param("p", target.p);
            ctx.param("max_weight", max_weight);
            let s = poincare::brute_poincare(&l, target.p, *max_weight, &ctx.limits)?;
            let mut r = Report::default();
            r.text("series", series_text(&s));
            let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
            r.text("coeffs", format!("[{}]", coeffs.join(", ")));
            Ok(r)
        }
        Command::ThmTech { target } => {
            let l = ctx.lattice(&target.lattice)?;
            ctx.param("p", target.p);
            let t = poincare::thm_tech_eval(&l, target.p, &ctx.limits)?;
            let mut r = Report::default();
            r.ratfn("zeta", &t.zeta);
            for c in &t.classes {
                r.text(
                    &format!("class(d_c={}, d'_c={})", c.d_c, c.d_prime_c),
                    format!("{} point(s)", c.members),
                );
            }
            r.probe = Some(t.probe.to_string());
            Ok(r)
        }
        Command::Alpha { target } => {
            let l = ctx.lattice(&target.lattice)?;
            ctx.param("p", target.p);
            let mut r = Report::default();
            match poincare::alpha(&l, target.p, &ctx.limits) {
                Ok(a) => {
                    r.text("alpha", &a.alpha);
                    r.text("witness", point_text(&a.witness));
                }
                Err(PoincareError::NoAdmissibleOmega) => {
                    r.text("alpha", "none");
                    r.text("reason", PoincareError::NoAdmissibleOmega);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(r)
        }
        Command::Smoothness { target } => {
            let l = ctx.lattice(&target.lattice)?;
            ctx.param("p", target.p);
            let rep = poincare::smoothness_probe(&l, target.p, &ctx.limits)?;
            let mut r = Report::default();
            r.text("status", rep.label());
            r.text("detail", &rep);
            if let ProbeStatus::Fail { .. } = rep.status {
                r.exit = EXIT_FALSIFIED;
            }
            Ok(r)
        }
    }
}

fn family_params(ctx: &mut Context, family: &Family) -> Result<(usize, usize), Failure> {
    if family.m == 0 || family.n == 0 {
        return Err(Failure::usage("--m and --n must be positive"));
    }
    let (m, n) = gzeta::normalize_mn(family.m, family.n);
    ctx.param("m", m);
    ctx.param("n", n);
    Ok((m, n))
}

fn check_prime(p: u64) -> Result<(), Failure> {
    if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Failure::usage(format!("{p} is not a prime")));
    }
    Ok(())
}

fn point_text(x: &[u64]) -> String {
    let parts: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn series_text(s: &DirichletTrunc) -> String {
    let body = s.to_poly().to_string();
    format!("{body} + O(t^{})", s.order() + 1)
}

fn local_zeta(ctx: &mut Context, family: &Family, q: Option<u64>, form: LocalForm, order: usize) -> Result<Report, Failure> {
    let (m, n) = family_params(ctx, family)?;
    let choice = match q {
        Some(p) => {
            check_prime(p)?;
            ctx.param("q", p);
            QChoice::Prime(p)
        }
        None => {
            ctx.param("q", "symbolic");
            QChoice::Symbolic
        }
    };
    ctx.param("form", format!("{form:?}").to_lowercase());
    let mut r = Report::default();
    match form {
        LocalForm::Additive => r.ratfn("zeta", &gzeta::local_additive(m, n, choice)?),
        LocalForm::Multiplicative => r.ratfn("zeta", &gzeta::local_multiplicative(m, n, choice)?),
        LocalForm::Product => {
            let f = gzeta::local_product_form(m, n);
            match choice {
                QChoice::Symbolic => r.text("zeta", &f),
                QChoice::Prime(p) => {
                    let g = f.to_ratfn()?.eval_var(crate::exactalg::Var::Q, &Scalar::from_integer(p.into()))?;
                    r.ratfn("zeta", &g.normalize_sign());
                }
            }
        }
        LocalForm::Series => {
            ctx.param("order", order);
            let f = gzeta::local_multiplicative(m, n, QChoice::Symbolic)?;
            let s = match choice {
                QChoice::Symbolic => series_of_ratfn(&f, order)?,
                QChoice::Prime(p) => series_of_ratfn_at(&f, p, order)?,
            };
            r.text("zeta", series_text(&s));
        }
    }
    Ok(r)
}

fn global_zeta(
    ctx: &mut Context,
    family: &Family,
    field: Option<&str>,
    splitting: Option<&Path>,
    eval: Option<&str>,
    places: Option<u64>,
    coeffs: Option<usize>,
) -> Result<Report, Failure> {
    let (m, n) = family_params(ctx, family)?;
    let split = match (field, splitting) {
        (_, Some(path)) => {
            ctx.param("splitting", path.display());
            let text = ctx.read(path)?;
            Some(SplittingData::parse(&text)?)
        }
        (Some(f), None) if f != "Q" => {
            return Err(Failure::usage(format!("unknown field '{f}': only Q is built in; use --splitting for others")));
        }
        _ => {
            ctx.param("field", "Q");
            None
        }
    };
    let local = gzeta::local_product_form(m, n);
    let mut r = Report::default();
    if let Some(k) = coeffs {
        ctx.param("coeffs", k);
        let a = match &split {
            None => gzeta::global_dirichlet_coeffs(m, n, k)?,
            Some(s) => gzeta::global_dirichlet_coeffs_split(m, n, s, k)?,
        };
        for (i, c) in a.iter().enumerate().skip(1) {
            r.text(&format!("a_{i}"), c);
        }
        return Ok(r);
    }
    if let Some(s) = eval {
        let s: Scalar = s.trim().parse().map_err(|_| Failure::usage(format!("--eval: '{s}' is not a rational number")))?;
        ctx.param("s", &s);
        let limit = places.unwrap_or(1000);
        ctx.param("places_below", limit);
        let data = match split {
            None => SplittingData::rational_primes_below(limit),
            Some(sd) => SplittingData::new(sd.cardinalities().iter().copied().filter(|&q| q < limit).collect())?,
        };
        let v = gzeta::global_euler(m, n, &data, &s)?;
        r.text("places", v.places);
        r.text("approx", format!("{:.15e}", v.approx));
        r.text("error_bound", format!("{:.3e}", v.error_bound));
        if let Some(x) = &v.exact {
            let text = x.to_string();
            if text.len() <= 2000 {
                r.text("exact", text);
            } else {
                r.text("exact_sha256", sha256_hex(text.as_bytes()));
            }
        }
        return Ok(r);
    }
    r.text("local_factor", &local);
    r.text("global_abscissa", gzeta::global_abscissa(&local)?);
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn verify_identity(
    ctx: &mut Context,
    id: Identity,
    j: Option<usize>,
    a: Option<usize>,
    i: Option<usize>,
    subset: Option<&str>,
    p: u64,
    mode: CheckMode,
    trials: usize,
) -> Result<Report, Failure> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::usage(format!("--{flag} is required for this identity")));
    let mut r = Report::default();
    let mut all = true;
    match id {
        Identity::Sv => {
            let j = need(j, "j")?;
            ctx.param("id", "sv-1.5");
            ctx.param("j", j);
            match mode {
                CheckMode::Symbolic => {
                    ctx.param("mode", "symbolic");
                    all = qcomb::verify_sv_identity(j, &SvMode::Symbolic)?;
                    r.text("symbolic", all);
                }
                CheckMode::Random => {
                    ctx.param("mode", "random");
                    ctx.param("trials", trials);
                    ctx.param("seed", ctx.seed);
                    let results = qcomb::verify_sv_identity_random(j, trials, ctx.seed)?;
                    let held = results.iter().filter(|t| t.holds).count();
                    all = held == results.len();
                    r.text("trials_passed", format!("{held}/{}", results.len()));
                    if let Some(bad) = results.iter().find(|t| !t.holds) {
                        r.text("counterexample", format!("X = {}, Y = {}, Z = {}", bad.point[0], bad.point[1], bad.point[2]));
                    }
                }
            }
        }
        Identity::Translation => {
            let j = need(j, "j")?;
            let a = need(a, "a")?;
            ctx.param("id", "translation");
            ctx.param("j", j);
            ctx.param("a", a);
            let subsets = match subset {
                Some(text) => {
                    let elements = text
                        .split(',')
                        .map(|x| x.trim())
                        .filter(|x| !x.is_empty())
                        .map(|x| x.parse::<usize>().map_err(|_| Failure::usage(format!("--subset: '{x}' is not an index"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let s = OrderedSubset::new(elements, j)?;
                    ctx.param("subset", &s);
                    vec![s]
                }
                None => OrderedSubset::all(j),
            };
            let mut held = 0;
            for s in &subsets {
                if qcomb::verify_translation_lemma(a, j, s)? {
                    held += 1;
                } else {
                    all = false;
                    r.text("counterexample", s);
                }
            }
            r.text("subsets_passed", format!("{held}/{}", subsets.len()));
        }
        Identity::RankCount => {
            let i = need(i, "i")?;
            let j = need(j, "j")?;
            check_prime(p)?;
            ctx.param("id", "rank-count");
            ctx.param("i", i);
            ctx.param("j", j);
            ctx.param("p", p);
            for rank in 0..=i.min(j) as u32 {
                let formula = qcomb::rank_count_at(i as u32, j as u32, rank, p)?;
                let brute = qcomb::brute_rank_count(i as u32, j as u32, rank, p, &ctx.limits)?;
                let ok = formula == BigInt::from(brute);
                all &= ok;
                r.text(&format!("rank_{rank}"), format!("formula {formula}, enumeration {brute}{}", if ok { "" } else { " MISMATCH" }));
            }
        }
    }
    r.items.insert(
        0,
        Item {
            key: "verified".into(),
            text: all.to_string(),
            latex: None,
        },
    );
    if !all {
        r.exit = EXIT_FALSIFIED;
    }
    Ok(r)
}
