//! The `opkit` command line: argument parsing, commands and exit codes.
//!
//! Exit codes: 0 success, 1 verification or property failure, 2 unreadable
//! input or bad flags, 3 well-formed but invalid input.

use std::fs;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use opkit_core::atoms::symbolic_kato;
use opkit_core::chains::EventualSeq;
use opkit_core::format::{emit_certificate, emit_report, emit_structural, parse_certificate, Operator};
use opkit_core::invariants::{ExtNat, InvariantReport};
use opkit_core::kato::{kato_decompose, verify_certificate};
use opkit_core::props::{registry, run_suite, MatrixCase, Outcome, Property, SuiteConfig, SuiteSummary};
use opkit_core::Error;

/// `writeln!` to the command's stdout, ignoring a closed pipe.
macro_rules! outln {
    ($io:expr, $($arg:tt)*) => {{
        let _ = writeln!($io.out, $($arg)*);
    }};
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_SEMANTIC: u8 = 3;

#[derive(Parser)]
#[command(name = "opkit", version, about = "Exact invariants and Kato decompositions of operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant report of an operator file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decompose an operator and write the certificate.
    Decompose {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Reject atom trees instead of writing a structural report.
        #[arg(long)]
        strict_finite: bool,
    },
    /// Check a certificate against an operator from scratch.
    Verify { file: PathBuf, cert: PathBuf },
    /// Run the seeded property suite.
    Props {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u16).range(1..))]
        max_dim: u16,
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        with_broken_fixture: bool,
    },
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_parse() { EXIT_PARSE } else { EXIT_SEMANTIC },
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

struct Style {
    enabled: bool,
}

impl Style {
    fn paint(&self, text: &str, ansi: &str) -> String {
        if self.enabled {
            format!("\x1b[{ansi}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn verdict(&self, ok: bool) -> String {
        if ok {
            self.paint("PASS", "32")
        } else {
            self.paint("FAIL", "31")
        }
    }

    fn bold(&self, text: &str) -> String {
        self.paint(text, "1")
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    style: Style,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure {
        code: EXIT_SEMANTIC,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn load_operator(path: &Path) -> Result<Operator, Failure> {
    Operator::parse(&read(path)?).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })
}

fn show_seq(s: &EventualSeq<ExtNat>) -> String {
    let items: Vec<String> = s.prefix().iter().map(ToString::to_string).collect();
    format!("{}, {}, ...", items.join(", "), s.limit())
}

fn show_opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

fn print_report(io: &mut Io, model: &str, r: &InvariantReport) {
    let k: Vec<String> = r.k.iter().map(ToString::to_string).collect();
    let rows = [
        ("model", model.to_string()),
        ("dim", r.dim.to_string()),
        ("alpha", show_seq(&r.alpha)),
        ("beta", show_seq(&r.beta)),
        ("k", format!("[{}]", k.join(", "))),
        ("dis", r.dis.to_string()),
        ("v", r.v.to_string()),
        ("m_T", r.m_t.to_string()),
        ("a_e", r.a_e.to_string()),
        ("d_e", r.d_e.to_string()),
        ("ascent", r.ascent.to_string()),
        ("descent", r.descent.to_string()),
        ("jump", show_opt(r.jump)),
        ("index", show_opt(r.index)),
    ];
    for (name, value) in rows {
        outln!(io, "{:<22} {value}", io.style.bold(name));
    }
    let f = &r.flags;
    let flags = [
        ("semi_regular", Some(f.semi_regular)),
        ("quasi_fredholm", Some(f.quasi_fredholm)),
        ("upper_semi_fredholm", Some(f.upper_semi_fredholm)),
        ("lower_semi_fredholm", Some(f.lower_semi_fredholm)),
        ("upper_semi_b_fredholm", Some(f.upper_semi_b_fredholm)),
        ("lower_semi_b_fredholm", Some(f.lower_semi_b_fredholm)),
        ("semi_b_fredholm", Some(f.semi_b_fredholm)),
        ("b_fredholm", Some(f.b_fredholm)),
        ("fredholm", Some(f.fredholm)),
        ("drazin_invertible", Some(f.drazin_invertible)),
        ("nilpotent", f.nilpotent),
        ("ranges_closed", Some(f.ranges_closed)),
    ];
    for (name, value) in flags {
        outln!(io, "{:<22} {}", io.style.bold(name), show_opt(value));
    }
}

fn analyze(io: &mut Io, file: &Path, json: bool) -> CmdResult {
    let op = load_operator(file)?;
    let report = op.report()?;
    if json {
        outln!(io, "{}", emit_report(&op, &report));
    } else {
        print_report(io, op.model(), &report);
    }
    Ok(0)
}

fn decompose(io: &mut Io, file: &Path, output: &Path, strict_finite: bool) -> CmdResult {
    match load_operator(file)? {
        Operator::Finite(t) => {
            let cert = kato_decompose(&t)?;
            write(output, &emit_certificate(&cert))?;
            outln!(io, 
                "dim M = {}, dim N = {}, d = {}, k = {}",
                cert.m_basis.dim(),
                cert.n_basis.dim(),
                cert.degree,
                cert.iterations
            );
        }
        Operator::Symbolic(_) if strict_finite => {
            return Err(Failure {
                code: EXIT_SEMANTIC,
                message: "operator is an atom tree; --strict-finite requires a finite matrix".into(),
            });
        }
        Operator::Symbolic(tree) => {
            let k = symbolic_kato(&tree)?;
            write(output, &emit_structural(&k))?;
            outln!(io, "structural report (atom tree, not a verifiable certificate)");
            outln!(io, 
                "dim M = {}, dim N = {}, d = {}, ind(T) = {}, ind(T_M) = {}",
                k.dim_m,
                k.dim_n,
                k.degree,
                show_opt(k.index_t),
                show_opt(k.index_m)
            );
            if !k.nilpotent_part_finite {
                outln!(io, "note: N is infinite-dimensional (zero_inf summand)");
            }
        }
    }
    Ok(0)
}

fn verify(io: &mut Io, file: &Path, cert_path: &Path) -> CmdResult {
    let Operator::Finite(t) = load_operator(file)? else {
        return Err(Failure {
            code: EXIT_SEMANTIC,
            message: "verification needs a finite matrix operator".into(),
        });
    };
    let cert = parse_certificate(&read(cert_path)?).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", cert_path.display(), f.message),
            ..f
        }
    })?;
    let report = verify_certificate(&t, &cert);
    for c in &report.checks {
        outln!(io, "{} {:<18} {}", io.style.verdict(c.passed), c.name, c.detail);
    }
    if report.all_passed() {
        Ok(0)
    } else {
        outln!(io, "failed checks: {}", report.failed().join(", "));
        Ok(EXIT_FAILED)
    }
}

fn broken_fixture(_: &MatrixCase) -> Outcome {
    Err("deliberately broken fixture property".into())
}

fn print_summary(io: &mut Io, s: &SuiteSummary) {
    outln!(io, "seed {} trials {} max-dim {}", s.seed, s.trials, s.max_dim);
    for p in &s.properties {
        outln!(io, 
            "{} {:<28} {:>4}/{:<4} passed ({} n/a)",
            io.style.verdict(p.failed == 0),
            p.name,
            p.passed,
            p.checked,
            p.not_applicable
        );
    }
    for p in &s.properties {
        if let Some(f) = &p.first_failure {
            outln!(io, 
                "{}: first failure at trial {} (instance seed {:#018x}): {}",
                p.name, f.trial, f.instance_seed, f.message
            );
            outln!(io, "  reproduce: {}", f.reproduce);
        }
    }
}

fn props(io: &mut Io, cfg: SuiteConfig, json: bool, broken: bool) -> CmdResult {
    let mut props = registry();
    if broken {
        props.push(Property::matrix("fixture-broken", broken_fixture));
    }
    let summary = run_suite(&cfg, &props)?;
    for w in &summary.warnings {
        let _ = writeln!(io.err, "warning: {w}");
    }
    if json {
        outln!(io, "{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    } else {
        print_summary(io, &summary);
    }
    Ok(if summary.all_passed { 0 } else { EXIT_FAILED })
}

/// Runs one `opkit` invocation; `args` includes the program name.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_PARSE
                }
            };
        }
    };
    let mut io = Io {
        out,
        err,
        style: Style { enabled: color },
    };
    let io = &mut io;
    let result = match cli.command {
        Command::Analyze { file, json } => analyze(io, &file, json),
        Command::Decompose {
            file,
            output,
            strict_finite,
        } => decompose(io, &file, &output, strict_finite),
        Command::Verify { file, cert } => verify(io, &file, &cert),
        Command::Props {
            seed,
            trials,
            max_dim,
            json,
            with_broken_fixture,
        } => {
            let cfg = SuiteConfig {
                seed,
                trials,
                max_dim: max_dim as usize,
            };
            props(io, cfg, json, with_broken_fixture)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            f.code
        }
    }
}
