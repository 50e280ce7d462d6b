//! Command-line front end: pattern sums, the closed-form table, theta
//! characters, the genericity solver, and the numeric Gauss-sum checks, with
//! reproducible text or JSON output on stdout and diagnostics on stderr.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use whittaker_core::deduce::{solve_genericity, SolveOptions};
use whittaker_core::ffgauss;
use whittaker_core::g2_tables::{self, EtaLabel};
use whittaker_core::gl_whittaker::{self, DEFAULT_MAX_RANK};
use whittaker_core::gtpatterns;
use whittaker_core::intertwiner::GroupSpec;
use whittaker_core::qring::{
    parse_rat, substitute, CharacterAssignment, CharacterValue, Torsion,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "whit",
    version,
    about = "Exact Whittaker values on metaplectic covers and the characters that kill them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Gl,
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Pairing,
    Jacobi,
    G234,
}

#[derive(Args)]
struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Whittaker value at the identity for a degree-r cover of GL(n).
    Gl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        /// Enumeration guard on the rank.
        #[arg(long, default_value_t = DEFAULT_MAX_RANK)]
        max_rank: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Closed-form value for a degree-r cover of the exceptional group.
    G2 {
        #[arg(long)]
        r: u32,
        /// Torus coset: `e`, `eta(a,b)`, or `(a,b)`.
        #[arg(long, default_value = "e", value_parser = parse_eta)]
        eta: EtaLabel,
        /// Evaluate at a character: `theta` or `chi1=2/5,chi2=1/5`
        /// with optional torsion parts `zeta1=N:k`, `zeta2=N:k`.
        #[arg(long, value_parser = parse_eval)]
        eval: Option<EvalSpec>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// The distinguished (theta) character exponents for a degree-r cover.
    Theta {
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Solve for the unramified characters with no nonzero Whittaker
    /// functional.
    Deduce {
        #[arg(long, value_enum)]
        group: GroupArg,
        /// Rank (required for gl).
        #[arg(long, required_if_eq("group", "gl"))]
        n: Option<usize>,
        #[arg(long)]
        r: u32,
        /// Longest Weyl word to use (default: the whole group).
        #[arg(long)]
        max_word_len: Option<usize>,
        /// Include human-readable deduction traces in text output.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Numeric finite-field Gauss/Jacobi sum checks.
    Ffgauss {
        #[arg(long)]
        prime: u64,
        /// Character order (ignored for the g234 check, which fixes 9).
        #[arg(long, default_value_t = 9)]
        order: u64,
        #[arg(long, value_enum)]
        check: CheckArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// All supported patterns for a rank and degree, with statistics.
    DumpPatterns {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        format: FormatArg,
    },
    /// The full closed-form table with stable row labels.
    ExportTables {
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Clone, Debug)]
enum EvalSpec {
    Theta,
    Explicit(Vec<(usize, CharacterValue)>),
}

fn parse_eta(s: &str) -> Result<EtaLabel, String> {
    EtaLabel::parse(s).ok_or_else(|| format!("cannot parse eta label `{s}`"))
}

fn parse_eval(s: &str) -> Result<EvalSpec, String> {
    let s = s.trim();
    if s == "theta" {
        return Ok(EvalSpec::Theta);
    }
    let mut values: Vec<(usize, CharacterValue)> = Vec::new();
    let mut torsions: Vec<(usize, Torsion)> = Vec::new();
    for part in s.split(',') {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value in `{part}`"))?;
        let key = key.trim();
        if let Some(idx) = key.strip_prefix("chi") {
            let i: usize = idx.parse().map_err(|_| format!("bad variable `{key}`"))?;
            if i == 0 {
                return Err(format!("bad variable `{key}`"));
            }
            let e = parse_rat(val).ok_or_else(|| format!("bad exponent `{val}`"))?;
            values.push((i - 1, CharacterValue::q_power(e)));
        } else if let Some(idx) = key.strip_prefix("zeta") {
            let i: usize = idx.parse().map_err(|_| format!("bad variable `{key}`"))?;
            if i == 0 {
                return Err(format!("bad variable `{key}`"));
            }
            let (n, k) = val
                .split_once(':')
                .ok_or_else(|| format!("torsion must be N:k, got `{val}`"))?;
            let n: i64 = n.parse().map_err(|_| format!("bad torsion order `{n}`"))?;
            let k: i64 = k.parse().map_err(|_| format!("bad torsion power `{k}`"))?;
            let t = Torsion::new(n, k).map_err(|e| e.to_string())?;
            torsions.push((i - 1, t));
        } else {
            return Err(format!("unknown key `{key}`"));
        }
    }
    for (i, t) in torsions {
        let slot = values
            .iter_mut()
            .find(|(j, _)| *j == i)
            .ok_or_else(|| format!("zeta{} given without chi{}", i + 1, i + 1))?;
        slot.1.torsion = t;
    }
    if values.is_empty() {
        return Err("empty evaluation point".to_string());
    }
    Ok(EvalSpec::Explicit(values))
}

fn rat_str(r: whittaker_core::qring::Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn run() -> Result<String, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gl {
            n,
            r,
            max_rank,
            format,
        } => {
            let report =
                gl_whittaker::whittaker_gl_report(n, r, max_rank).map_err(|e| e.to_string())?;
            let payload = json!({
                "version": VERSION,
                "n": report.n,
                "r": report.r,
                "polynomial": report.polynomial.to_string(),
                "terms": report.polynomial.to_json(),
                "pattern_count": report.pattern_count,
                "supported_count": report.supported_count,
                "nonzero_count": report.nonzero_count,
                "verified_scope": report.verified_scope,
            });
            let text = format!(
                "W(n={}, r={}) = {}\npatterns: {} total, {} supported, {} nonzero{}",
                report.n,
                report.r,
                report.polynomial,
                report.pattern_count,
                report.supported_count,
                report.nonzero_count,
                if report.verified_scope {
                    ""
                } else {
                    "\nnote: beyond verified scope (r < n-1), exploration only"
                }
            );
            Ok(render(payload, text, format.format))
        }
        Command::G2 {
            r,
            eta,
            eval,
            format,
        } => {
            let entry = g2_tables::lookup(r, eta).map_err(|e| e.to_string())?;
            let expanded = entry.expanded();
            let mut payload = json!({
                "version": VERSION,
                "r": entry.r,
                "eta": entry.eta.to_string(),
                "label": entry.label,
                "factors": entry.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "factors_terms": entry.factors.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
                "polynomial": expanded.to_string(),
                "terms": expanded.to_json(),
                "convergence_note": entry.convergence_note,
            });
            let mut text = format!(
                "W(r={}, eta={}) = {}\nfactored: {}",
                entry.r,
                entry.eta,
                expanded,
                entry
                    .factors
                    .iter()
                    .map(|f| format!("[{f}]"))
                    .collect::<Vec<_>>()
                    .join(" * ")
            );
            if let Some(spec) = eval {
                let assignment = match spec {
                    EvalSpec::Theta => g2_tables::theta_assignment(r).map_err(|e| e.to_string())?,
                    EvalSpec::Explicit(values) => {
                        let mut a = CharacterAssignment::new(2);
                        for (i, v) in values {
                            if i >= 2 {
                                return Err(format!("variable chi{} out of range", i + 1));
                            }
                            a.set(i, v);
                        }
                        a
                    }
                };
                let value = substitute(&expanded, &assignment).map_err(|e| e.to_string())?;
                let point: Vec<String> = (0..2)
                    .map(|i| match assignment.get(i) {
                        Some(v) if v.torsion.is_zero() => format!("q^({})", v.q_exp),
                        Some(v) => format!("{}*q^({})", v.torsion, v.q_exp),
                        None => "-".to_string(),
                    })
                    .collect();
                payload["eval"] = json!({
                    "point": point,
                    "value": value.to_string(),
                    "value_terms": value.to_json(),
                    "zero": value.is_zero(),
                });
                text.push_str(&format!(
                    "\nat (chi1, chi2) = ({}, {}): {}",
                    point[0], point[1], value
                ));
            }
            Ok(render(payload, text, format.format))
        }
        Command::Theta { r, format } => {
            let (e1, e2) = g2_tables::theta_character(r).map_err(|e| e.to_string())?;
            let payload = json!({
                "version": VERSION,
                "r": r,
                "chi1": rat_str(e1),
                "chi2": rat_str(e2),
            });
            let text = format!("theta(r={r}): chi1 = q^({e1}), chi2 = q^({e2})");
            Ok(render(payload, text, format.format))
        }
        Command::Deduce {
            group,
            n,
            r,
            max_word_len,
            trace,
            format,
        } => {
            let spec = match group {
                GroupArg::Gl => GroupSpec::gl(n.expect("clap enforces --n for gl"), r),
                GroupArg::G2 => GroupSpec::g2(r),
            };
            let opts = SolveOptions {
                max_word_len,
                ..SolveOptions::default()
            };
            let families = solve_genericity(&spec, &opts).map_err(|e| e.to_string())?;
            let group_name = match group {
                GroupArg::Gl => format!("gl({})", n.unwrap()),
                GroupArg::G2 => "g2".to_string(),
            };
            let payload = json!({
                "version": VERSION,
                "group": group_name,
                "r": r,
                "family_count": families.len(),
                "families": families.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            });
            let mut text = format!(
                "{group_name} degree {r}: {} non-generic famil{}",
                families.len(),
                if families.len() == 1 { "y" } else { "ies" }
            );
            for (i, f) in families.iter().enumerate() {
                text.push_str(&format!(
                    "\nfamily {}: rep q-exponents ({})",
                    i + 1,
                    f.rep_q
                        .iter()
                        .map(|x| format!("{x}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
                for eq in &f.equations {
                    text.push_str(&format!("\n  {eq}"));
                }
                if !f.free_dirs.is_empty() {
                    text.push_str(&format!("\n  free directions: {:?}", f.free_dirs));
                }
                text.push_str(&format!(
                    "\n  verified torsion classes: {}",
                    f.torsion_classes.len()
                ));
                if !f.side_condition_flags.is_empty() {
                    text.push_str(&format!("\n  flags: {:?}", f.side_condition_flags));
                }
                if trace {
                    for step in &f.trace.steps {
                        text.push_str(&format!("\n    {step}"));
                    }
                }
            }
            Ok(render(payload, text, format.format))
        }
        Command::Ffgauss {
            prime,
            order,
            check,
            format,
        } => {
            let report = match check {
                CheckArg::Pairing => {
                    ffgauss::pairing_report(prime, order, 1e-9).map_err(|e| e.to_string())?
                }
                CheckArg::Jacobi => {
                    ffgauss::jacobi_report(prime, order, 1e-6).map_err(|e| e.to_string())?
                }
                CheckArg::G234 => ffgauss::g234_report(prime, 1e-9).map_err(|e| e.to_string())?,
            };
            let payload = json!({
                "version": VERSION,
                "p": report.p,
                "m": report.m,
                "check": report.check,
                "max_error": report.max_error,
                "pass": report.pass,
            });
            let text = format!(
                "{} check at p={}, m={}: max error {:.3e} -> {}",
                report.check,
                report.p,
                report.m,
                report.max_error,
                if report.pass { "pass" } else { "FAIL" }
            );
            Ok(render(payload, text, format.format))
        }
        Command::DumpPatterns { n, r, format } => {
            let patterns = gtpatterns::enumerate(n).map_err(|e| e.to_string())?;
            let total = patterns.len();
            let supported: Vec<_> = patterns
                .into_iter()
                .filter(|p| gtpatterns::is_supported(&gtpatterns::statistics(p), r))
                .collect();
            let payload = json!({
                "version": VERSION,
                "n": n,
                "r": r,
                "pattern_count": total,
                "supported_count": supported.len(),
                "patterns": supported.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            });
            let mut text = format!(
                "rank {n}, degree {r}: {} of {total} patterns supported",
                supported.len()
            );
            for p in &supported {
                let s = gtpatterns::statistics(p);
                text.push_str(&format!("\n{:?}  k={:?}", p.rows(), s.k));
            }
            Ok(render(payload, text, format.format))
        }
        Command::ExportTables { format } => {
            let entries = g2_tables::tabulated_entries();
            let payload = json!({
                "version": VERSION,
                "entries": entries.iter().map(|e| json!({
                    "label": e.label,
                    "r": e.r,
                    "eta": e.eta.to_string(),
                    "factors": e.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    "factors_terms": e.factors.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
                    "polynomial": e.expanded().to_string(),
                    "terms": e.expanded().to_json(),
                    "convergence_note": e.convergence_note,
                })).collect::<Vec<_>>(),
            });
            let mut text = String::from("closed-form table");
            for e in &entries {
                text.push_str(&format!("\n{}: {}", e.label, e.expanded()));
            }
            Ok(render(payload, text, format.format))
        }
    }
}

fn render(payload: Value, text: String, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&payload).expect("serializable"),
        Format::Text => text,
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(out) => {
            use std::io::Write;
            // Tolerate a closed pipe on the reading side.
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
