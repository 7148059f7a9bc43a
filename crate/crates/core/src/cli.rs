//! The `massey` command-line tool.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error, 3 a `verify`
//! run that did not reproduce the expected verdict.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cohomology::{cpi_component, cup, in_resonance, massey_mod_indeterminacy, OneClass};
use crate::field::{Modulus, Prime};
use crate::magnus::{eps, MultiIndex};
use crate::presentation::{kty_presentation, monomial_presentation, Presentation};
use crate::theorem::{verify_kty, verify_main};
use crate::word::Word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "massey", version, about = "Magnus coefficients, cup products and triple Massey products over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a presentation in the text format or as JSON.
    Present {
        #[command(flatten)]
        source: Source,
        /// Also write the text format to this file.
        #[arg(long)]
        save: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Magnus coefficient ε_I(w).
    Magnus {
        #[arg(long)]
        word: String,
        /// Comma-separated multi-index, e.g. 1,2,3.
        #[arg(long)]
        index: String,
        /// A prime, or 0 for integer coefficients.
        #[arg(long = "mod")]
        modulus: u32,
        #[arg(long)]
        generators: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Cup product α ∪ β in the relator-dual basis.
    Cup {
        #[command(flatten)]
        source: Source,
        #[arg(long = "mod", value_parser = parse_prime)]
        modulus: Prime,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        json: bool,
    },
    /// Triple Massey product ⟨α, β, γ⟩ modulo indeterminacy.
    Massey {
        #[command(flatten)]
        source: Source,
        #[arg(long = "mod", value_parser = parse_prime)]
        modulus: Prime,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        json: bool,
    },
    /// The component C_Π of A(r,1,3), or a pointwise resonance test.
    Resonance {
        #[arg(long)]
        monomial: u32,
        #[arg(long = "mod", value_parser = parse_prime)]
        modulus: Prime,
        #[arg(long, conflicts_with = "test")]
        cpi: bool,
        /// Class λ to test for resonance.
        #[arg(long)]
        test: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute a known result and compare with its expected verdict.
    Verify {
        #[arg(long, value_enum)]
        theorem: TheoremName,
        #[arg(long, default_value_t = 3)]
        prime: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremName {
    Main,
    Kty,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// The pure braid presentation of A(r,1,3).
    #[arg(long)]
    monomial: Option<u32>,
    /// The conic with three tangent lines.
    #[arg(long)]
    kty: bool,
    /// A presentation file.
    #[arg(long)]
    file: Option<PathBuf>,
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let p: u32 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    Prime::new(p).map_err(|e| e.to_string())
}

impl Source {
    fn load(&self) -> Result<Presentation, String> {
        if let Some(r) = self.monomial {
            monomial_presentation(r).map_err(|e| e.to_string())
        } else if self.kty {
            Ok(kty_presentation())
        } else if let Some(path) = &self.file {
            Presentation::load(path).map_err(|e| format!("{}: {e}", path.display()))
        } else {
            Err("no presentation source given".into())
        }
    }
}

fn class(prime: Prime, text: &str, pres: &Presentation, what: &str) -> Result<OneClass, String> {
    let c = OneClass::parse_csv(prime, text).map_err(|e| format!("--{what}: {e}"))?;
    if c.len() != pres.num_generators() {
        return Err(format!("--{what} has {} coordinates, the presentation has {} generators", c.len(), pres.num_generators()));
    }
    Ok(c)
}

fn csv(values: &[u32]) -> String {
    values.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

/// Result of a command: text to print and the exit code.
struct Output {
    text: String,
    code: i32,
}

fn ok(text: String) -> Result<Output, String> {
    Ok(Output { text, code: EXIT_OK })
}

fn execute(cmd: Command) -> Result<Output, String> {
    match cmd {
        Command::Present { source, save, json } => {
            let pres = source.load()?;
            if let Some(path) = save {
                pres.save(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            ok(if json { pretty(&pres.to_json()) } else { pres.to_text().trim_end().to_string() })
        }
        Command::Magnus { word, index, modulus, generators, json } => {
            let modulus = Modulus::new(modulus).map_err(|e| e.to_string())?;
            let index: MultiIndex = index.parse().map_err(|e: crate::magnus::MagnusError| e.to_string())?;
            let w = Word::parse(&word, generators.unwrap_or(usize::MAX)).map_err(|e| e.to_string())?;
            if let Some(n) = generators {
                if index.max_generator() as usize > n {
                    return Err(format!("index {index} uses x{} but there are only {n} generators", index.max_generator()));
                }
            }
            let value = eps(&index, &w, modulus);
            ok(if json {
                pretty(&json!({ "word": w.to_string(), "index": index.to_string(), "mod": modulus.to_string(), "value": value.to_string() }))
            } else {
                value.to_string()
            })
        }
        Command::Cup { source, modulus, alpha, beta, json } => {
            let pres = source.load()?;
            let a = class(modulus, &alpha, &pres, "alpha")?;
            let b = class(modulus, &beta, &pres, "beta")?;
            let c = cup(&pres, &a, &b).map_err(|e| e.to_string())?;
            ok(if json {
                pretty(&json!({ "cup": c.entries(), "relator_names": pres.relator_names(), "zero": c.is_zero() }))
            } else {
                csv(c.entries())
            })
        }
        Command::Massey { source, modulus, alpha, beta, gamma, json } => {
            let pres = source.load()?;
            let a = class(modulus, &alpha, &pres, "alpha")?;
            let b = class(modulus, &beta, &pres, "beta")?;
            let g = class(modulus, &gamma, &pres, "gamma")?;
            let out = massey_mod_indeterminacy(&pres, &a, &b, &g).map_err(|e| e.to_string())?;
            ok(if json {
                pretty(&out.to_json(&pres))
            } else {
                let mut text = format!(
                    "representative: {}\nindeterminacy rank: {}\nvanishes: {}",
                    csv(out.representative.entries()),
                    out.indeterminacy_rank(),
                    out.vanishes
                );
                if let Some((x, y)) = &out.witness_classes {
                    text.push_str(&format!("\nwitness: alpha∪({x}) + ({y})∪gamma"));
                }
                text
            })
        }
        Command::Resonance { monomial, modulus, cpi, test, json } => {
            if let Some(t) = test {
                let pres = monomial_presentation(monomial).map_err(|e| e.to_string())?;
                let lambda = class(modulus, &t, &pres, "test")?;
                let res = in_resonance(&pres, &lambda).map_err(|e| e.to_string())?;
                let witness = res.witness.as_ref().map(|w| w.entries().to_vec());
                ok(if json {
                    pretty(&json!({ "resonant": res.resonant, "witness": witness, "kernel_dim": res.kernel_dim }))
                } else {
                    let mut text = format!("resonant: {}\nkernel dim: {}", res.resonant, res.kernel_dim);
                    if let Some(w) = witness {
                        text.push_str(&format!("\nwitness: {}", csv(&w)));
                    }
                    text
                })
            } else {
                // --cpi is the default view
                let _ = cpi;
                let c = cpi_component(monomial, modulus).map_err(|e| e.to_string())?;
                let basis: Vec<Vec<u32>> = c.basis.iter().map(|v| v.entries().to_vec()).collect();
                ok(if json {
                    let equations: Vec<Vec<u32>> = (0..c.equations.rows()).map(|i| c.equations.row(i).to_vec()).collect();
                    pretty(&json!({ "r": c.r, "prime": c.prime.get(), "dim": c.dim, "basis": basis, "equations": equations }))
                } else {
                    let mut text = format!("dim: {}", c.dim);
                    for b in &basis {
                        text.push_str(&format!("\n{}", csv(b)));
                    }
                    text
                })
            }
        }
        Command::Verify { theorem, prime, json } => match theorem {
            TheoremName::Main => {
                let report = verify_main(prime).map_err(|e| e.to_string())?;
                let text = if json {
                    pretty(&report)
                } else {
                    let mut lines: Vec<String> = report
                        .stages
                        .iter()
                        .map(|s| format!("[{}] {}: {}", if s.passed { "pass" } else { "FAIL" }, s.name, s.detail))
                        .collect();
                    lines.push(format!("vanishes: {}", report.vanishes));
                    lines.join("\n")
                };
                Ok(Output { text, code: if report.passed { EXIT_OK } else { EXIT_MISMATCH } })
            }
            TheoremName::Kty => {
                let report = verify_kty();
                let text = if json {
                    pretty(&report)
                } else {
                    let mut lines: Vec<String> = report
                        .stages
                        .iter()
                        .map(|s| format!("[{}] {}: {}", if s.passed { "pass" } else { "FAIL" }, s.name, s.detail))
                        .collect();
                    for v in &report.alphas {
                        let w = v.witness_beta.as_ref().map(|b| csv(b)).unwrap_or_else(|| "none".into());
                        lines.push(format!("alpha {}: non-vanishing witness beta {}", csv(&v.alpha), w));
                    }
                    lines.join("\n")
                };
                Ok(Output { text, code: if report.passed { EXIT_OK } else { EXIT_MISMATCH } })
            }
        },
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text);
            o.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_COMPUTATION
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("massey").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn magnus_scalar() {
        let (code, out, _) = call(&["magnus", "--word", "x1 x2 x1^-1 x2^-1", "--index", "1,2", "--mod", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1");
        let (code, out, _) = call(&["magnus", "--word", "x1^-1", "--index", "1,1,1", "--mod", "5"]);
        assert_eq!((code, out.trim()), (0, "4"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["cup", "--kty", "--mod", "4", "--alpha", "1,0,0", "--beta", "0,1,0"]).0, EXIT_USAGE);
        assert_eq!(call(&["cup", "--kty", "--monomial", "3", "--mod", "2", "--alpha", "1", "--beta", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["present", "--kty", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn undefined_massey_exits_one() {
        let (code, _, err) = call(&[
            "massey", "--monomial", "3", "--mod", "3",
            "--alpha", "1,0,0,0,0,0,0,0,0,0,0,0",
            "--beta", "0,0,0,0,0,0,0,0,0,1,0,0",
            "--gamma", "0,0,0,0,0,0,0,0,0,0,0,0",
        ]);
        assert_eq!(code, EXIT_COMPUTATION);
        assert!(err.contains("undefined product: cup(α,β) ≠ 0 at relator"), "{err}");
    }

    #[test]
    fn wrong_class_length_exits_one() {
        let (code, _, err) = call(&["cup", "--kty", "--mod", "2", "--alpha", "1,0", "--beta", "0,1,0"]);
        assert_eq!(code, EXIT_COMPUTATION);
        assert!(err.contains("--alpha has 2 coordinates"));
    }
}
