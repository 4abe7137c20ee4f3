//! The `digibin` command line.
//!
//! Exit codes: 0 success or verified, 1 a verification found a
//! counterexample, 2 usage or size-limit error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::ExactPoly;
use crate::digits::{s2, DigitVector};
use crate::error::Error;
use crate::identities::{self, IdentityReport};
use crate::sierpinski::{build_closed_form, build_recursive, Limits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "digibin",
    version,
    about = "Sierpinski matrices, carry-free digit sums and Pascal triangles mod p"
)]
pub struct Cli {
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Output format; defaults to `text` for matrices and `ascii` for triangles.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Largest matrix order that may be built.
    #[arg(long, global = true, default_value_t = Limits::default().max_order)]
    pub max_order: u32,

    /// Largest order for symbolic matrix multiplication.
    #[arg(long, global = true, default_value_t = Limits::default().max_mul_order)]
    pub max_mul_order: u32,

    /// Largest digit sum s(m) for symbolic expansions.
    #[arg(long, global = true, default_value_t = Limits::default().exponent_cap)]
    pub exponent_cap: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty polynomials separated by spaces.
    Text,
    /// Canonical polynomial serialization separated by tabs.
    Tsv,
    Csv,
    Ascii,
    /// Plain (P1) portable bitmap.
    Pbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Arg {
    X,
    Y,
    One,
    Zero,
    #[value(name = "x+y")]
    XPlusY,
    #[value(name = "-x")]
    NegX,
}

impl Arg {
    fn poly(self) -> ExactPoly {
        match self {
            Arg::X => ExactPoly::x(),
            Arg::Y => ExactPoly::y(),
            Arg::One => ExactPoly::one(),
            Arg::Zero => ExactPoly::zero(),
            Arg::XPlusY => &ExactPoly::x() + &ExactPoly::y(),
            Arg::NegX => ExactPoly::x().neg(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Kronecker,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Binomial,
    Additivity,
    Classical,
    Group,
    Kummer,
    Correspondence,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    PascalMod,
    MatrixOnes,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digit expansion and digit sum of a number.
    Digits {
        value: u64,
        #[arg(long, default_value_t = 2)]
        base: u64,
    },
    /// Print S_n(arg).
    Matrix {
        order: u32,
        #[arg(long, value_enum, default_value = "x")]
        arg: Arg,
        #[arg(long, value_enum, default_value = "kronecker")]
        construction: Construction,
        /// Build both ways and report whether they agree.
        #[arg(long)]
        check: bool,
    },
    /// List the carry-free summands of m and the collected expansion.
    Expand { m: u64 },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Matrix order for `group` and `correspondence`.
        #[arg(long)]
        order: Option<u32>,
        /// Check every m below this bound (`binomial`, `additivity`).
        #[arg(long, default_value_t = 4096)]
        max_m: u64,
        /// Row bound for `kummer`, largest n for `classical`.
        #[arg(long)]
        max_n: Option<u64>,
        /// Prime for `kummer`.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Render Pascal's triangle mod p.
    Triangle {
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long = "mod", default_value_t = 2)]
        modulus: u64,
        #[arg(long, value_enum, default_value = "pascal-mod")]
        source: Source,
    },
}

#[derive(Debug)]
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            code: EXIT_OK,
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = std::result::Result<Output, UsageError>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Normal output goes to `out` unless `--output` is set.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = execute(&cli);
    match result {
        Ok(output) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, output.text.as_bytes()),
                None => out.write_all(output.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            output.code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> CmdResult {
    let limits = Limits {
        max_order: cli.max_order,
        max_mul_order: cli.max_mul_order,
        exponent_cap: cli.exponent_cap,
    };
    match &cli.command {
        Command::Digits { value, base } => {
            only_text(cli.format, "digits")?;
            cmd_digits(*value, *base)
        }
        Command::Matrix {
            order,
            arg,
            construction,
            check,
        } => cmd_matrix(*order, *arg, *construction, *check, cli.format, &limits),
        Command::Expand { m } => {
            only_text(cli.format, "expand")?;
            cmd_expand(*m, &limits)
        }
        Command::Verify {
            suite,
            order,
            max_m,
            max_n,
            p,
        } => {
            only_text(cli.format, "verify")?;
            cmd_verify(*suite, *order, *max_m, *max_n, *p, &limits)
        }
        Command::Triangle {
            rows,
            modulus,
            source,
        } => cmd_triangle(
            *rows,
            *modulus,
            *source,
            cli.format.unwrap_or(Format::Ascii),
            &limits,
        ),
    }
}

fn only_text(format: Option<Format>, command: &str) -> std::result::Result<(), UsageError> {
    match format {
        None | Some(Format::Text) => Ok(()),
        Some(f) => Err(UsageError(format!(
            "format {f:?} is not supported by `{command}`"
        ))),
    }
}

fn cmd_digits(value: u64, base: u64) -> CmdResult {
    let dv = DigitVector::new(value, base)?;
    let digits: Vec<String> = dv.digits().iter().map(u64::to_string).collect();
    let digits = if digits.is_empty() {
        "0".to_string()
    } else {
        digits.join(",")
    };
    Ok(Output::ok(format!(
        "value={value}\nbase={base}\ndigits={digits}\ns={}\n",
        dv.digit_sum()
    )))
}

fn cmd_matrix(
    order: u32,
    arg: Arg,
    construction: Construction,
    check: bool,
    format: Option<Format>,
    limits: &Limits,
) -> CmdResult {
    let arg = arg.poly();
    if check {
        only_text(format, "matrix --check")?;
        let report = identities::verify_construction_equivalence(order, &arg, limits)?;
        return Ok(report_output(&[report]));
    }
    let matrix = match construction {
        Construction::Kronecker => build_recursive(order, &arg, limits)?,
        Construction::Closed => build_closed_form(order, &arg, limits)?,
    }
    .expand();
    let text = match format.unwrap_or(Format::Text) {
        Format::Text => matrix.render(" ", ExactPoly::pretty),
        Format::Tsv => matrix.to_tsv(),
        Format::Csv => matrix.render(",", ExactPoly::pretty),
        f => {
            return Err(UsageError(format!(
                "format {f:?} is not supported by `matrix`"
            )))
        }
    };
    Ok(Output::ok(text))
}

fn cmd_expand(m: u64, limits: &Limits) -> CmdResult {
    let weight = s2(m);
    if weight > limits.exponent_cap {
        return Err(Error::SizeLimit {
            what: "digit sum s(m)",
            requested: u64::from(weight),
            limit: u64::from(limits.exponent_cap),
            cost: format!("the listing has 2^{weight} lines"),
        }
        .into());
    }
    let terms = identities::digital_expansion(m);
    let mut text = String::new();
    for t in &terms.terms {
        let _ = writeln!(text, "{} {} {}", t.k, t.a, t.b);
    }
    let _ = writeln!(text, "{}", terms.collected().pretty());
    Ok(Output::ok(text))
}

fn report_output(reports: &[IdentityReport]) -> Output {
    let text = reports
        .iter()
        .map(IdentityReport::to_string)
        .collect::<Vec<_>>()
        .join("\n");
    let code = if reports.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    };
    Output { text, code }
}

fn cmd_verify(
    suite: Suite,
    order: Option<u32>,
    max_m: u64,
    max_n: Option<u64>,
    p: Option<u64>,
    limits: &Limits,
) -> CmdResult {
    let suites: &[Suite] = match suite {
        Suite::All => &[
            Suite::Binomial,
            Suite::Additivity,
            Suite::Classical,
            Suite::Group,
            Suite::Kummer,
            Suite::Correspondence,
        ],
        _ => std::slice::from_ref(&suite),
    };
    let mut reports = Vec::new();
    for s in suites {
        let report = match s {
            Suite::Binomial => {
                identities::scan("digital_binomial", &format!("m<{max_m}"), 0..max_m, |m| {
                    identities::verify_digital_binomial(m, limits)
                })?
            }
            Suite::Additivity => identities::scan(
                "additivity",
                &format!("m<{max_m}"),
                0..max_m,
                identities::verify_additivity_form,
            )?,
            Suite::Classical => {
                let n_max = u32::try_from(max_n.unwrap_or(16))
                    .map_err(|_| UsageError("--max-n is too large".into()))?;
                identities::scan(
                    "classical_reduction",
                    &format!("1<=n<={n_max}"),
                    1..=n_max,
                    identities::verify_classical_reduction,
                )?
            }
            Suite::Group => {
                let n = order.unwrap_or(4);
                let group = identities::verify_group_law(n, limits)?;
                if group.passed {
                    reports.push(group);
                    identities::verify_inverse(n, limits)?
                } else {
                    group
                }
            }
            Suite::Kummer => {
                let n_max = max_n.unwrap_or(64);
                let primes = match p {
                    Some(p) => vec![p],
                    None if suite == Suite::All => vec![2, 3, 5, 7],
                    None => vec![2],
                };
                let mut last = None;
                for p in primes {
                    let r = identities::verify_kummer(n_max, p)?;
                    let failed = !r.passed;
                    if let Some(prev) = last.replace(r) {
                        reports.push(prev);
                    }
                    if failed {
                        break;
                    }
                }
                last.expect("at least one prime")
            }
            Suite::Correspondence => {
                identities::verify_triangle_matrix_correspondence(order.unwrap_or(8), limits)?
            }
            Suite::All => unreachable!(),
        };
        let failed = !report.passed;
        reports.push(report);
        if failed {
            break;
        }
    }
    Ok(report_output(&reports))
}

fn ceil_log2(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

fn cmd_triangle(
    rows: usize,
    modulus: u64,
    source: Source,
    format: Format,
    limits: &Limits,
) -> CmdResult {
    if rows == 0 {
        return Err(UsageError("--rows must be positive".into()));
    }
    let cells: Vec<Vec<u32>> = match source {
        Source::PascalMod => identities::pascal_mod(rows, modulus)?
            .iter_rows()
            .map(<[u32]>::to_vec)
            .collect(),
        Source::MatrixOnes => {
            if modulus != 2 {
                return Err(UsageError("source matrix-ones requires --mod 2".into()));
            }
            let matrix = build_closed_form(ceil_log2(rows), &ExactPoly::one(), limits)?;
            (0..rows)
                .map(|j| {
                    (0..=j)
                        .map(|k| u32::from(matrix.exponent(j, k).is_some()))
                        .collect()
                })
                .collect()
        }
    };
    let text = match format {
        Format::Ascii => render_ascii(&cells, modulus)?,
        Format::Pbm => render_pbm(&cells),
        Format::Csv => render_csv(&cells),
        f => {
            return Err(UsageError(format!(
                "format {f:?} is not supported by `triangle`"
            )))
        }
    };
    Ok(Output::ok(text))
}

/// One character per cell: `1` or blank for p = 2, a base-36 digit otherwise.
fn render_ascii(cells: &[Vec<u32>], modulus: u64) -> std::result::Result<String, UsageError> {
    if modulus > 36 {
        return Err(UsageError(format!(
            "ascii rendering needs one character per residue; modulus {modulus} exceeds 36"
        )));
    }
    let mut out = String::new();
    for row in cells {
        for &r in row {
            let c = match (modulus, r) {
                (2, 0) => ' ',
                _ => std::char::from_digit(r, 36).expect("residue below 36"),
            };
            out.push(c);
        }
        out.push('\n');
    }
    Ok(out)
}

/// P1 bitmap, `rows × rows`; cell `(n, k)` is pixel row `n`, column `k`, and
/// a pixel is 1 when the residue is nonzero. Cells right of the diagonal are 0.
fn render_pbm(cells: &[Vec<u32>]) -> String {
    let side = cells.len();
    let mut out = format!("P1\n{side} {side}\n");
    for row in cells {
        let pixels: Vec<&str> = (0..side)
            .map(|k| match row.get(k) {
                Some(&r) if r != 0 => "1",
                _ => "0",
            })
            .collect();
        out.push_str(&pixels.join(" "));
        out.push('\n');
    }
    out
}

fn render_csv(cells: &[Vec<u32>]) -> String {
    let mut out = String::new();
    for row in cells {
        let fields: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("digibin").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
    }

    #[test]
    fn ascii_uses_digits_for_odd_primes() {
        let (code, out) = run_str(&["triangle", "--rows", "5", "--mod", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1\n11\n121\n1001\n11011\n");
        let (code, _) = run_str(&["triangle", "--rows", "5", "--mod", "37"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn csv_triangle() {
        let (_, out) = run_str(&["triangle", "--rows", "4", "--mod", "5", "--format", "csv"]);
        assert_eq!(out, "1\n1,1\n1,2,1\n1,3,3,1\n");
    }

    #[test]
    fn failing_report_exits_with_one() {
        let bad = IdentityReport {
            identity: "digital_binomial".into(),
            parameter: "m=3".into(),
            passed: false,
            lhs: "1*X^2".into(),
            rhs: "1*Y^2".into(),
            first_mismatch: Some("X^2*Y^0: lhs coefficient 1, rhs coefficient 0".into()),
        };
        let out = report_output(std::slice::from_ref(&bad));
        assert_eq!(out.code, EXIT_COUNTEREXAMPLE);
        assert!(out.text.contains("status: fail"));
        assert!(out.text.contains("first_mismatch: X^2*Y^0"));
        let mut good = bad;
        good.passed = true;
        good.first_mismatch = None;
        assert_eq!(report_output(&[good]).code, EXIT_OK);
    }

    #[test]
    fn wrong_format_for_command() {
        assert_eq!(run_str(&["digits", "5", "--format", "pbm"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["matrix", "2", "--format", "ascii"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["triangle", "--format", "tsv"]).0, EXIT_USAGE);
    }
}
