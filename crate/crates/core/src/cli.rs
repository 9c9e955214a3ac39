//! Command-line front end: `build`, `verify-facts`, `scan` and `certify`.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::field::{default_working_degree, Fel, FieldCtx};
use crate::galois::{decide, theorem_scan, DecideConfig, ScanConfig, SearchBounds, Verdict};
use crate::plane::ProjPoint;
use crate::report::{to_json, verify_facts, CertifyArtifact, CurveArtifact, ScanArtifact};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "dgz-galois",
    version,
    about = "Construct the DGZ curve and verify its Galois points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the curve and write its artifact.
    Build(Common),
    /// Check the singular locus and intersection orders.
    VerifyFacts {
        #[command(flatten)]
        common: Common,
        /// Largest extension degree of scanned points.
        #[arg(long = "ext-bound", default_value_t = 2)]
        ext_bound: u32,
    },
    /// Decide every point of P²(F_{q²}) and sampled points beyond.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Largest extension degree of sampled points.
        #[arg(long = "ext-bound", default_value_t = 4)]
        ext_bound: u32,
        #[arg(long, default_value_t = 50)]
        samples: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Certify one point.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Coordinates `a,b,c`; each is an integer mod p or `c0:c1:...`,
        /// coefficients over F_p in powers of the subfield generator.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Extension degree k of the subfield F_{q^k} the coordinates live in.
        #[arg(long, default_value_t = 1)]
        subfield: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Order of the base field, a prime power.
    #[arg(long)]
    pub q: u64,
    /// Working degree L of F_{q^L}; defaults to 24 for q = 2 and 12 otherwise.
    #[arg(long = "L")]
    pub working_degree: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Common {
    fn curve(&self) -> Result<Curve> {
        let l = self
            .working_degree
            .unwrap_or_else(|| default_working_degree(self.q));
        Curve::for_q(self.q, l)
    }
}

/// Parses `a,b,c` over `F_{q^k}` into a normalized point.
pub fn parse_point(ctx: &FieldCtx, text: &str, subfield: u32) -> Result<ProjPoint> {
    let omega = ctx.subfield_generator(subfield)?;
    let basis_len = (ctx.base_degree() * subfield) as usize;
    let p = ctx.characteristic();
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "expected three coordinates, got {}",
            parts.len()
        )));
    }
    let mut coords = [Fel::ZERO; 3];
    for (slot, part) in coords.iter_mut().zip(&parts) {
        let digits: Vec<u32> = part
            .split(':')
            .map(|d| {
                d.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|v| *v < p)
                    .ok_or_else(|| Error::Parse(format!("`{d}` is not a residue mod {p}")))
            })
            .collect::<Result<_>>()?;
        if digits.len() > basis_len {
            return Err(Error::Parse(format!(
                "`{part}` has more than {basis_len} coefficients"
            )));
        }
        *slot = ctx.sum(
            digits
                .iter()
                .enumerate()
                .map(|(i, &d)| ctx.mul(ctx.from_int(d as i64), ctx.pow(omega, i as u64))),
        );
    }
    ProjPoint::new(ctx, coords)
        .map_err(|_| Error::Parse("(0,0,0) is not a projective point".into()))
}

/// Parses `args` and runs the command, writing reports to `stdout` (or the
/// `--out` file) and diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((report, pass)) => {
            let common = common_of(&cli.command);
            let written = match &common.out {
                Some(path) => std::fs::write(path, report.as_bytes()),
                None => stdout.write_all(report.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            if pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn common_of(command: &Command) -> &Common {
    match command {
        Command::Build(common)
        | Command::VerifyFacts { common, .. }
        | Command::Scan { common, .. }
        | Command::Certify { common, .. } => common,
    }
}

/// Runs a command, returning the rendered report and whether it passed.
pub fn execute(command: &Command) -> Result<(String, bool)> {
    let common = common_of(command);
    let curve = common.curve()?;
    match command {
        Command::Build(_) => {
            let art = CurveArtifact::new(&curve);
            let pass = art.checks.pass();
            let text = match common.format {
                Format::Json => to_json(&art),
                Format::Text => format!(
                    "q={} degree={} terms={} division_identity={} closed_form={}: {}\n",
                    art.q,
                    art.degree,
                    art.terms.len(),
                    art.checks.division_identity,
                    art.checks
                        .closed_form_match
                        .map_or("n/a".to_string(), |b| b.to_string()),
                    verdict_word(pass)
                ),
            };
            Ok((text, pass))
        }
        Command::VerifyFacts { ext_bound, .. } => {
            check_bound(*ext_bound)?;
            let r = verify_facts(&curve, *ext_bound)?;
            let text = match common.format {
                Format::Json => to_json(&r),
                Format::Text => {
                    let mut t = format!(
                        "q={} construction: {}\n",
                        r.q,
                        verdict_word(r.construction.pass())
                    );
                    if let Some(reason) = &r.skipped {
                        t += &format!("skipped: {reason}\n");
                    }
                    if let Some(s) = &r.singular_locus {
                        t += &format!(
                            "singular points over F_(q^{}): {} (rational: {})\n",
                            s.extension_degree, s.singular_points, s.rational_singular_points
                        );
                    }
                    if let Some(f) = &r.singular_orders {
                        t += &format!(
                            "singular orders: {} pairs, histogram {:?}, {} violations\n",
                            f.pairs_checked,
                            f.order_histogram,
                            f.violations.len()
                        );
                    }
                    if let Some(f) = &r.tangent_orders {
                        let smooth: u64 = f.per_degree.iter().map(|c| c.smooth_points).sum();
                        t += &format!(
                            "tangent orders: {} smooth points, min order {:?}, {} violations\n",
                            smooth,
                            f.min_order,
                            f.violations.len()
                        );
                    }
                    t + &format!("{}\n", verdict_word(r.pass))
                }
            };
            Ok((text, r.pass))
        }
        Command::Scan {
            ext_bound,
            samples,
            seed,
            ..
        } => {
            check_bound(*ext_bound)?;
            let l = curve.ctx().working_degree();
            let config = ScanConfig::with_ext_bound(l, *ext_bound, *samples, *seed);
            let report = theorem_scan(&curve, &config)?;
            let art = ScanArtifact::new(&curve, &report);
            let pass = art.summary.pass;
            let text = match common.format {
                Format::Json => to_json(&art),
                Format::Text => {
                    let negative = report
                        .certificates
                        .iter()
                        .filter(|c| c.verdict() == Verdict::Negative)
                        .count();
                    format!(
                        "q={} scanned {} points: {} galois (expected {}), {} negative, {} inconclusive: {}\n",
                        art.q,
                        art.summary.points_scanned,
                        art.summary.galois_count,
                        art.summary.expected,
                        negative,
                        art.summary.inconclusive.len(),
                        verdict_word(pass)
                    )
                }
            };
            Ok((text, pass))
        }
        Command::Certify {
            point,
            subfield,
            seed,
            ..
        } => {
            let p = parse_point(curve.ctx(), point, *subfield)?;
            let config = DecideConfig {
                bounds: SearchBounds {
                    seed: *seed,
                    ..SearchBounds::default()
                },
                ..DecideConfig::default()
            };
            let cert = decide(&curve, &p, &config)?;
            let art = CertifyArtifact::new(&curve, &cert);
            let pass = cert.verdict() != Verdict::Inconclusive;
            let text = match common.format {
                Format::Json => to_json(&art),
                Format::Text => {
                    let detail = match &art.certificate.evidence {
                        crate::report::SerializedEvidence::Positive { order, .. } => {
                            format!("order {order}")
                        }
                        crate::report::SerializedEvidence::Negative { obstruction, .. } => {
                            format!("{obstruction:?}")
                        }
                        crate::report::SerializedEvidence::Inconclusive { .. } => {
                            "search bounds exhausted".to_string()
                        }
                    };
                    format!(
                        "q={} point multiplicity {} projection degree {}: {} ({})\n",
                        art.q,
                        cert.point_multiplicity,
                        cert.projection_degree,
                        cert.verdict().as_str(),
                        detail
                    )
                }
            };
            Ok((text, pass))
        }
    }
}

fn check_bound(ext_bound: u32) -> Result<()> {
    if ext_bound == 0 {
        return Err(Error::Config("--ext-bound must be positive".into()));
    }
    Ok(())
}

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("dgz-galois").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn point_parsing() {
        let ctx = FieldCtx::shared(3, 12).unwrap();
        let p = parse_point(&ctx, "0,1,0", 1).unwrap();
        assert_eq!(p, ProjPoint::standard(&ctx, 1));
        let p = parse_point(&ctx, "1, 0:1, 2", 2).unwrap();
        assert_eq!(p.def_degree(), 2);
        assert!(parse_point(&ctx, "0,0,0", 1).is_err());
        assert!(parse_point(&ctx, "0,1", 1).is_err());
        assert!(parse_point(&ctx, "0,3,1", 1).is_err());
        assert!(parse_point(&ctx, "0,1:1,1", 1).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["build", "--q", "6"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["certify", "--q", "3", "--point", "0,0,0"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn build_text() {
        let (code, out, _) = run_capture(&["build", "--q", "2", "--L", "12", "--format", "text"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("degree=4") && out.contains("closed_form=true"));
    }
}
