//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad arguments or
//! norm text, 3 estimator failure, 4 output not writable. Data goes to stdout
//! (or `--out`), diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::constants::{ConstantError, ConstantEstimate, ConstantKind, Estimator, GridParams};
use crate::norm::{norm_from_alias, Norm, NormError};
use crate::norm_spec::{parse_norm_spec, SpecError};
use crate::svg::sphere_svg;
use crate::verify::{hexagon_family_check, run_checks, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ESTIMATOR: i32 = 3;
pub const EXIT_UNWRITABLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "birkhoff-heinz",
    version,
    about = "Birkhoff-orthogonality constants of planar norms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate one or more constants.
    Constants {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated tags: H, J_B, A2_B, delta_B, rho_B, mu_B, J, S, A2.
        #[arg(long, value_delimiter = ',', default_value = "H")]
        kinds: Vec<String>,
    },
    /// Tabulate H_ν over a range of ν.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the inequality catalog; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Measure how far Birkhoff orthogonality is from symmetric.
    Radon {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Draw the unit sphere and the H_ν witness pair as SVG.
    Sphere {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// H_{1/2} on seeded affine images of the regular hexagon.
    HexagonFamily {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Alias (euclid, l1, linf, lp:<p>, linf-l1, sqrt2max, hexagon), a file
    /// path, or inline norm text such as "kind=pnorm p=4".
    #[arg(long, default_value = "euclid")]
    pub norm: String,
    /// ν values (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub nu: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    pub nu_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nu_stop: f64,
    #[arg(long, default_value_t = 11)]
    pub nu_steps: usize,
    #[arg(long, default_value_t = 2048)]
    pub grid_theta: usize,
    #[arg(long, default_value_t = 512)]
    pub grid_psi: usize,
    #[arg(long, default_value_t = 3)]
    pub refine: usize,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Orthogonality defect tolerance at the companion scan stage.
    #[arg(long, default_value_t = crate::birkhoff::DEFAULT_ORTHO_TOL)]
    pub tol: f64,
}

impl CommonArgs {
    pub fn grid(&self) -> GridParams {
        let defaults = GridParams::default();
        GridParams {
            theta_count: self.grid_theta,
            psi_scan: self.grid_psi,
            refinement_levels: self.refine,
            scan_tol: self.tol,
            admit_tol: defaults.admit_tol.min(self.tol),
            ..defaults
        }
    }

    fn nus_or(&self, default: &[f64]) -> Result<Vec<f64>, CliError> {
        let nus = self.nu.clone().unwrap_or_else(|| default.to_vec());
        check_nus(&nus)?;
        Ok(nus)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("norm: {0}")]
    Spec(#[from] SpecError),
    #[error("norm: {0}")]
    Norm(#[from] NormError),
    #[error("estimator: {0}")]
    Estimator(#[from] ConstantError),
    #[error("cannot write {path}: {source}")]
    Unwritable { path: PathBuf, source: std::io::Error },
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Constant(c) => CliError::Estimator(c),
            VerifyError::Norm(n) => CliError::Norm(n),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Spec(_)
            | CliError::Norm(_)
            | CliError::Estimator(ConstantError::InvalidGrid(_)) => EXIT_USAGE,
            CliError::Estimator(_) => EXIT_ESTIMATOR,
            CliError::Unwritable { .. } => EXIT_UNWRITABLE,
        }
    }
}

/// Resolves `--norm`: alias, then existing file, then inline text.
pub fn resolve_norm(arg: &str) -> Result<Norm, CliError> {
    if let Some(norm) = norm_from_alias(arg) {
        return Ok(norm?);
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(parse_norm_spec(&text)?);
    }
    if arg.contains('=') {
        return Ok(parse_norm_spec(arg)?);
    }
    Err(CliError::Usage(format!(
        "`{arg}` is neither a built-in alias, a readable file, nor inline norm text"
    )))
}

/// One row of the `constants` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantRow {
    pub kind: String,
    pub nu: Option<f64>,
    pub value: f64,
    pub theta_x: f64,
    pub theta_y: f64,
    pub defect: f64,
    pub theta_count: usize,
    pub psi_scan: usize,
    pub refine: usize,
    pub tolerance: f64,
}

pub const CONSTANTS_CSV_HEADER: &str =
    "kind,nu,value,theta_x,theta_y,defect,theta_count,psi_scan,refine,tolerance";

impl From<&ConstantEstimate> for ConstantRow {
    fn from(e: &ConstantEstimate) -> Self {
        ConstantRow {
            kind: e.kind.tag().to_owned(),
            nu: e.kind.nu(),
            value: e.value,
            theta_x: e.witness.x.angle,
            theta_y: e.witness.y.angle,
            defect: e.witness.defect,
            theta_count: e.grid.theta_count,
            psi_scan: e.grid.psi_scan_count,
            refine: e.grid.refinement_levels,
            tolerance: e.tolerance,
        }
    }
}

impl ConstantRow {
    pub fn to_csv(&self) -> String {
        let nu = self.nu.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            nu,
            self.value,
            self.theta_x,
            self.theta_y,
            self.defect,
            self.theta_count,
            self.psi_scan,
            self.refine,
            self.tolerance
        )
    }
}

fn rows_output(rows: &[ConstantRow], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut out = format!("{CONSTANTS_CSV_HEADER}\n");
            for r in rows {
                out.push_str(&r.to_csv());
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => Ok(serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"),
        Format::Svg => Err(CliError::Usage(
            "svg output is only available for `sphere`".into(),
        )),
    }
}

fn check_nus(nus: &[f64]) -> Result<(), CliError> {
    if nus.is_empty() {
        return Err(CliError::Usage("--nu needs at least one value".into()));
    }
    match nus.iter().find(|nu| !(0.0..=1.0).contains(*nu)) {
        Some(nu) => Err(CliError::Usage(format!("ν = {nu} is outside [0, 1]"))),
        None => Ok(()),
    }
}

fn linspace(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError::Usage("--nu-steps must be at least 2".into()));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
        return Err(CliError::Usage("sweep bounds must lie in [0, 1]".into()));
    }
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                stop
            } else {
                start + (stop - start) * k as f64 / (steps - 1) as f64
            }
        })
        .collect())
}

fn emit(common: &CommonArgs, data: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, data).map_err(|source| CliError::Unwritable {
            path: path.clone(),
            source,
        }),
        None => stdout
            .write_all(data.as_bytes())
            .map_err(|source| CliError::Unwritable {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Constants { common, kinds } => {
            let norm = resolve_norm(&common.norm)?;
            let format = common.format.unwrap_or(Format::Csv);
            let nus = common.nus_or(&[0.5])?;
            let mut wanted = Vec::new();
            for tag in &kinds {
                if tag == "H" {
                    for &nu in &nus {
                        wanted.push(ConstantKind::heinz(nu)?);
                    }
                } else {
                    let kind = ConstantKind::from_tag(tag, 0.5)
                        .ok_or_else(|| CliError::Usage(format!("unknown constant `{tag}`")))??;
                    wanted.push(kind);
                }
            }
            if format == Format::Svg {
                return Err(CliError::Usage(
                    "svg output is only available for `sphere`".into(),
                ));
            }
            let est = Estimator::new(&norm, common.grid())?;
            let rows = wanted
                .into_iter()
                .map(|k| est.estimate(k).map(|e| ConstantRow::from(&e)))
                .collect::<Result<Vec<_>, _>>()?;
            emit(&common, &rows_output(&rows, format)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sweep { common } => {
            let norm = resolve_norm(&common.norm)?;
            let nus = match &common.nu {
                Some(_) => common.nus_or(&[])?,
                None => linspace(common.nu_start, common.nu_stop, common.nu_steps)?,
            };
            let format = common.format.unwrap_or(Format::Csv);
            let est = Estimator::new(&norm, common.grid())?;
            let mut rows = Vec::new();
            for nu in nus {
                rows.push(ConstantRow::from(&est.estimate(ConstantKind::heinz(nu)?)?));
            }
            let data = match format {
                Format::Csv => {
                    let mut out = String::from("nu,H,theta_x,theta_y\n");
                    for r in &rows {
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            r.nu.unwrap(),
                            r.value,
                            r.theta_x,
                            r.theta_y
                        ));
                    }
                    out
                }
                other => rows_output(&rows, other)?,
            };
            emit(&common, &data, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { common } => {
            let norm = resolve_norm(&common.norm)?;
            let nus = common.nus_or(&[0.0, 0.25, 0.5])?;
            let report = run_checks(&norm, &nus, &common.grid())?;
            let data = match common.format.unwrap_or(Format::Json) {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Svg => return Err(CliError::Usage("verify writes csv or json".into())),
            };
            emit(&common, &data, stdout)?;
            for c in report.failures() {
                let _ = writeln!(
                    stderr,
                    "FAILED {} (nu={}): lhs={} rhs={} margin={:e}",
                    c.name, c.nu, c.lhs, c.rhs, c.margin
                );
            }
            Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Radon { common } => {
            let norm = resolve_norm(&common.norm)?;
            let defect = Estimator::new(&norm, common.grid())?.radon_defect()?;
            let is_radon = defect <= crate::verify::RADON_TOL;
            let data = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => format!(
                    "norm,radon_defect,is_radon,tolerance\n{},{},{},{}\n",
                    norm.label(),
                    defect,
                    is_radon,
                    crate::verify::RADON_TOL
                ),
                Format::Json => {
                    serde_json::json!({
                        "norm": norm.label(),
                        "radon_defect": defect,
                        "is_radon": is_radon,
                        "tolerance": crate::verify::RADON_TOL,
                    })
                    .to_string()
                        + "\n"
                }
                Format::Svg => return Err(CliError::Usage("radon writes csv or json".into())),
            };
            emit(&common, &data, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sphere { common } => {
            let norm = resolve_norm(&common.norm)?;
            if common.format.unwrap_or(Format::Svg) != Format::Svg {
                return Err(CliError::Usage("sphere writes svg".into()));
            }
            let nu = common.nus_or(&[0.5])?[0];
            let est = Estimator::new(&norm, common.grid())?.estimate(ConstantKind::heinz(nu)?)?;
            let caption = format!("{}: H(nu={nu}) = {:.6}", norm.label(), est.value);
            emit(&common, &sphere_svg(&norm, Some(&est.witness), &caption), stdout)?;
            Ok(EXIT_OK)
        }
        Command::HexagonFamily { common, count } => {
            let trials = hexagon_family_check(count, common.seed, &common.grid())?;
            let data = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut out = String::from("seed,index,m00,m01,m10,m11,H\n");
                    for (i, t) in trials.iter().enumerate() {
                        let m = t.map.0;
                        out.push_str(&format!(
                            "{},{i},{},{},{},{},{}\n",
                            common.seed, m[0][0], m[0][1], m[1][0], m[1][1], t.h
                        ));
                    }
                    out
                }
                Format::Json => serde_json::to_string_pretty(&trials).expect("trials serialize") + "\n",
                Format::Svg => return Err(CliError::Usage("hexagon-family writes csv or json".into())),
            };
            emit(&common, &data, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 1.0, 11).unwrap();
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[10], 1.0);
        assert!((v[5] - 0.5).abs() < 1e-15);
        assert!(linspace(0.0, 1.0, 1).is_err());
        assert!(linspace(0.0, 1.5, 3).is_err());
    }

    #[test]
    fn resolve_variants() {
        assert_eq!(resolve_norm("linf").unwrap(), Norm::linf());
        assert_eq!(resolve_norm("kind=pnorm p=4").unwrap().label(), "l4");
        assert_eq!(resolve_norm("nonsense").unwrap_err().exit_code(), EXIT_USAGE);
        assert_eq!(
            resolve_norm("kind=pnorm p=x").unwrap_err().exit_code(),
            EXIT_USAGE
        );
    }
}
