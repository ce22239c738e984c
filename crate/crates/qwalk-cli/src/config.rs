//! Run configuration: the optional key-value file, the flag overrides,
//! and their merge into a fully resolved [`ExperimentSpec`].
//!
//! Every knob can come from the file or from a flag; the flag wins. All
//! angles are stored in radians after resolution (the `omega_degrees`
//! switch converts every angle-valued input, grid endpoints included).

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;

use qwalk::coin::{make_coin, defect_coin, CoinAngles, CoinMatrix};
use qwalk::engine::{CoinState, WalkConfig};

use crate::error::CliError;
use crate::parse::{parse_complex, parse_grid, parse_matrix};

/// The config-file schema. Unknown keys are rejected so typos surface
/// instead of silently falling back to defaults.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub omega: Option<f64>,
    pub omega_degrees: Option<bool>,
    /// Explicit defect coin "a;b;c;d" (each entry "re,im"); overrides `omega`.
    pub defect: Option<String>,
    pub bulk_omega: Option<f64>,
    pub bulk_omega_tilde: Option<f64>,
    /// Explicit bulk coin "a;b;c;d"; overrides the bulk angle pair.
    pub bulk: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub steps: Option<usize>,
    pub horizon: Option<usize>,
    pub omega_grid: Option<String>,
    pub threads: Option<usize>,
    pub report: Option<String>,
    pub window: Option<i64>,
    pub out: Option<String>,
    pub format: Option<String>,
}

/// Parses config-file text; the caller owns reading the file.
pub fn parse_file_config(text: &str) -> Result<FileConfig, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

/// Output encoding of the tabular commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Flag-level values, all optional; `None` defers to the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub omega_degrees: bool,
    pub defect: Option<String>,
    pub bulk_omega: Option<f64>,
    pub bulk_omega_tilde: Option<f64>,
    pub bulk: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub steps: Option<usize>,
    pub horizon: Option<usize>,
    pub omega_grid: Option<String>,
    pub threads: Option<usize>,
    pub report: Option<String>,
    pub window: Option<i64>,
    pub compare_theory: bool,
    pub only: Option<String>,
    pub json: bool,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

/// Everything a command needs, resolved and validated: the coin layout,
/// the initial state, the numeric knobs, and the output routing. `echo`
/// carries the resolved inputs for the metadata header, so emitted files
/// are self-describing.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub command: &'static str,
    pub walk: WalkConfig,
    pub psi0: CoinState,
    pub steps: Option<usize>,
    pub horizon: Option<usize>,
    pub grid: Option<Vec<f64>>,
    pub threads: Option<usize>,
    pub report: Option<String>,
    pub window: Option<i64>,
    pub compare_theory: bool,
    pub only: Option<String>,
    pub json: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub echo: Vec<(String, String)>,
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.16e},{:.16e}", z.re, z.im)
}

impl ExperimentSpec {
    /// Merges flags over the file and builds the validated spec.
    pub fn resolve(
        command: &'static str,
        file: &FileConfig,
        flags: Overrides,
    ) -> Result<ExperimentSpec, CliError> {
        let degrees = flags.omega_degrees || file.omega_degrees.unwrap_or(false);
        let to_rad = |v: f64| if degrees { v.to_radians() } else { v };

        let mut echo: Vec<(String, String)> = vec![("command".into(), command.into())];

        let omega = to_rad(flags.omega.or(file.omega).unwrap_or(0.0));
        let defect_text = flags.defect.clone().or_else(|| file.defect.clone());
        let defect = match &defect_text {
            Some(text) => {
                let m = parse_matrix(text).map_err(|e| CliError::parse("defect", e))?;
                echo.push(("defect".into(), text.clone()));
                CoinMatrix::new_permitting_zeros(m[0], m[1], m[2], m[3])
                    .map_err(|e| CliError::precondition("defect", e.to_string()))?
            }
            None => {
                // A sweep varies the defect angle itself, so a fixed omega
                // line in its metadata would be noise.
                if command != "sweep" {
                    echo.push(("omega".into(), format!("{omega:.16e}")));
                }
                defect_coin(omega)
            }
        };

        let bulk_text = flags.bulk.clone().or_else(|| file.bulk.clone());
        let bulk_omega = flags.bulk_omega.or(file.bulk_omega);
        let bulk_omega_tilde = flags.bulk_omega_tilde.or(file.bulk_omega_tilde);
        let bulk = match (&bulk_text, bulk_omega, bulk_omega_tilde) {
            (Some(text), _, _) => {
                let m = parse_matrix(text).map_err(|e| CliError::parse("bulk", e))?;
                echo.push(("bulk".into(), text.clone()));
                CoinMatrix::new_permitting_zeros(m[0], m[1], m[2], m[3])
                    .map_err(|e| CliError::precondition("bulk", e.to_string()))?
            }
            (None, Some(bo), Some(bt)) => {
                let (bo, bt) = (to_rad(bo), to_rad(bt));
                echo.push(("bulk_omega".into(), format!("{bo:.16e}")));
                echo.push(("bulk_omega_tilde".into(), format!("{bt:.16e}")));
                make_coin(CoinAngles::wrapped(bo, bt))
            }
            (None, None, None) => CoinMatrix::hadamard(),
            (None, _, _) => {
                return Err(CliError::parse(
                    "bulk_omega",
                    "the bulk angle pair needs both bulk_omega and bulk_omega_tilde",
                ));
            }
        };
        let walk = WalkConfig::new(defect, bulk);

        let alpha_text = flags.alpha.clone().or_else(|| file.alpha.clone());
        let beta_text = flags.beta.clone().or_else(|| file.beta.clone());
        let psi0 = match (&alpha_text, &beta_text) {
            (None, None) => CoinState::symmetric(),
            (Some(a), Some(b)) => {
                let alpha = parse_complex(a).map_err(|e| CliError::parse("alpha", e))?;
                let beta = parse_complex(b).map_err(|e| CliError::parse("beta", e))?;
                // Inputs are often truncated decimals; rescale to unit norm
                // so the walk's precondition holds, rejecting only vectors
                // too small to carry a direction.
                let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
                if norm < 1e-6 {
                    return Err(CliError::precondition(
                        "alpha,beta",
                        format!("initial spinor is numerically zero, norm = {norm:.3e}"),
                    ));
                }
                CoinState::new(alpha / norm, beta / norm)
                    .map_err(|e| CliError::precondition("alpha,beta", e.to_string()))?
            }
            (Some(_), None) => {
                return Err(CliError::parse("beta", "alpha was given without beta"));
            }
            (None, Some(_)) => {
                return Err(CliError::parse("alpha", "beta was given without alpha"));
            }
        };
        echo.push(("alpha".into(), fmt_complex(psi0.alpha())));
        echo.push(("beta".into(), fmt_complex(psi0.beta())));

        let grid_text = flags.omega_grid.clone().or_else(|| file.omega_grid.clone());
        let grid = match &grid_text {
            Some(text) => {
                let points = parse_grid(text).map_err(|e| CliError::parse("omega_grid", e))?;
                echo.push(("omega_grid".into(), text.clone()));
                if degrees {
                    echo.push(("omega_grid_unit".into(), "degrees".into()));
                }
                Some(points.into_iter().map(to_rad).collect())
            }
            None => None,
        };

        let steps = flags.steps.or(file.steps);
        if let Some(n) = steps {
            echo.push(("steps".into(), n.to_string()));
        }
        let horizon = flags.horizon.or(file.horizon);
        if let Some(t) = horizon {
            echo.push(("horizon".into(), t.to_string()));
        }
        let window = flags.window.or(file.window);
        if let Some(w) = window {
            echo.push(("window".into(), w.to_string()));
        }

        let format = match flags
            .format
            .as_deref()
            .or(file.format.as_deref())
            .unwrap_or("csv")
        {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => {
                return Err(CliError::parse(
                    "format",
                    format!("expected \"csv\" or \"json\", got {other:?}"),
                ));
            }
        };

        Ok(ExperimentSpec {
            command,
            walk,
            psi0,
            steps,
            horizon,
            grid,
            threads: flags.threads.or(file.threads),
            report: flags.report.clone().or_else(|| file.report.clone()),
            window,
            compare_theory: flags.compare_theory,
            only: flags.only,
            json: flags.json,
            out: flags.out.or_else(|| file.out.clone().map(PathBuf::from)),
            format,
            echo,
        })
    }

    /// A required numeric knob, by field name.
    pub fn require_steps(&self) -> Result<usize, CliError> {
        self.steps
            .ok_or_else(|| CliError::parse("steps", "required (flag or config file)"))
    }

    pub fn require_horizon(&self) -> Result<usize, CliError> {
        let t = self
            .horizon
            .ok_or_else(|| CliError::parse("horizon", "required (flag --T or config file)"))?;
        if t == 0 {
            return Err(CliError::precondition("horizon", "must be at least 1"));
        }
        Ok(t)
    }

    pub fn require_grid(&self) -> Result<&[f64], CliError> {
        self.grid
            .as_deref()
            .ok_or_else(|| CliError::parse("omega_grid", "required (flag or config file)"))
    }
}
