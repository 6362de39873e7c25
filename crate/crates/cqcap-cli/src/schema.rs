//! JSON file formats for states and channels.
//!
//! Matrices are `{re, im}` pairs of row-major real matrices (the imaginary
//! part may be omitted for real matrices). A channel file either lists its
//! inputs explicitly or names a builtin family:
//!
//! ```json
//! {"dim": 2, "inputs": [{"label": "1", "state": {"re": [[1,0],[0,0]]}}]}
//! {"builtin": {"kind": "depolarizing", "d": 2, "alpha": 0.5}}
//! ```
//!
//! States must hermitize and normalize within the ingest tolerance or the
//! file is rejected, naming the offending label.

use serde::{Deserialize, Serialize};

use cqcap::channel::Channel;
use cqcap::Complex64;
use cqcap::hermitian::{spectral_decompose, DensityOperator, HermitianMatrix};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputSpec {
    pub label: String,
    pub state: MatrixSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuiltinSpec {
    /// `"depolarizing"` or `"noiseless"`.
    pub kind: String,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<InputSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinSpec>,
}

impl MatrixSpec {
    pub fn from_operator(m: &HermitianMatrix) -> Self {
        let d = m.dim();
        let mut re = vec![vec![0.0; d]; d];
        let mut im = vec![vec![0.0; d]; d];
        let mut any_im = false;
        for i in 0..d {
            for j in 0..d {
                let z = m.get(i, j);
                re[i][j] = z.re;
                im[i][j] = z.im;
                if z.im != 0.0 {
                    any_im = true;
                }
            }
        }
        Self {
            re,
            im: if any_im { Some(im) } else { None },
        }
    }

    /// Parse into a density operator: hermiticity defect and trace deviation
    /// must stay within `tol`; eigenvalues may dip to `-tol` and are clamped.
    pub fn to_state(&self, tol: f64, context: &str) -> Result<DensityOperator, CliError> {
        let d = self.re.len();
        if d == 0 {
            return Err(CliError::Validation(format!("{context}: empty matrix")));
        }
        for row in &self.re {
            if row.len() != d {
                return Err(CliError::Dimension(format!(
                    "{context}: re is {d}×{} (not square)",
                    row.len()
                )));
            }
        }
        if let Some(im) = &self.im {
            if im.len() != d || im.iter().any(|row| row.len() != d) {
                return Err(CliError::Dimension(format!(
                    "{context}: im does not match the {d}×{d} real part"
                )));
            }
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                let imv = self.im.as_ref().map(|im| im[i][j]).unwrap_or(0.0);
                entries[i * d + j] = Complex64::new(self.re[i][j], imv);
            }
        }
        let asym = HermitianMatrix::asymmetry_of(d, &entries);
        if asym > tol {
            return Err(CliError::Validation(format!(
                "{context}: hermiticity defect {asym:.3e} exceeds tolerance {tol:.3e}"
            )));
        }
        let h = HermitianMatrix::from_entries(d, entries)
            .map_err(|e| CliError::Validation(format!("{context}: {e}")))?;
        let spec = spectral_decompose(&h)
            .map_err(|e| CliError::Validation(format!("{context}: {e}")))?;
        let min = spec.values().iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(CliError::Validation(format!(
                "{context}: not positive semidefinite (λ_min = {min:.3e})"
            )));
        }
        let tr: f64 = spec.values().iter().sum();
        if (tr - 1.0).abs() > tol {
            return Err(CliError::Validation(format!(
                "{context}: trace {tr} not within {tol:.3e} of 1"
            )));
        }
        let clamped = spec.apply(|x| x.max(0.0));
        DensityOperator::new_renormalized(clamped)
            .map_err(|e| CliError::Validation(format!("{context}: {e}")))
    }
}

impl ChannelSpec {
    pub fn from_channel(ch: &Channel) -> Self {
        Self {
            dim: Some(ch.dim()),
            inputs: Some(
                ch.labels()
                    .iter()
                    .zip(ch.outputs())
                    .map(|(label, state)| InputSpec {
                        label: label.clone(),
                        state: MatrixSpec::from_operator(state.matrix()),
                    })
                    .collect(),
            ),
            builtin: None,
        }
    }

    pub fn to_channel(&self, tol: f64) -> Result<Channel, CliError> {
        if let Some(builtin) = &self.builtin {
            return match builtin.kind.as_str() {
                "depolarizing" => {
                    let alpha = builtin.alpha.ok_or_else(|| {
                        CliError::Validation("builtin depolarizing needs alpha".into())
                    })?;
                    Channel::depolarizing(builtin.d, alpha).map_err(CliError::from)
                }
                "noiseless" => Channel::noiseless(builtin.d).map_err(CliError::from),
                other => Err(CliError::Validation(format!(
                    "unknown builtin channel kind {other:?}"
                ))),
            };
        }
        let inputs = self
            .inputs
            .as_ref()
            .ok_or_else(|| CliError::Validation("channel file has neither inputs nor builtin".into()))?;
        if inputs.is_empty() {
            return Err(CliError::Validation("channel has an empty alphabet".into()));
        }
        let mut labels = Vec::new();
        let mut outputs = Vec::new();
        for input in inputs {
            let state = input
                .state
                .to_state(tol, &format!("input {:?}", input.label))?;
            if let Some(d) = self.dim {
                if state.dim() != d {
                    return Err(CliError::Dimension(format!(
                        "input {:?} has dimension {}, file says {d}",
                        input.label,
                        state.dim()
                    )));
                }
            }
            labels.push(input.label.clone());
            outputs.push(state);
        }
        Channel::new(labels, outputs).map_err(CliError::from)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_state(path: &std::path::Path, tol: f64) -> Result<DensityOperator, CliError> {
    let spec: MatrixSpec = read_json(path)?;
    spec.to_state(tol, &path.display().to_string())
}

pub fn read_channel(path: &std::path::Path, tol: f64) -> Result<Channel, CliError> {
    let spec: ChannelSpec = read_json(path)?;
    spec.to_channel(tol)
}
