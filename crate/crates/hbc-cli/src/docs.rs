//! On-disk JSON documents for channels and ensembles.
//!
//! Complex numbers are two-element arrays [re, im]; documents carry an
//! explicit `format_version` so the layout can evolve.

use std::path::Path;

use hbc::linalg::Complex64;
use serde::{Deserialize, Serialize};

use hbc::channel::HadamardChannelSpec;
use hbc::entropic::{EnsembleEntry, InputEnsemble, Task};

use crate::{Category, CliError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub format_version: u32,
    #[serde(rename = "d_A")]
    pub d_a: usize,
    #[serde(rename = "d_C")]
    pub d_c: usize,
    pub povm_vectors: Vec<Vec<[f64; 2]>>,
    pub output_states: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnsembleDocument {
    pub task: String,
    pub entries: Vec<EnsembleEntryDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnsembleEntryDocument {
    pub w: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
    pub p: f64,
    pub state: Vec<[f64; 2]>,
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

#[cfg(test)]
fn from_complex(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|c| [c.re, c.im]).collect()
}

impl ChannelDocument {
    #[cfg(test)]
    pub fn from_spec(spec: &HadamardChannelSpec) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            d_a: spec.d_a(),
            d_c: spec.d_c(),
            povm_vectors: spec
                .povm_vectors()
                .iter()
                .map(|v| from_complex(v))
                .collect(),
            output_states: spec
                .output_states()
                .iter()
                .map(|v| from_complex(v))
                .collect(),
        }
    }

    pub fn into_spec(self) -> Result<HadamardChannelSpec, CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::new(
                Category::Parse,
                format!(
                    "unsupported format_version {} (expected {FORMAT_VERSION})",
                    self.format_version
                ),
            ));
        }
        let povm = self.povm_vectors.iter().map(|v| to_complex(v)).collect();
        let states = self.output_states.iter().map(|v| to_complex(v)).collect();
        let spec = HadamardChannelSpec::new(povm, states)
            .map_err(|e| CliError::new(Category::Validation, e.to_string()))?;
        if spec.d_a() != self.d_a || spec.d_c() != self.d_c {
            return Err(CliError::new(
                Category::Validation,
                format!(
                    "declared dims d_A={} d_C={} but vectors have d_A={} d_C={}",
                    self.d_a,
                    self.d_c,
                    spec.d_a(),
                    spec.d_c()
                ),
            ));
        }
        Ok(spec)
    }
}

impl EnsembleDocument {
    #[cfg(test)]
    pub fn from_ensemble(ensemble: &InputEnsemble) -> Self {
        Self {
            task: ensemble.task.as_str().to_string(),
            entries: ensemble
                .entries
                .iter()
                .map(|e| EnsembleEntryDocument {
                    w: e.w,
                    z: e.z,
                    p: e.probability,
                    state: from_complex(&e.state),
                })
                .collect(),
        }
    }

    pub fn into_ensemble(self) -> Result<InputEnsemble, CliError> {
        let task = Task::parse(&self.task).ok_or_else(|| {
            CliError::new(
                Category::Parse,
                format!("unknown task {:?} (expected cc, cq, or eac)", self.task),
            )
        })?;
        let entries = self
            .entries
            .into_iter()
            .map(|e| EnsembleEntry {
                w: e.w,
                z: e.z,
                probability: e.p,
                state: to_complex(&e.state),
            })
            .collect();
        Ok(InputEnsemble::new(task, entries))
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new(Category::Io, format!("cannot read {}: {e}", path.display())))
}

/// Parse and fully validate a channel document.
pub fn parse_channel_file(path: &Path) -> Result<HadamardChannelSpec, CliError> {
    let text = read_file(path)?;
    let doc: ChannelDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::new(Category::Parse, format!("{}: {e}", path.display())))?;
    let spec = doc.into_spec()?;
    let report = spec.validate();
    if !report.passed() {
        let mut problems = Vec::new();
        if !report.completeness_ok() {
            problems.push(format!(
                "completeness residual {:.6e} at entry {:?} exceeds {:.0e}",
                report.completeness_residual,
                report.worst_completeness_entry,
                hbc::channel::COMPLETENESS_TOL
            ));
        }
        for (idx, norm) in report.bad_state_norms() {
            problems.push(format!("output state {idx} has norm {norm:.9}"));
        }
        return Err(CliError::new(Category::Validation, problems.join("; ")));
    }
    Ok(spec)
}

/// Parse an ensemble document and validate it against the channel's input
/// dimension.
pub fn parse_ensemble_file(
    path: &Path,
    spec: &HadamardChannelSpec,
) -> Result<InputEnsemble, CliError> {
    let text = read_file(path)?;
    let doc: EnsembleDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::new(Category::Parse, format!("{}: {e}", path.display())))?;
    let ensemble = doc.into_ensemble()?;
    ensemble
        .validate(spec.d_a())
        .map_err(|e| CliError::new(Category::Validation, e.to_string()))?;
    Ok(ensemble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn channel_document_round_trips_exactly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let spec = HadamardChannelSpec::random(&mut rng, 3, 4, 2);
        let json = serde_json::to_string(&ChannelDocument::from_spec(&spec)).unwrap();
        let reparsed: ChannelDocument = serde_json::from_str(&json).unwrap();
        let spec2 = reparsed.into_spec().unwrap();
        for (a, b) in spec.povm_vectors().iter().zip(spec2.povm_vectors()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-12);
            }
        }
        for (a, b) in spec.output_states().iter().zip(spec2.output_states()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ensemble_document_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        let ens = InputEnsemble::random_cc(&mut rng, 2, 2, 2);
        let json = serde_json::to_string(&EnsembleDocument::from_ensemble(&ens)).unwrap();
        let back = serde_json::from_str::<EnsembleDocument>(&json)
            .unwrap()
            .into_ensemble()
            .unwrap();
        assert_eq!(back.task, ens.task);
        assert_eq!(back.entries.len(), ens.entries.len());
        for (a, b) in ens.entries.iter().zip(&back.entries) {
            assert_eq!(a.w, b.w);
            assert_eq!(a.z, b.z);
            assert!((a.probability - b.probability).abs() < 1e-15);
            for (x, y) in a.state.iter().zip(&b.state) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
