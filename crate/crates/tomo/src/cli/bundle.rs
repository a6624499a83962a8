//! Experiment bundle file format: one JSON document holding the true state,
//! the measurement ensemble, and the click vector, with numeric arrays
//! base64-encoded as little-endian float64 (row-major for matrices, complex
//! data split into a real and an imaginary plane).

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::ExperimentSpec;
use crate::types::{ClickVector, DensityMatrix, MeasurementEnsemble};

pub const BUNDLE_FORMAT: &str = "tomo-bundle";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexMatrixPayload {
    pub rows: usize,
    pub cols: usize,
    /// base64(little-endian f64 × rows·cols), row-major: real plane.
    pub re: String,
    /// base64(little-endian f64 × rows·cols), row-major: imaginary plane.
    pub im: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsemblePayload {
    #[serde(flatten)]
    pub matrix: ComplexMatrixPayload,
    pub povm_subsets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClicksPayload {
    /// base64(little-endian f64 × N).
    pub counts: String,
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataBundle {
    pub format: String,
    pub version: u32,
    pub experiment: ExperimentSpec,
    pub true_state: ComplexMatrixPayload,
    pub ensemble: EnsemblePayload,
    pub clicks: ClicksPayload,
}

fn encode_f64s(values: impl Iterator<Item = f64>) -> String {
    let mut bytes = Vec::new();
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    STANDARD.encode(bytes)
}

fn decode_f64s(field: &str, text: &str, expected: usize) -> Result<Vec<f64>> {
    let bytes = STANDARD
        .decode(text)
        .map_err(|e| Error::InvalidInput(format!("field `{field}`: invalid base64: {e}")))?;
    if bytes.len() != expected * 8 {
        return Err(Error::InvalidInput(format!(
            "field `{field}`: expected {} bytes ({expected} float64), got {}",
            expected * 8,
            bytes.len()
        )));
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
}

fn encode_matrix(m: &DMatrix<Complex64>) -> ComplexMatrixPayload {
    let (rows, cols) = (m.nrows(), m.ncols());
    let row_major = |pick: fn(&Complex64) -> f64| {
        (0..rows).flat_map(move |i| (0..cols).map(move |j| pick(&m[(i, j)])))
    };
    ComplexMatrixPayload {
        rows,
        cols,
        re: encode_f64s(row_major(|z| z.re)),
        im: encode_f64s(row_major(|z| z.im)),
    }
}

fn decode_matrix(field: &str, payload: &ComplexMatrixPayload) -> Result<DMatrix<Complex64>> {
    let len = payload.rows * payload.cols;
    let re = decode_f64s(&format!("{field}.re"), &payload.re, len)?;
    let im = decode_f64s(&format!("{field}.im"), &payload.im, len)?;
    Ok(DMatrix::from_fn(payload.rows, payload.cols, |i, j| {
        let k = i * payload.cols + j;
        Complex64::new(re[k], im[k])
    }))
}

impl DataBundle {
    pub fn pack(
        experiment: &ExperimentSpec,
        state: &DensityMatrix,
        ensemble: &MeasurementEnsemble,
        clicks: &ClickVector,
    ) -> Self {
        Self {
            format: BUNDLE_FORMAT.into(),
            version: BUNDLE_VERSION,
            experiment: experiment.clone(),
            true_state: encode_matrix(state.entries()),
            ensemble: EnsemblePayload {
                matrix: encode_matrix(ensemble.rows()),
                povm_subsets: ensemble.povm_subsets().to_vec(),
            },
            clicks: ClicksPayload {
                counts: encode_f64s(clicks.counts().iter().copied()),
                scale: clicks.scale(),
            },
        }
    }

    pub fn unpack(&self) -> Result<(DensityMatrix, MeasurementEnsemble, ClickVector)> {
        if self.format != BUNDLE_FORMAT {
            return Err(Error::InvalidInput(format!(
                "field `format`: expected \"{BUNDLE_FORMAT}\", got \"{}\"",
                self.format
            )));
        }
        if self.version != BUNDLE_VERSION {
            return Err(Error::InvalidInput(format!(
                "field `version`: unsupported version {}",
                self.version
            )));
        }
        let state = DensityMatrix::from_matrix(decode_matrix("true_state", &self.true_state)?)?;
        let d = state.dim();
        let rows = decode_matrix("ensemble", &self.ensemble.matrix)?;
        if rows.ncols() != d {
            return Err(Error::Dimension { expected: d, got: rows.ncols() });
        }
        let n = rows.nrows();
        let ensemble =
            MeasurementEnsemble::new(rows, self.ensemble.povm_subsets.clone(), n >= d * d)?;
        let counts = decode_f64s("clicks.counts", &self.clicks.counts, n)?;
        let clicks = match self.clicks.scale {
            Some(r) => ClickVector::with_scale(counts, r)?,
            None => ClickVector::new(counts)?,
        };
        Ok((state, ensemble, clicks))
    }
}
