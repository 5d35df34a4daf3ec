use std::fs;
use std::path::Path;

use kdq_core::{ComplexMatrix, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Maps `-0.0` to `0.0` so signed zeros never reach the output.
pub fn tidy(x: f64) -> f64 {
    x + 0.0
}

/// On-disk matrix: `{"dim": d, "data": [[re, im], ...]}`, row-major, `d * d` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix<f64>) -> Self {
        MatrixFile {
            dim: m.dim(),
            data: m.as_slice().iter().map(|z| [tidy(z.re), tidy(z.im)]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix<f64>, String> {
        let data = self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(self.dim, data).map_err(|e| e.to_string())
    }
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix<f64>, CliError> {
    let parse = |reason: String| CliError::Parse {
        path: path.display().to_string(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(|e| parse(e.to_string()))?;
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| parse(e.to_string()))?;
    file.to_matrix().map_err(parse)
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = kdq_core::operator::pauli::y::<f64>();
        let f = MatrixFile::from_matrix(&m);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"dim":2,"data":[[0.0,0.0],[0.0,-1.0],[0.0,1.0],[0.0,0.0]]}"#);
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let f: MatrixFile = serde_json::from_str(r#"{"dim":2,"data":[[1,0],[0,0],[0,0]]}"#).unwrap();
        assert!(f.to_matrix().is_err());
    }

    #[test]
    fn entries_must_be_pairs() {
        assert!(serde_json::from_str::<MatrixFile>(r#"{"dim":1,"data":[[1,0,0]]}"#).is_err());
        assert!(serde_json::from_str::<MatrixFile>(r#"{"dim":1,"data":[["1",0]]}"#).is_err());
    }
}
