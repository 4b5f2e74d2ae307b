//! Instance and matrix files.
//!
//! Both formats are JSON with complex entries written as `[re, im]` pairs in
//! row-major order and an explicit `dim` field:
//!
//! ```json
//! {
//!   "label": "c2_1",
//!   "dim": 2,
//!   "hermitian": true,
//!   "seed": null,
//!   "matrix": [[1.3088, 0.0], [1.3246, -0.6686], [1.3246, 0.6686], [0.1441, 0.0]],
//!   "rhs": [[0.7406, 0.3019], [0.4177, 0.0914]]
//! }
//! ```
//!
//! A matrix file is the same without `rhs` and `seed`. Loading an instance
//! normalizes the right-hand side (files may carry it as printed); saving
//! writes the normalized vector, so files produced by [`save_instance`]
//! round-trip byte-identically.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::qlsp::QlspInstance;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub label: String,
    pub dim: usize,
    pub hermitian: bool,
    pub seed: Option<u64>,
    /// Row-major `[re, im]` pairs, `dim * dim` of them.
    pub matrix: Vec<[f64; 2]>,
    /// `dim` pairs; not necessarily normalized on disk.
    pub rhs: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub label: String,
    pub dim: usize,
    pub hermitian: bool,
    pub matrix: Vec<[f64; 2]>,
}

/// Row-major pair list of a matrix.
pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            out.push([v.re, v.im]);
        }
    }
    out
}

pub fn pairs_to_matrix(dim: usize, pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    if pairs.len() != dim * dim {
        return Err(Error::Parse(format!(
            "matrix field holds {} entries, expected {}",
            pairs.len(),
            dim * dim
        )));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        let [re, im] = pairs[i * dim + j];
        Complex64::new(re, im)
    }))
}

pub fn vector_to_pairs(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|a| [a.re, a.im]).collect()
}

pub fn pairs_to_vector(pairs: &[[f64; 2]]) -> ComplexVector {
    ComplexVector::new(
        pairs
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
    )
}

impl InstanceFile {
    pub fn from_instance(p: &QlspInstance) -> Self {
        Self {
            label: p.label().to_string(),
            dim: p.dim(),
            hermitian: true,
            seed: p.seed(),
            matrix: matrix_to_pairs(p.matrix()),
            rhs: vector_to_pairs(p.rhs()),
        }
    }

    /// Validate and convert into an instance (normalizing the rhs).
    pub fn into_instance(self) -> Result<QlspInstance> {
        if self.rhs.len() != self.dim {
            return Err(Error::Parse(format!(
                "rhs field holds {} entries, expected {}",
                self.rhs.len(),
                self.dim
            )));
        }
        let matrix = pairs_to_matrix(self.dim, &self.matrix)?;
        if !self.hermitian {
            return Err(Error::InvariantViolation(
                "instance files require \"hermitian\": true".into(),
            ));
        }
        if !matrix.is_hermitian() {
            return Err(Error::InvariantViolation(format!(
                "matrix marked hermitian has defect {:.3e}",
                matrix.hermiticity_defect()
            )));
        }
        let rhs = pairs_to_vector(&self.rhs);
        let instance = QlspInstance::new(matrix, rhs, self.label)?;
        Ok(match self.seed {
            Some(seed) => instance.with_seed(seed),
            None => instance,
        })
    }
}

impl MatrixFile {
    pub fn new(label: impl Into<String>, matrix: &ComplexMatrix, hermitian: bool) -> Self {
        Self {
            label: label.into(),
            dim: matrix.rows(),
            hermitian,
            matrix: matrix_to_pairs(matrix),
        }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        let m = pairs_to_matrix(self.dim, &self.matrix)?;
        if self.hermitian && !m.is_hermitian() {
            return Err(Error::InvariantViolation(format!(
                "matrix marked hermitian has defect {:.3e}",
                m.hermiticity_defect()
            )));
        }
        Ok(m)
    }
}

fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn save_instance(p: &QlspInstance, path: &Path) -> Result<()> {
    std::fs::write(path, canonical_json(&InstanceFile::from_instance(p))?)?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<QlspInstance> {
    let text = std::fs::read_to_string(path)?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    file.into_instance()
}

pub fn save_matrix(file: &MatrixFile, path: &Path) -> Result<()> {
    std::fs::write(path, canonical_json(file)?)?;
    Ok(())
}

pub fn load_matrix(path: &Path) -> Result<(String, ComplexMatrix)> {
    let text = std::fs::read_to_string(path)?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let label = file.label.clone();
    Ok((label, file.into_matrix()?))
}

/// Canonical JSON text of a serializable value (pretty, trailing newline).
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    canonical_json(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qlsp::random_instance;

    #[test]
    fn instance_roundtrip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let p = random_instance(4, 99).unwrap();
        save_instance(&p, &path).unwrap();
        let bytes1 = std::fs::read(&path).unwrap();
        let loaded = load_instance(&path).unwrap();
        save_instance(&loaded, &path).unwrap();
        let bytes2 = std::fs::read(&path).unwrap();
        assert_eq!(bytes1, bytes2);
        assert_eq!(loaded.matrix(), p.matrix());
        assert_eq!(loaded.rhs(), p.rhs());
    }

    #[test]
    fn raw_rhs_is_normalized_on_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c2_1.json");
        let file = InstanceFile {
            label: "c2_1".into(),
            dim: 2,
            hermitian: true,
            seed: None,
            matrix: matrix_to_pairs(fixtures::c2_1().matrix()),
            rhs: vector_to_pairs(&fixtures::c2_1_raw_rhs()),
        };
        std::fs::write(&path, to_canonical_json(&file).unwrap()).unwrap();
        let p = load_instance(&path).unwrap();
        assert!(p.rhs().is_normalized());
        assert_eq!(p.matrix(), fixtures::c2_1().matrix());
    }

    #[test]
    fn non_hermitian_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        let file = InstanceFile {
            label: "bad".into(),
            dim: 2,
            hermitian: true,
            seed: None,
            matrix: vec![[1.0, 0.0], [2.0, 0.0], [0.5, 0.0], [1.0, 0.0]],
            rhs: vec![[1.0, 0.0], [0.0, 0.0]],
        };
        std::fs::write(&path, to_canonical_json(&file).unwrap()).unwrap();
        assert!(matches!(
            load_instance(&path),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn matrix_file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let file = MatrixFile::new("s2_1", &fixtures::s2_1(), false);
        save_matrix(&file, &path).unwrap();
        let (label, m) = load_matrix(&path).unwrap();
        assert_eq!(label, "s2_1");
        assert_eq!(m, fixtures::s2_1());
    }

    #[test]
    fn parse_error_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.json");
        std::fs::write(&path, "{ not json").unwrap();
        match load_instance(&path) {
            Err(Error::Parse(msg)) => assert!(msg.contains("broken.json")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
