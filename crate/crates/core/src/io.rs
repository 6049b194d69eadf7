//! JSON interchange formats.
//!
//! Matrices travel as `{"dim": d, "entries": [[re, im], ...]}` in row-major
//! order; subspaces as `{"ambient_dim": d, "basis": [[re, im], ...], "k": k}`
//! with the basis flattened column-major. A degenerate operator pair is
//! `{"ambient_dim": d, "A": {"subspace": ..., "matrix": ...}, "B": ...}`.

use serde::{Deserialize, Serialize};

use crate::degenerate::DegenerateOperator;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::subspace::Subspace;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixWire {
    pub dim: usize,
    /// Row-major `[re, im]` pairs, length `dim²`.
    pub entries: Vec<[f64; 2]>,
}

impl MatrixWire {
    pub fn from_matrix(m: &CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::ShapeMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        let d = m.nrows();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Ok(Self { dim: d, entries })
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let d = self.dim;
        if self.entries.len() != d * d {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", d * d),
                got: format!("{}", self.entries.len()),
            });
        }
        Ok(CMat::from_fn(d, d, |i, j| {
            let [re, im] = self.entries[i * d + j];
            C64::new(re, im)
        }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SubspaceWire {
    pub ambient_dim: usize,
    /// Column-major `[re, im]` pairs, length `ambient_dim · k`.
    pub basis: Vec<[f64; 2]>,
    pub k: usize,
}

impl SubspaceWire {
    pub fn from_subspace(s: &Subspace) -> Self {
        let (d, k) = (s.ambient_dim(), s.dim());
        let mut basis = Vec::with_capacity(d * k);
        for j in 0..k {
            for i in 0..d {
                let z = s.basis()[(i, j)];
                basis.push([z.re, z.im]);
            }
        }
        Self {
            ambient_dim: d,
            basis,
            k,
        }
    }

    pub fn to_subspace(&self) -> Result<Subspace> {
        let (d, k) = (self.ambient_dim, self.k);
        if self.basis.len() != d * k {
            return Err(Error::ShapeMismatch {
                expected: format!("{} basis entries", d * k),
                got: format!("{}", self.basis.len()),
            });
        }
        let m = CMat::from_fn(d, k, |i, j| {
            let [re, im] = self.basis[j * d + i];
            C64::new(re, im)
        });
        Subspace::new(m)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DegenerateOperatorWire {
    pub subspace: SubspaceWire,
    pub matrix: MatrixWire,
}

impl DegenerateOperatorWire {
    pub fn from_operator(op: &DegenerateOperator) -> Result<Self> {
        Ok(Self {
            subspace: SubspaceWire::from_subspace(op.subspace()),
            matrix: MatrixWire::from_matrix(op.matrix_on_m())?,
        })
    }

    pub fn to_operator(&self) -> Result<DegenerateOperator> {
        DegenerateOperator::new(self.subspace.to_subspace()?, self.matrix.to_matrix()?)
    }
}

/// Instance file format for a degenerate operator pair.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstancePairWire {
    pub ambient_dim: usize,
    #[serde(rename = "A")]
    pub a: DegenerateOperatorWire,
    #[serde(rename = "B")]
    pub b: DegenerateOperatorWire,
}

impl InstancePairWire {
    pub fn from_pair(a: &DegenerateOperator, b: &DegenerateOperator) -> Result<Self> {
        if a.ambient_dim() != b.ambient_dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("ambient dim {}", a.ambient_dim()),
                got: format!("{}", b.ambient_dim()),
            });
        }
        Ok(Self {
            ambient_dim: a.ambient_dim(),
            a: DegenerateOperatorWire::from_operator(a)?,
            b: DegenerateOperatorWire::from_operator(b)?,
        })
    }

    pub fn to_pair(&self) -> Result<(DegenerateOperator, DegenerateOperator)> {
        let a = self.a.to_operator()?;
        let b = self.b.to_operator()?;
        if a.ambient_dim() != self.ambient_dim || b.ambient_dim() != self.ambient_dim {
            return Err(Error::ShapeMismatch {
                expected: format!("ambient dim {}", self.ambient_dim),
                got: format!("{} / {}", a.ambient_dim(), b.ambient_dim()),
            });
        }
        Ok((a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_wire_round_trip() {
        let m = CMat::from_fn(3, 3, |i, j| C64::new(i as f64 + 0.5, j as f64 - 1.0));
        let wire = MatrixWire::from_matrix(&m).unwrap();
        let back = wire.to_matrix().unwrap();
        assert_eq!(m, back);
        // row-major: entry (0,1) is the second pair
        assert_eq!(wire.entries[1], [0.5, 0.0]);
    }

    #[test]
    fn subspace_wire_round_trip() {
        let s = Subspace::coordinate(4, &[1, 3]);
        let wire = SubspaceWire::from_subspace(&s);
        assert_eq!(wire.k, 2);
        let back = wire.to_subspace().unwrap();
        assert!((back.basis() - s.basis()).norm() < 1e-15);
    }

    #[test]
    fn instance_pair_json_shape() {
        let a = DegenerateOperator::zero_on(Subspace::coordinate(2, &[0]));
        let b = DegenerateOperator::zero_on(Subspace::full(2));
        let wire = InstancePairWire::from_pair(&a, &b).unwrap();
        let text = serde_json::to_string(&wire).unwrap();
        assert!(text.contains("\"ambient_dim\":2"));
        assert!(text.contains("\"A\""));
        assert!(text.contains("\"B\""));
        let parsed: InstancePairWire = serde_json::from_str(&text).unwrap();
        let (a2, b2) = parsed.to_pair().unwrap();
        assert_eq!(a2.subspace().dim(), 1);
        assert_eq!(b2.subspace().dim(), 2);
    }
}
