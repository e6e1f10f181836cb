//! JSON representations of matrices, states and Hamiltonians.
//!
//! Complex numbers are `[re, im]` pairs and matrices are flat row-major
//! arrays of them.

use gife_core::{BipartiteDims, BipartiteHamiltonian, CMatrix, CVector, PureState, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub type ComplexJson = [f64; 2];
pub type MatrixJson = Vec<ComplexJson>;
pub type VectorJson = Vec<ComplexJson>;

pub fn complex_to_json(z: C64) -> ComplexJson {
    [z.re, z.im]
}

pub fn vector_to_json(v: &CVector) -> VectorJson {
    v.iter().map(|z| complex_to_json(*z)).collect()
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    m.as_slice().iter().map(|z| complex_to_json(*z)).collect()
}

fn check_finite(values: &[ComplexJson], what: &str) -> CliResult<()> {
    if values.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Input(format!("{what} contains non-finite values")));
    }
    Ok(())
}

pub fn vector_from_json(v: &[ComplexJson], dim: usize, what: &str) -> CliResult<CVector> {
    if v.len() != dim {
        return Err(CliError::Input(format!("{what} has {} entries, expected {dim}", v.len())));
    }
    check_finite(v, what)?;
    Ok(CVector::from(v.iter().map(|p| C64::new(p[0], p[1])).collect::<Vec<_>>()))
}

pub fn matrix_from_json(m: &[ComplexJson], dim: usize, what: &str) -> CliResult<CMatrix> {
    if m.len() != dim * dim {
        return Err(CliError::Input(format!("{what} has {} entries, expected {dim}x{dim}", m.len())));
    }
    check_finite(m, what)?;
    Ok(CMatrix::from_row_major(dim, dim, m.iter().map(|p| C64::new(p[0], p[1])).collect()).expect("length checked"))
}

/// Square matrix whose dimension is inferred from the entry count.
pub fn square_matrix_from_json(m: &[ComplexJson], what: &str) -> CliResult<CMatrix> {
    let dim = (m.len() as f64).sqrt().round() as usize;
    if dim == 0 || dim * dim != m.len() {
        return Err(CliError::Input(format!("{what} has {} entries, not a square matrix", m.len())));
    }
    matrix_from_json(m, dim, what)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianJson {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    #[serde(rename = "HA")]
    pub h_a: MatrixJson,
    #[serde(rename = "HB")]
    pub h_b: MatrixJson,
    #[serde(rename = "HI")]
    pub h_i: MatrixJson,
}

impl HamiltonianJson {
    pub fn from_hamiltonian(h: &BipartiteHamiltonian) -> Self {
        HamiltonianJson {
            dim_a: h.dims.dim_a(),
            dim_b: h.dims.dim_b(),
            h_a: matrix_to_json(&h.h_a),
            h_b: matrix_to_json(&h.h_b),
            h_i: matrix_to_json(&h.h_i),
        }
    }

    pub fn to_hamiltonian(&self) -> CliResult<BipartiteHamiltonian> {
        let dims = BipartiteDims::new(self.dim_a, self.dim_b)?;
        let h_a = matrix_from_json(&self.h_a, self.dim_a, "HA")?;
        let h_b = matrix_from_json(&self.h_b, self.dim_b, "HB")?;
        let h_i = matrix_from_json(&self.h_i, dims.total(), "HI")?;
        Ok(BipartiteHamiltonian::new(dims, h_a, h_b, h_i)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub amplitudes: VectorJson,
}

impl StateJson {
    pub fn from_state(s: &PureState) -> Self {
        StateJson { dim_a: s.dims().dim_a(), dim_b: s.dims().dim_b(), amplitudes: vector_to_json(s.amplitudes()) }
    }

    pub fn to_state(&self) -> CliResult<PureState> {
        let dims = BipartiteDims::new(self.dim_a, self.dim_b)?;
        Ok(PureState::new(dims, vector_from_json(&self.amplitudes, dims.total(), "amplitudes")?)?)
    }
}
