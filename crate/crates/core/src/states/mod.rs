//! Bipartite quantum states: validation, canonical families, samplers and
//! the PPT test.

mod families;
mod io;
mod ppt;
mod sampling;

pub use families::{
    bell_basis, bell_diagonal, binary_entropy, invert_binary_entropy, pure_with_schmidt, werner,
    BellLabel,
};
pub use io::{FamilySpec, StateFile};
pub use ppt::{is_ppt, PptResult, PPT_TOL};
pub use sampling::{
    dirichlet_weights, ginibre_mixed, haar_pure, haar_qubit, haar_unitary, random_separable,
    DEFAULT_SEPARABLE_TERMS,
};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace, Dims, Subsystem};
use crate::{CMatrix, C64};

/// Hermiticity and trace tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Eigenvalues below `-NEGATIVITY_TOL` make a matrix invalid.
pub const NEGATIVITY_TOL: f64 = 1e-8;
/// Eigenvalues in `[-ROUNDOFF_TOL, 0)` are round-off on the null space and
/// are left untouched; only `(-NEGATIVITY_TOL, -ROUNDOFF_TOL)` is clipped.
pub const ROUNDOFF_TOL: f64 = 1e-12;
/// Largest supported local dimension.
pub const MAX_LOCAL_DIM: usize = 6;

fn check_dims((da, db): Dims) -> Result<()> {
    if da == 0 || db == 0 || da > MAX_LOCAL_DIM || db > MAX_LOCAL_DIM {
        return Err(Error::Domain(format!(
            "local dimensions {da}x{db} outside 1..={MAX_LOCAL_DIM}"
        )));
    }
    Ok(())
}

pub(crate) fn require_two_qubits(dims: Dims, what: &str) -> Result<()> {
    if dims != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "{what} requires a 2x2 system, got {}x{}",
            dims.0, dims.1
        )));
    }
    Ok(())
}

/// Trace-one positive semidefinite Hermitian operator on `C^dA ⊗ C^dB`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(mat: CMatrix, dims: Dims) -> Result<Self> {
        Self::validate_with_report(mat, dims).map(|(rho, _)| rho)
    }

    /// Like [`validate`](Self::validate) but also returns how many slightly
    /// negative eigenvalues were clipped.
    pub fn validate_with_report(mat: CMatrix, dims: Dims) -> Result<(Self, usize)> {
        check_dims(dims)?;
        let n = dims.0 * dims.1;
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims {}x{}",
                mat.rows(),
                mat.cols(),
                dims.0,
                dims.1
            )));
        }
        let dev = mat.hermiticity_deviation();
        if dev > STATE_TOL {
            return Err(Error::NotHermitian { deviation: dev, tol: STATE_TOL });
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::NotUnitTrace { deviation: (tr - 1.0).abs(), tol: STATE_TOL });
        }
        let eig = hermitian_eig(&mat)?;
        let min = eig.min_value();
        if min < -NEGATIVITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min, tol: NEGATIVITY_TOL });
        }
        let clipped = eig.values.iter().filter(|&&l| l < -ROUNDOFF_TOL).count();
        let mat = if clipped > 0 {
            let total: f64 = eig.values.iter().map(|&l| l.max(0.0)).sum();
            eig.reconstruct_with(|l| l.max(0.0) / total)
        } else {
            mat.hermitian_part()
        };
        Ok((Self { dims, mat }, clipped))
    }

    /// Wraps a matrix already known to be valid (constructed analytically).
    pub(crate) fn from_trusted(mat: CMatrix, dims: Dims) -> Self {
        debug_assert!(Self::validate(mat.clone(), dims).is_ok());
        Self { dims, mat }
    }

    pub fn maximally_mixed(dims: Dims) -> Result<Self> {
        check_dims(dims)?;
        let n = dims.0 * dims.1;
        Ok(Self { dims, mat: CMatrix::identity(n).scale(1.0 / n as f64) })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eig(&self.mat).expect("validated state is Hermitian").values
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    pub fn reduced(&self, keep: Subsystem) -> CMatrix {
        partial_trace(&self.mat, self.dims, keep).expect("dims checked at construction")
    }

    /// `U ρ U^H` for a unitary `U` on the full space.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        let m = &(u * &self.mat) * &u.adjoint();
        Self::validate(m, self.dims)
    }
}

/// Unit vector on `C^dA ⊗ C^dB`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Dims,
    amp: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Dims, amp: Vec<C64>) -> Result<Self> {
        check_dims(dims)?;
        if amp.len() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {}x{}",
                amp.len(),
                dims.0,
                dims.1
            )));
        }
        let norm = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Domain(format!("state norm {norm} is not 1 within {STATE_TOL:e}")));
        }
        Ok(Self { dims, amp })
    }

    /// Normalizes `amp`; fails on the zero vector.
    pub fn normalized(dims: Dims, mut amp: Vec<C64>) -> Result<Self> {
        let norm = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        for z in &mut amp {
            *z /= norm;
        }
        Self::new(dims, amp)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { dims: self.dims, mat: CMatrix::outer(&self.amp) }
    }

    /// Reduced density matrix on `keep`, computed directly from amplitudes.
    pub fn reduced(&self, keep: Subsystem) -> CMatrix {
        let (da, db) = self.dims;
        let a = &self.amp;
        match keep {
            Subsystem::A => CMatrix::from_fn(da, da, |i, j| {
                (0..db).map(|k| a[i * db + k] * a[j * db + k].conj()).sum()
            }),
            Subsystem::B => CMatrix::from_fn(db, db, |i, j| {
                (0..da).map(|k| a[k * db + i] * a[k * db + j].conj()).sum()
            }),
        }
    }
}

/// Either kind of state; the input type of measure evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dims(&self) -> Dims {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, State::Pure(_))
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}
