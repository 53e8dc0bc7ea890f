use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::eigen::{hermitian_eigen, hermitian_eigenvalues};
use super::{CMatrix, Complex, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
use crate::{Error, Result};

/// Named qubit slots. `R` is Rob's region-I Rindler mode, `RII` its
/// region-II partner, `EA`/`ER` the environments of `A` and `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QubitLabel {
    A,
    R,
    RII,
    EA,
    ER,
}

impl QubitLabel {
    pub const fn as_str(self) -> &'static str {
        match self {
            QubitLabel::A => "A",
            QubitLabel::R => "R",
            QubitLabel::RII => "RII",
            QubitLabel::EA => "EA",
            QubitLabel::ER => "ER",
        }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QubitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(QubitLabel::A),
            "R" => Ok(QubitLabel::R),
            "RII" => Ok(QubitLabel::RII),
            "EA" => Ok(QubitLabel::EA),
            "ER" => Ok(QubitLabel::ER),
            _ => Err(Error::InvalidParameter(format!("unknown qubit label '{s}'"))),
        }
    }
}

/// Residuals describing how far a matrix is from a valid density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub hermitian_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn of(mat: &CMatrix) -> Result<Self> {
        let hermitian_residual = mat.hermitian_residual();
        let trace_residual = (mat.trace()? - Complex::new(1.0, 0.0)).norm();
        // The spectrum is taken of the Hermitian part so that a diagnostic is
        // always available, even for inputs that fail the Hermiticity check.
        let herm = mat.hermitian_part()?;
        let min_eigenvalue = hermitian_eigenvalues(&herm)?[0];
        Ok(Self {
            hermitian_residual,
            trace_residual,
            min_eigenvalue,
        })
    }

    pub fn is_physical(&self) -> bool {
        self.hermitian_residual <= HERMITIAN_TOL && self.trace_residual <= TRACE_TOL && self.min_eigenvalue >= -PSD_TOL
    }
}

/// A square matrix of dimension 2^k tagged with k distinct qubit labels.
///
/// The first label is the most significant bit of the basis index, so
/// `|m n⟩ = |m⟩_first |n⟩_second`. Construction validates Hermiticity, unit
/// trace and positivity; states flagged `nonphysical` skip the trace and
/// positivity checks and propagate the flag to everything derived from them.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMatrix,
    labels: Vec<QubitLabel>,
    nonphysical: bool,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, labels: Vec<QubitLabel>) -> Result<Self> {
        Self::with_flag(mat, labels, false)
    }

    pub fn with_flag(mat: CMatrix, labels: Vec<QubitLabel>, nonphysical: bool) -> Result<Self> {
        check_shape(&mat, &labels)?;
        let hermitian_residual = mat.hermitian_residual();
        if hermitian_residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                residual: hermitian_residual,
            });
        }
        if !nonphysical {
            let trace = mat.trace()?;
            if (trace - Complex::new(1.0, 0.0)).norm() > TRACE_TOL {
                return Err(Error::TraceMismatch { trace: trace.re });
            }
            let min_eigenvalue = hermitian_eigenvalues(&mat)?[0];
            if min_eigenvalue < -PSD_TOL {
                return Err(Error::NotPositive { min_eigenvalue });
            }
        }
        Ok(Self {
            mat,
            labels,
            nonphysical,
        })
    }

    /// Tensor product state, `self` occupying the more significant qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mat = super::kron(&self.mat, &other.mat);
        let nonphysical = self.nonphysical || other.nonphysical;
        check_shape(&mat, &labels)?;
        Ok(Self {
            mat,
            labels,
            nonphysical,
        })
    }

    /// Pure computational basis state; `bits[k]` is the value of `labels[k]`.
    pub fn basis_state(labels: Vec<QubitLabel>, bits: &[u8]) -> Result<Self> {
        if bits.len() != labels.len() {
            return Err(Error::DimensionMismatch("one bit per label required".into()));
        }
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        let dim = 1 << labels.len();
        let mut mat = CMatrix::zeros(dim, dim);
        mat.set(idx, idx, Complex::new(1.0, 0.0));
        Self::new(mat, labels)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn is_nonphysical(&self) -> bool {
        self.nonphysical
    }

    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn diagnostics(&self) -> Result<Diagnostics> {
        Diagnostics::of(&self.mat)
    }

    /// Reduced state over `keep`, in the order the labels appear in `self`.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<Self> {
        let mut positions = keep.iter().map(|&l| self.position(l)).collect::<Result<Vec<_>>>()?;
        positions.sort_unstable();
        let ordered: Vec<QubitLabel> = positions.iter().map(|&p| self.labels[p]).collect();
        self.reduce_to(&ordered)
    }

    /// Reduced state over `keep` in exactly the given order; with every label
    /// listed this is a pure qubit permutation.
    pub fn reduce_to(&self, keep: &[QubitLabel]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidParameter(
                "partial trace must keep at least one qubit".into(),
            ));
        }
        let n = self.labels.len();
        let kept = keep.iter().map(|&l| self.position(l)).collect::<Result<Vec<_>>>()?;
        for (i, &l) in keep.iter().enumerate() {
            if keep[..i].contains(&l) {
                return Err(Error::DuplicateLabel(l));
            }
        }
        let traced: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();

        // Bit position (from the most significant end) to shift amount.
        let shift = |pos: usize| n - 1 - pos;
        let assemble = |kept_bits: usize, traced_bits: usize| -> usize {
            let mut idx = 0usize;
            for (k, &pos) in kept.iter().enumerate() {
                let bit = (kept_bits >> (kept.len() - 1 - k)) & 1;
                idx |= bit << shift(pos);
            }
            for (k, &pos) in traced.iter().enumerate() {
                let bit = (traced_bits >> (traced.len() - 1 - k)) & 1;
                idx |= bit << shift(pos);
            }
            idx
        };

        let out_dim = 1usize << kept.len();
        let env_dim = 1usize << traced.len();
        let mat = CMatrix::from_fn(out_dim, out_dim, |i, j| {
            (0..env_dim).map(|t| self.mat.get(assemble(i, t), assemble(j, t))).sum()
        });
        Ok(Self {
            mat,
            labels: keep.to_vec(),
            nonphysical: self.nonphysical,
        })
    }

    /// Transposes the indices belonging to `on`, leaving the others intact.
    pub fn partial_transpose(&self, on: QubitLabel) -> Result<CMatrix> {
        let pos = self.position(on)?;
        let bit = 1usize << (self.labels.len() - 1 - pos);
        let dim = self.dim();
        Ok(CMatrix::from_fn(dim, dim, |i, j| {
            // swap the `on` bit between row and column index
            let (bi, bj) = (i & bit, j & bit);
            let src_i = (i & !bit) | bj;
            let src_j = (j & !bit) | bi;
            self.mat.get(src_i, src_j)
        }))
    }

    /// Applies `op` to the qubit `target`: returns (I ⊗ op ⊗ I)·ρ·(…)†
    /// without rescaling or validation of the result.
    pub(crate) fn conjugate_local(&self, op: &CMatrix, target: QubitLabel) -> Result<CMatrix> {
        let embedded = self.embed(op, target)?;
        embedded.conjugate(&self.mat)
    }

    /// I ⊗ … ⊗ op ⊗ … ⊗ I acting on `target`.
    pub fn embed(&self, op: &CMatrix, target: QubitLabel) -> Result<CMatrix> {
        if op.rows() != 2 || op.cols() != 2 {
            return Err(Error::DimensionMismatch("single-qubit operator must be 2x2".into()));
        }
        let pos = self.position(target)?;
        let before = CMatrix::identity(1 << pos);
        let after = CMatrix::identity(1 << (self.labels.len() - 1 - pos));
        Ok(super::kron(&super::kron(&before, op), &after))
    }
}

fn check_shape(mat: &CMatrix, labels: &[QubitLabel]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::DimensionMismatch(
            "density matrix needs at least one label".into(),
        ));
    }
    for (i, &l) in labels.iter().enumerate() {
        if labels[..i].contains(&l) {
            return Err(Error::DuplicateLabel(l));
        }
    }
    let dim = 1usize << labels.len();
    if mat.rows() != dim || mat.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "{} labels need a {dim}x{dim} matrix, got {}x{}",
            labels.len(),
            mat.rows(),
            mat.cols()
        )));
    }
    Ok(())
}

/// Diagnostic residuals; `tol` only affects [`Diagnostics::is_physical`]-style
/// decisions made by the caller and is accepted for interface symmetry.
pub fn is_density_matrix(rho: &DensityMatrix, _tol: f64) -> Result<Diagnostics> {
    rho.diagnostics()
}

/// Hermitian positive square root. Eigenvalues in [−1e-10, 0) are clamped to
/// zero; anything more negative is an error unless the state is flagged
/// nonphysical, in which case it is clamped as well.
pub fn psd_sqrt(rho: &DensityMatrix) -> Result<CMatrix> {
    psd_sqrt_matrix(rho.matrix(), rho.is_nonphysical())
}

pub(crate) fn psd_sqrt_matrix(mat: &CMatrix, clamp_negative: bool) -> Result<CMatrix> {
    let eig = hermitian_eigen(mat)?;
    if !clamp_negative && eig.values[0] < -PSD_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.values[0],
        });
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}
