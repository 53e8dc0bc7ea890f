//! Two-qubit entanglement measures.
//!
//! The general concurrence evaluates the Wootters spectrum through the
//! Hermitian matrix √ρ·ρ̃·√ρ, so only the Hermitian eigensolver is needed. X
//! states get a closed-form fast path from their eight nonzero entries.

use serde::Serialize;

use crate::qmat::{hermitian_eigenvalues, kron, psd_sqrt, CMatrix, DensityMatrix};
use crate::{Error, Result};

/// Default tolerance for the PPT verdict and the X-structure check.
pub const PPT_TOL: f64 = 1e-10;
pub const X_TYPE_TOL: f64 = 1e-10;

const SPECTRAL_NOISE_FLOOR: f64 = 16.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcurrenceMethod {
    Spectral,
    XShortcut,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Descending λ_i.
    pub lambdas: [f64; 4],
    pub method: ConcurrenceMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparabilityVerdict {
    Entangled,
    Ppt,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptResult {
    pub min_eigenvalue: f64,
    pub negativity: f64,
    pub separable_verdict: SeparabilityVerdict,
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit measure needs a 4x4 state, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    Ok(())
}

/// ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy).
pub fn spin_flip(rho: &CMatrix) -> Result<CMatrix> {
    let yy = kron(&CMatrix::pauli_y(), &CMatrix::pauli_y());
    yy.mul(&rho.conj())?.mul(&yy)
}

/// Wootters concurrence max{0, λ1 − λ2 − λ3 − λ4}.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    require_two_qubits(rho)?;
    let sqrt_rho = psd_sqrt(rho)?;
    let flipped = spin_flip(rho.matrix())?;
    let r = sqrt_rho.mul(&flipped)?.mul(&sqrt_rho)?.hermitian_part()?;
    let eigenvalues = hermitian_eigenvalues(&r)?;
    // Eigenvalues inside the eigensolver's backward error are zero; left in,
    // their square roots would leak ~1e-8 into λ.
    let floor = SPECTRAL_NOISE_FLOOR * eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let mut lambdas = [0.0; 4];
    for (slot, ev) in lambdas.iter_mut().zip(eigenvalues) {
        *slot = if ev <= floor { 0.0 } else { ev.sqrt() };
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceResult {
        value,
        lambdas,
        method: ConcurrenceMethod::Spectral,
    })
}

const X_POSITIONS: [(usize, usize); 8] = [(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)];

/// Largest modulus among the entries that must vanish for an X state.
pub fn max_off_x(rho: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if !X_POSITIONS.contains(&(i, j)) {
                worst = worst.max(rho.get(i, j).norm());
            }
        }
    }
    worst
}

pub fn is_x_type(rho: &DensityMatrix, tol: f64) -> bool {
    rho.num_qubits() == 2 && max_off_x(rho.matrix()) < tol
}

/// C = 2 max{0, √(ρ14ρ41) − √(ρ22ρ33), √(ρ23ρ32) − √(ρ11ρ44)}.
pub fn concurrence_x(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    require_two_qubits(rho)?;
    let m = rho.matrix();
    let off = max_off_x(m);
    if off >= X_TYPE_TOL {
        return Err(Error::NotXType { max_off_x: off });
    }
    let d = |i: usize| m.get(i, i).re.max(0.0);
    let outer = m.get(0, 3).norm();
    let inner = m.get(1, 2).norm();
    let diag_outer = (d(0) * d(3)).sqrt();
    let diag_inner = (d(1) * d(2)).sqrt();

    let c1 = outer - diag_inner;
    let c2 = inner - diag_outer;
    let value = 2.0 * c1.max(c2).max(0.0);

    // Eigenvalues of ρρ̃ for an X state are (√(ρ11ρ44) ± |ρ14|)² and
    // (√(ρ22ρ33) ± |ρ23|)².
    let mut lambdas = [
        diag_outer + outer,
        (diag_outer - outer).abs(),
        diag_inner + inner,
        (diag_inner - inner).abs(),
    ];
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(ConcurrenceResult {
        value,
        lambdas,
        method: ConcurrenceMethod::XShortcut,
    })
}

/// X fast path when the structure allows it, spectral otherwise.
pub fn concurrence_auto(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    if is_x_type(rho, X_TYPE_TOL) {
        concurrence_x(rho)
    } else {
        concurrence(rho)
    }
}

/// Peres test on the second subsystem. Negativity sums the magnitudes of the
/// partial-transpose eigenvalues below −tol.
pub fn ppt_test(rho: &DensityMatrix, tol: f64) -> Result<PptResult> {
    require_two_qubits(rho)?;
    let pt = rho.partial_transpose(rho.labels()[1])?;
    let eigenvalues = hermitian_eigenvalues(&pt)?;
    let min_eigenvalue = eigenvalues[0];
    let negativity = eigenvalues.iter().filter(|&&e| e < -tol).fold(0.0, |acc, e| acc - e);
    let separable_verdict = if min_eigenvalue < -tol {
        SeparabilityVerdict::Entangled
    } else {
        SeparabilityVerdict::Ppt
    };
    Ok(PptResult {
        min_eigenvalue,
        negativity,
        separable_verdict,
    })
}

pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    ppt_test(rho, PPT_TOL).map(|r| r.negativity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{x_state, XParams};
    use crate::qmat::{c, QubitLabel::*};

    fn state(m: CMatrix) -> DensityMatrix {
        DensityMatrix::new(m, vec![A, R]).unwrap()
    }

    /// ½|00⟩⟨00| + ½|ψ⟩⟨ψ|, |ψ⟩ = √p|01⟩ + √q|10⟩.
    fn mixed_with_vacuum(p: f64) -> DensityMatrix {
        let q = 1.0 - p;
        let psi = [c(0.0, 0.0), c(p.sqrt(), 0.0), c(q.sqrt(), 0.0), c(0.0, 0.0)];
        state(
            CMatrix::projector(&psi)
                .add(&CMatrix::diag(&[1.0, 0.0, 0.0, 0.0]))
                .unwrap()
                .scale_real(0.5),
        )
    }

    #[test]
    fn bell_is_maximally_entangled() {
        let rho = x_state(&XParams::bell(), false).unwrap();
        let spectral = concurrence(&rho).unwrap();
        assert!((spectral.value - 1.0).abs() < 1e-12, "{spectral:?}");
        assert!((concurrence_x(&rho).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_state_unentangled() {
        let a = CMatrix::new(2, 2, vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]).unwrap();
        let b = CMatrix::new(2, 2, vec![c(0.4, 0.0), c(0.0, -0.3), c(0.0, 0.3), c(0.6, 0.0)]).unwrap();
        let rho = state(kron(&a, &b));
        assert!(concurrence(&rho).unwrap().value < 1e-7);
        let ppt = ppt_test(&rho, PPT_TOL).unwrap();
        assert_eq!(ppt.separable_verdict, SeparabilityVerdict::Ppt);
        assert_eq!(ppt.negativity, 0.0);
    }

    #[test]
    fn vacuum_mixture_concurrence() {
        // X-state spectrum: the only nonzero λ is 2·½·√(pq).
        let rho = mixed_with_vacuum(0.25);
        let expected = 3f64.sqrt() / 4.0;
        let spectral = concurrence(&rho).unwrap();
        assert!((spectral.value - expected).abs() < 1e-9, "{spectral:?}");
        let fast = concurrence_x(&rho).unwrap();
        assert!((fast.value - expected).abs() < 1e-15);
        assert!((fast.lambdas[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn diagonal_state_has_no_concurrence() {
        let rho = state(CMatrix::diag(&[0.1, 0.2, 0.3, 0.4]));
        assert_eq!(concurrence_x(&rho).unwrap().value, 0.0);
        assert!(is_x_type(&rho, X_TYPE_TOL));
        let mixed = state(CMatrix::identity(4).scale_real(0.25));
        assert!(is_x_type(&mixed, X_TYPE_TOL));
    }

    #[test]
    fn non_x_state_rejected_by_shortcut() {
        let h = 0.5f64.sqrt();
        let plus_zero = state(CMatrix::projector(&[c(h, 0.0), c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0)]));
        assert!(!is_x_type(&plus_zero, X_TYPE_TOL));
        assert!(matches!(concurrence_x(&plus_zero), Err(Error::NotXType { .. })));
        assert!(concurrence_auto(&plus_zero).unwrap().value < 1e-7);
    }

    #[test]
    fn bell_ppt() {
        let rho = x_state(&XParams::bell(), false).unwrap();
        let ppt = ppt_test(&rho, PPT_TOL).unwrap();
        assert!((ppt.min_eigenvalue + 0.5).abs() < 1e-14);
        assert!((ppt.negativity - 0.5).abs() < 1e-14);
        assert_eq!(ppt.separable_verdict, SeparabilityVerdict::Entangled);
    }

    #[test]
    fn wrong_dimension() {
        let one = DensityMatrix::new(CMatrix::diag(&[0.5, 0.5]), vec![A]).unwrap();
        assert!(matches!(concurrence(&one), Err(Error::DimensionMismatch(_))));
        assert!(ppt_test(&one, PPT_TOL).is_err());
        assert!(!is_x_type(&one, X_TYPE_TOL));
    }

    #[test]
    fn lambda_square_sum_matches_trace() {
        let rho = mixed_with_vacuum(0.4);
        let res = concurrence(&rho).unwrap();
        let tr = rho
            .matrix()
            .mul(&spin_flip(rho.matrix()).unwrap())
            .unwrap()
            .trace()
            .unwrap()
            .re;
        let sq: f64 = res.lambdas.iter().map(|l| l * l).sum();
        assert!((sq - tr).abs() < 1e-9);
    }
}
