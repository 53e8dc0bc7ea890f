//! Initial X states, Rob's Unruh transformation and the local damping
//! environments.
//!
//! Every channel is represented by its dilation isometry `V: H_s → H_s ⊗ H_e`
//! with the environment starting in |0⟩. Kraus operators are read off the
//! isometry as `M_μ = (I ⊗ ⟨μ|) V`, which gives two independent routes to the
//! same reduced states: conjugating by the isometry and tracing, or summing
//! over Kraus operators. Tests hold them against each other.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qmat::{c, kron, CMatrix, DensityMatrix, QubitLabel};
use crate::{Error, Result};

/// Positivity tolerance for the Bell-diagonal spectrum of [`XParams`].
pub const XPARAMS_PSD_TOL: f64 = 1e-12;
/// Completeness tolerance for Kraus sets.
pub const KRAUS_TOL: f64 = 1e-12;

/// Correlation coefficients of ρ = ¼(I + Σ c_i σ_i ⊗ σ_i).
///
/// Signs matter: (1, −1, 1) is |Φ+⟩ while (1, 1, 1) is not a state at all.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl XParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [-1, 1]")));
            }
        }
        Ok(Self { c1, c2, c3 })
    }

    /// |Φ+⟩⟨Φ+|, i.e. (1, −1, 1).
    pub fn bell() -> Self {
        Self {
            c1: 1.0,
            c2: -1.0,
            c3: 1.0,
        }
    }

    /// Werner state with the Φ+-compatible sign pattern (c, −c, c).
    pub fn werner(c: f64) -> Result<Self> {
        Self::new(c, -c, c)
    }

    /// `bell` or `werner:<c>`.
    pub fn preset(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.eq_ignore_ascii_case("bell") {
            return Ok(Self::bell());
        }
        if let Some(rest) = name.strip_prefix("werner:") {
            let c: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad Werner parameter '{rest}'")))?;
            return Self::werner(c);
        }
        Err(Error::InvalidParameter(format!(
            "unknown preset '{name}' (expected bell or werner:<c>)"
        )))
    }

    pub fn c_plus(&self) -> f64 {
        self.c1 + self.c2
    }

    pub fn c_minus(&self) -> f64 {
        self.c1 - self.c2
    }

    /// Eigenvalues of the Bell-diagonal state.
    pub fn bell_spectrum(&self) -> [f64; 4] {
        let Self { c1, c2, c3 } = *self;
        [
            0.25 * (1.0 + c1 - c2 + c3),
            0.25 * (1.0 - c1 + c2 + c3),
            0.25 * (1.0 + c1 + c2 - c3),
            0.25 * (1.0 - c1 - c2 - c3),
        ]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.bell_spectrum().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Largest minimum eigenvalue over the eight sign assignments of
    /// (|c1|, |c2|, |c3|).
    pub fn best_sign_min_eigenvalue(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for mask in 0..8u8 {
            let s = |bit: u8| if mask & bit == 0 { 1.0 } else { -1.0 };
            let flipped = Self {
                c1: s(1) * self.c1.abs(),
                c2: s(2) * self.c2.abs(),
                c3: s(4) * self.c3.abs(),
            };
            best = best.max(flipped.min_eigenvalue());
        }
        best
    }

    pub fn is_valid(&self) -> bool {
        self.min_eigenvalue() >= -XPARAMS_PSD_TOL
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::NonPhysicalParams {
                min_eigenvalue: self.min_eigenvalue(),
                best_over_signs: self.best_sign_min_eigenvalue(),
            })
        }
    }
}

/// Physical inputs r was derived from, kept for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccelerationSource {
    pub omega: f64,
    pub acceleration: f64,
    pub c_light: f64,
}

/// The dimensionless acceleration parameter r ∈ [0, π/4].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccelParams {
    pub r: f64,
    pub source: Option<AccelerationSource>,
}

impl AccelParams {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || !(-1e-12..=FRAC_PI_4 + 1e-12).contains(&r) {
            return Err(Error::InvalidParameter(format!("r = {r} outside [0, pi/4]")));
        }
        Ok(Self {
            r: r.clamp(0.0, FRAC_PI_4),
            source: None,
        })
    }

    pub fn cos_r(&self) -> f64 {
        self.r.cos()
    }

    pub fn sin_r(&self) -> f64 {
        self.r.sin()
    }
}

/// r from cos r = (e^{−2πωc/a} + 1)^{−1/2}.
///
/// Evaluated as r = atan(e^{−πωc/a}), which follows from tan²r = e^{−2πωc/a}
/// and keeps full precision in both the a → 0 and a → ∞ limits.
pub fn r_from_acceleration(omega: f64, acceleration: f64, c_light: f64) -> Result<AccelParams> {
    for (name, v) in [("omega", omega), ("a", acceleration), ("c_light", c_light)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    let r = (-PI * omega * c_light / acceleration).exp().atan();
    Ok(AccelParams {
        r,
        source: Some(AccelerationSource {
            omega,
            acceleration,
            c_light,
        }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Amplitude,
    Phase,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 2] = [ChannelKind::Amplitude, ChannelKind::Phase];

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::Amplitude => "amplitude",
            ChannelKind::Phase => "phase",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "amplitude" | "amp" | "ad" => Ok(ChannelKind::Amplitude),
            "phase" | "pd" => Ok(ChannelKind::Phase),
            _ => Err(Error::InvalidParameter(format!(
                "unknown channel '{s}' (expected amplitude or phase)"
            ))),
        }
    }
}

/// Which system qubit a channel acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    R,
}

impl Side {
    pub fn system(self) -> QubitLabel {
        match self {
            Side::A => QubitLabel::A,
            Side::R => QubitLabel::R,
        }
    }

    pub fn environment(self) -> QubitLabel {
        match self {
            Side::A => QubitLabel::EA,
            Side::R => QubitLabel::ER,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p_a: f64,
    pub p_r: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p_a: f64, p_r: f64) -> Result<Self> {
        for (name, v) in [("p_a", p_a), ("p_r", p_r)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
            }
        }
        Ok(Self { kind, p_a, p_r })
    }

    pub fn equal(kind: ChannelKind, p: f64) -> Result<Self> {
        Self::new(kind, p, p)
    }

    pub fn probability(&self, side: Side) -> f64 {
        match side {
            Side::A => self.p_a,
            Side::R => self.p_r,
        }
    }

    pub fn isometry(&self, side: Side) -> CMatrix {
        channel_isometry(self, side)
    }

    pub fn kraus(&self, side: Side) -> KrausSet {
        kraus_from_isometry(&self.isometry(side)).expect("channel isometries are complete")
    }
}

/// Operators {M_μ} with Σ M_μ† M_μ = I.
#[derive(Clone, Debug)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidParameter("empty Kraus set".into()));
        };
        let d = first.cols();
        if operators.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::DimensionMismatch(
                "Kraus operators must share a square shape".into(),
            ));
        }
        let set = Self { operators };
        let residual = set.completeness_residual();
        if residual > KRAUS_TOL {
            return Err(Error::Completeness { residual });
        }
        Ok(set)
    }

    pub fn identity() -> Self {
        Self {
            operators: vec![CMatrix::identity(2)],
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// max-norm of Σ M†M − I.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.operators[0].cols();
        let mut sum = CMatrix::zeros(d, d);
        for m in &self.operators {
            sum = sum.add(&m.dagger().mul(m).unwrap()).unwrap();
        }
        sum.max_abs_diff(&CMatrix::identity(d)).unwrap()
    }
}

/// ¼(I + c1 X⊗X + c2 Y⊗Y + c3 Z⊗Z) over (A, R).
pub fn x_state(params: &XParams, allow_nonphysical: bool) -> Result<DensityMatrix> {
    if !allow_nonphysical {
        params.validate()?;
    }
    let (x, y, z) = (CMatrix::pauli_x(), CMatrix::pauli_y(), CMatrix::pauli_z());
    let mat = CMatrix::identity(4)
        .add(&kron(&x, &x).scale_real(params.c1))?
        .add(&kron(&y, &y).scale_real(params.c2))?
        .add(&kron(&z, &z).scale_real(params.c3))?
        .scale_real(0.25);
    DensityMatrix::with_flag(mat, vec![QubitLabel::A, QubitLabel::R], !params.is_valid())
}

/// 4×2 isometry |0⟩ → cos r|00⟩ + sin r|11⟩, |1⟩ → |10⟩ onto (R, RII).
pub fn unruh_isometry(r: &AccelParams) -> CMatrix {
    let (cr, sr) = (r.cos_r(), r.sin_r());
    CMatrix::from_real(4, 2, &[cr, 0.0, 0.0, 0.0, 0.0, 1.0, sr, 0.0]).unwrap()
}

/// Extends `target` by `v` (2 → 4 dimensional) and places the new qubit
/// `new_label` directly after `target`.
pub fn apply_isometry(
    rho: &DensityMatrix,
    target: QubitLabel,
    v: &CMatrix,
    new_label: QubitLabel,
) -> Result<DensityMatrix> {
    if v.rows() != 4 || v.cols() != 2 {
        return Err(Error::DimensionMismatch("qubit isometry must be 4x2".into()));
    }
    if rho.labels().contains(&new_label) {
        return Err(Error::DuplicateLabel(new_label));
    }
    let pos = rho.position(target)?;
    let n = rho.num_qubits();
    let before = CMatrix::identity(1 << pos);
    let after = CMatrix::identity(1 << (n - 1 - pos));
    let w = kron(&kron(&before, v), &after);
    let mat = w.conjugate(rho.matrix())?;
    let mut labels = rho.labels().to_vec();
    labels.insert(pos + 1, new_label);
    DensityMatrix::with_flag(mat, labels, rho.is_nonphysical())
}

/// Rob's mode seen by the accelerated observer: dilate R into (R, RII) and
/// trace out region II. Subsystem order is preserved.
pub fn apply_unruh(rho: &DensityMatrix, r: &AccelParams) -> Result<DensityMatrix> {
    let extended = apply_isometry(rho, QubitLabel::R, &unruh_isometry(r), QubitLabel::RII)?;
    extended.partial_trace(rho.labels())
}

/// Dilation isometry of one damping channel onto (system, environment).
///
/// amplitude: |1⟩ → √q|1,0⟩ + √p|0,1⟩; phase: |1⟩ → √q|1,0⟩ + √p|1,1⟩;
/// |0⟩ → |0,0⟩ for both.
pub fn channel_isometry(spec: &ChannelSpec, side: Side) -> CMatrix {
    let p = spec.probability(side);
    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    let mut v = CMatrix::zeros(4, 2);
    v.set(0, 0, c(1.0, 0.0));
    v.set(2, 1, c(sq, 0.0));
    match spec.kind {
        ChannelKind::Amplitude => v.set(1, 1, c(sp, 0.0)),
        ChannelKind::Phase => v.set(3, 1, c(sp, 0.0)),
    }
    v
}

/// M_μ = (I ⊗ ⟨μ|_E) V for a 4×2 qubit isometry (system ⊗ environment rows).
pub fn kraus_from_isometry(v: &CMatrix) -> Result<KrausSet> {
    if v.rows() != 4 || v.cols() != 2 {
        return Err(Error::DimensionMismatch("qubit isometry must be 4x2".into()));
    }
    let ops = (0..2)
        .map(|mu| CMatrix::from_fn(2, 2, |s_out, s_in| v.get(2 * s_out + mu, s_in)))
        .collect();
    KrausSet::new(ops)
}

fn require_system_pair(rho: &DensityMatrix) -> Result<()> {
    let mut labels = rho.labels().to_vec();
    labels.sort();
    if labels != [QubitLabel::A, QubitLabel::R] {
        return Err(Error::InvalidParameter(format!(
            "expected a state over {{A, R}}, got {:?}",
            rho.labels()
        )));
    }
    Ok(())
}

/// Couples A and R to vacuum environments and returns the 4-qubit state over
/// (A, R, EA, ER).
pub fn evolve_total(rho_ar: &DensityMatrix, spec: &ChannelSpec) -> Result<DensityMatrix> {
    require_system_pair(rho_ar)?;
    let with_ea = apply_isometry(rho_ar, QubitLabel::A, &spec.isometry(Side::A), QubitLabel::EA)?;
    let full = apply_isometry(&with_ea, QubitLabel::R, &spec.isometry(Side::R), QubitLabel::ER)?;
    full.reduce_to(&TOTAL_ORDER)
}

pub const TOTAL_ORDER: [QubitLabel; 4] = [QubitLabel::A, QubitLabel::R, QubitLabel::EA, QubitLabel::ER];

/// The same 4-qubit state assembled block by block from Kraus operators:
/// the (e, e′) environment block is (M_ea ⊗ M_er) ρ (M_ea′ ⊗ M_er′)†.
pub fn evolve_total_via_kraus(rho_ar: &DensityMatrix, spec: &ChannelSpec) -> Result<DensityMatrix> {
    require_system_pair(rho_ar)?;
    let rho = rho_ar.reduce_to(&[QubitLabel::A, QubitLabel::R])?;
    let ka = spec.kraus(Side::A);
    let kr = spec.kraus(Side::R);
    let mut left: Vec<CMatrix> = Vec::with_capacity(4);
    for ma in ka.operators() {
        for mr in kr.operators() {
            left.push(kron(ma, mr));
        }
    }
    let mut total = CMatrix::zeros(16, 16);
    for (e, le) in left.iter().enumerate() {
        let partial = le.mul(rho.matrix())?;
        for (e2, re) in left.iter().enumerate() {
            let block = partial.mul(&re.dagger())?;
            for i in 0..4 {
                for j in 0..4 {
                    total.set(4 * i + e, 4 * j + e2, block.get(i, j));
                }
            }
        }
    }
    DensityMatrix::with_flag(total, TOTAL_ORDER.to_vec(), rho.is_nonphysical())
}

/// Σ_μ (I ⊗ M_μ ⊗ I) ρ (I ⊗ M_μ ⊗ I)† on the `target` slot.
pub fn apply_kraus(rho: &DensityMatrix, kraus: &KrausSet, target: QubitLabel) -> Result<DensityMatrix> {
    let dim = rho.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for m in kraus.operators() {
        acc = acc.add(&rho.conjugate_local(m, target)?)?;
    }
    DensityMatrix::with_flag(acc, rho.labels().to_vec(), rho.is_nonphysical())
}

/// The six two-qubit bipartitions of (A, R, EA, ER).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Partition {
    #[serde(rename = "AR")]
    AR,
    #[serde(rename = "AEa")]
    AEa,
    #[serde(rename = "AEr")]
    AEr,
    #[serde(rename = "REr")]
    REr,
    #[serde(rename = "REa")]
    REa,
    #[serde(rename = "EaEr")]
    EaEr,
}

impl Partition {
    /// Canonical column order.
    pub const ALL: [Partition; 6] = [
        Partition::AR,
        Partition::AEa,
        Partition::AEr,
        Partition::REr,
        Partition::REa,
        Partition::EaEr,
    ];

    pub fn labels(self) -> (QubitLabel, QubitLabel) {
        use QubitLabel::*;
        match self {
            Partition::AR => (A, R),
            Partition::AEa => (A, EA),
            Partition::AEr => (A, ER),
            Partition::REr => (R, ER),
            Partition::REa => (R, EA),
            Partition::EaEr => (EA, ER),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Partition::AR => "AR",
            Partition::AEa => "AEa",
            Partition::AEr => "AEr",
            Partition::REr => "REr",
            Partition::REa => "REa",
            Partition::EaEr => "EaEr",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        Partition::ALL
            .into_iter()
            .find(|p| p.name().to_ascii_uppercase() == key)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown partition '{s}' (expected one of AR, AEa, AEr, REr, REa, EaEr)"
                ))
            })
    }
}

/// Two-qubit reduced state in the given label order.
pub fn reduce(total: &DensityMatrix, first: QubitLabel, second: QubitLabel) -> Result<DensityMatrix> {
    if first == second {
        return Err(Error::DuplicateLabel(first));
    }
    total.reduce_to(&[first, second])
}

pub fn reduce_partition(total: &DensityMatrix, partition: Partition) -> Result<DensityMatrix> {
    let (a, b) = partition.labels();
    reduce(total, a, b)
}

/// x_state → Unruh → environments, the full forward pipeline.
pub fn evolve_from_params(
    params: &XParams,
    r: &AccelParams,
    spec: &ChannelSpec,
    allow_nonphysical: bool,
) -> Result<DensityMatrix> {
    let rho = x_state(params, allow_nonphysical)?;
    let rho = apply_unruh(&rho, r)?;
    evolve_total(&rho, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use QubitLabel::*;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.max_abs_diff(b).unwrap() <= tol
    }

    #[test]
    fn bell_params_give_phi_plus() {
        let rho = x_state(&XParams::bell(), false).unwrap();
        let h = 0.5f64.sqrt();
        let phi = CMatrix::projector(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        assert!(close(rho.matrix(), &phi, 1e-15));
    }

    #[test]
    fn zero_params_maximally_mixed() {
        let rho = x_state(&XParams::new(0.0, 0.0, 0.0).unwrap(), false).unwrap();
        assert!(close(rho.matrix(), &CMatrix::identity(4).scale_real(0.25), 0.0));
    }

    #[test]
    fn x_state_layout() {
        let p = XParams::new(0.3, -0.2, 0.5).unwrap();
        let m = x_state(&p, false).unwrap().into_matrix();
        let d = [1.0 + p.c3, 1.0 - p.c3, 1.0 - p.c3, 1.0 + p.c3];
        for (i, di) in d.iter().enumerate() {
            assert!((m.get(i, i).re - 0.25 * di).abs() < 1e-16);
        }
        assert!((m.get(0, 3).re - 0.25 * p.c_minus()).abs() < 1e-16);
        assert!((m.get(1, 2).re - 0.25 * p.c_plus()).abs() < 1e-16);
        assert_eq!(m.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn unphysical_params_rejected_for_every_sign() {
        for mask in 0..8u8 {
            let s = |bit: u8| if mask & bit == 0 { 1.0 } else { -1.0 };
            let p = XParams::new(0.7 * s(1), 0.9 * s(2), 0.4 * s(4)).unwrap();
            match x_state(&p, false) {
                Err(Error::NonPhysicalParams {
                    min_eigenvalue,
                    best_over_signs,
                }) => {
                    assert!((best_over_signs + 0.05).abs() < 1e-12);
                    assert!(min_eigenvalue <= best_over_signs + 1e-15);
                }
                other => panic!("expected rejection, got {other:?}"),
            }
            let flagged = x_state(&p, true).unwrap();
            assert!(flagged.is_nonphysical());
        }
        let err = x_state(&XParams::new(0.7, 0.9, 0.4).unwrap(), false).unwrap_err();
        assert!(err.to_string().contains("-0.05"), "{err}");
    }

    #[test]
    fn params_out_of_range() {
        assert!(XParams::new(1.2, 0.0, 0.0).is_err());
        assert!(XParams::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn presets() {
        assert_eq!(XParams::preset("bell").unwrap(), XParams::bell());
        assert_eq!(
            XParams::preset("werner:0.8").unwrap(),
            XParams::new(0.8, -0.8, 0.8).unwrap()
        );
        assert!(XParams::preset("ghz").is_err());
        assert!(XParams::preset("werner:x").is_err());
    }

    #[test]
    fn acceleration_limits() {
        let hot = r_from_acceleration(1.0, 1e12, 1.0).unwrap();
        assert!((hot.r - FRAC_PI_4).abs() < 1e-11);
        let cold = r_from_acceleration(1.0, 1e-3, 1.0).unwrap();
        assert!(cold.r.abs() < 1e-300);
        // cos r never drops below 2^{-1/2} across twelve decades of a.
        for k in -60..=60 {
            let a = 10f64.powf(k as f64 / 10.0);
            let r = r_from_acceleration(1.0, a, 1.0).unwrap();
            let expected_cos = ((-2.0 * PI / a).exp() + 1.0).powf(-0.5);
            assert!((r.r.cos() - expected_cos).abs() < 1e-14);
            assert!(r.r.cos() >= 0.5f64.sqrt() - 1e-15);
            assert!(r.r >= 0.0 && r.r <= FRAC_PI_4);
        }
        assert!(r_from_acceleration(0.0, 1.0, 1.0).is_err());
        assert!(r_from_acceleration(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn accel_range() {
        assert!(AccelParams::new(-0.1).is_err());
        assert!(AccelParams::new(0.8).is_err());
        assert_eq!(AccelParams::new(FRAC_PI_4).unwrap().r, FRAC_PI_4);
    }

    #[test]
    fn unruh_isometry_columns() {
        let v0 = unruh_isometry(&AccelParams::new(0.0).unwrap());
        assert_eq!(v0.column(0), vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v0.column(1), vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let v = unruh_isometry(&AccelParams::new(FRAC_PI_4).unwrap());
        let h = 0.5f64.sqrt();
        assert!((v.get(0, 0).re - h).abs() < 1e-15 && (v.get(3, 0).re - h).abs() < 1e-15);
    }

    #[test]
    fn unruh_at_rest_is_identity() {
        let rho = x_state(&XParams::new(0.6, -0.5, 0.3).unwrap(), false).unwrap();
        let out = apply_unruh(&rho, &AccelParams::new(0.0).unwrap()).unwrap();
        assert!(close(out.matrix(), rho.matrix(), 1e-14));
        assert_eq!(out.labels(), &[A, R]);
    }

    #[test]
    fn unruh_on_bell() {
        let r = 0.6;
        let rho = x_state(&XParams::bell(), false).unwrap();
        let out = apply_unruh(&rho, &AccelParams::new(r).unwrap()).unwrap().into_matrix();
        let (cr, sr) = (r.cos(), r.sin());
        let expected = CMatrix::from_real(
            4,
            4,
            &[
                0.5 * cr * cr,
                0.0,
                0.0,
                0.5 * cr,
                0.0,
                0.5 * sr * sr,
                0.0,
                0.0,
                0.0,
                0.0,
                0.0,
                0.0,
                0.5 * cr,
                0.0,
                0.0,
                0.5,
            ],
        )
        .unwrap();
        assert!(close(&out, &expected, 1e-15));
    }

    #[test]
    fn channel_isometries() {
        for kind in ChannelKind::ALL {
            let spec = ChannelSpec::equal(kind, 0.0).unwrap();
            let v = spec.isometry(Side::A);
            let trivial = CMatrix::from_real(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
            assert_eq!(v, trivial);
        }
        let full_amp = ChannelSpec::equal(ChannelKind::Amplitude, 1.0)
            .unwrap()
            .isometry(Side::R);
        assert_eq!(
            full_amp.column(1),
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
        let full_phase = ChannelSpec::equal(ChannelKind::Phase, 1.0).unwrap().isometry(Side::R);
        assert_eq!(
            full_phase.column(1),
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
        );
        for kind in ChannelKind::ALL {
            for p in [0.0, 0.13, 0.5, 0.97, 1.0] {
                let v = ChannelSpec::equal(kind, p).unwrap().isometry(Side::A);
                assert!(close(&v.dagger().mul(&v).unwrap(), &CMatrix::identity(2), 1e-14));
            }
        }
        assert!(ChannelSpec::new(ChannelKind::Phase, 1.2, 0.0).is_err());
    }

    #[test]
    fn kraus_extraction() {
        let p: f64 = 0.3;
        let q = 1.0 - p;
        let amp = ChannelSpec::equal(ChannelKind::Amplitude, p).unwrap().kraus(Side::A);
        let m0 = CMatrix::diag(&[1.0, q.sqrt()]);
        let m1 = CMatrix::from_real(2, 2, &[0.0, p.sqrt(), 0.0, 0.0]).unwrap();
        assert!(close(&amp.operators()[0], &m0, 1e-16));
        assert!(close(&amp.operators()[1], &m1, 1e-16));

        let ph = ChannelSpec::equal(ChannelKind::Phase, p).unwrap().kraus(Side::A);
        assert!(close(&ph.operators()[0], &m0, 1e-16));
        assert!(close(&ph.operators()[1], &CMatrix::diag(&[0.0, p.sqrt()]), 1e-16));

        let none = ChannelSpec::equal(ChannelKind::Phase, 0.0).unwrap().kraus(Side::R);
        assert_eq!(none.operators()[0], CMatrix::identity(2));
        assert_eq!(none.operators()[1], CMatrix::zeros(2, 2));
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let half = CMatrix::identity(2).scale_real(0.5);
        assert!(matches!(KrausSet::new(vec![half]), Err(Error::Completeness { .. })));
        let bad_iso = CMatrix::from_real(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0]).unwrap();
        assert!(kraus_from_isometry(&bad_iso).is_err());
    }

    #[test]
    fn evolve_without_damping_attaches_vacuum() {
        let rho = x_state(&XParams::new(0.6, -0.5, 0.3).unwrap(), false).unwrap();
        for kind in ChannelKind::ALL {
            let total = evolve_total(&rho, &ChannelSpec::equal(kind, 0.0).unwrap()).unwrap();
            let vac = DensityMatrix::basis_state(vec![EA, ER], &[0, 0]).unwrap();
            let expected = rho.tensor(&vac).unwrap();
            assert!(close(total.matrix(), expected.matrix(), 1e-15));
            let env = reduce(&total, EA, ER).unwrap();
            assert!(close(env.matrix(), vac.matrix(), 1e-15));
        }
    }

    #[test]
    fn bell_amplitude_reduction() {
        let p: f64 = 0.35;
        let q = 1.0 - p;
        let rho = x_state(&XParams::bell(), false).unwrap();
        let total = evolve_total(&rho, &ChannelSpec::equal(ChannelKind::Amplitude, p).unwrap()).unwrap();
        let ar = reduce(&total, A, R).unwrap().into_matrix();
        let expected = CMatrix::from_real(
            4,
            4,
            &[
                0.5 * (1.0 + p * p),
                0.0,
                0.0,
                0.5 * q,
                0.0,
                0.5 * p * q,
                0.0,
                0.0,
                0.0,
                0.0,
                0.5 * p * q,
                0.0,
                0.5 * q,
                0.0,
                0.0,
                0.5 * q * q,
            ],
        )
        .unwrap();
        assert!(close(&ar, &expected, 1e-15));

        // Single-qubit dilation of the maximally mixed marginal of R.
        let rer = reduce(&total, R, ER).unwrap().into_matrix();
        let psi = [c(0.0, 0.0), c(p.sqrt(), 0.0), c(q.sqrt(), 0.0), c(0.0, 0.0)];
        let expected = CMatrix::projector(&psi)
            .add(&CMatrix::diag(&[1.0, 0.0, 0.0, 0.0]))
            .unwrap()
            .scale_real(0.5);
        assert!(close(&rer, &expected, 1e-15));
    }

    #[test]
    fn kraus_route_matches_dilation() {
        let rho = apply_unruh(
            &x_state(&XParams::new(0.6, -0.5, 0.3).unwrap(), false).unwrap(),
            &AccelParams::new(0.4).unwrap(),
        )
        .unwrap();
        for kind in ChannelKind::ALL {
            let spec = ChannelSpec::new(kind, 0.3, 0.7).unwrap();
            let a = evolve_total(&rho, &spec).unwrap();
            let b = evolve_total_via_kraus(&rho, &spec).unwrap();
            assert!(close(a.matrix(), b.matrix(), 1e-14));

            let via_kraus = apply_kraus(
                &apply_kraus(&rho, &spec.kraus(Side::A), A).unwrap(),
                &spec.kraus(Side::R),
                R,
            )
            .unwrap();
            let via_trace = reduce(&a, A, R).unwrap();
            assert!(close(via_kraus.matrix(), via_trace.matrix(), 1e-14));
        }
    }

    #[test]
    fn kraus_special_cases() {
        let rho = x_state(&XParams::new(0.6, -0.5, 0.3).unwrap(), false).unwrap();
        let same = apply_kraus(&rho, &KrausSet::identity(), A).unwrap();
        assert!(close(same.matrix(), rho.matrix(), 0.0));
        let full = ChannelSpec::equal(ChannelKind::Amplitude, 1.0).unwrap();
        let out = apply_kraus(&rho, &full.kraus(Side::R), R).unwrap();
        let r_marginal = out.partial_trace(&[R]).unwrap();
        assert!(close(r_marginal.matrix(), &CMatrix::diag(&[1.0, 0.0]), 1e-15));
    }

    #[test]
    fn partition_names_round_trip() {
        for p in Partition::ALL {
            assert_eq!(p.name().parse::<Partition>().unwrap(), p);
        }
        assert_eq!("EAER".parse::<Partition>().unwrap(), Partition::EaEr);
        assert!("AB".parse::<Partition>().is_err());
        let total = evolve_from_params(
            &XParams::bell(),
            &AccelParams::new(0.2).unwrap(),
            &ChannelSpec::equal(ChannelKind::Phase, 0.2).unwrap(),
            false,
        )
        .unwrap();
        assert!(reduce(&total, A, A).is_err());
    }
}
