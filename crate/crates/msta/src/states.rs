//! Density-operator constructors: Bloch and product states, projector
//! spheres, general pure states, Bell/GHZ/W states and rotors.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::algebra::{Complex64, Letter, Multivector, PauliString};
use crate::error::{Error, Result};
use crate::oracle;
use crate::vec3::{self, Vec3};

const UNIT_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-10;

/// Builds a real-coefficient multivector from `(pauli string, coefficient)` pairs.
///
/// # Panics
/// On malformed strings; intended for literal closed forms.
pub fn from_strings(n: usize, terms: &[(&str, f64)]) -> Multivector {
    Multivector::from_terms(
        n,
        terms.iter().map(|(s, c)| {
            (
                s.parse::<PauliString>().expect("valid Pauli string"),
                Complex64::new(*c, 0.0),
            )
        }),
    )
    .expect("consistent qubit count")
}

/// A right-handed orthonormal spin frame: `z` is the spin axis, `x` the
/// reference direction used for the `X`-terms of projector spheres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x: Vec3,
    pub y: Vec3,
    pub z: Vec3,
}

impl Frame {
    pub fn standard() -> Self {
        Frame {
            x: [1.0, 0.0, 0.0],
            y: [0.0, 1.0, 0.0],
            z: [0.0, 0.0, 1.0],
        }
    }

    /// The frame reached from the standard one by the smallest rotation taking `z` to `axis`.
    pub fn from_axis(axis: Vec3) -> Result<Self> {
        let len = vec3::norm(axis);
        if (len - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitAxis(len));
        }
        let k = vec3::cross([0.0, 0.0, 1.0], axis);
        let s = vec3::norm(k);
        if s < 1e-15 {
            return Ok(if axis[2] > 0.0 {
                Frame::standard()
            } else {
                Frame {
                    x: [1.0, 0.0, 0.0],
                    y: [0.0, -1.0, 0.0],
                    z: [0.0, 0.0, -1.0],
                }
            });
        }
        let k = vec3::scale(k, 1.0 / s);
        let angle = s.atan2(axis[2]);
        Ok(Frame {
            x: vec3::rotate([1.0, 0.0, 0.0], k, angle),
            y: vec3::rotate([0.0, 1.0, 0.0], k, angle),
            z: axis,
        })
    }

    /// Builds a frame from a spin axis and a reference direction; the
    /// reference is projected orthogonal to the axis.
    pub fn from_axis_and_reference(axis: Vec3, reference: Vec3) -> Result<Self> {
        let len = vec3::norm(axis);
        if (len - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitAxis(len));
        }
        let perp = vec3::sub(reference, vec3::scale(axis, vec3::dot(axis, reference)));
        let x = vec3::normalize(perp).ok_or(Error::NonUnitAxis(0.0))?;
        Ok(Frame {
            x,
            y: vec3::cross(axis, x),
            z: axis,
        })
    }

    /// The same frame with `x`, `y` turned about `z` by `phi`.
    pub fn with_azimuth(&self, phi: f64) -> Frame {
        Frame {
            x: vec3::rotate(self.x, self.z, phi),
            y: vec3::rotate(self.y, self.z, phi),
            z: self.z,
        }
    }

    /// Largest deviation from a right-handed orthonormal triad.
    pub fn orthonormality_error(&self) -> f64 {
        let c = vec3::cross(self.x, self.y);
        [
            (vec3::dot(self.x, self.x) - 1.0).abs(),
            (vec3::dot(self.y, self.y) - 1.0).abs(),
            (vec3::dot(self.z, self.z) - 1.0).abs(),
            vec3::dot(self.x, self.y).abs(),
            vec3::dot(self.x, self.z).abs(),
            vec3::dot(self.y, self.z).abs(),
            vec3::norm(vec3::sub(c, self.z)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn max_diff(&self, other: &Frame) -> f64 {
        [
            vec3::sub(self.x, other.x),
            vec3::sub(self.y, other.y),
            vec3::sub(self.z, other.z),
        ]
        .into_iter()
        .map(vec3::norm)
        .fold(0.0, f64::max)
    }
}

/// A product of single-qubit projectors `(1 + s_k z_k)/2`, one per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    frames: Vec<Frame>,
    signs: Vec<i8>,
}

impl ProductState {
    pub fn new(frames: Vec<Frame>, signs: Vec<i8>) -> Result<Self> {
        if frames.len() != signs.len() {
            return Err(Error::QubitCountMismatch {
                left: frames.len(),
                right: signs.len(),
            });
        }
        Multivector::try_zero(frames.len())?;
        for f in &frames {
            let e = f.orthonormality_error();
            if e > UNIT_TOL {
                return Err(Error::NonUnitAxis(1.0 + e));
            }
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidSubset("signs must be +1 or -1".into()));
        }
        Ok(ProductState { frames, signs })
    }

    /// Product state with spin axes `axes` (canonical frames) and the given signs.
    pub fn from_axes(axes: &[Vec3], signs: &[i8]) -> Result<Self> {
        let frames = axes
            .iter()
            .map(|&a| Frame::from_axis(a))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frames, signs.to_vec())
    }

    /// Basis state `index` of the product basis defined by `frames`
    /// (bit 0 is `+`, qubit `a` is the most significant bit).
    pub fn basis(frames: &[Frame], index: usize) -> Result<Self> {
        let n = frames.len();
        let signs = (0..n)
            .map(|k| {
                if (index >> (n - 1 - k)) & 1 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Self::new(frames.to_vec(), signs)
    }

    /// Computational basis state `index` with standard frames.
    pub fn computational(n: usize, index: usize) -> Result<Self> {
        Self::basis(&vec![Frame::standard(); n], index)
    }

    pub fn n_qubits(&self) -> usize {
        self.frames.len()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn axis(&self, qubit: usize) -> Vec3 {
        self.frames[qubit].z
    }
}

/// A Hermitian, unit-trace multivector.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    mv: Multivector,
}

impl DensityOperator {
    /// Wraps `mv` after checking Hermiticity and unit trace (tolerance `1e-10`).
    pub fn new(mv: Multivector) -> Result<Self> {
        let h = mv.hermiticity_error();
        if h > DENSITY_TOL {
            return Err(Error::NotHermitian(h));
        }
        let tr = mv.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotUnitTrace(tr));
        }
        Ok(DensityOperator { mv })
    }

    pub(crate) fn from_mv_unchecked(mv: Multivector) -> Self {
        DensityOperator { mv }
    }

    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    pub fn into_mv(self) -> Multivector {
        self.mv
    }

    pub fn n_qubits(&self) -> usize {
        self.mv.n_qubits()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.mv * &self.mv).trace()
    }

    /// Largest coefficient of `rho^2 - rho`.
    pub fn purity_error(&self) -> f64 {
        (&self.mv * &self.mv).max_abs_diff(&self.mv)
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity_error() < tol
    }

    /// Reduced Bloch vector of `qubit`: `2^N` times the grade-one coefficients.
    pub fn bloch_vector(&self, qubit: usize) -> Vec3 {
        let n = self.n_qubits();
        let scale = (1u64 << n) as f64;
        let mut v = [0.0; 3];
        for (k, l) in Letter::VECTORS.iter().enumerate() {
            v[k] = scale * self.mv.coeff(&PauliString::single(n, qubit, *l)).re;
        }
        v
    }

    /// `2^N` times the real coefficient of the blade `letters`, i.e. `tr(P rho)`.
    pub fn correlation(&self, letters: &[Letter]) -> f64 {
        (1u64 << self.n_qubits()) as f64 * self.mv.coeff_of(letters).re
    }

    /// Oracle eigenvalues, checked to lie in `[-1e-10, 1 + 1e-10]`.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let values = oracle::hermitian_eigenvalues(&oracle::to_matrix(&self.mv))?;
        for &v in &values {
            if v < -DENSITY_TOL {
                return Err(Error::NotPositive(v));
            }
            if v > 1.0 + DENSITY_TOL {
                return Err(Error::NotPositive(1.0 - v));
            }
        }
        Ok(values)
    }
}

/// `(1 + n . sigma)/2` on one qubit.
pub fn bloch_state(n: Vec3) -> Result<DensityOperator> {
    let len = vec3::norm(n);
    if len > 1.0 + UNIT_TOL {
        return Err(Error::BlochOutOfRange(len));
    }
    let mv = &Multivector::scalar(1, 0.5) + &Multivector::vector(1, 0, vec3::scale(n, 0.5));
    Ok(DensityOperator::from_mv_unchecked(mv))
}

fn product_mv(s: &ProductState) -> Multivector {
    let n = s.n_qubits();
    let mut mv = Multivector::one(n);
    for (k, (f, &sign)) in s.frames.iter().zip(&s.signs).enumerate() {
        let factor = &Multivector::scalar(n, 0.5)
            + &Multivector::vector(n, k, vec3::scale(f.z, 0.5 * sign as f64));
        mv = &mv * &factor;
    }
    mv
}

/// The product of per-qubit projectors; idempotent.
pub fn product_state(s: &ProductState) -> DensityOperator {
    DensityOperator::from_mv_unchecked(product_mv(s))
}

/// Which of the two defining product states sits at the north pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZOrder {
    FirstNorth,
    SecondNorth,
}

/// The Pauli-algebra triple `(X, Y, Z)` living in the projector `P` spanned
/// by two orthogonal product states.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorSphere {
    pub p: Multivector,
    pub x: Multivector,
    pub y: Multivector,
    pub z: Multivector,
    /// Qubits on which the two product states have opposite signs.
    pub differing: Vec<usize>,
}

/// Builds the sphere of `s1`, `s2`: `P = s1 + s2`, `Z = north - south`,
/// `X = (product of the differing qubits' frame x vectors) P`, `Y = ι X Z`.
pub fn projector_sphere(
    s1: &ProductState,
    s2: &ProductState,
    order: ZOrder,
) -> Result<ProjectorSphere> {
    if s1.n_qubits() != s2.n_qubits() {
        return Err(Error::QubitCountMismatch {
            left: s1.n_qubits(),
            right: s2.n_qubits(),
        });
    }
    if s1
        .frames
        .iter()
        .zip(&s2.frames)
        .any(|(a, b)| a.max_diff(b) > UNIT_TOL)
    {
        return Err(Error::MismatchedAxes);
    }
    let differing: Vec<usize> = (0..s1.n_qubits())
        .filter(|&k| s1.signs[k] != s2.signs[k])
        .collect();
    if differing.is_empty() {
        return Err(Error::NotOrthogonal);
    }
    Ok(sphere_from_parts(
        product_mv(s1),
        product_mv(s2),
        &s1.frames,
        differing,
        order,
    ))
}

fn sphere_from_parts(
    a: Multivector,
    b: Multivector,
    frames: &[Frame],
    differing: Vec<usize>,
    order: ZOrder,
) -> ProjectorSphere {
    let n = a.n_qubits();
    let p = &a + &b;
    let z = match order {
        ZOrder::FirstNorth => &a - &b,
        ZOrder::SecondNorth => &b - &a,
    };
    let mut x = p.clone();
    for &k in differing.iter().rev() {
        x = &Multivector::vector(n, k, frames[k].x) * &x;
    }
    let y = &(&Multivector::iota(n) * &x) * &z;
    ProjectorSphere {
        p,
        x,
        y,
        z,
        differing,
    }
}

impl ProjectorSphere {
    /// Largest violation of the sphere's algebraic relations.
    pub fn relation_error(&self) -> f64 {
        let (p, x, y, z) = (&self.p, &self.x, &self.y, &self.z);
        let n = p.n_qubits();
        let iota_p = &Multivector::iota(n) * p;
        [
            (p * p).max_abs_diff(p),
            (x * x).max_abs_diff(p),
            (y * y).max_abs_diff(p),
            (z * z).max_abs_diff(p),
            (&(x * y) + &(y * x)).norm1(),
            (&(x * z) + &(z * x)).norm1(),
            (&(y * z) + &(z * y)).norm1(),
            (&(x * y) * z).max_abs_diff(&iota_p),
            p.commutator(x).unwrap().norm1(),
            p.commutator(y).unwrap().norm1(),
            p.commutator(z).unwrap().norm1(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `cos(psi) X + sin(psi) Y`: the reference `X` turned about `Z` by `psi`.
    pub fn x_at(&self, psi: f64) -> Multivector {
        &(&self.x * psi.cos()) + &(&self.y * psi.sin())
    }
}

/// `(P + cos(theta) Z + sin(theta)(cos(phi) X + sin(phi) Y))/2`.
pub fn sphere_state(sph: &ProjectorSphere, theta: f64, phi: f64) -> DensityOperator {
    let mv = &(&sph.p + &(&sph.z * theta.cos())) + &(&sph.x_at(phi) * theta.sin());
    DensityOperator::from_mv_unchecked(mv * 0.5)
}

/// The general pure state `sum p_i {i} + sum_{i<j} sqrt(p_i p_j) X_{psi_ij}`
/// in the product basis defined by `frames`, with `psi_ij = arg(a_j) - arg(a_i)`
/// and `Z_ij = {i} - {j}`.
pub fn pure_state_from_amplitudes(amps: &[Complex64], frames: &[Frame]) -> Result<DensityOperator> {
    let dim = amps.len();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if frames.len() != n {
        return Err(Error::QubitCountMismatch {
            left: n,
            right: frames.len(),
        });
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm2));
    }
    let basis: Vec<Option<Multivector>> = (0..dim)
        .map(|i| {
            if amps[i].norm_sqr() > 0.0 {
                ProductState::basis(frames, i).map(|s| Some(product_mv(&s)))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;
    let mut rho = Multivector::zero(n);
    for i in 0..dim {
        let Some(bi) = &basis[i] else { continue };
        rho += &(bi * amps[i].norm_sqr());
        for j in i + 1..dim {
            let Some(bj) = &basis[j] else { continue };
            let differing: Vec<usize> = (0..n)
                .filter(|&k| ((i ^ j) >> (n - 1 - k)) & 1 == 1)
                .collect();
            let sph = sphere_from_parts(
                bi.clone(),
                bj.clone(),
                frames,
                differing,
                ZOrder::FirstNorth,
            );
            let psi = amps[j].arg() - amps[i].arg();
            rho += &(sph.x_at(psi) * (amps[i].norm() * amps[j].norm()));
        }
    }
    Ok(DensityOperator::from_mv_unchecked(rho))
}

/// [`pure_state_from_amplitudes`] in the computational basis.
pub fn pure_state(amps: &[Complex64]) -> Result<DensityOperator> {
    let n = amps.len().trailing_zeros() as usize;
    pure_state_from_amplitudes(amps, &vec![Frame::standard(); n.max(1)])
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    /// Computational-basis amplitudes.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let o = Complex64::default();
        match self {
            Bell::PhiPlus => [h, o, o, h],
            Bell::PhiMinus => [h, o, o, -h],
            Bell::PsiPlus => [o, h, h, o],
            Bell::PsiMinus => [o, h, -h, o],
        }
    }
}

/// `Phi± = (1 + zz ± xx ∓ yy)/4`, `Psi± = (1 - zz ± xx ± yy)/4`.
pub fn bell(which: Bell) -> DensityOperator {
    let (zz, xx, yy) = match which {
        Bell::PhiPlus => (1.0, 1.0, -1.0),
        Bell::PhiMinus => (1.0, -1.0, 1.0),
        Bell::PsiPlus => (-1.0, 1.0, 1.0),
        Bell::PsiMinus => (-1.0, -1.0, -1.0),
    };
    DensityOperator::from_mv_unchecked(from_strings(
        2,
        &[
            ("II", 0.25),
            ("ZZ", 0.25 * zz),
            ("XX", 0.25 * xx),
            ("YY", 0.25 * yy),
        ],
    ))
}

/// `(1 + zz + zz + zz + xxx - xyy - yxy - yyx)/8`.
pub fn ghz() -> DensityOperator {
    let e = 0.125;
    DensityOperator::from_mv_unchecked(from_strings(
        3,
        &[
            ("III", e),
            ("ZZI", e),
            ("ZIZ", e),
            ("IZZ", e),
            ("XXX", e),
            ("XYY", -e),
            ("YXY", -e),
            ("YYX", -e),
        ],
    ))
}

/// The W state with `z` spin axes and `x` as the orthogonal reference.
pub fn w_state() -> DensityOperator {
    let n = 3;
    let t = 1.0 / 3.0;
    let mut mv = from_strings(
        n,
        &[
            ("III", 1.0),
            ("ZII", t),
            ("IZI", t),
            ("IIZ", t),
            ("ZZI", -t),
            ("ZIZ", -t),
            ("IZZ", -t),
            ("ZZZ", -1.0),
        ],
    );
    let one = Multivector::one(n);
    for (pair, rest) in [
        (("XXI", "ZZI"), "IIZ"),
        (("XIX", "ZIZ"), "IZI"),
        (("IXX", "IZZ"), "ZII"),
    ] {
        let xx = from_strings(n, &[(pair.0, 1.0)]);
        let zz = from_strings(n, &[(pair.1, 1.0)]);
        let z = from_strings(n, &[(rest, 1.0)]);
        let term = &(&xx * &(&one - &zz)) * &(&one + &z);
        mv += &(term * (2.0 / 3.0));
    }
    DensityOperator::from_mv_unchecked(mv * 0.125)
}

/// A unitary multivector, `R R^dagger = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotor {
    mv: Multivector,
}

impl Rotor {
    pub fn new(mv: Multivector) -> Result<Self> {
        let dev = (&mv * &mv.reverse()).max_abs_diff(&Multivector::one(mv.n_qubits()));
        if dev > DENSITY_TOL {
            return Err(Error::NonUnitaryRotor(dev));
        }
        Ok(Rotor { mv })
    }

    pub fn identity(n: usize) -> Self {
        Rotor {
            mv: Multivector::one(n),
        }
    }

    /// `exp(-ι angle n/2)` on one qubit: rotation by `angle` about the unit axis `n`.
    pub fn local(n_qubits: usize, qubit: usize, axis: Vec3, angle: f64) -> Result<Self> {
        let len = vec3::norm(axis);
        if (len - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitAxis(len));
        }
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits,
            });
        }
        let (s, c) = (angle / 2.0).sin_cos();
        let mv = &Multivector::scalar(n_qubits, c)
            + &(&Multivector::vector(n_qubits, qubit, axis) * Complex64::new(0.0, -s));
        Ok(Rotor { mv })
    }

    /// `exp(-ι h t)` for Hermitian `h`.
    pub fn from_generator(h: &Multivector, t: f64) -> Result<Self> {
        Ok(Rotor { mv: h.exp_i(t)? })
    }

    /// `self * other` (apply `other` first).
    pub fn then_after(&self, other: &Rotor) -> Rotor {
        Rotor {
            mv: &self.mv * &other.mv,
        }
    }

    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    pub fn reverse(&self) -> Rotor {
        Rotor {
            mv: self.mv.reverse(),
        }
    }
}

/// `R rho R^dagger`.
pub fn apply_rotor(r: &Rotor, rho: &DensityOperator) -> Result<DensityOperator> {
    let out =
        r.mv.geometric_product(&rho.mv)?
            .geometric_product(&r.mv.reverse())?;
    Ok(DensityOperator::from_mv_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{statevector_density, to_matrix};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn up_state_is_pure() {
        let rho = bloch_state([0.0, 0.0, 1.0]).unwrap();
        assert_eq!(rho.mv(), &from_strings(1, &[("I", 0.5), ("Z", 0.5)]));
        assert!(rho.is_pure(1e-15));
        assert!(!bloch_state([0.0; 3]).unwrap().is_pure(0.1));
        assert!(bloch_state([0.0, 1.1, 0.0]).is_err());
    }

    #[test]
    fn computational_product_state() {
        let s00 = product_state(&ProductState::computational(2, 0).unwrap());
        assert_eq!(
            s00.mv(),
            &from_strings(2, &[("II", 0.25), ("ZI", 0.25), ("IZ", 0.25), ("ZZ", 0.25)])
        );
        let s11 = product_state(&ProductState::computational(2, 3).unwrap());
        assert_eq!(
            s11.mv(),
            &from_strings(
                2,
                &[("II", 0.25), ("ZI", -0.25), ("IZ", -0.25), ("ZZ", 0.25)]
            )
        );
    }

    #[test]
    fn sphere_00_11_matches_closed_forms() {
        let s1 = ProductState::computational(2, 0).unwrap();
        let s2 = ProductState::computational(2, 3).unwrap();
        let sph = projector_sphere(&s1, &s2, ZOrder::FirstNorth).unwrap();
        assert!(
            sph.p
                .max_abs_diff(&from_strings(2, &[("II", 0.5), ("ZZ", 0.5)]))
                < 1e-15
        );
        assert!(
            sph.z
                .max_abs_diff(&from_strings(2, &[("ZI", 0.5), ("IZ", 0.5)]))
                < 1e-15
        );
        assert!(
            sph.x
                .max_abs_diff(&from_strings(2, &[("XX", 0.5), ("YY", -0.5)]))
                < 1e-15
        );
        assert!(
            sph.y
                .max_abs_diff(&from_strings(2, &[("XY", 0.5), ("YX", 0.5)]))
                < 1e-15
        );
        assert!(sph.relation_error() < 1e-14);
    }

    #[test]
    fn sphere_000_111_matches_closed_forms() {
        let s1 = ProductState::computational(3, 0).unwrap();
        let s2 = ProductState::computational(3, 7).unwrap();
        let sph = projector_sphere(&s1, &s2, ZOrder::FirstNorth).unwrap();
        let z = from_strings(
            3,
            &[("ZII", 0.25), ("IZI", 0.25), ("IIZ", 0.25), ("ZZZ", 0.25)],
        );
        let x = from_strings(
            3,
            &[
                ("XXX", 0.25),
                ("XYY", -0.25),
                ("YXY", -0.25),
                ("YYX", -0.25),
            ],
        );
        assert!(sph.z.max_abs_diff(&z) < 1e-15);
        assert!(sph.x.max_abs_diff(&x) < 1e-15);
        assert!(sph.relation_error() < 1e-14);
        let flipped = projector_sphere(&s1, &s2, ZOrder::SecondNorth).unwrap();
        assert!(flipped.z.max_abs_diff(&(-&z)) < 1e-15);
    }

    #[test]
    fn sphere_with_one_differing_qubit_is_bloch_sphere_times_p() {
        let s1 = ProductState::computational(2, 0).unwrap();
        let s2 = ProductState::computational(2, 1).unwrap();
        let sph = projector_sphere(&s1, &s2, ZOrder::FirstNorth).unwrap();
        let p = from_strings(2, &[("II", 0.5), ("ZI", 0.5)]);
        assert!(sph.p.max_abs_diff(&p) < 1e-15);
        assert!(sph.x.max_abs_diff(&(&from_strings(2, &[("IX", 1.0)]) * &p)) < 1e-15);
        assert!(sph.z.max_abs_diff(&(&from_strings(2, &[("IZ", 1.0)]) * &p)) < 1e-15);
        assert!(sph.y.max_abs_diff(&(&from_strings(2, &[("IY", 1.0)]) * &p)) < 1e-15);
    }

    #[test]
    fn sphere_rejects_bad_pairs() {
        let s = ProductState::computational(2, 1).unwrap();
        assert_eq!(
            projector_sphere(&s, &s, ZOrder::FirstNorth),
            Err(Error::NotOrthogonal)
        );
        let tilted = ProductState::from_axes(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]], &[1, 1]).unwrap();
        assert_eq!(
            projector_sphere(&s, &tilted, ZOrder::FirstNorth),
            Err(Error::MismatchedAxes)
        );
    }

    #[test]
    fn sphere_north_pole_and_ghz() {
        let s1 = ProductState::computational(3, 0).unwrap();
        let s2 = ProductState::computational(3, 7).unwrap();
        let sph = projector_sphere(&s1, &s2, ZOrder::FirstNorth).unwrap();
        assert!(
            sphere_state(&sph, 0.0, 0.0)
                .mv()
                .max_abs_diff(product_state(&s1).mv())
                < 1e-15
        );
        let g = sphere_state(&sph, std::f64::consts::FRAC_PI_2, 0.0);
        assert!(g.mv().max_abs_diff(ghz().mv()) < 1e-15);
    }

    #[test]
    fn sphere_state_matches_statevector() {
        let (theta, phi) = (std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_4);
        let s1 = ProductState::computational(2, 0).unwrap();
        let s2 = ProductState::computational(2, 3).unwrap();
        let sph = projector_sphere(&s1, &s2, ZOrder::FirstNorth).unwrap();
        let rho = sphere_state(&sph, theta, phi);
        let o = Complex64::default();
        let amps = [
            c((theta / 2.0).cos()),
            o,
            o,
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ];
        assert!(to_matrix(rho.mv()).max_abs_diff(&statevector_density(&amps).unwrap()) < 1e-15);
    }

    #[test]
    fn ghz_and_w_match_statevectors() {
        let h = c(FRAC_1_SQRT_2);
        let o = Complex64::default();
        let ghz_amps = [h, o, o, o, o, o, o, h];
        assert!(
            to_matrix(ghz().mv()).max_abs_diff(&statevector_density(&ghz_amps).unwrap()) < 1e-15
        );
        let t = c(1.0 / 3f64.sqrt());
        let w_amps = [o, t, t, o, t, o, o, o];
        assert!(
            to_matrix(w_state().mv()).max_abs_diff(&statevector_density(&w_amps).unwrap()) < 1e-15
        );
    }

    #[test]
    fn pure_state_of_ghz_amplitudes() {
        let h = c(FRAC_1_SQRT_2);
        let o = Complex64::default();
        let rho = pure_state(&[h, o, o, o, o, o, o, h]).unwrap();
        assert!(rho.mv().max_abs_diff(ghz().mv()) < 1e-15);
        let e0 = pure_state(&[c(1.0), o, o, o]).unwrap();
        assert_eq!(
            e0.mv(),
            product_state(&ProductState::computational(2, 0).unwrap()).mv()
        );
    }

    #[test]
    fn bell_states_match_statevectors() {
        for b in Bell::ALL {
            let m = to_matrix(bell(b).mv());
            assert!(
                m.max_abs_diff(&statevector_density(&b.amplitudes()).unwrap()) < 1e-15,
                "{b:?}"
            );
        }
    }

    #[test]
    fn pi_rotation_about_y_maps_singlet_to_phi_plus() {
        let r = Rotor::local(2, 0, [0.0, 1.0, 0.0], std::f64::consts::PI).unwrap();
        let out = apply_rotor(&r, &bell(Bell::PsiMinus)).unwrap();
        assert!(out.mv().max_abs_diff(bell(Bell::PhiPlus).mv()) < 1e-15);
    }

    #[test]
    fn non_unitary_rotor_rejected() {
        assert!(matches!(
            Rotor::new(Multivector::scalar(1, 2.0)),
            Err(Error::NonUnitaryRotor(_))
        ));
    }

    #[test]
    fn frame_from_axis_is_right_handed() {
        for axis in [
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [0.6, 0.0, 0.8],
            [0.36, -0.48, 0.8],
        ] {
            let f = Frame::from_axis(axis).unwrap();
            assert!(f.orthonormality_error() < 1e-15, "{axis:?}");
            assert_eq!(f.z, axis);
        }
        assert!(Frame::from_axis([0.0, 0.0, 2.0]).is_err());
    }
}
