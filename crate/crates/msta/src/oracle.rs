//! Dense complex-matrix ground truth.
//!
//! Nothing here uses the letter table or the packed product of
//! [`crate::algebra`]: blades are mapped through explicit Kronecker products of
//! the 2x2 Pauli matrices, and eigenproblems are solved by cyclic Jacobi.
//! Basis index bits are ordered with qubit `a` most significant.

use std::ops::{Add, Mul, Sub};

use crate::algebra::{Complex64, Letter, Multivector, PauliString, MAX_QUBITS};
use crate::error::{Error, Result};

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;
const PSD_TOL: f64 = 1e-10;
const ENTROPY_CUTOFF: f64 = 1e-12;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The 2x2 matrix of a single letter.
pub fn pauli_matrix(l: Letter) -> DenseMatrix {
    let o = c(0.0, 0.0);
    let data = match l {
        Letter::I => vec![c(1.0, 0.0), o, o, c(1.0, 0.0)],
        Letter::X => vec![o, c(1.0, 0.0), c(1.0, 0.0), o],
        Letter::Y => vec![o, c(0.0, -1.0), c(0.0, 1.0), o],
        Letter::Z => vec![c(1.0, 0.0), o, o, c(-1.0, 0.0)],
    };
    DenseMatrix { dim: 2, data }
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square of a power of two.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() || entries.len() != dim * dim {
            return Err(Error::NotPowerOfTwo(dim));
        }
        Ok(DenseMatrix { dim, data: entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let d = self.dim * other.dim;
        let mut out = Self::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a == Complex64::default() {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.set(i * other.dim + k, j * other.dim + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> DenseMatrix {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// Partial trace keeping `keep` (qubit indices, any order; output uses ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DenseMatrix> {
        let n = self.n_qubits();
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.iter().any(|&q| q >= n) {
            return Err(Error::InvalidSubset(format!("{keep:?} for {n} qubits")));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let bit = |q: usize| n - 1 - q;
        let compose = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let b = (kept_idx >> (keep.len() - 1 - pos)) & 1;
                idx |= b << bit(q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let b = (traced_idx >> (traced.len() - 1 - pos)) & 1;
                idx |= b << bit(q);
            }
            idx
        };
        let dk = 1usize << keep.len();
        let dt = 1usize << traced.len();
        let mut out = Self::zeros(dk);
        for r in 0..dk {
            for col in 0..dk {
                let mut s = Complex64::default();
                for t in 0..dt {
                    s += self.get(compose(r, t), compose(col, t));
                }
                out.set(r, col, s);
            }
        }
        Ok(out)
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }
}

/// Kronecker product of the letters of `s`, qubit `a` leftmost.
pub fn blade_matrix(s: &PauliString) -> DenseMatrix {
    let mut m = DenseMatrix::identity(1);
    for l in s.letters() {
        m = m.kron(&pauli_matrix(l));
    }
    m
}

/// Matrix image of a multivector; `ι` maps to the imaginary unit.
pub fn to_matrix(a: &Multivector) -> DenseMatrix {
    let dim = 1usize << a.n_qubits();
    let mut out = DenseMatrix::zeros(dim);
    for (s, coeff) in a.terms() {
        let b = blade_matrix(s);
        for (o, v) in out.data.iter_mut().zip(&b.data) {
            *o += coeff * v;
        }
    }
    out
}

fn all_strings(n: usize) -> impl Iterator<Item = PauliString> {
    (0..1usize << (2 * n)).map(move |mut code| {
        let letters: Vec<Letter> = (0..n)
            .map(|_| {
                let l = Letter::ALL[code & 3];
                code >>= 2;
                l
            })
            .collect();
        PauliString::new(&letters).expect("valid length")
    })
}

/// Inverse of [`to_matrix`] by Pauli-basis projection `tr(P M) / 2^N`.
pub fn from_matrix(m: &DenseMatrix) -> Result<Multivector> {
    if !m.dim.is_power_of_two() || m.dim < 2 {
        return Err(Error::NotPowerOfTwo(m.dim));
    }
    let n = m.n_qubits();
    if n > MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange(n));
    }
    let norm = 1.0 / m.dim as f64;
    let terms = all_strings(n).map(|s| {
        let p = blade_matrix(&s);
        let mut tr = Complex64::default();
        for i in 0..m.dim {
            for j in 0..m.dim {
                tr += p.get(i, j) * m.get(j, i);
            }
        }
        (s, tr * norm)
    });
    Multivector::from_terms(n, terms)
}

/// `|psi><psi|` for a normalized amplitude list.
pub fn statevector_density(amps: &[Complex64]) -> Result<DenseMatrix> {
    let dim = amps.len();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm2));
    }
    let mut out = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, amps[i] * amps[j].conj());
        }
    }
    Ok(out)
}

/// Spectral decomposition of the real symmetric embedding `[[Re, -Im], [Im, Re]]`.
struct EmbeddedEigen {
    dim: usize,
    values: Vec<f64>,
    /// Column-major eigenvectors of the `2 dim` embedding.
    vectors: Vec<f64>,
}

fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = JACOBI_TOL * frob.max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    (values, v)
}

fn embedded_eigen(h: &DenseMatrix) -> Result<EmbeddedEigen> {
    let herm = h.hermiticity_error();
    if herm > PSD_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let d = h.dim;
    let n = 2 * d;
    let mut a = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            let v = h.get(i, j);
            a[i * n + j] = v.re;
            a[(i + d) * n + (j + d)] = v.re;
            a[(i + d) * n + j] = v.im;
            a[i * n + (j + d)] = -v.im;
        }
    }
    let (values, vectors) = jacobi_symmetric(a, n);
    Ok(EmbeddedEigen {
        dim: d,
        values,
        vectors,
    })
}

impl EmbeddedEigen {
    /// Each eigenvalue of the Hermitian matrix appears twice in the embedding.
    fn hermitian_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v.into_iter().step_by(2).collect()
    }

    /// `f(H)` for a real function `f`, read back from the embedding.
    fn apply(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = 2 * self.dim;
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let mut out = DenseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let (mut re, mut im) = (0.0, 0.0);
                for (k, fk) in fv.iter().enumerate() {
                    let w = fk * self.vectors[j * n + k];
                    re += self.vectors[i * n + k] * w;
                    im += self.vectors[(i + self.dim) * n + k] * w;
                }
                out.set(i, j, c(re, im));
            }
        }
        out
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(embedded_eigen(h)?.hermitian_values())
}

/// `exp(-i H t)` for Hermitian `H`, assembled as `cos(H t) - i sin(H t)`.
pub fn expm_i(h: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    let e = embedded_eigen(h)?;
    let cos = e.apply(|x| (x * t).cos());
    let sin = e.apply(|x| (x * t).sin());
    Ok(&cos - &sin.scale(c(0.0, 1.0)))
}

/// Von Neumann entropy in bits, `-sum lambda log2 lambda`.
pub fn oracle_entropy(rho: &DenseMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > PSD_TOL || tr.im.abs() > PSD_TOL {
        return Err(Error::NotUnitTrace(tr.re));
    }
    let values = hermitian_eigenvalues(rho)?;
    let mut s = 0.0;
    for &l in &values {
        if l < -PSD_TOL {
            return Err(Error::NotPositive(l));
        }
        if l > ENTROPY_CUTOFF {
            s -= l * l.log2();
        }
    }
    Ok(s)
}

/// The pair `(|+>, x|+>)` of a spin frame as 2-component kets, where `|+>` is
/// the `+1` eigenvector of `z . sigma` and `x` is the frame's first orthogonal axis.
pub fn frame_kets(z: [f64; 3], x: [f64; 3]) -> ([Complex64; 2], [Complex64; 2]) {
    let theta = z[2].clamp(-1.0, 1.0).acos();
    let phi = z[1].atan2(z[0]);
    let up = [
        c((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ];
    let xs = [
        [c(x[2], 0.0), c(x[0], -x[1])],
        [c(x[0], x[1]), c(-x[2], 0.0)],
    ];
    let down = [
        xs[0][0] * up[0] + xs[0][1] * up[1],
        xs[1][0] * up[0] + xs[1][1] * up[1],
    ];
    (up, down)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn blade_maps_to_kronecker_product() {
        let s: PauliString = "XZ".parse().unwrap();
        let m = to_matrix(&Multivector::blade(s, 1.0));
        let expected = pauli_matrix(Letter::X).kron(&pauli_matrix(Letter::Z));
        assert_eq!(m, expected);
    }

    #[test]
    fn bloch_up_state_is_projector() {
        let z: PauliString = "Z".parse().unwrap();
        let rho = Multivector::scalar(1, 0.5) + Multivector::blade(z, 0.5);
        let m = to_matrix(&rho);
        assert_eq!(m.get(0, 0), c(1.0, 0.0));
        assert_eq!(m.get(1, 1), c(0.0, 0.0));
        assert!(from_matrix(&m).unwrap().max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn identity_maps_to_scalar_one() {
        let m = from_matrix(&DenseMatrix::identity(8)).unwrap();
        assert!(m.max_abs_diff(&Multivector::one(3)) < 1e-15);
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(matches!(
            DenseMatrix::from_row_major(3, vec![c(0.0, 0.0); 9]),
            Err(Error::NotPowerOfTwo(3))
        ));
        assert!(statevector_density(&[c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn entropy_examples() {
        let mixed = DenseMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(approx(oracle_entropy(&mixed).unwrap(), 1.0, 1e-12));
        let pure = statevector_density(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(approx(oracle_entropy(&pure).unwrap(), 0.0, 1e-12));
        // eigenvalues 3/4 and 1/4
        let mut m = DenseMatrix::zeros(2);
        m.set(0, 0, c(0.75, 0.0));
        m.set(1, 1, c(0.25, 0.0));
        let expected = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!(approx(oracle_entropy(&m).unwrap(), expected, 1e-12));
        assert!(approx(expected, 0.811278124459, 1e-11));
    }

    #[test]
    fn entropy_rejects_bad_trace() {
        let m = DenseMatrix::identity(2);
        assert!(matches!(oracle_entropy(&m), Err(Error::NotUnitTrace(_))));
    }

    #[test]
    fn statevector_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = statevector_density(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        for v in m.entries() {
            assert!(approx(v.re, 0.5, 1e-15));
        }
        assert!(matches!(
            statevector_density(&[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn eigenvalues_of_complex_hermitian() {
        // sigma_y has eigenvalues -1, +1
        let v = hermitian_eigenvalues(&pauli_matrix(Letter::Y)).unwrap();
        assert!(approx(v[0], -1.0, 1e-13) && approx(v[1], 1.0, 1e-13));
    }

    #[test]
    fn expm_of_sigma_z() {
        let t = 0.37;
        let u = expm_i(&pauli_matrix(Letter::Z), t).unwrap();
        assert!((u.get(0, 0) - Complex64::from_polar(1.0, -t)).norm() < 1e-13);
        assert!((u.get(1, 1) - Complex64::from_polar(1.0, t)).norm() < 1e-13);
        assert!(u.get(0, 1).norm() < 1e-13);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = statevector_density(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let b = statevector_density(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let ab = a.kron(&b);
        assert!(ab.partial_trace(&[0]).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(ab.partial_trace(&[1]).unwrap().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn frame_kets_are_eigenvectors() {
        let z = [0.48, -0.6, 0.64];
        let x = {
            let t: [f64; 3] = [0.6, 0.48, 0.0];
            let n = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
            [t[0] / n, t[1] / n, t[2] / n]
        };
        let (up, down) = frame_kets(z, x);
        let zs = [
            [c(z[2], 0.0), c(z[0], -z[1])],
            [c(z[0], z[1]), c(-z[2], 0.0)],
        ];
        for (ket, sign) in [(up, 1.0), (down, -1.0)] {
            for r in 0..2 {
                let v = zs[r][0] * ket[0] + zs[r][1] * ket[1];
                assert!((v - ket[r] * sign).norm() < 1e-14);
            }
        }
    }
}
