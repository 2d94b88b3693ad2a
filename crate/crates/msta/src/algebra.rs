//! The correlated Pauli algebra on `N` qubits.
//!
//! Every basis blade is a Pauli string: one letter per qubit, where `I` is the
//! scalar slot and `X`, `Y`, `Z` are that qubit's unit vectors. All per-qubit
//! pseudoscalars are identified with a single unit `ι` (squaring to -1), so a
//! general element is a Pauli string weighted by a complex coefficient whose
//! imaginary part is the `ι`-component.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 12;

/// Coefficients with magnitude below this are dropped after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Tolerance on the Hermiticity precondition of [`Multivector::exp_i`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const SERIES_TOL: f64 = 1e-16;
const DENSE_ACCUMULATOR_MAX_QUBITS: usize = 6;

const QUBIT_LABELS: [char; MAX_QUBITS] =
    ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l'];

/// Label used for qubit `index` in printed expressions (`a`, `b`, `c`, ...).
pub fn qubit_label(index: usize) -> char {
    QUBIT_LABELS[index]
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const IOTA: Complex64 = Complex64::new(0.0, 1.0);

/// One slot of a Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    pub const VECTORS: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (u16, u16) {
        match self {
            Letter::I => (0, 0),
            Letter::X => (1, 0),
            Letter::Y => (1, 1),
            Letter::Z => (0, 1),
        }
    }

    fn from_bits(x: u16, z: u16) -> Letter {
        match (x & 1, z & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (1, 1) => Letter::Y,
            _ => Letter::Z,
        }
    }
}

/// Product of two single-qubit letters, `p q = phase * r`.
///
/// Uses the cyclic rule `x y = ι z`, `y z = ι x`, `z x = ι y`.
pub fn single_letter_product(p: Letter, q: Letter) -> (Letter, Complex64) {
    use Letter::*;
    match (p, q) {
        (I, l) | (l, I) => (l, ONE),
        (X, X) | (Y, Y) | (Z, Z) => (I, ONE),
        (X, Y) => (Z, IOTA),
        (Y, X) => (Z, -IOTA),
        (Y, Z) => (X, IOTA),
        (Z, Y) => (X, -IOTA),
        (Z, X) => (Y, IOTA),
        (X, Z) => (Y, -IOTA),
    }
}

/// A basis blade: one letter per qubit, packed as x/z bit masks.
///
/// Bit `k` of each mask belongs to qubit `k` (qubit `a` is index 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: u8,
    x: u16,
    z: u16,
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::QubitCountOutOfRange(n))
    } else {
        Ok(())
    }
}

impl PauliString {
    pub fn new(letters: &[Letter]) -> Result<Self> {
        check_qubit_count(letters.len())?;
        let (mut x, mut z) = (0u16, 0u16);
        for (k, l) in letters.iter().enumerate() {
            let (lx, lz) = l.bits();
            x |= lx << k;
            z |= lz << k;
        }
        Ok(PauliString {
            n: letters.len() as u8,
            x,
            z,
        })
    }

    /// The all-`I` string.
    ///
    /// # Panics
    /// If `n` is outside `1..=MAX_QUBITS`.
    pub fn identity(n: usize) -> Self {
        check_qubit_count(n).expect("invalid qubit count");
        PauliString {
            n: n as u8,
            x: 0,
            z: 0,
        }
    }

    /// The string with `letter` on `qubit` and `I` elsewhere.
    ///
    /// # Panics
    /// If `qubit >= n` or `n` is out of range.
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        assert!(qubit < n, "qubit {qubit} out of range for {n} qubits");
        let mut s = Self::identity(n);
        let (lx, lz) = letter.bits();
        s.x |= lx << qubit;
        s.z |= lz << qubit;
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x >> qubit, self.z >> qubit)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n_qubits()).map(|k| self.letter(k)).collect()
    }

    /// Mask of qubits carrying a non-`I` letter.
    pub fn support(&self) -> u16 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// Product of two strings of equal length: `self * other = phase * result`.
    ///
    /// Writes each letter as `i^(x z) X^x Z^z` and commutes the `Z` block past
    /// the `X` block, which costs `(-1)^(z1 . x2)`.
    pub fn mul(&self, other: &PauliString) -> (PauliString, Complex64) {
        debug_assert_eq!(self.n, other.n);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 16
            - (x & z).count_ones();
        let phase = match e % 4 {
            0 => ONE,
            1 => IOTA,
            2 => -ONE,
            _ => -IOTA,
        };
        (PauliString { n: self.n, x, z }, phase)
    }

    fn dense_index(&self) -> usize {
        self.x as usize | ((self.z as usize) << self.n)
    }

    fn from_dense_index(n: usize, index: usize) -> Self {
        let mask = (1usize << n) - 1;
        PauliString {
            n: n as u8,
            x: (index & mask) as u16,
            z: ((index >> n) & mask) as u16,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            let c = match l {
                Letter::I => 'I',
                Letter::X => 'X',
                Letter::Y => 'Y',
                Letter::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses a string such as `"XIZ"` (qubit `a` first).
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(Error::InvalidSubset(format!("bad Pauli letter {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(&letters)
    }
}

/// A general element of the algebra: a pruned map from blades to complex
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    n: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl Multivector {
    /// The zero element on `n` qubits.
    ///
    /// # Panics
    /// If `n` is outside `1..=MAX_QUBITS`; use [`Multivector::try_zero`] to get an error instead.
    pub fn zero(n: usize) -> Self {
        Self::try_zero(n).expect("invalid qubit count")
    }

    pub fn try_zero(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(Multivector {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(n: usize, c: impl Into<Complex64>) -> Self {
        Self::blade(PauliString::identity(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    /// The correlated pseudoscalar `ι` on `n` qubits.
    pub fn iota(n: usize) -> Self {
        Self::scalar(n, IOTA)
    }

    pub fn blade(s: PauliString, c: impl Into<Complex64>) -> Self {
        let mut m = Multivector {
            n: s.n_qubits(),
            terms: BTreeMap::new(),
        };
        m.accumulate(s, c.into());
        m.prune();
        m
    }

    /// The vector `v_x x + v_y y + v_z z` living on `qubit`.
    pub fn vector(n: usize, qubit: usize, v: [f64; 3]) -> Self {
        let mut m = Self::zero(n);
        for (l, c) in Letter::VECTORS.iter().zip(v) {
            m.accumulate(PauliString::single(n, qubit, *l), Complex64::new(c, 0.0));
        }
        m.prune();
        m
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut m = Self::try_zero(n)?;
        for (s, c) in terms {
            if s.n_qubits() != n {
                return Err(Error::QubitCountMismatch {
                    left: n,
                    right: s.n_qubits(),
                });
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidSubset("non-finite coefficient".into()));
            }
            m.accumulate(s, c);
        }
        m.prune();
        Ok(m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    /// Coefficient of the blade given by `letters`, e.g. `&[X, I, Z]`.
    pub fn coeff_of(&self, letters: &[Letter]) -> Complex64 {
        PauliString::new(letters)
            .map(|s| self.coeff(&s))
            .unwrap_or_default()
    }

    fn accumulate(&mut self, s: PauliString, c: Complex64) {
        *self.terms.entry(s).or_default() += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    fn check_same(&self, other: &Multivector) -> Result<()> {
        if self.n != other.n {
            Err(Error::QubitCountMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// The geometric product `self * other`.
    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        self.check_same(other)?;
        let n = self.n;
        let mut out = Multivector::zero(n);
        if n <= DENSE_ACCUMULATOR_MAX_QUBITS {
            let mut acc = vec![Complex64::default(); 1 << (2 * n)];
            for (sa, ca) in &self.terms {
                for (sb, cb) in &other.terms {
                    let (s, phase) = sa.mul(sb);
                    acc[s.dense_index()] += phase * ca * cb;
                }
            }
            for (i, c) in acc.into_iter().enumerate() {
                if c.norm() >= PRUNE_THRESHOLD {
                    out.terms.insert(PauliString::from_dense_index(n, i), c);
                }
            }
        } else {
            let mut acc: HashMap<PauliString, Complex64> = HashMap::new();
            for (sa, ca) in &self.terms {
                for (sb, cb) in &other.terms {
                    let (s, phase) = sa.mul(sb);
                    *acc.entry(s).or_default() += phase * ca * cb;
                }
            }
            out.terms
                .extend(acc.into_iter().filter(|(_, c)| c.norm() >= PRUNE_THRESHOLD));
        }
        Ok(out)
    }

    /// Reverses the vector order inside every qubit; the matrix image is the
    /// conjugate transpose.
    ///
    /// A blade holds at most one vector per qubit, so only `ι` flips sign.
    pub fn reverse(&self) -> Multivector {
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(s, c)| (*s, c.conj())).collect(),
        }
    }

    /// Real part of the all-`I` coefficient.
    pub fn scalar_part(&self) -> f64 {
        self.coeff(&PauliString::identity(self.n)).re
    }

    /// Matrix trace, `2^N` times the scalar part.
    pub fn trace(&self) -> f64 {
        (1u64 << self.n) as f64 * self.scalar_part()
    }

    /// Drops every term touching one of `qubits` and re-addresses the rest on
    /// the remaining qubits (in their original order).
    ///
    /// The reduced operator is this result times `2^qubits.len()`.
    pub fn partial_drop(&self, qubits: &[usize]) -> Result<Multivector> {
        let drop_mask = subset_mask(self.n, qubits)?;
        if drop_mask.count_ones() as usize == self.n {
            return Err(Error::InvalidSubset("cannot drop every qubit".into()));
        }
        let kept: Vec<usize> = (0..self.n).filter(|k| drop_mask & (1 << k) == 0).collect();
        let m = kept.len();
        let mut out = Multivector::zero(m);
        for (s, c) in &self.terms {
            if s.support() & drop_mask != 0 {
                continue;
            }
            let (mut x, mut z) = (0u16, 0u16);
            for (new, &old) in kept.iter().enumerate() {
                x |= ((s.x >> old) & 1) << new;
                z |= ((s.z >> old) & 1) << new;
            }
            out.terms.insert(PauliString { n: m as u8, x, z }, *c);
        }
        Ok(out)
    }

    /// Largest coefficient deviation between `self` and its reverse.
    pub fn hermiticity_error(&self) -> f64 {
        self.terms
            .values()
            .map(|c| 2.0 * c.im.abs())
            .fold(0.0, f64::max)
    }

    /// Sum of coefficient magnitudes; submultiplicative under the product.
    pub fn norm1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient difference between two elements.
    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        let mut d: f64 = 0.0;
        for (s, c) in &self.terms {
            d = d.max((c - other.coeff(s)).norm());
        }
        for (s, c) in &other.terms {
            if !self.terms.contains_key(s) {
                d = d.max(c.norm());
            }
        }
        d
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Multivector {
        let c = c.into();
        let mut out = Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(s, v)| (*s, v * c)).collect(),
        };
        out.prune();
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Multivector) -> Result<Multivector> {
        Ok(&self.geometric_product(other)? - &other.geometric_product(self)?)
    }

    /// `e^(-ι self t)` for Hermitian `self`, by scaling and squaring.
    pub fn exp_i(&self, t: f64) -> Result<Multivector> {
        let dev = self.hermiticity_error();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let generator = self.scale(Complex64::new(0.0, -t));
        let norm = generator.norm1();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = generator.scale(0.5f64.powi(squarings as i32));

        let mut sum = Multivector::one(self.n);
        let mut term = Multivector::one(self.n);
        for k in 1..=64 {
            term = (&term * &scaled).scale(1.0 / k as f64);
            if term.is_empty() {
                break;
            }
            sum += &term;
            if term.norm1() < SERIES_TOL {
                break;
            }
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        Ok(sum)
    }
}

pub(crate) fn subset_mask(n: usize, qubits: &[usize]) -> Result<u16> {
    if qubits.is_empty() {
        return Err(Error::InvalidSubset("empty qubit subset".into()));
    }
    let mut mask = 0u16;
    for &q in qubits {
        if q >= n {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: n,
            });
        }
        if mask & (1 << q) != 0 {
            return Err(Error::InvalidSubset(format!("qubit {q} listed twice")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.n, rhs.n, "qubit count mismatch");
        for (s, c) in &rhs.terms {
            self.accumulate(*s, *c);
        }
        self.prune();
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(s, c)| (*s, -c)).collect(),
        }
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

/// Geometric product.
///
/// # Panics
/// On qubit-count mismatch; [`Multivector::geometric_product`] returns an error instead.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs).expect("qubit count mismatch")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

fn fmt_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    match f.precision() {
        Some(p) => write!(f, "{x:.p$}"),
        None => write!(f, "{x}"),
    }
}

impl fmt::Display for Multivector {
    /// Prints e.g. `0.25 + 0.25 z_a z_b - 0.25 y_a y_b`, ordered by blade weight.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(s, _)| (s.weight(), s.letters()));
        for (i, (s, c)) in terms.into_iter().enumerate() {
            let pure_real = c.im.abs() < PRUNE_THRESHOLD;
            let pure_iota = c.re.abs() < PRUNE_THRESHOLD;
            if pure_real || pure_iota {
                let v = if pure_real { c.re } else { c.im };
                if i > 0 {
                    write!(f, " {} ", if v < 0.0 { '-' } else { '+' })?;
                } else if v < 0.0 {
                    write!(f, "-")?;
                }
                fmt_real(f, v.abs())?;
                if !pure_real {
                    write!(f, "ι")?;
                }
            } else {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "(")?;
                fmt_real(f, c.re)?;
                write!(f, "{}", if c.im < 0.0 { " - " } else { " + " })?;
                fmt_real(f, c.im.abs())?;
                write!(f, "ι)")?;
            }
            for k in 0..s.n_qubits() {
                let name = match s.letter(k) {
                    Letter::I => continue,
                    Letter::X => 'x',
                    Letter::Y => 'y',
                    Letter::Z => 'z',
                };
                write!(f, " {name}_{}", qubit_label(k))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn letter_table_matches_cyclic_rule() {
        assert_eq!(single_letter_product(X, X), (I, ONE));
        assert_eq!(single_letter_product(X, Y), (Z, IOTA));
        assert_eq!(single_letter_product(Y, X), (Z, -IOTA));
        assert_eq!(single_letter_product(Z, X), (Y, IOTA));
    }

    #[test]
    fn packed_product_agrees_with_letter_table() {
        for a in Letter::ALL {
            for b in Letter::ALL {
                for c in Letter::ALL {
                    for d in Letter::ALL {
                        let (s, phase) = PauliString::new(&[a, c])
                            .unwrap()
                            .mul(&PauliString::new(&[b, d]).unwrap());
                        let (l0, p0) = single_letter_product(a, b);
                        let (l1, p1) = single_letter_product(c, d);
                        assert_eq!(s.letters(), vec![l0, l1]);
                        assert_eq!(phase, p0 * p1);
                    }
                }
            }
        }
    }

    #[test]
    fn vectors_of_different_qubits_commute() {
        let xa = Multivector::blade(ps("XI"), 1.0);
        let yb = Multivector::blade(ps("IY"), 1.0);
        assert_eq!(&xa * &yb, &yb * &xa);
    }

    #[test]
    fn iota_squares_to_minus_one() {
        let i = Multivector::iota(3);
        assert_eq!(&i * &i, Multivector::scalar(3, -1.0));
    }

    #[test]
    fn reverse_of_scalar_conjugates() {
        let m = Multivector::scalar(2, Complex64::new(0.3, 0.7));
        assert_eq!(
            m.reverse(),
            Multivector::scalar(2, Complex64::new(0.3, -0.7))
        );
    }

    #[test]
    fn reverse_swaps_vector_order_per_qubit() {
        // (m_a n_a p_b q_b)^dagger = n_a m_a q_b p_b
        let m = Multivector::vector(2, 0, [0.3, -0.5, 0.8]);
        let n = Multivector::vector(2, 0, [0.1, 0.9, -0.2]);
        let p = Multivector::vector(2, 1, [-0.7, 0.2, 0.4]);
        let q = Multivector::vector(2, 1, [0.6, 0.6, 0.1]);
        let lhs = (&(&(&m * &n) * &p) * &q).reverse();
        let rhs = &(&(&n * &m) * &q) * &p;
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn scalar_part_and_trace() {
        let half = Multivector::scalar(1, 0.5) + Multivector::blade(ps("Z"), 0.5);
        assert_eq!(half.scalar_part(), 0.5);
        assert_eq!(half.trace(), 1.0);
        assert_eq!(Multivector::blade(ps("XX"), 1.0).scalar_part(), 0.0);
    }

    #[test]
    fn partial_drop_keeps_untouched_terms() {
        let zz = Multivector::blade(ps("ZZ"), 0.25);
        let rho = Multivector::scalar(2, 0.25)
            + Multivector::blade(ps("ZI"), 0.25)
            + Multivector::blade(ps("IZ"), 0.25)
            + zz;
        let reduced = rho.partial_drop(&[1]).unwrap() * 2.0;
        let expected = Multivector::scalar(1, 0.5) + Multivector::blade(ps("Z"), 0.5);
        assert!(reduced.max_abs_diff(&expected) < 1e-15);
        assert!(rho.partial_drop(&[0, 1]).is_err());
        assert!(rho.partial_drop(&[2]).is_err());
        assert!(rho.partial_drop(&[]).is_err());
    }

    #[test]
    fn exp_of_half_z_rotates_x() {
        let theta = 0.83;
        let r = Multivector::blade(ps("Z"), 0.5).exp_i(theta).unwrap();
        let x = Multivector::blade(ps("X"), 1.0);
        let rotated = &(&r * &x) * &r.reverse();
        let expected =
            Multivector::blade(ps("X"), theta.cos()) + Multivector::blade(ps("Y"), theta.sin());
        assert!(rotated.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let a = Multivector::blade(ps("X"), Complex64::new(0.0, 1.0));
        assert!(matches!(a.exp_i(1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn qubit_limits_are_enforced() {
        assert!(Multivector::try_zero(0).is_err());
        assert!(Multivector::try_zero(13).is_err());
        assert!(Multivector::try_zero(12).is_ok());
        let a = Multivector::one(1);
        let b = Multivector::one(2);
        assert!(a.geometric_product(&b).is_err());
    }

    #[test]
    fn large_register_uses_sparse_accumulator() {
        let n = 10;
        let mut letters = vec![I; n];
        letters[9] = X;
        let x9 = Multivector::blade(PauliString::new(&letters).unwrap(), 1.0);
        letters[9] = Y;
        let y9 = Multivector::blade(PauliString::new(&letters).unwrap(), 1.0);
        letters[9] = Z;
        let z9 = Multivector::blade(PauliString::new(&letters).unwrap(), IOTA);
        assert_eq!(&x9 * &y9, z9);
    }

    #[test]
    fn display_orders_by_weight() {
        let m = Multivector::blade(ps("ZZ"), 0.25) + Multivector::scalar(2, 0.25)
            - Multivector::blade(ps("YY"), 0.25);
        assert_eq!(format!("{m}"), "0.25 - 0.25 y_a y_b + 0.25 z_a z_b");
    }
}
