//! Local-unitary invariants of two- and three-qubit pure states, the
//! expansion probabilities, the feasibility functions and the special states.

use crate::algebra::{qubit_label, Letter};
use crate::error::{Error, Result};
use crate::oracle::statevector_density;
use crate::states::{pure_state, DensityOperator};
use crate::vec3::{self, Vec3};
use crate::Complex64;

const PURE_TOL: f64 = 1e-9;
const CONSISTENCY_TOL: f64 = 1e-9;
/// Bloch lengths below this are treated as vanishing.
pub const VANISHING_TOL: f64 = 1e-8;
/// Slack applied to every inequality in [`feasibility`].
pub const FEASIBILITY_SLACK: f64 = 1e-10;
const EXISTENCE_SLACK: f64 = 1e-12;

fn require_pure(rho: &DensityOperator, n: usize) -> Result<()> {
    if rho.n_qubits() != n {
        return Err(Error::QubitCountMismatch {
            left: n,
            right: rho.n_qubits(),
        });
    }
    let e = rho.purity_error();
    if e > PURE_TOL {
        return Err(Error::NotPure(e));
    }
    Ok(())
}

/// Correlation tensor `T_ij = tr(s^p_i s^q_j rho)` for qubits `p < q`.
fn pair_tensor(rho: &DensityOperator, p: usize, q: usize) -> [[f64; 3]; 3] {
    let n = rho.n_qubits();
    let mut t = [[0.0; 3]; 3];
    for (i, li) in Letter::VECTORS.iter().enumerate() {
        for (j, lj) in Letter::VECTORS.iter().enumerate() {
            let mut letters = vec![Letter::I; n];
            letters[p] = *li;
            letters[q] = *lj;
            t[i][j] = rho.correlation(&letters);
        }
    }
    t
}

fn bilinear(u: Vec3, t: &[[f64; 3]; 3], w: Vec3) -> f64 {
    (0..3)
        .map(|i| (0..3).map(|j| u[i] * t[i][j] * w[j]).sum::<f64>())
        .sum()
}

/// The single invariant `v = |v_a| = |v_b|` of a two-qubit pure state;
/// `v = 0` is the maximally entangled case.
pub fn invariants_2q(rho: &DensityOperator) -> Result<f64> {
    require_pure(rho, 2)?;
    let (va, vb) = (rho.bloch_vector(0), rho.bloch_vector(1));
    let v = vec3::norm(va);
    let vbar = bilinear(va, &pair_tensor(rho, 0, 1), vb);
    let dev = [(v - vec3::norm(vb)).abs(), (vbar - v * v).abs()];
    if dev[0] > CONSISTENCY_TOL || dev[1] > CONSISTENCY_TOL {
        return Err(Error::InvariantMismatch([v, vec3::norm(vb), vbar]));
    }
    Ok(if v < VANISHING_TOL { 0.0 } else { v })
}

/// The five invariants `(v_a, v_b, v_c, vbar2, vbar3)` of a three-qubit pure state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantSet3Q {
    pub v_a: f64,
    pub v_b: f64,
    pub v_c: f64,
    pub vbar2: f64,
    pub vbar3: f64,
}

impl InvariantSet3Q {
    pub fn new(v_a: f64, v_b: f64, v_c: f64, vbar2: f64, vbar3: f64) -> Self {
        InvariantSet3Q {
            v_a,
            v_b,
            v_c,
            vbar2,
            vbar3,
        }
    }

    pub fn v(&self) -> [f64; 3] {
        [self.v_a, self.v_b, self.v_c]
    }

    pub fn v_min(&self) -> f64 {
        self.v_a.min(self.v_b).min(self.v_c)
    }

    pub fn v_sum(&self) -> f64 {
        self.v_a + self.v_b + self.v_c
    }

    /// `v_a^2 + v_b^2 + v_c^2`.
    pub fn alpha(&self) -> f64 {
        self.v().iter().map(|v| v * v).sum()
    }

    /// `v_a^2 v_b^2 + v_a^2 v_c^2 + v_b^2 v_c^2`.
    pub fn beta(&self) -> f64 {
        let [a, b, c] = self.v().map(|v| v * v);
        a * b + a * c + b * c
    }

    /// `v_a^2 v_b^2 v_c^2`.
    pub fn gamma(&self) -> f64 {
        let p = self.v_a * self.v_b * self.v_c;
        p * p
    }

    /// `vbar_ab = vbar2 / v_c`, and likewise for the other pairs.
    pub fn pair_overlaps(&self) -> Result<[f64; 3]> {
        self.check_nonvanishing()?;
        Ok([
            self.vbar2 / self.v_c,
            self.vbar2 / self.v_b,
            self.vbar2 / self.v_a,
        ])
    }

    /// `vbar_abc = vbar3 / (v_a v_b v_c)`.
    pub fn triple_overlap(&self) -> Result<f64> {
        self.check_nonvanishing()?;
        Ok(self.vbar3 / (self.v_a * self.v_b * self.v_c))
    }

    fn check_nonvanishing(&self) -> Result<()> {
        for (k, v) in self.v().into_iter().enumerate() {
            if v < 1e-10 {
                return Err(Error::VanishingVector(qubit_label(k)));
            }
        }
        Ok(())
    }

    /// Largest absolute difference from `other`.
    pub fn max_abs_diff(&self, other: &InvariantSet3Q) -> f64 {
        [
            self.v_a - other.v_a,
            self.v_b - other.v_b,
            self.v_c - other.v_c,
            self.vbar2 - other.vbar2,
            self.vbar3 - other.vbar3,
        ]
        .into_iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// The three pairwise estimates `(v_a T_ab v_b, v_a T_ac v_c, v_b T_bc v_c)`
/// of `vbar2` and the triple invariant `vbar3`, without any checks.
pub fn raw_pair_invariants(rho: &DensityOperator) -> ([f64; 3], f64) {
    let v: Vec<Vec3> = (0..3).map(|k| rho.bloch_vector(k)).collect();
    let pairs = [
        bilinear(v[0], &pair_tensor(rho, 0, 1), v[1]),
        bilinear(v[0], &pair_tensor(rho, 0, 2), v[2]),
        bilinear(v[1], &pair_tensor(rho, 1, 2), v[2]),
    ];
    let mut vbar3 = 0.0;
    for (i, li) in Letter::VECTORS.iter().enumerate() {
        for (j, lj) in Letter::VECTORS.iter().enumerate() {
            for (k, lk) in Letter::VECTORS.iter().enumerate() {
                vbar3 += v[0][i] * v[1][j] * v[2][k] * rho.correlation(&[*li, *lj, *lk]);
            }
        }
    }
    (pairs, vbar3)
}

/// Reduced Bloch lengths of every qubit.
pub fn bloch_lengths(rho: &DensityOperator) -> Vec<f64> {
    (0..rho.n_qubits())
        .map(|k| vec3::norm(rho.bloch_vector(k)))
        .collect()
}

/// Invariants without the vanishing-vector guard; `vbar2` is the mean of
/// the three pairwise estimates.
pub fn invariants_3q_unchecked(rho: &DensityOperator) -> InvariantSet3Q {
    let l = bloch_lengths(rho);
    let (pairs, vbar3) = raw_pair_invariants(rho);
    InvariantSet3Q::new(l[0], l[1], l[2], pairs.iter().sum::<f64>() / 3.0, vbar3)
}

/// Invariants of a three-qubit pure state whose reduced Bloch vectors all
/// have length above [`VANISHING_TOL`].
pub fn invariants_3q(rho: &DensityOperator) -> Result<InvariantSet3Q> {
    require_pure(rho, 3)?;
    let l = bloch_lengths(rho);
    for (k, &v) in l.iter().enumerate() {
        if v < VANISHING_TOL {
            return Err(Error::VanishingVector(qubit_label(k)));
        }
    }
    let (pairs, _) = raw_pair_invariants(rho);
    let spread = pairs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - pairs.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread > CONSISTENCY_TOL {
        return Err(Error::InvariantMismatch(pairs));
    }
    Ok(invariants_3q_unchecked(rho))
}

/// Sign `+1` for bit 0 and `-1` for bit 1 of qubit `k` in a three-qubit index.
fn sign(index: usize, k: usize) -> f64 {
    if (index >> (2 - k)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The eight expansion probabilities indexed `4 i_a + 2 i_b + i_c`, bit 0
/// meaning the `+` state along the reduced Bloch vector.
pub fn expansion_probabilities(inv: &InvariantSet3Q) -> Result<[f64; 8]> {
    inv.check_nonvanishing()?;
    let (va, vb, vc) = (inv.v_a, inv.v_b, inv.v_c);
    let mut p = [0.0; 8];
    for (idx, out) in p.iter_mut().enumerate() {
        let (i, j, k) = (sign(idx, 0), sign(idx, 1), sign(idx, 2));
        *out = (1.0
            + i * va
            + j * vb
            + k * vc
            + i * j * inv.vbar2 / (va * vb)
            + i * k * inv.vbar2 / (va * vc)
            + j * k * inv.vbar2 / (vb * vc)
            + i * j * k * inv.vbar3 / (va * vb * vc))
            / 8.0;
    }
    Ok(p)
}

/// `(I2, I3, I4, I5, I6)`; `I6` equals the squared three-tangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sudbery {
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub i6: f64,
}

pub fn sudbery(inv: &InvariantSet3Q) -> Sudbery {
    let [a, b, c] = inv.v().map(|v| v * v);
    Sudbery {
        i2: (1.0 + a) / 2.0,
        i3: (1.0 + b) / 2.0,
        i4: (1.0 + c) / 2.0,
        i5: (1.0 + 3.0 * inv.vbar2) / 4.0,
        i6: 1.0 - 2.0 * (a + b + c) - 2.0 * (a * b + a * c + b * c)
            + (a * a + b * b + c * c)
            + 4.0 * (inv.vbar2 + inv.vbar3),
    }
}

/// Squared three-tangle `tau^2` with `tau = 4 |d1 - 2 d2 + 4 d3|` from the
/// Cayley hyperdeterminant of the amplitude tensor.
pub fn three_tangle_oracle(amps: &[Complex64]) -> Result<f64> {
    if amps.len() != 8 {
        return Err(Error::QubitCountMismatch {
            left: 3,
            right: amps.len().max(1).ilog2() as usize,
        });
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    let a = |i: usize| amps[i];
    let d1 = a(0) * a(0) * a(7) * a(7)
        + a(1) * a(1) * a(6) * a(6)
        + a(2) * a(2) * a(5) * a(5)
        + a(4) * a(4) * a(3) * a(3);
    let d2 = a(0) * a(7) * a(3) * a(4)
        + a(0) * a(7) * a(5) * a(2)
        + a(0) * a(7) * a(6) * a(1)
        + a(3) * a(4) * a(5) * a(2)
        + a(3) * a(4) * a(6) * a(1)
        + a(5) * a(2) * a(6) * a(1);
    let d3 = a(0) * a(6) * a(5) * a(3) + a(7) * a(1) * a(2) * a(4);
    let tau = 4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm();
    Ok(tau * tau)
}

/// The boundary polynomial `B`, cubic in `vbar3`.
pub fn b_function(inv: &InvariantSet3Q) -> f64 {
    let (al, be, ga) = (inv.alpha(), inv.beta(), inv.gamma());
    let (x, y) = (inv.vbar2, inv.vbar3);
    -y * y * y + (be + x) * y * y + (al * x * x - 2.0 * be * x + ga * (1.0 - al)) * y + x.powi(4)
        - al * x.powi(3)
        + (be - 2.0 * ga) * x * x
        - ga * (1.0 - al) * x
        + ga * ga
}

/// Sum of the magnitudes of the monomials of `B`; its rounding scale.
pub fn b_scale(inv: &InvariantSet3Q) -> f64 {
    let (al, be, ga) = (inv.alpha(), inv.beta(), inv.gamma());
    let (x, y) = (inv.vbar2.abs(), inv.vbar3.abs());
    y.powi(3)
        + (be + inv.vbar2).abs() * y * y
        + (al * x * x + 2.0 * be * x + ga * (1.0 - al).abs()) * y
        + x.powi(4)
        + al * x.powi(3)
        + (be - 2.0 * ga).abs() * x * x
        + ga * (1.0 - al).abs() * x
        + ga * ga
}

/// Whether `B <= 0` up to [`FEASIBILITY_SLACK`] relative to [`b_scale`].
/// `B` shrinks like `gamma^2` for short vectors, so an absolute slack would
/// accept clearly infeasible points there.
pub fn b_within_slack(inv: &InvariantSet3Q, b: f64) -> bool {
    b <= FEASIBILITY_SLACK * b_scale(inv)
}

/// `F = (gamma - vbar2 vbar3)^2 / (4096 gamma^3) B`.
pub fn f_function(inv: &InvariantSet3Q) -> Result<f64> {
    inv.check_nonvanishing()?;
    let ga = inv.gamma();
    let d = ga - inv.vbar2 * inv.vbar3;
    Ok(d * d / (4096.0 * ga * ga * ga) * b_function(inv))
}

/// One violated condition reported by [`feasibility`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NegativeProbability {
        index: usize,
        value: f64,
    },
    BlochOutOfRange {
        qubit: char,
        value: f64,
    },
    PositiveB(f64),
    /// A vector vanishes but `vbar2` or `vbar3` does not.
    DegenerateOverlap {
        vbar2: f64,
        vbar3: f64,
    },
    /// A vector vanishes and the remaining two exceed `v_b + v_c <= 1`.
    DegenerateRange(f64),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NegativeProbability { index, value } => {
                let label: String = (0..3)
                    .map(|k| if sign(*index, k) > 0.0 { '+' } else { '-' })
                    .collect();
                write!(f, "p{{{label}}} = {value:e} < 0")
            }
            Violation::BlochOutOfRange { qubit, value } => {
                write!(f, "v_{qubit} = {value} outside [0, 1]")
            }
            Violation::PositiveB(b) => write!(f, "B = {b:e} > 0"),
            Violation::DegenerateOverlap { vbar2, vbar3 } => {
                write!(
                    f,
                    "vanishing vector with vbar2 = {vbar2:e}, vbar3 = {vbar3:e}"
                )
            }
            Violation::DegenerateRange(s) => {
                write!(f, "vanishing vector with remaining sum {s} > 1")
            }
        }
    }
}

/// Verdict of [`feasibility`]: feasible when no condition is violated.
#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Checks `0 <= v <= 1`, `p_ijk >= 0` and `B <= 0`, each with
/// [`FEASIBILITY_SLACK`] (relative for `B`). With a vanishing vector the probabilities are
/// undefined; then `vbar2 = vbar3 = 0` and the seed range of the remaining
/// lengths are required instead.
pub fn feasibility(inv: &InvariantSet3Q) -> Feasibility {
    let mut violations = Vec::new();
    for (k, v) in inv.v().into_iter().enumerate() {
        if !(-FEASIBILITY_SLACK..=1.0 + FEASIBILITY_SLACK).contains(&v) {
            violations.push(Violation::BlochOutOfRange {
                qubit: qubit_label(k),
                value: v,
            });
        }
    }
    if inv.v_min() < 1e-10 {
        if inv.vbar2.abs() > FEASIBILITY_SLACK || inv.vbar3.abs() > FEASIBILITY_SLACK {
            violations.push(Violation::DegenerateOverlap {
                vbar2: inv.vbar2,
                vbar3: inv.vbar3,
            });
        }
        let rest = inv.v_sum() - inv.v_min();
        if rest > 1.0 + FEASIBILITY_SLACK {
            violations.push(Violation::DegenerateRange(rest));
        }
        return Feasibility { violations };
    }
    let p = expansion_probabilities(inv).expect("nonvanishing lengths");
    for (index, &value) in p.iter().enumerate() {
        if value < -FEASIBILITY_SLACK {
            violations.push(Violation::NegativeProbability { index, value });
        }
    }
    let b = b_function(inv);
    if !b_within_slack(inv, b) {
        violations.push(Violation::PositiveB(b));
    }
    Feasibility { violations }
}

/// The special invariant points on the boundary of the allowed region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialStateKind {
    Seed,
    NegativeSeed,
    MaxTangle,
    ZeroTangle,
}

impl SpecialStateKind {
    pub const ALL: [SpecialStateKind; 4] = [
        SpecialStateKind::Seed,
        SpecialStateKind::NegativeSeed,
        SpecialStateKind::MaxTangle,
        SpecialStateKind::ZeroTangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialStateKind::Seed => "seed",
            SpecialStateKind::NegativeSeed => "negative_seed",
            SpecialStateKind::MaxTangle => "max_tangle",
            SpecialStateKind::ZeroTangle => "zero_tangle",
        }
    }
}

fn in_cube(v: [f64; 3]) -> Result<()> {
    match v.into_iter().find(|x| !(0.0..=1.0).contains(x)) {
        Some(x) => Err(Error::BlochOutOfRange(x)),
        None => Ok(()),
    }
}

/// Whether the existence condition of `kind` holds for the lengths `v`.
pub fn special_state_exists(kind: SpecialStateKind, v: [f64; 3]) -> bool {
    let sum: f64 = v.iter().sum();
    let vmin = v[0].min(v[1]).min(v[2]);
    let seed = 1.0 + 2.0 * vmin >= sum - EXISTENCE_SLACK;
    match kind {
        SpecialStateKind::Seed => seed,
        SpecialStateKind::NegativeSeed => sum <= 1.0 + EXISTENCE_SLACK,
        SpecialStateKind::MaxTangle => {
            vmin > 0.0 && vmin * vmin >= v[0] * v[1] * v[2] - EXISTENCE_SLACK && seed
        }
        SpecialStateKind::ZeroTangle => seed && sum >= 1.0 - EXISTENCE_SLACK,
    }
}

/// `xi = sqrt(prod_k (1 - alpha + 2 v_k^2)/2)` of the zero-tangle point.
pub fn zero_tangle_xi(v: [f64; 3]) -> f64 {
    let al: f64 = v.iter().map(|x| x * x).sum();
    v.iter()
        .map(|x| (1.0 - al + 2.0 * x * x) / 2.0)
        .product::<f64>()
        .max(0.0)
        .sqrt()
}

/// The invariant point of a special state, without checking existence.
pub fn special_invariants(kind: SpecialStateKind, v: [f64; 3]) -> InvariantSet3Q {
    let [va, vb, vc] = v;
    let prod = va * vb * vc;
    let vmin = va.min(vb).min(vc);
    let (vbar2, vbar3) = match kind {
        SpecialStateKind::Seed => (prod, prod),
        SpecialStateKind::NegativeSeed => (-prod, -prod),
        SpecialStateKind::MaxTangle => (vmin * vmin, prod * prod / (vmin * vmin)),
        SpecialStateKind::ZeroTangle => {
            let inv = InvariantSet3Q::new(va, vb, vc, 0.0, 0.0);
            let (al, be) = (inv.alpha(), inv.beta());
            let quartic: f64 = v.iter().map(|x| x.powi(4)).sum();
            let xi = zero_tangle_xi(v);
            (
                -(1.0 - al) / 2.0 + xi,
                (1.0 - quartic + 2.0 * be) / 4.0 - xi,
            )
        }
    };
    InvariantSet3Q::new(va, vb, vc, vbar2, vbar3)
}

/// The closed-form `I6` of each special state.
pub fn special_i6(kind: SpecialStateKind, v: [f64; 3]) -> f64 {
    let [a, b, c] = v;
    match kind {
        SpecialStateKind::Seed => {
            (1.0 + a - b - c) * (1.0 - a + b - c) * (1.0 - a - b + c) * (1.0 + a + b + c)
        }
        SpecialStateKind::NegativeSeed => {
            (1.0 - a + b + c) * (1.0 + a - b + c) * (1.0 + a + b - c) * (1.0 - a - b - c)
        }
        SpecialStateKind::MaxTangle => {
            let vmin = a.min(b).min(c);
            let m = 1.0 - a * a - b * b - c * c + 2.0 * vmin * vmin;
            m * m
        }
        SpecialStateKind::ZeroTangle => 0.0,
    }
}

const SEED_SUPPORT: [usize; 4] = [0, 3, 5, 6];
const NEGATIVE_SEED_SUPPORT: [usize; 4] = [1, 2, 4, 7];

fn four_term_amplitudes(v: [f64; 3], support: [usize; 4]) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    for idx in support {
        let p = (1.0 + (0..3).map(|k| sign(idx, k) * v[k]).sum::<f64>()) / 4.0;
        amps[idx] = Complex64::new(p.max(0.0).sqrt(), 0.0);
    }
    amps
}

/// Amplitudes of the seed (`negative = false`) or negative seed state with
/// Bloch vectors along `z`, in the computational basis.
pub fn seed_amplitudes(v: [f64; 3], negative: bool) -> Vec<Complex64> {
    four_term_amplitudes(
        v,
        if negative {
            NEGATIVE_SEED_SUPPORT
        } else {
            SEED_SUPPORT
        },
    )
}

/// Invariant point and a pure state realizing it, with every Bloch vector
/// along `z`. Seeds are written down directly; the other two are assembled
/// from solved vector-sum angles.
pub fn special_state(
    kind: SpecialStateKind,
    v: [f64; 3],
) -> Result<(InvariantSet3Q, DensityOperator)> {
    in_cube(v)?;
    if !special_state_exists(kind, v) {
        return Err(Error::ExistenceViolated(match kind {
            SpecialStateKind::Seed => "seed state requires 1 + 2 v_min >= v_a + v_b + v_c",
            SpecialStateKind::NegativeSeed => "negative seed state requires v_a + v_b + v_c <= 1",
            SpecialStateKind::MaxTangle => "maximum-tangle state requires v_min^2 >= v_a v_b v_c",
            SpecialStateKind::ZeroTangle => {
                "zero-tangle state requires 1 + 2 v_min >= v_a + v_b + v_c >= 1"
            }
        }));
    }
    let inv = special_invariants(kind, v);
    let rho = match kind {
        SpecialStateKind::Seed | SpecialStateKind::NegativeSeed => {
            pure_state(&seed_amplitudes(v, kind == SpecialStateKind::NegativeSeed))?
        }
        SpecialStateKind::MaxTangle | SpecialStateKind::ZeroTangle => {
            let angles =
                crate::solver::solve_invariants(&inv, &crate::solver::SolveOptions::default())?;
            crate::solver::reconstruct(&inv, &angles[0], &crate::solver::standard_frames())?
        }
    };
    Ok((inv, rho))
}

/// States with some reduced Bloch vectors vanishing; the vanishing ones come first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DegenerateCase {
    TwoVectors { v_b: f64, v_c: f64 },
    OneVector { v_c: f64 },
    NoVectors,
}

impl DegenerateCase {
    fn lengths(self) -> [f64; 3] {
        match self {
            DegenerateCase::TwoVectors { v_b, v_c } => [0.0, v_b, v_c],
            DegenerateCase::OneVector { v_c } => [0.0, 0.0, v_c],
            DegenerateCase::NoVectors => [0.0; 3],
        }
    }

    /// Closed-form `I6` of the limiting state.
    pub fn i6(self) -> f64 {
        match self {
            DegenerateCase::TwoVectors { v_b, v_c } => {
                let d = 1.0 - v_c * v_c;
                d * d - 2.0 * (1.0 + v_c * v_c) * v_b * v_b + v_b.powi(4)
            }
            DegenerateCase::OneVector { v_c } => {
                let d = 1.0 - v_c * v_c;
                d * d
            }
            DegenerateCase::NoVectors => 1.0,
        }
    }
}

/// The limit of the seed state as the vanishing lengths go to zero.
pub fn degenerate_limit(case: DegenerateCase) -> Result<DensityOperator> {
    let v = case.lengths();
    in_cube(v)?;
    if let DegenerateCase::TwoVectors { v_b, v_c } = case {
        if v_b + v_c > 1.0 + EXISTENCE_SLACK {
            return Err(Error::ExistenceViolated(
                "two remaining vectors require v_b + v_c <= 1",
            ));
        }
    }
    pure_state(&seed_amplitudes(v, false))
}

/// Statevector density matrix of [`seed_amplitudes`], for oracle comparisons.
pub fn seed_density_matrix(v: [f64; 3], negative: bool) -> Result<crate::oracle::DenseMatrix> {
    statevector_density(&seed_amplitudes(v, negative))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Multivector;
    use crate::oracle::{hermitian_eigenvalues, to_matrix, DenseMatrix};
    use crate::sampling;
    use crate::states::{from_strings, ghz, sphere_state, w_state, ProductState};

    #[test]
    fn two_qubit_invariant() {
        let prod = crate::states::product_state(&ProductState::computational(2, 1).unwrap());
        assert!((invariants_2q(&prod).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            invariants_2q(&crate::states::bell(crate::states::Bell::PhiMinus)).unwrap(),
            0.0
        );
        let (s00, _) = crate::dynamics::exchange_spheres();
        let theta: f64 = 2.2;
        let v = invariants_2q(&sphere_state(&s00, theta, 0.3)).unwrap();
        assert!((v - theta.cos().abs()).abs() < 1e-12);
    }

    #[test]
    fn w_state_is_a_negative_seed() {
        let inv = invariants_3q(&w_state()).unwrap();
        let third = 1.0 / 3.0;
        let expected = InvariantSet3Q::new(third, third, third, -1.0 / 27.0, -1.0 / 27.0);
        assert!(inv.max_abs_diff(&expected) < 1e-14);
        assert!(sudbery(&inv).i6.abs() < 1e-14);
        assert!(b_function(&inv).abs() < 1e-15);
    }

    #[test]
    fn ghz_is_degenerate() {
        assert!(matches!(
            invariants_3q(&ghz()),
            Err(Error::VanishingVector('a'))
        ));
        let inv = invariants_3q_unchecked(&ghz());
        assert_eq!(sudbery(&inv).i6, 1.0);
        assert!(feasibility(&inv).is_feasible());
    }

    #[test]
    fn product_state_sudbery() {
        let s = sudbery(&InvariantSet3Q::new(1.0, 1.0, 1.0, 1.0, 1.0));
        assert_eq!(s.i6, 0.0);
        assert_eq!(s.i2, 1.0);
    }

    #[test]
    fn probabilities_sum_to_one_and_match_the_state() {
        let mut rng = sampling::rng(8);
        for _ in 0..20 {
            let amps = sampling::random_amplitudes(&mut rng, 3);
            let rho = pure_state(&amps).unwrap();
            let inv = invariants_3q(&rho).unwrap();
            let p = expansion_probabilities(&inv).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            let frames: Vec<_> = (0..3)
                .map(|k| {
                    crate::states::Frame::from_axis(vec3::normalize(rho.bloch_vector(k)).unwrap())
                        .unwrap()
                })
                .collect();
            for (idx, &pi) in p.iter().enumerate() {
                let basis =
                    crate::states::product_state(&ProductState::basis(&frames, idx).unwrap());
                let direct = (basis.mv() * rho.mv()).trace();
                assert!((direct - pi).abs() < 1e-12, "index {idx}: {direct} vs {pi}");
            }
        }
    }

    #[test]
    fn seed_probabilities_have_four_survivors() {
        let v = [0.3, 0.5, 0.6];
        let p = expansion_probabilities(&special_invariants(SpecialStateKind::Seed, v)).unwrap();
        assert!((p[0] - (1.0 + 0.3 + 0.5 + 0.6) / 4.0).abs() < 1e-15);
        for idx in NEGATIVE_SEED_SUPPORT {
            assert!(p[idx].abs() < 1e-15);
        }
        let p = expansion_probabilities(&special_invariants(SpecialStateKind::NegativeSeed, v))
            .unwrap();
        assert!((p[7] - (1.0 - 1.4) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn pairwise_estimates_agree_and_i5_matches_trace_formula() {
        let mut rng = sampling::rng(9);
        for _ in 0..20 {
            let amps = sampling::random_amplitudes(&mut rng, 3);
            let rho = pure_state(&amps).unwrap();
            let (pairs, _) = raw_pair_invariants(&rho);
            assert!((pairs[0] - pairs[1]).abs() < 1e-12 && (pairs[1] - pairs[2]).abs() < 1e-12);

            let m = statevector_density(&amps).unwrap();
            let ra = m.partial_trace(&[0]).unwrap();
            let rb = m.partial_trace(&[1]).unwrap();
            let rab = m.partial_trace(&[0, 1]).unwrap();
            let cube = |x: &DenseMatrix| (&(x * x) * x).trace().re;
            let i5 = 3.0 * (&ra.kron(&rb) * &rab).trace().re - cube(&ra) - cube(&rb);
            let inv = invariants_3q(&rho).unwrap();
            assert!((sudbery(&inv).i5 - i5).abs() < 1e-12);
            assert!((sudbery(&inv).i2 - (&ra * &ra).trace().re).abs() < 1e-12);
        }
    }

    #[test]
    fn three_tangle_oracle_on_known_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut g = vec![Complex64::new(0.0, 0.0); 8];
        g[0] = Complex64::new(h, 0.0);
        g[7] = Complex64::new(h, 0.0);
        assert!((three_tangle_oracle(&g).unwrap() - 1.0).abs() < 1e-15);
        let t = (1.0f64 / 3.0).sqrt();
        let mut w = vec![Complex64::new(0.0, 0.0); 8];
        for i in [1, 2, 4] {
            w[i] = Complex64::new(t, 0.0);
        }
        assert_eq!(three_tangle_oracle(&w).unwrap(), 0.0);
        assert!(matches!(
            three_tangle_oracle(&[Complex64::new(1.0, 0.0); 8]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn i6_formula_matches_oracle() {
        let mut rng = sampling::rng(10);
        for _ in 0..200 {
            let amps = sampling::random_amplitudes(&mut rng, 3);
            let inv = invariants_3q(&pure_state(&amps).unwrap()).unwrap();
            assert!((sudbery(&inv).i6 - three_tangle_oracle(&amps).unwrap()).abs() < 1e-10);
            assert!(b_function(&inv) < 1e-9);
            assert!(feasibility(&inv).is_feasible());
        }
    }

    #[test]
    fn invariants_are_local_unitary_invariant() {
        let mut rng = sampling::rng(12);
        let amps = sampling::random_amplitudes(&mut rng, 3);
        let rho = pure_state(&amps).unwrap();
        let before = invariants_3q(&rho).unwrap();
        let mut rotated = rho;
        for k in 0..3 {
            let axis = sampling::random_unit_vector(&mut rng);
            let r = crate::states::Rotor::local(3, k, axis, 1.0 + k as f64).unwrap();
            rotated = crate::states::apply_rotor(&r, &rotated).unwrap();
        }
        assert!(invariants_3q(&rotated).unwrap().max_abs_diff(&before) < 1e-12);
    }

    #[test]
    fn seed_existence_violation_is_infeasible() {
        let v = [1.0, 1.0, 0.5];
        let f = feasibility(&special_invariants(SpecialStateKind::Seed, v));
        assert!(f
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NegativeProbability { .. })));
        assert!(matches!(
            special_state(SpecialStateKind::Seed, v),
            Err(Error::ExistenceViolated(_))
        ));
    }

    #[test]
    fn special_states_reproduce_their_invariants() {
        for v in [[0.2, 0.3, 0.35], [0.5, 0.5, 0.5], [0.45, 0.5, 0.6]] {
            for kind in SpecialStateKind::ALL {
                if !special_state_exists(kind, v) {
                    continue;
                }
                let (inv, rho) = special_state(kind, v).unwrap();
                assert!(rho.purity_error() < 1e-10);
                assert!(b_function(&inv).abs() < 1e-12, "{kind:?} {v:?}");
                let got = invariants_3q(&rho).unwrap();
                assert!(
                    got.max_abs_diff(&inv) < 1e-9,
                    "{kind:?} {v:?}: {got:?} vs {inv:?}"
                );
                assert!(
                    (sudbery(&got).i6 - special_i6(kind, v)).abs() < 1e-9,
                    "{kind:?} {v:?}"
                );
            }
        }
    }

    #[test]
    fn seed_of_ones_is_product_and_negative_seed_of_thirds_is_w() {
        let (_, rho) = special_state(SpecialStateKind::Seed, [1.0, 1.0, 1.0]).unwrap();
        let expected = crate::states::product_state(&ProductState::computational(3, 0).unwrap());
        assert!(rho.mv().max_abs_diff(expected.mv()) < 1e-15);
        let t = 1.0 / 3.0;
        let (_, rho) = special_state(SpecialStateKind::NegativeSeed, [t, t, t]).unwrap();
        let amps = seed_amplitudes([t, t, t], true);
        assert!(to_matrix(rho.mv()).max_abs_diff(&statevector_density(&amps).unwrap()) < 1e-15);
        assert!(rho.mv().max_abs_diff(w_state().mv()) < 1e-15);
        let inv = invariants_3q(&rho).unwrap();
        assert!(inv.max_abs_diff(&invariants_3q(&w_state()).unwrap()) < 1e-14);
    }

    #[test]
    fn zero_tangle_meets_negative_seed_on_the_plane() {
        let v = [0.2, 0.3, 0.5];
        let z = special_invariants(SpecialStateKind::ZeroTangle, v);
        let n = special_invariants(SpecialStateKind::NegativeSeed, v);
        assert!(z.max_abs_diff(&n) < 1e-12);
    }

    #[test]
    fn equal_lengths_zero_tangle_closed_form() {
        let v: f64 = 2.0 / 3.0;
        let z = special_invariants(SpecialStateKind::ZeroTangle, [v; 3]);
        let r = 2f64.sqrt() * (1.0 - v * v).powf(1.5);
        assert!((z.vbar2 - (-2.0 + 6.0 * v * v + r) / 4.0).abs() < 1e-15);
        assert!((z.vbar3 - (1.0 + 3.0 * v.powi(4) - r) / 4.0).abs() < 1e-15);
        assert!(sudbery(&z).i6.abs() < 1e-14);
    }

    #[test]
    fn no_vector_limit_is_x_basis_ghz() {
        let rho = degenerate_limit(DegenerateCase::NoVectors).unwrap();
        let pairs = from_strings(3, &[("III", 1.0), ("XXI", 1.0), ("XIX", 1.0), ("IXX", 1.0)]);
        let expected = &(&pairs * &from_strings(3, &[("III", 1.0), ("ZZZ", 1.0)])) * 0.125;
        assert!(rho.mv().max_abs_diff(&expected) < 1e-15);
        let a = hermitian_eigenvalues(&to_matrix(rho.mv())).unwrap();
        let b = hermitian_eigenvalues(&to_matrix(ghz().mv())).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
        let amps = seed_amplitudes([0.0; 3], false);
        assert!((three_tangle_oracle(&amps).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_vector_limit_matches_closed_form() {
        let vc: f64 = 0.4;
        let rho = degenerate_limit(DegenerateCase::OneVector { v_c: vc }).unwrap();
        let s = (1.0 - vc * vc).sqrt();
        let m = |t: &[(&str, f64)]| from_strings(3, t);
        let xx = m(&[("XXI", 1.0)]);
        let zz = m(&[("ZZI", 1.0)]);
        let zzz = m(&[("ZZZ", 1.0)]);
        let side = m(&[("XIX", s), ("IXX", s)]);
        let mut expected = Multivector::one(3);
        expected += &m(&[("IIZ", vc)]);
        expected += &(&zz * vc);
        expected += &(&xx * &(&Multivector::one(3) + &(&zz * vc)));
        expected += &side;
        expected += &(&side * &zzz);
        expected += &(&(&Multivector::one(3) + &xx) * &zzz);
        expected += &(&xx * &m(&[("IIZ", vc)]));
        let expected = expected * 0.125;
        assert!(rho.mv().max_abs_diff(&expected) < 1e-15);
        let amps = seed_amplitudes([0.0, 0.0, vc], false);
        let i6 = DegenerateCase::OneVector { v_c: vc }.i6();
        assert!((three_tangle_oracle(&amps).unwrap() - i6).abs() < 1e-14);
        assert_eq!(DegenerateCase::OneVector { v_c: 1.0 }.i6(), 0.0);
    }

    #[test]
    fn two_vector_limit() {
        let case = DegenerateCase::TwoVectors { v_b: 0.3, v_c: 0.3 };
        let rho = degenerate_limit(case).unwrap();
        assert!(rho.purity_error() < 1e-15);
        let inv = invariants_3q_unchecked(&rho);
        assert!(inv.max_abs_diff(&InvariantSet3Q::new(0.0, 0.3, 0.3, 0.0, 0.0)) < 1e-15);
        let amps = seed_amplitudes([0.0, 0.3, 0.3], false);
        assert!((three_tangle_oracle(&amps).unwrap() - case.i6()).abs() < 1e-14);
        assert!(degenerate_limit(DegenerateCase::TwoVectors { v_b: 0.6, v_c: 0.6 }).is_err());
    }
}
