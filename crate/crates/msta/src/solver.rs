//! The three planar vector-sum equations of a three-qubit pure state and the
//! reconstruction of a state from its invariants and solved angles.
//!
//! For qubit `q` the four vectors pair the expansion states that differ only
//! on `q`; their lengths are `sqrt(p_{..0..} p_{..1..})` and their directions
//! are the azimuths of the corresponding `X`-terms. Vectors are ordered by the
//! bits of the other two qubits: `[00, 01, 10, 11]`.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::invariants::{expansion_probabilities, feasibility, InvariantSet3Q, FEASIBILITY_SLACK};
use crate::sampling;
use crate::states::{
    product_state, projector_sphere, pure_state_from_amplitudes, DensityOperator, Frame,
    ProductState, ZOrder,
};
use crate::vec3;
use crate::Complex64;

/// Twelve vector lengths, `[qubit][pair]`.
pub type VectorLengths = [[f64; 4]; 3];

/// Indices `(i0, i1)` of the two expansion states joined by vector `pair` of qubit `q`.
fn pair_indices(q: usize, pair: usize) -> (usize, usize) {
    let (hi, lo) = (pair >> 1, pair & 1);
    let i0 = match q {
        0 => (hi << 1) | lo,
        1 => (hi << 2) | lo,
        _ => (hi << 2) | (lo << 1),
    };
    (i0, i0 | (4 >> q))
}

/// Lengths `sqrt(p_i0 p_i1)` of the twelve vectors.
pub fn vector_lengths(p: &[f64; 8]) -> Result<VectorLengths> {
    if let Some(&x) = p.iter().find(|&&x| x < 0.0) {
        return Err(Error::NegativeProbability(x));
    }
    let mut out = [[0.0; 4]; 3];
    for (q, row) in out.iter_mut().enumerate() {
        for (pair, l) in row.iter_mut().enumerate() {
            let (i0, i1) = pair_indices(q, pair);
            *l = (p[i0] * p[i1]).sqrt();
        }
    }
    Ok(out)
}

/// Product over sign choices of `l0 ± l1 ± l2 ± l3`; zero exactly when the
/// four lengths can close into a degenerate (collinear) quadrilateral.
pub fn fan_product(l: [f64; 4]) -> f64 {
    let mut out = 1.0;
    for s in 0..8 {
        let sg = |bit: usize| if s & (1 << bit) == 0 { 1.0 } else { -1.0 };
        out *= l[0] + sg(0) * l[1] + sg(1) * l[2] + sg(2) * l[3];
    }
    out
}

/// The six relative angles between the vectors. Only four are independent:
/// `phi'_ab - phi_ab = phi'_ac - phi_ac = phi'_bc - phi_bc`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AngleSet {
    pub phi_ab: f64,
    pub phi_ab_prime: f64,
    pub phi_ac: f64,
    pub phi_ac_prime: f64,
    pub phi_bc: f64,
    pub phi_bc_prime: f64,
}

/// Wraps into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

impl AngleSet {
    /// Builds the set from `(phi_ab, phi'_ab, phi_ac, phi_bc)`.
    pub fn from_free(x: [f64; 4]) -> Self {
        let [ab, abp, ac, bc] = x;
        let twist = abp - ab;
        AngleSet {
            phi_ab: wrap_angle(ab),
            phi_ab_prime: wrap_angle(abp),
            phi_ac: wrap_angle(ac),
            phi_ac_prime: wrap_angle(ac + twist),
            phi_bc: wrap_angle(bc),
            phi_bc_prime: wrap_angle(bc + twist),
        }
    }

    pub fn free(&self) -> [f64; 4] {
        [self.phi_ab, self.phi_ab_prime, self.phi_ac, self.phi_bc]
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.phi_ab,
            self.phi_ab_prime,
            self.phi_ac,
            self.phi_ac_prime,
            self.phi_bc,
            self.phi_bc_prime,
        ]
    }

    /// All angles with flipped signs.
    pub fn negated(&self) -> Self {
        let a = self.as_array().map(|x| wrap_angle(-x));
        AngleSet {
            phi_ab: a[0],
            phi_ab_prime: a[1],
            phi_ac: a[2],
            phi_ac_prime: a[3],
            phi_bc: a[4],
            phi_bc_prime: a[5],
        }
    }

    /// Largest violation of the two dependency relations, modulo `2 pi`.
    pub fn closure_error(&self) -> f64 {
        let twist = self.phi_ab_prime - self.phi_ab;
        [
            self.phi_ac_prime - self.phi_ac - twist,
            self.phi_bc_prime - self.phi_bc - twist,
        ]
        .into_iter()
        .map(|d| wrap_angle(d).abs())
        .fold(0.0, f64::max)
    }

    /// Largest angular distance to `other`, modulo `2 pi`.
    pub fn max_angle_diff(&self, other: &AngleSet) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| wrap_angle(a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Directions of the twelve vectors with each qubit's `[00]` vector at angle 0.
    pub fn qubit_angles(&self) -> [[f64; 4]; 3] {
        [
            [
                0.0,
                self.phi_ac,
                self.phi_ab,
                self.phi_ac + self.phi_ab_prime,
            ],
            [
                0.0,
                self.phi_bc,
                self.phi_ab,
                self.phi_bc + self.phi_ab_prime,
            ],
            [
                0.0,
                self.phi_bc,
                self.phi_ac,
                self.phi_bc + self.phi_ac_prime,
            ],
        ]
    }
}

/// `d angle[q][pair] / d free[m]` for the parametrization of [`AngleSet::from_free`].
const ANGLE_MAP: [[[f64; 4]; 4]; 3] = [
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
    ],
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
    ],
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [-1.0, 1.0, 1.0, 1.0],
    ],
];

fn angles_of(x: &[f64; 4]) -> [[f64; 4]; 3] {
    let mut out = [[0.0; 4]; 3];
    for q in 0..3 {
        for k in 0..4 {
            out[q][k] = (0..4).map(|m| ANGLE_MAP[q][k][m] * x[m]).sum();
        }
    }
    out
}

fn residual_vec(l: &VectorLengths, x: &[f64; 4]) -> [f64; 6] {
    let ang = angles_of(x);
    let mut r = [0.0; 6];
    for q in 0..3 {
        for k in 0..4 {
            r[2 * q] += l[q][k] * ang[q][k].cos();
            r[2 * q + 1] += l[q][k] * ang[q][k].sin();
        }
    }
    r
}

fn jacobian(l: &VectorLengths, x: &[f64; 4]) -> [[f64; 4]; 6] {
    let ang = angles_of(x);
    let mut j = [[0.0; 4]; 6];
    for q in 0..3 {
        for k in 0..4 {
            let (s, c) = ang[q][k].sin_cos();
            for m in 0..4 {
                let d = ANGLE_MAP[q][k][m];
                if d != 0.0 {
                    j[2 * q][m] -= l[q][k] * s * d;
                    j[2 * q + 1][m] += l[q][k] * c * d;
                }
            }
        }
    }
    j
}

fn max_norm(r: &[f64; 6]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sq_norm(r: &[f64; 6]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Max-norm of the six residual components at `angles`.
pub fn residual(lengths: &VectorLengths, angles: &AngleSet) -> f64 {
    max_norm(&residual_vec(lengths, &angles.free()))
}

/// Solves the 4x4 symmetric system `a d = b` by Gaussian elimination with
/// partial pivoting; `None` if singular.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &k| a[i][col].abs().total_cmp(&a[k][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            let pivot = a[col];
            for (x, p) in a[row].iter_mut().zip(pivot).skip(col) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Gauss-Newton step `-(J^T J + mu I)^-1 J^T r`; the tiny `mu` keeps the
/// system solvable when zero-length vectors leave angles unconstrained.
fn gauss_newton_step(l: &VectorLengths, x: &[f64; 4], r: &[f64; 6]) -> Option<[f64; 4]> {
    let j = jacobian(l, x);
    let mut jtj = [[0.0; 4]; 4];
    let mut jtr = [0.0; 4];
    for a in 0..4 {
        for b in 0..4 {
            jtj[a][b] = (0..6).map(|i| j[i][a] * j[i][b]).sum();
        }
        jtr[a] = -(0..6).map(|i| j[i][a] * r[i]).sum::<f64>();
    }
    let tr: f64 = (0..4).map(|a| jtj[a][a]).sum();
    for (a, row) in jtj.iter_mut().enumerate() {
        row[a] += 1e-14 * (1.0 + tr);
    }
    solve4(jtj, jtr)
}

/// Parameters of [`solve`].
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Random starts drawn uniformly from `(-pi, pi]^4`.
    pub restarts: usize,
    /// Also start from every point of `{0, pi}^4`, where collinear
    /// (boundary) solutions sit exactly.
    pub lattice_starts: bool,
    pub seed: u64,
    /// Residual tolerance (max-norm).
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Solutions closer than this modulo `2 pi` are merged.
    pub dedup_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            restarts: 32,
            lattice_starts: true,
            seed: 0x05ee_dca7,
            tol: 1e-11,
            max_iter: 200,
            max_halvings: 40,
            dedup_tol: 1e-6,
        }
    }
}

const POLISH_FLOOR: f64 = 1e-16;

fn descend(l: &VectorLengths, mut x: [f64; 4], opts: &SolveOptions) -> Option<[f64; 4]> {
    let mut r = residual_vec(l, &x);
    // Keep iterating past `tol` until no step decreases the residual: at
    // collinear (double-root) solutions the angles lag the residual badly.
    for _ in 0..opts.max_iter {
        if max_norm(&r) < POLISH_FLOOR {
            break;
        }
        let d = gauss_newton_step(l, &x, &r)?;
        let n0 = sq_norm(&r);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial = [
                x[0] + t * d[0],
                x[1] + t * d[1],
                x[2] + t * d[2],
                x[3] + t * d[3],
            ];
            let rt = residual_vec(l, &trial);
            if sq_norm(&rt) < n0 {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if max_norm(&r) >= opts.tol {
        return None;
    }
    // Collinear solutions sit exactly on the {0, pi} lattice but are only
    // approached to about 1e-6 in angle; snap when the lattice point solves too.
    let snapped = x.map(|a| (a / PI).round() * PI);
    let near = x.iter().zip(&snapped).all(|(a, b)| (a - b).abs() < 1e-3);
    if near && max_norm(&residual_vec(l, &snapped)) < opts.tol {
        return Some(snapped);
    }
    Some(x)
}

/// Solves the vector sums for the given lengths by multi-start damped
/// Gauss-Newton. Returns the distinct solutions together with their
/// conjugates (negated angles); a single all-zero set when every length
/// vanishes; an empty list when no start converged.
pub fn solve(lengths: &VectorLengths, opts: &SolveOptions) -> Vec<AngleSet> {
    if lengths.iter().flatten().all(|&l| l < 1e-12) {
        return vec![AngleSet::default()];
    }
    let mut starts: Vec<[f64; 4]> = Vec::new();
    if opts.lattice_starts {
        for bits in 0..16 {
            starts.push(std::array::from_fn(|m| {
                if bits & (1 << m) == 0 {
                    0.0
                } else {
                    PI
                }
            }));
        }
    }
    let mut rng = sampling::rng(opts.seed);
    for _ in 0..opts.restarts {
        starts.push(std::array::from_fn(|_| rng.random_range(-PI..PI)));
    }

    let mut found: Vec<AngleSet> = Vec::new();
    let push = |s: AngleSet, found: &mut Vec<AngleSet>| {
        if !found.iter().any(|f| f.max_angle_diff(&s) < opts.dedup_tol) {
            found.push(s);
        }
    };
    for x0 in starts {
        if let Some(x) = descend(lengths, x0, opts) {
            let s = AngleSet::from_free(x);
            push(s, &mut found);
            push(s.negated(), &mut found);
        }
    }
    found.sort_by(|a, b| {
        a.as_array()
            .iter()
            .zip(b.as_array())
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    found
}

/// Probabilities this small are rounding noise; their square roots would
/// otherwise leave lengths near `1e-7` that no closed fan can absorb.
const PROBABILITY_FLOOR: f64 = 1e-14;

/// Lengths for `inv`, with probabilities inside the feasibility slack, or
/// below the rounding floor, set to zero.
pub fn lengths_for(inv: &InvariantSet3Q) -> Result<VectorLengths> {
    let p = expansion_probabilities(inv)?.map(|x| {
        if (-FEASIBILITY_SLACK..=PROBABILITY_FLOOR).contains(&x) {
            0.0
        } else {
            x
        }
    });
    vector_lengths(&p)
}

/// Checks feasibility, then solves. Infeasible invariants and a failure to
/// find any solution for feasible ones are reported as different errors.
pub fn solve_invariants(inv: &InvariantSet3Q, opts: &SolveOptions) -> Result<Vec<AngleSet>> {
    let verdict = feasibility(inv);
    if !verdict.is_feasible() {
        return Err(Error::Infeasible(verdict.summary()));
    }
    let sols = solve(&lengths_for(inv)?, opts);
    if sols.is_empty() {
        return Err(Error::SolverFailure);
    }
    Ok(sols)
}

/// The twelve vectors of a state, read from its `X`-term coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectorFan {
    pub lengths: VectorLengths,
    /// Absolute azimuths in the frames used to read the fan.
    pub angles: [[f64; 4]; 3],
}

impl VectorFan {
    /// Per-qubit vector sums.
    pub fn sums(&self) -> [Complex64; 3] {
        std::array::from_fn(|q| {
            (0..4)
                .map(|k| Complex64::from_polar(self.lengths[q][k], self.angles[q][k]))
                .sum()
        })
    }

    /// The relative angles, measured from each qubit's `[00]` vector.
    pub fn angle_set(&self) -> AngleSet {
        let rel = |q: usize, k: usize| self.angles[q][k] - self.angles[q][0];
        AngleSet {
            phi_ab: wrap_angle(rel(0, 2)),
            phi_ab_prime: wrap_angle(rel(0, 3) - rel(0, 1)),
            phi_ac: wrap_angle(rel(0, 1)),
            phi_ac_prime: wrap_angle(rel(0, 3) - rel(0, 2)),
            phi_bc: wrap_angle(rel(1, 1)),
            phi_bc_prime: wrap_angle(rel(1, 3) - rel(1, 2)),
        }
    }
}

/// Three copies of the standard frame.
pub fn standard_frames() -> Vec<Frame> {
    vec![Frame::standard(); 3]
}

/// Frames whose `z` axes follow the reduced Bloch vectors of `rho`.
pub fn state_frames(rho: &DensityOperator) -> Result<Vec<Frame>> {
    (0..rho.n_qubits())
        .map(|k| {
            let axis = vec3::normalize(rho.bloch_vector(k))
                .ok_or(Error::VanishingVector(crate::algebra::qubit_label(k)))?;
            Frame::from_axis(axis)
        })
        .collect()
}

/// Reads the twelve vectors of a three-qubit state in the product basis of
/// `frames`: the vector joining `i0`, `i1` is `(tr(X rho), tr(Y rho))/2` of their sphere.
pub fn read_vector_fan(rho: &DensityOperator, frames: &[Frame]) -> Result<VectorFan> {
    if rho.n_qubits() != 3 || frames.len() != 3 {
        return Err(Error::QubitCountMismatch {
            left: 3,
            right: rho.n_qubits(),
        });
    }
    let mut fan = VectorFan {
        lengths: [[0.0; 4]; 3],
        angles: [[0.0; 4]; 3],
    };
    for q in 0..3 {
        for pair in 0..4 {
            let (i0, i1) = pair_indices(q, pair);
            let s0 = ProductState::basis(frames, i0)?;
            let s1 = ProductState::basis(frames, i1)?;
            let sph = projector_sphere(&s0, &s1, ZOrder::FirstNorth)?;
            let cx = (&sph.x * rho.mv()).trace() / 2.0;
            let cy = (&sph.y * rho.mv()).trace() / 2.0;
            fan.lengths[q][pair] = cx.hypot(cy);
            fan.angles[q][pair] = cy.atan2(cx);
        }
    }
    Ok(fan)
}

/// Expansion probabilities `tr({i} rho)` in the product basis of `frames`.
pub fn read_probabilities(rho: &DensityOperator, frames: &[Frame]) -> Result<[f64; 8]> {
    let mut p = [0.0; 8];
    for (idx, out) in p.iter_mut().enumerate() {
        let basis = product_state(&ProductState::basis(frames, idx)?);
        *out = (basis.mv() * rho.mv()).trace();
    }
    Ok(p)
}

/// Assembles the pure state with the expansion probabilities of `inv` and
/// amplitude phases fixed by `angles`, in the product basis of `frames`.
///
/// Phases are gauged so `theta_000 = theta_001 = theta_010 = theta_100 = 0`;
/// the pair phases then carry `phi_ab`, `phi_ac`, `phi_bc` and the last one
/// closes the cube.
pub fn reconstruct(
    inv: &InvariantSet3Q,
    angles: &AngleSet,
    frames: &[Frame],
) -> Result<DensityOperator> {
    let closure = angles.closure_error();
    if closure > 1e-9 {
        return Err(Error::ClosureViolation(closure));
    }
    let verdict = feasibility(inv);
    if !verdict.is_feasible() {
        return Err(Error::Infeasible(verdict.summary()));
    }
    let lengths = lengths_for(inv)?;
    let res = residual(&lengths, angles);
    if res > 1e-8 {
        return Err(Error::ClosureViolation(res));
    }
    let p = expansion_probabilities(inv)?;
    let mut theta = [0.0; 8];
    theta[6] = angles.phi_ab;
    theta[5] = angles.phi_ac;
    theta[3] = angles.phi_bc;
    theta[7] = angles.phi_ab_prime + angles.phi_ac + angles.phi_bc;
    let amps: Vec<Complex64> = p
        .iter()
        .zip(theta)
        .map(|(&pi, t)| Complex64::from_polar(pi.max(0.0).sqrt(), t))
        .collect();
    pure_state_from_amplitudes(&amps, frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{
        b_function, f_function, invariants_3q, special_invariants, SpecialStateKind,
    };
    use crate::states::pure_state;

    fn random_state(seed: u64) -> DensityOperator {
        let mut rng = sampling::rng(seed);
        pure_state(&sampling::random_amplitudes(&mut rng, 3)).unwrap()
    }

    #[test]
    fn pair_indices_differ_on_one_qubit() {
        for q in 0..3 {
            let mut seen = Vec::new();
            for pair in 0..4 {
                let (i0, i1) = pair_indices(q, pair);
                assert_eq!(i0 ^ i1, 4 >> q);
                assert_eq!(i0 & (4 >> q), 0);
                seen.push(i0);
            }
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), 4);
        }
    }

    #[test]
    fn uniform_and_seed_lengths() {
        let l = vector_lengths(&[0.125; 8]).unwrap();
        assert!(l.iter().flatten().all(|&x| (x - 0.125).abs() < 1e-16));
        let inv = special_invariants(SpecialStateKind::Seed, [0.3, 0.4, 0.5]);
        assert!(lengths_for(&inv)
            .unwrap()
            .iter()
            .flatten()
            .all(|&x| x < 1e-8));
        assert_eq!(
            solve(&[[0.0; 4]; 3], &SolveOptions::default()),
            vec![AngleSet::default()]
        );
        assert!(vector_lengths(&[-0.1, 0.2, 0.2, 0.2, 0.2, 0.1, 0.1, 0.1]).is_err());
    }

    #[test]
    fn fan_of_a_pure_state_closes() {
        let rho = random_state(1);
        let frames = state_frames(&rho).unwrap();
        let fan = read_vector_fan(&rho, &frames).unwrap();
        for s in fan.sums() {
            assert!(s.norm() < 1e-12);
        }
        let inv = invariants_3q(&rho).unwrap();
        let l = lengths_for(&inv).unwrap();
        for (lq, fq) in l.iter().zip(&fan.lengths) {
            for (x, y) in lq.iter().zip(fq) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(fan.angle_set().closure_error() < 1e-12);
        assert!(residual(&l, &fan.angle_set()) < 1e-12);
    }

    #[test]
    fn f_function_matches_length_products() {
        for seed in 0..10 {
            let rho = random_state(100 + seed);
            let inv = invariants_3q(&rho).unwrap();
            let l = lengths_for(&inv).unwrap();
            let f = f_function(&inv).unwrap();
            for lq in l {
                assert!((fan_product(lq) - f).abs() < 1e-12 * (1.0 + f.abs()));
            }
        }
    }

    #[test]
    fn solver_recovers_the_state_angles_as_a_conjugate_pair() {
        for seed in 0..20 {
            let rho = random_state(200 + seed);
            let inv = invariants_3q(&rho).unwrap();
            let sols = solve_invariants(&inv, &SolveOptions::default()).unwrap();
            assert_eq!(sols.len(), 2, "seed {seed}: {sols:?}");
            assert!(sols[0].max_angle_diff(&sols[1].negated()) < 1e-6);
            let read = read_vector_fan(&rho, &state_frames(&rho).unwrap())
                .unwrap()
                .angle_set();
            assert!(sols.iter().any(|s| s.max_angle_diff(&read) < 1e-6));
            let l = lengths_for(&inv).unwrap();
            for s in &sols {
                assert!(residual(&l, s) < 1e-11);
                assert!(residual(&l, &s.negated()) < 1e-11);
            }
        }
    }

    #[test]
    fn round_trip_reconstruction() {
        for seed in 0..20 {
            let rho = random_state(300 + seed);
            let inv = invariants_3q(&rho).unwrap();
            for s in solve_invariants(&inv, &SolveOptions::default()).unwrap() {
                let back = reconstruct(&inv, &s, &standard_frames()).unwrap();
                assert!(back.purity_error() < 1e-10);
                assert!(invariants_3q(&back).unwrap().max_abs_diff(&inv) < 1e-9);
            }
        }
    }

    #[test]
    fn reconstruction_in_the_original_frames_is_the_original_state() {
        let rho = random_state(7);
        let inv = invariants_3q(&rho).unwrap();
        let frames = state_frames(&rho).unwrap();
        let fan = read_vector_fan(&rho, &frames).unwrap();
        let back = reconstruct(&inv, &fan.angle_set(), &frames).unwrap();
        let u = crate::oracle::to_matrix(back.mv());
        let v = crate::oracle::to_matrix(rho.mv());
        let sa = crate::oracle::hermitian_eigenvalues(&u.partial_trace(&[0, 1]).unwrap()).unwrap();
        let sb = crate::oracle::hermitian_eigenvalues(&v.partial_trace(&[0, 1]).unwrap()).unwrap();
        assert!(sa.iter().zip(&sb).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn boundary_solution_is_collinear() {
        let inv = special_invariants(SpecialStateKind::MaxTangle, [0.5, 0.6, 0.7]);
        assert!(b_function(&inv).abs() < 1e-12);
        let sols = solve_invariants(&inv, &SolveOptions::default()).unwrap();
        assert_eq!(sols.len(), 1, "{sols:?}");
        for a in sols[0].as_array() {
            assert!(a.abs() < 1e-6 || (a.abs() - PI).abs() < 1e-6);
        }
    }

    #[test]
    fn infeasible_and_bad_closure_are_errors() {
        let inv = InvariantSet3Q::new(0.5, 0.5, 0.5, 0.5, -0.5);
        assert!(matches!(
            solve_invariants(&inv, &SolveOptions::default()),
            Err(Error::Infeasible(_))
        ));
        let good = invariants_3q(&random_state(4)).unwrap();
        let mut bad = solve_invariants(&good, &SolveOptions::default()).unwrap()[0];
        bad.phi_bc_prime += 0.1;
        assert!(matches!(
            reconstruct(&good, &bad, &standard_frames()),
            Err(Error::ClosureViolation(_))
        ));
    }
}
