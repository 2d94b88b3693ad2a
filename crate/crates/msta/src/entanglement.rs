//! Reduced operators, entropies, measurement updates and the CHSH expression.

use std::f64::consts::PI;

use rand::Rng;

use crate::algebra::{Letter, Multivector};
use crate::error::{Error, Result};
use crate::sampling;
use crate::states::DensityOperator;
use crate::vec3::{self, Vec3};

const PURE_TOL: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-12;

/// Reduced operator on `keep` (ascending qubit order): drop the other qubits
/// and rescale by `2^dropped`.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let n = rho.n_qubits();
    let keep_mask = crate::algebra::subset_mask(n, keep)?;
    let dropped: Vec<usize> = (0..n).filter(|k| keep_mask & (1 << k) == 0).collect();
    if dropped.is_empty() {
        return Err(Error::InvalidSubset("keep must be a proper subset".into()));
    }
    let reduced = rho.mv().partial_drop(&dropped)? * (1u64 << dropped.len()) as f64;
    Ok(DensityOperator::from_mv_unchecked(reduced))
}

/// Entropy in bits of a qubit whose Bloch vector has length `v`.
pub fn bloch_entropy(v: f64) -> f64 {
    let v = v.clamp(0.0, 1.0);
    [(1.0 + v) / 2.0, (1.0 - v) / 2.0]
        .into_iter()
        .filter(|&l| l > 0.0 && l < 1.0)
        .map(|l| -l * l.log2())
        .sum()
}

fn require_pure_2q(rho: &DensityOperator) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::QubitCountMismatch {
            left: 2,
            right: rho.n_qubits(),
        });
    }
    let e = rho.purity_error();
    if e > PURE_TOL {
        return Err(Error::NotPure(e));
    }
    Ok(())
}

/// Entanglement entropy of a two-qubit pure state across the cut at `cut`,
/// from the length of that qubit's reduced Bloch vector.
pub fn entanglement_entropy(rho: &DensityOperator, cut: usize) -> Result<f64> {
    require_pure_2q(rho)?;
    if cut >= 2 {
        return Err(Error::QubitOutOfRange {
            index: cut,
            n_qubits: 2,
        });
    }
    Ok(bloch_entropy(vec3::norm(rho.bloch_vector(cut))))
}

/// `sqrt(2 (1 - tr rho_a^2)) = sqrt(1 - v^2)` for a two-qubit pure state.
pub fn concurrence_2q(rho: &DensityOperator) -> Result<f64> {
    require_pure_2q(rho)?;
    let v = vec3::norm(rho.bloch_vector(0));
    Ok((1.0 - v * v).max(0.0).sqrt())
}

/// Result of a projective spin measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Measures `qubit` along `axis`: returns the outcome probability
/// `tr(E rho)` with `E = (1 ± s)/2` and the post-measurement state `E rho E / p`.
pub fn measure_update(
    rho: &DensityOperator,
    qubit: usize,
    axis: Vec3,
    outcome: Outcome,
) -> Result<(f64, DensityOperator)> {
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits: n,
        });
    }
    let len = vec3::norm(axis);
    if (len - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitAxis(len));
    }
    let e = &Multivector::scalar(n, 0.5)
        + &Multivector::vector(n, qubit, vec3::scale(axis, 0.5 * outcome.sign()));
    let prob = (&e * rho.mv()).trace();
    if prob < 1e-12 {
        return Err(Error::ImpossibleOutcome(prob));
    }
    let post = &(&e * rho.mv()) * &e;
    Ok((
        prob,
        DensityOperator::from_mv_unchecked(post * (1.0 / prob)),
    ))
}

/// Measurement directions `q`, `r` on qubit `a` and `s`, `t` on qubit `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshSetting {
    pub q: Vec3,
    pub r: Vec3,
    pub s: Vec3,
    pub t: Vec3,
}

impl ChshSetting {
    pub fn new(q: Vec3, r: Vec3, s: Vec3, t: Vec3) -> Result<Self> {
        for v in [q, r, s, t] {
            let len = vec3::norm(v);
            if (len - 1.0).abs() > UNIT_TOL {
                return Err(Error::NonUnitAxis(len));
            }
        }
        Ok(ChshSetting { q, r, s, t })
    }
}

/// `E(QS) + E(RS) + E(RT) - E(QT)` as `4 <(q_a s_b + r_a s_b + r_a t_b - q_a t_b) rho>`.
pub fn chsh_value(rho: &DensityOperator, setting: &ChshSetting) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::QubitCountMismatch {
            left: 2,
            right: rho.n_qubits(),
        });
    }
    let va = |v: Vec3| Multivector::vector(2, 0, v);
    let vb = |v: Vec3| Multivector::vector(2, 1, v);
    let (q, r, s, t) = (va(setting.q), va(setting.r), vb(setting.s), vb(setting.t));
    let op = &(&(&(&q * &s) + &(&r * &s)) + &(&r * &t)) - &(&q * &t);
    Ok(4.0 * (&op * rho.mv()).scalar_part())
}

/// The correlation matrix `T_ij = tr(sigma_i^a sigma_j^b rho)`.
pub fn correlation_matrix(rho: &DensityOperator) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for (i, li) in Letter::VECTORS.iter().enumerate() {
        for (j, lj) in Letter::VECTORS.iter().enumerate() {
            t[i][j] = rho.correlation(&[*li, *lj]);
        }
    }
    t
}

fn t_transpose_times(t: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    [
        t[0][0] * v[0] + t[1][0] * v[1] + t[2][0] * v[2],
        t[0][1] * v[0] + t[1][1] * v[1] + t[2][1] * v[2],
        t[0][2] * v[0] + t[1][2] * v[1] + t[2][2] * v[2],
    ]
}

/// Best `s` (or `t`) for fixed `q`, `r`: along `T^T u`, giving `|T^T u|`.
fn inner_optimum(t: &[[f64; 3]; 3], u: Vec3) -> (f64, Vec3) {
    let w = t_transpose_times(t, u);
    match vec3::normalize(w) {
        Some(dir) => (vec3::norm(w), dir),
        None => (0.0, [0.0, 0.0, 1.0]),
    }
}

fn outer_value(t: &[[f64; 3]; 3], angles: &[f64; 4]) -> f64 {
    let q = vec3::spherical(angles[0], angles[1]);
    let r = vec3::spherical(angles[2], angles[3]);
    inner_optimum(t, vec3::add(q, r)).0 + inner_optimum(t, vec3::sub(r, q)).0
}

/// Options for [`chsh_maximize_with`].
#[derive(Clone, Copy, Debug)]
pub struct ChshOptions {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ChshOptions {
    fn default() -> Self {
        ChshOptions {
            restarts: 64,
            seed: 0x0c45_4a11,
            tol: 1e-9,
            max_sweeps: 500,
        }
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const COARSE_SAMPLES: usize = 16;

/// Maximizes one angle of `x` by coarse sampling on the circle followed by
/// golden-section refinement around the best sample.
fn maximize_coordinate(f: &dyn Fn(&[f64; 4]) -> f64, x: &mut [f64; 4], k: usize) -> f64 {
    let eval = |x: &[f64; 4], v: f64| {
        let mut y = *x;
        y[k] = v;
        f(&y)
    };
    let step = 2.0 * PI / COARSE_SAMPLES as f64;
    let mut best = (x[k], eval(x, x[k]));
    for i in 1..COARSE_SAMPLES {
        let v = x[k] + i as f64 * step;
        let fv = eval(x, v);
        if fv > best.1 {
            best = (v, fv);
        }
    }
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let mut a = hi - GOLDEN * (hi - lo);
    let mut b = lo + GOLDEN * (hi - lo);
    let (mut fa, mut fb) = (eval(x, a), eval(x, b));
    while hi - lo > 1e-12 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + GOLDEN * (hi - lo);
            fb = eval(x, b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - GOLDEN * (hi - lo);
            fa = eval(x, a);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = eval(x, mid);
    if fm > best.1 {
        best = (mid, fm);
    }
    x[k] = best.0;
    best.1
}

/// [`chsh_maximize_with`] using the default options.
pub fn chsh_maximize(rho: &DensityOperator) -> Result<(f64, ChshSetting)> {
    chsh_maximize_with(rho, &ChshOptions::default())
}

/// Maximizes the CHSH value: `s`, `t` are chosen analytically for given
/// `q`, `r`; `q`, `r` are optimized by coordinate ascent over their sphere
/// angles from several seeded random starts.
pub fn chsh_maximize_with(rho: &DensityOperator, opts: &ChshOptions) -> Result<(f64, ChshSetting)> {
    if rho.n_qubits() != 2 {
        return Err(Error::QubitCountMismatch {
            left: 2,
            right: rho.n_qubits(),
        });
    }
    let t = correlation_matrix(rho);
    let f = |x: &[f64; 4]| outer_value(&t, x);
    let mut rng = sampling::rng(opts.seed);
    let mut best: Option<(f64, [f64; 4])> = None;
    for _ in 0..opts.restarts.max(1) {
        let mut x = [
            rng.random_range(0.0..PI),
            rng.random_range(-PI..PI),
            rng.random_range(0.0..PI),
            rng.random_range(-PI..PI),
        ];
        let mut value = f(&x);
        for _ in 0..opts.max_sweeps {
            let before = value;
            for k in 0..4 {
                value = maximize_coordinate(&f, &mut x, k);
            }
            if value - before < opts.tol {
                break;
            }
        }
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, x));
        }
    }
    let (value, x) = best.expect("at least one restart");
    let q = vec3::spherical(x[0], x[1]);
    let r = vec3::spherical(x[2], x[3]);
    let s = inner_optimum(&t, vec3::add(q, r)).1;
    let tt = inner_optimum(&t, vec3::sub(r, q)).1;
    Ok((value, ChshSetting { q, r, s, t: tt }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell, bloch_state, product_state, Bell, ProductState};
    use std::f64::consts::SQRT_2;

    #[test]
    fn reduced_operator_of_product_state() {
        let s = ProductState::from_axes(&[[0.0, 0.0, 1.0], [0.6, 0.0, 0.8]], &[1, -1]).unwrap();
        let rho = product_state(&s);
        let b = partial_trace(&rho, &[1]).unwrap();
        let expected = bloch_state([-0.6, 0.0, -0.8]).unwrap();
        assert!(b.mv().max_abs_diff(expected.mv()) < 1e-15);
        assert!(partial_trace(&rho, &[0, 1]).is_err());
        assert!(partial_trace(&rho, &[]).is_err());
    }

    #[test]
    fn bell_states_have_unit_entropy_and_concurrence() {
        for b in Bell::ALL {
            let rho = bell(b);
            assert_eq!(entanglement_entropy(&rho, 0).unwrap(), 1.0);
            assert!((concurrence_2q(&rho).unwrap() - 1.0).abs() < 1e-15);
            let ra = partial_trace(&rho, &[0]).unwrap();
            assert!(ra.mv().max_abs_diff(&Multivector::scalar(1, 0.5)) < 1e-15);
        }
    }

    #[test]
    fn entropy_requires_pure_state() {
        let mixed = DensityOperator::new(Multivector::scalar(2, 0.25)).unwrap();
        assert!(matches!(
            entanglement_entropy(&mixed, 0),
            Err(Error::NotPure(_))
        ));
    }

    #[test]
    fn singlet_measurement_projects_partner() {
        let axis = vec3::spherical(0.7, -1.1);
        let (p, post) = measure_update(&bell(Bell::PsiMinus), 0, axis, Outcome::Plus).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let rb = partial_trace(&post, &[1]).unwrap();
        let expected = bloch_state(vec3::scale(axis, -1.0)).unwrap();
        assert!(rb.mv().max_abs_diff(expected.mv()) < 1e-15);
    }

    #[test]
    fn impossible_outcome_is_an_error() {
        let rho = product_state(&ProductState::computational(2, 0).unwrap());
        let r = measure_update(&rho, 0, [0.0, 0.0, 1.0], Outcome::Minus);
        assert!(matches!(r, Err(Error::ImpossibleOutcome(_))));
    }

    #[test]
    fn singlet_is_anticorrelated() {
        let z = [0.0, 0.0, 1.0];
        let t = correlation_matrix(&bell(Bell::PsiMinus));
        assert_eq!(t[2][2], -1.0);
        let setting = ChshSetting::new(z, z, z, z).unwrap();
        // q s + r s + r t - q t with all axes equal collapses to 2 E(zz)
        assert!((chsh_value(&bell(Bell::PsiMinus), &setting).unwrap() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_reaches_tsirelson_bound() {
        let (v, setting) = chsh_maximize(&bell(Bell::PsiMinus)).unwrap();
        assert!((v - 2.0 * SQRT_2).abs() < 1e-9);
        let direct = chsh_value(&bell(Bell::PsiMinus), &setting).unwrap();
        assert!((direct - v).abs() < 1e-12);
    }
}
