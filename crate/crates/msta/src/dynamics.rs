//! Two-qubit exchange Hamiltonians, rotor evolution and the closed-form
//! evolution of product states under isotropic coupling.

use crate::algebra::{Letter, Multivector, PauliString};
use crate::error::{Error, Result};
use crate::states::{
    projector_sphere, DensityOperator, ProductState, ProjectorSphere, Rotor, ZOrder,
};
use crate::vec3::{self, Vec3};

const COMMUTE_TOL: f64 = 1e-10;
const DEGENERATE_TOL: f64 = 1e-12;

/// `(w_x xx + w_y yy + w_z zz)/4 + (beta_a z_a + beta_b z_b)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExchangeHamiltonian {
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: f64,
    pub beta_a: f64,
    pub beta_b: f64,
}

impl ExchangeHamiltonian {
    pub fn isotropic(omega: f64) -> Self {
        ExchangeHamiltonian {
            omega_x: omega,
            omega_y: omega,
            omega_z: omega,
            ..Default::default()
        }
    }

    pub fn omega_plus(&self) -> f64 {
        (self.omega_x + self.omega_y) / 2.0
    }

    pub fn omega_minus(&self) -> f64 {
        (self.omega_x - self.omega_y) / 2.0
    }

    pub fn beta_plus(&self) -> f64 {
        self.beta_a + self.beta_b
    }

    pub fn beta_minus(&self) -> f64 {
        self.beta_a - self.beta_b
    }

    /// Precession rate inside the `{00, 11}` sphere.
    pub fn omega_00(&self) -> f64 {
        self.omega_minus().hypot(self.beta_plus())
    }

    /// Precession rate inside the `{01, 10}` sphere.
    pub fn omega_01(&self) -> f64 {
        self.omega_plus().hypot(self.beta_minus())
    }
}

/// The Hamiltonian as a two-qubit multivector.
pub fn hamiltonian(h: &ExchangeHamiltonian) -> Multivector {
    let pair = |l: Letter, w: f64| {
        Multivector::blade(PauliString::new(&[l, l]).expect("two letters"), w / 4.0)
    };
    let mut out = pair(Letter::X, h.omega_x);
    out += &pair(Letter::Y, h.omega_y);
    out += &pair(Letter::Z, h.omega_z);
    out += &Multivector::vector(2, 0, [0.0, 0.0, h.beta_a / 2.0]);
    out += &Multivector::vector(2, 1, [0.0, 0.0, h.beta_b / 2.0]);
    out
}

/// The spheres of `{00, 11}` and `{01, 10}` with `00` and `01` at the north poles.
pub fn exchange_spheres() -> (ProjectorSphere, ProjectorSphere) {
    let basis = |i| ProductState::computational(2, i).expect("two-qubit basis state");
    let s00 = projector_sphere(&basis(0), &basis(3), ZOrder::FirstNorth).expect("orthogonal pair");
    let s01 = projector_sphere(&basis(1), &basis(2), ZOrder::FirstNorth).expect("orthogonal pair");
    (s00, s01)
}

/// Splits `H` into `(H P_{00,11}, H P_{01,10})`. Fails if `H` does not
/// commute with the projectors.
pub fn projector_decompose(h: &Multivector) -> Result<(Multivector, Multivector)> {
    if h.n_qubits() != 2 {
        return Err(Error::QubitCountMismatch {
            left: 2,
            right: h.n_qubits(),
        });
    }
    let (s00, s01) = exchange_spheres();
    let dev = h.commutator(&s00.p)?.max_abs_diff(&Multivector::zero(2));
    if dev > COMMUTE_TOL {
        return Err(Error::NonCommuting(dev));
    }
    Ok((h * &s00.p, h * &s01.p))
}

/// `e^(-ι H t) rho e^(ι H t)`.
pub fn evolve(rho0: &DensityOperator, h: &Multivector, t: f64) -> Result<DensityOperator> {
    let r = Rotor::from_generator(h, t)?;
    crate::states::apply_rotor(&r, rho0)
}

/// Samples `evolve` at `steps + 1` evenly spaced times in `[t0, t1]`.
pub fn trajectory(
    rho0: &DensityOperator,
    h: &Multivector,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Vec<(f64, DensityOperator)>> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| {
            let t = t0 + (t1 - t0) * k as f64 / steps as f64;
            evolve(rho0, h, t).map(|rho| (t, rho))
        })
        .collect()
}

/// An eigenstate of the exchange Hamiltonian and its energy.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub state: DensityOperator,
    pub energy: f64,
}

/// The unit axis `(w X + b Z)/sqrt(w^2 + b^2)`, or `Z` when both vanish.
fn sphere_axis(sph: &ProjectorSphere, w: f64, b: f64) -> Multivector {
    let len = w.hypot(b);
    if len < DEGENERATE_TOL {
        sph.z.clone()
    } else {
        &(&sph.x * (w / len)) + &(&sph.z * (b / len))
    }
}

/// The four eigenstates `(P ± A)/2` of each sphere, ordered
/// `[00+, 00-, 01+, 01-]`, with energies `(w_z ± 2 w_00)/4` and `(-w_z ± 2 w_01)/4`.
pub fn eigensystem_2q(h: &ExchangeHamiltonian) -> [Eigenpair; 4] {
    let (s00, s01) = exchange_spheres();
    let a00 = sphere_axis(&s00, h.omega_minus(), h.beta_plus());
    let a01 = sphere_axis(&s01, h.omega_plus(), h.beta_minus());
    let pair = |p: &Multivector, a: &Multivector, sign: f64, energy: f64| Eigenpair {
        state: DensityOperator::from_mv_unchecked(&(p + &(a * sign)) * 0.5),
        energy,
    };
    [
        pair(&s00.p, &a00, 1.0, (h.omega_z + 2.0 * h.omega_00()) / 4.0),
        pair(&s00.p, &a00, -1.0, (h.omega_z - 2.0 * h.omega_00()) / 4.0),
        pair(&s01.p, &a01, 1.0, (-h.omega_z + 2.0 * h.omega_01()) / 4.0),
        pair(&s01.p, &a01, -1.0, (-h.omega_z - 2.0 * h.omega_01()) / 4.0),
    ]
}

/// A product state `(1 + m_a)(1 + n_b)/4` split into `p = (m + n)/2` and
/// `q = (m - n)/2`, with `r = p x q / |p x q|` when both are nonzero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductEvolution {
    pub m: Vec3,
    pub n: Vec3,
    pub p: Vec3,
    pub q: Vec3,
    pub r: Option<Vec3>,
    /// Angle between `m` and `n`.
    pub psi: f64,
}

impl ProductEvolution {
    pub fn new(m: Vec3, n: Vec3) -> Result<Self> {
        for v in [m, n] {
            let len = vec3::norm(v);
            if (len - 1.0).abs() > 1e-12 {
                return Err(Error::NonUnitAxis(len));
            }
        }
        let p = vec3::scale(vec3::add(m, n), 0.5);
        let q = vec3::scale(vec3::sub(m, n), 0.5);
        let pxq = vec3::cross(p, q);
        let r = if vec3::norm(pxq) > DEGENERATE_TOL {
            vec3::normalize(pxq)
        } else {
            None
        };
        let psi = vec3::dot(m, n).clamp(-1.0, 1.0).acos();
        Ok(ProductEvolution { m, n, p, q, r, psi })
    }

    pub fn initial_state(&self) -> DensityOperator {
        let s = ProductState::from_axes(&[self.m, self.n], &[1, 1]).expect("unit axes");
        crate::states::product_state(&s)
    }
}

/// Closed-form state and reduced operators at time `t` under `omega (xx + yy + zz)/4`.
///
/// The stationary part is `1 + p_a + p_b + p_a p_b - q_a q_b`; the part
/// `(q_a - q_b) + (q_a p_b - p_a q_b)` turns into
/// `sum_jkl eps_jkl q_j s^a_k s^b_l + (p x q)_a - (p x q)_b` at quarter period.
pub fn product_evolution(
    pe: &ProductEvolution,
    omega: f64,
    t: f64,
) -> (DensityOperator, DensityOperator, DensityOperator) {
    let (c, s) = ((omega * t).cos(), (omega * t).sin());
    let (p, q) = (pe.p, pe.q);
    let pxq = vec3::cross(p, q);
    let va = |v: Vec3| Multivector::vector(2, 0, v);
    let vb = |v: Vec3| Multivector::vector(2, 1, v);

    let mut mv = Multivector::one(2);
    mv += &va(p);
    mv += &vb(p);
    mv += &(&va(p) * &vb(p));
    mv += &-(&va(q) * &vb(q));
    let a = &va(q) - &vb(q);
    let b = &(&va(q) * &vb(p)) - &(&va(p) * &vb(q));
    mv += &((&a + &b) * c);
    let mut rotated = &va(pxq) - &vb(pxq);
    for (j, k, l, sign) in LEVI_CIVITA {
        let mut u = [0.0; 3];
        u[k] = q[j] * sign;
        let mut w = [0.0; 3];
        w[l] = 1.0;
        rotated += &(&va(u) * &vb(w));
    }
    mv += &(rotated * s);
    let rho = DensityOperator::from_mv_unchecked(mv * 0.25);

    let half = |v: Vec3, sign: f64| {
        let mut m = Multivector::scalar(1, 0.5);
        m += &Multivector::vector(1, 0, vec3::scale(v, 0.5 * sign));
        m
    };
    let mut ra = half(p, 1.0);
    ra += &Multivector::vector(
        1,
        0,
        vec3::scale(vec3::add(vec3::scale(q, c), vec3::scale(pxq, s)), 0.5),
    );
    let mut rb = half(p, 1.0);
    rb += &Multivector::vector(
        1,
        0,
        vec3::scale(vec3::add(vec3::scale(q, c), vec3::scale(pxq, s)), -0.5),
    );
    (
        rho,
        DensityOperator::from_mv_unchecked(ra),
        DensityOperator::from_mv_unchecked(rb),
    )
}

const LEVI_CIVITA: [(usize, usize, usize, f64); 6] = [
    (0, 1, 2, 1.0),
    (1, 2, 0, 1.0),
    (2, 0, 1, 1.0),
    (0, 2, 1, -1.0),
    (2, 1, 0, -1.0),
    (1, 0, 2, -1.0),
];

/// Smallest reduced Bloch length reached during isotropic evolution of a
/// product state whose two Bloch vectors are at angle `psi`.
///
/// The reduced length squared is `p^2 + p^2 q^2 + cos^2(wt) q^4`, minimal at
/// `cos(wt) = 0`, which gives `sqrt(3 + 2 cos psi - cos^2 psi)/2`.
pub fn min_bloch_length(psi: f64) -> f64 {
    let c = psi.cos();
    0.5 * (3.0 + 2.0 * c - c * c).max(0.0).sqrt()
}
