//! Seeded random inputs for property checks and validation campaigns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{Complex64, Letter, Multivector, PauliString};
use crate::vec3::Vec3;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Amplitudes drawn from independent standard complex Gaussians and
/// normalized, i.e. uniform on the unit sphere of `C^(2^n)`.
pub fn random_amplitudes<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let mut amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    amps
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn letters_from_code(n: usize, mut code: usize) -> Vec<Letter> {
    (0..n)
        .map(|_| {
            let l = Letter::ALL[code & 3];
            code >>= 2;
            l
        })
        .collect()
}

/// A multivector where each blade is present with probability `density` and
/// carries a complex coefficient with parts uniform in `[-1, 1]`.
pub fn random_multivector<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Multivector {
    let mut terms = Vec::new();
    for code in 0..1usize << (2 * n) {
        if rng.random::<f64>() < density {
            let s = PauliString::new(&letters_from_code(n, code)).expect("valid length");
            terms.push((
                s,
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            ));
        }
    }
    Multivector::from_terms(n, terms).expect("valid qubit count")
}

/// A Hermitian multivector: real coefficients uniform in `[-1, 1]`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Multivector {
    let mut terms = Vec::new();
    for code in 0..1usize << (2 * n) {
        if rng.random::<f64>() < density {
            let s = PauliString::new(&letters_from_code(n, code)).expect("valid length");
            terms.push((s, Complex64::new(rng.random_range(-1.0..1.0), 0.0)));
        }
    }
    Multivector::from_terms(n, terms).expect("valid qubit count")
}
