//! Seeded oracle campaigns for `msta verify`.

use msta::invariants::{invariants_3q, invariants_3q_unchecked, sudbery, three_tangle_oracle};
use msta::oracle::{expm_i, to_matrix};
use msta::sampling::{self, random_amplitudes, random_hermitian, random_multivector, SeededRng};
use msta::solver::{reconstruct, solve_invariants, standard_frames, SolveOptions};
use msta::states::pure_state;
use rand::Rng;
use rayon::prelude::*;

use crate::commands::Report;
use crate::io::{CliError, CliResult};
use crate::Output;

const ALGEBRA_TOL: f64 = 1e-10;
const I6_TOL: f64 = 1e-8;
const ROUND_TRIP_TOL: f64 = 1e-8;

/// Independent stream per sample, so results do not depend on scheduling.
fn sample_rng(seed: u64, campaign: u64, i: usize) -> SeededRng {
    sampling::rng(
        seed ^ campaign.wrapping_mul(0x9e37_79b9_7f4a_7c15)
            ^ (i as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9),
    )
}

/// Product, reverse, scalar part, partial trace and exponential against
/// dense matrices, on `N = 1 + i mod 4` qubits.
fn algebra_sample(seed: u64, i: usize) -> bool {
    let mut rng = sample_rng(seed, 1, i);
    let n = 1 + i % 4;
    let a = random_multivector(&mut rng, n, 0.5);
    let b = random_multivector(&mut rng, n, 0.5);
    let (ma, mb) = (to_matrix(&a), to_matrix(&b));
    let mut err = to_matrix(&(&a * &b)).max_abs_diff(&(&ma * &mb));
    err = err.max(to_matrix(&a.reverse()).max_abs_diff(&ma.dagger()));
    err = err.max((a.scalar_part() - ma.trace().re / (1u64 << n) as f64).abs());
    if n > 1 {
        let drop = rng.random_range(0..n);
        let keep: Vec<usize> = (0..n).filter(|&k| k != drop).collect();
        let reduced = a.partial_drop(&[drop]).expect("valid subset") * 2.0;
        err = err
            .max(to_matrix(&reduced).max_abs_diff(&ma.partial_trace(&keep).expect("valid subset")));
    }
    let h = random_hermitian(&mut rng, n, 0.5);
    let t = rng.random_range(-2.0..2.0);
    match (h.exp_i(t), expm_i(&to_matrix(&h), t)) {
        (Ok(u), Ok(v)) => err = err.max(to_matrix(&u).max_abs_diff(&v)),
        _ => return false,
    }
    err < ALGEBRA_TOL
}

fn i6_sample(seed: u64, i: usize) -> bool {
    let mut rng = sample_rng(seed, 2, i);
    let amps = random_amplitudes(&mut rng, 3);
    let Ok(rho) = pure_state(&amps) else {
        return false;
    };
    let Ok(oracle) = three_tangle_oracle(&amps) else {
        return false;
    };
    (sudbery(&invariants_3q_unchecked(&rho)).i6 - oracle).abs() < I6_TOL
}

fn round_trip_sample(seed: u64, i: usize) -> bool {
    let mut rng = sample_rng(seed, 3, i);
    let amps = random_amplitudes(&mut rng, 3);
    let Ok(inv) = pure_state(&amps).and_then(|rho| invariants_3q(&rho)) else {
        return false;
    };
    let Ok(sols) = solve_invariants(&inv, &SolveOptions::default()) else {
        return false;
    };
    sols.iter().all(|s| {
        reconstruct(&inv, s, &standard_frames())
            .and_then(|rho| invariants_3q(&rho))
            .is_ok_and(|back| back.max_abs_diff(&inv) < ROUND_TRIP_TOL)
    })
}

type Campaign = (&'static str, fn(u64, usize) -> bool);

pub fn run(seed: u64, samples: usize, output: &Output) -> CliResult<()> {
    let campaigns: [Campaign; 3] = [
        ("algebra_vs_oracle", algebra_sample),
        ("i6_vs_hyperdeterminant", i6_sample),
        ("solver_round_trip", round_trip_sample),
    ];
    let mut report = Report::default();
    report.add("seed", seed);
    report.add("samples", samples);
    let mut failed = 0;
    for (name, sample) in campaigns {
        let passed = (0..samples)
            .into_par_iter()
            .filter(|&i| sample(seed, i))
            .count();
        failed += samples - passed;
        report.add(name, format!("{passed}/{samples} pass"));
    }
    report.write(output)?;
    if failed > 0 {
        return Err(CliError::Validation(format!(
            "{failed} sample(s) failed verification"
        )));
    }
    Ok(())
}
