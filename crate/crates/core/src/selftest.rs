//! Oracle comparisons that can be run from a shipped binary.
//!
//! Each check compares a closed expression against an independent dense
//! four-replica computation or an exhaustive group average and reports the
//! largest deviation it saw.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::averages::{
    haar_closed, haar_half_cut_closed, haar_sum, nu_compressible_sum, t_doped_sum, Dims,
};
use crate::dense::{embed, gates};
use crate::error::Result;
use crate::pauli::PauliString;
use crate::replica::oracle::{
    clifford_twirl_exhaustive, clifford_twirl_formula, lambda_minus, lambda_plus, t_perm, t_prime,
    tensor4, trace_prod,
};
use crate::replica::{boundary_trace, f_sigma, projector_trace, t_gate_overlap, ProjectorTrace};
use crate::sym4::Perm4;
use crate::weingarten::{gram_product, q_int, q_to_f64, Sector, Q};

/// Agreement threshold for dense oracles.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfTestReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn c(q: &Q) -> Complex64 {
    Complex64::new(q_to_f64(q), 0.0)
}

fn check(name: impl Into<String>, max_error: f64, tol: f64) -> Check {
    Check {
        name: name.into(),
        passed: max_error <= tol,
        max_error,
    }
}

/// `tr[Λ^± O^{⊗4} T_π]` and `tr[Λ⁺ T_π]` against dense replicas, for every
/// nonidentity Pauli `O` on `n ≤ 2` qubits and all 24 permutations.
pub fn projector_trace_error(n: usize) -> Result<f64> {
    let d = 1u64 << n;
    let lp = lambda_plus(n)?;
    let lm = lambda_minus(n)?;
    let perms: Vec<DMatrix<Complex64>> = Perm4::all()
        .iter()
        .map(|p| t_perm(p, n))
        .collect::<Result<_>>()?;
    let mut worst = 0f64;
    for idx in 1..(1usize << (2 * n)) {
        let o4 = tensor4(PauliString::from_index(n, idx).to_dense()?.matrix());
        let plus = &lp * &o4;
        let minus = &lm * &o4;
        for (pi, tp) in Perm4::all().iter().zip(&perms) {
            for (m, variant) in [
                (&plus, ProjectorTrace::PlusWithPauli),
                (&minus, ProjectorTrace::MinusWithPauli),
                (&lp, ProjectorTrace::PlusAlone),
            ] {
                worst = worst.max((trace_prod(m, tp) - c(&projector_trace(pi, d, variant))).norm());
            }
        }
    }
    Ok(worst)
}

/// The two T-gate identities `tr[K^{⊗4} Λ⁺ K†^{⊗4} T_σ] = D^{#σ−2δ}` and
/// `tr[K^{⊗4} Λ⁺ K†^{⊗4} Λ⁺ T_σ] = (D/2)^{#σ−2δ} f_σ(π/4)`, with `K` a T
/// gate on qubit 0, checked in both conjugation orders.
pub fn t_gate_trace_error(n: usize) -> Result<f64> {
    let d = 1u64 << n;
    let k = embed(&gates::t_gate(), &[0], n)?;
    let k4 = tensor4(k.matrix());
    let lp = lambda_plus(n)?;
    let overlap = t_gate_overlap(n as u32)?;
    let mut worst = 0f64;
    for rotated in [&k4 * &lp * k4.adjoint(), k4.adjoint() * &lp * &k4] {
        let doubled = &rotated * &lp;
        for (i, sigma) in Perm4::all().iter().enumerate() {
            let ts = t_perm(sigma, n)?;
            let first = projector_trace(sigma, d, ProjectorTrace::PlusAlone);
            worst = worst.max((trace_prod(&rotated, &ts) - c(&first)).norm());
            worst = worst.max((trace_prod(&doubled, &ts) - c(&overlap[i])).norm());
        }
    }
    Ok(worst)
}

/// `tr[T_σ T']` and `tr[Λ⁺ T_σ T']` on two qubits for both single-site cuts.
pub fn boundary_error() -> Result<f64> {
    let lp = lambda_plus(2)?;
    let mut worst = 0f64;
    for mask in [1u64, 2] {
        let tp = t_prime(2, mask)?;
        for sigma in Perm4::all() {
            let ts = t_perm(sigma, 2)?;
            worst =
                worst.max((trace_prod(&ts, &tp) - c(&boundary_trace(sigma, 2, 2, false))).norm());
            worst = worst.max(
                (trace_prod(&(&lp * &ts), &tp) - c(&boundary_trace(sigma, 2, 2, true))).norm(),
            );
        }
    }
    Ok(worst)
}

/// Largest entry of `|f_σ(0) − 2^{#σ−2δ}|`; zero when exact.
pub fn f_sigma_zero_error() -> f64 {
    let f = f_sigma(0.0);
    Perm4::all()
        .iter()
        .enumerate()
        .map(|(i, p)| (f[i] - 2f64.powi(p.n_cycles() as i32 - 2 * p.delta() as i32)).abs())
        .fold(0.0, f64::max)
}

/// Two-sector Clifford twirl versus the average over all 24 single-qubit
/// Cliffords, on a random complex 16×16 operator.
pub fn clifford_twirl_error(seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = DMatrix::<Complex64>::from_fn(16, 16, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let diff = clifford_twirl_exhaustive(&x)? - clifford_twirl_formula(&x, 1)?;
    Ok(diff.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Whether `Σ_σ Wg_{πσ} g(σ∘τ)` is exactly the identity.
pub fn gram_inverse_exact(d: u64, sector: Sector) -> Result<bool> {
    let m = gram_product(d, sector)?;
    Ok((0..576).all(|k| m[k] == if k / 24 == k % 24 { q_int(1) } else { q_int(0) }))
}

pub fn run_all() -> Result<SelfTestReport> {
    let mut checks = Vec::new();
    for n in [1usize, 2] {
        checks.push(check(
            format!("projector_trace_dense_n{n}"),
            projector_trace_error(n)?,
            ORACLE_TOL,
        ));
        checks.push(check(
            format!("t_gate_trace_dense_n{n}"),
            t_gate_trace_error(n)?,
            ORACLE_TOL,
        ));
    }
    checks.push(check(
        "boundary_traces_dense_n2",
        boundary_error()?,
        ORACLE_TOL,
    ));
    checks.push(check("f_sigma_at_zero", f_sigma_zero_error(), 0.0));
    checks.push(check(
        "clifford_twirl_single_qubit_exhaustive",
        clifford_twirl_error(17)?,
        1e-10,
    ));
    for d in [4u64, 8, 16] {
        let exact = gram_inverse_exact(d, Sector::Haar)?;
        checks.push(check(
            format!("haar_gram_inverse_d{d}"),
            if exact { 0.0 } else { 1.0 },
            0.0,
        ));
    }

    let page = |d: u64, num: i64, den: i64| -> Result<f64> {
        let target = q_int(num) / q_int(den);
        let half = haar_half_cut_closed(d)?;
        let general = haar_closed(d, (d as f64).sqrt() as u64)?;
        let sum = haar_sum(&Dims::half_cut(d.trailing_zeros())?)?;
        Ok([half, general, sum]
            .iter()
            .map(|v| q_to_f64(&(v - &target)).abs())
            .fold(0.0, f64::max))
    };
    checks.push(check("haar_page_value_d4", page(4, 17, 35)?, 0.0));
    checks.push(check("haar_page_value_d16", page(16, 509, 4199)?, 0.0));

    let dims = Dims::half_cut(4)?;
    let haar = haar_sum(&dims)?;
    checks.push(check(
        "t_doped_tau0_is_one",
        q_to_f64(&(t_doped_sum(&dims, 0)? - q_int(1))).abs(),
        0.0,
    ));
    checks.push(check(
        "nu_compressible_full_block_is_haar",
        q_to_f64(&(nu_compressible_sum(&dims, 4)? - haar)).abs(),
        0.0,
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(SelfTestReport { checks, passed })
}
