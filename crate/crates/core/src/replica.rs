//! Trace identities on four replicas.
//!
//! Replica operators act on `H^{⊗4}` with basis index
//! `i₁ + D·i₂ + D²·i₃ + D³·i₄`. `T_π` sends the content of slot `k` to slot
//! `π(k)`. `T'` applies `(12)(34)` to the qubits of `A` and `(14)(23)` to
//! those of `Ā`, so the operator purity of a Hermitian `O` is
//! `D⁻² tr[O^{⊗4} T']`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::dense::gates;
use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, PauliString};
use crate::sym4::{s4_tables, Perm4};
use crate::weingarten::{q_pow, Q};

/// Which projector trace to evaluate for a traceless Pauli `O`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorTrace {
    /// `tr[Λ⁺ O^{⊗4} T_π]`
    PlusWithPauli,
    /// `tr[Λ⁻ O^{⊗4} T_π]`
    MinusWithPauli,
    /// `tr[Λ⁺ T_π]`
    PlusAlone,
}

pub fn projector_trace(pi: &Perm4, dim: u64, variant: ProjectorTrace) -> Q {
    let c = pi.n_cycles() as i64;
    let delta = pi.delta() as i64;
    match variant {
        ProjectorTrace::PlusWithPauli | ProjectorTrace::PlusAlone => q_pow(dim, c - 2 * delta),
        ProjectorTrace::MinusWithPauli => {
            if delta == 1 {
                -q_pow(dim, c - 2)
            } else {
                Q::zero()
            }
        }
    }
}

/// `tr[Λ⁺_A T_σ T'_A] · tr[Λ⁺_Ā T_σ T'_Ā]`, or the same without the
/// projectors when `with_lambda` is false.
pub fn boundary_trace(sigma: &Perm4, dim_a: u64, dim_b: u64, with_lambda: bool) -> Q {
    let sa = sigma.compose(&Perm4::pair_swap());
    let sb = sigma.compose(&Perm4::outer_swap());
    let ea = sa.n_cycles() as i64
        - if with_lambda {
            2 * sa.delta() as i64
        } else {
            0
        };
    let eb = sb.n_cycles() as i64
        - if with_lambda {
            2 * sb.delta() as i64
        } else {
            0
        };
    q_pow(dim_a, ea) * q_pow(dim_b, eb)
}

fn cycle_traces(m: &DMatrix<Complex64>, p: &Perm4) -> Complex64 {
    let mut powers = vec![DMatrix::<Complex64>::identity(2, 2)];
    for k in 1..=4 {
        let next = &powers[k - 1] * m;
        powers.push(next);
    }
    p.cycle_type().iter().map(|&c| powers[c].trace()).product()
}

/// `f_σ(θ) = (1/16) Σ_{P₁,P₂} tr[(P_θ P₁ P_θ† P₂)^{⊗4} T_σ]` with
/// `P_θ = diag(1, e^{iθ})`, indexed like [`Perm4::all`].
pub fn f_sigma(theta: f64) -> Arc<[f64; 24]> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<[f64; 24]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = theta.to_bits();
    if let Some(v) = cache.read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let pt = gates::rz(theta);
    let paulis: Vec<DMatrix<Complex64>> = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ]
    .iter()
    .map(|&l| {
        PauliString::single(1, 0, l)
            .expect("valid site")
            .to_dense()
            .expect("small")
            .into_matrix()
    })
    .collect();
    let perms = Perm4::all();
    let mut out = [0.0; 24];
    for p1 in &paulis {
        let rotated = &pt * p1 * pt.adjoint();
        for p2 in &paulis {
            let m = &rotated * p2;
            for (i, p) in perms.iter().enumerate() {
                out[i] += cycle_traces(&m, p).re / 16.0;
            }
        }
    }
    let v = Arc::new(out);
    cache.write().expect("cache lock").insert(key, v.clone());
    v
}

/// Exact values of `f_σ(π/4)`. Every entry is a dyadic rational; the
/// recovery is checked against the floating-point evaluation.
pub fn f_sigma_quarter_exact() -> Result<[Q; 24]> {
    let f = f_sigma(std::f64::consts::FRAC_PI_4);
    let mut out: [Q; 24] = std::array::from_fn(|_| Q::zero());
    for (i, &v) in f.iter().enumerate() {
        out[i] = dyadic(v).ok_or_else(|| {
            Error::OutOfRange(format!("f_σ entry {v} is not a short dyadic rational"))
        })?;
    }
    Ok(out)
}

fn dyadic(v: f64) -> Option<Q> {
    for k in 0..=16 {
        let scaled = v * f64::from(1u32 << k);
        let r = scaled.round();
        if (scaled - r).abs() < 1e-9 {
            return Some(Q::new(BigInt::from(r as i64), BigInt::from(1u64 << k)));
        }
    }
    None
}

/// `tr[K†^{⊗4} Λ⁺ K^{⊗4} Λ⁺ T_τ]` for `K = T` on one qubit of an
/// `n`-qubit register: `(D/2)^{#τ − 2δ_τ} f_τ(π/4)`.
pub fn t_gate_overlap(n_qubits: u32) -> Result<[Q; 24]> {
    if n_qubits == 0 {
        return Err(Error::OutOfRange("need at least one qubit".into()));
    }
    let f = f_sigma_quarter_exact()?;
    let t = s4_tables();
    let rest = 1u64 << (n_qubits - 1);
    Ok(std::array::from_fn(|i| {
        q_pow(rest, t.cycles[i] as i64 - 2 * t.delta[i] as i64) * f[i].clone()
    }))
}

/// `tr[(M₁ ⊗ M₂ ⊗ M₃ ⊗ M₄) T_ρ]` for square blocks of equal size, as a
/// product of traces over the cycles of `ρ⁻¹`.
pub fn product_trace(ms: &[DMatrix<Complex64>; 4], rho: &Perm4) -> Complex64 {
    let inv = rho.inverse();
    let mut seen = [false; 4];
    let mut total = Complex64::new(1.0, 0.0);
    for start in 0..4 {
        if seen[start] {
            continue;
        }
        let mut acc = ms[start].clone();
        seen[start] = true;
        let mut k = inv.apply(start);
        while k != start {
            acc = &acc * &ms[k];
            seen[k] = true;
            k = inv.apply(k);
        }
        total *= acc.trace();
    }
    total
}

/// `tr[Y Φ(X)]` for product operators `X = ⊗ xs`, `Y = ⊗ ys`, where `Φ` is
/// the fourfold Haar twirl `Φ(X) = Σ_{π,σ} Wg_{πσ} tr[X T_π] T_σ`.
pub fn haar_twirl_functional(
    xs: &[DMatrix<Complex64>; 4],
    ys: &[DMatrix<Complex64>; 4],
) -> Result<Complex64> {
    let d = xs[0].nrows();
    if xs
        .iter()
        .chain(ys)
        .any(|m| m.nrows() != d || m.ncols() != d)
    {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: ys[0].nrows(),
        });
    }
    let wg = crate::weingarten::tables(d as u64)?.haar.to_f64();
    let perms = Perm4::all();
    let tx: Vec<Complex64> = perms.iter().map(|p| product_trace(xs, p)).collect();
    let ty: Vec<Complex64> = perms.iter().map(|p| product_trace(ys, p)).collect();
    let mut total = Complex64::zero();
    for pi in 0..24 {
        for sigma in 0..24 {
            total += tx[pi] * ty[sigma] * wg[pi * 24 + sigma];
        }
    }
    Ok(total)
}

/// Dense four-replica operators for registers of at most two qubits.
pub mod oracle {
    use super::*;
    use crate::clifford::CliffordTableau;
    use crate::dense::DenseOperator;

    pub const ORACLE_LIMIT: usize = 2;

    fn check(n: usize) -> Result<()> {
        if n == 0 || n > ORACLE_LIMIT {
            return Err(Error::TooManyQubits {
                what: "four-replica oracle",
                n,
                limit: ORACLE_LIMIT,
            });
        }
        Ok(())
    }

    fn split(idx: usize, d: usize) -> [usize; 4] {
        [
            idx % d,
            (idx / d) % d,
            (idx / (d * d)) % d,
            idx / (d * d * d),
        ]
    }

    fn join(s: [usize; 4], d: usize) -> usize {
        s[0] + d * (s[1] + d * (s[2] + d * s[3]))
    }

    /// Image of a basis index under per-qubit replica permutations.
    fn permute(idx: usize, n: usize, per_qubit: &[Perm4]) -> usize {
        let d = 1 << n;
        let s = split(idx, d);
        let mut out = [0usize; 4];
        for (q, p) in per_qubit.iter().enumerate() {
            for k in 0..4 {
                let bit = (s[k] >> q) & 1;
                out[p.apply(k)] |= bit << q;
            }
        }
        join(out, d)
    }

    fn perm_matrix(n: usize, per_qubit: &[Perm4]) -> DMatrix<Complex64> {
        let dim = 1usize << (4 * n);
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            m[(permute(i, n, per_qubit), i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn t_perm(pi: &Perm4, n: usize) -> Result<DMatrix<Complex64>> {
        check(n)?;
        Ok(perm_matrix(n, &vec![*pi; n]))
    }

    /// `T'` for the cut `A = {q : a_mask bit q set}`.
    pub fn t_prime(n: usize, a_mask: u64) -> Result<DMatrix<Complex64>> {
        check(n)?;
        let per: Vec<Perm4> = (0..n)
            .map(|q| {
                if (a_mask >> q) & 1 == 1 {
                    Perm4::pair_swap()
                } else {
                    Perm4::outer_swap()
                }
            })
            .collect();
        Ok(perm_matrix(n, &per))
    }

    pub fn tensor4(o: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let o2 = o.kronecker(o);
        let o3 = o.kronecker(&o2);
        o.kronecker(&o3)
    }

    pub fn lambda_plus(n: usize) -> Result<DMatrix<Complex64>> {
        check(n)?;
        let dim = 1usize << (4 * n);
        let d2 = (1usize << (2 * n)) as f64;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for p in PauliString::all(n) {
            m += tensor4(p.to_dense()?.matrix());
        }
        Ok(m / Complex64::new(d2, 0.0))
    }

    pub fn lambda_minus(n: usize) -> Result<DMatrix<Complex64>> {
        let lp = lambda_plus(n)?;
        Ok(DMatrix::identity(lp.nrows(), lp.ncols()) - lp)
    }

    pub fn trace_prod(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
        a.iter().zip(b.transpose().iter()).map(|(x, y)| x * y).sum()
    }

    /// `D⁻² tr[O^{⊗4} T']`.
    pub fn replica_purity(o: &DenseOperator, a_mask: u64) -> Result<f64> {
        let n = o.n_qubits();
        let tp = t_prime(n, a_mask)?;
        let d = (1usize << n) as f64;
        Ok(trace_prod(&tensor4(o.matrix()), &tp).re / (d * d))
    }

    /// Clifford twirl from the two-sector Weingarten expansion
    /// `Σ_x Σ_{π,σ} Wg^x_{πσ} tr[X Λ^x T_π] Λ^x T_σ`.
    pub fn clifford_twirl_formula(x: &DMatrix<Complex64>, n: usize) -> Result<DMatrix<Complex64>> {
        check(n)?;
        let tb = crate::weingarten::tables(1 << n)?;
        let perms: Vec<DMatrix<Complex64>> = Perm4::all()
            .iter()
            .map(|p| t_perm(p, n))
            .collect::<Result<_>>()?;
        let lp = lambda_plus(n)?;
        let lm = lambda_minus(n)?;
        let mut acc = DMatrix::<Complex64>::zeros(x.nrows(), x.ncols());
        for (lambda, wg) in [(&lp, tb.plus()?.to_f64()), (&lm, tb.minus()?.to_f64())] {
            let projected: Vec<DMatrix<Complex64>> = perms.iter().map(|t| lambda * t).collect();
            let coeffs: Vec<Complex64> = projected.iter().map(|m| trace_prod(x, m)).collect();
            for sigma in 0..24 {
                let c: Complex64 = (0..24).map(|pi| coeffs[pi] * wg[pi * 24 + sigma]).sum();
                if c != Complex64::zero() {
                    acc += &projected[sigma] * c;
                }
            }
        }
        Ok(acc)
    }

    /// Exhaustive average of `C†^{⊗4} X C^{⊗4}` over the single-qubit
    /// Clifford group.
    pub fn clifford_twirl_exhaustive(x: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let group = CliffordTableau::enumerate_group(1)?;
        let mut acc = DMatrix::<Complex64>::zeros(16, 16);
        for c in &group {
            let u4 = tensor4(c.to_dense()?.matrix());
            acc += u4.adjoint() * x * &u4;
        }
        Ok(acc / Complex64::new(group.len() as f64, 0.0))
    }
}
