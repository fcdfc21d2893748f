//! Exact ensemble averages of the operator purity of a Heisenberg-evolved
//! Pauli, and the printed closed forms used as cross-checks.
//!
//! The permutation sums chain 24×24 contractions over S₄ in exact rational
//! arithmetic. They are built from the Weingarten tables, the replica trace
//! identities and the boundary traces, each of which is tested separately
//! against dense four-replica operators.
//!
//! Ensembles, with `O_U = U† O U` for a traceless Pauli `O`:
//! * Haar: `U` uniform on the unitary group.
//! * ν-compressible: `U = C₀ (V ⊗ 1) C₁` with uniform Cliffords `C₀, C₁` and
//!   `V` Haar on `ℓ` qubits.
//! * T-doped: `U = C₀ T C₁ T ⋯ T C_τ` with `τ` single-qubit T gates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::replica::{boundary_trace, t_gate_overlap};
use crate::sym4::{s4_tables, Perm4};
use crate::weingarten::{q_int, q_pow, q_to_f64, tables, Q};

/// Evaluation route for an exact average.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    ClosedForm,
    PermutationSum,
}

/// Register and cut sizes in qubits: `D = 2^n`, `D_A = 2^n_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub n: u32,
    pub n_a: u32,
}

impl Dims {
    pub fn new(n: u32, n_a: u32) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::OutOfRange(format!("qubit count {n} outside 1..=30")));
        }
        if n_a == 0 || n_a >= n {
            return Err(Error::InvalidBipartition(format!(
                "|A| = {n_a} must lie in 1..{n}"
            )));
        }
        Ok(Self { n, n_a })
    }

    pub fn half_cut(n: u32) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::InvalidBipartition(format!(
                "half cut needs an even qubit count, got {n}"
            )));
        }
        Self::new(n, n / 2)
    }

    pub fn dim(&self) -> u64 {
        1 << self.n
    }

    pub fn dim_a(&self) -> u64 {
        1 << self.n_a
    }

    pub fn dim_b(&self) -> u64 {
        1 << (self.n - self.n_a)
    }

    fn boundary(&self) -> ([Q; 24], [Q; 24]) {
        let perms = Perm4::all();
        (
            std::array::from_fn(|i| boundary_trace(&perms[i], self.dim_a(), self.dim_b(), true)),
            std::array::from_fn(|i| boundary_trace(&perms[i], self.dim_a(), self.dim_b(), false)),
        )
    }
}

fn zeros24() -> [Q; 24] {
    std::array::from_fn(|_| Q::zero())
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// `D^{#x − 2δ_x}` and `D^{#x}` per permutation.
fn powers(dim: u64) -> ([Q; 24], [Q; 24]) {
    let t = s4_tables();
    (
        std::array::from_fn(|i| q_pow(dim, t.cycles[i] as i64 - 2 * t.delta[i] as i64)),
        std::array::from_fn(|i| q_pow(dim, t.cycles[i] as i64)),
    )
}

/// Coefficients of `Λ⁺T_η` and `T_η` after a uniform Clifford twirl of
/// `O^{⊗4}` for a traceless Pauli `O` on `dim`-dimensional space.
fn clifford_pauli_coefficients(dim: u64) -> Result<([Q; 24], [Q; 24])> {
    let tb = tables(dim)?;
    let (wp, wm) = (tb.plus()?, tb.minus()?);
    let t = s4_tables();
    let (p, _) = powers(dim);
    let mut a = zeros24();
    let mut b = zeros24();
    for zeta in 0..24 {
        let odd = t.delta[zeta] == 1;
        for eta in 0..24 {
            let mut coef = wp.get(zeta, eta).clone();
            if odd {
                coef += wm.get(zeta, eta);
                b[eta] -= wm.get(zeta, eta) * &p[zeta];
            }
            a[eta] += coef * &p[zeta];
        }
    }
    Ok((a, b))
}

/// `u⁺_π = Σ_σ Wg⁺_{πσ} L_σ` and `u⁻_π = Σ_σ Wg⁻_{πσ} (B_σ − L_σ)`: the
/// final Clifford twirl contracted with `T'`.
fn final_twirl_vectors(dims: &Dims) -> Result<([Q; 24], [Q; 24])> {
    let tb = tables(dims.dim())?;
    let (wp, wm) = (tb.plus()?, tb.minus()?);
    let (l, b) = dims.boundary();
    let diff: Vec<Q> = b.iter().zip(&l).map(|(x, y)| x - y).collect();
    let mut up = zeros24();
    let mut um = zeros24();
    for pi in 0..24 {
        up[pi] = (0..24).fold(Q::zero(), |acc, s| acc + wp.get(pi, s) * &l[s]);
        um[pi] = (0..24).fold(Q::zero(), |acc, s| acc + wm.get(pi, s) * &diff[s]);
    }
    Ok((up, um))
}

/// Haar average, general cut:
/// `((D_A⁴ + D²)(D² − 10) − D_A²(D² − 19)) / (D_A² (D² − 9)(D² − 1))`.
pub fn haar_closed(dim: u64, dim_a: u64) -> Result<Q> {
    if dim <= 3 {
        return Err(Error::Pole(format!("D = {dim} (pole at D² = 9)")));
    }
    if dim_a < 2 || dim_a >= dim || !dim.is_multiple_of(dim_a) {
        return Err(Error::InvalidBipartition(format!(
            "D_A = {dim_a} must divide D = {dim} with 2 ≤ D_A < D"
        )));
    }
    let d2 = q_pow(dim, 2);
    let a2 = q_pow(dim_a, 2);
    let a4 = q_pow(dim_a, 4);
    let num = (a4 + &d2) * (&d2 - q_int(10)) - &a2 * (&d2 - q_int(19));
    let den = a2 * (&d2 - q_int(9)) * (&d2 - q_int(1));
    Ok(num / den)
}

/// Haar average at `D_A = √D`: `(2D² + D − 19) / ((1 + D)(D² − 9))`.
pub fn haar_half_cut_closed(dim: u64) -> Result<Q> {
    if dim <= 3 {
        return Err(Error::Pole(format!("D = {dim} (pole at D² = 9)")));
    }
    let d = q_int(dim as i64);
    let d2 = &d * &d;
    Ok((q_int(2) * &d2 + &d - q_int(19)) / ((q_int(1) + &d) * (d2 - q_int(9))))
}

/// Haar average by the permutation sum
/// `D⁻² Σ_{π,σ} Wg_{πσ} tr[O^{⊗4}T_π] tr[T_σ T']`.
pub fn haar_sum(dims: &Dims) -> Result<Q> {
    let d = dims.dim();
    let tb = tables(d)?;
    let t = s4_tables();
    let (_, b) = dims.boundary();
    let (_, full) = powers(d);
    let mut total = Q::zero();
    for pi in 0..24 {
        if t.delta[pi] == 1 {
            continue;
        }
        let row = (0..24).fold(Q::zero(), |acc, s| acc + tb.haar.get(pi, s) * &b[s]);
        total += row * &full[pi];
    }
    Ok(total / q_pow(d, 2))
}

/// ν-compressible average with a Haar block on `ell` qubits.
pub fn nu_compressible_sum(dims: &Dims, ell: u32) -> Result<Q> {
    if ell > dims.n {
        return Err(Error::OutOfRange(format!(
            "ℓ = {ell} exceeds N = {}",
            dims.n
        )));
    }
    if ell == 0 {
        return Ok(Q::one());
    }
    let d = dims.dim();
    let d_l = 1u64 << ell;
    let d_r = 1u64 << (dims.n - ell);
    let t = s4_tables();

    let (a, b) = clifford_pauli_coefficients(d)?;

    let wg_l = tables(d_l)?;
    let (pl, fl) = powers(d_l);
    let (pr, fr) = powers(d_r);
    // h⁺_{ημ} = Σ_κ D_ℓ^{#(ηκ)−2δ} Wg_{κμ}, h⁰ likewise without the projector
    let mut h_plus = vec![Q::zero(); 576];
    let mut h_zero = vec![Q::zero(); 576];
    for eta in 0..24 {
        for kappa in 0..24 {
            let ek = t.mul[eta][kappa];
            for mu in 0..24 {
                let w = wg_l.haar.get(kappa, mu);
                h_plus[eta * 24 + mu] += &pl[ek] * w;
                h_zero[eta * 24 + mu] += &fl[ek] * w;
            }
        }
    }

    let (up, um) = final_twirl_vectors(dims)?;
    let up_minus_um: Vec<Q> = up.iter().zip(&um).map(|(x, y)| x - y).collect();

    let mut total = Q::zero();
    for eta in 0..24 {
        let a_zero = a[eta].is_zero();
        let b_zero = b[eta].is_zero();
        if a_zero && b_zero {
            continue;
        }
        for mu in 0..24 {
            let m1 = &a[eta] * &h_plus[eta * 24 + mu];
            let m0 = &b[eta] * &h_zero[eta * 24 + mu];
            if m1.is_zero() && m0.is_zero() {
                continue;
            }
            let mut s1 = Q::zero();
            let mut s0 = Q::zero();
            for pi in 0..24 {
                let ep = t.mul[eta][pi];
                let mp = t.mul[mu][pi];
                let lam = &pr[ep] * &pl[mp];
                if !m1.is_zero() {
                    s1 += &lam * &up_minus_um[pi] + &pr[ep] * &fl[mp] * &um[pi];
                }
                if !m0.is_zero() {
                    s0 += &lam * &up_minus_um[pi] + &fr[ep] * &fl[mp] * &um[pi];
                }
            }
            total += m1 * s1 + m0 * s0;
        }
    }
    Ok(total / q_pow(d, 2))
}

/// Printed ν-compressible closed form for a general cut (`ν̃ = ℓ`).
pub fn nu_compressible_closed(dim: u64, dim_a: u64, ell: u32) -> Result<Q> {
    if dim <= 2 {
        return Err(Error::Pole(format!("D = {dim} (pole at D² = 4)")));
    }
    if ell == 0 {
        return Ok(Q::one());
    }
    let d = q_int(dim as i64);
    let da = q_int(dim_a as i64);
    let d2 = &d * &d;
    let d4 = &d2 * &d2;
    let d6 = &d4 * &d2;
    let a2 = &da * &da;
    let a4 = &a2 * &a2;
    let f4 = q_pow(4, ell as i64);
    let f16 = q_pow(16, ell as i64);
    let f64_ = q_pow(64, ell as i64);
    let one = Q::one();

    let t1 = q_int(24) * &d4 * (&d - &da) * (&d + &da) * (&a2 - &one);
    let t2 =
        q_int(4) * &f4 * &d2 * (q_int(9) * &d2 - q_int(4)) * (&d - &da) * (&d + &da) * (&a2 - &one);
    let t3 = &f16
        * (q_int(18) * &d4 - q_int(13) * &d6
            + (q_int(36) - q_int(99) * &d2 + q_int(49) * &d4 + q_int(4) * &d6) * &a2
            + &d2 * (q_int(18) - q_int(13) * &d2) * &a4);
    let t4 = &f64_
        * (&d6 - q_int(4) * &a2
            + &d2 * &a2 * (q_int(11) - q_int(2) * &a2)
            + &d4 * (-q_int(2) - q_int(5) * &a2 + &a4));
    let den = (&f4 - q_int(9)) * (&d2 - q_int(4)) * (&d2 - &one) * (&d2 - &one) * &a2 * &f16;
    Ok((t1 - t2 + t3 + t4) / den)
}

/// Printed ν-compressible closed form at `D_A = √D`.
pub fn nu_compressible_half_cut_closed(dim: u64, ell: u32) -> Result<Q> {
    if dim <= 2 {
        return Err(Error::Pole(format!("D = {dim} (pole at D² = 4)")));
    }
    if ell == 0 {
        return Ok(Q::one());
    }
    let d = q_int(dim as i64);
    let d2 = &d * &d;
    let f4 = q_pow(4, ell as i64);
    let f16 = q_pow(16, ell as i64);
    let f64_ = q_pow(64, ell as i64);
    let inner64 = q_int(-4) + &d * (q_int(-8) + &d * (q_int(-1) + q_int(2) * &d));
    let inner16 = q_int(36)
        + &d * (q_int(72) + &d * (q_int(9) + q_int(2) * &d * (q_int(-9) + q_int(2) * &d)));
    let num = q_int(24) * &d2 * &d2 - q_int(4) * &f4 * &d2 * (q_int(9) * &d2 - q_int(4))
        + f64_ * inner64
        + &f16 * inner16;
    let den = (&f4 - q_int(9)) * (q_int(1) + &d) * (q_int(1) + &d) * (&d2 - q_int(4)) * f16;
    Ok(num / den)
}

/// `w / s` with an integer vector and a positive common denominator.
#[derive(Clone, Debug)]
struct ScaledVec {
    w: Vec<BigInt>,
    s: BigInt,
}

impl ScaledVec {
    fn from_q(v: &[Q]) -> Self {
        let s = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let w = v.iter().map(|q| q.numer() * (&s / q.denom())).collect();
        Self { w, s }
    }

    fn reduce(&mut self) {
        let g = self.w.iter().fold(self.s.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            self.w.iter_mut().for_each(|x| *x /= &g);
            self.s /= &g;
        }
    }

    /// `self · (m / den)` for a row-major integer matrix.
    fn mul_matrix(&self, m: &[BigInt], den: &BigInt) -> Self {
        let mut w = vec![BigInt::zero(); 24];
        for (i, wi) in self.w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            for (j, out) in w.iter_mut().enumerate() {
                let mij = &m[i * 24 + j];
                if !mij.is_zero() {
                    *out += wi * mij;
                }
            }
        }
        Self {
            w,
            s: &self.s * den,
        }
    }

    fn dot(&self, v: &ScaledVec) -> Q {
        let num = self
            .w
            .iter()
            .zip(&v.w)
            .fold(BigInt::zero(), |acc, (a, b)| acc + a * b);
        Q::new(num, &self.s * &v.s)
    }
}

/// Transfer data for one T gate followed by a uniform Clifford:
/// `Ξ'` acts on the `Λ⁺T` coefficients, `F'` feeds the `T` coefficients.
struct TransferMatrices {
    xi: Vec<Q>,
    f: Vec<Q>,
}

fn t_transfer(n: u32) -> Result<TransferMatrices> {
    let d = 1u64 << n;
    let tb = tables(d)?;
    let (wp, wm) = (tb.plus()?, tb.minus()?);
    let t = s4_tables();
    let g1 = t_gate_overlap(n)?;
    let (gp, _) = powers(d);
    let mut xi = vec![Q::zero(); 576];
    let mut f = vec![Q::zero(); 576];
    for sigma in 0..24 {
        for pi in 0..24 {
            let sp = t.mul[sigma][pi];
            let one = &g1[sp];
            let plus = &gp[sp];
            let gap = plus - one;
            for rho in 0..24 {
                let wpr = wp.get(pi, rho);
                let wmr = wm.get(pi, rho);
                xi[sigma * 24 + rho] += (wpr + wmr) * one - wmr * plus;
                f[sigma * 24 + rho] += wmr * &gap;
            }
        }
    }
    Ok(TransferMatrices { xi, f })
}

/// T-doped averages for `τ = 0, 1, …, tau_max` in one pass.
pub fn t_doped_series(dims: &Dims, tau_max: usize) -> Result<Vec<Q>> {
    let d = dims.dim();
    let (a, b) = clifford_pauli_coefficients(d)?;
    let (l, bnd) = dims.boundary();
    let tr = t_transfer(dims.n)?;

    let xi_den = tr
        .xi
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let xi_int: Vec<BigInt> = tr
        .xi
        .iter()
        .map(|q| q.numer() * (&xi_den / q.denom()))
        .collect();

    let fb: Vec<Q> = (0..24)
        .map(|s| (0..24).fold(Q::zero(), |acc, r| acc + &tr.f[s * 24 + r] * &bnd[r]))
        .collect();
    let fb = ScaledVec::from_q(&fb);
    let l_vec = ScaledVec::from_q(&l);
    let constant = dot(&b, &bnd);
    let norm = q_pow(d, 2);

    let mut v = ScaledVec::from_q(&a);
    let mut fed = Q::zero();
    let mut out = Vec::with_capacity(tau_max + 1);
    for tau in 0..=tau_max {
        out.push((v.dot(&l_vec) + &constant + &fed) / &norm);
        if tau == tau_max {
            break;
        }
        fed += v.dot(&fb);
        v = v.mul_matrix(&xi_int, &xi_den);
        if tau % 8 == 7 {
            v.reduce();
        }
    }
    Ok(out)
}

pub fn t_doped_sum(dims: &Dims, tau: usize) -> Result<Q> {
    Ok(t_doped_series(dims, tau)?.pop().expect("nonempty"))
}

/// Printed T-doped closed form at `D_A = √D`.
pub fn t_doped_closed(dim: u64, tau: u32) -> Result<Q> {
    if dim < 4 {
        return Err(Error::Pole(format!("D = {dim} is below 4")));
    }
    let d = q_int(dim as i64);
    let one = Q::one();
    let d2m1 = &d * &d - &one;
    let powi = |base: &Q, e: u32| -> Q { num_traits::pow(base.clone(), e as usize) };
    let four_t = q_pow(4, tau as i64);
    let r1 = q_int(3) * &d * (&d - &one) - q_int(4);
    let r2 = q_int(3) * &d * (&d + &one) - q_int(4);
    let r3 = q_int(3) * &d * &d - q_int(4);

    let first = &one / &d2m1;
    let second_num = &d
        * (q_int(272) + q_int(48) * &d * &d + powi(&d, 4))
        * (-powi(&r1, tau) + &four_t * powi(&d2m1, tau));
    let second_den = q_pow(4, tau as i64 + 1)
        * powi(&d2m1, tau)
        * (&d - &one)
        * (&d + &one)
        * (&d + q_int(2))
        * (&d + q_int(3))
        * (&d + q_int(4));
    let third_num = (&d - q_int(2)) * (&d - &one) * powi(&r2, tau)
        + (&d + &one)
            * ((&d + q_int(2)) * powi(&r1, tau) + q_int(4) * (&d - &one) * powi(&r3, tau));
    let third_den = q_int(6) * four_t * powi(&d2m1, tau + 1);
    Ok(first + second_num / second_den + third_num / third_den)
}

/// Ensemble for an exact purity query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactEnsemble {
    Haar,
    /// Haar block on `ℓ` qubits.
    NuCompressible(u32),
    /// Number of T gates.
    TDoped(u32),
}

/// Both evaluation routes side by side. `closed` is absent where no
/// printed expression applies or it has a pole.
#[derive(Clone, Debug, Serialize)]
pub struct PurityReport {
    pub closed: Option<f64>,
    pub sum: Option<f64>,
    pub sum_exact: Option<String>,
    pub closed_exact: Option<String>,
    pub diff: Option<f64>,
}

pub fn exact_purity(
    ens: ExactEnsemble,
    dims: &Dims,
    closed: bool,
    sum: bool,
) -> Result<PurityReport> {
    let half = dims.n_a * 2 == dims.n;
    let closed_val = if closed {
        match ens {
            ExactEnsemble::Haar => Some(haar_closed(dims.dim(), dims.dim_a())?),
            ExactEnsemble::NuCompressible(ell) => Some(if half {
                nu_compressible_half_cut_closed(dims.dim(), ell)?
            } else {
                nu_compressible_closed(dims.dim(), dims.dim_a(), ell)?
            }),
            ExactEnsemble::TDoped(tau) if half => Some(t_doped_closed(dims.dim(), tau)?),
            ExactEnsemble::TDoped(_) => None,
        }
    } else {
        None
    };
    let sum_val = if sum {
        Some(match ens {
            ExactEnsemble::Haar => haar_sum(dims)?,
            ExactEnsemble::NuCompressible(ell) => nu_compressible_sum(dims, ell)?,
            ExactEnsemble::TDoped(tau) => t_doped_sum(dims, tau as usize)?,
        })
    } else {
        None
    };
    let diff = match (&closed_val, &sum_val) {
        (Some(c), Some(s)) => Some(q_to_f64(&(c - s).abs())),
        _ => None,
    };
    Ok(PurityReport {
        closed: closed_val.as_ref().map(q_to_f64),
        sum: sum_val.as_ref().map(q_to_f64),
        sum_exact: sum_val.as_ref().map(|q| q.to_string()),
        closed_exact: closed_val.as_ref().map(|q| q.to_string()),
        diff,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Parameter is the nullity `ν`; the Haar block has `⌈ν/2⌉` qubits.
    Nu,
    /// Parameter is the T-count `τ`.
    Tau,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// `−log₂` of the exact average purity, a lower bound on the mean `E⁽²⁾`.
    pub jensen_bits: f64,
    /// `ν − 2` or `log₂(4/3)·τ`.
    pub leading_bits: f64,
}

/// Half-cut lower bounds on the average second Rényi LOE.
pub fn loe_lower_bounds(kind: BoundKind, param: u32, n: u32) -> Result<BoundReport> {
    let dims = Dims::half_cut(n)?;
    let (purity, leading) = match kind {
        BoundKind::Nu => {
            let ell = param.div_ceil(2);
            (nu_compressible_sum(&dims, ell)?, param as f64 - 2.0)
        }
        BoundKind::Tau => (
            t_doped_sum(&dims, param as usize)?,
            (4f64 / 3.0).log2() * param as f64,
        ),
    };
    Ok(BoundReport {
        jensen_bits: -q_to_f64(&purity).log2(),
        leading_bits: leading,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn haar_values() {
        assert_eq!(haar_half_cut_closed(4).unwrap(), q(17, 35));
        assert_eq!(haar_half_cut_closed(16).unwrap(), q(509, 4199));
        for n in [2u32, 4, 6] {
            let d = 1u64 << n;
            let dims = Dims::half_cut(n).unwrap();
            assert_eq!(
                haar_closed(d, dims.dim_a()).unwrap(),
                haar_half_cut_closed(d).unwrap()
            );
            assert_eq!(haar_sum(&dims).unwrap(), haar_half_cut_closed(d).unwrap());
        }
        let dims = Dims::new(5, 2).unwrap();
        assert_eq!(haar_sum(&dims).unwrap(), haar_closed(32, 4).unwrap());
        assert!(haar_closed(2, 2).is_err());
        assert!(haar_half_cut_closed(3).is_err());
    }

    #[test]
    fn nu_limits() {
        for (n, n_a) in [(2u32, 1u32), (3, 1), (4, 2), (4, 1)] {
            let dims = Dims::new(n, n_a).unwrap();
            assert_eq!(nu_compressible_sum(&dims, 0).unwrap(), Q::one());
            assert_eq!(
                nu_compressible_sum(&dims, n).unwrap(),
                haar_sum(&dims).unwrap()
            );
        }
    }

    #[test]
    fn t_doped_starts_at_one_and_decreases() {
        let dims = Dims::half_cut(4).unwrap();
        let series = t_doped_series(&dims, 40).unwrap();
        assert_eq!(series[0], Q::one());
        for w in series.windows(2) {
            assert!(w[1] < w[0]);
        }
        let haar = haar_half_cut_closed(16).unwrap();
        assert!(series.iter().all(|v| *v > haar));
    }

    #[test]
    fn t_doped_single_qubit_register_is_clifford_twirl() {
        // With one T and two qubits the average still lies in (0, 1].
        let dims = Dims::new(2, 1).unwrap();
        let s = t_doped_series(&dims, 3).unwrap();
        assert!(s.iter().all(|v| *v > Q::zero() && *v <= Q::one()));
    }

    #[test]
    fn closed_form_t_doped_at_zero() {
        // Evaluates to (D² + 1)/(D² − 1) rather than 1.
        for d in [4u64, 16, 64] {
            let dd = (d * d) as i64;
            assert_eq!(t_doped_closed(d, 0).unwrap(), q(dd + 1, dd - 1));
        }
    }

    #[test]
    fn scaled_vec_matches_rational() {
        let v: Vec<Q> = (1..=24).map(|i| q(i, 3 + i)).collect();
        let sv = ScaledVec::from_q(&v);
        let ones: Vec<Q> = (0..24).map(|_| Q::one()).collect();
        assert_eq!(sv.dot(&ScaledVec::from_q(&ones)), dot(&v, &ones));
    }
}
