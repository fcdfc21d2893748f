//! Entanglement and magic monotones of operators, in bits.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::clifford::CliffordTableau;
use crate::dense::{choi_vector, sample_haar_unitary, ChoiVector, DenseOperator};
use crate::error::{Error, Result};
use crate::exec::{run_samples, Estimate, ExecPolicy};
use crate::pauli::{pauli_transform, PauliString};

/// Schmidt weights at or below this value do not count towards the support.
pub const SUPPORT_EPS: f64 = 1e-8;

/// Default tolerance on `|c|` when deciding whether a conjugated Pauli is
/// again a Pauli.
pub const NULLITY_EPS: f64 = 1e-6;

/// Largest register accepted by [`unitary_nullity`].
pub const NULLITY_LIMIT: usize = 5;

/// A cut of `n` qubits into `A` and its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    a_mask: u64,
}

impl Bipartition {
    /// `A` must be a nonempty proper subset of the register.
    pub fn new(n: usize, a_sites: &[usize]) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(Error::InvalidBipartition(format!(
                "unsupported qubit count {n}"
            )));
        }
        let mut mask = 0u64;
        for &s in a_sites {
            if s >= n {
                return Err(Error::SiteOutOfRange { site: s, n });
            }
            mask |= 1 << s;
        }
        let full = (1u64 << n) - 1;
        if mask == 0 || mask == full {
            return Err(Error::InvalidBipartition(format!(
                "A = {a_sites:?} must be a nonempty proper subset of {n} qubits"
            )));
        }
        Ok(Self { n, a_mask: mask })
    }

    /// `A = {0, …, k−1}`.
    pub fn prefix(n: usize, k: usize) -> Result<Self> {
        Self::new(n, &(0..k).collect::<Vec<_>>())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn a_sites(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|q| (self.a_mask >> q) & 1 == 1)
            .collect()
    }

    pub fn b_sites(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|q| (self.a_mask >> q) & 1 == 0)
            .collect()
    }

    pub fn n_a(&self) -> usize {
        self.a_mask.count_ones() as usize
    }

    pub fn dim_a(&self) -> usize {
        1 << self.n_a()
    }

    pub fn dim_b(&self) -> usize {
        1 << (self.n - self.n_a())
    }

    fn b_mask(&self) -> u64 {
        !self.a_mask & ((1u64 << self.n) - 1)
    }
}

/// Packs the bits of `x` selected by `mask` into the low bits.
fn compress(x: u64, mut mask: u64) -> usize {
    let mut out = 0usize;
    let mut k = 0;
    while mask != 0 {
        let b = mask.trailing_zeros();
        out |= (((x >> b) & 1) as usize) << k;
        k += 1;
        mask &= mask - 1;
    }
    out
}

/// Rényi order, with `0`, `1` and `∞` as the usual limits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RenyiIndex {
    Finite(f64),
    Infinity,
}

impl RenyiIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::OutOfRange(format!(
                "Rényi index {alpha} must be nonnegative"
            )));
        }
        Ok(if alpha.is_infinite() {
            Self::Infinity
        } else {
            Self::Finite(alpha)
        })
    }
}

impl fmt::Display for RenyiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(a) => write!(f, "{a}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for RenyiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(Self::Infinity);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::OutOfRange(format!("cannot parse Rényi index {s:?}")))?;
        Self::new(v)
    }
}

/// Rényi entropy in bits of a probability vector. Rounding can push the
/// result of a pure distribution slightly below zero; such values are
/// reported as zero.
pub fn renyi_entropy(weights: &[f64], alpha: RenyiIndex) -> f64 {
    let h = match alpha {
        RenyiIndex::Infinity => {
            let max = weights.iter().cloned().fold(0.0, f64::max);
            -max.log2()
        }
        RenyiIndex::Finite(0.0) => {
            (weights.iter().filter(|&&w| w > SUPPORT_EPS).count() as f64).log2()
        }
        RenyiIndex::Finite(1.0) => -weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|w| w * w.log2())
            .sum::<f64>(),
        RenyiIndex::Finite(a) => {
            let s: f64 = weights
                .iter()
                .filter(|&&w| w > 0.0)
                .map(|w| w.powf(a))
                .sum();
            s.log2() / (1.0 - a)
        }
    };
    if h <= 0.0 {
        0.0
    } else {
        h
    }
}

/// Squared Schmidt coefficients of a Choi vector across `A_out A_in | Ā_out Ā_in`,
/// in descending order.
pub fn reduced_choi_spectrum(v: &ChoiVector, b: &Bipartition) -> Result<Vec<f64>> {
    if v.n_qubits() != b.n {
        return Err(Error::QubitMismatch {
            left: v.n_qubits(),
            right: b.n,
        });
    }
    let d = 1usize << b.n;
    let (da, db) = (b.dim_a(), b.dim_b());
    let (am, bm) = (b.a_mask, b.b_mask());
    let mut m = DMatrix::<Complex64>::zeros(da * da, db * db);
    let amps = v.amps();
    for out in 0..d {
        let (ao, bo) = (compress(out as u64, am), compress(out as u64, bm));
        for inp in 0..d {
            let (ai, bi) = (compress(inp as u64, am), compress(inp as u64, bm));
            m[(ao + da * ai, bo + db * bi)] = amps[out * d + inp];
        }
    }
    Ok(schmidt_weights(m))
}

fn schmidt_weights(m: DMatrix<Complex64>) -> Vec<f64> {
    let sv = m.svd(false, false).singular_values;
    let mut w: Vec<f64> = sv.iter().map(|s| s * s).collect();
    w.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    w
}

/// Local-operator entanglement of `o` across `b`.
pub fn loe(o: &DenseOperator, b: &Bipartition, alpha: RenyiIndex) -> Result<f64> {
    let w = reduced_choi_spectrum(&choi_vector(o)?, b)?;
    Ok(renyi_entropy(&w, alpha))
}

/// `2^{−E⁽²⁾}`, the sum of squared Schmidt weights.
pub fn operator_purity(o: &DenseOperator, b: &Bipartition) -> Result<f64> {
    let w = reduced_choi_spectrum(&choi_vector(o)?, b)?;
    Ok(w.iter().map(|x| x * x).sum())
}

/// Operator entanglement of a unitary, i.e. the same quantity applied to `|U⟩⟩`.
pub fn operator_entanglement(u: &DenseOperator, b: &Bipartition, alpha: RenyiIndex) -> Result<f64> {
    loe(u, b, alpha)
}

/// Stabilizer Rényi entropy of the squared Pauli amplitudes. Inputs that are
/// not unit-normalized in the Pauli basis are rescaled with a warning.
pub fn ose(o: &DenseOperator, alpha: RenyiIndex) -> Result<f64> {
    let mut w = pauli_transform(o).weights();
    let total: f64 = w.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroOperator);
    }
    if (total - 1.0).abs() > 1e-8 {
        log::warn!("Pauli norm {total} differs from 1; normalizing before computing the entropy");
        w.iter_mut().for_each(|x| *x /= total);
    }
    Ok(renyi_entropy(&w, alpha))
}

/// A Pauli string has a product Choi state and a single Pauli amplitude.
/// Both monotones vanish identically on it; these are the tableau-path
/// counterparts of [`loe`] and [`ose`].
pub fn loe_pauli(p: &PauliString, b: &Bipartition, alpha: RenyiIndex) -> Result<f64> {
    if p.n_qubits() != b.n {
        return Err(Error::QubitMismatch {
            left: p.n_qubits(),
            right: b.n,
        });
    }
    Ok(renyi_entropy(&[1.0], alpha))
}

pub fn ose_pauli(_p: &PauliString, alpha: RenyiIndex) -> f64 {
    renyi_entropy(&[1.0], alpha)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct NullityResult {
    pub nu: u32,
    pub stab_count: u128,
    pub tolerance: f64,
}

/// `ν = 2N − log₂|Stab|` where `Stab` counts Paulis `P₂` for which `U†P₂U`
/// is (up to a phase) a Pauli `P₁`.
pub fn unitary_nullity(u: &DenseOperator, eps: f64) -> Result<NullityResult> {
    let n = u.n_qubits();
    if n > NULLITY_LIMIT {
        return Err(Error::TooManyQubits {
            what: "unitary nullity",
            n,
            limit: NULLITY_LIMIT,
        });
    }
    let d = 1usize << n;
    let um = u.matrix();
    let mut count = 0usize;
    let mut w = DMatrix::<Complex64>::zeros(d, d);
    for p2 in PauliString::all(n) {
        // W = P₂ U, row permutation with phases
        for k in 0..d {
            let (amp, row) = p2.apply_to_basis(k);
            for c in 0..d {
                w[(row, c)] = amp * um[(k, c)];
            }
        }
        let entry = |r: usize, c: usize| -> Complex64 {
            (0..d).map(|k| um[(k, r)].conj() * w[(k, c)]).sum()
        };
        // Largest entry of row 0 locates the x-part of the candidate P₁.
        let row0: Vec<Complex64> = (0..d).map(|c| entry(0, c)).collect();
        let x = (0..d)
            .max_by(|&a, &b| row0[a].norm().partial_cmp(&row0[b].norm()).expect("finite"))
            .expect("nonempty");
        // M[j⊕x, j] ∝ (−1)^{j·z}; compare j = e_q with j = 0.
        let base = entry(x, 0);
        let mut z = 0u64;
        for q in 0..n {
            let j = 1usize << q;
            let v = entry(j ^ x, j);
            if (v * base.conj()).re < 0.0 {
                z |= 1 << q;
            }
        }
        let p1 = PauliString::from_masks(n, x as u64, z, 0)?;
        // tr[P₁ M] = Σ_j P₁[j, j⊕x] M[j⊕x, j]
        let mut tr = Complex64::new(0.0, 0.0);
        for j in 0..d {
            let (a, back) = p1.apply_to_basis(j ^ x);
            debug_assert_eq!(back, j);
            tr += a * entry(j ^ x, j);
        }
        if (tr / d as f64).norm() >= 1.0 - eps {
            count += 1;
        }
    }
    nullity_from_count(n, count, eps)
}

/// Reference implementation taking the full Pauli transform of every
/// conjugated string.
pub fn unitary_nullity_bruteforce(u: &DenseOperator, eps: f64) -> Result<NullityResult> {
    let n = u.n_qubits();
    if n > NULLITY_LIMIT {
        return Err(Error::TooManyQubits {
            what: "unitary nullity",
            n,
            limit: NULLITY_LIMIT,
        });
    }
    let mut count = 0usize;
    for p2 in PauliString::all(n) {
        let m = crate::dense::heisenberg_conjugate(u, &p2.to_dense()?)?;
        let spec = pauli_transform(&m);
        if spec.coeffs().iter().any(|c| c.norm() >= 1.0 - eps) {
            count += 1;
        }
    }
    nullity_from_count(n, count, eps)
}

fn nullity_from_count(n: usize, count: usize, eps: f64) -> Result<NullityResult> {
    if !count.is_power_of_two() {
        return Err(Error::StabilizerCountNotPowerOfTwo {
            count,
            tolerance: eps,
        });
    }
    Ok(NullityResult {
        nu: 2 * n as u32 - count.trailing_zeros(),
        stab_count: count as u128,
        tolerance: eps,
    })
}

/// Every Pauli is stabilized by a Clifford, so `ν = 0`.
pub fn clifford_nullity(c: &CliffordTableau) -> NullityResult {
    let n = c.n_qubits() as u32;
    NullityResult {
        nu: 0,
        stab_count: 1u128.checked_shl(2 * n).unwrap_or(u128::MAX),
        tolerance: 0.0,
    }
}

/// Entanglement of a pure state given by its amplitudes across `b`.
pub fn state_entanglement(
    psi: &DVector<Complex64>,
    b: &Bipartition,
    alpha: RenyiIndex,
) -> Result<f64> {
    let d = 1usize << b.n;
    if psi.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: psi.len(),
        });
    }
    let (am, bm) = (b.a_mask, b.b_mask());
    let mut m = DMatrix::<Complex64>::zeros(b.dim_a(), b.dim_b());
    for j in 0..d {
        m[(compress(j as u64, am), compress(j as u64, bm))] = psi[j];
    }
    let norm = psi.norm_squared();
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let w: Vec<f64> = schmidt_weights(m).into_iter().map(|x| x / norm).collect();
    Ok(renyi_entropy(&w, alpha))
}

/// Monte Carlo entangling power: mean entanglement of `U(u_A ⊗ u_Ā)|0…0⟩`
/// over Haar-random local unitaries.
pub fn entangling_power_mc(
    u: &DenseOperator,
    b: &Bipartition,
    alpha: RenyiIndex,
    n_samples: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<Estimate> {
    if u.n_qubits() != b.n {
        return Err(Error::QubitMismatch {
            left: u.n_qubits(),
            right: b.n,
        });
    }
    let d = 1usize << b.n;
    let (am, bm) = (b.a_mask, b.b_mask());
    let um = u.matrix();
    run_samples(n_samples, seed, policy, |rng| {
        let va = sample_haar_unitary(b.dim_a(), rng).column(0).into_owned();
        let vb = sample_haar_unitary(b.dim_b(), rng).column(0).into_owned();
        let prod = DVector::from_fn(d, |j, _| {
            va[compress(j as u64, am)] * vb[compress(j as u64, bm)]
        });
        let psi = um * prod;
        state_entanglement(&psi, b, alpha)
    })
}

/// The swap that exchanges the `k`-th site of `A` with the `k`-th site of `Ā`.
pub fn bipartition_swap(b: &Bipartition) -> Result<DenseOperator> {
    let (a, bb) = (b.a_sites(), b.b_sites());
    if a.len() != bb.len() {
        return Err(Error::InvalidBipartition("swap needs |A| = |Ā|".into()));
    }
    let d = 1usize << b.n;
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..d {
        let mut k = j;
        for (&p, &q) in a.iter().zip(&bb) {
            let (bp, bq) = ((j >> p) & 1, (j >> q) & 1);
            k = (k & !(1 << p) & !(1 << q)) | (bq << p) | (bp << q);
        }
        m[(k, j)] = Complex64::new(1.0, 0.0);
    }
    Ok(DenseOperator::from_matrix_unchecked(b.n, m))
}

/// Linear-entropy entangling power from operator purities, for a cut with
/// `D_A = D_Ā = d`: `(d/(d+1))² [E(U) + E(U·SWAP) − E(SWAP)]` with
/// `E = 1 − operator purity`.
pub fn entangling_power_linear(u: &DenseOperator, b: &Bipartition) -> Result<f64> {
    let swap = bipartition_swap(b)?;
    let d = b.dim_a() as f64;
    let lin = |o: &DenseOperator| operator_purity(o, b).map(|p| 1.0 - p);
    let us = u.mul(&swap)?;
    Ok((d / (d + 1.0)).powi(2) * (lin(u)? + lin(&us)? - lin(&swap)?))
}

/// `log₂` of the Schmidt rank of `|O⟩⟩` across `b`.
pub fn log_schmidt_rank(o: &DenseOperator, b: &Bipartition) -> Result<f64> {
    loe(o, b, RenyiIndex::Finite(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use crate::dense::{embed, gates, heisenberg_conjugate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> DenseOperator {
        s.parse::<PauliString>().unwrap().to_dense().unwrap()
    }

    fn alphas() -> Vec<RenyiIndex> {
        [0.0, 0.5, 1.0, 2.0, 3.0, f64::INFINITY]
            .iter()
            .map(|&a| RenyiIndex::new(a).unwrap())
            .collect()
    }

    fn xx_plus_yy() -> DenseOperator {
        let m = (p("XX").matrix() + p("YY").matrix())
            * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        DenseOperator::new(m).unwrap()
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(3, &[]).is_err());
        assert!(Bipartition::new(3, &[0, 1, 2]).is_err());
        assert!(Bipartition::new(3, &[3]).is_err());
        let b = Bipartition::new(4, &[1, 3]).unwrap();
        assert_eq!(b.b_sites(), vec![0, 2]);
        assert_eq!((b.dim_a(), b.dim_b()), (4, 4));
    }

    #[test]
    fn spectrum_examples() {
        let b = Bipartition::new(2, &[0]).unwrap();
        let w = reduced_choi_spectrum(&choi_vector(&p("XY")).unwrap(), &b).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && w[1..].iter().all(|x| x.abs() < 1e-12));
        let w = reduced_choi_spectrum(&choi_vector(&xx_plus_yy()).unwrap(), &b).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-12 && (w[1] - 0.5).abs() < 1e-12);
        for a in alphas() {
            assert!((loe(&xx_plus_yy(), &b, a).unwrap() - 1.0).abs() < 1e-12);
            assert!(loe(&p("ZX"), &b, a).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_normalized_for_random_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..=4 {
            let o = DenseOperator::random_gaussian(n, &mut rng);
            let b = Bipartition::prefix(n, 1).unwrap();
            let w = reduced_choi_spectrum(&choi_vector(&o).unwrap(), &b).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(w.windows(2).all(|p| p[0] >= p[1]));
        }
    }

    #[test]
    fn single_t_gate_has_no_loe() {
        let t = embed(&gates::t_gate(), &[0], 2).unwrap();
        let out = heisenberg_conjugate(&t, &p("XI")).unwrap();
        for a in alphas() {
            assert!(
                loe(&out, &Bipartition::new(2, &[0]).unwrap(), a)
                    .unwrap()
                    .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn ose_examples() {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let xy = DenseOperator::new((p("X").matrix() + p("Y").matrix()) * s).unwrap();
        for a in alphas() {
            assert!(ose(&p("XZI"), a).unwrap().abs() < 1e-12);
            assert!((ose(&xy, a).unwrap() - 1.0).abs() < 1e-12);
        }
        let o = DenseOperator::new(
            p("X").matrix() * Complex64::new(3f64.sqrt() / 2.0, 0.0)
                + p("Y").matrix() * Complex64::new(0.5, 0.0),
        )
        .unwrap();
        let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((ose(&o, RenyiIndex::Finite(1.0)).unwrap() - h).abs() < 1e-12);
        assert!((h - 0.8112781244591328).abs() < 1e-15);
        let doubled = DenseOperator::new(xy.matrix() * Complex64::new(2.0, 0.0)).unwrap();
        assert!((ose(&doubled, RenyiIndex::Finite(2.0)).unwrap() - 1.0).abs() < 1e-12);
        let zero = DenseOperator::new(DMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            ose(&zero, RenyiIndex::Finite(1.0)),
            Err(Error::ZeroOperator)
        ));
    }

    #[test]
    fn nullity_examples() {
        let t1 = DenseOperator::new(gates::t_gate()).unwrap();
        let r = unitary_nullity(&t1, NULLITY_EPS).unwrap();
        assert_eq!((r.nu, r.stab_count), (1, 2));
        let tt = embed(&gates::t_gate(), &[0], 2)
            .unwrap()
            .mul(&embed(&gates::t_gate(), &[1], 2).unwrap())
            .unwrap();
        assert_eq!(unitary_nullity(&tt, NULLITY_EPS).unwrap().nu, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let c = CliffordTableau::sample_uniform(3, &mut rng);
        assert_eq!(
            unitary_nullity(&c.to_dense().unwrap(), NULLITY_EPS)
                .unwrap()
                .nu,
            0
        );
        assert_eq!(clifford_nullity(&c).nu, 0);
        assert!(unitary_nullity(&DenseOperator::identity(6), NULLITY_EPS).is_err());
    }

    #[test]
    fn nullity_fast_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 1..=3 {
            for tau in 0..4 {
                let c = Circuit::random_clifford_t(n, 12, tau, &mut rng).unwrap();
                let u = c.to_dense().unwrap();
                let fast = unitary_nullity(&u, NULLITY_EPS).unwrap();
                let slow = unitary_nullity_bruteforce(&u, NULLITY_EPS).unwrap();
                assert_eq!(fast, slow);
                assert!(fast.nu as usize <= tau);
            }
        }
        let h = crate::dense::sample_haar_operator(2, &mut rng);
        assert_eq!(unitary_nullity(&h, NULLITY_EPS).unwrap().nu, 4);
    }

    #[test]
    fn swap_operator_entanglement() {
        let b = Bipartition::new(2, &[0]).unwrap();
        let swap = bipartition_swap(&b).unwrap();
        assert!(swap.max_abs_diff(&DenseOperator::new(gates::swap()).unwrap()) < 1e-15);
        for a in alphas() {
            assert!((operator_entanglement(&swap, &b, a).unwrap() - 2.0).abs() < 1e-12);
        }
        let b4 = Bipartition::new(4, &[0, 2]).unwrap();
        let s4 = bipartition_swap(&b4).unwrap();
        assert!(
            (operator_entanglement(&s4, &b4, RenyiIndex::Finite(2.0)).unwrap() - 4.0).abs() < 1e-10
        );
    }

    #[test]
    fn product_unitary_has_no_entangling_power() {
        let mut c = Circuit::new(2).unwrap();
        c.push(Gate::H(0)).unwrap().push(Gate::T(1)).unwrap();
        let u = c.to_dense().unwrap();
        let b = Bipartition::new(2, &[0]).unwrap();
        let est = entangling_power_mc(
            &u,
            &b,
            RenyiIndex::Finite(2.0),
            64,
            1,
            ExecPolicy::Sequential,
        )
        .unwrap();
        assert!(est.mean.abs() < 1e-12);
        assert!(
            operator_entanglement(&u, &b, RenyiIndex::Finite(1.0))
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(entangling_power_linear(&u, &b).unwrap().abs() < 1e-12);
    }

    #[test]
    fn linear_entangling_power_of_cnot() {
        let u = DenseOperator::new(gates::cnot()).unwrap();
        let b = Bipartition::new(2, &[0]).unwrap();
        let exact = entangling_power_linear(&u, &b).unwrap();
        assert!((exact - 2.0 / 9.0).abs() < 1e-12);
        // Linear entropy 1 − 2^{−E⁽²⁾}, averaged directly.
        let d = 4;
        let est = run_samples(20000, 3, ExecPolicy::Sequential, |rng| {
            let va = sample_haar_unitary(2, rng).column(0).into_owned();
            let vb = sample_haar_unitary(2, rng).column(0).into_owned();
            let prod = DVector::from_fn(d, |j, _| va[j & 1] * vb[j >> 1]);
            let psi = u.matrix() * prod;
            state_entanglement(&psi, &b, RenyiIndex::Finite(2.0)).map(|e| 1.0 - 2f64.powf(-e))
        })
        .unwrap();
        assert!(
            (est.mean - exact).abs() <= 3.0 * est.std_error,
            "{est:?} vs {exact}"
        );
    }

    #[test]
    fn schmidt_rank_of_swap() {
        let b = Bipartition::new(2, &[1]).unwrap();
        let swap = DenseOperator::new(gates::swap()).unwrap();
        assert!((log_schmidt_rank(&swap, &b).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn renyi_parse() {
        assert_eq!("inf".parse::<RenyiIndex>().unwrap(), RenyiIndex::Infinity);
        assert_eq!(
            "0.5".parse::<RenyiIndex>().unwrap(),
            RenyiIndex::Finite(0.5)
        );
        assert!("-1".parse::<RenyiIndex>().is_err());
        assert!("x".parse::<RenyiIndex>().is_err());
    }
}
