//! Bit-packed Pauli strings with phase tracking, and the Pauli-basis
//! transform of dense operators.
//!
//! A [`PauliString`] on `n` qubits represents `i^phase · σ_0 ⊗ … ⊗ σ_{n-1}`
//! where each letter `σ_q ∈ {I, X, Y, Z}` is encoded by the bit pair
//! `(x_q, z_q)`: `I = (0,0)`, `X = (1,0)`, `Y = (1,1)`, `Z = (0,1)`.
//! The letter `Y` is the Hermitian Pauli matrix itself, so every Hermitian
//! string has `phase ∈ {0, 2}`.
//!
//! Qubit `q` is bit `q` of a computational-basis index (qubit 0 is the least
//! significant bit). In the text form `"+XIZY"` the sign comes first and
//! qubit 0 is the leftmost letter.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::dense::DenseOperator;
use crate::error::{Error, Result};

/// Largest register that bit-packed strings support.
pub const MAX_QUBITS: usize = 64;

/// Default cap on the number of qubits for dense materialization.
pub const DENSE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

#[inline]
fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

/// `i^k` for `k` taken mod 4.
#[inline]
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Builds a string from raw masks. Bits above `n` are rejected.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                what: "Pauli string",
                n,
                limit: MAX_QUBITS,
            });
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::OutOfRange(format!("mask bits set above qubit {n}")));
        }
        Ok(Self {
            n,
            x,
            z,
            phase: phase & 3,
        })
    }

    /// Single-site Pauli `letter` on `site`, identity elsewhere.
    pub fn single(n: usize, site: usize, letter: PauliLetter) -> Result<Self> {
        if site >= n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        let (bx, bz) = letter.bits();
        Self::from_masks(n, (bx as u64) << site, (bz as u64) << site, 0)
    }

    /// The phase-0 representative with index `x | z << n`, the ordering
    /// used by [`PauliSpectrum`].
    pub fn from_index(n: usize, index: usize) -> Self {
        let idx = index as u64;
        Self {
            n,
            x: idx & mask(n),
            z: (idx >> n) & mask(n),
            phase: 0,
        }
    }

    pub fn index(&self) -> usize {
        (self.x | (self.z << self.n)) as usize
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let m = mask(n);
        Self {
            n,
            x: rng.random::<u64>() & m,
            z: rng.random::<u64>() & m,
            phase: 0,
        }
    }

    /// Uniformly random non-identity string with phase 0.
    pub fn random_nonidentity<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let p = Self::random(n, rng);
            if !p.is_identity_letters() {
                return p;
            }
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, site: usize) -> PauliLetter {
        PauliLetter::from_bits((self.x >> site) & 1 == 1, (self.z >> site) & 1 == 1)
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// True when every letter is `I`, regardless of phase.
    pub fn is_identity_letters(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn negate(mut self) -> Self {
        self.phase = (self.phase + 2) & 3;
        self
    }

    /// Support restricted to the sites in `sites_mask`, phase dropped.
    pub fn restrict(&self, sites_mask: u64) -> Self {
        Self {
            n: self.n,
            x: self.x & sites_mask,
            z: self.z & sites_mask,
            phase: 0,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Operator product `self · other`, with the phase tracked mod 4.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (x1, z1, x2, z2) = (self.x, self.z, other.x, other.z);
        let xs1 = x1 & !z1;
        let ys1 = x1 & z1;
        let zs1 = !x1 & z1;
        let xs2 = x2 & !z2;
        let ys2 = x2 & z2;
        let zs2 = !x2 & z2;
        // XY = iZ, YZ = iX, ZX = iY and the reverse orders pick up -i.
        let plus = (xs1 & ys2) | (ys1 & zs2) | (zs1 & xs2);
        let minus = (xs1 & zs2) | (ys1 & xs2) | (zs1 & ys2);
        let phase = (self.phase as i64 + other.phase as i64 + plus.count_ones() as i64
            - minus.count_ones() as i64)
            .rem_euclid(4) as u8;
        Self {
            n: self.n,
            x: x1 ^ x2,
            z: z1 ^ z2,
            phase,
        }
    }

    /// Whether the two strings commute, from the symplectic form.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        !parity((self.x & other.z) ^ (self.z & other.x))
    }

    /// Action on a basis state: `P|j⟩ = amp · |j'⟩`.
    #[inline]
    pub fn apply_to_basis(&self, j: usize) -> (Complex64, usize) {
        let jb = j as u64;
        let k = self.phase as u32
            + (self.x & self.z).count_ones()
            + 2 * ((jb & self.z).count_ones() & 1);
        (i_pow(k), (jb ^ self.x) as usize)
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_limit(DENSE_LIMIT)
    }

    pub fn to_dense_with_limit(&self, limit: usize) -> Result<DenseOperator> {
        if self.n > limit {
            return Err(Error::TooManyQubits {
                what: "dense Pauli",
                n: self.n,
                limit,
            });
        }
        let d = 1usize << self.n;
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for j in 0..d {
            let (amp, k) = self.apply_to_basis(j);
            m[(k, j)] = amp;
        }
        Ok(DenseOperator::from_matrix_unchecked(self.n, m))
    }

    /// Iterates over all `4^n` phase-0 strings in spectrum index order.
    pub fn all(n: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n)).map(move |i| PauliString::from_index(n, i))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(sign)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::PauliParse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (phase, body) = if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else {
            (0, t)
        };
        if body.is_empty() {
            return Err(err("no letters"));
        }
        let n = body.chars().count();
        if n > MAX_QUBITS {
            return Err(err("too many qubits"));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in body.chars().enumerate() {
            let (bx, bz) = match c.to_ascii_uppercase() {
                'I' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                _ => return Err(err(&format!("unexpected character {c:?}"))),
            };
            x |= bx << q;
            z |= bz << q;
        }
        Ok(Self { n, x, z, phase })
    }
}

/// In-place Walsh–Hadamard transform (unnormalized).
pub(crate) fn fwht(v: &mut [Complex64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for j in start..start + h {
                let a = v[j];
                let b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Pauli-basis amplitudes `c_P = tr[O P] / D` of an operator, indexed by
/// `x | z << n` over the phase-0 strings.
#[derive(Clone, Debug)]
pub struct PauliSpectrum {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl PauliSpectrum {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, p: &PauliString) -> Complex64 {
        self.coeffs[p.index()] * i_pow(4 - p.phase_exp() as u32)
    }

    /// `Σ_P |c_P|²`, equal to `tr[O†O]/D`.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Squared amplitudes `|c_P|²`.
    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Reconstructs `O = Σ_P c_P P`.
    pub fn to_dense(&self) -> DenseOperator {
        let n = self.n;
        let d = 1usize << n;
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        let mut w = vec![Complex64::new(0.0, 0.0); d];
        for x in 0..d {
            for (zi, slot) in w.iter_mut().enumerate() {
                let k = ((x & zi) as u64).count_ones();
                *slot = self.coeffs[x | (zi << n)] * i_pow(k);
            }
            fwht(&mut w);
            for (j, val) in w.iter().enumerate() {
                m[(j ^ x, j)] = *val;
            }
        }
        DenseOperator::from_matrix_unchecked(n, m)
    }
}

/// All `4^N` amplitudes `tr[O P]/D` in `O(N·4^N)` time: for each X-pattern
/// the relevant off-diagonal of `O` is Walsh–Hadamard transformed over the
/// Z-pattern.
pub fn pauli_transform(op: &DenseOperator) -> PauliSpectrum {
    let n = op.n_qubits();
    let d = op.dim();
    let m = op.matrix();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d * d];
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    let inv_d = 1.0 / d as f64;
    for x in 0..d {
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = m[(j, j ^ x)];
        }
        fwht(&mut v);
        for (z, val) in v.iter().enumerate() {
            let k = ((x & z) as u64).count_ones();
            coeffs[x | (z << n)] = *val * i_pow(k) * inv_d;
        }
    }
    PauliSpectrum { n, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn dense_close(a: &DenseOperator, b: &DenseOperator, tol: f64) -> bool {
        (a.matrix() - b.matrix()).iter().all(|c| c.norm() <= tol)
    }

    #[test]
    fn single_qubit_products() {
        let xx = p("X").mul(&p("X")).unwrap();
        assert_eq!(xx, PauliString::identity(1));
        let xy = p("X").mul(&p("Y")).unwrap();
        assert_eq!(xy, p("+iZ"));
    }

    #[test]
    fn two_qubit_product_matches_dense() {
        // (X⊗Z)(Z⊗Z) = (XZ)⊗(ZZ) = -iY ⊗ I
        let r = p("XZ").mul(&p("ZZ")).unwrap();
        assert_eq!(r, p("-iYI"));
        let dense = p("XZ").to_dense().unwrap().matrix() * p("ZZ").to_dense().unwrap().matrix();
        assert!(dense_close(
            &r.to_dense().unwrap(),
            &DenseOperator::from_matrix_unchecked(2, dense),
            1e-15
        ));
    }

    #[test]
    fn commutation() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("II").commutes(&p("YZ")).unwrap());
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn dense_forms() {
        let id = p("I").to_dense().unwrap();
        assert_eq!(id.matrix(), &DMatrix::identity(2, 2));
        let z = p("Z").to_dense().unwrap();
        assert_eq!(z.matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(z.matrix()[(1, 1)], Complex64::new(-1.0, 0.0));
        // X on qubit 0 (low bit), Z on qubit 1 (high bit): kron(Z, X) in
        // the usual big-endian matrix layout.
        let xz = p("XZ").to_dense().unwrap();
        let one = Complex64::new(1.0, 0.0);
        let mut expect = DMatrix::<Complex64>::zeros(4, 4);
        expect[(1, 0)] = one;
        expect[(0, 1)] = one;
        expect[(3, 2)] = -one;
        expect[(2, 3)] = -one;
        assert_eq!(xz.matrix(), &expect);
        assert!(PauliString::identity(13).to_dense().is_err());
    }

    #[test]
    fn square_is_phase_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let q = PauliString::random(3, &mut rng).with_phase(rng.random_range(0..4));
            let sq = q.mul(&q).unwrap();
            assert!(sq.is_identity_letters());
            let expect = if q.phase_exp().is_multiple_of(2) {
                0
            } else {
                2
            };
            assert_eq!(sq.phase_exp(), expect);
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XIZY", "-ZZ", "+iY", "-iXIX"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XZ"), p("+XZ"));
        assert!("+XQ".parse::<PauliString>().is_err());
        assert!("+".parse::<PauliString>().is_err());
        let z0: PauliString = "+ZII".parse().unwrap();
        assert_eq!(z0.letter(0), PauliLetter::Z);
        assert_eq!(z0.letter(2), PauliLetter::I);
    }

    #[test]
    fn transform_examples() {
        let spec = pauli_transform(&p("Z").to_dense().unwrap());
        for q in PauliString::all(1) {
            let c = spec.coeff(&q);
            let expect = if q == p("Z") { 1.0 } else { 0.0 };
            assert!((c - Complex64::new(expect, 0.0)).norm() < 1e-15);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let xy = (p("X").to_dense().unwrap().matrix() + p("Y").to_dense().unwrap().matrix())
            * Complex64::new(s, 0.0);
        let spec = pauli_transform(&DenseOperator::from_matrix_unchecked(1, xy));
        assert!((spec.coeff(&p("X")).re - s).abs() < 1e-15);
        assert!((spec.coeff(&p("Y")).re - s).abs() < 1e-15);
        assert!(spec.coeff(&p("Z")).norm() < 1e-15);
        let h = crate::dense::gates::hadamard();
        let spec = pauli_transform(&DenseOperator::from_matrix_unchecked(1, h));
        assert!((spec.coeff(&p("X")).re - s).abs() < 1e-15);
        assert!((spec.coeff(&p("Z")).re - s).abs() < 1e-15);
        assert!(spec.coeff(&p("Y")).norm() < 1e-15);
    }

    #[test]
    fn transform_matches_trace_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let o = DenseOperator::random_gaussian(3, &mut rng);
        let spec = pauli_transform(&o);
        for q in PauliString::all(3) {
            let direct = (o.matrix() * q.to_dense().unwrap().matrix()).trace() / 8.0;
            assert!((spec.coeff(&q) - direct).norm() < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn round_trip_and_parseval(seed in any::<u64>(), n in 1usize..=5) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let o = DenseOperator::random_gaussian(n, &mut rng);
                let spec = pauli_transform(&o);
                let back = spec.to_dense();
                let err = (back.matrix() - o.matrix()).iter().map(|c| c.norm()).fold(0.0, f64::max);
                prop_assert!(err < 1e-12);
                let hs = o.matrix().iter().map(|c| c.norm_sqr()).sum::<f64>() / o.dim() as f64;
                prop_assert!((spec.norm_sqr() - hs).abs() < 1e-12 * hs.max(1.0));
            }

            #[test]
            fn product_matches_dense(seed in any::<u64>(), n in 1usize..=4) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = PauliString::random(n, &mut rng).with_phase(rng.random_range(0..4));
                let b = PauliString::random(n, &mut rng).with_phase(rng.random_range(0..4));
                let c = PauliString::random(n, &mut rng);
                let ab = a.mul(&b).unwrap();
                let dense = a.to_dense().unwrap().matrix() * b.to_dense().unwrap().matrix();
                let diff = (ab.to_dense().unwrap().matrix() - dense).iter().map(|v| v.norm()).fold(0.0, f64::max);
                prop_assert!(diff < 1e-14);
                let left = ab.mul(&c).unwrap();
                let right = a.mul(&b.mul(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
                let da = a.to_dense().unwrap();
                let db = b.to_dense().unwrap();
                let comm = da.matrix() * db.matrix() - db.matrix() * da.matrix();
                let commutes_dense = comm.iter().all(|v| v.norm() < 1e-14);
                prop_assert_eq!(a.commutes(&b).unwrap(), commutes_dense);
            }
        }
    }
}
