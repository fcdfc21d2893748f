//! Exact dense operators on small registers.
//!
//! Basis index bit `q` is qubit `q`. Choi vectors are laid out out-major:
//! amplitude `(i, j)` sits at `i·D + j` where `i` is the row (output) index
//! of the operator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli::DENSE_LIMIT;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n: usize,
    mat: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = mat.shape();
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: c,
            });
        }
        if !r.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(r));
        }
        if mat.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::OutOfRange("non-finite matrix entry".into()));
        }
        Ok(Self {
            n: r.trailing_zeros() as usize,
            mat,
        })
    }

    pub(crate) fn from_matrix_unchecked(n: usize, mat: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(mat.nrows(), 1 << n);
        Self { n, mat }
    }

    pub fn identity(n: usize) -> Self {
        let d = 1 << n;
        Self {
            n,
            mat: DMatrix::identity(d, d),
        }
    }

    /// Entries i.i.d. standard complex Gaussian (variance 1 per entry).
    pub fn random_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let d = 1 << n;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mat = DMatrix::from_fn(d, d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        });
        Self { n, mat }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            mat: self.mat.adjoint(),
        }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            n: self.n,
            mat: &self.mat * &other.mat,
        })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `‖U†U − 1‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let prod = self.mat.adjoint() * &self.mat;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// Largest entrywise distance after removing a global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let overlap = self
            .mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>();
        if overlap.norm() == 0.0 {
            return f64::INFINITY;
        }
        let phase = overlap / overlap.norm();
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Left-multiplies by `block` acting on `sites` (block qubit `k` is
    /// `sites[k]`).
    pub fn apply_left(&mut self, block: &DMatrix<Complex64>, sites: &[usize]) -> Result<()> {
        check_block(self.n, block, sites)?;
        apply_block_left(&mut self.mat, self.n, block, sites);
        Ok(())
    }

    /// Kronecker product with `self` on the low qubits and `high` above.
    pub fn tensor(&self, high: &Self) -> Self {
        Self {
            n: self.n + high.n,
            mat: high.mat.kronecker(&self.mat),
        }
    }
}

fn check_block(n: usize, block: &DMatrix<Complex64>, sites: &[usize]) -> Result<()> {
    let k = sites.len();
    if block.nrows() != 1 << k || block.ncols() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            found: block.nrows(),
        });
    }
    for (i, &s) in sites.iter().enumerate() {
        if s >= n {
            return Err(Error::SiteOutOfRange { site: s, n });
        }
        if sites[..i].contains(&s) {
            return Err(Error::InvalidCircuit(format!("repeated site {s}")));
        }
    }
    Ok(())
}

pub(crate) fn apply_block_left(
    mat: &mut DMatrix<Complex64>,
    n: usize,
    block: &DMatrix<Complex64>,
    sites: &[usize],
) {
    let k = sites.len();
    let bd = 1usize << k;
    let site_mask: usize = sites.iter().map(|s| 1usize << s).sum();
    let offsets: Vec<usize> = (0..bd)
        .map(|a| {
            sites
                .iter()
                .enumerate()
                .filter(|(bit, _)| (a >> bit) & 1 == 1)
                .map(|(_, s)| 1usize << s)
                .sum()
        })
        .collect();
    let d = 1usize << n;
    let mut buf = vec![Complex64::new(0.0, 0.0); bd];
    for col in 0..d {
        for base in 0..d {
            if base & site_mask != 0 {
                continue;
            }
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = mat[(base | offsets[a], col)];
            }
            for r in 0..bd {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, v) in buf.iter().enumerate() {
                    acc += block[(r, c)] * v;
                }
                mat[(base | offsets[r], col)] = acc;
            }
        }
    }
}

/// Places `block` on `sites` of an `n`-qubit register with identity elsewhere.
pub fn embed(block: &DMatrix<Complex64>, sites: &[usize], n: usize) -> Result<DenseOperator> {
    if n > DENSE_LIMIT {
        return Err(Error::TooManyQubits {
            what: "embed",
            n,
            limit: DENSE_LIMIT,
        });
    }
    let mut op = DenseOperator::identity(n);
    op.apply_left(block, sites)?;
    Ok(op)
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal moved back into `Q`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let ph = if norm > 0.0 {
            rjj / norm
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn sample_haar_operator<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseOperator {
    DenseOperator::from_matrix_unchecked(n, sample_haar_unitary(1 << n, rng))
}

/// Heisenberg picture `U† O U`.
pub fn heisenberg_conjugate(u: &DenseOperator, o: &DenseOperator) -> Result<DenseOperator> {
    u.check_dim(o)?;
    Ok(DenseOperator {
        n: u.n,
        mat: u.mat.adjoint() * &o.mat * &u.mat,
    })
}

/// Normalized vectorization `(O ⊗ 1)|φ⁺⟩`.
#[derive(Clone, Debug)]
pub struct ChoiVector {
    n: usize,
    amps: DVector<Complex64>,
}

impl ChoiVector {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn amp(&self, out: usize, input: usize) -> Complex64 {
        self.amps[out * (1 << self.n) + input]
    }
}

/// Choi vector with amplitudes `O[i,j]/√D`, rescaled to unit norm.
pub fn choi_vector(o: &DenseOperator) -> Result<ChoiVector> {
    let (v, norm) = choi_unnormalized(o);
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    Ok(ChoiVector {
        n: o.n,
        amps: v / Complex64::new(norm, 0.0),
    })
}

/// The raw `O[i,j]/√D` amplitudes and their norm, before rescaling.
pub fn choi_unnormalized(o: &DenseOperator) -> (DVector<Complex64>, f64) {
    let d = o.dim();
    let scale = 1.0 / (d as f64).sqrt();
    let v = DVector::from_fn(d * d, |idx, _| o.mat[(idx / d, idx % d)] * scale);
    let norm = v.norm();
    (v, norm)
}

/// Fixed single- and two-qubit matrices. Qubit order inside a two-qubit
/// block follows the block's site list (first site is the low bit).
pub mod gates {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn hadamard() -> DMatrix<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
    }

    pub fn phase_s() -> DMatrix<Complex64> {
        rz(std::f64::consts::FRAC_PI_2)
    }

    pub fn t_gate() -> DMatrix<Complex64> {
        rz(std::f64::consts::FRAC_PI_4)
    }

    /// `diag(1, e^{iθ})`.
    pub fn rz(theta: f64) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex64::from_polar(1.0, theta),
            ],
        )
    }

    /// CNOT with the control on block qubit 0 and the target on block qubit 1.
    pub fn cnot() -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        // index = control + 2·target
        m[(0, 0)] = c(1.0, 0.0);
        m[(3, 1)] = c(1.0, 0.0);
        m[(2, 2)] = c(1.0, 0.0);
        m[(1, 3)] = c(1.0, 0.0);
        m
    }

    pub fn swap() -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m[(2, 1)] = c(1.0, 0.0);
        m[(1, 2)] = c(1.0, 0.0);
        m[(3, 3)] = c(1.0, 0.0);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pauli(s: &str) -> DenseOperator {
        s.parse::<PauliString>().unwrap().to_dense().unwrap()
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [1, 2, 4, 8, 16] {
            let u = sample_haar_unitary(dim, &mut rng);
            let op = DenseOperator::new(u).unwrap();
            assert!(op.unitarity_error() <= 1e-10);
        }
    }

    #[test]
    fn haar_trace_second_moment() {
        // E|tr U|² = 1 for Haar U in any dimension.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 5000;
        let vals: Vec<f64> = (0..n)
            .map(|_| sample_haar_unitary(4, &mut rng).trace().norm_sqr())
            .collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn heisenberg_examples() {
        let x = pauli("X");
        let same = heisenberg_conjugate(&DenseOperator::identity(1), &x).unwrap();
        assert!(same.max_abs_diff(&x) < 1e-15);
        // T† X T = (X − Y)/√2 with T = diag(1, e^{iπ/4}); the mirrored
        // T X T† is (X + Y)/√2.
        let t = DenseOperator::new(gates::t_gate()).unwrap();
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let out = heisenberg_conjugate(&t, &x).unwrap();
        let expect = (x.matrix() - pauli("Y").matrix()) * s;
        assert!((out.matrix() - &expect).iter().all(|v| v.norm() < 1e-15));
        let mirrored = heisenberg_conjugate(&t.adjoint(), &x).unwrap();
        let expect = (x.matrix() + pauli("Y").matrix()) * s;
        assert!((mirrored.matrix() - &expect)
            .iter()
            .all(|v| v.norm() < 1e-15));
        assert!(heisenberg_conjugate(&t, &pauli("XX")).is_err());
    }

    #[test]
    fn choi_examples() {
        let v = choi_vector(&DenseOperator::identity(2)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert!((v.amp(i, j).re - expect).abs() < 1e-15);
            }
        }
        let (_, norm) = choi_unnormalized(&pauli("XZY"));
        assert!((norm - 1.0).abs() < 1e-15);
        let zero = DenseOperator::from_matrix_unchecked(1, DMatrix::zeros(2, 2));
        assert!(matches!(choi_vector(&zero), Err(Error::ZeroOperator)));
    }

    #[test]
    fn embed_and_conjugate() {
        // T on qubit 1 of X⊗X: only qubit 1 changes.
        let u = embed(&gates::t_gate(), &[1], 2).unwrap();
        let xx = pauli("XX");
        let out = heisenberg_conjugate(&u.adjoint(), &xx).unwrap();
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let expect = (pauli("XX").matrix() + pauli("XY").matrix()) * s;
        assert!((out.matrix() - &expect).iter().all(|v| v.norm() < 1e-14));
        assert!(embed(&gates::t_gate(), &[2], 2).is_err());
        assert!(embed(&gates::cnot(), &[0], 2).is_err());
        assert!(embed(&gates::cnot(), &[1, 1], 2).is_err());
    }

    #[test]
    fn embedded_cnot_orientation() {
        // control on qubit 1, target on qubit 0: |q1=1,q0=0> = index 2 -> 3
        let u = embed(&gates::cnot(), &[1, 0], 2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(u.matrix()[(3, 2)], one);
        assert_eq!(u.matrix()[(1, 1)], one);
    }
}
