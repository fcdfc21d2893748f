//! Clifford unitaries as images of the Pauli generators.
//!
//! Row `q` holds `U† X_q U` and row `n + q` holds `U† Z_q U`. A general
//! string `P = i^p σ(x,z)` is conjugated by multiplying the rows selected by
//! its bits in the order `X_0 Z_0 X_1 Z_1 …`, after rewriting
//! `σ(x,z) = i^{|x∧z|} Π_q X_q^{x_q} Z_q^{z_q}`.

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, DENSE_LIMIT, MAX_QUBITS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    rows: Vec<PauliString>,
}

#[derive(Serialize, Deserialize)]
struct TableauJson {
    n: usize,
    symplectic: Vec<Vec<u8>>,
    phase: Vec<u8>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliString::from_masks(n, 1 << q, 0, 0).expect("in range"));
        }
        for q in 0..n {
            rows.push(PauliString::from_masks(n, 0, 1 << q, 0).expect("in range"));
        }
        Self { n, rows }
    }

    /// Builds a tableau from generator images, validating hermiticity and the
    /// symplectic relations.
    pub fn from_images(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        if rows.len() != 2 * n {
            return Err(Error::InvalidTableau(format!(
                "expected {} rows, found {}",
                2 * n,
                rows.len()
            )));
        }
        for r in &rows {
            if r.n_qubits() != n {
                return Err(Error::QubitMismatch {
                    left: n,
                    right: r.n_qubits(),
                });
            }
            if !r.is_hermitian() {
                return Err(Error::InvalidTableau(format!("row {r} is not Hermitian")));
            }
        }
        let t = Self { n, rows };
        if !t.is_symplectic() {
            return Err(Error::InvalidTableau(
                "symplectic form not preserved".into(),
            ));
        }
        Ok(t)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn image_x(&self, q: usize) -> &PauliString {
        &self.rows[q]
    }

    pub fn image_z(&self, q: usize) -> &PauliString {
        &self.rows[self.n + q]
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    /// `M Ω Mᵀ = Ω` over GF(2).
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        for a in 0..2 * n {
            for b in 0..2 * n {
                let expect = a != b && a % n == b % n;
                let anti = !self.rows[a].commutes_unchecked(&self.rows[b]);
                if anti != expect {
                    return false;
                }
            }
        }
        true
    }

    /// The 2N×2N bit matrix; row `g` is `[x bits | z bits]` of image `g`.
    pub fn symplectic_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.n;
        self.rows
            .iter()
            .map(|r| {
                (0..n)
                    .map(|q| ((r.x_mask() >> q) & 1) as u8)
                    .chain((0..n).map(|q| ((r.z_mask() >> q) & 1) as u8))
                    .collect()
            })
            .collect()
    }

    pub fn phase_bits(&self) -> Vec<u8> {
        self.rows.iter().map(|r| r.phase_exp() / 2).collect()
    }

    /// `C† P C` as an exact signed string.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        if p.n_qubits() != self.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: p.n_qubits(),
            });
        }
        Ok(self.conjugate_unchecked(p))
    }

    pub(crate) fn conjugate_unchecked(&self, p: &PauliString) -> PauliString {
        let (x, z) = (p.x_mask(), p.z_mask());
        let phase = (p.phase_exp() as u32 + (x & z).count_ones()) % 4;
        let mut acc = PauliString::identity(self.n).with_phase(phase as u8);
        let mut bits = x | z;
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if (x >> q) & 1 == 1 {
                acc = acc.mul_unchecked(&self.rows[q]);
            }
            if (z >> q) & 1 == 1 {
                acc = acc.mul_unchecked(&self.rows[self.n + q]);
            }
        }
        acc
    }

    /// Applies `first` and then `second`.
    pub fn compose(first: &Self, second: &Self) -> Result<Self> {
        if first.n != second.n {
            return Err(Error::QubitMismatch {
                left: first.n,
                right: second.n,
            });
        }
        let rows = second
            .rows
            .iter()
            .map(|r| first.conjugate_unchecked(r))
            .collect();
        Ok(Self { n: first.n, rows })
    }

    /// Appends this tableau's action after `self`.
    pub fn then(&self, next: &Self) -> Self {
        Self::compose(self, next).expect("matching sizes")
    }

    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut rows = Vec::with_capacity(2 * n);
        for g in 0..2 * n {
            let gen = &Self::identity(n).rows[g];
            let mut x = 0u64;
            let mut z = 0u64;
            for j in 0..n {
                if !gen.commutes_unchecked(&self.rows[n + j]) {
                    x |= 1 << j;
                }
                if !gen.commutes_unchecked(&self.rows[j]) {
                    z |= 1 << j;
                }
            }
            let q = PauliString::from_masks(n, x, z, 0).expect("in range");
            let img = self.conjugate_unchecked(&q);
            debug_assert_eq!((img.x_mask(), img.z_mask()), (gen.x_mask(), gen.z_mask()));
            rows.push(q.with_phase(img.phase_exp()));
        }
        Self { n, rows }
    }

    pub fn hadamard(n: usize, q: usize) -> Result<Self> {
        check_site(n, q)?;
        let mut t = Self::identity(n);
        t.rows.swap(q, n + q);
        Ok(t)
    }

    /// `S = diag(1, i)`: `S† X S = −Y`, `S† Z S = Z`.
    pub fn phase_s(n: usize, q: usize) -> Result<Self> {
        check_site(n, q)?;
        let mut t = Self::identity(n);
        t.rows[q] = PauliString::from_masks(n, 1 << q, 1 << q, 2)?;
        Ok(t)
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Result<Self> {
        check_site(n, control)?;
        check_site(n, target)?;
        if control == target {
            return Err(Error::InvalidCircuit("CX control equals target".into()));
        }
        let mut t = Self::identity(n);
        t.rows[control] = PauliString::from_masks(n, (1 << control) | (1 << target), 0, 0)?;
        t.rows[n + target] = PauliString::from_masks(n, 0, (1 << control) | (1 << target), 0)?;
        Ok(t)
    }

    /// Dense matrix with the global phase chosen so that the first nonzero
    /// entry of column 0 is real and positive.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_limit(DENSE_LIMIT)
    }

    pub fn to_dense_with_limit(&self, limit: usize) -> Result<DenseOperator> {
        let n = self.n;
        if n > limit {
            return Err(Error::TooManyQubits {
                what: "tableau to dense",
                n,
                limit,
            });
        }
        let d = 1usize << n;
        // Σ_P P|i⟩⟨0| U†PU = D·conj(U[i,0])·U, one entry per P.
        for i in 0..d {
            let mut m = DMatrix::<Complex64>::zeros(d, d);
            for p in PauliString::all(n) {
                let q = self.conjugate_unchecked(&p);
                let (a, row) = p.apply_to_basis(i);
                // ⟨0|Q|x⟩ where Q|x⟩ = b|0⟩
                let col = q.x_mask() as usize;
                let (b, _) = q.apply_to_basis(col);
                m[(row, col)] += a * b;
            }
            let norm = (0..d).map(|r| m[(r, 0)].norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            let lead = (0..d)
                .map(|r| m[(r, 0)])
                .find(|v| v.norm() > 1e-9 * norm)
                .expect("nonzero column");
            let fix = lead.conj() / lead.norm() / norm;
            m *= fix;
            return Ok(DenseOperator::from_matrix_unchecked(n, m));
        }
        Err(Error::InvalidTableau("no nonzero column found".into()))
    }

    /// Exactly uniform sample from the Clifford group (up to global phase),
    /// using the Bravyi–Maslov canonical form.
    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n), "1..={MAX_QUBITS} qubits");
        let (had, perm) = sample_quantum_mallows(n, rng);
        let mut gamma1 = BitMat::zeros(n, n);
        let mut gamma2 = BitMat::zeros(n, n);
        for i in 0..n {
            gamma1.set(i, i, rng.random::<bool>());
            gamma2.set(i, i, rng.random::<bool>());
        }
        let mut delta1 = BitMat::identity(n);
        let mut delta2 = BitMat::identity(n);
        fill_tril(&mut gamma1, rng, true);
        fill_tril(&mut gamma2, rng, true);
        fill_tril(&mut delta1, rng, false);
        fill_tril(&mut delta2, rng, false);

        let table1 = block_table(&delta1, &gamma1);
        let table2 = block_table(&delta2, &gamma2);

        let mut table = BitMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            table.copy_row_from(i, &table2, perm[i]);
            table.copy_row_from(n + i, &table2, n + perm[i]);
        }
        for i in 0..n {
            if had[i] {
                table.swap_rows(i, n + i);
            }
        }
        let full = table1.mul(&table);

        let rows = (0..2 * n)
            .map(|r| {
                let mut x = 0u64;
                let mut z = 0u64;
                for q in 0..n {
                    if full.get(r, q) {
                        x |= 1 << q;
                    }
                    if full.get(r, n + q) {
                        z |= 1 << q;
                    }
                }
                let sign = if rng.random::<bool>() { 2 } else { 0 };
                PauliString::from_masks(n, x, z, sign).expect("in range")
            })
            .collect();
        Self { n, rows }
    }

    /// All elements of the Clifford group modulo phase, by breadth-first
    /// closure under H, S and CX. Only `n ≤ 2` is accepted (11520 elements).
    pub fn enumerate_group(n: usize) -> Result<Vec<Self>> {
        if n == 0 || n > 2 {
            return Err(Error::OutOfRange(format!(
                "group enumeration supports 1 or 2 qubits, got {n}"
            )));
        }
        let mut gens = Vec::new();
        for q in 0..n {
            gens.push(Self::hadamard(n, q)?);
            gens.push(Self::phase_s(n, q)?);
        }
        for c in 0..n {
            for t in 0..n {
                if c != t {
                    gens.push(Self::cnot(n, c, t)?);
                }
            }
        }
        let start = Self::identity(n);
        let mut seen: HashMap<Self, ()> = HashMap::new();
        seen.insert(start.clone(), ());
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(t) = queue.pop_front() {
            for g in &gens {
                let next = t.then(g);
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    queue.push_back(next);
                }
            }
            out.push(t);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TableauJson {
            n: self.n,
            symplectic: self.symplectic_matrix(),
            phase: self.phase_bits(),
        })
        .expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TableauJson = serde_json::from_str(text)?;
        let n = raw.n;
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidTableau(format!(
                "unsupported qubit count {n}"
            )));
        }
        if raw.symplectic.len() != 2 * n || raw.phase.len() != 2 * n {
            return Err(Error::InvalidTableau("wrong number of rows".into()));
        }
        let mut rows = Vec::with_capacity(2 * n);
        for (bits, &ph) in raw.symplectic.iter().zip(&raw.phase) {
            if bits.len() != 2 * n || bits.iter().chain([&ph]).any(|&b| b > 1) {
                return Err(Error::InvalidTableau("rows must hold 2n bits".into()));
            }
            let mut x = 0u64;
            let mut z = 0u64;
            for q in 0..n {
                x |= (bits[q] as u64) << q;
                z |= (bits[n + q] as u64) << q;
            }
            rows.push(PauliString::from_masks(n, x, z, 2 * ph)?);
        }
        Self::from_images(n, rows)
    }
}

fn check_site(n: usize, q: usize) -> Result<()> {
    if q >= n {
        Err(Error::SiteOutOfRange { site: q, n })
    } else {
        Ok(())
    }
}

fn sample_quantum_mallows<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<bool>, Vec<usize>) {
    let mut had = vec![false; n];
    let mut perm = vec![0usize; n];
    let mut inds: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let m = n - i;
        let eps = 4f64.powi(-(m as i32));
        let r: f64 = rng.random();
        let index = -((r + (1.0 - r) * eps).log2().ceil()) as i64;
        let index = index as usize;
        had[i] = index < m;
        let k = if index < m { index } else { 2 * m - index - 1 };
        perm[i] = inds.remove(k);
    }
    (had, perm)
}

fn fill_tril<R: Rng + ?Sized>(m: &mut BitMat, rng: &mut R, symmetric: bool) {
    for r in 0..m.rows {
        for c in 0..r {
            let v = rng.random::<bool>();
            m.set(r, c, v);
            if symmetric {
                m.set(c, r, v);
            }
        }
    }
}

/// `[[δ, 0], [γδ, (δ⁻¹)ᵀ]]`.
fn block_table(delta: &BitMat, gamma: &BitMat) -> BitMat {
    let n = delta.rows;
    let prod = gamma.mul(delta);
    let inv_t = delta.inverse_lower().transpose();
    let mut t = BitMat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            t.set(r, c, delta.get(r, c));
            t.set(n + r, c, prod.get(r, c));
            t.set(n + r, n + c, inv_t.get(r, c));
        }
    }
    t
}

#[derive(Clone, Debug)]
struct BitMat {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BitMat {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r * self.cols + c] = v;
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for c in 0..other.cols {
                        let v = out.get(r, c) ^ other.get(k, c);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Inverse of a unit lower-triangular matrix by forward substitution.
    fn inverse_lower(&self) -> Self {
        let n = self.rows;
        let mut inv = Self::identity(n);
        for r in 0..n {
            for k in 0..r {
                if self.get(r, k) {
                    for c in 0..n {
                        let v = inv.get(r, c) ^ inv.get(k, c);
                        inv.set(r, c, v);
                    }
                }
            }
        }
        inv
    }

    fn copy_row_from(&mut self, dst: usize, src: &Self, row: usize) {
        let c = self.cols;
        self.data[dst * c..(dst + 1) * c].copy_from_slice(&src.data[row * c..(row + 1) * c]);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{gates, heisenberg_conjugate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn gate_examples() {
        let id = CliffordTableau::identity(2);
        assert_eq!(id.conjugate(&p("-XY")).unwrap(), p("-XY"));
        let h = CliffordTableau::hadamard(1, 0).unwrap();
        assert_eq!(h.conjugate(&p("Z")).unwrap(), p("X"));
        assert_eq!(h.conjugate(&p("Y")).unwrap(), p("-Y"));
        let cx = CliffordTableau::cnot(2, 0, 1).unwrap();
        assert_eq!(cx.conjugate(&p("XI")).unwrap(), p("XX"));
        assert_eq!(cx.conjugate(&p("IZ")).unwrap(), p("ZZ"));
        assert!(cx.conjugate(&p("X")).is_err());
    }

    #[test]
    fn phase_gate_and_inverse() {
        let s = CliffordTableau::phase_s(1, 0).unwrap();
        assert_eq!(s.conjugate(&p("X")).unwrap(), p("-Y"));
        assert_eq!(s.inverse().conjugate(&p("X")).unwrap(), p("Y"));
        let dense = DenseOperator::new(gates::phase_s()).unwrap();
        let out = heisenberg_conjugate(&dense, &p("X").to_dense().unwrap()).unwrap();
        assert!(out.max_abs_diff(&p("-Y").to_dense().unwrap()) < 1e-15);
    }

    #[test]
    fn compose_and_inverse_identity() {
        let h = CliffordTableau::hadamard(1, 0).unwrap();
        assert_eq!(h.then(&h), CliffordTableau::identity(1));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=5 {
            let mut c = CliffordTableau::identity(n);
            for _ in 0..100 {
                let q = rng.random_range(0..n);
                let g = match rng.random_range(0..3) {
                    0 => CliffordTableau::hadamard(n, q).unwrap(),
                    1 => CliffordTableau::phase_s(n, q).unwrap(),
                    _ if n > 1 => {
                        let t = (q + 1 + rng.random_range(0..n - 1)) % n;
                        CliffordTableau::cnot(n, q, t).unwrap()
                    }
                    _ => CliffordTableau::phase_s(n, q).unwrap(),
                };
                c = c.then(&g);
            }
            assert!(c.is_symplectic());
            assert_eq!(c.then(&c.inverse()), CliffordTableau::identity(n));
            assert_eq!(c.inverse().then(&c), CliffordTableau::identity(n));
        }
    }

    #[test]
    fn sampled_tableaux_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..=8 {
            for _ in 0..50 {
                let c = CliffordTableau::sample_uniform(n, &mut rng);
                assert!(c.is_symplectic());
                assert_eq!(c.then(&c.inverse()), CliffordTableau::identity(n));
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(CliffordTableau::enumerate_group(1).unwrap().len(), 24);
        assert_eq!(CliffordTableau::enumerate_group(2).unwrap().len(), 11520);
        assert!(CliffordTableau::enumerate_group(3).is_err());
    }

    #[test]
    fn dense_export_matches_gates() {
        let h = CliffordTableau::hadamard(1, 0).unwrap().to_dense().unwrap();
        assert!(h.max_abs_diff(&DenseOperator::new(gates::hadamard()).unwrap()) < 1e-14);
        let id = CliffordTableau::identity(3).to_dense().unwrap();
        assert!(id.max_abs_diff(&DenseOperator::identity(3)) < 1e-14);
    }

    #[test]
    fn dense_export_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for _ in 0..10 {
                let c = CliffordTableau::sample_uniform(n, &mut rng);
                let u = c.to_dense().unwrap();
                assert!(u.is_unitary(1e-12));
                for g in c
                    .rows()
                    .iter()
                    .enumerate()
                    .map(|(i, _)| CliffordTableau::identity(n).rows[i])
                {
                    let lhs = heisenberg_conjugate(&u, &g.to_dense().unwrap()).unwrap();
                    let rhs = c.conjugate(&g).unwrap().to_dense().unwrap();
                    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = CliffordTableau::sample_uniform(3, &mut rng);
        let back = CliffordTableau::from_json(&c.to_json()).unwrap();
        assert_eq!(c, back);
        assert!(
            CliffordTableau::from_json(r#"{"n":1,"symplectic":[[1,0],[1,0]],"phase":[0,0]}"#)
                .is_err()
        );
        assert!(CliffordTableau::from_json("{").is_err());
    }
}
