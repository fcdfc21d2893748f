//! Gate lists over H, S, CX, T, Z-rotations and arbitrary dense blocks.
//!
//! Gates act in list order, so the unitary of `[g1, g2]` is `g2 · g1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordTableau;
use crate::dense::{apply_block_left, gates, DenseOperator};
use crate::error::{Error, Result};
use crate::pauli::{DENSE_LIMIT, MAX_QUBITS};

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    CX(usize, usize),
    T(usize),
    /// `diag(1, e^{iθ})`.
    RZ(usize, f64),
    /// A `2^k × 2^k` block on `sites`; `sites[0]` is the block's low bit.
    Dense(Vec<usize>, DMatrix<Complex64>),
}

impl Gate {
    pub fn sites(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::T(q) | Gate::RZ(q, _) => vec![*q],
            Gate::CX(c, t) => vec![*c, *t],
            Gate::Dense(s, _) => s.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::CX(..) => "CX",
            Gate::T(_) => "T",
            Gate::RZ(..) => "RZ",
            Gate::Dense(..) => "DENSE",
        }
    }

    pub fn is_clifford(&self) -> bool {
        matches!(self, Gate::H(_) | Gate::S(_) | Gate::CX(..))
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        match self {
            Gate::H(_) => gates::hadamard(),
            Gate::S(_) => gates::phase_s(),
            Gate::CX(..) => gates::cnot(),
            Gate::T(_) => gates::t_gate(),
            Gate::RZ(_, th) => gates::rz(*th),
            Gate::Dense(_, m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    t_count: usize,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    gates: Vec<GateJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateJson {
    g: String,
    q: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<Vec<[f64; 2]>>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidCircuit(format!(
                "qubit count {n} outside 1..={MAX_QUBITS}"
            )));
        }
        Ok(Self {
            n,
            gates: Vec::new(),
            t_count: 0,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        let sites = gate.sites();
        for (i, &s) in sites.iter().enumerate() {
            if s >= self.n {
                return Err(Error::SiteOutOfRange { site: s, n: self.n });
            }
            if sites[..i].contains(&s) {
                return Err(Error::InvalidCircuit(format!(
                    "{} gate repeats site {s}",
                    gate.name()
                )));
            }
        }
        match &gate {
            Gate::Dense(s, m) => {
                let d = 1usize << s.len();
                if s.is_empty() || m.nrows() != d || m.ncols() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: m.nrows(),
                    });
                }
            }
            Gate::RZ(_, th) if !th.is_finite() => {
                return Err(Error::InvalidCircuit("RZ angle must be finite".into()));
            }
            _ => {}
        }
        if matches!(gate, Gate::T(_)) {
            self.t_count += 1;
        }
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends all gates of `other` after those of `self`.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    /// Number of T gates in the list. This upper-bounds the true T-count.
    pub fn t_gates(&self) -> usize {
        self.t_count
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        if self.n > DENSE_LIMIT {
            return Err(Error::TooManyQubits {
                what: "circuit to dense",
                n: self.n,
                limit: DENSE_LIMIT,
            });
        }
        let d = 1usize << self.n;
        let mut m = DMatrix::<Complex64>::identity(d, d);
        for g in &self.gates {
            apply_block_left(&mut m, self.n, &g.matrix(), &g.sites());
        }
        Ok(DenseOperator::from_matrix_unchecked(self.n, m))
    }

    pub fn to_tableau(&self) -> Result<CliffordTableau> {
        let mut t = CliffordTableau::identity(self.n);
        for g in &self.gates {
            let step = match g {
                Gate::H(q) => CliffordTableau::hadamard(self.n, *q)?,
                Gate::S(q) => CliffordTableau::phase_s(self.n, *q)?,
                Gate::CX(c, tq) => CliffordTableau::cnot(self.n, *c, *tq)?,
                other => {
                    return Err(Error::InvalidCircuit(format!(
                        "{} is not a Clifford gate",
                        other.name()
                    )))
                }
            };
            t = t.then(&step);
        }
        Ok(t)
    }

    /// Random circuit of `n_clifford` gates drawn from {H, S, CX} with
    /// `n_t` T gates inserted at uniformly random positions.
    pub fn random_clifford_t<R: Rng + ?Sized>(
        n: usize,
        n_clifford: usize,
        n_t: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut c = Self::new(n)?;
        let total = n_clifford + n_t;
        let mut is_t = vec![false; total];
        let mut placed = 0;
        while placed < n_t {
            let k = rng.random_range(0..total);
            if !is_t[k] {
                is_t[k] = true;
                placed += 1;
            }
        }
        for t in is_t {
            let q = rng.random_range(0..n);
            let gate = if t {
                Gate::T(q)
            } else {
                match rng.random_range(0..3) {
                    0 => Gate::H(q),
                    1 => Gate::S(q),
                    _ if n > 1 => Gate::CX(q, (q + 1 + rng.random_range(0..n - 1)) % n),
                    _ => Gate::H(q),
                }
            };
            c.push(gate)?;
        }
        Ok(c)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CircuitJson = serde_json::from_str(text)?;
        let mut c = Self::new(raw.n)?;
        for (idx, g) in raw.gates.into_iter().enumerate() {
            let gate =
                parse_gate(g).map_err(|e| Error::InvalidCircuit(format!("gate {idx}: {e}")))?;
            c.push(gate)
                .map_err(|e| Error::InvalidCircuit(format!("gate {idx}: {e}")))?;
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        let gates = self
            .gates
            .iter()
            .map(|g| GateJson {
                g: g.name().to_string(),
                q: g.sites(),
                theta: match g {
                    Gate::RZ(_, th) => Some(*th),
                    _ => None,
                },
                m: match g {
                    Gate::Dense(_, m) => Some(
                        (0..m.nrows())
                            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
                            .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
                            .collect(),
                    ),
                    _ => None,
                },
            })
            .collect();
        serde_json::to_string(&CircuitJson { n: self.n, gates }).expect("serializable")
    }
}

fn parse_gate(g: GateJson) -> std::result::Result<Gate, String> {
    let arity = |k: usize| {
        if g.q.len() == k {
            Ok(())
        } else {
            Err(format!(
                "field \"q\" of {} needs {k} site(s), found {}",
                g.g,
                g.q.len()
            ))
        }
    };
    let gate = match g.g.as_str() {
        "H" => {
            arity(1)?;
            Gate::H(g.q[0])
        }
        "S" => {
            arity(1)?;
            Gate::S(g.q[0])
        }
        "T" => {
            arity(1)?;
            Gate::T(g.q[0])
        }
        "CX" => {
            arity(2)?;
            Gate::CX(g.q[0], g.q[1])
        }
        "RZ" => {
            arity(1)?;
            let th = g.theta.ok_or("RZ needs field \"theta\"")?;
            Gate::RZ(g.q[0], th)
        }
        "DENSE" => {
            let entries = g.m.ok_or("DENSE needs field \"m\"")?;
            let d = 1usize << g.q.len();
            if entries.len() != d * d {
                return Err(format!(
                    "field \"m\" needs {} entries, found {}",
                    d * d,
                    entries.len()
                ));
            }
            let m = DMatrix::from_fn(d, d, |r, c| {
                let [re, im] = entries[r * d + c];
                Complex64::new(re, im)
            });
            let deviation = (m.adjoint() * &m - DMatrix::identity(d, d)).camax();
            if deviation > 1e-10 {
                return Err(format!(
                    "field \"m\" is not unitary (‖m†m − 1‖ = {deviation:.1e})"
                ));
            }
            Gate::Dense(g.q, m)
        }
        other => return Err(format!("unknown gate kind {other:?} in field \"g\"")),
    };
    if !matches!(gate, Gate::RZ(..)) && g.theta.is_some() {
        return Err(format!("field \"theta\" not allowed on {}", g.g));
    }
    Ok(gate)
}

/// T-count witness: the number of T gates, defined only for Clifford+T lists.
pub fn t_count(c: &Circuit) -> Result<usize> {
    if let Some(g) = c
        .gates
        .iter()
        .find(|g| !g.is_clifford() && !matches!(g, Gate::T(_)))
    {
        return Err(Error::NonCliffordT(g.name().to_string()));
    }
    Ok(c.t_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_and_involution() {
        let mut c = Circuit::new(2).unwrap();
        assert!(
            c.to_dense()
                .unwrap()
                .max_abs_diff(&DenseOperator::identity(2))
                < 1e-15
        );
        c.push(Gate::H(0)).unwrap().push(Gate::H(0)).unwrap();
        assert!(
            c.to_dense()
                .unwrap()
                .max_abs_diff(&DenseOperator::identity(2))
                < 1e-12
        );
    }

    #[test]
    fn concatenation_is_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = Circuit::random_clifford_t(3, 15, 3, &mut rng).unwrap();
        let b = Circuit::random_clifford_t(3, 15, 2, &mut rng).unwrap();
        let mut ab = a.clone();
        ab.extend(&b).unwrap();
        let expect = b.to_dense().unwrap().mul(&a.to_dense().unwrap()).unwrap();
        assert!(ab.to_dense().unwrap().max_abs_diff(&expect) < 1e-12);
        assert_eq!(t_count(&ab).unwrap(), 5);
    }

    #[test]
    fn tableau_agrees_with_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = Circuit::random_clifford_t(3, 40, 0, &mut rng).unwrap();
        let tab = c.to_tableau().unwrap();
        let u = c.to_dense().unwrap();
        for p in PauliString::all(3) {
            let lhs = crate::dense::heisenberg_conjugate(&u, &p.to_dense().unwrap()).unwrap();
            let rhs = tab.conjugate(&p).unwrap().to_dense().unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn t_count_rules() {
        let mut c = Circuit::new(2).unwrap();
        assert_eq!(t_count(&c).unwrap(), 0);
        for q in [0, 1, 0] {
            c.push(Gate::T(q)).unwrap();
        }
        c.push(Gate::CX(0, 1)).unwrap();
        assert_eq!(t_count(&c).unwrap(), 3);
        c.push(Gate::RZ(1, 0.3)).unwrap();
        assert!(matches!(t_count(&c), Err(Error::NonCliffordT(_))));
    }

    #[test]
    fn invalid_gates_rejected() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(Gate::H(2)).is_err());
        assert!(c.push(Gate::CX(1, 1)).is_err());
        assert!(c
            .push(Gate::Dense(vec![0], DMatrix::identity(4, 4)))
            .is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text = r#"{"n":3,"gates":[{"g":"H","q":[0]},{"g":"CX","q":[0,1]},{"g":"T","q":[2]},
            {"g":"RZ","q":[0],"theta":0.7853981633974483},
            {"g":"DENSE","q":[0,1],"m":[[1,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,1],[0,0],[0,0],[0,0],[0,0],[1,0]]}]}"#;
        let c = Circuit::from_json(text).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.t_gates(), 1);
        let back = Circuit::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);

        let err = Circuit::from_json("{\"n\":2,\n \"gates\": [ {\"g\":\"H\" ]}").unwrap_err();
        assert!(matches!(err, Error::Json(ref e) if e.line() == 2));
        assert!(Circuit::from_json(r#"{"n":2,"gates":[{"g":"Q","q":[0]}]}"#).is_err());
        assert!(Circuit::from_json(r#"{"n":2,"gates":[{"g":"RZ","q":[0]}]}"#).is_err());
        assert!(Circuit::from_json(r#"{"n":2,"gates":[{"g":"H","q":[5]}]}"#).is_err());
    }
}
