//! Random-unitary ensembles, Monte Carlo purity estimates and the
//! monotone-hierarchy harness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{t_count, Circuit};
use crate::clifford::CliffordTableau;
use crate::dense::{
    embed, gates, heisenberg_conjugate, sample_haar_operator, sample_haar_unitary, DenseOperator,
};
use crate::error::{Error, Result};
use crate::exec::{map_samples, sample_rng, Estimate, ExecPolicy};
use crate::monotones::{
    loe, operator_purity, ose, unitary_nullity, Bipartition, RenyiIndex, NULLITY_EPS,
};
use crate::pauli::{PauliLetter, PauliString, DENSE_LIMIT};

/// Slack allowed in each hierarchy comparison.
pub const HIERARCHY_SLACK: f64 = 1e-9;
/// Nullity is computed by enumerating all Paulis, so the harness stops here.
pub const HIERARCHY_LIMIT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Haar,
    Clifford,
    /// `C₀ (V ⊗ 1) C₁` with `V` Haar on the first `ell` qubits.
    NuCompressible {
        ell: usize,
    },
    /// `C₀ T C₁ ⋯ T C_τ`.
    TDoped {
        tau: usize,
    },
}

#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    n: usize,
    t_site: usize,
    initial: PauliString,
}

impl EnsembleSpec {
    /// Defaults: T gates on qubit 0 and initial operator `Z` on qubit 0.
    pub fn new(kind: EnsembleKind, n: usize) -> Result<Self> {
        if n == 0 || n > DENSE_LIMIT {
            return Err(Error::TooManyQubits {
                what: "ensemble sample",
                n,
                limit: DENSE_LIMIT,
            });
        }
        if let EnsembleKind::NuCompressible { ell } = kind {
            if ell > n {
                return Err(Error::OutOfRange(format!(
                    "Haar block of {ell} qubits on {n} qubits"
                )));
            }
        }
        Ok(Self {
            kind,
            n,
            t_site: 0,
            initial: PauliString::single(n, 0, PauliLetter::Z)?,
        })
    }

    pub fn with_initial(mut self, initial: PauliString) -> Result<Self> {
        if initial.n_qubits() != self.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: initial.n_qubits(),
            });
        }
        if initial.is_identity_letters() {
            return Err(Error::OutOfRange(
                "initial operator must be a nonidentity Pauli".into(),
            ));
        }
        self.initial = initial;
        Ok(self)
    }

    pub fn with_t_site(mut self, site: usize) -> Result<Self> {
        if site >= self.n {
            return Err(Error::SiteOutOfRange { site, n: self.n });
        }
        self.t_site = site;
        Ok(self)
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn initial(&self) -> &PauliString {
        &self.initial
    }

    pub fn t_site(&self) -> usize {
        self.t_site
    }
}

/// What is known about a sampled unitary by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleMeta {
    /// T-count witness; absent for Haar samples.
    pub tau: Option<usize>,
    /// Haar block size for ν-compressible samples.
    pub ell: Option<usize>,
}

fn uniform_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DenseOperator> {
    CliffordTableau::sample_uniform(n, rng).to_dense()
}

pub fn sample_ensemble<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<(DenseOperator, SampleMeta)> {
    let n = spec.n;
    match spec.kind {
        EnsembleKind::Haar => Ok((
            sample_haar_operator(n, rng),
            SampleMeta {
                tau: None,
                ell: None,
            },
        )),
        EnsembleKind::Clifford => Ok((
            uniform_clifford(n, rng)?,
            SampleMeta {
                tau: Some(0),
                ell: None,
            },
        )),
        EnsembleKind::NuCompressible { ell } => {
            let c0 = uniform_clifford(n, rng)?;
            let mut u = if ell == 0 {
                c0
            } else {
                let sites: Vec<usize> = (0..ell).collect();
                let v = embed(&sample_haar_unitary(1 << ell, rng), &sites, n)?;
                c0.mul(&v)?
            };
            u = u.mul(&uniform_clifford(n, rng)?)?;
            Ok((
                u,
                SampleMeta {
                    tau: None,
                    ell: Some(ell),
                },
            ))
        }
        EnsembleKind::TDoped { tau } => {
            let t = embed(&gates::t_gate(), &[spec.t_site], n)?;
            let mut u = uniform_clifford(n, rng)?;
            for _ in 0..tau {
                u = u.mul(&t)?.mul(&uniform_clifford(n, rng)?)?;
            }
            Ok((
                u,
                SampleMeta {
                    tau: Some(tau),
                    ell: None,
                },
            ))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PuritySample {
    pub sample_index: usize,
    pub purity: f64,
    pub loe2_bits: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct McPurity {
    pub estimate: Estimate,
    pub samples: Vec<PuritySample>,
}

/// Operator purity of `U† O U` averaged over the ensemble.
pub fn mc_purity(
    spec: &EnsembleSpec,
    b: &Bipartition,
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<McPurity> {
    if b.n_qubits() != spec.n {
        return Err(Error::QubitMismatch {
            left: spec.n,
            right: b.n_qubits(),
        });
    }
    let o = spec.initial.to_dense()?;
    let samples = map_samples(n, seed, policy, |i, rng: &mut ChaCha8Rng| {
        let (u, _) = sample_ensemble(spec, rng)?;
        let purity = operator_purity(&heisenberg_conjugate(&u, &o)?, b)?;
        Ok(PuritySample {
            sample_index: i,
            purity,
            loe2_bits: -purity.log2(),
        })
    })?;
    let values: Vec<f64> = samples.iter().map(|s| s.purity).collect();
    Ok(McPurity {
        estimate: Estimate::from_samples(&values, seed)?,
        samples,
    })
}

/// Every interval of qubits that is a nonempty proper subset.
pub fn contiguous_cuts(n: usize) -> Result<Vec<Bipartition>> {
    let mut out = Vec::new();
    for start in 0..n {
        for end in start + 1..=n {
            if end - start < n {
                out.push(Bipartition::new(n, &(start..end).collect::<Vec<_>>())?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyRow {
    pub sample_index: usize,
    pub cut: Vec<usize>,
    pub alpha: String,
    pub loe: f64,
    pub ose: f64,
    pub nu: u32,
    pub tau: Option<usize>,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyReport {
    pub rows: Vec<HierarchyRow>,
    pub violations: usize,
    pub n_samples: usize,
}

/// Checks `E ≤ M ≤ ν ≤ τ` for one unitary over every cut and Rényi index.
pub fn hierarchy_rows(
    sample_index: usize,
    u: &DenseOperator,
    tau: Option<usize>,
    initial: &PauliString,
    cuts: &[Bipartition],
    alphas: &[RenyiIndex],
) -> Result<Vec<HierarchyRow>> {
    if u.n_qubits() > HIERARCHY_LIMIT {
        return Err(Error::TooManyQubits {
            what: "hierarchy check",
            n: u.n_qubits(),
            limit: HIERARCHY_LIMIT,
        });
    }
    let nu = unitary_nullity(u, NULLITY_EPS)?.nu;
    let o_u = heisenberg_conjugate(u, &initial.to_dense()?)?;
    let mut rows = Vec::with_capacity(cuts.len() * alphas.len());
    for &alpha in alphas {
        let m = ose(&o_u, alpha)?;
        for cut in cuts {
            let e = loe(&o_u, cut, alpha)?;
            let mut violated = e > m + HIERARCHY_SLACK || m > nu as f64 + HIERARCHY_SLACK;
            if let Some(t) = tau {
                violated |= nu as usize > t;
            }
            rows.push(HierarchyRow {
                sample_index,
                cut: cut.a_sites(),
                alpha: alpha.to_string(),
                loe: e,
                ose: m,
                nu,
                tau,
                violated,
            });
        }
    }
    Ok(rows)
}

fn collect(rows: Vec<Vec<HierarchyRow>>) -> HierarchyReport {
    let n_samples = rows.len();
    let rows: Vec<HierarchyRow> = rows.into_iter().flatten().collect();
    let violations = rows.iter().filter(|r| r.violated).count();
    HierarchyReport {
        rows,
        violations,
        n_samples,
    }
}

/// Hierarchy check over `n` ensemble samples and all contiguous cuts.
pub fn verify_hierarchy(
    spec: &EnsembleSpec,
    n: usize,
    alphas: &[RenyiIndex],
    seed: u64,
    policy: ExecPolicy,
) -> Result<HierarchyReport> {
    if spec.n > HIERARCHY_LIMIT {
        return Err(Error::TooManyQubits {
            what: "hierarchy check",
            n: spec.n,
            limit: HIERARCHY_LIMIT,
        });
    }
    let cuts = contiguous_cuts(spec.n)?;
    let rows = map_samples(n, seed, policy, |i, rng: &mut ChaCha8Rng| {
        let (u, meta) = sample_ensemble(spec, rng)?;
        hierarchy_rows(i, &u, meta.tau, &spec.initial, &cuts, alphas)
    })?;
    Ok(collect(rows))
}

/// `count` random Clifford+T circuits. Circuit `i` acts on
/// `qubits[i % qubits.len()]` qubits, has `n_clifford` Clifford gates and a
/// T-count drawn uniformly from `0..=max_t`, all from generator `i` of `seed`.
pub fn random_clifford_t_circuits(
    qubits: &[usize],
    count: usize,
    n_clifford: usize,
    max_t: usize,
    seed: u64,
) -> Result<Vec<Circuit>> {
    if qubits.is_empty() {
        return Err(Error::OutOfRange("no qubit counts given".into()));
    }
    (0..count)
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let n_t = rng.random_range(0..=max_t);
            Circuit::random_clifford_t(qubits[i % qubits.len()], n_clifford, n_t, &mut rng)
        })
        .collect()
}

/// Hierarchy check over explicit Clifford+T circuits. The initial operator
/// is `Z` on qubit 0 of each circuit.
pub fn verify_hierarchy_circuits(
    circuits: &[Circuit],
    alphas: &[RenyiIndex],
    policy: ExecPolicy,
) -> Result<HierarchyReport> {
    let rows = map_samples(circuits.len(), 0, policy, |i, _: &mut ChaCha8Rng| {
        let c = &circuits[i];
        let n = c.n_qubits();
        let initial = PauliString::single(n, 0, PauliLetter::Z)?;
        hierarchy_rows(
            i,
            &c.to_dense()?,
            Some(t_count(c)?),
            &initial,
            &contiguous_cuts(n)?,
            alphas,
        )
    })?;
    Ok(collect(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli_transform;

    #[test]
    fn clifford_samples_map_paulis_to_paulis() {
        let spec = EnsembleSpec::new(EnsembleKind::Clifford, 3).unwrap();
        let mut rng = sample_rng(1, 0);
        for _ in 0..20 {
            let (u, meta) = sample_ensemble(&spec, &mut rng).unwrap();
            assert_eq!(meta.tau, Some(0));
            let o = heisenberg_conjugate(&u, &spec.initial().to_dense().unwrap()).unwrap();
            let support = pauli_transform(&o)
                .weights()
                .iter()
                .filter(|w| **w > 1e-12)
                .count();
            assert_eq!(support, 1);
        }
    }

    #[test]
    fn clifford_purity_is_one() {
        let spec = EnsembleSpec::new(EnsembleKind::Clifford, 4).unwrap();
        let b = Bipartition::prefix(4, 2).unwrap();
        let r = mc_purity(&spec, &b, 50, 3, ExecPolicy::Sequential).unwrap();
        assert!((r.estimate.mean - 1.0).abs() < 1e-12);
        assert!(r.estimate.std_error < 1e-12);
    }

    #[test]
    fn single_t_nullity_at_most_one() {
        let spec = EnsembleSpec::new(EnsembleKind::TDoped { tau: 1 }, 3).unwrap();
        let mut rng = sample_rng(9, 0);
        for _ in 0..10 {
            let (u, _) = sample_ensemble(&spec, &mut rng).unwrap();
            assert!(unitary_nullity(&u, NULLITY_EPS).unwrap().nu <= 1);
        }
    }

    #[test]
    fn cuts_are_intervals() {
        let cuts = contiguous_cuts(3).unwrap();
        let sites: Vec<Vec<usize>> = cuts.iter().map(|c| c.a_sites()).collect();
        assert_eq!(
            sites,
            vec![vec![0], vec![0, 1], vec![1], vec![1, 2], vec![2]]
        );
    }

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::new(EnsembleKind::NuCompressible { ell: 5 }, 4).is_err());
        let spec = EnsembleSpec::new(EnsembleKind::Haar, 2).unwrap();
        assert!(spec.clone().with_t_site(2).is_err());
        assert!(spec.with_initial(PauliString::identity(2)).is_err());
    }
}
