use std::collections::BTreeMap;

use opspace_core::averages::{exact_purity, loe_lower_bounds, BoundKind, Dims, ExactEnsemble};
use opspace_core::circuit::{t_count, Circuit};
use opspace_core::ensembles::{
    mc_purity, random_clifford_t_circuits, verify_hierarchy, verify_hierarchy_circuits,
    EnsembleKind, EnsembleSpec, HierarchyReport,
};
use opspace_core::exec::ExecPolicy;
use opspace_core::monotones::{
    clifford_nullity, loe, loe_pauli, ose, ose_pauli, unitary_nullity, Bipartition, NullityResult,
    RenyiIndex, NULLITY_EPS, NULLITY_LIMIT,
};
use opspace_core::pauli::{PauliLetter, PauliString};
use opspace_core::sym4::{Perm4, IRREP_LABELS};
use opspace_core::weingarten::{tables, WgSector};
use opspace_core::{dense, selftest, Error};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    BackendChoice, Common, EnsembleArgs, EnsembleName, ExactArgs, Format, HierarchyArgs, McArgs,
    MonotonesArgs, WeingartenArgs, WeingartenKind,
};
use crate::output::{fmt_f64, Header};

#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("serializing output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("writing CSV: {e}"))
    }
}

/// A finished document and whether its checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn config<T: Serialize>(
    args: &T,
    common: &Common,
    format: Format,
    resolved: Value,
) -> Result<Value, Failure> {
    let mut v = json!({ "args": serde_json::to_value(args)?, "resolved": resolved });
    v["format"] = serde_json::to_value(format)?;
    v["deterministic"] = Value::Bool(common.deterministic);
    Ok(v)
}

fn policy(common: &Common) -> ExecPolicy {
    if common.sequential {
        ExecPolicy::Sequential
    } else {
        ExecPolicy::Parallel
    }
}

fn default_cut(n: usize, cut: &Option<Vec<usize>>) -> Result<Bipartition, Failure> {
    Ok(match cut {
        Some(sites) => Bipartition::new(n, sites)?,
        None => Bipartition::prefix(n, (n / 2).max(1))?,
    })
}

fn initial_pauli(n: usize, text: &Option<String>) -> Result<PauliString, Failure> {
    match text {
        None => Ok(PauliString::single(n, 0, PauliLetter::Z)?),
        Some(t) => {
            let p: PauliString = t.parse()?;
            if p.n_qubits() != n {
                return Err(usage(format!(
                    "initial Pauli {t} has {} qubits, expected {n}",
                    p.n_qubits()
                )));
            }
            Ok(p)
        }
    }
}

fn block_size(a: &EnsembleArgs) -> Result<usize, Failure> {
    a.ell
        .or(a.nu.map(|v| v.div_ceil(2)))
        .ok_or_else(|| usage("the nu ensemble needs --ell or --nu"))
}

fn t_count_arg(a: &EnsembleArgs) -> Result<usize, Failure> {
    a.tau
        .ok_or_else(|| usage("the tdoped ensemble needs --tau"))
}

fn ensemble_kind(a: &EnsembleArgs) -> Result<EnsembleKind, Failure> {
    Ok(match a.ensemble {
        EnsembleName::Haar => EnsembleKind::Haar,
        EnsembleName::Clifford => EnsembleKind::Clifford,
        EnsembleName::Nu => EnsembleKind::NuCompressible {
            ell: block_size(a)?,
        },
        EnsembleName::Tdoped => EnsembleKind::TDoped {
            tau: t_count_arg(a)?,
        },
        EnsembleName::RandomCircuits => {
            return Err(usage(
                "random-circuits is only available for verify-hierarchy",
            ));
        }
    })
}

fn alpha_map(
    alphas: &[RenyiIndex],
    f: impl Fn(RenyiIndex) -> Result<f64, Failure>,
) -> Result<BTreeMap<String, f64>, Failure> {
    alphas.iter().map(|&a| Ok((a.to_string(), f(a)?))).collect()
}

#[derive(Serialize)]
struct MonotonesResult {
    path: &'static str,
    loe: Option<BTreeMap<String, f64>>,
    ose: BTreeMap<String, f64>,
    nullity: Option<NullityResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nullity_warning: Option<String>,
    t_count: Option<usize>,
}

pub fn monotones(args: &MonotonesArgs, common: &Common) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(&args.circuit)
        .map_err(|e| usage(format!("reading {}: {e}", args.circuit.display())))?;
    let circuit = Circuit::from_json(&text)
        .map_err(|e| usage(format!("circuit {}: {e}", args.circuit.display())))?;
    let n = circuit.n_qubits();
    let initial = initial_pauli(n, &args.initial)?;
    let cut = if n > 1 {
        Some(default_cut(n, &args.cut)?)
    } else {
        None
    };
    let tau = t_count(&circuit).ok();

    let result = if circuit.is_clifford() {
        let tableau = circuit.to_tableau()?;
        let image = tableau.conjugate(&initial)?;
        MonotonesResult {
            path: "tableau",
            loe: match &cut {
                Some(b) => Some(alpha_map(&args.alphas, |a| Ok(loe_pauli(&image, b, a)?))?),
                None => None,
            },
            ose: alpha_map(&args.alphas, |a| Ok(ose_pauli(&image, a)))?,
            nullity: Some(clifford_nullity(&tableau)),
            nullity_warning: None,
            t_count: tau,
        }
    } else {
        let u = circuit.to_dense()?;
        let o_u = dense::heisenberg_conjugate(&u, &initial.to_dense()?)?;
        let (nullity, warning) = if n <= NULLITY_LIMIT {
            match unitary_nullity(&u, NULLITY_EPS) {
                Ok(r) => (Some(r), None),
                Err(e @ Error::StabilizerCountNotPowerOfTwo { .. }) => {
                    log::warn!("{e}");
                    (None, Some(e.to_string()))
                }
                Err(e) => return Err(e.into()),
            }
        } else {
            (
                None,
                Some(format!(
                    "nullity is only computed up to {NULLITY_LIMIT} qubits"
                )),
            )
        };
        MonotonesResult {
            path: "dense",
            loe: match &cut {
                Some(b) => Some(alpha_map(&args.alphas, |a| Ok(loe(&o_u, b, a)?))?),
                None => None,
            },
            ose: alpha_map(&args.alphas, |a| Ok(ose(&o_u, a)?))?,
            nullity,
            nullity_warning: warning,
            t_count: tau,
        }
    };

    let format = common.format.unwrap_or(Format::Json);
    let resolved = json!({
        "n_qubits": n,
        "initial": initial.to_string(),
        "cut": cut.as_ref().map(|b| b.a_sites()),
    });
    let header = Header::new(
        "monotones",
        config(args, common, format, resolved)?,
        common.deterministic,
    );
    let text = match format {
        Format::Json => header.json_document(&result)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for a in &args.alphas {
                let key = a.to_string();
                let loe_v = result
                    .loe
                    .as_ref()
                    .map(|m| fmt_f64(m[&key]))
                    .unwrap_or_default();
                rows.push(vec![key.clone(), loe_v, fmt_f64(result.ose[&key])]);
            }
            let trailer = vec![
                format!(
                    "nullity: {}",
                    result
                        .nullity
                        .map(|r| r.nu.to_string())
                        .unwrap_or_else(|| "null".into())
                ),
                format!(
                    "t_count: {}",
                    result
                        .t_count
                        .map(|t| t.to_string())
                        .unwrap_or_else(|| "null".into())
                ),
            ];
            header.csv_document(&["alpha", "loe", "ose"], &rows, &trailer)?
        }
    };
    Ok(Outcome { text, passed: true })
}

fn dims_for(n: usize, d_a: Option<u64>) -> Result<Dims, Failure> {
    let n = u32::try_from(n).map_err(|_| usage("qubit count too large"))?;
    match d_a {
        None => Ok(Dims::half_cut(n)?),
        Some(d) if d.is_power_of_two() => Ok(Dims::new(n, d.trailing_zeros())?),
        Some(d) => Err(usage(format!("--dA {d} is not a power of two"))),
    }
}

pub fn exact(args: &ExactArgs, common: &Common) -> Result<Outcome, Failure> {
    let e = &args.ensemble;
    let dims = dims_for(e.n, args.d_a)?;
    let ens = match e.ensemble {
        EnsembleName::Haar => ExactEnsemble::Haar,
        EnsembleName::Nu => ExactEnsemble::NuCompressible(block_size(e)? as u32),
        EnsembleName::Tdoped => ExactEnsemble::TDoped(t_count_arg(e)? as u32),
        other => {
            return Err(usage(format!(
                "no exact evaluator for the {other:?} ensemble"
            )))
        }
    };
    let (closed, sum) = match args.backend {
        BackendChoice::Closed => (true, false),
        BackendChoice::Sum => (false, true),
        BackendChoice::Both => (true, true),
    };
    let report = exact_purity(ens, &dims, closed, sum)?;
    let bounds = if args.bounds {
        match ens {
            ExactEnsemble::Haar => None,
            ExactEnsemble::NuCompressible(ell) => {
                let nu = e.nu.unwrap_or(2 * ell as usize) as u32;
                Some(loe_lower_bounds(BoundKind::Nu, nu, dims.n)?)
            }
            ExactEnsemble::TDoped(tau) => Some(loe_lower_bounds(BoundKind::Tau, tau, dims.n)?),
        }
    } else {
        None
    };

    let format = common.format.unwrap_or(Format::Json);
    let resolved = json!({ "D": dims.dim(), "dA": dims.dim_a(), "ensemble": format!("{ens:?}") });
    let header = Header::new(
        "exact-purity",
        config(args, common, format, resolved)?,
        common.deterministic,
    );
    let text = match format {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            if let Some(b) = &bounds {
                v["bounds"] = serde_json::to_value(b)?;
            }
            header.json_document(&v)?
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
            let row = vec![opt(report.closed), opt(report.sum), opt(report.diff)];
            header.csv_document(&["closed", "sum", "diff"], &[row], &[])?
        }
    };
    Ok(Outcome { text, passed: true })
}

pub fn mc(args: &McArgs, common: &Common) -> Result<Outcome, Failure> {
    let e = &args.ensemble;
    let spec = EnsembleSpec::new(ensemble_kind(e)?, e.n)?
        .with_initial(initial_pauli(e.n, &args.initial)?)?
        .with_t_site(args.t_site)?;
    let cut = default_cut(e.n, &args.cut)?;
    let run = mc_purity(&spec, &cut, args.samples, args.seed, policy(common))?;

    let format = common.format.unwrap_or(Format::Csv);
    let resolved = json!({
        "kind": spec.kind(),
        "initial": spec.initial().to_string(),
        "cut": cut.a_sites(),
    });
    let header = Header::new(
        "mc-purity",
        config(args, common, format, resolved)?,
        common.deterministic,
    );
    let text = match format {
        Format::Json => header.json_document(&run.estimate)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = run
                .samples
                .iter()
                .map(|s| {
                    vec![
                        s.sample_index.to_string(),
                        fmt_f64(s.purity),
                        fmt_f64(s.loe2_bits),
                    ]
                })
                .collect();
            let trailer = vec![format!(
                "estimate: {}",
                crate::output::to_json(&run.estimate)?
            )];
            header.csv_document(&["sample_index", "purity", "loe2_bits"], &rows, &trailer)?
        }
    };
    Ok(Outcome { text, passed: true })
}

#[derive(Serialize)]
struct HierarchySummary<'a> {
    n_samples: usize,
    violations: usize,
    max_loe_minus_ose: f64,
    max_ose_minus_nu: f64,
    rows: &'a [opspace_core::ensembles::HierarchyRow],
}

pub fn hierarchy(args: &HierarchyArgs, common: &Common) -> Result<Outcome, Failure> {
    let e = &args.ensemble;
    let report: HierarchyReport = match e.ensemble {
        EnsembleName::RandomCircuits => {
            if args.initial.is_some() {
                return Err(usage("random-circuits always starts from Z on qubit 0"));
            }
            let circuits = random_clifford_t_circuits(
                &[e.n],
                args.samples,
                args.gates,
                args.max_tau,
                args.seed,
            )?;
            verify_hierarchy_circuits(&circuits, &args.alphas, policy(common))?
        }
        _ => {
            let spec = EnsembleSpec::new(ensemble_kind(e)?, e.n)?
                .with_initial(initial_pauli(e.n, &args.initial)?)?;
            verify_hierarchy(&spec, args.samples, &args.alphas, args.seed, policy(common))?
        }
    };

    let format = common.format.unwrap_or(Format::Json);
    let header = Header::new(
        "verify-hierarchy",
        config(args, common, format, Value::Null)?,
        common.deterministic,
    );
    let max_of = |f: &dyn Fn(&opspace_core::ensembles::HierarchyRow) -> f64| {
        report.rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max)
    };
    let text = match format {
        Format::Json => header.json_document(&HierarchySummary {
            n_samples: report.n_samples,
            violations: report.violations,
            max_loe_minus_ose: max_of(&|r| r.loe - r.ose),
            max_ose_minus_nu: max_of(&|r| r.ose - r.nu as f64),
            rows: &report.rows,
        })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    let cut: Vec<String> = r.cut.iter().map(|s| s.to_string()).collect();
                    vec![
                        r.sample_index.to_string(),
                        cut.join(" "),
                        r.alpha.clone(),
                        fmt_f64(r.loe),
                        fmt_f64(r.ose),
                        r.nu.to_string(),
                        r.tau.map(|t| t.to_string()).unwrap_or_default(),
                        r.violated.to_string(),
                    ]
                })
                .collect();
            let trailer = vec![format!("violations: {}", report.violations)];
            header.csv_document(
                &[
                    "sample_index",
                    "cut",
                    "alpha",
                    "loe",
                    "ose",
                    "nu",
                    "tau",
                    "violated",
                ],
                &rows,
                &trailer,
            )?
        }
    };
    Ok(Outcome {
        text,
        passed: report.violations == 0,
    })
}

fn sector_json(w: &WgSector) -> Value {
    let labels: Vec<String> = Perm4::all().iter().map(|p| p.to_string()).collect();
    let matrix: Vec<Vec<f64>> = w.to_f64().chunks(24).map(|r| r.to_vec()).collect();
    json!({
        "sector": format!("{:?}", w.sector).to_lowercase(),
        "irreps": IRREP_LABELS,
        "d_lambda": w.d_lambda.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "class_values": w.class_values.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "labels": labels,
        "matrix": matrix,
    })
}

pub fn weingarten(args: &WeingartenArgs, common: &Common) -> Result<Outcome, Failure> {
    let t = tables(args.d)?;
    let sectors: Vec<&WgSector> = match args.kind {
        WeingartenKind::Haar => vec![&t.haar],
        WeingartenKind::Clifford => vec![t.plus()?, t.minus()?],
    };
    let format = common.format.unwrap_or(Format::Csv);
    let header = Header::new(
        "weingarten",
        config(args, common, format, Value::Null)?,
        common.deterministic,
    );
    let text = match format {
        Format::Json => {
            header.json_document(&sectors.iter().map(|w| sector_json(w)).collect::<Vec<_>>())?
        }
        Format::Csv => {
            let labels: Vec<String> = Perm4::all().iter().map(|p| p.to_string()).collect();
            let mut columns = vec!["sector", "perm"];
            columns.extend(labels.iter().map(String::as_str));
            let mut rows = Vec::new();
            for w in &sectors {
                let name = format!("{:?}", w.sector).to_lowercase();
                let values = w.to_f64();
                for (i, label) in labels.iter().enumerate() {
                    let mut row = vec![name.clone(), label.clone()];
                    row.extend(values[i * 24..(i + 1) * 24].iter().map(|v| fmt_f64(*v)));
                    rows.push(row);
                }
            }
            header.csv_document(&columns, &rows, &[])?
        }
    };
    Ok(Outcome { text, passed: true })
}

pub fn selftest(common: &Common) -> Result<Outcome, Failure> {
    let report = selftest::run_all()?;
    let format = common.format.unwrap_or(Format::Json);
    let header = Header::new(
        "selftest",
        json!({ "format": format, "deterministic": common.deterministic }),
        common.deterministic,
    );
    let text = match format {
        Format::Json => header.json_document(&report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), c.passed.to_string(), fmt_f64(c.max_error)])
                .collect();
            header.csv_document(&["check", "passed", "max_error"], &rows, &[])?
        }
    };
    Ok(Outcome {
        text,
        passed: report.passed,
    })
}
