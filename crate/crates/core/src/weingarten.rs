//! Fourth-moment Weingarten functions, exact over the rationals.
//!
//! For a sector `x` with Gram function `g^x(π) = tr[Λ^x T_π]` the isotypic
//! traces are `D^x_λ = (d_λ/24) Σ_π χ^λ(π) g^x(π)` and the Weingarten
//! function is the class function
//!
//! `w^x(π) = Σ_{λ : D^x_λ ≠ 0} d_λ³ χ^λ(π) / (576 · D^x_λ)`,
//!
//! laid out as the matrix `Wg^x_{πσ} = w^x(π∘σ)`. With this layout
//! `Σ_σ Wg^x_{πσ} g^x(σ∘τ) = δ_{πτ}` whenever every `D^x_λ` is nonzero, and
//! in general the product is the orthogonal projector onto the span of the
//! `Λ^x T_π`. The Haar sector uses `g(π) = d^{#π}`; the two Clifford sectors
//! use `Λ⁺ = D⁻² Σ_P P^{⊗4}` and `Λ⁻ = 1 − Λ⁺`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sym4::{s4_tables, CHARACTERS, IRREP_DIMS};

pub type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    Haar,
    Plus,
    Minus,
}

pub(crate) fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `base^exp` for a possibly negative exponent.
pub(crate) fn q_pow(base: u64, exp: i64) -> Q {
    let b = BigInt::from(base);
    if exp >= 0 {
        Q::from_integer(num_traits::pow(b, exp as usize))
    } else {
        Q::new(BigInt::one(), num_traits::pow(b, (-exp) as usize))
    }
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `tr[Λ^x T_π]` as a function of the permutation index.
pub fn gram_function(d: u64, sector: Sector) -> [Q; 24] {
    let t = s4_tables();
    std::array::from_fn(|i| {
        let c = t.cycles[i] as i64;
        let full = q_pow(d, c);
        let plus = q_pow(d, c - 2 * t.delta[i] as i64);
        match sector {
            Sector::Haar => full,
            Sector::Plus => plus,
            Sector::Minus => full - plus,
        }
    })
}

/// `D^x_λ` for the five irreps.
pub fn d_lambda(d: u64, sector: Sector) -> [Q; 5] {
    let g = gram_function(d, sector);
    let t = s4_tables();
    std::array::from_fn(|l| {
        let s: Q = (0..24)
            .map(|i| g[i].clone() * q_int(CHARACTERS[l][t.class[i].index()]))
            .fold(Q::zero(), |a, b| a + b);
        s * Q::new(BigInt::from(IRREP_DIMS[l]), BigInt::from(24))
    })
}

/// One sector's Weingarten data.
#[derive(Clone, Debug)]
pub struct WgSector {
    pub sector: Sector,
    pub d_lambda: [Q; 5],
    /// `w^x` per conjugacy class.
    pub class_values: [Q; 5],
    /// Row-major 24×24 matrix.
    pub matrix: Vec<Q>,
}

impl WgSector {
    fn build(d: u64, sector: Sector) -> Self {
        let dl = d_lambda(d, sector);
        let class_values: [Q; 5] = std::array::from_fn(|c| {
            let mut s = Q::zero();
            for l in 0..5 {
                if dl[l].is_zero() {
                    continue;
                }
                let dim = IRREP_DIMS[l];
                s += q_int(dim * dim * dim * CHARACTERS[l][c]) / (dl[l].clone() * q_int(576));
            }
            s
        });
        let t = s4_tables();
        let matrix = (0..576)
            .map(|k| class_values[t.class[t.mul[k / 24][k % 24]].index()].clone())
            .collect();
        Self {
            sector,
            d_lambda: dl,
            class_values,
            matrix,
        }
    }

    pub fn get(&self, pi: usize, sigma: usize) -> &Q {
        &self.matrix[pi * 24 + sigma]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.matrix.iter().map(q_to_f64).collect()
    }
}

/// Haar and (for qubit dimensions) Clifford tables at one dimension.
#[derive(Debug)]
pub struct WeingartenTables {
    pub d: u64,
    pub haar: WgSector,
    pub clifford: Option<(WgSector, WgSector)>,
}

impl WeingartenTables {
    pub fn plus(&self) -> Result<&WgSector> {
        self.clifford
            .as_ref()
            .map(|c| &c.0)
            .ok_or_else(|| not_qubit(self.d))
    }

    pub fn minus(&self) -> Result<&WgSector> {
        self.clifford
            .as_ref()
            .map(|c| &c.1)
            .ok_or_else(|| not_qubit(self.d))
    }

    pub fn sector(&self, s: Sector) -> Result<&WgSector> {
        match s {
            Sector::Haar => Ok(&self.haar),
            Sector::Plus => self.plus(),
            Sector::Minus => self.minus(),
        }
    }
}

fn not_qubit(d: u64) -> Error {
    Error::OutOfRange(format!(
        "Clifford Weingarten functions need a power-of-two dimension, got {d}"
    ))
}

/// Tables for dimension `d ≥ 2`, computed once and shared.
pub fn tables(d: u64) -> Result<Arc<WeingartenTables>> {
    if d < 2 {
        return Err(Error::OutOfRange(format!(
            "Weingarten dimension must be at least 2, got {d}"
        )));
    }
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<WeingartenTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("cache lock").get(&d) {
        return Ok(t.clone());
    }
    let built = Arc::new(WeingartenTables {
        d,
        haar: WgSector::build(d, Sector::Haar),
        clifford: d.is_power_of_two().then(|| {
            (
                WgSector::build(d, Sector::Plus),
                WgSector::build(d, Sector::Minus),
            )
        }),
    });
    let mut w = cache.write().expect("cache lock");
    Ok(w.entry(d).or_insert(built).clone())
}

pub fn wg_haar(d: u64) -> Result<Vec<Q>> {
    Ok(tables(d)?.haar.matrix.clone())
}

pub fn wg_clifford(d: u64) -> Result<(Vec<Q>, Vec<Q>)> {
    let t = tables(d)?;
    Ok((t.plus()?.matrix.clone(), t.minus()?.matrix.clone()))
}

/// `Σ_σ Wg_{πσ} g(σ∘τ)` for every `π, τ`.
pub fn gram_product(d: u64, sector: Sector) -> Result<Vec<Q>> {
    let t = tables(d)?;
    let wg = t.sector(sector)?;
    let g = gram_function(d, sector);
    let s = s4_tables();
    let mut out = vec![Q::zero(); 576];
    for pi in 0..24 {
        for tau in 0..24 {
            out[pi * 24 + tau] = (0..24)
                .map(|sg| wg.get(pi, sg).clone() * g[s.mul[sg][tau]].clone())
                .fold(Q::zero(), |a, b| a + b);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_identity(m: &[Q]) -> bool {
        (0..576).all(|k| {
            m[k] == if k / 24 == k % 24 {
                Q::one()
            } else {
                Q::zero()
            }
        })
    }

    #[test]
    fn isotypic_traces_sum_to_trace() {
        for d in [2u64, 3, 4, 8, 16] {
            let total: Q = d_lambda(d, Sector::Haar)
                .iter()
                .cloned()
                .fold(Q::zero(), |a, b| a + b);
            assert_eq!(total, q_pow(d, 4));
            if d.is_power_of_two() {
                let plus: Q = d_lambda(d, Sector::Plus)
                    .iter()
                    .cloned()
                    .fold(Q::zero(), |a, b| a + b);
                assert_eq!(plus, q_pow(d, 2));
            }
        }
    }

    #[test]
    fn two_dimensional_degeneracy() {
        let plus = d_lambda(2, Sector::Plus);
        assert_eq!(plus, [q_int(2), q_int(0), q_int(2), q_int(0), q_int(0)]);
        assert!(d_lambda(2, Sector::Haar).iter().any(Zero::is_zero));
        assert!(d_lambda(3, Sector::Haar).iter().any(Zero::is_zero));
        assert!(d_lambda(4, Sector::Haar).iter().all(|v| !v.is_zero()));
    }

    #[test]
    fn gram_inverse_exact() {
        for d in [4u64, 5, 8, 16, 1 << 20] {
            assert!(
                is_identity(&gram_product(d, Sector::Haar).unwrap()),
                "haar d={d}"
            );
        }
        for d in [8u64, 16, 64] {
            assert!(
                is_identity(&gram_product(d, Sector::Minus).unwrap()),
                "minus d={d}"
            );
        }
    }

    #[test]
    fn plus_sector_always_degenerate() {
        // Λ⁺ has no weight on the (3,1) and (2,1,1) isotypic components.
        for d in [2u64, 8, 1 << 20] {
            let plus = d_lambda(d, Sector::Plus);
            assert!(plus[1].is_zero() && plus[3].is_zero());
            assert!(!plus[0].is_zero() && !plus[2].is_zero());
        }
    }

    #[test]
    fn degenerate_product_is_projector() {
        let cases = [
            (2u64, Sector::Haar),
            (3, Sector::Haar),
            (2, Sector::Plus),
            (2, Sector::Minus),
            (4, Sector::Plus),
            (16, Sector::Plus),
        ];
        for (d, sector) in cases {
            let m = gram_product(d, sector).unwrap();
            let mut sq = vec![Q::zero(); 576];
            for i in 0..24 {
                for j in 0..24 {
                    sq[i * 24 + j] = (0..24)
                        .map(|k| m[i * 24 + k].clone() * m[k * 24 + j].clone())
                        .fold(Q::zero(), |a, b| a + b);
                }
            }
            assert_eq!(sq, m, "d={d} {sector:?}");
        }
    }

    #[test]
    fn class_function_property() {
        let t = tables(8).unwrap();
        let s = s4_tables();
        for a in 0..24 {
            for b in 0..24 {
                // conjugating both indices by the same element leaves entries fixed
                for g in [3usize, 7, 17] {
                    let ca = s.mul[s.mul[g][a]][s.inv[g]];
                    let cb = s.mul[s.mul[g][b]][s.inv[g]];
                    assert_eq!(t.haar.get(a, b), t.haar.get(ca, cb));
                }
                assert_eq!(t.haar.get(a, b), t.haar.get(b, a));
            }
        }
    }

    #[test]
    fn haar_identity_entry_large_d() {
        // w(e) = 1/d⁴ + O(d⁻⁶)
        let t = tables(1 << 10).unwrap();
        let e = q_to_f64(t.haar.get(0, 0)) * 2f64.powi(40);
        assert!((e - 1.0).abs() < 1e-5);
    }

    #[test]
    fn clifford_tables_need_qubits() {
        assert!(tables(6).unwrap().plus().is_err());
        assert!(tables(1).is_err());
    }
}
