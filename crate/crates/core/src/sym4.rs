//! The symmetric group on four replicas.
//!
//! A [`Perm4`] maps replica slot `k` to `map[k]` (0-based). Composition
//! `a.compose(b)` is `a ∘ b`, so `T_a T_b = T_{a∘b}` for the replica
//! permutation operators defined in [`crate::replica`].

use std::fmt;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4 {
    map: [u8; 4],
}

/// Conjugacy classes by cycle type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleClass {
    Identity,
    Transposition,
    DoubleTransposition,
    ThreeCycle,
    FourCycle,
}

impl CycleClass {
    pub const ALL: [CycleClass; 5] = [
        CycleClass::Identity,
        CycleClass::Transposition,
        CycleClass::DoubleTransposition,
        CycleClass::ThreeCycle,
        CycleClass::FourCycle,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn size(self) -> usize {
        CLASS_SIZES[self.index()]
    }
}

pub const CLASS_SIZES: [usize; 5] = [1, 6, 3, 8, 6];

/// Partitions `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.
pub const IRREP_LABELS: [&str; 5] = ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"];
pub const IRREP_DIMS: [i64; 5] = [1, 3, 2, 3, 1];

/// `CHARACTERS[λ][class]`, classes ordered as [`CycleClass::ALL`].
pub const CHARACTERS: [[i64; 5]; 5] = [
    [1, 1, 1, 1, 1],
    [3, 1, -1, 0, -1],
    [2, 0, 2, -1, 0],
    [3, -1, -1, 0, 1],
    [1, -1, 1, 1, -1],
];

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4 { map: [0, 1, 2, 3] };

    pub fn new(map: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &m in &map {
            if m > 3 || seen[m as usize] {
                return None;
            }
            seen[m as usize] = true;
        }
        Some(Self { map })
    }

    /// `(12)(34)` in 1-based cycle notation.
    pub fn pair_swap() -> Self {
        Self { map: [1, 0, 3, 2] }
    }

    /// `(14)(23)` in 1-based cycle notation.
    pub fn outer_swap() -> Self {
        Self { map: [3, 2, 1, 0] }
    }

    pub fn map(&self) -> [u8; 4] {
        self.map
    }

    pub fn apply(&self, k: usize) -> usize {
        self.map[k] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut map = [0u8; 4];
        for (k, slot) in map.iter_mut().enumerate() {
            *slot = self.map[other.map[k] as usize];
        }
        Self { map }
    }

    pub fn inverse(&self) -> Self {
        let mut map = [0u8; 4];
        for k in 0..4 {
            map[self.map[k] as usize] = k as u8;
        }
        Self { map }
    }

    /// Cycle lengths in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for start in 0..4 {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.map[k] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// `#(π)`, the number of cycles including fixed points.
    pub fn n_cycles(&self) -> u32 {
        self.cycle_type().len() as u32
    }

    /// Whether every cycle has even length.
    pub fn is_even_only(&self) -> bool {
        self.cycle_type().iter().all(|c| c % 2 == 0)
    }

    /// `0` when all cycles are even, `1` otherwise.
    pub fn delta(&self) -> u32 {
        u32::from(!self.is_even_only())
    }

    pub fn class(&self) -> CycleClass {
        match self.cycle_type().as_slice() {
            [1, 1, 1, 1] => CycleClass::Identity,
            [2, 1, 1] => CycleClass::Transposition,
            [2, 2] => CycleClass::DoubleTransposition,
            [3, 1] => CycleClass::ThreeCycle,
            [4] => CycleClass::FourCycle,
            other => unreachable!("cycle type {other:?}"),
        }
    }

    /// All 24 elements in lexicographic order of their images.
    pub fn all() -> &'static [Perm4; 24] {
        static ALL: OnceLock<[Perm4; 24]> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = [Perm4::IDENTITY; 24];
            let mut i = 0;
            for a in 0..4u8 {
                for b in 0..4u8 {
                    for c in 0..4u8 {
                        for d in 0..4u8 {
                            if let Some(p) = Perm4::new([a, b, c, d]) {
                                out[i] = p;
                                i += 1;
                            }
                        }
                    }
                }
            }
            out
        })
    }

    /// Position in [`Perm4::all`].
    pub fn index(&self) -> usize {
        let mut rank = 0;
        let mut used = [false; 4];
        for k in 0..4 {
            let m = self.map[k] as usize;
            let smaller = (0..m).filter(|&j| !used[j]).count();
            rank += smaller * [6, 2, 1, 1][k];
            used[m] = true;
        }
        rank
    }
}

impl fmt::Display for Perm4 {
    /// 1-based cycle notation without fixed points, `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; 4];
        let mut any = false;
        for start in 0..4 {
            if seen[start] || self.map[start] as usize == start {
                seen[start] = true;
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                write!(f, "{}", k + 1)?;
                k = self.map[k] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "e")?;
        }
        Ok(())
    }
}

/// Group data shared by every table computation.
pub struct S4Tables {
    pub perms: [Perm4; 24],
    /// `mul[a][b]` is the index of `perms[a] ∘ perms[b]`.
    pub mul: [[usize; 24]; 24],
    pub inv: [usize; 24],
    pub class: [CycleClass; 24],
    pub cycles: [u32; 24],
    pub delta: [u32; 24],
}

pub fn s4_tables() -> &'static S4Tables {
    static TABLES: OnceLock<S4Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let perms = *Perm4::all();
        let mut mul = [[0usize; 24]; 24];
        for a in 0..24 {
            for b in 0..24 {
                mul[a][b] = perms[a].compose(&perms[b]).index();
            }
        }
        S4Tables {
            perms,
            mul,
            inv: std::array::from_fn(|i| perms[i].inverse().index()),
            class: std::array::from_fn(|i| perms[i].class()),
            cycles: std::array::from_fn(|i| perms[i].n_cycles()),
            delta: std::array::from_fn(|i| perms[i].delta()),
        }
    })
}

/// `χ^λ(π)` for irrep index `lambda`.
pub fn character(lambda: usize, p: &Perm4) -> i64 {
    CHARACTERS[lambda][p.class().index()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_basics() {
        let all = Perm4::all();
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
        }
        assert_eq!(Perm4::IDENTITY.n_cycles(), 4);
        assert_eq!(Perm4::IDENTITY.delta(), 1);
        assert_eq!(Perm4::pair_swap().n_cycles(), 2);
        assert_eq!(Perm4::pair_swap().delta(), 0);
        assert_eq!(all.iter().filter(|p| p.is_even_only()).count(), 9);
        let mut sizes = [0; 5];
        for p in all {
            sizes[p.class().index()] += 1;
        }
        assert_eq!(sizes, CLASS_SIZES);
    }

    #[test]
    fn composition_convention() {
        let a = Perm4::new([1, 2, 0, 3]).unwrap();
        let b = Perm4::new([0, 1, 3, 2]).unwrap();
        let ab = a.compose(&b);
        for k in 0..4 {
            assert_eq!(ab.apply(k), a.apply(b.apply(k)));
        }
    }

    #[test]
    fn labels() {
        assert_eq!(Perm4::IDENTITY.to_string(), "e");
        assert_eq!(Perm4::pair_swap().to_string(), "(12)(34)");
        assert_eq!(Perm4::outer_swap().to_string(), "(14)(23)");
        assert_eq!(Perm4::new([1, 2, 3, 0]).unwrap().to_string(), "(1234)");
        assert_eq!(
            Perm4::pair_swap().compose(&Perm4::outer_swap()).to_string(),
            "(13)(24)"
        );
    }

    #[test]
    fn character_orthogonality() {
        for l in 0..5 {
            for m in 0..5 {
                let s: i64 = (0..5)
                    .map(|c| CLASS_SIZES[c] as i64 * CHARACTERS[l][c] * CHARACTERS[m][c])
                    .sum();
                assert_eq!(s, if l == m { 24 } else { 0 });
            }
            assert_eq!(CHARACTERS[l][0], IRREP_DIMS[l]);
        }
        for c1 in 0..5 {
            for c2 in 0..5 {
                let s: i64 = (0..5).map(|l| CHARACTERS[l][c1] * CHARACTERS[l][c2]).sum();
                let expect = if c1 == c2 {
                    24 / CLASS_SIZES[c1] as i64
                } else {
                    0
                };
                assert_eq!(s, expect);
            }
        }
        assert_eq!(IRREP_DIMS.iter().map(|d| d * d).sum::<i64>(), 24);
    }

    #[test]
    fn tables_consistent() {
        let t = s4_tables();
        for a in 0..24 {
            assert_eq!(t.mul[a][t.inv[a]], Perm4::IDENTITY.index());
            assert_eq!(t.cycles[a], t.perms[a].n_cycles());
        }
    }
}
