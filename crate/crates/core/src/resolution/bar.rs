//! Ext dimensions from the normalized bar complex.
//!
//! `dim Ext^n(k, k) = dim Tor_n(k, k)`, and `Tor` is the homology of
//! `J^{⊗n}` with `∂(a_1 ⊗ … ⊗ a_n) = Σ_{i<n} (-1)^i a_1 ⊗ … ⊗ a_i a_{i+1} ⊗ … ⊗ a_n`.
//! Nothing here uses the minimal resolution. Ranks are computed per grade
//! by inserting the image of each basis tensor into a sparse echelon basis,
//! stopping once the rank reaches `dim ker ∂_{n-1}` in that grade.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Grade, PresentedSuperalgebra};
use crate::gf::Fe;
use crate::linalg::SparseEchelon;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BarError {
    #[error("J^⊗{degree} has dimension {dim}, above the budget {budget}")]
    OverBudget { degree: usize, dim: u128, budget: u128 },
}

/// Default cap on `dim J^{⊗(maxdeg+1)}`.
pub const DEFAULT_BUDGET: u128 = 60_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct BarReport {
    pub dims: Vec<usize>,
    /// `dim Tor_n` per grade, for each `n`.
    #[serde(skip)]
    pub by_grade: Vec<BTreeMap<Grade, usize>>,
    pub tensor_dims: Vec<usize>,
}

/// Dimensions of `Ext^n(k, k)` for `n ≤ maxdeg`.
pub fn bar_ext_dims(alg: &PresentedSuperalgebra, maxdeg: usize) -> Result<Vec<usize>, BarError> {
    Ok(bar_report(alg, maxdeg, DEFAULT_BUDGET)?.dims)
}

/// Size of `J^{⊗n}`, the largest space the computation to `maxdeg` builds
/// being `n = maxdeg + 1`.
pub fn bar_tensor_dim(alg: &PresentedSuperalgebra, n: usize) -> u128 {
    ((alg.dim() - 1) as u128).pow(n as u32)
}

struct Level {
    // tensor codes grouped by grade; factor 0 is the least significant digit
    groups: BTreeMap<Grade, Vec<u64>>,
    // position of each code inside its group
    pos: Vec<u32>,
}

fn level_zero(alg: &PresentedSuperalgebra) -> Level {
    let mut groups = BTreeMap::new();
    groups.insert(Grade::zero(alg.grading_rank()), vec![0]);
    Level { groups, pos: vec![0] }
}

// J^{⊗(n+1)} from J^{⊗n}: prepend a factor in the least significant place
fn next_level(alg: &PresentedSuperalgebra, prev: &Level) -> Level {
    let j = (alg.dim() - 1) as u64;
    let mut groups: BTreeMap<Grade, Vec<u64>> = BTreeMap::new();
    for (g, codes) in &prev.groups {
        for a in 0..j {
            let entry = groups.entry(g.add(alg.grade(a as usize + 1))).or_default();
            entry.extend(codes.iter().map(|&c| a + j * c));
        }
    }
    let mut pos = vec![0u32; prev.pos.len() * j as usize];
    for codes in groups.values() {
        for (i, &c) in codes.iter().enumerate() {
            pos[c as usize] = i as u32;
        }
    }
    Level { groups, pos }
}

fn digits(code: u64, n: usize, j: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut c = code;
    for _ in 0..n {
        out.push((c % j) as usize);
        c /= j;
    }
    out
}

fn encode(ds: &[usize], j: u64) -> u64 {
    ds.iter().rev().fold(0, |acc, &d| acc * j + d as u64)
}

/// Ranks of `∂_n : J^{⊗n} → J^{⊗(n-1)}` per grade. The source tensors of a
/// grade are streamed from `J^{⊗(n-1)}` rather than stored; `bounds` holds
/// `dim ker ∂_{n-1}` per grade.
fn boundary_ranks(
    alg: &PresentedSuperalgebra,
    n: usize,
    target: &Level,
    bounds: &BTreeMap<Grade, usize>,
) -> BTreeMap<Grade, usize> {
    let k = alg.field();
    let j = (alg.dim() - 1) as u64;
    let comps: Vec<(&Grade, &Vec<u64>)> = target.groups.iter().collect();
    let ranks = crate::par_map(&comps, |(grade, tcodes)| {
        let bound = bounds.get(*grade).copied().unwrap_or(0);
        if n < 2 || bound == 0 {
            return 0;
        }
        let mut ech = SparseEchelon::new(tcodes.len());
        let last = tcodes.len() as u32 - 1;
        let mut col: Vec<(u32, Fe)> = Vec::new();
        let mut merged = Vec::with_capacity(n - 1);
        for a in 0..j {
            let rest = grade.sub(alg.grade(a as usize + 1));
            let Some(rest_codes) = target.groups.get(&rest) else { continue };
            for &rc in rest_codes {
                let code = a + j * rc;
                let ds = digits(code, n, j);
                col.clear();
                for i in 0..n - 1 {
                    let sign = if i % 2 == 0 { k.neg(Fe::ONE) } else { Fe::ONE };
                    for &(t, c) in alg.product(ds[i] + 1, ds[i + 1] + 1) {
                        merged.clear();
                        merged.extend_from_slice(&ds[..i]);
                        merged.push(t as usize - 1);
                        merged.extend_from_slice(&ds[i + 2..]);
                        // reversed positions: pivots fall on high factor codes, which fills in less
                        let pos = last - target.pos[encode(&merged, j) as usize];
                        col.push((pos, k.mul(sign, c)));
                    }
                }
                col.sort_unstable_by_key(|e| e.0);
                let mut v: Vec<(u32, Fe)> = Vec::with_capacity(col.len());
                for &(p, x) in &col {
                    match v.last_mut() {
                        Some(last) if last.0 == p => last.1 = k.add(last.1, x),
                        _ => v.push((p, x)),
                    }
                }
                v.retain(|e| !e.1.is_zero());
                ech.insert(k, v);
                if ech.rank() == bound {
                    return bound;
                }
            }
        }
        ech.rank()
    });
    comps.into_iter().map(|(g, _)| g.clone()).zip(ranks).collect()
}

/// Full report up to `maxdeg`, refusing tensor spaces above `budget`.
pub fn bar_report(alg: &PresentedSuperalgebra, maxdeg: usize, budget: u128) -> Result<BarReport, BarError> {
    let top = bar_tensor_dim(alg, maxdeg + 1);
    if top > budget {
        return Err(BarError::OverBudget { degree: maxdeg + 1, dim: top, budget });
    }
    let mut levels = vec![level_zero(alg)];
    for _ in 0..maxdeg {
        let next = next_level(alg, levels.last().unwrap());
        levels.push(next);
    }
    // ranks[n] = rank of ∂_n per grade; ∂_0 and ∂_1 vanish
    let mut ranks: Vec<BTreeMap<Grade, usize>> = vec![BTreeMap::new(), BTreeMap::new()];
    for n in 2..=maxdeg + 1 {
        let bounds: BTreeMap<Grade, usize> = levels[n - 1]
            .groups
            .iter()
            .map(|(g, codes)| (g.clone(), codes.len() - ranks[n - 1].get(g).copied().unwrap_or(0)))
            .collect();
        ranks.push(boundary_ranks(alg, n, &levels[n - 1], &bounds));
    }
    let mut by_grade = Vec::new();
    for n in 0..=maxdeg {
        let mut tor = BTreeMap::new();
        for (g, codes) in &levels[n].groups {
            let r_in = ranks[n].get(g).copied().unwrap_or(0);
            let r_out = ranks[n + 1].get(g).copied().unwrap_or(0);
            let t = codes.len() - r_in - r_out;
            if t > 0 {
                tor.insert(g.clone(), t);
            }
        }
        by_grade.push(tor);
    }
    Ok(BarReport {
        dims: by_grade.iter().map(|m| m.values().sum()).collect(),
        by_grade,
        tensor_dims: (0..=maxdeg + 1).map(|n| bar_tensor_dim(alg, n) as usize).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_exterior1, make_exterior2, make_kh, make_semidirect};
    use crate::gf::GaloisField;
    use crate::resolution::minimal_resolution;

    #[test]
    fn exterior_algebras() {
        let k = GaloisField::prime(3).unwrap();
        assert_eq!(bar_ext_dims(&make_exterior1(&k), 5).unwrap(), vec![1; 6]);
        assert_eq!(bar_ext_dims(&make_exterior2(&k), 4).unwrap(), vec![1, 2, 3, 4, 5]);
    }

    // coefficients of 1/(1-t)^e
    fn kunneth(e: usize, len: usize) -> Vec<usize> {
        let mut c = vec![1; len];
        for _ in 1..e {
            for i in 1..len {
                c[i] += c[i - 1];
            }
        }
        c
    }

    #[test]
    fn group_algebra_of_two_factors() {
        // each truncated polynomial factor contributes (1+t)/(1-t^2) = 1/(1-t)
        let k = GaloisField::prime(3).unwrap();
        let a = make_kh(&k, 1, 1, false).unwrap();
        assert_eq!(bar_ext_dims(&a, 3).unwrap(), kunneth(2, 4));
        assert_eq!(kunneth(2, 4), vec![1, 2, 3, 4]);
        let b = make_kh(&k, 2, 1, false).unwrap();
        assert_eq!(bar_ext_dims(&b, 3).unwrap(), kunneth(3, 4));
    }

    #[test]
    fn matches_resolution_by_grade() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        let bar = bar_report(&a, 3, DEFAULT_BUDGET).unwrap();
        let res = minimal_resolution(&a, 3).unwrap();
        for n in 0..=3 {
            let mut counts = BTreeMap::new();
            for g in res.generator_grades(n) {
                *counts.entry(g.clone()).or_insert(0) += 1;
            }
            assert_eq!(counts, bar.by_grade[n]);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        assert!(matches!(bar_report(&a, 4, 1000), Err(BarError::OverBudget { degree: 5, .. })));
    }
}
