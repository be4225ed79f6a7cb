//! The bigraded ring `Ext^{*,*}(k, k)` read off a minimal resolution.
//!
//! Because differentials have entries in `J`, every functional on the
//! generators of `F_n` is a cocycle and no two are cohomologous, so
//! `Ext^n = k^{b_n}`. The internal parity of a dual generator is the parity
//! of the generator. Cup products compose with lifted chain maps: a class
//! `b` of parity `j` lifts to `f_k : F_{n_b + k} → F_k`, a parity-`j` map of
//! supermodules (`f(a x) = (-1)^{j|a|} a f(x)`), and `a · b = a ∘ f_{n_a}`.

pub mod coeffs;
pub mod theorems;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::hom::AlgebraMap;
use crate::algebra::{AlgebraError, Grade, PresentedSuperalgebra};
use crate::gf::{Fe, GaloisField};
use crate::linalg::Matrix;
use crate::resolution::{MinimalResolution, ResolutionError};

#[derive(Debug, Error)]
pub enum ExtError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degree {0} is beyond the resolution range {1}")]
    OutOfRange(usize, usize),
    #[error("functional of length {got} for {expected} generators")]
    BadFunctional { got: usize, expected: usize },
    #[error("class mixes parities")]
    MixedParity,
    #[error("map does not match the resolutions")]
    Mismatch,
    #[error("{0}")]
    Relation(String),
}

/// An element of `Ext^{n, j}`: coefficients on the degree-`n` generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExtClass {
    pub n: usize,
    pub j: u8,
    #[serde(serialize_with = "serialize_fe")]
    pub functional: Vec<Fe>,
}

fn serialize_fe<S: serde::Serializer>(v: &[Fe], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.0)?;
    }
    seq.end()
}

impl ExtClass {
    pub fn is_zero(&self) -> bool {
        self.functional.iter().all(|c| c.is_zero())
    }
}

/// Lifted chain map of a class, extended on demand.
#[derive(Debug, Clone)]
struct ChainMap {
    // maps[k][g] = f_k(g) in F_k, for the generators g of F_{n + k}
    maps: Vec<Vec<Vec<Fe>>>,
}

/// A resolution together with a memo of lifted chain maps.
pub struct ExtRing {
    res: Arc<MinimalResolution>,
    memo: Mutex<BTreeMap<(usize, Vec<u16>), ChainMap>>,
}

/// `dim Ext^{n, j}` for `n ≤ maxdeg`, indexed `[n][j]`.
pub fn ext_dims(res: &MinimalResolution) -> Vec<[usize; 2]> {
    (0..=res.max_degree()).map(|n| res.parity_counts(n)).collect()
}

impl ExtRing {
    pub fn new(res: Arc<MinimalResolution>) -> Self {
        ExtRing { res, memo: Mutex::new(BTreeMap::new()) }
    }

    pub fn resolution(&self) -> &Arc<MinimalResolution> {
        &self.res
    }

    pub fn algebra(&self) -> &Arc<PresentedSuperalgebra> {
        self.res.algebra()
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.res.field()
    }

    pub fn max_degree(&self) -> usize {
        self.res.max_degree()
    }

    pub fn dims(&self) -> Vec<[usize; 2]> {
        ext_dims(&self.res)
    }

    /// Class with the given functional; its parity is read off the support.
    pub fn class(&self, n: usize, functional: Vec<Fe>) -> Result<ExtClass, ExtError> {
        if n > self.max_degree() {
            return Err(ExtError::OutOfRange(n, self.max_degree()));
        }
        if functional.len() != self.res.rank(n) {
            return Err(ExtError::BadFunctional { got: functional.len(), expected: self.res.rank(n) });
        }
        let par = self.res.generator_parities(n);
        let mut j = None;
        for (i, c) in functional.iter().enumerate() {
            if !c.is_zero() {
                match j {
                    None => j = Some(par[i]),
                    Some(x) if x != par[i] => return Err(ExtError::MixedParity),
                    _ => {}
                }
            }
        }
        Ok(ExtClass { n, j: j.unwrap_or(0), functional })
    }

    /// Class of parity `j` (the zero class is allowed any parity).
    pub fn class_with_parity(&self, n: usize, j: u8, functional: Vec<Fe>) -> Result<ExtClass, ExtError> {
        let c = self.class(n, functional)?;
        if !c.is_zero() && c.j != j {
            return Err(ExtError::MixedParity);
        }
        Ok(ExtClass { j, ..c })
    }

    pub fn zero(&self, n: usize, j: u8) -> ExtClass {
        ExtClass { n, j, functional: vec![Fe::ZERO; self.res.rank(n)] }
    }

    pub fn unit(&self) -> ExtClass {
        ExtClass { n: 0, j: 0, functional: vec![Fe::ONE] }
    }

    /// Dual of generator `i` of `F_n`.
    pub fn dual(&self, n: usize, i: usize) -> ExtClass {
        let mut f = vec![Fe::ZERO; self.res.rank(n)];
        f[i] = Fe::ONE;
        ExtClass { n, j: self.res.generator_grades(n)[i].parity, functional: f }
    }

    /// Dual basis of `Ext^{n, j}`.
    pub fn basis(&self, n: usize, j: u8) -> Vec<ExtClass> {
        (0..self.res.rank(n)).filter(|&i| self.res.generator_grades(n)[i].parity == j).map(|i| self.dual(n, i)).collect()
    }

    /// Dual basis of `Ext^n` restricted to generators of the given grade.
    pub fn basis_of_grade(&self, n: usize, grade: &Grade) -> Vec<ExtClass> {
        (0..self.res.rank(n)).filter(|&i| &self.res.generator_grades(n)[i] == grade).map(|i| self.dual(n, i)).collect()
    }

    pub fn add(&self, a: &ExtClass, b: &ExtClass) -> ExtClass {
        assert_eq!(a.n, b.n);
        let k = self.field();
        let f: Vec<Fe> = a.functional.iter().zip(&b.functional).map(|(&x, &y)| k.add(x, y)).collect();
        let j = if a.is_zero() { b.j } else { a.j };
        ExtClass { n: a.n, j, functional: f }
    }

    pub fn scale(&self, c: Fe, a: &ExtClass) -> ExtClass {
        let k = self.field();
        ExtClass { n: a.n, j: a.j, functional: a.functional.iter().map(|&x| k.mul(c, x)).collect() }
    }

    pub fn combination(&self, terms: &[(Fe, &ExtClass)], n: usize, j: u8) -> ExtClass {
        terms.iter().fold(self.zero(n, j), |acc, (c, x)| self.add(&acc, &self.scale(*c, x)))
    }

    /// `x ∈ F_m` evaluated by a functional on the generators of `F_m`: only
    /// the coefficients of `1 · g` survive.
    fn evaluate(&self, functional: &[Fe], x: &[Fe]) -> Fe {
        let k = self.field();
        let d = self.algebra().dim();
        functional.iter().enumerate().fold(Fe::ZERO, |acc, (h, &a)| k.add(acc, k.mul(a, x[h * d])))
    }

    /// `f(x)` for `x ∈ F_{n_b + k - 1}` written on generators `g'` with
    /// images `images[g']`, `f` of parity `j`.
    fn apply_odd(&self, j: u8, images: &[Vec<Fe>], x: &[Fe], target_dim: usize) -> Vec<Fe> {
        let alg = self.algebra();
        let k = self.field();
        let d = alg.dim();
        let mut out = vec![Fe::ZERO; target_dim];
        for (flat, &c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (g, m) = (flat / d, flat % d);
            let sign = if j == 1 && alg.grade(m).parity == 1 { k.neg(c) } else { c };
            crate::resolution::act_basis(alg, m, sign, &images[g], &mut out);
        }
        out
    }

    fn key(b: &ExtClass) -> (usize, Vec<u16>) {
        (b.n, b.functional.iter().map(|c| c.0).collect())
    }

    /// Ensures the chain map of `b` is known through `f_upto`.
    fn extend_chain_map(&self, b: &ExtClass, upto: usize) -> Result<(), ExtError> {
        if b.n + upto > self.max_degree() {
            return Err(ExtError::OutOfRange(b.n + upto, self.max_degree()));
        }
        let key = Self::key(b);
        let mut cm = {
            let memo = self.memo.lock().unwrap();
            memo.get(&key).cloned().unwrap_or(ChainMap { maps: Vec::new() })
        };
        if cm.maps.len() > upto {
            return Ok(());
        }
        let res = &self.res;
        let d = self.algebra().dim();
        while cm.maps.len() <= upto {
            let kk = cm.maps.len();
            let src = b.n + kk;
            let level: Vec<Vec<Fe>> = if kk == 0 {
                b.functional
                    .iter()
                    .map(|&c| {
                        let mut v = vec![Fe::ZERO; d];
                        v[0] = c;
                        v
                    })
                    .collect()
            } else {
                let prev = &cm.maps[kk - 1];
                let mut out = Vec::with_capacity(res.rank(src));
                for g in 0..res.rank(src) {
                    let y = self.apply_odd(b.j, prev, res.differential(src, g), res.layout(kk - 1).total_dim());
                    out.push(res.lift(kk, &y)?);
                }
                out
            };
            cm.maps.push(level);
        }
        self.memo.lock().unwrap().insert(key, cm);
        Ok(())
    }

    fn with_chain_map<R>(&self, b: &ExtClass, upto: usize, f: impl FnOnce(&ChainMap) -> R) -> Result<R, ExtError> {
        self.extend_chain_map(b, upto)?;
        let memo = self.memo.lock().unwrap();
        Ok(f(&memo[&Self::key(b)]))
    }

    /// `a · b`.
    pub fn cup(&self, a: &ExtClass, b: &ExtClass) -> Result<ExtClass, ExtError> {
        let n = a.n + b.n;
        let functional = self.with_chain_map(b, a.n, |cm| {
            cm.maps[a.n].iter().map(|x| self.evaluate(&a.functional, x)).collect::<Vec<Fe>>()
        })?;
        Ok(ExtClass { n, j: (a.j + b.j) % 2, functional })
    }

    /// Matrix of `a ↦ a · c` from `Ext^n` to `Ext^{n + n_c}` on dual bases.
    pub fn right_mult_matrix(&self, c: &ExtClass, n: usize) -> Result<Matrix, ExtError> {
        let d = self.algebra().dim();
        let bn = self.res.rank(n);
        self.with_chain_map(c, n, |cm| {
            let rows: Vec<Vec<Fe>> = cm.maps[n].iter().map(|x| (0..bn).map(|h| x[h * d]).collect()).collect();
            Matrix::from_row_vecs(bn, &rows)
        })
    }

    /// `a · c^e` by repeated right multiplication.
    pub fn times_power(&self, a: &ExtClass, c: &ExtClass, e: usize) -> Result<ExtClass, ExtError> {
        let mut x = a.clone();
        for _ in 0..e {
            x = self.cup(&x, c)?;
        }
        Ok(x)
    }

    /// `c^e`, with `c^0` the unit.
    pub fn power(&self, c: &ExtClass, e: usize) -> Result<ExtClass, ExtError> {
        self.times_power(&self.unit(), c, e)
    }

    /// Sign `(-1)^{n_a n_b + j_a j_b}` of graded commutativity.
    pub fn commutation_sign(&self, a: &ExtClass, b: &ExtClass) -> Fe {
        if (a.n * b.n + (a.j * b.j) as usize) % 2 == 1 {
            self.field().neg(Fe::ONE)
        } else {
            Fe::ONE
        }
    }

    /// `a · b = (-1)^{n_a n_b + j_a j_b} b · a`.
    pub fn graded_commute(&self, a: &ExtClass, b: &ExtClass) -> Result<bool, ExtError> {
        let ab = self.cup(a, b)?;
        let ba = self.cup(b, a)?;
        Ok(ab == self.scale(self.commutation_sign(a, b), &ba))
    }
}

/// Comparison map from the resolution of `A` to the resolution of `B`
/// along `π : A → B`, used to inflate classes from `B` to `A`.
pub struct Inflation {
    // rows[n] = matrix from Ext^n(B) to Ext^n(A)
    matrices: Vec<Matrix>,
}

impl Inflation {
    /// `source` resolves `A`, `target` resolves `B`; the comparison is
    /// computed through `min(source, target)` degrees.
    pub fn new(pi: &AlgebraMap, source: &MinimalResolution, target: &MinimalResolution) -> Result<Self, ExtError> {
        if !Arc::ptr_eq(pi.source(), source.algebra()) && pi.source().descriptor() != source.algebra().descriptor() {
            return Err(ExtError::Mismatch);
        }
        if !Arc::ptr_eq(pi.target(), target.algebra()) && pi.target().descriptor() != target.algebra().descriptor() {
            return Err(ExtError::Mismatch);
        }
        let a = source.algebra();
        let b = target.algebra();
        let k = a.field();
        let (da, db) = (a.dim(), b.dim());
        let top = source.max_degree().min(target.max_degree());
        // images of each A-basis element under π
        let pis: Vec<Vec<(usize, Fe)>> = (0..da)
            .map(|m| {
                let col = pi.matrix().column(m);
                col.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c)).collect()
            })
            .collect();
        let mut phi: Vec<Vec<Vec<Fe>>> = vec![vec![{
            let mut v = vec![Fe::ZERO; db];
            v[0] = Fe::ONE;
            v
        }]];
        let mut matrices = vec![Matrix::identity(1)];
        for n in 1..=top {
            let prev = &phi[n - 1];
            let mut level = Vec::with_capacity(source.rank(n));
            for g in 0..source.rank(n) {
                let dg = source.differential(n, g);
                let mut y = vec![Fe::ZERO; target.layout(n - 1).total_dim()];
                for (flat, &c) in dg.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (h, m) = (flat / da, flat % da);
                    for &(bm, pc) in &pis[m] {
                        crate::resolution::act_basis(b, bm, k.mul(c, pc), &prev[h], &mut y);
                    }
                }
                level.push(target.lift(n, &y)?);
            }
            let rows: Vec<Vec<Fe>> =
                level.iter().map(|x| (0..target.rank(n)).map(|h| x[h * db]).collect()).collect();
            matrices.push(Matrix::from_row_vecs(target.rank(n), &rows));
            phi.push(level);
        }
        Ok(Inflation { matrices })
    }

    pub fn max_degree(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn matrix(&self, n: usize) -> &Matrix {
        &self.matrices[n]
    }

    /// Inflation of a class over `B`, as a class over `A` in `ring`.
    pub fn apply(&self, ring: &ExtRing, c: &ExtClass) -> Result<ExtClass, ExtError> {
        if c.n > self.max_degree() {
            return Err(ExtError::OutOfRange(c.n, self.max_degree()));
        }
        let f = self.matrices[c.n].apply(ring.field(), &c.functional);
        ring.class_with_parity(c.n, c.j, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_exterior1, make_exterior2, make_kh, make_semidirect};
    use crate::gf::GaloisField;
    use crate::resolution::minimal_resolution;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(a: &Arc<PresentedSuperalgebra>, deg: usize) -> ExtRing {
        ExtRing::new(Arc::new(minimal_resolution(a, deg).unwrap()))
    }

    fn random_class(r: &ExtRing, rng: &mut ChaCha8Rng, n: usize, j: u8) -> ExtClass {
        let q = r.field().order() as u16;
        let basis = r.basis(n, j);
        let terms: Vec<(Fe, &ExtClass)> = basis.iter().map(|b| (Fe(rng.gen_range(0..q)), b)).collect();
        r.combination(&terms, n, j)
    }

    #[test]
    fn exterior_generator_is_polynomial() {
        let k = GaloisField::prime(3).unwrap();
        let r = ring(&make_exterior1(&k), 6);
        let zeta = r.dual(1, 0);
        assert_eq!(zeta.j, 1);
        for e in 1..=6 {
            assert!(!r.power(&zeta, e).unwrap().is_zero());
        }
    }

    #[test]
    fn unit_and_truncated_polynomial() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_kh(&k, 1, 0, false).unwrap();
        let r = ring(&a, 6);
        let lam = r.dual(1, 0);
        let x = r.dual(2, 0);
        assert_eq!(r.cup(&r.unit(), &x).unwrap(), x);
        assert_eq!(r.cup(&x, &r.unit()).unwrap(), x);
        assert!(r.cup(&lam, &lam).unwrap().is_zero());
        assert!(!r.cup(&lam, &x).unwrap().is_zero());
        assert!(!r.power(&x, 3).unwrap().is_zero());
    }

    #[test]
    fn two_odd_generators_commute() {
        let k = GaloisField::prime(5).unwrap();
        let r = ring(&make_exterior2(&k), 4);
        let a = r.dual(1, 0);
        let b = r.dual(1, 1);
        assert!(r.graded_commute(&a, &b).unwrap());
        assert!(!r.cup(&a, &b).unwrap().is_zero());
        assert!(!r.cup(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn commutativity_and_associativity_on_random_classes() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        let r = ring(&a, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..12 {
            let (n1, n2, n3) = (rng.gen_range(1..3), rng.gen_range(1..3), rng.gen_range(1..3));
            let jx = rng.gen_range(0..2);
            let x = random_class(&r, &mut rng, n1, jx);
            let jy = rng.gen_range(0..2);
            let y = random_class(&r, &mut rng, n2, jy);
            let jz = rng.gen_range(0..2);
            let z = random_class(&r, &mut rng, n3, jz);
            assert!(r.graded_commute(&x, &y).unwrap());
            let left = r.cup(&r.cup(&x, &y).unwrap(), &z).unwrap();
            let right = r.cup(&x, &r.cup(&y, &z).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn inflation_from_the_quotient() {
        let k = GaloisField::prime(3).unwrap();
        let g = make_semidirect(&k, 1, 0, &[]).unwrap();
        let b = make_kh(&k, 1, 0, false).unwrap();
        let pi = AlgebraMap::by_names(&g, &b, &[("s_1", "s_1")]).unwrap();
        let rg = ring(&g, 5);
        let rb = ring(&b, 5);
        let infl = Inflation::new(&pi, rg.resolution(), rb.resolution()).unwrap();
        let lam = infl.apply(&rg, &rb.dual(1, 0)).unwrap();
        // supported on the generator of F_1 dual to s_1, which is even
        assert_eq!(lam.j, 0);
        assert_eq!(lam.functional.iter().filter(|c| !c.is_zero()).count(), 1);
        let x = infl.apply(&rg, &rb.dual(2, 0)).unwrap();
        assert!(!x.is_zero());
        // ring map
        let xb = rb.dual(2, 0);
        let lb = rb.dual(1, 0);
        let prod = infl.apply(&rg, &rb.cup(&lb, &xb).unwrap()).unwrap();
        assert_eq!(prod, rg.cup(&lam, &x).unwrap());
        let x2 = infl.apply(&rg, &rb.cup(&xb, &xb).unwrap()).unwrap();
        assert_eq!(x2, rg.cup(&x, &x).unwrap());
    }
}
