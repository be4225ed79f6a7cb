//! `Ext^n(k, M)` as the cohomology of `Hom(F_•, M)`, with the right action
//! of `Ext^*(k, k)` by composition with lifted chain maps.
//!
//! A cochain is a vector of length `b_n · dim M` whose block `h` is the image
//! of generator `h`. The algebra must be purely even (the group algebra of
//! `H`), so no signs appear.

use serde::Serialize;

use super::{ExtClass, ExtError, ExtRing};
use crate::gf::Fe;
use crate::linalg::{Echelon, Matrix};
use crate::module::SuperModule;

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientDims {
    pub dims: Vec<usize>,
    pub cocycle_dims: Vec<usize>,
    pub coboundary_dims: Vec<usize>,
}

pub struct CoefficientExt<'a> {
    ring: &'a ExtRing,
    module: &'a SuperModule,
    maxdeg: usize,
    // cocycle bases Z^n and echelon forms of B^n, for n ≤ maxdeg
    cocycles: Vec<Vec<Vec<Fe>>>,
    coboundaries: Vec<Echelon>,
}

impl<'a> CoefficientExt<'a> {
    /// Cohomology through degree `maxdeg`; the resolution must reach
    /// `maxdeg + 1`.
    pub fn new(ring: &'a ExtRing, module: &'a SuperModule, maxdeg: usize) -> Result<Self, ExtError> {
        let alg = ring.algebra();
        if alg.generators().iter().any(|g| g.parity == 1) || module.algebra().descriptor() != alg.descriptor() {
            return Err(ExtError::Mismatch);
        }
        if maxdeg + 1 > ring.max_degree() {
            return Err(ExtError::OutOfRange(maxdeg + 1, ring.max_degree()));
        }
        let k = ring.field();
        let dm = module.dim();
        let mut cocycles = Vec::new();
        let mut coboundaries = vec![Echelon::new(dm)];
        for n in 0..=maxdeg {
            let delta = coboundary_matrix(ring, module, n);
            cocycles.push(delta.nullspace(k));
            let mut b = Echelon::new(ring.resolution().rank(n + 1) * dm);
            for col in 0..delta.cols() {
                b.insert(k, &delta.column(col));
            }
            coboundaries.push(b);
        }
        coboundaries.truncate(maxdeg + 1);
        Ok(CoefficientExt { ring, module, maxdeg, cocycles, coboundaries })
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn dims(&self) -> CoefficientDims {
        let cocycle_dims: Vec<usize> = self.cocycles.iter().map(Vec::len).collect();
        let coboundary_dims: Vec<usize> = self.coboundaries.iter().map(Echelon::rank).collect();
        CoefficientDims {
            dims: cocycle_dims.iter().zip(&coboundary_dims).map(|(z, b)| z - b).collect(),
            cocycle_dims,
            coboundary_dims,
        }
    }

    /// `φ · c = φ ∘ f^c_n`, a cochain of degree `n + n_c`.
    pub fn act(&self, phi: &[Fe], n: usize, c: &ExtClass) -> Result<Vec<Fe>, ExtError> {
        let ring = self.ring;
        let k = ring.field();
        let d = ring.algebra().dim();
        let dm = self.module.dim();
        let acts = self.module.monomial_actions();
        ring.with_chain_map(c, n, |cm| {
            let mut out = vec![Fe::ZERO; cm.maps[n].len() * dm];
            for (g, x) in cm.maps[n].iter().enumerate() {
                let block = &mut out[g * dm..(g + 1) * dm];
                for (flat, &coef) in x.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let (h, m) = (flat / d, flat % d);
                    let v = acts[m].apply(k, &phi[h * dm..(h + 1) * dm]);
                    k.axpy(block, coef, &v);
                }
            }
            out
        })
    }

    /// Basis of the coefficient vectors `w` for which `Σ w_i c_i` kills
    /// `Ext^n(k, M)` for every `n` in `degrees` (targets must stay within
    /// `maxdeg`). All classes must share one degree.
    pub fn annihilator(&self, classes: &[ExtClass], degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<Vec<Fe>>, ExtError> {
        let k = self.ring.field();
        let Some(first) = classes.first() else { return Ok(Vec::new()) };
        let shift = first.n;
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for n in degrees {
            if n + shift > self.maxdeg {
                return Err(ExtError::OutOfRange(n + shift, self.maxdeg));
            }
            let target = &self.coboundaries[n + shift];
            for phi in &self.cocycles[n] {
                let residues: Vec<Vec<Fe>> = classes
                    .iter()
                    .map(|c| Ok(target.reduce(k, &self.act(phi, n, c)?)))
                    .collect::<Result<_, ExtError>>()?;
                for coord in 0..residues[0].len() {
                    let row: Vec<Fe> = residues.iter().map(|r| r[coord]).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            return Ok((0..classes.len())
                .map(|i| {
                    let mut v = vec![Fe::ZERO; classes.len()];
                    v[i] = Fe::ONE;
                    v
                })
                .collect());
        }
        Ok(Matrix::from_row_vecs(classes.len(), &rows).nullspace(k))
    }
}

/// `δ_n : Hom(F_n, M) → Hom(F_{n+1}, M)`, `(δφ)(g) = φ(d g)`.
pub fn coboundary_matrix(ring: &ExtRing, module: &SuperModule, n: usize) -> Matrix {
    let res = ring.resolution();
    let k = ring.field();
    let d = ring.algebra().dim();
    let dm = module.dim();
    let acts = module.monomial_actions();
    let mut m = Matrix::zeros(res.rank(n + 1) * dm, res.rank(n) * dm);
    for g in 0..res.rank(n + 1) {
        for (flat, &c) in res.differential(n + 1, g).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (h, e) = (flat / d, flat % d);
            let a = &acts[e];
            for r in 0..dm {
                for s in 0..dm {
                    let x = a.get(r, s);
                    if !x.is_zero() {
                        let (row, col) = (g * dm + r, h * dm + s);
                        m.set(row, col, k.add(m.get(row, col), k.mul(c, x)));
                    }
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_kh;
    use crate::gf::GaloisField;
    use crate::resolution::minimal_resolution;
    use std::sync::Arc;

    #[test]
    fn trivial_and_free_coefficients() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_kh(&k, 1, 1, false).unwrap();
        let ring = ExtRing::new(Arc::new(minimal_resolution(&a, 5).unwrap()));
        let triv = SuperModule::trivial(&a);
        let ext = CoefficientExt::new(&ring, &triv, 4).unwrap();
        let want: Vec<usize> = ring.dims().iter().take(5).map(|d| d[0] + d[1]).collect();
        assert_eq!(ext.dims().dims, want);
        let reg = SuperModule::regular(&a);
        let ext = CoefficientExt::new(&ring, &reg, 4).unwrap();
        assert_eq!(ext.dims().dims, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn trivial_coefficients_action_matches_cup() {
        // on k, φ · c is the cup product of the class of φ with c
        let k = GaloisField::prime(3).unwrap();
        let a = make_kh(&k, 1, 0, false).unwrap();
        let ring = ExtRing::new(Arc::new(minimal_resolution(&a, 6).unwrap()));
        let triv = SuperModule::trivial(&a);
        let ext = CoefficientExt::new(&ring, &triv, 5).unwrap();
        let x = ring.dual(2, 0);
        let lam = ring.dual(1, 0);
        let out = ext.act(&lam.functional, 1, &x).unwrap();
        assert_eq!(out, ring.cup(&lam, &x).unwrap().functional);
        // nothing in the span of x kills Ext(k, k)
        assert!(ext.annihilator(&[x], 0..=3).unwrap().is_empty());
    }
}
