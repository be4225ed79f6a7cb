//! `H`-invariant polynomials in `k[X, Y]`, degree by degree, compared with
//! the polynomial ring `k[φ^{p^r}, Y]`.

use serde::Serialize;

use crate::gf::Fe;
use crate::linalg::{rank_of, Echelon};
use crate::sympow::{format_poly, SymPowers};

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub degree: usize,
    pub dim: usize,
    pub predicted_dim: usize,
    /// Basis polynomials as coefficient vectors of `X^i Y^{n-i}`, each
    /// coefficient written over the prime field.
    pub basis: Vec<Vec<Vec<u32>>>,
    pub basis_text: Vec<String>,
    /// The predicted monomials in `φ^{p^r}` and `Y` lie in, and span, the
    /// computed invariants.
    pub generators_span: bool,
}

/// Basis of the invariants of degree `n`.
pub fn invariant_basis(family: &SymPowers, n: usize) -> InvariantReport {
    let k = family.field();
    let basis = family.invariants(n);
    let predicted = family.predicted_invariants(n);
    let mut span = Echelon::new(n + 1);
    for b in &basis {
        span.insert(k, b);
    }
    let generators_span = predicted.iter().all(|v| span.contains(k, v))
        && rank_of(k, n + 1, &predicted) == predicted.len()
        && predicted.len() == basis.len();
    InvariantReport {
        degree: n,
        dim: basis.len(),
        predicted_dim: n / family.period() + 1,
        basis: basis.iter().map(|v| v.iter().map(|&c| k.coeffs(c)).collect()).collect(),
        basis_text: basis.iter().map(|v| format_poly(k, v)).collect(),
        generators_span,
    }
}

/// Checks every degree up to `maxdeg` against `k[φ^{p^r}, Y]`.
pub fn verify_invariant_generators(family: &SymPowers, maxdeg: usize) -> (bool, Vec<InvariantReport>) {
    let reports: Vec<InvariantReport> = (0..=maxdeg).map(|n| invariant_basis(family, n)).collect();
    let ok = reports.iter().all(|r| r.generators_span && r.dim == r.predicted_dim);
    (ok, reports)
}

/// Products of invariants are invariant.
pub fn products_invariant(family: &SymPowers, a: usize, b: usize) -> bool {
    let k = family.field();
    let ia = family.invariants(a);
    let ib = family.invariants(b);
    let target = family.invariants(a + b);
    let mut span = Echelon::new(a + b + 1);
    for v in &target {
        span.insert(k, v);
    }
    ia.iter().all(|x| ib.iter().all(|y| span.contains(k, &crate::sympow::poly_mul(k, x, y))))
}

/// `Y^n` is always invariant.
pub fn contains_y_power(family: &SymPowers, n: usize) -> bool {
    let k = family.field();
    let mut span = Echelon::new(n + 1);
    for v in &family.invariants(n) {
        span.insert(k, v);
    }
    let mut y = vec![Fe::ZERO; n + 1];
    y[0] = Fe::ONE;
    span.contains(k, &y)
}
