//! Finite-dimensional modules over a presented superalgebra, given by the
//! action matrices of the generators.

use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, PresentedSuperalgebra};
use crate::gf::{Fe, GaloisField};
use crate::linalg::{rank_of, Echelon, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("invalid module: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("module dimension {0} is not divisible by p = {1}")]
    DimensionNotDivisible(usize, u32),
    #[error("map does not commute with the action of {0}")]
    NotEquivariant(String),
    #[error("shifted point must be nonzero with {expected} coordinates")]
    BadPoint { expected: usize },
    #[error("modules are over different algebras")]
    AlgebraMismatch,
}

#[derive(Debug)]
pub struct SuperModule {
    algebra: Arc<PresentedSuperalgebra>,
    dim: usize,
    action: Vec<Matrix>,
    parity: Vec<u8>,
    monomial_actions: OnceLock<Vec<Matrix>>,
}

impl Clone for SuperModule {
    fn clone(&self) -> Self {
        SuperModule {
            algebra: Arc::clone(&self.algebra),
            dim: self.dim,
            action: self.action.clone(),
            parity: self.parity.clone(),
            monomial_actions: OnceLock::new(),
        }
    }
}

/// A nonzero point `(γ_1..γ_r, α_1..α_s)` defining the shifted operator
/// `Σ γ_i s_i + Σ α_j t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftedPoint {
    pub coords: Vec<Fe>,
}

impl ShiftedPoint {
    pub fn new(coords: Vec<Fe>) -> Result<Self, ModuleError> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(ModuleError::BadPoint { expected: coords.len() });
        }
        Ok(ShiftedPoint { coords })
    }

    /// All nonzero points of `k^n` in lexicographic order of element codes.
    pub fn enumerate(k: &GaloisField, n: usize) -> Vec<ShiftedPoint> {
        let q = k.order() as usize;
        let total = q.pow(n as u32);
        (1..total)
            .map(|mut c| {
                let mut coords = vec![Fe::ZERO; n];
                for slot in coords.iter_mut().rev() {
                    *slot = Fe((c % q) as u16);
                    c /= q;
                }
                ShiftedPoint { coords }
            })
            .collect()
    }
}

impl SuperModule {
    /// Builds a module after validating relations, nilpotency and parity.
    pub fn new(algebra: &Arc<PresentedSuperalgebra>, action: Vec<Matrix>, parity: Vec<u8>) -> Result<Self, ModuleError> {
        let m = Self::new_unchecked(algebra, action, parity);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(algebra: &Arc<PresentedSuperalgebra>, action: Vec<Matrix>, parity: Vec<u8>) -> Self {
        let dim = parity.len();
        SuperModule { algebra: Arc::clone(algebra), dim, action, parity, monomial_actions: OnceLock::new() }
    }

    pub fn trivial(algebra: &Arc<PresentedSuperalgebra>) -> Self {
        let action = vec![Matrix::zeros(1, 1); algebra.num_generators()];
        Self::new_unchecked(algebra, action, vec![0])
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: &Arc<PresentedSuperalgebra>) -> Self {
        let action = (0..algebra.num_generators())
            .map(|g| algebra.left_mult_matrix(&AlgebraElement::basis(algebra.dim(), algebra.generator_basis_index(g))))
            .collect();
        let parity = algebra.grades().iter().map(|g| g.parity).collect();
        Self::new_unchecked(algebra, action, parity)
    }

    pub fn direct_sum(a: &SuperModule, b: &SuperModule) -> Result<Self, ModuleError> {
        if !Arc::ptr_eq(&a.algebra, &b.algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let n = a.dim + b.dim;
        let action = a
            .action
            .iter()
            .zip(&b.action)
            .map(|(x, y)| {
                let mut m = Matrix::zeros(n, n);
                for i in 0..a.dim {
                    for j in 0..a.dim {
                        m.set(i, j, x.get(i, j));
                    }
                }
                for i in 0..b.dim {
                    for j in 0..b.dim {
                        m.set(a.dim + i, a.dim + j, y.get(i, j));
                    }
                }
                m
            })
            .collect();
        let parity = a.parity.iter().chain(&b.parity).copied().collect();
        Ok(Self::new_unchecked(&a.algebra, action, parity))
    }

    pub fn algebra(&self) -> &Arc<PresentedSuperalgebra> {
        &self.algebra
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn action(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn action_by_name(&self, name: &str) -> Result<&Matrix, ModuleError> {
        Ok(&self.action[self.algebra.generator_index(name)?])
    }

    /// Action matrix of every PBW basis monomial.
    pub fn monomial_actions(&self) -> &[Matrix] {
        self.monomial_actions.get_or_init(|| {
            let k = self.field();
            self.algebra
                .basis()
                .iter()
                .map(|m| {
                    let mut acc = Matrix::identity(self.dim);
                    for (g, &e) in m.iter().enumerate() {
                        for _ in 0..e {
                            acc = acc.mul(k, &self.action[g]);
                        }
                    }
                    acc
                })
                .collect()
        })
    }

    pub fn element_action(&self, a: &AlgebraElement) -> Matrix {
        let k = self.field();
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (i, &c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(k, &self.monomial_actions()[i].scaled(k, c));
            }
        }
        out
    }

    /// Checks relations, nilpotency and parity compatibility.
    pub fn validate(&self) -> Result<(), ModuleError> {
        let alg = &self.algebra;
        let k = self.field();
        if self.action.len() != alg.num_generators() {
            return Err(ModuleError::Invalid(format!("{} action matrices for {} generators", self.action.len(), alg.num_generators())));
        }
        for (g, m) in self.action.iter().enumerate() {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(ModuleError::Invalid(format!("action of {} has wrong shape", alg.generators()[g].name)));
            }
        }
        let word = |mono: &[u32]| -> Matrix {
            let mut acc = Matrix::identity(self.dim);
            for (g, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(k, &self.action[g]);
                }
            }
            acc
        };
        for (&(g, h), rhs) in alg.rules() {
            let lhs = self.action[g].mul(k, &self.action[h]);
            let mut r = Matrix::zeros(self.dim, self.dim);
            for (w, c) in rhs {
                r = r.add(k, &word(w).scaled(k, *c));
            }
            if lhs != r {
                return Err(ModuleError::Invalid(format!(
                    "relation {} {} fails",
                    alg.generators()[g].name,
                    alg.generators()[h].name
                )));
            }
        }
        // unlisted pairs commute
        for g in 0..alg.num_generators() {
            for h in 0..g {
                if !alg.rules().contains_key(&(g, h))
                    && self.action[g].mul(k, &self.action[h]) != self.action[h].mul(k, &self.action[g])
                {
                    return Err(ModuleError::Invalid(format!(
                        "{} and {} do not commute",
                        alg.generators()[g].name,
                        alg.generators()[h].name
                    )));
                }
            }
        }
        for (g, gen) in alg.generators().iter().enumerate() {
            if !self.action[g].pow(k, gen.nilpotency).is_zero() {
                return Err(ModuleError::Invalid(format!("{}^{} acts nonzero", gen.name, gen.nilpotency)));
            }
            for i in 0..self.dim {
                for j in 0..self.dim {
                    if !self.action[g].get(i, j).is_zero() && self.parity[i] != (self.parity[j] + gen.parity) % 2 {
                        return Err(ModuleError::Invalid(format!("{} does not respect parity", gen.name)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check(&self) -> bool {
        self.validate().is_ok()
    }

    /// Basis of the common kernel of all generators.
    pub fn fixed_points(&self) -> Vec<Vec<Fe>> {
        let k = self.field();
        let mut stacked = Matrix::zeros(self.dim * self.action.len(), self.dim);
        for (g, m) in self.action.iter().enumerate() {
            for i in 0..self.dim {
                stacked.row_mut(g * self.dim + i).copy_from_slice(m.row(i));
            }
        }
        if self.action.is_empty() {
            return (0..self.dim).map(|i| AlgebraElement::basis(self.dim, i).coeffs).collect();
        }
        stacked.nullspace(k)
    }

    /// `J^{i+1} M = Σ_g g · J^i M`, as subspace bases, ending with the zero
    /// space.
    pub fn radical_series(&self) -> Vec<Vec<Vec<Fe>>> {
        let k = self.field();
        let mut current: Vec<Vec<Fe>> = (0..self.dim).map(|i| AlgebraElement::basis(self.dim, i).coeffs).collect();
        let mut series = vec![current.clone()];
        while !current.is_empty() {
            let mut next = Echelon::new(self.dim);
            for m in &self.action {
                for v in &current {
                    next.insert(k, &m.apply(k, v));
                }
            }
            current = next.basis().to_vec();
            series.push(current.clone());
            if series.len() > self.dim + 2 {
                break;
            }
        }
        series
    }

    /// Dimensions of the radical series `J^i M` (ending in 0) and of the
    /// socle layers `soc^{i+1} M / soc^i M`.
    pub fn radical_socle_series(&self) -> (Vec<usize>, Vec<usize>) {
        let k = self.field();
        let radical = self.radical_series().iter().map(|b| b.len()).collect();
        let mut layers = Vec::new();
        let mut prev = 0usize;
        let mut current: Vec<Vec<Fe>> = Vec::new();
        while prev < self.dim {
            // vectors m with g m ∈ current for every generator g
            let annihilator: Vec<Vec<Fe>> = if current.is_empty() {
                (0..self.dim).map(|i| AlgebraElement::basis(self.dim, i).coeffs).collect()
            } else {
                Matrix::from_row_vecs(self.dim, &current).nullspace(k)
            };
            let mut rows = Vec::new();
            for m in &self.action {
                for y in &annihilator {
                    // y^T m
                    let row: Vec<Fe> = (0..self.dim)
                        .map(|j| (0..self.dim).fold(Fe::ZERO, |acc, i| k.add(acc, k.mul(y[i], m.get(i, j)))))
                        .collect();
                    rows.push(row);
                }
            }
            current = if rows.is_empty() {
                (0..self.dim).map(|i| AlgebraElement::basis(self.dim, i).coeffs).collect()
            } else {
                Matrix::from_row_vecs(self.dim, &rows).nullspace(k)
            };
            if current.len() == prev {
                break;
            }
            layers.push(current.len() - prev);
            prev = current.len();
        }
        (radical, layers)
    }

    /// True iff every radical layer is one-dimensional.
    pub fn is_uniserial(&self) -> bool {
        let series = self.radical_series();
        series.windows(2).all(|w| w[0].len() == w[1].len() + 1)
    }

    /// Head dimension `dim M / JM`.
    pub fn head_dim(&self) -> usize {
        let s = self.radical_series();
        s[0].len() - s.get(1).map_or(0, |b| b.len())
    }

    /// Projectivity over a local algebra: `M` is free iff
    /// `dim M = dim A · dim M^A` and `dim M / JM = dim M^A`.
    pub fn is_projective_kh(&self) -> bool {
        let fixed = self.fixed_points().len();
        self.dim == self.algebra.dim() * fixed && self.head_dim() == fixed
    }

    /// Tensor product through the coproduct; basis `m_i ⊗ n_j` has index
    /// `i * dim N + j`.
    pub fn tensor(&self, other: &SuperModule) -> Result<SuperModule, ModuleError> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let alg = &self.algebra;
        let k = self.field();
        let n = self.dim * other.dim;
        let mut action = Vec::with_capacity(alg.num_generators());
        for g in 0..alg.num_generators() {
            let mut m = Matrix::zeros(n, n);
            for &(a, b, c) in alg.coproduct_of_generator(g)? {
                let term = self.monomial_actions()[a].kron(k, &other.monomial_actions()[b]);
                m = m.add(k, &term.scaled(k, c));
            }
            action.push(m);
        }
        let parity = self
            .parity
            .iter()
            .flat_map(|&a| other.parity.iter().map(move |&b| (a + b) % 2))
            .collect();
        Ok(SuperModule::new_unchecked(alg, action, parity))
    }

    fn check_point(&self, point: &ShiftedPoint) -> Result<(usize, usize), ModuleError> {
        let d = self.algebra.descriptor();
        if point.coords.len() != d.r + d.s || point.coords.iter().all(|c| c.is_zero()) {
            return Err(ModuleError::BadPoint { expected: d.r + d.s });
        }
        Ok((d.r, d.s))
    }

    /// Matrix of the shifted operator on this module.
    pub fn shifted_action(&self, point: &ShiftedPoint) -> Result<Matrix, ModuleError> {
        self.check_point(point)?;
        let theta = shifted_operator(&self.algebra, point)?;
        Ok(self.element_action(&theta))
    }

    /// Freeness of the restriction to `k[θ]/θ^p`, by
    /// `rank θ^{p-1} = dim M / p`.
    pub fn is_free_restriction(&self, point: &ShiftedPoint) -> Result<bool, ModuleError> {
        let p = self.field().characteristic();
        let theta = self.shifted_action(point)?;
        if !self.dim.is_multiple_of(p as usize) {
            return Err(ModuleError::DimensionNotDivisible(self.dim, p));
        }
        Ok(theta.pow(self.field(), p - 1).rank(self.field()) == self.dim / p as usize)
    }

    /// Jordan block sizes of the shifted operator, largest first.
    pub fn jordan_type(&self, point: &ShiftedPoint) -> Result<Vec<usize>, ModuleError> {
        let k = self.field();
        let theta = self.shifted_action(point)?;
        let mut ranks = vec![self.dim];
        let mut pw = Matrix::identity(self.dim);
        while *ranks.last().unwrap() > 0 {
            pw = pw.mul(k, &theta);
            ranks.push(pw.rank(k));
        }
        // blocks of size >= i: ranks[i-1] - ranks[i]
        let mut sizes = Vec::new();
        for i in (1..ranks.len()).rev() {
            let at_least = ranks[i - 1] - ranks[i];
            let at_least_next = if i + 1 < ranks.len() { ranks[i] - ranks[i + 1] } else { 0 };
            for _ in 0..at_least - at_least_next {
                sizes.push(i);
            }
        }
        Ok(sizes)
    }

    /// Canonical JSON layout with field elements as coefficient vectors.
    pub fn to_json(&self) -> Value {
        let k = self.field();
        let actions: serde_json::Map<String, Value> = self
            .algebra
            .generators()
            .iter()
            .zip(&self.action)
            .map(|(g, m)| {
                let rows: Vec<Vec<Vec<u32>>> =
                    (0..m.rows()).map(|i| m.row(i).iter().map(|&x| k.coeffs(x)).collect()).collect();
                (g.name.clone(), json!(rows))
            })
            .collect();
        json!({
            "algebra": self.algebra.descriptor().canonical(),
            "dim": self.dim,
            "action": actions,
            "parity": self.parity,
        })
    }
}

/// `θ = Σ γ_i s_i + Σ α_j t_j` as an element of `kH` (or of any algebra
/// with generators `s_i, t_j`).
pub fn shifted_operator(algebra: &PresentedSuperalgebra, point: &ShiftedPoint) -> Result<AlgebraElement, ModuleError> {
    let d = algebra.descriptor();
    if point.coords.len() != d.r + d.s || point.coords.iter().all(|c| c.is_zero()) {
        return Err(ModuleError::BadPoint { expected: d.r + d.s });
    }
    let mut theta = algebra.zero();
    for (i, &c) in point.coords.iter().enumerate() {
        let name = if i < d.r { format!("s_{}", i + 1) } else { format!("t_{}", i - d.r + 1) };
        theta = algebra.add(&theta, &algebra.scale(c, &algebra.generator(&name)?));
    }
    Ok(theta)
}

/// `f ∘ g_N = g_M ∘ f` for every generator.
pub fn check_equivariant(source: &SuperModule, target: &SuperModule, f: &Matrix) -> Result<(), ModuleError> {
    let k = target.field();
    if f.rows() != target.dim() || f.cols() != source.dim() {
        return Err(ModuleError::Invalid("map has wrong shape".into()));
    }
    for (g, gen) in target.algebra().generators().iter().enumerate() {
        if f.mul(k, source.action(g)) != target.action(g).mul(k, f) {
            return Err(ModuleError::NotEquivariant(gen.name.clone()));
        }
    }
    Ok(())
}

/// Checks that the images of the given module maps form an internal direct
/// sum decomposition of `m`.
pub fn verify_direct_sum(m: &SuperModule, embeddings: &[(&SuperModule, &Matrix)]) -> Result<bool, ModuleError> {
    let k = m.field();
    let mut total = 0;
    let mut all_cols = Vec::new();
    for (src, f) in embeddings {
        check_equivariant(src, m, f)?;
        if f.rank(k) != src.dim() {
            return Ok(false);
        }
        total += src.dim();
        for j in 0..f.cols() {
            all_cols.push(f.column(j));
        }
    }
    Ok(total == m.dim() && rank_of(k, m.dim(), &all_cols) == m.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_kh, make_semidirect};

    #[test]
    fn trivial_and_regular_modules() {
        let k = GaloisField::prime(3).unwrap();
        for a in [make_kh(&k, 1, 1, false).unwrap(), make_semidirect(&k, 1, 0, &[]).unwrap()] {
            assert!(SuperModule::trivial(&a).check());
            let reg = SuperModule::regular(&a);
            assert!(reg.check());
            assert_eq!(reg.fixed_points().len(), 1);
        }
        let h = make_kh(&k, 1, 1, false).unwrap();
        let reg = SuperModule::regular(&h);
        let top = h.monomial_index(&[2, 2]).unwrap();
        assert_eq!(reg.fixed_points(), vec![AlgebraElement::basis(9, top).coeffs]);
        assert!(reg.is_projective_kh());
        assert!(!SuperModule::trivial(&h).is_projective_kh());
    }

    #[test]
    fn identity_action_is_rejected() {
        let k = GaloisField::prime(3).unwrap();
        let h = make_kh(&k, 1, 0, false).unwrap();
        let bad = SuperModule::new(&h, vec![Matrix::identity(2)], vec![0, 0]);
        assert!(bad.is_err());
    }

    #[test]
    fn radical_series_of_truncated_polynomials() {
        let k = GaloisField::prime(3).unwrap();
        let h = make_kh(&k, 1, 0, false).unwrap();
        let reg = SuperModule::regular(&h);
        assert_eq!(reg.radical_socle_series(), (vec![3, 2, 1, 0], vec![1, 1, 1]));
        assert!(reg.is_uniserial());
        let t = SuperModule::trivial(&h);
        assert_eq!(t.radical_socle_series().0, vec![1, 0]);
        let kk = SuperModule::direct_sum(&t, &t).unwrap();
        assert_eq!(kk.fixed_points().len(), 2);
        assert!(!kk.is_uniserial());
        let id = Matrix::identity(2);
        let e1 = Matrix::from_columns(2, &[vec![Fe::ONE, Fe::ZERO]]);
        let e2 = Matrix::from_columns(2, &[vec![Fe::ZERO, Fe::ONE]]);
        assert!(verify_direct_sum(&kk, &[(&t, &e1), (&t, &e2)]).unwrap());
        assert!(!verify_direct_sum(&kk, &[(&t, &e1), (&t, &e1)]).unwrap());
        assert!(verify_direct_sum(&kk, &[(&kk, &id)]).unwrap());
    }

    #[test]
    fn tensor_with_trivial_is_identity() {
        let k = GaloisField::prime(3).unwrap();
        let h = make_kh(&k, 1, 1, true).unwrap();
        let reg = SuperModule::regular(&h);
        let t = SuperModule::trivial(&h);
        let kt = t.tensor(&reg).unwrap();
        assert_eq!(kt.actions(), reg.actions());
        assert!(reg.tensor(&reg).unwrap().check());
        let plain = make_kh(&k, 1, 1, false).unwrap();
        let r2 = SuperModule::regular(&plain);
        assert!(matches!(r2.tensor(&r2), Err(ModuleError::Algebra(AlgebraError::NoCoproduct))));
    }

    #[test]
    fn shifted_operators_are_p_nilpotent() {
        let k = GaloisField::new(3, 2).unwrap();
        let h = make_kh(&k, 1, 1, false).unwrap();
        for pt in ShiftedPoint::enumerate(&k, 2) {
            let theta = shifted_operator(&h, &pt).unwrap();
            assert!(h.pow(&theta, 3).is_zero());
            assert_eq!(h.parity_of(&theta), Some(0));
        }
        let s1 = shifted_operator(&h, &ShiftedPoint::new(vec![Fe::ONE, Fe::ZERO]).unwrap()).unwrap();
        assert_eq!(s1, h.generator("s_1").unwrap());
        assert!(ShiftedPoint::new(vec![Fe::ZERO, Fe::ZERO]).is_err());
    }

    #[test]
    fn regular_module_restricts_freely() {
        let k = GaloisField::new(3, 2).unwrap();
        let h = make_kh(&k, 1, 1, false).unwrap();
        let reg = SuperModule::regular(&h);
        for pt in ShiftedPoint::enumerate(&k, 2) {
            assert!(reg.is_free_restriction(&pt).unwrap());
            assert_eq!(reg.jordan_type(&pt).unwrap(), vec![3, 3, 3]);
        }
        let t = SuperModule::trivial(&h);
        let pt = ShiftedPoint::new(vec![Fe::ONE, Fe::ONE]).unwrap();
        assert_eq!(t.is_free_restriction(&pt), Err(ModuleError::DimensionNotDivisible(1, 3)));
    }
}
