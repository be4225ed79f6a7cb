//! Algebra homomorphisms between presented algebras, determined by the
//! images of generators.

use std::sync::Arc;

use super::{AlgebraElement, AlgebraError, PresentedSuperalgebra};
use crate::linalg::Matrix;

#[derive(Debug, Clone)]
pub struct AlgebraMap {
    source: Arc<PresentedSuperalgebra>,
    target: Arc<PresentedSuperalgebra>,
    images: Vec<AlgebraElement>,
    // column j = image of source basis monomial j
    matrix: Matrix,
}

impl AlgebraMap {
    /// Builds the map sending generator `i` of the source to `images[i]`,
    /// after checking every rewriting rule and nilpotency relation.
    pub fn new(
        source: &Arc<PresentedSuperalgebra>,
        target: &Arc<PresentedSuperalgebra>,
        images: Vec<AlgebraElement>,
    ) -> Result<Self, AlgebraError> {
        if source.field() != target.field() {
            return Err(AlgebraError::FieldMismatch);
        }
        if images.len() != source.num_generators() {
            return Err(AlgebraError::NotAlgebraMap(format!(
                "{} images for {} generators",
                images.len(),
                source.num_generators()
            )));
        }
        let t = target;
        for (g, img) in images.iter().enumerate() {
            if !img.constant_term().is_zero() {
                return Err(AlgebraError::NotAlgebraMap(format!(
                    "image of {} is not in the augmentation ideal",
                    source.generators()[g].name
                )));
            }
            if !t.pow(img, source.generators()[g].nilpotency).is_zero() {
                return Err(AlgebraError::NotAlgebraMap(format!(
                    "nilpotency of {} is not preserved",
                    source.generators()[g].name
                )));
            }
        }
        let image_of_monomial = |m: &[u32]| -> AlgebraElement {
            let mut x = t.one();
            for (g, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    x = t.mul(&x, &images[g]);
                }
            }
            x
        };
        for (&(g, h), rhs) in source.rules() {
            let lhs = t.mul(&images[g], &images[h]);
            let mut r = t.zero();
            for (w, c) in rhs {
                r = t.add(&r, &t.scale(*c, &image_of_monomial(w)));
            }
            if lhs != r {
                return Err(AlgebraError::NotAlgebraMap(format!(
                    "relation {} {} not preserved",
                    source.generators()[g].name,
                    source.generators()[h].name
                )));
            }
        }
        let cols: Vec<Vec<_>> = source.basis().iter().map(|m| image_of_monomial(m).coeffs).collect();
        let matrix = Matrix::from_columns(target.dim(), &cols);
        Ok(AlgebraMap { source: Arc::clone(source), target: Arc::clone(target), images, matrix })
    }

    /// Sends each named source generator to the named target generator and
    /// every other source generator to zero.
    pub fn by_names(
        source: &Arc<PresentedSuperalgebra>,
        target: &Arc<PresentedSuperalgebra>,
        pairs: &[(&str, &str)],
    ) -> Result<Self, AlgebraError> {
        let mut images = vec![target.zero(); source.num_generators()];
        for &(a, b) in pairs {
            images[source.generator_index(a)?] = target.generator(b)?;
        }
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<PresentedSuperalgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedSuperalgebra> {
        &self.target
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coeffs: self.matrix.apply(self.target.field(), &a.coeffs) }
    }

    pub fn is_bijective(&self) -> bool {
        self.source.dim() == self.target.dim() && self.matrix.rank(self.target.field()) == self.source.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_kh, make_semidirect, make_semidirect_grouplike};
    use crate::gf::{Fe, GaloisField};

    #[test]
    fn quotient_maps() {
        let k = GaloisField::prime(3).unwrap();
        let g = make_semidirect(&k, 1, 1, &[Fe::ONE]).unwrap();
        let h = make_kh(&k, 1, 1, false).unwrap();
        let pi = AlgebraMap::by_names(&g, &h, &[("s_1", "s_1"), ("t_1", "t_1")]).unwrap();
        let x = g.normal_form(&[("s_1", 1), ("u", 1), ("t_1", 2)]).unwrap();
        assert!(pi.apply(&x).is_zero());
        let y = g.normal_form(&[("s_1", 2), ("t_1", 1)]).unwrap();
        assert_eq!(pi.apply(&y), h.normal_form(&[("s_1", 2), ("t_1", 1)]).unwrap());
        // u ↦ s_1 breaks u^2 = 0
        assert!(matches!(AlgebraMap::by_names(&g, &h, &[("u", "s_1")]), Err(AlgebraError::NotAlgebraMap(_))));
    }

    #[test]
    fn grouplike_presentation_is_isomorphic_to_frobenius_kernel_case() {
        // u ↦ u, v ↦ μ(v + v t), s_1 ↦ t
        for p in [3, 5] {
            let k = GaloisField::prime(p).unwrap();
            for mu in 1..p {
                let mu = Fe(mu as u16);
                let a = make_semidirect(&k, 1, 0, &[]).unwrap();
                let b = make_semidirect_grouplike(&k, 1, &[mu]).unwrap();
                let v = b.generator("v").unwrap();
                let vt = b.normal_form(&[("v", 1), ("t_1", 1)]).unwrap();
                let images = vec![b.generator("u").unwrap(), b.scale(mu, &b.add(&v, &vt)), b.generator("t_1").unwrap()];
                let phi = AlgebraMap::new(&a, &b, images).unwrap();
                assert!(phi.is_bijective());
            }
        }
    }

    #[test]
    fn grouplike_element_moves_past_u() {
        // g u = u g + μ v g with g = 1 + t
        let k = GaloisField::prime(3).unwrap();
        let b = make_semidirect_grouplike(&k, 1, &[Fe::ONE]).unwrap();
        let g = b.add(&b.one(), &b.generator("t_1").unwrap());
        let u = b.generator("u").unwrap();
        let v = b.generator("v").unwrap();
        assert_eq!(b.mul(&g, &u), b.add(&b.mul(&u, &g), &b.mul(&v, &g)));
    }
}
