//! Minimal free resolutions of the trivial module.
//!
//! `F_n` is free on `b_n` homogeneous generators. An element of `F_n` is a
//! flat vector whose entry `j * dim + m` is the coefficient of
//! `e_m g_j`, with `e_m` the PBW basis of the algebra. All linear algebra is
//! split by the grading of the algebra: the kernel, the generator choice and
//! every lift work one homogeneous component at a time.

pub mod bar;
mod cache;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraElement, Grade, PresentedSuperalgebra};
use crate::gf::{Fe, GaloisField};
use crate::linalg::{Echelon, Matrix, Solver};

pub use cache::{cache_key, cached_resolution, CACHE_ENV};

#[derive(Debug, Error)]
pub enum ResolutionError {
    #[error("augmentation ideal is not nilpotent")]
    NotLocal,
    #[error("lifting failed in degree {degree}: {reason}")]
    LiftingFailed { degree: usize, reason: String },
    #[error("degree {0} is beyond the computed range {1}")]
    OutOfRange(usize, usize),
    #[error("cache: {0}")]
    Cache(String),
}

/// Generator grades of a free module and its split into homogeneous
/// components.
#[derive(Debug, Clone)]
pub struct Layout {
    dim: usize,
    gens: Vec<Grade>,
    components: Vec<(Grade, Vec<usize>)>,
    lookup: BTreeMap<Grade, usize>,
    position: Vec<(u32, u32)>,
}

impl Layout {
    fn new(alg: &PresentedSuperalgebra, gens: Vec<Grade>) -> Self {
        let dim = alg.dim();
        let mut map: BTreeMap<Grade, Vec<usize>> = BTreeMap::new();
        for (j, g) in gens.iter().enumerate() {
            for m in 0..dim {
                map.entry(g.add(alg.grade(m))).or_default().push(j * dim + m);
            }
        }
        let components: Vec<(Grade, Vec<usize>)> = map.into_iter().collect();
        let mut position = vec![(0, 0); gens.len() * dim];
        let mut lookup = BTreeMap::new();
        for (c, (grade, flat)) in components.iter().enumerate() {
            lookup.insert(grade.clone(), c);
            for (i, &f) in flat.iter().enumerate() {
                position[f] = (c as u32, i as u32);
            }
        }
        Layout { dim, gens, components, lookup, position }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn total_dim(&self) -> usize {
        self.gens.len() * self.dim
    }

    pub fn generator_grades(&self) -> &[Grade] {
        &self.gens
    }

    pub fn components(&self) -> &[(Grade, Vec<usize>)] {
        &self.components
    }

    pub fn component(&self, grade: &Grade) -> Option<usize> {
        self.lookup.get(grade).copied()
    }

    /// Component and position inside it of a flat index.
    pub fn locate(&self, flat: usize) -> (usize, usize) {
        let (c, i) = self.position[flat];
        (c as usize, i as usize)
    }
}

/// Adds `coef * e_m · v` to `out`, for `v` in a free module.
pub fn act_basis(alg: &PresentedSuperalgebra, m: usize, coef: Fe, v: &[Fe], out: &mut [Fe]) {
    let k = alg.field();
    let d = alg.dim();
    for (flat, &x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let (block, mm) = (flat / d, flat % d);
        let cx = k.mul(coef, x);
        for &(t, c) in alg.product(m, mm) {
            let slot = &mut out[block * d + t as usize];
            *slot = k.add(*slot, k.mul(cx, c));
        }
    }
}

/// `a · v` for `a` in the algebra and `v` in a free module.
pub fn act(alg: &PresentedSuperalgebra, a: &AlgebraElement, v: &[Fe]) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; v.len()];
    for (m, &c) in a.coeffs.iter().enumerate() {
        if !c.is_zero() {
            act_basis(alg, m, c, v, &mut out);
        }
    }
    out
}

/// One row of the exactness ledger: `dim ker d_n` against `rank d_{n+1}`,
/// with `d_0` the augmentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessEntry {
    pub degree: usize,
    pub module_dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
}

impl ExactnessEntry {
    pub fn exact(&self) -> bool {
        self.kernel_dim == self.image_dim
    }
}

#[derive(Debug, Clone)]
pub struct MinimalResolution {
    algebra: Arc<PresentedSuperalgebra>,
    layouts: Vec<Layout>,
    // diffs[n][j] = d_n(g_j) in F_{n-1}; diffs[0] is empty
    diffs: Vec<Vec<Vec<Fe>>>,
    // dim ker d_n for n below the top degree
    kernel_dims: Vec<usize>,
    // solvers for d_n, keyed by the grade of the component of F_n
    solvers: Vec<OnceLock<BTreeMap<Grade, Solver>>>,
}

/// Minimal resolution of `k` over `alg` up to homological degree `maxdeg`.
pub fn minimal_resolution(
    alg: &Arc<PresentedSuperalgebra>,
    maxdeg: usize,
) -> Result<MinimalResolution, ResolutionError> {
    let mut res = MinimalResolution::new(alg)?;
    res.extend_to(maxdeg);
    Ok(res)
}

impl MinimalResolution {
    /// The resolution consisting of `F_0 = A` only.
    pub fn new(alg: &Arc<PresentedSuperalgebra>) -> Result<Self, ResolutionError> {
        if alg.augmentation_nilpotency().is_none() {
            return Err(ResolutionError::NotLocal);
        }
        let f0 = Layout::new(alg, vec![Grade::zero(alg.grading_rank())]);
        Ok(MinimalResolution {
            algebra: Arc::clone(alg),
            layouts: vec![f0],
            diffs: vec![Vec::new()],
            kernel_dims: Vec::new(),
            solvers: vec![OnceLock::new()],
        })
    }

    pub(crate) fn from_parts(
        alg: &Arc<PresentedSuperalgebra>,
        gens: Vec<Vec<Grade>>,
        diffs: Vec<Vec<Vec<Fe>>>,
        kernel_dims: Vec<usize>,
    ) -> Self {
        let layouts: Vec<Layout> = gens.into_iter().map(|g| Layout::new(alg, g)).collect();
        let solvers = (0..layouts.len()).map(|_| OnceLock::new()).collect();
        MinimalResolution { algebra: Arc::clone(alg), layouts, diffs, kernel_dims, solvers }
    }

    pub fn algebra(&self) -> &Arc<PresentedSuperalgebra> {
        &self.algebra
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.algebra.field()
    }

    pub fn max_degree(&self) -> usize {
        self.layouts.len() - 1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.layouts.iter().map(Layout::rank).collect()
    }

    pub fn rank(&self, n: usize) -> usize {
        self.layouts[n].rank()
    }

    pub fn layout(&self, n: usize) -> &Layout {
        &self.layouts[n]
    }

    pub fn generator_grades(&self, n: usize) -> &[Grade] {
        self.layouts[n].generator_grades()
    }

    pub fn generator_parities(&self, n: usize) -> Vec<u8> {
        self.layouts[n].gens.iter().map(|g| g.parity).collect()
    }

    /// `d_n(g_j)` as a flat vector in `F_{n-1}`.
    pub fn differential(&self, n: usize, j: usize) -> &[Fe] {
        &self.diffs[n][j]
    }

    /// Entry `(i, j)` of `d_n`: the coefficient of `g_i` in `d_n(g_j)`.
    pub fn entry(&self, n: usize, i: usize, j: usize) -> AlgebraElement {
        let d = self.algebra.dim();
        AlgebraElement { coeffs: self.diffs[n][j][i * d..(i + 1) * d].to_vec() }
    }

    pub(crate) fn raw_diffs(&self) -> &[Vec<Vec<Fe>>] {
        &self.diffs
    }

    pub(crate) fn kernel_dims(&self) -> &[usize] {
        &self.kernel_dims
    }

    pub fn extend_to(&mut self, maxdeg: usize) {
        while self.max_degree() < maxdeg {
            self.step();
        }
    }

    /// Matrix of `d_n` from the component of `F_n` with the given grade to
    /// the component of `F_{n-1}` with the same grade.
    fn component_matrix(&self, n: usize, grade: &Grade, source: &[usize]) -> Matrix {
        let alg = &*self.algebra;
        let d = alg.dim();
        let target = &self.layouts[n - 1];
        let Some(tc) = target.component(grade) else {
            return Matrix::zeros(0, source.len());
        };
        let rows = target.components[tc].1.len();
        let mut m = Matrix::zeros(rows, source.len());
        let mut col = vec![Fe::ZERO; target.total_dim()];
        for (ci, &flat) in source.iter().enumerate() {
            col.iter_mut().for_each(|x| *x = Fe::ZERO);
            act_basis(alg, flat % d, Fe::ONE, &self.diffs[n][flat / d], &mut col);
            for (t, &x) in col.iter().enumerate() {
                if !x.is_zero() {
                    let (c, i) = target.locate(t);
                    debug_assert_eq!(c, tc, "differential is not homogeneous");
                    m.set(i, ci, x);
                }
            }
        }
        m
    }

    fn build_solvers(&self, n: usize) -> BTreeMap<Grade, Solver> {
        self.kernels_and_solvers(n).into_iter().map(|(g, s, _)| (g, s)).collect()
    }

    fn kernels_and_solvers(&self, n: usize) -> Vec<(Grade, Solver, Vec<Vec<Fe>>)> {
        let k = self.field();
        let comps = &self.layouts[n].components;
        crate::par_map(comps, |(grade, source)| {
            let m = self.component_matrix(n, grade, source);
            let (solver, ker) = Solver::with_kernel(k, &m);
            (grade.clone(), solver, ker)
        })
    }

    fn solvers(&self, n: usize) -> &BTreeMap<Grade, Solver> {
        self.solvers[n].get_or_init(|| self.build_solvers(n))
    }

    /// Adds `F_{N+1}` from generators of `ker d_N`.
    fn step(&mut self) {
        let n = self.max_degree();
        let k = Arc::clone(self.field());
        let alg = Arc::clone(&self.algebra);
        let layout = &self.layouts[n];
        // kernel of d_n per component, as vectors over the component positions
        let kernels: Vec<Vec<Vec<Fe>>> = if n == 0 {
            layout
                .components
                .iter()
                .map(|(_, flat)| {
                    (0..flat.len())
                        .filter(|&i| flat[i] != 0)
                        .map(|i| {
                            let mut v = vec![Fe::ZERO; flat.len()];
                            v[i] = Fe::ONE;
                            v
                        })
                        .collect()
                })
                .collect()
        } else {
            let parts = self.kernels_and_solvers(n);
            let mut kernels = Vec::with_capacity(parts.len());
            let mut solvers = BTreeMap::new();
            for (g, s, ker) in parts {
                solvers.insert(g, s);
                kernels.push(ker);
            }
            let _ = self.solvers[n].set(solvers);
            kernels
        };
        let kernel_dim = kernels.iter().map(Vec::len).sum();
        let layout = &self.layouts[n];
        let comp_ids: Vec<usize> = (0..layout.components.len()).collect();
        let gens: Vec<(usize, Grade)> = (0..alg.num_generators())
            .map(|g| (alg.generator_basis_index(g), alg.generator_grade(g).clone()))
            .collect();
        let chosen: Vec<Vec<Vec<Fe>>> = crate::par_map(&comp_ids, |&c| {
            let (grade, flat) = &layout.components[c];
            let want = kernels[c].len();
            if want == 0 {
                return Vec::new();
            }
            let mut jk = Echelon::new(flat.len());
            let mut scratch = vec![Fe::ZERO; layout.total_dim()];
            'outer: for (bi, gg) in &gens {
                let Some(src) = layout.component(&grade.sub(gg)) else { continue };
                let src_flat = &layout.components[src].1;
                for v in &kernels[src] {
                    scratch.iter_mut().for_each(|x| *x = Fe::ZERO);
                    for (i, &x) in v.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let f = src_flat[i];
                        let (block, m) = (f / alg.dim(), f % alg.dim());
                        for &(t, cc) in alg.product(*bi, m) {
                            let slot = &mut scratch[block * alg.dim() + t as usize];
                            *slot = k.add(*slot, k.mul(x, cc));
                        }
                    }
                    let w: Vec<Fe> = flat.iter().map(|&f| scratch[f]).collect();
                    jk.insert(&k, &w);
                    if jk.rank() == want {
                        break 'outer;
                    }
                }
            }
            let mut out = Vec::new();
            for v in &kernels[c] {
                if jk.rank() == want {
                    break;
                }
                if jk.insert(&k, v) {
                    let mut full = vec![Fe::ZERO; layout.total_dim()];
                    for (i, &x) in v.iter().enumerate() {
                        full[flat[i]] = x;
                    }
                    out.push(full);
                }
            }
            out
        });
        let mut new_gens = Vec::new();
        let mut new_diffs = Vec::new();
        for (c, vs) in chosen.into_iter().enumerate() {
            for v in vs {
                new_gens.push(layout.components[c].0.clone());
                new_diffs.push(v);
            }
        }
        self.kernel_dims.push(kernel_dim);
        self.layouts.push(Layout::new(&alg, new_gens));
        self.diffs.push(new_diffs);
        self.solvers.push(OnceLock::new());
    }

    /// `d_n(x)` for `x` in `F_n`, `n ≥ 1`.
    pub fn apply_differential(&self, n: usize, x: &[Fe]) -> Vec<Fe> {
        let d = self.algebra.dim();
        let mut out = vec![Fe::ZERO; self.layouts[n - 1].total_dim()];
        for (flat, &c) in x.iter().enumerate() {
            if !c.is_zero() {
                act_basis(&self.algebra, flat % d, c, &self.diffs[n][flat / d], &mut out);
            }
        }
        out
    }

    /// Some `x` in `F_n` with `d_n(x) = y`; for `n = 0`, `y` is a scalar
    /// and `x = y · g_0`.
    pub fn lift(&self, n: usize, y: &[Fe]) -> Result<Vec<Fe>, ResolutionError> {
        if n > self.max_degree() {
            return Err(ResolutionError::OutOfRange(n, self.max_degree()));
        }
        if n == 0 {
            let mut x = vec![Fe::ZERO; self.algebra.dim()];
            x[0] = y[0];
            return Ok(x);
        }
        let k = self.field();
        let target = &self.layouts[n - 1];
        let source = &self.layouts[n];
        let solvers = self.solvers(n);
        let mut x = vec![Fe::ZERO; source.total_dim()];
        for (grade, flat) in &target.components {
            let yc: Vec<Fe> = flat.iter().map(|&f| y[f]).collect();
            if yc.iter().all(|c| c.is_zero()) {
                continue;
            }
            let fail = |reason: &str| ResolutionError::LiftingFailed { degree: n, reason: reason.to_string() };
            let solver = solvers.get(grade).ok_or_else(|| fail("no source component"))?;
            let xc = solver.solve(k, &yc).ok_or_else(|| fail("target is not a boundary"))?;
            let sflat = &source.components[source.component(grade).expect("solver without component")].1;
            for (i, &c) in xc.iter().enumerate() {
                x[sflat[i]] = c;
            }
        }
        Ok(x)
    }

    /// Rank of `d_n` as a linear map.
    pub fn differential_rank(&self, n: usize) -> usize {
        self.solvers(n).values().map(Solver::rank).sum()
    }

    /// `dim ker d_n = rank d_{n+1}` for every `n` below the top degree.
    pub fn exactness_ledger(&self) -> Vec<ExactnessEntry> {
        (0..self.max_degree())
            .map(|n| ExactnessEntry {
                degree: n,
                module_dim: self.layouts[n].total_dim(),
                kernel_dim: self.kernel_dims[n],
                image_dim: self.differential_rank(n + 1),
            })
            .collect()
    }

    /// No differential entry has a constant term.
    pub fn is_minimal(&self) -> bool {
        let d = self.algebra.dim();
        self.diffs.iter().flatten().all(|v| v.iter().step_by(d).all(|c| c.is_zero()))
    }

    /// `d_n(g_j)` is homogeneous of the grade of `g_j` for all `n, j`.
    pub fn is_homogeneous(&self) -> bool {
        (1..=self.max_degree()).all(|n| {
            let target = &self.layouts[n - 1];
            self.diffs[n].iter().zip(&self.layouts[n].gens).all(|(v, g)| {
                let Some(c) = target.component(g) else { return v.iter().all(|x| x.is_zero()) };
                v.iter().enumerate().all(|(f, x)| x.is_zero() || target.locate(f).0 == c)
            })
        })
    }

    /// `d_{n-1} ∘ d_n = 0` on generators, computed in the free modules, and
    /// `ε ∘ d_1 = 0`.
    pub fn check_d_squared(&self) -> bool {
        if self.max_degree() >= 1 && self.diffs[1].iter().any(|v| !v[0].is_zero()) {
            return false;
        }
        (2..=self.max_degree())
            .all(|n| self.diffs[n].iter().all(|v| self.apply_differential(n - 1, v).iter().all(|x| x.is_zero())))
    }

    /// Number of degree-`n` generators of each parity.
    pub fn parity_counts(&self, n: usize) -> [usize; 2] {
        let mut out = [0; 2];
        for g in &self.layouts[n].gens {
            out[g.parity as usize] += 1;
        }
        out
    }

    /// Same generators and differentials.
    pub fn same_as(&self, other: &MinimalResolution) -> bool {
        self.layouts.iter().map(|l| &l.gens).eq(other.layouts.iter().map(|l| &l.gens)) && self.diffs == other.diffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_exterior1, make_exterior2, make_kh, make_semidirect, make_semidirect_grouplike};
    use crate::gf::GaloisField;

    fn sound(res: &MinimalResolution) {
        assert!(res.is_minimal());
        assert!(res.is_homogeneous());
        assert!(res.check_d_squared());
        for e in res.exactness_ledger() {
            assert!(e.exact(), "{e:?}");
        }
    }

    #[test]
    fn exterior_one_generator() {
        let k = GaloisField::prime(3).unwrap();
        let res = minimal_resolution(&make_exterior1(&k), 6).unwrap();
        assert_eq!(res.ranks(), vec![1; 7]);
        for n in 0..=6 {
            assert_eq!(res.generator_parities(n), vec![(n % 2) as u8]);
        }
        sound(&res);
    }

    #[test]
    fn truncated_polynomial_is_periodic() {
        for p in [3, 5] {
            let k = GaloisField::prime(p).unwrap();
            let a = make_kh(&k, 1, 0, false).unwrap();
            let res = minimal_resolution(&a, 6).unwrap();
            assert_eq!(res.ranks(), vec![1; 7]);
            sound(&res);
            // d_1 = s, d_2 = s^{p-1}
            assert_eq!(res.entry(1, 0, 0), a.generator("s_1").unwrap());
            let e2 = res.entry(2, 0, 0);
            let top = a.pow(&a.generator("s_1").unwrap(), p - 1);
            assert!(a.scale(e2.coeffs[a.monomial_index(&[p - 1]).unwrap()], &top) == e2);
        }
    }

    #[test]
    fn exterior_two_generators() {
        let k = GaloisField::prime(3).unwrap();
        let res = minimal_resolution(&make_exterior2(&k), 5).unwrap();
        assert_eq!(res.ranks(), vec![1, 2, 3, 4, 5, 6]);
        sound(&res);
    }

    #[test]
    fn frobenius_kernel_case_ranks() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        let res = minimal_resolution(&a, 8).unwrap();
        assert_eq!(res.ranks(), (1..=9).collect::<Vec<_>>());
        sound(&res);
        assert_eq!(res.parity_counts(1), [1, 1]);
        let b = make_semidirect_grouplike(&k, 1, &[Fe::ONE]).unwrap();
        assert_eq!(minimal_resolution(&b, 6).unwrap().ranks(), (1..=7).collect::<Vec<_>>());
    }

    #[test]
    fn deterministic() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_semidirect(&k, 1, 1, &[Fe::ONE]).unwrap();
        let x = minimal_resolution(&a, 4).unwrap();
        let y = minimal_resolution(&a, 4).unwrap();
        assert!(x.same_as(&y));
        let mut z = minimal_resolution(&a, 2).unwrap();
        z.extend_to(4);
        assert!(x.same_as(&z));
    }

    #[test]
    fn lifting_boundaries() {
        let k = GaloisField::prime(3).unwrap();
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        let res = minimal_resolution(&a, 4).unwrap();
        for n in 1..=4 {
            for j in 0..res.rank(n) {
                let mut x = vec![Fe::ZERO; res.layout(n).total_dim()];
                x[j * a.dim() + 5] = Fe(2);
                let y = res.apply_differential(n, &x);
                let z = res.lift(n, &y).unwrap();
                assert_eq!(res.apply_differential(n, &z), y);
            }
        }
        let mut bad = vec![Fe::ZERO; res.layout(1).total_dim()];
        bad[0] = Fe::ONE;
        assert!(matches!(res.lift(2, &bad), Err(ResolutionError::LiftingFailed { .. })));
    }
}
