//! Finite-dimensional superalgebras given by generators and a confluent
//! rewriting system, with their PBW monomial bases.
//!
//! Generators are totally ordered; a rule rewrites `g h` with `g > h` into a
//! combination of ordered monomials, and each generator `g` satisfies
//! `g^{e_g} = 0`. Every algebra also carries a grading: each generator has a
//! parity and an integer degree vector, all rules are homogeneous, and the
//! resolution engine splits its linear algebra along these degrees.

pub mod hom;
pub mod witt;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{fp_linear_independent, Fe, GaloisField};
use crate::linalg::Matrix;

pub use hom::AlgebraMap;
pub use witt::{witt_sum_polys, WittPolynomials};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("parameters are linearly dependent over the prime field")]
    NotFaithful,
    #[error("at least one of r, s must be positive")]
    Degenerate,
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("Witt length {0} exceeds the supported maximum")]
    HeightTooLarge(usize),
    #[error("parameters do not lie in the algebra's field")]
    FieldMismatch,
    #[error("not an algebra map: {0}")]
    NotAlgebraMap(String),
    #[error("rewriting system is not confluent: {0}")]
    NotConfluent(String),
    #[error("algebra has no coproduct")]
    NoCoproduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// Exterior algebra on one odd generator.
    Exterior1,
    /// Exterior algebra on two odd generators `u, v`.
    Exterior2,
    /// `k[s_1..s_r, t_1..t_s] / (p-th powers)`.
    #[serde(rename = "kH")]
    KH,
    /// `Λ(u) ⊗ kH`, all generators commuting.
    Direct,
    Semidirect,
    SemidirectGrouplike,
}

impl AlgebraKind {
    fn as_str(self) -> &'static str {
        match self {
            AlgebraKind::Exterior1 => "exterior1",
            AlgebraKind::Exterior2 => "exterior2",
            AlgebraKind::KH => "kH",
            AlgebraKind::Direct => "direct",
            AlgebraKind::Semidirect => "semidirect",
            AlgebraKind::SemidirectGrouplike => "semidirect_grouplike",
        }
    }
}

/// Serializable identification of a constructed algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Descriptor {
    pub kind: AlgebraKind,
    pub field: String,
    pub modulus: Vec<u32>,
    pub r: usize,
    pub s: usize,
    /// Parameters as coefficient vectors over the prime field.
    pub mus: Vec<Vec<u32>>,
    pub coproduct: bool,
}

impl Descriptor {
    /// Canonical one-line text form, suitable as a cache key.
    pub fn canonical(&self) -> String {
        let mus: Vec<String> = self
            .mus
            .iter()
            .map(|c| format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let modulus: Vec<String> = self.modulus.iter().map(|x| x.to_string()).collect();
        format!(
            "kind={} field={} modulus=[{}] r={} s={} mu={} coproduct={}",
            self.kind.as_str(),
            self.field,
            modulus.join(","),
            self.r,
            self.s,
            if mus.is_empty() { "-".to_string() } else { mus.join(";") },
            self.coproduct
        )
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: u8,
    pub nilpotency: u32,
    pub degree: Vec<i32>,
}

/// Homogeneous degree: parity plus integer multidegree. The derived order
/// puts even before odd and then compares degrees lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grade {
    pub parity: u8,
    pub degree: Vec<i32>,
}

impl Grade {
    pub fn zero(n: usize) -> Self {
        Grade { parity: 0, degree: vec![0; n] }
    }

    pub fn add(&self, other: &Grade) -> Grade {
        Grade {
            parity: (self.parity + other.parity) % 2,
            degree: self.degree.iter().zip(&other.degree).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Grade) -> Grade {
        Grade {
            parity: (self.parity + other.parity) % 2,
            degree: self.degree.iter().zip(&other.degree).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Element in the PBW basis of a specific algebra, stored densely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub coeffs: Vec<Fe>,
}

impl AlgebraElement {
    pub fn zero(dim: usize) -> Self {
        AlgebraElement { coeffs: vec![Fe::ZERO; dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[i] = Fe::ONE;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn constant_term(&self) -> Fe {
        self.coeffs[0]
    }
}

pub type Monomial = Vec<u32>;
type Combination = Vec<(Monomial, Fe)>;

/// Word given by generator names with exponents, read left to right.
pub type Word<'a> = [(&'a str, u32)];

pub struct PresentedSuperalgebra {
    field: Arc<GaloisField>,
    descriptor: Descriptor,
    mus: Vec<Fe>,
    generators: Vec<Generator>,
    rules: BTreeMap<(usize, usize), Combination>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    grades: Vec<Grade>,
    table: Vec<Vec<(u32, Fe)>>,
    gen_index: Vec<usize>,
    coproduct: Option<Vec<Vec<(usize, usize, Fe)>>>,
}

impl fmt::Debug for PresentedSuperalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PresentedSuperalgebra({}, dim {})", self.descriptor, self.dim())
    }
}

/// Left multiplication of a normal monomial by a generator, by recursive
/// application of the rules. Only used while building the structure
/// constants and by the confluence check.
struct Rewriter<'a> {
    field: &'a GaloisField,
    generators: &'a [Generator],
    rules: &'a BTreeMap<(usize, usize), Combination>,
    memo: HashMap<(usize, Monomial), Combination>,
}

impl<'a> Rewriter<'a> {
    fn gen_times(&mut self, g: usize, m: &Monomial, depth: usize) -> Combination {
        assert!(depth < 256, "rewriting did not terminate");
        if let Some(hit) = self.memo.get(&(g, m.clone())) {
            return hit.clone();
        }
        let first = m.iter().position(|&e| e > 0);
        let result = match first {
            Some(h) if h < g => {
                let mut rest = m.clone();
                rest[h] -= 1;
                let rhs = self.rules.get(&(g, h)).cloned().unwrap_or_else(|| {
                    // unlisted pairs commute
                    let mut w = vec![0; m.len()];
                    w[h] += 1;
                    w[g] += 1;
                    vec![(w, Fe::ONE)]
                });
                let mut acc: BTreeMap<Monomial, Fe> = BTreeMap::new();
                for (w, c) in rhs {
                    for (mono, c2) in self.mono_times_mono(&w, &rest, depth + 1) {
                        let slot = acc.entry(mono).or_insert(Fe::ZERO);
                        *slot = self.field.add(*slot, self.field.mul(c, c2));
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            }
            _ => {
                let mut out = m.clone();
                out[g] += 1;
                if out[g] >= self.generators[g].nilpotency {
                    Vec::new()
                } else {
                    vec![(out, Fe::ONE)]
                }
            }
        };
        self.memo.insert((g, m.clone()), result.clone());
        result
    }

    fn elem_gen_times(&mut self, g: usize, x: &Combination, depth: usize) -> Combination {
        let mut acc: BTreeMap<Monomial, Fe> = BTreeMap::new();
        for (m, c) in x {
            for (mono, c2) in self.gen_times(g, m, depth) {
                let slot = acc.entry(mono).or_insert(Fe::ZERO);
                *slot = self.field.add(*slot, self.field.mul(*c, c2));
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn mono_times_mono(&mut self, a: &Monomial, b: &Monomial, depth: usize) -> Combination {
        let mut x: Combination = vec![(b.clone(), Fe::ONE)];
        for g in (0..a.len()).rev() {
            for _ in 0..a[g] {
                x = self.elem_gen_times(g, &x, depth);
            }
        }
        x
    }

    fn elem_times_mono(&mut self, a: &Combination, b: &Monomial) -> Combination {
        let mut acc: BTreeMap<Monomial, Fe> = BTreeMap::new();
        for (w, c) in a {
            for (mono, c2) in self.mono_times_mono(w, b, 0) {
                let slot = acc.entry(mono).or_insert(Fe::ZERO);
                *slot = self.field.add(*slot, self.field.mul(*c, c2));
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

fn unit(n: usize, i: usize) -> Monomial {
    let mut m = vec![0; n];
    m[i] = 1;
    m
}

struct Builder {
    field: Arc<GaloisField>,
    descriptor: Descriptor,
    mus: Vec<Fe>,
    generators: Vec<Generator>,
    rules: BTreeMap<(usize, usize), Combination>,
    coproduct: Option<Vec<Vec<(Monomial, Monomial, Fe)>>>,
}

impl Builder {
    fn gen(&mut self, name: &str, parity: u8, nilpotency: u32, degree: Vec<i32>) -> usize {
        self.generators.push(Generator { name: name.to_string(), parity, nilpotency, degree });
        self.generators.len() - 1
    }

    fn rule(&mut self, g: usize, h: usize, rhs: Combination) {
        assert!(g > h);
        self.rules.insert((g, h), rhs);
    }

    fn build(self) -> PresentedSuperalgebra {
        let n = self.generators.len();
        let ndeg = self.generators[0].degree.len();
        let grade_of = |m: &Monomial| -> Grade {
            let mut g = Grade::zero(ndeg);
            for (i, &e) in m.iter().enumerate() {
                let gi = &self.generators[i];
                g.parity = ((g.parity as u32 + e * gi.parity as u32) % 2) as u8;
                for (d, &x) in g.degree.iter_mut().zip(&gi.degree) {
                    *d += e as i32 * x;
                }
            }
            g
        };
        for (&(g, h), rhs) in &self.rules {
            let lhs = {
                let mut m = unit(n, g);
                m[h] += 1;
                grade_of(&m)
            };
            for (w, _) in rhs {
                assert_eq!(grade_of(w), lhs, "rule for ({g},{h}) is not homogeneous");
            }
        }
        // PBW basis in lexicographic order of exponent vectors
        let mut basis: Vec<Monomial> = vec![vec![]];
        for g in &self.generators {
            let mut next = Vec::new();
            for m in &basis {
                for e in 0..g.nilpotency {
                    let mut m2 = m.clone();
                    m2.push(e);
                    next.push(m2);
                }
            }
            basis = next;
        }
        let index: HashMap<Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let grades = basis.iter().map(grade_of).collect();
        let dim = basis.len();
        let mut rw = Rewriter { field: &self.field, generators: &self.generators, rules: &self.rules, memo: HashMap::new() };
        let mut table = vec![Vec::new(); dim * dim];
        for (a, ma) in basis.iter().enumerate() {
            for (b, mb) in basis.iter().enumerate() {
                let prod = rw.mono_times_mono(ma, mb, 0);
                table[a * dim + b] = prod.into_iter().map(|(m, c)| (index[&m] as u32, c)).collect();
            }
        }
        let gen_index = (0..n).map(|g| index[&unit(n, g)]).collect();
        let coproduct = self.coproduct.map(|cop| {
            cop.into_iter()
                .map(|terms| terms.into_iter().map(|(a, b, c)| (index[&a], index[&b], c)).collect())
                .collect()
        });
        PresentedSuperalgebra {
            field: self.field,
            descriptor: self.descriptor,
            mus: self.mus,
            generators: self.generators,
            rules: self.rules,
            basis,
            index,
            grades,
            table,
            gen_index,
            coproduct,
        }
    }
}

fn check_params(k: &GaloisField, mus: &[Fe], s: usize) -> Result<(), AlgebraError> {
    if mus.len() != s {
        return Err(AlgebraError::ParameterCount { expected: s, got: mus.len() });
    }
    if mus.iter().any(|m| m.0 as u32 >= k.order()) {
        return Err(AlgebraError::FieldMismatch);
    }
    if !fp_linear_independent(k, mus) {
        return Err(AlgebraError::NotFaithful);
    }
    Ok(())
}

fn descriptor(k: &GaloisField, kind: AlgebraKind, r: usize, s: usize, mus: &[Fe], coproduct: bool) -> Descriptor {
    Descriptor {
        kind,
        field: k.spec(),
        modulus: k.modulus().to_vec(),
        r,
        s,
        mus: mus.iter().map(|&m| k.coeffs(m)).collect(),
        coproduct,
    }
}

fn builder(field: &Arc<GaloisField>, descriptor: Descriptor, mus: &[Fe]) -> Builder {
    Builder {
        field: Arc::clone(field),
        descriptor,
        mus: mus.to_vec(),
        generators: Vec::new(),
        rules: BTreeMap::new(),
        coproduct: None,
    }
}

/// Exterior algebra on one odd generator `u`.
pub fn make_exterior1(field: &Arc<GaloisField>) -> Arc<PresentedSuperalgebra> {
    let mut b = builder(field, descriptor(field, AlgebraKind::Exterior1, 0, 0, &[], false), &[]);
    b.gen("u", 1, 2, vec![1]);
    Arc::new(b.build())
}

/// Exterior algebra on two odd generators, `u^2 = v^2 = uv + vu = 0`.
pub fn make_exterior2(field: &Arc<GaloisField>) -> Arc<PresentedSuperalgebra> {
    let mut b = builder(field, descriptor(field, AlgebraKind::Exterior2, 0, 0, &[], false), &[]);
    let u = b.gen("u", 1, 2, vec![1, 0]);
    let v = b.gen("v", 1, 2, vec![0, 1]);
    let minus_one = field.from_int(-1);
    b.rule(v, u, vec![(vec![1, 1], minus_one)]);
    Arc::new(b.build())
}

/// The commutative algebra `kH = k[s_1..s_r, t_1..t_s]/(p-th powers)`,
/// optionally with its coproduct.
pub fn make_kh(
    field: &Arc<GaloisField>,
    r: usize,
    s: usize,
    with_coproduct: bool,
) -> Result<Arc<PresentedSuperalgebra>, AlgebraError> {
    if r + s == 0 {
        return Err(AlgebraError::Degenerate);
    }
    let p = field.characteristic();
    let n = r + s;
    let mut b = builder(field, descriptor(field, AlgebraKind::KH, r, s, &[], with_coproduct), &[]);
    for i in 0..r {
        b.gen(&format!("s_{}", i + 1), 0, p, unit(n, i).iter().map(|&x| x as i32).collect());
    }
    for j in 0..s {
        b.gen(&format!("t_{}", j + 1), 0, p, unit(n, r + j).iter().map(|&x| x as i32).collect());
    }
    if with_coproduct {
        let witt = witt_sum_polys(p, r)?;
        let mut cop = Vec::with_capacity(n);
        for i in 0..r {
            // x_k = s_k ⊗ 1, y_k = 1 ⊗ s_k
            let mut terms = Vec::new();
            for (e, &c) in &witt.polys[i] {
                let (ex, ey) = e.split_at(r);
                if ex.iter().chain(ey).any(|&k| k >= p) {
                    continue;
                }
                let mut left = ex.to_vec();
                left.resize(n, 0);
                let mut right = ey.to_vec();
                right.resize(n, 0);
                terms.push((left, right, field.from_int(c as i64)));
            }
            cop.push(terms);
        }
        for j in 0..s {
            let t = unit(n, r + j);
            let one = vec![0; n];
            cop.push(vec![(t.clone(), one.clone(), Fe::ONE), (one, t.clone(), Fe::ONE), (t.clone(), t, Fe::ONE)]);
        }
        b.coproduct = Some(cop);
    }
    Ok(Arc::new(b.build()))
}

/// `Λ(u) ⊗ kH` with all generators commuting.
pub fn make_direct(field: &Arc<GaloisField>, r: usize, s: usize) -> Result<Arc<PresentedSuperalgebra>, AlgebraError> {
    if r + s == 0 {
        return Err(AlgebraError::Degenerate);
    }
    let p = field.characteristic();
    let n = 1 + r + s;
    let deg = |i: usize| unit(n, i).iter().map(|&x| x as i32).collect::<Vec<_>>();
    let mut b = builder(field, descriptor(field, AlgebraKind::Direct, r, s, &[], false), &[]);
    b.gen("u", 1, 2, deg(0));
    for i in 0..r {
        b.gen(&format!("s_{}", i + 1), 0, p, deg(1 + i));
    }
    for j in 0..s {
        b.gen(&format!("t_{}", j + 1), 0, p, deg(1 + r + j));
    }
    Ok(Arc::new(b.build()))
}

fn semidirect_relations(b: &mut Builder, r: usize, s: usize, mus: &[Fe]) {
    let p = b.field.characteristic();
    let n = 2 + r + s;
    let graded_by_weight = s == 0;
    let deg = |odd: i32, weight: i32| if graded_by_weight { vec![odd, weight] } else { vec![odd] };
    let u = b.gen("u", 1, 2, deg(1, 0));
    let v = b.gen("v", 1, 2, deg(1, 1));
    for i in 0..r {
        b.gen(&format!("s_{}", i + 1), 0, p, deg(0, p.pow(i as u32) as i32));
    }
    for j in 0..s {
        b.gen(&format!("t_{}", j + 1), 0, p, deg(0, 0));
    }
    let minus_one = b.field.from_int(-1);
    b.rule(v, u, vec![(unit(n, u).iter().zip(unit(n, v)).map(|(a, c)| a + c).collect(), minus_one)]);
    for i in 0..r {
        let si = 2 + i;
        let mut us = unit(n, u);
        us[si] = 1;
        // v s_1^{p-1} ... s_{i-1}^{p-1}, or just v for i = 1
        let mut tail = unit(n, v);
        for k in 0..i {
            tail[2 + k] = p - 1;
        }
        b.rule(si, u, vec![(us, Fe::ONE), (tail, Fe::ONE)]);
        let mut vs = unit(n, v);
        vs[si] = 1;
        b.rule(si, v, vec![(vs, Fe::ONE)]);
    }
    for j in 0..s {
        let tj = 2 + r + j;
        let mu = mus[j];
        let mut ut = unit(n, u);
        ut[tj] = 1;
        let mut vt = unit(n, v);
        vt[tj] = 1;
        let mut rhs = vec![(ut, Fe::ONE)];
        if !mu.is_zero() {
            rhs.push((unit(n, v), mu));
            rhs.push((vt.clone(), mu));
        }
        b.rule(tj, u, rhs);
        b.rule(tj, v, vec![(vt, Fe::ONE)]);
    }
}

/// Group algebra of `(G_a^- × G_a^-) ⋊ (G_{a(r)} × (Z/p)^s)` with
/// parameters `μ_1..μ_s`.
pub fn make_semidirect(
    field: &Arc<GaloisField>,
    r: usize,
    s: usize,
    mus: &[Fe],
) -> Result<Arc<PresentedSuperalgebra>, AlgebraError> {
    if r + s == 0 {
        return Err(AlgebraError::Degenerate);
    }
    check_params(field, mus, s)?;
    let mut b = builder(field, descriptor(field, AlgebraKind::Semidirect, r, s, mus, false), mus);
    semidirect_relations(&mut b, r, s, mus);
    Ok(Arc::new(b.build()))
}

/// The same semidirect product for `H = (Z/p)^s` presented through
/// `t_i = g_i - 1` for grouplike `g_i` with `g_i u = (u + μ_i v) g_i`.
pub fn make_semidirect_grouplike(
    field: &Arc<GaloisField>,
    s: usize,
    mus: &[Fe],
) -> Result<Arc<PresentedSuperalgebra>, AlgebraError> {
    if s == 0 {
        return Err(AlgebraError::Degenerate);
    }
    check_params(field, mus, s)?;
    let mut b = builder(field, descriptor(field, AlgebraKind::SemidirectGrouplike, 0, s, mus, false), mus);
    semidirect_relations(&mut b, 0, s, mus);
    Ok(Arc::new(b.build()))
}

/// Rebuilds an algebra from its descriptor.
pub fn from_descriptor(d: &Descriptor) -> Result<Arc<PresentedSuperalgebra>, AlgebraError> {
    let p: u32 = d.field.split('^').next().and_then(|x| x.parse().ok()).ok_or(AlgebraError::FieldMismatch)?;
    let field = GaloisField::with_modulus(p, d.modulus.clone()).map_err(|_| AlgebraError::FieldMismatch)?;
    let mus: Vec<Fe> = d.mus.iter().map(|c| field.from_coeffs(c)).collect();
    match d.kind {
        AlgebraKind::Exterior1 => Ok(make_exterior1(&field)),
        AlgebraKind::Exterior2 => Ok(make_exterior2(&field)),
        AlgebraKind::KH => make_kh(&field, d.r, d.s, d.coproduct),
        AlgebraKind::Direct => make_direct(&field, d.r, d.s),
        AlgebraKind::Semidirect => make_semidirect(&field, d.r, d.s, &mus),
        AlgebraKind::SemidirectGrouplike => make_semidirect_grouplike(&field, d.s, &mus),
    }
}

impl PresentedSuperalgebra {
    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn mus(&self) -> &[Fe] {
        &self.mus
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn grade(&self, basis_index: usize) -> &Grade {
        &self.grades[basis_index]
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn grading_rank(&self) -> usize {
        self.generators[0].degree.len()
    }

    pub fn generator_grade(&self, g: usize) -> &Grade {
        &self.grades[self.gen_index[g]]
    }

    /// Basis index of the monomial consisting of generator `g` alone.
    pub fn generator_basis_index(&self, g: usize) -> usize {
        self.gen_index[g]
    }

    pub fn monomial_index(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, AlgebraError> {
        let norm = |s: &str| s.replace('_', "");
        self.generators
            .iter()
            .position(|g| g.name == name || norm(&g.name) == norm(name))
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn rules(&self) -> &BTreeMap<(usize, usize), Vec<(Monomial, Fe)>> {
        &self.rules
    }

    /// Structure constants: the product of basis elements `a` and `b`.
    #[inline]
    pub fn product(&self, a: usize, b: usize) -> &[(u32, Fe)] {
        &self.table[a * self.dim() + b]
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::basis(self.dim(), 0)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.dim())
    }

    pub fn generator(&self, name: &str) -> Result<AlgebraElement, AlgebraError> {
        let g = self.generator_index(name)?;
        Ok(AlgebraElement::basis(self.dim(), self.gen_index[g]))
    }

    pub fn monomial(&self, m: &[u32]) -> AlgebraElement {
        AlgebraElement::basis(self.dim(), self.index[m])
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let k = &self.field;
        let mut out = self.zero();
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = k.mul(x, y);
                for &(m, c) in self.product(i, j) {
                    let slot = &mut out.coeffs[m as usize];
                    *slot = k.add(*slot, k.mul(xy, c));
                }
            }
        }
        out
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.field.add(x, y)).collect() }
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.field.sub(x, y)).collect() }
    }

    pub fn scale(&self, c: Fe, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coeffs: a.coeffs.iter().map(|&x| self.field.mul(c, x)).collect() }
    }

    pub fn pow(&self, a: &AlgebraElement, e: u32) -> AlgebraElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Rewrites a word to its PBW normal form.
    pub fn normal_form(&self, word: &Word) -> Result<AlgebraElement, AlgebraError> {
        let mut x = self.one();
        for &(name, e) in word.iter().rev() {
            let g = self.generator(name)?;
            for _ in 0..e {
                x = self.mul(&g, &x);
            }
        }
        Ok(x)
    }

    /// Matrix of left multiplication by `a`; column `j` is `a * basis_j`.
    pub fn left_mult_matrix(&self, a: &AlgebraElement) -> Matrix {
        let d = self.dim();
        let k = &self.field;
        let mut m = Matrix::zeros(d, d);
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..d {
                for &(t, c) in self.product(i, j) {
                    let cur = m.get(t as usize, j);
                    m.set(t as usize, j, k.add(cur, k.mul(x, c)));
                }
            }
        }
        m
    }

    /// Parity of a homogeneous element, `None` if it mixes parities or is
    /// zero.
    pub fn parity_of(&self, a: &AlgebraElement) -> Option<u8> {
        let mut par = None;
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pi = self.grades[i].parity;
            match par {
                None => par = Some(pi),
                Some(q) if q != pi => return None,
                _ => {}
            }
        }
        par
    }

    pub fn format_monomial(&self, i: usize) -> String {
        let m = &self.basis[i];
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| {
                let name = &self.generators[g].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, a: &AlgebraElement) -> String {
        let terms: Vec<String> = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let mono = self.format_monomial(i);
                match (c == Fe::ONE, i == 0) {
                    (true, _) => mono,
                    (false, true) => self.field.format(c),
                    (false, false) => format!("({})*{}", self.field.format(c), mono),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Checks all overlap ambiguities of the rewriting system: triples
    /// `g > h > k` and the overlaps of each rule with nilpotency relations.
    pub fn check_confluence(&self) -> Result<(), AlgebraError> {
        let n = self.num_generators();
        let mut rw = Rewriter { field: &self.field, generators: &self.generators, rules: &self.rules, memo: HashMap::new() };
        let rule = |g: usize, h: usize| -> Combination {
            self.rules.get(&(g, h)).cloned().unwrap_or_else(|| {
                let mut w = unit(n, h);
                w[g] += 1;
                vec![(w, Fe::ONE)]
            })
        };
        let canon = |c: Combination| -> BTreeMap<Monomial, Fe> { c.into_iter().filter(|(_, x)| !x.is_zero()).collect() };
        for g in 0..n {
            for h in 0..g {
                for k in 0..h {
                    let hk = rw.gen_times(h, &unit(n, k), 0);
                    let left = rw.elem_gen_times(g, &hk, 0);
                    let right = rw.elem_times_mono(&rule(g, h), &unit(n, k));
                    if canon(left) != canon(right) {
                        return Err(AlgebraError::NotConfluent(format!(
                            "overlap {} {} {}",
                            self.generators[g].name, self.generators[h].name, self.generators[k].name
                        )));
                    }
                }
                let mut x = rule(g, h);
                for _ in 1..self.generators[g].nilpotency {
                    x = rw.elem_gen_times(g, &x, 0);
                }
                if !x.is_empty() {
                    return Err(AlgebraError::NotConfluent(format!(
                        "{}^{} {} is nonzero",
                        self.generators[g].name, self.generators[g].nilpotency, self.generators[h].name
                    )));
                }
                let mut hp = vec![0; n];
                hp[h] = self.generators[h].nilpotency - 1;
                let y = if hp[h] == 0 { rule(g, h) } else { rw.elem_times_mono(&rule(g, h), &hp) };
                if !y.is_empty() {
                    return Err(AlgebraError::NotConfluent(format!(
                        "{} {}^{} is nonzero",
                        self.generators[g].name, self.generators[h].name, self.generators[h].nilpotency
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest `N` with `J^N = 0`, or `None` if `J` is not nilpotent.
    pub fn augmentation_nilpotency(&self) -> Option<usize> {
        let d = self.dim();
        let k = &self.field;
        // J^i as a subspace, starting from J itself
        let mut current: Vec<Vec<Fe>> = (1..d).map(|i| AlgebraElement::basis(d, i).coeffs).collect();
        for n in 1..=d + 1 {
            if current.is_empty() {
                return Some(n);
            }
            let mut next = crate::linalg::Echelon::new(d);
            for g in 0..self.num_generators() {
                let gi = self.gen_index[g];
                for v in &current {
                    let mut w = vec![Fe::ZERO; d];
                    for (j, &c) in v.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for &(t, x) in self.product(gi, j) {
                            w[t as usize] = k.add(w[t as usize], k.mul(c, x));
                        }
                    }
                    next.insert(k, &w);
                }
            }
            current = next.basis().to_vec();
        }
        None
    }

    pub fn has_coproduct(&self) -> bool {
        self.coproduct.is_some()
    }

    /// `Δ(g)` for a generator, as `(left basis index, right basis index,
    /// coefficient)` triples.
    pub fn coproduct_of_generator(&self, g: usize) -> Result<&[(usize, usize, Fe)], AlgebraError> {
        self.coproduct.as_ref().map(|c| c[g].as_slice()).ok_or(AlgebraError::NoCoproduct)
    }

    fn tensor_mul(&self, a: &BTreeMap<(usize, usize), Fe>, b: &BTreeMap<(usize, usize), Fe>) -> BTreeMap<(usize, usize), Fe> {
        let k = &self.field;
        let mut out: BTreeMap<(usize, usize), Fe> = BTreeMap::new();
        for (&(a1, a2), &x) in a {
            for (&(b1, b2), &y) in b {
                // kH is purely even, so no Koszul signs
                for &(l, c1) in self.product(a1, b1) {
                    for &(r, c2) in self.product(a2, b2) {
                        let slot = out.entry((l as usize, r as usize)).or_insert(Fe::ZERO);
                        *slot = k.add(*slot, k.mul(k.mul(x, y), k.mul(c1, c2)));
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `Δ` on every basis monomial, extended multiplicatively from the
    /// generators.
    pub fn coproduct_on_basis(&self) -> Result<Vec<BTreeMap<(usize, usize), Fe>>, AlgebraError> {
        let cop = self.coproduct.as_ref().ok_or(AlgebraError::NoCoproduct)?;
        let gens: Vec<BTreeMap<(usize, usize), Fe>> =
            cop.iter().map(|t| t.iter().map(|&(a, b, c)| ((a, b), c)).collect()).collect();
        Ok(self
            .basis
            .iter()
            .map(|m| {
                let mut acc: BTreeMap<(usize, usize), Fe> = BTreeMap::from([((0, 0), Fe::ONE)]);
                for (g, &e) in m.iter().enumerate() {
                    for _ in 0..e {
                        acc = self.tensor_mul(&acc, &gens[g]);
                    }
                }
                acc
            })
            .collect())
    }

    /// Coassociativity, counit and multiplicativity of the coproduct.
    pub fn check_hopf_laws(&self) -> Result<(), String> {
        let k = &self.field;
        let cop = self.coproduct_on_basis().map_err(|e| e.to_string())?;
        let d = self.dim();
        for (i, delta) in cop.iter().enumerate() {
            // counit on either side
            let mut left = vec![Fe::ZERO; d];
            let mut right = vec![Fe::ZERO; d];
            for (&(a, b), &c) in delta {
                if a == 0 {
                    left[b] = k.add(left[b], c);
                }
                if b == 0 {
                    right[a] = k.add(right[a], c);
                }
            }
            let e = AlgebraElement::basis(d, i).coeffs;
            if left != e || right != e {
                return Err(format!("counit fails on {}", self.format_monomial(i)));
            }
            let mut lhs: BTreeMap<(usize, usize, usize), Fe> = BTreeMap::new();
            let mut rhs: BTreeMap<(usize, usize, usize), Fe> = BTreeMap::new();
            for (&(a, b), &c) in delta {
                for (&(a1, a2), &c2) in &cop[a] {
                    let slot = lhs.entry((a1, a2, b)).or_insert(Fe::ZERO);
                    *slot = k.add(*slot, k.mul(c, c2));
                }
                for (&(b1, b2), &c2) in &cop[b] {
                    let slot = rhs.entry((a, b1, b2)).or_insert(Fe::ZERO);
                    *slot = k.add(*slot, k.mul(c, c2));
                }
            }
            lhs.retain(|_, c| !c.is_zero());
            rhs.retain(|_, c| !c.is_zero());
            if lhs != rhs {
                return Err(format!("coassociativity fails on {}", self.format_monomial(i)));
            }
        }
        for a in 0..d {
            for b in 0..d {
                let mut lhs: BTreeMap<(usize, usize), Fe> = BTreeMap::new();
                for &(m, c) in self.product(a, b) {
                    for (&key, &x) in &cop[m as usize] {
                        let slot = lhs.entry(key).or_insert(Fe::ZERO);
                        *slot = k.add(*slot, k.mul(c, x));
                    }
                }
                lhs.retain(|_, c| !c.is_zero());
                if lhs != self.tensor_mul(&cop[a], &cop[b]) {
                    return Err(format!(
                        "coproduct not multiplicative on {} * {}",
                        self.format_monomial(a),
                        self.format_monomial(b)
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, m: u32) -> Arc<GaloisField> {
        GaloisField::new(p, m).unwrap()
    }

    #[test]
    fn semidirect_relations_rewrite() {
        let k = f(3, 1);
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        let su = a.normal_form(&[("s_1", 1), ("u", 1)]).unwrap();
        let expected = a.add(&a.normal_form(&[("u", 1), ("s_1", 1)]).unwrap(), &a.generator("v").unwrap());
        assert_eq!(su, expected);
        let vu = a.normal_form(&[("v", 1), ("u", 1)]).unwrap();
        assert_eq!(vu, a.scale(k.from_int(-1), &a.normal_form(&[("u", 1), ("v", 1)]).unwrap()));
        assert!(matches!(a.normal_form(&[("x", 1)]), Err(AlgebraError::UnknownGenerator(_))));
    }

    #[test]
    fn grouplike_relation() {
        let k = f(3, 1);
        let mu = Fe(2);
        let a = make_semidirect(&k, 0, 1, &[mu]).unwrap();
        let tu = a.normal_form(&[("t_1", 1), ("u", 1)]).unwrap();
        let ut = a.normal_form(&[("u", 1), ("t_1", 1)]).unwrap();
        let v = a.generator("v").unwrap();
        let vt = a.normal_form(&[("v", 1), ("t_1", 1)]).unwrap();
        let expected = a.add(&ut, &a.scale(mu, &a.add(&v, &vt)));
        assert_eq!(tu, expected);
    }

    #[test]
    fn dimensions() {
        let k = f(3, 1);
        assert_eq!(make_exterior2(&k).dim(), 4);
        assert_eq!(make_kh(&k, 1, 1, true).unwrap().dim(), 9);
        assert_eq!(make_semidirect(&k, 1, 0, &[]).unwrap().dim(), 12);
        assert_eq!(make_semidirect(&k, 1, 1, &[Fe::ONE]).unwrap().dim(), 36);
        assert_eq!(make_semidirect_grouplike(&k, 1, &[Fe::ONE]).unwrap().dim(), 12);
        assert_eq!(make_kh(&k, 0, 0, false).unwrap_err(), AlgebraError::Degenerate);
        assert_eq!(make_semidirect(&k, 0, 2, &[Fe(1), Fe(2)]).unwrap_err(), AlgebraError::NotFaithful);
        let k9 = f(3, 2);
        assert_eq!(make_semidirect(&k9, 0, 2, &[Fe::ONE, k9.generator()]).unwrap().dim(), 36);
    }

    #[test]
    fn exterior_products() {
        let k = f(3, 1);
        let a = make_exterior2(&k);
        let uv = a.normal_form(&[("u", 1), ("v", 1)]).unwrap();
        assert!(a.mul(&uv, &uv).is_zero());
        assert_eq!(a.parity_of(&uv), Some(0));
        let u = a.generator("u").unwrap();
        assert_eq!(a.left_mult_matrix(&u).rank(&k), 2);
        assert_eq!(a.left_mult_matrix(&a.one()), Matrix::identity(4));
    }

    #[test]
    fn confluence_of_all_constructions() {
        for p in [3, 5] {
            let k = f(p, 1);
            make_exterior2(&k).check_confluence().unwrap();
            for (r, s) in [(1, 0), (2, 0), (3, 0), (1, 1), (0, 1)] {
                let mus: Vec<Fe> = (0..s).map(|_| Fe::ONE).collect();
                make_semidirect(&k, r, s, &mus).unwrap().check_confluence().unwrap();
            }
        }
        let k9 = f(3, 2);
        let a = make_semidirect(&k9, 0, 2, &[Fe::ONE, k9.generator()]).unwrap();
        a.check_confluence().unwrap();
    }

    #[test]
    fn broken_rule_is_detected() {
        // s u = u s + u is not confluent with u^2 = 0 (s u^2 would give 2 u^2 s + ... )
        let k = f(3, 1);
        let mut b = builder(&k, descriptor(&k, AlgebraKind::Direct, 1, 0, &[], false), &[]);
        let u = b.gen("u", 0, 2, vec![0]);
        let s = b.gen("s", 0, 3, vec![0]);
        b.rule(s, u, vec![(vec![1, 1], Fe::ONE), (vec![1, 0], Fe::ONE)]);
        let alg = b.build();
        assert!(alg.check_confluence().is_err());
    }

    #[test]
    fn augmentation_ideal_nilpotent() {
        let k = f(3, 1);
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        let n = a.augmentation_nilpotency().unwrap();
        assert!(n <= 2 + 2 + (3 - 1) + 1, "J^{n} first vanishes");
        assert_eq!(make_kh(&k, 1, 0, false).unwrap().augmentation_nilpotency(), Some(3));
    }

    #[test]
    fn hopf_laws() {
        for p in [3, 5] {
            let k = f(p, 1);
            for (r, s) in [(1, 0), (2, 0), (1, 1), (0, 2), (3, 0)] {
                if p == 5 && r == 3 {
                    continue;
                }
                let a = make_kh(&k, r, s, true).unwrap();
                a.check_hopf_laws().unwrap_or_else(|e| panic!("p={p} r={r} s={s}: {e}"));
            }
        }
    }

    #[test]
    fn witt_coproduct_second_generator() {
        let k = f(3, 1);
        let a = make_kh(&k, 2, 0, true).unwrap();
        let delta = a.coproduct_of_generator(1).unwrap();
        let s1 = a.monomial_index(&[1, 0]).unwrap();
        let s1sq = a.monomial_index(&[2, 0]).unwrap();
        let s2 = a.monomial_index(&[0, 1]).unwrap();
        let mut got: Vec<(usize, usize, Fe)> = delta.to_vec();
        got.sort();
        let mut expected = vec![(s2, 0, Fe(1)), (0, s2, Fe(1)), (s1sq, s1, Fe(2)), (s1, s1sq, Fe(2))];
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn descriptor_round_trip() {
        let k9 = f(3, 2);
        let a = make_semidirect(&k9, 0, 2, &[Fe::ONE, k9.generator()]).unwrap();
        let d = a.descriptor().clone();
        assert_eq!(d.canonical(), "kind=semidirect field=3^2 modulus=[1,0,1] r=0 s=2 mu=[1,0];[0,1] coproduct=false");
        let b = from_descriptor(&d).unwrap();
        assert_eq!(b.dim(), 36);
        assert_eq!(b.descriptor(), &d);
    }
}
