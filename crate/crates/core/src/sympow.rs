//! Symmetric powers `S^n(V^#)` of the natural two-dimensional module as
//! explicit `kH`-modules.
//!
//! `S^n` has basis `X^i Y^{n-i}` indexed by `i`. The generators act by
//! `s_j(X^a Y^b) = binom(a, p^{j-1}) X^{a-p^{j-1}} Y^{b+p^{j-1}}` and
//! `(1 + t_j)(X^a Y^b) = (X - μ_j Y)^a Y^b`. Homogeneous polynomials of
//! degree `n` are stored as coefficient vectors in the same basis.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{make_kh, AlgebraError, AlgebraKind, PresentedSuperalgebra};
use crate::gf::{fp_linear_independent, Fe, GaloisField};
use crate::linalg::{Echelon, Matrix};
use crate::module::{check_equivariant, verify_direct_sum, ModuleError, ShiftedPoint, SuperModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("span of p^{0}-th powers is not closed under the action")]
    NotInvariant(u32),
    #[error("degree {0} out of range: {1}")]
    BadDegree(usize, String),
    #[error("sample field does not contain the parameter field")]
    NoEmbedding,
}

/// `binom(n, k) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut result = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        // small binomial by multiplicative formula mod p
        let mut b = 1u64;
        for t in 0..ki {
            b = b * ((ni - t) % p) % p;
            b = b * pow_mod(t + 1, p - 2, p) % p;
        }
        result = result * b % p;
        n /= p;
        k /= p;
    }
    result
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Product of homogeneous polynomials given by `X`-exponent coefficient
/// vectors.
pub fn poly_mul(k: &GaloisField, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    out
}

pub fn poly_pow(k: &GaloisField, a: &[Fe], e: u64) -> Vec<Fe> {
    (0..e).fold(vec![Fe::ONE], |acc, _| poly_mul(k, &acc, a))
}

/// `Y^m` in degree `m`.
pub fn y_power(m: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; m + 1];
    v[0] = Fe::ONE;
    v
}

/// Matrix of multiplication by `f` from `S^m` to `S^{m + deg f}`.
pub fn multiplication_matrix(f: &[Fe], m: usize) -> Matrix {
    let d = f.len() - 1;
    let mut out = Matrix::zeros(m + d + 1, m + 1);
    for i in 0..=m {
        for (c, &x) in f.iter().enumerate() {
            out.set(i + c, i, x);
        }
    }
    out
}

pub fn format_poly(k: &GaloisField, f: &[Fe]) -> String {
    let n = f.len() - 1;
    let mut terms = Vec::new();
    for i in (0..=n).rev() {
        let c = f[i];
        if c.is_zero() {
            continue;
        }
        let mono = match (i, n - i) {
            (0, 0) => String::new(),
            (a, 0) => xy("X", a),
            (0, b) => xy("Y", b),
            (a, b) => format!("{}{}", xy("X", a), xy("Y", b)),
        };
        let coef = k.format(c);
        terms.push(match (mono.is_empty(), c == Fe::ONE) {
            (true, _) => coef,
            (false, true) => mono,
            (false, false) => format!("{coef}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn xy(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// A symmetric power together with its degree.
#[derive(Debug, Clone)]
pub struct SymPower {
    pub n: usize,
    pub module: SuperModule,
}

/// Certificate for `S^n ≅ kH ⊕ S^{n - p^{r+s}}`.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionCertificate {
    pub n: usize,
    pub dim: usize,
    pub free_dim: usize,
    pub complement_dim: usize,
    pub free_summand_projective: bool,
    pub complement_projective: bool,
    #[serde(skip)]
    pub free_embedding: Matrix,
    #[serde(skip)]
    pub complement_embedding: Matrix,
}

/// Frobenius twist realized as a subspace of a larger symmetric power.
#[derive(Debug, Clone)]
pub struct Twist {
    pub j: u32,
    pub base_degree: usize,
    pub module: SuperModule,
    /// Inclusion into `S^{p^j · base_degree}`.
    pub inclusion: Matrix,
}

/// Outcome of a rank-variety scan.
#[derive(Debug, Clone, Serialize)]
pub struct RankVarietyScan {
    pub i: usize,
    pub field: String,
    /// `(point as coefficient vectors, observed free, predicted free)`
    pub points: Vec<(Vec<Vec<u32>>, bool, bool)>,
    pub observed_nonfree: usize,
    pub predicted_nonfree: usize,
    pub rows_rank: usize,
    pub agree: bool,
}

/// The family of symmetric powers for fixed `p, r, s, μ`.
#[derive(Debug, Clone)]
pub struct SymPowers {
    kh: Arc<PresentedSuperalgebra>,
    mus: Vec<Fe>,
    r: usize,
    s: usize,
}

impl SymPowers {
    /// Uses an existing `kH` (which should carry its coproduct if tensor
    /// products are needed).
    pub fn new(kh: &Arc<PresentedSuperalgebra>, mus: &[Fe]) -> Result<Self, SymError> {
        let d = kh.descriptor();
        if d.kind != AlgebraKind::KH {
            return Err(SymError::Module(ModuleError::AlgebraMismatch));
        }
        if mus.len() != d.s {
            return Err(AlgebraError::ParameterCount { expected: d.s, got: mus.len() }.into());
        }
        if !fp_linear_independent(kh.field(), mus) {
            return Err(AlgebraError::NotFaithful.into());
        }
        Ok(SymPowers { kh: Arc::clone(kh), mus: mus.to_vec(), r: d.r, s: d.s })
    }

    pub fn over(field: &Arc<GaloisField>, r: usize, s: usize, mus: &[Fe]) -> Result<Self, SymError> {
        let kh = make_kh(field, r, s, true)?;
        Self::new(&kh, mus)
    }

    /// The same family over an extension field.
    pub fn base_change(&self, target: &Arc<GaloisField>) -> Result<Self, SymError> {
        let emb = self.field().embedding_into(target).map_err(|_| SymError::NoEmbedding)?;
        let mus: Vec<Fe> = self.mus.iter().map(|m| emb[m.0 as usize]).collect();
        Self::over(target, self.r, self.s, &mus)
    }

    pub fn kh(&self) -> &Arc<PresentedSuperalgebra> {
        &self.kh
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.kh.field()
    }

    pub fn mus(&self) -> &[Fe] {
        &self.mus
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// `p^{r+s}`, the dimension of `kH`.
    pub fn period(&self) -> usize {
        (self.field().characteristic() as usize).pow((self.r + self.s) as u32)
    }

    pub fn sym_power(&self, n: usize) -> SymPower {
        let k = self.field();
        let p = k.characteristic() as u64;
        let mut action = Vec::with_capacity(self.r + self.s);
        for j in 0..self.r {
            let step = p.pow(j as u32) as usize;
            let mut m = Matrix::zeros(n + 1, n + 1);
            for a in step..=n {
                let c = binom_mod_p(a as u64, step as u64, p);
                if c != 0 {
                    m.set(a - step, a, k.from_int(c as i64));
                }
            }
            action.push(m);
        }
        for j in 0..self.s {
            let minus_mu = k.neg(self.mus[j]);
            let mut m = Matrix::zeros(n + 1, n + 1);
            for a in 0..=n {
                // (X - μ Y)^a = Σ_c binom(a, c) X^c (-μ Y)^{a-c}
                for c in 0..=a {
                    let b = binom_mod_p(a as u64, c as u64, p);
                    if b == 0 {
                        continue;
                    }
                    let coef = k.mul(k.from_int(b as i64), k.pow(minus_mu, (a - c) as u64));
                    let cur = m.get(c, a);
                    m.set(c, a, k.add(cur, coef));
                }
                let cur = m.get(a, a);
                m.set(a, a, k.sub(cur, Fe::ONE));
            }
            action.push(m);
        }
        SymPower { n, module: SuperModule::new_unchecked(&self.kh, action, vec![0; n + 1]) }
    }

    /// `φ = Π_{a ∈ F_p^s} (X + (Σ a_j μ_j) Y)`, of degree `p^s`.
    pub fn orbit_product_phi(&self) -> Vec<Fe> {
        let k = self.field();
        let p = k.characteristic() as usize;
        let mut f = vec![Fe::ZERO, Fe::ONE];
        for idx in 0..p.pow(self.s as u32) {
            if idx == 0 {
                continue;
            }
            let mut c = idx;
            let mut shift = Fe::ZERO;
            for mu in &self.mus {
                shift = k.add(shift, k.mul(k.from_int((c % p) as i64), *mu));
                c /= p;
            }
            f = poly_mul(k, &f, &[shift, Fe::ONE]);
        }
        f
    }

    /// `φ^{p^r}`, the invariant of degree `p^{r+s}`.
    pub fn top_invariant(&self) -> Vec<Fe> {
        let p = self.field().characteristic() as u64;
        poly_pow(self.field(), &self.orbit_product_phi(), p.pow(self.r as u32))
    }

    /// `S^n ≅ kH ⊕ S^{n - p^{r+s}}` through multiplication by
    /// `Y^{n+1-p^{r+s}}` and by `φ^{p^r}`.
    pub fn periodicity_decomposition(&self, n: usize) -> Result<DecompositionCertificate, SymError> {
        let q = self.period();
        if n < q {
            return Err(SymError::BadDegree(n, format!("need n >= {q}")));
        }
        let target = self.sym_power(n).module;
        let free = self.sym_power(q - 1).module;
        let complement = self.sym_power(n - q).module;
        let e1 = multiplication_matrix(&y_power(n + 1 - q), q - 1);
        let e2 = multiplication_matrix(&self.top_invariant(), n - q);
        let ok = verify_direct_sum(&target, &[(&free, &e1), (&complement, &e2)])
            .map_err(|e| SymError::DecompositionFailed(e.to_string()))?;
        if !ok {
            return Err(SymError::DecompositionFailed(format!("images do not decompose S^{n}")));
        }
        let free_summand_projective = free.is_projective_kh();
        if !free_summand_projective {
            return Err(SymError::DecompositionFailed(format!("S^{} is not free", q - 1)));
        }
        Ok(DecompositionCertificate {
            n,
            dim: n + 1,
            free_dim: q,
            complement_dim: n + 1 - q,
            free_summand_projective,
            complement_projective: complement.is_projective_kh(),
            free_embedding: e1,
            complement_embedding: e2,
        })
    }

    /// The span of `p^j`-th powers of degree-`base_degree` monomials inside
    /// `S^{p^j · base_degree}`, with its induced action.
    pub fn frobenius_twist(&self, j: u32, base_degree: usize) -> Result<Twist, SymError> {
        let k = self.field();
        let step = (k.characteristic() as usize).pow(j);
        let big = self.sym_power(step * base_degree).module;
        let idx: Vec<usize> = (0..=base_degree).map(|a| a * step).collect();
        let mut action = Vec::new();
        for g in 0..self.kh.num_generators() {
            let m = big.action(g);
            let mut sub = Matrix::zeros(base_degree + 1, base_degree + 1);
            for (col, &ci) in idx.iter().enumerate() {
                for row in 0..m.rows() {
                    let x = m.get(row, ci);
                    if x.is_zero() {
                        continue;
                    }
                    if row % step != 0 {
                        return Err(SymError::NotInvariant(j));
                    }
                    sub.set(row / step, col, x);
                }
            }
            action.push(sub);
        }
        let mut inclusion = Matrix::zeros(big.dim(), base_degree + 1);
        for (col, &ci) in idx.iter().enumerate() {
            inclusion.set(ci, col, Fe::ONE);
        }
        let module = SuperModule::new_unchecked(&self.kh, action, vec![0; base_degree + 1]);
        check_equivariant(&module, &big, &inclusion)?;
        Ok(Twist { j, base_degree, module, inclusion })
    }

    /// `S^{p-1} ⊗ (S^{p-1})^{(1)} ⊗ ... ⊗ (S^{p-1})^{(i-1)} → S^{p^i - 1}`
    /// by multiplication is an isomorphism of modules.
    pub fn steinberg_check(&self, i: usize) -> Result<bool, SymError> {
        if i == 0 || i > self.r + self.s {
            return Err(SymError::BadDegree(i, format!("need 1 <= i <= {}", self.r + self.s)));
        }
        let p = self.field().characteristic() as usize;
        let mut t = self.frobenius_twist(0, p - 1)?.module;
        for j in 1..i {
            t = t.tensor(&self.frobenius_twist(j as u32, p - 1)?.module)?;
        }
        let target_deg = p.pow(i as u32) - 1;
        let target = self.sym_power(target_deg).module;
        // tensor basis index (a_0 ... a_{i-1}) = a_0 p^{i-1} + ... + a_{i-1}
        let mut f = Matrix::zeros(target_deg + 1, t.dim());
        for idx in 0..t.dim() {
            let mut rest = idx;
            let mut exp = 0usize;
            for j in (0..i).rev() {
                exp += (rest % p) * p.pow(j as u32);
                rest /= p;
            }
            f.set(exp, idx, Fe::ONE);
        }
        if check_equivariant(&t, &target, &f).is_err() {
            return Ok(false);
        }
        Ok(f.rank(self.field()) == t.dim() && t.dim() == target.dim())
    }

    /// The `(r+s) × (r+s)` matrix whose first `i` rows cut out the rank
    /// variety of `S^{p^i - 1}`.
    pub fn rank_variety_matrix(&self) -> Matrix {
        let k = self.field();
        let n = self.r + self.s;
        let mut m = Matrix::zeros(n, n);
        for row in 0..n {
            if row < self.r {
                m.set(row, row, k.from_int(-1));
            }
            for (j, &mu) in self.mus.iter().enumerate() {
                m.set(row, self.r + j, k.frobenius(mu, row as u32));
            }
        }
        m
    }

    /// Freeness of `S^{p^i - 1}` on every shifted subgroup over this
    /// family's field, compared with the predicted linear locus.
    pub fn rank_variety_scan(&self, i: usize) -> Result<RankVarietyScan, SymError> {
        let n = self.r + self.s;
        if i == 0 || i > n {
            return Err(SymError::BadDegree(i, format!("need 1 <= i <= {n}")));
        }
        let k = self.field();
        let p = k.characteristic() as usize;
        let module = self.sym_power(p.pow(i as u32) - 1).module;
        let full = self.rank_variety_matrix();
        let rows = Matrix::from_rows(i, n, full.data()[..i * n].to_vec());
        let mut points = Vec::new();
        let (mut observed_nonfree, mut predicted_nonfree, mut agree) = (0, 0, true);
        for pt in ShiftedPoint::enumerate(k, n) {
            let free = module.is_free_restriction(&pt)?;
            let predicted_free = rows.apply(k, &pt.coords).iter().any(|x| !x.is_zero());
            observed_nonfree += usize::from(!free);
            predicted_nonfree += usize::from(!predicted_free);
            agree &= free == predicted_free;
            points.push((pt.coords.iter().map(|&c| k.coeffs(c)).collect(), free, predicted_free));
        }
        Ok(RankVarietyScan {
            i,
            field: k.spec(),
            points,
            observed_nonfree,
            predicted_nonfree,
            rows_rank: rows.rank(k),
            agree,
        })
    }

    /// Basis of `S^n(V^#)^H`.
    pub fn invariants(&self, n: usize) -> Vec<Vec<Fe>> {
        self.sym_power(n).module.fixed_points()
    }

    /// The monomials `(φ^{p^r})^a Y^b` of degree `n`, as polynomials.
    pub fn predicted_invariants(&self, n: usize) -> Vec<Vec<Fe>> {
        let k = self.field();
        let q = self.period();
        let top = self.top_invariant();
        (0..=n / q).map(|a| poly_mul(k, &poly_pow(k, &top, a as u64), &y_power(n - a * q))).collect()
    }

    /// Whether `v` lies in the span of `basis`.
    pub fn in_span(&self, basis: &[Vec<Fe>], v: &[Fe]) -> bool {
        let k = self.field();
        let mut e = Echelon::new(v.len());
        for b in basis {
            e.insert(k, b);
        }
        e.contains(k, v)
    }
}

/// One row of the symmetric-power suite.
#[derive(Debug, Clone, Serialize)]
pub struct SymPowerRow {
    pub n: usize,
    pub dim: usize,
    pub projective: bool,
    pub predicted_projective: bool,
    /// Set for `n ≤ p - 1`.
    pub uniserial: Option<bool>,
    /// Set for `n ≥ p^{r+s}`: the decomposition was verified.
    pub periodicity: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymPowerSuite {
    pub period: usize,
    pub rows: Vec<SymPowerRow>,
    /// `steinberg[i - 1]` for `1 ≤ i ≤ r + s`.
    pub steinberg: Vec<bool>,
    pub passed: bool,
}

impl SymPowers {
    /// Periodicity, projectivity, uniseriality and Steinberg checks for
    /// `S^0, …, S^{max_n}`.
    pub fn suite(&self, max_n: usize) -> Result<SymPowerSuite, SymError> {
        let q = self.period();
        let p = self.field().characteristic() as usize;
        let mut rows = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let m = self.sym_power(n).module;
            let periodicity = (n >= q).then(|| match self.periodicity_decomposition(n) {
                Ok(c) => c.complement_projective == ((n - q) % q == q - 1),
                Err(_) => false,
            });
            rows.push(SymPowerRow {
                n,
                dim: m.dim(),
                projective: m.is_projective_kh(),
                predicted_projective: n % q == q - 1,
                uniserial: (n < p).then(|| m.is_uniserial()),
                periodicity,
            });
        }
        let steinberg = (1..=self.r + self.s).map(|i| self.steinberg_check(i)).collect::<Result<Vec<_>, _>>()?;
        let passed = rows.iter().all(|r| {
            r.projective == r.predicted_projective && r.uniserial != Some(false) && r.periodicity != Some(false)
        }) && steinberg.iter().all(|&b| b);
        Ok(SymPowerSuite { period: q, rows, steinberg, passed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(r: usize, s: usize) -> SymPowers {
        if s == 2 {
            let k = GaloisField::new(3, 2).unwrap();
            return SymPowers::over(&k, r, s, &[Fe::ONE, k.generator()]).unwrap();
        }
        let k = GaloisField::prime(3).unwrap();
        let mus = vec![Fe::ONE; s];
        SymPowers::over(&k, r, s, &mus).unwrap()
    }

    #[test]
    fn suite_passes_in_rank_two() {
        for (r, s) in [(2, 0), (1, 1), (0, 2)] {
            let suite = fam(r, s).suite(18).unwrap();
            assert!(suite.passed, "({r},{s})");
            assert_eq!(suite.steinberg.len(), 2);
        }
    }

    #[test]
    fn lucas() {
        assert_eq!(binom_mod_p(6, 3, 3), 2);
        assert_eq!(binom_mod_p(9, 3, 3), 0);
        assert_eq!(binom_mod_p(4, 1, 3), 1);
        assert_eq!(binom_mod_p(10, 5, 5), 2);
    }

    #[test]
    fn explicit_action_formulas() {
        let f = fam(2, 1);
        let k = f.field().clone();
        let sp = f.sym_power(2).module;
        // s_1(X^2) = 2 X Y
        assert_eq!(sp.action(0).column(2), vec![Fe::ZERO, Fe(2), Fe::ZERO]);
        // s_2 kills X^i for i <= p - 1
        assert!(sp.action(1).is_zero());
        // (g - 1)(X^2) = -2μ X Y + μ^2 Y^2
        let t = sp.action(2).column(2);
        assert_eq!(t, vec![Fe::ONE, k.from_int(-2), Fe::ZERO]);
        for r in 0..=2 {
            for s in 0..=2 - r {
                if r + s == 0 {
                    continue;
                }
                let f = fam(r, s);
                for n in 0..=12 {
                    let m = f.sym_power(n).module;
                    assert!(m.check(), "S^{n} at r={r} s={s}");
                    assert_eq!(m.dim(), n + 1);
                    assert!(m.fixed_points().contains(&y_power(n)));
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        let k = GaloisField::prime(3).unwrap();
        assert_eq!(fam(1, 0).orbit_product_phi(), vec![Fe::ZERO, Fe::ONE]);
        // X^3 - X Y^2
        assert_eq!(fam(0, 1).orbit_product_phi(), vec![Fe::ZERO, k.from_int(-1), Fe::ZERO, Fe::ONE]);
        let f = fam(0, 1);
        let phi = f.orbit_product_phi();
        assert!(f.in_span(&f.invariants(3), &phi));
    }

    #[test]
    fn radical_series_of_s2() {
        let m = fam(1, 0).sym_power(2).module;
        assert_eq!(m.radical_socle_series().0, vec![3, 2, 1, 0]);
    }

    #[test]
    fn periodicity_examples() {
        let c = fam(1, 0).periodicity_decomposition(3).unwrap();
        assert_eq!((c.dim, c.free_dim, c.complement_dim), (4, 3, 1));
        let c = fam(1, 1).periodicity_decomposition(9).unwrap();
        assert_eq!((c.dim, c.free_dim, c.complement_dim), (10, 9, 1));
        // 5 ≡ -1 mod 3, so the complement S^2 is itself free
        let c = fam(1, 0).periodicity_decomposition(5).unwrap();
        assert!(c.complement_projective);
        assert!(fam(1, 0).sym_power(5).module.is_projective_kh());
        let c = fam(1, 0).periodicity_decomposition(4).unwrap();
        assert!(!c.complement_projective);
        assert!(fam(1, 0).periodicity_decomposition(2).is_err());
    }

    #[test]
    fn twists() {
        let f = fam(1, 0);
        let t0 = f.frobenius_twist(0, 2).unwrap();
        assert_eq!(t0.module.actions(), f.sym_power(2).module.actions());
        let t1 = f.frobenius_twist(1, 2).unwrap();
        assert_eq!(t1.module.dim(), 3);
        assert!(t1.module.action(0).is_zero());
    }

    #[test]
    fn steinberg() {
        assert!(fam(1, 0).steinberg_check(1).unwrap());
        assert!(fam(1, 1).steinberg_check(2).unwrap());
        assert!(fam(2, 0).steinberg_check(2).unwrap());
        assert!(fam(1, 0).steinberg_check(2).is_err());
    }

    #[test]
    fn rank_variety_hyperplane() {
        let scan = fam(1, 1).rank_variety_scan(1).unwrap();
        let nonfree: Vec<_> = scan.points.iter().filter(|x| !x.1).map(|x| x.0.clone()).collect();
        assert_eq!(nonfree, vec![vec![vec![1], vec![1]], vec![vec![2], vec![2]]]);
        assert!(scan.agree);
        let scan = fam(2, 0).rank_variety_scan(1).unwrap();
        let nonfree: Vec<_> = scan.points.iter().filter(|x| !x.1).map(|x| x.0.clone()).collect();
        assert_eq!(nonfree, vec![vec![vec![0], vec![1]], vec![vec![0], vec![2]]]);
        let scan = fam(1, 1).rank_variety_scan(2).unwrap();
        assert_eq!(scan.observed_nonfree, 0);
    }

    #[test]
    fn boundary_restrictions() {
        let k = GaloisField::prime(3).unwrap();
        let f = fam(0, 1);
        let m = f.sym_power(2).module;
        let on = ShiftedPoint::new(vec![Fe::ONE]).unwrap();
        assert!(m.is_free_restriction(&on).unwrap());
        let f = fam(1, 1);
        let m = f.sym_power(2).module;
        let off = ShiftedPoint::new(vec![Fe::ONE, Fe::ONE]).unwrap();
        assert!(!m.is_free_restriction(&off).unwrap());
        let on = ShiftedPoint::new(vec![Fe::ONE, k.from_int(2)]).unwrap();
        assert!(m.is_free_restriction(&on).unwrap());
    }
}
