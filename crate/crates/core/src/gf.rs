//! Exact arithmetic in `F_p` and small extensions `F_{p^m}`.
//!
//! Elements are stored as a compact code `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! of their coefficient vector modulo the defining polynomial, and all
//! arithmetic goes through precomputed tables. This keeps the inner loops of
//! row reduction down to two table lookups per entry.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which tables are built.
pub const MAX_ORDER: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("modulus {0:?} is not monic of the requested degree")]
    NotMonic(Vec<u32>),
    #[error("modulus {0:?} is reducible over F_p")]
    Reducible(Vec<u32>),
    #[error("malformed field spec {0:?} (expected \"p\" or \"p^m\")")]
    BadSpec(String),
    #[error("malformed field element {0:?}")]
    BadElement(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("no embedding of F_{from} into F_{to}")]
    NoEmbedding { from: u32, to: u32 },
}

/// Raw field element code. Only meaningful together with its [`GaloisField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The finite field `F_p[w]/(modulus)`.
pub struct GaloisField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    frob: Vec<u16>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}, modulus={:?})", self.p, self.m, self.modulus)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

// Dense polynomials over F_p, coefficients low-to-high, no trailing zeros.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, f, p)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b64 = (b % p) as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b64 % p as u64;
        }
        b64 = b64 * b64 % p as u64;
        e >>= 1;
    }
    b = r as u32;
    b
}

/// Irreducibility of a monic polynomial over `F_p` by the gcd test with
/// `x^{p^d} - x` for `1 <= d <= deg/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    // x^{p^d} mod f, iterated by raising to the p-th power.
    let mut xp = vec![0, 1];
    for _ in 1..=deg / 2 {
        let mut acc = vec![1u32];
        for _ in 0..p {
            acc = poly_mulmod(&acc, &xp, f, p);
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree `m`, in lexicographic order of the
/// low-to-high coefficient list.
fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let m = m as usize;
    let mut low = vec![0u32; m];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment with c_{m-1} as the least significant digit
        let mut i = m;
        loop {
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            assert!(i > 0, "no irreducible polynomial of degree {m} over F_{p}");
        }
    }
}

impl GaloisField {
    /// `F_{p^m}` with the deterministic default modulus.
    pub fn new(p: u32, m: u32) -> Result<Arc<Self>, FieldError> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        Self::check_order(p, m)?;
        Self::with_modulus(p, default_modulus(p, m))
    }

    pub fn prime(p: u32) -> Result<Arc<Self>, FieldError> {
        Self::new(p, 1)
    }

    fn check_order(p: u32, m: u32) -> Result<u32, FieldError> {
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(q));
        }
        Ok(q as u32)
    }

    /// `F_p[w]/(modulus)` for an explicit monic irreducible modulus.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>, FieldError> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::NotMonic(modulus));
        }
        let m = (modulus.len() - 1) as u32;
        let q = Self::check_order(p, m)?;
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::Reducible(modulus));
        }
        let qs = q as usize;
        let decode = |c: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(m as usize);
            let mut c = c as u32;
            for _ in 0..m {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u16 {
            let mut c = 0u32;
            for &x in v.iter().rev() {
                c = c * p + x;
            }
            c as u16
        };
        let digits: Vec<Vec<u32>> = (0..qs).map(decode).collect();
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in a..qs {
                let s: Vec<u32> = digits[a].iter().zip(&digits[b]).map(|(x, y)| (x + y) % p).collect();
                let sc = encode(&s);
                add[a * qs + b] = sc;
                add[b * qs + a] = sc;
                let mut prod = poly_mulmod(&digits[a], &digits[b], &modulus, p);
                prod.resize(m as usize, 0);
                let pc = encode(&prod);
                mul[a * qs + b] = pc;
                mul[b * qs + a] = pc;
            }
        }
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        let mut frob = vec![0u16; qs];
        for a in 0..qs {
            let mut r = 1usize;
            for _ in 0..p {
                r = mul[r * qs + a] as usize;
            }
            frob[a] = r as u16;
        }
        Ok(Arc::new(GaloisField { p, m, q, modulus, add, mul, neg, inv, frob }))
    }

    /// Parses `"p"` or `"p^m"`.
    pub fn from_spec(spec: &str) -> Result<Arc<Self>, FieldError> {
        let bad = || FieldError::BadSpec(spec.to_string());
        let (p, m) = match spec.trim().split_once('^') {
            Some((p, m)) => (p.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?),
            None => (spec.trim().parse().map_err(|_| bad())?, 1),
        };
        Self::new(p, m)
    }

    pub fn spec(&self) -> String {
        if self.m == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.m)
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    /// Multiplicative inverse; panics on zero. Use [`FieldElement`] for a
    /// checked interface.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        Fe(self.inv[a.0 as usize])
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// `a^{p^i}`.
    pub fn frobenius(&self, a: Fe, i: u32) -> Fe {
        (0..i % self.m).fold(a, |x, _| Fe(self.frob[x.0 as usize]))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        let mut c = 0u32;
        for (i, &x) in coeffs.iter().enumerate().rev() {
            if i < self.m as usize {
                c = c * self.p + x % self.p;
            }
        }
        Fe(c as u16)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut c = a.0 as u32;
        (0..self.m)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    /// The class of `w`, the generator of the extension (equal to `0` when
    /// `m = 1`, in which case there is no `w`).
    pub fn generator(&self) -> Fe {
        if self.m == 1 {
            // x mod (x - 0)
            Fe::ZERO
        } else {
            Fe(self.p as u16)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q as u16).map(Fe)
    }

    pub fn is_prime_field_element(&self, a: Fe) -> bool {
        (a.0 as u32) < self.p
    }

    /// `a * row` added into `acc`, entrywise.
    #[inline]
    pub fn axpy(&self, acc: &mut [Fe], a: Fe, row: &[Fe]) {
        if a.is_zero() {
            return;
        }
        let q = self.q as usize;
        let mrow = &self.mul[a.0 as usize * q..(a.0 as usize + 1) * q];
        for (x, &y) in acc.iter_mut().zip(row) {
            if y.0 != 0 {
                x.0 = self.add[x.0 as usize * q + mrow[y.0 as usize] as usize];
            }
        }
    }

    #[inline]
    pub fn scale(&self, row: &mut [Fe], a: Fe) {
        let q = self.q as usize;
        let mrow = &self.mul[a.0 as usize * q..(a.0 as usize + 1) * q];
        for x in row.iter_mut() {
            x.0 = mrow[x.0 as usize];
        }
    }

    /// Renders an element as a polynomial in `w`, e.g. `2w+1`.
    pub fn format(&self, a: Fe) -> String {
        let c = self.coeffs(a);
        if self.m == 1 {
            return c[0].to_string();
        }
        let mut terms = Vec::new();
        for (i, &x) in c.iter().enumerate().rev() {
            if x == 0 {
                continue;
            }
            let coef = if x == 1 && i > 0 { String::new() } else { x.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}w"),
                _ => format!("{coef}w^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses an element written as a polynomial in `w` (`"2"`, `"w"`,
    /// `"1+2w"`, `"w^2+w"`) or as a bracketed coefficient list `"[1,2]"`.
    pub fn parse_element(&self, s: &str) -> Result<Fe, FieldError> {
        let bad = || FieldError::BadElement(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            let coeffs: Result<Vec<u32>, _> = inner.split(',').map(|x| x.parse::<u32>()).collect();
            let coeffs = coeffs.map_err(|_| bad())?;
            if coeffs.len() > self.m as usize {
                return Err(bad());
            }
            return Ok(self.from_coeffs(&coeffs));
        }
        let mut acc = Fe::ZERO;
        let w = self.generator();
        for term in t.replace('-', "+-").split('+').filter(|x| !x.is_empty()) {
            let (negate, term) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term),
            };
            let (coef, power) = match term.find('w') {
                None => (term.parse::<i64>().map_err(|_| bad())?, 0u64),
                Some(pos) => {
                    if self.m == 1 {
                        return Err(bad());
                    }
                    let coef_str = term[..pos].trim_end_matches('*');
                    let coef = if coef_str.is_empty() { 1 } else { coef_str.parse::<i64>().map_err(|_| bad())? };
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?
                    };
                    (coef, power)
                }
            };
            let mut val = self.mul(self.from_int(coef), self.pow(w, power));
            if power == 0 {
                val = self.from_int(coef);
            }
            if negate {
                val = self.neg(val);
            }
            acc = self.add(acc, val);
        }
        Ok(acc)
    }

    /// Field embedding `self -> target`, as a table indexed by element code.
    /// The generator is sent to the first root (in code order) of the
    /// modulus.
    pub fn embedding_into(&self, target: &GaloisField) -> Result<Vec<Fe>, FieldError> {
        let err = FieldError::NoEmbedding { from: self.q, to: target.q };
        if self.p != target.p || !target.m.is_multiple_of(self.m) {
            return Err(err);
        }
        let root = if self.m == 1 {
            Fe::ZERO
        } else {
            let eval = |x: Fe| {
                self.modulus
                    .iter()
                    .rev()
                    .fold(Fe::ZERO, |acc, &c| target.add(target.mul(acc, x), target.from_int(c as i64)))
            };
            target.elements().find(|&x| eval(x).is_zero()).ok_or(err)?
        };
        Ok(self
            .elements()
            .map(|a| {
                self.coeffs(a)
                    .iter()
                    .enumerate()
                    .fold(Fe::ZERO, |acc, (i, &c)| {
                        target.add(acc, target.mul(target.from_int(c as i64), target.pow(root, i as u64)))
                    })
            })
            .collect())
    }
}

/// True iff the elements are linearly independent over the prime field,
/// i.e. their `m x s` coefficient matrix has rank `s`.
pub fn fp_linear_independent(k: &GaloisField, mus: &[Fe]) -> bool {
    let p = k.characteristic();
    let mut rows: Vec<Vec<u32>> = mus.iter().map(|&a| k.coeffs(a)).collect();
    let cols = k.degree() as usize;
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for cc in 0..cols {
                    rows[r][cc] = (rows[r][cc] + p * p - f * rows[rank][cc]) % p;
                }
            }
        }
        rank += 1;
    }
    rank == mus.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element bundled with its field, for checked user-facing
/// arithmetic.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<GaloisField>,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}

impl FieldElement {
    pub fn new(field: &Arc<GaloisField>, value: Fe) -> Self {
        assert!((value.0 as u32) < field.order());
        FieldElement { field: Arc::clone(field), value }
    }

    pub fn from_coeffs(field: &Arc<GaloisField>, coeffs: &[u32]) -> Self {
        Self::new(field, field.from_coeffs(coeffs))
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn arith(&self, other: &FieldElement, op: FieldOp) -> Result<FieldElement, FieldError> {
        if *self.field != *other.field {
            return Err(FieldError::FieldMismatch);
        }
        let k = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            FieldOp::Add => k.add(a, b),
            FieldOp::Sub => k.sub(a, b),
            FieldOp::Mul => k.mul(a, b),
            FieldOp::Div => {
                if b.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                k.mul(a, k.inv(b))
            }
        };
        Ok(FieldElement { field: Arc::clone(&self.field), value })
    }

    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.value.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElement { field: Arc::clone(&self.field), value: self.field.inv(self.value) })
    }

    pub fn frobenius(&self, i: u32) -> FieldElement {
        FieldElement { field: Arc::clone(&self.field), value: self.field.frobenius(self.value, i) }
    }
}
