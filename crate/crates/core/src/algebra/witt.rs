//! Witt vector addition polynomials, computed from ghost components over the
//! rationals and reduced mod p.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Largest supported Witt length.
pub const MAX_HEIGHT: usize = 3;

/// Polynomial in `x_1..x_r, y_1..y_r`; exponent vectors have length `2r`
/// with the `x` block first.
pub type Poly<C> = BTreeMap<Vec<u32>, C>;

/// The addition polynomials `S_0, ..., S_{r-1}` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittPolynomials {
    pub p: u32,
    pub r: usize,
    pub polys: Vec<Poly<u32>>,
}

fn poly_mul(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Poly<BigRational> {
    let mut out: Poly<BigRational> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = out.entry(e).or_insert_with(BigRational::zero);
            *c += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_pow(a: &Poly<BigRational>, mut e: u64, nvars: usize) -> Poly<BigRational> {
    let mut result: Poly<BigRational> = BTreeMap::from([(vec![0; nvars], BigRational::one())]);
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul(&base, &base);
        }
    }
    result
}

fn poly_add_scaled(acc: &mut Poly<BigRational>, a: &Poly<BigRational>, c: &BigRational) {
    for (e, x) in a {
        let slot = acc.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += x * c;
    }
    acc.retain(|_, c| !c.is_zero());
}

/// Ghost component `w_n = sum_{j<=n} p^j z_{j+1}^{p^{n-j}}` in the variable
/// block starting at `offset`.
fn ghost(p: u32, n: usize, r: usize, offset: usize) -> Poly<BigRational> {
    let mut out = BTreeMap::new();
    for j in 0..=n {
        let mut e = vec![0u32; 2 * r];
        e[offset + j] = p.pow((n - j) as u32);
        out.insert(e, BigRational::from_integer(BigInt::from(p).pow(j as u32)));
    }
    out
}

/// Integral addition polynomials over `Q` (before reduction).
pub fn witt_sum_polys_rational(p: u32, r: usize) -> Result<Vec<Poly<BigRational>>, AlgebraError> {
    if r > MAX_HEIGHT {
        return Err(AlgebraError::HeightTooLarge(r));
    }
    let nvars = 2 * r;
    let mut polys: Vec<Poly<BigRational>> = Vec::with_capacity(r);
    for n in 0..r {
        let mut rhs = ghost(p, n, r, 0);
        poly_add_scaled(&mut rhs, &ghost(p, n, r, r), &BigRational::one());
        for (j, sj) in polys.iter().enumerate() {
            let pw = poly_pow(sj, (p as u64).pow((n - j) as u32), nvars);
            let c = -BigRational::from_integer(BigInt::from(p).pow(j as u32));
            poly_add_scaled(&mut rhs, &pw, &c);
        }
        let denom = BigRational::from_integer(BigInt::from(p).pow(n as u32));
        let sn: Poly<BigRational> = rhs.into_iter().map(|(e, c)| (e, c / &denom)).collect();
        for c in sn.values() {
            assert!(c.is_integer(), "Witt polynomial S_{n} has non-integral coefficient {c}");
        }
        polys.push(sn);
    }
    Ok(polys)
}

pub fn witt_sum_polys(p: u32, r: usize) -> Result<WittPolynomials, AlgebraError> {
    let rational = witt_sum_polys_rational(p, r)?;
    let pb = BigInt::from(p);
    let polys = rational
        .into_iter()
        .map(|poly| {
            poly.into_iter()
                .filter_map(|(e, c)| {
                    let v = c.to_integer() % &pb;
                    let v = if v.is_negative() { v + &pb } else { v };
                    let v = v.to_u32().unwrap();
                    (v != 0).then_some((e, v))
                })
                .collect()
        })
        .collect();
    Ok(WittPolynomials { p, r, polys })
}

impl WittPolynomials {
    /// Evaluates `S_0..S_{r-1}` at `x, y` in `F_p^r`.
    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let vals: Vec<u64> = x.iter().chain(y).map(|&v| v as u64 % p).collect();
        self.polys
            .iter()
            .map(|poly| {
                poly.iter().fold(0u64, |acc, (e, &c)| {
                    let term = e.iter().zip(&vals).fold(c as u64, |t, (&k, &v)| {
                        (0..k).fold(t, |t2, _| t2 * v % p)
                    });
                    (acc + term) % p
                }) as u32
            })
            .collect()
    }

    /// Witt weight of a monomial: `x_i` and `y_i` have weight `p^{i-1}`.
    pub fn weight(&self, e: &[u32]) -> u64 {
        e.iter()
            .enumerate()
            .map(|(i, &k)| k as u64 * (self.p as u64).pow((i % self.r) as u32))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(r: usize, pairs: &[(usize, u32)]) -> Vec<u32> {
        let mut e = vec![0; 2 * r];
        for &(i, k) in pairs {
            e[i] = k;
        }
        e
    }

    #[test]
    fn first_polynomial_is_addition() {
        let w = witt_sum_polys(5, 2).unwrap();
        let expected: Poly<u32> = BTreeMap::from([(mono(2, &[(0, 1)]), 1), (mono(2, &[(2, 1)]), 1)]);
        assert_eq!(w.polys[0], expected);
    }

    #[test]
    fn second_polynomial_at_three() {
        // x_2 + y_2 - x_1^2 y_1 - x_1 y_1^2
        let w = witt_sum_polys(3, 2).unwrap();
        let expected: Poly<u32> = BTreeMap::from([
            (mono(2, &[(1, 1)]), 1),
            (mono(2, &[(3, 1)]), 1),
            (mono(2, &[(0, 2), (2, 1)]), 2),
            (mono(2, &[(0, 1), (2, 2)]), 2),
        ]);
        assert_eq!(w.polys[1], expected);
    }

    #[test]
    fn second_polynomial_matches_binomial_formula() {
        // S_1 = x_2 + y_2 - sum_i binom(p,i)/p x_1^i y_1^{p-i}
        for p in [3u32, 5, 7] {
            let w = witt_sum_polys(p, 2).unwrap();
            let mut expected: Poly<u32> = BTreeMap::new();
            expected.insert(mono(2, &[(1, 1)]), 1);
            expected.insert(mono(2, &[(3, 1)]), 1);
            let mut binom = 1u64;
            for i in 1..p {
                binom = binom * (p - i + 1) as u64 / i as u64;
                let c = (binom / p as u64) % p as u64;
                expected.insert(mono(2, &[(0, i), (2, p - i)]), (p as u64 - c) as u32 % p);
            }
            assert_eq!(w.polys[1], expected, "p = {p}");
        }
    }

    #[test]
    fn isobaric() {
        for (p, r) in [(3, 3), (5, 3)] {
            let w = witt_sum_polys(p, r).unwrap();
            for (i, poly) in w.polys.iter().enumerate() {
                for e in poly.keys() {
                    assert_eq!(w.weight(e), (p as u64).pow(i as u32));
                }
            }
        }
    }

    #[test]
    fn witt_addition_is_a_group_law() {
        let w = witt_sum_polys(3, 2).unwrap();
        let all: Vec<Vec<u32>> = (0..9).map(|c| vec![c % 3, c / 3]).collect();
        for a in &all {
            assert_eq!(&w.add(a, &[0, 0]), a);
            for b in &all {
                assert_eq!(w.add(a, b), w.add(b, a));
                for c in &all {
                    assert_eq!(w.add(&w.add(a, b), c), w.add(a, &w.add(b, c)));
                }
            }
        }
        // length-2 Witt vectors over F_3 form Z/9: (1,0) has order 9
        let mut x = vec![0, 0];
        for step in 1..=9 {
            x = w.add(&x, &[1, 0]);
            assert_eq!(x == vec![0, 0], step == 9);
        }
    }

    #[test]
    fn height_limit() {
        assert!(matches!(witt_sum_polys(3, 4), Err(AlgebraError::HeightTooLarge(4))));
    }
}
