use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number with arbitrary-precision integer parts.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Laurent polynomial in s = q^(1/2) with exact rational coefficients.
///
/// Exponents are in units of s, so q^k sits at exponent 2k. Invariant: no
/// stored coefficient is zero; the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, Rat::one())
    }

    pub fn monomial(exp: i64, coeff: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    /// s^k.
    pub fn s_pow(k: i64) -> Self {
        LaurentPoly::monomial(k, Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        LaurentPoly::monomial(0, r)
    }

    pub fn from_map(coeffs: BTreeMap<i64, Rat>) -> Self {
        let mut p = LaurentPoly { coeffs };
        p.coeffs.retain(|_, c| !c.is_zero());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// True when all exponents are nonnegative (an ordinary polynomial in s).
    pub fn is_ordinary(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    /// Degree as an ordinary polynomial; zero polynomial reports -1.
    pub fn degree(&self) -> i64 {
        self.max_exp().unwrap_or(-1)
    }

    pub fn leading_coeff(&self) -> Rat {
        self.max_exp().map_or_else(Rat::zero, |e| self.coeff(e))
    }

    /// Multiply by s^k.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scaled(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at s = s0. None when s0 = 0 meets a negative exponent.
    pub fn eval(&self, s0: &Rat) -> Option<Rat> {
        if s0.is_zero() && self.min_exp().map_or(false, |e| e < 0) {
            return None;
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.coeffs {
            acc += c * rat_pow(s0, *e)?;
        }
        Some(acc)
    }

    /// All exponents even (expressible in q alone).
    pub fn q_expressible(&self) -> bool {
        self.coeffs.keys().all(|e| e % 2 == 0)
    }
}

fn rat_pow(base: &Rat, e: i64) -> Option<Rat> {
    if e == 0 {
        return Some(Rat::one());
    }
    if base.is_zero() {
        return if e > 0 { Some(Rat::zero()) } else { None };
    }
    let e32: i32 = e.try_into().ok()?;
    Some(base.pow(e32))
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            let entry = coeffs.entry(*e).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(e);
            }
        }
        LaurentPoly { coeffs }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                let entry = coeffs.entry(e1 + e2).or_insert_with(Rat::zero);
                *entry += c1 * c2;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs }
    }
}

/// Quotient and remainder of ordinary polynomials in s (den nonzero).
pub fn poly_divrem(num: &LaurentPoly, den: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    assert!(!den.is_zero(), "polynomial division by zero");
    debug_assert!(num.is_ordinary() && den.is_ordinary());
    let dd = den.degree();
    let dlc = den.leading_coeff();
    let mut rem = num.clone();
    let mut quo = LaurentPoly::zero();
    while !rem.is_zero() && rem.degree() >= dd {
        let shift = rem.degree() - dd;
        let factor = rem.leading_coeff() / &dlc;
        let term = LaurentPoly::monomial(shift, factor);
        quo = &quo + &term;
        rem = &rem - &(&term * den);
    }
    (quo, rem)
}

/// Monic gcd of ordinary polynomials in s.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_zero() {
        return x;
    }
    let lc = x.leading_coeff();
    x.scaled(&lc.recip())
}

/// Least common multiple, monic; zero if either input is zero.
pub fn poly_lcm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() || b.is_zero() {
        return LaurentPoly::zero();
    }
    let g = poly_gcd(a, b);
    let (q, r) = poly_divrem(&(a * b), &g);
    debug_assert!(r.is_zero());
    let lc = q.leading_coeff();
    q.scaled(&lc.recip())
}

/// Signed compare for deterministic orderings: by min exponent, then
/// ascending coefficient sequence.
pub fn laurent_cmp(a: &LaurentPoly, b: &LaurentPoly) -> std::cmp::Ordering {
    let keys: std::collections::BTreeSet<i64> =
        a.coeffs.keys().chain(b.coeffs.keys()).copied().collect();
    for e in keys {
        let (ca, cb) = (a.coeff(e), b.coeff(e));
        match (&ca - &cb).numer().sign() {
            num_bigint::Sign::Minus => return std::cmp::Ordering::Less,
            num_bigint::Sign::Plus => return std::cmp::Ordering::Greater,
            num_bigint::Sign::NoSign => {}
        }
    }
    std::cmp::Ordering::Equal
}

pub fn rat_is_negative(r: &Rat) -> bool {
    r.is_negative()
}
