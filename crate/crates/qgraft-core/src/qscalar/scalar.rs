use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::laurent::{laurent_cmp, poly_divrem, poly_gcd, LaurentPoly, Rat};
use crate::{QError, Result};

/// Element of ℚ(s), s = q^(1/2), kept in canonical form.
///
/// Canonical form: `den` is an ordinary monic polynomial in s with nonzero
/// constant term, gcd(num, den) = 1, and all content and s-powers are pushed
/// into `num`. Two scalars are equal iff their canonical parts are identical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    /// Canonicalize num/den; den must be nonzero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() };
        }
        let a = num.min_exp().unwrap();
        let b = den.min_exp().unwrap();
        let mut p = num.shifted(-a);
        let mut q = den.shifted(-b);
        let g = poly_gcd(&p, &q);
        if g.degree() > 0 {
            p = poly_divrem(&p, &g).0;
            q = poly_divrem(&q, &g).0;
        }
        let lc = q.leading_coeff().recip();
        p = p.scaled(&lc);
        q = q.scaled(&lc);
        Scalar { num: p.shifted(a - b), den: q }
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Scalar::canonical(p, LaurentPoly::one())
    }

    pub fn zero() -> Self {
        Scalar::from_laurent(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Scalar::from_laurent(LaurentPoly::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::from_laurent(LaurentPoly::from_rat(super::laurent::rat_int(n)))
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::from_laurent(LaurentPoly::from_rat(r))
    }

    /// s^k.
    pub fn s_pow(k: i64) -> Self {
        Scalar::from_laurent(LaurentPoly::s_pow(k))
    }

    /// q^k = s^{2k}.
    pub fn q_pow(k: i64) -> Self {
        Scalar::s_pow(2 * k)
    }

    pub fn q() -> Self {
        Scalar::q_pow(1)
    }

    pub fn s() -> Self {
        Scalar::s_pow(1)
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Scalar::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Exact value at s = s0; errors when den vanishes there (or s0 = 0
    /// meets a negative s-power).
    pub fn eval_numeric(&self, s0: &Rat) -> Result<Rat> {
        let d = self
            .den
            .eval(s0)
            .ok_or_else(|| QError::PoleAtPoint(format!("s = {}", s0)))?;
        if d.is_zero() {
            return Err(QError::PoleAtPoint(format!("s = {}", s0)));
        }
        let n = self
            .num
            .eval(s0)
            .ok_or_else(|| QError::PoleAtPoint(format!("s = {}", s0)))?;
        Ok(n / d)
    }

    /// Some((k, c)) when the scalar is the single term c·s^k.
    pub fn as_monomial(&self) -> Option<(i64, Rat)> {
        if !self.den.is_one() || self.num.num_terms() != 1 {
            return None;
        }
        let e = self.num.min_exp().unwrap();
        Some((e, self.num.coeff(e)))
    }

    /// Exponent t with self = q^t, as an exact rational in q-units.
    pub fn as_q_power(&self) -> Option<Rat> {
        let (e, c) = self.as_monomial()?;
        if !c.is_one() {
            return None;
        }
        Some(Rat::new(e.into(), 2.into()))
    }

    /// Deterministic total order for stable listings (not algebraically
    /// meaningful).
    pub fn sort_cmp(&self, other: &Self) -> std::cmp::Ordering {
        laurent_cmp(&self.num, &other.num).then_with(|| laurent_cmp(&self.den, &other.den))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Division panics on zero divisor; use `checked_div` where the divisor is
/// not known to be nonzero.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("scalar division by zero")
    }
}

impl Scalar {
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Scalar::canonical(
            &self.num * &rhs.den,
            &self.den * &rhs.num,
        ))
    }
}

/// Arithmetic selector for the generic entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

/// Selector for the q-combinatorics entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QCombo {
    Int,
    Factorial,
    Binomial,
}

/// [n]_b = (b^n − b^{-n})/(b − b^{-1}), computed as the balanced sum
/// Σ b^{n−1−2k} so bases with b = b^{-1} (q → 1) stay well defined.
pub fn q_int(n: u32, base: &Scalar) -> Result<Scalar> {
    if base.is_zero() {
        return Err(QError::DivisionByZero);
    }
    let mut acc = Scalar::zero();
    for k in 0..n {
        acc = &acc + &base.pow(n as i64 - 1 - 2 * k as i64)?;
    }
    Ok(acc)
}

pub fn q_factorial(n: u32, base: &Scalar) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for k in 1..=n {
        acc = &acc * &q_int(k, base)?;
    }
    Ok(acc)
}

/// Symmetric q-binomial [n k]_b = [n]!/([k]![n−k]!).
pub fn q_binomial(n: u32, k: u32, base: &Scalar) -> Result<Scalar> {
    if k > n {
        return Err(QError::InvalidSpec(format!("binomial needs k ≤ n, got {k} > {n}")));
    }
    let num = q_factorial(n, base)?;
    let den = &q_factorial(k, base)? * &q_factorial(n - k, base)?;
    num.checked_div(&den)
}

pub fn q_combinatorics(n: u32, k: u32, base: &Scalar, which: QCombo) -> Result<Scalar> {
    match which {
        QCombo::Int => q_int(n, base),
        QCombo::Factorial => q_factorial(n, base),
        QCombo::Binomial => q_binomial(n, k, base),
    }
}
