//! Exact arithmetic in the field ℚ(√2)(i).
//!
//! Every coefficient in this crate is a quadruple (a, b, c, d) of arbitrary-
//! precision rationals representing a + b√2 + i(c + d√2). The field is
//! closed under the four arithmetic operations and under complex
//! conjugation, is formally real in the sense that z·z̄ = 0 forces z = 0,
//! and embeds into ℂ via f64 only for diagnostics — nothing exact ever
//! routes through floats.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational p/q. Panics when q = 0.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Element a + b√2 + i(c + d√2) of ℚ(√2)(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Scalar {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Scalar { a, b, c, d }
    }

    pub fn zero() -> Self {
        Scalar::new(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Scalar::new(Rat::zero(), Rat::zero(), Rat::one(), Rat::zero())
    }

    /// √2.
    pub fn sqrt2() -> Self {
        Scalar::new(Rat::zero(), Rat::one(), Rat::zero(), Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(rat_int(n), Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// Rational p/q as a field element.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar::new(rat(p, q), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::new(r, Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// p/q · i.
    pub fn i_ratio(p: i64, q: i64) -> Self {
        Scalar::new(Rat::zero(), Rat::zero(), rat(p, q), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }

    /// True when the element lies in ℚ.
    pub fn is_rational(&self) -> bool {
        self.is_real() && self.b.is_zero()
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    /// Complex conjugate a + b√2 − i(c + d√2).
    pub fn conj(&self) -> Self {
        Scalar::new(
            self.a.clone(),
            self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    /// Real part as a field element.
    pub fn re(&self) -> Self {
        Scalar::new(self.a.clone(), self.b.clone(), Rat::zero(), Rat::zero())
    }

    /// Imaginary part y of z = x + iy, as a (real) field element.
    pub fn im(&self) -> Self {
        Scalar::new(self.c.clone(), self.d.clone(), Rat::zero(), Rat::zero())
    }

    /// i·z.
    pub fn times_i(&self) -> Self {
        Scalar::new(
            -self.c.clone(),
            -self.d.clone(),
            self.a.clone(),
            self.b.clone(),
        )
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Scalar::new(&self.a * r, &self.b * r, &self.c * r, &self.d * r)
    }

    /// z·z̄ = (a+b√2)² + (c+d√2)², a nonnegative element of ℚ(√2).
    /// Zero iff z = 0 (the field is formally real).
    pub fn norm_sq(&self) -> (Rat, Rat) {
        // (a+b√2)² + (c+d√2)² = a²+2b²+c²+2d² + 2(ab+cd)√2
        let two = rat_int(2);
        let p = &self.a * &self.a
            + &two * (&self.b * &self.b)
            + &self.c * &self.c
            + &two * (&self.d * &self.d);
        let q = &two * (&self.a * &self.b + &self.c * &self.d);
        (p, q)
    }

    /// Exact inverse; None for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/z = z̄ / (z z̄); z z̄ = p + q√2 real, and
        // 1/(p+q√2) = (p − q√2)/(p² − 2q²).
        let (p, q) = self.norm_sq();
        let disc = &p * &p - rat_int(2) * (&q * &q);
        debug_assert!(!disc.is_zero(), "norm of nonzero scalar is nonzero");
        let u = &p / &disc;
        let v = -&q / &disc;
        // z̄ · (u + v√2)
        let conj = self.conj();
        let real_factor = Scalar::new(u, v, Rat::zero(), Rat::zero());
        Some(&conj * &real_factor)
    }

    /// Sign of a real element a + b√2: −1, 0, or +1. Panics on a
    /// non-real input.
    pub fn sign_real(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real scalar");
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (s, t) if s == t => s,
            // a, b of opposite signs: a + b√2 > 0 iff a² > 2b² when a > 0,
            // iff a² < 2b² when b > 0. a² = 2b² would make √2 rational.
            (s, _) => {
                let a2 = &self.a * &self.a;
                let b2 = rat_int(2) * &self.b * &self.b;
                debug_assert!(a2 != b2);
                if a2 > b2 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    /// Exact square root of a nonnegative real element, when it exists in
    /// the field: looks for s with s² = self among u + v√2.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if !self.is_real() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.sign_real() < 0 {
            return None;
        }
        // (u + v√2)² = u² + 2v² + 2uv√2 = a + b√2
        // ⟹ u² = (a ± √(a²−2b²))/2 and v = b/(2u) (or u = 0, 2v² = a).
        if self.b.is_zero() {
            // Pure rational a ≥ 0: either √a ∈ ℚ, or a = 2v² with v ∈ ℚ.
            if let Some(u) = rat_sqrt(&self.a) {
                return Some(Scalar::from_rat(u));
            }
            if let Some(v) = rat_sqrt(&(&self.a / rat_int(2))) {
                return Some(Scalar::new(Rat::zero(), v, Rat::zero(), Rat::zero()));
            }
            return None;
        }
        let disc = &self.a * &self.a - rat_int(2) * (&self.b * &self.b);
        if disc.is_negative() {
            return None;
        }
        let s = rat_sqrt(&disc)?;
        for root in [&s, &(-s.clone())] {
            let u2 = (&self.a + root) / rat_int(2);
            if !u2.is_negative() {
                if let Some(u) = rat_sqrt(&u2) {
                    if !u.is_zero() {
                        let v = &self.b / (rat_int(2) * &u);
                        let cand = Scalar::new(u, v, Rat::zero(), Rat::zero());
                        if cand.sign_real() > 0 {
                            return Some(cand);
                        }
                        return Some(-cand);
                    }
                }
            }
        }
        None
    }

    /// Float shadow; diagnostics only.
    pub fn to_c64(&self) -> Complex64 {
        let s2 = std::f64::consts::SQRT_2;
        Complex64::new(
            rat_f64(&self.a) + rat_f64(&self.b) * s2,
            rat_f64(&self.c) + rat_f64(&self.d) * s2,
        )
    }

    pub fn to_f64_real(&self) -> f64 {
        debug_assert!(self.is_real());
        rat_f64(&self.a) + rat_f64(&self.b) * std::f64::consts::SQRT_2
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

pub fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// √r when rational, for r ≥ 0.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// n-th root of r when rational, for r ≥ 0 (r < 0 allowed for odd n).
pub fn rat_nth_root(r: &Rat, n: u32) -> Option<Rat> {
    if r.is_zero() {
        return Some(Rat::zero());
    }
    if r.is_negative() {
        if n % 2 == 1 {
            return rat_nth_root(&-r.clone(), n).map(|x| -x);
        }
        return None;
    }
    let num = r.numer().nth_root(n);
    let den = r.denom().nth_root(n);
    if &num_traits::pow(num.clone(), n as usize) == r.numer()
        && &num_traits::pow(den.clone(), n as usize) == r.denom()
    {
        Some(Rat::new(num, den))
    } else {
        None
    }
}

impl<'a, 'b> Add<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'b Scalar) -> Scalar {
        Scalar::new(
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            &self.c + &rhs.c,
            &self.d + &rhs.d,
        )
    }
}

impl<'a, 'b> Sub<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'b Scalar) -> Scalar {
        Scalar::new(
            &self.a - &rhs.a,
            &self.b - &rhs.b,
            &self.c - &rhs.c,
            &self.d - &rhs.d,
        )
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        // (x₁ + i y₁)(x₂ + i y₂) with x, y ∈ ℚ(√2); ℚ(√2) products expand
        // (a₁ + b₁√2)(a₂ + b₂√2) = a₁a₂ + 2b₁b₂ + (a₁b₂ + b₁a₂)√2.
        let two = rat_int(2);
        let mul_q2 = |a1: &Rat, b1: &Rat, a2: &Rat, b2: &Rat| -> (Rat, Rat) {
            (a1 * a2 + &two * (b1 * b2), a1 * b2 + b1 * a2)
        };
        let (xx_a, xx_b) = mul_q2(&self.a, &self.b, &rhs.a, &rhs.b);
        let (yy_a, yy_b) = mul_q2(&self.c, &self.d, &rhs.c, &rhs.d);
        let (xy_a, xy_b) = mul_q2(&self.a, &self.b, &rhs.c, &rhs.d);
        let (yx_a, yx_b) = mul_q2(&self.c, &self.d, &rhs.a, &rhs.b);
        Scalar::new(xx_a - yy_a, xx_b - yy_b, xy_a + yx_a, xy_b + yx_b)
    }
}

impl<'a, 'b> Div<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.c += &rhs.c;
        self.d += &rhs.d;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
        self.c -= &rhs.c;
        self.d -= &rhs.d;
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.a.is_zero() {
            parts.push(format!("{}", self.a));
        }
        if !self.b.is_zero() {
            parts.push(format!("{}√2", self.b));
        }
        if !self.c.is_zero() {
            parts.push(format!("{}i", self.c));
        }
        if !self.d.is_zero() {
            parts.push(format!("{}i√2", self.d));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_mixed_element() {
        let z = Scalar::new(rat(1, 2), rat(-3, 1), rat(2, 5), rat(1, 1));
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, Scalar::one());
    }

    #[test]
    fn sign_of_opposed_terms() {
        // 3 − 2√2 > 0, 1 − √2 < 0
        assert_eq!(Scalar::new(rat_int(3), rat_int(-2), Rat::zero(), Rat::zero()).sign_real(), 1);
        assert_eq!(Scalar::new(rat_int(1), rat_int(-1), Rat::zero(), Rat::zero()).sign_real(), -1);
    }

    #[test]
    fn sqrt_half_is_half_sqrt2() {
        let s = Scalar::from_ratio(1, 2).sqrt_exact().unwrap();
        assert_eq!(s, Scalar::new(Rat::zero(), rat(1, 2), Rat::zero(), Rat::zero()));
        let t = Scalar::new(rat_int(3), rat_int(2), Rat::zero(), Rat::zero());
        // 3 + 2√2 = (1 + √2)²
        let r = t.sqrt_exact().unwrap();
        assert_eq!(&r * &r, t);
        assert!(Scalar::from_int(3).sqrt_exact().is_none());
    }
}
