//! Arbitrary-precision complex arithmetic on top of `astro-float`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::Rational;

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 32;

/// Smallest supported working precision in decimal digits.
pub const MIN_DIGITS: usize = 16;

/// Complex number with arbitrary-precision parts.
#[derive(Clone, Debug)]
pub struct ComplexPoint {
    pub re: BigFloat,
    pub im: BigFloat,
}

/// Working precision and the constants cache needed by transcendental functions.
pub struct Ctx {
    digits: usize,
    bits: usize,
    cc: Consts,
}

impl Ctx {
    pub fn with_digits(digits: usize) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidInput(format!(
                "precision {digits} below the minimum of {MIN_DIGITS} digits"
            )));
        }
        let cc = Consts::new().map_err(|e| Error::InvalidInput(format!("{e:?}")))?;
        let bits = (digits as f64 * core::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        Ok(Ctx { digits, bits, cc })
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// `10^(−digits)`, as f64 (may underflow to 0 for huge precisions).
    pub fn epsilon_f64(&self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }

    pub fn real(&self, x: &BigFloat) -> ComplexPoint {
        ComplexPoint { re: x.clone(), im: BigFloat::from_i64(0, self.bits) }
    }

    pub fn int(&self, n: i64) -> ComplexPoint {
        ComplexPoint {
            re: BigFloat::from_i64(n, self.bits),
            im: BigFloat::from_i64(0, self.bits),
        }
    }

    pub fn zero(&self) -> ComplexPoint {
        self.int(0)
    }

    pub fn one(&self) -> ComplexPoint {
        self.int(1)
    }

    pub fn i(&self) -> ComplexPoint {
        ComplexPoint {
            re: BigFloat::from_i64(0, self.bits),
            im: BigFloat::from_i64(1, self.bits),
        }
    }

    pub fn from_f64(&self, re: f64, im: f64) -> ComplexPoint {
        ComplexPoint {
            re: BigFloat::from_f64(re, self.bits),
            im: BigFloat::from_f64(im, self.bits),
        }
    }

    pub fn parse_real(&mut self, s: &str) -> Result<BigFloat> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = self.parse_real(n)?;
            let d = self.parse_real(d)?;
            return Ok(n.div(&d, self.bits, RM));
        }
        let x = BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.cc);
        if x.is_nan() || s.is_empty() {
            return Err(Error::InvalidInput(format!("not a number: {s:?}")));
        }
        Ok(x)
    }

    pub fn parse(&mut self, re: &str, im: &str) -> Result<ComplexPoint> {
        Ok(ComplexPoint { re: self.parse_real(re)?, im: self.parse_real(im)? })
    }

    pub fn bigint(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.bits, RM, &mut self.cc)
    }

    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        let n = self.bigint(r.numer());
        let d = self.bigint(r.denom());
        n.div(&d, self.bits, RM)
    }

    pub fn rational_point(&mut self, r: &Rational) -> ComplexPoint {
        let x = self.rational(r);
        self.real(&x)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    /// `2πi`
    pub fn two_pi_i(&mut self) -> ComplexPoint {
        let pi = self.pi();
        ComplexPoint {
            re: BigFloat::from_i64(0, self.bits),
            im: pi.mul(&BigFloat::from_i64(2, self.bits), self.bits, RM),
        }
    }

    pub fn add(&self, a: &ComplexPoint, b: &ComplexPoint) -> ComplexPoint {
        ComplexPoint {
            re: a.re.add(&b.re, self.bits, RM),
            im: a.im.add(&b.im, self.bits, RM),
        }
    }

    pub fn sub(&self, a: &ComplexPoint, b: &ComplexPoint) -> ComplexPoint {
        ComplexPoint {
            re: a.re.sub(&b.re, self.bits, RM),
            im: a.im.sub(&b.im, self.bits, RM),
        }
    }

    pub fn mul(&self, a: &ComplexPoint, b: &ComplexPoint) -> ComplexPoint {
        let p = self.bits;
        ComplexPoint {
            re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
            im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
        }
    }

    pub fn scale(&self, a: &ComplexPoint, x: &BigFloat) -> ComplexPoint {
        ComplexPoint { re: a.re.mul(x, self.bits, RM), im: a.im.mul(x, self.bits, RM) }
    }

    pub fn neg(&self, a: &ComplexPoint) -> ComplexPoint {
        ComplexPoint { re: a.re.neg(), im: a.im.neg() }
    }

    pub fn conj(&self, a: &ComplexPoint) -> ComplexPoint {
        ComplexPoint { re: a.re.clone(), im: a.im.neg() }
    }

    pub fn norm_sqr(&self, a: &ComplexPoint) -> BigFloat {
        let p = self.bits;
        a.re.mul(&a.re, p, RM).add(&a.im.mul(&a.im, p, RM), p, RM)
    }

    pub fn abs(&self, a: &ComplexPoint) -> BigFloat {
        self.norm_sqr(a).sqrt(self.bits, RM)
    }

    pub fn div(&self, a: &ComplexPoint, b: &ComplexPoint) -> Result<ComplexPoint> {
        let d = self.norm_sqr(b);
        if d.is_zero() {
            return Err(Error::InvalidInput("complex division by zero".into()));
        }
        let num = self.mul(a, &self.conj(b));
        Ok(ComplexPoint { re: num.re.div(&d, self.bits, RM), im: num.im.div(&d, self.bits, RM) })
    }

    pub fn recip(&self, a: &ComplexPoint) -> Result<ComplexPoint> {
        self.div(&self.one(), a)
    }

    pub fn powi(&self, a: &ComplexPoint, n: usize) -> ComplexPoint {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn exp(&mut self, a: &ComplexPoint) -> ComplexPoint {
        let p = self.bits;
        let m = a.re.exp(p, RM, &mut self.cc);
        let c = a.im.cos(p, RM, &mut self.cc);
        let s = a.im.sin(p, RM, &mut self.cc);
        ComplexPoint { re: m.mul(&c, p, RM), im: m.mul(&s, p, RM) }
    }

    /// Argument in `(−π, π]`.
    pub fn arg(&mut self, a: &ComplexPoint) -> Result<BigFloat> {
        let p = self.bits;
        if a.re.is_zero() && a.im.is_zero() {
            return Err(Error::InvalidInput("argument of zero".into()));
        }
        let pi = self.pi();
        if a.re.is_zero() {
            let half = pi.div(&BigFloat::from_i64(2, p), p, RM);
            return Ok(if a.im.is_negative() { half.neg() } else { half });
        }
        let base = a.im.div(&a.re, p, RM).atan(p, RM, &mut self.cc);
        Ok(if a.re.is_positive() {
            base
        } else if a.im.is_negative() {
            base.sub(&pi, p, RM)
        } else {
            base.add(&pi, p, RM)
        })
    }

    /// Principal logarithm.
    pub fn ln(&mut self, a: &ComplexPoint) -> Result<ComplexPoint> {
        let theta = self.arg(a)?;
        let r = self.norm_sqr(a).ln(self.bits, RM, &mut self.cc);
        Ok(ComplexPoint { re: r.div(&BigFloat::from_i64(2, self.bits), self.bits, RM), im: theta })
    }

    /// `exp(r·log a)` with the principal logarithm.
    pub fn pow_rational(&mut self, a: &ComplexPoint, r: &Rational) -> Result<ComplexPoint> {
        use num_traits::{ToPrimitive, Zero};
        if r.is_zero() {
            return Ok(self.one());
        }
        if r.is_integer() {
            if let Some(k) = r.to_integer().to_i64() {
                let pw = self.powi(a, k.unsigned_abs() as usize);
                return if k < 0 { self.recip(&pw) } else { Ok(pw) };
            }
        }
        let l = self.ln(a)?;
        let rr = self.rational(r);
        Ok(self.exp(&self.scale(&l, &rr)))
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .unwrap_or(f64::NAN)
    }

    pub fn to_f64_pair(&mut self, a: &ComplexPoint) -> (f64, f64) {
        (self.to_f64(&a.re), self.to_f64(&a.im))
    }

    /// Decimal string with `digits` significant digits, e.g. `-1.2345e-3`.
    pub fn format(&mut self, x: &BigFloat, digits: usize) -> String {
        let raw = x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".to_string());
        round_decimal(&raw, digits.max(1))
    }

    pub fn format_point(&mut self, a: &ComplexPoint, digits: usize) -> (String, String) {
        (self.format(&a.re, digits), self.format(&a.im, digits))
    }

    /// `|a − b|` as f64, for residual reports.
    pub fn distance_f64(&mut self, a: &ComplexPoint, b: &ComplexPoint) -> f64 {
        let d = self.abs(&self.sub(a, b));
        self.to_f64(&d)
    }
}

/// Rounds a string `[-]d.ddd[e±x]` (or `0.0`) to `digits` significant digits.
fn round_decimal(raw: &str, digits: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|c| c - b'0').collect();
    let Some(first) = all.iter().position(|&d| d != 0) else {
        return "0".to_string();
    };
    // decimal exponent of the first significant digit
    let mut e10 = exp + int_part.len() as i64 - 1 - first as i64;
    let sig = &all[first..];
    let mut kept: Vec<u8> = sig.iter().take(digits).copied().collect();
    kept.resize(digits, 0);
    if sig.len() > digits && sig[digits] >= 5 {
        let mut i = digits;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                e10 += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    while kept.len() > 1 && kept.last() == Some(&0) {
        kept.pop();
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push((b'0' + kept[0]) as char);
    if kept.len() > 1 {
        s.push('.');
        for d in &kept[1..] {
            s.push((b'0' + d) as char);
        }
    }
    if e10 != 0 {
        s.push_str(&format!("e{e10}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_decimal("3.14159e+0", 3), "3.14");
        assert_eq!(round_decimal("-9.996e-3", 3), "-1e-2");
        assert_eq!(round_decimal("0.0", 5), "0");
        assert_eq!(round_decimal("1.25e+2", 5), "1.25e2");
    }

    #[test]
    fn euler_identity() {
        let mut c = Ctx::with_digits(50).unwrap();
        let pi = c.pi();
        let ipi = ComplexPoint { re: BigFloat::from_i64(0, c.bits()), im: pi };
        let e = c.exp(&ipi);
        assert!(c.distance_f64(&e, &c.int(-1)) < 1e-48);
    }

    #[test]
    fn log_branch_and_powers() {
        let mut c = Ctx::with_digits(40).unwrap();
        let z = c.from_f64(-1.0, 0.0);
        let l = c.ln(&z).unwrap();
        let pi = c.pi();
        assert!(c.distance_f64(&l, &ComplexPoint { re: BigFloat::from_i64(0, c.bits()), im: pi }) < 1e-38);
        let w = c.from_f64(0.0, 2.0);
        let r = c.pow_rational(&w, &crate::rat(1, 2)).unwrap();
        assert!(c.distance_f64(&c.mul(&r, &r), &w) < 1e-38);
        let third = c.rational(&crate::rat(1, 3));
        assert_eq!(c.format(&third, 5), "3.3333e-1");
    }

    #[test]
    fn rejects_low_precision() {
        assert!(Ctx::with_digits(8).is_err());
    }
}
