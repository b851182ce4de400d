//! Linear differential operators with polynomial coefficients.
//!
//! [`ThetaOperator`] is the canonical storage form `Σₖ pₖ(z) θᵏ` with
//! `θ = z·d/dz` and integer polynomial coefficients. [`DerivOperator`] is the
//! `Σₖ aₖ(z) ∂ᵏ` form with rational-function coefficients; conversion between
//! the two is exact.

mod normal;
mod pullback;
mod singular;
mod sympower;

pub use normal::normal_form;
pub use pullback::{pullback, pullback_chain, Substitution};
pub use singular::{singular_points, SingularPoints};
pub use sympower::{
    is_symmetric_cube, is_symmetric_square, symmetric_cube, symmetric_power, symmetric_square,
};

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc};
use crate::series::{LogSolution, TruncatedSeries};
use crate::Rational;

/// `Σₖ pₖ(z) θᵏ` with content-normalized integer polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    var: String,
    coeffs: Vec<Poly>,
}

impl ThetaOperator {
    /// Builds and content-normalizes an operator from rational polynomial
    /// coefficients (index k multiplies θᵏ).
    pub fn new(var: &str, coeffs: Vec<Poly>) -> Result<Self> {
        let coeffs = normalize_content(coeffs);
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("operator has no nonzero coefficient".into()));
        }
        Ok(ThetaOperator { var: var.to_string(), coeffs })
    }

    /// `coeffs[k]` lists the integer coefficients of the θᵏ polynomial, lowest
    /// degree first.
    pub fn from_int_coeffs(var: &str, coeffs: &[Vec<i64>]) -> Result<Self> {
        Self::new(var, coeffs.iter().map(|c| Poly::from_ints(c)).collect())
    }

    pub fn from_bigint_coeffs(var: &str, coeffs: &[Vec<BigInt>]) -> Result<Self> {
        Self::new(var, coeffs.iter().map(|c| Poly::from_bigints(c)).collect())
    }

    /// `θ·Π(θ + bⱼ − 1) − z·Π(θ + aᵢ)`, the operator annihilating
    /// `ₚF_q(a; b; z)`.
    pub fn hypergeometric(var: &str, upper: &[Rational], lower: &[Rational]) -> Result<Self> {
        let mut left = Poly::var();
        for b in lower {
            left = &left * &Poly::new(vec![b - Rational::one(), Rational::one()]);
        }
        let mut right = Poly::one();
        for a in upper {
            right = &right * &Poly::new(vec![a.clone(), Rational::one()]);
        }
        let n = left.degree().unwrap_or(0).max(right.degree().unwrap_or(0));
        let coeffs = (0..=n)
            .map(|k| Poly::new(vec![left.coeff(k), -right.coeff(k)]))
            .collect();
        Self::new(var, coeffs)
    }

    /// The operator θ.
    pub fn theta(var: &str) -> Self {
        Self::new(var, vec![Poly::zero(), Poly::one()]).expect("nonzero")
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn with_var(&self, var: &str) -> Self {
        ThetaOperator { var: var.to_string(), coeffs: self.coeffs.clone() }
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Integer coefficient lists (lowest degree first) for each θᵏ.
    pub fn int_coeffs(&self) -> Vec<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|p| p.to_integers().expect("content-normalized operator is integral"))
            .collect()
    }

    /// Writes the operator as `Σⱼ zʲ Pⱼ(θ)` and returns the θ-polynomials `Pⱼ`.
    pub fn z_expansion(&self) -> Vec<Poly> {
        let deg = self.coeffs.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        (0..=deg)
            .map(|j| Poly::new(self.coeffs.iter().map(|p| p.coeff(j)).collect()))
            .collect()
    }

    /// Applies the operator to a log-series; θ acts on `log z` by the product rule.
    pub fn apply(&self, f: &LogSolution) -> LogSolution {
        let mut acc: Option<LogSolution> = None;
        let mut power = f.clone();
        for (k, p) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = power.theta();
            }
            if p.is_zero() {
                continue;
            }
            let term = power.mul_poly(p);
            acc = Some(match acc {
                None => term,
                Some(a) => a.checked_add(&term).expect("aligned exponents"),
            });
        }
        acc.expect("operator has a nonzero coefficient")
    }

    pub fn apply_series(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let out = self.apply(&LogSolution::from_series(f.clone()));
        out.parts()[0].clone()
    }

    /// Exact ∂-form: `θᵏ = Σⱼ S(k, j) zʲ ∂ʲ`.
    pub fn to_deriv(&self) -> DerivOperator {
        let n = self.order();
        let mut out = vec![Poly::zero(); n + 1];
        for (k, p) in self.coeffs.iter().enumerate() {
            for (j, s) in stirling2_row(k).into_iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                out[j] = &out[j] + &p.shift_up(j).scale(&Rational::from_integer(s));
            }
        }
        DerivOperator::new(out.into_iter().map(RatFunc::from_poly).collect())
    }

    /// Converts back from ∂-form: `∂ʲ = z⁻ʲ·θ(θ−1)…(θ−j+1)`, then clears
    /// denominators and content-normalizes.
    pub fn from_deriv(var: &str, op: &DerivOperator) -> Result<Self> {
        let n = op.order();
        let mut theta: Vec<RatFunc> = vec![RatFunc::zero(); n + 1];
        for (j, a) in op.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let zj = RatFunc::new(Poly::one(), Poly::monomial(Rational::one(), j));
            let base = a * &zj;
            for (i, s) in stirling1_row(j).into_iter().enumerate() {
                if !s.is_zero() {
                    theta[i] = &theta[i] + &base.scale(&Rational::from_integer(s));
                }
            }
        }
        let mut den = Poly::one();
        for c in &theta {
            den = poly_lcm(&den, c.den());
        }
        let polys = theta
            .iter()
            .map(|c| {
                let factor = den.div_rem(c.den()).0;
                c.num() * &factor
            })
            .collect();
        Self::new(var, polys)
    }
}

fn poly_lcm(a: &Poly, b: &Poly) -> Poly {
    let g = Poly::gcd(a, b);
    (a * b).div_rem(&g).0.monic()
}

/// Divides out the polynomial GCD, scales to coprime integers, and fixes the
/// sign so the lowest nonzero coefficient of the leading θ-polynomial is positive.
fn normalize_content(mut coeffs: Vec<Poly>) -> Vec<Poly> {
    while coeffs.last().is_some_and(|p| p.is_zero()) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return coeffs;
    }
    let mut g = Poly::zero();
    for p in &coeffs {
        g = Poly::gcd(&g, p);
    }
    let coeffs: Vec<Poly> = coeffs.iter().map(|p| p.div_rem(&g).0).collect();
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for p in &coeffs {
        for c in p.coeffs() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    let mut scale = Rational::new(den, num);
    let lead = coeffs.last().expect("nonempty");
    let low = &lead.coeffs()[lead.valuation().expect("nonzero")];
    if low.is_negative() {
        scale = -scale;
    }
    coeffs.iter().map(|p| p.scale(&scale)).collect()
}

/// Stirling numbers of the second kind `S(k, 0..=k)`.
fn stirling2_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 1..=k {
        let mut next = vec![BigInt::zero(); n + 1];
        for j in 1..=n {
            let mut v = BigInt::from(j) * row.get(j).cloned().unwrap_or_default();
            v += &row[j - 1];
            next[j] = v;
        }
        row = next;
    }
    row
}

/// Signed Stirling numbers of the first kind: coefficients of the falling
/// factorial `x(x−1)…(x−j+1)`, lowest degree first.
fn stirling1_row(j: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 0..j {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigInt::from(m);
        }
        row = next;
    }
    row
}

/// `Σₖ aₖ(z) ∂ᵏ` with rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivOperator {
    coeffs: Vec<RatFunc>,
}

impl DerivOperator {
    /// Trailing zero coefficients are dropped; an all-zero list gives the zero operator.
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(RatFunc::zero());
        }
        DerivOperator { coeffs }
    }

    pub fn from_polys(coeffs: Vec<Poly>) -> Self {
        Self::new(coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    /// `∂ᵏ`
    pub fn d_power(k: usize) -> Self {
        let mut c = vec![RatFunc::zero(); k + 1];
        c[k] = RatFunc::one();
        Self::new(c)
    }

    /// Multiplication by the function `f`.
    pub fn function(f: RatFunc) -> Self {
        Self::new(vec![f])
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(k).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &RatFunc {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        let inv = self.leading().recip();
        Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    /// Left multiplication by a function.
    pub fn scale_left(&self, f: &RatFunc) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    /// Operator product `self ∘ other`, using `∂ⁱ b = Σₗ C(i, l) b⁽ˡ⁾ ∂ⁱ⁻ˡ`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.order() + other.order();
        let mut out = vec![RatFunc::zero(); n + 1];
        let max_i = self.order();
        // derivatives of other's coefficients up to order max_i
        let mut derivs: Vec<Vec<RatFunc>> = Vec::with_capacity(max_i + 1);
        derivs.push(other.coeffs.clone());
        for l in 1..=max_i {
            let next = derivs[l - 1].iter().map(|b| b.derivative()).collect();
            derivs.push(next);
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut binom = BigInt::one();
            for l in 0..=i {
                if l > 0 {
                    binom = binom * BigInt::from(i + 1 - l) / BigInt::from(l);
                }
                let c = Rational::from_integer(binom.clone());
                for (j, b) in derivs[l].iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    out[i - l + j] = &out[i - l + j] + &(a * b).scale(&c);
                }
            }
        }
        Self::new(out)
    }

    /// `Σ aₖ (∂ + h)ᵏ`, i.e. `f⁻¹ ∘ self ∘ f` for `f'/f = h`.
    pub fn conjugate(&self, h: &RatFunc) -> Self {
        let shift = Self::new(vec![h.clone(), RatFunc::one()]);
        let mut power = Self::d_power(0);
        let mut acc = Self::function(RatFunc::zero());
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = shift.compose(&power);
            }
            if !a.is_zero() {
                acc = acc.add(&power.scale_left(a));
            }
        }
        acc
    }

    /// Multiplies through by the least common denominator so every coefficient
    /// is a polynomial.
    pub fn cleared(&self) -> Self {
        let mut den = Poly::one();
        for c in &self.coeffs {
            den = poly_lcm(&den, c.den());
        }
        self.scale_left(&RatFunc::from_poly(den))
    }

    /// Applies an operator whose coefficients are polynomials.
    pub fn apply(&self, f: &LogSolution) -> Result<LogSolution> {
        let mut acc: Option<LogSolution> = None;
        let mut power = f.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = power.derivative();
            }
            if a.is_zero() {
                continue;
            }
            if !a.is_polynomial() {
                return Err(Error::InvalidInput(
                    "apply needs polynomial coefficients; clear denominators first".into(),
                ));
            }
            let term = power.mul_poly(&a.num().scale(&a.den().lc().recip()));
            acc = Some(match acc {
                None => term,
                Some(s) => s.checked_add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| f.scale(&Rational::zero())))
    }

    /// Whether two operators agree up to left multiplication by a function.
    pub fn proportional(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.order() == other.order() && self.monic() == other.monic()
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let poly = p.to_string().replace('z', &self.var);
            match k {
                0 => write!(f, "({poly})")?,
                1 => write!(f, "({poly})*θ")?,
                _ => write!(f, "({poly})*θ^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for DerivOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*D")?,
                _ => write!(f, "({c})*D^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
