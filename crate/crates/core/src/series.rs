//! Truncated power series `z^ρ · Σ cₙ zⁿ + O(z^(ρ+N))` over the rationals, and
//! log-series `Σₖ (log z)ᵏ · Sₖ(z)` built on top of them.
//!
//! Coefficients are exact; the truncation order `N` is the number of stored
//! coefficients and is always relative to the leading exponent `ρ`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Rational;

/// Default truncation order used by constructors that take none.
pub const DEFAULT_ORDER: usize = 20;

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    exponent: Rational,
    coeffs: Vec<Rational>,
}

/// Binary operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Formal elementary function selector for [`series_elementary`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elementary {
    Exp,
    Log,
    Pow(Rational),
}

impl TruncatedSeries {
    pub fn new(exponent: Rational, coeffs: Vec<Rational>) -> Self {
        TruncatedSeries { exponent, coeffs }
    }

    /// Series with leading exponent 0.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self::new(Rational::zero(), coeffs)
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let mut c: Vec<Rational> = coeffs
            .iter()
            .map(|&a| Rational::from_integer(a.into()))
            .collect();
        c.resize(order, Rational::zero());
        Self::from_coeffs(c)
    }

    /// Polynomial viewed as a series truncated at `order`.
    pub fn from_poly(p: &Poly, order: usize) -> Self {
        Self::from_coeffs((0..order).map(|k| p.coeff(k)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(vec![Rational::zero(); order])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// The series `z` (exponent 0, coefficient 1 at index 1).
    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^(ρ+n)`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent above which nothing is known: `ρ + N`.
    pub fn absolute_order(&self) -> Rational {
        &self.exponent + Rational::from_integer(self.coeffs.len().into())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero stored coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Exponent of the first nonzero term.
    pub fn leading_exponent(&self) -> Option<Rational> {
        self.valuation()
            .map(|v| &self.exponent + Rational::from_integer(v.into()))
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.valuation().map(|v| &self.coeffs[v])
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(order);
        s
    }

    /// Drops leading zeros into the exponent. Zero series are returned unchanged.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Some(v) if v > 0 => TruncatedSeries {
                exponent: &self.exponent + Rational::from_integer(v.into()),
                coeffs: self.coeffs[v..].to_vec(),
            },
            _ => self.clone(),
        }
    }

    /// Re-expresses the series with a smaller exponent `e` (padding with zeros).
    pub fn with_exponent(&self, e: &Rational) -> Result<Self> {
        let shift = int_gap(&self.exponent, e)?;
        if shift < 0 {
            return Err(Error::InvalidInput(format!(
                "cannot raise exponent {} to {}",
                self.exponent, e
            )));
        }
        let mut coeffs = vec![Rational::zero(); shift as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        Ok(TruncatedSeries { exponent: e.clone(), coeffs })
    }

    /// Multiplication by `z^k` for rational `k`.
    pub fn shift_exponent(&self, k: &Rational) -> Self {
        TruncatedSeries {
            exponent: &self.exponent + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries {
            exponent: self.exponent.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let e = if self.exponent <= other.exponent {
            self.exponent.clone()
        } else {
            other.exponent.clone()
        };
        let a = self.with_exponent(&e)?;
        let b = other.with_exponent(&e)?;
        let n = a.order().min(b.order());
        Ok(TruncatedSeries {
            exponent: e,
            coeffs: (0..n).map(|k| &a.coeffs[k] + &b.coeffs[k]).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn mul_series(&self, other: &Self) -> Self {
        let (a, b) = (self.normalized(), other.normalized());
        let exponent = &a.exponent + &b.exponent;
        match (self.valuation(), other.valuation()) {
            (Some(_), Some(_)) => {
                let n = a.order().min(b.order());
                let mut coeffs = vec![Rational::zero(); n];
                for (i, x) in a.coeffs.iter().take(n).enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.coeffs.iter().take(n - i).enumerate() {
                        coeffs[i + j] += x * y;
                    }
                }
                TruncatedSeries { exponent, coeffs }
            }
            (None, Some(_)) => Self::zero_at(exponent, self.order()),
            (Some(_), None) => Self::zero_at(exponent, other.order()),
            (None, None) => Self::zero_at(exponent, self.order().min(other.order())),
        }
    }

    fn zero_at(exponent: Rational, order: usize) -> Self {
        TruncatedSeries { exponent, coeffs: vec![Rational::zero(); order] }
    }

    /// Exact multiplication by a polynomial; keeps the relative order.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let Some(v) = p.valuation() else {
            return Self::zero_at(self.exponent.clone(), self.order());
        };
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n];
        for (j, c) in p.coeffs().iter().enumerate().skip(v) {
            if c.is_zero() {
                continue;
            }
            for k in 0..n.saturating_sub(j - v) {
                coeffs[k + j - v] += c * &self.coeffs[k];
            }
        }
        TruncatedSeries {
            exponent: &self.exponent + Rational::from_integer(v.into()),
            coeffs,
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let b = other.normalized();
        if b.is_zero() {
            return Err(Error::DivisionByZeroSeries);
        }
        let a = self.normalized();
        let n = a.order().min(b.order());
        let inv_lead = b.coeffs[0].recip();
        let mut q = vec![Rational::zero(); n];
        for k in 0..n {
            let mut acc = a.coeffs[k].clone();
            for j in 1..=k {
                if !b.coeffs[j].is_zero() {
                    acc -= &b.coeffs[j] * &q[k - j];
                }
            }
            q[k] = acc * &inv_lead;
        }
        Ok(TruncatedSeries { exponent: &a.exponent - &b.exponent, coeffs: q })
    }

    /// `d/dz`
    pub fn derivative(&self) -> Self {
        TruncatedSeries {
            exponent: &self.exponent - Rational::one(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * (&self.exponent + Rational::from_integer(n.into())))
                .collect(),
        }
    }

    /// `z·d/dz`
    pub fn theta(&self) -> Self {
        self.derivative().shift_exponent(&Rational::one())
    }

    /// Whether the exponent is an integer; then `integer_exponent` is exact.
    fn integer_exponent(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.exponent
            .is_integer()
            .then(|| self.exponent.to_integer().to_i64())
            .flatten()
    }

    /// Coefficients as a plain power series starting at `z^0`, if the series has
    /// integral exponent and no negative powers.
    fn as_power_series(&self) -> Option<Vec<Rational>> {
        let s = self.normalized();
        if s.is_zero() {
            let e = self.integer_exponent()?;
            if e < 0 {
                return None;
            }
            return Some(vec![Rational::zero(); self.order() + e as usize]);
        }
        let e = s.integer_exponent()?;
        if e < 0 {
            return None;
        }
        let mut c = vec![Rational::zero(); e as usize];
        c.extend(s.coeffs.iter().cloned());
        Some(c)
    }

    /// Formal derivative helpers for integer power series.
    fn series_derivative_coeffs(c: &[Rational]) -> Vec<Rational> {
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * Rational::from_integer(k.into()))
            .collect()
    }
}

fn int_gap(high: &Rational, low: &Rational) -> Result<i64> {
    use num_traits::ToPrimitive;
    let d = high - low;
    if !d.is_integer() {
        return Err(Error::IncompatibleExponents(high.to_string(), low.to_string()));
    }
    d.to_integer()
        .to_i64()
        .ok_or_else(|| Error::InvalidInput("exponent gap out of range".into()))
}

/// `a op b` with exact rational coefficients.
pub fn series_arith(a: &TruncatedSeries, b: &TruncatedSeries, op: ArithOp) -> Result<TruncatedSeries> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => Ok(a.mul_series(b)),
        ArithOp::Div => a.checked_div(b),
    }
}

/// `f(g(z))`. `g` must vanish at 0; a rational exponent on `f` additionally
/// needs `g`'s leading coefficient to be 1.
pub fn series_compose(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries> {
    let gn = g.normalized();
    let Some(lead_exp) = g.leading_exponent() else {
        return Err(Error::CompositionDomain("inner series vanishes".into()));
    };
    if lead_exp < Rational::one() {
        return Err(Error::CompositionDomain(format!(
            "inner series has leading exponent {lead_exp}, need >= 1"
        )));
    }
    if !lead_exp.is_integer() {
        return Err(Error::CompositionDomain("inner series has fractional exponents".into()));
    }
    let v = int_gap(&lead_exp, &Rational::zero())? as usize;
    let fnorm = f.normalized();
    let Some(_) = f.valuation() else {
        // zero outer series: known to O(g^(ρ+N))
        let order = (v * f.order()).min(gn.order());
        return Ok(TruncatedSeries::zero_at(&fnorm.exponent * Rational::from_integer(v.into()), order));
    };
    // relative order of the result w.r.t. its leading term g^ρ; with ρ = 0 the
    // constant term is exact and g's error enters one power of z^v later
    let rho_zero = fnorm.exponent.is_zero();
    let g_err = if rho_zero { gn.order() + v } else { gn.order() };
    let order = (v * fnorm.order()).min(g_err);
    // g = c z^v (1 + h); h has order `order`
    let c = gn.coeffs[0].clone();
    let unit = TruncatedSeries::from_coeffs(gn.coeffs.iter().map(|a| a / &c).collect()).truncate(order);
    // g / z^v as a power series; powers g^n = c^n z^(nv) unit^n
    let rho = fnorm.exponent.clone();
    let prefactor = if rho.is_integer() {
        let e = int_gap(&rho, &Rational::zero())?;
        let cpow = if e >= 0 { pow_rat(&c, e as u64) } else { pow_rat(&c.recip(), (-e) as u64) };
        pow_int_series(&unit, e)?.scale(&cpow)
    } else {
        if !c.is_one() {
            return Err(Error::CompositionDomain(format!(
                "non-integer outer exponent {rho} needs unit leading coefficient, found {c}"
            )));
        }
        series_elementary(&unit, &Elementary::Pow(rho.clone()))?
    };
    // Σ a_n (g/z^v... ) : Horner in w = g = z^v * c * unit
    let w_rel = unit.scale(&c); // g / z^v
    let mut acc = vec![Rational::zero(); order];
    let mut power = TruncatedSeries::one(order); // (g/z^v)^n
    for (n, a) in fnorm.coeffs.iter().enumerate() {
        let shift = n * v;
        if shift >= order {
            break;
        }
        if !a.is_zero() {
            for k in 0..order - shift {
                acc[k + shift] += a * &power.coeffs[k];
            }
        }
        power = power.mul_series(&w_rel).truncate(order);
    }
    let body = TruncatedSeries::from_coeffs(acc);
    let out = if rho_zero { body } else { body.mul_series(&prefactor.truncate(order)) };
    Ok(out.shift_exponent(&(rho * Rational::from_integer(v.into()))))
}

fn pow_rat(c: &Rational, e: u64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= c;
    }
    acc
}

/// Integer power of a series with constant term.
fn pow_int_series(s: &TruncatedSeries, e: i64) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(s.order());
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul_series(s);
    }
    if e < 0 {
        acc = TruncatedSeries::one(s.order()).checked_div(&acc)?;
    }
    Ok(acc)
}

/// Compositional inverse: returns `g` with `f(g(q)) = q` to truncation order.
pub fn series_reverse(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c = f.as_power_series().ok_or(Error::NotReversible)?;
    if c.len() < 2 || !c[0].is_zero() || c[1].is_zero() {
        return Err(Error::NotReversible);
    }
    let n = c.len();
    let fs = TruncatedSeries::from_coeffs(c.clone());
    let df = TruncatedSeries::from_coeffs(TruncatedSeries::series_derivative_coeffs(&c));
    // Newton iteration g <- g - (f(g) - q) / f'(g), doubling the correct terms
    let mut g = TruncatedSeries::from_coeffs({
        let mut v = vec![Rational::zero(); n];
        v[1] = c[1].recip();
        v
    });
    let q = TruncatedSeries::var(n);
    let mut correct = 2;
    while correct < n {
        let fg = series_compose(&fs, &g)?.with_exponent(&Rational::zero())?.truncate(n);
        let dfg = series_compose(&df, &g)?.with_exponent(&Rational::zero())?.truncate(n);
        let resid = fg.checked_sub(&q)?;
        let step = resid.checked_div(&dfg)?.with_exponent(&Rational::zero())?;
        g = g.checked_sub(&step)?.truncate(n);
        correct *= 2;
    }
    let mut coeffs = g.coeffs;
    coeffs.resize(n, Rational::zero());
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Formal `exp`, `log`, or rational power.
///
/// `exp` needs a vanishing constant term; `log` needs constant term 1;
/// `pow(r)` needs the series to be `z^σ (1 + …)` and returns `z^(rσ) (1 + …)^r`.
pub fn series_elementary(f: &TruncatedSeries, kind: &Elementary) -> Result<TruncatedSeries> {
    match kind {
        Elementary::Exp => {
            let c = f
                .as_power_series()
                .filter(|c| c.first().is_none_or(|a| a.is_zero()))
                .ok_or_else(|| Error::ElementaryDomain("exp needs zero constant term".into()))?;
            let n = c.len();
            // E' = f' E
            let mut e = vec![Rational::zero(); n];
            if n > 0 {
                e[0] = Rational::one();
            }
            for m in 1..n {
                let mut acc = Rational::zero();
                for k in 1..=m {
                    if !c[k].is_zero() {
                        acc += &c[k] * Rational::from_integer(k.into()) * &e[m - k];
                    }
                }
                e[m] = acc / Rational::from_integer(m.into());
            }
            Ok(TruncatedSeries::from_coeffs(e))
        }
        Elementary::Log => {
            let c = f
                .as_power_series()
                .filter(|c| c.first().is_some_and(|a| a.is_one()))
                .ok_or_else(|| Error::ElementaryDomain("log needs constant term 1".into()))?;
            let n = c.len();
            let fs = TruncatedSeries::from_coeffs(c.clone());
            let df = TruncatedSeries::from_coeffs(TruncatedSeries::series_derivative_coeffs(&c));
            let ratio = df.checked_div(&fs)?;
            let mut out = vec![Rational::zero(); n];
            for (k, a) in ratio.coeffs.iter().enumerate() {
                if k + 1 < n {
                    out[k + 1] = a / Rational::from_integer((k + 1).into());
                }
            }
            Ok(TruncatedSeries::from_coeffs(out))
        }
        Elementary::Pow(r) => {
            let s = f.normalized();
            if s.leading_coeff().is_none_or(|a| !a.is_one()) {
                return Err(Error::ElementaryDomain("pow needs leading coefficient 1".into()));
            }
            let c = &s.coeffs;
            let n = c.len();
            // f P' = r f' P on the unit part
            let mut p = vec![Rational::zero(); n];
            p[0] = Rational::one();
            for m in 1..n {
                let mut acc = Rational::zero();
                for k in 1..=m {
                    if c[k].is_zero() {
                        continue;
                    }
                    let kk = Rational::from_integer(k.into());
                    let mk = Rational::from_integer((m - k).into());
                    acc += &c[k] * &p[m - k] * (r * &kk - mk);
                }
                p[m] = acc / Rational::from_integer(m.into());
            }
            Ok(TruncatedSeries::new(r * &s.exponent, p))
        }
    }
}

/// Generalized hypergeometric series `ₚF_q(upper; lower; z)` to `order` terms.
pub fn hypergeom_series(upper: &[Rational], lower: &[Rational], order: usize) -> Result<TruncatedSeries> {
    for b in lower {
        if b.is_integer() && !b.is_positive() {
            return Err(Error::PoleInParameters(b.to_string()));
        }
    }
    let mut coeffs = Vec::with_capacity(order);
    let mut term = Rational::one();
    for n in 0..order {
        coeffs.push(term.clone());
        let nn = Rational::from_integer(n.into());
        let mut num = Rational::one();
        for a in upper {
            num *= a + &nn;
        }
        let mut den = &nn + Rational::one();
        for b in lower {
            den *= b + &nn;
        }
        term = term * num / den;
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

impl PartialEq for TruncatedSeries {
    /// Equal when both vanish, or when leading exponents agree and all
    /// coefficients in the shared truncation range agree.
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        match (a.is_zero(), b.is_zero()) {
            (true, true) => true,
            (false, false) => {
                a.exponent == b.exponent
                    && a.coeffs.iter().zip(b.coeffs.iter()).all(|(x, y)| x == y)
            }
            _ => false,
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    /// Panics when the exponents are incompatible; see [`TruncatedSeries::checked_add`].
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_add(rhs).expect("series exponents differ by a non-integer")
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_sub(rhs).expect("series exponents differ by a non-integer")
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.exponent.is_zero() {
            write!(f, "z^({})*(", self.exponent)?;
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order())?;
        if !self.exponent.is_zero() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `Σₖ (log z)ᵏ · partₖ(z)`, all parts sharing one leading exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSolution {
    exponent: Rational,
    parts: Vec<TruncatedSeries>,
}

impl LogSolution {
    /// Builds a log-series; every part is re-expressed at the smallest exponent
    /// and truncated to the common absolute order.
    pub fn new(parts: Vec<TruncatedSeries>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("log-series needs at least one part".into()));
        }
        let e = parts
            .iter()
            .map(|p| p.exponent.clone())
            .min()
            .expect("nonempty");
        let aligned: Vec<TruncatedSeries> = parts
            .iter()
            .map(|p| p.with_exponent(&e))
            .collect::<Result<_>>()?;
        let n = aligned.iter().map(|p| p.order()).min().expect("nonempty");
        let mut parts: Vec<TruncatedSeries> = aligned.into_iter().map(|p| p.truncate(n)).collect();
        while parts.len() > 1 && parts.last().is_some_and(|p| p.is_zero()) {
            parts.pop();
        }
        Ok(LogSolution { exponent: e, parts })
    }

    /// A plain series viewed as a log-series of log-degree 0.
    pub fn from_series(s: TruncatedSeries) -> Self {
        LogSolution { exponent: s.exponent.clone(), parts: vec![s] }
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn parts(&self) -> &[TruncatedSeries] {
        &self.parts
    }

    pub fn part(&self, k: usize) -> Option<&TruncatedSeries> {
        self.parts.get(k)
    }

    /// Highest power of `log z` present.
    pub fn log_degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn order(&self) -> usize {
        self.parts[0].order()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }

    /// `θ = z·d/dz`, with `θ (log z)ᵏ = k (log z)^(k-1)`.
    pub fn theta(&self) -> Self {
        let parts = (0..self.parts.len())
            .map(|k| {
                let t = self.parts[k].theta();
                match self.parts.get(k + 1) {
                    Some(next) => &t + &next.scale(&Rational::from_integer((k + 1).into())),
                    None => t,
                }
            })
            .collect();
        LogSolution::new(parts).expect("aligned parts")
    }

    /// `d/dz`
    pub fn derivative(&self) -> Self {
        let t = self.theta();
        LogSolution {
            exponent: &t.exponent - Rational::one(),
            parts: t.parts.iter().map(|p| p.shift_exponent(&-Rational::one())).collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        LogSolution::new(self.parts.iter().map(|s| s.mul_poly(p)).collect()).expect("aligned parts")
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LogSolution::new(self.parts.iter().map(|s| s.scale(c)).collect()).expect("aligned parts")
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let n = self.parts.len().max(other.parts.len());
        let parts = (0..n)
            .map(|k| match (self.parts.get(k), other.parts.get(k)) {
                (Some(a), Some(b)) => a.checked_add(b),
                (Some(a), None) => a.checked_add(&TruncatedSeries::zero_at(other.exponent.clone(), other.order())),
                (None, Some(b)) => TruncatedSeries::zero_at(self.exponent.clone(), self.order()).checked_add(b),
                (None, None) => unreachable!(),
            })
            .collect::<Result<Vec<_>>>()?;
        LogSolution::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn ints(c: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(c, order)
    }

    #[test]
    fn difference_of_squares() {
        let a = ints(&[1, 1], 6);
        let b = ints(&[1, -1], 6);
        assert_eq!(&a * &b, ints(&[1, 0, -1], 6));
    }

    #[test]
    fn reciprocal_of_alpha_one_minus_alpha() {
        // geometric series oracle: 1/(α(1-α)) = α^-1 (1 + α + α² + …)
        let one = TruncatedSeries::one(6);
        let den = ints(&[0, 1, -1], 7);
        let q = one.checked_div(&den).unwrap();
        assert_eq!(q.exponent(), &rat(-1, 1));
        assert_eq!(q.coeffs(), &[rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn division_by_zero_series() {
        let err = TruncatedSeries::one(4).checked_div(&TruncatedSeries::zero(4)).unwrap_err();
        assert_eq!(err, Error::DivisionByZeroSeries);
    }

    #[test]
    fn add_zero_is_identity() {
        let f = ints(&[3, -1, 4, 1, -5], 5);
        assert_eq!(&f + &TruncatedSeries::zero(8), f);
    }

    #[test]
    fn truncation_takes_min_order() {
        let a = ints(&[1, 1], 4);
        let b = ints(&[1, 2, 3], 7);
        assert_eq!((&a + &b).order(), 4);
        assert_eq!((&a * &b).order(), 4);
    }

    #[test]
    fn incompatible_exponents_rejected() {
        let a = TruncatedSeries::new(rat(1, 3), vec![rat(1, 1)]);
        let b = TruncatedSeries::one(3);
        assert!(matches!(a.checked_add(&b), Err(Error::IncompatibleExponents(..))));
    }

    #[test]
    fn compose_monomial_substitution() {
        let f = ints(&[1, 1, 1], 3);
        let g = ints(&[0, 2], 20);
        assert_eq!(series_compose(&f, &g).unwrap(), ints(&[1, 2, 4], 3));
    }

    #[test]
    fn compose_with_identity() {
        let f = ints(&[2, -3, 0, 7, 1], 5);
        let out = series_compose(&f, &TruncatedSeries::var(5)).unwrap();
        assert_eq!(out, f);
        assert_eq!(out.order(), 5);
    }

    #[test]
    fn compose_rejects_constant_term() {
        let f = ints(&[1, 1], 4);
        let g = ints(&[1, 1], 4);
        assert!(matches!(series_compose(&f, &g), Err(Error::CompositionDomain(_))));
    }

    #[test]
    fn compose_laurent_outer() {
        // f = z^-2 (1 - z), g = z + z^2  ->  (z+z²)^-2 (1 - z - z²)
        let f = TruncatedSeries::new(rat(-2, 1), vec![rat(1, 1), rat(-1, 1), rat(0, 1), rat(0, 1)]);
        let g = ints(&[0, 1, 1], 6);
        let out = series_compose(&f, &g).unwrap();
        let gg = &g * &g;
        let expect = ints(&[1, -1, -1], 6).checked_div(&gg).unwrap();
        assert_eq!(out.exponent(), &rat(-2, 1));
        assert_eq!(out, expect.truncate(4));
    }

    #[test]
    fn reverse_catalan() {
        // f = z + z² reverses to Σ (-1)^(n-1) C_(n-1) q^n
        let f = ints(&[0, 1, 1], 8);
        let g = series_reverse(&f).unwrap();
        assert_eq!(g, ints(&[0, 1, -1, 2, -5, 14, -42, 132], 8));
    }

    #[test]
    fn reverse_identity_and_failure() {
        assert_eq!(series_reverse(&TruncatedSeries::var(6)).unwrap(), TruncatedSeries::var(6));
        assert_eq!(series_reverse(&ints(&[0, 0, 1], 6)).unwrap_err(), Error::NotReversible);
    }

    #[test]
    fn elementary_functions() {
        let e = series_elementary(&TruncatedSeries::zero(5), &Elementary::Exp).unwrap();
        assert_eq!(e, TruncatedSeries::one(5));
        let f = ints(&[0, 1, 1], 10);
        let back = series_elementary(&series_elementary(&f, &Elementary::Exp).unwrap(), &Elementary::Log).unwrap();
        assert_eq!(back, f);
        // binomial oracle for (1 - z)^(1/2)
        let s = series_elementary(&ints(&[1, -1], 5), &Elementary::Pow(rat(1, 2))).unwrap();
        assert_eq!(s.coeffs(), &[rat(1, 1), rat(-1, 2), rat(-1, 8), rat(-1, 16), rat(-5, 128)]);
        assert!(matches!(
            series_elementary(&ints(&[1, 1], 4), &Elementary::Exp),
            Err(Error::ElementaryDomain(_))
        ));
        assert!(matches!(
            series_elementary(&ints(&[2, 1], 4), &Elementary::Log),
            Err(Error::ElementaryDomain(_))
        ));
    }

    #[test]
    fn hypergeometric_coefficients() {
        let f = hypergeom_series(&[rat(1, 3), rat(2, 3)], &[rat(1, 1)], 3).unwrap();
        assert_eq!(f.coeffs(), &[rat(1, 1), rat(2, 9), rat(10, 81)]);
        let g = hypergeom_series(&[rat(1, 4), rat(2, 4), rat(3, 4)], &[rat(1, 1), rat(1, 1)], 2).unwrap();
        assert_eq!(g.coeff(1), rat(3, 32));
        let h = hypergeom_series(&[rat(0, 1), rat(5, 7)], &[rat(3, 2)], 6).unwrap();
        assert_eq!(h, TruncatedSeries::one(6));
        assert!(matches!(
            hypergeom_series(&[rat(1, 2)], &[rat(-2, 1)], 4),
            Err(Error::PoleInParameters(_))
        ));
    }

    #[test]
    fn theta_of_log_is_one() {
        let log = LogSolution::new(vec![TruncatedSeries::zero(5), TruncatedSeries::one(5)]).unwrap();
        let t = log.theta();
        assert_eq!(t.log_degree(), 0);
        assert_eq!(t.parts()[0], TruncatedSeries::one(5));
    }

    #[test]
    fn log_solution_trims_zero_parts() {
        let s = LogSolution::new(vec![TruncatedSeries::one(4), TruncatedSeries::zero(4)]).unwrap();
        assert_eq!(s.log_degree(), 0);
    }
}
