//! Local solutions at a regular singular point by the Frobenius method.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::diffop::{pullback, Substitution, ThetaOperator};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::{LogSolution, TruncatedSeries};
use crate::Rational;

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(Rational),
    Infinity,
}

impl Point {
    pub fn zero() -> Self {
        Point::Finite(Rational::zero())
    }

    /// Substitution taking the local coordinate `t` (vanishing at the point)
    /// to the global one; `None` at the origin.
    pub fn local_substitution(&self) -> Option<Substitution> {
        match self {
            Point::Finite(a) if a.is_zero() => None,
            Point::Finite(a) => Some(Substitution::Affine(Rational::one(), a.clone())),
            Point::Infinity => Some(Substitution::Reciprocal),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(a) => write!(f, "{a}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Point::Infinity);
        }
        Rational::from_str(s)
            .map(Point::Finite)
            .map_err(|_| Error::InvalidInput(format!("not a point: {s}")))
    }
}

/// Indicial exponents at a point, with multiplicities, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicialData {
    pub point: Point,
    pub roots: Vec<(Rational, usize)>,
}

impl IndicialData {
    /// Roots repeated according to multiplicity.
    pub fn multiset(&self) -> Vec<Rational> {
        self.roots
            .iter()
            .flat_map(|(r, m)| core::iter::repeat_n(r.clone(), *m))
            .collect()
    }
}

/// Local solutions at a point, ordered by log-degree and then exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusBasis {
    pub point: Point,
    pub solutions: Vec<LogSolution>,
    pub order: usize,
}

/// The operator in the local coordinate at `point`.
pub fn local_operator(op: &ThetaOperator, point: &Point) -> Result<ThetaOperator> {
    match point.local_substitution() {
        None => Ok(op.clone()),
        Some(s) => pullback(op, &s),
    }
}

/// Lowest nonvanishing θ-polynomial `P_v` and the tail `P_(v+1), P_(v+2), …`
/// of the z-expansion, after checking the point is Fuchsian.
fn fuchsian_parts(op: &ThetaOperator, point: &Point) -> Result<(Poly, Vec<Poly>)> {
    let parts = op.z_expansion();
    let v = parts
        .iter()
        .position(|p| !p.is_zero())
        .expect("nonzero operator");
    let p0 = parts[v].clone();
    if p0.degree() != Some(op.order()) {
        return Err(Error::IrregularSingular(point.to_string()));
    }
    Ok((p0, parts[v + 1..].to_vec()))
}

pub fn indicial_roots(op: &ThetaOperator, point: &Point) -> Result<IndicialData> {
    let local = local_operator(op, point)?;
    let (p0, _) = fuchsian_parts(&local, point)?;
    let roots = p0.rational_roots();
    let found: usize = roots.iter().map(|(_, m)| m).sum();
    if found != local.order() {
        return Err(Error::IrrationalRoots(format!("{p0}").replace('z', "θ")));
    }
    Ok(IndicialData { point: point.clone(), roots })
}

/// Truncated power series in ε, `m` coefficients.
type EpsSeries = Vec<Rational>;

fn eps_mul(a: &EpsSeries, b: &EpsSeries) -> EpsSeries {
    let m = a.len();
    let mut out = vec![Rational::zero(); m];
    for i in 0..m {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..m - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

fn eps_inv(a: &EpsSeries) -> EpsSeries {
    let m = a.len();
    let mut out = vec![Rational::zero(); m];
    let inv = a[0].recip();
    out[0] = inv.clone();
    for k in 1..m {
        let mut acc = Rational::zero();
        for j in 1..=k {
            acc += &a[j] * &out[k - j];
        }
        out[k] = -acc * &inv;
    }
    out
}

/// `P(x + ε)` as a series in ε via Taylor coefficients.
fn eps_eval(p: &Poly, x: &Rational, m: usize) -> EpsSeries {
    let mut out = Vec::with_capacity(m);
    let mut d = p.clone();
    let mut fact = Rational::one();
    for k in 0..m {
        if k > 0 {
            d = d.derivative();
            fact *= Rational::from_integer(k.into());
        }
        out.push(d.eval(x) / &fact);
    }
    out
}

/// Frobenius solutions for one root `ρ₀` of multiplicity `m`:
/// solution `k` is `∂_ε^k [z^(ρ₀+ε) Σ aₙ(ε) zⁿ]` at ε = 0, with `a₀ = 1`.
fn tower(p0: &Poly, tail: &[Poly], rho: &Rational, m: usize, n_terms: usize) -> Result<Vec<LogSolution>> {
    let mut a: Vec<EpsSeries> = Vec::with_capacity(n_terms);
    let mut first = vec![Rational::zero(); m];
    first[0] = Rational::one();
    a.push(first);
    for n in 1..n_terms {
        let mut acc = vec![Rational::zero(); m];
        for (j, pj) in tail.iter().enumerate() {
            let j = j + 1;
            if j > n {
                break;
            }
            if pj.is_zero() {
                continue;
            }
            let x = rho + Rational::from_integer((n - j).into());
            let term = eps_mul(&eps_eval(pj, &x, m), &a[n - j]);
            for (s, t) in acc.iter_mut().zip(term) {
                *s += t;
            }
        }
        let x = rho + Rational::from_integer(n.into());
        let den = eps_eval(p0, &x, m);
        if den[0].is_zero() {
            return Err(Error::ResonantIntegerGap(format!("{} and {}", rho, x)));
        }
        let mut an = eps_mul(&acc, &eps_inv(&den));
        for c in an.iter_mut() {
            *c = -c.clone();
        }
        a.push(an);
    }
    // A_i = Σ [ε^i]aₙ zⁿ; solution k has part_i = k!/i! · A_(k−i)
    let series: Vec<TruncatedSeries> = (0..m)
        .map(|i| TruncatedSeries::new(rho.clone(), a.iter().map(|an| an[i].clone()).collect()))
        .collect();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let parts = (0..=k)
            .map(|i| {
                let mut c = Rational::one();
                for f in i + 1..=k {
                    c *= Rational::from_integer(f.into());
                }
                series[k - i].scale(&c)
            })
            .collect();
        out.push(LogSolution::new(parts)?);
    }
    Ok(out)
}

/// Full log-series basis at `point`, `n_terms` coefficients per series.
///
/// Solution `k` of a root of multiplicity `m` has `(log t)ᵏ` part equal to the
/// holomorphic solution of that root (monic-log normalization).
pub fn frobenius_basis(op: &ThetaOperator, point: &Point, n_terms: usize) -> Result<FrobeniusBasis> {
    let local = local_operator(op, point)?;
    let data = indicial_roots(op, point)?;
    let (p0, tail) = fuchsian_parts(&local, point)?;
    for (i, (a, _)) in data.roots.iter().enumerate() {
        for (b, _) in &data.roots[i + 1..] {
            if (b - a).is_integer() {
                return Err(Error::ResonantIntegerGap(format!("{a} and {b}")));
            }
        }
    }
    let mut solutions = Vec::new();
    for (rho, m) in &data.roots {
        solutions.extend(tower(&p0, &tail, rho, *m, n_terms)?);
    }
    solutions.sort_by(|x, y| {
        x.log_degree()
            .cmp(&y.log_degree())
            .then_with(|| x.exponent().cmp(y.exponent()))
    });
    Ok(FrobeniusBasis { point: point.clone(), solutions, order: n_terms })
}

impl FrobeniusBasis {
    /// The unique holomorphic solution with constant term 1, if there is one.
    fn holomorphic(&self) -> Option<&LogSolution> {
        let s = self.solutions.first()?;
        (s.log_degree() == 0
            && s.exponent().is_zero()
            && s.parts()[0].coeff(0).is_one())
        .then_some(s)
    }
}

/// `S(z)` with `π₁/π₀ = log z + S(z)`, `S(0) = 0`, where `π₀` is the
/// holomorphic solution and `π₁ = log z·π₀ + (…)` the single-log one.
pub fn normalized_period_series(basis: &FrobeniusBasis) -> Result<TruncatedSeries> {
    let pi0 = basis.holomorphic().ok_or(Error::NoLogStructure)?;
    let pi1 = basis
        .solutions
        .iter()
        .find(|s| s.log_degree() == 1)
        .ok_or(Error::NoLogStructure)?;
    if pi1.exponent() != pi0.exponent() || pi1.parts()[1] != pi0.parts()[0] {
        return Err(Error::NoLogStructure);
    }
    let s = pi1.parts()[0].checked_div(&pi0.parts()[0])?;
    Ok(s.with_exponent(&Rational::zero())?.truncate(basis.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat;
    use crate::series::hypergeom_series;
    use num_bigint::BigInt;

    fn point0() -> Point {
        Point::zero()
    }

    #[test]
    fn indicial_examples() {
        let r = indicial_roots(&catalog::l_pf(), &point0()).unwrap();
        assert_eq!(r.roots, vec![(rat(0, 1), 2)]);
        let r = indicial_roots(&catalog::l_k3(), &point0()).unwrap();
        assert_eq!(r.multiset(), vec![rat(0, 1); 3]);
        let r = indicial_roots(&catalog::l_pf(), &Point::Infinity).unwrap();
        assert_eq!(r.roots, vec![(rat(1, 3), 1), (rat(2, 3), 1)]);
        let r = indicial_roots(&catalog::l_pf(), &Point::Finite(rat(1, 1))).unwrap();
        assert_eq!(r.roots, vec![(rat(0, 1), 2)]);
    }

    #[test]
    fn indicial_errors() {
        let irregular = ThetaOperator::from_int_coeffs("z", &[vec![-1], vec![0, 1]]).unwrap();
        assert!(matches!(indicial_roots(&irregular, &point0()), Err(Error::IrregularSingular(_))));
        let irrational = ThetaOperator::from_int_coeffs("z", &[vec![-2, 1], vec![], vec![1]]).unwrap();
        assert!(matches!(indicial_roots(&irrational, &point0()), Err(Error::IrrationalRoots(_))));
        let gap = ThetaOperator::from_int_coeffs("z", &[vec![0, -1], vec![-1], vec![1]]).unwrap();
        assert!(matches!(frobenius_basis(&gap, &point0(), 8), Err(Error::ResonantIntegerGap(_))));
    }

    #[test]
    fn pf_basis() {
        let b = frobenius_basis(&catalog::l_pf(), &point0(), 20).unwrap();
        let f = hypergeom_series(&[rat(1, 3), rat(2, 3)], &[rat(1, 1)], 20).unwrap();
        assert_eq!(b.solutions[0].parts()[0], f);
        assert_eq!(b.solutions[1].parts()[1], f);
        // ρ-derivative of (ρ+1/3)(ρ+2/3)/(ρ+1)² at 0
        assert_eq!(b.solutions[1].parts()[0].coeff(1), rat(5, 9));
        assert_eq!(b.solutions[1].parts()[0].coeff(0), rat(0, 1));
    }

    fn factorial(n: usize) -> BigInt {
        (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
    }

    fn harmonic(n: usize) -> Rational {
        (1..=n).fold(Rational::zero(), |a, k| a + rat(1, k as i64))
    }

    #[test]
    fn k3_basis_harmonic_numbers() {
        let n_terms = 15;
        let b = frobenius_basis(&catalog::l_k3(), &point0(), n_terms).unwrap();
        assert_eq!(b.solutions.len(), 3);
        for (k, s) in b.solutions.iter().enumerate() {
            assert_eq!(s.log_degree(), k);
        }
        let pi1 = &b.solutions[1];
        for n in 0..n_terms {
            let base = Rational::new(
                factorial(4 * n),
                factorial(n).pow(4) * BigInt::from(256).pow(n as u32),
            );
            assert_eq!(b.solutions[0].parts()[0].coeff(n), base);
            let expect = &base * rat(4, 1) * (harmonic(4 * n) - harmonic(n));
            assert_eq!(pi1.parts()[0].coeff(n), expect, "n = {n}");
        }
        let f = hypergeom_series(&[rat(1, 4), rat(1, 2), rat(3, 4)], &[rat(1, 1), rat(1, 1)], n_terms).unwrap();
        assert_eq!(b.solutions[0].parts()[0], f);
    }

    #[test]
    fn theta_squared_basis() {
        let b = frobenius_basis(&catalog::theta_squared(), &point0(), 10).unwrap();
        assert_eq!(b.solutions[0].parts()[0], TruncatedSeries::one(10));
        assert_eq!(b.solutions[1].parts()[0], TruncatedSeries::zero(10));
        assert_eq!(b.solutions[1].parts()[1], TruncatedSeries::one(10));
        assert_eq!(normalized_period_series(&b).unwrap(), TruncatedSeries::zero(10));
    }

    #[test]
    fn every_solution_is_annihilated() {
        let cases = [
            (catalog::l_pf(), point0()),
            (catalog::l_pf(), Point::Finite(rat(1, 1))),
            (catalog::l_pf(), Point::Infinity),
            (catalog::l_k3(), point0()),
            (catalog::l_k3(), Point::Infinity),
            (catalog::l_quintic(), point0()),
            (catalog::l_e8(), Point::Infinity),
        ];
        for (op, pt) in cases {
            let local = local_operator(&op, &pt).unwrap();
            let b = frobenius_basis(&op, &pt, 16).unwrap();
            assert_eq!(b.solutions.len(), op.order());
            for s in &b.solutions {
                let r = local.apply(s);
                assert!(r.is_zero(), "{op} at {pt}");
                assert_eq!(r.order(), 16);
            }
        }
    }

    #[test]
    fn distinct_exponent_classes() {
        // ₂F₁(1/3, 1/4; 1/2; z): exponents 0 and 1/2
        let op = ThetaOperator::hypergeometric("z", &[rat(1, 3), rat(1, 4)], &[rat(1, 2)]).unwrap();
        let b = frobenius_basis(&op, &point0(), 12).unwrap();
        assert_eq!(b.solutions[0].exponent(), &rat(0, 1));
        assert_eq!(b.solutions[1].exponent(), &rat(1, 2));
        let second = hypergeom_series(&[rat(5, 6), rat(3, 4)], &[rat(3, 2)], 12).unwrap();
        assert_eq!(b.solutions[1].parts()[0], second.shift_exponent(&rat(1, 2)));
        assert_eq!(normalized_period_series(&b).unwrap_err(), Error::NoLogStructure);
    }

    #[test]
    fn point_parsing() {
        assert_eq!("inf".parse::<Point>().unwrap(), Point::Infinity);
        assert_eq!("-3/4".parse::<Point>().unwrap(), Point::Finite(rat(-3, 4)));
        assert!("x".parse::<Point>().is_err());
    }
}
