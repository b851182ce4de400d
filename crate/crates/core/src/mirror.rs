//! Mirror maps, Yukawa couplings, prepotentials and the special-geometry
//! Kähler potential.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use astro_float::BigFloat;
use num_traits::{One, Signed, Zero};

use crate::diffop::ThetaOperator;
use crate::error::{Error, Result};
use crate::frobenius::{frobenius_basis, normalized_period_series, Point};
use crate::numeric::{ComplexPoint, Ctx};
use crate::poly::Poly;
use crate::series::{series_compose, series_elementary, series_reverse, Elementary, TruncatedSeries};
use crate::Rational;

/// `q(z) = z·exp(S(z))/κ` and its compositional inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMap {
    pub q_of_z: TruncatedSeries,
    pub z_of_q: TruncatedSeries,
    pub order: usize,
    /// Gauge constant κ; 1 is the natural normalization.
    pub gauge: Rational,
}

/// Mirror map in the natural gauge (leading coefficient 1).
pub fn mirror_map(op: &ThetaOperator, order: usize) -> Result<MirrorMap> {
    mirror_map_gauged(op, order, &Rational::one())
}

/// Mirror map with `q` divided by `gauge`, i.e. the log solution shifted by
/// `−log(gauge)·π₀`.
pub fn mirror_map_gauged(op: &ThetaOperator, order: usize, gauge: &Rational) -> Result<MirrorMap> {
    if !gauge.is_positive() {
        return Err(Error::InvalidInput(format!("gauge shift must be positive, got {gauge}")));
    }
    if order < 2 {
        return Err(Error::InvalidInput("mirror map needs order >= 2".into()));
    }
    let basis = frobenius_basis(op, &Point::zero(), order)?;
    let s = normalized_period_series(&basis)?;
    let e = series_elementary(&s, &Elementary::Exp)?;
    let q_of_z = e
        .shift_exponent(&Rational::one())
        .with_exponent(&Rational::zero())?
        .truncate(order)
        .scale(&gauge.recip());
    let z_of_q = series_reverse(&q_of_z)?;
    Ok(MirrorMap { q_of_z, z_of_q, order, gauge: gauge.clone() })
}

/// `z^exponent · num(z)/den(z)` with `num(0) = den(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicYukawa {
    pub exponent: Rational,
    pub num: Poly,
    pub den: Poly,
}

impl AlgebraicYukawa {
    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        let n = TruncatedSeries::from_poly(&self.num, order);
        let d = TruncatedSeries::from_poly(&self.den, order);
        Ok(n.checked_div(&d)?.shift_exponent(&self.exponent))
    }
}

impl fmt::Display for AlgebraicYukawa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.exponent.is_zero() {
            parts.push(format!("z^({})", self.exponent));
        }
        if self.num != Poly::one() {
            parts.push(format!("({})", self.num));
        }
        if parts.is_empty() {
            parts.push("1".to_string());
        }
        write!(f, "{}", parts.join("*"))?;
        if self.den != Poly::one() {
            write!(f, "/({})", self.den)?;
        }
        Ok(())
    }
}

fn check_order(op: &ThetaOperator) -> Result<usize> {
    let n = op.order();
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedOrder(n));
    }
    Ok(n)
}

/// Interpolating polynomial through `(xᵢ, yᵢ)` (Newton divided differences).
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let n = xs.len();
    let mut coef: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = Poly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &Poly::new(vec![-xs[i].clone(), Rational::one()])) + &Poly::constant(coef[i].clone());
    }
    acc
}

/// Solves `C'/C = −(2/n)·aₙ₋₁/aₙ` (∂-form coefficients) in closed form.
///
/// The right side must be a proper fraction with squarefree denominator whose
/// residues are rational (Rothstein–Trager); factors other than `z` must carry
/// integer exponents.
pub fn yukawa_algebraic(op: &ThetaOperator) -> Result<AlgebraicYukawa> {
    let n = check_order(op)?;
    let d = op.to_deriv();
    let ratio = d
        .coeff(n - 1)
        .div(&d.coeff(n))
        .scale(&Rational::new((-2).into(), (n as i64).into()));
    if ratio.is_zero() {
        return Ok(AlgebraicYukawa { exponent: Rational::zero(), num: Poly::one(), den: Poly::one() });
    }
    let num = ratio.num().clone();
    let den = ratio.den().clone();
    let deg_d = den.degree().unwrap_or(0);
    if num.degree().unwrap_or(0) >= deg_d {
        return Err(Error::NonClosedForm(format!("log-derivative {ratio} has a polynomial part")));
    }
    let dden = den.derivative();
    if Poly::gcd(&den, &dden).degree() != Some(0) {
        return Err(Error::NonClosedForm(format!("log-derivative {ratio} has higher-order poles")));
    }
    let xs: Vec<Rational> = (0..=deg_d).map(|k| Rational::from_integer((k as i64).into())).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|c| Poly::resultant(&den, &(&num - &dden.scale(c))))
        .collect();
    let res = interpolate(&xs, &ys);
    let residues = res.rational_roots();
    let total: usize = residues.iter().map(|(_, m)| m).sum();
    if total != deg_d {
        return Err(Error::NonClosedForm(format!("irrational residues in {ratio}")));
    }
    let mut out = AlgebraicYukawa { exponent: Rational::zero(), num: Poly::one(), den: Poly::one() };
    for (c, _) in residues {
        let mut f = Poly::gcd(&den, &(&num - &dden.scale(&c)));
        if f.coeff(0).is_zero() {
            out.exponent = c.clone();
            f = f.div_rem(&Poly::var()).0;
        }
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        if !c.is_integer() {
            return Err(Error::NonClosedForm(format!("factor {f} with exponent {c}")));
        }
        let f = f.scale(&f.coeff(0).recip());
        let k = c.to_integer();
        let e: usize = k.abs().try_into().map_err(|_| Error::NonClosedForm("exponent too large".into()))?;
        if k.is_positive() {
            out.num = &out.num * &f.pow(e);
        } else {
            out.den = &out.den * &f.pow(e);
        }
    }
    Ok(out)
}

/// Yukawa coupling in algebraic and flat coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct YukawaCoupling {
    pub algebraic: AlgebraicYukawa,
    pub flat: TruncatedSeries,
    /// Constant term of the flat series.
    pub calibration: Rational,
}

pub fn yukawa_flat(op: &ThetaOperator, order: usize) -> Result<YukawaCoupling> {
    yukawa_flat_gauged(op, order, &Rational::one())
}

/// `C_flat(q) = (θ_q z)^(n−1)·C_alg(z)/π₀(z)²` at `z = z(q)`.
pub fn yukawa_flat_gauged(op: &ThetaOperator, order: usize, gauge: &Rational) -> Result<YukawaCoupling> {
    let n = check_order(op)?;
    let algebraic = yukawa_algebraic(op)?;
    let work = order + 2;
    let mm = mirror_map_gauged(op, work, gauge)?;
    let basis = frobenius_basis(op, &Point::zero(), work)?;
    let pi0 = basis.solutions[0].parts()[0].clone();
    let z = &mm.z_of_q;
    let pi0_q = series_compose(&pi0, z)?;
    let c_q = series_compose(&algebraic.series(work)?, z)?;
    let theta_z = z.theta();
    let mut acc = c_q;
    for _ in 1..n {
        acc = &acc * &theta_z;
    }
    let flat = acc.checked_div(&(&pi0_q * &pi0_q))?;
    let flat = flat.with_exponent(&Rational::zero()).map_err(|_| {
        Error::NonClosedForm("flat coupling has a pole at q = 0".into())
    })?;
    let flat = flat.truncate(order);
    let calibration = flat.coeff(0);
    Ok(YukawaCoupling { algebraic, flat, calibration })
}

/// Labels for the quadratic and constant terms of the prepotential; they are
/// invisible to three derivatives and never evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPart {
    pub c2: String,
    pub c1: String,
    pub constant: String,
}

impl Default for QuadraticPart {
    fn default() -> Self {
        QuadraticPart { c2: "c2".into(), c1: "c1".into(), constant: "chi*zeta(3)/2".into() }
    }
}

/// `F(t) = κ t³/6 + (quadratic part) + Σ_d f_d q^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Prepotential {
    pub kappa: Rational,
    pub quadratic: QuadraticPart,
    /// `f_d` at index `d`; index 0 is always zero.
    pub instanton: Vec<Rational>,
}

impl Prepotential {
    pub fn order(&self) -> usize {
        self.instanton.len()
    }

    pub fn instanton_series(&self) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.instanton.clone())
    }

    /// `(q·d/dq)³ F = κ + Σ d³ f_d q^d`.
    pub fn yukawa(&self) -> TruncatedSeries {
        let mut c = self.instanton_series().theta().theta().theta();
        if c.order() > 0 {
            c = &c + &TruncatedSeries::constant(self.kappa.clone(), c.order());
        }
        c
    }

    fn has_instantons(&self) -> bool {
        self.instanton.iter().any(|f| !f.is_zero())
    }
}

/// Integrates `C = κ + Σ c_d q^d` three times in `q·d/dq`: `f_d = c_d/d³`.
pub fn prepotential_from_yukawa(flat: &TruncatedSeries, kappa: &Rational) -> Result<Prepotential> {
    let c = flat.with_exponent(&Rational::zero()).map_err(|_| {
        Error::InvalidInput(format!("Yukawa series has a pole: exponent {}", flat.exponent()))
    })?;
    let c0 = c.coeff(0);
    if &c0 != kappa {
        return Err(Error::NonzeroConstantMismatch { kappa: kappa.to_string(), found: c0.to_string() });
    }
    let instanton = (0..c.order())
        .map(|d| {
            if d == 0 {
                Rational::zero()
            } else {
                let d3 = Rational::from_integer(((d * d * d) as i64).into());
                c.coeff(d) / d3
            }
        })
        .collect();
    Ok(Prepotential { kappa: kappa.clone(), quadratic: QuadraticPart::default(), instanton })
}

/// Instanton sums needed for `e^{−K}`: `F`, `F'`, `F''` at `t` (with
/// `q = e^{2πit}`) and `G`, `G'`, `G''` at `s` (with `q̃ = e^{−2πis}`).
struct InstantonValues {
    f: [ComplexPoint; 3],
    g: [ComplexPoint; 3],
}

fn instanton_values(
    pre: &Prepotential,
    t: &ComplexPoint,
    s: &ComplexPoint,
    ctx: &mut Ctx,
) -> Result<InstantonValues> {
    let tpi = ctx.two_pi_i();
    let q = ctx.exp(&ctx.mul(&tpi, t));
    let qt = ctx.exp(&ctx.neg(&ctx.mul(&tpi, s)));
    let one = BigFloat::from_i64(1, ctx.bits());
    for x in [&q, &qt] {
        if ctx.abs(x).cmp(&one).is_none_or(|c| c >= 0) {
            return Err(Error::DivergentTail);
        }
    }
    let mut f = [ctx.zero(), ctx.zero(), ctx.zero()];
    let mut g = [ctx.zero(), ctx.zero(), ctx.zero()];
    let mut qd = ctx.one();
    let mut qtd = ctx.one();
    let ntpi = ctx.neg(&tpi);
    for (d, fd) in pre.instanton.iter().enumerate() {
        if d > 0 {
            qd = ctx.mul(&qd, &q);
            qtd = ctx.mul(&qtd, &qt);
        }
        if fd.is_zero() {
            continue;
        }
        let c = ctx.rational_point(fd);
        let dd = ctx.int(d as i64);
        // d/dt q^d = 2πi d q^d, d/ds q̃^d = −2πi d q̃^d
        let kf = ctx.mul(&tpi, &dd);
        let kg = ctx.mul(&ntpi, &dd);
        let a = ctx.mul(&c, &qd);
        let b = ctx.mul(&c, &qtd);
        let a1 = ctx.mul(&a, &kf);
        let b1 = ctx.mul(&b, &kg);
        let a2 = ctx.mul(&a1, &kf);
        let b2 = ctx.mul(&b1, &kg);
        f = [ctx.add(&f[0], &a), ctx.add(&f[1], &a1), ctx.add(&f[2], &a2)];
        g = [ctx.add(&g[0], &b), ctx.add(&g[1], &b1), ctx.add(&g[2], &b2)];
    }
    Ok(InstantonValues { f, g })
}

fn check_potential(pre: &Prepotential) -> Result<()> {
    if pre.kappa.is_zero() && !pre.has_instantons() {
        return Err(Error::DegeneratePotential);
    }
    Ok(())
}

/// `e^{−K}(t, s) = (κ/6)(t−s)³ + (t−s)(F'(t) + G'(s)) − 2(F(t) − G(s))`, with
/// the quadratic part gauged to zero; `s` plays the role of `t̄`.
pub fn special_geometry_potential(
    pre: &Prepotential,
    t: &ComplexPoint,
    s: &ComplexPoint,
    ctx: &mut Ctx,
) -> Result<ComplexPoint> {
    check_potential(pre)?;
    let v = instanton_values(pre, t, s, ctx)?;
    let u = ctx.sub(t, s);
    let k6 = ctx.rational_point(&(&pre.kappa / Rational::from_integer(6.into())));
    let cubic = ctx.mul(&k6, &ctx.powi(&u, 3));
    let mid = ctx.mul(&u, &ctx.add(&v.f[1], &v.g[1]));
    let tail = ctx.mul(&ctx.int(2), &ctx.sub(&v.f[0], &v.g[0]));
    Ok(ctx.sub(&ctx.add(&cubic, &mid), &tail))
}

/// `g = ∂_t∂_s(−log Φ) = (Φ_t Φ_s − Φ Φ_ts)/Φ²` for `Φ = e^{−K}`.
pub fn special_geometry_metric(
    pre: &Prepotential,
    t: &ComplexPoint,
    s: &ComplexPoint,
    ctx: &mut Ctx,
) -> Result<ComplexPoint> {
    check_potential(pre)?;
    let phi = special_geometry_potential(pre, t, s, ctx)?;
    let v = instanton_values(pre, t, s, ctx)?;
    let u = ctx.sub(t, s);
    let u2 = ctx.mul(&u, &u);
    let kh = ctx.rational_point(&(&pre.kappa / Rational::from_integer(2.into())));
    let k = ctx.rational_point(&pre.kappa);
    let k_u2 = ctx.mul(&kh, &u2);
    // Φ_t = (κ/2)u² + uF'' − F' + G'
    let phi_t = ctx.add(&ctx.sub(&ctx.add(&k_u2, &ctx.mul(&u, &v.f[2])), &v.f[1]), &v.g[1]);
    // Φ_s = −(κ/2)u² + uG'' + G' − F'
    let phi_s = ctx.sub(&ctx.add(&ctx.sub(&ctx.mul(&u, &v.g[2]), &k_u2), &v.g[1]), &v.f[1]);
    // Φ_ts = −κu − F'' + G''
    let phi_ts = ctx.add(&ctx.sub(&ctx.neg(&ctx.mul(&k, &u)), &v.f[2]), &v.g[2]);
    let num = ctx.sub(&ctx.mul(&phi_t, &phi_s), &ctx.mul(&phi, &phi_ts));
    ctx.div(&num, &ctx.mul(&phi, &phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::diffop::{symmetric_cube, DerivOperator};
    use crate::poly::RatFunc;
    use crate::rat;
    use crate::series::hypergeom_series;

    #[test]
    fn pf_mirror_map_leading_terms() {
        let m = mirror_map(&catalog::l_pf(), 8).unwrap();
        assert_eq!(m.z_of_q.coeff(1), rat(1, 1));
        assert_eq!(m.z_of_q.coeff(2), rat(-5, 9));
        let id = series_compose(&m.q_of_z, &m.z_of_q).unwrap();
        assert_eq!(id, TruncatedSeries::var(8));
    }

    #[test]
    fn pf_mirror_map_integral_in_gauge_27() {
        let m = mirror_map_gauged(&catalog::l_pf(), 21, &rat(27, 1)).unwrap();
        assert_eq!(m.z_of_q.coeff(1), rat(27, 1));
        assert_eq!(m.z_of_q.coeff(2), rat(-405, 1));
        assert_eq!(m.z_of_q.coeff(3), rat(4617, 1));
        assert!(m.z_of_q.coeffs().iter().all(|c| c.is_integer()));
    }

    #[test]
    fn theta_squared_trivial_map() {
        let m = mirror_map(&catalog::theta_squared(), 10).unwrap();
        assert_eq!(m.q_of_z, TruncatedSeries::var(10));
        assert_eq!(m.z_of_q, TruncatedSeries::var(10));
        let y = yukawa_flat(&catalog::theta_squared(), 10).unwrap();
        assert_eq!(y.flat, TruncatedSeries::one(10));
        let a = yukawa_algebraic(&catalog::theta_squared()).unwrap();
        assert_eq!(a.exponent, rat(-1, 1));
    }

    #[test]
    fn algebraic_couplings() {
        let a = yukawa_algebraic(&catalog::l_pf()).unwrap();
        assert_eq!(a, AlgebraicYukawa { exponent: rat(-1, 1), num: Poly::one(), den: Poly::from_ints(&[1, -1]) });
        let k = yukawa_algebraic(&catalog::l_k3()).unwrap();
        assert_eq!(k, AlgebraicYukawa { exponent: rat(-2, 1), num: Poly::one(), den: Poly::from_ints(&[1, -1]) });
        let q = yukawa_algebraic(&catalog::l_quintic()).unwrap();
        assert_eq!(q, AlgebraicYukawa { exponent: rat(-3, 1), num: Poly::one(), den: Poly::from_ints(&[1, -1]) });
        // (1−z)^(−1/2) factor: not of the form z^ρ·(rational function)
        assert!(matches!(yukawa_algebraic(&catalog::l_triangular()), Err(Error::NonClosedForm(_))));
    }

    #[test]
    fn algebraic_coupling_failures() {
        let exp_part = ThetaOperator::from_int_coeffs("z", &[vec![], vec![-1, 0, 1], vec![1]]).unwrap();
        assert!(matches!(yukawa_algebraic(&exp_part), Err(Error::NonClosedForm(_))));
        let cube_root = ThetaOperator::from_deriv(
            "z",
            &DerivOperator::from_polys(vec![Poly::zero(), Poly::from_ints(&[-1]), Poly::from_ints(&[-3, 3])]),
        )
        .unwrap();
        assert!(matches!(yukawa_algebraic(&cube_root), Err(Error::NonClosedForm(_))));
        let first = ThetaOperator::theta("z");
        assert_eq!(yukawa_algebraic(&first).unwrap_err(), Error::UnsupportedOrder(1));
    }

    #[test]
    fn flat_couplings_are_constant() {
        let y = yukawa_flat(&catalog::l_pf(), 20).unwrap();
        assert_eq!(y.flat, TruncatedSeries::one(20));
        assert_eq!(y.flat.order(), 20);
        let y = yukawa_flat(&catalog::l_k3(), 20).unwrap();
        assert_eq!(y.flat, TruncatedSeries::one(20));
        let y = yukawa_flat(&catalog::l_e8(), 12).unwrap();
        assert_eq!(y.flat, TruncatedSeries::one(12));
    }

    #[test]
    fn symmetric_cubes_have_constant_flat_coupling() {
        for l2 in [catalog::l_pf(), catalog::l_elliptic(), catalog::l_e8()] {
            let cube = symmetric_cube(&l2.to_deriv()).unwrap();
            let l4 = ThetaOperator::from_deriv("z", &cube).unwrap();
            let y = yukawa_flat(&l4, 20).unwrap();
            assert_eq!(y.flat, TruncatedSeries::constant(y.calibration.clone(), 20));
        }
    }

    #[test]
    fn quintic_flat_coupling_is_not_constant() {
        let y = yukawa_flat(&catalog::l_quintic(), 4).unwrap();
        // 1 + 2875·5/5⁵… in the natural gauge: nonzero q coefficient
        assert_eq!(y.flat.coeff(0), rat(1, 1));
        assert!(!y.flat.coeff(1).is_zero());
    }

    #[test]
    fn quintic_instanton_numbers_in_standard_gauge() {
        // gauge 5⁵ and κ = 5 give 5 + 2875·q + 609250·2³·q² + …
        let y = yukawa_flat_gauged(&catalog::l_quintic(), 4, &rat(3125, 1)).unwrap();
        let c = y.flat.scale(&rat(5, 1));
        let f = prepotential_from_yukawa(&c, &rat(5, 1)).unwrap();
        assert_eq!(f.instanton[1], rat(2875, 1));
        assert_eq!(f.instanton[2], rat(609250, 1) + rat(2875, 8));
    }

    #[test]
    fn prepotential_examples() {
        let f = prepotential_from_yukawa(&TruncatedSeries::one(10), &rat(1, 1)).unwrap();
        assert!(f.instanton.iter().all(|c| c.is_zero()));
        let f = prepotential_from_yukawa(&TruncatedSeries::from_ints(&[2, 1], 6), &rat(2, 1)).unwrap();
        assert_eq!(f.instanton_series(), TruncatedSeries::from_ints(&[0, 1], 6));
        let f = prepotential_from_yukawa(&TruncatedSeries::from_ints(&[3, 0, 8], 6), &rat(3, 1)).unwrap();
        assert_eq!(f.instanton_series(), TruncatedSeries::from_ints(&[0, 0, 1], 6));
        assert_eq!(f.yukawa(), TruncatedSeries::from_ints(&[3, 0, 8], 6));
        assert!(matches!(
            prepotential_from_yukawa(&TruncatedSeries::from_ints(&[3], 6), &rat(1, 1)),
            Err(Error::NonzeroConstantMismatch { .. })
        ));
    }

    #[test]
    fn e8_identity_with_hypergeometric_square() {
        // θ_q α = α(1−α)·F² with F = ₂F₁(1/6,5/6;1;α)
        let n = 15;
        let m = mirror_map(&catalog::l_e8(), n).unwrap();
        let alpha = &m.z_of_q;
        let f = hypergeom_series(&[rat(1, 6), rat(5, 6)], &[rat(1, 1)], n).unwrap();
        let fq = series_compose(&f, alpha).unwrap();
        let one_minus = &TruncatedSeries::one(n) - alpha;
        let rhs = &(&(alpha * &one_minus) * &fq) * &fq;
        assert_eq!(alpha.theta(), rhs);
    }

    #[test]
    fn poincare_metric_without_instantons() {
        let mut ctx = Ctx::with_digits(30).unwrap();
        let f = Prepotential { kappa: rat(1, 1), quadratic: QuadraticPart::default(), instanton: vec![Rational::zero(); 5] };
        let t = ctx.from_f64(0.25, 1.5);
        let s = ctx.conj(&t);
        let g = special_geometry_metric(&f, &t, &s, &mut ctx).unwrap();
        let expect = ctx.rational_point(&rat(1, 3));
        assert!(ctx.distance_f64(&g, &expect) < 1e-28);
        let phi = special_geometry_potential(&f, &t, &s, &mut ctx).unwrap();
        // (1/6)(2i·1.5)³ = −4.5i
        assert!(ctx.distance_f64(&phi, &ctx.from_f64(0.0, -4.5)) < 1e-28);
    }

    #[test]
    fn potential_errors() {
        let mut ctx = Ctx::with_digits(20).unwrap();
        let zero = Prepotential { kappa: Rational::zero(), quadratic: QuadraticPart::default(), instanton: vec![Rational::zero(); 3] };
        let t = ctx.from_f64(0.0, 1.0);
        let s = ctx.conj(&t);
        assert_eq!(special_geometry_potential(&zero, &t, &s, &mut ctx).unwrap_err(), Error::DegeneratePotential);
        let one = Prepotential { kappa: rat(1, 1), quadratic: QuadraticPart::default(), instanton: vec![Rational::zero(), rat(1, 1)] };
        let below = ctx.from_f64(0.0, -1.0);
        let sb = ctx.conj(&below);
        assert_eq!(special_geometry_potential(&one, &below, &sb, &mut ctx).unwrap_err(), Error::DivergentTail);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = Poly::from_ints(&[3, -1, 0, 2]);
        let xs: Vec<Rational> = (0..4).map(|k| rat(k, 1)).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
        let _ = RatFunc::one();
    }
}
