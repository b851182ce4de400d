//! Named identity checks behind `identity-suite`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use period_engine::continuation::{
    cayley_fixed_point, change_basis, frobenius_at, fricke_check, identity, log_normalized, mat_mul,
    max_distance, monodromy,
};
use period_engine::diffop::{is_symmetric_square, pullback, symmetric_square, Substitution};
use period_engine::frobenius::{frobenius_basis, Point};
use period_engine::mirror::{
    mirror_map, mirror_map_gauged, prepotential_from_yukawa, special_geometry_metric, yukawa_algebraic,
    yukawa_flat, AlgebraicYukawa, Prepotential, QuadraticPart,
};
use period_engine::numeric::Ctx;
use period_engine::series::{hypergeom_series, series_compose};
use period_engine::toric::{anticanonical_sections, lattice_points, polar_dual, LatticePolytope2D};
use period_engine::{catalog, rat, Poly, Rational, ThetaOperator, TruncatedSeries};

/// Working precision of the numeric identities.
const DIGITS: usize = 50;

pub struct Identity {
    pub id: &'static str,
    pub title: &'static str,
    check: fn() -> Result<String, String>,
}

pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Identity {
    pub fn run(&self) -> Outcome {
        let (passed, detail) = match (self.check)() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Outcome { id: self.id, title: self.title, passed, detail }
    }
}

pub fn all() -> Vec<Identity> {
    let item = |id, title, check| Identity { id, title, check };
    vec![
        item("1", "pullback(L_PF, 1-a) = L_PF", fricke_operator as fn() -> _),
        item("2", "Yukawa of L_PF: 1/(a(1-a)) and flat coupling 1", elliptic_yukawa),
        item("3", "1/(a(1-a)) from the L_PF mirror map = q^-1 + 744 + 196884 q", j_literal),
        item("3-hesse", "Hesse j-invariant of L_PF in gauge 27 = q^-1 + 744 + 196884 q", j_hesse),
        item("3-e8", "432/(a(1-a)) of the E8 family in gauge 432 = q^-1 + 744 + 196884 q", j_e8),
        item("4", "E8 identity q d/dq a = a(1-a) F^2", e8_identity),
        item("5", "Sym^2(L_triangular) = L_K3 with recovered witness", symmetric_square_check),
        item("6", "Clausen identity to order 30", clausen),
        item("7", "(theta_q z/z)^2 = c pi0^2 z^2 (1-z) for L_K3", k3_literal),
        item("7-theta", "(theta_q z)^2 = c pi0^2 z^2 (1-z) for L_K3", k3_theta),
        item("8", "K3 log solution coefficients 4(H_4n - H_n)", k3_digamma),
        item("9", "L_PF monodromy: unipotent at 0, product relation", pf_monodromy),
        item("10", "Fricke values tau(1-a) tau(a) = -1/3", fricke_values),
        item("11", "Cayley point tau* path stability", cayley),
        item("12", "P^2 polar pair, lattice points, cubic sections", toric),
        item("13", "prepotential round trip", prepotential_round_trip),
        item("14", "Poincare metric without instantons", poincare),
    ]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn fricke_operator() -> Result<String, String> {
    let l = catalog::l_pf();
    let out = pullback(&l, &Substitution::Affine(rat(-1, 1), rat(1, 1))).map_err(e)?;
    ensure(out == l, || format!("got {out}"))?;
    Ok("exact".into())
}

fn elliptic_yukawa() -> Result<String, String> {
    let a = yukawa_algebraic(&catalog::l_pf()).map_err(e)?;
    let expect = AlgebraicYukawa { exponent: rat(-1, 1), num: Poly::one(), den: Poly::from_ints(&[1, -1]) };
    ensure(a == expect, || format!("algebraic {a}"))?;
    let y = yukawa_flat(&catalog::l_pf(), 20).map_err(e)?;
    ensure(y.flat == TruncatedSeries::one(20), || format!("flat {}", y.flat))?;
    Ok(format!("{a}; flat 1 to order 20"))
}

fn head(s: &TruncatedSeries) -> Result<[Rational; 3], String> {
    let s = s.with_exponent(&rat(-1, 1)).map_err(e)?;
    Ok([s.coeff(0), s.coeff(1), s.coeff(2)])
}

fn check_j(h: [Rational; 3]) -> Result<String, String> {
    let text = format!("{} q^-1 + {} + {} q", h[0], h[1], h[2]);
    ensure(h == [rat(1, 1), rat(744, 1), rat(196884, 1)], || text.clone())?;
    Ok(text)
}

fn inverse_discriminant(a: &TruncatedSeries) -> Result<TruncatedSeries, String> {
    let one = TruncatedSeries::one(a.order());
    one.checked_div(&(a * &(&one - a))).map_err(e)
}

fn j_literal() -> Result<String, String> {
    let m = mirror_map(&catalog::l_pf(), 6).map_err(e)?;
    check_j(head(&inverse_discriminant(&m.z_of_q)?)?)
}

fn j_hesse() -> Result<String, String> {
    let m = mirror_map_gauged(&catalog::l_pf(), 6, &rat(27, 1)).map_err(e)?;
    let a = &m.z_of_q;
    let one = TruncatedSeries::one(a.order());
    let b = &one + &a.scale(&rat(8, 1));
    let c = &one - a;
    let num = (&(&b * &b) * &b).scale(&rat(27, 1));
    let den = &(&(a * &c) * &c) * &c;
    check_j(head(&num.checked_div(&den).map_err(e)?)?)
}

fn j_e8() -> Result<String, String> {
    let m = mirror_map_gauged(&catalog::l_e8(), 6, &rat(432, 1)).map_err(e)?;
    check_j(head(&inverse_discriminant(&m.z_of_q)?.scale(&rat(432, 1)))?)
}

fn e8_identity() -> Result<String, String> {
    let n = 20;
    let m = mirror_map(&catalog::l_e8(), n).map_err(e)?;
    let a = &m.z_of_q;
    let f = series_compose(&hypergeom_series(&[rat(1, 6), rat(5, 6)], &[rat(1, 1)], n).map_err(e)?, a).map_err(e)?;
    let rhs = &(&(a * &(&TruncatedSeries::one(n) - a)) * &f) * &f;
    ensure(a.theta() == rhs, || "series differ".into())?;
    Ok(format!("equal to order {n}"))
}

fn symmetric_square_check() -> Result<String, String> {
    let sq = symmetric_square(&catalog::l_triangular().to_deriv()).map_err(e)?;
    let sq = ThetaOperator::from_deriv("z", &sq).map_err(e)?;
    ensure(sq == catalog::l_k3(), || format!("Sym^2 = {sq}"))?;
    let w = is_symmetric_square(&catalog::l_k3().to_deriv()).map_err(e)?.ok_or("not detected")?;
    let w = ThetaOperator::from_deriv("z", &w).map_err(e)?;
    ensure(w == catalog::l_triangular(), || format!("witness {w}"))?;
    Ok(format!("witness {w}"))
}

fn clausen() -> Result<String, String> {
    let f = hypergeom_series(&[rat(1, 8), rat(3, 8)], &[rat(1, 1)], 30).map_err(e)?;
    let g = hypergeom_series(&[rat(1, 4), rat(1, 2), rat(3, 4)], &[rat(1, 1), rat(1, 1)], 30).map_err(e)?;
    ensure(&f * &f == g, || "series differ".into())?;
    Ok("equal to order 30".into())
}

fn k3_sides() -> Result<(TruncatedSeries, TruncatedSeries, TruncatedSeries), String> {
    let n = 20;
    let op = catalog::l_k3();
    let z = mirror_map(&op, n).map_err(e)?.z_of_q;
    let basis = frobenius_basis(&op, &Point::zero(), n).map_err(e)?;
    let pi0 = series_compose(&basis.solutions[0].parts()[0], &z).map_err(e)?;
    let rhs = &(&(&pi0 * &pi0) * &(&z * &z)) * &(&TruncatedSeries::one(n) - &z);
    let tz = z.theta();
    Ok((&tz * &tz, rhs, z))
}

fn k3_literal() -> Result<String, String> {
    let (tz2, rhs, z) = k3_sides()?;
    let lhs = tz2.checked_div(&(&z * &z)).map_err(e)?.with_exponent(&Rational::zero()).map_err(e)?;
    let r0 = rhs.with_exponent(&Rational::zero()).map_err(e)?.coeff(0);
    ensure(!r0.is_zero(), || {
        format!("left side starts with {} at q^0, right side vanishes there: no c", lhs.coeff(0))
    })?;
    let c = lhs.coeff(0) / &r0;
    ensure(lhs == rhs.scale(&c), || format!("c = {c} fails"))?;
    Ok(format!("c = {c}"))
}

fn k3_theta() -> Result<String, String> {
    let (lhs, rhs, _) = k3_sides()?;
    let v = rhs.valuation().ok_or("right side vanishes")?;
    let c = lhs.coeff(v) / rhs.coeff(v);
    ensure(lhs == rhs.scale(&c), || format!("c = {c} fails"))?;
    Ok(format!("c = {c}"))
}

fn k3_digamma() -> Result<String, String> {
    let b = frobenius_basis(&catalog::l_k3(), &Point::zero(), 11).map_err(e)?;
    let pi1 = b.solutions.iter().find(|s| s.log_degree() == 1).ok_or("no log solution")?;
    let fact = |n: usize| (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k));
    let harm = |n: usize| (1..=n).fold(Rational::zero(), |a, k| a + rat(1, k as i64));
    for n in 0..=10 {
        let base = Rational::new(fact(4 * n), fact(n).pow(4) * BigInt::from(256).pow(n as u32));
        let expect = base * rat(4, 1) * (harm(4 * n) - harm(n));
        ensure(pi1.parts()[0].coeff(n) == expect, || format!("n = {n}"))?;
    }
    Ok("n = 0..10".into())
}

fn pf_monodromy() -> Result<String, String> {
    let mut ctx = Ctx::with_digits(DIGITS).map_err(e)?;
    let op = catalog::l_pf();
    let b = ctx.rational_point(&rat(1, 2));
    let (basis, y) = frobenius_at(&op, &Point::zero(), &b, &mut ctx).map_err(e)?;
    let m0 = monodromy(&op, &b, &Point::zero(), &mut ctx).map_err(e)?;
    let m1 = monodromy(&op, &b, &Point::Finite(rat(1, 1)), &mut ctx).map_err(e)?;
    let mi = monodromy(&op, &b, &Point::Infinity, &mut ctx).map_err(e)?;
    let frob = change_basis(&m0.entries, &y, &ctx).map_err(e)?;
    let frob = log_normalized(&frob, &basis, &mut ctx).map_err(e)?;
    let unipotent = vec![vec![ctx.one(), ctx.one()], vec![ctx.zero(), ctx.one()]];
    let r0 = max_distance(&frob, &unipotent, &mut ctx);
    let prod = mat_mul(&mat_mul(&mi.entries, &m1.entries, &ctx), &m0.entries, &ctx);
    let rp = max_distance(&prod, &identity(2, &ctx), &mut ctx);
    let text = format!("residuals {r0:.1e} (local), {rp:.1e} (product)");
    ensure(r0 < 1e-30 && rp < 1e-25, || text.clone())?;
    Ok(text)
}

fn fricke_values() -> Result<String, String> {
    let mut ctx = Ctx::with_digits(DIGITS).map_err(e)?;
    let r = fricke_check(&catalog::l_pf(), &[rat(1, 5), rat(1, 3), rat(2, 5)], &rat(27, 1), &mut ctx).map_err(e)?;
    let worst = r.iter().map(|s| s.residual).fold(0.0, f64::max);
    ensure(worst < 1e-30, || format!("residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn cayley() -> Result<String, String> {
    let mut ctx = Ctx::with_digits(DIGITS).map_err(e)?;
    let cp = cayley_fixed_point(&catalog::l_pf(), &rat(27, 1), &mut ctx).map_err(e)?;
    let (re, im) = ctx.format_point(&cp.tau_star, 30);
    let text = format!("tau* = {re} + {im} i, path residual {:.1e}", cp.path_residual);
    ensure(cp.path_residual < 1e-30 && cp.tau_star.im.is_positive(), || text.clone())?;
    ensure(cp.samples.iter().all(|s| s.1 < 1.0), || format!("{text}; sample outside the disk"))?;
    Ok(text)
}

fn toric() -> Result<String, String> {
    let delta = LatticePolytope2D::new(&[(2, -1), (-1, 2), (-1, -1)]).map_err(e)?;
    let dual = LatticePolytope2D::new(&[(1, 0), (0, 1), (-1, -1)]).map_err(e)?;
    ensure(polar_dual(&delta).map_err(e)? == dual, || "wrong dual".into())?;
    let counts = (lattice_points(&delta).len(), lattice_points(&dual).len());
    ensure(counts == (10, 4), || format!("counts {counts:?}"))?;
    let secs = anticanonical_sections(&delta, &[(1, 0), (0, 1), (-1, -1)]).map_err(e)?;
    let names: Vec<String> = secs.entries.iter().map(|m| m.render("z")).collect();
    for want in ["z1^3", "z2^3", "z3^3", "z1*z2*z3"] {
        ensure(names.iter().any(|n| n == want), || format!("{want} missing"))?;
    }
    Ok("dual, 10 and 4 points, sections".into())
}

fn prepotential_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for case in 0..200 {
        let kappa = rat(rng.random_range(1..=60) * if rng.random::<bool>() { 1 } else { -1 }, 1);
        let mut coeffs = vec![kappa.clone()];
        coeffs.extend((1..20).map(|_| rat(rng.random_range(-10_000..10_000), rng.random_range(1..50))));
        let c = TruncatedSeries::from_coeffs(coeffs);
        let f = prepotential_from_yukawa(&c, &kappa).map_err(e)?;
        ensure(f.yukawa() == c && f.yukawa().order() == 20, || format!("case {case}"))?;
    }
    Ok("200 seeded random series".into())
}

fn poincare() -> Result<String, String> {
    let mut ctx = Ctx::with_digits(DIGITS).map_err(e)?;
    let grid = [
        ("0", "1/2"), ("1/10", "3/4"), ("-1/4", "1"), ("1/3", "5/4"), ("1/2", "3/2"),
        ("-1/2", "2"), ("7/10", "5/2"), ("-3/10", "3"), ("1/5", "4"), ("0", "6"),
    ];
    let mut worst = 0f64;
    for kappa in [rat(1, 1), rat(5, 1)] {
        let pre = Prepotential { kappa, quadratic: QuadraticPart::default(), instanton: vec![Rational::zero(); 21] };
        for (x, y) in grid {
            let t = ctx.parse(x, y).map_err(e)?;
            let s = ctx.conj(&t);
            let g = special_geometry_metric(&pre, &t, &s, &mut ctx).map_err(e)?;
            // 3/(4 (Im t)^2)
            let yy = ctx.parse_real(y).map_err(e)?;
            let y2 = ctx.real(&yy);
            let four_y2 = ctx.mul(&ctx.int(4), &ctx.mul(&y2, &y2));
            let expect = ctx.div(&ctx.int(3), &four_y2).map_err(e)?;
            worst = worst.max(ctx.distance_f64(&g, &expect));
        }
    }
    ensure(worst < 1e-25, || format!("residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}
