//! Numeric analytic continuation of operator solutions along polylines.
//!
//! A fundamental matrix has one row per derivative order (`y, y', …,
//! y^(n−1)`, derivatives in the global variable) and one column per solution.
//! Monodromy acts on the right: the continuation of a basis `Y` around a loop
//! is `Y·M`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use astro_float::{BigFloat, RoundingMode};
use num_traits::{ToPrimitive, Zero};

use crate::diffop::{singular_points, ThetaOperator};
use crate::error::{Error, Result};
use crate::frobenius::{frobenius_basis, FrobeniusBasis, Point};
use crate::numeric::{ComplexPoint, Ctx};
use crate::poly::Poly;
use crate::series::LogSolution;
use crate::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Segments closer than this to a singular point are rejected.
const MIN_CLEARANCE: f64 = 1e-10;

/// Vertices of a regular polygon used to discretize a loop.
const LOOP_VERTICES: usize = 32;

/// Square matrix of complex values, row-major.
pub type Matrix = Vec<Vec<ComplexPoint>>;

/// Piecewise-linear path in the complex plane.
#[derive(Clone, Debug)]
pub struct PathPolyline {
    vertices: Vec<ComplexPoint>,
}

impl PathPolyline {
    /// Rejects empty paths and repeated consecutive vertices.
    pub fn new(vertices: Vec<ComplexPoint>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("path needs at least one vertex".into()));
        }
        for w in vertices.windows(2) {
            if w[0].re == w[1].re && w[0].im == w[1].im {
                return Err(Error::InvalidInput("consecutive path vertices coincide".into()));
            }
        }
        Ok(PathPolyline { vertices })
    }

    pub fn vertices(&self) -> &[ComplexPoint] {
        &self.vertices
    }

    pub fn start(&self) -> &ComplexPoint {
        &self.vertices[0]
    }

    pub fn end(&self) -> &ComplexPoint {
        self.vertices.last().expect("nonempty")
    }

    /// Smallest distance from any segment (or the single vertex) to `points`.
    pub fn clearance(&self, ctx: &mut Ctx, points: &[(f64, f64)]) -> f64 {
        let vs: Vec<(f64, f64)> = self.vertices.iter().map(|v| ctx.to_f64_pair(v)).collect();
        let mut best = f64::INFINITY;
        for s in points {
            if vs.len() == 1 {
                best = best.min(hypot(vs[0].0 - s.0, vs[0].1 - s.1));
            }
            for w in vs.windows(2) {
                best = best.min(segment_distance(w[0], w[1], *s));
            }
        }
        best
    }
}

/// Result of [`taylor_continue`].
#[derive(Clone, Debug)]
pub struct Continuation {
    /// Fundamental matrix at the end of the path.
    pub end: Matrix,
    pub steps: usize,
    /// Accumulated relative tail estimate over all steps (heuristic).
    pub error_budget: f64,
}

/// Local monodromy of a loop based at `basepoint`.
#[derive(Clone, Debug)]
pub struct MonodromyMatrix {
    pub entries: Matrix,
    pub basepoint: ComplexPoint,
    pub around: Point,
    pub error_budget: f64,
}

fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

fn segment_distance(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    hypot(a.0 + t * dx - p.0, a.1 + t * dy - p.1)
}

fn nearest(points: &[(f64, f64)], z: (f64, f64)) -> f64 {
    points
        .iter()
        .map(|s| hypot(s.0 - z.0, s.1 - z.1))
        .fold(f64::INFINITY, f64::min)
}

/// Binary exponent of the larger part, or `None` for zero.
fn magnitude(z: &ComplexPoint) -> Option<i64> {
    let e = |x: &BigFloat| (!x.is_zero()).then(|| x.exponent().map(i64::from)).flatten();
    match (e(&z.re), e(&z.im)) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

fn falling(m: usize, k: usize) -> u128 {
    if m < k {
        return 0;
    }
    ((m - k + 1)..=m).fold(1u128, |acc, x| acc * x as u128)
}

fn big_u128(ctx: &Ctx, n: u128) -> BigFloat {
    BigFloat::from_u128(n, ctx.bits())
}

/// ∂-form coefficients cleared of denominators, as complex polynomials.
fn numeric_coeffs(op: &ThetaOperator, ctx: &mut Ctx) -> Vec<Vec<ComplexPoint>> {
    let d = op.to_deriv().cleared();
    d.coeffs()
        .iter()
        .map(|c| {
            debug_assert!(c.is_polynomial());
            c.num().coeffs().iter().map(|r| ctx.rational_point(r)).collect()
        })
        .collect()
}

/// Taylor coefficients of `p` at `c`: `p(c+h) = Σⱼ out[j] hʲ`.
fn recenter(p: &[ComplexPoint], c: &ComplexPoint, ctx: &Ctx) -> Vec<ComplexPoint> {
    let mut a: Vec<ComplexPoint> = p.to_vec();
    let n = a.len();
    for j in 0..n {
        for i in (j + 1..n).rev() {
            let t = ctx.mul(&a[i], c);
            a[i - 1] = ctx.add(&a[i - 1], &t);
        }
    }
    a
}

fn finite_singularities(op: &ThetaOperator) -> Vec<(f64, f64)> {
    singular_points(op).finite_approx()
}

/// One Taylor step of length `h` from `c` for every column of `y`.
fn taylor_step(
    coeffs: &[Vec<ComplexPoint>],
    c: &ComplexPoint,
    h: &ComplexPoint,
    y: &Matrix,
    ctx: &Ctx,
) -> Result<(Matrix, f64)> {
    let n = coeffs.len() - 1;
    let cols = y[0].len();
    // b[k][j] = a_{k,j}·h^(n+j−k)
    let mut hp = vec![ctx.one()];
    let max_deg = coeffs.iter().map(|p| p.len()).max().unwrap_or(1) + n;
    for i in 1..=max_deg {
        let next = ctx.mul(&hp[i - 1], h);
        hp.push(next);
    }
    let b: Vec<Vec<ComplexPoint>> = coeffs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            recenter(p, c, ctx)
                .iter()
                .enumerate()
                .map(|(j, a)| ctx.mul(a, &hp[n + j - k]))
                .collect()
        })
        .collect();
    let lead = &b[n][0];
    if magnitude(lead).is_none() {
        return Err(Error::PathTooCloseToSingularity("step centre is singular".into()));
    }
    let lead_inv = ctx.recip(lead)?;
    let target_bits = ctx.bits() as i64 - 12;
    let max_terms = 8 * ctx.bits() + 64;
    // scaled coefficients c̃_m = c_m h^m, one sequence per column
    let mut seq: Vec<Vec<ComplexPoint>> = (0..cols)
        .map(|col| {
            (0..n)
                .map(|i| {
                    let f = BigFloat::from_u128(falling(i, i), ctx.bits());
                    let v = ctx.mul(&y[i][col], &hp[i]);
                    ComplexPoint { re: v.re.div(&f, ctx.bits(), RM), im: v.im.div(&f, ctx.bits(), RM) }
                })
                .collect()
        })
        .collect();
    let mut top: Option<i64> = seq
        .iter()
        .flat_map(|s| s.iter().filter_map(magnitude))
        .max();
    let mut quiet = 0usize;
    let mut last_rel = 0f64;
    let mut m = 0usize;
    loop {
        let idx_new = m + n;
        let mut newest_mag: Option<i64> = None;
        for s in seq.iter_mut() {
            let mut acc = ctx.zero();
            for (k, row) in b.iter().enumerate() {
                for (j, bkj) in row.iter().enumerate() {
                    if k == n && j == 0 {
                        continue;
                    }
                    if j > m + k {
                        continue;
                    }
                    let idx = m + k - j;
                    let ff = falling(idx, k);
                    if ff == 0 {
                        continue;
                    }
                    let t = ctx.mul(bkj, &s[idx]);
                    let t = ctx.scale(&t, &big_u128(ctx, ff));
                    acc = ctx.add(&acc, &t);
                }
            }
            let denom = big_u128(ctx, falling(idx_new, n));
            let v = ctx.neg(&ctx.mul(&acc, &lead_inv));
            let v = ComplexPoint { re: v.re.div(&denom, ctx.bits(), RM), im: v.im.div(&denom, ctx.bits(), RM) };
            newest_mag = match (newest_mag, magnitude(&v)) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            };
            s.push(v);
        }
        top = match (top, newest_mag) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        // weight by the derivative factor m^(n−1) seen by the top row
        let weight = 64 - ((idx_new as u64 + 1).pow(n.saturating_sub(1) as u32)).leading_zeros() as i64;
        let small = match (top, newest_mag) {
            (_, None) => true,
            (Some(t), Some(e)) => {
                last_rel = pow2((e + weight - t) as i32);
                e + weight < t - target_bits
            }
            (None, Some(_)) => false,
        };
        quiet = if small { quiet + 1 } else { 0 };
        if quiet > n + 2 {
            break;
        }
        m += 1;
        if m > max_terms {
            return Err(Error::PrecisionExhausted(format!(
                "Taylor series did not converge within {max_terms} terms"
            )));
        }
    }
    // y^(i)(c+h) = h^(−i) Σ_m c̃_m m!/(m−i)!
    let mut out = vec![vec![ctx.zero(); cols]; n];
    for (col, s) in seq.iter().enumerate() {
        for (i, row) in out.iter_mut().enumerate() {
            let mut acc = ctx.zero();
            for (mm, v) in s.iter().enumerate().skip(i) {
                let t = ctx.scale(v, &big_u128(ctx, falling(mm, i)));
                acc = ctx.add(&acc, &t);
            }
            row[col] = ctx.div(&acc, &hp[i])?;
        }
    }
    Ok((out, 2.0 * last_rel))
}

fn pow2(e: i32) -> f64 {
    if e < -1000 {
        0.0
    } else if e > 1000 {
        f64::INFINITY
    } else {
        let mut x = 1.0f64;
        let step = if e < 0 { 0.5 } else { 2.0 };
        for _ in 0..e.unsigned_abs() {
            x *= step;
        }
        x
    }
}

/// Continues the fundamental matrix `initial` (given at the first vertex)
/// along `path`.
///
/// Each step stays within half the distance to the nearest finite singular
/// point and sums the local Taylor series until its tail is below the working
/// precision.
pub fn taylor_continue(
    op: &ThetaOperator,
    path: &PathPolyline,
    initial: &Matrix,
    ctx: &mut Ctx,
) -> Result<Continuation> {
    let n = op.order();
    if initial.len() != n || initial.iter().any(|r| r.len() != initial[0].len()) {
        return Err(Error::InvalidInput(format!(
            "initial data must have {n} rows of equal length"
        )));
    }
    let sing = finite_singularities(op);
    let clearance = path.clearance(ctx, &sing);
    if clearance < MIN_CLEARANCE {
        return Err(Error::PathTooCloseToSingularity(format!("{clearance:e}")));
    }
    let coeffs = numeric_coeffs(op, ctx);
    let mut y = initial.clone();
    let mut steps = 0usize;
    let mut budget = 0f64;
    for w in path.vertices().windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let delta = ctx.sub(b, a);
        let af = ctx.to_f64_pair(a);
        let df = ctx.to_f64_pair(&delta);
        let len = hypot(df.0, df.1);
        let mut s = 0f64;
        let mut centre = a.clone();
        while s < 1.0 {
            let here = (af.0 + s * df.0, af.1 + s * df.1);
            let room = nearest(&sing, here) / 2.0;
            let ds = if room.is_finite() { (room / len).min(1.0 - s) } else { 1.0 - s };
            let s_next = if s + ds >= 1.0 - 1e-15 { 1.0 } else { s + ds };
            let next = if s_next == 1.0 {
                b.clone()
            } else {
                let frac = BigFloat::from_f64(s_next, ctx.bits());
                ctx.add(a, &ctx.scale(&delta, &frac))
            };
            let h = ctx.sub(&next, &centre);
            let (out, tail) = taylor_step(&coeffs, &centre, &h, &y, ctx)?;
            y = out;
            budget += tail;
            steps += 1;
            centre = next;
            s = s_next;
        }
    }
    let allowed = pow2(-((ctx.digits() as f64 * 3.32) as i32 - 10));
    if budget > allowed.max(1e-300) && budget > 0.0 && allowed > 0.0 {
        return Err(Error::PrecisionExhausted(format!("error budget {budget:e}")));
    }
    Ok(Continuation { end: y, steps, error_budget: budget })
}

/// Identity matrix of size `n`.
pub fn identity(n: usize, ctx: &Ctx) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, ctx: &Ctx) -> Matrix {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| {
            (0..c)
                .map(|j| {
                    (0..k).fold(ctx.zero(), |acc, l| ctx.add(&acc, &ctx.mul(&a[i][l], &b[l][j])))
                })
                .collect()
        })
        .collect()
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn mat_inverse(a: &Matrix, ctx: &Ctx) -> Result<Matrix> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity(n, ctx);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                let (x, y) = (ctx.norm_sqr(&m[i][col]), ctx.norm_sqr(&m[j][col]));
                x.cmp(&y).unwrap_or(0).cmp(&0)
            })
            .expect("nonempty range");
        if ctx.norm_sqr(&m[pivot][col]).is_zero() {
            return Err(Error::InvalidInput("singular fundamental matrix".into()));
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = ctx.recip(&m[col][col])?;
        for j in 0..n {
            m[col][j] = ctx.mul(&m[col][j], &p);
            inv[col][j] = ctx.mul(&inv[col][j], &p);
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..n {
                let t = ctx.mul(&f, &m[col][j]);
                m[i][j] = ctx.sub(&m[i][j], &t);
                let t = ctx.mul(&f, &inv[col][j]);
                inv[i][j] = ctx.sub(&inv[i][j], &t);
            }
        }
    }
    Ok(inv)
}

pub fn determinant(a: &Matrix, ctx: &Ctx) -> ComplexPoint {
    let n = a.len();
    let mut m = a.clone();
    let mut det = ctx.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&i| magnitude(&m[i][col]).is_some()) else {
            return ctx.zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = ctx.neg(&det);
        }
        det = ctx.mul(&det, &m[col][col]);
        let p = ctx.recip(&m[col][col]).expect("nonzero pivot");
        for i in col + 1..n {
            let f = ctx.mul(&m[i][col], &p);
            for j in col..n {
                let t = ctx.mul(&f, &m[col][j]);
                m[i][j] = ctx.sub(&m[i][j], &t);
            }
        }
    }
    det
}

/// Largest entrywise distance `max |a_ij − b_ij|`.
pub fn max_distance(a: &Matrix, b: &Matrix, ctx: &mut Ctx) -> f64 {
    let mut worst = 0f64;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            worst = worst.max(ctx.distance_f64(x, y));
        }
    }
    worst
}

/// Matrix of `basis` in another basis `Y`: `Y⁻¹·M·Y`.
pub fn change_basis(m: &Matrix, y: &Matrix, ctx: &Ctx) -> Result<Matrix> {
    let yi = mat_inverse(y, ctx)?;
    Ok(mat_mul(&mat_mul(&yi, m, ctx), y, ctx))
}

fn eval_log_solution(
    s: &LogSolution,
    t: &ComplexPoint,
    log_t: &ComplexPoint,
    ctx: &mut Ctx,
) -> Result<ComplexPoint> {
    let prefactor = ctx.pow_rational(t, s.exponent())?;
    let mut total = ctx.zero();
    let mut log_pow = ctx.one();
    for part in s.parts() {
        let mut acc = ctx.zero();
        for c in part.coeffs().iter().rev() {
            acc = ctx.mul(&acc, t);
            if !c.is_zero() {
                let v = ctx.rational_point(c);
                acc = ctx.add(&acc, &v);
            }
        }
        total = ctx.add(&total, &ctx.mul(&acc, &log_pow));
        log_pow = ctx.mul(&log_pow, log_t);
    }
    Ok(ctx.mul(&total, &prefactor))
}

/// Radius of the disk around `point` (in its local coordinate) free of
/// other singular points; `None` when there are none.
fn local_radius(op: &ThetaOperator, point: &Point) -> Option<f64> {
    let sing = finite_singularities(op);
    let r = match point {
        Point::Finite(p) => {
            let p = p.to_f64().unwrap_or(f64::NAN);
            sing.iter()
                .map(|s| hypot(s.0 - p, s.1))
                .filter(|d| *d > 1e-300)
                .fold(f64::INFINITY, f64::min)
        }
        Point::Infinity => {
            let far = sing.iter().map(|s| hypot(s.0, s.1)).fold(0f64, f64::max);
            if far > 0.0 { 1.0 / far } else { f64::INFINITY }
        }
    };
    r.is_finite().then_some(r)
}

/// Local coordinate of `z` at `point`.
fn local_coordinate(point: &Point, z: &ComplexPoint, ctx: &mut Ctx) -> Result<ComplexPoint> {
    match point {
        Point::Finite(p) => {
            let p = ctx.rational_point(p);
            Ok(ctx.sub(z, &p))
        }
        Point::Infinity => ctx.recip(z),
    }
}

/// Number of series terms needed at local radius ratio `ratio`.
fn terms_for(ratio: f64, digits: usize) -> usize {
    if ratio <= 0.0 {
        return digits + 20;
    }
    ((digits as f64 + 10.0) / -libm::log10(ratio)).ceil() as usize + 12
}

/// Values at `z` of the local Frobenius basis at `point` and their
/// derivatives in the global variable, with the principal logarithm of the
/// local coordinate.
pub fn frobenius_values(
    op: &ThetaOperator,
    point: &Point,
    z: &ComplexPoint,
    ctx: &mut Ctx,
) -> Result<(FrobeniusBasis, Matrix)> {
    let t = local_coordinate(point, z, ctx)?;
    let tf = ctx.to_f64_pair(&t);
    let tabs = hypot(tf.0, tf.1);
    if tabs == 0.0 {
        return Err(Error::PathTooCloseToSingularity("anchor at the singular point".into()));
    }
    let ratio = match local_radius(op, point) {
        Some(r) => tabs / r,
        None => 0.0,
    };
    if ratio > 0.5 {
        return Err(Error::InvalidInput(format!(
            "anchor at local radius ratio {ratio:.3}, need at most 1/2"
        )));
    }
    let n_terms = terms_for(ratio, ctx.digits());
    let basis = frobenius_basis(op, point, n_terms)?;
    let log_t = ctx.ln(&t)?;
    let n = op.order();
    let mut y = vec![Vec::with_capacity(basis.solutions.len()); n];
    for s in &basis.solutions {
        let mut f = s.clone();
        for row in y.iter_mut() {
            row.push(eval_log_solution(&f, &t, &log_t, ctx)?);
            f = match point {
                Point::Finite(_) => f.derivative(),
                // d/dz = −t²·d/dt for z = 1/t
                Point::Infinity => f.derivative().mul_poly(&Poly::from_ints(&[0, 0, -1])),
            };
        }
    }
    Ok((basis, y))
}

/// Local Frobenius basis at the finite point `point`, continued to
/// `basepoint` along the straight segment from an anchor near `point`.
pub fn frobenius_at(
    op: &ThetaOperator,
    point: &Point,
    basepoint: &ComplexPoint,
    ctx: &mut Ctx,
) -> Result<(FrobeniusBasis, Matrix)> {
    let Point::Finite(p) = point else {
        return Err(Error::InvalidInput("the basis at infinity needs an explicit anchor path".into()));
    };
    let pc = ctx.rational_point(p);
    let offset = ctx.sub(basepoint, &pc);
    let of = ctx.to_f64_pair(&offset);
    let dist = hypot(of.0, of.1);
    let reach = local_radius(op, point).map_or(dist, |r| r / 8.0);
    if dist <= reach {
        return frobenius_values(op, point, basepoint, ctx);
    }
    let frac = BigFloat::from_f64(reach / dist, ctx.bits());
    let anchor = ctx.add(&pc, &ctx.scale(&offset, &frac));
    let (basis, y) = frobenius_values(op, point, &anchor, ctx)?;
    let path = PathPolyline::new(vec![anchor, basepoint.clone()])?;
    let run = taylor_continue(op, &path, &y, ctx)?;
    Ok((basis, run.end))
}

/// Rescales the `(log t)ᵏ` columns of a monodromy matrix in a Frobenius
/// basis by `(2πi)^(−k)`, so a unipotent loop reads `τ ↦ τ + 1`.
pub fn log_normalized(m: &Matrix, basis: &FrobeniusBasis, ctx: &mut Ctx) -> Result<Matrix> {
    let tpi = ctx.two_pi_i();
    let d: Vec<ComplexPoint> = basis.solutions.iter().map(|s| ctx.powi(&tpi, s.log_degree())).collect();
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = ctx.div(&ctx.mul(x, &d[i]), &d[j])?;
        }
    }
    Ok(out)
}

/// Regular polygon approximating the circle through `b` centred at `p`,
/// traversed counterclockwise and closed at `b`.
fn circle_path(p: &ComplexPoint, b: &ComplexPoint, clockwise: bool, ctx: &mut Ctx) -> Vec<ComplexPoint> {
    let mut turn = ctx.two_pi_i();
    let k = BigFloat::from_u64(LOOP_VERTICES as u64, ctx.bits());
    turn = ComplexPoint { re: turn.re.div(&k, ctx.bits(), RM), im: turn.im.div(&k, ctx.bits(), RM) };
    if clockwise {
        turn = ctx.neg(&turn);
    }
    let omega = ctx.exp(&turn);
    let radius = ctx.sub(b, p);
    let mut out = Vec::with_capacity(LOOP_VERTICES);
    let mut r = radius;
    for _ in 1..LOOP_VERTICES {
        r = ctx.mul(&r, &omega);
        out.push(ctx.add(p, &r));
    }
    out.push(b.clone());
    out
}

/// Closed loop based at `basepoint` encircling `around` once, positively
/// with respect to the local coordinate there.
///
/// A finite point is encircled counterclockwise along the circle through the
/// basepoint; `∞` is encircled clockwise along a large circle reached by a
/// radial spoke, chosen to keep away from the finite singular points.
pub fn loop_path(
    op: &ThetaOperator,
    basepoint: &ComplexPoint,
    around: &Point,
    ctx: &mut Ctx,
) -> Result<PathPolyline> {
    let sing = finite_singularities(op);
    let bf = ctx.to_f64_pair(basepoint);
    if nearest(&sing, bf) < MIN_CLEARANCE {
        return Err(Error::PathTooCloseToSingularity("basepoint is singular".into()));
    }
    match around {
        Point::Finite(p) => {
            let pf = p.to_f64().unwrap_or(f64::NAN);
            if nearest(&sing, (pf, 0.0)) > 1e-12 {
                return Err(Error::InvalidInput(format!("{p} is not a singular point")));
            }
            let r = hypot(bf.0 - pf, bf.1);
            let inside = sing.iter().filter(|s| hypot(s.0 - pf, s.1) < r).count();
            if inside != 1 {
                return Err(Error::InvalidInput(format!(
                    "loop of radius {r} around {p} encloses {inside} singular points"
                )));
            }
            let pc = ctx.rational_point(p);
            let mut v = vec![basepoint.clone()];
            v.extend(circle_path(&pc, basepoint, false, ctx));
            PathPolyline::new(v)
        }
        Point::Infinity => {
            let far = sing.iter().map(|s| hypot(s.0 - bf.0, s.1 - bf.1)).fold(0f64, f64::max);
            let radius = 2.0 * far + 1.0;
            let mut best: Option<(f64, f64, f64)> = None;
            for k in 0..16 {
                let ang = core::f64::consts::PI * (0.5 + k as f64 / 8.0);
                let (c, s) = (libm::cos(ang), libm::sin(ang));
                let tip = (bf.0 + radius * c, bf.1 + radius * s);
                let clear = sing
                    .iter()
                    .map(|p| segment_distance(bf, tip, *p))
                    .fold(f64::INFINITY, f64::min);
                if best.is_none_or(|b| clear > b.0 + 1e-9) {
                    best = Some((clear, c, s));
                }
            }
            let (_, c, s) = best.expect("sixteen candidates");
            let tip = ctx.add(basepoint, &ctx.from_f64(radius * c, radius * s));
            let mut v = vec![basepoint.clone(), tip.clone()];
            v.extend(circle_path(basepoint, &tip, true, ctx));
            v.push(basepoint.clone());
            PathPolyline::new(v)
        }
    }
}

/// Monodromy of the standard basis at `basepoint` (the one with identity
/// fundamental matrix there) along [`loop_path`].
pub fn monodromy(
    op: &ThetaOperator,
    basepoint: &ComplexPoint,
    around: &Point,
    ctx: &mut Ctx,
) -> Result<MonodromyMatrix> {
    let path = loop_path(op, basepoint, around, ctx)?;
    let id = identity(op.order(), ctx);
    let run = taylor_continue(op, &path, &id, ctx)?;
    Ok(MonodromyMatrix {
        entries: run.end,
        basepoint: basepoint.clone(),
        around: around.clone(),
        error_budget: run.error_budget,
    })
}

/// `exp(2πi·Σρ)` over the local exponents at `point`: the expected
/// determinant of the local monodromy.
pub fn expected_determinant(op: &ThetaOperator, point: &Point, ctx: &mut Ctx) -> Result<ComplexPoint> {
    let data = crate::frobenius::indicial_roots(op, point)?;
    let sum: Rational = data.multiset().into_iter().sum();
    let frac = &sum - sum.floor();
    let tpi = ctx.two_pi_i();
    let f = ctx.rational(&frac);
    Ok(ctx.exp(&ctx.scale(&tpi, &f)))
}

/// Indices of the holomorphic solution with constant term 1 and the
/// single-log solution built on it.
fn period_columns(basis: &FrobeniusBasis) -> Result<(usize, usize)> {
    let i0 = basis
        .solutions
        .iter()
        .position(|s| s.log_degree() == 0 && s.exponent().is_zero())
        .ok_or(Error::NoLogStructure)?;
    let i1 = basis
        .solutions
        .iter()
        .position(|s| s.log_degree() == 1 && s.parts()[1] == basis.solutions[i0].parts()[0])
        .ok_or(Error::NoLogStructure)?;
    Ok((i0, i1))
}

/// `τ = (π₁ − log κ·π₀)/(2πi·π₀)` from period values.
fn tau_from(pi0: &ComplexPoint, pi1: &ComplexPoint, gauge: &Rational, ctx: &mut Ctx) -> Result<ComplexPoint> {
    let k = ctx.rational_point(gauge);
    let lk = ctx.ln(&k)?;
    let num = ctx.sub(pi1, &ctx.mul(&lk, pi0));
    let tpi = ctx.two_pi_i();
    ctx.div(&num, &ctx.mul(&tpi, pi0))
}

/// Normalized period `τ` at the end of `path`.
///
/// The path starts inside the reference disk at `0` (at most half its radius
/// from the origin), where the Frobenius basis is summed with the principal
/// logarithm; `π₁` is the single-log solution and `κ` the gauge constant, so
/// that a positive loop around `0` acts as `τ ↦ τ + 1`.
pub fn normalized_period_value(
    op: &ThetaOperator,
    path: &PathPolyline,
    gauge: &Rational,
    ctx: &mut Ctx,
) -> Result<ComplexPoint> {
    let (basis, y0) = frobenius_values(op, &Point::zero(), path.start(), ctx)?;
    let (i0, i1) = period_columns(&basis)?;
    let run = taylor_continue(op, path, &y0, ctx)?;
    tau_from(&run.end[0][i0], &run.end[0][i1], gauge, ctx)
}

/// One line of the Fricke check.
#[derive(Clone, Debug)]
pub struct FrickeSample {
    pub alpha: Rational,
    pub tau_alpha: ComplexPoint,
    pub tau_beta: ComplexPoint,
    pub product: ComplexPoint,
    /// `|τ(1−α)·τ(α) + 1/3|`
    pub residual: f64,
}

fn real_path_from_origin(op: &ThetaOperator, x: &Rational, ctx: &mut Ctx) -> Result<PathPolyline> {
    let r = local_radius(op, &Point::zero()).unwrap_or(1.0);
    let anchor = Rational::new(1.into(), 8.into()) * Rational::from_float(r).unwrap_or_else(|| Rational::from_integer(1.into()));
    let anchor = if &anchor < x { anchor } else { x.clone() };
    let a = ctx.rational_point(&anchor);
    if &anchor == x {
        return PathPolyline::new(vec![a]);
    }
    let b = ctx.rational_point(x);
    PathPolyline::new(vec![a, b])
}

/// `τ(1−α)·τ(α)` for real `α ∈ (0, 1)`, both values continued along the real
/// segment from the reference disk at 0.
pub fn fricke_check(
    op: &ThetaOperator,
    alphas: &[Rational],
    gauge: &Rational,
    ctx: &mut Ctx,
) -> Result<Vec<FrickeSample>> {
    let one = Rational::from_integer(1.into());
    let third = ctx.rational_point(&Rational::new((-1).into(), 3.into()));
    let mut out = Vec::new();
    for a in alphas {
        if !(a > &Rational::zero() && a < &one) {
            return Err(Error::InvalidInput(format!("α = {a} outside (0, 1)")));
        }
        let beta = &one - a;
        let pa = real_path_from_origin(op, a, ctx)?;
        let pb = real_path_from_origin(op, &beta, ctx)?;
        let ta = normalized_period_value(op, &pa, gauge, ctx)?;
        let tb = normalized_period_value(op, &pb, gauge, ctx)?;
        let product = ctx.mul(&ta, &tb);
        let residual = ctx.distance_f64(&product, &third);
        out.push(FrickeSample { alpha: a.clone(), tau_alpha: ta, tau_beta: tb, product, residual });
    }
    Ok(out)
}

/// Result of [`cayley_fixed_point`].
#[derive(Clone, Debug)]
pub struct CayleyPoint {
    pub tau_star: ComplexPoint,
    /// The same point computed along the second path family.
    pub tau_star_alt: ComplexPoint,
    /// `|τ*_A − τ*_B|`
    pub path_residual: f64,
    /// `(α, |τ_orb(α)|)` for sample points of growing modulus near `∞`.
    pub samples: Vec<(ComplexPoint, f64)>,
}

fn c(ctx: &mut Ctx, re: &str, im: &str) -> ComplexPoint {
    ctx.parse(re, im).expect("literal")
}

/// `τ*` along one path: continue the period basis from `0` to the path end
/// near `∞` and read off the leading coefficient against the local basis
/// there.
fn tau_star_along(
    op: &ThetaOperator,
    path: &PathPolyline,
    gauge: &Rational,
    ctx: &mut Ctx,
) -> Result<ComplexPoint> {
    let (basis, y0) = frobenius_values(op, &Point::zero(), path.start(), ctx)?;
    let (i0, i1) = period_columns(&basis)?;
    let run = taylor_continue(op, path, &y0, ctx)?;
    let (_, u) = frobenius_values(op, &Point::Infinity, path.end(), ctx)?;
    let conn = mat_mul(&mat_inverse(&u, ctx)?, &run.end, ctx);
    tau_from(&conn[0][i0], &conn[0][i1], gauge, ctx)
}

/// Image `τ*` of the orbifold point at `∞` under the normalized period map.
///
/// The exponents at `∞` must be distinct and non-resonant; `τ*` is the limit
/// of `τ(α)` as `α → ∞` through the upper half plane, computed from the
/// connection matrix between the bases at `0` and `∞` along two different
/// paths.
pub fn cayley_fixed_point(op: &ThetaOperator, gauge: &Rational, ctx: &mut Ctx) -> Result<CayleyPoint> {
    let data = crate::frobenius::indicial_roots(op, &Point::Infinity)
        .map_err(|e| Error::NoOrbifoldPoint(format!("{e}")))?;
    let roots = data.multiset();
    for (i, a) in roots.iter().enumerate() {
        if roots[i + 1..].iter().any(|b| (b - a).is_integer()) {
            return Err(Error::NoOrbifoldPoint(format!("{roots:?}")));
        }
    }
    let far = finite_singularities(op).iter().map(|s| hypot(s.0, s.1)).fold(1f64, f64::max);
    let big = 8.0 * far + 2.0;
    let start = c(ctx, "0.125", "0");
    let mid_a = ctx.from_f64(0.5 * far, 0.5 * far);
    let end_a = ctx.from_f64(0.0, big);
    let mid_b = ctx.from_f64(0.25 * far, far);
    let end_b = ctx.from_f64(-0.6 * big, 0.8 * big);
    let scale = ctx.from_f64(far, 0.0);
    let start = ctx.mul(&start, &scale);
    let path_a = PathPolyline::new(vec![start.clone(), mid_a.clone(), end_a])?;
    let path_b = PathPolyline::new(vec![start.clone(), mid_b, end_b])?;
    let tau_star = tau_star_along(op, &path_a, gauge, ctx)?;
    let tau_star_alt = tau_star_along(op, &path_b, gauge, ctx)?;
    let path_residual = ctx.distance_f64(&tau_star, &tau_star_alt);
    let conj = ctx.conj(&tau_star);
    let mut samples = Vec::new();
    // |τ_orb| shrinks like |α|^(−min ρ) going out to ∞
    for (re, im) in [(0.6, 0.8), (0.0, 10.0), (-60.0, 80.0)] {
        let alpha = ctx.from_f64(re * big, im * big);
        let path = PathPolyline::new(vec![start.clone(), mid_a.clone(), alpha.clone()])?;
        let tau = normalized_period_value(op, &path, gauge, ctx)?;
        let orb = ctx.div(&ctx.sub(&tau, &tau_star), &ctx.sub(&tau, &conj))?;
        let r = ctx.abs(&orb);
        samples.push((alpha, ctx.to_f64(&r)));
    }
    Ok(CayleyPoint { tau_star, tau_star_alt, path_residual, samples })
}

/// Cayley coordinate `(τ − τ*)/(τ − conj τ*)`.
pub fn cayley_transform(tau: &ComplexPoint, tau_star: &ComplexPoint, ctx: &Ctx) -> Result<ComplexPoint> {
    ctx.div(&ctx.sub(tau, tau_star), &ctx.sub(tau, &ctx.conj(tau_star)))
}

/// Rendering helper: matrix entries as decimal `(re, im)` strings.
pub fn format_matrix(m: &Matrix, digits: usize, ctx: &mut Ctx) -> Vec<Vec<(String, String)>> {
    m.iter()
        .map(|row| row.iter().map(|x| ctx.format_point(x, digits)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat;
    use crate::series::hypergeom_series;

    fn ctx(d: usize) -> Ctx {
        Ctx::with_digits(d).unwrap()
    }

    fn sum_series(coeffs: &[Rational], x: &ComplexPoint, ctx: &mut Ctx) -> ComplexPoint {
        let mut acc = ctx.zero();
        for c in coeffs.iter().rev() {
            acc = ctx.mul(&acc, x);
            let v = ctx.rational_point(c);
            acc = ctx.add(&acc, &v);
        }
        acc
    }

    #[test]
    fn hypergeometric_segment_matches_direct_summation() {
        // ₂F₁(1/3,2/3;1;α) from 1/10 to 1/5 against its own series
        let mut ctx = ctx(50);
        let op = catalog::l_pf();
        let f = hypergeom_series(&[rat(1, 3), rat(2, 3)], &[rat(1, 1)], 200).unwrap();
        let df = f.derivative().normalized();
        assert!(df.exponent().is_zero());
        let a = ctx.rational_point(&rat(1, 10));
        let b = ctx.rational_point(&rat(1, 5));
        let init = vec![
            vec![sum_series(f.coeffs(), &a, &mut ctx)],
            vec![sum_series(df.coeffs(), &a, &mut ctx)],
        ];
        let path = PathPolyline::new(vec![a, b.clone()]).unwrap();
        let run = taylor_continue(&op, &path, &init, &mut ctx).unwrap();
        let direct = sum_series(f.coeffs(), &b, &mut ctx);
        assert!(ctx.distance_f64(&run.end[0][0], &direct) < 1e-30);
        let direct_d = sum_series(df.coeffs(), &b, &mut ctx);
        assert!(ctx.distance_f64(&run.end[1][0], &direct_d) < 1e-30);
    }

    #[test]
    fn zero_length_path_is_identity() {
        let mut ctx = ctx(30);
        let op = catalog::l_pf();
        let p = ctx.from_f64(0.3, 0.2);
        let id = identity(2, &ctx);
        let run = taylor_continue(&op, &PathPolyline::new(vec![p]).unwrap(), &id, &mut ctx).unwrap();
        assert_eq!(max_distance(&run.end, &id, &mut ctx), 0.0);
        assert_eq!(run.steps, 0);
    }

    #[test]
    fn constants_stay_constant() {
        // θ² has the constant solution
        let mut ctx = ctx(30);
        let op = ThetaOperator::from_int_coeffs("z", &[vec![0], vec![0], vec![1]]).unwrap();
        let a = ctx.from_f64(1.0, 0.0);
        let path = PathPolyline::new(vec![a, ctx.from_f64(0.5, 2.0), ctx.from_f64(-3.0, 1.0)]).unwrap();
        let init = vec![vec![ctx.int(7)], vec![ctx.zero()]];
        let run = taylor_continue(&op, &path, &init, &mut ctx).unwrap();
        assert!(ctx.distance_f64(&run.end[0][0], &ctx.int(7)) < 1e-25);
        assert!(ctx.distance_f64(&run.end[1][0], &ctx.zero()) < 1e-25);
    }

    #[test]
    fn loop_around_regular_point_is_trivial() {
        let mut ctx = ctx(40);
        let op = catalog::l_pf();
        let b = ctx.from_f64(0.5, 0.1);
        let centre = ctx.from_f64(0.5, 0.3);
        let mut v = vec![b.clone()];
        v.extend(circle_path(&centre, &b, false, &mut ctx));
        let run = taylor_continue(&op, &PathPolyline::new(v).unwrap(), &identity(2, &ctx), &mut ctx).unwrap();
        assert!(max_distance(&run.end, &identity(2, &ctx), &mut ctx) < 1e-30);
    }

    #[test]
    fn rejects_paths_through_singularities() {
        let mut ctx = ctx(20);
        let op = catalog::l_pf();
        let path = PathPolyline::new(vec![ctx.from_f64(0.5, 0.0), ctx.from_f64(1.5, 0.0)]).unwrap();
        let id = identity(2, &ctx);
        assert!(matches!(
            taylor_continue(&op, &path, &id, &mut ctx),
            Err(Error::PathTooCloseToSingularity(_))
        ));
        assert!(PathPolyline::new(vec![]).is_err());
    }

    #[test]
    fn tau_at_one_half_in_upper_half_plane() {
        let mut ctx = ctx(30);
        let op = catalog::l_pf();
        let path = real_path_from_origin(&op, &rat(1, 2), &mut ctx).unwrap();
        let tau = normalized_period_value(&op, &path, &rat(27, 1), &mut ctx).unwrap();
        assert!(tau.im.is_positive());
        // fixed point of τ ↦ −1/(3τ)
        let expect = ctx.mul(&ctx.mul(&tau, &tau), &ctx.int(3));
        assert!(ctx.distance_f64(&expect, &ctx.int(-1)) < 1e-20);
    }

    #[test]
    fn monodromy_determinants() {
        let mut ctx = ctx(30);
        let op = catalog::l_pf();
        let b = ctx.rational_point(&rat(1, 2));
        for p in [Point::zero(), Point::Finite(rat(1, 1)), Point::Infinity] {
            let m = monodromy(&op, &b, &p, &mut ctx).unwrap();
            let det = determinant(&m.entries, &ctx);
            let expect = expected_determinant(&op, &p, &mut ctx).unwrap();
            assert!(ctx.distance_f64(&det, &expect) < 1e-20, "{p}");
        }
    }
}
