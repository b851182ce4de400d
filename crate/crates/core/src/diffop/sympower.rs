use alloc::vec;
use alloc::vec::Vec;



use super::normal::{normal_form, schrodinger};
use super::DerivOperator;
use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::Rational;

fn int(c: i64) -> Rational {
    Rational::from_integer(c.into())
}

fn expect_order(op: &DerivOperator, n: usize) -> Result<()> {
    if op.is_zero() || op.order() != n {
        return Err(Error::WrongOrder { expected: n, found: op.order() });
    }
    Ok(())
}

/// Operator annihilating all products `y₁y₂` of solutions of `a₂∂² + a₁∂ + a₀`:
///
/// `a₂²∂³ + 3a₁a₂∂² + (a₂(4a₀ + a₁') + a₁(2a₁ − a₂'))∂ + (2a₂a₀' − 2a₀a₂' + 4a₀a₁)`.
pub fn symmetric_square(op: &DerivOperator) -> Result<DerivOperator> {
    expect_order(op, 2)?;
    let (a0, a1, a2) = (op.coeff(0), op.coeff(1), op.coeff(2));
    let (d0, d1, d2) = (a0.derivative(), a1.derivative(), a2.derivative());
    let c3 = &a2 * &a2;
    let c2 = (&a1 * &a2).scale(&int(3));
    let c1 = &(&a2 * &(&a0.scale(&int(4)) + &d1)) + &(&a1 * &(&a1.scale(&int(2)) - &d2));
    let c0 = &(&(&a2 * &d0).scale(&int(2)) - &(&a0 * &d2).scale(&int(2))) + &(&a0 * &a1).scale(&int(4));
    Ok(DerivOperator::new(vec![c0, c1, c2, c3]))
}

/// Symmetric cube, built from the normal form `∂² + Q`:
/// `∂⁴ + 10Q∂² + 10Q'∂ + (3Q'' + 9Q²)`, then gauged back. Returned monic.
pub fn symmetric_cube(op: &DerivOperator) -> Result<DerivOperator> {
    expect_order(op, 2)?;
    let (nf, h) = normal_form(op)?;
    let q = nf.coeff(0);
    Ok(cube_of_schrodinger(&q).conjugate(&h.scale(&int(-3))).monic())
}

fn cube_of_schrodinger(q: &RatFunc) -> DerivOperator {
    let dq = q.derivative();
    let ddq = dq.derivative();
    DerivOperator::new(vec![
        &ddq.scale(&int(3)) + &(q * q).scale(&int(9)),
        dq.scale(&int(10)),
        q.scale(&int(10)),
        RatFunc::zero(),
        RatFunc::one(),
    ])
}

/// Monic operator of order `m + 1` annihilating all `m`-fold products of
/// solutions of a second-order operator.
///
/// Works on the basis `u^(m−i)·u'^i` of the span of `u^m` and its derivatives,
/// where `u'' = −p u' − q u`, and solves the resulting triangular system.
pub fn symmetric_power(op: &DerivOperator, m: usize) -> Result<DerivOperator> {
    expect_order(op, 2)?;
    let monic = op.monic();
    let p = monic.coeff(1);
    let q = monic.coeff(0);
    let mut vectors: Vec<Vec<RatFunc>> = Vec::with_capacity(m + 2);
    let mut v = vec![RatFunc::zero(); m + 1];
    v[0] = RatFunc::one();
    vectors.push(v.clone());
    for _ in 0..=m {
        let mut next: Vec<RatFunc> = v.iter().map(|c| c.derivative()).collect();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < m {
                next[i + 1] = &next[i + 1] + &c.scale(&int((m - i) as i64));
            }
            if i > 0 {
                let ii = int(i as i64);
                next[i] = &next[i] - &(&p * c).scale(&ii);
                next[i - 1] = &next[i - 1] - &(&q * c).scale(&ii);
            }
        }
        v = next;
        vectors.push(v.clone());
    }
    let mut r = vec![RatFunc::zero(); m + 2];
    r[m + 1] = RatFunc::one();
    for i in (0..=m).rev() {
        let mut acc = RatFunc::zero();
        for k in i + 1..=m + 1 {
            if !r[k].is_zero() && !vectors[k][i].is_zero() {
                acc = &acc + &(&r[k] * &vectors[k][i]);
            }
        }
        r[i] = (-&acc).div(&vectors[i][i]);
    }
    Ok(DerivOperator::new(r))
}

/// A second-order `L₂` with `symmetric_square(L₂)` proportional to `op`, if any.
///
/// The normal form `∂³ + B∂ + C` of a symmetric square satisfies `C = B'/2`;
/// then `∂² + B/4` is the normal form of the witness, gauged back by half of
/// the third-order gauge.
pub fn is_symmetric_square(op: &DerivOperator) -> Result<Option<DerivOperator>> {
    expect_order(op, 3)?;
    let (nf, h) = normal_form(op)?;
    let b = nf.coeff(1);
    let c = nf.coeff(0);
    if c != b.derivative().scale(&Rational::new(1.into(), 2.into())) {
        return Ok(None);
    }
    let q = b.scale(&Rational::new(1.into(), 4.into()));
    let witness = schrodinger(q).conjugate(&h.scale(&Rational::new((-1).into(), 2.into())));
    Ok(Some(witness.monic()))
}

/// A second-order `L₂` whose symmetric cube is proportional to `op`, if any.
///
/// Takes `Q = B₂/10` from the normal form `∂⁴ + B₂∂² + B₁∂ + B₀`, builds the
/// symmetric cube of `∂² + Q` and compares.
pub fn is_symmetric_cube(op: &DerivOperator) -> Result<Option<DerivOperator>> {
    expect_order(op, 4)?;
    let (nf, h) = normal_form(op)?;
    let q = nf.coeff(2).scale(&Rational::new(1.into(), 10.into()));
    if cube_of_schrodinger(&q) != nf {
        return Ok(None);
    }
    let witness = schrodinger(q).conjugate(&h.scale(&Rational::new((-1).into(), 3.into())));
    Ok(Some(witness.monic()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::diffop::ThetaOperator;
    use crate::poly::Poly;
    use crate::rat;
    use crate::series::{series_elementary, Elementary, LogSolution, TruncatedSeries};

    fn op(c: &[&[i64]]) -> DerivOperator {
        DerivOperator::from_polys(c.iter().map(|p| Poly::from_ints(p)).collect())
    }

    fn samples() -> Vec<DerivOperator> {
        vec![
            op(&[&[1, 2], &[0, 1], &[1, 0, 1]]),
            op(&[&[-3], &[2, 0, 1], &[0, 1]]),
            op(&[&[0, 0, 1], &[5], &[1, 1]]),
            op(&[&[2, -1], &[1, 1, 1], &[3]]),
            op(&[&[1], &[0, -2], &[1, -1, 0, 1]]),
            catalog::l_triangular().to_deriv(),
            catalog::l_pf().to_deriv(),
        ]
    }

    #[test]
    fn triangular_squares_to_k3() {
        let sq = symmetric_square(&catalog::l_triangular().to_deriv()).unwrap();
        assert_eq!(ThetaOperator::from_deriv("z", &sq).unwrap(), catalog::l_k3());
    }

    #[test]
    fn constant_coefficient_square() {
        let sq = symmetric_square(&DerivOperator::d_power(2)).unwrap();
        assert_eq!(sq, DerivOperator::d_power(3));
    }

    #[test]
    fn square_formula_agrees_with_linear_algebra() {
        for m in samples() {
            let a = symmetric_square(&m).unwrap();
            let b = symmetric_power(&m, 2).unwrap();
            assert!(a.proportional(&b), "{m}");
        }
    }

    #[test]
    fn cube_formula_agrees_with_linear_algebra() {
        for m in samples() {
            let a = symmetric_cube(&m).unwrap();
            let b = symmetric_power(&m, 3).unwrap();
            assert!(a.proportional(&b), "{m}");
        }
    }

    #[test]
    fn exponential_products() {
        // ∂² − 1 has solutions e^z, e^-z; products are e^2z, 1, e^-2z
        let sq = symmetric_square(&op(&[&[-1], &[], &[1]])).unwrap();
        for k in [2i64, 0, -2] {
            let e = series_elementary(&TruncatedSeries::from_ints(&[0, k], 15), &Elementary::Exp).unwrap();
            let out = sq.apply(&LogSolution::from_series(e)).unwrap();
            assert!(out.is_zero());
            assert!(out.order() >= 12);
        }
    }

    #[test]
    fn detects_k3_as_square_of_triangular() {
        let w = is_symmetric_square(&catalog::l_k3().to_deriv()).unwrap().unwrap();
        assert_eq!(ThetaOperator::from_deriv("z", &w).unwrap(), catalog::l_triangular());
    }

    #[test]
    fn trivial_and_negative_detection() {
        let w = is_symmetric_square(&DerivOperator::d_power(3)).unwrap().unwrap();
        assert_eq!(w, DerivOperator::d_power(2));
        assert_eq!(is_symmetric_square(&op(&[&[1], &[0, 1], &[], &[1]])).unwrap(), None);
        assert!(matches!(
            is_symmetric_square(&DerivOperator::d_power(2)),
            Err(Error::WrongOrder { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn detection_round_trip() {
        for m in samples() {
            let sq = symmetric_square(&m).unwrap();
            let w = is_symmetric_square(&sq).unwrap().expect("witness");
            assert!(symmetric_square(&w).unwrap().proportional(&sq));
            let cube = symmetric_cube(&m).unwrap();
            let w3 = is_symmetric_cube(&cube).unwrap().expect("witness");
            assert!(symmetric_cube(&w3).unwrap().proportional(&cube));
        }
    }

    #[test]
    fn hypergeometric_quartic_is_not_a_cube() {
        let quintic = ThetaOperator::hypergeometric(
            "z",
            &[rat(1, 5), rat(2, 5), rat(3, 5), rat(4, 5)],
            &[rat(1, 1), rat(1, 1), rat(1, 1)],
        )
        .unwrap();
        assert_eq!(is_symmetric_cube(&quintic.to_deriv()).unwrap(), None);
    }
}
