use alloc::vec;


use super::DerivOperator;
use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::Rational;

/// Removes the sub-leading coefficient by a gauge transformation.
///
/// Returns the monic operator `Σ aₖ (∂ + h)ᵏ / aₙ` together with
/// `h = −aₙ₋₁/(n·aₙ)`, the logarithmic derivative of the gauge factor `g`:
/// solutions of the input are `g·u` for solutions `u` of the output.
pub fn normal_form(op: &DerivOperator) -> Result<(DerivOperator, RatFunc)> {
    if op.is_zero() {
        return Err(Error::InvalidInput("zero operator has no normal form".into()));
    }
    let n = op.order();
    if n == 0 {
        return Ok((op.monic(), RatFunc::zero()));
    }
    let lead = op.leading();
    let h = op
        .coeff(n - 1)
        .div(lead)
        .scale(&-Rational::from_integer(n.into()).recip());
    let out = op.conjugate(&h).monic();
    debug_assert!(out.coeff(n - 1).is_zero());
    Ok((out, h))
}

/// The monic operator `∂² + q`.
pub(crate) fn schrodinger(q: RatFunc) -> DerivOperator {
    DerivOperator::new(vec![q, RatFunc::zero(), RatFunc::one()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::diffop::symmetric_square;
    use crate::poly::Poly;

    fn constant(c: i64) -> RatFunc {
        RatFunc::from_poly(Poly::constant(Rational::from_integer(c.into())))
    }

    #[test]
    fn constant_shift() {
        let op = DerivOperator::from_polys(vec![Poly::from_ints(&[1]), Poly::from_ints(&[2]), Poly::from_ints(&[1])]);
        let (nf, h) = normal_form(&op).unwrap();
        assert_eq!(nf, DerivOperator::d_power(2));
        assert_eq!(h, constant(-1));
    }

    #[test]
    fn k3_normal_form_has_no_second_derivative() {
        let (nf, _) = normal_form(&catalog::l_k3().to_deriv()).unwrap();
        assert_eq!(nf.order(), 3);
        assert!(nf.coeff(2).is_zero());
        assert_eq!(nf.coeff(3), RatFunc::one());
    }

    #[test]
    fn symmetric_squares_have_the_four_q_shape() {
        let samples = [
            [vec![1, 2], vec![0, 1], vec![1, 0, 1]],
            [vec![-3], vec![2, 0, 1], vec![0, 1]],
            [vec![0, 0, 1], vec![5], vec![1, 1]],
            [vec![2, -1], vec![1, 1, 1], vec![3]],
            [vec![1], vec![0, -2], vec![1, -1, 0, 1]],
        ];
        for s in samples {
            let m = DerivOperator::from_polys(s.iter().map(|c| Poly::from_ints(c)).collect());
            let (nf, _) = normal_form(&symmetric_square(&m).unwrap()).unwrap();
            let b = nf.coeff(1);
            let c = nf.coeff(0);
            let q = b.scale(&Rational::new(1.into(), 4.into()));
            assert_eq!(c, q.derivative().scale(&Rational::from_integer(2.into())));
        }
    }
}
