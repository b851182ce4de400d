use alloc::vec::Vec;

use num_traits::Zero;

use super::{pullback, Substitution, ThetaOperator};
use crate::poly::Poly;
use crate::Rational;

/// Singular points of an operator on the Riemann sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoints {
    /// Exact rational singular points, ascending.
    pub rational: Vec<Rational>,
    /// Approximate locations `(re, im)` of the remaining algebraic ones.
    pub approximate: Vec<(f64, f64)>,
    pub infinity: bool,
}

impl SingularPoints {
    pub fn contains(&self, r: &Rational) -> bool {
        self.rational.contains(r)
    }

    /// All finite points as `(re, im)` floats, rational ones first.
    pub fn finite_approx(&self) -> Vec<(f64, f64)> {
        use num_traits::ToPrimitive;
        self.rational
            .iter()
            .map(|r| (r.to_f64().unwrap_or(f64::NAN), 0.0))
            .chain(self.approximate.iter().copied())
            .collect()
    }
}

/// Polynomial whose roots are the finite singular points: the least common
/// denominator of `aₖ/aₙ` in ∂-form.
fn singular_locus(op: &ThetaOperator) -> Poly {
    let d = op.to_deriv().monic();
    let mut den = Poly::one();
    for c in d.coeffs() {
        let g = Poly::gcd(&den, c.den());
        den = (&den * c.den()).div_rem(&g).0.monic();
    }
    den
}

/// Finite singularities from the ∂-form, plus ∞ when the reciprocal pullback
/// is singular at 0.
pub fn singular_points(op: &ThetaOperator) -> SingularPoints {
    let locus = singular_locus(op);
    let roots = locus.rational_roots();
    let mut rest = locus.clone();
    for (r, m) in &roots {
        let factor = Poly::new(alloc::vec![-r.clone(), Rational::from_integer(1.into())]);
        for _ in 0..*m {
            rest = rest.div_rem(&factor).0;
        }
    }
    let at_infinity = pullback(op, &Substitution::Reciprocal)
        .map(|inv| singular_locus(&inv).eval(&Rational::zero()).is_zero())
        .unwrap_or(true);
    SingularPoints {
        rational: roots.into_iter().map(|(r, _)| r).collect(),
        approximate: rest.approx_roots(),
        infinity: at_infinity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat;

    #[test]
    fn hypergeometric_points() {
        for op in [catalog::l_pf(), catalog::l_k3(), catalog::l_triangular()] {
            let s = singular_points(&op);
            assert_eq!(s.rational, alloc::vec![rat(0, 1), rat(1, 1)]);
            assert!(s.approximate.is_empty());
            assert!(s.infinity);
        }
    }

    #[test]
    fn theta_squared_points() {
        let op = ThetaOperator::from_int_coeffs("z", &[alloc::vec![], alloc::vec![], alloc::vec![1]]).unwrap();
        let s = singular_points(&op);
        assert_eq!(s.rational, alloc::vec![rat(0, 1)]);
        assert!(s.infinity);
    }

    #[test]
    fn irrational_points_are_approximated() {
        // θ² − z²(θ+1)²/… with leading coefficient 1 − 2z²: roots ±1/√2
        let op = ThetaOperator::from_int_coeffs("z", &[alloc::vec![0, 0, 1], alloc::vec![], alloc::vec![1, 0, -2]]).unwrap();
        let s = singular_points(&op);
        assert_eq!(s.rational, alloc::vec![rat(0, 1)]);
        let mut xs: Vec<f64> = s.approximate.iter().map(|p| p.0).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(xs.len(), 2);
        assert!((xs[1] - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((xs[0] + core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }
}
