use alloc::format;
use alloc::vec;

use num_traits::Zero;

use super::{DerivOperator, ThetaOperator};
use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc};
use crate::Rational;

/// Change of variable `w = φ(z)` for [`pullback`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `w = a·z + b`
    Affine(Rational, Rational),
    /// `w = 1/z`
    Reciprocal,
    /// `w = p(z)`
    Polynomial(Poly),
}

impl Substitution {
    /// `φ` as a rational function of the new variable.
    pub fn as_ratfunc(&self) -> Result<RatFunc> {
        match self {
            Substitution::Affine(a, b) => {
                if a.is_zero() {
                    return Err(Error::UnsupportedSubstitution("affine map with zero slope".into()));
                }
                Ok(RatFunc::from_poly(Poly::new(vec![b.clone(), a.clone()])))
            }
            Substitution::Reciprocal => Ok(RatFunc::new(Poly::one(), Poly::var())),
            Substitution::Polynomial(p) => {
                if p.degree().unwrap_or(0) == 0 {
                    return Err(Error::UnsupportedSubstitution(format!("constant polynomial {p}")));
                }
                Ok(RatFunc::from_poly(p.clone()))
            }
        }
    }

    /// Inverse map when it is again a substitution of this kind.
    pub fn inverse(&self) -> Option<Substitution> {
        match self {
            Substitution::Affine(a, b) if !a.is_zero() => {
                let inv = a.recip();
                Some(Substitution::Affine(inv.clone(), -(b * &inv)))
            }
            Substitution::Reciprocal => Some(Substitution::Reciprocal),
            Substitution::Polynomial(p) if p.degree() == Some(1) => {
                Substitution::Affine(p.coeff(1), p.coeff(0)).inverse()
            }
            _ => None,
        }
    }
}

/// The operator whose solutions are `f∘φ` for the solutions `f` of `L`.
///
/// With `w = φ(z)`, `∂_w = (1/φ'(z))·∂_z`; the ∂-form coefficients of `L` are
/// evaluated at `φ(z)` and the result is returned content-normalized in θ-form.
pub fn pullback(op: &ThetaOperator, phi: &Substitution) -> Result<ThetaOperator> {
    let f = phi.as_ratfunc()?;
    let step = DerivOperator::new(vec![RatFunc::zero(), f.derivative().recip()]);
    let deriv = op.to_deriv();
    let mut acc = DerivOperator::function(RatFunc::zero());
    let mut power = DerivOperator::d_power(0);
    for (j, a) in deriv.coeffs().iter().enumerate() {
        if j > 0 {
            power = step.compose(&power);
        }
        if a.is_zero() {
            continue;
        }
        let num = f.substitute_into(a.num());
        let den = f.substitute_into(a.den());
        acc = acc.add(&power.scale_left(&num.div(&den)));
    }
    ThetaOperator::from_deriv(op.var(), &acc)
}

/// Pullbacks along a chain of substitutions, applied left to right.
pub fn pullback_chain(op: &ThetaOperator, chain: &[Substitution]) -> Result<ThetaOperator> {
    chain.iter().try_fold(op.clone(), |acc, s| pullback(&acc, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat;
    use crate::series::{hypergeom_series, series_compose, TruncatedSeries};

    #[test]
    fn pf_invariant_under_one_minus_alpha() {
        let l = catalog::l_pf();
        let out = pullback(&l, &Substitution::Affine(rat(-1, 1), rat(1, 1))).unwrap();
        assert_eq!(out, l);
    }

    #[test]
    fn theta_under_inversion() {
        let out = pullback(&ThetaOperator::theta("z"), &Substitution::Reciprocal).unwrap();
        // −θ, normalized to positive leading coefficient
        assert_eq!(out, ThetaOperator::theta("z"));
        assert_eq!(out.order(), 1);
    }

    #[test]
    fn affine_round_trip() {
        let phi = Substitution::Affine(rat(3, 2), rat(-1, 5));
        for l in [catalog::l_k3(), catalog::l_elliptic()] {
            let there = pullback(&l, &phi).unwrap();
            let back = pullback(&there, &phi.inverse().unwrap()).unwrap();
            assert_eq!(back, l);
        }
    }

    #[test]
    fn triangular_pulled_back_along_quadratic() {
        // z = 4α(1−α) carries L_triangular to an operator killing ₂F₁(1/4,3/4;1;α)
        let phi = Substitution::Polynomial(Poly::from_ints(&[0, 4, -4]));
        let out = pullback(&catalog::l_triangular(), &phi).unwrap();
        let f = hypergeom_series(&[rat(1, 4), rat(3, 4)], &[rat(1, 1)], 22).unwrap();
        let r = out.apply_series(&f);
        assert!(r.is_zero());
        assert!(r.order() >= 20);
        // the composed series is the same function
        let g = TruncatedSeries::from_ints(&[0, 4, -4], 22);
        let tri = hypergeom_series(&[rat(1, 8), rat(3, 8)], &[rat(1, 1)], 22).unwrap();
        assert_eq!(series_compose(&tri, &g).unwrap(), f);
    }

    #[test]
    fn rejects_constant_maps() {
        assert!(matches!(
            pullback(&catalog::l_pf(), &Substitution::Affine(rat(0, 1), rat(1, 1))),
            Err(Error::UnsupportedSubstitution(_))
        ));
        assert!(matches!(
            pullback(&catalog::l_pf(), &Substitution::Polynomial(Poly::from_ints(&[3]))),
            Err(Error::UnsupportedSubstitution(_))
        ));
    }
}
