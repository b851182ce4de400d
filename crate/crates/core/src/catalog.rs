//! Operators used throughout the crate and its test suites.

use alloc::vec;

use crate::diffop::ThetaOperator;
use crate::rat;

/// `θ² − α(θ + 1/3)(θ + 2/3)`, the Hesse pencil of plane cubics.
pub fn l_pf() -> ThetaOperator {
    ThetaOperator::hypergeometric("alpha", &[rat(1, 3), rat(2, 3)], &[rat(1, 1)]).expect("valid")
}

/// `θ³ − z(θ + 1/4)(θ + 1/2)(θ + 3/4)`, the mirror quartic K3 family.
pub fn l_k3() -> ThetaOperator {
    ThetaOperator::hypergeometric("z", &[rat(1, 4), rat(1, 2), rat(3, 4)], &[rat(1, 1), rat(1, 1)])
        .expect("valid")
}

/// `θ² − z(θ + 1/8)(θ + 3/8)`, whose symmetric square is [`l_k3`].
pub fn l_triangular() -> ThetaOperator {
    ThetaOperator::hypergeometric("z", &[rat(1, 8), rat(3, 8)], &[rat(1, 1)]).expect("valid")
}

/// `θ² − α(θ + 1/4)(θ + 3/4)`
pub fn l_elliptic() -> ThetaOperator {
    ThetaOperator::hypergeometric("alpha", &[rat(1, 4), rat(3, 4)], &[rat(1, 1)]).expect("valid")
}

/// `θ² − α(θ + 1/6)(θ + 5/6)`, the E8 elliptic family.
pub fn l_e8() -> ThetaOperator {
    ThetaOperator::hypergeometric("alpha", &[rat(1, 6), rat(5, 6)], &[rat(1, 1)]).expect("valid")
}

/// `θ⁴ − z(θ + 1/5)(θ + 2/5)(θ + 3/5)(θ + 4/5)`, the mirror quintic in the
/// rescaled variable `z = 5⁵ψ⁻⁵`.
pub fn l_quintic() -> ThetaOperator {
    ThetaOperator::hypergeometric(
        "z",
        &[rat(1, 5), rat(2, 5), rat(3, 5), rat(4, 5)],
        &[rat(1, 1), rat(1, 1), rat(1, 1)],
    )
    .expect("valid")
}

/// `θ²`
pub fn theta_squared() -> ThetaOperator {
    ThetaOperator::from_int_coeffs("z", &[vec![], vec![], vec![1]]).expect("valid")
}
