//! Gegenbauer and adjacent Jacobi families for the measure
//! `dμ(t) ∝ (1 - t^2)^{(n-3)/2} dt` on `[-1, 1]`.

mod family;
mod gegenbauer;
mod quadrature;

pub use family::{
    adjacent10_family, adjacent10_norm, adjacent10_recurrence, adjacent11_family,
    gegenbauer_family, FamilyKind, FamilyParams, OrthoFamily,
};
pub(crate) use family::polys_from_recurrence;
pub use gegenbauer::{
    expand_gegenbauer, gegenbauer_eval, gegenbauer_norm, gegenbauer_poly, gegenbauer_value,
    is_positive_definite, pd_verdict, GegenbauerExpansion, PdCheck, PD_TOLERANCE,
};
pub(crate) use gegenbauer::{check_dimension, serialize_reals};
pub use quadrature::{
    gauss_rule, integrate_mu, lagrange_weights, mu_moments, radau_right_rule, BaseQuadrature,
};
