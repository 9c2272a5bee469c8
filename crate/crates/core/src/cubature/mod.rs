//! Numerical integration rules on simplices and cones, plus a Monte-Carlo oracle.

mod apply;
mod jacobi;
mod rules;

pub use apply::{apply_rule, apply_rule_spec, monte_carlo_integrate, neumaier_sum, MonteCarloEstimate};
pub use jacobi::{
    gauss_jacobi_rule, jacobi_derivative, jacobi_polynomial, radial_rule, Jacobi1DRule, JacobiDomain,
};
pub use rules::{
    conical_product_rule, cone_product_rule, exact_weight_sum, grundmann_moller_rule,
    standard_volume, transplant, transplant_exact, CubatureRule, RuleRegion,
};
