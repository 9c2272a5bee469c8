//! Closed-form integration over simplices.

mod affine_power;
mod exponential;
mod monomial;
mod polarization;
mod polynomial_methods;
mod series;

pub use affine_power::{
    brion_sum, h_from_vertex_values, integrate_affine_power, lagrange_zero_sum,
    vertex_affine_values, AffinePowerMethod,
};
pub use exponential::{exp_tail_scaled, integrate_exp_affine, ExpIntegral, ExpMethod, EXP_LIMIT};
pub use monomial::{
    integrate_monomial_standard, integrate_one_norm_power, standard_monomial_integral,
    GeneralizedExponent,
};
pub use polarization::integrate_qhomogeneous;
pub use polynomial_methods::{decompose_monomial, integrate_polynomial, PolyMethod};
pub use series::{FormalSeries, Pole, PoleStructure};
