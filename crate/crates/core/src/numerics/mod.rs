//! Shared numerical kernels: quadrature, extrapolation, cubic roots and the
//! special functions used by the thermal kernels.

pub mod cubic;
pub mod quadrature;
pub mod richardson;
pub mod special;

pub use cubic::cubic_roots;
pub use quadrature::{
    adaptive_integrate, integrate_sqrt_lower, integrate_sqrt_upper, integrate_to_infinity,
    QuadResult, QuadratureSpec,
};
pub use richardson::{
    central_derivative, five_point_derivative, richardson_extrapolate, Extrapolated,
};
