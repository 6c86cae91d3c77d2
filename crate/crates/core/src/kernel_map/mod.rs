//! Numerical side of the kernel map: quadrature, the 2-body integrals and the
//! `N`-body wedge integrals checked against anyon wavefunctions.

pub mod integrals;
pub mod intertwining;
pub mod mapping;
pub mod quadrature;
pub mod wedge;

pub use integrals::{
    boundary_term_check, gauss_integral_2body_free, kernel_integral_2body, BoundaryReport,
};
pub use intertwining::{intertwiner_constant_check, intertwining_relation_check, ConstantReport};
pub use mapping::{
    sample_z, vandermonde_integral, verify_mapping, MappingReport, VandermondeReport,
};
pub use quadrature::{QuadratureGrid, Scheme};
pub use wedge::{wedge_integrate, Integrand, ProductIntegrand, WedgeConfig};
