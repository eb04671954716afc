//! Univariate and multivariate polynomials over runtime fields.

pub mod identity;
pub mod multi;
pub mod parse;
pub mod uni;

pub use identity::{is_identically_zero, schwartz_zippel, IdentityTest};
pub use multi::{hessian, monomials_of_degree, Monomial, MultiPoly};
pub use parse::{format_polynomial, parse_polynomial, reduce_mod_p};
pub use uni::{univariate_roots, Root, RootValue, UniPoly};
