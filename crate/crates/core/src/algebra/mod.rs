//! Polynomial arithmetic over ℂ, ℚ and F_p.

pub mod complex;
pub mod fp;
pub mod gf;
pub mod newton;
pub mod ratpoly;
pub mod rational;
pub mod resultant;

pub use complex::{format_complex, parse_complex, roots_complex, ComplexPoly};
pub use fp::FpPoly;
pub use gf::GaloisField;
pub use newton::{newton_polygon, newton_polygon_root_valuations};
pub use rational::{padic_valuation, Place, Rational, Valuation};
pub use resultant::resultant_oracle;
