pub mod field;
pub mod groebner;
pub mod ideal;
pub mod intmat;
pub mod matrix;
pub mod monomial;
pub mod poly;

pub use field::{Field, Scalar};
pub use groebner::GroebnerConfig;
pub use ideal::PolyIdeal;
pub use intmat::IntMatrix;
pub use matrix::{FieldMatrix, PolyMatrix};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{MultiPoly, Ring};
