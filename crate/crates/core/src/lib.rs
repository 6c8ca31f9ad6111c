pub mod error;
pub mod hp;
pub mod logvalue;

pub use error::{Error, Result};
pub use logvalue::{LogSum, LogValue};
pub mod polynomials;

pub use polynomials::{Polynomial, AffineMap};
pub mod faadibruno;
pub mod weights;

pub use weights::WeightSpec;
pub mod grid;
pub mod seminorms;
pub mod dynamics;

pub use grid::GridSpec;
pub mod resolvent;
