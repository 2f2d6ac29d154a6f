#![no_std]
extern crate alloc;

pub mod bounds;
pub mod error;
pub mod harmonics;
pub mod hodge;
pub mod hopf;
pub mod linalg;
pub mod maps;
pub mod poly;
pub mod scalar;
pub mod sphere;
pub mod wilson;

pub use error::{Error, Result};
pub use poly::{Monomial, MultiPoly};
pub use scalar::{Coeff, GaussianRational, Rational};
pub use sphere::{rational_sphere_points, SphereContext};
