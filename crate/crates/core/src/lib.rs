//! Generating families, caustics, Maxwell sets and momentary wave fronts.
//!
//! The numerical types are generic over the scalar (`f32` or `f64`); the
//! aliases in [`f64s`] fix the scalar to `f64`, which is what the tests and
//! the command-line tool use.

// `!(a < b)` is used on purpose so that NaN fails the comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

pub mod error;
pub mod fronts;
pub mod genfam;
pub mod geomapps;
pub mod numcore;
pub mod odegallery;
pub mod pdechar;
pub mod real;
pub mod versality;

pub use error::{Error, Result};
pub use real::Real;

pub use fronts::{DiscriminantDecomposition, FrontCurve, FrontSet};
pub use genfam::{CriticalPoint, GeneratingFamily, GraphLikeFamily};
pub use geomapps::surface::ParametricHypersurface;
pub use numcore::{DomainBox, Grid, Matrix, Polynomial, Range};
pub use odegallery::{GalleryFront, IntegralDiagram};
pub use pdechar::{GeometricSolutionSheet, QuasiLinearPDE};
pub use versality::{JetSpace, VersalityReport};

/// Double-precision instances of the generic types.
pub mod f64s {
    pub type GeneratingFamily = crate::genfam::GeneratingFamily<f64>;
    pub type GraphLikeFamily = crate::genfam::GraphLikeFamily<f64>;
    pub type CriticalPoint = crate::genfam::CriticalPoint<f64>;
    pub type FrontCurve = crate::fronts::FrontCurve<f64>;
    pub type FrontSet = crate::fronts::FrontSet<f64>;
    pub type DiscriminantDecomposition = crate::fronts::DiscriminantDecomposition<f64>;
    pub type ParametricHypersurface = crate::geomapps::surface::ParametricHypersurface<f64>;
    pub type QuasiLinearPDE = crate::pdechar::QuasiLinearPDE<f64>;
    pub type GeometricSolutionSheet = crate::pdechar::GeometricSolutionSheet<f64>;
    pub type IntegralDiagram = crate::odegallery::IntegralDiagram<f64>;
    pub type GalleryFront = crate::odegallery::GalleryFront<f64>;
    pub type DomainBox = crate::numcore::DomainBox<f64>;
    pub type Grid = crate::numcore::Grid<f64>;
    pub type Range = crate::numcore::Range<f64>;
    pub type Matrix = crate::numcore::Matrix<f64>;
}
