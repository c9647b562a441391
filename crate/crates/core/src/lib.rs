//! Hyperbolic surfaces with geodesic boundary in arc-system coordinates.
//!
//! A surface is a point of Teichmüller space given by the a-lengths of a
//! maximal arc system. From there the crate computes boundary data and
//! widths, the spinal arc system by flips and its inverse, the
//! Weil–Petersson Poisson bivector with its two combinatorial limits, and
//! the flat Jenkins–Strebel surface over a weighted ribbon graph.

pub mod hexagon;
pub mod interpolation;
pub mod io;
pub mod newton;
pub mod perm;
pub mod plane;
pub mod poisson;
pub mod ribbon;
pub mod sample;
pub mod spine;
pub mod strebel;
pub mod surface;

pub use hexagon::{HexError, HexTriple};
pub use interpolation::{family_scan, FamilyScan, ScanError, ScanOptions, ScanRecord};
pub use io::{IoError, SurfaceFile};
pub use newton::NewtonOptions;
pub use perm::Permutation;
pub use poisson::{ArcBivector, KontsevichBivector, PennerForm, PoissonBivector, PoissonError};
pub use ribbon::{Dart, RibbonError, RibbonStructure, SurfaceSignature};
pub use spine::{find_spine, flip, solve_widths, FlipMove, SpineError, SpineOptions, SpineResult, WeightedArcSystem};
pub use strebel::{build_flat_surface, FlatTileComplex, StrebelError, WeightedRibbonGraph};
pub use surface::{BoundaryLayout, DecoratedStructure, MaximalCoordinates, SurfaceError, Widths};
