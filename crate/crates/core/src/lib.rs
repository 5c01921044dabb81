//! Spacetime boundary meshes of moving analytic bodies.
//!
//! Surfaces are tessellated at each time step and consecutive tessellations
//! are connected through the parameter space of every Node, Edge and Face,
//! giving a conforming tetrahedral mesh of the 3-manifold swept in (x, y, z, t).
//! The crate also checks such meshes (manifoldness, 3-volume), slices them by
//! hyperplanes and reads and writes them.
//!
//! Geometry and meshes are generic over [`Real`] (`f32` or `f64`); the aliases
//! below name the usual instantiations.

pub mod bench;
pub mod geometry;
pub mod linalg;
pub mod mesh4;
pub mod meshio;
pub mod predicates;
pub mod quadrature;
pub mod scalar;
pub mod slab;
pub mod slicer;
pub mod tessellator;
pub mod triangulate2;

pub use scalar::Real;

pub type Geometry64 = geometry::Geometry<f64>;
pub type Geometry32 = geometry::Geometry<f32>;
pub type SpacetimeMesh64 = mesh4::SpacetimeMesh<f64>;
pub type SpacetimeMesh32 = mesh4::SpacetimeMesh<f32>;
pub type SliceResult64 = slicer::SliceResult<f64>;
pub type Hyperplane64 = slicer::Hyperplane<f64>;
