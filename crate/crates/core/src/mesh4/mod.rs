//! 4D mesh data model, validation and measures.

mod kuhn;
mod manifold;
mod measure;
mod volume;

use thiserror::Error;

pub use kuhn::{kuhn_pentatopes, pentatope_boundary_tets};
pub use manifold::{check_manifold, ManifoldMode, ManifoldReport};
pub use measure::{mesh_volume, pentatope_measure4, tet_measure3, tet_normal, VolumeReport};
pub use volume::{expected_volume, hcs, hct};

use crate::scalar::Real;

/// Tag of the tets closing the mesh at the initial time.
pub const CAP_INITIAL: u32 = u32::MAX - 1;
/// Tag of the tets closing the mesh at the final time.
pub const CAP_FINAL: u32 = u32::MAX;

/// Whether the spacetime boundary is closed by cap volumes at both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CapMode {
    Closed,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element<const N: usize> {
    pub vertices: [u32; N],
    pub tag: u32,
}

impl<const N: usize> Element<N> {
    pub fn new(vertices: [u32; N], tag: u32) -> Self {
        Element { vertices, tag }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeshError {
    #[error("{kind} {index} references vertex {vertex} (vertex count {count})")]
    IdOutOfRange { kind: &'static str, index: usize, vertex: u32, count: usize },
    #[error("{kind} {index} repeats vertex {vertex}")]
    Degenerate { kind: &'static str, index: usize, vertex: u32 },
    #[error("steiner flags ({flags}) do not match vertex count ({count})")]
    FlagMismatch { flags: usize, count: usize },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpacetimeMesh<T> {
    /// (x, y, z, t)
    pub vertices: Vec<[T; 4]>,
    pub steiner: Vec<bool>,
    pub tets: Vec<Element<4>>,
    /// Traced Edge surfaces.
    pub triangles: Vec<Element<3>>,
    /// Traced Node curves.
    pub segments: Vec<Element<2>>,
    pub pentatopes: Vec<Element<5>>,
}

fn check_elements<const N: usize>(kind: &'static str, elems: &[Element<N>], count: usize) -> Result<(), MeshError> {
    for (index, e) in elems.iter().enumerate() {
        for (i, &v) in e.vertices.iter().enumerate() {
            if v as usize >= count {
                return Err(MeshError::IdOutOfRange { kind, index, vertex: v, count });
            }
            if e.vertices[..i].contains(&v) {
                return Err(MeshError::Degenerate { kind, index, vertex: v });
            }
        }
    }
    Ok(())
}

impl<T: Real> SpacetimeMesh<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_vertex(&mut self, p: [T; 4], steiner: bool) -> u32 {
        self.vertices.push(p);
        self.steiner.push(steiner);
        (self.vertices.len() - 1) as u32
    }

    pub fn steiner_count(&self) -> usize {
        self.steiner.iter().filter(|&&s| s).count()
    }

    /// Ids in range and no repeated vertex inside an element.
    pub fn validate(&self) -> Result<(), MeshError> {
        let n = self.vertices.len();
        if self.steiner.len() != n {
            return Err(MeshError::FlagMismatch { flags: self.steiner.len(), count: n });
        }
        check_elements("tetrahedron", &self.tets, n)?;
        check_elements("triangle", &self.triangles, n)?;
        check_elements("segment", &self.segments, n)?;
        check_elements("pentatope", &self.pentatopes, n)
    }

    /// Axis-aligned bounds `(min, max)`, or `None` for an empty mesh.
    pub fn bounding_box(&self) -> Option<([T; 4], [T; 4])> {
        let first = *self.vertices.first()?;
        let mut lo = first;
        let mut hi = first;
        for p in &self.vertices {
            for i in 0..4 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }

    /// Tets including the boundary tets of every pentatope.
    pub fn all_tets(&self) -> Vec<Element<4>> {
        let mut out = self.tets.clone();
        for p in &self.pentatopes {
            out.extend(pentatope_boundary_tets(p.vertices).into_iter().map(|t| Element::new(t, p.tag)));
        }
        out
    }
}
