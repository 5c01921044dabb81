//! Spacetime assembly: connects consecutive surface tessellations through
//! entity parameter spaces and closes the result with caps.

mod caps;
mod face;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

pub use caps::{build_caps, split_prism};

use crate::geometry::{EdgeId, FaceId, Geometry, NodeId, Param};
use crate::linalg::lerp1;
use crate::mesh4::{CapMode, Element, SpacetimeMesh, CAP_FINAL, CAP_INITIAL};
use crate::predicates::P3;
use crate::scalar::Real;
use crate::tessellator::{tessellate, SurfaceTessellation, TessellateError};
use crate::triangulate2::{triangulate_conforming, PlanarDomain, TriangulateError};

use face::PrismBoundary;

/// Placeholder id for a Face-slab's Steiner apex until global ids are assigned.
pub(crate) const APEX: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("slab count must be at least 1")]
    NoSlabs,
    #[error("tessellation at time step {step}: {source}")]
    Tessellate { step: usize, source: TessellateError },
    #[error("edge {edge}, slab {slab}: {source}")]
    Strip { edge: u32, slab: usize, source: TriangulateError },
    #[error("face {face}, slab {slab}: {msg}")]
    FaceSlab { face: u32, slab: usize, msg: String },
    #[error("unsupported caps: {0}")]
    UnsupportedCaps(String),
    #[error("degenerate cap prism: {0}")]
    Cap(String),
    #[error("mesh exceeds u32 vertex indexing ({0} vertices)")]
    Capacity(usize),
}

/// How a Face-slab prism is filled with tetrahedra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FaceMeshing {
    /// Delaunay tetrahedralization of the two vertex layers; no added vertices.
    #[default]
    Delaunay,
    /// One Steiner apex per Face-slab, coned to every boundary triangle.
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuildOptions<T> {
    pub slabs: usize,
    pub h: T,
    pub caps: CapMode,
    pub face_meshing: FaceMeshing,
}

/// A vertex added inside a Face-slab, at Face parameters `(u, v)` and slab fraction `w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteinerVertex4<T> {
    pub vertex: u32,
    pub face: FaceId,
    pub slab: usize,
    pub u: T,
    pub v: T,
    pub w: T,
    pub coords: [T; 4],
}

impl<T: Real> SteinerVertex4<T> {
    /// `(1 - w) x(u, v, t_lo) + w x(u, v, t_hi)`, at time `(1 - w) t_lo + w t_hi`.
    pub fn embed(geom: &Geometry<T>, face: FaceId, u: T, v: T, w: T, t: [T; 2]) -> [T; 4] {
        let a = geom.eval_face(face, u, v, t[0]);
        let b = geom.eval_face(face, u, v, t[1]);
        [lerp1(a[0], b[0], w), lerp1(a[1], b[1], w), lerp1(a[2], b[2], w), lerp1(t[0], t[1], w)]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub tessellation: Duration,
    pub nodes_edges: Duration,
    pub faces: Duration,
    pub caps: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.tessellation + self.nodes_edges + self.faces + self.caps
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildReport<T> {
    pub times: Vec<T>,
    /// Surface vertex count per time step.
    pub layer_vertices: Vec<usize>,
    pub steiner: Vec<SteinerVertex4<T>>,
    pub timings: PhaseTimings,
}

/// `n + 1` equispaced time steps with both ends exact.
pub fn slab_times<T: Real>(time: [T; 2], n: usize) -> Vec<T> {
    let [t0, tf] = time;
    (0..=n)
        .map(|k| if k == n { tf } else { t0 + (tf - t0) * T::lit(k as f64) / T::lit(n as f64) })
        .collect()
}

/// Two consecutive tessellations and their global vertex offsets.
#[derive(Clone, Copy, Debug)]
pub struct Slab<'a, T> {
    pub index: usize,
    pub t: [T; 2],
    pub bottom: &'a SurfaceTessellation<T>,
    pub top: &'a SurfaceTessellation<T>,
    pub offset: [u32; 2],
}

impl<T: Real> Slab<'_, T> {
    fn layer(&self, top: bool) -> (&SurfaceTessellation<T>, u32) {
        if top {
            (self.top, self.offset[1])
        } else {
            (self.bottom, self.offset[0])
        }
    }
}

pub fn connect_node<T: Real>(slab: &Slab<'_, T>, node: NodeId) -> Element<2> {
    let n = node.0 as usize;
    Element::new(
        [slab.offset[0] + slab.bottom.node_vertex[n], slab.offset[1] + slab.top.node_vertex[n]],
        node.0,
    )
}

/// Triangulates the Edge's `(s, t)` rectangle between the two polylines.
pub fn connect_edge<T: Real>(geom: &Geometry<T>, slab: &Slab<'_, T>, edge: EdgeId) -> Result<Vec<Element<3>>, BuildError> {
    let [s_a, s_b] = geom.edge_ranges[edge.0 as usize];
    let [t_lo, t_hi] = slab.t.map(|t| t.as_f64());
    let layer_points = |top: bool| -> Vec<([f64; 2], u64)> {
        let (tess, off) = slab.layer(top);
        let pl = &tess.edge_polylines[edge.0 as usize];
        let last = pl.len() - 1;
        pl.iter()
            .enumerate()
            .map(|(i, &v)| {
                let s = match tess.vertices[v as usize].param {
                    Param::Edge(s) => s,
                    _ if i == 0 => s_a,
                    _ if i == last => s_b,
                    _ => unreachable!("edge polyline interior vertex without edge parameter"),
                };
                ([s.as_f64(), if top { t_hi } else { t_lo }], u64::from(off + v))
            })
            .collect()
    };
    let mut boundary = layer_points(false);
    boundary.extend(layer_points(true).into_iter().rev());
    let domain = PlanarDomain {
        min: [s_a.as_f64(), t_lo],
        max: [s_b.as_f64(), t_hi],
        boundary,
        interior: Vec::new(),
    };
    let tri = triangulate_conforming(&domain).map_err(|source| BuildError::Strip { edge: edge.0, slab: slab.index, source })?;
    Ok(tri.id_triangles().map(|t| Element::new(t.map(|i| i as u32), edge.0)).collect())
}

/// Tetrahedra of one Face-slab.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceSlab<T> {
    /// Oriented consistently with the surface orientation; a Steiner apex
    /// appears as the placeholder id `u32::MAX` until assembly.
    pub tets: Vec<[u32; 4]>,
    /// Steiner apex `(u, v, w, coords)` when coned.
    pub apex: Option<(T, T, T, [T; 4])>,
}

/// Fills the `(u, v, t)` prism of a Face-slab. `strips` holds the triangles of
/// every Edge for this slab, indexed by Edge id.
pub fn connect_face<T: Real>(
    geom: &Geometry<T>,
    slab: &Slab<'_, T>,
    face: FaceId,
    strips: &[Vec<Element<3>>],
    meshing: FaceMeshing,
) -> Result<FaceSlab<T>, BuildError> {
    let fg = &geom.faces[face.0 as usize];
    let err = |msg: String| BuildError::FaceSlab { face: face.0, slab: slab.index, msg };
    let mut coords: HashMap<u32, P3> = HashMap::new();
    let mut layers: [Vec<[u32; 3]>; 2] = [Vec::new(), Vec::new()];
    for (top, layer) in layers.iter_mut().enumerate() {
        let (tess, off) = slab.layer(top == 1);
        let t = slab.t[top].as_f64();
        for tri in tess.face_triangles_uv(geom, face) {
            for &v in &tri {
                let (u, w) = tess
                    .face_uv(geom, face, v)
                    .ok_or_else(|| err(format!("vertex {v} does not lie on the face")))?;
                coords.insert(off + v, [u.as_f64(), w.as_f64(), t]);
            }
            layer.push(tri.map(|v| off + v));
        }
    }
    let walls: Vec<[u32; 3]> = geom.topology.faces[face.0 as usize]
        .sides
        .iter()
        .flat_map(|e| strips[e.0 as usize].iter().map(|t| t.vertices))
        .collect();
    let [u0, u1] = fg.u.map(|x| x.as_f64());
    let [v0, v1] = fg.v.map(|x| x.as_f64());
    let [t_lo, t_hi] = slab.t.map(|x| x.as_f64());
    let prism = PrismBoundary {
        coords: &coords,
        bottom: &layers[0],
        top: &layers[1],
        walls: &walls,
        volume: (u1 - u0) * (v1 - v0) * (t_hi - t_lo),
    };
    let (mut tets, apex) = match meshing {
        FaceMeshing::Delaunay => (prism.delaunay().map_err(err)?, None),
        FaceMeshing::Cone => {
            let half = T::lit(0.5);
            let uc = lerp1(fg.u[0], fg.u[1], half);
            let vc = lerp1(fg.v[0], fg.v[1], half);
            let p = SteinerVertex4::embed(geom, face, uc, vc, half, slab.t);
            let tets = prism.cone([uc.as_f64(), vc.as_f64(), p[3].as_f64()]).map_err(err)?;
            (tets, Some((uc, vc, half, p)))
        }
    };
    if fg.reversed {
        for t in &mut tets {
            t.swap(0, 1);
        }
    }
    Ok(FaceSlab { tets, apex })
}

/// Builds the full spacetime mesh of `geom`.
pub fn build_spacetime_mesh<T: Real>(
    geom: &Geometry<T>,
    opts: &BuildOptions<T>,
) -> Result<(SpacetimeMesh<T>, BuildReport<T>), BuildError> {
    if opts.slabs == 0 {
        return Err(BuildError::NoSlabs);
    }
    if opts.caps == CapMode::Closed && geom.radial.is_none() {
        return Err(BuildError::UnsupportedCaps(
            "closed caps need a body with a radially paired enclosure".into(),
        ));
    }
    let mut timings = PhaseTimings::default();

    let clock = Instant::now();
    let times = slab_times(geom.time, opts.slabs);
    let layers: Vec<SurfaceTessellation<T>> = times
        .par_iter()
        .enumerate()
        .map(|(step, &t)| tessellate(geom, t, opts.h).map_err(|source| BuildError::Tessellate { step, source }))
        .collect::<Result<_, _>>()?;
    timings.tessellation = clock.elapsed();

    let mut offsets = Vec::with_capacity(layers.len());
    let mut total = 0usize;
    for l in &layers {
        offsets.push(total as u32);
        total += l.vertex_count();
        if total >= u32::MAX as usize {
            return Err(BuildError::Capacity(total));
        }
    }
    let mut mesh = SpacetimeMesh::new();
    for (l, &t) in layers.iter().zip(&times) {
        for v in &l.vertices {
            mesh.push_vertex([v.coords[0], v.coords[1], v.coords[2], t], false);
        }
    }
    let slabs: Vec<Slab<'_, T>> = (0..opts.slabs)
        .map(|k| Slab {
            index: k,
            t: [times[k], times[k + 1]],
            bottom: &layers[k],
            top: &layers[k + 1],
            offset: [offsets[k], offsets[k + 1]],
        })
        .collect();

    let clock = Instant::now();
    let strips: Vec<Vec<Vec<Element<3>>>> = slabs
        .par_iter()
        .map(|s| geom.topology.edge_ids().map(|e| connect_edge(geom, s, e)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    for s in &slabs {
        mesh.segments.extend(geom.topology.nodes().map(|n| connect_node(s, n)));
    }
    for slab_strips in &strips {
        for strip in slab_strips {
            mesh.triangles.extend_from_slice(strip);
        }
    }
    timings.nodes_edges = clock.elapsed();

    let clock = Instant::now();
    let work: Vec<(usize, FaceId)> = (0..opts.slabs).flat_map(|k| geom.topology.face_ids().map(move |f| (k, f))).collect();
    let face_slabs: Vec<FaceSlab<T>> = work
        .par_iter()
        .map(|&(k, f)| connect_face(geom, &slabs[k], f, &strips[k], opts.face_meshing))
        .collect::<Result<_, _>>()?;
    let mut steiner = Vec::new();
    for (&(k, f), fs) in work.iter().zip(&face_slabs) {
        let apex_id = fs.apex.map(|(u, v, w, p)| {
            let id = mesh.push_vertex(p, true);
            steiner.push(SteinerVertex4 { vertex: id, face: f, slab: k, u, v, w, coords: p });
            id
        });
        mesh.tets.extend(fs.tets.iter().map(|t| {
            Element::new(t.map(|i| if i == APEX { apex_id.expect("coned face-slab has an apex") } else { i }), f.0)
        }));
    }
    if mesh.vertices.len() >= u32::MAX as usize {
        return Err(BuildError::Capacity(mesh.vertices.len()));
    }
    timings.faces = clock.elapsed();

    let clock = Instant::now();
    if opts.caps == CapMode::Closed {
        let n = opts.slabs;
        let (initial, fin) = rayon::join(
            || build_caps(geom, &layers[0], offsets[0], CAP_INITIAL),
            || build_caps(geom, &layers[n], offsets[n], CAP_FINAL),
        );
        mesh.tets.extend(initial?);
        mesh.tets.extend(fin?);
    }
    timings.caps = clock.elapsed();

    let report = BuildReport { layer_vertices: layers.iter().map(|l| l.vertex_count()).collect(), times, steiner, timings };
    Ok((mesh, report))
}

