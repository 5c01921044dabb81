//! Watertight surface triangulation of a [`Geometry`] at one instant.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{EdgeId, EntityId, FaceId, Geometry, GeometryError, Param};
use crate::scalar::Real;
use crate::triangulate2::{triangulate_conforming, PlanarDomain, TriangulateError};

/// Hard limit on segments per Edge or grid line, against runaway `h`.
const MAX_DIVISIONS: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TessellateError {
    #[error("target edge length must be positive and finite (got {0})")]
    BadLength(f64),
    #[error("target edge length {h} needs {n} divisions on {entity}")]
    TooFine { h: f64, n: usize, entity: EntityId },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("face {face}: {source}")]
    Triangulation { face: u32, source: TriangulateError },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceVertex<T> {
    pub coords: [T; 3],
    pub owner: EntityId,
    pub param: Param<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceTessellation<T> {
    pub time: T,
    pub h: T,
    /// Node vertices, then Edge interiors, then Face interiors, each in entity order.
    pub vertices: Vec<SurfaceVertex<T>>,
    pub node_vertex: Vec<u32>,
    /// Vertex indices along each Edge from its start Node to its end Node.
    pub edge_polylines: Vec<Vec<u32>>,
    /// Triangles per Face, oriented by the surface orientation (outward for
    /// bodies, toward the body for the enclosure).
    pub face_triangles: Vec<Vec<[u32; 3]>>,
    /// Enclosure vertex with the same parameters, for each body vertex, when the
    /// geometry has a radial pairing.
    pub radial_partner: Option<Vec<u32>>,
}

fn divisions(length: f64, h: f64, entity: EntityId) -> Result<usize, TessellateError> {
    let n = (length / h).round().max(1.0);
    if n > MAX_DIVISIONS as f64 {
        return Err(TessellateError::TooFine { h, n: n as usize, entity });
    }
    Ok(n as usize)
}

struct FaceGrid<T> {
    interior: Vec<(T, T)>,
    /// Counter-clockwise in (u, v); boundary vertices by tessellation index,
    /// interior grid point `k` as `INTERIOR_TAG | k`.
    triangles: Vec<[u32; 3]>,
}

const INTERIOR_TAG: u32 = 1 << 31;

impl<T: Real> SurfaceTessellation<T> {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.face_triangles.iter().map(Vec::len).sum()
    }

    /// Parameters of a vertex in the domain of `face` (the vertex must lie on it).
    pub fn face_uv(&self, geom: &Geometry<T>, face: FaceId, vertex: u32) -> Option<(T, T)> {
        let v = &self.vertices[vertex as usize];
        match (v.owner, v.param) {
            (EntityId::Face(f), Param::Face(u, w)) if f == face => Some((u, w)),
            (EntityId::Edge(e), Param::Edge(s)) => geom.edge_uv(e, face, s).ok(),
            (EntityId::Node(n), Param::Node) => geom.node_uv(n, face),
            _ => None,
        }
    }

    /// Boundary loop of a Face (counter-clockwise in (u, v)), each vertex once.
    pub fn face_boundary(&self, geom: &Geometry<T>, face: FaceId) -> Vec<u32> {
        let mut out = Vec::new();
        for (e, fwd) in geom.topology.face_loop(face) {
            let pl = &self.edge_polylines[e.0 as usize];
            if fwd {
                out.extend_from_slice(&pl[..pl.len() - 1]);
            } else {
                out.extend(pl[1..].iter().rev());
            }
        }
        out
    }

    /// Face triangles counter-clockwise in the Face's (u, v) domain.
    pub fn face_triangles_uv(&self, geom: &Geometry<T>, face: FaceId) -> Vec<[u32; 3]> {
        let tris = &self.face_triangles[face.0 as usize];
        if geom.faces[face.0 as usize].reversed {
            tris.iter().map(|t| [t[0], t[2], t[1]]).collect()
        } else {
            tris.clone()
        }
    }

    /// `V - E + F` over the triangles of the given Faces.
    pub fn euler_characteristic(&self, shell: impl IntoIterator<Item = FaceId>) -> i64 {
        let mut verts = HashSet::new();
        let mut edges = HashSet::new();
        let mut faces = 0i64;
        for f in shell {
            for t in &self.face_triangles[f.0 as usize] {
                faces += 1;
                for i in 0..3 {
                    verts.insert(t[i]);
                    let (a, b) = (t[i], t[(i + 1) % 3]);
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
        verts.len() as i64 - edges.len() as i64 + faces
    }

    /// Verifies the watertightness and orientation contract against the geometry.
    pub fn check_watertight(&self, geom: &Geometry<T>) -> Result<(), String> {
        for f in geom.topology.face_ids() {
            let mut directed: HashMap<(u32, u32), usize> = HashMap::new();
            for t in self.face_triangles_uv(geom, f) {
                for i in 0..3 {
                    *directed.entry((t[i], t[(i + 1) % 3])).or_default() += 1;
                }
            }
            let boundary = self.face_boundary(geom, f);
            let n = boundary.len();
            let bset: HashSet<(u32, u32)> = (0..n).map(|i| (boundary[i], boundary[(i + 1) % n])).collect();
            for (&(a, b), &c) in &directed {
                if c != 1 {
                    return Err(format!("face {}: directed edge {a}-{b} used {c} times", f.0));
                }
                let twin = directed.contains_key(&(b, a));
                if twin == bset.contains(&(a, b)) {
                    return Err(format!("face {}: edge {a}-{b} has wrong multiplicity", f.0));
                }
            }
            for e in &bset {
                if !directed.contains_key(e) {
                    return Err(format!("face {}: boundary segment {:?} missing", f.0, e));
                }
            }
        }
        Ok(())
    }
}

/// Triangulates every Face of `geom` at time `t` with target edge length `h`.
pub fn tessellate<T: Real>(geom: &Geometry<T>, t: T, h: T) -> Result<SurfaceTessellation<T>, TessellateError> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(TessellateError::BadLength(h.as_f64()));
    }
    geom.check_time(t)?;
    let topo = &geom.topology;
    let hf = h.as_f64();
    let pairing = geom.radial;
    let is_mirror_edge = |e: u32| pairing.is_some_and(|p| geom.shells[p.enclosure].edges.contains(&e));
    let is_mirror_face = |f: u32| pairing.is_some_and(|p| geom.shells[p.enclosure].faces.contains(&f));

    let mut vertices = Vec::new();
    let node_vertex: Vec<u32> = topo
        .nodes()
        .map(|n| {
            vertices.push(SurfaceVertex { coords: geom.eval_node(n, t), owner: EntityId::Node(n), param: Param::Node });
            (vertices.len() - 1) as u32
        })
        .collect();

    // Edge samples: independent per Edge, mirrored Edges copy their partners.
    let mut edge_s: Vec<Option<Vec<T>>> = topo
        .edge_ids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&e| {
            if is_mirror_edge(e.0) {
                return Ok(None);
            }
            let m = divisions(geom.edge_length(e, t).as_f64(), hf, EntityId::Edge(e))?;
            Ok(Some(geom.edge_samples(e, t, m)))
        })
        .collect::<Result<_, TessellateError>>()?;
    if let Some(p) = pairing {
        for e in geom.shells[p.enclosure].edges.clone() {
            edge_s[e as usize] = edge_s[(e - p.edge_offset) as usize].clone();
        }
    }
    let mut edge_polylines = Vec::with_capacity(topo.edge_count());
    for (e, s) in edge_s.iter().enumerate() {
        let s = s.as_ref().expect("all edges sampled");
        let et = &topo.edges[e];
        let mut pl = vec![node_vertex[et.nodes[0].0 as usize]];
        for &si in &s[1..s.len() - 1] {
            let eid = EdgeId(e as u32);
            vertices.push(SurfaceVertex { coords: geom.eval_edge(eid, si, t), owner: EntityId::Edge(eid), param: Param::Edge(si) });
            pl.push((vertices.len() - 1) as u32);
        }
        pl.push(node_vertex[et.nodes[1].0 as usize]);
        edge_polylines.push(pl);
    }

    let partial = SurfaceTessellation {
        time: t,
        h,
        vertices,
        node_vertex,
        edge_polylines,
        face_triangles: Vec::new(),
        radial_partner: None,
    };

    let grids: Vec<Option<FaceGrid<T>>> = topo
        .face_ids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&f| if is_mirror_face(f.0) { Ok(None) } else { face_grid(geom, &partial, f, t, hf).map(Some) })
        .collect::<Result<_, TessellateError>>()?;

    let SurfaceTessellation { mut vertices, node_vertex, edge_polylines, .. } = partial;
    let mut face_triangles = vec![Vec::new(); topo.face_count()];
    let vertex_of = |tri: [u32; 3], base: u32| tri.map(|i| if i & INTERIOR_TAG != 0 { base + (i & !INTERIOR_TAG) } else { i });

    let mut body_grids: HashMap<u32, (u32, Vec<(T, T)>, Vec<[u32; 3]>)> = HashMap::new();
    for f in topo.face_ids() {
        if let Some(grid) = &grids[f.0 as usize] {
            let base = vertices.len() as u32;
            for &(u, v) in &grid.interior {
                vertices.push(SurfaceVertex { coords: geom.eval_face(f, u, v, t), owner: EntityId::Face(f), param: Param::Face(u, v) });
            }
            let tris: Vec<[u32; 3]> = grid.triangles.iter().map(|&tri| vertex_of(tri, base)).collect();
            body_grids.insert(f.0, (base, grid.interior.clone(), tris.clone()));
            face_triangles[f.0 as usize] = tris;
        }
    }

    let mut radial_partner = None;
    if let Some(p) = pairing {
        let nv_body = vertices.len();
        let mut partner = vec![u32::MAX; nv_body];
        for n in geom.shells[p.body].nodes.clone() {
            partner[node_vertex[n as usize] as usize] = node_vertex[(n + p.node_offset) as usize];
        }
        for e in geom.shells[p.body].edges.clone() {
            let (a, b) = (&edge_polylines[e as usize], &edge_polylines[(e + p.edge_offset) as usize]);
            for (x, y) in a.iter().zip(b) {
                partner[*x as usize] = *y;
            }
        }
        for f in geom.shells[p.enclosure].faces.clone() {
            let body = f - p.face_offset;
            let (bbase, interior, tris) = body_grids[&body].clone();
            let base = vertices.len() as u32;
            let ff = FaceId(f);
            for (k, &(u, v)) in interior.iter().enumerate() {
                vertices.push(SurfaceVertex { coords: geom.eval_face(ff, u, v, t), owner: EntityId::Face(ff), param: Param::Face(u, v) });
                partner[(bbase as usize) + k] = base + k as u32;
            }
            face_triangles[f as usize] = tris.iter().map(|tri| tri.map(|i| partner[i as usize])).collect();
        }
        radial_partner = Some(partner);
    }

    // store with surface orientation
    for f in topo.face_ids() {
        if geom.faces[f.0 as usize].reversed {
            for tri in &mut face_triangles[f.0 as usize] {
                tri.swap(1, 2);
            }
        }
    }
    Ok(SurfaceTessellation { time: t, h, vertices, node_vertex, edge_polylines, face_triangles, radial_partner })
}

/// Interior grid and conforming triangulation of one Face.
fn face_grid<T: Real>(geom: &Geometry<T>, tess: &SurfaceTessellation<T>, f: FaceId, t: T, h: f64) -> Result<FaceGrid<T>, TessellateError> {
    let fg = &geom.faces[f.0 as usize];
    let two = T::lit(2.0);
    let (umid, vmid) = ((fg.u[0] + fg.u[1]) / two, (fg.v[0] + fg.v[1]) / two);
    let len_u = [fg.v[0], vmid, fg.v[1]].into_iter().map(|v| geom.iso_length(f, true, v, t).as_f64()).fold(0.0, f64::max);
    let len_v = [fg.u[0], umid, fg.u[1]].into_iter().map(|u| geom.iso_length(f, false, u, t).as_f64()).fold(0.0, f64::max);
    let nu = divisions(len_u, h, EntityId::Face(f))?;
    let nv = divisions(len_v, h, EntityId::Face(f))?;
    let us = if nu > 1 { geom.iso_samples(f, true, vmid, t, nu) } else { vec![fg.u[0], fg.u[1]] };
    let vs = if nv > 1 { geom.iso_samples(f, false, umid, t, nv) } else { vec![fg.v[0], fg.v[1]] };
    let mut interior = Vec::with_capacity((nu - 1) * (nv - 1));
    for &v in &vs[1..nv] {
        for &u in &us[1..nu] {
            interior.push((u, v));
        }
    }
    let boundary = tess.face_boundary(geom, f);
    let domain = PlanarDomain {
        min: [fg.u[0].as_f64(), fg.v[0].as_f64()],
        max: [fg.u[1].as_f64(), fg.v[1].as_f64()],
        boundary: boundary
            .iter()
            .map(|&vid| {
                let (u, v) = tess.face_uv(geom, f, vid).expect("boundary vertex on face");
                ([u.as_f64(), v.as_f64()], vid as u64)
            })
            .collect(),
        // interior ids sort after every boundary id, in grid order
        interior: interior
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| ([u.as_f64(), v.as_f64()], (INTERIOR_TAG as u64) | k as u64))
            .collect(),
    };
    let tri = triangulate_conforming(&domain).map_err(|source| TessellateError::Triangulation { face: f.0, source })?;
    let triangles = tri.id_triangles().map(|t| t.map(|id| id as u32)).collect();
    Ok(FaceGrid { interior, triangles })
}
