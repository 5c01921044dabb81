//! Hyperplane slicing of 4D simplicial meshes by marching-tetrahedra tables.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::linalg::{cross, dot, norm, scale, sub};
use crate::mesh4::SpacetimeMesh;
use crate::scalar::Real;

/// Wireframe altitude that keeps a suppressed quad diagonal from being drawn.
pub const HIDDEN_ALTITUDE: f64 = 1e4;

/// Tet edges as vertex pairs, in table order.
pub const EDGE_ENDPOINTS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Slot of each of the 6 expanded vertices, per shape (none, triangle, quad).
pub const V2E: [usize; 18] = [0, 0, 0, 0, 0, 0, 0, 1, 2, 0, 0, 0, 0, 1, 2, 1, 3, 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    None = 0,
    Triangle = 1,
    Quad = 2,
}

/// Marching-tetrahedra lookup tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceTables {
    /// Intersected edge per slot; `-1` marks an empty case.
    pub case_edges: [[i8; 4]; 16],
    pub edge_endpoints: [[usize; 2]; 6],
    pub shape_of_case: [Shape; 16],
    pub v2e: [usize; 18],
}

/// Case code: bit `i` set iff vertex `i` has negative signed distance.
pub fn case_code(d: [f64; 4]) -> usize {
    (0..4).filter(|&i| d[i] < 0.0).map(|i| 1 << i).sum()
}

/// Reference-tet clipping oracle: intersection points of the plane `d = 0`
/// with each tet edge whose endpoints fall on different sides.
pub fn clip_oracle<const D: usize>(p: [[f64; D]; 4], d: [f64; 4]) -> Vec<(usize, [f64; D])> {
    EDGE_ENDPOINTS
        .iter()
        .enumerate()
        .filter(|(_, [a, b])| (d[*a] < 0.0) != (d[*b] < 0.0))
        .map(|(e, &[a, b])| {
            let q = std::array::from_fn(|k| (d[b] * p[a][k] - d[a] * p[b][k]) / (d[b] - d[a]));
            (e, q)
        })
        .collect()
}

/// Enumerates all 16 sign patterns on the reference tet and orders each cut
/// polygon counter-clockwise about the gradient of `d`, starting from its
/// smallest edge.
pub fn derive_tables() -> SliceTables {
    let p = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut case_edges = [[-1i8; 4]; 16];
    let mut shape_of_case = [Shape::None; 16];
    for r in 0..16 {
        let d: [f64; 4] = std::array::from_fn(|i| if r & (1 << i) != 0 { -1.0 } else { 1.0 });
        let cut = clip_oracle(p, d);
        if cut.is_empty() {
            continue;
        }
        // linear d on the reference tet has gradient (d1 - d0, d2 - d0, d3 - d0)
        let g = [d[1] - d[0], d[2] - d[0], d[3] - d[0]];
        let n = cut.len() as f64;
        let c = cut.iter().fold([0.0; 3], |acc, (_, q)| [acc[0] + q[0] / n, acc[1] + q[1] / n, acc[2] + q[2] / n]);
        let a = sub(cut[0].1, c);
        let angle = |q: [f64; 3]| {
            let b = sub(q, c);
            let th = dot(g, cross(a, b)).atan2(dot(a, b));
            if th < 0.0 { th + std::f64::consts::TAU } else { th }
        };
        let mut ring: Vec<(f64, usize)> = cut.iter().map(|(e, q)| (angle(*q), *e)).collect();
        ring.sort_by(|x, y| x.0.total_cmp(&y.0));
        let e: Vec<i8> = ring.iter().map(|x| x.1 as i8).collect();
        if e.len() == 3 {
            case_edges[r] = [e[0], e[1], e[2], e[2]];
            shape_of_case[r] = Shape::Triangle;
        } else {
            case_edges[r] = [e[0], e[1], e[3], e[2]];
            shape_of_case[r] = Shape::Quad;
        }
    }
    let tables = SliceTables { case_edges, edge_endpoints: EDGE_ENDPOINTS, shape_of_case, v2e: V2E };
    validate_tables(&tables).expect("derived tables satisfy their invariants");
    tables
}

/// Structural checks on a table set.
pub fn validate_tables(t: &SliceTables) -> Result<(), String> {
    if t.v2e != V2E || t.edge_endpoints != EDGE_ENDPOINTS {
        return Err("v2e or edge endpoint table differs from the reference".into());
    }
    let edge_set = |r: usize| {
        let mut e: Vec<i8> = t.case_edges[r].iter().copied().filter(|&x| x >= 0).collect();
        e.sort_unstable();
        e.dedup();
        e
    };
    let mut empty = 0;
    for r in 0..16 {
        let pop = (r as u32).count_ones();
        let want = match pop {
            0 | 4 => Shape::None,
            2 => Shape::Quad,
            _ => Shape::Triangle,
        };
        if t.shape_of_case[r] != want {
            return Err(format!("case {r}: shape {:?}, expected {want:?}", t.shape_of_case[r]));
        }
        if edge_set(r) != edge_set(15 - r) {
            return Err(format!("cases {r} and {} cut different edges", 15 - r));
        }
        let row = t.case_edges[r];
        match want {
            Shape::None => {
                empty += 1;
                if row != [-1; 4] {
                    return Err(format!("case {r} should be empty"));
                }
            }
            Shape::Triangle => {
                if row[3] != row[2] || edge_set(r).len() != 3 {
                    return Err(format!("case {r}: triangle rows pad the last slot"));
                }
                let lone = if pop == 1 { r } else { 15 - r }.trailing_zeros() as usize;
                for &e in &row[..3] {
                    if !t.edge_endpoints[e as usize].contains(&lone) {
                        return Err(format!("case {r}: edge {e} not incident to vertex {lone}"));
                    }
                }
            }
            Shape::Quad => {
                if edge_set(r).len() != 4 {
                    return Err(format!("case {r}: quad needs 4 distinct edges"));
                }
            }
        }
    }
    if empty != 2 {
        return Err(format!("{empty} empty cases"));
    }
    Ok(())
}

/// The derived tables, computed once.
pub fn tables() -> &'static SliceTables {
    static TABLES: OnceLock<SliceTables> = OnceLock::new();
    TABLES.get_or_init(derive_tables)
}

/// Oriented hyperplane through `point` with normal `normal`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperplane<T> {
    pub normal: [T; 4],
    pub point: [T; 4],
    basis: [[T; 4]; 3],
}

impl<T: Real> Hyperplane<T> {
    /// `None` for a zero or non-finite normal.
    pub fn new(normal: [T; 4], point: [T; 4]) -> Option<Self> {
        let len = norm(normal);
        if !(len > T::zero()) || !len.is_finite() {
            return None;
        }
        let n = scale(normal, T::one() / len);
        let mut axes = [0usize, 1, 2, 3];
        axes.sort_by(|&a, &b| n[a].abs().partial_cmp(&n[b].abs()).unwrap().then(a.cmp(&b)));
        let mut chosen = [axes[0], axes[1], axes[2]];
        chosen.sort_unstable();
        let mut basis = [[T::zero(); 4]; 3];
        for (k, &axis) in chosen.iter().enumerate() {
            let mut v = [T::zero(); 4];
            v[axis] = T::one();
            v = sub(v, scale(n, dot(v, n)));
            for b in &basis[..k] {
                v = sub(v, scale(*b, dot(v, *b)));
            }
            basis[k] = scale(v, T::one() / norm(v));
        }
        Some(Hyperplane { normal, point, basis })
    }

    /// The constant-time hyperplane `t = time`.
    pub fn time_slice(time: T) -> Self {
        let z = T::zero();
        Self::new([z, z, z, T::one()], [z, z, z, time]).expect("unit normal")
    }

    /// Orthonormal basis of the hyperplane directions.
    pub fn basis(&self) -> [[T; 4]; 3] {
        self.basis
    }

    pub fn signed_distance(&self, p: [T; 4]) -> T {
        dot(sub(p, self.point), self.normal)
    }

    /// Coordinates of `p` in the hyperplane basis, relative to `point`.
    pub fn project(&self, p: [T; 4]) -> [T; 3] {
        let q = sub(p, self.point);
        self.basis.map(|b| dot(q, b))
    }
}

/// Crossing of edge `(a, b)`; callers order the endpoints canonically so a
/// shared edge yields the same point in every element.
#[inline]
fn crossing<T: Real>(pa: [T; 4], pb: [T; 4], da: T, db: T) -> [T; 4] {
    let alpha = da / (da - db);
    std::array::from_fn(|k| pa[k] + alpha * (pb[k] - pa[k]))
}

/// A slice triangle with per-vertex wireframe altitudes: component `i` of a
/// vertex's altitude is its distance to the edge opposite vertex `i` (zero
/// for the other two vertices), or [`HIDDEN_ALTITUDE`] on all three vertices
/// when that edge is a suppressed quad diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceTriangle<T> {
    pub points: [[T; 3]; 3],
    pub altitudes: [[T; 3]; 3],
    pub tag: u32,
    /// Index into [`SpacetimeMesh::all_tets`].
    pub element: u32,
    /// Mesh edge (sorted vertex pair) each point lies on.
    pub sources: [[u32; 2]; 3],
}

impl<T: Real> SliceTriangle<T> {
    pub fn area(&self) -> T {
        let [a, b, c] = self.points;
        norm(cross(sub(b, a), sub(c, a))) * T::lit(0.5)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceSegment<T> {
    pub points: [[T; 3]; 2],
    pub tag: u32,
}

/// Points of one sliced tet, 4D, in table slot order.
#[derive(Clone, Debug, PartialEq)]
pub struct SlicePrimitive<T> {
    pub code: usize,
    pub shape: Shape,
    /// Slot points (4D, on the hyperplane); triangles repeat slot 2.
    pub slots: [[T; 4]; 4],
    pub slot_edges: [usize; 4],
}

impl<T: Real> SlicePrimitive<T> {
    /// Triangles of the 6-vertex expansion, as slot indices.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let base = self.shape as usize * 6;
        let v: [usize; 6] = std::array::from_fn(|i| V2E[base + i]);
        match self.shape {
            Shape::None => vec![],
            Shape::Triangle => vec![[v[0], v[1], v[2]]],
            Shape::Quad => vec![[v[0], v[1], v[2]], [v[3], v[4], v[5]]],
        }
    }

    /// Distinct cut points (3 or 4).
    pub fn distinct_points(&self) -> &[[T; 4]] {
        match self.shape {
            Shape::None => &[],
            Shape::Triangle => &self.slots[..3],
            Shape::Quad => &self.slots[..4],
        }
    }
}

fn slice_tet_ordered<T: Real>(p: [[T; 4]; 4], ids: [u32; 4], h: &Hyperplane<T>, t: &SliceTables) -> Option<SlicePrimitive<T>> {
    let d = p.map(|q| h.signed_distance(q));
    let code = case_code(d.map(Real::as_f64));
    let shape = t.shape_of_case[code];
    if shape == Shape::None {
        return None;
    }
    let slot_edges = t.case_edges[code].map(|e| e as usize);
    let slots = slot_edges.map(|e| {
        let [mut a, mut b] = t.edge_endpoints[e];
        if ids[a] > ids[b] {
            std::mem::swap(&mut a, &mut b);
        }
        crossing(p[a], p[b], d[a], d[b])
    });
    Some(SlicePrimitive { code, shape, slots, slot_edges })
}

/// Table-driven intersection of a tet with the hyperplane.
pub fn slice_tet<T: Real>(p: [[T; 4]; 4], h: &Hyperplane<T>, t: &SliceTables) -> Option<SlicePrimitive<T>> {
    slice_tet_ordered(p, [0, 1, 2, 3], h, t)
}

fn slice_triangle_ordered<T: Real>(p: [[T; 4]; 3], ids: [u32; 3], h: &Hyperplane<T>) -> Option<[[T; 4]; 2]> {
    let d = p.map(|q| h.signed_distance(q));
    let mut out = Vec::with_capacity(2);
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        if (d[a] < T::zero()) != (d[b] < T::zero()) {
            let (a, b) = if ids[a] > ids[b] { (b, a) } else { (a, b) };
            out.push(crossing(p[a], p[b], d[a], d[b]));
        }
    }
    (out.len() == 2).then(|| [out[0], out[1]])
}

/// Segment where a 4D triangle crosses the hyperplane.
pub fn slice_triangle<T: Real>(p: [[T; 4]; 3], h: &Hyperplane<T>) -> Option<[[T; 4]; 2]> {
    slice_triangle_ordered(p, [0, 1, 2], h)
}

fn altitude<T: Real>(p: [[T; 3]; 3], i: usize) -> T {
    let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
    let base = norm(sub(c, b));
    if base > T::zero() {
        norm(cross(sub(b, a), sub(c, a))) / base
    } else {
        T::zero()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SliceResult<T> {
    pub triangles: Vec<SliceTriangle<T>>,
    pub segments: Vec<SliceSegment<T>>,
    /// Number of tets per case code.
    pub case_histogram: [usize; 16],
}

impl<T: Real> SliceResult<T> {
    pub fn primitive_count(&self) -> usize {
        self.triangles.len() + self.segments.len()
    }
}

/// Slices every tet (pentatopes through their boundary tets) and Edge triangle.
pub fn slice_mesh<T: Real>(mesh: &SpacetimeMesh<T>, h: &Hyperplane<T>) -> SliceResult<T> {
    let t = tables();
    let tets = mesh.all_tets();
    let per_tet: Vec<(usize, Vec<SliceTriangle<T>>)> = tets
        .par_iter()
        .enumerate()
        .map(|(k, el)| {
            let ids = el.vertices;
            let Some(prim) = slice_tet_ordered(ids.map(|i| mesh.vertices[i as usize]), ids, h, t) else {
                let d = ids.map(|i| h.signed_distance(mesh.vertices[i as usize]).as_f64());
                return (case_code(d), Vec::new());
            };
            let proj = prim.slots.map(|q| h.project(q));
            let src = prim.slot_edges.map(|e| {
                let [a, b] = EDGE_ENDPOINTS[e].map(|v| ids[v]);
                [a.min(b), a.max(b)]
            });
            let tris = prim.triangles();
            let quad = prim.shape == Shape::Quad;
            let out = tris
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let points = s.map(|i| proj[i]);
                    let mut altitudes = [[T::zero(); 3]; 3];
                    for i in 0..3 {
                        altitudes[i][i] = altitude(points, i);
                    }
                    if quad {
                        // the diagonal (slots 1 and 2) is opposite vertex 0 in the
                        // first triangle and vertex 1 in the second
                        for a in &mut altitudes {
                            a[j] = T::lit(HIDDEN_ALTITUDE);
                        }
                    }
                    SliceTriangle { points, altitudes, tag: el.tag, element: k as u32, sources: s.map(|i| src[i]) }
                })
                .collect();
            (prim.code, out)
        })
        .collect();
    let mut result = SliceResult::default();
    for (code, tris) in per_tet {
        result.case_histogram[code] += 1;
        result.triangles.extend(tris);
    }
    result.segments = mesh
        .triangles
        .par_iter()
        .filter_map(|el| {
            let ids = el.vertices;
            slice_triangle_ordered(ids.map(|i| mesh.vertices[i as usize]), ids, h)
                .map(|s| SliceSegment { points: s.map(|q| h.project(q)), tag: el.tag })
        })
        .collect();
    result
}
