//! Conforming triangulation of a rectangle whose perimeter is subdivided by
//! a fixed polyline, with optional interior points.
//!
//! The result is the Delaunay triangulation of all input points, with ties
//! broken by symbolic perturbation keyed on the external ids. It is therefore
//! unique for a given input, independent of insertion order.

use std::collections::HashMap;

use thiserror::Error;

use crate::predicates::{incircle_sos, orient2d, P2};

const NONE: u32 = u32::MAX;
const DUPLICATE_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TriangulateError {
    #[error("degenerate rectangle {min:?}..{max:?}")]
    DegenerateRectangle { min: P2, max: P2 },
    #[error("boundary point id {id} does not lie on the rectangle perimeter")]
    OffBoundary { id: u64 },
    #[error("boundary polyline is not a simple counter-clockwise loop (at id {id})")]
    NonSimpleBoundary { id: u64 },
    #[error("rectangle corner {corner:?} missing from the boundary polyline")]
    MissingCorner { corner: P2 },
    #[error("interior point id {id} is not strictly inside the rectangle")]
    NotInterior { id: u64 },
    #[error("points {a} and {b} coincide within {DUPLICATE_TOL:e}")]
    DuplicatePoint { a: u64, b: u64 },
    #[error("duplicate point id {0}")]
    DuplicateId(u64),
    #[error("point id {id} could not be inserted: {reason}")]
    Insertion { id: u64, reason: &'static str },
    #[error("boundary segment {a}-{b} missing from the triangulation")]
    MissingSegment { a: u64, b: u64 },
}

/// Rectangle plus perimeter polyline and interior points, each with a stable id.
#[derive(Clone, Debug, Default)]
pub struct PlanarDomain {
    pub min: P2,
    pub max: P2,
    /// Closed counter-clockwise loop on the perimeter (last point connects to the first).
    pub boundary: Vec<(P2, u64)>,
    pub interior: Vec<(P2, u64)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Triangulation2 {
    /// Boundary points first, then interior points, in input order.
    pub points: Vec<P2>,
    pub ids: Vec<u64>,
    /// Counter-clockwise index triples, canonically ordered.
    pub triangles: Vec<[u32; 3]>,
    /// Always false: the construction never adds points.
    pub steiner: Vec<bool>,
}

impl Triangulation2 {
    /// Triangles expressed in external ids.
    pub fn id_triangles(&self) -> impl Iterator<Item = [u64; 3]> + '_ {
        self.triangles.iter().map(|t| t.map(|i| self.ids[i as usize]))
    }

    pub fn signed_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.points[i as usize]);
                0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
            })
            .sum()
    }
}

impl PlanarDomain {
    /// Position of `p` along the perimeter, counter-clockwise from `min`.
    fn perimeter_pos(&self, p: P2) -> Option<f64> {
        let (w, h) = (self.max[0] - self.min[0], self.max[1] - self.min[1]);
        let (x, y) = (p[0] - self.min[0], p[1] - self.min[1]);
        if !(0.0..=w).contains(&x) || !(0.0..=h).contains(&y) {
            return None;
        }
        if p[1] == self.min[1] {
            Some(x)
        } else if p[0] == self.max[0] {
            Some(w + y)
        } else if p[1] == self.max[1] {
            Some(w + h + (w - x))
        } else if p[0] == self.min[0] {
            Some(2.0 * w + h + (h - y))
        } else {
            None
        }
    }

    fn validate(&self) -> Result<(), TriangulateError> {
        let (min, max) = (self.min, self.max);
        if !(min[0] < max[0] && min[1] < max[1]) {
            return Err(TriangulateError::DegenerateRectangle { min, max });
        }
        let mut pos = Vec::with_capacity(self.boundary.len());
        for &(p, id) in &self.boundary {
            pos.push(self.perimeter_pos(p).ok_or(TriangulateError::OffBoundary { id })?);
        }
        // counter-clockwise simple loop: exactly one descent in perimeter position
        let n = pos.len();
        let descents = (0..n).filter(|&i| pos[(i + 1) % n] <= pos[i]).count();
        if n < 4 || descents != 1 {
            let id = self.boundary.first().map_or(0, |b| b.1);
            return Err(TriangulateError::NonSimpleBoundary { id });
        }
        for i in 0..n {
            if pos[(i + 1) % n] == pos[i] {
                return Err(TriangulateError::NonSimpleBoundary { id: self.boundary[i].1 });
            }
        }
        for corner in corners(min, max) {
            if !self.boundary.iter().any(|b| b.0 == corner) {
                return Err(TriangulateError::MissingCorner { corner });
            }
        }
        for &(p, id) in &self.interior {
            if !(p[0] > min[0] && p[0] < max[0] && p[1] > min[1] && p[1] < max[1]) {
                return Err(TriangulateError::NotInterior { id });
            }
        }
        let mut all: Vec<(P2, u64)> = self.boundary.iter().chain(&self.interior).copied().collect();
        let mut ids: Vec<u64> = all.iter().map(|a| a.1).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(TriangulateError::DuplicateId(w[0]));
        }
        all.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]));
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if all[j].0[0] - all[i].0[0] > DUPLICATE_TOL {
                    break;
                }
                let d = ((all[j].0[0] - all[i].0[0]).powi(2) + (all[j].0[1] - all[i].0[1]).powi(2)).sqrt();
                if d <= DUPLICATE_TOL {
                    return Err(TriangulateError::DuplicatePoint { a: all[i].1, b: all[j].1 });
                }
            }
        }
        Ok(())
    }
}

fn corners(min: P2, max: P2) -> [P2; 4] {
    [min, [max[0], min[1]], max, [min[0], max[1]]]
}

struct Mesh<'a> {
    pts: &'a [P2],
    prio: &'a [u64],
    tri: Vec<[u32; 3]>,
    /// `nbr[t][i]` lies across the edge opposite vertex `i`.
    nbr: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    last: u32,
}

impl Mesh<'_> {
    fn incircle(&self, t: u32, p: u32) -> i32 {
        let v = self.tri[t as usize];
        let q = [v[0], v[1], v[2], p];
        incircle_sos(q.map(|i| self.pts[i as usize]), q.map(|i| self.prio[i as usize]))
    }

    fn locate(&self, p: u32) -> Option<u32> {
        let pp = self.pts[p as usize];
        let mut t = self.last;
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > 4 * self.tri.len() + 16 {
                return None;
            }
            let v = self.tri[t as usize];
            for k in 0..3 {
                let i = (k + steps) % 3;
                let a = self.pts[v[(i + 1) % 3] as usize];
                let b = self.pts[v[(i + 2) % 3] as usize];
                if orient2d(a, b, pp) < 0.0 {
                    let n = self.nbr[t as usize][i];
                    if n == NONE {
                        return None;
                    }
                    t = n;
                    continue 'walk;
                }
            }
            return Some(t);
        }
    }

    fn alloc(&mut self, t: [u32; 3]) -> u32 {
        if let Some(s) = self.free.pop() {
            self.tri[s as usize] = t;
            self.nbr[s as usize] = [NONE; 3];
            self.alive[s as usize] = true;
            s
        } else {
            self.tri.push(t);
            self.nbr.push([NONE; 3]);
            self.alive.push(true);
            (self.tri.len() - 1) as u32
        }
    }

    fn insert(&mut self, p: u32) -> Result<(), &'static str> {
        let start = self.locate(p).ok_or("point outside the triangulated region")?;
        if self.incircle(start, p) <= 0 {
            return Err("containing triangle rejects the point");
        }
        let mut cavity = vec![start];
        let mut in_cavity = HashMap::from([(start, true)]);
        let mut head = 0;
        while head < cavity.len() {
            let t = cavity[head];
            head += 1;
            for n in self.nbr[t as usize] {
                if n != NONE && !in_cavity.contains_key(&n) {
                    let inside = self.incircle(n, p) > 0;
                    in_cavity.insert(n, inside);
                    if inside {
                        cavity.push(n);
                    }
                }
            }
        }
        let pp = self.pts[p as usize];
        // cavity boundary edges (a, b, outer neighbour)
        let mut rim = Vec::new();
        for &t in &cavity {
            let v = self.tri[t as usize];
            for i in 0..3 {
                let n = self.nbr[t as usize][i];
                if n == NONE || !in_cavity[&n] {
                    rim.push((v[(i + 1) % 3], v[(i + 2) % 3], n));
                }
            }
        }
        for &t in &cavity {
            self.alive[t as usize] = false;
            self.free.push(t);
        }
        let mut open: HashMap<(u32, u32), (u32, usize)> = HashMap::new();
        let mut newest = NONE;
        for (a, b, outer) in rim {
            let o = orient2d(self.pts[a as usize], self.pts[b as usize], pp);
            if o == 0.0 && outer == NONE {
                continue; // hull edge split by a boundary point
            }
            if o <= 0.0 {
                return Err("cavity is not star-shaped");
            }
            let t = self.alloc([a, b, p]);
            newest = t;
            self.nbr[t as usize][2] = outer;
            if outer != NONE {
                let ov = self.tri[outer as usize];
                let slot = (0..3)
                    .find(|&i| ov[(i + 1) % 3] == b && ov[(i + 2) % 3] == a)
                    .ok_or("adjacency corrupted")?;
                self.nbr[outer as usize][slot] = t;
            }
            // edges (b, p) opposite a (slot 0) and (p, a) opposite b (slot 1)
            for (e, slot) in [((b, p), 0usize), ((p, a), 1usize)] {
                if let Some((u, us)) = open.remove(&(e.1, e.0)) {
                    self.nbr[t as usize][slot] = u;
                    self.nbr[u as usize][us] = t;
                } else {
                    open.insert(e, (t, slot));
                }
            }
        }
        if newest == NONE {
            return Err("empty cavity");
        }
        self.last = newest;
        Ok(())
    }
}

/// Triangulates the domain without adding any points.
pub fn triangulate_conforming(domain: &PlanarDomain) -> Result<Triangulation2, TriangulateError> {
    domain.validate()?;
    let points: Vec<P2> = domain.boundary.iter().chain(&domain.interior).map(|b| b.0).collect();
    let ids: Vec<u64> = domain.boundary.iter().chain(&domain.interior).map(|b| b.1).collect();
    let corner_idx = corners(domain.min, domain.max)
        .map(|c| domain.boundary.iter().position(|b| b.0 == c).expect("validated") as u32);

    let mut m = Mesh {
        pts: &points,
        prio: &ids,
        tri: Vec::new(),
        nbr: Vec::new(),
        alive: Vec::new(),
        free: Vec::new(),
        last: 0,
    };
    let [c0, c1, c2, c3] = corner_idx;
    let q = [c0, c1, c2, c3];
    let split_02 = incircle_sos(q.map(|i| points[i as usize]), q.map(|i| ids[i as usize])) < 0;
    if split_02 {
        let t0 = m.alloc([c0, c1, c2]);
        let t1 = m.alloc([c0, c2, c3]);
        m.nbr[t0 as usize][1] = t1;
        m.nbr[t1 as usize][2] = t0;
    } else {
        let t0 = m.alloc([c0, c1, c3]);
        let t1 = m.alloc([c1, c2, c3]);
        m.nbr[t0 as usize][0] = t1;
        m.nbr[t1 as usize][1] = t0;
    }

    for p in 0..points.len() as u32 {
        if corner_idx.contains(&p) {
            continue;
        }
        m.insert(p)
            .map_err(|reason| TriangulateError::Insertion { id: ids[p as usize], reason })?;
    }

    let mut triangles: Vec<[u32; 3]> = m
        .tri
        .iter()
        .zip(&m.alive)
        .filter(|(_, &a)| a)
        .map(|(t, _)| {
            let r = (0..3).min_by_key(|&i| t[i]).unwrap();
            [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
        })
        .collect();
    triangles.sort_unstable();

    let mut edges = std::collections::HashSet::new();
    for t in &triangles {
        for i in 0..3 {
            edges.insert((t[i], t[(i + 1) % 3]));
        }
    }
    let nb = domain.boundary.len();
    for i in 0..nb {
        let (a, b) = (i as u32, ((i + 1) % nb) as u32);
        if !edges.contains(&(a, b)) {
            return Err(TriangulateError::MissingSegment { a: ids[a as usize], b: ids[b as usize] });
        }
    }
    let steiner = vec![false; points.len()];
    Ok(Triangulation2 { points, ids, triangles, steiner })
}
