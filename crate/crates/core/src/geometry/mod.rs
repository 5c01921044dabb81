//! Analytic multi-shell bodies whose shape is a function of time.

mod cases;
mod motion;
mod surface;
mod topology;

use std::ops::Range;

use thiserror::Error;

pub use cases::{
    make_box, make_rigid_sphere_in_box, make_sphere_in_box, make_torus_in_box, AnalyticCase,
};
pub use motion::Motion;
pub use surface::{CubeFrame, Surface};
pub use topology::{EdgeId, EdgeTopo, EntityId, FaceId, FaceTopo, NodeId, Side, Topology};

use crate::linalg::norm;
use crate::quadrature;
use crate::scalar::Real;

/// Relative tolerance for arclength quadrature.
pub const ARCLENGTH_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid geometry: {0}")]
    Invalid(String),
    #[error("edge {edge} is not incident to face {face}")]
    NotIncident { edge: u32, face: u32 },
    #[error("time {0} outside the geometry time domain")]
    TimeOutOfRange(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShellRole {
    /// Moving object; its surfaces face away from the enclosed solid.
    Body,
    /// Static container; its surfaces face inward, toward the body.
    Enclosure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Shell<T> {
    pub role: ShellRole,
    pub center: [T; 3],
    pub motion: Motion<T>,
    pub nodes: Range<u32>,
    pub edges: Range<u32>,
    pub faces: Range<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceGeom<T> {
    pub shell: usize,
    pub surface: Surface<T>,
    pub u: [T; 2],
    pub v: [T; 2],
    /// Parametric normal `d/du x d/dv` is flipped to obtain the surface orientation.
    pub reversed: bool,
}

/// Entity-for-entity correspondence between a body shell and an enclosure
/// shell sharing parametrizations, so the enclosure is a radial projection of
/// the body.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadialPairing {
    pub body: usize,
    pub enclosure: usize,
    pub node_offset: u32,
    pub edge_offset: u32,
    pub face_offset: u32,
}

/// Parameters of an entity sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Param<T> {
    Node,
    Edge(T),
    Face(T, T),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Geometry<T> {
    pub topology: Topology,
    pub shells: Vec<Shell<T>>,
    pub faces: Vec<FaceGeom<T>>,
    /// Parameter interval of each Edge.
    pub edge_ranges: Vec<[T; 2]>,
    pub time: [T; 2],
    pub radial: Option<RadialPairing>,
    node_anchor: Vec<(EdgeId, usize)>,
}

impl<T: Real> Geometry<T> {
    pub(crate) fn assemble(
        topology: Topology,
        shells: Vec<Shell<T>>,
        faces: Vec<FaceGeom<T>>,
        edge_ranges: Vec<[T; 2]>,
        time: [T; 2],
        radial: Option<RadialPairing>,
    ) -> Result<Self, GeometryError> {
        if !(time[0] < time[1]) {
            return Err(GeometryError::Invalid(format!("empty time domain {:?}", time)));
        }
        let mut node_anchor = vec![None; topology.node_count];
        for (e, et) in topology.edges.iter().enumerate() {
            for end in 0..2 {
                let slot = &mut node_anchor[et.nodes[end].0 as usize];
                if slot.is_none() {
                    *slot = Some((EdgeId(e as u32), end));
                }
            }
        }
        let node_anchor = node_anchor
            .into_iter()
            .enumerate()
            .map(|(n, a)| a.ok_or_else(|| GeometryError::Invalid(format!("node {n} has no incident edge"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Geometry { topology, shells, faces, edge_ranges, time, radial, node_anchor })
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ranges.len()
    }

    pub fn node_count(&self) -> usize {
        self.topology.node_count
    }

    /// Largest extent of the enclosure (or of all shells when there is none).
    pub fn diameter(&self) -> T {
        let mut lo = [T::infinity(); 3];
        let mut hi = [T::neg_infinity(); 3];
        for n in self.topology.nodes() {
            for t in self.time {
                let p = self.eval_node(n, t);
                for i in 0..3 {
                    lo[i] = lo[i].min(p[i]);
                    hi[i] = hi[i].max(p[i]);
                }
            }
        }
        (0..3).map(|i| hi[i] - lo[i]).fold(T::zero(), T::max)
    }

    fn normalized_time(&self, t: T) -> T {
        let [t0, tf] = self.time;
        if t == tf {
            T::one()
        } else {
            (t - t0) / (tf - t0)
        }
    }

    /// Shell id per face.
    pub fn face_shell(&self, face: FaceId) -> usize {
        self.faces[face.0 as usize].shell
    }

    pub fn shell_faces(&self, shell: usize) -> impl Iterator<Item = FaceId> {
        self.shells[shell].faces.clone().map(FaceId)
    }

    /// World point and parametric derivatives of a Face at time `t`.
    pub fn eval_face_d(&self, face: FaceId, u: T, v: T, t: T) -> ([T; 3], [T; 3], [T; 3]) {
        let fg = &self.faces[face.0 as usize];
        let shell = &self.shells[fg.shell];
        let w = self.normalized_time(t);
        let (p, du, dv) = fg.surface.eval(u, v);
        (
            shell.motion.apply_point(shell.center, p, w),
            shell.motion.apply_linear(du, w),
            shell.motion.apply_linear(dv, w),
        )
    }

    pub fn eval_face(&self, face: FaceId, u: T, v: T, t: T) -> [T; 3] {
        self.eval_face_d(face, u, v, t).0
    }

    /// Face parameters of an Edge parameter.
    pub fn edge_uv(&self, edge: EdgeId, face: FaceId, s: T) -> Result<(T, T), GeometryError> {
        let side = self
            .topology
            .side_of(edge, face)
            .ok_or(GeometryError::NotIncident { edge: edge.0, face: face.0 })?;
        let fg = &self.faces[face.0 as usize];
        Ok(match side {
            Side::UMin => (fg.u[0], s),
            Side::UMax => (fg.u[1], s),
            Side::VMin => (s, fg.v[0]),
            Side::VMax => (s, fg.v[1]),
        })
    }

    fn canonical_face(&self, edge: EdgeId) -> FaceId {
        self.topology.edges[edge.0 as usize].faces[0]
    }

    /// World point and `d/ds` of an Edge, evaluated through its first incident Face.
    pub fn eval_edge_d(&self, edge: EdgeId, s: T, t: T) -> ([T; 3], [T; 3]) {
        let face = self.canonical_face(edge);
        let side = self.topology.side_of(edge, face).expect("canonical face is incident");
        let (u, v) = self.edge_uv(edge, face, s).expect("canonical face is incident");
        let (p, du, dv) = self.eval_face_d(face, u, v, t);
        (p, if side.fixes_u() { dv } else { du })
    }

    pub fn eval_edge(&self, edge: EdgeId, s: T, t: T) -> [T; 3] {
        self.eval_edge_d(edge, s, t).0
    }

    pub fn eval_node(&self, node: NodeId, t: T) -> [T; 3] {
        let (edge, end) = self.node_anchor[node.0 as usize];
        self.eval_edge(edge, self.edge_ranges[edge.0 as usize][end], t)
    }

    /// Face parameters of a Node (a corner of the Face domain).
    pub fn node_uv(&self, node: NodeId, face: FaceId) -> Option<(T, T)> {
        let fg = &self.faces[face.0 as usize];
        self.topology.corner_of(node, face).map(|c| match c {
            0 => (fg.u[0], fg.v[0]),
            1 => (fg.u[1], fg.v[0]),
            2 => (fg.u[1], fg.v[1]),
            _ => (fg.u[0], fg.v[1]),
        })
    }

    pub fn eval_entity(&self, owner: EntityId, param: Param<T>, t: T) -> Option<[T; 3]> {
        match (owner, param) {
            (EntityId::Node(n), Param::Node) => Some(self.eval_node(n, t)),
            (EntityId::Edge(e), Param::Edge(s)) => Some(self.eval_edge(e, s, t)),
            (EntityId::Face(f), Param::Face(u, v)) => Some(self.eval_face(f, u, v, t)),
            _ => None,
        }
    }

    /// Arclength of an Edge at time `t`.
    pub fn edge_length(&self, edge: EdgeId, t: T) -> T {
        let [a, b] = self.edge_ranges[edge.0 as usize];
        let speed = |s: f64| norm(self.eval_edge_d(edge, T::lit(s), t).1).as_f64();
        T::lit(quadrature::integrate(speed, a.as_f64(), b.as_f64(), ARCLENGTH_TOL).0)
    }

    /// `m + 1` Edge parameters splitting it into `m` pieces of equal arclength.
    pub fn edge_samples(&self, edge: EdgeId, t: T, m: usize) -> Vec<T> {
        let [a, b] = self.edge_ranges[edge.0 as usize];
        if m == 1 {
            return vec![a, b];
        }
        let speed = |s: f64| norm(self.eval_edge_d(edge, T::lit(s), t).1).as_f64();
        let mut s: Vec<T> = quadrature::equal_arclength(speed, a.as_f64(), b.as_f64(), m, ARCLENGTH_TOL)
            .into_iter()
            .map(T::lit)
            .collect();
        // endpoints exactly at the Node parameters
        s[0] = a;
        s[m] = b;
        s
    }

    /// Arclength of the iso-line `v = const` (`along_u`) or `u = const` of a Face.
    pub fn iso_length(&self, face: FaceId, along_u: bool, fixed: T, t: T) -> T {
        let fg = &self.faces[face.0 as usize];
        let [a, b] = if along_u { fg.u } else { fg.v };
        let speed = |x: f64| {
            let x = T::lit(x);
            let (_, du, dv) = if along_u { self.eval_face_d(face, x, fixed, t) } else { self.eval_face_d(face, fixed, x, t) };
            norm(if along_u { du } else { dv }).as_f64()
        };
        T::lit(quadrature::integrate(speed, a.as_f64(), b.as_f64(), ARCLENGTH_TOL).0)
    }

    /// Parameters splitting an iso-line into `m` equal-arclength pieces.
    pub fn iso_samples(&self, face: FaceId, along_u: bool, fixed: T, t: T, m: usize) -> Vec<T> {
        let fg = &self.faces[face.0 as usize];
        let [a, b] = if along_u { fg.u } else { fg.v };
        let speed = |x: f64| {
            let x = T::lit(x);
            let (_, du, dv) = if along_u { self.eval_face_d(face, x, fixed, t) } else { self.eval_face_d(face, fixed, x, t) };
            norm(if along_u { du } else { dv }).as_f64()
        };
        let mut s: Vec<T> = quadrature::equal_arclength(speed, a.as_f64(), b.as_f64(), m, ARCLENGTH_TOL)
            .into_iter()
            .map(T::lit)
            .collect();
        s[0] = a;
        s[m] = b;
        s
    }

    pub fn check_time(&self, t: T) -> Result<(), GeometryError> {
        if t < self.time[0] || t > self.time[1] || !t.is_finite() {
            return Err(GeometryError::TimeOutOfRange(t.as_f64()));
        }
        Ok(())
    }
}
