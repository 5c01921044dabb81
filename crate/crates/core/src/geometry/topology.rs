//! Entity ids and the time-invariant incidence structure.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityId {
    Node(NodeId),
    Edge(EdgeId),
    Face(FaceId),
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityId::Node(n) => write!(f, "node_{}", n.0),
            EntityId::Edge(e) => write!(f, "edge_{}", e.0),
            EntityId::Face(x) => write!(f, "face_{}", x.0),
        }
    }
}

/// Side of a rectangular Face domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    UMin,
    UMax,
    VMin,
    VMax,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::UMin, Side::UMax, Side::VMin, Side::VMax];

    pub fn index(self) -> usize {
        self as usize
    }

    /// True when the side is a line of constant `u` (edge parameter runs along `v`).
    pub fn fixes_u(self) -> bool {
        matches!(self, Side::UMin | Side::UMax)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTopo {
    /// Start node (at the low end of the parameter interval), end node.
    pub nodes: [NodeId; 2],
    /// The two incident Faces, lowest id first.
    pub faces: [FaceId; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceTopo {
    /// Bounding Edge per side, indexed by [`Side::index`].
    pub sides: [EdgeId; 4],
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Topology {
    pub node_count: usize,
    pub edges: Vec<EdgeTopo>,
    pub faces: Vec<FaceTopo>,
}

impl Topology {
    /// Builds the incidence lists from per-face sides and per-edge endpoints.
    /// Returns an error message when an Edge is not incident to exactly two Faces.
    pub fn new(node_count: usize, edge_nodes: Vec<[NodeId; 2]>, face_sides: Vec<[EdgeId; 4]>) -> Result<Self, String> {
        let mut inc: Vec<Vec<FaceId>> = vec![Vec::new(); edge_nodes.len()];
        for (f, sides) in face_sides.iter().enumerate() {
            for e in sides {
                let list = inc.get_mut(e.0 as usize).ok_or_else(|| format!("face {f} references unknown edge {}", e.0))?;
                list.push(FaceId(f as u32));
            }
        }
        let mut edges = Vec::with_capacity(edge_nodes.len());
        for (e, (nodes, faces)) in edge_nodes.into_iter().zip(inc).enumerate() {
            if faces.len() != 2 || faces[0] == faces[1] {
                return Err(format!("edge {e} is incident to {} faces", faces.len()));
            }
            if nodes[0] == nodes[1] || nodes.iter().any(|n| n.0 as usize >= node_count) {
                return Err(format!("edge {e} has invalid endpoints"));
            }
            edges.push(EdgeTopo { nodes, faces: [faces[0], faces[1]] });
        }
        let topo = Topology { node_count, edges, faces: face_sides.into_iter().map(|sides| FaceTopo { sides }).collect() };
        for f in 0..topo.faces.len() {
            let lp = topo.face_loop(FaceId(f as u32));
            for i in 0..4 {
                let (a, fa) = lp[i];
                let (b, fb) = lp[(i + 1) % 4];
                let end = topo.edges[a.0 as usize].nodes[if fa { 1 } else { 0 }];
                let start = topo.edges[b.0 as usize].nodes[if fb { 0 } else { 1 }];
                if end != start {
                    return Err(format!("face {f} loop is open between edges {} and {}", a.0, b.0));
                }
            }
        }
        Ok(topo)
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Counter-clockwise loop in the (u, v) domain: (edge, traversed forward).
    pub fn face_loop(&self, face: FaceId) -> [(EdgeId, bool); 4] {
        let s = &self.faces[face.0 as usize].sides;
        [
            (s[Side::VMin.index()], true),
            (s[Side::UMax.index()], true),
            (s[Side::VMax.index()], false),
            (s[Side::UMin.index()], false),
        ]
    }

    pub fn side_of(&self, edge: EdgeId, face: FaceId) -> Option<Side> {
        let f = self.faces.get(face.0 as usize)?;
        Side::ALL.into_iter().find(|s| f.sides[s.index()] == edge)
    }

    /// Domain corner index (0: (umin,vmin), 1: (umax,vmin), 2: (umax,vmax), 3: (umin,vmax)) of a node on a face.
    pub fn corner_of(&self, node: NodeId, face: FaceId) -> Option<usize> {
        let lp = self.face_loop(face);
        (0..4).find(|&i| {
            let (e, fwd) = lp[i];
            self.edges[e.0 as usize].nodes[if fwd { 0 } else { 1 }] == node
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count as u32).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len() as u32).map(FaceId)
    }
}
