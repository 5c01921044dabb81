use super::{FaceGeom, Geometry, GeometryError, Motion, RadialPairing, Shell, ShellRole};
use super::surface::{CubeFrame, Surface};
use super::topology::{EdgeId, NodeId, Topology};
use crate::linalg::norm;
use crate::scalar::Real;

/// The analytic test bodies with closed-form spacetime volumes.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticCase<T> {
    StaticSphere { r0: T, side: T, t0: T, tf: T },
    ExpandingSphere { r0: T, rf: T, side: T, t0: T, tf: T },
    ExpandingTorus { r0: T, big_r0: T, rf: T, big_rf: T, side: T, t0: T, tf: T },
    /// The box alone (all surfaces planar).
    Box { side: T, t0: T, tf: T },
}

impl<T: Real> AnalyticCase<T> {
    pub fn name(&self) -> &'static str {
        match self {
            AnalyticCase::StaticSphere { .. } => "static-sphere",
            AnalyticCase::ExpandingSphere { .. } => "expanding-sphere",
            AnalyticCase::ExpandingTorus { .. } => "expanding-torus",
            AnalyticCase::Box { .. } => "box",
        }
    }

    pub fn time(&self) -> [T; 2] {
        match *self {
            AnalyticCase::StaticSphere { t0, tf, .. }
            | AnalyticCase::ExpandingSphere { t0, tf, .. }
            | AnalyticCase::ExpandingTorus { t0, tf, .. }
            | AnalyticCase::Box { t0, tf, .. } => [t0, tf],
        }
    }

    /// Whether the spacetime boundary can be closed with cap volumes.
    pub fn supports_caps(&self) -> bool {
        matches!(self, AnalyticCase::StaticSphere { .. } | AnalyticCase::ExpandingSphere { .. })
    }

    pub fn geometry(&self) -> Result<Geometry<T>, GeometryError> {
        match *self {
            AnalyticCase::StaticSphere { r0, side, t0, tf } => make_sphere_in_box(r0, r0, side, t0, tf),
            AnalyticCase::ExpandingSphere { r0, rf, side, t0, tf } => make_sphere_in_box(r0, rf, side, t0, tf),
            AnalyticCase::ExpandingTorus { r0, big_r0, rf, big_rf, side, t0, tf } => {
                make_torus_in_box(r0, big_r0, rf, big_rf, side, t0, tf)
            }
            AnalyticCase::Box { side, t0, tf } => make_box(side, t0, tf),
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, GeometryError> {
    Err(GeometryError::Invalid(msg.into()))
}

fn cube_node(signs: [bool; 3]) -> u32 {
    signs[0] as u32 + 2 * signs[1] as u32 + 4 * signs[2] as u32
}

/// Edge along axis `b`; `signs` gives the fixed coordinates of the other two axes.
fn cube_edge(b: usize, signs: [bool; 3]) -> u32 {
    let [c1, c2] = [[1, 2], [0, 2], [0, 1]][b];
    (b * 4) as u32 + signs[c1] as u32 + 2 * signs[c2] as u32
}

/// Incidence of the cube: 8 Nodes, 12 Edges, 6 Faces.
fn cube_topology() -> (Vec<[NodeId; 2]>, Vec<[EdgeId; 4]>) {
    let mut edge_nodes = vec![[NodeId(0); 2]; 12];
    for b in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&a| a != b).collect();
        for bits in 0..4 {
            let mut s = [false; 3];
            s[others[0]] = bits & 1 == 1;
            s[others[1]] = bits & 2 == 2;
            let e = cube_edge(b, s) as usize;
            let mut lo = s;
            lo[b] = false;
            let mut hi = s;
            hi[b] = true;
            edge_nodes[e] = [NodeId(cube_node(lo)), NodeId(cube_node(hi))];
        }
    }
    let mut face_sides = Vec::with_capacity(6);
    for f in 0..6 {
        let frame = CubeFrame::from_index(f);
        let [a1, a2] = frame.axes();
        let side = |along: usize, other: usize, val: bool| {
            let mut s = [false; 3];
            s[frame.axis] = frame.positive;
            s[other] = val;
            EdgeId(cube_edge(along, s))
        };
        // UMin, UMax, VMin, VMax
        face_sides.push([side(a2, a1, false), side(a2, a1, true), side(a1, a2, false), side(a1, a2, true)]);
    }
    (edge_nodes, face_sides)
}

struct ShellSpec<T> {
    role: ShellRole,
    center: [T; 3],
    motion: Motion<T>,
    node_count: usize,
    edge_nodes: Vec<[NodeId; 2]>,
    edge_ranges: Vec<[T; 2]>,
    face_sides: Vec<[EdgeId; 4]>,
    faces: Vec<(Surface<T>, [T; 2], [T; 2])>,
}

fn cube_shell<T: Real>(role: ShellRole, center: [T; 3], motion: Motion<T>, surface: impl Fn(CubeFrame) -> Surface<T>, lo: T, hi: T) -> ShellSpec<T> {
    let (edge_nodes, face_sides) = cube_topology();
    ShellSpec {
        role,
        center,
        motion,
        node_count: 8,
        edge_nodes,
        edge_ranges: vec![[lo, hi]; 12],
        face_sides,
        faces: (0..6).map(|f| (surface(CubeFrame::from_index(f)), [lo, hi], [lo, hi])).collect(),
    }
}

fn combine<T: Real>(specs: Vec<ShellSpec<T>>, time: [T; 2], radial: bool) -> Result<Geometry<T>, GeometryError> {
    let (mut n_off, mut e_off, mut f_off) = (0u32, 0u32, 0u32);
    let mut edge_nodes = Vec::new();
    let mut face_sides = Vec::new();
    let mut edge_ranges = Vec::new();
    let mut faces = Vec::new();
    let mut shells = Vec::new();
    let mut offsets = Vec::new();
    for (k, sp) in specs.into_iter().enumerate() {
        offsets.push((n_off, e_off, f_off));
        edge_nodes.extend(sp.edge_nodes.iter().map(|en| en.map(|n| NodeId(n.0 + n_off))));
        face_sides.extend(sp.face_sides.iter().map(|fs| fs.map(|e| EdgeId(e.0 + e_off))));
        edge_ranges.extend(sp.edge_ranges.iter().copied());
        let reversed = sp.role == ShellRole::Enclosure;
        faces.extend(sp.faces.into_iter().map(|(surface, u, v)| FaceGeom { shell: k, surface, u, v, reversed }));
        let (nn, ne, nf) = (sp.node_count as u32, sp.edge_nodes.len() as u32, sp.face_sides.len() as u32);
        shells.push(Shell {
            role: sp.role,
            center: sp.center,
            motion: sp.motion,
            nodes: n_off..n_off + nn,
            edges: e_off..e_off + ne,
            faces: f_off..f_off + nf,
        });
        n_off += nn;
        e_off += ne;
        f_off += nf;
    }
    let topology = Topology::new(n_off as usize, edge_nodes, face_sides).map_err(GeometryError::Invalid)?;
    let radial = radial.then(|| RadialPairing {
        body: 0,
        enclosure: 1,
        node_offset: offsets[1].0,
        edge_offset: offsets[1].1,
        face_offset: offsets[1].2,
    });
    Geometry::assemble(topology, shells, faces, edge_ranges, time, radial)
}

fn check_time<T: Real>(t0: T, tf: T) -> Result<(), GeometryError> {
    if !(t0 < tf) || !t0.is_finite() || !tf.is_finite() {
        return invalid(format!("time domain [{t0}, {tf}] is empty"));
    }
    Ok(())
}

fn box_center<T: Real>(side: T) -> [T; 3] {
    [side / T::lit(2.0); 3]
}

fn plane_box<T: Real>(side: T) -> ShellSpec<T> {
    cube_shell(ShellRole::Enclosure, [T::zero(); 3], Motion::Static, |frame| Surface::Plane { frame, side }, T::zero(), side)
}

/// Sphere (6 cube-sphere patches) of radius growing linearly from `r0` to `rf`,
/// centered in a static box `[0, side]^3`. The box Faces share the sphere's
/// `[-1, 1]^2` parametrization, so each box point is the radial image of the
/// sphere point with the same parameters.
pub fn make_sphere_in_box<T: Real>(r0: T, rf: T, side: T, t0: T, tf: T) -> Result<Geometry<T>, GeometryError> {
    check_time(t0, tf)?;
    let half = side / T::lit(2.0);
    if !(T::zero() < r0 && r0 <= rf && rf < half) {
        return invalid(format!("sphere radii must satisfy 0 < r0 <= rf < side/2 (r0={r0}, rf={rf}, side={side})"));
    }
    let center = box_center(side);
    // unit patches scaled by r(t); equal factors keep the static sphere exact
    let motion = Motion::LinearScale { factor0: r0, factor1: rf };
    let one = T::one();
    let sphere = cube_shell(ShellRole::Body, center, motion, |frame| Surface::CubeSphere { frame, radius: one }, -one, one);
    let enclosure = cube_shell(ShellRole::Enclosure, center, Motion::Static, |frame| Surface::CubeFace { frame, half_side: half }, -one, one);
    combine(vec![sphere, enclosure], [t0, tf], true)
}

/// Torus split into 4 seam-free patches, scaled uniformly about the box center.
pub fn make_torus_in_box<T: Real>(r0: T, big_r0: T, rf: T, big_rf: T, side: T, t0: T, tf: T) -> Result<Geometry<T>, GeometryError> {
    check_time(t0, tf)?;
    if !(T::zero() < r0 && r0 < big_r0 && T::zero() < rf && rf < big_rf) {
        return invalid("torus radii must satisfy 0 < r < R");
    }
    let (k0, kf) = (r0 / big_r0, rf / big_rf);
    if (k0 - kf).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) * k0 {
        return invalid(format!("torus scaling must be uniform (r0/R0={k0}, rf/Rf={kf})"));
    }
    // Containment is not enforced: the reference setup (R0 + r0 = l/2, growing
    // past it) overlaps the box, and the two shells are meshed independently.
    if !(big_r0 + r0 < side && big_rf + rf < side) {
        return invalid("torus is larger than the box");
    }
    let pi = T::PI();
    let mut edge_nodes = vec![[NodeId(0); 2]; 8];
    let mut edge_ranges = vec![[T::zero(); 2]; 8];
    let node = |i: usize, j: usize| NodeId((2 * (j % 2) + (i % 2)) as u32);
    for i in 0..2 {
        for j in 0..2 {
            // u-edge at v = j*pi, v-edge at u = i*pi
            edge_nodes[2 * j + i] = [node(i, j), node(i + 1, j)];
            edge_ranges[2 * j + i] = [pi * T::lit(i as f64), pi * T::lit(i as f64 + 1.0)];
            edge_nodes[4 + 2 * i + j] = [node(i, j), node(i, j + 1)];
            edge_ranges[4 + 2 * i + j] = [pi * T::lit(j as f64), pi * T::lit(j as f64 + 1.0)];
        }
    }
    let mut face_sides = Vec::new();
    let mut faces = Vec::new();
    for j in 0..2 {
        for i in 0..2 {
            let u_edge = |jj: usize| EdgeId((2 * (jj % 2) + i) as u32);
            let v_edge = |ii: usize| EdgeId((4 + 2 * (ii % 2) + j) as u32);
            face_sides.push([v_edge(i), v_edge(i + 1), u_edge(j), u_edge(j + 1)]);
            let u = [pi * T::lit(i as f64), pi * T::lit(i as f64 + 1.0)];
            let v = [pi * T::lit(j as f64), pi * T::lit(j as f64 + 1.0)];
            faces.push((Surface::Torus { major: T::one(), minor: k0 }, u, v));
        }
    }
    let torus = ShellSpec {
        role: ShellRole::Body,
        center: box_center(side),
        motion: Motion::LinearScale { factor0: big_r0, factor1: big_rf },
        node_count: 4,
        edge_nodes,
        edge_ranges,
        face_sides,
        faces,
    };
    combine(vec![torus, plane_box(side)], [t0, tf], false)
}

/// The static box `[0, side]^3` on its own.
pub fn make_box<T: Real>(side: T, t0: T, tf: T) -> Result<Geometry<T>, GeometryError> {
    check_time(t0, tf)?;
    if !(side > T::zero()) {
        return invalid("box side must be positive");
    }
    combine(vec![plane_box(side)], [t0, tf], false)
}

/// Sphere of fixed radius under an arbitrary rigid motion inside the box.
pub fn make_rigid_sphere_in_box<T: Real>(radius: T, side: T, motion: Motion<T>, t0: T, tf: T) -> Result<Geometry<T>, GeometryError> {
    check_time(t0, tf)?;
    let half = side / T::lit(2.0);
    if !(T::zero() < radius && radius < half) {
        return invalid("sphere radius must satisfy 0 < r < side/2");
    }
    match &motion {
        Motion::Translation { offset0, offset1 } => {
            if norm(*offset0).max(norm(*offset1)) + radius >= half {
                return invalid("translated sphere leaves the box");
            }
        }
        Motion::LinearScale { .. } => return invalid("use make_sphere_in_box for scaling"),
        Motion::Rotation { axis, .. } => {
            if (norm(*axis) - T::one()).abs() > T::lit(1e-12) {
                return invalid("rotation axis must be a unit vector");
            }
        }
        Motion::Static => {}
    }
    let one = T::one();
    let sphere = cube_shell(ShellRole::Body, box_center(side), motion, |frame| Surface::CubeSphere { frame, radius }, -one, one);
    combine(vec![sphere, plane_box(side)], [t0, tf], false)
}
