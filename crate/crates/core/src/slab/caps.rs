//! Radial-prism caps closing the spacetime boundary at `t0` and `tf`.

use super::face::rh_volume6;
use super::BuildError;
use crate::geometry::Geometry;
use crate::mesh4::{Element, CAP_INITIAL};
use crate::scalar::Real;
use crate::tessellator::SurfaceTessellation;

/// Splits the prism `[a0, a1, a2]` (bottom) / `[b0, b1, b2]` (top, `bi` over `ai`)
/// into three tets, choosing every quad diagonal through the quad's smallest id
/// so neighbouring prisms agree.
pub fn split_prism(bottom: [u32; 3], top: [u32; 3]) -> [[u32; 4]; 3] {
    let all = [bottom[0], bottom[1], bottom[2], top[0], top[1], top[2]];
    let m = (0..6).min_by_key(|&i| all[i]).unwrap();
    let (lo, hi) = if m < 3 { (bottom, top) } else { (top, bottom) };
    let r = m % 3;
    let v = [lo[r], lo[(r + 1) % 3], lo[(r + 2) % 3], hi[r], hi[(r + 1) % 3], hi[(r + 2) % 3]];
    if v[1].min(v[5]) < v[2].min(v[4]) {
        [[v[0], v[1], v[2], v[5]], [v[0], v[1], v[5], v[4]], [v[0], v[4], v[5], v[3]]]
    } else {
        [[v[0], v[1], v[2], v[4]], [v[0], v[4], v[2], v[5]], [v[0], v[4], v[5], v[3]]]
    }
}

/// Cap tets between the body and enclosure of a radially paired geometry, from
/// one tessellation whose vertices start at global id `offset`. `tag` is
/// [`CAP_INITIAL`] or [`crate::mesh4::CAP_FINAL`], which also fixes the orientation.
pub fn build_caps<T: Real>(
    geom: &Geometry<T>,
    tess: &SurfaceTessellation<T>,
    offset: u32,
    tag: u32,
) -> Result<Vec<Element<4>>, BuildError> {
    let pairing = geom
        .radial
        .ok_or_else(|| BuildError::UnsupportedCaps("geometry has no radially paired enclosure".into()))?;
    let partner = tess
        .radial_partner
        .as_ref()
        .ok_or_else(|| BuildError::UnsupportedCaps("tessellation has no radial partners".into()))?;
    // Lateral tets are stored opposite to the outward-induced orientation;
    // the caps follow suit: negative spatial volume at t0, positive at tf.
    let want_positive = tag != CAP_INITIAL;
    let point = |v: u32| {
        let c = tess.vertices[v as usize].coords;
        [c[0].as_f64(), c[1].as_f64(), c[2].as_f64()]
    };
    let mut out = Vec::new();
    for f in geom.shell_faces(pairing.body) {
        for tri in &tess.face_triangles[f.0 as usize] {
            let outer = tri.map(|v| partner[v as usize]);
            if outer.contains(&u32::MAX) {
                return Err(BuildError::UnsupportedCaps(format!("body vertex of {tri:?} has no radial partner")));
            }
            for mut t in split_prism(tri.map(|v| v + offset), outer.map(|v| v + offset)) {
                let q = t.map(|v| point(v - offset));
                let vol = rh_volume6(q[0], q[1], q[2], q[3]);
                if vol == 0.0 {
                    return Err(BuildError::Cap(format!("flat tetrahedron {t:?}")));
                }
                if (vol > 0.0) != want_positive {
                    t.swap(0, 1);
                }
                out.push(Element::new(t, tag));
            }
        }
    }
    Ok(out)
}
