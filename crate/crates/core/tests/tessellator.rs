use proptest::prelude::*;
use spacetime4d::geometry::*;
use spacetime4d::linalg::{norm, sub};
use spacetime4d::tessellator::{tessellate, TessellateError};

fn sphere() -> Geometry<f64> {
    make_sphere_in_box(0.1, 0.125, 1.0, 0.0, 1.0).unwrap()
}

fn torus() -> Geometry<f64> {
    make_torus_in_box(0.1, 0.4, 0.125, 0.5, 1.0, 0.0, 1.0).unwrap()
}

fn audit(g: &Geometry<f64>, t: f64, h: f64) {
    let tess = tessellate(g, t, h).unwrap();
    tess.check_watertight(g).unwrap();
    let tol = 1e-10 * g.diameter();
    for v in &tess.vertices {
        let p = g.eval_entity(v.owner, v.param, t).unwrap();
        assert!(norm(sub(p, v.coords)) < tol);
    }
    // each Node vertex is shared by its incident Edge polylines
    for (e, pl) in tess.edge_polylines.iter().enumerate() {
        let [a, b] = g.topology.edges[e].nodes;
        assert_eq!(pl[0], tess.node_vertex[a.0 as usize]);
        assert_eq!(*pl.last().unwrap(), tess.node_vertex[b.0 as usize]);
    }
    for s in 0..g.shells.len() {
        let chi = tess.euler_characteristic(g.shell_faces(s));
        let want = if g.shells[s].role == ShellRole::Body && g.shell_faces(s).count() == 4 { 0 } else { 2 };
        assert_eq!(chi, want, "shell {s} at h={h}");
    }
}

#[test]
fn box_face_half_length() {
    let g = make_box(1.0f64, 0.0, 1.0).unwrap();
    let tess = tessellate(&g, 0.0, 0.5).unwrap();
    for pl in &tess.edge_polylines {
        assert_eq!(pl.len(), 3);
    }
    for f in g.topology.face_ids() {
        let area: f64 = tess
            .face_triangles_uv(&g, f)
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| tess.face_uv(&g, f, i).unwrap());
                0.5 * ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0))
            })
            .sum();
        assert!((area - 1.0).abs() < 1e-14);
    }
    audit(&g, 0.0, 0.5);
}

#[test]
fn sphere_and_torus_topology() {
    audit(&sphere(), 0.0, 0.05);
    audit(&sphere(), 1.0, 0.03);
    audit(&torus(), 0.5, 0.05);
}

#[test]
fn resolution_follows_growth() {
    let g = sphere();
    let a = tessellate(&g, 0.0, 0.01).unwrap();
    let b = tessellate(&g, 1.0, 0.01).unwrap();
    assert!(b.vertex_count() > a.vertex_count());
}

#[test]
fn outward_orientation_of_triangles() {
    let g = sphere();
    let tess = tessellate(&g, 0.3, 0.04).unwrap();
    for f in g.topology.face_ids() {
        let body = g.faces[f.0 as usize].shell == 0;
        for t in &tess.face_triangles[f.0 as usize] {
            let [a, b, c] = t.map(|i| tess.vertices[i as usize].coords);
            let n = spacetime4d::linalg::cross(sub(b, a), sub(c, a));
            let out = spacetime4d::linalg::dot(n, sub(a, [0.5; 3]));
            assert_eq!(out > 0.0, body);
        }
    }
}

#[test]
fn radial_partner_is_radial() {
    let g = sphere();
    let tess = tessellate(&g, 0.5, 0.04).unwrap();
    let partner = tess.radial_partner.as_ref().unwrap();
    let mut paired = 0;
    for (i, &p) in partner.iter().enumerate() {
        if p == u32::MAX {
            continue;
        }
        paired += 1;
        let a = sub(tess.vertices[i].coords, [0.5; 3]);
        let b = sub(tess.vertices[p as usize].coords, [0.5; 3]);
        let cr = spacetime4d::linalg::cross(a, b);
        assert!(norm(cr) < 1e-14, "{a:?} {b:?}");
    }
    assert_eq!(paired * 2, tess.vertex_count());
}

#[test]
fn invalid_length() {
    assert!(matches!(tessellate(&sphere(), 0.0, 0.0), Err(TessellateError::BadLength(_))));
    assert!(matches!(tessellate(&sphere(), 0.0, -1.0), Err(TessellateError::BadLength(_))));
    assert!(tessellate(&sphere(), 2.0, 0.1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn watertight_for_random_h_and_t(h in 0.02f64..0.3, t in 0.0f64..=1.0, which in 0usize..2) {
        // torus Edges need at least 2 segments for the complex to be simplicial
        let (g, h) = if which == 0 { (sphere(), h) } else { (torus(), h / 3.0) };
        audit(&g, t, h);
    }
}
