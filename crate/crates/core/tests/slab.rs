use std::collections::{HashMap, HashSet};

use spacetime4d::geometry::{AnalyticCase, Geometry};
use spacetime4d::mesh4::*;
use spacetime4d::slab::*;
use spacetime4d::tessellator::tessellate;

fn static_sphere() -> AnalyticCase<f64> {
    AnalyticCase::StaticSphere { r0: 0.1, side: 1.0, t0: 0.0, tf: 1.0 }
}

fn expanding_sphere() -> AnalyticCase<f64> {
    AnalyticCase::ExpandingSphere { r0: 0.1, rf: 0.125, side: 1.0, t0: 0.0, tf: 1.0 }
}

fn torus() -> AnalyticCase<f64> {
    AnalyticCase::ExpandingTorus { r0: 0.1, big_r0: 0.4, rf: 0.125, big_rf: 0.5, side: 1.0, t0: 0.0, tf: 1.0 }
}

fn build(case: &AnalyticCase<f64>, slabs: usize, h: f64, caps: CapMode, face_meshing: FaceMeshing) -> (Geometry<f64>, SpacetimeMesh<f64>, BuildReport<f64>) {
    let geom = case.geometry().unwrap();
    let (mesh, report) = build_spacetime_mesh(&geom, &BuildOptions { slabs, h, caps, face_meshing }).unwrap();
    (geom, mesh, report)
}

#[test]
fn slab_times_hit_both_ends() {
    let t = slab_times([0.0, 1.0], 3);
    assert_eq!(t.len(), 4);
    assert_eq!(t[0], 0.0);
    assert_eq!(t[3], 1.0);
    let t = slab_times([0.1f64, 0.7], 7);
    assert_eq!(*t.last().unwrap(), 0.7);
}

#[test]
fn closed_sphere_meshes_are_manifold() {
    for case in [static_sphere(), expanding_sphere()] {
        for meshing in [FaceMeshing::Delaunay, FaceMeshing::Cone] {
            let (_, mesh, _) = build(&case, 3, 0.1, CapMode::Closed, meshing);
            mesh.validate().unwrap();
            let r = check_manifold(&mesh, ManifoldMode::Closed);
            assert!(r.pass, "{} {meshing:?}: {r:?}", case.name());
        }
    }
}

#[test]
fn open_meshes_have_boundary_only_at_the_ends() {
    for case in [expanding_sphere(), torus()] {
        let (_, mesh, _) = build(&case, 2, 0.1, CapMode::Open, FaceMeshing::Delaunay);
        let r = check_manifold(&mesh, ManifoldMode::WithBoundary { t0: 0.0, tf: 1.0 });
        assert!(r.pass, "{}: {r:?}", case.name());
        assert!(r.boundary_faces > 0);
        assert!(!check_manifold(&mesh, ManifoldMode::Closed).pass);
    }
}

#[test]
fn torus_rejects_closed_caps() {
    let geom = torus().geometry().unwrap();
    let opts = BuildOptions { slabs: 1, h: 0.2, caps: CapMode::Closed, face_meshing: FaceMeshing::Delaunay };
    assert!(matches!(build_spacetime_mesh(&geom, &opts), Err(BuildError::UnsupportedCaps(_))));
    let opts = BuildOptions { slabs: 0, caps: CapMode::Open, ..opts };
    assert_eq!(build_spacetime_mesh(&geom, &opts), Err(BuildError::NoSlabs));
}

#[test]
fn box_lateral_volume_is_exact() {
    let side = 1.5;
    let case = AnalyticCase::Box { side, t0: 0.0, tf: 2.0 };
    for meshing in [FaceMeshing::Delaunay, FaceMeshing::Cone] {
        let (_, mesh, _) = build(&case, 1, 0.7, CapMode::Open, meshing);
        let v = mesh_volume(&mesh, None).total;
        assert!((v - 6.0 * side * side * 2.0).abs() < 1e-12, "{v}");
    }
}

#[test]
fn delaunay_adds_no_vertices_and_cone_adds_one_per_face_slab() {
    let (geom, mesh, report) = build(&expanding_sphere(), 3, 0.1, CapMode::Closed, FaceMeshing::Delaunay);
    assert_eq!(mesh.steiner_count(), 0);
    assert_eq!(mesh.vertices.len(), report.layer_vertices.iter().sum::<usize>());
    let (_, mesh, report) = build(&expanding_sphere(), 3, 0.1, CapMode::Closed, FaceMeshing::Cone);
    assert_eq!(mesh.steiner_count(), geom.face_count() * 3);
    assert_eq!(report.steiner.len(), geom.face_count() * 3);
    for s in &report.steiner {
        assert!(mesh.steiner[s.vertex as usize]);
        let t = [report.times[s.slab], report.times[s.slab + 1]];
        let a = geom.eval_face(s.face, s.u, s.v, t[0]);
        let b = geom.eval_face(s.face, s.u, s.v, t[1]);
        let p = mesh.vertices[s.vertex as usize];
        for i in 0..3 {
            assert!((p[i] - ((1.0 - s.w) * a[i] + s.w * b[i])).abs() < 1e-12);
        }
        assert!((p[3] - ((1.0 - s.w) * t[0] + s.w * t[1])).abs() < 1e-12);
    }
}

#[test]
fn tags_name_the_owning_entities() {
    let (geom, mesh, _) = build(&static_sphere(), 2, 0.15, CapMode::Closed, FaceMeshing::Delaunay);
    let faces: HashSet<u32> = mesh.tets.iter().map(|t| t.tag).collect();
    for f in 0..geom.face_count() as u32 {
        assert!(faces.contains(&f));
    }
    assert!(faces.contains(&CAP_INITIAL) && faces.contains(&CAP_FINAL));
    assert!(mesh.triangles.iter().all(|t| (t.tag as usize) < geom.edge_count()));
    assert_eq!(mesh.segments.len(), geom.node_count() * 2);
    for s in &mesh.segments {
        let [a, b] = s.vertices.map(|i| mesh.vertices[i as usize]);
        // static geometry: segments are parallel to the time axis
        assert_eq!(&a[..3], &b[..3]);
        assert!(b[3] > a[3]);
    }
    // cap tets lie in the end hyperplanes
    for t in &mesh.tets {
        if t.tag == CAP_INITIAL || t.tag == CAP_FINAL {
            let want = if t.tag == CAP_INITIAL { 0.0 } else { 1.0 };
            assert!(t.vertices.iter().all(|&v| mesh.vertices[v as usize][3] == want));
        }
    }
}

#[test]
fn cap_boundary_matches_first_slab_surface() {
    let geom = static_sphere().geometry().unwrap();
    let tess = tessellate(&geom, 0.0, 0.02).unwrap();
    let caps = build_caps(&geom, &tess, 0, CAP_INITIAL).unwrap();
    let mut count: HashMap<[u32; 3], usize> = HashMap::new();
    for t in &caps {
        let v = t.vertices;
        for i in 0..4 {
            let mut f = [v[(i + 1) % 4], v[(i + 2) % 4], v[(i + 3) % 4]];
            f.sort_unstable();
            *count.entry(f).or_default() += 1;
        }
    }
    let exposed: HashSet<[u32; 3]> = count.into_iter().filter(|&(_, c)| c == 1).map(|(f, _)| f).collect();
    let surface: HashSet<[u32; 3]> = tess
        .face_triangles
        .iter()
        .flatten()
        .map(|t| {
            let mut t = *t;
            t.sort_unstable();
            t
        })
        .collect();
    assert_eq!(exposed, surface);
    // cap volume approximates box minus ball
    let mut mesh = SpacetimeMesh::new();
    for v in &tess.vertices {
        mesh.push_vertex([v.coords[0], v.coords[1], v.coords[2], 0.0], false);
    }
    mesh.tets = caps;
    let v = mesh_volume(&mesh, None).total;
    let want = 1.0 - 4.0 / 3.0 * std::f64::consts::PI * 1e-3;
    assert!((v - want).abs() / want < 1e-3, "{v} vs {want}");
}

#[test]
fn split_prism_is_conforming_on_shared_quads() {
    // two prisms sharing the quad (1, 2, 4, 5)
    let a = split_prism([0, 1, 2], [3, 4, 5]);
    let b = split_prism([2, 1, 6], [5, 4, 7]);
    let quad_faces = |tets: &[[u32; 4]; 3]| -> HashSet<[u32; 3]> {
        let quad = [1, 2, 4, 5];
        let mut out = HashSet::new();
        for t in tets {
            for i in 0..4 {
                let mut f = [t[(i + 1) % 4], t[(i + 2) % 4], t[(i + 3) % 4]];
                f.sort_unstable();
                if f.iter().all(|v| quad.contains(v)) {
                    out.insert(f);
                }
            }
        }
        out
    };
    assert_eq!(quad_faces(&a), quad_faces(&b));
    assert_eq!(quad_faces(&a).len(), 2);
}

#[test]
fn volumes_track_expected_values() {
    for (case, caps) in [(static_sphere(), CapMode::Closed), (expanding_sphere(), CapMode::Closed), (torus(), CapMode::Open)] {
        let (_, mesh, _) = build(&case, 4, 0.05, caps, FaceMeshing::Delaunay);
        let want = expected_volume(&case, caps);
        let r = mesh_volume(&mesh, Some(want));
        assert!(r.rel_error.unwrap() < 0.05, "{}: {} vs {}", case.name(), r.total, want);
    }
}

#[test]
fn build_is_deterministic() {
    let a = build(&expanding_sphere(), 2, 0.15, CapMode::Closed, FaceMeshing::Delaunay).1;
    let b = build(&expanding_sphere(), 2, 0.15, CapMode::Closed, FaceMeshing::Delaunay).1;
    assert_eq!(a, b);
}

#[test]
fn builds_in_single_precision() {
    let case = AnalyticCase::<f32>::ExpandingSphere { r0: 0.1, rf: 0.125, side: 1.0, t0: 0.0, tf: 1.0 };
    let geom = case.geometry().unwrap();
    let opts = BuildOptions { slabs: 2, h: 0.15f32, caps: CapMode::Closed, face_meshing: FaceMeshing::Delaunay };
    let (mesh, _) = build_spacetime_mesh(&geom, &opts).unwrap();
    assert!(check_manifold(&mesh, ManifoldMode::Closed).pass);
}
