use std::collections::{BTreeMap, HashMap, HashSet};

use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spacetime4d::geometry::AnalyticCase;
use spacetime4d::linalg::{cross, dot, norm, sub};
use spacetime4d::mesh4::*;
use spacetime4d::slab::{build_spacetime_mesh, BuildOptions, FaceMeshing};
use spacetime4d::slicer::*;

fn sorted_points(mut v: Vec<[f64; 4]>) -> Vec<[f64; 4]> {
    v.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    v
}

#[test]
fn tables_satisfy_invariants() {
    let t = derive_tables();
    validate_tables(&t).unwrap();
    assert_eq!(&t, tables());
    assert_eq!(t.shape_of_case[0], Shape::None);
    assert_eq!(t.shape_of_case[15], Shape::None);
    assert_eq!(t.v2e, [0, 0, 0, 0, 0, 0, 0, 1, 2, 0, 0, 0, 0, 1, 2, 1, 3, 2]);
    // vertex 0 alone cuts edges 0, 1, 2
    let mut e: Vec<i8> = t.case_edges[1][..3].to_vec();
    e.sort_unstable();
    assert_eq!(e, vec![0, 1, 2]);
    // a corrupted table is rejected
    let mut bad = t.clone();
    bad.case_edges[3] = bad.case_edges[5];
    assert!(validate_tables(&bad).is_err());
    let mut bad = t.clone();
    bad.shape_of_case[6] = Shape::Triangle;
    assert!(validate_tables(&bad).is_err());
}

#[test]
fn table_triangles_are_non_overlapping_and_consistently_wound() {
    let t = tables();
    let p = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for r in 1..15 {
        let d: [f64; 4] = std::array::from_fn(|i| if r & (1 << i) != 0 { -1.0 } else { 1.0 });
        let g = [d[1] - d[0], d[2] - d[0], d[3] - d[0]];
        let pts: Vec<[f64; 3]> = t.case_edges[r]
            .iter()
            .map(|&e| {
                let [a, b] = EDGE_ENDPOINTS[e as usize];
                std::array::from_fn(|k| (p[a][k] + p[b][k]) / 2.0)
            })
            .collect();
        let base = t.shape_of_case[r] as usize * 6;
        let n_tri = if t.shape_of_case[r] == Shape::Quad { 2 } else { 1 };
        let mut area = 0.0;
        for k in 0..n_tri {
            let s = [t.v2e[base + 3 * k], t.v2e[base + 3 * k + 1], t.v2e[base + 3 * k + 2]];
            let n = cross(sub(pts[s[1]], pts[s[0]]), sub(pts[s[2]], pts[s[0]]));
            assert!(dot(n, g) > 0.0, "case {r} triangle {k} is not counter-clockwise");
            area += norm(n) / 2.0;
        }
        // the two quad triangles exactly tile the cut polygon
        if t.shape_of_case[r] == Shape::Quad {
            let poly = [0, 1, 3, 2].map(|i| pts[i]);
            let mut a = [0.0; 3];
            for i in 0..4 {
                let c = cross(poly[i], poly[(i + 1) % 4]);
                a = [a[0] + c[0], a[1] + c[1], a[2] + c[2]];
            }
            assert!((norm(a) / 2.0 - area).abs() < 1e-12, "case {r}");
        }
    }
}

#[test]
fn spec_examples() {
    let h = Hyperplane::time_slice(0.5);
    let tri = slice_tet([[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]], &h, tables()).unwrap();
    assert_eq!(tri.shape, Shape::Triangle);
    let got: HashSet<[u64; 3]> = tri.distinct_points().iter().map(|q| h.project(*q).map(f64::to_bits)).collect();
    let want: HashSet<[u64; 3]> = [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.5, 0.0]].iter().map(|q| q.map(f64::to_bits)).collect();
    assert_eq!(got, want);

    let quad = slice_tet([[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 1.0], [0.0, 0.0, 1.0, 1.0]], &h, tables()).unwrap();
    assert_eq!(quad.shape, Shape::Quad);
    let got = sorted_points(quad.distinct_points().to_vec());
    let want = sorted_points(vec![[0.0, 0.5, 0.0, 0.5], [0.0, 0.0, 0.5, 0.5], [0.5, 0.5, 0.0, 0.5], [0.5, 0.0, 0.5, 0.5]]);
    assert_eq!(got, want);

    let below = [[0.0, 0.0, 0.0, 0.1], [1.0, 0.0, 0.0, 0.2], [0.0, 1.0, 0.0, 0.3], [0.0, 0.0, 1.0, 0.4]];
    assert!(slice_tet(below, &h, tables()).is_none());

    let seg = slice_triangle([[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 1.0], [0.0, 1.0, 0.0, 1.0]], &h).unwrap();
    assert!(seg.iter().all(|p| p[3] == 0.5));
    assert!(slice_triangle([[0.0, 0.0, 0.0, 0.5], [1.0, 0.0, 0.0, 0.5], [0.0, 1.0, 0.0, 0.5]], &h).is_none());
    assert!(slice_triangle([[0.0, 0.0, 0.0, 0.7], [1.0, 0.0, 0.0, 0.8], [0.0, 1.0, 0.0, 0.9]], &h).is_none());
}

#[test]
fn tables_match_clipping_oracle_on_random_tets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonempty = 0;
    for _ in 0..10_000 {
        let p: [[f64; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let n: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-0.5..0.5));
        let Some(h) = Hyperplane::new(n, c) else { continue };
        let d = p.map(|q| h.signed_distance(q));
        let oracle = sorted_points(clip_oracle(p, d).into_iter().map(|x| x.1).collect());
        let table = slice_tet(p, &h, tables()).map(|s| sorted_points(s.distinct_points().to_vec())).unwrap_or_default();
        assert_eq!(oracle.len(), table.len());
        for (a, b) in oracle.iter().zip(&table) {
            assert!(norm(sub(*a, *b)) < 1e-12, "{a:?} vs {b:?}");
            assert!(h.signed_distance(*b).abs() < 1e-10);
        }
        nonempty += !table.is_empty() as usize;
    }
    assert!(nonempty > 1000);
}

proptest! {
    #[test]
    fn projection_is_an_isometry(
        n in prop::array::uniform4(-1.0f64..1.0),
        c in prop::array::uniform4(-1.0f64..1.0),
        a in prop::array::uniform3(-2.0f64..2.0),
        b in prop::array::uniform3(-2.0f64..2.0),
    ) {
        prop_assume!(norm(n) > 1e-3);
        let h = Hyperplane::new(n, c).unwrap();
        let basis = h.basis();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot(basis[i], basis[j]) - want).abs() < 1e-12);
            }
            prop_assert!(dot(basis[i], n).abs() < 1e-12 * norm(n));
        }
        // points on the plane built from the basis project back isometrically
        let lift = |q: [f64; 3]| -> [f64; 4] { std::array::from_fn(|k| c[k] + q[0] * basis[0][k] + q[1] * basis[1][k] + q[2] * basis[2][k]) };
        let (pa, pb) = (lift(a), lift(b));
        let d4 = norm(sub(pa, pb));
        let d3 = norm(sub(h.project(pa), h.project(pb)));
        prop_assert!((d4 - d3).abs() <= 1e-12 * d4.max(1.0));
    }
}

#[test]
fn time_slice_basis_is_the_identity() {
    let h = Hyperplane::time_slice(0.3);
    assert_eq!(h.project([0.1, 0.2, 0.3, 0.3]), [0.1, 0.2, 0.3]);
    assert!(Hyperplane::new([0.0; 4], [0.0; 4]).is_none());
}

fn sphere_mesh() -> SpacetimeMesh<f64> {
    let case = AnalyticCase::ExpandingSphere { r0: 0.1, rf: 0.125, side: 1.0, t0: 0.0, tf: 1.0 };
    let geom = case.geometry().unwrap();
    build_spacetime_mesh(&geom, &BuildOptions { slabs: 3, h: 0.1, caps: CapMode::Closed, face_meshing: FaceMeshing::Delaunay })
        .unwrap()
        .0
}

#[test]
fn closed_mesh_slices_into_closed_shells() {
    let mesh = sphere_mesh();
    for h in [
        Hyperplane::time_slice(0.37),
        Hyperplane::new([0.3, -0.2, 0.1, 1.0], [0.5, 0.5, 0.5, 0.5]).unwrap(),
        Hyperplane::new([1.0, 0.0, 0.0, 0.2], [0.52, 0.0, 0.0, 0.0]).unwrap(),
    ] {
        let s = slice_mesh(&mesh, &h);
        assert!(!s.triangles.is_empty());
        let mut count: HashMap<[[u32; 2]; 2], usize> = HashMap::new();
        for t in s.triangles.iter().filter(|t| t.area() >= 1e-20) {
            for i in 0..3 {
                let mut e = [t.sources[i], t.sources[(i + 1) % 3]];
                e.sort_unstable();
                *count.entry(e).or_default() += 1;
            }
        }
        let bad: Vec<_> = count.iter().filter(|&(_, &c)| c != 2).collect();
        assert!(bad.is_empty(), "{} open slice edges", bad.len());
        assert!(!s.segments.is_empty());
    }
}

#[test]
fn end_slices_only_touch_end_vertices() {
    let mesh = sphere_mesh();
    let at = |t: f64| -> HashSet<[u64; 3]> {
        mesh.vertices.iter().filter(|p| p[3] == t).map(|p| [p[0].to_bits(), p[1].to_bits(), p[2].to_bits()]).collect()
    };
    for t in [0.0, 1.0] {
        let s = slice_mesh(&mesh, &Hyperplane::time_slice(t));
        let verts = at(t);
        for tri in &s.triangles {
            for p in tri.points {
                assert!(verts.contains(&p.map(f64::to_bits)));
            }
        }
        if t == 1.0 {
            assert!(!s.triangles.is_empty());
        }
    }
}

#[test]
fn far_plane_gives_empty_slice() {
    let mesh = sphere_mesh();
    let s = slice_mesh(&mesh, &Hyperplane::time_slice(5.0));
    assert_eq!(s.primitive_count(), 0);
    assert_eq!(s.case_histogram[15], mesh.tets.len());
}

#[test]
fn quad_diagonal_is_hidden() {
    let mesh = sphere_mesh();
    let s = slice_mesh(&mesh, &Hyperplane::time_slice(0.37));
    let mut hidden = 0;
    for t in &s.triangles {
        let flags: Vec<bool> = (0..3).map(|i| t.altitudes.iter().all(|a| a[i] == HIDDEN_ALTITUDE)).collect();
        hidden += flags.iter().filter(|&&f| f).count();
        assert!(flags.iter().filter(|&&f| f).count() <= 1);
    }
    assert!(hidden > 0);
}

/// Volume of each pentatope's slice polyhedron, from its boundary-tet slices.
fn kuhn_slice_volume(n: usize, time: f64) -> f64 {
    let mesh: SpacetimeMesh<f64> = kuhn_pentatopes(n);
    let s = slice_mesh(&mesh, &Hyperplane::time_slice(time));
    let mut groups: BTreeMap<usize, Vec<[[f64; 3]; 3]>> = BTreeMap::new();
    for t in &s.triangles {
        groups.entry((t.element as usize - mesh.tets.len()) / 5).or_default().push(t.points);
    }
    let mut total = 0.0;
    for tris in groups.values() {
        let pts: Vec<[f64; 3]> = tris.iter().flatten().copied().collect();
        let k = pts.len() as f64;
        let c = pts.iter().fold([0.0; 3], |a, p| [a[0] + p[0] / k, a[1] + p[1] / k, a[2] + p[2] / k]);
        total += tris.iter().map(|[a, b, d]| dot(sub(*a, c), cross(sub(*b, c), sub(*d, c))).abs() / 6.0).sum::<f64>();
    }
    total
}

#[test]
fn kuhn_slices_fill_the_unit_cube() {
    for t in [0.5, 0.37] {
        let v = kuhn_slice_volume(2, t);
        assert!((v - 1.0).abs() < 1e-12, "t={t}: {v}");
    }
}

#[test]
fn slicing_is_deterministic_and_generic() {
    let mesh = sphere_mesh();
    let h = Hyperplane::time_slice(0.61);
    assert_eq!(slice_mesh(&mesh, &h), slice_mesh(&mesh, &h));
    let mesh32: SpacetimeMesh<f32> = kuhn_pentatopes(1);
    let s = slice_mesh(&mesh32, &Hyperplane::time_slice(0.25f32));
    assert!(!s.triangles.is_empty());
}
