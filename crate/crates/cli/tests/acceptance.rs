//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Failures are reported, not asserted, so the workspace test suite stays
//! green; set `ST4D_ACCEPTANCE_STRICT=1` to turn any FAIL into a nonzero exit.

use std::io::Cursor;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spacetime4d::geometry::AnalyticCase;
use spacetime4d::mesh4::*;
use spacetime4d::meshio::*;
use spacetime4d::slab::{build_spacetime_mesh, BuildOptions, FaceMeshing, SteinerVertex4};
use spacetime4d::slicer::*;

const DEFAULT_H: f64 = 0.025;
const SLABS: usize = 10;

fn st4d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_st4d")).args(args).output().expect("run st4d")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn static_sphere() -> AnalyticCase<f64> {
    AnalyticCase::StaticSphere { r0: 0.1, side: 1.0, t0: 0.0, tf: 1.0 }
}

fn expanding_sphere() -> AnalyticCase<f64> {
    AnalyticCase::ExpandingSphere { r0: 0.1, rf: 0.125, side: 1.0, t0: 0.0, tf: 1.0 }
}

fn expanding_torus() -> AnalyticCase<f64> {
    AnalyticCase::ExpandingTorus { r0: 0.1, big_r0: 0.4, rf: 0.125, big_rf: 0.5, side: 1.0, t0: 0.0, tf: 1.0 }
}

type Verdict = (bool, String);

fn closed_manifold(dir: &Path) -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for case in ["static-sphere", "expanding-sphere"] {
        let path = dir.join(format!("{case}.m4b"));
        let clock = Instant::now();
        let out = st4d(&["gen", "--case", case, "--caps", "closed", "--binary", "--out", path.to_str().unwrap()]);
        let secs = clock.elapsed().as_secs_f64();
        if !out.status.success() {
            return (false, format!("{case}: gen failed: {}", stderr(&out)));
        }
        let mesh: SpacetimeMesh<f64> = read_mesh4(&path).unwrap();
        let r = check_manifold(&mesh, ManifoldMode::Closed);
        ok &= r.pass && secs < 60.0;
        notes.push(format!("{case}: {} tets, {} failures, {secs:.1} s", mesh.tets.len(), r.failures));
    }
    (ok, notes.join("; "))
}

fn volumes() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (case, caps) in [(static_sphere(), CapMode::Closed), (expanding_sphere(), CapMode::Closed), (expanding_torus(), CapMode::Open)] {
        let geom = case.geometry().unwrap();
        let opts = BuildOptions { slabs: SLABS, h: DEFAULT_H, caps, face_meshing: FaceMeshing::Delaunay };
        let (mesh, _) = build_spacetime_mesh(&geom, &opts).unwrap();
        let r = mesh_volume(&mesh, Some(expected_volume(&case, caps)));
        let rel = r.rel_error.unwrap();
        ok &= rel < 0.05;
        notes.push(format!("{} {:.6} vs {:.6} (rel {rel:.2e})", case.name(), r.total, r.expected.unwrap()));
    }
    (ok, notes.join("; "))
}

fn convergence() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for case in ["static-sphere", "expanding-sphere"] {
        let out = st4d(&["convergence", "--case", case, "--levels", "4", "--h0", "0.025"]);
        if !out.status.success() {
            return (false, format!("{case}: {}", stderr(&out)));
        }
        let csv = String::from_utf8(out.stdout).unwrap();
        let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
        let errors: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
        let orders: Vec<f64> = rows.iter().skip(1).map(|r| r[2].parse().unwrap()).collect();
        ok &= errors.len() == 4;
        ok &= errors.windows(2).all(|w| w[1] < w[0]);
        ok &= orders.iter().all(|p| (1.5..=2.5).contains(p));
        let shown: Vec<String> = orders.iter().map(|p| format!("{p:.2}")).collect();
        notes.push(format!("{case} orders [{}]", shown.join(", ")));
    }
    (ok, notes.join("; "))
}

fn sorted(mut v: Vec<[f64; 4]>) -> Vec<[f64; 4]> {
    v.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    v
}

fn slicer_oracle() -> Verdict {
    let t = tables();
    if let Err(e) = validate_tables(t) {
        return (false, e);
    }
    let mut ok = *t == derive_tables() && t.v2e == [0, 0, 0, 0, 0, 0, 0, 1, 2, 0, 0, 0, 0, 1, 2, 1, 3, 2];
    for r in 0..16 {
        let cut = t.case_edges[r].iter().filter(|&&e| e >= 0).collect::<std::collections::BTreeSet<_>>().len();
        ok &= matches!(cut, 0 | 3 | 4);
        ok &= t.shape_of_case[r] == t.shape_of_case[15 - r];
        let edges = |c: usize| t.case_edges[c].iter().copied().collect::<std::collections::BTreeSet<i8>>();
        ok &= edges(r) == edges(15 - r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst, mut mismatched, mut pairs) = (0.0f64, 0, 0);
    while pairs < 10_000 {
        let p: [[f64; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let n: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-0.5..0.5));
        let Some(h) = Hyperplane::new(n, c) else { continue };
        pairs += 1;
        let d = p.map(|q| h.signed_distance(q));
        let oracle = sorted(clip_oracle(p, d).into_iter().map(|x| x.1).collect());
        let table = slice_tet(p, &h, t).map(|s| sorted(s.distinct_points().to_vec())).unwrap_or_default();
        if oracle.len() != table.len() {
            mismatched += 1;
            continue;
        }
        for (a, b) in oracle.iter().zip(&table) {
            worst = worst.max((0..4).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max));
        }
    }
    ok &= mismatched == 0 && worst <= 1e-12;
    (ok, format!("{pairs} pairs, {mismatched} count mismatches, max deviation {worst:.1e}; table invariants checked"))
}

fn shape_counts(r: &SliceResult<f64>) -> (usize, usize) {
    let t = tables();
    let (mut tri, mut quad) = (0, 0);
    for (code, &n) in r.case_histogram.iter().enumerate() {
        match t.shape_of_case[code] {
            Shape::Triangle => tri += n,
            Shape::Quad => quad += n,
            Shape::None => {}
        }
    }
    (tri, quad)
}

fn phenomenology(dir: &Path) -> Verdict {
    let path = dir.join("expanding-sphere.m4b");
    let mesh: SpacetimeMesh<f64> = read_mesh4(&path).unwrap();
    let (tri0, quad0) = shape_counts(&slice_mesh(&mesh, &Hyperplane::time_slice(0.0)));
    let (tri75, quad75) = shape_counts(&slice_mesh(&mesh, &Hyperplane::time_slice(0.75)));
    let ok = tri0 > 0 && quad0 == 0 && tri75 > 0 && quad75 > 0;
    (ok, format!("t=0: {tri0} triangle / {quad0} quad cases; t=0.75: {tri75} triangle / {quad75} quad cases"))
}

fn kuhn() -> Verdict {
    let m1: SpacetimeMesh<f64> = kuhn_pentatopes(1);
    let each = |m: &SpacetimeMesh<f64>| -> Vec<f64> {
        m.pentatopes.iter().map(|p| pentatope_measure4(p.vertices.map(|i| m.vertices[i as usize]))).collect()
    };
    let v1 = each(&m1);
    let mut ok = m1.pentatopes.len() == 24 && v1.iter().all(|v| (v - 1.0 / 24.0).abs() < 1e-15);
    let m2: SpacetimeMesh<f64> = kuhn_pentatopes(2);
    let total2: f64 = each(&m2).iter().sum();
    ok &= m2.pentatopes.len() == 384 && (total2 - 1.0).abs() <= 1e-12;

    let mut single = SpacetimeMesh::new();
    single.vertices = m1.vertices.clone();
    single.steiner = m1.steiner.clone();
    single.pentatopes.push(m1.pentatopes[0]);
    let manifold = check_manifold(&single, ManifoldMode::Closed).pass;
    ok &= manifold;

    let s = slice_mesh(&m2, &Hyperplane::time_slice(0.5));
    let mut groups: std::collections::BTreeMap<usize, Vec<[[f64; 3]; 3]>> = Default::default();
    for t in &s.triangles {
        groups.entry((t.element as usize - m2.tets.len()) / 5).or_default().push(t.points);
    }
    let mut slice_volume = 0.0;
    for tris in groups.values() {
        let pts: Vec<[f64; 3]> = tris.iter().flatten().copied().collect();
        let k = pts.len() as f64;
        let c = pts.iter().fold([0.0; 3], |a, p| [a[0] + p[0] / k, a[1] + p[1] / k, a[2] + p[2] / k]);
        for [a, b, d] in tris {
            let u = [a[0] - c[0], a[1] - c[1], a[2] - c[2]];
            let v = [b[0] - c[0], b[1] - c[1], b[2] - c[2]];
            let w = [d[0] - c[0], d[1] - c[1], d[2] - c[2]];
            let det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0]);
            slice_volume += det.abs() / 6.0;
        }
    }
    ok &= (slice_volume - 1.0).abs() <= 1e-9;
    (
        ok,
        format!(
            "n=1: 24 x 1/24; n=2: {} pentatopes, total {total2:.15}; single pentatope manifold {manifold}; slice volume at t=0.5 {slice_volume:.12}",
            m2.pentatopes.len()
        ),
    )
}

fn steiner() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (case, caps) in [(static_sphere(), CapMode::Closed), (expanding_sphere(), CapMode::Closed), (expanding_torus(), CapMode::Open)] {
        let geom = case.geometry().unwrap();
        let opts = BuildOptions { slabs: SLABS, h: DEFAULT_H, caps, face_meshing: FaceMeshing::Cone };
        let (mesh, report) = build_spacetime_mesh(&geom, &opts).unwrap();
        let expected = geom.face_count() * SLABS;
        let mut worst = 0.0f64;
        for s in &report.steiner {
            let t = [report.times[s.slab], report.times[s.slab + 1]];
            let e = SteinerVertex4::embed(&geom, s.face, s.u, s.v, s.w, t);
            let stored = mesh.vertices[s.vertex as usize];
            for k in 0..4 {
                worst = worst.max((e[k] - stored[k]).abs()).max((s.coords[k] - stored[k]).abs());
            }
        }
        let frac = mesh.steiner_count() as f64 / mesh.vertices.len() as f64;
        ok &= report.steiner.len() == expected && mesh.steiner_count() == expected && worst <= 1e-12 && frac < 0.05;
        notes.push(format!("{} {}/{} ({:.2}%, max deviation {worst:.1e})", case.name(), report.steiner.len(), expected, 100.0 * frac));
    }
    (ok, notes.join("; "))
}

fn random_real(rng: &mut ChaCha8Rng) -> f64 {
    match rng.random_range(0..5) {
        0 => loop {
            let x = f64::from_bits(rng.random::<u64>());
            if x.is_finite() {
                break x;
            }
        },
        _ => rng.random_range(-1e3..1e3),
    }
}

fn random_mesh(rng: &mut ChaCha8Rng) -> SpacetimeMesh<f64> {
    let nv = rng.random_range(5..40u32);
    let mut m = SpacetimeMesh::new();
    for _ in 0..nv {
        let p = std::array::from_fn(|_| random_real(rng));
        let steiner = rng.random::<bool>();
        m.push_vertex(p, steiner);
    }
    let mut ids: Vec<u32> = (0..nv).collect();
    let tag = |rng: &mut ChaCha8Rng| match rng.random_range(0..6) {
        0 => CAP_INITIAL,
        1 => CAP_FINAL,
        _ => rng.random_range(0..50),
    };
    for _ in 0..rng.random_range(0..30) {
        ids.shuffle(rng);
        m.tets.push(Element::new([ids[0], ids[1], ids[2], ids[3]], tag(rng)));
    }
    for _ in 0..rng.random_range(0..30) {
        ids.shuffle(rng);
        m.triangles.push(Element::new([ids[0], ids[1], ids[2]], tag(rng)));
    }
    for _ in 0..rng.random_range(0..10) {
        ids.shuffle(rng);
        m.segments.push(Element::new([ids[0], ids[1]], tag(rng)));
    }
    for _ in 0..rng.random_range(0..10) {
        ids.shuffle(rng);
        m.pentatopes.push(Element::new([ids[0], ids[1], ids[2], ids[3], ids[4]], tag(rng)));
    }
    m
}

fn bits(m: &SpacetimeMesh<f64>) -> Vec<[u64; 4]> {
    m.vertices.iter().map(|p| p.map(f64::to_bits)).collect()
}

fn round_trips() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut text, mut binary, mut pack) = (0, 0, 0);
    for _ in 0..100 {
        let m = random_mesh(&mut rng);
        let mut buf = Vec::new();
        write_mesh4_text(&m, &mut buf).unwrap();
        let r: SpacetimeMesh<f64> = read_mesh4_text(Cursor::new(buf)).unwrap();
        text += (r == m && bits(&r) == bits(&m)) as usize;

        let mut buf = Vec::new();
        write_mesh4_binary(&m, &mut buf).unwrap();
        let r: SpacetimeMesh<f64> = read_mesh4_binary(Cursor::new(buf)).unwrap();
        binary += (r == m && bits(&r) == bits(&m)) as usize;

        let p = decode_pack4(&encode_pack4(&m).unwrap()).unwrap();
        let tets = expand_pentatopes(&m);
        let verts = p.vertices.len() == m.vertices.len()
            && p.vertices.iter().zip(&m.vertices).all(|(a, b)| (0..4).all(|k| a[k] == b[k] as f32));
        let elems = p.tets == tets.iter().map(|t| (t.vertices, t.tag)).collect::<Vec<_>>()
            && p.triangles == m.triangles.iter().map(|t| (t.vertices, t.tag)).collect::<Vec<_>>();
        pack += (verts && elems) as usize;
    }
    (text == 100 && binary == 100 && pack == 100, format!("text {text}/100, binary {binary}/100, pack {pack}/100"))
}

fn bench_lines(path: &Path, seed: &str) -> Option<Vec<String>> {
    let out = st4d(&["bench", "--in", path.to_str().unwrap(), "--samples", "50", "--seed", seed]);
    out.status.success().then(|| stderr(&out).lines().filter(|l| l.starts_with("sample ")).map(String::from).collect())
}

fn benchmark(dir: &Path) -> Verdict {
    let path = dir.join("expanding-sphere.m4b");
    let (Some(a), Some(b), Some(c)) = (bench_lines(&path, "0"), bench_lines(&path, "0"), bench_lines(&path, "1")) else {
        return (false, "bench failed".into());
    };
    let ok = a.len() == 50 && a == b && a != c;
    (ok, format!("{} samples; same seed identical: {}; other seed differs: {}", a.len(), a == b, a != c))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: [(&str, Box<dyn Fn() -> Verdict + '_>); 9] = [
        ("closed-manifold validity", Box::new(|| closed_manifold(d))),
        ("volume verification", Box::new(volumes)),
        ("convergence", Box::new(convergence)),
        ("slicer oracle equivalence", Box::new(slicer_oracle)),
        ("slice phenomenology", Box::new(|| phenomenology(d))),
        ("Kuhn generator", Box::new(kuhn)),
        ("Steiner accounting", Box::new(steiner)),
        ("format round-trips", Box::new(round_trips)),
        ("benchmark protocol", Box::new(|| benchmark(d))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| (false, "panicked".into()));
        failed += !ok as usize;
        println!("{} {}. {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {}/9 criteria pass", 9 - failed);
    if failed > 0 && std::env::var_os("ST4D_ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
