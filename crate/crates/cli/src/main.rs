use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use spacetime4d::bench::run_bench;
use spacetime4d::geometry::AnalyticCase;
use spacetime4d::mesh4::{
    check_manifold, expected_volume, kuhn_pentatopes, mesh_volume, pentatope_measure4, CapMode, ManifoldMode,
    SpacetimeMesh,
};
use spacetime4d::meshio::{export_slice, read_mesh4, write_mesh4, write_pack4, Mesh4Format, MeshIoError};
use spacetime4d::slab::{build_spacetime_mesh, BuildError, BuildOptions, BuildReport, FaceMeshing};
use spacetime4d::slicer::{slice_mesh, tables, Hyperplane, Shape, SliceResult};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

type CliResult<T = ()> = Result<T, Failure>;

fn fail(code: u8, err: impl Into<anyhow::Error>) -> Failure {
    Failure { code, err: err.into() }
}

fn usage(msg: impl Into<String>) -> Failure {
    fail(EXIT_USAGE, anyhow!(msg.into()))
}

fn invalid(msg: impl Into<String>) -> Failure {
    fail(EXIT_INVALID, anyhow!(msg.into()))
}

impl From<MeshIoError> for Failure {
    fn from(e: MeshIoError) -> Self {
        let code = match e {
            MeshIoError::Capacity(_) => EXIT_INVALID,
            _ => EXIT_IO,
        };
        fail(code, e)
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        fail(EXIT_INVALID, e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        fail(EXIT_IO, e)
    }
}

#[derive(Parser)]
#[command(name = "st4d", version, about = "Spacetime boundary meshes: generate, verify, slice, pack")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CaseName {
    StaticSphere,
    ExpandingSphere,
    ExpandingTorus,
    Kuhn,
    Box,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Caps {
    Closed,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FaceTet {
    Delaunay,
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Json,
    Ts,
}

#[derive(clap::Args, Clone, Debug)]
struct CaseArgs {
    #[arg(long, value_enum)]
    case: CaseName,
    /// Initial (minor) radius.
    #[arg(long, default_value_t = 0.1)]
    r0: f64,
    /// Final (minor) radius.
    #[arg(long, default_value_t = 0.125)]
    rf: f64,
    /// Initial major radius of the torus.
    #[arg(long, default_value_t = 0.4)]
    big_r0: f64,
    /// Final major radius of the torus.
    #[arg(long, default_value_t = 0.5)]
    big_rf: f64,
    /// Box side length.
    #[arg(long, default_value_t = 1.0)]
    side: f64,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    #[arg(long, default_value_t = 1.0)]
    tf: f64,
    /// Kuhn grid resolution.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Cap mode; spheres default to closed, everything else to open.
    #[arg(long, value_enum)]
    caps: Option<Caps>,
}

#[derive(clap::Args, Clone, Debug)]
struct MeshingArgs {
    #[arg(long, default_value_t = 10)]
    slabs: usize,
    /// Target edge length.
    #[arg(long, default_value_t = 0.025)]
    h: f64,
    #[arg(long, value_enum, default_value_t = FaceTet::Delaunay)]
    face_tet: FaceTet,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a spacetime mesh.
    Gen {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        meshing: MeshingArgs,
        /// Write the binary format instead of text.
        #[arg(long)]
        binary: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check manifoldness and total volume of a mesh file against a case.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        case: CaseArgs,
        /// Largest accepted relative volume error.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Volume error under repeated halving of h, as CSV.
    Convergence {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 10)]
        slabs: usize,
        #[arg(long, value_enum, default_value_t = FaceTet::Delaunay)]
        face_tet: FaceTet,
        /// Number of resolutions (h0, h0/2, ...).
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 0.025)]
        h0: f64,
    },
    /// Slice a mesh file by a hyperplane.
    Slice {
        #[arg(long = "in")]
        input: PathBuf,
        /// Constant-time slice.
        #[arg(long, allow_negative_numbers = true)]
        time: Option<f64>,
        /// Hyperplane normal nx,ny,nz,nt.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        normal: Option<Vec<f64>>,
        /// Point on the hyperplane cx,cy,cz,ct.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        point: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time slicing by random hyperplanes.
    Bench {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Convert a mesh file to the viewer's packed format.
    Pack {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the slicing lookup tables.
    Tables {
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl CaseArgs {
    fn analytic(&self) -> CliResult<AnalyticCase<f64>> {
        let CaseArgs { r0, rf, big_r0, big_rf, side, t0, tf, .. } = *self;
        Ok(match self.case {
            CaseName::StaticSphere => AnalyticCase::StaticSphere { r0, side, t0, tf },
            CaseName::ExpandingSphere => AnalyticCase::ExpandingSphere { r0, rf, side, t0, tf },
            CaseName::ExpandingTorus => AnalyticCase::ExpandingTorus { r0, big_r0, rf, big_rf, side, t0, tf },
            CaseName::Box => AnalyticCase::Box { side, t0, tf },
            CaseName::Kuhn => return Err(usage("kuhn is not an analytic body")),
        })
    }

    fn cap_mode(&self) -> CapMode {
        match self.caps {
            Some(Caps::Closed) => CapMode::Closed,
            Some(Caps::Open) => CapMode::Open,
            None if matches!(self.case, CaseName::StaticSphere | CaseName::ExpandingSphere) => CapMode::Closed,
            None => CapMode::Open,
        }
    }
}

fn face_meshing(f: FaceTet) -> FaceMeshing {
    match f {
        FaceTet::Delaunay => FaceMeshing::Delaunay,
        FaceTet::Cone => FaceMeshing::Cone,
    }
}

fn build(case: &CaseArgs, slabs: usize, h: f64, face_tet: FaceTet) -> CliResult<(SpacetimeMesh<f64>, BuildReport<f64>)> {
    if !(h > 0.0) {
        return Err(usage("--h must be positive"));
    }
    let geom = case.analytic()?.geometry().map_err(|e| fail(EXIT_INVALID, e))?;
    let opts = BuildOptions { slabs, h, caps: case.cap_mode(), face_meshing: face_meshing(face_tet) };
    Ok(build_spacetime_mesh(&geom, &opts)?)
}

fn print_counts(mesh: &SpacetimeMesh<f64>) {
    let nv = mesh.vertices.len();
    let ns = mesh.steiner_count();
    let frac = if nv > 0 { ns as f64 / nv as f64 } else { 0.0 };
    eprintln!("vertices: {nv}");
    eprintln!("steiner vertices: {ns} ({:.4}% of vertices)", 100.0 * frac);
    eprintln!("tetrahedra: {}", mesh.tets.len());
    eprintln!("triangles: {}", mesh.triangles.len());
    eprintln!("edges: {}", mesh.segments.len());
    eprintln!("pentatopes: {}", mesh.pentatopes.len());
}

fn gen(case: &CaseArgs, meshing: &MeshingArgs, binary: bool, out: Option<&Path>) -> CliResult {
    let mesh = if case.case == CaseName::Kuhn {
        if case.n == 0 {
            return Err(usage("--n must be at least 1"));
        }
        kuhn_pentatopes(case.n)
    } else {
        let (mesh, report) = build(case, meshing.slabs, meshing.h, meshing.face_tet)?;
        let t = report.timings;
        eprintln!("time steps: {}", report.times.len());
        eprintln!("geometry tessellation (sec.): {:.3}", t.tessellation.as_secs_f64());
        eprintln!("edge triangulation (sec.): {:.3}", t.nodes_edges.as_secs_f64());
        eprintln!("face tetrahedralization (sec.): {:.3}", t.faces.as_secs_f64());
        eprintln!("caps (sec.): {:.3}", t.caps.as_secs_f64());
        eprintln!("total (sec.): {:.3}", t.total().as_secs_f64());
        mesh
    };
    print_counts(&mesh);
    if let Some(out) = out {
        let format = if binary { Mesh4Format::Binary } else { Mesh4Format::Text };
        write_mesh4(out, &mesh, format)?;
        eprintln!("wrote {}", out.display());
    }
    Ok(())
}

fn verify(input: &Path, case: &CaseArgs, tol: f64) -> CliResult {
    let mesh: SpacetimeMesh<f64> = read_mesh4(input)?;
    print_counts(&mesh);
    if case.case == CaseName::Kuhn {
        return verify_kuhn(&mesh, tol);
    }
    let analytic = case.analytic()?;
    let caps = case.cap_mode();
    let [t0, tf] = analytic.time();
    let mode = match caps {
        CapMode::Closed => ManifoldMode::Closed,
        CapMode::Open => ManifoldMode::WithBoundary { t0, tf },
    };
    let manifold = check_manifold(&mesh, mode);
    eprintln!(
        "manifold ({}): {} ({} faces, {} boundary, {} failures)",
        if caps == CapMode::Closed { "closed" } else { "open" },
        if manifold.pass { "pass" } else { "FAIL" },
        manifold.faces_checked,
        manifold.boundary_faces,
        manifold.failures
    );
    for (f, n) in manifold.bad_adjacency.iter().take(5) {
        eprintln!("  face {f:?} shared by {n} tets");
    }
    for f in manifold.bad_orientation.iter().take(5) {
        eprintln!("  face {f:?} inconsistently oriented");
    }
    let vol = mesh_volume(&mesh, Some(expected_volume(&analytic, caps)));
    let rel = vol.rel_error.unwrap_or(f64::INFINITY);
    eprintln!("measured volume: {:.12}", vol.total);
    eprintln!("expected volume: {:.12}", vol.expected.unwrap_or(f64::NAN));
    eprintln!("relative error: {rel:.6e} (tolerance {tol})");
    match (manifold.pass, rel < tol) {
        (true, true) => {
            eprintln!("verify: pass");
            Ok(())
        }
        (false, _) => Err(invalid("verify: manifold check failed")),
        (true, false) => Err(invalid("verify: volume error above tolerance")),
    }
}

/// The Kuhn grid fills the unit 4-cube; its 4-volume is 1.
fn verify_kuhn(mesh: &SpacetimeMesh<f64>, tol: f64) -> CliResult {
    let total: f64 = mesh
        .pentatopes
        .iter()
        .map(|p| pentatope_measure4(p.vertices.map(|i| mesh.vertices[i as usize])))
        .sum();
    let rel = (total - 1.0).abs();
    eprintln!("measured 4-volume: {total:.15}");
    eprintln!("relative error: {rel:.6e} (tolerance {tol})");
    if rel < tol {
        eprintln!("verify: pass");
        Ok(())
    } else {
        Err(invalid("verify: 4-volume error above tolerance"))
    }
}

fn convergence(case: &CaseArgs, slabs: usize, face_tet: FaceTet, levels: usize, h0: f64) -> CliResult {
    if levels < 2 {
        return Err(usage("--levels must be at least 2"));
    }
    let analytic = case.analytic()?;
    let expected = expected_volume(&analytic, case.cap_mode());
    let mut out = io::stdout().lock();
    writeln!(out, "h,error,order")?;
    let mut prev: Option<f64> = None;
    for level in 0..levels {
        let h = h0 / f64::powi(2.0, level as i32);
        let clock = Instant::now();
        let (mesh, _) = build(case, slabs, h, face_tet)?;
        let err = mesh_volume(&mesh, Some(expected)).rel_error.unwrap_or(f64::NAN);
        eprintln!("h = {h}: {} tets, {:.2} s", mesh.tets.len(), clock.elapsed().as_secs_f64());
        match prev {
            Some(p) => writeln!(out, "{h},{err:e},{}", (p / err).log2())?,
            None => writeln!(out, "{h},{err:e},")?,
        }
        out.flush()?;
        prev = Some(err);
    }
    Ok(())
}

fn four(v: &[f64], flag: &str) -> CliResult<[f64; 4]> {
    <[f64; 4]>::try_from(v).map_err(|_| usage(format!("{flag} takes four comma-separated numbers")))
}

fn plane(time: Option<f64>, normal: Option<&[f64]>, point: Option<&[f64]>) -> CliResult<Hyperplane<f64>> {
    match (time, normal, point) {
        (Some(t), None, None) => Ok(Hyperplane::time_slice(t)),
        (None, Some(n), Some(p)) => {
            Hyperplane::new(four(n, "--normal")?, four(p, "--point")?).ok_or_else(|| usage("--normal must be nonzero"))
        }
        _ => Err(usage("give either --time or both --normal and --point")),
    }
}

fn print_histogram(r: &SliceResult<f64>) {
    let t = tables();
    let (mut tri, mut quad) = (0, 0);
    for (code, &n) in r.case_histogram.iter().enumerate() {
        match t.shape_of_case[code] {
            Shape::Triangle => tri += n,
            Shape::Quad => quad += n,
            Shape::None => {}
        }
    }
    eprintln!("case histogram: {:?}", r.case_histogram);
    eprintln!("triangle cases: {tri}");
    eprintln!("quad cases: {quad}");
    eprintln!("slice triangles: {}", r.triangles.len());
    eprintln!("slice segments: {}", r.segments.len());
}

fn slice(input: &Path, h: &Hyperplane<f64>, out: &Path) -> CliResult {
    let mesh: SpacetimeMesh<f64> = read_mesh4(input)?;
    let clock = Instant::now();
    let r = slice_mesh(&mesh, h);
    eprintln!("slice time (sec.): {:.4}", clock.elapsed().as_secs_f64());
    print_histogram(&r);
    export_slice(out, &r)?;
    Ok(())
}

fn bench(input: &Path, samples: usize, seed: u64) -> CliResult {
    let mesh: SpacetimeMesh<f64> = read_mesh4(input)?;
    let r = run_bench(&mesh, samples, seed);
    eprintln!("seed: {seed}");
    for (i, s) in r.samples.iter().enumerate() {
        eprintln!(
            "sample {i}: normal {:?} point {:?} triangles {} segments {}",
            s.plane.normal, s.plane.point, s.triangles, s.segments
        );
    }
    eprintln!("samples: {}", r.samples.len());
    eprintln!("primitives: {}", r.total_primitives());
    eprintln!("mean slice time (ms): {:.3}", r.mean().as_secs_f64() * 1e3);
    eprintln!("median slice time (ms): {:.3}", r.median().as_secs_f64() * 1e3);
    eprintln!("primitives/sec: {:.0}", r.primitives_per_sec());
    Ok(())
}

fn pack(input: &Path, out: &Path) -> CliResult {
    let mesh: SpacetimeMesh<f64> = read_mesh4(input)?;
    write_pack4(out, &mesh)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn tables_json() -> serde_json::Value {
    let t = tables();
    json!({
        "caseEdges": t.case_edges,
        "edgeEndpoints": t.edge_endpoints,
        "shapeOfCase": t.shape_of_case.map(|s| s as u8),
        "v2e": t.v2e,
    })
}

fn tables_ts() -> String {
    let t = tables();
    let list = |v: serde_json::Value| v.to_string().replace(',', ", ");
    let mut s = String::from("// Generated by `st4d tables --format ts`; do not edit.\n\n");
    s += "export const SHAPE_NONE = 0;\nexport const SHAPE_TRIANGLE = 1;\nexport const SHAPE_QUAD = 2;\n\n";
    s += &format!("export const CASE_EDGES: readonly (readonly number[])[] = {};\n", list(json!(t.case_edges)));
    s += &format!("export const EDGE_ENDPOINTS: readonly (readonly number[])[] = {};\n", list(json!(t.edge_endpoints)));
    s += &format!("export const SHAPE_OF_CASE: readonly number[] = {};\n", list(json!(t.shape_of_case.map(|s| s as u8))));
    s += &format!("export const V2E: readonly number[] = {};\n", list(json!(t.v2e)));
    s
}

fn emit_tables(format: TableFormat, out: Option<&Path>) -> CliResult {
    let text = match format {
        TableFormat::Json => serde_json::to_string_pretty(&tables_json()).expect("tables serialize") + "\n",
        TableFormat::Ts => tables_ts(),
    };
    match out {
        Some(p) => File::create(p)?.write_all(text.as_bytes())?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen { case, meshing, binary, out } => gen(&case, &meshing, binary, out.as_deref()),
        Command::Verify { input, case, tol } => verify(&input, &case, tol),
        Command::Convergence { case, slabs, face_tet, levels, h0 } => convergence(&case, slabs, face_tet, levels, h0),
        Command::Slice { input, time, normal, point, out } => {
            let h = plane(time, normal.as_deref(), point.as_deref())?;
            slice(&input, &h, &out)
        }
        Command::Bench { input, samples } => bench(&input, samples as usize, cli.seed),
        Command::Pack { input, out } => pack(&input, &out),
        Command::Tables { format, out } => emit_tables(format, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
