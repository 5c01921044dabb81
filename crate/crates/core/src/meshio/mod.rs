//! Mesh files: keyword/section text and binary 4D meshes, the packed viewer
//! format and OBJ-style slice export.

mod pack;
mod slice_export;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use thiserror::Error;

pub use pack::{decode_pack4, encode_pack4, expand_pentatopes, read_pack4, write_pack4, Pack4};
pub use slice_export::{export_slice, write_slice};

use crate::mesh4::{Element, MeshError, SpacetimeMesh};
use crate::scalar::Real;

pub const BINARY_MAGIC: &[u8; 4] = b"M4BN";
pub const BINARY_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum MeshIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("byte offset {offset}: {msg}")]
    Binary { offset: u64, msg: String },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid mesh: {0}")]
    Invalid(#[from] MeshError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mesh4Format {
    #[default]
    Text,
    Binary,
}

fn vertex_ref(steiner: bool) -> u32 {
    steiner as u32
}

/// Text layout: `MeshVersionFormatted 2`, `Dimension 4`, then `Vertices`,
/// `Tetrahedra`, `Triangles`, `Edges`, `Pentatopes` sections (keyword, count,
/// rows; 1-based indices, trailing ref) and `End`. Empty sections are omitted.
pub fn write_mesh4_text<T: Real, W: Write>(mesh: &SpacetimeMesh<T>, w: W) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "MeshVersionFormatted 2")?;
    writeln!(w, "Dimension 4")?;
    if !mesh.vertices.is_empty() {
        writeln!(w, "\nVertices\n{}", mesh.vertices.len())?;
        for (p, &s) in mesh.vertices.iter().zip(&mesh.steiner) {
            writeln!(w, "{:.16e} {:.16e} {:.16e} {:.16e} {}", p[0], p[1], p[2], p[3], vertex_ref(s))?;
        }
    }
    fn section<const N: usize, W: Write>(w: &mut W, name: &str, els: &[Element<N>]) -> io::Result<()> {
        if els.is_empty() {
            return Ok(());
        }
        writeln!(w, "\n{name}\n{}", els.len())?;
        for e in els {
            for v in e.vertices {
                write!(w, "{} ", v as u64 + 1)?;
            }
            writeln!(w, "{}", e.tag)?;
        }
        Ok(())
    }
    section(&mut w, "Tetrahedra", &mesh.tets)?;
    section(&mut w, "Triangles", &mesh.triangles)?;
    section(&mut w, "Edges", &mesh.segments)?;
    section(&mut w, "Pentatopes", &mesh.pentatopes)?;
    writeln!(w, "\nEnd")?;
    w.flush()
}

struct Lines<R> {
    inner: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next non-blank line, trimmed.
    fn next(&mut self) -> Result<Option<String>, MeshIoError> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Ok(Some(t.to_string()));
            }
        }
        Ok(None)
    }

    fn expect(&mut self, what: &str) -> Result<String, MeshIoError> {
        self.next()?.ok_or_else(|| self.err(format!("unexpected end of file, expected {what}")))
    }

    fn err(&self, msg: impl Into<String>) -> MeshIoError {
        MeshIoError::Parse { line: self.line, msg: msg.into() }
    }
}

fn parse_row<T: std::str::FromStr>(lines: &Lines<impl BufRead>, row: &str, n: usize) -> Result<Vec<T>, MeshIoError> {
    let fields: Vec<&str> = row.split_whitespace().collect();
    if fields.len() != n {
        return Err(lines.err(format!("expected {n} fields, found {}", fields.len())));
    }
    fields
        .iter()
        .map(|f| f.parse::<T>().map_err(|_| lines.err(format!("malformed number {f:?}"))))
        .collect()
}

pub fn read_mesh4_text<T: Real, R: BufRead>(r: R) -> Result<SpacetimeMesh<T>, MeshIoError> {
    let mut lines = Lines { inner: r.lines(), line: 0 };
    let mut mesh = SpacetimeMesh::new();
    let header = lines.expect("MeshVersionFormatted")?;
    if header.split_whitespace().next() != Some("MeshVersionFormatted") {
        return Err(lines.err("missing MeshVersionFormatted header"));
    }
    let dim = lines.expect("Dimension")?;
    if dim.split_whitespace().collect::<Vec<_>>() != ["Dimension", "4"] {
        return Err(lines.err(format!("expected 'Dimension 4', found {dim:?}")));
    }
    loop {
        let key = lines.expect("section keyword or End")?;
        if key == "End" {
            break;
        }
        let count_line = lines.expect("section count")?;
        let count: usize = count_line.parse().map_err(|_| lines.err(format!("bad count {count_line:?}")))?;
        macro_rules! elements {
            ($field:ident, $n:literal) => {{
                for _ in 0..count {
                    let row = lines.expect("element row")?;
                    let f: Vec<u64> = parse_row(&lines, &row, $n + 1)?;
                    let mut v = [0u32; $n];
                    for i in 0..$n {
                        if f[i] == 0 || f[i] > u32::MAX as u64 {
                            return Err(lines.err(format!("vertex index {} out of range", f[i])));
                        }
                        v[i] = (f[i] - 1) as u32;
                    }
                    let tag = u32::try_from(f[$n]).map_err(|_| lines.err("ref out of range"))?;
                    mesh.$field.push(Element::new(v, tag));
                }
            }};
        }
        match key.as_str() {
            "Vertices" => {
                for _ in 0..count {
                    let row = lines.expect("vertex row")?;
                    let fields: Vec<&str> = row.split_whitespace().collect();
                    if fields.len() != 5 {
                        return Err(lines.err(format!("expected 5 fields, found {}", fields.len())));
                    }
                    let mut p = [T::zero(); 4];
                    for i in 0..4 {
                        let x: f64 = fields[i].parse().map_err(|_| lines.err(format!("malformed real {:?}", fields[i])))?;
                        p[i] = T::lit(x);
                    }
                    let r: u32 = fields[4].parse().map_err(|_| lines.err("malformed vertex ref"))?;
                    mesh.push_vertex(p, r == 1);
                }
            }
            "Tetrahedra" => elements!(tets, 4),
            "Triangles" => elements!(triangles, 3),
            "Edges" => elements!(segments, 2),
            "Pentatopes" => elements!(pentatopes, 5),
            other => return Err(lines.err(format!("unknown section {other:?}"))),
        }
    }
    mesh.validate()?;
    Ok(mesh)
}

/// Binary layout (little-endian): magic `M4BN`, u32 version, five u64 counts
/// (vertices, tets, triangles, edges, pentatopes); vertices as 4 f64 + u32 ref;
/// elements as 0-based u32 indices + u32 ref.
pub fn write_mesh4_binary<T: Real, W: Write>(mesh: &SpacetimeMesh<T>, w: W) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    w.write_all(BINARY_MAGIC)?;
    w.write_u32::<LittleEndian>(BINARY_VERSION)?;
    for n in [mesh.vertices.len(), mesh.tets.len(), mesh.triangles.len(), mesh.segments.len(), mesh.pentatopes.len()] {
        w.write_u64::<LittleEndian>(n as u64)?;
    }
    for (p, &s) in mesh.vertices.iter().zip(&mesh.steiner) {
        for x in p {
            w.write_f64::<LittleEndian>(x.as_f64())?;
        }
        w.write_u32::<LittleEndian>(vertex_ref(s))?;
    }
    fn section<const N: usize, W: Write>(w: &mut W, els: &[Element<N>]) -> io::Result<()> {
        for e in els {
            for v in e.vertices {
                w.write_u32::<LittleEndian>(v)?;
            }
            w.write_u32::<LittleEndian>(e.tag)?;
        }
        Ok(())
    }
    section(&mut w, &mesh.tets)?;
    section(&mut w, &mesh.triangles)?;
    section(&mut w, &mesh.segments)?;
    section(&mut w, &mesh.pentatopes)?;
    w.flush()
}

struct Counting<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> Read for Counting<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.offset += n as u64;
        Ok(n)
    }
}

pub fn read_mesh4_binary<T: Real, R: Read>(r: R) -> Result<SpacetimeMesh<T>, MeshIoError> {
    let mut r = Counting { inner: r, offset: 0 };
    let fail = |offset: u64, e: io::Error| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            MeshIoError::Binary { offset, msg: "truncated file".into() }
        } else {
            MeshIoError::Io(e)
        }
    };
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|e| fail(0, e))?;
    if &magic != BINARY_MAGIC {
        return Err(MeshIoError::Binary { offset: 0, msg: "bad magic".into() });
    }
    let version = r.read_u32::<LittleEndian>().map_err(|e| fail(4, e))?;
    if version != BINARY_VERSION {
        return Err(MeshIoError::Binary { offset: 4, msg: format!("unsupported version {version}") });
    }
    let mut counts = [0usize; 5];
    for c in &mut counts {
        let off = r.offset;
        let n = r.read_u64::<LittleEndian>().map_err(|e| fail(off, e))?;
        *c = usize::try_from(n)
            .ok()
            .filter(|&n| n <= u32::MAX as usize)
            .ok_or_else(|| MeshIoError::Binary { offset: off, msg: format!("count {n} too large") })?;
    }
    let mut mesh = SpacetimeMesh::new();
    for _ in 0..counts[0] {
        let off = r.offset;
        let mut p = [T::zero(); 4];
        for x in &mut p {
            *x = T::lit(r.read_f64::<LittleEndian>().map_err(|e| fail(off, e))?);
        }
        let s = r.read_u32::<LittleEndian>().map_err(|e| fail(off, e))?;
        mesh.push_vertex(p, s == 1);
    }
    fn section<const N: usize, R: Read>(
        r: &mut Counting<R>,
        n: usize,
        out: &mut Vec<Element<N>>,
        fail: &impl Fn(u64, io::Error) -> MeshIoError,
    ) -> Result<(), MeshIoError> {
        out.reserve(n.min(1 << 20));
        for _ in 0..n {
            let off = r.offset;
            let mut v = [0u32; N];
            for x in &mut v {
                *x = r.read_u32::<LittleEndian>().map_err(|e| fail(off, e))?;
            }
            let tag = r.read_u32::<LittleEndian>().map_err(|e| fail(off, e))?;
            out.push(Element::new(v, tag));
        }
        Ok(())
    }
    section(&mut r, counts[1], &mut mesh.tets, &fail)?;
    section(&mut r, counts[2], &mut mesh.triangles, &fail)?;
    section(&mut r, counts[3], &mut mesh.segments, &fail)?;
    section(&mut r, counts[4], &mut mesh.pentatopes, &fail)?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(MeshIoError::Binary { offset: r.offset - 1, msg: "trailing bytes".into() });
    }
    mesh.validate()?;
    Ok(mesh)
}

pub fn write_mesh4<T: Real>(path: impl AsRef<Path>, mesh: &SpacetimeMesh<T>, format: Mesh4Format) -> Result<(), MeshIoError> {
    let f = File::create(path)?;
    match format {
        Mesh4Format::Text => write_mesh4_text(mesh, f)?,
        Mesh4Format::Binary => write_mesh4_binary(mesh, f)?,
    }
    Ok(())
}

/// Reads either format, detected by the binary magic.
pub fn read_mesh4<T: Real>(path: impl AsRef<Path>) -> Result<SpacetimeMesh<T>, MeshIoError> {
    let mut r = BufReader::new(File::open(path)?);
    if r.fill_buf()?.starts_with(BINARY_MAGIC) {
        read_mesh4_binary(r)
    } else {
        read_mesh4_text(r)
    }
}
