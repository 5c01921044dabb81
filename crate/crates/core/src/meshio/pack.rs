use std::collections::HashSet;
use std::io::{Cursor, Read};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::MeshIoError;
use crate::mesh4::{pentatope_boundary_tets, Element, SpacetimeMesh};
use crate::scalar::Real;

pub const PACK_MAGIC: &[u8; 4] = b"PAK4";
pub const PACK_VERSION: u32 = 1;

/// Decoded viewer pack: f32 vertices, 0-based tets and Edge triangles with refs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Pack4 {
    pub vertices: Vec<[f32; 4]>,
    pub tets: Vec<([u32; 4], u32)>,
    pub triangles: Vec<([u32; 3], u32)>,
    pub bbox_min: [f32; 4],
    pub bbox_max: [f32; 4],
}

/// Mesh tets followed by the distinct boundary tets of every pentatope,
/// in first-occurrence order.
pub fn expand_pentatopes<T: Real>(mesh: &SpacetimeMesh<T>) -> Vec<Element<4>> {
    let key = |t: [u32; 4]| {
        let mut k = t;
        k.sort_unstable();
        k
    };
    let mut seen: HashSet<[u32; 4]> = mesh.tets.iter().map(|t| key(t.vertices)).collect();
    let mut out = mesh.tets.clone();
    for p in &mesh.pentatopes {
        for t in pentatope_boundary_tets(p.vertices) {
            if seen.insert(key(t)) {
                out.push(Element::new(t, p.tag));
            }
        }
    }
    out
}

pub fn encode_pack4<T: Real>(mesh: &SpacetimeMesh<T>) -> Result<Vec<u8>, MeshIoError> {
    let tets = expand_pentatopes(mesh);
    let count = |n: usize, what: &str| u32::try_from(n).map_err(|_| MeshIoError::Capacity(format!("{n} {what}")));
    let (nv, nt, ne) = (count(mesh.vertices.len(), "vertices")?, count(tets.len(), "tets")?, count(mesh.triangles.len(), "triangles")?);
    let mut out = Vec::with_capacity(20 + 16 * nv as usize + 20 * nt as usize + 16 * ne as usize + 32);
    out.extend_from_slice(PACK_MAGIC);
    for x in [PACK_VERSION, nv, nt, ne] {
        out.write_u32::<LittleEndian>(x).unwrap();
    }
    let mut lo = [f32::INFINITY; 4];
    let mut hi = [f32::NEG_INFINITY; 4];
    for p in &mesh.vertices {
        for i in 0..4 {
            let x = p[i].as_f64() as f32;
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
            out.write_f32::<LittleEndian>(x).unwrap();
        }
    }
    if mesh.vertices.is_empty() {
        lo = [0.0; 4];
        hi = [0.0; 4];
    }
    for t in &tets {
        for v in t.vertices {
            out.write_u32::<LittleEndian>(v).unwrap();
        }
        out.write_u32::<LittleEndian>(t.tag).unwrap();
    }
    for t in &mesh.triangles {
        for v in t.vertices {
            out.write_u32::<LittleEndian>(v).unwrap();
        }
        out.write_u32::<LittleEndian>(t.tag).unwrap();
    }
    for x in lo.iter().chain(&hi) {
        out.write_f32::<LittleEndian>(*x).unwrap();
    }
    Ok(out)
}

pub fn decode_pack4(bytes: &[u8]) -> Result<Pack4, MeshIoError> {
    let mut r = Cursor::new(bytes);
    let err = |r: &Cursor<&[u8]>, msg: &str| MeshIoError::Binary { offset: r.position(), msg: msg.into() };
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|_| err(&r, "truncated header"))?;
    if &magic != PACK_MAGIC {
        return Err(err(&r, "bad magic"));
    }
    let mut head = [0u32; 4];
    for h in &mut head {
        *h = r.read_u32::<LittleEndian>().map_err(|_| err(&r, "truncated header"))?;
    }
    let [version, nv, nt, ne] = head;
    if version != PACK_VERSION {
        return Err(err(&r, "unsupported version"));
    }
    let want = 20 + 16 * nv as u64 + 20 * nt as u64 + 16 * ne as u64 + 32;
    if bytes.len() as u64 != want {
        return Err(MeshIoError::Binary { offset: bytes.len() as u64, msg: format!("size {} does not match counts ({want})", bytes.len()) });
    }
    let mut p = Pack4::default();
    for _ in 0..nv {
        let mut v = [0f32; 4];
        for x in &mut v {
            *x = r.read_f32::<LittleEndian>().unwrap();
        }
        p.vertices.push(v);
    }
    for _ in 0..nt {
        let mut v = [0u32; 4];
        for x in &mut v {
            *x = r.read_u32::<LittleEndian>().unwrap();
        }
        p.tets.push((v, r.read_u32::<LittleEndian>().unwrap()));
    }
    for _ in 0..ne {
        let mut v = [0u32; 3];
        for x in &mut v {
            *x = r.read_u32::<LittleEndian>().unwrap();
        }
        p.triangles.push((v, r.read_u32::<LittleEndian>().unwrap()));
    }
    for x in p.bbox_min.iter_mut().chain(p.bbox_max.iter_mut()) {
        *x = r.read_f32::<LittleEndian>().unwrap();
    }
    let bad = p.tets.iter().flat_map(|t| t.0).chain(p.triangles.iter().flat_map(|t| t.0)).any(|i| i >= nv);
    if bad {
        return Err(MeshIoError::Binary { offset: 20, msg: "element index out of range".into() });
    }
    Ok(p)
}

pub fn write_pack4<T: Real>(path: impl AsRef<Path>, mesh: &SpacetimeMesh<T>) -> Result<(), MeshIoError> {
    std::fs::write(path, encode_pack4(mesh)?)?;
    Ok(())
}

pub fn read_pack4(path: impl AsRef<Path>) -> Result<Pack4, MeshIoError> {
    decode_pack4(&std::fs::read(path)?)
}
