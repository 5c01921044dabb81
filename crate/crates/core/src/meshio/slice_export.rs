use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::MeshIoError;
use crate::mesh4::{CAP_FINAL, CAP_INITIAL};
use crate::scalar::Real;
use crate::slicer::SliceResult;

fn face_group(tag: u32) -> String {
    match tag {
        CAP_INITIAL => "cap_initial".into(),
        CAP_FINAL => "cap_final".into(),
        t => format!("face_{t}"),
    }
}

/// OBJ-style text: one `o` group per tag (tet groups by tag, then Edge
/// groups), `v` lines deduplicated within a group, `f`/`l` with global 1-based
/// vertex numbers.
pub fn write_slice<T: Real, W: Write>(result: &SliceResult<T>, w: W) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "# slice: {} triangles, {} segments", result.triangles.len(), result.segments.len())?;
    let mut faces: BTreeMap<u32, Vec<[[T; 3]; 3]>> = BTreeMap::new();
    for t in &result.triangles {
        faces.entry(t.tag).or_default().push(t.points);
    }
    let mut edges: BTreeMap<u32, Vec<[[T; 3]; 2]>> = BTreeMap::new();
    for s in &result.segments {
        edges.entry(s.tag).or_default().push(s.points);
    }
    let mut next = 1usize;
    let mut group = |w: &mut BufWriter<W>, name: String, prims: Vec<Vec<[T; 3]>>, key: &str| -> io::Result<()> {
        writeln!(w, "o {name}")?;
        let mut index: HashMap<[u64; 3], usize> = HashMap::new();
        let mut rows = Vec::with_capacity(prims.len());
        for prim in prims {
            let mut ids = Vec::with_capacity(prim.len());
            for p in &prim {
                let bits = p.map(|x| x.as_f64().to_bits());
                let id = match index.get(&bits) {
                    Some(&id) => id,
                    None => {
                        writeln!(w, "v {:.9e} {:.9e} {:.9e}", p[0], p[1], p[2])?;
                        index.insert(bits, next);
                        next += 1;
                        next - 1
                    }
                };
                ids.push(id);
            }
            rows.push(ids);
        }
        for ids in rows {
            write!(w, "{key}")?;
            for i in ids {
                write!(w, " {i}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    };
    for (tag, tris) in faces {
        group(&mut w, face_group(tag), tris.into_iter().map(|t| t.to_vec()).collect(), "f")?;
    }
    for (tag, segs) in edges {
        group(&mut w, format!("edge_{tag}"), segs.into_iter().map(|s| s.to_vec()).collect(), "l")?;
    }
    w.flush()
}

pub fn export_slice<T: Real>(path: impl AsRef<Path>, result: &SliceResult<T>) -> Result<(), MeshIoError> {
    write_slice(result, File::create(path)?)?;
    Ok(())
}
