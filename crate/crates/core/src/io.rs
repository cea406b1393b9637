//! Plain-text formats.
//!
//! Point sets: a JSON header line with the tower parameters and provenance,
//! then one point per line as `3n` space-separated GF(q) digits in the
//! canonical scaling. Generator matrices: one row per line, digits separated
//! by spaces, or by commas when `q > 9`. Graphs: one `u v` edge per line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::{CodeArtifact, GraphArtifact};
use crate::construction::{Params, Provenance, TwoWeightSet};
use crate::error::{Error, Result};
use crate::projective::{PointSet, Space};

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Header {
    #[serde(flatten)]
    params: Params,
    provenance: Provenance,
    points: usize,
}

/// A point set as read from disk, before it is attached to a [`Space`].
#[derive(Clone, Debug)]
pub struct PointFile {
    pub params: Params,
    pub provenance: Provenance,
    pub coords: Vec<Vec<u32>>,
}

impl PointFile {
    pub fn into_set(self, space: &Space) -> Result<TwoWeightSet> {
        if self.params != Params::of(space.tower()) {
            return Err(Error::ParamMismatch);
        }
        let idx = self
            .coords
            .iter()
            .map(|c| space.point_from_coords(c).map(|p| p.index))
            .collect::<Result<Vec<_>>>()?;
        Ok(TwoWeightSet {
            params: self.params,
            provenance: self.provenance,
            points: PointSet::new(space.point_count(), idx)?,
        })
    }
}

pub fn write_point_set(mut w: impl Write, space: &Space, set: &TwoWeightSet) -> Result<()> {
    let header = Header {
        params: set.params.clone(),
        provenance: set.provenance.clone(),
        points: set.len(),
    };
    writeln!(w, "{}", serde_json::to_string(&header)?)?;
    for &i in set.points.indices() {
        writeln!(w, "{}", join(&space.point_coords(i), " "))?;
    }
    Ok(())
}

pub fn read_point_set(r: impl BufRead) -> Result<PointFile> {
    let mut lines = r.lines();
    let first = lines.next().ok_or_else(|| Error::Parse("empty point file".into()))??;
    let header: Header = serde_json::from_str(&first).map_err(|e| Error::Parse(format!("header: {e}")))?;
    let width = 3 * header.params.n as usize;
    let mut coords = Vec::with_capacity(header.points);
    for (ln, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_numbers(&line).map_err(|e| Error::Parse(format!("line {}: {e}", ln + 2)))?;
        if row.len() != width {
            return Err(Error::Parse(format!("line {}: expected {width} digits, got {}", ln + 2, row.len())));
        }
        coords.push(row);
    }
    if coords.len() != header.points {
        return Err(Error::Parse(format!("header announces {} points, found {}", header.points, coords.len())));
    }
    Ok(PointFile {
        params: header.params,
        provenance: header.provenance,
        coords,
    })
}

pub fn write_generator(mut w: impl Write, code: &CodeArtifact) -> Result<()> {
    let sep = if code.q <= 9 { " " } else { "," };
    for row in &code.generator {
        writeln!(w, "{}", join(row, sep))?;
    }
    Ok(())
}

pub fn read_generator(r: impl BufRead) -> Result<Vec<Vec<u32>>> {
    r.lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| parse_numbers(&l?))
        .collect()
}

pub fn write_edges(mut w: impl Write, graph: &GraphArtifact) -> Result<()> {
    for (u, v) in graph.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Integers separated by whitespace and/or commas.
pub fn parse_numbers(s: &str) -> Result<Vec<u32>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("not a number: {t:?}"))))
        .collect()
}

fn join(v: &[u32], sep: &str) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(sep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::algebraic_set;
    use crate::field::Tower;

    #[test]
    fn point_set_round_trip() {
        let s = Space::new(Tower::new(3, 1, 2).unwrap()).unwrap();
        let set = algebraic_set(&s).unwrap();
        let mut buf = Vec::new();
        write_point_set(&mut buf, &s, &set).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 85);
        assert!(text.lines().nth(1).unwrap().split(' ').count() == 6);
        let back = read_point_set(buf.as_slice()).unwrap().into_set(&s).unwrap();
        assert_eq!(back.points, set.points);
        assert_eq!(back.provenance, set.provenance);

        let other = Space::new(Tower::new(2, 1, 2).unwrap()).unwrap();
        let err = read_point_set(buf.as_slice()).unwrap().into_set(&other).unwrap_err();
        assert!(matches!(err, Error::ParamMismatch));
    }

    #[test]
    fn malformed_input() {
        assert!(read_point_set(&b""[..]).is_err());
        assert!(read_point_set(&b"{}\n"[..]).is_err());
        let hdr = r#"{"p":2,"e":1,"n":2,"modulus":[1,0,0,1,1],"provenance":{"construction":"imported"},"points":1}"#;
        assert!(read_point_set(format!("{hdr}\n0 0 0 1\n").as_bytes()).is_err());
        assert!(read_point_set(format!("{hdr}\n0 0 0 0 0 x\n").as_bytes()).is_err());
        assert!(read_point_set(format!("{hdr}\n0 0 0 0 0 1\n").as_bytes()).is_ok());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_numbers("3, 1 0\t2").unwrap(), vec![3, 1, 0, 2]);
        assert!(parse_numbers("1 -2").is_err());
    }
}
