//! File formats: edge-list graphs with a JSON sidecar, node-indexed signals,
//! and frames stored as a vector matrix plus a frequency listing. Node
//! indices are 1-based on disk.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{FrameFamily, Origin, SpectralFrame};
use crate::graph::{Edge, Graph};
use crate::linalg::{CMatrix, CVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub n: usize,
    pub directed: bool,
}

/// Path of the metadata file that accompanies `path`.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["src", "dst", "weight"])?;
    for e in g.edges() {
        w.write_record([(e.src + 1).to_string(), (e.dst + 1).to_string(), e.weight.to_string()])?;
    }
    w.flush()?;
    let meta = GraphMeta {
        n: g.n(),
        directed: g.is_directed(),
    };
    fs::write(meta_path(path), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

fn parse_index(s: &str, line: usize) -> Result<usize> {
    let v: usize = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad node index '{s}'")))?;
    if v == 0 {
        return Err(Error::Parse(format!("line {line}: node indices are 1-based")));
    }
    Ok(v - 1)
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number '{s}'")))
}

/// Reads an edge list. Without a sidecar the graph is undirected and `n` is
/// the largest node index.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.len() != 3 || &headers[0] != "src" || &headers[1] != "dst" || &headers[2] != "weight" {
        return Err(Error::Parse(format!(
            "{}: expected header src,dst,weight",
            path.display()
        )));
    }
    let mut edges = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 3 {
            return Err(Error::Parse(format!("line {line}: expected 3 fields")));
        }
        edges.push(Edge {
            src: parse_index(&rec[0], line)?,
            dst: parse_index(&rec[1], line)?,
            weight: parse_f64(&rec[2], line)?,
        });
    }
    let mp = meta_path(path);
    let meta = if mp.exists() {
        serde_json::from_str::<GraphMeta>(&fs::read_to_string(&mp)?)?
    } else {
        GraphMeta {
            n: edges.iter().map(|e| e.src.max(e.dst) + 1).max().unwrap_or(0),
            directed: false,
        }
    };
    Graph::new(meta.n, edges, meta.directed)
}

/// Formats a complex number as `re+imj`, or just `re` when the imaginary part
/// is exactly zero. Uses shortest round-trip decimal digits.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        return z.re.to_string();
    }
    if z.im.is_sign_negative() {
        format!("{}-{}j", z.re, -z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    let bad = || Error::Parse(format!("bad complex value '{s}'"));
    let Some(body) = t.strip_suffix('j') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im_abs: f64 = body[split + 1..].parse().map_err(|_| bad())?;
    let im = if bytes[split] == b'-' { -im_abs } else { im_abs };
    Ok(Complex64::new(re, im))
}

pub fn write_signal(path: &Path, s: &CVector) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["node", "value"])?;
    for (i, z) in s.iter().enumerate() {
        w.write_record([(i + 1).to_string(), format_complex(*z)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `node,value` signal; rows may come in any order but every node
/// `1..=n` must appear exactly once.
pub fn read_signal(path: &Path) -> Result<CVector> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 2 {
            return Err(Error::Parse(format!("line {line}: expected node,value")));
        }
        rows.push((parse_index(&rec[0], line)?, parse_complex(&rec[1])?));
    }
    let n = rows.len();
    let mut out = vec![None; n];
    for (idx, z) in rows {
        match out.get_mut(idx) {
            Some(slot @ None) => *slot = Some(z),
            Some(Some(_)) => return Err(Error::Parse(format!("node {} listed twice", idx + 1))),
            None => return Err(Error::Parse(format!("node {} exceeds signal length {n}", idx + 1))),
        }
    }
    Ok(CVector::from_iterator(
        n,
        out.into_iter().map(|z| z.expect("all slots filled")),
    ))
}

/// Writes the frame vectors (`n` rows, a `re,im` column pair per vector) and
/// the frequency listing.
pub fn write_frame(vectors_path: &Path, frequencies_path: &Path, f: &SpectralFrame) -> Result<()> {
    let mut w = csv::Writer::from_path(vectors_path)?;
    let mut header = Vec::with_capacity(2 * f.len());
    for m in 1..=f.len() {
        header.push(format!("v{m}_re"));
        header.push(format!("v{m}_im"));
    }
    w.write_record(&header)?;
    for i in 0..f.n() {
        let mut row = Vec::with_capacity(2 * f.len());
        for m in 0..f.len() {
            let z = f.vectors[(i, m)];
            row.push(z.re.to_string());
            row.push(z.im.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(frequencies_path)?;
    w.write_record(["index", "frequency", "origin", "family"])?;
    for m in 0..f.len() {
        w.write_record([
            (m + 1).to_string(),
            f.frequencies[m].to_string(),
            f.origins[m].label(),
            f.family.name().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_frame(vectors_path: &Path, frequencies_path: &Path) -> Result<SpectralFrame> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(frequencies_path)?;
    let mut frequencies = Vec::new();
    let mut origins = Vec::new();
    let mut family = None;
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 4 {
            return Err(Error::Parse(format!(
                "line {line}: expected index,frequency,origin,family"
            )));
        }
        if parse_index(&rec[0], line)? != i {
            return Err(Error::Parse(format!("line {line}: indices must be consecutive")));
        }
        frequencies.push(parse_f64(&rec[1], line)?);
        origins.push(Origin::parse(&rec[2])?);
        let fam = FrameFamily::parse(&rec[3])?;
        if *family.get_or_insert(fam) != fam {
            return Err(Error::Parse(format!("line {line}: mixed frame families")));
        }
    }
    let m = frequencies.len();
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(vectors_path)?;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 2 * m {
            return Err(Error::Parse(format!(
                "line {line}: expected {} values for {m} vectors",
                2 * m
            )));
        }
        let mut row = Vec::with_capacity(m);
        for k in 0..m {
            row.push(Complex64::new(
                parse_f64(&rec[2 * k], line)?,
                parse_f64(&rec[2 * k + 1], line)?,
            ));
        }
        rows.push(row);
    }
    let n = rows.len();
    let vectors = CMatrix::from_fn(n, m, |i, k| rows[i][k]);
    Ok(SpectralFrame {
        vectors,
        frequencies,
        origins,
        family: family.unwrap_or(FrameFamily::Basis),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::mag_gfb;
    use crate::frames::lidgff;
    use crate::generators::make_random_connected;
    use proptest::prelude::*;

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("dgff-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn graph_round_trip() {
        let g = make_random_connected(9, 0.3, true, 1).unwrap();
        let p = tmp("g.csv");
        write_graph(&p, &g).unwrap();
        assert_eq!(read_graph(&p).unwrap(), g);
    }

    #[test]
    fn graph_without_sidecar_is_undirected() {
        let p = tmp("plain.csv");
        fs::write(&p, "src,dst,weight\n1,2,1.0\n2,3,0.5\n").unwrap();
        let g = read_graph(&p).unwrap();
        assert_eq!(g.n(), 3);
        assert!(!g.is_directed());
        fs::write(&p, "src,dst,weight\n0,2,1.0\n").unwrap();
        assert!(read_graph(&p).is_err());
        assert!(read_graph(&tmp("missing.csv")).is_err());
    }

    #[test]
    fn complex_text_format() {
        for (s, z) in [
            ("0.5", Complex64::new(0.5, 0.0)),
            ("0.5-0.25j", Complex64::new(0.5, -0.25)),
            ("-1e-3+2E+2j", Complex64::new(-1e-3, 200.0)),
        ] {
            assert_eq!(parse_complex(s).unwrap(), z);
        }
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+j").is_err());
    }

    #[test]
    fn frame_round_trip_is_bit_identical() {
        let g = make_random_connected(7, 0.3, true, 2).unwrap();
        let f = lidgff(&mag_gfb(&g, 0.1).unwrap(), 0.3, 0.7).unwrap();
        let (a, b) = (tmp("f.csv"), tmp("f_freq.csv"));
        write_frame(&a, &b, &f).unwrap();
        assert_eq!(read_frame(&a, &b).unwrap(), f);
    }

    proptest! {
        #[test]
        fn complex_round_trip(re in proptest::num::f64::NORMAL | proptest::num::f64::ZERO,
                              im in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
            let z = Complex64::new(re, im);
            let back = parse_complex(&format_complex(z)).unwrap();
            prop_assert_eq!(back.re.to_bits(), z.re.to_bits());
            prop_assert_eq!(back.im.to_bits(), z.im.to_bits());
        }
    }
}
