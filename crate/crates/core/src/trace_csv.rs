//! Versioned CSV rendering of an [`IterationTrace`].
//!
//! ```text
//! # circumfeas trace v1 method=crm dim=2
//! iter,x0,x1,dist_a,dist_b,case
//! 0,-1,0.3,1,0.3,TwoXY
//! 1,...
//! ```
//!
//! One row per iterate `x₀ … x_N`; the last row has an empty `case`.
//! Floats use the shortest representation that round-trips, switching to
//! exponent notation for very small or very large magnitudes.

use std::io::{BufRead, BufReader, Read, Write};

use crate::crm::{CardinalityCase, IterationTrace};
use crate::error::{Error, Result};
use crate::vector::Vector;

const MAGIC: &str = "# circumfeas trace v1";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub point: Vector,
    pub dist_a: f64,
    pub dist_b: f64,
    pub case: Option<CardinalityCase>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub method: String,
    pub dim: usize,
    pub rows: Vec<TraceRow>,
}

fn header(dim: usize) -> Vec<String> {
    let mut h = vec!["iter".to_string()];
    h.extend((0..dim).map(|i| format!("x{i}")));
    h.extend(["dist_a", "dist_b", "case"].map(String::from));
    h
}

fn csv_err(e: csv::Error) -> Error {
    Error::Trace(e.to_string())
}

pub fn write_trace<W: Write>(mut out: W, trace: &IterationTrace, method: &str) -> Result<()> {
    if method.is_empty() || method.contains(char::is_whitespace) {
        return Err(Error::InvalidInput(format!("method name {method:?} must be a single word")));
    }
    let dim = trace.final_point.dim();
    writeln!(out, "{MAGIC} method={method} dim={dim}").map_err(|e| Error::Trace(e.to_string()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(dim)).map_err(csv_err)?;
    let cases = trace.steps.iter().map(|s| s.case).chain(std::iter::once(None));
    for (k, ((x, da, db), case)) in trace.iterates().zip(cases).enumerate() {
        let mut rec = vec![k.to_string()];
        rec.extend(x.coords().iter().map(|&c| fmt_f64(c)));
        rec.push(fmt_f64(da));
        rec.push(fmt_f64(db));
        rec.push(case.map_or("", CardinalityCase::as_str).to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Trace(e.to_string()))
}

/// Shortest round-tripping form; exponent notation outside `[1e-5, 1e16)`.
fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn trace_to_string(trace: &IterationTrace, method: &str) -> Result<String> {
    let mut buf = Vec::new();
    write_trace(&mut buf, trace, method)?;
    Ok(String::from_utf8(buf).expect("csv output is ascii"))
}

fn parse_magic(line: &str) -> Result<(String, usize)> {
    let rest = line
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| Error::Trace("missing version comment line".into()))?;
    let (mut method, mut dim) = (None, None);
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("method", v)) if !v.is_empty() => method = Some(v.to_string()),
            Some(("dim", v)) => dim = v.parse::<usize>().ok().filter(|&d| d >= 1),
            _ => return Err(Error::Trace(format!("unexpected field {field:?} in version line"))),
        }
    }
    match (method, dim) {
        (Some(m), Some(d)) => Ok((m, d)),
        _ => Err(Error::Trace("version line needs method= and dim=".into())),
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Trace(format!("bad {what} value {s:?}")))
}

pub fn read_trace<R: Read>(input: R) -> Result<TraceTable> {
    let mut reader = BufReader::new(input);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(|e| Error::Trace(e.to_string()))?;
    let (method, dim) = parse_magic(&first)?;
    let expected = header(dim);

    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let got: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    if got != expected {
        return Err(Error::Trace(format!("header {got:?} does not match dim {dim}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != dim + 4 {
            return Err(Error::Trace(format!("row has {} fields, expected {}", rec.len(), dim + 4)));
        }
        let iter: usize = rec[0].parse().map_err(|_| Error::Trace(format!("bad iter {:?}", &rec[0])))?;
        if iter != rows.len() {
            return Err(Error::Trace(format!("iter {iter} out of sequence")));
        }
        let coords = (1..=dim).map(|i| parse_f64(&rec[i], "coordinate")).collect::<Result<Vec<_>>>()?;
        let dist_a = parse_f64(&rec[dim + 1], "dist_a")?;
        let dist_b = parse_f64(&rec[dim + 2], "dist_b")?;
        if dist_a < 0.0 || dist_b < 0.0 {
            return Err(Error::Trace("negative distance".into()));
        }
        let case = match &rec[dim + 3] {
            "" => None,
            s => Some(s.parse()?),
        };
        rows.push(TraceRow { iter, point: Vector::new(coords)?, dist_a, dist_b, case });
    }
    if rows.is_empty() {
        return Err(Error::Trace("trace has no rows".into()));
    }
    Ok(TraceTable { method, dim, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crm::run_crm;
    use crate::sets::{ConeV, ConvexSet};
    use crate::vector::Tolerance;

    fn sample_trace() -> IterationTrace {
        let a: ConvexSet = ConeV::new(vec![Vector::from([1.0, 0.0]), Vector::from([1.0, 1.0])]).unwrap().into();
        let b: ConvexSet = ConeV::new(vec![Vector::from([0.0, 1.0]), Vector::from([1.0, 1.0])]).unwrap().into();
        run_crm(&a, &b, &Vector::from([-1.0, 0.3]), &Tolerance::default(), 10).unwrap()
    }

    #[test]
    fn round_trip() {
        let t = sample_trace();
        let text = trace_to_string(&t, "crm").unwrap();
        assert!(text.starts_with("# circumfeas trace v1 method=crm dim=2\niter,x0,x1,dist_a,dist_b,case\n"));
        let table = read_trace(text.as_bytes()).unwrap();
        assert_eq!(table.rows.len(), t.iterations_used + 1);
        for ((x, da, db), row) in t.iterates().zip(&table.rows) {
            assert_eq!((x, da, db), (&row.point, row.dist_a, row.dist_b));
        }
        assert_eq!(table.rows.last().unwrap().case, None);
        assert_eq!(table.rows[0].case, t.steps[0].case);
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.0, -0.0, 1.0, 0.1, 1e-5, 9.99e-6, 1e16, -7.744385642149954e-40, 123456.789] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(2.5e-40), "2.5e-40");
        assert_eq!(fmt_f64(0.25), "0.25");
    }

    #[test]
    fn rejects_malformed_input() {
        let good = trace_to_string(&sample_trace(), "crm").unwrap();
        assert!(read_trace(good.replacen("v1", "v2", 1).as_bytes()).is_err());
        assert!(read_trace(good.replacen("dim=2", "dim=3", 1).as_bytes()).is_err());
        assert!(read_trace(good.replacen("\n0,", "\n1,", 1).as_bytes()).is_err());
        assert!(read_trace(good.replace("Three", "Four").as_bytes()).is_err());
        assert!(read_trace("# circumfeas trace v1 method=crm dim=1\niter,x0,dist_a,dist_b,case\n".as_bytes()).is_err());
        assert!(read_trace("".as_bytes()).is_err());
        assert!(write_trace(Vec::new(), &sample_trace(), "two words").is_err());
    }
}
