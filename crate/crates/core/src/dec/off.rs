//! ASCII OFF mesh reader: `OFF` header, `nv nf ne` counts line, vertex
//! coordinates, then polygonal faces (triangles here).

use super::complex::{ComplexMetric, SimplicialComplex};
use super::DecError;
use std::path::Path;

pub fn load_off(path: impl AsRef<Path>) -> Result<SimplicialComplex, DecError> {
    let text = std::fs::read_to_string(path)?;
    parse_off(&text)
}

pub fn parse_off(text: &str) -> Result<SimplicialComplex, DecError> {
    // meaningful lines with their 1-based source line numbers
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty file"))?;
    if header != "OFF" {
        return Err(err(line_no, "expected OFF header"));
    }

    let (line_no, counts) = lines.next().ok_or_else(|| err(line_no, "missing counts line"))?;
    let counts: Vec<&str> = counts.split_whitespace().collect();
    if counts.len() != 3 {
        return Err(err(line_no, "counts line must be `nv nf ne`"));
    }
    let nv: usize = counts[0]
        .parse()
        .map_err(|_| err(line_no, "bad vertex count"))?;
    let nf: usize = counts[1]
        .parse()
        .map_err(|_| err(line_no, "bad face count"))?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| err(line_no, "missing vertex line"))?;
        let xs: Vec<&str> = l.split_whitespace().collect();
        if xs.len() < 3 {
            return Err(err(ln, "vertex needs three coordinates"));
        }
        let mut v = [0.0f64; 3];
        for (k, item) in v.iter_mut().enumerate() {
            *item = xs[k]
                .parse()
                .map_err(|_| err(ln, "bad vertex coordinate"))?;
        }
        vertices.push(v);
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = lines.next().ok_or_else(|| err(line_no, "missing face line"))?;
        let xs: Vec<&str> = l.split_whitespace().collect();
        if xs.is_empty() {
            return Err(err(ln, "empty face line"));
        }
        let k: usize = xs[0].parse().map_err(|_| err(ln, "bad face arity"))?;
        if k != 3 {
            return Err(err(ln, "only triangular faces are supported"));
        }
        if xs.len() < 1 + k {
            return Err(err(ln, "face line too short"));
        }
        let mut f = Vec::with_capacity(k);
        for x in &xs[1..=k] {
            let idx: usize = x.parse().map_err(|_| err(ln, "bad vertex index"))?;
            if idx >= nv {
                return Err(err(ln, "vertex index out of range"));
            }
            f.push(idx);
        }
        faces.push(f);
    }

    SimplicialComplex::from_simplices(vertices, faces, ComplexMetric::Embedded)
}

fn err(line: usize, message: &str) -> DecError {
    DecError::ParseError {
        line,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const OCTA: &str = "OFF
# regular octahedron
6 8 12
 1 0 0
-1 0 0
 0 1 0
 0 -1 0
 0 0 1
 0 0 -1
3 0 2 4
3 2 1 4
3 1 3 4
3 3 0 4
3 2 0 5
3 1 2 5
3 3 1 5
3 0 3 5
";

    #[test]
    fn parses_octahedron() {
        let c = parse_off(OCTA).unwrap();
        assert_eq!(c.simplex_count(0), 6);
        assert_eq!(c.simplex_count(1), 12);
        assert_eq!(c.simplex_count(2), 8);
        assert!(c.check_closed().is_ok());
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "OFF\n6 8 12\nnot a number 0 0\n";
        match parse_off(bad) {
            Err(DecError::ParseError { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_header() {
        assert!(matches!(
            parse_off("NOFF\n1 0 0\n0 0 0\n"),
            Err(DecError::ParseError { line: 1, .. })
        ));
    }
}
