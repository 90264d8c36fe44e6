//! Text formats: complexes, chains, competitors and experiment manifests.
//!
//! Complex documents list vertices as four decimal fields and maximal
//! simplices as vertex-index tuples. Chain documents carry the fingerprint
//! of their complex, the dimension, the chain length and a hex bitmask.

use std::fmt::Write as _;

use crate::exterior::Vec4;
use crate::homology::{ChainZ2, Gf2Vec, HomologyError, SimplicialComplex};

const COMPLEX_HEADER: &str = "caliblab-complex 1";
const CHAIN_HEADER: &str = "caliblab-chain 1";
const COMPETITOR_HEADER: &str = "caliblab-competitor 1";

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("chain belongs to complex {found}, expected {expected}")]
    WrongComplex { expected: String, found: String },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

struct Lines<'a, I: Iterator<Item = (usize, &'a str)>> {
    inner: I,
    last: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Lines<'a, I> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(syntax(
                self.last + 1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    /// `key value` line.
    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str), ParseError> {
        let (n, l) = self.next(key)?;
        match l.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok((n, v.trim())),
            _ => Err(syntax(n, format!("expected `{key} ...`"))),
        }
    }

    fn keyed_usize(&mut self, key: &str) -> Result<usize, ParseError> {
        let (n, v) = self.keyed(key)?;
        v.parse()
            .map_err(|_| syntax(n, format!("`{key}` needs a non-negative integer")))
    }

    fn expect(&mut self, exact: &str) -> Result<(), ParseError> {
        let (n, l) = self.next(exact)?;
        if l == exact {
            Ok(())
        } else {
            Err(syntax(n, format!("expected `{exact}`")))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.inner.next() {
            None => Ok(()),
            Some((n, _)) => Err(syntax(n, "trailing content")),
        }
    }
}

fn lines(text: &str) -> Lines<'_, impl Iterator<Item = (usize, &str)>> {
    Lines {
        inner: content_lines(text),
        last: 0,
    }
}

pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut s = String::new();
    writeln!(s, "{COMPLEX_HEADER}").unwrap();
    writeln!(s, "vertices {}", k.vertices().len()).unwrap();
    for v in k.vertices() {
        writeln!(s, "{} {} {} {}", v.0[0], v.0[1], v.0[2], v.0[3]).unwrap();
    }
    let tops = k.maximal_simplices();
    writeln!(s, "simplices {}", tops.len()).unwrap();
    for (d, i) in tops {
        let ids: Vec<String> = k.simplex(d, i).iter().map(usize::to_string).collect();
        writeln!(s, "{}", ids.join(" ")).unwrap();
    }
    s.push_str("end\n");
    s
}

pub fn read_complex(text: &str) -> Result<SimplicialComplex, ParseError> {
    let mut it = lines(text);
    it.expect(COMPLEX_HEADER)?;
    let nv = it.keyed_usize("vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = it.next("a vertex")?;
        let fields: Vec<f64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| syntax(n, "vertex fields must be decimal numbers"))?;
        if fields.len() != 4 || fields.iter().any(|x| !x.is_finite()) {
            return Err(syntax(n, "a vertex needs four finite fields"));
        }
        vertices.push(Vec4([fields[0], fields[1], fields[2], fields[3]]));
    }
    let ns = it.keyed_usize("simplices")?;
    let mut simplices = Vec::with_capacity(ns);
    for _ in 0..ns {
        let (n, l) = it.next("a simplex")?;
        let ids: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| syntax(n, "simplex entries must be vertex indices"))?;
        if ids.is_empty() || ids.iter().any(|&i| i >= nv) {
            return Err(syntax(n, "simplex refers to a missing vertex"));
        }
        simplices.push(ids);
    }
    it.expect("end")?;
    it.finish()?;
    Ok(SimplicialComplex::from_simplices(vertices, simplices)?)
}

/// 64-bit FNV-1a hash of the complex document, as 16 hex digits.
pub fn fingerprint(k: &SimplicialComplex) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in write_complex(k).bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

pub fn write_chain(k: &SimplicialComplex, c: &ChainZ2) -> String {
    format!(
        "{CHAIN_HEADER}\ncomplex {}\ndim {}\nlen {}\nbits {}\n",
        fingerprint(k),
        c.dim,
        c.len(),
        c.bits.to_hex()
    )
}

fn parse_bits(n: usize, len: usize, hex: &str) -> Result<Gf2Vec, ParseError> {
    Gf2Vec::from_hex(len, hex).map_err(|m| syntax(n, m))
}

/// Reads a chain and checks it against `k`.
pub fn read_chain(text: &str, k: &SimplicialComplex) -> Result<ChainZ2, ParseError> {
    let mut it = lines(text);
    it.expect(CHAIN_HEADER)?;
    let (_, fp) = it.keyed("complex")?;
    let dim = it.keyed_usize("dim")?;
    let len = it.keyed_usize("len")?;
    let (n, hex) = it.keyed("bits")?;
    it.finish()?;
    let expected = fingerprint(k);
    if fp != expected {
        return Err(ParseError::WrongComplex {
            expected,
            found: fp.to_string(),
        });
    }
    if dim > k.dim() || len != k.len(dim) {
        return Err(syntax(
            n,
            format!("dimension {dim} with {len} simplices does not match the complex"),
        ));
    }
    Ok(ChainZ2 {
        dim,
        bits: parse_bits(n, len, hex)?,
    })
}

/// Four generator fills on the aligned grid of refinement `refine`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetitorFile {
    pub refine: usize,
    pub fingerprint: String,
    pub fills: [[ChainZ2; 2]; 2],
}

pub fn write_competitor(refine: usize, k: &SimplicialComplex, fills: [[&ChainZ2; 2]; 2]) -> String {
    let mut s = format!(
        "{COMPETITOR_HEADER}\nrefine {refine}\ncomplex {}\nlen {}\n",
        fingerprint(k),
        k.len(2)
    );
    for (j, row) in fills.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            writeln!(s, "fill {j} {l} {}", c.bits.to_hex()).unwrap();
        }
    }
    s
}

/// Parses a competitor file without resolving its complex.
pub fn read_competitor(text: &str) -> Result<CompetitorFile, ParseError> {
    let mut it = lines(text);
    it.expect(COMPETITOR_HEADER)?;
    let refine = it.keyed_usize("refine")?;
    if refine == 0 {
        return Err(syntax(it.last, "refine must be at least 1"));
    }
    let (_, fp) = it.keyed("complex")?;
    let len = it.keyed_usize("len")?;
    let mut fills: [[Option<ChainZ2>; 2]; 2] = Default::default();
    for _ in 0..4 {
        let (n, rest) = it.keyed("fill")?;
        let parts: Vec<&str> = rest.split_whitespace().collect();
        let [j, l, hex] = parts[..] else {
            return Err(syntax(n, "expected `fill j l <hex>`"));
        };
        let (j, l): (usize, usize) = match (j.parse(), l.parse()) {
            (Ok(j), Ok(l)) if j < 2 && l < 2 => (j, l),
            _ => return Err(syntax(n, "fill indices must be 0 or 1")),
        };
        if fills[j][l].is_some() {
            return Err(syntax(n, format!("fill {j} {l} given twice")));
        }
        fills[j][l] = Some(ChainZ2 {
            dim: 2,
            bits: parse_bits(n, len, hex)?,
        });
    }
    it.finish()?;
    let [[a, b], [c, d]] = fills;
    Ok(CompetitorFile {
        refine,
        fingerprint: fp.to_string(),
        fills: [
            [
                a.expect("four distinct fills"),
                b.expect("four distinct fills"),
            ],
            [
                c.expect("four distinct fills"),
                d.expect("four distinct fills"),
            ],
        ],
    })
}

impl CompetitorFile {
    /// Checks the file against the rebuilt complex.
    pub fn check_against(&self, k: &SimplicialComplex) -> Result<(), ParseError> {
        let expected = fingerprint(k);
        if self.fingerprint != expected {
            return Err(ParseError::WrongComplex {
                expected,
                found: self.fingerprint.clone(),
            });
        }
        if self.fills[0][0].len() != k.len(2) {
            return Err(syntax(0, "fill length does not match the complex"));
        }
        Ok(())
    }
}

/// Seeded experiment description: `key = value` lines; `seeds` is a comma
/// list or an inclusive range `a..b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub refine: usize,
    pub budget: usize,
    pub perturb_moves: usize,
    pub seeds: Vec<u64>,
}

pub fn read_manifest(text: &str) -> Result<Manifest, ParseError> {
    let mut m = Manifest {
        refine: 2,
        budget: 50_000,
        perturb_moves: 6,
        seeds: Vec::new(),
    };
    let mut have_seeds = false;
    for (n, l) in content_lines(text) {
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| syntax(n, "expected `key = value`"))?;
        let (k, v) = (k.trim(), v.trim());
        let int = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| syntax(n, format!("`{k}` needs an integer")))
        };
        match k {
            "refine" => m.refine = int(v)?,
            "budget" => m.budget = int(v)?,
            "perturb_moves" => m.perturb_moves = int(v)?,
            "seeds" => {
                have_seeds = true;
                m.seeds = if let Some((a, b)) = v.split_once("..") {
                    let (a, b): (u64, u64) = match (a.trim().parse(), b.trim().parse()) {
                        (Ok(a), Ok(b)) if a <= b => (a, b),
                        _ => return Err(syntax(n, "seed range must be `a..b` with a <= b")),
                    };
                    (a..=b).collect()
                } else {
                    v.split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| syntax(n, "seeds must be integers"))?
                };
            }
            _ => return Err(syntax(n, format!("unknown key `{k}`"))),
        }
    }
    if !have_seeds || m.seeds.is_empty() {
        return Err(syntax(0, "manifest must list seeds"));
    }
    if m.refine == 0 {
        return Err(syntax(0, "refine must be at least 1"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_scene, triangulate_yxy};

    fn sample() -> (SimplicialComplex, ChainZ2) {
        let t = triangulate_yxy(&build_scene(0.0, 0.0), 1).unwrap();
        let c = t.fills[1][2].clone();
        (t.complex, c)
    }

    #[test]
    fn complex_round_trip() {
        let (k, _) = sample();
        let text = write_complex(&k);
        let back = read_complex(&text).unwrap();
        assert_eq!(write_complex(&back), text);
        assert_eq!(back.vertices(), k.vertices());
        assert_eq!(back.len(2), k.len(2));
    }

    #[test]
    fn chain_round_trip() {
        let (k, c) = sample();
        let text = write_chain(&k, &c);
        assert_eq!(read_chain(&text, &k).unwrap(), c);
    }

    #[test]
    fn malformed_inputs() {
        let (k, c) = sample();
        let good = write_chain(&k, &c);
        let bad_hex = good.replace("bits ", "bits zz");
        assert!(matches!(
            read_chain(&bad_hex, &k),
            Err(ParseError::Syntax { line: 5, .. })
        ));
        let truncated: String = good.lines().take(3).collect::<Vec<_>>().join("\n");
        assert!(matches!(
            read_chain(&truncated, &k),
            Err(ParseError::Syntax { .. })
        ));
        let other = good.replace(&fingerprint(&k), "0000000000000000");
        assert!(matches!(
            read_chain(&other, &k),
            Err(ParseError::WrongComplex { .. })
        ));
        assert!(read_complex("caliblab-complex 1\nvertices 1\n0 0 0\n").is_err());
        assert!(read_complex("nonsense").is_err());
    }

    #[test]
    fn competitor_round_trip() {
        let (k, c) = sample();
        let text = write_competitor(1, &k, [[&c, &c], [&c, &c]]);
        let f = read_competitor(&text).unwrap();
        assert_eq!(f.fills[1][0], c);
        assert!(f.check_against(&k).is_ok());
        let dup = text.replace("fill 1 1", "fill 0 0");
        assert!(read_competitor(&dup).is_err());
    }

    #[test]
    fn manifests() {
        let m = read_manifest("refine = 1\nseeds = 3..5\n# comment\nbudget = 10").unwrap();
        assert_eq!(m.seeds, vec![3, 4, 5]);
        assert_eq!((m.refine, m.budget), (1, 10));
        assert!(read_manifest("refine = 2").is_err());
        assert!(read_manifest("seeds = 1, x").is_err());
    }
}
