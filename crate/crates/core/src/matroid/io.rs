//! Plain-text matroid instance files.
//!
//! ```text
//! uniform 4 2            # kind, ground size, rank
//! 0 0.9
//! 1 0.4
//! ...
//! graphic 3 3            # kind, ground size, vertex count (optional)
//! 0 3.0 0 1              # id weight endpoint_u endpoint_v
//! ...
//! transversal 2 3        # kind, ground size, right size (optional)
//! 0 0.7 0 0,2            # id weight left_vertex right_list ("-" when empty)
//! ```
//!
//! Blank lines and `#` comments are ignored. Element lines may come in any
//! order but every id in `0..n` must appear once.

use std::fmt::Write as _;

use super::{MatroidKind, WeightedMatroidInstance};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {what}")))
}

pub fn parse_matroid(text: &str) -> Result<WeightedMatroidInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty instance file"))?;
    let mut toks = header.split_whitespace();
    let kind = toks.next().unwrap_or("");
    let n: usize = num(toks.next(), hl, "ground size")?;
    let extra: Option<usize> = toks
        .next()
        .map(|t| t.parse())
        .transpose()
        .map_err(|_| perr(hl, "bad header parameter"))?;

    let mut weights = vec![None; n];
    let mut endpoints = vec![(0, 0); n];
    let mut adjacency = vec![Vec::new(); n];
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let id: usize = num(toks.next(), ln, "element id")?;
        if id >= n {
            return Err(perr(ln, format!("element id {id} out of range")));
        }
        if weights[id].is_some() {
            return Err(perr(ln, format!("element {id} listed twice")));
        }
        weights[id] = Some(num::<f64>(toks.next(), ln, "weight")?);
        match kind {
            "uniform" => {}
            "graphic" => {
                endpoints[id] = (
                    num(toks.next(), ln, "endpoint")?,
                    num(toks.next(), ln, "endpoint")?,
                )
            }
            "transversal" => {
                let _left: usize = num(toks.next(), ln, "left vertex")?;
                let list = toks.next().ok_or_else(|| perr(ln, "missing right list"))?;
                if list != "-" {
                    adjacency[id] = list
                        .split(',')
                        .map(|r| r.parse().map_err(|_| perr(ln, "bad right vertex")))
                        .collect::<Result<_>>()?;
                }
            }
            other => return Err(perr(hl, format!("unknown matroid kind '{other}'"))),
        }
        if toks.next().is_some() {
            return Err(perr(ln, "trailing tokens"));
        }
    }
    let weights: Vec<f64> = weights
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| perr(hl, format!("element {i} missing"))))
        .collect::<Result<_>>()?;
    let kind = match kind {
        "uniform" => MatroidKind::Uniform {
            rank: extra.ok_or_else(|| perr(hl, "uniform kind needs a rank"))?,
        },
        "graphic" => {
            let needed = endpoints
                .iter()
                .map(|&(u, v)| u.max(v) + 1)
                .max()
                .unwrap_or(0);
            MatroidKind::Graphic {
                vertices: extra.unwrap_or(needed).max(needed),
                edges: endpoints,
            }
        }
        "transversal" => {
            let needed = adjacency
                .iter()
                .flatten()
                .map(|&r| r + 1)
                .max()
                .unwrap_or(0);
            MatroidKind::Transversal {
                right_size: extra.unwrap_or(needed).max(needed),
                adjacency,
            }
        }
        other => return Err(perr(hl, format!("unknown matroid kind '{other}'"))),
    };
    WeightedMatroidInstance::new(kind, weights)
}

pub fn format_matroid(inst: &WeightedMatroidInstance) -> String {
    let mut s = String::new();
    let n = inst.ground_size();
    match inst.kind() {
        MatroidKind::Uniform { rank } => writeln!(s, "uniform {n} {rank}"),
        MatroidKind::Graphic { vertices, .. } => writeln!(s, "graphic {n} {vertices}"),
        MatroidKind::Transversal { right_size, .. } => writeln!(s, "transversal {n} {right_size}"),
    }
    .unwrap();
    for (id, w) in inst.weights().iter().enumerate() {
        match inst.kind() {
            MatroidKind::Uniform { .. } => writeln!(s, "{id} {w:?}"),
            MatroidKind::Graphic { edges, .. } => {
                writeln!(s, "{id} {w:?} {} {}", edges[id].0, edges[id].1)
            }
            MatroidKind::Transversal { adjacency, .. } => {
                let list = if adjacency[id].is_empty() {
                    "-".to_string()
                } else {
                    adjacency[id]
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                writeln!(s, "{id} {w:?} {id} {list}")
            }
        }
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{random_complete_graphic, random_transversal, random_uniform};

    #[test]
    fn parses_each_kind() {
        let u = parse_matroid("uniform 3 2\n0 1.5\n1 2.5\n2 0.5\n").unwrap();
        assert_eq!(u.kind(), &MatroidKind::Uniform { rank: 2 });
        let g = parse_matroid("# triangle\ngraphic 3\n0 3 0 1\n1 2 1 2\n2 1 0 2\n").unwrap();
        assert!(!g.is_independent(&[0, 1, 2]).unwrap());
        let t = parse_matroid("transversal 2 3\n0 0.7 0 0,2\n1 0.2 1 -\n").unwrap();
        assert_eq!(
            t.kind(),
            &MatroidKind::Transversal {
                right_size: 3,
                adjacency: vec![vec![0, 2], vec![]]
            }
        );
    }

    #[test]
    fn round_trips() {
        let mut rng = crate::rng::seeded(3);
        for inst in [
            random_uniform(5, 2, &mut rng),
            random_complete_graphic(4, &mut rng),
            random_transversal(4, 3, 0.5, &mut rng),
        ] {
            assert_eq!(parse_matroid(&format_matroid(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_matroid("graphic 2\n0 1.0 0 1\n0 2.0 1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        assert!(parse_matroid("uniform 2\n0 1\n1 2\n").is_err());
        assert!(parse_matroid("weird 1\n0 1\n").is_err());
        assert!(parse_matroid("uniform 2 1\n0 1\n").is_err());
        assert!(parse_matroid("").is_err());
    }
}
