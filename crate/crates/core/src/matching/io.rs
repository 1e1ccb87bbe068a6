//! Bipartite instance files and trace CSV output.
//!
//! Instance files start with `n_left n_right`, followed by one
//! `left right weight` line per edge. `#` starts a comment.

use std::fmt::Write as _;
use std::io::Write;

use super::{BipartiteInstance, TraceRow};
use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 6] = [
    "round",
    "event_item",
    "occurrence",
    "matching_size",
    "matching_weight",
    "added_edge",
];

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty instance file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| perr(hl, "bad header")))
        .collect::<Result<_>>()?;
    let [left, right] = dims[..] else {
        return Err(perr(hl, "header must be `n_left n_right`"));
    };
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [l, r, w] = toks[..] else {
            return Err(perr(ln, "edge line must be `left right weight`"));
        };
        edges.push((
            l.parse().map_err(|_| perr(ln, "bad left vertex"))?,
            r.parse().map_err(|_| perr(ln, "bad right vertex"))?,
            w.parse().map_err(|_| perr(ln, "bad weight"))?,
        ));
    }
    BipartiteInstance::new(left, right, edges)
}

pub fn format_bipartite(inst: &BipartiteInstance) -> String {
    let mut s = format!("{} {}\n", inst.left_size(), inst.right_size());
    for &(l, r, w) in inst.edges() {
        writeln!(s, "{l} {r} {w:?}").unwrap();
    }
    s
}

/// Writes `round,event_item,occurrence,matching_size,matching_weight,added_edge`;
/// `added_edge` is `left-right` or empty.
pub fn write_trace_csv<W: Write>(trace: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for row in trace {
        w.write_record([
            row.round.to_string(),
            row.event_item.to_string(),
            row.occurrence.to_string(),
            row.matching_size.to_string(),
            format!("{:?}", row.matching_weight),
            row.added_edge
                .map(|(l, r)| format!("{l}-{r}"))
                .unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrival::gen_permutation_sequence;
    use crate::matching::{random_bipartite, run_returning_matching, MatchingOptions};

    #[test]
    fn parse_and_format() {
        let inst = parse_bipartite("2 2\n0 0 3\n0 1 1\n# c\n1 0 2\n1 1 4\n").unwrap();
        assert_eq!(inst.weight(1, 1), Some(4.0));
        let mut rng = crate::rng::seeded(2);
        let r = random_bipartite(4, 5, 0.5, &mut rng);
        assert_eq!(parse_bipartite(&format_bipartite(&r)).unwrap(), r);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_bipartite("").is_err());
        assert!(parse_bipartite("2\n").is_err());
        assert!(matches!(
            parse_bipartite("1 1\n0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_bipartite("1 1\n0 3 1.0\n").is_err());
    }

    #[test]
    fn trace_header() {
        let inst = parse_bipartite("1 1\n0 0 2\n").unwrap();
        let seq = gen_permutation_sequence(1, 2, 0).unwrap();
        let out = run_returning_matching(
            &inst,
            &seq,
            MatchingOptions {
                record_trace: true,
                ..Default::default()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trace_csv(out.trace.as_ref().unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "round,event_item,occurrence,matching_size,matching_weight,added_edge\n1,0,1,1,2.0,\n2,0,2,1,2.0,\n");
    }
}
