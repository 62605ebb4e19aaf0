use std::collections::HashMap;

use super::Multigraph;
use crate::{Error, Result};

/// Parses the edge-list format: one edge per line as `u v` or `u v m`
/// (`m >= 1` parallel copies). `#` starts a comment; blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let mut g = Multigraph::new();
    let mut index = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let copies = match tokens.len() {
            2 => 1,
            3 => {
                let m: i64 = tokens[2]
                    .parse()
                    .map_err(|_| err(format!("multiplicity `{}` is not an integer", tokens[2])))?;
                if m < 1 {
                    return Err(err(format!("multiplicity must be positive, got {m}")));
                }
                m as usize
            }
            n => return Err(err(format!("expected `u v` or `u v m`, found {n} token(s)"))),
        };
        let u = g.intern(&mut index, tokens[0]);
        let v = g.intern(&mut index, tokens[1]);
        for _ in 0..copies {
            g.add_edge(u, v);
        }
    }
    if g.edge_count() == 0 {
        return Err(Error::Parse { line: 1, message: "document contains no edges".into() });
    }
    Ok(g)
}
