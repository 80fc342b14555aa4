//! Edge-list files: one `<u> <v>` pair per line with `u < v`, sorted, and a
//! `# n=<n> d=<d> kind=<spec>` comment header.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

pub fn write_edge_list<W: Write>(g: &Graph, kind: &str, mut w: W) -> std::io::Result<()> {
    let d = g
        .regular_degree()
        .map_or_else(|| "irregular".to_string(), |d| d.to_string());
    writeln!(w, "# n={} d={} kind={}", g.n_nodes(), d, kind)?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn save_edge_list(g: &Graph, kind: &str, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_edge_list(g, kind, &mut buf).expect("writing to a Vec cannot fail");
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

/// Parses an edge list. The node count comes from the `n=` header when
/// present, otherwise from the largest index seen.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared_n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            for field in comment.split_whitespace() {
                if let Some(n) = field.strip_prefix("n=") {
                    let n = n.parse::<usize>().map_err(|_| Error::Format {
                        line,
                        message: format!("bad node count `{n}`"),
                    })?;
                    declared_n = Some(n);
                }
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parsed: Vec<usize> = fields.iter().filter_map(|f| f.parse().ok()).collect();
        if fields.len() != 2 || parsed.len() != 2 {
            return Err(Error::Format {
                line,
                message: format!("expected `<u> <v>`, got `{trimmed}`"),
            });
        }
        let (u, v) = (parsed[0], parsed[1]);
        if u == v {
            return Err(Error::Format {
                line,
                message: format!("self-loop at node {u}"),
            });
        }
        edges.push((line, u.min(v), u.max(v)));
    }

    let n = declared_n.unwrap_or_else(|| edges.iter().map(|&(_, _, v)| v + 1).max().unwrap_or(0));
    let mut g = Graph::empty(n);
    for (line, u, v) in edges {
        if v >= n {
            return Err(Error::Format {
                line,
                message: format!("node {v} out of range for n={n}"),
            });
        }
        if g.has_edge(u, v) {
            return Err(Error::Format {
                line,
                message: format!("duplicate edge {u} {v}"),
            });
        }
        g.insert_edge(u, v);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    #[test]
    fn triangle_file_layout() {
        let mut buf = Vec::new();
        write_edge_list(&complete_graph(3).unwrap(), "complete", &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# n=3 d=2 kind=complete\n0 1\n0 2\n1 2\n"
        );
    }

    #[test]
    fn format_errors_report_lines() {
        let cases = [
            ("0 1\n3 3\n", 2),
            ("# n=3\n0 1\n0 5\n", 3),
            ("0 1\n1 0\n", 2),
            ("0 1\nfoo\n", 2),
            ("0 1 2\n", 1),
        ];
        for (text, expected) in cases {
            match parse_edge_list(text) {
                Err(Error::Format { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn header_keeps_isolated_nodes() {
        let g = parse_edge_list("# n=5 d=irregular kind=test\n0 1\n").unwrap();
        assert_eq!(g.n_nodes(), 5);
    }
}
