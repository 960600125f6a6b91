//! Plain-text edge lists and label files.
//!
//! One pair per line, separated by whitespace or a comma. Lines starting with
//! `#` are comments, except `# nodes: N`, which records the node count so
//! trailing isolated nodes survive a round trip.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{build_graph, BuildReport, EdgeList, Graph, NodeId};

/// Contents of an edge-list file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeFile {
    pub pairs: EdgeList,
    /// Node count from a `# nodes:` header, if present.
    pub num_nodes: Option<usize>,
}

const NODES_HEADER: &str = "# nodes:";

pub fn parse_edge_list<R: BufRead>(reader: R, origin: &Path) -> Result<EdgeFile> {
    let mut pairs = EdgeList::new();
    let mut num_nodes = None;
    let err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(NODES_HEADER) {
            let n = rest
                .trim()
                .parse::<usize>()
                .map_err(|e| err(lineno, format!("bad node count: {e}")))?;
            num_nodes = Some(n);
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty());
        let mut next_id = || -> Result<NodeId> {
            let tok = tokens
                .next()
                .ok_or_else(|| err(lineno, "expected two node ids".into()))?;
            tok.parse::<NodeId>()
                .map_err(|_| err(lineno, format!("not a node id: {tok:?}")))
        };
        let i = next_id()?;
        let j = next_id()?;
        pairs.push(i, j);
    }
    Ok(EdgeFile { pairs, num_nodes })
}

/// Opens `path` for reading; errors name the file.
pub fn open(path: impl AsRef<Path>) -> Result<File> {
    let path = path.as_ref();
    File::open(path).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })
}

/// Creates `path` for writing; errors name the file.
pub fn create(path: impl AsRef<Path>) -> Result<File> {
    let path = path.as_ref();
    File::create(path).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<EdgeFile> {
    let path = path.as_ref();
    let file = open(path)?;
    parse_edge_list(BufReader::new(file), path)
}

/// Writes `pairs` one per line as `i j`. A `# nodes:` header is emitted when
/// `num_nodes` is given.
pub fn write_edge_list(pairs: &EdgeList, num_nodes: Option<usize>, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(create(path)?);
    if let Some(n) = num_nodes {
        writeln!(out, "{NODES_HEADER} {n}")?;
    }
    for (i, j) in pairs {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_edge_list(&g.edge_list(), Some(g.num_nodes()), path)
}

/// Reads an edge list and builds the graph it describes.
pub fn read_graph(path: impl AsRef<Path>) -> Result<(Graph, BuildReport)> {
    let file = read_edge_list(path)?;
    build_graph(&file.pairs, file.num_nodes)
}

/// Two-column `node label` file.
pub fn write_labels(labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(create(path)?);
    for (node, label) in labels.iter().enumerate() {
        writeln!(out, "{node} {label}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<EdgeFile> {
        parse_edge_list(s.as_bytes(), Path::new("<mem>"))
    }

    #[test]
    fn whitespace_and_comma() {
        assert_eq!(parse("0 1\n1 2\n").unwrap().pairs.pairs(), &[(0, 1), (1, 2)]);
        assert_eq!(parse("# comment\n3,4\n").unwrap().pairs.pairs(), &[(3, 4)]);
        assert_eq!(parse("5\t2\n\n").unwrap().pairs.pairs(), &[(2, 5)]);
    }

    #[test]
    fn parse_error_names_line() {
        let e = parse("0 1\n1 x\n").unwrap_err();
        assert!(e.to_string().contains(":2:"), "{e}");
        let e = parse("7\n").unwrap_err();
        assert!(e.to_string().contains(":1:"), "{e}");
    }

    #[test]
    fn node_header() {
        let f = parse("# nodes: 9\n0 1\n").unwrap();
        assert_eq!(f.num_nodes, Some(9));
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let pairs = EdgeList::from(vec![(0, 3), (1, 2), (2, 5)]);
        write_edge_list(&pairs, Some(8), &path).unwrap();
        let back = read_edge_list(&path).unwrap();
        assert_eq!(back.pairs, pairs);
        assert_eq!(back.num_nodes, Some(8));
        let (g, _) = read_graph(&path).unwrap();
        assert_eq!(g.num_nodes(), 8);
    }
}
