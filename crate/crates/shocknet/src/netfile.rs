//! Line-oriented network files.
//!
//! ```text
//! # bridge
//! node a
//! node b
//! link 1 a b
//! terminals a d
//! ```
//!
//! Every node is declared with `node`, every link carries an explicit id
//! (ids must be exactly `1..=n`), and a single `terminals` line lists at
//! least two nodes. `#` starts a comment.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use shocknet_core::Network;

use crate::{Error, Result};

/// Parses a network description. `source_name` labels error messages.
pub fn parse_network(text: &str, source_name: &str) -> Result<Network> {
    let err = |line: usize, msg: String| Error::parse(source_name, Some(line), msg);
    let mut nodes: Vec<String> = Vec::new();
    let mut node_set: HashSet<String> = HashSet::new();
    let mut links: Vec<(u32, String, String)> = Vec::new();
    let mut link_ids: HashSet<u32> = HashSet::new();
    let mut terminals: Option<Vec<String>> = None;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().expect("non-empty line");
        let args: Vec<&str> = words.collect();
        match keyword {
            "node" => {
                let [id] = args[..] else {
                    return Err(err(line, format!("expected `node <id>`, got `{content}`")));
                };
                if !node_set.insert(id.to_string()) {
                    return Err(err(line, format!("duplicate node `{id}`")));
                }
                nodes.push(id.to_string());
            }
            "link" => {
                let [id, u, v] = args[..] else {
                    return Err(err(line, format!("expected `link <id> <node> <node>`, got `{content}`")));
                };
                let id: u32 = id
                    .parse()
                    .ok()
                    .filter(|&i| i > 0)
                    .ok_or_else(|| err(line, format!("link id must be a positive integer, got `{id}`")))?;
                for end in [u, v] {
                    if !node_set.contains(end) {
                        return Err(err(line, format!("unknown endpoint node `{end}`")));
                    }
                }
                if !link_ids.insert(id) {
                    return Err(err(line, format!("duplicate link id {id}")));
                }
                links.push((id, u.to_string(), v.to_string()));
            }
            "terminals" => {
                if terminals.is_some() {
                    return Err(err(line, "more than one `terminals` line".to_string()));
                }
                for t in &args {
                    if !node_set.contains(*t) {
                        return Err(err(line, format!("unknown terminal node `{t}`")));
                    }
                }
                if args.len() < 2 {
                    return Err(err(line, "fewer than 2 terminals".to_string()));
                }
                terminals = Some(args.iter().map(|s| s.to_string()).collect());
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    let terminals = terminals.ok_or_else(|| Error::parse(source_name, None, "fewer than 2 terminals"))?;
    Network::new(&nodes, links, &terminals).map_err(|e| Error::parse(source_name, None, e.to_string()))
}

pub fn read_network(path: &Path) -> Result<Network> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_network(&text, &path.display().to_string())
}

/// Serializes a network in the file format; `parse_network` reads it back
/// unchanged.
pub fn format_network(net: &Network) -> String {
    let mut out = String::new();
    for node in net.nodes() {
        writeln!(out, "node {node}").unwrap();
    }
    for (id, u, v) in net.links() {
        writeln!(out, "link {id} {u} {v}").unwrap();
    }
    let terminals: Vec<&str> = net.terminals().collect();
    writeln!(out, "terminals {}", terminals.join(" ")).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use shocknet_core::fixtures;

    const BRIDGE: &str = "\
# the bridge
node a
node b
node c
node d
link 1 a b
link 2 a c
link 3 b c   # the cross link
link 4 b d
link 5 c d
terminals a d
";

    #[test]
    fn parses_bridge() {
        let net = parse_network(BRIDGE, "bridge.net").unwrap();
        assert_eq!(net, fixtures::bridge());
    }

    #[test]
    fn round_trip() {
        for net in [fixtures::bridge(), fixtures::series_parallel(), fixtures::parallel(3)] {
            assert_eq!(parse_network(&format_network(&net), "x").unwrap(), net);
        }
    }

    #[test]
    fn links_in_any_order() {
        let text = "node a\nnode b\nlink 2 a b\nlink 1 b a\nterminals a b\n";
        assert_eq!(parse_network(text, "x").unwrap().link_count(), 2);
    }

    fn message(text: &str) -> String {
        parse_network(text, "f").unwrap_err().to_string()
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(message("node a\nnode b\nlink 1 a\nterminals a b"), "f:3: expected `link <id> <node> <node>`, got `link 1 a`");
        assert_eq!(message("node a\nnode b\nlink 1 a b\nlink 1 b a\nterminals a b"), "f:4: duplicate link id 1");
        assert_eq!(message("node a\nlink 1 a z\n"), "f:2: unknown endpoint node `z`");
        assert_eq!(message("node a\nnode a\n"), "f:2: duplicate node `a`");
        assert_eq!(message("node a\nedge 1 a a\n"), "f:2: unknown keyword `edge`");
        assert_eq!(message("node a\nnode b\nlink x a b\n"), "f:3: link id must be a positive integer, got `x`");
        assert_eq!(message("node a\nnode b\nlink 1 a b\nterminals a\n"), "f:4: fewer than 2 terminals");
        assert_eq!(message("node a\nnode b\nlink 1 a b\nterminals\n"), "f:4: fewer than 2 terminals");
        assert_eq!(message("node a\nnode b\nlink 1 a b\n"), "f: fewer than 2 terminals");
    }

    #[test]
    fn id_gaps_rejected() {
        let msg = message("node a\nnode b\nlink 1 a b\nlink 3 a b\nterminals a b\n");
        assert!(msg.contains("missing"), "{msg}");
    }
}
