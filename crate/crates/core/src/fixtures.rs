//! Small reference networks used throughout the tests and docs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::{LinkSet, Network};

/// Three nodes `a - b = c`: link 1 joins `a,b`; links 2 and 3 are parallel
/// between `b,c`. Terminals `a, c`. Minimal cuts are `{1}` and `{2,3}`.
pub fn series_parallel() -> Network {
    Network::from_edges(&[("a", "b"), ("b", "c"), ("b", "c")], &["a", "c"]).expect("valid fixture")
}

/// The five-link bridge: 1=(a,b), 2=(a,c), 3=(b,c), 4=(b,d), 5=(c,d),
/// terminals `a, d`.
pub fn bridge() -> Network {
    Network::from_edges(
        &[("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")],
        &["a", "d"],
    )
    .expect("valid fixture")
}

/// `n` links in a chain `v0 - v1 - ... - vn`, terminals at both ends.
pub fn series(n: usize) -> Network {
    let names: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(&str, &str)> = (0..n).map(|i| (names[i].as_str(), names[i + 1].as_str())).collect();
    Network::from_edges(&edges, &[names[0].as_str(), names[n].as_str()]).expect("valid fixture")
}

/// `n` parallel links between two terminals.
pub fn parallel(n: usize) -> Network {
    let edges: Vec<(&str, &str)> = (0..n).map(|_| ("s", "t")).collect();
    Network::from_edges(&edges, &["s", "t"]).expect("valid fixture")
}

/// Random multigraph with `links` links over `nodes` nodes `n0..`, no
/// self-loops, terminals `n0` and the last node. Redrawn until the intact
/// network is up.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, nodes: usize, links: usize) -> Network {
    assert!(nodes >= 2 && links >= 1, "need two nodes and a link");
    let names: Vec<String> = (0..nodes).map(|i| format!("n{i}")).collect();
    loop {
        let edges: Vec<(u32, String, String)> = (0..links)
            .map(|i| {
                let u = rng.random_range(0..nodes);
                let mut v = rng.random_range(0..nodes - 1);
                if v >= u {
                    v += 1;
                }
                (i as u32 + 1, names[u].clone(), names[v].clone())
            })
            .collect();
        let net = Network::new(&names, edges, [&names[0], &names[nodes - 1]]).expect("valid by construction");
        if !net.is_cut(LinkSet::EMPTY) {
            return net;
        }
    }
}
