//! Two-state networks and the terminal-connectivity structure function.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest supported link count (links are tracked in a 64-bit set).
pub const MAX_LINKS: usize = 64;

/// A set of link ids `1..=64`, bit `i - 1` standing for link `i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkSet(u64);

impl LinkSet {
    pub const EMPTY: LinkSet = LinkSet(0);

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_LINKS);
        if n == 64 {
            LinkSet(u64::MAX)
        } else {
            LinkSet((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        LinkSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        let mut set = LinkSet::EMPTY;
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn insert(&mut self, id: u32) {
        debug_assert!((1..=MAX_LINKS as u32).contains(&id));
        self.0 |= 1 << (id - 1);
    }

    pub fn contains(self, id: u32) -> bool {
        (1..=MAX_LINKS as u32).contains(&id) && self.0 & (1 << (id - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: LinkSet) -> LinkSet {
        LinkSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LinkSet) -> LinkSet {
        LinkSet(self.0 & other.0)
    }

    pub fn difference(self, other: LinkSet) -> LinkSet {
        LinkSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: LinkSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest id in the set.
    pub fn first(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    /// Ids in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let id = bits.trailing_zeros() + 1;
            bits &= bits - 1;
            Some(id)
        })
    }
}

impl fmt::Debug for LinkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Links that have failed.
pub type FailureSet = LinkSet;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Link {
    u: usize,
    v: usize,
}

/// An undirected multigraph with labelled links `1..=n` and a terminal set.
///
/// Parallel links and self-loops are allowed. The network is *up* while all
/// terminals lie in one connected component of the surviving links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<String>,
    /// Indexed by `link id - 1`.
    links: Vec<Link>,
    terminals: Vec<usize>,
}

impl Network {
    /// Builds and validates a network.
    ///
    /// `links` are `(id, endpoint, endpoint)` triples in any order; the ids
    /// must be exactly `1..=n`.
    pub fn new<N, L, T>(nodes: N, links: L, terminals: T) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: AsRef<str>,
        L: IntoIterator<Item = (u32, String, String)>,
        T: IntoIterator,
        T::Item: AsRef<str>,
    {
        let mut names: Vec<String> = Vec::new();
        for node in nodes {
            let node = node.as_ref();
            if names.iter().any(|n| n == node) {
                return Err(Error::DuplicateNode(node.to_string()));
            }
            names.push(node.to_string());
        }
        let index_of = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        };

        let mut slots: Vec<Option<Link>> = Vec::new();
        for (id, u, v) in links {
            if id == 0 {
                return Err(Error::LinkIdGap { n: slots.len(), missing: 0 });
            }
            let link = Link { u: index_of(&u)?, v: index_of(&v)? };
            let idx = id as usize - 1;
            if idx >= MAX_LINKS {
                return Err(Error::TooManyLinks(idx + 1));
            }
            if slots.len() <= idx {
                slots.resize(idx + 1, None);
            }
            if slots[idx].is_some() {
                return Err(Error::DuplicateLink(id));
            }
            slots[idx] = Some(link);
        }
        if slots.is_empty() {
            return Err(Error::NoLinks);
        }
        let n = slots.len();
        let links = slots
            .into_iter()
            .enumerate()
            .map(|(i, slot)| slot.ok_or(Error::LinkIdGap { n, missing: i as u32 + 1 }))
            .collect::<Result<Vec<_>>>()?;

        let mut term_idx = Vec::new();
        for t in terminals {
            let i = index_of(t.as_ref())?;
            if term_idx.contains(&i) {
                return Err(Error::DuplicateTerminal(t.as_ref().to_string()));
            }
            term_idx.push(i);
        }
        if term_idx.len() < 2 {
            return Err(Error::TooFewTerminals);
        }

        Ok(Network { nodes: names, links, terminals: term_idx })
    }

    /// Convenience constructor: links are numbered `1..` in the given order
    /// and nodes are collected from the endpoints.
    pub fn from_edges(edges: &[(&str, &str)], terminals: &[&str]) -> Result<Self> {
        let mut nodes: Vec<&str> = Vec::new();
        for &(u, v) in edges {
            for x in [u, v] {
                if !nodes.contains(&x) {
                    nodes.push(x);
                }
            }
        }
        for &t in terminals {
            if !nodes.contains(&t) {
                nodes.push(t);
            }
        }
        let links = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (i as u32 + 1, u.to_string(), v.to_string()));
        Network::new(nodes, links, terminals.iter().copied())
    }

    /// Number of links `n`.
    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    /// Number of nodes `m`.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    pub fn terminals(&self) -> impl Iterator<Item = &str> {
        self.terminals.iter().map(|&i| self.nodes[i].as_str())
    }

    /// `(id, u, v)` for every link in id order.
    pub fn links(&self) -> impl Iterator<Item = (u32, &str, &str)> {
        self.links
            .iter()
            .enumerate()
            .map(|(i, l)| (i as u32 + 1, self.nodes[l.u].as_str(), self.nodes[l.v].as_str()))
    }

    pub fn all_links(&self) -> LinkSet {
        LinkSet::full(self.link_count())
    }

    /// The structure function: `true` iff all terminals are connected
    /// through links not in `failed`.
    pub fn is_up(&self, failed: FailureSet) -> Result<bool> {
        if !failed.is_subset(self.all_links()) {
            let bad = failed.difference(self.all_links()).first().unwrap_or(0);
            return Err(Error::UnknownLink(bad));
        }
        Ok(self.is_up_unchecked(failed))
    }

    /// [`Network::is_up`] without the membership check; `failed` bits above
    /// `n` are ignored.
    pub fn is_up_unchecked(&self, failed: FailureSet) -> bool {
        let mut uf = UnionFind::new(self.nodes.len());
        for (i, link) in self.links.iter().enumerate() {
            if failed.0 & (1 << i) == 0 {
                uf.union(link.u, link.v);
            }
        }
        let root = uf.find(self.terminals[0]);
        self.terminals[1..].iter().all(|&t| uf.find(t) == root)
    }

    /// `true` iff failing `links` downs the network.
    pub fn is_cut(&self, links: LinkSet) -> bool {
        !self.is_up_unchecked(links)
    }
}

/// Disjoint sets with union by size and path halving.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: alloc::vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}
