//! Ordered set partitions of `{1, ..., n}`: counting, streaming enumeration
//! and exact uniform sampling.
//!
//! An ordered partition `(B_1, ..., B_J)` models the failure history of the
//! links when several may fail at the same shock: block `B_j` is the set of
//! links failing together at the `j`-th shock that fails anything.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::network::{LinkSet, MAX_LINKS};
use crate::{Error, Result};

/// Default largest `n` for exact enumeration (`n*(10) = 102 247 563`).
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10;

/// Largest `n` the sampler supports: `n*(30)` is the last value below `2^128`.
pub const SAMPLER_LIMIT: usize = 30;

/// An ordered sequence of nonempty, disjoint blocks covering `{1, ..., n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    n: usize,
    blocks: Vec<LinkSet>,
}

impl OrderedPartition {
    pub fn new(n: usize, blocks: Vec<LinkSet>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n > MAX_LINKS {
            return Err(Error::TooManyLinks(n));
        }
        let mut seen = LinkSet::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition { n, reason: "empty block" });
            }
            if !b.intersection(seen).is_empty() {
                return Err(Error::InvalidPartition { n, reason: "blocks overlap" });
            }
            seen = seen.union(*b);
        }
        if seen != LinkSet::full(n) {
            return Err(Error::InvalidPartition { n, reason: "blocks do not cover the ground set" });
        }
        Ok(OrderedPartition { n, blocks })
    }

    /// Builds from explicit id lists, e.g. `&[&[1, 3], &[2]]` for `({1,3},2)`.
    pub fn from_ids(n: usize, blocks: &[&[u32]]) -> Result<Self> {
        let mut sets = Vec::with_capacity(blocks.len());
        for ids in blocks {
            if ids.iter().any(|&id| id == 0 || id as usize > n) {
                return Err(Error::InvalidPartition { n, reason: "id outside 1..=n" });
            }
            let set = LinkSet::from_ids(ids.iter().copied());
            if set.len() != ids.len() {
                return Err(Error::InvalidPartition { n, reason: "repeated id in a block" });
            }
            sets.push(set);
        }
        OrderedPartition::new(n, sets)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[LinkSet] {
        &self.blocks
    }

    /// Number of blocks `J`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for OrderedPartition {
    /// `({1,3},2)` style: singleton blocks print bare, others in braces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if b.len() == 1 {
                write!(f, "{}", b.first().unwrap())?;
            } else {
                f.write_str("{")?;
                for (j, id) in b.iter().enumerate() {
                    if j > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{id}")?;
                }
                f.write_str("}")?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `n*`, the number of ordered partitions of an `n`-set (Fubini number),
/// by inclusion-exclusion over surjections onto `j` shocks:
/// `sum_{j=1..n} sum_{k=0..j} (-1)^k C(j,k) (j-k)^n`.
pub fn count_ordered_partitions(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    let mut total = BigInt::zero();
    for j in 1..=n {
        let mut binom = BigInt::one();
        for k in 0..=j {
            if k > 0 {
                binom = binom * BigInt::from(j - k + 1) / BigInt::from(k);
            }
            let term = &binom * num_traits::pow(BigInt::from(j - k), n);
            if k % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    Ok(total.to_biguint().expect("surjection counts are non-negative"))
}

/// `n*` via the first-block recurrence `n*(m) = sum_k C(m,k) n*(m-k)`,
/// `n*(0) = 1`. Returns the whole table `n*(0..=n)`.
pub fn ordered_partition_table(n: usize) -> Vec<BigUint> {
    let binom = pascal(n);
    let mut table: Vec<BigUint> = vec![BigUint::one()];
    for m in 1..=n {
        let mut acc = BigUint::zero();
        for k in 1..=m {
            acc += &binom[m][k] * &table[m - k];
        }
        table.push(acc);
    }
    table
}

fn pascal(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![BigUint::one(); m + 1];
        for k in 1..m {
            row[k] = &rows[m - 1][k - 1] + &rows[m - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Streams every ordered partition of `{1, ..., n}` exactly once.
///
/// Order: the first block runs over the nonempty subsets of the remaining
/// elements in lexicographic order (as sorted id sequences), and the rest of
/// the partition is generated recursively. Memory is `O(n)`.
pub fn enumerate_ordered_partitions(n: usize) -> Result<OrderedPartitions> {
    enumerate_ordered_partitions_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_ordered_partitions_with_limit(n: usize, limit: usize) -> Result<OrderedPartitions> {
    check_enumerable(n, limit)?;
    Ok(OrderedPartitions::new(n, None))
}

/// Only the partitions whose first block is `first`; the streams for all
/// nonempty `first` are disjoint and together cover every partition.
pub fn enumerate_with_first_block(n: usize, first: LinkSet, limit: usize) -> Result<OrderedPartitions> {
    check_enumerable(n, limit)?;
    if first.is_empty() || !first.is_subset(LinkSet::full(n)) {
        return Err(Error::InvalidPartition { n, reason: "first block must be a nonempty subset" });
    }
    Ok(OrderedPartitions::new(n, Some(first)))
}

fn check_enumerable(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if n > limit || n > MAX_LINKS {
        return Err(Error::EnumerationLimit { n, limit: limit.min(MAX_LINKS) });
    }
    Ok(())
}

/// Iterator returned by [`enumerate_ordered_partitions`].
#[derive(Clone, Debug)]
pub struct OrderedPartitions {
    n: usize,
    /// `(available elements, current block)` per depth.
    stack: Vec<(LinkSet, LinkSet)>,
    pinned_first: bool,
    started: bool,
    done: bool,
}

impl OrderedPartitions {
    fn new(n: usize, first: Option<LinkSet>) -> Self {
        let full = LinkSet::full(n);
        let mut stack = Vec::with_capacity(n);
        let pinned_first = first.is_some();
        stack.push((full, first.unwrap_or_else(|| first_subset(full))));
        let mut it = OrderedPartitions { n, stack, pinned_first, started: false, done: false };
        it.descend();
        it
    }

    /// Completes the current prefix with singleton-first choices.
    fn descend(&mut self) {
        loop {
            let &(avail, block) = self.stack.last().expect("non-empty stack");
            let rest = avail.difference(block);
            if rest.is_empty() {
                return;
            }
            self.stack.push((rest, first_subset(rest)));
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((avail, block)) = self.stack.pop() {
            if self.stack.is_empty() && self.pinned_first {
                return false;
            }
            if let Some(next) = next_subset(block, avail) {
                self.stack.push((avail, next));
                self.descend();
                return true;
            }
        }
        false
    }
}

impl Iterator for OrderedPartitions {
    type Item = OrderedPartition;

    fn next(&mut self) -> Option<OrderedPartition> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(OrderedPartition { n: self.n, blocks: self.stack.iter().map(|&(_, b)| b).collect() })
    }
}

fn first_subset(avail: LinkSet) -> LinkSet {
    let low = avail.bits() & avail.bits().wrapping_neg();
    LinkSet::from_bits(low)
}

/// Lexicographic successor of `block` among the nonempty subsets of `avail`.
fn next_subset(block: LinkSet, avail: LinkSet) -> Option<LinkSet> {
    let bits = block.bits();
    let top = 63 - bits.leading_zeros();
    let above = |bit: u32| -> u64 {
        if bit >= 63 {
            0
        } else {
            avail.bits() & !((1u64 << (bit + 1)) - 1)
        }
    };
    let after_top = above(top);
    if after_top != 0 {
        return Some(LinkSet::from_bits(bits | (after_top & after_top.wrapping_neg())));
    }
    let rest = bits & !(1u64 << top);
    if rest == 0 {
        return None;
    }
    let new_top = 63 - rest.leading_zeros();
    let after = above(new_top);
    let succ = after & after.wrapping_neg();
    Some(LinkSet::from_bits((rest & !(1u64 << new_top)) | succ))
}

/// Draws ordered partitions of `{1, ..., n}` uniformly at random.
///
/// The first block has size `k` with probability `C(m,k) n*(m-k) / n*(m)`
/// (`m` = elements left), is a uniform `k`-subset, and the remainder is
/// sampled recursively. Integer weights make every partition exactly
/// equally likely.
#[derive(Clone, Debug)]
pub struct PartitionSampler {
    n: usize,
    /// `cumulative[m][k-1] = sum_{i<=k} C(m,i) n*(m-i)`.
    cumulative: Vec<Vec<u128>>,
}

impl PartitionSampler {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n > SAMPLER_LIMIT {
            return Err(Error::SamplerLimit { n, limit: SAMPLER_LIMIT });
        }
        let table = ordered_partition_table(n);
        let binom = pascal(n);
        let table: Vec<u128> = table.iter().map(|x| x.to_u128().expect("n* fits in u128")).collect();
        let mut cumulative = vec![Vec::new()];
        for m in 1..=n {
            let mut acc = 0u128;
            let row = (1..=m)
                .map(|k| {
                    acc += binom[m][k].to_u128().expect("binomial fits") * table[m - k];
                    acc
                })
                .collect();
            cumulative.push(row);
        }
        Ok(PartitionSampler { n, cumulative })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> OrderedPartition {
        let mut remaining: Vec<u32> = (1..=self.n as u32).collect();
        let mut blocks = Vec::new();
        while !remaining.is_empty() {
            let m = remaining.len();
            let weights = &self.cumulative[m];
            let u = rng.random_range(0..weights[m - 1]);
            let k = weights.partition_point(|&c| c <= u) + 1;
            for i in 0..k {
                let j = rng.random_range(i..m);
                remaining.swap(i, j);
            }
            blocks.push(LinkSet::from_ids(remaining.drain(..k)));
        }
        OrderedPartition { n: self.n, blocks }
    }
}

/// One uniform draw; see [`PartitionSampler`] for repeated sampling.
pub fn sample_ordered_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<OrderedPartition> {
    Ok(PartitionSampler::new(n)?.sample(rng))
}
