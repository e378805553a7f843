//! Rank assignments (the processing order) and permutation enumeration.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Vertex;

/// A bijection from vertices `0..n` onto ranks `1..=n`. Rank 1 is
/// processed first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankAssignment {
    rank: Vec<usize>,
    order: Vec<Vertex>,
}

impl RankAssignment {
    /// From the processing order: `order[i]` receives rank `i + 1`.
    pub fn from_order(order: Vec<Vertex>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != 0 {
                return Err(Error::NotABijection { n });
            }
            rank[v] = i + 1;
        }
        Ok(Self { rank, order })
    }

    /// From explicit 1-based ranks: `ranks[v]` is the rank of `v`.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut order = vec![usize::MAX; n];
        for (v, &r) in ranks.iter().enumerate() {
            if r == 0 || r > n || order[r - 1] != usize::MAX {
                return Err(Error::NotABijection { n });
            }
            order[r - 1] = v;
        }
        Ok(Self { rank: ranks, order })
    }

    pub fn identity(n: usize) -> Self {
        Self { rank: (1..=n).collect(), order: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v]
    }

    /// The vertex holding rank `r` (1-based).
    pub fn vertex_at(&self, r: usize) -> Vertex {
        self.order[r - 1]
    }

    /// Vertices in increasing rank.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }
}

/// Uniform random rank assignment: Fisher–Yates over the identity order,
/// driven by `ChaCha8Rng::seed_from_u64(seed)`.
pub fn random_rank_assignment(n: usize, seed: u64) -> Result<RankAssignment> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(shuffled_ranks(n, &mut rng))
}

/// Fisher–Yates shuffle of `0..n`. Indices are drawn as `u64` so the stream
/// consumed does not depend on the platform's pointer width.
pub fn shuffled_ranks<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RankAssignment {
    let mut order: Vec<Vertex> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        order.swap(i, j);
    }
    RankAssignment::from_order(order).expect("a shuffle of 0..n is a bijection")
}

/// Rearranges `items` into the next lexicographic permutation. Returns
/// `false` (leaving `items` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Calls `f` once per ordering of `items`, in lexicographic order starting
/// from `items` sorted.
pub fn for_each_permutation<T: Ord + Clone, F: FnMut(&[T])>(items: &[T], mut f: F) {
    let mut current = items.to_vec();
    current.sort();
    loop {
        f(&current);
        if !next_permutation(&mut current) {
            break;
        }
    }
}

pub fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}
