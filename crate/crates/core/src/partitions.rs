//! Young diagrams, tuples of diagrams, compositions and decomposition types.
//!
//! A diagram is stored by its column heights `λ₁ ≥ λ₂ ≥ … > 0`. Boxes are
//! `(i, j)` with `i` the column and `j` the row, both 1-based.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<u32>),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Trailing zeros are dropped; any increase is rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Height of column `i` (1-based), zero past the width.
    pub fn column(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Length of row `j` (1-based), i.e. `λ'_j`.
    pub fn row(&self, j: usize) -> u32 {
        self.0.iter().take_while(|&&h| h as usize >= j).count() as u32
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && self.column(i) as usize >= j
    }

    pub fn transpose(&self) -> Partition {
        let h = self.0.first().copied().unwrap_or(0) as usize;
        Partition((1..=h).map(|j| self.row(j)).collect())
    }

    /// `λ_i − j`; the box need not lie in the diagram.
    pub fn arm(&self, i: usize, j: usize) -> i64 {
        self.column(i) as i64 - j as i64
    }

    /// `λ'_j − i`; the box need not lie in the diagram.
    pub fn leg(&self, i: usize, j: usize) -> i64 {
        self.row(j) as i64 - i as i64
    }

    /// Boxes column by column, bottom to top.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(c, &h)| (1..=h as usize).map(move |j| (c + 1, j)))
    }

    /// All partitions of `n` in reverse lexicographic order.
    pub fn all_of_weight(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "-" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        if parts.contains(&0) {
            return Err(PartitionError::Parse(s.to_string()));
        }
        Partition::new(parts)
    }
}

/// Number of partitions of each `k ≤ n`.
pub fn partition_counts(n: usize) -> Vec<BigUint> {
    let mut p = vec![BigUint::from(0u32); n + 1];
    p[0] = BigUint::one();
    for part in 1..=n {
        for k in part..=n {
            let add = p[k - part].clone();
            p[k] += add;
        }
    }
    p
}

/// Coefficient of `qⁿ` in `(Π 1/(1−q^k))^r`.
pub fn tuple_count(r: usize, n: usize) -> BigUint {
    let p = partition_counts(n);
    let mut acc = vec![BigUint::from(0u32); n + 1];
    acc[0] = BigUint::one();
    for _ in 0..r {
        let mut next = vec![BigUint::from(0u32); n + 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in p.iter().enumerate().take(n + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc.swap_remove(n)
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PartitionTuple(Vec<Partition>);

impl PartitionTuple {
    pub fn new(parts: Vec<Partition>) -> Self {
        PartitionTuple(parts)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(Partition::weight).sum()
    }

    pub fn components(&self) -> &[Partition] {
        &self.0
    }

    pub fn get(&self, alpha: usize) -> &Partition {
        &self.0[alpha]
    }

    pub fn transpose(&self) -> PartitionTuple {
        PartitionTuple(self.0.iter().map(Partition::transpose).collect())
    }
}

impl fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, y) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            write!(f, "{y}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for PartitionTuple {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| PartitionError::Parse(s.to_string()))?;
        inner
            .split('|')
            .map(Partition::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(PartitionTuple)
    }
}

/// Streams every `r`-tuple of total weight `n` exactly once.
///
/// Diagrams are ordered by decreasing weight, then reverse lexicographically;
/// tuples are ordered lexicographically in their components.
pub struct TupleIter {
    by_weight: Vec<Vec<Partition>>,
    weights: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

pub fn enumerate_tuples(r: usize, n: usize) -> TupleIter {
    assert!(r >= 1, "rank must be positive");
    let by_weight = (0..=n).map(|k| Partition::all_of_weight(k as u32)).collect();
    let mut weights = vec![0; r];
    weights[0] = n;
    TupleIter {
        by_weight,
        weights,
        idx: vec![0; r],
        done: false,
    }
}

impl TupleIter {
    /// Next weight vector in lexicographically decreasing order.
    fn advance_weights(&mut self) -> bool {
        let r = self.weights.len();
        // find the rightmost non-last position with positive weight
        let Some(k) = (0..r.saturating_sub(1)).rev().find(|&k| self.weights[k] > 0) else {
            return false;
        };
        let tail: usize = self.weights[k + 1..].iter().sum();
        self.weights[k] -= 1;
        for w in &mut self.weights[k + 1..] {
            *w = 0;
        }
        self.weights[k + 1] = tail + 1;
        true
    }
}

impl Iterator for TupleIter {
    type Item = PartitionTuple;

    fn next(&mut self) -> Option<PartitionTuple> {
        if self.done {
            return None;
        }
        let out = PartitionTuple(
            self.weights
                .iter()
                .zip(&self.idx)
                .map(|(&w, &i)| self.by_weight[w][i].clone())
                .collect(),
        );
        // odometer over the diagrams of the current weight vector
        let mut k = self.idx.len();
        loop {
            if k == 0 {
                self.idx.iter_mut().for_each(|i| *i = 0);
                self.done = !self.advance_weights();
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.by_weight[self.weights[k]].len() {
                break;
            }
            self.idx[k] = 0;
        }
        Some(out)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        (!parts.is_empty() && parts.iter().all(|&p| p >= 1)).then_some(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `p₁, p₁+p₂, …`.
    pub fn partial_sums(&self) -> Vec<u32> {
        self.0
            .iter()
            .scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }
}

/// All `2^{k−1}` compositions of `k`, by number of parts and then
/// reverse lexicographically.
pub fn enumerate_compositions(k: u32) -> impl Iterator<Item = Composition> {
    assert!(k >= 1, "compositions of a positive integer");
    (1..=k).flat_map(move |i| {
        let mut out = Vec::new();
        fn rec(rest: u32, slots: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if slots == 0 {
                if rest == 0 {
                    out.push(Composition(cur.clone()));
                }
                return;
            }
            for p in (1..=rest + 1 - slots).rev() {
                cur.push(p);
                rec(rest - p, slots - 1, cur, out);
                cur.pop();
            }
        }
        rec(k, i, &mut Vec::new(), &mut out);
        out
    })
}

/// Ordered disjoint non-empty subsets of `{1..n}` with strictly decreasing
/// minima, stored as bitmasks (bit `x−1` for element `x`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DecompositionType(Vec<u32>);

impl DecompositionType {
    pub fn blocks(&self) -> &[u32] {
        &self.0
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.0.iter().map(|b| b.count_ones()).collect()
    }

    pub fn is_valid(&self) -> bool {
        let disjoint = self
            .0
            .iter()
            .enumerate()
            .all(|(a, x)| self.0[a + 1..].iter().all(|y| x & y == 0));
        let minima: Vec<u32> = self.0.iter().map(|b| b.trailing_zeros()).collect();
        disjoint && self.0.iter().all(|&b| b != 0) && minima.windows(2).all(|w| w[0] > w[1])
    }
}

const MAX_DECOMP_N: u32 = 16;

fn decompositions(n: u32, p: &Composition, mut visit: impl FnMut(&[u32])) {
    assert!(n <= MAX_DECOMP_N, "brute force limited to n ≤ {MAX_DECOMP_N}");
    fn rec(n: u32, sizes: &[u32], used: u32, bound: u32, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        let Some((&size, rest)) = sizes.split_first() else {
            visit(cur);
            return;
        };
        // the minimum of the next block is below every earlier minimum
        for m in 0..bound {
            if used & (1 << m) != 0 {
                continue;
            }
            let free_above = ((1u32 << n) - 1) & !used & !((2u32 << m) - 1);
            choose(free_above, size - 1, 1 << m, &mut |block| {
                cur.push(block);
                rec(n, rest, used | block, m, cur, visit);
                cur.pop();
            });
        }
    }
    fn choose(pool: u32, k: u32, acc: u32, f: &mut dyn FnMut(u32)) {
        if k == 0 {
            f(acc);
            return;
        }
        let mut rest = pool;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= !bit;
            choose(rest, k - 1, acc | bit, f);
        }
    }
    rec(n, p.parts(), 0, n, &mut Vec::new(), &mut visit);
}

/// Every decomposition type of `{1..n}` with block sizes `p`.
pub fn decomposition_types(n: u32, p: &Composition) -> Vec<DecompositionType> {
    let mut out = Vec::new();
    if p.total() <= n {
        decompositions(n, p, |b| out.push(DecompositionType(b.to_vec())));
    }
    out
}

/// `|ρ⁻¹(p)|` by brute-force enumeration.
pub fn count_decomposition_types(n: u32, p: &Composition) -> BigUint {
    let mut count = 0u64;
    if p.total() <= n {
        decompositions(n, p, |_| count += 1);
    }
    BigUint::from(count)
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n! / (Π(p_h−1)! · (n−|p|)! · Π_j(p₁+…+p_j))`.
pub fn decomposition_count_closed_form(n: u32, p: &Composition) -> BigUint {
    if p.total() > n {
        return BigUint::from(0u32);
    }
    let mut den = factorial(n - p.total());
    for &ph in p.parts() {
        den *= factorial(ph - 1);
    }
    for s in p.partial_sums() {
        den *= s;
    }
    factorial(n) / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn arm_examples() {
        let l = part(&[3, 1]);
        assert_eq!(l.arm(1, 1), 2);
        assert_eq!(l.arm(2, 2), -1);
        assert_eq!(l.arm(5, 1), -1);
    }

    #[test]
    fn leg_examples() {
        let l = part(&[3, 1]);
        assert_eq!(l.leg(1, 1), 1);
        assert_eq!(l.transpose(), part(&[2, 1, 1]));
        assert_eq!(l.leg(1, 3), 0);
        let e = Partition::empty();
        for i in 1..5 {
            for j in 1..5 {
                assert_eq!(e.leg(i, j), -(i as i64));
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let r1: Vec<String> = enumerate_tuples(1, 3).map(|t| t.to_string()).collect();
        assert_eq!(r1, ["[3]", "[2,1]", "[1,1,1]"]);
        let r2: Vec<String> = enumerate_tuples(2, 1).map(|t| t.to_string()).collect();
        assert_eq!(r2, ["[1|-]", "[-|1]"]);
        assert_eq!(enumerate_tuples(2, 4).count(), 20);
        assert_eq!(enumerate_tuples(3, 0).count(), 1);
    }

    #[test]
    fn enumeration_is_sorted_and_counted() {
        for r in 1..=4 {
            for n in 0..=8 {
                let all: Vec<_> = enumerate_tuples(r, n).collect();
                assert_eq!(BigUint::from(all.len()), tuple_count(r, n));
                let mut dedup = all.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
                assert!(all.iter().all(|t| t.weight() as usize == n && t.rank() == r));
            }
        }
    }

    #[test]
    fn literals_round_trip() {
        for s in ["3,1", "-", "1"] {
            assert_eq!(s.parse::<Partition>().unwrap().to_string(), s);
        }
        for s in ["[3,1|2]", "[-|1]", "[-]"] {
            assert_eq!(s.parse::<PartitionTuple>().unwrap().to_string(), s);
        }
        assert!("1,3".parse::<Partition>().is_err());
        assert!("3,0".parse::<Partition>().is_err());
        assert!("3|1".parse::<PartitionTuple>().is_err());
    }

    #[test]
    fn compositions() {
        let c3: Vec<Vec<u32>> = enumerate_compositions(3).map(|c| c.parts().to_vec()).collect();
        assert_eq!(c3, vec![vec![3], vec![2, 1], vec![1, 2], vec![1, 1, 1]]);
        assert_eq!(enumerate_compositions(1).count(), 1);
        assert_eq!(enumerate_compositions(5).count(), 16);
    }

    #[test]
    fn decomposition_examples() {
        let c = |v: &[u32]| Composition::new(v.to_vec()).unwrap();
        assert_eq!(count_decomposition_types(1, &c(&[1])), BigUint::from(1u32));
        assert_eq!(count_decomposition_types(2, &c(&[1, 1])), BigUint::from(1u32));
        assert_eq!(count_decomposition_types(3, &c(&[2])), BigUint::from(3u32));
        for d in decomposition_types(5, &c(&[2, 1, 1])) {
            assert!(d.is_valid());
            assert_eq!(d.sizes(), vec![2, 1, 1]);
        }
    }
}
