//! Candidates, complete and partial votes, profiles and pairwise margins.
//!
//! Candidates are addressed by index `0..m`. Partial orders are stored as
//! transitively closed bitsets, which caps elections at 64 candidates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_CANDIDATES: usize = 64;

#[inline]
pub(crate) fn bit(x: usize) -> u64 {
    1u64 << x
}

#[inline]
pub(crate) fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateSet {
    names: Vec<String>,
}

impl CandidateSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidArgument("candidate set must be non-empty".into()));
        }
        if names.len() > MAX_CANDIDATES {
            return Err(Error::TooManyCandidates(names.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateCandidate(n.clone()));
            }
        }
        Ok(CandidateSet { names })
    }

    /// Candidates named `a`, `b`, ... for m ≤ 26, otherwise `c1`, `c2`, ...
    pub fn alphabetic(m: usize) -> Result<Self> {
        if m <= 26 {
            Self::new((0..m).map(|i| ((b'a' + i as u8) as char).to_string()))
        } else {
            Self::new((1..=m).map(|i| format!("c{i}")))
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn check(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, m: self.len() })
        }
    }
}

/// A complete vote, most-preferred candidate first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinearOrder(Vec<usize>);

impl LinearOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let m = ranking.len();
        if m > MAX_CANDIDATES {
            return Err(Error::TooManyCandidates(m));
        }
        let mut seen = 0u64;
        for &x in &ranking {
            if x >= m || seen & bit(x) != 0 {
                return Err(Error::NotPermutation(format!("{ranking:?}")));
            }
            seen |= bit(x);
        }
        Ok(LinearOrder(ranking))
    }

    pub fn identity(m: usize) -> Self {
        LinearOrder((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.0
    }

    pub fn top(&self) -> usize {
        self.0[0]
    }

    /// `positions()[x]` is the 0-based rank of candidate `x`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (p, &x) in self.0.iter().enumerate() {
            pos[x] = p;
        }
        pos
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        let pos = self.positions();
        pos[a] < pos[b]
    }

    pub fn reversed(&self) -> Self {
        LinearOrder(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(">"))
    }
}

/// A strict partial order over `m` candidates, kept transitively closed.
///
/// `below[a]` holds every `b` with `a > b`; `above[b]` the transpose.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartialOrder {
    m: usize,
    below: Vec<u64>,
    above: Vec<u64>,
}

impl PartialOrder {
    pub fn empty(m: usize) -> Self {
        PartialOrder { m, below: vec![0; m], above: vec![0; m] }
    }

    /// Builds the transitive closure of `pairs` (each `(a, b)` meaning `a > b`)
    /// and rejects reflexive or cyclic input.
    pub fn from_pairs(m: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if m > MAX_CANDIDATES {
            return Err(Error::TooManyCandidates(m));
        }
        let mut below = vec![0u64; m];
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= m {
                    return Err(Error::IndexOutOfRange { index: x, m });
                }
            }
            if a == b {
                return Err(Error::SameCandidate(a));
            }
            below[a] |= bit(b);
        }
        // Warshall closure over bitsets.
        for k in 0..m {
            for i in 0..m {
                if below[i] & bit(k) != 0 {
                    below[i] |= below[k];
                }
            }
        }
        for a in 0..m {
            if below[a] & bit(a) != 0 {
                let b = (0..m)
                    .find(|&b| b != a && below[a] & bit(b) != 0 && below[b] & bit(a) != 0)
                    .unwrap_or(a);
                return Err(Error::Antisymmetry { a, b });
            }
        }
        let mut above = vec![0u64; m];
        for a in 0..m {
            for b in 0..m {
                if below[a] & bit(b) != 0 {
                    above[b] |= bit(a);
                }
            }
        }
        Ok(PartialOrder { m, below, above })
    }

    pub fn from_linear(order: &LinearOrder) -> Self {
        let r = order.ranking();
        let m = r.len();
        let mut below = vec![0u64; m];
        let mut above = vec![0u64; m];
        let mut seen = 0u64;
        for &x in r {
            above[x] = seen;
            seen |= bit(x);
        }
        let mut rest = 0u64;
        for &x in r.iter().rev() {
            below[x] = rest;
            rest |= bit(x);
        }
        PartialOrder { m, below, above }
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.below[a] & bit(b) != 0
    }

    pub fn determines(&self, a: usize, b: usize) -> bool {
        self.prefers(a, b) || self.prefers(b, a)
    }

    pub fn below_mask(&self, a: usize) -> u64 {
        self.below[a]
    }

    pub fn above_mask(&self, a: usize) -> u64 {
        self.above[a]
    }

    /// All strict pairs `(a, b)` with `a > b`, in lexicographic order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.m {
            for b in 0..self.m {
                if self.prefers(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn num_pairs(&self) -> usize {
        self.below.iter().map(|x| x.count_ones() as usize).sum()
    }

    pub fn is_total(&self) -> bool {
        self.num_pairs() == self.m * self.m.saturating_sub(1) / 2
    }

    pub fn is_empty_order(&self) -> bool {
        self.num_pairs() == 0
    }

    /// Lazily enumerates all linear extensions in lexicographic order of
    /// candidate index at every choice point.
    pub fn linear_extensions(&self) -> LinearExtensions<'_> {
        LinearExtensions {
            po: self,
            prefix: Vec::with_capacity(self.m),
            cursor: vec![0; self.m + 1],
            placed: 0,
            done: false,
            emitted_empty: false,
        }
    }

    pub fn count_linear_extensions(&self) -> u128 {
        fn go(po: &PartialOrder, placed: u64, full: u64, memo: &mut HashMap<u64, u128>) -> u128 {
            if placed == full {
                return 1;
            }
            if let Some(&v) = memo.get(&placed) {
                return v;
            }
            let mut total = 0u128;
            for x in 0..po.m {
                if placed & bit(x) == 0 && po.above[x] & !placed == 0 {
                    total = total.saturating_add(go(po, placed | bit(x), full, memo));
                }
            }
            memo.insert(placed, total);
            total
        }
        go(self, 0, full_mask(self.m), &mut HashMap::new())
    }
}

pub struct LinearExtensions<'a> {
    po: &'a PartialOrder,
    prefix: Vec<usize>,
    cursor: Vec<usize>,
    placed: u64,
    done: bool,
    emitted_empty: bool,
}

impl Iterator for LinearExtensions<'_> {
    type Item = LinearOrder;

    fn next(&mut self) -> Option<LinearOrder> {
        let m = self.po.m;
        if m == 0 {
            if self.emitted_empty {
                return None;
            }
            self.emitted_empty = true;
            return Some(LinearOrder(Vec::new()));
        }
        if self.done {
            return None;
        }
        loop {
            let d = self.prefix.len();
            if d == m {
                let out = LinearOrder(self.prefix.clone());
                let x = self.prefix.pop().expect("non-empty prefix");
                self.placed ^= bit(x);
                return Some(out);
            }
            let placed = self.placed;
            let above = &self.po.above;
            let next = (self.cursor[d]..m)
                .find(|&x| placed & bit(x) == 0 && above[x] & !placed == 0);
            match next {
                Some(x) => {
                    self.cursor[d] = x + 1;
                    self.prefix.push(x);
                    self.placed |= bit(x);
                    self.cursor[d + 1] = 0;
                }
                None => {
                    if d == 0 {
                        self.done = true;
                        return None;
                    }
                    self.cursor[d] = 0;
                    let x = self.prefix.pop().expect("non-empty prefix");
                    self.placed ^= bit(x);
                }
            }
        }
    }
}

pub fn is_extension(linear: &LinearOrder, partial: &PartialOrder) -> Result<bool> {
    if linear.len() != partial.num_candidates() {
        return Err(Error::CandidateMismatch {
            expected: partial.num_candidates(),
            found: linear.len(),
        });
    }
    let pos = linear.positions();
    Ok(partial.strict_pairs().into_iter().all(|(a, b)| pos[a] < pos[b]))
}

pub fn linear_extensions(partial: &PartialOrder) -> LinearExtensions<'_> {
    partial.linear_extensions()
}

pub fn count_linear_extensions(partial: &PartialOrder) -> u128 {
    partial.count_linear_extensions()
}

/// A multiset of complete votes over a fixed candidate set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    candidates: CandidateSet,
    votes: BTreeMap<LinearOrder, u64>,
}

impl Profile {
    pub fn new(candidates: CandidateSet) -> Self {
        Profile { candidates, votes: BTreeMap::new() }
    }

    pub fn from_votes(
        candidates: CandidateSet,
        votes: impl IntoIterator<Item = (LinearOrder, u64)>,
    ) -> Result<Self> {
        let mut p = Profile::new(candidates);
        for (v, mult) in votes {
            p.add(v, mult)?;
        }
        Ok(p)
    }

    pub fn add(&mut self, vote: LinearOrder, multiplicity: u64) -> Result<()> {
        if vote.len() != self.candidates.len() {
            return Err(Error::CandidateMismatch {
                expected: self.candidates.len(),
                found: vote.len(),
            });
        }
        if multiplicity > 0 {
            *self.votes.entry(vote).or_insert(0) += multiplicity;
        }
        Ok(())
    }

    pub fn extend_from(&mut self, other: &Profile) -> Result<()> {
        for (v, &k) in &other.votes {
            self.add(v.clone(), k)?;
        }
        Ok(())
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    /// Total vote count `n` (sum of multiplicities).
    pub fn num_votes(&self) -> u64 {
        self.votes.values().sum()
    }

    /// Number of distinct vote blocks.
    pub fn num_blocks(&self) -> usize {
        self.votes.len()
    }

    pub fn votes(&self) -> impl Iterator<Item = (&LinearOrder, u64)> {
        self.votes.iter().map(|(v, &k)| (v, k))
    }
}

/// Skew-symmetric margin matrix `D(x, y) = N(x, y) - N(y, x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedMajorityGraph {
    m: usize,
    d: Vec<i64>,
}

impl WeightedMajorityGraph {
    pub fn zero(m: usize) -> Self {
        WeightedMajorityGraph { m, d: vec![0; m * m] }
    }

    /// Validates zero diagonal, skew-symmetry and uniform parity.
    pub fn from_matrix(m: usize, d: Vec<i64>) -> Result<Self> {
        if d.len() != m * m {
            return Err(Error::InvalidTarget(format!("matrix has {} entries, expected {}", d.len(), m * m)));
        }
        let g = WeightedMajorityGraph { m, d };
        g.validate()?;
        Ok(g)
    }


    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        let mut parity: Option<i64> = None;
        for x in 0..m {
            if self.get(x, x) != 0 {
                return Err(Error::InvalidTarget(format!("nonzero diagonal at {x}")));
            }
            for y in 0..m {
                if x == y {
                    continue;
                }
                if self.get(x, y) != -self.get(y, x) {
                    return Err(Error::InvalidTarget(format!("not skew-symmetric at ({x},{y})")));
                }
                let p = self.get(x, y).rem_euclid(2);
                match parity {
                    None => parity = Some(p),
                    Some(q) if q != p => {
                        return Err(Error::InvalidTarget(format!("mixed parity at ({x},{y})")))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.d[x * self.m + y]
    }

    /// Sets `D(x, y) = v` and `D(y, x) = -v`.
    pub fn set(&mut self, x: usize, y: usize, v: i64) {
        self.d[x * self.m + y] = v;
        self.d[y * self.m + x] = -v;
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.d
    }

    /// Parity shared by the off-diagonal entries (0 for m < 2).
    pub fn parity(&self) -> i64 {
        if self.m < 2 {
            0
        } else {
            self.get(0, 1).rem_euclid(2)
        }
    }

    pub fn max_abs(&self) -> i64 {
        self.d.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn sum_abs_upper(&self) -> i64 {
        let mut s = 0;
        for x in 0..self.m {
            for y in x + 1..self.m {
                s += self.get(x, y).abs();
            }
        }
        s
    }
}

pub fn pairwise_margin(profile: &Profile, x: usize, y: usize) -> Result<i64> {
    profile.candidates.check(x)?;
    profile.candidates.check(y)?;
    if x == y {
        return Err(Error::SameCandidate(x));
    }
    let mut d = 0i64;
    for (v, k) in profile.votes() {
        let pos = v.positions();
        if pos[x] < pos[y] {
            d += k as i64;
        } else {
            d -= k as i64;
        }
    }
    Ok(d)
}

pub fn majority_graph(profile: &Profile) -> WeightedMajorityGraph {
    let m = profile.num_candidates();
    let mut d = vec![0i64; m * m];
    for (v, k) in profile.votes() {
        let r = v.ranking();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (r[i], r[j]);
                d[a * m + b] += k as i64;
                d[b * m + a] -= k as i64;
            }
        }
    }
    WeightedMajorityGraph { m, d }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lo(v: &[usize]) -> LinearOrder {
        LinearOrder::new(v.to_vec()).unwrap()
    }

    fn cycle_profile() -> Profile {
        Profile::from_votes(
            CandidateSet::alphabetic(3).unwrap(),
            [(lo(&[0, 1, 2]), 1), (lo(&[1, 2, 0]), 1), (lo(&[2, 0, 1]), 1)],
        )
        .unwrap()
    }

    #[test]
    fn margins_on_small_profiles() {
        let empty = Profile::new(CandidateSet::alphabetic(3).unwrap());
        assert_eq!(pairwise_margin(&empty, 0, 1).unwrap(), 0);
        assert_eq!(pairwise_margin(&cycle_profile(), 0, 1).unwrap(), 1);
        let unanimous =
            Profile::from_votes(CandidateSet::alphabetic(3).unwrap(), [(lo(&[0, 1, 2]), 4)]).unwrap();
        assert_eq!(pairwise_margin(&unanimous, 0, 2).unwrap(), 4);
    }

    #[test]
    fn margin_errors() {
        let p = cycle_profile();
        assert_eq!(pairwise_margin(&p, 1, 1), Err(Error::SameCandidate(1)));
        assert!(matches!(pairwise_margin(&p, 0, 7), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn majority_graph_examples() {
        let g = majority_graph(&cycle_profile());
        assert_eq!((g.get(0, 1), g.get(1, 2), g.get(2, 0)), (1, 1, 1));
        g.validate().unwrap();

        let single =
            Profile::from_votes(CandidateSet::alphabetic(2).unwrap(), [(lo(&[0, 1]), 1)]).unwrap();
        let g = majority_graph(&single);
        assert_eq!((g.get(0, 1), g.get(1, 0)), (1, -1));

        let opposite = Profile::from_votes(
            CandidateSet::alphabetic(2).unwrap(),
            [(lo(&[0, 1]), 1), (lo(&[1, 0]), 1)],
        )
        .unwrap();
        assert_eq!(majority_graph(&opposite).max_abs(), 0);
    }

    #[test]
    fn extension_membership() {
        let p = PartialOrder::from_pairs(3, [(0, 1)]).unwrap();
        assert!(is_extension(&lo(&[0, 1, 2]), &p).unwrap());
        assert!(!is_extension(&lo(&[1, 0, 2]), &p).unwrap());
        assert!(is_extension(&lo(&[2, 1, 0]), &PartialOrder::empty(3)).unwrap());
        assert!(is_extension(&lo(&[0, 1]), &p).is_err());
    }

    #[test]
    fn enumerates_extensions_in_lexicographic_order() {
        let p = PartialOrder::from_pairs(3, [(0, 1)]).unwrap();
        let exts: Vec<_> = p.linear_extensions().collect();
        assert_eq!(exts, vec![lo(&[0, 1, 2]), lo(&[0, 2, 1]), lo(&[2, 0, 1])]);
        assert_eq!(p.count_linear_extensions(), 3);

        assert_eq!(PartialOrder::empty(3).linear_extensions().count(), 6);
        assert_eq!(PartialOrder::empty(4).count_linear_extensions(), 24);

        let chain = PartialOrder::from_linear(&lo(&[2, 0, 3, 1]));
        let exts: Vec<_> = chain.linear_extensions().collect();
        assert_eq!(exts, vec![lo(&[2, 0, 3, 1])]);
        assert_eq!(chain.count_linear_extensions(), 1);
    }

    #[test]
    fn closure_and_antisymmetry() {
        let p = PartialOrder::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(p.prefers(0, 2));
        assert!(p.is_total());
        assert!(matches!(
            PartialOrder::from_pairs(2, [(0, 1), (1, 0)]),
            Err(Error::Antisymmetry { .. })
        ));
        assert!(matches!(
            PartialOrder::from_pairs(3, [(0, 1), (1, 2), (2, 0)]),
            Err(Error::Antisymmetry { .. })
        ));
        assert_eq!(PartialOrder::from_pairs(2, [(1, 1)]), Err(Error::SameCandidate(1)));
    }

    #[test]
    fn rejects_bad_linear_orders() {
        assert!(LinearOrder::new(vec![0, 0, 1]).is_err());
        assert!(LinearOrder::new(vec![0, 3, 1]).is_err());
        assert!(CandidateSet::new(["a", "a"]).is_err());
    }
}
