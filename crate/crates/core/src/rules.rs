//! Winner determination. A candidate wins only if it is the unique winner.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::election::{bit, majority_graph, Profile, WeightedMajorityGraph};
use crate::error::{Error, Result};

/// Default cap on ranked-pairs search nodes.
pub const DEFAULT_RP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreVector {
    alpha: Vec<Rational64>,
}

impl ScoreVector {
    /// Accepts any non-increasing, non-empty sequence.
    pub fn new(alpha: Vec<Rational64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::DegenerateScoreVector("empty".into()));
        }
        if alpha.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::DegenerateScoreVector("not non-increasing".into()));
        }
        Ok(ScoreVector { alpha })
    }

    pub fn from_integers(alpha: &[i64]) -> Result<Self> {
        Self::new(alpha.iter().map(|&a| Rational64::from_integer(a)).collect())
    }

    pub fn borda(m: usize) -> Self {
        ScoreVector { alpha: (0..m).rev().map(|a| Rational64::from_integer(a as i64)).collect() }
    }

    /// `(m-1)^2, (m-2)^2, ..., 1, 0`: strict and already normalized.
    pub fn quadratic(m: usize) -> Self {
        ScoreVector {
            alpha: (0..m).rev().map(|a| Rational64::from_integer((a * a) as i64)).collect(),
        }
    }

    pub fn plurality(m: usize) -> Self {
        ScoreVector {
            alpha: (0..m).map(|p| if p == 0 { Rational64::one() } else { Rational64::zero() }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self) -> &[Rational64] {
        &self.alpha
    }

    pub fn is_strict(&self) -> bool {
        self.alpha.windows(2).all(|w| w[0] > w[1])
    }

    /// Index `j` (0-based) with `alpha[j] - alpha[j+1] = 1` and zeros after it.
    pub fn gap_index(&self) -> Option<usize> {
        let m = self.alpha.len();
        if m < 2 || !self.alpha[m - 1].is_zero() {
            return None;
        }
        let j = (0..m - 1).rev().find(|&j| !self.alpha[j].is_zero())?;
        (self.alpha[j] - self.alpha[j + 1] == Rational64::one()).then_some(j)
    }

    pub fn is_normalized(&self) -> bool {
        self.gap_index().is_some()
    }

    /// `alpha[i] - alpha[i+1]`, 0-based.
    pub fn delta(&self, i: usize) -> Rational64 {
        self.alpha[i] - self.alpha[i + 1]
    }

    /// Integer copy scaled by the least common denominator, with that factor.
    pub fn scaled_integers(&self) -> (Vec<i64>, i64) {
        let mut l = 1i64;
        for a in &self.alpha {
            l = num_integer_lcm(l, *a.denom());
        }
        let v = self.alpha.iter().map(|a| (a * Rational64::from_integer(l)).to_integer()).collect();
        (v, l)
    }
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    }
    a / gcd(a, b) * b
}

/// Affine rescaling `lambda * alpha + mu` into normalized form.
pub fn normalize(alpha: &[Rational64]) -> Result<ScoreVector> {
    let raw = ScoreVector::new(alpha.to_vec())?;
    let m = alpha.len();
    let last = alpha[m - 1];
    let j = (0..m.saturating_sub(1))
        .rev()
        .find(|&j| alpha[j] != last)
        .ok_or_else(|| Error::DegenerateScoreVector(format!("constant vector of length {m}")))?;
    let scale = Rational64::one() / raw.delta(j);
    Ok(ScoreVector { alpha: alpha.iter().map(|&a| (a - last) * scale).collect() })
}

impl fmt::Display for ScoreVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.alpha.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrictFamily {
    Borda,
    Quadratic,
}

impl StrictFamily {
    pub fn vector(self, m: usize) -> ScoreVector {
        match self {
            StrictFamily::Borda => ScoreVector::borda(m),
            StrictFamily::Quadratic => ScoreVector::quadratic(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Borda over however many candidates the election has.
    Borda,
    Scoring(ScoreVector),
    Bucklin,
    Maximin,
    Copeland,
    RankedPairs,
}

impl Rule {
    pub fn score_vector(&self, m: usize) -> Option<ScoreVector> {
        match self {
            Rule::Borda => Some(ScoreVector::borda(m)),
            Rule::Scoring(sv) => Some(sv.clone()),
            _ => None,
        }
    }

    /// Rules for which raising `c` in a vote never hurts `c`.
    pub fn is_monotone(&self) -> bool {
        !matches!(self, Rule::RankedPairs)
    }

    pub fn uses_majority_graph(&self) -> bool {
        matches!(self, Rule::Maximin | Rule::Copeland | Rule::RankedPairs)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Borda => write!(f, "borda"),
            Rule::Scoring(sv) => write!(f, "scoring:{sv}"),
            Rule::Bucklin => write!(f, "bucklin"),
            Rule::Maximin => write!(f, "maximin"),
            Rule::Copeland => write!(f, "copeland"),
            Rule::RankedPairs => write!(f, "rankedpairs"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let rule = match (name.to_ascii_lowercase().as_str(), arg) {
            ("borda", None) => Rule::Borda,
            ("bucklin", None) => Rule::Bucklin,
            ("maximin", None) => Rule::Maximin,
            ("copeland", None) => Rule::Copeland,
            ("rankedpairs" | "ranked_pairs" | "ranked-pairs", None) => Rule::RankedPairs,
            ("scoring", Some(a)) => {
                let alpha = a
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<Rational64>()
                            .map_err(|_| Error::InvalidArgument(format!("bad score `{x}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Rule::Scoring(ScoreVector::new(alpha)?)
            }
            _ => return Err(Error::InvalidArgument(format!("unknown rule `{s}`"))),
        };
        Ok(rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerReport {
    /// Per-candidate scores. Bucklin scores are ranks (lower is better);
    /// ranked pairs reports 1 for cowinners and 0 otherwise.
    pub scores: Vec<Rational64>,
    pub cowinners: Vec<usize>,
    pub unique_winner: Option<usize>,
}

impl WinnerReport {
    fn from_cowinners(scores: Vec<Rational64>, cowinners: Vec<usize>) -> Self {
        let unique_winner = (cowinners.len() == 1).then(|| cowinners[0]);
        WinnerReport { scores, cowinners, unique_winner }
    }

    fn argmax(scores: Vec<Rational64>) -> Self {
        let best = scores.iter().max().copied().unwrap_or_else(Rational64::zero);
        let cow = (0..scores.len()).filter(|&i| scores[i] == best).collect();
        Self::from_cowinners(scores, cow)
    }

    pub fn is_unique_winner(&self, c: usize) -> bool {
        self.unique_winner == Some(c)
    }
}

pub fn scoring_winners(profile: &Profile, sv: &ScoreVector) -> Result<WinnerReport> {
    let m = profile.num_candidates();
    if sv.len() != m {
        return Err(Error::LengthMismatch { expected: m, found: sv.len() });
    }
    let mut scores = vec![Rational64::zero(); m];
    for (v, k) in profile.votes() {
        let k = Rational64::from_integer(k as i64);
        for (p, &x) in v.ranking().iter().enumerate() {
            scores[x] += sv.alpha[p] * k;
        }
    }
    Ok(WinnerReport::argmax(scores))
}

pub(crate) fn bucklin_scores_from_hist(m: usize, n: u64, hist: &[i64]) -> Vec<usize> {
    (0..m)
        .map(|x| {
            let mut acc = 0i64;
            for l in 0..m {
                acc += hist[x * m + l];
                if 2 * acc as u64 > n {
                    return l + 1;
                }
            }
            m
        })
        .collect()
}

pub fn bucklin_winners(profile: &Profile) -> Result<WinnerReport> {
    let m = profile.num_candidates();
    let n = profile.num_votes();
    if n == 0 {
        return Err(Error::EmptyProfile);
    }
    let mut hist = vec![0i64; m * m];
    for (v, k) in profile.votes() {
        for (p, &x) in v.ranking().iter().enumerate() {
            hist[x * m + p] += k as i64;
        }
    }
    let ls = bucklin_scores_from_hist(m, n, &hist);
    let best = *ls.iter().min().expect("m >= 1");
    let cow = (0..m).filter(|&x| ls[x] == best).collect();
    let scores = ls.into_iter().map(|l| Rational64::from_integer(l as i64)).collect();
    Ok(WinnerReport::from_cowinners(scores, cow))
}

pub(crate) fn maximin_scores(m: usize, d: &[i64]) -> Vec<i64> {
    (0..m)
        .map(|x| (0..m).filter(|&y| y != x).map(|y| d[x * m + y]).min().unwrap_or(0))
        .collect()
}

pub(crate) fn copeland_scores(m: usize, d: &[i64]) -> Vec<i64> {
    (0..m).map(|x| (0..m).filter(|&y| d[x * m + y] > 0).count() as i64).collect()
}

fn int_report(scores: Vec<i64>) -> WinnerReport {
    WinnerReport::argmax(scores.into_iter().map(Rational64::from_integer).collect())
}

/// With a single candidate, that candidate wins with score 0.
pub fn maximin_winners(wmg: &WeightedMajorityGraph) -> WinnerReport {
    int_report(maximin_scores(wmg.num_candidates(), wmg.as_slice()))
}

pub fn copeland_winners(wmg: &WeightedMajorityGraph) -> WinnerReport {
    int_report(copeland_scores(wmg.num_candidates(), wmg.as_slice()))
}

/// Bitmask of candidates that win ranked pairs under at least one tie-breaking.
///
/// Positive edges are locked in groups of equal margin. Inside a group every
/// processing order is explored, but edges already implied or contradicted
/// by the current closure are settled without branching. Zero-margin pairs
/// come last and can realise any linear extension of the locked relation,
/// so the survivors are exactly the maximal elements at that point.
pub(crate) fn rp_winner_mask(m: usize, d: &[i64], budget: u64) -> Result<u64> {
    let mut edges: Vec<(i64, usize, usize)> = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if a != b && d[a * m + b] > 0 {
                edges.push((d[a * m + b], a, b));
            }
        }
    }
    edges.sort_by(|x, y| y.0.cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut last = None;
    for (w, a, b) in edges {
        if last != Some(w) {
            groups.push(Vec::new());
            last = Some(w);
        }
        groups.last_mut().expect("just pushed").push((a, b));
    }

    let mut search = RpSearch {
        m,
        groups: &groups,
        seen: HashSet::new(),
        winners: 0,
        nodes: 0,
        budget,
    };
    let below = vec![0u64; m];
    let first = if groups.is_empty() { 0 } else { full_group_mask(groups[0].len()) };
    search.visit(0, below, first)?;
    Ok(search.winners)
}

fn full_group_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

struct RpSearch<'a> {
    m: usize,
    groups: &'a [Vec<(usize, usize)>],
    seen: HashSet<(usize, Vec<u64>, u64)>,
    winners: u64,
    nodes: u64,
    budget: u64,
}

impl RpSearch<'_> {
    fn visit(&mut self, g: usize, below: Vec<u64>, mut remaining: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget, needed: self.nodes as u128 });
        }
        if g == self.groups.len() {
            let mut dominated = 0u64;
            for x in 0..self.m {
                dominated |= below[x];
            }
            for x in 0..self.m {
                if dominated & bit(x) == 0 {
                    self.winners |= bit(x);
                }
            }
            return Ok(());
        }
        let group = &self.groups[g];
        if group.len() > 64 {
            return Err(Error::InvalidArgument("more than 64 pairs share one margin".into()));
        }
        // Settle edges whose fate no longer depends on order.
        for (i, &(a, b)) in group.iter().enumerate() {
            if remaining & bit(i) != 0 && (below[a] & bit(b) != 0 || below[b] & bit(a) != 0) {
                remaining &= !bit(i);
            }
        }
        if remaining == 0 {
            let next = if g + 1 < self.groups.len() { full_group_mask(self.groups[g + 1].len()) } else { 0 };
            return self.visit(g + 1, below, next);
        }
        if !self.seen.insert((g, below.clone(), remaining)) {
            return Ok(());
        }
        for i in 0..group.len() {
            if remaining & bit(i) == 0 {
                continue;
            }
            let (a, b) = group[i];
            let mut next = below.clone();
            lock(&mut next, a, b);
            self.visit(g, next, remaining & !bit(i))?;
        }
        Ok(())
    }
}

/// Adds `a > b` and restores transitive closure.
fn lock(below: &mut [u64], a: usize, b: usize) {
    let add = below[b] | bit(b);
    for x in 0..below.len() {
        if x == a || below[x] & bit(a) != 0 {
            below[x] |= add;
        }
    }
}

pub fn ranked_pairs_winners(wmg: &WeightedMajorityGraph) -> Result<WinnerReport> {
    ranked_pairs_winners_with_budget(wmg, DEFAULT_RP_BUDGET)
}

pub fn ranked_pairs_winners_with_budget(wmg: &WeightedMajorityGraph, budget: u64) -> Result<WinnerReport> {
    let m = wmg.num_candidates();
    let mask = rp_winner_mask(m, wmg.as_slice(), budget)?;
    let cow: Vec<usize> = (0..m).filter(|&x| mask & bit(x) != 0).collect();
    let scores = (0..m)
        .map(|x| if mask & bit(x) != 0 { Rational64::one() } else { Rational64::zero() })
        .collect();
    Ok(WinnerReport::from_cowinners(scores, cow))
}

pub fn winners(profile: &Profile, rule: &Rule) -> Result<WinnerReport> {
    match rule {
        Rule::Borda => scoring_winners(profile, &ScoreVector::borda(profile.num_candidates())),
        Rule::Scoring(sv) => scoring_winners(profile, sv),
        Rule::Bucklin => bucklin_winners(profile),
        _ => winners_from_wmg(&majority_graph(profile), rule),
    }
}

/// Dispatch for rules that only look at the majority graph.
pub fn winners_from_wmg(wmg: &WeightedMajorityGraph, rule: &Rule) -> Result<WinnerReport> {
    match rule {
        Rule::Maximin => Ok(maximin_winners(wmg)),
        Rule::Copeland => Ok(copeland_winners(wmg)),
        Rule::RankedPairs => ranked_pairs_winners(wmg),
        other => Err(Error::InvalidArgument(format!("rule `{other}` needs a full profile"))),
    }
}
