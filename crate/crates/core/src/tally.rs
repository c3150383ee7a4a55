// Incremental integer tallies used by the brute-force searches.
//
// A search keeps one flat i64 state, adds or removes sparse vote
// contributions, and asks whether the distinguished candidate wins uniquely.

use crate::election::{bit, LinearOrder};
use crate::error::{Error, Result};
use crate::rules::{bucklin_scores_from_hist, copeland_scores, maximin_scores, rp_winner_mask, Rule, DEFAULT_RP_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Scoring,
    Bucklin,
    Maximin,
    Copeland,
    RankedPairs,
}

#[derive(Debug, Clone)]
pub(crate) struct Tally {
    kind: Kind,
    m: usize,
    c: usize,
    n_total: u64,
    weights: Vec<i64>,
}

pub(crate) type Contribution = Vec<(usize, i64)>;

impl Tally {
    /// `n_total` is the final vote count, needed for Bucklin majorities.
    pub fn new(rule: &Rule, m: usize, c: usize, n_total: u64) -> Result<Self> {
        let (kind, weights) = match rule {
            Rule::Borda | Rule::Scoring(_) => {
                let sv = rule.score_vector(m).expect("scoring rule");
                if sv.len() != m {
                    return Err(Error::LengthMismatch { expected: m, found: sv.len() });
                }
                (Kind::Scoring, sv.scaled_integers().0)
            }
            Rule::Bucklin => (Kind::Bucklin, Vec::new()),
            Rule::Maximin => (Kind::Maximin, Vec::new()),
            Rule::Copeland => (Kind::Copeland, Vec::new()),
            Rule::RankedPairs => (Kind::RankedPairs, Vec::new()),
        };
        Ok(Tally { kind, m, c, n_total, weights })
    }

    pub fn state_len(&self) -> usize {
        match self.kind {
            Kind::Scoring => self.m,
            _ => self.m * self.m,
        }
    }

    pub fn contribution(&self, vote: &LinearOrder) -> Contribution {
        let r = vote.ranking();
        let m = self.m;
        match self.kind {
            Kind::Scoring => r.iter().enumerate().map(|(p, &x)| (x, self.weights[p])).collect(),
            Kind::Bucklin => r.iter().enumerate().map(|(p, &x)| (x * m + p, 1)).collect(),
            _ => {
                let mut out = Vec::with_capacity(m * (m - 1));
                for i in 0..m {
                    for j in i + 1..m {
                        out.push((r[i] * m + r[j], 1));
                        out.push((r[j] * m + r[i], -1));
                    }
                }
                out
            }
        }
    }

    #[inline]
    pub fn apply(state: &mut [i64], contrib: &Contribution, k: i64) {
        for &(i, v) in contrib {
            state[i] += v * k;
        }
    }

    pub fn wins(&self, state: &[i64]) -> Result<bool> {
        let (m, c) = (self.m, self.c);
        if m == 1 {
            return Ok(true);
        }
        let beats_all = |s: &[i64]| (0..m).all(|x| x == c || s[c] > s[x]);
        Ok(match self.kind {
            Kind::Scoring => beats_all(state),
            Kind::Bucklin => {
                if self.n_total == 0 {
                    return Err(Error::EmptyProfile);
                }
                let ls = bucklin_scores_from_hist(m, self.n_total, state);
                (0..m).all(|x| x == c || ls[c] < ls[x])
            }
            Kind::Maximin => beats_all(&maximin_scores(m, state)),
            Kind::Copeland => beats_all(&copeland_scores(m, state)),
            Kind::RankedPairs => rp_winner_mask(m, state, DEFAULT_RP_BUDGET)? == bit(c),
        })
    }
}
