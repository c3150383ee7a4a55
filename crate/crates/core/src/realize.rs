//! Building profiles with prescribed pairwise margins or prescribed score offsets.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::election::{majority_graph, CandidateSet, LinearOrder, Profile, WeightedMajorityGraph};
use crate::error::{Error, Result};
use crate::rules::{scoring_winners, ScoreVector};

/// Desired margin matrix: zero diagonal, skew-symmetric, uniform parity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginTarget {
    wmg: WeightedMajorityGraph,
}

impl MarginTarget {
    pub fn new(m: usize, f: Vec<i64>) -> Result<Self> {
        Ok(MarginTarget { wmg: WeightedMajorityGraph::from_matrix(m, f)? })
    }

    pub fn from_wmg(wmg: &WeightedMajorityGraph) -> Result<Self> {
        wmg.validate()?;
        Ok(MarginTarget { wmg: wmg.clone() })
    }

    pub fn num_candidates(&self) -> usize {
        self.wmg.num_candidates()
    }

    pub fn get(&self, a: usize, b: usize) -> i64 {
        self.wmg.get(a, b)
    }

    pub fn as_wmg(&self) -> &WeightedMajorityGraph {
        &self.wmg
    }
}

/// Realizes `target` over alphabetically named candidates.
pub fn realize_wmg(target: &MarginTarget) -> Result<Profile> {
    realize_wmg_over(CandidateSet::alphabetic(target.num_candidates())?, target)
}

/// Realizes `target` exactly with at most `sum |f(a,b)| + 1` votes.
///
/// Each unit pair `a>b>rest, rev(rest)>a>b` adds 2 to `D(a,b)` and nothing
/// elsewhere. Odd targets first take one identity-or-reversed vote, chosen
/// to agree with at least half of the arcs.
pub fn realize_wmg_over(candidates: CandidateSet, target: &MarginTarget) -> Result<Profile> {
    let m = target.num_candidates();
    if candidates.len() != m {
        return Err(Error::CandidateMismatch { expected: m, found: candidates.len() });
    }
    let mut residual = target.wmg.clone();
    let mut votes: BTreeMap<LinearOrder, u64> = BTreeMap::new();

    if target.wmg.parity() == 1 {
        let (mut agree, mut disagree) = (0usize, 0usize);
        for a in 0..m {
            for b in a + 1..m {
                if target.get(a, b) > 0 {
                    agree += 1;
                } else {
                    disagree += 1;
                }
            }
        }
        let base = if agree >= disagree {
            LinearOrder::identity(m)
        } else {
            LinearOrder::identity(m).reversed()
        };
        let r = base.ranking().to_vec();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (r[i], r[j]);
                residual.set(a, b, residual.get(a, b) - 1);
            }
        }
        votes.insert(base, 1);
    }

    for a in 0..m {
        for b in a + 1..m {
            let v = residual.get(a, b);
            if v == 0 {
                continue;
            }
            let (x, y) = if v > 0 { (a, b) } else { (b, a) };
            let units = (v.unsigned_abs() / 2) as u64;
            let rest: Vec<usize> = (0..m).filter(|&z| z != x && z != y).collect();
            let mut up = vec![x, y];
            up.extend(rest.iter().copied());
            let mut down: Vec<usize> = rest.iter().rev().copied().collect();
            down.extend([x, y]);
            *votes.entry(LinearOrder::new(up)?).or_insert(0) += units;
            *votes.entry(LinearOrder::new(down)?).or_insert(0) += units;
        }
    }

    let profile = Profile::from_votes(candidates, votes)?;
    if majority_graph(&profile) != target.wmg {
        return Err(Error::Internal("margin realization mismatch".into()));
    }
    Ok(profile)
}

/// Desired scores `lambda + offsets[i]` for `main[i]`, with every decoy below `lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreTarget {
    pub candidates: CandidateSet,
    pub main: Vec<usize>,
    pub offsets: Vec<i64>,
    pub decoys: Vec<usize>,
    pub sv: ScoreVector,
}

impl ScoreTarget {
    fn validate(&self) -> Result<usize> {
        let n = self.candidates.len();
        if self.sv.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: self.sv.len() });
        }
        if self.decoys.is_empty() {
            return Err(Error::InvalidTarget("at least one decoy is required".into()));
        }
        if self.main.is_empty() {
            return Err(Error::InvalidTarget("no main candidates".into()));
        }
        if self.main.len() != self.offsets.len() {
            return Err(Error::InvalidTarget("one offset per main candidate".into()));
        }
        let mut seen = vec![false; n];
        for &x in self.main.iter().chain(&self.decoys) {
            self.candidates.check(x)?;
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidTarget(format!("candidate {x} listed twice")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTarget("main and decoys must cover all candidates".into()));
        }
        self.sv
            .gap_index()
            .ok_or_else(|| Error::InvalidTarget("score vector is not normalized".into()))
    }
}

/// Builds a profile in which `main[i]` scores `lambda + offsets[i]` and every
/// decoy scores strictly below `lambda`; returns the profile and `lambda`.
///
/// The unit gadget is a block of `N` cyclic rotations of `y, x, others...`
/// with `y` and `x` swapped in the rotation that puts them on the unit gap.
/// A block leaves all scores level except `x` (+1) and `y` (-1).
pub fn realize_scores(target: &ScoreTarget) -> Result<(Profile, Rational64)> {
    let j = target.validate()?;
    let n = target.candidates.len();
    let min_x = *target.offsets.iter().min().expect("non-empty");

    // (x, y) -> number of blocks.
    let mut blocks: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut delta = vec![0i64; n];
    let mut add_block = |x: usize, y: usize, k: u64, delta: &mut Vec<i64>| {
        if k > 0 {
            *blocks.entry((x, y)).or_insert(0) += k;
            delta[x] += k as i64;
            delta[y] -= k as i64;
        }
    };

    let mut next_decoy = 0usize;
    for (&x, &off) in target.main.iter().zip(&target.offsets) {
        for _ in 0..(off - min_x) {
            let d = target.decoys[next_decoy % target.decoys.len()];
            next_decoy += 1;
            add_block(x, d, 1, &mut delta);
        }
    }
    // Rounds lift every main candidate by one and push a decoy down.
    let mut rounds = 0i64;
    loop {
        let floor = rounds - min_x;
        let worst = target
            .decoys
            .iter()
            .copied()
            .filter(|&d| delta[d] >= floor)
            .max_by_key(|&d| (delta[d], std::cmp::Reverse(d)));
        match worst {
            None => break,
            Some(d) => {
                for &x in &target.main {
                    add_block(x, d, 1, &mut delta);
                }
                rounds += 1;
            }
        }
    }

    let mut votes: BTreeMap<LinearOrder, u64> = BTreeMap::new();
    for (&(x, y), &k) in &blocks {
        let mut pi = vec![y, x];
        pi.extend((0..n).filter(|&z| z != x && z != y));
        for r in 0..n {
            let mut ranking = vec![0usize; n];
            for (i, &c) in pi.iter().enumerate() {
                ranking[(i + r) % n] = c;
            }
            if r == j {
                ranking.swap(j, j + 1);
            }
            *votes.entry(LinearOrder::new(ranking)?).or_insert(0) += k;
        }
    }
    let profile = Profile::from_votes(target.candidates.clone(), votes)?;

    let scores = scoring_winners(&profile, &target.sv)?.scores;
    let lambda = scores[target.main[0]] - Rational64::from_integer(target.offsets[0]);
    let main_ok = target
        .main
        .iter()
        .zip(&target.offsets)
        .all(|(&x, &o)| scores[x] == lambda + Rational64::from_integer(o));
    let decoys_ok = target.decoys.iter().all(|&d| scores[d] < lambda);
    if !(main_ok && decoys_ok) {
        let shown: Vec<String> = scores.iter().map(|s| s.to_string()).collect();
        return Err(Error::Realization(format!(
            "achieved scores [{}] with lambda {lambda}",
            shown.join(", ")
        )));
    }
    Ok((profile, lambda))
}
