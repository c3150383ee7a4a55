//! Set cover to possible winner reductions for strict scoring rules, maximin,
//! Copeland, Bucklin and ranked pairs.
//!
//! Each generator preprocesses the set-cover instance with
//! [`preprocess_parity`], lays out one partial vote per set and completes the
//! profile with realized complete votes. The resulting [`GadgetInstance`]
//! keeps the provenance needed to translate covers in both directions.

mod bucklin;
mod copeland;
mod maximin;
mod preprocess;
mod rankedpairs;
mod scoring;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::election::{CandidateSet, LinearOrder, PartialOrder, Profile};
use crate::error::{Error, Result};
use crate::oracle::{PWInstance, SetCoverInstance};
use crate::realize::{realize_wmg_over, MarginTarget};
use crate::rules::StrictFamily;

pub use preprocess::{preprocess_parity, Mode, Provenance, SetOrigin, Step};
pub use verify::{verify_reduction, ReductionReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetRule {
    StrictScoring(StrictFamily),
    Maximin,
    Copeland,
    Bucklin,
    RankedPairs,
}

impl GadgetRule {
    pub const ALL: [GadgetRule; 6] = [
        GadgetRule::StrictScoring(StrictFamily::Borda),
        GadgetRule::StrictScoring(StrictFamily::Quadratic),
        GadgetRule::Maximin,
        GadgetRule::Copeland,
        GadgetRule::Bucklin,
        GadgetRule::RankedPairs,
    ];

    pub fn mode(self) -> Mode {
        match self {
            GadgetRule::StrictScoring(_) => Mode::Scoring,
            GadgetRule::Maximin => Mode::Maximin,
            GadgetRule::Copeland => Mode::Copeland,
            GadgetRule::Bucklin => Mode::Bucklin,
            GadgetRule::RankedPairs => Mode::RankedPairs,
        }
    }
}

impl fmt::Display for GadgetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetRule::StrictScoring(StrictFamily::Borda) => "borda",
            GadgetRule::StrictScoring(StrictFamily::Quadratic) => "quadratic",
            GadgetRule::Maximin => "maximin",
            GadgetRule::Copeland => "copeland",
            GadgetRule::Bucklin => "bucklin",
            GadgetRule::RankedPairs => "rankedpairs",
        })
    }
}

impl FromStr for GadgetRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "borda" => GadgetRule::StrictScoring(StrictFamily::Borda),
            "quadratic" => GadgetRule::StrictScoring(StrictFamily::Quadratic),
            "maximin" => GadgetRule::Maximin,
            "copeland" => GadgetRule::Copeland,
            "bucklin" => GadgetRule::Bucklin,
            "rankedpairs" | "ranked_pairs" | "ranked-pairs" => GadgetRule::RankedPairs,
            other => return Err(Error::InvalidArgument(format!("unknown gadget rule `{other}`"))),
        })
    }
}

/// Which votes a margin constraint counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Accounting {
    /// Complete votes plus the pairs every partial vote already decides.
    Final,
    /// Complete votes alone.
    CompleteOnly,
}

/// `D(a, b) = value` under the given accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarginConstraint {
    pub a: usize,
    pub b: usize,
    pub value: i64,
    pub accounting: Accounting,
}

impl MarginConstraint {
    fn new(a: usize, b: usize, value: i64, accounting: Accounting) -> Self {
        MarginConstraint { a, b, value, accounting }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetInstance {
    pub rule: GadgetRule,
    pub pw: PWInstance,
    pub provenance: Provenance,
    /// Margin constraints the complete votes were built to meet; empty for
    /// the scoring and Bucklin gadgets.
    pub constraints: Vec<MarginConstraint>,
}

impl GadgetInstance {
    /// The extension the forward direction builds from a cover of the original instance.
    pub fn forward_witness(&self, cover: &[usize]) -> Result<Vec<LinearOrder>> {
        let sc = &self.provenance.processed;
        let cover = self.provenance.cover_to_processed(cover)?;
        match self.rule {
            GadgetRule::StrictScoring(_) => scoring::forward(sc, &cover),
            GadgetRule::Maximin => maximin::forward(sc, &cover),
            GadgetRule::Copeland => copeland::forward(sc, &cover),
            GadgetRule::Bucklin => bucklin::forward(sc, &cover),
            GadgetRule::RankedPairs => rankedpairs::forward(sc, &cover),
        }
    }

    /// Reads a cover of the original instance off an extension that makes
    /// the distinguished candidate win.
    pub fn extract_cover(&self, extensions: &[LinearOrder]) -> Result<Vec<usize>> {
        let sc = &self.provenance.processed;
        if extensions.len() != sc.t() {
            return Err(Error::InvalidWitness(format!(
                "expected {} extensions, found {}",
                sc.t(),
                extensions.len()
            )));
        }
        let cover = match self.rule {
            GadgetRule::StrictScoring(_) => scoring::extract(sc, extensions),
            GadgetRule::Maximin => maximin::extract(sc, extensions),
            GadgetRule::Copeland => copeland::extract(sc, extensions),
            GadgetRule::Bucklin => bucklin::extract(sc, extensions),
            GadgetRule::RankedPairs => rankedpairs::extract(sc, extensions),
        };
        self.provenance.cover_to_original(&cover)
    }

    /// Whether replaying the provenance and regenerating gives this instance.
    pub fn replays_exactly(&self) -> bool {
        self.provenance.replays_exactly()
            && generate(&self.provenance.original, self.rule).is_ok_and(|g| g == *self)
    }
}

pub fn generate(sc: &SetCoverInstance, rule: GadgetRule) -> Result<GadgetInstance> {
    let provenance = preprocess_parity(sc, rule.mode())?;
    let (pw, constraints, notes) = match rule {
        GadgetRule::StrictScoring(family) => scoring::build(&provenance.processed, family)?,
        GadgetRule::Maximin => maximin::build(&provenance.processed)?,
        GadgetRule::Copeland => copeland::build(&provenance.processed)?,
        GadgetRule::Bucklin => bucklin::build(&provenance.processed)?,
        GadgetRule::RankedPairs => rankedpairs::build(&provenance.processed)?,
    };
    let mut provenance = provenance;
    provenance.notes.push("candidates the construction leaves unordered are listed by ascending index".into());
    provenance.notes.extend(notes.into_iter().map(String::from));
    Ok(GadgetInstance { rule, pw, provenance, constraints })
}

pub fn generate_pw_strict_scoring(sc: &SetCoverInstance, family: StrictFamily) -> Result<GadgetInstance> {
    generate(sc, GadgetRule::StrictScoring(family))
}

pub fn generate_pw_maximin(sc: &SetCoverInstance) -> Result<GadgetInstance> {
    generate(sc, GadgetRule::Maximin)
}

pub fn generate_pw_copeland(sc: &SetCoverInstance) -> Result<GadgetInstance> {
    generate(sc, GadgetRule::Copeland)
}

pub fn generate_pw_bucklin(sc: &SetCoverInstance) -> Result<GadgetInstance> {
    generate(sc, GadgetRule::Bucklin)
}

pub fn generate_pw_rankedpairs(sc: &SetCoverInstance) -> Result<GadgetInstance> {
    generate(sc, GadgetRule::RankedPairs)
}

type Built = (PWInstance, Vec<MarginConstraint>, Vec<&'static str>);

fn names(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}{i}"))
}

/// Candidates of `0..n` missing from `used`, ascending.
fn rest(n: usize, used: &[usize]) -> Vec<usize> {
    (0..n).filter(|x| !used.contains(x)).collect()
}

fn complement(sc: &SetCoverInstance, i: usize) -> Vec<usize> {
    rest(sc.universe_size, &sc.family[i])
}

/// The total order `eta` with the pairs selected by `removed` forgotten.
/// Fails if transitivity would bring a forgotten pair back.
fn partial_from(eta: &[usize], removed: impl Fn(usize, usize) -> bool) -> Result<PartialOrder> {
    let mut pairs = Vec::new();
    for (i, &a) in eta.iter().enumerate() {
        for &b in &eta[i + 1..] {
            if !removed(a, b) {
                pairs.push((a, b));
            }
        }
    }
    let kept = pairs.len();
    let po = PartialOrder::from_pairs(eta.len(), pairs)?;
    if po.num_pairs() != kept {
        return Err(Error::Internal("removed pairs are implied by the kept ones".into()));
    }
    Ok(po)
}

/// `D(a, b)` summed over the pairs each partial vote decides.
fn determined_margins(m: usize, partials: &[PartialOrder]) -> Vec<i64> {
    let mut d = vec![0i64; m * m];
    for p in partials {
        for (a, b) in p.strict_pairs() {
            d[a * m + b] += 1;
            d[b * m + a] -= 1;
        }
    }
    d
}

/// Complete votes that meet every constraint. Unconstrained pairs get the
/// smallest value compatible with the common parity, 0 or +1 for the lower
/// index, counted under `default`.
fn realize_constraints(
    candidates: &CandidateSet,
    partials: &[PartialOrder],
    constraints: &[MarginConstraint],
    default: Accounting,
) -> Result<Profile> {
    let m = candidates.len();
    let det = determined_margins(m, partials);
    let base = |a: usize, b: usize, acc: Accounting| match acc {
        Accounting::Final => det[a * m + b],
        Accounting::CompleteOnly => 0,
    };
    let mut residual: Vec<Option<i64>> = vec![None; m * m];
    for c in constraints {
        let r = c.value - base(c.a, c.b, c.accounting);
        for (i, v) in [(c.a * m + c.b, r), (c.b * m + c.a, -r)] {
            match residual[i] {
                Some(old) if old != v => {
                    return Err(Error::Internal(format!("conflicting constraints on ({}, {})", c.a, c.b)));
                }
                _ => residual[i] = Some(v),
            }
        }
    }
    let parity = constraints
        .first()
        .map(|c| (c.value - base(c.a, c.b, c.accounting)).rem_euclid(2))
        .unwrap_or(0);
    let mut f = vec![0i64; m * m];
    for a in 0..m {
        for b in a + 1..m {
            let r = match residual[a * m + b] {
                Some(r) => r,
                None => {
                    let bias = base(a, b, default);
                    if (-bias).rem_euclid(2) == parity { -bias } else { 1 - bias }
                }
            };
            if r.rem_euclid(2) != parity {
                return Err(Error::Internal(format!("residual margin on ({a}, {b}) has the wrong parity")));
            }
            f[a * m + b] = r;
            f[b * m + a] = -r;
        }
    }
    realize_wmg_over(candidates.clone(), &MarginTarget::new(m, f)?)
}

/// Marks exactly `k` sets: the cover first, then the lowest other indices.
fn pad_cover(t: usize, k: usize, cover: &[usize]) -> Result<Vec<bool>> {
    if cover.len() > k || k > t {
        return Err(Error::Internal("cannot pad the cover to the budget".into()));
    }
    let mut chosen = vec![false; t];
    for &i in cover {
        chosen[i] = true;
    }
    let mut count = cover.len();
    for flag in chosen.iter_mut() {
        if count == k {
            break;
        }
        if !*flag {
            *flag = true;
            count += 1;
        }
    }
    Ok(chosen)
}

fn linear(ranking: Vec<usize>) -> Result<LinearOrder> {
    LinearOrder::new(ranking)
}
