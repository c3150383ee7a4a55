//! Polynomial kernels for coalitional manipulation under Borda, maximin,
//! Copeland and ranked pairs.
//!
//! Margin-based kernels rewrite the nonmanipulators' weighted majority graph
//! and then realize it with [`realize_wmg_over`]. Every rewrite is logged in
//! the outcome's trace.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::election::{majority_graph, CandidateSet, WeightedMajorityGraph};
use crate::error::{Error, Result};
use crate::oracle::{solve_coalitional_manipulation, CMInstance, DEFAULT_BUDGET};
use crate::realize::{realize_scores, realize_wmg_over, MarginTarget, ScoreTarget};
use crate::rules::{scoring_winners, Rule, ScoreVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    DecidedYes,
    DecidedNo,
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub rule: String,
    /// Ordered pair whose margin changed, if any.
    pub edge: Option<(usize, usize)>,
    pub candidate: Option<usize>,
    pub old: i64,
    pub new: i64,
    pub note: Option<String>,
}

impl TraceRecord {
    fn edge(rule: &str, a: usize, b: usize, old: i64, new: i64) -> Self {
        TraceRecord { rule: rule.into(), edge: Some((a, b)), candidate: None, old, new, note: None }
    }

    fn note(rule: &str, old: i64, new: i64, note: impl Into<String>) -> Self {
        TraceRecord { rule: rule.into(), edge: None, candidate: None, old, new, note: Some(note.into()) }
    }

    /// Whether an edge rewrite kept the margin's parity.
    pub fn preserves_parity(&self) -> bool {
        self.edge.is_none() || (self.old - self.new).rem_euclid(2) == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelOutcome {
    pub kind: KernelKind,
    pub reduced_instance: Option<CMInstance>,
    pub trace: Vec<TraceRecord>,
}

impl KernelOutcome {
    fn decided(yes: bool, trace: Vec<TraceRecord>) -> Self {
        KernelOutcome {
            kind: if yes { KernelKind::DecidedYes } else { KernelKind::DecidedNo },
            reduced_instance: None,
            trace,
        }
    }

    fn reduced(inst: CMInstance, trace: Vec<TraceRecord>) -> Self {
        KernelOutcome { kind: KernelKind::Reduced, reduced_instance: Some(inst), trace }
    }
}

pub fn kernelize(inst: &CMInstance) -> Result<KernelOutcome> {
    match inst.rule {
        Rule::Borda => kernelize_cm_borda(inst),
        Rule::Maximin => kernelize_cm_maximin(inst),
        Rule::Copeland => kernelize_cm_copeland(inst),
        Rule::RankedPairs => kernelize_cm_rankedpairs(inst),
        ref other => Err(Error::InvalidArgument(format!("no kernel for rule `{other}`"))),
    }
}

fn require_rule(inst: &CMInstance, rule: Rule) -> Result<()> {
    inst.validate()?;
    if inst.rule != rule {
        return Err(Error::InvalidArgument(format!("expected rule `{rule}`, found `{}`", inst.rule)));
    }
    Ok(())
}

fn fresh_name(candidates: &CandidateSet, base: &str) -> String {
    std::iter::once(base.to_string())
        .chain((0..).map(|i| format!("{base}{i}")))
        .find(|n| candidates.index_of(n).is_none())
        .expect("unbounded name supply")
}

/// Borda: adds one decoy and rebuilds the nonmanipulators so that every
/// score difference to `c`'s final score is kept, with losers lifted to
/// `s_NM(c)` and `c` lowered by `|M|` to absorb its extra top-position points.
pub fn kernelize_cm_borda(inst: &CMInstance) -> Result<KernelOutcome> {
    require_rule(inst, Rule::Borda)?;
    let m = inst.num_candidates();
    let c = inst.distinguished;
    let big_m = inst.manipulators as i64;
    let scores = scoring_winners(&inst.nonmanipulators, &ScoreVector::borda(m))?.scores;
    let s_nm: Vec<i64> = scores.iter().map(|s| s.to_integer()).collect();
    let s_c = s_nm[c] + big_m * (m as i64 - 1);
    let mut trace = Vec::new();

    if let Some(x) = (0..m).find(|&x| x != c && s_nm[x] >= s_c) {
        trace.push(TraceRecord {
            rule: "borda.hopeless".into(),
            edge: None,
            candidate: Some(x),
            old: s_nm[x],
            new: s_c,
            note: Some("a rival already matches c's best final score".into()),
        });
        return Ok(KernelOutcome::decided(false, trace));
    }

    let mut star = vec![0i64; m];
    for x in 0..m {
        star[x] = if x == c { s_nm[c] - big_m } else { s_nm[x].max(s_nm[c]) };
        if star[x] != s_nm[x] {
            trace.push(TraceRecord {
                rule: "borda.adjust".into(),
                edge: None,
                candidate: Some(x),
                old: s_nm[x],
                new: star[x],
                note: None,
            });
        }
    }

    let mut names = inst.candidates.names().to_vec();
    names.push(fresh_name(&inst.candidates, "d"));
    let candidates = CandidateSet::new(names)?;
    let shift = m as i64 * big_m + 1;
    let target = ScoreTarget {
        candidates: candidates.clone(),
        main: (0..m).collect(),
        offsets: (0..m).map(|x| star[x] - s_nm[c] + shift).collect(),
        decoys: vec![m],
        sv: ScoreVector::borda(m + 1),
    };
    let (profile, lambda) =
        realize_scores(&target).map_err(|e| Error::Internal(format!("borda kernel: {e}")))?;
    let k = lambda + Rational64::from_integer(shift);
    trace.push(TraceRecord::note(
        "borda.realize",
        m as i64,
        m as i64 + 1,
        format!("added decoy {m}; K = {k}; {} votes", profile.num_votes()),
    ));
    let reduced = CMInstance::new(candidates, profile, inst.manipulators, c, Rule::Borda)?;
    Ok(KernelOutcome::reduced(reduced, trace))
}

fn realize_reduced(inst: &CMInstance, wmg: &WeightedMajorityGraph) -> Result<CMInstance> {
    let target = MarginTarget::from_wmg(wmg).map_err(|e| Error::Internal(e.to_string()))?;
    let profile = realize_wmg_over(inst.candidates.clone(), &target)?;
    CMInstance::new(inst.candidates.clone(), profile, inst.manipulators, inst.distinguished, inst.rule.clone())
}

fn with_parity(a: i64, b: i64, like: i64) -> i64 {
    if (a - like).rem_euclid(2) == 0 {
        a
    } else {
        b
    }
}

fn maximin_s(wmg: &WeightedMajorityGraph, c: usize) -> i64 {
    let m = wmg.num_candidates();
    (0..m).filter(|&x| x != c).map(|x| wmg.get(c, x)).min().expect("m >= 2")
}

/// Maximin. `s` is `c`'s maximin score among nonmanipulators; with every
/// manipulator ranking `c` first, `c` ends at exactly `s + |M|`.
///
/// A strictly positive `s + |M|` decides YES. At `s + |M| = 0` a rival can
/// tie `c` through the shared edge, so the instance is reduced instead.
pub fn kernelize_cm_maximin(inst: &CMInstance) -> Result<KernelOutcome> {
    require_rule(inst, Rule::Maximin)?;
    let m = inst.num_candidates();
    let c = inst.distinguished;
    let big_m = inst.manipulators as i64;
    if m == 1 {
        return Ok(KernelOutcome::decided(true, vec![TraceRecord::note("maximin.trivial", 1, 1, "single candidate")]));
    }
    if big_m == 1 {
        let v = solve_coalitional_manipulation(inst, DEFAULT_BUDGET)?;
        let rec = TraceRecord::note("maximin.single-manipulator", 1, v.answer as i64, "decided by exhaustive search");
        return Ok(KernelOutcome::decided(v.answer, vec![rec]));
    }

    let mut wmg = majority_graph(&inst.nonmanipulators);
    let s = maximin_s(&wmg, c);
    let mut trace = Vec::new();
    if s + big_m > 0 {
        trace.push(TraceRecord::note("maximin.condorcet", s, s + big_m, "c beats everyone"));
        return Ok(KernelOutcome::decided(true, trace));
    }

    // Cap weak negative edges and lift very negative ones, to a fixpoint.
    loop {
        let mut changed = false;
        for a in 0..m {
            for b in 0..m {
                let d = wmg.get(a, b);
                if a == b || d >= 0 {
                    continue;
                }
                let new = if d > 2 * big_m + s {
                    with_parity(2 * big_m + s + 1, 2 * big_m + s + 2, d)
                } else if d < s {
                    with_parity(s - 1, s - 2, d)
                } else {
                    continue;
                };
                if new != d {
                    let rule = if d > 2 * big_m + s { "maximin.cap-weak" } else { "maximin.lift-strong" };
                    trace.push(TraceRecord::edge(rule, a, b, d, new));
                    wmg.set(a, b, new);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if maximin_s(&wmg, c) != s {
        return Err(Error::Internal("maximin score of c moved during capping".into()));
    }

    if s < -4 * big_m {
        let raw = s + 5 * big_m;
        let offset = if raw % 2 == 0 { raw } else { raw - raw.signum() };
        if offset != raw {
            trace.push(TraceRecord::note("maximin.shift-parity", raw, offset, "offset rounded to even"));
        }
        let lo = s - 2;
        let hi = 2 * big_m + s + 2;
        if offset != 0 {
            for a in 0..m {
                for b in 0..m {
                    let d = wmg.get(a, b);
                    if a != b && (lo..=hi).contains(&d) {
                        trace.push(TraceRecord::edge("maximin.shift", a, b, d, d - offset));
                        wmg.set(a, b, d - offset);
                    }
                }
            }
        }
        let s2 = maximin_s(&wmg, c);
        if s2 != s - offset {
            return Err(Error::Internal("maximin shift did not move s uniformly".into()));
        }
        trace.push(TraceRecord::note("maximin.shift-check", s, s2, "s shifted with its window"));
    }
    wmg.validate().map_err(|e| Error::Internal(e.to_string()))?;
    let reduced = realize_reduced(inst, &wmg)?;
    Ok(KernelOutcome::reduced(reduced, trace))
}

/// Copeland: margins above `|M|` cannot be overturned, so they are capped.
pub fn kernelize_cm_copeland(inst: &CMInstance) -> Result<KernelOutcome> {
    require_rule(inst, Rule::Copeland)?;
    let m = inst.num_candidates();
    let big_m = inst.manipulators as i64;
    let mut wmg = majority_graph(&inst.nonmanipulators);
    let mut trace = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let d = wmg.get(a, b);
            if a != b && d > big_m {
                let new = with_parity(big_m + 1, big_m + 2, d);
                if new != d {
                    trace.push(TraceRecord::edge("copeland.cap", a, b, d, new));
                    wmg.set(a, b, new);
                }
            }
        }
    }
    let reduced = realize_reduced(inst, &wmg)?;
    Ok(KernelOutcome::reduced(reduced, trace))
}

/// Ranked pairs: sorts the non-negative margins and closes every gap wider
/// than `2|M| + 2` to `2|M| + 1` or `2|M| + 2` by shifting the whole suffix
/// down by an even amount. The gap from zero to a positive smallest margin
/// only guards signs and is closed to `|M| + 1` or `|M| + 2`.
///
/// Manipulators move two margins apart by at most `2|M|`, so a gap above
/// `2|M|` can never be overturned and every comparison between final margins
/// (and every sign) is the same before and after. A cap of `|M| + 1` between
/// margins is not enough: margins 14, 14, 6 on a 3-cycle with three
/// manipulators compress to 8, 8, 4 and the manipulators' best outcome changes.
pub fn kernelize_cm_rankedpairs(inst: &CMInstance) -> Result<KernelOutcome> {
    require_rule(inst, Rule::RankedPairs)?;
    let m = inst.num_candidates();
    let big_m = inst.manipulators as i64;
    let mut wmg = majority_graph(&inst.nonmanipulators);

    let mut edges: Vec<(i64, usize, usize)> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let d = wmg.get(a, b);
            if d >= 0 {
                edges.push((d, a, b));
            } else {
                edges.push((-d, b, a));
            }
        }
    }
    edges.sort();
    let mut trace = Vec::new();
    let mut prev = 0i64;
    let mut offset = 0i64;
    for i in 0..edges.len() {
        let x = edges[i].0 - offset;
        let gap = x - prev;
        // Below the smallest margin there is only the sign to protect.
        let reach = if i == 0 { big_m } else { 2 * big_m };
        if gap > reach + 2 {
            let target_gap = with_parity(reach + 1, reach + 2, gap);
            let extra = gap - target_gap;
            let (_, a, b) = edges[i];
            trace.push(TraceRecord {
                rule: "rankedpairs.compress".into(),
                edge: Some((a, b)),
                candidate: None,
                old: x,
                new: x - extra,
                note: Some(format!("shift of {extra} applied to this and every larger margin")),
            });
            offset += extra;
        }
        prev = edges[i].0 - offset;
        edges[i].0 = prev;
    }
    for &(d, a, b) in &edges {
        wmg.set(a, b, d);
    }
    let reduced = realize_reduced(inst, &wmg)?;
    Ok(KernelOutcome::reduced(reduced, trace))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub kind: KernelKind,
    pub original: bool,
    pub reduced: Option<bool>,
    pub equivalent: bool,
}

/// Compares the kernel's verdict with exhaustive search on the original.
pub fn kernel_equivalence_check(original: &CMInstance, outcome: &KernelOutcome, budget: u64) -> Result<EquivalenceReport> {
    let orig = solve_coalitional_manipulation(original, budget)?.answer;
    let (reduced, equivalent) = match outcome.kind {
        KernelKind::DecidedYes => (None, orig),
        KernelKind::DecidedNo => (None, !orig),
        KernelKind::Reduced => {
            let inst = outcome
                .reduced_instance
                .as_ref()
                .ok_or_else(|| Error::Internal("reduced outcome without instance".into()))?;
            let r = solve_coalitional_manipulation(inst, budget)?.answer;
            (Some(r), r == orig)
        }
    };
    Ok(EquivalenceReport { kind: outcome.kind, original: orig, reduced, equivalent })
}
