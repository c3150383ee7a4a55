use rand::seq::SliceRandom;
use rayon::prelude::*;
use votekernel::gadgets::{Accounting, GadgetInstance};
use votekernel::oracle::{verify_witness, InstanceRef};
use votekernel::{generate, solve_possible_winner, Error, GadgetRule, SetCoverInstance, Witness};

use crate::gen::rng;
use crate::naive;
use crate::Outcome;

const BUDGET: u64 = 10_000_000;

/// Every instance with universe size 2 or 3, at most three nonempty sets
/// (as a multiset) and budget 0..=2.
pub fn corpus() -> Vec<SetCoverInstance> {
    let mut out = Vec::new();
    for m in 2..=3usize {
        let subsets: Vec<Vec<usize>> =
            (1u32..1 << m).map(|mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect()).collect();
        let mut families: Vec<Vec<usize>> = vec![vec![]];
        for a in 0..subsets.len() {
            families.push(vec![a]);
            for b in a..subsets.len() {
                families.push(vec![a, b]);
                for c in b..subsets.len() {
                    families.push(vec![a, b, c]);
                }
            }
        }
        for f in &families {
            for k in 0..=2 {
                let family = f.iter().map(|&i| subsets[i].clone()).collect();
                out.push(SetCoverInstance::new(m, family, k).unwrap());
            }
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    done: usize,
    skipped: usize,
    agree: usize,
    yes: usize,
    forward_ok: usize,
    pw_witnesses: usize,
    extract_ok: usize,
    failures: Vec<String>,
}

enum Run {
    Skipped,
    Done { agree: bool, yes: bool, forward_ok: Option<bool>, extract_ok: Option<bool> },
}

fn run_one(sc: &SetCoverInstance, rule: GadgetRule) -> Run {
    let gi = generate(sc, rule).unwrap();
    let pw = match solve_possible_winner(&gi.pw, BUDGET) {
        Ok(v) => v,
        Err(Error::BudgetExceeded { .. }) => return Run::Skipped,
        Err(e) => panic!("{rule} {sc:?}: {e}"),
    };
    let expected = naive::set_cover(sc.universe_size, &sc.family, sc.k);
    let forward_ok = expected.then(|| forward_ok(sc, &gi));
    let extract_ok = match &pw.witness {
        Some(Witness::Extensions(ext)) => Some(match gi.extract_cover(ext) {
            Ok(cover) => {
                naive::covers(sc.universe_size, &sc.family, &cover, sc.k)
                    && verify_witness(InstanceRef::SetCover(sc), &Witness::Cover(cover)).unwrap()
            }
            Err(_) => false,
        }),
        _ => None,
    };
    Run::Done { agree: pw.answer == expected, yes: expected, forward_ok, extract_ok }
}

fn forward_ok(sc: &SetCoverInstance, gi: &GadgetInstance) -> bool {
    let t = sc.family.len();
    let cover = (0u32..1 << t)
        .map(|mask| (0..t).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .find(|c| naive::covers(sc.universe_size, &sc.family, c, sc.k))
        .unwrap();
    match gi.forward_witness(&cover) {
        Ok(ext) => verify_witness(InstanceRef::PossibleWinner(&gi.pw), &Witness::Extensions(ext)).unwrap_or(false),
        Err(_) => false,
    }
}

fn tally(rule: GadgetRule, corpus: &[SetCoverInstance]) -> Tally {
    let runs: Vec<(usize, Run)> = corpus.par_iter().enumerate().map(|(i, sc)| (i, run_one(sc, rule))).collect();
    let mut t = Tally::default();
    for (i, run) in runs {
        match run {
            Run::Skipped => t.skipped += 1,
            Run::Done { agree, yes, forward_ok, extract_ok } => {
                t.done += 1;
                t.agree += agree as usize;
                t.yes += yes as usize;
                t.forward_ok += (forward_ok == Some(true)) as usize;
                if let Some(ok) = extract_ok {
                    t.pw_witnesses += 1;
                    t.extract_ok += ok as usize;
                }
                if !agree || forward_ok == Some(false) || extract_ok == Some(false) {
                    t.failures.push(format!("{rule}#{i}"));
                }
            }
        }
    }
    t
}

/// Exhaustive reduction equivalence and the witness checks in both directions.
pub fn criteria_5_and_6() -> (Outcome, Outcome) {
    let corpus = corpus();
    let (mut pass5, mut pass6) = (true, true);
    let (mut d5, mut d6) = (Vec::new(), Vec::new());
    for rule in GadgetRule::ALL {
        let t = tally(rule, &corpus);
        if t.skipped > 0 {
            eprintln!("{rule}: {} instances over the {BUDGET}-leaf budget were skipped", t.skipped);
        }
        pass5 &= t.agree == t.done && t.done >= 50;
        pass6 &= t.forward_ok == t.yes && t.extract_ok == t.pw_witnesses;
        d5.push(format!("{rule} {}/{} agree ({} over budget)", t.agree, t.done, t.skipped));
        d6.push(format!("{rule} forward {}/{} extract {}/{}", t.forward_ok, t.yes, t.extract_ok, t.pw_witnesses));
        if !t.failures.is_empty() {
            eprintln!("{rule} failures: {}", t.failures.join(" "));
        }
    }
    (Outcome::new(pass5, d5.join(", ")), Outcome::new(pass6, d6.join(", ")))
}

/// Every constraint of 20 sampled maximin, Copeland and ranked-pairs
/// instances, recomputed from the votes.
pub fn criterion_7() -> Outcome {
    let mut corpus = corpus();
    corpus.retain(|sc| !sc.family.is_empty());
    let mut r = rng(700);
    let rules = [GadgetRule::Maximin, GadgetRule::Copeland, GadgetRule::RankedPairs];
    let (mut checked, mut exact, mut sampled) = (0, 0, 0);
    let mut bad = Vec::new();
    for i in 0..20 {
        let rule = rules[i % 3];
        // Trivial inputs collapse to a canonical instance; draw until the
        // gadget itself is exercised on the original sets.
        let (sc, gi) = loop {
            let sc = corpus.choose(&mut r).unwrap().clone();
            let gi = generate(&sc, rule).unwrap();
            if gi.provenance.canonical.is_none() {
                break (sc, gi);
            }
        };
        sampled += 1;
        let m = gi.pw.candidates.len();
        let q = naive::margins(m, &naive::expand(&gi.pw.complete_votes));
        for c in &gi.constraints {
            let decided: i64 = match c.accounting {
                Accounting::CompleteOnly => 0,
                Accounting::Final => gi
                    .pw
                    .partial_votes
                    .iter()
                    .map(|p| if p.prefers(c.a, c.b) { 1 } else if p.prefers(c.b, c.a) { -1 } else { 0 })
                    .sum(),
            };
            checked += 1;
            if q[c.a][c.b] + decided == c.value {
                exact += 1;
            } else {
                bad.push(format!("{rule} {sc:?} D({},{})", c.a, c.b));
            }
        }
    }
    if !bad.is_empty() {
        eprintln!("margin mismatches: {}", bad.join("; "));
    }
    Outcome::new(
        exact == checked && sampled == 20 && checked > 0,
        format!("{sampled} instances, {exact}/{checked} constraints exact"),
    )
}
