use std::time::Instant;

use rayon::prelude::*;
use votekernel::kernels::{kernel_equivalence_check, kernelize};
use votekernel::{majority_graph, Rule};

use crate::gen::{random_cm, rng};
use crate::Outcome;

const PER_RULE: u64 = 200;
const BUDGET: u64 = 10_000_000;

struct RuleStats {
    rule: Rule,
    total: usize,
    mismatches: Vec<u64>,
    errors: Vec<String>,
    decided: usize,
    size_violations: Vec<u64>,
    worst_ratio: f64,
    secs: f64,
}

fn run_rule(rule: Rule, salt: u64) -> RuleStats {
    let start = Instant::now();
    let results: Vec<(u64, Result<(bool, bool, Option<bool>, f64), String>)> = (0..PER_RULE)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(salt * 1_000_003 + i);
            let inst = random_cm(&mut r, rule.clone(), 4, 3, 12);
            let res = (|| {
                let out = kernelize(&inst).map_err(|e| e.to_string())?;
                let rep = kernel_equivalence_check(&inst, &out, BUDGET).map_err(|e| e.to_string())?;
                let big_m = inst.manipulators as i64;
                let m = inst.num_candidates() as i64;
                let (size_ok, ratio) = match (&out.reduced_instance, &rule) {
                    (Some(red), Rule::Maximin | Rule::Copeland) => {
                        let g = majority_graph(&red.nonmanipulators);
                        let cap = 5 * big_m + 4;
                        let votes_cap = 4 * m * m * cap;
                        let ok = g.max_abs() <= cap && (red.nonmanipulators.num_votes() as i64) <= votes_cap;
                        (ok, g.max_abs() as f64 / cap as f64)
                    }
                    (Some(red), Rule::RankedPairs) => {
                        let g = majority_graph(&red.nonmanipulators);
                        let l = m * (m - 1) / 2;
                        let cap = l * (big_m + 2) + 2;
                        let votes_cap = 4 * m * m * cap;
                        let ok = g.max_abs() <= cap && (red.nonmanipulators.num_votes() as i64) <= votes_cap;
                        (ok, g.max_abs() as f64 / cap as f64)
                    }
                    _ => (true, 0.0),
                };
                let parity_ok = out.trace.iter().all(|t| t.preserves_parity());
                Ok((rep.equivalent, size_ok && parity_ok, rep.reduced, ratio))
            })();
            (i, res)
        })
        .collect();
    let mut stats = RuleStats {
        rule,
        total: results.len(),
        mismatches: vec![],
        errors: vec![],
        decided: 0,
        size_violations: vec![],
        worst_ratio: 0.0,
        secs: 0.0,
    };
    for (i, res) in results {
        match res {
            Ok((eq, size_ok, reduced, ratio)) => {
                if !eq {
                    stats.mismatches.push(i);
                }
                if !size_ok {
                    stats.size_violations.push(i);
                }
                if reduced.is_none() {
                    stats.decided += 1;
                }
                stats.worst_ratio = stats.worst_ratio.max(ratio);
            }
            Err(e) => stats.errors.push(format!("#{i}: {e}")),
        }
    }
    stats.secs = start.elapsed().as_secs_f64();
    stats
}

/// Returns the outcomes for kernel equivalence and kernel size bounds.
pub fn criteria_3_and_4() -> (Outcome, Outcome) {
    let all: Vec<RuleStats> = [Rule::Borda, Rule::Maximin, Rule::Copeland, Rule::RankedPairs]
        .into_iter()
        .enumerate()
        .map(|(i, rule)| run_rule(rule, 30 + i as u64))
        .collect();
    let eq_ok = all.iter().all(|s| s.mismatches.is_empty() && s.errors.is_empty() && s.secs < 600.0);
    let eq_detail: Vec<String> = all
        .iter()
        .map(|s| {
            let mut d = format!(
                "{}: {}/{} agree ({} decided early, {:.1}s)",
                s.rule,
                s.total - s.mismatches.len() - s.errors.len(),
                s.total,
                s.decided,
                s.secs
            );
            if !s.mismatches.is_empty() {
                d.push_str(&format!(" mismatches {:?}", &s.mismatches[..s.mismatches.len().min(8)]));
            }
            if !s.errors.is_empty() {
                d.push_str(&format!(" errors {:?}", &s.errors[..s.errors.len().min(3)]));
            }
            d
        })
        .collect();
    let size_ok = all.iter().all(|s| s.size_violations.is_empty() && s.errors.is_empty());
    let size_detail: Vec<String> = all
        .iter()
        .filter(|s| s.rule != Rule::Borda)
        .map(|s| {
            format!(
                "{}: {} violations, max margin at {:.0}% of cap",
                s.rule,
                s.size_violations.len(),
                100.0 * s.worst_ratio
            )
        })
        .collect();
    (Outcome::new(eq_ok, eq_detail.join("; ")), Outcome::new(size_ok, size_detail.join("; ")))
}
