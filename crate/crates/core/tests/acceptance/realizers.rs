use std::time::Instant;

use num_rational::Rational64;
use rand::Rng;
use votekernel::{realize_scores, realize_wmg, CandidateSet, MarginTarget, ScoreTarget, ScoreVector};

use crate::gen::{random_wmg, rng};
use crate::naive;
use crate::Outcome;

/// Margin targets round-trip exactly with at most sum|f| + 2 votes.
pub fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut failures = Vec::new();
    let mut max_slack = i64::MIN;
    for i in 0..300 {
        let m = r.gen_range(2..=6);
        let g = random_wmg(&mut r, m, 8, i % 2 == 1);
        let p = realize_wmg(&MarginTarget::from_wmg(&g).unwrap()).unwrap();
        let d = naive::margins(m, &naive::expand(&p));
        let exact = (0..m).all(|a| (0..m).all(|b| d[a][b] == g.get(a, b)));
        let bound = g.sum_abs_upper() + 2;
        max_slack = max_slack.max(p.num_votes() as i64 - bound);
        if !exact || p.num_votes() as i64 > bound {
            failures.push(i);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        failures.is_empty() && secs < 5.0,
        format!("300 targets, {} failures, worst votes - bound = {max_slack}, {secs:.2}s (limit 5s)", failures.len()),
    )
}

/// Score targets meet lambda + X exactly with decoys below lambda.
pub fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut failures = 0;
    for i in 0..100 {
        let m = r.gen_range(1..=5);
        let nd = r.gen_range(1..=2);
        let n = m + nd;
        let budget: i64 = r.gen_range(0..=10);
        let mut offsets = vec![0i64; m];
        let mut left = budget;
        for o in offsets.iter_mut() {
            let take = r.gen_range(0..=left);
            *o = if r.gen_bool(0.5) { take } else { -take };
            left -= take;
        }
        let sv = if i % 2 == 0 { ScoreVector::borda(n) } else { ScoreVector::quadratic(n) };
        let target = ScoreTarget {
            candidates: CandidateSet::alphabetic(n).unwrap(),
            main: (0..m).collect(),
            offsets: offsets.clone(),
            decoys: (m..n).collect(),
            sv: sv.clone(),
        };
        let ok = match realize_scores(&target) {
            Ok((p, lambda)) => {
                let s = naive::scores(sv.alpha(), &naive::expand(&p));
                (0..m).all(|x| s[x] == lambda + Rational64::from_integer(offsets[x])) && (m..n).all(|d| s[d] < lambda)
            }
            Err(_) => false,
        };
        if !ok {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        failures == 0 && secs < 10.0,
        format!("100 targets (Borda and quadratic), {failures} failures, {secs:.2}s (limit 10s)"),
    )
}
