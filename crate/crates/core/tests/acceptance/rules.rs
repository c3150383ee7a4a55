use num_rational::Rational64;
use rand::Rng;
use votekernel::{winners, LinearOrder, Rule, ScoreVector};

use crate::gen::{random_order, random_profile, rng};
use crate::naive;
use crate::Outcome;

/// Condorcet winners win under the margin rules; scoring argmax survives
/// positive affine rescaling.
pub fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut condorcet_ok = 0;
    for _ in 0..100 {
        let m = r.gen_range(2..=6);
        let mut p = random_profile(&mut r, m, 9);
        let x = r.gen_range(0..m);
        // Enough votes with x on top to beat everyone pairwise.
        let mut top = random_order(&mut r, m).ranking().to_vec();
        top.retain(|&y| y != x);
        top.insert(0, x);
        p.add(LinearOrder::new(top).unwrap(), p.num_votes() + 1).unwrap();
        let d = naive::margins(m, &naive::expand(&p));
        assert!((0..m).all(|y| y == x || d[x][y] > 0));
        let all = [Rule::Maximin, Rule::Copeland, Rule::RankedPairs]
            .iter()
            .all(|rule| winners(&p, rule).unwrap().unique_winner == Some(x));
        if all {
            condorcet_ok += 1;
        }
    }

    let mut affine_ok = 0;
    for _ in 0..100 {
        let m = r.gen_range(2..=6);
        let p = random_profile(&mut r, m, 10);
        let mut raw: Vec<i64> = (0..m).map(|_| r.gen_range(0..=12)).collect();
        raw.sort_unstable_by(|a, b| b.cmp(a));
        let alpha: Vec<Rational64> = raw.iter().map(|&a| Rational64::from_integer(a)).collect();
        let lambda = Rational64::new(r.gen_range(1..=9), r.gen_range(1..=5));
        let mu = Rational64::new(r.gen_range(-20..=20), r.gen_range(1..=3));
        let scaled: Vec<Rational64> = alpha.iter().map(|&a| lambda * a + mu).collect();
        let a = winners(&p, &Rule::Scoring(ScoreVector::new(alpha).unwrap())).unwrap().cowinners;
        let b = winners(&p, &Rule::Scoring(ScoreVector::new(scaled).unwrap())).unwrap().cowinners;
        if a == b {
            affine_ok += 1;
        }
    }
    Outcome::new(
        condorcet_ok == 100 && affine_ok == 100,
        format!("Condorcet winner unique under maximin, Copeland, ranked pairs: {condorcet_ok}/100; affine argmax invariance: {affine_ok}/100"),
    )
}
