use rand::Rng;
use rayon::prelude::*;
use votekernel::oracle::{pw_search_space, verify_witness, InstanceRef};
use votekernel::{
    count_linear_extensions, solve_coalitional_manipulation, solve_possible_winner, CMInstance, PWInstance, Rule,
};

use crate::gen::{random_cm, random_partial, random_profile, rng};
use crate::naive;
use crate::Outcome;

const RULES: [Rule; 6] = [Rule::Borda, Rule::Bucklin, Rule::Maximin, Rule::Copeland, Rule::RankedPairs, Rule::Borda];

fn random_pw(seed: u64) -> PWInstance {
    let mut r = rng(seed);
    loop {
        let m = r.gen_range(2..=4);
        let rule = RULES[r.gen_range(0..RULES.len())].clone();
        let q = random_profile(&mut r, m, 4);
        let count = r.gen_range(1..=3);
        let partials: Vec<_> = (0..count)
            .map(|_| {
                let pairs = r.gen_range(0..=4);
                random_partial(&mut r, m, pairs)
            })
            .collect();
        let product: u128 = partials.iter().map(count_linear_extensions).product();
        if product > 10_000 || (rule == Rule::Bucklin && q.num_votes() + partials.len() as u64 == 0) {
            continue;
        }
        let c = r.gen_range(0..m);
        return PWInstance::new(q.candidates().clone(), partials, q, c, rule).unwrap();
    }
}

/// PW search against the permutation filter, CM monotonicity in |M|.
pub fn criterion_8() -> Outcome {
    let pw: Vec<(bool, bool, bool, bool)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let inst = random_pw(800 + i);
            let fast = solve_possible_winner(&inst, 10_000_000).unwrap();
            let slow = naive::possible_winner(
                inst.candidates.len(),
                &inst.partial_votes,
                &naive::expand(&inst.complete_votes),
                inst.distinguished,
                &inst.rule,
            );
            let witness_ok = match &fast.witness {
                Some(w) => verify_witness(InstanceRef::PossibleWinner(&inst), w).unwrap(),
                None => !fast.answer && fast.work == pw_search_space(&inst),
            };
            (fast.answer == slow, witness_ok, fast.answer, true)
        })
        .collect();
    let pw_agree = pw.iter().filter(|x| x.0).count();
    let pw_wit = pw.iter().filter(|x| x.1).count();
    let pw_yes = pw.iter().filter(|x| x.2).count();

    let rules = [Rule::Maximin, Rule::Copeland, Rule::Borda];
    let cm: Vec<(bool, usize)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(900 + i);
            let base = random_cm(&mut r, rules[i as usize % 3].clone(), 4, 1, 8);
            let verdicts: Vec<bool> = (1..=4)
                .map(|k| {
                    let inst = CMInstance { manipulators: k, ..base.clone() };
                    solve_coalitional_manipulation(&inst, 10_000_000).unwrap().answer
                })
                .collect();
            let monotone = verdicts.windows(2).all(|w| !w[0] || w[1]);
            (monotone, verdicts.iter().filter(|&&v| v).count())
        })
        .collect();
    let mono = cm.iter().filter(|x| x.0).count();
    let flips = cm.iter().filter(|x| x.1 > 0 && x.1 < 4).count();
    Outcome::new(
        pw_agree == 100 && pw_wit == 100 && mono == 100,
        format!(
            "PW: {pw_agree}/100 agree with the permutation filter ({pw_yes} YES), {pw_wit}/100 witnesses or full sweeps verified; \
             CM: {mono}/100 monotone over |M| = 1..4 ({flips} change verdict)"
        ),
    )
}
