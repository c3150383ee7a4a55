// Seeded random instance generators.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use votekernel::{CandidateSet, CMInstance, LinearOrder, PartialOrder, Profile, Rule, WeightedMajorityGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_order(r: &mut ChaCha8Rng, m: usize) -> LinearOrder {
    let mut v: Vec<usize> = (0..m).collect();
    v.shuffle(r);
    LinearOrder::new(v).unwrap()
}

/// Skew-symmetric matrix with entries in `[-bound, bound]` of the given parity.
pub fn random_wmg(r: &mut ChaCha8Rng, m: usize, bound: i64, odd: bool) -> WeightedMajorityGraph {
    let mut g = WeightedMajorityGraph::zero(m);
    for a in 0..m {
        for b in a + 1..m {
            let v = loop {
                let v = r.gen_range(-bound..=bound);
                if (v.rem_euclid(2) == 1) == odd {
                    break v;
                }
            };
            g.set(a, b, v);
        }
    }
    g
}

/// Up to `max_votes` votes drawn from a small pool so margins can grow large.
pub fn random_profile(r: &mut ChaCha8Rng, m: usize, max_votes: u64) -> Profile {
    let cands = CandidateSet::alphabetic(m).unwrap();
    let n = r.gen_range(0..=max_votes);
    let pool: Vec<LinearOrder> = (0..r.gen_range(1..=3)).map(|_| random_order(r, m)).collect();
    let mut p = Profile::new(cands);
    for _ in 0..n {
        let v = if r.gen_bool(0.8) { pool.choose(r).unwrap().clone() } else { random_order(r, m) };
        p.add(v, 1).unwrap();
    }
    p
}

pub fn random_cm(r: &mut ChaCha8Rng, rule: Rule, max_m: usize, max_manip: u64, max_votes: u64) -> CMInstance {
    let m = r.gen_range(2..=max_m);
    let p = random_profile(r, m, max_votes);
    let big_m = r.gen_range(1..=max_manip);
    let c = r.gen_range(0..m);
    CMInstance::new(p.candidates().clone(), p, big_m, c, rule).unwrap()
}

pub fn random_partial(r: &mut ChaCha8Rng, m: usize, pairs: usize) -> PartialOrder {
    // Random pairs consistent with a hidden order are always acyclic.
    let hidden = random_order(r, m);
    let pos = hidden.positions();
    let mut list = Vec::new();
    for _ in 0..pairs {
        let a = r.gen_range(0..m);
        let b = r.gen_range(0..m);
        if a != b {
            list.push(if pos[a] < pos[b] { (a, b) } else { (b, a) });
        }
    }
    PartialOrder::from_pairs(m, list).unwrap()
}
