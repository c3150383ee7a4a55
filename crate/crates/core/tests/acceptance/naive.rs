// Slow reference implementations that share no code with the library's
// search or tally paths. Votes are plain rankings, expanded by multiplicity.

use num_rational::Rational64;
use votekernel::{PartialOrder, Profile, Rule};

pub fn expand(p: &Profile) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for (v, k) in p.votes() {
        for _ in 0..k {
            out.push(v.ranking().to_vec());
        }
    }
    out
}

pub fn margins(m: usize, votes: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let mut d = vec![vec![0i64; m]; m];
    for v in votes {
        for x in 0..m {
            for y in 0..m {
                if x == y {
                    continue;
                }
                let px = v.iter().position(|&z| z == x).unwrap();
                let py = v.iter().position(|&z| z == y).unwrap();
                d[x][y] += if px < py { 1 } else { -1 };
            }
        }
    }
    d
}

pub fn scores(alpha: &[Rational64], votes: &[Vec<usize>]) -> Vec<Rational64> {
    let m = alpha.len();
    let mut s = vec![Rational64::from_integer(0); m];
    for v in votes {
        for (p, &x) in v.iter().enumerate() {
            s[x] += alpha[p];
        }
    }
    s
}

fn unique_argmax<T: PartialOrd + Copy>(s: &[T]) -> Option<usize> {
    let best = (0..s.len()).filter(|&x| (0..s.len()).all(|y| y == x || s[x] > s[y])).collect::<Vec<_>>();
    (best.len() == 1).then(|| best[0])
}

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Every ranked-pairs outcome: all orders of the pairs sorted by decreasing
/// margin (ties in every order), every orientation of zero-margin pairs.
fn ranked_pairs_possible_winners(d: &[Vec<i64>]) -> Vec<bool> {
    let m = d.len();
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            pairs.push(if d[a][b] >= 0 { (a, b) } else { (b, a) });
        }
    }
    let mut possible = vec![false; m];
    for perm in permutations(pairs.len()) {
        let seq: Vec<(usize, usize)> = perm.iter().map(|&i| pairs[i]).collect();
        if seq.windows(2).any(|w| d[w[0].0][w[0].1] < d[w[1].0][w[1].1]) {
            continue;
        }
        let zeros: Vec<usize> = (0..seq.len()).filter(|&i| d[seq[i].0][seq[i].1] == 0).collect();
        for mask in 0..(1u32 << zeros.len()) {
            let mut seq = seq.clone();
            for (bit, &i) in zeros.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    seq[i] = (seq[i].1, seq[i].0);
                }
            }
            let mut reach = vec![vec![false; m]; m];
            for (a, b) in seq {
                if reach[b][a] {
                    continue;
                }
                reach[a][b] = true;
                for x in 0..m {
                    for y in 0..m {
                        if (x == a || reach[x][a]) && (y == b || reach[b][y]) {
                            reach[x][y] = true;
                        }
                    }
                }
            }
            let top = (0..m).find(|&x| (0..m).all(|y| y == x || reach[x][y])).unwrap();
            possible[top] = true;
        }
    }
    possible
}

pub fn unique_winner(m: usize, votes: &[Vec<usize>], rule: &Rule) -> Option<usize> {
    if m == 1 {
        return Some(0);
    }
    match rule {
        Rule::Borda | Rule::Scoring(_) => {
            let sv = rule.score_vector(m).unwrap();
            unique_argmax(&scores(sv.alpha(), votes))
        }
        Rule::Bucklin => {
            let n = votes.len();
            let ls: Vec<i64> = (0..m)
                .map(|x| {
                    (1..=m)
                        .find(|&l| 2 * votes.iter().filter(|v| v[..l].contains(&x)).count() > n)
                        .unwrap_or(m) as i64
                })
                .map(|l| -l)
                .collect();
            unique_argmax(&ls)
        }
        Rule::Maximin => {
            let d = margins(m, votes);
            let s: Vec<i64> = (0..m).map(|x| (0..m).filter(|&y| y != x).map(|y| d[x][y]).min().unwrap()).collect();
            unique_argmax(&s)
        }
        Rule::Copeland => {
            let d = margins(m, votes);
            let s: Vec<i64> = (0..m).map(|x| (0..m).filter(|&y| d[x][y] > 0).count() as i64).collect();
            unique_argmax(&s)
        }
        Rule::RankedPairs => {
            let w = ranked_pairs_possible_winners(&margins(m, votes));
            let all: Vec<usize> = (0..m).filter(|&x| w[x]).collect();
            (all.len() == 1).then(|| all[0])
        }
    }
}

pub fn respects(v: &[usize], p: &PartialOrder) -> bool {
    let m = v.len();
    (0..m).all(|a| (0..m).all(|b| !p.prefers(a, b) || v.iter().position(|&z| z == a) < v.iter().position(|&z| z == b)))
}

/// Possible winner by filtering all permutations for each partial vote and
/// trying every tuple.
pub fn possible_winner(m: usize, partials: &[PartialOrder], complete: &[Vec<usize>], c: usize, rule: &Rule) -> bool {
    let perms = permutations(m);
    let options: Vec<Vec<&Vec<usize>>> =
        partials.iter().map(|p| perms.iter().filter(|v| respects(v, p)).collect()).collect();
    let mut idx = vec![0usize; partials.len()];
    loop {
        let mut votes = complete.to_vec();
        for (i, o) in options.iter().enumerate() {
            votes.push(o[idx[i]].clone());
        }
        if unique_winner(m, &votes, rule) == Some(c) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return false;
            }
            idx[i] += 1;
            if idx[i] < options[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn covers(universe: usize, family: &[Vec<usize>], chosen: &[usize], k: usize) -> bool {
    let mut hit = vec![false; universe];
    for &i in chosen {
        for &e in &family[i] {
            hit[e] = true;
        }
    }
    chosen.len() <= k && hit.iter().all(|&h| h)
}

pub fn set_cover(universe: usize, family: &[Vec<usize>], k: usize) -> bool {
    let t = family.len();
    (0u32..(1 << t)).any(|mask| {
        let chosen: Vec<usize> = (0..t).filter(|&i| mask >> i & 1 == 1).collect();
        covers(universe, family, &chosen, k)
    })
}
