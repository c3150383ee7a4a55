// Bucklin. Candidates: u_1..u_m, z, c, a, w_1..w_2m, D1 (m), D2 (2m), D3 (m).
//
// Vote i is T_i > S_i > w > w' > z > c > D3 > rest with S_i free against
// w, w', z, c and D3. With 2t - 1 voters the majority is t. The complete
// votes give c (t - k) appearances in the top m + 2 and z (t - k - 1), and
// z rides along whenever c enters the top m + 2 of a partial vote.
//
// Vote i uses its own pair w_{2r}, w_{2r+1} with r = i mod m, so no w
// reaches t appearances.

use super::{complement, linear, pad_cover, partial_from, rest, Built};
use crate::election::{CandidateSet, LinearOrder, Profile};
use crate::error::{Error, Result};
use crate::oracle::{PWInstance, SetCoverInstance};
use crate::rules::Rule;

struct Layout {
    m: usize,
}

impl Layout {
    fn z(&self) -> usize {
        self.m
    }
    fn c(&self) -> usize {
        self.m + 1
    }
    fn a(&self) -> usize {
        self.m + 2
    }
    fn w(&self, j: usize) -> usize {
        self.m + 3 + j
    }
    fn d1(&self) -> std::ops::Range<usize> {
        3 * self.m + 3..4 * self.m + 3
    }
    fn d2(&self) -> std::ops::Range<usize> {
        4 * self.m + 3..6 * self.m + 3
    }
    fn d3(&self) -> std::ops::Range<usize> {
        6 * self.m + 3..7 * self.m + 3
    }
    fn n(&self) -> usize {
        7 * self.m + 3
    }

    /// The block that S_i may interleave with.
    fn chain(&self, i: usize) -> Vec<usize> {
        let r = i % self.m;
        let mut v = vec![self.w(2 * r), self.w(2 * r + 1), self.z(), self.c()];
        v.extend(self.d3());
        v
    }

    fn finish(&self, mut v: Vec<usize>) -> Vec<usize> {
        let tail = rest(self.n(), &v);
        v.extend(tail);
        v
    }

    fn eta(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v = complement(sc, i);
        v.extend(&sc.family[i]);
        v.extend(self.chain(i));
        self.finish(v)
    }

    fn lifted(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v = complement(sc, i);
        v.extend(self.chain(i));
        v.extend(&sc.family[i]);
        self.finish(v)
    }
}

pub(super) fn build(sc: &SetCoverInstance) -> Result<Built> {
    let l = Layout { m: sc.universe_size };
    let (m, t, k) = (l.m, sc.t(), sc.k);
    if k == 0 || t <= k + 1 || m < 2 || sc.family.iter().any(|s| s.len() < 2) {
        return Err(Error::Internal("Bucklin gadget needs a preprocessed instance".into()));
    }
    let names: Vec<String> = super::names("u", m)
        .chain(["z", "c", "a"].map(String::from))
        .chain(super::names("w", 2 * m))
        .chain(super::names("d1_", m))
        .chain(super::names("d2_", 2 * m))
        .chain(super::names("d3_", m))
        .collect();
    let candidates = CandidateSet::new(names)?;

    let partials = (0..t)
        .map(|i| {
            let s = &sc.family[i];
            let chain = l.chain(i);
            partial_from(&l.eta(sc, i), |a, b| {
                (s.contains(&a) && chain.contains(&b)) || (s.contains(&b) && chain.contains(&a))
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let d1: Vec<usize> = l.d1().collect();
    let votes = [
        ([d1.clone(), vec![l.z(), l.c()]].concat(), t - k - 1),
        ([d1, vec![l.c(), l.a(), l.z()]].concat(), 1),
        (l.d2().collect(), k - 1),
    ];
    let votes = votes
        .into_iter()
        .filter(|(_, n)| *n > 0)
        .map(|(head, n)| Ok((linear(l.finish(head))?, n as u64)))
        .collect::<Result<Vec<_>>>()?;
    let complete = Profile::from_votes(candidates.clone(), votes)?;
    let pw = PWInstance::new(candidates, partials, complete, l.c(), Rule::Bucklin)?;
    Ok((pw, Vec::new(), vec!["|D3| = m", "vote i uses w_{2r+1}, w_{2r+2} with r = i mod m"]))
}

pub(super) fn forward(sc: &SetCoverInstance, cover: &[usize]) -> Result<Vec<LinearOrder>> {
    let l = Layout { m: sc.universe_size };
    let chosen = pad_cover(sc.t(), sc.k, cover)?;
    (0..sc.t())
        .map(|i| linear(if chosen[i] { l.lifted(sc, i) } else { l.eta(sc, i) }))
        .collect()
}

/// Votes that place c within the top m + 2.
pub(super) fn extract(sc: &SetCoverInstance, ext: &[LinearOrder]) -> Vec<usize> {
    let l = Layout { m: sc.universe_size };
    (0..sc.t()).filter(|&i| ext[i].positions()[l.c()] < l.m + 2).collect()
}
