// Copeland. Candidates: u_1..u_m, z, c, d, w.
//
// Vote i is T_i > z > c > d > S_i > w with the pair z > c free against
// S_i, d and w. The constraints count the complete votes alone: c must pass
// d in exactly k votes, z may pass w in at most k, and every u needs one
// vote with c above it.

use super::{complement, linear, pad_cover, partial_from, realize_constraints, Accounting, Built, MarginConstraint};
use crate::election::{CandidateSet, LinearOrder};
use crate::error::Result;
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
    fn d(&self) -> usize {
        self.m + 2
    }
    fn w(&self) -> usize {
        self.m + 3
    }

    fn eta(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v = complement(sc, i);
        v.extend([self.z(), self.c(), self.d()]);
        v.extend(&sc.family[i]);
        v.push(self.w());
        v
    }

    fn sunk(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v = complement(sc, i);
        v.push(self.d());
        v.extend(&sc.family[i]);
        v.extend([self.w(), self.z(), self.c()]);
        v
    }
}

pub(super) fn build(sc: &SetCoverInstance) -> Result<Built> {
    let l = Layout { m: sc.universe_size };
    let (m, t, k) = (l.m, sc.t() as i64, sc.k as i64);
    let names: Vec<String> = super::names("u", m).chain(["z", "c", "d", "w"].map(String::from)).collect();
    let candidates = CandidateSet::new(names)?;

    let partials = (0..sc.t())
        .map(|i| {
            let s = &sc.family[i];
            let free = |x: usize| s.contains(&x) || x == l.d() || x == l.w();
            let top = |x: usize| x == l.z() || x == l.c();
            partial_from(&l.eta(sc, i), |a, b| (top(a) && free(b)) || (top(b) && free(a)))
        })
        .collect::<Result<Vec<_>>>()?;

    let q = Accounting::CompleteOnly;
    let mut cons = vec![
        MarginConstraint::new(l.c(), l.d(), t - 2 * k + 1, q),
        MarginConstraint::new(l.z(), l.w(), t - 2 * k - 1, q),
        MarginConstraint::new(l.c(), l.z(), t + 1, q),
        MarginConstraint::new(l.c(), l.w(), -t - 1, q),
        MarginConstraint::new(l.z(), l.d(), t + 1, q),
    ];
    for u in 0..m {
        cons.push(MarginConstraint::new(l.c(), u, t - 1, q));
        cons.push(MarginConstraint::new(u, l.d(), t + 1, q));
        cons.push(MarginConstraint::new(l.z(), u, t + 1, q));
        // u beats the next floor(m/2) elements cyclically; for even m the
        // antipodal pair is won by the lower index.
        for step in 1..=m / 2 {
            let v = (u + step) % m;
            if 2 * step == m && v < u {
                continue;
            }
            cons.push(MarginConstraint::new(u, v, t + 1, q));
        }
    }
    let complete = realize_constraints(&candidates, &partials, &cons, q)?;
    let pw = PWInstance::new(candidates, partials, complete, l.c(), Rule::Copeland)?;
    Ok((pw, cons, vec!["constraints count the complete votes only", "even m: antipodal pairs go to the lower index"]))
}

pub(super) fn forward(sc: &SetCoverInstance, cover: &[usize]) -> Result<Vec<LinearOrder>> {
    let l = Layout { m: sc.universe_size };
    let chosen = pad_cover(sc.t(), sc.k, cover)?;
    (0..sc.t())
        .map(|i| linear(if chosen[i] { l.eta(sc, i) } else { l.sunk(sc, i) }))
        .collect()
}

pub(super) fn extract(sc: &SetCoverInstance, ext: &[LinearOrder]) -> Vec<usize> {
    let l = Layout { m: sc.universe_size };
    (0..sc.t()).filter(|&i| ext[i].prefers(l.c(), l.d())).collect()
}
