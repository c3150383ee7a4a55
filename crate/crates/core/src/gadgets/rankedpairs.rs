// Ranked pairs. Candidates: u_1..u_m, a, b, c, w.
//
// Vote i is T_i > S_i > b > a > c > w with the pair a > c free against S_i
// and b. Lifting a > c above b in more than k votes lets a > c lock before
// c > w; any element never passed by c ties its margin over c with c > w.
// The margin of each u over c counts the complete votes only.

use super::{complement, linear, partial_from, realize_constraints, Accounting, Built, MarginConstraint};
use crate::election::{CandidateSet, LinearOrder};
use crate::error::Result;
use crate::oracle::{PWInstance, SetCoverInstance};
use crate::rules::Rule;

struct Layout {
    m: usize,
}

impl Layout {
    fn a(&self) -> usize {
        self.m
    }
    fn b(&self) -> usize {
        self.m + 1
    }
    fn c(&self) -> usize {
        self.m + 2
    }
    fn w(&self) -> usize {
        self.m + 3
    }

    fn eta(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v = complement(sc, i);
        v.extend(&sc.family[i]);
        v.extend([self.b(), self.a(), self.c(), self.w()]);
        v
    }

    fn lifted(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v = complement(sc, i);
        v.extend([self.a(), self.c()]);
        v.extend(&sc.family[i]);
        v.extend([self.b(), self.w()]);
        v
    }
}

pub(super) fn build(sc: &SetCoverInstance) -> Result<Built> {
    let l = Layout { m: sc.universe_size };
    let (m, t, k) = (l.m, sc.t() as i64, sc.k as i64);
    let names: Vec<String> = super::names("u", m).chain(["a", "b", "c", "w"].map(String::from)).collect();
    let candidates = CandidateSet::new(names)?;

    let partials = (0..sc.t())
        .map(|i| {
            let s = &sc.family[i];
            let free = |x: usize| s.contains(&x) || x == l.b();
            let top = |x: usize| x == l.a() || x == l.c();
            partial_from(&l.eta(sc, i), |a, b| (top(a) && free(b)) || (top(b) && free(a)))
        })
        .collect::<Result<Vec<_>>>()?;

    let f = Accounting::Final;
    let mut cons = vec![
        MarginConstraint::new(l.c(), l.b(), 4 * t, f),
        MarginConstraint::new(l.c(), l.w(), t + 2, f),
        MarginConstraint::new(l.b(), l.a(), 2 * k + 4, f),
        MarginConstraint::new(l.w(), l.a(), 4 * t, f),
        MarginConstraint::new(l.a(), l.c(), t + 2, f),
    ];
    for u in 0..m {
        cons.push(MarginConstraint::new(u, l.c(), 2, Accounting::CompleteOnly));
        cons.push(MarginConstraint::new(l.w(), u, 4 * t, f));
    }
    let complete = realize_constraints(&candidates, &partials, &cons, f)?;
    let pw = PWInstance::new(candidates, partials, complete, l.c(), Rule::RankedPairs)?;
    Ok((pw, cons, vec!["D(u, c) counts the complete votes only"]))
}

pub(super) fn forward(sc: &SetCoverInstance, cover: &[usize]) -> Result<Vec<LinearOrder>> {
    let l = Layout { m: sc.universe_size };
    (0..sc.t())
        .map(|i| linear(if cover.contains(&i) { l.lifted(sc, i) } else { l.eta(sc, i) }))
        .collect()
}

pub(super) fn extract(sc: &SetCoverInstance, ext: &[LinearOrder]) -> Vec<usize> {
    let l = Layout { m: sc.universe_size };
    (0..sc.t()).filter(|&i| ext[i].prefers(l.c(), l.b())).collect()
}
