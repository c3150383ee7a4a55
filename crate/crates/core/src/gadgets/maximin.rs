// Maximin. Candidates: u_1..u_m, w_1..w_m, w_x, c, d, x, l_1..l_3.
//
// Vote i is L > W > x > S_i > d > c > T_i with the block W free against
// x, S_i, d and c. Dropping W below c in a vote lifts c against w_1 and
// lets the elements of S_i beat their w's. T_i stays below W: were it free
// too, one vote with W at the bottom would clear every element at once.
// D(w_i, u_i) counts the complete votes only.

use super::{complement, linear, pad_cover, partial_from, realize_constraints, Accounting, Built, MarginConstraint};
use crate::election::{CandidateSet, LinearOrder};
use crate::error::Result;
use crate::oracle::{PWInstance, SetCoverInstance};
use crate::rules::Rule;

struct Layout {
    m: usize,
}

impl Layout {
    fn w(&self, i: usize) -> usize {
        self.m + i
    }
    fn wx(&self) -> usize {
        2 * self.m
    }
    fn c(&self) -> usize {
        2 * self.m + 1
    }
    fn d(&self) -> usize {
        2 * self.m + 2
    }
    fn x(&self) -> usize {
        2 * self.m + 3
    }
    fn l(&self, j: usize) -> usize {
        2 * self.m + 4 + j
    }
    fn is_w(&self, a: usize) -> bool {
        (self.m..=2 * self.m).contains(&a)
    }
    fn ws(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).map(|i| self.w(i)).chain([self.wx()])
    }

    fn eta(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..3).map(|j| self.l(j)).chain(self.ws()).collect();
        v.push(self.x());
        v.extend(&sc.family[i]);
        v.extend([self.d(), self.c()]);
        v.extend(complement(sc, i));
        v
    }

    fn lowered(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..3).map(|j| self.l(j)).collect();
        v.push(self.x());
        v.extend(&sc.family[i]);
        v.extend([self.d(), self.c()]);
        v.extend(self.ws());
        v.extend(complement(sc, i));
        v
    }
}

pub(super) fn build(sc: &SetCoverInstance) -> Result<Built> {
    let l = Layout { m: sc.universe_size };
    let (m, t, k) = (l.m, sc.t() as i64, sc.k as i64);
    let names: Vec<String> = super::names("u", m)
        .chain(super::names("w", m))
        .chain(["wx", "c", "d", "x", "l1", "l2", "l3"].map(String::from))
        .collect();
    let candidates = CandidateSet::new(names)?;

    let partials = (0..sc.t())
        .map(|i| {
            let s = &sc.family[i];
            let free = |y: usize| s.contains(&y) || [l.c(), l.d(), l.x()].contains(&y);
            partial_from(&l.eta(sc, i), |a, b| (l.is_w(a) && free(b)) || (l.is_w(b) && free(a)))
        })
        .collect::<Result<Vec<_>>>()?;

    let f = Accounting::Final;
    let mut cons = vec![
        MarginConstraint::new(l.c(), l.w(0), -2 * k, f),
        MarginConstraint::new(l.c(), l.l(0), -t, f),
        MarginConstraint::new(l.d(), l.w(0), -2 * k - 2, f),
        MarginConstraint::new(l.x(), l.wx(), -2 * k - 2, f),
        MarginConstraint::new(l.wx(), l.l(0), -4 * t, f),
        MarginConstraint::new(l.l(0), l.l(1), -4 * t, f),
        MarginConstraint::new(l.l(1), l.l(2), -4 * t, f),
        MarginConstraint::new(l.l(2), l.l(0), -4 * t, f),
    ];
    for u in 0..m {
        cons.push(MarginConstraint::new(l.w(u), u, -2 * t, Accounting::CompleteOnly));
        cons.push(MarginConstraint::new(u, l.l(0), -4 * t, f));
    }
    let complete = realize_constraints(&candidates, &partials, &cons, f)?;
    let pw = PWInstance::new(candidates, partials, complete, l.c(), Rule::Maximin)?;
    Ok((pw, cons, vec!["W is ranked w_1 > ... > w_m > w_x", "W is free against x, S_i, d, c only"]))
}

pub(super) fn forward(sc: &SetCoverInstance, cover: &[usize]) -> Result<Vec<LinearOrder>> {
    let l = Layout { m: sc.universe_size };
    let chosen = pad_cover(sc.t(), sc.k, cover)?;
    (0..sc.t())
        .map(|i| linear(if chosen[i] { l.lowered(sc, i) } else { l.eta(sc, i) }))
        .collect()
}

pub(super) fn extract(sc: &SetCoverInstance, ext: &[LinearOrder]) -> Vec<usize> {
    let l = Layout { m: sc.universe_size };
    (0..sc.t()).filter(|&i| ext[i].prefers(l.c(), l.w(0))).collect()
}
