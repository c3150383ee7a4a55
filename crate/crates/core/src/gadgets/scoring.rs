// Strict scoring rules. Candidates: u_1..u_m, v_1..v_m, w, c, d.
//
// Vote i is d > S_i > v_1..v_j > w > rest with j = m - |S_i|, and w may
// climb anywhere above its slot. Lifting w to the top costs d one first-gap
// and every element of S_i a positive gap. The complete votes leave d
// (k - 1) first-gaps above c, so exactly k votes must lift w to the top;
// w starts k full lifts plus one last-gap below c, so it can afford those k
// lifts and nothing more.

use num_rational::Rational64;

use super::{linear, pad_cover, partial_from, rest, Built};
use crate::election::{CandidateSet, LinearOrder};
use crate::error::{Error, Result};
use crate::oracle::{PWInstance, SetCoverInstance};
use crate::realize::{realize_scores, ScoreTarget};
use crate::rules::{scoring_winners, Rule, StrictFamily};

struct Layout {
    m: usize,
}

impl Layout {
    fn v(&self, i: usize) -> usize {
        self.m + i
    }
    fn w(&self) -> usize {
        2 * self.m
    }
    fn c(&self) -> usize {
        2 * self.m + 1
    }
    fn d(&self) -> usize {
        2 * self.m + 2
    }
    fn n(&self) -> usize {
        2 * self.m + 3
    }

    /// Candidates ranked above w in vote `i`.
    fn head(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let s = &sc.family[i];
        let mut head = vec![self.d()];
        head.extend(s);
        head.extend((0..self.m - s.len()).map(|j| self.v(j)));
        head
    }

    fn eta(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut eta = self.head(sc, i);
        eta.push(self.w());
        let tail = rest(self.n(), &eta);
        eta.extend(tail);
        eta
    }

    fn lifted(&self, sc: &SetCoverInstance, i: usize) -> Vec<usize> {
        let mut v = vec![self.w()];
        v.extend(self.eta(sc, i).into_iter().filter(|&x| x != self.w()));
        v
    }
}

pub(super) fn build(sc: &SetCoverInstance, family: StrictFamily) -> Result<Built> {
    let l = Layout { m: sc.universe_size };
    let n = l.n();
    let sv = family.vector(n);
    let alpha: Vec<i64> = sv
        .alpha()
        .iter()
        .map(|a| if a.is_integer() { Ok(a.to_integer()) } else { Err(Error::Internal("fractional score vector".into())) })
        .collect::<Result<_>>()?;
    let (m, k) = (l.m, sc.k as i64);

    let mut partials = Vec::with_capacity(sc.t());
    let mut base = vec![0i64; n];
    for i in 0..sc.t() {
        let head = l.head(sc, i);
        let w = l.w();
        partials.push(partial_from(&l.eta(sc, i), |a, b| {
            (a == w && head.contains(&b)) || (b == w && head.contains(&a))
        })?);
        for (p, &x) in l.eta(sc, i).iter().enumerate() {
            base[x] += alpha[p];
        }
    }

    // d sits (k - 1) first-gaps above c; w sits k full lifts plus the gap
    // into its own slot below c; u's tie with c; v's stay well below.
    let first_gap = alpha[0] - alpha[1];
    let lift = alpha[0] - alpha[m + 1];
    let last_gap = alpha[m] - alpha[m + 1];
    let want = |x: usize| -> i64 {
        if x == l.d() {
            (k - 1) * first_gap
        } else if x == l.w() {
            -(k * lift + last_gap)
        } else {
            0
        }
    };
    let c = l.c();
    let head_room = (0..m).map(|i| base[l.v(i)] - base[c] + 1).max().unwrap_or(0).max(0);
    let main: Vec<usize> = (0..m).chain([l.w(), c, l.d()]).collect();
    let offsets: Vec<i64> = main.iter().map(|&x| head_room + want(x) + base[c] - base[x]).collect();
    let names: Vec<String> = super::names("u", m)
        .chain(super::names("v", m))
        .chain(["w", "c", "d"].map(String::from))
        .collect();
    let candidates = CandidateSet::new(names)?;
    let target = ScoreTarget {
        candidates: candidates.clone(),
        main,
        offsets,
        decoys: (0..m).map(|i| l.v(i)).collect(),
        sv: sv.clone(),
    };
    let (complete, _) = realize_scores(&target)?;

    let s = scoring_winners(&complete, &sv)?.scores;
    let total = |x: usize| s[x] + Rational64::from_integer(base[x]);
    let ok = (0..m).all(|u| total(u) == total(c))
        && (0..m).all(|i| total(c) - total(l.v(i)) > Rational64::from_integer(1))
        && total(l.d()) - total(c) == Rational64::from_integer(want(l.d()))
        && total(l.w()) - total(c) == Rational64::from_integer(want(l.w()));
    if !ok {
        return Err(Error::Internal("scoring gadget missed its score targets".into()));
    }

    let rule = match family {
        StrictFamily::Borda => Rule::Borda,
        StrictFamily::Quadratic => Rule::Scoring(sv),
    };
    let pw = PWInstance::new(candidates, partials, complete, c, rule)?;
    Ok((pw, Vec::new(), vec!["w starts k top lifts plus one last gap below c"]))
}

pub(super) fn forward(sc: &SetCoverInstance, cover: &[usize]) -> Result<Vec<LinearOrder>> {
    let l = Layout { m: sc.universe_size };
    let chosen = pad_cover(sc.t(), sc.k, cover)?;
    (0..sc.t())
        .map(|i| linear(if chosen[i] { l.lifted(sc, i) } else { l.eta(sc, i) }))
        .collect()
}

pub(super) fn extract(sc: &SetCoverInstance, ext: &[LinearOrder]) -> Vec<usize> {
    let l = Layout { m: sc.universe_size };
    (0..sc.t()).filter(|&i| ext[i].prefers(l.w(), l.d())).collect()
}
