//! Exhaustive decision procedures for possible winner, coalitional
//! manipulation and small-universe set cover.
//!
//! Budgets count search leaves. Identical partial votes are interchangeable,
//! so the possible-winner search enumerates multisets of extensions per group
//! of identical votes; its search space is the product of
//! `C(e + r - 1, r)` over groups with `e` extensions and `r` copies.

use serde::{Deserialize, Serialize};

use crate::election::{is_extension, CandidateSet, LinearOrder, PartialOrder, Profile};
use crate::error::{Error, Result};
use crate::rules::{winners, Rule};
use crate::tally::{Contribution, Tally};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PWInstance {
    pub candidates: CandidateSet,
    pub partial_votes: Vec<PartialOrder>,
    pub complete_votes: Profile,
    pub distinguished: usize,
    pub rule: Rule,
}

impl PWInstance {
    pub fn new(
        candidates: CandidateSet,
        partial_votes: Vec<PartialOrder>,
        complete_votes: Profile,
        distinguished: usize,
        rule: Rule,
    ) -> Result<Self> {
        let inst = PWInstance { candidates, partial_votes, complete_votes, distinguished, rule };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.candidates.len();
        self.candidates.check(self.distinguished)?;
        if self.complete_votes.num_candidates() != m {
            return Err(Error::CandidateMismatch { expected: m, found: self.complete_votes.num_candidates() });
        }
        for p in &self.partial_votes {
            if p.num_candidates() != m {
                return Err(Error::CandidateMismatch { expected: m, found: p.num_candidates() });
            }
        }
        if let Some(sv) = self.rule.score_vector(m) {
            if sv.len() != m {
                return Err(Error::LengthMismatch { expected: m, found: sv.len() });
            }
        }
        Ok(())
    }

    pub fn num_voters(&self) -> u64 {
        self.complete_votes.num_votes() + self.partial_votes.len() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMInstance {
    pub candidates: CandidateSet,
    pub nonmanipulators: Profile,
    pub manipulators: u64,
    pub distinguished: usize,
    pub rule: Rule,
}

impl CMInstance {
    pub fn new(
        candidates: CandidateSet,
        nonmanipulators: Profile,
        manipulators: u64,
        distinguished: usize,
        rule: Rule,
    ) -> Result<Self> {
        let inst = CMInstance { candidates, nonmanipulators, manipulators, distinguished, rule };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.manipulators == 0 {
            return Err(Error::InvalidArgument("at least one manipulator is required".into()));
        }
        self.candidates.check(self.distinguished)?;
        if self.nonmanipulators.num_candidates() != self.candidates.len() {
            return Err(Error::CandidateMismatch {
                expected: self.candidates.len(),
                found: self.nonmanipulators.num_candidates(),
            });
        }
        Ok(())
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    /// The equivalent possible-winner instance. For monotone rules the
    /// manipulator votes are restricted to put `c` first.
    pub fn as_possible_winner(&self) -> Result<PWInstance> {
        let m = self.num_candidates();
        let c = self.distinguished;
        let template = if self.rule.is_monotone() {
            PartialOrder::from_pairs(m, (0..m).filter(|&x| x != c).map(|x| (c, x)))?
        } else {
            PartialOrder::empty(m)
        };
        PWInstance::new(
            self.candidates.clone(),
            vec![template; self.manipulators as usize],
            self.nonmanipulators.clone(),
            c,
            self.rule.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetCoverInstance {
    pub universe_size: usize,
    pub family: Vec<Vec<usize>>,
    pub k: usize,
}

impl SetCoverInstance {
    /// Sorts and deduplicates every set.
    pub fn new(universe_size: usize, family: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        if universe_size > 64 {
            return Err(Error::InvalidArgument("universe larger than 64".into()));
        }
        let mut fam = Vec::with_capacity(family.len());
        for mut s in family {
            s.sort_unstable();
            s.dedup();
            if let Some(&e) = s.iter().find(|&&e| e >= universe_size) {
                return Err(Error::IndexOutOfRange { index: e, m: universe_size });
            }
            fam.push(s);
        }
        Ok(SetCoverInstance { universe_size, family: fam, k })
    }

    pub fn t(&self) -> usize {
        self.family.len()
    }

    pub fn set_mask(&self, i: usize) -> u64 {
        self.family[i].iter().fold(0u64, |a, &e| a | (1u64 << e))
    }

    pub fn universe_mask(&self) -> u64 {
        crate::election::full_mask(self.universe_size)
    }

    pub fn covers(&self, indices: &[usize]) -> bool {
        indices.iter().fold(0u64, |a, &i| a | self.set_mask(i)) == self.universe_mask()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// One extension per partial vote, in input order.
    Extensions(Vec<LinearOrder>),
    /// Manipulator votes with multiplicities.
    Manipulation(Vec<(LinearOrder, u64)>),
    /// Indices into the family.
    Cover(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub answer: bool,
    pub witness: Option<Witness>,
    /// Leaves explored.
    pub work: u128,
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Number of leaves the possible-winner search visits in the worst case.
pub fn pw_search_space(inst: &PWInstance) -> u128 {
    group_partials(&inst.partial_votes)
        .iter()
        .map(|(po, pos)| {
            let e = po.count_linear_extensions();
            let r = pos.len() as u128;
            binomial(e + r - 1, r)
        })
        .fold(1u128, |a, b| a.saturating_mul(b))
}

fn group_partials(partials: &[PartialOrder]) -> Vec<(&PartialOrder, Vec<usize>)> {
    let mut groups: Vec<(&PartialOrder, Vec<usize>)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for (i, p) in partials.iter().enumerate() {
        match index.get(p) {
            Some(&g) => {
                let (_, pos): &mut (&PartialOrder, Vec<usize>) = &mut groups[g];
                pos.push(i);
            }
            None => {
                index.insert(p, groups.len());
                groups.push((p, vec![i]));
            }
        }
    }
    groups
}

struct Group {
    positions: Vec<usize>,
    extensions: Vec<LinearOrder>,
    contributions: Vec<Contribution>,
}

struct PwSearch<'a> {
    tally: &'a Tally,
    groups: &'a [Group],
    state: Vec<i64>,
    choice: Vec<Vec<usize>>,
    work: u128,
}

impl PwSearch<'_> {
    fn run(&mut self, g: usize, slot: usize, min_ext: usize) -> Result<bool> {
        if g == self.groups.len() {
            self.work += 1;
            return self.tally.wins(&self.state);
        }
        let group = &self.groups[g];
        if slot == group.positions.len() {
            return self.run(g + 1, 0, 0);
        }
        for e in min_ext..group.extensions.len() {
            Tally::apply(&mut self.state, &group.contributions[e], 1);
            self.choice[g].push(e);
            if self.run(g, slot + 1, e)? {
                return Ok(true);
            }
            self.choice[g].pop();
            Tally::apply(&mut self.state, &group.contributions[e], -1);
        }
        Ok(false)
    }
}

pub fn solve_possible_winner(inst: &PWInstance, budget: u64) -> Result<OracleVerdict> {
    inst.validate()?;
    let m = inst.candidates.len();
    let space = pw_search_space(inst);
    if space > budget as u128 {
        return Err(Error::BudgetExceeded { budget, needed: space });
    }
    let tally = Tally::new(&inst.rule, m, inst.distinguished, inst.num_voters())?;
    let mut state = vec![0i64; tally.state_len()];
    for (v, k) in inst.complete_votes.votes() {
        Tally::apply(&mut state, &tally.contribution(v), k as i64);
    }
    let groups: Vec<Group> = group_partials(&inst.partial_votes)
        .into_iter()
        .map(|(po, positions)| {
            let extensions: Vec<LinearOrder> = po.linear_extensions().collect();
            let contributions = extensions.iter().map(|e| tally.contribution(e)).collect();
            Group { positions, extensions, contributions }
        })
        .collect();
    let mut search = PwSearch {
        tally: &tally,
        groups: &groups,
        state,
        choice: vec![Vec::new(); groups.len()],
        work: 0,
    };
    if search.run(0, 0, 0)? {
        let mut witness = vec![None; inst.partial_votes.len()];
        for (g, group) in groups.iter().enumerate() {
            for (&pos, &e) in group.positions.iter().zip(&search.choice[g]) {
                witness[pos] = Some(group.extensions[e].clone());
            }
        }
        let witness = witness.into_iter().map(|w| w.expect("every slot assigned")).collect();
        Ok(OracleVerdict { answer: true, witness: Some(Witness::Extensions(witness)), work: search.work })
    } else {
        Ok(OracleVerdict { answer: false, witness: None, work: search.work })
    }
}

pub fn solve_coalitional_manipulation(inst: &CMInstance, budget: u64) -> Result<OracleVerdict> {
    inst.validate()?;
    if inst.num_candidates() == 1 {
        let only = LinearOrder::identity(1);
        return Ok(OracleVerdict {
            answer: true,
            witness: Some(Witness::Manipulation(vec![(only, inst.manipulators)])),
            work: 1,
        });
    }
    let pw = inst.as_possible_winner()?;
    let verdict = solve_possible_winner(&pw, budget)?;
    let witness = match verdict.witness {
        Some(Witness::Extensions(votes)) => {
            let mut merged: std::collections::BTreeMap<LinearOrder, u64> = Default::default();
            for v in votes {
                *merged.entry(v).or_insert(0) += 1;
            }
            Some(Witness::Manipulation(merged.into_iter().collect()))
        }
        _ => None,
    };
    Ok(OracleVerdict { answer: verdict.answer, witness, work: verdict.work })
}

/// Tries subfamilies by increasing size, lexicographically within a size.
pub fn solve_set_cover(inst: &SetCoverInstance) -> OracleVerdict {
    let t = inst.t();
    let masks: Vec<u64> = (0..t).map(|i| inst.set_mask(i)).collect();
    let full = inst.universe_mask();
    let mut work = 0u128;
    for size in 0..=inst.k.min(t) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            work += 1;
            if idx.iter().fold(0u64, |a, &i| a | masks[i]) == full {
                return OracleVerdict { answer: true, witness: Some(Witness::Cover(idx)), work };
            }
            // Advance to the next combination.
            let mut i = size;
            while i > 0 && idx[i - 1] == t - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    OracleVerdict { answer: false, witness: None, work }
}

pub fn verify_pw_witness(inst: &PWInstance, extensions: &[LinearOrder]) -> Result<bool> {
    if extensions.len() != inst.partial_votes.len() {
        return Err(Error::InvalidWitness(format!(
            "{} extensions for {} partial votes",
            extensions.len(),
            inst.partial_votes.len()
        )));
    }
    let mut all = inst.complete_votes.clone();
    for (e, p) in extensions.iter().zip(&inst.partial_votes) {
        if !is_extension(e, p).map_err(|err| Error::InvalidWitness(err.to_string()))? {
            return Ok(false);
        }
        all.add(e.clone(), 1)?;
    }
    Ok(winners(&all, &inst.rule)?.is_unique_winner(inst.distinguished))
}

pub fn verify_cm_witness(inst: &CMInstance, votes: &[(LinearOrder, u64)]) -> Result<bool> {
    let total: u64 = votes.iter().map(|(_, k)| k).sum();
    if total != inst.manipulators {
        return Err(Error::InvalidWitness(format!(
            "{total} manipulator votes for {} manipulators",
            inst.manipulators
        )));
    }
    let mut all = inst.nonmanipulators.clone();
    for (v, k) in votes {
        all.add(v.clone(), *k).map_err(|e| Error::InvalidWitness(e.to_string()))?;
    }
    Ok(winners(&all, &inst.rule)?.is_unique_winner(inst.distinguished))
}

pub fn verify_cover(inst: &SetCoverInstance, indices: &[usize]) -> Result<bool> {
    if let Some(&i) = indices.iter().find(|&&i| i >= inst.t()) {
        return Err(Error::InvalidWitness(format!("set index {i} out of range")));
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted.len() <= inst.k && inst.covers(&sorted))
}

#[derive(Debug, Clone, Copy)]
pub enum InstanceRef<'a> {
    PossibleWinner(&'a PWInstance),
    Manipulation(&'a CMInstance),
    SetCover(&'a SetCoverInstance),
}

/// Re-checks a witness without consulting any search.
pub fn verify_witness(inst: InstanceRef<'_>, witness: &Witness) -> Result<bool> {
    match (inst, witness) {
        (InstanceRef::PossibleWinner(p), Witness::Extensions(e)) => verify_pw_witness(p, e),
        (InstanceRef::Manipulation(c), Witness::Manipulation(v)) => verify_cm_witness(c, v),
        (InstanceRef::SetCover(s), Witness::Cover(i)) => verify_cover(s, i),
        _ => Err(Error::InvalidWitness("witness kind does not match instance".into())),
    }
}
