//! Answer-preserving rewrites of set-cover instances that put them in the
//! shape each gadget needs. Every rewrite is logged as a [`Step`] so the
//! processed instance can be replayed from the original.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{solve_set_cover, verify_cover, SetCoverInstance, Witness};

/// Shape requirements, one per gadget family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// No parity demands; the budget is clamped to the number of sets.
    Scoring,
    /// Even number of sets and every element in an even number of sets.
    Maximin,
    /// Odd number of sets, every element in an odd number of sets, and at least six elements.
    Copeland,
    /// Budget at least one, more than budget + 1 sets, every set with two or more elements.
    Bucklin,
    /// Even number of sets.
    RankedPairs,
}

/// Where a processed set comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetOrigin {
    /// Original set with this index, possibly with dummy elements added.
    Original(usize),
    /// Extra copy of an original set.
    Copy(usize),
    /// Added singleton of this original element.
    Singleton(usize),
    /// Mandatory set over dummy elements only.
    Dummy,
    /// Empty set added for parity.
    Filler,
    /// Part of a canonical replacement instance.
    Canonical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    /// Replace the instance by the mode's canonical instance with this answer.
    Canonical { answer: bool },
    ClampBudget { k: usize },
    RemoveSet { index: usize },
    /// Remove an element whose only set is its singleton, together with that
    /// set, and lower the budget by one.
    DropElement { element: usize },
    AddSet { elements: Vec<usize>, origin: SetOrigin },
    /// Add a set over dummy elements and raise the budget by one.
    AddDummySet { elements: Vec<usize> },
    AddElements { count: usize },
    ExtendAllSets { element: usize },
}

/// The log of preprocessing moves together with its result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub mode: Mode,
    pub original: SetCoverInstance,
    pub steps: Vec<Step>,
    pub processed: SetCoverInstance,
    pub set_origin: Vec<SetOrigin>,
    /// Original index of every processed element, `None` for dummies.
    pub element_origin: Vec<Option<usize>>,
    /// Original sets removed together with their element; every cover uses them.
    pub forced: Vec<usize>,
    /// Set when the instance was replaced by a canonical one.
    pub canonical: Option<bool>,
    /// Conventions fixed by the generator.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
struct State {
    sc: SetCoverInstance,
    set_origin: Vec<SetOrigin>,
    element_origin: Vec<Option<usize>>,
    forced: Vec<usize>,
    canonical: Option<bool>,
}

impl State {
    fn new(sc: &SetCoverInstance) -> Self {
        State {
            sc: sc.clone(),
            set_origin: (0..sc.t()).map(SetOrigin::Original).collect(),
            element_origin: (0..sc.universe_size).map(Some).collect(),
            forced: Vec::new(),
            canonical: None,
        }
    }

    fn occurrences(&self, u: usize) -> usize {
        self.sc.family.iter().filter(|s| s.contains(&u)).count()
    }

    fn singleton(&self, u: usize) -> Option<usize> {
        self.sc.family.iter().position(|s| s.as_slice() == [u])
    }

    fn apply(&mut self, step: &Step, mode: Mode) -> Result<()> {
        let bad = |what: &str| Error::InvalidArgument(format!("cannot replay step: {what}"));
        match step {
            Step::Canonical { answer } => {
                let (m, family, k) = canonical(mode, *answer);
                self.sc = SetCoverInstance::new(m, family, k)?;
                self.set_origin = vec![SetOrigin::Canonical; self.sc.t()];
                self.element_origin = vec![None; m];
                self.forced.clear();
                self.canonical = Some(*answer);
            }
            Step::ClampBudget { k } => self.sc.k = *k,
            Step::RemoveSet { index } => {
                if *index >= self.sc.t() {
                    return Err(bad("set index out of range"));
                }
                self.sc.family.remove(*index);
                self.set_origin.remove(*index);
            }
            Step::DropElement { element } => {
                let u = *element;
                let s = self.singleton(u).ok_or_else(|| bad("element has no singleton"))?;
                if self.occurrences(u) != 1 || self.sc.k == 0 {
                    return Err(bad("element is not forced"));
                }
                if let SetOrigin::Original(j) = self.set_origin[s] {
                    self.forced.push(j);
                }
                self.sc.family.remove(s);
                self.set_origin.remove(s);
                for set in &mut self.sc.family {
                    for e in set.iter_mut() {
                        if *e > u {
                            *e -= 1;
                        }
                    }
                }
                self.element_origin.remove(u);
                self.sc.universe_size -= 1;
                self.sc.k -= 1;
            }
            Step::AddSet { elements, origin } => {
                self.push_set(elements.clone(), origin.clone())?;
            }
            Step::AddDummySet { elements } => {
                self.push_set(elements.clone(), SetOrigin::Dummy)?;
                self.sc.k += 1;
            }
            Step::AddElements { count } => {
                self.sc.universe_size += count;
                self.element_origin.extend(std::iter::repeat(None).take(*count));
                if self.sc.universe_size > 64 {
                    return Err(bad("universe larger than 64"));
                }
            }
            Step::ExtendAllSets { element } => {
                if *element >= self.sc.universe_size {
                    return Err(bad("element out of range"));
                }
                for set in &mut self.sc.family {
                    set.push(*element);
                    set.sort_unstable();
                    set.dedup();
                }
            }
        }
        Ok(())
    }

    fn push_set(&mut self, mut elements: Vec<usize>, origin: SetOrigin) -> Result<()> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&e) = elements.iter().find(|&&e| e >= self.sc.universe_size) {
            return Err(Error::IndexOutOfRange { index: e, m: self.sc.universe_size });
        }
        self.sc.family.push(elements);
        self.set_origin.push(origin);
        Ok(())
    }

    /// The next move the mode still needs, if any.
    fn next_step(&self, mode: Mode) -> Option<Step> {
        let sc = &self.sc;
        let m = sc.universe_size;
        let t = sc.t();
        if self.canonical.is_none() {
            if m == 0 {
                return Some(Step::Canonical { answer: true });
            }
            if (0..m).any(|u| self.occurrences(u) == 0) {
                return Some(Step::Canonical { answer: false });
            }
            if mode == Mode::Bucklin {
                if sc.k == 0 {
                    return Some(Step::Canonical { answer: false });
                }
                if sc.k >= t {
                    return Some(Step::Canonical { answer: true });
                }
            }
        }
        if sc.k > t {
            return Some(Step::ClampBudget { k: t });
        }
        match mode {
            Mode::Scoring => None,
            Mode::RankedPairs => (t % 2 == 1).then(|| filler()),
            Mode::Maximin => {
                if let Some(u) = (0..m).find(|&u| self.occurrences(u) % 2 == 1) {
                    let single = self.singleton(u);
                    return Some(match single {
                        Some(_) if self.occurrences(u) == 1 => {
                            if sc.k == 0 {
                                Step::Canonical { answer: false }
                            } else {
                                Step::DropElement { element: u }
                            }
                        }
                        Some(index) => Step::RemoveSet { index },
                        None => self.add_singleton(u),
                    });
                }
                (t % 2 == 1).then(|| filler())
            }
            Mode::Copeland => {
                if let Some(u) = (0..m).find(|&u| self.occurrences(u) % 2 == 0) {
                    return Some(match self.singleton(u) {
                        Some(index) => Step::RemoveSet { index },
                        None => self.add_singleton(u),
                    });
                }
                let pad = 6usize.saturating_sub(m);
                if pad > 0 || t % 2 == 0 {
                    // Dummy elements first; the sets that cover them follow.
                    let count = if t % 2 == 0 { pad.max(1) } else { pad.max(2) };
                    return Some(Step::AddElements { count });
                }
                None
            }
            Mode::Bucklin => {
                if let Some(index) = sc.family.iter().position(|s| s.is_empty()) {
                    return Some(Step::RemoveSet { index });
                }
                if sc.family.iter().any(|s| s.len() < 2) {
                    return Some(Step::AddElements { count: 1 });
                }
                if t <= sc.k + 1 {
                    let (index, _) = sc.family.iter().enumerate().max_by_key(|(i, s)| (s.len(), std::cmp::Reverse(*i)))?;
                    let origin = match self.set_origin[index] {
                        SetOrigin::Original(j) | SetOrigin::Copy(j) => SetOrigin::Copy(j),
                        ref other => other.clone(),
                    };
                    return Some(Step::AddSet { elements: sc.family[index].clone(), origin });
                }
                None
            }
        }
    }

    fn add_singleton(&self, u: usize) -> Step {
        let origin = match self.element_origin[u] {
            Some(orig) => SetOrigin::Singleton(orig),
            None => SetOrigin::Canonical,
        };
        Step::AddSet { elements: vec![u], origin }
    }
}

fn filler() -> Step {
    Step::AddSet { elements: Vec::new(), origin: SetOrigin::Filler }
}

/// Small instances with a known answer that already meet the mode's demands
/// or reach them in a few moves.
fn canonical(mode: Mode, answer: bool) -> (usize, Vec<Vec<usize>>, usize) {
    match (mode, answer) {
        (Mode::Bucklin, true) => (2, vec![vec![0, 1]; 3], 1),
        (Mode::Bucklin, false) => (4, vec![vec![0, 1], vec![2, 3], vec![0, 1]], 1),
        (_, true) => (2, vec![vec![0, 1]], 1),
        (_, false) => (1, vec![vec![0], vec![0]], 0),
    }
}

/// Rewrites `sc` until it meets the demands of `mode`.
pub fn preprocess_parity(sc: &SetCoverInstance, mode: Mode) -> Result<Provenance> {
    let mut state = State::new(sc);
    let mut steps = Vec::new();
    // Each move fixes one defect without creating an earlier one, so the loop
    // is short; the cap only guards against a planning bug.
    for _ in 0..1000 {
        let Some(step) = state.next_step(mode) else {
            return Ok(Provenance {
                mode,
                original: sc.clone(),
                steps,
                processed: state.sc,
                set_origin: state.set_origin,
                element_origin: state.element_origin,
                forced: state.forced,
                canonical: state.canonical,
                notes: Vec::new(),
            });
        };
        let follow_up = match &step {
            Step::AddElements { count } if mode == Mode::Copeland => {
                let base = state.sc.universe_size;
                let dummies: Vec<usize> = (base..base + count).collect();
                if state.sc.t() % 2 == 0 {
                    vec![Step::AddDummySet { elements: dummies }]
                } else {
                    let half = dummies.len().div_ceil(2);
                    vec![
                        Step::AddDummySet { elements: dummies[..half].to_vec() },
                        Step::AddDummySet { elements: dummies[half..].to_vec() },
                    ]
                }
            }
            Step::AddElements { .. } => vec![Step::ExtendAllSets { element: state.sc.universe_size }],
            _ => Vec::new(),
        };
        for s in std::iter::once(step).chain(follow_up) {
            state.apply(&s, mode)?;
            steps.push(s);
        }
    }
    Err(Error::Internal("preprocessing did not converge".into()))
}

impl Provenance {
    /// Re-applies the logged steps to the original instance.
    pub fn replay(&self) -> Result<SetCoverInstance> {
        let mut state = State::new(&self.original);
        for s in &self.steps {
            state.apply(s, self.mode)?;
        }
        Ok(state.sc)
    }

    /// Whether replaying the steps reproduces every recorded field.
    pub fn replays_exactly(&self) -> bool {
        let mut state = State::new(&self.original);
        self.steps.iter().all(|s| state.apply(s, self.mode).is_ok())
            && state.sc == self.processed
            && state.set_origin == self.set_origin
            && state.element_origin == self.element_origin
            && state.forced == self.forced
            && state.canonical == self.canonical
    }

    /// Maps a cover of the original instance to a cover of the processed one.
    pub fn cover_to_processed(&self, cover: &[usize]) -> Result<Vec<usize>> {
        if !verify_cover(&self.original, cover)? {
            return Err(Error::InvalidWitness("not a cover of the original instance".into()));
        }
        let out = match self.canonical {
            Some(_) => solved_cover(&self.processed)?,
            None => {
                let mut out: Vec<usize> = Vec::new();
                for &j in cover {
                    if self.forced.contains(&j) {
                        continue;
                    }
                    let direct = (0..self.processed.t())
                        .find(|&p| self.set_origin[p] == SetOrigin::Original(j) && !out.contains(&p));
                    match direct {
                        Some(p) => out.push(p),
                        None => {
                            // A removed singleton: any remaining set with its element will do.
                            for &u in &self.original.family[j] {
                                let Some(pu) = self.element_origin.iter().position(|&o| o == Some(u)) else {
                                    continue;
                                };
                                if let Some(p) = (0..self.processed.t()).find(|&p| self.processed.family[p].contains(&pu)) {
                                    if !out.contains(&p) {
                                        out.push(p);
                                    }
                                }
                            }
                        }
                    }
                }
                for p in 0..self.processed.t() {
                    if self.set_origin[p] == SetOrigin::Dummy {
                        out.push(p);
                    }
                }
                out.sort_unstable();
                out
            }
        };
        if !verify_cover(&self.processed, &out)? {
            return Err(Error::Internal("mapped cover does not cover the processed instance".into()));
        }
        Ok(out)
    }

    /// Maps a cover of the processed instance back to the original one.
    pub fn cover_to_original(&self, cover: &[usize]) -> Result<Vec<usize>> {
        if !verify_cover(&self.processed, cover)? {
            return Err(Error::InvalidWitness("not a cover of the processed instance".into()));
        }
        let out = match self.canonical {
            Some(_) => solved_cover(&self.original)?,
            None => {
                let mut out = self.forced.clone();
                for &p in cover {
                    match self.set_origin[p] {
                        SetOrigin::Original(j) | SetOrigin::Copy(j) => out.push(j),
                        SetOrigin::Singleton(u) => {
                            let j = self.original.family.iter().position(|s| s.contains(&u));
                            out.push(j.ok_or_else(|| Error::Internal("singleton of an uncovered element".into()))?);
                        }
                        SetOrigin::Dummy | SetOrigin::Filler | SetOrigin::Canonical => {}
                    }
                }
                out.sort_unstable();
                out.dedup();
                out
            }
        };
        if !verify_cover(&self.original, &out)? {
            return Err(Error::Internal("cover does not map back to a cover".into()));
        }
        Ok(out)
    }
}

fn solved_cover(sc: &SetCoverInstance) -> Result<Vec<usize>> {
    match solve_set_cover(sc).witness {
        Some(Witness::Cover(c)) => Ok(c),
        _ => Err(Error::InvalidWitness("instance has no cover".into())),
    }
}
