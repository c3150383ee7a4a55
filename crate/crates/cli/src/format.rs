//! Text formats for elections and set-cover instances.
//!
//! Candidate and element indices are 1-based in files and 0-based in memory.
//! Lines starting with `#` are comments.
//!
//! Election file:
//!
//! ```text
//! rule maximin
//! distinguished 1
//! manipulators 2
//! 3
//! 1 a
//! 2 b
//! 3 c
//! 2
//! 4 : 1,2,3
//! 1 : 3,2,1
//! partial
//! 1>2;2>3
//! -
//! ```
//!
//! The directives before the candidate count are optional. Each partial
//! vote lists `i>j` pairs separated by `;`; `-` is a vote with no pairs.
//!
//! Set-cover file: `m t k` followed by `t` lines of element indices, with
//! `-` for an empty set.

use std::fmt::Write as _;

use thiserror::Error;
use votekernel::{CandidateSet, CMInstance, LinearOrder, PWInstance, PartialOrder, Profile, Rule, SetCoverInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionFile {
    pub rule: Option<Rule>,
    pub distinguished: Option<usize>,
    pub manipulators: Option<u64>,
    pub profile: Profile,
    /// `None` when the file has no `partial` section.
    pub partial: Option<Vec<PartialOrder>>,
}

/// A non-comment line with its 1-based number.
struct Line<'a> {
    number: usize,
    text: &'a str,
    /// Offset of `text` within the raw line.
    indent: usize,
}

impl Line<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column: self.indent + offset + 1, message: message.into() }
    }

    fn column_of(&self, part: &str) -> usize {
        part.as_ptr() as usize - self.text.as_ptr() as usize
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = Line<'a>> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = Line<'a>>> = Box::new(text.lines().enumerate().filter_map(|(i, raw)| {
            let trimmed = raw.trim();
            (!trimmed.is_empty() && !trimmed.starts_with('#')).then(|| Line {
                number: i + 1,
                text: trimmed,
                indent: raw.len() - raw.trim_start().len(),
            })
        }));
        Lines { inner: it.peekable(), last: text.lines().count() }
    }

    fn next(&mut self, what: &str) -> Result<Line<'a>, ParseError> {
        self.inner.next().ok_or_else(|| ParseError {
            line: self.last + 1,
            column: 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn peek(&mut self) -> Option<&Line<'a>> {
        self.inner.peek()
    }
}

fn number<T: std::str::FromStr>(line: &Line, part: &str, what: &str) -> Result<T, ParseError> {
    let t = part.trim();
    t.parse().map_err(|_| line.err(line.column_of(t), format!("expected {what}, found `{t}`")))
}

fn index(line: &Line, part: &str, m: usize, what: &str) -> Result<usize, ParseError> {
    let i: usize = number(line, part, what)?;
    if i == 0 || i > m {
        return Err(line.err(line.column_of(part.trim()), format!("{what} {i} out of range 1..={m}")));
    }
    Ok(i - 1)
}

pub fn parse_election(text: &str) -> Result<ElectionFile, ParseError> {
    let mut lines = Lines::new(text);
    let (mut rule, mut distinguished, mut manipulators) = (None, None, None);
    let mut raw_distinguished = None;
    let m = loop {
        let line = lines.next("candidate count")?;
        let (key, rest) = line.text.split_once(char::is_whitespace).unwrap_or((line.text, ""));
        let rest = rest.trim_start();
        match key {
            "rule" => {
                let r: Rule = rest.parse().map_err(|e| line.err(line.column_of(rest), format!("{e}")))?;
                rule = Some(r);
            }
            "distinguished" => raw_distinguished = Some((line.number, line.indent + line.column_of(rest), number::<usize>(&line, rest, "candidate index")?)),
            "manipulators" => manipulators = Some(number(&line, rest, "manipulator count")?),
            _ => break number::<usize>(&line, line.text, "candidate count or directive")?,
        }
    };
    if let Some((number, column, i)) = raw_distinguished {
        if i == 0 || i > m {
            return Err(ParseError { line: number, column: column + 1, message: format!("candidate index {i} out of range 1..={m}") });
        }
        distinguished = Some(i - 1);
    }

    let mut names = Vec::with_capacity(m);
    for expected in 1..=m {
        let line = lines.next("candidate line")?;
        let (i, name) = line
            .text
            .split_once(char::is_whitespace)
            .ok_or_else(|| line.err(0, "expected `index name`"))?;
        let i: usize = number(&line, i, "candidate index")?;
        if i != expected {
            return Err(line.err(0, format!("expected candidate {expected}, found {i}")));
        }
        if names.iter().any(|n: &String| n == name.trim()) {
            return Err(line.err(line.column_of(name.trim()), format!("duplicate candidate `{}`", name.trim())));
        }
        names.push(name.trim().to_string());
    }
    let candidates = CandidateSet::new(names).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })?;

    let line = lines.next("block count")?;
    let blocks: usize = number(&line, line.text, "block count")?;
    let mut profile = Profile::new(candidates.clone());
    for _ in 0..blocks {
        let line = lines.next("vote block")?;
        let (mult, ranking) = line.text.split_once(':').ok_or_else(|| line.err(0, "expected `multiplicity : ranking`"))?;
        let mult: u64 = number(&line, mult, "multiplicity")?;
        let ranking = ranking
            .split(',')
            .map(|p| index(&line, p, m, "candidate"))
            .collect::<Result<Vec<_>, _>>()?;
        let col = line.column_of(line.text.split_once(':').unwrap().1);
        let vote = LinearOrder::new(ranking).map_err(|e| line.err(col, e.to_string()))?;
        if vote.len() != m {
            return Err(line.err(col, format!("not a permutation: ranks {} of {m} candidates", vote.len())));
        }
        profile.add(vote, mult).map_err(|e| line.err(col, e.to_string()))?;
    }

    let mut partial = None;
    if let Some(line) = lines.peek() {
        if line.text != "partial" {
            return Err(line.err(0, format!("expected `partial` or end of file, found `{}`", line.text)));
        }
        lines.next("partial")?;
        let mut votes = Vec::new();
        while let Some(line) = lines.inner.next() {
            votes.push(parse_partial(&line, m)?);
        }
        partial = Some(votes);
    }
    Ok(ElectionFile { rule, distinguished, manipulators, profile, partial })
}

fn parse_partial(line: &Line, m: usize) -> Result<PartialOrder, ParseError> {
    if line.text == "-" {
        return Ok(PartialOrder::empty(m));
    }
    let pairs = line
        .text
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once('>').ok_or_else(|| line.err(line.column_of(p), format!("expected `i>j`, found `{}`", p.trim())))?;
            Ok((index(line, a, m, "candidate")?, index(line, b, m, "candidate")?))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    PartialOrder::from_pairs(m, pairs).map_err(|e| line.err(0, e.to_string()))
}

fn ranking(v: &LinearOrder) -> String {
    v.ranking().iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_partial(p: &PartialOrder) -> String {
    let pairs = p.strict_pairs();
    if pairs.is_empty() {
        return "-".into();
    }
    pairs.iter().map(|(a, b)| format!("{}>{}", a + 1, b + 1)).collect::<Vec<_>>().join(";")
}

/// Canonical text of an election file; parsing it gives the same value.
pub fn write_election(f: &ElectionFile) -> String {
    let mut out = String::new();
    if let Some(r) = &f.rule {
        writeln!(out, "rule {r}").unwrap();
    }
    if let Some(c) = f.distinguished {
        writeln!(out, "distinguished {}", c + 1).unwrap();
    }
    if let Some(k) = f.manipulators {
        writeln!(out, "manipulators {k}").unwrap();
    }
    let cands = f.profile.candidates();
    writeln!(out, "{}", cands.len()).unwrap();
    for (i, n) in cands.names().iter().enumerate() {
        writeln!(out, "{} {n}", i + 1).unwrap();
    }
    writeln!(out, "{}", f.profile.num_blocks()).unwrap();
    for (v, k) in f.profile.votes() {
        writeln!(out, "{k} : {}", ranking(v)).unwrap();
    }
    if let Some(partial) = &f.partial {
        out.push_str("partial\n");
        for p in partial {
            writeln!(out, "{}", write_partial(p)).unwrap();
        }
    }
    out
}

impl ElectionFile {
    pub fn from_pw(inst: &PWInstance) -> Self {
        ElectionFile {
            rule: Some(inst.rule.clone()),
            distinguished: Some(inst.distinguished),
            manipulators: None,
            profile: inst.complete_votes.clone(),
            partial: Some(inst.partial_votes.clone()),
        }
    }

    pub fn from_cm(inst: &CMInstance) -> Self {
        ElectionFile {
            rule: Some(inst.rule.clone()),
            distinguished: Some(inst.distinguished),
            manipulators: Some(inst.manipulators),
            profile: inst.nonmanipulators.clone(),
            partial: None,
        }
    }
}

pub fn parse_set_cover(text: &str) -> Result<SetCoverInstance, ParseError> {
    // Blank lines are skipped like comments, hence `-` for empty sets.
    let mut lines = Lines::new(text);
    let head = lines.next("`m t k` header")?;
    let parts: Vec<&str> = head.text.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(head.err(0, "expected `m t k`"));
    }
    let m: usize = number(&head, parts[0], "universe size")?;
    let t: usize = number(&head, parts[1], "set count")?;
    let k: usize = number(&head, parts[2], "budget")?;
    let mut family = Vec::with_capacity(t);
    for _ in 0..t {
        let line = lines.next("set line")?;
        if line.text == "-" {
            family.push(Vec::new());
            continue;
        }
        let mut set = line
            .text
            .split_whitespace()
            .map(|p| index(&line, p, m, "element"))
            .collect::<Result<Vec<_>, _>>()?;
        set.sort_unstable();
        if set.windows(2).any(|w| w[0] == w[1]) {
            return Err(line.err(0, "repeated element"));
        }
        family.push(set);
    }
    if let Some(extra) = lines.peek() {
        return Err(extra.err(0, format!("expected {t} set lines, found more")));
    }
    SetCoverInstance::new(m, family, k).map_err(|e| head.err(0, e.to_string()))
}

pub fn write_set_cover(sc: &SetCoverInstance) -> String {
    let mut out = format!("{} {} {}\n", sc.universe_size, sc.t(), sc.k);
    for s in &sc.family {
        if s.is_empty() {
            out.push_str("-\n");
        } else {
            let line: Vec<String> = s.iter().map(|e| (e + 1).to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
    }
    out
}
