//! The vote-file format.
//!
//! ```text
//! # comments run to the end of the line
//! candidates: A,B,C,D
//! 10 x A=B<C        # multiplicity, then buckets: `=` ties, `<` orders
//! B<A<C<D           # multiplicity defaults to 1
//! pairs: A<C, B<D   # explicit pairs, closed transitively
//! ```
//!
//! In bucket syntax, candidates left out of a vote are incomparable to
//! every other candidate in that vote.

use std::fmt;

use kemeny_core::{CandidateSet, PartialOrder, Profile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

const RESERVED: &[char] = &['<', '=', ',', '#', ':'];

fn parse_header(line: usize, rest: &str) -> Result<CandidateSet, ParseError> {
    let names: Vec<&str> = rest.split(',').map(str::trim).collect();
    for name in &names {
        if name.contains(RESERVED) || name.contains(char::is_whitespace) {
            return Err(err(
                line,
                format!("candidate name `{name}` contains a reserved character"),
            ));
        }
    }
    CandidateSet::new(names.iter().copied()).map_err(|e| err(line, e.to_string()))
}

fn lookup(line: usize, candidates: &CandidateSet, name: &str) -> Result<usize, ParseError> {
    candidates
        .index_of(name)
        .ok_or_else(|| err(line, format!("unknown candidate `{name}`")))
}

fn parse_multiplicity(body: &str) -> (Option<&str>, &str) {
    if let Some((num, rest)) = body.split_once(char::is_whitespace) {
        if !num.is_empty() && num.bytes().all(|b| b.is_ascii_digit()) {
            let rest = rest.trim_start();
            if let Some(after) = rest.strip_prefix('x') {
                if after.starts_with(char::is_whitespace) {
                    return (Some(num), after.trim_start());
                }
            }
        }
    }
    (None, body)
}

fn parse_vote(
    line: usize,
    candidates: &CandidateSet,
    body: &str,
) -> Result<PartialOrder, ParseError> {
    let n = candidates.len();
    if let Some(rest) = body.strip_prefix("pairs:") {
        let mut pairs = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let parts: Vec<&str> = item.split('<').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(err(line, format!("expected `X<Y`, found `{item}`")));
            }
            let (x, y) = (
                lookup(line, candidates, parts[0])?,
                lookup(line, candidates, parts[1])?,
            );
            if x == y {
                return Err(err(
                    line,
                    format!("pair `{item}` relates a candidate to itself"),
                ));
            }
            pairs.push((x, y));
        }
        return PartialOrder::from_pairs(n, pairs)
            .map_err(|_| err(line, "the pairs contain a cycle"));
    }
    let mut buckets = Vec::new();
    for bucket in body.split('<') {
        let members = bucket
            .split('=')
            .map(|name| lookup(line, candidates, name.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        buckets.push(members);
    }
    PartialOrder::from_buckets(n, &buckets).map_err(|_| err(line, "a candidate appears twice"))
}

pub fn parse_votes(text: &str) -> Result<Profile, ParseError> {
    let mut candidates: Option<CandidateSet> = None;
    let mut votes = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(cands) = &candidates else {
            let rest = content
                .strip_prefix("candidates:")
                .ok_or_else(|| err(line, "expected `candidates:` header"))?;
            candidates = Some(parse_header(line, rest)?);
            continue;
        };
        if content.starts_with("candidates:") {
            return Err(err(line, "second `candidates:` header"));
        }
        let (mult, body) = parse_multiplicity(content);
        let mult = match mult {
            None => 1,
            Some(m) => m
                .parse::<u64>()
                .ok()
                .filter(|&m| m > 0)
                .ok_or_else(|| err(line, format!("invalid multiplicity `{m}`")))?,
        };
        votes.push((parse_vote(line, cands, body)?, mult));
    }
    let candidates = candidates.ok_or_else(|| err(last.max(1), "missing `candidates:` header"))?;
    if votes.is_empty() {
        return Err(err(last.max(1), "the profile has no votes"));
    }
    Profile::new(candidates, votes).map_err(|e| err(last, e.to_string()))
}

/// Formats one vote: bucket syntax when it is a weak order over all
/// candidates, otherwise its cover pairs.
pub fn format_vote(candidates: &CandidateSet, vote: &PartialOrder) -> String {
    match vote.weak_order_buckets() {
        Some(buckets) => buckets
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&v| candidates.name(v))
                    .collect::<Vec<_>>()
                    .join("=")
            })
            .collect::<Vec<_>>()
            .join("<"),
        None => {
            let pairs: Vec<String> = vote
                .cover_pairs()
                .iter()
                .map(|&(x, y)| format!("{}<{}", candidates.name(x), candidates.name(y)))
                .collect();
            format!("pairs: {}", pairs.join(", "))
        }
    }
}

pub fn serialize_votes(profile: &Profile) -> String {
    let c = profile.candidates();
    let mut out = format!("candidates: {}\n", c.names().join(","));
    for (vote, mult) in profile.votes() {
        if *mult != 1 {
            out.push_str(&format!("{mult} x "));
        }
        out.push_str(&format_vote(c, vote));
        out.push('\n');
    }
    out
}
