//! Result documents: a fixed text layout plus a JSON rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use kemeny_core::{kemeny_score, kt_distance_linear, LinearOrder, Profile};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Solved,
    Yes,
    No,
    Valid,
    Invalid,
}

impl Decision {
    pub fn label(self) -> &'static str {
        match self {
            Decision::Solved => "SOLVED",
            Decision::Yes => "YES",
            Decision::No => "NO",
            Decision::Valid => "VALID",
            Decision::Invalid => "INVALID",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Solved | Decision::Yes | Decision::Valid => 0,
            Decision::No | Decision::Invalid => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub candidates: usize,
    pub voters: u64,
    pub distinct_votes: usize,
    pub unanimity_pairs: usize,
    pub incomparable_pairs: usize,
    /// Width of the decomposition the solver used.
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub ranking: String,
    pub score: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultDocument {
    pub command: String,
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSummary>,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<u64>,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diversity: Option<u64>,
    /// Pairwise distances between witnesses, as a full matrix.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub distances: Vec<Vec<u64>>,
    pub details: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ResultDocument {
    pub fn new(command: &str, decision: Decision) -> Self {
        ResultDocument {
            command: command.to_string(),
            decision,
            instance: None,
            parameters: BTreeMap::new(),
            optimum: None,
            witnesses: Vec::new(),
            diversity: None,
            distances: Vec::new(),
            details: BTreeMap::new(),
            reason: None,
            sections: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.insert(key.to_string(), value.to_string());
    }

    /// Adds the witnesses with their scores, and the distance table when
    /// there are several.
    pub fn set_witnesses(
        &mut self,
        profile: &Profile,
        rankings: &[LinearOrder],
    ) -> Result<(), CliError> {
        let c = profile.candidates();
        self.witnesses = rankings
            .iter()
            .map(|t| {
                Ok(Witness {
                    ranking: c.format_ranking(t),
                    score: kemeny_score(profile, t)?,
                })
            })
            .collect::<Result<_, CliError>>()?;
        if rankings.len() >= 2 {
            self.distances = rankings
                .iter()
                .map(|a| rankings.iter().map(|b| kt_distance_linear(a, b)).collect())
                .collect::<Result<_, _>>()?;
        }
        Ok(())
    }

    /// Recomputes every score and distance from the witness rankings and
    /// checks them against the reported values.
    pub fn verify(&self, profile: &Profile) -> Result<(), CliError> {
        let c = profile.candidates();
        let mut rankings = Vec::with_capacity(self.witnesses.len());
        for w in &self.witnesses {
            let perm = w
                .ranking
                .split('<')
                .map(|name| c.index_of(name))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| {
                    CliError::Internal(format!("witness `{}` has unknown names", w.ranking))
                })?;
            let t = LinearOrder::new(perm)?;
            if kemeny_score(profile, &t)? != w.score {
                return Err(CliError::Internal(format!(
                    "witness `{}` score mismatch",
                    w.ranking
                )));
            }
            rankings.push(t);
        }
        let mut total = 0;
        for i in 0..rankings.len() {
            for j in 0..rankings.len() {
                let d = kt_distance_linear(&rankings[i], &rankings[j])?;
                if !self.distances.is_empty() && self.distances[i][j] != d {
                    return Err(CliError::Internal("distance table mismatch".into()));
                }
                if i < j {
                    total += d;
                }
            }
        }
        if self.diversity.is_some_and(|d| d != total) {
            return Err(CliError::Internal("diversity mismatch".into()));
        }
        if let Some(opt) = self.optimum {
            if self.decision == Decision::Solved && self.witnesses.iter().any(|w| w.score != opt) {
                return Err(CliError::Internal(
                    "witness score differs from the optimum".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "decision: {}", self.decision.label());
        if let Some(s) = &self.instance {
            out.push_str("instance:\n");
            let _ = writeln!(out, "  candidates: {}", s.candidates);
            let _ = writeln!(out, "  voters: {}", s.voters);
            let _ = writeln!(out, "  distinct-votes: {}", s.distinct_votes);
            let _ = writeln!(out, "  unanimity-pairs: {}", s.unanimity_pairs);
            let _ = writeln!(out, "  incomparable-pairs: {}", s.incomparable_pairs);
            let _ = writeln!(out, "  width: {}", s.width);
        }
        if !self.parameters.is_empty() {
            out.push_str("parameters:\n");
            for (k, v) in &self.parameters {
                let _ = writeln!(out, "  {k}: {v}");
            }
        }
        if let Some(o) = self.optimum {
            let _ = writeln!(out, "optimum: {o}");
        }
        if !self.witnesses.is_empty() {
            out.push_str("witnesses:\n");
            for (i, w) in self.witnesses.iter().enumerate() {
                let _ = writeln!(out, "  {}. {} (score {})", i + 1, w.ranking, w.score);
            }
        }
        if let Some(d) = self.diversity {
            let _ = writeln!(out, "diversity: {d}");
        }
        if !self.distances.is_empty() {
            out.push_str("distances:\n");
            for i in 0..self.distances.len() {
                for j in i + 1..self.distances.len() {
                    let _ = writeln!(out, "  {}-{}: {}", i + 1, j + 1, self.distances[i][j]);
                }
            }
        }
        if !self.details.is_empty() {
            out.push_str("details:\n");
            for (k, v) in &self.details {
                let _ = writeln!(out, "  {k}: {v}");
            }
        }
        if let Some(r) = &self.reason {
            let _ = writeln!(out, "reason: {r}");
        }
        for s in &self.sections {
            let _ = writeln!(out, "{}:", s.title);
            for l in &s.lines {
                let _ = writeln!(out, "  {l}");
            }
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "timing-ms: {t:.3}");
        }
        out
    }
}
