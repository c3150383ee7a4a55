use serde::{Deserialize, Serialize};

use super::GadgetInstance;
use crate::error::{Error, Result};
use crate::oracle::{solve_possible_winner, solve_set_cover, verify_cover, verify_pw_witness, SetCoverInstance, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub rule: String,
    pub set_cover: bool,
    pub possible_winner: bool,
    /// Leaves the possible-winner search visited.
    pub work: u128,
    /// For YES instances: whether the forward extension makes c win.
    pub forward_witness: Option<bool>,
    /// Cover read off the possible-winner witness, in original indices.
    pub extracted_cover: Option<Vec<usize>>,
    pub extracted_cover_valid: Option<bool>,
}

impl ReductionReport {
    pub fn equivalent(&self) -> bool {
        self.set_cover == self.possible_winner
    }

    /// Equal verdicts and every produced witness checks out.
    pub fn passed(&self) -> bool {
        self.equivalent() && self.forward_witness != Some(false) && self.extracted_cover_valid != Some(false)
    }
}

/// Solves both sides and cross-checks the witnesses in both directions.
pub fn verify_reduction(sc: &SetCoverInstance, gi: &GadgetInstance, budget: u64) -> Result<ReductionReport> {
    if gi.provenance.original != *sc {
        return Err(Error::InvalidArgument("gadget was generated from a different instance".into()));
    }
    let cover = solve_set_cover(sc);
    let pw = solve_possible_winner(&gi.pw, budget)?;
    let forward_witness = match &cover.witness {
        Some(Witness::Cover(c)) => Some(verify_pw_witness(&gi.pw, &gi.forward_witness(c)?)?),
        _ => None,
    };
    let extracted_cover = match &pw.witness {
        Some(Witness::Extensions(ext)) => gi.extract_cover(ext).ok(),
        _ => None,
    };
    let extracted_cover_valid = match (&pw.witness, &extracted_cover) {
        (Some(_), Some(c)) => Some(verify_cover(sc, c)?),
        (Some(_), None) => Some(false),
        _ => None,
    };
    Ok(ReductionReport {
        rule: gi.rule.to_string(),
        set_cover: cover.answer,
        possible_winner: pw.answer,
        work: pw.work,
        forward_witness,
        extracted_cover,
        extracted_cover_valid,
    })
}
