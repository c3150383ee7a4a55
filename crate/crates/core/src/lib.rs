//! Elections, voting rules, brute-force oracles, coalitional-manipulation
//! kernels and set-cover to possible-winner gadget generators.

pub mod election;
pub mod error;
pub mod gadgets;
pub mod kernels;
pub mod oracle;
pub mod realize;
pub mod rules;
mod tally;

pub use election::{
    count_linear_extensions, is_extension, linear_extensions, majority_graph, pairwise_margin,
    CandidateSet, LinearOrder, PartialOrder, Profile, WeightedMajorityGraph,
};
pub use error::{Error, Result};
pub use oracle::{
    solve_coalitional_manipulation, solve_possible_winner, solve_set_cover, verify_witness,
    CMInstance, OracleVerdict, PWInstance, SetCoverInstance, Witness,
};
pub use realize::{realize_scores, realize_wmg, MarginTarget, ScoreTarget};
pub use rules::{normalize, winners, Rule, ScoreVector, StrictFamily, WinnerReport};
pub use gadgets::{generate, GadgetInstance, GadgetRule};
pub use kernels::{kernelize, KernelKind, KernelOutcome};
