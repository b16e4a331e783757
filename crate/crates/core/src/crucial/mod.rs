//! Subresultants, strong transcendence and the crucial lemma.

pub mod lemma;
pub mod subresultant;

pub use lemma::{
    crucial_lemma, strong_transcendence_check, verify_crucial, CrucialBranch, CrucialWitness,
    StrongTranscendenceReport, Transcendence,
};
pub use subresultant::{determinant_polynomial, subresultant_chain, SubresultantChain};
