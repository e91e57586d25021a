pub mod bound;
pub mod lemma;
pub mod prop;
pub mod radial;
pub mod sweep;
pub mod tension;
