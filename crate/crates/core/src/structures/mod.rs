//! Restriction and range structures on span quotients, total maps, and the
//! unit/counit data of the partial map adjunction.

mod adjunction;
mod restriction;
mod total;

pub use adjunction::{
    counit_epsilon, eta_naturality, lemma91_check, par, par_functor, triangles, unit_eta,
    EpsilonReport, EtaReport, Lemma91Report, ParData, TriangleReport,
};
pub use restriction::{
    bar_welldefined_on_sect, check_axioms, find_splitting, range_on_quotient,
    restriction_on_quotient, AxiomMode, AxiomReport, AxiomVerdict, RangeCat, RestrictionCat,
    SectAudit,
};
pub use total::{
    restricted_inverses, total, total_and_classes, wide_subcategory, Subcategory, TotalData,
    TotalSummary,
};
