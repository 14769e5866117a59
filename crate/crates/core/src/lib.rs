//! Magnus expansions of free-group words, membership in the lower central,
//! p-Zassenhaus and lower p-central filtrations, and kernel intersections of
//! unipotent matrix representations.

pub mod error;
pub mod filtration;
pub mod finite_series;
pub mod kerint;
pub mod ring;
pub mod series;
pub mod unipotent;
pub mod word;

pub use error::{Error, Result};
pub use filtration::{
    filtration_generators, filtration_member, first_violation, in_l, membership_violation,
    FiltrationKind, GeneratorBudget, Violation,
};
pub use finite_series::{
    filtration_series_finite, nilpotency_probe, series_report, ElementSet, FiniteGroupTable,
    FiniteSeries, SeriesReport,
};
pub use kerint::{
    cross_validate, enumerate_homs, kerint_finite, kerint_witness, killed_by_homs, witness_family,
    witness_hom, CrossValidation, KerIntMode, KerIntReport, DEFAULT_CAP,
};
pub use ring::{ring_arith, ArithOp, IdealChain, RingElement, RingSpec, Theta};
pub use series::{magnus_expand, IndexSequence, TruncatedSeries};
pub use unipotent::{
    enumerate_group, group_order, hom_eval, in_band, mat_mul, phi_hat, unipotent_inverse,
    GroupDescriptor, GroupHom, SquareMatrix, UnipotentMatrix,
};
pub use word::{
    enumerate_reduced, random_reduced, reduced_word_count, Alphabet, Generator, Letter, Word,
};
