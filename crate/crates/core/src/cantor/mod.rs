//! The Cantor sets attached to `T_N`, the 2-adic odometer, and the address
//! map relating them.

mod conjugacy;
mod content;
mod spec;
mod vdc;
mod word;

pub use conjugacy::{
    classify, key_translation, sample_words, tn_spec, verify_conjugacy, verify_key_lemma,
    CheckReport, Classification,
};
pub use content::{content_bound, ContentBound};
pub use spec::{
    address, h_eval, interval_of_word, AddressResult, CantorSpec, TnCantorSpec, WordInterval,
    DEFAULT_DEPTH, MAX_DEPTH,
};
pub use vdc::{dyadic_spec, vdc_conjugacy_check, vdc_eval, VdcCheck};
pub use word::{odometer_step, word_step, AdicSeq, Tail, Word};
