//! Desk-scale numerical checks: mixed coefficient norms, operator norms of
//! multilinear forms, certified ratios and extremal search.

pub mod hadamard;
pub mod norms;
pub mod ratio;
pub mod search;
pub mod tensor;

pub use hadamard::hadamard_block_form;
pub use norms::{
    ascent_trace, mixed_norm, sup_norm_ascent, sup_norm_exact_real_linf, sup_norm_upper_holder,
    AscentConfig, NormEstimate, NormKind, DEFAULT_CAP, HARD_CAP,
};
pub use ratio::{applicable_upper_bound, certified_ratio, RatioReport};
pub use search::{search_extremal, SearchResult};
pub use tensor::{CoefficientTensor, Entries};
