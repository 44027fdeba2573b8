//! Exact integer group determinants of finite abelian groups.
//!
//! The group determinant of `G` is `det(x_{g - h})` over `g, h` in `G`, with
//! one integer variable per element. Elements of `Z/n_1 x ... x Z/n_t` are
//! indexed in mixed radix with the last factor varying fastest, and the
//! circulant `C_n` is the case `G = Z/n`, where `xs[m]` is the variable at
//! residue `m`.

pub mod boxes;
pub mod characters;
pub mod cyclotomic;
pub mod dedekind;
pub mod det;
pub mod error;
pub mod group;
pub mod parity;
pub mod search;

pub use boxes::{AssignmentBox, RunOptions, DEFAULT_BUDGET};
pub use characters::{enumerate_characters, Character};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicInt};
pub use dedekind::{
    dedekind_product, laquer_split, laquer_vs_theorem1, theorem1_factors, theorem1_integer_factors,
    FactorizationReport, Split,
};
pub use det::{circulant_det, group_determinant, Assignment, DetKernel, Matrix};
pub use error::{Error, Result};
pub use group::{crt_decompose, AbelianGroup, GroupElement};
pub use parity::{
    check_factor_congruence, check_theorem2, known_m, theorem2_bound, two_adic_valuation,
    verify_theorem2, Theorem2Summary, Verdict,
};
pub use search::{
    check_even_divisibility, check_membership, find_witness, search_values, MembershipSpec,
    SearchOptions, SearchReport,
};
