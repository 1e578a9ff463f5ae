//! Presentations of π1, abelianization, and word-level certificates.

pub mod claims;
pub mod obstruction;
pub mod presentation;
pub mod snf;
pub mod word;

pub use claims::{verify_claims, ClaimsReport};
pub use obstruction::{free_obstruction, obstruct_presentation, rank_lower_bound, ObstructionCertificate, Verdict};
pub use presentation::{fundamental_group, presentation, spanning_tree, FundamentalError, Presentation};
pub use snf::{abelianization, smith_normal_form, AbelianGroup};
pub use word::{Letter, Word};
