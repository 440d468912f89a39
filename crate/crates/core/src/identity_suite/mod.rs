//! Exact identities and auxiliary congruence lemmas, each addressable by a
//! stable name.

pub mod identities;
pub mod lemmas;

pub use identities::{check_recurrence, eval_identity, run_identities, IdentityDomain, IdentityId, IdentityResult};
pub use lemmas::{check_lemma_congruence, run_lemmas, LemmaContext, LemmaDomain, LemmaId, LemmaResult};
