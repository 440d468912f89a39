//! Exact computation of generalized central trinomial coefficients and
//! verification of congruences for weighted sums of their fourth powers,
//! together with the binomial identities and auxiliary congruences those
//! results rest on.
//!
//! - [`modmath`]: residues modulo `p^M`, valued binomials, quadratic extensions
//! - [`sequences`]: `T_n(b, c)`, Legendre polynomial values, harmonic numbers
//! - [`special_sums`]: Fermat quotients, `Q_p`, finite polylogarithms, `S^(2)_{p-1}`
//! - [`verifier`]: the fourth-power congruences and their sweeps
//! - [`identity_suite`]: exact identities and auxiliary congruence lemmas
//! - [`report`] / [`cli`]: report emission and the command-line front end

pub mod cli;
pub mod error;
pub mod exact;
pub mod identity_suite;
pub mod modmath;
pub mod report;
pub mod sequences;
pub mod special_sums;
pub mod verifier;

pub use error::{Error, Result};
pub use modmath::{legendre_symbol, ArithError, Modulus, QuadExtElem, Residue, ResidueRing, ValuedResidue};
pub use sequences::{CaseTag, SequenceWindow, TrinomialParams};
pub use verifier::{check_congruence, CongruenceTarget, TargetArgs, VerificationRecord};
