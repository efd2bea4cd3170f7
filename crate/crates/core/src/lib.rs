//! Exact verification kernels for Erdős' elementary proof of Bertrand's
//! postulate: prime tables, big-integer primorials and central binomials,
//! Legendre valuations, per-`n` lemma checkers with certified rounding,
//! prime ladders, and the Ruth–Aaron / abundant-number side computations.

pub mod bertrand;
pub mod bignat;
pub mod certificate;
pub mod certified;
mod decimal;
pub mod error;
pub mod extras;
pub mod lemmas;
pub mod par;
pub mod primes;
pub mod report;
pub mod valuations;

pub use bertrand::{
    bertrand_prime, greedy_ladder, two_primes_mod4, verify_bertrand_range, verify_ladder,
    verify_two_primes_range, BertrandForm, LadderChain, LadderVerdict, LadderViolation, TwoPrimes,
    ERDOS_LADDER,
};
pub use bignat::{central_binomial, primorial, BigNat};
pub use certificate::{Certificate, Verdict};
pub use error::{Error, Result};
pub use extras::{abundant_density, is_abundant, ruth_aaron_pairs, DensityEstimate, RuthAaronPair};
pub use lemmas::{Verifier, VerifyConfig};
pub use primes::{sieve_build, Factorization, PrimeTable, SopfMode};
pub use report::{LemmaId, LemmaReport, Method, RangeCertificate, Statement, Status, Witness};
pub use valuations::{central_binom_valuation, decompose, legendre_valuation, RangeDecomposition};

/// Version string recorded in certificates.
pub const TOOL_VERSION: &str = concat!("erdoslab/", env!("CARGO_PKG_VERSION"));
