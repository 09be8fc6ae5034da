//! Unbounded-denominator certificates and denominator profiles.

pub mod certificate;
pub mod growth;
pub mod profile;

pub use certificate::{certify_eta_root_ubd, growth_witness, reconfirm_certificate, EtaRootOutcome, UbdCertificate};
pub use growth::{verify_inverse_growth_law, GrowthLawReport};
pub use profile::{clear_denominators, denominator_profile, first_nonintegral, neg_ord, BoundedDenominatorReport, DenominatorProfile};
