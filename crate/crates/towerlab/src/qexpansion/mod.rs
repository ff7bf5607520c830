//! Exact q-expansions on the `q^(1/24)` grid, eta quotients, the registry of
//! Hauptmoduln, and the identities relating them.

mod eta;
mod hauptmodul;
mod identities;
pub mod rational;
mod rational_identities;
mod series;

pub use eta::{eta_series, EtaQuotient};
pub use hauptmodul::{hauptmodul_quotient, hauptmodul_series, HAUPTMODUL_NAMES};
pub use identities::{
    find_qidentity, h2_from_xi_swapped_signs, qidentity_registry, verify_qidentity, IdentityReport, QIdentity,
    Status, MIN_IDENTITY_PREC,
};
pub use rational::{MPoly, QPoly, RationalExpr};
pub use rational_identities::{rational_identity_ids, verify_rational_identity, RationalReport};
pub use series::{QSeries, EXACT, GRID};
