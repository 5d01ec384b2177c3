//! Numerical and structural invariants of bigraded modules.

pub mod ass;
pub mod cd;
pub mod content;
pub mod depth;
pub mod generic;
pub mod local;
pub mod regularity;

pub use ass::{ass_candidates, ass_primes, h0_support_dim, is_associated, localize_monomial, AssResult, Localized, PrimeIdeal};
pub use cd::{cd_identities_check, cd_wrt, CdValue, DepthCdResult, IdentityCheck, IdentityInputs};
pub use content::{content, content_module, dm_check, dm_check_module, fitting_ideal, DmReport};
pub use depth::{depth_ext_oracle, depth_wrt, is_nonzerodivisor, northcott_certificate, DepthResult, NorthcottOutcome};
pub use generic::{generic_coordinates, linear_change, CoordinateChoice, GenericCoordinates};
pub use local::{a0_by_saturation, a_invariant, depth_s_plus, h0_s_plus, AInvariant, AInvariantBound, LocalCohomology};
pub use regularity::{regularity, regularity_with, MethodValue, RegularityMethod, RegularityResult};
