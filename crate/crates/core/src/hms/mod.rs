//! HMS unawareness models: a complete lattice of disjoint state spaces
//! indexed by atom subsets, commuting surjective projections, an event
//! algebra over up-closed sets, possibility correspondences, awareness
//! functions, and the knowledge/awareness operators on events.

mod event;
mod frame;
mod io;
mod model;
mod ops;
#[cfg(test)]
pub(crate) mod testutil;
mod validate;

pub use event::{
    canonicalize as canonicalize_event, canonicalize_minimal, enumerate_events, event_intersect,
    event_negate, event_union, Event, StateSet,
};
pub use frame::{HmsFrame, StateId};
pub use io::{hms_from_json, hms_to_json};
pub use model::{AwarenessFn, ExplicitPc, HmsError, HmsKind, HmsModel, ImplicitPc, PiTarget};
pub use ops::{a_op, a_star_op, k_op, l_op, u_op};
pub use validate::{
    derive_pi_star, validate_alpha, validate_frame, validate_hms, validate_lambda, validate_pi,
    validate_valuation,
};
