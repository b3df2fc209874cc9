//! Combinatorial periodic Floer homology for monotone twist maps of the
//! disc.
//!
//! Generators are labeled concave lattice paths, the differential rounds
//! corners while losing one hyperbolic label, gradings come from signed
//! lattice-point counts, and actions from the twist profile `h(z)`. On
//! top of the chain complex sit the spectral invariants `c_{d,k}`, their
//! certified large-degree brackets, the order-d action spectrum, and the
//! Calabi-asymptotics experiments.

pub mod action;
pub mod asymptotics;
pub mod complex;
pub mod demo;
pub mod gf2;
pub mod index;
pub mod path;
pub mod profile;
pub mod shapes;
pub mod spectral;
pub mod spectrum;
pub mod value;

pub use action::{edge_action, path_action, path_action_breakdown, ActionValue};
pub use complex::{
    differential, enumerate, homology_rank, min_max, roundings, ChainWindow, DifferentialMatrix,
    GeneratorSet,
};
pub use index::{count_j, index, pick_check, IndexReport, PickOutcome};
pub use path::{from_orbit_set, to_orbit_set, validate, Edge, Label, LatticePath, OrbitId, Slope};
pub use profile::{load_profile, DiscTwist, Poly, ProfileError, TwistProfile};
pub use spectral::{c_dk_bracket, c_dk_exact, Bracket, SpectralTable};
pub use spectrum::{spec_d, spectrality_check, SpectrumWindow};
pub use value::{Value, Q};
