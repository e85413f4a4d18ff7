//! Resolution of the Coulomb operator in Laguerre-based potentials.
//!
//! With h_n(x) = √2 L_n(2x) e^{−x} complete on [0, ∞),
//!
//!   1/r₁₂ = 8 Σ_{nlm} V_nl(r₁) V_nl(r₂) S_lm(r̂₁) S_lm(r̂₂),
//!
//! about any origin, so a repulsion integral becomes a sum of products of
//! overlap-like auxiliaries ⟨ψ_a ψ_b V_nl S_lm⟩ that each involve only the
//! centers of one density and the origin.

mod assembly;
mod auxiliary;
mod potential;

pub use assembly::{
    auxiliary, contract, contract_trace, eri_resolution, origin_center, schwarz_bound, AuxiliaryTensor, PotentialOrigin, ResolutionConfig,
    ResolutionEngine, ResolutionEri, ResolutionPotential, TraceStep,
};
pub use potential::{h_fn, potential_v, potential_v0, potential_v_all, potential_v_hankel, VTable};
pub use auxiliary::{pair_auxiliaries, AuxShape};
