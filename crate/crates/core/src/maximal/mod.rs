//! Maximal functions along sequences, packet-based growth estimates and the
//! three-piece envelope decomposition.

pub mod decompose;
pub mod packet;
pub mod profile;

pub use decompose::{decompose_e123, DecompositionReport};
pub use packet::{growth_exponent_fit, packet_ratio, GrowthFit, PacketProbe, ProbeFamily};
pub use profile::{
    continuum_maximal, maximal_profile, maximal_profile_reference, ratio_hs, weak_level_measure,
    MaximalProfile,
};
