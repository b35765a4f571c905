//! Magnon-mediated nuclear coupling in a gapped 1-D antiferromagnet, and the
//! switchable controlled-NOT gate it enables.
//!
//! The physics is generic over the floating-point scalar ([`Real`]); the `*64`
//! aliases below fix it to `f64`, which is what the CLI uses.
//!
//! Units are positional throughout: exchange constants and gaps in kelvin,
//! fields in kOe, nuclear gyromagnetic ratios as γ/2π in MHz/kOe, hyperfine
//! constants in kOe/μ_B, times in seconds. Every energy the library returns is
//! an ordinary frequency in Hz unless the name says otherwise.

pub mod addressing;
pub mod coupling;
pub mod dispersion;
mod error;
pub mod gatesim;
pub mod pump;
pub mod quantities;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use addressing::{ChainLayout, LocalFields, SpectralLine, TargetSpectrum};
pub use coupling::{CouplingParams, MagnonPopulations};
pub use dispersion::{DispersionModel, TripletBranch, ZeemanModel};
pub use gatesim::{
    Axis, GateHamiltonian, PulseEvent, PulseMode, PulseSequence, Qubit, RegisterState,
    TruthTable, Unitary,
};
pub use pump::{DriveSchedule, DriveSegment, PopulationTrace, PumpParams};
pub use quantities::ConstantsTable;

pub type ConstantsTable64 = ConstantsTable<f64>;
pub type DispersionModel64 = DispersionModel<f64>;
pub type ZeemanModel64 = ZeemanModel<f64>;
pub type CouplingParams64 = CouplingParams<f64>;
pub type MagnonPopulations64 = MagnonPopulations<f64>;
pub type PumpParams64 = PumpParams<f64>;
pub type DriveSchedule64 = DriveSchedule<f64>;
pub type PopulationTrace64 = PopulationTrace<f64>;
pub type ChainLayout64 = ChainLayout<f64>;
pub type LocalFields64 = LocalFields<f64>;
pub type GateHamiltonian64 = GateHamiltonian<f64>;
pub type PulseSequence64 = PulseSequence<f64>;
pub type RegisterState64 = RegisterState<f64>;
pub type Unitary64 = Unitary<f64>;
pub type TruthTable64 = TruthTable<f64>;
