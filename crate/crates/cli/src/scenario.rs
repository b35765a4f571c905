//! JSON run description. Units are fixed by field name; see the README.

use std::path::Path;

use magnon_gate::gatesim::PulseMode;
use magnon_gate::{
    ChainLayout64, CouplingParams64, DispersionModel64, DriveSchedule64, DriveSegment, GateHamiltonian64,
    PumpParams64, ZeemanModel64,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const BENCHMARK_SCENARIO: &str = include_str!("../scenarios/benchmark.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub dispersion: DispersionBlock,
    pub zeeman: ZeemanBlock,
    pub coupling: CouplingBlock,
    pub pump: PumpBlock,
    pub layout: LayoutBlock,
    #[serde(default)]
    pub gate: GateBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionBlock {
    pub offset_k: f64,
    pub exchange_k: f64,
    pub ratio_j1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeemanBlock {
    pub gap_k: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingBlock {
    pub gamma_n_mhz_per_koe: f64,
    pub hyperfine_koe_per_mub: f64,
    pub sites: usize,
    pub separation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentBlock {
    pub duration_s: f64,
    pub excitation_rate_per_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpBlock {
    pub excitation_rate_per_s: f64,
    pub lifetime_s: f64,
    #[serde(default)]
    pub initial_n0: f64,
    #[serde(default = "default_samples")]
    pub samples_per_segment: usize,
    #[serde(default)]
    pub schedule: Vec<SegmentBlock>,
}

fn default_samples() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutBlock {
    pub spacing: f64,
    pub base_field_koe: f64,
    pub gradient_koe_per_unit: f64,
    pub qubit_positions: Vec<i64>,
    pub extent: (i64, i64),
    #[serde(default)]
    pub control: usize,
    #[serde(default = "default_target")]
    pub target: usize,
    /// Measured packet field at the target; the A∥·n0/N estimate is used when absent.
    #[serde(default)]
    pub h_tr_koe: Option<f64>,
}

fn default_target() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseModeName {
    #[default]
    Ideal,
    Finite,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateBlock {
    /// Overrides the computed W_ij.
    #[serde(default)]
    pub coupling_hz: Option<f64>,
    #[serde(default)]
    pub detuning_control_hz: f64,
    #[serde(default)]
    pub detuning_target_hz: f64,
    #[serde(default)]
    pub pulse_mode: PulseModeName,
    #[serde(default)]
    pub rabi_hz: Option<f64>,
}

/// Label a library error with the scenario field it came from.
fn at<T>(field: &str, r: magnon_gate::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Invalid { field: field.to_string(), source })
}

impl Scenario {
    pub fn benchmark() -> Self {
        Self::from_json(BENCHMARK_SCENARIO).expect("built-in scenario parses")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let scenario = Self::from_json(&text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn dispersion(&self) -> Result<DispersionModel64, CliError> {
        let d = &self.dispersion;
        at("dispersion", DispersionModel64::new(d.offset_k, d.exchange_k, d.ratio_j1))
    }

    pub fn zeeman(&self) -> Result<ZeemanModel64, CliError> {
        at("zeeman", ZeemanModel64::new(self.zeeman.gap_k, self.zeeman.g))
    }

    pub fn coupling(&self) -> Result<CouplingParams64, CliError> {
        let c = &self.coupling;
        at("coupling", CouplingParams64::new(c.gamma_n_mhz_per_koe, c.hyperfine_koe_per_mub, c.sites, c.separation))
    }

    pub fn pump(&self) -> Result<PumpParams64, CliError> {
        at("pump", PumpParams64::new(self.pump.excitation_rate_per_s, self.pump.lifetime_s))
    }

    /// The configured schedule, or the steady drive held for 10·T_s.
    pub fn schedule(&self) -> Result<DriveSchedule64, CliError> {
        let p = &self.pump;
        if p.schedule.is_empty() {
            return at("pump.schedule", DriveSchedule64::constant(10.0 * p.lifetime_s, p.excitation_rate_per_s));
        }
        at(
            "pump.schedule",
            DriveSchedule64::new(
                p.schedule
                    .iter()
                    .map(|s| DriveSegment { duration: s.duration_s, excitation_rate: s.excitation_rate_per_s })
                    .collect(),
            ),
        )
    }

    pub fn layout(&self) -> Result<ChainLayout64, CliError> {
        let l = &self.layout;
        let layout = at(
            "layout",
            ChainLayout64::new(l.spacing, l.base_field_koe, l.gradient_koe_per_unit, l.qubit_positions.clone(), l.extent),
        )?;
        for (name, idx) in [("layout.control", l.control), ("layout.target", l.target)] {
            at(name, layout.qubit_position(idx))?;
        }
        if l.control == l.target {
            return Err(CliError::Usage("layout.control and layout.target must differ".into()));
        }
        Ok(layout)
    }

    pub fn gate_hamiltonian(&self, coupling_hz: f64) -> Result<GateHamiltonian64, CliError> {
        let g = &self.gate;
        at("gate", GateHamiltonian64::new(coupling_hz, g.detuning_control_hz, g.detuning_target_hz))
    }

    pub fn pulse_mode(&self) -> Result<PulseMode<f64>, CliError> {
        match (self.gate.pulse_mode, self.gate.rabi_hz) {
            (PulseModeName::Ideal, _) => Ok(PulseMode::Ideal),
            (PulseModeName::Finite, Some(rabi_hz)) => Ok(PulseMode::Finite { rabi_hz }),
            (PulseModeName::Finite, None) => Err(CliError::Usage("gate.rabi_hz is required for finite pulses".into())),
        }
    }

    /// Check every block against its module invariants.
    pub fn validate(&self) -> Result<(), CliError> {
        self.dispersion()?;
        self.zeeman()?;
        self.coupling()?;
        self.pump()?;
        self.schedule()?;
        self.layout()?;
        self.pulse_mode()?;
        self.gate_hamiltonian(self.gate.coupling_hz.unwrap_or(0.0))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_scenario_is_valid() {
        let s = Scenario::benchmark();
        s.validate().unwrap();
        assert_eq!(s.coupling.sites, 20);
        assert!((s.pump().unwrap().steady_state_population() / 20.0 - 0.01).abs() < 1e-15);
    }

    #[test]
    fn invalid_field_is_named() {
        let mut s = Scenario::benchmark();
        s.dispersion.exchange_k = -1.0;
        let err = s.validate().unwrap_err().to_string();
        assert!(err.contains("dispersion"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = BENCHMARK_SCENARIO.replacen("\"offset_k\"", "\"offset_kelvin\"", 1);
        assert!(matches!(Scenario::from_json(&text), Err(CliError::Usage(_))));
    }
}
