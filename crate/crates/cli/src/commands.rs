use magnon_gate::addressing::{estimate_triplet_field, target_frequencies};
use magnon_gate::coupling::{coupling_vs_distance, lattice_sum, range_function_k0};
use magnon_gate::dispersion::TripletBranch;
use magnon_gate::gatesim::{cn_sequence, gate_fidelity, ideal_cnot, sequence_unitary, truth_table, BASIS_LABELS};
use magnon_gate::pump::{coupling_schedule, evolve_population};
use magnon_gate::{LocalFields64, PulseEvent, PulseSequence64};

use crate::scenario::Scenario;
use crate::table::{Cell, Table};
use crate::{CliError, Overrides};

/// The reference coupling quoted for the built-in scenario, in Hz.
pub const REFERENCE_COUPLING_HZ: f64 = 15.0e3;

fn lib<T>(r: magnon_gate::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::Domain)
}

fn pumped_population(s: &Scenario, o: &Overrides) -> Result<f64, CliError> {
    match o.n0 {
        Some(n0) => Ok(n0),
        None => Ok(s.pump()?.steady_state_population()),
    }
}

fn coupling_hz(s: &Scenario, o: &Overrides) -> Result<f64, CliError> {
    lib(range_function_k0(&s.dispersion()?, pumped_population(s, o)?, &s.coupling()?))
}

pub fn dispersion(s: &Scenario, o: &Overrides) -> Result<Table, CliError> {
    let model = s.dispersion()?;
    let sites = o.sites.unwrap_or(s.coupling.sites);
    let mut t = Table::new(vec!["n", "k_over_pi", "energy_hz"]);
    for n in 0..=sites {
        let e = lib(model.magnon_energy(n, sites))?;
        t.push(vec![n.into(), (n as f64 / sites as f64).into(), e.into()]);
    }
    Ok(t)
}

pub fn levels(s: &Scenario, o: &Overrides) -> Result<Table, CliError> {
    let z = s.zeeman()?;
    if o.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    let mut t = Table::new(vec!["H_kOe", "E_m_minus1_hz", "E_m0_hz", "E_m_plus1_hz"]);
    for i in 0..o.steps {
        let h = o.h_min + (o.h_max - o.h_min) * i as f64 / (o.steps - 1) as f64;
        let mut row: Vec<Cell> = vec![h.into()];
        for b in TripletBranch::ALL {
            row.push(lib(z.triplet_level(b, h))?.into());
        }
        t.push(row);
    }
    Ok(t)
}

fn coupling_row(t: &mut Table, r: usize, w: f64) {
    t.push(vec![r.into(), w.into(), w.abs().into()]);
}

pub fn coupling(s: &Scenario, o: &Overrides) -> Result<Table, CliError> {
    let params = s.coupling()?;
    let params = params.with_separation(o.r.unwrap_or(params.separation()));
    let w = lib(range_function_k0(&s.dispersion()?, pumped_population(s, o)?, &params))?;
    let mut t = Table::new(vec!["r", "W_hz", "W_abs_hz"]);
    coupling_row(&mut t, params.separation(), w);
    Ok(t)
}

pub fn sweep(s: &Scenario, o: &Overrides) -> Result<Table, CliError> {
    let params = s.coupling()?;
    let r_max = o.r_max.unwrap_or(params.sites());
    let rows = lib(coupling_vs_distance(&s.dispersion()?, pumped_population(s, o)?, &params, r_max))?;
    let mut t = Table::new(vec!["r", "W_hz", "W_abs_hz"]);
    for row in rows {
        coupling_row(&mut t, row.separation, row.coupling_hz);
    }
    Ok(t)
}

pub fn pump(s: &Scenario, o: &Overrides) -> Result<Table, CliError> {
    let samples = o.samples.unwrap_or(s.pump.samples_per_segment);
    let trace = lib(evolve_population(s.pump.initial_n0, &s.schedule()?, s.pump()?.lifetime(), samples))?;
    let samples = lib(coupling_schedule(&trace, &s.dispersion()?, &s.coupling()?))?;
    let mut t = Table::new(vec!["t_s", "n0", "W_hz"]);
    for p in samples {
        t.push(vec![p.time.into(), p.population.into(), p.coupling_hz.into()]);
    }
    Ok(t)
}

pub fn address(s: &Scenario, o: &Overrides) -> Result<Table, CliError> {
    let layout = s.layout()?;
    let params = s.coupling()?;
    let n0 = pumped_population(s, o)?;
    let w = coupling_hz(s, o)?;
    let h_tr = s
        .layout
        .h_tr_koe
        .unwrap_or_else(|| estimate_triplet_field(params.hyperfine(), n0, params.sites()));
    let target_fields = lib(LocalFields64::from_coupling(h_tr, w, params.gamma_n()))?;
    let mut t = Table::new(vec!["qubit", "position", "field_kOe", "omega_plus_mhz", "omega_minus_mhz"]);
    for (i, &pos) in layout.qubits().iter().enumerate() {
        let fields = if i == s.layout.target { target_fields } else { LocalFields64::default() };
        let (plus, minus) = lib(target_frequencies(&layout, i, &fields, params.gamma_n()))?;
        t.push(vec![i.into(), pos.into(), lib(layout.qubit_field(i))?.into(), plus.into(), minus.into()]);
    }
    Ok(t)
}

pub fn gate(s: &Scenario, o: &Overrides) -> Result<Table, CliError> {
    let w = match o.w.or(s.gate.coupling_hz) {
        Some(w) => w,
        None => coupling_hz(s, o)?,
    };
    let mut seq = lib(cn_sequence(w))?;
    if let Some(tau) = o.tau {
        let events = seq
            .events()
            .iter()
            .map(|e| match e {
                PulseEvent::Free { .. } => PulseEvent::Free { duration: tau },
                other => *other,
            })
            .collect();
        seq = lib(PulseSequence64::new(events))?;
    }
    let h = s.gate_hamiltonian(w)?;
    let u = lib(sequence_unitary(&seq, &h, s.pulse_mode()?))?;
    let table = truth_table(&u);
    let mut t = Table::new(vec!["in_state", "p00", "p01", "p10", "p11"]);
    for (label, row) in BASIS_LABELS.iter().zip(table.rows) {
        let mut cells: Vec<Cell> = vec![(*label).into()];
        cells.extend(row.iter().map(|p| Cell::Num(*p)));
        t.push(cells);
    }
    let optimized = lib(gate_fidelity(&u, &ideal_cnot(), true))?;
    let raw = lib(gate_fidelity(&u, &ideal_cnot(), false))?;
    t.push(vec!["fidelity".into(), optimized.into(), raw.into(), Cell::Empty, Cell::Empty]);
    Ok(t)
}

/// Always runs the built-in scenario, whatever `--config` says.
pub fn reproduce() -> Result<Table, CliError> {
    let s = Scenario::benchmark();
    let params = s.coupling()?;
    let n0 = s.pump()?.steady_state_population();
    let w = lib(range_function_k0(&s.dispersion()?, n0, &params))?;
    let sum = lib(lattice_sum::<f64>(params.sites(), params.separation() as i64))?;
    let mut t = Table::new(vec!["quantity", "computed", "reference", "relative_deviation"]);
    t.push(vec![
        "W_ij_hz".into(),
        w.into(),
        REFERENCE_COUPLING_HZ.into(),
        ((w.abs() - REFERENCE_COUPLING_HZ) / REFERENCE_COUPLING_HZ).into(),
    ]);
    t.push(vec!["n0_over_N".into(), (n0 / params.sites() as f64).into(), 0.01.into(), Cell::Empty]);
    t.push(vec!["lattice_sum".into(), sum.into(), Cell::Empty, Cell::Empty]);
    Ok(t)
}
