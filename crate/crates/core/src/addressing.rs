//! Field-gradient geometry: which field each site sees, where the microwave
//! excites magnons, and the NMR lines of the target qubit.
//!
//! The gradient is linear, H(x) = H0 + G·x·a, with x in lattice units.

use crate::dispersion::{TripletBranch, ZeemanModel};
use crate::quantities::{mhz_to_hz, ConstantsTable};
use crate::scalar::{from_i64, from_usize, lit, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ChainLayout<T> {
    spacing: T,
    base_field: T,
    gradient: T,
    qubits: Vec<i64>,
    extent: (i64, i64),
}

impl<T: Real> ChainLayout<T> {
    /// `spacing` is a (any length unit), `base_field` H0 in kOe, `gradient` G
    /// in kOe per length unit. Qubit positions are lattice indices.
    pub fn new(spacing: T, base_field: T, gradient: T, qubits: Vec<i64>, extent: (i64, i64)) -> Result<Self> {
        if !(spacing.is_finite() && spacing > T::zero()) {
            return Err(Error::domain(format!("lattice spacing must be positive, got {spacing}")));
        }
        if !base_field.is_finite() || !gradient.is_finite() {
            return Err(Error::domain("base field and gradient must be finite"));
        }
        if extent.0 > extent.1 {
            return Err(Error::domain(format!("empty chain extent {extent:?}")));
        }
        if qubits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("qubit positions must be strictly increasing"));
        }
        if let Some(q) = qubits.iter().find(|q| **q < extent.0 || **q > extent.1) {
            return Err(Error::domain(format!("qubit at {q} lies outside the chain {extent:?}")));
        }
        Ok(Self { spacing, base_field, gradient, qubits, extent })
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn base_field(&self) -> T {
        self.base_field
    }

    pub fn gradient(&self) -> T {
        self.gradient
    }

    pub fn qubits(&self) -> &[i64] {
        &self.qubits
    }

    pub fn extent(&self) -> (i64, i64) {
        self.extent
    }

    /// Field step between neighbouring sites, G·a, in kOe.
    pub fn field_per_site(&self) -> T {
        self.gradient * self.spacing
    }

    pub fn qubit_position(&self, qubit: usize) -> Result<i64> {
        self.qubits
            .get(qubit)
            .copied()
            .ok_or_else(|| Error::domain(format!("no qubit #{qubit} (layout has {})", self.qubits.len())))
    }

    /// H0 + G·x·a in kOe.
    pub fn local_field(&self, x: T) -> Result<T> {
        let (lo, hi) = (from_i64::<T>(self.extent.0), from_i64::<T>(self.extent.1));
        if !(x >= lo && x <= hi) {
            return Err(Error::domain(format!("position {x} outside the chain {:?}", self.extent)));
        }
        Ok(self.base_field + self.gradient * x * self.spacing)
    }

    pub fn qubit_field(&self, qubit: usize) -> Result<T> {
        self.local_field(from_i64(self.qubit_position(qubit)?))
    }
}

/// Extra fields at the target while the packet is present.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalFields<T> {
    /// Field of the triplet packet itself (kOe), same for both control states.
    pub h_tr: T,
    /// Magnitude of the control-conditional Suhl–Nakamura field (kOe).
    pub h_sn: T,
}

impl<T: Real> LocalFields<T> {
    pub fn new(h_tr: T, h_sn: T) -> Result<Self> {
        if !h_tr.is_finite() || !h_sn.is_finite() {
            return Err(Error::domain("local fields must be finite"));
        }
        if h_sn < T::zero() {
            return Err(Error::domain(format!("h_SN is a magnitude, got {h_sn}")));
        }
        Ok(Self { h_tr, h_sn })
    }

    /// h_SN for a coupling W_ij: the target doublet is split by |W|,
    /// so 2·γ_n·h_SN = |W|.
    pub fn from_coupling(h_tr: T, coupling_hz: T, gamma_n: T) -> Result<Self> {
        if !(gamma_n.is_finite() && gamma_n > T::zero()) {
            return Err(Error::domain(format!("gamma_n must be positive, got {gamma_n}")));
        }
        Self::new(h_tr, coupling_hz.abs() / (lit::<T>(2.0) * mhz_to_hz(gamma_n)))
    }
}

/// Rough packet field at the target, A∥·(n0/N) in kOe.
///
/// Heuristic only: the packet field is meant to be measured with the
/// saturation protocol, see [`target_spectrum`].
pub fn estimate_triplet_field<T: Real>(hyperfine: T, n0: T, sites: usize) -> T {
    hyperfine * n0 / from_usize(sites)
}

/// (ω₊, ω₋) = γ_n·(H(target) + h_tr ± h_SN) in MHz.
pub fn target_frequencies<T: Real>(
    layout: &ChainLayout<T>,
    target: usize,
    fields: &LocalFields<T>,
    gamma_n: T,
) -> Result<(T, T)> {
    let field = layout.qubit_field(target)?;
    let center = gamma_n * (field + fields.h_tr);
    let split = gamma_n * fields.h_sn;
    Ok((center + split, center - split))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine<T> {
    /// Absolute line position in MHz.
    pub frequency_mhz: T,
    /// Offset from the bare line γ_n·H(target), in MHz.
    pub shift_mhz: T,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpectrum<T> {
    /// Bare line γ_n·H(target) with no packet present, in MHz.
    pub reference_mhz: T,
    pub lines: Vec<SpectralLine<T>>,
}

impl<T: Real> TargetSpectrum<T> {
    pub fn total_weight(&self) -> T {
        self.lines.iter().fold(T::zero(), |acc, l| acc + l.weight)
    }
}

/// Predicted target NMR spectrum.
///
/// Unsaturated, the control is up or down with equal weight and the target
/// shows the ω± doublet. With the control saturated its I_z averages to
/// zero, h_SN drops out, and one line remains shifted by exactly γ_n·h_tr.
pub fn target_spectrum<T: Real>(
    layout: &ChainLayout<T>,
    target: usize,
    fields: &LocalFields<T>,
    gamma_n: T,
    control_saturated: bool,
) -> Result<TargetSpectrum<T>> {
    let field = layout.qubit_field(target)?;
    let reference_mhz = gamma_n * field;
    let tr_shift = gamma_n * fields.h_tr;
    let lines = if control_saturated {
        vec![SpectralLine {
            frequency_mhz: reference_mhz + tr_shift,
            shift_mhz: tr_shift,
            weight: T::one(),
        }]
    } else {
        let (plus, minus) = target_frequencies(layout, target, fields, gamma_n)?;
        let split = gamma_n * fields.h_sn;
        let half = lit::<T>(0.5);
        vec![
            SpectralLine { frequency_mhz: plus, shift_mhz: tr_shift + split, weight: half },
            SpectralLine { frequency_mhz: minus, shift_mhz: tr_shift - split, weight: half },
        ]
    };
    Ok(TargetSpectrum { reference_mhz, lines })
}

/// Position (lattice units) where the |1 −1⟩ branch is resonant with a
/// microwave of `freq_hz`.
pub fn excitation_position<T: Real>(layout: &ChainLayout<T>, zeeman: &ZeemanModel<T>, freq_hz: T) -> Result<T> {
    if layout.field_per_site() == T::zero() {
        return Err(Error::NoResolution("a uniform field cannot select a position".into()));
    }
    if !freq_hz.is_finite() {
        return Err(Error::domain(format!("microwave frequency must be finite, got {freq_hz}")));
    }
    let (lo, hi) = layout.extent();
    let end_level = |x: i64| -> Result<T> {
        let h = layout.local_field(from_i64(x))?;
        zeeman.triplet_level(TripletBranch::Minus, h).map_err(|_| {
            Error::OutOfRange(format!("chain site {x} sits at a negative field ({h} kOe)"))
        })
    };
    let (a, b) = (end_level(lo)?, end_level(hi)?);
    let (fmin, fmax) = if a <= b { (a, b) } else { (b, a) };
    if freq_hz < fmin || freq_hz > fmax {
        return Err(Error::OutOfRange(format!(
            "{freq_hz} Hz is outside the |1 -1> band swept by the chain [{fmin}, {fmax}] Hz"
        )));
    }
    let field = zeeman.resonance_field(TripletBranch::Minus, freq_hz)?;
    let x = (field - layout.base_field()) / layout.field_per_site();
    Ok(x.max(from_i64(lo)).min(from_i64(hi)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMargin<T> {
    pub lower: usize,
    pub upper: usize,
    /// Line separation over linewidth.
    pub margin: T,
}

impl<T: Real> PairMargin<T> {
    pub fn resolvable(&self) -> bool {
        self.margin > T::one()
    }
}

/// γ_n·|G|·a·(site spacing)/linewidth for each neighbouring qubit pair.
pub fn resolvability_margin<T: Real>(layout: &ChainLayout<T>, gamma_n: T, linewidth_mhz: T) -> Result<Vec<PairMargin<T>>> {
    if layout.qubits().len() < 2 {
        return Err(Error::domain("need at least two qubits"));
    }
    if !(linewidth_mhz > T::zero()) {
        return Err(Error::domain(format!("linewidth must be positive, got {linewidth_mhz}")));
    }
    let per_site = gamma_n * layout.field_per_site().abs();
    Ok(layout
        .qubits()
        .windows(2)
        .enumerate()
        .map(|(i, w)| PairMargin {
            lower: i,
            upper: i + 1,
            margin: per_site * from_i64(w[1] - w[0]) / linewidth_mhz,
        })
        .collect())
}

/// Zeeman mismatch across the packet, g·μ_B·|G|·a·L/h, divided by the
/// lifetime linewidth 1/T_s. Values ≫ 1 mean the gradient pins the packet.
pub fn confinement_margin<T: Real>(
    layout: &ChainLayout<T>,
    zeeman: &ZeemanModel<T>,
    packet_length: usize,
    lifetime: T,
) -> Result<T> {
    if packet_length == 0 {
        return Err(Error::domain("packet must span at least one site"));
    }
    if !(lifetime.is_finite() && lifetime > T::zero()) {
        return Err(Error::domain(format!("lifetime must be positive, got {lifetime}")));
    }
    let mismatch = ConstantsTable::<T>::standard()
        .zeeman_hz(zeeman.g(), layout.field_per_site().abs() * from_usize(packet_length));
    Ok(mismatch * lifetime)
}
