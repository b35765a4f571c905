//! Physical constants and the handful of unit conversions the rest of the
//! crate needs. Energies are carried as ordinary frequencies (Hz).

use crate::scalar::{lit, Real};
use crate::{Error, Result};

/// k_B/h in Hz/K (exact since the 2019 SI redefinition: 1.380649e-23 / 6.62607015e-34).
pub const KB_OVER_H_HZ_PER_K: f64 = 2.083_661_912_332_757_6e10;
/// μ_B/h in Hz/Oe (CODATA 2018: 13.996 244 936 GHz/T).
pub const MUB_OVER_H_HZ_PER_OE: f64 = 1.399_624_493_6e6;
/// Oersted per kilo-oersted.
pub const OE_PER_KOE: f64 = 1.0e3;
/// Hz per MHz.
pub const HZ_PER_MHZ: f64 = 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsTable<T> {
    kb_over_h: T,
    mub_over_h: T,
    default_g: T,
}

impl<T: Real> ConstantsTable<T> {
    /// CODATA values with the free-electron-like default g = 2.
    pub fn standard() -> Self {
        Self {
            kb_over_h: lit(KB_OVER_H_HZ_PER_K),
            mub_over_h: lit(MUB_OVER_H_HZ_PER_OE),
            default_g: lit(2.0),
        }
    }

    pub fn new(kb_over_h: T, mub_over_h: T, default_g: T) -> Result<Self> {
        for (name, v) in [
            ("kB_over_h", kb_over_h),
            ("muB_over_h", mub_over_h),
            ("default_g", default_g),
        ] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(Self { kb_over_h, mub_over_h, default_g })
    }

    /// Hz per kelvin.
    pub fn kb_over_h(&self) -> T {
        self.kb_over_h
    }

    /// Hz per oersted.
    pub fn mub_over_h(&self) -> T {
        self.mub_over_h
    }

    pub fn default_g(&self) -> T {
        self.default_g
    }

    pub fn kelvin_to_hz(&self, kelvin: T) -> Result<T> {
        if !kelvin.is_finite() {
            return Err(Error::domain(format!("temperature must be finite, got {kelvin}")));
        }
        Ok(kelvin * self.kb_over_h)
    }

    /// Electron Zeeman frequency g·μ_B·H/h for a field in kOe.
    pub fn zeeman_hz(&self, g: T, field_koe: T) -> T {
        g * self.mub_over_h * field_koe * lit(OE_PER_KOE)
    }
}

impl<T: Real> Default for ConstantsTable<T> {
    fn default() -> Self {
        Self::standard()
    }
}

/// Energy in kelvin as a frequency in Hz, using the standard table.
pub fn kelvin_to_hz<T: Real>(kelvin: T) -> Result<T> {
    ConstantsTable::standard().kelvin_to_hz(kelvin)
}

/// Nuclear Larmor frequency γ_n·H in MHz for H in kOe and γ_n/2π in MHz/kOe.
pub fn field_to_nuclear_frequency<T: Real>(field_koe: T, gamma_n: T) -> Result<T> {
    if !field_koe.is_finite() || !gamma_n.is_finite() {
        return Err(Error::domain("field and gyromagnetic ratio must be finite"));
    }
    if gamma_n <= T::zero() {
        return Err(Error::domain(format!("gamma_n must be positive, got {gamma_n}")));
    }
    Ok(gamma_n * field_koe)
}

pub(crate) fn mhz_to_hz<T: Real>(mhz: T) -> T {
    mhz * lit(HZ_PER_MHZ)
}
