//! Spin-ladder magnon band and the Zeeman-split k = 0 triplet levels.

use crate::quantities::ConstantsTable;
use crate::scalar::{from_usize, lit, Real};
use crate::{Error, Result};

/// Truncated cosine band ε(k) = C + J(j1 − j1³/4)·cos k.
///
/// Only the first harmonic is kept; it is the only term the pumped-k=0 range
/// function depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionModel<T> {
    offset_k: T,
    exchange_k: T,
    ratio: T,
}

impl<T: Real> DispersionModel<T> {
    /// `offset_k` is C, `exchange_k` the inter-chain exchange J, both in
    /// kelvin; `ratio` is j1 = J1/J and must lie in (0, 2).
    pub fn new(offset_k: T, exchange_k: T, ratio: T) -> Result<Self> {
        if !offset_k.is_finite() {
            return Err(Error::domain(format!("dispersion offset C must be finite, got {offset_k}")));
        }
        if !(exchange_k.is_finite() && exchange_k > T::zero()) {
            return Err(Error::domain(format!("exchange J must be positive, got {exchange_k}")));
        }
        if !(ratio > T::zero() && ratio < lit(2.0)) {
            return Err(Error::domain(format!("ratio j1 must lie in (0, 2), got {ratio}")));
        }
        Ok(Self { offset_k, exchange_k, ratio })
    }

    pub fn offset_k(&self) -> T {
        self.offset_k
    }

    pub fn exchange_k(&self) -> T {
        self.exchange_k
    }

    pub fn ratio(&self) -> T {
        self.ratio
    }

    /// J(j1 − j1³/4) in kelvin.
    pub fn band_coefficient_k(&self) -> T {
        let j1 = self.ratio;
        self.exchange_k * (j1 - j1 * j1 * j1 / lit(4.0))
    }

    /// J(j1 − j1³/4) in Hz.
    pub fn band_coefficient_hz(&self) -> T {
        self.band_coefficient_k() * ConstantsTable::<T>::standard().kb_over_h()
    }

    /// ε(k_n) in Hz on the packet grid k_n = nπ/N, 0 ≤ n ≤ N.
    pub fn magnon_energy(&self, n: usize, sites: usize) -> Result<T> {
        check_grid(n, sites)?;
        let k = wavenumber::<T>(n, sites);
        let kelvin = self.offset_k + self.band_coefficient_k() * k.cos();
        Ok(kelvin * ConstantsTable::<T>::standard().kb_over_h())
    }

    /// Energies for every grid point n = 0..=N.
    pub fn band(&self, sites: usize) -> Result<Vec<T>> {
        (0..=sites).map(|n| self.magnon_energy(n, sites)).collect()
    }

    /// Band minimum, maximum and width, all in Hz.
    pub fn band_extrema(&self) -> BandExtrema<T> {
        let kb = ConstantsTable::<T>::standard().kb_over_h();
        let b = self.band_coefficient_k();
        BandExtrema {
            min: (self.offset_k - b) * kb,
            max: (self.offset_k + b) * kb,
            bandwidth: (b + b) * kb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandExtrema<T> {
    pub min: T,
    pub max: T,
    pub bandwidth: T,
}

impl<T: Real> BandExtrema<T> {
    pub fn midpoint(&self) -> T {
        (self.min + self.max) / lit(2.0)
    }
}

/// k_n = nπ/N.
pub fn wavenumber<T: Real>(n: usize, sites: usize) -> T {
    from_usize::<T>(n) * T::PI() / from_usize(sites)
}

pub(crate) fn check_grid(n: usize, sites: usize) -> Result<()> {
    if sites < 2 {
        return Err(Error::domain(format!("packet must have at least 2 sites, got {sites}")));
    }
    if n > sites {
        return Err(Error::domain(format!("band index {n} outside 0..={sites}")));
    }
    Ok(())
}

/// One of the three |1 m⟩ triplet branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TripletBranch {
    Minus,
    Zero,
    Plus,
}

impl TripletBranch {
    pub const ALL: [TripletBranch; 3] = [TripletBranch::Minus, TripletBranch::Zero, TripletBranch::Plus];

    pub fn m(self) -> i32 {
        match self {
            TripletBranch::Minus => -1,
            TripletBranch::Zero => 0,
            TripletBranch::Plus => 1,
        }
    }
}

impl TryFrom<i32> for TripletBranch {
    type Error = Error;

    fn try_from(m: i32) -> Result<Self> {
        match m {
            -1 => Ok(TripletBranch::Minus),
            0 => Ok(TripletBranch::Zero),
            1 => Ok(TripletBranch::Plus),
            _ => Err(Error::domain(format!("triplet quantum number must be -1, 0 or +1, got {m}"))),
        }
    }
}

/// Zero-field gap and g-factor of the triplet; E_m(H) = Δ + m·g·μ_B·H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeemanModel<T> {
    gap_k: T,
    g: T,
}

impl<T: Real> ZeemanModel<T> {
    pub fn new(gap_k: T, g: T) -> Result<Self> {
        if !(gap_k.is_finite() && gap_k > T::zero()) {
            return Err(Error::domain(format!("spin gap must be positive, got {gap_k}")));
        }
        if !(g.is_finite() && g > T::zero()) {
            return Err(Error::domain(format!("g-factor must be positive, got {g}")));
        }
        Ok(Self { gap_k, g })
    }

    pub fn gap_k(&self) -> T {
        self.gap_k
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn gap_hz(&self) -> T {
        self.gap_k * ConstantsTable::<T>::standard().kb_over_h()
    }

    /// Slope dE/dH of the m = +1 branch in Hz per kOe.
    pub fn zeeman_slope_hz_per_koe(&self) -> T {
        ConstantsTable::<T>::standard().zeeman_hz(self.g, T::one())
    }

    /// Energy of |1 m⟩ above the singlet at field `field_koe`, in Hz.
    pub fn triplet_level(&self, branch: TripletBranch, field_koe: T) -> Result<T> {
        if !(field_koe.is_finite() && field_koe >= T::zero()) {
            return Err(Error::domain(format!("field must be finite and non-negative, got {field_koe}")));
        }
        let zeeman = ConstantsTable::<T>::standard().zeeman_hz(self.g, field_koe);
        Ok(match branch {
            TripletBranch::Minus => self.gap_hz() - zeeman,
            TripletBranch::Zero => self.gap_hz(),
            TripletBranch::Plus => self.gap_hz() + zeeman,
        })
    }

    /// Field in kOe at which `branch` sits at `freq_hz` above the singlet.
    pub fn resonance_field(&self, branch: TripletBranch, freq_hz: T) -> Result<T> {
        if !(freq_hz.is_finite() && freq_hz > T::zero()) {
            return Err(Error::domain(format!("microwave frequency must be positive, got {freq_hz}")));
        }
        let slope = match branch {
            TripletBranch::Zero => {
                return Err(Error::NoUniqueSolution(
                    "the |1 0> branch does not depend on field".into(),
                ))
            }
            TripletBranch::Minus => -self.zeeman_slope_hz_per_koe(),
            TripletBranch::Plus => self.zeeman_slope_hz_per_koe(),
        };
        let field = (freq_hz - self.gap_hz()) / slope;
        if field < T::zero() {
            return Err(Error::OutOfRange(format!(
                "resonance at {freq_hz} Hz would need a negative field ({field} kOe)"
            )));
        }
        Ok(field)
    }
}
