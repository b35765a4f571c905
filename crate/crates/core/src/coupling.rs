//! Longitudinal Suhl–Nakamura range function W_ij for the nuclear coupling
//! H = W_ij·I_i^z·I_j^z.
//!
//! Two routes are provided: the general two-population double sum over the
//! packet grid, and the closed form that follows when only k = 0 magnons are
//! populated. They must agree; the test suite checks that they do.

use crate::dispersion::{wavenumber, DispersionModel};
use crate::quantities::mhz_to_hz;
use crate::scalar::{from_i64, from_usize, lit, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams<T> {
    gamma_n: T,
    hyperfine: T,
    sites: usize,
    separation: usize,
}

impl<T: Real> CouplingParams<T> {
    /// `gamma_n` is γ_n/2π in MHz/kOe, `hyperfine` is A∥ in kOe/μ_B, `sites`
    /// the packet length N (counting I = 0 sites) and `separation` the qubit
    /// distance r_ij in lattice units.
    pub fn new(gamma_n: T, hyperfine: T, sites: usize, separation: usize) -> Result<Self> {
        if !(gamma_n.is_finite() && gamma_n > T::zero()) {
            return Err(Error::domain(format!("gamma_n must be positive, got {gamma_n}")));
        }
        if !(hyperfine.is_finite() && hyperfine > T::zero()) {
            return Err(Error::domain(format!("hyperfine constant must be positive, got {hyperfine}")));
        }
        if sites < 2 {
            return Err(Error::domain(format!("packet must have at least 2 sites, got {sites}")));
        }
        Ok(Self { gamma_n, hyperfine, sites, separation })
    }

    pub fn with_separation(self, separation: usize) -> Self {
        Self { separation, ..self }
    }

    pub fn gamma_n(&self) -> T {
        self.gamma_n
    }

    pub fn hyperfine(&self) -> T {
        self.hyperfine
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn separation(&self) -> usize {
        self.separation
    }

    /// γ_n·A∥ as a frequency in Hz (per unit moment).
    pub fn hyperfine_frequency_hz(&self) -> T {
        mhz_to_hz(self.gamma_n * self.hyperfine)
    }
}

/// Occupation n_k on the packet grid k_n = nπ/N, n = 0..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnonPopulations<T> {
    occupations: Vec<T>,
}

impl<T: Real> MagnonPopulations<T> {
    pub fn new(occupations: Vec<T>) -> Result<Self> {
        if occupations.len() < 3 {
            return Err(Error::domain("populations need at least the grid n = 0..=2"));
        }
        if let Some((n, v)) = occupations.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= T::zero())) {
            return Err(Error::domain(format!("occupation n_{n} must be finite and non-negative, got {v}")));
        }
        Ok(Self { occupations })
    }

    /// Only the k = 0 mode occupied.
    pub fn k0_only(sites: usize, n0: T) -> Result<Self> {
        let mut occ = vec![T::zero(); sites + 1];
        occ[0] = n0;
        Self::new(occ)
    }

    pub fn uniform(sites: usize, occupation: T) -> Result<Self> {
        Self::new(vec![occupation; sites + 1])
    }

    /// Packet length N implied by the grid.
    pub fn sites(&self) -> usize {
        self.occupations.len() - 1
    }

    pub fn occupations(&self) -> &[T] {
        &self.occupations
    }
}

/// Neumaier-compensated sum.
fn compensated_sum<T: Real>(terms: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry = carry + ((sum - t) + x);
        } else {
            carry = carry + ((x - t) + sum);
        }
        sum = t;
    }
    sum + carry
}

/// Σ_{n=1..N} cos(k_n r) / (cos k_n − 1) with k_n = nπ/N.
///
/// Every denominator is strictly negative on n ≥ 1, so the sum is always finite.
pub fn lattice_sum<T: Real>(sites: usize, separation: i64) -> Result<T> {
    if sites < 2 {
        return Err(Error::domain(format!("packet must have at least 2 sites, got {sites}")));
    }
    let r = from_i64::<T>(separation);
    Ok(compensated_sum((1..=sites).map(|n| {
        let k = wavenumber::<T>(n, sites);
        (k * r).cos() / (k.cos() - T::one())
    })))
}

/// General form: (γ_n A/N)² Σ_{k≠k'} (n_k − n_k')/(ε_k' − ε_k)·cos((k − k')r_ij).
pub fn range_function_general<T: Real>(
    model: &DispersionModel<T>,
    pops: &MagnonPopulations<T>,
    params: &CouplingParams<T>,
) -> Result<T> {
    let separation = i64::try_from(params.separation())
        .map_err(|_| Error::domain("separation does not fit in i64"))?;
    range_function_general_at(model, pops, params, separation)
}

/// [`range_function_general`] at an explicit, possibly negative, separation.
pub fn range_function_general_at<T: Real>(
    model: &DispersionModel<T>,
    pops: &MagnonPopulations<T>,
    params: &CouplingParams<T>,
    separation: i64,
) -> Result<T> {
    let sites = params.sites();
    if pops.sites() != sites {
        return Err(Error::domain(format!(
            "population grid has N = {} but coupling parameters have N = {sites}",
            pops.sites()
        )));
    }
    let coefficient = model.band_coefficient_hz();
    let r = from_i64::<T>(separation);
    let k: Vec<T> = (0..=sites).map(|n| wavenumber(n, sites)).collect();
    let cos_k: Vec<T> = k.iter().map(|k| k.cos()).collect();
    let occ = pops.occupations();

    let mut terms = Vec::with_capacity(sites * (sites + 1));
    for a in 0..=sites {
        for b in 0..=sites {
            if a == b {
                continue;
            }
            let dn = occ[a] - occ[b];
            // ε_b − ε_a; the offset C cancels.
            let de = coefficient * (cos_k[b] - cos_k[a]);
            if de == T::zero() {
                if dn == T::zero() {
                    continue;
                }
                return Err(Error::Singularity(format!(
                    "modes {a} and {b} are degenerate but carry different populations"
                )));
            }
            if dn == T::zero() {
                continue;
            }
            terms.push(dn / de * ((k[a] - k[b]) * r).cos());
        }
    }
    let prefactor = params.hyperfine_frequency_hz() / from_usize(sites);
    Ok(prefactor * prefactor * compensated_sum(terms))
}

/// Closed form for k = 0 pumping with occupation `n0`:
/// 2(γ_n A∥)²(n0/N) / (J(j1 − j1³/4)·N) · lattice_sum(N, r_ij).
pub fn range_function_k0<T: Real>(
    model: &DispersionModel<T>,
    n0: T,
    params: &CouplingParams<T>,
) -> Result<T> {
    if !(n0.is_finite() && n0 >= T::zero()) {
        return Err(Error::domain(format!("k=0 occupation must be finite and non-negative, got {n0}")));
    }
    let coefficient = model.band_coefficient_hz();
    if coefficient == T::zero() || !coefficient.is_finite() {
        return Err(Error::Singularity(format!("band coefficient J(j1 - j1^3/4) = {coefficient} Hz")));
    }
    let separation = i64::try_from(params.separation())
        .map_err(|_| Error::domain("separation does not fit in i64"))?;
    let sites = from_usize::<T>(params.sites());
    let ga = params.hyperfine_frequency_hz();
    let sum = lattice_sum::<T>(params.sites(), separation)?;
    Ok(lit::<T>(2.0) * ga * ga * (n0 / sites) / (coefficient * sites) * sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRow<T> {
    pub separation: usize,
    pub coupling_hz: T,
}

/// W(r) for r = 0..=r_max, in ascending r.
pub fn coupling_vs_distance<T: Real>(
    model: &DispersionModel<T>,
    n0: T,
    params: &CouplingParams<T>,
    r_max: usize,
) -> Result<Vec<CouplingRow<T>>> {
    (0..=r_max)
        .map(|r| {
            let coupling_hz = range_function_k0(model, n0, &params.with_separation(r))?;
            Ok(CouplingRow { separation: r, coupling_hz })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn benchmark() -> (DispersionModel<f64>, CouplingParams<f64>) {
        (
            DispersionModel::new(0.0, 50.0, 0.2).unwrap(),
            CouplingParams::new(4.3, 100.0, 20, 10).unwrap(),
        )
    }

    /// Plain left-to-right loop, no compensation, written out separately.
    fn direct_sum(sites: usize, r: i64) -> f64 {
        let mut s = 0.0;
        for n in 1..=sites {
            let k = n as f64 * std::f64::consts::PI / sites as f64;
            s += (k * r as f64).cos() / (k.cos() - 1.0);
        }
        s
    }

    #[test]
    fn lattice_sum_spot_values() {
        assert!((lattice_sum::<f64>(20, 10).unwrap() - 16.5).abs() < 1e-3);
        assert_relative_eq!(lattice_sum::<f64>(20, 10).unwrap(), direct_sum(20, 10), max_relative = 1e-13);
        // r = 0: 1/(0 - 1) + 1/(-1 - 1)
        assert_relative_eq!(lattice_sum::<f64>(2, 0).unwrap(), -1.5, max_relative = 1e-15);
        // r = 1: 0/(0 - 1) + (-1)/(-1 - 1)
        assert!((lattice_sum::<f64>(2, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(lattice_sum::<f64>(20, 7).unwrap(), lattice_sum::<f64>(20, -7).unwrap());
        assert!(lattice_sum::<f64>(1, 0).is_err());
    }

    #[test]
    fn lattice_sum_always_finite() {
        for sites in 2..200 {
            for r in [0, 1, sites as i64 / 2, sites as i64] {
                assert!(lattice_sum::<f64>(sites, r).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn benchmark_value() {
        let (model, params) = benchmark();
        let w = range_function_k0(&model, 0.2, &params).unwrap();
        let kb = 1.380649e-23 / 6.62607015e-34;
        let by_hand = 2.0 * 4.3e8f64.powi(2) * 0.01 / (50.0 * 0.198 * kb * 20.0) * direct_sum(20, 10);
        assert_relative_eq!(w, by_hand, max_relative = 1e-12);
        assert!((w - 14.79e3).abs() < 10.0, "W = {w}");
        assert_eq!(range_function_k0(&model, 0.0, &params).unwrap(), 0.0);
    }

    #[test]
    fn general_form_trivial_populations() {
        let (model, params) = benchmark();
        let empty = MagnonPopulations::uniform(20, 0.0).unwrap();
        assert_eq!(range_function_general(&model, &empty, &params).unwrap(), 0.0);
        let flat = MagnonPopulations::uniform(20, 0.7).unwrap();
        assert_eq!(range_function_general(&model, &flat, &params).unwrap(), 0.0);
        let pumped = MagnonPopulations::k0_only(20, 0.2).unwrap();
        assert_relative_eq!(
            range_function_general(&model, &pumped, &params).unwrap(),
            range_function_k0(&model, 0.2, &params).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn general_form_errors() {
        let (model, params) = benchmark();
        let wrong_grid = MagnonPopulations::k0_only(16, 0.2).unwrap();
        assert!(matches!(range_function_general(&model, &wrong_grid, &params), Err(Error::Domain(_))));
        assert!(MagnonPopulations::new(vec![0.0, -1.0, 0.0]).is_err());
        assert!(MagnonPopulations::new(vec![0.0, f64::NAN, 0.0]).is_err());

        // J(j1 - j1^3/4) underflows to zero: every pair is degenerate.
        let flat = DispersionModel::new(0.0, 1e-200, 1e-200).unwrap();
        let pumped = MagnonPopulations::k0_only(20, 0.2).unwrap();
        assert!(matches!(range_function_general(&flat, &pumped, &params), Err(Error::Singularity(_))));
        let uniform = MagnonPopulations::uniform(20, 0.2).unwrap();
        assert_eq!(range_function_general(&flat, &uniform, &params).unwrap(), 0.0);
        assert!(matches!(range_function_k0(&flat, 0.2, &params), Err(Error::Singularity(_))));
    }

    #[test]
    fn k0_rejects_bad_occupation() {
        let (model, params) = benchmark();
        assert!(range_function_k0(&model, -0.1, &params).is_err());
        assert!(range_function_k0(&model, f64::NAN, &params).is_err());
    }

    #[test]
    fn distance_table() {
        let (model, params) = benchmark();
        let rows = coupling_vs_distance(&model, 0.2, &params, 20).unwrap();
        assert_eq!(rows.len(), 21);
        assert!(rows.iter().enumerate().all(|(i, row)| row.separation == i));
        assert_eq!(rows[10].coupling_hz, range_function_k0(&model, 0.2, &params).unwrap());
        let prefactor = range_function_k0(&model, 0.2, &params).unwrap() / lattice_sum::<f64>(20, 10).unwrap();
        assert_relative_eq!(rows[0].coupling_hz, prefactor * direct_sum(20, 0), max_relative = 1e-12);
        assert_relative_eq!(direct_sum(20, 0), -133.5, max_relative = 1e-12);
        let off = coupling_vs_distance(&model, 0.0, &params, 20).unwrap();
        assert!(off.iter().all(|row| row.coupling_hz == 0.0));
    }

    #[test]
    fn params_validation() {
        assert!(CouplingParams::new(0.0, 100.0, 20, 10).is_err());
        assert!(CouplingParams::new(4.3, -1.0, 20, 10).is_err());
        assert!(CouplingParams::new(4.3, 100.0, 1, 0).is_err());
    }

    #[test]
    fn single_precision_benchmark() {
        let model = DispersionModel::new(0.0f32, 50.0, 0.2).unwrap();
        let params = CouplingParams::new(4.3f32, 100.0, 20, 10).unwrap();
        let w = range_function_k0(&model, 0.2, &params).unwrap();
        assert_relative_eq!(w, 14.79e3, max_relative = 1e-3);
    }
}
