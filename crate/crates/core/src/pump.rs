//! k = 0 magnon population under microwave drive.
//!
//! dn(0)/dt = W_ex − n(0)/T_s is linear and first order, so each
//! constant-drive segment is solved exactly:
//! n(t) = W_ex·T_s + (n_start − W_ex·T_s)·exp(−t/T_s).

use crate::coupling::{range_function_k0, CouplingParams};
use crate::dispersion::DispersionModel;
use crate::scalar::{from_usize, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpParams<T> {
    excitation_rate: T,
    lifetime: T,
}

impl<T: Real> PumpParams<T> {
    /// `excitation_rate` is W_ex in 1/s, `lifetime` is T_s in s.
    pub fn new(excitation_rate: T, lifetime: T) -> Result<Self> {
        check_rate(excitation_rate)?;
        check_lifetime(lifetime)?;
        Ok(Self { excitation_rate, lifetime })
    }

    pub fn excitation_rate(&self) -> T {
        self.excitation_rate
    }

    pub fn lifetime(&self) -> T {
        self.lifetime
    }

    /// n(0) = W_ex·T_s.
    pub fn steady_state_population(&self) -> T {
        self.excitation_rate * self.lifetime
    }
}

fn check_rate<T: Real>(rate: T) -> Result<()> {
    if !(rate.is_finite() && rate >= T::zero()) {
        return Err(Error::domain(format!("excitation rate must be finite and non-negative, got {rate}")));
    }
    Ok(())
}

fn check_lifetime<T: Real>(lifetime: T) -> Result<()> {
    if !(lifetime.is_finite() && lifetime > T::zero()) {
        return Err(Error::domain(format!("magnon lifetime must be positive, got {lifetime}")));
    }
    Ok(())
}

pub fn steady_state_population<T: Real>(params: &PumpParams<T>) -> T {
    params.steady_state_population()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSegment<T> {
    pub duration: T,
    pub excitation_rate: T,
}

/// Piecewise-constant microwave drive. A zero rate is the microwave switched off.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSchedule<T> {
    segments: Vec<DriveSegment<T>>,
}

impl<T: Real> DriveSchedule<T> {
    pub fn new(segments: Vec<DriveSegment<T>>) -> Result<Self> {
        for (i, s) in segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration > T::zero()) {
                return Err(Error::domain(format!("segment {i}: duration must be positive, got {}", s.duration)));
            }
            check_rate(s.excitation_rate).map_err(|e| Error::domain(format!("segment {i}: {e}")))?;
        }
        Ok(Self { segments })
    }

    pub fn constant(duration: T, excitation_rate: T) -> Result<Self> {
        Self::new(vec![DriveSegment { duration, excitation_rate }])
    }

    pub fn segments(&self) -> &[DriveSegment<T>] {
        &self.segments
    }

    pub fn total_duration(&self) -> T {
        self.segments.iter().fold(T::zero(), |acc, s| acc + s.duration)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint<T> {
    pub time: T,
    pub population: T,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PopulationTrace<T> {
    pub points: Vec<TracePoint<T>>,
}

impl<T: Real> PopulationTrace<T> {
    pub fn last(&self) -> Option<TracePoint<T>> {
        self.points.last().copied()
    }
}

/// Exact population after `elapsed` seconds at constant drive.
pub fn relax<T: Real>(start: T, excitation_rate: T, lifetime: T, elapsed: T) -> T {
    let target = excitation_rate * lifetime;
    target + (start - target) * (-elapsed / lifetime).exp()
}

/// Trace n(t) through `schedule`, starting from `initial` at t = 0.
///
/// Each segment contributes `samples_per_segment` evenly spaced points ending
/// on the segment boundary; the first point is t = 0. Segment boundaries are
/// evaluated once and carried forward, so the trace is continuous.
pub fn evolve_population<T: Real>(
    initial: T,
    schedule: &DriveSchedule<T>,
    lifetime: T,
    samples_per_segment: usize,
) -> Result<PopulationTrace<T>> {
    if !(initial.is_finite() && initial >= T::zero()) {
        return Err(Error::domain(format!("initial population must be non-negative, got {initial}")));
    }
    check_lifetime(lifetime)?;
    if samples_per_segment == 0 {
        return Err(Error::domain("need at least one sample per segment"));
    }
    let mut points = Vec::with_capacity(1 + samples_per_segment * schedule.segments().len());
    points.push(TracePoint { time: T::zero(), population: initial });
    let mut t0 = T::zero();
    let mut start = initial;
    for seg in schedule.segments() {
        let steps = from_usize::<T>(samples_per_segment);
        for i in 1..=samples_per_segment {
            let elapsed = seg.duration * from_usize(i) / steps;
            points.push(TracePoint {
                time: t0 + elapsed,
                population: relax(start, seg.excitation_rate, lifetime, elapsed),
            });
        }
        start = relax(start, seg.excitation_rate, lifetime, seg.duration);
        t0 = t0 + seg.duration;
        if let Some(p) = points.last_mut() {
            p.population = start;
        }
    }
    Ok(PopulationTrace { points })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSample<T> {
    pub time: T,
    pub population: T,
    pub coupling_hz: T,
}

/// W_ij(t) along a population trace.
pub fn coupling_schedule<T: Real>(
    trace: &PopulationTrace<T>,
    model: &DispersionModel<T>,
    params: &CouplingParams<T>,
) -> Result<Vec<CouplingSample<T>>> {
    trace
        .points
        .iter()
        .map(|p| {
            Ok(CouplingSample {
                time: p.time,
                population: p.population,
                coupling_hz: range_function_k0(model, p.population, params)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn steady_state_products() {
        assert_eq!(PumpParams::new(0.0, 1e-3).unwrap().steady_state_population(), 0.0);
        assert_relative_eq!(PumpParams::new(10.0, 1e-3).unwrap().steady_state_population(), 0.01, max_relative = 1e-15);
        assert_relative_eq!(steady_state_population(&PumpParams::new(200.0, 1e-3).unwrap()), 0.2, max_relative = 1e-15);
        assert!(PumpParams::new(-1.0, 1e-3).is_err());
        assert!(PumpParams::new(1.0, 0.0).is_err());
    }

    #[test]
    fn fixed_point_is_stationary() {
        let ts = 1e-3;
        let sched = DriveSchedule::constant(20.0 * ts, 200.0).unwrap();
        let n_ss = 200.0 * ts;
        let trace = evolve_population(n_ss, &sched, ts, 100).unwrap();
        assert!(trace.points.iter().all(|p| p.population == n_ss));
    }

    #[test]
    fn charging_and_decay() {
        let ts = 1e-3;
        let n_ss = 0.2;
        let trace = evolve_population(0.0, &DriveSchedule::constant(10.0 * ts, 200.0).unwrap(), ts, 10).unwrap();
        let gap = n_ss - trace.last().unwrap().population;
        assert_relative_eq!(gap / n_ss, (-10.0f64).exp(), max_relative = 1e-9);
        assert!((gap / n_ss - 4.54e-5).abs() < 1e-7);

        let decay = evolve_population(0.6, &DriveSchedule::constant(ts, 0.0).unwrap(), ts, 1).unwrap();
        assert_relative_eq!(decay.last().unwrap().population, 0.6 / std::f64::consts::E, max_relative = 1e-15);
    }

    #[test]
    fn trace_layout() {
        let sched = DriveSchedule::new(vec![
            DriveSegment { duration: 1e-3, excitation_rate: 100.0 },
            DriveSegment { duration: 2e-3, excitation_rate: 0.0 },
        ])
        .unwrap();
        let trace = evolve_population(0.0, &sched, 1e-3, 4).unwrap();
        assert_eq!(trace.points.len(), 9);
        assert_eq!(trace.points[0].time, 0.0);
        assert_relative_eq!(trace.points[4].time, 1e-3, max_relative = 1e-15);
        assert_relative_eq!(trace.points[8].time, 3e-3, max_relative = 1e-15);
        assert_relative_eq!(sched.total_duration(), 3e-3, max_relative = 1e-15);
        assert!(trace.points.windows(2).all(|w| w[0].time < w[1].time));
    }

    #[test]
    fn schedule_validation() {
        assert!(DriveSchedule::constant(0.0, 1.0).is_err());
        assert!(DriveSchedule::constant(1.0, -1.0).is_err());
        let ok = DriveSchedule::constant(1.0, 1.0).unwrap();
        assert!(evolve_population(-0.1, &ok, 1.0, 3).is_err());
        assert!(evolve_population(0.1, &ok, 1.0, 0).is_err());
        assert!(evolve_population(0.1, &ok, 0.0, 3).is_err());
    }

    #[test]
    fn coupling_follows_population() {
        let model = DispersionModel::new(0.0, 50.0, 0.2).unwrap();
        let params = CouplingParams::new(4.3, 100.0, 20, 10).unwrap();
        let off = evolve_population(0.0, &DriveSchedule::constant(1e-3, 0.0).unwrap(), 1e-3, 5).unwrap();
        assert!(coupling_schedule(&off, &model, &params).unwrap().iter().all(|s| s.coupling_hz == 0.0));

        let plateau = evolve_population(0.2, &DriveSchedule::constant(1e-3, 200.0).unwrap(), 1e-3, 5).unwrap();
        let w = coupling_schedule(&plateau, &model, &params).unwrap();
        assert!(w.iter().all(|s| (s.coupling_hz - 14789.667f64).abs() < 0.01));

        let half = evolve_population(0.1, &DriveSchedule::constant(1e-3, 100.0).unwrap(), 1e-3, 5).unwrap();
        let wh = coupling_schedule(&half, &model, &params).unwrap();
        for (a, b) in w.iter().zip(&wh) {
            assert_relative_eq!(a.coupling_hz, 2.0 * b.coupling_hz, max_relative = 1e-15);
        }
    }

    proptest::proptest! {
        #[test]
        fn population_non_negative_and_monotone(
            init in 0.0f64..5.0, rate in 0.0f64..1.0e4, ts in 1e-5f64..1e-1, n in 1usize..50
        ) {
            let trace = evolve_population(init, &DriveSchedule::constant(5.0 * ts, rate).unwrap(), ts, n).unwrap();
            let target = rate * ts;
            let mut prev = f64::INFINITY;
            for p in &trace.points {
                proptest::prop_assert!(p.population >= 0.0);
                let dev = (p.population - target).abs();
                proptest::prop_assert!(dev <= prev);
                prev = dev;
            }
        }
    }
}
