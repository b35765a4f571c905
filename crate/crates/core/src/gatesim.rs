//! Two-qubit state-vector simulation of the magnon-switched controlled-NOT.
//!
//! Conventions:
//!
//! * Basis order |control target⟩ = |00⟩, |01⟩, |10⟩, |11⟩, with 0 = spin up
//!   (m = +½) and 1 = spin down (m = −½).
//! * Spin operators are S = σ/2 and a rotation by `angle` about `axis` is
//!   exp(−i·angle·S_axis), so a π/2 pulse about −X takes |0⟩ to (|0⟩ + i|1⟩)/√2.
//! * The coupling W and the detunings are NMR frequency shifts in Hz. A
//!   positive shift makes a positive-γ nucleus precess in the negative sense
//!   in the rotating frame, so free evolution for τ seconds multiplies |ct⟩ by
//!   exp(+i·2π·τ·(W·m_c·m_t + δ_c·m_c + δ_t·m_t)). With this sense the
//!   −X / ZZ / −Y sequence flips the target exactly when the control is down.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex;

use crate::scalar::{lit, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Control,
    Target,
}

impl Qubit {
    /// Bit of the basis index that belongs to this qubit.
    fn bit(self, index: usize) -> usize {
        match self {
            Qubit::Control => (index >> 1) & 1,
            Qubit::Target => index & 1,
        }
    }

    fn with_bit(self, index: usize, bit: usize) -> usize {
        match self {
            Qubit::Control => (index & 1) | (bit << 1),
            Qubit::Target => (index & 2) | bit,
        }
    }
}

impl FromStr for Qubit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "control" | "c" => Ok(Qubit::Control),
            "target" | "t" => Ok(Qubit::Target),
            _ => Err(Error::domain(format!("unknown qubit {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
    PlusZ,
    MinusZ,
}

impl Axis {
    fn opposite(self) -> Self {
        match self {
            Axis::PlusX => Axis::MinusX,
            Axis::MinusX => Axis::PlusX,
            Axis::PlusY => Axis::MinusY,
            Axis::MinusY => Axis::PlusY,
            Axis::PlusZ => Axis::MinusZ,
            Axis::MinusZ => Axis::PlusZ,
        }
    }

    /// Pauli matrix n·σ for this axis.
    fn pauli<T: Real>(self) -> Mat2<T> {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        let m = match self {
            Axis::PlusX | Axis::MinusX => [[z, one], [one, z]],
            Axis::PlusY | Axis::MinusY => [[z, -i], [i, z]],
            Axis::PlusZ | Axis::MinusZ => [[one, z], [z, -one]],
        };
        match self {
            Axis::MinusX | Axis::MinusY | Axis::MinusZ => m.map(|row| row.map(|x| -x)),
            _ => m,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::PlusX => "+X",
            Axis::MinusX => "-X",
            Axis::PlusY => "+Y",
            Axis::MinusY => "-Y",
            Axis::PlusZ => "+Z",
            Axis::MinusZ => "-Z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" | "+X" => Ok(Axis::PlusX),
            "-X" => Ok(Axis::MinusX),
            "Y" | "+Y" => Ok(Axis::PlusY),
            "-Y" => Ok(Axis::MinusY),
            "Z" | "+Z" => Ok(Axis::PlusZ),
            "-Z" => Ok(Axis::MinusZ),
            _ => Err(Error::domain(format!("unknown rotation axis {s:?}"))),
        }
    }
}

type Mat2<T> = [[Complex<T>; 2]; 2];

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// exp(−i·angle·(n·σ)/2) = cos(angle/2)·1 − i·sin(angle/2)·(n·σ).
fn rotation_2x2<T: Real>(axis: Axis, angle: T) -> Mat2<T> {
    let half = angle / lit(2.0);
    let (s, c) = half.sin_cos();
    let p = axis.pauli::<T>();
    let mi_s = Complex::new(T::zero(), -s);
    let mut m = [[czero(); 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            let diag = if r == col { Complex::new(c, T::zero()) } else { czero() };
            m[r][col] = diag + mi_s * p[r][col];
        }
    }
    m
}

/// Amplitudes over |00⟩, |01⟩, |10⟩, |11⟩ (control, target).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegisterState<T> {
    amplitudes: [Complex<T>; 4],
}

impl<T: Real> RegisterState<T> {
    pub fn basis(index: usize) -> Result<Self> {
        if index > 3 {
            return Err(Error::domain(format!("basis index {index} outside 0..=3")));
        }
        let mut amplitudes = [czero(); 4];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes })
    }

    /// Normalizes; rejects the zero vector.
    pub fn from_amplitudes(amplitudes: [Complex<T>; 4]) -> Result<Self> {
        let norm = amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > T::zero()) {
            return Err(Error::domain("state vector must be finite and nonzero"));
        }
        Ok(Self { amplitudes: amplitudes.map(|a| a / norm) })
    }

    /// |control⟩ ⊗ |target⟩.
    pub fn product(control: [Complex<T>; 2], target: [Complex<T>; 2]) -> Result<Self> {
        Self::from_amplitudes([
            control[0] * target[0],
            control[0] * target[1],
            control[1] * target[0],
            control[1] * target[1],
        ])
    }

    pub fn amplitudes(&self) -> &[Complex<T>; 4] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn probabilities(&self) -> [T; 4] {
        self.amplitudes.map(|a| a.norm_sqr())
    }

    /// 2·|a00·a11 − a01·a10|; zero exactly for product states.
    pub fn concurrence(&self) -> T {
        let a = &self.amplitudes;
        lit::<T>(2.0) * (a[0] * a[3] - a[1] * a[2]).norm()
    }

    /// Schmidt coefficients (largest first) of the control/target split.
    ///
    /// These are the singular values of the 2×2 amplitude matrix, taken from
    /// the eigenvalues of M†M = [[p, q], [q*, r]] as (p+r)/2 ± √(((p−r)/2)² + |q|²).
    pub fn schmidt_coefficients(&self) -> (T, T) {
        let a = &self.amplitudes;
        let p = a[0].norm_sqr() + a[2].norm_sqr();
        let r = a[1].norm_sqr() + a[3].norm_sqr();
        let q = a[0].conj() * a[1] + a[2].conj() * a[3];
        let half = lit::<T>(0.5);
        let mean = half * (p + r);
        let spread = (half * (p - r)).hypot(q.norm());
        let large = (mean + spread).sqrt();
        let small = (mean - spread).max(T::zero()).sqrt();
        (large, small)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GateHamiltonian<T> {
    /// W_ij in Hz.
    pub coupling_hz: T,
    pub detuning_control_hz: T,
    pub detuning_target_hz: T,
}

impl<T: Real> GateHamiltonian<T> {
    pub fn new(coupling_hz: T, detuning_control_hz: T, detuning_target_hz: T) -> Result<Self> {
        if !(coupling_hz.is_finite() && detuning_control_hz.is_finite() && detuning_target_hz.is_finite()) {
            return Err(Error::domain("gate Hamiltonian parameters must be finite"));
        }
        Ok(Self { coupling_hz, detuning_control_hz, detuning_target_hz })
    }

    /// On-resonance coupling only.
    pub fn coupling(coupling_hz: T) -> Result<Self> {
        Self::new(coupling_hz, T::zero(), T::zero())
    }

    /// Frequency shift (Hz) of basis state `index`: W·m_c·m_t + δ_c·m_c + δ_t·m_t.
    fn shift_hz(&self, index: usize) -> T {
        let m = |bit: usize| if bit == 0 { lit::<T>(0.5) } else { lit::<T>(-0.5) };
        let mc = m(Qubit::Control.bit(index));
        let mt = m(Qubit::Target.bit(index));
        self.coupling_hz * mc * mt + self.detuning_control_hz * mc + self.detuning_target_hz * mt
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseEvent<T> {
    Rotation { qubit: Qubit, axis: Axis, angle: T },
    Free { duration: T },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence<T> {
    events: Vec<PulseEvent<T>>,
}

impl<T: Real> PulseSequence<T> {
    pub fn new(events: Vec<PulseEvent<T>>) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            match *e {
                PulseEvent::Rotation { angle, .. } if !angle.is_finite() => {
                    return Err(Error::domain(format!("event {i}: rotation angle must be finite")));
                }
                PulseEvent::Free { duration } if !(duration.is_finite() && duration > T::zero()) => {
                    return Err(Error::domain(format!("event {i}: free evolution needs a positive duration")));
                }
                _ => {}
            }
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[PulseEvent<T>] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Total free-evolution time, in seconds.
    pub fn free_time(&self) -> T {
        self.events.iter().fold(T::zero(), |acc, e| match e {
            PulseEvent::Free { duration } => acc + *duration,
            _ => acc,
        })
    }
}

/// How rotation events are realized.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PulseMode<T> {
    /// Instantaneous rotations.
    #[default]
    Ideal,
    /// Constant transverse drive with Rabi frequency `rabi_hz`; the gate
    /// Hamiltonian keeps acting for the length of the pulse.
    Finite { rabi_hz: T },
}

/// Dense 4×4 operator on the register, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary<T> {
    m: [[Complex<T>; 4]; 4],
}

impl<T: Real> Unitary<T> {
    pub fn identity() -> Self {
        let mut m = [[czero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex::new(T::one(), T::zero());
        }
        Self { m }
    }

    pub fn from_rows(m: [[Complex<T>; 4]; 4]) -> Self {
        Self { m }
    }

    pub fn rows(&self) -> &[[Complex<T>; 4]; 4] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.m[row][col]
    }

    pub fn diagonal(phases: [Complex<T>; 4]) -> Self {
        let mut m = [[czero(); 4]; 4];
        for (i, p) in phases.into_iter().enumerate() {
            m[i][i] = p;
        }
        Self { m }
    }

    /// Lift a single-qubit 2×2 operator onto `qubit`.
    fn embed(qubit: Qubit, op: Mat2<T>) -> Self {
        let mut m = [[czero(); 4]; 4];
        for (row, out) in m.iter_mut().enumerate() {
            for (col, entry) in out.iter_mut().enumerate() {
                let rest_row = qubit.with_bit(row, 0);
                let rest_col = qubit.with_bit(col, 0);
                if rest_row == rest_col {
                    *entry = op[qubit.bit(row)][qubit.bit(col)];
                }
            }
        }
        Self { m }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[czero(); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.m[c][r].conj();
            }
        }
        Self { m }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).fold(czero(), |acc, i| acc + self.m[i][i])
    }

    pub fn apply(&self, state: &RegisterState<T>) -> RegisterState<T> {
        let a = state.amplitudes();
        let mut out = [czero(); 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).fold(czero(), |acc, c| acc + self.m[r][c] * a[c]);
        }
        RegisterState { amplitudes: out }
    }

    /// Frobenius norm of U†U − 1.
    pub fn unitarity_error(&self) -> T {
        let p = self.adjoint() * *self;
        let mut sum = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                let target = if r == c { T::one() } else { T::zero() };
                sum = sum + (p.m[r][c] - Complex::new(target, T::zero())).norm_sqr();
            }
        }
        sum.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    fn scale(&self, s: Complex<T>) -> Self {
        Self { m: self.m.map(|row| row.map(|x| x * s)) }
    }

    fn add(&self, other: &Self) -> Self {
        let mut m = self.m;
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = m[r][c] + other.m[r][c];
            }
        }
        Self { m }
    }

    fn max_row_sum(&self) -> T {
        self.m
            .iter()
            .map(|row| row.iter().fold(T::zero(), |acc, x| acc + x.norm()))
            .fold(T::zero(), T::max)
    }

    /// exp(self) by scaling and squaring of a truncated Taylor series.
    fn exp(&self) -> Self {
        let norm = self.max_row_sum();
        let mut squarings = 0u32;
        let mut scale = T::one();
        while norm * scale > lit(0.25) {
            scale = scale / lit(2.0);
            squarings += 1;
        }
        let a = self.scale(Complex::new(scale, T::zero()));
        let mut result = Self::identity();
        let mut term = Self::identity();
        for k in 1..=24 {
            term = (term * a).scale(Complex::new(T::one() / lit(k as f64), T::zero()));
            result = result.add(&term);
        }
        for _ in 0..squarings {
            result = result * result;
        }
        result
    }
}

impl<T: Real> Mul for Unitary<T> {
    type Output = Unitary<T>;

    fn mul(self, rhs: Self) -> Self {
        let mut m = [[czero(); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).fold(czero(), |acc, k| acc + self.m[r][k] * rhs.m[k][c]);
            }
        }
        Self { m }
    }
}

pub fn rotation_unitary<T: Real>(qubit: Qubit, axis: Axis, angle: T) -> Result<Unitary<T>> {
    if !angle.is_finite() {
        return Err(Error::domain(format!("rotation angle must be finite, got {angle}")));
    }
    Ok(Unitary::embed(qubit, rotation_2x2(axis, angle)))
}

/// exp(−i·angle·S_axis) on one qubit of the register.
pub fn apply_rotation<T: Real>(state: &RegisterState<T>, qubit: Qubit, axis: Axis, angle: T) -> Result<RegisterState<T>> {
    if !angle.is_finite() {
        return Err(Error::domain(format!("rotation angle must be finite, got {angle}")));
    }
    let op = rotation_2x2(axis, angle);
    let a = state.amplitudes();
    let mut out = [czero(); 4];
    for (i, o) in out.iter_mut().enumerate() {
        let bit = qubit.bit(i);
        let i0 = qubit.with_bit(i, 0);
        let i1 = qubit.with_bit(i, 1);
        *o = op[bit][0] * a[i0] + op[bit][1] * a[i1];
    }
    Ok(RegisterState { amplitudes: out })
}

/// Diagonal propagator for `tau` seconds of free evolution under `h`.
pub fn free_unitary<T: Real>(h: &GateHamiltonian<T>, tau: T) -> Result<Unitary<T>> {
    if !(tau.is_finite() && tau >= T::zero()) {
        return Err(Error::domain(format!("free evolution time must be non-negative, got {tau}")));
    }
    let two_pi_tau = T::TAU() * tau;
    let phases = [0, 1, 2, 3].map(|i| Complex::from_polar(T::one(), two_pi_tau * h.shift_hz(i)));
    Ok(Unitary::diagonal(phases))
}

pub fn free_evolve<T: Real>(state: &RegisterState<T>, h: &GateHamiltonian<T>, tau: T) -> Result<RegisterState<T>> {
    let u = free_unitary(h, tau)?;
    let a = state.amplitudes();
    let mut out = *a;
    for (i, o) in out.iter_mut().enumerate() {
        *o = u.m[i][i] * a[i];
    }
    Ok(RegisterState { amplitudes: out })
}

/// Free-evolution time 1/(2|W|) that turns the target by ±90°.
pub fn quarter_turn_time<T: Real>(coupling_hz: T) -> Result<T> {
    if !(coupling_hz.is_finite() && coupling_hz != T::zero()) {
        return Err(Error::NoGate(format!("controlled-NOT needs a nonzero coupling, got {coupling_hz} Hz")));
    }
    Ok(T::one() / (lit::<T>(2.0) * coupling_hz.abs()))
}

/// π/2 about −X on the target, 1/(2|W|) of free evolution, π/2 about −Y.
///
/// For W < 0 the conditional precession runs the other way, and the closing
/// pulse is taken about +Y so the sequence is still a CNOT rather than
/// flipping the target on control-up.
pub fn cn_sequence<T: Real>(coupling_hz: T) -> Result<PulseSequence<T>> {
    let tau = quarter_turn_time(coupling_hz)?;
    let half_pi = T::FRAC_PI_2();
    let closing = if coupling_hz > T::zero() { Axis::MinusY } else { Axis::PlusY };
    PulseSequence::new(vec![
        PulseEvent::Rotation { qubit: Qubit::Target, axis: Axis::MinusX, angle: half_pi },
        PulseEvent::Free { duration: tau },
        PulseEvent::Rotation { qubit: Qubit::Target, axis: closing, angle: half_pi },
    ])
}

fn finite_pulse_unitary<T: Real>(h: &GateHamiltonian<T>, qubit: Qubit, axis: Axis, angle: T, rabi_hz: T) -> Result<Unitary<T>> {
    if !(rabi_hz.is_finite() && rabi_hz > T::zero()) {
        return Err(Error::domain(format!("Rabi frequency must be positive, got {rabi_hz}")));
    }
    let (axis, angle) = if angle < T::zero() { (axis.opposite(), -angle) } else { (axis, angle) };
    let omega = T::TAU() * rabi_hz;
    let duration = angle / omega;
    // −i·duration·H, H = ω1·S_axis − 2π·shift (see module docs for the sign).
    let drive = Unitary::embed(qubit, axis.pauli::<T>()).scale(Complex::new(T::zero(), -duration * omega / lit(2.0)));
    let shifts = [0, 1, 2, 3].map(|i| Complex::new(T::zero(), T::TAU() * duration * h.shift_hz(i)));
    Ok(drive.add(&Unitary::diagonal(shifts)).exp())
}

pub fn event_unitary<T: Real>(event: &PulseEvent<T>, h: &GateHamiltonian<T>, mode: PulseMode<T>) -> Result<Unitary<T>> {
    match (*event, mode) {
        (PulseEvent::Free { duration }, _) => free_unitary(h, duration),
        (PulseEvent::Rotation { qubit, axis, angle }, PulseMode::Ideal) => rotation_unitary(qubit, axis, angle),
        (PulseEvent::Rotation { qubit, axis, angle }, PulseMode::Finite { rabi_hz }) => {
            finite_pulse_unitary(h, qubit, axis, angle, rabi_hz)
        }
    }
}

/// Ordered product U_n⋯U_1 of the event propagators.
pub fn sequence_unitary<T: Real>(seq: &PulseSequence<T>, h: &GateHamiltonian<T>, mode: PulseMode<T>) -> Result<Unitary<T>> {
    seq.events()
        .iter()
        .try_fold(Unitary::identity(), |acc, e| Ok(event_unitary(e, h, mode)? * acc))
}

/// Run a sequence on a state, event by event, with ideal pulses.
pub fn run_sequence<T: Real>(state: &RegisterState<T>, seq: &PulseSequence<T>, h: &GateHamiltonian<T>) -> Result<RegisterState<T>> {
    seq.events().iter().try_fold(*state, |s, e| match *e {
        PulseEvent::Rotation { qubit, axis, angle } => apply_rotation(&s, qubit, axis, angle),
        PulseEvent::Free { duration } => free_evolve(&s, h, duration),
    })
}

/// Controlled-NOT with the control on the high bit.
pub fn ideal_cnot<T: Real>() -> Unitary<T> {
    let one = Complex::new(T::one(), T::zero());
    let mut m = [[czero(); 4]; 4];
    m[0][0] = one;
    m[1][1] = one;
    m[2][3] = one;
    m[3][2] = one;
    Unitary { m }
}

/// Row `input` holds |⟨out|U|input⟩|² for out = 00, 01, 10, 11.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthTable<T> {
    pub rows: [[T; 4]; 4],
}

impl<T: Real> TruthTable<T> {
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.rows[r][c] - other.rows[r][c]).abs());
            }
        }
        worst
    }
}

pub const BASIS_LABELS: [&str; 4] = ["00", "01", "10", "11"];

pub fn truth_table<T: Real>(u: &Unitary<T>) -> TruthTable<T> {
    let mut rows = [[T::zero(); 4]; 4];
    for (input, row) in rows.iter_mut().enumerate() {
        for (out, p) in row.iter_mut().enumerate() {
            *p = u.m[out][input].norm_sqr();
        }
    }
    TruthTable { rows }
}

fn unitarity_tolerance<T: Real>() -> T {
    T::epsilon().sqrt()
}

/// |Tr(U_ideal†·U_sim)|²/16, optionally maximized over single-qubit Z
/// rotations before and after U_sim.
///
/// The maximization is coordinate ascent over the four Z angles, each step
/// solved exactly: with one angle θ free the trace is α·e^{−iθ/2} + β·e^{iθ/2},
/// whose modulus peaks at |α| + |β| for θ = arg α − arg β. Ascent starts from
/// a 3⁴ grid of initial angles and the best result is kept.
pub fn gate_fidelity<T: Real>(sim: &Unitary<T>, ideal: &Unitary<T>, optimize_local_z: bool) -> Result<T> {
    let tol = unitarity_tolerance::<T>();
    for (name, u) in [("simulated", sim), ("ideal", ideal)] {
        let err = u.unitarity_error();
        if !(err <= tol) {
            return Err(Error::domain(format!("{name} gate is not unitary (|U^dag U - 1| = {err})")));
        }
    }
    // weights[i][j] = conj(V_ij)·U_ij
    let mut weights = [[czero::<T>(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            weights[i][j] = ideal.m[i][j].conj() * sim.m[i][j];
        }
    }
    let raw = fidelity_from_trace(weights.iter().flatten().fold(czero(), |acc, w| acc + *w));
    if !optimize_local_z {
        return Ok(raw);
    }
    let grid = [T::zero(), T::TAU() / lit(3.0), lit::<T>(2.0) * T::TAU() / lit(3.0)];
    let mut best = raw;
    for start in 0..81usize {
        let mut angles = [0usize, 1, 2, 3].map(|d| grid[(start / 3usize.pow(d as u32)) % 3]);
        let mut current = T::zero();
        for _ in 0..200 {
            for coord in 0..4 {
                angles[coord] = best_angle(&weights, &angles, coord);
            }
            let f = fidelity_from_trace(z_trace(&weights, &angles));
            let done = f - current <= T::epsilon();
            current = f;
            if done {
                break;
            }
        }
        best = best.max(current);
    }
    Ok(best.min(T::one()))
}

fn fidelity_from_trace<T: Real>(trace: Complex<T>) -> T {
    trace.norm_sqr() / lit(16.0)
}

/// Sign ±1 of m for coordinate `coord` at matrix position (i, j):
/// 0 = pre-Z on control, 1 = pre-Z on target, 2 = post-Z on control, 3 = post-Z on target.
fn z_sign(coord: usize, i: usize, j: usize) -> i32 {
    let bit = match coord {
        0 => Qubit::Control.bit(j),
        1 => Qubit::Target.bit(j),
        2 => Qubit::Control.bit(i),
        _ => Qubit::Target.bit(i),
    };
    if bit == 0 {
        1
    } else {
        -1
    }
}

fn z_phase<T: Real>(weights: &[[Complex<T>; 4]; 4], angles: &[T; 4], skip: Option<usize>, i: usize, j: usize) -> Complex<T> {
    let mut phase = T::zero();
    for (coord, angle) in angles.iter().enumerate() {
        if Some(coord) == skip {
            continue;
        }
        phase = phase - *angle * lit(z_sign(coord, i, j) as f64 / 2.0);
    }
    weights[i][j] * Complex::from_polar(T::one(), phase)
}

fn z_trace<T: Real>(weights: &[[Complex<T>; 4]; 4], angles: &[T; 4]) -> Complex<T> {
    let mut t = czero();
    for i in 0..4 {
        for j in 0..4 {
            t = t + z_phase(weights, angles, None, i, j);
        }
    }
    t
}

fn best_angle<T: Real>(weights: &[[Complex<T>; 4]; 4], angles: &[T; 4], coord: usize) -> T {
    let (mut alpha, mut beta) = (czero::<T>(), czero::<T>());
    for i in 0..4 {
        for j in 0..4 {
            let w = z_phase(weights, angles, Some(coord), i, j);
            if z_sign(coord, i, j) > 0 {
                alpha = alpha + w;
            } else {
                beta = beta + w;
            }
        }
    }
    alpha.arg() - beta.arg()
}
