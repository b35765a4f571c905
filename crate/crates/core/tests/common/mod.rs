//! Independent reference routes shared by the integration tests.
#![allow(dead_code)]

use magnon_gate::gatesim::{PulseEvent, PulseMode};
use magnon_gate::{Axis, GateHamiltonian, PulseSequence, Qubit, Unitary};
use nalgebra::{Complex, Matrix2, Matrix4};

pub type C64 = Complex<f64>;

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn pauli(axis: Axis) -> Matrix2<C64> {
    let (m, sign) = match axis {
        Axis::PlusX | Axis::MinusX => (Matrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)), axis == Axis::PlusX),
        Axis::PlusY | Axis::MinusY => (Matrix2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)), axis == Axis::PlusY),
        Axis::PlusZ | Axis::MinusZ => (Matrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)), axis == Axis::PlusZ),
    };
    if sign {
        m
    } else {
        -m
    }
}

pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn on(qubit: Qubit, op: Matrix2<C64>) -> Matrix4<C64> {
    let id = Matrix2::identity();
    match qubit {
        Qubit::Control => kron(&op, &id),
        Qubit::Target => kron(&id, &op),
    }
}

/// Rotating-frame Hamiltonian in rad/s: −2π(W·Iz⊗Iz + δc·Iz⊗1 + δt·1⊗Iz).
pub fn free_hamiltonian(h: &GateHamiltonian<f64>) -> Matrix4<C64> {
    let iz = pauli(Axis::PlusZ) * c(0.5, 0.0);
    let id = Matrix2::identity();
    let zz = kron(&iz, &iz) * c(h.coupling_hz, 0.0);
    let zc = kron(&iz, &id) * c(h.detuning_control_hz, 0.0);
    let zt = kron(&id, &iz) * c(h.detuning_target_hz, 0.0);
    (zz + zc + zt) * c(-2.0 * std::f64::consts::PI, 0.0)
}

/// exp(−i·t·H) by nalgebra's general matrix exponential.
pub fn propagate(h: &Matrix4<C64>, t: f64) -> Matrix4<C64> {
    (h * c(0.0, -t)).exp()
}

pub fn dense_sequence(seq: &PulseSequence<f64>, h: &GateHamiltonian<f64>, mode: PulseMode<f64>) -> Matrix4<C64> {
    let mut u = Matrix4::identity();
    for e in seq.events() {
        let step = match (*e, mode) {
            (PulseEvent::Free { duration }, _) => propagate(&free_hamiltonian(h), duration),
            (PulseEvent::Rotation { qubit, axis, angle }, PulseMode::Ideal) => {
                propagate(&(on(qubit, pauli(axis)) * c(0.5, 0.0)), angle)
            }
            (PulseEvent::Rotation { qubit, axis, angle }, PulseMode::Finite { rabi_hz }) => {
                let omega = 2.0 * std::f64::consts::PI * rabi_hz;
                let t = angle.abs() / omega;
                let drive = on(qubit, pauli(axis)) * c(0.5 * omega * angle.signum(), 0.0);
                propagate(&(drive + free_hamiltonian(h)), t)
            }
        };
        u = step * u;
    }
    u
}

pub fn max_entry_diff(u: &Unitary<f64>, m: &Matrix4<C64>) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..4 {
        for col in 0..4 {
            let a = u.entry(r, col);
            let b = m[(r, col)];
            worst = worst.max(((a.re - b.re).powi(2) + (a.im - b.im).powi(2)).sqrt());
        }
    }
    worst
}

/// Left-to-right Σ_{n=1..N} cos(nπr/N)/(cos(nπ/N) − 1).
pub fn direct_lattice_sum(sites: usize, r: i64) -> f64 {
    let mut s = 0.0;
    for n in 1..=sites {
        let k = n as f64 * std::f64::consts::PI / sites as f64;
        s += (k * r as f64).cos() / (k.cos() - 1.0);
    }
    s
}

/// RK4 integration of dn/dt = W_ex − n/T_s, returning n at every `stride`-th step.
pub fn rk4_population(
    initial: f64,
    segments: &[(f64, f64)],
    lifetime: f64,
    samples_per_segment: usize,
) -> Vec<f64> {
    let mut out = vec![initial];
    let mut n = initial;
    let max_step = lifetime / 1.0e4;
    for &(duration, rate) in segments {
        let per_sample = ((duration / samples_per_segment as f64) / max_step).ceil() as usize;
        let steps = per_sample * samples_per_segment;
        let h = duration / steps as f64;
        let f = |y: f64| rate - y / lifetime;
        for s in 1..=steps {
            let k1 = f(n);
            let k2 = f(n + 0.5 * h * k1);
            let k3 = f(n + 0.5 * h * k2);
            let k4 = f(n + h * k3);
            n += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if s % per_sample == 0 {
                out.push(n);
            }
        }
    }
    out
}

pub fn kelvin_to_hz_reference(k: f64) -> f64 {
    k * 1.380649e-23 / 6.62607015e-34
}
