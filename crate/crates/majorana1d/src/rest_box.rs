//! Majorana particle at rest in a box of length L: the p = 0 eigenstate
//! pair, real packets built from it, and their exact rotational evolution.
//!
//! The two components of the evolving field rotate into each other at the
//! rest frequency omega = m c^2 / hbar, so evolution is a closed form and
//! never time-stepped.

use num_complex::Complex;

use crate::dirac::{require_span, Grid, PhysicsParams, SpinorField};
use crate::scalar::{real, to_f64, Real};
use crate::{tol, Error, Result};

/// The rest eigenstates (psi0+, psi0-) = sqrt(1/2L) [1, +/-i]^T as constant
/// fields on a grid spanning [0, L]. Unit norm, mutually orthogonal.
pub fn rest_eigenstates<T: Real>(
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
) -> Result<(SpinorField<T>, SpinorField<T>)> {
    params.validate()?;
    require_span(grid, T::zero(), params.l)?;
    let amp = (T::one() / ((T::one() + T::one()) * params.l)).sqrt();
    let up = Complex::new(amp, T::zero());
    let plus = SpinorField::from_fn(*grid, |_| [up, Complex::new(T::zero(), amp)]);
    let minus = SpinorField::from_fn(*grid, |_| [up, Complex::new(T::zero(), -amp)]);
    Ok((plus, minus))
}

/// A Majorana packet over the rest pair: Psi(0) = c_plus psi0+ + e^{i theta}
/// (c_plus psi0+)*. The Majorana constraint fixes |c_plus| = 1/sqrt(2); the
/// overall phase of c_plus is free physical input.
#[derive(Clone, Copy, Debug)]
pub struct RestPacket<T: Real> {
    pub c_plus: Complex<T>,
    pub theta: T,
    pub params: PhysicsParams<T>,
    pub grid: Grid<T>,
}

impl<T: Real> RestPacket<T> {
    pub fn new(
        c_plus: Complex<T>,
        theta: T,
        params: PhysicsParams<T>,
        grid: Grid<T>,
    ) -> Result<Self> {
        params.validate()?;
        require_span(&grid, T::zero(), params.l)?;
        let want = (T::one() / (T::one() + T::one())).sqrt();
        if (c_plus.norm() - want).abs() > real(tol::COEFF_CONSTRAINT) {
            return Err(Error::InvalidInput(format!(
                "|c_plus| must be 1/sqrt(2), got {}",
                to_f64(c_plus.norm())
            )));
        }
        Ok(RestPacket { c_plus, theta, params, grid })
    }
}

/// Closed-form trajectory Psi(t) = c_plus psi0+ e^{-i omega t} + e^{i theta}
/// (same)*. Exactly real for theta = 0; majorana_defect(.., theta) = 0 by
/// construction for any theta.
pub fn rest_evolve<T: Real>(packet: &RestPacket<T>, t: T) -> SpinorField<T> {
    let amp = (T::one() / ((T::one() + T::one()) * packet.params.l)).sqrt();
    let phase = Complex::from_polar(T::one(), -packet.params.omega() * t);
    let a = [
        packet.c_plus * phase * amp,
        packet.c_plus * phase * Complex::new(T::zero(), amp),
    ];
    let cc = Complex::from_polar(T::one(), packet.theta);
    let v = [a[0] + cc * a[0].conj(), a[1] + cc * a[1].conj()];
    SpinorField::from_fn(packet.grid, |_| v)
}

/// Applies the plane rotation [[cos a, -sin a], [sin a, cos a]] pointwise:
/// the alternative exact propagator for rest packets with theta = 0, where
/// the angle is omega t.
pub fn rotate<T: Real>(psi: &SpinorField<T>, angle: T) -> SpinorField<T> {
    let (s, c) = angle.sin_cos();
    let mut out = psi.clone();
    for v in out.values.iter_mut() {
        let (a, b) = (v[0], v[1]);
        v[0] = a * c - b * s;
        v[1] = a * s + b * c;
    }
    out
}
