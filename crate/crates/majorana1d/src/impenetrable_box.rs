//! Majorana particle between impenetrable walls: the four confining
//! boundary conditions, their oscillatory spectra (analytic for the
//! Dirichlet pair, transcendental for the mixed pair), the below-gap
//! evanescent mode of the first mixed condition, eigenfunctions, and real
//! packet evolution.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::dirac::{
    charge_conjugate, require_span, ConfiningBC, EnergySign, Grid, PhysicsParams, SpinorField,
};
use crate::numerics::{tan_spectrum_roots, tanh_root, TanSign};
use crate::scalar::{real, real_usize, to_f64, Real};
use crate::{tol, Error, Result};

/// Oscillatory modes carry a real momentum p; the evanescent mode carries
/// the decay constant q with energy below the mass gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxModeKind {
    Oscillatory,
    Evanescent,
}

/// One positive-energy level of a confined spectrum. `value` is p
/// (oscillatory) or q (evanescent); `energy` is the +E branch; `residual`
/// is the quantization-condition defect at the computed root, identically
/// zero for the exact Dirichlet levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxSpectrumEntry<T: Real> {
    pub kind: BoxModeKind,
    pub value: T,
    pub energy: T,
    pub residual: T,
}

fn oscillatory_energy<T: Real>(p: T, params: &PhysicsParams<T>) -> T {
    let cp = params.c * p;
    let mc2 = params.mc2();
    (cp * cp + mc2 * mc2).sqrt()
}

fn mixed_lambda<T: Real>(params: &PhysicsParams<T>) -> Result<T> {
    if params.m <= T::zero() {
        return Err(Error::InvalidInput(
            "mixed wall conditions quantize through lambda = hbar/(mcL); m > 0 required".into(),
        ));
    }
    Ok(params.lambda())
}

/// The lowest `count` positive-energy levels for a confining condition,
/// ascending. The below-gap evanescent level (MixedA with L > hbar/mc, i.e.
/// lambda < 1) comes first when present; p = 0 never appears, as it labels
/// the trivial solution.
pub fn box_spectrum<T: Real>(
    bc: ConfiningBC,
    params: &PhysicsParams<T>,
    count: usize,
) -> Result<Vec<BoxSpectrumEntry<T>>> {
    params.validate()?;
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(count);
    match bc {
        ConfiningBC::DirichletLower | ConfiningBC::DirichletUpper => {
            for n in 1..=count {
                let p = params.hbar * T::PI() * real_usize::<T>(n) / params.l;
                out.push(BoxSpectrumEntry {
                    kind: BoxModeKind::Oscillatory,
                    value: p,
                    energy: oscillatory_energy(p, params),
                    residual: T::zero(),
                });
            }
        }
        ConfiningBC::MixedA => {
            let lambda = mixed_lambda(params)?;
            if let Some(report) = tanh_root(lambda)? {
                let q = params.hbar * report.root / params.l;
                let cq = params.c * q;
                let mc2 = params.mc2();
                out.push(BoxSpectrumEntry {
                    kind: BoxModeKind::Evanescent,
                    value: q,
                    energy: (mc2 * mc2 - cq * cq).sqrt(),
                    residual: report.residual.abs(),
                });
            }
            let remaining = count - out.len();
            if remaining > 0 {
                for report in tan_spectrum_roots(TanSign::Plus, lambda, remaining)? {
                    let p = params.hbar * report.root / params.l;
                    out.push(BoxSpectrumEntry {
                        kind: BoxModeKind::Oscillatory,
                        value: p,
                        energy: oscillatory_energy(p, params),
                        residual: report.residual.abs(),
                    });
                }
            }
            out.truncate(count);
        }
        ConfiningBC::MixedB => {
            let lambda = mixed_lambda(params)?;
            for report in tan_spectrum_roots(TanSign::Minus, lambda, count)? {
                let p = params.hbar * report.root / params.l;
                out.push(BoxSpectrumEntry {
                    kind: BoxModeKind::Oscillatory,
                    value: p,
                    energy: oscillatory_energy(p, params),
                    residual: report.residual.abs(),
                });
            }
        }
    }
    Ok(out)
}

/// Quantization-condition defect of an entry against a boundary condition;
/// used to reject entries paired with the wrong bc.
fn entry_matches<T: Real>(
    bc: ConfiningBC,
    entry: &BoxSpectrumEntry<T>,
    params: &PhysicsParams<T>,
) -> Result<()> {
    let loose = real::<T>(1e-6);
    let z = entry.value * params.l / params.hbar;
    let ok = match (bc, entry.kind) {
        (ConfiningBC::DirichletLower | ConfiningBC::DirichletUpper, BoxModeKind::Oscillatory) => {
            let turns = (z / T::PI()).round();
            turns >= T::one() && (z - turns * T::PI()).abs() < loose
        }
        (ConfiningBC::MixedA, BoxModeKind::Oscillatory) => {
            (z.tan() - mixed_lambda(params)? * z).abs() < loose
        }
        (ConfiningBC::MixedB, BoxModeKind::Oscillatory) => {
            (z.tan() + mixed_lambda(params)? * z).abs() < loose
        }
        (ConfiningBC::MixedA, BoxModeKind::Evanescent) => {
            mixed_lambda(params)? < T::one()
                && (z.tanh() - mixed_lambda(params)? * z).abs() < loose
        }
        (_, BoxModeKind::Evanescent) => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "spectrum entry (z = {}) does not solve the {bc:?} quantization condition",
            to_f64(z)
        )))
    }
}

/// Eigenfunction for a spectrum entry, unit norm. Returns the field and the
/// numerically applied normalization factor (the printed closed forms carry
/// sqrt(1/L) but are exactly unit norm only for the Dirichlet levels).
///
/// Wall values that vanish analytically are written as exact zeros, so the
/// probability current at the walls is identically zero in floating point.
pub fn box_eigenstate_with_factor<T: Real>(
    bc: ConfiningBC,
    entry: &BoxSpectrumEntry<T>,
    sign: EnergySign,
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
) -> Result<(SpinorField<T>, T)> {
    params.validate()?;
    require_span(grid, T::zero(), params.l)?;
    entry_matches(bc, entry, params)?;
    let amp = (T::one() / params.l).sqrt();
    let mc2 = params.mc2();
    let e = entry.energy;
    let sigma = sign.factor::<T>();
    let mut field = match entry.kind {
        BoxModeKind::Oscillatory => {
            let p = entry.value;
            let k = p / params.hbar;
            let (a, b) = (params.c * p / e, mc2 / e);
            match bc {
                ConfiningBC::DirichletLower | ConfiningBC::MixedB => {
                    SpinorField::from_fn(*grid, |x| {
                        let (s, co) = (k * x).sin_cos();
                        [
                            Complex::new(sigma * (a * co + b * s) * amp, T::zero()),
                            Complex::new(T::zero(), s * amp),
                        ]
                    })
                }
                ConfiningBC::DirichletUpper | ConfiningBC::MixedA => {
                    SpinorField::from_fn(*grid, |x| {
                        let (s, co) = (k * x).sin_cos();
                        [
                            Complex::new(T::zero(), s * amp),
                            Complex::new(sigma * (a * co - b * s) * amp, T::zero()),
                        ]
                    })
                }
            }
        }
        BoxModeKind::Evanescent => {
            let q = entry.value;
            let stiff = entry.value * params.l / params.hbar;
            if stiff > T::max_value().ln() - real(10.0) {
                return Err(Error::NonFinite(
                    "evanescent profile sinh(qL/hbar) overflows this float type".into(),
                ));
            }
            let kq = q / params.hbar;
            let (cq, eq) = (params.c * q, e);
            SpinorField::from_fn(*grid, |x| {
                let (sh, ch) = ((kq * x).sinh(), (kq * x).cosh());
                [
                    Complex::new(sigma * sh * amp, T::zero()),
                    Complex::new(T::zero(), (mc2 * sh - cq * ch) / eq * amp),
                ]
            })
        }
    };
    // exact wall zeros per condition
    let last = field.len() - 1;
    let zero = Complex::new(T::zero(), T::zero());
    match bc {
        ConfiningBC::DirichletLower => {
            field.values[0][1] = zero;
            field.values[last][1] = zero;
        }
        ConfiningBC::DirichletUpper => {
            field.values[0][0] = zero;
            field.values[last][0] = zero;
        }
        ConfiningBC::MixedA => {
            field.values[0][0] = zero;
            field.values[last][1] = zero;
        }
        ConfiningBC::MixedB => {
            field.values[0][1] = zero;
            field.values[last][0] = zero;
        }
    }
    let factor = T::one() / crate::dirac::norm(&field);
    if !factor.is_finite() {
        return Err(Error::NonFinite("box eigenstate normalization".into()));
    }
    field.scale(Complex::new(factor, T::zero()));
    Ok((field, factor))
}

/// `box_eigenstate_with_factor` without the bookkeeping.
pub fn box_eigenstate<T: Real>(
    bc: ConfiningBC,
    entry: &BoxSpectrumEntry<T>,
    sign: EnergySign,
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
) -> Result<SpinorField<T>> {
    box_eigenstate_with_factor(bc, entry, sign, params, grid).map(|(f, _)| f)
}

/// Majorana packet in a box: oscillatory coefficients keyed by level index
/// N = 1, 2, ... (the N-th positive oscillatory level of the condition's
/// spectrum) plus, for MixedA with lambda < 1, the evanescent coefficient.
/// Constraint: |c_q|^2 + sum |c_N|^2 = 1/2.
#[derive(Clone, Debug)]
pub struct BoxPacket<T: Real> {
    pub bc: ConfiningBC,
    pub c_q: Option<Complex<T>>,
    pub coeffs: BTreeMap<usize, Complex<T>>,
    pub theta: T,
    pub params: PhysicsParams<T>,
    pub grid: Grid<T>,
    modes: Vec<(Complex<T>, T, SpinorField<T>)>,
}

pub fn build_box_packet<T: Real>(
    bc: ConfiningBC,
    coeffs: &BTreeMap<usize, Complex<T>>,
    c_q: Option<Complex<T>>,
    theta: T,
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
) -> Result<(BoxPacket<T>, SpinorField<T>)> {
    params.validate()?;
    require_span(grid, T::zero(), params.l)?;
    let evanescent_allowed =
        bc == ConfiningBC::MixedA && params.m > T::zero() && params.lambda() < T::one();
    if c_q.is_some() && !evanescent_allowed {
        return Err(Error::InvalidInput(
            "c_q given, but this condition has no evanescent mode (needs MixedA with L > hbar/mc)"
                .into(),
        ));
    }
    if coeffs.contains_key(&0) {
        return Err(Error::InvalidInput(
            "oscillatory indices start at 1; p = 0 labels the trivial solution".into(),
        ));
    }
    let half = T::one() / (T::one() + T::one());
    let total = coeffs
        .values()
        .fold(T::zero(), |acc, c| acc + c.norm_sqr())
        + c_q.map_or(T::zero(), |c| c.norm_sqr());
    if total <= T::zero() {
        return Err(Error::InvalidInput(
            "a packet needs at least one nonzero coefficient".into(),
        ));
    }
    if (total - half).abs() > real(tol::COEFF_CONSTRAINT) {
        return Err(Error::InvalidInput(format!(
            "|c_q|^2 + sum |c_N|^2 must be 1/2, got {}",
            to_f64(total)
        )));
    }
    let max_n = coeffs.keys().max().copied().unwrap_or(0);
    let spectrum = box_spectrum(bc, params, max_n + 1)?;
    let oscillatory: Vec<&BoxSpectrumEntry<T>> = spectrum
        .iter()
        .filter(|e| e.kind == BoxModeKind::Oscillatory)
        .collect();
    let mut modes = Vec::with_capacity(coeffs.len() + 1);
    if let Some(cq) = c_q {
        let entry = spectrum
            .iter()
            .find(|e| e.kind == BoxModeKind::Evanescent)
            .expect("evanescent_allowed implies the entry exists");
        let field = box_eigenstate(bc, entry, EnergySign::Plus, params, grid)?;
        modes.push((cq, entry.energy, field));
    }
    for (&n, &c) in coeffs {
        let entry = oscillatory[n - 1];
        let field = box_eigenstate(bc, entry, EnergySign::Plus, params, grid)?;
        modes.push((c, entry.energy, field));
    }
    let packet = BoxPacket {
        bc,
        c_q,
        coeffs: coeffs.clone(),
        theta,
        params: *params,
        grid: *grid,
        modes,
    };
    let field = evolve_box(&packet, T::zero());
    Ok((packet, field))
}

/// Exact trajectory: mode phases e^{-iEt/hbar} plus the Majorana-conjugate
/// branch. Real for theta = 0; wall conditions hold at every t because each
/// cached mode carries exact wall zeros.
pub fn evolve_box<T: Real>(packet: &BoxPacket<T>, t: T) -> SpinorField<T> {
    let mut a = SpinorField::zeros(packet.grid);
    for (c, energy, field) in &packet.modes {
        let phase = Complex::from_polar(T::one(), -*energy * t / packet.params.hbar);
        a.add_scaled(*c * phase, field)
            .expect("packet modes share the packet grid");
    }
    let cc = Complex::from_polar(T::one(), packet.theta);
    let conj = charge_conjugate(&a);
    let mut out = a;
    for (v, w) in out.values.iter_mut().zip(&conj.values) {
        v[0] = v[0] + cc * w[0];
        v[1] = v[1] + cc * w[1];
    }
    out
}
