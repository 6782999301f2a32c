//! Linear Lorentz scalar potential S = kx on the whole line: the
//! square-root-ladder spectrum +/- sqrt(2 hbar c k N) with its single zero
//! mode, Hermite-Gaussian eigenfunctions centered on the zero of S + mc^2,
//! and real packet evolution on a truncated domain.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::dirac::{EnergySign, Grid, PhysicsParams, SpinorField};
use crate::numerics::hermite;
use crate::scalar::{real, real_usize, to_f64, Real};
use crate::{tol, Error, Result};

/// Level N >= 0 with its positive-branch energy: 0 for the zero mode, else
/// epsilon_N = sqrt(2 hbar c k N).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearSpectrumEntry<T: Real> {
    pub n: usize,
    pub energy: T,
}

/// Levels N = 0..=n_max. The spectrum of the full operator is these values
/// with both signs, the zero mode counted once.
pub fn linear_spectrum<T: Real>(
    params: &PhysicsParams<T>,
    n_max: usize,
) -> Result<Vec<LinearSpectrumEntry<T>>> {
    params.validate()?;
    let k = params.slope()?;
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let two = T::one() + T::one();
    Ok((0..=n_max)
        .map(|n| LinearSpectrumEntry {
            n,
            energy: (two * params.hbar * params.c * k * real_usize::<T>(n)).sqrt(),
        })
        .collect())
}

/// Half-width of the truncated domain: wide enough that every Hermite-
/// Gaussian up to n_max has tail far below the discretization error.
fn half_width<T: Real>(params: &PhysicsParams<T>, n_max: usize) -> Result<T> {
    let k = params.slope()?;
    let two = T::one() + T::one();
    Ok(real::<T>(10.0).max((two * real_usize::<T>(n_max + 4)).sqrt())
        * (params.hbar * params.c / k).sqrt())
}

/// The standard truncated grid [-x0 - R, -x0 + R] centered on the zero of
/// S + m c^2, with R = max(10, sqrt(2 (n_max + 4))) sqrt(hbar c / k).
pub fn linear_domain_grid<T: Real>(
    params: &PhysicsParams<T>,
    n_max: usize,
    points: usize,
) -> Result<Grid<T>> {
    params.validate()?;
    let center = -params.x0()?;
    let r = half_width(params, n_max)?;
    Grid::uniform(center - r, center + r, points)
}

/// Hermite-Gaussian eigenfunction. N = 0 is the sign-independent zero mode
/// [0, 1]^T exp(-xi^2/2); for N >= 1 the minus branch is exactly sigma_z
/// times the plus branch. Normalization constants are computed by
/// quadrature with a positive-real convention. A grid whose entire span
/// does not hold the Gaussian tail below the tail tolerance is rejected.
pub fn linear_eigenstate<T: Real>(
    entry: &LinearSpectrumEntry<T>,
    sign: EnergySign,
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
) -> Result<SpinorField<T>> {
    params.validate()?;
    let k = params.slope()?;
    let x0 = params.x0()?;
    let scale = (k / (params.hbar * params.c)).sqrt();
    let n = entry.n;
    let mut field = SpinorField::from_fn(*grid, |x| {
        let xi = scale * (x + x0);
        let gauss = (-xi * xi / (T::one() + T::one())).exp();
        if n == 0 {
            [
                Complex::new(T::zero(), T::zero()),
                Complex::new(gauss, T::zero()),
            ]
        } else {
            let ladder = ((T::one() + T::one()) * real_usize::<T>(n)).sqrt();
            [
                Complex::new(T::zero(), -ladder * hermite(n - 1, xi) * gauss),
                Complex::new(hermite(n, xi) * gauss, T::zero()),
            ]
        }
    });
    let factor = T::one() / crate::dirac::norm(&field);
    if !factor.is_finite() {
        return Err(Error::NonFinite("linear eigenstate normalization".into()));
    }
    field.scale(Complex::new(factor, T::zero()));
    for idx in [0, field.len() - 1] {
        let v = field.values[idx];
        let tail = v[0].norm().max(v[1].norm());
        if tail > real(tol::DOMAIN_TAIL) {
            return Err(Error::InvalidInput(format!(
                "grid too narrow: normalized tail {} at x = {} exceeds {}",
                to_f64(tail),
                to_f64(grid.x(idx)),
                tol::DOMAIN_TAIL
            )));
        }
    }
    if n > 0 && sign == EnergySign::Minus {
        for v in field.values.iter_mut() {
            v[1] = -v[1];
        }
    }
    Ok(field)
}

/// Majorana packet over the linear-potential ladder. The zero-mode
/// amplitude c0 enters once, without a conjugate partner, and the Majorana
/// condition pins its phase to theta/2; excited coefficients obey
/// |c0|^2/2 + sum |c_N|^2 = 1/2.
#[derive(Clone, Debug)]
pub struct LinearPacket<T: Real> {
    pub c0: Complex<T>,
    pub coeffs: BTreeMap<usize, Complex<T>>,
    pub theta: T,
    pub params: PhysicsParams<T>,
    pub grid: Grid<T>,
    zero_mode: SpinorField<T>,
    modes: Vec<(Complex<T>, T, SpinorField<T>)>,
}

pub fn build_linear_packet<T: Real>(
    c0: Complex<T>,
    coeffs: &BTreeMap<usize, Complex<T>>,
    theta: T,
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
) -> Result<(LinearPacket<T>, SpinorField<T>)> {
    params.validate()?;
    params.slope()?;
    if coeffs.contains_key(&0) {
        return Err(Error::InvalidInput(
            "the zero mode enters through c0, not the coefficient map".into(),
        ));
    }
    let half = T::one() / (T::one() + T::one());
    let total = c0.norm_sqr() * half
        + coeffs
            .values()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr());
    if total <= T::zero() {
        return Err(Error::InvalidInput(
            "a packet needs at least one nonzero coefficient".into(),
        ));
    }
    if (total - half).abs() > real(tol::COEFF_CONSTRAINT) {
        return Err(Error::InvalidInput(format!(
            "|c0|^2/2 + sum |c_N|^2 must be 1/2, got {}",
            to_f64(total)
        )));
    }
    let majorana_phase = Complex::from_polar(T::one(), theta);
    if (c0 - majorana_phase * c0.conj()).norm() > real(tol::COEFF_CONSTRAINT) {
        return Err(Error::InvalidInput(
            "the Majorana condition requires c0 = e^{i theta} c0*, i.e. arg c0 = theta/2".into(),
        ));
    }
    let n_max = coeffs.keys().max().copied().unwrap_or(1);
    let spectrum = linear_spectrum(params, n_max)?;
    let zero_mode = linear_eigenstate(&spectrum[0], EnergySign::Plus, params, grid)?;
    let mut modes = Vec::with_capacity(coeffs.len());
    for (&n, &c) in coeffs {
        let field = linear_eigenstate(&spectrum[n], EnergySign::Plus, params, grid)?;
        modes.push((c, spectrum[n].energy, field));
    }
    let packet = LinearPacket {
        c0,
        coeffs: coeffs.clone(),
        theta,
        params: *params,
        grid: *grid,
        zero_mode,
        modes,
    };
    let field = evolve_linear(&packet, T::zero());
    Ok((packet, field))
}

/// Exact trajectory: the zero-mode term is time independent; every excited
/// mode rotates by e^{-i epsilon_N t/hbar} and is paired with its Majorana
/// conjugate.
pub fn evolve_linear<T: Real>(packet: &LinearPacket<T>, t: T) -> SpinorField<T> {
    let mut a = SpinorField::zeros(packet.grid);
    for (c, energy, field) in &packet.modes {
        let phase = Complex::from_polar(T::one(), -*energy * t / packet.params.hbar);
        a.add_scaled(*c * phase, field)
            .expect("packet modes share the packet grid");
    }
    let cc = Complex::from_polar(T::one(), packet.theta);
    let conj = crate::dirac::charge_conjugate(&a);
    let mut out = a;
    for (v, w) in out.values.iter_mut().zip(&conj.values) {
        v[0] = v[0] + cc * w[0];
        v[1] = v[1] + cc * w[1];
    }
    out.add_scaled(packet.c0, &packet.zero_mode)
        .expect("zero mode shares the packet grid");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{
        charge_conjugate, inner_product, majorana_defect, mean_value, norm, Observable,
        ScalarPotential,
    };

    type C = Complex<f64>;

    fn setup() -> (PhysicsParams<f64>, Grid<f64>) {
        let params = PhysicsParams::natural().with_slope(1.0);
        let grid = linear_domain_grid(&params, 8, 2001).unwrap();
        (params, grid)
    }

    #[test]
    fn ladder_spectrum_values() {
        let (params, _) = setup();
        let spec = linear_spectrum(&params, 5).unwrap();
        let want = [0.0, 2f64.sqrt(), 2.0, 6f64.sqrt(), 8f64.sqrt(), 10f64.sqrt()];
        for (entry, w) in spec.iter().zip(want) {
            assert!((entry.energy - w).abs() < 1e-15, "{} vs {w}", entry.energy);
        }
        for pair in spec.windows(2).skip(1) {
            let diff = pair[1].energy * pair[1].energy - pair[0].energy * pair[0].energy;
            assert!((diff - 2.0).abs() < 1e-12, "equal square spacing");
        }
        assert!(linear_spectrum(&params, 0).is_err());
        assert!(linear_spectrum(&PhysicsParams::<f64>::natural(), 3).is_err());
    }

    #[test]
    fn zero_mode_shape() {
        let (params, grid) = setup();
        let spec = linear_spectrum(&params, 1).unwrap();
        let psi = linear_eigenstate(&spec[0], EnergySign::Plus, &params, &grid).unwrap();
        let mid = grid.len() / 2;
        for v in &psi.values {
            assert_eq!(v[0], C::new(0.0, 0.0), "upper component identically zero");
            assert_eq!(v[1].im, 0.0);
        }
        // Gaussian peaked at x = -x0 = -1, which is the grid center
        assert!((grid.x(mid) + 1.0).abs() < 1e-12);
        assert!(psi.values[mid][1].re > psi.values[mid + 200][1].re);
        assert!((norm(&psi) - 1.0).abs() < 1e-12);
        // the zero mode is sign independent
        let minus = linear_eigenstate(&spec[0], EnergySign::Minus, &params, &grid).unwrap();
        assert_eq!(psi.values, minus.values);
    }

    #[test]
    fn first_excited_component_ratio() {
        let (params, grid) = setup();
        let spec = linear_spectrum(&params, 1).unwrap();
        let psi = linear_eigenstate(&spec[1], EnergySign::Plus, &params, &grid).unwrap();
        // phi1 = -i sqrt(2) H_0 g a, phi2 = H_1 g a = 2 xi g a
        let i = grid.len() / 2 + 300;
        let xi = grid.x(i) + 1.0; // scale = 1 in these units
        let ratio = psi.values[i][0].im / psi.values[i][1].re;
        assert!((ratio - (-2f64.sqrt()) / (2.0 * xi)).abs() < 1e-10);
    }

    #[test]
    fn sigma_z_relation_is_exact() {
        let (params, grid) = setup();
        let spec = linear_spectrum(&params, 4).unwrap();
        for entry in &spec[1..] {
            let plus = linear_eigenstate(entry, EnergySign::Plus, &params, &grid).unwrap();
            let minus = linear_eigenstate(entry, EnergySign::Minus, &params, &grid).unwrap();
            for (a, b) in plus.values.iter().zip(&minus.values) {
                assert_eq!(a[0], b[0]);
                assert_eq!(a[1], -b[1]);
            }
        }
    }

    #[test]
    fn conjugate_of_plus_is_minus_up_to_a_sign() {
        // the measured global phase relating (psi_N^+)* and psi_N^- is -1
        let (params, grid) = setup();
        let spec = linear_spectrum(&params, 3).unwrap();
        for entry in &spec[1..] {
            let plus = linear_eigenstate(entry, EnergySign::Plus, &params, &grid).unwrap();
            let minus = linear_eigenstate(entry, EnergySign::Minus, &params, &grid).unwrap();
            let conj = charge_conjugate(&plus);
            for (a, b) in conj.values.iter().zip(&minus.values) {
                assert!((a[0] + b[0]).norm() < 1e-15, "N = {}", entry.n);
                assert!((a[1] + b[1]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gram_matrix_identity() {
        let params = PhysicsParams::natural().with_slope(1.0);
        let grid = linear_domain_grid(&params, 8, 4001).unwrap();
        let spec = linear_spectrum(&params, 5).unwrap();
        let mut states = vec![linear_eigenstate(&spec[0], EnergySign::Plus, &params, &grid).unwrap()];
        for entry in &spec[1..] {
            for sign in [EnergySign::Plus, EnergySign::Minus] {
                states.push(linear_eigenstate(entry, sign, &params, &grid).unwrap());
            }
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let g = inner_product(a, b).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g - C::new(want, 0.0)).norm() < 1e-8,
                    "Gram[{i}][{j}] = {g}"
                );
            }
        }
    }

    #[test]
    fn hamiltonian_residual_second_order() {
        let params = PhysicsParams::natural().with_slope(1.0);
        let grid = linear_domain_grid(&params, 8, 4001).unwrap();
        let pot = ScalarPotential::Linear { k: 1.0 };
        let spec = linear_spectrum(&params, 6).unwrap();
        for entry in &spec[1..] {
            for sign in [EnergySign::Plus, EnergySign::Minus] {
                let psi = linear_eigenstate(entry, sign, &params, &grid).unwrap();
                let hpsi = crate::dirac::apply_hamiltonian(&psi, &pot, &params);
                let e = sign.factor::<f64>() * entry.energy;
                let mut diff = hpsi;
                diff.add_scaled(C::new(-e, 0.0), &psi).unwrap();
                assert!(
                    norm(&diff) / entry.energy < 1e-4,
                    "N = {}: {}",
                    entry.n,
                    norm(&diff) / entry.energy
                );
            }
        }
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let params = PhysicsParams::natural().with_slope(1.0);
        let narrow = Grid::uniform(-4.0, 2.0, 501).unwrap();
        let spec = linear_spectrum(&params, 1).unwrap();
        assert!(linear_eigenstate(&spec[0], EnergySign::Plus, &params, &narrow).is_err());
    }

    #[test]
    fn packet_guards() {
        let (params, grid) = setup();
        // key 0 is reserved for c0
        let mut bad = BTreeMap::new();
        bad.insert(0usize, C::new(0.5, 0.0));
        assert!(build_linear_packet(C::new(0.0, 0.0), &bad, 0.0, &params, &grid).is_err());
        // constraint violation
        let mut wrong = BTreeMap::new();
        wrong.insert(1usize, C::new(1.0, 0.0));
        assert!(build_linear_packet(C::new(0.0, 0.0), &wrong, 0.0, &params, &grid).is_err());
        // c0 phase inconsistent with theta
        assert!(build_linear_packet(C::new(0.0, 1.0), &BTreeMap::new(), 0.0, &params, &grid)
            .is_err());
        // empty
        assert!(
            build_linear_packet(C::new(0.0, 0.0), &BTreeMap::new(), 0.0, &params, &grid).is_err()
        );
    }

    #[test]
    fn zero_mode_packet_is_stationary() {
        let (params, grid) = setup();
        let (packet, field0) =
            build_linear_packet(C::new(1.0, 0.0), &BTreeMap::new(), 0.0, &params, &grid).unwrap();
        assert!(field0.max_imag() < 1e-15);
        assert!((norm(&field0) - 1.0).abs() < 1e-12);
        let later = evolve_linear(&packet, 17.3);
        for (a, b) in later.values.iter().zip(&field0.values) {
            assert_eq!(a, b, "zero-mode term carries no phase");
        }
    }

    #[test]
    fn single_mode_recurrence_and_reality() {
        let (params, grid) = setup();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1usize, C::new(0.5f64.sqrt(), 0.0));
        let (packet, field0) =
            build_linear_packet(C::new(0.0, 0.0), &coeffs, 0.0, &params, &grid).unwrap();
        let period = 2.0 * std::f64::consts::PI / 2f64.sqrt();
        let back = evolve_linear(&packet, period);
        for (a, b) in back.values.iter().zip(&field0.values) {
            assert!((a[0] - b[0]).norm() < 1e-12);
            assert!((a[1] - b[1]).norm() < 1e-12);
        }
        for i in 0..6 {
            let psi = evolve_linear(&packet, 0.7 * i as f64);
            assert!(psi.max_imag() < 1e-15);
            assert!((norm(&psi) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_packet_with_theta_and_c0() {
        let (params, grid) = setup();
        let theta = 0.7f64;
        let c0 = C::from_polar(0.6, theta / 2.0);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1usize, C::new(0.3, -0.2));
        coeffs.insert(3usize, C::new(-0.25, 0.15));
        // rescale the excited part to meet the constraint exactly
        let excited: f64 = coeffs.values().map(|c| c.norm_sqr()).sum();
        let want = 0.5 - 0.5 * c0.norm_sqr();
        let fix = (want / excited).sqrt();
        for c in coeffs.values_mut() {
            *c *= fix;
        }
        let (packet, _) = build_linear_packet(c0, &coeffs, theta, &params, &grid).unwrap();
        for i in 0..6 {
            let psi = evolve_linear(&packet, 0.9 * i as f64);
            assert!(majorana_defect(&psi, theta) < 1e-14);
            assert!((norm(&psi) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectory_means_vanish() {
        let (params, grid) = setup();
        let pot = ScalarPotential::Linear { k: 1.0 };
        let c0 = C::new(0.5, 0.0);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1usize, C::new(0.4, 0.1));
        coeffs.insert(2usize, C::new(-0.2, 0.3));
        let excited: f64 = coeffs.values().map(|c| c.norm_sqr()).sum();
        let want = 0.5 - 0.5 * c0.norm_sqr();
        let fix = (want / excited).sqrt();
        for c in coeffs.values_mut() {
            *c *= fix;
        }
        let (packet, _) = build_linear_packet(c0, &coeffs, 0.0, &params, &grid).unwrap();
        for i in 0..8 {
            let psi = evolve_linear(&packet, 1.1 * i as f64);
            let h = mean_value(Observable::H, &psi, &pot, &params).unwrap();
            let p = mean_value(Observable::P, &psi, &pot, &params).unwrap();
            assert!(h.norm() < 1e-9, "<h> = {h}");
            assert!(p.norm() < 1e-9, "<p> = {p}");
        }
    }
}
