//! Free Majorana particle on a periodic box: momentum lattice, plane-wave
//! eigenstates, real packets, exact evolution, classical-velocity
//! eigenvalues, and the transfer-matrix boundary-condition families.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::dirac::{
    charge_conjugate, require_span, BCFamily, EnergySign, Grid, Mat2, PhysicsParams, SpinorField,
};
use crate::scalar::{real, to_f64, Real};
use crate::{tol, Error, Result};

/// One point of the momentum lattice p = hbar 2 pi n / L with its positive
/// energy E = sqrt((cp)^2 + (mc^2)^2) >= mc^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumLabel<T: Real> {
    pub n: i64,
    pub p: T,
    pub energy: T,
}

impl<T: Real> MomentumLabel<T> {
    pub fn new(n: i64, params: &PhysicsParams<T>) -> Self {
        let two_pi = T::PI() + T::PI();
        let p = params.hbar * two_pi * real(n as f64) / params.l;
        let cp = params.c * p;
        let mc2 = params.mc2();
        MomentumLabel {
            n,
            p,
            energy: (cp * cp + mc2 * mc2).sqrt(),
        }
    }
}

/// Normalized plane-wave eigenstate sqrt(1/2L) [1, (cp + i mc^2)/(+/-E)]^T
/// e^{ipx/hbar}. The value at x = L is copied from x = 0 so the periodic
/// closure holds exactly, not merely to roundoff of e^{2 pi i n}.
pub fn plane_eigenstate<T: Real>(
    label: &MomentumLabel<T>,
    sign: EnergySign,
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
) -> Result<SpinorField<T>> {
    params.validate()?;
    require_span(grid, T::zero(), params.l)?;
    if label.energy <= T::zero() {
        return Err(Error::InvalidInput(
            "massless n = 0 mode has E = 0; the eigenstate is undefined".into(),
        ));
    }
    let amp = (T::one() / ((T::one() + T::one()) * params.l)).sqrt();
    let denom = sign.factor::<T>() * label.energy;
    let ratio = Complex::new(params.c * label.p / denom, params.mc2() / denom);
    let k = label.p / params.hbar;
    let mut field = SpinorField::from_fn(*grid, |x| {
        let phase = Complex::from_polar(T::one(), k * x);
        [phase * amp, phase * ratio * amp]
    });
    let first = field.values[0];
    *field.values.last_mut().expect("grids are nonempty") = first;
    Ok(field)
}

/// Majorana packet over plane modes: coefficients c_n for psi_n^(+), with
/// the conjugate partners implied. The Majorana constraint is
/// sum |c_n|^2 = 1/2.
#[derive(Clone, Debug)]
pub struct PeriodicPacket<T: Real> {
    pub coeffs: BTreeMap<i64, Complex<T>>,
    pub theta: T,
    pub params: PhysicsParams<T>,
    pub grid: Grid<T>,
    modes: Vec<(Complex<T>, T, SpinorField<T>)>,
}

/// Validates (or, with `rescale`, imposes) the coefficient constraint and
/// assembles the t = 0 field sum c_n psi_n^(+) + e^{i theta} c.c.
pub fn build_periodic_packet<T: Real>(
    coeffs: &BTreeMap<i64, Complex<T>>,
    theta: T,
    params: &PhysicsParams<T>,
    grid: &Grid<T>,
    rescale: bool,
) -> Result<(PeriodicPacket<T>, SpinorField<T>)> {
    params.validate()?;
    require_span(grid, T::zero(), params.l)?;
    let half = T::one() / (T::one() + T::one());
    let total: T = coeffs
        .values()
        .fold(T::zero(), |acc, c| acc + c.norm_sqr());
    if total <= T::zero() {
        return Err(Error::InvalidInput(
            "a packet needs at least one nonzero coefficient".into(),
        ));
    }
    let mut coeffs = coeffs.clone();
    if (total - half).abs() > real(tol::COEFF_CONSTRAINT) {
        if !rescale {
            return Err(Error::InvalidInput(format!(
                "sum |c|^2 must be 1/2, got {}; pass rescale to renormalize",
                to_f64(total)
            )));
        }
        let factor = (half / total).sqrt();
        for c in coeffs.values_mut() {
            *c = *c * factor;
        }
    }
    let mut modes = Vec::with_capacity(coeffs.len());
    for (&n, &c) in &coeffs {
        let label = MomentumLabel::new(n, params);
        let field = plane_eigenstate(&label, EnergySign::Plus, params, grid)?;
        modes.push((c, label.energy, field));
    }
    let packet = PeriodicPacket {
        coeffs,
        theta,
        params: *params,
        grid: *grid,
        modes,
    };
    let field = evolve_periodic(&packet, T::zero());
    Ok((packet, field))
}

/// Exact trajectory: each mode rotates by e^{-i E t/hbar}, then the
/// conjugate branch is added with the Majorana phase. The result satisfies
/// the Majorana condition with phase theta identically in t.
pub fn evolve_periodic<T: Real>(packet: &PeriodicPacket<T>, t: T) -> SpinorField<T> {
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

/// Eigenvalue +/- c^2 p / E_p of the classical-velocity operator
/// v_cl = c^2 p h^{-1}; undefined at E = 0 (massless rest mode).
pub fn classical_velocity_eigenvalue<T: Real>(
    label: &MomentumLabel<T>,
    sign: EnergySign,
    params: &PhysicsParams<T>,
) -> Result<T> {
    if label.energy <= T::zero() {
        return Err(Error::InvalidInput(
            "v_cl undefined at E = 0 (massless n = 0 mode)".into(),
        ));
    }
    Ok(sign.factor::<T>() * params.c * params.c * label.p / label.energy)
}

/// The 2x2 transfer matrix relating Psi(L) to Psi(0) for the non-confining
/// boundary families. The antidiagonal family degenerates to the confining
/// wall conditions as m2 -> 0; at m2 = 0 exactly the matrix diverges and the
/// call is an input error pointing at the confining tags instead.
pub fn bc_matrix<T: Real>(fam: &BCFamily<T>) -> Result<Mat2<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let unit_tol = real::<T>(1e-12);
    match *fam {
        BCFamily::Antidiagonal { m0, m2 } => {
            if ((m0 * m0 + m2 * m2) - T::one()).abs() > unit_tol {
                return Err(Error::InvalidInput(
                    "antidiagonal family needs m0^2 + m2^2 = 1".into(),
                ));
            }
            if m2 == T::zero() {
                return Err(Error::InvalidInput(
                    "m2 = 0 is the confining limit; use a ConfiningBC tag".into(),
                ));
            }
            let upper = Complex::new(-(T::one() + m0) / m2, T::zero());
            let lower = Complex::new((m0 - T::one()) / m2, T::zero());
            Ok([[zero, upper], [lower, zero]])
        }
        BCFamily::Diagonal { m1, m3 } => {
            if ((m1 * m1 + m3 * m3) - T::one()).abs() > unit_tol {
                return Err(Error::InvalidInput(
                    "diagonal family needs m1^2 + m3^2 = 1".into(),
                ));
            }
            if m1 == T::zero() {
                return Err(Error::InvalidInput(
                    "m1 = 0 diagonal matrix is singular".into(),
                ));
            }
            let upper = Complex::new((T::one() + m3) / m1, T::zero());
            let lower = Complex::new((T::one() - m3) / m1, T::zero());
            Ok([[upper, zero], [zero, lower]])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{inner_product, majorana_defect, norm};
    use crate::rest_box::{rest_eigenstates, rest_evolve, RestPacket};

    type C = Complex<f64>;

    fn setup() -> (PhysicsParams<f64>, Grid<f64>) {
        let l = 2.0 * std::f64::consts::PI;
        let params = PhysicsParams::natural().with_box_length(l);
        let grid = Grid::uniform(0.0, l, 501).unwrap();
        (params, grid)
    }

    #[test]
    fn label_values_on_the_lattice() {
        let (params, _) = setup();
        let one = MomentumLabel::new(1, &params);
        assert!((one.p - 1.0).abs() < 1e-15);
        assert!((one.energy - 2f64.sqrt()).abs() < 1e-15);
        let minus_two = MomentumLabel::new(-2, &params);
        assert!((minus_two.p + 2.0).abs() < 1e-15);
        assert!((minus_two.energy - 5f64.sqrt()).abs() < 1e-15);
        assert!(MomentumLabel::new(0, &params).energy >= params.mc2());
    }

    #[test]
    fn zero_mode_reduces_to_rest_eigenstate() {
        let (params, grid) = setup();
        let label = MomentumLabel::new(0, &params);
        let plane = plane_eigenstate(&label, EnergySign::Plus, &params, &grid).unwrap();
        let (rest, _) = rest_eigenstates(&params, &grid).unwrap();
        for (a, b) in plane.values.iter().zip(&rest.values) {
            assert!((a[0] - b[0]).norm() < 1e-15);
            assert!((a[1] - b[1]).norm() < 1e-15);
        }
    }

    #[test]
    fn negative_branch_is_conjugate_of_reflected_positive() {
        let (params, grid) = setup();
        let plus = plane_eigenstate(
            &MomentumLabel::new(-1, &params),
            EnergySign::Plus,
            &params,
            &grid,
        )
        .unwrap();
        let minus = plane_eigenstate(
            &MomentumLabel::new(1, &params),
            EnergySign::Minus,
            &params,
            &grid,
        )
        .unwrap();
        let conj = charge_conjugate(&plus);
        for (a, b) in minus.values.iter().zip(&conj.values) {
            assert!((a[0] - b[0]).norm() < 1e-15);
            assert!((a[1] - b[1]).norm() < 1e-15);
        }
    }

    #[test]
    fn periodic_closure_is_exact() {
        let (params, grid) = setup();
        for n in [-3i64, 1, 2] {
            let f = plane_eigenstate(
                &MomentumLabel::new(n, &params),
                EnergySign::Plus,
                &params,
                &grid,
            )
            .unwrap();
            assert_eq!(f.values[0], *f.values.last().unwrap());
        }
    }

    #[test]
    fn eigenstate_gram_matrix_is_identity() {
        let (params, grid) = setup();
        let mut states = Vec::new();
        for n in -2i64..=2 {
            let label = MomentumLabel::new(n, &params);
            for sign in [EnergySign::Plus, EnergySign::Minus] {
                states.push(plane_eigenstate(&label, sign, &params, &grid).unwrap());
            }
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let g = inner_product(a, b).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g - C::new(want, 0.0)).norm() < 1e-10,
                    "Gram[{i}][{j}] = {g}"
                );
            }
        }
    }

    #[test]
    fn single_mode_packet_is_a_real_standing_wave() {
        let (params, grid) = setup();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1i64, C::new(0.5f64.sqrt(), 0.0));
        let (_, field) = build_periodic_packet(&coeffs, 0.0, &params, &grid, false).unwrap();
        assert!(field.max_imag() < 1e-15);
        assert!((norm(&field) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constraint_rescale_flag() {
        let (params, grid) = setup();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1i64, C::new(1.0, 0.0));
        coeffs.insert(-2i64, C::new(0.0, 2.0));
        assert!(build_periodic_packet(&coeffs, 0.0, &params, &grid, false).is_err());
        let (packet, field) = build_periodic_packet(&coeffs, 0.0, &params, &grid, true).unwrap();
        let total: f64 = packet.coeffs.values().map(|c| c.norm_sqr()).sum();
        assert!((total - 0.5).abs() < 1e-14);
        assert!((norm(&field) - 1.0).abs() < 1e-12);
        // empty coefficient set can never satisfy the constraint
        assert!(build_periodic_packet(&BTreeMap::new(), 0.0, &params, &grid, true).is_err());
    }

    #[test]
    fn evolution_preserves_reality_norm_and_t0() {
        let (params, grid) = setup();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(-1i64, C::new(0.3, 0.2));
        coeffs.insert(0i64, C::new(-0.1, 0.4));
        coeffs.insert(2i64, C::new(0.2, -0.3));
        let (packet, field0) = build_periodic_packet(&coeffs, 0.0, &params, &grid, true).unwrap();
        let again = evolve_periodic(&packet, 0.0);
        for (a, b) in field0.values.iter().zip(&again.values) {
            assert_eq!(a, b);
        }
        for i in 1..=7 {
            let t = 0.83 * i as f64;
            let psi = evolve_periodic(&packet, t);
            assert!(psi.max_imag() < 1e-15, "t = {t}");
            assert!((norm(&psi) - 1.0).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn theta_packet_carries_its_phase() {
        let (params, grid) = setup();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1i64, C::new(0.4, 0.1));
        coeffs.insert(-1i64, C::new(-0.2, 0.35));
        let (packet, _) = build_periodic_packet(&coeffs, 0.7, &params, &grid, true).unwrap();
        for i in 0..5 {
            let psi = evolve_periodic(&packet, 1.1 * i as f64);
            assert!(majorana_defect(&psi, 0.7) < 1e-14);
            assert!(majorana_defect(&psi, 0.0) > 1e-3);
        }
    }

    #[test]
    fn zero_mode_packet_tracks_rest_evolution() {
        let (params, grid) = setup();
        let c = C::from_polar(0.5f64.sqrt(), 0.3);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0i64, c);
        let (packet, _) = build_periodic_packet(&coeffs, 0.0, &params, &grid, false).unwrap();
        let rest = RestPacket::new(c, 0.0, params, grid).unwrap();
        for i in 0..6 {
            let t = 0.77 * i as f64;
            let a = evolve_periodic(&packet, t);
            let b = rest_evolve(&rest, t);
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x[0] - y[0]).norm() < 1e-13);
                assert!((x[1] - y[1]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn massless_packet_recurs_at_the_common_period() {
        let l = 2.0 * std::f64::consts::PI;
        let params = PhysicsParams::natural().with_box_length(l).with_mass(0.0);
        let grid = Grid::uniform(0.0, l, 501).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1i64, C::new(0.3, -0.2));
        coeffs.insert(2i64, C::new(-0.25, 0.15));
        let (packet, field0) = build_periodic_packet(&coeffs, 0.0, &params, &grid, true).unwrap();
        // E_n = |n| in these units, so everything recurs after t = 2 pi
        let back = evolve_periodic(&packet, 2.0 * std::f64::consts::PI);
        for (a, b) in back.values.iter().zip(&field0.values) {
            assert!((a[0] - b[0]).norm() < 1e-12);
            assert!((a[1] - b[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn classical_velocity_values() {
        let (params, _) = setup();
        let zero = MomentumLabel::new(0, &params);
        assert_eq!(
            classical_velocity_eigenvalue(&zero, EnergySign::Plus, &params).unwrap(),
            0.0
        );
        // cp = mc^2 at n = 1 in these units
        let one = MomentumLabel::new(1, &params);
        let v = classical_velocity_eigenvalue(&one, EnergySign::Plus, &params).unwrap();
        assert!((v - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        let vm = classical_velocity_eigenvalue(&one, EnergySign::Minus, &params).unwrap();
        assert!((vm + 1.0 / 2f64.sqrt()).abs() < 1e-14);
        assert!(v.abs() < params.c);
        // |v| -> c from below as |p| grows
        let big = MomentumLabel::new(4000, &params);
        let vbig = classical_velocity_eigenvalue(&big, EnergySign::Plus, &params).unwrap();
        assert!(vbig < params.c && vbig > 0.999_999 * params.c);
        // massless rest mode is undefined
        let m0 = PhysicsParams::natural().with_mass(0.0);
        let label = MomentumLabel::new(0, &m0);
        assert!(classical_velocity_eigenvalue(&label, EnergySign::Plus, &m0).is_err());
    }

    #[test]
    fn bc_matrices_and_their_guards() {
        let id = bc_matrix(&BCFamily::Diagonal { m1: 1.0, m3: 0.0 }).unwrap();
        assert_eq!(id[0][0], C::new(1.0, 0.0));
        assert_eq!(id[1][1], C::new(1.0, 0.0));
        assert_eq!(id[0][1], C::new(0.0, 0.0));

        let mx = bc_matrix(&BCFamily::Antidiagonal { m0: 0.0, m2: 1.0 }).unwrap();
        assert_eq!(mx[0][1], C::new(-1.0, 0.0));
        assert_eq!(mx[1][0], C::new(-1.0, 0.0));
        assert_eq!(mx[0][0], C::new(0.0, 0.0));

        assert!(bc_matrix(&BCFamily::Diagonal { m1: 0.5, m3: 0.5 }).is_err());
        assert!(bc_matrix(&BCFamily::Antidiagonal { m0: 1.0, m2: 0.0 }).is_err());
        assert!(bc_matrix(&BCFamily::Diagonal { m1: 0.0, m3: 1.0 }).is_err());
    }

    #[test]
    fn transfer_matrix_holds_on_general_diagonal_family() {
        // A diagonal-family solution: same bulk modes, endpoint values
        // related by the matrix. Verify on the packet field: periodic is the
        // m1 = 1 member, so Psi(L) = Psi(0) exactly.
        let (params, grid) = setup();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1i64, C::new(0.5, 0.25));
        let (packet, _) = build_periodic_packet(&coeffs, 0.0, &params, &grid, true).unwrap();
        let psi = evolve_periodic(&packet, 1.7);
        let first = psi.values[0];
        let last = *psi.values.last().unwrap();
        assert_eq!(first, last);
    }
}
