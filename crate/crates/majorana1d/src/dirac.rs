//! Domain types and the operators every scenario shares: Majorana
//! representations of the gamma matrices, charge conjugation, the
//! Hamiltonian as a grid operator, Simpson inner products, observable mean
//! values, and the probability current.
//!
//! Conventions: metric g = diag(1, -1); standard representation
//! gamma0 = sigma_y, gamma1 = -i sigma_z, so alpha = gamma0 gamma1 = sigma_x
//! is real and beta = gamma0 is purely imaginary. The Hamiltonian is
//! h = -i hbar c sigma_x d/dx + (S + m c^2) sigma_y, which is purely
//! imaginary entrywise: h = -h*. That single fact drives the whole Majorana
//! story (real fields stay real under evolution).

use num_complex::Complex;

use crate::scalar::{real, real_usize, to_f64, Real};
use crate::{tol, Error, Result};

/// 2x2 complex matrix, row major. Concrete arrays keep conjugation and
/// integer entries exact and avoid a linear-algebra dependency.
pub type Mat2<T> = [[Complex<T>; 2]; 2];

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(real(re), real(im))
}

/// Matrix product a b.
pub fn mat2_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Apply m to a two-component value.
pub fn mat2_apply<T: Real>(m: &Mat2<T>, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

fn sigma_x<T: Real>() -> Mat2<T> {
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

fn sigma_y<T: Real>() -> Mat2<T> {
    [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]
}

fn sigma_z<T: Real>() -> Mat2<T> {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
}

/// The three Majorana representation variants: the standard pair and its
/// sigma_y / sigma_x similarity transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepVariant {
    Standard,
    Primed,
    DoublePrimed,
}

/// A gamma-matrix pair in one Majorana representation.
#[derive(Clone, Debug)]
pub struct GammaPair<T: Real> {
    pub gamma0: Mat2<T>,
    pub gamma1: Mat2<T>,
    pub variant: RepVariant,
}

impl<T: Real> GammaPair<T> {
    /// alpha = gamma0 gamma1; real entrywise in any Majorana representation.
    pub fn alpha(&self) -> Mat2<T> {
        mat2_mul(&self.gamma0, &self.gamma1)
    }

    /// beta = gamma0; purely imaginary entrywise.
    pub fn beta(&self) -> Mat2<T> {
        self.gamma0
    }

    /// Max-norm of {gamma_mu, gamma_nu} - 2 g_mu_nu; exactly zero because
    /// every entry is an exact small integer (or i times one).
    pub fn clifford_defect(&self) -> T {
        let g = [&self.gamma0, &self.gamma1];
        let metric = [T::one(), -T::one()];
        let mut worst = T::zero();
        for mu in 0..2 {
            for nu in 0..2 {
                let anti = add2(
                    &mat2_mul(g[mu], g[nu]),
                    &mat2_mul(g[nu], g[mu]),
                );
                for (i, row) in anti.iter().enumerate() {
                    for (j, entry) in row.iter().enumerate() {
                        let want = if mu == nu && i == j {
                            metric[mu] + metric[mu]
                        } else {
                            T::zero()
                        };
                        let d = (*entry - Complex::new(want, T::zero())).norm();
                        if d > worst {
                            worst = d;
                        }
                    }
                }
            }
        }
        worst
    }

    /// Max entrywise imaginary part of i gamma_mu; zero is the defining
    /// property of a Majorana representation.
    pub fn igamma_imag_defect(&self) -> T {
        let i = Complex::new(T::zero(), T::one());
        let mut worst = T::zero();
        for m in [&self.gamma0, &self.gamma1] {
            for row in m.iter() {
                for entry in row.iter() {
                    let d = (*entry * i).im.abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        worst
    }
}

fn add2<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut out = *a;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = *entry + b[i][j];
        }
    }
    out
}

/// Build a gamma pair. The primed and double-primed variants are obtained
/// by actually conjugating the standard pair with sigma_y / sigma_x, so the
/// similarity relations hold exactly, not just numerically.
pub fn make_representation<T: Real>(variant: RepVariant) -> GammaPair<T> {
    let gamma0 = sigma_y::<T>();
    let gamma1 = {
        // -i sigma_z
        let mut m = sigma_z::<T>();
        let mi = c::<T>(0.0, -1.0);
        for row in m.iter_mut() {
            for entry in row.iter_mut() {
                *entry = *entry * mi;
            }
        }
        m
    };
    match variant {
        RepVariant::Standard => GammaPair {
            gamma0,
            gamma1,
            variant,
        },
        RepVariant::Primed => {
            let s = sigma_y::<T>();
            GammaPair {
                gamma0: mat2_mul(&mat2_mul(&s, &gamma0), &s),
                gamma1: mat2_mul(&mat2_mul(&s, &gamma1), &s),
                variant,
            }
        }
        RepVariant::DoublePrimed => {
            let s = sigma_x::<T>();
            GammaPair {
                gamma0: mat2_mul(&mat2_mul(&s, &gamma0), &s),
                gamma1: mat2_mul(&mat2_mul(&s, &gamma1), &s),
                variant,
            }
        }
    }
}

/// Physical constants of a run. `l` is the box length (box scenarios only);
/// `k` is the scalar-potential slope (linear scenario only).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicsParams<T: Real> {
    pub hbar: T,
    pub c: T,
    pub m: T,
    pub l: T,
    pub k: Option<T>,
}

impl<T: Real> PhysicsParams<T> {
    /// Natural units: hbar = c = m = L = 1, no slope.
    pub fn natural() -> Self {
        PhysicsParams {
            hbar: T::one(),
            c: T::one(),
            m: T::one(),
            l: T::one(),
            k: None,
        }
    }

    pub fn with_box_length(mut self, l: T) -> Self {
        self.l = l;
        self
    }

    pub fn with_mass(mut self, m: T) -> Self {
        self.m = m;
        self
    }

    pub fn with_slope(mut self, k: T) -> Self {
        self.k = Some(k);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: T, name: &str| -> Result<()> {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be strictly positive and finite, got {}",
                    to_f64(v)
                )))
            }
        };
        pos(self.hbar, "hbar")?;
        pos(self.c, "c")?;
        pos(self.l, "L")?;
        if !(self.m >= T::zero() && self.m.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "m must be nonnegative and finite, got {}",
                to_f64(self.m)
            )));
        }
        if let Some(k) = self.k {
            pos(k, "k")?;
        }
        Ok(())
    }

    /// Rest energy m c^2.
    pub fn mc2(&self) -> T {
        self.m * self.c * self.c
    }

    /// Rest-state rotation frequency omega = m c^2 / hbar.
    pub fn omega(&self) -> T {
        self.mc2() / self.hbar
    }

    /// Zero-crossing of S + m c^2 for the linear potential: x0 = m c^2 / k.
    pub fn x0(&self) -> Result<T> {
        Ok(self.mc2() / self.slope()?)
    }

    /// Slope of the linear potential; input error when absent.
    pub fn slope(&self) -> Result<T> {
        self.k
            .ok_or_else(|| Error::InvalidInput("slope k required by the linear scenario".into()))
    }

    /// Dimensionless box parameter lambda = hbar / (m c L); controls the
    /// existence of the evanescent mode (present iff lambda < 1).
    pub fn lambda(&self) -> T {
        self.hbar / (self.m * self.c * self.l)
    }
}

/// Lorentz scalar potential S(x), entering the Dirac equation through the
/// mass term S + m c^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalarPotential<T: Real> {
    Zero,
    Linear { k: T },
}

impl<T: Real> ScalarPotential<T> {
    pub fn eval(&self, x: T) -> T {
        match self {
            ScalarPotential::Zero => T::zero(),
            ScalarPotential::Linear { k } => *k * x,
        }
    }

    /// dS/dx, constant for the supported kinds.
    pub fn slope(&self) -> T {
        match self {
            ScalarPotential::Zero => T::zero(),
            ScalarPotential::Linear { k } => *k,
        }
    }
}

/// Whether the grid endpoints are distinct wall points of a line segment or
/// identified points of a ring. Ring fields carry equal first/last values
/// and stencil operations use the periodic image instead of one-sided
/// differences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    Line,
    Ring,
}

/// Uniform grid x_i = a + i (b - a)/(n - 1), endpoints included. The point
/// count is odd by construction so composite Simpson weights always apply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid<T: Real> {
    a: T,
    b: T,
    n: usize,
    topology: Topology,
}

impl<T: Real> Grid<T> {
    pub fn uniform(a: T, b: T, n: usize) -> Result<Self> {
        Self::build(a, b, n, Topology::Line)
    }

    /// Periodic grid over one closed period [a, b]; x = a and x = b are the
    /// same physical point sampled twice.
    pub fn ring(a: T, b: T, n: usize) -> Result<Self> {
        Self::build(a, b, n, Topology::Ring)
    }

    fn build(a: T, b: T, n: usize, topology: Topology) -> Result<Self> {
        // negated comparison so NaN endpoints fail validation
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid needs finite a < b, got [{}, {}]",
                to_f64(a),
                to_f64(b)
            )));
        }
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "grid point count must be odd and >= 3, got {n}"
            )));
        }
        Ok(Grid { a, b, n, topology })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> T {
        (self.b - self.a) / real_usize(self.n - 1)
    }

    pub fn x(&self, i: usize) -> T {
        debug_assert!(i < self.n);
        if i == self.n - 1 {
            self.b
        } else {
            self.a + (self.b - self.a) * real_usize::<T>(i) / real_usize(self.n - 1)
        }
    }

    pub fn start(&self) -> T {
        self.a
    }

    pub fn end(&self) -> T {
        self.b
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn xs(&self) -> Vec<T> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Grid identity check used by binary operations on fields.
    pub fn same_as(&self, other: &Grid<T>) -> bool {
        self == other
    }
}

/// Two-component complex field Psi = [phi1, phi2]^T sampled on a grid.
#[derive(Clone, Debug)]
pub struct SpinorField<T: Real> {
    pub grid: Grid<T>,
    pub values: Vec<[Complex<T>; 2]>,
}

impl<T: Real> SpinorField<T> {
    pub fn new(grid: Grid<T>, values: Vec<[Complex<T>; 2]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(SpinorField { grid, values })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        let n = grid.len();
        SpinorField {
            grid,
            values: vec![[z, z]; n],
        }
    }

    /// Build from a closed-form evaluator at each grid point.
    pub fn from_fn(grid: Grid<T>, mut f: impl FnMut(T) -> [Complex<T>; 2]) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.x(i))).collect();
        SpinorField { grid, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// self += coeff * other. Grids must match.
    pub fn add_scaled(&mut self, coeff: Complex<T>, other: &SpinorField<T>) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("add_scaled on different grids".into()));
        }
        for (v, o) in self.values.iter_mut().zip(&other.values) {
            v[0] = v[0] + coeff * o[0];
            v[1] = v[1] + coeff * o[1];
        }
        Ok(())
    }

    pub fn scale(&mut self, s: Complex<T>) {
        for v in self.values.iter_mut() {
            v[0] = v[0] * s;
            v[1] = v[1] * s;
        }
    }

    /// Largest componentwise imaginary magnitude; a real field measures 0.
    pub fn max_imag(&self) -> T {
        let mut worst = T::zero();
        for v in &self.values {
            for comp in v {
                let a = comp.im.abs();
                if a > worst {
                    worst = a;
                }
            }
        }
        worst
    }
}

fn same_grid<T: Real>(a: &SpinorField<T>, b: &SpinorField<T>) -> Result<()> {
    if a.grid.same_as(&b.grid) {
        Ok(())
    } else {
        Err(Error::GridMismatch(
            "fields live on different grids".into(),
        ))
    }
}

fn simpson_coeff<T: Real>(i: usize, n: usize) -> T {
    if i == 0 || i == n - 1 {
        T::one()
    } else if i % 2 == 1 {
        real(4.0)
    } else {
        real(2.0)
    }
}

/// <phi, chi> = integral of phi^dagger chi by composite Simpson.
/// Conjugate-symmetric by construction: swapping arguments conjugates
/// every term of the sum.
pub fn inner_product<T: Real>(phi: &SpinorField<T>, chi: &SpinorField<T>) -> Result<Complex<T>> {
    same_grid(phi, chi)?;
    let n = phi.len();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        let w: T = simpson_coeff(i, n);
        let term =
            phi.values[i][0].conj() * chi.values[i][0] + phi.values[i][1].conj() * chi.values[i][1];
        acc = acc + term * w;
    }
    Ok(acc * (phi.grid.dx() / real(3.0)))
}

/// L2 norm sqrt(<psi, psi>).
pub fn norm<T: Real>(psi: &SpinorField<T>) -> T {
    inner_product(psi, psi)
        .expect("identical grids")
        .re
        .sqrt()
}

/// Rescale to unit norm; returns the factor that was applied.
pub fn normalize<T: Real>(psi: &mut SpinorField<T>) -> T {
    let factor = T::one() / norm(psi);
    psi.scale(Complex::new(factor, T::zero()));
    factor
}

/// Componentwise d/dx by second-order stencils. Interior points use the
/// central difference; on a Line the endpoints use the one-sided
/// second-order formula, on a Ring they use the periodic image (the grid
/// stores one closed period, so the left neighbour of x_0 is x_{n-2}).
pub fn spatial_derivative<T: Real>(psi: &SpinorField<T>) -> SpinorField<T> {
    let n = psi.len();
    let dx = psi.grid.dx();
    let two_dx = dx + dx;
    let mut out = SpinorField::zeros(psi.grid);
    for comp in 0..2 {
        for i in 1..n - 1 {
            out.values[i][comp] = (psi.values[i + 1][comp] - psi.values[i - 1][comp])
                / Complex::new(two_dx, T::zero());
        }
        match psi.grid.topology() {
            Topology::Line => {
                let three = real::<T>(3.0);
                let four = real::<T>(4.0);
                out.values[0][comp] = (psi.values[0][comp] * -three + psi.values[1][comp] * four
                    - psi.values[2][comp])
                    / Complex::new(two_dx, T::zero());
                out.values[n - 1][comp] = (psi.values[n - 1][comp] * three
                    - psi.values[n - 2][comp] * four
                    + psi.values[n - 3][comp])
                    / Complex::new(two_dx, T::zero());
            }
            Topology::Ring => {
                let d = (psi.values[1][comp] - psi.values[n - 2][comp])
                    / Complex::new(two_dx, T::zero());
                out.values[0][comp] = d;
                out.values[n - 1][comp] = d;
            }
        }
    }
    out
}

/// h Psi = -i hbar c sigma_x dPsi/dx + (S + m c^2) sigma_y Psi on the grid.
/// Interior accuracy O(dx^2); used for residual checks only, evolution is
/// always spectral.
pub fn apply_hamiltonian<T: Real>(
    psi: &SpinorField<T>,
    pot: &ScalarPotential<T>,
    params: &PhysicsParams<T>,
) -> SpinorField<T> {
    let d = spatial_derivative(psi);
    let hc = params.hbar * params.c;
    let mc2 = params.mc2();
    let mut out = SpinorField::zeros(psi.grid);
    let i = Complex::new(T::zero(), T::one());
    for idx in 0..psi.len() {
        let mass = pot.eval(psi.grid.x(idx)) + mc2;
        // (sigma_x dPsi)_1 = d2, (sigma_x dPsi)_2 = d1
        // (sigma_y Psi)_1 = -i psi2, (sigma_y Psi)_2 = i psi1
        out.values[idx][0] =
            -i * (d.values[idx][1] * hc + psi.values[idx][1] * mass);
        out.values[idx][1] =
            i * (psi.values[idx][0] * mass - d.values[idx][0] * hc);
    }
    out
}

/// Psi_C = Psi*: in the Majorana representation the conjugation matrix is
/// the identity, so charge conjugation is entrywise complex conjugation.
pub fn charge_conjugate<T: Real>(psi: &SpinorField<T>) -> SpinorField<T> {
    let values = psi
        .values
        .iter()
        .map(|v| [v[0].conj(), v[1].conj()])
        .collect();
    SpinorField {
        grid: psi.grid,
        values,
    }
}

/// Max-norm of Psi - e^{i theta} Psi* over the grid; zero iff the
/// generalized Majorana condition holds there.
pub fn majorana_defect<T: Real>(psi: &SpinorField<T>, theta: T) -> T {
    let phase = Complex::new(T::zero(), theta).exp();
    let mut worst = T::zero();
    for v in &psi.values {
        for comp in v {
            let d = (*comp - phase * comp.conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Observable tags accepted by [`mean_value`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    /// The Hamiltonian h.
    H,
    /// Momentum p = -i hbar d/dx.
    P,
    /// Velocity v = c alpha = c sigma_x.
    V,
}

/// <Psi, O Psi> for a unit-norm field. On real fields <h> and <p> vanish
/// identically (h and p are purely imaginary operators), while <v> is real
/// and need not vanish; those statements hold in the continuum whenever the
/// boundary term of the integration by parts dies (periodic closure,
/// confining walls for h, decay at infinity).
pub fn mean_value<T: Real>(
    observable: Observable,
    psi: &SpinorField<T>,
    pot: &ScalarPotential<T>,
    params: &PhysicsParams<T>,
) -> Result<Complex<T>> {
    let nrm = norm(psi);
    if (nrm - T::one()).abs() > real(tol::NORM_PRECONDITION) {
        return Err(Error::Unnormalized { norm: to_f64(nrm) });
    }
    let applied = match observable {
        Observable::H => apply_hamiltonian(psi, pot, params),
        Observable::P => {
            let mut d = spatial_derivative(psi);
            d.scale(Complex::new(T::zero(), -params.hbar));
            d
        }
        Observable::V => {
            let mut out = SpinorField::zeros(psi.grid);
            for i in 0..psi.len() {
                out.values[i][0] = psi.values[i][1] * params.c;
                out.values[i][1] = psi.values[i][0] * params.c;
            }
            out
        }
    };
    inner_product(psi, &applied)
}

/// Probability current j = c Psi^dagger sigma_x Psi = 2 c Re(phi1* phi2) at
/// one grid point; real by construction. Confining walls are exactly the
/// conditions that cancel it at both ends.
pub fn probability_current<T: Real>(
    psi: &SpinorField<T>,
    index: usize,
    params: &PhysicsParams<T>,
) -> Result<T> {
    if index >= psi.len() {
        return Err(Error::InvalidInput(format!(
            "current index {index} out of range for {} points",
            psi.len()
        )));
    }
    let v = psi.values[index];
    let two = T::one() + T::one();
    Ok(two * params.c * (v[0].conj() * v[1]).re)
}

/// Grids are positional contracts for the scenario modules: eigenstate
/// formulas assume [0, L] (boxes) or the truncated symmetric domain (linear
/// potential), so a mismatched grid is an input error, not a silent rescale.
pub(crate) fn require_span<T: Real>(grid: &Grid<T>, a: T, b: T) -> Result<()> {
    let scale = (b - a).abs().max(T::one());
    let tol = scale * real(1e-12);
    if (grid.start() - a).abs() > tol || (grid.end() - b).abs() > tol {
        return Err(Error::InvalidInput(format!(
            "grid spans [{}, {}], the scenario needs [{}, {}]",
            to_f64(grid.start()),
            to_f64(grid.end()),
            to_f64(a),
            to_f64(b)
        )));
    }
    Ok(())
}

/// Which of the two energy branches (+E or -E) an eigenstate belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergySign {
    Plus,
    Minus,
}

impl EnergySign {
    pub fn factor<T: Real>(self) -> T {
        match self {
            EnergySign::Plus => T::one(),
            EnergySign::Minus => -T::one(),
        }
    }
}

/// The four confining wall conditions; exactly these cancel the current at
/// both walls while staying compatible with the Majorana condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfiningBC {
    /// phi2(0) = phi2(L) = 0.
    DirichletLower,
    /// phi1(0) = phi1(L) = 0.
    DirichletUpper,
    /// phi1(0) = 0, phi2(L) = 0.
    MixedA,
    /// phi2(0) = 0, phi1(L) = 0.
    MixedB,
}

/// One-parameter families of non-confining conditions relating Psi(L) to
/// Psi(0) by a transfer matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BCFamily<T: Real> {
    /// Psi(L) = -(i m0 sigma_y + sigma_x)/m2 Psi(0); antidiagonal matrix,
    /// constraint m0^2 + m2^2 = 1, m2 != 0.
    Antidiagonal { m0: T, m2: T },
    /// Psi(L) = (m3 sigma_z + 1)/m1 Psi(0); diagonal matrix, constraint
    /// m1^2 + m3^2 = 1, m1 != 0. m1 = 1, m3 = 0 is the periodic condition.
    Diagonal { m1: T, m3: T },
}

/// Boundary condition tags shared across modules. `Decay` is the closure
/// used for unbounded domains truncated to a finite grid (both components
/// pinned at both ends; valid for Gaussian-decay states only).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition<T: Real> {
    Periodic,
    Family(BCFamily<T>),
    Confining(ConfiningBC),
    Decay,
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn grid(n: usize) -> Grid<f64> {
        Grid::uniform(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn representations_satisfy_clifford_exactly() {
        for variant in [
            RepVariant::Standard,
            RepVariant::Primed,
            RepVariant::DoublePrimed,
        ] {
            let rep = make_representation::<f64>(variant);
            assert_eq!(rep.clifford_defect(), 0.0, "{variant:?}");
            assert_eq!(rep.igamma_imag_defect(), 0.0, "{variant:?}");
        }
    }

    #[test]
    fn standard_representation_matrices() {
        let rep = make_representation::<f64>(RepVariant::Standard);
        assert_eq!(rep.gamma0, sigma_y::<f64>());
        assert_eq!(rep.gamma1[0][0], C::new(0.0, -1.0));
        assert_eq!(rep.gamma1[1][1], C::new(0.0, 1.0));
        // alpha = sigma_x (real), beta = sigma_y (purely imaginary)
        assert_eq!(rep.alpha(), sigma_x::<f64>());
        for row in rep.beta() {
            for entry in row {
                assert_eq!(entry.re, 0.0);
            }
        }
    }

    #[test]
    fn double_primed_flips_gamma0_sign() {
        let std = make_representation::<f64>(RepVariant::Standard);
        let dp = make_representation::<f64>(RepVariant::DoublePrimed);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(dp.gamma0[i][j], -std.gamma0[i][j]);
            }
        }
    }

    #[test]
    fn charge_conjugation_examples() {
        let g = grid(5);
        let psi = SpinorField::from_fn(g, |_| [C::new(1.0, 0.0), C::new(0.0, 1.0)]);
        let conj = charge_conjugate(&psi);
        for v in &conj.values {
            assert_eq!(v[0], C::new(1.0, 0.0));
            assert_eq!(v[1], C::new(0.0, -1.0));
        }
        // involution
        let back = charge_conjugate(&conj);
        for (a, b) in back.values.iter().zip(&psi.values) {
            assert_eq!(a, b);
        }
        // real fields are fixed points
        let re = SpinorField::from_fn(g, |x| [C::new(x, 0.0), C::new(1.0 - x, 0.0)]);
        for (a, b) in charge_conjugate(&re).values.iter().zip(&re.values) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn majorana_defect_examples() {
        let g = grid(5);
        let re = SpinorField::from_fn(g, |x| [C::new(x, 0.0), C::new(2.0 * x, 0.0)]);
        assert_eq!(majorana_defect(&re, 0.0), 0.0);

        let theta = 0.7;
        let phase = C::new(0.0, theta / 2.0).exp();
        let mut shifted = re.clone();
        shifted.scale(phase);
        assert!(majorana_defect(&shifted, theta) < 1e-15);
        assert!(majorana_defect(&shifted, 0.0) > 0.1);

        let iy = SpinorField::from_fn(g, |_| [C::new(1.0, 0.0), C::new(0.0, 1.0)]);
        assert!((majorana_defect(&iy, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_on_rest_eigenstate_is_exact() {
        // Constant field => derivative exactly zero, so h Psi = mc^2 sigma_y Psi
        // with no discretization error at all, interior and ends alike.
        let params = PhysicsParams::<f64>::natural();
        let g = grid(9);
        let a = (0.5f64 / 1.0).sqrt() / 1.0; // sqrt(1/2L), L = 1
        let psi = SpinorField::from_fn(g, |_| [C::new(a, 0.0), C::new(0.0, a)]);
        let h = apply_hamiltonian(&psi, &ScalarPotential::Zero, &params);
        for (hv, v) in h.values.iter().zip(&psi.values) {
            assert!((hv[0] - v[0]).norm() < 1e-15);
            assert!((hv[1] - v[1]).norm() < 1e-15);
        }
    }

    #[test]
    fn hamiltonian_of_massless_constant_is_zero() {
        let params = PhysicsParams::<f64>::natural().with_mass(0.0);
        let psi = SpinorField::from_fn(grid(9), |_| [C::new(1.0, 0.0), C::new(0.0, 0.0)]);
        let h = apply_hamiltonian(&psi, &ScalarPotential::Zero, &params);
        for v in &h.values {
            assert_eq!(v[0], C::new(0.0, 0.0));
            assert_eq!(v[1], C::new(0.0, 0.0));
        }
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let g = grid(101);
        let f = SpinorField::from_fn(g, |x| [C::new(x * x * x, 0.0), C::new(0.0, 0.0)]);
        let one = SpinorField::from_fn(g, |_| [C::new(1.0, 0.0), C::new(0.0, 0.0)]);
        let v = inner_product(&one, &f).unwrap();
        assert!((v.re - 0.25).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn inner_product_conjugate_symmetry() {
        let g = grid(21);
        let a = SpinorField::from_fn(g, |x| [C::new(x, 0.3 - x), C::new(x * x, 0.1)]);
        let b = SpinorField::from_fn(g, |x| [C::new(1.0 - x, x), C::new(0.2, x * 0.5)]);
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
        let aa = inner_product(&a, &a).unwrap();
        assert!(aa.re >= 0.0);
        assert!(aa.im.abs() < 1e-16);
    }

    #[test]
    fn mean_value_requires_unit_norm() {
        let params = PhysicsParams::<f64>::natural();
        let psi = SpinorField::from_fn(grid(9), |_| [C::new(3.0, 0.0), C::new(0.0, 0.0)]);
        let err = mean_value(Observable::H, &psi, &ScalarPotential::Zero, &params).unwrap_err();
        match err {
            Error::Unnormalized { norm } => assert!((norm - 3.0).abs() < 1e-12),
            other => panic!("expected Unnormalized, got {other:?}"),
        }
    }

    #[test]
    fn velocity_mean_on_equal_components_is_c() {
        let params = PhysicsParams::<f64>::natural();
        let g = grid(2001);
        // [f, f] with real f: Psi^dag sigma_x Psi = 2 f^2, integrates to 1.
        let mut psi = SpinorField::from_fn(g, |x| {
            let f = 1.0 + (2.0 * std::f64::consts::PI * x).cos();
            [C::new(f, 0.0), C::new(f, 0.0)]
        });
        normalize(&mut psi);
        let v = mean_value(Observable::V, &psi, &ScalarPotential::Zero, &params).unwrap();
        assert!((v.re - params.c).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn derivative_of_ring_closure_wraps() {
        let l = 2.0 * std::f64::consts::PI;
        let g = Grid::ring(0.0, l, 129).unwrap();
        let psi = SpinorField::from_fn(g, |x| [C::new(x.sin(), 0.0), C::new(0.0, 0.0)]);
        let d = spatial_derivative(&psi);
        // wrapped endpoint derivative matches cos(0) = 1 to O(dx^2)
        assert!((d.values[0][0].re - 1.0).abs() < 1e-3);
        assert_eq!(d.values[0][0], d.values[128][0]);
    }

    #[test]
    fn probability_current_formula_and_bounds() {
        let params = PhysicsParams::<f64>::natural();
        let g = grid(5);
        let psi = SpinorField::from_fn(g, |x| [C::new(x, 0.0), C::new(0.5, 0.0)]);
        let j = probability_current(&psi, 2, &params).unwrap();
        let x = g.x(2);
        assert!((j - 2.0 * x * 0.5).abs() < 1e-15);
        assert!(probability_current(&psi, 5, &params).is_err());
    }

    #[test]
    fn grid_constructors_enforce_odd_counts() {
        assert!(Grid::<f64>::uniform(0.0, 1.0, 4).is_err());
        assert!(Grid::<f64>::uniform(0.0, 1.0, 1).is_err());
        assert!(Grid::<f64>::uniform(1.0, 0.0, 5).is_err());
        let g = Grid::<f64>::uniform(0.0, 2.0, 5).unwrap();
        assert_eq!(g.x(4), 2.0);
        assert_eq!(g.dx(), 0.5);
    }

    #[test]
    fn params_validation() {
        assert!(PhysicsParams::<f64>::natural().validate().is_ok());
        assert!(PhysicsParams::<f64>::natural()
            .with_box_length(-1.0)
            .validate()
            .is_err());
        assert!(PhysicsParams::<f64>::natural()
            .with_slope(0.0)
            .validate()
            .is_err());
        let p = PhysicsParams::<f64>::natural().with_slope(2.0);
        assert_eq!(p.x0().unwrap(), 0.5);
        assert!(PhysicsParams::<f64>::natural().x0().is_err());
    }

    #[test]
    fn works_in_f32_too() {
        let rep = make_representation::<f32>(RepVariant::Primed);
        assert_eq!(rep.clifford_defect(), 0.0);
        let g = Grid::<f32>::uniform(0.0, 1.0, 9).unwrap();
        let psi = SpinorField::from_fn(g, |_| {
            [Complex::new(0.5f32, 0.0), Complex::new(0.5, 0.0)]
        });
        assert!(majorana_defect(&psi, 0.0) == 0.0);
    }
}
