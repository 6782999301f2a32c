//! Symmetric banded eigensolver: LDL^T inertia, Sturm bisection for the
//! k smallest eigenvalues, and shifted inverse iteration for eigenvectors.
//!
//! This is deliberately self-contained and deterministic: the verification
//! pipeline diffs two independent runs byte for byte, so the solver must not
//! depend on thread counts, hash ordering, or an external BLAS.

use rand_core::RngCore;

use crate::scalar::{real, real_usize, Real};

/// Symmetric banded matrix in lower band storage:
/// `bands[b][i] = A[i + b][i]` for `b = 0..=bw`.
#[derive(Clone, Debug)]
pub struct BandedSym<T: Real> {
    n: usize,
    bw: usize,
    bands: Vec<Vec<T>>,
}

/// Relative pivot floor for the guarded LDL^T factorization. Shifting
/// exactly onto an eigenvalue makes a pivot underflow; clamping it keeps the
/// inertia count and the inverse-iteration solve well defined.
const PIVOT_GUARD: f64 = 1e-14;

/// Fixed bisection depth for Sturm eigenvalue extraction. 62 halvings of
/// the Gerschgorin interval reach the f64 resolution limit regardless of
/// scale, and a fixed count keeps runs reproducible.
const STURM_ITERATIONS: usize = 62;

const INVERSE_ITERATIONS: usize = 4;

impl<T: Real> BandedSym<T> {
    pub fn new(n: usize, bw: usize) -> Self {
        assert!(n > 0 && bw < n, "banded matrix needs 0 < bw + 1 <= n");
        let bands = (0..=bw).map(|b| vec![T::zero(); n - b]).collect();
        BandedSym { n, bw, bands }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Adds `v` at (i, j) and, when off-diagonal, mirrors it at (j, i).
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let b = hi - lo;
        assert!(b <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        self.bands[b][lo] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let b = hi - lo;
        if b > self.bw {
            T::zero()
        } else {
            self.bands[b][lo]
        }
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![T::zero(); self.n];
        for i in 0..self.n {
            let mut acc = self.bands[0][i] * v[i];
            for b in 1..=self.bw {
                if i >= b {
                    acc += self.bands[b][i - b] * v[i - b];
                }
                if i + b < self.n {
                    acc += self.bands[b][i] * v[i + b];
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn dense(&self) -> Vec<Vec<T>> {
        let mut a = vec![vec![T::zero(); self.n]; self.n];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.get(i, j);
            }
        }
        a
    }

    fn guard_scale(&self) -> T {
        let mut scale = T::one();
        for band in &self.bands {
            for &v in band {
                scale = scale.max(v.abs());
            }
        }
        scale * real(PIVOT_GUARD)
    }

    /// Guarded LDL^T factorization of A - shift I.
    pub fn factor_shifted(&self, shift: T) -> Ldlt<T> {
        let n = self.n;
        let m = self.bw;
        let tiny = self.guard_scale();
        let mut d = vec![T::zero(); n];
        let mut l = (1..=m).map(|b| vec![T::zero(); n - b]).collect::<Vec<_>>();
        let mut negatives = 0usize;
        for j in 0..n {
            let mut dj = self.bands[0][j] - shift;
            let k0 = j.saturating_sub(m);
            for k in k0..j {
                let ljk = l[j - k - 1][k];
                dj -= ljk * ljk * d[k];
            }
            if dj.abs() < tiny {
                dj = if dj < T::zero() { -tiny } else { tiny };
            }
            if dj < T::zero() {
                negatives += 1;
            }
            d[j] = dj;
            for i in j + 1..(j + m + 1).min(n) {
                let mut acc = self.get(i, j);
                let k0 = i.saturating_sub(m);
                for k in k0..j {
                    acc -= l[i - k - 1][k] * l[j - k - 1][k] * d[k];
                }
                l[i - j - 1][j] = acc / dj;
            }
        }
        Ldlt { n, m, l, d, negatives }
    }

    /// Number of eigenvalues strictly below `shift` (Sylvester inertia).
    pub fn count_below(&self, shift: T) -> usize {
        self.factor_shifted(shift).negatives
    }

    /// Gerschgorin bounds (lo, hi) enclosing the whole spectrum.
    pub fn gerschgorin(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..self.n {
            let mut radius = T::zero();
            for b in 1..=self.bw {
                if i >= b {
                    radius += self.bands[b][i - b].abs();
                }
                if i + b < self.n {
                    radius += self.bands[b][i].abs();
                }
            }
            lo = lo.min(self.bands[0][i] - radius);
            hi = hi.max(self.bands[0][i] + radius);
        }
        (lo, hi)
    }

    /// The k smallest eigenvalues, ascending, by per-index Sturm bisection.
    pub fn k_smallest(&self, k: usize) -> Vec<T> {
        let k = k.min(self.n);
        let (glo, ghi) = self.gerschgorin();
        let pad = (ghi - glo).abs() * real::<T>(1e-12) + real::<T>(1e-300);
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let mut lo = glo - pad;
            let mut hi = ghi + pad;
            for _ in 0..STURM_ITERATIONS {
                let mid = lo + (hi - lo) / real(2.0);
                if !(mid > lo && mid < hi) {
                    break;
                }
                if self.count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(lo + (hi - lo) / real(2.0));
        }
        out
    }

    /// Eigenvectors for the given (ascending, possibly repeated) eigenvalues
    /// by shifted inverse iteration with in-cluster Gram-Schmidt. The start
    /// vectors come from the caller's RNG, so a fixed seed fixes the output.
    pub fn inverse_iteration<R: RngCore>(
        &self,
        lambdas: &[T],
        rng: &mut R,
    ) -> Vec<Vec<T>> {
        let mut vectors: Vec<Vec<T>> = Vec::with_capacity(lambdas.len());
        for &lam in lambdas {
            let factors = self.factor_shifted(lam);
            let mut v: Vec<T> = (0..self.n).map(|_| uniform_pm_half(rng)).collect();
            normalize(&mut v);
            for _ in 0..INVERSE_ITERATIONS {
                let mut w = factors.solve(&v);
                for prev in &vectors {
                    let overlap = dot(&w, prev);
                    for (wi, pi) in w.iter_mut().zip(prev) {
                        *wi -= overlap * *pi;
                    }
                }
                let norm = dot(&w, &w).sqrt();
                if norm <= T::zero() || !norm.is_finite() {
                    // degenerate start direction; redraw
                    w = (0..self.n).map(|_| uniform_pm_half(rng)).collect();
                    normalize(&mut w);
                } else {
                    let inv = T::one() / norm;
                    for wi in w.iter_mut() {
                        *wi *= inv;
                    }
                }
                v = w;
            }
            vectors.push(v);
        }
        vectors
    }
}

/// Guarded LDL^T factors of A - shift I.
pub struct Ldlt<T: Real> {
    n: usize,
    m: usize,
    l: Vec<Vec<T>>, // l[b - 1][j] = L[j + b][j]
    d: Vec<T>,
    pub negatives: usize,
}

impl<T: Real> Ldlt<T> {
    // band offsets couple x[i] to x[i +/- b]; index loops keep that visible
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        assert_eq!(rhs.len(), self.n);
        let mut x = rhs.to_vec();
        for i in 0..self.n {
            let k0 = i.saturating_sub(self.m);
            let mut acc = x[i];
            for k in k0..i {
                acc -= self.l[i - k - 1][k] * x[k];
            }
            x[i] = acc;
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= *di;
        }
        for i in (0..self.n).rev() {
            let mut acc = x[i];
            for b in 1..=self.m {
                if i + b < self.n {
                    acc -= self.l[b - 1][i] * x[i + b];
                }
            }
            x[i] = acc;
        }
        x
    }
}

/// Ring-to-band fold: position of original index j in the reordering
/// 0, n-1, 1, n-2, 2, ... that interleaves the two ends. Nearest-neighbour
/// couplings on a ring of n sites (wraparound included) land within
/// bandwidth 2 after folding, distance-2 couplings within bandwidth 4.
pub fn fold_permutation(n: usize) -> Vec<usize> {
    (0..n)
        .map(|j| if j < n.div_ceil(2) { 2 * j } else { 2 * (n - 1 - j) + 1 })
        .collect()
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn normalize<T: Real>(v: &mut [T]) {
    let norm = dot(v, v).sqrt();
    if norm > T::zero() {
        let inv = T::one() / norm;
        for x in v.iter_mut() {
            *x *= inv;
        }
    }
}

/// Uniform draw in [-1/2, 1/2) from the top 53 bits of the generator.
fn uniform_pm_half<T: Real, R: RngCore>(rng: &mut R) -> T {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    real(u - 0.5)
}

/// Eigendecomposition of a small dense symmetric matrix by cyclic Jacobi
/// rotations. Returns eigenvalues ascending with matching eigenvectors as
/// columns (`vecs[i][j]` = component i of eigenvector j). Used for the
/// cluster-classification matrices, which never exceed a handful of rows.
// rotations update two rows/columns in lockstep; index loops keep the pairing visible
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigh<T: Real>(a: &[Vec<T>]) -> (Vec<T>, Vec<Vec<T>>) {
    let n = a.len();
    let mut m = a.to_vec();
    let mut v = vec![vec![T::zero(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale = m
        .iter()
        .flatten()
        .fold(T::zero(), |acc, &x| acc.max(x.abs()))
        .max(T::one());
    let threshold = scale * T::epsilon() * real_usize::<T>(n * n);
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m[p][q].abs());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.abs() <= threshold {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (real::<T>(2.0) * apq);
                let t = {
                    let s = if theta < T::zero() { -T::one() } else { T::one() };
                    s / (theta.abs() + (T::one() + theta * theta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    let vals = order.iter().map(|&i| m[i][i]).collect();
    let mut vecs = vec![vec![T::zero(); n]; n];
    for (newj, &oldj) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i][newj] = v[i][oldj];
        }
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn toeplitz(n: usize) -> BandedSym<f64> {
        let mut a = BandedSym::new(n, 1);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i + 1 < n {
                a.add(i + 1, i, -1.0);
            }
        }
        a
    }

    #[test]
    fn sturm_matches_tridiagonal_toeplitz_formula() {
        let n = 20;
        let a = toeplitz(n);
        let got = a.k_smallest(6);
        for (j, &lam) in got.iter().enumerate() {
            let want = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((lam - want).abs() < 1e-12, "index {j}: {lam} vs {want}");
        }
    }

    #[test]
    fn gerschgorin_contains_spectrum() {
        let a = toeplitz(15);
        let (lo, hi) = a.gerschgorin();
        assert!(lo <= 2.0 - 2.0 * (std::f64::consts::PI / 16.0).cos());
        assert!(hi >= 2.0 + 2.0 * (15.0 * std::f64::consts::PI / 16.0).cos().abs());
    }

    #[test]
    fn count_below_matches_jacobi_on_dense() {
        let n = 10;
        let mut a = BandedSym::new(n, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..n {
            a.add(i, i, 1.0 + uniform_pm_half::<f64, _>(&mut rng));
            if i + 1 < n {
                a.add(i + 1, i, uniform_pm_half::<f64, _>(&mut rng));
            }
            if i + 2 < n {
                a.add(i + 2, i, uniform_pm_half::<f64, _>(&mut rng));
            }
        }
        let (vals, _) = jacobi_eigh(&a.dense());
        for shift in [-1.0, 0.0, 0.4, 0.9, 1.3, 2.5] {
            let want = vals.iter().filter(|&&w| w < shift).count();
            assert_eq!(a.count_below(shift), want, "shift {shift}");
        }
        // and the k_smallest values agree with Jacobi
        let got = a.k_smallest(n);
        for (g, w) in got.iter().zip(&vals) {
            assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_iteration_residuals_distinct() {
        let a = toeplitz(30);
        let lambdas = a.k_smallest(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vecs = a.inverse_iteration(&lambdas, &mut rng);
        for (lam, v) in lambdas.iter().zip(&vecs) {
            let av = a.matvec(v);
            let mut worst: f64 = 0.0;
            for (x, y) in av.iter().zip(v) {
                worst = worst.max((x - lam * y).abs());
            }
            assert!(worst < 1e-9, "residual {worst} at lambda {lam}");
        }
    }

    #[test]
    fn folded_ring_laplacian_degenerate_pairs() {
        // Ring Laplacian eigenvalues 2 - 2 cos(2 pi k / n), doubly degenerate
        // for 0 < k < n/2. Assembled in folded coordinates to stay banded.
        let n = 31usize;
        let perm = fold_permutation(n);
        let mut a = BandedSym::new(n, 2);
        for i in 0..n {
            let ip = (i + 1) % n;
            a.add(perm[i], perm[i], 2.0);
            a.add(perm[i], perm[ip], -1.0);
        }
        let lambdas = a.k_smallest(5);
        let want = [
            0.0,
            2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos(),
            2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos(),
            2.0 - 2.0 * (4.0 * std::f64::consts::PI / n as f64).cos(),
            2.0 - 2.0 * (4.0 * std::f64::consts::PI / n as f64).cos(),
        ];
        for (g, w) in lambdas.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
        // inverse iteration stays orthonormal inside the degenerate cluster
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vecs = a.inverse_iteration(&lambdas, &mut rng);
        for i in 0..vecs.len() {
            for j in 0..=i {
                let overlap = dot(&vecs[i], &vecs[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((overlap - want).abs() < 1e-9, "({i},{j}): {overlap}");
            }
            let av = a.matvec(&vecs[i]);
            let mut worst: f64 = 0.0;
            for (x, y) in av.iter().zip(&vecs[i]) {
                worst = worst.max((x - lambdas[i] * y).abs());
            }
            assert!(worst < 1e-8, "residual {worst} in degenerate cluster");
        }
    }

    #[test]
    fn fold_keeps_ring_neighbours_within_band_four() {
        for n in [5usize, 8, 31, 100, 4001] {
            let perm = fold_permutation(n);
            let mut seen = vec![false; n];
            for &p in &perm {
                assert!(!seen[p]);
                seen[p] = true;
            }
            for i in 0..n {
                for d in 1..=2usize {
                    let j = (i + d) % n;
                    let dist = perm[i].abs_diff(perm[j]);
                    assert!(dist <= 4, "n {n}: sites {i},{j} land {dist} apart");
                }
            }
        }
    }

    #[test]
    fn jacobi_small_exact() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]];
        let (vals, vecs) = jacobi_eigh(&a);
        let want = [2.0 - std::f64::consts::SQRT_2, 2.0, 2.0 + std::f64::consts::SQRT_2];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - w).abs() < 1e-13);
        }
        // reconstruction A = V diag V^T
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += vecs[i][k] * vals[k] * vecs[j][k];
                }
                assert!((acc - a[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn solve_inverts_factorization() {
        let a = toeplitz(12);
        let f = a.factor_shifted(0.0);
        let rhs: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin()).collect();
        let x = f.solve(&rhs);
        let ax = a.matvec(&x);
        for (got, want) in ax.iter().zip(&rhs) {
            assert!((got - want).abs() < 1e-11);
        }
    }
}
