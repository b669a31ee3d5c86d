//! Numerical evaluation of theta nullwerte and their gradients, with
//! rigorous truncation bounds, plus the modular action on the Siegel upper
//! half-space and the fourth-power transformation residual.
//!
//! The series evaluated at `z = 0` is
//!
//! ```text
//! theta[m](tau) = sum_(p in Z^g) exp(pi i tau[p + a/2] + 2 pi i (p + a/2)'(b/2))
//! ```
//!
//! truncated to `max-norm(p + a/2) <= R` where `R` is the smallest integer
//! with `g (2R+3)^(g-1) exp(-pi lambda_min (R - 1/2)^2) <= tol`; the reported
//! `trunc_bound` is this shell bound, a conservative envelope of the
//! discarded tail for `lambda_min >= 0.3`.

use crate::chars::{Characteristic, Parity};
use crate::error::{Error, Result};
use crate::symplectic::IntegerSymplectic;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Hard cap on the truncation radius.
pub const MAX_RADIUS: usize = 40;
/// Lower bound on the smallest eigenvalue of `Im(tau)` accepted by the
/// evaluator; below it the shell bound is no longer a dominated series.
pub const MIN_LAMBDA: f64 = 0.3;
/// Default evaluation tolerance.
pub const DEFAULT_TOL: f64 = 1e-13;

/// A point of the Siegel upper half-space: complex symmetric with positive
/// definite imaginary part. Both parts are stored row-major.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    g: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    lambda_min: f64,
}

impl SiegelPoint {
    /// Validates symmetry (residual at most 1e-12 entrywise) and positive
    /// definiteness (attempted Cholesky factorization).
    pub fn new(g: usize, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != g * g || im.len() != g * g {
            return Err(Error::Dimension(format!(
                "Siegel point of genus {g} needs {} entries per part",
                g * g
            )));
        }
        for part in [&re, &im] {
            for i in 0..g {
                for j in (i + 1)..g {
                    if (part[i * g + j] - part[j * g + i]).abs() > 1e-12 {
                        return Err(Error::BadSiegelPoint(format!(
                            "symmetry residual {:e} at ({i},{j})",
                            (part[i * g + j] - part[j * g + i]).abs()
                        )));
                    }
                }
            }
        }
        if !cholesky_ok(&im, g) {
            return Err(Error::BadSiegelPoint(
                "imaginary part is not positive definite".into(),
            ));
        }
        let lambda_min = symmetric_min_eigenvalue(&im, g);
        Ok(SiegelPoint {
            g,
            re,
            im,
            lambda_min,
        })
    }

    /// The diagonal point `i t I`.
    pub fn scaled_identity(g: usize, t: f64) -> Result<Self> {
        let mut im = vec![0.0; g * g];
        for i in 0..g {
            im[i * g + i] = t;
        }
        SiegelPoint::new(g, vec![0.0; g * g], im)
    }

    /// Seeded sample: `Im = I + (1/4) Q'Q` with `Q` uniform in
    /// `[-1/2, 1/2]^(g x g)` (drawn row-major), `Re` symmetric with upper
    /// triangle uniform in `[-1/2, 1/2]` (drawn row-major, then mirrored).
    /// Guarantees `lambda_min >= 1`.
    pub fn sample(g: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::draw(g, &mut rng)
    }

    /// A deterministic stream of samples from one seed.
    pub fn sample_stream(g: usize, seed: u64, n: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Self::draw(g, &mut rng)).collect()
    }

    fn draw(g: usize, rng: &mut ChaCha8Rng) -> Self {
        let q: Vec<f64> = (0..g * g).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let mut im = vec![0.0; g * g];
        for i in 0..g {
            for j in 0..g {
                let mut s = 0.0;
                for k in 0..g {
                    s += q[k * g + i] * q[k * g + j];
                }
                im[i * g + j] = 0.25 * s + if i == j { 1.0 } else { 0.0 };
            }
        }
        let mut re = vec![0.0; g * g];
        for i in 0..g {
            for j in i..g {
                let x = rng.gen_range(-0.5..0.5);
                re[i * g + j] = x;
                re[j * g + i] = x;
            }
        }
        SiegelPoint::new(g, re, im).expect("sampled points are valid by construction")
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[i * self.g + j], self.im[i * self.g + j])
    }

    /// `tau + 2 S` for an integer symmetric `S` given as 0/1 entries.
    pub fn translate(&self, s: &crate::f2::F2Matrix) -> Result<SiegelPoint> {
        if s.nrows() != self.g || s.ncols() != self.g {
            return Err(Error::Dimension("translation block size".into()));
        }
        let mut re = self.re.clone();
        for i in 0..self.g {
            for j in 0..self.g {
                if s.get(i, j) {
                    re[i * self.g + j] += 2.0;
                }
            }
        }
        SiegelPoint::new(self.g, re, self.im.clone())
    }
}

/// Value of a nullwert together with the bound on the discarded tail.
#[derive(Clone, Copy, Debug)]
pub struct ThetaEval {
    pub value: Complex64,
    pub trunc_bound: f64,
}

/// Gradient at `z = 0` with the bound on the discarded tail.
#[derive(Clone, Debug)]
pub struct GradientEval {
    pub components: Vec<Complex64>,
    pub trunc_bound: f64,
}

fn shell_bound(g: usize, lambda: f64, radius: usize) -> f64 {
    let r = radius as f64;
    (g as f64) * (2.0 * r + 3.0).powi(g as i32 - 1) * (-PI * lambda * (r - 0.5) * (r - 0.5)).exp()
}

fn gradient_shell_bound(g: usize, lambda: f64, radius: usize) -> f64 {
    2.0 * PI * (radius as f64 + 1.0) * shell_bound(g, lambda, radius)
}

fn pick_radius(
    tol: f64,
    bound: impl Fn(usize) -> f64,
) -> Result<(usize, f64)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    for r in 1..=MAX_RADIUS {
        let b = bound(r);
        if b <= tol {
            return Ok((r, b));
        }
    }
    Err(Error::ToleranceUnreachable {
        tol,
        max_radius: MAX_RADIUS,
    })
}

fn guard_lambda(tau: &SiegelPoint) -> Result<()> {
    if tau.lambda_min() < MIN_LAMBDA {
        return Err(Error::BadSiegelPoint(format!(
            "smallest eigenvalue of the imaginary part is {:.6}, below the evaluation guard {}",
            tau.lambda_min(),
            MIN_LAMBDA
        )));
    }
    Ok(())
}

/// Iterates over all integer vectors `p` with `max-norm(p + a/2) <= R`,
/// calling `f(q)` with `q = p + a/2`.
fn for_each_lattice_point(
    m: &Characteristic,
    radius: usize,
    mut f: impl FnMut(&[f64]),
) {
    let g = m.genus();
    let r = radius as i64;
    let mut lo = vec![0i64; g];
    let mut hi = vec![0i64; g];
    for i in 0..g {
        if m.a().get(i) {
            lo[i] = -r;
            hi[i] = r - 1;
        } else {
            lo[i] = -r;
            hi[i] = r;
        }
    }
    let mut p = lo.clone();
    let mut q = vec![0.0; g];
    'outer: loop {
        for i in 0..g {
            q[i] = p[i] as f64 + if m.a().get(i) { 0.5 } else { 0.0 };
        }
        f(&q);
        let mut i = 0;
        loop {
            p[i] += 1;
            if p[i] <= hi[i] {
                break;
            }
            p[i] = lo[i];
            i += 1;
            if i == g {
                break 'outer;
            }
        }
    }
}

fn quad_forms(tau: &SiegelPoint, q: &[f64]) -> (f64, f64) {
    let g = tau.genus();
    let mut sx = 0.0;
    let mut sy = 0.0;
    for i in 0..g {
        let mut rx = 0.0;
        let mut ry = 0.0;
        for j in 0..g {
            rx += tau.re[i * g + j] * q[j];
            ry += tau.im[i * g + j] * q[j];
        }
        sx += q[i] * rx;
        sy += q[i] * ry;
    }
    (sx, sy)
}

fn b_dot(m: &Characteristic, q: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..m.genus() {
        if m.b().get(i) {
            s += q[i];
        }
    }
    s
}

/// Truncated series value at a fixed radius (no bound bookkeeping).
pub(crate) fn theta_raw(m: &Characteristic, tau: &SiegelPoint, radius: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_lattice_point(m, radius, |q| {
        let (sx, sy) = quad_forms(tau, q);
        let phase = PI * (sx + b_dot(m, q));
        let (sin, cos) = phase.sin_cos();
        let amp = (-PI * sy).exp();
        acc += Complex64::new(amp * cos, amp * sin);
    });
    acc
}

pub(crate) fn gradient_raw(
    m: &Characteristic,
    tau: &SiegelPoint,
    radius: usize,
) -> Vec<Complex64> {
    let g = m.genus();
    let mut acc = vec![Complex64::new(0.0, 0.0); g];
    for_each_lattice_point(m, radius, |q| {
        let (sx, sy) = quad_forms(tau, q);
        let phase = PI * (sx + b_dot(m, q));
        let (sin, cos) = phase.sin_cos();
        let amp = (-PI * sy).exp();
        let term = Complex64::new(amp * cos, amp * sin);
        for j in 0..g {
            acc[j] += Complex64::new(0.0, 2.0 * PI * q[j]) * term;
        }
    });
    acc
}

/// Internal `z`-dependent evaluator, used by the gradient finite-difference
/// test only.
#[cfg(test)]
pub(crate) fn theta_z_raw(
    m: &Characteristic,
    tau: &SiegelPoint,
    z: &[Complex64],
    radius: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_lattice_point(m, radius, |q| {
        let (sx, sy) = quad_forms(tau, q);
        let mut zr = 0.0;
        let mut zi = 0.0;
        for j in 0..m.genus() {
            zr += q[j] * z[j].re;
            zi += q[j] * z[j].im;
        }
        let phase = PI * (sx + b_dot(m, q)) + 2.0 * PI * zr;
        let (sin, cos) = phase.sin_cos();
        let amp = (-PI * sy - 2.0 * PI * zi).exp();
        acc += Complex64::new(amp * cos, amp * sin);
    });
    acc
}

/// Theta nullwert with a truncation bound at most `tol`.
pub fn theta_nullwert(m: &Characteristic, tau: &SiegelPoint, tol: f64) -> Result<ThetaEval> {
    if m.genus() != tau.genus() {
        return Err(Error::GenusMismatch(m.genus(), tau.genus()));
    }
    guard_lambda(tau)?;
    let g = m.genus();
    let lambda = tau.lambda_min();
    let (radius, bound) = pick_radius(tol, |r| shell_bound(g, lambda, r))?;
    Ok(ThetaEval {
        value: theta_raw(m, tau, radius),
        trunc_bound: bound,
    })
}

/// Gradient of the nullwert at `z = 0`; identically zero for even `m`, which
/// is rejected as misuse.
pub fn theta_gradient(m: &Characteristic, tau: &SiegelPoint, tol: f64) -> Result<GradientEval> {
    if m.genus() != tau.genus() {
        return Err(Error::GenusMismatch(m.genus(), tau.genus()));
    }
    if m.parity() != Parity::Odd {
        return Err(Error::WrongParity { expected: "odd" });
    }
    guard_lambda(tau)?;
    let g = m.genus();
    let lambda = tau.lambda_min();
    let (radius, bound) = pick_radius(tol, |r| gradient_shell_bound(g, lambda, r))?;
    Ok(GradientEval {
        components: gradient_raw(m, tau, radius),
        trunc_bound: bound,
    })
}

/// A fourth symmetric tensor power, indexed by multisets `i <= j <= k <= l`
/// in lexicographic order; the coefficient at a multiset is the plain
/// product of the vector entries (no multinomial weights).
#[derive(Clone, Debug)]
pub struct Sym4Tensor {
    g: usize,
    pub coeffs: Vec<Complex64>,
}

/// Lexicographic list of the multisets indexing `Sym4Tensor` coefficients.
pub fn multiset_indices(g: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..g {
        for j in i..g {
            for k in j..g {
                for l in k..g {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// `binom(g + 3, 4)`, the coefficient count.
pub fn sym4_dim(g: usize) -> usize {
    (g + 3) * (g + 2) * (g + 1) * g / 24
}

pub fn sym4(v: &[Complex64]) -> Sym4Tensor {
    let g = v.len();
    let coeffs = multiset_indices(g)
        .into_iter()
        .map(|[i, j, k, l]| v[i] * v[j] * v[k] * v[l])
        .collect();
    Sym4Tensor { g, coeffs }
}

impl Sym4Tensor {
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
}

/// The modular action `sigma(tau) = (A tau + B)(C tau + D)^(-1)`; the result
/// is re-validated as a Siegel point.
pub fn modular_apply(sigma: &IntegerSymplectic, tau: &SiegelPoint) -> Result<SiegelPoint> {
    if sigma.genus() != tau.genus() {
        return Err(Error::GenusMismatch(sigma.genus(), tau.genus()));
    }
    let g = tau.genus();
    let to_c = |block: Vec<i64>| -> Vec<Complex64> {
        block
            .into_iter()
            .map(|x| Complex64::new(x as f64, 0.0))
            .collect()
    };
    let (a, b, c, d) = (
        to_c(sigma.block('A')),
        to_c(sigma.block('B')),
        to_c(sigma.block('C')),
        to_c(sigma.block('D')),
    );
    let tmat: Vec<Complex64> = (0..g * g)
        .map(|idx| tau.entry(idx / g, idx % g))
        .collect();
    let num = cmat_add(&cmat_mul(&a, &tmat, g), &b, g); // A tau + B
    let den = cmat_add(&cmat_mul(&c, &tmat, g), &d, g); // C tau + D
    // tau' = num den^(-1): solve den' X = num', transpose back
    let dent = cmat_transpose(&den, g);
    let numt = cmat_transpose(&num, g);
    let xt = csolve(&dent, &numt, g)
        .ok_or_else(|| Error::NumericalBreakdown("C tau + D is numerically singular".into()))?;
    let x = cmat_transpose(&xt, g);
    let re: Vec<f64> = x.iter().map(|z| z.re).collect();
    let im: Vec<f64> = x.iter().map(|z| z.im).collect();
    SiegelPoint::new(g, re, im)
}

/// `det(C tau + D)` by partially pivoted LU.
pub fn det_c_tau_d(sigma: &IntegerSymplectic, tau: &SiegelPoint) -> Result<Complex64> {
    if sigma.genus() != tau.genus() {
        return Err(Error::GenusMismatch(sigma.genus(), tau.genus()));
    }
    let g = tau.genus();
    let c = sigma.block('C');
    let d = sigma.block('D');
    let mut den = vec![Complex64::new(0.0, 0.0); g * g];
    for i in 0..g {
        for j in 0..g {
            let mut acc = Complex64::new(d[i * g + j] as f64, 0.0);
            for k in 0..g {
                acc += Complex64::new(c[i * g + k] as f64, 0.0) * tau.entry(k, j);
            }
            den[i * g + j] = acc;
        }
    }
    Ok(cdet(&den, g))
}

/// Normalized residual of the fourth-power transformation law
/// `theta[sigma{m}]^4(sigma(tau)) = eps_m(sigma) det(C tau + D)^2 theta[m]^4(tau)`.
pub fn check_transformation_4th(
    sigma: &IntegerSymplectic,
    m: &Characteristic,
    tau: &SiegelPoint,
    tol: f64,
) -> Result<f64> {
    if m.parity() != Parity::Even {
        return Err(Error::WrongParity { expected: "even" });
    }
    if sigma.genus() != m.genus() || sigma.genus() != tau.genus() {
        return Err(Error::GenusMismatch(sigma.genus(), tau.genus()));
    }
    let reduced = sigma.reduce();
    let moved = reduced.act(m)?;
    let eps = reduced.epsilon(m)? as f64;
    let det = det_c_tau_d(sigma, tau)?;
    let tau_moved = modular_apply(sigma, tau)?;
    let theta_here = theta_nullwert(m, tau, tol)?.value;
    let theta_there = theta_nullwert(&moved, &tau_moved, tol)?.value;
    let lhs = theta_there.powu(4);
    let rhs = eps * det * det * theta_here.powu(4);
    let scale = (theta_here.powu(4) * det * det).norm().max(1.0);
    Ok((lhs - rhs).norm() / scale)
}

// ---- small dense complex helpers -------------------------------------------------

fn cmat_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn cmat_add(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..n * n).map(|i| a[i] + b[i]).collect()
}

fn cmat_transpose(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j];
        }
    }
    out
}

/// Solves `A X = B` for square `A` (both row-major `n x n`); `None` when a
/// pivot degenerates.
fn csolve(a: &[Complex64], b: &[Complex64], n: usize) -> Option<Vec<Complex64>> {
    let mut lu = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let mut best = col;
        for r in (col + 1)..n {
            if lu[r * n + col].norm() > lu[best * n + col].norm() {
                best = r;
            }
        }
        if lu[best * n + col].norm() == 0.0 {
            return None;
        }
        if best != col {
            for j in 0..n {
                lu.swap(col * n + j, best * n + j);
                x.swap(col * n + j, best * n + j);
            }
        }
        let piv = lu[col * n + col];
        for r in 0..n {
            if r != col {
                let f = lu[r * n + col] / piv;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = lu[col * n + j] * f;
                    lu[r * n + j] -= v;
                    let w = x[col * n + j] * f;
                    x[r * n + j] -= w;
                }
            }
        }
    }
    for i in 0..n {
        let piv = lu[i * n + i];
        for j in 0..n {
            x[i * n + j] /= piv;
        }
    }
    Some(x)
}

/// Determinant by partially pivoted elimination.
pub(crate) fn cdet(a: &[Complex64], n: usize) -> Complex64 {
    let mut lu = a.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut best = col;
        for r in (col + 1)..n {
            if lu[r * n + col].norm() > lu[best * n + col].norm() {
                best = r;
            }
        }
        if lu[best * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if best != col {
            for j in 0..n {
                lu.swap(col * n + j, best * n + j);
            }
            det = -det;
        }
        let piv = lu[col * n + col];
        det *= piv;
        for r in (col + 1)..n {
            let f = lu[r * n + col] / piv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = lu[col * n + j] * f;
                lu[r * n + j] -= v;
            }
        }
    }
    det
}

fn cholesky_ok(a: &[f64], n: usize) -> bool {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = 0.5 * (a[i * n + j] + a[j * n + i]);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    true
}

/// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
fn symmetric_min_eigenvalue(a_in: &[f64], n: usize) -> f64 {
    if n == 1 {
        return a_in[0];
    }
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (a_in[i * n + j] + a_in[j * n + i]);
        }
    }
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[i * n + j].abs());
            }
        }
        let scale = (0..n).map(|i| a[i * n + i].abs()).fold(1.0f64, f64::max);
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n)
        .map(|i| a[i * n + i])
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::CharTable;
    use crate::symplectic::GeneratorSet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn siegel_point_validation() {
        assert!(SiegelPoint::new(2, vec![0.0, 0.1, 0.2, 0.0], vec![1.0, 0.0, 0.0, 1.0]).is_err());
        assert!(SiegelPoint::new(1, vec![0.0], vec![-1.0]).is_err());
        let tau = SiegelPoint::scaled_identity(3, 2.0).unwrap();
        assert!((tau.lambda_min() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_keeps_lambda_min_at_least_one() {
        for g in 1..=3 {
            for seed in 0..10 {
                let tau = SiegelPoint::sample(g, seed);
                assert!(tau.lambda_min() >= 1.0 - 1e-9, "g={g} seed={seed}");
            }
        }
        // stream head agrees with the single sample
        let one = SiegelPoint::sample(2, 7);
        let stream = SiegelPoint::sample_stream(2, 7, 3);
        assert_eq!(one.re(), stream[0].re());
        assert_eq!(one.im(), stream[0].im());
    }

    #[test]
    fn odd_nullwert_vanishes() {
        let tau = SiegelPoint::scaled_identity(1, 1.0).unwrap();
        let m: Characteristic = "1|1".parse().unwrap();
        let v = theta_nullwert(&m, &tau, 1e-13).unwrap();
        assert!(v.value.norm() < 1e-13);
        let tau2 = SiegelPoint::sample(2, 3);
        let table = CharTable::new(2);
        for m in table.sector(Parity::Odd) {
            let v = theta_nullwert(m, &tau2, 1e-13).unwrap();
            assert!(v.value.norm() < 1e-12, "{m}");
        }
    }

    #[test]
    fn even_nullwerte_bounded_away_from_zero_on_samples() {
        for g in 1..=3 {
            let table = CharTable::new(g);
            for seed in 0..4 {
                let tau = SiegelPoint::sample(g, seed);
                for m in table.sector(Parity::Even) {
                    let v = theta_nullwert(m, &tau, 1e-13).unwrap();
                    assert!(v.value.norm() > 1e-3, "g={g} seed={seed} m={m}");
                }
            }
        }
    }

    #[test]
    fn genus_one_value_at_i_and_jacobi_identity() {
        let tau = SiegelPoint::scaled_identity(1, 1.0).unwrap();
        let t00 = theta_nullwert(&"0|0".parse().unwrap(), &tau, 1e-13).unwrap().value;
        let t01 = theta_nullwert(&"0|1".parse().unwrap(), &tau, 1e-13).unwrap().value;
        let t10 = theta_nullwert(&"1|0".parse().unwrap(), &tau, 1e-13).unwrap().value;
        // pi^(1/4) / Gamma(3/4)
        assert!((t00.re - 1.0864348112133080).abs() < 1e-12);
        assert!(t00.im.abs() < 1e-13);
        let resid = (t00.powu(4) - t01.powu(4) - t10.powu(4)).norm();
        let max3 = t00.norm().max(t01.norm()).max(t10.norm()).powi(3);
        assert!(resid <= 3.0 * 1e-13 * max3 * 4.0, "residual {resid:e}");
    }

    #[test]
    fn oversummation_oracle_bounds_the_tail() {
        for g in 1..=3 {
            let tau = SiegelPoint::scaled_identity(g, 2.0).unwrap();
            let table = CharTable::new(g);
            for m in table.sector(Parity::Even).iter().take(6) {
                let eval = theta_nullwert(m, &tau, 1e-13).unwrap();
                let lambda = tau.lambda_min();
                let (radius, _) = pick_radius(1e-13, |r| shell_bound(g, lambda, r)).unwrap();
                let more = theta_raw(m, &tau, radius + 10);
                assert!(
                    (eval.value - more).norm() <= 2.0 * eval.trunc_bound.max(1e-16),
                    "g={g} m={m}"
                );
            }
        }
    }

    #[test]
    fn gradient_matches_oversummation_and_rejects_even_input() {
        let tau = SiegelPoint::scaled_identity(1, 1.0).unwrap();
        let m: Characteristic = "1|1".parse().unwrap();
        let grad = theta_gradient(&m, &tau, 1e-13).unwrap();
        assert!(grad.components[0].norm() > 1.0); // nonzero scalar
        let more = gradient_raw(&m, &tau, 14);
        assert!((grad.components[0] - more[0]).norm() <= 2.0 * grad.trunc_bound);
        let even: Characteristic = "0|0".parse().unwrap();
        assert!(matches!(
            theta_gradient(&even, &tau, 1e-13),
            Err(Error::WrongParity { .. })
        ));
    }

    #[test]
    fn even_gradients_cancel_termwise() {
        // under p -> -p - a the summand of the gradient flips sign for even
        // m, so the truncated sums must vanish identically
        let tau = SiegelPoint::sample(2, 11);
        let table = CharTable::new(2);
        for m in table.sector(Parity::Even) {
            let grad = gradient_raw(m, &tau, 6);
            for comp in &grad {
                assert!(comp.norm() < 1e-11, "{m}");
            }
        }
    }

    #[test]
    fn gradient_agrees_with_finite_differences() {
        let h = 1e-5;
        for g in 1..=2 {
            let tau = SiegelPoint::sample(g, 5);
            let table = CharTable::new(g);
            for m in table.sector(Parity::Odd) {
                let grad = theta_gradient(m, &tau, 1e-13).unwrap();
                let radius = 12;
                for j in 0..g {
                    let mut zp = vec![c(0.0, 0.0); g];
                    let mut zm = vec![c(0.0, 0.0); g];
                    zp[j] = c(h, 0.0);
                    zm[j] = c(-h, 0.0);
                    let fd = (theta_z_raw(m, &tau, &zp, radius)
                        - theta_z_raw(m, &tau, &zm, radius))
                        / c(2.0 * h, 0.0);
                    let denom = grad.components[j].norm().max(1e-12);
                    assert!(
                        (fd - grad.components[j]).norm() / denom < 1e-6,
                        "g={g} m={m} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn sym4_examples() {
        let z = sym4(&[c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(z.coeffs.iter().all(|v| v.norm() == 0.0));
        let one = sym4(&[c(3.0, 0.0)]);
        assert_eq!(one.dim(), 1);
        assert!((one.coeffs[0] - c(81.0, 0.0)).norm() < 1e-12);
        let two = sym4(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let want = [1.0, 2.0, 4.0, 8.0, 16.0];
        assert_eq!(two.dim(), 5);
        for (got, want) in two.coeffs.iter().zip(want) {
            assert!((got - c(want, 0.0)).norm() < 1e-12);
        }
        assert_eq!(sym4_dim(3), 15);
        assert_eq!(multiset_indices(3).len(), 15);
    }

    #[test]
    fn modular_action_examples() {
        let tau = SiegelPoint::sample(2, 1);
        let id = IntegerSymplectic::identity(2);
        let same = modular_apply(&id, &tau).unwrap();
        for i in 0..4 {
            assert!((same.re()[i] - tau.re()[i]).abs() < 1e-12);
            assert!((same.im()[i] - tau.im()[i]).abs() < 1e-12);
        }
        // translations shift the real part
        let gens = GeneratorSet::new(2);
        for gen in gens.iter() {
            if let crate::symplectic::GeneratorKind::Translation { s } = &gen.kind {
                let moved = modular_apply(&gen.lift, &tau).unwrap();
                for i in 0..2 {
                    for j in 0..2 {
                        let shift = f64::from(u8::from(s.get(i, j)));
                        assert!(
                            (moved.re()[i * 2 + j] - tau.re()[i * 2 + j] - shift).abs() < 1e-12
                        );
                        assert!((moved.im()[i * 2 + j] - tau.im()[i * 2 + j]).abs() < 1e-12);
                    }
                }
            }
        }
        // i is the fixed point of tau -> -1/tau in genus 1
        let i1 = SiegelPoint::scaled_identity(1, 1.0).unwrap();
        let j = IntegerSymplectic::j_lift(1);
        let moved = modular_apply(&j, &i1).unwrap();
        assert!((moved.re()[0]).abs() < 1e-12);
        assert!((moved.im()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transformation_residual_small_for_generators() {
        let tol = 1e-13;
        for g in 1..=2 {
            let table = CharTable::new(g);
            let gens = GeneratorSet::new(g);
            for seed in 0..3 {
                let tau = SiegelPoint::sample(g, seed);
                for gen in gens.iter() {
                    for m in table.sector(Parity::Even) {
                        let r = check_transformation_4th(&gen.lift, m, &tau, tol).unwrap();
                        assert!(r < 1e-9, "g={g} {} m={m}: {r:e}", gen.label());
                    }
                }
            }
        }
        let id = IntegerSymplectic::identity(1);
        let tau = SiegelPoint::scaled_identity(1, 1.0).unwrap();
        let r = check_transformation_4th(&id, &"0|0".parse().unwrap(), &tau, tol_default())
            .unwrap();
        assert!(r < 1e-14);
    }

    fn tol_default() -> f64 {
        DEFAULT_TOL
    }

    #[test]
    fn lambda_guard_and_bad_tolerance_are_rejected() {
        let thin = SiegelPoint::new(1, vec![0.0], vec![0.2]).unwrap();
        let m: Characteristic = "0|0".parse().unwrap();
        assert!(matches!(
            theta_nullwert(&m, &thin, 1e-13),
            Err(Error::BadSiegelPoint(_))
        ));
        let tau = SiegelPoint::scaled_identity(1, 1.0).unwrap();
        assert!(matches!(
            theta_nullwert(&m, &tau, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }
}
