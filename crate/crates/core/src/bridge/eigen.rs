//! Complex Schur decomposition by Hessenberg reduction and shifted QR,
//! plus LU-based singular value estimates.
//!
//! For a normal matrix the Schur factor is diagonal, so the Schur vectors
//! are an orthonormal eigenbasis.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::dense::ComplexMatrix;
use crate::error::{Result, SpectraError};
use crate::scalar::Real;

/// Unitary `Q` and upper triangular `T` with `A = Q T Q*`.
#[derive(Clone, Debug)]
pub struct Schur<T> {
    pub q: ComplexMatrix<T>,
    pub t: ComplexMatrix<T>,
    pub iterations: usize,
}

/// Reduces `a` to upper Hessenberg form `H = Q* A Q` by Householder reflections.
pub fn hessenberg<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    assert!(a.is_square(), "Hessenberg reduction needs a square matrix");
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm_x == T::zero() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == T::zero() {
            Complex::one()
        } else {
            x0 / x0.norm()
        };
        v[0] = x0 + phase * norm_x;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        let two = T::two();
        // H ← (I − 2vv*) H on rows k+1..n
        for j in 0..n {
            let s: Complex<T> = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            let s = s * two;
            for r in 0..v.len() {
                h[(k + 1 + r, j)] = h[(k + 1 + r, j)] - v[r] * s;
            }
        }
        // H ← H (I − 2vv*) and Q ← Q (I − 2vv*) on columns k+1..n
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let s: Complex<T> = (0..v.len()).map(|r| mat[(i, k + 1 + r)] * v[r]).sum();
                let s = s * two;
                for r in 0..v.len() {
                    mat[(i, k + 1 + r)] = mat[(i, k + 1 + r)] - s * v[r].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
    (h, q)
}

/// Complex Schur form by single-shift QR with Wilkinson shifts.
///
/// `max_iterations` bounds the total number of QR sweeps.
pub fn schur<T: Real>(a: &ComplexMatrix<T>, max_iterations: usize) -> Result<Schur<T>> {
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n < 2 {
        return Ok(Schur { q, t: h, iterations: 0 });
    }
    let eps = T::epsilon();
    let norm = h.frobenius_norm();
    let mut hi = n - 1;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut rotations: Vec<(Complex<T>, Complex<T>)> = Vec::with_capacity(n);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= eps * local || sub <= eps * norm {
                h[(lo, lo - 1)] = Complex::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iterations {
            return Err(SpectraError::NoConvergence { iterations: total - 1 });
        }

        let shift = if since_deflation % 10 == 0 {
            h[(hi, hi)] + Complex::new(T::lit(0.75) * h[(hi, hi - 1)].norm(), T::zero())
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..=hi {
            h[(k, k)] = h[(k, k)] - shift;
        }
        rotations.clear();
        for k in lo..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = x.norm().hypot(y.norm());
            let (c, s) = if r == T::zero() {
                (Complex::one(), Complex::zero())
            } else {
                (x / r, y / r)
            };
            // G = [[c̄, s̄], [−s, c]] zeroes y below x
            for j in k..n {
                let a0 = h[(k, j)];
                let a1 = h[(k + 1, j)];
                h[(k, j)] = c.conj() * a0 + s.conj() * a1;
                h[(k + 1, j)] = -s * a0 + c * a1;
            }
            h[(k + 1, k)] = Complex::zero();
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let top = (k + 2).min(hi + 1);
            // right multiplication by G* = [[c, −s̄], [s, c̄]]
            for i in 0..top {
                let a0 = h[(i, k)];
                let a1 = h[(i, k + 1)];
                h[(i, k)] = a0 * c + a1 * s;
                h[(i, k + 1)] = -(a0 * s.conj()) + a1 * c.conj();
            }
            for i in 0..n {
                let a0 = q[(i, k)];
                let a1 = q[(i, k + 1)];
                q[(i, k)] = a0 * c + a1 * s;
                q[(i, k + 1)] = -(a0 * s.conj()) + a1 * c.conj();
            }
        }
        for k in lo..=hi {
            h[(k, k)] = h[(k, k)] + shift;
        }
    }
    Ok(Schur {
        q,
        t: h,
        iterations: total,
    })
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::half();
    let mean = (a + d) * half;
    let delta = (a - d) * half;
    let disc = (delta * delta + b * c).sqrt();
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Descending lexicographic order on `(re, im)`.
pub fn cmp_desc<T: Real>(a: &Complex<T>, b: &Complex<T>) -> Ordering {
    b.re.partial_cmp(&a.re)
        .unwrap_or(Ordering::Equal)
        .then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
}

/// Unitary `W`, eigenvalues `vals` and residual `‖NW − W diag(vals)‖_F`.
#[derive(Clone, Debug)]
pub struct NormalEigen<T> {
    pub vectors: ComplexMatrix<T>,
    pub values: Vec<Complex<T>>,
    pub residual: T,
}

/// Eigendecomposition of a normal complex matrix, values in descending
/// lexicographic order.
pub fn eig_normal<T: Real>(n: &ComplexMatrix<T>) -> Result<NormalEigen<T>> {
    let dim = n.rows();
    let scale = n.frobenius_norm();
    let defect = n.normality_defect();
    if !(defect <= T::check_tol() * scale * scale) {
        return Err(SpectraError::NotNormal {
            commutator: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let s = schur(n, 100 * dim.max(1))?;
    let diag = s.t.diag();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| cmp_desc(&diag[a], &diag[b]));
    let values: Vec<Complex<T>> = order.iter().map(|&k| diag[k]).collect();
    let vectors = ComplexMatrix::from_fn(dim, dim, |i, j| s.q[(i, order[j])]);
    let residual = (&(n * &vectors) - &vectors.scale_columns(&values)).frobenius_norm();
    Ok(NormalEigen {
        vectors,
        values,
        residual,
    })
}

/// Applies a real function to a Hermitian matrix through its eigenbasis:
/// `W diag(f(λ)) W*`.
pub fn hermitian_function<T: Real>(h: &ComplexMatrix<T>, f: impl Fn(T) -> T) -> Result<ComplexMatrix<T>> {
    let e = eig_normal(h)?;
    let fvals: Vec<Complex<T>> = e.values.iter().map(|l| Complex::new(f(l.re), T::zero())).collect();
    Ok(&e.vectors.scale_columns(&fvals) * &e.vectors.adjoint())
}

/// Largest singular value, from the top eigenvalue of `A*A`.
pub fn sigma_max<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(T::zero());
    }
    let scale = a.max_abs();
    if scale == T::zero() {
        return Ok(T::zero());
    }
    // normalize first so A*A cannot overflow
    let b = a.scale(Complex::new(scale.recip(), T::zero()));
    let g = &b.adjoint() * &b;
    let s = schur(&g, 100 * g.rows())?;
    let top = s.t.diag().iter().map(|z| z.re).fold(T::zero(), T::max);
    Ok(top.max(T::zero()).sqrt() * scale)
}

/// LU factorization with partial pivoting, `PA = LU`.
struct Lu<T> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
    singular: bool,
}

fn lu<T: Real>(a: &ComplexMatrix<T>) -> Lu<T> {
    let n = a.rows();
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut singular = false;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, m[(i, k)].norm()))
            .fold((k, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == T::zero() {
            singular = true;
            continue;
        }
        if p != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = t;
            }
            perm.swap(k, p);
        }
        let pivot = m[(k, k)];
        for i in k + 1..n {
            let f = m[(i, k)] / pivot;
            m[(i, k)] = f;
            for j in k + 1..n {
                let t = m[(k, j)];
                m[(i, j)] = m[(i, j)] - f * t;
            }
        }
    }
    Lu { lu: m, perm, singular }
}

impl<T: Real> Lu<T> {
    /// Solves `A x = b`.
    fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = b.len();
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(i, j)] * x[j];
                x[i] = x[i] - t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[(i, j)] * x[j];
                x[i] = x[i] - t;
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A* x = b`.
    fn solve_adjoint(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = b.len();
        // A* = U* L* P, so solve U* y = b, L* z = y, x = Pᵀ z
        let mut y = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(j, i)].conj() * y[j];
                y[i] = y[i] - t;
            }
            y[i] = y[i] / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[(j, i)].conj() * y[j];
                y[i] = y[i] - t;
            }
        }
        let mut x = vec![Complex::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}

fn vnorm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Smallest singular value of a square matrix by inverse iteration on `A*A`.
///
/// Every iterate `1/‖A⁻¹x‖` (with `‖x‖ = 1`) is an upper bound on the true
/// value; iteration stops when successive bounds agree to `rel_tol` or after
/// `max_iterations`.
pub fn sigma_min_with<T: Real>(a: &ComplexMatrix<T>, rel_tol: T, max_iterations: usize) -> T {
    let n = a.rows();
    if n == 0 {
        return T::zero();
    }
    let f = lu(a);
    if f.singular {
        return T::zero();
    }
    // deterministic start with no special structure
    let mut x: Vec<Complex<T>> = (0..n)
        .map(|i| {
            let t = T::from_usize(i + 1).unwrap();
            Complex::new((t * T::lit(0.7548776662)).sin(), (t * T::lit(0.5698402910)).cos())
        })
        .collect();
    let nx = vnorm(&x);
    x.iter_mut().for_each(|z| *z = *z / nx);
    let mut est = T::infinity();
    for _ in 0..max_iterations {
        let y = f.solve(&x);
        let ny = vnorm(&y);
        if !ny.is_finite() || ny == T::zero() {
            return T::zero();
        }
        let bound = ny.recip();
        // continue with x ← A⁻* A⁻¹ x, whose norm also tightens the estimate
        let z = f.solve_adjoint(&y);
        let nz = vnorm(&z);
        if !nz.is_finite() || nz == T::zero() {
            return T::zero();
        }
        let bound = bound.min((ny / nz).max(T::zero()));
        let done = (est - bound).abs() <= rel_tol * bound;
        est = est.min(bound);
        x = z.iter().map(|v| *v / nz).collect();
        if done {
            break;
        }
    }
    est
}

pub fn sigma_min<T: Real>(a: &ComplexMatrix<T>) -> T {
    sigma_min_with(a, T::lit(1e-12), 5000)
}
