//! Rank-revealing complex least squares.
//!
//! The system is optionally column-equilibrated and reduced by Householder
//! QR. The default method decomposes the triangular factor by one-sided
//! (Hestenes) Jacobi SVD and discards singular directions below
//! `cutoff * sigma_max` (minimum-norm solution). The pivoted method uses
//! column pivoting instead and returns the basic solution, with the
//! trailing unknowns of a numerically rank-deficient system set to zero.

use crate::error::{invalid, Error, Result};
use crate::scalar::{Cx, Real};

/// Row-major `rows x cols` complex matrix with right-hand side.
#[derive(Clone, Debug)]
pub struct DenseSystem<T: Real> {
    rows: usize,
    cols: usize,
    matrix: Vec<Cx<T>>,
    rhs: Vec<Cx<T>>,
}

impl<T: Real> DenseSystem<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let z = Cx::new(T::zero(), T::zero());
        Self {
            rows,
            cols,
            matrix: vec![z; rows * cols],
            rhs: vec![z; rows],
        }
    }

    pub fn from_parts(rows: usize, cols: usize, matrix: Vec<Cx<T>>, rhs: Vec<Cx<T>>) -> Result<Self> {
        if matrix.len() != rows * cols || rhs.len() != rows {
            return Err(invalid(format!(
                "system shape mismatch: {} entries for {rows}x{cols}, rhs length {}",
                matrix.len(),
                rhs.len()
            )));
        }
        Ok(Self { rows, cols, matrix, rhs })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Cx<T> {
        self.matrix[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Cx<T>) {
        self.matrix[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Cx<T>] {
        &self.matrix[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Cx<T>] {
        &mut self.matrix[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rhs(&self) -> &[Cx<T>] {
        &self.rhs
    }

    pub fn rhs_mut(&mut self) -> &mut [Cx<T>] {
        &mut self.rhs
    }

    /// `A x - b`.
    pub fn residual(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(-self.rhs[r], |acc, (&a, &xi)| acc + a * xi)
            })
            .collect()
    }

    pub fn residual_norm(&self, x: &[Cx<T>]) -> T {
        norm2(&self.residual(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LstsqMethod {
    /// Truncated SVD, minimum-norm solution.
    #[default]
    Svd,
    /// QR with column pivoting, basic solution.
    PivotedQr,
}

#[derive(Clone, Copy, Debug)]
pub struct LstsqOptions<T: Real> {
    /// Relative singular-value threshold in `(0, 1)`.
    pub cutoff: T,
    /// Scale every column to unit max magnitude before factorizing.
    /// The returned minimizer is then minimum-norm in the scaled variables.
    pub equilibrate: bool,
    pub method: LstsqMethod,
}

impl<T: Real> Default for LstsqOptions<T> {
    fn default() -> Self {
        Self {
            cutoff: T::of(1e-12),
            equilibrate: true,
            method: LstsqMethod::Svd,
        }
    }
}

impl<T: Real> LstsqOptions<T> {
    pub fn with_cutoff(cutoff: T) -> Self {
        Self {
            cutoff,
            ..Self::default()
        }
    }

    /// Pivoted QR on the raw columns. This is what the reconstruction uses.
    pub fn pivoted(cutoff: T) -> Self {
        Self {
            cutoff,
            equilibrate: false,
            method: LstsqMethod::PivotedQr,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LstsqSolution<T: Real> {
    pub x: Vec<Cx<T>>,
    pub residual_norm: T,
    pub rhs_norm: T,
    pub effective_rank: usize,
    /// Singular values of the (equilibrated) matrix, descending; for the
    /// pivoted method, the magnitudes of the diagonal of `R` instead.
    pub singular_values: Vec<T>,
}

impl<T: Real> LstsqSolution<T> {
    pub fn relative_residual(&self) -> T {
        if self.rhs_norm > T::zero() {
            self.residual_norm / self.rhs_norm
        } else {
            self.residual_norm
        }
    }

    /// `sigma_max / sigma_min` over the retained subspace.
    pub fn condition(&self) -> T {
        match (self.singular_values.first(), self.effective_rank) {
            (Some(&smax), r) if r > 0 => smax / self.singular_values[r - 1],
            _ => T::infinity(),
        }
    }

    /// `sigma_max / sigma_min` over all singular values.
    pub fn full_condition(&self) -> T {
        match (self.singular_values.first(), self.singular_values.last()) {
            (Some(&a), Some(&b)) if b > T::zero() => a / b,
            _ => T::infinity(),
        }
    }
}

pub fn lstsq_solve<T: Real>(system: &DenseSystem<T>, opts: LstsqOptions<T>) -> Result<LstsqSolution<T>> {
    let (m, n) = (system.rows, system.cols);
    if n == 0 {
        return Err(invalid("system has no unknowns"));
    }
    if m < n {
        return Err(Error::Underdetermined { rows: m, unknowns: n });
    }
    if !(opts.cutoff > T::zero() && opts.cutoff < T::one()) {
        return Err(invalid("cutoff must lie in (0, 1)"));
    }
    let finite = |z: &Cx<T>| z.re.is_finite() && z.im.is_finite();
    if !system.matrix.iter().all(finite) || !system.rhs.iter().all(finite) {
        return Err(invalid("system contains non-finite entries"));
    }

    // Column-major working copy, equilibrated.
    let mut scale = vec![T::one(); n];
    let mut overall = T::zero();
    for (j, s) in scale.iter_mut().enumerate() {
        let cmax = (0..m).map(|i| system.get(i, j).norm()).fold(T::zero(), T::max);
        overall = overall.max(cmax);
        if opts.equilibrate && cmax > T::zero() {
            *s = cmax;
        }
    }
    if overall == T::zero() {
        return Err(Error::DegenerateSystem("all-zero matrix".into()));
    }
    let mut a: Vec<Vec<Cx<T>>> = (0..n)
        .map(|j| (0..m).map(|i| system.get(i, j) / scale[j]).collect())
        .collect();
    let mut b = system.rhs.clone();

    if opts.method == LstsqMethod::PivotedQr {
        return pivoted_solution(system, a, b, &scale, opts.cutoff);
    }
    householder_qr(&mut a, &mut b);

    // Upper-triangular factor as columns of length n.
    let zero = Cx::new(T::zero(), T::zero());
    let mut g: Vec<Vec<Cx<T>>> = (0..n)
        .map(|j| (0..n).map(|i| if i <= j { a[j][i] } else { zero }).collect())
        .collect();
    let mut v = identity(n);
    jacobi_svd(&mut g, &mut v);

    let mut sigma: Vec<(T, usize)> = g.iter().enumerate().map(|(j, c)| (norm2(c), j)).collect();
    sigma.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap_or(std::cmp::Ordering::Equal));
    let smax = sigma[0].0;
    let threshold = opts.cutoff * smax;
    let c = &b[..n];

    let mut y = vec![zero; n];
    let mut rank = 0;
    if smax > T::zero() {
        for &(s, j) in &sigma {
            if s < threshold || s == T::zero() {
                continue;
            }
            rank += 1;
            // U_j^H c / sigma_j^2 since g_j = sigma_j U_j
            let proj = g[j]
                .iter()
                .zip(c)
                .fold(zero, |acc, (&gi, &ci)| acc + gi.conj() * ci)
                / (s * s);
            for (yi, &vi) in y.iter_mut().zip(&v[j]) {
                *yi = *yi + vi * proj;
            }
        }
    }
    let x: Vec<Cx<T>> = y.iter().zip(&scale).map(|(&yi, &s)| yi / s).collect();
    let residual_norm = system.residual_norm(&x);
    Ok(LstsqSolution {
        x,
        residual_norm,
        rhs_norm: norm2(&system.rhs),
        effective_rank: rank,
        singular_values: sigma.into_iter().map(|p| p.0).collect(),
    })
}

fn pivoted_solution<T: Real>(
    system: &DenseSystem<T>,
    mut a: Vec<Vec<Cx<T>>>,
    mut b: Vec<Cx<T>>,
    scale: &[T],
    cutoff: T,
) -> Result<LstsqSolution<T>> {
    let n = a.len();
    let zero = Cx::new(T::zero(), T::zero());
    let perm = householder_qr_pivoted(&mut a, &mut b);
    let diag: Vec<T> = (0..n).map(|j| a[j][j].norm()).collect();
    let threshold = cutoff * diag[0];
    let rank = diag.iter().take_while(|&&d| d > threshold && d > T::zero()).count();
    let mut z = vec![zero; n];
    for i in (0..rank).rev() {
        let mut acc = b[i];
        for j in i + 1..rank {
            acc = acc - a[j][i] * z[j];
        }
        z[i] = acc / a[i][i];
    }
    let mut x = vec![zero; n];
    for (k, &col) in perm.iter().enumerate() {
        x[col] = z[k] / scale[col];
    }
    let residual_norm = system.residual_norm(&x);
    Ok(LstsqSolution {
        x,
        residual_norm,
        rhs_norm: norm2(&system.rhs),
        effective_rank: rank,
        singular_values: diag,
    })
}

pub(crate) fn norm2<T: Real>(v: &[Cx<T>]) -> T {
    let amax = v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if amax == T::zero() || !amax.is_finite() {
        return amax;
    }
    let s: T = v.iter().map(|z| (*z / amax).norm_sqr()).sum();
    amax * s.sqrt()
}

fn identity<T: Real>(n: usize) -> Vec<Vec<Cx<T>>> {
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| Cx::new(if i == j { T::one() } else { T::zero() }, T::zero()))
                .collect()
        })
        .collect()
}

/// In-place Householder QR on column-major `a` (m x n); applies `Q^H` to `b`.
/// On return the upper triangle of `a` holds `R`.
fn householder_qr<T: Real>(a: &mut [Vec<Cx<T>>], b: &mut [Cx<T>]) {
    let n = a.len();
    let m = b.len();
    let zero = Cx::new(T::zero(), T::zero());
    let mut v = vec![zero; m];
    for j in 0..n {
        let xnorm = norm2(&a[j][j..]);
        if xnorm == T::zero() {
            continue;
        }
        let x0 = a[j][j];
        let phase = if x0.norm() > T::zero() {
            x0 / x0.norm()
        } else {
            Cx::new(T::one(), T::zero())
        };
        let alpha = -phase * xnorm;
        for i in j..m {
            v[i] = a[j][i];
        }
        v[j] = v[j] - alpha;
        let vnorm2: T = v[j..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        let apply = |col: &mut [Cx<T>]| {
            let dot = v[j..m]
                .iter()
                .zip(&col[j..m])
                .fold(zero, |acc, (&vi, &ci)| acc + vi.conj() * ci);
            let f = dot * T::of(2.0) / vnorm2;
            for (ci, &vi) in col[j..m].iter_mut().zip(&v[j..m]) {
                *ci = *ci - vi * f;
            }
        };
        for col in a.iter_mut().skip(j + 1) {
            apply(col);
        }
        apply(b);
        a[j][j] = alpha;
        for i in j + 1..m {
            a[j][i] = zero;
        }
    }
}

/// Householder QR with column pivoting (largest remaining column norm).
/// Columns of `a` are permuted in place; returns the original index of each
/// column.
fn householder_qr_pivoted<T: Real>(a: &mut [Vec<Cx<T>>], b: &mut [Cx<T>]) -> Vec<usize> {
    let n = a.len();
    let m = b.len();
    let zero = Cx::new(T::zero(), T::zero());
    let mut perm: Vec<usize> = (0..n).collect();
    let mut v = vec![zero; m];
    for j in 0..n.min(m) {
        let best = (j..n)
            .max_by(|&p, &q| norm2(&a[p][j..]).partial_cmp(&norm2(&a[q][j..])).unwrap())
            .unwrap();
        a.swap(j, best);
        perm.swap(j, best);
        let xnorm = norm2(&a[j][j..]);
        if xnorm == T::zero() {
            break;
        }
        let x0 = a[j][j];
        let phase = if x0.norm() > T::zero() { x0 / x0.norm() } else { Cx::new(T::one(), T::zero()) };
        let alpha = -phase * xnorm;
        v[j..m].copy_from_slice(&a[j][j..m]);
        v[j] = v[j] - alpha;
        let vnorm2: T = v[j..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        let apply = |col: &mut [Cx<T>]| {
            let dot = v[j..m].iter().zip(&col[j..m]).fold(zero, |acc, (&vi, &ci)| acc + vi.conj() * ci);
            let f = dot * T::of(2.0) / vnorm2;
            for (ci, &vi) in col[j..m].iter_mut().zip(&v[j..m]) {
                *ci = *ci - vi * f;
            }
        };
        for col in a.iter_mut().skip(j + 1) {
            apply(col);
        }
        apply(b);
        a[j][j] = alpha;
        for i in j + 1..m {
            a[j][i] = zero;
        }
    }
    perm
}

/// One-sided Jacobi: orthogonalizes the columns of `g`, accumulating the
/// rotations in `v`, so that `g_in = g_out * V^H` with orthogonal columns.
fn jacobi_svd<T: Real>(g: &mut [Vec<Cx<T>>], v: &mut [Vec<Cx<T>>]) {
    let n = g.len();
    let tol = T::epsilon() * T::of_usize(n.max(1));
    let zero = Cx::new(T::zero(), T::zero());
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: T = g[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = g[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let gamma = g[p]
                    .iter()
                    .zip(&g[q])
                    .fold(zero, |acc, (&a, &b)| acc + a.conj() * b);
                let gabs = gamma.norm();
                if gabs <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / gabs;
                let zeta = (beta - alpha) / (T::of(2.0) * gabs);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let rot = |cols: &mut [Vec<Cx<T>>]| {
                    let (lo, hi) = cols.split_at_mut(q);
                    let (cp, cq) = (&mut lo[p], &mut hi[0]);
                    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
                        let bq = *b * phase.conj();
                        let na = *a * c - bq * s;
                        let nb = *a * s + bq * c;
                        *a = na;
                        *b = nb;
                    }
                };
                rot(g);
                rot(v);
            }
        }
        if !rotated {
            break;
        }
    }
}
