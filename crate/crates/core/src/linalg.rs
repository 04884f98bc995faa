//! Small dense linear-algebra helpers: Hermitian eigendecomposition with a
//! real fast path, Pfaffians of skew-symmetric matrices and matrix functions
//! used by the entanglement measures.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, C64};

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: DMatrix<C64>,
}

/// Diagonalizes a Hermitian matrix (only the lower triangle is read).
///
/// Matrices whose imaginary parts are all exactly zero go through the real
/// symmetric solver, which is several times faster and yields real
/// eigenvectors.
pub fn eigh(m: &DMatrix<C64>) -> Result<Eigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Validation(format!("matrix is {}x{}, not square", n, m.ncols())));
    }
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: DMatrix::zeros(0, 0) });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let failed = |e: faer::linalg::evd::EvdError| Error::Numeric(format!("eigensolver failed: {e:?}"));

    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if m.iter().all(|z| z.im == 0.0) {
        let a = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)].re);
        let eig = a.self_adjoint_eigen(faer::Side::Lower).map_err(failed)?;
        let (s, u) = (eig.S(), eig.U());
        ((0..n).map(|i| s[i]).collect(), DMatrix::from_fn(n, n, |i, j| C64::new(u[(i, j)], 0.0)))
    } else {
        let a = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| {
            let z = m[(i, j)];
            faer::c64::new(z.re, z.im)
        });
        let eig = a.self_adjoint_eigen(faer::Side::Lower).map_err(failed)?;
        let (s, u) = (eig.S(), eig.U());
        (
            (0..n).map(|i| s[i].re).collect(),
            DMatrix::from_fn(n, n, |i, j| {
                let z = u[(i, j)];
                C64::new(z.re, z.im)
            }),
        )
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(Eigen { values: sorted_values, vectors: sorted_vectors })
}

/// Multiplies `v` by a phase so that its largest-magnitude entry is real and
/// positive. The first entry within `1e-12` of the maximum wins ties.
pub fn canonicalize_phase(v: &mut [C64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v.iter().position(|z| z.norm() >= max - 1e-12).unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// Pfaffian of a skew-symmetric matrix by Parlett-Reid elimination with
/// partial pivoting. Odd dimensions give zero.
pub fn pfaffian(m: &DMatrix<C64>) -> C64 {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    if n % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let mut a = m.clone();
    let mut pf = C64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].norm();
        for i in (k + 2)..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot.norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<C64> = ((k + 2)..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<C64> = ((k + 2)..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in ((k + 2)..n).enumerate() {
                for (jj, j) in ((k + 2)..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<C64>> {
    let eig = eigh(m)?;
    let n = m.nrows();
    let d = DVector::from_iterator(n, eig.values.iter().map(|&x| C64::new(f(x), 0.0)));
    let v = &eig.vectors;
    Ok(v * DMatrix::from_diagonal(&d) * v.adjoint())
}

/// `-Σ p ln p` over the entries of `probs`, skipping non-positive values.
pub fn shannon_entropy(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| p * (1.0 / p).ln()).sum()
}
