//! Dense linear algebra for the small matrices that appear in observer and
//! closed-loop analysis (orders 1 through 8).
//!
//! Everything here is a pure function of its inputs. Eigenvalues of symmetric
//! matrices come from cyclic Jacobi rotations; the continuous Lyapunov
//! equation `H P + P Hᵀ + Q = 0` is solved by vectorising it into an `n²×n²`
//! system and running Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Largest supported row or column count.
pub const MAX_ORDER: usize = 8;

/// Relative tolerance used to accept a matrix as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Row-major dense matrix with at most [`MAX_ORDER`] rows and columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(rows)?;
        check_dim(cols)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Mat::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Mat::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        Ok(m)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let mut m = Mat::zeros(values.len(), values.len())?;
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        Ok(m)
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{cols} columns"),
                    found: format!("{} columns", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Mat::new(rows.len(), cols, data)
    }

    /// Column vector.
    pub fn column(values: &[f64]) -> Result<Self> {
        Mat::new(values.len(), 1, values.to_vec())
    }

    /// Row vector.
    pub fn row(values: &[f64]) -> Result<Self> {
        Mat::new(1, values.len(), values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[j * self.rows + i] = self[(i, j)];
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data: t,
        }
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Mat::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(f64, f64) -> f64) -> Result<Mat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        Err(Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

/// Square matrix whose entries are symmetric to [`SYMMETRY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat(Mat);

impl SymMat {
    pub fn new(m: Mat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", m.rows, m.cols),
            });
        }
        let asym = relative_asymmetry(&m);
        if asym > SYMMETRY_TOL {
            return Err(Error::Asymmetric(asym));
        }
        Ok(SymMat(m))
    }

    /// Symmetric part `(M + Mᵀ)/2`.
    pub fn symmetrized(m: &Mat) -> Result<Self> {
        let sym = m.add(&m.transpose())?.scale(0.5);
        SymMat::new(sym)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(SymMat(Mat::identity(n)?))
    }

    pub fn scaled_identity(n: usize, s: f64) -> Result<Self> {
        Ok(SymMat(Mat::identity(n)?.scale(s)))
    }

    pub fn order(&self) -> usize {
        self.0.rows
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    /// Quadratic form `xᵀ S x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        let sx = mat_apply(&self.0, x)?;
        Ok(x.iter().zip(&sx).map(|(a, b)| a * b).sum())
    }
}

impl std::ops::Index<(usize, usize)> for SymMat {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

fn relative_asymmetry(m: &Mat) -> f64 {
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0_f64;
    for i in 0..m.rows {
        for j in (i + 1)..m.cols {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Matrix-vector product `A x`.
pub fn mat_apply(a: &Mat, x: &[f64]) -> Result<Vec<f64>> {
    if a.cols != x.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", a.cols),
            found: format!("length {}", x.len()),
        });
    }
    Ok((0..a.rows)
        .map(|i| {
            a.data[i * a.cols..(i + 1) * a.cols]
                .iter()
                .zip(x)
                .map(|(m, v)| m * v)
                .sum()
        })
        .collect())
}

/// Induced 2-norm, i.e. the largest singular value.
pub fn operator_norm(a: &Mat) -> f64 {
    let ata = a
        .transpose()
        .matmul(a)
        .expect("AᵀA is always conformable");
    let gram = SymMat::symmetrized(&ata).expect("AᵀA is symmetric");
    let (_, lmax) = eig_extremes(&gram);
    lmax.max(0.0).sqrt()
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn eig_extremes(s: &SymMat) -> (f64, f64) {
    let ev = symmetric_eigenvalues(s);
    (ev[0], ev[ev.len() - 1])
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(s: &SymMat) -> Vec<f64> {
    let n = s.order();
    let mut a = s.as_mat().clone();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// LU factorisation with partial pivoting of a dense square system of any size.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(n: usize, mut a: Vec<f64>) -> Result<Lu> {
        let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tiny = scale * f64::EPSILON * n as f64;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, pmax) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= tiny || pmax == 0.0 {
                return Err(Error::Singular);
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let d = a[k * n + k];
            for i in (k + 1)..n {
                let m = a[i * n + k] / d;
                a[i * n + k] = m;
                if m != 0.0 {
                    for j in (k + 1)..n {
                        a[i * n + j] -= m * a[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, lu: a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }
}

/// Diagonal similarity `D⁻¹ A D` with power-of-two `D` that evens out row
/// and column norms. Returns the balanced matrix and the diagonal of `D`.
pub fn balance(a: &Mat) -> Result<(Mat, Vec<f64>)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows, a.cols),
        });
    }
    let n = a.rows;
    let mut b = a.clone();
    let mut d = vec![1.0; n];
    for _sweep in 0..100 {
        let mut done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += b[(j, i)].abs();
                r += b[(i, j)].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / 2.0 {
                f *= 2.0;
                c *= 4.0;
            }
            while c > r * 2.0 {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
                d[i] *= f;
            }
        }
        if done {
            break;
        }
    }
    Ok((b, d))
}

/// `H P + P Hᵀ`.
pub fn lyapunov_operator(h: &Mat, p: &Mat) -> Result<Mat> {
    let hp = h.matmul(p)?;
    let pht = p.matmul(&h.transpose())?;
    hp.add(&pht)
}

/// Solves `H P + P Hᵀ + Q = 0` for symmetric positive definite `P`.
///
/// Fails with [`Error::Singular`] when `H` has eigenvalue pairs summing to zero
/// and with [`Error::NotHurwitz`] when the solution is not positive definite,
/// which for positive definite `Q` happens exactly when `H` is not Hurwitz.
pub fn solve_lyapunov(h: &Mat, q: &SymMat) -> Result<SymMat> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square state matrix".into(),
            found: format!("{}x{}", h.rows, h.cols),
        });
    }
    let n = h.rows;
    if q.order() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("Q of order {n}"),
            found: format!("order {}", q.order()),
        });
    }
    // Work on D⁻¹HD, whose rows and columns have comparable norms; the
    // solution maps back as P = D P̃ D.
    let (hb, d) = balance(h)?;
    let mut qb = q.as_mat().clone();
    for i in 0..n {
        for j in 0..n {
            qb[(i, j)] /= d[i] * d[j];
        }
    }
    let m = n * n;
    // Row (i, j) of the vectorised operator: sum_k H[i,k] P[k,j] + P[i,k] H[j,k].
    let mut op = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                op[row * m + k * n + j] += hb[(i, k)];
                op[row * m + i * n + k] += hb[(j, k)];
            }
        }
    }
    let lu = Lu::factor(m, op)?;
    let rhs: Vec<f64> = qb.as_slice().iter().map(|v| -v).collect();
    let mut p = Mat::new(n, n, lu.solve(&rhs))?;

    // One round of iterative refinement on the residual.
    let resid = lyapunov_operator(&hb, &p)?.add(&qb)?;
    let neg: Vec<f64> = resid.as_slice().iter().map(|v| -v).collect();
    let delta = Mat::new(n, n, lu.solve(&neg))?;
    p = p.add(&delta)?;
    for i in 0..n {
        for j in 0..n {
            p[(i, j)] *= d[i] * d[j];
        }
    }

    let p = SymMat::symmetrized(&p)?;
    let (lmin, _) = eig_extremes(&p);
    if !(lmin > 0.0) {
        return Err(Error::NotHurwitz(lmin));
    }
    Ok(p)
}

/// Characteristic polynomial `det(sI - A)` as monic coefficients in
/// descending powers, via Faddeev–LeVerrier.
pub fn charpoly(a: &Mat) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows, a.cols),
        });
    }
    let n = a.rows;
    let eye = Mat::identity(n)?;
    let mut coeffs = vec![1.0];
    let mut m = Mat::zeros(n, n)?;
    for k in 1..=n {
        m = a.matmul(&m)?.add(&eye.scale(*coeffs.last().unwrap()))?;
        let am = a.matmul(&m)?;
        coeffs.push(-am.trace() / k as f64);
    }
    Ok(coeffs)
}

/// Routh–Hurwitz test on the characteristic polynomial: true when every
/// eigenvalue has strictly negative real part.
pub fn is_hurwitz(a: &Mat) -> Result<bool> {
    Ok(routh_hurwitz(&charpoly(a)?))
}

/// Routh–Hurwitz test for a polynomial given in descending powers.
pub fn routh_hurwitz(poly: &[f64]) -> bool {
    if poly.is_empty() || poly[0] == 0.0 {
        return false;
    }
    let lead = poly[0];
    let p: Vec<f64> = poly.iter().map(|c| c / lead).collect();
    if p.iter().skip(1).any(|c| !(*c > 0.0)) {
        return false;
    }
    let width = p.len().div_ceil(2);
    let mut prev: Vec<f64> = p.iter().step_by(2).copied().collect();
    let mut cur: Vec<f64> = p.iter().skip(1).step_by(2).copied().collect();
    prev.resize(width + 1, 0.0);
    cur.resize(width + 1, 0.0);
    for _ in 0..p.len().saturating_sub(2) {
        if !(cur[0] > 0.0) {
            return false;
        }
        let next: Vec<f64> = (0..width)
            .map(|j| (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0])
            .chain(std::iter::once(0.0))
            .collect();
        prev = cur;
        cur = next;
    }
    cur[0] > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn apply_identity_and_shift() {
        let i3 = Mat::identity(3).unwrap();
        assert_eq!(mat_apply(&i3, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        let shift = Mat::from_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(mat_apply(&shift, &[4.0, 5.0, 6.0]).unwrap(), vec![5.0, 6.0, 0.0]);
    }

    #[test]
    fn apply_rejects_bad_length() {
        let i3 = Mat::identity(3).unwrap();
        assert!(matches!(
            mat_apply(&i3, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dimensions_are_bounded() {
        assert!(Mat::zeros(9, 1).is_err());
        assert!(Mat::zeros(0, 3).is_err());
        assert!(Mat::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn operator_norm_examples() {
        assert!(close(operator_norm(&Mat::identity(4).unwrap()), 1.0, 1e-12));
        assert!(close(operator_norm(&Mat::diag(&[2.0, 3.0]).unwrap()), 3.0, 1e-12));
        let nil = Mat::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(close(operator_norm(&nil), 1.0, 1e-12));
    }

    #[test]
    fn eig_examples() {
        let d = SymMat::new(Mat::diag(&[1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert_eq!(eig_extremes(&d), (1.0, 3.0));
        let s = SymMat::new(Mat::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap()).unwrap();
        let (lo, hi) = eig_extremes(&s);
        assert!(close(lo, 1.0, 1e-12) && close(hi, 3.0, 1e-12));
    }

    #[test]
    fn asymmetric_rejected() {
        let m = Mat::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(SymMat::new(m), Err(Error::Asymmetric(_))));
    }

    #[test]
    fn lyapunov_closed_forms() {
        let h = Mat::identity(2).unwrap().scale(-1.0);
        let p = solve_lyapunov(&h, &SymMat::identity(2).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 0.5 } else { 0.0 };
                assert!((p[(i, j)] - want).abs() < 1e-15);
            }
        }
        let a = 3.0;
        let q = 7.0;
        let h = Mat::new(1, 1, vec![-a]).unwrap();
        let p = solve_lyapunov(&h, &SymMat::new(Mat::new(1, 1, vec![q]).unwrap()).unwrap()).unwrap();
        assert!(close(p[(0, 0)], q / (2.0 * a), 1e-15));
    }

    #[test]
    fn lyapunov_rejects_unstable() {
        let h = Mat::diag(&[-1.0, 2.0]).unwrap();
        let err = solve_lyapunov(&h, &SymMat::identity(2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotHurwitz(_)));
        // eigenvalues +1 and -1 make the vectorised operator singular
        let h = Mat::diag(&[1.0, -1.0]).unwrap();
        let err = solve_lyapunov(&h, &SymMat::identity(2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Singular));
    }

    #[test]
    fn charpoly_of_companion() {
        // s^3 + 3 s^2 + 3 s + 1
        let h = Mat::from_rows(&[&[-3.0, 1.0, 0.0], &[-3.0, 0.0, 1.0], &[-1.0, 0.0, 0.0]]).unwrap();
        let c = charpoly(&h).unwrap();
        assert_eq!(c, vec![1.0, 3.0, 3.0, 1.0]);
        assert!(is_hurwitz(&h).unwrap());
    }

    #[test]
    fn routh_hurwitz_cases() {
        assert!(routh_hurwitz(&[1.0, 2.0, 1.0]));
        assert!(!routh_hurwitz(&[1.0, 0.0, 1.0])); // pure imaginary pair
        assert!(!routh_hurwitz(&[1.0, -1.0]));
        // (s+1)(s^2 - s + 4) has positive-real-part pair: s^3 + 0 s^2 + 3 s + 4
        assert!(!routh_hurwitz(&[1.0, 0.0, 3.0, 4.0]));
        // s^3 + s^2 + s + 2: coefficients positive, but unstable
        assert!(!routh_hurwitz(&[1.0, 1.0, 1.0, 2.0]));
        // (s+1)^5
        assert!(routh_hurwitz(&[1.0, 5.0, 10.0, 10.0, 5.0, 1.0]));
    }

    #[test]
    fn balance_is_a_similarity() {
        let a = Mat::from_rows(&[&[-1e3, 1.0, 0.0], &[-3e5, 0.0, 1.0], &[-1e8, 0.0, 0.0]]).unwrap();
        let (b, d) = balance(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b[(i, j)], a[(i, j)] * d[j] / d[i]);
            }
        }
        assert!(b.max_abs() < a.max_abs() * 1e-3);
    }

    #[test]
    fn lyapunov_with_widely_scaled_entries() {
        // companion-like error matrix with gains spanning eight decades
        let w: f64 = 490.03;
        let h = Mat::from_rows(&[
            &[-3.0 * w, 1.0, 0.0],
            &[-3.0 * w * w, 0.0, 1.0],
            &[-w * w * w, 0.0, 0.0],
        ])
        .unwrap();
        let q = SymMat::scaled_identity(3, w).unwrap();
        let p = solve_lyapunov(&h, &q).unwrap();
        let r = lyapunov_operator(&h, p.as_mat()).unwrap().add(q.as_mat()).unwrap();
        let scale = 2.0 * operator_norm(&h) * operator_norm(p.as_mat());
        assert!(r.max_abs() <= 1e-12 * scale);
        assert!(eig_extremes(&p).0 > 0.0);
    }
}
