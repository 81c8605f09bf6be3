//! Reference implementations shared by the integration tests.

use adrc_core::smallmat::Mat;

/// Vectorised Lyapunov equation solved by Gauss–Jordan elimination with full
/// pivoting.
pub fn lyapunov_oracle(h: &Mat, q: &Mat) -> Vec<f64> {
    let n = h.rows();
    let m = n * n;
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..n {
        for j in 0..n {
            let r = i * n + j;
            for k in 0..n {
                a[r][k * n + j] += h[(i, k)];
                a[r][i * n + k] += h[(j, k)];
            }
            a[r][m] = -q[(i, j)];
        }
    }
    let mut col_of: Vec<usize> = (0..m).collect();
    for c in 0..m {
        let (mut pr, mut pc, mut best) = (c, c, 0.0);
        for (r, row) in a.iter().enumerate().skip(c) {
            for (k, v) in row.iter().enumerate().take(m).skip(c) {
                if v.abs() > best {
                    best = v.abs();
                    pr = r;
                    pc = k;
                }
            }
        }
        a.swap(c, pr);
        for row in a.iter_mut() {
            row.swap(c, pc);
        }
        col_of.swap(c, pc);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..m {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for k in 0..=m {
                        a[r][k] -= f * a[c][k];
                    }
                }
            }
        }
    }
    let mut x = vec![0.0; m];
    for c in 0..m {
        x[col_of[c]] = a[c][m];
    }
    x
}
