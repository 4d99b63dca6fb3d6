use super::matrix::SubstochasticMatrix;
use crate::error::{Error, Result};

/// Solves `A x = b` by LU factorization with partial pivoting. `a` is
/// row-major `n x n`.
pub fn lu_solve(a: &[f64], n: usize, b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != n * n || b.len() != n {
        return Err(Error::invalid("lu_solve: dimension mismatch"));
    }
    let mut lu = a.to_vec();
    let mut x = b.to_vec();
    let scale = lu.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lu[i * n + col].abs().total_cmp(&lu[j * n + col].abs()))
            .expect("non-empty range");
        if lu[pivot * n + col].abs() <= scale * f64::EPSILON * n as f64 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                lu.swap(col * n + j, pivot * n + j);
            }
            x.swap(col, pivot);
        }
        let d = lu[col * n + col];
        for i in col + 1..n {
            let f = lu[i * n + col] / d;
            if f == 0.0 {
                continue;
            }
            lu[i * n + col] = f;
            for j in col + 1..n {
                lu[i * n + j] -= f * lu[col * n + j];
            }
            x[i] -= f * x[col];
        }
    }
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| lu[i * n + j] * x[j]).sum();
        x[i] = (x[i] - s) / lu[i * n + i];
    }
    Ok(x)
}

/// Expected absorption times from every state: solves `(I - S) x = 1`.
pub fn expected_absorption_fundamental<L>(matrix: &SubstochasticMatrix<L>) -> Result<Vec<f64>> {
    let n = matrix.dim();
    let mut a: Vec<f64> = matrix.entries().iter().map(|x| -x).collect();
    for i in 0..n {
        a[i * n + i] += 1.0;
    }
    lu_solve(&a, n, &vec![1.0; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_s;

    #[test]
    fn scalar() {
        let s = SubstochasticMatrix::new(vec![0], vec![0.5]).unwrap();
        assert_eq!(expected_absorption_fundamental(&s).unwrap(), vec![2.0]);
    }

    #[test]
    fn needs_pivoting() {
        let a = [0.0, 1.0, 2.0, 3.0];
        let x = lu_solve(&a, 2, &[1.0, 8.0]).unwrap();
        assert!((x[0] - 2.5).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        assert!(matches!(lu_solve(&[1.0, 2.0, 2.0, 4.0], 2, &[1.0, 1.0]), Err(Error::Singular)));
        let stochastic = SubstochasticMatrix::new(vec![0, 1], vec![0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(expected_absorption_fundamental(&stochastic).is_err());
    }

    #[test]
    fn mirror_states_have_equal_times() {
        let (m, n) = (3, 7);
        let s = build_s(m, n).unwrap();
        let times = expected_absorption_fundamental(&s).unwrap();
        for (i, st) in s.states().iter().enumerate() {
            let j = s
                .states()
                .iter()
                .position(|t| t.k == m - st.k && t.l == n - st.l)
                .unwrap();
            assert!((times[i] - times[j]).abs() <= 1e-12 * times[i], "{st:?}");
        }
    }
}
