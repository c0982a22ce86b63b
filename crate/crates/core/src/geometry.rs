//! Small dense solves and the generalized circumcenter.

use crate::error::{check_dim, Error, Result};
use crate::vector::{Tolerance, Vector};

/// Solves the Gram system `Σᵢ tᵢ⟨bᵢ, bⱼ⟩ = rhsⱼ` for `t`.
///
/// Gaussian elimination with full pivoting; a pivot at or below
/// `eps_degen · max |⟨bᵢ, bᵢ⟩|` reports [`Error::RankDeficient`].
pub fn solve_gram(basis: &[Vector], rhs: &[f64], tol: &Tolerance) -> Result<Vec<f64>> {
    let k = basis.len();
    check_dim(k, rhs.len())?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let dim = basis[0].dim();
    for b in basis {
        check_dim(dim, b.dim())?;
    }
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let g = basis[i].dot(&basis[j]);
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    solve_full_pivot(gram, rhs.to_vec(), tol.eps_degen)
}

/// Solves `m · t = rhs` for a small square system with full pivoting.
pub(crate) fn solve_full_pivot(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>, rel_pivot: f64) -> Result<Vec<f64>> {
    let k = rhs.len();
    let scale = (0..k).fold(0.0_f64, |s, i| s.max(m[i][i].abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::RankDeficient);
    }
    let threshold = rel_pivot * scale;
    // col_perm[j] = original unknown stored in column j
    let mut col_perm: Vec<usize> = (0..k).collect();

    for step in 0..k {
        let (mut pr, mut pc, mut best) = (step, step, 0.0);
        for (r, row) in m.iter().enumerate().skip(step) {
            for (c, v) in row.iter().enumerate().skip(step) {
                if v.abs() > best {
                    best = v.abs();
                    pr = r;
                    pc = c;
                }
            }
        }
        if best <= threshold {
            return Err(Error::RankDeficient);
        }
        m.swap(step, pr);
        rhs.swap(step, pr);
        if pc != step {
            for row in m.iter_mut() {
                row.swap(step, pc);
            }
            col_perm.swap(step, pc);
        }
        let pivot = m[step][step];
        for r in step + 1..k {
            let f = m[r][step] / pivot;
            if f == 0.0 {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            for (dst, src) in bottom[0][step..k].iter_mut().zip(&top[step][step..k]) {
                *dst -= f * src;
            }
            rhs[r] -= f * rhs[step];
        }
    }

    let mut y = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| m[r][c] * y[c]).sum();
        y[r] = (rhs[r] - s) / m[r][r];
    }
    let mut t = vec![0.0; k];
    for (j, &orig) in col_perm.iter().enumerate() {
        t[orig] = y[j];
    }
    Ok(t)
}

/// Drops points that coincide (relative test) with an earlier one.
pub fn distinct_points(points: &[Vector], tol: &Tolerance) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| tol.coincide(p, q)) {
            out.push(p.clone());
        }
    }
    out
}

/// The point of `aff(points)` equidistant to every distinct input.
///
/// Coincident inputs collapse first: one distinct point is returned as is,
/// two give their midpoint, more are solved through the Gram system
/// `⟨c − p₀, pⱼ − p₀⟩ = ½‖pⱼ − p₀‖²`.
pub fn circumcenter(points: &[Vector], tol: &Tolerance) -> Result<Vector> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInput("circumcenter of an empty point set".into()))?;
    for p in points {
        check_dim(first.dim(), p.dim())?;
    }
    let distinct = distinct_points(points, tol);
    match distinct.as_slice() {
        [p] => Ok(p.clone()),
        [p, q] => Ok(midpoint(p, q)),
        [p0, rest @ ..] => {
            if distinct.len() > p0.dim() + 1 {
                return Err(Error::DegenerateConfiguration);
            }
            let basis: Vec<Vector> = rest.iter().map(|p| p - p0).collect();
            let rhs: Vec<f64> = basis.iter().map(|v| 0.5 * v.norm_sq()).collect();
            let t = solve_gram(&basis, &rhs, tol).map_err(|_| Error::DegenerateConfiguration)?;
            Ok(basis.iter().zip(&t).fold(p0.clone(), |c, (v, ti)| c.add_scaled(*ti, v)))
        }
        [] => unreachable!("at least one point survives deduplication"),
    }
}

pub(crate) fn midpoint(p: &Vector, q: &Vector) -> Vector {
    Vector::new(p.coords().iter().zip(q.coords()).map(|(a, b)| 0.5 * (a + b)).collect())
        .expect("midpoint of finite vectors is finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn assert_close(a: &Vector, b: &Vector, eps: f64) {
        assert!(a.distance(b) <= eps, "{a:?} vs {b:?}");
    }

    #[test]
    fn gram_orthonormal_basis() {
        let t = solve_gram(&[Vector::from([1.0, 0.0]), Vector::from([0.0, 1.0])], &[3.0, 4.0], &tol()).unwrap();
        assert_eq!(t, vec![3.0, 4.0]);
    }

    #[test]
    fn gram_one_dimensional() {
        let t = solve_gram(&[Vector::from([2.0, 0.0])], &[4.0], &tol()).unwrap();
        assert_eq!(t, vec![1.0]);
    }

    #[test]
    fn gram_skew_basis_by_substitution() {
        let basis = [Vector::from([1.0, 1.0]), Vector::from([1.0, -1.0])];
        let rhs = [2.0, 0.0];
        let t = solve_gram(&basis, &rhs, &tol()).unwrap();
        // substitute back into Σ tᵢ⟨bᵢ,bⱼ⟩
        for (j, bj) in basis.iter().enumerate() {
            let lhs: f64 = basis.iter().zip(&t).map(|(bi, ti)| ti * bi.dot(bj)).sum();
            assert!((lhs - rhs[j]).abs() <= 1e-12);
        }
        // Gram matrix is 2·I, so the system gives t = (1, 0)
        assert!((t[0] - 1.0).abs() < 1e-12 && t[1].abs() < 1e-12);
    }

    #[test]
    fn gram_rank_deficient() {
        let basis = [Vector::from([1.0, 2.0]), Vector::from([2.0, 4.0])];
        assert_eq!(solve_gram(&basis, &[1.0, 1.0], &tol()), Err(Error::RankDeficient));
        assert_eq!(solve_gram(&[Vector::zeros(3)], &[0.0], &tol()), Err(Error::RankDeficient));
    }

    #[test]
    fn circumcenter_symmetric_unit_circle() {
        let pts = [Vector::from([1.0, 0.0]), Vector::from([-1.0, 0.0]), Vector::from([0.0, 1.0])];
        assert_close(&circumcenter(&pts, &tol()).unwrap(), &Vector::from([0.0, 0.0]), 1e-14);
    }

    #[test]
    fn circumcenter_duplicate_collapses_to_midpoint() {
        let pts = [Vector::from([2.0, 3.0]), Vector::from([2.0, 3.0]), Vector::from([4.0, 5.0])];
        assert_eq!(circumcenter(&pts, &tol()).unwrap(), Vector::from([3.0, 4.0]));
    }

    #[test]
    fn circumcenter_of_counterexample_triple() {
        let pts = [
            Vector::from([1.0, 0.5, 0.0]),
            Vector::from([0.0, -0.5, 1.0]),
            Vector::from([0.0, -0.5, -1.0]),
        ];
        assert_close(&circumcenter(&pts, &tol()).unwrap(), &Vector::from([0.25, -0.25, 0.0]), 1e-14);
    }

    #[test]
    fn circumcenter_single_point_and_errors() {
        let p = Vector::from([1.0, 2.0, 3.0]);
        assert_eq!(circumcenter(&[p.clone(), p.clone(), p.clone()], &tol()).unwrap(), p);
        let collinear = [Vector::from([0.0, 0.0]), Vector::from([1.0, 1.0]), Vector::from([2.0, 2.0])];
        assert_eq!(circumcenter(&collinear, &tol()), Err(Error::DegenerateConfiguration));
        assert!(circumcenter(&[], &tol()).is_err());
        let four_in_plane = [
            Vector::from([1.0, 0.0]),
            Vector::from([0.0, 1.0]),
            Vector::from([-1.0, 0.0]),
            Vector::from([0.0, -1.0]),
        ];
        assert_eq!(circumcenter(&four_in_plane, &tol()), Err(Error::DegenerateConfiguration));
    }

    #[test]
    fn circumcenter_tetrahedron_in_r3() {
        let pts = [
            Vector::from([0.0, 0.0, 0.0]),
            Vector::from([2.0, 0.0, 0.0]),
            Vector::from([0.0, 2.0, 0.0]),
            Vector::from([0.0, 0.0, 2.0]),
        ];
        assert_close(&circumcenter(&pts, &tol()).unwrap(), &Vector::from([1.0, 1.0, 1.0]), 1e-14);
    }
}
