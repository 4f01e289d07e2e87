//! Small dense helpers shared by the algorithm modules.

use alloc::vec::Vec;

use crate::space::Vector;

/// Orthonormalizes `vectors` by modified Gram-Schmidt, dropping directions
/// whose remainder falls below `tol`. Two passes per vector keep the output
/// orthonormal to near machine precision even for long inputs.
pub fn mgs_orthonormalize(vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        if let Some(q) = orthonormal_remainder(&basis, v, tol) {
            basis.push(q);
        }
    }
    basis
}

/// Component of `v` orthogonal to `basis` (assumed orthonormal), normalized;
/// `None` if its norm is below `tol`.
pub fn orthonormal_remainder(basis: &[Vector], v: &Vector, tol: f64) -> Option<Vector> {
    let mut u = v.clone();
    for _ in 0..2 {
        for q in basis {
            let c = u.inner(q).expect("dimension mismatch in orthonormalize");
            u.add_scaled(-c, q);
        }
    }
    let norm = u.norm_l2();
    if norm <= tol {
        None
    } else {
        Some(u.scaled(1.0 / norm))
    }
}

/// Rank of the span of `vectors` at drop tolerance `tol`.
pub fn span_rank(vectors: &[Vector], tol: f64) -> usize {
    mgs_orthonormalize(vectors, tol).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rank_of_dependent_set() {
        let v1 = Vector::new(vec![1.0, 0.0, 0.0]).unwrap();
        let v2 = Vector::new(vec![0.0, 1.0, 0.0]).unwrap();
        let v3 = Vector::new(vec![1.0, 1.0, 0.0]).unwrap();
        assert_eq!(span_rank(&[v1, v2, v3], 1e-10), 2);
    }

    #[test]
    fn orthonormal_output() {
        let vs = vec![
            Vector::new(vec![1.0, 1.0, 0.0]).unwrap(),
            Vector::new(vec![1.0, 0.0, 1.0]).unwrap(),
            Vector::new(vec![0.0, 1.0, 1.0]).unwrap(),
        ];
        let basis = mgs_orthonormalize(&vs, 1e-10);
        assert_eq!(basis.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                let got = basis[i].inner(&basis[j]).unwrap();
                assert!((got - expected).abs() <= 1e-12);
            }
        }
    }
}
