use proptest::prelude::*;
use symorder_core::ensemble::{random_sym_block, substream};
use symorder_core::linalg::{eigensolve, similarity, spectrum_multiset_equal, SquareMatrix, SymMatrix};

/// Number of eigenvalues of `h` below `x`, from the signs of the ratios of
/// consecutive leading principal minors of `h - xI` (Gaussian elimination
/// without pivoting).
fn count_below(h: &SymMatrix, x: f64) -> usize {
    let n = h.dim();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| h.get(i, j) - if i == j { x } else { 0.0 }).collect())
        .collect();
    let mut negatives = 0;
    for k in 0..n {
        let pivot = a[k][k];
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in (k + 1)..n {
            let f = a[i][k] / pivot;
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    negatives
}

/// Eigenvalues by bisection on the minor-sign count.
fn bisection_eigenvalues(h: &SymMatrix) -> Vec<f64> {
    let n = h.dim();
    let bound = (0..n)
        .map(|i| (0..n).map(|j| h.get(i, j).abs()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(h, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn random_sym(seed: u64, n: usize) -> SymMatrix {
    random_sym_block(&mut substream(seed, 0, 0), n, 1.0).unwrap()
}

fn givens(n: usize, p: usize, q: usize, angle: f64) -> SquareMatrix {
    let (c, s) = (angle.cos(), angle.sin());
    SquareMatrix::from_fn(n, |i, j| match (i, j) {
        _ if i == p && j == p => c,
        _ if i == q && j == q => c,
        _ if i == p && j == q => -s,
        _ if i == q && j == p => s,
        _ if i == j => 1.0,
        _ => 0.0,
    })
}

#[test]
fn matches_bisection_oracle_on_random_5x5() {
    for seed in 0..10 {
        let h = random_sym(seed, 5);
        let oracle = bisection_eigenvalues(&h);
        let got = eigensolve(&h, false).unwrap().eigenvalues;
        assert!(spectrum_multiset_equal(&got, &oracle, 1e-9), "{got:?} vs {oracle:?}");
    }
}

#[test]
fn eigenvectors_are_orthonormal_and_reconstruct() {
    for (seed, n) in [(1, 1), (2, 3), (3, 10), (4, 40)] {
        let h = random_sym(seed, n);
        let s = eigensolve(&h, true).unwrap();
        let v = s.eigenvectors.as_ref().unwrap();
        assert!(v.orthogonality_defect() < 1e-10);
        let scale = h.max_abs().max(1.0);
        for k in 0..n {
            let col = v.column(k);
            for i in 0..n {
                let hv: f64 = (0..n).map(|j| h.get(i, j) * col[j]).sum();
                assert!((hv - s.eigenvalues[k] * col[i]).abs() < 1e-8 * scale);
            }
        }
        let lam = SquareMatrix::from_fn(n, |i, j| if i == j { s.eigenvalues[i] } else { 0.0 });
        let recon = v.matmul(&lam).matmul(&v.transpose());
        assert!(recon.max_abs_diff(&h.to_square()) < 1e-8 * n as f64 * h.max_abs());
    }
}

#[test]
fn givens_similarity_preserves_spectrum() {
    for seed in 0..5 {
        let h = random_sym(100 + seed, 4);
        let mut p = SquareMatrix::identity(4);
        for (k, (a, b)) in [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)].into_iter().enumerate() {
            p = p.matmul(&givens(4, a, b, 0.3 + 0.7 * k as f64 + seed as f64));
        }
        let rotated = similarity(&h, &p).unwrap();
        let e1 = eigensolve(&h, false).unwrap().eigenvalues;
        let e2 = eigensolve(&rotated, false).unwrap().eigenvalues;
        assert!(spectrum_multiset_equal(&e1, &e2, 1e-10));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_and_frobenius_are_preserved(seed in any::<u64>(), n in 1usize..24) {
        let h = random_sym(seed, n);
        let ev = eigensolve(&h, false).unwrap().eigenvalues;
        let tol = 1e-8 * n as f64 * h.max_abs().max(1e-300);
        prop_assert!((ev.iter().sum::<f64>() - h.trace()).abs() <= tol);
        let fro2 = h.frobenius_norm().powi(2);
        prop_assert!((ev.iter().map(|x| x * x).sum::<f64>() - fro2).abs() <= tol * h.max_abs().max(1.0));
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn similarity_by_permutation_preserves_spectrum(seed in any::<u64>(), n in 2usize..64, shift in 1usize..63) {
        let h = random_sym(seed, n);
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let p = SquareMatrix::permutation(&perm);
        let e1 = eigensolve(&h, false).unwrap().eigenvalues;
        let e2 = eigensolve(&similarity(&h, &p).unwrap(), false).unwrap().eigenvalues;
        prop_assert!(spectrum_multiset_equal(&e1, &e2, 1e-9));
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), n in 1usize..8) {
        let h = random_sym(seed, n);
        let (back, asym) = SymMatrix::read_text(h.to_text().as_bytes()).unwrap();
        prop_assert_eq!(back, h);
        prop_assert_eq!(asym, 0.0);
    }
}
