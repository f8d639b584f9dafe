use mixfrac::eigen::{gen_eigs, GenEigProblem};
use mixfrac::{MatrixLabel, SymmetricMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn to_sym(m: &DMatrix<f64>) -> SymmetricMatrix {
    let n = m.nrows();
    let data: Vec<f64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
    SymmetricMatrix::from_row_major(n, data, MatrixLabel::Combination("random".into())).unwrap()
}

fn spd(n: usize, vals: &[f64], shift: f64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |i, j| vals[i * n + j]);
    &g * g.transpose() + DMatrix::identity(n, n) * shift
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn matches_nalgebra(n in 2usize..20, va in prop::collection::vec(-1.0f64..1.0, 400),
                        vb in prop::collection::vec(-1.0f64..1.0, 400)) {
        let a = spd(n, &va, 0.1);
        let b = spd(n, &vb, 0.5);
        // Independent route: B^{-1/2} A B^{-1/2} through nalgebra's eigensolver.
        let eb = b.clone().symmetric_eigen();
        let inv_sqrt = &eb.eigenvectors
            * DMatrix::from_diagonal(&eb.eigenvalues.map(|v| 1.0 / v.sqrt()))
            * eb.eigenvectors.transpose();
        let c = &inv_sqrt * &a * &inv_sqrt;
        let c = (&c + c.transpose()) * 0.5;
        let mut expect: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
        expect.sort_by(f64::total_cmp);

        let (sa, sb) = (to_sym(&a), to_sym(&b));
        let spec = gen_eigs(&GenEigProblem::new(&sa, &sb, n).unwrap()).unwrap();
        let scale = expect[n - 1].abs();
        for (got, want) in spec.eigenvalues.iter().zip(&expect) {
            prop_assert!((got - want).abs() <= 1e-9 * scale, "{got} vs {want}");
        }
    }
}
