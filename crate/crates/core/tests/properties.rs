use permident::conjecture::check_conjecture;
use permident::exact::{binomial, factorial, Rational};
use permident::identities::{check_lemma_q, expected_charpoly, random_rank2, SampleMode};
use permident::linalg::Matrix;
use permident::permanent::{
    perm_naive, perm_rank2_determinantal, perm_rank2_structured, perm_ryser,
};
use permident::symfunc::{elementary_symmetric, power_sum, q_matrix, vandermonde};
use permident::Error;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| Rational::from_frac(p, q))
}

fn int_vec(n: usize, bound: i64) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-bound..=bound).prop_map(Rational::from), n)
}

fn square(max_n: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(rational_entry(bound), n * n)
            .prop_map(move |e| Matrix::new(n, n, e).unwrap())
    })
}

fn rational_entry(bound: i64) -> impl Strategy<Value = Rational> {
    (-bound..=bound, 1i64..=3).prop_map(|(p, q)| Rational::from_frac(p, q))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Leibniz expansion; `signed = false` gives the permanent.
fn leibniz(m: &Matrix, signed: bool) -> Rational {
    fn go(
        m: &Matrix,
        row: usize,
        used: &mut Vec<bool>,
        sign: i64,
        signed: bool,
        acc: &Rational,
        out: &mut Rational,
    ) {
        let n = m.rows();
        if row == n {
            *out += if signed && sign < 0 {
                -acc.clone()
            } else {
                acc.clone()
            };
            return;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            // Inversions contributed by placing column j at this row.
            let inv = used[j + 1..].iter().filter(|&&u| u).count() as i64;
            used[j] = true;
            let next = acc * m.get(row, j);
            go(
                m,
                row + 1,
                used,
                if inv % 2 == 1 { -sign } else { sign },
                signed,
                &next,
                out,
            );
            used[j] = false;
        }
    }
    let mut out = Rational::zero();
    go(
        m,
        0,
        &mut vec![false; m.rows()],
        1,
        signed,
        &Rational::one(),
        &mut out,
    );
    out
}

fn hadamard(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) * b.get(i, j))
}

fn rank2(max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_n, any::<u64>())
        .prop_map(|(n, seed)| random_rank2(n, 9, seed, SampleMode::General).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Rational::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * a.recip().unwrap(), Rational::one());
        }
    }

    #[test]
    fn canonical_form_round_trips(a in rational()) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), a.clone());
        prop_assert!(!s.starts_with('+') && !s.ends_with("/1"));
        prop_assert_eq!(a.denom().sign(), num_bigint::Sign::Plus);
    }

    #[test]
    fn determinant_matches_leibniz(m in square(6, 6)) {
        prop_assert_eq!(m.determinant().unwrap(), leibniz(&m, true));
    }

    #[test]
    fn determinant_is_multiplicative((a, b) in (1usize..=5).prop_flat_map(|n| (
        prop::collection::vec(rational_entry(5), n * n).prop_map(move |e| Matrix::new(n, n, e).unwrap()),
        prop::collection::vec(rational_entry(5), n * n).prop_map(move |e| Matrix::new(n, n, e).unwrap()),
    ))) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn rank2_decomposition_reconstructs(x in rank2(7)) {
        prop_assert!(x.rank() <= 2);
        let d = x.rank2_decompose().unwrap();
        prop_assert_eq!(d.reconstruct(), x);
    }

    #[test]
    fn decomposition_rejects_rank_three(n in 3usize..=6) {
        let result = Matrix::identity(n).rank2_decompose();
        prop_assert_eq!(result.unwrap_err(), Error::RankTooHigh { rank: n });
    }

    #[test]
    fn hadamard_exponents_add(m in square(4, 6), p in -3i64..=3, q in -3i64..=3) {
        let has_zero = m.entries().iter().any(Rational::is_zero);
        match (m.hadamard_power(p), m.hadamard_power(q), m.hadamard_power(p + q)) {
            (Ok(a), Ok(b), Ok(c)) => prop_assert_eq!(hadamard(&a, &b), c),
            _ => prop_assert!(has_zero && (p < 0 || q < 0 || p + q < 0)),
        }
    }

    #[test]
    fn lemma_q_for_every_k(x in (1usize..=8).prop_flat_map(|n| int_vec(n, 9))) {
        for k in 0..=x.len() as i64 {
            let report = check_lemma_q(&x, k).unwrap();
            prop_assert!(report.holds, "{}", report);
        }
    }

    #[test]
    fn q_determinant_scales_with_degree(x in (1usize..=6).prop_flat_map(|n| int_vec(n, 6)), c in rational()) {
        let n = x.len() as i64;
        let cx: Vec<Rational> = x.iter().map(|e| e * &c).collect();
        for k in 0..=n {
            let degree = n * (n + 1) / 2 - k;
            let lhs = q_matrix(&cx, k).unwrap().determinant().unwrap();
            let rhs = c.pow(degree).unwrap() * q_matrix(&x, k).unwrap().determinant().unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn elementary_symmetric_is_symmetric(
        (x, perm) in (1usize..=8).prop_flat_map(|n| (int_vec(n, 9), permutation(n))),
    ) {
        let shuffled: Vec<Rational> = perm.iter().map(|&i| x[i].clone()).collect();
        for k in -1..=x.len() as i64 + 1 {
            prop_assert_eq!(elementary_symmetric(&x, k), elementary_symmetric(&shuffled, k));
        }
    }

    #[test]
    fn vandermonde_alternates((x, i, j) in (2usize..=8).prop_flat_map(|n| (int_vec(n, 9), 0..n, 0..n))) {
        prop_assume!(i != j);
        let mut swapped = x.clone();
        swapped.swap(i, j);
        prop_assert_eq!(vandermonde(&swapped), -vandermonde(&x));
    }

    #[test]
    fn newton_identities(x in (1usize..=8).prop_flat_map(|n| int_vec(n, 9))) {
        let e1 = elementary_symmetric(&x, 1);
        let e2 = elementary_symmetric(&x, 2);
        prop_assert_eq!(power_sum(&x, 1).unwrap(), e1.clone());
        prop_assert_eq!(power_sum(&x, 2).unwrap(), &e1 * &e1 - Rational::from(2) * e2);
    }

    #[test]
    fn structured_matches_ryser_and_determinantal(
        (u, v) in (1usize..=7).prop_flat_map(|n| (int_vec(n, 6), int_vec(n, 6))),
    ) {
        let n = u.len();
        let x = Matrix::ones(n, n).add(&Matrix::outer(&u, &v)).unwrap();
        let structured = perm_rank2_structured(&u, &v).unwrap();
        prop_assert_eq!(&structured, &perm_ryser(&x).unwrap());
        match perm_rank2_determinantal(&x) {
            Ok(det) => prop_assert_eq!(det, structured),
            Err(e) => prop_assert_eq!(e, Error::DegenerateDenominator),
        }
    }

    #[test]
    fn engines_invariant_under_permutation_and_transpose(
        (m, rp, cp) in (1usize..=6).prop_flat_map(|n| (
            prop::collection::vec(rational_entry(5), n * n).prop_map(move |e| Matrix::new(n, n, e).unwrap()),
            permutation(n),
            permutation(n),
        )),
    ) {
        let p = perm_ryser(&m).unwrap();
        prop_assert_eq!(&perm_ryser(&m.permuted(&rp, &cp)).unwrap(), &p);
        prop_assert_eq!(&perm_ryser(&m.transpose()).unwrap(), &p);
        prop_assert_eq!(&perm_naive(&m.permuted(&rp, &cp)).unwrap(), &p);
        prop_assert_eq!(&perm_naive(&m.transpose()).unwrap(), &p);
    }

    #[test]
    fn permanent_is_row_linear((m, row, c) in (1usize..=6).prop_flat_map(|n| (
        prop::collection::vec(rational_entry(5), n * n).prop_map(move |e| Matrix::new(n, n, e).unwrap()),
        0..n,
        rational(),
    ))) {
        let scaled = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
            if i == row { m.get(i, j) * &c } else { m.get(i, j).clone() }
        });
        let expected = &c * perm_ryser(&m).unwrap();
        prop_assert_eq!(perm_ryser(&scaled).unwrap(), expected.clone());
        prop_assert_eq!(perm_naive(&scaled).unwrap(), expected);
    }

    #[test]
    fn determinantal_agrees_on_rank2_under_symmetries((x, rp, cp) in (1usize..=7).prop_flat_map(|n| (
        any::<u64>().prop_map(move |s| random_rank2(n, 9, s, SampleMode::General).unwrap()),
        permutation(n),
        permutation(n),
    ))) {
        let p = perm_ryser(&x).unwrap();
        for variant in [x.clone(), x.transpose(), x.permuted(&rp, &cp)] {
            match perm_rank2_determinantal(&variant) {
                Ok(v) => prop_assert_eq!(&v, &p),
                Err(e) => prop_assert_eq!(e, Error::DegenerateDenominator),
            }
        }
    }

    #[test]
    fn conjecture_sides_invariant_under_permutation((t, rp, cp) in (1usize..=4).prop_flat_map(|n| (
        any::<u64>().prop_map(move |s| random_rank2(n, 5, s, SampleMode::General).unwrap()),
        permutation(n),
        permutation(n),
    ))) {
        let a = check_conjecture(&t).unwrap();
        let b = check_conjecture(&t.permuted(&rp, &cp)).unwrap();
        prop_assert_eq!((a.lhs, a.rhs), (b.lhs, b.rhs));
    }

    #[test]
    fn expected_charpoly_is_monic_of_degree_n(
        (a, b) in (1usize..=5).prop_flat_map(|n| (int_vec(n, 6), int_vec(n, 6))),
    ) {
        // A degree-n monic polynomial has n-th forward difference n! and
        // (n+1)-th forward difference 0 on unit-spaced nodes.
        let n = a.len();
        let mut values: Vec<Rational> = (0..=n as i64 + 1)
            .map(|x| expected_charpoly(&a, &b, &Rational::from(x)).unwrap())
            .collect();
        let mut differences = Vec::new();
        while values.len() > 1 {
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
            differences.push(values[0].clone());
        }
        prop_assert_eq!(&differences[n - 1], &Rational::from_integer(factorial(n as u64)));
        prop_assert!(differences[n].is_zero());
    }

    #[test]
    fn binomial_symmetry(n in 0u64..=60, k in 0i64..=60) {
        prop_assume!(k as u64 <= n);
        prop_assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ryser_matches_naive(m in square(7, 9)) {
        prop_assert_eq!(perm_ryser(&m).unwrap(), perm_naive(&m).unwrap());
    }

    #[test]
    fn naive_matches_leibniz(m in square(5, 5)) {
        prop_assert_eq!(perm_naive(&m).unwrap(), leibniz(&m, false));
    }
}
