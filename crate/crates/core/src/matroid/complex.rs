use super::{binomial, circuits, bits_of, tutte_polynomial, Bits, Matroid};
use crate::error::{Error, Result};

/// Face counts f_{-1}, f_0, ..., f_{r-1} of the broken circuit complex
/// under the ground order 0 < 1 < ... < n-1.
pub fn broken_circuit_fvector(m: &Matroid) -> Vec<u64> {
    let r = m.rank();
    let mut f = vec![0u64; r + 1];
    if m.loops() != 0 {
        // the empty set is itself a broken circuit
        return f;
    }
    let broken: Vec<Bits> = circuits(m)
        .iter()
        .map(|c| bits_of(&c[1..]))
        .collect();
    let n = m.ground_size();
    let mut stack: Vec<(Bits, usize)> = vec![(0, 0)];
    while let Some((face, next)) = stack.pop() {
        let size = face.count_ones() as usize;
        f[size] += 1;
        if size == r {
            continue;
        }
        for e in next..n {
            let t = face | (1 << e);
            if broken.iter().any(|&bc| bc & (1 << e) != 0 && bc & t == bc) {
                continue;
            }
            stack.push((t, e + 1));
        }
    }
    f
}

/// h_k = sum_{i<=k} (-1)^{k-i} C(r-i, k-i) f_{i-1}, for k = 0..=r.
pub fn h_vector_from_f(f: &[u64], r: usize) -> Vec<i128> {
    (0..=r)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial((r - i) as u64, (k - i) as u64) as i128 * f[i] as i128
                })
                .sum()
        })
        .collect()
}

/// h_0..h_{r-1} of the broken circuit complex, cross-checked against the Tutte polynomial.
pub fn h_vector(m: &Matroid) -> Result<Vec<u64>> {
    let r = m.rank();
    let f = broken_circuit_fvector(m);
    let h = h_vector_from_f(&f, r);
    if m.loops() == 0 && r > 0 && h[r] != 0 {
        return Err(Error::InternalInconsistency(format!("top h-entry {} is nonzero", h[r])));
    }
    let t = tutte_polynomial(m);
    for (k, &hk) in h.iter().enumerate().take(r.max(1)) {
        let expected = t.coefficient(r - k, 0) as i128;
        if hk != expected {
            return Err(Error::InternalInconsistency(format!(
                "h_{k} = {hk} from faces but {expected} from the Tutte polynomial"
            )));
        }
        if hk < 0 {
            return Err(Error::InternalInconsistency(format!("negative h_{k}")));
        }
    }
    Ok(h.into_iter().take(r.max(1)).map(|v| v as u64).collect())
}

#[cfg(test)]
mod tests {
    use super::super::{matroid_from_matrix, mobius_number, tests::k23};
    use super::*;
    use crate::exactlin::{rat, RationalMatrix, Rational};
    use proptest::prelude::*;

    #[test]
    fn uniform_fvector_and_facets() {
        // maximal faces of Br(U_{r,n}) are {0} plus an (r-1)-subset of the rest
        let f = broken_circuit_fvector(&Matroid::uniform(3, 6));
        assert_eq!(f[3], binomial(5, 2));
        assert_eq!(f, vec![1, 6, 15, 10]);
    }

    #[test]
    fn single_element_fvector() {
        assert_eq!(broken_circuit_fvector(&Matroid::uniform(1, 1)), vec![1, 1]);
    }

    #[test]
    fn uniform_h_vectors() {
        // h_i = C(n-d+i-2, i) for U_{d+1,n}
        assert_eq!(h_vector(&Matroid::uniform(4, 6)).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(mobius_number(&Matroid::uniform(5, 6)).unwrap(), 5);
        for n in 3..9u64 {
            for r in 2..n {
                assert_eq!(
                    mobius_number(&Matroid::uniform(r as usize, n as usize)).unwrap(),
                    binomial(n - 1, r - 1)
                );
            }
        }
    }

    #[test]
    fn loop_gives_empty_complex() {
        let m = matroid_from_matrix(&RationalMatrix::from_i64(&[&[1, 0, 1]])).unwrap();
        assert_eq!(broken_circuit_fvector(&m), vec![0, 0]);
        assert_eq!(h_vector(&m).unwrap(), vec![0]);
    }

    #[test]
    fn k23_h_vector_is_order_independent() {
        let m = matroid_from_matrix(&k23()).unwrap();
        let h = h_vector(&m).unwrap();
        let perm = [4usize, 0, 5, 2, 1, 3];
        let permuted = k23().select_columns(&perm);
        assert_eq!(h_vector(&matroid_from_matrix(&permuted).unwrap()).unwrap(), h);
        assert_eq!(h.iter().sum::<u64>(), 7);
    }

    fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_filter_map("zero", move |v| {
            let m = RationalMatrix::new(rows, cols, v.into_iter().map(rat).collect::<Vec<Rational>>()).unwrap();
            (!m.is_zero()).then_some(m)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn h_bounded_by_uniform(m in int_matrix(3, 6)) {
            let mat = matroid_from_matrix(&m).unwrap();
            let h = h_vector(&mat).unwrap();
            let (n, r) = (mat.ground_size() as u64, mat.rank() as u64);
            let mut all_equal = true;
            for (i, &hi) in h.iter().enumerate() {
                let bound = binomial(n - r + i as u64 - 1, i as u64);
                prop_assert!(hi <= bound);
                all_equal &= hi == bound;
            }
            if mat.loops() == 0 {
                prop_assert_eq!(all_equal, mat.is_uniform());
            }
        }

        #[test]
        fn h_invariant_under_column_permutation(m in int_matrix(3, 6), seed in 0usize..720) {
            let mut perm: Vec<usize> = (0..6).collect();
            let mut s = seed;
            for i in (1..6).rev() {
                perm.swap(i, s % (i + 1));
                s /= i + 1;
            }
            let a = h_vector(&matroid_from_matrix(&m).unwrap()).unwrap();
            let b = h_vector(&matroid_from_matrix(&m.select_columns(&perm)).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn tutte_at_one_one_counts_bases(m in int_matrix(3, 6)) {
            let mat = matroid_from_matrix(&m).unwrap();
            prop_assert_eq!(tutte_polynomial(&mat).eval(1, 1), mat.bases().len() as i128);
        }
    }
}
