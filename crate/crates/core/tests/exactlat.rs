use multinv::exactlat::{covers, fixed_lattice, kernel_basis, moved_lattice, rank, snf, IntMatrix, Sublattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all k x k minors, by cofactor expansion.
fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
    fn det(a: &[Vec<BigInt>]) -> BigInt {
        if a.is_empty() {
            return BigInt::from(1);
        }
        let mut total = BigInt::zero();
        for j in 0..a.len() {
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    let rows = m.to_rows();
    let mut g = BigInt::zero();
    for rs in subsets(m.rows(), k) {
        for cs in subsets(m.cols(), k) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

proptest! {
    #[test]
    fn smith_form_is_a_valid_factorization(m in matrix(6, 9)) {
        let f = snf(&m);
        prop_assert_eq!(&(&f.u * &m) * &f.v, f.s.clone());
        prop_assert!(f.s.is_diagonal());
        prop_assert!(f.u.det().unwrap().abs() == BigInt::from(1));
        prop_assert!(f.v.det().unwrap().abs() == BigInt::from(1));
        let d = f.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn smith_diagonal_matches_determinantal_divisors(m in matrix(4, 6)) {
        let d = snf(&m).diagonal();
        let mut prefix = BigInt::from(1);
        for k in 1..=m.rows().min(m.cols()) {
            prefix *= &d[k - 1];
            prop_assert_eq!(prefix.clone(), determinantal_divisor(&m, k));
        }
    }

    #[test]
    fn rank_nullity(m in matrix(6, 5)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.cols(), m.cols());
        prop_assert!((&m * &k).is_zero() || k.cols() == 0);
        prop_assert!(Sublattice::from_columns(&k).is_saturated());
    }

    #[test]
    fn rank_is_transpose_invariant(m in matrix(6, 5)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn span_is_canonical(cols in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5)) {
        let gens: Vec<Vec<BigInt>> = cols.iter().map(|c| big(c)).collect();
        let a = Sublattice::span(3, &gens).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        // add a redundant combination
        let combo: Vec<BigInt> = gens[0].iter().zip(gens.last().unwrap()).map(|(x, y)| x * 2 - y).collect();
        rev.push(combo);
        prop_assert_eq!(&a, &Sublattice::span(3, &rev).unwrap());
        for g in &gens {
            prop_assert!(a.contains(g));
        }
    }

    #[test]
    fn intersection_contains_exactly_the_common_points(
        a in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..3),
        b in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..3),
    ) {
        let la = Sublattice::span(2, &a.iter().map(|v| big(v)).collect::<Vec<_>>()).unwrap();
        let lb = Sublattice::span(2, &b.iter().map(|v| big(v)).collect::<Vec<_>>()).unwrap();
        let both = la.intersect(&lb).unwrap();
        for x in -8i64..=8 {
            for y in -8i64..=8 {
                let v = big(&[x, y]);
                prop_assert_eq!(both.contains(&v), la.contains(&v) && lb.contains(&v));
            }
        }
    }

    /// Parts all contain `6 Z^k`, so the residues in `[0, 6)^k` decide the cover.
    #[test]
    fn covering_agrees_with_residue_scan(
        k in 1usize..=3,
        raw in prop::collection::vec(prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 0..3), 0..4),
        deficient in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 0..2),
    ) {
        let six: Vec<Vec<BigInt>> = (0..k).map(|i| {
            let mut e = vec![0i64; k];
            e[i] = 6;
            big(&e)
        }).collect();
        let full_parts: Vec<Sublattice> = raw.iter().map(|gens| {
            let mut g: Vec<Vec<BigInt>> = gens.iter().map(|v| big(&v[..k])).collect();
            g.extend(six.iter().cloned());
            Sublattice::span(k, &g).unwrap()
        }).collect();
        let mut parts = full_parts.clone();
        for d in &deficient {
            if k > 1 {
                parts.push(Sublattice::span(k, &[big(&d[..k])]).unwrap());
            }
        }
        let ambient = Sublattice::full(k);
        let cover = covers(&ambient, &parts).unwrap();

        let mut all = true;
        let mut idx = vec![0i64; k];
        loop {
            let v = big(&idx);
            all &= full_parts.iter().any(|p| p.contains(&v));
            let mut i = 0;
            while i < k {
                idx[i] += 1;
                if idx[i] < 6 { break; }
                idx[i] = 0;
                i += 1;
            }
            if i == k { break; }
        }
        prop_assert_eq!(cover.covered, all && !full_parts.is_empty());
        if let Some(w) = cover.witness {
            prop_assert!(!parts.iter().any(|p| p.contains(&w)));
        }
    }
}

#[test]
fn duality_on_small_groups() {
    let g1 = IntMatrix::from_rows(&[vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
    let fixed = fixed_lattice(3, std::slice::from_ref(&g1)).unwrap();
    let moved = moved_lattice(3, &[g1]).unwrap();
    assert_eq!(fixed.rank() + moved.rank(), 3);
    assert!(!moved.is_saturated());
    assert_eq!(moved.quotient_invariants().torsion, vec![BigInt::from(2)]);
}
