use std::collections::BTreeSet;

use multinv::cmclassify::{classify, cyclic_sylow_facts, evaluate_all, verify_certificate, ClassifyOptions, Rule, Status};
use multinv::corpus::{self, CorpusEntry};
use multinv::exactlat::{fixed_lattice, moved_lattice, IntMatrix};
use multinv::fpcohom::{mu_p, resolution, GroupTable, ResolutionOptions};
use multinv::laurent::{box_points, invariant_dim_in_ball, orbit_sum, LaurentPoly};
use multinv::matgroup::{subgroups, sylow, MatGroup};
use multinv::mulaction::{height_ir, isotropy_subgroups, mu_action, stabilizer, trace_ideal_height};
use multinv::selftest::random_unimodular;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_corpus() -> Vec<CorpusEntry> {
    corpus::corpus().into_iter().filter(|e| e.name != "b3").collect()
}

#[test]
fn corpus_verdicts() {
    use Rule::*;
    use Status::*;
    let expected: &[(&str, u64, Status, Rule)] = &[
        ("inversion-1", 2, CM, R2),
        ("inversion-2", 2, CM, R3),
        ("inversion-3", 2, NotCM, R5),
        ("inversion-4", 2, NotCM, R5),
        ("inversion-5", 2, NotCM, R5),
        ("g1", 2, CM, R3),
        ("g1", 3, CM, R1),
        ("g2", 2, CM, R3),
        ("gamma", 2, CM, R2),
        ("s3-perm", 2, CM, R2),
        ("s3-perm", 3, CM, R2),
        ("s4-perm", 2, CM, R2),
        ("s4-perm", 3, CM, R2),
        ("rot4", 2, CM, R3),
        ("rot4-companion", 2, CM, R3),
        ("z3-rot", 3, CM, R3),
        ("z3-perm", 3, CM, R3),
        ("z3-perm-x2", 3, NotCM, R5),
        ("c6-rot", 2, CM, R3),
        ("c6-rot", 3, CM, R3),
        ("diag-3minus", 2, NotCM, R5),
        ("s3-a2-x1", 2, CM, R2),
        ("s3-a2-x1", 3, CM, R2),
        ("s3-a2-x2", 2, CM, R3),
        ("s3-a2-x2", 3, CM, R6),
        ("s3-a2-x3", 2, NotCM, R5),
        ("s3-a2-x3", 3, NotCM, R6),
        ("s3-perm-x2", 2, CM, R3),
        ("s3-perm-x2", 3, Unknown, R8),
        ("d4", 2, CM, R2),
        ("b3", 2, CM, R2),
        ("b3", 3, CM, R2),
    ];
    let opts = ClassifyOptions {
        audit: true,
        ..Default::default()
    };
    for &(name, p, status, rule) in expected {
        let g = corpus::builtin(name).unwrap().group().unwrap();
        let v = classify(&g, p, &opts).unwrap();
        assert_eq!((v.status, v.rule), (status, rule), "{name} at {p}");
        assert!(verify_certificate(&g, p, &v, &opts).unwrap(), "{name} at {p}");
    }
    let total: usize = corpus::corpus().iter().map(|e| e.primes.len()).sum();
    assert_eq!(total, expected.len());
}

/// Whenever R5's hypotheses hold with a bireflection generator, R3 already decided.
#[test]
fn r5_positive_direction_is_covered_by_r3() {
    for e in corpus::corpus() {
        let g = e.group().unwrap();
        for &p in &e.primes {
            let Some(f) = cyclic_sylow_facts(&g, p).unwrap() else { continue };
            if f.sylow_order > 1 && f.op_proper && f.bireflection_generator.is_some() {
                let outcomes = evaluate_all(&g, p, &ClassifyOptions::default()).unwrap();
                assert_eq!(outcomes[Rule::R3 as usize].status, Some(Status::CM), "{}", e.name);
                assert!((2..=4).contains(&f.sylow_order));
            }
        }
    }
}

#[test]
fn resolutions_of_corpus_groups() {
    for e in small_corpus() {
        let g = e.group().unwrap();
        let t = GroupTable::from(&g);
        for &p in &e.primes {
            let res = resolution(&t, p, 4, &ResolutionOptions::default()).unwrap();
            assert!(res.composition_is_zero(&t), "{}", e.name);
            let p_group = g.p_part(p) == g.order();
            if p_group {
                assert!(res.is_minimal(), "{}", e.name);
            }
        }
    }
}

#[test]
fn mu_of_action_is_at_most_mu_of_group() {
    for e in small_corpus() {
        let g = e.group().unwrap();
        for &p in &e.primes {
            let whole = mu_p(&GroupTable::from(&g), p, 10).unwrap();
            let action = mu_action(&g, p, 10).unwrap();
            let key = |m: multinv::fpcohom::MuValue| m.value.unwrap_or(usize::MAX);
            assert!(key(action) <= key(whole), "{} at {p}", e.name);
        }
    }
}

/// Every stabilizer met in a box is listed, and every listed witness is exact.
#[test]
fn isotropy_matches_box_stabilizers() {
    for e in small_corpus().into_iter().filter(|e| e.n <= 4) {
        let g = e.group().unwrap();
        let report = isotropy_subgroups(&g).unwrap();
        assert!(report.complete);
        let listed: BTreeSet<Vec<usize>> = report.entries.iter().map(|x| x.members.clone()).collect();
        for entry in &report.entries {
            assert_eq!(stabilizer(&g, &entry.witness), entry.members, "{}", e.name);
        }
        let full = report.entries.last().unwrap();
        assert_eq!(full.subgroup.order(), g.order());
        assert!(full.witness.iter().all(|x| *x == BigInt::from(0)));
        for a in box_points(g.n(), 2) {
            let v: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
            assert!(listed.contains(&stabilizer(&g, &v)), "{} at {a:?}", e.name);
        }
    }
}

#[test]
fn trace_height_with_coprime_family() {
    for e in small_corpus() {
        let g = e.group().unwrap();
        for &p in &e.primes {
            let coprime = |h: &MatGroup| !(h.order() as u64).is_multiple_of(p);
            let got = trace_ideal_height(&g, p, coprime).unwrap();
            let expect = subgroups(&g)
                .unwrap()
                .iter()
                .filter(|h| !h.is_trivial() && h.order() == h.p_part(p))
                .map(|h| height_ir(g.n(), &h.generators()).unwrap())
                .min();
            assert_eq!(got, expect, "{} at {p}", e.name);
        }
    }
}

#[test]
fn rank_duality_and_sylow_counts() {
    for e in corpus::corpus() {
        let g = e.group().unwrap();
        for h in subgroups(&g).unwrap() {
            let gens = h.generators();
            let fixed = fixed_lattice(g.n(), &gens).unwrap();
            let moved = moved_lattice(g.n(), &gens).unwrap();
            assert_eq!(fixed.rank() + moved.rank(), g.n());
            assert_eq!(height_ir(g.n(), &gens).unwrap(), g.n() - fixed.rank());
        }
        for &p in &e.primes {
            assert_eq!(sylow(&g, p).unwrap().order(), g.p_part(p));
        }
    }
}

#[test]
fn burnside_on_corpus() {
    for e in corpus::corpus().into_iter().filter(|e| e.n <= 4) {
        let g = e.group().unwrap();
        for b in 0..=2 {
            let r = invariant_dim_in_ball(&g, e.primes[0], b).unwrap();
            assert!(r.counts_agree(), "{} radius {b}", e.name);
            for f in r.basis(g.n(), e.primes[0]) {
                assert!(f.is_invariant(&g).unwrap());
            }
        }
    }
}

#[test]
fn conjugation_preserves_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["inversion-3", "g1", "rot4-companion", "s3-a2-x2", "z3-perm-x2"] {
        let e = corpus::builtin(name).unwrap();
        let g = e.group().unwrap();
        for &p in &e.primes {
            let base = classify(&g, p, &ClassifyOptions::default()).unwrap();
            for _ in 0..3 {
                let t = random_unimodular(&mut rng, g.n(), 2 * g.n());
                let h = g.conjugate_by(&t).unwrap();
                let v = classify(&h, p, &ClassifyOptions::default()).unwrap();
                assert_eq!((v.status, v.rule), (base.status, base.rule), "{name}");
            }
        }
    }
}

fn laurent(n: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, n), 0i64..3), 0..5)
        .prop_map(move |terms| LaurentPoly::from_terms(n, 3, terms).unwrap())
}

fn signed_permutations() -> Vec<IntMatrix> {
    MatGroup::generate(3, &corpus::signed_permutation_generators(3), 48)
        .unwrap()
        .elements()
        .to_vec()
}

proptest! {
    #[test]
    fn action_is_a_ring_homomorphism(f in laurent(3), h in laurent(3), i in 0usize..48, j in 0usize..48) {
        let elems = signed_permutations();
        let (a, b) = (&elems[i], &elems[j]);
        prop_assert_eq!(f.act(&(a * b)).unwrap(), f.act(b).unwrap().act(a).unwrap());
        prop_assert_eq!(
            f.mul(&h).unwrap().act(a).unwrap(),
            f.act(a).unwrap().mul(&h.act(a).unwrap()).unwrap()
        );
        prop_assert_eq!(f.add(&h).act(a).unwrap(), f.act(a).unwrap().add(&h.act(a).unwrap()));
    }

    #[test]
    fn orbit_sums_are_invariant(a in prop::collection::vec(-4i64..=4, 3)) {
        let g = MatGroup::generate(3, &corpus::signed_permutation_generators(3), 48).unwrap();
        let s = orbit_sum(&g, 2, &a).unwrap();
        prop_assert!(s.is_invariant(&g).unwrap());
        prop_assert_eq!(48 % s.terms().len(), 0);
    }
}
