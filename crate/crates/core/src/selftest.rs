//! The acceptance criteria, runnable from the library, the CLI and the tests.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cmclassify::{
    classify, cyclic_sylow_facts, verify_certificate, ClassifyOptions, Rule, Status, Verdict,
};
use crate::corpus::{self, CorpusEntry};
use crate::error::Result;
use crate::exactlat::{fixed_lattice, moved_lattice, snf, IntMatrix};
use crate::fpcohom::{cohomology_dims, mu_p, mu_p_formula, GroupTable, MuValue, ResolutionOptions};
use crate::laurent::{check_g1_decomposition, invariant_dim_in_ball};
use crate::matgroup::{subgroups, MatGroup, DEFAULT_MAX_ORDER};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_us: u64,
    /// Runtime budget, when the criterion has one.
    pub budget_us: Option<u64>,
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "inversion family"),
    (2, "mu formula vs resolution"),
    (3, "cohomology dimension tables"),
    (4, "rank duality"),
    (5, "Burnside double count"),
    (6, "G1 decomposition"),
    (7, "cyclic Sylow order bound"),
    (8, "classifier soundness"),
    (9, "Smith normal form properties"),
];

fn timed(id: u8, budget: Option<Duration>, f: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    let elapsed = start.elapsed();
    let within = budget.is_none_or(|b| elapsed <= b);
    let detail = if within {
        detail
    } else {
        format!("{detail}; exceeded time budget of {} ms", budget.unwrap().as_millis())
    };
    CriterionResult {
        id,
        name: CRITERIA[id as usize - 1].1,
        passed: ok && within,
        detail,
        elapsed_us: elapsed.as_micros() as u64,
        budget_us: budget.map(|b| b.as_micros() as u64),
    }
}

pub fn run(id: u8) -> CriterionResult {
    match id {
        1 => criterion1(),
        2 => criterion2(),
        3 => criterion3(),
        4 => criterion4(),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(),
        8 => criterion8(),
        9 => criterion9(),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=9).map(run).collect()
}

fn group(gens: &[IntMatrix]) -> Result<MatGroup> {
    MatGroup::generate(gens[0].rows(), gens, DEFAULT_MAX_ORDER)
}

pub fn criterion1() -> CriterionResult {
    timed(1, Some(Duration::from_secs(1)), || {
        let opts = ClassifyOptions::default();
        let mut parts = Vec::new();
        let mut ok = true;
        for n in 1..=5 {
            let g = group(&[corpus::minus_identity(n)])?;
            let v = classify(&g, 2, &opts)?;
            let want = if n <= 2 { Status::CM } else { Status::NotCM };
            let checked = verify_certificate(&g, 2, &v, &opts)?;
            ok &= v.status == want && checked;
            parts.push(format!("n={n}: {} via {}", v.status, v.rule));
        }
        Ok((ok, parts.join(", ")))
    })
}

pub fn criterion2() -> CriterionResult {
    timed(2, Some(Duration::from_secs(10)), || {
        let cases: [(&str, Vec<IntMatrix>, u64); 5] = [
            ("Z/2", vec![corpus::minus_identity(1)], 2),
            ("Z/3", vec![corpus::rotation3()], 3),
            ("Z/4", vec![corpus::rotation4()], 2),
            ("S3", corpus::symmetric_group_generators(3), 2),
            ("S3", corpus::symmetric_group_generators(3), 3),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, gens, p) in cases {
            let g = group(&gens)?;
            let mu = mu_p(&GroupTable::from(&g), p, 10)?;
            let formula = if g.p_part(p) as u64 == p { Some(mu_p_formula(&g, p)?) } else { None };
            if let Some(f) = formula {
                ok &= mu.exact && mu.value == Some(f);
            }
            if name == "S3" && p == 3 {
                ok &= mu == MuValue::exact(3);
            }
            parts.push(match formula {
                Some(f) => format!("{name} p={p}: {mu} (formula {f})"),
                None => format!("{name} p={p}: {mu} (|P| != p)"),
            });
        }
        Ok((ok, parts.join(", ")))
    })
}

pub fn criterion3() -> CriterionResult {
    timed(3, None, || {
        let opts = ResolutionOptions::default();
        let z2 = cohomology_dims(&GroupTable::cyclic(2), 2, 8, &opts)?;
        let z3 = cohomology_dims(&GroupTable::cyclic(3), 3, 8, &opts)?;
        let s3 = group(&corpus::symmetric_group_generators(3))?;
        let s3 = cohomology_dims(&GroupTable::from(&s3), 3, 6, &opts)?;
        let ok = z2 == vec![1; 9] && z3 == vec![1; 9] && s3 == vec![1, 0, 0, 1, 1, 0, 0];
        Ok((ok, format!("Z/2: {z2:?}, Z/3: {z3:?}, S3 at 3: {s3:?}")))
    })
}

pub fn criterion4() -> CriterionResult {
    timed(4, None, || {
        let entries = corpus::corpus();
        let per_group = par::try_map(&entries, |e| -> Result<(usize, usize)> {
            let g = e.group()?;
            let mut good = 0;
            let subs = subgroups(&g)?;
            for h in &subs {
                let gens = h.generators();
                let fixed = fixed_lattice(g.n(), &gens)?.rank();
                let moved = moved_lattice(g.n(), &gens)?.rank();
                good += usize::from(fixed + moved == g.n());
            }
            Ok((good, subs.len()))
        })?;
        let good: usize = per_group.iter().map(|x| x.0).sum();
        let total: usize = per_group.iter().map(|x| x.1).sum();
        Ok((good == total && total >= 50, format!("{good}/{total} subgroup instances")))
    })
}

pub fn criterion5() -> CriterionResult {
    timed(5, None, || {
        let entries: Vec<CorpusEntry> = corpus::corpus().into_iter().filter(|e| e.n <= 4).collect();
        let checks = par::try_map(&entries, |e| -> Result<Vec<bool>> {
            let g = e.group()?;
            (0..=2)
                .map(|b| Ok(invariant_dim_in_ball(&g, e.primes[0], b)?.counts_agree()))
                .collect()
        })?;
        let flat: Vec<bool> = checks.into_iter().flatten().collect();
        let good = flat.iter().filter(|&&b| b).count();
        Ok((good == flat.len(), format!("{good}/{} (group, radius) pairs agree", flat.len())))
    })
}

pub fn criterion6() -> CriterionResult {
    timed(6, Some(Duration::from_secs(30)), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for b in 1..=3 {
            let r = check_g1_decomposition(2, b)?;
            ok &= r.holds;
            parts.push(format!(
                "B={b}: {} = {} + {}",
                r.g1_invariants, r.gamma_invariants, r.twisted
            ));
        }
        Ok((ok, parts.join(", ")))
    })
}

fn corpus_inputs() -> Vec<(CorpusEntry, u64)> {
    corpus::corpus()
        .into_iter()
        .flat_map(|e| e.primes.clone().into_iter().map(move |p| (e.clone(), p)))
        .collect()
}

pub fn criterion7() -> CriterionResult {
    timed(7, None, || {
        let mut seen = Vec::new();
        let mut ok = true;
        for (e, p) in corpus_inputs() {
            let g = e.group()?;
            let Some(f) = cyclic_sylow_facts(&g, p)? else { continue };
            if f.sylow_order > 1 && f.op_proper && f.bireflection_generator.is_some() {
                ok &= matches!(f.sylow_order, 2..=4);
                seen.push(format!("{} p={p}: |P|={}", e.name, f.sylow_order));
            }
        }
        ok &= !seen.is_empty();
        Ok((ok, format!("{} inputs: {}", seen.len(), seen.join(", "))))
    })
}

/// A unimodular matrix built from random elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut t = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            t = IntMatrix::diag(&[-1]);
        }
        return t;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        for k in 0..n {
            let v = t.get(i, k) + &c * t.get(j, k);
            t.set(i, k, v);
        }
        if rng.gen_bool(0.2) {
            for k in 0..n {
                let v = -t.get(i, k);
                t.set(i, k, v);
            }
        }
    }
    t
}

fn same_verdict(a: &Verdict, b: &Verdict) -> bool {
    a.status == b.status && a.rule == b.rule
}

pub fn criterion8() -> CriterionResult {
    timed(8, None, || {
        let inputs = corpus_inputs();
        let audit = ClassifyOptions {
            audit: true,
            ..Default::default()
        };
        let plain = ClassifyOptions::default();
        let results = par::map(&inputs, |(e, p)| -> Result<bool> {
            let g = e.group()?;
            let base = classify(&g, *p, &audit)?;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (*p << 32) ^ e.name.len() as u64);
            let mut invariant = true;
            for _ in 0..10 {
                let t = random_unimodular(&mut rng, g.n(), 3 * g.n());
                let h = g.conjugate_by(&t)?;
                invariant &= same_verdict(&base, &classify(&h, *p, &plain)?);
            }
            Ok(invariant)
        });
        let mut failures = Vec::new();
        let mut conj_ok = 0;
        for ((e, p), r) in inputs.iter().zip(&results) {
            match r {
                Ok(true) => conj_ok += 1,
                Ok(false) => failures.push(format!("{} p={p}: conjugation changed the verdict", e.name)),
                Err(err) => failures.push(format!("{} p={p}: {err}", e.name)),
            }
        }
        let detail = if failures.is_empty() {
            format!("{} inputs audited, {conj_ok} stable under 10 conjugations each", inputs.len())
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    })
}

/// Checks `U M V = S`, the divisibility chain and unimodularity of `U`, `V`.
pub fn snf_holds(m: &IntMatrix) -> Result<bool> {
    let f = snf(m);
    let product = f.u.checked_mul(m)?.checked_mul(&f.v)?;
    if product != f.s || !f.s.is_diagonal() {
        return Ok(false);
    }
    let d = f.diagonal();
    let nonneg = d.iter().all(|x| !x.is_negative());
    let chain = d.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    });
    Ok(nonneg && chain && f.u.det()?.abs().is_one() && f.v.det()?.abs().is_one())
}

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}

pub fn criterion9() -> CriterionResult {
    timed(9, Some(Duration::from_secs(5)), || {
        let results = par::map_range(0..1000, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            snf_holds(&random_matrix(&mut rng, 6, 9))
        });
        let good = results.iter().filter(|r| matches!(r, Ok(true))).count();
        Ok((good == 1000, format!("{good}/1000 random matrices")))
    })
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// The decisions the classifier reaches on the whole corpus.
pub fn corpus_verdicts() -> Result<Vec<(String, u64, Status, Rule)>> {
    let opts = ClassifyOptions::default();
    corpus_inputs()
        .into_iter()
        .map(|(e, p)| {
            let v = classify(&e.group()?, p, &opts)?;
            Ok((e.name, p, v.status, v.rule))
        })
        .collect()
}
