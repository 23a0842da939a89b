//! The multiplicative action of `G` on `k[A]`: isotropy groups of lattice
//! points, the invariant `mu`, and heights of the ideals `I_R(H)`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactlat::{covers, fixed_lattice, IntMatrix, Sublattice};
use crate::fpcohom::{mu_p_with, GroupTable, MuValue, ResolutionOptions};
use crate::matgroup::{is_power_of, subgroup_classes, subgroups, MatGroup};
use crate::par;

#[derive(Clone, Debug)]
pub struct IsotropyEntry {
    pub subgroup: MatGroup,
    /// Element indices of the subgroup inside the ambient group.
    pub members: Vec<usize>,
    /// A lattice point whose stabilizer is exactly `subgroup`.
    pub witness: Vec<BigInt>,
    /// Conjugacy class label, shared by conjugate subgroups.
    pub class: usize,
}

impl IsotropyEntry {
    /// The witness as machine integers, if it fits.
    pub fn witness_i64(&self) -> Option<Vec<i64>> {
        self.witness.iter().map(ToPrimitive::to_i64).collect()
    }
}

#[derive(Clone, Debug)]
pub struct IsotropyReport {
    pub entries: Vec<IsotropyEntry>,
    /// Subgroups whose realizability could not be decided within bounds.
    pub undecided: Vec<MatGroup>,
    pub complete: bool,
}

enum Realizability {
    Realized(Vec<BigInt>),
    NotRealized,
    Undecided,
}

/// Indices of the elements fixing `a`.
pub fn stabilizer(g: &MatGroup, a: &[BigInt]) -> Vec<usize> {
    (0..g.order())
        .filter(|&i| g.element(i).mul_vec(a) == a)
        .collect()
}

fn realizability(g: &MatGroup, members: &[usize], sub: &MatGroup) -> Result<Realizability> {
    let n = g.n();
    let hgens = sub.generators();
    let fixed = fixed_lattice(n, &hgens)?;
    let mut parts: Vec<Sublattice> = Vec::new();
    for x in 0..g.order() {
        if members.binary_search(&x).is_ok() {
            continue;
        }
        let mut gens = hgens.clone();
        gens.push(g.element(x).clone());
        let lg = fixed_lattice(n, &gens)?;
        // Both lattices are saturated, so equal rank means equal.
        if lg.rank() == fixed.rank() {
            return Ok(Realizability::NotRealized);
        }
        if !parts.contains(&lg) {
            parts.push(lg);
        }
    }
    match covers(&fixed, &parts) {
        Ok(c) if c.covered => Ok(Realizability::NotRealized),
        Ok(c) => Ok(Realizability::Realized(c.witness.expect("uncovered point"))),
        Err(e) if e.is_resource_bound() => Ok(Realizability::Undecided),
        Err(e) => Err(e),
    }
}

/// Subgroups of `g` that occur as the stabilizer of some lattice point.
pub fn isotropy_subgroups(g: &MatGroup) -> Result<IsotropyReport> {
    let subs = subgroups(g)?;
    let classes = subgroup_classes(g, &subs)?;
    let members: Vec<Vec<usize>> = subs.iter().map(|s| g.indices_of(s)).collect::<Result<_>>()?;
    let idx: Vec<usize> = (0..subs.len()).collect();
    let decided = par::try_map(&idx, |&i| realizability(g, &members[i], &subs[i]))?;

    let mut entries = Vec::new();
    let mut undecided = Vec::new();
    for (i, r) in decided.into_iter().enumerate() {
        match r {
            Realizability::Realized(witness) => entries.push(IsotropyEntry {
                subgroup: subs[i].clone(),
                members: members[i].clone(),
                witness,
                class: classes[i],
            }),
            Realizability::NotRealized => {}
            Realizability::Undecided => undecided.push(subs[i].clone()),
        }
    }
    Ok(IsotropyReport {
        complete: undecided.is_empty(),
        entries,
        undecided,
    })
}

/// `mu = min over lattice points a of mu_p(G_a)`.
pub fn mu_action(g: &MatGroup, p: u64, search_limit: usize) -> Result<MuValue> {
    mu_action_with(g, p, search_limit, &ResolutionOptions::default())
}

pub fn mu_action_with(g: &MatGroup, p: u64, search_limit: usize, opts: &ResolutionOptions) -> Result<MuValue> {
    let report = isotropy_subgroups(g)?;
    mu_from_report(&report, p, search_limit, opts)
}

/// `mu` from an existing isotropy report; one resolution per conjugacy class.
pub fn mu_from_report(report: &IsotropyReport, p: u64, search_limit: usize, opts: &ResolutionOptions) -> Result<MuValue> {
    if !report.complete {
        return Err(Error::BoundExceeded {
            what: "undecided isotropy subgroups",
            bound: 0,
            got: report.undecided.len(),
        });
    }
    let mut reps: Vec<&IsotropyEntry> = Vec::new();
    for e in &report.entries {
        if !reps.iter().any(|r| r.class == e.class) {
            reps.push(e);
        }
    }
    let mus = par::try_map(&reps, |e| {
        mu_p_with(&GroupTable::from(&e.subgroup), p, search_limit, opts)
    })?;
    Ok(mus.into_iter().fold(MuValue::infinity(), MuValue::min))
}

/// `height I_R(H) = n - rank A^H`.
pub fn height_ir(n: usize, elems: &[IntMatrix]) -> Result<usize> {
    Ok(n - fixed_lattice(n, elems)?.rank())
}

/// Height of the trace ideal `R^G_X`: the least `height I_R(P)` over
/// `p`-subgroups `P` outside `X`. `None` is infinity.
///
/// `in_x` must describe a family closed under conjugation and under taking
/// subgroups; this is checked on the full subgroup lattice.
pub fn trace_ideal_height<F>(g: &MatGroup, p: u64, in_x: F) -> Result<Option<usize>>
where
    F: Fn(&MatGroup) -> bool,
{
    crate::matgroup::check_prime(p)?;
    let subs = subgroups(g)?;
    let classes = subgroup_classes(g, &subs)?;
    let members: Vec<Vec<usize>> = subs.iter().map(|s| g.indices_of(s)).collect::<Result<_>>()?;
    let flags: Vec<bool> = subs.iter().map(&in_x).collect();
    for i in 0..subs.len() {
        if flags[i] != flags[classes[i]] {
            return Err(Error::NotClosed("conjugation"));
        }
        if !flags[i] {
            continue;
        }
        let sub_of_i = |j: usize| members[j].iter().all(|x| members[i].binary_search(x).is_ok());
        if (0..subs.len()).any(|j| !flags[j] && sub_of_i(j)) {
            return Err(Error::NotClosed("subgroups"));
        }
    }
    let n = g.n();
    let mut best: Option<usize> = None;
    for (s, &flag) in subs.iter().zip(&flags) {
        if flag || !is_power_of(s.order(), p as usize) {
            continue;
        }
        let h = height_ir(n, &s.generators())?;
        best = Some(best.map_or(h, |b| b.min(h)));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::matgroup::DEFAULT_MAX_ORDER;

    fn group(gens: Vec<IntMatrix>) -> MatGroup {
        MatGroup::generate(gens[0].rows(), &gens, DEFAULT_MAX_ORDER).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn inversion_isotropy() {
        for n in 1..=4 {
            let g = group(vec![corpus::minus_identity(n)]);
            let r = isotropy_subgroups(&g).unwrap();
            assert!(r.complete);
            assert_eq!(r.entries.len(), 2);
            let mut e1 = vec![0; n];
            e1[0] = 1;
            assert!(r.entries[0].subgroup.is_trivial());
            assert_eq!(r.entries[0].witness, big(&e1));
            assert_eq!(r.entries[1].subgroup.order(), 2);
            assert_eq!(r.entries[1].witness, big(&vec![0; n]));
        }
    }

    #[test]
    fn trivial_group_isotropy() {
        let r = isotropy_subgroups(&MatGroup::trivial(3)).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].witness, big(&[0, 0, 0]));
        assert!(mu_action(&MatGroup::trivial(3), 5, 10).unwrap().is_infinite());
    }

    #[test]
    fn g1_isotropy() {
        let g = group(vec![corpus::g1()]);
        let r = isotropy_subgroups(&g).unwrap();
        assert_eq!(r.entries.len(), 2);
        assert_eq!(r.entries[0].witness, big(&[1, 0, 0]));
        assert_eq!(r.entries[1].subgroup, g);
        assert_eq!(mu_action(&g, 2, 10).unwrap(), MuValue::exact(1));
        assert_eq!(height_ir(3, &g.generators()).unwrap(), 2);
    }

    #[test]
    fn s3_permutation_isotropy() {
        let g = group(corpus::symmetric_group_generators(3));
        let r = isotropy_subgroups(&g).unwrap();
        let orders: Vec<usize> = r.entries.iter().map(|e| e.subgroup.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 6]);
        for e in &r.entries {
            assert_eq!(stabilizer(&g, &e.witness), e.members);
        }
        assert_eq!(mu_action(&g, 3, 10).unwrap(), MuValue::exact(3));
        assert_eq!(mu_action(&g, 2, 10).unwrap(), MuValue::exact(1));
    }

    #[test]
    fn heights() {
        assert_eq!(height_ir(3, &[]).unwrap(), 0);
        assert_eq!(height_ir(3, &[corpus::minus_identity(3)]).unwrap(), 3);
    }

    #[test]
    fn trace_heights() {
        let g = group(vec![corpus::minus_identity(3)]);
        assert_eq!(trace_ideal_height(&g, 2, |h| h.is_trivial()).unwrap(), Some(3));
        assert_eq!(trace_ideal_height(&g, 2, |_| true).unwrap(), None);
        let s3 = group(corpus::symmetric_group_generators(3));
        assert_eq!(trace_ideal_height(&s3, 3, |h| h.is_trivial()).unwrap(), Some(2));
        assert_eq!(
            trace_ideal_height(&s3, 2, |h| h.order() == 2).unwrap_err(),
            Error::NotClosed("subgroups")
        );
        let one_transposition = s3.element(s3.index_of(&corpus::perm_matrix(&[1, 0, 2])).unwrap()).clone();
        assert_eq!(
            trace_ideal_height(&s3, 2, |h| h.order() == 1 || (h.order() == 2 && h.contains(&one_transposition))).unwrap_err(),
            Error::NotClosed("conjugation")
        );
    }
}
