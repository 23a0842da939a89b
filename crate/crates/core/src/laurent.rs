//! Sparse Laurent polynomials over `F_p` and the monomial action of a
//! matrix group on them.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlat::IntMatrix;
use crate::fpcohom::{rank_of_columns, Fp};
use crate::matgroup::{check_prime, MatGroup};
use crate::par;

pub type Exponent = Vec<i64>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    n: usize,
    p: u64,
    terms: BTreeMap<Exponent, u32>,
}

impl LaurentPoly {
    pub fn zero(n: usize, p: u64) -> Self {
        LaurentPoly {
            n,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, p: u64) -> Self {
        Self::monomial(n, p, vec![0; n], 1)
    }

    pub fn monomial(n: usize, p: u64, exponent: Exponent, coeff: i64) -> Self {
        assert_eq!(exponent.len(), n, "exponent length");
        let mut f = Self::zero(n, p);
        f.add_term(exponent, Fp::new(p).reduce(coeff));
        f
    }

    pub fn from_terms(n: usize, p: u64, terms: impl IntoIterator<Item = (Exponent, i64)>) -> Result<Self> {
        let mut f = Self::zero(n, p);
        let field = Fp::new(p);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.len(),
                });
            }
            f.add_term(e, field.reduce(c));
        }
        Ok(f)
    }

    fn add_term(&mut self, e: Exponent, c: u32) {
        if c == 0 {
            return;
        }
        let field = Fp::new(self.p);
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    fn compatible(&self, other: &LaurentPoly) {
        assert!(self.n == other.n && self.p == other.p, "incompatible polynomials");
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        self.compatible(other);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        let field = Fp::new(self.p);
        LaurentPoly {
            n: self.n,
            p: self.p,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), field.sub(0, c))).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.compatible(other);
        let field = Fp::new(self.p);
        let mut out = Self::zero(self.n, self.p);
        for (a, &c) in &self.terms {
            for (b, &d) in &other.terms {
                let e = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.checked_add(*y))
                    .collect::<Option<Vec<i64>>>()
                    .ok_or(Error::Overflow)?;
                out.add_term(e, field.mul(c, d));
            }
        }
        Ok(out)
    }

    /// `g` acts on exponents: the monomial `x^a` goes to `x^{g a}`.
    pub fn act(&self, g: &IntMatrix) -> Result<LaurentPoly> {
        if !g.is_square() || g.rows() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.rows(),
            });
        }
        let m = small_matrix(g)?;
        let mut out = Self::zero(self.n, self.p);
        for (a, &c) in &self.terms {
            out.add_term(apply(&m, a)?, c);
        }
        Ok(out)
    }

    /// Fixed by every generator of `g`.
    pub fn is_invariant(&self, g: &MatGroup) -> Result<bool> {
        for h in g.generators() {
            if self.act(&h)? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            match (c, vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRecord<'a> {
    coeff: u32,
    exponents: &'a [i64],
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, &c) in &self.terms {
            seq.serialize_element(&TermRecord { coeff: c, exponents: e })?;
        }
        seq.end()
    }
}

type SmallMatrix = Vec<Vec<i64>>;

fn small_matrix(g: &IntMatrix) -> Result<SmallMatrix> {
    g.to_i64_rows().ok_or(Error::Overflow)
}

fn apply(m: &SmallMatrix, a: &[i64]) -> Result<Exponent> {
    m.iter()
        .map(|row| {
            row.iter().zip(a).try_fold(0i64, |acc, (x, y)| {
                x.checked_mul(*y).and_then(|t| acc.checked_add(t))
            })
        })
        .collect::<Option<Vec<i64>>>()
        .ok_or(Error::Overflow)
}

fn small_elements(g: &MatGroup) -> Result<Vec<SmallMatrix>> {
    g.elements().iter().map(small_matrix).collect()
}

/// The orbit `G a`, sorted.
pub fn orbit(g: &MatGroup, a: &[i64]) -> Result<Vec<Exponent>> {
    if a.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: a.len(),
        });
    }
    let elems = small_elements(g)?;
    let set: BTreeSet<Exponent> = elems.iter().map(|m| apply(m, a)).collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

/// Sum of the distinct monomials in the orbit of `x^a`.
pub fn orbit_sum(g: &MatGroup, p: u64, a: &[i64]) -> Result<LaurentPoly> {
    LaurentPoly::from_terms(g.n(), p, orbit(g, a)?.into_iter().map(|e| (e, 1)))
}

/// All exponents with infinity norm at most `b`, in lexicographic order.
pub fn box_points(n: usize, b: i64) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut v = vec![-b; n];
    loop {
        out.push(v.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            v[i] += 1;
            if v[i] <= b {
                break;
            }
            v[i] = -b;
        }
    }
}

fn inf_norm(a: &[i64]) -> i64 {
    a.iter().map(|x| x.abs()).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallInvariants {
    pub ball: i64,
    /// Size of the orbit closure of the box.
    pub support: usize,
    /// Number of orbits on the closure, i.e. the number of orbit sums.
    pub dim: usize,
    /// `(1/|G|) sum_g |Fix(g) ∩ S|`.
    pub burnside: usize,
    #[serde(skip)]
    pub orbits: Vec<Vec<Exponent>>,
}

impl BallInvariants {
    pub fn counts_agree(&self) -> bool {
        self.dim == self.burnside
    }

    /// The orbit-sum basis of the invariants supported on the closure.
    pub fn basis(&self, n: usize, p: u64) -> Vec<LaurentPoly> {
        self.orbits
            .iter()
            .map(|o| LaurentPoly::from_terms(n, p, o.iter().map(|e| (e.clone(), 1))).expect("exponent lengths"))
            .collect()
    }
}

pub fn default_norm_guard(b: i64) -> i64 {
    8 * b
}

/// Dimension of the invariants supported on the `G`-closure of the box of
/// radius `b`, computed twice: by orbit enumeration and by Burnside's lemma.
pub fn invariant_dim_in_ball(g: &MatGroup, p: u64, b: i64) -> Result<BallInvariants> {
    invariant_dim_in_ball_with_guard(g, p, b, default_norm_guard(b))
}

pub fn invariant_dim_in_ball_with_guard(g: &MatGroup, p: u64, b: i64, guard: i64) -> Result<BallInvariants> {
    check_prime(p)?;
    if b < 0 {
        return Err(Error::Precondition("ball radius must be non-negative".into()));
    }
    let elems = small_elements(g)?;
    let mut index: HashMap<Exponent, usize> = HashMap::new();
    let mut orbits: Vec<Vec<Exponent>> = Vec::new();
    for a in box_points(g.n(), b) {
        if index.contains_key(&a) {
            continue;
        }
        let set: BTreeSet<Exponent> = elems.iter().map(|m| apply(m, &a)).collect::<Result<_>>()?;
        if set.iter().any(|e| inf_norm(e) > guard) {
            return Err(Error::NormGuard { guard });
        }
        for e in &set {
            index.insert(e.clone(), orbits.len());
        }
        orbits.push(set.into_iter().collect());
    }
    let points: Vec<&Exponent> = orbits.iter().flatten().collect();
    let fixed_total = par::sum_range(0..elems.len(), |i| {
        points
            .iter()
            .filter(|a| apply(&elems[i], a).is_ok_and(|b| b == ***a))
            .count()
    });
    debug_assert_eq!(fixed_total % g.order(), 0);
    Ok(BallInvariants {
        ball: b,
        support: points.len(),
        dim: orbits.len(),
        burnside: fixed_total / g.order(),
        orbits,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G1Decomposition {
    pub ball: i64,
    /// `dim` of the `G_1`-invariants in the box, as a kernel dimension over `F_2`.
    pub g1_invariants: usize,
    pub gamma_invariants: usize,
    /// `dim` of `(xy + x^{-1}z) R^Γ` inside the box.
    pub twisted: usize,
    /// Rank of the union of both bases.
    pub combined_rank: usize,
    pub twisted_are_invariant: bool,
    pub holds: bool,
}

/// Checks `R^{G_1} = R^Γ ⊕ (xy + x^{-1}z) R^Γ` on the monomials of norm at most `b`.
pub fn check_g1_decomposition(p: u64, b: i64) -> Result<G1Decomposition> {
    if p != 2 {
        return Err(Error::Precondition(format!(
            "the G1 decomposition is checked in characteristic 2 only, got {p}"
        )));
    }
    if b < 0 {
        return Err(Error::Precondition("ball radius must be non-negative".into()));
    }
    let field = Fp::new(2);
    let g1 = MatGroup::generate(3, &[crate::corpus::g1()], 2)?;
    let gamma = MatGroup::generate(3, &crate::corpus::gamma_generators(), 4)?;

    let pts = box_points(3, b);
    let pos: HashMap<&Exponent, usize> = pts.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let len = pts.len();

    // G1-invariants: kernel of g1 - 1 on the span of the box.
    let g1m = small_matrix(&crate::corpus::g1())?;
    let mut cols = Vec::with_capacity(len);
    for a in &pts {
        let mut v = vec![0u32; len];
        v[pos[a]] = 1;
        let img = apply(&g1m, a)?;
        let j = pos[&img];
        v[j] = field.add(v[j], 1);
        cols.push(v);
    }
    let g1_invariants = len - rank_of_columns(field, len, &cols);

    let to_vec = |f: &LaurentPoly| -> Option<Vec<u32>> {
        let mut v = vec![0u32; len];
        for (e, &c) in f.terms() {
            v[*pos.get(e)?] = c;
        }
        Some(v)
    };

    let gamma_basis = invariant_dim_in_ball(&gamma, 2, b)?.basis(3, 2);
    let gamma_vecs: Vec<Vec<u32>> = gamma_basis
        .iter()
        .map(|f| to_vec(f).ok_or(Error::Precondition("box is not Γ-stable".into())))
        .collect::<Result<_>>()?;

    // By Newton polytopes, h f lies in the box iff supp f lies in t_box.
    let h = LaurentPoly::from_terms(3, 2, [(vec![1, 1, 0], 1), (vec![-1, 0, 1], 1)])?;
    let t_box: Vec<Exponent> = pts
        .iter()
        .filter(|a| a[0].abs() < b && a[1] < b && a[2] < b)
        .cloned()
        .collect();
    let mut seen: BTreeSet<Exponent> = BTreeSet::new();
    let mut twisted_vecs = Vec::new();
    let mut twisted_are_invariant = true;
    for a in &t_box {
        if seen.contains(a) {
            continue;
        }
        let s = orbit_sum(&gamma, 2, a)?;
        seen.extend(s.support().cloned());
        let hs = h.mul(&s)?;
        twisted_are_invariant &= hs.is_invariant(&g1)?;
        twisted_vecs.push(to_vec(&hs).ok_or(Error::Precondition("product left the box".into()))?);
    }
    let gamma_invariants = rank_of_columns(field, len, &gamma_vecs);
    let twisted = rank_of_columns(field, len, &twisted_vecs);
    let all: Vec<Vec<u32>> = gamma_vecs.into_iter().chain(twisted_vecs).collect();
    let combined_rank = rank_of_columns(field, len, &all);
    let holds = twisted_are_invariant
        && combined_rank == gamma_invariants + twisted
        && combined_rank == g1_invariants;
    Ok(G1Decomposition {
        ball: b,
        g1_invariants,
        gamma_invariants,
        twisted,
        combined_rank,
        twisted_are_invariant,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::matgroup::DEFAULT_MAX_ORDER;

    fn group(gens: Vec<IntMatrix>) -> MatGroup {
        MatGroup::generate(gens[0].rows(), &gens, DEFAULT_MAX_ORDER).unwrap()
    }

    fn x(n: usize, i: usize, k: i64) -> LaurentPoly {
        let mut e = vec![0; n];
        e[i] = k;
        LaurentPoly::monomial(n, 2, e, 1)
    }

    #[test]
    fn g1_acts_on_monomials() {
        let g1 = corpus::g1();
        assert_eq!(x(3, 0, 1).act(&g1).unwrap(), x(3, 0, -1));
        let xy = LaurentPoly::monomial(3, 2, vec![1, 1, 0], 1);
        assert_eq!(xy.act(&g1).unwrap(), LaurentPoly::monomial(3, 2, vec![-1, 0, 1], 1));
        let f = xy.add(&x(3, 2, 5));
        assert_eq!(f.act(&IntMatrix::identity(3)).unwrap(), f);
        assert!(f.act(&IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn coefficients_cancel() {
        let f = x(2, 0, 1);
        assert!(f.add(&f).is_zero());
        let f3 = LaurentPoly::monomial(1, 3, vec![1], 2);
        assert_eq!(f3.add(&f3), LaurentPoly::monomial(1, 3, vec![1], 1));
        assert!(f3.sub(&f3).is_zero());
    }

    #[test]
    fn orbit_sums() {
        let inv = group(vec![corpus::minus_identity(1)]);
        assert_eq!(
            orbit_sum(&inv, 2, &[1]).unwrap(),
            LaurentPoly::from_terms(1, 2, [(vec![1], 1), (vec![-1], 1)]).unwrap()
        );
        assert_eq!(orbit_sum(&inv, 2, &[0]).unwrap(), LaurentPoly::one(1, 2));
        let gamma = group(corpus::gamma_generators());
        assert_eq!(orbit_sum(&gamma, 2, &[0, 1, 0]).unwrap(), x(3, 1, 1).add(&x(3, 2, 1)));
    }

    #[test]
    fn invariance() {
        let g1 = group(vec![corpus::g1()]);
        let h = LaurentPoly::from_terms(3, 2, [(vec![1, 1, 0], 1), (vec![-1, 0, 1], 1)]).unwrap();
        assert!(h.is_invariant(&g1).unwrap());
        let inv = group(vec![corpus::minus_identity(1)]);
        assert!(!x(1, 0, 1).is_invariant(&inv).unwrap());
        assert!(LaurentPoly::one(1, 2).is_invariant(&inv).unwrap());
    }

    #[test]
    fn ball_counts() {
        let inv = group(vec![corpus::minus_identity(1)]);
        let r = invariant_dim_in_ball(&inv, 2, 2).unwrap();
        assert_eq!((r.dim, r.burnside), (3, 3));
        let g2 = group(vec![corpus::g2()]);
        let r = invariant_dim_in_ball(&g2, 2, 1).unwrap();
        assert_eq!((r.dim, r.burnside), (45, 45));
        let t = MatGroup::trivial(2);
        assert_eq!(invariant_dim_in_ball(&t, 3, 2).unwrap().dim, 25);
        // rotation by 60 degrees does not preserve the box
        let c6 = group(vec![corpus::rotation6()]);
        let r = invariant_dim_in_ball(&c6, 3, 1).unwrap();
        assert!(r.support > 9 && r.counts_agree());
        assert_eq!(
            invariant_dim_in_ball_with_guard(&c6, 3, 1, 1).unwrap_err(),
            Error::NormGuard { guard: 1 }
        );
    }

    #[test]
    fn g1_decomposition_small() {
        let r = check_g1_decomposition(2, 0).unwrap();
        assert_eq!((r.g1_invariants, r.gamma_invariants, r.twisted), (1, 1, 0));
        let r = check_g1_decomposition(2, 1).unwrap();
        assert_eq!((r.g1_invariants, r.gamma_invariants, r.twisted), (15, 12, 3));
        assert!(r.holds);
        assert!(check_g1_decomposition(3, 1).is_err());
    }
}
