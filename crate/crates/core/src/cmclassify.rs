//! Cohen-Macaulay verdicts for `F_p[Z^n]^G` with checkable certificates.
//!
//! Rules are tried in a fixed order and the first applicable one decides.
//! In audit mode every rule is evaluated and any disagreement between a
//! CM rule and a NotCM rule is reported as an error.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlat::{fixed_lattice, IntMatrix};
use crate::fpcohom::{MuValue, ResolutionOptions};
use crate::matgroup::{
    check_prime, classify_element, is_fixed_point_free, op_core,
    subgroup_structure, sylow, MatGroup,
};
use crate::mulaction::mu_action_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    CM,
    NotCM,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::CM => "CM",
            Status::NotCM => "NotCM",
            Status::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl Rule {
    pub const DECIDING: [Rule; 7] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::R7];

    pub fn description(self) -> &'static str {
        match self {
            Rule::R1 => "p does not divide |G|",
            Rule::R2 => "G is generated by reflections",
            Rule::R3 => "rank A/A^P <= 2",
            Rule::R4 => "the Sylow subgroup is CM by R1-R3",
            Rule::R5 => "P cyclic, O^p(G) != G, P not generated by a bireflection",
            Rule::R6 => "P acts fixed-point-freely: CM iff n <= mu + 1",
            Rule::R7 => "|P| = p and height I_R(P) > 2 [N:C]",
            Rule::R8 => "no rule applies",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    CoprimeOrder {
        order: usize,
        p: u64,
    },
    Reflections {
        reflections: Vec<IntMatrix>,
    },
    SylowCorank {
        sylow_generators: Vec<IntMatrix>,
        sylow_order: usize,
        fixed_rank: usize,
        corank: usize,
    },
    SylowReduction {
        sylow_generators: Vec<IntMatrix>,
        index: usize,
        index_mod_p: usize,
        sylow_rule: Rule,
        sylow_certificate: Box<Certificate>,
    },
    NonBireflectionGenerator {
        generator: IntMatrix,
        rank_drop: usize,
        sylow_order: usize,
        op_order: usize,
    },
    MuBound {
        n: usize,
        mu: MuValue,
    },
    HeightBound {
        sylow_generator: IntMatrix,
        height: usize,
        nc_index: usize,
    },
    None,
}

/// The result of evaluating one rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    /// `None` when the rule does not apply.
    pub status: Option<Status>,
    pub reason: String,
    #[serde(skip)]
    pub certificate: Certificate,
    pub notes: Vec<String>,
}

impl RuleOutcome {
    fn skip(rule: Rule, reason: impl Into<String>) -> Self {
        RuleOutcome {
            rule,
            status: None,
            reason: reason.into(),
            certificate: Certificate::None,
            notes: Vec::new(),
        }
    }

    fn fire(rule: Rule, status: Status, reason: impl Into<String>, certificate: Certificate) -> Self {
        RuleOutcome {
            rule,
            status: Some(status),
            reason: reason.into(),
            certificate,
            notes: Vec::new(),
        }
    }

    pub fn decides(&self) -> bool {
        matches!(self.status, Some(Status::CM | Status::NotCM))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inapplicable {
    pub rule: Rule,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    pub certificate: Certificate,
    pub notes: Vec<String>,
    /// Rules tried before the deciding one, with the reason each did not apply.
    pub inapplicable: Vec<Inapplicable>,
    /// Every rule's outcome, in audit mode.
    pub audit: Option<Vec<RuleOutcome>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub cohomology_depth: usize,
    pub resolution: ResolutionOptions,
    pub audit: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            cohomology_depth: crate::fpcohom::DEFAULT_MAX_DEPTH,
            resolution: ResolutionOptions::default(),
            audit: false,
        }
    }
}

/// Facts about the hypotheses of R5, independent of whether it fires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSylowFacts {
    pub sylow_order: usize,
    pub op_proper: bool,
    /// A generator of `P` that is a bireflection, if any.
    pub bireflection_generator: Option<IntMatrix>,
    /// A generator that is not, if any.
    pub other_generator: Option<(IntMatrix, usize)>,
    pub op_order: usize,
}

struct Context<'a> {
    g: &'a MatGroup,
    p: u64,
    opts: &'a ClassifyOptions,
    sylow: MatGroup,
}

impl<'a> Context<'a> {
    fn new(g: &'a MatGroup, p: u64, opts: &'a ClassifyOptions) -> Result<Self> {
        Ok(Context {
            sylow: sylow(g, p)?,
            g,
            p,
            opts,
        })
    }

    fn corank(&self, h: &MatGroup) -> Result<usize> {
        Ok(self.g.n() - fixed_lattice(self.g.n(), &h.generators())?.rank())
    }

    fn evaluate(&self, rule: Rule) -> Result<RuleOutcome> {
        match rule {
            Rule::R1 => Ok(r1(self.g, self.p)),
            Rule::R2 => r2(self.g),
            Rule::R3 => self.r3(),
            Rule::R4 => self.r4(),
            Rule::R5 => self.r5(),
            Rule::R6 => self.r6(),
            Rule::R7 => self.r7(),
            Rule::R8 => Ok(RuleOutcome::fire(Rule::R8, Status::Unknown, "no rule applies", Certificate::None)),
        }
    }

    fn sylow_generators(&self) -> Vec<IntMatrix> {
        self.sylow.generators()
    }

    fn r3(&self) -> Result<RuleOutcome> {
        let corank = self.corank(&self.sylow)?;
        let cert = Certificate::SylowCorank {
            sylow_generators: self.sylow_generators(),
            sylow_order: self.sylow.order(),
            fixed_rank: self.g.n() - corank,
            corank,
        };
        if corank <= 2 {
            Ok(RuleOutcome::fire(Rule::R3, Status::CM, format!("rank A/A^P = {corank}"), cert))
        } else {
            Ok(RuleOutcome::skip(Rule::R3, format!("rank A/A^P = {corank} > 2")))
        }
    }

    fn r4(&self) -> Result<RuleOutcome> {
        let index = self.g.order() / self.sylow.order();
        let p = self.p;
        let sub = Context::new(&self.sylow, p, self.opts)?;
        for rule in [Rule::R1, Rule::R2, Rule::R3] {
            let o = sub.evaluate(rule)?;
            if o.status == Some(Status::CM) {
                let cert = Certificate::SylowReduction {
                    sylow_generators: self.sylow_generators(),
                    index,
                    index_mod_p: index % p as usize,
                    sylow_rule: rule,
                    sylow_certificate: Box::new(o.certificate),
                };
                return Ok(RuleOutcome::fire(
                    Rule::R4,
                    Status::CM,
                    format!("P is CM by {rule}; [G:P] = {index} is a unit mod {p}"),
                    cert,
                ));
            }
        }
        Ok(RuleOutcome::skip(Rule::R4, "P is not CM by R1-R3"))
    }

    fn r5(&self) -> Result<RuleOutcome> {
        let Some(facts) = cyclic_sylow_facts_in(self.g, self.p, &self.sylow)? else {
            return Ok(RuleOutcome::skip(Rule::R5, "P is not cyclic"));
        };
        if !facts.op_proper {
            return Ok(RuleOutcome::skip(Rule::R5, "O^p(G) = G"));
        }
        if facts.bireflection_generator.is_some() {
            return Ok(RuleOutcome::skip(Rule::R5, "P is generated by a bireflection"));
        }
        let (generator, rank_drop) = facts.other_generator.expect("cyclic P has a generator");
        Ok(RuleOutcome::fire(
            Rule::R5,
            Status::NotCM,
            format!("P cyclic of order {}, generator has rank(g - I) = {rank_drop}", facts.sylow_order),
            Certificate::NonBireflectionGenerator {
                generator,
                rank_drop,
                sylow_order: facts.sylow_order,
                op_order: facts.op_order,
            },
        ))
    }

    fn r6(&self) -> Result<RuleOutcome> {
        if !is_fixed_point_free(&self.sylow) {
            return Ok(RuleOutcome::skip(Rule::R6, "P does not act fixed-point-freely"));
        }
        let depth = self.opts.cohomology_depth;
        let mu = mu_action_with(self.g, self.p, depth, &self.opts.resolution)?;
        let n = self.g.n();
        let cert = Certificate::MuBound { n, mu };
        let mut out = match (mu.value, mu.exact) {
            (None, _) => RuleOutcome::fire(Rule::R6, Status::CM, "mu = infinity", cert),
            (Some(m), true) if n <= m + 1 => {
                RuleOutcome::fire(Rule::R6, Status::CM, format!("n = {n} <= mu + 1 = {}", m + 1), cert)
            }
            (Some(m), true) => {
                RuleOutcome::fire(Rule::R6, Status::NotCM, format!("n = {n} > mu + 1 = {}", m + 1), cert)
            }
            // only mu >= m is known
            (Some(m), false) if n <= m + 1 => RuleOutcome::fire(
                Rule::R6,
                Status::CM,
                format!("n = {n} <= {} <= mu + 1", m + 1),
                cert,
            ),
            (Some(m), false) => {
                let mut o = RuleOutcome::fire(
                    Rule::R6,
                    Status::Unknown,
                    format!("mu >= {m} is not enough to compare with n = {n}"),
                    cert,
                );
                o.notes.push(format!("mu is only known to be at least {m} (cohomology depth {depth})"));
                o
            }
        };
        if !mu.exact {
            out.notes.push(format!("mu = {mu} is a lower bound"));
            out.notes.dedup();
        }
        Ok(out)
    }

    fn r7(&self) -> Result<RuleOutcome> {
        if self.sylow.order() as u64 != self.p {
            return Ok(RuleOutcome::skip(Rule::R7, format!("|P| = {} != p", self.sylow.order())));
        }
        let height = self.corank(&self.sylow)?;
        let nc_index = subgroup_structure(self.g, &self.sylow)?.nc_index;
        if height > 2 * nc_index {
            let generator = self.sylow_generators().into_iter().next().expect("P is nontrivial");
            Ok(RuleOutcome::fire(
                Rule::R7,
                Status::NotCM,
                format!("height I_R(P) = {height} > 2 [N:C] = {}", 2 * nc_index),
                Certificate::HeightBound {
                    sylow_generator: generator,
                    height,
                    nc_index,
                },
            ))
        } else {
            Ok(RuleOutcome::skip(
                Rule::R7,
                format!("height I_R(P) = {height} <= 2 [N:C] = {}", 2 * nc_index),
            ))
        }
    }
}

fn r1(g: &MatGroup, p: u64) -> RuleOutcome {
    if !(g.order() as u64).is_multiple_of(p) {
        RuleOutcome::fire(
            Rule::R1,
            Status::CM,
            format!("{p} does not divide |G| = {}", g.order()),
            Certificate::CoprimeOrder { order: g.order(), p },
        )
    } else {
        RuleOutcome::skip(Rule::R1, format!("{p} divides |G| = {}", g.order()))
    }
}

fn reflection_indices(g: &MatGroup) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..g.order() {
        if i != g.identity_index() && classify_element(g.element(i))?.is_reflection {
            out.push(i);
        }
    }
    Ok(out)
}

fn r2(g: &MatGroup) -> Result<RuleOutcome> {
    let refl = reflection_indices(g)?;
    if g.closure(&refl).len() == g.order() {
        let gens = greedy_subset(g, &refl);
        let reflections = gens.iter().map(|&i| g.element(i).clone()).collect();
        Ok(RuleOutcome::fire(
            Rule::R2,
            Status::CM,
            format!("{} reflections generate G", refl.len()),
            Certificate::Reflections { reflections },
        ))
    } else {
        Ok(RuleOutcome::skip(
            Rule::R2,
            format!("reflections generate a subgroup of order {}", g.closure(&refl).len()),
        ))
    }
}

fn greedy_subset(g: &MatGroup, candidates: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut size = 1;
    for &c in candidates {
        let mut trial = chosen.clone();
        trial.push(c);
        let s = g.closure(&trial).len();
        if s > size {
            chosen = trial;
            size = s;
        }
    }
    chosen
}

fn cyclic_sylow_facts_in(g: &MatGroup, p: u64, sy: &MatGroup) -> Result<Option<CyclicSylowFacts>> {
    if !sy.is_cyclic() {
        return Ok(None);
    }
    let op = op_core(g, p)?;
    let mut facts = CyclicSylowFacts {
        sylow_order: sy.order(),
        op_proper: op.order() != g.order(),
        bireflection_generator: None,
        other_generator: None,
        op_order: op.order(),
    };
    for i in 0..sy.order() {
        if sy.element_order(i) != sy.order() {
            continue;
        }
        let prof = classify_element(sy.element(i))?;
        if prof.is_bireflection {
            facts.bireflection_generator.get_or_insert_with(|| sy.element(i).clone());
        } else if facts.other_generator.is_none() {
            facts.other_generator = Some((sy.element(i).clone(), prof.rank_drop));
        }
    }
    Ok(Some(facts))
}

/// The data R5 looks at: `None` when `P` is not cyclic.
pub fn cyclic_sylow_facts(g: &MatGroup, p: u64) -> Result<Option<CyclicSylowFacts>> {
    check_prime(p)?;
    cyclic_sylow_facts_in(g, p, &sylow(g, p)?)
}

/// Evaluates every deciding rule without short-circuiting.
pub fn evaluate_all(g: &MatGroup, p: u64, opts: &ClassifyOptions) -> Result<Vec<RuleOutcome>> {
    check_prime(p)?;
    let ctx = Context::new(g, p, opts)?;
    Rule::DECIDING.iter().map(|&r| ctx.evaluate(r)).collect()
}

pub fn classify(g: &MatGroup, p: u64, opts: &ClassifyOptions) -> Result<Verdict> {
    check_prime(p)?;
    let ctx = Context::new(g, p, opts)?;
    let audit = if opts.audit {
        let all = Rule::DECIDING.iter().map(|&r| ctx.evaluate(r)).collect::<Result<Vec<_>>>()?;
        let cm: Vec<Rule> = all.iter().filter(|o| o.status == Some(Status::CM)).map(|o| o.rule).collect();
        let not: Vec<Rule> = all.iter().filter(|o| o.status == Some(Status::NotCM)).map(|o| o.rule).collect();
        if !cm.is_empty() && !not.is_empty() {
            return Err(Error::AuditConflict(format!("CM by {cm:?} but NotCM by {not:?}")));
        }
        Some(all)
    } else {
        None
    };

    let mut inapplicable = Vec::new();
    let mut notes = Vec::new();
    for &rule in &Rule::DECIDING {
        let o = match &audit {
            Some(all) => all[rule as usize].clone(),
            None => ctx.evaluate(rule)?,
        };
        notes.extend(o.notes.iter().cloned());
        if o.decides() {
            return Ok(Verdict {
                status: o.status.expect("decided"),
                rule,
                certificate: o.certificate,
                notes,
                inapplicable,
                audit,
            });
        }
        inapplicable.push(Inapplicable {
            rule,
            reason: o.reason,
        });
    }
    Ok(Verdict {
        status: Status::Unknown,
        rule: Rule::R8,
        certificate: Certificate::None,
        notes,
        inapplicable,
        audit,
    })
}

/// Re-runs the test cited by a verdict on its certificate.
pub fn verify_certificate(g: &MatGroup, p: u64, v: &Verdict, opts: &ClassifyOptions) -> Result<bool> {
    let n = g.n();
    let as_sylow = |gens: &[IntMatrix]| -> Result<Option<MatGroup>> {
        let h = MatGroup::generate(n, gens, g.order())?;
        Ok((h.is_subgroup_of(g) && h.order() == g.p_part(p)).then_some(h))
    };
    Ok(match (&v.certificate, v.status) {
        (Certificate::CoprimeOrder { order, p: q }, Status::CM) => {
            *order == g.order() && *q == p && order % p as usize != 0
        }
        (Certificate::Reflections { reflections }, Status::CM) => {
            let all_reflections = reflections
                .iter()
                .map(|r| Ok(g.contains(r) && classify_element(r)?.rank_drop == 1))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|b| b);
            all_reflections && (g.is_trivial() || MatGroup::generate(n, reflections, g.order())? == *g)
        }
        (Certificate::SylowCorank { sylow_generators, corank, .. }, Status::CM) => match as_sylow(sylow_generators)? {
            Some(h) => *corank <= 2 && n - fixed_lattice(n, &h.generators())?.rank() == *corank,
            None => false,
        },
        (
            Certificate::SylowReduction {
                sylow_generators,
                index,
                index_mod_p,
                sylow_rule,
                sylow_certificate,
            },
            Status::CM,
        ) => match as_sylow(sylow_generators)? {
            Some(h) => {
                let inner = Verdict {
                    status: Status::CM,
                    rule: *sylow_rule,
                    certificate: (**sylow_certificate).clone(),
                    notes: Vec::new(),
                    inapplicable: Vec::new(),
                    audit: None,
                };
                *index == g.order() / h.order()
                    && *index_mod_p == index % p as usize
                    && *index_mod_p != 0
                    && verify_certificate(&h, p, &inner, opts)?
            }
            None => false,
        },
        (Certificate::NonBireflectionGenerator { generator, rank_drop, .. }, Status::NotCM) => {
            let h = MatGroup::generate(n, std::slice::from_ref(generator), g.order())?;
            *rank_drop > 2
                && classify_element(generator)?.rank_drop == *rank_drop
                && h.is_subgroup_of(g)
                && h.order() == g.p_part(p)
                && op_core(g, p)?.order() != g.order()
        }
        (Certificate::MuBound { n: m, mu }, status) => {
            let again = mu_action_with(g, p, opts.cohomology_depth, &opts.resolution)?;
            let expected = match (again.value, again.exact) {
                (None, _) => Status::CM,
                (Some(k), _) if n <= k + 1 => Status::CM,
                (Some(_), true) => Status::NotCM,
                (Some(_), false) => Status::Unknown,
            };
            *m == n && again == *mu && expected == status
        }
        (Certificate::HeightBound { sylow_generator, height, nc_index }, Status::NotCM) => {
            match as_sylow(std::slice::from_ref(sylow_generator))? {
                Some(h) => {
                    h.order() as u64 == p
                        && n - fixed_lattice(n, &h.generators())?.rank() == *height
                        && subgroup_structure(g, &h)?.nc_index == *nc_index
                        && *height > 2 * nc_index
                }
                None => false,
            }
        }
        (Certificate::None, Status::Unknown) => true,
        _ => false,
    })
}
