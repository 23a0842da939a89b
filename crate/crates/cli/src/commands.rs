use std::fmt::Write as _;
use std::time::Instant;

use multinv::cmclassify::{self, ClassifyOptions};
use multinv::exactlat::{fixed_lattice, moved_lattice};
use multinv::fpcohom::{self, GroupTable, ResolutionOptions};
use multinv::laurent;
use multinv::matgroup::{
    classify_element, op_core, subgroup_classes, subgroup_structure, subgroups, sylow, MatGroup,
};
use multinv::mulaction::{self, height_ir};
use multinv::selftest;
use serde_json::{json, Value};

use crate::jobspec::JobSpec;
use crate::{CliError, Report};

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Input(format!("value does not fit the output format: {e}")))
}

fn micros(start: Instant) -> u64 {
    start.elapsed().as_micros() as u64
}

fn resolution_options(spec: &JobSpec) -> ResolutionOptions {
    ResolutionOptions {
        max_depth: spec.options.cohomology_depth,
        ..Default::default()
    }
}

fn prime_divisors(mut m: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d as u64);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m as u64);
    }
    out
}

pub fn classify(name: &str, spec: &JobSpec) -> Result<Report, CliError> {
    let start = Instant::now();
    let g = spec.group()?;
    let generated = micros(start);
    let opts = ClassifyOptions {
        cohomology_depth: spec.options.cohomology_depth,
        resolution: resolution_options(spec),
        audit: spec.options.audit,
    };
    let t = Instant::now();
    let verdict = cmclassify::classify(&g, spec.p, &opts)?;
    let checked = cmclassify::verify_certificate(&g, spec.p, &verdict, &opts)?;
    let classified = micros(t);

    let json = json!({
        "command": "classify",
        "input": { "name": name, "n": spec.n, "p": spec.p, "order": g.order() },
        "status": verdict.status,
        "rule": verdict.rule,
        "rule_description": verdict.rule.description(),
        "certificate": to_value(&verdict.certificate)?,
        "certificate_verified": checked,
        "notes": verdict.notes,
        "inapplicable": to_value(&verdict.inapplicable)?,
        "audit": to_value(&verdict.audit)?,
        "timings_us": { "generate": generated, "classify": classified, "total": micros(start) },
    });

    let mut human = String::new();
    writeln!(human, "group      {name} (n = {}, |G| = {}, p = {})", spec.n, g.order(), spec.p).ok();
    writeln!(human, "verdict    {} by {}: {}", verdict.status, verdict.rule, verdict.rule.description()).ok();
    writeln!(human, "verified   {checked}").ok();
    for i in &verdict.inapplicable {
        writeln!(human, "  {:<3} skipped: {}", i.rule.to_string(), i.reason).ok();
    }
    for n in &verdict.notes {
        writeln!(human, "note       {n}").ok();
    }
    if let Some(audit) = &verdict.audit {
        writeln!(human, "audit").ok();
        for o in audit {
            let s = o.status.map_or("n/a".to_string(), |s| s.to_string());
            writeln!(human, "  {:<3} {:<8} {}", o.rule.to_string(), s, o.reason).ok();
        }
    }
    Ok(Report { json, human, status: 0 })
}

pub fn analyze(name: &str, spec: &JobSpec) -> Result<Report, CliError> {
    let start = Instant::now();
    let g = spec.group()?;
    let n = g.n();
    let p = spec.p;

    let mut primes = prime_divisors(g.order());
    if !primes.contains(&p) {
        primes.push(p);
        primes.sort_unstable();
    }
    let mut sylows = Vec::new();
    for &q in &primes {
        let s = sylow(&g, q)?;
        let nc = if s.is_trivial() { 1 } else { subgroup_structure(&g, &s)?.nc_index };
        sylows.push(json!({
            "p": q,
            "order": s.order(),
            "cyclic": s.is_cyclic(),
            "generators": to_value(&s.generators())?,
            "fixed_rank": fixed_lattice(n, &s.generators())?.rank(),
            "nc_index": nc,
        }));
    }

    let mut elements = Vec::new();
    for m in g.elements() {
        let prof = classify_element(m)?;
        elements.push(json!({
            "matrix": to_value(m)?,
            "order": prof.order,
            "rank_drop": prof.rank_drop,
            "is_reflection": prof.is_reflection,
            "is_bireflection": prof.is_bireflection,
        }));
    }

    let subs = subgroups(&g)?;
    let classes = subgroup_classes(&g, &subs)?;
    let mut sub_rows = Vec::new();
    let mut keys = Vec::new();
    for (i, h) in subs.iter().enumerate() {
        let gens = h.generators();
        keys.push(g.indices_of(h)?);
        sub_rows.push(json!({
            "index": i,
            "order": h.order(),
            "class": classes[i],
            "generators": to_value(&gens)?,
            "fixed_rank": fixed_lattice(n, &gens)?.rank(),
            "moved_rank": moved_lattice(n, &gens)?.rank(),
            "height_ir": height_ir(n, &gens)?,
        }));
    }

    let report = mulaction::isotropy_subgroups(&g)?;
    let mut iso = Vec::new();
    for e in &report.entries {
        let idx = keys.iter().position(|k| *k == e.members).expect("isotropy groups are subgroups");
        iso.push(json!({
            "subgroup": idx,
            "order": e.subgroup.order(),
            "class": e.class,
            "witness": e.witness_i64().ok_or(multinv::Error::Overflow)?,
        }));
    }
    let mu = mulaction::mu_from_report(&report, p, spec.options.cohomology_depth, &resolution_options(spec))?;
    let op = op_core(&g, p)?;

    let json = json!({
        "command": "analyze",
        "group": {
            "name": name,
            "n": n,
            "order": g.order(),
            "abelian": g.is_abelian(),
            "cyclic": g.is_cyclic(),
            "generators": to_value(&g.generators())?,
            "fixed_rank": fixed_lattice(n, &g.generators())?.rank(),
            "height_ir": height_ir(n, &g.generators())?,
        },
        "p": p,
        "op_core_order": op.order(),
        "sylow": sylows,
        "elements": elements,
        "subgroups": sub_rows,
        "isotropy": { "complete": report.complete, "entries": iso },
        "mu": to_value(&mu)?,
        "timings_us": { "total": micros(start) },
    });

    let mut human = String::new();
    writeln!(human, "group      {name}: n = {n}, |G| = {}, p = {p}", g.order()).ok();
    writeln!(human, "height_ir(G) = {}, |O^p(G)| = {}, mu = {mu}", height_ir(n, &g.generators())?, op.order()).ok();
    writeln!(human, "sylow").ok();
    for s in &json["sylow"].as_array().cloned().unwrap_or_default() {
        writeln!(human, "  p = {:<3} |P| = {:<4} cyclic = {:<5} [N:C] = {}", s["p"].to_string(), s["order"].to_string(), s["cyclic"].to_string(), s["nc_index"]).ok();
    }
    writeln!(human, "subgroups  (index, order, class, rank A^H, rank [H,A], height)").ok();
    for s in &json["subgroups"].as_array().cloned().unwrap_or_default() {
        writeln!(
            human,
            "  {:>4} {:>5} {:>5} {:>4} {:>4} {:>4}",
            s["index"].to_string(),
            s["order"].to_string(),
            s["class"].to_string(),
            s["fixed_rank"].to_string(),
            s["moved_rank"].to_string(),
            s["height_ir"].to_string()
        )
        .ok();
    }
    writeln!(human, "isotropy   (subgroup, order, witness)").ok();
    for e in &json["isotropy"]["entries"].as_array().cloned().unwrap_or_default() {
        writeln!(human, "  {:>4} {:>5}  {}", e["subgroup"].to_string(), e["order"].to_string(), e["witness"]).ok();
    }
    Ok(Report { json, human, status: 0 })
}

pub fn cohomology(name: &str, spec: &JobSpec, depth: usize) -> Result<Report, CliError> {
    let start = Instant::now();
    let g = spec.group()?;
    let t = GroupTable::from(&g);
    let p = spec.p;
    let opts = ResolutionOptions::default();
    let dims = fpcohom::cohomology_dims(&t, p, depth, &opts)?;
    let res = fpcohom::resolution(&t, p, depth, &opts)?;
    let mu = fpcohom::mu_p_with(&t, p, spec.options.cohomology_depth, &opts)?;
    let formula = if g.p_part(p) as u64 == p { Some(fpcohom::mu_p_formula(&g, p)?) } else { None };

    let json = json!({
        "command": "cohomology",
        "group": { "name": name, "order": g.order() },
        "p": p,
        "depth": depth,
        "betti": dims,
        "resolution_ranks": res.ranks,
        "minimal": res.is_minimal(),
        "mu": to_value(&mu)?,
        "mu_formula": formula,
        "timings_us": { "total": micros(start) },
    });

    let mut human = String::new();
    writeln!(human, "group {name}, |G| = {}, p = {p}", g.order()).ok();
    writeln!(human, "  r   dim H^r   rank F_r").ok();
    for (r, d) in dims.iter().enumerate() {
        writeln!(human, "  {r:<3} {d:<9} {}", res.ranks[r]).ok();
    }
    writeln!(human, "mu_p = {mu}").ok();
    if let Some(f) = formula {
        writeln!(human, "2[N:C] - 1 = {f}").ok();
    }
    Ok(Report { json, human, status: 0 })
}

/// Boxes larger than this are refused rather than enumerated.
const MAX_BOX_POINTS: usize = 2_000_000;

pub fn invariants(name: &str, spec: &JobSpec) -> Result<Report, CliError> {
    let start = Instant::now();
    let g = spec.group()?;
    let b = spec.options.ball;
    let side = (2 * b + 1) as usize;
    let points = side.checked_pow(g.n() as u32).unwrap_or(usize::MAX);
    if points > MAX_BOX_POINTS {
        return Err(multinv::Error::BoundExceeded {
            what: "monomials in the box",
            bound: MAX_BOX_POINTS,
            got: points,
        }
        .into());
    }
    let r = laurent::invariant_dim_in_ball(&g, spec.p, b)?;
    let basis = r.basis(g.n(), spec.p);

    let json = json!({
        "command": "invariants",
        "group": { "name": name, "n": g.n(), "order": g.order() },
        "p": spec.p,
        "ball": b,
        "support": r.support,
        "dim": r.dim,
        "burnside": r.burnside,
        "agree": r.counts_agree(),
        "basis": to_value(&basis)?,
        "timings_us": { "total": micros(start) },
    });

    let mut human = String::new();
    writeln!(human, "group {name}, radius {b}: {} orbit sums, Burnside count {}", r.dim, r.burnside).ok();
    for f in &basis {
        writeln!(human, "  {f}").ok();
    }
    Ok(Report {
        json,
        human,
        status: if r.counts_agree() { 0 } else { 1 },
    })
}

pub fn selftest(criteria: &[u8]) -> Report {
    let ids: Vec<u8> = if criteria.is_empty() { (1..=9).collect() } else { criteria.to_vec() };
    let results: Vec<selftest::CriterionResult> = ids.iter().map(|&i| selftest::run(i)).collect();
    let passed = selftest::all_passed(&results);

    let mut human = String::new();
    for r in &results {
        writeln!(
            human,
            "{} {} {:<30} {:>9} us  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.elapsed_us,
            r.detail
        )
        .ok();
    }
    Report {
        json: json!({ "command": "selftest", "passed": passed, "criteria": results }),
        human,
        status: if passed { 0 } else { 1 },
    }
}

pub fn corpus() -> Result<Report, CliError> {
    let mut rows = Vec::new();
    let mut human = String::new();
    for e in multinv::corpus::corpus() {
        let g: MatGroup = e.group()?;
        let gens = to_value(&e.generators)?;
        writeln!(
            human,
            "{:<16} n = {} |G| = {:<4} p in {:<8} {}",
            e.name,
            e.n,
            g.order(),
            format!("{:?}", e.primes),
            e.description
        )
        .ok();
        rows.push(json!({
            "name": e.name,
            "description": e.description,
            "n": e.n,
            "order": g.order(),
            "primes": e.primes,
            "generators": gens,
        }));
    }
    Ok(Report {
        json: json!({ "command": "corpus", "builtins": rows }),
        human,
        status: 0,
    })
}
