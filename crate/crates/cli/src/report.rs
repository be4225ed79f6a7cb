use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Map, Value};
use superext::algebra::make_semidirect;
use superext::extring::ext_dims;
use superext::extring::theorems::{
    duality_quotient_check, ga1_classes_from, ga1_report, main_theorem_from, Ga1Variant, RelationVerdict,
};
use superext::gf::GaloisField;
use superext::invariants::verify_invariant_generators;
use superext::resolution::cached_resolution;
use superext::sympow::SymPowers;
use superext::CODE_VERSION;

use crate::{Failure, Format, Group};

/// A finished report in all three renderings.
pub struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    text: Vec<String>,
    passed: bool,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).expect("report serializes")),
            Format::Text => self.text.iter().map(|l| format!("{l}\n")).collect(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("write to memory");
                for r in &self.rows {
                    w.write_record(r).expect("write to memory");
                }
                String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
            }
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn invalid<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Invalid(e.to_string())
}

fn header(command: &str, g: &Group, descriptor: String) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("descriptor".into(), json!(descriptor));
    m.insert("code_version".into(), json!(CODE_VERSION));
    m.insert("field".into(), json!(g.field.spec()));
    m.insert("r".into(), json!(g.r));
    m.insert("s".into(), json!(g.s));
    m.insert("mu".into(), json!(g.mus.iter().map(|&c| g.field.format(c)).collect::<Vec<_>>()));
    m
}

fn relation_lines(text: &mut Vec<String>, rels: &[RelationVerdict]) {
    for r in rels {
        text.push(format!("  {} {}", if r.holds { "PASS" } else { "FAIL" }, r.name));
    }
}

fn family(g: &Group) -> Result<SymPowers, Failure> {
    SymPowers::over(&g.field, g.r, g.s, &g.mus).map_err(invalid)
}

pub fn cohomology(g: &Group, maxdeg: usize) -> Result<Report, Failure> {
    let alg = make_semidirect(&g.field, g.r, g.s, &g.mus).map_err(invalid)?;
    let p = g.field.characteristic() as usize;
    let exponent = p.pow((g.r + g.s - 1) as u32) * (p - 1);
    let need = maxdeg.max(exponent + 2);
    let t = Instant::now();
    let res = Arc::new(cached_resolution(&alg, need, g.cache_dir.as_deref()).map_err(compute)?);
    let resolution_ms = t.elapsed().as_millis();
    let t = Instant::now();
    let dims: Vec<[usize; 2]> = ext_dims(&res).into_iter().take(maxdeg + 1).collect();
    let poincare: Vec<usize> = dims.iter().map(|d| d[0] + d[1]).collect();
    let mut out = header("cohomology", g, alg.descriptor().canonical());
    out.insert("maxdeg".into(), json!(maxdeg));
    out.insert("dims".into(), json!(dims));
    out.insert("poincare".into(), json!(poincare));
    let mut text = vec![
        format!("cohomology of {}", alg.descriptor().canonical()),
        format!("poincare {poincare:?}"),
    ];
    let mut passed = true;
    if g.r + g.s == 1 {
        let variant = if g.r == 1 { Ga1Variant::FrobeniusKernel } else { Ga1Variant::Grouplike };
        let cl = ga1_classes_from(Arc::clone(&res), variant).map_err(compute)?;
        let pres = ga1_report(&cl, need).map_err(compute)?;
        let quot = duality_quotient_check(&cl).map_err(compute)?;
        passed &= pres.passed && quot.passed;
        text.push(format!("rank-one presentation: {}", if pres.passed { "pass" } else { "FAIL" }));
        relation_lines(&mut text, &pres.relations);
        text.push(format!(
            "quotient by (kappa, x + zeta^2): dims {:?}, pairing {}",
            quot.dims,
            if quot.passed { "perfect" } else { "FAIL" }
        ));
        out.insert("presentation".into(), json!(pres));
        out.insert("quotient".into(), json!(quot));
    }
    let main = main_theorem_from(Arc::clone(&res), g.r, g.s).map_err(compute)?;
    passed &= main.passed;
    text.push(format!("main relations (N = {}): {}", main.exponent, if main.passed { "pass" } else { "FAIL" }));
    relation_lines(&mut text, &main.relations);
    out.insert("main_theorem".into(), json!(main));
    out.insert("passed".into(), json!(passed));
    if g.timings {
        out.insert("timings".into(), json!({ "resolution_ms": resolution_ms, "checks_ms": t.elapsed().as_millis() }));
    }
    text.push(format!("passed: {passed}"));
    let rows = dims
        .iter()
        .enumerate()
        .map(|(n, d)| vec![n.to_string(), d[0].to_string(), d[1].to_string(), (d[0] + d[1]).to_string()])
        .collect();
    Ok(Report { json: Value::Object(out), header: vec!["n", "even", "odd", "total"], rows, text, passed })
}

pub fn sympowers(g: &Group, max_n: Option<usize>) -> Result<Report, Failure> {
    let fam = family(g)?;
    let max_n = max_n.unwrap_or(2 * fam.period());
    let t = Instant::now();
    let suite = fam.suite(max_n).map_err(compute)?;
    let mut out = header("sympowers", g, fam.kh().descriptor().canonical());
    out.insert("max_n".into(), json!(max_n));
    out.insert("suite".into(), json!(suite));
    out.insert("passed".into(), json!(suite.passed));
    if g.timings {
        out.insert("timings".into(), json!({ "checks_ms": t.elapsed().as_millis() }));
    }
    let flag = |b: Option<bool>| b.map_or(String::new(), |x| x.to_string());
    let rows: Vec<Vec<String>> = suite
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.dim.to_string(),
                r.projective.to_string(),
                r.predicted_projective.to_string(),
                flag(r.uniserial),
                flag(r.periodicity),
            ]
        })
        .collect();
    let mut text = vec![format!("symmetric powers over {}, period {}", fam.kh().descriptor().canonical(), suite.period)];
    for r in &suite.rows {
        text.push(format!(
            "  S^{}: projective {} (predicted {}){}{}",
            r.n,
            r.projective,
            r.predicted_projective,
            r.uniserial.map_or(String::new(), |u| format!(", uniserial {u}")),
            r.periodicity.map_or(String::new(), |u| format!(", periodicity {u}")),
        ));
    }
    text.push(format!("steinberg {:?}", suite.steinberg));
    text.push(format!("passed: {}", suite.passed));
    Ok(Report {
        json: Value::Object(out),
        header: vec!["n", "dim", "projective", "predicted_projective", "uniserial", "periodicity"],
        rows,
        text,
        passed: suite.passed,
    })
}

pub fn invariants(g: &Group, maxdeg: usize) -> Result<Report, Failure> {
    let fam = family(g)?;
    let t = Instant::now();
    let (span_ok, reports) = verify_invariant_generators(&fam, maxdeg);
    let dims: Vec<usize> = reports.iter().map(|r| r.dim).collect();
    let predicted: Vec<usize> = reports.iter().map(|r| r.predicted_dim).collect();
    let passed = span_ok && dims == predicted;
    let mut out = header("invariants", g, fam.kh().descriptor().canonical());
    out.insert("maxdeg".into(), json!(maxdeg));
    out.insert("dims".into(), json!(dims));
    out.insert("predicted_dims".into(), json!(predicted));
    out.insert("degrees".into(), json!(reports));
    out.insert("passed".into(), json!(passed));
    if g.timings {
        out.insert("timings".into(), json!({ "checks_ms": t.elapsed().as_millis() }));
    }
    let mut text = vec![format!("invariants of {}", fam.kh().descriptor().canonical()), format!("dims {dims:?}")];
    for r in &reports {
        text.push(format!("  n={}: {}", r.degree, r.basis_text.join(", ")));
    }
    text.push(format!("passed: {passed}"));
    let rows = reports
        .iter()
        .map(|r| vec![r.degree.to_string(), r.dim.to_string(), r.predicted_dim.to_string(), r.generators_span.to_string()])
        .collect();
    Ok(Report { json: Value::Object(out), header: vec!["n", "dim", "predicted_dim", "generators_span"], rows, text, passed })
}

pub fn rankvariety(g: &Group, i: usize, sample: &Arc<GaloisField>) -> Result<Report, Failure> {
    let fam = family(g)?;
    if i == 0 || i > g.r + g.s {
        return Err(Failure::Invalid(format!("--i must lie in 1..={}", g.r + g.s)));
    }
    let scan_family = if sample.as_ref() == g.field.as_ref() { fam } else { fam.base_change(sample).map_err(invalid)? };
    let t = Instant::now();
    let scan = scan_family.rank_variety_scan(i).map_err(compute)?;
    let k = scan_family.field();
    let show = |pt: &[Vec<u32>]| -> Vec<String> { pt.iter().map(|c| k.format(k.from_coeffs(c))).collect() };
    let nonfree: Vec<Vec<String>> = scan.points.iter().filter(|p| !p.1).map(|p| show(&p.0)).collect();
    let mut out = header("rankvariety", g, scan_family.kh().descriptor().canonical());
    out.insert("i".into(), json!(i));
    out.insert("sample_field".into(), json!(sample.spec()));
    out.insert("non_free".into(), json!(nonfree));
    out.insert("scan".into(), json!(scan));
    out.insert("passed".into(), json!(scan.agree));
    if g.timings {
        out.insert("timings".into(), json!({ "checks_ms": t.elapsed().as_millis() }));
    }
    let text = vec![
        format!("rank variety of S^{} over {}", k.characteristic().pow(i as u32) - 1, sample.spec()),
        format!("non-free points ({}): {}", nonfree.len(), nonfree.iter().map(|p| format!("({})", p.join(","))).collect::<Vec<_>>().join(" ")),
        format!("predicted rows rank {}, predicted non-free {}", scan.rows_rank, scan.predicted_nonfree),
        format!("passed: {}", scan.agree),
    ];
    let rows = scan
        .points
        .iter()
        .map(|(pt, free, pred)| vec![show(pt).join(" "), free.to_string(), pred.to_string()])
        .collect();
    Ok(Report { json: Value::Object(out), header: vec!["point", "free", "predicted_free"], rows, text, passed: scan.agree })
}
