//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superext::algebra::*;
use superext::extring::theorems::*;
use superext::extring::{ExtClass, ExtRing};
use superext::gf::{Fe, GaloisField};
use superext::invariants::verify_invariant_generators;
use superext::resolution::bar::{bar_report, DEFAULT_BUDGET};
use superext::resolution::minimal_resolution;
use superext::sympow::SymPowers;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f3() -> Arc<GaloisField> {
    GaloisField::prime(3).unwrap()
}

fn f5() -> Arc<GaloisField> {
    GaloisField::prime(5).unwrap()
}

fn f9() -> Arc<GaloisField> {
    GaloisField::new(3, 2).unwrap()
}

// p = 3 families with r + s ≤ 2; s = 2 needs F_9
fn sym_families() -> Vec<(String, SymPowers)> {
    let mut out = Vec::new();
    for (r, s) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let fam = if s == 2 {
            let k = f9();
            SymPowers::over(&k, r, s, &[Fe::ONE, k.generator()]).unwrap()
        } else {
            SymPowers::over(&f3(), r, s, &vec![Fe::ONE; s]).unwrap()
        };
        out.push((format!("({r},{s})"), fam));
    }
    out
}

fn c1_poincare() -> Check {
    let mut worst = Duration::ZERO;
    for (k, d) in [(f3(), 8), (f5(), 11)] {
        for v in [Ga1Variant::FrobeniusKernel, Ga1Variant::Grouplike] {
            let t = Instant::now();
            let rep = verify_ga1_presentation(&k, v, d).map_err(|e| e.to_string())?;
            let want: Vec<usize> = (1..=d + 1).collect();
            ensure(rep.poincare == want, || format!("p={} {v:?}: {:?}", k.characteristic(), rep.poincare))?;
            ensure(t.elapsed() < Duration::from_secs(60), || format!("p={} {v:?} took {:?}", k.characteristic(), t.elapsed()))?;
            worst = worst.max(t.elapsed());
        }
    }
    Ok(format!("dim H^n = n+1 for p=3 (n<=8), p=5 (n<=11), both variants; slowest {worst:.2?}"))
}

fn c2_relations() -> Check {
    let mut count = 0;
    for (k, d) in [(f3(), 8), (f5(), 11)] {
        for v in [Ga1Variant::FrobeniusKernel, Ga1Variant::Grouplike] {
            let rep = verify_ga1_presentation(&k, v, d).map_err(|e| e.to_string())?;
            for r in &rep.relations {
                ensure(r.holds, || format!("p={} {v:?}: {} fails, witness {:?}", k.characteristic(), r.name, r.witness))?;
            }
            count += rep.relations.len();
        }
    }
    Ok(format!("{count} relation checks hold for p in {{3,5}}, both variants"))
}

fn c3_duality() -> Check {
    let mut out = Vec::new();
    for (k, d) in [(f3(), 8), (f5(), 11)] {
        let cl = ga1_classes(&k, Ga1Variant::FrobeniusKernel, d).map_err(|e| e.to_string())?;
        let q = duality_quotient_check(&cl).map_err(|e| e.to_string())?;
        let p = k.characteristic() as usize;
        ensure(q.passed && q.total == 2 * p, || format!("p={p}: {q:?}"))?;
        out.push(format!("p={p} dims {:?}", q.dims));
    }
    Ok(format!("{}; pairings perfect, top spanned by zeta^p", out.join(", ")))
}

fn c4_main() -> Check {
    let k9 = f9();
    let w = k9.generator();
    let cases = [(f3(), 1, 0, vec![]), (f3(), 2, 0, vec![]), (f3(), 1, 1, vec![Fe::ONE]), (k9, 0, 2, vec![Fe::ONE, w])];
    let mut out = Vec::new();
    for (k, r, s, mus) in cases {
        let t = Instant::now();
        let rep = main_theorem_check(&k, r, s, &mus, 0, None).map_err(|e| e.to_string())?;
        for x in &rep.relations {
            ensure(x.holds, || format!("({r},{s}): {} fails, witness {:?}", x.name, x.witness))?;
        }
        ensure(t.elapsed() < Duration::from_secs(600), || format!("({r},{s}) took {:?}", t.elapsed()))?;
        out.push(format!("({r},{s}) N={} kernel {}", rep.exponent, rep.kernel_basis.len()));
    }
    Ok(out.join(", "))
}

fn c5_sympowers() -> Check {
    let mut out = Vec::new();
    for (name, fam) in sym_families() {
        let suite = fam.suite(2 * fam.period()).map_err(|e| e.to_string())?;
        if !suite.passed {
            let bad: Vec<usize> = suite
                .rows
                .iter()
                .filter(|r| r.projective != r.predicted_projective || r.uniserial == Some(false) || r.periodicity == Some(false))
                .map(|r| r.n)
                .collect();
            return Err(format!("{name}: degrees {bad:?}, steinberg {:?}", suite.steinberg));
        }
        out.push(format!("{name} n<={}", 2 * fam.period()));
    }
    Ok(format!("periodicity, projectivity, uniseriality, Steinberg: {}", out.join(", ")))
}

fn c6_rank_varieties() -> Check {
    let k9 = f9();
    let mut scans = 0;
    for (name, fam) in sym_families() {
        let mut samples = vec![fam.clone()];
        if fam.field().degree() == 1 {
            samples.push(fam.base_change(&k9).map_err(|e| e.to_string())?);
        }
        let n = fam.r() + fam.s();
        for sample in &samples {
            let q = sample.field().order() as usize;
            for i in 1..=n {
                let scan = sample.rank_variety_scan(i).map_err(|e| e.to_string())?;
                let expected = q.pow((n - i) as u32) - 1;
                ensure(scan.agree && scan.rows_rank == i && scan.observed_nonfree == expected, || {
                    format!(
                        "{name} over {} i={i}: agree {} rank {} non-free {} (want {expected})",
                        scan.field, scan.agree, scan.rows_rank, scan.observed_nonfree
                    )
                })?;
                scans += 1;
            }
        }
    }
    Ok(format!("{scans} exhaustive scans over F_3 and F_9 match the linear loci and codimensions"))
}

fn c7_invariants() -> Check {
    for (name, fam) in sym_families() {
        let q = fam.period();
        let (ok, reports) = verify_invariant_generators(&fam, 2 * q);
        for r in &reports {
            ensure(r.dim == r.degree / q + 1, || format!("{name} n={}: dim {}", r.degree, r.dim))?;
        }
        ensure(ok, || format!("{name}: generators do not span"))?;
    }
    Ok("dims floor(n/p^(r+s))+1 and monomial bases span for all n <= 2p^(r+s)".to_string())
}

fn c8_annihilators() -> Check {
    let mut out = Vec::new();
    for (r, s, mus) in [(2, 0, vec![]), (1, 1, vec![Fe::ONE])] {
        let fam = SymPowers::over(&f3(), r, s, &mus).map_err(|e| e.to_string())?;
        for i in 1..=r + s {
            let rep = annihilator_check_sympowers(&fam, i, 4).map_err(|e| e.to_string())?;
            ensure(rep.passed, || {
                format!("({r},{s}) i={i}: observed {:?} predicted {:?}", rep.observed_pattern, rep.predicted_pattern)
            })?;
            if i == r + s {
                ensure(rep.positive_ext_vanishes, || format!("({r},{s}): Ext of S^{} {:?}", rep.module_degree, rep.ext_dims))?;
            }
        }
        out.push(format!("({r},{s})"));
    }
    Ok(format!("annihilating lines match the rank-variety rows, free top degree has no Ext: {}", out.join(", ")))
}

fn constructed_algebras() -> Vec<(String, Arc<PresentedSuperalgebra>)> {
    let (k3, k5, k9) = (f3(), f5(), f9());
    let w = k9.generator();
    let mut v: Vec<(String, Arc<PresentedSuperalgebra>)> =
        vec![("exterior1".into(), make_exterior1(&k3)), ("exterior2".into(), make_exterior2(&k3))];
    for (r, s) in [(1, 0), (0, 1), (2, 0), (1, 1)] {
        v.push((format!("kH p3 ({r},{s})"), make_kh(&k3, r, s, false).unwrap()));
        v.push((format!("direct p3 ({r},{s})"), make_direct(&k3, r, s).unwrap()));
        v.push((format!("kG p3 ({r},{s})"), make_semidirect(&k3, r, s, &vec![Fe::ONE; s]).unwrap()));
    }
    v.push(("kH F9 (0,2)".into(), make_kh(&k9, 0, 2, false).unwrap()));
    v.push(("kG F9 (0,2)".into(), make_semidirect(&k9, 0, 2, &[Fe::ONE, w]).unwrap()));
    v.push(("kH p5 (1,0)".into(), make_kh(&k5, 1, 0, false).unwrap()));
    v.push(("kG p5 (1,0)".into(), make_semidirect(&k5, 1, 0, &[]).unwrap()));
    v.push(("grouplike p3".into(), make_semidirect_grouplike(&k3, 1, &[Fe::ONE]).unwrap()));
    v.push(("grouplike p5".into(), make_semidirect_grouplike(&k5, 1, &[Fe::ONE]).unwrap()));
    v
}

fn c9_bar() -> Check {
    let algs = constructed_algebras();
    for (name, a) in &algs {
        let bar = bar_report(a, 4, DEFAULT_BUDGET).map_err(|e| format!("{name}: {e}"))?;
        let res = minimal_resolution(a, 4).map_err(|e| format!("{name}: {e}"))?;
        ensure(bar.dims == res.ranks(), || format!("{name}: bar {:?} resolution {:?}", bar.dims, res.ranks()))?;
        for n in 0..=4 {
            let mut counts = BTreeMap::new();
            for g in res.generator_grades(n) {
                *counts.entry(g.clone()).or_insert(0usize) += 1;
            }
            ensure(counts == bar.by_grade[n], || format!("{name}: grades differ in degree {n}"))?;
        }
    }
    Ok(format!("{} algebras agree for n <= 4, grade by grade", algs.len()))
}

fn random_class(ring: &ExtRing, rng: &mut ChaCha8Rng, n: usize) -> ExtClass {
    let q = ring.field().order() as u16;
    let j = rng.gen_range(0..2u8);
    let basis = ring.basis(n, j);
    let terms: Vec<(Fe, &ExtClass)> = basis.iter().map(|b| (Fe(rng.gen_range(0..q)), b)).collect();
    ring.combination(&terms, n, j)
}

fn c10_structure() -> Check {
    let algs = constructed_algebras();
    for (name, a) in &algs {
        a.check_confluence().map_err(|e| format!("{name}: {e}"))?;
    }
    let mut hopf = 0;
    for (k, rmax) in [(f3(), 3), (f5(), 2)] {
        for r in 1..=rmax {
            for s in 0..=1 {
                let a = make_kh(&k, r, s, true).unwrap();
                a.check_hopf_laws().map_err(|e| format!("kH p={} ({r},{s}): {e}", k.characteristic()))?;
                hopf += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut products = 0;
    for (name, a) in algs.iter().filter(|(n, _)| n.starts_with("kG") || n.starts_with("grouplike")) {
        let ring = ExtRing::new(Arc::new(minimal_resolution(a, 6).unwrap()));
        for _ in 0..6 {
            let (na, nb, nc) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
            let (x, y, z) = (random_class(&ring, &mut rng, na), random_class(&ring, &mut rng, nb), random_class(&ring, &mut rng, nc));
            ensure(ring.graded_commute(&x, &y).map_err(|e| e.to_string())?, || format!("{name}: commutativity"))?;
            let left = ring.cup(&ring.cup(&x, &y).unwrap(), &z).unwrap();
            let right = ring.cup(&x, &ring.cup(&y, &z).unwrap()).unwrap();
            ensure(left == right, || format!("{name}: associativity in degrees {na},{nb},{nc}"))?;
            products += 1;
        }
        let again = minimal_resolution(a, 6).unwrap();
        ensure(again.same_as(ring.resolution()), || format!("{name}: resolutions differ between runs"))?;
        let mut grown = minimal_resolution(a, 3).unwrap();
        grown.extend_to(6);
        ensure(grown.same_as(&again), || format!("{name}: incremental extension differs"))?;
    }
    Ok(format!(
        "confluence on {} algebras, Hopf laws on {hopf} coproducts, {products} random triples commute and associate, resolutions deterministic",
        algs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("Poincaré series", c1_poincare),
        ("rank-one ring relations", c2_relations),
        ("duality quotient", c3_duality),
        ("main theorem relations", c4_main),
        ("symmetric powers", c5_sympowers),
        ("rank varieties", c6_rank_varieties),
        ("invariant rings", c7_invariants),
        ("annihilators", c8_annihilators),
        ("bar complex oracle", c9_bar),
        ("structural properties", c10_structure),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
