//! Acceptance run: ten criteria, one PASS/FAIL line each. Exits nonzero if any fails.
//!
//! Corpora are seeded, so a failing module is identified by the seed in its message.

mod oracle;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use gstab_core::complexes::{cech_power_limit, cech_start, fiber_variables, CechOutcome, KoszulKind};
use gstab_core::invariants::regularity::{by_betti, by_koszul};
use gstab_core::invariants::{depth_ext_oracle, depth_wrt, dm_check, regularity_with, LocalCohomology};
use gstab_core::slices::graded_slice;
use gstab_core::stability::{Outcome, Stability, Window};
use gstab_core::{
    free_resolution, Bidegree, Budget, ExtInt, Field, Ideal, Monomial, MonomialOrder, Poly, PolyRing, RingContext,
};
use gstab_corpus::{random_module, random_module_over, random_monomial_module, random_poly, rng, MonomialModule, Shape};
use rand::Rng;

type Outcome_ = Result<String, String>;

fn budget() -> Budget {
    Budget::new(50_000_000)
}

fn fin(v: ExtInt) -> Option<i64> {
    v.finite()
}

fn base_monomial(ring: &Arc<PolyRing>, base_exps: &[u16]) -> Poly {
    let mut e = base_exps.to_vec();
    e.resize(ring.nvars(), 0);
    Poly::term(ring, Monomial::from_exponents(&e), ring.field().one())
}

fn no_failures(vs: &[gstab_core::stability::Verdict], what: &str, seed: u64) -> Result<(), String> {
    match vs.iter().find(|v| v.failed() || v.outcome == Outcome::Inconclusive) {
        Some(v) => Err(format!("seed {seed}: {what}: {v}")),
        None => Ok(()),
    }
}

/// Shapes cycle through n in 1..=3 and m in 0..=2.
fn reg_shape(seed: u64) -> Shape {
    let n = 1 + (seed % 3) as usize;
    let m = ((seed / 3) % 3) as usize;
    Shape { field: Field::Rational, nbase: m, nfiber: n, max_degree: 3, max_rank: 2, max_relations: 4, max_terms: 3 }
}

fn c1_regularity() -> Outcome_ {
    let started = Instant::now();
    let count = 120;
    let mut seen = BTreeSet::new();
    for seed in 0..count {
        let m = random_module(&mut rng(seed), &reg_shape(seed));
        let b = budget();
        let res = free_resolution(&m, None, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let betti = by_betti(&res).map_err(|e| format!("seed {seed}: {e}"))?.value;
        let hom = by_koszul(&m, KoszulKind::Homological, &b).map_err(|e| format!("seed {seed}: {e}"))?.value;
        let coh = by_koszul(&m, KoszulKind::Cohomological, &b).map_err(|e| format!("seed {seed}: {e}"))?.value;
        if betti != hom || betti != coh {
            return Err(format!("seed {seed}: betti {betti}, koszul homology {hom}, koszul cohomology {coh}"));
        }
        seen.insert(betti.to_string());
    }
    let t = started.elapsed();
    if t > Duration::from_secs(600) {
        return Err(format!("{count} modules took {t:?}"));
    }
    Ok(format!("{count} modules agree, values {{{}}}, {t:.1?}", seen.into_iter().collect::<Vec<_>>().join(",")))
}

fn c2_depth_oracle() -> Outcome_ {
    let started = Instant::now();
    let count = 60;
    let mut values = BTreeSet::new();
    for seed in 0..count {
        let mut r = rng(1000 + seed);
        let shape = Shape::small((seed % 3) as usize, 1 + (seed % 2) as usize);
        let m = random_module(&mut r, &shape);
        let ring = m.ctx().ring().clone();
        let k = r.gen_range(1..=3);
        let gens: Vec<Poly> = (0..k)
            .map(|_| {
                let f = r.gen_range(0..=1);
                let b = if shape.nbase > 0 { r.gen_range(0..=1) } else { 0 };
                let d = if f + b == 0 { Bidegree::new(1, 0) } else { Bidegree::new(f, b) };
                random_poly(&mut r, &ring, d, 2)
            })
            .filter(|p| !p.is_zero())
            .collect();
        let b = budget();
        let koszul = depth_wrt(&gens, &m, &b).map_err(|e| format!("seed {seed}: {e}"))?.value;
        let ext = depth_ext_oracle(&gens, &m, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        if koszul != ext {
            return Err(format!("seed {seed}: koszul {koszul} vs ext {ext}"));
        }
        values.insert(koszul.to_string());
    }
    let t = started.elapsed();
    if t > Duration::from_secs(300) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{count} pairs agree, values {{{}}}, {t:.1?}", values.into_iter().collect::<Vec<_>>().join(",")))
}

/// Coefficients of `p` as a polynomial in the variables `t`.
fn content_by_hand(p: &Poly, t: &[usize]) -> Vec<Poly> {
    let ring = p.ring();
    let mut groups: std::collections::BTreeMap<Vec<u16>, Vec<(Monomial, gstab_core::Scalar)>> = Default::default();
    for (m, c) in p.terms() {
        let key: Vec<u16> = t.iter().map(|&i| m.exps()[i]).collect();
        let mut rest = m.exps().to_vec();
        for &i in t {
            rest[i] = 0;
        }
        groups.entry(key).or_default().push((Monomial::from_exponents(&rest), c.clone()));
    }
    groups.into_values().map(|ts| Poly::from_terms(ring, ts)).filter(|q| !q.is_zero()).collect()
}

fn products(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().flat_map(|x| b.iter().map(move |y| x.try_mul(y).expect("same ring"))).collect()
}

fn c3_dedekind_mertens() -> Outcome_ {
    let mut checked = 0;
    for (fi, field) in [Field::Rational, Field::prime(5).unwrap()].into_iter().enumerate() {
        let ring = PolyRing::new(field, &["a", "b"], &["t", "u"], MonomialOrder::DegRevLex).unwrap();
        let t = [2usize, 3];
        for seed in 0..60u64 {
            let mut r = rng(2000 + 100 * fi as u64 + seed);
            let rand_poly = |r: &mut rand_chacha::ChaCha8Rng| loop {
                let k = r.gen_range(1..=4);
                let terms = (0..k)
                    .map(|_| {
                        let e: Vec<u16> = (0..4).map(|_| r.gen_range(0..=2)).collect();
                        (Monomial::from_exponents(&e), field.from_i64(r.gen_range(1..=4) * if r.gen_bool(0.5) { 1 } else { -1 }))
                    })
                    .collect();
                let p = Poly::from_terms(&ring, terms);
                if !p.is_zero() {
                    return p;
                }
            };
            let p = rand_poly(&mut r);
            let q = rand_poly(&mut r);
            let b = budget();
            let rep = dm_check(&p, &q, &t, &b).map_err(|e| format!("{field} seed {seed}: {e}"))?;
            if !rep.holds() {
                return Err(format!("{field} seed {seed}: identity fails for P = {p}, Q = {q}"));
            }
            // Independent route: contents by hand, products of generator lists, ideal equality.
            let (cp, cq) = (content_by_hand(&p, &t), content_by_hand(&q, &t));
            let cpq = content_by_hand(&p.try_mul(&q).unwrap(), &t);
            let ell = cq.len();
            if rep.ell != ell {
                return Err(format!("{field} seed {seed}: l(Q) {} vs {ell}", rep.ell));
            }
            let mut power = vec![Poly::one(&ring)];
            for _ in 1..ell {
                power = products(&power, &cp);
            }
            let lhs = Ideal::new(&ring, products(&power, &cpq));
            let rhs = Ideal::new(&ring, products(&products(&power, &cp), &cq));
            if !lhs.equals(&rhs, &b).map_err(|e| e.to_string())? {
                return Err(format!("{field} seed {seed}: by-hand contents disagree for P = {p}, Q = {q}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs over Q and GF(5)"))
}

/// Base ideals for profile checks: `(y1)`, `(y1, y2)`, `(y1 y2)` or a random linear form.
fn base_ideal(r: &mut rand_chacha::ChaCha8Rng, ring: &Arc<PolyRing>) -> Vec<Poly> {
    let nb = ring.nbase();
    match (nb, r.gen_range(0..4)) {
        (1, _) | (_, 0) => vec![base_monomial(ring, &[1])],
        (_, 1) => vec![base_monomial(ring, &[1, 0]), base_monomial(ring, &[0, 1])],
        (_, 2) => vec![base_monomial(ring, &[1, 1])],
        _ => vec![random_poly(r, ring, Bidegree::new(0, 1), 2)].into_iter().filter(|p| !p.is_zero()).collect(),
    }
}

fn c4_depth_stabilization() -> Outcome_ {
    let mut finite = 0;
    let count = 40;
    for seed in 0..count {
        let mut r = rng(3000 + seed);
        let shape = Shape::small(1 + (seed % 2) as usize, 1 + ((seed / 2) % 2) as usize);
        let m = random_module(&mut r, &shape);
        let ideal = base_ideal(&mut r, m.ctx().ring());
        if ideal.is_empty() {
            continue;
        }
        let b = budget();
        let s = Stability::new(&m, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let p = s.depth_profile(&ideal, None, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        no_failures(&p.verdicts, "depth profile", seed)?;
        let (Some(d), Some(mu0)) = (p.d, p.mu0) else { continue };
        if !d.is_finite() {
            continue;
        }
        finite += 1;
        let base = m.ctx().base_context();
        let bring = base.ring().clone();
        let local: Vec<Poly> = ideal.iter().map(|g| g.restrict_to_base(&bring)).collect();
        for mu in mu0..=mu0 + 15 {
            let reported = p.values.iter().find(|(t, _)| *t == mu).map(|(_, v)| *v);
            let slice = graded_slice(&m, mu).map_err(|e| e.to_string())?.module;
            let by_ext = depth_ext_oracle(&local, &slice, &b).map_err(|e| format!("seed {seed} mu {mu}: {e}"))?;
            if reported != Some(d) || by_ext != d {
                return Err(format!("seed {seed}: d = {d}, mu0 = {mu0}, at {mu} profile {reported:?}, ext {by_ext}"));
            }
        }
    }
    if finite < 10 {
        return Err(format!("only {finite} modules with finite d"));
    }
    Ok(format!("{count} modules, {finite} with finite d, constant on [mu0, mu0+15]"))
}

fn monomial_corpus(offset: u64, count: u64) -> Vec<(u64, MonomialModule)> {
    (0..count)
        .map(|seed| {
            let nb = 1 + (seed % 2) as usize;
            let nf = 1 + ((seed / 2) % 2) as usize;
            (seed, random_monomial_module(&mut rng(offset + seed), Field::Rational, nb, nf, 2))
        })
        .collect()
}

fn c5_cd_stabilization() -> Outcome_ {
    let corpus = monomial_corpus(4000, 30);
    for (seed, mm) in &corpus {
        let m = &mm.module;
        let ring = m.ctx().ring().clone();
        let mut r = rng(4500 + seed);
        let exps: Vec<Vec<u16>> = match (mm.nbase, r.gen_range(0..3)) {
            (1, _) | (_, 0) => vec![vec![1, 0][..mm.nbase].to_vec()],
            (_, 1) => vec![vec![1, 0], vec![0, 1]],
            _ => vec![vec![1, 1]],
        };
        let ideal: Vec<Poly> = exps.iter().map(|e| base_monomial(&ring, e)).collect();
        let b = budget();
        let s = Stability::new(m, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let bound = s.cd_bound().and_then(fin).ok_or(format!("seed {seed}: no finite cd bound"))?;
        let lo = fin(s.a0).unwrap_or(0).min(bound) - 2;
        let window = Window::new(lo, bound + 15).map_err(|e| e.to_string())?;
        let p = s.cd_profile(&ideal, Some(window), &b).map_err(|e| format!("seed {seed}: {e}"))?;
        no_failures(&p.verdicts, "cd profile", *seed)?;
        let mut prev: Option<Option<i64>> = None;
        for (mu, v) in &p.values {
            let exact = v.exact().ok_or(format!("seed {seed}: cd at {mu} not exact"))?;
            let want = oracle::slice_cd(mm, &exps, *mu);
            if fin(exact) != want {
                return Err(format!("seed {seed}: cd at {mu} is {exact}, oracle {want:?}"));
            }
            if ExtInt::Finite(*mu) > s.a0 {
                if let Some(q) = prev {
                    if q > want {
                        return Err(format!("seed {seed}: cd decreases at {mu}"));
                    }
                }
                prev = Some(want);
            }
            if *mu > bound && Some(want) != Some(oracle::slice_cd(mm, &exps, bound)) {
                return Err(format!("seed {seed}: cd not constant from {bound}, changes at {mu}"));
            }
        }
    }
    Ok(format!("{} monomial modules, oracle-checked, constant from reg + n - depth through +15", corpus.len()))
}

fn c6_ass() -> Outcome_ {
    let corpus = monomial_corpus(5000, 36);
    let mut strict = 0;
    for (seed, mm) in &corpus {
        let b = budget();
        let s = Stability::new(&mm.module, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let prof = s.ass_profile(None, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        no_failures(&prof.verdicts, "ass profile", *seed)?;
        let a0 = s.a0;
        for (mu, set) in &prof.values {
            let want = oracle::slice_ass(mm, *mu);
            if *set != want {
                return Err(format!("seed {seed}: Ass(M_{mu}) {set:?}, oracle {want:?}"));
            }
        }
        for w in prof.values.windows(2) {
            let ((mu, a), (_, b_)) = (&w[0], &w[1]);
            if ExtInt::Finite(*mu) > a0 && !a.is_subset(b_) {
                return Err(format!("seed {seed}: Ass(M_{mu}) not inside the next slice"));
            }
            if a != b_ {
                strict += 1;
            }
        }
        let u = s.ass_union_check(None, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        no_failures(std::slice::from_ref(&u.verdict), "ass union", *seed)?;
        let union: BTreeSet<u64> = (u.window.lo..=u.window.hi).flat_map(|mu| oracle::slice_ass(mm, mu)).collect();
        let contracted = oracle::contracted_ass(mm);
        if union != contracted || u.slices != union || u.contracted != contracted {
            return Err(format!("seed {seed}: union {union:?} contracted {contracted:?}, reported {:?} {:?}", u.slices, u.contracted));
        }
    }
    Ok(format!("{} multigraded modules, slice sets oracle-checked, {strict} strict growth steps", corpus.len()))
}

fn c7_cech() -> Outcome_ {
    let started = Instant::now();
    let mut cells = 0;
    let mut modules = 0;
    for seed in 0..24u64 {
        let n = 1 + (seed % 3) as usize;
        let shape = Shape { field: Field::prime(32003).unwrap(), nbase: 0, nfiber: n, max_degree: 3, max_rank: 2, max_relations: 3, max_terms: 3 };
        let m = random_module(&mut rng(6000 + seed), &shape);
        let b = budget();
        let lc = LocalCohomology::new(&m, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let reg = regularity_with(&m, lc.resolution(), &b).map_err(|e| format!("seed {seed}: {e}"))?.value;
        let Some(reg) = fin(reg) else { continue };
        modules += 1;
        let ni = n as i64;
        let x = fiber_variables(m.ctx().ring());
        for i in 0..=n {
            for g in -reg.abs() - 2 * ni - 10..=reg + ni + 10 {
                let dual = lc.dim(i, g).map_err(|e| e.to_string())?;
                let start = cech_start(reg, g, i);
                match cech_power_limit(&x, &m, i, g, start, start + 12, &b).map_err(|e| format!("seed {seed}: {e}"))? {
                    CechOutcome::Stabilized { dim, .. } if dim == dual => cells += 1,
                    other => return Err(format!("seed {seed}: H^{i}_{g} dual {dual}, cech {other:?}")),
                }
            }
        }
    }
    Ok(format!("{modules} modules, {cells} (i, gamma) cells agree, {:.1?}", started.elapsed()))
}

fn c8_tameness() -> Outcome_ {
    let quotients: [&[&str]; 4] = [&[], &["y1^2"], &["y1*y2"], &["y1^2", "y2^3"]];
    let mut scans = 0;
    let mut modules = 0;
    for seed in 0..12u64 {
        let nf = 1 + (seed % 2) as usize;
        let ring = gstab_corpus::ring(Field::Rational, 2, nf);
        let rels: Vec<Poly> = quotients[(seed % 4) as usize].iter().map(|s| Poly::parse(&ring, s).unwrap()).collect();
        let ctx = RingContext::new(ring, rels).map_err(|e| e.to_string())?;
        let shape = Shape { field: Field::Rational, nbase: 2, nfiber: nf, max_degree: 2, max_rank: 2, max_relations: 3, max_terms: 2 };
        let m = random_module_over(&mut rng(7000 + seed), &ctx, &shape);
        let b = budget();
        let s = Stability::new(&m, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let reg = fin(s.reg).unwrap_or(0);
        let window = Window::new(-40, reg + 5).map_err(|e| e.to_string())?;
        for i in 0..=shape.nfiber {
            let scan = s.tameness_scan(i, Some(window), &b).map_err(|e| format!("seed {seed}: {e}"))?;
            if !scan.verdict.passed() || scan.gamma0.is_none() {
                return Err(format!("seed {seed} i {i}: {}", scan.verdict));
            }
            for (g, nz) in &scan.pattern {
                let zero = s.local_cohomology().is_zero(i, *g, &b).map_err(|e| e.to_string())?;
                if zero == *nz {
                    return Err(format!("seed {seed}: H^{i} at {g}: scan says nonzero={nz}, slice homology says zero={zero}"));
                }
            }
            scans += 1;
        }
        modules += 1;
    }
    if modules < 10 {
        return Err(format!("only {modules} modules"));
    }
    Ok(format!("{modules} modules over dim-2 bases, {scans} patterns constant below a found gamma0"))
}

fn c9_nonvanishing_and_length() -> Outcome_ {
    let corpus = monomial_corpus(8000, 30);
    let mut profiles = 0;
    for (seed, mm) in &corpus {
        let b = budget();
        let s = Stability::new(&mm.module, &b).map_err(|e| format!("seed {seed}: {e}"))?;
        let vs = s.nonvanishing(None);
        no_failures(&vs, "nonvanishing", *seed)?;
        let w = s.default_window();
        for mu in w.degrees() {
            if s.is_nonzero_at(mu) != oracle::slice_nonzero(mm, mu) {
                return Err(format!("seed {seed}: nonvanishing at {mu} disagrees with the oracle"));
            }
        }
        for p in 0..1u64 << mm.nbase {
            let prof = s.length_profile(p, None, &b).map_err(|e| format!("seed {seed} prime {p:b}: {e}"))?;
            no_failures(std::slice::from_ref(&prof.verdict), "length", *seed)?;
            let mut prev = None;
            for (mu, len) in &prof.values {
                let want = oracle::slice_length(mm, p, *mu);
                if *len != want {
                    return Err(format!("seed {seed} prime {p:b}: length at {mu} is {len}, oracle {want}"));
                }
                if ExtInt::Finite(*mu) > prof.j {
                    if prev.is_some_and(|q| q > want) {
                        return Err(format!("seed {seed} prime {p:b}: length drops at {mu}"));
                    }
                    prev = Some(want);
                }
            }
            profiles += 1;
        }
    }
    Ok(format!("{} modules, {profiles} length profiles oracle-checked", corpus.len()))
}

fn c10_performance() -> Outcome_ {
    let shape = Shape { field: Field::Rational, nbase: 2, nfiber: 3, max_degree: 3, max_rank: 10, max_relations: 10, max_terms: 3 };
    let mut r = rng(9000);
    let ring = gstab_corpus::ring(Field::Rational, 2, 3);
    let ctx = RingContext::polynomial(ring);
    // Force the full size: ten generators and ten relations.
    let m = loop {
        let m = random_module_over(&mut r, &ctx, &shape);
        if m.rank() == 10 && m.relations().len() >= 8 {
            break m;
        }
    };
    let started = Instant::now();
    let b = Budget::unlimited();
    let res = free_resolution(&m, None, &b).map_err(|e| e.to_string())?;
    let reg = regularity_with(&m, &res, &b).map_err(|e| e.to_string())?.value;
    let t1 = started.elapsed();
    if t1 > Duration::from_secs(60) {
        return Err(format!("resolution and reg took {t1:?}"));
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("yx.gsmod");
    std::fs::write(&path, "field Q\nbasevars y\nfibervars x\ngens (0|0)\nrels\n[y*x] (1|1)\nideal I = y\n").map_err(|e| e.to_string())?;
    let args: Vec<String> = ["profile", "--ideal", "I", "--prime", "y", "--no-cache", path.to_str().unwrap()].iter().map(|s| s.to_string()).collect();
    let started = Instant::now();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = gstab::run(&args, &mut out, &mut err);
    let t2 = started.elapsed();
    if code != 0 {
        return Err(format!("profile exited {code}: {}", String::from_utf8_lossy(&err)));
    }
    if t2 > Duration::from_secs(5) {
        return Err(format!("profile took {t2:?}"));
    }
    Ok(format!("rank 10, {} relations: reg {reg} in {t1:.2?}; profile in {t2:.2?}", m.relations().len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome_); 10] = [
        (1, "regularity methods agree", c1_regularity),
        (2, "depth by Koszul equals depth by Ext", c2_depth_oracle),
        (3, "content identity", c3_dedekind_mertens),
        (4, "depth of slices stabilizes", c4_depth_stabilization),
        (5, "cd of slices stabilizes", c5_cd_stabilization),
        (6, "associated primes of slices", c6_ass),
        (7, "local cohomology by two routes", c7_cech),
        (8, "tameness over two-dimensional bases", c8_tameness),
        (9, "nonvanishing and length monotonicity", c9_nonvanishing_and_length),
        (10, "performance floor", c10_performance),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, f) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = started.elapsed();
        match result {
            Ok(detail) => println!("PASS  criterion {id:>2} {name}: {detail} [{t:.1?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {id:>2} {name}: {why} [{t:.1?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
