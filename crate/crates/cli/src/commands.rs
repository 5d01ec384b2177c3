//! Argument handling and the subcommands.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gstab_core::complexes::{cech_power_limit, cech_start, fiber_variables};
use gstab_core::invariants::{
    ass_primes, cd_wrt, depth_ext_oracle, depth_wrt, dm_check, generic_coordinates, regularity_with, CoordinateChoice,
    LocalCohomology,
};
use gstab_core::stability::{Check, Stability, TameStatement, Window};
use gstab_core::{AlgebraError, Budget, ExtInt, Ideal, Module, Poly};
use serde_json::{json, Value};

use crate::cache::{sha256_hex, ResolutionCache};
use crate::format::{parse_module_file, print_module_file, ModuleFile};
use crate::report::{ext, opt_ext, Report, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_TRIPWIRE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "gstab", version, about = "Asymptotic stability of graded slices of bigraded modules")]
pub struct Cli {
    /// Step limit for Groebner, resolution and scan loops.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for a random change of fiber coordinates (reg, betti, lc, tame).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Ignore GSTAB_CACHE_DIR.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regularity by every available method.
    Reg { file: PathBuf },
    /// Graded Betti numbers of the minimal resolution.
    Betti { file: PathBuf },
    /// depth_I(M) by Koszul cohomology and by Ext.
    Depth {
        file: PathBuf,
        /// Ideal block name or comma-separated generators; defaults to the fiber variables.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// cd_I(M), exact or as an interval.
    Cd {
        file: PathBuf,
        /// Ideal block name or comma-separated generators; defaults to the fiber variables.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Associated primes of a multigraded module.
    Ass { file: PathBuf },
    /// Table of H^i_{S+}(M)_gamma.
    Lc {
        file: PathBuf,
        /// Only this cohomological index; all of 0..=n otherwise.
        #[arg(long = "i")]
        i: Option<usize>,
        /// Degree range "A..B"; a default from the thresholds otherwise.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Cross-check each dimension against the Cech power limit (field base).
        #[arg(long)]
        cech: bool,
    },
    /// Slice profiles with verdicts.
    Profile {
        file: PathBuf,
        /// Ideal of the base: block name or comma-separated generators.
        #[arg(long)]
        ideal: Option<String>,
        /// Degree range "A..B"; a default from the thresholds otherwise.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Comma-separated checks: depth, cd, ass-monotone, ass-union, nonvanishing, length.
        #[arg(long)]
        check: Option<String>,
        /// Monomial prime of the base for the length profile, e.g. "y1,y2" or "0".
        #[arg(long)]
        prime: Option<String>,
    },
    /// Vanishing pattern of H^i_{S+}(M)_gamma and the point below which it is constant.
    Tame {
        file: PathBuf,
        /// Only this cohomological index; all of 0..=n otherwise.
        #[arg(long = "i")]
        i: Option<usize>,
        /// Degree range "A..B"; a default from the thresholds otherwise.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Also check the dimension statements past their thresholds.
        #[arg(long)]
        implications: bool,
    },
    /// Every threshold of the stability statements.
    Thresholds {
        file: PathBuf,
        /// Ideal of the base: block name or comma-separated generators.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// c(P)^(l-1) c(PQ) = c(P)^l c(Q) for the content in the given variables.
    Dmcheck {
        file: PathBuf,
        /// First polynomial.
        #[arg(long)]
        p: String,
        /// Second polynomial.
        #[arg(long)]
        q: String,
        /// Content variables; defaults to the fiber variables.
        #[arg(long)]
        vars: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
    Tripwire(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Tripwire(_) => EXIT_TRIPWIRE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(s) | CliError::Budget(s) | CliError::Tripwire(s) => s,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> CliError {
        match e {
            AlgebraError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            AlgebraError::Tripwire(_) => CliError::Tripwire(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `A..B`.
pub fn parse_window(s: &str) -> CliResult<Window> {
    let (a, b) = s.split_once("..").ok_or_else(|| CliError::Input(format!("window {s:?} is not of the form A..B")))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| CliError::Input(format!("bad window bound {t:?}")));
    Window::new(num(a)?, num(b)?).map_err(CliError::from)
}

struct Ctx {
    file: ModuleFile,
    module: Module,
    budget: Budget,
    cache: ResolutionCache,
    report: Report,
}

impl Ctx {
    fn ideal(&self, given: Option<&str>) -> CliResult<(String, Vec<Poly>)> {
        let Some(given) = given else {
            return Ok(("S+".into(), fiber_variables(self.file.ring())));
        };
        if let Some(i) = self.file.ideal(given.trim()) {
            return Ok((i.name.clone(), i.gens.clone()));
        }
        let gens = given
            .split(',')
            .map(|p| Poly::parse(self.file.ring(), p.trim()).map_err(|e| CliError::Input(format!("ideal {given:?}: {e}"))))
            .collect::<CliResult<Vec<_>>>()?;
        Ok((given.to_string(), gens))
    }

    /// Applies the random coordinate change requested by `--seed`.
    fn coordinates(&mut self, seed: Option<u64>) -> CliResult<()> {
        if let Some(seed) = seed {
            let g = generic_coordinates(&self.module, CoordinateChoice::Random { seed }, 1, "none", |_| Ok(true), &self.budget)?;
            self.report.scope.push(format!("fiber coordinates changed by a random matrix, seed {}", g.seed.unwrap_or(seed)));
            self.module = g.module;
        }
        Ok(())
    }

    fn local_cohomology(&mut self) -> CliResult<LocalCohomology> {
        let res = self.cache.resolve(&self.module, None, &self.budget)?;
        Ok(LocalCohomology::from_resolution(&self.module, res)?)
    }
}

fn strs(ps: &[Poly]) -> Value {
    json!(ps.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

fn mask_names(ctx: &Ctx, masks: &BTreeSet<u64>) -> Value {
    let names = &ctx.file.base_vars;
    let one = |m: u64| -> String {
        let v: Vec<&str> = (0..names.len()).filter(|&i| m >> i & 1 == 1).map(|i| names[i].as_str()).collect();
        if v.is_empty() {
            "(0)".into()
        } else {
            format!("({})", v.join(","))
        }
    };
    json!(masks.iter().map(|&m| one(m)).collect::<Vec<_>>())
}

fn cmd_reg(ctx: &mut Ctx) -> CliResult<()> {
    let res = ctx.cache.resolve(&ctx.module, None, &ctx.budget)?;
    let r = regularity_with(&ctx.module, &res, &ctx.budget)?;
    ctx.report.set("reg", ext(r.value));
    let mut t = Table::new("regularity", &["method", "reg", "index", "degree"]);
    let mut methods = Vec::new();
    for m in &r.methods {
        let (i, d) = m.witness.map_or((Value::Null, Value::Null), |(i, d)| (json!(i), json!(d)));
        t.row(&[json!(m.method.tag()), ext(m.value), i.clone(), d.clone()]);
        methods.push(json!({ "method": m.method.tag(), "reg": ext(m.value), "witness_index": i, "witness_degree": d }));
    }
    ctx.report.set("methods", Value::from(methods));
    ctx.report.tables.push(t);
    Ok(())
}

fn cmd_betti(ctx: &mut Ctx) -> CliResult<()> {
    let res = ctx.cache.resolve(&ctx.module, None, &ctx.budget)?;
    let table = res.betti_table()?;
    let mut t = Table::new("betti", &["i", "fiber", "base", "rank"]);
    let mut rows = Vec::new();
    for (&(i, d), &r) in &table.entries {
        t.row(&[json!(i), json!(d.fiber), json!(d.base), json!(r)]);
        rows.push(json!({ "i": i, "fiber": d.fiber, "base": d.base, "rank": r }));
    }
    ctx.report.set("betti", Value::from(rows));
    ctx.report.set("complete", json!(table.complete));
    ctx.report.set("projective_dimension", json!(res.length()));
    ctx.report.tables.push(t);
    Ok(())
}

fn cmd_depth(ctx: &mut Ctx, ideal: Option<&str>) -> CliResult<()> {
    let (name, gens) = ctx.ideal(ideal)?;
    let koszul = depth_wrt(&gens, &ctx.module, &ctx.budget)?.value;
    let by_ext = depth_ext_oracle(&gens, &ctx.module, &ctx.budget)?;
    if koszul != by_ext {
        return Err(CliError::Tripwire(format!("depth by Koszul cohomology {koszul} differs from depth by Ext {by_ext}")));
    }
    ctx.report.set("ideal", json!({ "name": name, "gens": strs(&gens) }));
    ctx.report.set("depth", ext(koszul));
    ctx.report.set("depth_ext", ext(by_ext));
    let mut t = Table::new("depth", &["method", "depth"]);
    t.row(&[json!("koszul"), ext(koszul)]);
    t.row(&[json!("ext"), ext(by_ext)]);
    ctx.report.tables.push(t);
    Ok(())
}

fn cmd_cd(ctx: &mut Ctx, ideal: Option<&str>) -> CliResult<()> {
    let (name, gens) = ctx.ideal(ideal)?;
    let r = cd_wrt(&gens, &ctx.module, &ctx.budget)?;
    ctx.report.set("ideal", json!({ "name": name, "gens": strs(&gens) }));
    ctx.report.set("depth", ext(r.depth));
    ctx.report.set("cd_lo", ext(r.cd.lo()));
    ctx.report.set("cd_hi", ext(r.cd.hi()));
    ctx.report.set("exact", json!(r.cd.is_exact()));
    if let Some(v) = r.cd.exact() {
        ctx.report.set("cd", ext(v));
    } else {
        ctx.report.scope.push("cd is bounded by depth and by generator count and dimension only".into());
    }
    let primes: Vec<Value> = r.minimal_primes.iter().map(|(p, v)| json!({ "prime": p.to_string(), "cd": ext(*v) })).collect();
    ctx.report.set("minimal_primes", Value::from(primes));
    let mut t = Table::new("cd", &["depth", "cd_lo", "cd_hi"]);
    t.row(&[ext(r.depth), ext(r.cd.lo()), ext(r.cd.hi())]);
    ctx.report.tables.push(t);
    Ok(())
}

fn cmd_ass(ctx: &mut Ctx) -> CliResult<()> {
    let a = ass_primes(&ctx.module, &ctx.budget)?;
    let mut t = Table::new("ass", &["prime", "dim"]);
    let mut rows = Vec::new();
    for p in &a.primes {
        t.row(&[json!(p.to_string()), json!(p.dim())]);
        rows.push(json!({ "prime": p.to_string(), "dim": p.dim() }));
    }
    ctx.report.set("ass", Value::from(rows));
    ctx.report.set("complete", json!(a.complete));
    ctx.report.tables.push(t);
    Ok(())
}

fn default_window(reg: ExtInt, n: usize) -> Window {
    let reg = reg.finite().unwrap_or(0);
    let n = n as i64;
    Window { lo: -reg.abs() - 2 * n - 10, hi: reg + n + 10 }
}

fn cmd_lc(ctx: &mut Ctx, i: Option<usize>, window: Option<&str>, cech: bool) -> CliResult<()> {
    let lc = ctx.local_cohomology()?;
    let reg = regularity_with(&ctx.module, lc.resolution(), &ctx.budget)?.value;
    let n = ctx.module.ctx().nfiber();
    let w = match window {
        Some(s) => parse_window(s)?,
        None => default_window(reg, n),
    };
    let field_base = ctx.module.ctx().is_field_base();
    if cech && !field_base {
        return Err(CliError::Input("--cech needs a field base".into()));
    }
    let tag = if field_base { "dim_Hi_slice" } else { "krull_dim_Hi_slice" };
    let indices: Vec<usize> = match i {
        Some(i) if i > n => return Err(CliError::Input(format!("--i {i} exceeds the number of fiber variables {n}"))),
        Some(i) => vec![i],
        None => (0..=n).collect(),
    };
    let x = fiber_variables(ctx.module.ctx().ring());
    let mut t = Table::new("local_cohomology", &["i", "gamma", tag]);
    let mut rows = Vec::new();
    let mut unsettled = 0;
    for &i in &indices {
        for g in w.degrees() {
            ctx.budget.charge(1)?;
            let value = if field_base {
                let d = lc.dim(i, g)?;
                if cech && n > 0 {
                    let start = cech_start(reg.finite().unwrap_or(0), g, i);
                    match cech_power_limit(&x, &ctx.module, i, g, start, start + 12, &ctx.budget)?.dim() {
                        Some(c) if c != d => {
                            return Err(CliError::Tripwire(format!("H^{i}_{g}: dual slices give {d}, Cech limit gives {c}")));
                        }
                        Some(_) => {}
                        None => unsettled += 1,
                    }
                }
                json!(d)
            } else if lc.is_zero(i, g, &ctx.budget)? {
                Value::Null
            } else {
                let p = lc.presentation(i, g, &ctx.budget)?;
                json!(Ideal::annihilator_of(&p, &ctx.budget)?.dimension(&ctx.budget)?)
            };
            t.row(&[json!(i), json!(g), value.clone()]);
            let mut row = serde_json::Map::new();
            row.insert("i".into(), json!(i));
            row.insert("gamma".into(), json!(g));
            row.insert(tag.into(), value);
            rows.push(Value::Object(row));
        }
    }
    if !field_base {
        ctx.report.scope.push("non-field base: Krull dimensions of slices, null for zero".into());
    }
    if cech {
        ctx.report.set("cech_unsettled", json!(unsettled));
    }
    ctx.report.set("window", json!([w.lo, w.hi]));
    ctx.report.set("reg", ext(reg));
    ctx.report.set("local_cohomology", Value::from(rows));
    ctx.report.tables.push(t);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum ProfileCheck {
    Depth,
    Cd,
    AssMonotone,
    AssUnion,
    Nonvanishing,
    Length,
}

fn parse_checks(s: &str) -> CliResult<BTreeSet<ProfileCheck>> {
    s.split(',')
        .map(|c| match c.trim() {
            "depth" | "depth-stability" | "assdepth2" => Ok(ProfileCheck::Depth),
            "cd" | "cd-stability" | "stabcd" => Ok(ProfileCheck::Cd),
            "ass-monotone" | "ass" | "assymass" => Ok(ProfileCheck::AssMonotone),
            "ass-union" | "assgraded" => Ok(ProfileCheck::AssUnion),
            "nonvanishing" | "qsM" => Ok(ProfileCheck::Nonvanishing),
            "length" | "length-monotone" | "assympolass" | "tametop" => Ok(ProfileCheck::Length),
            other => Err(CliError::Input(format!("unknown check {other:?}"))),
        })
        .collect()
}

fn parse_prime(ctx: &Ctx, s: &str) -> CliResult<u64> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s == "0" || s.is_empty() {
        return Ok(0);
    }
    let mut mask = 0u64;
    for v in s.split(',') {
        let k = ctx.file.base_vars.iter().position(|b| b == v.trim()).ok_or_else(|| CliError::Input(format!("{v:?} is not a base variable")))?;
        mask |= 1 << k;
    }
    Ok(mask)
}

fn thresholds_json(s: &Stability) -> Value {
    json!({
        "reg": ext(s.reg),
        "a0": ext(s.a0),
        "depth_s_plus": ext(s.depth_s_plus),
        "r": ext(s.r()),
        "cd_bound": opt_ext(s.cd_bound()),
    })
}

fn cmd_profile(ctx: &mut Ctx, ideal: Option<&str>, window: Option<&str>, check: Option<&str>, prime: Option<&str>) -> CliResult<()> {
    let s = Stability::new(&ctx.module, &ctx.budget)?;
    let w = window.map(parse_window).transpose()?;
    let multigraded = gstab_core::invariants::ass::is_multigraded(&ctx.module);
    let checks = match check {
        Some(c) => parse_checks(c)?,
        None => {
            let mut all = BTreeSet::from([ProfileCheck::Nonvanishing]);
            if ideal.is_some() {
                all.extend([ProfileCheck::Depth, ProfileCheck::Cd]);
            }
            if multigraded {
                all.extend([ProfileCheck::AssMonotone, ProfileCheck::AssUnion]);
            }
            if prime.is_some() {
                all.insert(ProfileCheck::Length);
            }
            all
        }
    };
    ctx.report.set("thresholds", thresholds_json(&s));
    let needs_ideal = checks.contains(&ProfileCheck::Depth) || checks.contains(&ProfileCheck::Cd);
    let gens = if needs_ideal {
        let given = ideal.ok_or_else(|| CliError::Input("depth and cd profiles need --ideal".into()))?;
        let (name, gens) = ctx.ideal(Some(given))?;
        ctx.report.set("ideal", json!({ "name": name, "gens": strs(&gens) }));
        gens
    } else {
        Vec::new()
    };
    let mut table = Table::new("profile", &["mu", "nonzero"]);
    let window_all = w.unwrap_or_else(|| s.default_window());
    let mut rows: std::collections::BTreeMap<i64, serde_json::Map<String, Value>> = std::collections::BTreeMap::new();
    let mut put = |mu: i64, key: &str, v: Value| {
        rows.entry(mu).or_default().insert(key.into(), v);
    };
    for mu in window_all.degrees() {
        put(mu, "nonzero", json!(s.is_nonzero_at(mu)));
    }
    if checks.contains(&ProfileCheck::Depth) {
        let p = s.depth_profile(&gens, w, &ctx.budget)?;
        for (mu, v) in &p.values {
            put(*mu, "depth", ext(*v));
        }
        ctx.report.set("depth", json!({ "r": ext(p.r), "d": opt_ext(p.d), "mu0": p.mu0, "window": [p.window.lo, p.window.hi] }));
        ctx.report.verdicts.extend(p.verdicts);
        table.header.push("depth".into());
    }
    if checks.contains(&ProfileCheck::Cd) {
        let p = s.cd_profile(&gens, w, &ctx.budget)?;
        for (mu, v) in &p.values {
            put(*mu, "cd_lo", ext(v.lo()));
            put(*mu, "cd_hi", ext(v.hi()));
        }
        ctx.report.set("cd", json!({ "a0": ext(p.a0), "bound": opt_ext(p.bound), "window": [p.window.lo, p.window.hi] }));
        ctx.report.verdicts.extend(p.verdicts);
        table.header.extend(["cd_lo".to_string(), "cd_hi".to_string()]);
    }
    if checks.contains(&ProfileCheck::AssMonotone) {
        let p = s.ass_profile(w, &ctx.budget)?;
        for (mu, v) in &p.values {
            put(*mu, "ass", mask_names(ctx, v));
        }
        ctx.report.set("ass", json!({ "stable_from": p.stable_from, "window": [p.window.lo, p.window.hi] }));
        ctx.report.verdicts.extend(p.verdicts);
        table.header.push("ass".into());
    }
    if checks.contains(&ProfileCheck::AssUnion) {
        let u = s.ass_union_check(w, &ctx.budget)?;
        ctx.report.set("ass_union", json!({ "slices": mask_names(ctx, &u.slices), "contracted": mask_names(ctx, &u.contracted), "window": [u.window.lo, u.window.hi] }));
        ctx.report.verdicts.push(u.verdict);
    }
    if checks.contains(&ProfileCheck::Length) {
        let given = prime.ok_or_else(|| CliError::Input("the length profile needs --prime".into()))?;
        let mask = parse_prime(ctx, given)?;
        let p = s.length_profile(mask, w, &ctx.budget)?;
        for (mu, v) in &p.values {
            put(*mu, "length", json!(v));
        }
        ctx.report.set("length", json!({ "prime": mask_names(ctx, &BTreeSet::from([mask]))[0], "j": ext(p.j), "j_exact": p.j_exact }));
        if !p.j_exact {
            ctx.report.scope.push("j(M) replaced by its bound a0".into());
        }
        ctx.report.verdicts.push(p.verdict);
        table.header.push("length".into());
    }
    if checks.contains(&ProfileCheck::Nonvanishing) {
        ctx.report.verdicts.extend(s.nonvanishing(w));
    }
    let keys: Vec<String> = table.header.clone();
    let mut out = Vec::new();
    for (mu, mut row) in rows {
        let cells: Vec<Value> = keys.iter().map(|k| if k == "mu" { json!(mu) } else { row.get(k).cloned().unwrap_or(Value::Null) }).collect();
        table.row(&cells);
        row.insert("mu".into(), json!(mu));
        out.push(Value::Object(row));
    }
    ctx.report.set("profile", Value::from(out));
    ctx.report.tables.push(table);
    Ok(())
}

fn cmd_tame(ctx: &mut Ctx, i: Option<usize>, window: Option<&str>, implications: bool) -> CliResult<()> {
    let s = Stability::new(&ctx.module, &ctx.budget)?;
    let w = window.map(parse_window).transpose()?;
    let n = s.n;
    let indices: Vec<usize> = match i {
        Some(i) if i > n => return Err(CliError::Input(format!("--i {i} exceeds the number of fiber variables {n}"))),
        Some(i) => vec![i],
        None => (0..=n).collect(),
    };
    let mut t = Table::new("tameness", &["i", "gamma", "nonzero"]);
    let mut scans = Vec::new();
    for i in indices {
        let scan = s.tameness_scan(i, w, &ctx.budget)?;
        for (g, nz) in &scan.pattern {
            t.row(&[json!(i), json!(g), json!(nz)]);
        }
        let mut entry = json!({
            "i": i,
            "window": [scan.window.lo, scan.window.hi],
            "gamma0": scan.gamma0,
            "pattern": scan.pattern.iter().map(|(g, nz)| json!({ "gamma": g, "nonzero": nz })).collect::<Vec<_>>(),
        });
        if implications {
            let th = s.tame_thresholds(i, &ctx.budget)?;
            let gw = Window { lo: -scan.window.hi, hi: -scan.window.lo };
            entry["thresholds"] = json!({ "A": opt_ext(th.a), "B": opt_ext(th.b), "C": opt_ext(th.c), "D": opt_ext(th.d), "E": opt_ext(th.e) });
            ctx.report.verdicts.extend(s.tame_implications(i, gw, &ctx.budget)?);
        }
        ctx.report.verdicts.push(scan.verdict);
        scans.push(entry);
    }
    ctx.report.set("reg", ext(s.reg));
    ctx.report.set("tameness", Value::from(scans));
    ctx.report.tables.push(t);
    Ok(())
}

fn cmd_thresholds(ctx: &mut Ctx, ideal: Option<&str>) -> CliResult<()> {
    let s = Stability::new(&ctx.module, &ctx.budget)?;
    let gens = match ideal {
        Some(given) => Some(ctx.ideal(Some(given))?.1),
        None => None,
    };
    let th = s.thresholds(gens.as_deref(), &ctx.budget)?;
    let mut doc = thresholds_json(&s);
    let mut t = Table::new("thresholds", &["name", "value"]);
    for k in ["reg", "a0", "depth_s_plus", "r", "cd_bound"] {
        t.row(&[json!(k), doc[k].clone()]);
    }
    if let Some((d, mu0)) = th.depth {
        doc["depth_d"] = ext(d);
        doc["depth_mu0"] = json!(mu0);
        t.row(&[json!("depth_d"), ext(d)]);
        t.row(&[json!("depth_mu0"), json!(mu0)]);
    }
    let mut tame = Vec::new();
    for x in &th.tame {
        let names = [("A", x.a), ("B", x.b), ("C", x.c), ("D", x.d), ("E", x.e)];
        let mut entry = serde_json::Map::new();
        entry.insert("i".into(), json!(x.i));
        for (k, v) in names {
            entry.insert(k.into(), opt_ext(v));
            t.row(&[json!(format!("tame_{k}_{}", x.i)), opt_ext(v)]);
        }
        tame.push(Value::Object(entry));
    }
    if let Some(why) = &th.tame_scope {
        ctx.report.scope.push(format!("tameness thresholds: {why}"));
    }
    if th.tame.iter().any(|x| TameStatement::ALL.iter().any(|&st| x.for_statement(st).is_none())) {
        ctx.report.scope.push("null thresholds need associated primes of a non-multigraded Ext module".into());
    }
    doc["tame"] = Value::from(tame);
    ctx.report.set("thresholds", doc);
    ctx.report.tables.push(t);
    Ok(())
}

fn cmd_dmcheck(ctx: &mut Ctx, p: &str, q: &str, vars: Option<&str>) -> CliResult<()> {
    let ring = ctx.file.ring().clone();
    let parse = |s: &str| Poly::parse(&ring, s).map_err(|e| CliError::Input(format!("{s:?}: {e}")));
    let (pp, qq) = (parse(p)?, parse(q)?);
    let t_vars: Vec<usize> = match vars {
        Some(v) => v
            .split(',')
            .map(|n| ring.var_index(n.trim()).ok_or_else(|| CliError::Input(format!("unknown variable {n:?}"))))
            .collect::<CliResult<_>>()?,
        None => ring.fiber_range().collect(),
    };
    let r = dm_check(&pp, &qq, &t_vars, &ctx.budget)?;
    ctx.report.set("ell", json!(r.ell));
    ctx.report.set("lhs_in_rhs", json!(r.lhs_in_rhs));
    ctx.report.set("rhs_in_lhs", json!(r.rhs_in_lhs));
    ctx.report.set("holds", json!(r.holds()));
    let mut t = Table::new("dedekind_mertens", &["ell", "lhs_in_rhs", "rhs_in_lhs"]);
    t.row(&[json!(r.ell), json!(r.lhs_in_rhs), json!(r.rhs_in_lhs)]);
    ctx.report.tables.push(t);
    if !r.holds() {
        return Err(CliError::Tripwire("content identity fails".into()));
    }
    Ok(())
}

fn file_of(cmd: &Command) -> &PathBuf {
    match cmd {
        Command::Reg { file }
        | Command::Betti { file }
        | Command::Depth { file, .. }
        | Command::Cd { file, .. }
        | Command::Ass { file }
        | Command::Lc { file, .. }
        | Command::Profile { file, .. }
        | Command::Tame { file, .. }
        | Command::Thresholds { file, .. }
        | Command::Dmcheck { file, .. } => file,
    }
}

fn execute(cli: &Cli, argv: &[String], ctx_out: &mut Option<Ctx>) -> CliResult<()> {
    let path = file_of(&cli.cmd);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file = parse_module_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let hash = sha256_hex(print_module_file(&file).as_bytes());
    let module = file.module();
    let budget = cli.budget.map_or_else(Budget::unlimited, Budget::new);
    *ctx_out = Some(Ctx {
        file,
        module,
        budget,
        cache: ResolutionCache::from_env(cli.no_cache),
        report: Report::new(argv.to_vec(), hash),
    });
    let ctx = ctx_out.as_mut().expect("just set");
    match &cli.cmd {
        Command::Reg { .. } => {
            ctx.coordinates(cli.seed)?;
            cmd_reg(ctx)
        }
        Command::Betti { .. } => {
            ctx.coordinates(cli.seed)?;
            cmd_betti(ctx)
        }
        Command::Depth { ideal, .. } => cmd_depth(ctx, ideal.as_deref()),
        Command::Cd { ideal, .. } => cmd_cd(ctx, ideal.as_deref()),
        Command::Ass { .. } => cmd_ass(ctx),
        Command::Lc { i, window, cech, .. } => {
            ctx.coordinates(cli.seed)?;
            cmd_lc(ctx, *i, window.as_deref(), *cech)
        }
        Command::Profile { ideal, window, check, prime, .. } => {
            cmd_profile(ctx, ideal.as_deref(), window.as_deref(), check.as_deref(), prime.as_deref())
        }
        Command::Tame { i, window, implications, .. } => {
            ctx.coordinates(cli.seed)?;
            cmd_tame(ctx, *i, window.as_deref(), *implications)
        }
        Command::Thresholds { ideal, .. } => cmd_thresholds(ctx, ideal.as_deref()),
        Command::Dmcheck { p, q, vars, .. } => cmd_dmcheck(ctx, p, q, vars.as_deref()),
    }
}

/// Runs one invocation; `args` excludes the program name. Returns the exit code.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("gstab".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let started = Instant::now();
    let mut ctx = None;
    let outcome = execute(&cli, args, &mut ctx);
    let mut code = match &outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "gstab: {}", e.message());
            e.code()
        }
    };
    let Some(mut ctx) = ctx else { return code };
    for w in &ctx.cache.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    if outcome.is_err() && code != EXIT_TRIPWIRE {
        return code;
    }
    if code == EXIT_OK && ctx.report.any_failed() {
        for v in ctx.report.verdicts.iter().filter(|v| v.failed()) {
            let _ = writeln!(stderr, "gstab: {v}");
        }
        code = EXIT_TRIPWIRE;
    }
    if let Err(e) = &outcome {
        ctx.report.set("error", json!(e.message()));
    }
    ctx.report.timing_ms = started.elapsed().as_millis();
    let body = if cli.format == Format::Tsv && !cli.json { ctx.report.to_tsv() } else { ctx.report.to_json_string() };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, body) {
                let _ = writeln!(stderr, "gstab: {}: {e}", p.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    code
}

/// Checks used by the profile command, for documentation and tests.
pub fn check_tags() -> Vec<&'static str> {
    [Check::DepthStability, Check::CdMonotone, Check::CdConstant, Check::AssMonotone, Check::AssUnion, Check::Nonvanishing, Check::LengthMonotone]
        .iter()
        .map(|c| c.tag())
        .collect()
}
