use std::fs;

use agcodes::blowup::{m_sequence, FamilyConfig};
use agcodes::code::{CodeParams, GeneratorMatrix};
use agcodes::constructions::{
    decomposable_params, ext_rs, goppa_params, lomont1_generator, lomont1_params, lomont2_params, product_code,
    ruled_params, BundleKind, Dimension, FamilyParams, RuledInputs,
};
use agcodes::curve::{analyze_with, count_points};
use agcodes::field::multiplication_table_csv;
use agcodes::rate::{
    best_pair, err_gap, err_negative_exact, err_terms, format_sig, gv_rate, lomont2_optimum, product_optimum, tvz_rate,
    ErrGap, Family, Lomont2Optimum, ProductOptimum, RatePoint,
};
use agcodes::search::{run_search, SearchConfig, TallyTable};
use anyhow::{bail, ensure, Context, Result};
use num_rational::Ratio;
use serde::Serialize;

use crate::parse::{self, ratio_f64};
use crate::run::Run;
use crate::{
    AnalyzeArgs, BlowupArgs, BoundsArgs, BuildCodeArgs, BundleArg, CodeFamily, CompareArgs, CurveArgs, FieldTableArgs,
    MinDistanceArgs, OptimalRateArgs, ParamFamily, ParamsArgs, SearchArgs, TallyArgs,
};

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Text output goes to `out` when given, to stdout otherwise.
fn emit(r: &mut Run, out: Option<&std::path::Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => r.write(p, text.as_bytes()),
        None => {
            r.say(text);
            Ok(())
        }
    }
}

/// Rows as CSV, or as space-padded columns.
fn render(rows: &[Vec<String>], csv: bool) -> String {
    if csv {
        return rows.iter().map(|r| r.join(",") + "\n").collect();
    }
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0)).collect();
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            cells.join("  ").trim_end().to_string() + "\n"
        })
        .collect()
}

pub fn field_table(r: &mut Run, a: &FieldTableArgs) -> Result<()> {
    let f = r.field(a.m)?;
    let mut text = format!("m,q,reduction\n{},{},{}\n", a.m, f.q(), f.reduction_string());
    if a.table {
        ensure!(a.m <= 4, "multiplication tables are only printed for m <= 4");
        text.push_str(&multiplication_table_csv(&f));
    }
    emit(r, a.out.as_deref(), &text)
}

pub fn count_points_cmd(r: &mut Run, a: &CurveArgs) -> Result<()> {
    let f = r.field(a.m)?;
    let (curves, from_file) = parse::curves(&a.curve)?;
    if !from_file {
        r.say(count_points(&curves[0], &f).to_string());
        return Ok(());
    }
    r.say("degree,polynomial,q,points");
    for c in &curves {
        r.say(format!("{},{},{},{}", c.degree(), c.form(), f.q(), count_points(c, &f)));
    }
    Ok(())
}

pub fn analyze_curve(r: &mut Run, a: &AnalyzeArgs) -> Result<()> {
    let f = r.field(a.curve.m)?;
    let (curves, from_file) = parse::curves(&a.curve.curve)?;
    let reports: Vec<_> = curves.iter().map(|c| analyze_with(c, &f, !a.no_irreducibility)).collect();
    let text = if from_file { json(&reports)? } else { json(&reports[0])? };
    emit(r, a.out.as_deref(), &text)
}

pub fn search(r: &mut Run, a: &SearchArgs) -> Result<()> {
    let mut cfg = SearchConfig::new(a.degree, a.fields.clone());
    cfg.max_representatives = a.max_reps;
    cfg.max_field_m = a.max_field_m;
    cfg.results_csv = Some(r.resolve(&a.out));
    cfg.checkpoint = a.resume.as_ref().map(|p| r.resolve(p));
    if let Some(parent) = r.resolve(&a.out).parent() {
        fs::create_dir_all(parent)?;
    }
    for &m in a.fields.iter().filter(|&&m| m <= a.max_field_m) {
        r.note_field(m);
    }
    let outcome = run_search(&cfg).with_context(|| format!("searching degree {} curves", a.degree))?;
    r.record(&a.out)?;
    if let Some(ck) = &a.resume {
        if r.resolve(ck).exists() {
            r.record(ck)?;
        }
    }
    if let Some(t) = &a.tally {
        r.write(t, outcome.tally.to_csv().as_bytes())?;
    }
    let s = &outcome.stats;
    r.say(format!(
        "degree={} orbits={} skipped_variable_factor={} skipped_square={} representatives={}",
        s.degree, s.orbits, s.skipped_variable_factor, s.skipped_square, s.representatives
    ));
    if let Some(from) = outcome.resumed_from {
        r.say(format!("resumed_from={from}"));
    }
    r.say(format!("processed={} complete={}", outcome.processed, outcome.complete()));
    if let Some(why) = &outcome.truncated {
        r.say(format!("truncated: {why}"));
    }
    Ok(())
}

pub fn tally(r: &mut Run, a: &TallyArgs) -> Result<()> {
    let mut table = TallyTable::default();
    for p in &a.results {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let t = TallyTable::from_results_csv(&text).with_context(|| format!("in {}", p.display()))?;
        table.merge(&t);
    }
    for e in table.entries() {
        r.note_field(e.q.trailing_zeros());
    }
    let text = if a.json { json(&table.entries().collect::<Vec<_>>())? } else { table.to_csv() };
    emit(r, a.out.as_deref(), &text)
}

pub fn build_code(r: &mut Run, a: &BuildCodeArgs) -> Result<()> {
    let m = match (a.q, a.m) {
        (Some(q), _) => parse::field_degree(q)?,
        (None, Some(m)) => m,
        (None, None) => bail!("give the field as --q or --m"),
    };
    let f = r.field(m)?;
    let need = |v: Option<usize>, name: &str| v.with_context(|| format!("--{name} is required for this family"));
    let g = match a.family {
        CodeFamily::ExtRs => ext_rs(&f, need(a.k, "k")?)?,
        CodeFamily::Product => {
            let (ka, kb) = (need(a.a, "a")?, need(a.b, "b")?);
            product_code(&ext_rs(&f, ka)?, &ext_rs(&f, kb)?)?
        }
        CodeFamily::Lomont1 => lomont1_generator(&f, need(a.a, "a")?, need(a.b, "b")?)?,
    };
    r.write(&a.out, g.to_csv().as_bytes())?;
    r.say(format!("wrote {}: q={} n={} k={}", a.out.display(), f.q(), g.n(), g.k()));
    Ok(())
}

pub fn min_distance(r: &mut Run, a: &MinDistanceArgs) -> Result<()> {
    let text = fs::read_to_string(&a.generator).with_context(|| format!("reading {}", a.generator.display()))?;
    let g = GeneratorMatrix::from_csv(&text).with_context(|| format!("parsing {}", a.generator.display()))?;
    r.note_field(g.field().m());
    let limit = parse::work_limit(&a.limit)?;
    let p = g.params_with_exact_distance(limit)?;
    if a.json {
        r.say(json(&p)?);
    } else {
        r.say(format!("n={} k={} d={}", p.n, p.k, p.d.value()));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ParamsOutput {
    family: &'static str,
    n: u64,
    k: Dimension,
    d: u64,
    d_exact: bool,
    rate: Option<f64>,
    singleton_ok: bool,
    l: Option<i64>,
    kappa: Option<String>,
    flags: Vec<String>,
}

impl ParamsOutput {
    fn from_code(family: &'static str, p: CodeParams) -> Self {
        ParamsOutput {
            family,
            n: p.n,
            k: Dimension::Exact(p.k),
            d: p.d.value(),
            d_exact: p.d.is_exact(),
            rate: Some(ratio_f64(p.rate())),
            singleton_ok: agcodes::code::singleton_check(&p),
            l: None,
            kappa: None,
            flags: Vec::new(),
        }
    }

    fn from_family(family: &'static str, p: FamilyParams) -> Self {
        ParamsOutput {
            family,
            n: p.n,
            rate: p.k.known().map(|k| k as f64 / p.n as f64),
            singleton_ok: p.singleton_ok(),
            k: p.k,
            d: p.d,
            d_exact: false,
            l: p.l,
            kappa: p.kappa,
            flags: p.flags,
        }
    }
}

pub fn params(r: &mut Run, a: &ParamsArgs) -> Result<()> {
    let need = |v: Option<u64>, name: &str| v.with_context(|| format!("--{name} is required for this family"));
    let out = match a.family {
        ParamFamily::Lomont1 => {
            let q = need(a.q, "q")?;
            let e = a.e.unwrap_or(0);
            ensure!(e >= 0, "the P1 bundle needs e >= 0, got {e}");
            ParamsOutput::from_code("lomont1", lomont1_params(q, need(a.a, "a")?, need(a.b, "b")?, e as u64)?)
        }
        ParamFamily::Lomont2 => ParamsOutput::from_code(
            "lomont2",
            lomont2_params(need(a.q, "q")?, need(a.aleph, "aleph")?, need(a.a, "a")?, need(a.b, "b")?)?,
        ),
        ParamFamily::Goppa => {
            ParamsOutput::from_code("goppa", goppa_params(need(a.aleph, "aleph")?, need(a.k2, "k2")?)?)
        }
        ParamFamily::Decomposable => ParamsOutput::from_family(
            "decomposable",
            decomposable_params(
                need(a.q, "q")?,
                need(a.g, "g")?,
                a.e.context("--e is required for this family")?,
                need(a.aleph, "aleph")?,
                need(a.a, "a")?,
                need(a.b, "b")?,
            )?,
        ),
        ParamFamily::Ruled => {
            let mut inp = RuledInputs::new(
                need(a.q, "q")?,
                need(a.g, "g")?,
                need(a.aleph, "aleph")?,
                a.e.context("--e is required for this family")?,
                need(a.a, "a")?,
                need(a.b, "b")?,
            );
            inp.p = a.p;
            inp.ample = a.ample;
            inp.kind = match a.bundle {
                BundleArg::Generic => BundleKind::Generic,
                BundleArg::Decomposable => BundleKind::Decomposable,
                BundleArg::Atiyah => BundleKind::AtiyahDegreeZero,
            };
            ParamsOutput::from_family("ruled", ruled_params(&inp)?)
        }
    };
    if a.q.is_some_and(|q| q.is_power_of_two() && q >= 2) {
        r.note_field(a.q.unwrap().trailing_zeros());
    }
    if a.json {
        r.say(json(&out)?);
        return Ok(());
    }
    let k = match &out.k {
        Dimension::Exact(k) => format!("k={k}"),
        Dimension::AtLeast(k) => format!("k>={k}"),
        Dimension::Unknown(what) => format!("k=? ({what})"),
    };
    let rel = if out.d_exact { "=" } else { ">=" };
    r.say(format!("n={} {k} d{rel}{}", out.n, out.d));
    if let Some(rate) = out.rate {
        r.say(format!("rate={}", format_sig(rate, 6)));
    }
    r.say(format!("singleton_ok={}", out.singleton_ok));
    for f in &out.flags {
        r.say(format!("flag: {f}"));
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareOutput<'a> {
    q: u64,
    aleph: Option<u64>,
    points: &'a [RatePoint],
}

pub fn compare(r: &mut Run, a: &CompareArgs) -> Result<()> {
    let families: Vec<Family> = a.families.iter().map(|s| s.parse()).collect::<agcodes::Result<_>>()?;
    ensure!(!families.is_empty(), "no families given");
    ensure!(a.q >= 2, "q must be at least 2");
    let targets = parse::decimal_list(&a.targets)?;
    for t in &targets {
        ensure!(*t > Ratio::from_integer(0) && *t < Ratio::from_integer(1), "target {t} is not in (0, 1)");
    }
    if let Some(f) = families.iter().find(|f| f.needs_aleph()) {
        let aleph = a.aleph.with_context(|| format!("{f} needs --aleph"))?;
        ensure!(aleph >= 3, "--aleph must be at least 3");
    }
    if a.q.is_power_of_two() {
        r.note_field(a.q.trailing_zeros());
    }
    let aleph = a.aleph.unwrap_or(0);
    // q and aleph are checked, so a failure means the target is out of reach
    let grid: Vec<Vec<Option<RatePoint>>> =
        targets.iter().map(|&t| families.iter().map(|&f| best_pair(f, a.q, aleph, t).ok()).collect()).collect();

    if a.json {
        let points: Vec<RatePoint> = grid.iter().flatten().flatten().cloned().collect();
        let text = json(&CompareOutput { q: a.q, aleph: a.aleph, points: &points })?;
        return emit(r, a.out.as_deref(), &text);
    }
    let mut header = vec!["r".to_string()];
    for f in &families {
        let (x, y) = f.pair_labels();
        header.extend([x, y, "rate", "delta"].map(|c| format!("{f}_{c}")));
        if a.exact {
            header.extend(["rate_exact", "delta_exact"].map(|c| format!("{f}_{c}")));
        }
    }
    let mut rows = vec![header];
    for (t, cells) in targets.iter().zip(&grid) {
        let mut row = vec![format_sig(ratio_f64(*t), 6)];
        for p in cells {
            let width = if a.exact { 6 } else { 4 };
            match p {
                None => row.extend(std::iter::repeat_n(String::new(), width)),
                Some(p) => {
                    row.extend([
                        p.pair.0.to_string(),
                        p.pair.1.to_string(),
                        format_sig(p.rate_f64(), 6),
                        format_sig(p.delta_f64(), 6),
                    ]);
                    if a.exact {
                        row.extend([p.rate().to_string(), p.delta().to_string()]);
                    }
                }
            }
        }
        rows.push(row);
    }
    let text = render(&rows, a.csv || a.out.is_some());
    emit(r, a.out.as_deref(), &text)
}

#[derive(Debug, Serialize)]
struct OptimalRateOutput {
    q: u64,
    aleph: u64,
    delta: f64,
    delta_exact: String,
    lomont2: Lomont2Optimum,
    /// `(n, k, d)` at `lomont2.best_integer`.
    lomont2_params: Option<(u64, u64, u64)>,
    product: ProductOptimum,
    product_params: Option<(u64, u64, u64)>,
    err: f64,
    err_terms: ErrGap,
    err_negative_exact: bool,
}

pub fn optimal_rate(r: &mut Run, a: &OptimalRateArgs) -> Result<()> {
    let delta_exact = parse::decimal_ratio(&a.delta)?;
    let delta = ratio_f64(delta_exact);
    let l2 = lomont2_optimum(a.q, a.aleph, delta)?;
    let pr = product_optimum(a.q, a.aleph, delta)?;
    let at = |f: Family, p: Option<(u64, u64)>| p.and_then(|(x, y)| f.params(a.q, a.aleph, x, y));
    let out = OptimalRateOutput {
        q: a.q,
        aleph: a.aleph,
        delta,
        delta_exact: delta_exact.to_string(),
        lomont2_params: at(Family::Lomont2, l2.best_integer),
        product_params: at(Family::GoppaProduct, pr.best_integer),
        lomont2: l2,
        product: pr,
        err: err_gap(a.q, delta)?,
        err_terms: err_terms(a.q)?,
        err_negative_exact: err_negative_exact(a.q, delta_exact),
    };
    if a.q.is_power_of_two() {
        r.note_field(a.q.trailing_zeros());
    }
    if a.json {
        r.say(json(&out)?);
        return Ok(());
    }
    let pair = |p: Option<(u64, u64)>| p.map_or("none".to_string(), |(x, y)| format!("({x}, {y})"));
    let nkd = |p: Option<(u64, u64, u64)>| p.map_or("none".to_string(), |(n, k, d)| format!("[{n}, {k}, >={d}]"));
    let s = |x: f64| format_sig(x, 6);
    r.say(format!("lomont2: a0={} b0={} rate={}", s(out.lomont2.a0), s(out.lomont2.b0), s(out.lomont2.rate)));
    r.say(format!("lomont2: best integer pair {} {}", pair(out.lomont2.best_integer), nkd(out.lomont2_params)));
    r.say(format!("product: k1={} k2={} rate={}", s(out.product.k1), s(out.product.k2), s(out.product.rate)));
    r.say(format!("product: best integer pair {} {}", pair(out.product.best_integer), nkd(out.product_params)));
    r.say(format!(
        "err={} = {} + {}*sqrt(delta); negative (exact) = {}",
        s(out.err),
        out.err_terms.constant_exact,
        s(out.err_terms.sqrt_coefficient),
        out.err_negative_exact
    ));
    Ok(())
}

pub fn blowup_check(r: &mut Run, a: &BlowupArgs) -> Result<()> {
    let cfg = FamilyConfig {
        q: a.q,
        h: a.h,
        h0l0: a.h0l0,
        s0l0c0: a.s0l0c0,
        n0: a.n0,
        t: a.t.clone(),
        lambda_max: a.lambda_max,
    };
    let trace = m_sequence(&cfg, a.steps)?;
    if a.json {
        r.say(json(&trace)?);
        return Ok(());
    }
    let c = &trace.conditions;
    r.say(format!("conditions_ok={} h_large_enough={} t0_large_enough={}", c.ok, c.h_large_enough, c.t0_large_enough));
    for d in &c.diagnostics {
        r.say(format!("note: {d}"));
    }
    let mut rows = vec![["i", "hl", "m", "n", "ok"].map(String::from).to_vec()];
    for s in &trace.steps {
        rows.push(vec![s.i.to_string(), s.hl.to_string(), s.m.to_string(), s.n.to_string(), s.ok.to_string()]);
    }
    r.say(render(&rows, false));
    match trace.first_failure {
        Some(i) => r.say(format!("first_failure={i}")),
        None => r.say("first_failure=none"),
    }
    Ok(())
}

pub fn bounds(r: &mut Run, a: &BoundsArgs) -> Result<()> {
    ensure!(a.q >= 2, "q must be at least 2");
    let deltas = parse::decimal_list(&a.delta)?;
    let mut rows = vec![["delta", "tvz", "gv", "singleton"].map(String::from).to_vec()];
    for d in deltas {
        let x = ratio_f64(d);
        ensure!(x < 1.0, "delta {d} is not below 1");
        let cell = |v: f64| format_sig(v, 6);
        rows.push(vec![cell(x), cell(tvz_rate(a.q, x)), cell(gv_rate(a.q, x)), cell(1.0 - x)]);
    }
    r.say(render(&rows, a.csv));
    Ok(())
}
