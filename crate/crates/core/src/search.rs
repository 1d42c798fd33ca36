//! Exhaustive search over plane curves of one degree.
//!
//! Curves related by an invertible linear change of variables over GF(2)
//! have the same point counts over every GF(2^m), so only one member of each
//! GL₃(F₂) orbit is analysed. Orbits containing a curve divisible by a
//! variable (equivalently: with a line over GF(2) as a component) and
//! perfect squares are skipped.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{
    analyze_with, is_absolutely_irreducible, monomial_count, serre_bound, AbsIrreducible, CurveReport, Form,
    PlaneCurve, MAX_CURVE_DEGREE,
};
use crate::field::{FieldSpec, MAX_DEGREE};
use crate::{Error, Result};

/// The 168 invertible 3×3 matrices over GF(2). Row `r` holds the
/// coefficients of the new `r`-th variable on `(x, y, z)` as bits 2, 1, 0.
pub fn gl3_matrices() -> &'static [[u8; 3]] {
    static M: OnceLock<Vec<[u8; 3]>> = OnceLock::new();
    M.get_or_init(|| {
        let mut out = Vec::with_capacity(168);
        for r0 in 1..8u8 {
            for r1 in 1..8u8 {
                for r2 in 1..8u8 {
                    let independent = [r0 ^ r1, r0 ^ r2, r1 ^ r2, r0 ^ r1 ^ r2].iter().all(|&v| v != 0);
                    if independent {
                        out.push([r0, r1, r2]);
                    }
                }
            }
        }
        out
    })
}

const CHUNK: u32 = 7;
const CHUNKS: usize = 4;

/// Precomputed action of GL₃(F₂) on forms of one degree: for every matrix,
/// lookup tables mapping 7-bit slices of a mask to the image mask.
pub struct Gl3Action {
    degree: u32,
    tables: Vec<[[u32; 128]; CHUNKS]>,
}

impl Gl3Action {
    pub fn for_degree(degree: u32) -> &'static Gl3Action {
        static CACHE: [OnceLock<Gl3Action>; 7] = [const { OnceLock::new() }; 7];
        assert!(degree <= MAX_CURVE_DEGREE);
        CACHE[degree as usize].get_or_init(|| Gl3Action::build(degree))
    }

    fn build(degree: u32) -> Self {
        let bits = monomial_count(degree);
        let tables = gl3_matrices()
            .iter()
            .map(|&rows| {
                let images: Vec<u32> = (0..bits).map(|b| Form { degree, mask: 1 << b }.substitute(rows).mask).collect();
                let mut t = [[0u32; 128]; CHUNKS];
                for (c, table) in t.iter_mut().enumerate() {
                    let base = c as u32 * CHUNK;
                    for v in 1..128u32 {
                        // extend from v with its lowest bit cleared
                        let low = v.trailing_zeros();
                        let b = base + low;
                        let img = if b < bits { images[b as usize] } else { 0 };
                        table[v as usize] = table[(v & (v - 1)) as usize] ^ img;
                    }
                }
                t
            })
            .collect();
        Gl3Action { degree, tables }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn apply(&self, matrix: usize, mask: u32) -> u32 {
        let t = &self.tables[matrix];
        t[0][(mask & 127) as usize]
            ^ t[1][(mask >> 7 & 127) as usize]
            ^ t[2][(mask >> 14 & 127) as usize]
            ^ t[3][(mask >> 21 & 127) as usize]
    }

    /// Distinct images of `mask`, ascending.
    pub fn orbit_masks(&self, mask: u32) -> Vec<u32> {
        let mut v: Vec<u32> = (0..self.tables.len()).map(|i| self.apply(i, mask)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// The GL₃(F₂) orbit of a curve, sorted by mask.
pub fn gl3_orbit(curve: &PlaneCurve) -> Vec<PlaneCurve> {
    Gl3Action::for_degree(curve.degree())
        .orbit_masks(curve.mask())
        .into_iter()
        .map(|m| PlaneCurve::new(curve.degree(), m).expect("image of a nonzero form is nonzero"))
        .collect()
}

/// Fewest monomials first, then smallest mask.
pub fn pick_representative(orbit: &[PlaneCurve]) -> Result<PlaneCurve> {
    orbit
        .iter()
        .copied()
        .min_by_key(|c| (c.mask().count_ones(), c.mask()))
        .ok_or_else(|| Error::InvalidArgument("empty orbit".into()))
}

fn rep_of_masks(masks: &[u32]) -> u32 {
    *masks.iter().min_by_key(|&&m| (m.count_ones(), m)).expect("orbit is nonempty")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrbitStats {
    pub degree: u32,
    pub orbits: u64,
    pub skipped_variable_factor: u64,
    pub skipped_square: u64,
    pub representatives: u64,
}

/// Masks not yet reached; a flat bit table from degree 5 on, a hash set below.
enum Visited {
    Bits(Vec<u64>),
    Set(HashSet<u32>),
}

impl Visited {
    fn new(degree: u32) -> Self {
        if degree >= 5 {
            Visited::Bits(vec![0u64; (1usize << monomial_count(degree)) / 64])
        } else {
            Visited::Set(HashSet::new())
        }
    }

    #[inline]
    fn contains(&self, m: u32) -> bool {
        match self {
            Visited::Bits(b) => b[(m >> 6) as usize] >> (m & 63) & 1 == 1,
            Visited::Set(s) => s.contains(&m),
        }
    }

    #[inline]
    fn insert(&mut self, m: u32) {
        match self {
            Visited::Bits(b) => b[(m >> 6) as usize] |= 1 << (m & 63),
            Visited::Set(s) => {
                s.insert(m);
            }
        }
    }
}

/// Masks of the monomials free of each variable.
fn variable_free_masks(degree: u32) -> [u32; 3] {
    let mut out = [0u32; 3];
    for (i, j, k) in (Form { degree, mask: (1u64 << monomial_count(degree)).wrapping_sub(1) as u32 }).monomials() {
        let b = crate::curve::monomial_index(degree, i, j);
        for (v, e) in [i, j, k].into_iter().enumerate() {
            if e == 0 {
                out[v] |= 1 << b;
            }
        }
    }
    out
}

/// One representative per orbit, in order of each orbit's smallest mask.
pub fn enumerate_representatives(degree: u32) -> Result<(Vec<PlaneCurve>, OrbitStats)> {
    if !(1..=MAX_CURVE_DEGREE).contains(&degree) {
        return Err(Error::CurveDegree(degree));
    }
    let action = Gl3Action::for_degree(degree);
    let free = variable_free_masks(degree);
    let square_free_bits = {
        let all = Form { degree, mask: ((1u64 << monomial_count(degree)) - 1) as u32 };
        let mut m = 0u32;
        for (i, j, k) in all.monomials() {
            if i % 2 == 1 || j % 2 == 1 || k % 2 == 1 {
                m |= 1 << crate::curve::monomial_index(degree, i, j);
            }
        }
        m
    };
    let total = 1u64 << monomial_count(degree);
    let mut visited = Visited::new(degree);
    let mut stats = OrbitStats { degree, ..Default::default() };
    let mut reps = Vec::new();
    for mask in 1..total as u32 {
        if visited.contains(mask) {
            continue;
        }
        let orbit = action.orbit_masks(mask);
        for &m in &orbit {
            visited.insert(m);
        }
        stats.orbits += 1;
        if degree >= 2 {
            if orbit.iter().any(|&m| free.iter().any(|&f| m & f == 0)) {
                stats.skipped_variable_factor += 1;
                continue;
            }
            if mask & square_free_bits == 0 {
                stats.skipped_square += 1;
                continue;
            }
        }
        reps.push(PlaneCurve::new(degree, rep_of_masks(&orbit))?);
    }
    stats.representatives = reps.len() as u64;
    Ok((reps, stats))
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub degree: u32,
    /// Extension degrees `m` of the fields GF(2^m) to scan.
    pub fields: Vec<u32>,
    /// Stop after this many representatives in one run.
    pub max_representatives: Option<u64>,
    /// Fields above this `m` are refused (and reported as truncation).
    pub max_field_m: u32,
    /// Resume from, and keep writing, this checkpoint.
    pub checkpoint: Option<PathBuf>,
    /// Per-curve CSV output.
    pub results_csv: Option<PathBuf>,
    /// Keep every report in memory (tests and small runs).
    pub keep_reports: bool,
    pub chunk_size: usize,
}

impl SearchConfig {
    pub fn new(degree: u32, fields: Vec<u32>) -> Self {
        SearchConfig {
            degree,
            fields,
            max_representatives: None,
            max_field_m: MAX_DEGREE,
            checkpoint: None,
            results_csv: None,
            keep_reports: false,
            chunk_size: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TallyEntry {
    pub q: u32,
    pub genus_lower: u64,
    pub genus_upper: u64,
    pub points: u64,
    pub serre_bound: u64,
    pub bonus_exact: bool,
    pub curve: PlaneCurve,
}

impl Serialize for PlaneCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Best estimated smooth-model point count per field and genus interval.
/// Only absolutely irreducible curves are entered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TallyTable {
    entries: BTreeMap<(u32, u64, u64), TallyEntry>,
}

impl TallyTable {
    /// Entries with a single possible genus.
    pub fn resolved(&self) -> impl Iterator<Item = &TallyEntry> {
        self.entries.values().filter(|e| e.genus_lower == e.genus_upper)
    }

    /// Entries whose genus is only known to lie in an interval.
    pub fn unresolved(&self) -> impl Iterator<Item = &TallyEntry> {
        self.entries.values().filter(|e| e.genus_lower != e.genus_upper)
    }

    pub fn entries(&self) -> impl Iterator<Item = &TallyEntry> {
        self.entries.values()
    }

    pub fn get(&self, q: u32, genus: u64) -> Option<&TallyEntry> {
        self.entries.get(&(q, genus, genus))
    }

    fn improves(&self, r: &CurveReport) -> bool {
        match self.entries.get(&(r.q, r.genus_lower, r.genus_upper)) {
            None => true,
            Some(e) => r.estimated_smooth_model_points > e.points,
        }
    }

    fn offer(&mut self, r: &CurveReport, curve: PlaneCurve) {
        self.offer_parts(
            r.q,
            r.genus_lower,
            r.genus_upper,
            r.estimated_smooth_model_points,
            r.blowup_bonus_exact,
            curve,
        );
    }

    fn offer_parts(&mut self, q: u32, lo: u64, hi: u64, points: u64, bonus_exact: bool, curve: PlaneCurve) {
        let better = self.entries.get(&(q, lo, hi)).is_none_or(|e| points > e.points);
        if better {
            let serre_bound = serre_bound(q as u64, lo);
            self.entries.insert(
                (q, lo, hi),
                TallyEntry { q, genus_lower: lo, genus_upper: hi, points, serre_bound, bonus_exact, curve },
            );
        }
    }

    /// Rebuilds a tally from per-curve result rows (the `RESULTS_HEADER`
    /// layout). Rows whose irreducibility was never tested are tested here
    /// when they would improve the table.
    pub fn from_results_csv(text: &str) -> Result<TallyTable> {
        let mut t = TallyTable::default();
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == RESULTS_HEADER.trim() => {}
            _ => return Err(Error::Parse("results CSV must start with the results header".into())),
        }
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = |what: &str| Error::Parse(format!("results row {}: bad {what}", i + 2));
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 11 {
                return Err(bad("column count"));
            }
            let num = |k: usize, what: &str| cols[k].trim().parse::<u64>().map_err(|_| bad(what));
            let degree = num(0, "degree")? as u32;
            let curve: PlaneCurve = format!("d={degree}; f={}", cols[1]).parse()?;
            let q = num(2, "q")? as u32;
            let points = num(4, "smooth_points")? + num(6, "bonus")?;
            let exact = match cols[7].trim() {
                "true" => true,
                "false" => false,
                _ => return Err(bad("bonus_exact")),
            };
            let (lo, hi) = (num(8, "genus_lo")?, num(9, "genus_hi")?);
            if t.entries.get(&(q, lo, hi)).is_some_and(|e| points <= e.points) {
                continue;
            }
            let abs = match cols[10].trim() {
                "yes" => AbsIrreducible::Yes,
                "no" | "unknown" => continue,
                "untested" => is_absolutely_irreducible(&curve),
                _ => return Err(bad("abs_irred")),
            };
            if abs == AbsIrreducible::Yes {
                t.offer_parts(q, lo, hi, points, exact, curve);
            }
        }
        Ok(t)
    }

    /// Merges another table, keeping the larger count (ties keep `self`).
    pub fn merge(&mut self, other: &TallyTable) {
        for (k, e) in &other.entries {
            match self.entries.get(k) {
                Some(mine) if mine.points >= e.points => {}
                _ => {
                    self.entries.insert(*k, e.clone());
                }
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("q,genus_lo,genus_hi,points,serre_bound,bonus_exact,curve\n");
        for e in self.entries.values() {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                e.q,
                e.genus_lower,
                e.genus_upper,
                e.points,
                e.serre_bound,
                e.bonus_exact,
                e.curve.form()
            ));
        }
        s
    }
}

pub const RESULTS_HEADER: &str =
    "degree,polynomial,q,plane_points,smooth_points,n_sing,bonus,bonus_exact,genus_lo,genus_hi,abs_irred\n";

fn csv_row(curve: &PlaneCurve, r: &CurveReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}\n",
        curve.degree(),
        curve.form(),
        r.q,
        r.plane_points,
        r.smooth_plane_points,
        r.singularities.len(),
        r.blowup_bonus_estimate,
        r.blowup_bonus_exact,
        r.genus_lower,
        r.genus_upper,
        r.abs_irreducible
    )
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub stats: OrbitStats,
    pub tally: TallyTable,
    /// Index of the next unprocessed representative.
    pub processed: u64,
    pub reports: Vec<(PlaneCurve, CurveReport)>,
    /// Why the run stopped early, if it did.
    pub truncated: Option<String>,
    pub resumed_from: Option<u64>,
}

impl SearchOutcome {
    pub fn complete(&self) -> bool {
        self.truncated.is_none()
    }
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"AGCKPT01";

#[derive(Clone, Debug, PartialEq, Eq)]
struct Checkpoint {
    degree: u32,
    fields: Vec<u32>,
    next: u64,
    csv_len: u64,
    tally: TallyTable,
}

impl Checkpoint {
    fn encode(&self) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(CHECKPOINT_MAGIC);
        b.extend_from_slice(&self.degree.to_le_bytes());
        b.extend_from_slice(&(self.fields.len() as u32).to_le_bytes());
        for f in &self.fields {
            b.extend_from_slice(&f.to_le_bytes());
        }
        b.extend_from_slice(&self.next.to_le_bytes());
        b.extend_from_slice(&self.csv_len.to_le_bytes());
        b.extend_from_slice(&(self.tally.entries.len() as u32).to_le_bytes());
        for e in self.tally.entries.values() {
            b.extend_from_slice(&e.q.to_le_bytes());
            b.extend_from_slice(&e.genus_lower.to_le_bytes());
            b.extend_from_slice(&e.genus_upper.to_le_bytes());
            b.extend_from_slice(&e.points.to_le_bytes());
            b.push(e.bonus_exact as u8);
            b.extend_from_slice(&e.curve.mask().to_le_bytes());
        }
        b
    }

    fn decode(bytes: &[u8]) -> Result<Self> {
        let bad = |what: &str| Error::Checkpoint(format!("truncated or corrupt checkpoint ({what})"));
        let mut pos = 0usize;
        let mut take = |n: usize, what: &str| -> Result<&[u8]> {
            let s = bytes.get(pos..pos + n).ok_or_else(|| bad(what))?;
            pos += n;
            Ok(s)
        };
        if take(8, "magic")? != CHECKPOINT_MAGIC {
            return Err(Error::Checkpoint("not a search checkpoint".into()));
        }
        let u32_ = |s: &[u8]| u32::from_le_bytes(s.try_into().unwrap());
        let u64_ = |s: &[u8]| u64::from_le_bytes(s.try_into().unwrap());
        let degree = u32_(take(4, "degree")?);
        let nf = u32_(take(4, "field count")?) as usize;
        let mut fields = Vec::with_capacity(nf);
        for _ in 0..nf {
            fields.push(u32_(take(4, "fields")?));
        }
        let next = u64_(take(8, "position")?);
        let csv_len = u64_(take(8, "csv length")?);
        let ne = u32_(take(4, "tally size")?) as usize;
        let mut tally = TallyTable::default();
        for _ in 0..ne {
            let q = u32_(take(4, "tally")?);
            let genus_lower = u64_(take(8, "tally")?);
            let genus_upper = u64_(take(8, "tally")?);
            let points = u64_(take(8, "tally")?);
            let bonus_exact = take(1, "tally")?[0] != 0;
            let mask = u32_(take(4, "tally")?);
            let curve = PlaneCurve::new(degree, mask).map_err(|_| bad("curve"))?;
            tally.entries.insert(
                (q, genus_lower, genus_upper),
                TallyEntry {
                    q,
                    genus_lower,
                    genus_upper,
                    points,
                    serre_bound: serre_bound(q as u64, genus_lower),
                    bonus_exact,
                    curve,
                },
            );
        }
        if pos != bytes.len() {
            return Err(bad("trailing bytes"));
        }
        Ok(Checkpoint { degree, fields, next, csv_len, tally })
    }

    fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = File::create(&tmp)?;
            f.write_all(&self.encode())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Runs the search described by `config`.
pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome> {
    if config.fields.is_empty() {
        return Err(Error::InvalidArgument("no fields to search".into()));
    }
    if config.chunk_size == 0 || config.max_representatives == Some(0) {
        return Err(Error::InvalidArgument("budgets must be positive".into()));
    }
    let mut truncated = None;
    let mut ms = Vec::new();
    for &m in &config.fields {
        if m > config.max_field_m {
            truncated = Some(format!("field GF(2^{m}) exceeds the budget m <= {}", config.max_field_m));
        } else {
            ms.push(m);
        }
    }
    ms.sort_unstable();
    ms.dedup();
    let fields: Vec<FieldSpec> = ms.iter().map(|&m| FieldSpec::cached(m)).collect::<Result<_>>()?;

    let (reps, stats) = enumerate_representatives(config.degree)?;

    let mut tally = TallyTable::default();
    let mut start = 0u64;
    let mut csv_len = 0u64;
    let mut resumed_from = None;
    if let Some(ck) = config.checkpoint.as_deref().filter(|p| p.exists()) {
        let mut bytes = Vec::new();
        File::open(ck)?.read_to_end(&mut bytes)?;
        let c = Checkpoint::decode(&bytes)?;
        if c.degree != config.degree || c.fields != ms {
            return Err(Error::Checkpoint(format!(
                "checkpoint is for degree {} fields {:?}, not degree {} fields {:?}",
                c.degree, c.fields, config.degree, ms
            )));
        }
        start = c.next;
        csv_len = c.csv_len;
        tally = c.tally;
        resumed_from = Some(start);
    }

    let mut csv = match &config.results_csv {
        None => None,
        Some(path) => {
            let mut f = OpenOptions::new().create(true).write(true).read(true).truncate(false).open(path)?;
            if resumed_from.is_some() {
                f.set_len(csv_len)?;
                f.seek(SeekFrom::End(0))?;
            } else {
                f.set_len(0)?;
                f.write_all(RESULTS_HEADER.as_bytes())?;
                csv_len = RESULTS_HEADER.len() as u64;
            }
            Some(BufWriter::new(f))
        }
    };

    let total = reps.len() as u64;
    let end = match config.max_representatives {
        Some(budget) if start + budget < total => {
            truncated.get_or_insert_with(|| {
                format!("stopped after {budget} representatives ({} of {total})", start + budget)
            });
            start + budget
        }
        _ => total,
    };

    let mut reports = Vec::new();
    let mut pos = start;
    while pos < end {
        let stop = (pos + config.chunk_size as u64).min(end);
        let chunk = &reps[pos as usize..stop as usize];
        let analysed: Vec<Vec<CurveReport>> =
            chunk.par_iter().map(|c| fields.iter().map(|f| analyze_with(c, f, false)).collect()).collect();
        for (curve, per_field) in chunk.iter().zip(analysed) {
            let mut abs: Option<AbsIrreducible> = None;
            for mut r in per_field {
                if tally.improves(&r) {
                    let a = *abs.get_or_insert_with(|| is_absolutely_irreducible(curve));
                    r.abs_irreducible = a;
                    if a == AbsIrreducible::Yes {
                        tally.offer(&r, *curve);
                    }
                } else if let Some(a) = abs {
                    r.abs_irreducible = a;
                }
                if let Some(w) = csv.as_mut() {
                    let row = csv_row(curve, &r);
                    w.write_all(row.as_bytes())?;
                    csv_len += row.len() as u64;
                }
                if config.keep_reports {
                    reports.push((*curve, r));
                }
            }
        }
        pos = stop;
        if let Some(w) = csv.as_mut() {
            w.flush()?;
        }
        if let Some(ck) = &config.checkpoint {
            Checkpoint { degree: config.degree, fields: ms.clone(), next: pos, csv_len, tally: tally.clone() }
                .save(ck)?;
        }
    }

    Ok(SearchOutcome { stats, tally, processed: pos, reports, truncated, resumed_from })
}
