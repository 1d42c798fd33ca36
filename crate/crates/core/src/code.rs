//! Linear codes over GF(2^m) given by generator matrices.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::field::{FieldElement, FieldSpec};
use crate::{Error, Result};

/// Default cap on the number of messages `q^k` enumerated for a distance.
pub const DEFAULT_WORK_LIMIT: u128 = 1 << 24;

/// A full-rank `k × n` generator matrix.
#[derive(Clone)]
pub struct GeneratorMatrix {
    field: FieldSpec,
    k: usize,
    n: usize,
    rows: Vec<Vec<u16>>,
}

impl fmt::Debug for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorMatrix(q={}, k={}, n={})", self.field.q(), self.k, self.n)
    }
}

/// Rank over GF(q) by Gaussian elimination.
pub fn rank(field: &FieldSpec, rows: &[Vec<u16>]) -> usize {
    let mut m: Vec<Vec<u16>> = rows.to_vec();
    let n = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = field.inv_raw(m[r][c]);
        for x in m[r].iter_mut() {
            *x = field.mul_raw(*x, inv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x ^= field.mul_raw(f, p);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

impl GeneratorMatrix {
    pub fn new(field: &FieldSpec, rows: Vec<Vec<u16>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidArgument("a generator matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidArgument("a generator matrix needs at least one column".into()));
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: r.len() });
            }
            if let Some(&bad) = r.iter().find(|&&x| x as u32 >= field.q()) {
                return Err(Error::NotInField { bits: bad as u32, q: field.q() });
            }
        }
        let rk = rank(field, &rows);
        if rk != k {
            return Err(Error::RankDeficient { rank: rk, rows: k });
        }
        Ok(GeneratorMatrix { field: field.clone(), k, n, rows })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u16>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        FieldElement(self.rows[i][j])
    }

    /// `msg · G`.
    pub fn encode(&self, msg: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: msg.len() });
        }
        let mut out = vec![0u16; self.n];
        for (c, row) in msg.iter().zip(&self.rows) {
            let c = self.field.element(c.0 as u32)?.0;
            if c == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o ^= self.field.mul_raw(c, g);
            }
        }
        Ok(out.into_iter().map(FieldElement).collect())
    }

    /// Whether both matrices generate the same subspace of GF(q)^n.
    pub fn same_row_space(&self, other: &GeneratorMatrix) -> Result<bool> {
        if self.field.q() != other.field.q() {
            return Err(Error::FieldMismatch { left: self.field.q(), right: other.field.q() });
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, got: other.n });
        }
        if self.k != other.k {
            return Ok(false);
        }
        let stacked: Vec<Vec<u16>> = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(rank(&self.field, &stacked) == self.k)
    }

    /// Exact minimum distance by enumerating all nonzero messages.
    ///
    /// Messages are walked as `m·k` bits in Gray-code order, so each step
    /// adds one precomputed vector `2^b · row_i` to the running codeword.
    /// The message space is split on its top bits across threads.
    pub fn min_distance_exhaustive(&self, work_limit: u128) -> Result<u64> {
        let m = self.field.m() as usize;
        let bits = m * self.k;
        let needed = if bits >= 127 { u128::MAX } else { 1u128 << bits };
        if needed > work_limit {
            return Err(Error::WorkLimit { needed, limit: work_limit });
        }
        let n = self.n;
        // steps[bit] = 2^(bit % m) * row[bit / m]
        let steps: Vec<Vec<u16>> = (0..bits)
            .map(|t| {
                let c = 1u16 << (t % m);
                self.rows[t / m].iter().map(|&g| self.field.mul_raw(c, g)).collect()
            })
            .collect();
        let top = bits.min(8);
        let low = bits - top;
        let best = (0u64..1 << top)
            .into_par_iter()
            .map(|prefix| {
                let mut word = vec![0u16; n];
                for t in 0..top {
                    if prefix >> t & 1 == 1 {
                        for (w, &s) in word.iter_mut().zip(&steps[low + t]) {
                            *w ^= s;
                        }
                    }
                }
                let mut weight = word.iter().filter(|&&x| x != 0).count() as u64;
                let mut best = if prefix == 0 { u64::MAX } else { weight };
                for step in 1u64..1 << low {
                    let s = &steps[step.trailing_zeros() as usize];
                    for (w, &d) in word.iter_mut().zip(s) {
                        if d != 0 {
                            let before = *w != 0;
                            *w ^= d;
                            let after = *w != 0;
                            weight = weight + after as u64 - before as u64;
                        }
                    }
                    best = best.min(weight);
                }
                best
            })
            .min()
            .unwrap_or(u64::MAX);
        Ok(best)
    }

    /// `q=<q>,k=<k>,n=<n>` followed by one line of integers per row.
    pub fn to_csv(&self) -> String {
        let mut s = format!("q={},k={},n={}\n", self.field.q(), self.k, self.n);
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty generator file".into()))?;
        let mut q = None;
        let mut k = None;
        let mut n = None;
        for part in header.split(',') {
            let (key, val) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field '{part}'")))?;
            let v: usize = val.trim().parse().map_err(|_| Error::Parse(format!("bad header value '{part}'")))?;
            match key.trim() {
                "q" => q = Some(v),
                "k" => k = Some(v),
                "n" => n = Some(v),
                other => return Err(Error::Parse(format!("unknown header key '{other}'"))),
            }
        }
        let (q, k, n) = match (q, k, n) {
            (Some(q), Some(k), Some(n)) => (q, k, n),
            _ => return Err(Error::Parse("header must give q, k and n".into())),
        };
        if !q.is_power_of_two() || q < 2 {
            return Err(Error::Parse(format!("q={q} is not a power of two")));
        }
        let field = FieldSpec::cached(q.trailing_zeros())?;
        let rows = lines
            .map(|l| {
                l.split(',')
                    .map(|x| x.trim().parse::<u16>().map_err(|_| Error::Parse(format!("bad entry '{x}'"))))
                    .collect::<Result<Vec<u16>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != k {
            return Err(Error::LengthMismatch { expected: k, got: rows.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: r.len() });
        }
        GeneratorMatrix::new(&field, rows)
    }

    pub fn params_with_exact_distance(&self, work_limit: u128) -> Result<CodeParams> {
        let d = self.min_distance_exhaustive(work_limit)?;
        CodeParams::new(self.n as u64, self.k as u64, Distance::Exact(d))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Distance {
    Exact(u64),
    LowerBound(u64),
}

impl Distance {
    pub fn value(&self) -> u64 {
        match *self {
            Distance::Exact(d) | Distance::LowerBound(d) => d,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Distance::Exact(_))
    }
}

/// An `[n, k, d]` triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: u64,
    pub k: u64,
    pub d: Distance,
}

impl CodeParams {
    pub fn new(n: u64, k: u64, d: Distance) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Range(format!("need 0 < k <= n, got k={k}, n={n}")));
        }
        if d.value() == 0 || d.value() > n {
            return Err(Error::Range(format!("need 1 <= d <= n, got d={}, n={n}", d.value())));
        }
        Ok(CodeParams { n, k, d })
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k, self.n)
    }

    pub fn delta(&self) -> Ratio<u64> {
        Ratio::new(self.d.value(), self.n)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.d.is_exact() { "" } else { ">=" };
        write!(f, "[{}, {}, {}{}]", self.n, self.k, rel, self.d.value())
    }
}

impl Serialize for CodeParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CodeParams", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("d", &self.d.value())?;
        st.serialize_field("d_exact", &self.d.is_exact())?;
        st.serialize_field("rate", &ratio_to_f64(self.rate()))?;
        st.serialize_field("delta", &ratio_to_f64(self.delta()))?;
        st.serialize_field("singleton_ok", &singleton_check(self))?;
        st.end()
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `n + 1 >= k + d`.
pub fn singleton_check(p: &CodeParams) -> bool {
    p.n + 1 >= p.k + p.d.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(m: u32) -> FieldSpec {
        FieldSpec::cached(m).unwrap()
    }

    #[test]
    fn repetition_code() {
        let g = GeneratorMatrix::new(&f(2), vec![vec![1; 7]]).unwrap();
        assert_eq!(g.min_distance_exhaustive(DEFAULT_WORK_LIMIT).unwrap(), 7);
    }

    #[test]
    fn rank_deficient_rejected() {
        let e = GeneratorMatrix::new(&f(1), vec![vec![1, 1, 0], vec![1, 1, 0]]).unwrap_err();
        assert_eq!(e, Error::RankDeficient { rank: 1, rows: 2 });
        assert!(GeneratorMatrix::new(&f(1), vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn encode_basics() {
        let field = f(3);
        let g = GeneratorMatrix::new(&field, vec![vec![1, 0, 3, 5], vec![0, 1, 7, 2]]).unwrap();
        let zero = g.encode(&[FieldElement(0), FieldElement(0)]).unwrap();
        assert!(zero.iter().all(|x| x.is_zero()));
        let e1 = g.encode(&[FieldElement(0), FieldElement(1)]).unwrap();
        assert_eq!(e1.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 1, 7, 2]);
        let a = [FieldElement(3), FieldElement(6)];
        let b = [FieldElement(5), FieldElement(1)];
        let ab = [FieldElement(3 ^ 5), FieldElement(6 ^ 1)];
        let sum: Vec<_> = g.encode(&a).unwrap().iter().zip(g.encode(&b).unwrap()).map(|(x, y)| x.0 ^ y.0).collect();
        assert_eq!(sum, g.encode(&ab).unwrap().iter().map(|x| x.0).collect::<Vec<_>>());
        assert!(g.encode(&[FieldElement(1)]).is_err());
    }

    #[test]
    fn distance_matches_naive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let m = rng.gen_range(1..=3);
            let field = f(m);
            let k = rng.gen_range(1..=3);
            let n = rng.gen_range(k..=8);
            let rows: Vec<Vec<u16>> =
                (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..field.q()) as u16).collect()).collect();
            let Ok(g) = GeneratorMatrix::new(&field, rows) else { continue };
            let q = field.q() as u64;
            let mut best = u64::MAX;
            for msg in 1..q.pow(k as u32) {
                let v: Vec<FieldElement> = (0..k).map(|i| FieldElement((msg / q.pow(i as u32) % q) as u16)).collect();
                let w = g.encode(&v).unwrap().iter().filter(|x| !x.is_zero()).count() as u64;
                best = best.min(w);
            }
            assert_eq!(g.min_distance_exhaustive(DEFAULT_WORK_LIMIT).unwrap(), best);
        }
    }

    #[test]
    fn work_limit_refuses() {
        let g = GeneratorMatrix::new(&f(4), vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]).unwrap();
        assert!(matches!(g.min_distance_exhaustive(100), Err(Error::WorkLimit { needed: 4096, limit: 100 })));
    }

    #[test]
    fn csv_round_trip() {
        let g = GeneratorMatrix::new(&f(2), vec![vec![1, 2, 3], vec![0, 1, 1]]).unwrap();
        let text = g.to_csv();
        assert!(text.starts_with("q=4,k=2,n=3\n"));
        let h = GeneratorMatrix::from_csv(&text).unwrap();
        assert_eq!(h.rows(), g.rows());
        assert!(GeneratorMatrix::from_csv("q=4,k=2,n=3\n1,2,3\n").is_err());
    }

    #[test]
    fn singleton_examples() {
        let p = |n, k, d| CodeParams::new(n, k, Distance::Exact(d)).unwrap();
        assert!(singleton_check(&p(3, 2, 2)));
        assert!(singleton_check(&p(9, 4, 4)));
        assert!(!singleton_check(&p(5, 3, 4)));
        assert!(CodeParams::new(3, 0, Distance::Exact(1)).is_err());
        assert!(CodeParams::new(3, 1, Distance::Exact(4)).is_err());
    }
}
