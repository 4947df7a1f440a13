//! Incidence matrices, the codes C_k(P) over GF(p), dual membership, rank and
//! nullspace, exhaustive weight scans, and file export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::polarspace::{Family, PolarSpace};
use crate::projspace::theta;

/// Version tag written into every JSON dump.
pub const SCHEMA: &str = "polar-code-lab/v1";

/// Largest number of rows an incidence matrix may have.
pub const MAX_ROWS: usize = 1_000_000;

/// Default cap on log2 of the dual code size for a full scan.
pub const DEFAULT_MAX_NULLITY: u32 = 24;

/// Points versus singular k-spaces. Each row lists the column indices of
/// the points of one k-space, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub rows: Vec<Vec<u32>>,
    pub n_cols: usize,
    pub p: u32,
    pub k: usize,
    /// Order of the field the geometry lives over.
    pub field_order: u64,
    pub label: String,
}

pub fn build_incidence(ps: &PolarSpace, k: usize) -> Result<IncidenceMatrix> {
    let lists = ps.kspace_points(k)?;
    if lists.len() > MAX_ROWS {
        return Err(Error::Resource(format!(
            "{} rows exceed the cap of {MAX_ROWS}",
            lists.len()
        )));
    }
    let rows = lists
        .into_iter()
        .map(|pts| {
            pts.into_iter()
                .map(|g| ps.local_index(g).expect("singular space lies on the polar space"))
                .collect::<Vec<u32>>()
        })
        .map(|mut r| {
            r.sort_unstable();
            r
        })
        .collect();
    Ok(IncidenceMatrix {
        rows,
        n_cols: ps.num_points(),
        p: ps.p(),
        k,
        field_order: ps.field().order() as u64,
        label: format!("C_{k}({})", ps.label()),
    })
}

impl IncidenceMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Integer column sums: the number of rows through each point.
    pub fn column_sums(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.n_cols];
        for r in &self.rows {
            for &c in r {
                out[c as usize] += 1;
            }
        }
        out
    }
}

/// Sparse vector over GF(p) indexed by point columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordVec {
    pub n_cols: usize,
    pub p: u32,
    entries: BTreeMap<u32, u32>,
}

impl CodewordVec {
    pub fn zero(n_cols: usize, p: u32) -> CodewordVec {
        CodewordVec {
            n_cols,
            p,
            entries: BTreeMap::new(),
        }
    }

    /// All-`symbol` vector on the given columns.
    pub fn indicator(n_cols: usize, p: u32, cols: impl IntoIterator<Item = u32>, symbol: u32) -> CodewordVec {
        let mut c = CodewordVec::zero(n_cols, p);
        for i in cols {
            c.set(i, symbol);
        }
        c
    }

    pub fn set(&mut self, col: u32, symbol: u32) {
        assert!((col as usize) < self.n_cols, "column {col} out of range");
        let s = symbol % self.p;
        if s == 0 {
            self.entries.remove(&col);
        } else {
            self.entries.insert(col, s);
        }
    }

    pub fn get(&self, col: u32) -> u32 {
        self.entries.get(&col).copied().unwrap_or(0)
    }

    /// Adds `symbol` to the entry at `col`.
    pub fn add_at(&mut self, col: u32, symbol: u32) {
        let v = (self.get(col) + symbol % self.p) % self.p;
        self.set(col, v);
    }

    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> Vec<u32> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().map(|(&i, &s)| (i, s))
    }

    /// self + scalar * other.
    pub fn add_scaled(&mut self, other: &CodewordVec, scalar: u32) {
        for (i, s) in other.iter() {
            self.add_at(i, s * (scalar % self.p));
        }
    }

    pub fn sum(&self, other: &CodewordVec) -> CodewordVec {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }
}

/// Outcome of a dual membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualCheck {
    Pass,
    /// First row with a nonzero inner product.
    Fail { row: usize, sum: u32 },
}

impl DualCheck {
    pub fn passed(&self) -> bool {
        matches!(self, DualCheck::Pass)
    }
}

pub fn is_dual_codeword(c: &CodewordVec, a: &IncidenceMatrix) -> Result<DualCheck> {
    if c.n_cols != a.n_cols || c.p != a.p {
        return param(format!(
            "vector of length {} over GF({}) against matrix with {} columns over GF({})",
            c.n_cols, c.p, a.n_cols, a.p
        ));
    }
    for (ri, r) in a.rows.iter().enumerate() {
        let s = r.iter().map(|&j| c.get(j)).sum::<u32>() % a.p;
        if s != 0 {
            return Ok(DualCheck::Fail { row: ri, sum: s });
        }
    }
    Ok(DualCheck::Pass)
}

/// Every row has exactly theta_k points.
pub fn primal_row_weight_check(a: &IncidenceMatrix) -> bool {
    let t = theta(a.k as i64, a.field_order) as usize;
    a.rows.iter().all(|r| r.len() == t)
}

// Dense linear algebra over GF(p).

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn binary_rref(rows: &mut Vec<Vec<u64>>, n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn modp_rref(rows: &mut Vec<Vec<u32>>, n: usize, p: u32) -> Vec<usize> {
    let inv: Vec<u32> = (0..p)
        .map(|a| (1..p).find(|&b| a * b % p == 1).unwrap_or(0))
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let s = inv[rows[r][c] as usize];
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[c];
            if i != r && f != 0 {
                for (x, &y) in row.iter_mut().zip(&pr) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Rank of A over GF(p) and a basis of its right nullspace, the dual code.
pub fn rank_and_nullspace(a: &IncidenceMatrix) -> (usize, Vec<CodewordVec>) {
    let n = a.n_cols;
    let p = a.p;
    let mut basis = Vec::new();
    if p == 2 {
        let mut rows: Vec<Vec<u64>> = a
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![0u64; words(n)];
                for &c in r {
                    v[c as usize / 64] ^= 1 << (c % 64);
                }
                v
            })
            .collect();
        let pivots = binary_rref(&mut rows, n);
        for free in (0..n).filter(|c| pivots.binary_search(c).is_err()) {
            let mut c = CodewordVec::zero(n, 2);
            c.set(free as u32, 1);
            for (row, &pc) in rows.iter().zip(&pivots) {
                if row[free / 64] >> (free % 64) & 1 == 1 {
                    c.set(pc as u32, 1);
                }
            }
            basis.push(c);
        }
        (pivots.len(), basis)
    } else {
        let mut rows: Vec<Vec<u32>> = a
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![0u32; n];
                for &c in r {
                    v[c as usize] = (v[c as usize] + 1) % p;
                }
                v
            })
            .collect();
        let pivots = modp_rref(&mut rows, n, p);
        for free in (0..n).filter(|c| pivots.binary_search(c).is_err()) {
            let mut c = CodewordVec::zero(n, p);
            c.set(free as u32, 1);
            for (row, &pc) in rows.iter().zip(&pivots) {
                c.set(pc as u32, (p - row[free]) % p);
            }
            basis.push(c);
        }
        (pivots.len(), basis)
    }
}

/// Options for `scan_dual_weights`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanOptions {
    /// A full scan runs when p^nullity <= 2^max_nullity.
    pub max_nullity: u32,
    /// Inclusive weight window for the histogram; None means all weights.
    pub window: Option<(u64, u64)>,
    /// When the full scan is infeasible, enumerate combinations of at most
    /// this many basis vectors instead of refusing.
    pub partial_support: Option<usize>,
    /// Weights whose vectors should be returned.
    pub collect_weights: Vec<u64>,
    /// Cap on returned vectors.
    pub collect_limit: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            max_nullity: DEFAULT_MAX_NULLITY,
            window: None,
            partial_support: None,
            collect_weights: Vec::new(),
            collect_limit: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanMode {
    /// Every vector of the dual code was visited.
    Full,
    /// Only combinations of at most this many basis vectors were visited.
    Partial(usize),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub mode: ScanMode,
    pub rank: usize,
    pub nullity: usize,
    /// Number of visited vectors, the zero vector included.
    pub visited: u128,
    /// Weight histogram restricted to the window.
    pub histogram: BTreeMap<u64, u64>,
    pub min_nonzero: Option<u64>,
    pub max_weight: u64,
    #[serde(skip)]
    pub collected: Vec<CodewordVec>,
}

impl ScanReport {
    pub fn mode_label(&self) -> String {
        match self.mode {
            ScanMode::Full => "FULL".to_string(),
            ScanMode::Partial(t) => format!("PARTIAL (combinations of at most {t} basis vectors)"),
        }
    }
}

#[derive(Default)]
struct Acc {
    hist: BTreeMap<u64, u64>,
    min_nonzero: Option<u64>,
    max: u64,
    visited: u128,
    collected: Vec<Vec<u32>>,
}

impl Acc {
    fn record(&mut self, w: u64, opts: &ScanOptions, vector: impl FnOnce() -> Vec<u32>) {
        self.visited += 1;
        if w > 0 {
            self.min_nonzero = Some(self.min_nonzero.map_or(w, |m| m.min(w)));
        }
        self.max = self.max.max(w);
        if opts.window.is_none_or(|(lo, hi)| lo <= w && w <= hi) {
            *self.hist.entry(w).or_default() += 1;
        }
        if opts.collect_weights.contains(&w) && self.collected.len() < opts.collect_limit {
            self.collected.push(vector());
        }
    }

    fn merge(mut self, other: Acc, limit: usize) -> Acc {
        for (w, c) in other.hist {
            *self.hist.entry(w).or_default() += c;
        }
        self.min_nonzero = match (self.min_nonzero, other.min_nonzero) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = self.max.max(other.max);
        self.visited += other.visited;
        for v in other.collected {
            if self.collected.len() < limit {
                self.collected.push(v);
            }
        }
        self
    }
}

fn bits_to_dense(bits: &[u64], n: usize) -> Vec<u32> {
    (0..n).map(|i| (bits[i / 64] >> (i % 64) & 1) as u32).collect()
}

fn scan_binary_full(basis: &[Vec<u64>], n: usize, opts: &ScanOptions) -> Acc {
    let k = basis.len();
    let top = k.min(10);
    let low = k - top;
    let nw = words(n);
    let chunks: Vec<u64> = (0..1u64 << top).collect();
    chunks
        .into_par_iter()
        .map(|hi| {
            let mut acc = Acc::default();
            let mut cur = vec![0u64; nw];
            for j in 0..top {
                if hi >> j & 1 == 1 {
                    for (x, y) in cur.iter_mut().zip(&basis[low + j]) {
                        *x ^= y;
                    }
                }
            }
            let weight = |v: &[u64]| v.iter().map(|x| x.count_ones() as u64).sum::<u64>();
            acc.record(weight(&cur), opts, || bits_to_dense(&cur, n));
            for i in 1u64..(1u64 << low) {
                let b = i.trailing_zeros() as usize;
                for (x, y) in cur.iter_mut().zip(&basis[b]) {
                    *x ^= y;
                }
                acc.record(weight(&cur), opts, || bits_to_dense(&cur, n));
            }
            acc
        })
        .reduce(Acc::default, |a, b| a.merge(b, opts.collect_limit))
}

fn scan_modp_full(basis: &[Vec<u32>], n: usize, p: u32, opts: &ScanOptions) -> Acc {
    let k = basis.len();
    let top = k.min(4);
    let low = k - top;
    let chunks: Vec<u64> = (0..(p as u64).pow(top as u32)).collect();
    chunks
        .into_par_iter()
        .map(|hi| {
            let mut acc = Acc::default();
            let mut cur = vec![0u32; n];
            let mut rest = hi;
            for j in 0..top {
                let d = (rest % p as u64) as u32;
                rest /= p as u64;
                for (x, &y) in cur.iter_mut().zip(&basis[low + j]) {
                    *x = (*x + d * y) % p;
                }
            }
            let weight = |v: &[u32]| v.iter().filter(|&&x| x != 0).count() as u64;
            acc.record(weight(&cur), opts, || cur.clone());
            let mut digits = vec![0u32; low];
            loop {
                // odometer step: wrapping digits add their vector once more
                let mut j = 0;
                while j < low {
                    for (x, &y) in cur.iter_mut().zip(&basis[j]) {
                        *x = (*x + y) % p;
                    }
                    digits[j] += 1;
                    if digits[j] == p {
                        digits[j] = 0;
                        j += 1;
                    } else {
                        break;
                    }
                }
                if j == low {
                    break;
                }
                acc.record(weight(&cur), opts, || cur.clone());
            }
            acc
        })
        .reduce(Acc::default, |a, b| a.merge(b, opts.collect_limit))
}

fn scan_partial(basis: &[Vec<u32>], n: usize, p: u32, t: usize, opts: &ScanOptions) -> Acc {
    // all combinations with between 0 and t nonzero coefficients
    fn rec(
        basis: &[Vec<u32>],
        start: usize,
        left: usize,
        cur: &mut Vec<u32>,
        p: u32,
        acc: &mut Acc,
        opts: &ScanOptions,
    ) {
        let w = cur.iter().filter(|&&x| x != 0).count() as u64;
        acc.record(w, opts, || cur.clone());
        if left == 0 {
            return;
        }
        for i in start..basis.len() {
            for coef in 1..p {
                let saved = cur.clone();
                for (x, &y) in cur.iter_mut().zip(&basis[i]) {
                    *x = (*x + coef * y) % p;
                }
                rec(basis, i + 1, left - 1, cur, p, acc, opts);
                *cur = saved;
            }
        }
    }
    let mut acc = Acc::default();
    let mut cur = vec![0u32; n];
    rec(basis, 0, t, &mut cur, p, &mut acc, opts);
    acc
}

/// Weight distribution of C_k(P)^perp, exhaustive when small enough.
pub fn scan_dual_weights(a: &IncidenceMatrix, opts: &ScanOptions) -> Result<ScanReport> {
    if let Some((lo, hi)) = opts.window {
        if lo > hi {
            return Err(Error::ScanRefused(format!("empty weight window [{lo}, {hi}]")));
        }
    }
    let (rank, basis) = rank_and_nullspace(a);
    let nullity = basis.len();
    let n = a.n_cols;
    let p = a.p;
    let log2_size = nullity as f64 * (p as f64).log2();
    let full = log2_size <= opts.max_nullity as f64 + 1e-9;
    let dense: Vec<Vec<u32>> = basis
        .iter()
        .map(|c| (0..n as u32).map(|i| c.get(i)).collect())
        .collect();
    let (acc, mode) = if full {
        let acc = if p == 2 {
            let packed: Vec<Vec<u64>> = dense
                .iter()
                .map(|v| {
                    let mut w = vec![0u64; words(n)];
                    for (i, &x) in v.iter().enumerate() {
                        if x == 1 {
                            w[i / 64] |= 1 << (i % 64);
                        }
                    }
                    w
                })
                .collect();
            scan_binary_full(&packed, n, opts)
        } else {
            scan_modp_full(&dense, n, p, opts)
        };
        (acc, ScanMode::Full)
    } else if let Some(t) = opts.partial_support {
        (scan_partial(&dense, n, p, t.min(nullity), opts), ScanMode::Partial(t.min(nullity)))
    } else {
        return Err(Error::ScanRefused(format!(
            "dual code of {} has {p}^{nullity} vectors, above the full-scan limit 2^{}; \
             request a partial scan",
            a.label, opts.max_nullity
        )));
    };
    let collected = acc
        .collected
        .into_iter()
        .map(|v| {
            let mut c = CodewordVec::zero(n, p);
            for (i, &x) in v.iter().enumerate() {
                c.set(i as u32, x);
            }
            c
        })
        .collect();
    Ok(ScanReport {
        mode,
        rank,
        nullity,
        visited: acc.visited,
        histogram: acc.hist,
        min_nonzero: acc.min_nonzero,
        max_weight: acc.max,
        collected,
    })
}

/// The alist text of a binary matrix.
pub fn alist_string(a: &IncidenceMatrix) -> Result<String> {
    if a.p != 2 {
        return param(format!("alist export needs p = 2, got {}", a.p));
    }
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); a.n_cols];
    for (ri, r) in a.rows.iter().enumerate() {
        for &c in r {
            cols[c as usize].push(ri + 1);
        }
    }
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = a.rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut s = String::new();
    let join = |xs: &mut dyn Iterator<Item = usize>| {
        xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    writeln!(s, "{} {}", a.n_cols, a.n_rows()).unwrap();
    writeln!(s, "{max_col} {max_row}").unwrap();
    writeln!(s, "{}", join(&mut cols.iter().map(Vec::len))).unwrap();
    writeln!(s, "{}", join(&mut a.rows.iter().map(Vec::len))).unwrap();
    for c in &cols {
        let mut it = c.iter().copied().chain(std::iter::repeat(0)).take(max_col);
        writeln!(s, "{}", join(&mut it)).unwrap();
    }
    for r in &a.rows {
        let mut it = r
            .iter()
            .map(|&c| c as usize + 1)
            .chain(std::iter::repeat(0))
            .take(max_row);
        writeln!(s, "{}", join(&mut it)).unwrap();
    }
    Ok(s)
}

pub fn export_alist(a: &IncidenceMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, alist_string(a)?)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryInfo {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub k: usize,
    pub p: u32,
    pub label: String,
}

/// JSON form of a geometry and its k-spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryDoc {
    pub schema: String,
    pub geometry: GeometryInfo,
    pub points: Vec<Vec<u32>>,
    pub kspaces: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordBody {
    pub n_cols: usize,
    pub p: u32,
    pub support: Vec<(u32, u32)>,
}

/// JSON form of a codeword.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordDoc {
    pub schema: String,
    pub codeword: CodewordBody,
}

pub fn geometry_doc(ps: &PolarSpace, a: &IncidenceMatrix) -> GeometryDoc {
    GeometryDoc {
        schema: SCHEMA.to_string(),
        geometry: GeometryInfo {
            family: ps.family(),
            n: ps.n(),
            q: ps.q(),
            k: a.k,
            p: a.p,
            label: ps.label(),
        },
        points: ps
            .points()
            .iter()
            .map(|&g| ps.pg().point(g).iter().map(|e| e.rep()).collect())
            .collect(),
        kspaces: a.rows.clone(),
    }
}

impl GeometryDoc {
    pub fn to_matrix(&self) -> Result<IncidenceMatrix> {
        if self.schema != SCHEMA {
            return param(format!("unknown schema {:?}", self.schema));
        }
        let n_cols = self.points.len();
        if self.kspaces.iter().flatten().any(|&c| c as usize >= n_cols) {
            return param("k-space refers to a missing point");
        }
        let order = if self.geometry.family == Family::Hermitian {
            self.geometry.q * self.geometry.q
        } else {
            self.geometry.q
        };
        Ok(IncidenceMatrix {
            rows: self.kspaces.clone(),
            n_cols,
            p: self.geometry.p,
            k: self.geometry.k,
            field_order: order,
            label: format!("C_{}({})", self.geometry.k, self.geometry.label),
        })
    }
}

pub fn codeword_doc(c: &CodewordVec) -> CodewordDoc {
    CodewordDoc {
        schema: SCHEMA.to_string(),
        codeword: CodewordBody {
            n_cols: c.n_cols,
            p: c.p,
            support: c.iter().collect(),
        },
    }
}

impl CodewordDoc {
    pub fn to_codeword(&self) -> Result<CodewordVec> {
        if self.schema != SCHEMA {
            return param(format!("unknown schema {:?}", self.schema));
        }
        let b = &self.codeword;
        let mut c = CodewordVec::zero(b.n_cols, b.p);
        for &(i, s) in &b.support {
            if i as usize >= b.n_cols || s == 0 || s >= b.p {
                return param(format!("bad support entry ({i}, {s})"));
            }
            c.set(i, s);
        }
        Ok(c)
    }
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let s = serde_json::to_string_pretty(value)?;
    std::fs::write(path, s + "\n")?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let s = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(rows: Vec<Vec<u32>>, n: usize, p: u32) -> IncidenceMatrix {
        IncidenceMatrix {
            rows,
            n_cols: n,
            p,
            k: 1,
            field_order: 2,
            label: "test".into(),
        }
    }

    #[test]
    fn single_row_nullity() {
        let a = tiny(vec![vec![0, 2, 5]], 7, 2);
        let (rank, basis) = rank_and_nullspace(&a);
        assert_eq!(rank, 1);
        assert_eq!(basis.len(), 6);
        for b in &basis {
            assert!(is_dual_codeword(b, &a).unwrap().passed());
        }
    }

    #[test]
    fn odd_characteristic_nullspace() {
        let a = tiny(vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 4]], 5, 3);
        let (rank, basis) = rank_and_nullspace(&a);
        assert_eq!(rank + basis.len(), 5);
        for b in &basis {
            assert!(is_dual_codeword(b, &a).unwrap().passed());
        }
    }

    #[test]
    fn dual_check_failures() {
        let a = tiny(vec![vec![0, 1, 2]], 3, 2);
        let c = CodewordVec::indicator(3, 2, [1], 1);
        assert_eq!(is_dual_codeword(&c, &a).unwrap(), DualCheck::Fail { row: 0, sum: 1 });
        assert!(is_dual_codeword(&CodewordVec::zero(4, 2), &a).is_err());
        assert!(is_dual_codeword(&CodewordVec::zero(3, 2), &a).unwrap().passed());
    }

    #[test]
    fn scan_counts_every_vector_once() {
        let a = tiny(vec![vec![0, 1, 2], vec![2, 3, 4]], 6, 2);
        let r = scan_dual_weights(&a, &ScanOptions::default()).unwrap();
        assert_eq!(r.visited, 1 << r.nullity);
        assert_eq!(r.histogram.get(&0), Some(&1));
        let b = tiny(vec![vec![0, 1, 2], vec![2, 3, 4]], 6, 3);
        let r = scan_dual_weights(&b, &ScanOptions::default()).unwrap();
        assert_eq!(r.visited, 3u128.pow(r.nullity as u32));
        assert_eq!(r.histogram.get(&0), Some(&1));
    }

    #[test]
    fn scan_refuses_or_goes_partial() {
        let a = tiny(vec![vec![0, 1]], 30, 2);
        let opts = ScanOptions {
            max_nullity: 10,
            ..Default::default()
        };
        assert!(matches!(scan_dual_weights(&a, &opts), Err(Error::ScanRefused(_))));
        let opts = ScanOptions {
            max_nullity: 10,
            partial_support: Some(1),
            ..Default::default()
        };
        let r = scan_dual_weights(&a, &opts).unwrap();
        assert_eq!(r.mode, ScanMode::Partial(1));
        assert_eq!(r.visited, 1 + 29);
    }

    #[test]
    fn alist_layout() {
        let a = tiny(vec![vec![0, 1], vec![1, 2]], 3, 2);
        let s = alist_string(&a).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "3 2");
        assert_eq!(lines[1], "2 2");
        assert_eq!(lines[2], "1 2 1");
        assert_eq!(lines[3], "2 2");
        assert_eq!(lines[4], "1 0");
        assert_eq!(lines[5], "1 2");
        assert_eq!(lines[6], "2 0");
        assert_eq!(lines[7], "1 2");
        assert_eq!(lines[8], "2 3");
        assert!(alist_string(&tiny(vec![], 3, 3)).is_err());
    }
}
