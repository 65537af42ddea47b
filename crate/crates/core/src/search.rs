//! Exhaustive search for QT quadruples of a given length, up to
//! Williamson-type equivalence.
//!
//! The driver walks every four-square decomposition of `4n` with the parity
//! of `n`, builds the pools of binary sequences per rowsum, pairs the largest
//! rowsum with the smallest, filters pairs by a PSD sum bound and by CPSD
//! amicability, and matches the two pair lists on rounded PSD-sum keys. Key
//! collisions are assembled into candidate quadruples and kept only when the
//! exact integer correlation conditions hold, so the floating-point filters
//! can never introduce a wrong result, only discard hopeless candidates.

use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use smallvec::SmallVec;
use thiserror::Error;

use crate::equiv::{self, Group};
use crate::seq::{BinarySeq, Quadruple};

/// Tolerance for the CPSD amicability filter.
pub const CPSD_TOL: f64 = 1e-4;
/// Slack for PSD bound comparisons against `4n`.
const PSD_EPS: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("rowsum {r} is infeasible for length {n}")]
    InfeasibleRowsum { n: usize, r: i64 },
    #[error("pair stream is not sorted (order violation)")]
    UnsortedInput,
    #[error("malformed pair line {0:?}")]
    BadPairLine(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A sorted decomposition `w >= x >= y >= z >= 0` of `4n` into four squares
/// with all parts congruent to `n` mod 2.
pub type Decomposition = [i64; 4];

/// All rowsum decompositions admissible for length `n`.
pub fn four_square_decompositions(n: usize) -> Vec<Decomposition> {
    let target = 4 * n as i64;
    let parity = (n % 2) as i64;
    let mut out = Vec::new();
    let max = (target as f64).sqrt() as i64 + 1;
    for w in (0..=max).rev() {
        if w * w > target || w % 2 != parity {
            continue;
        }
        for x in (0..=w).rev() {
            let sx = w * w + x * x;
            if sx > target || x % 2 != parity {
                continue;
            }
            for y in (0..=x).rev() {
                let sy = sx + y * y;
                if sy > target || y % 2 != parity {
                    continue;
                }
                for z in (0..=y).rev() {
                    if z % 2 != parity {
                        continue;
                    }
                    if sy + z * z == target {
                        out.push([w, x, y, z]);
                    }
                }
            }
        }
    }
    out
}

/// A pool of binary sequences sharing a rowsum, with their spectra laid out
/// flat for the pair scan.
pub struct Pool {
    pub rowsum: i64,
    pub seqs: Vec<BinarySeq>,
    half: usize,
    psd: Vec<f64>,
    dft_re: Vec<f64>,
    dft_im: Vec<f64>,
}

impl Pool {
    /// Builds the pool of all sequences of length `n` with the given rowsum
    /// whose PSD values are all at most `4n`.
    pub fn build(n: usize, rowsum: i64) -> Result<Pool, SearchError> {
        let seqs = sequences_with_rowsum(n, rowsum)?;
        Ok(Pool::from_seqs(n, rowsum, seqs))
    }

    fn from_seqs(n: usize, rowsum: i64, seqs: Vec<BinarySeq>) -> Pool {
        let half = n / 2;
        let bound = 4.0 * n as f64 + PSD_EPS;
        let seqs: Vec<BinarySeq> = seqs
            .into_iter()
            .filter(|s| s.spectrum().psd.iter().all(|&p| p <= bound))
            .collect();
        let stride = half + 1;
        let mut psd = Vec::with_capacity(seqs.len() * stride);
        let mut dft_re = Vec::with_capacity(seqs.len() * stride);
        let mut dft_im = Vec::with_capacity(seqs.len() * stride);
        for s in &seqs {
            let sp = s.spectrum();
            for t in 0..stride {
                psd.push(sp.psd[t]);
                dft_re.push(sp.dft[t].re);
                dft_im.push(sp.dft[t].im);
            }
        }
        Pool { rowsum, seqs, half, psd, dft_re, dft_im }
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }
}

/// All binary sequences of length `n` with the given rowsum, generated by
/// lexicographically increasing positions of the `-1` entries.
pub fn sequences_with_rowsum(n: usize, r: i64) -> Result<Vec<BinarySeq>, SearchError> {
    let infeasible = r.unsigned_abs() as usize > n || (n as i64 - r) % 2 != 0;
    if infeasible {
        return Err(SearchError::InfeasibleRowsum { n, r });
    }
    let k = ((n as i64 - r) / 2) as usize; // number of -1 entries
    let mut out = Vec::new();
    let mut positions: Vec<usize> = (0..k).collect();
    loop {
        let mut entries = vec![1i8; n];
        for &p in &positions {
            entries[p] = -1;
        }
        out.push(BinarySeq::new(entries).unwrap());
        if k == 0 {
            break;
        }
        // advance to the next k-combination of 0..n
        let mut i = k - 1;
        while positions[i] == i + n - k {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
        }
        positions[i] += 1;
        for j in (i + 1)..k {
            positions[j] = positions[j - 1] + 1;
        }
    }
    Ok(out)
}

/// The per-shift matching key of a surviving pair plus the indices of the
/// sequences that produced it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairRec {
    pub key: SmallVec<[i64; 12]>,
    pub i: u32,
    pub j: u32,
}

impl PairRec {
    /// Line format: key integers space-separated, `|`, then the two indices.
    pub fn to_line(&self) -> String {
        let mut s = String::new();
        for k in self.key.iter() {
            s.push_str(&k.to_string());
            s.push(' ');
        }
        s.push_str(&format!("| {} {}", self.i, self.j));
        s
    }

    pub fn from_line(line: &str) -> Result<PairRec, SearchError> {
        let bad = || SearchError::BadPairLine(line.to_string());
        let (keys, idx) = line.split_once('|').ok_or_else(bad)?;
        let key: SmallVec<[i64; 12]> = keys
            .split_whitespace()
            .map(|v| v.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let mut it = idx.split_whitespace();
        let i = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let j = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        Ok(PairRec { key, i, j })
    }
}

/// Whether keys store the rounded PSD sums directly or their complement
/// to `4n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyKind {
    Sum,
    Complement,
}

/// Scans the Cartesian product of two pools, keeping pairs that pass the PSD
/// sum bound and the CPSD amicability filter, and attaching match keys.
///
/// Returns the surviving records (unsorted) and the raw pair count.
pub fn amicable_pairs(a: &Pool, b: &Pool, n: usize, kind: KeyKind) -> (Vec<PairRec>, u64) {
    let half = a.half;
    let stride = half + 1;
    let bound = 4.0 * n as f64 + PSD_EPS;
    let four_n = 4.0 * n as f64;
    let raw = a.len() as u64 * b.len() as u64;

    let recs: Vec<PairRec> = (0..a.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let pa = &a.psd[i * stride..(i + 1) * stride];
            let ra = &a.dft_re[i * stride..(i + 1) * stride];
            let ia = &a.dft_im[i * stride..(i + 1) * stride];
            let mut local = Vec::new();
            'pair: for j in 0..b.len() {
                let pb = &b.psd[j * stride..(j + 1) * stride];
                let rb = &b.dft_re[j * stride..(j + 1) * stride];
                let ib = &b.dft_im[j * stride..(j + 1) * stride];
                for t in 1..=half {
                    if pa[t] + pb[t] > bound {
                        continue 'pair;
                    }
                    // CPSD_{A,B}(t) - CPSD_{B,A}(t) = 2i Im(DFT_A conj(DFT_B))
                    let im = ia[t] * rb[t] - ra[t] * ib[t];
                    if 2.0 * im.abs() > CPSD_TOL {
                        continue 'pair;
                    }
                }
                let key: SmallVec<[i64; 12]> = (1..=half)
                    .map(|t| {
                        let s = pa[t] + pb[t];
                        match kind {
                            KeyKind::Sum => s.round() as i64,
                            KeyKind::Complement => (four_n - s).round() as i64,
                        }
                    })
                    .collect();
                local.push(PairRec { key, i: i as u32, j: j as u32 });
            }
            local
        })
        .collect();
    (recs, raw)
}

/// A sorted list of pair records, either in memory or spilled to disk runs.
pub enum SortedPairs {
    Mem(Vec<PairRec>),
    Ext { runs: Vec<PathBuf>, dir: tempfile::TempDir },
}

impl SortedPairs {
    /// Sorts the records within the memory budget, writing sorted runs of an
    /// external merge sort to a temp directory when the estimate exceeds it.
    pub fn sort(mut recs: Vec<PairRec>, mem_budget: usize) -> Result<SortedPairs, SearchError> {
        let rec_size = |r: &PairRec| 32 + r.key.len() * 8;
        let total: usize = recs.iter().map(rec_size).sum();
        if total <= mem_budget {
            recs.sort_unstable();
            return Ok(SortedPairs::Mem(recs));
        }
        let dir = tempfile::tempdir()?;
        let per_run = (mem_budget / 2).max(1 << 10);
        let mut runs: Vec<PathBuf> = Vec::new();
        let mut chunk: Vec<PairRec> = Vec::new();
        let mut chunk_bytes = 0usize;
        let mut flush = |chunk: &mut Vec<PairRec>,
                         runs: &mut Vec<PathBuf>|
         -> Result<(), SearchError> {
            if chunk.is_empty() {
                return Ok(());
            }
            chunk.sort_unstable();
            let path = dir.path().join(format!("run{}.txt", runs.len()));
            let mut w = BufWriter::new(File::create(&path)?);
            for r in chunk.iter() {
                writeln!(w, "{}", r.to_line())?;
            }
            w.flush()?;
            runs.push(path);
            chunk.clear();
            Ok(())
        };
        for rec in recs.drain(..) {
            chunk_bytes += rec_size(&rec);
            chunk.push(rec);
            if chunk_bytes > per_run {
                flush(&mut chunk, &mut runs)?;
                chunk_bytes = 0;
            }
        }
        flush(&mut chunk, &mut runs)?;
        Ok(SortedPairs::Ext { runs, dir })
    }

    pub fn into_iter(self) -> Result<PairIter, SearchError> {
        match self {
            SortedPairs::Mem(v) => Ok(PairIter::Mem(v.into_iter())),
            SortedPairs::Ext { runs, dir } => {
                let mut readers = Vec::new();
                for path in &runs {
                    readers.push(BufReader::new(File::open(path)?).lines());
                }
                let mut heap = BinaryHeap::new();
                for (idx, r) in readers.iter_mut().enumerate() {
                    if let Some(line) = r.next() {
                        let rec = PairRec::from_line(&line?)?;
                        heap.push(std::cmp::Reverse((rec, idx)));
                    }
                }
                Ok(PairIter::Ext { readers, heap, _dir: dir })
            }
        }
    }
}

/// Iterator over sorted pair records.
pub enum PairIter {
    Mem(std::vec::IntoIter<PairRec>),
    Ext {
        readers: Vec<std::io::Lines<BufReader<File>>>,
        heap: BinaryHeap<std::cmp::Reverse<(PairRec, usize)>>,
        _dir: tempfile::TempDir,
    },
}

impl Iterator for PairIter {
    type Item = Result<PairRec, SearchError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            PairIter::Mem(it) => it.next().map(Ok),
            PairIter::Ext { readers, heap, .. } => {
                let std::cmp::Reverse((rec, idx)) = heap.pop()?;
                match readers[idx].next() {
                    Some(Ok(line)) => match PairRec::from_line(&line) {
                        Ok(next) => heap.push(std::cmp::Reverse((next, idx))),
                        Err(e) => return Some(Err(e)),
                    },
                    Some(Err(e)) => return Some(Err(e.into())),
                    None => {}
                }
                Some(Ok(rec))
            }
        }
    }
}

/// The four pools of one decomposition, in quadruple order `(W, X, Y, Z)`.
pub struct DecompositionPools {
    pub w: Pool,
    pub x: Pool,
    pub y: Pool,
    pub z: Pool,
}

/// Linearly co-scans two sorted key streams; every key collision contributes
/// the Cartesian product of its pairs, assembled as `(W, X, Y, Z)` and kept
/// only when the exact QT check passes.
///
/// Also reports how many candidate quadruples were checked.
pub fn match_and_verify(
    l1: PairIter,
    l2: PairIter,
    pools: &DecompositionPools,
) -> Result<(Vec<Quadruple>, u64), SearchError> {
    let mut out = Vec::new();
    let mut checked = 0u64;
    let mut g1 = GroupScanner::new(l1);
    let mut g2 = GroupScanner::new(l2);
    let mut cur1 = g1.next_group()?;
    let mut cur2 = g2.next_group()?;
    while let (Some(b1), Some(b2)) = (&cur1, &cur2) {
        match b1.key.cmp(&b2.key) {
            std::cmp::Ordering::Less => cur1 = g1.next_group()?,
            std::cmp::Ordering::Greater => cur2 = g2.next_group()?,
            std::cmp::Ordering::Equal => {
                for &(iw, iz) in &b1.pairs {
                    for &(ix, iy) in &b2.pairs {
                        checked += 1;
                        let quad = Quadruple::new([
                            pools.w.seqs[iw as usize].clone(),
                            pools.x.seqs[ix as usize].clone(),
                            pools.y.seqs[iy as usize].clone(),
                            pools.z.seqs[iz as usize].clone(),
                        ])
                        .expect("pool sequences share a length");
                        if quad.is_qt() {
                            out.push(quad);
                        }
                    }
                }
                cur1 = g1.next_group()?;
                cur2 = g2.next_group()?;
            }
        }
    }
    Ok((out, checked))
}

struct KeyGroup {
    key: SmallVec<[i64; 12]>,
    pairs: Vec<(u32, u32)>,
}

/// Groups consecutive equal keys, verifying the sort order as it goes.
struct GroupScanner {
    it: PairIter,
    pending: Option<PairRec>,
}

impl GroupScanner {
    fn new(it: PairIter) -> Self {
        GroupScanner { it, pending: None }
    }

    fn next_group(&mut self) -> Result<Option<KeyGroup>, SearchError> {
        let first = match self.pending.take() {
            Some(r) => r,
            None => match self.it.next() {
                Some(r) => r?,
                None => return Ok(None),
            },
        };
        let mut group = KeyGroup { key: first.key.clone(), pairs: vec![(first.i, first.j)] };
        loop {
            match self.it.next() {
                Some(rec) => {
                    let rec = rec?;
                    match rec.key.cmp(&group.key) {
                        std::cmp::Ordering::Less => return Err(SearchError::UnsortedInput),
                        std::cmp::Ordering::Equal => group.pairs.push((rec.i, rec.j)),
                        std::cmp::Ordering::Greater => {
                            self.pending = Some(rec);
                            return Ok(Some(group));
                        }
                    }
                }
                None => return Ok(Some(group)),
            }
        }
    }
}

/// Search tuning knobs.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Memory budget in bytes for each sorted pair list before spilling to a
    /// disk-backed external merge sort.
    pub mem_budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { mem_budget: 1 << 30 }
    }
}

/// Per-decomposition counters.
#[derive(Clone, Debug)]
pub struct DecompositionStats {
    pub rowsums: Decomposition,
    pub pool_sizes: [usize; 4],
    pub pairs_raw: u64,
    pub pairs_filtered: u64,
    pub candidates_checked: u64,
    pub quadruples_found: usize,
}

/// Result of one exhaustive run.
#[derive(Debug)]
pub struct SearchOutcome {
    pub n: usize,
    pub quadruples: Vec<Quadruple>,
    pub stats: Vec<DecompositionStats>,
}

impl SearchOutcome {
    /// Total pairs surviving both spectral filters, over all decompositions.
    pub fn pairs_filtered(&self) -> u64 {
        self.stats.iter().map(|s| s.pairs_filtered).sum()
    }

    /// Total pairs generated before filtering.
    pub fn pairs_raw(&self) -> u64 {
        self.stats.iter().map(|s| s.pairs_raw).sum()
    }
}

/// Enumerates all QT quadruples of length `n` whose rowsums are nonnegative
/// and sorted descending; the output is complete up to Williamson-type
/// equivalence (duplicates within a class are possible).
pub fn enumerate_wt(n: usize, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let mut quadruples = Vec::new();
    let mut stats = Vec::new();
    for decomp in four_square_decompositions(n) {
        let [w, x, y, z] = decomp;
        // The largest and smallest rowsums share a pair.
        let pools = DecompositionPools {
            w: Pool::build(n, w)?,
            x: Pool::build(n, x)?,
            y: Pool::build(n, y)?,
            z: Pool::build(n, z)?,
        };
        let (recs1, raw1) = amicable_pairs(&pools.w, &pools.z, n, KeyKind::Sum);
        let (recs2, raw2) = amicable_pairs(&pools.x, &pools.y, n, KeyKind::Complement);
        let filtered = (recs1.len() + recs2.len()) as u64;
        let l1 = SortedPairs::sort(recs1, config.mem_budget)?.into_iter()?;
        let l2 = SortedPairs::sort(recs2, config.mem_budget)?.into_iter()?;
        let (found, checked) = match_and_verify(l1, l2, &pools)?;
        stats.push(DecompositionStats {
            rowsums: decomp,
            pool_sizes: [pools.w.len(), pools.x.len(), pools.y.len(), pools.z.len()],
            pairs_raw: raw1 + raw2,
            pairs_filtered: filtered,
            candidates_checked: checked,
            quadruples_found: found.len(),
        });
        quadruples.extend(found);
    }
    quadruples.sort();
    Ok(SearchOutcome { n, quadruples, stats })
}

/// Expands a Williamson-type-complete list so it becomes complete up to QT
/// equivalence: appends the first-sequence-negated variant of every element,
/// then (for even `n`) the first-sequence-half-shifted variant of every
/// element of the enlarged list.
pub fn expand_for_qt(list: &[Quadruple], n: usize) -> Vec<Quadruple> {
    let negate_first = |q: &Quadruple| {
        Quadruple::new([
            q.seq(0).negated(),
            q.seq(1).clone(),
            q.seq(2).clone(),
            q.seq(3).clone(),
        ])
        .unwrap()
    };
    let mut out: Vec<Quadruple> = list.to_vec();
    out.extend(list.iter().map(negate_first));
    if n % 2 == 0 {
        let shifted: Vec<Quadruple> = out
            .iter()
            .map(|q| {
                let mut seqs = q.seqs().clone();
                seqs[0] = BinarySeq::new(
                    (0..n).map(|i| seqs[0].entries()[(i + n / 2) % n]).collect(),
                )
                .unwrap();
                Quadruple::new(seqs).unwrap()
            })
            .collect();
        out.extend(shifted);
    }
    out
}

/// Convenience wrapper: enumerate and dedup to Williamson-type classes.
pub fn wt_classes(
    n: usize,
    config: &SearchConfig,
) -> Result<Vec<equiv::CanonicalForm>, SearchError> {
    let outcome = enumerate_wt(n, config)?;
    Ok(equiv::dedup(&outcome.quadruples, Group::WilliamsonType))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::cross_correlation;
    use std::collections::{HashMap, HashSet};

    #[test]
    fn decomposition_examples() {
        assert_eq!(four_square_decompositions(1), vec![[1, 1, 1, 1]]);
        assert_eq!(four_square_decompositions(4), vec![[4, 0, 0, 0], [2, 2, 2, 2]]);
        assert_eq!(four_square_decompositions(5), vec![[3, 3, 1, 1]]);
    }

    #[test]
    fn decomposition_oracle() {
        // Plain quadruple loop, independent of the generator's pruning.
        for n in 1..=30usize {
            let target = 4 * n as i64;
            let parity = (n % 2) as i64;
            let mut expect = HashSet::new();
            let max = 2 * (n as i64);
            for w in 0..=max {
                for x in 0..=w {
                    for y in 0..=x {
                        for z in 0..=y {
                            if w * w + x * x + y * y + z * z == target
                                && [w, x, y, z].iter().all(|v| v % 2 == parity)
                            {
                                expect.insert([w, x, y, z]);
                            }
                        }
                    }
                }
            }
            let got: HashSet<_> = four_square_decompositions(n).into_iter().collect();
            assert_eq!(got, expect, "n = {n}");
        }
    }

    #[test]
    fn rowsum_pool_examples() {
        let seqs = sequences_with_rowsum(2, 0).unwrap();
        assert_eq!(seqs.len(), 2);
        assert_eq!(seqs[0].to_string(), "-+");
        assert_eq!(seqs[1].to_string(), "+-");

        // boundary PSD value 4n passes
        let pool = Pool::build(4, 4).unwrap();
        assert_eq!(pool.len(), 1);
        assert_eq!(pool.seqs[0].to_string(), "++++");

        assert_eq!(sequences_with_rowsum(3, 1).unwrap().len(), 3);
        assert!(matches!(
            sequences_with_rowsum(3, 2),
            Err(SearchError::InfeasibleRowsum { .. })
        ));
        assert!(matches!(
            sequences_with_rowsum(3, 5),
            Err(SearchError::InfeasibleRowsum { .. })
        ));
    }

    #[test]
    fn degenerate_length_one() {
        let pool_w = Pool::build(1, 1).unwrap();
        let pool_z = Pool::build(1, 1).unwrap();
        let (recs, raw) = amicable_pairs(&pool_w, &pool_z, 1, KeyKind::Sum);
        assert_eq!(raw, 1);
        assert_eq!(recs.len(), 1);
        assert!(recs[0].key.is_empty());
    }

    #[test]
    fn pair_counts_match_published_table_small_n() {
        // total filtered pairs per length, n = 1..=9
        let expect = [2u64, 4, 6, 46, 20, 48, 182, 384, 999];
        for (n, &want) in (1..=9).zip(expect.iter()) {
            let outcome = enumerate_wt(n, &SearchConfig::default()).unwrap();
            assert_eq!(outcome.pairs_filtered(), want, "n = {n}");
        }
    }

    #[test]
    fn cpsd_filter_agrees_with_exact_amicability() {
        // Over whole pools the float filter must match the exact integer
        // condition R_{U,V}(t) = R_{V,U}(t) for all t.
        for n in [4usize, 5, 6] {
            let rowsums: Vec<i64> =
                (-(n as i64)..=n as i64).filter(|r| (n as i64 - r) % 2 == 0).collect();
            for &r1 in &rowsums {
                let p1 = Pool::build(n, r1).unwrap();
                for &r2 in &rowsums {
                    let p2 = Pool::build(n, r2).unwrap();
                    for a in &p1.seqs {
                        for b in &p2.seqs {
                            let exact = (0..n)
                                .all(|t| cross_correlation(a, b, t) == cross_correlation(b, a, t));
                            let sp_a = a.spectrum();
                            let sp_b = b.spectrum();
                            let filt = (1..=n / 2).all(|t| {
                                let im = sp_a.dft[t].im * sp_b.dft[t].re
                                    - sp_a.dft[t].re * sp_b.dft[t].im;
                                2.0 * im.abs() <= CPSD_TOL
                            });
                            assert_eq!(exact, filt, "n={n} a={a} b={b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cpsd_rejects_concrete_pair() {
        // Find a concrete rejected pair at n = 6 and confirm both routes.
        let pool = Pool::build(6, 0).unwrap();
        let mut found = None;
        'outer: for a in &pool.seqs {
            for b in &pool.seqs {
                if (0..6).any(|t| cross_correlation(a, b, t) != cross_correlation(b, a, t)) {
                    found = Some((a.clone(), b.clone()));
                    break 'outer;
                }
            }
        }
        let (a, b) = found.expect("some non-amicable pair exists at n = 6");
        let sp_a = a.spectrum();
        let sp_b = b.spectrum();
        let max_diff = (1..=3)
            .map(|t| {
                2.0 * (sp_a.dft[t].im * sp_b.dft[t].re - sp_a.dft[t].re * sp_b.dft[t].im).abs()
            })
            .fold(0.0f64, f64::max);
        assert!(max_diff > CPSD_TOL);
    }

    #[test]
    fn match_and_verify_n5() {
        let n = 5;
        let pools = DecompositionPools {
            w: Pool::build(n, 3).unwrap(),
            x: Pool::build(n, 3).unwrap(),
            y: Pool::build(n, 1).unwrap(),
            z: Pool::build(n, 1).unwrap(),
        };
        let (r1, _) = amicable_pairs(&pools.w, &pools.z, n, KeyKind::Sum);
        let (r2, _) = amicable_pairs(&pools.x, &pools.y, n, KeyKind::Complement);
        let l1 = SortedPairs::sort(r1, 1 << 30).unwrap().into_iter().unwrap();
        let l2 = SortedPairs::sort(r2, 1 << 30).unwrap().into_iter().unwrap();
        let (quads, _) = match_and_verify(l1, l2, &pools).unwrap();
        assert!(!quads.is_empty());
        assert!(quads.iter().all(|q| q.is_qt()));
        let classes = equiv::dedup(&quads, Group::WilliamsonType);
        assert_eq!(classes.len(), 1);
    }

    #[test]
    fn match_empty_stream() {
        let pools = DecompositionPools {
            w: Pool::build(2, 2).unwrap(),
            x: Pool::build(2, 2).unwrap(),
            y: Pool::build(2, 0).unwrap(),
            z: Pool::build(2, 0).unwrap(),
        };
        let l1 = SortedPairs::Mem(vec![]).into_iter().unwrap();
        let (r2, _) = amicable_pairs(&pools.x, &pools.y, 2, KeyKind::Complement);
        let l2 = SortedPairs::sort(r2, 1 << 30).unwrap().into_iter().unwrap();
        let (quads, checked) = match_and_verify(l1, l2, &pools).unwrap();
        assert!(quads.is_empty());
        assert_eq!(checked, 0);
    }

    #[test]
    fn spurious_key_collision_dropped() {
        // A fabricated colliding record whose exact check fails must be
        // discarded rather than emitted.
        let n = 5;
        let pools = DecompositionPools {
            w: Pool::build(n, 3).unwrap(),
            x: Pool::build(n, 3).unwrap(),
            y: Pool::build(n, 1).unwrap(),
            z: Pool::build(n, 1).unwrap(),
        };
        let (r1, _) = amicable_pairs(&pools.w, &pools.z, n, KeyKind::Sum);
        let (r2, _) = amicable_pairs(&pools.x, &pools.y, n, KeyKind::Complement);
        let (quads_before, checked_before) = {
            let l1 = SortedPairs::sort(r1.clone(), 1 << 30).unwrap().into_iter().unwrap();
            let l2 = SortedPairs::sort(r2.clone(), 1 << 30).unwrap().into_iter().unwrap();
            match_and_verify(l1, l2, &pools).unwrap()
        };
        // Clone an existing record onto a different index pair, creating a
        // rounded-key collision with mismatched sequences.
        let mut r2b = r2.clone();
        let mut fake = r2b[0].clone();
        fake.i = (fake.i + 1) % pools.x.len() as u32;
        r2b.push(fake);
        let l1 = SortedPairs::sort(r1, 1 << 30).unwrap().into_iter().unwrap();
        let l2 = SortedPairs::sort(r2b, 1 << 30).unwrap().into_iter().unwrap();
        let (quads_after, checked_after) = match_and_verify(l1, l2, &pools).unwrap();
        assert!(checked_after > checked_before);
        assert!(quads_after.iter().all(|q| q.is_qt()));
        assert!(quads_after.len() <= quads_before.len() + 1);
    }

    #[test]
    fn unsorted_input_detected() {
        let pools = DecompositionPools {
            w: Pool::build(2, 0).unwrap(),
            x: Pool::build(2, 0).unwrap(),
            y: Pool::build(2, 0).unwrap(),
            z: Pool::build(2, 0).unwrap(),
        };
        let k = |v: i64, i: u32| PairRec { key: SmallVec::from_slice(&[v]), i, j: 0 };
        let bad = PairIter::Mem(vec![k(2, 0), k(1, 1)].into_iter());
        let good = PairIter::Mem(vec![k(1, 0), k(2, 1)].into_iter());
        let err = match_and_verify(bad, good, &pools);
        assert!(matches!(err, Err(SearchError::UnsortedInput)));
    }

    #[test]
    fn external_sort_path_matches_memory_path() {
        let n = 5;
        let outcome_mem = enumerate_wt(n, &SearchConfig { mem_budget: 1 << 30 }).unwrap();
        let outcome_ext = enumerate_wt(n, &SearchConfig { mem_budget: 64 }).unwrap();
        assert_eq!(outcome_mem.quadruples, outcome_ext.quadruples);
        assert_eq!(outcome_mem.pairs_filtered(), outcome_ext.pairs_filtered());
    }

    #[test]
    fn pair_line_roundtrip() {
        let rec = PairRec { key: SmallVec::from_slice(&[12, -3, 0]), i: 7, j: 42 };
        let line = rec.to_line();
        assert_eq!(line, "12 -3 0 | 7 42");
        assert_eq!(PairRec::from_line(&line).unwrap(), rec);
        assert!(PairRec::from_line("1 2 3").is_err());
        assert!(PairRec::from_line("a | 1 2").is_err());
    }

    #[test]
    fn enumerate_small_lengths_class_counts() {
        let config = SearchConfig::default();
        let expect_wt = [(1usize, 1usize), (2, 1), (3, 1), (4, 2), (5, 1), (6, 1), (7, 2), (8, 3)];
        for (n, want) in expect_wt {
            let classes = wt_classes(n, &config).unwrap();
            assert_eq!(classes.len(), want, "WT classes at n = {n}");
        }
    }

    #[test]
    fn outputs_satisfy_amicability() {
        let outcome = enumerate_wt(8, &SearchConfig::default()).unwrap();
        assert!(!outcome.quadruples.is_empty());
        for q in &outcome.quadruples {
            assert!(q.is_qt());
            assert!(q.is_williamson_type());
        }
    }

    #[test]
    fn expand_for_qt_counts() {
        let config = SearchConfig::default();
        let wt = wt_classes(5, &config).unwrap();
        let reprs: Vec<Quadruple> = wt.iter().map(|c| c.repr.clone()).collect();
        let expanded = expand_for_qt(&reprs, 5);
        assert_eq!(expanded.len(), 2);
        let qt = equiv::dedup(&expanded, Group::Qt);
        assert_eq!(qt.len(), 1);

        // even length: negation then half shift quadruples the list
        let wt8 = wt_classes(8, &config).unwrap();
        let reprs8: Vec<Quadruple> = wt8.iter().map(|c| c.repr.clone()).collect();
        let expanded8 = expand_for_qt(&reprs8, 8);
        assert_eq!(expanded8.len(), 4 * reprs8.len());
        let qt8 = equiv::dedup(&expanded8, Group::Qt);
        assert_eq!(qt8.len(), 4);
    }

    #[test]
    fn brute_force_completeness_small_n() {
        // Exhaustive pair-table enumeration of every quadruple satisfying
        // the correlation conditions, with no spectral filters, rounding, or
        // rowsum restrictions. Class sets must coincide with the pipeline's.
        let config = SearchConfig::default();
        for n in 1..=6usize {
            let all: Vec<BinarySeq> = (0..(1u32 << n))
                .map(|bits| {
                    BinarySeq::new(
                        (0..n).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect(),
                    )
                    .unwrap()
                })
                .collect();
            let mut table: HashMap<Vec<i64>, Vec<(u32, u32)>> = HashMap::new();
            for (ai, a) in all.iter().enumerate() {
                for (bi, b) in all.iter().enumerate() {
                    let key: Vec<i64> =
                        (1..n).map(|t| a.autocorrelation(t) + b.autocorrelation(t)).collect();
                    table.entry(key).or_default().push((ai as u32, bi as u32));
                }
            }
            let mut brute: HashSet<Quadruple> = HashSet::new();
            for (key, pairs_ab) in &table {
                let neg: Vec<i64> = key.iter().map(|v| -v).collect();
                if let Some(pairs_cd) = table.get(&neg) {
                    for &(ai, bi) in pairs_ab {
                        for &(ci, di) in pairs_cd {
                            let q = Quadruple::new([
                                all[ai as usize].clone(),
                                all[bi as usize].clone(),
                                all[ci as usize].clone(),
                                all[di as usize].clone(),
                            ])
                            .unwrap();
                            if q.is_qt() {
                                brute.insert(q);
                            }
                        }
                    }
                }
            }
            let brute_classes: HashSet<Quadruple> = brute
                .iter()
                .map(|q| equiv::canonical_class(q, Group::WilliamsonType).repr)
                .collect();
            let pipeline_classes: HashSet<Quadruple> =
                wt_classes(n, &config).unwrap().into_iter().map(|c| c.repr).collect();
            assert_eq!(brute_classes, pipeline_classes, "n = {n}");
        }
    }

    #[test]
    fn deterministic_output() {
        let a = enumerate_wt(6, &SearchConfig::default()).unwrap();
        let b = enumerate_wt(6, &SearchConfig::default()).unwrap();
        assert_eq!(a.quadruples, b.quadruples);
    }
}
