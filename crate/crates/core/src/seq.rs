//! Binary and quaternion sequences with periodic correlation, spectral
//! profiles, and the quadruple predicates used by the search.
//!
//! Exact integer (or lattice-quaternion) correlation is the ground truth
//! everywhere; floating-point spectra are used only as filters.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use thiserror::Error;

use crate::quat::{self, Quat, QuatError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence must be nonempty")]
    Empty,
    #[error("entries must be +1 or -1")]
    NotSign,
    #[error("sequences in a quadruple must have equal lengths")]
    LengthMismatch,
    #[error("invalid character {ch:?} at position {pos}")]
    BadChar { pos: usize, ch: char },
    #[error("expected four space-separated sequences")]
    BadQuadrupleLine,
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// A ±1 sequence with its rowsum and a lazily cached spectral profile.
pub struct BinarySeq {
    entries: Vec<i8>,
    rowsum: i64,
    spectrum: OnceLock<Spectrum>,
}

impl BinarySeq {
    pub fn new(entries: Vec<i8>) -> Result<Self, SeqError> {
        if entries.is_empty() {
            return Err(SeqError::Empty);
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(SeqError::NotSign);
        }
        let rowsum = entries.iter().map(|&e| e as i64).sum();
        Ok(BinarySeq { entries, rowsum, spectrum: OnceLock::new() })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn rowsum(&self) -> i64 {
        self.rowsum
    }

    pub fn get(&self, idx: usize) -> i8 {
        self.entries[idx % self.entries.len()]
    }

    pub fn negated(&self) -> BinarySeq {
        BinarySeq::new(self.entries.iter().map(|&e| -e).collect()).unwrap()
    }

    /// `a_i = a_{n-i}` for all `1 <= i < n`.
    pub fn is_palindromic(&self) -> bool {
        let n = self.entries.len();
        (1..n).all(|i| self.entries[i] == self.entries[n - i])
    }

    pub fn autocorrelation(&self, t: usize) -> i64 {
        cross_correlation(self, self, t)
    }

    /// DFT and PSD values for shifts `0..=n/2`, computed once per sequence.
    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| Spectrum::of_signs(&self.entries))
    }
}

impl Clone for BinarySeq {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        BinarySeq { entries: self.entries.clone(), rowsum: self.rowsum, spectrum }
    }
}

impl PartialEq for BinarySeq {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}
impl Eq for BinarySeq {}

impl PartialOrd for BinarySeq {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BinarySeq {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.entries.cmp(&other.entries)
    }
}

impl std::hash::Hash for BinarySeq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl fmt::Debug for BinarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySeq({self})")
    }
}

impl fmt::Display for BinarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.entries {
            f.write_str(if e == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for BinarySeq {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, SeqError> {
        let mut entries = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '+' => entries.push(1),
                '-' => entries.push(-1),
                _ => return Err(SeqError::BadChar { pos, ch }),
            }
        }
        BinarySeq::new(entries)
    }
}

/// Periodic crosscorrelation `R_{A,B}(t) = sum_r a_r b_{r+t mod n}` of two
/// binary sequences (conjugation is trivial over ±1).
///
/// Panics if the lengths differ.
pub fn cross_correlation(a: &BinarySeq, b: &BinarySeq, t: usize) -> i64 {
    assert_eq!(a.len(), b.len(), "crosscorrelation requires equal lengths");
    let n = a.len();
    let mut sum = 0i64;
    for r in 0..n {
        sum += (a.entries[r] as i64) * (b.entries[(r + t) % n] as i64);
    }
    sum
}

/// DFT values for `t = 0..=n/2` and their squared moduli.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub dft: Vec<Complex64>,
    pub psd: Vec<f64>,
}

impl Spectrum {
    fn of_signs(entries: &[i8]) -> Spectrum {
        let n = entries.len();
        let mut buf: Vec<Complex64> =
            entries.iter().map(|&e| Complex64::new(e as f64, 0.0)).collect();
        // Forward transform with the e^{+2 pi i s t / n} kernel.
        FftPlanner::new()
            .plan_fft(n, FftDirection::Inverse)
            .process(&mut buf);
        let half = n / 2;
        let dft: Vec<Complex64> = buf[..=half].to_vec();
        let psd = dft.iter().map(|z| z.norm_sqr()).collect();
        Spectrum { dft, psd }
    }
}

/// An ordered quadruple of equal-length binary sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadruple {
    seqs: [BinarySeq; 4],
}

impl Quadruple {
    pub fn new(seqs: [BinarySeq; 4]) -> Result<Self, SeqError> {
        let n = seqs[0].len();
        if seqs.iter().any(|s| s.len() != n) {
            return Err(SeqError::LengthMismatch);
        }
        Ok(Quadruple { seqs })
    }

    pub fn len(&self) -> usize {
        self.seqs[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn seqs(&self) -> &[BinarySeq; 4] {
        &self.seqs
    }

    pub fn seq(&self, idx: usize) -> &BinarySeq {
        &self.seqs[idx]
    }

    pub fn rowsums(&self) -> [i64; 4] {
        [
            self.seqs[0].rowsum(),
            self.seqs[1].rowsum(),
            self.seqs[2].rowsum(),
            self.seqs[3].rowsum(),
        ]
    }

    /// The concatenated entry list, used for lexicographic comparisons.
    pub fn concat(&self) -> Vec<i8> {
        let mut out = Vec::with_capacity(4 * self.len());
        for s in &self.seqs {
            out.extend_from_slice(s.entries());
        }
        out
    }

    /// The autocorrelation condition plus the three crosscorrelation
    /// conditions, checked exactly over all shifts.
    pub fn is_qt(&self) -> bool {
        let n = self.len();
        let [a, b, c, d] = &self.seqs;
        for t in 1..n {
            let auto = a.autocorrelation(t)
                + b.autocorrelation(t)
                + c.autocorrelation(t)
                + d.autocorrelation(t);
            if auto != 0 {
                return false;
            }
        }
        for t in 0..n {
            let cc1 = cross_correlation(a, b, t) - cross_correlation(b, a, t)
                + cross_correlation(c, d, t)
                - cross_correlation(d, c, t);
            let cc2 = cross_correlation(a, c, t) - cross_correlation(c, a, t)
                + cross_correlation(d, b, t)
                - cross_correlation(b, d, t);
            let cc3 = cross_correlation(a, d, t) - cross_correlation(d, a, t)
                + cross_correlation(b, c, t)
                - cross_correlation(c, b, t);
            if cc1 != 0 || cc2 != 0 || cc3 != 0 {
                return false;
            }
        }
        true
    }

    /// The autocorrelation condition plus pairwise amicability
    /// `R_{X,Y}(t) = R_{Y,X}(t)` for every pair of the quadruple.
    pub fn is_williamson_type(&self) -> bool {
        let n = self.len();
        for t in 1..n {
            let auto: i64 = self.seqs.iter().map(|s| s.autocorrelation(t)).sum();
            if auto != 0 {
                return false;
            }
        }
        for x in 0..4 {
            for y in (x + 1)..4 {
                for t in 0..n {
                    if cross_correlation(&self.seqs[x], &self.seqs[y], t)
                        != cross_correlation(&self.seqs[y], &self.seqs[x], t)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True when every sequence generates a symmetric circulant block.
    pub fn is_symmetric(&self) -> bool {
        self.seqs.iter().all(|s| s.is_palindromic())
    }
}

impl fmt::Debug for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quadruple({self})")
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.seqs[0], self.seqs[1], self.seqs[2], self.seqs[3])
    }
}

impl FromStr for Quadruple {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, SeqError> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(SeqError::BadQuadrupleLine);
        }
        Quadruple::new([
            parts[0].parse()?,
            parts[1].parse()?,
            parts[2].parse()?,
            parts[3].parse()?,
        ])
    }
}

/// A sequence of unit lattice quaternions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuatSeq {
    entries: Vec<Quat>,
}

impl QuatSeq {
    pub fn new(entries: Vec<Quat>) -> Result<Self, SeqError> {
        if entries.is_empty() {
            return Err(SeqError::Empty);
        }
        Ok(QuatSeq { entries })
    }

    /// Decodes a symbol string such as `x+JJ+`.
    pub fn decode(s: &str) -> Result<Self, SeqError> {
        let mut entries = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match quat::symbol_decode(ch) {
                Ok(q) => entries.push(q),
                Err(_) => return Err(SeqError::BadChar { pos, ch }),
            }
        }
        QuatSeq::new(entries)
    }

    pub fn encode(&self) -> Result<String, QuatError> {
        self.entries.iter().map(quat::symbol_encode).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[Quat] {
        &self.entries
    }

    pub fn get(&self, idx: i64) -> Quat {
        let n = self.entries.len() as i64;
        self.entries[idx.rem_euclid(n) as usize]
    }

    /// Right periodic autocorrelation `sum_r s_r s_{r+t}^*`.
    pub fn autocorrelation_right(&self, t: usize) -> Quat {
        let n = self.entries.len();
        let mut sum = quat::ZERO;
        for r in 0..n {
            sum = sum + self.entries[r] * self.entries[(r + t) % n].conj();
        }
        sum
    }

    /// Left periodic autocorrelation `sum_r s_r^* s_{r+t}`.
    pub fn autocorrelation_left(&self, t: usize) -> Quat {
        let n = self.entries.len();
        let mut sum = quat::ZERO;
        for r in 0..n {
            sum = sum + self.entries[r].conj() * self.entries[(r + t) % n];
        }
        sum
    }

    /// True when every nontrivial shift has vanishing autocorrelation.
    ///
    /// Checks right perfection, and asserts the left form agrees as a
    /// self-test. Fails with [`QuatError::NotUnit`] on non-unit entries.
    pub fn is_perfect(&self) -> Result<bool, QuatError> {
        if self.entries.iter().any(|e| !e.is_unit()) {
            return Err(QuatError::NotUnit);
        }
        let n = self.entries.len();
        let mut right = true;
        for t in 1..n {
            let r = self.autocorrelation_right(t);
            let l = self.autocorrelation_left(t);
            assert_eq!(r.is_zero(), l.is_zero(), "right/left perfection disagree at shift {t}");
            if !r.is_zero() {
                right = false;
            }
        }
        Ok(right)
    }
}

impl fmt::Debug for QuatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.encode() {
            Ok(s) => write!(f, "QuatSeq({s})"),
            Err(_) => write!(f, "QuatSeq({:?})", self.entries),
        }
    }
}

/// Periodic crosscorrelation of two quaternion sequences.
///
/// Panics if the lengths differ.
pub fn quat_cross_correlation(a: &QuatSeq, b: &QuatSeq, t: usize) -> Quat {
    assert_eq!(a.len(), b.len(), "crosscorrelation requires equal lengths");
    let n = a.len();
    let mut sum = quat::ZERO;
    for r in 0..n {
        sum = sum + a.entries[r] * b.entries[(r + t) % n].conj();
    }
    sum
}
