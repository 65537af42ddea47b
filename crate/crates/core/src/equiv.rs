//! Equivalence operations on quadruples, canonical class representatives,
//! and deduplication.
//!
//! Two notions of equivalence are supported. Both share the index-space
//! operations (alternating negation, decimation, cyclic shift); they differ
//! in how sequences may be negated, swapped, and half-shifted:
//!
//! - Williamson-type equivalence allows single negations, single swaps, and
//!   single half shifts.
//! - QT equivalence couples them: a negation always comes with a swap, and
//!   half shifts come in pairs. This subgroup of the Williamson-type group
//!   is the one that descends to Hadamard equivalence of the generated
//!   matrices.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use thiserror::Error;

use crate::seq::{BinarySeq, Quadruple};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquivError {
    #[error("operation requires an even length")]
    OddLength,
    #[error("decimation unit {0} is not coprime to the length")]
    NotCoprime(usize),
}

/// One equivalence operation on a quadruple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    /// Negate one sequence and swap one pair, as a single coupled move.
    NegateSwap { negate: usize, swap: (usize, usize) },
    /// Negate a single sequence.
    SingleNegate(usize),
    /// Swap a single pair.
    SingleSwap(usize, usize),
    /// Negate two sequences.
    DoubleNegate(usize, usize),
    /// Swap two pairs.
    DoubleSwap((usize, usize), (usize, usize)),
    /// Multiply every other entry of all four sequences by -1 (even length).
    AlternatingNegation,
    /// Reindex all sequences by `i -> u*i mod n` for a unit `u`.
    Decimate(usize),
    /// Cyclically shift all sequences left by the given offset.
    CyclicShift(usize),
    /// Shift one sequence by n/2 (even length).
    SingleHalfShift(usize),
    /// Shift two sequences by n/2 (even length).
    DoubleHalfShift(usize, usize),
}

/// Which symmetry group canonical forms are computed under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    WilliamsonType,
    Qt,
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn shifted(s: &BinarySeq, c: usize) -> BinarySeq {
    let n = s.len();
    BinarySeq::new((0..n).map(|i| s.entries()[(i + c) % n]).collect()).unwrap()
}

fn decimated(s: &BinarySeq, u: usize) -> BinarySeq {
    let n = s.len();
    BinarySeq::new((0..n).map(|i| s.entries()[(u * i) % n]).collect()).unwrap()
}

fn alt_negated(s: &BinarySeq) -> BinarySeq {
    BinarySeq::new(
        s.entries()
            .iter()
            .enumerate()
            .map(|(i, &e)| if i % 2 == 1 { -e } else { e })
            .collect(),
    )
    .unwrap()
}

/// Applies an equivalence operation; QT quadruples map to QT quadruples.
pub fn apply(op: Op, q: &Quadruple) -> Result<Quadruple, EquivError> {
    let n = q.len();
    let mut seqs = q.seqs().clone();
    match op {
        Op::NegateSwap { negate, swap: (a, b) } => {
            seqs[negate] = seqs[negate].negated();
            seqs.swap(a, b);
        }
        Op::SingleNegate(i) => seqs[i] = seqs[i].negated(),
        Op::SingleSwap(a, b) => seqs.swap(a, b),
        Op::DoubleNegate(a, b) => {
            seqs[a] = seqs[a].negated();
            seqs[b] = seqs[b].negated();
        }
        Op::DoubleSwap((a, b), (c, d)) => {
            seqs.swap(a, b);
            seqs.swap(c, d);
        }
        Op::AlternatingNegation => {
            if n % 2 != 0 {
                return Err(EquivError::OddLength);
            }
            for s in &mut seqs {
                *s = alt_negated(s);
            }
        }
        Op::Decimate(u) => {
            if gcd(u % n, n) != 1 {
                return Err(EquivError::NotCoprime(u));
            }
            for s in &mut seqs {
                *s = decimated(s, u % n);
            }
        }
        Op::CyclicShift(c) => {
            for s in &mut seqs {
                *s = shifted(s, c % n);
            }
        }
        Op::SingleHalfShift(i) => {
            if n % 2 != 0 {
                return Err(EquivError::OddLength);
            }
            seqs[i] = shifted(&seqs[i], n / 2);
        }
        Op::DoubleHalfShift(a, b) => {
            if n % 2 != 0 {
                return Err(EquivError::OddLength);
            }
            seqs[a] = shifted(&seqs[a], n / 2);
            seqs[b] = shifted(&seqs[b], n / 2);
        }
    }
    Ok(Quadruple::new(seqs).unwrap())
}

/// Flips a sequence so its initial entry is -1.
fn normalize_leading(s: &BinarySeq) -> (BinarySeq, bool) {
    if s.entries()[0] == 1 {
        (s.negated(), true)
    } else {
        (s.clone(), false)
    }
}

fn inversions(perm: &[usize; 4]) -> usize {
    let mut count = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// Lexicographic minimum of a quadruple under the negate-and-swap group
/// (negation count and swap count always have equal parity).
///
/// All initial entries are made -1 and the sequences sorted ascending; when
/// the group parity cannot realize the sorted arrangement and no two
/// sequences are identical, the final sequence is negated instead.
pub fn ns_canonical(q: &Quadruple) -> Quadruple {
    let mut flips = 0usize;
    let ts_orig: Vec<BinarySeq> = q
        .seqs()
        .iter()
        .map(|s| {
            let (t, f) = normalize_leading(s);
            flips += f as usize;
            t
        })
        .collect();

    let mut perm = [0usize, 1, 2, 3];
    perm.sort_by(|&a, &b| ts_orig[a].cmp(&ts_orig[b]));
    let inv = inversions(&perm);
    let mut ts = ts_orig;
    ts.sort();

    let tie = ts.windows(2).any(|w| w[0] == w[1]);
    if !tie && (flips + inv) % 2 == 1 {
        ts[3] = ts[3].negated();
    }
    Quadruple::new([ts[0].clone(), ts[1].clone(), ts[2].clone(), ts[3].clone()]).unwrap()
}

/// Lexicographic minimum under single negations and single swaps: every
/// sequence normalized to lead with -1, then sorted ascending.
pub fn snss_canonical(q: &Quadruple) -> Quadruple {
    let mut ts: Vec<BinarySeq> = q.seqs().iter().map(|s| normalize_leading(s).0).collect();
    ts.sort();
    Quadruple::new([ts[0].clone(), ts[1].clone(), ts[2].clone(), ts[3].clone()]).unwrap()
}

/// The index-space generators of the chosen group for length `n`.
fn outer_generators(n: usize, group: Group) -> Vec<Op> {
    let mut gens = vec![Op::CyclicShift(1)];
    for u in 2..n {
        if gcd(u, n) == 1 {
            gens.push(Op::Decimate(u));
        }
    }
    if n % 2 == 0 {
        gens.push(Op::AlternatingNegation);
        match group {
            Group::WilliamsonType => {
                for i in 0..4 {
                    gens.push(Op::SingleHalfShift(i));
                }
            }
            Group::Qt => {
                for a in 0..4 {
                    for b in (a + 1)..4 {
                        gens.push(Op::DoubleHalfShift(a, b));
                    }
                }
            }
        }
    }
    gens
}

/// A class representative together with whether the class contains a
/// quadruple of symmetric sequences.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub repr: Quadruple,
    pub symmetric: bool,
}

/// Canonical representative of the full equivalence class of `q`.
///
/// Enumerates the orbit of `q` under the index-space generators by
/// breadth-first closure, applies the inner sequence sort to every orbit
/// element, and returns the global minimum. The symmetric flag records
/// whether any orbit element has all four sequences palindromic.
pub fn canonical_class(q: &Quadruple, group: Group) -> CanonicalForm {
    let inner = match group {
        Group::WilliamsonType => snss_canonical,
        Group::Qt => ns_canonical,
    };
    let gens = outer_generators(q.len(), group);

    let mut visited: HashSet<Quadruple> = HashSet::new();
    let mut queue = VecDeque::new();
    visited.insert(q.clone());
    queue.push_back(q.clone());

    let mut best = inner(q);
    let mut symmetric = q.is_symmetric();
    while let Some(cur) = queue.pop_front() {
        for &g in &gens {
            let next = apply(g, &cur).expect("generators are applicable by construction");
            if visited.insert(next.clone()) {
                let sorted = inner(&next);
                if sorted < best {
                    best = sorted;
                }
                symmetric |= next.is_symmetric();
                queue.push_back(next);
            }
        }
    }
    CanonicalForm { repr: best, symmetric }
}

/// Size of the orbit of `q` under the index-space generators (diagnostic).
pub fn orbit_size(q: &Quadruple, group: Group) -> usize {
    let gens = outer_generators(q.len(), group);
    let mut visited: HashSet<Quadruple> = HashSet::new();
    let mut queue = VecDeque::new();
    visited.insert(q.clone());
    queue.push_back(q.clone());
    while let Some(cur) = queue.pop_front() {
        for &g in &gens {
            let next = apply(g, &cur).unwrap();
            if visited.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    visited.len()
}

/// One canonical representative per equivalence class, sorted.
pub fn dedup(list: &[Quadruple], group: Group) -> Vec<CanonicalForm> {
    let mut forms: Vec<CanonicalForm> =
        list.par_iter().map(|q| canonical_class(q, group)).collect();
    forms.sort();
    forms.dedup_by(|a, b| a.repr == b.repr);
    forms
}
