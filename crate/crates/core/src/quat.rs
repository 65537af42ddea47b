//! Exact quaternion arithmetic on the half-integer lattice.
//!
//! A [`Quat`] stores *doubled* integer coordinates: the quaternion value is
//! `(c0 + c1 i + c2 j + c3 k) / 2`. The four doubled coordinates must share
//! the same parity (all even or all odd); this sublattice is closed under
//! addition and multiplication, so every product of unit-alphabet elements
//! stays exactly representable. All correlation and matrix verification over
//! the 24-element unit alphabet is therefore free of rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Default absolute tolerance for floating-point quaternion comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuatError {
    /// Coordinates do not lie on the supported lattice (mixed parity).
    #[error("doubled coordinates {0:?} have mixed parity; off the supported lattice")]
    OffLattice([i64; 4]),
    /// Encoding asked for an element outside the 24-element unit alphabet.
    #[error("quaternion is not in the unit alphabet and has no symbol")]
    NotInAlphabet,
    /// A character with no assigned quaternion value.
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    /// An operation required a unit quaternion.
    #[error("quaternion is not a unit")]
    NotUnit,
    /// An operation required a unit pure-imaginary quaternion.
    #[error("quaternion is not a unit pure imaginary")]
    NotPureImaginary,
}

/// A quaternion `(c0 + c1 i + c2 j + c3 k)/2` with doubled integer
/// coordinates of uniform parity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quat {
    c: [i64; 4],
}

pub const ZERO: Quat = Quat { c: [0, 0, 0, 0] };
pub const ONE: Quat = Quat { c: [2, 0, 0, 0] };
pub const I: Quat = Quat { c: [0, 2, 0, 0] };
pub const J: Quat = Quat { c: [0, 0, 2, 0] };
pub const K: Quat = Quat { c: [0, 0, 0, 2] };
/// `q = (1 + i + j + k)/2`, a unit cube root of -1.
pub const Q: Quat = Quat { c: [1, 1, 1, 1] };
/// `q* = (1 - i - j - k)/2`.
pub const Q_STAR: Quat = Quat { c: [1, -1, -1, -1] };

impl Quat {
    /// Builds a quaternion from doubled coordinates, rejecting mixed parity.
    pub fn from_doubled(c: [i64; 4]) -> Result<Self, QuatError> {
        let parity = c[0] & 1;
        if c.iter().all(|v| v & 1 == parity) {
            Ok(Quat { c })
        } else {
            Err(QuatError::OffLattice(c))
        }
    }

    /// The integer `v` as a quaternion.
    pub fn from_int(v: i64) -> Self {
        Quat { c: [2 * v, 0, 0, 0] }
    }

    pub fn doubled(&self) -> [i64; 4] {
        self.c
    }

    /// Twice the real part (`2 Re(x) = c0`).
    pub fn re_doubled(&self) -> i64 {
        self.c[0]
    }

    /// Doubled coordinates of the pure imaginary part.
    pub fn imag_doubled(&self) -> [i64; 3] {
        [self.c[1], self.c[2], self.c[3]]
    }

    pub fn conj(&self) -> Self {
        Quat { c: [self.c[0], -self.c[1], -self.c[2], -self.c[3]] }
    }

    /// `c0^2 + c1^2 + c2^2 + c3^2`, which is four times the squared norm.
    pub fn norm_sq4(&self) -> i64 {
        self.c.iter().map(|v| v * v).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0, 0, 0, 0]
    }

    pub fn is_unit(&self) -> bool {
        self.norm_sq4() == 4
    }

    pub fn is_real(&self) -> bool {
        self.c[1] == 0 && self.c[2] == 0 && self.c[3] == 0
    }

    pub fn is_pure_imaginary(&self) -> bool {
        self.c[0] == 0
    }

    /// True for `x` with `x^3 = -1`.
    pub fn is_cube_root_of_minus_one(&self) -> bool {
        *self * *self * *self == -ONE
    }

    /// Membership in the eight basic unit quaternions.
    pub fn in_q8(&self) -> bool {
        self.is_unit() && self.c[0] & 1 == 0
    }

    /// Membership in the 16-element alphabet `Q8 ∪ qQ8`.
    pub fn in_qplus(&self) -> bool {
        if !self.is_unit() {
            return false;
        }
        if self.c[0] & 1 == 0 {
            return true;
        }
        // Odd-parity units split between qQ8 and q²Q8; the former have
        // coordinate product +1.
        self.c.iter().product::<i64>() == 1
    }

    /// Membership in the full 24-element unit group of the lattice.
    pub fn in_q24(&self) -> bool {
        self.is_unit()
    }

    pub fn as_float(&self) -> FloatQuat {
        FloatQuat {
            c: [
                self.c[0] as f64 / 2.0,
                self.c[1] as f64 / 2.0,
                self.c[2] as f64 / 2.0,
                self.c[3] as f64 / 2.0,
            ],
        }
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat { c: [-self.c[0], -self.c[1], -self.c[2], -self.c[3]] }
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, rhs: Quat) -> Quat {
        Quat {
            c: [
                self.c[0] + rhs.c[0],
                self.c[1] + rhs.c[1],
                self.c[2] + rhs.c[2],
                self.c[3] + rhs.c[3],
            ],
        }
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, rhs: Quat) -> Quat {
        self + (-rhs)
    }
}

impl Mul for Quat {
    type Output = Quat;

    /// Hamilton product. Closed on the uniform-parity lattice: the doubled
    /// product coordinates are always even, so halving them is exact.
    fn mul(self, rhs: Quat) -> Quat {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = rhs.c;
        let d = [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ];
        debug_assert!(
            d.iter().all(|v| v & 1 == 0),
            "product left the lattice: {:?} * {:?}",
            self.c,
            rhs.c
        );
        Quat { c: [d[0] / 2, d[1] / 2, d[2] / 2, d[3] / 2] }
    }
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quat({}/2, {}/2, {}/2, {}/2)", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match symbol_encode(self) {
            Ok(ch) => write!(f, "{ch}"),
            Err(_) => write!(f, "{:?}", self),
        }
    }
}

/// The three nested unit alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Q8,
    QPlus,
    Q24,
}

impl Alphabet {
    pub fn contains(&self, x: &Quat) -> bool {
        match self {
            Alphabet::Q8 => x.in_q8(),
            Alphabet::QPlus => x.in_qplus(),
            Alphabet::Q24 => x.in_q24(),
        }
    }

    /// All elements of the alphabet, in a fixed order.
    pub fn elements(&self) -> Vec<Quat> {
        let base = [ONE, I, J, K];
        let mut out = Vec::new();
        for b in base {
            out.push(b);
            out.push(-b);
        }
        if *self == Alphabet::Q8 {
            return out;
        }
        for b in base {
            out.push(Q * b);
            out.push(-(Q * b));
        }
        if *self == Alphabet::QPlus {
            return out;
        }
        for b in base {
            let qq = Q * Q;
            out.push(qq * b);
            out.push(-(qq * b));
        }
        out
    }
}

/// The 13 base symbols of the alphabet codec; a capital letter denotes the
/// negation of the lower-case value, and `-` plays that role for `+`.
fn base_symbols() -> [(char, Quat); 13] {
    [
        ('+', ONE),
        ('-', -ONE),
        ('i', I),
        ('j', J),
        ('k', K),
        ('q', Q),
        ('x', Q * I),
        ('y', Q * J),
        ('z', Q * K),
        ('s', Q_STAR),
        ('u', Q_STAR * I),
        ('v', Q_STAR * J),
        ('w', Q_STAR * K),
    ]
}

/// Maps a unit-alphabet element to its one-character symbol.
pub fn symbol_encode(x: &Quat) -> Result<char, QuatError> {
    for (ch, val) in base_symbols() {
        if val == *x {
            return Ok(ch);
        }
        if -val == *x {
            return Ok(match ch {
                '+' => '-',
                '-' => '+',
                c => c.to_ascii_uppercase(),
            });
        }
    }
    Err(QuatError::NotInAlphabet)
}

/// Maps a symbol back to its quaternion value.
pub fn symbol_decode(ch: char) -> Result<Quat, QuatError> {
    let lower = ch.to_ascii_lowercase();
    for (sym, val) in base_symbols() {
        if sym == lower {
            return Ok(if ch.is_ascii_uppercase() { -val } else { val });
        }
    }
    Err(QuatError::UnknownSymbol(ch))
}

/// A quaternion over `f64` coordinates, for matrices with irrational entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatQuat {
    pub c: [f64; 4],
}

impl FloatQuat {
    pub const ZERO: FloatQuat = FloatQuat { c: [0.0; 4] };
    pub const ONE: FloatQuat = FloatQuat { c: [1.0, 0.0, 0.0, 0.0] };

    pub fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        FloatQuat { c: [re, i, j, k] }
    }

    /// A complex number embedded in the `1, i` plane.
    pub fn from_complex(re: f64, im: f64) -> Self {
        FloatQuat { c: [re, im, 0.0, 0.0] }
    }

    /// `e^{w t} = cos t + w sin t` for a unit pure imaginary `w`.
    pub fn exp_imag(w: FloatQuat, t: f64) -> Result<Self, QuatError> {
        if !w.is_unit(DEFAULT_TOL) || w.c[0].abs() > DEFAULT_TOL {
            return Err(QuatError::NotPureImaginary);
        }
        let (s, c) = t.sin_cos();
        Ok(FloatQuat { c: [c, w.c[1] * s, w.c[2] * s, w.c[3] * s] })
    }

    pub fn conj(&self) -> Self {
        FloatQuat { c: [self.c[0], -self.c[1], -self.c[2], -self.c[3]] }
    }

    pub fn re(&self) -> f64 {
        self.c[0]
    }

    pub fn norm_sq(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm_sq() - 1.0).abs() <= tol
    }

    pub fn is_pure_imaginary(&self, tol: f64) -> bool {
        self.c[0].abs() <= tol
    }

    pub fn approx_eq(&self, other: &FloatQuat, tol: f64) -> bool {
        self.c.iter().zip(other.c.iter()).all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl Neg for FloatQuat {
    type Output = FloatQuat;
    fn neg(self) -> FloatQuat {
        FloatQuat { c: [-self.c[0], -self.c[1], -self.c[2], -self.c[3]] }
    }
}

impl Add for FloatQuat {
    type Output = FloatQuat;
    fn add(self, rhs: FloatQuat) -> FloatQuat {
        FloatQuat {
            c: [
                self.c[0] + rhs.c[0],
                self.c[1] + rhs.c[1],
                self.c[2] + rhs.c[2],
                self.c[3] + rhs.c[3],
            ],
        }
    }
}

impl Mul for FloatQuat {
    type Output = FloatQuat;
    fn mul(self, rhs: FloatQuat) -> FloatQuat {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = rhs.c;
        FloatQuat {
            c: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }
}
