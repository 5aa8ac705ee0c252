use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `a + b·i + c·j + d·k` in double precision.
///
/// Complex numbers are the `c = d = 0` slice and reals the `b = c = d = 0`
/// slice; nothing here special-cases them beyond the predicates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Self::new(re, im, 0.0, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.b == 0.0 && self.c == 0.0 && self.d == 0.0
    }

    pub fn is_complex(&self) -> bool {
        self.c == 0.0 && self.d == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    /// The real part as an integer, when it is one and the rest vanishes.
    pub fn as_nonneg_integer(&self) -> Option<u32> {
        if self.is_real() && self.a >= 0.0 && self.a.fract() == 0.0 && self.a <= u32::MAX as f64 {
            Some(self.a as u32)
        } else {
            None
        }
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// The modulus `|q|`.
    pub fn norm(&self) -> f64 {
        // hypot chain keeps large components from overflowing the square
        self.a.hypot(self.b).hypot(self.c.hypot(self.d))
    }

    fn vector_norm(&self) -> f64 {
        self.b.hypot(self.c).hypot(self.d)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return None;
        }
        Some(self.conj().scale(1.0 / n2))
    }

    /// Right division `self · other⁻¹`.
    pub fn div_right(self, other: Self) -> Option<Self> {
        if other.is_real() && other.a != 0.0 {
            let r = other.a;
            return Some(Self::new(self.a / r, self.b / r, self.c / r, self.d / r));
        }
        other.inverse().map(|inv| self * inv)
    }

    /// `exp(a + v) = e^a (cos|v| + v/|v| sin|v|)`.
    pub fn exp(self) -> Self {
        let ea = self.a.exp();
        let vn = self.vector_norm();
        if vn == 0.0 {
            return Self::real(ea);
        }
        let s = ea * vn.sin() / vn;
        Self::new(ea * vn.cos(), self.b * s, self.c * s, self.d * s)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        )
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, q| acc + q)
    }
}

/// [`Quaternion`] multiplication under its operation name.
pub fn quat_mul(x: Quaternion, y: Quaternion) -> Quaternion {
    x * y
}

impl fmt::Display for Quaternion {
    /// Shortest literal the CLI parser accepts back: `2`, `0.5+2i`, `i+j`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (value, unit) in [(self.a, ""), (self.b, "i"), (self.c, "j"), (self.d, "k")] {
            if value == 0.0 {
                continue;
            }
            if wrote && value > 0.0 {
                f.write_str("+")?;
            }
            match (value, unit) {
                (v, u) if !u.is_empty() && v == 1.0 => f.write_str(u)?,
                (v, u) if !u.is_empty() && v == -1.0 => write!(f, "-{u}")?,
                (v, u) => write!(f, "{v}{u}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}
