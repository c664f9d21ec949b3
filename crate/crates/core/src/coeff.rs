//! Exact Gaussian rational coefficients `a + b·i` with `a, b ∈ Q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::{rat, rat_string, Rat};

/// A complex number with rational real and imaginary parts.
///
/// This is the coefficient domain for polynomial representatives of germ
/// components: supports only need the exponents, but face functions and the
/// degeneracy matrix carry exact coefficients all the way through.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn from_rational(re: Rat) -> Self {
        Self {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn zero() -> Self {
        Self::from_rational(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, s: &Rat) -> Self {
        Self {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    /// Canonical string: `"a"` or `"a/b"` when real, `"a+bi"` otherwise.
    ///
    /// This is the form accepted back by the expression parser (wrapped in
    /// parentheses when complex) and used in JSON exports.
    pub fn canonical_string(&self) -> String {
        if self.is_real() {
            return rat_string(&self.re);
        }
        let im = if self.im >= Rat::zero() {
            format!("+{}i", rat_string(&self.im))
        } else {
            format!("{}i", rat_string(&self.im))
        };
        format!("{}{}", rat_string(&self.re), im)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, other: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, other: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, other: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}
