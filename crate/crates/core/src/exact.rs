//! Exact number types shared by the integer-valued parts of the crate.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Complex number with integer real and imaginary parts.
pub type GaussianInt = Complex<BigInt>;

/// Complex number with exact rational parts.
pub type GaussianRational = Complex<BigRational>;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gauss(re: i64, im: i64) -> GaussianInt {
    Complex::new(BigInt::from(re), BigInt::from(im))
}

pub fn to_rational(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Lossy conversion used only when exact values feed floating-point analysis.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn int_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"7"`, `"-3/4"` or `"+12"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("`{text}` is not an exact rational"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => BigInt::from_str(text)
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
    }
}

/// Parses Gaussian integers written as `"3"`, `"-i"`, `"2-3i"`, `"4i"`.
pub fn parse_gaussian(text: &str) -> Result<GaussianInt> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("`{text}` is not a Gaussian integer"));
    if compact.is_empty() {
        return Err(bad());
    }
    let Some(body) = compact.strip_suffix('i') else {
        return BigInt::from_str(&compact)
            .map(|re| Complex::new(re, BigInt::zero()))
            .map_err(|_| bad());
    };
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (re_text, im_text) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im_text {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        other => BigInt::from_str(other).map_err(|_| bad())?,
    };
    let re = BigInt::from_str(re_text).map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}

pub fn format_gaussian(z: &GaussianInt) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        (false, false) if z.im.sign() == num_bigint::Sign::Minus => format!("{}{}i", z.re, z.im),
        (false, false) => format!("{}+{}i", z.re, z.im),
    }
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                what: "matrix rows",
                expected: 1,
                found: 0,
            });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "matrix row length",
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Zero + Clone> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }
}

impl<T: Zero + One + Clone> SquareMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { T::one() } else { T::zero() })
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.dim + c]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.dim + c]
    }
}

impl<T> SquareMatrix<T>
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn matmul(&self, other: &Self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |r, c| {
            let mut acc = T::zero();
            for k in 0..d {
                acc = acc + &self[(r, k)] * &other[(k, c)];
            }
            acc
        })
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(m, _)| !m.is_zero())
                    .fold(T::zero(), |acc, (m, x)| acc + m * x)
            })
            .collect()
    }
}

impl<T: fmt::Display> fmt::Display for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
