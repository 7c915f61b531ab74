use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex;

/// An element of `{0, 1, i, -1, -i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolValue {
    Zero,
    One,
    I,
    MinusOne,
    MinusI,
}

impl SymbolValue {
    /// `i^k`.
    pub fn from_i_power(k: u32) -> SymbolValue {
        match k % 4 {
            0 => SymbolValue::One,
            1 => SymbolValue::I,
            2 => SymbolValue::MinusOne,
            _ => SymbolValue::MinusI,
        }
    }

    /// The `k` in `i^k`, or `None` for zero.
    pub fn i_power(self) -> Option<u32> {
        match self {
            SymbolValue::Zero => None,
            SymbolValue::One => Some(0),
            SymbolValue::I => Some(1),
            SymbolValue::MinusOne => Some(2),
            SymbolValue::MinusI => Some(3),
        }
    }

    pub fn from_sign(s: i64) -> SymbolValue {
        match s.signum() {
            0 => SymbolValue::Zero,
            1 => SymbolValue::One,
            _ => SymbolValue::MinusOne,
        }
    }

    pub fn is_zero(self) -> bool {
        self == SymbolValue::Zero
    }

    pub fn pow(self, e: u64) -> SymbolValue {
        match self.i_power() {
            None if e == 0 => SymbolValue::One,
            None => SymbolValue::Zero,
            Some(k) => SymbolValue::from_i_power(((k as u64 * (e % 4)) % 4) as u32),
        }
    }

    /// Complex conjugate, which is also the inverse on non-zero values.
    pub fn conj(self) -> SymbolValue {
        match self.i_power() {
            None => SymbolValue::Zero,
            Some(k) => SymbolValue::from_i_power(4 - k),
        }
    }

    pub fn inverse(self) -> Option<SymbolValue> {
        (!self.is_zero()).then(|| self.conj())
    }

    pub fn to_complex(self) -> Complex<i64> {
        match self {
            SymbolValue::Zero => Complex::new(0, 0),
            SymbolValue::One => Complex::new(1, 0),
            SymbolValue::I => Complex::new(0, 1),
            SymbolValue::MinusOne => Complex::new(-1, 0),
            SymbolValue::MinusI => Complex::new(0, -1),
        }
    }

    /// `Some(+-1)` on real values, `None` on `+-i`.
    pub fn to_sign(self) -> Option<i64> {
        match self {
            SymbolValue::Zero => Some(0),
            SymbolValue::One => Some(1),
            SymbolValue::MinusOne => Some(-1),
            _ => None,
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        match (self.i_power(), rhs.i_power()) {
            (Some(a), Some(b)) => SymbolValue::from_i_power(a + b),
            _ => SymbolValue::Zero,
        }
    }
}

impl std::iter::Product for SymbolValue {
    fn product<I: Iterator<Item = SymbolValue>>(iter: I) -> SymbolValue {
        iter.fold(SymbolValue::One, |a, b| a * b)
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolValue::Zero => "0",
            SymbolValue::One => "1",
            SymbolValue::I => "i",
            SymbolValue::MinusOne => "-1",
            SymbolValue::MinusI => "-i",
        })
    }
}

impl FromStr for SymbolValue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "0" => SymbolValue::Zero,
            "1" => SymbolValue::One,
            "i" => SymbolValue::I,
            "-1" => SymbolValue::MinusOne,
            "-i" => SymbolValue::MinusI,
            _ => return Err(format!("not a symbol value: {s:?}")),
        })
    }
}

impl serde::Serialize for SymbolValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for SymbolValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <std::borrow::Cow<'de, str>>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
