use std::fmt;

use crate::error::{Error, Result};

/// The family parameter `k`, restricted to the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 && k < 1.0 {
            Ok(Modulus(k))
        } else {
            Err(Error::ModulusOutOfRange(k))
        }
    }

    #[inline]
    pub fn k(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn k2(self) -> f64 {
        self.0 * self.0
    }
}

impl TryFrom<f64> for Modulus {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Modulus::new(k)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k = {}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_closed_endpoints_and_nan() {
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN, f64::INFINITY] {
            assert!(Modulus::new(bad).is_err(), "{bad}");
        }
        assert_eq!(Modulus::new(0.5).unwrap().k2(), 0.25);
    }
}
