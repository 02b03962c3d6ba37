use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Mul, Sub};

/// Currency amount in thousandths of a euro.
///
/// The reference catalog prices one inspection at 41.624 EUR, so whole
/// cents are not enough to accumulate costs exactly. Amounts are rounded to
/// cents only when reported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_millis(millis: i64) -> Self {
        Money(millis)
    }

    /// Nearest representable amount; `None` for non-finite input.
    pub fn from_euros(euros: f64) -> Option<Self> {
        if !euros.is_finite() || euros.abs() > 9.0e12 {
            return None;
        }
        Some(Money(libm::round(euros * 1000.0) as i64))
    }

    pub const fn millis(self) -> i64 {
        self.0
    }

    /// Whole cents, rounding half away from zero.
    pub fn cents(self) -> i64 {
        let q = self.0 / 10;
        let r = self.0 % 10;
        if r >= 5 {
            q + 1
        } else if r <= -5 {
            q - 1
        } else {
            q
        }
    }

    /// Euros rounded to the cent.
    pub fn euros(self) -> f64 {
        self.cents() as f64 / 100.0
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Mul<i64> for Money {
    type Output = Money;
    fn mul(self, rhs: i64) -> Money {
        Money(self.0 * rhs)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.cents();
        let sign = if c < 0 { "-" } else { "" };
        write!(f, "{sign}{}.{:02}", c.abs() / 100, c.abs() % 100)
    }
}

/// Serialised as a euro amount with all three decimals, so documents
/// round-trip exactly.
#[cfg(feature = "serde")]
impl serde::Serialize for Money {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0 as f64 / 1000.0)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Money {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Money::from_euros(v).ok_or_else(|| serde::de::Error::custom("amount out of range"))
    }
}
