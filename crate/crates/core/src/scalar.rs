//! Numeric abstraction shared by every metric.
//!
//! Metrics are computed over any [`Scalar`]: `f64`/`f32` for reporting and
//! [`num_rational::BigRational`] when identities must hold exactly.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn from_days(days: i64) -> Self {
        Self::from_i64(days).expect("day count representable in scalar type")
    }

    /// Lossy conversion used for serialization and summary statistics.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {}

pub fn ratio<T: Scalar>(numer: usize, denom: usize) -> T {
    T::from_count(numer) / T::from_count(denom)
}

pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let total = values.iter().cloned().fold(T::zero(), |acc, v| acc + v);
    Some(total / T::from_count(values.len()))
}

/// Median with the even-length case averaged.
pub fn median<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        Some(sorted[mid].clone())
    } else {
        let two = T::one() + T::one();
        Some((sorted[mid - 1].clone() + sorted[mid].clone()) / two)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn mean_and_median_of_empty_are_absent() {
        assert_eq!(mean::<f64>(&[]), None);
        assert_eq!(median::<f64>(&[]), None);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }

    #[test]
    fn exact_ratio_is_exact() {
        let third: BigRational = ratio(1, 3);
        let back = third * BigRational::from_count(3);
        assert_eq!(back, BigRational::from_count(1));
        assert!((ratio::<BigRational>(1, 3).to_f64_lossy() - 1.0 / 3.0).abs() < 1e-15);
    }
}
