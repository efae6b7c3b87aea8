//! Truncated single, double and triple sums.
//!
//! The convolution sums are evaluated through prefix tables:
//! `sum_{k<n} sum_{j<=k} c(j)c(k-j) = sum_i c(i) S(n-1-i)` with `S` the
//! prefix sums of `c`, and the triple analogue nests one level deeper.

mod factored;
mod oracles;

use std::ops::{Add, Mul};

use num_traits::Zero;

pub use factored::{factored_double, factored_single, factored_triple, CommonDenominator};
pub use oracles::{
    multiplicative_extension, oracle_antisymmetry, oracle_shift_identity, oracle_square_identity,
    oracle_triple_identities,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SumsError {
    #[error("c({index}) is nonzero outside the support 0..={bound}")]
    SupportViolation { index: usize, bound: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
}

/// Terms `c(0..n)` with their running sums.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixTable<T> {
    terms: Vec<T>,
    prefix: Vec<T>,
}

impl<T> PrefixTable<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    pub fn new(terms: Vec<T>) -> Self {
        let mut prefix = Vec::with_capacity(terms.len());
        let mut acc = T::zero();
        for t in &terms {
            acc = &acc + t;
            prefix.push(acc.clone());
        }
        PrefixTable { terms, prefix }
    }

    pub fn terms(&self) -> &[T] {
        &self.terms
    }

    /// `S(m) = c(0) + ... + c(m)`.
    pub fn prefix(&self, m: usize) -> &T {
        &self.prefix[m]
    }

    pub fn total(&self) -> T {
        self.prefix.last().cloned().unwrap_or_else(T::zero)
    }
}

/// `sum_k terms[k]`.
pub fn single_sum<T>(terms: &[T]) -> T
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    terms.iter().fold(T::zero(), |acc, t| &acc + t)
}

/// `sum_{k<n} sum_{j<=k} c(j) c(k-j)` with `n = terms.len()`.
pub fn double_sum<T>(terms: &[T]) -> T
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let n = terms.len();
    let table = PrefixTable::new(terms.to_vec());
    (0..n).fold(T::zero(), |acc, i| {
        &acc + &(&terms[i] * table.prefix(n - 1 - i))
    })
}

/// `sum_{i+j+s<=n-1} c(i) c(j) c(s)` with `n = terms.len()`.
pub fn triple_sum<T>(terms: &[T]) -> T
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let n = terms.len();
    // pair[m] = sum_{j+s=m} c(j)c(s); its prefix sums count pairs with j+s <= m
    let pair: Vec<T> = (0..n)
        .map(|m| (0..=m).fold(T::zero(), |acc, j| &acc + &(&terms[j] * &terms[m - j])))
        .collect();
    let pairs = PrefixTable::new(pair);
    (0..n).fold(T::zero(), |acc, i| {
        &acc + &(&terms[i] * pairs.prefix(n - 1 - i))
    })
}

/// The double sum by its definition, `O(n^2)` products.
pub fn literal_double_sum<T>(terms: &[T]) -> T
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let mut acc = T::zero();
    for k in 0..terms.len() {
        for j in 0..=k {
            acc = &acc + &(&terms[j] * &terms[k - j]);
        }
    }
    acc
}

/// The triple sum by its definition, `O(n^3)` products.
pub fn literal_triple_sum<T>(terms: &[T]) -> T
where
    T: Clone + Zero,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let n = terms.len();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n - i {
            for s in 0..n - i - j {
                acc = &acc + &(&(&terms[i] * &terms[j]) * &terms[s]);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{IntPoly, RatFunc};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn ones(n: usize) -> Vec<BigRational> {
        vec![rat(1, 1); n]
    }

    #[test]
    fn counting_examples() {
        assert_eq!(single_sum(&ones(5)), rat(5, 1));
        assert_eq!(double_sum(&ones(3)), rat(6, 1));
        assert_eq!(triple_sum(&ones(2)), rat(4, 1));
        assert_eq!(triple_sum(&ones(3)), rat(10, 1));
        let indicator = vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
        assert_eq!(double_sum(&indicator), rat(1, 1));
        assert_eq!(triple_sum(&indicator), rat(1, 1));
    }

    #[test]
    fn q_power_examples() {
        let powers: Vec<RatFunc> = (0..4).map(RatFunc::q_pow).collect();
        assert_eq!(
            single_sum(&powers),
            RatFunc::from_poly(IntPoly::from_i64s(&[1, 1, 1, 1]))
        );
        assert_eq!(
            double_sum(&powers[..2]),
            RatFunc::from_poly(IntPoly::from_i64s(&[1, 2]))
        );
    }

    #[test]
    fn prefix_table_differences() {
        let t = PrefixTable::new(vec![rat(1, 2), rat(-3, 4), rat(5, 1)]);
        for m in 1..3 {
            assert_eq!(t.prefix(m) - t.prefix(m - 1), t.terms()[m]);
        }
        assert_eq!(t.total(), rat(19, 4));
    }

    fn rationals(max_len: usize) -> impl Strategy<Value = Vec<BigRational>> {
        prop::collection::vec((-50i64..50, 1i64..20), 1..=max_len).prop_map(|v| {
            v.into_iter()
                .map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn prefix_double_matches_literal(c in rationals(12)) {
            prop_assert_eq!(double_sum(&c), literal_double_sum(&c));
        }

        #[test]
        fn prefix_triple_matches_literal(c in rationals(10)) {
            prop_assert_eq!(triple_sum(&c), literal_triple_sum(&c));
        }
    }
}
