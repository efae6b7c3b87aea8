//! Sums of cyclotomic monomials over one shared, factored denominator.
//!
//! Every term is rewritten as `N_i / (L * D)` with integer polynomials
//! `N_i`, a positive integer `L` and `D = q^t prod Phi_j^{y_j}`, so the
//! convolutions run entirely in `Z[q]` and no gcd is ever taken.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::cyclotomic::{cyclotomic, CycloFrac, CycloMonomial};
use crate::polyring::IntPoly;

#[derive(Clone, Debug)]
pub struct CommonDenominator {
    nums: Vec<IntPoly>,
    scale: BigInt,
    den: BTreeMap<u64, u32>,
    den_q: u32,
}

impl CommonDenominator {
    pub fn new(terms: &[CycloMonomial]) -> Self {
        let mut den: BTreeMap<u64, u32> = BTreeMap::new();
        let mut den_q = 0u32;
        let mut scale = BigInt::one();
        for t in terms.iter().filter(|t| !t.is_zero()) {
            for (&j, &e) in t.phi_exponents() {
                if e < 0 {
                    let slot = den.entry(j).or_insert(0);
                    *slot = (*slot).max((-e) as u32);
                }
            }
            den_q = den_q.max((-t.q_exp()).max(0) as u32);
            scale = scale.lcm(t.coeff().denom());
        }
        let nums = terms
            .par_iter()
            .map(|t| {
                if t.is_zero() {
                    return IntPoly::zero();
                }
                let c = t.coeff().numer() * (&scale / t.coeff().denom());
                let mut exps: BTreeMap<u64, i64> =
                    den.iter().map(|(&j, &e)| (j, e as i64)).collect();
                for (&j, &e) in t.phi_exponents() {
                    *exps.entry(j).or_insert(0) += e;
                }
                let parts = exps
                    .into_iter()
                    .filter(|&(_, e)| e > 0)
                    .map(|(j, e)| cyclotomic(j).pow(e as u32));
                let shift = (t.q_exp() + den_q as i64) as usize;
                IntPoly::product(parts).shift_up(shift).scale(&c)
            })
            .collect();
        CommonDenominator {
            nums,
            scale,
            den,
            den_q,
        }
    }

    /// Numerators `N_i`.
    pub fn numerators(&self) -> &[IntPoly] {
        &self.nums
    }

    /// `value / (L * D)^power` as a factored fraction.
    fn over_power(&self, value: IntPoly, power: u32) -> CycloFrac {
        let scalar = BigRational::new(
            BigInt::one(),
            num_traits::pow(self.scale.clone(), power as usize),
        );
        let den = self.den.iter().map(|(&j, &e)| (j, e * power)).collect();
        CycloFrac::new(scalar, value, den, self.den_q * power)
    }
}

fn prefix_sums(nums: &[IntPoly]) -> Vec<IntPoly> {
    let mut acc = IntPoly::zero();
    nums.iter()
        .map(|x| {
            acc += x;
            acc.clone()
        })
        .collect()
}

fn sum_all(parts: Vec<IntPoly>) -> IntPoly {
    let mut acc = IntPoly::zero();
    for p in &parts {
        acc += p;
    }
    acc
}

pub fn factored_single(terms: &[CycloMonomial]) -> CycloFrac {
    let cd = CommonDenominator::new(terms);
    let total = sum_all(cd.nums.clone());
    cd.over_power(total, 1)
}

/// The double convolution sum of `terms`.
pub fn factored_double(terms: &[CycloMonomial]) -> CycloFrac {
    let cd = CommonDenominator::new(terms);
    let n = cd.nums.len();
    let prefix = prefix_sums(&cd.nums);
    let parts: Vec<IntPoly> = (0..n)
        .into_par_iter()
        .filter(|&i| !cd.nums[i].is_zero())
        .map(|i| &cd.nums[i] * &prefix[n - 1 - i])
        .collect();
    cd.over_power(sum_all(parts), 2)
}

/// The triple convolution sum of `terms`.
pub fn factored_triple(terms: &[CycloMonomial]) -> CycloFrac {
    let cd = CommonDenominator::new(terms);
    let nums = &cd.nums;
    let n = nums.len();
    let pair: Vec<IntPoly> = (0..n)
        .into_par_iter()
        .map(|m| {
            let mut acc = IntPoly::zero();
            for j in 0..=m / 2 {
                let k = m - j;
                if nums[j].is_zero() || nums[k].is_zero() {
                    continue;
                }
                let prod = &nums[j] * &nums[k];
                acc += &prod;
                if j != k {
                    acc += &prod;
                }
            }
            acc
        })
        .collect();
    let pair_prefix = prefix_sums(&pair);
    let parts: Vec<IntPoly> = (0..n)
        .into_par_iter()
        .filter(|&i| !nums[i].is_zero())
        .map(|i| &nums[i] * &pair_prefix[n - 1 - i])
        .collect();
    cd.over_power(sum_all(parts), 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::RatFunc;
    use crate::qterms::{CaseParams, TermId};
    use crate::sums::{double_sum, single_sum, triple_sum};

    fn terms(id: TermId, p: &CaseParams, count: u64) -> Vec<CycloMonomial> {
        (0..count).map(|k| id.monomial(p, k).unwrap()).collect()
    }

    #[test]
    fn matches_ratfunc_sums() {
        let p = CaseParams::new(5, 2, 1);
        let t = terms(TermId::Thm1_1Lhs, &p, 5);
        let r: Vec<RatFunc> = t.iter().map(CycloMonomial::to_ratfunc).collect();
        assert_eq!(factored_single(&t).to_ratfunc(), single_sum(&r));
        assert_eq!(factored_double(&t).to_ratfunc(), double_sum(&r));
        assert_eq!(factored_triple(&t).to_ratfunc(), triple_sum(&r));
    }

    #[test]
    fn handles_zero_terms_and_negative_powers() {
        let p = CaseParams::new(5, 3, 2).with("a", -10);
        let t = terms(TermId::Lemma2_2Lhs, &p, 5);
        assert!(t[2].is_zero());
        let r: Vec<RatFunc> = t.iter().map(CycloMonomial::to_ratfunc).collect();
        assert_eq!(factored_double(&t).to_ratfunc(), double_sum(&r));
        assert_eq!(factored_triple(&t).to_ratfunc(), triple_sum(&r));
    }

    #[test]
    fn empty_and_scalar_terms() {
        assert!(factored_single(&[]).is_zero());
        let t = vec![
            CycloMonomial::constant(BigRational::new(1.into(), 2.into())),
            CycloMonomial::constant(BigRational::new(1.into(), 3.into())),
        ];
        // 1/4 + 2 * 1/6
        assert_eq!(
            factored_double(&t).to_ratfunc(),
            RatFunc::from_rational(BigRational::new(7.into(), 12.into()))
        );
    }
}
