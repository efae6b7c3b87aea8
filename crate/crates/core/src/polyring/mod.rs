//! Exact arithmetic in `Z[q]` and its fraction field.

mod gcd;
mod intpoly;
mod kronecker;
mod modp;
mod ratfunc;

pub use gcd::{gcd_with_cofactors, modular_gcd, poly_gcd, subresultant_gcd, GcdCofactors};
pub use intpoly::IntPoly;
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("division by zero")]
    DivideByZero,
    #[error("reduced denominator vanishes at q = {point}")]
    PoleAtPoint { point: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;
    use proptest::prelude::*;

    fn poly(max_len: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-40i64..40, 0..=max_len).prop_map(|c| IntPoly::from_i64s(&c))
    }

    fn nonzero(max_len: usize) -> impl Strategy<Value = IntPoly> {
        poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
    }

    fn monic(max_len: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..9, 0..max_len).prop_map(|mut c| {
            c.push(1);
            IntPoly::from_i64s(&c)
        })
    }

    fn wide(len: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(any::<i64>(), len..=len + 20).prop_map(|c| {
            IntPoly::from_coeffs(c.into_iter().map(|x| BigInt::from(x) << 20).collect())
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in poly(12), b in poly(12), c in poly(12)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn large_products_match_schoolbook(a in wide(40), b in wide(40)) {
            prop_assert_eq!(&a * &b, a.mul_schoolbook(&b));
        }

        #[test]
        fn division_reconstructs(a in poly(20), m in monic(8)) {
            let (quo, rem) = a.divrem(&m).unwrap();
            prop_assert_eq!(&(&quo * &m) + &rem, a);
            prop_assert!(rem.degree() < m.degree() || rem.is_zero());
        }

        #[test]
        fn gcd_divides_and_is_maximal(a in nonzero(10), b in nonzero(10), g in nonzero(6)) {
            let (x, y) = (&a * &g, &b * &g);
            let d = poly_gcd(&x, &y).unwrap();
            prop_assert!(d.divides(&x) && d.divides(&y));
            prop_assert!(g.primitive_part().divides(&d));
            if x.degree() > Some(0) && y.degree() > Some(0) {
                let (px, py) = (x.primitive_part(), y.primitive_part());
                let (px, py) = (px.shift_down(px.low_order()), py.shift_down(py.low_order()));
                if !px.is_constant() && !py.is_constant() {
                    prop_assert_eq!(modular_gcd(&px, &py), subresultant_gcd(&px, &py));
                }
            }
        }

        #[test]
        fn fractions_form_a_field(a in nonzero(8), b in nonzero(8), c in nonzero(8), d in nonzero(8)) {
            let x = RatFunc::new(num_rational::BigRational::one(), a, b).unwrap();
            let y = RatFunc::new(num_rational::BigRational::one(), c, d).unwrap();
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }
}
