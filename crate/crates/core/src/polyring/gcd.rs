//! Polynomial gcd over `Z[q]`.
//!
//! Small inputs go through the subresultant remainder sequence. Larger ones
//! use a multi-prime modular gcd whose candidate is always confirmed by exact
//! trial division, so the answer is exact regardless of prime luck.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{modp, IntPoly, PolyError};

/// Past this degree the subresultant sequence loses to the modular route.
const SUBRESULTANT_MAX_DEGREE: usize = 24;

/// Result of a gcd computation together with the two cofactors, so callers
/// reducing a fraction do not have to divide a second time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdCofactors {
    pub gcd: IntPoly,
    pub a_over_gcd: IntPoly,
    pub b_over_gcd: IntPoly,
}

/// Primitive gcd with positive leading coefficient.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> Result<IntPoly, PolyError> {
    gcd_with_cofactors(a, b).map(|g| g.gcd)
}

pub fn gcd_with_cofactors(a: &IntPoly, b: &IntPoly) -> Result<GcdCofactors, PolyError> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(PolyError::BothZero),
        (false, true) => {
            let (c, pp) = a.primitive_split();
            return Ok(GcdCofactors {
                gcd: pp,
                a_over_gcd: IntPoly::constant(c),
                b_over_gcd: IntPoly::zero(),
            });
        }
        (true, false) => {
            let (c, pp) = b.primitive_split();
            return Ok(GcdCofactors {
                gcd: pp,
                a_over_gcd: IntPoly::zero(),
                b_over_gcd: IntPoly::constant(c),
            });
        }
        _ => {}
    }
    if a == b {
        let (c, pp) = a.primitive_split();
        return Ok(GcdCofactors {
            gcd: pp,
            a_over_gcd: IntPoly::constant(c.clone()),
            b_over_gcd: IntPoly::constant(c),
        });
    }

    // Factor out the shared power of q and the integer contents; only the
    // primitive q-free parts go through the real algorithm.
    let (la, lb) = (a.low_order(), b.low_order());
    let shift = la.min(lb);
    let (ca, pa) = a.shift_down(la).primitive_split();
    let (cb, pb) = b.shift_down(lb).primitive_split();

    let (g, qa, qb) = if pa.is_constant() || pb.is_constant() {
        (IntPoly::one(), pa, pb)
    } else if pa == pb {
        (pa, IntPoly::one(), IntPoly::one())
    } else if let Some(qa) = pa.exact_div(&pb) {
        (pb, qa, IntPoly::one())
    } else if let Some(qb) = pb.exact_div(&pa) {
        (pa, IntPoly::one(), qb)
    } else {
        let max_deg = pa.degree().max(pb.degree()).unwrap_or(0);
        let g = if max_deg <= SUBRESULTANT_MAX_DEGREE {
            subresultant_gcd(&pa, &pb)
        } else {
            modular_gcd(&pa, &pb)
        };
        if g.is_one() {
            (g, pa, pb)
        } else {
            let qa = pa.exact_div(&g).expect("gcd divides its first argument");
            let qb = pb.exact_div(&g).expect("gcd divides its second argument");
            (g, qa, qb)
        }
    };
    Ok(GcdCofactors {
        gcd: g.shift_up(shift),
        a_over_gcd: qa.scale(&ca).shift_up(la - shift),
        b_over_gcd: qb.scale(&cb).shift_up(lb - shift),
    })
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree().unwrap();
    let lc = b.leading_coeff().unwrap();
    let mut r: Vec<BigInt> = a.coeffs().to_vec();
    let mut steps = (a.degree().unwrap() + 1 - db) as u32;
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let t = r[top].clone();
        for x in r.iter_mut() {
            *x *= lc;
        }
        let off = top - db;
        for (j, bc) in b.coeffs().iter().enumerate() {
            r[off + j] -= &t * bc;
        }
        steps -= 1;
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    let mut out = IntPoly::from_coeffs(r);
    if steps > 0 {
        out = out.scale(&num_traits::pow(lc.clone(), steps as usize));
    }
    out
}

/// Subresultant PRS gcd of two nonzero polynomials, returned primitive with
/// positive leading coefficient.
pub fn subresultant_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.primitive_part(), b.primitive_part())
    } else {
        (b.primitive_part(), a.primitive_part())
    };
    if b.is_zero() {
        return a;
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let r = pseudo_rem(&a, &b);
        if r.is_zero() {
            break;
        }
        if r.is_constant() {
            return IntPoly::one();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = r.div_scalar_exact(&divisor);
        g = a.leading_coeff().unwrap().clone();
        if delta > 0 {
            let num = num_traits::pow(g.clone(), delta);
            let den = num_traits::pow(h.clone(), delta - 1);
            h = num / den;
        }
    }
    b.primitive_part()
}

/// Brown-style modular gcd of two primitive, nonconstant polynomials.
pub fn modular_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let lc_a = a.leading_coeff().unwrap();
    let lc_b = b.leading_coeff().unwrap();
    let lc_gcd = lc_a.gcd(lc_b);

    let mut modulus = BigInt::one();
    let mut image: Vec<BigInt> = Vec::new();
    let mut image_deg: Option<usize> = None;
    let mut last_lift: Option<IntPoly> = None;

    for &p in modp::primes() {
        let pb = BigInt::from(p);
        if (lc_a % &pb).is_zero() || (lc_b % &pb).is_zero() {
            continue;
        }
        let g = modp::gcd(modp::reduce(a, p), modp::reduce(b, p), p);
        let deg = g.len() - 1;
        if deg == 0 {
            return IntPoly::one();
        }
        let scale = modp::reduce_int(&lc_gcd, p);
        let scaled: Vec<u64> = g.iter().map(|&x| x * scale % p).collect();
        match image_deg {
            Some(d) if deg > d => continue,
            Some(d) if deg == d => {
                // CRT: x = image (mod modulus), x = scaled (mod p)
                let m_mod_p = modp::reduce_int(&modulus, p);
                let inv = modp::inv_mod(m_mod_p, p);
                for (x, &s) in image.iter_mut().zip(&scaled) {
                    let cur = modp::reduce_int(x, p);
                    let t = (s + p - cur) % p * inv % p;
                    *x += &modulus * BigInt::from(t);
                }
                modulus *= &pb;
            }
            _ => {
                image = scaled.iter().map(|&x| BigInt::from(x)).collect();
                modulus = pb.clone();
                image_deg = Some(deg);
                last_lift = None;
            }
        }
        let half = &modulus >> 1;
        let lifted = IntPoly::from_coeffs(
            image
                .iter()
                .map(|x| if x > &half { x - &modulus } else { x.clone() })
                .collect(),
        )
        .primitive_part();
        let small = lifted.max_bits() < 24;
        let stable = last_lift.as_ref() == Some(&lifted);
        if (small || stable) && lifted.divides(a) && lifted.divides(b) {
            return lifted;
        }
        last_lift = Some(lifted);
    }
    // 256 primes of 31 bits each cover any coefficient this engine produces;
    // reaching here means the inputs were far outside the intended scale.
    subresultant_gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 0, 0, 1])).unwrap(),
            p(&[-1, 1])
        );
        assert_eq!(
            poly_gcd(&p(&[1, 1, 1]), &p(&[1, 1])).unwrap(),
            IntPoly::one()
        );
        assert_eq!(poly_gcd(&p(&[4, 6]), &IntPoly::zero()).unwrap(), p(&[2, 3]));
        assert_eq!(
            poly_gcd(&IntPoly::zero(), &IntPoly::zero()),
            Err(PolyError::BothZero)
        );
    }

    #[test]
    fn cofactors_multiply_back() {
        let a = p(&[0, 0, -6, 0, 6]);
        let b = p(&[0, 4, 4]);
        let r = gcd_with_cofactors(&a, &b).unwrap();
        assert_eq!(&r.gcd * &r.a_over_gcd, a);
        assert_eq!(&r.gcd * &r.b_over_gcd, b);
        assert_eq!(r.gcd, p(&[0, 1, 1]));
    }

    #[test]
    fn modular_agrees_with_subresultant() {
        // (q^5 - 3q + 7)(q^30 + 2q^7 - 1) and (q^5 - 3q + 7)(5q^28 - q^3 + 4)
        let common = p(&[7, -3, 0, 0, 0, 1]);
        let mut x = vec![0i64; 31];
        x[30] = 1;
        x[7] = 2;
        x[0] = -1;
        let mut y = vec![0i64; 29];
        y[28] = 5;
        y[3] = -1;
        y[0] = 4;
        let a = &common * &p(&x);
        let b = &common * &p(&y);
        assert_eq!(modular_gcd(&a, &b), common);
        assert_eq!(subresultant_gcd(&a, &b), common);
    }

    #[test]
    fn subresultant_handles_non_monic() {
        let g = p(&[1, 2, 3]);
        let a = &g * &p(&[5, 0, 7]);
        let b = &g * &p(&[-2, 9]);
        assert_eq!(subresultant_gcd(&a, &b), g);
    }

    #[test]
    fn negative_leading_coefficient_normalised() {
        let g = poly_gcd(&p(&[1, -1]), &p(&[-1, 1])).unwrap();
        assert_eq!(g, p(&[-1, 1]));
        assert!(g.leading_coeff().unwrap().is_positive());
    }
}
