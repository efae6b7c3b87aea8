//! Brute-force checks of the convolution identities over exact rationals.
//!
//! Each oracle first verifies the hypotheses of its identity and refuses to
//! answer when they fail, so a passing oracle never certifies an identity
//! outside its range of validity.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{literal_double_sum, literal_triple_sum, SumsError};

fn violation(msg: impl Into<String>) -> SumsError {
    SumsError::HypothesisViolation(msg.into())
}

/// `(n - r) / d` after checking `n = r (mod d)` and the window
/// `n - floor((n-1)d / parts) <= r <= n`.
fn support_bound(
    n: usize,
    d: usize,
    r: i64,
    parts: usize,
    min_d: usize,
) -> Result<usize, SumsError> {
    let ni = n as i64;
    if d < min_d {
        return Err(violation(format!("d = {d} is below {min_d}")));
    }
    if r > ni {
        return Err(violation(format!("r = {r} exceeds n = {n}")));
    }
    if (ni - r) % d as i64 != 0 {
        return Err(violation(format!(
            "n = {n} is not congruent to r = {r} mod {d}"
        )));
    }
    let lowest = ni - ((n - 1) * d / parts) as i64;
    if r < lowest {
        return Err(violation(format!(
            "r = {r} is below n - floor((n-1)d/{parts}) = {lowest}"
        )));
    }
    Ok(((ni - r) / d as i64) as usize)
}

fn check_support(c: &[BigRational], n: usize, bound: usize) -> Result<(), SumsError> {
    if c.len() < n {
        return Err(violation(format!(
            "sequence has {} < n = {n} terms",
            c.len()
        )));
    }
    match (bound + 1..n).find(|&k| !c[k].is_zero()) {
        Some(index) => Err(SumsError::SupportViolation { index, bound }),
        None => Ok(()),
    }
}

/// `c(l n + k) = c(l n) c(k)` for every index present in `c`.
fn check_multiplicative(c: &[BigRational], n: usize) -> Result<(), SumsError> {
    for idx in n..c.len() {
        let (l, k) = (idx / n, idx % n);
        if c[idx] != &c[l * n] * &c[k] {
            return Err(violation(format!("c({idx}) != c({}) c({k})", l * n)));
        }
    }
    Ok(())
}

/// Square identity: `sum_{k<n} sum_{j<=k} c(j)c(k-j) = (sum_{j<=(n-r)/d} c(j))^2`
/// for sequences vanishing on `(n-r)/d < k <= n-1`.
pub fn oracle_square_identity(
    c: &[BigRational],
    n: usize,
    d: usize,
    r: i64,
) -> Result<bool, SumsError> {
    let m = support_bound(n, d, r, 2, 2)?;
    check_support(c, n, m)?;
    let lhs = literal_double_sum(&c[..n]);
    let s: BigRational = c[..=m].iter().sum();
    Ok(lhs == &s * &s)
}

/// Shift identity: `sum_{j<=ln+k} c(j)c(ln+k-j)
/// = sum_{t<=l} c(tn)c((l-t)n) * sum_{j<=k} c(j)c(k-j)`.
///
/// Besides the support condition this needs `c(ln+k) = c(ln)c(k)` for
/// `0 <= k < n`, checked on every supplied index.
pub fn oracle_shift_identity(
    c: &[BigRational],
    n: usize,
    d: usize,
    r: i64,
    l: usize,
    k: usize,
) -> Result<bool, SumsError> {
    let m = support_bound(n, d, r, 2, 2)?;
    check_support(c, n, m)?;
    if k >= n {
        return Err(violation(format!("k = {k} must be below n = {n}")));
    }
    let top = l * n + k;
    if c.len() <= top {
        return Err(violation(format!("sequence too short for index {top}")));
    }
    check_multiplicative(&c[..=top], n)?;
    let lhs: BigRational = (0..=top).map(|j| &c[j] * &c[top - j]).sum();
    let outer: BigRational = (0..=l).map(|t| &c[t * n] * &c[(l - t) * n]).sum();
    let inner: BigRational = (0..=k).map(|j| &c[j] * &c[k - j]).sum();
    Ok(lhs == outer * inner)
}

/// Cube and shift identities for triple sums. Both must hold.
pub fn oracle_triple_identities(
    c: &[BigRational],
    n: usize,
    d: usize,
    r: i64,
    l: usize,
    k: usize,
) -> Result<bool, SumsError> {
    let m = support_bound(n, d, r, 3, 3)?;
    check_support(c, n, m)?;
    if k >= n {
        return Err(violation(format!("k = {k} must be below n = {n}")));
    }
    let top = l * n + k;
    if c.len() <= top {
        return Err(violation(format!("sequence too short for index {top}")));
    }
    check_multiplicative(&c[..=top], n)?;

    let s: BigRational = c[..=m].iter().sum();
    let cube = literal_triple_sum(&c[..n]) == &s * &s * &s;

    let exact = |total: usize| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..=total {
            for j in 0..=total - i {
                acc += &c[i] * &c[j] * &c[total - i - j];
            }
        }
        acc
    };
    let mut outer = BigRational::zero();
    for a in 0..=l {
        let pairs: BigRational = (0..=l - a).map(|t| &c[t * n] * &c[(l - a - t) * n]).sum();
        outer += &c[a * n] * pairs;
    }
    let shift = exact(top) == outer * exact(k);
    Ok(cube && shift)
}

/// Antisymmetry lemma: if `a_k = -a_{(n-1)/2-k}` on the first half and
/// `a_k = -a_{(3n-1)/2-k}` on the second, the double sum vanishes.
pub fn oracle_antisymmetry(a: &[BigRational], n: usize) -> Result<bool, SumsError> {
    if n % 2 == 0 {
        return Err(violation(format!("n = {n} is even")));
    }
    if a.len() < n {
        return Err(violation(format!(
            "sequence has {} < n = {n} terms",
            a.len()
        )));
    }
    let half = (n - 1) / 2;
    for k in 0..=half {
        if a[k] != -&a[half - k] {
            return Err(violation(format!("a_{k} != -a_{}", half - k)));
        }
    }
    for k in half + 1..n {
        let partner = (3 * n - 1) / 2 - k;
        if a[k] != -&a[partner] {
            return Err(violation(format!("a_{k} != -a_{partner}")));
        }
    }
    Ok(literal_double_sum(&a[..n]).is_zero())
}

/// Extends `prefix = c(0..n)` (with `c(0) = 1`) to `c(0..len)` by
/// `c(ln + k) = w_l c(k)`, taking `w_0 = 1` and `w_l = weights[l-1]`.
pub fn multiplicative_extension(
    prefix: &[BigRational],
    weights: &[BigRational],
    len: usize,
) -> Vec<BigRational> {
    let n = prefix.len();
    (0..len)
        .map(|idx| {
            let (l, k) = (idx / n, idx % n);
            let w = if l == 0 {
                BigRational::one()
            } else {
                weights[l - 1].clone()
            };
            w * &prefix[k]
        })
        .collect()
}
