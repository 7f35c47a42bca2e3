//! Exact scalars for q-series.
//!
//! Every quantity lives in ℚ. The base `q` is stored through its square root
//! `s` (with `q = s²`), so that half-integer powers `q^{k/2} = s^k` stay
//! rational.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{QError, Result};

/// The scalar type used throughout the crate.
pub type QValue = BigRational;

/// Build a rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> QValue {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integer-valued rational.
pub fn int(v: i64) -> QValue {
    BigRational::from_integer(BigInt::from(v))
}

/// Parse `"p/q"`, `"-p/q"` or `"p"` into a rational in lowest terms.
pub fn parse_rational(text: &str) -> Result<QValue> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| QError::Parse(format!("{t:?}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| QError::Parse(format!("{t:?}: {e}")))?;
        if d.is_zero() {
            return Err(QError::Parse(format!("{t:?}: zero denominator")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(t).map_err(|e| QError::Parse(format!("{t:?}: {e}")))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Serialize as `"p/q"` in lowest terms, or `"p"` when the value is an integer.
pub fn format_rational(v: &QValue) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Exact square root of a nonnegative rational, if it exists in ℚ.
pub fn rational_sqrt(v: &QValue) -> Option<QValue> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// `(-1)^k` as a rational.
pub fn sign_power(k: i64) -> QValue {
    if k.rem_euclid(2) == 0 {
        QValue::one()
    } else {
        -QValue::one()
    }
}

/// The base field: `q = s²` with rational `0 < s < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QContext {
    s: QValue,
    q: QValue,
}

impl QContext {
    pub fn new(s: QValue) -> Result<Self> {
        if !s.is_positive() || s >= QValue::one() {
            return Err(QError::InvalidParameters(format!(
                "sqrt(q) must satisfy 0 < s < 1, got {}",
                format_rational(&s)
            )));
        }
        let q = &s * &s;
        Ok(Self { s, q })
    }

    pub fn from_str_s(text: &str) -> Result<Self> {
        Self::new(parse_rational(text)?)
    }

    /// The default demonstration context, `s = 1/2`, `q = 1/4`.
    pub fn default_context() -> Self {
        Self::new(rat(1, 2)).expect("1/2 is a valid square root of q")
    }

    pub fn s(&self) -> &QValue {
        &self.s
    }

    pub fn q(&self) -> &QValue {
        &self.q
    }

    /// `q^{k/2} = s^k`.
    pub fn q_half_power(&self, k: i64) -> QValue {
        let e = i32::try_from(k).expect("q exponent out of range");
        self.s.pow(e)
    }

    /// `q^k`.
    pub fn q_pow(&self, k: i64) -> QValue {
        let e = i32::try_from(k).expect("q exponent out of range");
        self.q.pow(e)
    }

    /// The q-shifted factorial `(a;q)_k = ∏_{m<k} (1 − a q^m)`.
    pub fn pochhammer(&self, a: &QValue, k: usize) -> QValue {
        let one = QValue::one();
        let mut acc = QValue::one();
        let mut aq = a.clone();
        for _ in 0..k {
            acc *= &one - &aq;
            aq *= &self.q;
        }
        acc
    }

    /// Product `(a_1, …, a_r; q)_k`.
    pub fn pochhammer_prod(&self, args: &[QValue], k: usize) -> QValue {
        args.iter().map(|a| self.pochhammer(a, k)).product()
    }

    /// Gaussian binomial `[n, k]_q`, zero outside `0 ≤ k ≤ n`.
    pub fn q_binomial(&self, n: i64, k: i64) -> QValue {
        if k < 0 || n < 0 || k > n {
            return QValue::zero();
        }
        let k = k.min(n - k);
        let one = QValue::one();
        let mut num = QValue::one();
        let mut den = QValue::one();
        for i in 1..=k {
            num *= &one - self.q_pow(n - k + i);
            den *= &one - self.q_pow(i);
        }
        num / den
    }

    /// Terminating basic hypergeometric sum
    /// `Σ_{m=0}^{terms} ∏(a;q)_m / ∏(b;q)_m · z^m / (q;q)_m`.
    ///
    /// The sum stops early once a numerator factor vanishes.
    pub fn phi_sum(
        &self,
        numerators: &[QValue],
        denominators: &[QValue],
        z: &QValue,
        terms: usize,
    ) -> Result<QValue> {
        let one = QValue::one();
        let mut sum = QValue::one();
        let mut term = QValue::one();
        let mut qm = QValue::one();
        for m in 0..terms {
            let num: QValue = numerators.iter().map(|a| &one - a * &qm).product();
            if num.is_zero() {
                break;
            }
            let qm1 = &qm * &self.q;
            let den: QValue = denominators
                .iter()
                .map(|b| &one - b * &qm)
                .product::<QValue>()
                * (&one - &qm1);
            if den.is_zero() {
                return Err(QError::ZeroDenominator(format!(
                    "denominator Pochhammer vanishes at term {}",
                    m + 1
                )));
            }
            term = term * num * z / den;
            sum += &term;
            qm = qm1;
        }
        Ok(sum)
    }
}

/// Exact check of
/// `(A q^{h+n+i+j−1};q)_{N−i−j+1} / (1 − A q^{h+2n−1}) = (A q^{h+n+i+j−1};q)_{n−i−j} (A q^{h+2n};q)_{N−n}`.
pub fn norm_splitting_identity_check(
    ctx: &QContext,
    a: &QValue,
    h: i64,
    n: i64,
    i: i64,
    j: i64,
    big_n: i64,
) -> Result<bool> {
    if i < 0 || j < 0 || i + j > n || n > big_n {
        return Err(QError::InvalidParameters(format!(
            "need 0 <= i + j <= n <= N, got i={i} j={j} n={n} N={big_n}"
        )));
    }
    let den = QValue::one() - a * ctx.q_pow(h + 2 * n - 1);
    if den.is_zero() {
        return Err(QError::ZeroDenominator("1 - A q^(h+2n-1)".into()));
    }
    let base = a * ctx.q_pow(h + n + i + j - 1);
    let lhs = ctx.pochhammer(&base, (big_n - i - j + 1) as usize) / den;
    let rhs = ctx.pochhammer(&base, (n - i - j) as usize)
        * ctx.pochhammer(&(a * ctx.q_pow(h + 2 * n)), (big_n - n) as usize);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext {
        QContext::default_context()
    }

    #[test]
    fn half_powers() {
        let c = ctx();
        assert_eq!(c.q_half_power(0), int(1));
        assert_eq!(c.q_half_power(2), rat(1, 4));
        assert_eq!(c.q_half_power(-1), int(2));
        for k in -7..7 {
            assert_eq!(c.q_half_power(k) * c.q_half_power(-k), int(1));
        }
    }

    #[test]
    fn pochhammer_values() {
        let c = ctx();
        let a = rat(2, 7);
        assert_eq!(c.pochhammer(&a, 0), int(1));
        let q = c.q().clone();
        assert_eq!(c.pochhammer(&a, 2), (int(1) - &a) * (int(1) - &a * &q));
        assert_eq!(c.pochhammer(&q, 2), rat(45, 64));
    }

    #[test]
    fn gaussian_binomials() {
        let c = ctx();
        assert_eq!(c.q_binomial(2, 1), int(1) + c.q());
        assert_eq!(c.q_binomial(4, 2), rat(357, 256));
        assert_eq!(c.q_binomial(3, 5), int(0));
        assert_eq!(c.q_binomial(3, -1), int(0));
    }

    #[test]
    fn phi_sum_edge_cases() {
        let c = ctx();
        let z = rat(3, 5);
        assert_eq!(c.phi_sum(&[rat(1, 3)], &[], &z, 0).unwrap(), int(1));
        assert_eq!(
            c.phi_sum(&[int(1), rat(1, 3)], &[rat(1, 5)], &z, 4)
                .unwrap(),
            int(1)
        );
    }

    #[test]
    fn q_vandermonde_instance() {
        // 2phi1(q^-2, q; q^3; q, q^4) = (q^2;q)_2 / (q^3;q)_2, summed term by term.
        let c = ctx();
        let (a, b, cc) = (c.q_pow(-2), c.q_pow(1), c.q_pow(3));
        let z = c.q_pow(4);
        let mut oracle = QValue::zero();
        for m in 0..=2usize {
            oracle += c.pochhammer(&a, m) * c.pochhammer(&b, m)
                / c.pochhammer(&cc, m)
                / c.pochhammer(c.q(), m)
                * z.pow(m as i32);
        }
        let closed = c.pochhammer(&c.q_pow(2), 2) / c.pochhammer(&cc, 2);
        assert_eq!(oracle, closed);
        assert_eq!(c.phi_sum(&[a, b], &[cc], &z, 2).unwrap(), closed);
    }

    #[test]
    fn phi_sum_zero_denominator() {
        let c = ctx();
        let err = c.phi_sum(&[rat(1, 3)], &[c.q_pow(-1)], &int(1), 3);
        assert!(matches!(err, Err(QError::ZeroDenominator(_))));
    }

    #[test]
    fn norm_splitting_examples() {
        let c = ctx();
        assert!(norm_splitting_identity_check(&c, &rat(1, 3), 3, 2, 1, 0, 3).unwrap());
        assert!(norm_splitting_identity_check(&c, &rat(1, 2), 2, 1, 0, 0, 2).unwrap());
        assert!(norm_splitting_identity_check(&c, &rat(2, 9), 4, 2, 1, 1, 2).unwrap());
    }

    #[test]
    fn rational_io() {
        assert_eq!(parse_rational("-45/64").unwrap(), rat(-45, 64));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(format_rational(&rat(-45, 64)), "-45/64");
        assert_eq!(format_rational(&int(3)), "3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(QContext::from_str_s("1").is_err());
        assert!(QContext::from_str_s("-1/2").is_err());
        assert_eq!(rational_sqrt(&rat(9, 49)), Some(rat(3, 7)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }

    #[test]
    fn q_pascal_exhaustive() {
        for s in [rat(1, 2), rat(1, 3), rat(2, 5)] {
            let c = QContext::new(s).unwrap();
            for n in 1..=12i64 {
                for k in 0..=n {
                    assert_eq!(c.q_binomial(n, k), c.q_binomial(n, n - k));
                    let rec = c.q_binomial(n - 1, k) + c.q_pow(n - k) * c.q_binomial(n - 1, k - 1);
                    assert_eq!(c.q_binomial(n, k), rec, "n={n} k={k}");
                }
            }
        }
    }
}
