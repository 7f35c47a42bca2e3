//! The composition lattice `[h;N]`, grid functions on it and the weighted
//! scalar product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{QError, Result};
use crate::qnum::{format_rational, parse_rational, QContext, QValue};

/// A point `(x_1, …, x_h)` of `[h;N]`.
pub type Composition = Vec<usize>;

/// Number of compositions of `n` into `h` parts, `C(n+h−1, h−1)`.
pub fn composition_count(h: usize, n: usize) -> usize {
    if h == 0 {
        return usize::from(n == 0);
    }
    binomial(n + h - 1, h - 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All compositions of `n` into `h` parts, lexicographically increasing.
pub fn enumerate_compositions(h: usize, n: usize) -> Vec<Composition> {
    fn rec(h: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if cur.len() + 1 == h {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(h, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(composition_count(h, n));
    if h == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(h, n, &mut Vec::with_capacity(h), &mut out);
    out
}

/// Index of `x` in `enumerate_compositions(x.len(), Σx)`.
pub fn rank(x: &[usize]) -> usize {
    let h = x.len();
    let mut left: usize = x.iter().sum();
    let mut r = 0;
    for (i, &xi) in x.iter().enumerate().take(h.saturating_sub(1)) {
        for v in 0..xi {
            r += composition_count(h - i - 1, left - v);
        }
        left -= xi;
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(h: usize, n: usize, mut r: usize) -> Result<Composition> {
    let size = composition_count(h, n);
    if r >= size {
        return Err(QError::IndexOutOfRange { index: r, size });
    }
    let mut x = Vec::with_capacity(h);
    let mut left = n;
    for i in 0..h.saturating_sub(1) {
        let mut v = 0;
        loop {
            let block = composition_count(h - i - 1, left - v);
            if r < block {
                break;
            }
            r -= block;
            v += 1;
        }
        x.push(v);
        left -= v;
    }
    if h > 0 {
        x.push(left);
    }
    Ok(x)
}

/// Partial sums `X_0 = 0, X_1, …, X_h`.
pub fn partial_sums(x: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &v in x {
        acc += v;
        out.push(acc);
    }
    out
}

/// The base field together with parameters `α_1, …, α_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    ctx: QContext,
    alphas: Vec<QValue>,
    prefix: Vec<QValue>,
}

impl ParamSet {
    /// Unchecked constructor for generic-parameter identity testing.
    pub fn new(ctx: QContext, alphas: Vec<QValue>) -> Self {
        let mut prefix = Vec::with_capacity(alphas.len() + 1);
        let mut acc = QValue::one();
        prefix.push(acc.clone());
        for a in &alphas {
            acc *= a;
            prefix.push(acc.clone());
        }
        Self {
            ctx,
            alphas,
            prefix,
        }
    }

    /// Constructor enforcing the positivity ranges up to total degree `n_max`:
    /// either every `0 < α_i < q^{−1}` or every `α_i > q^{−n_max}`, and no
    /// `α_i = q^{−m}` for `1 ≤ m ≤ n_max`.
    pub fn validated(ctx: QContext, alphas: Vec<QValue>, n_max: usize) -> Result<Self> {
        let inv_q = ctx.q_pow(-1);
        let big = ctx.q_pow(-(n_max as i64));
        let low = alphas.iter().all(|a| a.is_positive() && *a < inv_q);
        let high = alphas.iter().all(|a| *a > big);
        if !low && !high {
            return Err(QError::InvalidParameters(format!(
                "alphas must all lie in (0, 1/q) or all exceed q^-{n_max}"
            )));
        }
        for (i, a) in alphas.iter().enumerate() {
            for m in 1..=n_max as i64 {
                if *a == ctx.q_pow(-m) {
                    return Err(QError::InvalidParameters(format!(
                        "alpha_{} equals q^-{m}",
                        i + 1
                    )));
                }
            }
        }
        Ok(Self::new(ctx, alphas))
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn h(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[QValue] {
        &self.alphas
    }

    /// `α_i`, one-based.
    pub fn alpha(&self, i: usize) -> &QValue {
        &self.alphas[i - 1]
    }

    /// `A_k = α_1 ⋯ α_k`, with `A_0 = 1`.
    pub fn big_a(&self, k: usize) -> &QValue {
        &self.prefix[k]
    }

    /// Parameters `α_{lo+1}, …, α_hi` as a fresh set.
    pub fn slice(&self, lo: usize, hi: usize) -> ParamSet {
        ParamSet::new(self.ctx.clone(), self.alphas[lo..hi].to_vec())
    }

    /// The first `h` parameters.
    pub fn truncate(&self, h: usize) -> ParamSet {
        self.slice(0, h)
    }

    fn check_h(&self, h: usize) -> Result<()> {
        if self.h() < h {
            return Err(QError::DimensionMismatch(format!(
                "{} parameters given, {h} needed",
                self.h()
            )));
        }
        Ok(())
    }
}

/// An element of `V_{h,N}`: one value per composition, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    h: usize,
    n: usize,
    values: Vec<QValue>,
}

impl GridFunction {
    pub fn zeros(h: usize, n: usize) -> Self {
        Self {
            h,
            n,
            values: vec![QValue::zero(); composition_count(h, n)],
        }
    }

    pub fn constant(h: usize, n: usize, v: QValue) -> Self {
        Self {
            h,
            n,
            values: vec![v; composition_count(h, n)],
        }
    }

    pub fn from_values(h: usize, n: usize, values: Vec<QValue>) -> Result<Self> {
        let size = composition_count(h, n);
        if values.len() != size {
            return Err(QError::DimensionMismatch(format!(
                "{} values for a lattice of size {size}",
                values.len()
            )));
        }
        Ok(Self { h, n, values })
    }

    pub fn from_fn<F>(h: usize, n: usize, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Result<QValue>,
    {
        let values = enumerate_compositions(h, n)
            .iter()
            .map(|x| f(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { h, n, values })
    }

    /// The indicator of the composition with the given rank.
    pub fn delta(h: usize, n: usize, r: usize) -> Self {
        let mut g = Self::zeros(h, n);
        g.values[r] = QValue::one();
        g
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn total(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[QValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, x: &[usize]) -> &QValue {
        &self.values[rank(x)]
    }

    pub fn set(&mut self, x: &[usize], v: QValue) {
        let r = rank(x);
        self.values[r] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.h != other.h || self.n != other.n {
            return Err(QError::DimensionMismatch(format!(
                "V_({},{}) vs V_({},{})",
                self.h, self.n, other.h, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { values, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { values, ..*self })
    }

    pub fn scale(&self, c: &QValue) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            ..*self
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &QValue, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + c * b)
            .collect();
        Ok(Self { values, ..*self })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = enumerate_compositions(self.h, self.n)
            .into_iter()
            .zip(&self.values)
            .map(|(x, v)| json!({ "x": x, "v": format_rational(v) }))
            .collect();
        json!({ "h": self.h, "N": self.n, "values": rows })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| QError::Parse(format!("grid function JSON: {what}"));
        let h = v["h"].as_u64().ok_or_else(|| bad("missing h"))? as usize;
        let n = v["N"].as_u64().ok_or_else(|| bad("missing N"))? as usize;
        let rows = v["values"]
            .as_array()
            .ok_or_else(|| bad("missing values"))?;
        let mut g = Self::zeros(h, n);
        if rows.len() != g.len() {
            return Err(bad("wrong number of values"));
        }
        for row in rows {
            let x: Vec<usize> = row["x"]
                .as_array()
                .ok_or_else(|| bad("row without x"))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|u| u as usize)
                        .ok_or_else(|| bad("bad x entry"))
                })
                .collect::<Result<_>>()?;
            if x.len() != h || x.iter().sum::<usize>() != n {
                return Err(bad("x is not a point of the lattice"));
            }
            let val = parse_rational(row["v"].as_str().ok_or_else(|| bad("row without v"))?)?;
            g.set(&x, val);
        }
        Ok(g)
    }
}

/// Values `ints[k] / den` with a single common denominator; used where many
/// exact sums over the same function are needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledGrid {
    pub ints: Vec<BigInt>,
    pub den: BigInt,
}

impl ScaledGrid {
    pub fn from_values(values: &[QValue]) -> Self {
        let den = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints = values
            .iter()
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        Self { ints, den }
    }

    pub fn from_grid(f: &GridFunction) -> Self {
        Self::from_values(&f.values)
    }

    /// `Σ_k a_k b_k` as an integer; the value is this over `den_a·den_b`.
    pub fn dot_ints(&self, other: &[BigInt]) -> BigInt {
        self.ints
            .iter()
            .zip(other)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// The weight of the scalar product at `x`:
/// `q^{N(N+1)/2} ∏_i (qα_i;q)_{x_i}/(q;q)_{x_i} (α_i q)^{N−X_i}`.
pub fn weight(x: &[usize], p: &ParamSet) -> Result<QValue> {
    let h = x.len();
    p.check_h(h)?;
    let ctx = p.ctx();
    let q = ctx.q();
    let n: usize = x.iter().sum();
    let big_x = partial_sums(x);
    let mut w = ctx.q_pow((n * (n + 1) / 2) as i64);
    for i in 1..=h {
        let aq = p.alpha(i) * q;
        let den = ctx.pochhammer(q, x[i - 1]);
        w *= ctx.pochhammer(&aq, x[i - 1]) / den;
        w *= aq.pow((n - big_x[i]) as i32);
    }
    Ok(w)
}

/// All weights on `[h;N]` in lexicographic order.
pub fn weights(h: usize, n: usize, p: &ParamSet) -> Result<Vec<QValue>> {
    enumerate_compositions(h, n)
        .iter()
        .map(|x| weight(x, p))
        .collect()
}

/// `⟨f,g⟩ = Σ_x weight(x)·f(x)·g(x)`.
pub fn inner_product(f: &GridFunction, g: &GridFunction, p: &ParamSet) -> Result<QValue> {
    f.check_same(g)?;
    let w = weights(f.h, f.n, p)?;
    inner_product_weighted(f, g, &w)
}

/// Scalar product with precomputed weights.
pub fn inner_product_weighted(f: &GridFunction, g: &GridFunction, w: &[QValue]) -> Result<QValue> {
    f.check_same(g)?;
    if w.len() != f.len() {
        return Err(QError::DimensionMismatch("weight table size".into()));
    }
    let mut acc = QValue::zero();
    for ((a, b), c) in f.values.iter().zip(&g.values).zip(w) {
        if !a.is_zero() && !b.is_zero() {
            acc += a * b * c;
        }
    }
    Ok(acc)
}

/// True iff every weight on `[h;N]` is strictly positive.
pub fn weight_positivity_check(h: usize, n: usize, p: &ParamSet) -> bool {
    match weights(h, n, p) {
        Ok(w) => w.iter().all(Signed::is_positive),
        Err(_) => false,
    }
}
