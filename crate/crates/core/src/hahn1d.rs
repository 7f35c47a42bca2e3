//! One-variable q-Hahn polynomials `Q_n(x;α,β,N|q)` in the normalization
//! adapted to raising and lowering operators, the q-Racah polynomials
//! `r_n(x;α,β,δ,N|q)`, and the conversions to the Gasper–Rahman normalization.

use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{QError, Result};
use crate::lattice::{GridFunction, ParamSet};
use crate::qnum::{rational_sqrt, sign_power, QContext, QValue};
use crate::qops;
use crate::report::Report;

/// Degree, parameters and size of a one-variable q-Hahn polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hahn1DSpec {
    pub ctx: QContext,
    pub n: usize,
    pub alpha: QValue,
    pub beta: QValue,
    pub big_n: usize,
}

impl Hahn1DSpec {
    pub fn new(
        ctx: &QContext,
        n: usize,
        alpha: QValue,
        beta: QValue,
        big_n: usize,
    ) -> Result<Self> {
        if n > big_n {
            return Err(QError::InvalidParameters(format!(
                "degree {n} exceeds N = {big_n}"
            )));
        }
        Ok(Self {
            ctx: ctx.clone(),
            n,
            alpha,
            beta,
            big_n,
        })
    }

    fn check_x(&self, x: usize) -> Result<()> {
        if x > self.big_n {
            return Err(QError::IndexOutOfRange {
                index: x,
                size: self.big_n + 1,
            });
        }
        Ok(())
    }
}

/// Degree, parameters and size of a q-Racah polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Racah1DSpec {
    pub ctx: QContext,
    pub n: usize,
    pub alpha: QValue,
    pub beta: QValue,
    pub delta: QValue,
    pub big_n: usize,
}

impl Racah1DSpec {
    pub fn new(
        ctx: &QContext,
        n: usize,
        alpha: QValue,
        beta: QValue,
        delta: QValue,
        big_n: usize,
    ) -> Result<Self> {
        if n > big_n {
            return Err(QError::InvalidParameters(format!(
                "degree {n} exceeds N = {big_n}"
            )));
        }
        Ok(Self {
            ctx: ctx.clone(),
            n,
            alpha,
            beta,
            delta,
            big_n,
        })
    }
}

/// How to handle the half-integer power in the Gasper–Rahman q-Racah factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMode {
    /// The value itself; fails unless the radicand is a rational square.
    Exact,
    /// The square of the value, always rational.
    Squared,
}

fn nonzero(v: QValue, what: &str) -> Result<QValue> {
    if v.is_zero() {
        Err(QError::ZeroDenominator(what.to_string()))
    } else {
        Ok(v)
    }
}

/// The seed formula `q^{−n²/2}(q;q)_n (αβq^{n+1})^x (β^{−1}q^{−n};q)_x/(αq;q)_x`
/// at any `x ≥ 0`.
pub(crate) fn seed_formula(
    ctx: &QContext,
    n: usize,
    alpha: &QValue,
    beta: &QValue,
    x: usize,
) -> Result<QValue> {
    let ni = n as i64;
    let den = nonzero(ctx.pochhammer(&(alpha * ctx.q()), x), "(alpha q;q)_x")?;
    if beta.is_zero() {
        return Err(QError::ZeroDenominator("beta = 0".into()));
    }
    let b = QValue::one() / beta * ctx.q_pow(-ni);
    Ok(ctx.q_half_power(-ni * ni)
        * ctx.pochhammer(ctx.q(), n)
        * (alpha * beta * ctx.q_pow(ni + 1)).pow(x as i32)
        * ctx.pochhammer(&b, x)
        / den)
}

/// `Q_n(x;α,β,n|q)`, the kernel element of `L_n` for `h = 2`.
pub fn hahn_seed(spec: &Hahn1DSpec, x: usize) -> Result<QValue> {
    if x > spec.n {
        return Err(QError::IndexOutOfRange {
            index: x,
            size: spec.n + 1,
        });
    }
    seed_formula(&spec.ctx, spec.n, &spec.alpha, &spec.beta, x)
}

/// `Q_n` through its terminating ₃φ₂ expression.
pub fn hahn_via_phi2(spec: &Hahn1DSpec, x: usize) -> Result<QValue> {
    spec.check_x(x)?;
    let ctx = &spec.ctx;
    let (n, nn) = (spec.n as i64, spec.big_n as i64);
    let pre = ctx.q_half_power(-2 * n * nn + n * n) * ctx.pochhammer(ctx.q(), spec.big_n)
        / ctx.pochhammer(ctx.q(), spec.big_n - spec.n);
    let series = ctx.phi_sum(
        &[
            ctx.q_pow(-n),
            &spec.alpha * &spec.beta * ctx.q_pow(n + 1),
            ctx.q_pow(-(x as i64)),
        ],
        &[&spec.alpha * ctx.q(), ctx.q_pow(-nn)],
        ctx.q(),
        spec.n.min(x),
    )?;
    Ok(pre * series)
}

/// Closed form of `R_{N−1} ⋯ R_n f (x)` for `h = 2`, where `f` is given by its
/// values `f(0), …, f(n)` on `[2;n]` (indexed by the first coordinate).
pub fn raise_chain_closed_form(ctx: &QContext, f: &[QValue], big_n: usize, x: usize) -> QValue {
    let n = f.len() - 1;
    let (ni, nn, xi) = (n as i64, big_n as i64, x as i64);
    let lo = (xi - nn + ni).max(0) as usize;
    let hi = x.min(n);
    let mut acc = QValue::zero();
    for y in lo..=hi {
        let yi = y as i64;
        acc += ctx.q_binomial(nn - xi, ni - yi)
            * ctx.q_binomial(xi, yi)
            * ctx.q_pow(yi * (yi + nn - xi - ni))
            * &f[y];
    }
    ctx.pochhammer(ctx.q(), big_n - n) * ctx.q_half_power(-(nn - ni) * (nn + ni + 1)) * acc
}

/// `Q_n` as the normalized raising chain applied to the seed.
pub fn hahn_via_raising(spec: &Hahn1DSpec, x: usize) -> Result<QValue> {
    spec.check_x(x)?;
    let ctx = &spec.ctx;
    let seed = (0..=spec.n)
        .map(|y| seed_formula(ctx, spec.n, &spec.alpha, &spec.beta, y))
        .collect::<Result<Vec<_>>>()?;
    let k = spec.big_n - spec.n;
    let chain = raise_chain_closed_form(ctx, &seed, spec.big_n, x);
    Ok(ctx.q_half_power((k * (k + 1)) as i64) / ctx.pochhammer(ctx.q(), k) * chain)
}

/// `Q_n(x;α,β,N|q)`; zero when `n > N`, which is the convention used by the
/// recursions.
pub fn hahn_value(
    ctx: &QContext,
    n: usize,
    alpha: &QValue,
    beta: &QValue,
    big_n: usize,
    x: usize,
) -> Result<QValue> {
    if n > big_n {
        return Ok(QValue::zero());
    }
    hahn_via_phi2(
        &Hahn1DSpec::new(ctx, n, alpha.clone(), beta.clone(), big_n)?,
        x,
    )
}

/// `Q_n(0)` from the special-value display.
pub fn hahn_at_zero(spec: &Hahn1DSpec) -> QValue {
    let ctx = &spec.ctx;
    let (n, nn) = (spec.n as i64, spec.big_n as i64);
    ctx.q_half_power(-n * (2 * nn - n)) * ctx.pochhammer(&ctx.q_pow(nn - n + 1), spec.n)
}

/// `Q_n(N)` from the special-value display.
pub fn hahn_at_top(spec: &Hahn1DSpec) -> Result<QValue> {
    let ctx = &spec.ctx;
    let n = spec.n as i64;
    let tail = seed_formula(ctx, spec.n, &spec.alpha, &spec.beta, spec.n)?
        / (ctx.q_half_power(-n * n) * ctx.pochhammer(ctx.q(), spec.n));
    Ok(hahn_at_zero(spec) * tail)
}

/// The closed-form squared norm `⟨Q_n, Q_n⟩_{V_{2,N}}`.
pub fn hahn_norm(spec: &Hahn1DSpec) -> Result<QValue> {
    let ctx = &spec.ctx;
    let (n, nn) = (spec.n as i64, spec.big_n as i64);
    let ab = &spec.alpha * &spec.beta;
    let num = ctx.pochhammer(&(&ab * ctx.q_pow(n + 1)), spec.big_n + 1)
        * ctx.pochhammer(ctx.q(), spec.n)
        * ctx.pochhammer(&(&spec.beta * ctx.q()), spec.n);
    let den = (QValue::one() - &ab * ctx.q_pow(2 * n + 1))
        * ctx.pochhammer(ctx.q(), spec.big_n - spec.n)
        * ctx.pochhammer(&(&spec.alpha * ctx.q()), spec.n);
    let den = nonzero(den, "q-Hahn norm denominator")?;
    let e = (nn - 2 * n).pow(2) + nn + 2 * n - 2 * n * n;
    Ok(num / den * spec.alpha.pow(n as i32) * ctx.q_half_power(e))
}

/// `Q_n(·;α,β,N)` as a grid function on `[2;N]`.
pub fn hahn_grid(spec: &Hahn1DSpec) -> Result<GridFunction> {
    GridFunction::from_fn(2, spec.big_n, |x| hahn_via_phi2(spec, x[0]))
}

/// Checks the two first-order relations in `x₁,x₂` notation and the
/// eigenvalue equation for every `n ≤ N ≤ n_max`.
pub fn verify_hahn_recurrences(
    ctx: &QContext,
    alpha: &QValue,
    beta: &QValue,
    n_max: usize,
) -> Result<Report> {
    let mut report = Report::new();
    let one = QValue::one();
    let qv = |n: usize, x1: i64, total: i64| -> Result<QValue> {
        if x1 < 0 || total < 0 || x1 > total {
            return Ok(QValue::zero());
        }
        hahn_value(ctx, n, alpha, beta, total as usize, x1 as usize)
    };
    for n in 0..=n_max {
        let mut bad_r = None;
        let mut bad_l = None;
        for total in 0..=n_max as i64 {
            for x1 in 0..=total {
                let x2 = total - x1;
                let ni = n as i64;
                // raising relation
                let lhs = ctx.q_pow(-x1 - x2) * (&one - ctx.q_pow(x1)) * qv(n, x1 - 1, total - 1)?
                    + ctx.q_pow(-x2) * (&one - ctx.q_pow(x2)) * qv(n, x1, total - 1)?;
                let rhs = (ctx.q_pow(-total + ni) - &one) * qv(n, x1, total)?;
                if lhs != rhs && bad_r.is_none() {
                    bad_r = Some(json!({ "x": [x1, x2] }));
                }
                // lowering relation
                if total < n_max as i64 {
                    let a1q = alpha * ctx.q_pow(x1 + 1);
                    let lhs = (&a1q - &one) * qv(n, x1 + 1, total + 1)?
                        + &a1q * (beta * ctx.q_pow(x2 + 1) - &one) * qv(n, x1, total + 1)?;
                    let rhs = ctx.q_pow(-ni)
                        * (alpha * beta * ctx.q_pow(total + ni + 2) - &one)
                        * qv(n, x1, total)?;
                    if lhs != rhs && bad_l.is_none() {
                        bad_l = Some(json!({ "x": [x1, x2] }));
                    }
                }
            }
        }
        report.record("hahn_raising_relation", 2, n, bad_r);
        report.record("hahn_lowering_relation", 2, n, bad_l);
    }
    let p = ParamSet::new(ctx.clone(), vec![alpha.clone(), beta.clone()]);
    for big_n in 0..=n_max {
        let mut bad = None;
        for n in 0..=big_n {
            let g = hahn_grid(&Hahn1DSpec::new(
                ctx,
                n,
                alpha.clone(),
                beta.clone(),
                big_n,
            )?)?;
            let lambda = qops::eigenvalue(&p, 2, n);
            if bad.is_none() {
                bad = qops::mismatch(&qops::apply_d(&g, &p)?, &g.scale(&lambda))
                    .map(|v| json!({ "n": n, "diff": v }));
            }
        }
        report.record("hahn_eigenvalue", 2, big_n, bad);
    }
    Ok(report)
}

/// Exact check of the alternating-sum identity for the seed `Q_n(x;α,β,n|q)`.
pub fn vandermonde_sum_check(
    ctx: &QContext,
    n: usize,
    j: usize,
    alpha: &QValue,
    beta: &QValue,
) -> Result<bool> {
    let mut lhs = QValue::zero();
    for x in 0..=j {
        let xi = x as i64;
        lhs +=
            sign_power(xi) * ctx.q_pow(xi * (xi - 1) / 2) * seed_formula(ctx, n, alpha, beta, x)?
                / (ctx.pochhammer(ctx.q(), x) * ctx.pochhammer(ctx.q(), j - x));
    }
    let ni = n as i64;
    let den = nonzero(
        ctx.pochhammer(&(alpha * ctx.q()), j) * ctx.pochhammer(ctx.q(), j),
        "(alpha q, q;q)_j",
    )?;
    let rhs = ctx.pochhammer(&(alpha * beta * ctx.q_pow(ni + 1)), j) / den
        * ctx.q_half_power(-ni * ni)
        * ctx.pochhammer(ctx.q(), n);
    Ok(lhs == rhs)
}

/// `r_n(x;α,β,δ,N|q)` in the normalization used for connection coefficients.
pub fn racah(spec: &Racah1DSpec, x: usize) -> Result<QValue> {
    if x > spec.big_n {
        return Err(QError::IndexOutOfRange {
            index: x,
            size: spec.big_n + 1,
        });
    }
    let ctx = &spec.ctx;
    let (n, nn, xi) = (spec.n as i64, spec.big_n as i64, x as i64);
    let ab = &spec.alpha * &spec.beta;
    let bd = &spec.beta * &spec.delta;
    let den = nonzero(
        ctx.pochhammer(&(&ab * ctx.q_pow(n + 1)), spec.n) * ctx.pochhammer(ctx.q(), spec.n),
        "(alpha beta q^(n+1), q;q)_n",
    )?;
    let pre = ctx.q_pow(-n * (nn - n))
        * ctx.pochhammer(&(&bd * ctx.q()), spec.n)
        * ctx.pochhammer(&ctx.q_pow(nn - n + 1), spec.n)
        / den;
    let series = ctx.phi_sum(
        &[
            ctx.q_pow(-n),
            &spec.delta * ctx.q_pow(xi - nn),
            ctx.q_pow(-xi),
            &ab * ctx.q_pow(n + 1),
        ],
        &[&spec.alpha * ctx.q(), &bd * ctx.q(), ctx.q_pow(-nn)],
        ctx.q(),
        spec.n.min(x),
    )?;
    Ok(pre * series)
}

/// The Gasper–Rahman q-Hahn polynomial `h_n = (−1)^{N−n} q^{−n/2} (αq;q)_n Q_n`.
pub fn gr_hahn_bridge(spec: &Hahn1DSpec, x: usize) -> Result<QValue> {
    let ctx = &spec.ctx;
    let n = spec.n as i64;
    Ok(hahn_via_phi2(spec, x)?
        * ctx.pochhammer(&(&spec.alpha * ctx.q()), spec.n)
        * sign_power(spec.big_n as i64 - n)
        * ctx.q_half_power(-n))
}

/// The Gasper–Rahman q-Racah polynomial
/// `r̃_n = (−1)^n (αβq^{n+1}, αq, q;q)_n / (q^{−N+n+1}δ)^{n/2} · r_n`, or its square.
pub fn gr_racah_bridge(spec: &Racah1DSpec, x: usize, mode: RootMode) -> Result<QValue> {
    let r = racah(spec, x)?;
    let factor = gr_racah_factor(spec, mode)?;
    Ok(match mode {
        RootMode::Exact => factor * r,
        RootMode::Squared => factor * &r * &r,
    })
}

/// The conversion factor from `r_n` to `r̃_n` (squared in squared mode).
pub fn gr_racah_factor(spec: &Racah1DSpec, mode: RootMode) -> Result<QValue> {
    let ctx = &spec.ctx;
    let n = spec.n as i64;
    let num = sign_power(n)
        * ctx.pochhammer(&(&spec.alpha * &spec.beta * ctx.q_pow(n + 1)), spec.n)
        * ctx.pochhammer(&(&spec.alpha * ctx.q()), spec.n)
        * ctx.pochhammer(ctx.q(), spec.n);
    let radicand = nonzero(
        ctx.q_pow(-(spec.big_n as i64) + n + 1) * &spec.delta,
        "q^(-N+n+1) delta",
    )?;
    match mode {
        RootMode::Squared => Ok(&num * &num / radicand.pow(n as i32)),
        RootMode::Exact => {
            let root = if n % 2 == 0 {
                radicand.pow((n / 2) as i32)
            } else {
                let s = rational_sqrt(&radicand).ok_or_else(|| {
                    QError::NonSquareRadicand(crate::qnum::format_rational(&radicand))
                })?;
                s.pow(n as i32)
            };
            Ok(num / root)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::inner_product;
    use crate::qnum::{int, rat};
    use crate::qops::apply_r;

    fn ctx() -> QContext {
        QContext::default_context()
    }

    fn spec(n: usize, big_n: usize) -> Hahn1DSpec {
        Hahn1DSpec::new(&ctx(), n, rat(1, 2), rat(1, 3), big_n).unwrap()
    }

    #[test]
    fn seed_values() {
        let c = ctx();
        let s = spec(1, 1);
        // x = 0: q^{-1/2}(q;q)_1 = 2 · 3/4
        assert_eq!(hahn_seed(&s, 0).unwrap(), rat(3, 2));
        // x = 1: q^{-1/2}(q;q)_1 · αβq² · (1 − 3q^{-1})/(1 − αq)
        let q = c.q().clone();
        let v =
            rat(3, 2) * rat(1, 6) * &q * &q * (int(1) - int(3) / &q) / (int(1) - rat(1, 2) * &q);
        assert_eq!(hahn_seed(&s, 1).unwrap(), v);
        assert_eq!(hahn_seed(&spec(0, 0), 0).unwrap(), int(1));
        assert!(hahn_seed(&s, 2).is_err());
    }

    #[test]
    fn degree_zero_is_one() {
        for big_n in 0..=4 {
            for x in 0..=big_n {
                assert_eq!(hahn_via_phi2(&spec(0, big_n), x).unwrap(), int(1));
                assert_eq!(hahn_via_raising(&spec(0, big_n), x).unwrap(), int(1));
            }
        }
    }

    #[test]
    fn routes_agree_and_special_values() {
        for (a, b) in [(rat(1, 2), rat(1, 3)), (rat(3, 5), rat(7, 2))] {
            for big_n in 0..=5 {
                for n in 0..=big_n {
                    let s = Hahn1DSpec::new(&ctx(), n, a.clone(), b.clone(), big_n).unwrap();
                    for x in 0..=big_n {
                        assert_eq!(
                            hahn_via_phi2(&s, x).unwrap(),
                            hahn_via_raising(&s, x).unwrap()
                        );
                    }
                    assert_eq!(hahn_via_phi2(&s, 0).unwrap(), hahn_at_zero(&s));
                    assert_eq!(hahn_via_phi2(&s, big_n).unwrap(), hahn_at_top(&s).unwrap());
                }
            }
        }
    }

    #[test]
    fn chain_closed_form_matches_operators() {
        let c = ctx();
        let p = ParamSet::new(c.clone(), vec![rat(1, 2), rat(1, 3)]);
        for n in 0..=3usize {
            let f = GridFunction::from_fn(2, n, |x| Ok(rat(x[0] as i64 * 2 - 3, x[1] as i64 + 4)))
                .unwrap();
            let vals: Vec<QValue> = (0..=n).map(|y| f.at(&[y, n - y]).clone()).collect();
            let mut g = f.clone();
            for big_n in n..=n + 3 {
                for x in 0..=big_n {
                    assert_eq!(
                        g.at(&[x, big_n - x]),
                        &raise_chain_closed_form(&c, &vals, big_n, x)
                    );
                }
                g = apply_r(&g, &p).unwrap();
            }
        }
    }

    #[test]
    fn seed_spans_kernel() {
        let c = ctx();
        let p = ParamSet::new(c.clone(), vec![rat(1, 2), rat(1, 3)]);
        for n in 1..=4 {
            let s = spec(n, n);
            let g = hahn_grid(&s).unwrap();
            assert!(qops::apply_l(&g, &p).unwrap().is_zero());
        }
    }

    #[test]
    fn orthogonality_and_norms() {
        let c = ctx();
        for (a, b) in [(rat(1, 2), rat(1, 3)), (rat(3, 5), rat(7, 2))] {
            let p = ParamSet::new(c.clone(), vec![a.clone(), b.clone()]);
            for big_n in 0..=4 {
                let grids: Vec<_> = (0..=big_n)
                    .map(|n| {
                        hahn_grid(&Hahn1DSpec::new(&c, n, a.clone(), b.clone(), big_n).unwrap())
                            .unwrap()
                    })
                    .collect();
                for n in 0..=big_n {
                    for m in 0..=big_n {
                        let ip = inner_product(&grids[n], &grids[m], &p).unwrap();
                        if n == m {
                            let s = Hahn1DSpec::new(&c, n, a.clone(), b.clone(), big_n).unwrap();
                            assert_eq!(ip, hahn_norm(&s).unwrap());
                        } else {
                            assert!(ip.is_zero());
                        }
                    }
                }
            }
        }
        // n = 0 simplification of the norm
        let s = spec(0, 3);
        let q = c.q().clone();
        let expected = c.pochhammer(&(rat(1, 6) * &q * &q), 3) / c.pochhammer(&q, 3) * c.q_pow(6);
        assert_eq!(hahn_norm(&s).unwrap(), expected);
    }

    #[test]
    fn recurrences() {
        let r = verify_hahn_recurrences(&ctx(), &rat(1, 2), &rat(1, 3), 4).unwrap();
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn vandermonde() {
        let c = ctx();
        for n in 0..=4 {
            for j in 0..=4 {
                assert!(vandermonde_sum_check(&c, n, j, &rat(2, 7), &rat(5, 3)).unwrap());
            }
        }
    }

    #[test]
    fn polynomial_degree_in_q_to_minus_x() {
        // Newton divided differences on the nodes q^{-x}: order n is nonzero, order n+1 vanishes.
        let c = ctx();
        let big_n = 5;
        let nodes: Vec<QValue> = (0..=big_n).map(|x| c.q_pow(-(x as i64))).collect();
        for n in 0..big_n {
            let s = spec(n, big_n);
            let mut table: Vec<QValue> =
                (0..=big_n).map(|x| hahn_via_phi2(&s, x).unwrap()).collect();
            let mut orders = vec![table[0].clone()];
            for k in 1..=big_n {
                table = (0..table.len() - 1)
                    .map(|i| (&table[i + 1] - &table[i]) / (&nodes[i + k] - &nodes[i]))
                    .collect();
                orders.push(table[0].clone());
            }
            assert!(!orders[n].is_zero());
            assert!(orders[n + 1..].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn racah_basics() {
        let c = ctx();
        let (a, b, d) = (rat(1, 3), rat(1, 2), rat(2, 5));
        for big_n in 0..=4 {
            for x in 0..=big_n {
                let s = Racah1DSpec::new(&c, 0, a.clone(), b.clone(), d.clone(), big_n).unwrap();
                assert_eq!(racah(&s, x).unwrap(), int(1));
            }
            for n in 0..=big_n {
                let s = Racah1DSpec::new(&c, n, a.clone(), b.clone(), d.clone(), big_n).unwrap();
                let (ni, nn) = (n as i64, big_n as i64);
                let expected = c.q_pow(-ni * (nn - ni))
                    * c.pochhammer(&(&b * &d * c.q()), n)
                    * c.pochhammer(&c.q_pow(nn - ni + 1), n)
                    / (c.pochhammer(&(&a * &b * c.q_pow(ni + 1)), n) * c.pochhammer(c.q(), n));
                assert_eq!(racah(&s, 0).unwrap(), expected);
            }
        }
    }

    #[test]
    fn gr_bridges() {
        let c = ctx();
        for big_n in 0..=3 {
            let h0 = gr_hahn_bridge(&spec(0, big_n), 0).unwrap();
            assert_eq!(h0, sign_power(big_n as i64));
        }
        let s = Racah1DSpec::new(&c, 0, rat(1, 3), rat(1, 2), rat(2, 5), 2).unwrap();
        assert_eq!(gr_racah_bridge(&s, 1, RootMode::Exact).unwrap(), int(1));
        // n = 1, N = 2, δ = 1/9: radicand q^{-2+2} δ = 1/9, root 1/3.
        let s = Racah1DSpec::new(&c, 1, rat(1, 3), rat(1, 2), rat(1, 9), 2).unwrap();
        let q = c.q().clone();
        let factor =
            -(int(1) - rat(1, 6) * &q * &q) * (int(1) - rat(1, 3) * &q) * (int(1) - &q) * int(3);
        for x in 0..=2 {
            let r = racah(&s, x).unwrap();
            let exact = gr_racah_bridge(&s, x, RootMode::Exact).unwrap();
            assert_eq!(exact, &factor * &r);
            assert_eq!(
                gr_racah_bridge(&s, x, RootMode::Squared).unwrap(),
                &exact * &exact
            );
        }
        let s = Racah1DSpec::new(&c, 1, rat(1, 3), rat(1, 2), rat(2, 5), 2).unwrap();
        assert!(matches!(
            gr_racah_bridge(&s, 1, RootMode::Exact),
            Err(QError::NonSquareRadicand(_))
        ));
        assert!(gr_racah_bridge(&s, 1, RootMode::Squared).is_ok());
    }
}
