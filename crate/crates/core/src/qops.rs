//! The multidimensional q-Hahn operator `D_N`, its raising and lowering
//! factors, and an exact verifier for their algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{QError, Result};
use crate::lattice::{
    composition_count, enumerate_compositions, inner_product_weighted, partial_sums, rank, weights,
    Composition, GridFunction, ParamSet, ScaledGrid,
};
use crate::linalg::{self, Matrix};
use crate::qnum::{format_rational, QValue};
use crate::report::Report;

/// Which operator to materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    D,
    R,
    L,
}

fn check_params(f: &GridFunction, p: &ParamSet) -> Result<()> {
    if p.h() < f.h() {
        return Err(QError::DimensionMismatch(format!(
            "{} parameters for a function of {} variables",
            p.h(),
            f.h()
        )));
    }
    Ok(())
}

/// Nonzero terms `(rank, coefficient)` of `D` acting on the variables
/// `x_{lo+1}, …, x_hi` at the point `x`, with the local parameters and the
/// local degree in place of `N`.
fn d_local_terms(x: &[usize], lo: usize, hi: usize, p: &ParamSet) -> Vec<(usize, QValue)> {
    let ctx = p.ctx();
    let y = &x[lo..hi];
    let m = y.len();
    let big_m: usize = y.iter().sum();
    let yy = partial_sums(y);
    let big_a = |k: usize| p.big_a(lo + k) / p.big_a(lo);
    let alpha = |j: usize| p.alpha(lo + j);
    let mi = big_m as i64;
    let one = QValue::one();

    let mut terms = Vec::new();
    let mut pt: Composition = x.to_vec();
    for i in 1..=m {
        if y[i - 1] == 0 {
            continue;
        }
        let di = &one - ctx.q_pow(y[i - 1] as i64);
        for j in 1..=m {
            if i == j {
                continue;
            }
            let e = (j as i64 - 1) + yy[j - 1] as i64 + yy[i - 1] as i64 - mi - i64::from(i < j);
            let c = big_a(j - 1)
                * ctx.q_pow(e)
                * (alpha(j) * ctx.q_pow(y[j - 1] as i64 + 1) - &one)
                * &di;
            pt[lo + i - 1] -= 1;
            pt[lo + j - 1] += 1;
            if !c.is_zero() {
                terms.push((rank(&pt), c));
            }
            pt[lo + i - 1] += 1;
            pt[lo + j - 1] -= 1;
        }
    }
    let mut diag =
        (p.big_a(hi) / p.big_a(lo) * ctx.q_pow(m as i64 + mi - 1) - &one) * (&one - ctx.q_pow(-mi));
    for j in 1..=m {
        let qx = ctx.q_pow(y[j - 1] as i64);
        diag += big_a(j - 1)
            * ctx.q_pow(j as i64 - 1 + 2 * yy[j - 1] as i64 - mi)
            * (alpha(j) * &qx - &one)
            * (&one - &qx);
    }
    if !diag.is_zero() {
        terms.push((rank(x), diag));
    }
    terms
}

fn d_local(x: &[usize], lo: usize, hi: usize, p: &ParamSet, f: &GridFunction) -> QValue {
    d_local_terms(x, lo, hi, p)
        .into_iter()
        .map(|(r, c)| c * &f.values()[r])
        .sum()
}

/// `D` at a vertex span materialized once on `[h;N]`: each row holds integer
/// coefficients over a common row denominator, so applying it to an
/// integer-scaled function needs no gcd work.
#[derive(Clone, Debug)]
pub struct IntegerOperator {
    h: usize,
    n: usize,
    rows: Vec<(Vec<(usize, BigInt)>, BigInt)>,
}

impl IntegerOperator {
    pub fn d_at_vertex(h: usize, n: usize, p: &ParamSet, lo: usize, hi: usize) -> Result<Self> {
        if p.h() < h {
            return Err(QError::DimensionMismatch(format!(
                "{} parameters for {h} variables",
                p.h()
            )));
        }
        if lo >= hi || hi > h {
            return Err(QError::InvalidSlice { lo, hi, h });
        }
        let rows = enumerate_compositions(h, n)
            .par_iter()
            .map(|x| {
                let terms = d_local_terms(x, lo, hi, p);
                let den = terms
                    .iter()
                    .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
                let ints = terms
                    .into_iter()
                    .map(|(r, c)| (r, c.numer() * (&den / c.denom())))
                    .collect();
                (ints, den)
            })
            .collect();
        Ok(Self { h, n, rows })
    }

    pub fn apply(&self, f: &ScaledGrid) -> Result<GridFunction> {
        let values = self
            .rows
            .iter()
            .map(|(row, den)| {
                let acc: BigInt = row.iter().map(|(r, c)| c * &f.ints[*r]).sum();
                QValue::new(acc, den * &f.den)
            })
            .collect();
        GridFunction::from_values(self.h, self.n, values)
    }

    /// First point `x` (by rank) where `(Op f)(x) ≠ λ f(x)`.
    pub fn eigen_mismatch(&self, f: &ScaledGrid, lambda: &QValue) -> Option<usize> {
        assert_eq!(
            f.ints.len(),
            self.rows.len(),
            "grid and operator sizes differ"
        );
        self.rows.iter().enumerate().position(|(k, (row, den))| {
            let lhs: BigInt = row.iter().map(|(r, c)| c * &f.ints[*r]).sum();
            lhs * lambda.denom() != lambda.numer() * den * &f.ints[k]
        })
    }
}

/// `D_N f`.
pub fn apply_d(f: &GridFunction, p: &ParamSet) -> Result<GridFunction> {
    apply_d_at_vertex(f, p, 0, f.h())
}

/// The q-Hahn operator in the variables `x_{lo+1}, …, x_hi`, applied fiberwise.
pub fn apply_d_at_vertex(
    f: &GridFunction,
    p: &ParamSet,
    lo: usize,
    hi: usize,
) -> Result<GridFunction> {
    check_params(f, p)?;
    if lo >= hi || hi > f.h() {
        return Err(QError::InvalidSlice { lo, hi, h: f.h() });
    }
    let pts = enumerate_compositions(f.h(), f.total());
    let values = pts.par_iter().map(|x| d_local(x, lo, hi, p, f)).collect();
    GridFunction::from_values(f.h(), f.total(), values)
}

/// `R_N f`, a function on `[h;N+1]`.
pub fn apply_r(f: &GridFunction, p: &ParamSet) -> Result<GridFunction> {
    check_params(f, p)?;
    let ctx = p.ctx();
    let (h, n) = (f.h(), f.total());
    let pts = enumerate_compositions(h, n + 1);
    let values = pts
        .par_iter()
        .map(|x| {
            let xx = partial_sums(x);
            let mut acc = QValue::zero();
            let mut pt = x.clone();
            for i in 1..=h {
                if x[i - 1] == 0 {
                    continue;
                }
                pt[i - 1] -= 1;
                let v = f.at(&pt);
                if !v.is_zero() {
                    acc += ctx.q_pow(xx[i - 1] as i64 - n as i64 - 1)
                        * (QValue::one() - ctx.q_pow(x[i - 1] as i64))
                        * v;
                }
                pt[i - 1] += 1;
            }
            acc
        })
        .collect();
    GridFunction::from_values(h, n + 1, values)
}

/// `L_N f`, a function on `[h;N−1]`.
pub fn apply_l(f: &GridFunction, p: &ParamSet) -> Result<GridFunction> {
    check_params(f, p)?;
    let ctx = p.ctx();
    let (h, n) = (f.h(), f.total());
    if n == 0 {
        return Err(QError::EmptyDomain);
    }
    let pts = enumerate_compositions(h, n - 1);
    let values = pts
        .par_iter()
        .map(|x| {
            let xx = partial_sums(x);
            let mut acc = QValue::zero();
            let mut pt = x.clone();
            for j in 1..=h {
                pt[j - 1] += 1;
                let v = f.at(&pt);
                if !v.is_zero() {
                    acc += p.big_a(j - 1)
                        * ctx.q_pow(j as i64 - 1 + xx[j - 1] as i64)
                        * (p.alpha(j) * ctx.q_pow(x[j - 1] as i64 + 1) - QValue::one())
                        * v;
                }
                pt[j - 1] -= 1;
            }
            acc
        })
        .collect();
    GridFunction::from_values(h, n - 1, values)
}

/// `R_{N−1} ⋯ R_n f` for `f` on level `n`.
pub fn apply_r_chain(f: &GridFunction, p: &ParamSet, target: usize) -> Result<GridFunction> {
    if target < f.total() {
        return Err(QError::InvalidParameters(format!(
            "cannot raise from level {} down to {target}",
            f.total()
        )));
    }
    let mut g = f.clone();
    while g.total() < target {
        g = apply_r(&g, p)?;
    }
    Ok(g)
}

fn apply_kind(kind: OperatorKind, f: &GridFunction, p: &ParamSet) -> Result<GridFunction> {
    match kind {
        OperatorKind::D => apply_d(f, p),
        OperatorKind::R => apply_r(f, p),
        OperatorKind::L => apply_l(f, p),
    }
}

/// Matrix of an operator on `V_{h,N}` in the lexicographic delta bases;
/// column `r` is the image of the `r`-th delta function.
pub fn to_matrix(kind: OperatorKind, h: usize, n: usize, p: &ParamSet) -> Result<Matrix> {
    let cols = composition_count(h, n);
    let images = (0..cols)
        .map(|r| apply_kind(kind, &GridFunction::delta(h, n, r), p))
        .collect::<Result<Vec<_>>>()?;
    let rows = images.first().map_or(0, GridFunction::len);
    Ok((0..rows)
        .map(|i| images.iter().map(|g| g.values()[i].clone()).collect())
        .collect())
}

/// A basis of `Ker L_n` by exact null-space computation. `Ker L_0 = V_{h,0}`.
pub fn kernel_basis(h: usize, n: usize, p: &ParamSet) -> Result<Vec<GridFunction>> {
    if n == 0 {
        return Ok(vec![GridFunction::constant(h, 0, QValue::one())]);
    }
    let m = to_matrix(OperatorKind::L, h, n, p)?;
    linalg::null_space(&m, composition_count(h, n))
        .into_iter()
        .map(|v| GridFunction::from_values(h, n, v))
        .collect()
}

/// The eigenvalue of `D_N` on the raised copy of `Ker L_n`.
pub fn eigenvalue(p: &ParamSet, h: usize, n: usize) -> QValue {
    let ctx = p.ctx();
    let n = n as i64;
    ctx.q_pow(-n)
        * (QValue::one() - ctx.q_pow(n))
        * (QValue::one() - p.big_a(h) * ctx.q_pow(n + h as i64 - 1))
}

/// First point where two grid functions differ, as a JSON counterexample.
pub fn mismatch(lhs: &GridFunction, rhs: &GridFunction) -> Option<Value> {
    if lhs.h() != rhs.h() || lhs.total() != rhs.total() {
        return Some(json!({ "reason": "shape mismatch" }));
    }
    let pts = enumerate_compositions(lhs.h(), lhs.total());
    lhs.values()
        .iter()
        .zip(rhs.values())
        .zip(pts)
        .find(|((a, b), _)| a != b)
        .map(|((a, b), x)| json!({ "x": x, "lhs": format_rational(a), "rhs": format_rational(b) }))
}

fn scalar_mismatch(what: Value, lhs: &QValue, rhs: &QValue) -> Option<Value> {
    (lhs != rhs)
        .then(|| json!({ "at": what, "lhs": format_rational(lhs), "rhs": format_rational(rhs) }))
}

fn first_failure<I>(items: I) -> Result<Option<Value>>
where
    I: IntoParallelIterator<Item = Result<Option<Value>>>,
{
    let found: Vec<Result<Option<Value>>> = items.into_par_iter().collect();
    for r in found {
        if let Some(v) = r? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Checks the factorization, commutation, adjointness, chain and kernel
/// identities for every `N ≤ n_max` on all delta functions.
pub fn verify_operator_algebra(h: usize, n_max: usize, p: &ParamSet) -> Result<Report> {
    let ctx = p.ctx();
    let a_h = p.big_a(h).clone();
    let one = QValue::one();
    let mut report = Report::new();

    for n in 0..=n_max {
        let size = composition_count(h, n);
        let ni = n as i64;
        let hi = h as i64;

        // R L = D − (1 − q^{−N})(A q^{N+h−1} − 1) I
        if n >= 1 {
            let c = (&one - ctx.q_pow(-ni)) * (&a_h * ctx.q_pow(ni + hi - 1) - &one);
            let bad = first_failure((0..size).into_par_iter().map(|r| {
                let e = GridFunction::delta(h, n, r);
                let lhs = apply_r(&apply_l(&e, p)?, p)?;
                let rhs = apply_d(&e, p)?.axpy(&-c.clone(), &e)?;
                Ok(mismatch(&lhs, &rhs))
            }))?;
            report.record("raise_lower_factorization", h, n, bad);
        }

        // L R = D − (1 − q^{−N−1})(A q^{N+h} − 1) I
        let c = (&one - ctx.q_pow(-ni - 1)) * (&a_h * ctx.q_pow(ni + hi) - &one);
        let bad = first_failure((0..size).into_par_iter().map(|r| {
            let e = GridFunction::delta(h, n, r);
            let lhs = apply_l(&apply_r(&e, p)?, p)?;
            let rhs = apply_d(&e, p)?.axpy(&-c.clone(), &e)?;
            Ok(mismatch(&lhs, &rhs))
        }))?;
        report.record("lower_raise_factorization", h, n, bad);

        // L R − R L = q^{−N−1}(1 − q)(A q^{2N+h} − 1) I
        let c = ctx.q_pow(-ni - 1) * (&one - ctx.q()) * (&a_h * ctx.q_pow(2 * ni + hi) - &one);
        let bad = first_failure((0..size).into_par_iter().map(|r| {
            let e = GridFunction::delta(h, n, r);
            let lr = apply_l(&apply_r(&e, p)?, p)?;
            let lhs = if n >= 1 {
                lr.sub(&apply_r(&apply_l(&e, p)?, p)?)?
            } else {
                lr
            };
            Ok(mismatch(&lhs, &e.scale(&c)))
        }))?;
        report.record("commutation", h, n, bad);

        let w_n = weights(h, n, p)?;
        // ⟨L f₁, f₂⟩ = −⟨f₁, R f₂⟩ with f₁ on level N, f₂ on level N − 1.
        if n >= 1 {
            let w_prev = weights(h, n - 1, p)?;
            let prev = composition_count(h, n - 1);
            let bad = first_failure((0..size).into_par_iter().map(|a| {
                let e1 = GridFunction::delta(h, n, a);
                let le1 = apply_l(&e1, p)?;
                for b in 0..prev {
                    let e2 = GridFunction::delta(h, n - 1, b);
                    let lhs = inner_product_weighted(&le1, &e2, &w_prev)?;
                    let rhs = -inner_product_weighted(&e1, &apply_r(&e2, p)?, &w_n)?;
                    if let Some(v) = scalar_mismatch(json!([a, b]), &lhs, &rhs) {
                        return Ok(Some(v));
                    }
                }
                Ok(None)
            }))?;
            report.record("lowering_adjoint_of_raising", h, n, bad);
        }

        // ⟨D f, g⟩ = ⟨f, D g⟩
        let images = (0..size)
            .into_par_iter()
            .map(|r| apply_d(&GridFunction::delta(h, n, r), p))
            .collect::<Result<Vec<_>>>()?;
        let mut bad = None;
        'outer: for a in 0..size {
            for b in a + 1..size {
                let lhs = &images[a].values()[b] * &w_n[b];
                let rhs = &images[b].values()[a] * &w_n[a];
                if let Some(v) = scalar_mismatch(json!([a, b]), &lhs, &rhs) {
                    bad = Some(v);
                    break 'outer;
                }
            }
        }
        report.record("hahn_operator_self_adjoint", h, n, bad);
    }

    // L_N R_{N−1} ⋯ R_n = R_{N−2} ⋯ R_{n−1} L_n + q^{−N}(1 − q^{N−n})(A q^{N+n+h−1} − 1) R_{N−2} ⋯ R_n
    for top in 1..=n_max {
        for n in 0..top {
            let ti = top as i64;
            let ni = n as i64;
            let c = ctx.q_pow(-ti)
                * (&one - ctx.q_pow(ti - ni))
                * (&a_h * ctx.q_pow(ti + ni + h as i64 - 1) - &one);
            let bad = first_failure((0..composition_count(h, n)).into_par_iter().map(|r| {
                let e = GridFunction::delta(h, n, r);
                let lhs = apply_l(&apply_r_chain(&e, p, top)?, p)?;
                let mut rhs = apply_r_chain(&e, p, top - 1)?.scale(&c);
                if n >= 1 {
                    rhs = rhs.add(&apply_r_chain(&apply_l(&e, p)?, p, top - 1)?)?;
                }
                Ok(mismatch(&lhs, &rhs))
            }))?;
            report.record(&format!("lower_raise_chain_swap_from_{n}"), h, top, bad);
        }
    }

    // Kernel-restricted identities.
    let kernels = (0..=n_max)
        .map(|n| kernel_basis(h, n, p))
        .collect::<Result<Vec<_>>>()?;
    let chains: Vec<Vec<Vec<GridFunction>>> = kernels
        .par_iter()
        .enumerate()
        .map(|(n, basis)| {
            basis
                .iter()
                .map(|f| {
                    let mut levels = vec![f.clone()];
                    for _ in n..n_max {
                        levels.push(apply_r(levels.last().expect("nonempty"), p)?);
                    }
                    Ok(levels)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    for top in 0..=n_max {
        let ti = top as i64;
        // L_{m+1} ⋯ L_N R_{N−1} ⋯ R_n f for f ∈ Ker L_n
        let mut bad = None;
        for n in 0..=top {
            for chain in &chains[n] {
                let mut down = chain[top - n].clone();
                for m in (n..=top).rev() {
                    if m < top {
                        down = apply_l(&down, p)?;
                    }
                    let (mi, ni) = (m as i64, n as i64);
                    let k = top - m;
                    let sign = if k.is_multiple_of(2) {
                        one.clone()
                    } else {
                        -one.clone()
                    };
                    let c = sign
                        * ctx.q_half_power(-(ti - mi) * (ti + mi + 1))
                        * ctx.pochhammer(&ctx.q_pow(mi - ni + 1), k)
                        * ctx.pochhammer(&(&a_h * ctx.q_pow(ni + mi + h as i64)), k);
                    let rhs = chain[m - n].scale(&c);
                    if bad.is_none() {
                        bad = mismatch(&down, &rhs).map(|v| json!({ "n": n, "m": m, "diff": v }));
                    }
                }
            }
        }
        report.record("lower_chain_collapse_on_kernel", h, top, bad);

        // ⟨R⋯R f₁, R⋯R f₂⟩ = δ q^{−(N−n)(N+n+1)/2} (q;q)_{N−n} (A q^{2n+h};q)_{N−n} ⟨f₁, f₂⟩
        let w_top = weights(h, top, p)?;
        let mut bad = None;
        for n in 0..=top {
            let w_n = weights(h, n, p)?;
            for m in 0..=top {
                for (a, c1) in chains[m].iter().enumerate() {
                    for (b, c2) in chains[n].iter().enumerate() {
                        if bad.is_some() {
                            continue;
                        }
                        let lhs = inner_product_weighted(&c1[top - m], &c2[top - n], &w_top)?;
                        let rhs = if n == m {
                            let ni = n as i64;
                            let k = top - n;
                            ctx.q_half_power(-(ti - ni) * (ti + ni + 1))
                                * ctx.pochhammer(ctx.q(), k)
                                * ctx.pochhammer(&(&a_h * ctx.q_pow(2 * ni + h as i64)), k)
                                * inner_product_weighted(&c1[0], &c2[0], &w_n)?
                        } else {
                            QValue::zero()
                        };
                        bad =
                            scalar_mismatch(json!({ "m": m, "n": n, "pair": [a, b] }), &lhs, &rhs);
                    }
                }
            }
        }
        report.record("raised_kernel_inner_products", h, top, bad);

        // Ran R_{N−1} ⟂ Ker L_N
        if top >= 1 {
            let mut bad = None;
            for f in &kernels[top] {
                for r in 0..composition_count(h, top - 1) {
                    let g = apply_r(&GridFunction::delta(h, top - 1, r), p)?;
                    let v = inner_product_weighted(f, &g, &w_top)?;
                    if bad.is_none() {
                        bad = scalar_mismatch(json!(r), &v, &QValue::zero());
                    }
                }
            }
            report.record("range_of_raising_orthogonal_to_kernel", h, top, bad);
        }
    }
    Ok(report)
}

/// Kernel dimensions of `L_n` for `n ≤ N`, computed exactly.
pub fn kernel_dimensions(h: usize, n: usize, p: &ParamSet) -> Result<Vec<usize>> {
    (0..=n)
        .map(|k| kernel_basis(h, k, p).map(|b| b.len()))
        .collect()
}

/// Checks that the raised kernels fill `V_{h,N}` and that `D_N` acts on the
/// `n`-th one by `q^{−n}(1 − q^n)(1 − A_h q^{n+h−1})`.
pub fn spectral_decomposition_check(h: usize, n: usize, p: &ParamSet) -> Result<Report> {
    let mut report = Report::new();
    let mut raised = Vec::new();
    let mut dims = Vec::new();
    let mut bad = None;
    for k in 0..=n {
        let basis = kernel_basis(h, k, p)?;
        dims.push(basis.len());
        let lambda = eigenvalue(p, h, k);
        for f in basis {
            let g = apply_r_chain(&f, p, n)?;
            let dg = apply_d(&g, p)?;
            if bad.is_none() {
                bad = mismatch(&dg, &g.scale(&lambda)).map(|v| json!({ "n": k, "diff": v }));
            }
            raised.push(g.values().to_vec());
        }
    }
    let total: usize = dims.iter().sum();
    let expected = composition_count(h, n);
    report.record(
        "kernel_dimensions_sum",
        h,
        n,
        (total != expected).then(|| json!({ "dims": dims, "expected": expected })),
    );
    let r = linalg::rank(&raised);
    report.record(
        "raised_kernels_span",
        h,
        n,
        (r != expected).then(|| json!({ "rank": r, "expected": expected })),
    );
    report.record("eigenvalue_on_raised_kernels", h, n, bad);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{inner_product, rank};
    use crate::qnum::{int, rat, QContext};

    fn params(h: usize) -> ParamSet {
        let all = [rat(1, 2), rat(1, 3), rat(2, 3), rat(3, 5), rat(4, 7)];
        ParamSet::new(QContext::default_context(), all[..h].to_vec())
    }

    #[test]
    fn constant_is_annihilated() {
        for h in 1..=3 {
            let p = params(h);
            for n in 0..=3 {
                let one = GridFunction::constant(h, n, int(1));
                assert!(apply_d(&one, &p).unwrap().is_zero(), "h={h} N={n}");
            }
        }
    }

    #[test]
    fn integer_operator_matches_direct_application() {
        let p = params(4);
        let f = GridFunction::from_fn(4, 3, |x| Ok(rat(rank(x) as i64 * 3 - 7, x[0] as i64 + 2)))
            .unwrap();
        let scaled = ScaledGrid::from_grid(&f);
        for (lo, hi) in [(0, 4), (1, 3), (2, 4), (0, 2)] {
            let op = IntegerOperator::d_at_vertex(4, 3, &p, lo, hi).unwrap();
            assert_eq!(
                op.apply(&scaled).unwrap(),
                apply_d_at_vertex(&f, &p, lo, hi).unwrap()
            );
        }
        let one = ScaledGrid::from_grid(&GridFunction::constant(4, 3, int(1)));
        let op = IntegerOperator::d_at_vertex(4, 3, &p, 0, 4).unwrap();
        assert_eq!(op.eigen_mismatch(&one, &QValue::zero()), None);
        assert_eq!(op.eigen_mismatch(&one, &int(1)), Some(0));
    }

    #[test]
    fn d_on_delta_h2() {
        // Hand expansion of D_1 δ_(1,0) with α = (1/2, 1/3), q = 1/4.
        let p = params(2);
        let q = p.ctx().q().clone();
        let (a1, a2) = (rat(1, 2), rat(1, 3));
        let one = int(1);
        let e = GridFunction::delta(2, 1, rank(&[1, 0]));
        let d = apply_d(&e, &p).unwrap();
        // at x = (1,0): diagonal j=1: A0 q^{0+0−1}(α1 q − 1)(1 − q); j=2: A1 q^{1+2−1}(α2 − 1)·0;
        // plus (A2 q^{2} − 1)(1 − q^{−1}).
        let diag = q.pow(-1) * (&a1 * &q - &one) * (&one - &q)
            + (&a1 * &a2 * q.pow(2) - &one) * (&one - q.pow(-1));
        assert_eq!(d.at(&[1, 0]), &diag);
        // at x = (0,1): i=2, j=1 term, A0 q^{0+0+0−1}(α1 q − 1)(1 − q).
        let off = q.pow(-1) * (&a1 * &q - &one) * (&one - &q);
        assert_eq!(d.at(&[0, 1]), &off);
    }

    #[test]
    fn small_r_and_l() {
        let p = params(1);
        let q = p.ctx().q().clone();
        let one = GridFunction::constant(1, 0, int(1));
        let r = apply_r(&one, &p).unwrap();
        assert_eq!(r.at(&[1]), &(q.pow(-1) * (int(1) - &q)));
        // [1;N] is the single point (N): L f((N−1)) = (α1 q^N − 1) f((N)).
        for n in 1..=4usize {
            let f = GridFunction::constant(1, n, int(5));
            let l = apply_l(&f, &p).unwrap();
            let expected = (rat(1, 2) * q.pow(n as i32) - int(1)) * int(5);
            assert_eq!(l.at(&[n - 1]), &expected);
        }
        let p2 = params(2);
        let e = GridFunction::delta(2, 1, rank(&[1, 0]));
        let l = apply_l(&e, &p2).unwrap();
        assert_eq!(l.at(&[0, 0]), &(rat(1, 2) * &q - int(1)));
        assert!(matches!(
            apply_l(&GridFunction::zeros(2, 0), &p2),
            Err(QError::EmptyDomain)
        ));
    }

    #[test]
    fn single_coordinate_slice_is_zero() {
        let p = params(3);
        for n in 0..=3 {
            for r in 0..composition_count(3, n) {
                let e = GridFunction::delta(3, n, r);
                assert!(apply_d_at_vertex(&e, &p, 1, 2).unwrap().is_zero());
            }
        }
        let e = GridFunction::delta(3, 2, 1);
        assert_eq!(
            apply_d_at_vertex(&e, &p, 0, 3).unwrap(),
            apply_d(&e, &p).unwrap()
        );
        assert!(matches!(
            apply_d_at_vertex(&e, &p, 2, 5),
            Err(QError::InvalidSlice { .. })
        ));
    }

    #[test]
    fn operator_algebra_small() {
        for h in 1..=3 {
            let p = params(h);
            let rep = verify_operator_algebra(h, 3, &p).unwrap();
            let bad: Vec<_> = rep.failures().collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn adjointness_on_generic_functions() {
        let p = params(2);
        let f1 =
            GridFunction::from_fn(2, 3, |x| Ok(rat(x[0] as i64 * 3 - 1, x[1] as i64 + 2))).unwrap();
        let f2 =
            GridFunction::from_fn(2, 2, |x| Ok(rat(x[1] as i64 + 5, 3 + x[0] as i64))).unwrap();
        let lhs = inner_product(&apply_l(&f1, &p).unwrap(), &f2, &p).unwrap();
        let rhs = inner_product(&f1, &apply_r(&f2, &p).unwrap(), &p).unwrap();
        assert_eq!(lhs, -rhs);
    }

    #[test]
    fn spectral_h2_and_h3() {
        let p = params(2);
        assert_eq!(kernel_dimensions(2, 4, &p).unwrap(), vec![1, 1, 1, 1, 1]);
        let p = params(3);
        assert_eq!(kernel_dimensions(3, 2, &p).unwrap(), vec![1, 2, 3]);
        assert!(spectral_decomposition_check(3, 2, &p).unwrap().all_passed());
    }
}
