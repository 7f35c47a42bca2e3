//! Multidimensional q-Hahn polynomials `Q_c` attached to a planar tree and a
//! coefficient labeling.
//!
//! `Q_c` is a product over internal vertices `U` (left child `W`, right child
//! `Z`) of `q^{−rcs·v(W)} Q_{c(U)}(v(W)−lcs; p(W)q^{2lcs−1}, p(Z)q^{2rcs−1},
//! v(U)−lcs−rcs)`, and vanishes unless `v(U) ≥ cs(U)` everywhere.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{QError, Result};
use crate::hahn1d::hahn_value;
use crate::lattice::{
    enumerate_compositions, partial_sums, weights, GridFunction, ParamSet, ScaledGrid,
};
use crate::linalg;
use crate::qnum::{format_rational, QContext, QValue};
use crate::qops::{apply_l, apply_r, apply_r_chain, eigenvalue, mismatch, IntegerOperator};
use crate::report::Report;
use crate::trees::{
    coefficient_sums, enumerate_labelings, p_value, Child, CoefLabeling, PlanarTree,
};

type HahnKey = (QValue, usize, QValue, QValue, usize, usize);

/// Concurrent memo of one-dimensional Hahn values keyed by
/// `(q, degree, α, β, N, x)`. Racing writers store equal values.
#[derive(Default)]
pub struct HahnCache {
    map: RwLock<HashMap<HahnKey, QValue>>,
}

impl HahnCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static HahnCache {
        static CACHE: OnceLock<HahnCache> = OnceLock::new();
        CACHE.get_or_init(HahnCache::new)
    }

    /// `Q_n(x; α, β, N)`; zero outside `0 ≤ x ≤ N` or when `n > N`.
    pub fn value(
        &self,
        ctx: &QContext,
        n: usize,
        alpha: &QValue,
        beta: &QValue,
        big_n: usize,
        x: usize,
    ) -> Result<QValue> {
        if x > big_n || n > big_n {
            return Ok(QValue::zero());
        }
        if n == 0 {
            return Ok(QValue::one());
        }
        let key = (ctx.q().clone(), n, alpha.clone(), beta.clone(), big_n, x);
        if let Some(v) = self.map.read().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = hahn_value(ctx, n, alpha, beta, big_n, x)?;
        self.map
            .write()
            .expect("cache poisoned")
            .insert(key, v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_inputs(tree: &PlanarTree, c: &CoefLabeling, params: &ParamSet) -> Result<()> {
    if params.h() < tree.h() {
        return Err(QError::DimensionMismatch(format!(
            "{} parameters for a tree with {} leaves",
            params.h(),
            tree.h()
        )));
    }
    if c.0.len() != tree.internal_count() {
        return Err(QError::DimensionMismatch(format!(
            "labeling of length {} on a tree with {} internal vertices",
            c.0.len(),
            tree.internal_count()
        )));
    }
    Ok(())
}

fn child_cs(cs: &[usize], ch: Child) -> usize {
    match ch {
        Child::Leaf(_) => 0,
        Child::Internal(k) => cs[k],
    }
}

/// Whether `x` satisfies `v(U) ≥ cs(U)` at every vertex (leaves included,
/// which amounts to checking both children of every internal vertex).
pub fn in_support(tree: &PlanarTree, c: &CoefLabeling, x: &[usize]) -> bool {
    let cs = coefficient_sums(tree, c);
    let xx = partial_sums(x);
    tree.vertices().iter().enumerate().all(|(u, v)| {
        let split = tree.split_of(u);
        xx[split] - xx[v.lo] >= child_cs(&cs, v.left)
            && xx[v.hi] - xx[split] >= child_cs(&cs, v.right)
            && xx[v.hi] - xx[v.lo] >= cs[u]
    })
}

/// `Q_c(x)` with the memo table `cache`.
pub fn eval_q_cached(
    cache: &HahnCache,
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    x: &[usize],
) -> Result<QValue> {
    check_inputs(tree, c, params)?;
    if x.len() != tree.h() {
        return Err(QError::DimensionMismatch(format!(
            "point of length {} for {} leaves",
            x.len(),
            tree.h()
        )));
    }
    let ctx = params.ctx();
    let cs = coefficient_sums(tree, c);
    let xx = partial_sums(x);
    let mut acc = QValue::one();
    for (u, v) in tree.vertices().iter().enumerate() {
        let split = tree.split_of(u);
        let (lcs, rcs) = (child_cs(&cs, v.left), child_cs(&cs, v.right));
        let (lv, rv) = (xx[split] - xx[v.lo], xx[v.hi] - xx[split]);
        if lv < lcs || rv < rcs || lv + rv < cs[u] {
            return Ok(QValue::zero());
        }
        if c.0[u] == 0 && rcs == 0 {
            continue;
        }
        let a = p_value(params, v.lo, split) * ctx.q_pow(2 * lcs as i64 - 1);
        let b = p_value(params, split, v.hi) * ctx.q_pow(2 * rcs as i64 - 1);
        let f = cache.value(ctx, c.0[u], &a, &b, lv + rv - lcs - rcs, lv - lcs)?;
        acc *= ctx.q_pow(-((rcs * lv) as i64)) * f;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// `Q_c(x)`, using the process-wide cache.
pub fn eval_q(
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    x: &[usize],
) -> Result<QValue> {
    eval_q_cached(HahnCache::global(), tree, c, params, x)
}

/// `Q_c` on all of `[h;N]`.
pub fn eval_grid(
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    big_n: usize,
) -> Result<GridFunction> {
    check_inputs(tree, c, params)?;
    let values = enumerate_compositions(tree.h(), big_n)
        .par_iter()
        .map(|x| eval_q(tree, c, params, x))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::from_values(tree.h(), big_n, values)
}

/// `Γ(U)` at the internal vertex `u`.
pub fn gamma_vertex(
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    u: usize,
) -> Result<QValue> {
    check_inputs(tree, c, params)?;
    let v = tree.vertex(u)?;
    let ctx = params.ctx();
    let cs = coefficient_sums(tree, c);
    let (lcs, rcs) = (child_cs(&cs, v.left) as i64, child_cs(&cs, v.right) as i64);
    let cu = c.0[u];
    let split = tree.split_of(u);
    let p = p_value(params, v.lo, v.hi);
    let lp = p_value(params, v.lo, split);
    let rp = p_value(params, split, v.hi);
    let lead = lp * ctx.q_pow(2 * lcs);
    let den = ctx.pochhammer(&lead, cu);
    if den.is_zero() {
        return Err(QError::ZeroDenominator(format!("Γ at vertex {u}")));
    }
    let num = ctx.pochhammer_prod(
        &[
            ctx.q().clone(),
            p * ctx.q_pow(cs[u] as i64 + lcs + rcs - 1),
            rp * ctx.q_pow(2 * rcs),
        ],
        cu,
    );
    Ok(num / den * pow_usize(&lead, cu + rcs as usize) * ctx.q_pow(-2 * lcs * rcs - cu as i64))
}

fn pow_usize(base: &QValue, e: usize) -> QValue {
    num_traits::pow(base.clone(), e)
}

/// The common level factor `(A_h q^{h+2n};q)_{N−n}/(q;q)_{N−n} q^{[(N−2n)²+N+2n−2n²]/2}`.
fn level_factor(params: &ParamSet, h: usize, n: usize, big_n: usize) -> Result<QValue> {
    if n > big_n {
        return Err(QError::InvalidParameters(format!(
            "degree {n} exceeds N = {big_n}"
        )));
    }
    let ctx = params.ctx();
    let (n, nn) = (n as i64, big_n as i64);
    let e2 = (nn - 2 * n).pow(2) + nn + 2 * n - 2 * n * n;
    let k = big_n - n as usize;
    Ok(
        ctx.pochhammer(&(params.big_a(h) * ctx.q_pow(h as i64 + 2 * n)), k)
            / ctx.pochhammer(ctx.q(), k)
            * ctx.q_half_power(e2),
    )
}

/// `‖Q_c‖²` on `[h;N]` in closed form.
pub fn norm_q(
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    big_n: usize,
) -> Result<QValue> {
    check_inputs(tree, c, params)?;
    let mut acc = level_factor(params, tree.h(), c.total(), big_n)?;
    for u in 0..tree.internal_count() {
        acc *= gamma_vertex(tree, c, params, u)?;
    }
    Ok(acc)
}

/// One basis function `Q_c` on `[h;N]`.
#[derive(Clone, Debug)]
pub struct TreeBasisElement {
    pub tree: PlanarTree,
    pub labeling: CoefLabeling,
    pub params: ParamSet,
    pub big_n: usize,
    pub grid: GridFunction,
}

impl TreeBasisElement {
    pub fn new(
        tree: &PlanarTree,
        labeling: CoefLabeling,
        params: &ParamSet,
        big_n: usize,
    ) -> Result<Self> {
        let grid = eval_grid(tree, &labeling, params, big_n)?;
        Ok(Self {
            tree: tree.clone(),
            labeling,
            params: params.clone(),
            big_n,
            grid,
        })
    }

    pub fn degree(&self) -> usize {
        self.labeling.total()
    }

    pub fn norm(&self) -> Result<QValue> {
        norm_q(&self.tree, &self.labeling, &self.params, self.big_n)
    }

    pub fn to_json(&self, gram_checked: bool) -> Result<serde_json::Value> {
        let pts = enumerate_compositions(self.tree.h(), self.big_n);
        Ok(json!({
            "tree": self.tree.serialize(),
            "labeling": self.labeling.0,
            "N": self.big_n,
            "values": pts.iter().zip(self.grid.values()).map(|(x, v)| json!({"x": x, "v": format_rational(v)})).collect::<Vec<_>>(),
            "norm": format_rational(&self.norm()?),
            "gram_checked": gram_checked,
        }))
    }
}

/// `Q_c` for every `c ∈ CL(T,n)` on `[h;N]`, in labeling order.
pub fn basis(
    tree: &PlanarTree,
    params: &ParamSet,
    n: usize,
    big_n: usize,
) -> Result<Vec<TreeBasisElement>> {
    if n > big_n {
        return Err(QError::InvalidParameters(format!(
            "degree {n} exceeds N = {big_n}"
        )));
    }
    enumerate_labelings(tree, n)
        .into_iter()
        .map(|c| TreeBasisElement::new(tree, c, params, big_n))
        .collect()
}

/// The whole basis of `V_{h,N}`, degrees `0..=N` in order.
pub fn full_basis(
    tree: &PlanarTree,
    params: &ParamSet,
    big_n: usize,
) -> Result<Vec<TreeBasisElement>> {
    let mut out = Vec::new();
    for n in 0..=big_n {
        out.extend(basis(tree, params, n, big_n)?);
    }
    Ok(out)
}

/// Lifts a basis element to level `target` through the raising operators,
/// using `R_{M}Q_c^{(M)} = (q^{n−M−1}−1) Q_c^{(M+1)}`.
pub fn raise_basis_element(elem: &TreeBasisElement, target: usize) -> Result<TreeBasisElement> {
    let ctx = elem.params.ctx();
    let n = elem.degree() as i64;
    let from = elem.big_n;
    let raised = apply_r_chain(&elem.grid, &elem.params, target)?;
    let mut scale = QValue::one();
    for m in from..target {
        let f = ctx.q_pow(n - m as i64 - 1) - QValue::one();
        if f.is_zero() {
            return Err(QError::ZeroDenominator(format!(
                "raising a degree-{n} element from level {from}"
            )));
        }
        scale /= f;
    }
    Ok(TreeBasisElement {
        tree: elem.tree.clone(),
        labeling: elem.labeling.clone(),
        params: elem.params.clone(),
        big_n: target,
        grid: raised.scale(&scale),
    })
}

/// `λ_{c,U} = q^{−cs}(1−q^{cs})(1−p(U)q^{cs−1})`.
pub fn vertex_eigenvalue(
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    u: usize,
) -> Result<QValue> {
    check_inputs(tree, c, params)?;
    let v = tree.vertex(u)?;
    let ctx = params.ctx();
    let cs = coefficient_sums(tree, c)[u] as i64;
    let p = p_value(params, v.lo, v.hi);
    Ok(ctx.q_pow(-cs) * (QValue::one() - ctx.q_pow(cs)) * (QValue::one() - p * ctx.q_pow(cs - 1)))
}

/// Checks `D_U Q_c = λ_{c,U} Q_c` at every internal vertex and the global
/// `D_N` eigenvalue.
pub fn verify_eigen(
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    big_n: usize,
) -> Result<Report> {
    EigenVerifier::new(params, tree.h(), big_n).verify(tree, c)
}

/// Eigenvalue checks on `[h;N]` sharing one materialized operator per leaf
/// span across labelings and trees.
pub struct EigenVerifier<'a> {
    params: &'a ParamSet,
    h: usize,
    big_n: usize,
    ops: Mutex<HashMap<(usize, usize), Arc<IntegerOperator>>>,
}

impl<'a> EigenVerifier<'a> {
    pub fn new(params: &'a ParamSet, h: usize, big_n: usize) -> Self {
        Self {
            params,
            h,
            big_n,
            ops: Mutex::new(HashMap::new()),
        }
    }

    fn operator(&self, lo: usize, hi: usize) -> Result<Arc<IntegerOperator>> {
        if let Some(op) = self.ops.lock().expect("operator cache").get(&(lo, hi)) {
            return Ok(op.clone());
        }
        let op = Arc::new(IntegerOperator::d_at_vertex(
            self.h,
            self.big_n,
            self.params,
            lo,
            hi,
        )?);
        self.ops
            .lock()
            .expect("operator cache")
            .insert((lo, hi), op.clone());
        Ok(op)
    }

    pub fn verify(&self, tree: &PlanarTree, c: &CoefLabeling) -> Result<Report> {
        if tree.h() != self.h {
            return Err(QError::DimensionMismatch(
                "tree size differs from the verifier's".into(),
            ));
        }
        let f = ScaledGrid::from_grid(&eval_grid(tree, c, self.params, self.big_n)?);
        let pts = enumerate_compositions(self.h, self.big_n);
        let detail = |k: usize| json!({"tree": tree.serialize(), "labeling": c.0, "x": pts[k]});
        let mut report = Report::new();
        for (u, v) in tree.vertices().iter().enumerate() {
            let op = self.operator(v.lo, v.hi)?;
            let lambda = vertex_eigenvalue(tree, c, self.params, u)?;
            report.record(
                &format!("vertex_eigenvalue_{u}"),
                self.h,
                self.big_n,
                op.eigen_mismatch(&f, &lambda).map(detail),
            );
        }
        let op = self.operator(0, self.h)?;
        let lambda = eigenvalue(self.params, self.h, c.total());
        report.record(
            "global_eigenvalue",
            self.h,
            self.big_n,
            op.eigen_mismatch(&f, &lambda).map(detail),
        );
        Ok(report)
    }
}

/// The level recursions `L_{N+1}Q^{(N+1)} = q^{−n}(A_h q^{h+N+n}−1)Q^{(N)}`
/// and `R_N Q^{(N)} = (q^{n−N−1}−1)Q^{(N+1)}`, for every level up to `n_max`.
pub fn verify_level_recursions(
    tree: &PlanarTree,
    c: &CoefLabeling,
    params: &ParamSet,
    n_max: usize,
) -> Result<Report> {
    let ctx = params.ctx();
    let h = tree.h();
    let n = c.total() as i64;
    let grids = (0..=n_max)
        .map(|m| eval_grid(tree, c, params, m))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new();
    for m in 0..n_max {
        let mi = m as i64;
        let lhs = apply_l(&grids[m + 1], params)?;
        let rhs = grids[m].scale(
            &(ctx.q_pow(-n) * (params.big_a(h) * ctx.q_pow(h as i64 + mi + n) - QValue::one())),
        );
        report.record("level_lowering", h, m + 1, mismatch(&lhs, &rhs));
        let lhs = apply_r(&grids[m], params)?;
        let rhs = grids[m + 1].scale(&(ctx.q_pow(n - mi - 1) - QValue::one()));
        report.record("level_raising", h, m, mismatch(&lhs, &rhs));
    }
    Ok(report)
}

/// Full Gram matrix of the tree basis on `[h;N]`, in basis order.
pub fn gram_matrix(elems: &[TreeBasisElement], params: &ParamSet) -> Result<linalg::Matrix> {
    let Some(first) = elems.first() else {
        return Ok(Vec::new());
    };
    let w = ScaledGrid::from_values(&weights(first.grid.h(), first.grid.total(), params)?);
    let scaled: Vec<ScaledGrid> = elems
        .iter()
        .map(|e| ScaledGrid::from_grid(&e.grid))
        .collect();
    // rows of the upper triangle; integer dot products over a common denominator
    let upper: Vec<Vec<QValue>> = scaled
        .par_iter()
        .enumerate()
        .map(|(a, fa)| {
            let wa: Vec<BigInt> = fa.ints.iter().zip(&w.ints).map(|(x, y)| x * y).collect();
            scaled[a..]
                .iter()
                .map(|fb| QValue::new(fb.dot_ints(&wa), &fa.den * &fb.den * &w.den))
                .collect()
        })
        .collect();
    let n = elems.len();
    Ok((0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if b >= a {
                        upper[a][b - a].clone()
                    } else {
                        upper[b][a - b].clone()
                    }
                })
                .collect()
        })
        .collect())
}

/// Orthogonality of the whole tree basis on `[h;N]` with closed-form norms.
pub fn verify_gram(tree: &PlanarTree, params: &ParamSet, big_n: usize) -> Result<Report> {
    let elems = full_basis(tree, params, big_n)?;
    let g = gram_matrix(&elems, params)?;
    let h = tree.h();
    let mut report = Report::new();
    let mut off = None;
    let mut bad_norm = None;
    for (a, row) in g.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            if a != b && !v.is_zero() && off.is_none() {
                off = Some(json!({
                    "tree": tree.serialize(),
                    "c": elems[a].labeling.0,
                    "d": elems[b].labeling.0,
                    "value": format_rational(v),
                }));
            }
        }
        let closed = elems[a].norm()?;
        if closed != row[a] && bad_norm.is_none() {
            bad_norm = Some(json!({
                "tree": tree.serialize(),
                "c": elems[a].labeling.0,
                "gram": format_rational(&row[a]),
                "closed_form": format_rational(&closed),
            }));
        }
    }
    report.record("tree_basis_orthogonal", h, big_n, off);
    report.record("tree_basis_norms", h, big_n, bad_norm);
    Ok(report)
}

/// Degree-`n` bases of different trees span the same subspace of `V_{h,N}`.
pub fn same_span_check(
    trees: &[PlanarTree],
    params: &ParamSet,
    n: usize,
    big_n: usize,
) -> Result<bool> {
    let mut rows = Vec::new();
    let mut dim = None;
    for t in trees {
        let b = basis(t, params, n, big_n)?;
        dim.get_or_insert(b.len());
        rows.extend(b.into_iter().map(|e| e.grid.values().to_vec()));
    }
    Ok(linalg::rank(&rows) == dim.unwrap_or(0))
}

fn index_suffix_sums(m: &[usize]) -> Vec<usize> {
    // j_k = m_{k+1} + … + m_{h−1}, stored at k for k = 0..h−1
    let mut j = vec![0; m.len() + 1];
    for k in (0..m.len()).rev() {
        j[k] = j[k + 1] + m[k];
    }
    j
}

fn index_prefix_sums(n: &[usize]) -> Vec<usize> {
    // i_k = n_2 + … + n_{k−1}, stored at k for k = 2..=h+1
    let mut i = vec![0; n.len() + 3];
    for k in 3..=n.len() + 2 {
        i[k] = i[k - 1] + n[k - 3];
    }
    i
}

fn check_comb(params: &ParamSet, idx: &[usize], x: &[usize]) -> Result<usize> {
    let h = idx.len() + 1;
    if params.h() < h || x.len() != h {
        return Err(QError::DimensionMismatch(format!(
            "index vector of length {} with {} parameters and a point of length {}",
            idx.len(),
            params.h(),
            x.len()
        )));
    }
    Ok(h)
}

/// `ξ_{m_1,…,m_{h−1}}(x)`: the right-comb polynomial as a product of
/// `q^{−j_k x_k} Q_{m_k}(x_k; α_k, A_hA_k^{−1}q^{h−k+2j_k−1}, X_h−X_{k−1}−j_k)`.
pub fn xi_polynomial(params: &ParamSet, m: &[usize], x: &[usize]) -> Result<QValue> {
    let h = check_comb(params, m, x)?;
    let ctx = params.ctx();
    let cache = HahnCache::global();
    let j = index_suffix_sums(m);
    let xx = partial_sums(x);
    let mut acc = QValue::one();
    for k in 1..h {
        let rest = xx[h] - xx[k - 1];
        if rest < j[k - 1] {
            return Ok(QValue::zero());
        }
        let beta = params.big_a(h) / params.big_a(k) * ctx.q_pow((h - k + 2 * j[k]) as i64 - 1);
        let f = cache.value(ctx, m[k - 1], params.alpha(k), &beta, rest - j[k], x[k - 1])?;
        acc *= ctx.q_pow(-((j[k] * x[k - 1]) as i64)) * f;
    }
    Ok(acc)
}

/// `θ_{n_2,…,n_h}(x)`: the left-comb polynomial as a product of
/// `Q_{n_k}(X_{k−1}−i_k; A_{k−1}q^{k+2i_k−2}, α_k, X_k−i_k)`.
pub fn theta_polynomial(params: &ParamSet, n: &[usize], x: &[usize]) -> Result<QValue> {
    let h = check_comb(params, n, x)?;
    let ctx = params.ctx();
    let cache = HahnCache::global();
    let i = index_prefix_sums(n);
    let xx = partial_sums(x);
    let mut acc = QValue::one();
    for k in 2..=h {
        if xx[k - 1] < i[k] || xx[k] < i[k + 1] {
            return Ok(QValue::zero());
        }
        let a = params.big_a(k - 1) * ctx.q_pow((k + 2 * i[k]) as i64 - 2);
        let f = cache.value(
            ctx,
            n[k - 2],
            &a,
            params.alpha(k),
            xx[k] - i[k],
            xx[k - 1] - i[k],
        )?;
        acc *= f;
    }
    Ok(acc)
}

/// The right-comb labeling carrying `ξ_m` (pre-order is `m_1, …, m_{h−1}`).
pub fn xi_labeling(m: &[usize]) -> CoefLabeling {
    CoefLabeling(m.to_vec())
}

/// The left-comb labeling carrying `θ_n` (pre-order is `n_h, …, n_2`).
pub fn theta_labeling(n: &[usize]) -> CoefLabeling {
    CoefLabeling(n.iter().rev().copied().collect())
}

/// `‖ξ_m‖²` on `[h;N]` as a product over the comb.
pub fn norm_xi(params: &ParamSet, m: &[usize], big_n: usize) -> Result<QValue> {
    let h = m.len() + 1;
    let ctx = params.ctx();
    let n: usize = m.iter().sum();
    let j = index_suffix_sums(m);
    let mut acc = level_factor(params, h, n, big_n)?;
    for k in 1..h {
        let mk = m[k - 1];
        let aq = params.alpha(k) * ctx.q();
        let num = ctx.pochhammer_prod(
            &[
                ctx.q().clone(),
                params.big_a(h) / params.big_a(k - 1) * ctx.q_pow((h - k + j[k - 1] + j[k]) as i64),
                params.big_a(h) / params.big_a(k) * ctx.q_pow((h - k + 2 * j[k]) as i64),
            ],
            mk,
        );
        let den = ctx.pochhammer(&aq, mk);
        if den.is_zero() {
            return Err(QError::ZeroDenominator(format!("ξ norm factor {k}")));
        }
        acc *= num / den * pow_usize(&aq, j[k - 1]) * ctx.q_pow(-(mk as i64));
    }
    Ok(acc)
}

fn theta_norm_with(params: &ParamSet, n: &[usize], big_n: usize, literal: bool) -> Result<QValue> {
    let h = n.len() + 1;
    let ctx = params.ctx();
    let total: usize = n.iter().sum();
    let i = index_prefix_sums(n);
    let mut acc = level_factor(params, h, total, big_n)?;
    for k in 2..=h {
        let nk = n[k - 2];
        let lead = params.big_a(k - 1) * ctx.q_pow((k + 2 * i[k]) as i64 - 1);
        let (mid, exp) = if literal {
            (k + i[k - 1] + i[k], nk + i[k])
        } else {
            (k + i[k] + i[k + 1], nk)
        };
        let num = ctx.pochhammer_prod(
            &[
                ctx.q().clone(),
                params.big_a(k) * ctx.q_pow(mid as i64 - 1),
                params.alpha(k) * ctx.q(),
            ],
            nk,
        );
        let den = ctx.pochhammer(&lead, nk);
        if den.is_zero() {
            return Err(QError::ZeroDenominator(format!("θ norm factor {k}")));
        }
        acc *= num / den * pow_usize(&lead, exp) * ctx.q_pow(-(nk as i64));
    }
    Ok(acc)
}

/// `‖θ_n‖²` on `[h;N]`, with the factor at `k` read off from `Γ` at the
/// corresponding left-comb vertex.
pub fn norm_theta(params: &ParamSet, n: &[usize], big_n: usize) -> Result<QValue> {
    theta_norm_with(params, n, big_n, false)
}

/// The θ norm product in its commonly printed form, with `i_{k−1}+i_k` in
/// the middle Pochhammer and the power `n_k+i_k`. Kept for comparison: it
/// disagrees with the Gram matrix as soon as any label is nonzero.
pub fn norm_theta_printed(params: &ParamSet, n: &[usize], big_n: usize) -> Result<QValue> {
    theta_norm_with(params, n, big_n, true)
}
