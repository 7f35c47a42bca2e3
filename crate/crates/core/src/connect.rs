//! Connection coefficients between tree bases: the one-move transplantation
//! formula, products along right-to-left paths, an inner-product oracle, the
//! `h = 3` kernel expansion, and the correspondence with the Gasper–Rahman
//! multivariable q-Racah polynomials.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{QError, Result};
use crate::hahn1d::{gr_racah_bridge, racah, Racah1DSpec, RootMode};
use crate::lattice::{
    enumerate_compositions, inner_product_weighted, weights, GridFunction, ParamSet,
};
use crate::linalg::{self, Matrix};
use crate::multihahn::{eval_grid, norm_q, norm_xi};
use crate::qnum::{format_rational, rational_sqrt, sign_power, QContext, QValue};
use crate::qops::apply_l;
use crate::report::Report;
use crate::trees::{
    coefficient_sums, enumerate_labelings, find_rl_path, p_value, replay, transplant_right_to_left,
    Child, CoefLabeling, MoveRecord, PlanarTree,
};

/// `r_n(x;α,β,δ,N)`, taken to be zero when `n > N` or `x > N` (such terms
/// correspond to labelings that do not exist).
pub fn racah_or_zero(
    ctx: &QContext,
    n: usize,
    x: usize,
    alpha: &QValue,
    beta: &QValue,
    delta: &QValue,
    big_n: usize,
) -> Result<QValue> {
    if n > big_n || x > big_n {
        return Ok(QValue::zero());
    }
    let spec = Racah1DSpec::new(ctx, n, alpha.clone(), beta.clone(), delta.clone(), big_n)?;
    racah(&spec, x)
}

/// Local data of one transplantation applied to one source labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveCoefficientSpec {
    /// `cs(T′)`, `cs(T″)`, `cs(T‴)` and `cs(U)`.
    pub i: usize,
    pub l: usize,
    pub j: usize,
    pub n_u: usize,
    /// `cs` of the old right child of `U`.
    pub v: usize,
    pub p1: QValue,
    pub p2: QValue,
    pub p3: QValue,
}

impl MoveCoefficientSpec {
    pub fn new(
        source: &PlanarTree,
        rec: &MoveRecord,
        c: &CoefLabeling,
        params: &ParamSet,
    ) -> Result<Self> {
        let u = rec.vertex;
        let vu = source.vertex(u)?;
        let z = match vu.right {
            Child::Internal(z) => z,
            Child::Leaf(_) => return Err(QError::RightChildIsLeaf(u)),
        };
        let vz = &source.vertices()[z];
        let cs = coefficient_sums(source, c);
        let side = |ch: Child| match ch {
            Child::Leaf(_) => 0,
            Child::Internal(k) => cs[k],
        };
        let (b, s, r, h) = (rec.base, rec.spans.s, rec.spans.r, rec.spans.h);
        Ok(Self {
            i: side(vu.left),
            l: side(vz.left),
            j: side(vz.right),
            n_u: cs[u],
            v: cs[z],
            p1: p_value(params, b, b + s),
            p2: p_value(params, b + s, b + r),
            p3: p_value(params, b + r, b + h),
        })
    }

    /// The coefficient of the target labeling with `cs` of the new left
    /// child equal to `u`.
    pub fn coefficient(&self, ctx: &QContext, u: usize) -> Result<QValue> {
        let (i, l, j, n) = (self.i, self.l, self.j, self.n_u);
        if u < i + l || u + j > n {
            return Ok(QValue::zero());
        }
        let x = self.v - l - j;
        let q = |e: i64| ctx.q_pow(e);
        let (ii, li, ji, ni) = (i as i64, l as i64, j as i64, n as i64);
        Ok(q(-ii * x as i64)
            * racah_or_zero(
                ctx,
                u - i - l,
                x,
                &(&self.p2 * q(2 * li - 1)),
                &(&self.p1 * q(2 * ii - 1)),
                &(&self.p2 * &self.p3 * q(ni + li + ji - ii - 1)),
                n - i - l - j,
            )?)
    }
}

/// Expands `Q_c` on the source tree of `rec` in the basis of the target tree.
/// Only the labels of `U` and of its rotated child change; zero terms are
/// dropped.
pub fn one_move_coefficients(
    source: &PlanarTree,
    rec: &MoveRecord,
    c: &CoefLabeling,
    params: &ParamSet,
) -> Result<Vec<(CoefLabeling, QValue)>> {
    let spec = MoveCoefficientSpec::new(source, rec, c, params)?;
    let ctx = params.ctx();
    let u_vertex = rec.vertex;
    let mut base = vec![0; c.0.len()];
    for (k, &t) in rec.index_map.iter().enumerate() {
        base[t] = c.0[k];
    }
    let mut out = Vec::new();
    for u in spec.i + spec.l..=spec.n_u - spec.j {
        let coef = spec.coefficient(ctx, u)?;
        if coef.is_zero() {
            continue;
        }
        let mut d = base.clone();
        d[u_vertex] = spec.n_u - u - spec.j;
        d[u_vertex + 1] = u - spec.i - spec.l;
        out.push((CoefLabeling(d), coef));
    }
    Ok(out)
}

/// `r_d(c)` for `c ∈ CL(T,n)` (rows) and `d ∈ CL(S,n)` (columns), defined by
/// `Q_c = Σ_d r_d(c) Q_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionMatrix {
    pub source: PlanarTree,
    pub target: PlanarTree,
    pub n: usize,
    pub rows: Vec<CoefLabeling>,
    pub cols: Vec<CoefLabeling>,
    pub entries: Matrix,
}

impl ConnectionMatrix {
    fn empty(source: &PlanarTree, target: &PlanarTree, n: usize) -> Self {
        let rows = enumerate_labelings(source, n);
        let cols = enumerate_labelings(target, n);
        let entries = vec![vec![QValue::zero(); cols.len()]; rows.len()];
        Self {
            source: source.clone(),
            target: target.clone(),
            n,
            rows,
            cols,
            entries,
        }
    }

    pub fn entry(&self, c: &CoefLabeling, d: &CoefLabeling) -> Option<&QValue> {
        let a = self.rows.iter().position(|r| r == c)?;
        let b = self.cols.iter().position(|r| r == d)?;
        Some(&self.entries[a][b])
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.entries.iter().enumerate().all(|(a, row)| {
                row.iter()
                    .enumerate()
                    .all(|(b, v)| if a == b { v.is_one() } else { v.is_zero() })
            })
    }

    /// `self` followed by `next` (T→S then S→U gives T→U).
    pub fn then(&self, next: &ConnectionMatrix) -> Result<ConnectionMatrix> {
        if self.target != next.source || self.n != next.n {
            return Err(QError::DimensionMismatch(
                "connection matrices do not chain".into(),
            ));
        }
        Ok(ConnectionMatrix {
            source: self.source.clone(),
            target: next.target.clone(),
            n: self.n,
            rows: self.rows.clone(),
            cols: next.cols.clone(),
            entries: linalg::mat_mul(&self.entries, &next.entries)?,
        })
    }

    /// The reverse connection S→T by exact inversion.
    pub fn inverse(&self) -> Result<ConnectionMatrix> {
        Ok(ConnectionMatrix {
            source: self.target.clone(),
            target: self.source.clone(),
            n: self.n,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries: linalg::inverse(&self.entries)?,
        })
    }

    /// First differing entry, if any.
    pub fn first_difference(&self, other: &ConnectionMatrix) -> Option<Value> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some(json!({"reason": "index sets differ"}));
        }
        for (a, (r1, r2)) in self.entries.iter().zip(&other.entries).enumerate() {
            for (b, (v1, v2)) in r1.iter().zip(r2).enumerate() {
                if v1 != v2 {
                    return Some(json!({
                        "source": self.source.serialize(),
                        "target": self.target.serialize(),
                        "c": self.rows[a].0,
                        "d": self.cols[b].0,
                        "lhs": format_rational(v1),
                        "rhs": format_rational(v2),
                    }));
                }
            }
        }
        None
    }

    /// Nonzero entries as `{"c","d","value"}` objects in row-major order.
    pub fn to_json(&self) -> Value {
        let mut out = Vec::new();
        for (a, row) in self.entries.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.push(json!({
                        "c": self.rows[a].0,
                        "d": self.cols[b].0,
                        "value": format_rational(v),
                    }));
                }
            }
        }
        Value::Array(out)
    }
}

/// Composes one-move expansions along the moves at `vertices`, starting from
/// `source`.
pub fn connection_along(
    source: &PlanarTree,
    vertices: &[usize],
    n: usize,
    params: &ParamSet,
) -> Result<ConnectionMatrix> {
    let moves = replay(source, vertices)?;
    let mut trees = vec![source.clone()];
    for &u in vertices {
        let next = transplant_right_to_left(trees.last().expect("nonempty"), u)?.0;
        trees.push(next);
    }
    let target = trees.last().expect("nonempty").clone();
    let mut m = ConnectionMatrix::empty(source, &target, n);
    let col_index: HashMap<&CoefLabeling, usize> =
        m.cols.iter().enumerate().map(|(k, d)| (d, k)).collect();
    let rows = m
        .rows
        .par_iter()
        .map(|c| {
            let mut cur: HashMap<CoefLabeling, QValue> =
                HashMap::from([(c.clone(), QValue::one())]);
            for (t, rec) in trees.iter().zip(&moves) {
                let mut next: HashMap<CoefLabeling, QValue> = HashMap::new();
                for (lab, coef) in &cur {
                    for (d, r) in one_move_coefficients(t, rec, lab, params)? {
                        *next.entry(d).or_insert_with(QValue::zero) += coef * r;
                    }
                }
                next.retain(|_, v| !v.is_zero());
                cur = next;
            }
            let mut row = vec![QValue::zero(); col_index.len()];
            for (d, v) in cur {
                row[col_index[&d]] = v;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    m.entries = rows;
    Ok(m)
}

/// The connection matrix from `T` to `S` along the breadth-first right-to-left
/// path.
pub fn connection_by_path(
    t: &PlanarTree,
    s: &PlanarTree,
    n: usize,
    params: &ParamSet,
) -> Result<ConnectionMatrix> {
    let path = find_rl_path(t, s)?;
    let vertices: Vec<usize> = path.iter().map(|m| m.vertex).collect();
    connection_along(t, &vertices, n, params)
}

/// `r_d(c) = ⟨Q_c, Q_d⟩ / ⟨Q_d, Q_d⟩` on `[h;n]`, for any pair of trees.
pub fn connection_oracle(
    t: &PlanarTree,
    s: &PlanarTree,
    n: usize,
    params: &ParamSet,
) -> Result<ConnectionMatrix> {
    if t.h() != s.h() {
        return Err(QError::DimensionMismatch(
            "trees with different leaf counts".into(),
        ));
    }
    let mut m = ConnectionMatrix::empty(t, s, n);
    let w = weights(t.h(), n, params)?;
    let src = m
        .rows
        .par_iter()
        .map(|c| eval_grid(t, c, params, n))
        .collect::<Result<Vec<_>>>()?;
    let dst = m
        .cols
        .par_iter()
        .map(|d| eval_grid(s, d, params, n))
        .collect::<Result<Vec<_>>>()?;
    let norms = dst
        .iter()
        .map(|g| {
            let v = inner_product_weighted(g, g, &w)?;
            if v.is_zero() {
                Err(QError::ZeroDenominator(
                    "basis function of zero norm".into(),
                ))
            } else {
                Ok(v)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    m.entries = src
        .par_iter()
        .map(|f| {
            dst.iter()
                .zip(&norms)
                .map(|(g, nn)| Ok(inner_product_weighted(f, g, &w)? / nn))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(m)
}

/// `Σ_c r_{d1}(c) r_{d2}(c)/‖Q_c‖² = δ_{d1,d2}/‖Q_{d1}‖²` with closed-form norms.
pub fn biorthogonality_check(m: &ConnectionMatrix, params: &ParamSet) -> Result<Option<Value>> {
    let src_norms = m
        .rows
        .iter()
        .map(|c| norm_q(&m.source, c, params, m.n))
        .collect::<Result<Vec<_>>>()?;
    let dst_norms = m
        .cols
        .iter()
        .map(|d| norm_q(&m.target, d, params, m.n))
        .collect::<Result<Vec<_>>>()?;
    for d1 in 0..m.cols.len() {
        for d2 in 0..m.cols.len() {
            let mut acc = QValue::zero();
            for (c, row) in m.entries.iter().enumerate() {
                if !row[d1].is_zero() && !row[d2].is_zero() {
                    acc += &row[d1] * &row[d2] / &src_norms[c];
                }
            }
            let expected = if d1 == d2 {
                QValue::one() / &dst_norms[d1]
            } else {
                QValue::zero()
            };
            if acc != expected {
                return Ok(Some(json!({
                    "source": m.source.serialize(),
                    "target": m.target.serialize(),
                    "d1": m.cols[d1].0,
                    "d2": m.cols[d2].0,
                    "sum": format_rational(&acc),
                    "expected": format_rational(&expected),
                })));
            }
        }
    }
    Ok(None)
}

/// Oracle agreement and biorthogonality for one ordered pair and degree.
pub fn verify_connection_pair(
    t: &PlanarTree,
    s: &PlanarTree,
    n: usize,
    params: &ParamSet,
) -> Result<Report> {
    let mut report = Report::new();
    let oracle = connection_oracle(t, s, n, params)?;
    match connection_by_path(t, s, n, params) {
        Ok(path) => {
            report.record(
                "connection_matches_oracle",
                t.h(),
                n,
                path.first_difference(&oracle),
            );
            report.record(
                "connection_biorthogonal",
                t.h(),
                n,
                biorthogonality_check(&path, params)?,
            );
        }
        Err(QError::NotRightReachable) => {
            report.record(
                "connection_biorthogonal",
                t.h(),
                n,
                biorthogonality_check(&oracle, params)?,
            );
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// All right-reachable ordered pairs of trees with `h` leaves.
pub fn right_reachable_pairs(h: usize) -> Result<Vec<(PlanarTree, PlanarTree)>> {
    let trees = PlanarTree::all_trees(h)?;
    let mut out = Vec::new();
    for a in &trees {
        for b in &trees {
            match find_rl_path(a, b) {
                Ok(_) => out.push((a.clone(), b.clone())),
                Err(QError::NotRightReachable) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// The `h = 3` kernel function `f_{N,k}`, equal to `1` at `(k,0)` and `0` at
/// the other points `(m,0)`.
pub fn kernel_interpolation_basis(
    params: &ParamSet,
    big_n: usize,
    k: usize,
) -> Result<GridFunction> {
    if params.h() < 3 {
        return Err(QError::DimensionMismatch(
            "three parameters are needed".into(),
        ));
    }
    if k > big_n {
        return Err(QError::InvalidParameters(format!(
            "k = {k} exceeds N = {big_n}"
        )));
    }
    let ctx = params.ctx();
    let (a1, a2, a3) = (params.alpha(1), params.alpha(2), params.alpha(3));
    GridFunction::from_fn(3, big_n, |x| {
        let (x1, x2) = (x[0], x[1]);
        if x1 > k || x1 + x2 < k {
            return Ok(QValue::zero());
        }
        let den = ctx.pochhammer(&(a2 * ctx.q()), x2);
        if den.is_zero() {
            return Err(QError::ZeroDenominator("(α₂q;q)_{x₂}".into()));
        }
        let (x1i, x2i, ki) = (x1 as i64, x2 as i64, k as i64);
        Ok(ctx.q_binomial(x2i, ki - x1i)
            * ctx.pochhammer(&(a1 * ctx.q_pow(x1i + 1)), k - x1)
            * ctx.pochhammer(&(a3 * ctx.q_pow((big_n - x1 - x2) as i64 + 1)), x1 + x2 - k)
            / den
            * int_pow(a1, x1i - ki)
            * int_pow(a2, x1i + x2i - ki)
            * ctx.q_pow((x1i - ki) * (x1i + x2i + 1) + x2i * (x2i + 1) / 2)
            * sign_power(x2i))
    })
}

fn int_pow(base: &QValue, e: i64) -> QValue {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        QValue::one() / num_traits::pow(base.clone(), (-e) as usize)
    }
}

/// Coefficients `a_i` with `f = Σ_i a_i θ̃_{n−i,i}` for `f ∈ Ker L_n`, `h = 3`,
/// computed from the values `f(k,0)` alone.
pub fn dunkl_expansion_coeffs(f: &GridFunction, params: &ParamSet) -> Result<Vec<QValue>> {
    if f.h() != 3 || params.h() < 3 {
        return Err(QError::DimensionMismatch(
            "the kernel expansion is for three variables".into(),
        ));
    }
    let n = f.total();
    if n > 0 && !apply_l(f, params)?.is_zero() {
        return Err(QError::NotInKernel);
    }
    let ctx = params.ctx();
    let (a1, a2, a3) = (params.alpha(1), params.alpha(2), params.alpha(3));
    let a12 = a1 * a2;
    let ni = n as i64;
    (0..=n)
        .map(|i| {
            let ii = i as i64;
            let den = ctx.pochhammer(ctx.q(), n - i)
                * ctx.pochhammer_prod(
                    &[&a12 * ctx.q_pow(ii + 1), a2 * ctx.q(), ctx.q().clone()],
                    i,
                );
            if den.is_zero() {
                return Err(QError::ZeroDenominator(format!("a_{i} prefactor")));
            }
            let pre = int_pow(&-a2.clone(), ii)
                * ctx.pochhammer(&(a1 * ctx.q()), i)
                * ctx.q_half_power(3 * ii * ii + ii + ni * ni - 2 * ni * ii)
                / den;
            let mut sum = QValue::zero();
            for k in 0..=i {
                let ki = k as i64;
                let term = int_pow(&-a12.clone(), -ki)
                    * ctx.q_pow(-ki * (ki + 1) / 2)
                    * ctx.pochhammer(&(a3 * ctx.q_pow(ni - ii + 1)), i - k)
                    * ctx.pochhammer_prod(&[ctx.q_pow(-ii), &a12 * ctx.q_pow(ii + 1)], k)
                    / ctx.pochhammer(ctx.q(), k)
                    * f.at(&[k, 0, n - k]);
                sum += term;
            }
            Ok(pre * sum)
        })
        .collect()
}

/// `θ̃_{n−i,i}` on `[3;n]`: the left-comb basis function with root label
/// `n−i` and inner label `i`.
pub fn theta_tilde(params: &ParamSet, n: usize, i: usize) -> Result<GridFunction> {
    eval_grid(
        &PlanarTree::left_comb(3)?,
        &CoefLabeling(vec![n - i, i]),
        params,
        n,
    )
}

/// `ξ̃_{n−j,j}` on `[3;n]`.
pub fn xi_tilde(params: &ParamSet, n: usize, j: usize) -> Result<GridFunction> {
    eval_grid(
        &PlanarTree::right_comb(3)?,
        &CoefLabeling(vec![n - j, j]),
        params,
        n,
    )
}

/// Checks, for every `j ≤ n`, that the kernel expansion of `ξ̃_{n−j,j}` has
/// coefficients `r_i(j; α₂, α₁, α₂α₃q^{n+1}, n)` and reconstructs it; also
/// checks the interpolation basis `f_{n,k}`.
pub fn verify_dunkl(params: &ParamSet, n: usize) -> Result<Report> {
    let ctx = params.ctx();
    let (a1, a2, a3) = (params.alpha(1), params.alpha(2), params.alpha(3));
    let delta = a2 * a3 * ctx.q_pow(n as i64 + 1);
    let thetas = (0..=n)
        .map(|i| theta_tilde(params, n, i))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new();
    for j in 0..=n {
        let xi = xi_tilde(params, n, j)?;
        let a = dunkl_expansion_coeffs(&xi, params)?;
        let mut bad = None;
        for (i, ai) in a.iter().enumerate() {
            let r = racah_or_zero(ctx, i, j, a2, a1, &delta, n)?;
            if *ai != r && bad.is_none() {
                bad = Some(
                    json!({"j": j, "i": i, "a_i": format_rational(ai), "racah": format_rational(&r)}),
                );
            }
        }
        report.record("kernel_expansion_is_racah", 3, n, bad);
        let mut sum = GridFunction::zeros(3, n);
        for (ai, th) in a.iter().zip(&thetas) {
            sum = sum.axpy(ai, th)?;
        }
        report.record(
            "kernel_expansion_reconstructs",
            3,
            n,
            crate::qops::mismatch(&sum, &xi),
        );
    }
    for k in 0..=n {
        let f = kernel_interpolation_basis(params, n, k)?;
        let in_kernel = n == 0 || apply_l(&f, params)?.is_zero();
        report.record(
            "interpolation_basis_in_kernel",
            3,
            n,
            (!in_kernel).then(|| json!({"k": k})),
        );
        let delta_ok = (0..=n).all(|m| {
            let v = f.at(&[m, 0, n - m]);
            if m == k {
                v.is_one()
            } else {
                v.is_zero()
            }
        });
        report.record(
            "interpolation_basis_delta",
            3,
            n,
            (!delta_ok).then(|| json!({"k": k})),
        );
        let support_ok = enumerate_compositions(3, n).iter().all(|x| {
            let inside = x[0] <= k && x[0] + x[1] >= k;
            inside != f.at(x).is_zero()
        });
        report.record(
            "interpolation_basis_support",
            3,
            n,
            (!support_ok).then(|| json!({"k": k})),
        );
    }
    Ok(report)
}

/// The triple product for the path
/// `(1 (2 (3 (4 5)))) → ((1 2)(3 (4 5))) → ((1 2)((3 4) 5)) → (((1 2)(3 4)) 5)`,
/// indexed by `m = (m_1,…,m_4)` and `(u_1,u_2,u_3)`.
pub fn three_dim_racah(params: &ParamSet, m: &[usize; 4], u: &[usize; 3]) -> Result<QValue> {
    let ctx = params.ctx();
    let q = |e: i64| ctx.q_pow(e);
    let a = |k: usize| params.alpha(k);
    let [m1, m2, m3, m4] = *m;
    let [u1, u2, u3] = *u;
    let n = m1 + m2 + m3 + m4;
    if u1 + u2 > u3 || u3 > n || u1 > m1 + m2 || u2 > m3 + m4 || u2 > m3 + m4 {
        return Ok(QValue::zero());
    }
    let ni = n as i64;
    let r1 = racah_or_zero(
        ctx,
        u1,
        m2,
        a(2),
        a(1),
        &(a(2) * a(3) * a(4) * a(5) * q(ni + (m3 + m4) as i64 + 3)),
        m1 + m2,
    )?;
    let r2 = racah_or_zero(
        ctx,
        u2,
        m4,
        a(4),
        a(3),
        &(a(4) * a(5) * q((m3 + m4) as i64 + 1)),
        m3 + m4,
    )?;
    if u3 < u1 + u2 || m3 + m4 < u2 {
        return Ok(QValue::zero());
    }
    let x3 = m3 + m4 - u2;
    let r3 = racah_or_zero(
        ctx,
        u3 - u1 - u2,
        x3,
        &(a(3) * a(4) * q(2 * u2 as i64 + 1)),
        &(a(1) * a(2) * q(2 * u1 as i64 + 1)),
        &(a(3) * a(4) * a(5) * q(ni + u2 as i64 - u1 as i64 + 2)),
        n.saturating_sub(u1 + u2),
    )?;
    Ok(r1 * r2 * q(-((u1 * x3) as i64)) * r3)
}

/// The printed closed form of `1/‖Q_d‖²` at `N = n` for the final tree of the
/// path above, labeled `(n−u_3, u_3−u_1−u_2, u_1, u_2)` in pre-order.
pub fn three_dim_racah_norm(params: &ParamSet, n: usize, u: &[usize; 3]) -> Result<QValue> {
    let ctx = params.ctx();
    let q = |e: i64| ctx.q_pow(e);
    let a = |k: usize| params.alpha(k);
    let [u1, u2, u3] = *u;
    let (ni, u1i, u2i, u3i) = (n as i64, u1 as i64, u2 as i64, u3 as i64);
    let k1 = n - u3;
    let k2 = u3 - u1 - u2;
    let a12 = a(1) * a(2);
    let a34 = a(3) * a(4);
    let num = ctx.pochhammer(&(params.big_a(4) * q(2 * u3i + 4)), k1)
        * ctx.pochhammer(&(&a12 * q(2 * u1i + 2)), k2)
        * ctx.pochhammer(&(a(1) * q(1)), u1)
        * ctx.pochhammer(&(a(3) * q(1)), u2);
    let den = ctx.pochhammer_prod(&[q(1), params.big_a(5) * q(ni + u3i + 4), a(5) * q(1)], k1)
        * ctx.pochhammer_prod(
            &[
                q(1),
                params.big_a(4) * q(u1i + u2i + u3i + 3),
                &a34 * q(2 * u2i + 2),
            ],
            k2,
        )
        * ctx.pochhammer_prod(&[q(1), &a12 * q(u1i + 1), a(2) * q(1)], u1)
        * ctx.pochhammer_prod(&[q(1), &a34 * q(u2i + 1), a(4) * q(1)], u2);
    if den.is_zero() {
        return Err(QError::ZeroDenominator("three-dimensional norm".into()));
    }
    let powers = int_pow(a(1), -ni)
        * int_pow(a(2), -ni + u1i)
        * int_pow(a(3), -ni + u3i - u2i)
        * int_pow(a(4), -ni + u3i);
    let e2 = 2 * (-(2 * u3i + 3) * (ni - u3i) - (2 * u1i + 1) * (u3i - u1i) + 2 * u1i * u2i - u2i)
        + ni * ni
        - 3 * ni;
    Ok(num / den * powers * ctx.q_half_power(e2))
}

/// Move vertices of the three-move path starting from the five-leaf right comb.
pub const THREE_DIM_PATH: [usize; 3] = [0, 2, 0];

/// Both displays of the five-leaf example against the oracle and `norm_Q`.
pub fn three_dim_racah_example_check(params: &ParamSet, n: usize) -> Result<Report> {
    if params.h() < 5 {
        return Err(QError::DimensionMismatch(
            "five parameters are needed".into(),
        ));
    }
    let p = params.truncate(5);
    let rc = PlanarTree::right_comb(5)?;
    let fin = PlanarTree::parse("(((1 2)(3 4)) 5)")?;
    let oracle = connection_oracle(&rc, &fin, n, &p)?;
    let mut report = Report::new();
    let mut bad = None;
    for (a, c) in oracle.rows.iter().enumerate() {
        for (b, d) in oracle.cols.iter().enumerate() {
            let u = [d.0[2], d.0[3], d.0[1] + d.0[2] + d.0[3]];
            let m = [c.0[0], c.0[1], c.0[2], c.0[3]];
            let v = three_dim_racah(&p, &m, &u)?;
            if v != oracle.entries[a][b] && bad.is_none() {
                bad = Some(json!({
                    "m": m, "u": u,
                    "product": format_rational(&v),
                    "oracle": format_rational(&oracle.entries[a][b]),
                }));
            }
        }
    }
    report.record("three_dim_racah_product", 5, n, bad);
    let path = connection_along(&rc, &THREE_DIM_PATH, n, &p)?;
    report.record("three_dim_racah_path", 5, n, path.first_difference(&oracle));
    let mut bad = None;
    for d in &oracle.cols {
        let u = [d.0[2], d.0[3], d.0[1] + d.0[2] + d.0[3]];
        let lhs = three_dim_racah_norm(&p, n, &u)?;
        let rhs = QValue::one() / norm_q(&fin, d, &p, n)?;
        if lhs != rhs && bad.is_none() {
            bad = Some(
                json!({"u": u, "display": format_rational(&lhs), "norm_q": format_rational(&rhs)}),
            );
        }
    }
    report.record("three_dim_racah_norm", 5, n, bad);
    Ok(report)
}

/// Our comb-to-comb connection coefficient between `ξ_m` (right comb) and
/// `θ_{n_2,…,n_h}` (left comb): `∏_{k=2}^{h−1} q^{−m_k i_k} r_{n_k}(m_k; α_k,
/// A_{k−1}q^{2i_k+k−2}, A_{k−1}^{−1}A_h q^{n+j_k−i_k+h−k}, n−i_k−j_k)`.
pub fn comb_connection_product(params: &ParamSet, m: &[usize], theta: &[usize]) -> Result<QValue> {
    let h = m.len() + 1;
    if theta.len() != h - 1 {
        return Err(QError::DimensionMismatch(
            "index vectors of different lengths".into(),
        ));
    }
    let ctx = params.ctx();
    let n: usize = m.iter().sum();
    if theta.iter().sum::<usize>() != n {
        return Ok(QValue::zero());
    }
    // m[k−1] = m_k; theta[k−2] = n_k
    let i = |k: usize| theta[..k - 2].iter().sum::<usize>();
    let j = |k: usize| m[k..].iter().sum::<usize>();
    let mut acc = QValue::one();
    for k in 2..h {
        let (ik, jk) = (i(k), j(k));
        if ik + jk > n {
            return Ok(QValue::zero());
        }
        let beta = params.big_a(k - 1) * ctx.q_pow((2 * ik + k) as i64 - 2);
        let delta =
            params.big_a(h) / params.big_a(k - 1) * ctx.q_pow((n + jk + h - k) as i64 - ik as i64);
        let r = racah_or_zero(
            ctx,
            theta[k - 2],
            m[k - 1],
            params.alpha(k),
            &beta,
            &delta,
            n - ik - jk,
        )?;
        acc *= ctx.q_pow(-((m[k - 1] * ik) as i64)) * r;
    }
    Ok(acc)
}

/// Parameters of the Gasper–Rahman family obtained from ours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrParams {
    /// `a_1, …, a_{s+1}`.
    pub a: Vec<QValue>,
    pub b: QValue,
    pub big_n: usize,
}

/// `s = h−2`, `b = α_1`, `a_1 = (α_2⋯α_h)^{−1}q^{−2n−h+2}`, `a_k = α_k q`,
/// and `N = n`; the points are `x_k = m_1 + … + m_k`.
pub fn gr_substitution(params: &ParamSet, h: usize, n: usize) -> GrParams {
    let ctx = params.ctx();
    let mut a = vec![params.big_a(1) / params.big_a(h) * ctx.q_pow(-2 * n as i64 - h as i64 + 2)];
    for k in 2..h {
        a.push(params.alpha(k) * ctx.q());
    }
    GrParams {
        a,
        b: params.alpha(1).clone(),
        big_n: n,
    }
}

/// `x_k = m_1 + … + m_k` for `k = 1, …, h−2`.
pub fn gr_points(m: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    m[..m.len() - 1]
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// `R_n(x; a, b, N) = ∏_k r̃_{n_k}(x_{k+1}−x_k; a_{k+1}q^{−1}, bÃ_k q^{2N_{k−1}}a_1^{−1},
/// Ã_k^{−1}q^{−x_{k+1}−N_{k−1}}, x_{k+1}−N_{k−1})` with `x_{s+1} = N`; the
/// square in squared mode.
pub fn gasper_rahman_racah(
    ctx: &QContext,
    gr: &GrParams,
    x: &[usize],
    n_idx: &[usize],
    mode: RootMode,
) -> Result<QValue> {
    let s = x.len();
    if n_idx.len() != s || gr.a.len() != s + 1 {
        return Err(QError::DimensionMismatch(
            "Gasper–Rahman index lengths".into(),
        ));
    }
    let mut acc = QValue::one();
    let mut a_tilde = QValue::one();
    let mut big_nk = 0; // N_{k−1}
    for k in 1..=s {
        a_tilde *= &gr.a[k - 1];
        let xk = x[k - 1];
        let xk1 = if k == s { gr.big_n } else { x[k] };
        if xk1 < xk || xk1 < big_nk {
            return Ok(QValue::zero());
        }
        let local_n = xk1 - big_nk;
        let var = xk1 - xk;
        let nk = n_idx[k - 1];
        if nk > local_n || var > local_n {
            return Ok(QValue::zero());
        }
        let spec = Racah1DSpec::new(
            ctx,
            nk,
            &gr.a[k] / ctx.q(),
            &gr.b * &a_tilde * ctx.q_pow(2 * big_nk as i64) / &gr.a[0],
            ctx.q_pow(-(xk1 as i64) - big_nk as i64) / &a_tilde,
            local_n,
        )?;
        acc *= gr_racah_bridge(&spec, var, mode)?;
        big_nk += nk;
    }
    Ok(acc)
}

/// `(−1)^n ∏_{k=2}^{h−1} (A_k q^{2i_k+n_k+k−1}, α_k q, q;q)_{n_k}
/// (A_{k−1}^{−1}A_h q^{n_k+h−k+1})^{−n_k/2}`, or its square.
pub fn gr_conversion_factor(params: &ParamSet, theta: &[usize], mode: RootMode) -> Result<QValue> {
    let ctx = params.ctx();
    let h = theta.len() + 1;
    let n: usize = theta.iter().sum();
    let mut num = sign_power(n as i64);
    let mut radicand_pow = QValue::one(); // ∏ radicand^{n_k}
    for k in 2..h {
        let nk = theta[k - 2];
        let ik: usize = theta[..k - 2].iter().sum();
        num *= ctx.pochhammer_prod(
            &[
                params.big_a(k) * ctx.q_pow((2 * ik + nk + k) as i64 - 1),
                params.alpha(k) * ctx.q(),
                ctx.q().clone(),
            ],
            nk,
        );
        let rad = params.big_a(h) / params.big_a(k - 1) * ctx.q_pow((nk + h - k + 1) as i64);
        radicand_pow *= num_traits::pow(rad, nk);
    }
    if radicand_pow.is_zero() {
        return Err(QError::ZeroDenominator("conversion radicand".into()));
    }
    match mode {
        RootMode::Squared => Ok(&num * &num / radicand_pow),
        RootMode::Exact => {
            let root = rational_sqrt(&radicand_pow)
                .ok_or_else(|| QError::NonSquareRadicand(format_rational(&radicand_pow)))?;
            Ok(num / root)
        }
    }
}

/// `(A_{h−1}q^{h−1})^n q^{(n²−3n)/2} (q, α_h q, α_{h−1}α_h q^{n+1};q)_n / (α_{h−1};q)_n`.
pub fn gr_weight_factor(params: &ParamSet, h: usize, n: usize) -> Result<QValue> {
    let ctx = params.ctx();
    let ni = n as i64;
    let den = ctx.pochhammer(params.alpha(h - 1), n);
    if den.is_zero() {
        return Err(QError::ZeroDenominator("(α_{h−1};q)_n".into()));
    }
    Ok(
        num_traits::pow(params.big_a(h - 1) * ctx.q_pow(h as i64 - 1), n)
            * ctx.q_half_power(ni * ni - 3 * ni)
            * ctx.pochhammer_prod(
                &[
                    ctx.q().clone(),
                    params.alpha(h) * ctx.q(),
                    params.alpha(h - 1) * params.alpha(h) * ctx.q_pow(ni + 1),
                ],
                n,
            )
            / den,
    )
}

/// The standard one-variable q-Racah weight with `γq = q^{−N}`, normalized to
/// `1` at `x = 0`:
/// `(αq, βδq, γq, γδq;q)_x / (q, α^{−1}γδq, β^{−1}γq, δq;q)_x ·
/// (1−γδq^{2x+1}) / ((αβq)^x (1−γδq))`.
pub fn standard_racah_weight(
    ctx: &QContext,
    alpha: &QValue,
    beta: &QValue,
    delta: &QValue,
    big_n: usize,
    x: usize,
) -> Result<QValue> {
    let q = |e: i64| ctx.q_pow(e);
    let gamma = q(-(big_n as i64) - 1);
    let gd = &gamma * delta;
    let num = ctx.pochhammer_prod(
        &[alpha * q(1), beta * delta * q(1), &gamma * q(1), &gd * q(1)],
        x,
    );
    let den = ctx.pochhammer_prod(
        &[q(1), &gd * q(1) / alpha, &gamma * q(1) / beta, delta * q(1)],
        x,
    ) * num_traits::pow(alpha * beta * q(1), x)
        * (QValue::one() - &gd * q(1));
    if den.is_zero() {
        return Err(QError::ZeroDenominator("q-Racah weight".into()));
    }
    Ok(num * (QValue::one() - &gd * q(2 * x as i64 + 1)) / den)
}

/// The Gasper–Rahman correspondence for `h` leaves and degree `n`:
/// connection matrix right comb → left comb equals our product; the
/// substituted Gasper–Rahman product equals ours times the conversion factor
/// (as squares in squared mode). With exact roots the sign is
/// `(−1)^{n−n_h}`; the `(−1)^n` form is recorded separately.
pub fn verify_gr_correspondence(
    params: &ParamSet,
    h: usize,
    n: usize,
    mode: RootMode,
) -> Result<Report> {
    let p = params.truncate(h);
    let ctx = p.ctx();
    let rc = PlanarTree::right_comb(h)?;
    let lc = PlanarTree::left_comb(h)?;
    let path = connection_by_path(&rc, &lc, n, &p)?;
    let gr = gr_substitution(&p, h, n);
    let mut report = Report::new();
    let (mut bad_path, mut bad_gr, mut bad_sign) = (None, None, None);
    for (a, c) in path.rows.iter().enumerate() {
        let m = &c.0;
        let x = gr_points(m);
        for (b, d) in path.cols.iter().enumerate() {
            let theta: Vec<usize> = d.0.iter().rev().copied().collect();
            let ours = comb_connection_product(&p, m, &theta)?;
            if ours != path.entries[a][b] && bad_path.is_none() {
                bad_path = Some(json!({
                    "m": m, "theta": theta,
                    "product": format_rational(&ours),
                    "path": format_rational(&path.entries[a][b]),
                }));
            }
            let lhs = gasper_rahman_racah(ctx, &gr, &x, &theta[..h - 2], mode)?;
            let conv = gr_conversion_factor(&p, &theta, mode)?;
            let rhs = match mode {
                RootMode::Exact => {
                    let printed = &ours * &conv;
                    if lhs != printed && bad_sign.is_none() {
                        bad_sign = Some(json!({
                            "m": m, "theta": theta,
                            "gasper_rahman": format_rational(&lhs),
                            "converted": format_rational(&printed),
                        }));
                    }
                    printed * sign_power(theta[h - 2] as i64)
                }
                RootMode::Squared => &ours * &ours * conv,
            };
            if lhs != rhs && bad_gr.is_none() {
                bad_gr = Some(json!({
                    "m": m, "theta": theta,
                    "gasper_rahman": format_rational(&lhs),
                    "converted": format_rational(&rhs),
                }));
            }
        }
    }
    report.record("comb_connection_product", h, n, bad_path);
    report.record(
        match mode {
            RootMode::Exact => "gasper_rahman_conversion_exact",
            RootMode::Squared => "gasper_rahman_conversion_squared",
        },
        h,
        n,
        bad_gr,
    );
    if mode == RootMode::Exact {
        report.record("gasper_rahman_conversion_printed_sign", h, n, bad_sign);
    }
    Ok(report)
}

/// For three leaves the Gasper–Rahman family is a single q-Racah polynomial
/// in `m_2`. Returns `standard_weight(m_2) / (1/‖ξ_m‖²)` for `m_2 = 0..=n`,
/// where the standard weight is normalized to `1` at `m_2 = 0`.
pub fn gr_weight_ratios_h3(params: &ParamSet, n: usize) -> Result<Vec<QValue>> {
    let p = params.truncate(3);
    let ctx = p.ctx();
    let delta = p.alpha(2) * p.alpha(3) * ctx.q_pow(n as i64 + 1);
    (0..=n)
        .map(|m2| {
            let ours = QValue::one() / norm_xi(&p, &[n - m2, m2], n)?;
            Ok(standard_racah_weight(ctx, p.alpha(2), p.alpha(1), &delta, n, m2)? / ours)
        })
        .collect()
}

/// Weight correspondence for three leaves. `weight_shape`: our weight is a
/// constant multiple of the standard q-Racah weight. `weight_factor`: that
/// multiple is the displayed factor, with the standard weight normalized at
/// `m_2 = 0`.
pub fn verify_gr_weight_h3(params: &ParamSet, n: usize) -> Result<Report> {
    let ratios = gr_weight_ratios_h3(params, n)?;
    let factor = gr_weight_factor(&params.truncate(3), 3, n)?;
    let mut report = Report::new();
    let shape = ratios.iter().position(|r| *r != ratios[0]).map(|k| {
        json!({"m2": k, "ratio": format_rational(&ratios[k]), "ratio_at_0": format_rational(&ratios[0])})
    });
    report.record("gasper_rahman_weight_shape", 3, n, shape);
    let fac = (ratios[0] != factor)
        .then(|| json!({"ratio": format_rational(&ratios[0]), "factor": format_rational(&factor)}));
    report.record("gasper_rahman_weight_factor", 3, n, fac);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::rat;

    fn params() -> ParamSet {
        ParamSet::new(
            QContext::default_context(),
            vec![rat(1, 2), rat(1, 3), rat(2, 3), rat(3, 5), rat(4, 7)],
        )
    }

    fn params_b() -> ParamSet {
        ParamSet::new(
            QContext::new(rat(2, 3)).unwrap(),
            vec![rat(3, 5), rat(7, 2), rat(5, 4), rat(2, 7), rat(9, 5)],
        )
    }

    /// Rational squares, so that every half power in the conversion factors
    /// is rational.
    fn params_sq() -> ParamSet {
        ParamSet::new(
            QContext::new(rat(1, 3)).unwrap(),
            vec![rat(1, 4), rat(4, 9), rat(9, 16), rat(16, 25), rat(25, 36)],
        )
    }

    #[test]
    fn oracle_identity_on_same_tree() {
        for h in 2..=4 {
            let p = params().truncate(h);
            for t in PlanarTree::all_trees(h).unwrap() {
                for n in 0..=3 {
                    assert!(connection_oracle(&t, &t, n, &p).unwrap().is_identity());
                    assert!(connection_by_path(&t, &t, n, &p).unwrap().is_identity());
                }
            }
        }
    }

    #[test]
    fn trivial_move_coefficient() {
        // n_U = i + l + j: one target, coefficient 1
        let p = params().truncate(3);
        let t = PlanarTree::right_comb(3).unwrap();
        let (_, rec) = transplant_right_to_left(&t, 0).unwrap();
        let out = one_move_coefficients(&t, &rec, &CoefLabeling(vec![0, 0]), &p).unwrap();
        assert_eq!(out, vec![(CoefLabeling(vec![0, 0]), QValue::one())]);
    }

    #[test]
    fn three_leaf_root_move_is_racah() {
        for p in [params(), params_b()] {
            let p = p.truncate(3);
            let ctx = p.ctx();
            let rc = PlanarTree::right_comb(3).unwrap();
            let lc = PlanarTree::left_comb(3).unwrap();
            for n in 0..=4 {
                let m = connection_by_path(&rc, &lc, n, &p).unwrap();
                let delta = p.alpha(2) * p.alpha(3) * ctx.q_pow(n as i64 + 1);
                for j in 0..=n {
                    for i in 0..=n {
                        let c = CoefLabeling(vec![n - j, j]);
                        let d = CoefLabeling(vec![n - i, i]);
                        let r =
                            racah_or_zero(ctx, i, j, p.alpha(2), p.alpha(1), &delta, n).unwrap();
                        assert_eq!(m.entry(&c, &d).unwrap(), &r);
                    }
                }
                assert!(m
                    .first_difference(&connection_oracle(&rc, &lc, n, &p).unwrap())
                    .is_none());
            }
        }
    }

    #[test]
    fn vertex_local_form_matches_absolute_form_at_root() {
        // at the root, p′ = A_s q^s, p″ = A_s^{−1}A_r q^{r−s}, p″p‴ = A_s^{−1}A_h q^{h−s}
        for p in [params(), params_b(), params_sq()] {
            let ctx = p.ctx();
            for t in PlanarTree::all_trees(5).unwrap() {
                if !t.admits_move(0) {
                    continue;
                }
                let (_, rec) = transplant_right_to_left(&t, 0).unwrap();
                let c = CoefLabeling::zero(&t);
                let spec = MoveCoefficientSpec::new(&t, &rec, &c, &p).unwrap();
                let (s, r, h) = (rec.spans.s, rec.spans.r, rec.spans.h);
                let q = |e: usize| ctx.q_pow(e as i64);
                assert_eq!(spec.p1, p.big_a(s) * q(s));
                assert_eq!(spec.p2, p.big_a(r) / p.big_a(s) * q(r - s));
                assert_eq!(&spec.p2 * &spec.p3, p.big_a(h) / p.big_a(s) * q(h - s));
            }
        }
    }

    #[test]
    fn path_matches_oracle_h4() {
        for p in [params(), params_b()] {
            let p = p.truncate(4);
            for (a, b) in right_reachable_pairs(4).unwrap() {
                for n in 0..=3 {
                    let r = verify_connection_pair(&a, &b, n, &p).unwrap();
                    assert!(r.all_passed(), "{}", r.to_json());
                }
            }
        }
    }

    #[test]
    fn paths_are_independent_and_compose() {
        let p = params().truncate(4);
        let trees = PlanarTree::all_trees(4).unwrap();
        for a in &trees {
            for b in &trees {
                let Ok(paths) = crate::trees::all_shortest_rl_paths(a, b) else {
                    continue;
                };
                for n in 0..=2 {
                    let first = connection_along(a, &paths[0], n, &p).unwrap();
                    for path in &paths[1..] {
                        assert_eq!(connection_along(a, path, n, &p).unwrap(), first);
                    }
                    for c in &trees {
                        if let Ok(bc) = connection_by_path(b, c, n, &p) {
                            let ac = connection_by_path(a, c, n, &p).unwrap();
                            assert_eq!(first.then(&bc).unwrap().entries, ac.entries);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn left_to_right_by_inversion() {
        let p = params().truncate(4);
        let lc = PlanarTree::left_comb(4).unwrap();
        let rc = PlanarTree::right_comb(4).unwrap();
        for n in 0..=3 {
            let fwd = connection_by_path(&rc, &lc, n, &p).unwrap();
            let back = connection_oracle(&lc, &rc, n, &p).unwrap();
            assert!(fwd.inverse().unwrap().first_difference(&back).is_none());
        }
    }

    #[test]
    fn kernel_expansion_matches_racah() {
        for p in [params(), params_b()] {
            for n in 0..=4 {
                let r = verify_dunkl(&p, n).unwrap();
                assert!(r.all_passed(), "{}", r.to_json());
            }
        }
    }

    #[test]
    fn dunkl_on_basis_and_constant() {
        let p = params();
        for n in 0..=3 {
            for i0 in 0..=n {
                let a = dunkl_expansion_coeffs(&theta_tilde(&p, n, i0).unwrap(), &p).unwrap();
                for (i, ai) in a.iter().enumerate() {
                    assert_eq!(ai.is_one(), i == i0);
                    assert_eq!(ai.is_zero(), i != i0);
                }
            }
        }
        let one = GridFunction::constant(3, 0, QValue::one());
        assert_eq!(
            dunkl_expansion_coeffs(&one, &p).unwrap(),
            vec![QValue::one()]
        );
        let not_kernel = GridFunction::delta(3, 2, 0);
        assert!(matches!(
            dunkl_expansion_coeffs(&not_kernel, &p),
            Err(QError::NotInKernel)
        ));
    }

    #[test]
    fn three_dim_example() {
        for p in [params(), params_b()] {
            for n in 0..=2 {
                let r = three_dim_racah_example_check(&p, n).unwrap();
                assert!(r.all_passed(), "{}", r.to_json());
            }
        }
    }

    #[test]
    fn gasper_rahman_zero_degree_is_one() {
        let p = params().truncate(4);
        let gr = gr_substitution(&p, 4, 2);
        let v = gasper_rahman_racah(p.ctx(), &gr, &[1, 1], &[0, 0], RootMode::Squared).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn gasper_rahman_correspondence() {
        for h in 3..=5 {
            for n in 0..=3 {
                for p in [params(), params_b(), params_sq()] {
                    let r = verify_gr_correspondence(&p, h, n, RootMode::Squared).unwrap();
                    assert!(r.all_passed(), "{}", r.to_json());
                }
            }
        }
    }

    #[test]
    fn interpolation_basis_represents_kernel() {
        let p = params_b();
        for n in 1..=4 {
            for j in 0..=n {
                let xi = xi_tilde(&p, n, j).unwrap();
                let mut sum = GridFunction::zeros(3, n);
                for k in 0..=n {
                    let f = kernel_interpolation_basis(&p, n, k).unwrap();
                    sum = sum.axpy(xi.at(&[k, 0, n - k]), &f).unwrap();
                }
                assert_eq!(sum, xi);
            }
        }
        // f_{1,0}(0,1) from the kernel equation: −α₂q(1−α₃q)/(1−α₂q)
        let p = params();
        let ctx = p.ctx();
        let f = kernel_interpolation_basis(&p, 1, 0).unwrap();
        let a2q = p.alpha(2) * ctx.q();
        let expected = -(&a2q * (QValue::one() - p.alpha(3) * ctx.q()) / (QValue::one() - &a2q));
        assert_eq!(f.at(&[0, 1, 0]), &expected);
    }

    #[test]
    fn gr_exact_mode_sign() {
        for h in 3..=5 {
            for n in 0..=3 {
                let r = verify_gr_correspondence(&params_sq(), h, n, RootMode::Exact).unwrap();
                for e in r.to_json().as_array().unwrap() {
                    let printed_sign = e["identity"] == "gasper_rahman_conversion_printed_sign";
                    // (−1)^n and (−1)^{n−n_h} differ as soon as n_h is odd
                    let expect_pass = !printed_sign || n == 0;
                    assert_eq!(e["status"] == "pass", expect_pass, "{e}");
                }
            }
        }
    }

    #[test]
    fn gr_weight_shape_holds_but_factor_does_not() {
        for p in [params(), params_b(), params_sq()] {
            for n in 0..=3 {
                let r = verify_gr_weight_h3(&p, n).unwrap();
                let rows = r.to_json();
                assert_eq!(rows[0]["status"], "pass");
                assert_eq!(rows[1]["status"] == "pass", n == 0, "{rows}");
            }
        }
    }
}
