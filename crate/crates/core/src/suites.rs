//! Named verification suites. Each one runs a family of exact identity checks
//! for a given parameter set, leaf count `h` and level bound `N`, and returns a
//! report with one entry per identity instance.

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::json;

use crate::connect::{
    right_reachable_pairs, three_dim_racah_example_check, verify_connection_pair, verify_dunkl,
    verify_gr_correspondence, verify_gr_weight_h3,
};
use crate::error::{QError, Result};
use crate::hahn1d::{
    hahn_at_top, hahn_at_zero, hahn_grid, hahn_norm, hahn_via_phi2, hahn_via_raising,
    vandermonde_sum_check, verify_hahn_recurrences, Hahn1DSpec, RootMode,
};
use crate::lattice::{composition_count, inner_product, ParamSet};
use crate::multihahn::{
    basis, eval_grid, raise_basis_element, verify_gram, verify_level_recursions, EigenVerifier,
};
use crate::qnum::format_rational;
use crate::qops::{mismatch, spectral_decomposition_check, verify_operator_algebra};
use crate::report::Report;
use crate::trees::{enumerate_labelings, find_rl_path, PlanarTree};

/// Suite names in registry order; `all` runs every one of them in this order.
pub const SUITES: [&str; 11] = [
    "operator-algebra",
    "spectral",
    "hahn",
    "vandermonde",
    "tree-basis",
    "dunkl",
    "connection",
    "three-dim",
    "gasper-rahman",
    "counts",
    "all",
];

/// Pairs sampled by the connection suite once `h` exceeds [`EXHAUSTIVE_H`].
pub const SAMPLED_PAIRS: usize = 10;
/// Largest `h` for which the connection suite visits every reachable pair.
pub const EXHAUSTIVE_H: usize = 4;

/// `seed` drives the pair sampling of the connection suite for `h > 4`.
pub fn run_suite(
    name: &str,
    params: &ParamSet,
    h: usize,
    big_n: usize,
    seed: u64,
) -> Result<Report> {
    if h < 2 || h > params.h() {
        return Err(QError::InvalidParameters(format!(
            "h = {h} needs 2 ≤ h ≤ {} (the number of alphas)",
            params.h()
        )));
    }
    let p = params.truncate(h);
    match name {
        "operator-algebra" => verify_operator_algebra(h, big_n, &p),
        "spectral" => spectral_decomposition_check(h, big_n, &p),
        "hahn" => hahn_suite(params, big_n),
        "vandermonde" => vandermonde_suite(params, big_n),
        "tree-basis" => tree_basis_suite(&p, h, big_n),
        "dunkl" => dunkl_suite(params, big_n),
        "connection" if h <= EXHAUSTIVE_H => connection_suite(&p, h, big_n),
        "connection" => connection_sample_suite(&p, h, big_n, SAMPLED_PAIRS, seed),
        "three-dim" => three_dim_suite(params, big_n),
        "gasper-rahman" => gasper_rahman_suite(params, h, big_n),
        "counts" => Ok(counts_suite(h, big_n)?),
        "all" => {
            let mut report = Report::new();
            for s in &SUITES[..SUITES.len() - 1] {
                report.extend(run_suite(s, params, h, big_n, seed)?);
            }
            Ok(report)
        }
        other => Err(QError::InvalidParameters(format!(
            "unknown suite '{other}'"
        ))),
    }
}

fn need(params: &ParamSet, k: usize, what: &str) -> Result<()> {
    if params.h() < k {
        return Err(QError::InvalidParameters(format!(
            "{what} needs at least {k} alphas"
        )));
    }
    Ok(())
}

/// One-variable checks with `(α, β) = (α₁, α₂)`: the two evaluation routes
/// agree, recurrences, Gram diagonal with closed-form norms, special values.
pub fn hahn_suite(params: &ParamSet, big_n: usize) -> Result<Report> {
    let ctx = params.ctx();
    let (a, b) = (params.alpha(1).clone(), params.alpha(2).clone());
    let p2 = params.truncate(2);
    let mut report = verify_hahn_recurrences(ctx, &a, &b, big_n)?;
    for nn in 0..=big_n {
        let mut routes = None;
        let mut specials = None;
        let mut grids = Vec::new();
        for n in 0..=nn {
            let spec = Hahn1DSpec::new(ctx, n, a.clone(), b.clone(), nn)?;
            for x in 0..=nn {
                let (u, v) = (hahn_via_phi2(&spec, x)?, hahn_via_raising(&spec, x)?);
                if u != v && routes.is_none() {
                    routes = Some(
                        json!({"n": n, "x": x, "phi": format_rational(&u), "raising": format_rational(&v)}),
                    );
                }
            }
            let g = hahn_grid(&spec)?;
            if (*g.at(&[0, nn]) != hahn_at_zero(&spec) || *g.at(&[nn, 0]) != hahn_at_top(&spec)?)
                && specials.is_none()
            {
                specials = Some(json!({"n": n}));
            }
            grids.push((spec, g));
        }
        report.record("hahn_routes_agree", 2, nn, routes);
        report.record("hahn_special_values", 2, nn, specials);
        let mut gram = None;
        for (i, (si, gi)) in grids.iter().enumerate() {
            for (j, (_, gj)) in grids.iter().enumerate() {
                let v = inner_product(gi, gj, &p2)?;
                let expected = if i == j { hahn_norm(si)? } else { Zero::zero() };
                if v != expected && gram.is_none() {
                    gram = Some(
                        json!({"n": i, "m": j, "inner": format_rational(&v), "expected": format_rational(&expected)}),
                    );
                }
            }
        }
        report.record("hahn_orthogonality", 2, nn, gram);
    }
    Ok(report)
}

pub fn vandermonde_suite(params: &ParamSet, big_n: usize) -> Result<Report> {
    let ctx = params.ctx();
    let mut report = Report::new();
    for n in 0..=big_n {
        let mut bad = None;
        for j in 0..=big_n {
            if !vandermonde_sum_check(ctx, n, j, params.alpha(1), params.alpha(2))? && bad.is_none()
            {
                bad = Some(json!({"n": n, "j": j}));
            }
        }
        report.record("vandermonde_sum", 2, n, bad);
    }
    Ok(report)
}

/// For every tree with `h` leaves: Gram matrix diagonal with closed-form
/// norms, vertex eigenvalues, level recursions and raising consistency.
pub fn tree_basis_suite(params: &ParamSet, h: usize, big_n: usize) -> Result<Report> {
    let mut report = Report::new();
    let eigen = EigenVerifier::new(params, h, big_n);
    for t in PlanarTree::all_trees(h)? {
        for nn in 0..=big_n {
            report.extend(verify_gram(&t, params, nn)?);
        }
        for n in 0..=big_n {
            for c in enumerate_labelings(&t, n) {
                report.extend(eigen.verify(&t, &c)?);
                if n < big_n {
                    report.extend(verify_level_recursions(&t, &c, params, big_n)?);
                }
            }
            let mut bad = None;
            for elem in basis(&t, params, n, n)? {
                let raised = raise_basis_element(&elem, big_n)?;
                let direct = eval_grid(&t, &elem.labeling, params, big_n)?;
                if bad.is_none() {
                    bad = mismatch(&raised.grid, &direct).map(
                        |d| json!({"tree": t.serialize(), "labeling": elem.labeling.0, "diff": d}),
                    );
                }
            }
            report.record("raise_basis_element", h, n, bad);
        }
    }
    Ok(report)
}

pub fn dunkl_suite(params: &ParamSet, big_n: usize) -> Result<Report> {
    need(params, 3, "the kernel expansion")?;
    let p = params.truncate(3);
    let mut report = Report::new();
    for n in 0..=big_n {
        report.extend(verify_dunkl(&p, n)?);
    }
    Ok(report)
}

/// `count` right-reachable ordered pairs with `h` leaves, drawn without
/// replacement with a seeded generator and returned in enumeration order.
pub fn sample_reachable_pairs(
    h: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<(PlanarTree, PlanarTree)>> {
    let pairs = right_reachable_pairs(h)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut picked =
        rand::seq::index::sample(&mut rng, pairs.len(), count.min(pairs.len())).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|k| pairs[k].clone()).collect())
}

/// Oracle agreement and biorthogonality on sampled pairs.
pub fn connection_sample_suite(
    params: &ParamSet,
    h: usize,
    big_n: usize,
    count: usize,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new();
    let pairs = sample_reachable_pairs(h, count, seed)?;
    for n in 0..=big_n {
        for (a, b) in &pairs {
            report.extend(verify_connection_pair(a, b, n, params)?);
        }
    }
    Ok(report)
}

/// Every right-reachable ordered pair with `h` leaves, degrees `n ≤ N`.
pub fn connection_suite(params: &ParamSet, h: usize, big_n: usize) -> Result<Report> {
    let mut report = Report::new();
    let pairs = right_reachable_pairs(h)?;
    for n in 0..=big_n {
        for (a, b) in &pairs {
            report.extend(verify_connection_pair(a, b, n, params)?);
        }
    }
    Ok(report)
}

pub fn three_dim_suite(params: &ParamSet, big_n: usize) -> Result<Report> {
    need(params, 5, "the five-leaf example")?;
    let mut report = Report::new();
    for n in 0..=big_n {
        report.extend(three_dim_racah_example_check(params, n)?);
    }
    Ok(report)
}

/// Squared-mode correspondence for `h` leaves and the three-leaf weight
/// comparison.
pub fn gasper_rahman_suite(params: &ParamSet, h: usize, big_n: usize) -> Result<Report> {
    need(params, 3, "the Gasper–Rahman comparison")?;
    let mut report = Report::new();
    for n in 0..=big_n {
        if h >= 3 {
            report.extend(verify_gr_correspondence(params, h, n, RootMode::Squared)?);
        }
        report.extend(verify_gr_weight_h3(params, n)?);
    }
    Ok(report)
}

/// Labeling counts per tree, and reachability of the left comb.
pub fn counts_suite(h: usize, big_n: usize) -> Result<Report> {
    let mut report = Report::new();
    let lc = PlanarTree::left_comb(h)?;
    report.record(
        "left_comb_admits_no_move",
        h,
        0,
        (!lc.movable_vertices().is_empty()).then(|| json!({"tree": lc.serialize()})),
    );
    for t in PlanarTree::all_trees(h)? {
        let mut bad = None;
        for nn in 0..=big_n {
            let total: usize = (0..=nn).map(|n| enumerate_labelings(&t, n).len()).sum();
            if total != composition_count(h, nn) && bad.is_none() {
                bad = Some(json!({"tree": t.serialize(), "N": nn, "count": total}));
            }
        }
        report.record("labeling_count", h, big_n, bad);
        let reach = find_rl_path(&t, &lc)
            .err()
            .map(|e| json!({"tree": t.serialize(), "error": e.to_string()}));
        report.record("reaches_left_comb", h, 0, reach);
    }
    Ok(report)
}
