use std::time::Instant;

use num_traits::Zero;
use serde_json::{json, Value};

use qtree_core::connect::{connection_by_path, connection_oracle};
use qtree_core::lattice::enumerate_compositions;
use qtree_core::multihahn::{basis as tree_basis, eval_q, full_basis, gram_matrix, verify_gram};
use qtree_core::suites::{run_suite, SUITES};
use qtree_core::trees::{enumerate_labelings, find_rl_path};
use qtree_core::{
    format_rational, parse_rational, CoefLabeling, ParamSet, PlanarTree, QContext, QError,
};

use crate::{BasisArgs, Common, ConnectArgs, EvalArgs, Failure, GramArgs, Output, VerifyArgs};

fn config<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Config(format!("{what}: {e}"))
}

/// Parameters for `h` variables, regime-checked up to level `n_max` unless
/// `--allow-any-params`.
fn params(common: &Common, h: usize, n_max: usize) -> Result<ParamSet, Failure> {
    let ctx = QContext::from_str_s(&common.sqrt_q).map_err(config("--sqrt-q"))?;
    let alphas = common
        .alphas
        .iter()
        .map(|a| parse_rational(a.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(config("--alphas"))?;
    if alphas.len() < h {
        return Err(Failure::Config(format!(
            "--alphas: {h} values needed, {} given",
            alphas.len()
        )));
    }
    let alphas = alphas[..h].to_vec();
    if common.allow_any_params {
        Ok(ParamSet::new(ctx, alphas))
    } else {
        ParamSet::validated(ctx, alphas, n_max).map_err(|e| {
            Failure::Config(format!(
                "{e} (pass --allow-any-params to evaluate the identities anyway)"
            ))
        })
    }
}

fn tree(text: &str, flag: &str) -> Result<PlanarTree, Failure> {
    PlanarTree::parse(text).map_err(config(flag))
}

fn params_json(p: &ParamSet) -> Value {
    json!({
        "sqrt_q": format_rational(p.ctx().s()),
        "alphas": p.alphas().iter().map(format_rational).collect::<Vec<_>>(),
    })
}

pub fn eval(a: &EvalArgs) -> Result<Output, Failure> {
    let t = tree(&a.tree, "--tree")?;
    let h = t.h();
    let p = params(&a.common, h, a.big_n)?;
    let c = CoefLabeling(a.labels.clone());
    if c.0.len() != t.internal_count() {
        return Err(Failure::Config(format!(
            "--labels: {} labels for {} internal vertices",
            c.0.len(),
            t.internal_count()
        )));
    }
    let points: Vec<Vec<usize>> = if a.all {
        enumerate_compositions(h, a.big_n)
    } else if a.point.is_empty() {
        return Err(Failure::Config("give --all or at least one --point".into()));
    } else {
        if !a.point.len().is_multiple_of(h) {
            return Err(Failure::Config(format!(
                "--point: coordinates come in groups of {h}"
            )));
        }
        let pts: Vec<Vec<usize>> = a.point.chunks(h).map(<[usize]>::to_vec).collect();
        if let Some(x) = pts.iter().find(|x| x.iter().sum::<usize>() != a.big_n) {
            return Err(Failure::Config(format!(
                "--point {x:?} does not sum to N = {}",
                a.big_n
            )));
        }
        pts
    };
    let values = points
        .iter()
        .map(|x| Ok(json!({"x": x, "v": format_rational(&eval_q(&t, &c, &p, x)?)})))
        .collect::<Result<Vec<_>, QError>>()?;
    Ok(Output {
        json: json!({
            "tree": t.serialize(),
            "labeling": c.0,
            "N": a.big_n,
            "params": params_json(&p),
            "values": values,
        }),
        passed: true,
    })
}

pub fn basis(a: &BasisArgs) -> Result<Output, Failure> {
    let t = tree(&a.tree, "--tree")?;
    let p = params(&a.common, t.h(), a.big_n)?;
    if let Some(n) = a.n {
        if n > a.big_n {
            return Err(Failure::Config(format!("--n {n} exceeds --N {}", a.big_n)));
        }
    }
    let gram = verify_gram(&t, &p, a.big_n)?;
    let elems = match a.n {
        Some(n) => tree_basis(&t, &p, n, a.big_n)?,
        None => full_basis(&t, &p, a.big_n)?,
    };
    let passed = gram.all_passed();
    let items = elems
        .iter()
        .map(|e| e.to_json(passed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Output {
        json: json!({"params": params_json(&p), "basis": items}),
        passed,
    })
}

pub fn gram(a: &GramArgs) -> Result<Output, Failure> {
    let trees = a
        .tree
        .iter()
        .map(|s| tree(s, "--tree"))
        .collect::<Result<Vec<_>, _>>()?;
    let h = trees[0].h();
    if trees.iter().any(|t| t.h() != h) {
        return Err(Failure::Config(
            "all --tree values must have the same number of leaves".into(),
        ));
    }
    let p = params(&a.common, h, a.big_n)?;
    let mut reports = Vec::new();
    let mut passed = true;
    for t in &trees {
        let elems = full_basis(t, &p, a.big_n)?;
        let g = gram_matrix(&elems, &p)?;
        let diagonal = g
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| i == j || v.is_zero()));
        let mut norms_match = true;
        for (i, e) in elems.iter().enumerate() {
            norms_match &= e.norm()? == g[i][i];
        }
        passed &= diagonal && norms_match;
        let dims: Vec<usize> = (0..=a.big_n)
            .map(|n| enumerate_labelings(t, n).len())
            .collect();
        reports.push(json!({
            "tree": t.serialize(),
            "N": a.big_n,
            "labelings": elems.iter().map(|e| e.labeling.0.clone()).collect::<Vec<_>>(),
            "gram": g.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "diagonal": diagonal,
            "norms_match_closed_form": norms_match,
            "eigenspace_dims": dims,
        }));
    }
    Ok(Output {
        json: json!({"params": params_json(&p), "reports": reports}),
        passed,
    })
}

pub fn connect(a: &ConnectArgs) -> Result<Output, Failure> {
    let s = tree(&a.source, "--source")?;
    let t = tree(&a.target, "--target")?;
    if s.h() != t.h() {
        return Err(Failure::Config(
            "source and target have different numbers of leaves".into(),
        ));
    }
    let p = params(&a.common, s.h(), a.n)?;
    let moves = if a.oracle_only {
        None
    } else {
        Some(find_rl_path(&s, &t)?)
    };
    let oracle = connection_oracle(&s, &t, a.n, &p)?;
    let (path, matrix, checked) = match moves {
        None => (Value::Null, oracle, false),
        Some(moves) => {
            let m = connection_by_path(&s, &t, a.n, &p)?;
            let agrees = m.first_difference(&oracle).is_none();
            (
                Value::Array(moves.iter().map(|r| r.to_json()).collect()),
                m,
                agrees,
            )
        }
    };
    Ok(Output {
        json: json!({
            "source": s.serialize(),
            "target": t.serialize(),
            "n": a.n,
            "params": params_json(&p),
            "method": if a.oracle_only { "oracle" } else { "path" },
            "path": path,
            "matrix": matrix.to_json(),
            "oracle_checked": checked,
        }),
        passed: a.oracle_only || checked,
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Output, Failure> {
    if a.list {
        return Ok(Output {
            json: json!({"suites": SUITES}),
            passed: true,
        });
    }
    for s in &a.suite {
        if !SUITES.contains(&s.as_str()) {
            return Err(Failure::Config(format!(
                "unknown suite '{s}'; available: {}",
                SUITES.join(", ")
            )));
        }
    }
    let p = params(&a.common, a.common.alphas.len().max(a.h), a.big_n)?;
    let mut out = Vec::new();
    let mut passed = true;
    for name in &a.suite {
        let start = Instant::now();
        let report = run_suite(name, &p, a.h, a.big_n, a.seed).map_err(|e| match e {
            QError::InvalidParameters(m) => Failure::Config(m),
            other => Failure::Core(other),
        })?;
        let ok = report.all_passed();
        eprintln!(
            "{name}: {} checks, {}, {:.2} s",
            report.len(),
            if ok { "pass" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        passed &= ok;
        out.push(json!({"suite": name, "passed": ok, "checks": report.to_json()}));
    }
    Ok(Output {
        json: json!({
            "params": params_json(&p),
            "h": a.h,
            "N": a.big_n,
            "seed": a.seed,
            "suites": out,
            "passed": passed,
        }),
        passed,
    })
}
