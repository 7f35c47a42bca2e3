//! Planar rooted binary trees with leaves `1, …, h` in left-to-right order,
//! their coefficient labelings, and right-to-left edge transplantations.
//!
//! Internal vertices are numbered in pre-order, the root being `0`. Every
//! labeling is a vector indexed by these numbers.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{QError, Result};
use crate::lattice::{enumerate_compositions, ParamSet};
use crate::qnum::QValue;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    fn write(&self, next: &mut usize, out: &mut String) {
        match self {
            Shape::Leaf => {
                *next += 1;
                out.push_str(&next.to_string());
            }
            Shape::Node(l, r) => {
                out.push('(');
                let mut left = String::new();
                l.write(next, &mut left);
                let mut right = String::new();
                r.write(next, &mut right);
                out.push_str(&left);
                if !(left.ends_with(')') && right.starts_with('(')) {
                    out.push(' ');
                }
                out.push_str(&right);
                out.push(')');
            }
        }
    }

    /// Rotates the internal vertex with pre-order index `target`; `seen`
    /// counts internal vertices visited so far.
    fn rotate(&self, target: usize, seen: &mut usize) -> Result<Shape> {
        match self {
            Shape::Leaf => Ok(Shape::Leaf),
            Shape::Node(l, r) => {
                let me = *seen;
                *seen += 1;
                if me == target {
                    return match r.as_ref() {
                        Shape::Leaf => Err(QError::RightChildIsLeaf(target)),
                        Shape::Node(rl, rr) => Ok(Shape::Node(
                            Box::new(Shape::Node(l.clone(), rl.clone())),
                            rr.clone(),
                        )),
                    };
                }
                let nl = l.rotate(target, seen)?;
                let nr = r.rotate(target, seen)?;
                Ok(Shape::Node(Box::new(nl), Box::new(nr)))
            }
        }
    }
}

/// A child of an internal vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Child {
    /// Leaf with one-based position `i`, bound to `α_i` and `x_i`.
    Leaf(usize),
    /// Internal vertex with the given pre-order index.
    Internal(usize),
}

/// An internal vertex; its leaves are `lo+1, …, hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub lo: usize,
    pub hi: usize,
    pub left: Child,
    pub right: Child,
    pub depth: usize,
    pub parent: Option<usize>,
}

/// A planar rooted binary tree with `h ≥ 2` leaves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlanarTree {
    shape: Shape,
    h: usize,
    vertices: Vec<Vertex>,
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarTree({})", self.serialize())
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// The move record of one right-to-left transplantation at vertex `U`.
///
/// Locally the leaves of `U` are `1..=h` with `T′` on `1..=s`, `T″` on
/// `s+1..=r` and `T‴` on `r+1..=h`; `base` is the number of leaves left of `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveRecord {
    pub vertex: usize,
    pub spans: Spans,
    pub base: usize,
    /// Pre-order index in the target tree of every source internal vertex.
    #[serde(skip)]
    pub index_map: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Spans {
    pub s: usize,
    pub r: usize,
    pub h: usize,
}

impl MoveRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "vertex": self.vertex,
            "spans": { "s": self.spans.s, "r": self.spans.r, "h": self.spans.h },
            "base": self.base,
        })
    }
}

impl PlanarTree {
    fn from_shape(shape: Shape) -> Result<Self> {
        let h = shape.leaves();
        if h < 2 {
            return Err(QError::InvalidParameters(
                "a tree needs at least two leaves".into(),
            ));
        }
        let mut vertices = Vec::with_capacity(h - 1);
        fn walk(
            s: &Shape,
            lo: usize,
            depth: usize,
            parent: Option<usize>,
            out: &mut Vec<Vertex>,
        ) -> Child {
            match s {
                Shape::Leaf => Child::Leaf(lo + 1),
                Shape::Node(l, r) => {
                    let idx = out.len();
                    out.push(Vertex {
                        lo,
                        hi: lo + s.leaves(),
                        left: Child::Leaf(0),
                        right: Child::Leaf(0),
                        depth,
                        parent,
                    });
                    let left = walk(l, lo, depth + 1, Some(idx), out);
                    let right = walk(r, lo + l.leaves(), depth + 1, Some(idx), out);
                    out[idx].left = left;
                    out[idx].right = right;
                    Child::Internal(idx)
                }
            }
        }
        walk(&shape, 0, 0, None, &mut vertices);
        Ok(Self { shape, h, vertices })
    }

    /// Parses a balanced-parenthesis expression such as `"((1 2)(3 4))"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '(' || c == ')' {
                tokens.push(c.to_string());
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                tokens.push(chars[start..i].iter().collect());
            } else if c.is_whitespace() || c == ',' {
                i += 1;
            } else {
                return Err(QError::Parse(format!(
                    "unexpected character {c:?} in {text:?}"
                )));
            }
        }
        let mut pos = 0;
        let mut leaves = Vec::new();
        let shape = parse_item(&tokens, &mut pos, &mut leaves, text)?;
        if pos != tokens.len() {
            return Err(QError::Parse(format!("trailing input in {text:?}")));
        }
        if leaves.iter().enumerate().any(|(k, &v)| v != k + 1) {
            return Err(QError::NonConsecutiveLeaves(text.to_string()));
        }
        Self::from_shape(shape)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.shape.write(&mut 0, &mut out);
        out
    }

    /// `(1 (2 (3 …)))`: every left subtree is a leaf.
    pub fn right_comb(h: usize) -> Result<Self> {
        let mut s = Shape::Leaf;
        for _ in 1..h {
            s = Shape::Node(Box::new(Shape::Leaf), Box::new(s));
        }
        Self::from_shape(s)
    }

    /// `(((1 2) 3) …)`: every right subtree is a leaf.
    pub fn left_comb(h: usize) -> Result<Self> {
        let mut s = Shape::Leaf;
        for _ in 1..h {
            s = Shape::Node(Box::new(s), Box::new(Shape::Leaf));
        }
        Self::from_shape(s)
    }

    /// Every planar tree with `h` leaves (a Catalan number of them), in a
    /// fixed order.
    pub fn all_trees(h: usize) -> Result<Vec<Self>> {
        fn shapes(h: usize, memo: &mut HashMap<usize, Vec<Shape>>) -> Vec<Shape> {
            if let Some(v) = memo.get(&h) {
                return v.clone();
            }
            let out = if h == 1 {
                vec![Shape::Leaf]
            } else {
                let mut out = Vec::new();
                for k in 1..h {
                    for l in shapes(k, memo) {
                        for r in shapes(h - k, memo) {
                            out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
                        }
                    }
                }
                out
            };
            memo.insert(h, out.clone());
            out
        }
        shapes(h, &mut HashMap::new())
            .into_iter()
            .map(Self::from_shape)
            .collect()
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn internal_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, u: usize) -> Result<&Vertex> {
        self.vertices.get(u).ok_or(QError::IndexOutOfRange {
            index: u,
            size: self.vertices.len(),
        })
    }

    /// Number of leaves to the left of the right subtree of `u`.
    pub fn split_of(&self, u: usize) -> usize {
        let v = &self.vertices[u];
        match v.right {
            Child::Leaf(pos) => pos - 1,
            Child::Internal(c) => self.vertices[c].lo,
        }
    }

    /// Whether a right-to-left transplantation is possible at `u`.
    pub fn admits_move(&self, u: usize) -> bool {
        matches!(self.vertices.get(u), Some(v) if matches!(v.right, Child::Internal(_)))
    }

    /// Vertices admitting a right-to-left move, in pre-order.
    pub fn movable_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&u| self.admits_move(u))
            .collect()
    }
}

fn parse_item(
    tokens: &[String],
    pos: &mut usize,
    leaves: &mut Vec<usize>,
    text: &str,
) -> Result<Shape> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| QError::Parse(format!("unexpected end of {text:?}")))?;
    *pos += 1;
    if tok == "(" {
        let l = parse_item(tokens, pos, leaves, text)?;
        let r = parse_item(tokens, pos, leaves, text)?;
        match tokens.get(*pos) {
            Some(t) if t == ")" => {
                *pos += 1;
                Ok(Shape::Node(Box::new(l), Box::new(r)))
            }
            _ => Err(QError::Parse(format!(
                "expected ')' in {text:?} (trees are binary)"
            ))),
        }
    } else if tok == ")" {
        Err(QError::Parse(format!("unexpected ')' in {text:?}")))
    } else {
        let v: usize = tok
            .parse()
            .map_err(|_| QError::Parse(format!("bad leaf {tok:?} in {text:?}")))?;
        leaves.push(v);
        Ok(Shape::Leaf)
    }
}

/// `((T′)(T″ T‴))` at `u` becomes `((T′ T″) T‴)`.
pub fn transplant_right_to_left(t: &PlanarTree, u: usize) -> Result<(PlanarTree, MoveRecord)> {
    let v = t.vertex(u)?.clone();
    let z = match v.right {
        Child::Leaf(_) => return Err(QError::RightChildIsLeaf(u)),
        Child::Internal(z) => z,
    };
    let zv = &t.vertices[z];
    let s = t.split_of(u) - v.lo;
    let r = t.split_of(z) - v.lo;
    let local_h = v.hi - v.lo;
    let shape = t.shape.rotate(u, &mut 0)?;
    let target = PlanarTree::from_shape(shape)?;

    let t1 = s - 1; // internal vertices of T′
    let end = u + local_h - 1; // one past the last internal vertex of U's subtree
    let index_map = (0..t.internal_count())
        .map(|i| {
            if i < u || i >= end || (i > z) {
                i
            } else if i == u {
                u
            } else if i == z {
                u + 1
            } else {
                // inside T′
                i + 1
            }
        })
        .collect();
    debug_assert_eq!(z, u + 1 + t1);
    debug_assert_eq!(zv.lo, v.lo + s);
    Ok((
        target,
        MoveRecord {
            vertex: u,
            spans: Spans { s, r, h: local_h },
            base: v.lo,
            index_map,
        },
    ))
}

/// A shortest sequence of right-to-left transplantations from `source` to
/// `target`, by breadth-first search with moves tried in pre-order.
pub fn find_rl_path(source: &PlanarTree, target: &PlanarTree) -> Result<Vec<MoveRecord>> {
    if source.h() != target.h() {
        return Err(QError::DimensionMismatch(format!(
            "trees with {} and {} leaves",
            source.h(),
            target.h()
        )));
    }
    let goal = target.serialize();
    let start = source.serialize();
    let mut prev: HashMap<String, (String, usize)> = HashMap::new();
    let mut queue = VecDeque::from([source.clone()]);
    let mut seen = std::collections::HashSet::from([start.clone()]);
    let mut found = start == goal;
    while let Some(t) = queue.pop_front() {
        if found {
            break;
        }
        let key = t.serialize();
        for u in t.movable_vertices() {
            let (next, _) = transplant_right_to_left(&t, u)?;
            let nk = next.serialize();
            if seen.insert(nk.clone()) {
                prev.insert(nk.clone(), (key.clone(), u));
                if nk == goal {
                    found = true;
                    break;
                }
                queue.push_back(next);
            }
        }
    }
    if !found {
        return Err(QError::NotRightReachable);
    }
    let mut vertices = Vec::new();
    let mut cur = goal;
    while cur != start {
        let (p, u) = prev[&cur].clone();
        vertices.push(u);
        cur = p;
    }
    vertices.reverse();
    replay(source, &vertices)
}

/// Applies moves at the given vertices in order, returning the records.
pub fn replay(source: &PlanarTree, vertices: &[usize]) -> Result<Vec<MoveRecord>> {
    let mut t = source.clone();
    let mut out = Vec::with_capacity(vertices.len());
    for &u in vertices {
        let (next, rec) = transplant_right_to_left(&t, u)?;
        out.push(rec);
        t = next;
    }
    Ok(out)
}

/// Every shortest right-to-left path, each as its list of move vertices.
pub fn all_shortest_rl_paths(source: &PlanarTree, target: &PlanarTree) -> Result<Vec<Vec<usize>>> {
    let goal = target.serialize();
    let mut layer: Vec<(PlanarTree, Vec<usize>)> = vec![(source.clone(), Vec::new())];
    let mut seen = std::collections::HashSet::from([source.serialize()]);
    loop {
        let hits: Vec<Vec<usize>> = layer
            .iter()
            .filter(|(t, _)| t.serialize() == goal)
            .map(|(_, p)| p.clone())
            .collect();
        if !hits.is_empty() {
            return Ok(hits);
        }
        let mut next_layer = Vec::new();
        let mut fresh = std::collections::HashSet::new();
        for (t, path) in &layer {
            for u in t.movable_vertices() {
                let (n, _) = transplant_right_to_left(t, u)?;
                let k = n.serialize();
                if !seen.contains(&k) {
                    fresh.insert(k);
                    let mut p = path.clone();
                    p.push(u);
                    next_layer.push((n, p));
                }
            }
        }
        if next_layer.is_empty() {
            return Err(QError::NotRightReachable);
        }
        seen.extend(fresh);
        layer = next_layer;
    }
}

/// Moves at the highest admissible vertex (leftmost among equals) until the
/// left comb is reached.
pub fn canonical_path_to_left_comb(t: &PlanarTree) -> Result<Vec<MoveRecord>> {
    let mut cur = t.clone();
    let mut out = Vec::new();
    loop {
        let best = cur
            .movable_vertices()
            .into_iter()
            .min_by_key(|&u| (cur.vertices[u].depth, cur.vertices[u].lo));
        let Some(u) = best else { break };
        let (next, rec) = transplant_right_to_left(&cur, u)?;
        out.push(rec);
        cur = next;
    }
    Ok(out)
}

/// A coefficient labeling: one nonnegative integer per internal vertex, in
/// pre-order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CoefLabeling(pub Vec<usize>);

impl CoefLabeling {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn zero(t: &PlanarTree) -> Self {
        Self(vec![0; t.internal_count()])
    }
}

/// `CL(T,n)` in lexicographic order of the pre-order label vectors.
pub fn enumerate_labelings(t: &PlanarTree, n: usize) -> Vec<CoefLabeling> {
    enumerate_compositions(t.internal_count(), n)
        .into_iter()
        .map(CoefLabeling)
        .collect()
}

/// Subtree coefficient sums `cs(U)` for every internal vertex.
pub fn coefficient_sums(t: &PlanarTree, c: &CoefLabeling) -> Vec<usize> {
    let mut cs = vec![0; t.internal_count()];
    for u in (0..t.internal_count()).rev() {
        let v = &t.vertices[u];
        let side = |ch: Child| match ch {
            Child::Leaf(_) => 0,
            Child::Internal(k) => cs[k],
        };
        cs[u] = c.0[u] + side(v.left) + side(v.right);
    }
    cs
}

/// `p(U) = α_{lo+1} ⋯ α_hi q^{hi−lo}`.
pub fn p_value(p: &ParamSet, lo: usize, hi: usize) -> QValue {
    p.big_a(hi) / p.big_a(lo) * p.ctx().q_pow((hi - lo) as i64)
}

/// Combinatorial attributes of an internal vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexAttributes {
    pub lo: usize,
    pub hi: usize,
    pub p: QValue,
    pub lp: QValue,
    pub rp: QValue,
    pub v: Option<usize>,
    pub lv: Option<usize>,
    pub rv: Option<usize>,
    pub c: Option<usize>,
    pub lcs: Option<usize>,
    pub rcs: Option<usize>,
    pub cs: Option<usize>,
}

/// Attributes of every internal vertex, given optionally a point `x` and a
/// labeling `c`.
pub fn attributes(
    t: &PlanarTree,
    params: &ParamSet,
    x: Option<&[usize]>,
    c: Option<&CoefLabeling>,
) -> Result<Vec<VertexAttributes>> {
    if params.h() < t.h() {
        return Err(QError::DimensionMismatch(format!(
            "{} parameters for a tree with {} leaves",
            params.h(),
            t.h()
        )));
    }
    if let Some(x) = x {
        if x.len() != t.h() {
            return Err(QError::DimensionMismatch("composition length".into()));
        }
    }
    if let Some(c) = c {
        if c.0.len() != t.internal_count() {
            return Err(QError::DimensionMismatch("labeling length".into()));
        }
    }
    let cs = c.map(|c| coefficient_sums(t, c));
    let sum = |lo: usize, hi: usize| x.map(|x| x[lo..hi].iter().sum::<usize>());
    Ok(t.vertices
        .iter()
        .enumerate()
        .map(|(u, v)| {
            let split = t.split_of(u);
            let side_cs = |ch: Child| {
                cs.as_ref().map(|cs| match ch {
                    Child::Leaf(_) => 0,
                    Child::Internal(k) => cs[k],
                })
            };
            VertexAttributes {
                lo: v.lo,
                hi: v.hi,
                p: p_value(params, v.lo, v.hi),
                lp: p_value(params, v.lo, split),
                rp: p_value(params, split, v.hi),
                v: sum(v.lo, v.hi),
                lv: sum(v.lo, split),
                rv: sum(split, v.hi),
                c: c.map(|c| c.0[u]),
                lcs: side_cs(v.left),
                rcs: side_cs(v.right),
                cs: cs.as_ref().map(|cs| cs[u]),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::composition_count;
    use crate::qnum::{rat, QContext};

    fn catalan(k: usize) -> usize {
        crate::lattice::binomial(2 * k, k) / (k + 1)
    }

    #[test]
    fn parse_and_serialize() {
        let t = PlanarTree::parse("(1 2)").unwrap();
        assert_eq!(t.h(), 2);
        let f = PlanarTree::parse("((1 2)(3 4))").unwrap();
        assert_eq!(f.serialize(), "((1 2)(3 4))");
        assert_eq!(f.internal_count(), 3);
        assert!(matches!(
            PlanarTree::parse("((1 3)(2 4))"),
            Err(QError::NonConsecutiveLeaves(_))
        ));
        assert!(matches!(PlanarTree::parse("((1 2)"), Err(QError::Parse(_))));
        assert!(matches!(
            PlanarTree::parse("(1 2 3)"),
            Err(QError::Parse(_))
        ));
        assert_eq!(
            PlanarTree::parse(" ( ( 1 2 ) 3 ) ").unwrap().serialize(),
            "((1 2) 3)"
        );
        for h in 2..=6 {
            let all = PlanarTree::all_trees(h).unwrap();
            assert_eq!(all.len(), catalan(h - 1));
            for t in all {
                assert_eq!(PlanarTree::parse(&t.serialize()).unwrap(), t);
                assert_eq!(t.internal_count(), h - 1);
            }
        }
    }

    #[test]
    fn combs() {
        assert_eq!(
            PlanarTree::right_comb(2).unwrap(),
            PlanarTree::left_comb(2).unwrap()
        );
        assert_eq!(PlanarTree::right_comb(3).unwrap().serialize(), "(1 (2 3))");
        assert_eq!(
            PlanarTree::left_comb(4).unwrap().serialize(),
            "(((1 2) 3) 4)"
        );
        assert_eq!(
            PlanarTree::right_comb(4).unwrap().serialize(),
            "(1 (2 (3 4)))"
        );
    }

    #[test]
    fn labelings() {
        let t = PlanarTree::parse("((1 2)(3 4))").unwrap();
        assert_eq!(
            enumerate_labelings(&t, 0),
            vec![CoefLabeling(vec![0, 0, 0])]
        );
        assert_eq!(enumerate_labelings(&t, 2).len(), 6);
        for h in 2..=5 {
            for t in PlanarTree::all_trees(h).unwrap() {
                for big_n in 0..=5 {
                    let total: usize = (0..=big_n).map(|n| enumerate_labelings(&t, n).len()).sum();
                    assert_eq!(total, composition_count(h, big_n));
                }
            }
        }
    }

    #[test]
    fn vertex_attributes() {
        let ctx = QContext::default_context();
        let p = ParamSet::new(
            ctx.clone(),
            vec![rat(1, 2), rat(1, 3), rat(2, 3), rat(3, 5)],
        );
        let t = PlanarTree::parse("((1 2)(3 4))").unwrap();
        let c = CoefLabeling(vec![1, 2, 3]);
        let x = [1, 2, 3, 4];
        let a = attributes(&t, &p, Some(&x), Some(&c)).unwrap();
        assert_eq!(a[0].p, p.big_a(4) * ctx.q_pow(4));
        assert_eq!(a[0].v, Some(10));
        assert_eq!(a[0].cs, Some(6));
        assert_eq!((a[0].lcs, a[0].rcs), (Some(2), Some(3)));
        assert_eq!(a[1].p, rat(1, 6) * ctx.q_pow(2));
        assert_eq!((a[1].lo, a[1].hi), (0, 2));
        assert_eq!(a[1].lp, rat(1, 2) * ctx.q());
        assert_eq!(a[2].v, Some(7));
        assert_eq!(a[2].cs, Some(3));
    }

    #[test]
    fn transplantation() {
        let (t, rec) = transplant_right_to_left(&PlanarTree::right_comb(3).unwrap(), 0).unwrap();
        assert_eq!(t, PlanarTree::left_comb(3).unwrap());
        assert_eq!(rec.spans, Spans { s: 1, r: 2, h: 3 });
        let (t, _) = transplant_right_to_left(&PlanarTree::right_comb(4).unwrap(), 0).unwrap();
        assert_eq!(t.serialize(), "((1 2)(3 4))");
        let lc = PlanarTree::left_comb(5).unwrap();
        for u in 0..4 {
            assert!(matches!(
                transplant_right_to_left(&lc, u),
                Err(QError::RightChildIsLeaf(_))
            ));
        }
        // index maps: the vertex spans of the source reappear where the map says
        for h in 3..=6 {
            for t in PlanarTree::all_trees(h).unwrap() {
                for u in t.movable_vertices() {
                    let (n, rec) = transplant_right_to_left(&t, u).unwrap();
                    assert_eq!(n.h(), h);
                    for (i, &j) in rec.index_map.iter().enumerate() {
                        let (a, b) = (&t.vertices()[i], &n.vertices()[j]);
                        if i == u {
                            assert_eq!((a.lo, a.hi), (b.lo, b.hi));
                        } else if Child::Internal(i) == t.vertices()[u].right {
                            // Z becomes Y, the union of T′ and T″
                            assert_eq!(b.lo, t.vertices()[u].lo);
                        } else {
                            assert_eq!((a.lo, a.hi), (b.lo, b.hi), "h={h} u={u} i={i}");
                        }
                    }
                    let mut img = rec.index_map.clone();
                    img.sort();
                    assert_eq!(img, (0..h - 1).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn paths() {
        let rc = PlanarTree::right_comb(4).unwrap();
        assert!(find_rl_path(&rc, &rc).unwrap().is_empty());
        assert!(matches!(
            find_rl_path(
                &PlanarTree::left_comb(3).unwrap(),
                &PlanarTree::right_comb(3).unwrap()
            ),
            Err(QError::NotRightReachable)
        ));
        assert!(
            canonical_path_to_left_comb(&PlanarTree::left_comb(5).unwrap())
                .unwrap()
                .is_empty()
        );
        let fig = PlanarTree::parse("((1 2)(3 4))").unwrap();
        let path = canonical_path_to_left_comb(&fig).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path[0].vertex, 0);
        let path = canonical_path_to_left_comb(&rc).unwrap();
        assert_eq!(
            path.iter().map(|m| m.vertex).collect::<Vec<_>>(),
            vec![0, 0]
        );
        for h in 2..=6 {
            let lc = PlanarTree::left_comb(h).unwrap();
            let rc = PlanarTree::right_comb(h).unwrap();
            for t in PlanarTree::all_trees(h).unwrap() {
                let moves: Vec<usize> = canonical_path_to_left_comb(&t)
                    .unwrap()
                    .iter()
                    .map(|m| m.vertex)
                    .collect();
                let mut end = t.clone();
                for u in moves {
                    end = transplant_right_to_left(&end, u).unwrap().0;
                }
                assert_eq!(end, lc);
                assert!(find_rl_path(&rc, &t).is_ok());
                assert!(find_rl_path(&t, &lc).is_ok());
            }
        }
    }

    #[test]
    fn shortest_paths_agree_with_bfs() {
        for t in PlanarTree::all_trees(4).unwrap() {
            let rc = PlanarTree::right_comb(4).unwrap();
            let all = all_shortest_rl_paths(&rc, &t).unwrap();
            let bfs = find_rl_path(&rc, &t).unwrap();
            assert!(all.iter().all(|p| p.len() == bfs.len()));
            assert!(all.contains(&bfs.iter().map(|m| m.vertex).collect()));
        }
    }
}
