//! Polygon partitions and plane trees over a labelled vertex sequence
//! `p0, p1, ..., pN`.
//!
//! A [`PolygonPartition`] is stored as its face set; each face is a list of
//! vertex positions. A [`PlaneTree`] has `N` leaves, leaf `i` standing for the
//! outer edge `(p_i, p_{i+1})`. The two are related by the usual bijection: the
//! root of the tree is the edge `(p0, pN)`, the children of a nonleaf are the
//! remaining edges of its face read from `p0` towards `pN`.
//!
//! # Text notation
//!
//! * Partitions print their faces in tree preorder (root face first), each face
//!   as comma-separated vertex positions: `(0,2,3) (0,1,2)`.
//! * Trees print as nested parentheses with `L` for a leaf, e.g. `((L L) L)`.
//!   Leaf labels are implied by depth-first order. A unary node over a leaf is
//!   `(L)`; a pending subtree slot produced by [`extend_star`] prints as `*`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::combinat;
use crate::error::{Error, Result};
use crate::mindex::{compatible_tuples, CompatibleTuple, LatticePath, MultiIndex};

/// Type `(s, t)` of a star: `s_r` leaves stepping along `e_r` (in axis order),
/// followed by `t` nonleaves.
pub type StarType = CompatibleTuple;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolygonPartition {
    vertices: Vec<MultiIndex>,
    faces: Vec<Vec<usize>>,
}

impl PolygonPartition {
    /// Validates `faces` and stores them in tree preorder.
    pub fn from_faces(vertices: Vec<MultiIndex>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        if vertices.len() < 3 {
            return Err(Error::MalformedPartition(
                "a polygon needs at least 3 vertices".into(),
            ));
        }
        let mut by_span: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for f in &faces {
            if f.len() < 3 {
                return Err(Error::MalformedPartition(format!(
                    "face {f:?} has fewer than 3 vertices"
                )));
            }
            if f.windows(2).any(|w| w[0] >= w[1]) || *f.last().unwrap() > n {
                return Err(Error::MalformedPartition(format!(
                    "face {f:?} is not an increasing subsequence of 0..={n}"
                )));
            }
            let key = (f[0], *f.last().unwrap());
            if by_span.insert(key, f.clone()).is_some() {
                return Err(Error::MalformedPartition(format!(
                    "two faces share the edge {key:?} as their closing edge"
                )));
            }
        }
        let mut ordered = Vec::with_capacity(faces.len());
        collect_preorder(0, n, &mut by_span, &mut ordered)?;
        if !by_span.is_empty() {
            return Err(Error::MalformedPartition(format!(
                "faces {:?} are not reachable from the edge (0,{n})",
                by_span.values().collect::<Vec<_>>()
            )));
        }
        Ok(PolygonPartition {
            vertices,
            faces: ordered,
        })
    }

    pub fn vertices(&self) -> &[MultiIndex] {
        &self.vertices
    }

    /// Faces as vertex positions, root face first then preorder.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Faces as label sequences.
    pub fn face_labels(&self) -> Vec<Vec<MultiIndex>> {
        self.faces
            .iter()
            .map(|f| f.iter().map(|&i| self.vertices[i].clone()).collect())
            .collect()
    }

    /// Inner edges (diagonals), sorted.
    pub fn diagonals(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len() - 1;
        let mut d: Vec<(usize, usize)> = self
            .faces
            .iter()
            .map(|f| (f[0], *f.last().unwrap()))
            .filter(|&(a, b)| !(a == 0 && b == n))
            .collect();
        d.sort();
        d
    }

    /// Positional face notation, e.g. `(0,2,3) (0,1,2)`.
    pub fn notation(&self) -> String {
        self.faces
            .iter()
            .map(|f| {
                let inner: Vec<String> = f.iter().map(|i| i.to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses [`notation`](Self::notation) back against a vertex sequence.
    pub fn parse_notation(vertices: Vec<MultiIndex>, s: &str) -> Result<Self> {
        let mut faces = Vec::new();
        for tok in s.split_whitespace() {
            let inner = tok.trim_start_matches('(').trim_end_matches(')');
            let face = inner
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::MalformedPartition(format!("bad face `{tok}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            faces.push(face);
        }
        Self::from_faces(vertices, faces)
    }
}

fn collect_preorder(
    a: usize,
    b: usize,
    by_span: &mut HashMap<(usize, usize), Vec<usize>>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let face = by_span
        .remove(&(a, b))
        .ok_or_else(|| Error::MalformedPartition(format!("no face closes the edge ({a},{b})")))?;
    out.push(face.clone());
    for w in face.windows(2) {
        if w[1] - w[0] >= 2 {
            collect_preorder(w[0], w[1], by_span, out)?;
        }
    }
    Ok(())
}

/// A node of a plane tree, in vertex positions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TreeNode {
    /// Leaf standing for the outer edge `(i, i+1)`.
    Leaf(usize),
    /// Nonleaf with ordered children.
    Node(Vec<TreeNode>),
    /// Pending subtree spanning positions `a..b`; only produced by [`extend_star`].
    Stub(usize, usize),
}

impl TreeNode {
    /// First and last vertex position covered by this node.
    pub fn span(&self) -> (usize, usize) {
        match self {
            TreeNode::Leaf(i) => (*i, *i + 1),
            TreeNode::Stub(a, b) => (*a, *b),
            TreeNode::Node(ch) => (ch[0].span().0, ch.last().expect("nonleaf").span().1),
        }
    }

    /// Label as vertex positions: a leaf is `(i, i+1)`, a nonleaf joins the
    /// endpoints of its children's labels.
    pub fn label(&self) -> Vec<usize> {
        match self {
            TreeNode::Node(ch) => {
                let mut l = vec![ch[0].span().0];
                l.extend(ch.iter().map(|c| c.span().1));
                l
            }
            other => {
                let (a, b) = other.span();
                vec![a, b]
            }
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf(_))
    }

    fn count(&self, leaves: &mut usize, nonleaves: &mut usize) {
        match self {
            TreeNode::Leaf(_) => *leaves += 1,
            TreeNode::Stub(..) => {}
            TreeNode::Node(ch) => {
                *nonleaves += 1;
                ch.iter().for_each(|c| c.count(leaves, nonleaves));
            }
        }
    }

    fn preorder_nodes<'a>(&'a self, out: &mut Vec<&'a TreeNode>) {
        if let TreeNode::Node(ch) = self {
            out.push(self);
            ch.iter().for_each(|c| c.preorder_nodes(out));
        }
    }

    fn leaves_in_order(&self, out: &mut Vec<usize>) {
        match self {
            TreeNode::Leaf(i) => out.push(*i),
            TreeNode::Stub(..) => {}
            TreeNode::Node(ch) => ch.iter().for_each(|c| c.leaves_in_order(out)),
        }
    }

    fn write_shape(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeNode::Leaf(_) => write!(f, "L"),
            TreeNode::Stub(..) => write!(f, "*"),
            TreeNode::Node(ch) => {
                write!(f, "(")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    c.write_shape(f)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A plane tree whose leaves are labelled by consecutive vertex pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlaneTree {
    vertices: Vec<MultiIndex>,
    root: TreeNode,
}

impl PlaneTree {
    /// Checks that the leaves read `0, 1, ..., N-1` depth-first and that the
    /// tree covers all `N + 1` vertices.
    pub fn new(vertices: Vec<MultiIndex>, root: TreeNode) -> Result<Self> {
        let mut leaves = Vec::new();
        root.leaves_in_order(&mut leaves);
        check_node_shape(&root)?;
        let has_stub = contains_stub(&root);
        if !has_stub {
            let expected: Vec<usize> = (0..vertices.len().saturating_sub(1)).collect();
            if leaves != expected {
                return Err(Error::MalformedTree(format!(
                    "leaves read {leaves:?} depth-first, expected {expected:?}"
                )));
            }
        }
        if root.span() != (0, vertices.len().saturating_sub(1)) {
            return Err(Error::MalformedTree(format!(
                "tree spans {:?} but there are {} vertices",
                root.span(),
                vertices.len()
            )));
        }
        Ok(PlaneTree { vertices, root })
    }

    /// Builds a tree from the parenthesized shape notation, assigning leaf labels
    /// depth-first.
    pub fn from_shape(vertices: Vec<MultiIndex>, shape: &str) -> Result<Self> {
        let root = parse_shape(shape)?;
        Self::new(vertices, root)
    }

    pub fn vertices(&self) -> &[MultiIndex] {
        &self.vertices
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn leaf_count(&self) -> usize {
        let (mut l, mut n) = (0, 0);
        self.root.count(&mut l, &mut n);
        l
    }

    pub fn nonleaf_count(&self) -> usize {
        let (mut l, mut n) = (0, 0);
        self.root.count(&mut l, &mut n);
        n
    }

    /// Nonleaf nodes in preorder.
    pub fn nonleaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.root.preorder_nodes(&mut out);
        out
    }

    /// `V(τ)`: nonleaf labels as vertex positions, preorder.
    pub fn nonleaf_labels(&self) -> Vec<Vec<usize>> {
        self.nonleaves().iter().map(|n| n.label()).collect()
    }

    /// Stars of all nonleaves, preorder.
    pub fn stars(&self) -> Vec<Star> {
        self.nonleaves()
            .into_iter()
            .map(|node| star_of(&self.vertices, node))
            .collect()
    }

    /// Whether every nonleaf has at least two children (the family 𝒯).
    pub fn is_reduced(&self) -> bool {
        self.nonleaves().iter().all(|n| match n {
            TreeNode::Node(ch) => ch.len() >= 2,
            _ => true,
        })
    }

    pub fn shape(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write_shape(f)
    }
}

fn contains_stub(n: &TreeNode) -> bool {
    match n {
        TreeNode::Stub(..) => true,
        TreeNode::Leaf(_) => false,
        TreeNode::Node(ch) => ch.iter().any(contains_stub),
    }
}

fn check_node_shape(n: &TreeNode) -> Result<()> {
    if let TreeNode::Node(ch) = n {
        if ch.is_empty() {
            return Err(Error::MalformedTree("nonleaf without children".into()));
        }
        for w in ch.windows(2) {
            if w[0].span().1 != w[1].span().0 {
                return Err(Error::MalformedTree(format!(
                    "children spans {:?} and {:?} are not adjacent",
                    w[0].span(),
                    w[1].span()
                )));
            }
        }
        ch.iter().try_for_each(check_node_shape)?;
    }
    Ok(())
}

fn parse_shape(s: &str) -> Result<TreeNode> {
    let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let mut next_leaf = 0;
    let node = parse_shape_node(&tokens, &mut pos, &mut next_leaf)?;
    if pos != tokens.len() {
        return Err(Error::MalformedTree(format!("trailing input in `{s}`")));
    }
    Ok(node)
}

fn parse_shape_node(t: &[char], pos: &mut usize, next_leaf: &mut usize) -> Result<TreeNode> {
    match t.get(*pos) {
        Some('L') => {
            *pos += 1;
            *next_leaf += 1;
            Ok(TreeNode::Leaf(*next_leaf - 1))
        }
        Some('(') => {
            *pos += 1;
            let mut ch = Vec::new();
            while t.get(*pos) != Some(&')') {
                if *pos >= t.len() {
                    return Err(Error::MalformedTree("unbalanced parentheses".into()));
                }
                ch.push(parse_shape_node(t, pos, next_leaf)?);
            }
            *pos += 1;
            if ch.is_empty() {
                return Err(Error::MalformedTree("empty node `()`".into()));
            }
            Ok(TreeNode::Node(ch))
        }
        other => Err(Error::MalformedTree(format!(
            "unexpected {other:?} in tree shape"
        ))),
    }
}

/// One child of a star: the vertex pair it spans and whether it is a leaf.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StarChild {
    pub from: MultiIndex,
    pub to: MultiIndex,
    pub leaf: bool,
}

/// A nonleaf together with its ordered children.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Star {
    /// Root label `(i0, ..., ik)`.
    pub root: Vec<MultiIndex>,
    pub children: Vec<StarChild>,
}

impl Star {
    pub fn root_path(&self) -> Result<LatticePath> {
        LatticePath::new(self.root.clone())
    }
}

fn star_of(vertices: &[MultiIndex], node: &TreeNode) -> Star {
    let TreeNode::Node(ch) = node else {
        panic!("stars exist only at nonleaves");
    };
    Star {
        root: node.label().iter().map(|&i| vertices[i].clone()).collect(),
        children: ch
            .iter()
            .map(|c| {
                let (a, b) = c.span();
                StarChild {
                    from: vertices[a].clone(),
                    to: vertices[b].clone(),
                    leaf: c.is_leaf(),
                }
            })
            .collect(),
    }
}

/// The type of a star, or `None` when its children do not follow the
/// "axis-ordered unit leaves, then nonleaves" pattern.
pub fn star_type(star: &Star) -> Option<StarType> {
    let q = star.root.first()?.q();
    let mut s = vec![0usize; q];
    let mut axis = 0usize;
    let mut t = 0usize;
    for child in &star.children {
        if child.leaf {
            if t > 0 {
                return None;
            }
            let r = child.from.diff_to(&child.to)?.unit_axis()?;
            if r < axis {
                return None;
            }
            axis = r;
            s[r] += 1;
        } else {
            t += 1;
        }
    }
    Some(CompatibleTuple {
        s: MultiIndex::new(s),
        t,
    })
}

/// Extends a star for a compatible `(s, t)`: every leaf among the final `t`
/// children gets a unary parent inserted above it. Nonleaf children come back as
/// pending slots ([`TreeNode::Stub`]). The result is labelled by the star's root
/// label, so child `j` spans positions `j-1..j`.
pub fn extend_star(star: &Star, s: &MultiIndex, t: usize) -> Result<PlaneTree> {
    let path = star.root_path()?;
    let tuple = CompatibleTuple { s: s.clone(), t };
    if !compatible_tuples(&path).contains(&tuple) {
        return Err(Error::invalid(format!(
            "tuple {tuple} is not compatible with the star rooted at {path}"
        )));
    }
    let first_free = s.order();
    let children = star
        .children
        .iter()
        .enumerate()
        .map(|(j, c)| match (c.leaf, j >= first_free) {
            (true, true) => TreeNode::Node(vec![TreeNode::Leaf(j)]),
            (true, false) => TreeNode::Leaf(j),
            (false, _) => TreeNode::Stub(j, j + 1),
        })
        .collect();
    PlaneTree::new(star.root.clone(), TreeNode::Node(children))
}

/// Root faces of the polygon on positions `a..=b`, in enumeration order:
/// more vertices first, then reverse-lexicographic.
fn root_faces(a: usize, b: usize) -> Vec<Vec<usize>> {
    let inner: Vec<usize> = (a + 1..b).collect();
    let mut out = Vec::new();
    // Every subset of the interior positions with at least one element.
    let m = inner.len();
    for mask in 1u64..(1u64 << m) {
        let mut f = vec![a];
        f.extend((0..m).filter(|i| mask >> i & 1 == 1).map(|i| inner[i]));
        f.push(b);
        out.push(f);
    }
    out.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| y.cmp(x)));
    out
}

fn partitions_between(
    a: usize,
    b: usize,
    memo: &mut HashMap<usize, Vec<Vec<Vec<usize>>>>,
) -> Vec<Vec<Vec<usize>>> {
    // Cached by width, stored relative to 0 and shifted on the way out.
    let width = b - a;
    if let Some(cached) = memo.get(&width) {
        return cached
            .iter()
            .map(|p| {
                p.iter()
                    .map(|f| f.iter().map(|v| v + a).collect())
                    .collect()
            })
            .collect();
    }
    let mut out = Vec::new();
    for face in root_faces(0, width) {
        let mut combos: Vec<Vec<Vec<usize>>> = vec![vec![face.clone()]];
        for w in face.windows(2) {
            if w[1] - w[0] < 2 {
                continue;
            }
            let subs = partitions_between(w[0], w[1], memo);
            let mut next = Vec::with_capacity(combos.len() * subs.len());
            for c in &combos {
                for sub in &subs {
                    let mut merged = c.clone();
                    merged.extend(sub.iter().cloned());
                    next.push(merged);
                }
            }
            combos = next;
        }
        out.extend(combos);
    }
    memo.insert(width, out.clone());
    out.into_iter()
        .map(|p| {
            p.into_iter()
                .map(|f| f.into_iter().map(|v| v + a).collect())
                .collect()
        })
        .collect()
}

/// Every partition of the polygon with the given vertex labels.
pub fn enumerate_partitions(vertices: &[MultiIndex]) -> Result<Vec<PolygonPartition>> {
    if vertices.len() < 3 {
        return Err(Error::invalid("a polygon needs at least 3 vertices"));
    }
    let n = vertices.len() - 1;
    let mut memo = HashMap::new();
    Ok(partitions_between(0, n, &mut memo)
        .into_iter()
        .map(|faces| PolygonPartition {
            vertices: vertices.to_vec(),
            faces,
        })
        .collect())
}

/// The plane tree of a partition: the root is the edge `(p0, pN)`, children of a
/// face are its other edges read from `p0` towards `pN`.
pub fn partition_to_tree(partition: &PolygonPartition) -> Result<PlaneTree> {
    let by_span: HashMap<(usize, usize), &Vec<usize>> = partition
        .faces
        .iter()
        .map(|f| ((f[0], *f.last().unwrap()), f))
        .collect();
    if by_span.len() != partition.faces.len() {
        return Err(Error::MalformedPartition("duplicate closing edges".into()));
    }
    let n = partition.vertices.len() - 1;
    let mut used = 0usize;
    let root = build_node(0, n, &by_span, &mut used)?;
    if used != partition.faces.len() {
        return Err(Error::MalformedPartition("unreachable faces".into()));
    }
    PlaneTree::new(partition.vertices.clone(), root)
}

fn build_node(
    a: usize,
    b: usize,
    by_span: &HashMap<(usize, usize), &Vec<usize>>,
    used: &mut usize,
) -> Result<TreeNode> {
    if b == a + 1 {
        return Ok(TreeNode::Leaf(a));
    }
    let face = by_span
        .get(&(a, b))
        .ok_or_else(|| Error::MalformedPartition(format!("no face closes the edge ({a},{b})")))?;
    *used += 1;
    let children = face
        .windows(2)
        .map(|w| build_node(w[0], w[1], by_span, used))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeNode::Node(children))
}

/// Inverse of [`partition_to_tree`]: the nonleaf labels are the faces.
pub fn tree_to_partition(tree: &PlaneTree) -> Result<PolygonPartition> {
    if contains_stub(&tree.root) {
        return Err(Error::MalformedTree("tree has pending slots".into()));
    }
    if !tree.is_reduced() {
        return Err(Error::MalformedTree(
            "tree has a nonleaf with a single child".into(),
        ));
    }
    PolygonPartition::from_faces(tree.vertices.clone(), tree.nonleaf_labels())
}

/// 𝒯(p0, ..., pN): plane trees without unary nonleaves, in the same order as
/// [`enumerate_partitions`].
pub fn enumerate_trees(vertices: &[MultiIndex]) -> Result<Vec<PlaneTree>> {
    enumerate_partitions(vertices)?
        .iter()
        .map(partition_to_tree)
        .collect()
}

/// 𝒯′(p0, ..., pN): every tree of 𝒯 with each star replaced by one of its
/// extensions. Order: trees of 𝒯 in order, then per-star tuple choices with
/// preorder-first stars varying slowest and tuples by decreasing `t`.
///
/// For a single edge (two vertices) this is the lone unary star over the leaf.
pub fn enumerate_tprime(vertices: &[MultiIndex]) -> Result<Vec<PlaneTree>> {
    match vertices.len() {
        0 | 1 => Err(Error::invalid("a path needs at least one edge")),
        2 => {
            vertices[0]
                .diff_to(&vertices[1])
                .and_then(|d| d.unit_axis())
                .ok_or_else(|| Error::invalid("a single edge must be a unit step"))?;
            Ok(vec![PlaneTree::new(
                vertices.to_vec(),
                TreeNode::Node(vec![TreeNode::Leaf(0)]),
            )?])
        }
        _ => {
            let mut out = Vec::new();
            for tree in enumerate_trees(vertices)? {
                for root in extensions(vertices, &tree.root)? {
                    out.push(PlaneTree {
                        vertices: vertices.to_vec(),
                        root,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// The trees of 𝒯′ obtained from one reduced tree of 𝒯 by extending its stars.
pub fn tprime_extensions(tree: &PlaneTree) -> Result<Vec<PlaneTree>> {
    if !tree.is_reduced() {
        return Err(Error::MalformedTree(format!("{tree} is not a tree of 𝒯")));
    }
    Ok(extensions(&tree.vertices, &tree.root)?
        .into_iter()
        .map(|root| PlaneTree {
            vertices: tree.vertices.clone(),
            root,
        })
        .collect())
}

fn extensions(vertices: &[MultiIndex], node: &TreeNode) -> Result<Vec<TreeNode>> {
    let TreeNode::Node(children) = node else {
        return Ok(vec![node.clone()]);
    };
    let label: Vec<MultiIndex> = node.label().iter().map(|&i| vertices[i].clone()).collect();
    let path = LatticePath::new(label)?;
    let mut out = Vec::new();
    for tuple in compatible_tuples(&path) {
        let first_free = tuple.s.order();
        let mut combos: Vec<Vec<TreeNode>> = vec![Vec::new()];
        for (j, child) in children.iter().enumerate() {
            let options = match child {
                TreeNode::Leaf(_) if j >= first_free => vec![TreeNode::Node(vec![child.clone()])],
                TreeNode::Leaf(_) => vec![child.clone()],
                _ => extensions(vertices, child)?,
            };
            let mut next = Vec::with_capacity(combos.len() * options.len());
            for c in &combos {
                for o in &options {
                    let mut v = c.clone();
                    v.push(o.clone());
                    next.push(v);
                }
            }
            combos = next;
        }
        out.extend(combos.into_iter().map(TreeNode::Node));
    }
    Ok(out)
}

/// Recognizes 𝒯′ directly: every star has a type and none has type `(0, 1)`.
pub fn is_tprime(tree: &PlaneTree) -> bool {
    if contains_stub(&tree.root) {
        return false;
    }
    tree.stars().iter().all(|star| match star_type(star) {
        Some(ty) => !(ty.s.is_zero() && ty.t == 1),
        None => false,
    })
}

/// Number of plane trees with `r[d]` vertices of out-degree `d`:
/// `(1/R) · multinomial(R; r0, r1, ...)` with `R = Σ r_d`.
pub fn count_trees_by_outdegree(r: &BTreeMap<usize, usize>) -> Result<u128> {
    let total: usize = r.values().sum();
    let edges: usize = r.iter().map(|(d, c)| d * c).sum();
    if r.get(&0).copied().unwrap_or(0) == 0 {
        return Err(Error::invalid("a tree needs at least one leaf"));
    }
    if edges + 1 != total {
        return Err(Error::invalid(format!(
            "degree profile {r:?} is infeasible: {edges} edges for {total} vertices"
        )));
    }
    let parts: Vec<usize> = r.values().copied().collect();
    Ok(combinat::multinomial(&parts) / total as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<MultiIndex> {
        (0..=n).map(|i| MultiIndex::new(vec![i])).collect()
    }

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (3..=7)
            .map(|v| enumerate_partitions(&labels(v - 1)).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 11, 45, 197]);
        assert!(enumerate_partitions(&labels(1)).is_err());
    }

    #[test]
    fn square_order_matches_univariate_display() {
        let parts = enumerate_partitions(&labels(3)).unwrap();
        let got: Vec<String> = parts.iter().map(|p| p.notation()).collect();
        assert_eq!(got, vec!["(0,1,2,3)", "(0,2,3) (0,1,2)", "(0,1,3) (1,2,3)"]);
    }

    #[test]
    fn triangle_tree_is_binary_star() {
        let p = &enumerate_partitions(&labels(2)).unwrap()[0];
        let t = partition_to_tree(p).unwrap();
        assert_eq!(t.to_string(), "(L L)");
        assert_eq!(t.leaf_count(), 2);
    }

    #[test]
    fn octagon_example() {
        let faces = vec![
            vec![0, 5, 6, 7],
            vec![0, 2, 5],
            vec![0, 1, 2],
            vec![2, 4, 5],
            vec![2, 3, 4],
        ];
        let p = PolygonPartition::from_faces(labels(7), faces).unwrap();
        let t = partition_to_tree(&p).unwrap();
        assert_eq!(t.to_string(), "(((L L) ((L L) L)) L L)");
        assert_eq!(t.nonleaf_count(), 5);
        assert_eq!(t.leaf_count(), 7);
        assert_eq!(tree_to_partition(&t).unwrap(), p);
    }

    #[test]
    fn reverse_construction() {
        // Tree with root children (leaf, nonleaf(leaf, leaf, leaf), leaf).
        let t = PlaneTree::from_shape(labels(5), "(L (L L L) L)").unwrap();
        let p = tree_to_partition(&t).unwrap();
        assert_eq!(p.notation(), "(0,1,4,5) (1,2,3,4)");
    }

    #[test]
    fn fan_triangulation_of_square() {
        // Diagonal (p0, p2): faces (0,2,3) and (0,1,2).
        let p =
            PolygonPartition::from_faces(labels(3), vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
        let t = partition_to_tree(&p).unwrap();
        assert_eq!(t.to_string(), "((L L) L)");
        // Fan from p0 in the other orientation: diagonal (p1, p3).
        let p =
            PolygonPartition::from_faces(labels(3), vec![vec![0, 1, 3], vec![1, 2, 3]]).unwrap();
        let t = partition_to_tree(&p).unwrap();
        assert_eq!(t.to_string(), "(L (L L))");
    }

    #[test]
    fn malformed_partitions() {
        assert!(PolygonPartition::from_faces(labels(3), vec![vec![0, 3]]).is_err());
        assert!(PolygonPartition::from_faces(labels(3), vec![vec![0, 1, 2]]).is_err());
        // Crossing diagonals (0,2) and (1,3).
        assert!(PolygonPartition::from_faces(
            labels(3),
            vec![vec![0, 2, 3], vec![0, 1, 2], vec![1, 2, 3]]
        )
        .is_err());
    }

    #[test]
    fn unary_tree_is_not_a_partition() {
        let t = PlaneTree::from_shape(labels(2), "((L) L)").unwrap();
        assert!(tree_to_partition(&t).is_err());
    }

    #[test]
    fn star_types() {
        // Root (2e1, 3e1, 4e1, 4e1+e2, 5e1+3e2), children L L L N.
        let root = vec![
            mi(&[2, 0]),
            mi(&[3, 0]),
            mi(&[4, 0]),
            mi(&[4, 1]),
            mi(&[5, 3]),
        ];
        let children = root
            .windows(2)
            .enumerate()
            .map(|(j, w)| StarChild {
                from: w[0].clone(),
                to: w[1].clone(),
                leaf: j < 3,
            })
            .collect();
        let star = Star { root, children };
        let ty = star_type(&star).unwrap();
        assert_eq!(ty.to_string(), "(2,1,1)");

        let all_nonleaf = Star {
            root: vec![mi(&[0, 0]), mi(&[1, 1]), mi(&[2, 2])],
            children: vec![
                StarChild {
                    from: mi(&[0, 0]),
                    to: mi(&[1, 1]),
                    leaf: false,
                },
                StarChild {
                    from: mi(&[1, 1]),
                    to: mi(&[2, 2]),
                    leaf: false,
                },
            ],
        };
        assert_eq!(star_type(&all_nonleaf).unwrap().to_string(), "(0,0,2)");

        let wrong_order = Star {
            root: vec![mi(&[0, 0]), mi(&[0, 1]), mi(&[1, 1])],
            children: vec![
                StarChild {
                    from: mi(&[0, 0]),
                    to: mi(&[0, 1]),
                    leaf: true,
                },
                StarChild {
                    from: mi(&[0, 1]),
                    to: mi(&[1, 1]),
                    leaf: true,
                },
            ],
        };
        assert!(star_type(&wrong_order).is_none());

        let leaf_after_nonleaf = Star {
            root: vec![mi(&[0, 0]), mi(&[1, 1]), mi(&[2, 1])],
            children: vec![
                StarChild {
                    from: mi(&[0, 0]),
                    to: mi(&[1, 1]),
                    leaf: false,
                },
                StarChild {
                    from: mi(&[1, 1]),
                    to: mi(&[2, 1]),
                    leaf: true,
                },
            ],
        };
        assert!(star_type(&leaf_after_nonleaf).is_none());
    }

    fn example_path() -> Vec<MultiIndex> {
        vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[1, 1]), mi(&[2, 1])]
    }

    #[test]
    fn extend_star_examples() {
        // τ1: root (p0, p1, p3) with children leaf (p0,p1), nonleaf (p1,p3).
        let tau1 = PlaneTree::from_shape(example_path(), "(L (L L))").unwrap();
        let root_star = &tau1.stars()[0];
        assert_eq!(root_star.root, vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[2, 1])]);

        let ext = extend_star(root_star, &mi(&[0, 0]), 2).unwrap();
        assert_eq!(ext.to_string(), "((L) *)");
        let ext = extend_star(root_star, &mi(&[1, 0]), 1).unwrap();
        assert_eq!(ext.to_string(), "(L *)");
        assert!(extend_star(root_star, &mi(&[0, 1]), 1).is_err());

        let inner = &tau1.stars()[1];
        let ext = extend_star(inner, &mi(&[0, 1]), 1).unwrap();
        assert_eq!(ext.to_string(), "(L (L))");
    }

    #[test]
    fn tprime_example_counts() {
        let path = example_path();
        let trees = enumerate_trees(&path).unwrap();
        let per_tree: Vec<usize> = trees
            .iter()
            .map(|t| extensions(&path, t.root()).unwrap().len())
            .collect();
        // Trees in enumeration order: one face, diagonal (p0,p2), diagonal (p1,p3).
        assert_eq!(trees[0].to_string(), "(L L L)");
        assert_eq!(trees[1].to_string(), "((L L) L)");
        assert_eq!(trees[2].to_string(), "(L (L L))");
        assert_eq!(per_tree, vec![3, 3, 4]);
        assert_eq!(enumerate_tprime(&path).unwrap().len(), 10);
    }

    #[test]
    fn tprime_single_edge() {
        let t = enumerate_tprime(&[mi(&[0, 0]), mi(&[0, 1])]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "(L)");
        let ty = star_type(&t[0].stars()[0]).unwrap();
        assert_eq!(ty.to_string(), "(0,1,0)");
    }

    #[test]
    fn tprime_members_are_recognized() {
        let path = example_path();
        for t in enumerate_tprime(&path).unwrap() {
            assert!(is_tprime(&t), "{t}");
        }
        let bad = PlaneTree::from_shape(path.clone(), "((L L L))").unwrap();
        assert!(!is_tprime(&bad));
    }

    #[test]
    fn outdegree_counts() {
        let c = |pairs: &[(usize, usize)]| {
            count_trees_by_outdegree(&pairs.iter().copied().collect()).unwrap()
        };
        assert_eq!(c(&[(0, 2), (2, 1)]), 1);
        assert_eq!(c(&[(0, 3), (2, 2)]), 2);
        assert_eq!(c(&[(0, 2), (1, 1), (2, 1)]), 3);
        assert!(count_trees_by_outdegree(&[(0, 2), (2, 2)].into_iter().collect()).is_err());
        assert!(count_trees_by_outdegree(&[(1, 1)].into_iter().collect()).is_err());
    }

    #[test]
    fn notation_round_trip() {
        for p in enumerate_partitions(&labels(5)).unwrap() {
            let back = PolygonPartition::parse_notation(labels(5), &p.notation()).unwrap();
            assert_eq!(back, p);
            let t = partition_to_tree(&p).unwrap();
            assert_eq!(PlaneTree::from_shape(labels(5), &t.to_string()).unwrap(), t);
        }
    }
}
