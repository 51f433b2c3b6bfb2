//! Planar rooted trees with ordered children, every internal vertex of arity
//! at least two. A tree with k ends and k-1-i internal vertices sits in
//! stratum i; stratum 0 is the binary trees, stratum k-2 the one-vertex
//! corolla.
//!
//! Serialization is a balanced-parenthesis string: a leaf is empty, a vertex
//! is its children joined by commas inside parentheses. `(,)` is the
//! two-leaf tree, `((,,),)` has a ternary vertex under a binary root. Strings
//! round-trip exactly, and the enumeration order is lexicographic in them.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::fusion::{ElementOrder, FusionError, FusionRing};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
    #[error("leaf count {0} outside supported 2..=8")]
    EndsOutOfBounds(usize),
    #[error("stratum {stratum} out of range for {ends} ends")]
    StratumOutOfRange { ends: usize, stratum: usize },
    #[error("path does not address a vertex of the tree")]
    BadPath,
    #[error("edge is not internal (leaf or root edge)")]
    NotInternalEdge,
    #[error("operation requires a binary tree")]
    NotBinary,
    #[error("expected {expected} subtrees, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Ring(#[from] FusionError),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Node {
    Leaf,
    Branch(Vec<Node>),
}

impl Node {
    fn ends(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Branch(children) => children.iter().map(Node::ends).sum(),
        }
    }

    fn vertices(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Branch(children) => 1 + children.iter().map(Node::vertices).sum::<usize>(),
        }
    }

    fn is_binary(&self) -> bool {
        match self {
            Node::Leaf => true,
            Node::Branch(children) => children.len() == 2 && children.iter().all(Node::is_binary),
        }
    }

    fn write(&self, out: &mut String) {
        if let Node::Branch(children) = self {
            out.push('(');
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                c.write(out);
            }
            out.push(')');
        }
    }
}

/// Identifies a vertex by the child indices on the path from the root.
pub type VertexPath = Vec<usize>;

/// A planar rooted tree with at least two ends.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlanarTree {
    root: Node,
}

impl PlanarTree {
    fn from_node(root: Node) -> Self {
        debug_assert!(matches!(root, Node::Branch(_)));
        PlanarTree { root }
    }

    /// t(k): the unique tree with k ends and a single vertex.
    pub fn corolla(k: usize) -> Self {
        assert!(k >= 2);
        PlanarTree::from_node(Node::Branch(vec![Node::Leaf; k]))
    }

    /// The binary tree (..((1 2) 3) .. k) nesting to the left.
    pub fn left_comb(k: usize) -> Self {
        assert!(k >= 2);
        let mut node = Node::Branch(vec![Node::Leaf, Node::Leaf]);
        for _ in 2..k {
            node = Node::Branch(vec![node, Node::Leaf]);
        }
        PlanarTree::from_node(node)
    }

    /// The binary tree (1 (2 .. (k-1 k)..)) nesting to the right.
    pub fn right_comb(k: usize) -> Self {
        assert!(k >= 2);
        let mut node = Node::Branch(vec![Node::Leaf, Node::Leaf]);
        for _ in 2..k {
            node = Node::Branch(vec![Node::Leaf, node]);
        }
        PlanarTree::from_node(node)
    }

    pub fn ends(&self) -> usize {
        self.root.ends()
    }

    pub fn internal_vertices(&self) -> usize {
        self.root.vertices()
    }

    /// ends - 1 - vertices; 0 for binary trees, ends - 2 for the corolla.
    pub fn stratum(&self) -> usize {
        self.ends() - 1 - self.internal_vertices()
    }

    pub fn is_binary(&self) -> bool {
        self.root.is_binary()
    }

    fn node_at(&self, path: &[usize]) -> Option<&Node> {
        let mut node = &self.root;
        for &step in path {
            match node {
                Node::Branch(children) => node = children.get(step)?,
                Node::Leaf => return None,
            }
        }
        Some(node)
    }

    /// Children arities along the canonical vertex order; see [`vertex_order`].
    pub fn arity_at(&self, path: &[usize]) -> Option<usize> {
        match self.node_at(path)? {
            Node::Branch(children) => Some(children.len()),
            Node::Leaf => None,
        }
    }

    /// Internal vertices sorted by depth, then left to right. The root comes
    /// first; vertices on the same horizontal line appear in reading order.
    pub fn vertex_order(&self) -> Vec<VertexPath> {
        let mut found: Vec<(usize, VertexPath)> = Vec::new();
        fn walk(
            node: &Node,
            depth: usize,
            path: &mut VertexPath,
            found: &mut Vec<(usize, VertexPath)>,
        ) {
            if let Node::Branch(children) = node {
                found.push((depth, path.clone()));
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    walk(c, depth + 1, path, found);
                    path.pop();
                }
            }
        }
        walk(&self.root, 0, &mut Vec::new(), &mut found);
        // preorder already lists equal depths left to right; stable sort keeps that
        found.sort_by_key(|(depth, _)| *depth);
        found.into_iter().map(|(_, path)| path).collect()
    }

    /// Internal edges, each named by its deeper endpoint, in the canonical
    /// edge order (the deeper endpoint's position in [`Self::vertex_order`]).
    pub fn internal_edges(&self) -> Vec<VertexPath> {
        self.vertex_order().into_iter().skip(1).collect()
    }

    /// Contracts the internal edge whose deeper endpoint is at `edge`,
    /// splicing that vertex's children into its parent in place. The result
    /// sits one stratum higher.
    pub fn contract_edge(&self, edge: &[usize]) -> Result<PlanarTree, TreeError> {
        if edge.is_empty() {
            return Err(TreeError::NotInternalEdge);
        }
        match self.node_at(edge) {
            None => Err(TreeError::BadPath),
            Some(Node::Leaf) => Err(TreeError::NotInternalEdge),
            Some(Node::Branch(_)) => {
                let mut root = self.root.clone();
                let mut node = &mut root;
                for &step in &edge[..edge.len() - 1] {
                    match node {
                        Node::Branch(children) => node = &mut children[step],
                        Node::Leaf => unreachable!(),
                    }
                }
                let position = edge[edge.len() - 1];
                let Node::Branch(children) = node else {
                    unreachable!()
                };
                let Node::Branch(grandchildren) = children.remove(position) else {
                    unreachable!()
                };
                children.splice(position..position, grandchildren);
                Ok(PlanarTree::from_node(root))
            }
        }
    }

    /// Glues the roots of `subtrees` onto the ends of `self`, left to right;
    /// `None` is the bare-edge placeholder that leaves an end alone. Leaf
    /// counts add per slot and strata add.
    pub fn graft(&self, subtrees: &[Option<PlanarTree>]) -> Result<PlanarTree, TreeError> {
        if subtrees.len() != self.ends() {
            return Err(TreeError::LengthMismatch {
                expected: self.ends(),
                got: subtrees.len(),
            });
        }
        fn walk(node: &Node, next: &mut usize, subtrees: &[Option<PlanarTree>]) -> Node {
            match node {
                Node::Leaf => {
                    let slot = *next;
                    *next += 1;
                    match &subtrees[slot] {
                        None => Node::Leaf,
                        Some(t) => t.root.clone(),
                    }
                }
                Node::Branch(children) => {
                    Node::Branch(children.iter().map(|c| walk(c, next, subtrees)).collect())
                }
            }
        }
        let mut next = 0;
        Ok(PlanarTree::from_node(walk(&self.root, &mut next, subtrees)))
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.write(&mut s);
        f.write_str(&s)
    }
}

impl std::str::FromStr for PlanarTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, TreeError> {
        let bytes = s.as_bytes();
        let mut at = 0usize;
        let root = parse_branch(bytes, &mut at)?;
        if at != bytes.len() {
            return Err(TreeError::Parse {
                at,
                message: "trailing input".into(),
            });
        }
        Ok(PlanarTree::from_node(root))
    }
}

fn parse_branch(bytes: &[u8], at: &mut usize) -> Result<Node, TreeError> {
    if bytes.get(*at) != Some(&b'(') {
        return Err(TreeError::Parse {
            at: *at,
            message: "expected '('".into(),
        });
    }
    *at += 1;
    let mut children = Vec::new();
    loop {
        match bytes.get(*at) {
            Some(b'(') => children.push(parse_branch(bytes, at)?),
            Some(b',') | Some(b')') => children.push(Node::Leaf),
            _ => {
                return Err(TreeError::Parse {
                    at: *at,
                    message: "expected subtree".into(),
                })
            }
        }
        match bytes.get(*at) {
            Some(b',') => *at += 1,
            Some(b')') => {
                *at += 1;
                break;
            }
            _ => {
                return Err(TreeError::Parse {
                    at: *at,
                    message: "expected ',' or ')'".into(),
                })
            }
        }
    }
    if children.len() < 2 {
        return Err(TreeError::Parse {
            at: *at,
            message: "vertices must have at least two children".into(),
        });
    }
    Ok(Node::Branch(children))
}

/// All planar trees with `k` ends, optionally restricted to one stratum,
/// sorted by their serialization.
pub fn enumerate_trees(k: usize, stratum: Option<usize>) -> Result<Vec<PlanarTree>, TreeError> {
    if !(2..=8).contains(&k) {
        return Err(TreeError::EndsOutOfBounds(k));
    }
    if let Some(s) = stratum {
        if s > k - 2 {
            return Err(TreeError::StratumOutOfRange {
                ends: k,
                stratum: s,
            });
        }
    }
    let mut memo: Vec<Option<Vec<Node>>> = vec![None; k + 1];
    let mut trees: Vec<PlanarTree> = gen_trees(k, &mut memo)
        .into_iter()
        .map(PlanarTree::from_node)
        .filter(|t| stratum.is_none_or(|s| t.stratum() == s))
        .collect();
    trees.sort_by_key(|t| t.to_string());
    Ok(trees)
}

fn gen_trees(k: usize, memo: &mut Vec<Option<Vec<Node>>>) -> Vec<Node> {
    if let Some(cached) = &memo[k] {
        return cached.clone();
    }
    let mut out = Vec::new();
    if k == 1 {
        out.push(Node::Leaf);
    } else {
        let mut comps = Vec::new();
        compositions(k, &mut Vec::new(), &mut comps);
        for comp in comps {
            let choices: Vec<Vec<Node>> = comp.iter().map(|&p| gen_trees(p, memo)).collect();
            let mut odometer = vec![0usize; comp.len()];
            loop {
                let children: Vec<Node> = odometer
                    .iter()
                    .zip(&choices)
                    .map(|(&c, options)| options[c].clone())
                    .collect();
                out.push(Node::Branch(children));
                let mut slot = comp.len();
                loop {
                    if slot == 0 {
                        break;
                    }
                    slot -= 1;
                    odometer[slot] += 1;
                    if odometer[slot] < choices[slot].len() {
                        break;
                    }
                    odometer[slot] = 0;
                    if slot == 0 {
                        slot = usize::MAX;
                        break;
                    }
                }
                if slot == usize::MAX {
                    break;
                }
            }
        }
    }
    memo[k] = Some(out.clone());
    out
}

/// Ordered compositions of `total` into at least two positive parts.
fn compositions(total: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if total == 0 {
        if current.len() >= 2 {
            out.push(current.clone());
        }
        return;
    }
    for part in 1..=total {
        current.push(part);
        compositions(total - part, current, out);
        current.pop();
    }
}

// --- markings and marked index sets ----------------------------------------

/// An edge labeling of a binary tree by ring elements: the root edge carries
/// the output, leaf edges carry the inputs left to right, and internal edges
/// are listed in the canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    pub output: usize,
    pub leaves: Vec<usize>,
    pub internal: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LabelRef {
    Output,
    Leaf(usize),
    Internal(usize),
}

/// The label sources feeding each vertex of a binary tree: (edge above,
/// left child edge, right child edge), vertices in canonical order.
#[derive(Clone, Debug)]
pub struct TreeShape {
    ends: usize,
    edge_count: usize,
    vertex_refs: Vec<(LabelRef, LabelRef, LabelRef)>,
}

impl TreeShape {
    pub fn of(tree: &PlanarTree) -> Result<TreeShape, TreeError> {
        if !tree.is_binary() {
            return Err(TreeError::NotBinary);
        }
        let vo = tree.vertex_order();
        let vertex_pos: HashMap<&VertexPath, usize> =
            vo.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // leaves numbered left to right along a preorder walk
        let mut leaf_no: HashMap<VertexPath, usize> = HashMap::new();
        fn number_leaves(
            node_path: &mut VertexPath,
            node: &Node,
            next: &mut usize,
            out: &mut HashMap<VertexPath, usize>,
        ) {
            match node {
                Node::Leaf => {
                    out.insert(node_path.clone(), *next);
                    *next += 1;
                }
                Node::Branch(children) => {
                    for (i, c) in children.iter().enumerate() {
                        node_path.push(i);
                        number_leaves(node_path, c, next, out);
                        node_path.pop();
                    }
                }
            }
        }
        let mut next = 0;
        number_leaves(&mut Vec::new(), &tree.root, &mut next, &mut leaf_no);

        let child_ref = |path: &VertexPath, side: usize| -> LabelRef {
            let mut p = path.clone();
            p.push(side);
            match tree.node_at(&p) {
                Some(Node::Leaf) => LabelRef::Leaf(leaf_no[&p]),
                Some(Node::Branch(_)) => LabelRef::Internal(vertex_pos[&p] - 1),
                None => unreachable!(),
            }
        };
        let vertex_refs = vo
            .iter()
            .map(|path| {
                let above = if path.is_empty() {
                    LabelRef::Output
                } else {
                    LabelRef::Internal(vertex_pos[path] - 1)
                };
                (above, child_ref(path, 0), child_ref(path, 1))
            })
            .collect();
        Ok(TreeShape {
            ends: tree.ends(),
            edge_count: vo.len() - 1,
            vertex_refs,
        })
    }

    pub fn ends(&self) -> usize {
        self.ends
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn resolve(&self, r: LabelRef, output: usize, inputs: &[usize], internal: &[usize]) -> usize {
        match r {
            LabelRef::Output => output,
            LabelRef::Leaf(i) => inputs[i],
            LabelRef::Internal(e) => internal[e],
        }
    }

    /// The local multiplicities m^{above}_{left,right} per vertex under a marking.
    pub fn vertex_sizes(
        &self,
        ring: &FusionRing,
        output: usize,
        inputs: &[usize],
        internal: &[usize],
    ) -> Vec<i64> {
        self.vertex_refs
            .iter()
            .map(|&(above, left, right)| {
                ring.entry(
                    self.resolve(left, output, inputs, internal),
                    self.resolve(right, output, inputs, internal),
                    self.resolve(above, output, inputs, internal),
                )
            })
            .collect()
    }
}

/// One member of a marked index set: the internal edge labels (edge order)
/// and the per-vertex local indices, 1-based, in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedEntry {
    pub labels: Vec<usize>,
    pub indices: Vec<i64>,
}

/// The ordered disjoint union, over all markings of a binary tree with
/// prescribed inputs and output, of the products of local index ranges.
/// Entries are sorted by internal edge labels first (labels compared in the
/// ring order), then by vertex indices, both lexicographically.
#[derive(Clone, Debug)]
pub struct MarkedIndexSet {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub entries: Vec<MarkedEntry>,
}

impl MarkedIndexSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn marking(&self, index: usize) -> Marking {
        Marking {
            output: self.output,
            leaves: self.inputs.clone(),
            internal: self.entries[index].labels.clone(),
        }
    }
}

pub fn marked_index_set(
    ring: &FusionRing,
    tree: &PlanarTree,
    inputs: &[usize],
    output: usize,
) -> Result<MarkedIndexSet, TreeError> {
    let shape = TreeShape::of(tree)?;
    marked_index_set_from_shape(
        ring,
        &ElementOrder::index_order(ring.rank()),
        &shape,
        inputs,
        output,
    )
}

pub fn marked_index_set_with_order(
    ring: &FusionRing,
    order: &ElementOrder,
    tree: &PlanarTree,
    inputs: &[usize],
    output: usize,
) -> Result<MarkedIndexSet, TreeError> {
    let shape = TreeShape::of(tree)?;
    marked_index_set_from_shape(ring, order, &shape, inputs, output)
}

pub fn marked_index_set_from_shape(
    ring: &FusionRing,
    order: &ElementOrder,
    shape: &TreeShape,
    inputs: &[usize],
    output: usize,
) -> Result<MarkedIndexSet, TreeError> {
    if inputs.len() != shape.ends() {
        return Err(TreeError::LengthMismatch {
            expected: shape.ends(),
            got: inputs.len(),
        });
    }
    for &x in inputs.iter().chain([&output]) {
        if x >= ring.rank() {
            return Err(FusionError::ElementOutOfRange {
                index: x,
                rank: ring.rank(),
            }
            .into());
        }
    }
    let elements = order.elements_in_order();
    let edges = shape.edge_count();
    let mut entries = Vec::new();

    // odometer over markings, last edge fastest, so labels run lexicographically
    // in the ring order
    let mut marking_slots = vec![0usize; edges];
    loop {
        let internal: Vec<usize> = marking_slots.iter().map(|&s| elements[s]).collect();
        let sizes = shape.vertex_sizes(ring, output, inputs, &internal);
        if sizes.iter().all(|&s| s > 0) {
            let mut indices = vec![1i64; sizes.len()];
            loop {
                entries.push(MarkedEntry {
                    labels: internal.clone(),
                    indices: indices.clone(),
                });
                let mut v = sizes.len();
                loop {
                    if v == 0 {
                        v = usize::MAX;
                        break;
                    }
                    v -= 1;
                    indices[v] += 1;
                    if indices[v] <= sizes[v] {
                        break;
                    }
                    indices[v] = 1;
                }
                if v == usize::MAX {
                    break;
                }
            }
        }
        let mut e = edges;
        loop {
            if e == 0 {
                e = usize::MAX;
                break;
            }
            e -= 1;
            marking_slots[e] += 1;
            if marking_slots[e] < elements.len() {
                break;
            }
            marking_slots[e] = 0;
        }
        if e == usize::MAX {
            break;
        }
    }
    Ok(MarkedIndexSet {
        inputs: inputs.to_vec(),
        output,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::nary_constant;

    fn tree(s: &str) -> PlanarTree {
        s.parse().unwrap()
    }

    #[test]
    fn serialization_round_trips() {
        for s in [
            "(,)",
            "(,,)",
            "((,,),)",
            "(,(,(,)))",
            "((,),(,))",
            "(((,),),)",
        ] {
            assert_eq!(tree(s).to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_bad_grammar() {
        assert!("".parse::<PlanarTree>().is_err());
        assert!("()".parse::<PlanarTree>().is_err());
        assert!("((,))".parse::<PlanarTree>().is_err()); // unary vertex
        assert!("(,)x".parse::<PlanarTree>().is_err());
        assert!("(,".parse::<PlanarTree>().is_err());
    }

    #[test]
    fn strata_and_counts() {
        assert_eq!(enumerate_trees(4, Some(0)).unwrap().len(), 5);
        assert_eq!(enumerate_trees(2, None).unwrap().len(), 1);
        let corollas = enumerate_trees(4, Some(2)).unwrap();
        assert_eq!(corollas.len(), 1);
        assert_eq!(corollas[0], PlanarTree::corolla(4));
        assert_eq!(enumerate_trees(4, Some(1)).unwrap().len(), 5);
        assert_eq!(enumerate_trees(4, None).unwrap().len(), 11);
        assert!(enumerate_trees(9, None).is_err());
        assert!(enumerate_trees(4, Some(3)).is_err());
    }

    #[test]
    fn contraction_examples() {
        let left3 = PlanarTree::left_comb(3);
        let edges = left3.internal_edges();
        assert_eq!(edges, vec![vec![0]]);
        assert_eq!(
            left3.contract_edge(&edges[0]).unwrap(),
            PlanarTree::corolla(3)
        );

        // right comb on 4 leaves, the edge closer to the root
        let right4 = PlanarTree::right_comb(4);
        let edges = right4.internal_edges();
        assert_eq!(edges, vec![vec![1], vec![1, 1]]);
        let contracted = right4.contract_edge(&edges[0]).unwrap();
        assert_eq!(contracted.to_string(), "(,,(,))");

        assert!(matches!(
            PlanarTree::corolla(4).contract_edge(&[0]),
            Err(TreeError::NotInternalEdge)
        ));
        assert!(matches!(
            PlanarTree::corolla(4).contract_edge(&[]),
            Err(TreeError::NotInternalEdge)
        ));
    }

    #[test]
    fn contraction_raises_stratum_and_terminates_at_corolla() {
        for t in enumerate_trees(5, None).unwrap() {
            for edge in t.internal_edges() {
                let c = t.contract_edge(&edge).unwrap();
                assert_eq!(c.stratum(), t.stratum() + 1);
                assert_eq!(c.ends(), t.ends());
            }
            // contracting repeatedly always bottoms out at t(k)
            let mut cur = t.clone();
            while let Some(edge) = cur.internal_edges().first().cloned() {
                cur = cur.contract_edge(&edge).unwrap();
            }
            assert_eq!(cur, PlanarTree::corolla(5));
        }
    }

    #[test]
    fn graft_examples() {
        let t2 = PlanarTree::corolla(2);
        let left3 = t2.graft(&[Some(t2.clone()), None]).unwrap();
        assert_eq!(left3, PlanarTree::left_comb(3));

        let balanced = t2.graft(&[Some(t2.clone()), Some(t2.clone())]).unwrap();
        assert_eq!(balanced.to_string(), "((,),(,))");

        let t3 = PlanarTree::corolla(3);
        let grafted = t2.graft(&[None, Some(t3)]).unwrap();
        assert_eq!(grafted.ends(), 4);
        assert_eq!(grafted.stratum(), 1);

        assert!(matches!(
            t2.graft(&[None]),
            Err(TreeError::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn graft_is_associative_in_stages() {
        // grafting in two stages equals grafting the pre-grafted trees,
        // at every pair of graft positions, all shapes with <= 6 total leaves
        let graft_at = |host: &PlanarTree, slot: usize, guest: &PlanarTree| {
            let mut args: Vec<Option<PlanarTree>> = vec![None; host.ends()];
            args[slot] = Some(guest.clone());
            host.graft(&args).unwrap()
        };
        let shapes: Vec<PlanarTree> = (2..=4)
            .flat_map(|k| enumerate_trees(k, None).unwrap())
            .collect();
        for outer in &shapes {
            for mid in &shapes {
                for inner in &shapes {
                    if outer.ends() + mid.ends() + inner.ends() - 2 > 6 {
                        continue;
                    }
                    for p in 0..outer.ends() {
                        for q in 0..mid.ends() {
                            // inner into mid at q, the result into outer at p
                            let two_stage = graft_at(outer, p, &graft_at(mid, q, inner));
                            // mid into outer at p; mid's leaves then sit at
                            // offsets p..p+mid.ends(), so inner lands at p + q
                            let one_stage =
                                graft_at(&graft_at(outer, p, mid), p + q, inner);
                            assert_eq!(two_stage, one_stage);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_order_examples() {
        let balanced = tree("((,),(,))");
        assert_eq!(balanced.vertex_order(), vec![vec![], vec![0], vec![1]]);

        let left4 = PlanarTree::left_comb(4);
        assert_eq!(left4.vertex_order(), vec![vec![], vec![0], vec![0, 0]]);

        assert_eq!(
            PlanarTree::corolla(2).vertex_order(),
            vec![Vec::<usize>::new()]
        );
    }

    #[test]
    fn marked_set_fibonacci_right_comb() {
        let fib = crate::fusion::FusionRing::rank2(1, 1);
        let set = marked_index_set(&fib, &PlanarTree::right_comb(3), &[1, 1, 1], 1).unwrap();
        assert_eq!(set.len(), 2);
        // markings come in ring order: u = e first, then u = x
        assert_eq!(set.entries[0].labels, vec![0]);
        assert_eq!(set.entries[1].labels, vec![1]);
        assert_eq!(
            set.len() as i64,
            nary_constant(&fib, 1, &[1, 1, 1]).unwrap()
        );
        assert_eq!(set.marking(0).leaves, vec![1, 1, 1]);
    }

    #[test]
    fn marked_set_single_vertex() {
        let ring = crate::fusion::FusionRing::rank2(2, 3);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let set = marked_index_set(&ring, &PlanarTree::corolla(2), &[a, b], c).unwrap();
                    assert_eq!(set.len() as i64, ring.entry(a, b, c));
                }
            }
        }
    }

    #[test]
    fn marked_set_balanced_four_leaves() {
        // {e,x}, x*x = 2x + e: the set size equals the 4-ary constant, 12
        let ring = crate::fusion::FusionRing::rank2(2, 1);
        let set = marked_index_set(&ring, &tree("((,),(,))"), &[1, 1, 1, 1], 1).unwrap();
        let direct: i64 = (0..2)
            .flat_map(|c| (0..2).map(move |b| (c, b)))
            .map(|(c, b)| ring.entry(c, b, 1) * ring.entry(1, 1, c) * ring.entry(1, 1, b))
            .sum();
        assert_eq!(direct, 12);
        assert_eq!(set.len() as i64, direct);
        assert_eq!(
            set.len() as i64,
            nary_constant(&ring, 1, &[1, 1, 1, 1]).unwrap()
        );
    }

    #[test]
    fn marked_set_requires_binary_tree() {
        let ring = crate::fusion::FusionRing::rank2(1, 1);
        assert!(matches!(
            marked_index_set(&ring, &PlanarTree::corolla(3), &[1, 1, 1], 1),
            Err(TreeError::NotBinary)
        ));
    }

    #[test]
    fn marked_set_size_is_tree_independent() {
        let rings = [
            crate::fusion::FusionRing::rank2(1, 1),
            crate::fusion::FusionRing::rank2(2, 2),
            crate::fusion::FusionRing::group_ring(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]])
                .unwrap(),
        ];
        for ring in &rings {
            let r = ring.rank();
            for n in 2..=4usize {
                let trees = enumerate_trees(n, Some(0)).unwrap();
                for combo in 0..r.pow(n as u32 + 1) {
                    let mut c = combo;
                    let output = c % r;
                    c /= r;
                    let inputs: Vec<usize> = (0..n)
                        .map(|_| {
                            let x = c % r;
                            c /= r;
                            x
                        })
                        .collect();
                    let expected = nary_constant(ring, output, &inputs).unwrap();
                    for t in &trees {
                        let set = marked_index_set(ring, t, &inputs, output).unwrap();
                        assert_eq!(set.len() as i64, expected);
                    }
                }
            }
        }
    }
}
