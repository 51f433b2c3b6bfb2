//! The first obstruction cocycle, computed two independent ways.
//!
//! For a ring with a chosen linear order on its basis, every binary tree with
//! prescribed edge labels carries an ordered index set (see
//! [`crate::trees::marked_index_set`]). The five binary trees on four leaves
//! are the corners of the pentagon; each pentagon edge rebrackets one
//! three-leaf subpattern and acts on the corresponding two factors by the
//! unique order-preserving bijection, extended identically elsewhere. The
//! loop around the pentagon is then a permutation of the starting set, and
//! its parity is the cocycle entry.
//!
//! The closed form sums, per pentagon edge, the inversion counts between the
//! canonical order and the order aligned with that edge's map: five
//! label-reindexing terms, one factor-transposition term, and two correction
//! terms for the edges whose rebracketing happens below the root (there the
//! untouched root index interleaves with the summed label). The brute-force
//! permutation route is the authority; the acceptance suite pins exact
//! agreement between the two.

use std::collections::HashMap;

use crate::fusion::{ElementOrder, FusionRing};
use crate::hochschild::{tuples, Cochain};
use crate::trees::{marked_index_set_from_shape, MarkedIndexSet, PlanarTree, TreeShape};

/// A bijection of 0..n, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Option<Permutation> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// self followed by other.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            image: self.image.iter().map(|&v| other.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }

    /// Parity via cycle decomposition: 0 for even, 1 for odd.
    pub fn parity(&self) -> u8 {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut cycles = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image[i];
            }
        }
        ((n - cycles) % 2) as u8
    }
}

/// Parity by literal inversion counting; the oracle the closed sign formulas
/// are checked against.
pub fn sort_sign_oracle(perm: &Permutation) -> u8 {
    let image = perm.image();
    let mut inversions = 0usize;
    for i in 0..image.len() {
        for j in i + 1..image.len() {
            if image[i] > image[j] {
                inversions += 1;
            }
        }
    }
    (inversions % 2) as u8
}

/// n(n-1)/2 mod 2, which only depends on n mod 4.
fn choose2_parity(n: i64) -> u8 {
    debug_assert!(n >= 0);
    let r = n % 4;
    ((r * (r - 1) / 2) % 2) as u8
}

/// Parity of the order-preserving re-sort from X x Y lex order to Y x X lex
/// order: C(|X|,2) C(|Y|,2) mod 2.
pub fn lex_swap_sign(size_x: i64, size_y: i64) -> u8 {
    assert!(size_x >= 0 && size_y >= 0);
    choose2_parity(size_x) & choose2_parity(size_y)
}

/// Parity of re-sorting a doubly indexed disjoint union from (a,b)-major to
/// (b,a)-major order: sum over a1 > a2, b1 < b2 of |X(a1,b1)| |X(a2,b2)|, mod 2.
/// `sizes[a][b]` is the block size |X(a,b)|.
pub fn block_reindex_sign(sizes: &[Vec<i64>]) -> u8 {
    let rows = sizes.len();
    let mut parity = 0u8;
    for a1 in 0..rows {
        for a2 in 0..a1 {
            for (b1, &s1) in sizes[a1].iter().enumerate() {
                for &s2 in sizes[a2].iter().skip(b1 + 1) {
                    debug_assert!(s1 >= 0 && s2 >= 0);
                    parity ^= (s1 & 1 & s2) as u8;
                }
            }
        }
    }
    parity
}

/// The five pentagon corners, keyed by their bracketings of x1 x2 x3 x4.
/// Labels below follow the summation variables of the corner sets:
/// a, b for x1(x2(x3 x4)); c, b for (x1 x2)(x3 x4); a, e for x1((x2 x3)x4);
/// d, e for (x1(x2 x3))x4; d, c for ((x1 x2)x3)x4.
fn pentagon_trees() -> [PlanarTree; 5] {
    [
        PlanarTree::right_comb(4),
        "((,),(,))".parse().unwrap(),
        "(,((,),))".parse().unwrap(),
        "((,(,)),)".parse().unwrap(),
        PlanarTree::left_comb(4),
    ]
}

/// The closed-form parity S^x_{x1,x2,x3,x4}, basis compared in index order.
pub fn pentagon_sign_closed(ring: &FusionRing, x: usize, inputs: [usize; 4]) -> u8 {
    pentagon_sign_closed_with_order(ring, &ElementOrder::index_order(ring.rank()), x, inputs)
}

pub fn pentagon_sign_closed_with_order(
    ring: &FusionRing,
    order: &ElementOrder,
    x: usize,
    inputs: [usize; 4],
) -> u8 {
    five_block_terms(ring, order, x, inputs)
        ^ transposition_term(ring, x, inputs)
        ^ comb_correction_terms(ring, x, inputs)
}

/// The five label-reindexing terms, one per corner set, each summing over
/// pairs with the first label descending and the second ascending.
fn five_block_terms(ring: &FusionRing, order: &ElementOrder, x: usize, inputs: [usize; 4]) -> u8 {
    assert_eq!(order.rank(), ring.rank());
    let [x1, x2, x3, x4] = inputs;
    let rank = ring.rank();
    let e = |i: usize, j: usize, k: usize| (ring.entry(i, j, k) & 1) as u8;
    // factor parities of the five corner sets, as functions of their two labels
    let corners: [&dyn Fn(usize, usize) -> u8; 5] = [
        &|a, b| e(x1, a, x) & e(x2, b, a) & e(x3, x4, b),
        &|c, b| e(c, b, x) & e(x1, x2, c) & e(x3, x4, b),
        &|a, ee| e(x1, a, x) & e(ee, x4, a) & e(x2, x3, ee),
        &|d, ee| e(d, x4, x) & e(x1, ee, d) & e(x2, x3, ee),
        &|d, c| e(d, x4, x) & e(c, x3, d) & e(x1, x2, c),
    ];
    let mut parity = 0u8;
    for f in corners {
        for a in 0..rank {
            for a2 in 0..rank {
                if !order.greater(a, a2) {
                    continue;
                }
                for b in 0..rank {
                    for b2 in 0..rank {
                        if order.less(b, b2) {
                            parity ^= f(a, b) & f(a2, b2);
                        }
                    }
                }
            }
        }
    }
    parity
}

/// sum_{c,b} m^x_{c,b} C(m^c_{x1,x2},2) C(m^b_{x3,x4},2) mod 2: the factor
/// transposition on the middle corner. Order-independent.
fn transposition_term(ring: &FusionRing, x: usize, inputs: [usize; 4]) -> u8 {
    let [x1, x2, x3, x4] = inputs;
    let mut parity = 0u8;
    for c in 0..ring.rank() {
        for b in 0..ring.rank() {
            parity ^= (ring.entry(c, b, x) & 1) as u8
                & choose2_parity(ring.entry(x1, x2, c))
                & choose2_parity(ring.entry(x3, x4, b));
        }
    }
    parity
}

/// Correction terms for the two pentagon edges that rebracket below the root:
/// there the untouched root index is re-sorted across the whole summed block,
/// contributing C(root size, 2) C(block size, 2) on both the source and the
/// target corner. Order-independent.
fn comb_correction_terms(ring: &FusionRing, x: usize, inputs: [usize; 4]) -> u8 {
    let [x1, x2, x3, x4] = inputs;
    let rank = ring.rank();
    let block = |m1: i64, m2: i64| choose2_parity((m1 % 4) * (m2 % 4));
    let mut parity = 0u8;
    for a in 0..rank {
        let root = choose2_parity(ring.entry(x1, a, x));
        if root == 0 {
            continue;
        }
        for b in 0..rank {
            parity ^= root & block(ring.entry(x2, b, a), ring.entry(x3, x4, b));
        }
        for ee in 0..rank {
            parity ^= root & block(ring.entry(ee, x4, a), ring.entry(x2, x3, ee));
        }
    }
    for d in 0..rank {
        let root = choose2_parity(ring.entry(d, x4, x));
        if root == 0 {
            continue;
        }
        for ee in 0..rank {
            parity ^= root & block(ring.entry(x1, ee, d), ring.entry(x2, x3, ee));
        }
        for c in 0..rank {
            parity ^= root & block(ring.entry(c, x3, d), ring.entry(x1, x2, c));
        }
    }
    parity
}

type PhiTable = HashMap<(usize, i64, i64), (usize, i64, i64)>;
type EntryKey = (usize, usize, i64, i64, i64);

/// Builds pentagon-loop permutations from first principles. Memoizes the
/// elementary order-preserving bijections, so reuse one oracle per ring run.
pub struct PentagonOracle<'r> {
    ring: &'r FusionRing,
    order: ElementOrder,
    corner_shapes: [TreeShape; 5],
    source_shape: TreeShape, // three-leaf right comb: u(zw) side
    target_shape: TreeShape, // three-leaf left comb: (yz)w side
    phi: HashMap<(usize, usize, usize, usize), PhiTable>,
}

impl<'r> PentagonOracle<'r> {
    pub fn new(ring: &'r FusionRing) -> Self {
        Self::with_order(ring, ElementOrder::index_order(ring.rank()))
    }

    pub fn with_order(ring: &'r FusionRing, order: ElementOrder) -> Self {
        assert_eq!(order.rank(), ring.rank());
        let corner_shapes = pentagon_trees().map(|t| TreeShape::of(&t).unwrap());
        PentagonOracle {
            ring,
            order,
            corner_shapes,
            source_shape: TreeShape::of(&PlanarTree::right_comb(3)).unwrap(),
            target_shape: TreeShape::of(&PlanarTree::left_comb(3)).unwrap(),
            phi: HashMap::new(),
        }
    }

    /// The unique order-preserving bijection between the two three-leaf sets
    /// with inputs (y,z,w) and output o, as a lookup on (u, i, j) -> (v, s, t).
    fn phi_apply(
        &mut self,
        o: usize,
        y: usize,
        z: usize,
        w: usize,
        key: (usize, i64, i64),
    ) -> (usize, i64, i64) {
        let table = self.phi.entry((o, y, z, w)).or_insert_with(|| {
            let src = marked_index_set_from_shape(
                self.ring,
                &self.order,
                &self.source_shape,
                &[y, z, w],
                o,
            )
            .unwrap();
            let tgt = marked_index_set_from_shape(
                self.ring,
                &self.order,
                &self.target_shape,
                &[y, z, w],
                o,
            )
            .unwrap();
            debug_assert_eq!(src.len(), tgt.len());
            src.entries
                .iter()
                .zip(&tgt.entries)
                .map(|(s, t)| {
                    (
                        (s.labels[0], s.indices[0], s.indices[1]),
                        (t.labels[0], t.indices[0], t.indices[1]),
                    )
                })
                .collect()
        });
        table[&key]
    }

    fn corner_sets(&self, x: usize, inputs: [usize; 4]) -> [MarkedIndexSet; 5] {
        self.corner_shapes.each_ref().map(|shape| {
            marked_index_set_from_shape(self.ring, &self.order, shape, &inputs, x).unwrap()
        })
    }

    /// The pentagon loop at (x; x1..x4): three-edge side composed with the
    /// inverted two-edge side, as a permutation of the first corner set.
    pub fn loop_permutation(&mut self, x: usize, inputs: [usize; 4]) -> Permutation {
        let [x1, x2, x3, x4] = inputs;
        let [set_a, set_b, set_c, set_d, set_e] = self.corner_sets(x, inputs);
        let n = set_a.len();
        debug_assert!([&set_b, &set_c, &set_d, &set_e]
            .iter()
            .all(|s| s.len() == n));

        let key = |labels: &[usize], indices: &[i64]| {
            (labels[0], labels[1], indices[0], indices[1], indices[2])
        };
        let position: Vec<HashMap<EntryKey, usize>> = [&set_b, &set_c, &set_d, &set_e]
            .map(|set| {
                set.entries
                    .iter()
                    .enumerate()
                    .map(|(p, en)| (key(&en.labels, &en.indices), p))
                    .collect()
            })
            .into();
        let (pos_b, pos_c, pos_d, pos_e) = (&position[0], &position[1], &position[2], &position[3]);

        let mut ab = vec![0usize; n];
        let mut ac = vec![0usize; n];
        for (p, en) in set_a.entries.iter().enumerate() {
            let (a, b) = (en.labels[0], en.labels[1]);
            let (i_r, i_1, i_2) = (en.indices[0], en.indices[1], en.indices[2]);
            // rebracket x1(x2 -) at the root: a is summed away, c created
            let (c, s, t) = self.phi_apply(x, x1, x2, b, (a, i_r, i_1));
            ab[p] = pos_b[&(c, b, s, t, i_2)];
            // rebracket x2(x3 x4) below the root: b summed away, e created
            let (ee, s, t) = self.phi_apply(a, x2, x3, x4, (b, i_1, i_2));
            ac[p] = pos_c[&(a, ee, i_r, s, t)];
        }
        let mut be = vec![0usize; n];
        for (p, en) in set_b.entries.iter().enumerate() {
            let (c, b) = (en.labels[0], en.labels[1]);
            let (j_r, j_1, j_2) = (en.indices[0], en.indices[1], en.indices[2]);
            let (d, s, t) = self.phi_apply(x, c, x3, x4, (b, j_r, j_2));
            be[p] = pos_e[&(d, c, s, t, j_1)];
        }
        let mut cd = vec![0usize; n];
        for (p, en) in set_c.entries.iter().enumerate() {
            let (a, ee) = (en.labels[0], en.labels[1]);
            let (l_r, l_1, l_2) = (en.indices[0], en.indices[1], en.indices[2]);
            let (d, s, t) = self.phi_apply(x, x1, ee, x4, (a, l_r, l_1));
            cd[p] = pos_d[&(d, ee, s, t, l_2)];
        }
        let mut de = vec![0usize; n];
        for (p, en) in set_d.entries.iter().enumerate() {
            let (d, ee) = (en.labels[0], en.labels[1]);
            let (m_r, m_1, m_2) = (en.indices[0], en.indices[1], en.indices[2]);
            let (c, s, t) = self.phi_apply(d, x1, x2, x3, (ee, m_1, m_2));
            de[p] = pos_e[&(d, c, m_r, s, t)];
        }

        let ab = Permutation::new(ab).expect("edge maps are bijections");
        let be = Permutation::new(be).expect("edge maps are bijections");
        let ac = Permutation::new(ac).expect("edge maps are bijections");
        let cd = Permutation::new(cd).expect("edge maps are bijections");
        let de = Permutation::new(de).expect("edge maps are bijections");

        let two_edge = ab.then(&be);
        let three_edge = ac.then(&cd).then(&de);
        three_edge.then(&two_edge.inverse())
    }

    pub fn sign(&mut self, x: usize, inputs: [usize; 4]) -> u8 {
        self.loop_permutation(x, inputs).parity()
    }
}

/// The pentagon-loop parity at one entry, built from the ordered sets.
pub fn pentagon_sign_bruteforce(ring: &FusionRing, x: usize, inputs: [usize; 4]) -> u8 {
    PentagonOracle::new(ring).sign(x, inputs)
}

pub fn pentagon_sign_bruteforce_with_order(
    ring: &FusionRing,
    order: &ElementOrder,
    x: usize,
    inputs: [usize; 4],
) -> u8 {
    PentagonOracle::with_order(ring, order.clone()).sign(x, inputs)
}

/// The degree-4 cochain whose component at x is the pentagon parity, stored
/// additively in Z/2 (bit 1 means sign -1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionCocycle {
    pub alpha: Cochain,
}

pub fn first_obstruction(ring: &FusionRing) -> ObstructionCocycle {
    first_obstruction_with_order(ring, &ElementOrder::index_order(ring.rank()))
}

pub fn first_obstruction_with_order(ring: &FusionRing, order: &ElementOrder) -> ObstructionCocycle {
    let rank = ring.rank();
    let mut alpha = Cochain::zero(rank, 4);
    for tuple in tuples(rank, 4) {
        let inputs = [tuple[0], tuple[1], tuple[2], tuple[3]];
        for x in 0..rank {
            if pentagon_sign_closed_with_order(ring, order, x, inputs) == 1 {
                alpha.set(&tuple, x, true);
            }
        }
    }
    ObstructionCocycle { alpha }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleMismatch {
    pub inputs: [usize; 4],
    pub output: usize,
    pub closed: u8,
    pub oracle: u8,
}

/// Recomputes every entry with the permutation oracle and reports any
/// disagreement with the supplied cocycle. Empty output is the expected state.
pub fn verify_against_oracle(
    ring: &FusionRing,
    cocycle: &ObstructionCocycle,
) -> Vec<OracleMismatch> {
    verify_against_oracle_with_order(ring, &ElementOrder::index_order(ring.rank()), cocycle)
}

pub fn verify_against_oracle_with_order(
    ring: &FusionRing,
    order: &ElementOrder,
    cocycle: &ObstructionCocycle,
) -> Vec<OracleMismatch> {
    let mut oracle = PentagonOracle::with_order(ring, order.clone());
    let mut mismatches = Vec::new();
    for tuple in tuples(ring.rank(), 4) {
        let inputs = [tuple[0], tuple[1], tuple[2], tuple[3]];
        for x in 0..ring.rank() {
            let closed = u8::from(cocycle.alpha.get(&tuple, x));
            let brute = oracle.sign(x, inputs);
            if closed != brute {
                mismatches.push(OracleMismatch {
                    inputs,
                    output: x,
                    closed,
                    oracle: brute,
                });
            }
        }
    }
    mismatches
}
