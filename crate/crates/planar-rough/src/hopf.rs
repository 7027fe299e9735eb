//! The truncated Munthe-Kaas-Wright Hopf algebra on decorated planar forests.
//!
//! The product is the shuffle of forests viewed as words of trees. The
//! coproduct is generated by admissible cuts: at every trunk vertex the cut
//! edges form a suffix of its child list (cutting an edge forces every edge
//! to a later sibling to be cut as well), and no root-to-leaf path is cut
//! twice. A cut contributes `pruned ⊗ trunk`, where blocks pruned from the
//! same vertex keep their planar order and blocks pruned from distinct
//! vertices are shuffled together. Forests are handled uniformly through an
//! auxiliary sentinel root, which also produces the two extreme terms
//! `∅ ⊗ f` and `f ⊗ ∅`.
//!
//! The dual (star) product composes increment functionals by pairing against
//! the coproduct, with the pruned leg paired to the first factor. This is the
//! orientation under which the two-vertex Chen identity
//! `X^{a[b]}_{s,t} = X^{a[b]}_{s,u} + X^{b}_{s,u} X^{a}_{u,t} + X^{a[b]}_{u,t}`
//! and the N = 3 remainder formulas hold verbatim.

use crate::error::{Error, Result};
use crate::forest::{ForestBasis, PlanarForest, PlanarTree};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Sparse real linear combination of basis forests.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfElement {
    basis: Arc<ForestBasis>,
    terms: BTreeMap<PlanarForest, f64>,
}

impl HopfElement {
    pub fn zero(basis: Arc<ForestBasis>) -> Self {
        HopfElement { basis, terms: BTreeMap::new() }
    }

    pub fn from_forest(basis: Arc<ForestBasis>, f: PlanarForest) -> Result<Self> {
        if f.degree() > basis.max_degree() {
            return Err(Error::DegreeOverflow { degree: f.degree(), max: basis.max_degree() });
        }
        let mut terms = BTreeMap::new();
        terms.insert(f, 1.0);
        Ok(HopfElement { basis, terms })
    }

    pub fn basis(&self) -> &Arc<ForestBasis> {
        &self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlanarForest, f64)> {
        self.terms.iter().map(|(f, &c)| (f, c))
    }

    pub fn coefficient(&self, f: &PlanarForest) -> f64 {
        self.terms.get(f).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, f: PlanarForest, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(f) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (forest, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} {forest}")?;
        }
        Ok(())
    }
}

/// Sparse element of the tensor square, keyed by forest pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(PlanarForest, PlanarForest), f64>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn add_term(&mut self, left: PlanarForest, right: PlanarForest, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry((left, right)) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PlanarForest, PlanarForest), f64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn coefficient(&self, left: &PlanarForest, right: &PlanarForest) -> f64 {
        self.terms.get(&(left.clone(), right.clone())).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Grouped view: one entry per distinct right leg (one per cut class).
    pub fn group_by_right(&self) -> BTreeMap<PlanarForest, Vec<(PlanarForest, f64)>> {
        let mut out: BTreeMap<PlanarForest, Vec<(PlanarForest, f64)>> = BTreeMap::new();
        for ((l, r), &c) in &self.terms {
            out.entry(r.clone()).or_default().push((l.clone(), c));
        }
        out
    }
}

/// Dense functional on a basis (one real per basis forest).
#[derive(Debug, Clone, PartialEq)]
pub struct DualElement {
    basis: Arc<ForestBasis>,
    values: Vec<f64>,
}

impl DualElement {
    pub fn zero(basis: Arc<ForestBasis>) -> Self {
        let n = basis.len();
        DualElement { basis, values: vec![0.0; n] }
    }

    /// The counit functional `∅*` (unit of the star product).
    pub fn counit(basis: Arc<ForestBasis>) -> Self {
        let mut e = Self::zero(basis);
        e.values[0] = 1.0;
        e
    }

    pub fn from_values(basis: Arc<ForestBasis>, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: values.len() });
        }
        Ok(DualElement { basis, values })
    }

    pub fn basis(&self) -> &Arc<ForestBasis> {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn set(&mut self, idx: usize, v: f64) {
        self.values[idx] = v;
    }
}

/// Kronecker pairing: the stored coefficient of `f`.
pub fn pairing(u: &DualElement, f: &PlanarForest) -> Result<f64> {
    match u.basis.index_of(f) {
        Some(i) => Ok(u.values[i]),
        None => Err(Error::BasisMismatch),
    }
}

fn same_basis(a: &Arc<ForestBasis>, b: &Arc<ForestBasis>) -> bool {
    Arc::ptr_eq(a, b) || (a.alphabet() == b.alphabet() && a.max_degree() == b.max_degree())
}

// ---------------------------------------------------------------------------
// shuffle product
// ---------------------------------------------------------------------------

/// All interleavings of two words of trees, with multiplicities.
pub(crate) fn shuffle_forests(u: &PlanarForest, v: &PlanarForest) -> HashMap<PlanarForest, f64> {
    let mut out = HashMap::new();
    let mut acc: Vec<PlanarTree> = Vec::with_capacity(u.trees().len() + v.trees().len());
    fn rec(
        a: &[PlanarTree],
        b: &[PlanarTree],
        acc: &mut Vec<PlanarTree>,
        out: &mut HashMap<PlanarForest, f64>,
    ) {
        if a.is_empty() && b.is_empty() {
            *out.entry(PlanarForest::new(acc.clone())).or_insert(0.0) += 1.0;
            return;
        }
        if let Some((h, rest)) = a.split_first() {
            acc.push(h.clone());
            rec(rest, b, acc, out);
            acc.pop();
        }
        if let Some((h, rest)) = b.split_first() {
            acc.push(h.clone());
            rec(a, rest, acc, out);
            acc.pop();
        }
    }
    rec(u.trees(), v.trees(), &mut acc, &mut out);
    out
}

/// Bilinear shuffle of two elements, dropping terms above `truncate_at`
/// (capped at the basis degree).
pub fn shuffle(u: &HopfElement, v: &HopfElement, truncate_at: usize) -> Result<HopfElement> {
    if !same_basis(&u.basis, &v.basis) {
        return Err(Error::BasisMismatch);
    }
    let cap = truncate_at.min(u.basis.max_degree());
    let mut out = HopfElement::zero(u.basis.clone());
    for (fu, cu) in u.terms() {
        for (fv, cv) in v.terms() {
            if fu.degree() + fv.degree() > cap {
                continue;
            }
            for (w, m) in shuffle_forests(fu, fv) {
                out.add_term(w, cu * cv * m);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// coproduct by admissible cuts
// ---------------------------------------------------------------------------

/// Cut terms of a tree: pruned blocks (one forest per vertex that loses
/// children) plus the trunk containing the root.
fn tree_cut_terms(t: &PlanarTree) -> Vec<(Vec<PlanarForest>, PlanarTree)> {
    let children = t.children();
    let k = children.len();
    let mut out = Vec::new();
    for cut in 0..=k {
        let kept = &children[..k - cut];
        let pruned: Vec<PlanarTree> = children[k - cut..].to_vec();
        let mut combos: Vec<(Vec<PlanarForest>, Vec<PlanarTree>)> = vec![(Vec::new(), Vec::new())];
        for child in kept {
            let child_terms = tree_cut_terms(child);
            let mut next = Vec::with_capacity(combos.len() * child_terms.len());
            for (blocks, trunk_children) in &combos {
                for (cb, ct) in &child_terms {
                    let mut blocks = blocks.clone();
                    blocks.extend(cb.iter().cloned());
                    let mut tc = trunk_children.clone();
                    tc.push(ct.clone());
                    next.push((blocks, tc));
                }
            }
            combos = next;
        }
        for (mut blocks, trunk_children) in combos {
            if cut > 0 {
                blocks.push(PlanarForest::new(pruned.clone()));
            }
            let trunk = match t.decoration() {
                crate::forest::Decoration::Letter(c) => PlanarTree::node(c, trunk_children),
                crate::forest::Decoration::Root => PlanarTree::sentinel(trunk_children),
            };
            out.push((blocks, trunk));
        }
    }
    out
}

/// Shuffles a list of pruned blocks together.
fn shuffle_blocks(blocks: &[PlanarForest]) -> HashMap<PlanarForest, f64> {
    let mut acc = HashMap::new();
    acc.insert(PlanarForest::empty(), 1.0);
    for b in blocks {
        let mut next = HashMap::new();
        for (w, m) in &acc {
            for (w2, m2) in shuffle_forests(w, b) {
                *next.entry(w2).or_insert(0.0) += m * m2;
            }
        }
        acc = next;
    }
    acc
}

/// Structural coproduct of a forest (no truncation; the coproduct is
/// degree-preserving).
pub(crate) fn coproduct_raw(f: &PlanarForest) -> TensorElement {
    let sentinel = f.graft_sentinel();
    let mut out = TensorElement::zero();
    for (blocks, trunk) in tree_cut_terms(&sentinel) {
        let right = trunk.ungraft();
        for (left, m) in shuffle_blocks(&blocks) {
            out.add_term(left, right.clone(), m);
        }
    }
    out
}

/// Coproduct within a truncated algebra; rejects forests above the cap.
pub fn coproduct_mkw(f: &PlanarForest, max_degree: usize) -> Result<TensorElement> {
    if f.degree() > max_degree {
        return Err(Error::DegreeOverflow { degree: f.degree(), max: max_degree });
    }
    Ok(coproduct_raw(f))
}

/// Coproduct minus the two extreme terms `∅ ⊗ f` and `f ⊗ ∅`; houses the
/// structure constants of the remainder formulas.
pub fn reduced_coproduct(f: &PlanarForest, max_degree: usize) -> Result<TensorElement> {
    if f.is_empty() {
        return Err(Error::EmptyForest);
    }
    let mut t = coproduct_mkw(f, max_degree)?;
    t.add_term(PlanarForest::empty(), f.clone(), -1.0);
    t.add_term(f.clone(), PlanarForest::empty(), -1.0);
    Ok(t)
}

/// Star product on functionals: `⟨u ⋆ v, ω⟩ = Σ coeff · u(pruned) · v(trunk)`
/// over the coproduct terms of each basis forest ω.
pub fn star(u: &DualElement, v: &DualElement) -> Result<DualElement> {
    if !same_basis(&u.basis, &v.basis) {
        return Err(Error::BasisMismatch);
    }
    let tables = BasisTables::get(&u.basis);
    Ok(tables.star_values_to_dual(&tables.star_values(u.values(), v.values())))
}

// ---------------------------------------------------------------------------
// indexed tables for the numeric layers
// ---------------------------------------------------------------------------

/// One step of the canonical lift recursion for a forest `t1 ω` with first
/// tree `t1 = [κ]_a`: the time derivative of its increment is the value of
/// `κ ⧢ ω` times the derivative of the driver component `a`.
#[derive(Debug, Clone)]
pub struct LiftRule {
    pub letter_idx: usize,
    pub integrand: Vec<(usize, f64)>,
}

/// Precomputed index-level tables over a basis: coproduct triples for star
/// composition, lift recursion rules, and the word-algebra support needed to
/// keep per-cell increments exactly multiplicative.
#[derive(Debug)]
pub struct BasisTables {
    basis: Arc<ForestBasis>,
    /// per forest: (pruned idx, trunk idx, coeff)
    coproduct: Vec<Vec<(u32, u32, f64)>>,
    /// reduced-coproduct triples with both legs nonempty
    reduced: Vec<Vec<(u32, u32, f64)>>,
    lift: Vec<Option<LiftRule>>,
    /// proper two-block splittings w = u·v (concatenation), per forest
    splits2: Vec<Vec<(u32, u32)>>,
    /// proper three-block splittings, per forest
    splits3: Vec<Vec<(u32, u32, u32)>>,
    /// first-Eulerian-idempotent redistribution, per forest: (target, coeff)
    eulerian: Vec<Vec<(u32, f64)>>,
}

impl BasisTables {
    /// Builds (or fetches) the tables for a basis. Cached per basis pointer.
    pub fn get(basis: &Arc<ForestBasis>) -> Arc<BasisTables> {
        use std::sync::{Mutex, OnceLock};
        static CACHE: OnceLock<Mutex<Vec<(usize, Arc<BasisTables>)>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
        let key = Arc::as_ptr(basis) as usize;
        let mut guard = cache.lock().unwrap();
        if let Some((_, t)) = guard.iter().find(|(k, _)| *k == key) {
            return t.clone();
        }
        let t = Arc::new(Self::build(basis.clone()));
        guard.push((key, t.clone()));
        if guard.len() > 16 {
            guard.remove(0);
        }
        t
    }

    pub fn build(basis: Arc<ForestBasis>) -> BasisTables {
        let n = basis.len();
        let idx =
            |f: &PlanarForest| -> u32 { basis.index_of(f).expect("leg inside basis") as u32 };
        let mut coproduct = Vec::with_capacity(n);
        let mut reduced = Vec::with_capacity(n);
        let mut lift = Vec::with_capacity(n);
        let mut splits2 = Vec::with_capacity(n);
        let mut splits3 = Vec::with_capacity(n);
        let mut eulerian = Vec::with_capacity(n);
        for i in 0..n {
            let f = basis.forest(i).clone();
            let cop = coproduct_raw(&f);
            let triples: Vec<(u32, u32, f64)> =
                cop.terms().map(|((l, r), c)| (idx(l), idx(r), c)).collect();
            let red: Vec<(u32, u32, f64)> = triples
                .iter()
                .copied()
                .filter(|&(l, r, _)| {
                    basis.degree(l as usize) >= 1 && basis.degree(r as usize) >= 1
                })
                .collect();
            coproduct.push(triples);
            reduced.push(red);

            lift.push(if f.is_empty() {
                None
            } else {
                let trees = f.trees();
                let first = &trees[0];
                let rest = PlanarForest::new(trees[1..].to_vec());
                let kappa = first.ungraft();
                let letter_idx = basis
                    .alphabet()
                    .index_of(first.letter())
                    .expect("basis letters lie in the alphabet");
                let integrand = shuffle_forests(&kappa, &rest)
                    .into_iter()
                    .map(|(w, m)| (idx(&w) as usize, m))
                    .collect();
                Some(LiftRule { letter_idx, integrand })
            });

            let trees = f.trees().to_vec();
            let k = trees.len();
            let mut s2 = Vec::new();
            for cut in 1..k {
                let u = PlanarForest::new(trees[..cut].to_vec());
                let v = PlanarForest::new(trees[cut..].to_vec());
                s2.push((idx(&u), idx(&v)));
            }
            splits2.push(s2);
            let mut s3 = Vec::new();
            for c1 in 1..k {
                for c2 in c1 + 1..k {
                    let u = PlanarForest::new(trees[..c1].to_vec());
                    let v = PlanarForest::new(trees[c1..c2].to_vec());
                    let w = PlanarForest::new(trees[c2..].to_vec());
                    s3.push((idx(&u), idx(&v), idx(&w)));
                }
            }
            splits3.push(s3);

            eulerian.push(Self::eulerian_row(&basis, &trees, i));
        }
        BasisTables { basis, coproduct, reduced, lift, splits2, splits3, eulerian }
    }

    /// Redistribution row of the first Eulerian idempotent
    /// `e = Σ_k (-1)^{k+1}/k J^{*k}` on a word of at most three trees, where
    /// `J^{*k}` concatenates the blocks of ordered set partitions obtained
    /// from the unshuffle coproduct.
    fn eulerian_row(
        basis: &ForestBasis,
        trees: &[PlanarTree],
        self_idx: usize,
    ) -> Vec<(u32, f64)> {
        let k = trees.len();
        let mut acc: HashMap<usize, f64> = HashMap::new();
        let word_idx = |order: &[usize]| -> usize {
            let w = PlanarForest::new(order.iter().map(|&i| trees[i].clone()).collect());
            basis.index_of(&w).expect("permutation stays in basis")
        };
        match k {
            0 => {}
            1 => {
                acc.insert(self_idx, 1.0);
            }
            2 => {
                *acc.entry(self_idx).or_insert(0.0) += 1.0;
                for order in [[0usize, 1], [1, 0]] {
                    *acc.entry(word_idx(&order)).or_insert(0.0) -= 0.5;
                }
            }
            3 => {
                *acc.entry(self_idx).or_insert(0.0) += 1.0;
                // ordered subset pairs (S, S^c), S proper nonempty, each
                // block keeping word order
                let subsets: [(&[usize], &[usize]); 6] = [
                    (&[0], &[1, 2]),
                    (&[1], &[0, 2]),
                    (&[2], &[0, 1]),
                    (&[0, 1], &[2]),
                    (&[0, 2], &[1]),
                    (&[1, 2], &[0]),
                ];
                for (s, c) in subsets {
                    let order: Vec<usize> = s.iter().chain(c.iter()).copied().collect();
                    *acc.entry(word_idx(&order)).or_insert(0.0) -= 0.5;
                }
                for p in [
                    [0usize, 1, 2],
                    [0, 2, 1],
                    [1, 0, 2],
                    [1, 2, 0],
                    [2, 0, 1],
                    [2, 1, 0],
                ] {
                    *acc.entry(word_idx(&p)).or_insert(0.0) += 1.0 / 3.0;
                }
            }
            _ => panic!("character tables require forests of at most three trees"),
        }
        acc.into_iter().map(|(i, c)| (i as u32, c)).filter(|&(_, c)| c != 0.0).collect()
    }

    pub fn basis(&self) -> &Arc<ForestBasis> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coproduct_triples(&self, idx: usize) -> &[(u32, u32, f64)] {
        &self.coproduct[idx]
    }

    pub fn reduced_triples(&self, idx: usize) -> &[(u32, u32, f64)] {
        &self.reduced[idx]
    }

    pub fn lift_rule(&self, idx: usize) -> Option<&LiftRule> {
        self.lift[idx].as_ref()
    }

    /// Star product on raw value vectors (index 0 is the empty forest).
    pub fn star_values(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.basis.len()];
        for (w, triples) in self.coproduct.iter().enumerate() {
            let mut s = 0.0;
            for &(l, r, c) in triples {
                s += c * u[l as usize] * v[r as usize];
            }
            out[w] = s;
        }
        out
    }

    pub fn star_values_to_dual(&self, values: &[f64]) -> DualElement {
        DualElement { basis: self.basis.clone(), values: values.to_vec() }
    }

    /// Projects raw per-cell values onto an exactly multiplicative character:
    /// extract the primitive part with the Eulerian idempotent, then
    /// re-exponentiate in the concatenation algebra. Values on single-tree
    /// forests are preserved bit-exactly; multi-tree words are nudged onto
    /// the character variety.
    pub fn character_completion(&self, values: &[f64]) -> Vec<f64> {
        let n = self.basis.len();
        let mut prim = vec![0.0; n];
        for w in 1..n {
            let h = values[w];
            if h == 0.0 {
                continue;
            }
            for &(tgt, c) in &self.eulerian[w] {
                prim[tgt as usize] += c * h;
            }
        }
        self.exp_concat(&prim)
    }

    /// `exp` of a primitive in the concatenation algebra, truncated at the
    /// basis degree cap: ε + ℓ + ℓ²/2 + ℓ³/6.
    pub fn exp_concat(&self, prim: &[f64]) -> Vec<f64> {
        let n = self.basis.len();
        let mut out = vec![0.0; n];
        out[0] = 1.0;
        for w in 1..n {
            let mut v = prim[w];
            for &(a, b) in &self.splits2[w] {
                v += prim[a as usize] * prim[b as usize] / 2.0;
            }
            for &(a, b, c) in &self.splits3[w] {
                v += prim[a as usize] * prim[b as usize] * prim[c as usize] / 6.0;
            }
            out[w] = v;
        }
        out
    }

    /// Primitive (log) coordinates of a character, inverse to `exp_concat`
    /// on group-like inputs.
    pub fn log_concat(&self, values: &[f64]) -> Vec<f64> {
        let n = self.basis.len();
        let mut prim = vec![0.0; n];
        for w in 1..n {
            let h = values[w];
            if h == 0.0 {
                continue;
            }
            for &(tgt, c) in &self.eulerian[w] {
                prim[tgt as usize] += c * h;
            }
        }
        prim
    }

    /// Max over sampled shuffle pairs of `⟨x, σ⧢τ⟩ - ⟨x,σ⟩⟨x,τ⟩`.
    pub fn character_defect(&self, values: &[f64], pairs: &[(usize, usize)]) -> f64 {
        let mut worst: f64 = 0.0;
        for &(i, j) in pairs {
            let fi = self.basis.forest(i);
            let fj = self.basis.forest(j);
            if fi.degree() + fj.degree() > self.basis.max_degree() {
                continue;
            }
            let mut lhs = 0.0;
            for (w, m) in shuffle_forests(fi, fj) {
                let wi = self.basis.index_of(&w).expect("shuffle stays in basis");
                lhs += m * values[wi];
            }
            worst = worst.max((lhs - values[i] * values[j]).abs());
        }
        worst
    }
}
