//! Weyl groups, extended groups `W ⋊ 𝕽`, 2-cocycles, coset representatives,
//! point stabilizers and the chamber/obtuse cones.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

use crate::error::{bail, Result};
use crate::linalg::{self, rat, IntMatrix};
use crate::root_data::RootDatum;
use crate::spectra::FiniteTorusPoint;

/// Refuse to enumerate groups larger than this.
pub const MAX_GROUP_ORDER: usize = 100_000;

/// The finite Weyl group of a root datum, fully enumerated. Elements are
/// identified by their index; index 0 is the identity and indices are sorted
/// by length.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    datum: Arc<RootDatum>,
    elements: Vec<IntMatrix>,
    words: Vec<Vec<usize>>,
    index: HashMap<IntMatrix, usize>,
    // left_simple[k][i] = index of s_k w_i
    left_simple: Vec<Vec<usize>>,
}

impl WeylGroup {
    pub fn enumerate(datum: Arc<RootDatum>) -> Result<Self> {
        let rank = datum.rank();
        let gens: Vec<IntMatrix> = (0..datum.num_simple()).map(|k| datum.simple_reflection(k)).collect();
        let id = IntMatrix::identity(rank);
        let mut elements = vec![id.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(id, 0)]);
        let mut left_simple: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
        let mut queue = VecDeque::from([0usize]);
        // breadth-first search in the Cayley graph: the distance is the length
        while let Some(i) = queue.pop_front() {
            for (k, s) in gens.iter().enumerate() {
                let m = s.mul(&elements[i]);
                let j = match index.get(&m) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= MAX_GROUP_ORDER {
                            bail!(Construction, "Weyl group exceeds {MAX_GROUP_ORDER} elements");
                        }
                        let mut w = vec![k];
                        w.extend_from_slice(&words[i]);
                        let j = elements.len();
                        index.insert(m.clone(), j);
                        queue.push_back(j);
                        elements.push(m);
                        words.push(w);
                        j
                    }
                };
                if left_simple[k].len() <= i {
                    left_simple[k].resize(i + 1, usize::MAX);
                }
                left_simple[k][i] = j;
            }
        }
        Ok(WeylGroup { datum, elements, words, index, left_simple })
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix(&self, i: usize) -> &IntMatrix {
        &self.elements[i]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// A reduced word (simple indices, leftmost first) for element `i`.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn length(&self, i: usize) -> usize {
        self.words[i].len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index[&self.elements[i].mul(&self.elements[j])]
    }

    pub fn inverse(&self, i: usize) -> usize {
        let w: Vec<usize> = self.words[i].iter().rev().copied().collect();
        self.from_word(&w)
    }

    /// Index of `s_k w_i`.
    pub fn left_mul_simple(&self, k: usize, i: usize) -> usize {
        self.left_simple[k][i]
    }

    pub fn simple(&self, k: usize) -> usize {
        self.index[&self.datum.simple_reflection(k)]
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        let m = word
            .iter()
            .fold(IntMatrix::identity(self.datum.rank()), |acc, &k| acc.mul(&self.datum.simple_reflection(k)));
        self.index[&m]
    }

    pub fn longest(&self) -> usize {
        (0..self.order()).max_by_key(|&i| self.length(i)).unwrap_or(0)
    }

    /// Reduced word of a matrix in the Weyl group by repeatedly stripping a
    /// left descent.
    pub fn reduced_word(&self, m: &IntMatrix) -> Result<Vec<usize>> {
        if self.index_of(m).is_none() {
            bail!(Domain, "matrix {m:?} is not in the Weyl group");
        }
        let rd = &self.datum;
        let mut cur = m.clone();
        let mut len = rd.length_of(&cur);
        let mut word = Vec::with_capacity(len);
        while len > 0 {
            let (k, next) = (0..rd.num_simple())
                .map(|k| (k, rd.simple_reflection(k).mul(&cur)))
                .find(|(_, n)| rd.length_of(n) < len)
                .expect("nontrivial element has a descent");
            word.push(k);
            cur = next;
            len -= 1;
        }
        Ok(word)
    }
}

/// Finite group given by its multiplication table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            bail!(Construction, "a group has at least one element");
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                bail!(Construction, "malformed multiplication table row {a}");
            }
            if row[0] != a || table[0][a] != a {
                bail!(Construction, "element 0 is not the identity");
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        bail!(Construction, "multiplication table is not associative at ({a},{b},{c})");
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) => inverse.push(b),
                None => bail!(Construction, "element {a} has no inverse"),
            }
        }
        Ok(FiniteGroup { table, inverse })
    }

    /// For tables produced by construction from a known group.
    fn from_trusted_table(table: Vec<Vec<usize>>) -> Self {
        let inverse = table.iter().map(|row| row.iter().position(|&x| x == 0).expect("inverse exists")).collect();
        FiniteGroup { table, inverse }
    }

    pub fn trivial() -> Self {
        FiniteGroup { table: vec![vec![0]], inverse: vec![0] }
    }

    /// Direct product of cyclic groups; elements are mixed-radix exponent
    /// tuples with the first factor varying fastest.
    pub fn abelian(orders: &[usize]) -> Self {
        let n: usize = orders.iter().product();
        let digits = |mut x: usize| {
            orders
                .iter()
                .map(|&o| {
                    let d = x % o;
                    x /= o;
                    d
                })
                .collect::<Vec<_>>()
        };
        let encode = |ds: &[usize]| ds.iter().zip(orders).rev().fold(0, |acc, (&d, &o)| acc * o + d);
        let table = (0..n)
            .map(|a| {
                let da = digits(a);
                (0..n)
                    .map(|b| {
                        let s: Vec<usize> = digits(b).iter().zip(&da).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
                        encode(&s)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_trusted_table(table)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul(x % na, y % na) + na * b.mul(x / na, y / na)).collect())
            .collect();
        FiniteGroup::from_trusted_table(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|h| self.mul(self.mul(h, g), self.inverse[h])).collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order()).filter(|&h| self.mul(g, h) == self.mul(h, g)).collect()
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// All subgroups, each as a sorted element list.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0]]);
        let mut queue: VecDeque<Vec<usize>> = VecDeque::from([vec![0]]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        found.into_iter().collect()
    }

    /// The subgroup on the given sorted element list, reindexed from 0 with
    /// the identity first.
    pub fn restrict(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        if elements.first() != Some(&0) {
            bail!(Domain, "subgroup element list must start with the identity");
        }
        let mut table = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                match pos.get(&self.mul(a, b)) {
                    Some(&p) => row.push(p),
                    None => bail!(Domain, "element list is not closed under multiplication"),
                }
            }
            table.push(row);
        }
        Ok(FiniteGroup::from_trusted_table(table))
    }
}

/// A normalized 2-cocycle with values in {±1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    table: Vec<Vec<i8>>,
}

impl Cocycle {
    pub fn trivial(order: usize) -> Self {
        Cocycle { table: vec![vec![1; order]; order] }
    }

    pub fn from_table(table: Vec<Vec<i8>>, group: &FiniteGroup) -> Result<Self> {
        let c = Cocycle { table };
        c.validate(group)?;
        Ok(c)
    }

    pub(crate) fn from_trusted_table(table: Vec<Vec<i8>>) -> Self {
        Cocycle { table }
    }

    /// The coboundary `(a, b) ↦ f(a) f(b) f(ab)`.
    pub fn coboundary(f: &[i8], group: &FiniteGroup) -> Self {
        let n = group.order();
        let f0 = f[0];
        let table = (0..n)
            .map(|a| (0..n).map(|b| f[a] * f[b] * f[group.mul(a, b)] * f0 * f0).collect())
            .collect();
        Cocycle { table }
    }

    /// Pullback along a homomorphism given by the images of all elements.
    pub fn pullback(&self, hom: &[usize]) -> Self {
        Cocycle { table: hom.iter().map(|&a| hom.iter().map(|&b| self.table[a][b]).collect()).collect() }
    }

    pub fn pointwise_product(&self, other: &Cocycle) -> Self {
        Cocycle {
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a * b).collect())
                .collect(),
        }
    }

    pub fn restrict(&self, elements: &[usize]) -> Self {
        self.pullback(elements)
    }

    pub fn value(&self, a: usize, b: usize) -> i8 {
        self.table[a][b]
    }

    pub fn table(&self) -> &[Vec<i8>] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().flatten().all(|&v| v == 1)
    }

    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            bail!(Validation, "cocycle table does not match a group of order {n}");
        }
        if self.table.iter().flatten().any(|&v| v != 1 && v != -1) {
            bail!(Validation, "cocycle values must be +1 or -1");
        }
        if (0..n).any(|a| self.table[0][a] != 1 || self.table[a][0] != 1) {
            bail!(Validation, "cocycle is not normalized at the identity");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.table[a][b] * self.table[group.mul(a, b)][c];
                    let rhs = self.table[b][c] * self.table[a][group.mul(b, c)];
                    if lhs != rhs {
                        bail!(Validation, "cocycle identity fails at ({a},{b},{c})");
                    }
                }
            }
        }
        Ok(())
    }
}

/// One generator of an abelian diagram group.
#[derive(Debug, Clone)]
pub struct DiagramGenerator {
    pub label: String,
    pub matrix: IntMatrix,
    /// Translation part on torus points, in (Q/Z)^rank.
    pub translation: Vec<Rational64>,
    pub order: usize,
}

/// The group 𝕽: abstract elements with a lattice action (matrices on X*)
/// and a translation part on torus points.
#[derive(Debug, Clone)]
pub struct DiagramGroup {
    labels: Vec<String>,
    matrices: Vec<IntMatrix>,
    translations: Vec<Vec<Rational64>>,
    group: FiniteGroup,
}

fn frac_mod1(q: Rational64) -> Rational64 {
    q - q.floor()
}

impl DiagramGroup {
    pub fn trivial(rank: usize) -> Self {
        DiagramGroup {
            labels: vec!["e".into()],
            matrices: vec![IntMatrix::identity(rank)],
            translations: vec![vec![Rational64::zero(); rank]],
            group: FiniteGroup::trivial(),
        }
    }

    pub fn new(
        labels: Vec<String>,
        group: FiniteGroup,
        matrices: Vec<IntMatrix>,
        translations: Vec<Vec<Rational64>>,
    ) -> Result<Self> {
        let n = group.order();
        if labels.len() != n || matrices.len() != n || translations.len() != n {
            bail!(Construction, "diagram group data has inconsistent sizes");
        }
        let rank = matrices[0].dim();
        let translations: Vec<Vec<Rational64>> =
            translations.into_iter().map(|t| t.into_iter().map(frac_mod1).collect()).collect();
        let dg = DiagramGroup { labels, matrices, translations, group };
        for a in 0..n {
            if dg.matrices[a].dim() != rank || dg.translations[a].len() != rank {
                bail!(Construction, "diagram element {} acts on the wrong rank", dg.labels[a]);
            }
            for b in 0..n {
                let ab = dg.group.mul(a, b);
                if dg.matrices[a].mul(&dg.matrices[b]) != dg.matrices[ab] {
                    bail!(Construction, "lattice action of {} and {} is not multiplicative", dg.labels[a], dg.labels[b]);
                }
                let composed: Vec<Rational64> = dg
                    .point_linear(a, &dg.translations[b])
                    .into_iter()
                    .zip(&dg.translations[a])
                    .map(|(x, y)| frac_mod1(x + y))
                    .collect();
                if composed != dg.translations[ab] {
                    bail!(Construction, "translations of {} and {} do not compose", dg.labels[a], dg.labels[b]);
                }
            }
        }
        Ok(dg)
    }

    /// Abelian group generated by commuting generators of the given orders.
    pub fn abelian(rank: usize, gens: Vec<DiagramGenerator>) -> Result<Self> {
        let orders: Vec<usize> = gens.iter().map(|g| g.order).collect();
        if orders.contains(&0) {
            bail!(Construction, "generator orders must be positive");
        }
        let group = FiniteGroup::abelian(&orders);
        let n = group.order();
        let mut labels = Vec::with_capacity(n);
        let mut matrices = Vec::with_capacity(n);
        let mut translations = Vec::with_capacity(n);
        for x in 0..n {
            let mut rest = x;
            let mut parts = Vec::new();
            let mut m = IntMatrix::identity(rank);
            let mut t = vec![Rational64::zero(); rank];
            for g in &gens {
                let k = rest % g.order;
                rest /= g.order;
                for _ in 0..k {
                    let lin = point_linear_of(&g.matrix, &t)?;
                    t = lin.iter().zip(&g.translation).map(|(a, b)| frac_mod1(*a + *b)).collect();
                    m = m.mul(&g.matrix);
                }
                match k {
                    0 => {}
                    1 => parts.push(g.label.clone()),
                    k => parts.push(format!("{}^{k}", g.label)),
                }
            }
            labels.push(if parts.is_empty() { "e".into() } else { parts.join("*") });
            matrices.push(m);
            translations.push(t);
        }
        DiagramGroup::new(labels, group, matrices, translations)
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self, a: usize) -> &IntMatrix {
        &self.matrices[a]
    }

    pub fn translation(&self, a: usize) -> &[Rational64] {
        &self.translations[a]
    }

    /// Linear part of the action on torus points: the inverse transpose of
    /// the lattice matrix.
    fn point_linear(&self, a: usize, v: &[Rational64]) -> Vec<Rational64> {
        point_linear_of(&self.matrices[a], v).expect("diagram matrices are invertible")
    }
}

pub(crate) fn point_linear_of(m: &IntMatrix, v: &[Rational64]) -> Result<Vec<Rational64>> {
    let inv_t = m.inverse()?.transpose();
    let n = m.dim();
    Ok((0..n)
        .map(|i| (0..n).map(|j| Rational64::from_integer(inv_t.get(i, j)) * v[j]).sum())
        .collect())
}

/// Element `w γ` of `W ⋊ 𝕽`, by index into the enumerated factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedWeylElement {
    pub weyl: usize,
    pub diagram: usize,
}

impl ExtendedWeylElement {
    pub const IDENTITY: ExtendedWeylElement = ExtendedWeylElement { weyl: 0, diagram: 0 };
}

/// The extended group `W ⋊ 𝕽` with 𝕽 acting on `W` by conjugation.
#[derive(Debug, Clone)]
pub struct ExtendedGroup {
    weyl: WeylGroup,
    diagram: DiagramGroup,
    // conj[γ][w] = γ w γ⁻¹
    conj: Vec<Vec<usize>>,
}

impl ExtendedGroup {
    pub fn new(weyl: WeylGroup, diagram: DiagramGroup) -> Result<Self> {
        let rd = weyl.datum().clone();
        if diagram.matrix(0).dim() != rd.rank() {
            bail!(Construction, "diagram group acts on rank {} but the datum has rank {}", diagram.matrix(0).dim(), rd.rank());
        }
        if weyl.order() * diagram.order() > MAX_GROUP_ORDER {
            bail!(Construction, "extended group exceeds {MAX_GROUP_ORDER} elements");
        }
        let mut conj = Vec::with_capacity(diagram.order());
        for g in 0..diagram.order() {
            let m = diagram.matrix(g);
            if !rd.permutes_roots(m) || !rd.preserves_positive_system(m) {
                bail!(Construction, "diagram element {} does not stabilize the positive roots", diagram.label(g));
            }
            let minv = m.inverse()?;
            let row: Vec<usize> = weyl
                .matrices()
                .iter()
                .map(|w| weyl.index_of(&m.mul(w).mul(&minv)).expect("conjugate of a Weyl element"))
                .collect();
            conj.push(row);
        }
        Ok(ExtendedGroup { weyl, diagram, conj })
    }

    pub fn plain(weyl: WeylGroup) -> Self {
        let rank = weyl.datum().rank();
        ExtendedGroup::new(weyl, DiagramGroup::trivial(rank)).expect("trivial diagram group")
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn diagram(&self) -> &DiagramGroup {
        &self.diagram
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        self.weyl.datum()
    }

    pub fn order(&self) -> usize {
        self.weyl.order() * self.diagram.order()
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtendedWeylElement> + '_ {
        (0..self.diagram.order())
            .flat_map(move |d| (0..self.weyl.order()).map(move |w| ExtendedWeylElement { weyl: w, diagram: d }))
    }

    /// Flat index `diagram * |W| + weyl`.
    pub fn flat_index(&self, e: ExtendedWeylElement) -> usize {
        e.diagram * self.weyl.order() + e.weyl
    }

    pub fn from_flat(&self, i: usize) -> ExtendedWeylElement {
        ExtendedWeylElement { weyl: i % self.weyl.order(), diagram: i / self.weyl.order() }
    }

    /// Index of `γ w γ⁻¹` in `W`.
    pub fn conjugate(&self, diagram: usize, w: usize) -> usize {
        self.conj[diagram][w]
    }

    pub fn mul(&self, a: ExtendedWeylElement, b: ExtendedWeylElement) -> ExtendedWeylElement {
        ExtendedWeylElement {
            weyl: self.weyl.mul(a.weyl, self.conj[a.diagram][b.weyl]),
            diagram: self.diagram.group().mul(a.diagram, b.diagram),
        }
    }

    pub fn inverse(&self, a: ExtendedWeylElement) -> ExtendedWeylElement {
        let ginv = self.diagram.group().inv(a.diagram);
        ExtendedWeylElement { weyl: self.conj[ginv][self.weyl.inverse(a.weyl)], diagram: ginv }
    }

    pub fn matrix(&self, a: ExtendedWeylElement) -> IntMatrix {
        self.weyl.matrix(a.weyl).mul(self.diagram.matrix(a.diagram))
    }

    /// Sign character: `(-1)^length` on `W`, trivial on 𝕽.
    pub fn sign(&self, a: ExtendedWeylElement) -> i64 {
        if self.weyl.length(a.weyl) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Action on a torus point `exp(2πi v/N)`: the inverse transpose of the
    /// lattice matrix, followed by the translation of the diagram part.
    pub fn act_on_point(&self, a: ExtendedWeylElement, t: &FiniteTorusPoint) -> FiniteTorusPoint {
        let n = t.order() as i64;
        let v: Vec<Rational64> = t.exponents().iter().map(|&x| Rational64::new(x, n)).collect();
        let lin = point_linear_of(&self.matrix(a), &v).expect("group matrices are invertible");
        // the Weyl part has no translation; the diagram translation is applied
        // after the full linear action of w γ, conjugated through w
        let w_lin = point_linear_of(self.weyl.matrix(a.weyl), self.diagram.translation(a.diagram))
            .expect("Weyl matrices are invertible");
        let coords: Vec<Rational64> = lin.iter().zip(&w_lin).map(|(x, y)| *x + *y).collect();
        FiniteTorusPoint::from_rationals(&coords)
    }

    /// Multiplication table of the whole extended group (flat indexing).
    pub fn finite_group(&self) -> FiniteGroup {
        let n = self.order();
        let table = (0..n)
            .map(|a| (0..n).map(|b| self.flat_index(self.mul(self.from_flat(a), self.from_flat(b)))).collect())
            .collect();
        FiniteGroup::from_trusted_table(table)
    }

    /// Multiplication table of a subgroup given by its elements, which are
    /// returned sorted by flat index (so the identity comes first).
    pub fn subgroup(&self, elements: &[ExtendedWeylElement]) -> Result<(FiniteGroup, Vec<ExtendedWeylElement>)> {
        let mut elems = elements.to_vec();
        elems.sort_by_key(|&e| self.flat_index(e));
        elems.dedup();
        if elems.first() != Some(&ExtendedWeylElement::IDENTITY) {
            bail!(Domain, "subgroup does not contain the identity");
        }
        let pos: HashMap<ExtendedWeylElement, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut table = Vec::with_capacity(elems.len());
        for &a in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for &b in &elems {
                match pos.get(&self.mul(a, b)) {
                    Some(&p) => row.push(p),
                    None => bail!(Domain, "element list is not closed under multiplication"),
                }
            }
            table.push(row);
        }
        Ok((FiniteGroup::from_trusted_table(table), elems))
    }

    /// The cocycle on 𝕽 pulled back to `W ⋊ 𝕽` along the projection.
    pub fn pulled_back_cocycle(&self, cocycle: &Cocycle) -> Cocycle {
        let hom: Vec<usize> = (0..self.order()).map(|i| self.from_flat(i).diagram).collect();
        cocycle.pullback(&hom)
    }
}

/// Minimal-length representatives of the left cosets `w W_t` for a subgroup
/// `W_t` of `W` (given by element indices).
pub fn min_coset_reps(w: &WeylGroup, subgroup: &[usize]) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = subgroup.iter().copied().collect();
    if !set.contains(&0) {
        bail!(Domain, "subgroup does not contain the identity");
    }
    for &a in &set {
        for &b in &set {
            if !set.contains(&w.mul(a, b)) {
                bail!(Domain, "element list is not closed under multiplication");
            }
        }
    }
    let mut assigned = vec![false; w.order()];
    let mut reps = Vec::new();
    // indices are sorted by length, so the first unassigned element of a coset is minimal
    for x in 0..w.order() {
        if assigned[x] {
            continue;
        }
        let coset: Vec<usize> = set.iter().map(|&h| w.mul(x, h)).collect();
        let minimal = coset.iter().filter(|&&c| w.length(c) == w.length(x)).count();
        if minimal != 1 {
            bail!(Internal, "coset of {x} has {minimal} elements of minimal length");
        }
        for c in coset {
            assigned[c] = true;
        }
        reps.push(x);
    }
    Ok(reps)
}

/// The stabilizer of a torus point in `W ⋊ 𝕽`, with its reflection part and
/// the part stabilizing the positive roots of the fixed subsystem.
#[derive(Debug, Clone)]
pub struct PointStabilizer {
    pub elements: Vec<ExtendedWeylElement>,
    /// Reduced roots `α` with `s_α(t) = t`.
    pub roots: Vec<usize>,
    pub reflection_part: Vec<ExtendedWeylElement>,
    pub diagram_part: Vec<ExtendedWeylElement>,
}

/// Indices of the reduced roots whose reflection fixes `t`. For `α(t) = 1`
/// this always holds; for `α(t) = -1` it holds exactly when `α∨ ∈ 2X_*`.
pub fn fixed_roots(rd: &RootDatum, t: &FiniteTorusPoint) -> Vec<usize> {
    rd.reduced_indices()
        .into_iter()
        .filter(|&i| {
            let r = rd.root(i);
            let p = linalg::dot(&r.vector, t.exponents());
            let n = t.order() as i64;
            r.coroot.iter().all(|&c| (p * c).rem_euclid(n) == 0)
        })
        .collect()
}

pub fn stabilizer_of_point(g: &ExtendedGroup, t: &FiniteTorusPoint) -> PointStabilizer {
    let rd = g.datum();
    let elements: Vec<ExtendedWeylElement> = g.elements().filter(|&e| g.act_on_point(e, t) == *t).collect();
    let roots = fixed_roots(rd, t);
    let gens: Vec<usize> = roots
        .iter()
        .map(|&i| g.weyl().index_of(&rd.reflection(i)).expect("reflections lie in W"))
        .collect();
    let mut reflection: BTreeSet<usize> = BTreeSet::from([0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = g.weyl().mul(x, s);
            if reflection.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let positive: Vec<usize> = roots.iter().copied().filter(|&i| rd.is_positive(&rd.root(i).vector)).collect();
    let diagram_part = elements
        .iter()
        .copied()
        .filter(|&e| {
            let m = g.matrix(e);
            positive.iter().all(|&i| rd.find(&m.apply(&rd.root(i).vector)).is_some_and(|j| positive.contains(&j)))
        })
        .collect();
    PointStabilizer {
        elements,
        roots,
        reflection_part: reflection.into_iter().map(|w| ExtendedWeylElement { weyl: w, diagram: 0 }).collect(),
        diagram_part,
    }
}

/// Membership of a vector of `X_* ⊗ Q` in the cones attached to a set of
/// positive roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConeFlags {
    /// `⟨x, α⟩ ≥ 0` for all positive roots.
    pub dominant: bool,
    /// `x` is a nonpositive combination of positive coroots.
    pub antidominant_obtuse: bool,
    /// `x` is a strictly negative combination of the simple coroots.
    pub antidominant_obtuse_interior: bool,
}

/// Cones for the positive system `positive` (root indices of `rd`), which
/// may be the positive roots of a subsystem.
pub fn cone_classify_for(rd: &RootDatum, positive: &[usize], x: &[BigRational]) -> Result<ConeFlags> {
    if x.len() != rd.rank() {
        bail!(Domain, "vector of length {} for a datum of rank {}", x.len(), rd.rank());
    }
    let pairing = |v: &[i64]| -> BigRational { v.iter().zip(x).map(|(a, b)| rat(*a) * b).sum() };
    let dominant = positive.iter().all(|&i| !pairing(&rd.root(i).vector).is_negative());
    let simple = simple_subset(rd, positive);
    let (antidominant_obtuse, antidominant_obtuse_interior) = if simple.is_empty() {
        let zero = x.iter().all(|q| q.is_zero());
        (zero, zero)
    } else {
        let a: Vec<Vec<BigRational>> =
            (0..rd.rank()).map(|r| simple.iter().map(|&i| rat(rd.root(i).coroot[r])).collect()).collect();
        match linalg::solve(&a, x) {
            None => (false, false),
            Some(coef) => (
                coef.iter().all(|c| !c.is_positive()),
                coef.iter().all(|c| c.is_negative()),
            ),
        }
    };
    Ok(ConeFlags { dominant, antidominant_obtuse, antidominant_obtuse_interior })
}

pub fn cone_classify(rd: &RootDatum, x: &[BigRational]) -> Result<ConeFlags> {
    cone_classify_for(rd, rd.positive_indices(), x)
}

/// Simple roots of the reduced subsystem with the given positive roots: a
/// positive root is simple iff its reflection makes no other positive root
/// negative. Their coroots generate the same cone as all positive coroots.
pub fn simple_subset(rd: &RootDatum, positive: &[usize]) -> Vec<usize> {
    let reduced: Vec<usize> = positive.iter().copied().filter(|&i| rd.is_reduced_root(&rd.root(i).vector)).collect();
    reduced
        .iter()
        .copied()
        .filter(|&i| {
            let s = rd.root(i);
            reduced.iter().all(|&j| {
                let v = &rd.root(j).vector;
                let n = linalg::dot(v, &s.coroot);
                let img: Vec<i64> = v.iter().zip(&s.vector).map(|(a, b)| a - n * b).collect();
                j == i || rd.is_positive(&img)
            })
        })
        .collect()
}

/// Counterexample counts for the cone identities of minimal coset
/// representatives `W^t` of `W / W_t`, over random rational vectors `x`:
/// `x` is `R_t`-dominant iff `w x` is dominant for some `w ∈ W^t`, and
/// `W^t x ⊂ 𝔱^−` iff `x` lies in the obtuse cone of `R_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CosetConeReport {
    pub representatives: usize,
    pub subgroup_order: usize,
    pub samples: usize,
    pub dominant_failures: usize,
    pub obtuse_failures: usize,
}

pub fn check_coset_cones<R: rand::Rng>(
    w: &WeylGroup,
    t: &FiniteTorusPoint,
    rng: &mut R,
    samples: usize,
) -> Result<CosetConeReport> {
    let rd = w.datum().clone();
    let g = ExtendedGroup::plain(w.clone());
    let stab = stabilizer_of_point(&g, t);
    let sub: Vec<usize> = stab.reflection_part.iter().map(|e| e.weyl).collect();
    let reps = min_coset_reps(w, &sub)?;
    let positive_t: Vec<usize> = stab.roots.iter().copied().filter(|&i| rd.is_positive(&rd.root(i).vector)).collect();
    // w acts on cocharacters by the inverse transpose
    let actions: Vec<IntMatrix> =
        reps.iter().map(|&r| w.matrix(r).inverse().map(|m| m.transpose())).collect::<Result<_>>()?;
    let apply = |m: &IntMatrix, x: &[BigRational]| -> Vec<BigRational> {
        (0..m.dim()).map(|i| (0..m.dim()).map(|j| rat(m.get(i, j)) * &x[j]).sum()).collect()
    };
    let mut report = CosetConeReport { representatives: reps.len(), subgroup_order: sub.len(), samples, ..Default::default() };
    for _ in 0..samples {
        let x: Vec<BigRational> = (0..rd.rank())
            .map(|_| {
                if rng.gen_bool(0.2) {
                    BigRational::zero()
                } else {
                    BigRational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=3).into())
                }
            })
            .collect();
        let sub_flags = cone_classify_for(&rd, &positive_t, &x)?;
        let moved: Vec<ConeFlags> =
            actions.iter().map(|m| cone_classify(&rd, &apply(m, &x))).collect::<Result<_>>()?;
        if sub_flags.dominant != moved.iter().any(|f| f.dominant) {
            report.dominant_failures += 1;
        }
        if sub_flags.antidominant_obtuse != moved.iter().all(|f| f.antidominant_obtuse) {
            report.obtuse_failures += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::Family;

    fn weyl(f: Family, n: usize) -> WeylGroup {
        WeylGroup::enumerate(Arc::new(RootDatum::build_classical(f, n).unwrap())).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(weyl(Family::B, 2).order(), 8);
        assert_eq!(weyl(Family::A, 2).order(), 6);
        assert_eq!(weyl(Family::D, 4).order(), 192);
        assert_eq!(weyl(Family::BC, 3).order(), 48);
        let rank0 = WeylGroup::enumerate(Arc::new(RootDatum::empty(0, 0).unwrap())).unwrap();
        assert_eq!(rank0.order(), 1);
    }

    #[test]
    fn reduced_words() {
        let b2 = weyl(Family::B, 2);
        let w0 = b2.longest();
        let word = b2.reduced_word(b2.matrix(w0)).unwrap();
        assert_eq!(word.len(), 4);
        assert_eq!(b2.from_word(&word), w0);
        assert!(b2.reduced_word(b2.matrix(0)).unwrap().is_empty());
        assert_eq!(b2.matrix(w0).apply(&[3, -5]), vec![-3, 5]);
        let a2 = weyl(Family::A, 2);
        assert_eq!(a2.from_word(&[0, 1, 0]), a2.from_word(&[1, 0, 1]));
        assert_eq!(a2.length(a2.from_word(&[0, 1, 0])), 3);
    }

    #[test]
    fn coset_reps() {
        let a2 = weyl(Family::A, 2);
        let sub = vec![0, a2.simple(0)];
        let reps = min_coset_reps(&a2, &sub).unwrap();
        let mut lens: Vec<usize> = reps.iter().map(|&r| a2.length(r)).collect();
        lens.sort();
        assert_eq!(lens, vec![0, 1, 2]);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(min_coset_reps(&a2, &all).unwrap(), vec![0]);
        let b2 = weyl(Family::B, 2);
        assert_eq!(min_coset_reps(&b2, &[0, b2.simple(1)]).unwrap().len(), 4);
        assert!(min_coset_reps(&b2, &[0, b2.simple(0), b2.simple(1)]).is_err());
    }

    #[test]
    fn subgroups_of_small_groups() {
        let b2 = ExtendedGroup::plain(weyl(Family::B, 2)).finite_group();
        assert_eq!(b2.subgroups().len(), 10);
        let s3 = ExtendedGroup::plain(weyl(Family::A, 2)).finite_group();
        assert_eq!(s3.subgroups().len(), 6);
        assert_eq!(s3.conjugacy_classes().len(), 3);
    }

    #[test]
    fn cocycles() {
        let k4 = FiniteGroup::abelian(&[2, 2]);
        // (a, b) ↦ (-1)^{a_1 b_2}
        let table: Vec<Vec<i8>> =
            (0..4).map(|a| (0..4).map(|b| if a & 1 == 1 && b & 2 == 2 { -1 } else { 1 }).collect()).collect();
        let c = Cocycle::from_table(table, &k4).unwrap();
        assert!(!c.is_trivial());
        let cb = Cocycle::coboundary(&[1, -1, 1, -1], &k4);
        cb.validate(&k4).unwrap();
        let mut bad = c.table().to_vec();
        bad[1][1] = -1;
        assert!(Cocycle::from_table(bad, &k4).is_err());
    }

    #[test]
    fn stabilizers() {
        let g = ExtendedGroup::plain(weyl(Family::A, 1));
        let id = FiniteTorusPoint::new(1, vec![0, 0]);
        assert_eq!(stabilizer_of_point(&g, &id).elements.len(), 2);
        let generic = FiniteTorusPoint::new(7, vec![1, 3]);
        let st = stabilizer_of_point(&g, &generic);
        assert_eq!(st.elements.len(), 1);
        assert!(st.roots.is_empty());
        // rank-one lattice with α = 1, α∨ = 2: the point -1 is fixed by s_α
        let rd = RootDatum::new(
            1,
            vec![
                crate::root_data::Root { vector: vec![1], coroot: vec![2], component: 0 },
                crate::root_data::Root { vector: vec![-1], coroot: vec![-2], component: 0 },
            ],
            1,
        )
        .unwrap();
        let g = ExtendedGroup::plain(WeylGroup::enumerate(Arc::new(rd)).unwrap());
        let st = stabilizer_of_point(&g, &FiniteTorusPoint::new(2, vec![1]));
        assert_eq!(st.elements.len(), 2);
        assert_eq!(st.reflection_part.len(), 2);
    }

    #[test]
    fn cones() {
        let b2 = RootDatum::build_classical(Family::B, 2).unwrap();
        let zero = vec![rat(0), rat(0)];
        let f = cone_classify(&b2, &zero).unwrap();
        assert!(f.dominant && f.antidominant_obtuse && !f.antidominant_obtuse_interior);
        // -(α1∨ + α2∨) = -((1,-1) + (0,2)) = (-1,-1)
        let f = cone_classify(&b2, &[rat(-1), rat(-1)]).unwrap();
        assert!(f.antidominant_obtuse_interior);
        let a2 = RootDatum::build_classical(Family::A, 2).unwrap();
        let f = cone_classify(&a2, &[rat(1), rat(-1), rat(0)]).unwrap();
        assert!(!f.antidominant_obtuse && !f.antidominant_obtuse_interior);
        assert!(cone_classify(&a2, &[rat(1)]).is_err());
    }

    #[test]
    fn diagram_swap_on_a1xa1() {
        let a1 = RootDatum::build_classical(Family::A, 1).unwrap();
        let rd = Arc::new(RootDatum::product(&a1, &a1).unwrap());
        let swap = IntMatrix::permutation(&[2, 3, 0, 1]);
        let dg = DiagramGroup::abelian(
            4,
            vec![DiagramGenerator { label: "g".into(), matrix: swap, translation: vec![Rational64::zero(); 4], order: 2 }],
        );
        // the two factors carry different z-variables, so the swap is allowed
        // at the group level; the Hecke layer checks parameter invariance
        let g = ExtendedGroup::new(WeylGroup::enumerate(rd).unwrap(), dg.unwrap()).unwrap();
        assert_eq!(g.order(), 8);
        let fg = g.finite_group();
        assert_eq!(fg.conjugacy_classes().len(), 5);
        let x = ExtendedWeylElement { weyl: 1, diagram: 1 };
        assert_eq!(g.mul(x, g.inverse(x)), ExtendedWeylElement::IDENTITY);
    }

    #[test]
    fn coset_cones_at_order_two_points() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (f, n) in [(Family::B, 2), (Family::A, 2), (Family::C, 2)] {
            let w = weyl(f, n);
            let rank = w.datum().rank();
            for t in FiniteTorusPoint::all_of_order_dividing(rank, 2) {
                let r = check_coset_cones(&w, &t, &mut rng, 200).unwrap();
                assert_eq!(r.representatives * r.subgroup_order, w.order());
                assert_eq!((r.dominant_failures, r.obtuse_failures), (0, 0), "{f:?}{n} at {:?}", t.exponents());
            }
        }
    }
}
