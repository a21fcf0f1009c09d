//! Root data of classical type realized in standard integer coordinates,
//! including the non-reduced type BC.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::linalg::{dot, IntMatrix};

/// Largest ambient rank accepted by the constructors. Weyl groups are
/// enumerated in full elsewhere, so this keeps them tractable.
pub const MAX_RANK: usize = 12;

pub type LatticeVector = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "BC" => Family::BC,
            other => bail!(Construction, "unknown root system family {other:?}"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub vector: LatticeVector,
    pub coroot: LatticeVector,
    /// Index of the z-variable attached to the irreducible factor (0-based).
    pub component: usize,
}

/// Bookkeeping for a named classical factor of a product datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub family: Family,
    /// Rank of the root system (for type A this is one less than the width).
    pub n: usize,
    /// First ambient coordinate occupied by the factor.
    pub offset: usize,
    pub width: usize,
    pub component: usize,
}

impl Factor {
    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.n)
    }
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Root>,
    positive: Vec<usize>,
    simple: Vec<usize>,
    num_z_vars: usize,
    factors: Vec<Factor>,
    index: HashMap<LatticeVector, usize>,
}

fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

fn unit(rank: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[i] = c;
    v
}

fn pair_vec(rank: usize, i: usize, a: i64, j: usize, b: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[i] = a;
    v[j] = b;
    v
}

impl RootDatum {
    /// Validates a root/coroot list and fixes the lexicographic positive
    /// system. Roots must be closed under negation and under all reflections.
    pub fn new(rank: usize, roots: Vec<Root>, num_z_vars: usize) -> Result<Self> {
        if rank > MAX_RANK {
            bail!(Construction, "rank {rank} exceeds the supported bound {MAX_RANK}");
        }
        let mut index = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            if r.vector.len() != rank || r.coroot.len() != rank {
                bail!(Construction, "root {:?} does not live in rank {rank}", r.vector);
            }
            if dot(&r.vector, &r.coroot) != 2 {
                bail!(Construction, "root {:?} pairs to {} with its coroot", r.vector, dot(&r.vector, &r.coroot));
            }
            if r.component >= num_z_vars {
                bail!(Construction, "root {:?} uses z-variable {} of {num_z_vars}", r.vector, r.component + 1);
            }
            if index.insert(r.vector.clone(), i).is_some() {
                bail!(Construction, "root {:?} listed twice", r.vector);
            }
        }
        for r in &roots {
            let neg: Vec<i64> = r.vector.iter().map(|c| -c).collect();
            let Some(&j) = index.get(&neg) else {
                bail!(Construction, "root set not closed under negation at {:?}", r.vector);
            };
            if roots[j].coroot.iter().zip(&r.coroot).any(|(a, b)| *a != -b) {
                bail!(Construction, "coroot of {:?} is not minus the coroot of its negative", r.vector);
            }
            for s in &roots {
                let n = dot(&s.vector, &r.coroot);
                let img: Vec<i64> = s.vector.iter().zip(&r.vector).map(|(x, a)| x - n * a).collect();
                let Some(&k) = index.get(&img) else {
                    bail!(Construction, "reflection in {:?} moves {:?} off the root set", r.vector, s.vector);
                };
                let m = dot(&r.vector, &s.coroot);
                let coimg: Vec<i64> = s.coroot.iter().zip(&r.coroot).map(|(x, a)| x - m * a).collect();
                if roots[k].coroot != coimg {
                    bail!(Construction, "coroots not permuted compatibly by the reflection in {:?}", r.vector);
                }
                if n != 0 && s.component != r.component {
                    bail!(Construction, "roots {:?} and {:?} interact but carry different z-variables", r.vector, s.vector);
                }
            }
            // the line through r meets the root set in {±r} or {±r, ±2r}
            for k in [3, 4] {
                let mult: Vec<i64> = r.vector.iter().map(|c| c * k).collect();
                if index.contains_key(&mult) {
                    bail!(Construction, "{k} times the root {:?} is also a root", r.vector);
                }
            }
        }
        let positive: Vec<usize> = (0..roots.len()).filter(|&i| lex_positive(&roots[i].vector)).collect();
        let mut datum = RootDatum { rank, roots, positive, simple: Vec::new(), num_z_vars, factors: Vec::new(), index };
        let reduced_pos: Vec<usize> = datum.positive.iter().copied().filter(|&i| !datum.is_divisible_index(i)).collect();
        let mut simple: Vec<usize> = reduced_pos
            .iter()
            .copied()
            .filter(|&i| {
                let v = &datum.roots[i].vector;
                !reduced_pos.iter().any(|&j| {
                    let diff: Vec<i64> = v.iter().zip(&datum.roots[j].vector).map(|(a, b)| a - b).collect();
                    datum.index.get(&diff).is_some_and(|&k| reduced_pos.contains(&k))
                })
            })
            .collect();
        simple.sort_by(|&a, &b| {
            let (ra, rb) = (&datum.roots[a], &datum.roots[b]);
            ra.component.cmp(&rb.component).then_with(|| rb.vector.cmp(&ra.vector))
        });
        datum.simple = simple;
        Ok(datum)
    }

    /// Datum with no roots on a lattice of the given rank.
    pub fn empty(rank: usize, num_z_vars: usize) -> Result<Self> {
        RootDatum::new(rank, Vec::new(), num_z_vars)
    }

    /// Standard realization: `A` with rank n in Z^{n+1}, the others in Z^n.
    pub fn build_classical(family: Family, n: usize) -> Result<Self> {
        let min = if family == Family::D { 2 } else { 1 };
        if n < min {
            bail!(Construction, "{family}{n} is not a valid root system");
        }
        let rank = if family == Family::A { n + 1 } else { n };
        if rank > MAX_RANK {
            bail!(Construction, "rank {rank} exceeds the supported bound {MAX_RANK}");
        }
        let mut roots = Vec::new();
        let mut push = |v: Vec<i64>, c: Vec<i64>| {
            roots.push(Root { vector: v, coroot: c, component: 0 });
        };
        for i in 0..rank {
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let v = pair_vec(rank, i, 1, j, -1);
                push(v.clone(), v);
                if family != Family::A && i < j {
                    for s in [1, -1] {
                        let v = pair_vec(rank, i, s, j, s);
                        push(v.clone(), v);
                    }
                }
            }
            for s in [1, -1] {
                match family {
                    Family::B => push(unit(rank, i, s), unit(rank, i, 2 * s)),
                    Family::C => push(unit(rank, i, 2 * s), unit(rank, i, s)),
                    Family::BC => {
                        push(unit(rank, i, s), unit(rank, i, 2 * s));
                        push(unit(rank, i, 2 * s), unit(rank, i, s));
                    }
                    Family::A | Family::D => {}
                }
            }
        }
        let mut datum = RootDatum::new(rank, roots, 1)?;
        datum.factors = vec![Factor { family, n, offset: 0, width: rank, component: 0 }];
        Ok(datum)
    }

    /// Orthogonal direct sum. Coordinates and z-variables of `b` are shifted
    /// past those of `a`.
    pub fn product(a: &RootDatum, b: &RootDatum) -> Result<Self> {
        let rank = a.rank + b.rank;
        let pad = |v: &[i64], left: usize| {
            let mut out = vec![0; rank];
            out[left..left + v.len()].copy_from_slice(v);
            out
        };
        let mut roots: Vec<Root> = a
            .roots
            .iter()
            .map(|r| Root { vector: pad(&r.vector, 0), coroot: pad(&r.coroot, 0), component: r.component })
            .collect();
        roots.extend(b.roots.iter().map(|r| Root {
            vector: pad(&r.vector, a.rank),
            coroot: pad(&r.coroot, a.rank),
            component: r.component + a.num_z_vars,
        }));
        let mut datum = RootDatum::new(rank, roots, a.num_z_vars + b.num_z_vars)?;
        datum.factors = a.factors.clone();
        datum.factors.extend(b.factors.iter().map(|f| Factor {
            offset: f.offset + a.rank,
            component: f.component + a.num_z_vars,
            ..f.clone()
        }));
        Ok(datum)
    }

    pub fn with_factors(mut self, factors: Vec<Factor>) -> Self {
        self.factors = factors;
        self
    }

    /// Renames z-variables: component `c` becomes `map[c]`, letting several
    /// factors share one parameter.
    pub fn with_components(&self, map: &[usize], num_z_vars: usize) -> Result<Self> {
        if map.len() != self.num_z_vars || map.iter().any(|&c| c >= num_z_vars) {
            bail!(Construction, "component map {map:?} does not fit {} -> {num_z_vars}", self.num_z_vars);
        }
        let roots = self.roots.iter().map(|r| Root { component: map[r.component], ..r.clone() }).collect();
        let mut datum = RootDatum::new(self.rank, roots, num_z_vars)?;
        datum.factors = self.factors.iter().map(|f| Factor { component: map[f.component], ..f.clone() }).collect();
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn num_z_vars(&self) -> usize {
        self.num_z_vars
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn positive_indices(&self) -> &[usize] {
        &self.positive
    }

    /// Simple roots of the reduced subsystem, ordered by factor and then with
    /// the short (or long, in type C) end of the Dynkin diagram last.
    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn simple_root(&self, k: usize) -> &Root {
        &self.roots[self.simple[k]]
    }

    pub fn num_simple(&self) -> usize {
        self.simple.len()
    }

    pub fn find(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    fn lookup(&self, v: &[i64]) -> Result<usize> {
        match self.find(v) {
            Some(i) => Ok(i),
            None => bail!(Domain, "{v:?} is not a root of this datum"),
        }
    }

    fn is_divisible_index(&self, i: usize) -> bool {
        let v = &self.roots[i].vector;
        v.iter().all(|c| c % 2 == 0) && self.index.contains_key(&v.iter().map(|c| c / 2).collect::<Vec<_>>())
    }

    pub fn is_positive(&self, v: &[i64]) -> bool {
        lex_positive(v)
    }

    /// Whether `v` is a root such that `v/2` is not a root.
    pub fn is_reduced_root(&self, v: &[i64]) -> bool {
        self.find(v).is_some_and(|i| !self.is_divisible_index(i))
    }

    /// Indices of the nondivisible roots.
    pub fn reduced_indices(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| !self.is_divisible_index(i)).collect()
    }

    pub fn reduced_positive_indices(&self) -> Vec<usize> {
        self.positive.iter().copied().filter(|&i| !self.is_divisible_index(i)).collect()
    }

    pub fn is_doubled(&self, alpha: &[i64]) -> Result<bool> {
        self.lookup(alpha)?;
        Ok(self.index.contains_key(&alpha.iter().map(|c| 2 * c).collect::<Vec<_>>()))
    }

    pub fn coroot_halvable(&self, alpha: &[i64]) -> Result<bool> {
        let i = self.lookup(alpha)?;
        Ok(self.roots[i].coroot.iter().all(|c| c % 2 == 0))
    }

    pub fn reflection(&self, root: usize) -> IntMatrix {
        IntMatrix::reflection(&self.roots[root].vector, &self.roots[root].coroot)
    }

    pub fn simple_reflection(&self, k: usize) -> IntMatrix {
        self.reflection(self.simple[k])
    }

    /// Number of positive reduced roots made negative by `m`.
    pub fn length_of(&self, m: &IntMatrix) -> usize {
        self.reduced_positive_indices()
            .into_iter()
            .filter(|&i| !lex_positive(&m.apply(&self.roots[i].vector)))
            .count()
    }

    pub fn permutes_roots(&self, m: &IntMatrix) -> bool {
        self.roots.iter().all(|r| self.index.contains_key(&m.apply(&r.vector)))
    }

    pub fn preserves_positive_system(&self, m: &IntMatrix) -> bool {
        self.positive.iter().all(|&i| lex_positive(&m.apply(&self.roots[i].vector)))
    }

    /// Cartan integer ⟨α_i, α_j∨⟩ for simple roots.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        dot(&self.simple_root(i).vector, &self.simple_root(j).coroot)
    }

    /// Order of s_i s_j in the Weyl group.
    pub fn coxeter_m(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        match self.cartan(i, j) * self.cartan(j, i) {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            p => unreachable!("Cartan product {p} in a crystallographic system"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(family: Family, n: usize) -> usize {
        RootDatum::build_classical(family, n).unwrap().roots().len()
    }

    #[test]
    fn root_counts() {
        assert_eq!(count(Family::A, 1), 2);
        assert_eq!(count(Family::A, 3), 12);
        assert_eq!(count(Family::B, 2), 8);
        assert_eq!(count(Family::C, 3), 18);
        assert_eq!(count(Family::D, 3), 12);
        assert_eq!(count(Family::BC, 2), 12);
        assert!(RootDatum::build_classical(Family::D, 1).is_err());
        assert!(RootDatum::build_classical(Family::A, 12).is_err());
    }

    #[test]
    fn bc_reduced_part_is_b() {
        let bc = RootDatum::build_classical(Family::BC, 3).unwrap();
        let b = RootDatum::build_classical(Family::B, 3).unwrap();
        let mut red: Vec<_> = bc.reduced_indices().into_iter().map(|i| bc.root(i).vector.clone()).collect();
        let mut bv: Vec<_> = b.roots().iter().map(|r| r.vector.clone()).collect();
        red.sort();
        bv.sort();
        assert_eq!(red, bv);
        assert_eq!(bc.num_simple(), 3);
    }

    #[test]
    fn simple_roots_in_bourbaki_order() {
        let b = RootDatum::build_classical(Family::B, 3).unwrap();
        let simple: Vec<_> = (0..3).map(|k| b.simple_root(k).vector.clone()).collect();
        assert_eq!(simple, vec![vec![1, -1, 0], vec![0, 1, -1], vec![0, 0, 1]]);
        let c = RootDatum::build_classical(Family::C, 2).unwrap();
        assert_eq!(c.simple_root(1).vector, vec![0, 2]);
        assert_eq!(c.coxeter_m(0, 1), 4);
    }

    #[test]
    fn doubled_and_halvable() {
        let bc = RootDatum::build_classical(Family::BC, 2).unwrap();
        assert!(bc.is_doubled(&[1, 0]).unwrap());
        let b = RootDatum::build_classical(Family::B, 2).unwrap();
        assert!(b.coroot_halvable(&[1, 0]).unwrap());
        assert!(!b.is_doubled(&[1, 0]).unwrap());
        assert!(b.coroot_halvable(&[3, 0]).is_err());
        let a = RootDatum::build_classical(Family::A, 2).unwrap();
        for r in a.roots() {
            assert!(!a.is_doubled(&r.vector).unwrap());
            assert!(!a.coroot_halvable(&r.vector).unwrap());
        }
    }

    #[test]
    fn product_shifts_components() {
        let bc = RootDatum::build_classical(Family::BC, 2).unwrap();
        let b = RootDatum::build_classical(Family::B, 3).unwrap();
        let p = RootDatum::product(&bc, &b).unwrap();
        assert_eq!(p.rank(), 5);
        assert_eq!(p.roots().len(), 30);
        assert_eq!(p.num_z_vars(), 2);
        assert_eq!(p.simple_root(4).component, 1);
        let e = RootDatum::empty(0, 0).unwrap();
        let q = RootDatum::product(&e, &b).unwrap();
        assert_eq!(q.roots().len(), 18);
    }

    #[test]
    fn reflections_preserve_roots_and_pairings_integral() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::D, 4), (Family::BC, 3)] {
            let rd = RootDatum::build_classical(f, n).unwrap();
            assert_eq!(rd.positive_indices().len() * 2, rd.roots().len());
            for i in 0..rd.roots().len() {
                assert!(rd.permutes_roots(&rd.reflection(i)));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let r = Root { vector: vec![1, 0], coroot: vec![1, 0], component: 0 };
        let neg = Root { vector: vec![-1, 0], coroot: vec![-1, 0], component: 0 };
        assert!(RootDatum::new(2, vec![r, neg], 1).is_err());
    }
}
