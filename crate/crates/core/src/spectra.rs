//! Finite-order torus points, twisted extended quotient counts, central
//! characters and the tempered/discrete classification.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{bail, Result};
use crate::linalg::{nullity, rat, solve};
use crate::parameter_engine::Side;
use crate::root_data::RootDatum;
use crate::weyl_groups::{
    cone_classify, point_linear_of, Cocycle, ExtendedGroup, ExtendedWeylElement, FiniteGroup,
};

/// The point `exp(2πi·v/N)` of the compact torus, stored with `N` minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteTorusPoint {
    order: usize,
    exponents: Vec<i64>,
}

impl FiniteTorusPoint {
    pub fn new(order: usize, exponents: Vec<i64>) -> Self {
        assert!(order >= 1, "torus point order must be positive");
        let n = order as i64;
        let reduced: Vec<i64> = exponents.iter().map(|x| x.rem_euclid(n)).collect();
        let g = reduced.iter().fold(n, |g, &x| g.gcd(&x));
        FiniteTorusPoint { order: (n / g) as usize, exponents: reduced.iter().map(|x| x / g).collect() }
    }

    pub fn identity(rank: usize) -> Self {
        FiniteTorusPoint { order: 1, exponents: vec![0; rank] }
    }

    /// Point with coordinates in `Q/Z`.
    pub fn from_rationals(coords: &[Rational64]) -> Self {
        let n = coords.iter().fold(1i64, |l, q| l.lcm(q.denom()));
        let exps = coords.iter().map(|q| (q * n).to_integer()).collect();
        FiniteTorusPoint::new(n as usize, exps)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Exponent vector with respect to a multiple `n` of the order.
    pub fn exponents_mod(&self, n: usize) -> Vec<i64> {
        assert_eq!(n % self.order, 0, "{n} is not a multiple of the point order");
        let f = (n / self.order) as i64;
        self.exponents.iter().map(|x| x * f).collect()
    }

    /// All points whose order divides `n`.
    pub fn all_of_order_dividing(rank: usize, n: usize) -> Vec<FiniteTorusPoint> {
        let total = n.pow(rank as u32);
        (0..total)
            .map(|mut k| {
                let exps = (0..rank)
                    .map(|_| {
                        let d = (k % n) as i64;
                        k /= n;
                        d
                    })
                    .collect();
                FiniteTorusPoint::new(n, exps)
            })
            .collect()
    }
}

/// `g` is ♮-regular when `♮(g,h) = ♮(h,g)` for every `h` commuting with `g`.
pub fn is_regular(group: &FiniteGroup, cocycle: &Cocycle, g: usize) -> bool {
    group.centralizer(g).into_iter().all(|h| cocycle.value(g, h) == cocycle.value(h, g))
}

/// Number of irreducible ♮-projective representations, counted as the
/// number of ♮-regular conjugacy classes.
pub fn count_twisted_irreps(group: &FiniteGroup, cocycle: &Cocycle) -> usize {
    group.conjugacy_classes().iter().filter(|c| is_regular(group, cocycle, c[0])).count()
}

/// Dimension of the center of the twisted group algebra with
/// `e_g e_h = ♮(g,h) e_{gh}`, from the commutation equations over Q.
pub fn twisted_center_dimension(group: &FiniteGroup, cocycle: &Cocycle) -> usize {
    let n = group.order();
    let mut rows = Vec::with_capacity(n * n);
    for h in 0..n {
        // coefficient of e_k in z e_h − e_h z, for z = Σ c_g e_g
        for k in 0..n {
            let mut row = vec![BigRational::zero(); n];
            let a = group.mul(k, group.inv(h));
            row[a] += rat(cocycle.value(a, h) as i64);
            let b = group.mul(group.inv(h), k);
            row[b] -= rat(cocycle.value(h, b) as i64);
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    nullity(&rows, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitCount {
    pub representative: FiniteTorusPoint,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub regular_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendedQuotientCount {
    pub total: usize,
    pub orbits: Vec<OrbitCount>,
}

/// `♮` restricted to a subgroup of `W ⋊ 𝕽` through the projection to 𝕽.
pub fn restricted_cocycle(cocycle: &Cocycle, elems: &[ExtendedWeylElement]) -> Cocycle {
    let table = elems.iter().map(|a| elems.iter().map(|b| cocycle.value(a.diagram, b.diagram)).collect()).collect();
    Cocycle::from_trusted_table(table)
}

/// Stabilizer of `t` in `W ⋊ 𝕽` as an abstract group with the restricted
/// cocycle.
pub fn stabilizer_group(g: &ExtendedGroup, cocycle: &Cocycle, t: &FiniteTorusPoint) -> (FiniteGroup, Cocycle) {
    let elems: Vec<ExtendedWeylElement> = g.elements().filter(|&e| g.act_on_point(e, t) == *t).collect();
    let (group, elems) = g.subgroup(&elems).expect("stabilizers are subgroups");
    let restricted = restricted_cocycle(cocycle, &elems);
    (group, restricted)
}

/// Size of the twisted extended quotient over the orbits of the given points
/// (closed under the group first).
pub fn extended_quotient_count(
    g: &ExtendedGroup,
    cocycle: &Cocycle,
    points: &[FiniteTorusPoint],
) -> Result<ExtendedQuotientCount> {
    let rank = g.datum().rank();
    if let Some(p) = points.iter().find(|p| p.rank() != rank) {
        bail!(Domain, "point of rank {} for a datum of rank {rank}", p.rank());
    }
    cocycle.validate(g.diagram().group())?;
    let mut seen: BTreeSet<FiniteTorusPoint> = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in points {
        if seen.contains(p) {
            continue;
        }
        let orbit: BTreeSet<FiniteTorusPoint> = g.elements().map(|e| g.act_on_point(e, p)).collect();
        let rep = orbit.iter().next().expect("orbits are nonempty").clone();
        let (stab, nat) = stabilizer_group(g, cocycle, &rep);
        orbits.push(OrbitCount {
            representative: rep,
            orbit_size: orbit.len(),
            stabilizer_order: stab.order(),
            regular_classes: count_twisted_irreps(&stab, &nat),
        });
        seen.extend(orbit);
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(ExtendedQuotientCount { total: orbits.iter().map(|o| o.regular_classes).sum(), orbits })
}

/// Central character of a standard module: the finite part `s` and the
/// real-split exponents of the Jordan cocharacter, as powers of `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralCharacterPoint {
    pub finite_part: FiniteTorusPoint,
    pub z_exponents: Vec<Rational64>,
}

impl CentralCharacterPoint {
    /// Lexicographically least point of the orbit under `W ⋊ 𝕽`.
    pub fn canonicalize(&self, g: &ExtendedGroup) -> CentralCharacterPoint {
        g.elements()
            .map(|e| CentralCharacterPoint {
                finite_part: g.act_on_point(e, &self.finite_part),
                z_exponents: point_linear_of(&g.matrix(e), &self.z_exponents).expect("group matrices are invertible"),
            })
            .min_by(|a, b| (&a.finite_part, &a.z_exponents).cmp(&(&b.finite_part, &b.z_exponents)))
            .expect("groups are nonempty")
    }
}

/// `gl_partitions[i]` partitions the i-th consecutive cluster of
/// coordinates; a part `p` places the weights `p−1, p−3, …, 1−p` on its
/// coordinates.
pub fn central_character(s: &FiniteTorusPoint, gl_partitions: &[Vec<usize>]) -> Result<CentralCharacterPoint> {
    let total: usize = gl_partitions.iter().flatten().sum();
    if total != s.rank() {
        bail!(Domain, "partitions cover {total} coordinates but the point has rank {}", s.rank());
    }
    if gl_partitions.iter().flatten().any(|&p| p == 0) {
        bail!(Domain, "partitions may not contain zero parts");
    }
    let mut z = Vec::with_capacity(total);
    for &p in gl_partitions.iter().flatten() {
        let p = p as i64;
        z.extend((0..p).map(|k| Rational64::from_integer(p - 1 - 2 * k)));
    }
    Ok(CentralCharacterPoint { finite_part: s.clone(), z_exponents: z })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tempered: bool,
    pub discrete_series: bool,
    pub essentially_discrete: bool,
}

/// Tempered: every weight in the closed antidominant obtuse cone. Discrete
/// series: every weight in its interior. Essentially discrete: the part of
/// each weight in the span of the coroots lies in the interior.
pub fn classify(weights: &[Vec<BigRational>], rd: &RootDatum) -> Result<Classification> {
    let mut out = Classification { tempered: true, discrete_series: true, essentially_discrete: true };
    let ns = rd.num_simple();
    for x in weights {
        let flags = cone_classify(rd, x)?;
        out.tempered &= flags.antidominant_obtuse;
        out.discrete_series &= flags.antidominant_obtuse_interior;
        if ns > 0 {
            // x_s = Σ c_k α_k∨ with ⟨α_j, x_s⟩ = ⟨α_j, x⟩
            let a: Vec<Vec<BigRational>> =
                (0..ns).map(|j| (0..ns).map(|k| rat(rd.cartan(k, j))).collect()).collect();
            let b: Vec<BigRational> = (0..ns)
                .map(|j| rd.simple_root(j).vector.iter().zip(x).map(|(v, c)| rat(*v) * c).sum())
                .collect();
            let c = solve(&a, &b).expect("Cartan matrices are invertible");
            out.essentially_discrete &= c.iter().all(|v| v.is_negative());
        }
    }
    Ok(out)
}

/// Unipotent classes meeting no proper Levi subgroup: one part for GL,
/// distinct even parts for Sp, distinct odd parts for SO.
pub fn is_distinguished(side: Side, partition: &[usize]) -> bool {
    let distinct = partition.iter().collect::<BTreeSet<_>>().len() == partition.len();
    match side {
        Side::GL => partition.len() == 1,
        Side::S => distinct && partition.iter().all(|p| p % 2 == 0),
        Side::O => distinct && partition.iter().all(|p| p % 2 == 1),
    }
}
