//! From inertial block data to the twisted affine Hecke algebra: root system
//! per block, Weyl group, R-group, parameters and the quadratic relations
//! after specialization.

use std::fmt::Write as _;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::hecke_algebras::{AffineDescriptor, RootParams};
use crate::linalg::{integer_kernel_basis, rat, solve, IntMatrix};
use crate::parameter_engine::{a_from_ell, cuspidal_d, gl_parameters, lambda_from_jordan, JordanParams, Side};
use crate::root_data::{Family, Root, RootDatum};
use crate::weyl_groups::{Cocycle, DiagramGenerator, DiagramGroup, ExtendedGroup, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupFamily {
    Sp,
    SOodd,
    SOeven,
    GL,
    SL,
}

impl GroupFamily {
    fn is_classical(self) -> bool {
        matches!(self, GroupFamily::Sp | GroupFamily::SOodd | GroupFamily::SOeven)
    }
}

/// `Sp` means `Sp(2n)`, `SOodd` means `SO(2n+1)`, `SOeven` means `SO(2n)`,
/// and `GL`/`SL` mean `GL_n(D)`/`SL_n(D)` with `D` of degree
/// `division_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub family: GroupFamily,
    pub n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub division_degree: Option<i64>,
}

/// Torsion number of a block, either known or kept as a symbol such as
/// `t(\tau)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Torsion {
    Known(i64),
    Symbolic(String),
}

/// One inertial block. On the GL side of a GL/SL datum, `d` is the
/// dimension of the SL₂-part of the cuspidal parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub side: Side,
    pub dim: i64,
    pub e: i64,
    #[serde(default)]
    pub ell: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner_ell: Option<i64>,
    pub torsion: Torsion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
}

impl BlockSpec {
    pub fn ell_total(&self) -> i64 {
        self.ell + self.partner_ell.unwrap_or(0)
    }

    fn sort_key(&self) -> impl Ord + '_ {
        (self.side, self.dim, self.e, self.ell, self.partner_ell, &self.torsion, self.d)
    }
}

/// A generator of the R-group of an SL datum, acting on the ambient
/// coordinates by a permutation followed by a translation in `Q/Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlGenerator {
    pub label: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlRGroup {
    pub generators: Vec<SlGenerator>,
    /// `±1` table over the elements in mixed-radix order (first generator
    /// fastest); trivial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<Vec<i8>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InertialDatum {
    pub group: GroupSpec,
    pub blocks: Vec<BlockSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl_rgroup: Option<SlRGroup>,
}

impl InertialDatum {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("malformed datum: {e}")))
    }
}

fn dual_dimension(g: &GroupSpec) -> i64 {
    match g.family {
        GroupFamily::Sp => 2 * g.n + 1,
        GroupFamily::SOodd | GroupFamily::SOeven => 2 * g.n,
        GroupFamily::GL | GroupFamily::SL => g.n,
    }
}

/// Checks every block against the admissibility rules and the rank
/// accounting, and returns the datum with blocks in canonical order.
pub fn validate(datum: &InertialDatum) -> Result<InertialDatum> {
    let mut errors = Vec::new();
    let g = &datum.group;
    if g.n < 0 {
        errors.push(format!("group rank n = {} is negative", g.n));
    }
    let division = g.division_degree.unwrap_or(1);
    if g.family.is_classical() && g.division_degree.is_some() {
        errors.push("division_degree applies only to GL and SL".into());
    }
    if division < 1 {
        errors.push(format!("division_degree = {division} must be positive"));
    }
    if datum.blocks.is_empty() {
        errors.push("at least one block is required".into());
    }
    match (g.family, &datum.sl_rgroup) {
        (GroupFamily::SL, None) => errors.push("an SL datum must supply sl_rgroup (use no generators for a trivial group)".into()),
        (f, Some(_)) if f != GroupFamily::SL => errors.push("sl_rgroup is only allowed for SL data".into()),
        _ => {}
    }
    let mut accounted = 0i64;
    for (i, b) in datum.blocks.iter().enumerate() {
        let name = format!("block {} ({} side, dim {}, e = {})", i + 1, b.side, b.dim, b.e);
        if b.dim < 1 {
            errors.push(format!("{name}: dim must be positive"));
        }
        if b.e < 0 {
            errors.push(format!("{name}: e must be nonnegative"));
        }
        match &b.torsion {
            Torsion::Known(t) if *t < 1 => errors.push(format!("{name}: torsion must be at least 1")),
            Torsion::Symbolic(s) if s.trim().is_empty() => errors.push(format!("{name}: empty torsion symbol")),
            _ => {}
        }
        if g.family.is_classical() {
            if b.d.is_some() {
                errors.push(format!("{name}: the field d applies only to GL and SL data"));
            }
            match b.side {
                Side::GL => {
                    if b.ell != 0 || b.partner_ell.is_some() {
                        errors.push(format!("{name}: GL-side blocks have ℓ = 0 and no partner"));
                    }
                    accounted += 2 * b.e * b.dim;
                }
                Side::S | Side::O => {
                    if let Err(e) = cuspidal_d(b.side, b.ell) {
                        errors.push(format!("{name}: {e}"));
                    }
                    if let Some(p) = b.partner_ell {
                        if let Err(e) = cuspidal_d(b.side, p) {
                            errors.push(format!("{name}: partner {e}"));
                        }
                    }
                    accounted += b.dim * (2 * b.e + b.ell_total());
                }
            }
        } else {
            if b.side != Side::GL || b.ell != 0 || b.partner_ell.is_some() {
                errors.push(format!("{name}: GL and SL data take GL-side blocks with ℓ = 0 and no partner"));
                continue;
            }
            let di = b.d.unwrap_or(1);
            if di < 1 {
                errors.push(format!("{name}: d must be positive"));
                continue;
            }
            if b.dim >= 1 && division >= 1 {
                if (b.dim * di) % division != 0 {
                    errors.push(format!("{name}: dim·d = {} is not divisible by the division degree {division}", b.dim * di));
                } else if b.dim.lcm(&division) != b.dim * di {
                    errors.push(format!(
                        "{name}: not cuspidal, lcm(division degree, dim) = {} but dim·d = {}",
                        b.dim.lcm(&division),
                        b.dim * di
                    ));
                }
                accounted += b.e * b.dim * di / division;
            }
        }
    }
    let expected = dual_dimension(g);
    if errors.is_empty() && accounted != expected {
        let what = if g.family.is_classical() { "dual dimension" } else { "m" };
        errors.push(format!("rank mismatch: the blocks account for {accounted} but the {what} is {expected}"));
    }
    if !errors.is_empty() {
        return Err(Error::Validation(errors.join("; ")));
    }
    let mut out = datum.clone();
    out.blocks.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

/// Root system attached to a block, or `None` when it is empty. For the O
/// side `D1` stands for the rank-one torus without roots.
pub fn root_component(side: Side, e: i64, ell_total: i64) -> Option<(Family, usize)> {
    let e = usize::try_from(e).ok()?;
    match side {
        Side::GL if e <= 1 => None,
        Side::GL => Some((Family::A, e - 1)),
        _ if e == 0 => None,
        Side::S if ell_total == 0 => Some((Family::C, e)),
        Side::S => Some((Family::BC, e)),
        Side::O if ell_total == 0 => Some((Family::D, e)),
        Side::O => Some((Family::B, e)),
    }
}

fn family_name(f: Family, n: usize) -> String {
    format!("{f}{n}")
}

fn reduced_family(f: Family) -> Family {
    if f == Family::BC {
        Family::B
    } else {
        f
    }
}

const GREEK: [&str; 24] = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda", "mu", "nu", "xi",
    "omicron", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
];

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub index: usize,
    pub side: Side,
    pub dim: i64,
    pub e: i64,
    pub ell: i64,
    pub partner_ell: Option<i64>,
    pub torsion: Torsion,
    pub root_system: Option<String>,
    pub reduced_root_system: Option<String>,
    pub root_name: Option<String>,
    pub weyl_order: usize,
    /// Order of the Weyl group together with the R-group element `r_τ`
    /// attached to this block, if any.
    pub extended_weyl_order: usize,
    pub jordan: Option<JordanParams>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleRootReport {
    pub label: String,
    pub latex: String,
    pub block: usize,
    pub vector: Vec<i64>,
    pub lambda: i64,
    pub lambda_star: Option<i64>,
    pub halvable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub root: String,
    pub lambda: i64,
    pub torsion: Torsion,
    /// Exponent of `q`, e.g. `3t(\tau)` or `5`.
    pub exponent: String,
    pub latex: String,
}

/// The character lattice of an SL datum as a sublattice of the ambient
/// `Z^N`: basis vectors and the order of the kernel of the center.
#[derive(Debug, Clone, Serialize)]
pub struct SublatticeReport {
    pub basis: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
    pub center_kernel_order: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeReport {
    pub group: GroupSpec,
    pub root_system: String,
    pub reduced_root_system: String,
    pub torus_dim: usize,
    pub lattice_rank: usize,
    pub num_z_vars: usize,
    pub weyl_order: usize,
    pub rgroup_order: usize,
    pub group_order: usize,
    pub rgroup_structure: String,
    pub rgroup_elements: Vec<String>,
    pub blocks: Vec<BlockReport>,
    pub simple_roots: Vec<SimpleRootReport>,
    pub specialization: Vec<Relation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sublattice: Option<SublatticeReport>,
    #[serde(skip)]
    pub descriptor: AffineDescriptor,
}

fn block_datum(family: Option<(Family, usize)>, e: usize) -> Result<RootDatum> {
    match family {
        None | Some((Family::D, 1)) => RootDatum::empty(e, 1),
        Some((f, n)) => RootDatum::build_classical(f, n),
    }
}

fn exponent_text(lambda: i64, t: &Torsion) -> String {
    match t {
        Torsion::Known(t) => (lambda * t).to_string(),
        Torsion::Symbolic(s) if lambda == 1 => s.clone(),
        Torsion::Symbolic(s) => format!("{lambda}{s}"),
    }
}

fn relation_latex(root: &str, exponent: &str) -> String {
    let q = if exponent == "1" { "q".to_string() } else { format!("q^{{{exponent}}}") };
    format!("(T_{{s_{{{root}}}}}-{q})(T_{{s_{{{root}}}}}+1)=0")
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let parsed = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<i64>().ok().zip(b.trim().parse::<i64>().ok()).filter(|(_, b)| *b != 0),
        None => s.trim().parse::<i64>().ok().map(|a| (a, 1)),
    };
    match parsed {
        Some((a, b)) => Ok(Rational64::new(a, b)),
        None => bail!(Validation, "cannot parse the rational number {s:?}"),
    }
}

struct Lattice {
    datum: RootDatum,
    sublattice: Option<(Vec<Vec<i64>>, SublatticeReport)>,
}

/// Restricts a GL-type datum on `Z^N` to the characters orthogonal to
/// `weights`, written in an integral basis of that sublattice.
fn restrict_to_kernel(ambient: &RootDatum, weights: &[i64]) -> Result<Lattice> {
    let basis = integer_kernel_basis(weights);
    let n = ambient.rank();
    let r = basis.len();
    let cols: Vec<Vec<BigRational>> = (0..n).map(|i| basis.iter().map(|b| rat(b[i])).collect()).collect();
    let coords = |v: &[i64]| -> Result<Vec<i64>> {
        let x = solve(&cols, &v.iter().map(|&c| rat(c)).collect::<Vec<_>>())
            .ok_or_else(|| Error::Internal(format!("{v:?} is not in the sublattice")))?;
        x.iter()
            .map(|q| if q.is_integer() { Ok(i64::try_from(q.to_integer()).expect("small coordinates")) } else { Err(Error::Internal(format!("{v:?} has non-integral coordinates"))) })
            .collect()
    };
    let mut roots = Vec::new();
    for root in ambient.roots() {
        let vector = coords(&root.vector)?;
        let coroot = basis.iter().map(|b| b.iter().zip(&root.coroot).map(|(x, y)| x * y).sum()).collect();
        roots.push(Root { vector, coroot, component: root.component });
    }
    let datum = RootDatum::new(r, roots, ambient.num_z_vars())?;
    let g = weights.iter().fold(0i64, |g, &w| g.gcd(&w));
    let report = SublatticeReport { basis: basis.clone(), weights: weights.to_vec(), center_kernel_order: g.max(1) };
    Ok(Lattice { datum, sublattice: Some((basis, report)) })
}

/// Assembles the algebra for a datum; the datum is validated first.
pub fn assemble(datum: &InertialDatum) -> Result<HeckeReport> {
    let datum = validate(datum)?;
    let family = datum.group.family;
    let classical = family.is_classical();

    let mut blocks = Vec::new();
    let mut ambient = RootDatum::empty(0, 0)?;
    let mut offsets = Vec::new();
    let mut greek = GREEK.iter();
    for (i, b) in datum.blocks.iter().enumerate() {
        let comp = root_component(b.side, b.e, b.ell_total());
        let e = b.e as usize;
        let bd = block_datum(comp, e)?;
        offsets.push(ambient.rank());
        ambient = RootDatum::product(&ambient, &bd)?;
        let weyl_order = WeylGroup::enumerate(Arc::new(bd.clone()))?.order();
        let jordan = match comp {
            Some((Family::B | Family::BC, _)) => {
                let a = a_from_ell(b.side, b.ell)?;
                let a2 = a_from_ell(b.side, b.partner_ell.unwrap_or(0))?;
                Some(lambda_from_jordan(a, a2)?)
            }
            _ => None,
        };
        let root_name = if bd.num_simple() > 0 {
            Some(greek.next().ok_or_else(|| Error::Validation("too many blocks with roots to name".into()))?.to_string())
        } else {
            None
        };
        blocks.push(BlockReport {
            index: i + 1,
            side: b.side,
            dim: b.dim,
            e: b.e,
            ell: b.ell,
            partner_ell: b.partner_ell,
            torsion: b.torsion.clone(),
            root_system: comp.filter(|c| *c != (Family::D, 1)).map(|(f, n)| family_name(f, n)),
            reduced_root_system: comp.filter(|c| *c != (Family::D, 1)).map(|(f, n)| family_name(reduced_family(f), n)),
            root_name,
            weyl_order,
            extended_weyl_order: weyl_order,
            jordan,
        });
    }

    // lambda per block on non-halvable roots
    let block_lambda: Vec<i64> = datum
        .blocks
        .iter()
        .map(|b| if classical { Ok(1) } else { gl_parameters(b.d.unwrap_or(1), 1).map(|p| p.0) })
        .collect::<Result<_>>()?;

    let lattice = if family == GroupFamily::SL {
        let weights: Vec<i64> = datum
            .blocks
            .iter()
            .flat_map(|b| {
                let t = match b.torsion {
                    Torsion::Known(t) => t,
                    Torsion::Symbolic(_) => 0,
                };
                std::iter::repeat(t).take(b.e as usize)
            })
            .collect();
        if weights.contains(&0) {
            bail!(Validation, "SL data need numeric torsion numbers to build the quotient torus");
        }
        restrict_to_kernel(&ambient, &weights)?
    } else {
        Lattice { datum: ambient.clone(), sublattice: None }
    };
    let rd = Arc::new(lattice.datum);
    let rank = rd.rank();

    // R-group
    let (diagram, cocycle) = if classical {
        classical_rgroup(&datum, &offsets, rank, &mut blocks)?
    } else if let (Some(sl), Some((basis, _))) = (&datum.sl_rgroup, &lattice.sublattice) {
        sl_rgroup(sl, basis, ambient.rank())?
    } else {
        (DiagramGroup::trivial(rank), Cocycle::trivial(1))
    };

    let weyl = WeylGroup::enumerate(rd.clone())?;
    let weyl_order = weyl.order();
    let rgroup_order = diagram.order();
    let rgroup_elements = diagram.labels().to_vec();
    let group = Arc::new(ExtendedGroup::new(weyl, diagram)?);

    let mut simple_params = Vec::new();
    let mut simple_roots = Vec::new();
    let mut per_block_count = vec![0usize; blocks.len()];
    for k in 0..rd.num_simple() {
        let root = rd.simple_root(k);
        let b = root.component;
        let halvable = root.coroot.iter().all(|c| c % 2 == 0);
        let params = if halvable && !classical {
            // coroots of SL lattices can be halvable; both affine nodes carry the same parameter
            RootParams::halvable(block_lambda[b], block_lambda[b])
        } else if halvable {
            let j = blocks[b].jordan.ok_or_else(|| {
                Error::Internal(format!("halvable simple root {:?} in a block without Jordan data", root.vector))
            })?;
            RootParams::halvable(j.pair.lambda, j.pair.lambda_star)
        } else {
            RootParams::equal(block_lambda[b])
        };
        per_block_count[b] += 1;
        let name = blocks[b].root_name.clone().expect("blocks with roots are named");
        simple_roots.push(SimpleRootReport {
            label: format!("{name}_{}", per_block_count[b]),
            latex: format!("\\{name}_{}", per_block_count[b]),
            block: b + 1,
            vector: root.vector.clone(),
            lambda: params.lambda,
            lambda_star: params.lambda_star,
            halvable,
        });
        simple_params.push(params);
    }
    let descriptor = AffineDescriptor::new(group, &simple_params, cocycle)?;

    let specialization = simple_roots
        .iter()
        .map(|s| {
            let b = &datum.blocks[s.block - 1];
            let exponent = if classical {
                exponent_text(s.lambda, &b.torsion)
            } else {
                // f_i = d_i t_i
                exponent_text(block_lambda[s.block - 1], &b.torsion)
            };
            Relation {
                root: s.latex.clone(),
                lambda: s.lambda,
                torsion: b.torsion.clone(),
                latex: relation_latex(&s.latex, &exponent),
                exponent,
            }
        })
        .collect();

    let join = |names: Vec<String>| if names.is_empty() { "empty".to_string() } else { names.join(" x ") };
    let root_system = join(blocks.iter().filter_map(|b| b.root_system.clone()).collect());
    let reduced_root_system = join(blocks.iter().filter_map(|b| b.reduced_root_system.clone()).collect());
    let rgroup_structure = match rgroup_order {
        1 => "trivial".to_string(),
        n if n.is_power_of_two() && classical => format!("(Z/2)^{}", n.trailing_zeros()),
        n => format!("order {n}"),
    };
    Ok(HeckeReport {
        group: datum.group.clone(),
        root_system,
        reduced_root_system,
        torus_dim: datum.blocks.iter().map(|b| b.e as usize).sum(),
        lattice_rank: rank,
        num_z_vars: rd.num_z_vars(),
        weyl_order,
        rgroup_order,
        group_order: weyl_order * rgroup_order,
        rgroup_structure,
        rgroup_elements,
        blocks,
        simple_roots,
        specialization,
        sublattice: lattice.sublattice.map(|(_, r)| r),
        descriptor,
    })
}

/// `r_τ` flips the sign of the last coordinate of each O-block with
/// `e ≥ 1` and `ℓ_total = 0`. For `SO(2n)` with a Levi made of GL factors
/// only, odd-dimensional blocks contribute the products `r_τ r_τ′`.
fn classical_rgroup(
    datum: &InertialDatum,
    offsets: &[usize],
    rank: usize,
    blocks: &mut [BlockReport],
) -> Result<(DiagramGroup, Cocycle)> {
    let c: Vec<usize> = datum
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.side == Side::O && b.e >= 1 && b.ell_total() == 0)
        .map(|(i, _)| i)
        .collect();
    let flip = |i: usize| {
        let pos = offsets[i] + datum.blocks[i].e as usize - 1;
        let mut rows = IntMatrix::identity(rank).rows();
        rows[pos][pos] = -1;
        IntMatrix::from_rows(&rows).expect("square")
    };
    for &i in &c {
        blocks[i].extended_weyl_order = 2 * blocks[i].weyl_order;
    }
    let pure_gl = datum.blocks.iter().all(|b| b.ell_total() == 0);
    let mut gens = Vec::new();
    let zero = || vec![Rational64::zero(); rank];
    if datum.group.family == GroupFamily::SOeven && pure_gl {
        let (even, odd): (Vec<usize>, Vec<usize>) = c.iter().partition(|&&i| datum.blocks[i].dim % 2 == 0);
        for i in even {
            gens.push(DiagramGenerator { label: format!("r{}", i + 1), matrix: flip(i), translation: zero(), order: 2 });
        }
        if let Some((&first, rest)) = odd.split_first() {
            for &i in rest {
                gens.push(DiagramGenerator {
                    label: format!("r{}r{}", first + 1, i + 1),
                    matrix: flip(first).mul(&flip(i)),
                    translation: zero(),
                    order: 2,
                });
            }
        }
    } else {
        for &i in &c {
            gens.push(DiagramGenerator { label: format!("r{}", i + 1), matrix: flip(i), translation: zero(), order: 2 });
        }
    }
    let dg = DiagramGroup::abelian(rank, gens)?;
    let n = dg.order();
    Ok((dg, Cocycle::trivial(n)))
}

fn sl_rgroup(sl: &SlRGroup, basis: &[Vec<i64>], ambient_rank: usize) -> Result<(DiagramGroup, Cocycle)> {
    let r = basis.len();
    let cols: Vec<Vec<BigRational>> = (0..ambient_rank).map(|i| basis.iter().map(|b| rat(b[i])).collect()).collect();
    let mut gens = Vec::new();
    for g in &sl.generators {
        let perm = g.permutation.clone().unwrap_or_else(|| (0..ambient_rank).collect());
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (0..ambient_rank).collect::<Vec<_>>() {
            bail!(Validation, "R-group generator {}: {perm:?} is not a permutation of {ambient_rank} coordinates", g.label);
        }
        let p = IntMatrix::permutation(&perm);
        // matrix in the sublattice basis: columns are coordinates of P b_j
        let mut rows = vec![vec![0i64; r]; r];
        for (j, b) in basis.iter().enumerate() {
            let img = p.apply(b);
            let x = solve(&cols, &img.iter().map(|&c| rat(c)).collect::<Vec<_>>()).ok_or_else(|| {
                Error::Validation(format!("R-group generator {} does not preserve the character lattice", g.label))
            })?;
            for (i, q) in x.iter().enumerate() {
                if !q.is_integer() {
                    bail!(Validation, "R-group generator {} does not preserve the character lattice", g.label);
                }
                rows[i][j] = i64::try_from(q.to_integer()).expect("small coordinates");
            }
        }
        let matrix = IntMatrix::from_rows(&rows)?;
        let translation = match &g.translation {
            None => vec![Rational64::zero(); r],
            Some(t) => {
                if t.len() != ambient_rank {
                    bail!(Validation, "R-group generator {}: translation needs {ambient_rank} entries", g.label);
                }
                let v: Vec<Rational64> = t.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
                // point coordinates on the quotient torus: ⟨b_j, v⟩
                basis
                    .iter()
                    .map(|b| {
                        let s: Rational64 = b.iter().zip(&v).map(|(x, y)| Rational64::from_integer(*x) * y).sum();
                        s - s.floor()
                    })
                    .collect()
            }
        };
        gens.push(DiagramGenerator { label: g.label.clone(), matrix, translation, order: g.order });
    }
    let dg = DiagramGroup::abelian(r, gens)?;
    let cocycle = match &sl.cocycle {
        None => Cocycle::trivial(dg.order()),
        Some(t) => Cocycle::from_table(t.clone(), dg.group())?,
    };
    Ok((dg, cocycle))
}

/// A quadratic relation after `z_τ = q^{t(τ)/2}`, with the value of
/// `q^{m_α}` when the torsion number is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecializedRelation {
    pub root: String,
    pub exponent: String,
    pub latex: String,
    pub value: Option<String>,
}

pub fn specialize_report(report: &HeckeReport, q: &BigRational) -> Result<Vec<SpecializedRelation>> {
    if q <= &BigRational::zero() {
        bail!(Domain, "q must be positive");
    }
    Ok(report
        .specialization
        .iter()
        .map(|r| {
            let value = match r.exponent.parse::<u32>() {
                Ok(m) => Some(Pow::pow(q, m).to_string()),
                Err(_) => None,
            };
            SpecializedRelation { root: r.root.clone(), exponent: r.exponent.clone(), latex: r.latex.clone(), value }
        })
        .collect())
}

impl HeckeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let g = &self.group;
        let _ = writeln!(s, "group: {:?} n={}", g.family, g.n);
        let _ = writeln!(s, "root system: {} (reduced {})", self.root_system, self.reduced_root_system);
        let _ = writeln!(s, "torus dimension: {}", self.torus_dim);
        let _ = writeln!(s, "Weyl group order: {}", self.weyl_order);
        let _ = writeln!(s, "R-group: {} ({})", self.rgroup_structure, self.rgroup_elements.join(", "));
        let _ = writeln!(s, "extended group order: {}", self.group_order);
        for b in &self.blocks {
            let _ = writeln!(
                s,
                "block {}: {} dim={} e={} ell={} partner_ell={} -> {} (W order {}, with R-part {})",
                b.index,
                b.side,
                b.dim,
                b.e,
                b.ell,
                b.partner_ell.map_or("-".into(), |p| p.to_string()),
                b.root_system.clone().unwrap_or_else(|| "no roots".into()),
                b.weyl_order,
                b.extended_weyl_order
            );
        }
        for r in &self.simple_roots {
            let star = r.lambda_star.map_or(String::new(), |l| format!(", lambda*={l}"));
            let _ = writeln!(s, "  {} {:?}: lambda={}{}", r.label, r.vector, r.lambda, star);
        }
        let _ = writeln!(s, "quadratic relations:");
        for r in &self.specialization {
            let _ = writeln!(s, "  {}", r.latex);
        }
        s
    }
}

/// Built-in data, by name.
pub const EXAMPLES: &[(&str, &str)] = &[
    (
        "sp58",
        r#"{"group": {"family": "Sp", "n": 29},
            "blocks": [{"side": "S", "dim": 4, "e": 2, "ell": 6, "partner_ell": 0, "torsion": "t(\\tau)"},
                       {"side": "O", "dim": 1, "e": 3, "ell": 9, "partner_ell": 4, "torsion": 1}]}"#,
    ),
    (
        "gl-a2",
        r#"{"group": {"family": "GL", "n": 3, "division_degree": 2},
            "blocks": [{"side": "GL", "dim": 1, "e": 3, "d": 2, "torsion": 1}]}"#,
    ),
    (
        "gl-mixed",
        r#"{"group": {"family": "GL", "n": 7},
            "blocks": [{"side": "GL", "dim": 1, "e": 3, "torsion": 1},
                       {"side": "GL", "dim": 2, "e": 2, "torsion": 2}]}"#,
    ),
    (
        "gl-cuspidal",
        r#"{"group": {"family": "GL", "n": 3},
            "blocks": [{"side": "GL", "dim": 1, "e": 1, "torsion": 1},
                       {"side": "GL", "dim": 2, "e": 1, "torsion": 2}]}"#,
    ),
    (
        "so-even-gl",
        r#"{"group": {"family": "SOeven", "n": 3},
            "blocks": [{"side": "O", "dim": 1, "e": 2, "torsion": 1},
                       {"side": "O", "dim": 1, "e": 1, "torsion": 2}]}"#,
    ),
    (
        "sp-iwahori",
        r#"{"group": {"family": "Sp", "n": 2},
            "blocks": [{"side": "O", "dim": 1, "e": 2, "ell": 1, "torsion": 1}]}"#,
    ),
    (
        "sp2",
        r#"{"group": {"family": "Sp", "n": 1},
            "blocks": [{"side": "O", "dim": 1, "e": 1, "ell": 1, "torsion": 1}]}"#,
    ),
    (
        "gl1",
        r#"{"group": {"family": "GL", "n": 1},
            "blocks": [{"side": "GL", "dim": 1, "e": 1, "torsion": 1}]}"#,
    ),
    (
        "sl2",
        r#"{"group": {"family": "SL", "n": 2},
            "blocks": [{"side": "GL", "dim": 1, "e": 2, "torsion": 1}],
            "sl_rgroup": {"generators": []}}"#,
    ),
];

pub fn example(name: &str) -> Result<InertialDatum> {
    match EXAMPLES.iter().find(|(n, _)| *n == name) {
        Some((_, json)) => InertialDatum::from_json(json),
        None => {
            let names: Vec<&str> = EXAMPLES.iter().map(|(n, _)| *n).collect();
            bail!(Validation, "unknown example {name:?}; available: {}", names.join(", "))
        }
    }
}

/// `q^{m}` as a rational, for tests of the specialization.
pub fn rational_power(q: &BigRational, m: i64) -> BigRational {
    if m >= 0 {
        Pow::pow(q, m as u32)
    } else {
        BigRational::one() / Pow::pow(q, (-m) as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp58_report() {
        let r = assemble(&example("sp58").unwrap()).unwrap();
        assert_eq!(r.reduced_root_system, "B2 x B3");
        assert_eq!(r.root_system, "BC2 x B3");
        assert_eq!((r.weyl_order, r.rgroup_order, r.torus_dim), (384, 1, 5));
        let lams: Vec<(i64, Option<i64>)> = r.simple_roots.iter().map(|s| (s.lambda, s.lambda_star)).collect();
        assert_eq!(lams, vec![(1, None), (3, Some(2)), (1, None), (1, None), (5, Some(1))]);
        let rels: Vec<&str> = r.specialization.iter().map(|s| s.latex.as_str()).collect();
        assert_eq!(
            rels,
            vec![
                r"(T_{s_{\alpha_1}}-q^{t(\tau)})(T_{s_{\alpha_1}}+1)=0",
                r"(T_{s_{\alpha_2}}-q^{3t(\tau)})(T_{s_{\alpha_2}}+1)=0",
                r"(T_{s_{\beta_1}}-q)(T_{s_{\beta_1}}+1)=0",
                r"(T_{s_{\beta_2}}-q)(T_{s_{\beta_2}}+1)=0",
                r"(T_{s_{\beta_3}}-q^{5})(T_{s_{\beta_3}}+1)=0",
            ]
        );
    }

    #[test]
    fn block_order_does_not_matter() {
        let mut d = example("sp58").unwrap();
        let a = assemble(&d).unwrap().to_json();
        d.blocks.reverse();
        assert_eq!(assemble(&d).unwrap().to_json(), a);
    }

    #[test]
    fn validation_messages() {
        let mut d = example("sp58").unwrap();
        d.blocks[0].ell = 5;
        let err = validate(&d).unwrap_err().to_string();
        assert!(err.contains("d(d+1)"), "{err}");
        let mut d = example("gl-mixed").unwrap();
        d.group.n = 8;
        assert!(validate(&d).unwrap_err().to_string().contains("rank mismatch"));
        assert!(InertialDatum::from_json(r#"{"group": {"family": "GL", "n": 1}, "blocks": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn table_rows() {
        assert_eq!(root_component(Side::S, 2, 6), Some((Family::BC, 2)));
        assert_eq!(root_component(Side::O, 3, 13), Some((Family::B, 3)));
        assert_eq!(root_component(Side::GL, 1, 0), None);
        assert_eq!(root_component(Side::O, 0, 0), None);
        assert_eq!(root_component(Side::O, 4, 0), Some((Family::D, 4)));
        assert_eq!(root_component(Side::S, 3, 0), Some((Family::C, 3)));
    }

    #[test]
    fn rgroups() {
        let r = assemble(&example("so-even-gl").unwrap()).unwrap();
        // both blocks odd-dimensional: only r1 r2
        assert_eq!(r.rgroup_order, 2);
        assert_eq!(r.rgroup_elements, vec!["e".to_string(), "r1r2".to_string()]);
        let sp = InertialDatum::from_json(
            r#"{"group": {"family": "Sp", "n": 1},
                "blocks": [{"side": "O", "dim": 1, "e": 1, "torsion": 1},
                           {"side": "O", "dim": 1, "e": 0, "ell": 1, "torsion": 2}]}"#,
        )
        .unwrap();
        let r = assemble(&sp).unwrap();
        assert_eq!((r.rgroup_order, r.weyl_order), (2, 1));
    }

    #[test]
    fn gl_and_sl() {
        let r = assemble(&example("gl-a2").unwrap()).unwrap();
        assert_eq!((r.root_system.as_str(), r.weyl_order), ("A2", 6));
        assert!(r.simple_roots.iter().all(|s| s.lambda == 2));
        assert!(r.specialization.iter().all(|s| s.exponent == "2"));
        let c = assemble(&example("gl-cuspidal").unwrap()).unwrap();
        assert_eq!((c.root_system.as_str(), c.weyl_order, c.torus_dim), ("empty", 1, 2));
        let sl = assemble(&example("sl2").unwrap()).unwrap();
        assert_eq!((sl.lattice_rank, sl.weyl_order), (1, 2));
        let s = &sl.simple_roots[0];
        assert_eq!((s.vector.len(), s.vector[0].abs(), s.halvable, s.lambda_star), (1, 1, true, Some(1)));
        assert_eq!(sl.sublattice.as_ref().unwrap().center_kernel_order, 1);
    }

    #[test]
    fn quadratic_relation_after_specialization() {
        use crate::hecke_algebras::{specialize, HeckeElement};
        use crate::weyl_groups::ExtendedWeylElement;
        // q = 4, so z_τ = q^{t(τ)/2} = 2^{t(τ)} and T_s = z^λ N_s
        let q = BigRational::from_integer(4.into());
        let two = BigRational::from_integer(2.into());
        for name in ["gl-a2", "gl-mixed", "sp-iwahori"] {
            let r = assemble(&example(name).unwrap()).unwrap();
            let d = &r.descriptor;
            let tors: Vec<i64> = r.blocks.iter().map(|b| match b.torsion { Torsion::Known(t) => t, _ => 1 }).collect();
            let z: Vec<BigRational> = tors.iter().map(|&t| rational_power(&two, t)).collect();
            let vals = specialize_report(&r, &q).unwrap();
            for (k, (s, v)) in r.simple_roots.iter().zip(&vals).enumerate() {
                if s.halvable {
                    continue;
                }
                let n = HeckeElement::simple(d, k);
                let sq = specialize(d, &d.multiply(&n, &n).unwrap(), &z).unwrap();
                let t = rational_power(&z[s.block - 1], s.lambda);
                let qm: BigRational = v.value.as_ref().unwrap().parse().unwrap();
                assert_eq!(qm, rational_power(&q, s.lambda * tors[s.block - 1]));
                let su = ExtendedWeylElement { weyl: d.group().weyl().simple(k), diagram: 0 };
                let zero = vec![0; d.rank()];
                // T² = (q^m − 1)T + q^m
                assert_eq!(&t * &t * sq.coefficient(su, &zero), (&qm - BigRational::one()) * &t, "{name} {}", s.label);
                assert_eq!(&t * &t * sq.coefficient(ExtendedWeylElement::IDENTITY, &zero), qm, "{name} {}", s.label);
            }
        }
    }
}
