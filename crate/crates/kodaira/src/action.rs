//! Exact models of fiber curves with coordinate charts, diagonal
//! automorphisms of curve × abelian-part, freeness checking, and
//! classification of free quotients into multiple fiber types.
//!
//! Roots of unity are stored by exponent in ℚ/ℤ ("e(c)" denotes exp(2πi c)),
//! translations are tuples in (ℚ/ℤ)^g, and elliptic curves are symbols: a
//! j-invariant tag plus the integer matrix by which the canonical
//! automorphism generator acts on torsion points.

use crate::abelian::FgAbelianGroup;
use crate::config::KodairaCurveType;
use crate::types::{ExceptionalTag, KodairaType, MultipleSubtype};
use crate::{Error, Result};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exact rational modulo 1, normalized to [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Qz(Ratio<i64>);

impl Qz {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        Qz(reduce_mod_1(Ratio::new(num, den)))
    }

    pub fn zero() -> Self {
        Qz(Ratio::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Qz) -> Qz {
        Qz(reduce_mod_1(self.0 + other.0))
    }

    pub fn neg(&self) -> Qz {
        Qz(reduce_mod_1(-self.0))
    }

    pub fn scale(&self, k: i64) -> Qz {
        Qz(reduce_mod_1(self.0 * Ratio::from_integer(k)))
    }

    /// One of the two square roots of the represented root of unity
    /// (exponent halving); the other root differs by 1/2.
    pub fn half(&self) -> Qz {
        Qz(reduce_mod_1(self.0 / Ratio::from_integer(2)))
    }

    /// Multiplicative order of e(self).
    pub fn order(&self) -> u64 {
        *self.0.denom() as u64
    }
}

fn reduce_mod_1(r: Ratio<i64>) -> Ratio<i64> {
    let f = r.floor();
    r - f
}

impl fmt::Display for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl std::str::FromStr for Qz {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            return Ok(Qz::zero());
        }
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("bad rational {s:?}")))?;
        let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d: i64 = d.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Qz::new(n, d))
    }
}

/// Element of the torsion module (ℚ/ℤ)^g.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionElement(pub Vec<Qz>);

impl TorsionElement {
    pub fn zero(rank: usize) -> Self {
        TorsionElement(vec![Qz::zero(); rank])
    }

    /// Convenience: single coordinate of exact order n (the element 1/n).
    pub fn of_order(n: i64) -> Self {
        TorsionElement(vec![Qz::new(1, n)])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Qz::is_zero)
    }

    pub fn add(&self, other: &TorsionElement) -> TorsionElement {
        assert_eq!(self.rank(), other.rank(), "torsion rank mismatch");
        TorsionElement(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn scale(&self, k: i64) -> TorsionElement {
        TorsionElement(self.0.iter().map(|a| a.scale(k)).collect())
    }

    /// Exact order: lcm of the coordinate denominators.
    pub fn order(&self) -> u64 {
        self.0.iter().fold(1u64, |l, a| l.lcm(&a.order()))
    }
}

impl fmt::Display for TorsionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", coords.join(","))
    }
}

impl std::str::FromStr for TorsionElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad torsion element {s:?}")))?;
        let coords: Result<Vec<Qz>> = inner.split(',').map(|c| c.trim().parse()).collect();
        Ok(TorsionElement(coords?))
    }
}

/// Symbolic elliptic curve: only the j-invariant class matters, through the
/// order of the automorphism group and its action on torsion points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JTag {
    /// j = 0: automorphisms of order 6.
    Zero,
    /// j = 1728: automorphisms of order 4.
    J1728,
    /// Any other j: only ±1.
    Generic,
}

impl JTag {
    pub fn aut_order(self) -> u32 {
        match self {
            JTag::Zero => 6,
            JTag::J1728 => 4,
            JTag::Generic => 2,
        }
    }

    /// Action of the canonical automorphism generator on torsion points,
    /// as an integer 2×2 matrix.
    fn torsion_matrix(self) -> [[i64; 2]; 2] {
        match self {
            JTag::Zero => [[1, -1], [1, 0]],
            JTag::J1728 => [[0, -1], [1, 0]],
            JTag::Generic => [[-1, 0], [0, -1]],
        }
    }
}

/// Curve configurations that can serve as the curve factor of a fiber model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveModel {
    /// Cycle of `len >= 1` rational components, charts z_i, nodes ∞_i = 0_{i+1}.
    Cycle { len: u32 },
    /// Star of type I_r*: reduced tails E1..E4 and a doubled chain F_0..F_r.
    Star { r: u32 },
    /// Smooth elliptic curve symbol.
    SmoothElliptic { j: JTag },
    /// Any other marked unstable shape (II, III, IV, IV*, III*, II*), used
    /// for translation-only models and arm permutations.
    PointedShape { shape: KodairaCurveType },
}

impl CurveModel {
    /// Shape tag of the model.
    pub fn shape(&self) -> KodairaCurveType {
        match self {
            CurveModel::Cycle { len } => KodairaCurveType::I(*len),
            CurveModel::Star { r } => KodairaCurveType::IStar(*r),
            CurveModel::SmoothElliptic { .. } => KodairaCurveType::I(0),
            CurveModel::PointedShape { shape } => *shape,
        }
    }

    /// Number of permutable reduced arms for arm-permutation actions.
    fn arm_count(&self) -> Option<usize> {
        match self {
            CurveModel::Star { r: 0 } => Some(4),
            CurveModel::PointedShape { shape: KodairaCurveType::IV } => Some(3),
            CurveModel::PointedShape { shape: KodairaCurveType::IVStar } => Some(3),
            _ => None,
        }
    }
}

/// The restricted curve automorphism forms appearing in the classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvePart {
    Identity,
    /// On a cycle: `i -> shift ± i`, `z -> e(coeff)·e(twist)^i·z^(±1)`
    /// (`reflect` selects the `-i` / `1/z` form).
    CycleMap { shift: i64, reflect: bool, coeff: Qz, twist: Qz },
    /// On a smooth elliptic curve: `x -> w^rot·x + point`, w the canonical
    /// generator of the automorphism group.
    EllipticMap { rot: u32, point: (Qz, Qz) },
    /// On a star: fixes the tails, multiplies the chain chart F_j by
    /// `e(twist)^j`.
    StarChainTwist { twist: Qz },
    /// Permutation of the reduced arms (images, 0-based); the optional
    /// exponent tag records the action on the infinitesimal direction of the
    /// doubled core and is excluded from order computations.
    ArmPermutation { perm: Vec<u8>, infinitesimal: Option<Qz> },
}

impl CurvePart {
    fn is_identity(&self) -> bool {
        match self {
            CurvePart::Identity => true,
            CurvePart::CycleMap { .. } => false, // normalized away on compose
            CurvePart::EllipticMap { rot, point } => {
                *rot == 0 && point.0.is_zero() && point.1.is_zero()
            }
            CurvePart::StarChainTwist { twist } => twist.is_zero(),
            CurvePart::ArmPermutation { perm, .. } => {
                perm.iter().enumerate().all(|(i, &p)| p as usize == i)
            }
        }
    }
}

/// A diagonal automorphism of curve × abelian-part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalAutomorphism {
    pub curve: CurvePart,
    pub translation: TorsionElement,
}

impl DiagonalAutomorphism {
    pub fn translation_only(t: TorsionElement) -> Self {
        DiagonalAutomorphism { curve: CurvePart::Identity, translation: t }
    }
}

/// Check an automorphism is compatible with (well-defined on) a model.
pub fn check_compatible(a: &DiagonalAutomorphism, c: &CurveModel) -> Result<()> {
    match (&a.curve, c) {
        (CurvePart::Identity, _) => Ok(()),
        (CurvePart::CycleMap { twist, .. }, CurveModel::Cycle { len }) => {
            if !twist.scale(*len as i64).is_zero() {
                return Err(Error::ActionMismatch(format!(
                    "twist e({twist}) is not well-defined on a cycle of length {len}"
                )));
            }
            Ok(())
        }
        (CurvePart::EllipticMap { rot, .. }, CurveModel::SmoothElliptic { j }) => {
            if *rot >= j.aut_order() {
                return Err(Error::ActionMismatch(format!(
                    "rotation exponent {rot} exceeds the automorphism order {}",
                    j.aut_order()
                )));
            }
            Ok(())
        }
        (CurvePart::StarChainTwist { .. }, CurveModel::Star { .. }) => Ok(()),
        (CurvePart::ArmPermutation { perm, .. }, model) => {
            let n = model.arm_count().ok_or_else(|| {
                Error::ActionMismatch(format!("{:?} has no permutable arms", model.shape()))
            })?;
            let mut seen = vec![false; n];
            if perm.len() != n || perm.iter().any(|&p| p as usize >= n) {
                return Err(Error::ActionMismatch("permutation size mismatch".into()));
            }
            for &p in perm {
                seen[p as usize] = true;
            }
            if seen.iter().all(|&s| s) {
                Ok(())
            } else {
                Err(Error::ActionMismatch("not a permutation".into()))
            }
        }
        _ => Err(Error::ActionMismatch(format!(
            "curve part {:?} does not act on {:?}",
            a.curve, c
        ))),
    }
}

/// Compose two diagonal automorphisms on a common model (`a` after `b`).
pub fn compose(
    c: &CurveModel,
    a: &DiagonalAutomorphism,
    b: &DiagonalAutomorphism,
) -> Result<DiagonalAutomorphism> {
    check_compatible(a, c)?;
    check_compatible(b, c)?;
    let curve = compose_curve(c, &a.curve, &b.curve)?;
    Ok(DiagonalAutomorphism { curve, translation: a.translation.add(&b.translation) })
}

fn compose_curve(c: &CurveModel, a: &CurvePart, b: &CurvePart) -> Result<CurvePart> {
    use CurvePart::*;
    let composed = match (a, b) {
        (Identity, x) | (x, Identity) => x.clone(),
        (
            CycleMap { shift: s1, reflect: r1, coeff: c1, twist: t1 },
            CycleMap { shift: s2, reflect: r2, coeff: c2, twist: t2 },
        ) => {
            let e1 = if *r1 { -1i64 } else { 1 };
            let e2 = if *r2 { -1i64 } else { 1 };
            // (a∘b)(i) = s1 + e1·(s2 + e2·i)
            // z-part: e(c1 + s2·t1 + e1·c2) · e(e2·t1 + e1·t2)^i · z^(e1·e2)
            let shift = s1 + e1 * s2;
            let coeff = c1.add(&t1.scale(*s2)).add(&c2.scale(e1));
            let twist = t1.scale(e2).add(&t2.scale(e1));
            let reflect = e1 * e2 == -1;
            normalize_cycle_map(c, shift, reflect, coeff, twist)
        }
        (EllipticMap { rot: e1, point: p1 }, EllipticMap { rot: e2, point: p2 }) => {
            let CurveModel::SmoothElliptic { j } = c else {
                return Err(Error::ActionMismatch("elliptic map outside elliptic model".into()));
            };
            let rot = (e1 + e2) % j.aut_order();
            let moved = apply_matrix_power(j.torsion_matrix(), *e1 as i64, p2);
            let point = (moved.0.add(&p1.0), moved.1.add(&p1.1));
            EllipticMap { rot, point }
        }
        (StarChainTwist { twist: t1 }, StarChainTwist { twist: t2 }) => {
            StarChainTwist { twist: t1.add(t2) }
        }
        (
            ArmPermutation { perm: p1, infinitesimal: i1 },
            ArmPermutation { perm: p2, infinitesimal: i2 },
        ) => {
            let perm = p2.iter().map(|&x| p1[x as usize]).collect();
            let infinitesimal = match (i1, i2) {
                (None, None) => None,
                (a, b) => {
                    let s = a.unwrap_or(Qz::zero()).add(&b.unwrap_or(Qz::zero()));
                    Some(s)
                }
            };
            ArmPermutation { perm, infinitesimal }
        }
        _ => {
            return Err(Error::UnclassifiedAction(
                "composition of heterogeneous curve actions".into(),
            ))
        }
    };
    Ok(if composed.is_identity() { Identity } else { composed })
}

/// Reduce a cycle map to a canonical representative: shift taken mod the
/// cycle length, and the identity recognized as `Identity`.
fn normalize_cycle_map(c: &CurveModel, shift: i64, reflect: bool, coeff: Qz, twist: Qz) -> CurvePart {
    let CurveModel::Cycle { len } = c else {
        return CurvePart::CycleMap { shift, reflect, coeff, twist };
    };
    let n = *len as i64;
    let shift = shift.mod_floor(&n);
    if !reflect && shift == 0 && coeff.is_zero() && twist.is_zero() {
        return CurvePart::Identity;
    }
    CurvePart::CycleMap { shift, reflect, coeff, twist }
}

fn apply_matrix_power(m: [[i64; 2]; 2], e: i64, p: &(Qz, Qz)) -> (Qz, Qz) {
    let mut out = *p;
    for _ in 0..e.max(0) {
        out = (
            out.0.scale(m[0][0]).add(&out.1.scale(m[0][1])),
            out.0.scale(m[1][0]).add(&out.1.scale(m[1][1])),
        );
    }
    out
}

const ORDER_CAP: u64 = 100_000;

/// Exact order of a diagonal automorphism on a model.
pub fn order(a: &DiagonalAutomorphism, c: &CurveModel) -> Result<u64> {
    check_compatible(a, c)?;
    let mut cur = a.clone();
    for k in 1..=ORDER_CAP {
        if cur.curve.is_identity() && cur.translation.is_zero() {
            return Ok(k);
        }
        cur = compose(c, &cur, a)?;
    }
    Err(Error::UnclassifiedAction(format!("order exceeds {ORDER_CAP}")))
}

/// The fixed marks of a curve automorphism (the translation part plays no
/// role here).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FixedLocus {
    /// The automorphism is the identity on the whole curve.
    pub whole_curve: bool,
    /// Components fixed pointwise.
    pub pointwise_components: Vec<usize>,
    /// Components preserved with isolated fixed points; each entry lists the
    /// symbolic chart coordinates of the fixed points (exponents of e(·)).
    pub component_points: Vec<(usize, Vec<Qz>)>,
    /// Fixed nodes / marked singular points.
    pub fixed_nodes: Vec<usize>,
    /// Set when the action is an elliptic rotation, which always has fixed
    /// points (1 - w^rot is an isogeny).
    pub elliptic_fixed_points: bool,
}

impl FixedLocus {
    pub fn is_empty(&self) -> bool {
        !self.whole_curve
            && !self.elliptic_fixed_points
            && self.pointwise_components.is_empty()
            && self.component_points.is_empty()
            && self.fixed_nodes.is_empty()
    }

    fn everything(c: &CurveModel) -> FixedLocus {
        let n = match c {
            CurveModel::Cycle { len } => *len as usize,
            CurveModel::Star { r } => *r as usize + 5,
            CurveModel::SmoothElliptic { .. } => 1,
            CurveModel::PointedShape { shape } => shape.component_count(),
        };
        let nodes = match c {
            CurveModel::Cycle { len } => *len as usize,
            _ => 1, // marked singular locus
        };
        FixedLocus {
            whole_curve: true,
            pointwise_components: (0..n).collect(),
            fixed_nodes: (0..nodes).collect(),
            ..Default::default()
        }
    }
}

/// Fixed locus of the curve part of `a` on `c`.
pub fn fixed_locus(a: &DiagonalAutomorphism, c: &CurveModel) -> Result<FixedLocus> {
    check_compatible(a, c)?;
    Ok(match (&a.curve, c) {
        (CurvePart::Identity, _) => FixedLocus::everything(c),
        (CurvePart::CycleMap { shift, reflect: false, coeff, twist }, CurveModel::Cycle { len }) => {
            let n = *len as i64;
            if shift.mod_floor(&n) != 0 {
                FixedLocus::default() // every component and node moves
            } else {
                let mut out = FixedLocus::default();
                out.fixed_nodes = (0..*len as usize).collect();
                for i in 0..n {
                    let lambda = coeff.add(&twist.scale(i));
                    if lambda.is_zero() {
                        out.pointwise_components.push(i as usize);
                    } else {
                        // z -> e(lambda) z fixes the chart points 0 and ∞,
                        // which are the adjacent nodes (already recorded).
                    }
                }
                out.whole_curve = out.pointwise_components.len() == *len as usize;
                out
            }
        }
        (CurvePart::CycleMap { shift, reflect: true, coeff, twist }, CurveModel::Cycle { len }) => {
            let n = *len as i64;
            let mut out = FixedLocus::default();
            for i in 0..n {
                // Component i maps to shift - i.
                if (shift - 2 * i).mod_floor(&n) == 0 {
                    // z -> e(lambda)/z: the fixed points are the two square
                    // roots of e(lambda), reported symbolically.
                    let lambda = coeff.add(&twist.scale(i));
                    let root = lambda.half();
                    out.component_points
                        .push((i as usize, vec![root, root.add(&Qz::new(1, 2))]));
                }
                // Node i joins components i and i+1; it maps to the node
                // joining shift-i-1 and shift-i.
                if (shift - 1 - 2 * i).mod_floor(&n) == 0 {
                    out.fixed_nodes.push(i as usize);
                }
            }
            out
        }
        (CurvePart::EllipticMap { rot, point }, CurveModel::SmoothElliptic { .. }) => {
            if *rot == 0 {
                if point.0.is_zero() && point.1.is_zero() {
                    FixedLocus::everything(c)
                } else {
                    FixedLocus::default() // nonzero translation is free
                }
            } else {
                FixedLocus { elliptic_fixed_points: true, ..Default::default() }
            }
        }
        (CurvePart::StarChainTwist { twist }, CurveModel::Star { r }) => {
            // Tails are fixed pointwise; chain components are preserved with
            // their attachment points fixed.
            let mut out = FixedLocus::default();
            out.pointwise_components.extend(0..4);
            for j in 0..=*r as usize {
                if twist.scale(j as i64).is_zero() {
                    out.pointwise_components.push(4 + j);
                } else {
                    out.component_points.push((4 + j, vec![Qz::zero()]));
                }
            }
            out
        }
        (CurvePart::ArmPermutation { perm, .. }, model) => {
            let mut out = FixedLocus::default();
            for (i, &p) in perm.iter().enumerate() {
                if p as usize == i {
                    out.pointwise_components.push(i);
                }
            }
            // The core (doubled chain or singular point) is always preserved.
            match model {
                CurveModel::Star { r } => {
                    out.pointwise_components.extend((0..=*r as usize).map(|j| 4 + j))
                }
                _ => out.fixed_nodes.push(0),
            }
            out
        }
        _ => unreachable!("compatibility checked"),
    })
}

/// Freeness of the cyclic group generated by `a` on curve × abelian-part:
/// every nontrivial power must translate nontrivially or act without curve
/// fixed points.
pub fn is_free(a: &DiagonalAutomorphism, c: &CurveModel) -> Result<bool> {
    let n = order(a, c)?;
    let mut cur = a.clone();
    for _k in 1..n {
        if cur.translation.is_zero() && !fixed_locus(&cur, c)?.is_empty() {
            return Ok(false);
        }
        cur = compose(c, &cur, a)?;
    }
    Ok(true)
}

/// Enumerate the finite abelian group generated by commuting automorphisms.
fn closure(c: &CurveModel, gens: &[DiagonalAutomorphism]) -> Result<Vec<DiagonalAutomorphism>> {
    let rank = gens
        .first()
        .map(|g| g.translation.rank())
        .unwrap_or(1);
    let identity = DiagonalAutomorphism::translation_only(TorsionElement::zero(rank));
    let mut elements = vec![identity];
    for g in gens {
        check_compatible(g, c)?;
        let current = elements.clone();
        for e in current {
            let mut cur = e;
            loop {
                let next = compose(c, &cur, g)?;
                if elements.contains(&next) {
                    break;
                }
                elements.push(next.clone());
                if elements.len() > 64 {
                    return Err(Error::UnclassifiedAction(
                        "generated group is too large for a stabilizer".into(),
                    ));
                }
                cur = next;
            }
        }
    }
    Ok(elements)
}

/// Identify a small abelian group from its closure (order and exponent).
fn group_shape(c: &CurveModel, elements: &[DiagonalAutomorphism]) -> Result<FgAbelianGroup> {
    let n = elements.len() as u64;
    let mut exponent = 1u64;
    for e in elements {
        exponent = exponent.lcm(&element_order_in(c, e, elements.len() as u64)?);
    }
    Ok(match (n, exponent) {
        (1, _) => FgAbelianGroup::trivial(),
        (2, 2) => FgAbelianGroup::cyclic(2),
        (3, 3) => FgAbelianGroup::cyclic(3),
        (4, 4) => FgAbelianGroup::cyclic(4),
        (4, 2) => FgAbelianGroup::from_orders(&[2, 2]),
        _ => {
            return Err(Error::InadmissibleStabilizer(format!(
                "stabilizer of order {n} is outside the classification"
            )))
        }
    })
}

fn element_order_in(c: &CurveModel, a: &DiagonalAutomorphism, cap: u64) -> Result<u64> {
    let mut cur = a.clone();
    for k in 1..=cap {
        if cur.curve.is_identity() && cur.translation.is_zero() {
            return Ok(k);
        }
        cur = compose(c, &cur, a)?;
    }
    Err(Error::UnclassifiedAction("element order exceeds group order".into()))
}

/// A curve model decorated with an Albanese stabilizer embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecoratedCurve {
    pub model: CurveModel,
    pub stabilizer: FgAbelianGroup,
    /// Images of the stabilizer generators among curve symmetries.
    pub tau: Vec<CurvePart>,
    /// Images of the stabilizer generators in the torsion module.
    pub sigma: Vec<TorsionElement>,
}

/// Validate and record a stabilizer decoration (τ into curve symmetries,
/// σ into the torsion module) on a curve model.
pub fn stabilizer_quotient(
    c: &CurveModel,
    g: &FgAbelianGroup,
    tau: &[CurvePart],
    sigma: &[TorsionElement],
) -> Result<DecoratedCurve> {
    let admissible = crate::types::admissible_stabilizers(c.shape()).map_err(|_| {
        Error::InadmissibleStabilizer(format!("{} carries no stabilizer", c.shape()))
    })?;
    if !admissible.contains(g) {
        return Err(Error::InadmissibleStabilizer(format!(
            "G = {g} is not admissible for {}",
            c.shape()
        )));
    }
    let gens = g.invariant_factors().len();
    if tau.len() != gens || sigma.len() != gens {
        return Err(Error::InadmissibleStabilizer(format!(
            "expected {gens} generator images, got {} / {}",
            tau.len(),
            sigma.len()
        )));
    }
    // σ must be injective: the translations alone must generate a group of
    // order |G|.
    let translation_gens: Vec<DiagonalAutomorphism> = sigma
        .iter()
        .map(|t| DiagonalAutomorphism::translation_only(t.clone()))
        .collect();
    let generated = closure(c, &translation_gens)?.len() as u64;
    let expected = u64::try_from(&g.order().expect("stabilizers are finite")).unwrap();
    if generated != expected {
        return Err(Error::InadmissibleStabilizer(format!(
            "torsion embedding is not injective: generates order {generated}, |G| = {expected}"
        )));
    }
    // τ images must have orders dividing the generator orders.
    for (t, d) in tau.iter().zip(g.invariant_factors()) {
        let a = DiagonalAutomorphism {
            curve: t.clone(),
            translation: TorsionElement::zero(sigma[0].rank()),
        };
        let ord = order(&a, c)?;
        let d = u64::try_from(d).unwrap();
        if d % ord != 0 {
            return Err(Error::InadmissibleStabilizer(format!(
                "curve image of a generator of order {d} has order {ord}"
            )));
        }
    }
    Ok(DecoratedCurve { model: *c, stabilizer: g.clone(), tau: tau.to_vec(), sigma: sigma.to_vec() })
}

/// Classify the quotient of `c × A` by the commuting group generated by
/// `generators`, where the first generator is the designated inertia element
/// and `m` is the multiplicity of the resulting fiber (`m = 1` classifies the
/// bare fiber).
pub fn quotient_type(
    c: &CurveModel,
    generators: &[DiagonalAutomorphism],
    m: u32,
) -> Result<KodairaType> {
    // Freeness of the full generated group, by exhaustive enumeration.
    let elements = closure(c, generators)?;
    if m >= 2 {
        for (k, e) in elements.iter().enumerate().skip(1) {
            if e.translation.is_zero() && !fixed_locus(e, c)?.is_empty() {
                return Err(Error::NotFree { power: k as u64 });
            }
        }
    }
    let inertia = generators.first().cloned().unwrap_or_else(|| {
        DiagonalAutomorphism::translation_only(TorsionElement::zero(1))
    });
    let extras = &generators[generators.len().min(1)..];
    let stabilizer = group_shape(c, &closure(c, extras)?)?;

    if m == 1 {
        return bare_type(c, &stabilizer);
    }

    let result = match (c, &inertia.curve) {
        (CurveModel::Cycle { len }, CurvePart::Identity) => {
            classify_cycle(*len, 0, false, m, &inertia, c, &stabilizer)?
        }
        (CurveModel::Cycle { len }, CurvePart::CycleMap { shift, reflect, .. }) => {
            classify_cycle(*len, *shift, *reflect, m, &inertia, c, &stabilizer)?
        }
        (CurveModel::SmoothElliptic { j }, CurvePart::EllipticMap { rot, .. }) => {
            classify_elliptic(*j, *rot, m)?
        }
        (CurveModel::SmoothElliptic { .. }, CurvePart::Identity) => {
            KodairaType::multiple(m, MultipleSubtype::I0)?
        }
        (CurveModel::Star { r }, CurvePart::Identity | CurvePart::StarChainTwist { .. }) => {
            KodairaType::multiple(
                m,
                MultipleSubtype::UnstableLike {
                    base: KodairaCurveType::IStar(*r),
                    stabilizer: stabilizer.clone(),
                },
            )?
        }
        (model, CurvePart::ArmPermutation { perm, .. }) => {
            classify_arm_permutation(model, perm, m, extras)?
        }
        (CurveModel::PointedShape { shape }, CurvePart::Identity) => {
            if !crate::base_change::family_multiplicity_allowed(*shape, m) {
                return Err(Error::UnclassifiedAction(format!(
                    "multiplicity {m} violates the congruence for unstable-like {shape}"
                )));
            }
            KodairaType::multiple(
                m,
                MultipleSubtype::UnstableLike { base: *shape, stabilizer: stabilizer.clone() },
            )?
        }
        _ => {
            return Err(Error::UnclassifiedAction(format!(
                "curve part {:?} on {:?} is outside the catalog",
                inertia.curve, c
            )))
        }
    };
    debug_assert!(crate::types::validate(&result).is_empty());
    Ok(result)
}

fn bare_type(c: &CurveModel, g: &FgAbelianGroup) -> Result<KodairaType> {
    Ok(match c {
        CurveModel::Cycle { len } => KodairaType::semistable(*len),
        CurveModel::SmoothElliptic { .. } => KodairaType::semistable(0),
        CurveModel::Star { r } => {
            KodairaType::unstable(KodairaCurveType::IStar(*r), g.clone())?
        }
        CurveModel::PointedShape { shape } => KodairaType::unstable(*shape, g.clone())?,
    })
}

fn classify_cycle(
    len: u32,
    shift: i64,
    reflect: bool,
    m: u32,
    inertia: &DiagonalAutomorphism,
    c: &CurveModel,
    stabilizer: &FgAbelianGroup,
) -> Result<KodairaType> {
    let n = len as i64;
    if !reflect {
        // Orientation-preserving: m·I_R^k with R the number of component
        // orbits and k the residual twist order.
        let big_r = shift.gcd(&n) as u32; // gcd(n, shift); equals n when shift = 0
        let orbit = (n / big_r as i64) as u32;
        if m % orbit != 0 {
            return Err(Error::UnclassifiedAction(format!(
                "component orbit size {orbit} does not divide m = {m}"
            )));
        }
        let k = m / orbit;
        KodairaType::multiple(m, MultipleSubtype::IRk { k, big_r })
            .map_err(|e| Error::UnclassifiedAction(e.to_string()))
    } else {
        if n % 2 != 0 {
            return Err(Error::UnclassifiedAction(
                "orientation-reversing action on an odd cycle".into(),
            ));
        }
        let big_r = (n / 2) as u32;
        let minus = shift.rem_euclid(2) == 1;
        let ord = order(inertia, c)?;
        let expected = if minus { 2 * m as u64 } else { m as u64 };
        if ord != expected {
            return Err(Error::UnclassifiedAction(format!(
                "inertia order {ord} does not match multiplicity {m} for the reversing form"
            )));
        }
        let subtype = if minus {
            MultipleSubtype::IRMinus { big_r, stabilizer: stabilizer.clone() }
        } else {
            MultipleSubtype::IRPlus { big_r, stabilizer: stabilizer.clone() }
        };
        KodairaType::multiple(m, subtype).map_err(|e| Error::UnclassifiedAction(e.to_string()))
    }
}

fn classify_elliptic(j: JTag, rot: u32, m: u32) -> Result<KodairaType> {
    let aut = j.aut_order();
    let rot = rot % aut;
    if rot == 0 {
        return KodairaType::multiple(m, MultipleSubtype::I0);
    }
    let d = aut / rot.gcd(&aut);
    if m % d != 0 {
        return Err(Error::UnclassifiedAction(format!(
            "twist order d = {d} does not divide m = {m}"
        )));
    }
    KodairaType::multiple(m, MultipleSubtype::I0Plus { d })
}

fn classify_arm_permutation(
    model: &CurveModel,
    perm: &[u8],
    m: u32,
    extras: &[DiagonalAutomorphism],
) -> Result<KodairaType> {
    let cycle_type = permutation_cycle_type(perm);
    let shape = model.shape();
    let extra_swap = extras.iter().any(|e| {
        matches!(&e.curve, CurvePart::ArmPermutation { perm: p, .. }
            if permutation_cycle_type(p) == vec![1, 1, 2] || permutation_cycle_type(p) == vec![2, 2])
    });
    let tag = match (shape, cycle_type.as_slice()) {
        (KodairaCurveType::IStar(0), [1, 1, 2]) => {
            if extra_swap {
                ExceptionalTag::I0StarAHalf
            } else {
                ExceptionalTag::I0StarA
            }
        }
        (KodairaCurveType::IStar(0), [4]) => ExceptionalTag::I0StarB,
        (KodairaCurveType::IStar(0), [1, 3]) => ExceptionalTag::I0StarC,
        (KodairaCurveType::IV, [1, 2]) => ExceptionalTag::IVA,
        (KodairaCurveType::IVStar, [1, 2]) => ExceptionalTag::IVStarA,
        _ => {
            return Err(Error::UnclassifiedAction(format!(
                "arm permutation with cycle type {cycle_type:?} on {shape} is outside the catalog"
            )))
        }
    };
    if !tag.multiplicity_allowed(m) {
        return Err(Error::UnclassifiedAction(format!(
            "multiplicity {m} violates the congruence for {}",
            tag.as_str()
        )));
    }
    KodairaType::multiple(m, MultipleSubtype::Exceptional { tag })
}

fn permutation_cycle_type(perm: &[u8]) -> Vec<usize> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut lens = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            len += 1;
            cur = perm[cur] as usize;
        }
        lens.push(len);
    }
    lens.sort_unstable();
    lens
}

// ---------------------------------------------------------------------------
// Coordinate-notation grammar for diagonal automorphisms.
//
// Canonical forms (ζ-coefficients written as e(c) = exp(2πi c)):
//   translation only     (x,y) -> (x, y+(1/2))
//   cycle, preserving    (i,z,y) -> (i+2, e(1/4)*e(1/2)^i*z, y+(1/2))
//   cycle, reversing     (i,z,y) -> (2-i, e(1/4)*e(1/2)^i/z, y+(1/2))
//   elliptic             (x,y) -> (w^2*x+(0,1/2), y+(1/6))
//   star chain twist     (E,F,y) -> (E, e(1/3)^j*F, y+(1/3))
//   arm permutation      (E,y) -> (perm[2,1,3,4;inf=1/4]*E, y+(1/2))
// ---------------------------------------------------------------------------

impl fmt::Display for DiagonalAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y = format!("y+{}", self.translation);
        match &self.curve {
            CurvePart::Identity => write!(f, "(x,y) -> (x, {y})"),
            CurvePart::CycleMap { shift, reflect: false, coeff, twist } => {
                let ipart = if *shift >= 0 {
                    format!("i+{shift}")
                } else {
                    format!("i-{}", -shift)
                };
                write!(f, "(i,z,y) -> ({ipart}, e({coeff})*e({twist})^i*z, {y})")
            }
            CurvePart::CycleMap { shift, reflect: true, coeff, twist } => {
                write!(f, "(i,z,y) -> ({shift}-i, e({coeff})*e({twist})^i/z, {y})")
            }
            CurvePart::EllipticMap { rot, point } => {
                write!(f, "(x,y) -> (w^{rot}*x+({},{}), {y})", point.0, point.1)
            }
            CurvePart::StarChainTwist { twist } => {
                write!(f, "(E,F,y) -> (E, e({twist})^j*F, {y})")
            }
            CurvePart::ArmPermutation { perm, infinitesimal } => {
                let images: Vec<String> = perm.iter().map(|&p| (p + 1).to_string()).collect();
                let inf = match infinitesimal {
                    Some(q) => format!(";inf={q}"),
                    None => String::new(),
                };
                write!(f, "(E,y) -> (perm[{}{inf}]*E, {y})", images.join(","))
            }
        }
    }
}

/// Split a comma-separated list at top level (ignoring commas nested in
/// parentheses or brackets).
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_err(s: &str) -> Error {
    Error::Parse(format!("bad automorphism formula {s:?}"))
}

fn parse_translation(part: &str, full: &str) -> Result<TorsionElement> {
    part.strip_prefix("y+")
        .ok_or_else(|| parse_err(full))?
        .parse()
}

/// Parse "e(c)*e(t)^i*z" / "e(c)*e(t)^i/z" into (coeff, twist, reflect).
fn parse_cycle_zpart(part: &str, full: &str) -> Result<(Qz, Qz, bool)> {
    let rest = part.strip_prefix("e(").ok_or_else(|| parse_err(full))?;
    let (c, rest) = rest.split_once(')').ok_or_else(|| parse_err(full))?;
    let rest = rest.strip_prefix("*e(").ok_or_else(|| parse_err(full))?;
    let (t, rest) = rest.split_once(')').ok_or_else(|| parse_err(full))?;
    let reflect = match rest {
        "^i*z" => false,
        "^i/z" => true,
        _ => return Err(parse_err(full)),
    };
    Ok((c.parse()?, t.parse()?, reflect))
}

impl std::str::FromStr for DiagonalAutomorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lhs, rhs) = s.split_once("->").ok_or_else(|| parse_err(s))?;
        let lhs = lhs.trim();
        let rhs = rhs.trim();
        let inner = rhs
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| parse_err(s))?;
        let parts = split_top(inner);
        match lhs {
            "(x,y)" => {
                let [a, y] = parts.as_slice() else { return Err(parse_err(s)) };
                let translation = parse_translation(y, s)?;
                if *a == "x" {
                    return Ok(DiagonalAutomorphism { curve: CurvePart::Identity, translation });
                }
                let rest = a.strip_prefix("w^").ok_or_else(|| parse_err(s))?;
                let (rot, rest) = rest.split_once("*x+").ok_or_else(|| parse_err(s))?;
                let rot: u32 = rot.parse().map_err(|_| parse_err(s))?;
                let pt = rest
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| parse_err(s))?;
                let (p, q) = pt.split_once(',').ok_or_else(|| parse_err(s))?;
                Ok(DiagonalAutomorphism {
                    curve: CurvePart::EllipticMap { rot, point: (p.trim().parse()?, q.trim().parse()?) },
                    translation,
                })
            }
            "(i,z,y)" => {
                let [ipart, zpart, y] = parts.as_slice() else { return Err(parse_err(s)) };
                let translation = parse_translation(y, s)?;
                let (coeff, twist, reflect) = parse_cycle_zpart(zpart, s)?;
                let shift: i64 = if let Some(pre) = ipart.strip_suffix("-i") {
                    if !reflect {
                        return Err(parse_err(s));
                    }
                    pre.parse().map_err(|_| parse_err(s))?
                } else {
                    if reflect {
                        return Err(parse_err(s));
                    }
                    let rest = ipart.strip_prefix('i').ok_or_else(|| parse_err(s))?;
                    if rest.is_empty() {
                        0
                    } else {
                        rest.parse().map_err(|_| parse_err(s))?
                    }
                };
                Ok(DiagonalAutomorphism {
                    curve: CurvePart::CycleMap { shift, reflect, coeff, twist },
                    translation,
                })
            }
            "(E,F,y)" => {
                let [e, zpart, y] = parts.as_slice() else { return Err(parse_err(s)) };
                if *e != "E" {
                    return Err(parse_err(s));
                }
                let translation = parse_translation(y, s)?;
                let rest = zpart.strip_prefix("e(").ok_or_else(|| parse_err(s))?;
                let (t, rest) = rest.split_once(')').ok_or_else(|| parse_err(s))?;
                if rest != "^j*F" {
                    return Err(parse_err(s));
                }
                Ok(DiagonalAutomorphism {
                    curve: CurvePart::StarChainTwist { twist: t.parse()? },
                    translation,
                })
            }
            "(E,y)" => {
                let [p, y] = parts.as_slice() else { return Err(parse_err(s)) };
                let translation = parse_translation(y, s)?;
                let body = p
                    .strip_prefix("perm[")
                    .and_then(|r| r.strip_suffix("]*E"))
                    .ok_or_else(|| parse_err(s))?;
                let (images, inf) = match body.split_once(';') {
                    Some((im, tag)) => {
                        let q = tag.strip_prefix("inf=").ok_or_else(|| parse_err(s))?;
                        (im, Some(q.parse()?))
                    }
                    None => (body, None),
                };
                let perm: Result<Vec<u8>> = images
                    .split(',')
                    .map(|x| {
                        let v: u8 = x.trim().parse().map_err(|_| parse_err(s))?;
                        if v == 0 {
                            return Err(parse_err(s));
                        }
                        Ok(v - 1)
                    })
                    .collect();
                Ok(DiagonalAutomorphism {
                    curve: CurvePart::ArmPermutation { perm: perm?, infinitesimal: inf },
                    translation,
                })
            }
            _ => Err(parse_err(s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::KodairaCurveType as C;

    fn cyc(n: u32) -> CurveModel {
        CurveModel::Cycle { len: n }
    }

    fn cycle_map(shift: i64, reflect: bool, coeff: Qz, twist: Qz, t: TorsionElement) -> DiagonalAutomorphism {
        DiagonalAutomorphism { curve: CurvePart::CycleMap { shift, reflect, coeff, twist }, translation: t }
    }

    #[test]
    fn qz_arithmetic() {
        let a = Qz::new(5, 6);
        assert_eq!(a.add(&Qz::new(1, 3)), Qz::new(1, 6));
        assert_eq!(a.scale(6), Qz::zero());
        assert_eq!(a.order(), 6);
        assert_eq!(Qz::new(-1, 4), Qz::new(3, 4));
        assert_eq!(Qz::new(1, 2).half(), Qz::new(1, 4));
    }

    #[test]
    fn torsion_orders() {
        let t = TorsionElement(vec![Qz::new(1, 4), Qz::new(1, 6)]);
        assert_eq!(t.order(), 12);
        assert!(t.scale(12).is_zero());
        assert!(!t.scale(6).is_zero());
    }

    #[test]
    fn order_examples() {
        // Pure translation of order 5.
        let a = DiagonalAutomorphism::translation_only(TorsionElement::of_order(5));
        assert_eq!(order(&a, &cyc(3)).unwrap(), 5);

        // (i,z,y) -> (-i, ζ^i/z, y) with ζ primitive 2nd root on Cycle(4): order 2.
        let a = cycle_map(0, true, Qz::zero(), Qz::new(1, 2), TorsionElement::zero(1));
        assert_eq!(order(&a, &cyc(4)).unwrap(), 2);

        // (i,z,y) -> (1-i, εζ^i/z, y+a), a of order 4k (k=1): order 4.
        let a = cycle_map(1, true, Qz::new(1, 4), Qz::new(1, 2), TorsionElement::of_order(4));
        assert_eq!(order(&a, &cyc(4)).unwrap(), 4);
    }

    #[test]
    fn power_order_relation() {
        let c = cyc(6);
        let a = cycle_map(1, false, Qz::new(1, 6), Qz::zero(), TorsionElement::of_order(4));
        let n = order(&a, &c).unwrap();
        let mut powers = vec![DiagonalAutomorphism::translation_only(TorsionElement::zero(1))];
        for _ in 0..12 {
            let prev = powers.last().unwrap();
            powers.push(compose(&c, prev, &a).unwrap());
        }
        for k in 1..=12u64 {
            let expected = n / n.gcd(&k);
            assert_eq!(order(&powers[k as usize], &c).unwrap(), expected, "k = {k}");
        }
    }

    #[test]
    fn fixed_locus_examples() {
        // Identity on Cycle(3): everything fixed.
        let id = DiagonalAutomorphism::translation_only(TorsionElement::zero(1));
        let f = fixed_locus(&id, &cyc(3)).unwrap();
        assert!(f.whole_curve && f.pointwise_components.len() == 3 && f.fixed_nodes.len() == 3);

        // (i -> -i, z -> 1/z) on Cycle(2): fixed points ±1 on both components,
        // nodes swapped.
        let a = cycle_map(0, true, Qz::zero(), Qz::zero(), TorsionElement::zero(1));
        let f = fixed_locus(&a, &cyc(2)).unwrap();
        assert_eq!(f.component_points.len(), 2);
        for (_, pts) in &f.component_points {
            assert_eq!(pts, &vec![Qz::zero(), Qz::new(1, 2)]);
        }
        assert!(f.fixed_nodes.is_empty());

        // Shift on Cycle(4): empty.
        let a = cycle_map(1, false, Qz::zero(), Qz::zero(), TorsionElement::zero(1));
        assert!(fixed_locus(&a, &cyc(4)).unwrap().is_empty());
    }

    #[test]
    fn freeness_examples() {
        // Pure translation is free.
        let a = DiagonalAutomorphism::translation_only(TorsionElement::of_order(3));
        assert!(is_free(&a, &cyc(5)).unwrap());

        // Reflection with no translation is not free.
        let a = cycle_map(0, true, Qz::zero(), Qz::zero(), TorsionElement::zero(1));
        assert!(!is_free(&a, &cyc(2)).unwrap());

        // (-i, ζ^i/z, y+a) with a of order 2 is free.
        let a = cycle_map(0, true, Qz::zero(), Qz::new(1, 2), TorsionElement::of_order(2));
        assert!(is_free(&a, &cyc(4)).unwrap());
    }

    #[test]
    fn quotient_cycle_orientation_preserving() {
        // Cycle(2), φ(i,z,y) = (i, (-1)^i z, y+a), a order 2, m=2 → 2·I_2^2.
        let a = cycle_map(0, false, Qz::zero(), Qz::new(1, 2), TorsionElement::of_order(2));
        let t = quotient_type(&cyc(2), &[a], 2).unwrap();
        assert_eq!(t.to_string(), "2*I2^2");

        // Shift form: klr components with shift kr: k=2, l=1, r=1 → 2·I_2^2.
        let a = cycle_map(2, false, Qz::zero(), Qz::new(1, 2), TorsionElement::of_order(2));
        let t = quotient_type(&cyc(2), &[a], 2).unwrap();
        assert_eq!(t.to_string(), "2*I2^2");

        // k=1, l=2, r=1: shift 1 on Cycle(2), m=2 → 2·I_1^1.
        let a = cycle_map(1, false, Qz::zero(), Qz::zero(), TorsionElement::of_order(2));
        let t = quotient_type(&cyc(2), &[a], 2).unwrap();
        assert_eq!(t.to_string(), "2*I1^1");
    }

    #[test]
    fn quotient_cycle_orientation_reversing() {
        // Cycle(4), (-i, ζ^i/z, y+a), ζ primitive 2nd root, a order 2, m=2 → 2·I_2^+.
        let a = cycle_map(0, true, Qz::zero(), Qz::new(1, 2), TorsionElement::of_order(2));
        let t = quotient_type(&cyc(4), &[a], 2).unwrap();
        assert_eq!(t.to_string(), "2*I2+");

        // (1-i, εζ^i/z, y+a), a of order 4 → 2·I_2^-.
        let a = cycle_map(1, true, Qz::new(1, 4), Qz::new(1, 2), TorsionElement::of_order(4));
        let t = quotient_type(&cyc(4), &[a], 2).unwrap();
        assert_eq!(t.to_string(), "2*I2-");
    }

    #[test]
    fn quotient_elliptic() {
        // j=0, φ(x,y) = (ω x, y+a), a order 6, m=6 → 6·I_0^+ with d=6.
        let e = CurveModel::SmoothElliptic { j: JTag::Zero };
        let a = DiagonalAutomorphism {
            curve: CurvePart::EllipticMap { rot: 1, point: (Qz::zero(), Qz::zero()) },
            translation: TorsionElement::of_order(6),
        };
        let t = quotient_type(&e, &[a], 6).unwrap();
        assert_eq!(t.to_string(), "6*I0+6");

        // Pure translation on an abelian fiber → m·I_0.
        let a = DiagonalAutomorphism::translation_only(TorsionElement::of_order(3));
        let g = CurveModel::SmoothElliptic { j: JTag::Generic };
        assert_eq!(quotient_type(&g, &[a], 3).unwrap().to_string(), "3*I0");
    }

    #[test]
    fn quotient_star_and_unstable_like() {
        // Star(3) with chain twist, a order 3, m=3 → 3·I_3*.
        let s = CurveModel::Star { r: 3 };
        let a = DiagonalAutomorphism {
            curve: CurvePart::StarChainTwist { twist: Qz::new(1, 3) },
            translation: TorsionElement::of_order(3),
        };
        assert_eq!(quotient_type(&s, &[a], 3).unwrap().to_string(), "3*I3*");

        // Translation on a II shape, m=5 → 5·II.
        let p = CurveModel::PointedShape { shape: C::II };
        let a = DiagonalAutomorphism::translation_only(TorsionElement::of_order(5));
        assert_eq!(quotient_type(&p, &[a], 5).unwrap().to_string(), "5*II");

        // m=2 on a II shape violates gcd(6, m) = 1.
        let a = DiagonalAutomorphism::translation_only(TorsionElement::of_order(2));
        assert!(quotient_type(&p, &[a], 2).is_err());
    }

    #[test]
    fn quotient_exceptional() {
        // Star(0) with a tail swap, translation order 2, m=2 → 2·I0*-a.
        let s = CurveModel::Star { r: 0 };
        let swap12 = DiagonalAutomorphism {
            curve: CurvePart::ArmPermutation {
                perm: vec![1, 0, 2, 3],
                infinitesimal: Some(Qz::new(1, 4)),
            },
            translation: TorsionElement::of_order(2),
        };
        assert_eq!(quotient_type(&s, &[swap12.clone()], 2).unwrap().to_string(), "2*I0*-a");

        // Adding a disjoint swap as a stabilizer generator → 2·I0*-a/2.
        let swap34 = DiagonalAutomorphism {
            curve: CurvePart::ArmPermutation { perm: vec![0, 1, 3, 2], infinitesimal: None },
            translation: TorsionElement(vec![Qz::new(1, 2), Qz::zero()]),
        };
        let swap12b = DiagonalAutomorphism {
            curve: swap12.curve.clone(),
            translation: TorsionElement(vec![Qz::zero(), Qz::new(1, 2)]),
        };
        let t = quotient_type(&s, &[swap12b, swap34], 2).unwrap();
        assert_eq!(t.to_string(), "2*I0*-a/2");

        // 4-cycle of tails with a of order 4, m=2 → 2·I0*-b.
        let b = DiagonalAutomorphism {
            curve: CurvePart::ArmPermutation { perm: vec![1, 2, 3, 0], infinitesimal: None },
            translation: TorsionElement::of_order(4),
        };
        assert_eq!(quotient_type(&s, &[b], 2).unwrap().to_string(), "2*I0*-b");

        // 3-cycle with a of order 3, m=3 → 3·I0*-c.
        let cc = DiagonalAutomorphism {
            curve: CurvePart::ArmPermutation { perm: vec![1, 2, 0, 3], infinitesimal: None },
            translation: TorsionElement::of_order(3),
        };
        assert_eq!(quotient_type(&s, &[cc], 3).unwrap().to_string(), "3*I0*-c");

        // Swap on IV, m=2 → 2·IV-a; on IV*, m=2 → 2·IV*-a.
        let iv = CurveModel::PointedShape { shape: C::IV };
        let sw = DiagonalAutomorphism {
            curve: CurvePart::ArmPermutation { perm: vec![1, 0, 2], infinitesimal: None },
            translation: TorsionElement::of_order(2),
        };
        assert_eq!(quotient_type(&iv, &[sw.clone()], 2).unwrap().to_string(), "2*IV-a");
        let ivs = CurveModel::PointedShape { shape: C::IVStar };
        assert_eq!(quotient_type(&ivs, &[sw], 2).unwrap().to_string(), "2*IV*-a");
    }

    #[test]
    fn quotient_rejects_nonfree() {
        // Reflection with zero translation: fixed points, not free.
        let a = cycle_map(0, true, Qz::zero(), Qz::zero(), TorsionElement::zero(1));
        assert!(matches!(
            quotient_type(&cyc(2), &[a], 2),
            Err(Error::NotFree { .. })
        ));
    }

    #[test]
    fn quotient_m1_bare_types() {
        assert_eq!(quotient_type(&cyc(4), &[], 1).unwrap(), KodairaType::semistable(4));
        let s = CurveModel::Star { r: 2 };
        assert_eq!(
            quotient_type(&s, &[], 1).unwrap(),
            KodairaType::unstable(C::IStar(2), FgAbelianGroup::trivial()).unwrap()
        );
    }

    #[test]
    fn formula_round_trip() {
        let examples = [
            "(x,y) -> (x, y+(1/2))",
            "(x,y) -> (x, y+(0,1/3))",
            "(i,z,y) -> (i+2, e(1/4)*e(1/2)^i*z, y+(1/2))",
            "(i,z,y) -> (i+0, e(0)*e(1/2)^i*z, y+(1/2))",
            "(i,z,y) -> (0-i, e(0)*e(1/2)^i/z, y+(1/2))",
            "(i,z,y) -> (1-i, e(1/4)*e(1/2)^i/z, y+(1/4))",
            "(x,y) -> (w^1*x+(0,0), y+(1/6))",
            "(x,y) -> (w^2*x+(0,1/2), y+(1/3))",
            "(E,F,y) -> (E, e(1/3)^j*F, y+(1/3))",
            "(E,y) -> (perm[2,1,3,4]*E, y+(1/2))",
            "(E,y) -> (perm[2,1,3,4;inf=1/4]*E, y+(1/2))",
            "(E,y) -> (perm[2,3,1]*E, y+(1/3))",
        ];
        for s in examples {
            let a: DiagonalAutomorphism = s.parse().unwrap();
            assert_eq!(a.to_string(), s, "round trip failed");
            let again: DiagonalAutomorphism = a.to_string().parse().unwrap();
            assert_eq!(again, a);
        }
        assert!("(i,z,y) -> (i+1, z, y+(1/2))".parse::<DiagonalAutomorphism>().is_err());
        assert!("nonsense".parse::<DiagonalAutomorphism>().is_err());
    }

    #[test]
    fn stabilizer_quotient_checks() {
        // IV base with G = Z/3 → decorated model.
        let iv = CurveModel::PointedShape { shape: C::IV };
        let g3 = FgAbelianGroup::cyclic(3);
        let d = stabilizer_quotient(
            &iv,
            &g3,
            &[CurvePart::Identity],
            &[TorsionElement::of_order(3)],
        )
        .unwrap();
        assert_eq!(d.stabilizer, g3);

        // II admits no nontrivial stabilizer.
        let ii = CurveModel::PointedShape { shape: C::II };
        assert!(stabilizer_quotient(
            &ii,
            &FgAbelianGroup::cyclic(2),
            &[CurvePart::Identity],
            &[TorsionElement::of_order(2)],
        )
        .is_err());

        // I_2* with (Z/2)^2 needs two independent torsion images.
        let s = CurveModel::Star { r: 2 };
        let g22 = FgAbelianGroup::from_orders(&[2, 2]);
        let ok = stabilizer_quotient(
            &s,
            &g22,
            &[CurvePart::Identity, CurvePart::Identity],
            &[
                TorsionElement(vec![Qz::new(1, 2), Qz::zero()]),
                TorsionElement(vec![Qz::zero(), Qz::new(1, 2)]),
            ],
        );
        assert!(ok.is_ok());
        // Non-injective σ rejected.
        let bad = stabilizer_quotient(
            &s,
            &g22,
            &[CurvePart::Identity, CurvePart::Identity],
            &[
                TorsionElement(vec![Qz::new(1, 2), Qz::zero()]),
                TorsionElement(vec![Qz::new(1, 2), Qz::zero()]),
            ],
        );
        assert!(bad.is_err());
    }
}
