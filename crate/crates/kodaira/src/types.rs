//! The full fiber-type taxonomy: semistable cycles, unstable types decorated
//! by an Albanese stabilizer, and the multiple-fiber families, together with
//! Néron component groups, conjugation/isogeny, untangling, duality
//! bookkeeping, and the canonical string grammar.

use crate::abelian::FgAbelianGroup;
use crate::config::KodairaCurveType;
use crate::{Error, Result};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Order of the shear datum of a semistable fiber: a positive integer or
/// infinite. Stored for bookkeeping only; it does not enter type equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShearOrder {
    Finite(u64),
    Infinite,
}

/// Tags for the six exceptional unstable-like multiple fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExceptionalTag {
    I0StarA,
    I0StarAHalf,
    I0StarB,
    I0StarC,
    IVA,
    IVStarA,
}

impl ExceptionalTag {
    pub const ALL: [ExceptionalTag; 6] = [
        ExceptionalTag::I0StarA,
        ExceptionalTag::I0StarAHalf,
        ExceptionalTag::I0StarB,
        ExceptionalTag::I0StarC,
        ExceptionalTag::IVA,
        ExceptionalTag::IVStarA,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExceptionalTag::I0StarA => "I0*-a",
            ExceptionalTag::I0StarAHalf => "I0*-a/2",
            ExceptionalTag::I0StarB => "I0*-b",
            ExceptionalTag::I0StarC => "I0*-c",
            ExceptionalTag::IVA => "IV-a",
            ExceptionalTag::IVStarA => "IV*-a",
        }
    }

    /// Multiplicity congruence printed for the tag.
    pub fn multiplicity_allowed(self, m: u32) -> bool {
        match self {
            ExceptionalTag::I0StarA | ExceptionalTag::I0StarAHalf | ExceptionalTag::I0StarB => {
                m % 4 == 2
            }
            ExceptionalTag::I0StarC => m % 6 == 3,
            ExceptionalTag::IVA | ExceptionalTag::IVStarA => m % 6 == 2 || m % 6 == 4,
        }
    }
}

/// The subtype of a multiple fiber `m · (...)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MultipleSubtype {
    /// Smooth: `m · I_0`.
    I0,
    /// Smooth elliptic times abelian with an order-`d` twist: `m · I_0^+`.
    I0Plus { d: u32 },
    /// Orientation-preserving cycle quotient: `m · I_R^k`.
    IRk { k: u32, big_r: u32 },
    /// Orientation-reversing cycle quotient, untwisted sign: `m · I_R^+/|G|`.
    IRPlus { big_r: u32, stabilizer: FgAbelianGroup },
    /// Orientation-reversing cycle quotient, twisted sign: `m · I_R^-/|G|`.
    IRMinus { big_r: u32, stabilizer: FgAbelianGroup },
    /// Translation quotient of an unstable fiber: `m · base/|G|`.
    UnstableLike { base: KodairaCurveType, stabilizer: FgAbelianGroup },
    /// The six exceptional unstable-like fibers.
    Exceptional { tag: ExceptionalTag },
}

/// A Kodaira type in the extended taxonomy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum KodairaType {
    /// Linear part `G_m` (or trivial for r = 0), multiplicity 1.
    Semistable { r: u32, shear: ShearOrder },
    /// Linear part `G_a`, multiplicity 1; `base/|G|` in the tangled case.
    Unstable { base: KodairaCurveType, stabilizer: FgAbelianGroup },
    /// Multiplicity `m >= 2` fiber.
    Multiple { m: u32, subtype: MultipleSubtype },
}

// Shear orders are recorded data, not part of the type identity.
impl PartialEq for KodairaType {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (KodairaType::Semistable { r: a, .. }, KodairaType::Semistable { r: b, .. }) => a == b,
            (
                KodairaType::Unstable { base: a, stabilizer: g },
                KodairaType::Unstable { base: b, stabilizer: h },
            ) => a == b && g == h,
            (
                KodairaType::Multiple { m: a, subtype: s },
                KodairaType::Multiple { m: b, subtype: t },
            ) => a == b && s == t,
            _ => false,
        }
    }
}
impl Eq for KodairaType {}

impl KodairaType {
    pub fn semistable(r: u32) -> Self {
        let shear = if r == 0 { ShearOrder::Finite(1) } else { ShearOrder::Infinite };
        KodairaType::Semistable { r, shear }
    }

    pub fn unstable(base: KodairaCurveType, stabilizer: FgAbelianGroup) -> Result<Self> {
        let t = KodairaType::Unstable { base, stabilizer };
        match validate(&t).first() {
            None => Ok(t),
            Some(v) => Err(Error::InvalidType(v.clone())),
        }
    }

    pub fn multiple(m: u32, subtype: MultipleSubtype) -> Result<Self> {
        let t = KodairaType::Multiple { m, subtype };
        match validate(&t).first() {
            None => Ok(t),
            Some(v) => Err(Error::InvalidType(v.clone())),
        }
    }

    pub fn is_semistable(&self) -> bool {
        matches!(self, KodairaType::Semistable { .. })
    }

    pub fn is_unstable(&self) -> bool {
        matches!(self, KodairaType::Unstable { .. })
    }

    pub fn is_multiple(&self) -> bool {
        matches!(self, KodairaType::Multiple { .. })
    }
}

/// Admissible Albanese stabilizers for each unstable base curve.
pub fn admissible_stabilizers(base: KodairaCurveType) -> Result<Vec<FgAbelianGroup>> {
    let triv = FgAbelianGroup::trivial;
    match base {
        KodairaCurveType::II | KodairaCurveType::IIStar => Ok(vec![triv()]),
        KodairaCurveType::III | KodairaCurveType::IIIStar => {
            Ok(vec![triv(), FgAbelianGroup::cyclic(2)])
        }
        KodairaCurveType::IV | KodairaCurveType::IVStar => {
            Ok(vec![triv(), FgAbelianGroup::cyclic(3)])
        }
        KodairaCurveType::IStar(r) if r % 2 == 0 => Ok(vec![
            triv(),
            FgAbelianGroup::cyclic(2),
            FgAbelianGroup::from_orders(&[2, 2]),
        ]),
        KodairaCurveType::IStar(_) => {
            Ok(vec![triv(), FgAbelianGroup::cyclic(2), FgAbelianGroup::cyclic(4)])
        }
        KodairaCurveType::I(_) => Err(Error::WrongKind(format!(
            "{base} is semistable and carries no Albanese stabilizer"
        ))),
    }
}

/// Component group of the untangled fiber with the given base curve.
fn untangled_pi0(base: KodairaCurveType) -> FgAbelianGroup {
    match base {
        KodairaCurveType::I(r) => FgAbelianGroup::cyclic(r.max(1) as u64),
        KodairaCurveType::II | KodairaCurveType::IIStar => FgAbelianGroup::trivial(),
        KodairaCurveType::III | KodairaCurveType::IIIStar => FgAbelianGroup::cyclic(2),
        KodairaCurveType::IV | KodairaCurveType::IVStar => FgAbelianGroup::cyclic(3),
        KodairaCurveType::IStar(r) if r % 2 == 0 => FgAbelianGroup::from_orders(&[2, 2]),
        KodairaCurveType::IStar(_) => FgAbelianGroup::cyclic(4),
    }
}

/// Néron component group of a non-multiple type.
pub fn neron_component_group(t: &KodairaType) -> Result<FgAbelianGroup> {
    match t {
        KodairaType::Semistable { r, .. } => Ok(FgAbelianGroup::cyclic((*r).max(1) as u64)),
        KodairaType::Unstable { base, stabilizer } => {
            let violations = validate(t);
            if let Some(v) = violations.first() {
                return Err(Error::InvalidType(v.clone()));
            }
            let cover = untangled_pi0(*base);
            let g = stabilizer.order().expect("stabilizers are finite");
            if g == BigUint::from(1u32) {
                return Ok(cover);
            }
            // The tangled component group is the quotient of the untangled
            // one by the stabilizer image; for the tabulated cases this is
            // determined by orders alone.
            let order4 = BigUint::from(4u32);
            Ok(match (base, u64::try_from(&g).unwrap()) {
                (KodairaCurveType::III | KodairaCurveType::IIIStar, 2) => FgAbelianGroup::trivial(),
                (KodairaCurveType::IV | KodairaCurveType::IVStar, 3) => FgAbelianGroup::trivial(),
                (KodairaCurveType::IStar(_), 2) => FgAbelianGroup::cyclic(2),
                (KodairaCurveType::IStar(_), 4) => {
                    debug_assert_eq!(cover.order().unwrap(), order4);
                    FgAbelianGroup::trivial()
                }
                _ => unreachable!("validated stabilizer"),
            })
        }
        KodairaType::Multiple { .. } => Err(Error::WrongKind(
            "component group is attached to the t-automorphism fiber, not to a multiple fiber"
                .into(),
        )),
    }
}

/// Conjugate of an unstable type: swaps the base with its starred partner,
/// preserving the stabilizer. Star bases are their own conjugates.
pub fn conjugate(t: &KodairaType) -> Result<KodairaType> {
    let KodairaType::Unstable { base, stabilizer } = t else {
        return Err(Error::WrongKind("conjugate is defined for unstable types".into()));
    };
    let base = conjugate_base(*base)?;
    Ok(KodairaType::Unstable { base, stabilizer: stabilizer.clone() })
}

pub fn conjugate_base(base: KodairaCurveType) -> Result<KodairaCurveType> {
    Ok(match base {
        KodairaCurveType::II => KodairaCurveType::IIStar,
        KodairaCurveType::IIStar => KodairaCurveType::II,
        KodairaCurveType::III => KodairaCurveType::IIIStar,
        KodairaCurveType::IIIStar => KodairaCurveType::III,
        KodairaCurveType::IV => KodairaCurveType::IVStar,
        KodairaCurveType::IVStar => KodairaCurveType::IV,
        KodairaCurveType::IStar(r) => KodairaCurveType::IStar(r),
        KodairaCurveType::I(_) => {
            return Err(Error::WrongKind("semistable bases have no conjugate".into()))
        }
    })
}

/// Two unstable types are isogenous when their bases agree (stabilizers are
/// ignored).
pub fn is_isogenous(a: &KodairaType, b: &KodairaType) -> Result<bool> {
    match (a, b) {
        (KodairaType::Unstable { base: x, .. }, KodairaType::Unstable { base: y, .. }) => {
            Ok(x == y)
        }
        _ => Err(Error::WrongKind("isogeny comparison is defined for unstable types".into())),
    }
}

/// The exact sequence `0 -> G -> pi0(cover) -> pi0(fiber) -> 0` recorded by
/// [`untangle`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi0Sequence {
    pub stabilizer: FgAbelianGroup,
    pub pi0_cover: FgAbelianGroup,
    pub pi0: FgAbelianGroup,
}

/// Replace a tangled unstable type by its canonical stabilizer-free cover,
/// returning the witnessing component-group sequence.
pub fn untangle(t: &KodairaType) -> Result<(KodairaType, Pi0Sequence)> {
    let KodairaType::Unstable { base, stabilizer } = t else {
        return Err(Error::WrongKind("untangle is defined for unstable types".into()));
    };
    let pi0 = neron_component_group(t)?;
    let untangled = KodairaType::Unstable { base: *base, stabilizer: FgAbelianGroup::trivial() };
    let pi0_cover = neron_component_group(&untangled)?;
    Ok((
        untangled,
        Pi0Sequence { stabilizer: stabilizer.clone(), pi0_cover, pi0 },
    ))
}

/// Duality pairs the source states explicitly: every semistable `I_r` is
/// self-dual, and `I_r*/2` pairs with `I_{2r}*/2` for odd `r`. Other unstable
/// duals are not pinned down and are deliberately absent.
pub fn dual_pairs(max_r: u32) -> Vec<(KodairaType, KodairaType)> {
    let mut out = Vec::new();
    for r in 0..=max_r {
        out.push((KodairaType::semistable(r), KodairaType::semistable(r)));
    }
    let z2 = FgAbelianGroup::cyclic(2);
    for r in (1..=max_r).step_by(2) {
        if 2 * r <= max_r.max(2 * r) {
            out.push((
                KodairaType::Unstable {
                    base: KodairaCurveType::IStar(r),
                    stabilizer: z2.clone(),
                },
                KodairaType::Unstable {
                    base: KodairaCurveType::IStar(2 * r),
                    stabilizer: z2.clone(),
                },
            ));
        }
    }
    out
}

/// Check that a stated duality pair has isomorphic component groups.
pub fn dual_component_check(pair: &(KodairaType, KodairaType)) -> Result<bool> {
    Ok(neron_component_group(&pair.0)? == neron_component_group(&pair.1)?)
}

/// Structural validation; returns a list of human-readable violations
/// (empty = valid).
pub fn validate(t: &KodairaType) -> Vec<String> {
    let mut out = Vec::new();
    match t {
        KodairaType::Semistable { r, shear } => {
            if *r == 0 && *shear != ShearOrder::Finite(1) {
                out.push("smooth fiber I0 must have trivial shear".into());
            }
            if *shear == ShearOrder::Finite(0) {
                out.push("shear order must be positive".into());
            }
        }
        KodairaType::Unstable { base, stabilizer } => match admissible_stabilizers(*base) {
            Ok(groups) => {
                if !groups.contains(stabilizer) {
                    out.push(format!(
                        "{base} admits stabilizers {{{}}}, not {stabilizer}",
                        groups.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
                    ));
                }
            }
            Err(_) => out.push(format!("{base} is not an unstable base curve")),
        },
        KodairaType::Multiple { m, subtype } => {
            if *m < 2 {
                out.push("multiple fibers require m >= 2".into());
            }
            validate_subtype(*m, subtype, &mut out);
        }
    }
    out
}

fn validate_subtype(m: u32, subtype: &MultipleSubtype, out: &mut Vec<String>) {
    let group_order = |g: &FgAbelianGroup| u64::try_from(&g.order().unwrap()).unwrap();
    match subtype {
        MultipleSubtype::I0 => {}
        MultipleSubtype::I0Plus { d } => {
            if ![2, 3, 4, 6].contains(d) {
                out.push(format!("I0+ twist order d = {d} must be 2, 3, 4, or 6"));
            }
            if m != 0 && m % d != 0 {
                out.push(format!("d = {d} does not divide m = {m}"));
            }
        }
        MultipleSubtype::IRk { k, big_r } => {
            if *k == 0 || *big_r == 0 {
                out.push("IRk requires k >= 1 and R >= 1".into());
            } else {
                if m % k != 0 {
                    out.push(format!("k = {k} does not divide m = {m}"));
                }
                if big_r % k != 0 {
                    out.push(format!("k = {k} does not divide R = {big_r}"));
                }
            }
        }
        MultipleSubtype::IRPlus { big_r, stabilizer } => {
            validate_reversing(m, *big_r, out);
            let ok = matches!(group_order(stabilizer), 1 | 2 | 4);
            if !ok {
                out.push(format!("I_R^+ stabilizer must have order 1, 2, or 4, got {stabilizer}"));
            }
        }
        MultipleSubtype::IRMinus { big_r, stabilizer } => {
            validate_reversing(m, *big_r, out);
            if group_order(stabilizer) > 2 {
                out.push(format!("I_R^- stabilizer must be 0 or Z/2, got {stabilizer}"));
            }
        }
        MultipleSubtype::UnstableLike { base, stabilizer } => {
            match admissible_stabilizers(*base) {
                Ok(groups) => {
                    if !groups.contains(stabilizer) {
                        out.push(format!("stabilizer {stabilizer} inadmissible for base {base}"));
                    }
                }
                Err(_) => out.push(format!("{base} is not an unstable base curve")),
            }
            if let KodairaCurveType::IStar(r) = base {
                if *r >= 1 && (m % 2 == 0 || r % m != 0) {
                    out.push(format!(
                        "unstable-like I_{r}* requires odd m dividing R = {r}, got m = {m}"
                    ));
                }
            }
        }
        MultipleSubtype::Exceptional { tag } => {
            if !tag.multiplicity_allowed(m) {
                out.push(format!(
                    "multiplicity m = {m} violates the congruence for {}",
                    tag.as_str()
                ));
            }
        }
    }
}

fn validate_reversing(m: u32, big_r: u32, out: &mut Vec<String>) {
    if m % 2 != 0 {
        out.push(format!("orientation-reversing quotients require even m, got {m}"));
        return;
    }
    let k = m / 2;
    if big_r == 0 || big_r % k != 0 {
        out.push(format!("R = {big_r} must be a positive multiple of k = m/2 = {k}"));
    }
}

// ---------------------------------------------------------------------------
// Canonical string grammar.
// ---------------------------------------------------------------------------

fn stabilizer_suffix(g: &FgAbelianGroup) -> String {
    let order = g.order().expect("stabilizers are finite");
    if order == BigUint::from(1u32) {
        String::new()
    } else {
        format!("/{order}")
    }
}

impl fmt::Display for MultipleSubtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultipleSubtype::I0 => write!(f, "I0"),
            MultipleSubtype::I0Plus { d } => write!(f, "I0+{d}"),
            MultipleSubtype::IRk { k, big_r } => write!(f, "I{big_r}^{k}"),
            MultipleSubtype::IRPlus { big_r, stabilizer } => {
                write!(f, "I{big_r}+{}", stabilizer_suffix(stabilizer))
            }
            MultipleSubtype::IRMinus { big_r, stabilizer } => {
                write!(f, "I{big_r}-{}", stabilizer_suffix(stabilizer))
            }
            MultipleSubtype::UnstableLike { base, stabilizer } => {
                write!(f, "{base}{}", stabilizer_suffix(stabilizer))
            }
            MultipleSubtype::Exceptional { tag } => write!(f, "{}", tag.as_str()),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::Semistable { r, .. } => write!(f, "I{r}"),
            KodairaType::Unstable { base, stabilizer } => {
                write!(f, "{base}{}", stabilizer_suffix(stabilizer))
            }
            KodairaType::Multiple { m, subtype } => write!(f, "{m}*{subtype}"),
        }
    }
}

/// Resolve a printed stabilizer order to the group it denotes for a base.
/// The printed "/4" is (Z/2)^2 for even-r stars and Z/4 for odd-r stars.
fn stabilizer_from_order(base: KodairaCurveType, order: u64) -> Result<FgAbelianGroup> {
    let candidates = admissible_stabilizers(base)
        .map_err(|_| Error::Parse(format!("{base} takes no stabilizer suffix")))?;
    candidates
        .into_iter()
        .find(|g| g.order() == Some(BigUint::from(order)))
        .ok_or_else(|| Error::Parse(format!("no admissible stabilizer of order {order} for {base}")))
}

fn parse_suffixed_base(s: &str) -> Result<(KodairaCurveType, FgAbelianGroup)> {
    let (head, order) = match s.rsplit_once('/') {
        Some((head, tail)) => {
            let order: u64 = tail
                .parse()
                .map_err(|_| Error::Parse(format!("bad stabilizer order in {s:?}")))?;
            (head, order)
        }
        None => (s, 1),
    };
    let base: KodairaCurveType = head.parse()?;
    let stabilizer = if order == 1 {
        FgAbelianGroup::trivial()
    } else {
        stabilizer_from_order(base, order)?
    };
    Ok((base, stabilizer))
}

/// Parse the multiple-fiber subtype body (everything after "m*"). The
/// orientation-reversing variants need `m` to resolve the parity of r = R/k
/// when the printed stabilizer order is 4.
fn parse_subtype(s: &str, m: u32) -> Result<MultipleSubtype> {
    if let Some(tag) = ExceptionalTag::ALL.iter().find(|t| t.as_str() == s) {
        return Ok(MultipleSubtype::Exceptional { tag: *tag });
    }
    if s == "I0" {
        return Ok(MultipleSubtype::I0);
    }
    if let Some(d) = s.strip_prefix("I0+") {
        let d: u32 = d.map_err_parse(s, "twist order")?;
        return Ok(MultipleSubtype::I0Plus { d });
    }
    if let Some((r_part, k_part)) = s.split_once('^') {
        let big_r: u32 = r_part
            .strip_prefix('I')
            .ok_or_else(|| Error::Parse(format!("bad subtype {s:?}")))?
            .map_err_parse(s, "R")?;
        let k: u32 = k_part.map_err_parse(s, "k")?;
        return Ok(MultipleSubtype::IRk { k, big_r });
    }
    // Orientation-reversing: I{R}+[/g] or I{R}-[/g].
    if let Some(body) = s.strip_prefix('I') {
        for (sign, minus) in [('+', false), ('-', true)] {
            if let Some((r_part, rest)) = body.split_once(sign) {
                if r_part.chars().all(|c| c.is_ascii_digit()) && !r_part.is_empty() {
                    let big_r: u32 = r_part.map_err_parse(s, "R")?;
                    let order: u64 = match rest.strip_prefix('/') {
                        Some(o) => o.map_err_parse(s, "stabilizer order")?,
                        None if rest.is_empty() => 1,
                        None => return Err(Error::Parse(format!("bad subtype {s:?}"))),
                    };
                    let stabilizer = reversing_stabilizer(order, big_r, m, minus)?;
                    return Ok(if minus {
                        MultipleSubtype::IRMinus { big_r, stabilizer }
                    } else {
                        MultipleSubtype::IRPlus { big_r, stabilizer }
                    });
                }
            }
        }
    }
    let (base, stabilizer) = parse_suffixed_base(s)?;
    Ok(MultipleSubtype::UnstableLike { base, stabilizer })
}

fn reversing_stabilizer(order: u64, big_r: u32, m: u32, minus: bool) -> Result<FgAbelianGroup> {
    match order {
        1 => Ok(FgAbelianGroup::trivial()),
        2 => Ok(FgAbelianGroup::cyclic(2)),
        4 if !minus => {
            if m == 0 || m % 2 != 0 {
                return Err(Error::Parse(format!("I_R^+/4 requires even m, got {m}")));
            }
            let k = m / 2;
            if k == 0 || big_r % k != 0 {
                return Err(Error::Parse(format!("R = {big_r} is not a multiple of k = {k}")));
            }
            let r = big_r / k;
            Ok(if r % 2 == 0 {
                FgAbelianGroup::from_orders(&[2, 2])
            } else {
                FgAbelianGroup::cyclic(4)
            })
        }
        _ => Err(Error::Parse(format!(
            "stabilizer order {order} impossible for orientation-reversing quotients"
        ))),
    }
}

trait ParseField {
    fn map_err_parse<T: std::str::FromStr>(&self, ctx: &str, what: &str) -> Result<T>;
}
impl ParseField for str {
    fn map_err_parse<T: std::str::FromStr>(&self, ctx: &str, what: &str) -> Result<T> {
        self.parse()
            .map_err(|_| Error::Parse(format!("bad {what} in {ctx:?}")))
    }
}

impl std::str::FromStr for KodairaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // A leading all-digit segment before '*' is a multiplicity prefix
        // ("2*I0*-b" splits at the first '*'; "I3*" does not).
        if let Some((head, rest)) = s.split_once('*') {
            if !head.is_empty() && head.chars().all(|c| c.is_ascii_digit()) {
                let m: u32 = head.map_err_parse(s, "multiplicity")?;
                let subtype = parse_subtype(rest, m)?;
                let t = KodairaType::Multiple { m, subtype };
                return match validate(&t).first() {
                    None => Ok(t),
                    Some(v) => Err(Error::Parse(format!("{s:?}: {v}"))),
                };
            }
        }
        let (base, stabilizer) = parse_suffixed_base(s)?;
        let t = match base {
            KodairaCurveType::I(r) => {
                if !stabilizer.is_trivial() {
                    return Err(Error::Parse(format!(
                        "semistable {base} takes no stabilizer suffix"
                    )));
                }
                KodairaType::semistable(r)
            }
            _ => KodairaType::Unstable { base, stabilizer },
        };
        match validate(&t).first() {
            None => Ok(t),
            Some(v) => Err(Error::Parse(format!("{s:?}: {v}"))),
        }
    }
}
