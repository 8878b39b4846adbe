//! Inertia and base-change calculus: semistable degree-d base change, the
//! minimal reduction table for unstable types, the five-case pullback
//! taxonomy for Néron-model linear parts, and the admissibility classifier
//! listing every multiple-fiber subtype over a given t-automorphism type.

use crate::abelian::FgAbelianGroup;
use crate::config::KodairaCurveType;
use crate::types::{ExceptionalTag, KodairaType, MultipleSubtype};
use crate::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Linear part of the special fiber of a Néron model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearPart {
    /// Trivial linear part (good reduction).
    Zero,
    /// Multiplicative (torus) part.
    Gm,
    /// Additive (unipotent) part.
    Ga,
}

impl fmt::Display for LinearPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinearPart::Zero => "0",
            LinearPart::Gm => "Gm",
            LinearPart::Ga => "Ga",
        })
    }
}

impl std::str::FromStr for LinearPart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(LinearPart::Zero),
            "Gm" | "gm" => Ok(LinearPart::Gm),
            "Ga" | "ga" => Ok(LinearPart::Ga),
            _ => Err(Error::Parse(format!("unknown linear part {s:?}"))),
        }
    }
}

/// The five possible (P, Q) pullback comparisons of linear parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    V,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::I => "i",
            CaseLabel::II => "ii",
            CaseLabel::III => "iii",
            CaseLabel::IV => "iv",
            CaseLabel::V => "v",
        }
    }
}

/// A realizable cell of the pullback comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PullbackCase {
    pub case: CaseLabel,
    pub p_linear: LinearPart,
    pub q_linear: LinearPart,
}

/// Classify the (special-fiber, pullback) pair of linear parts. The
/// unrepresentable cells are exactly the ones where the pullback gains
/// multiplicative or loses additive structure, which monotonicity of the
/// pullback kernel (a unipotent group) forbids.
pub fn classify_pullback(p_linear: LinearPart, q_linear: LinearPart) -> Result<PullbackCase> {
    use LinearPart::*;
    let case = match (p_linear, q_linear) {
        (Zero, Zero) => CaseLabel::I,
        (Ga, Zero) => CaseLabel::II,
        (Gm, Gm) => CaseLabel::III,
        (Ga, Gm) => CaseLabel::IV,
        (Ga, Ga) => CaseLabel::V,
        _ => {
            return Err(Error::ImpossiblePullback(
                p_linear.to_string(),
                q_linear.to_string(),
            ))
        }
    };
    Ok(PullbackCase { case, p_linear, q_linear })
}

/// Result of a degree-d base change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseChangeResult {
    pub resulting_type: KodairaType,
    pub inertia_order: u32,
    pub notes: Vec<String>,
}

/// Inertia order of the untangled unstable families (the order of the
/// automorphism ψ generating the covering group of the minimal semistable
/// reduction). Star types of positive index have no fixed order: any even
/// degree reduces them.
fn fixed_inertia_order(base: KodairaCurveType) -> Option<u32> {
    use KodairaCurveType::*;
    match base {
        II | IIStar => Some(6),
        III | IIIStar => Some(4),
        IV | IVStar => Some(3),
        IStar(0) => Some(2),
        IStar(_) => None,
        I(_) => None,
    }
}

/// Apply a degree-d base change to a semistable or unstable type, following
/// the stated reduction patterns only; degrees outside them are rejected
/// rather than guessed.
pub fn base_change(t: &KodairaType, d: u32) -> Result<BaseChangeResult> {
    if d == 0 {
        return Err(Error::ReductionNotCovered("degree must be >= 1".into()));
    }
    match t {
        KodairaType::Semistable { r, .. } => Ok(BaseChangeResult {
            resulting_type: KodairaType::semistable(d * r),
            inertia_order: if *r == 0 { 1 } else { d },
            notes: vec![],
        }),
        KodairaType::Unstable { base, stabilizer } => {
            if d == 1 {
                return Ok(BaseChangeResult {
                    resulting_type: t.clone(),
                    inertia_order: 1,
                    notes: vec![],
                });
            }
            let mut notes = Vec::new();
            if !stabilizer.is_trivial() {
                notes.push(format!("G-twisted central fiber: G = {stabilizer}"));
            }
            let (resulting_type, inertia_order) = match base {
                KodairaCurveType::IStar(r) if *r >= 1 => {
                    if d % 2 != 0 {
                        return Err(Error::ReductionNotCovered(format!(
                            "degree {d} for {base}: only even degrees are stated"
                        )));
                    }
                    (KodairaType::semistable(d * r), d)
                }
                _ => {
                    let e = fixed_inertia_order(*base).ok_or_else(|| {
                        Error::WrongKind(format!("{base} is not an unstable base"))
                    })?;
                    if d % e != 0 {
                        return Err(Error::ReductionNotCovered(format!(
                            "degree {d} for {base}: inertia order is {e}"
                        )));
                    }
                    (KodairaType::semistable(0), e)
                }
            };
            Ok(BaseChangeResult { resulting_type, inertia_order, notes })
        }
        KodairaType::Multiple { .. } => Err(Error::WrongKind(
            "base change is defined on semistable and unstable types".into(),
        )),
    }
}

/// Minimal semistable reduction of an unstable type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemistableReduction {
    pub minimal_degree: u32,
    pub reduced_type: KodairaType,
    /// Nontrivial stabilizer of a tangled input, surviving as a twist of the
    /// central fiber of the reduced family.
    pub g_twist: Option<FgAbelianGroup>,
    /// The inertia generator's order formula.
    pub inertia_formula: String,
}

/// Minimal degree and reduced type of the semistable reduction of an
/// unstable type.
pub fn semistable_reduction(t: &KodairaType) -> Result<SemistableReduction> {
    let KodairaType::Unstable { base, stabilizer } = t else {
        return Err(Error::WrongKind(format!("{t} is already semistable or multiple")));
    };
    let (minimal_degree, reduced_type) = match base {
        KodairaCurveType::IStar(r) if *r >= 1 => (2, KodairaType::semistable(2 * r)),
        _ => {
            let e = fixed_inertia_order(*base)
                .ok_or_else(|| Error::WrongKind(format!("{base} is not unstable")))?;
            (e, KodairaType::semistable(0))
        }
    };
    Ok(SemistableReduction {
        minimal_degree,
        reduced_type,
        g_twist: if stabilizer.is_trivial() { None } else { Some(stabilizer.clone()) },
        inertia_formula: format!("ord(psi) = {minimal_degree}"),
    })
}

/// Multiplicity congruence of the unstable-like family with the given base.
pub fn family_multiplicity_allowed(base: KodairaCurveType, m: u32) -> bool {
    use KodairaCurveType::*;
    match base {
        II | IIStar => m.gcd(&6) == 1,
        III | IIIStar => m % 2 == 1,
        IV | IVStar => m % 3 != 0,
        IStar(0) => m % 2 == 1,
        IStar(r) => m % 2 == 1 && r % m == 0,
        I(_) => false,
    }
}

/// Full admissibility congruence for a multiple-fiber subtype at
/// multiplicity m.
pub fn multiplicity_allowed(subtype: &MultipleSubtype, m: u32) -> bool {
    match subtype {
        MultipleSubtype::I0 => true,
        MultipleSubtype::I0Plus { d } => *d >= 2 && m % d == 0,
        MultipleSubtype::IRk { k, big_r } => *k >= 1 && m % k == 0 && big_r % k == 0,
        MultipleSubtype::IRPlus { big_r, .. } | MultipleSubtype::IRMinus { big_r, .. } => {
            m % 2 == 0 && m >= 2 && big_r % (m / 2) == 0
        }
        MultipleSubtype::UnstableLike { base, .. } => family_multiplicity_allowed(*base, m),
        MultipleSubtype::Exceptional { tag } => tag.multiplicity_allowed(m),
    }
}

/// Whether a Table-4 exceptional row's "Type of P" column matches the given
/// unstable type (base family and stabilizer as printed).
fn exceptional_p_matches(tag: ExceptionalTag, base: KodairaCurveType, g: &FgAbelianGroup) -> bool {
    use KodairaCurveType::*;
    let iii_family = matches!(base, III | IIIStar);
    let ii_family = matches!(base, II | IIStar);
    match tag {
        ExceptionalTag::I0StarA => iii_family && g.is_trivial(),
        ExceptionalTag::I0StarAHalf | ExceptionalTag::I0StarB => {
            iii_family && *g == FgAbelianGroup::cyclic(2)
        }
        ExceptionalTag::I0StarC | ExceptionalTag::IVA | ExceptionalTag::IVStarA => {
            ii_family && g.is_trivial()
        }
    }
}

/// Every admissible multiplicity-m fiber subtype whose t-automorphism scheme
/// has type p. The reversing stabilizer pairing follows the stabilizer of p:
/// trivial gives the plain +, Z/2 gives +/2 and the bare −, the full
/// stabilizer gives +/4, and (Z/2)² additionally gives −/2.
pub fn multiple_fiber_types(p: &KodairaType, m: u32) -> Result<Vec<KodairaType>> {
    if m < 2 {
        return Err(Error::WrongKind("multiplicity must be >= 2".into()));
    }
    let mut out: Vec<KodairaType> = Vec::new();
    match p {
        KodairaType::Semistable { r: 0, .. } => {
            out.push(KodairaType::multiple(m, MultipleSubtype::I0)?);
        }
        KodairaType::Semistable { r, .. } => {
            for k in 1..=m {
                if m % k == 0 {
                    out.push(KodairaType::multiple(
                        m,
                        MultipleSubtype::IRk { k, big_r: k * r },
                    )?);
                }
            }
        }
        KodairaType::Unstable { base: KodairaCurveType::IStar(r), stabilizer } if *r >= 1 => {
            if m % 2 == 0 {
                let k = m / 2;
                let big_r = k * r;
                let g2 = FgAbelianGroup::cyclic(2);
                let g4 = FgAbelianGroup::cyclic(4);
                let g22 = FgAbelianGroup::from_orders(&[2, 2]);
                let mut push = |sub: MultipleSubtype| -> Result<()> {
                    out.push(KodairaType::multiple(m, sub)?);
                    Ok(())
                };
                if stabilizer.is_trivial() {
                    push(MultipleSubtype::IRPlus { big_r, stabilizer: FgAbelianGroup::trivial() })?;
                } else if *stabilizer == g2 {
                    push(MultipleSubtype::IRPlus { big_r, stabilizer: g2.clone() })?;
                    push(MultipleSubtype::IRMinus { big_r, stabilizer: FgAbelianGroup::trivial() })?;
                } else if *stabilizer == g4 {
                    push(MultipleSubtype::IRPlus { big_r, stabilizer: g4 })?;
                } else if *stabilizer == g22 {
                    push(MultipleSubtype::IRPlus { big_r, stabilizer: g22 })?;
                    push(MultipleSubtype::IRMinus { big_r, stabilizer: g2 })?;
                }
            } else {
                out.push(KodairaType::multiple(
                    m,
                    MultipleSubtype::UnstableLike {
                        base: KodairaCurveType::IStar(m * r),
                        stabilizer: stabilizer.clone(),
                    },
                )?);
            }
        }
        KodairaType::Unstable { base, stabilizer } => {
            if let Some(e) = fixed_inertia_order(*base) {
                if e >= 2 && m % e == 0 {
                    out.push(KodairaType::multiple(m, MultipleSubtype::I0Plus { d: e })?);
                }
            }
            if family_multiplicity_allowed(*base, m) {
                out.push(KodairaType::multiple(
                    m,
                    MultipleSubtype::UnstableLike { base: *base, stabilizer: stabilizer.clone() },
                )?);
            }
            for tag in ExceptionalTag::ALL {
                if exceptional_p_matches(tag, *base, stabilizer) && tag.multiplicity_allowed(m) {
                    out.push(KodairaType::multiple(m, MultipleSubtype::Exceptional { tag })?);
                }
            }
        }
        KodairaType::Multiple { .. } => {
            return Err(Error::WrongKind(
                "the t-automorphism type is semistable or unstable, not multiple".into(),
            ))
        }
    }
    Ok(out)
}
