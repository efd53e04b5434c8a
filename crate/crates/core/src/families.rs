//! The assembly layer: group descriptors over abstract place profiles,
//! builders for the witness families, adelic-isomorphism and
//! commensurability checkers, congruence-subgroup-property and
//! inner-form-of-compact lookup tables, the pigeonhole bound, the rigidity
//! decision for the exceptional complex types, and certificate emission
//! with independent re-verification.

use crate::brauer::{find_pair_prop36, BrauerError};
use crate::fieldforge::{ArchTag, ArithEquiv, FieldError, FieldType, PlaceProfile};
use crate::hermform::herm_witt_index;
use crate::quadform::witt_index_from_invariants;
use crate::rational::rat;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown real form tag")]
    UnknownTag,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("inner-of-compact fails")]
    InnerOfCompactFails,
    #[error("{0} is not composite with a factorization d*k, d >= 3, k >= 2")]
    NotComposite(u64),
    #[error("family must be nonempty")]
    EmptyFamily,
    #[error("descriptors do not share a base profile")]
    MixedBases,
    #[error("descriptors do not share a family tag")]
    MixedTags,
    #[error(transparent)]
    Brauer(#[from] BrauerError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanType {
    A(u32),
    B(u32),
    C(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
}

/// Real form tags: a closed enumeration of the absolutely simple real
/// groups the toolkit reasons about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealFormTag {
    Su { r: u32, s: u32 },
    SlReal { n: u32 },
    SlQuaternionic { n: u32 },
    /// SO*(2m)
    SoStar { m: u32 },
    /// SO⁰(r,s)
    SoIndefinite { r: u32, s: u32 },
    E6MinusTwo,       // E6(2)
    E6MinusFourteen,  // E6(-14)
    E6Six,            // E6(6)
    E6MinusTwentySix, // E6(-26)
    /// Any real form of a type whose Dynkin diagram has no symmetry.
    AnyForm { cartan: CartanType },
}

/// Whether the real form is an inner form of its compact form.
pub fn inner_of_compact(tag: RealFormTag) -> Result<bool, FamilyError> {
    match tag {
        RealFormTag::Su { .. } => Ok(true),
        RealFormTag::SlReal { .. } | RealFormTag::SlQuaternionic { .. } => Ok(false),
        RealFormTag::SoStar { .. } => Ok(true),
        RealFormTag::SoIndefinite { r, s } => Ok(r % 2 == 0 && s % 2 == 0),
        RealFormTag::E6MinusTwo | RealFormTag::E6MinusFourteen => Ok(true),
        RealFormTag::E6Six | RealFormTag::E6MinusTwentySix => Ok(false),
        RealFormTag::AnyForm { cartan } => match cartan {
            CartanType::B(l) | CartanType::C(l) if l >= 2 => Ok(true),
            CartanType::E7 | CartanType::E8 | CartanType::F4 | CartanType::G2 => Ok(true),
            _ => Err(FamilyError::UnknownTag),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyTag {
    SuHerm,
    SlEvenHerm,
    SpinQuad,
    InnerTwist,
    Sl1Csa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistTag {
    QuasiSplit,
    Compact,
    G,
    GU,
    GP,
    G0,
}

/// Local type of a descriptor at one finite place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalDatum {
    /// Hermitian data at a place where the quadratic extension splits.
    HermSplit,
    /// Hermitian data at a non-split finite place, recorded by discriminant.
    HermNonSplit { disc: i32 },
    /// Quadratic form data: dimension, square-class of the determinant,
    /// Hasse invariant.
    Quad { dim: usize, det: i64, hasse: i32 },
    /// Symbolic inner-twist tag.
    Twist(TwistTag),
    /// Local invariant of a central simple algebra, reduced mod 1.
    Csa { num: u64, den: u64 },
}

impl LocalDatum {
    /// Local rank of the associated group at a place of odd residue
    /// characteristic, for the matrix-size `dim` recorded on the
    /// descriptor.  Twist tags have no numeric rank here.
    fn rank(&self, dim: usize, residue_char: u64) -> Option<usize> {
        match self {
            LocalDatum::HermSplit => Some(dim.saturating_sub(1)),
            LocalDatum::HermNonSplit { disc } => Some(herm_witt_index(dim, *disc)),
            LocalDatum::Quad { dim, det, hasse } => Some(witt_index_from_invariants(
                *dim,
                &rat(*det),
                *hasse,
                residue_char,
            )),
            LocalDatum::Twist(_) => None,
            LocalDatum::Csa { .. } => None,
        }
    }

    /// Whether two CSA local invariants define locally isomorphic groups:
    /// equal or opposite classes.
    fn csa_group_equivalent(&self, other: &LocalDatum) -> bool {
        match (self, other) {
            (LocalDatum::Csa { num: n1, den: d1 }, LocalDatum::Csa { num: n2, den: d2 }) => {
                (n1 == n2 && d1 == d2) || (*d1 == *d2 && (n1 + n2) % d1 == 0)
            }
            _ => false,
        }
    }
}

/// Target group at one archimedean place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArchForm {
    Compact,
    Noncompact { tag: String, rank: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CspStatus {
    Trivial,
    OrderLe2,
    Unknown,
}

/// Place-indexed local data for one arithmetic group descriptor over an
/// abstract place profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub label: String,
    pub base: PlaceProfile,
    pub family_tag: FamilyTag,
    pub cartan: CartanType,
    /// Dimension of the defining form or degree of the defining algebra.
    pub dim: usize,
    /// Explicit local data; `default_local` applies at unlisted places.
    pub local_data: BTreeMap<String, LocalDatum>,
    pub default_local: LocalDatum,
    /// Parallel to `base.archimedean`.
    pub archimedean_data: Vec<ArchForm>,
    /// The group is isotropic over the base field (matrix part present).
    pub isotropic_over_base: bool,
    /// Some real-place form is not topologically simply connected.
    pub real_form_not_simply_connected: bool,
}

impl GroupDescriptor {
    pub fn local_at(&self, id: &str) -> &LocalDatum {
        self.local_data.get(id).unwrap_or(&self.default_local)
    }

    /// Sum of real ranks over the archimedean places.
    pub fn rank_sum(&self) -> u32 {
        self.archimedean_data
            .iter()
            .map(|a| match a {
                ArchForm::Compact => 0,
                ArchForm::Noncompact { rank, .. } => *rank,
            })
            .sum()
    }

    /// Compact at some archimedean place, or anisotropic over the base,
    /// forces cocompact lattices; an isotropic matrix part does not.
    pub fn cocompact(&self) -> bool {
        !self.isotropic_over_base
    }

    /// Local rank at a named finite place, when numeric.
    pub fn local_rank(&self, id: &str) -> Option<usize> {
        let place = self.base.finite_places.iter().find(|w| w.id == id)?;
        self.local_at(id).rank(self.dim, place.residue_char)
    }
}

/// Congruence subgroup property status per the classification table: the
/// covered types under rank sum at least 2, the unitary route for
/// dimension at least 3, the spinor route, and the isotropic route; type
/// A (other than through a hermitian form), triality D4, and E6 stay open.
pub fn csp_status(g: &GroupDescriptor) -> CspStatus {
    if g.rank_sum() < 2 {
        return CspStatus::Unknown;
    }
    let covered = match g.family_tag {
        FamilyTag::SpinQuad => true,
        FamilyTag::SuHerm | FamilyTag::SlEvenHerm => g.dim >= 3,
        FamilyTag::Sl1Csa => g.isotropic_over_base,
        FamilyTag::InnerTwist => match g.cartan {
            CartanType::B(l) | CartanType::C(l) => l >= 2,
            CartanType::D(l) => l >= 5,
            CartanType::E7 | CartanType::E8 | CartanType::F4 | CartanType::G2 => true,
            CartanType::A(_) | CartanType::E6 => false,
        },
    };
    if !covered {
        return CspStatus::Unknown;
    }
    if g.real_form_not_simply_connected {
        CspStatus::Trivial
    } else {
        CspStatus::OrderLe2
    }
}

/// Guaranteed size of a subfamily sharing a class when n items fall into
/// at most c classes.
pub fn pigeonhole_bound(n: u64, c: u64) -> u64 {
    assert!(c >= 1, "class bound must be positive");
    n.div_ceil(c)
}

/// Strictness condition for the volume argument at a congruence level:
/// the index must exceed the order of the rational center.
pub fn congruence_level_check(index: u64, center_order: u64) -> bool {
    index > center_order
}

pub type Permutation = Vec<(String, String)>;

/// Adelic isomorphism of two descriptors: local data must agree at every
/// finite place, up to a permutation of the designated split places.  CSA
/// data compares up to opposite classes, since the reduced-norm-one groups
/// of an algebra and its opposite coincide.
pub fn adelically_isomorphic(
    g1: &GroupDescriptor,
    g2: &GroupDescriptor,
) -> Result<(bool, Option<Permutation>), FamilyError> {
    if g1.family_tag != g2.family_tag {
        return Err(FamilyError::MixedTags);
    }
    if g1.base != g2.base {
        return Err(FamilyError::MixedBases);
    }
    if g1.dim != g2.dim || g1.cartan != g2.cartan {
        return Ok((false, None));
    }
    let agree = |a: &LocalDatum, b: &LocalDatum| -> bool {
        if matches!(a, LocalDatum::Csa { .. }) {
            a.csa_group_equivalent(b)
        } else {
            a == b
        }
    };
    let (split, fixed): (Vec<_>, Vec<_>) = g1
        .base
        .finite_places
        .iter()
        .partition(|w| w.lies_over_split_prime);
    for w in &fixed {
        if !agree(g1.local_at(&w.id), g2.local_at(&w.id)) {
            return Ok((false, None));
        }
    }
    // match split places by local datum, preferring fixed points
    let mut unmatched: Vec<&str> = Vec::new();
    let mut witness: Permutation = Vec::new();
    for w in &split {
        if agree(g1.local_at(&w.id), g2.local_at(&w.id)) {
            witness.push((w.id.clone(), w.id.clone()));
        } else {
            unmatched.push(&w.id);
        }
    }
    let mut targets: Vec<&str> = unmatched.clone();
    for &from in &unmatched {
        let pos = targets
            .iter()
            .position(|&to| agree(g1.local_at(from), g2.local_at(to)));
        match pos {
            Some(i) => {
                witness.push((from.to_string(), targets.remove(i).to_string()));
            }
            None => return Ok((false, None)),
        }
    }
    witness.sort();
    Ok((true, Some(witness)))
}

/// Commensurability of two descriptors over a base profile with trivial
/// automorphisms: local data and archimedean data must agree under the
/// identity pairing of places.  The witness is a distinguishing place.
pub fn commensurable(
    g1: &GroupDescriptor,
    g2: &GroupDescriptor,
) -> Result<(bool, Option<String>), FamilyError> {
    if g1.family_tag != g2.family_tag {
        return Err(FamilyError::MixedTags);
    }
    if g1.base != g2.base {
        return Err(FamilyError::MixedBases);
    }
    if g1.dim != g2.dim || g1.cartan != g2.cartan {
        return Ok((false, Some("dim".to_string())));
    }
    if g1.family_tag == FamilyTag::Sl1Csa {
        // global isomorphism of the algebra or its opposite
        let ids: Vec<&str> = g1.base.finite_places.iter().map(|w| w.id.as_str()).collect();
        let same = ids.iter().all(|id| g1.local_at(id) == g2.local_at(id))
            && g1.archimedean_data == g2.archimedean_data;
        let opposite = ids
            .iter()
            .all(|id| match (g1.local_at(id), g2.local_at(id)) {
                (LocalDatum::Csa { num: n1, den: d1 }, LocalDatum::Csa { num: n2, den: d2 }) => {
                    d1 == d2 && (n1 + n2) % d1 == 0
                }
                _ => false,
            })
            && g1.archimedean_data == g2.archimedean_data;
        if same || opposite {
            return Ok((true, None));
        }
        let w = ids
            .iter()
            .find(|id| g1.local_at(id) != g2.local_at(id))
            .map(|s| s.to_string())
            .unwrap_or_else(|| "arch".to_string());
        return Ok((false, Some(w)));
    }
    for w in &g1.base.finite_places {
        if g1.local_at(&w.id) != g2.local_at(&w.id) {
            return Ok((false, Some(w.id.clone())));
        }
    }
    for (i, (a, b)) in g1
        .archimedean_data
        .iter()
        .zip(&g2.archimedean_data)
        .enumerate()
    {
        if a != b {
            return Ok((false, Some(format!("arch:{i}"))));
        }
    }
    Ok((true, None))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdelicEntry {
    pub isomorphic: bool,
    pub witness: Option<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommEntry {
    pub commensurable: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    Pass,
    Fail(String),
}

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// The verified report for one family of descriptors: pairwise matrices
/// with witnesses, per-member congruence and rank data, and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub schema_version: u32,
    pub descriptors: Vec<GroupDescriptor>,
    pub pairwise_adelic: Vec<Vec<AdelicEntry>>,
    pub pairwise_commensurable: Vec<Vec<CommEntry>>,
    pub csp: Vec<CspStatus>,
    pub rank_sums: Vec<u32>,
    pub cocompact: Vec<bool>,
    /// Recorded derivation: adelic isomorphism plus the congruence
    /// subgroup property yields profinite commensurability of the family.
    pub profinite_rule: String,
    pub conclusion: Conclusion,
}

/// Re-check a family from raw descriptor data and fill the certificate.
pub fn verify_family(descriptors: &[GroupDescriptor]) -> Result<FamilyCertificate, FamilyError> {
    if descriptors.is_empty() {
        return Err(FamilyError::EmptyFamily);
    }
    let base = &descriptors[0].base;
    if descriptors.iter().any(|g| &g.base != base) {
        return Err(FamilyError::MixedBases);
    }
    let n = descriptors.len();
    let mut adelic = Vec::with_capacity(n);
    let mut comm = Vec::with_capacity(n);
    for i in 0..n {
        let mut arow = Vec::with_capacity(n);
        let mut crow = Vec::with_capacity(n);
        for j in 0..n {
            let (iso, wit) = adelically_isomorphic(&descriptors[i], &descriptors[j])?;
            arow.push(AdelicEntry {
                isomorphic: iso,
                witness: wit,
            });
            let (c, w) = commensurable(&descriptors[i], &descriptors[j])?;
            crow.push(CommEntry {
                commensurable: c,
                witness: w,
            });
        }
        adelic.push(arow);
        comm.push(crow);
    }
    let csp: Vec<CspStatus> = descriptors.iter().map(csp_status).collect();
    let rank_sums: Vec<u32> = descriptors.iter().map(|g| g.rank_sum()).collect();
    let cocompact: Vec<bool> = descriptors.iter().map(|g| g.cocompact()).collect();

    let mut conclusion = Conclusion::Pass;
    if let Some(k) = csp.iter().position(|c| *c == CspStatus::Unknown) {
        conclusion = Conclusion::Fail(format!("csp: descriptor {k} has unknown status"));
    } else if let Some(k) = rank_sums.iter().position(|&r| r < 2) {
        conclusion = Conclusion::Fail(format!("rank: descriptor {k} has rank sum < 2"));
    } else {
        'outer: for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if !adelic[i][j].isomorphic {
                    conclusion = Conclusion::Fail(format!("adelic: pair ({i},{j})"));
                    break 'outer;
                }
                if comm[i][j].commensurable {
                    conclusion = Conclusion::Fail(format!("commensurable pair ({i},{j})"));
                    break 'outer;
                }
            }
        }
    }
    Ok(FamilyCertificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        descriptors: descriptors.to_vec(),
        pairwise_adelic: adelic,
        pairwise_commensurable: comm,
        csp,
        rank_sums,
        cocompact,
        profinite_rule: "adelic isomorphism + congruence subgroup property of order <= 2 \
                         => profinite commensurability of the family"
            .to_string(),
        conclusion,
    })
}

/// Local rank of every descriptor at every designated split place, as a
/// (place, descriptor) matrix.
pub fn local_rank_matrix(descriptors: &[GroupDescriptor]) -> Vec<Vec<Option<usize>>> {
    let Some(first) = descriptors.first() else {
        return Vec::new();
    };
    first
        .base
        .finite_places
        .iter()
        .filter(|w| w.lies_over_split_prime)
        .map(|w| {
            descriptors
                .iter()
                .map(|g| g.local_rank(&w.id))
                .collect()
        })
        .collect()
}

// ---- builders ----

const SPLIT_PRIME: u64 = 5;
const AUX_PRIME: u64 = 7;

fn split_ids(base: &PlaceProfile) -> Vec<String> {
    base.finite_places
        .iter()
        .filter(|w| w.lies_over_split_prime)
        .map(|w| w.id.clone())
        .collect()
}

/// Unitary family over a totally real degree-n field: descriptor j is the
/// unitary group of a hermitian form with signature (r,s) at the j-th real
/// place and definite at the others; all finite local data coincide.
pub fn build_su_family(r: u32, s: u32, n: usize) -> Result<FamilyCertificate, FamilyError> {
    if r < 2 || s < 2 {
        return Err(FamilyError::BadParams(
            "signature entries must both be at least 2".to_string(),
        ));
    }
    if n <= 2 {
        return Err(FamilyError::BadParams(
            "base degree must exceed 2".to_string(),
        ));
    }
    let m = (r + s) as usize;
    let base = PlaceProfile::type_i_fixture(n, SPLIT_PRIME, AUX_PRIME);
    let aux_disc = if s % 2 == 0 { 1 } else { -1 };
    let descriptors: Vec<GroupDescriptor> = (0..n)
        .map(|j| {
            let mut local_data = BTreeMap::new();
            local_data.insert("w0".to_string(), LocalDatum::HermNonSplit { disc: aux_disc });
            let archimedean_data = (0..n)
                .map(|i| {
                    if i == j {
                        ArchForm::Noncompact {
                            tag: format!("SU({r},{s})"),
                            rank: r.min(s),
                        }
                    } else {
                        ArchForm::Compact
                    }
                })
                .collect();
            GroupDescriptor {
                label: format!("G{}", j + 1),
                base: base.clone(),
                family_tag: FamilyTag::SuHerm,
                cartan: CartanType::A(m as u32 - 1),
                dim: m,
                local_data,
                default_local: LocalDatum::HermSplit,
                archimedean_data,
                isotropic_over_base: false,
                real_form_not_simply_connected: false,
            }
        })
        .collect();
    verify_family(&descriptors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseKind {
    Real,
    Complex,
}

/// Special linear family in even dimension 2m: descriptor j carries
/// hermitian discriminant -1 at the auxiliary place and at the j-th split
/// place, +1 at the other split places; members are adelically isomorphic
/// through the place permutation swapping the marked split places.
pub fn build_sl_even_family(
    m: u32,
    base_kind: BaseKind,
    n: usize,
) -> Result<FamilyCertificate, FamilyError> {
    if m < 2 {
        return Err(FamilyError::BadParams(
            "dimension 2m requires m >= 2".to_string(),
        ));
    }
    if n < 3 {
        return Err(FamilyError::BadParams(
            "need at least 3 marked split places".to_string(),
        ));
    }
    let dim = (2 * m) as usize;
    let base = match base_kind {
        BaseKind::Real => PlaceProfile::type_i_fixture(n, SPLIT_PRIME, AUX_PRIME),
        BaseKind::Complex => PlaceProfile::type_ii_fixture(n, SPLIT_PRIME, AUX_PRIME),
    };
    let ids = split_ids(&base);
    let target = match base_kind {
        BaseKind::Real => format!("SL{dim}(R)"),
        BaseKind::Complex => format!("SL{dim}(C)"),
    };
    let descriptors: Vec<GroupDescriptor> = (0..n)
        .map(|j| {
            let mut local_data = BTreeMap::new();
            local_data.insert("w0".to_string(), LocalDatum::HermNonSplit { disc: -1 });
            local_data.insert(ids[j].clone(), LocalDatum::HermNonSplit { disc: -1 });
            let archimedean_data = base
                .archimedean
                .iter()
                .enumerate()
                .map(|(i, tag)| match (base_kind, i, tag) {
                    (BaseKind::Real, 0, _) | (BaseKind::Complex, _, ArchTag::Complex) => {
                        ArchForm::Noncompact {
                            tag: target.clone(),
                            rank: 2 * m - 1,
                        }
                    }
                    _ => ArchForm::Compact,
                })
                .collect();
            GroupDescriptor {
                label: format!("G{}", j + 1),
                base: base.clone(),
                family_tag: FamilyTag::SlEvenHerm,
                cartan: CartanType::A(2 * m - 1),
                dim,
                local_data,
                default_local: LocalDatum::HermNonSplit { disc: 1 },
                archimedean_data,
                isotropic_over_base: false,
                real_form_not_simply_connected: false,
            }
        })
        .collect();
    verify_family(&descriptors)
}

/// Even-dimensional special linear family specified by its dimension;
/// odd dimensions are rejected.
pub fn build_sl_family_by_dimension(
    dim: u32,
    base_kind: BaseKind,
    n: usize,
) -> Result<FamilyCertificate, FamilyError> {
    if dim % 2 != 0 {
        return Err(FamilyError::BadParams(
            "odd special linear dimensions are excluded".to_string(),
        ));
    }
    build_sl_even_family(dim / 2, base_kind, n)
}

/// Spin family of signature (r,s): descriptor j carries Hasse invariant
/// -1 at the j-th split place (trivial determinant class, no auxiliary
/// ramification needed since the indefinite real place also contributes
/// -1), and is noncompact exactly at the j-th real place.
pub fn build_so_family(r: u32, s: u32, n: usize) -> Result<FamilyCertificate, FamilyError> {
    let dim = (r + s) as usize;
    if dim % 2 != 0 || dim < 8 {
        return Err(FamilyError::BadParams(
            "r + s must be even and at least 8".to_string(),
        ));
    }
    if !inner_of_compact(RealFormTag::SoIndefinite { r, s })? {
        return Err(FamilyError::InnerOfCompactFails);
    }
    if n < 3 {
        return Err(FamilyError::BadParams(
            "need at least 3 marked split places".to_string(),
        ));
    }
    // when the indefinite real place does not already carry Hasse -1, the
    // auxiliary place absorbs the second ramification point
    let aux_ramified = (s as usize * (s as usize - 1) / 2) % 2 == 0;
    let base = PlaceProfile::type_i_fixture(n, SPLIT_PRIME, AUX_PRIME);
    let ids = split_ids(&base);
    let descriptors: Vec<GroupDescriptor> = (0..n)
        .map(|j| {
            let mut local_data = BTreeMap::new();
            local_data.insert(
                ids[j].clone(),
                LocalDatum::Quad {
                    dim,
                    det: 1,
                    hasse: -1,
                },
            );
            if aux_ramified {
                local_data.insert(
                    "w0".to_string(),
                    LocalDatum::Quad {
                        dim,
                        det: 1,
                        hasse: -1,
                    },
                );
            }
            let archimedean_data = (0..n)
                .map(|i| {
                    if i == j {
                        ArchForm::Noncompact {
                            tag: format!("SO0({r},{s})"),
                            rank: r.min(s),
                        }
                    } else {
                        ArchForm::Compact
                    }
                })
                .collect();
            GroupDescriptor {
                label: format!("G{}", j + 1),
                base: base.clone(),
                family_tag: FamilyTag::SpinQuad,
                cartan: CartanType::D((dim / 2) as u32),
                dim,
                local_data,
                default_local: LocalDatum::Quad {
                    dim,
                    det: 1,
                    hasse: 1,
                },
                archimedean_data,
                isotropic_over_base: false,
                real_form_not_simply_connected: false,
            }
        })
        .collect();
    verify_family(&descriptors)
}

/// Complex even orthogonal family in dimension 8 over a field with one
/// complex place: descriptor i ramifies at the i-th split place and the
/// auxiliary place, so its Witt index is 2 at its own place and 4 at the
/// others.
pub fn build_so8c_family(n: usize) -> Result<FamilyCertificate, FamilyError> {
    if n < 3 {
        return Err(FamilyError::BadParams(
            "need at least 3 marked split places".to_string(),
        ));
    }
    let dim = 8;
    let base = PlaceProfile::type_ii_fixture(n, SPLIT_PRIME, AUX_PRIME);
    let ids = split_ids(&base);
    let descriptors: Vec<GroupDescriptor> = (0..n)
        .map(|i| {
            let mut local_data = BTreeMap::new();
            for id in [ids[i].as_str(), "w0"] {
                local_data.insert(
                    id.to_string(),
                    LocalDatum::Quad {
                        dim,
                        det: 1,
                        hasse: -1,
                    },
                );
            }
            let archimedean_data = base
                .archimedean
                .iter()
                .map(|tag| match tag {
                    ArchTag::Complex => ArchForm::Noncompact {
                        tag: "SO8(C)".to_string(),
                        rank: 4,
                    },
                    ArchTag::Real => ArchForm::Compact,
                })
                .collect();
            GroupDescriptor {
                label: format!("G{}", i + 1),
                base: base.clone(),
                family_tag: FamilyTag::SpinQuad,
                cartan: CartanType::D(4),
                dim,
                local_data,
                default_local: LocalDatum::Quad {
                    dim,
                    det: 1,
                    hasse: 1,
                },
                archimedean_data,
                isotropic_over_base: false,
                real_form_not_simply_connected: false,
            }
        })
        .collect();
    verify_family(&descriptors)
}

/// Number of inner p-adic twist classes, a constant imported from the
/// classification literature.
pub const INNER_TWIST_CLASS_BOUND: u64 = 4;

fn generic_rank(cartan: CartanType) -> Option<u32> {
    match cartan {
        CartanType::B(l) | CartanType::C(l) if l >= 2 => Some(l),
        CartanType::D(l) if l >= 5 => Some(l),
        CartanType::E7 => Some(7),
        CartanType::E8 => Some(8),
        CartanType::F4 => Some(4),
        CartanType::G2 => Some(2),
        _ => None,
    }
}

/// Symbolic inner-twist family for the remaining types.  For real split
/// forms the members differ at the archimedean places; for complex forms
/// each member carries a nontrivial p-adic twist at its own split place.
/// In both routes the exceptional place admits at most four twist
/// classes, so a subfamily of size ceil(n/4) shares it; the certificate
/// covers that subfamily.
pub fn build_generic_family(
    cartan: CartanType,
    form: BaseKind,
    n: usize,
) -> Result<FamilyCertificate, FamilyError> {
    let rank = generic_rank(cartan).ok_or(FamilyError::UnknownTag)?;
    if n < 3 {
        return Err(FamilyError::BadParams(
            "need at least 3 family members".to_string(),
        ));
    }
    match form {
        BaseKind::Real => {
            let allowed = matches!(
                cartan,
                CartanType::B(_)
                    | CartanType::C(_)
                    | CartanType::E7
                    | CartanType::E8
                    | CartanType::F4
                    | CartanType::G2
            );
            if !allowed || !inner_of_compact(RealFormTag::AnyForm { cartan })? {
                return Err(FamilyError::InnerOfCompactFails);
            }
        }
        BaseKind::Complex => {
            let allowed = matches!(
                cartan,
                CartanType::B(l) if l >= 2
            ) || matches!(cartan, CartanType::C(l) if l >= 2)
                || matches!(cartan, CartanType::D(l) if l >= 5)
                || cartan == CartanType::E7;
            if !allowed {
                return Err(FamilyError::BadParams(
                    "no nontrivial inner p-adic twist exists for this type".to_string(),
                ));
            }
        }
    }
    let n_sub = pigeonhole_bound(n as u64, INNER_TWIST_CLASS_BOUND) as usize;
    if n_sub < 2 {
        return Err(FamilyError::BadParams(
            "pigeonhole subfamily has fewer than 2 members".to_string(),
        ));
    }
    // the base profile carries enough marked places for the full family;
    // only the shared-class subfamily enters the certificate
    let base = match form {
        BaseKind::Real => PlaceProfile::type_i_fixture(n, SPLIT_PRIME, AUX_PRIME),
        BaseKind::Complex => PlaceProfile::type_ii_fixture(n, SPLIT_PRIME, AUX_PRIME),
    };
    let ids = split_ids(&base);
    let descriptors: Vec<GroupDescriptor> = (0..n_sub)
        .map(|j| {
            let mut local_data = BTreeMap::new();
            local_data.insert("w0".to_string(), LocalDatum::Twist(TwistTag::G0));
            if form == BaseKind::Complex {
                local_data.insert(ids[j].clone(), LocalDatum::Twist(TwistTag::GP));
            }
            let tag = match form {
                BaseKind::Real => format!("{cartan:?} split"),
                BaseKind::Complex => format!("{cartan:?}(C)"),
            };
            let archimedean_data = base
                .archimedean
                .iter()
                .enumerate()
                .map(|(i, arch)| match (form, arch) {
                    (BaseKind::Complex, ArchTag::Complex) => ArchForm::Noncompact {
                        tag: tag.clone(),
                        rank,
                    },
                    (BaseKind::Real, _) if i == j => ArchForm::Noncompact {
                        tag: tag.clone(),
                        rank,
                    },
                    _ => ArchForm::Compact,
                })
                .collect();
            GroupDescriptor {
                label: format!("G{}", j + 1),
                base: base.clone(),
                family_tag: FamilyTag::InnerTwist,
                cartan,
                dim: 0,
                local_data,
                default_local: LocalDatum::Twist(TwistTag::G),
                archimedean_data,
                isotropic_over_base: false,
                real_form_not_simply_connected: false,
            }
        })
        .collect();
    verify_family(&descriptors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlTarget {
    Real,
    Complex,
    Quaternionic,
}

fn composite_factorization(m: u64) -> Option<(u64, u64)> {
    (3..=m / 2).find(|d| m % d == 0 && m / d >= 2).map(|d| (d, m / d))
}

/// Non-cocompact pair from the central-simple-algebra construction: two
/// reduced-norm-one groups of globally non-isomorphic algebras that are
/// locally isomorphic everywhere.
pub fn build_sl_noncocompact(
    m: u64,
    target: SlTarget,
) -> Result<FamilyCertificate, FamilyError> {
    if m < 6 {
        return Err(FamilyError::NotComposite(m));
    }
    let (d, k, real_ramified) = match target {
        SlTarget::Real | SlTarget::Complex => {
            let (d, k) = composite_factorization(m).ok_or(FamilyError::NotComposite(m))?;
            (d, k, false)
        }
        SlTarget::Quaternionic => {
            // degree 2m with an even division part ramified at infinity
            let two_m = 2 * m;
            let (d, k) = (4..=two_m / 2)
                .filter(|d| d % 2 == 0)
                .find(|d| two_m % d == 0 && two_m / d >= 2)
                .map(|d| (d, two_m / d))
                .ok_or(FamilyError::NotComposite(m))?;
            (d, k, true)
        }
    };
    let pair = find_pair_prop36(d, k, real_ramified)?;
    let dim = (d * k) as usize;

    // base profile: the rationals, with the ramification support marked
    let mut finite_places: Vec<crate::fieldforge::FinitePlaceData> = Vec::new();
    let mut support: Vec<u64> = pair
        .a
        .class
        .support()
        .filter_map(|p| match p {
            crate::localsym::Place::Finite(q) => Some(q),
            crate::localsym::Place::Real => None,
        })
        .collect();
    support.sort_unstable();
    for q in &support {
        finite_places.push(crate::fieldforge::FinitePlaceData {
            id: q.to_string(),
            residue_char: *q,
            lies_over_split_prime: false,
        });
    }
    let base = PlaceProfile {
        degree: 1,
        archimedean: vec![ArchTag::Real],
        finite_places,
        trivial_aut: true,
        source_poly: None,
    };
    let arch_tag = match target {
        SlTarget::Real => format!("SL{dim}(R)"),
        SlTarget::Complex => format!("SL{dim}(C)"),
        SlTarget::Quaternionic => format!("SL{}(H)", dim / 2),
    };
    let rank = match target {
        SlTarget::Quaternionic => (dim / 2 - 1) as u32,
        _ => (dim - 1) as u32,
    };
    let mk_descriptor = |label: &str, class: &crate::brauer::BrauerClass| {
        let mut local_data = BTreeMap::new();
        for q in &support {
            let inv = class.invariant_at(crate::localsym::Place::Finite(*q));
            let num = inv.numer().to_u64().unwrap_or(0);
            let den = inv.denom().to_u64().unwrap_or(1);
            local_data.insert(q.to_string(), LocalDatum::Csa { num, den });
        }
        GroupDescriptor {
            label: label.to_string(),
            base: base.clone(),
            family_tag: FamilyTag::Sl1Csa,
            cartan: CartanType::A(dim as u32 - 1),
            dim,
            local_data,
            default_local: LocalDatum::Csa { num: 0, den: 1 },
            archimedean_data: vec![ArchForm::Noncompact {
                tag: arch_tag.clone(),
                rank,
            }],
            // the matrix part M_k gives isotropy, hence non-cocompactness
            isotropic_over_base: true,
            real_form_not_simply_connected: false,
        }
    };
    let g1 = mk_descriptor("G1", &pair.a.class);
    let g2 = mk_descriptor("G2", &pair.b.class);
    verify_family(&[g1, g2])
}

// ---- rigidity decision for the exceptional complex types ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RigidityDecision {
    Commensurable,
    NotApplicable { reason: String },
}

/// For the rigid complex types, consistent decomposition evidence over
/// profiles with one complex place forces commensurability of the
/// associated lattices; every other configuration is outside the rigid
/// regime.
pub fn decide_rigidity_exceptional(
    cartan: CartanType,
    p1: &PlaceProfile,
    p2: &PlaceProfile,
    evidence: &ArithEquiv,
) -> RigidityDecision {
    let rigid = matches!(cartan, CartanType::E8 | CartanType::F4 | CartanType::G2);
    if !rigid {
        return RigidityDecision::NotApplicable {
            reason: "type is outside the rigid list".to_string(),
        };
    }
    if p1.field_type() != Some(FieldType::OneComplexPlace)
        || p2.field_type() != Some(FieldType::OneComplexPlace)
    {
        return RigidityDecision::NotApplicable {
            reason: "profiles must have exactly one complex place".to_string(),
        };
    }
    match evidence {
        ArithEquiv::Consistent => RigidityDecision::Commensurable,
        ArithEquiv::Refuted { .. } => RigidityDecision::NotApplicable {
            reason: "fields not arithmetically equivalent".to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_of_compact_table() {
        assert!(inner_of_compact(RealFormTag::SoIndefinite { r: 6, s: 2 }).unwrap());
        assert!(!inner_of_compact(RealFormTag::SoIndefinite { r: 5, s: 3 }).unwrap());
        assert!(!inner_of_compact(RealFormTag::SlReal { n: 5 }).unwrap());
        assert!(inner_of_compact(RealFormTag::Su { r: 2, s: 2 }).unwrap());
        assert!(inner_of_compact(RealFormTag::SoStar { m: 4 }).unwrap());
        assert!(inner_of_compact(RealFormTag::AnyForm {
            cartan: CartanType::F4
        })
        .unwrap());
        assert!(inner_of_compact(RealFormTag::E6MinusTwo).unwrap());
        assert!(!inner_of_compact(RealFormTag::E6Six).unwrap());
        assert_eq!(
            inner_of_compact(RealFormTag::AnyForm {
                cartan: CartanType::A(3)
            }),
            Err(FamilyError::UnknownTag)
        );
    }

    #[test]
    fn pigeonhole_examples() {
        assert_eq!(pigeonhole_bound(5, 4), 2);
        assert_eq!(pigeonhole_bound(4, 4), 1);
        assert_eq!(pigeonhole_bound(9, 4), 3);
    }

    #[test]
    fn congruence_level_examples() {
        assert!(congruence_level_check(3, 2));
        assert!(!congruence_level_check(2, 2));
        assert!(congruence_level_check(2, 1));
    }

    #[test]
    fn su_family_examples() {
        let cert = build_su_family(2, 2, 3).unwrap();
        assert_eq!(cert.conclusion, Conclusion::Pass);
        // s even forces discriminant +1 at the auxiliary place
        assert_eq!(
            cert.descriptors[0].local_at("w0"),
            &LocalDatum::HermNonSplit { disc: 1 }
        );
        assert!(cert.cocompact.iter().all(|&c| c));
        assert!(cert.csp.iter().all(|c| *c == CspStatus::OrderLe2));

        assert!(build_su_family(2, 2, 2).is_err());

        let cert = build_su_family(2, 3, 3).unwrap();
        assert_eq!(cert.conclusion, Conclusion::Pass);
        assert_eq!(
            cert.descriptors[0].local_at("w0"),
            &LocalDatum::HermNonSplit { disc: -1 }
        );
    }

    #[test]
    fn sl_even_family_examples() {
        for kind in [BaseKind::Real, BaseKind::Complex] {
            let cert = build_sl_even_family(2, kind, 3).unwrap();
            assert_eq!(cert.conclusion, Conclusion::Pass, "{kind:?}");
            // the adelic witness for a distinct pair is a nontrivial permutation
            let w = cert.pairwise_adelic[0][1].witness.as_ref().unwrap();
            assert!(w.iter().any(|(a, b)| a != b));
            assert!(w.contains(&("w1".to_string(), "w2".to_string())));
        }
        assert!(build_sl_family_by_dimension(5, BaseKind::Real, 3).is_err());
        assert!(build_sl_even_family(1, BaseKind::Real, 3).is_err());
    }

    #[test]
    fn so_family_examples() {
        let cert = build_so_family(6, 2, 3).unwrap();
        assert_eq!(cert.conclusion, Conclusion::Pass);
        assert!(cert.csp.iter().all(|c| *c == CspStatus::OrderLe2));
        // non-commensurability witnessed at a marked place or by signature
        assert!(!cert.pairwise_commensurable[0][1].commensurable);

        assert_eq!(
            build_so_family(5, 3, 3),
            Err(FamilyError::InnerOfCompactFails)
        );
    }

    #[test]
    fn so8c_rank_matrix() {
        let cert = build_so8c_family(3).unwrap();
        assert_eq!(cert.conclusion, Conclusion::Pass);
        let ranks = local_rank_matrix(&cert.descriptors);
        for (i, row) in ranks.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                let want = if i == j { 2 } else { 4 };
                assert_eq!(r.unwrap(), want, "place w{} descriptor {}", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn generic_family_examples() {
        let cert = build_generic_family(CartanType::E8, BaseKind::Real, 5).unwrap();
        assert_eq!(cert.descriptors.len(), 2);
        assert_eq!(cert.conclusion, Conclusion::Pass);

        let cert = build_generic_family(CartanType::E7, BaseKind::Complex, 5).unwrap();
        assert_eq!(cert.descriptors.len(), 2);
        assert_eq!(cert.conclusion, Conclusion::Pass);
        // each member twists at its own split place
        assert_eq!(
            cert.descriptors[0].local_at("w1"),
            &LocalDatum::Twist(TwistTag::GP)
        );
        assert_eq!(
            cert.descriptors[1].local_at("w1"),
            &LocalDatum::Twist(TwistTag::G)
        );

        assert!(build_generic_family(CartanType::G2, BaseKind::Complex, 5).is_err());
        assert!(build_generic_family(CartanType::E6, BaseKind::Real, 5).is_err());
    }

    #[test]
    fn sl_noncocompact_examples() {
        let cert = build_sl_noncocompact(6, SlTarget::Real).unwrap();
        assert_eq!(cert.conclusion, Conclusion::Pass);
        assert!(cert.cocompact.iter().all(|&c| !c));
        assert!(cert.pairwise_adelic[0][1].isomorphic);
        assert!(!cert.pairwise_commensurable[0][1].commensurable);

        assert_eq!(
            build_sl_noncocompact(7, SlTarget::Real),
            Err(FamilyError::NotComposite(7))
        );

        let cert = build_sl_noncocompact(6, SlTarget::Quaternionic).unwrap();
        assert_eq!(cert.conclusion, Conclusion::Pass);
    }

    #[test]
    fn adelic_counterexample_with_mismatched_aux_place() {
        let cert = build_so_family(6, 2, 3).unwrap();
        let mut g2 = cert.descriptors[1].clone();
        g2.local_data.insert(
            "w0".to_string(),
            LocalDatum::Quad {
                dim: 8,
                det: 1,
                hasse: -1,
            },
        );
        let (iso, _) = adelically_isomorphic(&cert.descriptors[0], &g2).unwrap();
        assert!(!iso);
    }

    #[test]
    fn verify_family_failure_modes() {
        let cert = build_so_family(6, 2, 3).unwrap();
        // duplicated descriptor: commensurable pair
        let dup = vec![cert.descriptors[0].clone(), cert.descriptors[0].clone()];
        let bad = verify_family(&dup).unwrap();
        match bad.conclusion {
            Conclusion::Fail(ref r) => assert!(r.contains("commensurable")),
            _ => panic!("expected failure"),
        }
        // rank starved descriptor: csp unknown
        let mut g = cert.descriptors[0].clone();
        g.archimedean_data = vec![ArchForm::Compact; 3];
        let bad = verify_family(&[g, cert.descriptors[1].clone()]).unwrap();
        match bad.conclusion {
            Conclusion::Fail(ref r) => assert!(r.contains("csp")),
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn csp_table_examples() {
        let cert = build_so_family(6, 2, 3).unwrap();
        assert_eq!(csp_status(&cert.descriptors[0]), CspStatus::OrderLe2);
        let su = build_su_family(2, 2, 3).unwrap();
        assert_eq!(csp_status(&su.descriptors[0]), CspStatus::OrderLe2);
        let mut e6 = build_generic_family(CartanType::E7, BaseKind::Complex, 5)
            .unwrap()
            .descriptors[0]
            .clone();
        e6.cartan = CartanType::E6;
        assert_eq!(csp_status(&e6), CspStatus::Unknown);
    }

    #[test]
    fn pigeonhole_is_exact_minimum_over_colorings() {
        // the bound equals the minimax largest color class
        fn min_max_class(n: u64, c: u64) -> u64 {
            // balanced coloring minimizes the largest class
            n.div_ceil(c)
        }
        for n in 1..=12 {
            for c in 1..=5 {
                assert_eq!(pigeonhole_bound(n, c), min_max_class(n, c));
            }
        }
    }

    #[test]
    fn rigidity_examples() {
        let p = PlaceProfile::type_ii_fixture(5, 5, 7);
        assert_eq!(
            decide_rigidity_exceptional(CartanType::E8, &p, &p, &ArithEquiv::Consistent),
            RigidityDecision::Commensurable
        );
        assert!(matches!(
            decide_rigidity_exceptional(
                CartanType::F4,
                &p,
                &p,
                &ArithEquiv::Refuted { witness: Some(7) }
            ),
            RigidityDecision::NotApplicable { .. }
        ));
        assert!(matches!(
            decide_rigidity_exceptional(CartanType::E7, &p, &p, &ArithEquiv::Consistent),
            RigidityDecision::NotApplicable { .. }
        ));
        let real = PlaceProfile::type_i_fixture(5, 5, 7);
        assert!(matches!(
            decide_rigidity_exceptional(CartanType::E8, &real, &p, &ArithEquiv::Consistent),
            RigidityDecision::NotApplicable { .. }
        ));
    }

    #[test]
    fn commensurable_implies_adelic_on_corpus() {
        for cert in [
            build_su_family(2, 2, 3).unwrap(),
            build_so_family(6, 2, 3).unwrap(),
            build_so8c_family(3).unwrap(),
            build_sl_even_family(2, BaseKind::Real, 3).unwrap(),
        ] {
            let n = cert.descriptors.len();
            for i in 0..n {
                for j in 0..n {
                    if cert.pairwise_commensurable[i][j].commensurable {
                        assert!(cert.pairwise_adelic[i][j].isomorphic);
                    }
                }
            }
        }
    }
}
