//! Windowed sumset computation, coverage certificates, and certified
//! minimality-witness search.
//!
//! Verification is a semi-decision procedure. Positive coverage is always
//! exact: every covered point carries a witness c with point − c ∈ W that
//! replays through `contains`. Negative answers (NotCovered, and the
//! "uncovered" half of minimality witnesses) are exact only when the
//! candidate set can be certified complete — finite C, finite groups, or a
//! spiked/graph pair with a moderation bound m₀ confining all truncated-route
//! candidates to a finite box. Otherwise the engine answers Unverified.

use crate::error::{Error, Result};
use crate::func::{GenRule, IntFunction, VectorFunction};
use crate::group::{linf_shell, GroupElement, GroupSpec, SublatticeSpec, Window};
use crate::jsonutil;
use crate::moderation::{ModerationBound, SublevelBox};
use crate::sets::{FiberSplit, Fill, SetNode, Side, SymbolicSet};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// How far the engine may look for complement elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusPolicy {
    /// Derive candidate sets from the structure of the pair; refuse to guess.
    Certified,
    /// Search an L∞ box of this half-width around each queried point;
    /// negative answers are then unverified.
    Heuristic(u64),
}

impl Default for RadiusPolicy {
    fn default() -> Self {
        RadiusPolicy::Certified
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CoverStatus {
    Covered,
    NotCoveredAt { point: GroupElement },
    Unverified { reason: String },
}

/// Machine-checkable coverage evidence on a window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageCertificate {
    pub window: Window,
    #[serde(flatten)]
    pub status: CoverStatus,
    /// point → c with point − c ∈ W, in window scan order.
    pub witnesses: Vec<(GroupElement, GroupElement)>,
    /// Whether a NotCovered answer would have been exact under the plan used.
    pub exact_negatives: bool,
}

impl CoverageCertificate {
    pub fn is_covered(&self) -> bool {
        matches!(self.status, CoverStatus::Covered)
    }

    /// Replay every stored witness through membership.
    pub fn replay(&self, w: &SymbolicSet) -> Result<bool> {
        for (p, c) in &self.witnesses {
            let d = w.ambient.sub(p, c)?;
            if !w.contains(&d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SumsetResult {
    pub points: Vec<GroupElement>,
    /// Set when a heuristic radius may have missed decompositions.
    pub possibly_incomplete: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum WitnessOutcome {
    /// x₀ ∉ W + (C ∖ {removed}); candidates listed were each checked false,
    /// and the bound rules out everything farther.
    Witness {
        point: GroupElement,
        checked: Vec<GroupElement>,
        #[serde(
            with = "opt_bigint",
            skip_serializing_if = "Option::is_none",
            default
        )]
        bound: Option<BigInt>,
    },
    /// Exact on finite groups: removing the element keeps full coverage.
    Removable,
    Unverified { reason: String },
}

mod opt_bigint {
    use super::*;
    pub fn serialize<S: serde::Serializer>(
        x: &Option<BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => jsonutil::ser_bigint(v, s),
            None => s.serialize_none(),
        }
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigInt>, D::Error> {
        use serde::Deserialize;
        let o: Option<jsonutil::IntRepr> = Option::deserialize(d)?;
        o.map(|r| r.to_bigint().map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimalityEntry {
    pub removed: GroupElement,
    #[serde(flatten)]
    pub outcome: WitnessOutcome,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub entries: Vec<MinimalityEntry>,
    pub search_bound: u64,
}

impl MinimalityCertificate {
    pub fn all_witnessed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.outcome, WitnessOutcome::Witness { .. }))
    }
}

/// Candidate complement elements relevant to covering a fiber.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateSet {
    List(Vec<GroupElement>),
    AllExcept(Vec<GroupElement>),
}

/// Search radius certified by a moderation bound: covering any point of the
/// fiber at or above `above` can only use the listed candidates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifiedRadius {
    #[serde(with = "jsonutil::bigint_vec")]
    pub fiber: Vec<BigInt>,
    #[serde(with = "jsonutil::bigint")]
    pub above: BigInt,
    pub candidates: CandidateSet,
}

// ---------------------------------------------------------------------------
// Structural analysis of (W, C)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum BaseKind {
    Empty,
    Finite(Vec<Vec<BigInt>>),
    CoFinite(Vec<Vec<BigInt>>),
    Full,
}

#[derive(Debug, Clone)]
struct WView {
    split: FiberSplit,
    base: BaseKind,
    /// Truncation height, absent when only the base fibers belong to W.
    u: Option<VectorFunction>,
    mask: Option<(SublatticeSpec, Vec<BigInt>)>,
    /// Columns exist only over this set (truncated-columns support).
    support: Option<SymbolicSet>,
    offset: Vec<BigInt>,
    /// W had further union parts beyond the analyzed spiked one.
    union_extra: bool,
}

#[derive(Debug, Clone)]
struct GraphC {
    m_set: SymbolicSet,
    values: VectorFunction,
    offset: Vec<BigInt>,
    /// All value components reduced into this sublattice.
    values_in: Option<SublatticeSpec>,
}

fn base_kind(set: &SymbolicSet) -> Option<BaseKind> {
    match &set.node {
        SetNode::Finite { elements } => {
            Some(BaseKind::Finite(elements.iter().map(|e| e.free.clone()).collect()))
        }
        SetNode::FullGroup => Some(BaseKind::Full),
        SetNode::CoFinite { excluded } => {
            Some(BaseKind::CoFinite(excluded.iter().map(|e| e.free.clone()).collect()))
        }
        _ => None,
    }
}

fn scalar_vec(f: &IntFunction) -> VectorFunction {
    VectorFunction::scalar(f.clone())
}

fn analyze_w(w: &SymbolicSet) -> Option<WView> {
    if !w.ambient.is_free() {
        return None;
    }
    let mut offset = vec![BigInt::zero(); w.ambient.rank];
    let mut node = &w.node;
    loop {
        match node {
            SetNode::Translate { inner, offset: g } => {
                for (o, d) in offset.iter_mut().zip(&g.free) {
                    *o += d;
                }
                node = &inner.node;
            }
            _ => break,
        }
    }
    let mut union_extra = false;
    let mut core = node;
    if let SetNode::Union { parts } = node {
        let spiked_parts: Vec<&SymbolicSet> = parts
            .iter()
            .filter(|p| {
                matches!(
                    p.node,
                    SetNode::Spiked { .. }
                        | SetNode::GeneralSpiked { .. }
                        | SetNode::MaskedSpiked { .. }
                        | SetNode::RayComplement { .. }
                )
            })
            .collect();
        let first = spiked_parts.first()?;
        union_extra = parts.len() > 1;
        core = &first.node;
    }
    let view = match core {
        SetNode::Spiked { base, u, fill } => WView {
            split: FiberSplit::identity(base.ambient.rank, 1),
            base: base_kind(base)?,
            u: match fill {
                Fill::Max => Some(scalar_vec(u)),
                Fill::BaseOnly => None,
            },
            mask: None,
            support: None,
            offset,
            union_extra,
        },
        SetNode::GeneralSpiked { split, base, u, side, fill, .. } => {
            if *side != Side::Below {
                return None;
            }
            WView {
                split: split.clone(),
                base: base_kind(base)?,
                u: match fill {
                    Fill::Max => Some(u.clone()),
                    Fill::BaseOnly => None,
                },
                mask: None,
                support: None,
                offset,
                union_extra,
            }
        }
        SetNode::MaskedSpiked { split, base, u, sub, offset: moff } => WView {
            split: split.clone(),
            base: base_kind(base)?,
            u: Some(u.clone()),
            mask: Some((sub.clone(), moff.clone())),
            support: None,
            offset,
            union_extra,
        },
        SetNode::TruncatedColumns { base, u, side } => {
            if *side != Side::Below {
                return None;
            }
            let support = match &base.node {
                SetNode::FullGroup => None,
                _ => Some((**base).clone()),
            };
            WView {
                split: FiberSplit::identity(base.ambient.rank, 1),
                base: BaseKind::Empty,
                u: Some(scalar_vec(u)),
                    mask: None,
                support,
                offset,
                union_extra,
            }
        }
        SetNode::RayComplement { column, start } => WView {
            split: FiberSplit::identity(column.len(), 1),
            base: BaseKind::CoFinite(vec![column.clone()]),
            u: Some(scalar_vec(&IntFunction::Poly(crate::poly::IntPoly::constant(
                column.len(),
                start.clone(),
            )))),
            mask: None,
            support: None,
            offset,
            union_extra,
        },
        _ => return None,
    };
    Some(view)
}

/// Detect value components all reduced into one sublattice, and the
/// pre-reduction function (used for bound derivation).
fn detect_reduced(values: &VectorFunction) -> Option<(SublatticeSpec, VectorFunction)> {
    let mut sub: Option<SublatticeSpec> = None;
    let mut inner: Option<VectorFunction> = None;
    for (i, c) in values.components.iter().enumerate() {
        match c {
            IntFunction::Generated(g) => match &g.rule {
                GenRule::SubgroupReduced { v, sub: s, component } if *component == i => {
                    if let Some(prev) = &sub {
                        if prev != s {
                            return None;
                        }
                    } else {
                        sub = Some(s.clone());
                        inner = Some((**v).clone());
                    }
                    if inner.as_deref_compare(v) {
                        continue;
                    }
                    return None;
                }
                _ => return None,
            },
            _ => return None,
        }
    }
    Some((sub?, inner?))
}

trait DerefCompare {
    fn as_deref_compare(&self, v: &VectorFunction) -> bool;
}

impl DerefCompare for Option<VectorFunction> {
    fn as_deref_compare(&self, v: &VectorFunction) -> bool {
        self.as_ref().map(|i| i == v).unwrap_or(false)
    }
}

fn analyze_graph_c(c: &SymbolicSet, split: &FiberSplit) -> Option<GraphC> {
    if !c.ambient.is_free() {
        return None;
    }
    let mut offset = vec![BigInt::zero(); c.ambient.rank];
    let mut node = &c.node;
    while let SetNode::Translate { inner, offset: g } = node {
        for (o, d) in offset.iter_mut().zip(&g.free) {
            *o += d;
        }
        node = &inner.node;
    }
    let (m_set, values) = match node {
        SetNode::Graph { base, values } if split.is_identity() => {
            ((**base).clone(), values.clone())
        }
        SetNode::BasisImage { inner, basis } => match &inner.node {
            SetNode::Graph { base, values } => {
                // The basis change must match W's fiber split: columns (g1|g2).
                if split.g1.len() != 1 || split.g2.len() != 1 {
                    return None;
                }
                let col1 = vec![basis.rows[0][0].clone(), basis.rows[1][0].clone()];
                let col2 = vec![basis.rows[0][1].clone(), basis.rows[1][1].clone()];
                if col1 != split.g1[0] || col2 != split.g2[0] {
                    return None;
                }
                ((**base).clone(), values.clone())
            }
            _ => return None,
        },
        _ => return None,
    };
    if m_set.ambient.rank != split.g1.len() || values.dim() != split.g2.len() {
        return None;
    }
    let values_in = detect_reduced(&values).map(|(s, _)| s);
    Some(GraphC { m_set, values, offset, values_in })
}

fn derive_bound(u1: &IntFunction, v1: &IntFunction) -> Option<ModerationBound> {
    if let (IntFunction::Poly(u), IntFunction::Poly(v)) = (u1, v1) {
        if let Ok(b) = ModerationBound::diagonal_pair(u, v) {
            // Probe once to confirm the pair is certifiable.
            let probe = vec![BigInt::zero(); u.arity];
            if b.bound_at(&probe).is_ok() {
                return Some(b);
            }
        }
    }
    if let IntFunction::Generated(g) = v1 {
        if let GenRule::BallModeration { u } = &g.rule {
            if **u == *u1 {
                return Some(ModerationBound::Ball { u: u1.clone(), v: v1.clone() });
            }
        }
    }
    None
}

struct GraphPairPlan {
    w: WView,
    c: GraphC,
    bound: Option<ModerationBound>,
}

enum Plan {
    /// Candidate list is the whole of C: exact for every W.
    FiniteC(Vec<GroupElement>),
    GraphPair(Box<GraphPairPlan>),
    /// Box scan around the queried point; negatives unverified.
    Heuristic(u64),
}

fn analyze(w: &SymbolicSet, c: &SymbolicSet, policy: &RadiusPolicy) -> Plan {
    if let Some(elems) = c.finite_elements() {
        return Plan::FiniteC(elems);
    }
    if let Some(wv) = analyze_w(w) {
        if let Some(gc) = analyze_graph_c(c, &wv.split) {
            let bound = match &wv.u {
                Some(u) => {
                    let u1 = &u.components[0];
                    match detect_reduced(&gc.values) {
                        Some((_, inner)) => derive_bound(u1, &inner.components[0]).map(|b| {
                            ModerationBound::Shifted { inner: Box::new(b), extra: BigInt::zero() }
                        }),
                        None => derive_bound(u1, &gc.values.components[0]),
                    }
                }
                None => None,
            };
            return Plan::GraphPair(Box::new(GraphPairPlan { w: wv, c: gc, bound }));
        }
    }
    match policy {
        RadiusPolicy::Heuristic(r) => Plan::Heuristic(*r),
        RadiusPolicy::Certified => Plan::Heuristic(64),
    }
}

// ---------------------------------------------------------------------------
// Point coverage
// ---------------------------------------------------------------------------

enum PointOutcome {
    Covered(GroupElement),
    /// Exactly not covered; the candidates listed were each checked.
    NotCovered(Vec<GroupElement>),
    Unknown(String),
}

fn box_points(ranges: &[(BigInt, BigInt)]) -> Option<Vec<Vec<BigInt>>> {
    let mut count = BigInt::from(1);
    for (lo, hi) in ranges {
        if lo > hi {
            return Some(vec![]);
        }
        count *= hi - lo + 1;
        if count > BigInt::from(2_000_000u64) {
            return None;
        }
    }
    let w = Window::new(ranges.to_vec()).ok()?;
    Some(
        w.points(&GroupSpec::free(ranges.len()))
            .ok()?
            .into_iter()
            .map(|e| e.free)
            .collect(),
    )
}

impl GraphPairPlan {
    fn graph_elem(&self, m: &[BigInt]) -> Result<GroupElement> {
        let v = self.c.values.eval(m)?;
        let mut free = self.w.split.join(m, &v);
        for (f, o) in free.iter_mut().zip(&self.c.offset) {
            *f += o;
        }
        Ok(GroupElement::from_free(free))
    }

    fn m_contains(&self, m: &[BigInt]) -> Result<bool> {
        self.c.m_set.contains(&GroupElement::from_free(m.to_vec()))
    }

    /// Split the query into fiber coordinates, offsets removed.
    fn query_coords(&self, p: &GroupElement) -> (Vec<BigInt>, Vec<BigInt>) {
        let r: Vec<BigInt> = p
            .free
            .iter()
            .zip(self.w.offset.iter().zip(&self.c.offset))
            .map(|(x, (wo, co))| x - wo - co)
            .collect();
        self.w.split.split(&r)
    }

    /// Base-column candidates for the fiber at t: all m with t − m ∈ B.
    fn base_candidates(&self, t: &[BigInt]) -> BaseCandidates {
        match &self.w.base {
            BaseKind::Empty => BaseCandidates::List(vec![]),
            BaseKind::Finite(bs) => BaseCandidates::List(
                bs.iter()
                    .map(|b| t.iter().zip(b).map(|(a, x)| a - x).collect())
                    .collect(),
            ),
            BaseKind::CoFinite(excl) => BaseCandidates::AllExcept(
                excl.iter()
                    .map(|b| t.iter().zip(b).map(|(a, x)| a - x).collect())
                    .collect(),
            ),
            BaseKind::Full => BaseCandidates::AllExcept(vec![]),
        }
    }

}

enum BaseCandidates {
    List(Vec<Vec<BigInt>>),
    AllExcept(Vec<Vec<BigInt>>),
}

fn cover_point(
    w: &SymbolicSet,
    c: &SymbolicSet,
    plan: &Plan,
    p: &GroupElement,
    removed: Option<&GroupElement>,
) -> Result<PointOutcome> {
    let try_candidate = |cand: &GroupElement| -> Result<Option<GroupElement>> {
        if Some(cand) == removed {
            return Ok(None);
        }
        let d = w.ambient.sub(p, cand)?;
        if w.contains(&d)? {
            Ok(Some(cand.clone()))
        } else {
            Ok(None)
        }
    };
    match plan {
        Plan::FiniteC(elems) => {
            let mut checked = Vec::new();
            for cand in elems {
                if let Some(hit) = try_candidate(cand)? {
                    return Ok(PointOutcome::Covered(hit));
                }
                if Some(cand) != removed {
                    checked.push(cand.clone());
                }
            }
            Ok(PointOutcome::NotCovered(checked))
        }
        Plan::Heuristic(r) => {
            // Enumerate C inside an L∞ box around p.
            let spec = &c.ambient;
            let rb = BigInt::from(*r);
            let ranges: Vec<(BigInt, BigInt)> = p
                .free
                .iter()
                .map(|x| (x - &rb, x + &rb))
                .collect();
            let win = Window::new(ranges)?;
            for cand in c.enumerate_in_window(&win)? {
                if let Some(hit) = try_candidate(&cand)? {
                    return Ok(PointOutcome::Covered(hit));
                }
            }
            if spec.rank == 0 {
                // Finite group: the box was the whole group.
                return Ok(PointOutcome::NotCovered(vec![]));
            }
            Ok(PointOutcome::Unknown(format!(
                "no candidate within heuristic radius {r} of {p}"
            )))
        }
        Plan::GraphPair(gp) => {
            let (t, s) = gp.query_coords(p);
            let mut checked = Vec::new();
            // Base route: full fibers over the base.
            match gp.base_candidates(&t) {
                BaseCandidates::List(ms) => {
                    for m in ms {
                        if gp.m_contains(&m)? {
                            let cand = gp.graph_elem(&m)?;
                            if let Some(hit) = try_candidate(&cand)? {
                                return Ok(PointOutcome::Covered(hit));
                            }
                            if Some(&cand) != removed {
                                checked.push(cand);
                            }
                        }
                    }
                }
                BaseCandidates::AllExcept(not_these) => {
                    // Some m ∈ M with t − m outside the finite excluded list.
                    let mut found = false;
                    'outer: for r in 0..=64u64 {
                        for m in linf_shell(&t, r) {
                            if not_these.contains(&m) {
                                continue;
                            }
                            if gp.m_contains(&m)? {
                                let cand = gp.graph_elem(&m)?;
                                if let Some(hit) = try_candidate(&cand)? {
                                    return Ok(PointOutcome::Covered(hit));
                                }
                                found = true;
                                break 'outer;
                            }
                        }
                    }
                    if !found {
                        // Cofinite/full base with unreachable M: fall back to
                        // an explicit list when M is finite.
                        match gp.c.m_set.finite_elements() {
                            Some(ms) => {
                                for me in ms {
                                    if not_these.contains(&me.free) {
                                        continue;
                                    }
                                    let cand = gp.graph_elem(&me.free)?;
                                    if let Some(hit) = try_candidate(&cand)? {
                                        return Ok(PointOutcome::Covered(hit));
                                    }
                                    if Some(&cand) != removed {
                                        checked.push(cand);
                                    }
                                }
                            }
                            None => {
                                return Ok(PointOutcome::Unknown(
                                    "base route inconclusive over an infinite complement base"
                                        .into(),
                                ))
                            }
                        }
                    }
                }
            }
            // Masked route: blocked exactly when s stays in the masked coset
            // and all values lie in the mask sublattice.
            if let Some((sub, moff)) = &gp.w.mask {
                let in_coset = {
                    let shifted: Vec<BigInt> =
                        s.iter().zip(moff).map(|(a, b)| a - b).collect();
                    sub.hnf().contains(&shifted)
                };
                let values_reduced = gp.c.values_in.as_ref() == Some(sub);
                if !(in_coset && values_reduced) {
                    // Route open: scan nearby graph points directly.
                    for r in 0..=24u64 {
                        for m in linf_shell(&t, r) {
                            if gp.m_contains(&m)? {
                                let cand = gp.graph_elem(&m)?;
                                if let Some(hit) = try_candidate(&cand)? {
                                    return Ok(PointOutcome::Covered(hit));
                                }
                            }
                        }
                    }
                    return Ok(PointOutcome::Unknown(
                        "masked region not blocked for this fiber point".into(),
                    ));
                }
            }
            // Truncated route: candidates confined by the moderation bound.
            if gp.w.u.is_some() {
                let bound = match &gp.bound {
                    Some(b) => b,
                    None => {
                        return Ok(PointOutcome::Unknown(
                            "no certified moderation bound for this pair".into(),
                        ))
                    }
                };
                let threshold = &s[0] - 1;
                match bound.sublevel_box(&t, &threshold)? {
                    SublevelBox::Empty => {}
                    SublevelBox::Box(ranges) => match box_points(&ranges) {
                        Some(ms) => {
                            for m in ms {
                                if !gp.m_contains(&m)? {
                                    continue;
                                }
                                let cand = gp.graph_elem(&m)?;
                                if let Some(hit) = try_candidate(&cand)? {
                                    return Ok(PointOutcome::Covered(hit));
                                }
                                if Some(&cand) != removed {
                                    checked.push(cand);
                                }
                            }
                        }
                        None => {
                            return Ok(PointOutcome::Unknown(
                                "certified candidate box too large to scan".into(),
                            ))
                        }
                    },
                    SublevelBox::Unbounded(reason) => {
                        return Ok(PointOutcome::Unknown(reason))
                    }
                }
            }
            if gp.w.union_extra {
                return Ok(PointOutcome::Unknown(
                    "additional union parts of W are not certifiable".into(),
                ));
            }
            Ok(PointOutcome::NotCovered(checked))
        }
    }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

fn check_same_group(a: &SymbolicSet, b: &SymbolicSet) -> Result<()> {
    if a.ambient != b.ambient {
        return Err(Error::GroupMismatch(
            "sets live in different ambient groups".into(),
        ));
    }
    Ok(())
}

/// All points of `target` of the form a + b with a ∈ A, b ∈ B.
pub fn sumset_window(
    a: &SymbolicSet,
    b: &SymbolicSet,
    target: &Window,
    policy: &RadiusPolicy,
) -> Result<SumsetResult> {
    check_same_group(a, b)?;
    let plan = analyze(a, b, policy);
    let mut points = Vec::new();
    let mut possibly_incomplete = false;
    for p in target.points(&a.ambient)? {
        match cover_point(a, b, &plan, &p, None)? {
            PointOutcome::Covered(_) => points.push(p),
            PointOutcome::NotCovered(_) => {}
            PointOutcome::Unknown(_) => possibly_incomplete = true,
        }
    }
    Ok(SumsetResult { points, possibly_incomplete })
}

/// Does W + C cover the whole window?
pub fn is_complement_on_window(
    w: &SymbolicSet,
    c: &SymbolicSet,
    target: &Window,
    policy: &RadiusPolicy,
) -> Result<CoverageCertificate> {
    check_same_group(w, c)?;
    let plan = analyze(w, c, policy);
    let exact_negatives = !matches!(plan, Plan::Heuristic(_)) || w.ambient.rank == 0;
    let mut witnesses = Vec::new();
    for p in target.points(&w.ambient)? {
        match cover_point(w, c, &plan, &p, None)? {
            PointOutcome::Covered(cand) => witnesses.push((p, cand)),
            PointOutcome::NotCovered(_) => {
                return Ok(CoverageCertificate {
                    window: target.clone(),
                    status: CoverStatus::NotCoveredAt { point: p },
                    witnesses,
                    exact_negatives,
                });
            }
            PointOutcome::Unknown(reason) => {
                return Ok(CoverageCertificate {
                    window: target.clone(),
                    status: CoverStatus::Unverified {
                        reason: format!("at {p}: {reason}"),
                    },
                    witnesses,
                    exact_negatives,
                });
            }
        }
    }
    Ok(CoverageCertificate {
        window: target.clone(),
        status: CoverStatus::Covered,
        witnesses,
        exact_negatives,
    })
}

/// Options for the minimality witness search.
#[derive(Debug, Clone)]
pub struct MinimalityOptions {
    /// Expanding-shell bound per coordinate; default max(m₀ + span, 64).
    pub search_bound: Option<u64>,
}

impl Default for MinimalityOptions {
    fn default() -> Self {
        MinimalityOptions { search_bound: None }
    }
}

/// For each element of C inside `base_window`, search for a point left
/// uncovered when that element is removed.
pub fn minimality_witnesses(
    w: &SymbolicSet,
    c: &SymbolicSet,
    base_window: &Window,
    policy: &RadiusPolicy,
    opts: &MinimalityOptions,
) -> Result<MinimalityCertificate> {
    check_same_group(w, c)?;
    let plan = analyze(w, c, policy);
    let span = base_window.span().to_u64().unwrap_or(64);
    let search_bound = opts.search_bound.unwrap_or_else(|| span.max(64));
    let mut entries = Vec::new();
    match &plan {
        Plan::GraphPair(gp) => {
            if base_window.dim() != gp.w.split.g1.len() {
                return Err(Error::InvalidWindow(
                    "base window must range over the complement base coordinates".into(),
                ));
            }
            let ms = gp.c.m_set.enumerate_in_window(base_window)?;
            for me in ms {
                let removed = gp.graph_elem(&me.free)?;
                let outcome = graph_witness(w, gp, &me.free, &removed)?;
                entries.push(MinimalityEntry { removed, outcome });
            }
        }
        _ => {
            let elems: Vec<GroupElement> = match &plan {
                Plan::FiniteC(elems) => {
                    if base_window.dim() == w.ambient.rank {
                        elems
                            .iter()
                            .filter(|e| base_window.contains_free(&e.free))
                            .cloned()
                            .collect()
                    } else {
                        elems.clone()
                    }
                }
                _ => c.enumerate_in_window(base_window)?,
            };
            let exact = matches!(plan, Plan::FiniteC(_)) || w.ambient.rank == 0;
            for rc in elems {
                let outcome =
                    shell_witness(w, c, &plan, &rc, search_bound, exact)?;
                entries.push(MinimalityEntry { removed: rc, outcome });
            }
        }
    }
    Ok(MinimalityCertificate { entries, search_bound })
}

/// Witness construction for spiked/graph pairs: the uncovered point sits on
/// the removed element's fiber, strictly above the moderation bound, and
/// inside the masked coset when a mask is present.
fn graph_witness(
    w: &SymbolicSet,
    gp: &GraphPairPlan,
    m_removed: &[BigInt],
    removed: &GroupElement,
) -> Result<WitnessOutcome> {
    let bs = match &gp.w.base {
        BaseKind::Finite(bs) => bs.clone(),
        _ => {
            return Ok(WitnessOutcome::Unverified {
                reason: "witness certification needs a finite base".into(),
            })
        }
    };
    if gp.w.union_extra {
        return Ok(WitnessOutcome::Unverified {
            reason: "additional union parts of W are not certifiable".into(),
        });
    }
    if gp.w.support.is_some() {
        return Ok(WitnessOutcome::Unverified {
            reason: "truncated support restriction not handled in witness search".into(),
        });
    }
    let bound = match &gp.bound {
        Some(b) => b,
        None => {
            return Ok(WitnessOutcome::Unverified {
                reason: "no certified moderation bound for this pair".into(),
            })
        }
    };
    if let Some((sub, _)) = &gp.w.mask {
        if gp.c.values_in.as_ref() != Some(sub) {
            return Ok(WitnessOutcome::Unverified {
                reason: "complement values are not confined to the mask sublattice".into(),
            });
        }
    }
    // Try each fiber reachable from the removed element through the base.
    for b in &bs {
        let x0: Vec<BigInt> = m_removed.iter().zip(b).map(|(m, b)| m + b).collect();
        // Which still-present complement elements can cover this fiber?
        let mut blockers = Vec::new();
        for b2 in &bs {
            let m2: Vec<BigInt> = x0.iter().zip(b2).map(|(a, x)| a - x).collect();
            if m2 == m_removed {
                continue;
            }
            if gp.m_contains(&m2)? {
                blockers.push(m2);
            }
        }
        if !blockers.is_empty() {
            continue;
        }
        let m0 = bound.bound_at(&x0)?;
        let k2 = gp.w.split.g2.len();
        let mut y = vec![BigInt::zero(); k2];
        y[0] = &m0 + 1;
        if let Some((sub, moff)) = &gp.w.mask {
            // Smallest point of the masked coset with first coordinate > m₀.
            let hn = sub.hnf();
            let d = hn.cols[0][0].clone();
            let mut cand = moff.clone();
            let need = &y[0] - &cand[0];
            let steps = need.div_ceil(&d).max(BigInt::zero());
            for (yi, col) in cand.iter_mut().zip(hn.cols[0].iter()) {
                *yi += &steps * col;
            }
            y = cand;
            debug_assert!(y[0] > m0);
        }
        let mut free = gp.w.split.join(&x0, &y);
        for (f, (wo, co)) in free
            .iter_mut()
            .zip(gp.w.offset.iter().zip(&gp.c.offset))
        {
            *f += wo + co;
        }
        let point = GroupElement::from_free(free);
        // Replay: every base candidate still present must fail membership.
        let mut checked = Vec::new();
        for b2 in &bs {
            let m2: Vec<BigInt> = x0.iter().zip(b2).map(|(a, x)| a - x).collect();
            if m2 == m_removed || !gp.m_contains(&m2)? {
                continue;
            }
            let cand = gp.graph_elem(&m2)?;
            let d = w.ambient.sub(&point, &cand)?;
            if w.contains(&d)? {
                return Ok(WitnessOutcome::Unverified {
                    reason: format!("replay found unexpected cover via {cand}"),
                });
            }
            checked.push(cand);
        }
        // The removed element itself must have covered the point.
        let d = w.ambient.sub(&point, removed)?;
        if !w.contains(&d)? {
            return Ok(WitnessOutcome::Unverified {
                reason: "constructed point was not covered by the removed element".into(),
            });
        }
        return Ok(WitnessOutcome::Witness { point, checked, bound: Some(m0) });
    }
    Ok(WitnessOutcome::Unverified {
        reason: "every fiber of the removed element stays covered through other base columns"
            .into(),
    })
}

/// Expanding L∞ shells around the removed element.
fn shell_witness(
    w: &SymbolicSet,
    c: &SymbolicSet,
    plan: &Plan,
    removed: &GroupElement,
    search_bound: u64,
    exact: bool,
) -> Result<WitnessOutcome> {
    let spec = &w.ambient;
    let tors_variants: Vec<Vec<u64>> = {
        let mut out = vec![vec![]];
        for &n in &spec.torsion {
            let mut next = Vec::new();
            for t in &out {
                for v in 0..n {
                    let mut t2 = t.clone();
                    t2.push(v);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    };
    let max_r = if spec.rank == 0 { 0 } else { search_bound };
    for r in 0..=max_r {
        for free in linf_shell(&removed.free, r) {
            for tors in &tors_variants {
                let p = GroupElement { free: free.clone(), tors: tors.clone() };
                // A witness must have been covered through the removed
                // element; points C never covered prove nothing.
                let d = spec.sub(&p, removed)?;
                if !w.contains(&d)? {
                    continue;
                }
                match cover_point(w, c, plan, &p, Some(removed))? {
                    PointOutcome::Covered(_) => {}
                    PointOutcome::NotCovered(checked) => {
                        return Ok(WitnessOutcome::Witness {
                            point: p,
                            checked,
                            bound: None,
                        })
                    }
                    PointOutcome::Unknown(reason) => {
                        return Ok(WitnessOutcome::Unverified { reason })
                    }
                }
            }
        }
    }
    if exact && spec.rank == 0 {
        return Ok(WitnessOutcome::Removable);
    }
    Ok(WitnessOutcome::Unverified {
        reason: format!(
            "no uncovered point within {search_bound} of the removed element"
        ),
    })
}

/// Certified search radius for covering the fiber at x₀ above the bound:
/// only complement elements whose base coordinate lands in x₀ − B matter.
pub fn certified_radius(
    w: &SymbolicSet,
    c: &SymbolicSet,
    x0: &[BigInt],
) -> Result<CertifiedRadius> {
    check_same_group(w, c)?;
    let plan = analyze(w, c, &RadiusPolicy::Certified);
    let gp = match &plan {
        Plan::GraphPair(gp) => gp,
        _ => {
            return Err(Error::NotCertifiable(
                "pair is not a spiked set with a graph complement".into(),
            ))
        }
    };
    let bound = gp.bound.as_ref().ok_or_else(|| {
        Error::NotCertifiable("no certified moderation bound for this pair".into())
    })?;
    let above = bound.bound_at(x0)?;
    let candidates = match gp.base_candidates(x0) {
        BaseCandidates::List(ms) => {
            let mut out = Vec::new();
            for m in ms {
                if gp.m_contains(&m)? {
                    out.push(gp.graph_elem(&m)?);
                }
            }
            CandidateSet::List(out)
        }
        BaseCandidates::AllExcept(ms) => {
            let mut out = Vec::new();
            for m in ms {
                out.push(gp.graph_elem(&m)?);
            }
            CandidateSet::AllExcept(out)
        }
    };
    Ok(CertifiedRadius { fiber: x0.to_vec(), above, candidates })
}

/// One round of the shrinking demonstration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShrinkRound {
    pub removed: GroupElement,
    pub still_covered: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShrinkReport {
    pub rounds: Vec<ShrinkRound>,
    /// Coverage held through every removal.
    pub coverage_persisted: bool,
    pub remaining: usize,
}

/// Demonstrate on a window that a complement of a truncated-columns set keeps
/// covering after removing elements: remove `rounds` non-extremal elements
/// cumulatively (or the explicit `removals`), re-verifying coverage each time.
pub fn shrink_complement_demo(
    w: &SymbolicSet,
    c: &SymbolicSet,
    target: &Window,
    rounds: usize,
    removals: Option<Vec<GroupElement>>,
    policy: &RadiusPolicy,
) -> Result<ShrinkReport> {
    check_same_group(w, c)?;
    let truncated = {
        let mut node = &w.node;
        loop {
            match node {
                SetNode::Translate { inner, .. } => node = &inner.node,
                SetNode::BasisImage { inner, .. } => node = &inner.node,
                _ => break,
            }
        }
        matches!(
            node,
            SetNode::TruncatedColumns { .. } | SetNode::RayComplement { .. }
        )
    };
    if !truncated {
        return Err(Error::InvalidArgument(
            "the shrinking demonstration expects a column-structured set".into(),
        ));
    }
    let mut elems = c.finite_elements().ok_or_else(|| {
        Error::InvalidArgument("the complement must be an explicit finite set".into())
    })?;
    elems.sort();
    let chosen: Vec<GroupElement> = match removals {
        Some(list) => list,
        None => {
            // Evenly spaced interior elements; endpoints stay.
            if elems.len() < 3 {
                return Err(Error::InvalidArgument(
                    "too few elements to remove non-extremal ones".into(),
                ));
            }
            let interior = elems.len() - 2;
            let take = rounds.min(interior);
            (0..take)
                .map(|j| elems[1 + j * interior / take].clone())
                .collect()
        }
    };
    let mut report = ShrinkReport {
        rounds: Vec::new(),
        coverage_persisted: true,
        remaining: elems.len(),
    };
    for rc in chosen {
        elems.retain(|e| e != &rc);
        let c_now = SymbolicSet::finite(c.ambient.clone(), elems.clone())?;
        let cert = is_complement_on_window(w, &c_now, target, policy)?;
        let ok = cert.is_covered();
        report.rounds.push(ShrinkRound { removed: rc, still_covered: ok });
        if !ok {
            report.coverage_persisted = false;
            break;
        }
    }
    report.remaining = elems.len();
    Ok(report)
}
