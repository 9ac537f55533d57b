//! Membership-decidable descriptions of the finite and infinite subsets the
//! theory works with: finite lists, cofinite sets, truncated columns, spiked
//! sets (plain, fiber-decomposed, and coset-masked), graphs of functions,
//! translates, unions, unimodular basis images, sublattices, and per-column
//! arithmetic-progression masks.
//!
//! Every variant supports an exact membership test. `enumerate_in_window`
//! lists members of a finite window in lexicographic order.

use crate::error::{Error, Result};
use crate::func::{IntFunction, VectorFunction};
use crate::group::{
    mat_vec, membership_in_sublattice, unimodular_inverse, GroupElement, GroupSpec,
    SublatticeSpec, UnimodularBasis, Window,
};
use crate::jsonutil;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Direction of a truncation along the fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// (−∞, u(x)), exclusive of u(x).
    Below,
    /// (u(x), ∞), exclusive of u(x).
    Above,
}

/// How much of the sandwich between B×ℤ and the maximal spiked set is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fill {
    /// The maximal set: full base columns plus truncated columns elsewhere.
    Max,
    /// B×ℤ alone.
    BaseOnly,
}

/// Order on fiber coordinates for rank ≥ 2 truncations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMode {
    /// Dictionary (lexicographic) order.
    Dict,
    /// Every coordinate strictly on the cut side.
    Product,
}

fn cmp_side(s: &[BigInt], u: &[BigInt], side: Side, order: OrderMode) -> bool {
    match (side, order) {
        (Side::Below, OrderMode::Dict) => s < u,
        (Side::Above, OrderMode::Dict) => s > u,
        (Side::Below, OrderMode::Product) => s.iter().zip(u).all(|(a, b)| a < b),
        (Side::Above, OrderMode::Product) => s.iter().zip(u).all(|(a, b)| a > b),
    }
}

/// A direct-sum decomposition ℤ^{k₁+k₂} = G₁ ⊕ G₂ by unimodular column data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSplit {
    /// k₁ columns spanning G₁ (the base directions).
    #[serde(with = "jsonutil::bigint_mat")]
    pub g1: Vec<Vec<BigInt>>,
    /// k₂ columns spanning G₂ (the fiber directions).
    #[serde(with = "jsonutil::bigint_mat")]
    pub g2: Vec<Vec<BigInt>>,
}

impl FiberSplit {
    pub fn new(g1: Vec<Vec<BigInt>>, g2: Vec<Vec<BigInt>>) -> Result<Self> {
        let split = FiberSplit { g1, g2 };
        split.validate()?;
        Ok(split)
    }

    /// Standard split of ℤ^{k₁+k₂} into the first k₁ and last k₂ coordinates.
    pub fn identity(k1: usize, k2: usize) -> Self {
        let dim = k1 + k2;
        let unit = |i: usize| {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            v
        };
        FiberSplit {
            g1: (0..k1).map(unit).collect(),
            g2: (k1..dim).map(unit).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.g1.len() + self.g2.len()
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for c in self.g1.iter().chain(&self.g2) {
            if c.len() != dim {
                return Err(Error::InvalidArgument(
                    "fiber split columns have wrong length".into(),
                ));
            }
        }
        let cols: Vec<Vec<BigInt>> = self.g1.iter().chain(&self.g2).cloned().collect();
        if unimodular_inverse(&cols).is_none() {
            return Err(Error::NotUnimodular("fiber split".into()));
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.g1
            .iter()
            .chain(&self.g2)
            .enumerate()
            .all(|(i, c)| c.iter().enumerate().all(|(j, x)| {
                if i == j {
                    x == &BigInt::from(1)
                } else {
                    x.is_zero()
                }
            }))
    }

    /// Coordinates (t, s) with point = G₁·t + G₂·s.
    pub fn split(&self, free: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let k1 = self.g1.len();
        if self.is_identity() {
            return (free[..k1].to_vec(), free[k1..].to_vec());
        }
        let cols: Vec<Vec<BigInt>> = self.g1.iter().chain(&self.g2).cloned().collect();
        let inv = unimodular_inverse(&cols).expect("validated unimodular");
        let ts = mat_vec(&inv, free);
        (ts[..k1].to_vec(), ts[k1..].to_vec())
    }

    pub fn join(&self, t: &[BigInt], s: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (col, x) in self.g1.iter().zip(t).chain(self.g2.iter().zip(s)) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += c * x;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetNode {
    Finite {
        elements: Vec<GroupElement>,
    },
    FullGroup,
    CoFinite {
        excluded: Vec<GroupElement>,
    },
    /// ℤ^{k+1} minus the upward ray {(column, y) : y ≥ start}.
    RayComplement {
        #[serde(with = "jsonutil::bigint_vec")]
        column: Vec<BigInt>,
        #[serde(with = "jsonutil::bigint")]
        start: BigInt,
    },
    /// ⊔_{a ∈ A} {a} × (−∞, u(a)) or (u(a), ∞) along the last coordinate.
    TruncatedColumns {
        base: Box<SymbolicSet>,
        u: IntFunction,
        side: Side,
    },
    /// Spiked set along the last coordinate: full columns over the base,
    /// columns truncated below u elsewhere (when fill = max).
    Spiked {
        base: Box<SymbolicSet>,
        u: IntFunction,
        fill: Fill,
    },
    /// Spiked/truncated set over an arbitrary direct-sum decomposition with a
    /// vector-valued height and a choice of fiber order.
    GeneralSpiked {
        split: FiberSplit,
        base: Box<SymbolicSet>,
        u: VectorFunction,
        side: Side,
        order: OrderMode,
        fill: Fill,
    },
    /// Maximal masked spiked set: full base fibers, fibers below u elsewhere,
    /// plus everything else outside the coset offset + sub of the fiber group.
    MaskedSpiked {
        split: FiberSplit,
        base: Box<SymbolicSet>,
        u: VectorFunction,
        sub: SublatticeSpec,
        #[serde(with = "jsonutil::bigint_vec")]
        offset: Vec<BigInt>,
    },
    /// {(x, v(x)) : x ∈ M}.
    Graph {
        base: Box<SymbolicSet>,
        values: VectorFunction,
    },
    Translate {
        inner: Box<SymbolicSet>,
        offset: GroupElement,
    },
    Union {
        parts: Vec<SymbolicSet>,
    },
    /// Pushforward under a unimodular basis change of ℤ².
    BasisImage {
        inner: Box<SymbolicSet>,
        basis: UnimodularBasis,
    },
    Sublattice {
        lattice: SublatticeSpec,
    },
    /// {(x, y) : x not excluded, moduli_l(x) | y_l for every fiber coordinate}.
    ColumnMask {
        moduli: Vec<IntFunction>,
        #[serde(default)]
        excluded_columns: Vec<GroupElement>,
    },
}

/// A set together with its ambient group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolicSet {
    pub ambient: GroupSpec,
    #[serde(flatten)]
    pub node: SetNode,
}

fn require_free(spec: &GroupSpec, what: &str) -> Result<()> {
    if !spec.is_free() {
        return Err(Error::InvalidArgument(format!(
            "{what} requires a free ambient group"
        )));
    }
    Ok(())
}

impl SymbolicSet {
    pub fn finite(ambient: GroupSpec, elements: Vec<GroupElement>) -> Result<Self> {
        for e in &elements {
            ambient.check(e)?;
        }
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        Ok(SymbolicSet { ambient, node: SetNode::Finite { elements } })
    }

    pub fn full(ambient: GroupSpec) -> Self {
        SymbolicSet { ambient, node: SetNode::FullGroup }
    }

    pub fn cofinite(ambient: GroupSpec, excluded: Vec<GroupElement>) -> Result<Self> {
        for e in &excluded {
            ambient.check(e)?;
        }
        let mut excluded = excluded;
        excluded.sort();
        excluded.dedup();
        Ok(SymbolicSet { ambient, node: SetNode::CoFinite { excluded } })
    }

    pub fn ray_complement(column: Vec<BigInt>, start: BigInt) -> Self {
        let ambient = GroupSpec::free(column.len() + 1);
        SymbolicSet { ambient, node: SetNode::RayComplement { column, start } }
    }

    pub fn truncated_columns(base: SymbolicSet, u: IntFunction, side: Side) -> Result<Self> {
        require_free(&base.ambient, "truncated columns")?;
        if u.arity() != base.ambient.rank {
            return Err(Error::ArityMismatch { expected: base.ambient.rank, got: u.arity() });
        }
        let ambient = GroupSpec::free(base.ambient.rank + 1);
        Ok(SymbolicSet {
            ambient,
            node: SetNode::TruncatedColumns { base: Box::new(base), u, side },
        })
    }

    pub fn spiked(base: SymbolicSet, u: IntFunction, fill: Fill) -> Result<Self> {
        require_free(&base.ambient, "spiked set")?;
        if u.arity() != base.ambient.rank {
            return Err(Error::ArityMismatch { expected: base.ambient.rank, got: u.arity() });
        }
        let ambient = GroupSpec::free(base.ambient.rank + 1);
        Ok(SymbolicSet { ambient, node: SetNode::Spiked { base: Box::new(base), u, fill } })
    }

    pub fn general_spiked(
        split: FiberSplit,
        base: SymbolicSet,
        u: VectorFunction,
        side: Side,
        order: OrderMode,
        fill: Fill,
    ) -> Result<Self> {
        split.validate()?;
        require_free(&base.ambient, "general spiked set")?;
        let (k1, k2) = (split.g1.len(), split.g2.len());
        if base.ambient.rank != k1 {
            return Err(Error::ArityMismatch { expected: k1, got: base.ambient.rank });
        }
        if u.arity() != k1 || u.dim() != k2 {
            return Err(Error::InvalidArgument(
                "height function must map base coordinates to fiber coordinates".into(),
            ));
        }
        let ambient = GroupSpec::free(split.dim());
        Ok(SymbolicSet {
            ambient,
            node: SetNode::GeneralSpiked { split, base: Box::new(base), u, side, order, fill },
        })
    }

    pub fn masked_spiked(
        split: FiberSplit,
        base: SymbolicSet,
        u: VectorFunction,
        sub: SublatticeSpec,
        offset: Vec<BigInt>,
    ) -> Result<Self> {
        split.validate()?;
        require_free(&base.ambient, "masked spiked set")?;
        let (k1, k2) = (split.g1.len(), split.g2.len());
        if base.ambient.rank != k1 || u.arity() != k1 || u.dim() != k2 {
            return Err(Error::InvalidArgument(
                "masked spiked set dimensions are inconsistent".into(),
            ));
        }
        if sub.ambient_rank != k2 || offset.len() != k2 {
            return Err(Error::InvalidArgument(
                "mask data must live in the fiber coordinates".into(),
            ));
        }
        if sub.index().is_none() {
            return Err(Error::InfiniteIndex);
        }
        // Offsets are kept reduced into the fundamental domain.
        let offset = sub.hnf().reduce(&offset);
        let ambient = GroupSpec::free(split.dim());
        Ok(SymbolicSet {
            ambient,
            node: SetNode::MaskedSpiked { split, base: Box::new(base), u, sub, offset },
        })
    }

    pub fn graph(base: SymbolicSet, values: VectorFunction) -> Result<Self> {
        require_free(&base.ambient, "graph")?;
        if values.arity() != base.ambient.rank {
            return Err(Error::ArityMismatch { expected: base.ambient.rank, got: values.arity() });
        }
        let ambient = GroupSpec::free(base.ambient.rank + values.dim());
        Ok(SymbolicSet { ambient, node: SetNode::Graph { base: Box::new(base), values } })
    }

    pub fn union(parts: Vec<SymbolicSet>) -> Result<Self> {
        let ambient = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("union of nothing".into()))?
            .ambient
            .clone();
        for p in &parts {
            if p.ambient != ambient {
                return Err(Error::GroupMismatch("union parts in different groups".into()));
            }
        }
        Ok(SymbolicSet { ambient, node: SetNode::Union { parts } })
    }

    pub fn sublattice(lattice: SublatticeSpec) -> Self {
        let ambient = GroupSpec::free(lattice.ambient_rank);
        SymbolicSet { ambient, node: SetNode::Sublattice { lattice } }
    }

    pub fn column_mask(
        moduli: Vec<IntFunction>,
        excluded_columns: Vec<GroupElement>,
    ) -> Result<Self> {
        let k1 = moduli
            .first()
            .ok_or_else(|| Error::InvalidArgument("column mask needs at least one modulus".into()))?
            .arity();
        for m in &moduli {
            if m.arity() != k1 {
                return Err(Error::ArityMismatch { expected: k1, got: m.arity() });
            }
        }
        let ambient = GroupSpec::free(k1 + moduli.len());
        Ok(SymbolicSet { ambient, node: SetNode::ColumnMask { moduli, excluded_columns } })
    }

    /// Exact membership test.
    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        self.ambient.check(g)?;
        match &self.node {
            SetNode::Finite { elements } => Ok(elements.binary_search(g).is_ok()),
            SetNode::FullGroup => Ok(true),
            SetNode::CoFinite { excluded } => Ok(excluded.binary_search(g).is_err()),
            SetNode::RayComplement { column, start } => {
                let k = column.len();
                let on_column = g.free[..k] == column[..];
                Ok(!(on_column && &g.free[k] >= start))
            }
            SetNode::TruncatedColumns { base, u, side } => {
                let k = base.ambient.rank;
                let x = GroupElement::from_free(g.free[..k].to_vec());
                if !base.contains(&x)? {
                    return Ok(false);
                }
                let h = u.eval(&g.free[..k])?;
                Ok(match side {
                    Side::Below => g.free[k] < h,
                    Side::Above => g.free[k] > h,
                })
            }
            SetNode::Spiked { base, u, fill } => {
                let k = base.ambient.rank;
                let x = GroupElement::from_free(g.free[..k].to_vec());
                if base.contains(&x)? {
                    return Ok(true);
                }
                match fill {
                    Fill::BaseOnly => Ok(false),
                    Fill::Max => Ok(g.free[k] < u.eval(&g.free[..k])?),
                }
            }
            SetNode::GeneralSpiked { split, base, u, side, order, fill } => {
                let (t, s) = split.split(&g.free);
                if base.contains(&GroupElement::from_free(t.clone()))? {
                    return Ok(true);
                }
                match fill {
                    Fill::BaseOnly => Ok(false),
                    Fill::Max => {
                        let h = u.eval(&t)?;
                        Ok(cmp_side(&s, &h, *side, *order))
                    }
                }
            }
            SetNode::MaskedSpiked { split, base, u, sub, offset } => {
                let (t, s) = split.split(&g.free);
                if base.contains(&GroupElement::from_free(t.clone()))? {
                    return Ok(true);
                }
                let h = u.eval(&t)?;
                if s < h {
                    return Ok(true);
                }
                let shifted: Vec<BigInt> = s.iter().zip(offset).map(|(a, b)| a - b).collect();
                Ok(!sub.hnf().contains(&shifted))
            }
            SetNode::Graph { base, values } => {
                let k = base.ambient.rank;
                let x = g.free[..k].to_vec();
                if !base.contains(&GroupElement::from_free(x.clone()))? {
                    return Ok(false);
                }
                let v = values.eval(&x)?;
                Ok(g.free[k..] == v[..])
            }
            SetNode::Translate { inner, offset } => {
                let shifted = self.ambient.sub(g, offset)?;
                inner.contains(&shifted)
            }
            SetNode::Union { parts } => {
                for p in parts {
                    if p.contains(g)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            SetNode::BasisImage { inner, basis } => {
                let pre = basis.inverse().apply(&g.free);
                inner.contains(&GroupElement::from_free(pre))
            }
            SetNode::Sublattice { lattice } => membership_in_sublattice(g, lattice),
            SetNode::ColumnMask { moduli, excluded_columns } => {
                let k1 = moduli[0].arity();
                let x = g.free[..k1].to_vec();
                let xe = GroupElement::from_free(x.clone());
                if excluded_columns.contains(&xe) {
                    return Ok(false);
                }
                for (m, y) in moduli.iter().zip(&g.free[k1..]) {
                    let q = m.eval(&x)?;
                    if q.is_zero() {
                        if !y.is_zero() {
                            return Ok(false);
                        }
                    } else if !(y % &q).is_zero() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Exactly the members inside the window, lexicographic order.
    pub fn enumerate_in_window(&self, w: &Window) -> Result<Vec<GroupElement>> {
        let mut out = Vec::new();
        for p in w.points(&self.ambient)? {
            if self.contains(&p)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Membership-equal translate by g; finite data moves eagerly, nested
    /// translates collapse.
    pub fn translate(&self, g: &GroupElement) -> Result<SymbolicSet> {
        self.ambient.check(g)?;
        let zero = self.ambient.zero();
        if g == &zero {
            return Ok(self.clone());
        }
        match &self.node {
            SetNode::Finite { elements } => SymbolicSet::finite(
                self.ambient.clone(),
                elements
                    .iter()
                    .map(|e| self.ambient.add(e, g))
                    .collect::<Result<Vec<_>>>()?,
            ),
            SetNode::FullGroup => Ok(self.clone()),
            SetNode::CoFinite { excluded } => SymbolicSet::cofinite(
                self.ambient.clone(),
                excluded
                    .iter()
                    .map(|e| self.ambient.add(e, g))
                    .collect::<Result<Vec<_>>>()?,
            ),
            SetNode::Translate { inner, offset } => {
                let total = self.ambient.add(offset, g)?;
                inner.translate(&total)
            }
            _ => Ok(SymbolicSet {
                ambient: self.ambient.clone(),
                node: SetNode::Translate {
                    inner: Box::new(self.clone()),
                    offset: g.clone(),
                },
            }),
        }
    }

    /// Pushforward under a unimodular basis change of ℤ².
    pub fn basis_image(&self, basis: &UnimodularBasis) -> Result<SymbolicSet> {
        if self.ambient != GroupSpec::free(2) {
            return Err(Error::InvalidArgument(
                "basis images are defined on Z^2".into(),
            ));
        }
        if basis == &UnimodularBasis::identity() {
            return Ok(self.clone());
        }
        match &self.node {
            SetNode::Finite { elements } => SymbolicSet::finite(
                self.ambient.clone(),
                elements
                    .iter()
                    .map(|e| GroupElement::from_free(basis.apply(&e.free)))
                    .collect(),
            ),
            SetNode::BasisImage { inner, basis: prev } => {
                // Compose the two changes of basis.
                let rows = vec![
                    vec![
                        &basis.rows[0][0] * &prev.rows[0][0] + &basis.rows[0][1] * &prev.rows[1][0],
                        &basis.rows[0][0] * &prev.rows[0][1] + &basis.rows[0][1] * &prev.rows[1][1],
                    ],
                    vec![
                        &basis.rows[1][0] * &prev.rows[0][0] + &basis.rows[1][1] * &prev.rows[1][0],
                        &basis.rows[1][0] * &prev.rows[0][1] + &basis.rows[1][1] * &prev.rows[1][1],
                    ],
                ];
                Ok(SymbolicSet {
                    ambient: self.ambient.clone(),
                    node: SetNode::BasisImage {
                        inner: inner.clone(),
                        basis: UnimodularBasis::from_bigint(rows)?,
                    },
                })
            }
            _ => Ok(SymbolicSet {
                ambient: self.ambient.clone(),
                node: SetNode::BasisImage {
                    inner: Box::new(self.clone()),
                    basis: basis.clone(),
                },
            }),
        }
    }

    /// Flatten to an explicit element list when the set is finite by
    /// construction. Returns `None` for potentially infinite sets.
    pub fn finite_elements(&self) -> Option<Vec<GroupElement>> {
        match &self.node {
            SetNode::Finite { elements } => Some(elements.clone()),
            SetNode::FullGroup => {
                let all = self.ambient.all_elements()?;
                Some(all)
            }
            SetNode::CoFinite { excluded } => {
                let all = self.ambient.all_elements()?;
                Some(all.into_iter().filter(|e| !excluded.contains(e)).collect())
            }
            SetNode::Translate { inner, offset } => {
                let inner = inner.finite_elements()?;
                inner
                    .iter()
                    .map(|e| self.ambient.add(e, offset).ok())
                    .collect()
            }
            SetNode::Union { parts } => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.finite_elements()?);
                }
                out.sort();
                out.dedup();
                Some(out)
            }
            SetNode::BasisImage { inner, basis } => {
                let inner = inner.finite_elements()?;
                Some(
                    inner
                        .iter()
                        .map(|e| GroupElement::from_free(basis.apply(&e.free)))
                        .collect(),
                )
            }
            SetNode::Graph { base, values } => {
                let xs = base.finite_elements()?;
                let mut out = Vec::new();
                for x in xs {
                    let v = values.eval(&x.free).ok()?;
                    let mut free = x.free.clone();
                    free.extend(v);
                    out.push(GroupElement::from_free(free));
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Re-check structural invariants after deserialization.
    pub fn validate(&self) -> Result<()> {
        self.ambient.validate()?;
        let rebuilt = match &self.node {
            SetNode::Finite { elements } => {
                SymbolicSet::finite(self.ambient.clone(), elements.clone())?;
                return Ok(());
            }
            SetNode::FullGroup => return Ok(()),
            SetNode::CoFinite { excluded } => {
                SymbolicSet::cofinite(self.ambient.clone(), excluded.clone())?;
                return Ok(());
            }
            SetNode::RayComplement { column, .. } => {
                if self.ambient != GroupSpec::free(column.len() + 1) {
                    return Err(Error::InvalidArgument("ray complement ambient mismatch".into()));
                }
                return Ok(());
            }
            SetNode::TruncatedColumns { base, u, side } => {
                base.validate()?;
                SymbolicSet::truncated_columns((**base).clone(), u.clone(), *side)?
            }
            SetNode::Spiked { base, u, fill } => {
                base.validate()?;
                SymbolicSet::spiked((**base).clone(), u.clone(), *fill)?
            }
            SetNode::GeneralSpiked { split, base, u, side, order, fill } => {
                base.validate()?;
                SymbolicSet::general_spiked(
                    split.clone(),
                    (**base).clone(),
                    u.clone(),
                    *side,
                    *order,
                    *fill,
                )?
            }
            SetNode::MaskedSpiked { split, base, u, sub, offset } => {
                base.validate()?;
                SymbolicSet::masked_spiked(
                    split.clone(),
                    (**base).clone(),
                    u.clone(),
                    sub.clone(),
                    offset.clone(),
                )?
            }
            SetNode::Graph { base, values } => {
                base.validate()?;
                SymbolicSet::graph((**base).clone(), values.clone())?
            }
            SetNode::Translate { inner, offset } => {
                inner.validate()?;
                self.ambient.check(offset)?;
                if inner.ambient != self.ambient {
                    return Err(Error::GroupMismatch("translate ambient mismatch".into()));
                }
                return Ok(());
            }
            SetNode::Union { parts } => {
                for p in parts {
                    p.validate()?;
                }
                SymbolicSet::union(parts.clone())?
            }
            SetNode::BasisImage { inner, basis } => {
                inner.validate()?;
                if self.ambient != GroupSpec::free(2) || inner.ambient != GroupSpec::free(2) {
                    return Err(Error::InvalidArgument("basis image ambient mismatch".into()));
                }
                UnimodularBasis::from_bigint(basis.rows.clone())?;
                return Ok(());
            }
            SetNode::Sublattice { lattice } => {
                SublatticeSpec::new(lattice.ambient_rank, lattice.basis.clone())?;
                if self.ambient != GroupSpec::free(lattice.ambient_rank) {
                    return Err(Error::InvalidArgument("sublattice ambient mismatch".into()));
                }
                return Ok(());
            }
            SetNode::ColumnMask { moduli, excluded_columns } => {
                SymbolicSet::column_mask(moduli.clone(), excluded_columns.clone())?
            }
        };
        if rebuilt.ambient != self.ambient {
            return Err(Error::GroupMismatch("ambient group mismatch".into()));
        }
        Ok(())
    }
}
