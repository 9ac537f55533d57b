//! Builders for minimal complements and the named sets of the theory:
//! graphs of moderations over a base complement, coset lifts, subgroup
//! restrictions, rotated truncated/spiked sets, masked maximal spiked sets,
//! and a catalog of ready-made examples.

use crate::error::{Error, Result};
use crate::func::{
    FloorMode, GenRule, GeneratedFn, IntFunction, PoleValue, SurdFloorFn, VectorFunction,
};
use crate::group::{
    membership_in_sublattice, rational_rotation_basis, GroupElement, GroupSpec, SublatticeSpec,
    UnimodularBasis, Window,
};
use crate::moderation::{ball_moderation, poly_moderation, subgroup_valued_moderation};
use crate::poly::RatPoly;
use crate::sets::{FiberSplit, Fill, OrderMode, SetNode, Side, SymbolicSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A replayable construction together with the complement it produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum MinCompRecipe {
    /// Graph of a moderation over a base complement.
    GraphOfModeration {
        base: SymbolicSet,
        m: SymbolicSet,
        v: VectorFunction,
        complement: SymbolicSet,
    },
    /// Union of coset translates of a complement inside a subgroup.
    CosetLift {
        inner: SymbolicSet,
        reps: Vec<GroupElement>,
        complement: SymbolicSet,
    },
    /// Intersection with a subgroup.
    SubgroupRestrict {
        from: SymbolicSet,
        complement: SymbolicSet,
    },
    /// Masked maximal spiked set with a sublattice-valued moderation graph.
    MaskedSpiked {
        target: SymbolicSet,
        m: SymbolicSet,
        v: VectorFunction,
        complement: SymbolicSet,
    },
}

impl MinCompRecipe {
    pub fn complement(&self) -> &SymbolicSet {
        match self {
            MinCompRecipe::GraphOfModeration { complement, .. }
            | MinCompRecipe::CosetLift { complement, .. }
            | MinCompRecipe::SubgroupRestrict { complement, .. }
            | MinCompRecipe::MaskedSpiked { complement, .. } => complement,
        }
    }
}

/// The graph {(x, v(x)) : x ∈ M} as a complement candidate for a spiked set
/// with base B. M is caller-supplied (ideally a minimal complement of B).
pub fn graph_min_complement(
    base: &SymbolicSet,
    m: &SymbolicSet,
    v: &VectorFunction,
) -> Result<MinCompRecipe> {
    if base.ambient != m.ambient {
        return Err(Error::GroupMismatch(
            "the base and its complement live in different groups".into(),
        ));
    }
    let complement = SymbolicSet::graph(m.clone(), v.clone())?;
    Ok(MinCompRecipe::GraphOfModeration {
        base: base.clone(),
        m: m.clone(),
        v: v.clone(),
        complement,
    })
}

/// A subgroup given either by a lattice basis or by an explicit element list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupHandle {
    Lattice(SublatticeSpec),
    Finite(Vec<GroupElement>),
}

impl SubgroupHandle {
    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        match self {
            SubgroupHandle::Lattice(l) => membership_in_sublattice(g, l),
            SubgroupHandle::Finite(elems) => Ok(elems.contains(g)),
        }
    }

    fn as_set(&self, ambient: &GroupSpec) -> Result<SymbolicSet> {
        match self {
            SubgroupHandle::Lattice(l) => Ok(SymbolicSet::sublattice(l.clone())),
            SubgroupHandle::Finite(elems) => {
                SymbolicSet::finite(ambient.clone(), elems.clone())
            }
        }
    }
}

/// M ∩ H as a symbolic set. Finite sets filter exactly; the full group
/// restricts to the subgroup itself; anything else needs a scan window and
/// produces the explicit intersection inside it.
pub fn subgroup_restrict(
    m: &SymbolicSet,
    h: &SubgroupHandle,
    scan: Option<&Window>,
) -> Result<MinCompRecipe> {
    let complement = match &m.node {
        SetNode::Finite { elements } => {
            let mut kept = Vec::new();
            for e in elements {
                if h.contains(e)? {
                    kept.push(e.clone());
                }
            }
            SymbolicSet::finite(m.ambient.clone(), kept)?
        }
        SetNode::FullGroup => h.as_set(&m.ambient)?,
        _ => match scan {
            Some(w) => {
                let mut kept = Vec::new();
                for e in m.enumerate_in_window(w)? {
                    if h.contains(&e)? {
                        kept.push(e);
                    }
                }
                SymbolicSet::finite(m.ambient.clone(), kept)?
            }
            None => {
                return Err(Error::NotRepresentable(format!(
                    "intersection of a {} set with a subgroup; pass a scan window",
                    set_kind_name(&m.node)
                )))
            }
        },
    };
    Ok(MinCompRecipe::SubgroupRestrict { from: m.clone(), complement })
}

fn set_kind_name(node: &SetNode) -> &'static str {
    match node {
        SetNode::Finite { .. } => "finite",
        SetNode::FullGroup => "full-group",
        SetNode::CoFinite { .. } => "cofinite",
        SetNode::RayComplement { .. } => "ray-complement",
        SetNode::TruncatedColumns { .. } => "truncated-columns",
        SetNode::Spiked { .. } => "spiked",
        SetNode::GeneralSpiked { .. } => "general-spiked",
        SetNode::MaskedSpiked { .. } => "masked-spiked",
        SetNode::Graph { .. } => "graph",
        SetNode::Translate { .. } => "translate",
        SetNode::Union { .. } => "union",
        SetNode::BasisImage { .. } => "basis-image",
        SetNode::Sublattice { .. } => "sublattice",
        SetNode::ColumnMask { .. } => "column-mask",
    }
}

/// ∪_λ (M + g_λ) for coset representatives g_λ of H; pairwise representatives
/// in the same coset are rejected.
pub fn coset_lift(
    m: &SymbolicSet,
    h: &SubgroupHandle,
    reps: &[GroupElement],
) -> Result<MinCompRecipe> {
    for (i, a) in reps.iter().enumerate() {
        for b in reps.iter().skip(i + 1) {
            let d = m.ambient.sub(a, b)?;
            if h.contains(&d)? {
                return Err(Error::DuplicateCoset(a.to_string(), b.to_string()));
            }
        }
    }
    let parts = reps
        .iter()
        .map(|g| m.translate(g))
        .collect::<Result<Vec<_>>>()?;
    let complement = SymbolicSet::union(parts)?;
    Ok(MinCompRecipe::CosetLift {
        inner: m.clone(),
        reps: reps.to_vec(),
        complement,
    })
}

/// Data of a rational rotation: the decomposition ℤ² = G₁ ⊕ G₂ with fibers
/// along (a, b), and the exact height α_t of the rotated graph of f over the
/// base point t·(d, c).
#[derive(Debug, Clone)]
pub struct RotationData {
    pub split: FiberSplit,
    pub basis: UnimodularBasis,
    pub radicand: BigInt,
    pub slope_k: BigInt,
}

pub fn rotation_data(a: i64, b: i64) -> Result<RotationData> {
    // Fibers must run along (a, b): feed the Euclid step the swapped pair so
    // the returned G₂ generator is (a, b).
    let (_, g1, g2) = rational_rotation_basis(b, a)?;
    let d = g1.basis[0][0].clone();
    let c = g1.basis[0][1].clone();
    let split = FiberSplit::new(vec![vec![d.clone(), c.clone()]], g2.basis.clone())?;
    let basis = UnimodularBasis::from_bigint(vec![
        vec![d.clone(), BigInt::from(a)],
        vec![c.clone(), BigInt::from(b)],
    ])?;
    let radicand = BigInt::from(a * a + b * b);
    let slope_k = BigInt::from(a) * &d + BigInt::from(b) * &c;
    Ok(RotationData { split, basis, radicand, slope_k })
}

/// The part of ℤ² strictly above (`side = Above`) or strictly below the graph
/// of y = f(x) rotated clockwise by θ with tan θ = a/b, gcd(a, b) = 1;
/// `include_axis` adds the full fiber line through the origin, making the
/// below-variant a spiked set with base {0}.
pub fn rotated_truncated_set(
    f_num: RatPoly,
    f_den: RatPoly,
    poles: Vec<PoleValue>,
    a: i64,
    b: i64,
    side: Side,
    include_axis: bool,
) -> Result<SymbolicSet> {
    let rot = rotation_data(a, b)?;
    let mode = match side {
        // Integer s is strictly above α exactly when s > ⌊α⌋.
        Side::Above => FloorMode::Floor,
        // Strictly below exactly when s < ⌈α⌉.
        Side::Below => FloorMode::Ceil,
    };
    let height = IntFunction::SurdFloor(SurdFloorFn::rotation_height(
        rot.radicand.clone(),
        f_num,
        f_den,
        rot.slope_k.clone(),
        mode,
        poles,
    ));
    let base = if include_axis {
        SymbolicSet::finite(GroupSpec::free(1), vec![GroupElement::from_ints(&[0])])?
    } else {
        SymbolicSet::finite(GroupSpec::free(1), vec![])?
    };
    SymbolicSet::general_spiked(
        rot.split,
        base,
        VectorFunction::scalar(height),
        side,
        OrderMode::Dict,
        Fill::Max,
    )
}

/// The below-rotated set with the axis included, together with the graph of a
/// ball moderation of its height as the complement.
pub fn rotated_spiked_pair(
    f_num: RatPoly,
    f_den: RatPoly,
    poles: Vec<PoleValue>,
    a: i64,
    b: i64,
) -> Result<(SymbolicSet, MinCompRecipe)> {
    let w = rotated_truncated_set(f_num, f_den, poles, a, b, Side::Below, true)?;
    let (height, basis) = match &w.node {
        SetNode::GeneralSpiked { u, .. } => {
            let rot = rotation_data(a, b)?;
            (u.components[0].clone(), rot.basis)
        }
        _ => unreachable!("rotated builder returns a general spiked set"),
    };
    let (v, _) = ball_moderation(&height);
    let base = SymbolicSet::finite(GroupSpec::free(1), vec![GroupElement::from_ints(&[0])])?;
    let m = SymbolicSet::full(GroupSpec::free(1));
    let graph = SymbolicSet::graph(m.clone(), VectorFunction::scalar(v.clone()))?;
    let complement = graph.basis_image(&basis)?;
    Ok((
        w,
        MinCompRecipe::GraphOfModeration { base, m, v: VectorFunction::scalar(v), complement },
    ))
}

/// The maximal masked spiked set over a base B with height u: full fibers
/// over B, fibers below u elsewhere, plus everything above u outside the
/// coset g₂ + G₂′ of the fiber group. Returns the set and the graph of a
/// G₂′-valued moderation restricted to the supplied complement M of B.
pub fn masked_max_set(
    split: FiberSplit,
    base: &SymbolicSet,
    u: &VectorFunction,
    sub: &SublatticeSpec,
    offset: &[BigInt],
    m: &SymbolicSet,
) -> Result<(SymbolicSet, MinCompRecipe)> {
    let target =
        SymbolicSet::masked_spiked(split, base.clone(), u.clone(), sub.clone(), offset.to_vec())?;
    // Componentwise moderation of u, then reduced into the sublattice.
    let mut comps = Vec::new();
    for c in &u.components {
        let v = match c {
            IntFunction::Poly(p) => IntFunction::Poly(poly_moderation(p).0),
            other => ball_moderation(other).0,
        };
        comps.push(v);
    }
    let v = VectorFunction::new(comps)?;
    let v_reduced = subgroup_valued_moderation(&v, sub)?;
    let complement = SymbolicSet::graph(m.clone(), v_reduced.clone())?;
    Ok((
        target.clone(),
        MinCompRecipe::MaskedSpiked { target, m: m.clone(), v: v_reduced, complement },
    ))
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// A named set, with the complement the theory pairs it with when one exists.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub describe: &'static str,
    pub set: SymbolicSet,
    pub complement: Option<SymbolicSet>,
}

fn z(n: usize) -> GroupSpec {
    GroupSpec::free(n)
}

fn pt(free: &[i64]) -> GroupElement {
    GroupElement::from_ints(free)
}

fn origin_base(k: usize) -> SymbolicSet {
    SymbolicSet::finite(z(k), vec![pt(&vec![0i64; k])]).unwrap()
}

fn full_graph(k: usize, comps: Vec<IntFunction>) -> SymbolicSet {
    SymbolicSet::graph(
        SymbolicSet::full(z(k)),
        VectorFunction::new(comps).unwrap(),
    )
    .unwrap()
}

fn pow_abs_mask(bases: &[i64], excluded: Vec<GroupElement>) -> SymbolicSet {
    let moduli = bases
        .iter()
        .map(|&b| {
            IntFunction::Generated(GeneratedFn::new(1, GenRule::PowAbs { base: BigInt::from(b) }))
        })
        .collect();
    SymbolicSet::column_mask(moduli, excluded).unwrap()
}

fn square_poly() -> IntFunction {
    IntFunction::poly(1, &[(&[2], 1)])
}

fn rat_square() -> RatPoly {
    RatPoly::new(1, vec![(vec![2], BigRational::one())])
}

fn rat_one() -> RatPoly {
    RatPoly::constant(1, BigRational::one())
}

pub fn catalog_ids() -> Vec<&'static str> {
    vec![
        "parabola-above",
        "parabola-below",
        "parabola-right",
        "parabola-left",
        "paraboloid-above",
        "paraboloid-below",
        "ray-complement",
        "half-plane-below",
        "spiked-parabola",
        "spiked-paraboloid",
        "spiked-twisted-4d",
        "power-columns",
        "prime-columns",
        "power-columns-3d",
        "rotated-parabola-above-45",
        "rotated-parabola-below-45",
        "rotated-parabola-below-45-axis",
    ]
}

/// Build a catalog entry by id.
pub fn catalog(id: &str) -> Result<CatalogEntry> {
    let entry = match id {
        "parabola-above" => CatalogEntry {
            id: "parabola-above",
            describe: "{(x, y) : y > x^2}; admits no minimal complement",
            set: SymbolicSet::truncated_columns(
                SymbolicSet::full(z(1)),
                square_poly(),
                Side::Above,
            )?,
            complement: None,
        },
        "parabola-below" => CatalogEntry {
            id: "parabola-below",
            describe: "{(x, y) : y < x^2}; admits no minimal complement",
            set: SymbolicSet::truncated_columns(
                SymbolicSet::full(z(1)),
                square_poly(),
                Side::Below,
            )?,
            complement: None,
        },
        "parabola-right" | "parabola-left" => {
            let side = if id == "parabola-right" { Side::Above } else { Side::Below };
            let upright =
                SymbolicSet::truncated_columns(SymbolicSet::full(z(1)), square_poly(), side)?;
            let swap = UnimodularBasis::new([[0, 1], [1, 0]])?;
            CatalogEntry {
                id: if id == "parabola-right" { "parabola-right" } else { "parabola-left" },
                describe: "{(x, y) : ±(x − y^2) > 0}; admits no minimal complement",
                set: upright.basis_image(&swap)?,
                complement: None,
            }
        }
        "paraboloid-above" | "paraboloid-below" => {
            let side = if id == "paraboloid-above" { Side::Above } else { Side::Below };
            CatalogEntry {
                id: if id == "paraboloid-above" { "paraboloid-above" } else { "paraboloid-below" },
                describe: "{(x, y, z) : ±(z − x^2 − y^2) > 0}; admits no minimal complement",
                set: SymbolicSet::truncated_columns(
                    SymbolicSet::full(z(2)),
                    IntFunction::poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]),
                    side,
                )?,
                complement: None,
            }
        }
        "ray-complement" => CatalogEntry {
            id: "ray-complement",
            describe: "Z^2 minus the upward ray {(0, n) : n >= 1}",
            set: SymbolicSet::ray_complement(vec![BigInt::from(0)], BigInt::from(1)),
            complement: Some(SymbolicSet::finite(z(2), vec![pt(&[0, 0]), pt(&[1, 0])])?),
        },
        "half-plane-below" => CatalogEntry {
            id: "half-plane-below",
            describe: "Z x Z_{<0}; admits no minimal complement",
            set: SymbolicSet::truncated_columns(
                SymbolicSet::full(z(1)),
                IntFunction::constant(1, 0),
                Side::Below,
            )?,
            complement: None,
        },
        "spiked-parabola" => CatalogEntry {
            id: "spiked-parabola",
            describe: "{y < x^2} plus the full y-axis; complement {(t, -2t^2)}",
            set: SymbolicSet::spiked(origin_base(1), square_poly(), Fill::Max)?,
            complement: Some(full_graph(1, vec![IntFunction::poly(1, &[(&[2], -2)])])),
        },
        "spiked-paraboloid" => CatalogEntry {
            id: "spiked-paraboloid",
            describe: "{z < x^2 + y^2} plus the full z-axis; complement {(s, t, -2(s^2+t^2))}",
            set: SymbolicSet::spiked(
                origin_base(2),
                IntFunction::poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]),
                Fill::Max,
            )?,
            complement: Some(full_graph(
                2,
                vec![IntFunction::poly(2, &[(&[2, 0], -2), (&[0, 2], -2)])],
            )),
        },
        "spiked-twisted-4d" => CatalogEntry {
            id: "spiked-twisted-4d",
            describe: "{z < x^2+y^2, w < x^3+y^3} plus the plane fiber over (0,0); \
                       complement {(s, t, -2(s^2+t^2), -(s^4+t^4))}",
            set: SymbolicSet::general_spiked(
                FiberSplit::identity(2, 2),
                origin_base(2),
                VectorFunction::new(vec![
                    IntFunction::poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]),
                    IntFunction::poly(2, &[(&[3, 0], 1), (&[0, 3], 1)]),
                ])?,
                Side::Below,
                OrderMode::Product,
                Fill::Max,
            )?,
            complement: Some(full_graph(
                2,
                vec![
                    IntFunction::poly(2, &[(&[2, 0], -2), (&[0, 2], -2)]),
                    IntFunction::poly(2, &[(&[4, 0], -1), (&[0, 4], -1)]),
                ],
            )),
        },
        "power-columns" => CatalogEntry {
            id: "power-columns",
            describe: "{y < x^2} plus the y-axis plus {(m, 3^|m| n)}; complement {(t, -3t^2)}",
            set: SymbolicSet::union(vec![
                SymbolicSet::spiked(origin_base(1), square_poly(), Fill::Max)?,
                pow_abs_mask(&[3], vec![]),
            ])?,
            complement: Some(full_graph(1, vec![IntFunction::poly(1, &[(&[2], -3)])])),
        },
        "prime-columns" => CatalogEntry {
            id: "prime-columns",
            describe: "{y < x^2} plus the y-axis plus {(m, p_|m| n) : m != 0} for the \
                       odd primes p_k; complement {(t, -2t^2)}",
            set: SymbolicSet::union(vec![
                SymbolicSet::spiked(origin_base(1), square_poly(), Fill::Max)?,
                SymbolicSet::column_mask(
                    vec![IntFunction::Generated(GeneratedFn::new(1, GenRule::NthOddPrime))],
                    vec![pt(&[0])],
                )?,
            ])?,
            complement: Some(full_graph(1, vec![IntFunction::poly(1, &[(&[2], -2)])])),
        },
        "power-columns-3d" => CatalogEntry {
            id: "power-columns-3d",
            describe: "{y < x^2, z < x^3} plus the fiber plane over 0 plus \
                       {(i, 3^|i| j, 4^|i| k)}; complement {(t, -3t^2, -4t^4)}",
            set: SymbolicSet::union(vec![
                SymbolicSet::general_spiked(
                    FiberSplit::identity(1, 2),
                    origin_base(1),
                    VectorFunction::new(vec![
                        square_poly(),
                        IntFunction::poly(1, &[(&[3], 1)]),
                    ])?,
                    Side::Below,
                    OrderMode::Product,
                    Fill::Max,
                )?,
                pow_abs_mask(&[3, 4], vec![]),
            ])?,
            complement: Some(full_graph(
                1,
                vec![
                    IntFunction::poly(1, &[(&[2], -3)]),
                    IntFunction::poly(1, &[(&[4], -4)]),
                ],
            )),
        },
        "rotated-parabola-above-45" => CatalogEntry {
            id: "rotated-parabola-above-45",
            describe: "points above the parabola y = x^2 rotated clockwise by 45 degrees",
            set: rotated_truncated_set(rat_square(), rat_one(), vec![], 1, 1, Side::Above, false)?,
            complement: None,
        },
        "rotated-parabola-below-45" => CatalogEntry {
            id: "rotated-parabola-below-45",
            describe: "points below the parabola y = x^2 rotated clockwise by 45 degrees",
            set: rotated_truncated_set(rat_square(), rat_one(), vec![], 1, 1, Side::Below, false)?,
            complement: None,
        },
        "rotated-parabola-below-45-axis" => {
            let (w, recipe) = rotated_spiked_pair(rat_square(), rat_one(), vec![], 1, 1)?;
            CatalogEntry {
                id: "rotated-parabola-below-45-axis",
                describe: "below the rotated parabola plus the full fiber line; \
                           complement is the graph of a ball moderation",
                set: w,
                complement: Some(recipe.complement().clone()),
            }
        }
        other => return Err(Error::UnknownCatalogId(other.to_string())),
    };
    Ok(entry)
}
