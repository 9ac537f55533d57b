//! Finitely generated abelian groups ℤʳ × ℤ/n₁ × ⋯ × ℤ/nₜ: elements,
//! sublattices, cosets, and unimodular basis changes.
//!
//! Free coordinates are arbitrary-precision integers so that high-degree
//! polynomial evaluation never overflows. Torsion residues are kept reduced
//! after every operation. All types are immutable values.

use crate::error::{Error, Result};
use crate::jsonutil;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Structure data for ℤʳ × ℤ/n₁ × ⋯ × ℤ/nₜ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

impl GroupSpec {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        let spec = GroupSpec { rank, torsion };
        spec.validate()?;
        Ok(spec)
    }

    /// Free abelian group ℤʳ.
    pub fn free(rank: usize) -> Self {
        GroupSpec::new(rank, vec![]).expect("positive rank")
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank + self.torsion.len() == 0 {
            return Err(Error::InvalidGroupSpec(
                "rank + torsion length must be at least 1".into(),
            ));
        }
        for &n in &self.torsion {
            if n < 2 {
                return Err(Error::InvalidGroupSpec(format!(
                    "torsion order {n} is below 2"
                )));
            }
        }
        Ok(())
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the group, when finite.
    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            return None;
        }
        let mut n: u64 = 1;
        for &t in &self.torsion {
            n = n.checked_mul(t)?;
        }
        Some(n)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.rank],
            tors: vec![0; self.torsion.len()],
        }
    }

    /// Build and validate an element of this group. Torsion residues are reduced.
    pub fn element(&self, free: Vec<BigInt>, tors: Vec<i64>) -> Result<GroupElement> {
        if free.len() != self.rank || tors.len() != self.torsion.len() {
            return Err(Error::GroupMismatch(format!(
                "expected {} free + {} torsion coordinates, got {} + {}",
                self.rank,
                self.torsion.len(),
                free.len(),
                tors.len()
            )));
        }
        let tors = tors
            .iter()
            .zip(&self.torsion)
            .map(|(&v, &n)| v.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement { free, tors })
    }

    /// Convenience constructor from machine integers.
    pub fn elem(&self, free: &[i64], tors: &[i64]) -> GroupElement {
        self.element(free.iter().map(|&v| BigInt::from(v)).collect(), tors.to_vec())
            .expect("coordinates match spec")
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.free.len() != self.rank || g.tors.len() != self.torsion.len() {
            return Err(Error::GroupMismatch(format!(
                "element {g} does not live in {self}"
            )));
        }
        for (&v, &n) in g.tors.iter().zip(&self.torsion) {
            if v >= n {
                return Err(Error::GroupMismatch(format!(
                    "torsion residue {v} not reduced mod {n}"
                )));
            }
        }
        Ok(())
    }

    /// Componentwise sum with torsion reduced. Mismatched shapes error out.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        let tors = a
            .tors
            .iter()
            .zip(&b.tors)
            .zip(&self.torsion)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { free, tors })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let free = a.free.iter().map(|x| -x).collect();
        let tors = a
            .tors
            .iter()
            .zip(&self.torsion)
            .map(|(&x, &n)| if x == 0 { 0 } else { n - x })
            .collect();
        Ok(GroupElement { free, tors })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// All elements of a finite (rank 0) group in lexicographic order.
    pub fn all_elements(&self) -> Option<Vec<GroupElement>> {
        if self.rank > 0 {
            return None;
        }
        let mut out = vec![self.zero()];
        for (i, &n) in self.torsion.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for e in &out {
                for v in 0..n {
                    let mut e2 = e.clone();
                    e2.tors[i] = v;
                    next.push(e2);
                }
            }
            out = next;
        }
        Some(out)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.rank)?;
        for n in &self.torsion {
            write!(f, " x Z/{n}")?;
        }
        Ok(())
    }
}

/// An element: free integer coordinates followed by reduced torsion residues.
///
/// `Ord` is lexicographic (free coordinates first), which fixes the canonical
/// enumeration order used throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "jsonutil::bigint_vec")]
    pub free: Vec<BigInt>,
    #[serde(default)]
    pub tors: Vec<u64>,
}

impl GroupElement {
    /// Purely free element, no torsion part.
    pub fn from_free(free: Vec<BigInt>) -> Self {
        GroupElement { free, tors: vec![] }
    }

    pub fn from_ints(free: &[i64]) -> Self {
        GroupElement::from_free(free.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn free_i64(&self) -> Option<Vec<i64>> {
        self.free.iter().map(|x| x.to_i64()).collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.free.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        if !self.tors.is_empty() {
            write!(f, ";")?;
            for (i, x) in self.tors.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}

/// Inclusive bounds per free coordinate; torsion coordinates are always full.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "jsonutil::bigint_pairs")]
    pub ranges: Vec<(BigInt, BigInt)>,
}

impl Window {
    pub fn new(ranges: Vec<(BigInt, BigInt)>) -> Result<Self> {
        for (lo, hi) in &ranges {
            if lo > hi {
                return Err(Error::InvalidWindow(format!("empty range {lo}..{hi}")));
            }
        }
        Ok(Window { ranges })
    }

    /// Symmetric box [-r, r]^dim.
    pub fn cube(dim: usize, r: i64) -> Self {
        Window::new(vec![(BigInt::from(-r), BigInt::from(r)); dim]).expect("r >= 0")
    }

    pub fn from_ints(ranges: &[(i64, i64)]) -> Result<Self> {
        Window::new(
            ranges
                .iter()
                .map(|&(a, b)| (BigInt::from(a), BigInt::from(b)))
                .collect(),
        )
    }

    /// Parse `"-10..10,-5..5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ranges = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let (lo, hi) = part
                .split_once("..")
                .ok_or_else(|| Error::InvalidWindow(format!("bad range `{part}`")))?;
            let lo: BigInt = lo
                .trim()
                .parse()
                .map_err(|_| Error::InvalidWindow(format!("bad integer `{lo}`")))?;
            let hi: BigInt = hi
                .trim()
                .parse()
                .map_err(|_| Error::InvalidWindow(format!("bad integer `{hi}`")))?;
            ranges.push((lo, hi));
        }
        Window::new(ranges)
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn contains_free(&self, free: &[BigInt]) -> bool {
        free.len() == self.ranges.len()
            && free
                .iter()
                .zip(&self.ranges)
                .all(|(x, (lo, hi))| x >= lo && x <= hi)
    }

    /// Largest range width, used to size default search bounds.
    pub fn span(&self) -> BigInt {
        self.ranges
            .iter()
            .map(|(lo, hi)| hi - lo)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn translate(&self, offset: &[BigInt]) -> Result<Self> {
        if offset.len() != self.ranges.len() {
            return Err(Error::InvalidWindow("offset dimension mismatch".into()));
        }
        Window::new(
            self.ranges
                .iter()
                .zip(offset)
                .map(|((lo, hi), d)| (lo + d, hi + d))
                .collect(),
        )
    }

    /// All points of the window in a group, lexicographic order.
    /// Free coordinates run over the ranges, torsion coordinates over the
    /// whole cyclic factor.
    pub fn points(&self, spec: &GroupSpec) -> Result<Vec<GroupElement>> {
        if self.ranges.len() != spec.rank {
            return Err(Error::InvalidWindow(format!(
                "window dimension {} does not match rank {}",
                self.ranges.len(),
                spec.rank
            )));
        }
        let mut out = vec![GroupElement {
            free: vec![],
            tors: vec![],
        }];
        for (lo, hi) in &self.ranges {
            let mut next = Vec::new();
            for e in &out {
                let mut x = lo.clone();
                while &x <= hi {
                    let mut e2 = e.clone();
                    e2.free.push(x.clone());
                    next.push(e2);
                    x += 1;
                }
            }
            out = next;
        }
        for &n in &spec.torsion {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for e in &out {
                for v in 0..n {
                    let mut e2 = e.clone();
                    e2.tors.push(v);
                    next.push(e2);
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn point_count(&self) -> BigInt {
        let mut n = BigInt::one();
        for (lo, hi) in &self.ranges {
            n *= hi - lo + 1;
        }
        n
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.ranges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{lo}..{hi}")?;
        }
        Ok(())
    }
}

/// Points at L∞ distance exactly `r` from `center`, in lexicographic order.
/// Shell 0 is the center itself.
pub fn linf_shell(center: &[BigInt], r: u64) -> Vec<Vec<BigInt>> {
    if r == 0 {
        return vec![center.to_vec()];
    }
    let r_big = BigInt::from(r);
    let win = Window::new(
        center
            .iter()
            .map(|c| (c - &r_big, c + &r_big))
            .collect::<Vec<_>>(),
    )
    .expect("valid shell window");
    let spec = GroupSpec::free(center.len());
    win.points(&spec)
        .expect("shell points")
        .into_iter()
        .map(|e| e.free)
        .filter(|p| {
            p.iter()
                .zip(center)
                .map(|(x, c)| (x - c).abs())
                .max()
                .map(|m| m == r_big)
                .unwrap_or(false)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Integer matrices in column form
// ---------------------------------------------------------------------------

type Col = Vec<BigInt>;

fn col_sub_scaled(a: &mut Col, b: &Col, q: &BigInt) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= q * y;
    }
}

/// Column-style Hermite normal form: pivots positive, one pivot per used row
/// in increasing row order, columns right of a pivot zero in its row, columns
/// left of a pivot reduced into [0, pivot) in its row.
#[derive(Debug, Clone)]
pub struct Hnf {
    pub rows: usize,
    pub cols: Vec<Col>,
    /// Pivot row of each column.
    pub pivots: Vec<usize>,
}

pub fn hnf(rows: usize, basis: &[Col]) -> Hnf {
    let mut cols: Vec<Col> = basis.to_vec();
    for c in &cols {
        assert_eq!(c.len(), rows, "column length mismatch");
    }
    let mut pivots = Vec::new();
    let mut next = 0usize; // next column slot to fill
    for row in 0..rows {
        loop {
            // Find the column (>= next) with the smallest nonzero |entry| at `row`.
            let mut best: Option<usize> = None;
            for j in next..cols.len() {
                if !cols[j][row].is_zero() {
                    match best {
                        None => best = Some(j),
                        Some(b) => {
                            if cols[j][row].abs() < cols[b][row].abs() {
                                best = Some(j);
                            }
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            cols.swap(next, b);
            let mut done = true;
            for j in next + 1..cols.len() {
                if !cols[j][row].is_zero() {
                    let q = cols[j][row].div_floor(&cols[next][row]);
                    let (head, tail) = cols.split_at_mut(j);
                    col_sub_scaled(&mut tail[0], &head[next], &q);
                    if !cols[j][row].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if cols[next][row].is_negative() {
                    for x in cols[next].iter_mut() {
                        *x = -&*x;
                    }
                }
                // Reduce earlier columns at this row into [0, pivot).
                let pivot = cols[next][row].clone();
                for j in 0..next {
                    let q = cols[j][row].div_floor(&pivot);
                    if !q.is_zero() {
                        let (head, tail) = cols.split_at_mut(next);
                        col_sub_scaled(&mut head[j], &tail[0], &q);
                    }
                }
                pivots.push(row);
                next += 1;
                break;
            }
        }
        if next == cols.len() {
            break;
        }
    }
    cols.truncate(next);
    Hnf { rows, cols, pivots }
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Index of the spanned lattice in ℤ^rows, when finite.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() < self.rows {
            return None;
        }
        let mut d = BigInt::one();
        for (j, &p) in self.pivots.iter().enumerate() {
            d *= &self.cols[j][p];
        }
        Some(d)
    }

    /// Is `v` an integer combination of the columns?
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.rows);
        let mut r = v.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            let (q, rem) = r[p].div_rem(&self.cols[j][p]);
            if !rem.is_zero() {
                return false;
            }
            col_sub_scaled(&mut r, &self.cols[j], &q);
        }
        r.iter().all(|x| x.is_zero())
    }

    /// Canonical coset representative: reduce pivot rows into [0, pivot).
    /// For a full-rank square lattice this maps each coset to the unique
    /// lexicographically smallest point of the fundamental domain.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut r = v.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            let q = r[p].div_floor(&self.cols[j][p]);
            col_sub_scaled(&mut r, &self.cols[j], &q);
        }
        r
    }
}

/// A full-column-rank sublattice of ℤ^ambient given by basis columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeSpec {
    pub ambient_rank: usize,
    #[serde(with = "jsonutil::bigint_mat")]
    pub basis: Vec<Vec<BigInt>>,
}

impl SublatticeSpec {
    pub fn new(ambient_rank: usize, basis: Vec<Vec<BigInt>>) -> Result<Self> {
        let spec = SublatticeSpec { ambient_rank, basis };
        if spec.hnf().rank() != spec.basis.len() {
            return Err(Error::DegenerateBasis);
        }
        Ok(spec)
    }

    pub fn from_ints(ambient_rank: usize, basis: &[&[i64]]) -> Result<Self> {
        SublatticeSpec::new(
            ambient_rank,
            basis
                .iter()
                .map(|col| col.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    /// Scaled lattice q·ℤᵏ.
    pub fn scaled(ambient_rank: usize, q: i64) -> Result<Self> {
        let mut basis = vec![vec![BigInt::zero(); ambient_rank]; ambient_rank];
        for (i, col) in basis.iter_mut().enumerate() {
            col[i] = BigInt::from(q);
        }
        SublatticeSpec::new(ambient_rank, basis)
    }

    pub fn hnf(&self) -> Hnf {
        hnf(self.ambient_rank, &self.basis)
    }

    pub fn index(&self) -> Option<BigInt> {
        self.hnf().index()
    }
}

/// `g` is an integer combination of the sublattice basis.
pub fn membership_in_sublattice(g: &GroupElement, h: &SublatticeSpec) -> Result<bool> {
    if g.free.len() != h.ambient_rank || !g.tors.is_empty() {
        return Err(Error::GroupMismatch(format!(
            "element {g} does not live in Z^{}",
            h.ambient_rank
        )));
    }
    Ok(h.hnf().contains(&g.free))
}

/// One canonical representative per coset of `h` in ℤ^ambient.
///
/// Finite index: the fundamental domain of the Hermite-normal-form basis,
/// sorted lexicographically. Infinite index: the quotient free directions are
/// walked in the spiral order 0, 1, −1, 2, −2, … and `prefix` representatives
/// are returned; without `prefix` this is an error.
pub fn coset_representatives(
    h: &SublatticeSpec,
    prefix: Option<usize>,
) -> Result<Vec<GroupElement>> {
    let hn = h.hnf();
    let rows = h.ambient_rank;
    let finite = hn.rank() == rows;
    if !finite && prefix.is_none() {
        return Err(Error::InfiniteIndex);
    }
    // Odometer over pivot-row digits [0, d_j).
    let mut pivot_digits: Vec<Vec<BigInt>> = Vec::new();
    for (j, &p) in hn.pivots.iter().enumerate() {
        let d = hn.cols[j][p].to_u64().ok_or_else(|| {
            Error::InvalidArgument("fundamental domain too large to enumerate".into())
        })?;
        pivot_digits.push((0..d).map(BigInt::from).collect());
    }
    let free_rows: Vec<usize> = (0..rows).filter(|r| !hn.pivots.contains(r)).collect();

    let mut raw: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); rows]];
    for (j, digits) in pivot_digits.iter().enumerate() {
        let p = hn.pivots[j];
        let mut next = Vec::with_capacity(raw.len() * digits.len());
        for v in &raw {
            for d in digits {
                let mut v2 = v.clone();
                v2[p] = d.clone();
                next.push(v2);
            }
        }
        raw = next;
    }
    if !free_rows.is_empty() {
        let want = prefix.unwrap_or(0);
        // Spiral over the free quotient directions until enough cosets exist.
        let mut spiral: Vec<BigInt> = vec![BigInt::zero()];
        let mut k: i64 = 1;
        while spiral.len().pow(free_rows.len() as u32) * raw.len() < want {
            spiral.push(BigInt::from(k));
            spiral.push(BigInt::from(-k));
            k += 1;
        }
        for &fr in &free_rows {
            let mut next = Vec::new();
            for v in &raw {
                for s in &spiral {
                    let mut v2 = v.clone();
                    v2[fr] = s.clone();
                    next.push(v2);
                }
            }
            raw = next;
        }
    }
    let mut reps: Vec<GroupElement> = raw
        .into_iter()
        .map(|v| GroupElement::from_free(hn.reduce(&v)))
        .collect();
    if finite {
        reps.sort();
        reps.dedup();
    } else {
        // Keep spiral order; duplicates cannot arise (distinct quotient digits).
        reps.truncate(prefix.unwrap());
    }
    Ok(reps)
}

// ---------------------------------------------------------------------------
// Unimodular 2x2 bases and the rational rotation decomposition
// ---------------------------------------------------------------------------

/// 2×2 integer matrix (p q; s t) with determinant ±1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularBasis {
    #[serde(with = "jsonutil::bigint_mat")]
    pub rows: Vec<Vec<BigInt>>,
}

impl UnimodularBasis {
    pub fn new(rows: [[i64; 2]; 2]) -> Result<Self> {
        UnimodularBasis::from_bigint(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn from_bigint(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let u = UnimodularBasis { rows };
        let d = u.det();
        if d.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(d.to_string()));
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        UnimodularBasis::new([[1, 0], [0, 1]]).unwrap()
    }

    pub fn det(&self) -> BigInt {
        &self.rows[0][0] * &self.rows[1][1] - &self.rows[0][1] * &self.rows[1][0]
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        vec![
            &self.rows[0][0] * &v[0] + &self.rows[0][1] * &v[1],
            &self.rows[1][0] * &v[0] + &self.rows[1][1] * &v[1],
        ]
    }

    /// Exact integer inverse (adjugate divided by the ±1 determinant).
    pub fn inverse(&self) -> UnimodularBasis {
        let d = self.det();
        let adj = vec![
            vec![self.rows[1][1].clone(), -&self.rows[0][1]],
            vec![-&self.rows[1][0], self.rows[0][0].clone()],
        ];
        let rows = adj
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &d).collect())
            .collect();
        UnimodularBasis { rows }
    }
}

/// Extended Euclid: returns (g, x, y) with a·x + b·y = g = gcd(a, b) ≥ 0.
pub fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        if a.is_negative() {
            return (-a, BigInt::from(-1), BigInt::zero());
        }
        return (a.clone(), BigInt::one(), BigInt::zero());
    }
    let (q, r) = a.div_rem(b);
    let (g, x, y) = egcd(b, &r);
    (g, y.clone(), x - q * y)
}

/// For coprime (a, b), solve a·d − b·c = −1 and return the direct-sum data
/// G₁ = ⟨(d, c)⟩, G₂ = ⟨(b, a)⟩ of ℤ². Among all solutions (c + ka, d + kb)
/// the pair minimizing |c| + |d| is chosen, ties broken lexicographically.
pub fn rational_rotation_basis(
    a: i64,
    b: i64,
) -> Result<(UnimodularBasis, SublatticeSpec, SublatticeSpec)> {
    let (ab, bb) = (BigInt::from(a), BigInt::from(b));
    if a == 0 && b == 0 {
        return Err(Error::InvalidArgument("(a, b) must be nonzero".into()));
    }
    let (g, x, y) = egcd(&ab, &bb);
    if !g.is_one() {
        return Err(Error::NotCoprime(a.to_string(), b.to_string()));
    }
    // a·x + b·y = 1  ⇒  a·(−x) − b·y = −1, so (c₀, d₀) = (y, −x).
    let (c0, d0) = (y, -x);
    let mut best: Option<(BigInt, BigInt)> = None;
    // |c₀ + ka| + |d₀ + kb| is piecewise linear in k; scan around its kinks.
    let mut candidates: Vec<BigInt> = vec![BigInt::zero()];
    if a != 0 {
        candidates.push(-&c0 / &ab);
    }
    if b != 0 {
        candidates.push(-&d0 / &bb);
    }
    let expanded: Vec<BigInt> = candidates
        .iter()
        .flat_map(|k| (-2..=2).map(move |d| k + BigInt::from(d)))
        .collect();
    for k in expanded {
        let c = &c0 + &k * &ab;
        let d = &d0 + &k * &bb;
        let score = c.abs() + d.abs();
        let better = match &best {
            None => true,
            Some((bc, bd)) => {
                let bscore = bc.abs() + bd.abs();
                score < bscore || (score == bscore && (c.clone(), d.clone()) < (bc.clone(), bd.clone()))
            }
        };
        if better {
            best = Some((c, d));
        }
    }
    let (c, d) = best.unwrap();
    debug_assert_eq!(&ab * &d - &bb * &c, BigInt::from(-1));
    let g1 = SublatticeSpec::new(2, vec![vec![d.clone(), c.clone()]])?;
    let g2 = SublatticeSpec::new(2, vec![vec![bb.clone(), ab.clone()]])?;
    let u = UnimodularBasis::from_bigint(vec![vec![d, bb], vec![c, ab]])?;
    Ok((u, g1, g2))
}

// ---------------------------------------------------------------------------
// Small square integer matrices: determinant and unimodular inverse
// ---------------------------------------------------------------------------

fn det_cols(cols: &[Col]) -> BigInt {
    let n = cols.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return cols[0][0].clone();
    }
    let mut d = BigInt::zero();
    for (j, col) in cols.iter().enumerate() {
        if col[0].is_zero() {
            continue;
        }
        let minor: Vec<Col> = cols
            .iter()
            .enumerate()
            .filter(|(jj, _)| *jj != j)
            .map(|(_, c)| c[1..].to_vec())
            .collect();
        let term = &col[0] * det_cols(&minor);
        if j % 2 == 0 {
            d += term;
        } else {
            d -= term;
        }
    }
    d
}

/// Inverse of a unimodular integer matrix given by columns; `None` when the
/// determinant is not ±1. Returned in column form.
pub fn unimodular_inverse(cols: &[Col]) -> Option<Vec<Col>> {
    let n = cols.len();
    for c in cols {
        if c.len() != n {
            return None;
        }
    }
    let d = det_cols(cols);
    if d.abs() != BigInt::one() {
        return None;
    }
    // Adjugate via cofactors: inv[i][j] = cof(j, i) / det.
    let mut inv_cols = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Col> = cols
                .iter()
                .enumerate()
                .filter(|(cj, _)| *cj != i)
                .map(|(_, c)| {
                    c.iter()
                        .enumerate()
                        .filter(|(ri, _)| *ri != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let mut cof = det_cols(&minor);
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            // inv column j gets entry at row i.
            inv_cols[j][i] = cof / &d;
        }
    }
    Some(inv_cols)
}

pub fn mat_vec(cols: &[Col], v: &[BigInt]) -> Vec<BigInt> {
    let n = cols[0].len();
    let mut out = vec![BigInt::zero(); n];
    for (col, x) in cols.iter().zip(v) {
        for (o, c) in out.iter_mut().zip(col) {
            *o += c * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> GroupSpec {
        GroupSpec::free(2)
    }

    #[test]
    fn add_componentwise() {
        let g = z2();
        let s = g
            .add(&g.elem(&[1, 2], &[]), &g.elem(&[3, -5], &[]))
            .unwrap();
        assert_eq!(s, g.elem(&[4, -3], &[]));
    }

    #[test]
    fn add_reduces_torsion() {
        let g = GroupSpec::new(0, vec![4]).unwrap();
        let s = g.add(&g.elem(&[], &[3]), &g.elem(&[], &[3])).unwrap();
        assert_eq!(s, g.elem(&[], &[2]));
    }

    #[test]
    fn add_mixed_group() {
        let g = GroupSpec::new(1, vec![2]).unwrap();
        let s = g.add(&g.elem(&[0], &[1]), &g.elem(&[-1], &[1])).unwrap();
        assert_eq!(s, g.elem(&[-1], &[0]));
    }

    #[test]
    fn add_rejects_mismatch() {
        let g = z2();
        let other = GroupSpec::free(1);
        assert!(g
            .add(&g.elem(&[1, 2], &[]), &other.elem(&[1], &[]))
            .is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::new(0, vec![]).is_err());
        assert!(GroupSpec::new(0, vec![1]).is_err());
        assert!(GroupSpec::new(0, vec![2]).is_ok());
    }

    #[test]
    fn rotation_basis_45() {
        let (u, _g1, g2) = rational_rotation_basis(1, 1).unwrap();
        assert_eq!(u.det().abs(), BigInt::one());
        // G2 generated by (b, a) = (1, 1).
        assert_eq!(g2.basis, vec![vec![BigInt::one(), BigInt::one()]]);
    }

    #[test]
    fn rotation_basis_degenerate() {
        // (a,b) = (1,0): a·d − b·c = d = −1, tie-break c = 0.
        let (_, g1, g2) = rational_rotation_basis(1, 0).unwrap();
        assert_eq!(g1.basis, vec![vec![BigInt::from(-1), BigInt::zero()]]);
        assert_eq!(g2.basis, vec![vec![BigInt::zero(), BigInt::one()]]);
    }

    #[test]
    fn rotation_basis_2_3() {
        // 2d − 3c = −1 with minimal |c|+|d| gives (c, d) = (1, 1).
        let (u, g1, _) = rational_rotation_basis(2, 3).unwrap();
        assert_eq!(g1.basis, vec![vec![BigInt::one(), BigInt::one()]]);
        assert_eq!(u.det(), BigInt::from(-1));
    }

    #[test]
    fn rotation_basis_rejects_common_factor() {
        assert!(rational_rotation_basis(2, 4).is_err());
    }

    #[test]
    fn rotation_det_exhaustive() {
        for a in -50i64..=50 {
            for b in -50i64..=50 {
                if (a, b) == (0, 0) {
                    continue;
                }
                if num_integer::gcd(a, b) != 1 {
                    continue;
                }
                let (u, g1, g2) = rational_rotation_basis(a, b).unwrap();
                assert_eq!(u.det(), BigInt::from(-1), "(a,b)=({a},{b})");
                // Direct sum: the combined basis is unimodular.
                let cols = vec![g1.basis[0].clone(), g2.basis[0].clone()];
                assert_eq!(det_cols(&cols).abs(), BigInt::one());
            }
        }
    }

    #[test]
    fn cosets_2z_in_z() {
        let h = SublatticeSpec::from_ints(1, &[&[2]]).unwrap();
        let reps = coset_representatives(&h, None).unwrap();
        assert_eq!(
            reps,
            vec![GroupElement::from_ints(&[0]), GroupElement::from_ints(&[1])]
        );
    }

    #[test]
    fn cosets_index_two_lattice() {
        // H generated by (1,1), (0,2) has index 2 in Z^2.
        let h = SublatticeSpec::from_ints(2, &[&[1, 1], &[0, 2]]).unwrap();
        assert_eq!(h.index(), Some(BigInt::from(2)));
        let reps = coset_representatives(&h, None).unwrap();
        assert_eq!(reps.len(), 2);
        // Pairwise distinct cosets: differences not in H.
        let g = z2();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                let d = g.sub(&reps[i], &reps[j]).unwrap();
                assert!(!membership_in_sublattice(&d, &h).unwrap());
            }
        }
        assert_eq!(
            reps,
            vec![GroupElement::from_ints(&[0, 0]), GroupElement::from_ints(&[0, 1])]
        );
    }

    #[test]
    fn cosets_infinite_index_prefix() {
        let h = SublatticeSpec::from_ints(2, &[&[1, 0]]).unwrap();
        assert!(coset_representatives(&h, None).is_err());
        let reps = coset_representatives(&h, Some(3)).unwrap();
        assert_eq!(
            reps,
            vec![
                GroupElement::from_ints(&[0, 0]),
                GroupElement::from_ints(&[0, 1]),
                GroupElement::from_ints(&[0, -1]),
            ]
        );
        let g = z2();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                let d = g.sub(&reps[i], &reps[j]).unwrap();
                assert!(!membership_in_sublattice(&d, &h).unwrap());
            }
        }
    }

    #[test]
    fn sublattice_membership() {
        let diag = SublatticeSpec::from_ints(2, &[&[1, 1]]).unwrap();
        assert!(membership_in_sublattice(&GroupElement::from_ints(&[2, 2]), &diag).unwrap());
        assert!(!membership_in_sublattice(&GroupElement::from_ints(&[1, 2]), &diag).unwrap());
        let h = SublatticeSpec::from_ints(2, &[&[1, 1], &[0, 2]]).unwrap();
        // (3, -1): 3 - (-1) is even, so inside.
        assert!(membership_in_sublattice(&GroupElement::from_ints(&[3, -1]), &h).unwrap());
        assert!(!membership_in_sublattice(&GroupElement::from_ints(&[3, 0]), &h).unwrap());
    }

    #[test]
    fn coset_count_matches_index() {
        for basis in [
            vec![vec![3i64, 0], vec![1, 2]],
            vec![vec![2, 1], vec![0, 5]],
            vec![vec![4, 2], vec![2, 4]],
        ] {
            let cols: Vec<&[i64]> = basis.iter().map(|c| c.as_slice()).collect();
            let h = SublatticeSpec::from_ints(2, &cols).unwrap();
            let idx = h.index().unwrap().to_u64().unwrap() as usize;
            let reps = coset_representatives(&h, None).unwrap();
            assert_eq!(reps.len(), idx);
            let g = z2();
            for i in 0..reps.len() {
                for j in i + 1..reps.len() {
                    let d = g.sub(&reps[i], &reps[j]).unwrap();
                    assert!(!membership_in_sublattice(&d, &h).unwrap());
                }
            }
        }
    }

    #[test]
    fn basis_inverse_roundtrip() {
        let u = UnimodularBasis::new([[1, 1], [0, 1]]).unwrap();
        let v = vec![BigInt::from(3), BigInt::from(-2)];
        let w = u.inverse().apply(&u.apply(&v));
        assert_eq!(w, v);
    }

    #[test]
    fn window_parse_and_points() {
        let w = Window::parse("-1..1,0..1").unwrap();
        let pts = w.points(&z2()).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], GroupElement::from_ints(&[-1, 0]));
        assert_eq!(pts[5], GroupElement::from_ints(&[1, 1]));
        assert!(Window::parse("3..1").is_err());
    }

    #[test]
    fn shell_order() {
        let c = [BigInt::zero(), BigInt::zero()];
        let s0 = linf_shell(&c, 0);
        assert_eq!(s0.len(), 1);
        let s1 = linf_shell(&c, 1);
        assert_eq!(s1.len(), 8);
        assert_eq!(s1[0], vec![BigInt::from(-1), BigInt::from(-1)]);
    }
}
