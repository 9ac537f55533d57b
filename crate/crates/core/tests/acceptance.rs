//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Expected values are frozen from independent oracles computed in this file
//! (brute-force scans, direct exact-arithmetic inequalities, the finite-group
//! bitmask oracle).

use addcomp_core::constructions::{catalog, rotated_spiked_pair};
use addcomp_core::engine::{
    is_complement_on_window, minimality_witnesses, shrink_complement_demo, MinimalityOptions,
    RadiusPolicy, WitnessOutcome,
};
use addcomp_core::func::IntFunction;
use addcomp_core::group::{GroupElement, GroupSpec, Window};
use addcomp_core::moderation::{ball_moderation, check_moderation, ModerationBound};
use addcomp_core::oracle::{subgroup_confinement_check, torsion_shapes, FiniteGroupTable};
use addcomp_core::poly::{IntPoly, RatPoly};
use addcomp_core::quad::QuadVal;
use addcomp_core::render::{render_ascii, render_svg};
use addcomp_core::sets::{Fill, SymbolicSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::time::{Duration, Instant};

/// Prints the criterion verdict; reports FAIL when the test panics first.
struct Verdict {
    label: &'static str,
    passed: bool,
    started: Instant,
}

impl Verdict {
    fn new(label: &'static str) -> Self {
        Verdict { label, passed: false, started: Instant::now() }
    }

    fn pass(mut self, limit: Option<Duration>) {
        let elapsed = self.started.elapsed();
        if let Some(l) = limit {
            assert!(
                elapsed < l,
                "{} exceeded its runtime budget: {elapsed:?} >= {l:?}",
                self.label
            );
        }
        self.passed = true;
        println!("ACCEPTANCE {}: PASS ({elapsed:?})", self.label);
    }
}

impl Drop for Verdict {
    fn drop(&mut self) {
        if !self.passed {
            println!("ACCEPTANCE {}: FAIL", self.label);
        }
    }
}

fn pt(free: &[i64]) -> GroupElement {
    GroupElement::from_ints(free)
}

fn z(n: usize) -> GroupSpec {
    GroupSpec::free(n)
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn criterion_01_parabola_pair_end_to_end() {
    let v = Verdict::new("1 (spiked parabola pair end to end)");
    let e = catalog("spiked-parabola").unwrap();
    let m = e.complement.clone().unwrap();
    let cert = is_complement_on_window(
        &e.set,
        &m,
        &Window::cube(2, 15),
        &RadiusPolicy::Certified,
    )
    .unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    assert!(cert.exact_negatives);
    assert!(cert.replay(&e.set).unwrap());
    let wits = minimality_witnesses(
        &e.set,
        &m,
        &Window::from_ints(&[(-15, 15)]).unwrap(),
        &RadiusPolicy::Certified,
        &MinimalityOptions::default(),
    )
    .unwrap();
    assert_eq!(wits.entries.len(), 31);
    assert!(wits.all_witnessed());
    for entry in &wits.entries {
        let t = entry.removed.free[0].to_i64().unwrap();
        match &entry.outcome {
            WitnessOutcome::Witness { point, bound, .. } => {
                // The certified bound is m₀(t) = 2t², from the pair algebra.
                assert_eq!(bound.clone().unwrap(), big(2 * t * t));
                // Independent oracle: exhaustively scan the removed column's
                // candidates far beyond the certified box.
                for x in -250i64..=250 {
                    if x == t {
                        continue;
                    }
                    let cand = pt(&[x, -2 * x * x]);
                    let d = e.set.ambient.sub(point, &cand).unwrap();
                    assert!(
                        !e.set.contains(&d).unwrap(),
                        "witness for t={t} covered via x={x}"
                    );
                }
            }
            other => panic!("t={t}: {other:?}"),
        }
    }
    v.pass(Some(Duration::from_secs(5)));
}

#[test]
fn criterion_02_paraboloid_pair_3d() {
    let v = Verdict::new("2 (spiked paraboloid pair in Z^3)");
    let e = catalog("spiked-paraboloid").unwrap();
    let m = e.complement.clone().unwrap();
    let cert = is_complement_on_window(
        &e.set,
        &m,
        &Window::cube(3, 8),
        &RadiusPolicy::Certified,
    )
    .unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    let wits = minimality_witnesses(
        &e.set,
        &m,
        &Window::cube(2, 5),
        &RadiusPolicy::Certified,
        &MinimalityOptions::default(),
    )
    .unwrap();
    assert_eq!(wits.entries.len(), 121);
    assert!(wits.all_witnessed());
    for entry in &wits.entries {
        if let WitnessOutcome::Witness { bound, .. } = &entry.outcome {
            let s = entry.removed.free[0].to_i64().unwrap();
            let t = entry.removed.free[1].to_i64().unwrap();
            assert_eq!(bound.clone().unwrap(), big(2 * (s * s + t * t)));
        }
    }
    v.pass(Some(Duration::from_secs(30)));
}

#[test]
fn criterion_03_ray_complement_pair_and_shrink() {
    let v = Verdict::new("3 (ray complement pair, witnesses, shrink)");
    let e = catalog("ray-complement").unwrap();
    let s = e.complement.clone().unwrap();
    let target = Window::cube(2, 10);
    let cert = is_complement_on_window(&e.set, &s, &target, &RadiusPolicy::Certified).unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    // Witnesses exactly as the removal argument predicts: dropping (a, b)
    // leaves (a', b' + 1) uncovered for the remaining element (a', b').
    let wits = minimality_witnesses(
        &e.set,
        &s,
        &target,
        &RadiusPolicy::Certified,
        &MinimalityOptions::default(),
    )
    .unwrap();
    assert!(wits.all_witnessed());
    let mut found = Vec::new();
    for entry in &wits.entries {
        if let WitnessOutcome::Witness { point, .. } = &entry.outcome {
            found.push((entry.removed.clone(), point.clone()));
        }
    }
    assert_eq!(
        found,
        vec![(pt(&[0, 0]), pt(&[1, 1])), (pt(&[1, 0]), pt(&[0, 1]))]
    );
    // The vertical prefix of the ray is a complement too, and shrinks.
    let c = SymbolicSet::finite(z(2), (0..=20).map(|n| pt(&[0, n])).collect()).unwrap();
    let cert = is_complement_on_window(&e.set, &c, &target, &RadiusPolicy::Certified).unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    let rep = shrink_complement_demo(&e.set, &c, &target, 5, None, &RadiusPolicy::Certified)
        .unwrap();
    assert_eq!(rep.rounds.len(), 5);
    assert!(rep.coverage_persisted);
    for round in &rep.rounds {
        // Non-extremal removals only.
        assert_ne!(round.removed, pt(&[0, 0]));
        assert_ne!(round.removed, pt(&[0, 20]));
    }
    v.pass(None);
}

#[test]
fn criterion_04_half_plane_single_removals() {
    let v = Verdict::new("4 (half plane: every single removal keeps coverage)");
    let e = catalog("half-plane-below").unwrap();
    let target = Window::cube(2, 10);
    let elems: Vec<GroupElement> = (0..=25).map(|n| pt(&[0, n])).collect();
    for removed in &elems {
        let rest: Vec<GroupElement> =
            elems.iter().filter(|e| *e != removed).cloned().collect();
        let c = SymbolicSet::finite(z(2), rest).unwrap();
        let cert =
            is_complement_on_window(&e.set, &c, &target, &RadiusPolicy::Certified).unwrap();
        assert!(
            cert.is_covered(),
            "coverage lost after removing {removed}: {:?}",
            cert.status
        );
    }
    v.pass(None);
}

#[test]
fn criterion_05_moderation_suite() {
    let v = Verdict::new("5 (moderation suite)");
    // (a) the ball recipe on t² equals −4t², against direct enumeration.
    let u = IntFunction::poly(1, &[(&[2], 1)]);
    let (ball_v, _) = ball_moderation(&u);
    for t in -50i64..=50 {
        // Independent oracle: enumerate the ball by brute force.
        let r2 = t * t + 1;
        let mut best = i64::MIN;
        for y in -(3 * t.abs() + 3)..=(3 * t.abs() + 3) {
            if (y + t) * (y + t) < r2 {
                best = best.max(y * y);
            }
        }
        let expected = -best;
        assert_eq!(expected, -4 * t * t);
        assert_eq!(ball_v.eval_ints(&[t]).unwrap(), big(expected));
    }
    // (b) the pair bounds hold with zero violations on the stated grids.
    let pair1 = (
        IntPoly::from_terms(1, &[(&[2], 1)]),
        IntPoly::from_terms(1, &[(&[2], -2)]),
    );
    let b1 = ModerationBound::diagonal_pair(&pair1.0, &pair1.1).unwrap();
    let r1 = check_moderation(
        &IntFunction::Poly(pair1.0),
        &IntFunction::Poly(pair1.1),
        &Window::cube(1, 10),
        &Window::cube(1, 100),
        Some(&b1),
    )
    .unwrap();
    assert_eq!(r1.violations, 0);
    assert!(!r1.growth_suspected);
    let pair2 = (
        IntPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 2], 1)]),
        IntPoly::from_terms(2, &[(&[2, 0], -2), (&[0, 2], -2)]),
    );
    let b2 = ModerationBound::diagonal_pair(&pair2.0, &pair2.1).unwrap();
    let r2 = check_moderation(
        &IntFunction::Poly(pair2.0),
        &IntFunction::Poly(pair2.1),
        &Window::cube(2, 10),
        &Window::cube(2, 100),
        Some(&b2),
    )
    .unwrap();
    assert_eq!(r2.violations, 0);
    assert!(!r2.growth_suspected);
    // (c) v = +t² is reported unbounded.
    let anti = check_moderation(
        &IntFunction::poly(1, &[(&[2], 1)]),
        &IntFunction::poly(1, &[(&[2], 1)]),
        &Window::cube(1, 3),
        &Window::cube(1, 100),
        None,
    )
    .unwrap();
    assert!(anti.growth_suspected);
    v.pass(None);
}

#[test]
fn criterion_06_oracle_suite() {
    let v = Verdict::new("6 (finite group oracle suite)");
    // Every nonempty W in every cyclic Z_n, n ≤ 12: minimal complements
    // exist and the set of minimal complements is translation closed.
    for n in 2..=12u64 {
        let g = FiniteGroupTable::new(vec![n]).unwrap();
        for w in 1..=g.full_mask() {
            let m = g.some_minimal_complement(w);
            assert!(g.is_minimal_complement(w, m), "Z{n} W={w:b}");
            let mins: std::collections::BTreeSet<u32> =
                g.minimal_complements(w).into_iter().collect();
            assert!(!mins.is_empty());
            for &c in &mins {
                for t in 0..g.n {
                    assert!(mins.contains(&g.shift(c, t)), "Z{n} W={w:b} C={c:b} +{t}");
                }
            }
        }
    }
    // Subgroup confinement for every (G, H, W ⊆ H) with |G| ≤ 12.
    for shape in torsion_shapes(12) {
        let g = FiniteGroupTable::new(shape.clone()).unwrap();
        for h in g.subgroups() {
            for w in 1..=g.full_mask() {
                if w & !h != 0 {
                    continue;
                }
                let rep = subgroup_confinement_check(&g, h, w).unwrap();
                assert!(rep.ok(), "shape {shape:?} H={h:b} W={w:b}: {rep:?}");
            }
        }
    }
    v.pass(Some(Duration::from_secs(60)));
}

#[test]
fn criterion_07_masked_column_examples() {
    let v = Verdict::new("7 (power column sets with their graph complements)");
    let e = catalog("power-columns").unwrap();
    let m = e.complement.clone().unwrap();
    let cert = is_complement_on_window(
        &e.set,
        &m,
        &Window::cube(2, 8),
        &RadiusPolicy::Certified,
    )
    .unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    assert!(cert.replay(&e.set).unwrap());
    let e3 = catalog("power-columns-3d").unwrap();
    let m3 = e3.complement.clone().unwrap();
    let cert3 = is_complement_on_window(
        &e3.set,
        &m3,
        &Window::cube(3, 5),
        &RadiusPolicy::Certified,
    )
    .unwrap();
    assert!(cert3.is_covered(), "{:?}", cert3.status);
    // The odd-prime variant is covered as well.
    let ep = catalog("prime-columns").unwrap();
    let mp = ep.complement.clone().unwrap();
    let certp = is_complement_on_window(
        &ep.set,
        &mp,
        &Window::cube(2, 8),
        &RadiusPolicy::Certified,
    )
    .unwrap();
    assert!(certp.is_covered(), "{:?}", certp.status);
    v.pass(None);
}

#[test]
fn criterion_08_twisted_4d_pair() {
    let v = Verdict::new("8 (twisted spiked pair in Z^4)");
    let e = catalog("spiked-twisted-4d").unwrap();
    let m = e.complement.clone().unwrap();
    let cert = is_complement_on_window(
        &e.set,
        &m,
        &Window::cube(4, 4),
        &RadiusPolicy::Certified,
    )
    .unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    assert!(cert.replay(&e.set).unwrap());
    v.pass(Some(Duration::from_secs(60)));
}

/// Independent oracle for the 45° rotation: evaluate the defining inequality
/// ±((x+y)/√2 − ((x−y)/√2)²) > 0 in exact quadratic-surd arithmetic.
fn direct_45(x: i64, y: i64, above: bool, axis: bool) -> bool {
    if axis && x == y {
        return true;
    }
    let two = BigInt::from(2);
    let over_sqrt2 = |v: i64| {
        QuadVal::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(v), two.clone()),
            two.clone(),
        )
    };
    let yp = over_sqrt2(x + y);
    let xp = over_sqrt2(x - y);
    let diff = yp.sub(&xp.mul(&xp));
    match diff.sign() {
        Ordering::Greater => above,
        Ordering::Less => !above,
        Ordering::Equal => false,
    }
}

#[test]
fn criterion_09_rotation_consistency() {
    let v = Verdict::new("9 (rotated parabola: pipeline vs direct inequality)");
    let above = catalog("rotated-parabola-above-45").unwrap().set;
    let below = catalog("rotated-parabola-below-45").unwrap().set;
    let below_axis = catalog("rotated-parabola-below-45-axis").unwrap();
    let mut disagreements = 0usize;
    for p in Window::cube(2, 12).points(&z(2)).unwrap() {
        let x = p.free[0].to_i64().unwrap();
        let y = p.free[1].to_i64().unwrap();
        if above.contains(&p).unwrap() != direct_45(x, y, true, false) {
            disagreements += 1;
        }
        if below.contains(&p).unwrap() != direct_45(x, y, false, false) {
            disagreements += 1;
        }
        if below_axis.set.contains(&p).unwrap() != direct_45(x, y, false, true) {
            disagreements += 1;
        }
    }
    assert_eq!(disagreements, 0);
    // The spiked variant's constructed complement covers.
    let (w, recipe) = rotated_spiked_pair(
        RatPoly::new(1, vec![(vec![2], BigRational::one())]),
        RatPoly::constant(1, BigRational::one()),
        vec![],
        1,
        1,
    )
    .unwrap();
    let cert = is_complement_on_window(
        &w,
        recipe.complement(),
        &Window::cube(2, 10),
        &RadiusPolicy::Certified,
    )
    .unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    assert!(cert.replay(&w).unwrap());
    v.pass(None);
}

#[test]
fn criterion_10_property_suite() {
    let v = Verdict::new("10 (engine vs oracle, set algebra, stable renders)");
    // Exact engine/oracle agreement for all (W, C) with |W|, |C| ≤ 4 in Z8.
    let g = FiniteGroupTable::new(vec![8]).unwrap();
    let small: Vec<u32> = (1..=g.full_mask())
        .filter(|m| m.count_ones() <= 4)
        .collect();
    let empty_window = Window::new(vec![]).unwrap();
    for &w in &small {
        let ws = g.set_of(w).unwrap();
        for &c in &small {
            let cs = g.set_of(c).unwrap();
            let cert =
                is_complement_on_window(&ws, &cs, &empty_window, &RadiusPolicy::Certified)
                    .unwrap();
            assert_eq!(
                cert.is_covered(),
                g.is_complement(w, c),
                "W={w:b} C={c:b}"
            );
        }
    }
    // Set-algebra agreement on 1000 pseudo-random windows: enumeration equals
    // pointwise membership filtering, with no evaluation errors.
    let mut seed: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    let sets: Vec<SymbolicSet> = vec![
        catalog("spiked-parabola").unwrap().set,
        catalog("spiked-parabola").unwrap().complement.unwrap(),
        catalog("ray-complement").unwrap().set,
        catalog("parabola-right").unwrap().set,
        catalog("power-columns").unwrap().set,
        catalog("rotated-parabola-below-45").unwrap().set,
        catalog("half-plane-below")
            .unwrap()
            .set
            .translate(&pt(&[1, -2]))
            .unwrap(),
        SymbolicSet::spiked(
            SymbolicSet::finite(z(1), vec![pt(&[0])]).unwrap(),
            IntFunction::poly(1, &[(&[2], 1)]),
            Fill::BaseOnly,
        )
        .unwrap(),
    ];
    for i in 0..1000usize {
        let s = &sets[i % sets.len()];
        let mut ranges = Vec::new();
        for _ in 0..s.ambient.rank {
            let lo = (next() % 21) as i64 - 10;
            let len = (next() % 6) as i64;
            ranges.push((lo, lo + len));
        }
        let win = Window::from_ints(&ranges).unwrap();
        let listed = s.enumerate_in_window(&win).unwrap();
        let filtered: Vec<GroupElement> = win
            .points(&s.ambient)
            .unwrap()
            .into_iter()
            .filter(|p| s.contains(p).unwrap())
            .collect();
        assert_eq!(listed, filtered, "window {win} on set {i}");
    }
    // Renders are byte-stable across repeated runs.
    let e = catalog("spiked-parabola").unwrap();
    let m = e.complement.unwrap();
    let layers: Vec<(&str, &SymbolicSet)> = vec![("w", &e.set), ("m", &m)];
    let win = Window::cube(2, 10);
    let svg1 = render_svg(&layers, &win, None).unwrap();
    let svg2 = render_svg(&layers, &win, None).unwrap();
    assert_eq!(svg1, svg2);
    let a1 = render_ascii(&layers, &win, None).unwrap();
    let a2 = render_ascii(&layers, &win, None).unwrap();
    assert_eq!(a1, a2);
    v.pass(None);
}

/// Graph complements produced by the builders verify as Covered with
/// certified radii on the standard acceptance windows.
#[test]
fn builder_outputs_verify_covered() {
    let vd = Verdict::new("builders (graph outputs verify)");
    for (id, window) in [
        ("spiked-parabola", Window::cube(2, 12)),
        ("spiked-paraboloid", Window::cube(3, 6)),
        ("power-columns", Window::cube(2, 8)),
    ] {
        let e = catalog(id).unwrap();
        let m = e.complement.clone().unwrap();
        let cert =
            is_complement_on_window(&e.set, &m, &window, &RadiusPolicy::Certified).unwrap();
        assert!(cert.is_covered(), "{id}: {:?}", cert.status);
    }
    vd.pass(None);
}

/// Coset lifts of oracle-minimal complements stay minimal, and restrictions
/// of minimal complements stay minimal, exhaustively for every abelian group
/// of order ≤ 16 and every subgroup triple.
#[test]
fn subgroup_round_trip_order_16() {
    let vd = Verdict::new("subgroup round trip (orders up to 16)");
    for shape in torsion_shapes(16) {
        let g = FiniteGroupTable::new(shape.clone()).unwrap();
        for h in g.subgroups() {
            for w in 1..=g.full_mask() {
                if w & !h != 0 {
                    continue;
                }
                let rep = subgroup_confinement_check(&g, h, w).unwrap();
                assert!(rep.ok(), "shape {shape:?} H={h:b} W={w:b}");
            }
        }
    }
    vd.pass(None);
}
