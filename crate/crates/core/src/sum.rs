//! Symplectic sums `Z = X1 #_{F1 = F2} X2` and their minimality.
//!
//! `Z` is never built as a model: its homology depends on the gluing map,
//! which the decision and the Chern numbers below do not.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exceptional::{cremona_reduces, exceptional_for, meets_with, ExceptionalSet, MeetsVerdict};
use crate::knef::{is_rationally_knef, KnefCertificate, KnefVerdict};
use crate::lattice::{pair, square, HomologyClass};
use crate::model::{detect_ruled_section, ChernNumbers, ManifoldModel, ModelKind, SurfaceInModel};
use crate::search::{Query, Rel};

pub const GLUING_NOTE: &str = "gluing map suppressed: verdict and Chern numbers do not depend on it";
pub const CAPPING_NOTE: &str =
    "converse of the ruled-section case uses the pairwise-sum capping construction; consumed, not rebuilt";

#[derive(Debug, Clone)]
pub struct SumSide {
    pub model: ManifoldModel,
    pub surface: SurfaceInModel,
}

impl SumSide {
    pub fn new(model: ManifoldModel, surface: SurfaceInModel) -> Self {
        Self { model, surface }
    }
}

#[derive(Debug, Clone)]
pub struct SumDescriptor {
    pub side1: SumSide,
    pub side2: SumSide,
}

impl SumDescriptor {
    pub fn new(side1: SumSide, side2: SumSide) -> Self {
        Self { side1, side2 }
    }

    pub fn genus(&self) -> u32 {
        self.side1.surface.genus
    }

    pub fn swapped(&self) -> Self {
        Self {
            side1: self.side2.clone(),
            side2: self.side1.clone(),
        }
    }

    fn side(&self, i: u8) -> &SumSide {
        if i == 1 {
            &self.side1
        } else {
            &self.side2
        }
    }
}

/// Checks equal positive genus and `F1² + F2² = 0`.
pub fn validate_sum(s: &SumDescriptor) -> Result<()> {
    let mut problems = Vec::new();
    let (f1, f2) = (&s.side1.surface, &s.side2.surface);
    if f1.genus != f2.genus {
        problems.push(format!("genus mismatch: {} has genus {}, {} has genus {}", f1.name, f1.genus, f2.name, f2.genus));
    }
    for f in [f1, f2] {
        if f.genus == 0 {
            problems.push(format!("{} has genus 0; sums need surfaces of positive genus", f.name));
        }
    }
    let (a, b) = (f1.square(), f2.square());
    if a + b != 0 {
        problems.push(format!("squares do not cancel: {a} + {b} = {}", a + b));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSum(problems))
    }
}

/// Chern numbers of a sum along square-zero surfaces.
pub fn sum_chern(s: &SumDescriptor) -> Result<ChernNumbers> {
    validate_sum(s)?;
    if s.side1.surface.square() != 0 {
        return Err(Error::Unsupported(format!(
            "Chern numbers of sums along surfaces of square ±{} are not determined here; only square 0 is supported",
            s.side1.surface.square().abs()
        )));
    }
    let (c1, c2) = (s.side1.model.chern_numbers(), s.side2.model.chern_numbers());
    Ok(sum_chern_numbers(c1, c2, s.genus()))
}

/// `c₁² = a1 + a2 + 8(g-1)`, `c₂ = b1 + b2 + 4(g-1)`.
pub fn sum_chern_numbers(x1: ChernNumbers, x2: ChernNumbers, genus: u32) -> ChernNumbers {
    let g = genus as i64 - 1;
    ChernNumbers::new(x1.c1_sq + x2.c1_sq + 8 * g, x1.c2 + x2.c2 + 4 * g)
}

/// `<K1 + F1, A1> + <K2 + F2, A2>`; a splitting of an exceptional class of
/// the sum makes this `-1`.
pub fn can_relation(s: &SumDescriptor, a1: &HomologyClass, a2: &HomologyClass) -> Result<i64> {
    let l1 = s.side1.model.canonical().add(&s.side1.surface.class)?;
    let l2 = s.side2.model.canonical().add(&s.side2.surface.class)?;
    Ok(pair(&l1, a1)? + pair(&l2, a2)?)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Splitting {
    pub a1: HomologyClass,
    pub a2: HomologyClass,
    pub d: i64,
}

/// Genus-0 classes `C` with `C² ≥ -1`, positive area, `F·C ≥ 0`, inside the
/// box, plus `extra` linear constraints.
///
/// Components of the limiting curves are simple spheres for a generic
/// almost complex structure, so: square `-1` classes on rational models
/// must pass Cremona reduction, classes of square `≥ 0` must pair
/// nonnegatively with every known exceptional class, and on irrational
/// ruled models only classes of degree zero over the base qualify.
fn sphere_candidates(side: &SumSide, set: &ExceptionalSet, bound: i64, extra: &[(Vec<i64>, Rel, i64)]) -> Result<Vec<Vec<i64>>> {
    let model = &side.model;
    let k = model.canonical().coeffs().to_vec();
    let lattice = model.lattice();
    let gram = lattice.gram();
    let head: Vec<usize> = (0..lattice.rank())
        .filter(|&i| !(gram[i][i] == -1 && (0..lattice.rank()).all(|j| j == i || gram[i][j] == 0)))
        .collect();
    let mut max_sq = 0i64;
    for &i in &head {
        for &j in &head {
            max_sq += gram[i][j].abs() * bound * bound;
        }
    }
    let fiber = match model.kind() {
        ModelKind::RuledTrivial { h, .. } | ModelKind::RuledTwisted { h } if h > 0 => model.fiber(),
        _ => None,
    };
    let rational = matches!(model.kind(), ModelKind::Rational { .. });
    let mut walls = Vec::new();
    let _ = set.for_each(|x| {
        walls.push(x.to_vec());
        if walls.len() < POSITIVITY_PRUNE {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    let mut out = Vec::new();
    for sq in -1..=max_sq {
        let mut q = Query::new(lattice, bound)
            .norm_eq(sq)
            .pairing(&k, Rel::Eq, -2 - sq)
            .pairing(model.omega().coeffs(), Rel::Gt, 0)
            .pairing(side.surface.class.coeffs(), Rel::Ge, 0);
        if let Some(f) = &fiber {
            q = q.pairing(f.coeffs(), Rel::Eq, 0);
        }
        for (phi, rel, rhs) in extra {
            q = q.pairing(phi, *rel, *rhs);
        }
        if sq >= 0 {
            for w in &walls {
                q = q.pairing(w, Rel::Ge, 0);
            }
        }
        for x in q.collect() {
            if sq == -1 && rational && !cremona_reduces(&x) {
                continue;
            }
            if sq >= 0 && set.len() as usize > walls.len() {
                let c = lattice.class(x.clone())?;
                if matches!(set.min_pairing(&c)?, Some((v, _)) if v < 0) {
                    continue;
                }
            }
            out.push(x);
        }
    }
    Ok(out)
}

/// Degree bound for the exceptional classes used by the positivity filter.
pub const SPLITTING_DEGREE_BOUND: i64 = 6;

/// Exceptional classes used as pruning walls inside the search.
const POSITIVITY_PRUNE: usize = 64;

/// All `(A1, A2, d)` with `Ai` zero or a positive multiple of a sphere
/// candidate, `d = A1·F1 = A2·F2 ≥ 0` and `can_relation = -1`.
///
/// One of the two terms must be negative, so each side's candidates with
/// `<K + F, C> < 0` are matched against the other side with both pairings
/// pinned, which keeps the search small.
pub fn enumerate_can_splittings(s: &SumDescriptor, coeff_bound: i64) -> Result<Vec<Splitting>> {
    validate_sum(s)?;
    if coeff_bound < 1 {
        return Err(Error::InvalidModel(format!("coefficient bound must be positive, got {coeff_bound}")));
    }
    let sets = [
        exceptional_for(&s.side1.model, SPLITTING_DEGREE_BOUND.max(coeff_bound))?,
        exceptional_for(&s.side2.model, SPLITTING_DEGREE_BOUND.max(coeff_bound))?,
    ];
    let mut found = BTreeSet::new();
    for (neg, other) in [(1u8, 2u8), (2, 1)] {
        let ns = s.side(neg);
        let os = s.side(other);
        let nl = ns.model.canonical().add(&ns.surface.class)?;
        let ol = os.model.canonical().add(&os.surface.class)?;
        // Whatever the other side contributes is bounded by the box.
        let reach = |c: &HomologyClass| -> i64 {
            os.model.lattice().functional(c.coeffs()).iter().map(|x| x.abs()).sum::<i64>() * coeff_bound
        };
        let (v_reach, d_reach) = (reach(&ol), reach(&os.surface.class));
        let negatives = sphere_candidates(
            ns,
            &sets[neg as usize - 1],
            coeff_bound,
            &[
                (nl.coeffs().to_vec(), Rel::Lt, 0),
                (nl.coeffs().to_vec(), Rel::Gt, -2 - v_reach),
                (ns.surface.class.coeffs().to_vec(), Rel::Lt, d_reach + 1),
            ],
        )?;
        let mut by_key: BTreeMap<(i64, i64), Vec<HomologyClass>> = BTreeMap::new();
        for c in negatives {
            let cls = ns.model.class(c.clone())?;
            let v = pair(&nl, &cls)?;
            let d = pair(&ns.surface.class, &cls)?;
            let top = c.iter().map(|x| x.abs()).max().unwrap_or(0).max(1);
            for k in 1..=coeff_bound / top {
                let want = -1 - v * k;
                if want > v_reach || d * k > d_reach {
                    break;
                }
                by_key.entry((d * k, want)).or_default().push(cls.scale(k));
            }
        }
        for ((dk, want), sources) in by_key {
            let mut partners = Vec::new();
            if want == 0 && dk == 0 {
                partners.push(os.model.lattice().zero());
            }
            for k2 in 1..=coeff_bound {
                if dk % k2 != 0 || want % k2 != 0 {
                    continue;
                }
                let found_here = sphere_candidates(
                    os,
                    &sets[other as usize - 1],
                    coeff_bound / k2,
                    &[
                        (ol.coeffs().to_vec(), Rel::Eq, want / k2),
                        (os.surface.class.coeffs().to_vec(), Rel::Eq, dk / k2),
                    ],
                )?;
                for p in found_here {
                    partners.push(os.model.class(p)?.scale(k2));
                }
            }
            for a in &sources {
                for b in &partners {
                    found.insert(order(neg, a.clone(), b.clone(), dk));
                }
            }
        }
    }
    let out: Vec<Splitting> = found.into_iter().collect();
    for sp in &out {
        debug_assert_eq!(can_relation(s, &sp.a1, &sp.a2).ok(), Some(-1));
    }
    Ok(out)
}

fn order(neg_side: u8, a: HomologyClass, b: HomologyClass, d: i64) -> Splitting {
    if neg_side == 1 {
        Splitting { a1: a, a2: b, d }
    } else {
        Splitting { a1: b, a2: a, d }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideWitness {
    pub side: u8,
    pub class: HomologyClass,
    pub pairing: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MinimalityVerdict {
    /// Some `Fi` misses an exceptional class.
    NotMinimalCaseI { witnesses: Vec<SideWitness> },
    /// A side is ruled with `Fi` a section; `Z` is minimal iff the other side
    /// is. `resolution` is `None` when that cannot be read off the model.
    ConditionalCaseII { ruled_sides: Vec<u8>, resolution: Option<bool> },
    MinimalCaseIII,
}

impl MinimalityVerdict {
    /// `Some(true)` minimal, `Some(false)` not minimal, `None` unresolved.
    pub fn minimal(&self) -> Option<bool> {
        match self {
            MinimalityVerdict::NotMinimalCaseI { .. } => Some(false),
            MinimalityVerdict::ConditionalCaseII { resolution, .. } => *resolution,
            MinimalityVerdict::MinimalCaseIII => Some(true),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MinimalityVerdict::NotMinimalCaseI { .. } => "not minimal (case i)",
            MinimalityVerdict::ConditionalCaseII { .. } => "conditional (case ii)",
            MinimalityVerdict::MinimalCaseIII => "minimal (case iii)",
        }
    }
}

impl fmt::Display for MinimalityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityDecision {
    pub verdict: MinimalityVerdict,
    pub genus: u32,
    pub exceptional: [MeetsVerdict; 2],
    pub certificates: Vec<KnefCertificate>,
    pub chern: Option<ChernNumbers>,
    pub degree_bound: i64,
    pub notes: Vec<String>,
}

fn missing_assertions(s: &SumDescriptor) -> Vec<String> {
    let mut missing = Vec::new();
    for (i, side) in [(1, &s.side1), (2, &s.side2)] {
        let m = &side.model;
        if m.kind() != ModelKind::General {
            continue;
        }
        if m.supplied_exceptional().is_none() && m.flags().minimal != Some(true) {
            missing.push(format!("side {i} ({}): exceptional class list or minimal = true", m.name()));
        }
        if m.b_plus() == 1 && m.flags().minimal_model_kind.is_none() {
            missing.push(format!("side {i} ({}): minimal_model_kind", m.name()));
        }
    }
    missing
}

fn side_is_minimal(m: &ManifoldModel) -> Option<bool> {
    match m.kind() {
        ModelKind::General => m.flags().minimal,
        _ => m.blowups().map(|n| n == 0),
    }
}

/// Decides minimality of the sum.
pub fn decide_minimality(s: &SumDescriptor, degree_bound: i64) -> Result<MinimalityDecision> {
    validate_sum(s)?;
    let missing = missing_assertions(s);
    if !missing.is_empty() {
        return Err(Error::MissingAssertions(missing));
    }
    let mut notes = vec![GLUING_NOTE.to_string()];
    let chern = match sum_chern(s) {
        Ok(c) => Some(c),
        Err(_) => {
            notes.push("Chern numbers not reported for surfaces of nonzero square".into());
            None
        }
    };
    let sides = [&s.side1, &s.side2];
    let mut meets = Vec::with_capacity(2);
    for side in sides {
        let set = exceptional_for(&side.model, degree_bound)?;
        meets.push(meets_with(&set, &side.surface)?);
    }
    let exceptional = [meets[0].clone(), meets[1].clone()];
    let mut decision = MinimalityDecision {
        verdict: MinimalityVerdict::MinimalCaseIII,
        genus: s.genus(),
        exceptional,
        certificates: Vec::new(),
        chern,
        degree_bound,
        notes,
    };

    let mut witnesses = Vec::new();
    for (i, m) in meets.iter().enumerate() {
        if let MeetsVerdict::No { witness, pairing } = m {
            if *pairing < 0 {
                return Err(Error::InvalidSurface(format!(
                    "side {}: F·({witness}) = {pairing} < 0 violates positivity of intersections",
                    i + 1
                )));
            }
            witnesses.push(SideWitness {
                side: i as u8 + 1,
                class: witness.clone(),
                pairing: *pairing,
            });
        }
    }
    if !witnesses.is_empty() {
        decision.verdict = MinimalityVerdict::NotMinimalCaseI { witnesses };
        return Ok(decision);
    }

    let mut ruled_sides = Vec::new();
    for (i, side) in sides.iter().enumerate() {
        if detect_ruled_section(&side.model, &side.surface)? {
            ruled_sides.push(i as u8 + 1);
        }
    }
    if !ruled_sides.is_empty() {
        let mut resolution = Some(true);
        for &r in &ruled_sides {
            let other = if r == 1 { &s.side2 } else { &s.side1 };
            resolution = match (resolution, side_is_minimal(&other.model)) {
                (Some(a), Some(b)) => Some(a && b),
                (Some(false), None) => Some(false),
                _ => None,
            };
        }
        decision.notes.push(CAPPING_NOTE.into());
        if resolution.is_none() {
            decision
                .notes
                .push("minimality of the other side is not asserted; left unresolved".into());
        }
        decision.verdict = MinimalityVerdict::ConditionalCaseII { ruled_sides, resolution };
        return Ok(decision);
    }

    for side in sides {
        let cert = is_rationally_knef(&side.model, &side.surface, degree_bound)?;
        decision.certificates.push(cert);
    }
    if decision.certificates.iter().all(|c| c.verdict == KnefVerdict::Knef) {
        decision.verdict = MinimalityVerdict::MinimalCaseIII;
        return Ok(decision);
    }
    let summary: Vec<String> = decision
        .certificates
        .iter()
        .map(|c| format!("{} in {}: {} ({})", c.surface, c.model, c.verdict, c.case))
        .collect();
    Err(Error::Internal(format!(
        "case analysis left no verdict: {}",
        summary.join("; ")
    )))
}

/// A Lefschetz fibration over `S²`, as far as the minimality rule needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FibrationDescriptor {
    pub genus: u32,
    pub relatively_minimal: bool,
    pub trivial_projection: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LefschetzReport {
    pub minimal: bool,
    pub reasons: Vec<String>,
}

/// Fiber sums of relatively minimal fibrations of equal positive genus are
/// minimal unless one side is the projection `Σ_g × S² → S²`.
pub fn lefschetz_fiber_sum_minimal(f1: FibrationDescriptor, f2: FibrationDescriptor) -> Result<LefschetzReport> {
    let mut failed = Vec::new();
    if f1.genus != f2.genus {
        failed.push(format!("fiber genera differ: {} vs {}", f1.genus, f2.genus));
    }
    for (i, f) in [(1, f1), (2, f2)] {
        if f.genus == 0 {
            failed.push(format!("fibration {i} has fiber genus 0"));
        }
        if !f.relatively_minimal {
            failed.push(format!("fibration {i} is not relatively minimal"));
        }
        if f.trivial_projection {
            failed.push(format!("fibration {i} is the trivial projection"));
        }
    }
    if !failed.is_empty() {
        return Err(Error::Inapplicable(failed.join("; ")));
    }
    Ok(LefschetzReport {
        minimal: true,
        reasons: vec![
            "a fiber of a relatively minimal fibration meets every exceptional sphere".into(),
            "a fiber is never a section of a ruling unless the fibration is the trivial projection".into(),
        ],
    })
}

/// Convenience: the square of each side's surface.
pub fn squares(s: &SumDescriptor) -> (i64, i64) {
    (square(&s.side1.surface.class), square(&s.side2.surface.class))
}
