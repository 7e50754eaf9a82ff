//! Building blocks for minimal manifolds with prescribed Chern numbers,
//! iterated sums, and the realizable region.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exceptional::exceptional_for;
use crate::knef::Check;
use crate::lattice::{pair, HomologyClass};
use crate::model::{noether_check, ChernNumbers, GeneralSpec, ManifoldModel, MinimalModelKind, SurfaceInModel};
use crate::sum::{decide_minimality, sum_chern, MinimalityDecision, SumDescriptor, SumSide};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BlockName {
    #[serde(rename = "M_G")]
    MG,
    P1,
    P2,
    Q1,
    Q2,
    S11,
    #[serde(rename = "CP2_8")]
    Cp2x8,
}

impl BlockName {
    pub const ALL: [BlockName; 7] = [
        BlockName::MG,
        BlockName::P1,
        BlockName::P2,
        BlockName::Q1,
        BlockName::Q2,
        BlockName::S11,
        BlockName::Cp2x8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BlockName::MG => "M_G",
            BlockName::P1 => "P1",
            BlockName::P2 => "P2",
            BlockName::Q1 => "Q1",
            BlockName::Q2 => "Q2",
            BlockName::S11 => "S11",
            BlockName::Cp2x8 => "CP2_8",
        }
    }
}

impl fmt::Display for BlockName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Chern numbers where `c₁²` may be unknown: Euler characteristics add
/// across any sum, signatures only across square-zero sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartialChern {
    pub c1_sq: Option<i64>,
    pub c2: i64,
}

impl From<ChernNumbers> for PartialChern {
    fn from(c: ChernNumbers) -> Self {
        Self {
            c1_sq: Some(c.c1_sq),
            c2: c.c2,
        }
    }
}

impl fmt::Display for PartialChern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c1_sq {
            Some(a) => write!(f, "(c1² = {a}, c2 = {})", self.c2),
            None => write!(f, "(c1² = ?, c2 = {})", self.c2),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildingBlock {
    pub name: BlockName,
    #[serde(skip)]
    pub model: Option<ManifoldModel>,
    #[serde(skip)]
    pub surface: Option<SurfaceInModel>,
    /// `(square, genus)` of the gluing surface, from adjunction.
    pub surface_invariants: Option<(i64, u32)>,
    pub chern: PartialChern,
    /// Invariants are asserted rather than computed from a presentation.
    pub asserted: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub chain: Option<ChainReport>,
}

impl BuildingBlock {
    fn from_model(name: BlockName, model: ManifoldModel, surface: SurfaceInModel, asserted: bool) -> Self {
        let chern = model.chern_numbers().into();
        let notes = model.notes().to_vec();
        Self {
            name,
            surface_invariants: Some((surface.square(), surface.genus)),
            model: Some(model),
            surface: Some(surface),
            chern,
            asserted,
            checks: Vec::new(),
            notes,
            chain: None,
        }
    }

    pub fn side(&self) -> Option<SumSide> {
        Some(SumSide::new(self.model.clone()?, self.surface.clone()?))
    }

    fn expect(&mut self, square: i64, genus: u32, chern: (i64, i64)) -> Result<()> {
        let (sq, g) = self.surface_invariants.expect("concrete block");
        self.checks.push(Check::new(
            "surface square and genus",
            format!("F² = {sq}, g = {g}"),
            (sq, g) == (square, genus),
        ));
        let c = self.chern;
        self.checks.push(Check::new(
            "Chern numbers",
            c.to_string(),
            c.c1_sq == Some(chern.0) && c.c2 == chern.1,
        ));
        Ok(())
    }

    fn finish(mut self) -> Result<Self> {
        if let Some(a) = self.chern.c1_sq {
            self.checks.push(Check::new(
                "c1² + c2 ≡ 0 (mod 12)",
                format!("{} + {} = {}", a, self.chern.c2, a + self.chern.c2),
                noether_check(a, self.chern.c2),
            ));
        }
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {} ({})", self.name, c.label, c.detail))
            .collect();
        if failed.is_empty() {
            Ok(self)
        } else {
            Err(Error::Internal(format!("building block fixture corrupted: {}", failed.join("; "))))
        }
    }
}

fn general(spec: GeneralSpec) -> Result<ManifoldModel> {
    ManifoldModel::general(spec)
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Checks `min_E <c, E>` over the exceptional set at `degree_bound`.
fn min_over_exceptional(model: &ManifoldModel, c: &HomologyClass, degree_bound: i64) -> Result<(Option<i64>, bool)> {
    let set = exceptional_for(model, degree_bound)?;
    Ok((set.min_pairing(c)?.map(|(v, _)| v), set.complete()))
}

fn block_m_g() -> Result<BuildingBlock> {
    let model = general(GeneralSpec {
        name: "M_G".into(),
        labels: strings(&["T", "S"]),
        gram: vec![vec![0, 1], vec![1, 0]],
        canonical: vec![0, 0],
        omega: vec![1, 1],
        b1: 0,
        b_plus: 3,
        b_minus: 19,
        minimal: Some(true),
        minimal_model_kind: Some(MinimalModelKind::Neither),
        aspherical: false,
        exceptional: Some(Vec::new()),
        notes: vec![
            "asserted record: spin, hence minimal; c1² = 0, c2 > 0; b1, b± are representative values".into(),
            "lattice is the hyperbolic summand spanned by the torus T and a dual class".into(),
        ],
    })?;
    let t = model.basis("T")?;
    let surface = SurfaceInModel::from_class(&model, "T", t)?;
    let mut b = BuildingBlock::from_model(BlockName::MG, model, surface, true);
    let c = b.chern;
    b.checks.push(Check::new("c1² = 0, c2 > 0", c.to_string(), c.c1_sq == Some(0) && c.c2 > 0));
    let (sq, g) = b.surface_invariants.expect("concrete");
    b.checks.push(Check::new("torus of square 0", format!("T² = {sq}, g = {g}"), (sq, g) == (0, 1)));
    b.finish()
}

fn block_p1(degree_bound: i64) -> Result<BuildingBlock> {
    let model = ManifoldModel::rational(13)?.with_name("P1");
    let surface = SurfaceInModel::parse(&model, "F", "4H - 2E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9 - E10 - E11 - E12 - E13")?;
    let s = model.canonical().add(&surface.class)?;
    let mut b = BuildingBlock::from_model(BlockName::P1, model, surface, false);
    b.expect(0, 2, (-4, 16))?;
    b.checks.push(Check::new(
        "PD[F] - c1 is the line class S",
        format!("K + F = {s}"),
        s.coeffs() == b.model.as_ref().expect("concrete").parse_class("H - E1")?.coeffs(),
    ));
    effective_residual_check(&mut b, &s, degree_bound)?;
    b.finish()
}

fn block_p2(degree_bound: i64) -> Result<BuildingBlock> {
    let model = ManifoldModel::rational(12)?.with_name("P2");
    let surface = SurfaceInModel::parse(
        &model,
        "F",
        "6H - 2E1 - 2E2 - 2E3 - 2E4 - 2E5 - 2E6 - 2E7 - 2E8 - E9 - E10 - E11 - E12",
    )?;
    let s = model.canonical().add(&surface.class)?;
    let mut b = BuildingBlock::from_model(BlockName::P2, model, surface, false);
    b.expect(0, 2, (-3, 15))?;
    effective_residual_check(&mut b, &s, degree_bound)?;
    b.finish()
}

/// `PD[F] - c1` pairs nonnegatively with every exceptional class, and `F`
/// meets all of them.
fn effective_residual_check(b: &mut BuildingBlock, residual: &HomologyClass, degree_bound: i64) -> Result<()> {
    let model = b.model.as_ref().expect("concrete");
    let f = b.surface.as_ref().expect("concrete").class.clone();
    let scope = |complete: bool| {
        if complete {
            "complete set".to_string()
        } else {
            format!("classes up to degree {degree_bound}")
        }
    };
    let (m, complete) = min_over_exceptional(model, residual, degree_bound)?;
    b.checks.push(Check::new(
        "PD[F] - c1 pairs >= 0 with exceptional classes",
        format!("min = {}, {}", m.map_or("none".into(), |v| v.to_string()), scope(complete)),
        m.is_none_or(|v| v >= 0),
    ));
    let (m, complete) = min_over_exceptional(model, &f, degree_bound)?;
    b.checks.push(Check::new(
        "F meets every exceptional class",
        format!("min F·E = {}, {}", m.map_or("none".into(), |v| v.to_string()), scope(complete)),
        m.is_none_or(|v| v >= 1),
    ));
    Ok(())
}

fn block_q1() -> Result<BuildingBlock> {
    let model = general(GeneralSpec {
        name: "Q1".into(),
        labels: strings(&["T1", "T2", "E1", "E2"]),
        gram: vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, -1, 0], vec![0, 0, 0, -1]],
        canonical: vec![0, 0, 1, 1],
        omega: vec![3, 3, -1, -1],
        b1: 4,
        b_plus: 3,
        b_minus: 5,
        minimal: Some(false),
        minimal_model_kind: Some(MinimalModelKind::Neither),
        aspherical: true,
        exceptional: Some(vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]),
        notes: vec!["T^4 # 2(-CP2); lattice restricted to the span of T1, T2, E1, E2".into()],
    })?;
    let surface = SurfaceInModel::parse(&model, "F", "T1 + T2 - E1 - E2")?;
    let mut b = BuildingBlock::from_model(BlockName::Q1, model, surface, false);
    b.expect(0, 2, (-2, 2))?;
    let model = b.model.as_ref().expect("concrete");
    let f = b.surface.as_ref().expect("concrete").class.clone();
    let list = model.supplied_exceptional().unwrap_or(&[]).to_vec();
    let pairings = list.iter().map(|e| pair(&f, e)).collect::<Result<Vec<_>>>()?;
    b.checks.push(Check::new(
        "only E1, E2 are exceptional, both meet F",
        format!("F·E = {pairings:?}"),
        list.len() == 2 && pairings.iter().all(|&v| v >= 1),
    ));
    b.finish()
}

fn block_q2() -> Result<BuildingBlock> {
    let model = general(GeneralSpec {
        name: "Q2".into(),
        labels: strings(&["F", "T"]),
        gram: vec![vec![0, 1], vec![1, 0]],
        canonical: vec![0, 2],
        omega: vec![1, 1],
        b1: 6,
        b_plus: 5,
        b_minus: 5,
        minimal: Some(true),
        minimal_model_kind: Some(MinimalModelKind::Neither),
        aspherical: true,
        exceptional: Some(Vec::new()),
        notes: vec![
            "asserted record: aspherical torus bundle over a genus 2 surface".into(),
            "chi = 0 * chi(genus 2 base) = 0 by multiplicativity of Euler characteristic; signature 0".into(),
            "b1 = 6, b± = 5 taken from the product bundle".into(),
        ],
    })?;
    let surface = SurfaceInModel::parse(&model, "F", "F")?;
    let mut b = BuildingBlock::from_model(BlockName::Q2, model, surface, true);
    b.expect(0, 2, (0, 0))?;
    b.finish()
}

fn block_cp2_8(degree_bound: i64) -> Result<BuildingBlock> {
    let model = ManifoldModel::rational(8)?.with_name("CP2_8");
    let surface = SurfaceInModel::parse(&model, "F", "3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8")?;
    let anti = model.canonical().neg();
    let mut b = BuildingBlock::from_model(BlockName::Cp2x8, model, surface, false);
    b.expect(1, 1, (1, 11))?;
    let f = b.surface.as_ref().expect("concrete").class.clone();
    b.checks.push(Check::new("F is Poincaré dual to c1", format!("F = {f}"), f == anti));
    let (m, _) = min_over_exceptional(b.model.as_ref().expect("concrete"), &f, degree_bound)?;
    b.checks.push(Check::new(
        "F meets every exceptional class",
        format!("min F·E = {}", m.map_or("none".into(), |v| v.to_string())),
        m.is_none_or(|v| v >= 1),
    ));
    b.finish()
}

/// `T⁴` blown up at `(p,p)` and 8 points of `T1`, the strict transform of
/// `T1` as gluing surface.
pub fn s11_first_side() -> Result<SumSide> {
    let mut labels = strings(&["T1", "T2"]);
    labels.extend((1..=9).map(|i| format!("E{i}")));
    let n = labels.len();
    let mut gram = vec![vec![0; n]; n];
    gram[0][1] = 1;
    gram[1][0] = 1;
    for (i, row) in gram.iter_mut().enumerate().skip(2) {
        row[i] = -1;
    }
    let mut canonical = vec![1; n];
    canonical[0] = 0;
    canonical[1] = 0;
    let mut omega = vec![-1; n];
    omega[0] = 12;
    omega[1] = 12;
    let exceptional = (2..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let model = general(GeneralSpec {
        name: "T4#9".into(),
        labels,
        gram,
        canonical,
        omega,
        b1: 4,
        b_plus: 3,
        b_minus: 12,
        minimal: Some(false),
        minimal_model_kind: Some(MinimalModelKind::Neither),
        aspherical: true,
        exceptional: Some(exceptional),
        notes: vec!["E1 is the blowup at (p,p); E2..E9 lie on T1".into()],
    })?;
    let surface = SurfaceInModel::parse(&model, "T1'", "T1 - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9")?;
    Ok(SumSide::new(model, surface))
}

/// `CP²` with a smooth cubic.
pub fn cubic_side() -> Result<SumSide> {
    let model = ManifoldModel::rational(0)?.with_name("CP2");
    let surface = SurfaceInModel::parse(&model, "cubic", "3H")?;
    Ok(SumSide::new(model, surface))
}

/// The two-stage chain building `S11`.
pub fn s11_chain() -> Result<Vec<ChainStage>> {
    let survivor = Survivor {
        name: "T4#9 # CP2".into(),
        labels: strings(&["T1", "T2p"]),
        gram: vec![vec![0, 1], vec![1, -1]],
        canonical: vec![1, 0],
        omega: vec![20, 10],
        surface_name: "T2'".into(),
        surface: vec![0, 1],
        b1: 2,
        b_plus: Some(3),
        notes: vec![
            "lattice restricted to T1 and T2' = T2 - E1, both disjoint from the first gluing surface".into(),
            "b1 = 2 and b+ = 3 asserted (Mayer-Vietoris), not computed".into(),
        ],
    };
    Ok(vec![
        ChainStage {
            left: ChainLeft::Given(s11_first_side()?),
            right: cubic_side()?,
        },
        ChainStage {
            left: ChainLeft::Carried {
                carry: Carry::Explicit(survivor),
                blowups: 8,
            },
            right: cubic_side()?,
        },
    ])
}

fn block_s11(degree_bound: i64) -> Result<BuildingBlock> {
    let report = verify_chain(&s11_chain()?, degree_bound)?;
    let mut checks = Vec::new();
    for st in &report.stages {
        checks.push(Check::new(
            format!("stage {} minimal", st.index),
            st.decision.verdict.label(),
            st.decision.verdict.minimal() == Some(true),
        ));
    }
    let b = BuildingBlock {
        name: BlockName::S11,
        model: None,
        surface: None,
        surface_invariants: None,
        chern: report.chern,
        asserted: false,
        checks,
        notes: vec![
            "built by two sums along tori of square -9 and 9; c1² is not determined for such sums".into(),
            "the torus used when S11 enters a further sum is not described; no gluing surface recorded".into(),
        ],
        chain: Some(report),
    };
    b.finish()
}

/// The seven blocks, each verified on construction.
pub fn building_blocks(degree_bound: i64) -> Result<Vec<BuildingBlock>> {
    Ok(vec![
        block_m_g()?,
        block_p1(degree_bound)?,
        block_p2(degree_bound)?,
        block_q1()?,
        block_q2()?,
        block_s11(degree_bound)?,
        block_cp2_8(degree_bound)?,
    ])
}

pub fn building_block(name: BlockName, degree_bound: i64) -> Result<BuildingBlock> {
    match name {
        BlockName::MG => block_m_g(),
        BlockName::P1 => block_p1(degree_bound),
        BlockName::P2 => block_p2(degree_bound),
        BlockName::Q1 => block_q1(),
        BlockName::Q2 => block_q2(),
        BlockName::S11 => block_s11(degree_bound),
        BlockName::Cp2x8 => block_cp2_8(degree_bound),
    }
}

/// `a + b ≡ 0 (mod 12)` and `0 <= a <= 2(b - r)`.
pub fn realizable(a: i64, b: i64, r: i64) -> bool {
    (a + b).rem_euclid(12) == 0 && 0 <= a && a <= 2 * (b - r)
}

/// Realizable pairs in the box, sorted.
pub fn enumerate_region(a_range: RangeInclusive<i64>, b_range: RangeInclusive<i64>, r: i64) -> Vec<(i64, i64)> {
    let rows: Vec<i64> = a_range.collect();
    rows.par_iter()
        .map(|&a| b_range.clone().filter(|&b| realizable(a, b, r)).map(|b| (a, b)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Part of the previous sum that survives into the next stage.
#[derive(Debug, Clone)]
pub struct Survivor {
    pub name: String,
    pub labels: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    pub omega: Vec<i64>,
    pub surface_name: String,
    pub surface: Vec<i64>,
    pub b1: u32,
    /// Required when `c1²` of the previous sum is unknown.
    pub b_plus: Option<u32>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Carry {
    /// A parallel copy of the previous square-zero gluing surface.
    ParallelCopy { b1: u32 },
    Explicit(Survivor),
}

#[derive(Debug, Clone)]
pub enum ChainLeft {
    Given(SumSide),
    /// The previous sum, blown up `blowups` times at points of the new
    /// gluing surface.
    Carried { carry: Carry, blowups: usize },
}

#[derive(Debug, Clone)]
pub struct ChainStage {
    pub left: ChainLeft,
    pub right: SumSide,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub index: usize,
    pub left: String,
    pub right: String,
    pub genus: u32,
    pub decision: MinimalityDecision,
    pub chern: PartialChern,
    /// `c2 > 0`: the sum is not ruled over a curve of positive genus.
    pub positive_euler: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub stages: Vec<StageReport>,
    pub chern: PartialChern,
    /// `Some(true)` when every stage is certified minimal.
    pub minimal: Option<bool>,
    pub assumptions: Vec<String>,
}

fn carried_model(
    carry: &Carry,
    blowups: usize,
    prev: &StageReport,
    prev_squares_zero: bool,
) -> Result<(SumSide, Vec<String>)> {
    let c2 = prev.chern.c2;
    let g = prev.genus;
    let (s, b1, b_plus, mut notes) = match carry {
        Carry::ParallelCopy { b1 } => {
            if !prev_squares_zero {
                return Err(Error::Inapplicable(
                    "a parallel copy of the gluing surface needs square 0".into(),
                ));
            }
            let survivor = Survivor {
                name: format!("Z{}", prev.index),
                labels: strings(&["Fp", "S"]),
                gram: vec![vec![0, 1], vec![1, 0]],
                canonical: vec![0, 2 * g as i64 - 2],
                omega: vec![1, 1],
                surface_name: "F'".into(),
                surface: vec![1, 0],
                b1: *b1,
                b_plus: None,
                notes: vec!["lattice restricted to a parallel copy F' of the gluing surface and a dual class".into()],
            };
            (survivor, *b1, None, Vec::new())
        }
        Carry::Explicit(s) => (s.clone(), s.b1, s.b_plus, Vec::new()),
    };
    notes.extend(s.notes.iter().cloned());
    // b+ + b- = c2 - 2 + 2 b1
    let total = c2 - 2 + 2 * b1 as i64;
    let b_plus = match (prev.chern.c1_sq, b_plus) {
        (Some(c1), asserted) => {
            let sigma = ChernNumbers::new(c1, c2).signature();
            if (total + sigma) % 2 != 0 || total < sigma.abs() {
                return Err(Error::InvalidModel(format!(
                    "stage {}: b1 = {b1} is inconsistent with {}",
                    prev.index, prev.chern
                )));
            }
            let derived = ((total + sigma) / 2) as u32;
            if let Some(a) = asserted {
                if a != derived {
                    return Err(Error::InvalidModel(format!(
                        "stage {}: asserted b+ = {a} but Chern numbers give {derived}",
                        prev.index
                    )));
                }
            }
            derived
        }
        (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::MissingAssertions(vec![format!(
                "stage {}: b+ of the previous sum (its c1² is unknown)",
                prev.index + 1
            )]))
        }
    };
    let b_minus = total - b_plus as i64;
    if b_minus < 0 {
        return Err(Error::InvalidModel(format!("stage {}: negative b-", prev.index)));
    }
    let minimal = prev.decision.verdict.minimal();
    // Minimal rational surfaces have c2 in {3, 4}; ruled ones over positive
    // genus have c2 <= 0. Both have b+ = 1.
    let kind = if b_plus > 1 || (prev.positive_euler && c2 != 3 && c2 != 4) {
        Some(MinimalModelKind::Neither)
    } else {
        None
    };
    let model = ManifoldModel::general(GeneralSpec {
        name: s.name.clone(),
        labels: s.labels.clone(),
        gram: s.gram.clone(),
        canonical: s.canonical.clone(),
        omega: s.omega.clone(),
        b1,
        b_plus,
        b_minus: b_minus as u32,
        minimal,
        minimal_model_kind: kind,
        aspherical: false,
        exceptional: (minimal == Some(true)).then(Vec::new),
        notes: notes.clone(),
    })?;
    let mut class = model.class(s.surface.clone())?;
    let mut model = model;
    for _ in 0..blowups {
        let (next, map) = model.blow_up_mapped()?;
        class = map.apply(&class)?;
        let e = next.lattice().unit(next.lattice().rank() - 1);
        class = class.sub(&e)?;
        model = next;
    }
    if blowups > 0 {
        model = model.with_name(format!("{} # {blowups}(-CP2)", s.name));
    }
    let name = if blowups > 0 {
        format!("{} blown up at {blowups} points", s.surface_name)
    } else {
        s.surface_name.clone()
    };
    let surface = SurfaceInModel::from_class(&model, name, class)?;
    Ok((SumSide::new(model, surface), notes))
}

/// Decides minimality stage by stage; stops at the first stage that is not
/// certified minimal.
pub fn verify_chain(stages: &[ChainStage], degree_bound: i64) -> Result<ChainReport> {
    let mut reports: Vec<StageReport> = Vec::new();
    let mut assumptions = Vec::new();
    let mut prev_zero = false;
    let mut expected_c2 = 0i64;
    for (i, stage) in stages.iter().enumerate() {
        let index = i + 1;
        let (left, left_c1, left_c2) = match (&stage.left, reports.last()) {
            (ChainLeft::Given(side), None) => {
                let c = side.model.chern_numbers();
                expected_c2 += c.c2;
                (side.clone(), Some(c.c1_sq), c.c2)
            }
            (ChainLeft::Carried { carry, blowups }, Some(prev)) => {
                let (side, notes) = carried_model(carry, *blowups, prev, prev_zero)?;
                let k = *blowups as i64;
                expected_c2 += k;
                assumptions.extend(notes.into_iter().map(|n| format!("stage {index}: {n}")));
                (side, prev.chern.c1_sq.map(|a| a - k), prev.chern.c2 + k)
            }
            (ChainLeft::Given(_), Some(_)) => {
                return Err(Error::InvalidSum(vec![format!("stage {index}: only the first stage takes a given left side")]))
            }
            (ChainLeft::Carried { .. }, None) => {
                return Err(Error::InvalidSum(vec!["stage 1 needs a given left side".into()]))
            }
        };
        let desc = SumDescriptor::new(left.clone(), stage.right.clone());
        let decision = decide_minimality(&desc, degree_bound)?;
        let g = desc.genus() as i64;
        let right = stage.right.model.chern_numbers();
        expected_c2 += right.c2 + 4 * (g - 1);
        let zero = left.surface.square() == 0;
        let c1_sq = match (left_c1, zero) {
            (Some(a), true) => Some(a + right.c1_sq + 8 * (g - 1)),
            _ => None,
        };
        let chern = PartialChern {
            c1_sq,
            c2: left_c2 + right.c2 + 4 * (g - 1),
        };
        if i == 0 && zero {
            let direct: PartialChern = sum_chern(&desc)?.into();
            if direct != chern {
                return Err(Error::Internal(format!("stage 1: folded {chern} differs from {direct}")));
            }
        }
        if chern.c2 != expected_c2 {
            return Err(Error::Internal(format!(
                "stage {index}: c2 = {} but inputs give {expected_c2}",
                chern.c2
            )));
        }
        let minimal = decision.verdict.minimal();
        reports.push(StageReport {
            index,
            left: format!("{} along {}", left.model.name(), left.surface.name),
            right: format!("{} along {}", stage.right.model.name(), stage.right.surface.name),
            genus: desc.genus(),
            decision,
            chern,
            positive_euler: chern.c2 > 0,
        });
        prev_zero = zero;
        if minimal != Some(true) {
            break;
        }
    }
    let last = reports.last().ok_or_else(|| Error::InvalidSum(vec!["empty chain".into()]))?;
    let complete = reports.len() == stages.len();
    let minimal = match last.decision.verdict.minimal() {
        Some(true) if complete => Some(true),
        Some(true) => None,
        other => other,
    };
    Ok(ChainReport {
        chern: last.chern,
        minimal,
        stages: reports,
        assumptions,
    })
}
