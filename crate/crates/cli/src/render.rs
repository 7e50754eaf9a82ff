use std::fmt::Write;

use serde::Serialize;

use symsum::descriptor::ManifoldDescriptor;
use symsum::exceptional::MeetsVerdict;
use symsum::geography::{BuildingBlock, ChainReport};
use symsum::knef::{Check, KnefCertificate, OracleOutcome};
use symsum::lattice::HomologyClass;
use symsum::model::{ChernNumbers, ModelFlags};
use symsum::stress::PossquareScan;
use symsum::sum::{MinimalityDecision, MinimalityVerdict, Splitting};
use symsum::{pair, square};

#[derive(Serialize)]
pub struct SurfaceLine {
    pub name: String,
    pub class: HomologyClass,
    pub square: i64,
    pub k_pairing: i64,
    pub genus: u32,
    pub symplectic: bool,
}

#[derive(Serialize)]
pub struct InvariantsReport {
    pub name: String,
    pub kind: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub signature: (usize, usize),
    pub canonical: HomologyClass,
    pub omega: HomologyClass,
    pub b1: u32,
    pub b_plus: u32,
    pub b_minus: u32,
    pub chern: ChernNumbers,
    pub flags: ModelFlags,
    pub notes: Vec<String>,
    pub surfaces: Vec<SurfaceLine>,
}

impl InvariantsReport {
    pub fn new(d: &ManifoldDescriptor) -> symsum::Result<Self> {
        let m = &d.model;
        let surfaces = d
            .surfaces
            .iter()
            .map(|s| {
                Ok(SurfaceLine {
                    name: s.name.clone(),
                    class: s.class.clone(),
                    square: square(&s.class),
                    k_pairing: pair(m.canonical(), &s.class)?,
                    genus: s.genus,
                    symplectic: s.symplectic,
                })
            })
            .collect::<symsum::Result<Vec<_>>>()?;
        Ok(Self {
            name: m.name().to_string(),
            kind: m.kind().to_string(),
            basis: m.lattice().labels().to_vec(),
            gram: m.lattice().gram().to_vec(),
            signature: m.lattice().signature(),
            canonical: m.canonical().clone(),
            omega: m.omega().clone(),
            b1: m.b1(),
            b_plus: m.b_plus(),
            b_minus: m.b_minus(),
            chern: m.chern_numbers(),
            flags: m.flags().clone(),
            notes: m.notes().to_vec(),
            surfaces,
        })
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "manifold   {} [{}]", self.name, self.kind);
        let _ = writeln!(s, "basis      {}", self.basis.join(" "));
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            let _ = writeln!(s, "  {}", cells.join(""));
        }
        let _ = writeln!(s, "signature  ({}, {})", self.signature.0, self.signature.1);
        let _ = writeln!(s, "K          {}", self.canonical);
        let _ = writeln!(s, "omega      {}", self.omega);
        let _ = writeln!(s, "b1 = {}, b+ = {}, b- = {}", self.b1, self.b_plus, self.b_minus);
        let _ = writeln!(s, "c1^2 = {}, c2 = {}", self.chern.c1_sq, self.chern.c2);
        let f = &self.flags;
        let _ = writeln!(
            s,
            "minimal = {}, minimal model = {}, aspherical = {}",
            f.minimal.map_or("?".into(), |b| b.to_string()),
            f.minimal_model_kind.map_or("?".into(), |k| format!("{k:?}").to_lowercase()),
            f.aspherical
        );
        for n in &self.notes {
            let _ = writeln!(s, "note       {n}");
        }
        for f in &self.surfaces {
            let _ = writeln!(
                s,
                "surface {}: {}  square {}, K·F {}, genus {}{}",
                f.name,
                f.class,
                f.square,
                f.k_pairing,
                f.genus,
                if f.symplectic { "" } else { " (not symplectic)" }
            );
        }
        s
    }
}

fn checks_text(s: &mut String, checks: &[Check], indent: &str) {
    for c in checks {
        let _ = writeln!(s, "{indent}[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.label, c.detail);
    }
}

fn meets_text(m: &MeetsVerdict) -> String {
    match m {
        MeetsVerdict::YesCertified => "meets every exceptional class (complete set)".into(),
        MeetsVerdict::YesBounded { degree_bound } => {
            format!("meets every exceptional class up to degree {degree_bound}")
        }
        MeetsVerdict::No { witness, pairing } => format!("misses {witness} (F·E = {pairing})"),
    }
}

fn certificate_text(s: &mut String, c: &KnefCertificate, indent: &str) {
    let _ = writeln!(s, "{indent}{} in {} (genus {}): {}", c.surface, c.model, c.genus, c.verdict);
    let _ = writeln!(s, "{indent}case: {}", c.case);
    let _ = writeln!(s, "{indent}exceptional: {}", meets_text(&c.exceptional));
    checks_text(s, &c.checks, &format!("{indent}  "));
    for a in &c.assumptions_consumed {
        let _ = writeln!(s, "{indent}assumes: {a}");
    }
    if let Some(w) = &c.witness {
        let _ = writeln!(s, "{indent}witness: {w}");
    }
    for n in &c.notes {
        let _ = writeln!(s, "{indent}note: {n}");
    }
}

#[derive(Serialize)]
pub struct KnefReport {
    pub certificate: KnefCertificate,
    pub oracle: Option<OracleOutcome>,
    pub agreement: Option<bool>,
}

impl KnefReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        certificate_text(&mut s, &self.certificate, "");
        let _ = writeln!(s, "degree bound: {}", self.certificate.degree_bound);
        match &self.oracle {
            Some(OracleOutcome::NoViolation { coeff_bound }) => {
                let _ = writeln!(s, "oracle: no violation with coefficients in [-{coeff_bound}, {coeff_bound}]");
            }
            Some(OracleOutcome::Violation { class, value }) => {
                let _ = writeln!(s, "oracle: violation {class} with <K + F, A> = {value}");
            }
            None => {}
        }
        if let Some(a) = self.agreement {
            let _ = writeln!(s, "agreement: {}", if a { "yes" } else { "NO" });
        }
        s
    }
}

#[derive(Serialize)]
pub struct SumReport {
    pub side1: String,
    pub side2: String,
    pub decision: MinimalityDecision,
    pub splittings: Option<Vec<Splitting>>,
    pub coeff_bound: i64,
}

impl SumReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let d = &self.decision;
        let _ = writeln!(s, "X1: {}", self.side1);
        let _ = writeln!(s, "X2: {}", self.side2);
        let _ = writeln!(s, "genus {}", d.genus);
        let _ = writeln!(s, "verdict: {}", d.verdict);
        match &d.verdict {
            MinimalityVerdict::NotMinimalCaseI { witnesses } => {
                for w in witnesses {
                    let _ = writeln!(s, "  side {}: F·({}) = {}", w.side, w.class, w.pairing);
                }
            }
            MinimalityVerdict::ConditionalCaseII { ruled_sides, resolution } => {
                let sides: Vec<String> = ruled_sides.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "  ruled with F a section on side {}", sides.join(", "));
                let _ = writeln!(
                    s,
                    "  resolution: {}",
                    match resolution {
                        Some(true) => "minimal",
                        Some(false) => "not minimal",
                        None => "unresolved",
                    }
                );
            }
            MinimalityVerdict::MinimalCaseIII => {}
        }
        match d.chern {
            Some(c) => {
                let _ = writeln!(s, "chern: c1^2 = {}, c2 = {}", c.c1_sq, c.c2);
            }
            None => {
                let _ = writeln!(s, "chern: not determined");
            }
        }
        for (i, m) in d.exceptional.iter().enumerate() {
            let _ = writeln!(s, "side {}: {}", i + 1, meets_text(m));
        }
        for c in &d.certificates {
            let _ = writeln!(s, "certificate:");
            certificate_text(&mut s, c, "  ");
        }
        for n in &d.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "degree bound: {}", d.degree_bound);
        if let Some(sp) = &self.splittings {
            let _ = writeln!(s, "splittings (coefficients in [-{0}, {0}]): {1}", self.coeff_bound, sp.len());
            for x in sp {
                let _ = writeln!(s, "  A1 = {}, A2 = {}, d = {}", x.a1, x.a2, x.d);
            }
        }
        s
    }
}

pub fn blocks_text(blocks: &[BuildingBlock]) -> String {
    let mut s = String::new();
    for b in blocks {
        let _ = write!(s, "{} {}", b.name, b.chern);
        if let Some((sq, g)) = b.surface_invariants {
            let _ = write!(s, "  surface: square {sq}, genus {g}");
        }
        if b.asserted {
            let _ = write!(s, "  [asserted]");
        }
        s.push('\n');
        checks_text(&mut s, &b.checks, "  ");
        for n in &b.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    s
}

pub fn chain_text(r: &ChainReport) -> String {
    let mut s = String::new();
    for st in &r.stages {
        let _ = writeln!(s, "stage {}: {} # {} (genus {})", st.index, st.left, st.right, st.genus);
        let _ = writeln!(s, "  verdict: {}", st.decision.verdict);
        let _ = writeln!(s, "  chern: {}, positive Euler characteristic: {}", st.chern, st.positive_euler);
    }
    let _ = writeln!(
        s,
        "chain: {}, final {}",
        match r.minimal {
            Some(true) => "minimal",
            Some(false) => "not minimal",
            None => "undecided",
        },
        r.chern
    );
    for a in &r.assumptions {
        let _ = writeln!(s, "assumes: {a}");
    }
    s
}

#[derive(Serialize)]
pub struct RegionReport {
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub r: i64,
    pub count: usize,
    pub points: Vec<(i64, i64)>,
}

impl RegionReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# a in [{}, {}], b in [{}, {}], r = {}: {} pairs",
            self.a.0, self.a.1, self.b.0, self.b.1, self.r, self.count
        );
        for (a, b) in &self.points {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }
}

pub fn possquare_text(scans: &[PossquareScan]) -> String {
    let mut s = String::new();
    for x in scans {
        let _ = writeln!(
            s,
            "Rational({}): {} classes in [-{}, {}], {} satisfy the hypotheses, {} counterexamples (degree bound {})",
            x.n,
            x.scanned,
            x.coeff_bound,
            x.coeff_bound,
            x.accepted,
            x.counterexamples.len(),
            x.degree_bound
        );
        for c in &x.counterexamples {
            let _ = writeln!(s, "  {c:?}");
        }
    }
    s
}
