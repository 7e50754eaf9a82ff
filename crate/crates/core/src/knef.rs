//! Rational K-nef certificates and the brute-force oracle.
//!
//! A surface `F` is rationally K-nef when `<K + F, A> ≥ 0` for every class `A`
//! carried by a simple pseudoholomorphic sphere. The certified path follows
//! the case analysis for positive-genus surfaces: b⁺ > 1, irrational ruled,
//! `S²×S²`, rational, and b⁺ = 1 with a minimal model that is neither
//! rational nor ruled. The oracle searches a coefficient box instead.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exceptional::{exceptional_for, meets_with, ExceptionalSet, MeetsVerdict, FINITE_RATIONAL_MAX};
use crate::lattice::{pair, square, HomologyClass};
use crate::model::{detect_ruled_section, ManifoldModel, MinimalModelKind, ModelKind, SurfaceInModel};
use crate::search::{Query, Rel};

pub const TAUBES: &str = "b+ > 1: Taubes nonvanishing, K is represented by a symplectic surface";
pub const LIU: &str = "b+ = 1, minimal model neither rational nor ruled: K of the minimal model lies in the closed forward cone";
pub const SUPPLIED_EXCEPTIONAL: &str = "supplied list of exceptional classes is complete";
pub const MINIMAL_FLAG: &str = "asserted minimal: no exceptional classes";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnefVerdict {
    Knef,
    NotKnef,
    RuledSectionException,
}

impl fmt::Display for KnefVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnefVerdict::Knef => "knef",
            KnefVerdict::NotKnef => "not knef",
            KnefVerdict::RuledSectionException => "ruled section exception",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnefCase {
    BPlusGreaterOne,
    IrrationalRuled,
    S2xS2Case,
    RationalSurface,
    BPlusOneGeneral,
}

impl fmt::Display for KnefCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnefCase::BPlusGreaterOne => "b+ > 1",
            KnefCase::IrrationalRuled => "irrational ruled",
            KnefCase::S2xS2Case => "S2xS2",
            KnefCase::RationalSurface => "rational surface",
            KnefCase::BPlusOneGeneral => "b+ = 1, not rational or ruled",
        })
    }
}

/// One verified inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub detail: String,
    pub passed: bool,
}

impl Check {
    pub(crate) fn new(label: impl Into<String>, detail: impl Into<String>, passed: bool) -> Self {
        Self {
            label: label.into(),
            detail: detail.into(),
            passed,
        }
    }

    /// `value >= min`.
    fn at_least(label: impl Into<String>, expr: &str, value: i64, min: i64) -> Self {
        Self::new(label, format!("{expr} = {value} >= {min}"), value >= min)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnefCertificate {
    pub model: String,
    pub surface: String,
    pub genus: u32,
    pub verdict: KnefVerdict,
    pub case: KnefCase,
    pub checks: Vec<Check>,
    pub assumptions_consumed: Vec<String>,
    pub exceptional: MeetsVerdict,
    /// A class with `<K + F, A> < 0` or an exceptional class missed by `F`.
    pub witness: Option<HomologyClass>,
    pub degree_bound: i64,
    pub notes: Vec<String>,
}

impl KnefCertificate {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn dispatch(model: &ManifoldModel) -> Result<KnefCase> {
    match model.kind() {
        ModelKind::Rational { .. } | ModelKind::RuledTrivial { h: 0, .. } => Ok(KnefCase::RationalSurface),
        ModelKind::RuledTrivial { .. } | ModelKind::RuledTwisted { .. } => Ok(KnefCase::IrrationalRuled),
        ModelKind::S2xS2 => Ok(KnefCase::S2xS2Case),
        ModelKind::General => {
            let flags = model.flags();
            if flags.b_plus > 1 {
                return Ok(KnefCase::BPlusGreaterOne);
            }
            match flags.minimal_model_kind {
                Some(MinimalModelKind::Neither) => Ok(KnefCase::BPlusOneGeneral),
                Some(kind) => Err(Error::Unsupported(format!(
                    "{}: general model with b+ = 1 and {kind:?} minimal model; use a built-in presentation",
                    model.name()
                ))),
                None => Err(Error::MissingAssertions(vec![format!("{}: minimal_model_kind", model.name())])),
            }
        }
    }
}

/// Certifies, or refutes, that `F` is rationally K-nef in `M`.
pub fn is_rationally_knef(model: &ManifoldModel, surface: &SurfaceInModel, degree_bound: i64) -> Result<KnefCertificate> {
    if surface.genus == 0 {
        return Err(Error::InvalidSurface(format!(
            "{}: genus 0 surfaces are outside the scope of the certificate",
            surface.name
        )));
    }
    if !surface.symplectic {
        return Err(Error::InvalidSurface(format!("{} is not symplectic", surface.name)));
    }
    let case = dispatch(model)?;
    let set = exceptional_for(model, degree_bound)?;
    let meets = meets_with(&set, surface)?;
    let mut cert = KnefCertificate {
        model: model.name().to_string(),
        surface: surface.name.clone(),
        genus: surface.genus,
        verdict: KnefVerdict::NotKnef,
        case,
        checks: Vec::new(),
        assumptions_consumed: Vec::new(),
        exceptional: meets.clone(),
        witness: None,
        degree_bound,
        notes: model.notes().to_vec(),
    };
    if model.kind() == ModelKind::General {
        cert.assumptions_consumed.push(match model.supplied_exceptional() {
            Some(_) => SUPPLIED_EXCEPTIONAL.into(),
            None => MINIMAL_FLAG.into(),
        });
    }
    if let MeetsVerdict::No { witness, pairing } = meets {
        cert.checks.push(Check::new(
            "F meets every exceptional class",
            format!("F·({witness}) = {pairing} <= 0"),
            false,
        ));
        cert.witness = Some(witness);
        return Ok(cert);
    }
    cert.checks.push(Check::new(
        "F meets every exceptional class",
        match &cert.exceptional {
            MeetsVerdict::YesBounded { degree_bound } => {
                format!("{} classes up to degree {degree_bound}, search not exhaustive", set.len())
            }
            _ => format!("{} classes, complete", set.len()),
        },
        true,
    ));
    match case {
        KnefCase::BPlusGreaterOne => {
            cert.assumptions_consumed.push(TAUBES.into());
            cert.checks.push(Check::new("b+ > 1", format!("b+ = {}", model.b_plus()), true));
            cert.verdict = KnefVerdict::Knef;
        }
        KnefCase::BPlusOneGeneral => {
            cert.assumptions_consumed.push(LIU.into());
            cert.checks.push(Check::new("b+ = 1", format!("b+ = {}", model.b_plus()), true));
            cert.checks.push(Check::new("minimal model neither rational nor ruled", "asserted", true));
            cert.verdict = KnefVerdict::Knef;
        }
        KnefCase::IrrationalRuled => irrational_ruled(model, surface, &set, &mut cert)?,
        KnefCase::S2xS2Case => s2xs2(model, surface, &mut cert)?,
        KnefCase::RationalSurface => rational(model, surface, &set, &mut cert)?,
    }
    if cert.verdict == KnefVerdict::Knef && !cert.all_passed() {
        return Err(Error::Internal(format!("{}: knef verdict with a failed check", surface.name)));
    }
    Ok(cert)
}

fn irrational_ruled(model: &ManifoldModel, surface: &SurfaceInModel, set: &ExceptionalSet, cert: &mut KnefCertificate) -> Result<()> {
    let fiber = model.fiber().expect("ruled model has a fiber");
    let k = model.canonical();
    let f = &surface.class;
    let c = pair(f, &fiber)?;
    let n = model.blowups().unwrap_or(0);
    let twisted = matches!(model.kind(), ModelKind::RuledTwisted { .. });
    let c_name = if twisted { "c + d = F·f" } else { "c = F·f" };
    if n > 0 {
        // The (-1)-spheres e_i and f - e_i span the cone that matters.
        for i in 0..n {
            let e = model.lattice().unit(2 + i);
            let fe = fiber.sub(&e)?;
            let a = pair(f, &e)?;
            let b = pair(f, &fe)?;
            cert.checks.push(Check::at_least(format!("F·e{}", i + 1), &format!("a{}", i + 1), a, 1));
            cert.checks.push(Check::at_least(format!("F·(f - e{})", i + 1), &format!("c - a{}", i + 1), b, 1));
        }
        cert.checks.push(Check::at_least("F·f", c_name, c, 0));
        cert.checks.push(Check::new("1 <= a_i < c", format!("c = {c}"), cert.all_passed()));
        let kf = pair(k, &fiber)? + c;
        cert.notes.push(format!("<K + F, f> = {kf} (recorded, not required)"));
        cert.verdict = if cert.all_passed() { KnefVerdict::Knef } else { KnefVerdict::NotKnef };
        debug_assert!(set.len() == 2 * n as u64);
        return Ok(());
    }
    match c {
        c if c >= 2 => {
            cert.checks.push(Check::at_least("F·f >= 2", c_name, c, 2));
            cert.verdict = KnefVerdict::Knef;
        }
        1 => {
            if !detect_ruled_section(model, surface)? {
                return Err(Error::Internal(format!(
                    "{}: F·f = 1 but no ruled section detected",
                    surface.name
                )));
            }
            cert.checks.push(Check::new(
                "F·f >= 2",
                format!("{c_name} = 1: F is homologically a section of the ruling"),
                false,
            ));
            cert.checks.push(Check::new(
                "genus matches base",
                format!("g(F) = {} = h", surface.genus),
                true,
            ));
            cert.verdict = KnefVerdict::RuledSectionException;
            cert.witness = Some(fiber.clone());
        }
        _ => {
            return Err(Error::InvalidSurface(format!(
                "{}: F·f = {c} <= 0 is incompatible with positive genus by adjunction",
                surface.name
            )))
        }
    }
    Ok(())
}

fn s2xs2(model: &ManifoldModel, surface: &SurfaceInModel, cert: &mut KnefCertificate) -> Result<()> {
    let sigma = model.basis("sigma")?;
    let fiber = model.basis("f")?;
    let c = pair(&surface.class, &fiber)?;
    let d = pair(&surface.class, &sigma)?;
    let g = surface.genus as i64;
    cert.checks.push(Check::new(
        "adjunction",
        format!("2g - 2 = {} = 2((c - 1)(d - 1) - 1)", 2 * g - 2),
        2 * g - 2 == 2 * ((c - 1) * (d - 1) - 1),
    ));
    cert.checks.push(Check::at_least("c >= 2", "c = F·f", c, 2));
    cert.checks.push(Check::at_least("d >= 2", "d = F·sigma", d, 2));
    if !cert.all_passed() {
        return Err(Error::Internal(format!(
            "{}: positive genus in S2xS2 forces c, d >= 2, got ({c}, {d})",
            surface.name
        )));
    }
    cert.verdict = KnefVerdict::Knef;
    Ok(())
}

fn rational(model: &ManifoldModel, surface: &SurfaceInModel, set: &ExceptionalSet, cert: &mut KnefCertificate) -> Result<()> {
    let (model, surface, set) = if let ModelKind::RuledTrivial { .. } = model.kind() {
        let (rat, map, _) = model.to_rational()?;
        cert.notes.push(format!("checked in the presentation {}", rat.kind()));
        let s = surface.mapped(&map, &rat)?;
        let e = exceptional_for(&rat, set.bound())?;
        (rat, s, e)
    } else {
        (model.clone(), surface.clone(), set.clone())
    };
    let k = model.canonical();
    let h = model.basis("H")?;
    let lambda = k.add(&surface.class)?;
    let a = surface.class.coeffs()[0];
    cert.checks.push(Check::at_least("a >= 3", "a = F·H", a, 3));
    cert.checks.push(Check::at_least("<lambda, H> >= 0", "a - 3", pair(&lambda, &h)?, 0));
    let min_e = set.min_pairing(&lambda)?;
    cert.checks.push(match &min_e {
        Some((v, e)) => Check::new("<lambda, E> >= 0", format!("min over E is {v} at {e}"), *v >= 0),
        None => Check::new("<lambda, E> >= 0", "no exceptional classes", true),
    });
    let lsq = square(&lambda);
    let kl = pair(k, &lambda)?;
    cert.checks.push(Check::new(
        "lambda² >= K·lambda",
        format!("{lsq} >= {kl}"),
        lsq >= kl,
    ));
    let g2 = 2 * surface.genus as i64 - 2;
    if lsq - kl != g2 {
        return Err(Error::Internal(format!(
            "lambda² - K·lambda = {} but 2g - 2 = {g2}",
            lsq - kl
        )));
    }
    if !cert.all_passed() {
        cert.verdict = KnefVerdict::NotKnef;
        return Ok(());
    }
    match lemma_possquare(&model, &lambda, &set)? {
        PossquareOutcome::Holds { lambda_sq, derivation, warning } => {
            cert.checks.push(Check::at_least("lambda² >= 0", &derivation, lambda_sq, 0));
            if let Some(w) = warning {
                cert.notes.push(w);
            }
            let lw = pair(&lambda, model.omega())?;
            cert.checks.push(Check::at_least(
                "lambda in closed forward cone",
                "<lambda, omega>",
                lw,
                0,
            ));
            cert.notes.push(
                "light cone: lambda pairs nonnegatively with every class of nonnegative square and positive area".into(),
            );
            cert.verdict = if cert.all_passed() { KnefVerdict::Knef } else { KnefVerdict::NotKnef };
        }
        PossquareOutcome::HypothesesFailed { report } => {
            cert.checks.push(Check::new("positive-square lemma hypotheses", report.join("; "), false));
            cert.verdict = KnefVerdict::NotKnef;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PossquareOutcome {
    Holds {
        lambda_sq: i64,
        derivation: String,
        warning: Option<String>,
    },
    HypothesesFailed {
        report: Vec<String>,
    },
}

/// On `Rational(n)`: if `λ² ≥ K·λ`, `<λ, H> ≥ 0` and `<λ, E> ≥ 0` for every
/// exceptional `E`, then `λ² ≥ 0`.
///
/// `n = 0` is immediate, `n = 1` is settled by integer arithmetic, and for
/// `n ≥ 2` the conclusion is asserted; a violation is reported as an internal
/// error naming whether the exceptional set was complete.
pub fn lemma_possquare(model: &ManifoldModel, lambda: &HomologyClass, set: &ExceptionalSet) -> Result<PossquareOutcome> {
    let ModelKind::Rational { n } = model.kind() else {
        return Err(Error::Inapplicable(format!(
            "positive-square lemma needs a Rational model, got {}",
            model.kind()
        )));
    };
    if set.lattice().id() != model.lattice().id() {
        return Err(Error::LatticeMismatch {
            left: set.lattice().name().into(),
            right: model.lattice().name().into(),
        });
    }
    let k = model.canonical();
    let lsq = square(lambda);
    let kl = pair(k, lambda)?;
    let lh = lambda.coeffs()[0];
    let mut report = Vec::new();
    if lsq < kl {
        report.push(format!("lambda² = {lsq} < K·lambda = {kl}"));
    }
    if lh < 0 {
        report.push(format!("<lambda, H> = {lh} < 0"));
    }
    if let Some((v, e)) = set.min_pairing(lambda)? {
        if v < 0 {
            report.push(format!("<lambda, {e}> = {v} < 0"));
        }
    }
    if !report.is_empty() {
        return Ok(PossquareOutcome::HypothesesFailed { report });
    }
    let warning = (n <= FINITE_RATIONAL_MAX && !set.complete())
        .then(|| format!("exceptional set searched only up to degree {}", set.bound()));
    let derivation = match n {
        0 => "positive definite form".to_string(),
        1 => {
            // lambda = aH - bE1 with a² + 3a >= b² + b, a >= 0, b >= 0.
            let a = lh;
            let b = -lambda.coeffs()[1];
            let kk = b - a;
            if kk > 0 {
                return Err(Error::Internal(format!(
                    "n = 1 integer argument failed: a = {a}, b = {b}, k = {kk} > 0"
                )));
            }
            format!("b = a + k with k = {kk} <= 0, so a >= b")
        }
        _ => "positive-square lemma".to_string(),
    };
    if lsq < 0 {
        let why = if set.complete() {
            "the exceptional set was complete, so this contradicts the lemma"
        } else {
            "the exceptional set was not complete; a missing class would explain it"
        };
        return Err(Error::Internal(format!(
            "lambda = {lambda} passes the hypotheses but lambda² = {lsq} < 0; {why}"
        )));
    }
    Ok(PossquareOutcome::Holds {
        lambda_sq: lsq,
        derivation,
        warning,
    })
}

/// The `n = 1` integer step: `a² + 3a ≥ b² + b` with `a, b ≥ 0` forces `a ≥ b`.
pub fn n1_integer_step(a: i64, b: i64) -> Option<bool> {
    if a * a + 3 * a >= b * b + b {
        Some(a >= b)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum OracleOutcome {
    NoViolation { coeff_bound: i64 },
    Violation { class: HomologyClass, value: i64 },
}

impl OracleOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, OracleOutcome::Violation { .. })
    }
}

/// Searches `[-B, B]^rank` for `A` with `A² ≥ 0`, `K·A < 0`, `ω·A > 0` and
/// `<K + F, A> < 0`; returns the first such class in lexicographic order.
pub fn knef_oracle(model: &ManifoldModel, surface: &SurfaceInModel, coeff_bound: i64) -> Result<OracleOutcome> {
    if coeff_bound < 1 {
        return Err(Error::InvalidModel(format!("coefficient bound must be positive, got {coeff_bound}")));
    }
    let k = model.canonical();
    let lambda = k.add(&surface.class)?;
    let query = Query::new(model.lattice(), coeff_bound)
        .norm_at_least(0)
        .pairing(k.coeffs(), Rel::Lt, 0)
        .pairing(model.omega().coeffs(), Rel::Gt, 0)
        .pairing(lambda.coeffs(), Rel::Lt, 0);
    Ok(match query.find_first(|_| true) {
        Some(x) => {
            let class = model.class(x)?;
            let value = pair(&lambda, &class)?;
            OracleOutcome::Violation { class, value }
        }
        None => OracleOutcome::NoViolation { coeff_bound },
    })
}

/// Whether a certificate and an oracle run tell the same story.
pub fn agrees(cert: &KnefCertificate, oracle: &OracleOutcome) -> bool {
    match cert.verdict {
        KnefVerdict::Knef => !oracle.is_violation(),
        KnefVerdict::RuledSectionException => match oracle {
            OracleOutcome::Violation { class, .. } => cert.witness.as_ref() == Some(class),
            OracleOutcome::NoViolation { .. } => false,
        },
        // Not knef because of a missed exceptional class: the oracle only
        // sees classes of nonnegative square, so it has nothing to add.
        KnefVerdict::NotKnef => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surf(m: &ManifoldModel, expr: &str) -> SurfaceInModel {
        SurfaceInModel::parse(m, "F", expr).unwrap()
    }

    #[test]
    fn s2xs2_example() {
        let m = ManifoldModel::s2xs2().unwrap();
        let f = surf(&m, "2sigma + 2f");
        assert_eq!(f.genus, 1);
        let cert = is_rationally_knef(&m, &f, 6).unwrap();
        assert_eq!(cert.verdict, KnefVerdict::Knef);
        assert_eq!(cert.case, KnefCase::S2xS2Case);
        assert_eq!(knef_oracle(&m, &f, 10).unwrap(), OracleOutcome::NoViolation { coeff_bound: 10 });
    }

    #[test]
    fn ruled_section_example() {
        for g in 1..4 {
            let m = ManifoldModel::ruled_trivial(g, 0).unwrap();
            let f = surf(&m, "sigma + 2f");
            assert_eq!(f.genus, g);
            let cert = is_rationally_knef(&m, &f, 6).unwrap();
            assert_eq!(cert.verdict, KnefVerdict::RuledSectionException);
            let o = knef_oracle(&m, &f, 10).unwrap();
            assert!(agrees(&cert, &o), "{o:?}");
        }
        let m = ManifoldModel::ruled_trivial(1, 0).unwrap();
        let f = surf(&m, "sigma");
        match knef_oracle(&m, &f, 10).unwrap() {
            OracleOutcome::Violation { class, value } => {
                assert_eq!(class.to_string(), "f");
                assert_eq!(value, -1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elliptic_fiber_example() {
        let m = ManifoldModel::rational(9).unwrap();
        let f = surf(&m, "3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9");
        let cert = is_rationally_knef(&m, &f, 6).unwrap();
        assert_eq!(cert.verdict, KnefVerdict::Knef);
        assert_eq!(cert.case, KnefCase::RationalSurface);
        assert!(matches!(cert.exceptional, MeetsVerdict::YesBounded { .. }));
        assert!(!knef_oracle(&m, &f, 10).unwrap().is_violation());
    }

    #[test]
    fn quartic_in_plane() {
        let m = ManifoldModel::rational(0).unwrap();
        let f = surf(&m, "4H");
        assert_eq!(f.genus, 3);
        assert_eq!(is_rationally_knef(&m, &f, 6).unwrap().verdict, KnefVerdict::Knef);
        assert!(!knef_oracle(&m, &f, 10).unwrap().is_violation());
    }

    #[test]
    fn twisted_cases() {
        let m = ManifoldModel::ruled_twisted(2, 0).unwrap();
        let f = surf(&m, "sp");
        assert_eq!(f.genus, 2);
        let cert = is_rationally_knef(&m, &f, 6).unwrap();
        assert_eq!(cert.verdict, KnefVerdict::RuledSectionException);
        assert_eq!(cert.witness.as_ref().unwrap().to_string(), "sp - sm");
        assert!(agrees(&cert, &knef_oracle(&m, &f, 10).unwrap()));

        let g = surf(&m, "3sp + sm");
        let cert = is_rationally_knef(&m, &g, 6).unwrap();
        assert_eq!(cert.verdict, KnefVerdict::Knef);
        assert!(agrees(&cert, &knef_oracle(&m, &g, 10).unwrap()));
    }

    #[test]
    fn trivial_ruled_with_blowups() {
        let m = ManifoldModel::ruled_trivial(1, 1).unwrap();
        let f = surf(&m, "2sigma + 2f - e1");
        let cert = is_rationally_knef(&m, &f, 6).unwrap();
        assert_eq!(cert.verdict, KnefVerdict::Knef);
        assert!(cert.notes.iter().any(|n| n.contains("<K + F, f>")));
        assert!(agrees(&cert, &knef_oracle(&m, &f, 10).unwrap()));
        // Misses e1.
        let g = surf(&m, "2sigma + 2f");
        let cert = is_rationally_knef(&m, &g, 6).unwrap();
        assert_eq!(cert.verdict, KnefVerdict::NotKnef);
        assert_eq!(cert.witness.unwrap().to_string(), "e1");
    }

    #[test]
    fn blown_up_s2xs2_is_a_rational_surface() {
        let m = ManifoldModel::ruled_trivial(0, 1).unwrap();
        let f = surf(&m, "3sigma + 3f - e1");
        assert!(f.genus > 0);
        let cert = is_rationally_knef(&m, &f, 6).unwrap();
        assert_eq!(cert.case, KnefCase::RationalSurface);
        assert_eq!(cert.verdict, KnefVerdict::Knef);
    }

    #[test]
    fn genus_zero_rejected() {
        let m = ManifoldModel::rational(1).unwrap();
        let f = surf(&m, "H - E1");
        assert!(is_rationally_knef(&m, &f, 6).is_err());
    }

    #[test]
    fn possquare_examples() {
        let m1 = ManifoldModel::rational(1).unwrap();
        let set = exceptional_for(&m1, 6).unwrap();
        let l = m1.parse_class("2H - E1").unwrap();
        match lemma_possquare(&m1, &l, &set).unwrap() {
            PossquareOutcome::Holds { lambda_sq, .. } => assert_eq!(lambda_sq, 3),
            other => panic!("{other:?}"),
        }
        let l = m1.parse_class("-H").unwrap();
        assert!(matches!(
            lemma_possquare(&m1, &l, &set).unwrap(),
            PossquareOutcome::HypothesesFailed { .. }
        ));
        let m0 = ManifoldModel::rational(0).unwrap();
        let set0 = exceptional_for(&m0, 6).unwrap();
        let l = m0.parse_class("5H").unwrap();
        assert_eq!(
            lemma_possquare(&m0, &l, &set0).unwrap(),
            PossquareOutcome::Holds {
                lambda_sq: 25,
                derivation: "positive definite form".into(),
                warning: None
            }
        );
        let s = ManifoldModel::s2xs2().unwrap();
        assert!(lemma_possquare(&s, &s.parse_class("sigma").unwrap(), &set0).is_err());
    }

    #[test]
    fn general_cases() {
        use crate::model::GeneralSpec;
        let spec = GeneralSpec {
            name: "K3".into(),
            labels: vec!["T1".into(), "T2".into()],
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical: vec![0, 0],
            omega: vec![1, 1],
            b1: 0,
            b_plus: 3,
            b_minus: 19,
            minimal: Some(true),
            minimal_model_kind: Some(MinimalModelKind::Neither),
            aspherical: false,
            exceptional: None,
            notes: vec![],
        };
        let m = ManifoldModel::general(spec.clone()).unwrap();
        let f = surf(&m, "T1");
        assert_eq!(f.genus, 1);
        let cert = is_rationally_knef(&m, &f, 6).unwrap();
        assert_eq!(cert.case, KnefCase::BPlusGreaterOne);
        assert!(cert.assumptions_consumed.iter().any(|a| a == TAUBES));
        let mut one = spec.clone();
        one.b_plus = 1;
        one.b_minus = 1;
        let m = ManifoldModel::general(one.clone()).unwrap();
        let cert = is_rationally_knef(&m, &surf(&m, "T1"), 6).unwrap();
        assert_eq!(cert.case, KnefCase::BPlusOneGeneral);
        one.minimal_model_kind = None;
        let m = ManifoldModel::general(one).unwrap();
        assert!(matches!(
            is_rationally_knef(&m, &surf(&m, "T1"), 6),
            Err(Error::MissingAssertions(_))
        ));
    }

    #[test]
    fn n1_integer_path_small() {
        for a in 0..=100 {
            for b in 0..=100 {
                assert_ne!(n1_integer_step(a, b), Some(false), "a = {a}, b = {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn rational_lambda_identity(d in 3i64..8, b in proptest::collection::vec(0i64..3, 3)) {
            let m = ManifoldModel::rational(3).unwrap();
            let f = m.class(vec![d, -b[0], -b[1], -b[2]]).unwrap();
            if let Ok(s) = SurfaceInModel::from_class(&m, "F", f.clone()) {
                let lambda = m.canonical().add(&f).unwrap();
                let diff = square(&lambda) - pair(m.canonical(), &lambda).unwrap();
                prop_assert_eq!(diff, 2 * s.genus as i64 - 2);
            }
        }

        #[test]
        fn certified_knef_implies_no_oracle_violation(d in 3i64..7, b in proptest::collection::vec(0i64..3, 2)) {
            let m = ManifoldModel::rational(2).unwrap();
            let f = m.class(vec![d, -b[0], -b[1]]).unwrap();
            if let Ok(s) = SurfaceInModel::from_class(&m, "F", f) {
                if s.genus > 0 {
                    let cert = is_rationally_knef(&m, &s, 6).unwrap();
                    let o = knef_oracle(&m, &s, 8).unwrap();
                    prop_assert!(agrees(&cert, &o), "{:?} {:?}", cert.verdict, o);
                }
            }
        }
    }
}
