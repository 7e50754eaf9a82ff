//! Lattice-level models of symplectic 4-manifolds.
//!
//! Built-in kinds carry canonical presentations:
//!
//! | kind                 | basis                 | canonical class            |
//! |----------------------|-----------------------|----------------------------|
//! | `Rational(n)`        | `H, E1..En`           | `-3H + ΣEi`                |
//! | `RuledTrivial(h, n)` | `sigma, f, e1..en`    | `-2σ + (2h-2)f + Σei`      |
//! | `RuledTwisted(h)`    | `sp, sm`              | `(2h-3)sp - (2h-1)sm`      |
//! | `S2xS2`              | `sigma, f`            | `-2σ - 2f`                 |
//!
//! `General` models are user supplied. Their lattice may be any unimodular
//! orthogonal summand of `H₂` that contains every class the computation
//! touches; Betti numbers and minimality data are asserted, not derived.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{integral_genus, numbered, pair, square, HomologyClass, IntersectionLattice};

/// Which presentation a model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ModelKind {
    Rational { n: usize },
    RuledTrivial { h: u32, n: usize },
    RuledTwisted { h: u32 },
    S2xS2,
    General,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Rational { n } => write!(f, "Rational({n})"),
            ModelKind::RuledTrivial { h, n } => write!(f, "RuledTrivial({h},{n})"),
            ModelKind::RuledTwisted { h } => write!(f, "RuledTwisted({h},0)"),
            ModelKind::S2xS2 => f.write_str("S2xS2"),
            ModelKind::General => f.write_str("General"),
        }
    }
}

/// Kind of the minimal model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalModelKind {
    Rational,
    Ruled,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelFlags {
    /// `None` only for general models without an assertion.
    pub minimal: Option<bool>,
    pub minimal_model_kind: Option<MinimalModelKind>,
    pub b_plus: u32,
    pub aspherical: bool,
}

/// Chern numbers `(c₁², c₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChernNumbers {
    pub c1_sq: i64,
    pub c2: i64,
}

impl ChernNumbers {
    pub fn new(c1_sq: i64, c2: i64) -> Self {
        Self { c1_sq, c2 }
    }

    /// Signature recovered from `c₁² = 2χ + 3σ`.
    pub fn signature(&self) -> i64 {
        (self.c1_sq - 2 * self.c2) / 3
    }
}

impl fmt::Display for ChernNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c1^2 = {}, c2 = {})", self.c1_sq, self.c2)
    }
}

/// `a + b ≡ 0 (mod 12)`.
pub fn noether_check(c1_sq: i64, c2: i64) -> bool {
    (c1_sq + c2).rem_euclid(12) == 0
}

/// Input for a user-supplied model.
#[derive(Debug, Clone, Default)]
pub struct GeneralSpec {
    pub name: String,
    pub labels: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    pub omega: Vec<i64>,
    pub b1: u32,
    pub b_plus: u32,
    pub b_minus: u32,
    pub minimal: Option<bool>,
    pub minimal_model_kind: Option<MinimalModelKind>,
    pub aspherical: bool,
    /// Asserted complete list of exceptional classes, when known.
    pub exceptional: Option<Vec<Vec<i64>>>,
    pub notes: Vec<String>,
}

/// A symplectic 4-manifold at the level of its intersection lattice.
#[derive(Debug, Clone)]
pub struct ManifoldModel {
    name: String,
    kind: ModelKind,
    lattice: Arc<IntersectionLattice>,
    canonical: HomologyClass,
    omega: HomologyClass,
    b1: u32,
    b_minus: u32,
    flags: ModelFlags,
    exceptional: Option<Vec<HomologyClass>>,
    notes: Vec<String>,
}

/// Linear map carrying classes of one model into another presentation.
#[derive(Debug, Clone)]
pub struct ClassMap {
    source: Arc<IntersectionLattice>,
    target: Arc<IntersectionLattice>,
    /// `images[i]` is the image of the i-th source basis vector.
    images: Vec<Vec<i64>>,
}

impl ClassMap {
    pub fn apply(&self, class: &HomologyClass) -> Result<HomologyClass> {
        if class.lattice().id() != self.source.id() {
            return Err(Error::LatticeMismatch {
                left: format!("{}#{}", class.lattice().name(), class.lattice().id()),
                right: format!("{}#{}", self.source.name(), self.source.id()),
            });
        }
        let mut out = vec![0i64; self.target.rank()];
        for (c, image) in class.coeffs().iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(image) {
                *o += c * x;
            }
        }
        self.target.class(out)
    }

    pub fn target(&self) -> &Arc<IntersectionLattice> {
        &self.target
    }

    pub fn source(&self) -> &Arc<IntersectionLattice> {
        &self.source
    }

    /// Images of the source basis vectors.
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.images
    }

    fn padding(source: &Arc<IntersectionLattice>, target: &Arc<IntersectionLattice>) -> Self {
        let images = (0..source.rank())
            .map(|i| {
                let mut v = vec![0; target.rank()];
                v[i] = 1;
                v
            })
            .collect();
        Self {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
        }
    }
}

fn labels_with(prefix: &[&str], tail: &str, n: usize) -> Vec<String> {
    prefix
        .iter()
        .map(|s| s.to_string())
        .chain(numbered(tail, n))
        .collect()
}

fn block_gram(head: &[Vec<i64>], tail: usize) -> Vec<Vec<i64>> {
    let k = head.len();
    let rank = k + tail;
    (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| match (i < k, j < k) {
                    (true, true) => head[i][j],
                    _ if i == j => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

impl ManifoldModel {
    /// `CP² # n(-CP²)`.
    pub fn rational(n: usize) -> Result<Self> {
        let lattice = IntersectionLattice::new(
            format!("CP2#{n}"),
            labels_with(&["H"], "E", n),
            block_gram(&[vec![1]], n),
        )?;
        let mut k = vec![1; n + 1];
        k[0] = -3;
        let mut omega = vec![-1; n + 1];
        omega[0] = n as i64 + 1;
        Self::built_in(
            format!("CP2#{n}"),
            ModelKind::Rational { n },
            lattice,
            k,
            omega,
            0,
            MinimalModelKind::Rational,
        )
    }

    /// `(Σ_h × S²) # n(-CP²)`. `h = 0` is only accepted with `n ≥ 1`.
    pub fn ruled_trivial(h: u32, n: usize) -> Result<Self> {
        if h == 0 && n == 0 {
            return Err(Error::InvalidModel(
                "RuledTrivial(0,0) is S2xS2; use the S2xS2 constructor".into(),
            ));
        }
        let lattice = IntersectionLattice::new(
            format!("Sigma{h}xS2#{n}"),
            labels_with(&["sigma", "f"], "e", n),
            block_gram(&[vec![0, 1], vec![1, 0]], n),
        )?;
        let mut k = vec![1; n + 2];
        k[0] = -2;
        k[1] = 2 * h as i64 - 2;
        let mut omega = vec![-1; n + 2];
        omega[0] = n as i64 + 1;
        omega[1] = n as i64 + 1;
        let minimal_kind = if h == 0 {
            MinimalModelKind::Rational
        } else {
            MinimalModelKind::Ruled
        };
        Self::built_in(
            format!("Sigma{h}xS2#{n}"),
            ModelKind::RuledTrivial { h, n },
            lattice,
            k,
            omega,
            2 * h,
            minimal_kind,
        )
    }

    /// The nontrivial sphere bundle over `Σ_h`, `h ≥ 1`, blown up `n` times.
    ///
    /// With `n > 0` the result is diffeomorphic to the trivial bundle blown up
    /// `n` times and is returned in that presentation.
    pub fn ruled_twisted(h: u32, n: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidModel(
                "the twisted sphere bundle over S2 is CP2#1; use Rational(1)".into(),
            ));
        }
        if n > 0 {
            let mut m = Self::ruled_trivial(h, n)?;
            m.notes.push(format!(
                "twisted bundle over genus {h} blown up {n} times normalized to the trivial presentation"
            ));
            return Ok(m);
        }
        let lattice = IntersectionLattice::new(
            format!("Sigma{h}~xS2"),
            vec!["sp".into(), "sm".into()],
            vec![vec![1, 0], vec![0, -1]],
        )?;
        let h = h as i64;
        Self::built_in(
            format!("Sigma{h}~xS2"),
            ModelKind::RuledTwisted { h: h as u32 },
            lattice,
            vec![2 * h - 3, -(2 * h - 1)],
            vec![2, 1],
            2 * h as u32,
            MinimalModelKind::Ruled,
        )
    }

    pub fn s2xs2() -> Result<Self> {
        let lattice = IntersectionLattice::new(
            "S2xS2",
            vec!["sigma".into(), "f".into()],
            vec![vec![0, 1], vec![1, 0]],
        )?;
        Self::built_in(
            "S2xS2".into(),
            ModelKind::S2xS2,
            lattice,
            vec![-2, -2],
            vec![1, 1],
            0,
            MinimalModelKind::Rational,
        )
    }

    fn built_in(
        name: String,
        kind: ModelKind,
        lattice: Arc<IntersectionLattice>,
        canonical: Vec<i64>,
        omega: Vec<i64>,
        b1: u32,
        minimal_model_kind: MinimalModelKind,
    ) -> Result<Self> {
        let (b_plus, b_minus) = lattice.signature();
        let minimal = match kind {
            ModelKind::Rational { n } => n == 0,
            ModelKind::RuledTrivial { n, .. } => n == 0,
            ModelKind::RuledTwisted { .. } | ModelKind::S2xS2 => true,
            ModelKind::General => unreachable!("general models use ManifoldModel::general"),
        };
        let canonical = lattice.class(canonical)?;
        let omega = lattice.class(omega)?;
        let model = Self {
            name,
            kind,
            canonical,
            omega,
            b1,
            b_minus: b_minus as u32,
            flags: ModelFlags {
                minimal: Some(minimal),
                minimal_model_kind: Some(minimal_model_kind),
                b_plus: b_plus as u32,
                aspherical: false,
            },
            exceptional: None,
            notes: Vec::new(),
            lattice,
        };
        model.check_common()?;
        Ok(model)
    }

    /// A user-supplied model.
    pub fn general(spec: GeneralSpec) -> Result<Self> {
        let lattice = IntersectionLattice::new(spec.name.clone(), spec.labels, spec.gram)?;
        let (p, q) = lattice.signature();
        if spec.b_plus == 0 {
            return Err(Error::InvalidModel(format!("{}: b+ must be positive", spec.name)));
        }
        if p as u32 > spec.b_plus || q as u32 > spec.b_minus {
            return Err(Error::InvalidModel(format!(
                "{}: lattice signature ({p},{q}) does not fit inside asserted (b+, b-) = ({}, {})",
                spec.name, spec.b_plus, spec.b_minus
            )));
        }
        if spec.aspherical && matches!(spec.minimal_model_kind, Some(MinimalModelKind::Rational | MinimalModelKind::Ruled)) {
            return Err(Error::InvalidModel(format!(
                "{}: an aspherical minimal model is neither rational nor ruled",
                spec.name
            )));
        }
        let canonical = lattice.class(spec.canonical)?;
        let omega = lattice.class(spec.omega)?;
        let exceptional = match spec.exceptional {
            Some(list) => {
                let mut out = Vec::with_capacity(list.len());
                for coeffs in list {
                    let e = lattice.class(coeffs)?;
                    if square(&e) != -1 || pair(&canonical, &e)? != -1 || pair(&omega, &e)? <= 0 {
                        return Err(Error::InvalidModel(format!(
                            "{}: supplied class {e} is not exceptional (needs E² = K·E = -1, ω·E > 0)",
                            spec.name
                        )));
                    }
                    if out.contains(&e) {
                        return Err(Error::InvalidModel(format!("{}: duplicate exceptional class {e}", spec.name)));
                    }
                    out.push(e);
                }
                if spec.minimal == Some(true) && !out.is_empty() {
                    return Err(Error::InvalidModel(format!(
                        "{}: asserted minimal but exceptional classes were supplied",
                        spec.name
                    )));
                }
                Some(out)
            }
            None => None,
        };
        let model = Self {
            name: spec.name,
            kind: ModelKind::General,
            lattice,
            canonical,
            omega,
            b1: spec.b1,
            b_minus: spec.b_minus,
            flags: ModelFlags {
                minimal: spec.minimal,
                minimal_model_kind: spec.minimal_model_kind,
                b_plus: spec.b_plus,
                aspherical: spec.aspherical,
            },
            exceptional,
            notes: spec.notes,
        };
        model.check_common()?;
        Ok(model)
    }

    fn check_common(&self) -> Result<()> {
        if !self.lattice.is_characteristic(self.canonical.coeffs()) {
            return Err(Error::InvalidModel(format!(
                "{}: canonical class {} is not characteristic",
                self.name, self.canonical
            )));
        }
        if square(&self.omega) <= 0 {
            return Err(Error::InvalidModel(format!(
                "{}: reference class {} must have positive square",
                self.name, self.omega
            )));
        }
        Ok(())
    }

    /// Replaces the reference symplectic class.
    pub fn with_omega(mut self, omega: HomologyClass) -> Result<Self> {
        if omega.lattice().id() != self.lattice.id() {
            return Err(Error::LatticeMismatch {
                left: self.lattice.name().into(),
                right: omega.lattice().name().into(),
            });
        }
        self.omega = omega;
        self.check_common()?;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    /// Poincaré dual of the canonical class.
    pub fn canonical(&self) -> &HomologyClass {
        &self.canonical
    }

    pub fn omega(&self) -> &HomologyClass {
        &self.omega
    }

    pub fn b1(&self) -> u32 {
        self.b1
    }

    pub fn b_plus(&self) -> u32 {
        self.flags.b_plus
    }

    pub fn b_minus(&self) -> u32 {
        self.b_minus
    }

    pub fn flags(&self) -> &ModelFlags {
        &self.flags
    }

    /// Supplied exceptional classes of a general model.
    pub fn supplied_exceptional(&self) -> Option<&[HomologyClass]> {
        self.exceptional.as_deref()
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Number of blow-ups in a built-in presentation.
    pub fn blowups(&self) -> Option<usize> {
        match self.kind {
            ModelKind::Rational { n } | ModelKind::RuledTrivial { n, .. } => Some(n),
            ModelKind::RuledTwisted { .. } | ModelKind::S2xS2 => Some(0),
            ModelKind::General => None,
        }
    }

    /// The fiber class of a ruling, for ruled presentations.
    pub fn fiber(&self) -> Option<HomologyClass> {
        match self.kind {
            ModelKind::RuledTrivial { .. } | ModelKind::S2xS2 => self.lattice.basis("f").ok(),
            ModelKind::RuledTwisted { .. } => {
                Some(self.lattice.class(vec![1, -1]).expect("rank 2"))
            }
            _ => None,
        }
    }

    pub fn class(&self, coeffs: Vec<i64>) -> Result<HomologyClass> {
        self.lattice.class(coeffs)
    }

    pub fn basis(&self, label: &str) -> Result<HomologyClass> {
        self.lattice.basis(label)
    }

    /// Parses a class written as `4H - 2E1 - E2` in this model's basis.
    pub fn parse_class(&self, text: &str) -> Result<HomologyClass> {
        parse_linear_combination(&self.lattice, text)
    }

    /// `(c₁², c₂)` with `c₂ = χ = 2 − 2b₁ + b₂` and `c₁² = 2χ + 3σ`.
    pub fn chern_numbers(&self) -> ChernNumbers {
        let b_plus = self.flags.b_plus as i64;
        let b_minus = self.b_minus as i64;
        let c2 = 2 - 2 * self.b1 as i64 + b_plus + b_minus;
        ChernNumbers::new(2 * c2 + 3 * (b_plus - b_minus), c2)
    }

    /// Blows up a point. Classes of `self` map into the result with
    /// [`ManifoldModel::blow_up_mapped`].
    pub fn blow_up(&self) -> Result<Self> {
        Ok(self.blow_up_mapped()?.0)
    }

    /// Blows up a point and returns the map carrying old classes to new ones.
    pub fn blow_up_mapped(&self) -> Result<(Self, ClassMap)> {
        match self.kind {
            ModelKind::Rational { n } => self.pad_blow_up(Self::rational(n + 1)?),
            ModelKind::RuledTrivial { h, n } => self.pad_blow_up(Self::ruled_trivial(h, n + 1)?),
            ModelKind::S2xS2 => self.pad_blow_up(Self::ruled_trivial(0, 1)?),
            ModelKind::RuledTwisted { h } => {
                // (sp, sm) in terms of (sigma, f, e1) of the trivial presentation.
                let target = Self::ruled_twisted(h, 1)?;
                let map = ClassMap {
                    source: Arc::clone(&self.lattice),
                    target: Arc::clone(target.lattice()),
                    images: vec![vec![1, 1, -1], vec![1, 0, -1]],
                };
                // The new exceptional class is f - e1 in that presentation.
                let e = target.lattice().class(vec![0, 1, -1])?;
                let target = self.carry_omega(target, &map, &e)?;
                Ok((target, map))
            }
            ModelKind::General => self.blow_up_general(),
        }
    }

    fn pad_blow_up(&self, fresh: Self) -> Result<(Self, ClassMap)> {
        let map = ClassMap::padding(&self.lattice, fresh.lattice());
        let e = fresh.lattice.unit(fresh.lattice.rank() - 1);
        let mut fresh = self.carry_omega(fresh, &map, &e)?;
        fresh.notes.extend(self.notes.iter().cloned());
        Ok((fresh, map))
    }

    /// Keeps a custom reference class across a blow-up as `ω − E` when that
    /// still has positive square.
    fn carry_omega(&self, fresh: Self, map: &ClassMap, e: &HomologyClass) -> Result<Self> {
        let default_before = match self.kind {
            ModelKind::Rational { n } => Self::rational(n)?.omega.coeffs().to_vec(),
            ModelKind::RuledTrivial { h, n } => Self::ruled_trivial(h, n)?.omega.coeffs().to_vec(),
            ModelKind::S2xS2 => vec![1, 1],
            ModelKind::RuledTwisted { .. } => vec![2, 1],
            ModelKind::General => return Ok(fresh),
        };
        if self.omega.coeffs() == default_before.as_slice() {
            return Ok(fresh);
        }
        let image = map.apply(&self.omega)?;
        let omega = image.sub(e)?;
        if square(&omega) > 0 {
            fresh.with_omega(omega)
        } else {
            Ok(fresh)
        }
    }

    fn blow_up_general(&self) -> Result<(Self, ClassMap)> {
        let rank = self.lattice.rank();
        let mut k = rank + 1;
        let label = loop {
            let candidate = format!("E{k}");
            if self.lattice.label_index(&candidate).is_none() {
                break candidate;
            }
            k += 1;
        };
        let mut labels = self.lattice.labels().to_vec();
        labels.push(label);
        let mut gram: Vec<Vec<i64>> = self
            .lattice
            .gram()
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.push(0);
                r
            })
            .collect();
        let mut last = vec![0; rank + 1];
        last[rank] = -1;
        gram.push(last);
        let name = format!("{}#1", self.name);
        let lattice = IntersectionLattice::new(name.clone(), labels, gram)?;
        let map = ClassMap::padding(&self.lattice, &lattice);
        let e = lattice.unit(rank);
        let canonical = map.apply(&self.canonical)?.add(&e)?;
        let mut omega = map.apply(&self.omega)?.sub(&e)?;
        if square(&omega) <= 0 {
            omega = map.apply(&self.omega)?.scale(2).sub(&e)?;
        }
        let mut exceptional = match (&self.exceptional, self.flags.minimal) {
            (Some(list), _) => Some(list.iter().map(|c| map.apply(c)).collect::<Result<Vec<_>>>()?),
            (None, Some(true)) if self.flags.minimal_model_kind == Some(MinimalModelKind::Neither) => Some(Vec::new()),
            _ => None,
        };
        if let Some(list) = exceptional.as_mut() {
            list.push(e);
        }
        let mut notes = self.notes.clone();
        notes.push(format!("blown up once from {}", self.name));
        let model = Self {
            name,
            kind: ModelKind::General,
            lattice,
            canonical,
            omega,
            b1: self.b1,
            b_minus: self.b_minus + 1,
            flags: ModelFlags {
                minimal: Some(false),
                ..self.flags.clone()
            },
            exceptional,
            notes,
        };
        model.check_common()?;
        Ok((model, map))
    }

    /// Re-expresses a blown-up `S²×S²` (`RuledTrivial(0, n)`, `n ≥ 1`) as
    /// `Rational(n + 1)` via `σ ↦ H − E1`, `f ↦ H − E2`, `e1 ↦ H − E1 − E2`,
    /// `ei ↦ E(i+1)`.
    ///
    /// Returns the new model with the forward map and its inverse.
    pub fn to_rational(&self) -> Result<(Self, ClassMap, ClassMap)> {
        let ModelKind::RuledTrivial { h: 0, n } = self.kind else {
            return Err(Error::Inapplicable(format!(
                "{} is not a blown-up S2xS2 presentation",
                self.name
            )));
        };
        let target = Self::rational(n + 1)?;
        let rank = n + 2;
        let unit = |i: usize| {
            let mut v = vec![0; rank];
            v[i] = 1;
            v
        };
        let mut images = vec![vec![0; rank]; rank];
        images[0] = unit(0);
        images[0][1] = -1;
        images[1] = unit(0);
        images[1][2] = -1;
        images[2] = unit(0);
        images[2][1] = -1;
        images[2][2] = -1;
        for (i, image) in images.iter_mut().enumerate().skip(3) {
            *image = unit(i);
        }
        let map = ClassMap {
            source: Arc::clone(&self.lattice),
            target: Arc::clone(target.lattice()),
            images,
        };
        // H = sigma + f - e1, E1 = f - e1, E2 = sigma - e1.
        let mut back = vec![vec![0; rank]; rank];
        back[0] = vec![1, 1, -1];
        back[1] = vec![0, 1, -1];
        back[2] = vec![1, 0, -1];
        for row in back.iter_mut().take(3) {
            row.resize(rank, 0);
        }
        for (i, image) in back.iter_mut().enumerate().skip(3) {
            *image = unit(i);
        }
        let inverse = ClassMap {
            source: Arc::clone(target.lattice()),
            target: Arc::clone(&self.lattice),
            images: back,
        };
        let mapped_k = map.apply(&self.canonical)?;
        if mapped_k != *target.canonical() {
            return Err(Error::Internal(format!(
                "presentation change sends K to {mapped_k}, expected {}",
                target.canonical()
            )));
        }
        let omega = map.apply(&self.omega)?;
        let mut target = target.with_omega(omega)?;
        target.notes.push(format!("re-expressed from {}", self.name));
        let inverse = ClassMap {
            source: Arc::clone(target.lattice()),
            ..inverse
        };
        Ok((target, map, inverse))
    }

    /// Surfaces of a ruled model of base genus `h` that are sections of the ruling.
    pub fn base_genus(&self) -> Option<u32> {
        match self.kind {
            ModelKind::RuledTrivial { h, .. } | ModelKind::RuledTwisted { h } => Some(h),
            ModelKind::S2xS2 => Some(0),
            _ => None,
        }
    }
}

/// An embedded surface: a class together with its genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceInModel {
    pub name: String,
    pub class: HomologyClass,
    pub genus: u32,
    pub symplectic: bool,
}

impl SurfaceInModel {
    /// Validates the stated genus against adjunction and, for symplectic
    /// surfaces, positivity against the reference class.
    pub fn new(model: &ManifoldModel, name: impl Into<String>, class: HomologyClass, genus: u32) -> Result<Self> {
        let name = name.into();
        let computed = Self::genus_of(model, &name, &class)?;
        if computed != genus {
            return Err(Error::InvalidSurface(format!(
                "{name}: adjunction gives genus {computed} for {class}, stated genus is {genus}"
            )));
        }
        Self::symplectic(model, name, class, genus)
    }

    /// Surface whose genus is read off from adjunction.
    pub fn from_class(model: &ManifoldModel, name: impl Into<String>, class: HomologyClass) -> Result<Self> {
        let name = name.into();
        let genus = Self::genus_of(model, &name, &class)?;
        Self::symplectic(model, name, class, genus)
    }

    /// Parses a class written in the model's basis.
    pub fn parse(model: &ManifoldModel, name: impl Into<String>, expr: &str) -> Result<Self> {
        let class = model.parse_class(expr)?;
        Self::from_class(model, name, class)
    }

    fn symplectic(model: &ManifoldModel, name: String, class: HomologyClass, genus: u32) -> Result<Self> {
        let area = pair(model.omega(), &class)?;
        if area <= 0 {
            return Err(Error::InvalidSurface(format!(
                "{name}: class {class} has ω·F = {area} <= 0 and cannot be symplectic"
            )));
        }
        Ok(Self {
            name,
            class,
            genus,
            symplectic: true,
        })
    }

    fn genus_of(model: &ManifoldModel, name: &str, class: &HomologyClass) -> Result<u32> {
        match integral_genus(model.canonical(), class)? {
            Some(g) if g >= 0 => Ok(g as u32),
            Some(g) => Err(Error::InvalidSurface(format!(
                "{name}: adjunction gives negative genus {g} for {class}"
            ))),
            None => Err(Error::InvalidSurface(format!(
                "{name}: adjunction value for {class} is not an integer"
            ))),
        }
    }

    pub fn square(&self) -> i64 {
        square(&self.class)
    }

    /// Moves the surface along a presentation change or blow-up.
    pub fn mapped(&self, map: &ClassMap, target: &ManifoldModel) -> Result<Self> {
        Self::new(target, self.name.clone(), map.apply(&self.class)?, self.genus)
    }
}

/// Whether `F` is homologically a section of a ruling over a surface of its
/// own genus on a minimal ruled model. A homological section of that kind
/// upgrades to an honest section of some ruling.
pub fn detect_ruled_section(model: &ManifoldModel, surface: &SurfaceInModel) -> Result<bool> {
    if surface.genus == 0 {
        return Err(Error::Inapplicable("ruled-section test needs a surface of positive genus".into()));
    }
    let minimal_ruled = matches!(
        model.kind(),
        ModelKind::RuledTrivial { n: 0, .. } | ModelKind::RuledTwisted { .. } | ModelKind::S2xS2
    );
    if !minimal_ruled {
        return Ok(false);
    }
    let (Some(h), Some(fiber)) = (model.base_genus(), model.fiber()) else {
        return Ok(false);
    };
    if h != surface.genus {
        return Ok(false);
    }
    if pair(&surface.class, &fiber)? == 1 {
        return Ok(true);
    }
    // S²×S² has two rulings; the second has fiber σ. Both have base genus 0,
    // so this branch is only reached for genus 0, which is rejected above.
    Ok(false)
}

fn parse_linear_combination(lattice: &Arc<IntersectionLattice>, text: &str) -> Result<HomologyClass> {
    let bad = |msg: String| Error::InvalidClass(format!("cannot parse {text:?}: {msg}"));
    let mut coeffs = vec![0i64; lattice.rank()];
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty expression".into()));
    }
    if compact == "0" {
        return lattice.class(coeffs);
    }
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut current = String::new();
    for (i, ch) in compact.char_indices() {
        let starts_term = (ch == '+' || ch == '-') && i > 0 && !current.is_empty();
        if starts_term {
            terms.push((sign, std::mem::take(&mut current)));
        }
        if ch == '+' || ch == '-' {
            if current.is_empty() {
                sign = if ch == '-' { -1 } else { 1 };
                continue;
            }
        }
        current.push(ch);
    }
    if current.is_empty() {
        return Err(bad("dangling sign".into()));
    }
    terms.push((sign, current));
    for (sign, term) in terms {
        let split = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
        let (num, label) = term.split_at(split);
        let mult: i64 = if num.is_empty() {
            1
        } else {
            num.parse().map_err(|_| bad(format!("bad multiplier {num}")))?
        };
        let label = label.strip_prefix('*').unwrap_or(label);
        if label.is_empty() {
            return Err(bad(format!("term {term} has no basis label")));
        }
        let idx = lattice
            .label_index(label)
            .ok_or_else(|| bad(format!("unknown basis label {label}")))?;
        coeffs[idx] += sign * mult;
    }
    lattice.class(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k_coeffs(m: &ManifoldModel) -> Vec<i64> {
        m.canonical().coeffs().to_vec()
    }

    #[test]
    fn canonical_presentations() {
        let r = ManifoldModel::rational(3).unwrap();
        assert_eq!(k_coeffs(&r), vec![-3, 1, 1, 1]);
        assert_eq!(r.lattice().signature(), (1, 3));
        assert_eq!(r.b1(), 0);

        let t = ManifoldModel::ruled_trivial(2, 2).unwrap();
        assert_eq!(k_coeffs(&t), vec![-2, 2, 1, 1]);
        assert_eq!(t.b1(), 4);

        let tw = ManifoldModel::ruled_twisted(3, 0).unwrap();
        assert_eq!(k_coeffs(&tw), vec![3, -5]);
        assert_eq!(tw.b1(), 6);

        let s = ManifoldModel::s2xs2().unwrap();
        assert_eq!(k_coeffs(&s), vec![-2, -2]);
    }

    #[test]
    fn twisted_with_blowups_normalizes() {
        let m = ManifoldModel::ruled_twisted(2, 3).unwrap();
        assert_eq!(m.kind(), ModelKind::RuledTrivial { h: 2, n: 3 });
        assert!(m.notes()[0].contains("normalized"));
    }

    #[test]
    fn blow_up_examples() {
        let r1 = ManifoldModel::rational(0).unwrap().blow_up().unwrap();
        assert_eq!(r1.kind(), ModelKind::Rational { n: 1 });
        assert_eq!(r1.canonical().to_string(), "-3H + E1");
        assert_eq!(r1.flags().minimal, Some(false));

        let t = ManifoldModel::ruled_trivial(3, 0).unwrap().blow_up().unwrap();
        assert_eq!(t.canonical().to_string(), "-2sigma + 4f + e1");
    }

    #[test]
    fn twisted_blow_up_is_an_isometry_onto_the_trivial_presentation() {
        let tw = ManifoldModel::ruled_twisted(2, 0).unwrap();
        let (up, map) = tw.blow_up_mapped().unwrap();
        assert_eq!(up.kind(), ModelKind::RuledTrivial { h: 2, n: 1 });
        let sp = tw.basis("sp").unwrap();
        let sm = tw.basis("sm").unwrap();
        let (a, b) = (map.apply(&sp).unwrap(), map.apply(&sm).unwrap());
        assert_eq!(square(&a), 1);
        assert_eq!(square(&b), -1);
        assert_eq!(pair(&a, &b).unwrap(), 0);
        let e = up.parse_class("f - e1").unwrap();
        assert_eq!(square(&e), -1);
        assert_eq!(pair(&e, &a).unwrap(), 0);
        assert_eq!(pair(&e, &b).unwrap(), 0);
        let k_image = map.apply(tw.canonical()).unwrap().add(&e).unwrap();
        assert_eq!(&k_image, up.canonical());
    }

    #[test]
    fn s2xs2_blow_up_and_rational_presentation() {
        let up = ManifoldModel::s2xs2().unwrap().blow_up().unwrap();
        assert_eq!(up.kind(), ModelKind::RuledTrivial { h: 0, n: 1 });
        let (rat, map, back) = up.to_rational().unwrap();
        for i in 0..up.lattice().rank() {
            let a = up.lattice().unit(i);
            assert_eq!(back.apply(&map.apply(&a).unwrap()).unwrap(), a);
        }
        assert_eq!(rat.kind(), ModelKind::Rational { n: 2 });
        let sigma = map.apply(&up.basis("sigma").unwrap()).unwrap();
        assert_eq!(sigma.to_string(), "H - E1");
        assert!(square(rat.omega()) > 0);
        for i in 0..up.lattice().rank() {
            for j in 0..up.lattice().rank() {
                let a = up.lattice().unit(i);
                let b = up.lattice().unit(j);
                assert_eq!(
                    pair(&a, &b).unwrap(),
                    pair(&map.apply(&a).unwrap(), &map.apply(&b).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn chern_examples() {
        assert_eq!(ManifoldModel::rational(13).unwrap().chern_numbers(), ChernNumbers::new(-4, 16));
        assert_eq!(ManifoldModel::rational(12).unwrap().chern_numbers(), ChernNumbers::new(-3, 15));
        assert_eq!(ManifoldModel::s2xs2().unwrap().chern_numbers(), ChernNumbers::new(8, 4));
        assert_eq!(
            ManifoldModel::ruled_trivial(3, 2).unwrap().chern_numbers(),
            ChernNumbers::new(8 * (1 - 3) - 2, 4 * (1 - 3) + 2)
        );
        assert_eq!(ManifoldModel::ruled_twisted(2, 0).unwrap().chern_numbers(), ChernNumbers::new(-8, -4));
    }

    #[test]
    fn noether_examples() {
        assert!(noether_check(0, 12));
        assert!(noether_check(-4, 16));
        assert!(!noether_check(1, 12));
    }

    #[test]
    fn built_in_chern_numbers_agree_with_canonical_square() {
        let models = [
            ManifoldModel::rational(0).unwrap(),
            ManifoldModel::rational(9).unwrap(),
            ManifoldModel::ruled_trivial(2, 3).unwrap(),
            ManifoldModel::ruled_twisted(4, 0).unwrap(),
            ManifoldModel::s2xs2().unwrap(),
        ];
        for m in &models {
            let c = m.chern_numbers();
            assert_eq!(c.c1_sq, square(m.canonical()), "{}", m.name());
            assert!(noether_check(c.c1_sq, c.c2), "{}", m.name());
        }
    }

    #[test]
    fn surfaces_validate_genus() {
        let m = ManifoldModel::rational(9).unwrap();
        let f = SurfaceInModel::parse(&m, "F", "3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9").unwrap();
        assert_eq!(f.genus, 1);
        assert_eq!(f.square(), 0);
        assert!(SurfaceInModel::new(&m, "F", f.class.clone(), 2).is_err());
        // Negative area.
        assert!(SurfaceInModel::parse(&m, "G", "-3H + E1").is_err());
    }

    #[test]
    fn parse_class_forms() {
        let m = ManifoldModel::rational(3).unwrap();
        assert_eq!(m.parse_class("4H-2E1 - E3").unwrap().coeffs(), &[4, -2, 0, -1]);
        assert_eq!(m.parse_class("-H + 2*E2").unwrap().coeffs(), &[-1, 0, 2, 0]);
        assert!(m.parse_class("H + X").is_err());
        assert!(m.parse_class("H +").is_err());
        let t = ManifoldModel::ruled_twisted(1, 0).unwrap();
        assert_eq!(t.parse_class("2sp - sm").unwrap().coeffs(), &[2, -1]);
    }

    #[test]
    fn ruled_section_detection() {
        let m = ManifoldModel::ruled_trivial(2, 0).unwrap();
        for d in -3..=3 {
            let f = SurfaceInModel::from_class(&m, "F", m.class(vec![1, d]).unwrap());
            if let Ok(f) = f {
                assert_eq!(f.genus, 2);
                assert!(detect_ruled_section(&m, &f).unwrap());
            }
        }
        let tw = ManifoldModel::ruled_twisted(2, 0).unwrap();
        // c + d = 1.
        let f = SurfaceInModel::from_class(&tw, "F", tw.class(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(f.genus, 2);
        assert!(detect_ruled_section(&tw, &f).unwrap());

        let r = ManifoldModel::rational(9).unwrap();
        let f = SurfaceInModel::parse(&r, "F", "3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9").unwrap();
        assert!(!detect_ruled_section(&r, &f).unwrap());
    }

    #[test]
    fn general_model_validation() {
        let spec = GeneralSpec {
            name: "T4#1".into(),
            labels: vec!["T1".into(), "T2".into(), "E1".into()],
            gram: vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]],
            canonical: vec![0, 0, 1],
            omega: vec![1, 1, -1],
            b1: 4,
            b_plus: 3,
            b_minus: 4,
            minimal: Some(false),
            minimal_model_kind: Some(MinimalModelKind::Neither),
            aspherical: true,
            exceptional: Some(vec![vec![0, 0, 1]]),
            notes: vec![],
        };
        let m = ManifoldModel::general(spec.clone()).unwrap();
        assert_eq!(m.chern_numbers(), ChernNumbers::new(-1, 1));
        let up = m.blow_up().unwrap();
        assert_eq!(up.supplied_exceptional().unwrap().len(), 2);
        assert_eq!(up.chern_numbers(), ChernNumbers::new(-2, 2));

        let mut bad = spec.clone();
        bad.canonical = vec![0, 0, 0];
        assert!(ManifoldModel::general(bad).is_err());
        let mut bad = spec.clone();
        bad.exceptional = Some(vec![vec![1, 0, 0]]);
        assert!(ManifoldModel::general(bad).is_err());
        let mut bad = spec;
        bad.b_plus = 0;
        assert!(ManifoldModel::general(bad).is_err());
    }

    proptest! {
        #[test]
        fn blow_up_shifts_chern_numbers(kind in 0u8..4, h in 1u32..4, n in 0usize..6) {
            let m = match kind {
                0 => ManifoldModel::rational(n).unwrap(),
                1 => ManifoldModel::ruled_trivial(h, n).unwrap(),
                2 => ManifoldModel::ruled_twisted(h, 0).unwrap(),
                _ => ManifoldModel::s2xs2().unwrap(),
            };
            let before = m.chern_numbers();
            let up = m.blow_up().unwrap();
            let after = up.chern_numbers();
            prop_assert_eq!(after, ChernNumbers::new(before.c1_sq - 1, before.c2 + 1));
            prop_assert_eq!(square(up.canonical()), square(m.canonical()) - 1);
            prop_assert!(noether_check(after.c1_sq, after.c2));
            prop_assert_eq!(up.b1(), m.b1());
        }

        #[test]
        fn adjunction_is_integral_on_built_ins(
            kind in 0u8..4, h in 1u32..4, n in 0usize..6,
            v in proptest::collection::vec(-30i64..=30, 8),
        ) {
            let m = match kind {
                0 => ManifoldModel::rational(n).unwrap(),
                1 => ManifoldModel::ruled_trivial(h, n).unwrap(),
                2 => ManifoldModel::ruled_twisted(h, 0).unwrap(),
                _ => ManifoldModel::s2xs2().unwrap(),
            };
            let rank = m.lattice().rank();
            let a = m.class(v[..rank].to_vec()).unwrap();
            prop_assert!(integral_genus(m.canonical(), &a).unwrap().is_some());
        }

        #[test]
        fn ruled_section_invariant_under_fiber_shift(h in 1u32..5, d in -6i64..=6, shift in -6i64..=6) {
            let m = ManifoldModel::ruled_trivial(h, 0).unwrap();
            let base = SurfaceInModel::from_class(&m, "F", m.class(vec![1, d]).unwrap());
            let moved = SurfaceInModel::from_class(&m, "F", m.class(vec![1, d + shift]).unwrap());
            if let (Ok(a), Ok(b)) = (base, moved) {
                prop_assert_eq!(detect_ruled_section(&m, &a).unwrap(), detect_ruled_section(&m, &b).unwrap());
            }
        }
    }
}
