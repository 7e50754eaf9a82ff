//! TOML descriptors for manifolds and sums.
//!
//! ```toml
//! name = "P1"
//! kind = "rational"
//! n = 13
//!
//! [[surface]]
//! name = "F"
//! class = [4, -2, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]
//! genus = 2
//! ```

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::model::{GeneralSpec, ManifoldModel, MinimalModelKind, SurfaceInModel};
use crate::sum::{SumDescriptor, SumSide};

#[derive(Debug, Clone)]
pub struct ManifoldDescriptor {
    pub model: ManifoldModel,
    pub surfaces: Vec<SurfaceInModel>,
}

impl ManifoldDescriptor {
    pub fn surface(&self, name: &str) -> Result<&SurfaceInModel> {
        self.surfaces.iter().find(|s| s.name == name).ok_or_else(|| {
            let known: Vec<&str> = self.surfaces.iter().map(|s| s.name.as_str()).collect();
            Error::InvalidSurface(format!(
                "no surface named {name:?} in {} (known: {})",
                self.model.name(),
                known.join(", ")
            ))
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifold {
    name: Option<String>,
    kind: Spanned<String>,
    n: Option<Spanned<i64>>,
    h: Option<Spanned<i64>>,
    basis: Option<Spanned<Vec<String>>>,
    omega: Option<Spanned<Vec<i64>>>,
    gram: Option<Spanned<Vec<Vec<i64>>>>,
    canonical: Option<Spanned<Vec<i64>>>,
    b1: Option<u32>,
    b_plus: Option<u32>,
    b_minus: Option<u32>,
    minimal: Option<bool>,
    minimal_model_kind: Option<Spanned<String>>,
    #[serde(default)]
    aspherical: bool,
    exceptional: Option<Spanned<Vec<Vec<i64>>>>,
    #[serde(default)]
    notes: Vec<String>,
    #[serde(default)]
    surface: Vec<Spanned<RawSurface>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    name: String,
    class: Spanned<Vec<i64>>,
    genus: Option<Spanned<u32>>,
    #[serde(default = "yes")]
    symplectic: bool,
}

fn yes() -> bool {
    true
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn err(&self, span: Range<usize>, message: impl Into<String>) -> Error {
        Error::Descriptor {
            line: Some(self.line(span)),
            message: message.into(),
        }
    }

    fn wrap(&self, span: Range<usize>, e: Error) -> Error {
        match e {
            Error::Descriptor { .. } => e,
            other => self.err(span, other.to_string()),
        }
    }
}

fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Descriptor {
        line: e.span().map(|s| Lines(text).line(s)),
        message: e.message().trim().to_string(),
    })
}

fn nonneg(lines: &Lines, field: &Option<Spanned<i64>>, name: &str, kind: &Spanned<String>) -> Result<usize> {
    match field {
        Some(v) if *v.get_ref() >= 0 => Ok(*v.get_ref() as usize),
        Some(v) => Err(lines.err(v.span(), format!("{name} must be nonnegative"))),
        None => Err(lines.err(kind.span(), format!("kind {:?} needs `{name}`", kind.get_ref()))),
    }
}

fn require<T>(lines: &Lines, v: Option<T>, name: &str, kind: &Spanned<String>) -> Result<T> {
    v.ok_or_else(|| lines.err(kind.span(), format!("kind \"general\" needs `{name}`")))
}

pub fn parse_manifold(text: &str) -> Result<ManifoldDescriptor> {
    let raw: RawManifold = from_toml(text)?;
    let lines = Lines(text);
    let kind = &raw.kind;
    let built_in_only = |field: bool, name: &str| -> Result<()> {
        if field {
            Err(lines.err(kind.span(), format!("`{name}` is only allowed for kind \"general\"")))
        } else {
            Ok(())
        }
    };
    let model = match kind.get_ref().as_str() {
        "general" => {
            let basis = require(&lines, raw.basis.clone(), "basis", kind)?;
            let gram = require(&lines, raw.gram.clone(), "gram", kind)?;
            let canonical = require(&lines, raw.canonical.clone(), "canonical", kind)?;
            let omega = require(&lines, raw.omega.clone(), "omega", kind)?;
            let mmk = match &raw.minimal_model_kind {
                None => None,
                Some(s) => Some(match s.get_ref().as_str() {
                    "rational" => MinimalModelKind::Rational,
                    "ruled" => MinimalModelKind::Ruled,
                    "neither" => MinimalModelKind::Neither,
                    other => {
                        return Err(lines.err(
                            s.span(),
                            format!("minimal_model_kind must be rational, ruled or neither, not {other:?}"),
                        ))
                    }
                }),
            };
            let spec = GeneralSpec {
                name: raw.name.clone().unwrap_or_else(|| "X".into()),
                labels: basis.get_ref().clone(),
                gram: gram.get_ref().clone(),
                canonical: canonical.get_ref().clone(),
                omega: omega.get_ref().clone(),
                b1: require(&lines, raw.b1, "b1", kind)?,
                b_plus: require(&lines, raw.b_plus, "b_plus", kind)?,
                b_minus: require(&lines, raw.b_minus, "b_minus", kind)?,
                minimal: raw.minimal,
                minimal_model_kind: mmk,
                aspherical: raw.aspherical,
                exceptional: raw.exceptional.as_ref().map(|e| e.get_ref().clone()),
                notes: raw.notes.clone(),
            };
            let span = match &raw.exceptional {
                Some(e) => e.span(),
                None => gram.span(),
            };
            ManifoldModel::general(spec).map_err(|e| lines.wrap(span, e))?
        }
        other => {
            built_in_only(raw.gram.is_some(), "gram")?;
            built_in_only(raw.canonical.is_some(), "canonical")?;
            built_in_only(raw.exceptional.is_some(), "exceptional")?;
            built_in_only(raw.minimal.is_some(), "minimal")?;
            built_in_only(raw.minimal_model_kind.is_some(), "minimal_model_kind")?;
            built_in_only(raw.b1.is_some() || raw.b_plus.is_some() || raw.b_minus.is_some(), "b1/b_plus/b_minus")?;
            let m = match other {
                "rational" => ManifoldModel::rational(nonneg(&lines, &raw.n, "n", kind)?),
                "ruled-trivial" => ManifoldModel::ruled_trivial(
                    nonneg(&lines, &raw.h, "h", kind)? as u32,
                    nonneg(&lines, &raw.n, "n", kind)?,
                ),
                "ruled-twisted" => ManifoldModel::ruled_twisted(
                    nonneg(&lines, &raw.h, "h", kind)? as u32,
                    raw.n.as_ref().map_or(Ok(0), |_| nonneg(&lines, &raw.n, "n", kind))?,
                ),
                "s2xs2" => ManifoldModel::s2xs2(),
                _ => {
                    return Err(lines.err(
                        kind.span(),
                        format!(
                            "unknown kind {other:?}; expected rational, ruled-trivial, ruled-twisted, s2xs2 or general"
                        ),
                    ))
                }
            }
            .map_err(|e| lines.wrap(kind.span(), e))?;
            if let Some(basis) = &raw.basis {
                if basis.get_ref().as_slice() != m.lattice().labels() {
                    return Err(lines.err(
                        basis.span(),
                        format!("basis must be [{}] for this kind", m.lattice().labels().join(", ")),
                    ));
                }
            }
            let m = match &raw.name {
                Some(n) => m.with_name(n.clone()),
                None => m,
            };
            match &raw.omega {
                Some(w) => {
                    let c = m.lattice().class(w.get_ref().clone()).map_err(|e| lines.wrap(w.span(), e))?;
                    m.with_omega(c).map_err(|e| lines.wrap(w.span(), e))?
                }
                None => m,
            }
        }
    };
    let mut surfaces: Vec<SurfaceInModel> = Vec::new();
    for s in &raw.surface {
        let span = s.span();
        let s = s.get_ref();
        if surfaces.iter().any(|t| t.name == s.name) {
            return Err(lines.err(span, format!("duplicate surface name {:?}", s.name)));
        }
        let class = model
            .lattice()
            .class(s.class.get_ref().clone())
            .map_err(|e| lines.wrap(s.class.span(), e))?;
        let mut surface = match &s.genus {
            Some(g) => SurfaceInModel::new(&model, s.name.clone(), class, *g.get_ref()).map_err(|e| lines.wrap(g.span(), e)),
            None => SurfaceInModel::from_class(&model, s.name.clone(), class).map_err(|e| lines.wrap(s.class.span(), e)),
        }?;
        surface.symplectic = s.symplectic;
        surfaces.push(surface);
    }
    Ok(ManifoldDescriptor { model, surfaces })
}

pub fn load_manifold(path: &Path) -> Result<ManifoldDescriptor> {
    let text = read(path)?;
    parse_manifold(&text).map_err(|e| in_file(path, e))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Descriptor {
        line: None,
        message: format!("{}: {e}", path.display()),
    })
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Descriptor { line, message } => Error::Descriptor {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSum {
    side1: Spanned<RawSide>,
    side2: Spanned<RawSide>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSide {
    manifold: String,
    surface: Spanned<String>,
}

/// Parses a sum descriptor; `load` resolves each `manifold` entry.
pub fn parse_sum<F>(text: &str, mut load: F) -> Result<SumDescriptor>
where
    F: FnMut(&str) -> Result<ManifoldDescriptor>,
{
    let raw: RawSum = from_toml(text)?;
    let lines = Lines(text);
    let mut sides = Vec::with_capacity(2);
    for side in [&raw.side1, &raw.side2] {
        let span = side.span();
        let side = side.get_ref();
        let m = load(&side.manifold).map_err(|e| match e {
            Error::Descriptor { line: None, message } => lines.err(span.clone(), message),
            other => other,
        })?;
        let surface = m.surface(side.surface.get_ref()).map_err(|e| lines.wrap(side.surface.span(), e))?;
        sides.push(SumSide::new(m.model.clone(), surface.clone()));
    }
    let side2 = sides.pop().expect("two sides");
    let side1 = sides.pop().expect("two sides");
    Ok(SumDescriptor::new(side1, side2))
}

/// Loads a sum descriptor, resolving manifold paths relative to it.
pub fn load_sum(path: &Path) -> Result<SumDescriptor> {
    let text = read(path)?;
    let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_sum(&text, |m| load_manifold(&dir.join(m))).map_err(|e| in_file(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1: &str = r#"
name = "P1"
kind = "rational"
n = 13

[[surface]]
name = "F"
class = [4, -2, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]
genus = 2
"#;

    #[test]
    fn parses_built_in() {
        let d = parse_manifold(P1).unwrap();
        assert_eq!(d.model.name(), "P1");
        let f = d.surface("F").unwrap();
        assert_eq!((f.square(), f.genus), (0, 2));
        assert_eq!(d.model.chern_numbers().c1_sq, -4);
    }

    #[test]
    fn line_numbers() {
        let bad = P1.replace("\"rational\"", "\"rationnal\"");
        match parse_manifold(&bad) {
            Err(Error::Descriptor { line: Some(3), message }) => assert!(message.contains("unknown kind")),
            other => panic!("{other:?}"),
        }
        let bad = P1.replace("genus = 2", "genus = 3");
        assert!(matches!(parse_manifold(&bad), Err(Error::Descriptor { line: Some(9), .. })));
        let bad = P1.replace("n = 13", "n = 13\nbogus = 1");
        assert!(matches!(parse_manifold(&bad), Err(Error::Descriptor { line: Some(_), .. })));
        let bad = P1.replace("class = [4, -2,", "class = [4,");
        assert!(matches!(parse_manifold(&bad), Err(Error::Descriptor { line: Some(8), .. })));
        let bad = P1.replace("n = 13", "n = 13\nbasis = [\"H\"]");
        assert!(matches!(parse_manifold(&bad), Err(Error::Descriptor { line: Some(5), .. })));
    }

    #[test]
    fn parses_general_and_sum() {
        let q = r#"
name = "Q"
kind = "general"
basis = ["T1", "T2", "E1"]
gram = [[0, 1, 0], [1, 0, 0], [0, 0, -1]]
canonical = [0, 0, 1]
omega = [3, 3, -1]
b1 = 4
b_plus = 3
b_minus = 4
minimal_model_kind = "neither"
exceptional = [[0, 0, 1]]

[[surface]]
name = "F"
class = [1, 1, -1]
"#;
        let d = parse_manifold(q).unwrap();
        assert_eq!(d.surface("F").unwrap().genus, 2);
        let sum = r#"
[side1]
manifold = "q"
surface = "F"

[side2]
manifold = "q"
surface = "G"
"#;
        let err = parse_sum(sum, |_| parse_manifold(q)).unwrap_err();
        assert!(matches!(err, Error::Descriptor { line: Some(8), .. }), "{err:?}");
        let ok = sum.replace("\"G\"", "\"F\"");
        let s = parse_sum(&ok, |_| parse_manifold(q)).unwrap();
        assert_eq!(s.genus(), 2);
    }
}
