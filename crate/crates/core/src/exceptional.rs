//! Exceptional classes: `A² = K·A = -1` with positive area.
//!
//! On `Rational(n)` the solutions are produced as orbit representatives under
//! permutations of `E1..En` and expanded lazily; `Rational(13)` alone has
//! millions of them below degree 6.

use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{pair, HomologyClass, IntersectionLattice};
use crate::model::{ManifoldModel, ModelKind, SurfaceInModel};

/// Largest `n` for which `Rational(n)` has finitely many exceptional classes.
pub const FINITE_RATIONAL_MAX: usize = 8;

/// Every exceptional class of `Rational(n ≤ 8)` has degree at most this.
pub const FINITE_RATIONAL_DEGREE: i64 = 6;

/// Exceptional classes found in a bounded search.
#[derive(Debug, Clone)]
pub struct ExceptionalSet {
    lattice: Arc<IntersectionLattice>,
    /// Orbit representatives, in enumeration coordinates.
    reps: Vec<Vec<i64>>,
    /// Start of the coordinate block permuted freely, if any.
    permute_from: Option<usize>,
    /// Area functional applied per expanded element when the reference
    /// class is not permutation invariant.
    omega_phi: Option<Vec<i64>>,
    /// Change of basis from enumeration coordinates to the model's basis.
    to_model: Option<Vec<Vec<i64>>>,
    bound: i64,
    complete: bool,
    len: u64,
    discarded: u64,
    source: SetSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetSource {
    Enumerated,
    FiberClasses,
    Supplied,
    Empty,
}

impl ExceptionalSet {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Whether the search provably found every exceptional class.
    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Numerical solutions dropped because Cremona reduction rejects them.
    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn source(&self) -> SetSource {
        self.source
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    /// Streams coefficient vectors in the model's basis.
    pub fn for_each<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let mut mapped = vec![0i64; self.lattice.rank()];
        for rep in &self.reps {
            let mut v = rep.clone();
            let flow = self.expand(&mut v, &mut |x: &[i64]| match &self.to_model {
                None => f(x),
                Some(m) => {
                    apply_matrix(m, x, &mut mapped);
                    f(&mapped)
                }
            });
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn expand<F>(&self, v: &mut [i64], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let keep = |x: &[i64]| match &self.omega_phi {
            Some(phi) => dot(phi, x) > 0,
            None => true,
        };
        match self.permute_from {
            None => {
                if keep(v) {
                    f(v)?;
                }
            }
            Some(start) => {
                v[start..].sort_unstable();
                loop {
                    if keep(v) {
                        f(v)?;
                    }
                    if !next_permutation(&mut v[start..]) {
                        break;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    /// All classes, sorted. Materializes the set.
    pub fn classes(&self) -> Vec<HomologyClass> {
        let mut out = Vec::new();
        let _ = self.for_each(|x| {
            out.push(self.lattice.class(x.to_vec()).expect("rank matches"));
            ControlFlow::Continue(())
        });
        out.sort();
        out
    }

    pub fn contains(&self, class: &HomologyClass) -> bool {
        if class.lattice().id() != self.lattice.id() {
            return false;
        }
        let mut found = false;
        let _ = self.for_each(|x| {
            if x == class.coeffs() {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        found
    }

    /// Minimum of `pair(class, A)` over the set, with a minimizing `A`.
    pub fn min_pairing(&self, class: &HomologyClass) -> Result<Option<(i64, HomologyClass)>> {
        if class.lattice().id() != self.lattice.id() {
            return Err(Error::LatticeMismatch {
                left: class.lattice().name().into(),
                right: self.lattice.name().into(),
            });
        }
        let phi = self.lattice.functional(class.coeffs());
        let best = match (self.permute_from, &self.omega_phi, &self.to_model) {
            (Some(start), None, None) => self
                .reps
                .par_iter()
                .map(|rep| arrange_minimum(&phi, rep, start))
                .collect::<Vec<_>>()
                .into_iter()
                .fold(None, keep_smaller),
            _ => {
                let mut best: Option<(i64, Vec<i64>)> = None;
                let _ = self.for_each(|x| {
                    best = keep_smaller(best.take(), (dot(&phi, x), x.to_vec()));
                    ControlFlow::Continue(())
                });
                best
            }
        };
        Ok(best.map(|(v, x)| (v, self.lattice.class(x).expect("rank matches"))))
    }
}

fn keep_smaller(acc: Option<(i64, Vec<i64>)>, next: (i64, Vec<i64>)) -> Option<(i64, Vec<i64>)> {
    match acc {
        Some(a) if a.0 < next.0 || (a.0 == next.0 && a.1 <= next.1) => Some(a),
        _ => Some(next),
    }
}

/// Minimizes `phi · v` over permutations of `v[start..]`; among minimizers
/// returns the lexicographically smallest arrangement.
fn arrange_minimum(phi: &[i64], rep: &[i64], start: usize) -> (i64, Vec<i64>) {
    let mut values: Vec<i64> = rep[start..].to_vec();
    values.sort_unstable_by(|a, b| b.cmp(a));
    let mut order: Vec<usize> = (start..rep.len()).collect();
    order.sort_by_key(|&i| (phi[i], i));
    let mut out = rep.to_vec();
    for (&pos, &val) in order.iter().zip(&values) {
        out[pos] = val;
    }
    // Within a run of equal weights any arrangement is optimal; sort it.
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && phi[order[j]] == phi[order[i]] {
            j += 1;
        }
        let mut group: Vec<usize> = order[i..j].to_vec();
        group.sort_unstable();
        let mut vals: Vec<i64> = group.iter().map(|&p| out[p]).collect();
        vals.sort_unstable();
        for (p, v) in group.into_iter().zip(vals) {
            out[p] = v;
        }
        i = j;
    }
    (dot(phi, &out), out)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn apply_matrix(m: &[Vec<i64>], x: &[i64], out: &mut [i64]) {
    out.iter_mut().for_each(|o| *o = 0);
    for (c, image) in x.iter().zip(m) {
        for (o, v) in out.iter_mut().zip(image) {
            *o += c * v;
        }
    }
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn distinct_permutations(sorted: &[i64]) -> u64 {
    let mut total: u128 = 1;
    let mut seen = 0u128;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        for k in 1..=(j - i) as u128 {
            seen += 1;
            total = total * seen / k;
        }
        i = j;
    }
    total as u64
}

/// Sorted-descending multiplicity vectors `m` of length `n` with `Σm = s`
/// and `Σm² = q`.
fn multiplicity_orbits(n: usize, s: i64, q: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, s: i64, q: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let k = (n - cur.len()) as i64;
        if k == 0 {
            if s == 0 && q == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if q < 0 || (s as i128) * (s as i128) > (k as i128) * (q as i128) || (s - q).rem_euclid(2) != 0 {
            return;
        }
        let lim = crate::search::isqrt(q);
        let mut m = cap.min(lim);
        while m >= -lim {
            // Remaining k-1 entries are all <= m.
            if s - m > (k - 1) * m {
                break;
            }
            cur.push(m);
            go(n, s - m, q - m * m, m, cur, out);
            cur.pop();
            m -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, s, q, i64::MAX, &mut Vec::with_capacity(n), &mut out);
    out
}

fn check_bound(degree_bound: i64) -> Result<()> {
    if degree_bound < 1 {
        return Err(Error::InvalidModel(format!("degree bound must be positive, got {degree_bound}")));
    }
    Ok(())
}

/// Exceptional classes of a built-in model inside the search box.
///
/// For `Rational(n)` the box is `|H-coefficient| ≤ degree_bound`; for
/// `n ≥ 9` numerical solutions that Cremona reduction does not carry to an
/// `Ei` are dropped and counted in [`ExceptionalSet::discarded`]. On ruled
/// models of base genus `h ≥ 1` a sphere has degree zero over the base, so
/// only fiber classes are searched and the answer `{ei, f - ei}` is complete.
pub fn enumerate_exceptional(model: &ManifoldModel, degree_bound: i64) -> Result<ExceptionalSet> {
    check_bound(degree_bound)?;
    match model.kind() {
        ModelKind::Rational { n } => Ok(rational_set(model, n, degree_bound, None)),
        ModelKind::RuledTrivial { h: 0, .. } => {
            let (rational, _, back) = model.to_rational()?;
            let n = rational.blowups().expect("built-in");
            let matrix = back.matrix().to_vec();
            Ok(rational_set(&rational, n, degree_bound, Some((Arc::clone(model.lattice()), matrix))))
        }
        ModelKind::RuledTrivial { n, .. } => {
            let mut reps = Vec::with_capacity(2 * n);
            for i in 0..n {
                let mut e = vec![0; n + 2];
                e[2 + i] = 1;
                let mut fe = vec![0; n + 2];
                fe[1] = 1;
                fe[2 + i] = -1;
                reps.push(e);
                reps.push(fe);
            }
            reps.sort();
            Ok(ExceptionalSet {
                lattice: Arc::clone(model.lattice()),
                len: reps.len() as u64,
                reps,
                permute_from: None,
                omega_phi: None,
                to_model: None,
                bound: degree_bound,
                complete: true,
                discarded: 0,
                source: SetSource::FiberClasses,
            })
        }
        ModelKind::RuledTwisted { .. } | ModelKind::S2xS2 => Ok(empty_set(model, degree_bound)),
        ModelKind::General => Err(Error::Unsupported(format!(
            "{}: general models have no enumeration basis; supply their exceptional classes",
            model.name()
        ))),
    }
}

fn empty_set(model: &ManifoldModel, bound: i64) -> ExceptionalSet {
    ExceptionalSet {
        lattice: Arc::clone(model.lattice()),
        reps: Vec::new(),
        permute_from: None,
        omega_phi: None,
        to_model: None,
        bound,
        complete: true,
        len: 0,
        discarded: 0,
        source: SetSource::Empty,
    }
}

fn rational_set(
    model: &ManifoldModel,
    n: usize,
    bound: i64,
    back: Option<(Arc<IntersectionLattice>, Vec<Vec<i64>>)>,
) -> ExceptionalSet {
    let omega = model.omega().coeffs();
    let symmetric = omega[1..].windows(2).all(|w| w[0] == w[1]);
    let omega_phi = model.lattice().functional(omega);
    let filter_cremona = n > FINITE_RATIONAL_MAX;
    let per_degree: Vec<(Vec<Vec<i64>>, u64, u64)> = (-bound..=bound)
        .into_par_iter()
        .map(|d| {
            let mut reps = Vec::new();
            let (mut len, mut discarded) = (0u64, 0u64);
            for m in multiplicity_orbits(n, 3 * d - 1, d * d + 1) {
                let mut v = Vec::with_capacity(n + 1);
                v.push(d);
                v.extend(m.iter().map(|x| -x));
                if filter_cremona && !cremona_reduces(&v) {
                    discarded += distinct_permutations(&m);
                    continue;
                }
                if symmetric {
                    if dot(&omega_phi, &v) <= 0 {
                        continue;
                    }
                    len += distinct_permutations(&m);
                } else {
                    let mut w = v.clone();
                    w[1..].sort_unstable();
                    loop {
                        if dot(&omega_phi, &w) > 0 {
                            len += 1;
                        }
                        if !next_permutation(&mut w[1..]) {
                            break;
                        }
                    }
                }
                v[1..].sort_unstable();
                reps.push(v);
            }
            (reps, len, discarded)
        })
        .collect();
    let mut reps = Vec::new();
    let (mut len, mut discarded) = (0, 0);
    for (r, l, d) in per_degree {
        reps.extend(r);
        len += l;
        discarded += d;
    }
    let complete = n <= FINITE_RATIONAL_MAX && bound >= FINITE_RATIONAL_DEGREE;
    let (lattice, to_model) = match back {
        Some((lattice, m)) => (lattice, Some(m)),
        None => (Arc::clone(model.lattice()), None),
    };
    ExceptionalSet {
        lattice,
        reps,
        permute_from: if n > 0 { Some(1) } else { None },
        omega_phi: if symmetric { None } else { Some(omega_phi) },
        to_model,
        bound,
        complete,
        len,
        discarded,
        source: SetSource::Enumerated,
    }
}

/// Exceptional classes as the engine sees them, including the supplied list
/// of a general model.
pub(crate) fn exceptional_for(model: &ManifoldModel, degree_bound: i64) -> Result<ExceptionalSet> {
    if model.kind() != ModelKind::General {
        return enumerate_exceptional(model, degree_bound);
    }
    check_bound(degree_bound)?;
    let reps: Vec<Vec<i64>> = match model.supplied_exceptional() {
        Some(list) => list.iter().map(|c| c.coeffs().to_vec()).collect(),
        None if model.flags().minimal == Some(true) => Vec::new(),
        None => {
            return Err(Error::MissingAssertions(vec![format!(
                "{}: exceptional class list (or minimal = true)",
                model.name()
            )]))
        }
    };
    let mut reps = reps;
    reps.sort();
    Ok(ExceptionalSet {
        lattice: Arc::clone(model.lattice()),
        len: reps.len() as u64,
        reps,
        permute_from: None,
        omega_phi: None,
        to_model: None,
        bound: degree_bound,
        complete: true,
        discarded: 0,
        source: SetSource::Supplied,
    })
}

/// Recognizes exceptional classes of `Rational(n)` by Cremona reduction.
pub fn is_exceptional_cremona(model: &ManifoldModel, class: &HomologyClass) -> Result<bool> {
    let ModelKind::Rational { .. } = model.kind() else {
        return Err(Error::Inapplicable(format!(
            "Cremona recognition needs a Rational model, got {}",
            model.kind()
        )));
    };
    if class.lattice().id() != model.lattice().id() {
        return Err(Error::LatticeMismatch {
            left: class.lattice().name().into(),
            right: model.lattice().name().into(),
        });
    }
    Ok(cremona_reduces(class.coeffs()))
}

/// `coeffs = (d, -m1, ..., -mn)`.
pub(crate) fn cremona_reduces(coeffs: &[i64]) -> bool {
    let d0 = coeffs[0];
    let m0: Vec<i64> = coeffs[1..].iter().map(|c| -c).collect();
    let sq = d0 * d0 - m0.iter().map(|m| m * m).sum::<i64>();
    let k = -3 * d0 + m0.iter().sum::<i64>();
    if sq != -1 || k != -1 {
        return false;
    }
    let mut d = d0;
    let mut m = m0;
    while m.len() < 3 {
        m.push(0);
    }
    loop {
        if d < 0 {
            return false;
        }
        if d == 0 {
            return m.iter().filter(|&&x| x == -1).count() == 1 && m.iter().all(|&x| x == 0 || x == -1);
        }
        if m.iter().any(|&x| x < 0) {
            return false;
        }
        m.sort_unstable_by(|a, b| b.cmp(a));
        let s = m[0] + m[1] + m[2];
        if s <= d {
            return false;
        }
        let (a, b, c) = (m[0], m[1], m[2]);
        m[0] = d - b - c;
        m[1] = d - a - c;
        m[2] = d - a - b;
        d = 2 * d - s;
    }
}

/// Result of testing whether a surface meets every exceptional class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MeetsVerdict {
    YesCertified,
    YesBounded { degree_bound: i64 },
    No { witness: HomologyClass, pairing: i64 },
}

impl MeetsVerdict {
    pub fn is_no(&self) -> bool {
        matches!(self, MeetsVerdict::No { .. })
    }
}

/// Whether `F` pairs positively with every exceptional class.
pub fn meets_all_exceptional(model: &ManifoldModel, surface: &SurfaceInModel, degree_bound: i64) -> Result<MeetsVerdict> {
    if !surface.symplectic {
        return Err(Error::InvalidSurface(format!("{} is not symplectic", surface.name)));
    }
    let set = exceptional_for(model, degree_bound)?;
    meets_with(&set, surface)
}

pub(crate) fn meets_with(set: &ExceptionalSet, surface: &SurfaceInModel) -> Result<MeetsVerdict> {
    if let Some((value, witness)) = set.min_pairing(&surface.class)? {
        if value <= 0 {
            return Ok(MeetsVerdict::No { witness, pairing: value });
        }
    }
    Ok(if set.complete() {
        MeetsVerdict::YesCertified
    } else {
        MeetsVerdict::YesBounded { degree_bound: set.bound() }
    })
}

/// Sanity check used by tests and reports: every element satisfies the
/// defining equations.
pub fn verify_set(model: &ManifoldModel, set: &ExceptionalSet) -> Result<()> {
    let k = model.canonical();
    let omega = model.omega();
    let mut failure = None;
    let _ = set.for_each(|x| {
        let a = model.lattice().class(x.to_vec()).expect("rank matches");
        let ok = crate::lattice::square(&a) == -1
            && pair(k, &a).unwrap_or(0) == -1
            && pair(omega, &a).unwrap_or(0) > 0;
        if ok {
            ControlFlow::Continue(())
        } else {
            failure = Some(a);
            ControlFlow::Break(())
        }
    });
    match failure {
        None => Ok(()),
        Some(a) => Err(Error::Internal(format!("{a} is not exceptional"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{Query, Rel};

    fn rational(n: usize) -> ManifoldModel {
        ManifoldModel::rational(n).unwrap()
    }

    #[test]
    fn frozen_counts() {
        // Independent brute-force counts for n = 1..8.
        let want = [1u64, 3, 6, 10, 16, 27, 56, 240];
        for (i, &w) in want.iter().enumerate() {
            let m = rational(i + 1);
            let set = enumerate_exceptional(&m, 6).unwrap();
            assert_eq!(set.len(), w, "n = {}", i + 1);
            assert_eq!(set.classes().len() as u64, w);
            assert!(set.complete());
            verify_set(&m, &set).unwrap();
        }
    }

    #[test]
    fn rational_three_listing() {
        let m = rational(3);
        let set = enumerate_exceptional(&m, 6).unwrap();
        let names: Vec<String> = set.classes().iter().map(|c| c.to_string()).collect();
        let mut want = vec!["E1", "E2", "E3", "H - E1 - E2", "H - E1 - E3", "H - E2 - E3"];
        want.sort();
        let mut got = names.clone();
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn orbit_enumeration_matches_generic_search() {
        for n in 1..=6 {
            let m = rational(n);
            let set = enumerate_exceptional(&m, 6).unwrap();
            let mut k = m.canonical().coeffs().to_vec();
            let q = Query::new(m.lattice(), 6)
                .norm_eq(-1)
                .pairing(&k, Rel::Eq, -1)
                .pairing(m.omega().coeffs(), Rel::Gt, 0);
            let mut direct = q.collect();
            direct.sort();
            let listed: Vec<Vec<i64>> = set.classes().iter().map(|c| c.coeffs().to_vec()).collect();
            assert_eq!(listed, direct, "n = {n}");
            k.clear();
        }
    }

    #[test]
    fn cremona_examples() {
        let m2 = rational(2);
        assert!(is_exceptional_cremona(&m2, &m2.parse_class("H - E1 - E2").unwrap()).unwrap());
        let m5 = rational(5);
        assert!(is_exceptional_cremona(&m5, &m5.parse_class("2H - E1 - E2 - E3 - E4 - E5").unwrap()).unwrap());
        assert!(is_exceptional_cremona(&m5, &m5.parse_class("E1").unwrap()).unwrap());
        assert!(!is_exceptional_cremona(&m5, &m5.parse_class("H").unwrap()).unwrap());
        assert!(!is_exceptional_cremona(&m5, &m5.parse_class("-E1").unwrap()).unwrap());
        let r = ManifoldModel::s2xs2().unwrap();
        assert!(is_exceptional_cremona(&r, &r.parse_class("sigma").unwrap()).is_err());
    }

    #[test]
    fn cremona_rejects_numerical_impostors() {
        // 3H - E1..E9 + E10 solves the equations but is not exceptional.
        let m = rational(10);
        let a = m
            .parse_class("3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9 + E10")
            .unwrap();
        assert_eq!(crate::lattice::square(&a), -1);
        assert!(!is_exceptional_cremona(&m, &a).unwrap());
        let set = enumerate_exceptional(&m, 3).unwrap();
        assert!(set.discarded() > 0);
        assert!(!set.contains(&a));
        assert!(!set.complete());
    }

    #[test]
    fn ruled_sets() {
        let m = ManifoldModel::ruled_trivial(2, 2).unwrap();
        let set = enumerate_exceptional(&m, 3).unwrap();
        let names: Vec<String> = set.classes().iter().map(|c| c.to_string()).collect();
        for want in ["e1", "e2", "f - e1", "f - e2"] {
            assert!(names.contains(&want.to_string()), "{names:?}");
        }
        assert!(set.complete());
        verify_set(&m, &set).unwrap();
        assert!(enumerate_exceptional(&ManifoldModel::s2xs2().unwrap(), 3).unwrap().is_empty());
        assert!(enumerate_exceptional(&ManifoldModel::ruled_twisted(1, 0).unwrap(), 3).unwrap().is_empty());
    }

    #[test]
    fn blown_up_s2xs2_goes_through_rational_presentation() {
        let m = ManifoldModel::s2xs2().unwrap().blow_up().unwrap();
        let set = enumerate_exceptional(&m, 6).unwrap();
        assert_eq!(set.len(), 3);
        let names: Vec<String> = set.classes().iter().map(|c| c.to_string()).collect();
        assert_eq!(names, vec!["e1", "f - e1", "sigma - e1"]);
        verify_set(&m, &set).unwrap();
    }

    #[test]
    fn rejections() {
        let m = rational(2);
        assert!(enumerate_exceptional(&m, 0).is_err());
    }

    #[test]
    fn meets_examples() {
        let m = rational(9);
        let f = SurfaceInModel::parse(&m, "F", "3H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9").unwrap();
        for b in [1, 3, 6] {
            assert_eq!(
                meets_all_exceptional(&m, &f, b).unwrap(),
                MeetsVerdict::YesBounded { degree_bound: b }
            );
        }
        let m1 = rational(1);
        let conic = SurfaceInModel::parse(&m1, "C", "2H").unwrap();
        match meets_all_exceptional(&m1, &conic, 6).unwrap() {
            MeetsVerdict::No { witness, pairing } => {
                assert_eq!(witness.to_string(), "E1");
                assert_eq!(pairing, 0);
            }
            other => panic!("{other:?}"),
        }
        let t = ManifoldModel::ruled_trivial(1, 1).unwrap();
        let f = SurfaceInModel::parse(&t, "F", "2sigma + 2f - e1").unwrap();
        assert_eq!(meets_all_exceptional(&t, &f, 6).unwrap(), MeetsVerdict::YesCertified);
    }

    #[test]
    fn min_pairing_agrees_with_full_expansion() {
        let m = rational(7);
        let set = enumerate_exceptional(&m, 6).unwrap();
        let f = m.parse_class("5H - 3E1 - 2E2 - E3 - E5 - 2E7").unwrap();
        let (v, w) = set.min_pairing(&f).unwrap().unwrap();
        let brute = set.classes().into_iter().map(|a| (pair(&f, &a).unwrap(), a)).min().unwrap();
        assert_eq!((v, w), brute);
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(distinct_permutations(&[0, 0, 1]), 3);
        assert_eq!(distinct_permutations(&[1, 1, 2, 2]), 6);
        assert_eq!(distinct_permutations(&[]), 1);
    }
}
