//! Integral intersection lattices and the classes that live in them.
//!
//! All arithmetic is exact. Pairings use checked 64-bit operations and abort
//! with a diagnostic on overflow; the documented working range (coefficients
//! up to 10^3, rank up to 32) stays far below that limit.
//!
//! A class and its Poincaré dual share one coefficient vector; the pairing
//! is the only place the Gram matrix enters.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

static NEXT_LATTICE_ID: AtomicU64 = AtomicU64::new(1);

/// Maximum supported rank.
pub const MAX_RANK: usize = 32;

/// A unimodular symmetric integer pairing with a named basis.
#[derive(Debug)]
pub struct IntersectionLattice {
    id: u64,
    name: String,
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
    b_plus: usize,
    b_minus: usize,
}

impl IntersectionLattice {
    /// Builds a lattice, validating symmetry, unimodularity and labels, and
    /// computing its signature exactly.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        gram: Vec<Vec<i64>>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let rank = labels.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::InvalidLattice(format!(
                "{name}: rank {rank} outside 1..={MAX_RANK}"
            )));
        }
        if gram.len() != rank || gram.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidLattice(format!(
                "{name}: gram matrix is not {rank}x{rank}"
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidLattice(format!(
                    "{name}: label {label:?} must be non-empty without whitespace"
                )));
            }
            if labels[..i].contains(label) {
                return Err(Error::InvalidLattice(format!(
                    "{name}: duplicate basis label {label}"
                )));
            }
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!(
                        "{name}: gram is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let det = determinant(&gram);
        if det != 1 && det != -1 {
            return Err(Error::InvalidLattice(format!(
                "{name}: determinant {det} is not ±1"
            )));
        }
        let (b_plus, b_minus) = signature(&gram);
        Ok(Arc::new(Self {
            id: NEXT_LATTICE_ID.fetch_add(1, Ordering::Relaxed),
            name,
            labels,
            gram,
            b_plus,
            b_minus,
        }))
    }

    /// Like [`IntersectionLattice::new`] but also checks a declared signature.
    pub fn with_signature(
        name: impl Into<String>,
        labels: Vec<String>,
        gram: Vec<Vec<i64>>,
        declared: (usize, usize),
    ) -> Result<Arc<Self>> {
        let lattice = Self::new(name, labels, gram)?;
        if lattice.signature() != declared {
            return Err(Error::InvalidLattice(format!(
                "{}: declared signature {:?} but gram has {:?}",
                lattice.name,
                declared,
                lattice.signature()
            )));
        }
        Ok(lattice)
    }

    /// Orthogonal sum of rank-one pieces with the given diagonal.
    pub fn diagonal(name: impl Into<String>, labels: Vec<String>, diag: &[i64]) -> Result<Arc<Self>> {
        let rank = diag.len();
        let gram = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { diag[i] } else { 0 }).collect())
            .collect();
        Self::new(name, labels, gram)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// `(b⁺, b⁻)`.
    pub fn signature(&self) -> (usize, usize) {
        (self.b_plus, self.b_minus)
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Whether a class is characteristic: `c·x ≡ x·x (mod 2)` on every basis vector.
    pub fn is_characteristic(&self, coeffs: &[i64]) -> bool {
        (0..self.rank()).all(|i| {
            let mut e = vec![0; self.rank()];
            e[i] = 1;
            (self.pair_raw(coeffs, &e) - self.gram[i][i]).rem_euclid(2) == 0
        })
    }

    pub fn class(self: &Arc<Self>, coeffs: Vec<i64>) -> Result<HomologyClass> {
        if coeffs.len() != self.rank() {
            return Err(Error::InvalidClass(format!(
                "{} coefficients given for lattice {} of rank {}",
                coeffs.len(),
                self.name,
                self.rank()
            )));
        }
        Ok(HomologyClass {
            lattice: Arc::clone(self),
            coeffs,
        })
    }

    pub fn zero(self: &Arc<Self>) -> HomologyClass {
        HomologyClass {
            lattice: Arc::clone(self),
            coeffs: vec![0; self.rank()],
        }
    }

    /// The basis class with the given label.
    pub fn basis(self: &Arc<Self>, label: &str) -> Result<HomologyClass> {
        let idx = self.label_index(label).ok_or_else(|| {
            Error::InvalidClass(format!("no basis label {label} in lattice {}", self.name))
        })?;
        Ok(self.unit(idx))
    }

    pub fn unit(self: &Arc<Self>, idx: usize) -> HomologyClass {
        let mut coeffs = vec![0; self.rank()];
        coeffs[idx] = 1;
        HomologyClass {
            lattice: Arc::clone(self),
            coeffs,
        }
    }

    /// `aᵀ·G·b` on raw coefficient vectors.
    ///
    /// Panics with a diagnostic on 64-bit overflow.
    pub fn pair_raw(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut total: i64 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let mut row_sum: i64 = 0;
            for (j, &g) in row.iter().enumerate() {
                if g != 0 && b[j] != 0 {
                    row_sum = g
                        .checked_mul(b[j])
                        .and_then(|t| row_sum.checked_add(t))
                        .unwrap_or_else(|| overflow(&self.name));
                }
            }
            total = a[i]
                .checked_mul(row_sum)
                .and_then(|t| total.checked_add(t))
                .unwrap_or_else(|| overflow(&self.name));
        }
        total
    }

    /// The row vector `G·v`, i.e. the linear functional `x ↦ ⟨v, x⟩`.
    pub fn functional(&self, v: &[i64]) -> Vec<i64> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .try_fold(0i64, |acc, (&g, &x)| g.checked_mul(x).and_then(|t| acc.checked_add(t)))
                    .unwrap_or_else(|| overflow(&self.name))
            })
            .collect()
    }

    /// Renders a coefficient vector as `4H - 2E1 - E2`.
    pub fn format_coeffs(&self, coeffs: &[i64]) -> String {
        let mut out = String::new();
        for (c, label) in coeffs.iter().zip(&self.labels) {
            if *c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if out.is_empty() {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *c < 0 { " - " } else { " + " });
            }
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push_str(label);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[cold]
fn overflow(lattice: &str) -> ! {
    panic!("integer overflow while pairing classes in lattice {lattice}; coefficients exceed the supported range")
}

/// Determinant by fraction-free (Bareiss) elimination.
fn determinant(gram: &[Vec<i64>]) -> i128 {
    let n = gram.len();
    let mut m: Vec<Vec<i128>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Signature `(positive, negative)` by symmetric elimination over the rationals.
fn signature(gram: &[Vec<i64>]) -> (usize, usize) {
    let n = gram.len();
    let mut m: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0, 0);
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // Every remaining diagonal entry vanishes; replace e_i by e_i + e_j
                // for some nonzero off-diagonal entry, which makes the diagonal 2·a_ij.
                let found = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !m[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = found else {
                    break;
                };
                for k in 0..n {
                    let v = m[i][k].clone() + m[j][k].clone();
                    m[i][k] = v;
                }
                for k in 0..n {
                    let v = m[k][i].clone() + m[k][j].clone();
                    m[k][i] = v;
                }
                i
            }
        };
        let d = m[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            let factor = m[i][p].clone() / d.clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &active {
                let v = m[i][j].clone() - factor.clone() * m[p][j].clone();
                m[i][j] = v;
            }
        }
        for &i in &active {
            m[i][p] = BigRational::zero();
            m[p][i] = BigRational::zero();
        }
    }
    (pos, neg)
}

/// An integral homology class in a specific lattice.
#[derive(Clone)]
pub struct HomologyClass {
    lattice: Arc<IntersectionLattice>,
    coeffs: Vec<i64>,
}

impl HomologyClass {
    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, label: &str) -> Option<i64> {
        self.lattice.label_index(label).map(|i| self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_lattice(&self, other: &HomologyClass) -> Result<()> {
        if self.lattice.id == other.lattice.id {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                left: format!("{}#{}", self.lattice.name, self.lattice.id),
                right: format!("{}#{}", other.lattice.name, other.lattice.id),
            })
        }
    }

    pub fn add(&self, other: &HomologyClass) -> Result<HomologyClass> {
        self.same_lattice(other)?;
        Ok(self.map_with(other, |a, b| a.checked_add(b)))
    }

    pub fn sub(&self, other: &HomologyClass) -> Result<HomologyClass> {
        self.same_lattice(other)?;
        Ok(self.map_with(other, |a, b| a.checked_sub(b)))
    }

    pub fn scale(&self, k: i64) -> HomologyClass {
        HomologyClass {
            lattice: Arc::clone(&self.lattice),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.checked_mul(k).unwrap_or_else(|| overflow(&self.lattice.name)))
                .collect(),
        }
    }

    pub fn neg(&self) -> HomologyClass {
        self.scale(-1)
    }

    fn map_with(&self, other: &HomologyClass, f: impl Fn(i64, i64) -> Option<i64>) -> HomologyClass {
        HomologyClass {
            lattice: Arc::clone(&self.lattice),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b).unwrap_or_else(|| overflow(&self.lattice.name)))
                .collect(),
        }
    }

    /// Re-expresses the class in a lattice whose leading basis labels agree
    /// with this one's (as after blow-ups), padding with zeros.
    pub fn lift_to(&self, target: &Arc<IntersectionLattice>) -> Result<HomologyClass> {
        let rank = self.lattice.rank();
        if target.rank() < rank || target.labels[..rank] != self.lattice.labels[..] {
            return Err(Error::InvalidClass(format!(
                "cannot lift a class of {} into {}: basis prefixes differ",
                self.lattice.name, target.name
            )));
        }
        if target.gram[..rank]
            .iter()
            .zip(&self.lattice.gram)
            .any(|(t, s)| t[..rank] != s[..] || t[rank..].iter().any(|&x| x != 0))
        {
            return Err(Error::InvalidClass(format!(
                "cannot lift a class of {} into {}: {} is not an orthogonal summand",
                self.lattice.name, target.name, self.lattice.name
            )));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(target.rank(), 0);
        target.class(coeffs)
    }
}

impl PartialEq for HomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.id == other.lattice.id && self.coeffs == other.coeffs
    }
}

impl Eq for HomologyClass {}

impl Hash for HomologyClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.lattice.id.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for HomologyClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HomologyClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.lattice.id, &self.coeffs).cmp(&(other.lattice.id, &other.coeffs))
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lattice.format_coeffs(&self.coeffs))
    }
}

impl fmt::Debug for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in {}", self, self.lattice.name)
    }
}

impl Serialize for HomologyClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("HomologyClass", 2)?;
        s.serialize_field("expr", &self.to_string())?;
        s.serialize_field("coeffs", &self.coeffs)?;
        s.end()
    }
}

/// `aᵀ·G·b`.
pub fn pair(a: &HomologyClass, b: &HomologyClass) -> Result<i64> {
    a.same_lattice(b)?;
    Ok(a.lattice.pair_raw(&a.coeffs, &b.coeffs))
}

/// `pair(a, a)`.
pub fn square(a: &HomologyClass) -> i64 {
    a.lattice.pair_raw(&a.coeffs, &a.coeffs)
}

/// Genus predicted by the adjunction formula `2g − 2 = A² + K·A`.
///
/// Integral whenever `canonical` is characteristic.
pub fn adjunction_genus(canonical: &HomologyClass, class: &HomologyClass) -> Result<Rational64> {
    let ka = pair(canonical, class)?;
    let total = square(class)
        .checked_add(ka)
        .unwrap_or_else(|| overflow(&class.lattice.name));
    Ok(Rational64::new(total, 2) + Rational64::from_integer(1))
}

/// Integer genus, or `None` when the adjunction value is fractional.
pub fn integral_genus(canonical: &HomologyClass, class: &HomologyClass) -> Result<Option<i64>> {
    let g = adjunction_genus(canonical, class)?;
    Ok(g.is_integer().then(|| g.to_integer()))
}

/// Outcome of the light-cone test for a pair of classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LightConeReport {
    pub alpha_square: i64,
    pub beta_square: i64,
    pub alpha_omega: i64,
    pub beta_omega: i64,
    pub pairing: i64,
    /// All four hypotheses hold.
    pub hypotheses_hold: bool,
    /// `Some(pairing >= 0)` when the hypotheses hold, `None` otherwise.
    pub conclusion: Option<bool>,
}

/// Checks the light-cone statement in a lattice with `b⁺ = 1`: two classes of
/// nonnegative square on the `omega_ref` side pair nonnegatively.
pub fn light_cone_check(
    alpha: &HomologyClass,
    beta: &HomologyClass,
    omega_ref: &HomologyClass,
) -> Result<LightConeReport> {
    let pairing = pair(alpha, beta)?;
    let alpha_omega = pair(alpha, omega_ref)?;
    let beta_omega = pair(beta, omega_ref)?;
    let lattice = alpha.lattice();
    if lattice.signature().0 != 1 {
        return Err(Error::Inapplicable(format!(
            "light cone lemma needs b+ = 1, lattice {} has b+ = {}",
            lattice.name(),
            lattice.signature().0
        )));
    }
    let omega_sq = square(omega_ref);
    if omega_sq <= 0 {
        return Err(Error::Inapplicable(format!(
            "reference class {omega_ref} has square {omega_sq} <= 0"
        )));
    }
    let alpha_square = square(alpha);
    let beta_square = square(beta);
    let hypotheses_hold = alpha_square >= 0 && beta_square >= 0 && alpha_omega >= 0 && beta_omega >= 0;
    Ok(LightConeReport {
        alpha_square,
        beta_square,
        alpha_omega,
        beta_omega,
        pairing,
        hypotheses_hold,
        conclusion: hypotheses_hold.then_some(pairing >= 0),
    })
}

/// Labels `prefix1..prefixN`.
pub(crate) fn numbered(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}{i}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cp2_blown_up(n: usize) -> Arc<IntersectionLattice> {
        let labels = std::iter::once("H".to_string()).chain(numbered("E", n)).collect();
        let mut diag = vec![-1; n + 1];
        diag[0] = 1;
        IntersectionLattice::diagonal(format!("CP2#{n}"), labels, &diag).unwrap()
    }

    fn sum_of(lat: &Arc<IntersectionLattice>, coeffs: Vec<i64>) -> HomologyClass {
        lat.class(coeffs).unwrap()
    }

    #[test]
    fn basic_pairings() {
        let lat = cp2_blown_up(2);
        let h = lat.basis("H").unwrap();
        let e1 = lat.basis("E1").unwrap();
        let e2 = lat.basis("E2").unwrap();
        assert_eq!(pair(&h, &h).unwrap(), 1);
        assert_eq!(pair(&e1, &e2).unwrap(), 0);
        assert_eq!(pair(&e1, &e1).unwrap(), -1);
        let c = h.sub(&e1).unwrap().sub(&e2).unwrap();
        assert_eq!(square(&c), -1);
        assert_eq!(c.to_string(), "H - E1 - E2");
    }

    #[test]
    fn twisted_ruled_pairings() {
        let lat = IntersectionLattice::diagonal("twisted", vec!["s+".into(), "s-".into()], &[1, -1]).unwrap();
        let sp = lat.basis("s+").unwrap();
        let sm = lat.basis("s-").unwrap();
        assert_eq!(pair(&sp, &sm).unwrap(), 0);
        assert_eq!(pair(&sp, &sp).unwrap(), 1);
        assert_eq!(pair(&sm, &sm).unwrap(), -1);
    }

    #[test]
    fn quartic_and_cubic_squares() {
        let lat = cp2_blown_up(13);
        let mut f = vec![-1; 14];
        f[0] = 4;
        f[1] = -2;
        assert_eq!(square(&sum_of(&lat, f)), 0);
        let lat8 = cp2_blown_up(8);
        let mut c = vec![-1; 9];
        c[0] = 3;
        assert_eq!(square(&sum_of(&lat8, c)), 1);
    }

    #[test]
    fn adjunction_examples() {
        let lat8 = cp2_blown_up(8);
        let mut k = vec![1; 9];
        k[0] = -3;
        let k = sum_of(&lat8, k);
        assert_eq!(adjunction_genus(&k, &k.neg()).unwrap(), Rational64::from_integer(1));

        let lat13 = cp2_blown_up(13);
        let mut k = vec![1; 14];
        k[0] = -3;
        let mut f = vec![-1; 14];
        f[0] = 4;
        f[1] = -2;
        let g = adjunction_genus(&sum_of(&lat13, k), &sum_of(&lat13, f)).unwrap();
        assert_eq!(g, Rational64::from_integer(2));

        let s2s2 = IntersectionLattice::new(
            "S2xS2",
            vec!["sigma".into(), "f".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let k = sum_of(&s2s2, vec![-2, -2]);
        let f = s2s2.basis("f").unwrap();
        assert_eq!(adjunction_genus(&k, &f).unwrap(), Rational64::from_integer(0));
    }

    #[test]
    fn non_characteristic_gives_half_integer() {
        let lat = cp2_blown_up(1);
        let k = sum_of(&lat, vec![0, 0]);
        let h = lat.basis("H").unwrap();
        assert_eq!(adjunction_genus(&k, &h).unwrap(), Rational64::new(3, 2));
        assert_eq!(integral_genus(&k, &h).unwrap(), None);
    }

    #[test]
    fn lattice_mismatch_is_rejected() {
        let a = cp2_blown_up(1);
        let b = cp2_blown_up(1);
        let err = pair(&a.basis("H").unwrap(), &b.basis("H").unwrap()).unwrap_err();
        match err {
            Error::LatticeMismatch { left, right } => {
                assert!(left.starts_with("CP2#1#"));
                assert!(right.starts_with("CP2#1#"));
                assert_ne!(left, right);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_lattices() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(IntersectionLattice::new("x", labels.clone(), vec![vec![2, 0], vec![0, 1]]).is_err());
        assert!(IntersectionLattice::new("x", labels.clone(), vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(IntersectionLattice::new("x", vec!["a".into(), "a".into()], vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(IntersectionLattice::with_signature("x", labels, vec![vec![0, 1], vec![1, 0]], (2, 0)).is_err());
    }

    #[test]
    fn signature_of_hyperbolic_and_e8_like_forms() {
        let u = IntersectionLattice::new("U", vec!["u".into(), "v".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(u.signature(), (1, 1));
        // Negative E8 (Cartan matrix of E8, negated).
        let mut g = vec![vec![0i64; 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -2;
        }
        for &(i, j) in &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)] {
            g[i][j] = 1;
            g[j][i] = 1;
        }
        let labels = numbered("r", 8).collect();
        let e8 = IntersectionLattice::new("-E8", labels, g).unwrap();
        assert_eq!(e8.signature(), (0, 8));
    }

    #[test]
    fn light_cone_examples() {
        let lat0 = cp2_blown_up(0);
        let h = lat0.basis("H").unwrap();
        let r = light_cone_check(&h, &h, &h).unwrap();
        assert!(r.hypotheses_hold);
        assert_eq!(r.pairing, 1);
        assert_eq!(r.conclusion, Some(true));

        let lat1 = cp2_blown_up(1);
        let alpha = sum_of(&lat1, vec![1, -1]);
        let beta = lat1.basis("H").unwrap();
        let omega = sum_of(&lat1, vec![3, -1]);
        let r = light_cone_check(&alpha, &beta, &omega).unwrap();
        assert!(r.hypotheses_hold);
        assert_eq!(r.pairing, 1);

        let e1 = lat1.basis("E1").unwrap();
        let r = light_cone_check(&e1, &beta, &omega).unwrap();
        assert!(!r.hypotheses_hold);
        assert_eq!(r.conclusion, None);
    }

    #[test]
    fn light_cone_rejections() {
        let u2 = IntersectionLattice::diagonal("I2,0", vec!["a".into(), "b".into()], &[1, 1]).unwrap();
        let a = u2.basis("a").unwrap();
        assert!(matches!(light_cone_check(&a, &a, &a), Err(Error::Inapplicable(_))));
        let lat1 = cp2_blown_up(1);
        let e1 = lat1.basis("E1").unwrap();
        assert!(matches!(light_cone_check(&e1, &e1, &e1), Err(Error::Inapplicable(_))));
    }

    #[test]
    #[should_panic(expected = "integer overflow")]
    fn overflow_aborts() {
        let lat = cp2_blown_up(0);
        let big = lat.class(vec![i64::MAX / 2]).unwrap();
        let _ = square(&big);
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_bilinear(
            n in 0usize..10,
            a in proptest::collection::vec(-50i64..=50, 11),
            b in proptest::collection::vec(-50i64..=50, 11),
            c in proptest::collection::vec(-50i64..=50, 11),
            k in -20i64..=20,
        ) {
            let lat = cp2_blown_up(n);
            let a = lat.class(a[..=n].to_vec()).unwrap();
            let b = lat.class(b[..=n].to_vec()).unwrap();
            let c = lat.class(c[..=n].to_vec()).unwrap();
            prop_assert_eq!(pair(&a, &b).unwrap(), pair(&b, &a).unwrap());
            let lhs = pair(&a.scale(k).add(&c).unwrap(), &b).unwrap();
            prop_assert_eq!(lhs, k * pair(&a, &b).unwrap() + pair(&c, &b).unwrap());
        }

        #[test]
        fn light_cone_never_fails(
            n in 1usize..=10,
            a in proptest::collection::vec(-20i64..=20, 11),
            b in proptest::collection::vec(-20i64..=20, 11),
        ) {
            let lat = cp2_blown_up(n);
            let mut omega = vec![-1; n + 1];
            omega[0] = n as i64 + 1;
            let omega = lat.class(omega).unwrap();
            let a = lat.class(a[..=n].to_vec()).unwrap();
            let b = lat.class(b[..=n].to_vec()).unwrap();
            let r = light_cone_check(&a, &b, &omega).unwrap();
            prop_assert_ne!(r.conclusion, Some(false));
        }
    }
}
