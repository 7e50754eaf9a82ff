//! Exhaustive and seeded scans of the lattice statements the certificates
//! rely on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exceptional::enumerate_exceptional;
use crate::knef::{lemma_possquare, n1_integer_step, PossquareOutcome};
use crate::lattice::{light_cone_check, pair, square};
use crate::model::ManifoldModel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PossquareScan {
    pub n: usize,
    pub coeff_bound: i64,
    pub degree_bound: i64,
    pub scanned: u64,
    /// Classes passing all three hypotheses.
    pub accepted: u64,
    /// Accepted classes with `λ² < 0`, or where the lemma refused them.
    pub counterexamples: Vec<Vec<i64>>,
}

/// Every `λ` in `[-B, B]^(n+1)` on `Rational(n)`.
pub fn possquare_scan(n: usize, coeff_bound: i64, degree_bound: i64) -> Result<PossquareScan> {
    let model = ManifoldModel::rational(n)?;
    let set = enumerate_exceptional(&model, degree_bound)?;
    let lattice = model.lattice().clone();
    let k = model.canonical().clone();
    let h = model.basis("H")?;
    let rank = n + 1;
    let side = (2 * coeff_bound + 1) as u64;
    let tail: u64 = side.pow(n as u32);
    let firsts: Vec<i64> = (-coeff_bound..=coeff_bound).collect();
    let parts = firsts
        .par_iter()
        .map(|&a| -> Result<(u64, u64, Vec<Vec<i64>>)> {
            let mut accepted = 0;
            let mut bad = Vec::new();
            let mut x = vec![-coeff_bound; rank];
            x[0] = a;
            for _ in 0..tail {
                let lambda = lattice.class(x.clone())?;
                let sq = square(&lambda);
                if pair(&lambda, &h)? >= 0
                    && sq >= pair(&k, &lambda)?
                    && set.min_pairing(&lambda)?.is_none_or(|(v, _)| v >= 0)
                {
                    accepted += 1;
                    match lemma_possquare(&model, &lambda, &set) {
                        Ok(PossquareOutcome::Holds { lambda_sq, .. }) if lambda_sq >= 0 && lambda_sq == sq => {}
                        _ => bad.push(x.clone()),
                    }
                }
                for c in x.iter_mut().skip(1) {
                    if *c < coeff_bound {
                        *c += 1;
                        break;
                    }
                    *c = -coeff_bound;
                }
            }
            Ok((tail, accepted, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut scan = PossquareScan {
        n,
        coeff_bound,
        degree_bound,
        scanned: 0,
        accepted: 0,
        counterexamples: Vec::new(),
    };
    for (s, a, bad) in parts {
        scan.scanned += s;
        scan.accepted += a;
        scan.counterexamples.extend(bad);
    }
    Ok(scan)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerStepScan {
    pub max: i64,
    pub hypothesis_pairs: u64,
    pub counterexamples: Vec<(i64, i64)>,
}

/// All `(a, b)` in `[0, max]²` with `a² + 3a ≥ b² + b`: is `a ≥ b`?
pub fn n1_scan(max: i64) -> IntegerStepScan {
    let mut scan = IntegerStepScan {
        max,
        hypothesis_pairs: 0,
        counterexamples: Vec::new(),
    };
    for a in 0..=max {
        for b in 0..=max {
            if let Some(ok) = n1_integer_step(a, b) {
                scan.hypothesis_pairs += 1;
                if !ok {
                    scan.counterexamples.push((a, b));
                }
            }
        }
    }
    scan
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LightConeScan {
    pub seed: u64,
    pub samples: u64,
    pub max_n: usize,
    pub coeff_bound: i64,
    pub violations: Vec<(Vec<i64>, Vec<i64>)>,
}

/// A random class of nonnegative square with positive `H` coefficient.
fn forward_class(rng: &mut ChaCha8Rng, n: usize, coeff_bound: i64) -> Vec<i64> {
    let per = (coeff_bound as f64 / (n.max(1) as f64).sqrt()).floor() as i64;
    let m = rng.gen_range(0..=per.max(0));
    let mut x = vec![0; n + 1];
    let mut norm = 0i64;
    for c in x.iter_mut().skip(1) {
        *c = rng.gen_range(-m..=m);
        norm += *c * *c;
    }
    let mut lo = (norm as f64).sqrt().ceil() as i64;
    while lo * lo < norm {
        lo += 1;
    }
    while lo > 0 && (lo - 1) * (lo - 1) >= norm {
        lo -= 1;
    }
    x[0] = rng.gen_range(lo..=coeff_bound);
    x
}

/// Seeded pairs of forward classes in `Rational(n)` lattices, `1 <= n <= max_n`.
pub fn light_cone_scan(seed: u64, samples: u64, max_n: usize, coeff_bound: i64) -> Result<LightConeScan> {
    let models = (1..=max_n).map(ManifoldModel::rational).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scan = LightConeScan {
        seed,
        samples,
        max_n,
        coeff_bound,
        violations: Vec::new(),
    };
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_n);
        let model = &models[n - 1];
        let a = forward_class(&mut rng, n, coeff_bound);
        let b = forward_class(&mut rng, n, coeff_bound);
        let ca = model.class(a.clone())?;
        let cb = model.class(b.clone())?;
        let report = light_cone_check(&ca, &cb, model.omega())?;
        if report.conclusion != Some(true) {
            scan.violations.push((a, b));
        }
    }
    Ok(scan)
}
