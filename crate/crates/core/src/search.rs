//! Bounded lattice-point search with exact Cauchy-Schwarz pruning.
//!
//! Coordinates split into a head (anything not an isolated `-1` diagonal
//! entry) enumerated over the whole box, and a tail of mutually orthogonal
//! `-1` vectors explored depth-first inside the norm ball left over by the
//! head. Traversal is lexicographic in head-then-tail order, which is plain
//! lexicographic order for every built-in basis.

use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::lattice::IntersectionLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rel {
    Eq,
    Lt,
    Gt,
    Ge,
}

impl Rel {
    fn holds(self, value: i64, rhs: i64) -> bool {
        match self {
            Rel::Eq => value == rhs,
            Rel::Lt => value < rhs,
            Rel::Gt => value > rhs,
            Rel::Ge => value >= rhs,
        }
    }

    /// Whether `p + t` can satisfy the relation for some `|t| <= sqrt(span)`.
    fn reachable(self, p: i64, rhs: i64, span: i128) -> bool {
        let gap = (rhs - p) as i128;
        match self {
            Rel::Eq => gap * gap <= span,
            // p - s < rhs
            Rel::Lt => gap > 0 || gap * gap < span,
            // p + s > rhs
            Rel::Gt => gap < 0 || gap * gap < span,
            Rel::Ge => gap <= 0 || gap * gap <= span,
        }
    }
}

/// `phi · x  rel  rhs`, with `phi` already a pairing functional.
#[derive(Debug, Clone)]
pub(crate) struct Linear {
    pub phi: Vec<i64>,
    pub rel: Rel,
    pub rhs: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct Query<'a> {
    lattice: &'a IntersectionLattice,
    bound: i64,
    norm_min: Option<i64>,
    norm_max: Option<i64>,
    linear: Vec<Linear>,
    head: Vec<usize>,
    tail: Vec<usize>,
}

impl<'a> Query<'a> {
    pub fn new(lattice: &'a IntersectionLattice, bound: i64) -> Self {
        let rank = lattice.rank();
        let gram = lattice.gram();
        let (mut head, mut tail) = (Vec::new(), Vec::new());
        for i in 0..rank {
            let isolated = gram[i][i] == -1 && (0..rank).all(|j| j == i || gram[i][j] == 0);
            if isolated {
                tail.push(i);
            } else {
                head.push(i);
            }
        }
        Self {
            lattice,
            bound,
            norm_min: None,
            norm_max: None,
            linear: Vec::new(),
            head,
            tail,
        }
    }

    pub fn norm_at_least(mut self, v: i64) -> Self {
        self.norm_min = Some(self.norm_min.map_or(v, |m| m.max(v)));
        self
    }

    pub fn norm_at_most(mut self, v: i64) -> Self {
        self.norm_max = Some(self.norm_max.map_or(v, |m| m.min(v)));
        self
    }

    pub fn norm_eq(self, v: i64) -> Self {
        self.norm_at_least(v).norm_at_most(v)
    }

    /// Adds `pair(class, x) rel rhs`.
    pub fn pairing(mut self, class: &[i64], rel: Rel, rhs: i64) -> Self {
        let phi = self.lattice.functional(class);
        self.linear.push(Linear { phi, rel, rhs });
        self
    }

    fn first_values(&self) -> Vec<i64> {
        (-self.bound..=self.bound).collect()
    }

    /// Visits every solution whose first coordinate (in traversal order) is
    /// `first`, in lexicographic order.
    fn visit_slice<F>(&self, first: Option<i64>, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let rank = self.lattice.rank();
        let mut x = vec![0i64; rank];
        let mut walker = Walker::new(self);
        walker.head(&mut x, 0, first, f)
    }

    /// Runs `f` over the solutions, in parallel over the leading coordinate,
    /// and returns per-slice results in traversal order.
    fn par_slices<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Option<i64>, &Query<'a>) -> T + Sync + Send,
    {
        if self.head.is_empty() && self.tail.is_empty() {
            return vec![f(None, self)];
        }
        self.first_values().into_par_iter().map(|v| f(Some(v), self)).collect()
    }

    pub fn collect(&self) -> Vec<Vec<i64>> {
        self.par_slices(|first, q| {
            let mut out = Vec::new();
            let _ = q.visit_slice(first, &mut |x| {
                out.push(x.to_vec());
                ControlFlow::Continue(())
            });
            out
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// First solution in traversal order satisfying `pred`.
    pub fn find_first<P>(&self, pred: P) -> Option<Vec<i64>>
    where
        P: Fn(&[i64]) -> bool + Sync,
    {
        self.par_slices(|first, q| {
            let mut hit = None;
            let _ = q.visit_slice(first, &mut |x| {
                if pred(x) {
                    hit = Some(x.to_vec());
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            hit
        })
        .into_iter()
        .flatten()
        .next()
    }

    #[cfg(test)]
    pub fn count(&self) -> u64 {
        self.par_slices(|first, q| {
            let mut n = 0u64;
            let _ = q.visit_slice(first, &mut |_| {
                n += 1;
                ControlFlow::Continue(())
            });
            n
        })
        .into_iter()
        .sum()
    }
}

struct Walker<'q, 'a> {
    q: &'q Query<'a>,
    /// Running value of every linear constraint.
    partial: Vec<i64>,
    /// `suffix[c][j]` = sum of squares of `phi_c` over tail positions `j..`.
    suffix: Vec<Vec<i128>>,
}

impl<'q, 'a> Walker<'q, 'a> {
    fn new(q: &'q Query<'a>) -> Self {
        let suffix = q
            .linear
            .iter()
            .map(|l| {
                let mut s = vec![0i128; q.tail.len() + 1];
                for j in (0..q.tail.len()).rev() {
                    let w = l.phi[q.tail[j]] as i128;
                    s[j] = s[j + 1] + w * w;
                }
                s
            })
            .collect();
        Self {
            q,
            partial: vec![0; q.linear.len()],
            suffix,
        }
    }

    fn head<F>(&mut self, x: &mut [i64], depth: usize, first: Option<i64>, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        if depth == self.q.head.len() {
            let head_sq = self.q.lattice.pair_raw(x, x);
            // Tail contributes -t to the square.
            let tmin = self.q.norm_max.map_or(0, |hi| (head_sq - hi).max(0));
            let tmax = match self.q.norm_min {
                Some(lo) => head_sq - lo,
                None => {
                    let b = self.q.bound;
                    b * b * self.q.tail.len() as i64
                }
            };
            if tmax < tmin {
                return ControlFlow::Continue(());
            }
            return self.tail(x, 0, 0, tmin, tmax, first.filter(|_| self.q.head.is_empty()), f);
        }
        let idx = self.q.head[depth];
        let values: Vec<i64> = match (depth, first) {
            (0, Some(v)) => vec![v],
            _ => (-self.q.bound..=self.q.bound).collect(),
        };
        for v in values {
            x[idx] = v;
            for (p, l) in self.partial.iter_mut().zip(&self.q.linear) {
                *p += l.phi[idx] * v;
            }
            let flow = self.head(x, depth + 1, first, f);
            for (p, l) in self.partial.iter_mut().zip(&self.q.linear) {
                *p -= l.phi[idx] * v;
            }
            x[idx] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }

    #[allow(clippy::too_many_arguments)]
    fn tail<F>(
        &mut self,
        x: &mut [i64],
        j: usize,
        used: i64,
        tmin: i64,
        tmax: i64,
        first: Option<i64>,
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let remaining = tmax - used;
        if remaining < 0 {
            return ControlFlow::Continue(());
        }
        for (c, l) in self.q.linear.iter().enumerate() {
            let span = self.suffix[c][j] * remaining as i128;
            if !l.rel.reachable(self.partial[c], l.rhs, span) {
                return ControlFlow::Continue(());
            }
        }
        if j == self.q.tail.len() {
            if used < tmin {
                return ControlFlow::Continue(());
            }
            let ok = self
                .q
                .linear
                .iter()
                .zip(&self.partial)
                .all(|(l, &p)| l.rel.holds(p, l.rhs));
            return if ok { f(x) } else { ControlFlow::Continue(()) };
        }
        let idx = self.q.tail[j];
        let lim = isqrt(remaining).min(self.q.bound);
        let (lo, hi) = match (j, first) {
            (0, Some(v)) if v.abs() <= lim => (v, v),
            (0, Some(_)) => return ControlFlow::Continue(()),
            _ => (-lim, lim),
        };
        for v in lo..=hi {
            x[idx] = v;
            for (p, l) in self.partial.iter_mut().zip(&self.q.linear) {
                *p += l.phi[idx] * v;
            }
            let flow = self.tail(x, j + 1, used + v * v, tmin, tmax, None, f);
            for (p, l) in self.partial.iter_mut().zip(&self.q.linear) {
                *p -= l.phi[idx] * v;
            }
            x[idx] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

pub(crate) fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
