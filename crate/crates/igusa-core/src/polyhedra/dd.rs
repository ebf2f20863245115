//! Incremental double description over exact integers.
//!
//! Computes the extreme rays of a cone given by homogeneous inequalities
//! `{ y : <c_i, y> >= 0 }`. Rays are kept as primitive integer vectors and
//! adjacency is decided combinatorially from tight-constraint sets, so no
//! floating point enters the geometry.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::make_primitive;

/// Set of constraint indices tight on a ray, as a fixed-width bitset.
#[derive(Clone, PartialEq, Eq)]
struct TightSet {
    words: Vec<u64>,
}

impl TightSet {
    fn new(capacity: usize) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    fn intersection(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn is_subset_of(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: Vec<BigInt>,
    tight: TightSet,
}

/// Result of the double-description run: extreme rays modulo the returned
/// lineality space. For a pointed input cone the lineality is empty.
pub struct DdOutput {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of `{ y in R^dim : <c, y> >= 0 for every constraint c }`.
pub fn extreme_rays(dim: usize, constraints: &[Vec<BigInt>]) -> DdOutput {
    let ncons = constraints.len();
    // Start from the whole space: lineality = standard basis, no rays.
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, cons) in constraints.iter().enumerate() {
        let lin_dots: Vec<BigInt> = lineality.iter().map(|l| dot(cons, l)).collect();
        if let Some(k) = lin_dots.iter().position(|d| !d.is_zero()) {
            // Pull one lineality generator out to serve as the ray off the
            // new hyperplane; project everything else onto the hyperplane.
            let mut l0 = lineality.remove(k);
            let mut d0 = lin_dots[k].clone();
            if d0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -(&*x));
                d0 = -d0;
            }
            for (j, l) in lineality.iter_mut().enumerate() {
                let dj = &lin_dots[if j < k { j } else { j + 1 }];
                if dj.is_zero() {
                    continue;
                }
                for (x, y) in l.iter_mut().zip(&l0) {
                    *x = &*x * &d0 - dj * y;
                }
                make_primitive(l);
            }
            for ray in rays.iter_mut() {
                let dr = dot(cons, &ray.v);
                if dr.is_zero() {
                    ray.tight.insert(idx);
                    continue;
                }
                for (x, y) in ray.v.iter_mut().zip(&l0) {
                    *x = &*x * &d0 - &dr * y;
                }
                make_primitive(&mut ray.v);
                ray.tight.insert(idx);
            }
            make_primitive(&mut l0);
            // Everything previously processed vanished on the lineality.
            let mut tight = TightSet::new(ncons);
            for j in 0..idx {
                tight.insert(j);
            }
            rays.push(Ray { v: l0, tight });
            continue;
        }

        // The constraint already vanishes on the lineality: split rays.
        let dots: Vec<BigInt> = rays.iter().map(|r| dot(cons, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_negative()).collect();
        if neg.is_empty() {
            for (ray, d) in rays.iter_mut().zip(&dots) {
                if d.is_zero() {
                    ray.tight.insert(idx);
                }
            }
            continue;
        }
        let mut new_rays: Vec<Ray> = Vec::new();
        for &ip in &pos {
            for &inn in &neg {
                let meet = rays[ip].tight.intersection(&rays[inn].tight);
                // Combinatorial adjacency: no third ray is tight on every
                // constraint the pair shares.
                let adjacent = rays.iter().enumerate().all(|(k, r)| {
                    k == ip || k == inn || !meet.is_subset_of(&r.tight)
                });
                if !adjacent {
                    continue;
                }
                let dp = &dots[ip];
                let dn = &dots[inn];
                let mut v: Vec<BigInt> = rays[ip]
                    .v
                    .iter()
                    .zip(&rays[inn].v)
                    .map(|(p, n)| dp * n - dn * p)
                    .collect();
                make_primitive(&mut v);
                let mut tight = meet;
                tight.insert(idx);
                new_rays.push(Ray { v, tight });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, ray) in rays.into_iter().enumerate() {
            if dots[i].is_negative() {
                continue;
            }
            let mut ray = ray;
            if dots[i].is_zero() {
                ray.tight.insert(idx);
            }
            kept.push(ray);
        }
        kept.extend(new_rays);
        rays = kept;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    DdOutput {
        rays: out,
        lineality,
    }
}
