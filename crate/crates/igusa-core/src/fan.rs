//! Simplicial subdivision of the positive orthant subordinate to a Newton
//! polyhedron.
//!
//! The normal fan partitions `R_+^n \ {0}` into relatively open cones, one
//! per proper face. Non-simplicial cones are refined by a placing
//! triangulation that uses only the cone's own rays, and the refined pieces
//! are collected as strictly spanned simplicial cones whose disjoint union
//! is still exactly `R_+^n \ {0}`. Shared lower-dimensional walls are kept
//! once, from the first simplex producing them in the chosen ray order.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::rank_i64_rows;
use crate::polyhedra::{FaceDescriptor, NewtonPolyhedron};

/// A rational simplicial cone strictly spanned by linearly independent
/// primitive lattice vectors, tagged with the face of the polyhedron whose
/// normal cone it refines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    pub generators: Vec<Vec<i64>>,
    pub barycenter: Vec<i64>,
    pub parent_face: FaceDescriptor,
}

impl SimplicialCone {
    fn new(generators: Vec<Vec<i64>>, parent_face: FaceDescriptor) -> Self {
        let n = generators[0].len();
        let mut barycenter = vec![0i64; n];
        for g in &generators {
            for (b, x) in barycenter.iter_mut().zip(g) {
                *b = b.checked_add(*x).expect("barycenter overflow");
            }
        }
        Self {
            generators,
            barycenter,
            parent_face,
        }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Solve `k = sum lambda_i w_i` exactly; `None` when `k` is outside the
    /// linear span of the generators.
    pub fn coordinates(&self, k: &[i64]) -> Option<Vec<BigRational>> {
        self.solver().solve(k)
    }

    /// Precompute the exact linear solver for this cone's generators; much
    /// cheaper than per-point elimination when many points are classified.
    pub fn solver(&self) -> ConeSolver {
        ConeSolver::new(&self.generators)
    }

    /// Membership in the relatively open cone: all coordinates strictly
    /// positive.
    pub fn contains_strictly(&self, k: &[i64]) -> bool {
        match self.coordinates(k) {
            Some(lambda) => lambda.iter().all(|l| l.is_positive()),
            None => false,
        }
    }
}

/// Exact solver for `k = sum lambda_i w_i` over fixed linearly independent
/// generators: an inverse of one full-rank square block, plus verification
/// against the remaining rows.
pub struct ConeSolver {
    generators: Vec<Vec<i64>>,
    block_rows: Vec<usize>,
    block_inverse: Vec<Vec<BigRational>>,
}

impl ConeSolver {
    fn new(generators: &[Vec<i64>]) -> Self {
        let l = generators.len();
        let n = generators[0].len();
        // Greedily pick l rows of the n x l generator-column matrix that are
        // linearly independent.
        let mut block_rows: Vec<usize> = Vec::new();
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        for row in 0..n {
            if block_rows.len() == l {
                break;
            }
            let candidate: Vec<i64> = generators.iter().map(|g| g[row]).collect();
            let mut test = chosen.clone();
            test.push(candidate.clone());
            if rank_i64_rows(&test) == test.len() {
                chosen.push(candidate);
                block_rows.push(row);
            }
        }
        assert_eq!(block_rows.len(), l, "generators linearly independent");
        let block: Vec<Vec<BigRational>> = chosen
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| BigRational::from(BigInt::from(x)))
                    .collect()
            })
            .collect();
        let block_inverse = crate::linalg::invert(&block).expect("block is invertible");
        Self {
            generators: generators.to_vec(),
            block_rows,
            block_inverse,
        }
    }

    pub fn solve(&self, k: &[i64]) -> Option<Vec<BigRational>> {
        let l = self.block_rows.len();
        let mut lambda = vec![BigRational::zero(); l];
        for (i, li) in lambda.iter_mut().enumerate() {
            for (j, &row) in self.block_rows.iter().enumerate() {
                *li += &self.block_inverse[i][j] * BigRational::from(BigInt::from(k[row]));
            }
        }
        // Verify the rows outside the block.
        let n = self.generators[0].len();
        for row in 0..n {
            if self.block_rows.contains(&row) {
                continue;
            }
            let mut acc = BigRational::zero();
            for (j, g) in self.generators.iter().enumerate() {
                acc += BigRational::from(BigInt::from(g[row])) * &lambda[j];
            }
            if acc != BigRational::from(BigInt::from(k[row])) {
                return None;
            }
        }
        Some(lambda)
    }
}

/// A simplicial subdivision of `R_+^n \ {0}` subordinate to a polyhedron.
/// The origin is carried implicitly as a distinguished pseudo-cone with
/// barycenter zero; downstream assembly feeds it through the same code path
/// as the proper cones.
#[derive(Clone, Debug)]
pub struct SubordinateFan {
    nvars: usize,
    cones: Vec<SimplicialCone>,
}

/// Ray ordering fed to the placing triangulation. Different orderings can
/// produce different (equally valid) subdivisions; every admissible choice
/// yields the same zeta function, which the test suite asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum FanOrdering {
    #[default]
    Lex,
    ReverseLex,
    Seeded(u64),
}


fn order_rays(mut rays: Vec<Vec<i64>>, ordering: FanOrdering) -> Vec<Vec<i64>> {
    rays.sort();
    match ordering {
        FanOrdering::Lex => rays,
        FanOrdering::ReverseLex => {
            rays.reverse();
            rays
        }
        FanOrdering::Seeded(seed) => {
            // Deterministic Fisher-Yates driven by a splitmix64 stream.
            let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
            let mut next = move || {
                state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                z ^ (z >> 31)
            };
            for i in (1..rays.len()).rev() {
                let j = (next() % (i as u64 + 1)) as usize;
                rays.swap(i, j);
            }
            rays
        }
    }
}

impl SubordinateFan {
    /// Build the subordinate simplicial fan of `gamma` with the given ray
    /// ordering.
    pub fn build(gamma: &NewtonPolyhedron, ordering: FanOrdering) -> Result<Self> {
        let n = gamma.nvars();
        let mut cones: Vec<SimplicialCone> = Vec::new();
        for (face, rays) in gamma.normal_fan() {
            let cone_dim = n - face.dim;
            let rays = order_rays(rays, ordering);
            let simplices = triangulate(&rays)?;
            debug_assert!(simplices.iter().all(|s| s.len() == cone_dim));
            // Collect the relatively open faces of the maximal simplices that
            // still classify to this face of the polyhedron; together they
            // tile the open normal cone exactly once.
            let mut pieces: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
            for simplex in &simplices {
                let k = simplex.len();
                for mask in 1u32..(1 << k) {
                    let subset: Vec<Vec<i64>> = (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| rays[simplex[i]].clone())
                        .collect();
                    let mut sorted = subset.clone();
                    sorted.sort();
                    pieces.insert(sorted);
                }
            }
            for gens in pieces {
                let mut b = vec![0i64; n];
                for g in &gens {
                    for (x, y) in b.iter_mut().zip(g) {
                        *x += *y;
                    }
                }
                if gamma.first_meet_locus(&b).tight_facets == face.tight_facets {
                    cones.push(SimplicialCone::new(gens, face.clone()));
                }
            }
        }
        cones.sort_by_key(|c| (c.generators.len(), c.generators.clone()));
        Ok(Self { nvars: n, cones })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cones(&self) -> &[SimplicialCone] {
        &self.cones
    }

    /// Index of the relatively open cone containing `k`, if any. Exactly one
    /// exists for every nonzero lattice point of the positive orthant.
    pub fn classify(&self, k: &[i64]) -> Option<usize> {
        self.cones.iter().position(|c| c.contains_strictly(k))
    }
}

/// Placing triangulation of the cone spanned by `rays`, using only those
/// rays. Returns maximal simplices as index tuples into `rays`, processed in
/// the given order. Rays must be pairwise distinct, primitive and nonzero.
pub fn triangulate(rays: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    if rays.is_empty() {
        return Err(Error::BadCone);
    }
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let mut placed: Vec<usize> = Vec::new();
    for (idx, ray) in rays.iter().enumerate() {
        if ray.iter().all(|&x| x == 0) {
            return Err(Error::BadCone);
        }
        if placed.is_empty() {
            simplices.push(vec![idx]);
            placed.push(idx);
            continue;
        }
        let span_rows: Vec<Vec<i64>> = placed.iter().map(|&i| rays[i].clone()).collect();
        let old_rank = rank_i64_rows(&span_rows);
        let mut with_new = span_rows.clone();
        with_new.push(ray.clone());
        if rank_i64_rows(&with_new) > old_rank {
            // Dimension grows: cone over the old triangulation.
            for s in simplices.iter_mut() {
                s.push(idx);
            }
        } else {
            // Same span: attach the new ray to every visible hull facet.
            let hull_facets = cone_hull_facets(&span_rows);
            let mut new_simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
            for facet in &hull_facets {
                if dot_big(facet, ray) >= BigInt::zero() {
                    continue; // not visible from the new ray
                }
                for s in &simplices {
                    for drop in 0..s.len() {
                        let ridge: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter_map(|(i, &r)| (i != drop).then_some(r))
                            .collect();
                        if ridge
                            .iter()
                            .all(|&r| dot_big(facet, &rays[r]).is_zero())
                        {
                            let mut t = ridge;
                            t.push(idx);
                            t.sort();
                            new_simplices.insert(t);
                        }
                    }
                }
            }
            if new_simplices.is_empty() {
                // Ray inside the current hull: nothing to add. Cannot happen
                // for extreme rays of a normal-fan cone.
                placed.push(idx);
                continue;
            }
            simplices.extend(new_simplices);
        }
        placed.push(idx);
    }
    Ok(simplices)
}

fn dot_big(a: &[BigInt], b: &[i64]) -> BigInt {
    a.iter().zip(b).map(|(x, &y)| x * BigInt::from(y)).sum()
}

/// Facet normals of `cone(rows)` within its own linear span, oriented so the
/// cone lies on the nonnegative side.
fn cone_hull_facets(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let dim = rows[0].len();
    let constraints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let dual = crate::polyhedra::dual_extreme_rays(dim, &constraints);
    dual.rays
}

/// Lattice points of the half-open fundamental parallelepiped
/// `{ sum lambda_i w_i : 0 < lambda_i <= 1 }` of a simplicial cone.
///
/// Candidates are scanned in the integer bounding box of the closed
/// parallelepiped and kept when the exact coordinates satisfy the strict
/// lower and closed upper bound; this stays correct for cones of fewer
/// generators than ambient dimensions.
pub fn fundamental_points(cone: &SimplicialCone) -> Vec<Vec<i64>> {
    let n = cone.barycenter.len();
    let solver = cone.solver();
    let mut points = Vec::new();
    let mut current = vec![0i64; n];
    enumerate_box(&cone.barycenter, 0, &mut current, &mut |t| {
        if let Some(lambda) = solver.solve(t) {
            let one = BigRational::one();
            if lambda.iter().all(|l| l.is_positive() && *l <= one) {
                points.push(t.to_vec());
            }
        }
    });
    points.sort();
    points
}

fn enumerate_box(upper: &[i64], coord: usize, current: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if coord == upper.len() {
        f(current);
        return;
    }
    for v in 0..=upper[coord] {
        current[coord] = v;
        enumerate_box(upper, coord + 1, current, f);
    }
}

/// Number of lattice points in the half-open parallelepiped of a
/// full-dimensional simplicial cone: |det| of the generator matrix.
/// Test oracle for `fundamental_points`.
#[allow(clippy::needless_range_loop)] // in-place row elimination
pub fn generator_determinant(cone: &SimplicialCone) -> Option<BigInt> {
    let k = cone.generators.len();
    let n = cone.barycenter.len();
    if k != n {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(BigInt::from(cone.generators[j][i])))
                .collect()
        })
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &inv;
            for c in col..n {
                let v = &m[r][c] - &factor * &m[col][c];
                m[r][c] = v;
            }
        }
    }
    Some(det.abs().to_integer())
}
