//! Newton polyhedra in the positive orthant: construction from a support
//! set, dual vertex/facet descriptions, Minkowski sums, weight minima and
//! first meet loci, and enumeration of the proper faces.
//!
//! All geometry is exact. The recession cone of every polyhedron built here
//! is the full positive orthant, so facet normals are nonnegative and the
//! minimum of a nonnegative linear functional is always attained at a vertex.

mod dd;

pub use dd::{extreme_rays as dual_extreme_rays, DdOutput};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot_i64, rank_i64_rows};
use crate::polyring::IntegerPolynomial;

/// Facet inequality `<normal, x> >= offset` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

/// An unbounded lattice polyhedron `conv(union of m + R_+^n)` given by both
/// its extreme points and its irredundant facet list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    nvars: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
}

/// A face identified by the facets containing it, together with the extreme
/// points lying on it and its dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FaceDescriptor {
    pub tight_facets: Vec<usize>,
    pub vertex_indices: Vec<usize>,
    pub dim: usize,
}

impl NewtonPolyhedron {
    /// Build from a nonempty set of lattice points in the positive orthant.
    pub fn from_support(nvars: usize, support: &[Vec<i64>]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        for m in support {
            if m.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: m.len(),
                });
            }
            assert!(m.iter().all(|&x| x >= 0), "support points must be nonnegative");
        }
        // Drop points dominated coordinatewise by another support point;
        // they cannot be extreme.
        let mut points: Vec<Vec<i64>> = support.to_vec();
        points.sort();
        points.dedup();
        let dominated: Vec<bool> = points
            .iter()
            .map(|m| {
                points
                    .iter()
                    .any(|m2| m2 != m && m2.iter().zip(m).all(|(a, b)| a <= b))
            })
            .collect();
        let points: Vec<Vec<i64>> = points
            .into_iter()
            .zip(dominated)
            .filter_map(|(m, dom)| (!dom).then_some(m))
            .collect();

        // Dualize the homogenization: a valid inequality <w, x> >= c must
        // hold on every generator point and on every recession direction.
        let mut constraints: Vec<Vec<BigInt>> = Vec::new();
        for m in &points {
            let mut row: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
            row.push(BigInt::from(1));
            constraints.push(row);
        }
        for j in 0..nvars {
            let mut row = vec![BigInt::zero(); nvars + 1];
            row[j] = BigInt::from(1);
            constraints.push(row);
        }
        let dual = dd::extreme_rays(nvars + 1, &constraints);
        assert!(
            dual.lineality.is_empty(),
            "homogenization cone must be full-dimensional"
        );

        let mut facets: Vec<Facet> = Vec::new();
        for ray in dual.rays {
            let normal: Vec<i64> = ray[..nvars]
                .iter()
                .map(|x| x.to_i64().expect("facet normal exceeds i64"))
                .collect();
            if normal.iter().all(|&x| x == 0) {
                continue; // the far facet of the homogenization
            }
            assert!(
                normal.iter().all(|&x| x >= 0),
                "recession cone forces nonnegative normals"
            );
            let offset = -ray[nvars].clone();
            assert!(!offset.is_negative(), "offsets are nonnegative on N^n supports");
            facets.push(Facet {
                normal,
                offset: offset.to_i64().expect("facet offset exceeds i64"),
            });
        }
        facets.sort();

        // Extreme points are exactly the support points whose tight facet
        // normals span the whole space.
        let mut vertices: Vec<Vec<i64>> = points
            .into_iter()
            .filter(|m| {
                let tight: Vec<Vec<i64>> = facets
                    .iter()
                    .filter(|f| dot_i64(&f.normal, m) == f.offset)
                    .map(|f| f.normal.clone())
                    .collect();
                rank_i64_rows(&tight) == nvars
            })
            .collect();
        vertices.sort();

        Ok(Self {
            nvars,
            vertices,
            facets,
        })
    }

    pub fn from_polynomial(h: &IntegerPolynomial) -> Result<Self> {
        Self::from_support(h.nvars(), &h.support())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Primitive facet normals, in facet order.
    pub fn facet_normals(&self) -> Vec<Vec<i64>> {
        self.facets.iter().map(|f| f.normal.clone()).collect()
    }

    /// Minkowski sum, computed from pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        let mut sums: Vec<Vec<i64>> = Vec::new();
        for u in &self.vertices {
            for v in &other.vertices {
                sums.push(
                    u.iter()
                        .zip(v)
                        .map(|(a, b)| a.checked_add(*b).expect("vertex sum overflow"))
                        .collect(),
                );
            }
        }
        Self::from_support(self.nvars, &sums)
    }

    /// Minimum of `<a, x>` over the polyhedron, for nonnegative `a`.
    pub fn d_value(&self, a: &[i64]) -> i64 {
        assert_eq!(a.len(), self.nvars);
        assert!(a.iter().all(|&x| x >= 0), "weight must be nonnegative");
        self.vertices
            .iter()
            .map(|v| dot_i64(a, v))
            .min()
            .expect("polyhedron has vertices")
    }

    /// The face on which `<a, .>` attains its minimum. For `a = 0` the whole
    /// polyhedron is returned, with an empty tight set and dimension n.
    pub fn first_meet_locus(&self, a: &[i64]) -> FaceDescriptor {
        assert_eq!(a.len(), self.nvars);
        if a.iter().all(|&x| x == 0) {
            return FaceDescriptor {
                tight_facets: Vec::new(),
                vertex_indices: (0..self.vertices.len()).collect(),
                dim: self.nvars,
            };
        }
        let d = self.d_value(a);
        let vertex_indices: Vec<usize> = (0..self.vertices.len())
            .filter(|&i| dot_i64(a, &self.vertices[i]) == d)
            .collect();
        let rec_dirs: Vec<usize> = (0..self.nvars).filter(|&j| a[j] == 0).collect();
        let tight_facets: Vec<usize> = (0..self.facets.len())
            .filter(|&i| {
                let f = &self.facets[i];
                vertex_indices
                    .iter()
                    .all(|&vi| dot_i64(&f.normal, &self.vertices[vi]) == f.offset)
                    && rec_dirs.iter().all(|&j| f.normal[j] == 0)
            })
            .collect();
        let dim = self.face_dim(&vertex_indices, &rec_dirs);
        FaceDescriptor {
            tight_facets,
            vertex_indices,
            dim,
        }
    }

    fn face_dim(&self, vertex_indices: &[usize], rec_dirs: &[usize]) -> usize {
        let v0 = &self.vertices[vertex_indices[0]];
        let mut rows: Vec<Vec<i64>> = vertex_indices[1..]
            .iter()
            .map(|&vi| {
                self.vertices[vi]
                    .iter()
                    .zip(v0)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        for &j in rec_dirs {
            let mut e = vec![0i64; self.nvars];
            e[j] = 1;
            rows.push(e);
        }
        rank_i64_rows(&rows)
    }

    /// All proper faces, found by intersecting facets breadth-first. Every
    /// proper face of a pointed polyhedron is the intersection of the facets
    /// containing it, so this enumeration is complete.
    pub fn proper_faces(&self) -> Vec<FaceDescriptor> {
        let mut seen: BTreeMap<Vec<usize>, FaceDescriptor> = BTreeMap::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for i in 0..self.facets.len() {
            if let Some(desc) = self.face_from_tight_seed(&[i]) {
                if !seen.contains_key(&desc.tight_facets) {
                    queue.push_back(desc.tight_facets.clone());
                    seen.insert(desc.tight_facets.clone(), desc);
                }
            }
        }
        while let Some(tight) = queue.pop_front() {
            for i in 0..self.facets.len() {
                if tight.binary_search(&i).is_ok() {
                    continue;
                }
                let mut seed = tight.clone();
                seed.push(i);
                if let Some(desc) = self.face_from_tight_seed(&seed) {
                    if !seen.contains_key(&desc.tight_facets) {
                        queue.push_back(desc.tight_facets.clone());
                        seen.insert(desc.tight_facets.clone(), desc);
                    }
                }
            }
        }
        let mut faces: Vec<FaceDescriptor> = seen.into_values().collect();
        faces.sort_by_key(|f| (std::cmp::Reverse(f.dim), f.tight_facets.clone()));
        faces
    }

    /// Close a set of facet indices into a face: take the extreme points and
    /// recession directions tight on all of them, then all facets tight on
    /// that whole set. Returns `None` for an empty intersection.
    fn face_from_tight_seed(&self, seed: &[usize]) -> Option<FaceDescriptor> {
        let vertex_indices: Vec<usize> = (0..self.vertices.len())
            .filter(|&vi| {
                seed.iter().all(|&fi| {
                    let f = &self.facets[fi];
                    dot_i64(&f.normal, &self.vertices[vi]) == f.offset
                })
            })
            .collect();
        if vertex_indices.is_empty() {
            return None;
        }
        let rec_dirs: Vec<usize> = (0..self.nvars)
            .filter(|&j| seed.iter().all(|&fi| self.facets[fi].normal[j] == 0))
            .collect();
        let tight_facets: Vec<usize> = (0..self.facets.len())
            .filter(|&fi| {
                let f = &self.facets[fi];
                vertex_indices
                    .iter()
                    .all(|&vi| dot_i64(&f.normal, &self.vertices[vi]) == f.offset)
                    && rec_dirs.iter().all(|&j| f.normal[j] == 0)
            })
            .collect();
        let dim = self.face_dim(&vertex_indices, &rec_dirs);
        Some(FaceDescriptor {
            tight_facets,
            vertex_indices,
            dim,
        })
    }

    /// Does the point belong to the polyhedron?
    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets
            .iter()
            .all(|f| dot_i64(&f.normal, x) >= f.offset)
    }

    /// The normal fan restricted to the positive orthant: one entry per
    /// proper face, carrying the primitive normals of the facets containing
    /// the face. The relatively open cone spanned strictly by those normals
    /// is the locus of weights whose first meet locus is that face.
    pub fn normal_fan(&self) -> Vec<(FaceDescriptor, Vec<Vec<i64>>)> {
        self.proper_faces()
            .into_iter()
            .map(|face| {
                let gens: Vec<Vec<i64>> = face
                    .tight_facets
                    .iter()
                    .map(|&fi| self.facets[fi].normal.clone())
                    .collect();
                (face, gens)
            })
            .collect()
    }
}

/// Check `a >= 0` componentwise and of the right length, then compute the
/// weight minimum; convenience wrapper used by callers working with slices.
pub fn d_value(a: &[i64], p: &NewtonPolyhedron) -> i64 {
    p.d_value(a)
}

/// Brute-force membership oracle used in tests: is the point covered by some
/// translated orthant over the support?
pub fn dominated_by_support(point: &[i64], support: &[Vec<i64>]) -> bool {
    support
        .iter()
        .any(|m| m.iter().zip(point).all(|(a, b)| a <= b))
}

/// Distinct primitive facet normals of the polyhedron, sorted.
pub fn facet_normal_set(p: &NewtonPolyhedron) -> BTreeSet<Vec<i64>> {
    p.facets.iter().map(|f| f.normal.clone()).collect()
}
