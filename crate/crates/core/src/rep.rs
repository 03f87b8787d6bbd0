//! Modules over structure-constant algebras and the homological core:
//! intertwiner spaces, degree-one extension spaces computed as cocycles
//! modulo coboundaries, and explicit extension modules.
//!
//! A cocycle valued in Hom(M, N) assigns a matrix f(b) to every basis
//! element so that the block matrices [[rho_N(b), f(b)], [0, rho_M(b)]]
//! again satisfy the structure constants. The identity is imposed on all
//! basis pairs, not only on generators, so no presentation is assumed.

use std::sync::Arc;

use crate::algebra::SCAlgebra;
use crate::linalg::{extend_basis, span_rank, FpMatrix, PrimeField};

/// A finite-dimensional module over a structure-constant algebra: one
/// action matrix per algebra basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgRep {
    algebra: Arc<SCAlgebra>,
    dim: usize,
    action: Vec<FpMatrix>,
}

/// Witness for a failed module audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepViolation {
    UnitNotIdentity,
    /// rho(b_i) rho(b_j) disagrees with the structure-constant expansion.
    Pair(usize, usize),
}

impl AlgRep {
    pub fn new(algebra: Arc<SCAlgebra>, action: Vec<FpMatrix>) -> AlgRep {
        assert_eq!(
            action.len(),
            algebra.dim(),
            "one action matrix per basis element"
        );
        let dim = action.first().map_or(0, FpMatrix::rows);
        for m in &action {
            assert_eq!(
                m.rows(),
                dim,
                "action matrices must be square of equal size"
            );
            assert_eq!(
                m.cols(),
                dim,
                "action matrices must be square of equal size"
            );
        }
        AlgRep {
            algebra,
            dim,
            action,
        }
    }

    /// One-dimensional module from a scalar value per basis element.
    pub fn one_dimensional(algebra: Arc<SCAlgebra>, values: &[u64]) -> AlgRep {
        assert_eq!(values.len(), algebra.dim());
        let field = *algebra.field();
        let action = values
            .iter()
            .map(|&v| FpMatrix::from_rows(&field, &[vec![v % field.p()]]))
            .collect();
        AlgRep::new(algebra, action)
    }

    /// The left regular representation; it satisfies the audit exactly when
    /// the structure constants are associative.
    pub fn regular(algebra: Arc<SCAlgebra>) -> AlgRep {
        let action = (0..algebra.dim())
            .map(|i| algebra.left_regular_matrix(i))
            .collect();
        AlgRep::new(algebra, action)
    }

    pub fn algebra(&self) -> &Arc<SCAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &FpMatrix {
        &self.action[i]
    }

    pub fn field(&self) -> PrimeField {
        *self.algebra.field()
    }

    /// Exhaustive audit: the unit acts as the identity and every basis pair
    /// multiplies compatibly with the structure constants.
    pub fn verify(&self) -> Result<(), RepViolation> {
        let field = self.field();
        let d = self.algebra.dim();
        if self.action[self.algebra.unit_index()] != FpMatrix::identity(&field, self.dim) {
            return Err(RepViolation::UnitNotIdentity);
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = FpMatrix::zeros(&field, self.dim, self.dim);
                for (k, &c) in self.algebra.product_coeffs(i, j).iter().enumerate() {
                    if c != 0 {
                        rhs = rhs.add(&self.action[k].scale(c));
                    }
                }
                if lhs != rhs {
                    return Err(RepViolation::Pair(i, j));
                }
            }
        }
        Ok(())
    }
}

fn check_same_parent(m: &AlgRep, n: &AlgRep) {
    let same = Arc::ptr_eq(&m.algebra, &n.algebra) || *m.algebra == *n.algebra;
    assert!(same, "modules live over different parent algebras");
}

/// The space of intertwiners from M to N with an echelonized basis.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<FpMatrix>,
}

/// All h with h rho_M(b) = rho_N(b) h for every basis element, as the
/// nullspace of the stacked commutation system.
pub fn hom_space(m: &AlgRep, n: &AlgRep) -> HomSpace {
    check_same_parent(m, n);
    let field = m.field();
    let d = m.algebra.dim();
    let (nd, md) = (n.dim(), m.dim());
    let unknowns = nd * md;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d * unknowns);
    for b in 0..d {
        let rho_m = m.action(b);
        let rho_n = n.action(b);
        for i in 0..nd {
            for j in 0..md {
                // (h rho_M(b) - rho_N(b) h)[i, j] = 0
                let mut row = vec![0u64; unknowns];
                for c in 0..md {
                    let v = rho_m.get(c, j);
                    if v != 0 {
                        let idx = i * md + c;
                        row[idx] = field.add(row[idx], v);
                    }
                }
                for r in 0..nd {
                    let v = rho_n.get(i, r);
                    if v != 0 {
                        let idx = r * md + j;
                        row[idx] = field.sub(row[idx], v);
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = FpMatrix::from_row_vectors(&field, unknowns, &rows);
    let basis = system
        .nullspace()
        .into_iter()
        .map(|v| FpMatrix::from_fn(&field, nd, md, |i, j| v[i * md + j]))
        .collect::<Vec<_>>();
    HomSpace {
        dim: basis.len(),
        basis,
    }
}

/// A degree-one cocycle from M to N: one (dim N) x (dim M) matrix per
/// algebra basis element, satisfying the extension identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub source: AlgRep,
    pub target: AlgRep,
    pub maps: Vec<FpMatrix>,
}

impl Cocycle {
    pub fn zero(source: &AlgRep, target: &AlgRep) -> Cocycle {
        check_same_parent(source, target);
        let field = source.field();
        let maps = (0..source.algebra.dim())
            .map(|_| FpMatrix::zeros(&field, target.dim(), source.dim()))
            .collect();
        Cocycle {
            source: source.clone(),
            target: target.clone(),
            maps,
        }
    }

    /// Checks f(unit) = 0 and the cocycle identity on every basis pair,
    /// extending f linearly through the structure constants.
    pub fn verify(&self) -> bool {
        let m = &self.source;
        let n = &self.target;
        let algebra = &m.algebra;
        let field = m.field();
        if !self.maps[algebra.unit_index()].is_zero() {
            return false;
        }
        let d = algebra.dim();
        for i in 0..d {
            for j in 0..d {
                let mut lhs = FpMatrix::zeros(&field, n.dim(), m.dim());
                for (k, &c) in algebra.product_coeffs(i, j).iter().enumerate() {
                    if c != 0 {
                        lhs = lhs.add(&self.maps[k].scale(c));
                    }
                }
                let rhs = n
                    .action(i)
                    .mul(&self.maps[j])
                    .add(&self.maps[i].mul(m.action(j)));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Extension space data: cocycles modulo coboundaries with representative
/// cocycles for a complement of the coboundary subspace.
#[derive(Debug, Clone)]
pub struct Ext1Space {
    pub dim: usize,
    pub z1_dim: usize,
    pub b1_dim: usize,
    pub representatives: Vec<Cocycle>,
}

/// Extensions of M (quotient) by N (sub), computed as the linear system of
/// cocycles reduced modulo coboundaries. The coboundary dimension satisfies
/// dim B1 = dim(N) dim(M) - dim Hom(M, N).
pub fn ext1_space(m: &AlgRep, n: &AlgRep) -> Ext1Space {
    check_same_parent(m, n);
    let field = m.field();
    let algebra = &m.algebra;
    let d = algebra.dim();
    let (nd, md) = (n.dim(), m.dim());
    let block = nd * md;
    let unknowns = d * block;
    let flat = |b: usize, i: usize, j: usize| b * block + i * md + j;

    let mut rows: Vec<Vec<u64>> = Vec::new();
    // f(unit) = 0.
    for i in 0..nd {
        for j in 0..md {
            let mut row = vec![0u64; unknowns];
            row[flat(algebra.unit_index(), i, j)] = 1;
            rows.push(row);
        }
    }
    // sum_k c_{ab}^k f(b_k) = rho_N(b_a) f(b_b) + f(b_a) rho_M(b_b), entrywise.
    for a in 0..d {
        for b in 0..d {
            let coeffs = algebra.product_coeffs(a, b);
            let rho_n = n.action(a);
            let rho_m = m.action(b);
            for i in 0..nd {
                for j in 0..md {
                    let mut row = vec![0u64; unknowns];
                    for (k, &c) in coeffs.iter().enumerate() {
                        if c != 0 {
                            let idx = flat(k, i, j);
                            row[idx] = field.add(row[idx], c);
                        }
                    }
                    for r in 0..nd {
                        let v = rho_n.get(i, r);
                        if v != 0 {
                            let idx = flat(b, r, j);
                            row[idx] = field.sub(row[idx], v);
                        }
                    }
                    for c in 0..md {
                        let v = rho_m.get(c, j);
                        if v != 0 {
                            let idx = flat(a, i, c);
                            row[idx] = field.sub(row[idx], v);
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    let system = FpMatrix::from_row_vectors(&field, unknowns, &rows);
    let z1 = system.nullspace();
    let z1_dim = z1.len();

    // Coboundaries: h ranges over the matrix units of Hom(M, N).
    let mut coboundaries: Vec<Vec<u64>> = Vec::with_capacity(block);
    for r in 0..nd {
        for c in 0..md {
            let mut h = FpMatrix::zeros(&field, nd, md);
            h.set(r, c, 1);
            let mut vec = vec![0u64; unknowns];
            for b in 0..d {
                let f_b = n.action(b).mul(&h).sub(&h.mul(m.action(b)));
                for i in 0..nd {
                    for j in 0..md {
                        vec[flat(b, i, j)] = f_b.get(i, j);
                    }
                }
            }
            coboundaries.push(vec);
        }
    }
    let b1_dim = span_rank(&field, unknowns, &coboundaries);

    // Representatives: extend an echelon basis of B1 by Z1 vectors in order,
    // keeping the lexicographically first ones that enlarge the span.
    let kept = extend_basis(&field, unknowns, &coboundaries, &z1);
    let representatives = kept
        .into_iter()
        .map(|idx| {
            let v = &z1[idx];
            let maps = (0..d)
                .map(|b| FpMatrix::from_fn(&field, nd, md, |i, j| v[flat(b, i, j)]))
                .collect();
            Cocycle {
                source: m.clone(),
                target: n.clone(),
                maps,
            }
        })
        .collect::<Vec<_>>();

    Ext1Space {
        dim: z1_dim - b1_dim,
        z1_dim,
        b1_dim,
        representatives,
    }
}

/// Whether a cocycle is a coboundary, i.e. the extension it builds splits.
pub fn is_coboundary(f: &Cocycle) -> bool {
    let field = f.source.field();
    let d = f.source.algebra.dim();
    let (nd, md) = (f.target.dim(), f.source.dim());
    let block = nd * md;
    // Solve rho_N(b) h - h rho_M(b) = f(b) for a single h.
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d * block);
    let mut rhs: Vec<u64> = Vec::with_capacity(d * block);
    for b in 0..d {
        let rho_m = f.source.action(b);
        let rho_n = f.target.action(b);
        for i in 0..nd {
            for j in 0..md {
                let mut row = vec![0u64; block];
                for r in 0..nd {
                    let v = rho_n.get(i, r);
                    if v != 0 {
                        row[r * md + j] = field.add(row[r * md + j], v);
                    }
                }
                for c in 0..md {
                    let v = rho_m.get(c, j);
                    if v != 0 {
                        row[i * md + c] = field.sub(row[i * md + c], v);
                    }
                }
                rows.push(row);
                rhs.push(f.maps[b].get(i, j));
            }
        }
    }
    FpMatrix::from_row_vectors(&field, block, &rows)
        .solve(&rhs)
        .is_consistent()
}

/// The block-upper-triangular module attached to a cocycle:
/// rho(b) = [[rho_N(b), f(b)], [0, rho_M(b)]]. Panics if the cocycle data
/// fails its own audit.
pub fn build_extension(f: &Cocycle) -> AlgRep {
    assert!(f.verify(), "cocycle fails the extension identity");
    let m = &f.source;
    let n = &f.target;
    let field = m.field();
    let (nd, md) = (n.dim(), m.dim());
    let total = nd + md;
    let action = (0..m.algebra.dim())
        .map(|b| {
            FpMatrix::from_fn(&field, total, total, |i, j| match (i < nd, j < nd) {
                (true, true) => n.action(b).get(i, j),
                (true, false) => f.maps[b].get(i, j - nd),
                (false, true) => 0,
                (false, false) => m.action(b).get(i - nd, j - nd),
            })
        })
        .collect();
    AlgRep::new(Arc::clone(&m.algebra), action)
}
