//! The finite Hecke algebras attached to the two vertices and the edge of
//! the fundamental chamber, presented by labeled bases and structure
//! constants.
//!
//! The edge algebra is the group algebra of the unit group of F_p. Each
//! vertex algebra has dimension 2(p-1) on the basis T_t, T_{s_i t} with the
//! relations
//!
//! ```text
//!   T_{t1} T_{t2} = T_{t1 t2}
//!   T_t T_{s_i}   = T_{s_i} T_{t^{-1}}
//!   T_{s_i}^2     = -e_1 T_{s_i},         e_1 = sum of all T_t
//! ```
//!
//! Products are normal-ordered with the reflection on the left, so the
//! basis label `TorusTimesS(t, i)` denotes T_{s_i t} = T_{s_i} T_t.

use std::fmt;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::linalg::{FieldError, FpMatrix, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("vertex index must be 0 or 1, got {0}")]
    InvalidVertex(u8),
    #[error("value table of length {got} does not enumerate the {expected} units")]
    BadCharacterLength { got: usize, expected: usize },
    #[error("value table is not a multiplicative character of the unit group")]
    NotMultiplicative,
}

/// Which vertex of the fundamental edge an algebra is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Vertex {
    V0,
    V1,
}

impl Vertex {
    pub fn index(self) -> u8 {
        match self {
            Vertex::V0 => 0,
            Vertex::V1 => 1,
        }
    }

    pub fn other(self) -> Vertex {
        match self {
            Vertex::V0 => Vertex::V1,
            Vertex::V1 => Vertex::V0,
        }
    }

    pub fn from_index(i: u8) -> Result<Vertex, AlgebraError> {
        match i {
            0 => Ok(Vertex::V0),
            1 => Ok(Vertex::V1),
            other => Err(AlgebraError::InvalidVertex(other)),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.index())
    }
}

/// Basis label of an edge or vertex algebra: either a torus operator T_t or
/// a normal-ordered reflection-times-torus operator T_{s_i t}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    Torus(u64),
    TorusTimesS(u64, Vertex),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Torus(t) => write!(f, "T({t})"),
            BasisLabel::TorusTimesS(t, v) => write!(f, "T(s{}*{t})", v.index()),
        }
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A multiplicative character of the unit group of F_p, stored by its value
/// table and its canonical exponent r (so chi(t) = t^r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaCharacter {
    p: u64,
    exponent: u64,
    values: Vec<u64>,
}

impl OmegaCharacter {
    pub fn from_exponent(field: &PrimeField, exponent: u64) -> OmegaCharacter {
        let r = exponent % (field.p() - 1);
        let values = field.units().map(|t| field.pow(t, r)).collect();
        OmegaCharacter {
            p: field.p(),
            exponent: r,
            values,
        }
    }

    /// Validates that `values[t-1] = chi(t)` really is multiplicative. Every
    /// multiplicative map on a cyclic group is a power map, so validation
    /// recovers the exponent and compares tables.
    pub fn from_values(
        field: &PrimeField,
        values: Vec<u64>,
    ) -> Result<OmegaCharacter, AlgebraError> {
        let order = (field.p() - 1) as usize;
        if values.len() != order {
            return Err(AlgebraError::BadCharacterLength {
                got: values.len(),
                expected: order,
            });
        }
        for r in 0..field.p() - 1 {
            let cand = OmegaCharacter::from_exponent(field, r);
            if cand.values == values {
                return Ok(cand);
            }
        }
        Err(AlgebraError::NotMultiplicative)
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn eval(&self, t: u64) -> u64 {
        assert!(
            t % self.p != 0,
            "character evaluated outside the unit group"
        );
        self.values[(t % self.p) as usize - 1]
    }

    /// The character chi^{-1} = chi composed with inversion.
    pub fn inverse(&self) -> OmegaCharacter {
        let field = PrimeField::new_allowing_p3(self.p).expect("modulus validated at construction");
        OmegaCharacter::from_exponent(&field, (self.p - 1 - self.exponent) % (self.p - 1))
    }
}

/// Element of a structure-constant algebra: a coefficient vector against the
/// parent's basis. Operations live on [`SCAlgebra`] so the parent is always
/// explicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraElement {
    pub coeffs: Vec<u64>,
}

impl AlgebraElement {
    pub fn zero(dim: usize) -> AlgebraElement {
        AlgebraElement {
            coeffs: vec![0; dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> AlgebraElement {
        let mut coeffs = vec![0; dim];
        coeffs[i] = 1;
        AlgebraElement { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// First associativity violation found by the exhaustive audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssocViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl fmt::Display for AssocViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(b{} b{}) b{} != b{} (b{} b{})",
            self.i, self.j, self.k, self.i, self.j, self.k
        )
    }
}

/// A finite-dimensional associative unital algebra over F_p given by an
/// ordered basis and the full cube of structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SCAlgebra {
    field: PrimeField,
    basis: Vec<BasisLabel>,
    /// constants[i][j] is the coefficient vector of basis[i] * basis[j].
    constants: Vec<Vec<Vec<u64>>>,
    unit_index: usize,
}

impl SCAlgebra {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit_index
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement::basis(self.dim(), self.unit_index)
    }

    pub fn label_index(&self, label: &BasisLabel) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    pub fn product_coeffs(&self, i: usize, j: usize) -> &[u64] {
        &self.constants[i][j]
    }

    pub fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.dim();
        assert_eq!(a.len(), d, "left factor has wrong length");
        assert_eq!(b.len(), d, "right factor has wrong length");
        let f = &self.field;
        let mut out = vec![0u64; d];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                if b[j] == 0 {
                    continue;
                }
                let scale = f.mul(a[i], b[j]);
                for (k, &c) in self.constants[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] = f.add(out[k], f.mul(scale, c));
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.mul_coeffs(&a.coeffs, &b.coeffs),
        }
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.field.add(x, y))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64, a: &AlgebraElement) -> AlgebraElement {
        let c = c % self.p();
        AlgebraElement {
            coeffs: a.coeffs.iter().map(|&x| self.field.mul(c, x)).collect(),
        }
    }

    /// Exhaustive O(d^3) audit that the structure constants present an
    /// associative algebra; returns the first violating triple otherwise.
    pub fn verify_associativity(&self) -> Result<(), AssocViolation> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = &self.constants[i][j];
                for k in 0..d {
                    // (b_i b_j) b_k via the expansion of b_i b_j.
                    let left = self.mul_coeffs(ij, &AlgebraElement::basis(d, k).coeffs);
                    let jk = &self.constants[j][k];
                    let right = self.mul_coeffs(&AlgebraElement::basis(d, i).coeffs, jk);
                    if left != right {
                        return Err(AssocViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that the declared unit acts as a two-sided identity.
    pub fn verify_unit(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            self.constants[self.unit_index][i] == AlgebraElement::basis(d, i).coeffs
                && self.constants[i][self.unit_index] == AlgebraElement::basis(d, i).coeffs
        })
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.constants[i][j] == self.constants[j][i]))
    }

    pub fn is_central(&self, a: &AlgebraElement) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            let b = AlgebraElement::basis(d, i);
            self.mul(a, &b) == self.mul(&b, a)
        })
    }

    /// Matrix of left multiplication by basis element `i` in the basis
    /// itself: column j holds the coefficients of b_i * b_j.
    pub fn left_regular_matrix(&self, i: usize) -> FpMatrix {
        let d = self.dim();
        FpMatrix::from_fn(&self.field, d, d, |k, j| self.constants[i][j][k])
    }

    /// The unnormalized element e_1 = sum of all torus basis operators. This
    /// is the coefficient of the quadratic relation; it squares to -e_1, not
    /// to itself.
    pub fn torus_sum(&self) -> AlgebraElement {
        let mut coeffs = vec![0; self.dim()];
        for (i, label) in self.basis.iter().enumerate() {
            if matches!(label, BasisLabel::Torus(_)) {
                coeffs[i] = 1;
            }
        }
        AlgebraElement { coeffs }
    }

    /// The normalized idempotent attached to a torus character: the sum of
    /// chi^{-1}(t) T_t over the units, divided by the group order. Distinct
    /// characters give orthogonal idempotents and the full family sums to
    /// the unit.
    pub fn torus_idempotent(&self, chi: &OmegaCharacter) -> AlgebraElement {
        let f = &self.field;
        let order = f.neg(1); // p - 1 reduced mod p
        let norm = f.inv(order);
        let inv = chi.inverse();
        let mut coeffs = vec![0; self.dim()];
        for (i, label) in self.basis.iter().enumerate() {
            if let BasisLabel::Torus(t) = label {
                coeffs[i] = f.mul(norm, inv.eval(*t));
            }
        }
        AlgebraElement { coeffs }
    }

    /// Test-support hook: returns a copy with one structure constant shifted
    /// by `delta`, used as a negative control for the audits.
    pub fn with_perturbed_constant(&self, i: usize, j: usize, k: usize, delta: u64) -> SCAlgebra {
        let mut out = self.clone();
        let cur = out.constants[i][j][k];
        out.constants[i][j][k] = out.field.add(cur, delta % out.p());
        out
    }

    /// Stable JSON document: basis labels in construction order and the
    /// nonzero structure constants as (i, j, k, c) quadruples in
    /// lexicographic order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut quads = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (k, &c) in self.constants[i][j].iter().enumerate() {
                    if c != 0 {
                        quads.push(json!([i, j, k, c]));
                    }
                }
            }
        }
        json!({
            "p": self.p(),
            "dimension": self.dim(),
            "basis": self.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "structure_constants": quads,
        })
    }
}

/// The group algebra of the unit group of F_p: basis T_t with
/// T_{t1} T_{t2} = T_{t1 t2}. Semisimple, since the group order p - 1 is
/// invertible mod p.
pub fn build_edge_algebra(field: &PrimeField) -> SCAlgebra {
    let p = field.p();
    let basis: Vec<BasisLabel> = field.units().map(BasisLabel::Torus).collect();
    let d = basis.len();
    let idx = |t: u64| (t - 1) as usize;
    let mut constants = vec![vec![vec![0u64; d]; d]; d];
    for t1 in field.units() {
        for t2 in field.units() {
            constants[idx(t1)][idx(t2)][idx(t1 * t2 % p)] = 1;
        }
    }
    SCAlgebra {
        field: *field,
        basis,
        constants,
        unit_index: 0,
    }
}

/// The vertex Hecke algebra at vertex `v`: dimension 2(p-1) on the torus and
/// reflection-times-torus basis, with products normal-ordered by the three
/// defining relations.
pub fn build_vertex_algebra(field: &PrimeField, v: Vertex) -> SCAlgebra {
    let p = field.p();
    let n = (p - 1) as usize;
    let mut basis: Vec<BasisLabel> = field.units().map(BasisLabel::Torus).collect();
    basis.extend(field.units().map(|t| BasisLabel::TorusTimesS(t, v)));
    let d = 2 * n;
    let torus = |t: u64| (t - 1) as usize;
    let refl = |t: u64| n + (t - 1) as usize;
    let inv = |t: u64| field.inv(t);

    let mut constants = vec![vec![vec![0u64; d]; d]; d];
    let minus_one = field.neg(1);
    for a in field.units() {
        for b in field.units() {
            // T_a T_b = T_{ab}
            constants[torus(a)][torus(b)][torus(a * b % p)] = 1;
            // T_a T_{s b} = T_{s a^{-1} b}   (push the torus past the reflection)
            constants[torus(a)][refl(b)][refl(inv(a) * b % p)] = 1;
            // T_{s a} T_b = T_{s a b}
            constants[refl(a)][torus(b)][refl(a * b % p)] = 1;
            // T_{s a} T_{s b} = -sum_u T_{s u}   (from the quadratic relation)
            for u in field.units() {
                constants[refl(a)][refl(b)][refl(u)] = minus_one;
            }
        }
    }
    SCAlgebra {
        field: *field,
        basis,
        constants,
        unit_index: 0,
    }
}

/// One block of the decomposition by central torus idempotents: a W_0-orbit
/// of character exponents, its idempotent, and the dimension of the
/// two-sided ideal it cuts out.
#[derive(Debug, Clone)]
pub struct Block {
    pub orbit_exponents: Vec<u64>,
    pub idempotent: AlgebraElement,
    pub dimension: usize,
}

/// Decomposes an edge or vertex algebra along the central idempotents
/// attached to orbits of the inversion action r -> p-1-r on torus character
/// exponents. Blocks are ordered by their smallest exponent.
pub fn block_decomposition(algebra: &SCAlgebra) -> Vec<Block> {
    let field = *algebra.field();
    let n = field.p() - 1;
    let mut seen = vec![false; n as usize];
    let mut blocks = Vec::new();
    for r in 0..n {
        if seen[r as usize] {
            continue;
        }
        let partner = (n - r) % n;
        seen[r as usize] = true;
        seen[partner as usize] = true;
        let mut orbit = vec![r];
        if partner != r {
            orbit.push(partner);
        }
        let mut idem = AlgebraElement::zero(algebra.dim());
        for &e in &orbit {
            let chi = OmegaCharacter::from_exponent(&field, e);
            idem = algebra.add(&idem, &algebra.torus_idempotent(&chi));
        }
        // Block dimension: rank of the ideal spanned by b_i * e_gamma.
        let rows: Vec<Vec<u64>> = (0..algebra.dim())
            .map(|i| {
                algebra
                    .mul(&AlgebraElement::basis(algebra.dim(), i), &idem)
                    .coeffs
            })
            .collect();
        let dimension = crate::linalg::span_rank(&field, algebra.dim(), &rows);
        blocks.push(Block {
            orbit_exponents: orbit,
            idempotent: idem,
            dimension,
        });
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn edge_algebra_dimension_is_group_order() {
        // |F_5^x| = 4 basis elements.
        assert_eq!(build_edge_algebra(&field(5)).dim(), 4);
        assert_eq!(build_edge_algebra(&field(7)).dim(), 6);
    }

    #[test]
    fn edge_algebra_group_law() {
        let a = build_edge_algebra(&field(7));
        let i3 = a.label_index(&BasisLabel::Torus(3)).unwrap();
        let i5 = a.label_index(&BasisLabel::Torus(5)).unwrap();
        let i1 = a.label_index(&BasisLabel::Torus(1)).unwrap();
        // 3 * 5 = 15 = 1 mod 7
        let prod = a.product_coeffs(i3, i5);
        let expected = AlgebraElement::basis(a.dim(), i1).coeffs;
        assert_eq!(prod, &expected[..]);
    }

    #[test]
    fn edge_algebra_is_commutative_exhaustively() {
        assert!(build_edge_algebra(&field(7)).is_commutative());
    }

    #[test]
    fn vertex_algebra_dimension() {
        assert_eq!(build_vertex_algebra(&field(5), Vertex::V0).dim(), 8);
        for p in [5, 7, 11, 13] {
            let f = field(p);
            assert_eq!(
                build_vertex_algebra(&f, Vertex::V0).dim() as u64,
                2 * (p - 1)
            );
            assert_eq!(build_edge_algebra(&f).dim() as u64, p - 1);
        }
    }

    #[test]
    fn reflection_squares_to_minus_torus_sum_of_reflections() {
        // T_s T_s = -sum_t T_{s t} at p = 7.
        let f = field(7);
        let a = build_vertex_algebra(&f, Vertex::V0);
        let s = AlgebraElement::basis(
            a.dim(),
            a.label_index(&BasisLabel::TorusTimesS(1, Vertex::V0))
                .unwrap(),
        );
        let sq = a.mul(&s, &s);
        let mut expected = AlgebraElement::zero(a.dim());
        for t in f.units() {
            let i = a
                .label_index(&BasisLabel::TorusTimesS(t, Vertex::V0))
                .unwrap();
            expected.coeffs[i] = f.neg(1);
        }
        assert_eq!(sq, expected);
        // Same thing said through the relation: T_s^2 = -e_1 T_s.
        let e1 = a.torus_sum();
        let rhs = a.scale(f.neg(1), &a.mul(&e1, &s));
        assert_eq!(sq, rhs);
    }

    #[test]
    fn torus_pushes_past_reflection_with_inversion() {
        for p in [5, 7] {
            let f = field(p);
            let a = build_vertex_algebra(&f, Vertex::V1);
            for t in f.units() {
                let lhs = a.product_coeffs(
                    a.label_index(&BasisLabel::Torus(t)).unwrap(),
                    a.label_index(&BasisLabel::TorusTimesS(1, Vertex::V1))
                        .unwrap(),
                );
                let target = a
                    .label_index(&BasisLabel::TorusTimesS(f.inv(t), Vertex::V1))
                    .unwrap();
                let expected = AlgebraElement::basis(a.dim(), target).coeffs;
                assert_eq!(lhs, &expected[..]);
            }
        }
    }

    #[test]
    fn vertex_algebras_associative_and_unital() {
        for p in [5, 7] {
            let f = field(p);
            for v in [Vertex::V0, Vertex::V1] {
                let a = build_vertex_algebra(&f, v);
                assert!(a.verify_associativity().is_ok());
                assert!(a.verify_unit());
            }
            let e = build_edge_algebra(&f);
            assert!(e.verify_associativity().is_ok());
            assert!(e.verify_unit());
        }
    }

    #[test]
    fn perturbed_algebra_fails_associativity_with_witness() {
        let f = field(5);
        let a = build_edge_algebra(&f);
        // Corrupt T_2 * T_3 by adding a spurious T_2 term.
        let i2 = a.label_index(&BasisLabel::Torus(2)).unwrap();
        let i3 = a.label_index(&BasisLabel::Torus(3)).unwrap();
        let bad = a.with_perturbed_constant(i2, i3, i2, 1);
        let witness = bad.verify_associativity();
        assert!(witness.is_err(), "perturbation must break associativity");
    }

    #[test]
    fn the_two_vertex_algebras_share_structure_constants() {
        // Relabeling s_0 <-> s_1 identifies the two vertex algebras.
        let f = field(7);
        let a0 = build_vertex_algebra(&f, Vertex::V0);
        let a1 = build_vertex_algebra(&f, Vertex::V1);
        assert_eq!(a0.constants, a1.constants);
        assert_eq!(a0.unit_index, a1.unit_index);
    }

    #[test]
    fn normalized_trivial_idempotent_at_p5() {
        // |Omega|^{-1} = 4^{-1} = -1 mod 5, so the normalized idempotent is
        // minus the plain torus sum, and it squares to itself.
        let f = field(5);
        let a = build_edge_algebra(&f);
        let chi = OmegaCharacter::from_exponent(&f, 0);
        let e = a.torus_idempotent(&chi);
        let minus_e1 = a.scale(f.neg(1), &a.torus_sum());
        assert_eq!(e, minus_e1);
        assert_eq!(a.mul(&e, &e), e);
    }

    #[test]
    fn unnormalized_torus_sum_squares_to_its_negative() {
        // e_1^2 = (p-1) e_1 = -e_1: the printed relation coefficient is not
        // an idempotent on the nose.
        for p in [5, 7] {
            let f = field(p);
            let a = build_edge_algebra(&f);
            let e1 = a.torus_sum();
            assert_eq!(a.mul(&e1, &e1), a.scale(f.neg(1), &e1));
        }
    }

    #[test]
    fn character_idempotents_orthogonal_and_partition_unity() {
        for p in [5u64, 7, 11, 13] {
            let f = field(p);
            for alg in [build_edge_algebra(&f), build_vertex_algebra(&f, Vertex::V0)] {
                let mut total = AlgebraElement::zero(alg.dim());
                for r in 0..p - 1 {
                    let er = alg.torus_idempotent(&OmegaCharacter::from_exponent(&f, r));
                    assert_eq!(alg.mul(&er, &er), er, "idempotency at p={p}, r={r}");
                    for s in 0..p - 1 {
                        if s != r {
                            let es = alg.torus_idempotent(&OmegaCharacter::from_exponent(&f, s));
                            assert!(
                                alg.mul(&er, &es).is_zero(),
                                "orthogonality at p={p}, {r}x{s}"
                            );
                        }
                    }
                    total = alg.add(&total, &er);
                }
                assert_eq!(total, alg.unit(), "partition of unity at p={p}");
            }
        }
    }

    #[test]
    fn specific_orthogonality_p7() {
        let f = field(7);
        let a = build_edge_algebra(&f);
        let e3 = a.torus_idempotent(&OmegaCharacter::from_exponent(&f, 3));
        let e2 = a.torus_idempotent(&OmegaCharacter::from_exponent(&f, 2));
        assert!(a.mul(&e3, &e2).is_zero());
    }

    #[test]
    fn block_structure_edge_p7() {
        // Orbits of r -> 6-r on 0..5: {0}, {3}, {1,5}, {2,4}.
        let f = field(7);
        let blocks = block_decomposition(&build_edge_algebra(&f));
        assert_eq!(blocks.len(), 4);
        let orbits: Vec<Vec<u64>> = blocks.iter().map(|b| b.orbit_exponents.clone()).collect();
        assert_eq!(orbits, vec![vec![0], vec![1, 5], vec![2, 4], vec![3]]);
        let dims: Vec<usize> = blocks.iter().map(|b| b.dimension).collect();
        assert_eq!(dims.iter().sum::<usize>(), 6);
    }

    #[test]
    fn block_idempotents_central_and_partition() {
        for p in [5u64, 7] {
            let f = field(p);
            for alg in [
                build_edge_algebra(&f),
                build_vertex_algebra(&f, Vertex::V0),
                build_vertex_algebra(&f, Vertex::V1),
            ] {
                let blocks = block_decomposition(&alg);
                let mut total = AlgebraElement::zero(alg.dim());
                for b in &blocks {
                    assert!(alg.is_central(&b.idempotent), "central at p={p}");
                    assert_eq!(alg.mul(&b.idempotent, &b.idempotent), b.idempotent);
                    total = alg.add(&total, &b.idempotent);
                }
                for (i, b1) in blocks.iter().enumerate() {
                    for (j, b2) in blocks.iter().enumerate() {
                        if i != j {
                            assert!(alg.mul(&b1.idempotent, &b2.idempotent).is_zero());
                        }
                    }
                }
                assert_eq!(total, alg.unit());
                assert_eq!(blocks.iter().map(|b| b.dimension).sum::<usize>(), alg.dim());
            }
        }
    }

    #[test]
    fn character_table_validation() {
        let f = field(7);
        // The squaring character is multiplicative.
        let table: Vec<u64> = f.units().map(|t| f.mul(t, t)).collect();
        let chi = OmegaCharacter::from_values(&f, table).unwrap();
        assert_eq!(chi.exponent(), 2);
        // A corrupted table is rejected.
        let mut bad: Vec<u64> = f.units().map(|t| f.mul(t, t)).collect();
        bad[3] = f.add(bad[3], 1);
        assert_eq!(
            OmegaCharacter::from_values(&f, bad),
            Err(AlgebraError::NotMultiplicative)
        );
    }

    #[test]
    fn algebra_json_is_stable() {
        let f = field(5);
        let a = build_edge_algebra(&f);
        let j1 = serde_json::to_string(&a.to_json()).unwrap();
        let j2 = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(j1, j2);
        assert!(j1.contains("\"dimension\":4"));
    }
}
