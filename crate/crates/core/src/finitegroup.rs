//! Concrete realization of the vertex Hecke algebra as the endomorphism
//! algebra of the permutation module F_p[SL2(F_p)/U], where U is the upper
//! unitriangular subgroup.
//!
//! Cosets gU are in bijection with nonzero first columns, so the space has
//! p^2 - 1 points. Convolution by the indicator of a double coset UwU gives
//! one operator per double coset; the double cosets are represented by the
//! torus elements t and the products s*t, 2(p-1) in all. The commutant of
//! the group action is computed from the equations X_{ga,gb} = X_{a,b}: for
//! permutation generators every equation identifies two unknowns, so the
//! solution space is spanned by the indicators of the orbits of the
//! diagonal action on coset pairs.

use serde::Serialize;
use serde_json::json;

use crate::algebra::{BasisLabel, SCAlgebra, Vertex};
use crate::linalg::{FpMatrix, PrimeField};

/// An element of SL2(F_p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    p: u64,
    /// Row-major entries (a, b, c, d).
    m: [u64; 4],
}

impl GroupElement {
    pub fn new(field: &PrimeField, entries: [u64; 4]) -> Option<GroupElement> {
        let p = field.p();
        let m = [
            entries[0] % p,
            entries[1] % p,
            entries[2] % p,
            entries[3] % p,
        ];
        let det = field.sub(field.mul(m[0], m[3]), field.mul(m[1], m[2]));
        (det == 1).then_some(GroupElement { p, m })
    }

    pub fn identity(field: &PrimeField) -> GroupElement {
        GroupElement {
            p: field.p(),
            m: [1, 0, 0, 1],
        }
    }

    /// Upper unitriangular element with the given corner entry.
    pub fn unipotent(field: &PrimeField, x: u64) -> GroupElement {
        GroupElement {
            p: field.p(),
            m: [1, x % field.p(), 0, 1],
        }
    }

    /// Diagonal torus element diag(a, a^{-1}).
    pub fn torus(field: &PrimeField, a: u64) -> GroupElement {
        GroupElement {
            p: field.p(),
            m: [a % field.p(), 0, 0, field.inv(a)],
        }
    }

    /// The Weyl representative `[[0, 1], [-1, 0]]`.
    pub fn weyl(field: &PrimeField) -> GroupElement {
        GroupElement {
            p: field.p(),
            m: [0, 1, field.p() - 1, 0],
        }
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.p, other.p);
        let f = PrimeField::new_allowing_p3(self.p).expect("validated modulus");
        let a = &self.m;
        let b = &other.m;
        GroupElement {
            p: self.p,
            m: [
                f.add(f.mul(a[0], b[0]), f.mul(a[1], b[2])),
                f.add(f.mul(a[0], b[1]), f.mul(a[1], b[3])),
                f.add(f.mul(a[2], b[0]), f.mul(a[3], b[2])),
                f.add(f.mul(a[2], b[1]), f.mul(a[3], b[3])),
            ],
        }
    }

    pub fn entries(&self) -> [u64; 4] {
        self.m
    }

    fn first_column(&self) -> (u64, u64) {
        (self.m[0], self.m[2])
    }
}

/// The coset space SL2(F_p)/U with canonical representatives and an index
/// keyed by the first column.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    field: PrimeField,
    reps: Vec<GroupElement>,
    /// Maps a*p + c to the coset index of first column (a, c).
    col_index: Vec<usize>,
}

impl CosetSpace {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, i: usize) -> &GroupElement {
        &self.reps[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> usize {
        let (a, c) = g.first_column();
        let idx = self.col_index[(a * self.field.p() + c) as usize];
        debug_assert!(idx != usize::MAX, "zero column cannot occur in SL2");
        idx
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&GroupElement::identity(&self.field))
    }
}

/// Enumerates all p(p^2-1) group elements, partitions them into the right
/// cosets of U, and fixes the column-echelon representative of each coset:
/// [[a, 0], [c, a^{-1}]] when a != 0, else [[0, -c^{-1}], [c, 0]].
pub fn build_coset_space(field: &PrimeField) -> CosetSpace {
    let p = field.p();
    let mut col_index = vec![usize::MAX; (p * p) as usize];
    let mut reps = Vec::with_capacity((p * p - 1) as usize);
    for a in 0..p {
        for c in 0..p {
            if a == 0 && c == 0 {
                continue;
            }
            let rep = if a != 0 {
                GroupElement::new(field, [a, 0, c, field.inv(a)])
            } else {
                GroupElement::new(field, [0, field.neg(field.inv(c)), c, 0])
            }
            .expect("canonical representative has determinant 1");
            col_index[(a * p + c) as usize] = reps.len();
            reps.push(rep);
        }
    }
    let space = CosetSpace {
        field: *field,
        reps,
        col_index,
    };

    // Audit pass over the whole group: each coset collects exactly p
    // elements and contains its canonical representative.
    let mut counts = vec![0u64; space.size()];
    let mut total = 0u64;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if let Some(g) = GroupElement::new(field, [a, b, c, d]) {
                        counts[space.index_of(&g)] += 1;
                        total += 1;
                    }
                }
            }
        }
    }
    assert_eq!(total, p * (p * p - 1), "group order");
    assert!(
        counts.iter().all(|&n| n == p),
        "every coset of U has p elements"
    );
    space
}

/// Label of a U-double coset: a torus element t or a Weyl-times-torus
/// element s*t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DoubleCosetLabel {
    Torus(u64),
    WeylTorus(u64),
}

impl DoubleCosetLabel {
    pub fn representative(&self, field: &PrimeField) -> GroupElement {
        match self {
            DoubleCosetLabel::Torus(t) => GroupElement::torus(field, *t),
            DoubleCosetLabel::WeylTorus(t) => {
                GroupElement::weyl(field).mul(&GroupElement::torus(field, *t))
            }
        }
    }

    /// All 2(p-1) labels in the order matching the vertex algebra basis.
    pub fn all(field: &PrimeField) -> Vec<DoubleCosetLabel> {
        let mut v: Vec<DoubleCosetLabel> = field.units().map(DoubleCosetLabel::Torus).collect();
        v.extend(field.units().map(DoubleCosetLabel::WeylTorus));
        v
    }

    pub fn is_reflection(&self) -> bool {
        matches!(self, DoubleCosetLabel::WeylTorus(_))
    }
}

/// The distinct cosets xU contained in UwU, as coset indices.
fn double_coset_support(space: &CosetSpace, label: DoubleCosetLabel) -> Vec<usize> {
    let field = space.field();
    let w = label.representative(field);
    let mut support: Vec<usize> = (0..field.p())
        .map(|x| space.index_of(&GroupElement::unipotent(field, x).mul(&w)))
        .collect();
    support.sort_unstable();
    support.dedup();
    support
}

/// The convolution operator attached to a double coset, as a matrix on the
/// permutation module: the column of a coset gU has a 1 in each row g x U
/// for xU inside UwU.
pub fn hecke_operator(space: &CosetSpace, label: DoubleCosetLabel) -> FpMatrix {
    let field = *space.field();
    let n = space.size();
    let support = double_coset_support(space, label);
    let mut m = FpMatrix::zeros(&field, n, n);
    for j in 0..n {
        let g = space.rep(j);
        for &x in &support {
            let row = space.index_of(&g.mul(space.rep(x)));
            let cur = m.get(row, j);
            m.set(row, j, field.add(cur, 1));
        }
    }
    m
}

/// Applies the operator (given by its double-coset support) to a vector in
/// the permutation module.
fn apply_operator(space: &CosetSpace, support: &[usize], v: &[u64]) -> Vec<u64> {
    let field = space.field();
    let mut out = vec![0u64; space.size()];
    for (idx, &coeff) in v.iter().enumerate() {
        if coeff == 0 {
            continue;
        }
        let g = space.rep(idx);
        for &x in support {
            let target = space.index_of(&g.mul(space.rep(x)));
            out[target] = field.add(out[target], coeff);
        }
    }
    out
}

/// Permutation of coset indices induced by left multiplication.
pub fn left_translation(space: &CosetSpace, g: &GroupElement) -> Vec<usize> {
    (0..space.size())
        .map(|i| space.index_of(&g.mul(space.rep(i))))
        .collect()
}

/// Dimension of the commutant of the group action, solved from the
/// commutation equations with the two generators `u = [[1,1],[0,1]]` and the
/// Weyl element. Each equation X_{ga, gb} = X_{a, b} merges two unknowns,
/// so the dimension is the number of orbits of the diagonal action on coset
/// pairs.
pub fn commutant_dimension(space: &CosetSpace) -> usize {
    let field = space.field();
    let n = space.size();
    let gens = [
        left_translation(space, &GroupElement::unipotent(field, 1)),
        left_translation(space, &GroupElement::weyl(field)),
    ];
    let mut seen = vec![false; n * n];
    let mut orbits = 0;
    let mut stack = Vec::new();
    for start in 0..n * n {
        if seen[start] {
            continue;
        }
        orbits += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(cell) = stack.pop() {
            let (a, b) = (cell / n, cell % n);
            for perm in &gens {
                let next = perm[a] * n + perm[b];
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
    }
    orbits
}

/// One product comparison in the endomorphism match.
#[derive(Debug, Clone, Serialize)]
pub struct ProductCheck {
    pub left: usize,
    pub right: usize,
    pub matched: bool,
}

/// Result of cross-validating the presented vertex algebra against the
/// convolution operators on the permutation module.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub p: u64,
    pub vertex: Vertex,
    pub commutant_dim: usize,
    pub expected_dim: usize,
    /// Sign on the reflection-block correspondence T_{s t} <-> sign * phi_{s t}.
    pub reflection_sign: i64,
    pub products: Vec<ProductCheck>,
    pub mismatches: Vec<(usize, usize)>,
    pub matched: bool,
}

impl MatchReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "vertex": self.vertex.index(),
            "commutant_dimension": self.commutant_dim,
            "expected_dimension": self.expected_dim,
            "reflection_sign": self.reflection_sign,
            "products": self.products.iter().map(|c| json!({
                "left": c.left, "right": c.right, "matched": c.matched,
            })).collect::<Vec<_>>(),
            "matched": self.matched,
        })
    }
}

/// Computes the coefficients of phi_a . phi_b (apply a, then b) in the
/// operator basis by expanding the image of the identity coset, checking
/// that the image is constant on every double coset. Returns None when the
/// image is not in the span, which would contradict equivariance.
fn operator_product_coeffs(
    space: &CosetSpace,
    supports: &[Vec<usize>],
    a: usize,
    b: usize,
) -> Option<Vec<u64>> {
    let mut v = vec![0u64; space.size()];
    v[space.identity_index()] = 1;
    let v = apply_operator(space, &supports[a], &v);
    let v = apply_operator(space, &supports[b], &v);
    let mut coeffs = vec![0u64; supports.len()];
    for (w, support) in supports.iter().enumerate() {
        let value = v[support[0]];
        if support.iter().any(|&idx| v[idx] != value) {
            return None;
        }
        coeffs[w] = value;
    }
    Some(coeffs)
}

fn run_match(
    space: &CosetSpace,
    algebra: &SCAlgebra,
    supports: &[Vec<usize>],
    labels: &[DoubleCosetLabel],
    sign: i64,
) -> (Vec<ProductCheck>, Vec<(usize, usize)>) {
    let field = space.field();
    let d = labels.len();
    let refl = |i: usize| labels[i].is_reflection() as u64;
    let adjust = |i: usize, j: usize, w: usize, c: u64| {
        if sign == -1 && (refl(i) + refl(j) + refl(w)) % 2 == 1 {
            field.neg(c)
        } else {
            c
        }
    };
    let mut products = Vec::with_capacity(d * d);
    let mut mismatches = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let matched = match operator_product_coeffs(space, supports, i, j) {
                Some(coeffs) => {
                    (0..d).all(|w| adjust(i, j, w, algebra.product_coeffs(i, j)[w]) == coeffs[w])
                }
                None => false,
            };
            if !matched {
                mismatches.push((i, j));
            }
            products.push(ProductCheck {
                left: i,
                right: j,
                matched,
            });
        }
    }
    (products, mismatches)
}

/// Cross-validates `algebra` (normally the built vertex algebra) against
/// the convolution-operator algebra: checks the commutant dimension and all
/// basis products under the label correspondence T_t <-> phi_t,
/// T_{s t} <-> sign * phi_{s t}, resolving the sign automatically.
pub fn endomorphism_match_against(
    space: &CosetSpace,
    algebra: &SCAlgebra,
    vertex: Vertex,
) -> MatchReport {
    let field = space.field();
    let expected_dim = 2 * (field.p() - 1) as usize;
    let commutant_dim = commutant_dimension(space);
    let labels = DoubleCosetLabel::all(field);
    debug_assert_eq!(labels.len(), algebra.dim());
    debug_assert!(labels
        .iter()
        .zip(algebra.basis())
        .all(|(l, b)| match (l, b) {
            (DoubleCosetLabel::Torus(t), BasisLabel::Torus(u)) => t == u,
            (DoubleCosetLabel::WeylTorus(t), BasisLabel::TorusTimesS(u, _)) => t == u,
            _ => false,
        }));
    let supports: Vec<Vec<usize>> = labels
        .iter()
        .map(|&l| double_coset_support(space, l))
        .collect();

    let (mut reflection_sign, mut products, mut mismatches) = (1i64, Vec::new(), Vec::new());
    let mut first = true;
    for sign in [1i64, -1] {
        let (p_run, m_run) = run_match(space, algebra, &supports, &labels, sign);
        if first || m_run.len() < mismatches.len() {
            (reflection_sign, products, mismatches) = (sign, p_run, m_run);
            first = false;
        }
        if mismatches.is_empty() {
            break;
        }
    }
    let matched = commutant_dim == expected_dim && mismatches.is_empty();
    MatchReport {
        p: field.p(),
        vertex,
        commutant_dim,
        expected_dim,
        reflection_sign,
        products,
        mismatches,
        matched,
    }
}

/// Builds everything from scratch for the given prime and vertex and runs
/// the match.
pub fn endomorphism_match(field: &PrimeField, vertex: Vertex) -> MatchReport {
    let space = build_coset_space(field);
    let algebra = crate::algebra::build_vertex_algebra(field, vertex);
    endomorphism_match_against(&space, &algebra, vertex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_vertex_algebra;
    use crate::linalg::span_rank;

    fn field(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn coset_counts() {
        assert_eq!(build_coset_space(&field(5)).size(), 24);
        assert_eq!(build_coset_space(&field(7)).size(), 48);
    }

    #[test]
    fn identity_coset_fixed_by_unipotent_translations() {
        let k = field(5);
        let space = build_coset_space(&k);
        let id = space.identity_index();
        for x in 0..5 {
            let u = GroupElement::unipotent(&k, x);
            assert_eq!(space.index_of(&u.mul(space.rep(id))), id);
        }
    }

    #[test]
    fn permutation_action_is_a_homomorphism_exhaustively_p5() {
        let k = field(5);
        let space = build_coset_space(&k);
        let mut elements = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    for d in 0..5 {
                        if let Some(g) = GroupElement::new(&k, [a, b, c, d]) {
                            elements.push(g);
                        }
                    }
                }
            }
        }
        assert_eq!(elements.len(), 120);
        let perms: Vec<Vec<usize>> = elements
            .iter()
            .map(|g| left_translation(&space, g))
            .collect();
        for (gi, g) in elements.iter().enumerate() {
            for (hi, h) in elements.iter().enumerate() {
                let gh = left_translation(&space, &g.mul(h));
                let composed: Vec<usize> =
                    (0..space.size()).map(|i| perms[gi][perms[hi][i]]).collect();
                assert_eq!(gh, composed);
            }
        }
    }

    #[test]
    fn identity_torus_operator_is_the_identity_matrix() {
        let k = field(5);
        let space = build_coset_space(&k);
        let op = hecke_operator(&space, DoubleCosetLabel::Torus(1));
        assert_eq!(op, FpMatrix::identity(&k, space.size()));
    }

    #[test]
    fn column_sums_are_double_coset_sizes_mod_p() {
        let k = field(7);
        let space = build_coset_space(&k);
        for label in DoubleCosetLabel::all(&k) {
            let op = hecke_operator(&space, label);
            let expected = if label.is_reflection() { 0 } else { 1 };
            for j in 0..space.size() {
                let mut sum = 0;
                for i in 0..space.size() {
                    sum = k.add(sum, op.get(i, j));
                }
                assert_eq!(sum, expected, "column {j} of {label:?}");
            }
        }
    }

    #[test]
    fn double_coset_supports_partition_the_cosets() {
        let k = field(7);
        let space = build_coset_space(&k);
        let mut seen = vec![false; space.size()];
        for label in DoubleCosetLabel::all(&k) {
            for idx in double_coset_support(&space, label) {
                assert!(!seen[idx], "supports must be disjoint");
                seen[idx] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn operators_span_the_full_commutant_p5() {
        let k = field(5);
        let space = build_coset_space(&k);
        let n = space.size();
        let rows: Vec<Vec<u64>> = DoubleCosetLabel::all(&k)
            .into_iter()
            .map(|l| {
                let m = hecke_operator(&space, l);
                let mut flat = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        flat.push(m.get(i, j));
                    }
                }
                flat
            })
            .collect();
        assert_eq!(span_rank(&k, n * n, &rows), 8);
        assert_eq!(commutant_dimension(&space), 8);
    }

    #[test]
    fn operators_commute_with_the_group_action() {
        let k = field(5);
        let space = build_coset_space(&k);
        for gen in [GroupElement::unipotent(&k, 1), GroupElement::weyl(&k)] {
            let perm = left_translation(&space, &gen);
            let pmat = FpMatrix::from_fn(&k, space.size(), space.size(), |i, j| {
                u64::from(perm[j] == i)
            });
            for label in DoubleCosetLabel::all(&k) {
                let op = hecke_operator(&space, label);
                assert_eq!(op.mul(&pmat), pmat.mul(&op), "{label:?} vs {gen:?}");
            }
        }
    }

    #[test]
    fn commutant_dimension_is_twice_the_units() {
        for p in [5, 7] {
            let k = field(p);
            let space = build_coset_space(&k);
            assert_eq!(commutant_dimension(&space) as u64, 2 * (p - 1));
        }
    }

    #[test]
    fn quadratic_relation_holds_concretely_up_to_the_sign_twist() {
        // As matrices, phi_s . phi_s = +e_1 phi_s with indicator operators;
        // the presented relation T_s^2 = -e_1 T_s is matched by sending
        // T_{s t} to -phi_{s t}, which the report records as sign -1.
        let k = field(5);
        let space = build_coset_space(&k);
        let phi_s = hecke_operator(&space, DoubleCosetLabel::WeylTorus(1));
        // Product "apply s then s" is the matrix square.
        let square = phi_s.mul(&phi_s);
        let mut sum = FpMatrix::zeros(&k, space.size(), space.size());
        for t in k.units() {
            sum = sum.add(&hecke_operator(&space, DoubleCosetLabel::WeylTorus(t)));
        }
        assert_eq!(square, sum, "phi_s^2 equals +sum of reflection operators");
        // Under the sign twist the presented relation is recovered exactly:
        // (-phi_s)^2 = phi_s^2 = sum = -(sum of -phi_{s t}).
        let report = endomorphism_match(&k, Vertex::V0);
        assert_eq!(report.reflection_sign, -1);
        assert!(report.matched);
    }

    #[test]
    fn full_match_p5_all_products() {
        let k = field(5);
        let report = endomorphism_match(&k, Vertex::V0);
        assert_eq!(report.commutant_dim, 8);
        assert_eq!(report.products.len(), 64);
        assert!(report.products.iter().all(|c| c.matched));
        assert!(report.matched);
    }

    #[test]
    fn match_products_agree_with_full_matrix_arithmetic_p5() {
        // Independent route: multiply the operator matrices outright and
        // expand in the operator basis.
        let k = field(5);
        let space = build_coset_space(&k);
        let labels = DoubleCosetLabel::all(&k);
        let ops: Vec<FpMatrix> = labels.iter().map(|&l| hecke_operator(&space, l)).collect();
        let supports: Vec<Vec<usize>> = labels
            .iter()
            .map(|&l| double_coset_support(&space, l))
            .collect();
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                // Right-module composition: apply i, then j.
                let product = ops[j].mul(&ops[i]);
                let coeffs = operator_product_coeffs(&space, &supports, i, j).unwrap();
                let mut expansion = FpMatrix::zeros(&k, space.size(), space.size());
                for (w, &c) in coeffs.iter().enumerate() {
                    if c != 0 {
                        expansion = expansion.add(&ops[w].scale(c));
                    }
                }
                assert_eq!(product, expansion, "product ({i},{j})");
            }
        }
    }

    #[test]
    fn perturbed_algebra_is_reported_as_mismatch() {
        let k = field(5);
        let space = build_coset_space(&k);
        let algebra = build_vertex_algebra(&k, Vertex::V0).with_perturbed_constant(0, 1, 2, 1);
        let report = endomorphism_match_against(&space, &algebra, Vertex::V0);
        assert!(!report.matched);
        assert!(!report.mismatches.is_empty());
    }

    #[test]
    fn commutant_dimension_p7() {
        let k = field(7);
        let report = endomorphism_match(&k, Vertex::V1);
        assert_eq!(report.commutant_dim, 12);
        assert!(report.matched);
    }
}
