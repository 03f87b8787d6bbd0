//! Characters of the full affine Hecke algebra and the supersingular
//! dictionary.
//!
//! A character is a pair (lambda, I): a torus character lambda and a set I
//! of simple affine reflections, nonempty only for trivial lambda. The
//! value on each reflection operator is not hardcoded: it is resolved as
//! the nonzero root of the quadratic relation x^2 = -chi(e_1) x, which
//! forces the value 1 for trivial lambda with the unnormalized torus sum
//! e_1. Sign conventions drift between sources; the relation is treated as
//! ground truth and every enumerated character is audited against it.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::algebra::{AlgebraError, BasisLabel, OmegaCharacter, SCAlgebra};
use crate::linalg::PrimeField;
use crate::rep::AlgRep;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("support {support} requires a trivial torus character, got exponent {exponent}")]
    SupportRequiresTrivialLambda {
        support: SimpleSubset,
        exponent: u64,
    },
    #[error("restriction violates the relations of the target algebra")]
    RestrictionAudit,
    #[error("character fails the multiplicativity audit: {0}")]
    MultiplicativityAudit(String),
    #[error("supersingular index r = {r} lies outside 0..={max}")]
    ROutOfRange { r: u64, max: u64 },
    #[error("supersingular side index must be 0 or 1, got {0}")]
    BadSide(u8),
}

/// A subset of the two simple affine reflections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimpleSubset {
    pub s0: bool,
    pub s1: bool,
}

impl SimpleSubset {
    pub const EMPTY: SimpleSubset = SimpleSubset {
        s0: false,
        s1: false,
    };
    pub const S0: SimpleSubset = SimpleSubset {
        s0: true,
        s1: false,
    };
    pub const S1: SimpleSubset = SimpleSubset {
        s0: false,
        s1: true,
    };
    pub const BOTH: SimpleSubset = SimpleSubset { s0: true, s1: true };

    pub const ALL: [SimpleSubset; 4] = [Self::EMPTY, Self::S0, Self::S1, Self::BOTH];

    pub fn contains(&self, i: u8) -> bool {
        match i {
            0 => self.s0,
            1 => self.s1,
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.s0 && !self.s1
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.s0 {
            v.push("s0");
        }
        if self.s1 {
            v.push("s1");
        }
        v
    }
}

impl fmt::Display for SimpleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}

/// Element of the affine Weyl group W, written theta^k or s0 theta^k. The
/// length function is l(theta^k) = |2k|, l(s0 theta^k) = |1 - 2k|; the two
/// length-one elements are s0 and s1 = s0 theta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylElem {
    pub reflection: bool,
    pub translation: i64,
}

impl WeylElem {
    pub const IDENTITY: WeylElem = WeylElem {
        reflection: false,
        translation: 0,
    };
    pub const S0: WeylElem = WeylElem {
        reflection: true,
        translation: 0,
    };
    pub const S1: WeylElem = WeylElem {
        reflection: true,
        translation: 1,
    };
    pub const THETA: WeylElem = WeylElem {
        reflection: false,
        translation: 1,
    };

    pub fn length(&self) -> u64 {
        if self.reflection {
            (1 - 2 * self.translation).unsigned_abs()
        } else {
            (2 * self.translation).unsigned_abs()
        }
    }

    /// Group law, using theta^k s0 = s0 theta^{-k}.
    pub fn mul(&self, other: &WeylElem) -> WeylElem {
        if other.reflection {
            WeylElem {
                reflection: !self.reflection,
                translation: other.translation - self.translation,
            }
        } else {
            WeylElem {
                reflection: self.reflection,
                translation: self.translation + other.translation,
            }
        }
    }

    /// Occurrences of (s0, s1) in a reduced word for this element.
    pub fn simple_letters(&self) -> (u64, u64) {
        let k = self.translation;
        if self.reflection {
            if k >= 1 {
                (k as u64 - 1, k as u64)
            } else {
                (k.unsigned_abs() + 1, k.unsigned_abs())
            }
        } else {
            (k.unsigned_abs(), k.unsigned_abs())
        }
    }

    /// Membership in the standard subgroup generated by the subset.
    pub fn in_subgroup(&self, i: SimpleSubset) -> bool {
        match (i.s0, i.s1) {
            (false, false) => *self == Self::IDENTITY,
            (true, false) => *self == Self::IDENTITY || *self == Self::S0,
            (false, true) => *self == Self::IDENTITY || *self == Self::S1,
            (true, true) => true,
        }
    }
}

/// The ambient Weyl data: generators, translation, the length function and
/// the finite standard subgroups.
#[derive(Debug, Clone, Copy)]
pub struct WeylData;

impl WeylData {
    pub fn s(&self, i: u8) -> WeylElem {
        if i == 0 {
            WeylElem::S0
        } else {
            WeylElem::S1
        }
    }

    pub fn theta(&self) -> WeylElem {
        WeylElem::THETA
    }

    /// Order of the standard subgroup, None for the infinite full group.
    pub fn subgroup_order(&self, i: SimpleSubset) -> Option<u64> {
        match (i.s0, i.s1) {
            (false, false) => Some(1),
            (true, false) | (false, true) => Some(2),
            (true, true) => None,
        }
    }
}

/// Element of the extended group: a Weyl part and a torus part, with
/// reflections acting on the torus by inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtendedWeylElem {
    pub w: WeylElem,
    pub t: u64,
}

impl ExtendedWeylElem {
    pub fn mul(&self, other: &ExtendedWeylElem, field: &PrimeField) -> ExtendedWeylElem {
        let conjugated = if other.w.reflection {
            field.inv(self.t)
        } else {
            self.t
        };
        ExtendedWeylElem {
            w: self.w.mul(&other.w),
            t: field.mul(conjugated, other.t),
        }
    }

    pub fn length(&self) -> u64 {
        self.w.length()
    }
}

/// A character of the full affine Hecke algebra: torus character, support,
/// and the reflection values resolved from the quadratic relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeCharacter {
    p: u64,
    lambda: OmegaCharacter,
    support: SimpleSubset,
    s_values: [u64; 2],
}

impl HeckeCharacter {
    pub fn new(
        field: &PrimeField,
        lambda_exponent: u64,
        support: SimpleSubset,
    ) -> Result<HeckeCharacter, CharacterError> {
        let lambda = OmegaCharacter::from_exponent(field, lambda_exponent);
        if !lambda.is_trivial() && !support.is_empty() {
            return Err(CharacterError::SupportRequiresTrivialLambda {
                support,
                exponent: lambda.exponent(),
            });
        }
        // chi(e_1) with the unnormalized torus sum.
        let mut e1 = 0;
        for t in field.units() {
            e1 = field.add(e1, lambda.eval(t));
        }
        // Nonzero root of x^2 = -chi(e_1) x for supported reflections.
        let nonzero_root = field.neg(e1);
        let value = |in_support: bool| if in_support { nonzero_root } else { 0 };
        Ok(HeckeCharacter {
            p: field.p(),
            lambda,
            support,
            s_values: [value(support.s0), value(support.s1)],
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> &OmegaCharacter {
        &self.lambda
    }

    pub fn support(&self) -> SimpleSubset {
        self.support
    }

    pub fn s_value(&self, i: u8) -> u64 {
        self.s_values[i as usize]
    }

    fn field(&self) -> PrimeField {
        PrimeField::new_allowing_p3(self.p).expect("validated at construction")
    }

    /// chi(e_1) for the unnormalized torus sum.
    pub fn e1_value(&self) -> u64 {
        let field = self.field();
        let mut acc = 0;
        for t in field.units() {
            acc = field.add(acc, self.lambda.eval(t));
        }
        acc
    }

    /// Value on the double-coset operator indexed by an extended Weyl
    /// element: zero off the standard subgroup of the support, otherwise
    /// lambda on the torus part times the resolved reflection values along
    /// a reduced word.
    pub fn eval(&self, g: &ExtendedWeylElem) -> u64 {
        if !g.w.in_subgroup(self.support) {
            return 0;
        }
        let field = self.field();
        let (a, b) = g.w.simple_letters();
        let refl = field.mul(
            field.pow(self.s_values[0], a),
            field.pow(self.s_values[1], b),
        );
        field.mul(self.lambda.eval(g.t), refl)
    }

    /// The canonical W_0-orbit of the torus exponent: the block this
    /// character lives in, labeled by the smaller exponent.
    pub fn block(&self) -> u64 {
        let n = self.p - 1;
        let r = self.lambda.exponent();
        r.min((n - r) % n)
    }

    /// Multiplicativity audit against the relations: torus group law, the
    /// reflection commutation rule, the quadratic relation, and sampled
    /// length-additive products in the extended group.
    pub fn audit(&self) -> Result<(), CharacterError> {
        let field = self.field();
        // Torus group law.
        for t1 in field.units() {
            for t2 in field.units() {
                let lhs = self.lambda.eval(field.mul(t1, t2));
                let rhs = field.mul(self.lambda.eval(t1), self.lambda.eval(t2));
                if lhs != rhs {
                    return Err(CharacterError::MultiplicativityAudit(format!(
                        "torus law fails at ({t1},{t2})"
                    )));
                }
            }
        }
        // T_t T_{s_i} = T_{s_i} T_{t^{-1}}.
        for i in 0..2u8 {
            let v = self.s_values[i as usize];
            for t in field.units() {
                if field.mul(self.lambda.eval(t), v) != field.mul(v, self.lambda.eval(field.inv(t)))
                {
                    return Err(CharacterError::MultiplicativityAudit(format!(
                        "reflection commutation fails at s{i}, t={t}"
                    )));
                }
            }
            // T_{s_i}^2 = -e_1 T_{s_i}.
            let lhs = field.mul(v, v);
            let rhs = field.mul(field.neg(self.e1_value()), v);
            if lhs != rhs {
                return Err(CharacterError::MultiplicativityAudit(format!(
                    "quadratic relation fails at s{i}"
                )));
            }
        }
        // Sampled length-additive products T_w T_v = T_{wv} in the extended
        // group: chi must be multiplicative on them.
        let window: Vec<WeylElem> = (-3..=3)
            .flat_map(|k| {
                [
                    WeylElem {
                        reflection: false,
                        translation: k,
                    },
                    WeylElem {
                        reflection: true,
                        translation: k,
                    },
                ]
            })
            .collect();
        for w1 in &window {
            for w2 in &window {
                if w1.length() + w2.length() != w1.mul(w2).length() {
                    continue;
                }
                for t1 in field.units() {
                    for t2 in [1, field.p() - 1] {
                        let g1 = ExtendedWeylElem { w: *w1, t: t1 };
                        let g2 = ExtendedWeylElem { w: *w2, t: t2 };
                        let prod = g1.mul(&g2, &field);
                        let lhs = self.eval(&prod);
                        let rhs = field.mul(self.eval(&g1), self.eval(&g2));
                        if lhs != rhs {
                            return Err(CharacterError::MultiplicativityAudit(format!(
                                "length-additive product fails at ({w1:?},{t1}) ({w2:?},{t2})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Restriction to a built edge or vertex algebra as a one-dimensional
    /// module; the target is read off the algebra's own basis labels. The
    /// result is audited against the target's relations.
    pub fn restrict(&self, algebra: &Arc<SCAlgebra>) -> Result<AlgRep, CharacterError> {
        assert_eq!(algebra.p(), self.p, "algebra built for a different prime");
        let field = *algebra.field();
        let values: Vec<u64> = algebra
            .basis()
            .iter()
            .map(|label| match label {
                BasisLabel::Torus(t) => self.lambda.eval(*t),
                BasisLabel::TorusTimesS(t, v) => {
                    field.mul(self.s_values[v.index() as usize], self.lambda.eval(*t))
                }
            })
            .collect();
        let rep = AlgRep::one_dimensional(Arc::clone(algebra), &values);
        if rep.verify().is_err() {
            return Err(CharacterError::RestrictionAudit);
        }
        Ok(rep)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "lambda_exponent": self.lambda.exponent(),
            "support": self.support.names(),
            "resolved_s_values": self.s_values,
        })
    }
}

impl fmt::Display for HeckeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            write!(f, "chi({},{{}})", self.lambda.exponent())
        } else {
            write!(f, "chi({},{})", self.lambda.exponent(), self.support)
        }
    }
}

/// All characters of the full algebra for the given prime: the trivial
/// torus character with each of the four supports, then each nontrivial
/// exponent with empty support. Total p + 2, each one audited.
pub fn enumerate_characters(field: &PrimeField) -> Vec<HeckeCharacter> {
    let mut out = Vec::new();
    for support in SimpleSubset::ALL {
        out.push(
            HeckeCharacter::new(field, 0, support).expect("trivial lambda admits any support"),
        );
    }
    for r in 1..field.p() - 1 {
        out.push(HeckeCharacter::new(field, r, SimpleSubset::EMPTY).expect("empty support"));
    }
    out
}

/// A supersingular module: the invariants of pi_{i,r}, which the dictionary
/// resolves to a character of the full algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupersingularModule {
    pub side: u8,
    pub weight: u64,
    pub character: HeckeCharacter,
}

impl SupersingularModule {
    pub fn label(&self) -> String {
        format!("M({},{})", self.side, self.weight)
    }
}

impl fmt::Display for SupersingularModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// The dictionary (i, r) -> character for i in {0,1}, 0 <= r <= p-1.
#[derive(Debug, Clone)]
pub struct SupersingularTable {
    p: u64,
    entries: Vec<SupersingularModule>,
}

impl SupersingularTable {
    pub fn new(field: &PrimeField) -> SupersingularTable {
        let p = field.p();
        let mut entries = Vec::with_capacity(2 * p as usize);
        for side in 0..2u8 {
            for r in 0..p {
                let character = resolve_supersingular(field, side, r);
                entries.push(SupersingularModule {
                    side,
                    weight: r,
                    character,
                });
            }
        }
        SupersingularTable { p, entries }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, side: u8, r: u64) -> Result<&SupersingularModule, CharacterError> {
        if side > 1 {
            return Err(CharacterError::BadSide(side));
        }
        if r > self.p - 1 {
            return Err(CharacterError::ROutOfRange { r, max: self.p - 1 });
        }
        Ok(&self.entries[side as usize * self.p as usize + r as usize])
    }

    pub fn entries(&self) -> &[SupersingularModule] {
        &self.entries
    }

    /// The canonical distinct modules: both sides for 0 <= r < (p-1)/2 and
    /// the single self-dual module at r = (p-1)/2.
    pub fn canonical_modules(&self) -> Vec<&SupersingularModule> {
        let half = (self.p - 1) / 2;
        let mut out = Vec::new();
        for r in 0..=half {
            out.push(self.get(0, r).expect("in range"));
            if r < half {
                out.push(self.get(1, r).expect("in range"));
            }
        }
        out
    }
}

fn resolve_supersingular(field: &PrimeField, side: u8, r: u64) -> HeckeCharacter {
    let p = field.p();
    debug_assert!(side <= 1 && r < p);
    if r != 0 && r != p - 1 {
        let exponent = if side == 0 { r } else { p - 1 - r };
        HeckeCharacter::new(field, exponent, SimpleSubset::EMPTY).expect("valid pair")
    } else {
        // The two non-supersingular trivial-lambda characters have support
        // {} and {s0, s1}; the dictionary assigns the singleton supports.
        let support = match (side, r == 0) {
            (1, true) | (0, false) => SimpleSubset::S0,
            (0, true) | (1, false) => SimpleSubset::S1,
            _ => unreachable!(),
        };
        HeckeCharacter::new(field, 0, support).expect("trivial lambda")
    }
}

/// Hom over the full algebra between two supersingular characters: 1 when
/// the resolved characters agree on the generators, else 0.
pub fn hom_dim_full_algebra(a: &SupersingularModule, b: &SupersingularModule) -> usize {
    assert_eq!(
        a.character.p(),
        b.character.p(),
        "modules for different primes"
    );
    usize::from(a.character == b.character)
}
