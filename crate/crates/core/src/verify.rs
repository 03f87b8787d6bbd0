//! The audit runner behind the `verify` command: every structural check
//! the toolkit can run for one prime, each reporting pass/fail with a
//! witness on failure.

use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::algebra::{
    block_decomposition, build_edge_algebra, build_vertex_algebra, AlgebraElement, OmegaCharacter,
    SCAlgebra, Vertex,
};
use crate::assembler::{full_ext_table, gs_ledger, vertex_ext_rule, HeckeContext, PairClass};
use crate::characters::enumerate_characters;
use crate::finitegroup::{build_coset_space, endomorphism_match_against};
use crate::linalg::{FpMatrix, PrimeField, Solution};
use crate::rep::ext1_space;

#[derive(Debug, Clone)]
pub struct AuditOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

impl AuditOutcome {
    fn pass(name: &'static str) -> AuditOutcome {
        AuditOutcome {
            name,
            passed: true,
            witness: None,
        }
    }

    fn fail(name: &'static str, witness: String) -> AuditOutcome {
        AuditOutcome {
            name,
            passed: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub p: u64,
    pub outcomes: Vec<AuditOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&AuditOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "audits": self.outcomes.iter().map(|o| json!({
                "name": o.name,
                "passed": o.passed,
                "witness": o.witness,
            })).collect::<Vec<_>>(),
            "all_passed": self.all_passed(),
        })
    }
}

/// Options for the audit run; the fault hook perturbs one structure
/// constant of the vertex-0 algebra before auditing, as a negative control.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub inject_fault: Option<(usize, usize, usize)>,
}

fn audit_associativity(algebras: &[(&str, &SCAlgebra)]) -> AuditOutcome {
    for (name, a) in algebras {
        if let Err(v) = a.verify_associativity() {
            return AuditOutcome::fail(
                "associativity",
                format!("{name}: triple ({}, {}, {})", v.i, v.j, v.k),
            );
        }
        if !a.verify_unit() {
            return AuditOutcome::fail("associativity", format!("{name}: unit law fails"));
        }
    }
    AuditOutcome::pass("associativity")
}

fn audit_idempotents(field: &PrimeField, algebras: &[(&str, &SCAlgebra)]) -> AuditOutcome {
    let name = "idempotents";
    for (tag, a) in algebras {
        let idems: Vec<AlgebraElement> = (0..field.p() - 1)
            .map(|r| a.torus_idempotent(&OmegaCharacter::from_exponent(field, r)))
            .collect();
        let mut total = AlgebraElement::zero(a.dim());
        for (r, e) in idems.iter().enumerate() {
            if a.mul(e, e) != *e {
                return AuditOutcome::fail(name, format!("{tag}: exponent {r} not idempotent"));
            }
            for (s, e2) in idems.iter().enumerate() {
                if r != s && !a.mul(e, e2).is_zero() {
                    return AuditOutcome::fail(name, format!("{tag}: {r} x {s} not orthogonal"));
                }
            }
            total = a.add(&total, e);
        }
        if total != a.unit() {
            return AuditOutcome::fail(name, format!("{tag}: idempotents do not sum to the unit"));
        }
        for block in block_decomposition(a) {
            if !a.is_central(&block.idempotent) {
                return AuditOutcome::fail(
                    name,
                    format!(
                        "{tag}: block {:?} idempotent not central",
                        block.orbit_exponents
                    ),
                );
            }
        }
    }
    AuditOutcome::pass(name)
}

fn audit_characters(field: &PrimeField) -> AuditOutcome {
    for chi in enumerate_characters(field) {
        if let Err(e) = chi.audit() {
            return AuditOutcome::fail("character-multiplicativity", format!("{chi}: {e}"));
        }
    }
    AuditOutcome::pass("character-multiplicativity")
}

fn audit_edge_semisimplicity(field: &PrimeField) -> AuditOutcome {
    let edge = std::sync::Arc::new(build_edge_algebra(field));
    let reps: Vec<_> = (0..field.p() - 1)
        .map(|r| {
            let values: Vec<u64> = field.units().map(|t| field.pow(t, r)).collect();
            crate::rep::AlgRep::one_dimensional(std::sync::Arc::clone(&edge), &values)
        })
        .collect();
    for (i, m) in reps.iter().enumerate() {
        for (j, n) in reps.iter().enumerate() {
            let dim = ext1_space(m, n).dim;
            if dim != 0 {
                return AuditOutcome::fail(
                    "edge-ext-vanishing",
                    format!("Ext^1 between exponents {i} and {j} has dimension {dim}"),
                );
            }
        }
    }
    AuditOutcome::pass("edge-ext-vanishing")
}

fn audit_endomorphism_match(field: &PrimeField, algebra: &SCAlgebra) -> AuditOutcome {
    let space = build_coset_space(field);
    let report = endomorphism_match_against(&space, algebra, Vertex::V0);
    if report.commutant_dim != report.expected_dim {
        return AuditOutcome::fail(
            "endomorphism-match",
            format!(
                "commutant dimension {} != {}",
                report.commutant_dim, report.expected_dim
            ),
        );
    }
    if let Some(&(i, j)) = report.mismatches.first() {
        return AuditOutcome::fail(
            "endomorphism-match",
            format!("operator product ({i}, {j}) disagrees with the presented constants"),
        );
    }
    AuditOutcome::pass("endomorphism-match")
}

fn audit_six_term(ctx: &HeckeContext) -> AuditOutcome {
    let name = "six-term-invariants";
    let p = ctx.p();
    let table = full_ext_table(ctx);
    for rep in &table.reports {
        if !rep.alternating_sum_vanishes() {
            return AuditOutcome::fail(name, format!("alternating sum fails at {rep:?}"));
        }
        let sym = table.report(rep.target, rep.source);
        if rep.ext_full != sym.ext_full {
            return AuditOutcome::fail(
                name,
                format!("asymmetry at {:?}/{:?}", rep.source, rep.target),
            );
        }
        let relabeled = table.report(
            (1 - rep.source.0, p - 1 - rep.source.1),
            (1 - rep.target.0, p - 1 - rep.target.1),
        );
        if rep.ext_full != relabeled.ext_full {
            return AuditOutcome::fail(name, format!("relabeling breaks at {:?}", rep.source));
        }
        let cls = ctx.classify(rep.source, rep.target).expect("in range");
        if rep.ext_full != cls.expected_ext() {
            return AuditOutcome::fail(
                name,
                format!(
                    "{:?} -> {:?} computed {} expected {}",
                    rep.source,
                    rep.target,
                    rep.ext_full,
                    cls.expected_ext()
                ),
            );
        }
        if cls == PairClass::DistinctBlocks && rep.ext_full != 0 {
            return AuditOutcome::fail(name, format!("off-block entry nonzero at {rep:?}"));
        }
    }
    // Cocycle solves agree with the closed-form rule on every canonical pair.
    for a in ctx.supersingular().canonical_modules() {
        for b in ctx.supersingular().canonical_modules() {
            let rep = ctx
                .six_term_ext((a.side, a.weight), (b.side, b.weight))
                .expect("in range");
            let rule = vertex_ext_rule(
                a.character.lambda().exponent(),
                b.character.lambda().exponent(),
                p,
            );
            if rep.ext_vertex[0] != rule || rep.ext_vertex[1] != rule {
                return AuditOutcome::fail(name, format!("vertex Ext rule fails at {a} {b}"));
            }
        }
    }
    AuditOutcome::pass(name)
}

fn audit_ledger(ctx: &HeckeContext) -> AuditOutcome {
    for row in gs_ledger(ctx) {
        if !row.consistent {
            return AuditOutcome::fail(
                "ledger-verdicts",
                format!(
                    "pair {:?}/{:?} bounds [{}, {}] vs expected {}",
                    row.tau, row.sigma, row.lower, row.upper, row.expected
                ),
            );
        }
    }
    AuditOutcome::pass("ledger-verdicts")
}

fn audit_rank_nullity(field: &PrimeField) -> AuditOutcome {
    let name = "rank-nullity";
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5e_ed);
    let p = field.p();
    for trial in 0..100 {
        let rows = rng.gen_range(1..8);
        let cols = rng.gen_range(1..8);
        let a = FpMatrix::from_fn(field, rows, cols, |_, _| rng.gen_range(0..p));
        if a.rank() + a.nullspace_dim() != cols {
            return AuditOutcome::fail(name, format!("trial {trial}: rank-nullity violated"));
        }
        let x: Vec<u64> = (0..cols).map(|_| rng.gen_range(0..p)).collect();
        let b = a.mul_vec(&x);
        match a.solve(&b) {
            Solution::Solvable { particular, .. } => {
                if a.mul_vec(&particular) != b {
                    return AuditOutcome::fail(name, format!("trial {trial}: substitution fails"));
                }
            }
            Solution::Inconsistent => {
                return AuditOutcome::fail(
                    name,
                    format!("trial {trial}: consistent system reported inconsistent"),
                );
            }
        }
    }
    AuditOutcome::pass(name)
}

/// Runs the full audit battery for one prime.
pub fn run_audits(field: &PrimeField, options: &VerifyOptions) -> VerifyReport {
    let edge = build_edge_algebra(field);
    let mut v0 = build_vertex_algebra(field, Vertex::V0);
    if let Some((i, j, k)) = options.inject_fault {
        v0 = v0.with_perturbed_constant(i, j, k, 1);
    }
    let v1 = build_vertex_algebra(field, Vertex::V1);
    let algebras: Vec<(&str, &SCAlgebra)> = vec![
        ("edge algebra", &edge),
        ("vertex algebra v0", &v0),
        ("vertex algebra v1", &v1),
    ];

    let mut outcomes = vec![
        audit_associativity(&algebras),
        audit_idempotents(field, &algebras),
        audit_characters(field),
        audit_edge_semisimplicity(field),
        audit_endomorphism_match(field, &v0),
    ];
    let ctx = HeckeContext::new(field);
    outcomes.push(audit_six_term(&ctx));
    outcomes.push(audit_ledger(&ctx));
    outcomes.push(audit_rank_nullity(field));
    VerifyReport {
        p: field.p(),
        outcomes,
    }
}
