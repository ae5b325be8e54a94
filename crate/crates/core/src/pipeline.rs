//! End-to-end verification runs over the built-in presets.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::crossed::{phi_g_check, twisted_group_algebra, verify_invariant_iso, CrossedModel};
use crate::cyclo::{lcm, CycNum};
use crate::error::Result;
use crate::freealg::{GenMap, NcPoly, Presentation};
use crate::gbasis::{hilbert_coeffs, is_regular_to_degree, verify_iso, IsoStatus, IsoVerdict};
use crate::grp::{schur_order, AbGroup, Cocycle, Duality, GroupAut};
use crate::presets::{self, preset, Preset, ALGEBRAS, TWIST_PAIRS};
use crate::twist::{
    coboundary_rescaling, twist_poly_with, twist_presentation, verify_coboundary_rescaling, verify_duality_change,
    verify_regrade_pullback,
};

/// Variations of the main run used as controls.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub degree: u32,
    /// Replaces the Klein cocycle.
    pub cocycle: Option<Cocycle>,
    /// Multiplies the cocycle by `delta(rho)` and undoes it by rescaling.
    pub coboundary: Option<Vec<CycNum>>,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            degree: crate::gbasis::DEFAULT_DEGREE,
            cocycle: None,
            coboundary: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairResult {
    pub source: String,
    pub target: String,
    pub names: Vec<String>,
    pub syntactic: bool,
    /// `twist(displayed_k) = scalar_k * target_displayed_k`.
    pub scalars: Vec<Option<CycNum>>,
    pub expected: Vec<CycNum>,
    pub twisted: Vec<NcPoly>,
    pub target_relations: Vec<NcPoly>,
    pub iso: IsoVerdict,
}

impl PairResult {
    pub fn passed(&self) -> bool {
        self.syntactic && self.iso.passed()
    }

    pub fn scalars_as_expected(&self) -> bool {
        self.scalars.len() == self.expected.len()
            && self.scalars.iter().zip(&self.expected).all(|(s, e)| {
                s.as_ref()
                    .is_some_and(|s| s == &e.embed(s.conductor()).expect("divides"))
            })
    }

    /// First relation without a scalar match.
    pub fn mismatch(&self) -> Option<usize> {
        self.scalars.iter().position(Option::is_none)
    }
}

fn embed_all(ps: &[NcPoly], m: u32) -> Result<Vec<NcPoly>> {
    ps.iter().map(|p| p.embed(m)).collect()
}

/// Twists `source` by the configured cocycle and compares it with `target`.
pub fn run_pair(source: &Preset, target: &Preset, opts: &RunOptions) -> Result<PairResult> {
    let base = opts.cocycle.clone().unwrap_or_else(|| source.cocycle.clone());
    let (mu, rescale) = match &opts.coboundary {
        None => (base, None),
        Some(rho) => {
            let delta = Cocycle::coboundary(source.grading.group(), rho)?;
            let m = lcm(base.conductor(), delta.conductor());
            let mu = base.embed(m)?.mul(&delta.embed(m)?)?;
            let rho = rho.iter().map(|c| c.embed(m)).collect::<Result<Vec<_>>>()?;
            (mu, Some(rho))
        }
    };
    let m = lcm(source.presentation.conductor(), mu.conductor());
    let grading = source.grading.with_presentation(source.presentation.embed(m)?)?;
    let mu = mu.embed(m)?;
    let map = rescale.map(|rho| coboundary_rescaling(&grading, &rho));
    let finish = |p: NcPoly| -> Result<NcPoly> {
        match &map {
            Some(g) => g.apply(&p),
            None => Ok(p),
        }
    };
    let twisted = embed_all(&source.displayed, m)?
        .iter()
        .map(|r| twist_poly_with(r, &grading, &mu).and_then(finish))
        .collect::<Result<Vec<_>>>()?;
    let target_relations = embed_all(&target.displayed, m)?;
    let scalars: Vec<Option<CycNum>> = twisted
        .iter()
        .zip(&target_relations)
        .map(|(t, r)| t.scalar_multiple_of(r))
        .collect();
    let syntactic = scalars.iter().all(Option::is_some);
    let lhs = grading.presentation().with_relations(twisted.clone())?;
    let rhs = target.presentation.embed(m)?;
    let iso = verify_iso(
        &lhs,
        &rhs,
        &GenMap::identity(3, m),
        opts.degree,
        Some(&GenMap::identity(3, m)),
    )?;
    Ok(PairResult {
        source: source.name.clone(),
        target: target.name.clone(),
        names: source.presentation.names(),
        syntactic,
        scalars,
        expected: source.expected_scalars.clone(),
        twisted,
        target_relations,
        iso,
    })
}

#[derive(Clone, Debug)]
pub struct TwistPairsReport {
    pub pairs: Vec<PairResult>,
}

impl TwistPairsReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(PairResult::passed)
    }

    pub fn passed_with_expected_scalars(&self) -> bool {
        self.passed() && self.pairs.iter().all(PairResult::scalars_as_expected)
    }
}

/// The four twist isomorphisms, verified in parallel.
pub fn run_klein_twists(opts: &RunOptions) -> Result<TwistPairsReport> {
    let pairs = TWIST_PAIRS
        .par_iter()
        .map(|(s, t)| run_pair(&preset(s)?, &preset(t)?, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwistPairsReport { pairs })
}

pub fn iso_status_str(s: &IsoStatus) -> String {
    match s {
        IsoStatus::Syntactic => "SYNTACTIC".into(),
        IsoStatus::VerifiedToDegree(d) => format!("VERIFIED_TO_{d}"),
        IsoStatus::Failed(_) => "FAILED".into(),
    }
}

fn scalar_json(s: &Option<CycNum>) -> Value {
    s.as_ref().map_or(Value::Null, |c| Value::String(c.to_string()))
}

pub fn iso_json(v: &IsoVerdict) -> Value {
    json!({
        "status": iso_status_str(&v.status),
        "failure": match &v.status { IsoStatus::Failed(m) => Value::String(m.clone()), _ => Value::Null },
        "degree": v.degree,
        "scalars": v.scalars.as_ref().map(|s| s.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        "matched_relations": v.matched.as_ref().map(|m| m.iter().map(|j| j + 1).collect::<Vec<_>>()),
        "relation_checks": v.relation_checks,
        "inverse_checks": v.inverse_checks,
        "hilbert_lhs": v.hilbert_lhs.dims,
        "hilbert_rhs": v.hilbert_rhs.dims,
    })
}

impl PairResult {
    pub fn to_json(&self) -> Value {
        let mismatch = self.mismatch().map(|k| {
            json!({
                "relation": k + 1,
                "twisted": self.twisted[k].display(&self.names).to_string(),
                "target": self.target_relations[k].display(&self.names).to_string(),
            })
        });
        json!({
            "source": self.source,
            "target": self.target,
            "status": if self.syntactic { "SYNTACTIC" } else { "FAILED" },
            "passed": self.passed(),
            "scalars": self.scalars.iter().map(scalar_json).collect::<Vec<_>>(),
            "expected_scalars": self.expected.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "scalars_as_expected": self.scalars_as_expected(),
            "twisted_relations": self.twisted.iter().map(|p| p.display(&self.names).to_string()).collect::<Vec<_>>(),
            "mismatch": mismatch,
            "verify_iso": iso_json(&self.iso),
        })
    }
}

impl TwistPairsReport {
    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "count": format!("{}/{}", self.pairs.iter().filter(|p| p.passed()).count(), self.pairs.len()),
            "pairs": self.pairs.iter().map(PairResult::to_json).collect::<Vec<_>>(),
            "notes": [
                "scalars compare each twisted relation with the target relation in its printed form",
                "the shared cubic of the E and G families is taken with the two quadratics",
                "the G-family coefficient is 2*gamma - 1"
            ],
        })
    }
}

/// One named verification with a machine-readable detail record.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

fn check(name: &str, passed: bool, detail: Value) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn check_hilbert_preservation(degree: u32) -> Result<Check> {
    let rows = ALGEBRAS
        .par_iter()
        .map(|name| -> Result<(String, Vec<u64>, Vec<u64>)> {
            let p = preset(name)?;
            let tw = twist_presentation(&p.spec()?)?;
            Ok((
                name.to_string(),
                hilbert_coeffs(&p.presentation, degree)?.dims,
                hilbert_coeffs(tw.presentation(), degree)?.dims,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows
        .iter()
        .all(|(_, a, b)| a == b && a.len() > 2 && a[..3] == [1, 3, 7]);
    let detail = rows
        .iter()
        .map(|(n, a, b)| json!({"preset": n, "original": a, "twisted": b, "equal": a == b}))
        .collect::<Vec<_>>();
    Ok(check(
        "hilbert-preservation",
        passed,
        json!({"degree": degree, "presets": detail}),
    ))
}

pub fn check_invariant_ring(degree: u32) -> Result<Check> {
    let rows = ["A(1,-1)", "B(1)"]
        .par_iter()
        .map(|name| -> Result<Value> {
            let p = preset(name)?;
            let spec = p.spec()?;
            let tw = twist_presentation(&spec)?;
            let model = CrossedModel::new(&spec, degree)?;
            let rep = verify_invariant_iso(&model, &tw, degree)?;
            Ok(json!({
                "preset": name,
                "passed": rep.passed(),
                "relations_vanish": rep.relations_vanish,
                "invariant_dims": rep.degrees.iter().map(|d| d.dim_invariants).collect::<Vec<_>>(),
                "dims": rep.degrees.iter().map(|d| d.dim_a).collect::<Vec<_>>(),
                "multiplicative": rep.degrees.iter().all(|d| d.multiplicative),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r["passed"] == true);
    Ok(check(
        "invariant-ring",
        passed,
        json!({"degree": degree, "presets": rows}),
    ))
}

pub fn check_phi_g(degree: u32) -> Result<Check> {
    let p = preset("A(1,-1)")?;
    let spec = p.spec()?;
    let tw = twist_presentation(&spec)?;
    let model = CrossedModel::new(&spec, degree.max(3))?;
    let group = spec.grading().group().clone();
    let reps = group
        .elements()
        .par_iter()
        .map(|g| phi_g_check(&model, &tw, g, degree))
        .collect::<Result<Vec<_>>>()?;
    let passed = reps.iter().all(|r| r.passed());
    let detail = reps
        .iter()
        .map(|r| {
            json!({
                "element": r.element,
                "passed": r.passed(),
                "multiplicative": r.multiplicative,
                "commutation": r.commutation,
                "component_dims": r.components.iter().map(|c| c.1).collect::<Vec<_>>(),
                "dims": r.components.iter().map(|c| c.0).collect::<Vec<_>>(),
            })
        })
        .collect::<Vec<_>>();
    Ok(check(
        "bimodule-decomposition",
        passed,
        json!({"degree": degree, "elements": detail}),
    ))
}

pub fn check_kgmu() -> Result<Check> {
    let g = AbGroup::klein();
    let twisted = twisted_group_algebra(&g, &presets::klein_mu())?;
    let plain = twisted_group_algebra(&g, &Cocycle::trivial(&g, presets::CONDUCTOR))?;
    let center = twisted.center_basis().len();
    let trace_rank = twisted.trace_form().rank();
    let full = twisted.is_full_matrix_algebra();
    let plain_center = plain.center_basis().len();
    Ok(check(
        "twisted-group-algebra",
        center == 1 && trace_rank == 4 && full && plain_center == 4,
        json!({
            "dimension": twisted.dim(),
            "center_dim": center,
            "trace_form_rank": trace_rank,
            "full_matrix_algebra": full,
            "trivial_cocycle_center_dim": plain_center,
        }),
    ))
}

pub fn check_schur() -> Result<Check> {
    let cases: Vec<(Vec<u32>, u64)> = vec![
        (vec![2, 2], 2),
        (vec![2], 1),
        (vec![3], 1),
        (vec![4], 1),
        (vec![3, 3], 3),
    ];
    let rows = cases
        .iter()
        .map(|(f, want)| -> Result<Value> {
            let got = schur_order(&AbGroup::new(f.clone())?);
            Ok(json!({"group": f, "order": got, "expected": want}))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r["order"] == r["expected"]);
    Ok(check("schur-multiplier", passed, json!(rows)))
}

pub fn check_double_twist() -> Result<Check> {
    let rows = ALGEBRAS
        .par_iter()
        .map(|name| -> Result<(String, bool)> {
            let p = preset(name)?;
            let spec = p.spec()?;
            let once = twist_presentation(&spec)?;
            let back = spec.with_grading(once)?.with_cocycle(spec.cocycle().inverse())?;
            let twice = twist_presentation(&back)?;
            Ok((name.to_string(), twice.presentation().same_relations(&p.presentation)))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.1);
    Ok(check(
        "double-twist",
        passed,
        json!(rows
            .iter()
            .map(|(n, ok)| json!({"preset": n, "returns": ok}))
            .collect::<Vec<_>>()),
    ))
}

pub fn check_coboundary_rescaling(rho: &[CycNum]) -> Result<Check> {
    let rows = ALGEBRAS
        .par_iter()
        .map(|name| -> Result<(String, bool)> {
            let p = preset(name)?;
            Ok((name.to_string(), verify_coboundary_rescaling(&p.spec()?, rho)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.1);
    Ok(check(
        "coboundary-rescaling",
        passed,
        json!({
            "rho": rho.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "presets": rows.iter().map(|(n, ok)| json!({"preset": n, "equal": ok})).collect::<Vec<_>>(),
        }),
    ))
}

pub fn check_regrade_pullback() -> Result<Check> {
    let p = preset("A(1,-1)")?;
    let spec = p.spec()?;
    let rows = GroupAut::all(spec.grading().group())
        .iter()
        .map(|s| Ok((s.display(), verify_regrade_pullback(&spec, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.len() == 6 && rows.iter().all(|r| r.1);
    Ok(check(
        "regrade-by-automorphism",
        passed,
        json!(rows
            .iter()
            .map(|(s, ok)| json!({"sigma": s, "equal": ok}))
            .collect::<Vec<_>>()),
    ))
}

pub fn check_duality_change() -> Result<Check> {
    let x = presets::preset_in_x_basis("A(1,-1)")?;
    let g = presets::klein_group();
    let act = crate::action::validate_action(&x, &g, presets::klein_action_x())?;
    let standard = Duality::standard(&g, presets::CONDUCTOR)?;
    let tau = verify_duality_change(&x, &act, &standard, &presets::klein_duality(), &presets::klein_mu())?;
    Ok(check(
        "duality-change",
        tau.is_some(),
        json!({"tau": tau.map(|t| t.display())}),
    ))
}

pub fn check_regularity(degree: u32) -> Result<Check> {
    let rows = ALGEBRAS
        .par_iter()
        .map(|name| -> Result<Value> {
            let p = preset(name)?;
            let tw = twist_presentation(&p.spec()?)?;
            let mut verdicts = Vec::new();
            let mut agree = true;
            for l in 0..3 {
                let v = NcPoly::generator(l, presets::CONDUCTOR);
                let before = is_regular_to_degree(&v, &p.presentation, degree)?;
                let after = is_regular_to_degree(&v, tw.presentation(), degree)?;
                agree &= before == after;
                verdicts.push(json!({"generator": p.presentation.names()[l], "before": [before.0, before.1], "after": [after.0, after.1]}));
            }
            Ok(json!({"preset": name, "agree": agree, "generators": verdicts}))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r["agree"] == true);
    Ok(check(
        "regularity-agreement",
        passed,
        json!({"degree": degree, "presets": rows}),
    ))
}

/// The standard perturbation used by the controls: `rho = (1, i, -i, -1)`.
pub fn sample_rho() -> Vec<CycNum> {
    let i = CycNum::zeta(4);
    vec![CycNum::one(4), i.clone(), -&i, CycNum::from_int(4, -1)]
}

pub fn check_controls(degree: u32) -> Result<Check> {
    let a = preset("A(1,-1)")?;
    let d = preset("D(1,1)")?;
    let trivial = run_pair(
        &a,
        &d,
        &RunOptions {
            degree,
            cocycle: Some(Cocycle::trivial(a.grading.group(), presets::CONDUCTOR)),
            coboundary: None,
        },
    )?;
    let perturbed = run_klein_twists(&RunOptions {
        degree,
        cocycle: None,
        coboundary: Some(sample_rho()),
    })?;
    let trivial_fails = !trivial.passed();
    Ok(check(
        "negative-controls",
        trivial_fails && perturbed.passed(),
        json!({
            "trivial_cocycle_fails": trivial_fails,
            "trivial_cocycle_first_mismatch": trivial.mismatch().map(|k| k + 1),
            "coboundary_perturbation_passes": perturbed.passed(),
        }),
    ))
}

/// Every verification of the suite, in a fixed order.
pub fn full_report(degree: u32) -> Result<Vec<Check>> {
    type Job = fn(u32) -> Result<Check>;
    let jobs: Vec<(&str, Job)> = vec![
        ("pairs", |d| {
            let r = run_klein_twists(&RunOptions {
                degree: d,
                ..RunOptions::default()
            })?;
            Ok(check(
                "twist-isomorphisms",
                r.passed_with_expected_scalars(),
                r.to_json(),
            ))
        }),
        ("hilbert", check_hilbert_preservation),
        ("invariants", |d| check_invariant_ring(d.min(4))),
        ("phig", |d| check_phi_g(d.min(3))),
        ("kgmu", |_| check_kgmu()),
        ("schur", |_| check_schur()),
        ("double", |_| check_double_twist()),
        ("coboundary", |_| check_coboundary_rescaling(&sample_rho())),
        ("regrade", |_| check_regrade_pullback()),
        ("benign", |_| check_duality_change()),
        ("regular", |d| check_regularity(d.min(4))),
        ("controls", check_controls),
    ];
    jobs.par_iter().map(|(_, f)| f(degree)).collect()
}

pub fn report_json(checks: &[Check]) -> Value {
    json!({
        "passed": checks.iter().all(|c| c.passed),
        "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
    })
}

/// Relations of a presentation as display strings.
pub fn relation_strings(p: &Presentation) -> Vec<String> {
    (0..p.relations().len()).map(|k| p.display_relation(k)).collect()
}
