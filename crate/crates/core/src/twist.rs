//! Cocycle twists of `G`-graded presentations.
//!
//! The twisted product is `a * b = mu(g, h) ab` on homogeneous `a in A_g`,
//! `b in A_h`. A word `v_1 ... v_k` of old products equals `c^-1` times the
//! corresponding star product, where `c` is the left-associated product of
//! cocycle values; twisting a relation divides each word's coefficient by
//! that `c`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::action::{isotypic_basis, regrade_presentation, GGrading, GradedAction};
use crate::cyclo::{lcm, CycNum};
use crate::error::{Error, Result};
use crate::freealg::{change_basis, GenMap, NcPoly, Presentation, Word};
use crate::grp::{Cocycle, Duality, GroupAut, GroupElem};
use crate::linalg::span_basis;

/// A graded presentation together with the data defining its twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    grading: GGrading,
    duality: Duality,
    cocycle: Cocycle,
}

impl TwistSpec {
    /// Checks the group agreement and lifts everything to a common conductor.
    pub fn new(grading: GGrading, duality: Duality, cocycle: Cocycle) -> Result<TwistSpec> {
        if duality.group() != grading.group() || cocycle.group() != grading.group() {
            return Err(Error::Group("grading, duality and cocycle use different groups".into()));
        }
        let pc = grading.presentation().conductor();
        let m = lcm(lcm(pc, duality.conductor()), cocycle.conductor());
        let grading = if m == pc {
            grading
        } else {
            grading.with_presentation(grading.presentation().embed(m)?)?
        };
        let duality = if duality.conductor() == m {
            duality
        } else {
            duality.embed(m)?
        };
        let cocycle = if cocycle.conductor() == m {
            cocycle
        } else {
            cocycle.embed(m)?
        };
        Ok(TwistSpec {
            grading,
            duality,
            cocycle,
        })
    }

    pub fn grading(&self) -> &GGrading {
        &self.grading
    }

    pub fn duality(&self) -> &Duality {
        &self.duality
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn conductor(&self) -> u32 {
        self.cocycle.conductor()
    }

    pub fn with_cocycle(&self, cocycle: Cocycle) -> Result<TwistSpec> {
        TwistSpec::new(self.grading.clone(), self.duality.clone(), cocycle)
    }

    pub fn with_grading(&self, grading: GGrading) -> Result<TwistSpec> {
        TwistSpec::new(grading, self.duality.clone(), self.cocycle.clone())
    }
}

/// `prod_{j<k} mu(h_1 ... h_j, h_{j+1})`; 1 for a single letter.
pub fn word_twist_scalar(degrees: &[GroupElem], mu: &Cocycle) -> CycNum {
    let g = mu.group();
    let mut acc = CycNum::one(mu.conductor());
    let Some(first) = degrees.first() else {
        return acc;
    };
    let mut prefix = first.clone();
    for h in &degrees[1..] {
        acc = &acc * mu.value(&prefix, h);
        prefix = g.mul(&prefix, h);
    }
    acc
}

/// The same scalar computed for the right-nested product `h_1 (h_2 (... h_k))`.
pub fn word_twist_scalar_right(degrees: &[GroupElem], mu: &Cocycle) -> CycNum {
    let g = mu.group();
    let mut acc = CycNum::one(mu.conductor());
    let Some(last) = degrees.last() else {
        return acc;
    };
    let mut suffix = last.clone();
    for h in degrees[..degrees.len() - 1].iter().rev() {
        acc = &acc * mu.value(h, &suffix);
        suffix = g.mul(h, &suffix);
    }
    acc
}

fn word_scalar_cached(w: &Word, grading: &GGrading, mu: &Cocycle, cache: &mut HashMap<Word, CycNum>) -> CycNum {
    if let Some(c) = cache.get(w) {
        return c.clone();
    }
    let degs: Vec<GroupElem> = w.letters().iter().map(|&l| grading.letter_degree(l).clone()).collect();
    let c = word_twist_scalar(&degs, mu);
    cache.insert(w.clone(), c.clone());
    c
}

/// Expresses `p` (in old products) through star-product monomials.
pub fn twist_poly(p: &NcPoly, spec: &TwistSpec) -> Result<NcPoly> {
    twist_poly_with(p, &spec.grading, &spec.cocycle)
}

pub fn twist_poly_with(p: &NcPoly, grading: &GGrading, mu: &Cocycle) -> Result<NcPoly> {
    let n = grading.g_degrees().len();
    if p.max_letter().is_some_and(|m| m >= n) {
        return Err(Error::Alphabet("letter without an assigned group degree".into()));
    }
    let p = match p.conductor() {
        Some(c) if c != mu.conductor() => {
            let m = lcm(c, mu.conductor());
            let mu = mu.embed(m)?;
            return twist_poly_with(&p.embed(m)?, grading, &mu);
        }
        _ => p,
    };
    let mut cache = HashMap::new();
    let mut out = Vec::with_capacity(p.num_terms());
    for (w, c) in p.terms() {
        let s = word_scalar_cached(w, grading, mu, &mut cache);
        out.push((w.clone(), c.checked_div(&s)?));
    }
    Ok(NcPoly::from_terms(out))
}

/// `A^{G,mu}`: the same generators with every relation twisted. The group
/// grading carries over unchanged.
pub fn twist_presentation(spec: &TwistSpec) -> Result<GGrading> {
    let p = spec.grading.presentation();
    let relations = p
        .relations()
        .par_iter()
        .map(|r| twist_poly(r, spec))
        .collect::<Result<Vec<_>>>()?;
    spec.grading.with_presentation(p.with_relations(relations)?)
}

/// Whether two relation lists generate the same subspace in every degree.
pub fn same_relation_spans(a: &[NcPoly], b: &[NcPoly], weights: &[u32]) -> bool {
    let mut by_deg: BTreeMap<u32, (Vec<&NcPoly>, Vec<&NcPoly>)> = BTreeMap::new();
    for r in a {
        by_deg
            .entry(r.n_degree(weights).unwrap_or(u32::MAX))
            .or_default()
            .0
            .push(r);
    }
    for r in b {
        by_deg
            .entry(r.n_degree(weights).unwrap_or(u32::MAX))
            .or_default()
            .1
            .push(r);
    }
    by_deg.values().all(|(ra, rb)| {
        let words: BTreeSet<&Word> = ra
            .iter()
            .chain(rb.iter())
            .flat_map(|r| r.terms().map(|(w, _)| w))
            .collect();
        let words: Vec<&Word> = words.into_iter().collect();
        let conductor = ra.iter().chain(rb.iter()).find_map(|r| r.conductor()).unwrap_or(1);
        let vecs = |rs: &[&NcPoly]| -> Vec<Vec<CycNum>> {
            rs.iter()
                .map(|r| {
                    words
                        .iter()
                        .map(|w| r.coeff(w).cloned().unwrap_or_else(|| CycNum::zero(conductor)))
                        .collect()
                })
                .collect()
        };
        span_basis(conductor, words.len(), &vecs(ra)) == span_basis(conductor, words.len(), &vecs(rb))
    })
}

/// Regrading by `sigma` puts `a in A_h` into degree `sigma^-1(h)`.
pub fn regrade_by(grading: &GGrading, sigma: &GroupAut) -> Result<GGrading> {
    let inv = sigma.inverse();
    grading.map_degrees(|h| inv.apply(h))
}

/// Twisting the `sigma`-regraded algebra by `mu` gives the same relations as
/// twisting the original by `mu` pulled back along `sigma^-1`.
pub fn verify_regrade_pullback(spec: &TwistSpec, sigma: &GroupAut) -> Result<bool> {
    let lhs = twist_presentation(&spec.with_grading(regrade_by(spec.grading(), sigma)?)?)?;
    let rhs = twist_presentation(&spec.with_cocycle(spec.cocycle().pullback(&sigma.inverse())?)?)?;
    Ok(lhs.presentation().same_relations(rhs.presentation()))
}

/// The twist computed from the isotypic grading for `duality`, written back
/// in the original generators.
pub fn twist_in_original_basis(
    p: &Presentation,
    act: &GradedAction,
    duality: &Duality,
    mu: &Cocycle,
) -> Result<Vec<NcPoly>> {
    let basis = isotypic_basis(p, act, duality)?;
    let grading = regrade_presentation(p, &basis, act.group())?;
    let spec = TwistSpec::new(grading, duality.clone(), mu.clone())?;
    let twisted = twist_presentation(&spec)?;
    let conductor = spec.conductor();
    let back = if basis.matrix.conductor() == conductor {
        basis.matrix.clone()
    } else {
        basis.matrix.embed(conductor)?
    };
    let weights = p.weights();
    twisted
        .presentation()
        .relations()
        .iter()
        .map(|r| change_basis(r, &back, &weights))
        .collect()
}

/// Searches `Aut(G)` for `tau` with `(A, phi, mu)` and `(A, rho, mu^(tau^-1))`
/// twisting to the same relations. Identity is tried first.
pub fn verify_duality_change(
    p: &Presentation,
    act: &GradedAction,
    phi: &Duality,
    rho: &Duality,
    mu: &Cocycle,
) -> Result<Option<GroupAut>> {
    let target = twist_in_original_basis(p, act, phi, mu)?;
    let weights = p.weights();
    for tau in GroupAut::all(act.group()) {
        let nu = mu.pullback(&tau.inverse())?;
        let cand = twist_in_original_basis(p, act, rho, &nu)?;
        if same_relation_spans(&target, &cand, &weights) {
            return Ok(Some(tau));
        }
    }
    Ok(None)
}

/// The generator rescaling `v -> rho(deg v) v`.
pub fn coboundary_rescaling(grading: &GGrading, rho: &[CycNum]) -> GenMap {
    let g = grading.group();
    GenMap::new(
        grading
            .g_degrees()
            .iter()
            .enumerate()
            .map(|(l, d)| NcPoly::generator(l, rho[0].conductor()).scale(&rho[g.index(d)]))
            .collect(),
    )
}

/// Twisting by `mu * delta(rho)` agrees with twisting by `mu` followed by the
/// rescaling `v -> rho(deg v) v`, relation by relation up to scalars.
pub fn verify_coboundary_rescaling(spec: &TwistSpec, rho: &[CycNum]) -> Result<bool> {
    let delta = Cocycle::coboundary(spec.grading().group(), rho)?;
    let m = lcm(spec.conductor(), delta.conductor());
    let base = spec.with_cocycle(spec.cocycle().embed(m)?)?;
    let perturbed = base.with_cocycle(base.cocycle().mul(&delta.embed(m)?)?)?;
    let twisted = twist_presentation(&base)?;
    let twisted_pert = twist_presentation(&perturbed)?;
    let rho_m = rho.iter().map(|c| c.embed(m)).collect::<Result<Vec<_>>>()?;
    let map = coboundary_rescaling(perturbed.grading(), &rho_m);
    let rescaled = twisted_pert
        .presentation()
        .relations()
        .iter()
        .map(|r| map.apply(r))
        .collect::<Result<Vec<_>>>()?;
    let rescaled = twisted_pert.presentation().with_relations(rescaled)?;
    Ok(rescaled.same_relations(twisted.presentation()))
}
