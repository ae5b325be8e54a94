//! Twisted group algebras, the crossed product `A ⊗ kG_mu` and its invariants.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::action::GGrading;
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::freealg::{NcPoly, Word};
use crate::gbasis::TruncGB;
use crate::grp::{AbGroup, Cocycle, GroupElem};
use crate::linalg::{span_basis, Matrix};
use crate::twist::{word_twist_scalar, TwistSpec};

/// A finite-dimensional unital algebra given by structure constants:
/// `table[a][b]` holds the coordinates of `e_a e_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimAlg {
    conductor: u32,
    labels: Vec<String>,
    table: Vec<Vec<Vec<CycNum>>>,
    unit: Vec<CycNum>,
}

impl FinDimAlg {
    /// Validates associativity on all basis triples and the unit.
    pub fn new(
        conductor: u32,
        labels: Vec<String>,
        table: Vec<Vec<Vec<CycNum>>>,
        unit: Vec<CycNum>,
    ) -> Result<FinDimAlg> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) || unit.len() != n {
            return Err(Error::DimensionMismatch(
                "structure constants do not match the basis".into(),
            ));
        }
        let alg = FinDimAlg {
            conductor,
            labels,
            table,
            unit,
        };
        for a in 0..n {
            let ea = alg.basis_vec(a);
            if alg.mul(&alg.unit, &ea) != ea || alg.mul(&ea, &alg.unit) != ea {
                return Err(Error::Input(format!("unit fails on {}", alg.labels[a])));
            }
            for b in 0..n {
                let ab = &alg.table[a][b];
                for c in 0..n {
                    let ec = alg.basis_vec(c);
                    let lhs = alg.mul(ab, &ec);
                    let rhs = alg.mul(&ea, &alg.table[b][c]);
                    if lhs != rhs {
                        return Err(Error::Input(format!(
                            "not associative on ({}, {}, {})",
                            alg.labels[a], alg.labels[b], alg.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure(&self, a: usize, b: usize) -> &[CycNum] {
        &self.table[a][b]
    }

    pub fn unit(&self) -> &[CycNum] {
        &self.unit
    }

    pub fn basis_vec(&self, a: usize) -> Vec<CycNum> {
        let mut v = vec![CycNum::zero(self.conductor); self.dim()];
        v[a] = CycNum::one(self.conductor);
        v
    }

    pub fn mul(&self, x: &[CycNum], y: &[CycNum]) -> Vec<CycNum> {
        let n = self.dim();
        let mut out = vec![CycNum::zero(self.conductor); n];
        for a in (0..n).filter(|&a| !x[a].is_zero()) {
            for b in (0..n).filter(|&b| !y[b].is_zero()) {
                let s = &x[a] * &y[b];
                for (o, c) in out.iter_mut().zip(&self.table[a][b]) {
                    if !c.is_zero() {
                        *o = &*o + &(&s * c);
                    }
                }
            }
        }
        out
    }

    /// Basis of `{z : z e_b = e_b z for all b}`.
    pub fn center_basis(&self) -> Vec<Vec<CycNum>> {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n * n);
        for b in 0..n {
            for d in 0..n {
                rows.push((0..n).map(|a| &self.table[a][b][d] - &self.table[b][a][d]).collect());
            }
        }
        if n == 0 {
            return Vec::new();
        }
        let m = Matrix::from_rows(self.conductor, rows).expect("square system");
        span_basis(self.conductor, n, &m.nullspace())
    }

    /// Gram matrix of `(x, y) -> tr(L_{xy})` on the basis.
    pub fn trace_form(&self) -> Matrix {
        let n = self.dim();
        let tr: Vec<CycNum> = (0..n)
            .map(|c| (0..n).fold(CycNum::zero(self.conductor), |acc, d| acc + self.table[c][d][d].clone()))
            .collect();
        let rows = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        self.table[a][b]
                            .iter()
                            .zip(&tr)
                            .fold(CycNum::zero(self.conductor), |acc, (x, t)| acc + x * t)
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(self.conductor, rows).expect("square")
    }

    /// Dimension `n^2`, one-dimensional center, nondegenerate trace form.
    pub fn is_full_matrix_algebra(&self) -> bool {
        let n = self.dim();
        let r = (n as f64).sqrt().round() as usize;
        r * r == n && self.center_basis().len() == 1 && self.trace_form().rank() == n
    }
}

/// `kG_mu`: basis `u_g` with `u_g u_h = mu(g,h) u_{gh}`.
pub fn twisted_group_algebra(group: &AbGroup, mu: &Cocycle) -> Result<FinDimAlg> {
    if mu.group() != group {
        return Err(Error::Group("cocycle is defined on a different group".into()));
    }
    let els = group.elements();
    let n = els.len();
    let c = mu.conductor();
    let labels = els.iter().map(|g| format!("u_{}", group.display(g))).collect();
    let table = els
        .iter()
        .map(|g| {
            els.iter()
                .map(|h| {
                    let mut v = vec![CycNum::zero(c); n];
                    v[group.index(&group.mul(g, h))] = mu.value(g, h).clone();
                    v
                })
                .collect()
        })
        .collect();
    let mut unit = vec![CycNum::zero(c); n];
    unit[0] = CycNum::one(c);
    FinDimAlg::new(c, labels, table, unit)
}

pub fn center_basis(alg: &FinDimAlg) -> Vec<Vec<CycNum>> {
    alg.center_basis()
}

/// An element of `A ⊗ kG_mu`: normal word and group index to coefficient.
pub type CrossedElem = BTreeMap<(Word, usize), CycNum>;

/// `A ⊗ kG_mu` realized degreewise on normal words of a truncated basis.
#[derive(Clone, Debug)]
pub struct CrossedModel {
    spec: TwistSpec,
    gb: TruncGB,
    elements: Vec<GroupElem>,
}

fn add_into(out: &mut CrossedElem, key: (Word, usize), c: CycNum) {
    if c.is_zero() {
        return;
    }
    match out.get_mut(&key) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                out.remove(&key);
            }
        }
        None => {
            out.insert(key, c);
        }
    }
}

impl CrossedModel {
    pub fn new(spec: &TwistSpec, bound: u32) -> Result<CrossedModel> {
        let gb = TruncGB::compute(spec.grading().presentation(), bound)?;
        Ok(CrossedModel {
            spec: spec.clone(),
            gb,
            elements: spec.grading().group().elements(),
        })
    }

    pub fn spec(&self) -> &TwistSpec {
        &self.spec
    }

    pub fn gb(&self) -> &TruncGB {
        &self.gb
    }

    pub fn bound(&self) -> u32 {
        self.gb.bound()
    }

    fn group(&self) -> &AbGroup {
        self.spec.grading().group()
    }

    fn conductor(&self) -> u32 {
        self.spec.conductor()
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.bound() {
            return Err(Error::DegreeBound {
                degree: d,
                bound: self.bound(),
            });
        }
        Ok(())
    }

    /// `a ⊗ g` for a polynomial `a`, reduced to normal form.
    pub fn embed_poly(&self, a: &NcPoly, g: &GroupElem) -> Result<CrossedElem> {
        let nf = self.gb.normal_form(a)?;
        let gi = self.group().index(g);
        let mut out = CrossedElem::new();
        for (w, c) in nf.terms() {
            add_into(&mut out, (w.clone(), gi), c.clone());
        }
        Ok(out)
    }

    pub fn one_tensor(&self, g: &GroupElem) -> CrossedElem {
        let mut out = CrossedElem::new();
        out.insert((Word::empty(), self.group().index(g)), CycNum::one(self.conductor()));
        out
    }

    /// `(a ⊗ g)(b ⊗ h) = mu(g,h) NF(ab) ⊗ gh`.
    pub fn mul(&self, x: &CrossedElem, y: &CrossedElem) -> Result<CrossedElem> {
        let group = self.group();
        let mu = self.spec.cocycle();
        let mut out = CrossedElem::new();
        for ((a, gi), ca) in x {
            for ((b, hi), cb) in y {
                let (g, h) = (&self.elements[*gi], &self.elements[*hi]);
                let coeff = &(ca * cb) * mu.value(g, h);
                let prod = NcPoly::monomial(a.concat(b), coeff);
                let nf = self.gb.normal_form(&prod)?;
                let k = group.index(&group.mul(g, h));
                for (w, c) in nf.terms() {
                    add_into(&mut out, (w.clone(), k), c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Diagonal action `(a ⊗ g)^h = chi_g(h) a^h ⊗ g` on a basis element.
    pub fn action_scalar(&self, w: &Word, gi: usize, h: &GroupElem) -> CycNum {
        let grading = self.spec.grading();
        let d = self.spec.duality();
        let group = self.group();
        let wdeg = grading.word_degree(w.letters());
        &d.chi(&self.elements[gi], h) * &d.chi(&group.inv(&wdeg), h)
    }

    pub fn act(&self, x: &CrossedElem, h: &GroupElem) -> CrossedElem {
        x.iter()
            .map(|((w, gi), c)| ((w.clone(), *gi), c * &self.action_scalar(w, *gi, h)))
            .collect()
    }

    /// Basis `(word, group index)` of the degree-`d` component.
    pub fn component_basis(&self, d: u32) -> Vec<(Word, usize)> {
        self.gb
            .normal_words(d)
            .iter()
            .flat_map(|w| (0..self.elements.len()).map(move |g| (w.clone(), g)))
            .collect()
    }

    pub fn coords(&self, x: &CrossedElem, d: u32) -> Vec<CycNum> {
        self.component_basis(d)
            .iter()
            .map(|k| x.get(k).cloned().unwrap_or_else(|| CycNum::zero(self.conductor())))
            .collect()
    }

    /// Basis of `{x in (AG_mu)_d : x^h = chi(h) x for all h}` for the
    /// character `chi = chi_g`.
    pub fn isotypic_component(&self, g: &GroupElem, d: u32) -> Result<Vec<Vec<CycNum>>> {
        self.check_degree(d)?;
        let basis = self.component_basis(d);
        let n = basis.len();
        let c = self.conductor();
        let group = self.group();
        let mut rows = Vec::new();
        for j in 0..group.rank() {
            let h = group.gen(j);
            let target = self.spec.duality().chi(g, &h);
            for (k, (w, gi)) in basis.iter().enumerate() {
                let mut row = vec![CycNum::zero(c); n];
                row[k] = &self.action_scalar(w, *gi, &h) - &target;
                rows.push(row);
            }
        }
        if rows.is_empty() || n == 0 {
            return Ok(span_basis(c, n, Matrix::identity(c, n).rows()));
        }
        Ok(span_basis(c, n, &Matrix::from_rows(c, rows)?.nullspace()))
    }

    pub fn diagonal_invariants(&self, d: u32) -> Result<Vec<Vec<CycNum>>> {
        self.isotypic_component(&self.group().identity(), d)
    }

    /// `Phi(v_1 ... v_k) = Phi(v_1) ... Phi(v_k)` with `Phi(v) = v ⊗ deg v`.
    pub fn phi_word(&self, w: &Word) -> Result<CrossedElem> {
        let grading = self.spec.grading();
        let degs: Vec<GroupElem> = w.letters().iter().map(|&l| grading.letter_degree(l).clone()).collect();
        let c = word_twist_scalar(&degs, self.spec.cocycle());
        let deg = grading.word_degree(w.letters());
        self.embed_poly(&NcPoly::monomial(w.clone(), c), &deg)
    }

    pub fn phi_poly(&self, p: &NcPoly) -> Result<CrossedElem> {
        let mut out = CrossedElem::new();
        for (w, c) in p.terms() {
            for (k, v) in self.phi_word(w)? {
                add_into(&mut out, k, &v * c);
            }
        }
        Ok(out)
    }

    /// `phi_g(a ⊗ h) = mu(h,g)/mu(g,h) (a ⊗ h)`.
    pub fn phi_g(&self, g: &GroupElem, x: &CrossedElem) -> CrossedElem {
        let mu = self.spec.cocycle();
        x.iter()
            .map(|((w, hi), c)| {
                let h = &self.elements[*hi];
                let s = mu
                    .value(h, g)
                    .checked_div(mu.value(g, h))
                    .expect("cocycle values are units");
                ((w.clone(), *hi), c * &s)
            })
            .collect()
    }
}

/// Per-degree record of the comparison between the twist and the invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: u32,
    pub dim_a: usize,
    pub dim_twisted: usize,
    pub dim_invariants: usize,
    pub image_rank: usize,
    pub image_invariant: bool,
    pub multiplicative: bool,
}

impl DegreeCheck {
    pub fn passed(&self) -> bool {
        self.dim_a == self.dim_twisted
            && self.dim_twisted == self.dim_invariants
            && self.image_rank == self.dim_invariants
            && self.image_invariant
            && self.multiplicative
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantIsoReport {
    pub relations_vanish: bool,
    pub degrees: Vec<DegreeCheck>,
}

impl InvariantIsoReport {
    pub fn passed(&self) -> bool {
        self.relations_vanish && self.degrees.iter().all(DegreeCheck::passed)
    }
}

fn is_zero_elem(x: &CrossedElem) -> bool {
    x.values().all(CycNum::is_zero)
}

/// Checks that `Phi` from the twisted presentation into `(AG_mu)^G` is a
/// well-defined, multiplicative, injective map onto the invariants in each
/// degree `<= bound`.
pub fn verify_invariant_iso(model: &CrossedModel, twisted: &GGrading, bound: u32) -> Result<InvariantIsoReport> {
    model.check_degree(bound)?;
    let tw_gb = TruncGB::compute(
        twisted.presentation(),
        bound.max(twisted.presentation().max_relation_degree()),
    )?;
    let relations_vanish = twisted
        .presentation()
        .relations()
        .iter()
        .filter(|r| r.n_degree(tw_gb.weights()).is_some_and(|d| d <= model.bound()))
        .map(|r| model.phi_poly(r).map(|x| is_zero_elem(&x)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|ok| ok);
    let group = twisted.group().clone();
    let degrees = (0..=bound)
        .into_par_iter()
        .map(|d| -> Result<DegreeCheck> {
            let words = tw_gb.normal_words(d);
            let images = words.iter().map(|w| model.phi_word(w)).collect::<Result<Vec<_>>>()?;
            let coords: Vec<Vec<CycNum>> = images.iter().map(|x| model.coords(x, d)).collect();
            let n = model.component_basis(d).len();
            let image_rank = span_basis(model.conductor(), n, &coords).len();
            let image_invariant = images
                .iter()
                .all(|x| group.elements().iter().all(|h| model.act(x, h) == *x));
            let mut multiplicative = true;
            for d1 in 0..=d {
                let d2 = d - d1;
                for u in tw_gb.normal_words(d1) {
                    let pu = model.phi_word(u)?;
                    for v in tw_gb.normal_words(d2) {
                        let prod = tw_gb.normal_form(&NcPoly::monomial(u.concat(v), CycNum::one(model.conductor())))?;
                        if model.phi_poly(&prod)? != model.mul(&pu, &model.phi_word(v)?)? {
                            multiplicative = false;
                        }
                    }
                }
            }
            Ok(DegreeCheck {
                degree: d,
                dim_a: model.gb.normal_words(d).len(),
                dim_twisted: words.len(),
                dim_invariants: model.diagonal_invariants(d)?.len(),
                image_rank,
                image_invariant,
                multiplicative,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantIsoReport {
        relations_vanish,
        degrees,
    })
}

/// Outcome of the bimodule-decomposition check for one group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiGReport {
    pub element: String,
    pub identity_when_trivial: bool,
    pub commutation: bool,
    pub multiplicative: bool,
    /// Per degree: (dim A_d, dim M^{chi_g}_d, left span equal, right span equal).
    pub components: Vec<(usize, usize, bool, bool)>,
}

impl PhiGReport {
    pub fn passed(&self) -> bool {
        self.identity_when_trivial
            && self.commutation
            && self.multiplicative
            && self.components.iter().all(|&(a, m, l, r)| a == m && l && r)
    }
}

/// Checks `x (1⊗g) = (1⊗g) phi_g(x)`, multiplicativity of `phi_g`, and
/// `M^{chi_g} = (1⊗g) Phi(A^{G,mu}) = Phi(A^{G,mu}) (1⊗g)` through `bound`.
pub fn phi_g_check(model: &CrossedModel, twisted: &GGrading, g: &GroupElem, bound: u32) -> Result<PhiGReport> {
    model.check_degree(bound)?;
    let group = twisted.group().clone();
    let tw_gb = TruncGB::compute(
        twisted.presentation(),
        bound.max(twisted.presentation().max_relation_degree()),
    )?;
    let one_g = model.one_tensor(g);
    let c = model.conductor();
    let mut identity_when_trivial = true;
    let mut commutation = true;
    let mut multiplicative = true;
    let mut components = Vec::new();
    for d in 0..=bound {
        let images = tw_gb
            .normal_words(d)
            .iter()
            .map(|w| model.phi_word(w))
            .collect::<Result<Vec<_>>>()?;
        for x in &images {
            let fx = model.phi_g(g, x);
            if *g == group.identity() && fx != *x {
                identity_when_trivial = false;
            }
            if model.mul(x, &one_g)? != model.mul(&one_g, &fx)? {
                commutation = false;
            }
        }
        for d1 in 0..=d {
            for u in tw_gb.normal_words(d1) {
                let pu = model.phi_word(u)?;
                for v in tw_gb.normal_words(d - d1) {
                    let pv = model.phi_word(v)?;
                    let lhs = model.mul(&model.phi_g(g, &pu), &model.phi_g(g, &pv))?;
                    let rhs = model.phi_g(g, &model.mul(&pu, &pv)?);
                    if lhs != rhs {
                        multiplicative = false;
                    }
                }
            }
        }
        let n = model.component_basis(d).len();
        let comp = model.isotypic_component(g, d)?;
        let left: Vec<_> = images
            .iter()
            .map(|x| model.mul(&one_g, x).map(|y| model.coords(&y, d)))
            .collect::<Result<_>>()?;
        let right: Vec<_> = images
            .iter()
            .map(|x| model.mul(x, &one_g).map(|y| model.coords(&y, d)))
            .collect::<Result<_>>()?;
        let left = span_basis(c, n, &left);
        let right = span_basis(c, n, &right);
        components.push((model.gb.normal_words(d).len(), comp.len(), left == comp, right == comp));
    }
    Ok(PhiGReport {
        element: group.display(g),
        identity_when_trivial,
        commutation,
        multiplicative,
        components,
    })
}
