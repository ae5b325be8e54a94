//! Graded group actions on presentations and the induced `G`-grading.

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::freealg::{change_basis, GenMap, NcPoly, Presentation};
use crate::gbasis::TruncGB;
use crate::grp::{AbGroup, Duality, GroupElem};
use crate::linalg::{span_basis, Matrix};

/// An action of `G` on the degree-one span (more generally, on the span of
/// the generators, degree block by degree block). `matrices[j]` acts for the
/// `j`-th group generator; row `i` holds the coordinates of the image of
/// generator `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAction {
    group: AbGroup,
    conductor: u32,
    matrices: Vec<Matrix>,
}

impl GradedAction {
    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::nrows)
    }

    /// Matrix of an arbitrary group element.
    pub fn element_matrix(&self, h: &GroupElem) -> Matrix {
        let mut acc = Matrix::identity(self.conductor, self.dim());
        for (j, &a) in h.coords().iter().enumerate() {
            for _ in 0..a {
                acc = acc.mul(&self.matrices[j]).expect("square matrices");
            }
        }
        acc
    }

    /// Image of the vector with coordinates `v` under `h`.
    pub fn apply_vec(&self, h: &GroupElem, v: &[CycNum]) -> Vec<CycNum> {
        self.element_matrix(h).transpose().apply(v)
    }

    /// The algebra automorphism of the free algebra induced by `h`.
    pub fn genmap(&self, h: &GroupElem) -> GenMap {
        GenMap::from_matrix(&self.element_matrix(h))
    }

    /// The action of the identity on every generator.
    pub fn trivial(group: &AbGroup, conductor: u32, n: usize) -> GradedAction {
        GradedAction {
            group: group.clone(),
            conductor,
            matrices: vec![Matrix::identity(conductor, n); group.rank()],
        }
    }
}

fn matrix_power(m: &Matrix, k: u32) -> Matrix {
    let mut acc = Matrix::identity(m.conductor(), m.nrows());
    for _ in 0..k {
        acc = acc.mul(m).expect("square");
    }
    acc
}

/// Checks that `matrices` define a graded action of `group` on `p`. Failing
/// checks are reported as [`Error::Action`] naming the check.
pub fn validate_action(p: &Presentation, group: &AbGroup, matrices: Vec<Matrix>) -> Result<GradedAction> {
    let n = p.num_generators();
    let weights = p.weights();
    if matrices.len() != group.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{} matrices for a group of rank {}",
            matrices.len(),
            group.rank()
        )));
    }
    let matrices = matrices
        .into_iter()
        .map(|m| {
            if m.conductor() == p.conductor() {
                Ok(m)
            } else {
                m.embed(p.conductor())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    for (j, m) in matrices.iter().enumerate() {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix for g{} is {}x{}, expected {n}x{n}",
                j + 1,
                m.nrows(),
                m.ncols()
            )));
        }
        m.inverse()?;
        for r in 0..n {
            for c in 0..n {
                if weights[r] != weights[c] && !m.get(r, c).is_zero() {
                    return Err(Error::Action(format!("g{} does not preserve generator degrees", j + 1)));
                }
            }
        }
    }
    for (j, m) in matrices.iter().enumerate() {
        if !matrix_power(m, group.factors()[j]).is_identity() {
            return Err(Error::Action(format!(
                "order: g{} does not have order dividing {}",
                j + 1,
                group.factors()[j]
            )));
        }
    }
    for a in 0..matrices.len() {
        for b in a + 1..matrices.len() {
            if matrices[a].mul(&matrices[b])? != matrices[b].mul(&matrices[a])? {
                return Err(Error::Action(format!(
                    "commuting: g{} and g{} do not commute",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let act = GradedAction {
        group: group.clone(),
        conductor: p.conductor(),
        matrices,
    };
    if !p.relations().is_empty() {
        let gb = TruncGB::compute(p, p.max_relation_degree())?;
        for j in 0..group.rank() {
            let map = act.genmap(&group.gen(j));
            for (k, r) in p.relations().iter().enumerate() {
                if !gb.contains(&map.apply(r)?)? {
                    return Err(Error::Action(format!(
                        "invariance: g{} maps relation {} outside the ideal",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
    }
    Ok(act)
}

/// A basis of simultaneous eigenvectors. Row `j` of `matrix` gives the
/// coordinates of new generator `j` in the old generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogBasis {
    pub names: Vec<String>,
    pub matrix: Matrix,
    pub inverse: Matrix,
    pub g_degree: Vec<GroupElem>,
}

fn aligned_duality(d: &Duality, conductor: u32) -> Result<Duality> {
    if d.conductor() == conductor {
        Ok(d.clone())
    } else {
        d.embed(conductor)
    }
}

/// Simultaneous eigenbasis of the action: new generators ordered by the
/// group element they belong to, then by pivot position; each scaled so its
/// first nonzero coordinate is 1.
pub fn isotypic_basis(p: &Presentation, act: &GradedAction, duality: &Duality) -> Result<HomogBasis> {
    if duality.group() != act.group() {
        return Err(Error::Duality("duality and action use different groups".into()));
    }
    let duality = aligned_duality(duality, act.conductor())?;
    let group = act.group();
    let n = act.dim();
    let conductor = act.conductor();
    let mut rows = Vec::with_capacity(n);
    let mut degrees = Vec::with_capacity(n);
    for g in group.elements() {
        let ginv = group.inv(&g);
        // stack (M_j^T - lambda_j I) over the group generators
        let mut system = Vec::new();
        for j in 0..group.rank() {
            let lambda = duality.chi(&ginv, &group.gen(j));
            let shifted = act.matrices()[j].transpose().sub(&scalar_matrix(conductor, n, &lambda));
            system.extend(shifted.rows().iter().cloned());
        }
        let eig = if system.is_empty() {
            Matrix::identity(conductor, n).rows().to_vec()
        } else {
            Matrix::from_rows(conductor, system)?.nullspace()
        };
        for v in span_basis(conductor, n, &eig) {
            rows.push(v);
            degrees.push(g.clone());
        }
    }
    if rows.len() != n {
        return Err(Error::Internal(format!(
            "eigenvectors span dimension {} of {n}",
            rows.len()
        )));
    }
    let matrix = Matrix::from_rows(conductor, rows)?;
    let inverse = matrix.inverse()?;
    let names = if matrix.is_identity() {
        p.names()
    } else {
        (1..=n).map(|k| format!("w{k}")).collect()
    };
    Ok(HomogBasis {
        names,
        matrix,
        inverse,
        g_degree: degrees,
    })
}

fn scalar_matrix(conductor: u32, n: usize, s: &CycNum) -> Matrix {
    let mut m = Matrix::zeros(conductor, n, n);
    for k in 0..n {
        m.set(k, k, s.clone());
    }
    m
}

/// A presentation in a `G`-homogeneous alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GGrading {
    presentation: Presentation,
    group: AbGroup,
    g_degree: Vec<GroupElem>,
}

impl GGrading {
    /// Attaches letter degrees; every relation must be `G`-homogeneous.
    pub fn new(presentation: Presentation, group: AbGroup, g_degree: Vec<GroupElem>) -> Result<GGrading> {
        if g_degree.len() != presentation.num_generators() {
            return Err(Error::DimensionMismatch(format!(
                "{} group degrees for {} generators",
                g_degree.len(),
                presentation.num_generators()
            )));
        }
        if let Some(g) = g_degree.iter().find(|g| !group.contains(g)) {
            return Err(Error::Group(format!("{g:?} is not an element of the group")));
        }
        let gr = GGrading {
            presentation,
            group,
            g_degree,
        };
        for (k, r) in gr.presentation.relations().iter().enumerate() {
            if gr.g_degree_of(r).is_none() {
                return Err(Error::Action(format!(
                    "relation {} is not homogeneous for the group grading",
                    k + 1
                )));
            }
        }
        Ok(gr)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn g_degrees(&self) -> &[GroupElem] {
        &self.g_degree
    }

    pub fn letter_degree(&self, l: usize) -> &GroupElem {
        &self.g_degree[l]
    }

    pub fn word_degree(&self, letters: &[usize]) -> GroupElem {
        letters
            .iter()
            .fold(self.group.identity(), |acc, &l| self.group.mul(&acc, &self.g_degree[l]))
    }

    /// Common group degree of all terms; `None` if they disagree. The zero
    /// polynomial has degree `e`.
    pub fn g_degree_of(&self, p: &NcPoly) -> Option<GroupElem> {
        let mut degs = p.terms().map(|(w, _)| self.word_degree(w.letters()));
        let first = degs.next().unwrap_or_else(|| self.group.identity());
        degs.all(|d| d == first).then_some(first)
    }

    /// Same presentation with every letter degree replaced by `f(degree)`.
    pub fn map_degrees(&self, f: impl Fn(&GroupElem) -> GroupElem) -> Result<GGrading> {
        GGrading::new(
            self.presentation.clone(),
            self.group.clone(),
            self.g_degree.iter().map(f).collect(),
        )
    }

    pub fn with_presentation(&self, presentation: Presentation) -> Result<GGrading> {
        GGrading::new(presentation, self.group.clone(), self.g_degree.clone())
    }

    /// The diagonal action `h(v) = chi_{g^-1}(h) v` on letters of degree `g`.
    pub fn scalar_action(&self, duality: &Duality, h: &GroupElem, letter: usize) -> CycNum {
        duality.chi(&self.group.inv(&self.g_degree[letter]), h)
    }
}

/// Rewrites the relations of `p` in the eigenbasis and records letter degrees.
pub fn regrade_presentation(p: &Presentation, b: &HomogBasis, group: &AbGroup) -> Result<GGrading> {
    let weights = p.weights();
    let relations = p
        .relations()
        .iter()
        .map(|r| change_basis(r, &b.inverse, &weights))
        .collect::<Result<Vec<_>>>()?;
    let generators = p
        .generators()
        .iter()
        .zip(&b.names)
        .map(|(g, name)| crate::freealg::GeneratorInfo::new(name.clone(), g.degree))
        .collect();
    let new = Presentation::new(p.conductor(), generators, relations)?;
    GGrading::new(new, group.clone(), b.g_degree.clone()).map_err(|e| match e {
        Error::Action(m) => Error::Internal(format!("regrading produced an inhomogeneous relation: {m}")),
        other => other,
    })
}

pub fn g_degree_of(p: &NcPoly, grading: &GGrading) -> Option<GroupElem> {
    grading.g_degree_of(p)
}
