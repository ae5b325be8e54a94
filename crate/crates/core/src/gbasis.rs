//! Degree-truncated two-sided Gröbner bases in free algebras.
//!
//! All inputs are homogeneous, so completion runs degree by degree: the
//! overlaps of weighted degree `d` come only from basis elements of lower
//! degree, and the new elements of degree `d` are interreduced by Gaussian
//! elimination before moving on. Every conclusion drawn from a [`TruncGB`]
//! holds "through degree `bound`"; nothing here claims global completeness.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::freealg::{GenMap, NcPoly, Presentation, Word};
use crate::linalg::{span_basis, Matrix};

/// Default completion bound.
pub const DEFAULT_DEGREE: u32 = 6;

/// A reduced Gröbner basis complete through weighted degree `bound`.
#[derive(Clone, Debug)]
pub struct TruncGB {
    conductor: u32,
    weights: Vec<u32>,
    elements: Vec<NcPoly>,
    leads: HashMap<Word, usize>,
    lead_lens: BTreeSet<usize>,
    bound: u32,
    normal_words: Vec<Vec<Word>>,
    normal_index: Vec<HashMap<Word, usize>>,
}

/// `dim A_0, ..., dim A_D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertPrefix {
    pub dims: Vec<u64>,
}

/// A place where a basis element's leading word occurs inside a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionSite {
    pub word: Word,
    pub element: usize,
    pub position: usize,
}

fn overlaps(f: &NcPoly, g: &NcPoly, weights: &[u32], bound: u32, out: &mut BTreeMap<u32, Vec<NcPoly>>) {
    let u = f.leading().expect("nonzero").0;
    let v = g.leading().expect("nonzero").0;
    let one = CycNum::one(f.leading().unwrap().1.conductor());
    for k in 1..u.len().min(v.len()) {
        if u.letters()[u.len() - k..] != v.letters()[..k] {
            continue;
        }
        let tail = v.subword(k, v.len());
        let head = u.subword(0, u.len() - k);
        let deg = u.n_degree(weights) + tail.n_degree(weights);
        if deg > bound {
            continue;
        }
        let s = f
            .sandwich(&Word::empty(), &tail, &one)
            .sub(&g.sandwich(&head, &Word::empty(), &one));
        out.entry(deg).or_default().push(s);
    }
}

impl TruncGB {
    fn empty(conductor: u32, weights: Vec<u32>, bound: u32) -> TruncGB {
        TruncGB {
            conductor,
            weights,
            elements: Vec::new(),
            leads: HashMap::new(),
            lead_lens: BTreeSet::new(),
            bound,
            normal_words: Vec::new(),
            normal_index: Vec::new(),
        }
    }

    fn push(&mut self, p: NcPoly) {
        let lead = p.leading().expect("nonzero").0.clone();
        self.lead_lens.insert(lead.len());
        self.leads.insert(lead, self.elements.len());
        self.elements.push(p);
    }

    /// Completes the relations of `p` through weighted degree `bound` under deglex.
    pub fn compute(p: &Presentation, bound: u32) -> Result<TruncGB> {
        let max_rel = p.max_relation_degree();
        if bound < max_rel {
            return Err(Error::DegreeBound { degree: max_rel, bound });
        }
        TruncGB::complete(p.conductor(), p.weights(), p.relations(), bound)
    }

    /// Completion of arbitrary homogeneous generators.
    pub fn complete(conductor: u32, weights: Vec<u32>, relations: &[NcPoly], bound: u32) -> Result<TruncGB> {
        let mut gb = TruncGB::empty(conductor, weights, bound);
        let mut pending: BTreeMap<u32, Vec<NcPoly>> = BTreeMap::new();
        for r in relations {
            let d = r
                .n_degree(&gb.weights)
                .ok_or_else(|| Error::Inhomogeneous(format!("{r:?}")))?;
            if d <= bound {
                pending.entry(d).or_default().push(r.clone());
            }
        }
        while let Some((d, cands)) = pending.pop_first() {
            let reduced: Vec<NcPoly> = cands
                .iter()
                .map(|c| gb.reduce_unchecked(c))
                .filter(|r| !r.is_zero())
                .collect();
            for new in gb.interreduce_degree(&reduced) {
                let start = gb.elements.len();
                gb.push(new);
                let f = &gb.elements[start];
                let mut found = BTreeMap::new();
                for g in &gb.elements {
                    overlaps(f, g, &gb.weights, bound, &mut found);
                    if g != f {
                        overlaps(g, f, &gb.weights, bound, &mut found);
                    }
                }
                for (deg, polys) in found {
                    debug_assert!(deg > d);
                    pending.entry(deg).or_default().extend(polys);
                }
            }
        }
        gb.elements
            .sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
        gb.leads = gb
            .elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.leading().unwrap().0.clone(), i))
            .collect();
        gb.build_normal_words();
        Ok(gb)
    }

    /// Row-reduces same-degree polynomials into monic ones with distinct
    /// leading words, each free of the others' leading words.
    fn interreduce_degree(&self, polys: &[NcPoly]) -> Vec<NcPoly> {
        if polys.is_empty() {
            return Vec::new();
        }
        let mut words: BTreeSet<Word> = BTreeSet::new();
        for p in polys {
            words.extend(p.terms().map(|(w, _)| w.clone()));
        }
        // columns in descending word order so pivots are leading words
        let cols: Vec<Word> = words.into_iter().rev().collect();
        let index: HashMap<&Word, usize> = cols.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let rows: Vec<Vec<CycNum>> = polys
            .iter()
            .map(|p| {
                let mut row = vec![CycNum::zero(self.conductor); cols.len()];
                for (w, c) in p.terms() {
                    row[index[w]] = c.clone();
                }
                row
            })
            .collect();
        span_basis(self.conductor, cols.len(), &rows)
            .into_iter()
            .map(|row| NcPoly::from_terms(cols.iter().cloned().zip(row)))
            .collect()
    }

    fn build_normal_words(&mut self) {
        let bound = self.bound as usize;
        let mut by_deg: Vec<Vec<Word>> = vec![Vec::new(); bound + 1];
        by_deg[0].push(Word::empty());
        for d in 0..=bound {
            let current = by_deg[d].clone();
            for w in current {
                for (a, &wt) in self.weights.iter().enumerate() {
                    let nd = d + wt as usize;
                    if nd > bound {
                        continue;
                    }
                    let mut ext = w.clone();
                    ext.0.push(a);
                    if !self.has_lead_suffix(&ext) {
                        by_deg[nd].push(ext);
                    }
                }
            }
        }
        for ws in by_deg.iter_mut() {
            ws.sort();
            ws.reverse();
        }
        self.normal_index = by_deg
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        self.normal_words = by_deg;
    }

    fn has_lead_suffix(&self, w: &Word) -> bool {
        self.lead_lens
            .iter()
            .take_while(|&&l| l <= w.len())
            .any(|&l| self.leads.contains_key(&w.subword(w.len() - l, w.len())))
    }

    fn find_divisor(&self, w: &Word) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for &l in &self.lead_lens {
                if start + l > w.len() {
                    break;
                }
                if let Some(&e) = self.leads.get(&w.letters()[start..start + l].to_vec().into_word()) {
                    return Some((e, start));
                }
            }
        }
        None
    }

    fn reduce_unchecked(&self, p: &NcPoly) -> NcPoly {
        let mut work = p.clone();
        let mut done = NcPoly::zero();
        while let Some((w, c)) = work.leading().map(|(w, c)| (w.clone(), c.clone())) {
            match self.find_divisor(&w) {
                None => {
                    work.add_term(w.clone(), -&c);
                    done.add_term(w, c);
                }
                Some((e, pos)) => {
                    let g = &self.elements[e];
                    let l = g.leading().unwrap().0.len();
                    let left = w.subword(0, pos);
                    let right = w.subword(pos + l, w.len());
                    // g is monic: subtracting c * left g right removes w exactly
                    work = work.sub(&g.sandwich(&left, &right, &c));
                }
            }
        }
        done
    }

    fn check_degree(&self, p: &NcPoly) -> Result<()> {
        let max = p.terms().map(|(w, _)| w.n_degree(&self.weights)).max().unwrap_or(0);
        if max > self.bound {
            return Err(Error::DegreeBound {
                degree: max,
                bound: self.bound,
            });
        }
        if p.max_letter().is_some_and(|m| m >= self.weights.len()) {
            return Err(Error::Alphabet("letter outside the presentation".into()));
        }
        Ok(())
    }

    /// Complete reduction; zero iff `p` lies in the ideal (through `bound`).
    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        self.check_degree(p)?;
        Ok(self.reduce_unchecked(p))
    }

    pub fn contains(&self, p: &NcPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn elements(&self) -> &[NcPoly] {
        &self.elements
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Words of weighted degree `d` avoiding every leading word, in
    /// descending monomial order.
    pub fn normal_words(&self, d: u32) -> &[Word] {
        &self.normal_words[d as usize]
    }

    pub fn hilbert(&self) -> HilbertPrefix {
        HilbertPrefix {
            dims: self.normal_words.iter().map(|ws| ws.len() as u64).collect(),
        }
    }

    /// Coordinates of a normal-form polynomial of degree `d` on the normal words.
    pub fn coords(&self, nf: &NcPoly, d: u32) -> Vec<CycNum> {
        let idx = &self.normal_index[d as usize];
        let mut v = vec![CycNum::zero(self.conductor); idx.len()];
        for (w, c) in nf.terms() {
            v[*idx.get(w).expect("normal word of the right degree")] = c.clone();
        }
        v
    }

    /// The polynomial with the given coordinates on degree-`d` normal words.
    pub fn from_coords(&self, v: &[CycNum], d: u32) -> NcPoly {
        NcPoly::from_terms(self.normal_words[d as usize].iter().cloned().zip(v.iter().cloned()))
    }

    /// All places a leading word divides a term of `p`.
    pub fn reduction_sites(&self, p: &NcPoly) -> Vec<ReductionSite> {
        let mut out = Vec::new();
        for (w, _) in p.terms() {
            for start in 0..w.len() {
                for &l in &self.lead_lens {
                    if start + l > w.len() {
                        break;
                    }
                    if let Some(&e) = self.leads.get(&w.letters()[start..start + l].to_vec().into_word()) {
                        out.push(ReductionSite {
                            word: w.clone(),
                            element: e,
                            position: start,
                        });
                    }
                }
            }
        }
        out
    }

    /// Performs the single rewrite described by `site`.
    pub fn rewrite(&self, p: &NcPoly, site: &ReductionSite) -> NcPoly {
        let c = p.coeff(&site.word).expect("site word is a term").clone();
        let g = &self.elements[site.element];
        let l = g.leading().unwrap().0.len();
        let left = site.word.subword(0, site.position);
        let right = site.word.subword(site.position + l, site.word.len());
        p.sub(&g.sandwich(&left, &right, &c))
    }

    /// The elements of degree at most `d`, as a basis truncated at `d`.
    pub fn truncate(&self, d: u32) -> TruncGB {
        let elements: Vec<NcPoly> = self
            .elements
            .iter()
            .filter(|p| p.n_degree(&self.weights).is_some_and(|e| e <= d))
            .cloned()
            .collect();
        let mut gb = TruncGB::empty(self.conductor, self.weights.clone(), d.min(self.bound));
        for e in elements {
            gb.push(e);
        }
        gb.build_normal_words();
        gb
    }
}

trait IntoWord {
    fn into_word(self) -> Word;
}

impl IntoWord for Vec<usize> {
    fn into_word(self) -> Word {
        Word(self)
    }
}

pub fn truncated_gb(p: &Presentation, bound: u32) -> Result<TruncGB> {
    TruncGB::compute(p, bound)
}

pub fn normal_form(p: &NcPoly, gb: &TruncGB) -> Result<NcPoly> {
    gb.normal_form(p)
}

pub fn hilbert_coeffs(p: &Presentation, bound: u32) -> Result<HilbertPrefix> {
    let bound = bound.max(p.max_relation_degree());
    Ok(TruncGB::compute(p, bound)?.hilbert())
}

/// Whether `poly` lies in the relation ideal of `p`, decided through `bound`.
pub fn ideal_contains(poly: &NcPoly, p: &Presentation, bound: u32) -> Result<bool> {
    let d = poly.terms().map(|(w, _)| w.n_degree(&p.weights())).max().unwrap_or(0);
    if d > bound {
        return Err(Error::DegreeBound { degree: d, bound });
    }
    let gb = TruncGB::compute(p, bound.max(p.max_relation_degree()))?;
    gb.contains(poly)
}

fn mult_images(gb: &TruncGB, a: &NcPoly, deg_a: u32, d: u32, left: bool) -> Vec<Vec<CycNum>> {
    gb.normal_words(d)
        .iter()
        .map(|w| {
            let wp = NcPoly::monomial(w.clone(), CycNum::one(gb.conductor));
            let prod = if left { a.mul(&wp) } else { wp.mul(a) };
            let nf = gb.reduce_unchecked(&prod);
            gb.coords(&nf, d + deg_a)
        })
        .collect()
}

fn homogeneous_degree(a: &NcPoly, weights: &[u32]) -> Result<u32> {
    a.n_degree(weights)
        .ok_or_else(|| Error::Inhomogeneous(format!("{a:?}")))
}

/// Whether left and right multiplication by `a` are injective on `A_d` for
/// every `d <= bound - deg(a)`. Returns `(left, right)`.
pub fn is_regular_to_degree(a: &NcPoly, p: &Presentation, bound: u32) -> Result<(bool, bool)> {
    let gb = TruncGB::compute(p, bound.max(p.max_relation_degree()))?;
    regular_with(a, &gb, bound)
}

pub fn regular_with(a: &NcPoly, gb: &TruncGB, bound: u32) -> Result<(bool, bool)> {
    let da = homogeneous_degree(a, gb.weights())?;
    let mut left_ok = true;
    let mut right_ok = true;
    for d in 0..=bound.saturating_sub(da) {
        if da > bound {
            break;
        }
        let n = gb.normal_words(d).len();
        let target = gb.normal_words(d + da).len();
        if left_ok {
            let imgs = mult_images(gb, a, da, d, true);
            left_ok = span_basis(gb.conductor, target, &imgs).len() == n;
        }
        if right_ok {
            let imgs = mult_images(gb, a, da, d, false);
            right_ok = span_basis(gb.conductor, target, &imgs).len() == n;
        }
    }
    Ok((left_ok, right_ok))
}

/// Whether `a A_d = A_d a` for every `d <= bound - deg(a)`.
pub fn is_normal_to_degree(a: &NcPoly, p: &Presentation, bound: u32) -> Result<bool> {
    let gb = TruncGB::compute(p, bound.max(p.max_relation_degree()))?;
    let da = homogeneous_degree(a, gb.weights())?;
    if da > bound {
        return Ok(true);
    }
    for d in 0..=bound - da {
        let target = gb.normal_words(d + da).len();
        let l = span_basis(gb.conductor, target, &mult_images(&gb, a, da, d, true));
        let r = span_basis(gb.conductor, target, &mult_images(&gb, a, da, d, false));
        if l != r {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoStatus {
    /// Relation sets agree up to per-relation scalars under the map.
    Syntactic,
    /// Relation images lie in the target ideal and Hilbert prefixes agree
    /// through the stated degree.
    VerifiedToDegree(u32),
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct IsoVerdict {
    pub status: IsoStatus,
    pub degree: u32,
    /// For a syntactic match: `image(rel_i) = scalar_i * target_rel_{j_i}`.
    pub scalars: Option<Vec<CycNum>>,
    pub matched: Option<Vec<usize>>,
    /// Per source relation: image lies in the target ideal.
    pub relation_checks: Vec<bool>,
    pub hilbert_lhs: HilbertPrefix,
    pub hilbert_rhs: HilbertPrefix,
    pub inverse_checks: Option<Vec<bool>>,
}

impl IsoVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self.status, IsoStatus::Failed(_))
    }
}

/// Matches each mapped relation to a distinct target relation up to a
/// nonzero scalar; `Some((scalars, targets))` on success.
pub fn syntactic_match(mapped: &[NcPoly], target: &[NcPoly]) -> Option<(Vec<CycNum>, Vec<usize>)> {
    if mapped.len() != target.len() {
        return None;
    }
    let mut used = vec![false; target.len()];
    let mut scalars = Vec::with_capacity(mapped.len());
    let mut idx = Vec::with_capacity(mapped.len());
    for m in mapped {
        let (j, s) = target
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .find_map(|(j, t)| m.scalar_multiple_of(t).map(|s| (j, s)))?;
        used[j] = true;
        scalars.push(s);
        idx.push(j);
    }
    Some((scalars, idx))
}

/// Certifies necessary conditions for `m` to induce an isomorphism
/// `lhs -> rhs`, exactly, through degree `bound`.
pub fn verify_iso(
    lhs: &Presentation,
    rhs: &Presentation,
    m: &GenMap,
    bound: u32,
    inverse: Option<&GenMap>,
) -> Result<IsoVerdict> {
    let need = lhs.max_relation_degree().max(rhs.max_relation_degree());
    if bound < need {
        return Err(Error::DegreeBound { degree: need, bound });
    }
    if lhs.conductor() != rhs.conductor() {
        return Err(Error::ConductorMismatch(lhs.conductor(), rhs.conductor()));
    }
    m.check_degrees(&lhs.weights(), &rhs.weights())?;
    let mapped: Vec<NcPoly> = lhs.relations().iter().map(|r| m.apply(r)).collect::<Result<_>>()?;
    let gb_l = TruncGB::compute(lhs, bound)?;
    let gb_r = TruncGB::compute(rhs, bound)?;
    let relation_checks: Vec<bool> = mapped.iter().map(|r| gb_r.contains(r)).collect::<Result<_>>()?;
    let inverse_checks = match inverse {
        Some(inv) => {
            inv.check_degrees(&rhs.weights(), &lhs.weights())?;
            Some(
                rhs.relations()
                    .iter()
                    .map(|r| gb_l.contains(&inv.apply(r)?))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        None => None,
    };
    let (hl, hr) = (gb_l.hilbert(), gb_r.hilbert());
    let syntactic = syntactic_match(&mapped, rhs.relations());
    let status = if let Some(k) = relation_checks.iter().position(|ok| !ok) {
        IsoStatus::Failed(format!("relation {} does not map into the target ideal", k + 1))
    } else if hl != hr {
        IsoStatus::Failed("Hilbert prefixes differ".into())
    } else if inverse_checks.as_ref().is_some_and(|v| v.iter().any(|ok| !ok)) {
        IsoStatus::Failed("inverse map fails on a target relation".into())
    } else if syntactic.is_some() {
        IsoStatus::Syntactic
    } else {
        IsoStatus::VerifiedToDegree(bound)
    };
    let (scalars, matched) = match syntactic {
        Some((s, j)) => (Some(s), Some(j)),
        None => (None, None),
    };
    Ok(IsoVerdict {
        status,
        degree: bound,
        scalars,
        matched,
        relation_checks,
        hilbert_lhs: hl,
        hilbert_rhs: hr,
        inverse_checks,
    })
}

/// Dense matrix of the degree-`d` relation consequences `u r w`, over the
/// basis of all words of weighted degree `d` (in descending order).
pub fn consequence_matrix(p: &Presentation, d: u32) -> Result<(Vec<Word>, Matrix)> {
    let weights = p.weights();
    let mut words: Vec<Word> = vec![Word::empty()];
    let mut all_by_deg: Vec<Vec<Word>> = vec![Vec::new(); d as usize + 1];
    all_by_deg[0].push(Word::empty());
    while let Some(w) = words.pop() {
        for (a, &wt) in weights.iter().enumerate() {
            let nd = w.n_degree(&weights) + wt;
            if nd <= d {
                let mut e = w.clone();
                e.0.push(a);
                all_by_deg[nd as usize].push(e.clone());
                words.push(e);
            }
        }
    }
    let mut basis = all_by_deg[d as usize].clone();
    basis.sort();
    basis.reverse();
    let index: HashMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let one = CycNum::one(p.conductor());
    let mut rows = Vec::new();
    for r in p.relations() {
        let dr = r.n_degree(&weights).unwrap();
        if dr > d {
            continue;
        }
        for dl in 0..=(d - dr) {
            for u in &all_by_deg[dl as usize] {
                for v in &all_by_deg[(d - dr - dl) as usize] {
                    let s = r.sandwich(u, v, &one);
                    let mut row = vec![CycNum::zero(p.conductor()); basis.len()];
                    for (w, c) in s.terms() {
                        row[index[w]] = c.clone();
                    }
                    rows.push(row);
                }
            }
        }
    }
    let m = if rows.is_empty() {
        Matrix::zeros(p.conductor(), 0, basis.len())
    } else {
        Matrix::from_rows(p.conductor(), rows)?
    };
    Ok((basis, m))
}
