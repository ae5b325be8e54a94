//! Words, noncommutative polynomials, graded presentations and
//! degree-preserving endomorphisms of free algebras.
//!
//! Words are ordered degree-lexicographically: longer words are larger, and
//! among words of equal length the first differing letter decides, with a
//! *smaller* generator index being *larger* (`x1 > x2 > x3`). So `x1*x2` leads
//! `x2*x1`. Every polynomial the engine compares is homogeneous, so word
//! length stands in for weighted degree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::linalg::Matrix;

/// A monomial of the free algebra, as a sequence of generator indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Word {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn n_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().map(|&l| weights[l]).sum()
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Positions at which `needle` occurs as a contiguous subword.
    pub fn occurrences(&self, needle: &Word) -> impl Iterator<Item = usize> + '_ {
        let n = needle.len();
        let hay = &self.0;
        let needle = needle.0.clone();
        (0..=hay.len().saturating_sub(n)).filter(move |&p| n <= hay.len() && hay[p..p + n] == needle[..])
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = self.names.get(letters[i]).map(String::as_str).unwrap_or("?");
            if j - i > 1 {
                write!(f, "{name}^{}", j - i)?;
            } else {
                write!(f, "{name}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// A noncommutative polynomial: a finite map from words to nonzero scalars.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, CycNum>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn monomial(word: Word, c: CycNum) -> NcPoly {
        let mut p = NcPoly::zero();
        p.add_term(word, c);
        p
    }

    pub fn constant(c: CycNum) -> NcPoly {
        NcPoly::monomial(Word::empty(), c)
    }

    pub fn generator(i: usize, conductor: u32) -> NcPoly {
        NcPoly::monomial(Word::letter(i), CycNum::one(conductor))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, CycNum)>) -> NcPoly {
        let mut p = NcPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Adds `c * word`, dropping the term when it cancels.
    pub fn add_term(&mut self, word: Word, c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &CycNum)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Option<&CycNum> {
        self.terms.get(w)
    }

    /// Largest word in the monomial order, with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &CycNum)> {
        self.terms.iter().next_back()
    }

    pub fn conductor(&self) -> Option<u32> {
        self.terms.values().next().map(CycNum::conductor)
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &CycNum) -> NcPoly {
        if s.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// `left * self * right` for words, scaled by `c`.
    pub fn sandwich(&self, left: &Word, right: &Word, c: &CycNum) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (left.concat(w).concat(right), a * c))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Word, &CycNum) -> CycNum) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(w, c))))
    }

    pub fn embed(&self, m: u32) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.embed(m)?);
        }
        Ok(out)
    }

    /// The common weighted degree of all words; `None` for zero or mixed degrees.
    pub fn n_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut degs = self.terms.keys().map(|w| w.n_degree(weights));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max()
    }

    /// Scaled copy with leading coefficient 1, and the factor divided out.
    pub fn monic(&self) -> (NcPoly, Option<CycNum>) {
        match self.leading() {
            None => (NcPoly::zero(), None),
            Some((_, lc)) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                let lc = lc.clone();
                (self.scale(&inv), Some(lc))
            }
        }
    }

    /// If `self = s * other` for a nonzero scalar `s`, returns `s`.
    pub fn scalar_multiple_of(&self, other: &NcPoly) -> Option<CycNum> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let (w, c) = other.leading()?;
        let s = self.terms.get(w)? / c;
        (other.scale(&s) == *self).then_some(s)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_letter().unwrap_or(0))
            .map(|i| format!("x{}", i + 1))
            .collect();
        write!(f, "{}", self.display(&names))
    }
}

/// Renders a polynomial in the relation grammar, leading term first.
pub struct PolyDisplay<'a> {
    poly: &'a NcPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c
                .coeffs()
                .iter()
                .find(|q| !q.is_zero())
                .is_some_and(|q| q.is_negative());
            let abs = if neg { -c } else { c.clone() };
            let body = match abs.as_rational() {
                Some(_) => abs.to_string(),
                None => format!("({abs})"),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if w.is_empty() {
                write!(f, "{}", body.trim_start_matches('(').trim_end_matches(')'))?;
            } else if body == "1" {
                write!(f, "{}", w.display(self.names))?;
            } else {
                write!(f, "{}*{}", body, w.display(self.names))?;
            }
        }
        Ok(())
    }
}

/// Evaluates a parsed expression as a polynomial over the named alphabet.
pub fn eval_poly(e: &Expr, conductor: u32, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<NcPoly> {
    let constant = |c: CycNum| Ok(NcPoly::constant(c));
    match e {
        Expr::Int(_) | Expr::ImagUnit | Expr::Zeta(_) => constant(e.eval_scalar(conductor, &|_| None)?),
        Expr::Var(v) => match lookup(v) {
            Some(i) => Ok(NcPoly::generator(i, conductor)),
            None => Err(Error::Alphabet(format!("unknown generator `{v}`"))),
        },
        Expr::Neg(a) => Ok(eval_poly(a, conductor, lookup)?.neg()),
        Expr::Add(a, b) => Ok(eval_poly(a, conductor, lookup)?.add(&eval_poly(b, conductor, lookup)?)),
        Expr::Sub(a, b) => Ok(eval_poly(a, conductor, lookup)?.sub(&eval_poly(b, conductor, lookup)?)),
        Expr::Mul(a, b) => Ok(eval_poly(a, conductor, lookup)?.mul(&eval_poly(b, conductor, lookup)?)),
        Expr::Div(a, b) => {
            let den = eval_poly(b, conductor, lookup)?;
            let s = match den.terms.len() {
                0 => return Err(Error::DivisionByZero),
                1 if den.terms.keys().next().unwrap().is_empty() => den.terms.values().next().unwrap().inv()?,
                _ => return Err(Error::Eval("division by a non-scalar".into())),
            };
            Ok(eval_poly(a, conductor, lookup)?.scale(&s))
        }
        Expr::Pow(a, b) => {
            let n = b.eval_int(&|_| None)?;
            let base = eval_poly(a, conductor, lookup)?;
            if n < 0 {
                let s = match base.terms.iter().next() {
                    Some((w, c)) if base.terms.len() == 1 && w.is_empty() => c.pow(n),
                    _ => return Err(Error::Eval("negative power of a non-scalar".into())),
                };
                return Ok(NcPoly::constant(s));
            }
            let mut acc = NcPoly::constant(CycNum::one(conductor));
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            Ok(acc)
        }
        Expr::Commutator(a, b) => {
            let (x, y) = (eval_poly(a, conductor, lookup)?, eval_poly(b, conductor, lookup)?);
            Ok(x.mul(&y).sub(&y.mul(&x)))
        }
        Expr::AntiCommutator(a, b) => {
            let (x, y) = (eval_poly(a, conductor, lookup)?, eval_poly(b, conductor, lookup)?);
            Ok(x.mul(&y).add(&y.mul(&x)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorInfo {
    pub name: String,
    pub degree: u32,
}

impl GeneratorInfo {
    pub fn new(name: impl Into<String>, degree: u32) -> GeneratorInfo {
        GeneratorInfo {
            name: name.into(),
            degree,
        }
    }
}

/// A finitely presented connected graded algebra: generators with positive
/// degrees and homogeneous relations, each scaled to leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    conductor: u32,
    generators: Vec<GeneratorInfo>,
    relations: Vec<NcPoly>,
}

impl Presentation {
    pub fn new(conductor: u32, generators: Vec<GeneratorInfo>, relations: Vec<NcPoly>) -> Result<Presentation> {
        let mut seen = HashSet::new();
        for g in &generators {
            if g.degree == 0 {
                return Err(Error::Input(format!("generator `{}` has degree 0", g.name)));
            }
            let valid = g
                .name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || g.name == "i" || g.name == "zeta" {
                return Err(Error::Input(format!("invalid generator name `{}`", g.name)));
            }
            if !seen.insert(g.name.clone()) {
                return Err(Error::Input(format!("duplicate generator `{}`", g.name)));
            }
        }
        let weights: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
        let mut canon = Vec::with_capacity(relations.len());
        for r in relations {
            if r.is_zero() {
                return Err(Error::ZeroRelation);
            }
            if let Some(c) = r.terms().map(|(_, c)| c.conductor()).find(|&c| c != conductor) {
                return Err(Error::ConductorMismatch(conductor, c));
            }
            if r.max_letter().is_some_and(|m| m >= generators.len()) {
                return Err(Error::Alphabet("relation uses an undeclared generator".into()));
            }
            match r.n_degree(&weights) {
                None => return Err(Error::Inhomogeneous(r.display(&names).to_string())),
                Some(0) => {
                    return Err(Error::Input(
                        "constant relation: the algebra would not be connected graded".into(),
                    ))
                }
                Some(_) => {}
            }
            canon.push(r.monic().0);
        }
        Ok(Presentation {
            conductor,
            generators,
            relations: canon,
        })
    }

    /// Parses relation strings over the given generators.
    pub fn parse(conductor: u32, generators: Vec<GeneratorInfo>, relations: &[&str]) -> Result<Presentation> {
        let rels = parse_relations(conductor, &generators, relations)?;
        Presentation::new(conductor, generators, rels)
    }

    /// Degree-1 generators named `names`.
    pub fn with_degree_one(conductor: u32, names: &[&str], relations: &[&str]) -> Result<Presentation> {
        let gens = names.iter().map(|n| GeneratorInfo::new(*n, 1)).collect();
        Presentation::parse(conductor, gens, relations)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn generators(&self) -> &[GeneratorInfo] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[NcPoly] {
        &self.relations
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn max_relation_degree(&self) -> u32 {
        let w = self.weights();
        self.relations.iter().filter_map(|r| r.n_degree(&w)).max().unwrap_or(0)
    }

    pub fn relation_degree(&self, k: usize) -> u32 {
        self.relations[k]
            .n_degree(&self.weights())
            .expect("homogeneous relation")
    }

    pub fn with_relations(&self, relations: Vec<NcPoly>) -> Result<Presentation> {
        Presentation::new(self.conductor, self.generators.clone(), relations)
    }

    pub fn with_names(&self, names: &[String]) -> Result<Presentation> {
        if names.len() != self.generators.len() {
            return Err(Error::DimensionMismatch("generator name count".into()));
        }
        let gens = self
            .generators
            .iter()
            .zip(names)
            .map(|(g, n)| GeneratorInfo::new(n.clone(), g.degree))
            .collect();
        Presentation::new(self.conductor, gens, self.relations.clone())
    }

    pub fn embed(&self, m: u32) -> Result<Presentation> {
        let rels = self.relations.iter().map(|r| r.embed(m)).collect::<Result<Vec<_>>>()?;
        Presentation::new(m, self.generators.clone(), rels)
    }

    /// Relation sets agree as sets of canonical polynomials.
    pub fn same_relations(&self, other: &Presentation) -> bool {
        let mut a: Vec<&NcPoly> = self.relations.iter().collect();
        let mut b: Vec<&NcPoly> = other.relations.iter().collect();
        a.sort_by_key(|x| poly_key(x));
        b.sort_by_key(|x| poly_key(x));
        self.generators == other.generators && a == b
    }

    pub fn display_relation(&self, k: usize) -> String {
        self.relations[k].display(&self.names()).to_string()
    }
}

fn poly_key(p: &NcPoly) -> (Vec<Word>, String) {
    let words = p.terms().map(|(w, _)| w.clone()).collect();
    (words, format!("{p:?}"))
}

pub fn parse_relations(conductor: u32, generators: &[GeneratorInfo], relations: &[&str]) -> Result<Vec<NcPoly>> {
    let lookup = |n: &str| generators.iter().position(|g| g.name == n);
    relations
        .iter()
        .map(|s| {
            let e = expr::parse(s)?;
            eval_poly(&e, conductor, &lookup)
        })
        .collect()
}

/// An algebra endomorphism of the free algebra, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMap {
    images: Vec<NcPoly>,
}

impl GenMap {
    pub fn new(images: Vec<NcPoly>) -> GenMap {
        GenMap { images }
    }

    pub fn identity(n: usize, conductor: u32) -> GenMap {
        GenMap {
            images: (0..n).map(|i| NcPoly::generator(i, conductor)).collect(),
        }
    }

    /// The linear substitution `x_i -> sum_k m[i][k] x_k`.
    pub fn from_matrix(m: &Matrix) -> GenMap {
        GenMap {
            images: (0..m.nrows())
                .map(|i| NcPoly::from_terms(m.row(i).iter().enumerate().map(|(k, c)| (Word::letter(k), c.clone()))))
                .collect(),
        }
    }

    pub fn images(&self) -> &[NcPoly] {
        &self.images
    }

    /// Each image must be homogeneous of its generator's degree.
    pub fn check_degrees(&self, source: &[u32], target: &[u32]) -> Result<()> {
        if self.images.len() != source.len() {
            return Err(Error::Alphabet(format!(
                "map has {} images for {} generators",
                self.images.len(),
                source.len()
            )));
        }
        for (i, img) in self.images.iter().enumerate() {
            if img.max_letter().is_some_and(|m| m >= target.len()) {
                return Err(Error::Alphabet("image uses an undeclared generator".into()));
            }
            if !img.is_zero() && img.n_degree(target) != Some(source[i]) {
                return Err(Error::Input(format!(
                    "image of generator {i} is not of degree {}",
                    source[i]
                )));
            }
        }
        Ok(())
    }

    /// Applies the unique algebra-endomorphism extension.
    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly> {
        if p.max_letter().is_some_and(|m| m >= self.images.len()) {
            return Err(Error::Alphabet(
                "polynomial uses a letter outside the map's domain".into(),
            ));
        }
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            let mut acc = NcPoly::constant(c.clone());
            for &l in w.letters() {
                acc = acc.mul(&self.images[l]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &GenMap) -> Result<GenMap> {
        Ok(GenMap {
            images: other.images.iter().map(|p| self.apply(p)).collect::<Result<_>>()?,
        })
    }
}

/// Rewrites `p` after the substitution `y_j -> sum_i basis[j][i] z_i`.
/// `weights` are the generator degrees; the matrix may only mix generators of
/// equal degree.
pub fn change_basis(p: &NcPoly, basis: &Matrix, weights: &[u32]) -> Result<NcPoly> {
    if !basis.is_square() || basis.nrows() != weights.len() {
        return Err(Error::DimensionMismatch(
            "basis matrix does not match the alphabet".into(),
        ));
    }
    for r in 0..basis.nrows() {
        for c in 0..basis.ncols() {
            if weights[r] != weights[c] && !basis.get(r, c).is_zero() {
                return Err(Error::Input(
                    "basis change mixes generators of different degrees".into(),
                ));
            }
        }
    }
    basis.inverse()?;
    GenMap::from_matrix(basis).apply(p)
}
