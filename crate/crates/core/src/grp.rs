//! Finite abelian groups, dualities `G -> G^`, normalized 2-cocycles and
//! their cohomology classes.

use std::fmt;

use num_integer::Integer;

use crate::cyclo::{lcm, CycNum};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// A group element as residues modulo the cyclic factor orders.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElem(pub Vec<u32>);

impl GroupElem {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

/// `C_{n_1} x ... x C_{n_r}` with chosen cyclic generators `g1, ..., gr`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AbGroup {
    factors: Vec<u32>,
}

impl AbGroup {
    pub fn new(factors: Vec<u32>) -> Result<AbGroup> {
        if let Some(&n) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::Group(format!("cyclic factor of order {n}; orders must be >= 2")));
        }
        Ok(AbGroup { factors })
    }

    /// The Klein four-group `(C_2)^2`.
    pub fn klein() -> AbGroup {
        AbGroup { factors: vec![2, 2] }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|&n| n as usize).product()
    }

    pub fn exponent(&self) -> u32 {
        self.factors.iter().fold(1, |a, &n| lcm(a, n))
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem(vec![0; self.rank()])
    }

    /// The `j`-th chosen generator (0-based).
    pub fn gen(&self, j: usize) -> GroupElem {
        let mut v = vec![0; self.rank()];
        v[j] = 1 % self.factors[j];
        GroupElem(v)
    }

    /// Index in the enumeration order: mixed radix, first coordinate most significant.
    pub fn index(&self, g: &GroupElem) -> usize {
        g.0.iter()
            .zip(&self.factors)
            .fold(0, |acc, (&a, &n)| acc * n as usize + a as usize)
    }

    pub fn element(&self, mut idx: usize) -> GroupElem {
        let mut v = vec![0; self.rank()];
        for j in (0..self.rank()).rev() {
            let n = self.factors[j] as usize;
            v[j] = (idx % n) as u32;
            idx /= n;
        }
        GroupElem(v)
    }

    pub fn elements(&self) -> Vec<GroupElem> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        g.0.len() == self.rank() && g.0.iter().zip(&self.factors).all(|(&a, &n)| a < n)
    }

    pub fn mul(&self, g: &GroupElem, h: &GroupElem) -> GroupElem {
        GroupElem(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.factors)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        )
    }

    pub fn inv(&self, g: &GroupElem) -> GroupElem {
        GroupElem(g.0.iter().zip(&self.factors).map(|(&a, &n)| (n - a) % n).collect())
    }

    pub fn pow(&self, g: &GroupElem, k: i64) -> GroupElem {
        GroupElem(
            g.0.iter()
                .zip(&self.factors)
                .map(|(&a, &n)| ((a as i64 * k).rem_euclid(n as i64)) as u32)
                .collect(),
        )
    }

    pub fn elem_order(&self, g: &GroupElem) -> u32 {
        g.0.iter().zip(&self.factors).map(|(&a, &n)| n / a.gcd(&n)).fold(1, lcm)
    }

    pub fn display(&self, g: &GroupElem) -> String {
        let parts: Vec<String> =
            g.0.iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(j, &a)| {
                    if a == 1 {
                        format!("g{}", j + 1)
                    } else {
                        format!("g{}^{a}", j + 1)
                    }
                })
                .collect();
        if parts.is_empty() {
            "e".into()
        } else {
            parts.join("*")
        }
    }

    /// Parses `e`, `g1`, `g2^3`, `g1*g2`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElem> {
        let s = s.trim();
        let mut v = vec![0u32; self.rank()];
        if s == "e" || s == "1" {
            return Ok(GroupElem(v));
        }
        for part in s.split('*') {
            let part = part.trim();
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<i64>().map_err(|_| bad_elem(s))?),
                None => (part, 1),
            };
            let j: usize = base
                .strip_prefix('g')
                .and_then(|d| d.parse().ok())
                .filter(|&j: &usize| j >= 1 && j <= self.rank())
                .ok_or_else(|| bad_elem(s))?;
            let n = self.factors[j - 1] as i64;
            v[j - 1] = ((v[j - 1] as i64 + exp).rem_euclid(n)) as u32;
        }
        Ok(GroupElem(v))
    }
}

fn bad_elem(s: &str) -> Error {
    Error::Group(format!("cannot parse group element `{s}`"))
}

fn root_of_unity_order(c: &CycNum) -> Option<u32> {
    c.root_order().ok().flatten()
}

/// A fixed isomorphism `g -> chi_g` from `G` to its character group, given by
/// the bicharacter table `table[j][k] = chi_{g_j}(g_k)` on chosen generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Duality {
    group: AbGroup,
    conductor: u32,
    table: Vec<Vec<CycNum>>,
}

impl Duality {
    pub fn new(group: AbGroup, table: Vec<Vec<CycNum>>) -> Result<Duality> {
        let r = group.rank();
        if table.len() != r || table.iter().any(|row| row.len() != r) {
            return Err(Error::Duality(format!("table must be {r}x{r}")));
        }
        let conductor = table.first().and_then(|row| row.first()).map_or(1, CycNum::conductor);
        for (j, row) in table.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if v.conductor() != conductor {
                    return Err(Error::ConductorMismatch(conductor, v.conductor()));
                }
                let (nj, nk) = (group.factors[j] as i64, group.factors[k] as i64);
                if v.is_zero() || !v.pow(nj).is_one() || !v.pow(nk).is_one() {
                    return Err(Error::Duality(format!(
                        "entry ({}, {}) is not a {}-th root of unity",
                        j + 1,
                        k + 1,
                        nj.gcd(&nk)
                    )));
                }
            }
        }
        let d = Duality {
            group,
            conductor,
            table,
        };
        for g in d.group.elements().into_iter().skip(1) {
            if d.group.elements().iter().all(|h| d.chi(&g, h).is_one()) {
                return Err(Error::Duality(format!(
                    "degenerate: chi_{} is the trivial character",
                    d.group.display(&g)
                )));
            }
        }
        Ok(d)
    }

    /// The standard pairing `chi_{g_j}(g_k) = zeta_{n_j}^{delta_jk}`.
    pub fn standard(group: &AbGroup, conductor: u32) -> Result<Duality> {
        let r = group.rank();
        let table = (0..r)
            .map(|j| {
                (0..r)
                    .map(|k| {
                        if j == k {
                            CycNum::root_of_unity(conductor, group.factors[j], 1)
                        } else {
                            Ok(CycNum::one(conductor))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Duality::new(group.clone(), table)
    }

    /// The Klein-four pairing with `chi_g(h) = 1` iff `g = e` or `h in {e, g}`.
    pub fn klein(conductor: u32) -> Duality {
        let one = CycNum::one(conductor);
        let m1 = -&one;
        Duality::new(AbGroup::klein(), vec![vec![one.clone(), m1.clone()], vec![m1, one]])
            .expect("klein pairing is valid")
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn table(&self) -> &[Vec<CycNum>] {
        &self.table
    }

    pub fn embed(&self, m: u32) -> Result<Duality> {
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|c| c.embed(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Duality {
            group: self.group.clone(),
            conductor: m,
            table,
        })
    }

    /// `chi_g(h)`, extended bimultiplicatively from the generator table.
    pub fn chi(&self, g: &GroupElem, h: &GroupElem) -> CycNum {
        let mut acc = CycNum::one(self.conductor);
        for (j, &a) in g.0.iter().enumerate() {
            for (k, &b) in h.0.iter().enumerate() {
                let e = (a as i64) * (b as i64);
                if e != 0 {
                    acc = &acc * &self.table[j][k].pow(e);
                }
            }
        }
        acc
    }
}

/// Why a table fails to be a normalized root-of-unity 2-cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleViolation {
    Shape(String),
    NotRootOfUnity { g: GroupElem, h: GroupElem },
    Normalization { g: GroupElem, h: GroupElem },
    Identity { g: GroupElem, h: GroupElem, l: GroupElem },
}

impl CocycleViolation {
    pub fn describe(&self, group: &AbGroup) -> String {
        let d = |x: &GroupElem| group.display(x);
        match self {
            CocycleViolation::Shape(s) => s.clone(),
            CocycleViolation::NotRootOfUnity { g, h } => format!(
                "value at ({},{}) is not a root of unity; cocycle values are restricted to roots of unity",
                d(g),
                d(h)
            ),
            CocycleViolation::Normalization { g, h } => format!("normalization at ({},{})", d(g), d(h)),
            CocycleViolation::Identity { g, h, l } => {
                format!("cocycle identity fails at ({},{},{})", d(g), d(h), d(l))
            }
        }
    }
}

/// A normalized 2-cocycle `G x G -> k^x` with root-of-unity values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cocycle {
    group: AbGroup,
    conductor: u32,
    // row-major over element indices
    table: Vec<CycNum>,
}

impl Cocycle {
    /// Validates and wraps a `|G| x |G|` row-major table.
    pub fn new(group: AbGroup, table: Vec<CycNum>) -> Result<Cocycle> {
        match Cocycle::violation(&group, &table) {
            Some(v) => Err(Error::Cocycle(v.describe(&group))),
            None => Ok(Cocycle {
                conductor: table[0].conductor(),
                group,
                table,
            }),
        }
    }

    /// The first violated condition, scanning triples in enumeration order.
    pub fn violation(group: &AbGroup, table: &[CycNum]) -> Option<CocycleViolation> {
        let n = group.order();
        if table.len() != n * n {
            return Some(CocycleViolation::Shape(format!(
                "expected {} entries, got {}",
                n * n,
                table.len()
            )));
        }
        let conductor = table[0].conductor();
        if table.iter().any(|c| c.conductor() != conductor) {
            return Some(CocycleViolation::Shape("mixed conductors".into()));
        }
        let els = group.elements();
        for a in 0..n {
            for b in 0..n {
                if root_of_unity_order(&table[a * n + b]).is_none() {
                    return Some(CocycleViolation::NotRootOfUnity {
                        g: els[a].clone(),
                        h: els[b].clone(),
                    });
                }
            }
        }
        for a in 0..n {
            if !table[a].is_one() {
                return Some(CocycleViolation::Normalization {
                    g: els[0].clone(),
                    h: els[a].clone(),
                });
            }
            if !table[a * n].is_one() {
                return Some(CocycleViolation::Normalization {
                    g: els[a].clone(),
                    h: els[0].clone(),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = group.index(&group.mul(&els[a], &els[b]));
                for c in 0..n {
                    let bc = group.index(&group.mul(&els[b], &els[c]));
                    let lhs = &table[a * n + b] * &table[ab * n + c];
                    let rhs = &table[a * n + bc] * &table[b * n + c];
                    if lhs != rhs {
                        return Some(CocycleViolation::Identity {
                            g: els[a].clone(),
                            h: els[b].clone(),
                            l: els[c].clone(),
                        });
                    }
                }
            }
        }
        None
    }

    pub fn trivial(group: &AbGroup, conductor: u32) -> Cocycle {
        Cocycle {
            group: group.clone(),
            conductor,
            table: vec![CycNum::one(conductor); group.order() * group.order()],
        }
    }

    /// The Klein-four cocycle `mu(g1^p g2^q, g1^r g2^s) = (-1)^(ps)`.
    pub fn klein(conductor: u32) -> Cocycle {
        let g = AbGroup::klein();
        let table = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .map(|(a, b)| {
                let (x, y) = (g.element(a), g.element(b));
                if x.0[0] * y.0[1] % 2 == 1 {
                    CycNum::from_int(conductor, -1)
                } else {
                    CycNum::one(conductor)
                }
            })
            .collect();
        Cocycle::new(g, table).expect("klein cocycle is valid")
    }

    /// Expands an exponent formula over generator coordinates. Bindings:
    /// `a1..ar` for the first argument and `b1..br` for the second; for rank
    /// two also `p, q` (first) and `r, s` (second), and for rank one `p`, `r`.
    pub fn from_formula(group: &AbGroup, formula: &Expr, conductor: u32) -> Result<Cocycle> {
        let n = group.order();
        let els = group.elements();
        let mut table = Vec::with_capacity(n * n);
        for g in &els {
            for h in &els {
                let env = |v: &str| formula_binding(group, g, h, v);
                table.push(formula.eval_scalar(conductor, &env)?);
            }
        }
        Cocycle::new(group.clone(), table)
    }

    /// The coboundary `d rho(g,h) = rho(g) rho(h) / rho(gh)`; `rho` is indexed by
    /// element index and must satisfy `rho(e) = 1`.
    pub fn coboundary(group: &AbGroup, rho: &[CycNum]) -> Result<Cocycle> {
        let n = group.order();
        if rho.len() != n {
            return Err(Error::DimensionMismatch("rho needs one value per element".into()));
        }
        let els = group.elements();
        let mut table = Vec::with_capacity(n * n);
        for (a, g) in els.iter().enumerate() {
            for (b, h) in els.iter().enumerate() {
                let gh = group.index(&group.mul(g, h));
                table.push((&rho[a] * &rho[b]).checked_div(&rho[gh])?);
            }
        }
        Cocycle::new(group.clone(), table)
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn table(&self) -> &[CycNum] {
        &self.table
    }

    pub fn value(&self, g: &GroupElem, h: &GroupElem) -> &CycNum {
        let n = self.group.order();
        &self.table[self.group.index(g) * n + self.group.index(h)]
    }

    pub fn value_at(&self, a: usize, b: usize) -> &CycNum {
        &self.table[a * self.group.order() + b]
    }

    pub fn embed(&self, m: u32) -> Result<Cocycle> {
        Ok(Cocycle {
            group: self.group.clone(),
            conductor: m,
            table: self.table.iter().map(|c| c.embed(m)).collect::<Result<_>>()?,
        })
    }

    fn aligned(&self, other: &Cocycle) -> Result<(Cocycle, Cocycle)> {
        if self.group != other.group {
            return Err(Error::Group("cocycles over different groups".into()));
        }
        let m = lcm(self.conductor, other.conductor);
        Ok((self.embed(m)?, other.embed(m)?))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Cocycle) -> Result<Cocycle> {
        let (a, b) = self.aligned(other)?;
        Ok(Cocycle {
            group: a.group,
            conductor: a.conductor,
            table: a.table.iter().zip(&b.table).map(|(x, y)| x * y).collect(),
        })
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Cocycle {
        Cocycle {
            group: self.group.clone(),
            conductor: self.conductor,
            table: self
                .table
                .iter()
                .map(|c| c.inv().expect("nonzero cocycle value"))
                .collect(),
        }
    }

    /// The alternating bicharacter `mu(g,h) / mu(h,g)`.
    pub fn alternator(&self, g: &GroupElem, h: &GroupElem) -> CycNum {
        self.value(g, h) / self.value(h, g)
    }

    /// Decides whether the cocycle is a coboundary; when it is, returns a
    /// witness `rho` (indexed by element index, `rho(e) = 1`), expressed at a
    /// possibly larger conductor since roots of the values may be needed.
    pub fn is_coboundary(&self) -> Option<Vec<CycNum>> {
        let n = self.group.order();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.value_at(a, b) != self.value_at(b, a) {
                    return None;
                }
            }
        }
        Some(self.symmetric_witness())
    }

    fn symmetric_witness(&self) -> Vec<CycNum> {
        let g = &self.group;
        let full = lcm(2, self.conductor);
        let m = lcm(self.conductor, full * g.exponent());
        let mu = self.embed(m).expect("conductor divides the enlarged one");
        // u_{g_j}^{n_j} = c_j u_e in the twisted group algebra; rescale each
        // generator by an n_j-th root of c_j so the rescaled generators have
        // order n_j. In a commutative kG_mu they then span an untwisted copy.
        let roots: Vec<CycNum> = (0..g.rank())
            .map(|j| {
                let gen = g.gen(j);
                let mut cur = g.identity();
                let mut c = CycNum::one(m);
                for _ in 0..g.factors[j] {
                    c = &c * mu.value(&cur, &gen);
                    cur = g.mul(&cur, &gen);
                }
                let k = c.root_exponent_in(full).expect("cocycle values are roots of unity");
                CycNum::root_of_unity(m, full * g.factors[j], k as i64).expect("root lies in the enlarged field")
            })
            .collect();
        g.elements()
            .iter()
            .map(|el| {
                // u'_el = lambda * u_el with u' the rescaled monomial
                let mut cur = g.identity();
                let mut lambda = CycNum::one(m);
                for (j, &a) in el.0.iter().enumerate() {
                    let gen = g.gen(j);
                    for _ in 0..a {
                        lambda = &(&lambda * mu.value(&cur, &gen)) / &roots[j];
                        cur = g.mul(&cur, &gen);
                    }
                }
                lambda.inv().expect("nonzero")
            })
            .collect()
    }

    /// `mu` and `nu` differ by a coboundary.
    pub fn cohomologous(&self, other: &Cocycle) -> Result<bool> {
        Ok(self.mul(&other.inverse())?.is_coboundary().is_some())
    }

    /// `mu^sigma(g,h) = mu(sigma(g), sigma(h))`.
    pub fn pullback(&self, sigma: &GroupAut) -> Result<Cocycle> {
        if sigma.group != self.group {
            return Err(Error::Group("automorphism of a different group".into()));
        }
        let els = self.group.elements();
        let mut table = Vec::with_capacity(els.len() * els.len());
        for g in &els {
            for h in &els {
                table.push(self.value(&sigma.apply(g), &sigma.apply(h)).clone());
            }
        }
        Ok(Cocycle {
            group: self.group.clone(),
            conductor: self.conductor,
            table,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(CycNum::is_one)
    }
}

fn formula_binding(group: &AbGroup, g: &GroupElem, h: &GroupElem, v: &str) -> Option<i64> {
    let r = group.rank();
    let coord = |e: &GroupElem, j: usize| e.0.get(j).map(|&x| x as i64);
    if let Some(j) = v.strip_prefix('a').and_then(|d| d.parse::<usize>().ok()) {
        return (j >= 1).then(|| coord(g, j - 1)).flatten();
    }
    if let Some(j) = v.strip_prefix('b').and_then(|d| d.parse::<usize>().ok()) {
        return (j >= 1).then(|| coord(h, j - 1)).flatten();
    }
    match (r, v) {
        (2, "p") | (1, "p") => coord(g, 0),
        (2, "q") => coord(g, 1),
        (2, "r") | (1, "r") => coord(h, 0),
        (2, "s") => coord(h, 1),
        _ => None,
    }
}

/// `|H^2(G, k^x)| = prod_{j<k} gcd(n_j, n_k)` for `G = prod C_{n_j}`.
pub fn schur_order(group: &AbGroup) -> u64 {
    let f = group.factors();
    let mut acc = 1u64;
    for j in 0..f.len() {
        for k in (j + 1)..f.len() {
            acc *= f[j].gcd(&f[k]) as u64;
        }
    }
    acc
}

/// A group automorphism, given by the images of the chosen generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupAut {
    group: AbGroup,
    images: Vec<GroupElem>,
}

impl GroupAut {
    pub fn new(group: AbGroup, images: Vec<GroupElem>) -> Result<GroupAut> {
        if images.len() != group.rank() {
            return Err(Error::Group("automorphism needs one image per generator".into()));
        }
        for (j, im) in images.iter().enumerate() {
            if !group.contains(im) {
                return Err(Error::Group(format!("image of g{} is not a group element", j + 1)));
            }
            if !group.factors[j].is_multiple_of(group.elem_order(im)) {
                return Err(Error::Group(format!(
                    "image of g{} has order not dividing {}",
                    j + 1,
                    group.factors[j]
                )));
            }
        }
        let a = GroupAut { group, images };
        let mut seen = vec![false; a.group.order()];
        for g in a.group.elements() {
            let i = a.group.index(&a.apply(&g));
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Group("map is not injective".into()));
            }
        }
        Ok(a)
    }

    pub fn identity(group: &AbGroup) -> GroupAut {
        GroupAut {
            group: group.clone(),
            images: (0..group.rank()).map(|j| group.gen(j)).collect(),
        }
    }

    /// Every automorphism; the identity comes first.
    pub fn all(group: &AbGroup) -> Vec<GroupAut> {
        let els = group.elements();
        let r = group.rank();
        let id = GroupAut::identity(group);
        let mut out = vec![id.clone()];
        let total = els.len().pow(r as u32);
        for mut code in 0..total {
            let mut images = Vec::with_capacity(r);
            for _ in 0..r {
                images.push(els[code % els.len()].clone());
                code /= els.len();
            }
            if let Ok(a) = GroupAut::new(group.clone(), images) {
                if a != id {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn images(&self) -> &[GroupElem] {
        &self.images
    }

    pub fn apply(&self, g: &GroupElem) -> GroupElem {
        let mut acc = self.group.identity();
        for (j, &a) in g.0.iter().enumerate() {
            acc = self.group.mul(&acc, &self.group.pow(&self.images[j], a as i64));
        }
        acc
    }

    pub fn inverse(&self) -> GroupAut {
        let els = self.group.elements();
        let images = (0..self.group.rank())
            .map(|j| {
                let target = self.group.gen(j);
                els.iter().find(|g| self.apply(g) == target).expect("bijective").clone()
            })
            .collect();
        GroupAut {
            group: self.group.clone(),
            images,
        }
    }

    pub fn display(&self) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(j, im)| format!("g{}->{}", j + 1, self.group.display(im)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for GroupAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr;

    fn klein_elems() -> (AbGroup, GroupElem, GroupElem, GroupElem) {
        let g = AbGroup::klein();
        let g1 = g.gen(0);
        let g2 = g.gen(1);
        (g, g1, g2, GroupElem(vec![0, 0]))
    }

    #[test]
    fn element_enumeration_and_display() {
        let g = AbGroup::new(vec![2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        for (i, e) in g.elements().iter().enumerate() {
            assert_eq!(g.index(e), i);
        }
        assert_eq!(g.display(&GroupElem(vec![1, 2])), "g1*g2^2");
        assert_eq!(g.parse_element("g1*g2^2").unwrap(), GroupElem(vec![1, 2]));
        assert_eq!(g.parse_element("e").unwrap(), g.identity());
        assert!(g.parse_element("g3").is_err());
        assert!(AbGroup::new(vec![1]).is_err());
        let k = AbGroup::klein();
        assert_eq!(
            k.elements().iter().map(|e| k.display(e)).collect::<Vec<_>>(),
            ["e", "g2", "g1", "g1*g2"]
        );
    }

    #[test]
    fn klein_duality_values() {
        let (_, g1, g2, e) = klein_elems();
        let d = Duality::klein(4);
        assert_eq!(d.chi(&g1, &g2), CycNum::from_int(4, -1));
        assert!(d.chi(&g1, &g1).is_one());
        assert!(d.chi(&e, &g2).is_one());
        let g12 = AbGroup::klein().mul(&g1, &g2);
        // chi_g(h) = 1 iff g = e or h in {e, g}
        for g in AbGroup::klein().elements() {
            for h in AbGroup::klein().elements() {
                let expect_one = g == e || h == e || h == g;
                assert_eq!(d.chi(&g, &h).is_one(), expect_one, "{g:?} {h:?}");
            }
        }
        assert!(!d.chi(&g12, &g1).is_one());
    }

    #[test]
    fn degenerate_duality_rejected() {
        let one = CycNum::one(4);
        let r = Duality::new(
            AbGroup::klein(),
            vec![vec![one.clone(), one.clone()], vec![one.clone(), one]],
        );
        assert!(matches!(r, Err(Error::Duality(_))));
        let r = Duality::new(AbGroup::new(vec![2]).unwrap(), vec![vec![CycNum::zeta(4)]]);
        assert!(matches!(r, Err(Error::Duality(_))));
    }

    #[test]
    fn standard_duality_is_valid() {
        for f in [vec![2, 2], vec![4], vec![2, 4], vec![3, 3]] {
            let g = AbGroup::new(f).unwrap();
            Duality::standard(&g, 12).unwrap();
        }
    }

    #[test]
    fn klein_cocycle_validates_and_is_not_coboundary() {
        let mu = Cocycle::klein(4);
        let (g, g1, g2, _) = klein_elems();
        assert_eq!(mu.value(&g1, &g2), &CycNum::from_int(4, -1));
        assert!(mu.value(&g2, &g1).is_one());
        assert!(mu.is_coboundary().is_none());
        assert_eq!(mu.alternator(&g1, &g2), CycNum::from_int(4, -1));
        let f = expr::parse("(-1)^(p*s)").unwrap();
        assert_eq!(Cocycle::from_formula(&g, &f, 4).unwrap(), mu);
        assert!(mu.cohomologous(&mu).unwrap());
        assert!(!mu.cohomologous(&Cocycle::trivial(&g, 4)).unwrap());
    }

    #[test]
    fn normalization_violation_is_named() {
        let g = AbGroup::klein();
        let mut table = Cocycle::trivial(&g, 4).table().to_vec();
        table[2] = CycNum::from_int(4, -1); // (e, g1)
        assert_eq!(
            Cocycle::new(g.clone(), table),
            Err(Error::Cocycle("normalization at (e,g1)".into()))
        );
        let mut table = Cocycle::trivial(&g, 4).table().to_vec();
        table[5] = CycNum::from_int(4, 2);
        assert!(matches!(Cocycle::new(g, table), Err(Error::Cocycle(m)) if m.contains("root of unity")));
    }

    #[test]
    fn trivial_cocycle_witness() {
        let g = AbGroup::klein();
        let w = Cocycle::trivial(&g, 4).is_coboundary().unwrap();
        assert!(w.iter().all(CycNum::is_one));
    }

    #[test]
    fn coboundary_witness_reproduces_cocycle() {
        let g = AbGroup::new(vec![2, 4]).unwrap();
        let rho: Vec<CycNum> = (0..g.order())
            .map(|i| {
                if i == 0 {
                    CycNum::one(8)
                } else {
                    CycNum::zeta_pow(8, (3 * i + 1) as i64)
                }
            })
            .collect();
        let mu = Cocycle::coboundary(&g, &rho).unwrap();
        let w = mu.is_coboundary().expect("coboundary");
        let back = Cocycle::coboundary(&g, &w).unwrap();
        assert_eq!(back, mu.embed(back.conductor()).unwrap());
    }

    #[test]
    fn c2_sign_cocycle_needs_larger_roots() {
        // mu(g,g) = -1 on C_2 is a coboundary of rho(g) = +-i
        let g = AbGroup::new(vec![2]).unwrap();
        let table = vec![CycNum::one(1), CycNum::one(1), CycNum::one(1), CycNum::from_int(1, -1)];
        let mu = Cocycle::new(g.clone(), table).unwrap();
        let w = mu.is_coboundary().unwrap();
        let back = Cocycle::coboundary(&g, &w).unwrap();
        assert_eq!(back, mu.embed(back.conductor()).unwrap());
    }

    #[test]
    fn schur_orders() {
        let s = |f: Vec<u32>| schur_order(&AbGroup::new(f).unwrap());
        assert_eq!(s(vec![2, 2]), 2);
        assert_eq!(s(vec![3]), 1);
        assert_eq!(s(vec![3, 3]), 3);
        assert_eq!(s(vec![2, 2, 2]), 8);
        assert_eq!(s(vec![2, 4]), 2);
    }

    #[test]
    fn automorphisms_of_klein() {
        let g = AbGroup::klein();
        let all = GroupAut::all(&g);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], GroupAut::identity(&g));
        for a in &all {
            let inv = a.inverse();
            for x in g.elements() {
                assert_eq!(inv.apply(&a.apply(&x)), x);
            }
        }
        assert!(GroupAut::new(g.clone(), vec![g.gen(0), g.gen(0)]).is_err());
        assert_eq!(GroupAut::all(&AbGroup::new(vec![4]).unwrap()).len(), 2);
        assert_eq!(GroupAut::all(&AbGroup::new(vec![3, 3]).unwrap()).len(), 48);
    }

    #[test]
    fn pullback_by_swap() {
        let g = AbGroup::klein();
        let swap = GroupAut::new(g.clone(), vec![g.gen(1), g.gen(0)]).unwrap();
        let mu = Cocycle::klein(4);
        let pulled = mu.pullback(&swap).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                // (p,q),(r,s) -> (-1)^(q r)
                let expect = if x.0[1] * y.0[0] == 1 {
                    -CycNum::one(4)
                } else {
                    CycNum::one(4)
                };
                assert_eq!(pulled.value(&x, &y), &expect);
            }
        }
        assert!(Cocycle::violation(&g, pulled.table()).is_none());
        assert_eq!(pulled.pullback(&swap.inverse()).unwrap(), mu);
        assert_eq!(mu.pullback(&GroupAut::identity(&g)).unwrap(), mu);
    }
}
