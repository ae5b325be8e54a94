//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored in the power basis `1, z, ..., z^(phi(N)-1)` with
//! rational coefficients, reduced modulo the `N`-th cyclotomic polynomial.
//! Because the reduction is canonical, equality is coefficient-wise.
//!
//! Roots are chosen compatibly across conductors: `zeta_N = zeta_M^(M/N)`
//! whenever `N | M`, so [`CycNum::embed`] is a ring homomorphism.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn compute_cyclotomic(n: u32) -> Vec<i64> {
    // x^n - 1 divided by every Phi_d with d a proper divisor of n
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divide_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: u32) -> Arc<[i64]> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let p: Arc<[i64]> = compute_cyclotomic(n).into();
    cache.write().unwrap().insert(n, p.clone());
    p
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &c * bj;
            }
        }
        quot[k] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(BigRational::zero);
            match b.get(k) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// An exact element of `Q(zeta_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    fn reduce(conductor: u32, mut poly: Vec<BigRational>) -> CycNum {
        let phi = cyclotomic_poly(conductor);
        let deg = phi.len() - 1;
        if poly.len() > deg {
            for k in (deg..poly.len()).rev() {
                let c = std::mem::take(&mut poly[k]);
                if c.is_zero() {
                    continue;
                }
                for (j, &p) in phi[..deg].iter().enumerate() {
                    if p != 0 {
                        poly[k - deg + j] -= &c * BigRational::from_integer(BigInt::from(p));
                    }
                }
            }
        }
        poly.resize(deg, BigRational::zero());
        CycNum {
            conductor,
            coeffs: poly,
        }
    }

    pub fn zero(conductor: u32) -> CycNum {
        assert!(conductor > 0, "conductor must be positive");
        CycNum {
            conductor,
            coeffs: vec![BigRational::zero(); totient(conductor) as usize],
        }
    }

    pub fn one(conductor: u32) -> CycNum {
        CycNum::from_rational(conductor, BigRational::one())
    }

    pub fn from_int(conductor: u32, n: i64) -> CycNum {
        CycNum::from_rational(conductor, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(conductor: u32, q: BigRational) -> CycNum {
        let mut z = CycNum::zero(conductor);
        z.coeffs[0] = q;
        z
    }

    pub fn from_fraction(conductor: u32, num: i64, den: i64) -> CycNum {
        CycNum::from_rational(conductor, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `zeta_N^k` with `N` the conductor.
    pub fn zeta_pow(conductor: u32, k: i64) -> CycNum {
        let e = k.rem_euclid(conductor as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        CycNum::reduce(conductor, poly)
    }

    pub fn zeta(conductor: u32) -> CycNum {
        CycNum::zeta_pow(conductor, 1)
    }

    /// `zeta_m^k` expressed at `conductor`; requires `m | lcm(2, conductor)`.
    pub fn root_of_unity(conductor: u32, m: u32, k: i64) -> Result<CycNum> {
        let full = lcm(2, conductor);
        if m == 0 || !full.is_multiple_of(m) {
            return Err(Error::NotDivisible { from: m, to: full });
        }
        let e = (k.rem_euclid(m as i64)) * (full / m) as i64;
        if full == conductor {
            Ok(CycNum::zeta_pow(conductor, e))
        } else {
            // conductor odd: zeta_{2N} = -zeta_N^((N+1)/2)
            let base = -CycNum::zeta_pow(conductor, (conductor as i64 + 1) / 2);
            Ok(base.pow(e))
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coordinates, length `phi(N)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &CycNum) -> Result<()> {
        if self.conductor != other.conductor {
            Err(Error::ConductorMismatch(self.conductor, other.conductor))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        if self.coeffs.len() == 1 {
            return Ok(CycNum {
                conductor: self.conductor,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        Ok(CycNum::reduce(self.conductor, poly_mul(&self.coeffs, &other.coeffs)))
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic polynomial.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNum::from_rational(self.conductor, q.recip()));
        }
        let modulus: Vec<BigRational> = cyclotomic_poly(self.conductor)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // invariant: s_i * self == r_i (mod Phi)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant since Phi is irreducible
        let c = r1[0].recip();
        let s: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
        Ok(CycNum::reduce(self.conductor, s))
    }

    pub fn pow(&self, e: i64) -> CycNum {
        let mut base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The same field element expressed at conductor `m`.
    pub fn embed(&self, m: u32) -> Result<CycNum> {
        if m == 0 || !m.is_multiple_of(self.conductor) {
            return Err(Error::NotDivisible {
                from: self.conductor,
                to: m,
            });
        }
        if m == self.conductor {
            return Ok(self.clone());
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(CycNum::reduce(m, poly))
    }

    /// Complex conjugation, the Galois automorphism `zeta -> zeta^-1`.
    pub fn conj(&self) -> CycNum {
        let n = self.conductor as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(n - k) % n] += c;
        }
        CycNum::reduce(self.conductor, poly)
    }

    /// Smallest `m >= 1` with `self^m = 1`, or `None` for a non-root of unity.
    pub fn root_order(&self) -> Result<Option<u32>> {
        if self.is_zero() {
            return Err(Error::ZeroOrder);
        }
        let bound = lcm(2, self.conductor);
        let mut acc = self.clone();
        for m in 1..=bound {
            if acc.is_one() {
                return Ok(Some(m));
            }
            acc = &acc * self;
        }
        Ok(None)
    }

    /// Discrete logarithm in the group of roots of unity of `Q(zeta_N)`:
    /// returns `(L, k)` with `L = lcm(2, N)` and `self = zeta_L^k`.
    pub fn root_exponent(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        let full = lcm(2, self.conductor);
        let base = CycNum::root_of_unity(self.conductor, full, 1).ok()?;
        let mut acc = CycNum::one(self.conductor);
        for k in 0..full {
            if &acc == self {
                return Some((full, k));
            }
            acc = &acc * &base;
        }
        None
    }

    /// Exponent `k` with `self = zeta_l^k`, when `self` is an `l`-th root of
    /// unity and `l | lcm(2, N)`.
    pub fn root_exponent_in(&self, l: u32) -> Option<u32> {
        let (big, k) = self.root_exponent()?;
        if big % l != 0 {
            return None;
        }
        let step = big / l;
        (k % step == 0).then_some(k / step)
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, conductor: u32, k: usize) -> fmt::Result {
        if conductor == 4 {
            write!(f, "i")
        } else if k == 1 {
            write!(f, "zeta({conductor})")
        } else {
            write!(f, "zeta({conductor})^{k}")
        }
    }
}

impl fmt::Display for CycNum {
    /// Renders in the scalar input grammar; output parses back to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                CycNum::fmt_term(f, self.conductor, k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [N={}]", self, self.conductor)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            /// Panics on conductor mismatch (or division by zero); use the
            /// `checked_*` methods for fallible arithmetic.
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}
