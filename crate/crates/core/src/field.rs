//! Prime fields F_q and extensions F_{q^k} = F_q[t]/(m(t)).
//!
//! An extension is a single polynomial quotient, never a tower. Elements carry
//! a shared handle to their [`FieldParams`] so the usual operators work on them
//! directly. Every value is immutable once built.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Hard ceiling on the multiplicative group order q^k - 1.
pub const MAX_GROUP_ORDER: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("q^k - 1 exceeds the size cap for q = {q}, k = {k} (cap {cap})")]
    SizeCap { q: u64, k: usize, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{r} does not divide the multiplicative order {order}")]
    NotDivisor { r: u64, order: u64 },
    #[error("no irreducible polynomial of degree {k} found over F_{q}")]
    NoIrreducible { q: u64, k: usize },
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n` in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `q^k`, or `None` if it overflows `u64`.
pub fn checked_pow(q: u64, k: usize) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// Parameters of F_{q^k}: the prime, the degree, and the monic modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldParams {
    q: u64,
    k: usize,
    /// Coefficients c_0..c_k of the monic modulus, low degree first.
    modulus: Vec<u64>,
    order: u64,
}

impl FieldParams {
    /// The field F_{q^k} with the lexicographically first monic irreducible
    /// modulus of degree k.
    ///
    /// Candidates are ordered by the integer sum c_i q^i over their lower
    /// coefficients, so the degree-1 field always gets modulus `t`.
    pub fn build_extension(q: u64, k: usize) -> Result<Arc<Self>, FieldError> {
        Self::build_extension_capped(q, k, MAX_GROUP_ORDER)
    }

    /// As [`Self::build_extension`], with q^k - 1 bounded by `cap` instead of
    /// the hard ceiling.
    pub fn build_extension_capped(q: u64, k: usize, cap: u64) -> Result<Arc<Self>, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let cap = cap.min(MAX_GROUP_ORDER);
        let order = match checked_pow(q, k) {
            Some(o) if o - 1 < cap => o,
            _ => return Err(FieldError::SizeCap { q, k, cap }),
        };
        let tail_count = checked_pow(q, k).expect("checked above");
        for index in 0..tail_count {
            let mut modulus = digits(index, q, k);
            modulus.push(1);
            if k == 1 || is_irreducible(&modulus, q) {
                return Ok(Arc::new(Self {
                    q,
                    k,
                    modulus,
                    order,
                }));
            }
        }
        Err(FieldError::NoIrreducible { q, k })
    }

    /// Uses a caller-supplied monic modulus; checks monicity, degree and
    /// irreducibility.
    pub fn with_modulus(q: u64, modulus: Vec<u64>) -> Result<Arc<Self>, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = match checked_pow(q, k) {
            Some(o) if o - 1 < MAX_GROUP_ORDER => o,
            _ => {
                return Err(FieldError::SizeCap {
                    q,
                    k,
                    cap: MAX_GROUP_ORDER,
                })
            }
        };
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % q).collect();
        if modulus[k] != 1 || (k > 1 && !is_irreducible(&modulus, q)) {
            return Err(FieldError::NoIrreducible { q, k });
        }
        Ok(Arc::new(Self {
            q,
            k,
            modulus,
            order,
        }))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Monic modulus coefficients, low degree first (length k + 1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, q^k.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Order of the multiplicative group, q^k - 1.
    pub fn unit_order(&self) -> u64 {
        self.order - 1
    }

    pub fn zero(self: &Arc<Self>) -> ExtFieldElement {
        ExtFieldElement {
            params: Arc::clone(self),
            coeffs: vec![0; self.k],
        }
    }

    pub fn one(self: &Arc<Self>) -> ExtFieldElement {
        self.from_base(1)
    }

    /// Embeds an integer of F_q as a constant polynomial.
    pub fn from_base(self: &Arc<Self>, c: u64) -> ExtFieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = c % self.q;
        ExtFieldElement {
            params: Arc::clone(self),
            coeffs,
        }
    }

    /// Embeds a signed integer of F_q.
    pub fn from_i64(self: &Arc<Self>, c: i64) -> ExtFieldElement {
        self.from_base(c.rem_euclid(self.q as i64) as u64)
    }

    /// Element with the given coefficients (reduced mod q); missing
    /// high coefficients are zero.
    pub fn element(self: &Arc<Self>, coeffs: &[u64]) -> ExtFieldElement {
        assert!(
            coeffs.len() <= self.k,
            "too many coefficients for degree {}",
            self.k
        );
        let mut c = vec![0; self.k];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = src % self.q;
        }
        ExtFieldElement {
            params: Arc::clone(self),
            coeffs: c,
        }
    }

    /// The generator t of the polynomial basis (equals the residue of t mod m).
    pub fn generator_t(self: &Arc<Self>) -> ExtFieldElement {
        if self.k == 1 {
            // t = -c_0 in F_q[t]/(t + c_0)
            self.from_base(sub_mod(0, self.modulus[0], self.q))
        } else {
            self.element(&[0, 1])
        }
    }

    /// The element whose base-q digits (low first) are the coefficients.
    /// Indexes 0..q^k enumerate the field in a fixed order.
    pub fn element_from_index(self: &Arc<Self>, index: u64) -> ExtFieldElement {
        ExtFieldElement {
            params: Arc::clone(self),
            coeffs: digits(index % self.order, self.q, self.k),
        }
    }

    /// Iterates over all q^k elements in index order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = ExtFieldElement> + '_ {
        (0..self.order).map(move |i| self.element_from_index(i))
    }

    /// A generator of the group of r-th roots of unity.
    ///
    /// Scans elements in index order, raising each to (q^k - 1)/r, and returns
    /// the first result of exact multiplicative order r.
    pub fn mu_r_generator(self: &Arc<Self>, r: u64) -> Result<ExtFieldElement, FieldError> {
        let n = self.unit_order();
        if r == 0 || !n.is_multiple_of(r) {
            return Err(FieldError::NotDivisor { r, order: n });
        }
        if r == 1 {
            return Ok(self.one());
        }
        let cofactor = n / r;
        let factors = prime_factors(r);
        for index in 1..self.order {
            let g = self.element_from_index(index).pow_u64(cofactor);
            if factors.iter().all(|p| !g.pow_u64(r / p).is_one()) {
                return Ok(g);
            }
        }
        unreachable!("the unit group of a finite field is cyclic")
    }
}

fn digits(mut index: u64, q: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(index % q);
        index /= q;
    }
    out
}

// --- polynomial helpers over F_q, coefficient vectors low degree first ---

fn poly_trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let mut m = m.to_vec();
    poly_trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], q);
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = mul_mod(r[top], lead_inv, q);
        if factor != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = sub_mod(r[idx], mul_mod(factor, mc, q), q);
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, q), q);
        }
    }
    poly_rem(&prod, m, q)
}

fn poly_powmod(base: &[u64], mut exp: u64, m: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, q);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, q);
        }
        b = poly_mulmod(&b, &b, m, q);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, q);
        x = y;
        y = r;
    }
    x
}

/// Computes t^{q^j} mod m by repeated q-th powering.
fn t_frobenius_power(j: usize, m: &[u64], q: u64) -> Vec<u64> {
    let mut x = poly_rem(&[0, 1], m, q);
    for _ in 0..j {
        x = poly_powmod(&x, q, m, q);
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree k >= 1.
fn is_irreducible(m: &[u64], q: u64) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    // no root in F_q (cheap rejection)
    if (0..q.min(1 << 20)).any(|x| eval_poly(m, x, q) == 0) {
        return false;
    }
    let t = poly_rem(&[0, 1], m, q);
    if t_frobenius_power(k, m, q) != t {
        return false;
    }
    for p in prime_factors(k as u64) {
        let mut h = t_frobenius_power(k / p as usize, m, q);
        // h - t
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = sub_mod(h[1], 1, q);
        poly_trim(&mut h);
        let g = poly_gcd(m, &h, q);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn eval_poly(p: &[u64], x: u64, q: u64) -> u64 {
    p.iter()
        .rev()
        .fold(0, |acc, &c| add_mod(mul_mod(acc, x, q), c, q))
}

/// An element of F_{q^k}, stored as k coefficients of a residue polynomial.
#[derive(Clone)]
pub struct ExtFieldElement {
    params: Arc<FieldParams>,
    coeffs: Vec<u64>,
}

impl ExtFieldElement {
    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    /// Coefficients c_0..c_{k-1}, low degree first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// True if the element lies in the prime subfield F_q.
    pub fn in_base_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Base-q index of the element, inverse of `element_from_index`.
    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.params.q + c)
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.params, &other.params) || self.params == other.params,
            "mixing elements of different fields"
        );
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        Self {
            params: Arc::clone(&self.params),
            coeffs,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Multiplicative inverse via x^(q^k - 2).
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow_u64(self.params.order - 2))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow_u64(&self, mut exp: u64) -> Self {
        let mut acc = self.params.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, exp: i128) -> Result<Self, FieldError> {
        let n = self.params.unit_order() as i128;
        if self.is_zero() {
            return match exp.cmp(&0) {
                Ordering::Less => Err(FieldError::DivisionByZero),
                Ordering::Equal => Ok(self.params.one()),
                Ordering::Greater => Ok(self.clone()),
            };
        }
        Ok(self.pow_u64(exp.rem_euclid(n) as u64))
    }

    /// x^(q^i); depends only on i mod k.
    pub fn frobenius(&self, i: u64) -> Self {
        let k = self.params.k as u64;
        let shift = (i % k) as usize;
        if shift == 0 {
            return self.clone();
        }
        self.pow_u64(checked_pow(self.params.q, shift).expect("q^i < q^k"))
    }

    /// Euler's criterion; zero counts as a square. Requires odd q.
    pub fn is_square(&self) -> bool {
        self.is_zero() || self.pow_u64(self.params.unit_order() / 2).is_one()
    }

    /// A square root, if one exists (Tonelli-Shanks). Requires odd q.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let n = self.params.unit_order();
        let s = n.trailing_zeros();
        let odd = n >> s;
        let z = (2..self.params.order)
            .map(|i| self.params.element_from_index(i))
            .find(|e| !e.is_square())
            .expect("odd-order field has a non-square");
        let mut m = s;
        let mut c = z.pow_u64(odd);
        let mut t = self.pow_u64(odd);
        let mut r = self.pow_u64(odd.div_ceil(2));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = t2.square();
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t = &t * &c;
            r = &r * &b;
        }
        Some(r)
    }
}

impl PartialEq for ExtFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for ExtFieldElement {}

impl Hash for ExtFieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for ExtFieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtFieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl fmt::Debug for ExtFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExtFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.k == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<'a> Add<&'a ExtFieldElement> for &'a ExtFieldElement {
    type Output = ExtFieldElement;
    fn add(self, rhs: &ExtFieldElement) -> ExtFieldElement {
        self.same_field(rhs);
        let q = self.params.q;
        self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| add_mod(a, b, q))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a ExtFieldElement> for &'a ExtFieldElement {
    type Output = ExtFieldElement;
    fn sub(self, rhs: &ExtFieldElement) -> ExtFieldElement {
        self.same_field(rhs);
        let q = self.params.q;
        self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| sub_mod(a, b, q))
                .collect(),
        )
    }
}

impl Neg for &ExtFieldElement {
    type Output = ExtFieldElement;
    fn neg(self) -> ExtFieldElement {
        let q = self.params.q;
        self.with_coeffs(self.coeffs.iter().map(|&a| sub_mod(0, a, q)).collect())
    }
}

impl<'a> Mul<&'a ExtFieldElement> for &'a ExtFieldElement {
    type Output = ExtFieldElement;
    fn mul(self, rhs: &ExtFieldElement) -> ExtFieldElement {
        self.same_field(rhs);
        let p = &self.params;
        let (q, k) = (p.q, p.k);
        if k == 1 {
            return self.with_coeffs(vec![mul_mod(self.coeffs[0], rhs.coeffs[0], q)]);
        }
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u128 * b as u128) % q as u128;
            }
        }
        // reduce by the monic modulus from the top down
        for top in (k..2 * k - 1).rev() {
            let c = prod[top] % q as u128;
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in p.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                let sub = (c * m as u128) % q as u128;
                prod[idx] = (prod[idx] + q as u128 - sub) % q as u128;
            }
        }
        self.with_coeffs(prod[..k].iter().map(|&c| (c % q as u128) as u64).collect())
    }
}

impl<'a> Div<&'a ExtFieldElement> for &'a ExtFieldElement {
    type Output = ExtFieldElement;
    /// Panics on division by zero; use [`ExtFieldElement::checked_div`] otherwise.
    fn div(self, rhs: &ExtFieldElement) -> ExtFieldElement {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExtFieldElement> for ExtFieldElement {
            type Output = ExtFieldElement;
            fn $m(self, rhs: ExtFieldElement) -> ExtFieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExtFieldElement> for ExtFieldElement {
            type Output = ExtFieldElement;
            fn $m(self, rhs: &ExtFieldElement) -> ExtFieldElement {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ExtFieldElement {
    type Output = ExtFieldElement;
    fn neg(self) -> ExtFieldElement {
        -&self
    }
}

/// Polynomials over F_{q^k} as coefficient vectors, low degree first.
pub mod poly {
    use super::ExtFieldElement;

    fn trim(p: &mut Vec<ExtFieldElement>) {
        while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        if p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    /// Quotient and remainder of `a` by nonzero `m`.
    pub fn div_rem(
        a: &[ExtFieldElement],
        m: &[ExtFieldElement],
    ) -> (Vec<ExtFieldElement>, Vec<ExtFieldElement>) {
        let mut m = m.to_vec();
        trim(&mut m);
        assert!(!m.is_empty(), "polynomial division by zero");
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = m[dm].inverse().expect("nonzero leading coefficient");
        if r.len() <= dm {
            return (Vec::new(), r);
        }
        let zero = m[0].params().zero();
        let mut quot = vec![zero; r.len() - dm];
        while r.len() > dm {
            let top = r.len() - 1;
            let factor = &r[top] * &lead_inv;
            for (i, mc) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = &r[idx] - &(&factor * mc);
            }
            quot[top - dm] = factor;
            r.pop();
            trim(&mut r);
        }
        trim(&mut quot);
        (quot, r)
    }

    fn mul_mod(
        a: &[ExtFieldElement],
        b: &[ExtFieldElement],
        m: &[ExtFieldElement],
    ) -> Vec<ExtFieldElement> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let zero = a[0].params().zero();
        let mut prod = vec![zero; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(x * y);
            }
        }
        div_rem(&prod, m).1
    }

    fn pow_mod(
        base: &[ExtFieldElement],
        mut exp: u64,
        m: &[ExtFieldElement],
    ) -> Vec<ExtFieldElement> {
        let one = m[0].params().one();
        let mut acc = div_rem(&[one], m).1;
        let mut b = div_rem(base, m).1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(&acc, &b, m);
            }
            b = mul_mod(&b, &b, m);
            exp >>= 1;
        }
        acc
    }

    fn sub(
        a: &[ExtFieldElement],
        b: &[ExtFieldElement],
        zero: &ExtFieldElement,
    ) -> Vec<ExtFieldElement> {
        let n = a.len().max(b.len());
        let mut out: Vec<ExtFieldElement> = (0..n)
            .map(|i| &a.get(i).unwrap_or(zero).clone() - b.get(i).unwrap_or(zero))
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[ExtFieldElement], b: &[ExtFieldElement]) -> Vec<ExtFieldElement> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = div_rem(&x, &y).1;
            x = y;
            y = r;
        }
        monic(&x)
    }

    pub fn monic(p: &[ExtFieldElement]) -> Vec<ExtFieldElement> {
        match p.last() {
            None => Vec::new(),
            Some(lead) => {
                let inv = lead.inverse().expect("trimmed polynomial");
                p.iter().map(|c| c * &inv).collect()
            }
        }
    }

    pub fn eval(p: &[ExtFieldElement], x: &ExtFieldElement) -> ExtFieldElement {
        let zero = x.params().zero();
        p.iter().rev().fold(zero, |acc, c| &(&acc * x) + c)
    }

    /// Distinct roots in F_{q^k} of a nonzero polynomial, sorted. Odd q only.
    pub fn roots(p: &[ExtFieldElement]) -> Vec<ExtFieldElement> {
        let mut p = p.to_vec();
        trim(&mut p);
        if p.len() <= 1 {
            return Vec::new();
        }
        let params = p[0].params().clone();
        let zero = params.zero();
        let x = vec![zero.clone(), params.one()];
        // product of the distinct linear factors: gcd(x^Q - x, p)
        let xq = pow_mod(&x, params.order(), &p);
        let split = gcd(&sub(&xq, &x, &zero), &p);
        let mut out = Vec::new();
        split_roots(&split, &mut out);
        out.sort();
        out
    }

    fn split_roots(g: &[ExtFieldElement], out: &mut Vec<ExtFieldElement>) {
        match g.len() {
            0 | 1 => {}
            2 => out.push(-&(&g[0] / &g[1])),
            _ => {
                let params = g[0].params().clone();
                let zero = params.zero();
                let one = params.one();
                let half = params.unit_order() / 2;
                for idx in 0..params.order() {
                    let delta = params.element_from_index(idx);
                    let h = pow_mod(&[delta, one.clone()], half, g);
                    let f = gcd(&sub(&h, std::slice::from_ref(&one), &zero), g);
                    if f.len() > 1 && f.len() < g.len() {
                        let (rest, _) = div_rem(g, &f);
                        split_roots(&f, out);
                        split_roots(&monic(&rest), out);
                        return;
                    }
                }
                unreachable!("equal-degree splitting always finds a factor");
            }
        }
    }
}

/// Binary operations accepted by [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Raise `x` to the given integer exponent; `y` is ignored.
    Pow(i128),
}

/// Single entry point for field arithmetic with explicit errors.
pub fn field_arith(
    x: &ExtFieldElement,
    y: &ExtFieldElement,
    op: ArithOp,
) -> Result<ExtFieldElement, FieldError> {
    match op {
        ArithOp::Add => Ok(x + y),
        ArithOp::Sub => Ok(x - y),
        ArithOp::Mul => Ok(x * y),
        ArithOp::Div => x.checked_div(y),
        ArithOp::Pow(e) => x.pow(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Multiplies coefficient lists as integers and reduces by long division.
    fn oracle_mul(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
        let k = m.len() - 1;
        let mut prod = vec![0i128; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x as i128 * y as i128;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            for (i, &mc) in m.iter().enumerate() {
                prod[top - k + i] -= c * mc as i128;
            }
        }
        prod[..k]
            .iter()
            .map(|&c| c.rem_euclid(q as i128) as u64)
            .collect()
    }

    #[test]
    fn base_field_modulus_is_t() {
        let f = FieldParams::build_extension(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 5);
    }

    #[test]
    fn gf4_modulus_and_products() {
        let f = FieldParams::build_extension(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let t = f.generator_t();
        assert_eq!((&t * &t).coeffs(), &[1, 1]);
        assert_eq!(t.frobenius(1).coeffs(), &[1, 1]);
    }

    #[test]
    fn f25_modulus_has_no_root() {
        let f = FieldParams::build_extension(5, 2).unwrap();
        let m = f.modulus();
        assert_eq!(m.len(), 3);
        assert!((0..5).all(|x| eval_poly(m, x, 5) != 0));
    }

    #[test]
    fn irreducibility_matches_exhaustive_factor_scan() {
        // degree 2 and 3 over F_3 and F_5: irreducible iff no root
        for q in [3u64, 5] {
            for k in [2usize, 3] {
                for idx in 0..checked_pow(q, k).unwrap() {
                    let mut m = digits(idx, q, k);
                    m.push(1);
                    let has_root = (0..q).any(|x| eval_poly(&m, x, q) == 0);
                    assert_eq!(is_irreducible(&m, q), !has_root, "q={q} m={m:?}");
                }
            }
        }
        // x^4 + x^2 + 1 = (x^2+x+1)^2 over F_2: no root but reducible
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
    }

    #[test]
    fn size_cap_rejected() {
        assert!(matches!(
            FieldParams::build_extension(2, 64),
            Err(FieldError::SizeCap { .. })
        ));
        assert!(matches!(
            FieldParams::build_extension_capped(5, 3, 100),
            Err(FieldError::SizeCap { .. })
        ));
        assert!(matches!(
            FieldParams::build_extension(4, 1),
            Err(FieldError::NotPrime(4))
        ));
    }

    #[test]
    fn inverse_and_group_order() {
        let f = FieldParams::build_extension(7, 2).unwrap();
        for x in f.elements().skip(1) {
            assert!((&x * &x.inverse().unwrap()).is_one());
            assert!(x.pow_u64(f.unit_order()).is_one());
        }
        assert_eq!(f.zero().inverse(), Err(FieldError::DivisionByZero));
        assert_eq!(f.zero().pow(-1), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn negative_powers() {
        let f = FieldParams::build_extension(5, 3).unwrap();
        let x = f.element(&[2, 3, 1]);
        let inv = x.inverse().unwrap();
        assert_eq!(x.pow(-3).unwrap(), inv.pow_u64(3));
        assert_eq!(x.pow(0).unwrap(), f.one());
    }

    #[test]
    fn frobenius_fixes_base_field_and_has_order_k() {
        let f = FieldParams::build_extension(5, 3).unwrap();
        for x in f.elements().step_by(7) {
            assert_eq!(x.frobenius(3), x);
            assert_eq!(x.frobenius(4), x.frobenius(1));
        }
        for c in 0..5 {
            let e = f.from_base(c);
            assert_eq!(e.frobenius(1), e);
        }
    }

    #[test]
    fn mu_r_generators() {
        let f = FieldParams::build_extension(5, 2).unwrap();
        assert!(f.mu_r_generator(1).unwrap().is_one());
        let g = f.mu_r_generator(3).unwrap();
        assert!(!g.is_one());
        assert!(g.pow_u64(3).is_one());
        let base = FieldParams::build_extension(5, 1).unwrap();
        assert!(matches!(
            base.mu_r_generator(3),
            Err(FieldError::NotDivisor { .. })
        ));
        // composite order: exact order 12 in F_25^*
        let g12 = f.mu_r_generator(12).unwrap();
        for d in [1, 2, 3, 4, 6] {
            assert!(!g12.pow_u64(d).is_one());
        }
        assert!(g12.pow_u64(12).is_one());
    }

    #[test]
    fn sqrt_roundtrip() {
        let f = FieldParams::build_extension(13, 2).unwrap();
        let mut squares = 0;
        for x in f.elements() {
            if let Some(s) = x.sqrt() {
                assert_eq!(s.square(), x);
                squares += 1;
            }
        }
        assert_eq!(squares, (169 - 1) / 2 + 1);
    }

    #[test]
    fn poly_roots_match_scan() {
        let f = FieldParams::build_extension(7, 2).unwrap();
        for (a, b) in [(0u64, 1u64), (1, 3), (3, 2), (2, 5)] {
            let cubic = vec![f.from_base(b), f.from_base(a), f.zero(), f.one()];
            let scanned: Vec<_> = f
                .elements()
                .filter(|x| poly::eval(&cubic, x).is_zero())
                .collect();
            assert_eq!(poly::roots(&cubic), scanned);
        }
        let quad = vec![f.from_base(1), f.zero(), f.one()];
        let roots = poly::roots(&quad);
        assert_eq!(roots.len(), 2);
        let (q, r) = poly::div_rem(&quad, &[-&roots[0], f.one()]);
        assert!(r.is_empty());
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn field_arith_dispatch() {
        let f = FieldParams::build_extension(3, 2).unwrap();
        let x = f.element(&[1, 2]);
        let y = f.element(&[2, 2]);
        assert_eq!(
            field_arith(&x, &y, ArithOp::Add).unwrap(),
            f.element(&[0, 1])
        );
        assert_eq!(
            field_arith(&x, &f.zero(), ArithOp::Div),
            Err(FieldError::DivisionByZero)
        );
        let q = field_arith(&x, &y, ArithOp::Div).unwrap();
        assert_eq!(&q * &y, x);
        assert_eq!(field_arith(&x, &y, ArithOp::Pow(2)).unwrap(), x.square());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field_and_pair() -> impl Strategy<Value = (Arc<FieldParams>, Vec<u64>, Vec<u64>, u64)> {
            prop_oneof![
                Just((5u64, 2usize)),
                Just((7, 3)),
                Just((11, 2)),
                Just((3, 4)),
                Just((2, 5))
            ]
            .prop_flat_map(|(q, k)| {
                let f = FieldParams::build_extension(q, k).unwrap();
                (
                    Just(f),
                    proptest::collection::vec(0..q, k),
                    proptest::collection::vec(0..q, k),
                    0u64..8,
                )
            })
        }

        proptest! {
            #[test]
            fn mul_agrees_with_integer_polynomial_oracle((f, a, b, _i) in field_and_pair()) {
                let x = f.element(&a);
                let y = f.element(&b);
                let expected = oracle_mul(&a, &b, f.modulus(), f.q());
                let prod = &x * &y;
                prop_assert_eq!(prod.coeffs(), expected.as_slice());
            }

            #[test]
            fn field_axioms((f, a, b, _i) in field_and_pair()) {
                let x = f.element(&a);
                let y = f.element(&b);
                let z = f.element(&b.iter().rev().copied().collect::<Vec<_>>());
                prop_assert_eq!(&(&x + &y) - &y, x.clone());
                prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                prop_assert_eq!(&x * &y, &y * &x);
                if !y.is_zero() {
                    prop_assert_eq!(&(&x / &y) * &y, x.clone());
                }
            }

            #[test]
            fn frobenius_is_multiplicative_and_additive((f, a, b, i) in field_and_pair()) {
                let x = f.element(&a);
                let y = f.element(&b);
                prop_assert_eq!((&x * &y).frobenius(i), &x.frobenius(i) * &y.frobenius(i));
                prop_assert_eq!((&x + &y).frobenius(i), &x.frobenius(i) + &y.frobenius(i));
            }
        }
    }
}
