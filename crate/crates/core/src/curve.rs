//! Short Weierstrass curves y^2 = x^3 + ax + b in characteristic >= 5.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{
    checked_pow, is_prime, prime_factors, ExtFieldElement, FieldError, FieldParams,
};

/// Largest field that `enumerate_points` will scan.
pub const ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("characteristic {0} is below 5")]
    SmallCharacteristic(u64),
    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    Singular,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("{r} does not divide the group order {n}")]
    NotDivisor { r: u64, n: u64 },
    #[error("field of size {size} is above the enumeration cap {cap}")]
    SizeCap { size: u64, cap: u64 },
    #[error("{r} divides q = {q}")]
    RDividesQ { q: u64, r: u64 },
}

/// A point of E: the identity O or an affine pair.
///
/// The derived order puts O first and then sorts affine points by (x, y).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine(ExtFieldElement, ExtFieldElement),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&ExtFieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&ExtFieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(_, y) => Some(y),
        }
    }

    /// Applies x ↦ x^(q^i) to both coordinates.
    pub fn frobenius(&self, i: u64) -> CurvePoint {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.frobenius(i), y.frobenius(i)),
        }
    }

    /// True if both coordinates lie in F_q.
    pub fn is_base_rational(&self) -> bool {
        match self {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => x.in_base_field() && y.in_base_field(),
        }
    }
}

impl std::fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// y^2 = x^3 + ax + b over the field described by `params`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    params: Arc<FieldParams>,
    a: ExtFieldElement,
    b: ExtFieldElement,
}

impl Curve {
    pub fn new(
        params: Arc<FieldParams>,
        a: ExtFieldElement,
        b: ExtFieldElement,
    ) -> Result<Self, CurveError> {
        if params.q() < 5 {
            return Err(CurveError::SmallCharacteristic(params.q()));
        }
        let disc = &(&params.from_base(4) * &a.pow_u64(3)) + &(&params.from_base(27) * &b.square());
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(Self { params, a, b })
    }

    /// Curve over the prime field F_q with integer coefficients.
    pub fn over_prime_field(q: u64, a: u64, b: u64) -> Result<Self, CurveError> {
        let params = FieldParams::build_extension(q, 1)?;
        let (a, b) = (params.from_base(a), params.from_base(b));
        Self::new(params, a, b)
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn a(&self) -> &ExtFieldElement {
        &self.a
    }

    pub fn b(&self) -> &ExtFieldElement {
        &self.b
    }

    /// Same curve over a field containing F_q. Coefficients must be in F_q.
    pub fn lift(&self, ext: &Arc<FieldParams>) -> Curve {
        assert_eq!(ext.q(), self.params.q());
        assert!(self.a.in_base_field() && self.b.in_base_field());
        Curve {
            params: Arc::clone(ext),
            a: ext.from_base(self.a.coeffs()[0]),
            b: ext.from_base(self.b.coeffs()[0]),
        }
    }

    /// Moves a point with F_q coordinates onto this curve's field.
    pub fn lift_point(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                assert!(
                    x.in_base_field() && y.in_base_field(),
                    "point is not F_q-rational"
                );
                CurvePoint::Affine(
                    self.params.from_base(x.coeffs()[0]),
                    self.params.from_base(y.coeffs()[0]),
                )
            }
        }
    }

    /// x^3 + ax + b
    pub fn rhs(&self, x: &ExtFieldElement) -> ExtFieldElement {
        &(&(&x.square() * x) + &(&self.a * x)) + &self.b
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    /// Validated affine point.
    pub fn point(&self, x: ExtFieldElement, y: ExtFieldElement) -> Result<CurvePoint, CurveError> {
        let p = CurvePoint::Affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(CurveError::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), -y),
        }
    }

    /// Slope of the chord through P and Q (tangent if equal), or `None` when
    /// the line is vertical or one input is O.
    pub fn slope(&self, p: &CurvePoint, q: &CurvePoint) -> Option<ExtFieldElement> {
        let (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) = (p, q) else {
            return None;
        };
        if x1 != x2 {
            return Some(&(y2 - y1) / &(x2 - x1));
        }
        if y1 != y2 || y1.is_zero() {
            return None;
        }
        let num = &(&self.params.from_base(3) * &x1.square()) + &self.a;
        Some(&num / &(y1 + y1))
    }

    /// Chord-and-tangent addition on points already known to lie on E.
    pub fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        match (p, q) {
            (CurvePoint::Infinity, _) => q.clone(),
            (_, CurvePoint::Infinity) => p.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, _)) => match self.slope(p, q) {
                None => CurvePoint::Infinity,
                Some(l) => {
                    let x3 = &(&l.square() - x1) - x2;
                    let y3 = &(&l * &(x1 - &x3)) - y1;
                    CurvePoint::Affine(x3, y3)
                }
            },
        }
    }

    pub fn point_add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint, CurveError> {
        if !self.contains(p) || !self.contains(q) {
            return Err(CurveError::NotOnCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add_unchecked(p, p)
    }

    /// [m]P by double-and-add; negative m negates.
    pub fn scalar_mul(&self, p: &CurvePoint, m: i128) -> CurvePoint {
        let base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut addend = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &addend);
            }
            addend = self.double(&addend);
            e >>= 1;
        }
        acc
    }

    /// Every point of E over this curve's field, O first, then affine points
    /// by x index with the two y-values in sorted order.
    pub fn enumerate_points(&self) -> Result<Vec<CurvePoint>, CurveError> {
        let size = self.params.order();
        if size > ENUMERATION_CAP {
            return Err(CurveError::SizeCap {
                size,
                cap: ENUMERATION_CAP,
            });
        }
        let mut out = vec![CurvePoint::Infinity];
        for x in self.params.elements() {
            let rhs = self.rhs(&x);
            if rhs.is_zero() {
                out.push(CurvePoint::Affine(x, rhs));
            } else if let Some(y) = rhs.sqrt() {
                let ny = -&y;
                let (lo, hi) = if y < ny { (y, ny) } else { (ny, y) };
                out.push(CurvePoint::Affine(x.clone(), lo));
                out.push(CurvePoint::Affine(x, hi));
            }
        }
        Ok(out)
    }

    /// #E over this curve's field, by enumeration.
    pub fn order(&self) -> Result<u64, CurveError> {
        Ok(self.enumerate_points()?.len() as u64)
    }

    /// All P with [r]P = O over this curve's field.
    pub fn torsion_subgroup(&self, r: u64) -> Result<Vec<CurvePoint>, CurveError> {
        let points = self.enumerate_points()?;
        let n = points.len() as u64;
        if r == 0 || !n.is_multiple_of(r) {
            return Err(CurveError::NotDivisor { r, n });
        }
        Ok(points
            .into_iter()
            .filter(|p| self.scalar_mul(p, r as i128).is_infinity())
            .collect())
    }
}

/// Minimal k >= 1 with r | q^k - 1, subject to q^k - 1 < cap.
pub fn embedding_degree(q: u64, r: u64, cap: u64) -> Result<usize, CurveError> {
    if r == 0 || q.is_multiple_of(r) {
        return Err(CurveError::RDividesQ { q, r });
    }
    let mut power = q % r;
    let mut k = 1usize;
    loop {
        match checked_pow(q, k) {
            Some(qk) if qk - 1 < cap => {}
            _ => return Err(FieldError::SizeCap { q, k, cap }.into()),
        }
        if power == 1 % r {
            return Ok(k);
        }
        power = ((power as u128 * q as u128) % r as u128) as u64;
        k += 1;
    }
}

/// #E(F_{q^k}) from n = #E(F_q) via the trace recurrence
/// s_0 = 2, s_1 = t, s_{j+1} = t s_j - q s_{j-1}.
pub fn order_over_extension(q: u64, n: u64, k: usize) -> u64 {
    let t = q as i128 + 1 - n as i128;
    let (mut prev, mut cur) = (2i128, t);
    for _ in 1..k {
        let next = t * cur - q as i128 * prev;
        prev = cur;
        cur = next;
    }
    let qk = checked_pow(q, k).expect("within cap") as i128;
    (qk + 1 - cur) as u64
}

/// A pairing-friendly curve instance: E/F_q with a prime r | #E(F_q),
/// embedding degree k, and the reduced-pairing exponent d = (q^k - 1)/r.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveRecord {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub r: u64,
    pub k: usize,
    pub d: u64,
}

impl CurveRecord {
    /// Builds a record for a given curve and r, checking every record
    /// invariant. With `r = None` the largest admissible prime is chosen.
    pub fn for_curve(q: u64, a: u64, b: u64, r: Option<u64>, cap: u64) -> Result<Self, CurveError> {
        let curve = Curve::over_prime_field(q, a % q, b % q)?;
        let n = count_points(q, a % q, b % q);
        let candidates: Vec<u64> = match r {
            Some(r) => vec![r],
            None => prime_factors(n).into_iter().rev().collect(),
        };
        let mut last_err = CurveError::NotDivisor {
            r: r.unwrap_or(0),
            n,
        };
        for r in candidates {
            if !is_prime(r) {
                return Err(FieldError::NotPrime(r).into());
            }
            if !n.is_multiple_of(r) || (n / r).is_multiple_of(r) {
                last_err = CurveError::NotDivisor { r, n };
                continue;
            }
            match embedding_degree(q, r, cap) {
                Ok(k) => {
                    let qk = checked_pow(q, k).expect("checked by embedding_degree");
                    return Ok(Self {
                        q,
                        a: curve.a().coeffs()[0],
                        b: curve.b().coeffs()[0],
                        n,
                        r,
                        k,
                        d: (qk - 1) / r,
                    });
                }
                Err(e) => last_err = e,
            }
        }
        Err(last_err)
    }

    pub fn curve(&self) -> Curve {
        Curve::over_prime_field(self.q, self.a, self.b).expect("record holds a valid curve")
    }

    /// q^k - 1
    pub fn unit_order(&self) -> u64 {
        checked_pow(self.q, self.k).expect("record respects the cap") - 1
    }
}

/// Legendre symbol style point count over F_q using machine arithmetic.
fn count_points(q: u64, a: u64, b: u64) -> u64 {
    let half = (q - 1) / 2;
    let mut n = 1u64;
    for x in 0..q {
        let (xw, qw) = (x as u128, q as u128);
        let rhs = ((xw * xw % qw * xw + a as u128 * xw + b as u128) % qw) as u64;
        if rhs == 0 {
            n += 1;
        } else if mod_pow(rhs, half, q) == 1 {
            n += 2;
        }
    }
    n
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Enumerates pairing-friendly records over the given primes.
///
/// For each q and every nonsingular (a, b) in lexicographic order, emits one
/// record per prime r | n (ascending) with r >= r_min, r^2 ∤ n, r ≠ q,
/// k <= k_max and q^k - 1 < cap. Non-prime or too-small q are skipped.
pub fn scan_corpus(q_list: &[u64], k_max: usize, r_min: u64, cap: u64) -> Vec<CurveRecord> {
    let mut out = Vec::new();
    for &q in q_list {
        if q < 5 || !is_prime(q) {
            continue;
        }
        for a in 0..q {
            for b in 0..q {
                let (aw, bw, qw) = (a as u128, b as u128, q as u128);
                if (4 * aw * aw % qw * aw + 27 * bw * bw) % qw == 0 {
                    continue;
                }
                let n = count_points(q, a, b);
                for r in prime_factors(n) {
                    if r < r_min || r == q || (n / r).is_multiple_of(r) {
                        continue;
                    }
                    let Ok(k) = embedding_degree(q, r, cap) else {
                        continue;
                    };
                    if k > k_max {
                        continue;
                    }
                    let qk = checked_pow(q, k).expect("checked by embedding_degree");
                    out.push(CurveRecord {
                        q,
                        a,
                        b,
                        n,
                        r,
                        k,
                        d: (qk - 1) / r,
                    });
                }
            }
        }
    }
    out
}
