//! Rational functions on E carried together with their divisors.
//!
//! A [`TrackedFunction`] is an expression tree over a few primitives (constants,
//! the coordinates, chord/tangent lines and verticals) together with the
//! divisor it was built to have. Divisors are bookkept compositionally; they
//! are never re-derived from an arbitrary expression.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::curve::{Curve, CurvePoint};
use crate::field::{poly, ExtFieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuncError {
    #[error("function has a pole at {0:?}")]
    Pole(CurvePoint),
    #[error("indeterminate evaluation at {0:?}")]
    Indeterminate(CurvePoint),
    #[error("a line needs at least one affine point")]
    DegenerateLine,
    #[error("point is not on the curve")]
    NotOnCurve,
}

/// A place of E over the working field F_{q^k}.
///
/// Rational points are places of degree one. Zeros of the coordinate
/// functions may live in a proper extension of F_{q^k}; those are kept as
/// Galois orbits so their degree is still counted correctly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Point(CurvePoint),
    /// The pair of conjugate points with x = c, where c^3 + ac + b is a
    /// non-square. Degree 2.
    Fiber(ExtFieldElement),
    /// The points (ρ, 0) for ρ a root of a monic irreducible factor of
    /// x^3 + ax + b of degree 2 or 3 (coefficients low degree first).
    TwoTorsion(Vec<ExtFieldElement>),
}

impl Place {
    pub fn degree(&self) -> i64 {
        match self {
            Place::Point(_) => 1,
            Place::Fiber(_) => 2,
            Place::TwoTorsion(g) => g.len() as i64 - 1,
        }
    }

    pub fn frobenius(&self, i: u64) -> Place {
        match self {
            Place::Point(p) => Place::Point(p.frobenius(i)),
            Place::Fiber(c) => Place::Fiber(c.frobenius(i)),
            Place::TwoTorsion(g) => Place::TwoTorsion(g.iter().map(|c| c.frobenius(i)).collect()),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Point(p) => write!(f, "{p:?}"),
            Place::Fiber(c) => write!(f, "[x = {c}]"),
            Place::TwoTorsion(g) => write!(f, "[y = 0, g = {g:?}]"),
        }
    }
}

/// Formal sum of places with nonzero integer multiplicities.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Place, i64)>) -> Self {
        let mut d = Self::new();
        for (p, m) in terms {
            d.add_term(p, m);
        }
        d
    }

    pub fn add_term(&mut self, place: Place, mult: i64) {
        if mult == 0 {
            return;
        }
        let entry = self.terms.entry(place.clone()).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.terms.remove(&place);
        }
    }

    pub fn point(p: &CurvePoint, mult: i64) -> Self {
        Self::from_terms([(Place::Point(p.clone()), mult)])
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &m)| (p, m))
    }

    /// Multiplicity at a rational point (0 outside the support).
    pub fn multiplicity(&self, p: &CurvePoint) -> i64 {
        self.terms
            .get(&Place::Point(p.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// Sum of multiplicity times place degree.
    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, m)| m * p.degree()).sum()
    }

    /// Degree of the pole part, which is the degree of a function with this divisor.
    pub fn pole_degree(&self) -> u64 {
        self.terms
            .iter()
            .filter(|(_, &m)| m < 0)
            .map(|(p, m)| (-m * p.degree()) as u64)
            .sum()
    }

    pub fn zero_degree(&self) -> u64 {
        self.terms
            .iter()
            .filter(|(_, &m)| m > 0)
            .map(|(p, m)| (m * p.degree()) as u64)
            .sum()
    }

    pub fn scaled(&self, n: i64) -> Self {
        if n == 0 {
            return Self::new();
        }
        Self {
            terms: self.terms.iter().map(|(p, m)| (p.clone(), m * n)).collect(),
        }
    }

    pub fn frobenius(&self, i: u64) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, &m)| (p.frobenius(i), m)))
    }
}

impl std::ops::Add<&Divisor> for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, &m) in &rhs.terms {
            out.add_term(p.clone(), m);
        }
        out
    }
}

impl std::ops::Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        self.scaled(-1)
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, m)| format!("{m}{p:?}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Expression tree of a tracked function.
#[derive(Clone, PartialEq, Eq)]
pub enum Expr {
    Const(ExtFieldElement),
    X,
    Y,
    /// y - slope·x - intercept
    Line {
        slope: ExtFieldElement,
        intercept: ExtFieldElement,
    },
    /// x - c
    Vertical(ExtFieldElement),
    Product(Vec<Arc<Expr>>),
    Power(Arc<Expr>, i64),
    Reciprocal(Arc<Expr>),
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::X => write!(f, "x"),
            Expr::Y => write!(f, "y"),
            Expr::Line { slope, intercept } => write!(f, "(y - ({slope})x - ({intercept}))"),
            Expr::Vertical(c) => write!(f, "(x - ({c}))"),
            Expr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|e| format!("{e:?}")).collect();
                write!(f, "{}", parts.join("·"))
            }
            Expr::Power(e, n) => write!(f, "{e:?}^{n}"),
            Expr::Reciprocal(e) => write!(f, "1/{e:?}"),
        }
    }
}

/// Value of an expression at a point: finite (possibly zero) or a pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Finite(ExtFieldElement),
    Pole,
}

impl Expr {
    fn twisted(&self, i: u64) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c.frobenius(i)),
            Expr::X => Expr::X,
            Expr::Y => Expr::Y,
            Expr::Line { slope, intercept } => Expr::Line {
                slope: slope.frobenius(i),
                intercept: intercept.frobenius(i),
            },
            Expr::Vertical(c) => Expr::Vertical(c.frobenius(i)),
            Expr::Product(fs) => Expr::Product(fs.iter().map(|e| Arc::new(e.twisted(i))).collect()),
            Expr::Power(e, n) => Expr::Power(Arc::new(e.twisted(i)), *n),
            Expr::Reciprocal(e) => Expr::Reciprocal(Arc::new(e.twisted(i))),
        }
    }

    /// Evaluates the tree bottom-up. Fails only on 0·∞.
    fn eval(&self, p: &CurvePoint, one: &ExtFieldElement) -> Result<Value, FuncError> {
        let (x, y) = match p {
            CurvePoint::Affine(x, y) => (x, y),
            CurvePoint::Infinity => {
                return match self {
                    Expr::Const(c) => Ok(Value::Finite(c.clone())),
                    Expr::X | Expr::Y | Expr::Line { .. } | Expr::Vertical(_) => Ok(Value::Pole),
                    _ => self.eval_composite(p, one),
                };
            }
        };
        match self {
            Expr::Const(c) => Ok(Value::Finite(c.clone())),
            Expr::X => Ok(Value::Finite(x.clone())),
            Expr::Y => Ok(Value::Finite(y.clone())),
            Expr::Line { slope, intercept } => Ok(Value::Finite(&(y - &(slope * x)) - intercept)),
            Expr::Vertical(c) => Ok(Value::Finite(x - c)),
            _ => self.eval_composite(p, one),
        }
    }

    fn eval_composite(&self, p: &CurvePoint, one: &ExtFieldElement) -> Result<Value, FuncError> {
        match self {
            Expr::Product(fs) => {
                let mut acc = one.clone();
                let (mut zeros, mut poles) = (0usize, 0usize);
                for f in fs {
                    match f.eval(p, one)? {
                        Value::Pole => poles += 1,
                        Value::Finite(v) if v.is_zero() => zeros += 1,
                        Value::Finite(v) => acc = &acc * &v,
                    }
                }
                match (zeros, poles) {
                    (0, 0) => Ok(Value::Finite(acc)),
                    (0, _) => Ok(Value::Pole),
                    (_, 0) => Ok(Value::Finite(one.params().zero())),
                    _ => Err(FuncError::Indeterminate(p.clone())),
                }
            }
            Expr::Power(e, n) => {
                if *n == 0 {
                    return Ok(Value::Finite(one.clone()));
                }
                match (e.eval(p, one)?, *n > 0) {
                    (Value::Pole, true) => Ok(Value::Pole),
                    (Value::Pole, false) => Ok(Value::Finite(one.params().zero())),
                    (Value::Finite(v), true) => {
                        Ok(Value::Finite(v.pow(*n as i128).expect("positive power")))
                    }
                    (Value::Finite(v), false) if v.is_zero() => Ok(Value::Pole),
                    (Value::Finite(v), false) => {
                        Ok(Value::Finite(v.pow(*n as i128).expect("nonzero base")))
                    }
                }
            }
            Expr::Reciprocal(e) => match e.eval(p, one)? {
                Value::Pole => Ok(Value::Finite(one.params().zero())),
                Value::Finite(v) if v.is_zero() => Ok(Value::Pole),
                Value::Finite(v) => Ok(Value::Finite(v.inverse().expect("nonzero"))),
            },
            _ => unreachable!("primitives are handled in eval"),
        }
    }
}

/// A rational function on E with its divisor.
#[derive(Clone)]
pub struct TrackedFunction {
    curve: Curve,
    expr: Arc<Expr>,
    div: Divisor,
}

impl fmt::Debug for TrackedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrackedFunction")
            .field("expr", &self.expr)
            .field("div", &self.div)
            .finish()
    }
}

impl TrackedFunction {
    fn build(curve: &Curve, expr: Expr, div: Divisor) -> Self {
        debug_assert_eq!(
            div.degree(),
            0,
            "principal divisors have degree zero: {div:?}"
        );
        Self {
            curve: curve.clone(),
            expr: Arc::new(expr),
            div,
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn divisor(&self) -> &Divisor {
        &self.div
    }

    /// Degree of f as a map to P^1: the size of its pole divisor.
    pub fn degree(&self) -> u64 {
        self.div.pole_degree()
    }

    pub fn is_constant(&self) -> bool {
        self.div.is_empty()
    }

    /// Raw evaluation of the expression tree without consulting the divisor.
    pub fn evaluate_raw(&self, p: &CurvePoint) -> Result<Value, FuncError> {
        self.expr.eval(p, &self.curve.params().one())
    }

    /// Value of f at P.
    ///
    /// Zeros of f return 0 and poles return [`FuncError::Pole`], read from the
    /// divisor. Off the support the tree is evaluated; if a cancelled factor
    /// makes it 0/∞ there, the result is [`FuncError::Indeterminate`].
    pub fn evaluate(&self, p: &CurvePoint) -> Result<ExtFieldElement, FuncError> {
        if !self.curve.contains(p) {
            return Err(FuncError::NotOnCurve);
        }
        let m = self.div.multiplicity(p);
        if m > 0 {
            return Ok(self.curve.params().zero());
        }
        if m < 0 {
            return Err(FuncError::Pole(p.clone()));
        }
        match self.evaluate_raw(p)? {
            Value::Finite(v) if !v.is_zero() => Ok(v),
            _ => Err(FuncError::Indeterminate(p.clone())),
        }
    }
}

/// Constant function c (c ≠ 0); empty divisor.
pub fn make_const(curve: &Curve, c: ExtFieldElement) -> TrackedFunction {
    assert!(!c.is_zero(), "the zero function has no divisor");
    TrackedFunction::build(curve, Expr::Const(c), Divisor::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    X,
    Y,
}

/// The coordinate function x (degree 2) or y (degree 3).
pub fn make_coord(curve: &Curve, which: Coord) -> TrackedFunction {
    let params = curve.params();
    let zero = params.zero();
    let mut div = Divisor::new();
    match which {
        Coord::X => {
            div.add_term(Place::Point(CurvePoint::Infinity), -2);
            let rhs = curve.rhs(&zero);
            match rhs.sqrt() {
                Some(y) => {
                    div.add_term(Place::Point(CurvePoint::Affine(zero.clone(), y.clone())), 1);
                    div.add_term(Place::Point(CurvePoint::Affine(zero.clone(), -&y)), 1);
                }
                None => div.add_term(Place::Fiber(zero.clone()), 1),
            }
            TrackedFunction::build(curve, Expr::X, div)
        }
        Coord::Y => {
            div.add_term(Place::Point(CurvePoint::Infinity), -3);
            let cubic = vec![
                curve.b().clone(),
                curve.a().clone(),
                zero.clone(),
                params.one(),
            ];
            let roots = poly::roots(&cubic);
            let mut rest = cubic;
            for r in &roots {
                div.add_term(Place::Point(CurvePoint::Affine(r.clone(), zero.clone())), 1);
                rest = poly::div_rem(&rest, &[-r, params.one()]).0;
            }
            if rest.len() > 1 {
                div.add_term(Place::TwoTorsion(poly::monic(&rest)), 1);
            }
            TrackedFunction::build(curve, Expr::Y, div)
        }
    }
}

/// The vertical line through P: divisor (P) + (-P) - 2(O). Constant 1 at O.
pub fn make_vertical(curve: &Curve, p: &CurvePoint) -> TrackedFunction {
    match p {
        CurvePoint::Infinity => make_const(curve, curve.params().one()),
        CurvePoint::Affine(x, _) => {
            let mut div = Divisor::point(p, 1);
            div.add_term(Place::Point(curve.neg(p)), 1);
            div.add_term(Place::Point(CurvePoint::Infinity), -2);
            TrackedFunction::build(curve, Expr::Vertical(x.clone()), div)
        }
    }
}

/// The line through P and Q (tangent when P = Q):
/// divisor (P) + (Q) + (-(P+Q)) - 3(O).
///
/// When the line is vertical (Q = -P, a 2-torsion tangent, or one input is O)
/// the vertical through the affine input is returned instead.
pub fn make_line(
    curve: &Curve,
    p: &CurvePoint,
    q: &CurvePoint,
) -> Result<TrackedFunction, FuncError> {
    if !curve.contains(p) || !curve.contains(q) {
        return Err(FuncError::NotOnCurve);
    }
    match (p, q) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => Err(FuncError::DegenerateLine),
        (CurvePoint::Infinity, a) | (a, CurvePoint::Infinity) => Ok(make_vertical(curve, a)),
        (CurvePoint::Affine(x1, y1), _) => match curve.slope(p, q) {
            None => Ok(make_vertical(curve, p)),
            Some(slope) => {
                let intercept = y1 - &(&slope * x1);
                let third = curve.neg(&curve.add_unchecked(p, q));
                let mut div = Divisor::point(p, 1);
                div.add_term(Place::Point(q.clone()), 1);
                div.add_term(Place::Point(third), 1);
                div.add_term(Place::Point(CurvePoint::Infinity), -3);
                Ok(TrackedFunction::build(
                    curve,
                    Expr::Line { slope, intercept },
                    div,
                ))
            }
        },
    }
}

fn flatten(e: &Arc<Expr>, out: &mut Vec<Arc<Expr>>) {
    match e.as_ref() {
        Expr::Product(fs) => out.extend(fs.iter().cloned()),
        _ => out.push(Arc::clone(e)),
    }
}

/// f · g; divisors add with cancellation.
pub fn func_mul(f: &TrackedFunction, g: &TrackedFunction) -> TrackedFunction {
    let mut factors = Vec::new();
    flatten(&f.expr, &mut factors);
    flatten(&g.expr, &mut factors);
    TrackedFunction::build(&f.curve, Expr::Product(factors), &f.div + &g.div)
}

/// Product of many functions over the same curve; the empty product is 1.
pub fn func_product<'a>(
    curve: &Curve,
    fs: impl IntoIterator<Item = &'a TrackedFunction>,
) -> TrackedFunction {
    let fs: Vec<&TrackedFunction> = fs.into_iter().collect();
    if let [single] = fs.as_slice() {
        return (*single).clone();
    }
    let mut factors = Vec::new();
    let mut div = Divisor::new();
    for f in fs {
        flatten(&f.expr, &mut factors);
        div = &div + &f.div;
    }
    if factors.is_empty() {
        return make_const(curve, curve.params().one());
    }
    TrackedFunction::build(curve, Expr::Product(factors), div)
}

/// f^n for any integer n; f^0 is the constant 1.
pub fn func_pow(f: &TrackedFunction, n: i64) -> TrackedFunction {
    match n {
        0 => make_const(&f.curve, f.curve.params().one()),
        1 => f.clone(),
        _ => TrackedFunction::build(
            &f.curve,
            Expr::Power(Arc::clone(&f.expr), n),
            f.div.scaled(n),
        ),
    }
}

/// 1/f
pub fn func_inv(f: &TrackedFunction) -> TrackedFunction {
    TrackedFunction::build(&f.curve, Expr::Reciprocal(Arc::clone(&f.expr)), -&f.div)
}

/// Applies x ↦ x^(q^i) to every coefficient of f.
///
/// The result m satisfies m(π^i(P)) = f(P)^(q^i); its divisor is the
/// Frobenius image of div(f), so the degree is unchanged.
pub fn twist(f: &TrackedFunction, i: u64) -> TrackedFunction {
    if i.is_multiple_of(f.curve.params().k() as u64) {
        return f.clone();
    }
    TrackedFunction::build(&f.curve, f.expr.twisted(i), f.div.frobenius(i))
}

/// The Miller function f_{n,P} with divisor n(P) - ([n]P) - (n-1)(O),
/// built by the additive recursion f_{j+1} = f_j · l_{[j]P,P} / v_{[j+1]P}.
pub fn miller_function(
    curve: &Curve,
    n: u64,
    p: &CurvePoint,
) -> Result<TrackedFunction, FuncError> {
    let mut factors = Vec::new();
    if p.is_infinity() {
        return Ok(make_const(curve, curve.params().one()));
    }
    let mut t = p.clone();
    for _ in 1..n {
        let next = curve.add_unchecked(&t, p);
        // at t = O the step factor l_{O,P} / v_P is 1
        if !t.is_infinity() {
            factors.push(make_line(curve, &t, p)?);
            if !next.is_infinity() {
                factors.push(func_inv(&make_vertical(curve, &next)));
            }
        }
        t = next;
    }
    Ok(func_product(curve, &factors))
}
