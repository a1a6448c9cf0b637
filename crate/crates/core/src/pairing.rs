//! Miller's algorithm, the reduced Tate pairing on G1 × G2, brute-force
//! inversion of the pairing in either argument, and Diffie-Hellman solving
//! through two inversions.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{order_over_extension, Curve, CurveError, CurvePoint, CurveRecord};
use crate::field::{ExtFieldElement, FieldError, FieldParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("embedding degree 1 leaves no r-torsion subgroup outside G1 when r^2 does not divide #E(F_q)")]
    NoSecondGroup,
    #[error("Miller evaluation hit a zero or pole of an intermediate function at {0:?}")]
    Indeterminate(CurvePoint),
    #[error("every divisor shift failed to give a defined Miller value")]
    ShiftsExhausted,
    #[error("point is not in the expected subgroup")]
    NotInGroup,
    #[error("value is not an r-th root of unity")]
    NotInMuR,
    #[error("the fixed argument of an inversion must not be the identity")]
    IdentityArgument,
    #[error("inversion found no preimage although the pairing is non-degenerate")]
    NoPreimage,
    #[error("the reduced Tate pairing is trivial on G1 x E[r]; r^3 divides #E(F_{{q^k}})")]
    Degenerate,
}

/// Value of the line through T and S (tangent if equal) at `at`, with the
/// vertical fallback and l_{O,O} = 1.
fn line_value(curve: &Curve, t: &CurvePoint, s: &CurvePoint, at: &CurvePoint) -> ExtFieldElement {
    let (CurvePoint::Affine(xq, yq), one) = (at, curve.params().one()) else {
        unreachable!("evaluation point is affine")
    };
    match (t, s) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => one,
        (CurvePoint::Infinity, CurvePoint::Affine(x, _))
        | (CurvePoint::Affine(x, _), CurvePoint::Infinity) => xq - x,
        (CurvePoint::Affine(x1, y1), _) => match curve.slope(t, s) {
            None => xq - x1,
            Some(l) => &(yq - y1) - &(&l * &(xq - x1)),
        },
    }
}

fn vertical_value(curve: &Curve, r: &CurvePoint, at: &CurvePoint) -> ExtFieldElement {
    match (r, at) {
        (CurvePoint::Infinity, _) => curve.params().one(),
        (CurvePoint::Affine(x, _), CurvePoint::Affine(xq, _)) => xq - x,
        _ => unreachable!("evaluation point is affine"),
    }
}

/// f_{n,P}(Q) for the Miller function with divisor n(P) - ([n]P) - (n-1)(O),
/// by double-and-add over the bits of n.
pub fn miller(
    curve: &Curve,
    n: u64,
    p: &CurvePoint,
    qe: &CurvePoint,
) -> Result<ExtFieldElement, PairingError> {
    assert!(n >= 1, "Miller loop needs n >= 1");
    if qe.is_infinity() {
        return Err(PairingError::Indeterminate(qe.clone()));
    }
    let mut f = curve.params().one();
    let mut t = p.clone();
    let step =
        |f: &mut ExtFieldElement, t: &mut CurvePoint, s: &CurvePoint| -> Result<(), PairingError> {
            let l = line_value(curve, t, s, qe);
            let next = curve.add_unchecked(t, s);
            let v = vertical_value(curve, &next, qe);
            if l.is_zero() || v.is_zero() {
                return Err(PairingError::Indeterminate(qe.clone()));
            }
            *f = &(&*f * &l) / &v;
            *t = next;
            Ok(())
        };
    for bit in (0..63 - n.leading_zeros()).rev() {
        f = f.square();
        let tt = t.clone();
        step(&mut f, &mut t, &tt)?;
        if (n >> bit) & 1 == 1 {
            step(&mut f, &mut t, p)?;
        }
    }
    Ok(f)
}

/// A fully instantiated pairing setting for one corpus record.
#[derive(Debug, Clone)]
pub struct PairingContext {
    record: CurveRecord,
    base: Curve,
    curve: Curve,
    ext: Arc<FieldParams>,
    p1: CurvePoint,
    p2: CurvePoint,
    g1: Vec<CurvePoint>,
    g2: Vec<CurvePoint>,
    g_r: ExtFieldElement,
}

impl PairingContext {
    /// Builds G1 = <P1> over F_q and selects G2 = <P2> inside E(F_{q^k})[r].
    ///
    /// P1 is the first non-identity point of E(F_q)[r] in enumeration order.
    /// P2 comes from scanning x over F_{q^k} in index order, clearing the
    /// cofactor of #E(F_{q^k}), and keeping the first r-torsion point outside
    /// G1 on which the pairing with P1 is verified non-degenerate by
    /// evaluating every e(P1, [j]P2).
    ///
    /// Fails with [`PairingError::Degenerate`] when e(P1, .) is trivial on
    /// E[r], which happens exactly when r^3 divides #E(F_{q^k}).
    pub fn new(record: &CurveRecord) -> Result<Self, PairingError> {
        if record.k < 2 {
            return Err(PairingError::NoSecondGroup);
        }
        let base = record.curve();
        let r = record.r;
        let ext = FieldParams::build_extension(record.q, record.k)?;
        let curve = base.lift(&ext);
        let g1_base = base.torsion_subgroup(r)?;
        let p1 = curve.lift_point(
            g1_base
                .iter()
                .find(|p| !p.is_infinity())
                .ok_or(PairingError::NotInGroup)?,
        );
        let g1 = multiples(&curve, &p1, r);

        let nk = order_over_extension(record.q, record.n, record.k);
        let mut cofactor = nk;
        while cofactor.is_multiple_of(r) {
            cofactor /= r;
        }
        let g_r = ext.mu_r_generator(r)?;
        let d = record.d;
        for idx in 0..ext.order() {
            let x = ext.element_from_index(idx);
            let Some(y) = curve.rhs(&x).sqrt() else {
                continue;
            };
            let mut cand = curve.scalar_mul(&CurvePoint::Affine(x, y), cofactor as i128);
            if cand.is_infinity() {
                continue;
            }
            loop {
                let next = curve.scalar_mul(&cand, r as i128);
                if next.is_infinity() {
                    break;
                }
                cand = next;
            }
            if g1.contains(&cand) {
                continue;
            }
            let g2 = multiples(&curve, &cand, r);
            let mut values: Vec<ExtFieldElement> = Vec::with_capacity(r as usize);
            for q in &g2 {
                values.push(reduced_tate_raw(&curve, &base, r, d, &p1, q)?);
            }
            let mut sorted = values.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() as u64 != r || values.iter().any(|v| !v.pow_u64(r).is_one()) {
                // E[r] = G1 + <cand> and e(P1, G1) = 1 for k >= 2, so no other
                // choice of G2 can do better.
                return Err(PairingError::Degenerate);
            }
            return Ok(Self {
                record: record.clone(),
                base,
                curve,
                ext,
                p1,
                p2: cand,
                g1,
                g2,
                g_r,
            });
        }
        Err(PairingError::Degenerate)
    }

    pub fn record(&self) -> &CurveRecord {
        &self.record
    }

    /// E over F_q.
    pub fn base_curve(&self) -> &Curve {
        &self.base
    }

    /// E over F_{q^k}; all points of the context live here.
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn ext(&self) -> &Arc<FieldParams> {
        &self.ext
    }

    pub fn p1(&self) -> &CurvePoint {
        &self.p1
    }

    pub fn p2(&self) -> &CurvePoint {
        &self.p2
    }

    /// [j]P1 for j in 0..r.
    pub fn g1(&self) -> &[CurvePoint] {
        &self.g1
    }

    /// [j]P2 for j in 0..r.
    pub fn g2(&self) -> &[CurvePoint] {
        &self.g2
    }

    /// A generator of the r-th roots of unity in F_{q^k}.
    pub fn g_r(&self) -> &ExtFieldElement {
        &self.g_r
    }

    pub fn r(&self) -> u64 {
        self.record.r
    }

    /// (q^k - 1)/r
    pub fn d(&self) -> u64 {
        self.record.d
    }

    /// e(P, Q) = f_{r,P}(Q)^d.
    pub fn tate_reduced(
        &self,
        p: &CurvePoint,
        q: &CurvePoint,
    ) -> Result<ExtFieldElement, PairingError> {
        if !self.g1.contains(p)
            || !self.curve.contains(q)
            || !self.curve.scalar_mul(q, self.r() as i128).is_infinity()
        {
            return Err(PairingError::NotInGroup);
        }
        reduced_tate_raw(&self.curve, &self.base, self.r(), self.d(), p, q)
    }

    /// The unique V ∈ G2 with e(fixed, V) = z, by trying [j]P2 for j in 0..r.
    pub fn invert_second(
        &self,
        fixed: &CurvePoint,
        z: &ExtFieldElement,
    ) -> Result<Inversion, PairingError> {
        if fixed.is_infinity() {
            return Err(PairingError::IdentityArgument);
        }
        self.check_mu_r(z)?;
        for (j, v) in self.g2.iter().enumerate() {
            if &self.tate_reduced(fixed, v)? == z {
                return Ok(Inversion {
                    point: v.clone(),
                    evaluations: j as u64 + 1,
                });
            }
        }
        Err(PairingError::NoPreimage)
    }

    /// The unique X ∈ G1 with e(X, fixed) = w, by trying [j]P1 for j in 0..r.
    pub fn invert_first(
        &self,
        fixed: &CurvePoint,
        w: &ExtFieldElement,
    ) -> Result<Inversion, PairingError> {
        if fixed.is_infinity() {
            return Err(PairingError::IdentityArgument);
        }
        self.check_mu_r(w)?;
        for (j, x) in self.g1.iter().enumerate() {
            if &self.tate_reduced(x, fixed)? == w {
                return Ok(Inversion {
                    point: x.clone(),
                    evaluations: j as u64 + 1,
                });
            }
        }
        Err(PairingError::NoPreimage)
    }

    fn check_mu_r(&self, z: &ExtFieldElement) -> Result<(), PairingError> {
        if z.params().as_ref() != self.ext.as_ref() || !z.pow_u64(self.r()).is_one() {
            return Err(PairingError::NotInMuR);
        }
        Ok(())
    }

    /// Steps 1-4 of the reduction with e1 = e2 = the reduced Tate pairing:
    /// z = e([A]Y, U), V = [A]U from inverting e(Y, ·), w = e([B]Y, V),
    /// answer = [AB]Y from inverting e(·, U).
    pub fn solve_dh(&self, inst: &DhInstance) -> Result<DhTrace, PairingError> {
        let z = self.tate_reduced(&inst.ay, &inst.u)?;
        let v = self.invert_second(&inst.y, &z)?;
        let w = self.tate_reduced(&inst.by, &v.point)?;
        let answer = self.invert_first(&inst.u, &w)?;
        Ok(DhTrace {
            z,
            v: v.point,
            w,
            answer: answer.point,
            pairing_evaluations: 2 + v.evaluations + answer.evaluations,
        })
    }

    /// Checks e(P, Q)^q = e(P, π(Q)) on the given pairs; returns the pairs
    /// that fail.
    pub fn galois_mismatches<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a CurvePoint, &'a CurvePoint)>,
    ) -> Result<Vec<(CurvePoint, CurvePoint)>, PairingError> {
        let mut bad = Vec::new();
        for (p, q) in pairs {
            let lhs = self.tate_reduced(p, q)?.frobenius(1);
            let rhs = self.tate_reduced(p, &q.frobenius(1))?;
            if lhs != rhs {
                bad.push((p.clone(), q.clone()));
            }
        }
        Ok(bad)
    }
}

fn multiples(curve: &Curve, p: &CurvePoint, r: u64) -> Vec<CurvePoint> {
    let mut out = Vec::with_capacity(r as usize);
    let mut acc = CurvePoint::Infinity;
    for _ in 0..r {
        out.push(acc.clone());
        acc = curve.add_unchecked(&acc, p);
    }
    out
}

/// Reduced Tate value with identity short-cuts and divisor-shift retry:
/// if f_{r,P}(Q) is undefined, uses f(Q + R)/f(R) for R ∈ E(F_q).
fn reduced_tate_raw(
    curve: &Curve,
    base: &Curve,
    r: u64,
    d: u64,
    p: &CurvePoint,
    q: &CurvePoint,
) -> Result<ExtFieldElement, PairingError> {
    if p.is_infinity() || q.is_infinity() {
        return Ok(curve.params().one());
    }
    match miller(curve, r, p, q) {
        Ok(f) => return Ok(f.pow_u64(d)),
        Err(PairingError::Indeterminate(_)) => {}
        Err(e) => return Err(e),
    }
    for shift in base.enumerate_points()?.iter().skip(1) {
        let rr = curve.lift_point(shift);
        let moved = curve.add_unchecked(q, &rr);
        if moved.is_infinity() {
            continue;
        }
        if let (Ok(num), Ok(den)) = (miller(curve, r, p, &moved), miller(curve, r, p, &rr)) {
            return Ok((&num / &den).pow_u64(d));
        }
    }
    Err(PairingError::ShiftsExhausted)
}

/// Result of a brute-force inversion with the number of pairings evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inversion {
    pub point: CurvePoint,
    pub evaluations: u64,
}

/// A Diffie-Hellman instance Y, [A]Y, [B]Y in G1 with a fixed U ∈ G2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhInstance {
    pub y: CurvePoint,
    pub ay: CurvePoint,
    pub by: CurvePoint,
    pub u: CurvePoint,
}

impl DhInstance {
    /// Instance with U = P2.
    pub fn new(
        ctx: &PairingContext,
        y: CurvePoint,
        ay: CurvePoint,
        by: CurvePoint,
    ) -> Result<Self, PairingError> {
        Self::with_u(ctx, y, ay, by, ctx.p2().clone())
    }

    pub fn with_u(
        ctx: &PairingContext,
        y: CurvePoint,
        ay: CurvePoint,
        by: CurvePoint,
        u: CurvePoint,
    ) -> Result<Self, PairingError> {
        if y.is_infinity() || u.is_infinity() {
            return Err(PairingError::IdentityArgument);
        }
        if ![&y, &ay, &by].iter().all(|p| ctx.g1().contains(p)) || !ctx.g2().contains(&u) {
            return Err(PairingError::NotInGroup);
        }
        Ok(Self { y, ay, by, u })
    }

    /// Y = [y_mult]P1 with the given secret scalars.
    pub fn from_scalars(
        ctx: &PairingContext,
        y_mult: u64,
        a: u64,
        b: u64,
    ) -> Result<Self, PairingError> {
        let e = ctx.curve();
        let y = e.scalar_mul(ctx.p1(), y_mult as i128);
        let ay = e.scalar_mul(&y, a as i128);
        let by = e.scalar_mul(&y, b as i128);
        Self::new(ctx, y, ay, by)
    }
}

/// Intermediate values of [`PairingContext::solve_dh`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhTrace {
    pub z: ExtFieldElement,
    pub v: CurvePoint,
    pub w: ExtFieldElement,
    pub answer: CurvePoint,
    pub pairing_evaluations: u64,
}

/// JSON form of a point: `null` for O, else `[[x coeffs], [y coeffs]]`.
pub fn point_json(p: &CurvePoint) -> Option<[Vec<u64>; 2]> {
    match p {
        CurvePoint::Infinity => None,
        CurvePoint::Affine(x, y) => Some([x.coeffs().to_vec(), y.coeffs().to_vec()]),
    }
}

/// Serializable DH demonstration trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DhTraceJson {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub r: u64,
    pub k: usize,
    pub secret_a: u64,
    pub secret_b: u64,
    pub z: Vec<u64>,
    #[serde(rename = "V")]
    pub v: Option<[Vec<u64>; 2]>,
    pub w: Vec<u64>,
    pub answer: Option<[Vec<u64>; 2]>,
    pub ground_truth: Option<[Vec<u64>; 2]>,
    #[serde(rename = "match")]
    pub matched: bool,
}

impl DhTraceJson {
    pub fn new(
        ctx: &PairingContext,
        inst: &DhInstance,
        trace: &DhTrace,
        secret_a: u64,
        secret_b: u64,
    ) -> Self {
        let r = ctx.r() as u128;
        let truth = ctx
            .curve()
            .scalar_mul(&inst.y, ((secret_a as u128 * secret_b as u128) % r) as i128);
        let rec = ctx.record();
        Self {
            q: rec.q,
            a: rec.a,
            b: rec.b,
            r: rec.r,
            k: rec.k,
            secret_a,
            secret_b,
            z: trace.z.coeffs().to_vec(),
            v: point_json(&trace.v),
            w: trace.w.coeffs().to_vec(),
            answer: point_json(&trace.answer),
            ground_truth: point_json(&truth),
            matched: truth == trace.answer,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::miller_function;

    fn toy_ctx() -> PairingContext {
        PairingContext::new(&CurveRecord {
            q: 5,
            a: 0,
            b: 1,
            n: 6,
            r: 3,
            k: 2,
            d: 8,
        })
        .unwrap()
    }

    #[test]
    fn miller_n1_is_one() {
        let ctx = toy_ctx();
        let q = ctx.g2()[1].clone();
        assert!(miller(ctx.curve(), 1, ctx.p1(), &q).unwrap().is_one());
    }

    #[test]
    fn miller_matches_symbolic_product() {
        let ctx = toy_ctx();
        let e = ctx.curve();
        let pts = e.enumerate_points().unwrap();
        for p in pts.iter().skip(1).step_by(3) {
            for n in 1..=5u64 {
                let sym = miller_function(e, n, p).unwrap();
                let mut compared = 0;
                for qe in pts.iter().skip(1) {
                    let (Ok(a), Ok(b)) = (miller(e, n, p, qe), sym.evaluate(qe)) else {
                        continue;
                    };
                    assert_eq!(a, b, "n = {n}");
                    compared += 1;
                }
                assert!(compared > 0);
            }
        }
    }

    #[test]
    fn miller_shift_convention_agrees_after_final_exponentiation() {
        let ctx = toy_ctx();
        let e = ctx.curve();
        let pts = e.enumerate_points().unwrap();
        for q in &ctx.g2()[1..] {
            let direct = miller(e, 3, ctx.p1(), q).unwrap().pow_u64(ctx.d());
            let mut shifts = 0;
            for r in pts.iter().skip(1) {
                let moved = e.add_unchecked(q, r);
                if moved.is_infinity() {
                    continue;
                }
                let (Ok(num), Ok(den)) =
                    (miller(e, 3, ctx.p1(), &moved), miller(e, 3, ctx.p1(), r))
                else {
                    continue;
                };
                assert_eq!((&num / &den).pow_u64(ctx.d()), direct);
                shifts += 1;
            }
            assert!(shifts > 5);
        }
    }

    #[test]
    fn toy_context_shape() {
        let ctx = toy_ctx();
        assert_eq!(ctx.g1().len(), 3);
        assert!(!ctx.g1().contains(ctx.p2()));
        assert!(ctx.curve().scalar_mul(ctx.p2(), 3).is_infinity());
        assert!(ctx.g_r().pow_u64(3).is_one() && !ctx.g_r().is_one());
    }

    #[test]
    fn bilinearity_table_toy() {
        let ctx = toy_ctx();
        let base = ctx.tate_reduced(ctx.p1(), ctx.p2()).unwrap();
        assert!(!base.is_one());
        for m in 0..3u64 {
            for n in 0..3u64 {
                let v = ctx
                    .tate_reduced(&ctx.g1()[m as usize], &ctx.g2()[n as usize])
                    .unwrap();
                assert_eq!(v, base.pow_u64(m * n));
                assert!(v.pow_u64(3).is_one());
            }
        }
    }

    #[test]
    fn identity_arguments_give_one() {
        let ctx = toy_ctx();
        assert!(ctx
            .tate_reduced(&CurvePoint::Infinity, ctx.p2())
            .unwrap()
            .is_one());
        assert!(ctx
            .tate_reduced(ctx.p1(), &CurvePoint::Infinity)
            .unwrap()
            .is_one());
    }

    #[test]
    fn inversion_tables() {
        let ctx = toy_ctx();
        let one = ctx.ext().one();
        assert!(ctx
            .invert_second(ctx.p1(), &one)
            .unwrap()
            .point
            .is_infinity());
        assert!(ctx
            .invert_first(ctx.p2(), &one)
            .unwrap()
            .point
            .is_infinity());
        let mut seen = Vec::new();
        for v in ctx.g2() {
            let z = ctx.tate_reduced(ctx.p1(), v).unwrap();
            let inv = ctx.invert_second(ctx.p1(), &z).unwrap();
            assert_eq!(&inv.point, v);
            assert!(inv.evaluations <= 3);
            seen.push(inv.point);
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 3);
        for x in ctx.g1() {
            let w = ctx.tate_reduced(x, ctx.p2()).unwrap();
            let inv = ctx.invert_first(ctx.p2(), &w).unwrap();
            assert_eq!(&inv.point, x);
            assert!(inv.evaluations <= 3);
        }
    }

    #[test]
    fn inversion_errors() {
        let ctx = toy_ctx();
        let not_root = ctx
            .ext()
            .elements()
            .find(|x| !x.pow_u64(3).is_one())
            .unwrap();
        assert_eq!(
            ctx.invert_second(ctx.p1(), &not_root),
            Err(PairingError::NotInMuR)
        );
        assert_eq!(
            ctx.invert_first(&CurvePoint::Infinity, &ctx.ext().one()),
            Err(PairingError::IdentityArgument)
        );
    }

    #[test]
    fn dh_exhaustive_toy() {
        let ctx = toy_ctx();
        for a in 0..3u64 {
            for b in 0..3u64 {
                let inst = DhInstance::from_scalars(&ctx, 1, a, b).unwrap();
                let trace = ctx.solve_dh(&inst).unwrap();
                assert_eq!(
                    trace.answer,
                    ctx.curve().scalar_mul(&inst.y, (a * b % 3) as i128)
                );
                if a == 0 {
                    assert!(trace.answer.is_infinity());
                }
                if a == 1 {
                    assert_eq!(trace.answer, inst.by);
                }
                let json = DhTraceJson::new(&ctx, &inst, &trace, a, b);
                assert!(json.matched);
            }
        }
    }

    #[test]
    fn k1_records_have_no_context() {
        let rec = CurveRecord::for_curve(7, 0, 1, Some(3), 1 << 40).unwrap();
        assert_eq!(rec.k, 1);
        assert_eq!(
            PairingContext::new(&rec).unwrap_err(),
            PairingError::NoSecondGroup
        );
    }

    #[test]
    fn cube_of_r_in_extension_order_is_degenerate() {
        // #E(F_25) = 27 with #E(F_5) = 3: E(F_25) = Z/9 x Z/3.
        let rec = CurveRecord::for_curve(5, 4, 2, Some(3), 1 << 40).unwrap();
        assert_eq!((rec.n, rec.k), (3, 2));
        assert_eq!(order_over_extension(5, 3, 2), 27);
        assert_eq!(
            PairingContext::new(&rec).unwrap_err(),
            PairingError::Degenerate
        );

        // Every r-torsion point outside G1 pairs trivially with P1.
        let base = rec.curve();
        let ext = FieldParams::build_extension(5, 2).unwrap();
        let e = base.lift(&ext);
        let g1: Vec<_> = base
            .torsion_subgroup(3)
            .unwrap()
            .iter()
            .map(|p| e.lift_point(p))
            .collect();
        let p1 = g1.iter().find(|p| !p.is_infinity()).unwrap().clone();
        let torsion = e.torsion_subgroup(3).unwrap();
        assert_eq!(torsion.len(), 9);
        for q in torsion.iter().filter(|q| !g1.contains(q)) {
            assert!(reduced_tate_raw(&e, &base, 3, rec.d, &p1, q)
                .unwrap()
                .is_one());
        }
    }

    #[test]
    fn galois_equivariance_holds() {
        let ctx = toy_ctx();
        let pairs: Vec<_> = ctx
            .g1()
            .iter()
            .flat_map(|p| ctx.g2().iter().map(move |q| (p, q)))
            .collect();
        assert!(ctx.galois_mismatches(pairs).unwrap().is_empty());
    }
}
