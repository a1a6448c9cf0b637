//! Frobenius descent of f^d on G1 and the degree/weight lower bounds
//! d·deg(f) >= r/6, D(d)·deg(f) >= r/6 and D(d_1)·deg(f) >= r/12.
//!
//! All bound comparisons are cross-multiplied integers.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurvePoint, CurveRecord};
use crate::dweight::{DParams, DTable, DWeightError, DigitWitness};
use crate::funcfield::{func_inv, func_pow, func_product, twist, TrackedFunction};
use crate::pairing::PairingContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    DWeight(#[from] DWeightError),
    #[error("digit frame (q = {dq}, k = {dk}) does not match the function's field F_{fq}^{fk}")]
    FrameMismatch {
        dq: u64,
        dk: usize,
        fq: u64,
        fk: usize,
    },
    #[error("every point of G1 lies in the support of f; choose another function")]
    Inconclusive,
    #[error("f^d is not a homomorphism on G1: {0}")]
    NotHomomorphism(String),
}

/// F with deg(F) <= deg(f)·D(d) and F = f^d on G1.
#[derive(Debug, Clone)]
pub struct DescentResult {
    pub function: TrackedFunction,
    pub d: u64,
    pub witness: DigitWitness,
    /// deg(f)·D(d)
    pub claimed_bound: u64,
    /// deg(F) after divisor cancellation.
    pub actual_deg: u64,
}

impl DescentResult {
    /// True when cancellation between twisted copies dropped the degree
    /// strictly below deg(f)·D(d).
    pub fn strict_drop(&self) -> bool {
        self.actual_deg < self.claimed_bound
    }
}

/// Builds F = Π twist(f, i)^{a_i} · Π twist(1/f, i)^{b_i} from a minimal
/// witness of D(d). On F_q-rational points twist(f, i) agrees with f^{q^i},
/// so F agrees with f^d there.
pub fn frobenius_descent(
    f: &TrackedFunction,
    d: u64,
    table: &DTable,
) -> Result<DescentResult, BoundsError> {
    let params = f.curve().params();
    let frame = table.params();
    if frame.q() != params.q() || frame.k() != params.k() {
        return Err(BoundsError::FrameMismatch {
            dq: frame.q(),
            dk: frame.k(),
            fq: params.q(),
            fk: params.k(),
        });
    }
    let witness = table.witness(d);
    let inv = func_inv(f);
    let mut factors = Vec::new();
    for i in 0..frame.k() {
        if witness.a_digits[i] > 0 {
            factors.push(func_pow(&twist(f, i as u64), witness.a_digits[i] as i64));
        }
        if witness.b_digits[i] > 0 {
            factors.push(func_pow(&twist(&inv, i as u64), witness.b_digits[i] as i64));
        }
    }
    let function = func_product(f.curve(), &factors);
    let claimed_bound = f.degree() * witness.weight;
    let actual_deg = function.degree();
    Ok(DescentResult {
        function,
        d,
        witness,
        claimed_bound,
        actual_deg,
    })
}

/// Same as [`frobenius_descent`], building the digit table for the function's field.
pub fn frobenius_descent_for(f: &TrackedFunction, d: u64) -> Result<DescentResult, BoundsError> {
    let params = f.curve().params();
    let table = DTable::build(DParams::new(params.q(), params.k())?);
    frobenius_descent(f, d, &table)
}

/// Outcome of comparing F with f^d pointwise on G1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentReport {
    pub checked: usize,
    /// Points where f is zero, a pole or indeterminate.
    pub skipped: Vec<CurvePoint>,
    pub mismatches: Vec<CurvePoint>,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks F(P) = f(P)^d for every P in `g1` where f(P) is defined and nonzero.
pub fn verify_descent(
    f: &TrackedFunction,
    result: &DescentResult,
    g1: &[CurvePoint],
) -> Result<DescentReport, BoundsError> {
    let unit_order = f.curve().params().unit_order();
    let mut report = DescentReport {
        checked: 0,
        skipped: Vec::new(),
        mismatches: Vec::new(),
    };
    for p in g1 {
        let fp = match f.evaluate(p) {
            Ok(v) if !v.is_zero() => v,
            _ => {
                report.skipped.push(p.clone());
                continue;
            }
        };
        report.checked += 1;
        let expected = fp.pow_u64(result.d % unit_order);
        match result.function.evaluate(p) {
            Ok(v) if v == expected => {}
            _ => report.mismatches.push(p.clone()),
        }
    }
    if report.checked == 0 {
        return Err(BoundsError::Inconclusive);
    }
    Ok(report)
}

/// Exhaustive check that P ↦ f(P)^d is a non-constant homomorphism on G1,
/// over all pairs where f is defined and nonzero at P, Q and P + Q.
pub fn check_homomorphism(
    ctx: &PairingContext,
    f: &TrackedFunction,
    d: u64,
) -> Result<(), BoundsError> {
    let e = ctx.curve();
    let unit_order = e.params().unit_order();
    let value = |p: &CurvePoint| {
        f.evaluate(p)
            .ok()
            .filter(|v| !v.is_zero())
            .map(|v| v.pow_u64(d % unit_order))
    };
    let values: Vec<_> = ctx.g1().iter().map(value).collect();
    if values.iter().flatten().all(|v| v.is_one()) {
        return Err(BoundsError::NotHomomorphism(
            "f^d is constant 1 on G1".into(),
        ));
    }
    let r = ctx.g1().len();
    for i in 0..r {
        for j in 0..r {
            let (Some(a), Some(b), Some(c)) = (&values[i], &values[j], &values[(i + j) % r]) else {
                continue;
            };
            if c != &(a * b) {
                return Err(BoundsError::NotHomomorphism(format!(
                    "fails at [{i}]P1, [{j}]P1"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Prop2,
    Prop3,
    Corollary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    ReducedTate,
    Custom,
}

/// All three bounds for one (record, deg f, d).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub record: CurveRecord,
    pub family: Family,
    pub deg_f: u64,
    pub d: u64,
    pub d_weight: u64,
    /// d = c·s + d1 with s = (q^k - 1)/(q - 1) and d1 = d mod s.
    pub c: u64,
    pub d1: u64,
    pub d1_weight: u64,
    pub prop2_lhs: u128,
    pub prop3_lhs: u128,
    pub corollary_lhs: u128,
    pub prop2_pass: bool,
    pub prop3_pass: bool,
    /// `None` for k = 1, where the corollary does not apply.
    pub corollary_pass: Option<bool>,
    /// D((q-1)·d1 mod M) <= 2·D(d1)
    pub lemma_holds: bool,
}

impl BoundReport {
    pub fn verdict(&self, mode: BoundMode) -> BoundVerdict {
        let r = self.record.r as u128;
        match mode {
            BoundMode::Prop2 => BoundVerdict {
                mode,
                lhs: self.prop2_lhs,
                denominator: 6,
                pass: Some(self.prop2_pass),
            },
            BoundMode::Prop3 => BoundVerdict {
                mode,
                lhs: self.prop3_lhs,
                denominator: 6,
                pass: Some(self.prop3_pass),
            },
            BoundMode::Corollary => BoundVerdict {
                mode,
                lhs: self.corollary_lhs,
                denominator: 12,
                pass: self.corollary_pass.map(|_| 12 * self.corollary_lhs >= r),
            },
        }
    }

    /// No violated bound among those that apply.
    pub fn all_pass(&self) -> bool {
        self.prop2_pass
            && self.prop3_pass
            && self.corollary_pass.unwrap_or(true)
            && self.lemma_holds
    }

    pub fn csv_row(&self) -> BoundCsvRow {
        BoundCsvRow {
            q: self.record.q,
            a: self.record.a,
            b: self.record.b,
            r: self.record.r,
            k: self.record.k,
            d: self.d,
            deg_f: self.deg_f,
            d_d: self.d_weight,
            c: self.c,
            d1: self.d1,
            d_d1: self.d1_weight,
            prop2_lhs: self.prop2_lhs,
            prop3_lhs: self.prop3_lhs,
            corollary_lhs: self.corollary_lhs,
            prop2_pass: self.prop2_pass,
            prop3_pass: self.prop3_pass,
            corollary_pass: match self.corollary_pass {
                Some(true) => "true",
                Some(false) => "false",
                None => "na",
            },
        }
    }
}

/// One bound: pass iff denominator·lhs >= r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundVerdict {
    pub mode: BoundMode,
    pub lhs: u128,
    pub denominator: u8,
    pub pass: Option<bool>,
}

/// CSV layout of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCsvRow {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub r: u64,
    pub k: usize,
    pub d: u64,
    pub deg_f: u64,
    #[serde(rename = "D_d")]
    pub d_d: u64,
    pub c: u64,
    pub d1: u64,
    #[serde(rename = "D_d1")]
    pub d_d1: u64,
    pub prop2_lhs: u128,
    pub prop3_lhs: u128,
    pub corollary_lhs: u128,
    pub prop2_pass: bool,
    pub prop3_pass: bool,
    pub corollary_pass: &'static str,
}

/// Computes every bound for a record, a function degree and an exponent.
/// `table` must be the digit table of (q, k) of the record.
pub fn bound_report(
    record: &CurveRecord,
    family: Family,
    deg_f: u64,
    d: u64,
    table: &DTable,
) -> BoundReport {
    let frame = table.params();
    assert_eq!(
        (frame.q(), frame.k()),
        (record.q, record.k),
        "digit table for the wrong frame"
    );
    let m = frame.modulus();
    let r = record.r as u128;
    let s = m / (record.q - 1);
    let (c, d1) = (d / s, d % s);
    let d_weight = table.weight(d);
    let d1_weight = table.weight(d1);
    let lemma_lhs = table.weight(((d1 as u128 * (record.q - 1) as u128) % m as u128) as u64);
    let prop2_lhs = d as u128 * deg_f as u128;
    let prop3_lhs = d_weight as u128 * deg_f as u128;
    let corollary_lhs = d1_weight as u128 * deg_f as u128;
    BoundReport {
        record: record.clone(),
        family,
        deg_f,
        d,
        d_weight,
        c,
        d1,
        d1_weight,
        prop2_lhs,
        prop3_lhs,
        corollary_lhs,
        prop2_pass: 6 * prop2_lhs >= r,
        prop3_pass: 6 * prop3_lhs >= r,
        corollary_pass: (record.k > 1).then_some(12 * corollary_lhs >= r),
        lemma_holds: lemma_lhs <= 2 * d1_weight,
    }
}

/// One bound for (deg f, d) on a record.
pub fn check_bounds(
    record: &CurveRecord,
    deg_f: u64,
    d: u64,
    mode: BoundMode,
    table: &DTable,
) -> BoundVerdict {
    bound_report(record, Family::Custom, deg_f, d, table).verdict(mode)
}

/// Report for the reduced Tate family: f = f_{r,P} of degree r, d = (q^k - 1)/r.
pub fn reduced_tate_report(record: &CurveRecord, table: &DTable) -> BoundReport {
    bound_report(record, Family::ReducedTate, record.r, record.d, table)
}

/// Report for a user-supplied (f, d) after the homomorphism precondition
/// has been checked exhaustively on G1.
pub fn custom_report(
    ctx: &PairingContext,
    f: &TrackedFunction,
    d: u64,
    table: &DTable,
) -> Result<BoundReport, BoundsError> {
    check_homomorphism(ctx, f, d)?;
    Ok(bound_report(
        ctx.record(),
        Family::Custom,
        f.degree(),
        d,
        table,
    ))
}

/// Reports over a corpus plus the smallest normalized ratios seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundScan {
    pub reports: Vec<BoundReport>,
    /// (6·prop3_lhs, r) minimizing 6·prop3_lhs / r.
    pub min_prop3_ratio: Option<(u128, u64)>,
    /// (12·corollary_lhs, r) minimizing 12·corollary_lhs / r, over k > 1.
    pub min_corollary_ratio: Option<(u128, u64)>,
}

impl BoundScan {
    pub fn violations(&self) -> impl Iterator<Item = &BoundReport> {
        self.reports.iter().filter(|r| !r.all_pass())
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }
}

fn keep_min(slot: &mut Option<(u128, u64)>, cand: (u128, u64)) {
    match slot {
        Some((n, d)) if cand.0 * *d as u128 >= *n * cand.1 as u128 => {}
        _ => *slot = Some(cand),
    }
}

/// Reduced-Tate bound reports for every record, sharing one digit table per
/// (q, k). Records whose M exceeds `state_cap` are an error.
pub fn scan_bounds(corpus: &[CurveRecord], state_cap: u64) -> Result<BoundScan, BoundsError> {
    let mut tables: BTreeMap<(u64, usize), DTable> = BTreeMap::new();
    let mut scan = BoundScan {
        reports: Vec::with_capacity(corpus.len()),
        min_prop3_ratio: None,
        min_corollary_ratio: None,
    };
    for rec in corpus {
        let key = (rec.q, rec.k);
        if let std::collections::btree_map::Entry::Vacant(e) = tables.entry(key) {
            e.insert(DTable::build(DParams::with_cap(rec.q, rec.k, state_cap)?));
        }
        let report = reduced_tate_report(rec, &tables[&key]);
        keep_min(&mut scan.min_prop3_ratio, (6 * report.prop3_lhs, rec.r));
        if rec.k > 1 {
            keep_min(
                &mut scan.min_corollary_ratio,
                (12 * report.corollary_lhs, rec.r),
            );
        }
        scan.reports.push(report);
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::scan_corpus;
    use crate::funcfield::{make_const, make_coord, make_line, miller_function, Coord};

    fn toy_record() -> CurveRecord {
        CurveRecord {
            q: 5,
            a: 0,
            b: 1,
            n: 6,
            r: 3,
            k: 2,
            d: 8,
        }
    }

    fn toy_table() -> DTable {
        DTable::build(DParams::new(5, 2).unwrap())
    }

    #[test]
    fn descent_d1_and_dq() {
        let ctx = PairingContext::new(&toy_record()).unwrap();
        let l = make_line(ctx.curve(), &ctx.g2()[1], &ctx.g2()[2]).unwrap();
        let table = toy_table();
        let one = frobenius_descent(&l, 1, &table).unwrap();
        assert_eq!(one.function.expr(), l.expr());
        assert_eq!(one.actual_deg, l.degree());
        let q = frobenius_descent(&l, 5, &table).unwrap();
        assert_eq!(q.function.expr(), twist(&l, 1).expr());
        assert_eq!(q.actual_deg, l.degree());
        assert_eq!(q.witness.weight, 1);
    }

    #[test]
    fn descent_of_x_on_toy() {
        let ctx = PairingContext::new(&toy_record()).unwrap();
        let x = make_coord(ctx.curve(), Coord::X);
        let table = toy_table();
        let res = frobenius_descent(&x, 8, &table).unwrap();
        // D(8) over M = 24 by brute force
        let d8 = crate::dweight::d_weight_bruteforce(8, table.params(), 8).unwrap();
        assert_eq!(res.witness.weight, d8);
        assert!(res.actual_deg <= 2 * d8);
        // G1 = {O, (0, ±1)} lies entirely in the support of x
        assert_eq!(
            verify_descent(&x, &res, ctx.g1()),
            Err(BoundsError::Inconclusive)
        );
        // F = f^d holds on every F_q-rational point, where Frobenius is trivial
        let rational: Vec<_> = ctx
            .base_curve()
            .enumerate_points()
            .unwrap()
            .iter()
            .map(|p| ctx.curve().lift_point(p))
            .collect();
        let report = verify_descent(&x, &res, &rational).unwrap();
        assert!(report.passed());
        assert_eq!(report.checked, 3);
    }

    #[test]
    fn constant_function_descends_to_power() {
        let ctx = PairingContext::new(&toy_record()).unwrap();
        let c = ctx.ext().element(&[2, 3]);
        let f = make_const(ctx.curve(), c.clone());
        let table = toy_table();
        for d in [1u64, 7, 8, 13, 24] {
            let res = frobenius_descent(&f, d, &table).unwrap();
            for p in ctx.g1() {
                assert_eq!(res.function.evaluate(p).unwrap(), c.pow_u64(d % 24));
            }
            assert!(verify_descent(&f, &res, ctx.g1()).unwrap().passed());
        }
    }

    #[test]
    fn frame_mismatch_rejected() {
        let ctx = PairingContext::new(&toy_record()).unwrap();
        let x = make_coord(ctx.curve(), Coord::X);
        let wrong = DTable::build(DParams::new(5, 3).unwrap());
        assert!(matches!(
            frobenius_descent(&x, 3, &wrong),
            Err(BoundsError::FrameMismatch { .. })
        ));
    }

    #[test]
    fn inconclusive_when_all_in_support() {
        let ctx = PairingContext::new(&toy_record()).unwrap();
        let x = make_coord(ctx.curve(), Coord::X);
        let res = frobenius_descent(&x, 3, &toy_table()).unwrap();
        assert_eq!(
            verify_descent(&x, &res, &[CurvePoint::Infinity]),
            Err(BoundsError::Inconclusive)
        );
    }

    #[test]
    fn toy_corollary_decomposition() {
        let table = toy_table();
        let rep = reduced_tate_report(&toy_record(), &table);
        assert_eq!((rep.c, rep.d1), (1, 2));
        assert_eq!(rep.d1_weight, table.weight(2));
        assert_eq!(rep.corollary_lhs, table.weight(2) as u128 * 3);
        assert_eq!(rep.corollary_pass, Some(12 * rep.corollary_lhs >= 3));
        assert!(rep.all_pass());
        let v = check_bounds(&toy_record(), 3, 8, BoundMode::Prop3, &table);
        assert_eq!(v.lhs, table.weight(8) as u128 * 3);
        assert_eq!(v.denominator, 6);
    }

    #[test]
    fn thresholds_are_sixth_and_twelfth() {
        // r = 13, lhs = 2: 6·2 = 12 < 13 fails, 12·2 >= 13 passes
        let rec = CurveRecord {
            q: 5,
            a: 0,
            b: 1,
            n: 6,
            r: 13,
            k: 2,
            d: 8,
        };
        let table = toy_table();
        let mut rep = bound_report(&rec, Family::Custom, 1, 2, &table);
        assert!(!rep.prop2_pass);
        rep.corollary_lhs = 2;
        assert_eq!(rep.verdict(BoundMode::Corollary).pass, Some(true));
        rep.corollary_lhs = 1;
        assert_eq!(rep.verdict(BoundMode::Corollary).pass, Some(false));
    }

    #[test]
    fn miller_function_degree_is_r() {
        let ctx = PairingContext::new(&toy_record()).unwrap();
        let f = miller_function(ctx.curve(), ctx.r(), ctx.p1()).unwrap();
        assert_eq!(f.degree(), ctx.r());
    }

    #[test]
    fn homomorphism_precondition() {
        let ctx = PairingContext::new(&toy_record()).unwrap();
        let table = toy_table();
        // x^d on F_q-rational points is killed by d = (q^k - 1)/r
        let x = make_coord(ctx.curve(), Coord::X);
        assert!(matches!(
            custom_report(&ctx, &x, 8, &table),
            Err(BoundsError::NotHomomorphism(_))
        ));
        // f_{r,P2} evaluated on G1 is the pairing with swapped arguments
        let f = miller_function(ctx.curve(), ctx.r(), ctx.p2()).unwrap();
        let rep = custom_report(&ctx, &f, 8, &table).unwrap();
        assert_eq!(rep.deg_f, 3);
        assert!(rep.all_pass());
    }

    #[test]
    fn scan_small_corpus() {
        let corpus = scan_corpus(&[5, 7, 11], 3, 3, 1 << 40);
        let scan = scan_bounds(&corpus, 1 << 24).unwrap();
        assert_eq!(scan.reports.len(), corpus.len());
        assert!(scan.passed());
        let again = scan_bounds(&corpus, 1 << 24).unwrap();
        assert_eq!(scan, again);
        let empty = scan_bounds(&[], 1 << 24).unwrap();
        assert!(empty.reports.is_empty() && empty.passed());
    }
}
