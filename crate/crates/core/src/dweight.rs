//! The digit weight D(a): the least S = Σ a_i + Σ b_i over representations
//! a ≡ Σ a_i q^i - Σ b_i q^i (mod q^k - 1) with nonnegative digits.
//!
//! D(a) is the unit-cost distance from 0 to a in the residue graph on
//! Z/(q^k - 1) whose edges are ±q^i. A breadth-first search labels every
//! residue at once; parent moves give a witness.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::field::{checked_pow, MAX_GROUP_ORDER};

/// Default bound on the number of residues a search table may hold.
pub const DEFAULT_STATE_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DWeightError {
    #[error("q must be at least 2 and k at least 1 (got q = {q}, k = {k})")]
    BadParams { q: u64, k: usize },
    #[error("q^k - 1 for q = {q}, k = {k} exceeds the cap {cap}")]
    SizeCap { q: u64, k: usize, cap: u64 },
}

/// The frame q, k, M = q^k - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DParams {
    q: u64,
    k: usize,
    modulus: u64,
}

impl DParams {
    pub fn new(q: u64, k: usize) -> Result<Self, DWeightError> {
        Self::with_cap(q, k, DEFAULT_STATE_CAP)
    }

    /// Requires M = q^k - 1 to be at most `state_cap`.
    pub fn with_cap(q: u64, k: usize, state_cap: u64) -> Result<Self, DWeightError> {
        if q < 2 || k == 0 {
            return Err(DWeightError::BadParams { q, k });
        }
        let cap = state_cap.min(MAX_GROUP_ORDER);
        match checked_pow(q, k) {
            Some(qk) if qk - 1 <= cap => Ok(Self {
                q,
                k,
                modulus: qk - 1,
            }),
            _ => Err(DWeightError::SizeCap { q, k, cap }),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// M = q^k - 1
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// q^i mod M for i in 0..k.
    pub fn powers(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k);
        let mut p = 1u64;
        for _ in 0..self.k {
            out.push(p % self.modulus);
            p = p.saturating_mul(self.q);
        }
        out
    }

    pub fn reduce(&self, a: u64) -> u64 {
        a % self.modulus
    }
}

/// Digits (a_i), (b_i) of a minimal representation and their total weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitWitness {
    pub a_digits: Vec<u64>,
    pub b_digits: Vec<u64>,
    pub weight: u64,
}

impl DigitWitness {
    /// Σ a_i q^i - Σ b_i q^i reduced mod M.
    pub fn value(&self, params: &DParams) -> u64 {
        let m = params.modulus() as i128;
        let mut acc = 0i128;
        for (i, p) in params.powers().into_iter().enumerate() {
            acc += (self.a_digits[i] as i128 - self.b_digits[i] as i128) * p as i128;
            acc = acc.rem_euclid(m);
        }
        acc as u64
    }

    /// Never both signs at one position.
    pub fn is_sign_disjoint(&self) -> bool {
        self.a_digits
            .iter()
            .zip(&self.b_digits)
            .all(|(a, b)| a * b == 0)
    }
}

/// Distances from 0 to every residue mod M with a shortest-path tree.
///
/// Moves are tried in the order +q^0, -q^0, +q^1, -q^1, ... so the tree, and
/// therefore every witness, is deterministic.
#[derive(Debug, Clone)]
pub struct DTable {
    params: DParams,
    dist: Vec<u32>,
    parent: Vec<u8>,
}

const UNSEEN: u32 = u32::MAX;

impl DTable {
    pub fn build(params: DParams) -> Self {
        let m = params.modulus();
        let n = m as usize;
        let powers = params.powers();
        let mut dist = vec![UNSEEN; n];
        let mut parent = vec![0u8; n];
        let mut queue = VecDeque::with_capacity(n.min(1 << 20));
        dist[0] = 0;
        queue.push_back(0u64);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            for (i, &p) in powers.iter().enumerate() {
                for (sign, next) in [(0u8, (v + p) % m), (1u8, (v + m - p) % m)] {
                    let slot = &mut dist[next as usize];
                    if *slot == UNSEEN {
                        *slot = dv + 1;
                        parent[next as usize] = (2 * i) as u8 + sign;
                        queue.push_back(next);
                    }
                }
            }
        }
        Self {
            params,
            dist,
            parent,
        }
    }

    pub fn params(&self) -> &DParams {
        &self.params
    }

    /// D(a), with a reduced mod M.
    pub fn weight(&self, a: u64) -> u64 {
        self.dist[self.params.reduce(a) as usize] as u64
    }

    pub fn witness(&self, a: u64) -> DigitWitness {
        let m = self.params.modulus();
        let powers = self.params.powers();
        let k = self.params.k();
        let mut a_digits = vec![0u64; k];
        let mut b_digits = vec![0u64; k];
        let mut v = self.params.reduce(a);
        while v != 0 {
            let mv = self.parent[v as usize] as usize;
            let (i, negative) = (mv / 2, mv % 2 == 1);
            let p = powers[i];
            if negative {
                b_digits[i] += 1;
                v = (v + p) % m;
            } else {
                a_digits[i] += 1;
                v = (v + m - p) % m;
            }
        }
        let weight = a_digits.iter().sum::<u64>() + b_digits.iter().sum::<u64>();
        debug_assert_eq!(weight, self.weight(a));
        DigitWitness {
            a_digits,
            b_digits,
            weight,
        }
    }

    /// Largest D over all residues.
    pub fn max_weight(&self) -> u64 {
        self.dist.iter().copied().max().unwrap_or(0) as u64
    }
}

/// D(a) and a minimal witness. Builds a fresh search table per call; use
/// [`DTable`] to answer many queries against one frame.
pub fn d_weight(a: u64, params: &DParams) -> (u64, DigitWitness) {
    let table = DTable::build(*params);
    let w = table.witness(a);
    (w.weight, w)
}

/// Exhaustive oracle: the least Σ|c_i| over c ∈ Z^k with Σ|c_i| <= weight_cap
/// and Σ c_i q^i ≡ a (mod M), or `None` if every such vector misses.
pub fn d_weight_bruteforce(a: u64, params: &DParams, weight_cap: u64) -> Option<u64> {
    let m = params.modulus() as i128;
    let target = (a as i128).rem_euclid(m);
    let mut place = vec![1i128; params.k()];
    for i in 1..params.k() {
        place[i] = place[i - 1] * params.q() as i128;
    }
    let mut best: Option<u64> = None;
    let mut c = vec![0i128; params.k()];
    enumerate(0, weight_cap as i128, &mut c, &mut |c| {
        let value: i128 = c.iter().zip(&place).map(|(ci, pi)| ci * pi).sum();
        if value.rem_euclid(m) == target {
            let w = c.iter().map(|x| x.unsigned_abs() as u64).sum();
            if best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
    });
    best
}

fn enumerate(pos: usize, budget: i128, c: &mut Vec<i128>, visit: &mut impl FnMut(&[i128])) {
    if pos == c.len() {
        visit(c);
        return;
    }
    for v in -budget..=budget {
        c[pos] = v;
        enumerate(pos + 1, budget - v.abs(), c, visit);
    }
    c[pos] = 0;
}

/// Outcome of checking D((q-1)a) <= 2 D(a) over every residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub q: u64,
    pub k: usize,
    pub residues_checked: u64,
    /// Residue with the largest ratio D((q-1)a) / D(a) among a ≢ 0.
    pub worst_residue: u64,
    pub worst_lhs: u64,
    pub worst_d: u64,
    /// Residues where D((q-1)a) > 2 D(a).
    pub violations: Vec<u64>,
    /// Residues attaining ratio exactly 2.
    pub ratio_two_count: u64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks D((q-1)a mod M) <= 2·D(a) for every residue a.
pub fn check_qminus1_lemma(table: &DTable) -> LemmaReport {
    let params = table.params();
    let m = params.modulus();
    let factor = (params.q() - 1) % m.max(1);
    let mut report = LemmaReport {
        q: params.q(),
        k: params.k(),
        residues_checked: m,
        worst_residue: 0,
        worst_lhs: 0,
        worst_d: 0,
        violations: Vec::new(),
        ratio_two_count: 0,
    };
    for a in 0..m {
        let d = table.weight(a);
        let lhs = table.weight(((a as u128 * factor as u128) % m as u128) as u64);
        if lhs > 2 * d {
            report.violations.push(a);
        }
        if d > 0 {
            if lhs == 2 * d {
                report.ratio_two_count += 1;
            }
            // lhs/d > worst_lhs/worst_d
            if report.worst_d == 0
                || (lhs as u128 * report.worst_d as u128) > (report.worst_lhs as u128 * d as u128)
            {
                report.worst_residue = a;
                report.worst_lhs = lhs;
                report.worst_d = d;
            }
        }
    }
    report
}
