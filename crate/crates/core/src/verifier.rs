//! Weighted power sums of `T_k(b, c)^4` against the closed forms they are
//! congruent to, with residual valuations.
//!
//! Every left-hand side is the sum
//! `sum_{k=0}^{p-1} (2k+1)^w eps^k T_k^e / D^k` for a weight `w`, sign
//! `eps`, power `e` and divisor `D`; the right-hand sides are assembled
//! from Fermat quotients, `S^(2)_{p-1}`, `£_2` and plain ring arithmetic.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modmath::{legendre_symbol, BinomialTable, Modulus, Residue, ResidueRing};
use crate::report::Status;
use crate::sequences::{legendre_poly_value, trinomial_run, CaseTag, SequenceWindow, TrinomialParams};
use crate::special_sums::{fermat_quotient_of, finite_polylog, s2_sum_with_margin, S2_MARGIN};

/// Working exponent for the trinomial windows; the largest stated modulus.
const WINDOW_EXP: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CongruenceTarget {
    #[serde(rename = "THM1_I")]
    Thm1I,
    #[serde(rename = "THM1_II")]
    Thm1II,
    #[serde(rename = "THM1_III")]
    Thm1III,
    #[serde(rename = "THM2_I")]
    Thm2I,
    #[serde(rename = "THM2_II")]
    Thm2II,
    #[serde(rename = "THM2_III")]
    Thm2III,
    #[serde(rename = "THM3_W1")]
    Thm3W1,
    #[serde(rename = "THM3_W3")]
    Thm3W3,
    #[serde(rename = "COR1")]
    Cor1,
    #[serde(rename = "COR2")]
    Cor2,
    #[serde(rename = "ABSTRACT_BC1")]
    AbstractBc1,
    #[serde(rename = "MAOLIU")]
    MaoLiu,
}

/// How a target's free parameters are supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamShape {
    /// Integers `b, c`.
    Pair,
    /// An integer `x` with `b = 2x + 1`, `c = x^2 + x`.
    Legendre,
    /// No free parameter (`b = c = 1`).
    Fixed,
}

impl CongruenceTarget {
    pub const ALL: [CongruenceTarget; 12] = [
        CongruenceTarget::Thm1I,
        CongruenceTarget::Thm1II,
        CongruenceTarget::Thm1III,
        CongruenceTarget::Thm2I,
        CongruenceTarget::Thm2II,
        CongruenceTarget::Thm2III,
        CongruenceTarget::Thm3W1,
        CongruenceTarget::Thm3W3,
        CongruenceTarget::Cor1,
        CongruenceTarget::Cor2,
        CongruenceTarget::AbstractBc1,
        CongruenceTarget::MaoLiu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CongruenceTarget::Thm1I => "THM1_I",
            CongruenceTarget::Thm1II => "THM1_II",
            CongruenceTarget::Thm1III => "THM1_III",
            CongruenceTarget::Thm2I => "THM2_I",
            CongruenceTarget::Thm2II => "THM2_II",
            CongruenceTarget::Thm2III => "THM2_III",
            CongruenceTarget::Thm3W1 => "THM3_W1",
            CongruenceTarget::Thm3W3 => "THM3_W3",
            CongruenceTarget::Cor1 => "COR1",
            CongruenceTarget::Cor2 => "COR2",
            CongruenceTarget::AbstractBc1 => "ABSTRACT_BC1",
            CongruenceTarget::MaoLiu => "MAOLIU",
        }
    }

    /// The modulus exponent the congruence is claimed for.
    pub fn stated_exponent(self) -> u32 {
        match self {
            CongruenceTarget::Thm1I | CongruenceTarget::Thm1II | CongruenceTarget::Thm1III => 4,
            _ => 3,
        }
    }

    pub fn shape(self) -> ParamShape {
        match self {
            CongruenceTarget::Cor1 | CongruenceTarget::Cor2 => ParamShape::Legendre,
            CongruenceTarget::AbstractBc1 => ParamShape::Fixed,
            _ => ParamShape::Pair,
        }
    }

    /// The divisibility case a target is restricted to, if any.
    pub fn required_case(self) -> Option<CaseTag> {
        match self {
            CongruenceTarget::Thm1I | CongruenceTarget::Thm2I => Some(CaseTag::PDividesC),
            CongruenceTarget::Thm1II | CongruenceTarget::Thm2II => Some(CaseTag::PDividesB),
            CongruenceTarget::Thm1III | CongruenceTarget::Thm2III => Some(CaseTag::Generic),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        CongruenceTarget::ALL.iter().position(|&t| t == self).expect("listed")
    }
}

impl fmt::Display for CongruenceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CongruenceTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CongruenceTarget::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown congruence target {s:?}")))
    }
}

/// Free parameters of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetArgs {
    Pair { b: i64, c: i64 },
    Legendre { x: i64 },
    Fixed,
}

impl TargetArgs {
    /// The `(b, c)` the congruence is about.
    pub fn bc(self) -> (i64, i64) {
        match self {
            TargetArgs::Pair { b, c } => (b, c),
            TargetArgs::Legendre { x } => (2 * x + 1, x * x + x),
            TargetArgs::Fixed => (1, 1),
        }
    }

    pub fn x(self) -> Option<i64> {
        match self {
            TargetArgs::Legendre { x } => Some(x),
            _ => None,
        }
    }
}

/// One congruence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRecord {
    pub target: CongruenceTarget,
    pub p: u64,
    pub args: TargetArgs,
    pub lhs: Option<Residue>,
    pub rhs: Option<Residue>,
    pub residual: Option<Residue>,
    /// Valuation of the residual, capped at the stated exponent.
    pub verified_exponent: u32,
    pub status: Status,
    pub note: Option<String>,
}

impl VerificationRecord {
    fn evaluated(target: CongruenceTarget, p: u64, args: TargetArgs, lhs: Residue, rhs: Residue) -> Self {
        let residual = lhs - rhs;
        let verified_exponent = residual.valuation();
        let status = if verified_exponent >= target.stated_exponent() { Status::Pass } else { Status::Fail };
        VerificationRecord {
            target,
            p,
            args,
            lhs: Some(lhs),
            rhs: Some(rhs),
            residual: Some(residual),
            verified_exponent,
            status,
            note: None,
        }
    }

    fn unevaluated(target: CongruenceTarget, p: u64, args: TargetArgs, status: Status, note: String) -> Self {
        VerificationRecord {
            target,
            p,
            args,
            lhs: None,
            rhs: None,
            residual: None,
            verified_exponent: 0,
            status,
            note: Some(note),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// `sum_{k} (2k+1)^weight eps^k T_k^power / divisor^k`, reduced to `modulus`.
fn weighted_sum(
    window: &SequenceWindow,
    modulus: Modulus,
    weight: u32,
    eps: i64,
    power: u32,
    divisor: Residue,
) -> Result<Residue> {
    let divisor = divisor.reduce(modulus.exp())?;
    let step = divisor.inv()?.scale(eps);
    let mut scale = modulus.one();
    let mut acc = modulus.zero();
    for (k, t) in window.values().iter().enumerate() {
        let t = t.reduce(modulus.exp())?;
        let w = modulus.residue(2 * k as i64 + 1).pow(weight as u64);
        acc += w * t.pow(power as u64) * scale;
        scale *= step;
    }
    Ok(acc)
}

/// `sum_{k=0}^{p-1} (2k+1)^(2a+1) eps^k T_k(b,c)^4 / d^(2k)` modulo `p^exp`.
pub fn lhs_power_sum(a: u32, eps: i64, params: &TrinomialParams, p: u64, exp: u32) -> Result<Residue> {
    if a > 1 {
        return Err(Error::OutOfRange { what: "weight a", value: a as i64 });
    }
    if eps != 1 && eps != -1 {
        return Err(Error::OutOfRange { what: "sign eps", value: eps });
    }
    let ring = ResidueRing::new(p, exp)?;
    params.case_for(p)?;
    let window = trinomial_run(params, &ring, p as usize)?;
    let d = ring.elem(params.d());
    weighted_sum(&window, ring.modulus(), 2 * a + 1, eps, 4, d * d)
}

fn check_case(requested: CaseTag, params: &TrinomialParams, p: u64) -> Result<()> {
    let actual = params.case_for(p)?;
    if actual != requested {
        return Err(Error::CaseMismatch { requested: requested.name(), actual: actual.name() });
    }
    Ok(())
}

/// Fermat quotient of an integer at precision `modulus`, computed with the
/// given extra precision.
fn fq(a: i64, modulus: Modulus, margin: u32) -> Result<Residue> {
    let work = modulus.elevated(margin.max(1))?;
    Ok(fermat_quotient_of(work.residue(a), modulus.exp())?.residue)
}

/// Right-hand side of the `(2k+1)` fourth-power congruence (modulo `p^4`).
pub fn rhs_weight_one(case: CaseTag, params: &TrinomialParams, p: u64, exp: u32) -> Result<Residue> {
    rhs_weight_one_with_margin(case, params, p, exp, S2_MARGIN)
}

pub fn rhs_weight_one_with_margin(
    case: CaseTag,
    params: &TrinomialParams,
    p: u64,
    exp: u32,
    margin: u32,
) -> Result<Residue> {
    check_case(case, params, p)?;
    let m = Modulus::new(p, exp)?;
    let (b, c, d) = (params.b(), params.c(), params.d());
    let p1 = m.p_power(1);
    let p2 = m.p_power(2);
    let p3 = m.p_power(3);
    Ok(match case {
        CaseTag::PDividesC => p2 - p2 * m.ratio(2 * c, d)?,
        CaseTag::PDividesB => p1 - p1 * m.ratio(b * b, 4 * c)?,
        CaseTag::Generic => {
            let qb = fq(b, m, margin)?;
            let qd = fq(d, m, margin)?;
            let b2_4c = m.ratio(b * b, 4 * c)?;
            let x = m.ratio(b * b, d)?;
            let s2 = s2_sum_with_margin(x, margin)?.residue;
            let l2 = finite_polylog(2, x)?;
            let diff = qb - qd;
            p1 + p2 * b2_4c * (qb.scale(2) - qd) + p3 * (s2 + m.ratio(d, 4 * c)? * l2 + b2_4c * diff * diff)
        }
    })
}

/// Right-hand side of the `(2k+1)^3` fourth-power congruence (modulo `p^3`).
pub fn rhs_weight_three(case: CaseTag, params: &TrinomialParams, p: u64, exp: u32) -> Result<Residue> {
    rhs_weight_three_with_margin(case, params, p, exp, 1)
}

pub fn rhs_weight_three_with_margin(
    case: CaseTag,
    params: &TrinomialParams,
    p: u64,
    exp: u32,
    margin: u32,
) -> Result<Residue> {
    check_case(case, params, p)?;
    let m = Modulus::new(p, exp)?;
    let (b, c, d) = (params.b(), params.c(), params.d());
    let p1 = m.p_power(1);
    let p2 = m.p_power(2);
    Ok(match case {
        CaseTag::PDividesC => -p2,
        CaseTag::PDividesB => -p1,
        CaseTag::Generic => {
            let qb = fq(b, m, margin)?;
            let qd = fq(d, m, margin)?;
            let d_4c = m.ratio(d, 4 * c)?;
            let inner = m.ratio(b * b, 4 * c)? * (qd - qb.scale(2)) + m.one() + m.ratio(12 * c, 2 * d)?;
            p1 * d_4c - p2 * d_4c * inner
        }
    })
}

/// Right-hand side of the alternating congruences (modulo `p^3`):
/// weight 1 gives `p sum C(2k,k)^2 (-c)^k b^(2k) / d^(2k)`, weight 3 gives
/// `-p sum C(2k,k)^2 (-c)^k (b^(2k)(3+4k) + 8ck b^(2k-2)) / d^(2k)`.
pub fn rhs_alternating(weight: u32, params: &TrinomialParams, p: u64, exp: u32) -> Result<Residue> {
    let m = Modulus::new(p, exp)?;
    let table = BinomialTable::new(m, 2 * p as usize);
    rhs_alternating_with_table(weight, params, &table)
}

fn rhs_alternating_with_table(weight: u32, params: &TrinomialParams, table: &BinomialTable) -> Result<Residue> {
    let m = table.modulus();
    let p = m.p();
    params.case_for(p)?;
    let (b, c, d) = (m.residue(params.b()), m.residue(params.c()), m.residue(params.d()));
    let step = -c * (d * d).inv()?;
    let b2 = b * b;
    let mut geo = m.one(); // ((-c)/d^2)^k
    let mut bpow = m.one(); // b^(2k)
    let mut bpow_prev = m.zero(); // b^(2k-2); the k = 0 term is multiplied by 0
    let mut acc = m.zero();
    for k in 0..p as i64 {
        let cb = table.binom_residue(2 * k, k);
        let f = match weight {
            1 => bpow,
            3 => bpow.scale(3 + 4 * k) + (c * bpow_prev).scale(8 * k),
            _ => return Err(Error::OutOfRange { what: "alternating weight", value: weight as i64 }),
        };
        acc += cb * cb * geo * f;
        geo *= step;
        bpow_prev = bpow;
        bpow *= b2;
    }
    let p1 = m.p_power(1);
    Ok(if weight == 1 { p1 * acc } else { -(p1 * acc) })
}

fn rhs_cor1(x: i64, m: Modulus, margin: u32) -> Result<Residue> {
    let q = fq(2 * x + 1, m, margin)?;
    let coef = m.ratio((2 * x + 1) * (2 * x + 1), 2 * x * (x + 1))?;
    Ok(m.p_power(1) + m.p_power(2) * coef * q)
}

fn rhs_cor2(x: i64, m: Modulus, margin: u32) -> Result<Residue> {
    let q = fq(2 * x + 1, m, margin)?;
    let lead = m.ratio(1, 4 * x * (x + 1))?;
    let coef = m.ratio((2 * x + 1) * (2 * x + 1), 2 * x * (x + 1))?;
    let inner = -(coef * q) + m.residue(6 * (x * x + x) + 1);
    Ok(m.p_power(1) * lead - m.p_power(2) * lead * inner)
}

fn rhs_abstract(m: Modulus, margin: u32) -> Result<Residue> {
    let q3 = fq(3, m, margin)?;
    let p1 = m.p_power(1);
    let p2 = m.p_power(2);
    Ok(-(p1 * m.ratio(3, 4)?) + p2 * m.ratio(3, 4)? * (q3 * m.ratio(1, 4)? - m.one()))
}

fn rhs_mao_liu(params: &TrinomialParams, m: Modulus) -> Result<Residue> {
    let p = m.p();
    let (c, d) = (params.c(), params.d());
    let p2 = m.p_power(2);
    if c.rem_euclid(p as i64) == 0 {
        return Ok(-p2);
    }
    let leg = m.residue(legendre_symbol(d, p) as i64);
    let tail = m.ratio(7 * d, 6 * c)? + m.ratio(d * d, 3 * c * c)?;
    Ok(-p2 - p2 * m.ratio(2, 3)? * leg + p2 * tail * (leg - m.one()))
}

/// Shared per-prime state: the ring for trinomial windows, the binomial
/// table for the alternating sums, and the precision margin.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    ring: ResidueRing,
    binomials: BinomialTable,
    margin: u32,
}

impl PrimeContext {
    pub fn new(p: u64, margin: u32) -> Result<Self> {
        if margin < S2_MARGIN {
            return Err(Error::OutOfRange { what: "modulus margin", value: margin as i64 });
        }
        let ring = ResidueRing::new(p, WINDOW_EXP)?;
        let binomials = BinomialTable::new(Modulus::new(p, 3)?, 2 * p as usize);
        Ok(PrimeContext { ring, binomials, margin })
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn window(&self, params: &TrinomialParams) -> Result<SequenceWindow> {
        trinomial_run(params, &self.ring, self.p() as usize)
    }

    /// Check one target, reusing a precomputed `T_k` window when given.
    pub fn check(&self, target: CongruenceTarget, args: TargetArgs, window: Option<&SequenceWindow>) -> VerificationRecord {
        let p = self.p();
        let mismatch = !matches!(
            (target.shape(), args),
            (ParamShape::Pair, TargetArgs::Pair { .. })
                | (ParamShape::Legendre, TargetArgs::Legendre { .. })
                | (ParamShape::Fixed, TargetArgs::Fixed)
        );
        if mismatch {
            return VerificationRecord::unevaluated(
                target,
                p,
                args,
                Status::Error,
                format!("argument shape {args:?} does not fit {target}"),
            );
        }
        if let Some(reason) = self.side_condition_failure(target, args) {
            return VerificationRecord::unevaluated(target, p, args, Status::Skipped, reason);
        }
        match self.evaluate(target, args, window) {
            Ok((lhs, rhs)) => VerificationRecord::evaluated(target, p, args, lhs, rhs),
            Err(e) => VerificationRecord::unevaluated(target, p, args, Status::Error, e.to_string()),
        }
    }

    fn side_condition_failure(&self, target: CongruenceTarget, args: TargetArgs) -> Option<String> {
        let p = self.p();
        let pi = p as i64;
        if let TargetArgs::Legendre { x } = args {
            if (x % pi) * ((x + 1) % pi) % pi * ((2 * x + 1) % pi) % pi == 0 {
                return Some(format!("p divides x(x+1)(2x+1) for x = {x}"));
            }
        }
        let (b, c) = args.bc();
        let params = match TrinomialParams::new(b, c) {
            Ok(params) => params,
            Err(e) => return Some(e.to_string()),
        };
        let case = match params.case_for(p) {
            Ok(case) => case,
            Err(e) => return Some(e.to_string()),
        };
        match target.required_case() {
            Some(required) if required != case => Some(format!("case {case} applies, not {required}")),
            _ => None,
        }
    }

    fn evaluate(
        &self,
        target: CongruenceTarget,
        args: TargetArgs,
        window: Option<&SequenceWindow>,
    ) -> Result<(Residue, Residue)> {
        let p = self.p();
        let m = Modulus::new(p, target.stated_exponent())?;
        let (b, c) = args.bc();
        let params = TrinomialParams::new(b, c)?;
        let d = m.residue(params.d());
        let owned;
        let window = match window {
            Some(w) => w,
            None => {
                owned = self.window(&params)?;
                &owned
            }
        };
        let margin = self.margin;
        let case = params.case_for(p)?;
        use CongruenceTarget::*;
        Ok(match target {
            Thm1I | Thm1II | Thm1III => (
                weighted_sum(window, m, 1, 1, 4, d * d)?,
                rhs_weight_one_with_margin(case, &params, p, m.exp(), margin)?,
            ),
            Thm2I | Thm2II | Thm2III => (
                weighted_sum(window, m, 3, 1, 4, d * d)?,
                rhs_weight_three_with_margin(case, &params, p, m.exp(), margin)?,
            ),
            Thm3W1 => (weighted_sum(window, m, 1, -1, 4, d * d)?, rhs_alternating_with_table(1, &params, &self.binomials)?),
            Thm3W3 => (weighted_sum(window, m, 3, -1, 4, d * d)?, rhs_alternating_with_table(3, &params, &self.binomials)?),
            Cor1 | Cor2 => {
                let x = args.x().expect("legendre shape");
                let weight = if target == Cor1 { 1 } else { 3 };
                let mut lhs = m.zero();
                for k in 0..p {
                    let pk = m.residue_big(&legendre_poly_value(k, x));
                    lhs += m.residue(2 * k as i64 + 1).pow(weight) * pk.pow(4);
                }
                let rhs = if target == Cor1 { rhs_cor1(x, m, margin)? } else { rhs_cor2(x, m, margin)? };
                (lhs, rhs)
            }
            AbstractBc1 => (weighted_sum(window, m, 3, 1, 4, d * d)?, rhs_abstract(m, margin)?),
            MaoLiu => (weighted_sum(window, m, 3, 1, 2, d)?, rhs_mao_liu(&params, m)?),
        })
    }

    /// Named ingredient values for the `show` command.
    pub fn ingredients(&self, target: CongruenceTarget, args: TargetArgs) -> Result<Vec<(String, String)>> {
        let p = self.p();
        let m = Modulus::new(p, target.stated_exponent())?;
        let (b, c) = args.bc();
        let params = TrinomialParams::new(b, c)?;
        let mut out = vec![
            ("modulus".to_string(), m.value().to_string()),
            ("d".to_string(), params.d().to_string()),
            ("case".to_string(), params.case_for(p)?.to_string()),
            ("legendre(d/p)".to_string(), legendre_symbol(params.d(), p).to_string()),
        ];
        let pi = p as i64;
        if b.rem_euclid(pi) != 0 {
            out.push(("q_p(b)".to_string(), fq(b, m, self.margin)?.to_string()));
        }
        out.push(("q_p(d)".to_string(), fq(params.d(), m, self.margin)?.to_string()));
        if matches!(target, CongruenceTarget::Thm1III) {
            let x = m.ratio(b * b, params.d())?;
            out.push(("x = b^2/d".to_string(), x.to_string()));
            out.push(("S2(x)".to_string(), s2_sum_with_margin(x, self.margin)?.residue.to_string()));
            out.push(("L2(x)".to_string(), finite_polylog(2, x)?.to_string()));
        }
        let window = self.window(&params)?;
        let shown: Vec<String> = window.values().iter().take(8).map(|r| r.to_string()).collect();
        out.push(("T_0..T_7 mod p^4".to_string(), shown.join(",")));
        Ok(out)
    }
}

/// Check a single `(target, p, args)` point with default precision.
pub fn check_congruence(target: CongruenceTarget, p: u64, args: TargetArgs) -> Result<VerificationRecord> {
    let ctx = PrimeContext::new(p, S2_MARGIN)?;
    Ok(ctx.check(target, args, None))
}

/// Parameters of a congruence sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub targets: Vec<CongruenceTarget>,
    pub primes: Vec<u64>,
    pub b_range: (i64, i64),
    pub c_range: (i64, i64),
    pub x_range: (i64, i64),
    pub margin: u32,
}

enum WorkItem {
    Pair { ctx: usize, b: i64, c: i64 },
    Legendre { ctx: usize, x: i64 },
    Fixed { ctx: usize },
}

/// Evaluate every admissible point of the sweep. Records come back sorted
/// by `(target, p, b, c, x)` regardless of scheduling.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<VerificationRecord>> {
    let contexts: Vec<PrimeContext> = spec
        .primes
        .par_iter()
        .map(|&p| PrimeContext::new(p, spec.margin))
        .collect::<Result<_>>()?;
    let has = |shape| spec.targets.iter().any(|t| t.shape() == shape);
    let mut items = Vec::new();
    for ctx in 0..contexts.len() {
        if has(ParamShape::Pair) {
            for b in spec.b_range.0..=spec.b_range.1 {
                for c in spec.c_range.0..=spec.c_range.1 {
                    items.push(WorkItem::Pair { ctx, b, c });
                }
            }
        }
        if has(ParamShape::Legendre) {
            for x in spec.x_range.0..=spec.x_range.1 {
                items.push(WorkItem::Legendre { ctx, x });
            }
        }
        if has(ParamShape::Fixed) {
            items.push(WorkItem::Fixed { ctx });
        }
    }

    let targets_of = |shape: ParamShape| -> Vec<CongruenceTarget> {
        spec.targets.iter().copied().filter(|t| t.shape() == shape).collect()
    };
    let pair_targets = targets_of(ParamShape::Pair);
    let legendre_targets = targets_of(ParamShape::Legendre);
    let fixed_targets = targets_of(ParamShape::Fixed);

    let mut records: Vec<VerificationRecord> = items
        .par_iter()
        .flat_map_iter(|item| {
            let (ctx, args, targets) = match *item {
                WorkItem::Pair { ctx, b, c } => (&contexts[ctx], TargetArgs::Pair { b, c }, &pair_targets),
                WorkItem::Legendre { ctx, x } => (&contexts[ctx], TargetArgs::Legendre { x }, &legendre_targets),
                WorkItem::Fixed { ctx } => (&contexts[ctx], TargetArgs::Fixed, &fixed_targets),
            };
            // One window per (p, b, c), shared by all targets of the item.
            let (b, c) = args.bc();
            let window = TrinomialParams::new(b, c)
                .ok()
                .filter(|params| params.case_for(ctx.p()).is_ok())
                .and_then(|params| ctx.window(&params).ok());
            targets
                .iter()
                .map(|&t| ctx.check(t, args, window.as_ref()))
                .collect::<Vec<_>>()
        })
        .collect();
    records.sort_by_key(|r| {
        let (b, c) = r.args.bc();
        (r.target.index(), r.p, b, c, r.args.x())
    });
    Ok(records)
}
