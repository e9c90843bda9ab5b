//! Closed-form quantities around shatter-function growth.
//!
//! Purely rational quantities (binomial sums, the linear bounds on `t_k(m)`,
//! the exponents `s_d` and increments `t_d`) are exact. Anything involving
//! `log₂ s`, square roots or real powers is returned as an [`Interval`]
//! whose endpoints are rounded outward.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::bits::binomial;
use crate::error::{invalid, Error, Result};
use crate::Rational;

/// `g_k(n) = Σ_{i ≤ k} C(n, i)`; equals `2^n` once `k ≥ n`.
pub fn g_k(n: u64, k: u64) -> u128 {
    (0..=k.min(n)).map(|i| binomial(n, i)).fold(0u128, |a, b| a.saturating_add(b))
}

/// `2^{k+1} - k - 1`, the slope of both bounds on `t_k(m)`.
pub fn tk_coefficient(k: u32) -> Result<i128> {
    if k >= 120 {
        return Err(invalid(format!("k = {k} overflows 128-bit arithmetic")));
    }
    Ok((1i128 << (k + 1)) - k as i128 - 1)
}

/// `(lower, upper)` with `lower < t_k(m) ≤ upper`:
/// `((2^{k+1}-k-1)m - 2^{4k}, (2^{k+1}-k-1)m + 2^{k+1}-k-2)`.
pub fn tk_bounds(m: u64, k: u32) -> Result<(i128, i128)> {
    if m < 1 || k < 1 {
        return Err(invalid("t_k(m) bounds need m, k ≥ 1"));
    }
    if 4 * k >= 126 {
        return Err(invalid(format!("k = {k} overflows 128-bit arithmetic")));
    }
    let c = tk_coefficient(k)?;
    let cm = c.checked_mul(m as i128).ok_or_else(|| invalid("m too large"))?;
    Ok((cm - (1i128 << (4 * k)), cm + c - 1))
}

/// `(c + ε)m + c - 1 + ε` with `c = 2^{k+1}-k-1`: the upper bound obtained
/// from the random construction at `s = c + ε`, before letting `ε → 0`.
pub fn tk_upper_with_epsilon(m: u64, k: u32, eps: Rational) -> Result<Rational> {
    let c = tk_coefficient(k)? as i64;
    let s = Rational::from_integer(c) + eps;
    Ok(s * Rational::from_integer(m as i64) + Rational::from_integer(c - 1) + eps)
}

/// Previously known lower bound `2^k m - (k-1) 2^k - 1`.
pub fn cheong_lower(m: u64, k: u32) -> Result<i128> {
    if m < 1 || k < 1 || k >= 100 {
        return Err(invalid("need m ≥ 1 and 1 ≤ k < 100"));
    }
    let p = 1i128 << k;
    Ok(p * m as i128 - (k as i128 - 1) * p - 1)
}

/// Smallest `m ≥ 1` at which the exclusive lower bound of [`tk_bounds`]
/// exceeds [`cheong_lower`]; `None` when it never does (k = 1).
pub fn cheong_crossover(k: u32) -> Result<Option<u64>> {
    if !(1..=30).contains(&k) {
        return Err(invalid("crossover is computed for 1 ≤ k ≤ 30"));
    }
    // (c - 2^k) m > 2^{4k} - (k-1) 2^k - 1
    let slope = tk_coefficient(k)? - (1i128 << k);
    let gap = (1i128 << (4 * k)) - (k as i128 - 1) * (1i128 << k) - 1;
    if slope <= 0 {
        return Ok(None);
    }
    let m = if gap < 0 { 1 } else { Integer::div_floor(&gap, &slope) + 1 };
    Ok(Some(m.max(1) as u64))
}

/// Largest `t` with `2^t ≤ s`.
pub fn floor_log2(s: Rational) -> Result<u32> {
    if s < Rational::one() {
        return Err(invalid("⌊log₂ s⌋ needs s ≥ 1"));
    }
    let mut t = 0;
    while Rational::from_integer(1i64 << (t + 1)) <= s {
        t += 1;
    }
    Ok(t)
}

fn require_s(s: Rational) -> Result<()> {
    if s < Rational::from_integer(2) {
        return Err(invalid(format!("s = {s} must be at least 2")));
    }
    Ok(())
}

/// `(t_d, s_d)` with `t_d = (s - 2^d)/(s - 1)` and `s_d = 1 + t_1 + … + t_d`,
/// the latter evaluated through the closed form `d+1 - (2^{d+1}-d-2)/(s-1)`.
pub fn sd_td(s: Rational, d: u32) -> Result<(Rational, Rational)> {
    require_s(s)?;
    let t = floor_log2(s)?;
    if d > t {
        return Err(invalid(format!("d = {d} exceeds ⌊log₂ s⌋ = {t}")));
    }
    Ok((td(s, d), sd_closed(s, d)))
}

fn td(s: Rational, d: u32) -> Rational {
    (s - Rational::from_integer(1i64 << d)) / (s - Rational::one())
}

fn sd_closed(s: Rational, d: u32) -> Rational {
    let d = d as i64;
    Rational::from_integer(d + 1) - Rational::from_integer((1i64 << (d + 1)) - d - 2) / (s - Rational::one())
}

/// `s_d` computed as the running sum `1 + t_1 + … + t_d`.
pub fn sd_by_summation(s: Rational, d: u32) -> Rational {
    (1..=d).fold(Rational::one(), |acc, i| acc + td(s, i))
}

/// Growth exponent `s_t = t+1 - (2^{t+1}-t-2)/(s-1)` at `t = ⌊log₂ s⌋`.
pub fn growth_exponent(s: Rational) -> Result<Rational> {
    require_s(s)?;
    Ok(sd_closed(s, floor_log2(s)?))
}

/// A closed real interval with outward-rounded endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn exact(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    /// Widens a value that may carry a rounding error of a couple of ulps.
    pub fn around(x: f64) -> Interval {
        Interval { lo: x.next_down().next_down(), hi: x.next_up().next_up() }
    }

    pub fn from_rational(r: Rational) -> Interval {
        let x = r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap();
        Interval::around(x)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    fn widen(lo: f64, hi: f64) -> Interval {
        Interval { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn add(self, o: Interval) -> Interval {
        Self::widen(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: Interval) -> Interval {
        Self::widen(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::widen(lo, hi)
    }

    pub fn scale(self, k: f64) -> Interval {
        self.mul(Interval::exact(k))
    }

    /// Monotone functions on positive arguments, rounded outward by two ulps.
    fn monotone(self, f: impl Fn(f64) -> f64) -> Interval {
        Interval { lo: f(self.lo).next_down().next_down(), hi: f(self.hi).next_up().next_up() }
    }

    pub fn log2(self) -> Interval {
        self.monotone(f64::log2)
    }

    pub fn sqrt(self) -> Interval {
        self.monotone(|x| x.max(0.0).sqrt())
    }

    /// `base^self` for `base ≥ 1`.
    pub fn exp_base(self, base: f64) -> Interval {
        debug_assert!(base >= 1.0);
        self.monotone(|e| base.powf(e))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo, self.hi)
    }
}

/// Premise threshold and growth bound for rational `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalBound {
    pub s: String,
    pub q: i64,
    pub t: u32,
    /// `s m - 3 q s² log₂ s`.
    pub threshold: Interval,
    /// The threshold is negative, so the premise can never hold.
    pub vacuous: bool,
    /// Exact `s_t`.
    pub exponent: String,
    /// `2^{t+2} m^{2t+2} n^{s_t}`.
    pub growth_bound: Interval,
}

/// Evaluates the premise threshold and conclusion for rational `s ≥ 2`.
pub fn rational_bound(s: Rational, m: u64, n: u64) -> Result<RationalBound> {
    require_s(s)?;
    if m < 1 || n < m {
        return Err(invalid("need n ≥ m ≥ 1"));
    }
    let t = floor_log2(s)?;
    let q = *s.denom();
    let si = Interval::from_rational(s);
    let threshold = si
        .scale(m as f64)
        .sub(si.mul(si).mul(si.log2()).scale(3.0 * q as f64));
    let exponent = sd_closed(s, t);
    let growth_bound = Interval::from_rational(exponent)
        .exp_base(n as f64)
        .scale(2f64.powi(t as i32 + 2))
        .mul(Interval::exact(m as f64).monotone(|x| x.powi(2 * t as i32 + 2)));
    Ok(RationalBound {
        s: s.to_string(),
        q,
        t,
        vacuous: threshold.hi < 0.0,
        threshold,
        exponent: exponent.to_string(),
        growth_bound,
    })
}

/// Largest `t` with `2^t ≤ s` for real `s ≥ 1`.
pub fn floor_log2_real(s: f64) -> Result<u32> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(invalid("⌊log₂ s⌋ needs finite s ≥ 1"));
    }
    let mut t = 0u32;
    while 2f64.powi(t as i32 + 1) <= s {
        t += 1;
    }
    Ok(t)
}

/// Premise threshold and growth bound for real `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrationalBound {
    pub s: f64,
    pub t: u32,
    /// `s m - 10 √m s √(log₂ s)`.
    pub threshold: Interval,
    pub vacuous: bool,
    pub exponent: Interval,
    /// `3 m^{2t} n^{s_t}`.
    pub growth_bound: Interval,
}

pub fn irrational_bound(s: f64, m: u64, n: u64) -> Result<IrrationalBound> {
    if !(s >= 2.0) {
        return Err(invalid(format!("s = {s} must be at least 2")));
    }
    if (m as f64) < s * s * s {
        return Err(Error::PreconditionViolation(format!("m = {m} is below s³ = {}", s * s * s)));
    }
    if n < m {
        return Err(invalid("need n ≥ m"));
    }
    let t = floor_log2_real(s)?;
    let si = Interval::exact(s);
    let mi = Interval::exact(m as f64);
    let threshold = si.mul(mi).sub(mi.sqrt().mul(si).mul(si.log2().sqrt()).scale(10.0));
    let pow = 2f64.powi(t as i32 + 1) - t as f64 - 2.0;
    let exponent = Interval::exact(t as f64 + 1.0).sub(Interval::exact(pow).mul(
        // 1/(s-1), outward
        Interval { lo: (1.0 / (s - 1.0)).next_down(), hi: (1.0 / (s - 1.0)).next_up() },
    ));
    let growth_bound = exponent
        .exp_base(n as f64)
        .scale(3.0)
        .mul(mi.monotone(|x| x.powi(2 * t as i32)));
    Ok(IrrationalBound { s, t, vacuous: threshold.hi < 0.0, threshold, exponent, growth_bound })
}

/// Denominator `q = ⌈(1/s) √(m / log₂ s)⌉` used to pass from real to
/// rational `s`.
pub fn approx_denominator(s: f64, m: u64) -> u64 {
    ((m as f64 / s.log2()).sqrt() / s).ceil() as u64
}

/// Largest rational `≤ s` with denominator `q`: `⌊s q⌋ / q`.
pub fn approx_rational(s: f64, q: u64) -> Rational {
    Rational::new((s * q as f64).floor() as i64, q as i64)
}

/// Checks, in interval arithmetic, the two inequalities linking the real
/// and rational premises: `q ≤ (2/s)√(m/log₂ s)` and
/// `s m - 10√m s √(log₂ s) < s' m - 3 q s'² log₂ s'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxCheck {
    pub q: u64,
    pub q_within_bound: bool,
    pub premise_chained: bool,
}

pub fn approx_check(s: f64, m: u64) -> Result<ApproxCheck> {
    let real = irrational_bound(s, m, m)?;
    let q = approx_denominator(s, m);
    let q_cap = Interval::exact(m as f64)
        .mul(Interval { lo: (1.0 / s.log2()).next_down(), hi: (1.0 / s.log2()).next_up() })
        .sqrt()
        .scale(2.0 / s);
    let sp = approx_rational(s, q);
    let spi = Interval::from_rational(sp);
    let rational_threshold = spi
        .scale(m as f64)
        .sub(spi.mul(spi).mul(spi.log2()).scale(3.0 * q as f64));
    Ok(ApproxCheck {
        q,
        q_within_bound: (q as f64) <= q_cap.lo,
        premise_chained: real.threshold.hi < rational_threshold.lo,
    })
}

/// Every bound kind the CLI can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Gk,
    TkLower,
    TkUpper,
    RationalThreshold,
    RationalGrowth,
    IrrationalThreshold,
    IrrationalGrowth,
    CheongLower,
    EasyUpperHint,
    Sd,
    Td,
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "g_k" | "gk" => BoundKind::Gk,
            "tk_lower" => BoundKind::TkLower,
            "tk_upper" => BoundKind::TkUpper,
            "rational_threshold" => BoundKind::RationalThreshold,
            "rational_growth" => BoundKind::RationalGrowth,
            "irrational_threshold" => BoundKind::IrrationalThreshold,
            "irrational_growth" => BoundKind::IrrationalGrowth,
            "cheong_lower" => BoundKind::CheongLower,
            "easy_upper_hint" => BoundKind::EasyUpperHint,
            "s_d" | "sd" => BoundKind::Sd,
            "t_d" | "td" => BoundKind::Td,
            other => return Err(invalid(format!("unknown bound kind {other:?}"))),
        })
    }
}

/// Parameters of a bound query; which ones are required depends on the kind.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundParams {
    pub k: Option<u64>,
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub d: Option<u64>,
    pub s: Option<Rational>,
    pub s_real: Option<f64>,
}

/// Parses `s` as `p/q`, an integer, or a decimal (kept exactly).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| invalid(format!("bad numerator in {text:?}")))?;
        let q: i64 = q.trim().parse().map_err(|_| invalid(format!("bad denominator in {text:?}")))?;
        if q == 0 {
            return Err(invalid("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 15 {
            return Err(invalid("too many decimal digits"));
        }
        let scale = 10i64.pow(digits);
        let whole: i64 = format!("{int}{frac}").parse().map_err(|_| invalid(format!("bad number {text:?}")))?;
        return Ok(Rational::new(whole, scale));
    }
    text.parse::<i64>()
        .map(Rational::from_integer)
        .map_err(|_| invalid(format!("bad number {text:?}")))
}

impl BoundParams {
    /// Parses `k=2,m=13,s=7/2`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = BoundParams::default();
        for item in text.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| invalid(format!("expected key=value, got {item:?}")))?;
            let int = || value.trim().parse::<u64>().map_err(|_| invalid(format!("bad integer for {key}")));
            match key.trim() {
                "k" => p.k = Some(int()?),
                "m" => p.m = Some(int()?),
                "n" => p.n = Some(int()?),
                "d" => p.d = Some(int()?),
                "s" => {
                    let r = parse_rational(value)?;
                    p.s_real = Some(r.to_f64().unwrap());
                    p.s = Some(r);
                }
                other => return Err(invalid(format!("unknown parameter {other:?}"))),
            }
        }
        Ok(p)
    }

    fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| invalid(format!("parameter {name} is required")))
    }
}

/// Evaluates one bound; returns `(name, value)` pairs in a fixed order.
pub fn evaluate(kind: BoundKind, p: &BoundParams) -> Result<Vec<(String, String)>> {
    let k32 = |k: u64| u32::try_from(k).map_err(|_| invalid("k too large"));
    let out = match kind {
        BoundKind::Gk => {
            let (n, k) = (BoundParams::need(p.n, "n")?, BoundParams::need(p.k, "k")?);
            vec![("g_k".into(), g_k(n, k).to_string())]
        }
        BoundKind::TkLower | BoundKind::TkUpper => {
            let (lo, hi) = tk_bounds(BoundParams::need(p.m, "m")?, k32(BoundParams::need(p.k, "k")?)?)?;
            if kind == BoundKind::TkLower {
                vec![("tk_lower_exclusive".into(), lo.to_string())]
            } else {
                vec![("tk_upper_inclusive".into(), hi.to_string())]
            }
        }
        BoundKind::RationalThreshold | BoundKind::RationalGrowth => {
            let m = BoundParams::need(p.m, "m")?;
            let b = rational_bound(BoundParams::need(p.s, "s")?, m, p.n.unwrap_or(m))?;
            let mut v = vec![("s".into(), b.s.clone()), ("q".into(), b.q.to_string()), ("t".into(), b.t.to_string())];
            if kind == BoundKind::RationalThreshold {
                v.push(("threshold_lo".into(), b.threshold.lo.to_string()));
                v.push(("threshold_hi".into(), b.threshold.hi.to_string()));
                v.push(("vacuous".into(), b.vacuous.to_string()));
            } else {
                v.push(("exponent".into(), b.exponent.clone()));
                v.push(("growth_lo".into(), b.growth_bound.lo.to_string()));
                v.push(("growth_hi".into(), b.growth_bound.hi.to_string()));
            }
            v
        }
        BoundKind::IrrationalThreshold | BoundKind::IrrationalGrowth => {
            let m = BoundParams::need(p.m, "m")?;
            let b = irrational_bound(BoundParams::need(p.s_real, "s")?, m, p.n.unwrap_or(m))?;
            let mut v = vec![("s".into(), b.s.to_string()), ("t".into(), b.t.to_string())];
            if kind == BoundKind::IrrationalThreshold {
                v.push(("threshold_lo".into(), b.threshold.lo.to_string()));
                v.push(("threshold_hi".into(), b.threshold.hi.to_string()));
                v.push(("vacuous".into(), b.vacuous.to_string()));
            } else {
                v.push(("exponent_lo".into(), b.exponent.lo.to_string()));
                v.push(("exponent_hi".into(), b.exponent.hi.to_string()));
                v.push(("growth_lo".into(), b.growth_bound.lo.to_string()));
                v.push(("growth_hi".into(), b.growth_bound.hi.to_string()));
            }
            v
        }
        BoundKind::CheongLower => {
            let k = k32(BoundParams::need(p.k, "k")?)?;
            let mut v = vec![("cheong_lower".into(), cheong_lower(BoundParams::need(p.m, "m")?, k)?.to_string())];
            let cross = cheong_crossover(k)?;
            v.push(("crossover_m".into(), cross.map_or("never".into(), |m| m.to_string())));
            v
        }
        BoundKind::EasyUpperHint => {
            // no explicit constant: report the k-partite witness size instead
            let (n, k) = (BoundParams::need(p.n, "n")?, BoundParams::need(p.k, "k")?);
            if k == 0 || k > n || n > 64 {
                return Err(invalid("need 1 ≤ k ≤ n ≤ 64"));
            }
            let parts = crate::search::part_sizes(n as usize, k as usize);
            let top: u128 = parts.iter().map(|&x| x as u128).product();
            vec![
                ("parts".into(), format!("{parts:?}").replace(' ', "")),
                ("transversal_k_sets".into(), top.to_string()),
            ]
        }
        BoundKind::Sd | BoundKind::Td => {
            let s = BoundParams::need(p.s, "s")?;
            let d = k32(BoundParams::need(p.d, "d")?)?;
            let (t_d, s_d) = sd_td(s, d)?;
            if kind == BoundKind::Sd {
                vec![("s_d".into(), s_d.to_string())]
            } else {
                vec![("t_d".into(), t_d.to_string())]
            }
        }
    };
    Ok(out)
}
