//! Exponent condition systems for the space-time estimates, in exact
//! rational arithmetic. Each checker validates one system; the selection
//! operations construct the scalar-estimate exponents used by the vector
//! reductions; the enumerator sweeps rational grids for passing tuples.
//!
//! Every condition is expressed through reciprocals 1/q ∈ [0,1] with the
//! convention 1/∞ = 0, so equality constraints are exact and no floating
//! point enters any verdict.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ri(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Lebesgue exponent in [1, ∞].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    Finite(Rational),
    Infinity,
}

impl Exponent {
    pub fn from_int(v: i64) -> Result<Self> {
        Exponent::from_rational(ri(v))
    }

    pub fn from_rational(v: Rational) -> Result<Self> {
        if v < ri(1) {
            return Err(Error::ParseExponent(format!("{v} is below 1")));
        }
        Ok(Exponent::Finite(v))
    }

    /// Builds the exponent with the given reciprocal; 0 means ∞.
    pub fn from_recip(x: Rational) -> Result<Self> {
        if x < ri(0) || x > ri(1) {
            return Err(Error::ParseExponent(format!(
                "reciprocal {x} outside [0, 1]"
            )));
        }
        if x == ri(0) {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(x.recip()))
        }
    }

    /// 1/q, with 1/∞ = 0.
    pub fn recip(&self) -> Rational {
        match self {
            Exponent::Finite(v) => v.recip(),
            Exponent::Infinity => ri(0),
        }
    }

    /// 1/q′ = 1 − 1/q, the reciprocal of the Hölder conjugate.
    pub fn dual_recip(&self) -> Rational {
        ri(1) - self.recip()
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(v) => *v.numer() as f64 / *v.denom() as f64,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{}", format_rational(*v)),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

pub fn format_rational(v: Rational) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses "3", "-5/8", or "0.625" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::ParseExponent(format!("cannot parse {s:?} as a rational"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(Error::ParseExponent(format!("zero denominator in {s:?}")));
        }
        return Ok(rat(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 12 || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int: i64 = if int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int.unsigned_abs() as i64 * scale + frac;
        return Ok(rat(if negative { -magnitude } else { magnitude }, scale));
    }
    let v: i64 = s.parse().map_err(|_| bad())?;
    Ok(ri(v))
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => Exponent::from_rational(parse_rational(other)?),
        }
    }
}

/// Which condition system a tuple belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremTag {
    /// Wave system with divergence-free forcing: exponents (q, r, q̃, s, k).
    WaveSystem,
    /// Scalar wave estimate: exponents (q, r, q̃, r̃, s, γ).
    WaveScalar,
    /// Zero-data wave system in three dimensions: (q, r, q̃, k).
    InhomoWave3d,
    /// Scalar zero-data wave estimate in three dimensions: (q, r, q̃, r̃, γ).
    Taggart,
    /// Schrödinger system with divergence-free forcing: (q, r, q̃, s, k).
    Schrodinger,
    /// Scalar Schrödinger estimate: (q, r, q̃, r̃, s, γ).
    SchrodingerScalar,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 6] = [
        TheoremTag::WaveSystem,
        TheoremTag::WaveScalar,
        TheoremTag::InhomoWave3d,
        TheoremTag::Taggart,
        TheoremTag::Schrodinger,
        TheoremTag::SchrodingerScalar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremTag::WaveSystem => "wave-system",
            TheoremTag::WaveScalar => "wave-scalar",
            TheoremTag::InhomoWave3d => "inhomo-wave3d",
            TheoremTag::Taggart => "taggart",
            TheoremTag::Schrodinger => "schrodinger",
            TheoremTag::SchrodingerScalar => "schrodinger-scalar",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown theorem tag {s:?}")))
    }
}

/// A candidate exponent tuple. Only the fields the tagged system reads may
/// be present; checkers reject both missing and stray fields.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentTuple {
    pub theorem: TheoremTag,
    pub n: u32,
    pub q: Option<Exponent>,
    pub r: Option<Exponent>,
    pub qt: Option<Exponent>,
    pub rt: Option<Exponent>,
    pub s: Option<Rational>,
    pub k: Option<Rational>,
    pub gamma: Option<Rational>,
}

impl ExponentTuple {
    fn empty(theorem: TheoremTag, n: u32) -> Self {
        ExponentTuple {
            theorem,
            n,
            q: None,
            r: None,
            qt: None,
            rt: None,
            s: None,
            k: None,
            gamma: None,
        }
    }

    pub fn wave_system(n: u32, q: Exponent, r: Exponent, qt: Exponent, s: Rational, k: Rational) -> Self {
        ExponentTuple {
            q: Some(q),
            r: Some(r),
            qt: Some(qt),
            s: Some(s),
            k: Some(k),
            ..ExponentTuple::empty(TheoremTag::WaveSystem, n)
        }
    }

    pub fn wave_scalar(
        n: u32,
        q: Exponent,
        r: Exponent,
        qt: Exponent,
        rt: Exponent,
        s: Rational,
        gamma: Rational,
    ) -> Self {
        ExponentTuple {
            q: Some(q),
            r: Some(r),
            qt: Some(qt),
            rt: Some(rt),
            s: Some(s),
            gamma: Some(gamma),
            ..ExponentTuple::empty(TheoremTag::WaveScalar, n)
        }
    }

    pub fn inhomo_wave3d(q: Exponent, r: Exponent, qt: Exponent, k: Rational) -> Self {
        ExponentTuple {
            q: Some(q),
            r: Some(r),
            qt: Some(qt),
            k: Some(k),
            ..ExponentTuple::empty(TheoremTag::InhomoWave3d, 3)
        }
    }

    pub fn taggart(q: Exponent, r: Exponent, qt: Exponent, rt: Exponent, gamma: Rational) -> Self {
        ExponentTuple {
            q: Some(q),
            r: Some(r),
            qt: Some(qt),
            rt: Some(rt),
            gamma: Some(gamma),
            ..ExponentTuple::empty(TheoremTag::Taggart, 3)
        }
    }

    pub fn schrodinger(n: u32, q: Exponent, r: Exponent, qt: Exponent, s: Rational, k: Rational) -> Self {
        ExponentTuple {
            q: Some(q),
            r: Some(r),
            qt: Some(qt),
            s: Some(s),
            k: Some(k),
            ..ExponentTuple::empty(TheoremTag::Schrodinger, n)
        }
    }

    pub fn schrodinger_scalar(
        n: u32,
        q: Exponent,
        r: Exponent,
        qt: Exponent,
        rt: Exponent,
        s: Rational,
        gamma: Rational,
    ) -> Self {
        ExponentTuple {
            q: Some(q),
            r: Some(r),
            qt: Some(qt),
            rt: Some(rt),
            s: Some(s),
            gamma: Some(gamma),
            ..ExponentTuple::empty(TheoremTag::SchrodingerScalar, n)
        }
    }

    /// (required, forbidden) field layout per tag, as (name, present) pairs.
    fn validate_fields(&self) -> Result<()> {
        let fields: [(&'static str, bool); 7] = [
            ("q", self.q.is_some()),
            ("r", self.r.is_some()),
            ("qt", self.qt.is_some()),
            ("rt", self.rt.is_some()),
            ("s", self.s.is_some()),
            ("k", self.k.is_some()),
            ("gamma", self.gamma.is_some()),
        ];
        let required: &[&str] = match self.theorem {
            TheoremTag::WaveSystem | TheoremTag::Schrodinger => &["q", "r", "qt", "s", "k"],
            TheoremTag::WaveScalar | TheoremTag::SchrodingerScalar => {
                &["q", "r", "qt", "rt", "s", "gamma"]
            }
            TheoremTag::InhomoWave3d => &["q", "r", "qt", "k"],
            TheoremTag::Taggart => &["q", "r", "qt", "rt", "gamma"],
        };
        for (name, present) in fields {
            let needed = required.contains(&name);
            if needed && !present {
                return Err(Error::MissingField(name));
            }
            if !needed && present {
                return Err(Error::UnexpectedField(name));
            }
        }
        Ok(())
    }

    fn expect_tag(&self, tag: TheoremTag) -> Result<()> {
        if self.theorem != tag {
            return Err(Error::WrongTheorem {
                expected: tag.name(),
                got: self.theorem.name().to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.theorem, self.n)?;
        let exps = [("q", self.q), ("r", self.r), ("qt", self.qt), ("rt", self.rt)];
        for (name, v) in exps {
            if let Some(v) = v {
                write!(f, " {name}={v}")?;
            }
        }
        let rats = [("s", self.s), ("k", self.k), ("gamma", self.gamma)];
        for (name, v) in rats {
            if let Some(v) = v {
                write!(f, " {name}={}", format_rational(v))?;
            }
        }
        Ok(())
    }
}

/// One failed condition: its stable name and how far the tuple missed it.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub condition: &'static str,
    pub slack: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (off by {})", self.condition, format_rational(self.slack))
    }
}

/// Outcome of a checker: passes exactly when no condition is violated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckResult {
    pub violations: Vec<Violation>,
}

impl CheckResult {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Conditions {
    violations: Vec<Violation>,
}

impl Conditions {
    fn new() -> Self {
        Conditions { violations: Vec::new() }
    }

    /// lhs ≤ rhs.
    fn le(&mut self, condition: &'static str, lhs: Rational, rhs: Rational) {
        if lhs > rhs {
            self.violations.push(Violation { condition, slack: lhs - rhs });
        }
    }

    /// lhs < rhs.
    fn lt(&mut self, condition: &'static str, lhs: Rational, rhs: Rational) {
        if lhs >= rhs {
            self.violations.push(Violation { condition, slack: lhs - rhs });
        }
    }

    /// lhs = rhs.
    fn eq(&mut self, condition: &'static str, lhs: Rational, rhs: Rational) {
        if lhs != rhs {
            let diff = lhs - rhs;
            let slack = if diff < ri(0) { -diff } else { diff };
            self.violations.push(Violation { condition, slack });
        }
    }

    /// 1/a + 2/b < 1, or (a, b) = (∞, 2): the acceptability alternative.
    fn acceptable(&mut self, condition: &'static str, a: Exponent, b: Exponent) {
        let sum = a.recip() + ri(2) * b.recip();
        let endpoint = a.is_infinite() && b == Exponent::Finite(ri(2));
        if sum >= ri(1) && !endpoint {
            self.violations.push(Violation { condition, slack: sum - ri(1) });
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult { violations: self.violations }
    }
}

/// Range conditions shared by every exponent quadruple: `two_sided` encodes
/// [2, ∞] (reciprocal ≤ 1/2), otherwise (1, ∞] (reciprocal < 1).
fn exponent_range(c: &mut Conditions, name_range: &'static str, x: Rational, two_sided: bool) {
    if two_sided {
        c.le(name_range, x, rat(1, 2));
    } else {
        c.lt(name_range, x, ri(1));
    }
}

/// Space exponent in [2, ∞): reciprocal in (0, 1/2].
fn space_range(c: &mut Conditions, name_range: &'static str, name_finite: &'static str, x: Rational) {
    c.le(name_range, x, rat(1, 2));
    c.lt(name_finite, ri(0), x);
}

/// Dispatches to the checker named by the tuple's own tag.
pub fn check(t: &ExponentTuple) -> Result<CheckResult> {
    match t.theorem {
        TheoremTag::WaveSystem => check_wave_system(t),
        TheoremTag::WaveScalar => check_wave_scalar(t),
        TheoremTag::InhomoWave3d => check_inhomo_wave3d(t),
        TheoremTag::Taggart => check_taggart(t),
        TheoremTag::Schrodinger => check_schrodinger(t),
        TheoremTag::SchrodingerScalar => check_schrodinger_scalar(t),
    }
}

/// Wave system with divergence-free forcing, n ≥ 2:
/// 2 ≤ q, q̃ ≤ ∞, 2 ≤ r < ∞, q̃ > 4/(n−1) when n ∈ {2, 3},
/// 1/q + (n−1)/(2r) ≤ (n−1)/4, and
/// 1/q + n/r = n/2 − s = 1/q̃′ + n − 2 − k.
pub fn check_wave_system(t: &ExponentTuple) -> Result<CheckResult> {
    t.expect_tag(TheoremTag::WaveSystem)?;
    t.validate_fields()?;
    let n = t.n as i64;
    let (xq, xr, xqt) = (t.q.unwrap().recip(), t.r.unwrap().recip(), t.qt.unwrap().recip());
    let (s, k) = (t.s.unwrap(), t.k.unwrap());

    let mut c = Conditions::new();
    c.le("dimension", ri(2), ri(n));
    exponent_range(&mut c, "q-range", xq, true);
    exponent_range(&mut c, "qt-range", xqt, true);
    space_range(&mut c, "r-range", "r-finite", xr);
    if n == 2 || n == 3 {
        // q̃ > 4/(n−1).
        c.lt("qt-strict", xqt, rat(n - 1, 4));
    }
    if n >= 2 {
        c.le("admissibility", xq + rat(n - 1, 2) * xr, rat(n - 1, 4));
        let lhs = xq + ri(n) * xr;
        c.eq("scale-solution", lhs, rat(n, 2) - s);
        c.eq("scale-forcing", rat(n, 2) - s, ri(1) - xqt + ri(n - 2) - k);
    }
    Ok(c.finish())
}

/// Scalar wave estimate, n ≥ 2: both (q, r) and (q̃, r̃) wave-admissible,
/// 2 ≤ r, r̃ < ∞, and 1/q + n/r = n/2 − s = 1/q̃′ + n/r̃′ − 2 − γ.
pub fn check_wave_scalar(t: &ExponentTuple) -> Result<CheckResult> {
    t.expect_tag(TheoremTag::WaveScalar)?;
    t.validate_fields()?;
    let n = t.n as i64;
    let (xq, xr) = (t.q.unwrap().recip(), t.r.unwrap().recip());
    let (xqt, xrt) = (t.qt.unwrap().recip(), t.rt.unwrap().recip());
    let (s, gamma) = (t.s.unwrap(), t.gamma.unwrap());

    let mut c = Conditions::new();
    c.le("dimension", ri(2), ri(n));
    exponent_range(&mut c, "q-range", xq, true);
    exponent_range(&mut c, "qt-range", xqt, true);
    space_range(&mut c, "r-range", "r-finite", xr);
    space_range(&mut c, "rt-range", "rt-finite", xrt);
    if n >= 2 {
        c.le("admissibility-qr", xq + rat(n - 1, 2) * xr, rat(n - 1, 4));
        c.le("admissibility-qtrt", xqt + rat(n - 1, 2) * xrt, rat(n - 1, 4));
        c.eq("scale-solution", xq + ri(n) * xr, rat(n, 2) - s);
        c.eq(
            "scale-forcing",
            rat(n, 2) - s,
            ri(1) - xqt + ri(n) * (ri(1) - xrt) - ri(2) - gamma,
        );
    }
    Ok(c.finish())
}

/// Zero-data wave system, n = 3: 1 < q, q̃ ≤ ∞, 2 ≤ r < ∞,
/// 1/q + 1/q̃ < min{1, (k+1)/2}, (q, r) acceptable, and
/// 1/q + 3/r = 2 − k − 1/q̃.
pub fn check_inhomo_wave3d(t: &ExponentTuple) -> Result<CheckResult> {
    t.expect_tag(TheoremTag::InhomoWave3d)?;
    t.validate_fields()?;
    if t.n != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: t.n as usize });
    }
    let (q, r) = (t.q.unwrap(), t.r.unwrap());
    let (xq, xr, xqt) = (q.recip(), r.recip(), t.qt.unwrap().recip());
    let k = t.k.unwrap();

    let mut c = Conditions::new();
    exponent_range(&mut c, "q-range", xq, false);
    exponent_range(&mut c, "qt-range", xqt, false);
    space_range(&mut c, "r-range", "r-finite", xr);
    let sum = xq + xqt;
    let cap = std::cmp::min(ri(1), (k + ri(1)) / ri(2));
    c.lt("sum-strict", sum, cap);
    c.acceptable("acceptability", q, r);
    c.eq("scale", xq + ri(3) * xr, ri(2) - k - xqt);
    Ok(c.finish())
}

/// Scalar zero-data wave estimate, n = 3: 1 < q, q̃ ≤ ∞, 2 ≤ r, r̃ < ∞,
/// 1/q + 1/q̃ < 1 and ≤ (γ+1)/2, both acceptability alternatives, and
/// 1/q + 3/r = 2 − γ − 1/q̃ − 3/r̃.
pub fn check_taggart(t: &ExponentTuple) -> Result<CheckResult> {
    t.expect_tag(TheoremTag::Taggart)?;
    t.validate_fields()?;
    if t.n != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: t.n as usize });
    }
    let (q, r) = (t.q.unwrap(), t.r.unwrap());
    let (qt, rt) = (t.qt.unwrap(), t.rt.unwrap());
    let (xq, xr, xqt, xrt) = (q.recip(), r.recip(), qt.recip(), rt.recip());
    let gamma = t.gamma.unwrap();

    let mut c = Conditions::new();
    exponent_range(&mut c, "q-range", xq, false);
    exponent_range(&mut c, "qt-range", xqt, false);
    space_range(&mut c, "r-range", "r-finite", xr);
    space_range(&mut c, "rt-range", "rt-finite", xrt);
    let sum = xq + xqt;
    c.lt("sum-one", sum, ri(1));
    c.le("sum-gamma", sum, (gamma + ri(1)) / ri(2));
    c.acceptable("acceptability-qr", q, r);
    c.acceptable("acceptability-qtrt", qt, rt);
    c.eq("scale", xq + ri(3) * xr, ri(2) - gamma - xqt - ri(3) * xrt);
    Ok(c.finish())
}

/// Schrödinger system with divergence-free forcing, n ≥ 2:
/// 2 ≤ q, q̃ ≤ ∞, 2 ≤ r < ∞, s ≥ 0, k > s, and
/// 2/q + n/r = n/2 − s, 2/q̃ = n/2 − k + s.
pub fn check_schrodinger(t: &ExponentTuple) -> Result<CheckResult> {
    t.expect_tag(TheoremTag::Schrodinger)?;
    t.validate_fields()?;
    let n = t.n as i64;
    let (xq, xr, xqt) = (t.q.unwrap().recip(), t.r.unwrap().recip(), t.qt.unwrap().recip());
    let (s, k) = (t.s.unwrap(), t.k.unwrap());

    let mut c = Conditions::new();
    c.le("dimension", ri(2), ri(n));
    exponent_range(&mut c, "q-range", xq, true);
    exponent_range(&mut c, "qt-range", xqt, true);
    space_range(&mut c, "r-range", "r-finite", xr);
    c.le("s-nonneg", ri(0), s);
    c.lt("k-strict", s, k);
    if n >= 2 {
        c.eq("scale-solution", ri(2) * xq + ri(n) * xr, rat(n, 2) - s);
        c.eq("scale-forcing", ri(2) * xqt, rat(n, 2) - k + s);
    }
    Ok(c.finish())
}

/// Scalar Schrödinger estimate, n ≥ 2: 2 ≤ q, q̃ ≤ ∞, 2 ≤ r, r̃ < ∞,
/// s ≥ 0, γ > s, and 2/q + n/r = n/2 − s, 2/q̃ + n/r̃ = n/2 − γ + s.
pub fn check_schrodinger_scalar(t: &ExponentTuple) -> Result<CheckResult> {
    t.expect_tag(TheoremTag::SchrodingerScalar)?;
    t.validate_fields()?;
    let n = t.n as i64;
    let (xq, xr) = (t.q.unwrap().recip(), t.r.unwrap().recip());
    let (xqt, xrt) = (t.qt.unwrap().recip(), t.rt.unwrap().recip());
    let (s, gamma) = (t.s.unwrap(), t.gamma.unwrap());

    let mut c = Conditions::new();
    c.le("dimension", ri(2), ri(n));
    exponent_range(&mut c, "q-range", xq, true);
    exponent_range(&mut c, "qt-range", xqt, true);
    space_range(&mut c, "r-range", "r-finite", xr);
    space_range(&mut c, "rt-range", "rt-finite", xrt);
    c.le("s-nonneg", ri(0), s);
    c.lt("gamma-strict", s, gamma);
    if n >= 2 {
        c.eq("scale-solution", ri(2) * xq + ri(n) * xr, rat(n, 2) - s);
        c.eq("scale-forcing", ri(2) * xqt + ri(n) * xrt, rat(n, 2) - gamma + s);
    }
    Ok(c.finish())
}

/// The (α, r̃, γ) choice that reduces a vector estimate to its scalar one,
/// together with the assembled scalar tuple.
#[derive(Clone, Debug)]
pub struct AlphaSelection {
    pub alpha: Rational,
    pub r_tilde: Exponent,
    pub gamma: Rational,
    pub scalar: ExponentTuple,
}

fn require_pass(t: &ExponentTuple) -> Result<()> {
    let result = check(t)?;
    if !result.pass() {
        let names: Vec<&str> = result.violations.iter().map(|v| v.condition).collect();
        return Err(Error::NotApplicable(format!(
            "tuple fails {}: {}",
            t.theorem,
            names.join(", ")
        )));
    }
    Ok(())
}

/// α for the wave reduction: the largest admissible value
/// α = n/2 − 2n/((n−1) q̃), giving r̃ = n/α at the admissibility endpoint
/// and γ = k − α.
pub fn select_alpha_wave(t: &ExponentTuple) -> Result<AlphaSelection> {
    t.expect_tag(TheoremTag::WaveSystem)?;
    require_pass(t)?;
    let n = t.n as i64;
    let xqt = t.qt.unwrap().recip();
    let alpha = rat(n, 2) - rat(2 * n, n - 1) * xqt;
    let r_tilde = Exponent::from_recip(alpha / ri(n))?;
    let gamma = t.k.unwrap() - alpha;
    let scalar = ExponentTuple::wave_scalar(
        t.n,
        t.q.unwrap(),
        t.r.unwrap(),
        t.qt.unwrap(),
        r_tilde,
        t.s.unwrap(),
        gamma,
    );
    Ok(AlphaSelection { alpha, r_tilde, gamma, scalar })
}

/// α for the zero-data wave reduction: half the smaller of the two slacks
/// α = ½ min{(k+1) − 2(1/q + 1/q̃), (3/2)(1 − 1/q̃)}, giving r̃ = 3/α and
/// γ = k − α. Both strict scalar conditions then hold with room to spare,
/// and α < 3/2 always.
pub fn select_alpha_inhomo(t: &ExponentTuple) -> Result<AlphaSelection> {
    t.expect_tag(TheoremTag::InhomoWave3d)?;
    require_pass(t)?;
    let (xq, xqt) = (t.q.unwrap().recip(), t.qt.unwrap().recip());
    let k = t.k.unwrap();
    let slack_gamma = k + ri(1) - ri(2) * (xq + xqt);
    let slack_accept = rat(3, 2) * (ri(1) - xqt);
    let alpha = std::cmp::min(slack_gamma, slack_accept) / ri(2);
    let r_tilde = Exponent::from_recip(alpha / ri(3))?;
    let gamma = k - alpha;
    let scalar = ExponentTuple::taggart(t.q.unwrap(), t.r.unwrap(), t.qt.unwrap(), r_tilde, gamma);
    Ok(AlphaSelection { alpha, r_tilde, gamma, scalar })
}

/// α for the Schrödinger reduction: α = min{(k−s)/2, n/2}, giving
/// r̃ = n/α and γ = k − α.
///
/// Halving the k−s slack (rather than taking the endpoint α = k−s) keeps
/// γ = k − α strictly above s, which the scalar system requires; under the
/// scale identities k − s ≤ n/2, so the dimensional cap never binds on
/// passing tuples.
pub fn select_alpha_schrod(t: &ExponentTuple) -> Result<AlphaSelection> {
    t.expect_tag(TheoremTag::Schrodinger)?;
    require_pass(t)?;
    let n = t.n as i64;
    let (s, k) = (t.s.unwrap(), t.k.unwrap());
    let alpha = std::cmp::min((k - s) / ri(2), rat(n, 2));
    let r_tilde = Exponent::from_recip(alpha / ri(n))?;
    let gamma = k - alpha;
    let scalar = ExponentTuple::schrodinger_scalar(
        t.n,
        t.q.unwrap(),
        t.r.unwrap(),
        t.qt.unwrap(),
        r_tilde,
        s,
        gamma,
    );
    Ok(AlphaSelection { alpha, r_tilde, gamma, scalar })
}

/// Replaces (r, r̃) of a passing scalar zero-data tuple with (r₁, r̃₁)
/// satisfying 1/r₁ + 1/r̃₁ = 1 − 1/q − 1/q̃, r₁ ≤ r, r̃₁ ≤ r̃, both in
/// [2, ∞), and both acceptability alternatives. The symmetric split is
/// preferred; otherwise the midpoint of the feasible interval is taken.
pub fn taggart_reduction(t: &ExponentTuple) -> Result<(Exponent, Exponent)> {
    t.expect_tag(TheoremTag::Taggart)?;
    require_pass(t)?;
    let (q, qt) = (t.q.unwrap(), t.qt.unwrap());
    let (xr, xrt) = (t.r.unwrap().recip(), t.rt.unwrap().recip());
    let sigma = ri(1) - q.recip() - qt.recip();

    // x = 1/r₁ ranges over [lo, hi] closed, minus the open acceptability
    // bounds that apply when the matching time exponent is finite.
    let lo = std::cmp::max(xr, sigma - rat(1, 2));
    let hi = std::cmp::min(rat(1, 2), sigma - xrt);
    let mut lower = (lo, false);
    let mut upper = (hi, false);
    if !qt.is_infinite() {
        let bound = sigma - (ri(1) - qt.recip()) / ri(2);
        if bound >= lower.0 {
            lower = (bound, true);
        }
    }
    if !q.is_infinite() {
        let bound = (ri(1) - q.recip()) / ri(2);
        if bound <= upper.0 {
            upper = (bound, true);
        }
    }

    let feasible = |x: Rational| -> bool {
        let above = if lower.1 { x > lower.0 } else { x >= lower.0 };
        let below = if upper.1 { x < upper.0 } else { x <= upper.0 };
        above && below
    };
    let symmetric = sigma / ri(2);
    let x = if feasible(symmetric) {
        symmetric
    } else if lower.0 < upper.0 {
        (lower.0 + upper.0) / ri(2)
    } else if lower.0 == upper.0 && feasible(lower.0) {
        lower.0
    } else {
        return Err(Error::Infeasible(format!(
            "no admissible split of {} between the space exponents",
            format_rational(sigma)
        )));
    };
    Ok((Exponent::from_recip(x)?, Exponent::from_recip(sigma - x)?))
}

/// Grid specification for [`enumerate_exponents`]: reciprocals of the free
/// time/space exponents run over all rationals with denominator at most
/// `max_denominator` in their admissible ranges; the regularity indices are
/// derived from the scale identities, so every candidate satisfies those
/// exactly.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationSpec {
    pub theorem: TheoremTag,
    pub n: u32,
    pub max_denominator: i64,
}

fn farey(max_den: i64, lo: Rational, hi: Rational, lo_open: bool, hi_open: bool) -> Vec<Rational> {
    let mut set = BTreeSet::new();
    for den in 1..=max_den {
        let lo_num = (lo * ri(den)).ceil().to_integer();
        let hi_num = (hi * ri(den)).floor().to_integer();
        for num in lo_num..=hi_num {
            set.insert(rat(num, den));
        }
    }
    set.into_iter()
        .filter(|x| (!lo_open || *x > lo) && (!hi_open || *x < hi))
        .collect()
}

fn sort_key(t: &ExponentTuple) -> [Rational; 4] {
    [
        t.q.map_or(ri(0), |e| e.recip()),
        t.r.map_or(ri(0), |e| e.recip()),
        t.qt.map_or(ri(0), |e| e.recip()),
        t.rt.map_or(ri(0), |e| e.recip()),
    ]
}

/// Exhaustively enumerates passing tuples over the rational grid, sorted
/// lexicographically by (1/q, 1/r, 1/q̃, 1/r̃). Deterministic.
pub fn enumerate_exponents(spec: &EnumerationSpec) -> Result<Vec<ExponentTuple>> {
    if spec.max_denominator < 1 {
        return Err(Error::Config(format!(
            "max denominator {} must be at least 1",
            spec.max_denominator
        )));
    }
    let n = spec.n as i64;
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: spec.n as usize });
    }
    if matches!(spec.theorem, TheoremTag::InhomoWave3d | TheoremTag::Taggart) && spec.n != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: spec.n as usize });
    }
    let d = spec.max_denominator;
    let half = rat(1, 2);
    let two_sided = farey(d, ri(0), half, false, false);
    let one_sided = farey(d, ri(0), ri(1), false, true);
    let space = farey(d, ri(0), half, true, false);

    let mut out = Vec::new();
    let mut push = |t: ExponentTuple| -> Result<()> {
        if check(&t)?.pass() {
            out.push(t);
        }
        Ok(())
    };

    match spec.theorem {
        TheoremTag::WaveSystem => {
            for &xq in &two_sided {
                for &xr in &space {
                    for &xqt in &two_sided {
                        let s = rat(n, 2) - xq - ri(n) * xr;
                        let k = ri(1) - xqt + ri(n - 2) - (rat(n, 2) - s);
                        push(ExponentTuple::wave_system(
                            spec.n,
                            Exponent::from_recip(xq)?,
                            Exponent::from_recip(xr)?,
                            Exponent::from_recip(xqt)?,
                            s,
                            k,
                        ))?;
                    }
                }
            }
        }
        TheoremTag::WaveScalar => {
            for &xq in &two_sided {
                for &xr in &space {
                    for &xqt in &two_sided {
                        for &xrt in &space {
                            let s = rat(n, 2) - xq - ri(n) * xr;
                            let gamma =
                                ri(1) - xqt + ri(n) * (ri(1) - xrt) - ri(2) - (rat(n, 2) - s);
                            push(ExponentTuple::wave_scalar(
                                spec.n,
                                Exponent::from_recip(xq)?,
                                Exponent::from_recip(xr)?,
                                Exponent::from_recip(xqt)?,
                                Exponent::from_recip(xrt)?,
                                s,
                                gamma,
                            ))?;
                        }
                    }
                }
            }
        }
        TheoremTag::InhomoWave3d => {
            for &xq in &one_sided {
                for &xr in &space {
                    for &xqt in &one_sided {
                        let k = ri(2) - xq - ri(3) * xr - xqt;
                        push(ExponentTuple::inhomo_wave3d(
                            Exponent::from_recip(xq)?,
                            Exponent::from_recip(xr)?,
                            Exponent::from_recip(xqt)?,
                            k,
                        ))?;
                    }
                }
            }
        }
        TheoremTag::Taggart => {
            for &xq in &one_sided {
                for &xr in &space {
                    for &xqt in &one_sided {
                        for &xrt in &space {
                            let gamma = ri(2) - xq - ri(3) * xr - xqt - ri(3) * xrt;
                            push(ExponentTuple::taggart(
                                Exponent::from_recip(xq)?,
                                Exponent::from_recip(xr)?,
                                Exponent::from_recip(xqt)?,
                                Exponent::from_recip(xrt)?,
                                gamma,
                            ))?;
                        }
                    }
                }
            }
        }
        TheoremTag::Schrodinger => {
            for &xq in &two_sided {
                for &xr in &space {
                    for &xqt in &two_sided {
                        let s = rat(n, 2) - ri(2) * xq - ri(n) * xr;
                        let k = rat(n, 2) + s - ri(2) * xqt;
                        push(ExponentTuple::schrodinger(
                            spec.n,
                            Exponent::from_recip(xq)?,
                            Exponent::from_recip(xr)?,
                            Exponent::from_recip(xqt)?,
                            s,
                            k,
                        ))?;
                    }
                }
            }
        }
        TheoremTag::SchrodingerScalar => {
            for &xq in &two_sided {
                for &xr in &space {
                    for &xqt in &two_sided {
                        for &xrt in &space {
                            let s = rat(n, 2) - ri(2) * xq - ri(n) * xr;
                            let gamma = rat(n, 2) + s - ri(2) * xqt - ri(n) * xrt;
                            push(ExponentTuple::schrodinger_scalar(
                                spec.n,
                                Exponent::from_recip(xq)?,
                                Exponent::from_recip(xr)?,
                                Exponent::from_recip(xqt)?,
                                Exponent::from_recip(xrt)?,
                                s,
                                gamma,
                            ))?;
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    Ok(out)
}
