//! Symbols on the circle: trigonometric polynomials, finitely many
//! sawtooth jumps over a trigonometric background, and sampled grid values.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum_n c_n e^{int}` with finitely many nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawTrig", into = "RawTrig")]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

// JSON object keys are strings; parse them explicitly so the form also
// survives buffering inside tagged enums.
#[derive(Serialize, Deserialize)]
struct RawTrig {
    coeffs: BTreeMap<String, Complex64>,
}

fn parse_coeffs(raw: BTreeMap<String, Complex64>) -> std::result::Result<TrigPolynomial, String> {
    let pairs = raw
        .into_iter()
        .map(|(k, c)| {
            k.trim()
                .parse::<i64>()
                .map(|n| (n, c))
                .map_err(|_| format!("coefficient key `{k}` is not an integer"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(TrigPolynomial::new(pairs))
}

fn format_coeffs(p: &TrigPolynomial) -> BTreeMap<String, Complex64> {
    p.coeffs.iter().map(|(n, c)| (n.to_string(), *c)).collect()
}

impl TryFrom<RawTrig> for TrigPolynomial {
    type Error = String;
    fn try_from(raw: RawTrig) -> std::result::Result<Self, String> {
        parse_coeffs(raw.coeffs)
    }
}

impl From<TrigPolynomial> for RawTrig {
    fn from(p: TrigPolynomial) -> Self {
        RawTrig {
            coeffs: format_coeffs(&p),
        }
    }
}

impl TrigPolynomial {
    pub fn new(pairs: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in pairs {
            *coeffs.entry(n).or_insert(ZERO) += c;
        }
        coeffs.retain(|_, c| *c != ZERO);
        TrigPolynomial { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new([(0, c)])
    }

    /// `z^n` for any integer `n`.
    pub fn monomial(n: i64) -> Self {
        Self::new([(n, Complex64::new(1.0, 0.0))])
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(ZERO)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    /// `d+`: highest nonnegative frequency present.
    pub fn degree_pos(&self) -> usize {
        self.coeffs.keys().next_back().map_or(0, |&n| n.max(0) as usize)
    }

    /// `d-`: magnitude of the lowest nonpositive frequency present.
    pub fn degree_neg(&self) -> usize {
        self.coeffs.keys().next().map_or(0, |&n| (-n).max(0) as usize)
    }

    pub fn bandwidth(&self) -> usize {
        self.degree_pos() + self.degree_neg()
    }

    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|&n| n >= 0)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &c)| c * Complex64::from_polar(1.0, n as f64 * t))
            .sum()
    }

    /// Value at a point of the circle.
    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &c)| c * if n >= 0 { z.powi(n as i32) } else { z.conj().powi(-n as i32) })
            .sum()
    }

    /// Symbol `conj(phi)`: coefficients `conj(c_{-n})`.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|(&n, &c)| (-n, c.conj())))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|(&n, &c)| (n, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coeffs().chain(other.coeffs()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut pairs = Vec::new();
        for (n, a) in self.coeffs() {
            for (m, b) in other.coeffs() {
                pairs.push((n + m, a * b));
            }
        }
        Self::new(pairs)
    }

    /// Fejér mean of order `d`: weights `1 - |n| / (d + 1)`, `|n| <= d`.
    pub fn fejer(&self, d: usize) -> Self {
        let d = d as i64;
        Self::new(
            self.coeffs()
                .filter(|(n, _)| n.abs() <= d)
                .map(|(n, c)| (n, c * (1.0 - n.abs() as f64 / (d + 1) as f64))),
        )
    }

    /// Grid values at `t_j = 2 pi j / points`.
    pub fn sample(&self, points: usize) -> Vec<Complex64> {
        (0..points)
            .map(|j| self.eval(2.0 * PI * j as f64 / points as f64))
            .collect()
    }
}

/// Fourier coefficient `c_n` of `chi(e^{i theta}) = 1 - theta / 2 pi` on `[0, 2 pi)`.
pub fn chi_coefficient(n: i64) -> Complex64 {
    if n == 0 {
        Complex64::new(0.5, 0.0)
    } else {
        Complex64::new(0.0, -1.0 / (2.0 * PI * n as f64))
    }
}

/// `chi` at angle `theta`, reduced to `[0, 2 pi)`; the jump evaluates to
/// its right limit 1.
pub fn chi_at(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    1.0 - t / (2.0 * PI)
}

/// l2 norm of the discarded `chi` coefficients `|n| > d`.
pub fn chi_tail_l2(d: usize) -> f64 {
    // sum_{n > d} 1/n^2 = trigamma(d + 1); recur up to x >= 16, then the
    // asymptotic series
    let mut x = d as f64 + 1.0;
    let mut trigamma = 0.0;
    while x < 16.0 {
        trigamma += 1.0 / (x * x);
        x += 1.0;
    }
    trigamma += 1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x.powi(3)) - 1.0 / (30.0 * x.powi(5))
        + 1.0 / (42.0 * x.powi(7));
    (2.0 * trigamma).sqrt() / (2.0 * PI)
}

/// A sawtooth jump `height * chi(conj(at) z)` sitting at `at` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub at: Complex64,
    pub height: Complex64,
}

impl Jump {
    fn angle(&self) -> f64 {
        self.at.arg()
    }
}

/// `background + sum_i height_i chi_{at_i}`: piecewise continuous with a
/// jump of `height_i` (right minus left limit) at each `at_i`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct JumpSymbol {
    #[serde(default)]
    pub jumps: Vec<Jump>,
    #[serde(default)]
    pub background: TrigPolynomial,
}

impl JumpSymbol {
    /// `chi` itself: `chi_+(1) = 1`, `chi_-(1) = 0`.
    pub fn chi() -> Self {
        JumpSymbol {
            jumps: vec![Jump {
                at: Complex64::new(1.0, 0.0),
                height: Complex64::new(1.0, 0.0),
            }],
            background: TrigPolynomial::default(),
        }
    }

    pub fn continuous(background: TrigPolynomial) -> Self {
        JumpSymbol {
            jumps: Vec::new(),
            background,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        JumpSymbol {
            jumps: self
                .jumps
                .iter()
                .map(|j| Jump {
                    at: j.at,
                    height: j.height * s,
                })
                .collect(),
            background: self.background.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        JumpSymbol {
            jumps: self.jumps.iter().chain(&other.jumps).copied().collect(),
            background: self.background.add(&other.background),
        }
    }

    pub fn add_trig(&self, p: &TrigPolynomial) -> Self {
        JumpSymbol {
            jumps: self.jumps.clone(),
            background: self.background.add(p),
        }
    }

    /// Distinct points carrying a nonzero total jump.
    pub fn jump_points(&self) -> Vec<Complex64> {
        let mut points: Vec<(Complex64, Complex64)> = Vec::new();
        for j in &self.jumps {
            match points.iter_mut().find(|(p, _)| (*p - j.at).norm() < 1e-12) {
                Some((_, h)) => *h += j.height,
                None => points.push((j.at, j.height)),
            }
        }
        points
            .into_iter()
            .filter(|(_, h)| h.norm() > 0.0)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.background.eval(t)
            + self
                .jumps
                .iter()
                .map(|j| j.height * chi_at(t - j.angle()))
                .sum::<Complex64>()
    }

    fn one_sided(&self, t: f64, right: bool) -> Complex64 {
        self.background.eval(t)
            + self
                .jumps
                .iter()
                .map(|j| {
                    let rel = (t - j.angle()).rem_euclid(2.0 * PI);
                    let on_jump = rel < 1e-12 || 2.0 * PI - rel < 1e-12;
                    let v = if on_jump {
                        if right {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        chi_at(rel)
                    };
                    j.height * v
                })
                .sum::<Complex64>()
    }

    /// `phi_+(e^{it})`.
    pub fn right_limit(&self, t: f64) -> Complex64 {
        self.one_sided(t, true)
    }

    /// `phi_-(e^{it})`.
    pub fn left_limit(&self, t: f64) -> Complex64 {
        self.one_sided(t, false)
    }

    /// Mean of the one-sided limits; equals `eval` away from the jumps.
    /// Sampling with this value keeps the trapezoidal rule second order
    /// when a jump sits on a grid node.
    pub fn midpoint_value(&self, t: f64) -> Complex64 {
        (self.right_limit(t) + self.left_limit(t)) * 0.5
    }

    /// Partial Fourier sum of order `d`, closed form per jump.
    pub fn fourier_coefficients(&self, d: usize) -> Result<TrigPolynomial> {
        if d < 1 {
            return Err(Error::BadDegree);
        }
        let d = d as i64;
        let background = self.background.coeffs().filter(|(n, _)| n.abs() <= d);
        let jumps = self.jumps.iter().flat_map(|j| {
            (-d..=d).map(move |n| (n, j.height * chi_coefficient(n) * rotation(j.at, n)))
        });
        Ok(TrigPolynomial::new(background.chain(jumps)))
    }

    /// Background kept exactly, each jump replaced by its Fejér mean of
    /// order `d`. This is how jump symbols enter operator experiments.
    pub fn smoothed(&self, d: usize) -> Result<TrigPolynomial> {
        let jumps = JumpSymbol {
            jumps: self.jumps.clone(),
            background: TrigPolynomial::default(),
        };
        Ok(self.background.add(&jumps.fourier_coefficients(d)?.fejer(d)))
    }
}

// coefficient factor of chi rotated to `at`: conj(at)^n
fn rotation(at: Complex64, n: i64) -> Complex64 {
    let a = at / at.norm();
    if n >= 0 {
        a.conj().powi(n as i32)
    } else {
        a.powi((-n) as i32)
    }
}

/// Any symbol the operator constructors accept.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Trig(TrigPolynomial),
    Jump(JumpSymbol),
    /// Values on the uniform grid `t_j = 2 pi j / len`.
    Sampled(Vec<Complex64>),
}

impl Symbol {
    pub fn chi() -> Self {
        Symbol::Jump(JumpSymbol::chi())
    }

    /// Pointwise value; `None` for sampled symbols off their grid.
    pub fn eval(&self, t: f64) -> Option<Complex64> {
        match self {
            Symbol::Trig(p) => Some(p.eval(t)),
            Symbol::Jump(j) => Some(j.eval(t)),
            Symbol::Sampled(v) => {
                let x = t.rem_euclid(2.0 * PI) * v.len() as f64 / (2.0 * PI);
                let j = x.round();
                ((x - j).abs() < 1e-9).then(|| v[j as usize % v.len()])
            }
        }
    }

    /// Grid values at `points` nodes; jumps on a node take their midpoint value.
    pub fn sample(&self, points: usize) -> Result<Vec<Complex64>> {
        match self {
            Symbol::Trig(p) => Ok(p.sample(points)),
            Symbol::Jump(j) => Ok((0..points)
                .map(|k| j.midpoint_value(2.0 * PI * k as f64 / points as f64))
                .collect()),
            Symbol::Sampled(v) if v.len() == points => Ok(v.clone()),
            Symbol::Sampled(v) => Err(Error::GridMismatch(v.len(), points)),
        }
    }

    pub fn as_trig(&self) -> Option<&TrigPolynomial> {
        match self {
            Symbol::Trig(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum SymbolSpec {
    Trig {
        coeffs: BTreeMap<String, Complex64>,
    },
    Chi,
    Jump {
        jumps: Vec<Jump>,
        #[serde(default)]
        background: Option<Box<SymbolSpec>>,
    },
    Sampled {
        values: Vec<Complex64>,
    },
}

impl SymbolSpec {
    fn into_symbol(self) -> std::result::Result<Symbol, String> {
        Ok(match self {
            SymbolSpec::Trig { coeffs } => Symbol::Trig(parse_coeffs(coeffs)?),
            SymbolSpec::Chi => Symbol::chi(),
            SymbolSpec::Jump { jumps, background } => {
                let background = match background.map(|b| b.into_symbol()).transpose()? {
                    None => TrigPolynomial::default(),
                    Some(Symbol::Trig(p)) => p,
                    Some(_) => return Err("jump background must be a trig symbol".into()),
                };
                if let Some(j) = jumps.iter().find(|j| (j.at.norm() - 1.0).abs() > 1e-12) {
                    return Err(format!("jump point {} is not on the circle", j.at));
                }
                Symbol::Jump(JumpSymbol { jumps, background })
            }
            SymbolSpec::Sampled { values } => Symbol::Sampled(values),
        })
    }

    fn from_symbol(s: &Symbol) -> Self {
        match s {
            Symbol::Trig(p) => SymbolSpec::Trig {
                coeffs: format_coeffs(p),
            },
            Symbol::Jump(j) if *j == JumpSymbol::chi() => SymbolSpec::Chi,
            Symbol::Jump(j) => SymbolSpec::Jump {
                jumps: j.jumps.clone(),
                background: Some(Box::new(SymbolSpec::Trig {
                    coeffs: format_coeffs(&j.background),
                })),
            },
            Symbol::Sampled(v) => SymbolSpec::Sampled { values: v.clone() },
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolSpec::from_symbol(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SymbolSpec::deserialize(d)?
            .into_symbol()
            .map_err(serde::de::Error::custom)
    }
}

/// Fejér mean of order `d` of a trig or jump symbol.
pub fn cesaro_mean(phi: &Symbol, d: usize) -> Result<TrigPolynomial> {
    if d < 1 {
        return Err(Error::BadDegree);
    }
    match phi {
        Symbol::Trig(p) => Ok(p.fejer(d)),
        Symbol::Jump(j) => Ok(j.fourier_coefficients(d)?.fejer(d)),
        Symbol::Sampled(_) => Err(Error::MethodMismatch),
    }
}

/// Splits a single-jump symbol at 1 as `phi = alpha chi + beta + remainder`,
/// with `alpha = phi_+(1) - phi_-(1)`, `beta = phi_-(1)` and the remainder
/// continuous at 1 with value 0 there.
pub fn pc_reduction_coefficients(phi: &JumpSymbol) -> Result<(Complex64, Complex64, JumpSymbol)> {
    let points = phi.jump_points();
    let one = Complex64::new(1.0, 0.0);
    if points.len() != 1 || (points[0] - one).norm() > 1e-12 {
        return Err(Error::WrongJumpSet(points.len()));
    }
    let alpha = phi.right_limit(0.0) - phi.left_limit(0.0);
    let beta = phi.left_limit(0.0);
    let remainder = phi
        .add(&JumpSymbol::chi().scale(-alpha))
        .add_trig(&TrigPolynomial::constant(-beta));
    // fold the cancelled jumps at 1 away
    let remainder = JumpSymbol {
        jumps: remainder
            .jumps
            .into_iter()
            .filter(|j| (j.at - one).norm() > 1e-12)
            .collect(),
        background: remainder.background,
    };
    Ok((alpha, beta, remainder))
}

/// Parses small symbol expressions: sums of terms built from numbers, `i`,
/// `z`, `z^k`, `zbar`, `conj(z)` and `chi`, joined by `*`. Examples:
/// `z-1`, `2*chi+3`, `z^2+conj(z)`, `chi+(z-1)`, `0.5i*z^-1`.
impl std::str::FromStr for Symbol {
    type Err = String;
    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty symbol".into());
        }
        let (chi, background) = parse_sum(&compact)?;
        Ok(if chi == ZERO {
            Symbol::Trig(background)
        } else {
            Symbol::Jump(JumpSymbol::chi().scale(chi).add_trig(&background))
        })
    }
}

// (coefficient of chi, trig part)
fn parse_sum(s: &str) -> std::result::Result<(Complex64, TrigPolynomial), String> {
    let mut chi = ZERO;
    let mut trig = TrigPolynomial::default();
    for (sign, term) in split_terms(s)? {
        let (c, p) = parse_term(term)?;
        chi += c * sign;
        trig = trig.add(&p.scale(Complex64::new(sign, 0.0)));
    }
    Ok((chi, trig))
}

fn split_terms(s: &str) -> std::result::Result<Vec<(f64, &str)>, String> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut sign = 1.0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                if i == start {
                    // unary sign
                    if b == b'-' {
                        sign = -sign;
                    }
                    start = i + 1;
                } else if !matches!(bytes[i - 1], b'^' | b'e' | b'E') {
                    out.push((sign, &s[start..i]));
                    sign = if b == b'-' { -1.0 } else { 1.0 };
                    start = i + 1;
                }
            }
            _ => {}
        }
        if depth < 0 {
            return Err(format!("unbalanced parentheses in `{s}`"));
        }
    }
    if depth != 0 {
        return Err(format!("unbalanced parentheses in `{s}`"));
    }
    if start >= s.len() {
        return Err(format!("dangling operator in `{s}`"));
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

fn parse_term(term: &str) -> std::result::Result<(Complex64, TrigPolynomial), String> {
    let one = Complex64::new(1.0, 0.0);
    let mut coeff = one;
    let mut power = 0i64;
    let mut chi = false;
    let mut group: Option<(Complex64, TrigPolynomial)> = None;
    for factor in split_factors(term)? {
        if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')) {
            if group.is_some() {
                return Err(format!("products of sums are not supported: `{term}`"));
            }
            group = Some(parse_sum(inner)?);
            continue;
        }
        match factor {
            "chi" => {
                if chi {
                    return Err(format!("chi^2 is not a supported symbol: `{term}`"));
                }
                chi = true;
            }
            "z" => power += 1,
            "zbar" | "conj(z)" => power -= 1,
            "i" => coeff *= Complex64::new(0.0, 1.0),
            f => {
                if let Some(k) = f.strip_prefix("zbar^").or_else(|| f.strip_prefix("conj(z)^")) {
                    power -= parse_exponent(k)?;
                } else if let Some(k) = f.strip_prefix("z^") {
                    power += parse_exponent(k)?;
                } else if let Some(num) = f.strip_suffix('i') {
                    let v: f64 = num.parse().map_err(|_| format!("bad factor `{f}`"))?;
                    coeff *= Complex64::new(0.0, v);
                } else {
                    let v: f64 = f.parse().map_err(|_| format!("bad factor `{f}`"))?;
                    coeff *= v;
                }
            }
        }
    }
    let monomial = TrigPolynomial::monomial(power).scale(coeff);
    match (group, chi) {
        (Some(_), true) => Err(format!("chi times a sum is not supported: `{term}`")),
        (Some((g_chi, g_trig)), false) => {
            if g_chi != ZERO && power != 0 {
                return Err(format!("chi times z^k is not a jump symbol: `{term}`"));
            }
            Ok((g_chi * coeff, g_trig.mul(&monomial)))
        }
        (None, true) if power != 0 => Err(format!("chi times z^k is not a jump symbol: `{term}`")),
        (None, true) => Ok((coeff, TrigPolynomial::default())),
        (None, false) => Ok((ZERO, monomial)),
    }
}

fn split_factors(term: &str) -> std::result::Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, b) in term.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                out.push(&term[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    if out.iter().any(|f| f.is_empty()) {
        return Err(format!("empty factor in `{term}`"));
    }
    Ok(out)
}

fn parse_exponent(k: &str) -> std::result::Result<i64, String> {
    let k = k.strip_prefix('(').and_then(|k| k.strip_suffix(')')).unwrap_or(k);
    k.parse().map_err(|_| format!("bad exponent `{k}`"))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_symbol_expressions() {
        let one = Complex64::new(1.0, 0.0);
        let z_minus_1: Symbol = "z - 1".parse().unwrap();
        assert_eq!(z_minus_1, Symbol::Trig(TrigPolynomial::new([(1, one), (0, -one)])));
        let mixed: Symbol = "z^2+conj(z)".parse().unwrap();
        assert_eq!(mixed, Symbol::Trig(TrigPolynomial::new([(2, one), (-1, one)])));
        assert_eq!("chi".parse::<Symbol>().unwrap(), Symbol::chi());
        let pc: Symbol = "2*chi+3".parse().unwrap();
        assert_eq!(
            pc,
            Symbol::Jump(JumpSymbol::chi().scale(2.0 * one).add_trig(&TrigPolynomial::constant(3.0 * one)))
        );
        let grouped: Symbol = "chi+(z-1)".parse().unwrap();
        let Symbol::Jump(j) = grouped else { panic!() };
        assert_eq!(j.background, TrigPolynomial::new([(1, one), (0, -one)]));
        let neg: Symbol = "-0.5i*z^-1 + 1e-3".parse().unwrap();
        let p = neg.as_trig().unwrap();
        assert_eq!(p.coeff(-1), Complex64::new(0.0, -0.5));
        assert_eq!(p.coeff(0), Complex64::new(1e-3, 0.0));
        assert_eq!("0".parse::<Symbol>().unwrap(), Symbol::Trig(TrigPolynomial::default()));
        for bad in ["", "z+", "chi*z", "chi*chi", "(z", "w", "z^x"] {
            assert!(bad.parse::<Symbol>().is_err(), "{bad}");
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trig_eval_and_conjugate() {
        let z = TrigPolynomial::monomial(1);
        assert_eq!(z.eval(0.0), c(1.0, 0.0));
        let p = TrigPolynomial::new([(2, c(1.0, 2.0)), (-1, c(0.5, 0.0))]);
        let q = p.conj();
        assert_eq!(q.coeff(-2), c(1.0, -2.0));
        assert_eq!(q.coeff(1), c(0.5, 0.0));
        for t in [0.1, 1.3, 4.0] {
            assert!((q.eval(t) - p.eval(t).conj()).norm() < 1e-14);
        }
        assert_eq!((p.degree_pos(), p.degree_neg(), p.bandwidth()), (2, 1, 3));
    }

    #[test]
    fn chi_values() {
        let chi = JumpSymbol::chi();
        assert!((chi.eval(PI) - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(chi.eval(0.0), c(1.0, 0.0));
        assert!((chi.eval(1e-12) - c(1.0, 0.0)).norm() < 1e-11);
        assert!(chi.eval(2.0 * PI - 1e-12).norm() < 1e-11);
        assert_eq!(chi.right_limit(0.0), c(1.0, 0.0));
        assert_eq!(chi.left_limit(0.0), c(0.0, 0.0));
    }

    #[test]
    fn fourier_coefficient_examples() {
        let chi = JumpSymbol::chi().fourier_coefficients(1).unwrap();
        assert_eq!(chi.coeff(0), c(0.5, 0.0));
        assert!((chi.coeff(1) - 1.0 / c(0.0, 2.0 * PI)).norm() < 1e-16);
        assert!((chi.coeff(-1) + 1.0 / c(0.0, 2.0 * PI)).norm() < 1e-16);

        let one = JumpSymbol::continuous(TrigPolynomial::constant(c(1.0, 0.0)));
        assert_eq!(one.fourier_coefficients(3).unwrap(), TrigPolynomial::constant(c(1.0, 0.0)));
        let z = JumpSymbol::continuous(TrigPolynomial::monomial(1));
        assert_eq!(z.fourier_coefficients(3).unwrap(), TrigPolynomial::monomial(1));
        assert_eq!(z.fourier_coefficients(0), Err(Error::BadDegree));
    }

    #[test]
    fn cesaro_examples() {
        let z = Symbol::Trig(TrigPolynomial::monomial(1));
        assert_eq!(cesaro_mean(&z, 1).unwrap().coeff(1), c(0.5, 0.0));
        let one = Symbol::Trig(TrigPolynomial::constant(c(1.0, 0.0)));
        assert_eq!(cesaro_mean(&one, 7).unwrap(), TrigPolynomial::constant(c(1.0, 0.0)));

        let phi = TrigPolynomial::new([(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        let err = |d: usize| {
            let m = phi.fejer(d);
            (0..256)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / 256.0;
                    (m.eval(t) - phi.eval(t)).norm()
                })
                .fold(0.0, f64::max)
        };
        assert!(err(64) < err(8));
    }

    #[test]
    fn pc_reduction_examples() {
        let (a, b, r) = pc_reduction_coefficients(&JumpSymbol::chi()).unwrap();
        assert_eq!((a, b), (c(1.0, 0.0), c(0.0, 0.0)));
        assert!(r.jumps.is_empty() && r.background.coeffs().count() == 0);

        let phi = JumpSymbol::chi()
            .scale(c(2.0, 0.0))
            .add_trig(&TrigPolynomial::constant(c(3.0, 0.0)));
        let (a, b, r) = pc_reduction_coefficients(&phi).unwrap();
        assert_eq!((a, b), (c(2.0, 0.0), c(3.0, 0.0)));
        assert!(r.jumps.is_empty() && r.background.coeffs().count() == 0);

        // phi_+(1) = 1, phi_-(1) = -1
        let phi = JumpSymbol::chi()
            .scale(c(2.0, 0.0))
            .add_trig(&TrigPolynomial::constant(c(-1.0, 0.0)));
        assert_eq!(phi.right_limit(0.0), c(1.0, 0.0));
        assert_eq!(phi.left_limit(0.0), c(-1.0, 0.0));
        let (a, b, _) = pc_reduction_coefficients(&phi).unwrap();
        assert_eq!((a, b), (c(2.0, 0.0), c(-1.0, 0.0)));
    }

    #[test]
    fn pc_reduction_rejects_other_jump_sets() {
        let cont = JumpSymbol::continuous(TrigPolynomial::monomial(1));
        assert_eq!(pc_reduction_coefficients(&cont).unwrap_err(), Error::WrongJumpSet(0));
        let elsewhere = JumpSymbol {
            jumps: vec![Jump {
                at: c(-1.0, 0.0),
                height: c(1.0, 0.0),
            }],
            background: TrigPolynomial::default(),
        };
        assert_eq!(pc_reduction_coefficients(&elsewhere).unwrap_err(), Error::WrongJumpSet(1));
        let two = JumpSymbol::chi().add(&elsewhere);
        assert_eq!(pc_reduction_coefficients(&two).unwrap_err(), Error::WrongJumpSet(2));
    }

    #[test]
    fn remainder_vanishes_at_one() {
        let bg = TrigPolynomial::new([(1, c(0.3, 0.1)), (-2, c(-0.2, 0.4)), (0, c(1.0, 0.0))]);
        let phi = JumpSymbol::chi().scale(c(0.7, -0.2)).add_trig(&bg);
        let (_, _, r) = pc_reduction_coefficients(&phi).unwrap();
        for t in [1e-3, -1e-3, 5e-3, -5e-3, 1e-2, -1e-2] {
            assert!(r.eval(t).norm() < 0.05);
        }
        assert!(r.eval(0.0).norm() < 1e-14);
    }

    #[test]
    fn symbol_json_forms() {
        let s: Symbol = serde_json::from_str(r#"{"type":"chi"}"#).unwrap();
        assert_eq!(s, Symbol::chi());
        let s: Symbol =
            serde_json::from_str(r#"{"type":"trig","coeffs":{"-1":[1,0],"0":[0,2]}}"#).unwrap();
        let p = s.as_trig().unwrap();
        assert_eq!(p.coeff(-1), c(1.0, 0.0));
        assert_eq!(p.coeff(0), c(0.0, 2.0));
        let s: Symbol = serde_json::from_str(
            r#"{"type":"jump","jumps":[{"at":[1,0],"height":[1,0]}],
                "background":{"type":"trig","coeffs":{"1":[1,0],"0":[-1,0]}}}"#,
        )
        .unwrap();
        let Symbol::Jump(j) = &s else { panic!() };
        assert_eq!(j.background.coeff(1), c(1.0, 0.0));
        let back: Symbol = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Symbol>(
            r#"{"type":"jump","jumps":[{"at":[0.5,0],"height":[1,0]}]}"#
        )
        .is_err());
    }

    #[test]
    fn chi_tail_matches_direct_sum() {
        let d = 256;
        let direct: f64 = (d + 1..2_000_000).map(|n| 2.0 / (4.0 * PI * PI * (n * n) as f64)).sum();
        let direct = (direct + 2.0 / (4.0 * PI * PI * 2_000_000.0)).sqrt();
        assert!((chi_tail_l2(d) - direct).abs() / direct < 1e-6);
    }
}
