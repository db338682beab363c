//! Coefficient rings for invariant polynomials: big integers and sparse
//! integer polynomials in the variables `q`, `y`, `z`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A commutative ring with exact equality.
pub trait CoeffRing: Clone + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_integer(n: &BigInt) -> Self;

    fn scale(&self, n: &BigInt) -> Self {
        self.times(&Self::from_integer(n))
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    /// Gcd of the integer coefficients (0 for the zero element).
    fn content(&self) -> BigInt;

    /// Divide every integer coefficient by `d`, which must divide them all.
    fn div_exact(&self, d: &BigInt) -> Self;

    /// True when printing needs parentheses before a multiplication.
    fn is_compound(&self) -> bool {
        false
    }
}

impl CoeffRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_integer(n: &BigInt) -> Self {
        n.clone()
    }
    fn content(&self) -> BigInt {
        self.abs()
    }
    fn div_exact(&self, d: &BigInt) -> Self {
        debug_assert!(Zero::is_zero(&(self % d)));
        self / d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Q,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Q, Var::Y, Var::Z];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

/// Exponents of (q, y, z).
pub type Monomial = [u32; 3];

/// Sparse polynomial with integer coefficients; no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MPoly {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        MPoly::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: impl Into<BigInt>, exps: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(exps, c);
        }
        MPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        MPoly::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut exps = [0; 3];
        exps[v.index()] = e;
        MPoly::monomial(1, exps)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &Monomial) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, exps: Monomial, c: BigInt) {
        if Zero::is_zero(&c) {
            return;
        }
        let entry = self.terms.entry(exps).or_default();
        *entry += c;
        if Zero::is_zero(entry) {
            self.terms.remove(&exps);
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    /// Replace `v` by `value`.
    pub fn substitute(&self, v: Var, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        let mut powers: Vec<MPoly> = vec![MPoly::one()];
        for (exps, c) in &self.terms {
            let e = exps[v.index()] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().times(value);
                powers.push(next);
            }
            let mut rest = *exps;
            rest[v.index()] = 0;
            out = out.plus(&MPoly::monomial(c.clone(), rest).times(&powers[e]));
        }
        out
    }

    pub fn swap_vars(&self, a: Var, b: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (exps, c) in &self.terms {
            let mut e = *exps;
            e.swap(a.index(), b.index());
            out.add_term(e, c.clone());
        }
        out
    }

    /// The terms whose exponent of `v` is exactly `e`, with that exponent cleared.
    pub fn coefficient_of_power(&self, v: Var, e: u32) -> MPoly {
        let mut out = MPoly::zero();
        for (exps, c) in &self.terms {
            if exps[v.index()] == e {
                let mut rest = *exps;
                rest[v.index()] = 0;
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn eval(&self, q: &BigInt, y: &BigInt, z: &BigInt) -> BigInt {
        let vals = [q, y, z];
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(vals)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum()
    }

    /// The integer value if this is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(<BigInt as Zero>::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[v.index()]).max()
    }
}

impl CoeffRing for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }
    fn one() -> Self {
        MPoly::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
    fn from_integer(n: &BigInt) -> Self {
        MPoly::constant(n.clone())
    }
    fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(<BigInt as Zero>::zero(), |g, c| g.gcd(c))
    }
    fn div_exact(&self, d: &BigInt) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c / d)).collect(),
        }
    }
    fn is_compound(&self) -> bool {
        self.terms.len() > 1
    }
}

fn total_degree(e: &Monomial) -> u32 {
    e.iter().sum()
}

impl fmt::Display for MPoly {
    /// Graded order, highest degree first; within a degree, lexicographic
    /// with q > y > z.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| total_degree(b).cmp(&total_degree(a)).then(b.cmp(a)));
        for (idx, (exps, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let vars: Vec<String> = Var::ALL
                .iter()
                .filter(|v| exps[v.index()] > 0)
                .map(|v| match exps[v.index()] {
                    1 => v.name().to_string(),
                    e => format!("{}^{}", v.name(), e),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

/// Parse the printed form back, e.g. `2*y^2 - y*z + 3`. Used by tests and
/// golden comparisons.
impl std::str::FromStr for MPoly {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut out = MPoly::zero();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let mut coef = BigInt::from(sign);
            let mut exps = [0u32; 3];
            for factor in term.split('*') {
                let (base, e) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|e| e.to_string())?),
                    None => (factor, 1),
                };
                match base {
                    "q" => exps[0] += e,
                    "y" => exps[1] += e,
                    "z" => exps[2] += e,
                    num => {
                        let n: BigInt = num.parse().map_err(|_| format!("bad factor {num:?}"))?;
                        coef *= num_traits::pow(n, e as usize);
                    }
                }
            }
            out.add_term(exps, coef);
        }
        Ok(out)
    }
}

/// Generalised binomial coefficient `C(n, k) = n(n-1)…(n-k+1)/k!`, valid for
/// negative `n`.
pub fn binomial(n: &BigInt, k: usize) -> BigInt {
    let mut num = <BigInt as One>::one();
    let mut den = <BigInt as One>::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}
