//! Polynomials in `n` written in the binomial basis `Σ c_k·C(n,k)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;


use crate::ring::{binomial, factorial, CoeffRing};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinPoly<R> {
    coeffs: Vec<R>,
}

impl<R: CoeffRing> BinPoly<R> {
    /// Trailing zero coefficients are trimmed.
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(R::is_zero) {
            coeffs.pop();
        }
        BinPoly { coeffs }
    }

    pub fn zero() -> Self {
        BinPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// `c_k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// Degree in `n`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, n: &BigInt) -> R {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(R::zero(), |acc, (k, c)| acc.plus(&c.scale(&binomial(n, k))))
    }

    pub fn eval_i64(&self, n: i64) -> R {
        self.eval(&BigInt::from(n))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        BinPoly::new((0..len).map(|k| self.coeff(k).plus(&other.coeff(k))).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        BinPoly::new(self.coeffs.iter().map(|x| x.times(c)).collect())
    }

    pub fn map<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> BinPoly<S> {
        BinPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Expansion in powers of `n` as `(numerators, denominator)`: the
    /// polynomial equals `Σ numerators[i]·n^i / denominator`, in lowest terms.
    pub fn to_monomial(&self) -> (Vec<R>, BigInt) {
        let Some(d) = self.degree() else {
            return (Vec::new(), BigInt::one());
        };
        let big_d = factorial(d);
        let mut num = vec![R::zero(); d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // d!/k! · n(n-1)…(n-k+1)
            let falling = falling_factorial_coeffs(k);
            let mult = &big_d / factorial(k);
            for (i, f) in falling.iter().enumerate() {
                if !f.is_zero() {
                    num[i] = num[i].plus(&c.scale(&(f * &mult)));
                }
            }
        }
        let g = num.iter().fold(big_d.clone(), |g, c| g.gcd(&c.content()));
        let num = num.iter().map(|c| c.div_exact(&g)).collect();
        (num, big_d / g)
    }

    /// Human-readable monomial form, e.g. `(n^3 - 3*n^2 + 2*n)/6`.
    pub fn monomial_string(&self) -> String {
        let (num, den) = self.to_monomial();
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (i, c) in num.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match i {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{i}"),
            };
            parts.push(signed_term(c, &power));
        }
        let body = join_signed(&parts);
        if num_traits::One::is_one(&den) {
            body
        } else if parts.len() == 1 && !parts[0].0 {
            format!("{body}/{den}")
        } else {
            format!("({body})/{den}")
        }
    }
}

/// Coefficients of `n(n-1)…(n-k+1)` in increasing powers of `n`.
fn falling_factorial_coeffs(k: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for i in 0..k {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * BigInt::from(i);
        }
        poly = next;
    }
    poly
}

/// (is_negative, magnitude text) for `c·basis`; `basis` may be empty.
fn signed_term<R: CoeffRing>(c: &R, basis: &str) -> (bool, String) {
    let text = c.to_string();
    if c.is_compound() {
        let s = if basis.is_empty() {
            text
        } else {
            format!("({text})*{basis}")
        };
        return (false, s);
    }
    let (neg, mag) = match text.strip_prefix('-') {
        Some(m) => (true, m.to_string()),
        None => (false, text),
    };
    let s = if basis.is_empty() {
        mag
    } else if mag == "1" {
        basis.to_string()
    } else {
        format!("{mag}*{basis}")
    };
    (neg, s)
}

fn join_signed(parts: &[(bool, String)]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, s)) in parts.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(s);
    }
    out
}

impl<R: CoeffRing> fmt::Display for BinPoly<R> {
    /// `C(n,1) + 2*C(n,2) + C(n,3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<(bool, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let basis = if k == 0 { String::new() } else { format!("C(n,{k})") };
                signed_term(c, &basis)
            })
            .collect();
        f.write_str(&join_signed(&parts))
    }
}

impl<R: CoeffRing> fmt::Debug for BinPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinPoly[{self}]")
    }
}
