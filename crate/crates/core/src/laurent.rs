//! Exact Laurent polynomials over the integers in variables `x_i`, `y_j`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose order is the
//! lexicographic order on exponent vectors (x variables before y variables).
//! Serialization walks that map from the largest monomial down.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// A formal variable: cluster/boundary variables `X(i)` and coefficients `Y(j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(u32),
    Y(u32),
}

/// A Laurent monomial with integer exponents; zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<(Var, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn x(i: u32) -> Self {
        Self::var(Var::X(i))
    }

    pub fn y(j: u32) -> Self {
        Self::var(Var::Y(j))
    }

    pub fn power(v: Var, e: i32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    /// Builds a monomial from (variable, exponent) pairs; repeated variables add up.
    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: map.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn exponent(&self, v: Var) -> i32 {
        match self.exps.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e >= 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|&(_, e)| e as i64).sum()
    }

    fn merge(&self, other: &Monomial, sign: i32) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let a = self.exps.get(i);
            let b = other.exps.get(j);
            match (a, b) {
                (Some(&(va, ea)), Some(&(vb, eb))) if va == vb => {
                    let e = ea + sign * eb;
                    if e != 0 {
                        out.push((va, e));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(va, ea)), Some(&(vb, _))) if va < vb => {
                    out.push((va, ea));
                    i += 1;
                }
                (Some(&(va, ea)), None) => {
                    out.push((va, ea));
                    i += 1;
                }
                (_, Some(&(vb, eb))) => {
                    out.push((vb, sign * eb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial { exps: out }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.merge(other, -1)
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    /// Componentwise minimum of exponents, absent variables counting as zero.
    pub fn gcd_exponents(&self, other: &Monomial) -> Monomial {
        let mut pairs = Vec::new();
        for &(v, e) in &self.exps {
            pairs.push((v, e.min(other.exponent(v))));
        }
        for &(v, e) in &other.exps {
            if self.exponent(v) == 0 {
                pairs.push((v, e.min(0)));
            }
        }
        Monomial::from_pairs(pairs)
    }

    /// Keeps only the variables accepted by `keep`.
    pub fn restrict<F: Fn(Var) -> bool>(&self, keep: F) -> Monomial {
        Monomial {
            exps: self.exps.iter().copied().filter(|&(v, _)| keep(v)).collect(),
        }
    }

    pub fn to_string_with(&self, names: &VarNames) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.factors(names).join(" * ")
    }

    fn factors(&self, names: &VarNames) -> Vec<String> {
        self.exps
            .iter()
            .map(|&(v, e)| {
                let n = names.name(v);
                if e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect()
    }

    /// Parses a product such as `x1 * x4^2 * y3` (the `*` separators are optional).
    pub fn parse(s: &str, names: &VarNames) -> Result<Monomial, ParseError> {
        let poly = LaurentPolynomial::parse(s, names)?;
        let mut it = poly.terms.into_iter();
        match (it.next(), it.next()) {
            (Some((m, c)), None) if c.is_one() => Ok(m),
            _ => Err(ParseError::NotMonomial(s.to_string())),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        return ea.cmp(&0);
                    } else {
                        return 0.cmp(&eb);
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&VarNames::default()))
    }
}

/// Display names for variables. Unnamed variables print as `x{i+1}` / `y{j+1}`.
#[derive(Clone, Debug, Default)]
pub struct VarNames {
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl VarNames {
    pub fn new(x: Vec<String>, y: Vec<String>) -> Self {
        VarNames { x, y }
    }

    pub fn name(&self, v: Var) -> String {
        match v {
            Var::X(i) => self.x.get(i as usize).cloned().unwrap_or_else(|| format!("x{}", i + 1)),
            Var::Y(j) => self.y.get(j as usize).cloned().unwrap_or_else(|| format!("y{}", j + 1)),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        if let Some(i) = self.x.iter().position(|n| n == name) {
            return Some(Var::X(i as u32));
        }
        if let Some(j) = self.y.iter().position(|n| n == name) {
            return Some(Var::Y(j as u32));
        }
        let (head, tail) = name.split_at(1);
        let k: u32 = tail.parse().ok()?;
        if k == 0 {
            return None;
        }
        match head {
            "x" if self.x.is_empty() => Some(Var::X(k - 1)),
            "y" if self.y.is_empty() => Some(Var::Y(k - 1)),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    Unexpected(char, usize),
    #[error("unknown variable {0:?}")]
    UnknownVar(String),
    #[error("malformed exponent at byte {0}")]
    Exponent(usize),
    #[error("not a single monomial: {0:?}")]
    NotMonomial(String),
    #[error("empty input")]
    Empty,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible in the Laurent ring")]
    NotDivisible,
    #[error("cannot invert non-unit value {0} substituted for a negative power")]
    NonUnitInverse(String),
}

/// What to substitute for a variable in [`LaurentPolynomial::specialize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subst {
    Int(BigInt),
    Var(Var),
}

/// An exact Laurent polynomial; no zero coefficient is ever stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(1, m)
    }

    pub fn var(v: Var) -> Self {
        Self::from_monomial(Monomial::var(v))
    }

    pub fn term<T: Into<BigInt>>(c: T, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPolynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn as_monomial(&self) -> Option<&Monomial> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((m, c)), None) if c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn divide_by_monomial(&self, m: &Monomial) -> Self {
        self.mul_monomial(&m.inv())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd_exponents(m))
    }

    /// Exact quotient `self / q` in the Laurent ring, or `NotDivisible`.
    ///
    /// Both sides are shifted into the polynomial ring with their monomial
    /// content removed; the quotient then exists iff the shifted divisor
    /// divides the shifted dividend, which lex-leading-term division decides.
    pub fn exact_divide(&self, q: &LaurentPolynomial) -> Result<LaurentPolynomial, AlgebraError> {
        if q.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mp = self.monomial_content();
        let mq = q.monomial_content();
        let mut r = self.divide_by_monomial(&mp);
        let q0 = q.divide_by_monomial(&mq);
        let (lm, lc) = q0.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = r.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let tm = rm.div(&lm);
            if !tm.is_polynomial() {
                return Err(AlgebraError::NotDivisible);
            }
            let (tc, rem) = (&rc / &lc, &rc % &lc);
            if !rem.is_zero() {
                return Err(AlgebraError::NotDivisible);
            }
            let t = LaurentPolynomial::term(tc, tm);
            r = &r - &(&q0 * &t);
            quot = &quot + &t;
        }
        Ok(quot.mul_monomial(&mp.div(&mq)))
    }

    /// Substitutes integers or variables for variables.
    pub fn specialize(&self, assignment: &HashMap<Var, Subst>) -> Result<Self, AlgebraError> {
        if assignment.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut pairs = Vec::new();
            for (v, e) in m.iter() {
                match assignment.get(&v) {
                    None => pairs.push((v, e)),
                    Some(Subst::Var(w)) => pairs.push((*w, e)),
                    Some(Subst::Int(k)) => {
                        if e < 0 {
                            if k.abs() != BigInt::one() {
                                return Err(AlgebraError::NonUnitInverse(k.to_string()));
                            }
                            if e % 2 != 0 {
                                coeff *= k;
                            }
                        } else {
                            coeff *= num_traits::pow(k.clone(), e as usize);
                        }
                    }
                }
            }
            out.add_term(Monomial::from_pairs(pairs), coeff);
        }
        Ok(out)
    }

    /// Sets every variable accepted by `pred` to 1.
    pub fn set_to_one<F: Fn(Var) -> bool>(&self, pred: F) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.restrict(|v| !pred(v)), c.clone());
        }
        out
    }

    /// Evaluates modulo a prime `p < 2^63` with the given variable values.
    /// Values must be nonzero mod `p` for variables with negative exponents.
    pub fn eval_mod<F: Fn(Var) -> u64>(&self, p: u64, value: F) -> u64 {
        let mut acc = 0u64;
        let pb = BigInt::from(p);
        for (m, c) in &self.terms {
            let mut t = {
                let r = ((c % &pb) + &pb) % &pb;
                r.to_u64().unwrap()
            };
            for (v, e) in m.iter() {
                let base = value(v) % p;
                let b = if e < 0 { inv_mod(base, p) } else { base };
                t = mul_mod(t, pow_mod(b, e.unsigned_abs() as u64, p), p);
            }
            acc = (acc + t) % p;
        }
        acc
    }

    pub fn to_string_with(&self, names: &VarNames) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&abs.to_string());
            for f in m.factors(names) {
                out.push_str(" * ");
                out.push_str(&f);
            }
        }
        out
    }

    /// Parses a sum of terms such as `2 * x1^2 * y1 - x2^-1 + 3`.
    pub fn parse(s: &str, names: &VarNames) -> Result<LaurentPolynomial, ParseError> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let mut out = LaurentPolynomial::zero();
        let mut seen = false;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && (bytes[*pos] as char).is_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            let mut sign = BigInt::one();
            if seen || bytes[pos] == b'-' || bytes[pos] == b'+' {
                match bytes[pos] {
                    b'+' => pos += 1,
                    b'-' => {
                        sign = -sign;
                        pos += 1
                    }
                    c if seen => return Err(ParseError::Unexpected(c as char, pos)),
                    _ => {}
                }
            }
            // one term: factors separated by optional '*'
            let mut coeff = sign;
            let mut pairs = Vec::new();
            let mut any = false;
            loop {
                skip_ws(&mut pos);
                if pos >= bytes.len() {
                    break;
                }
                let c = bytes[pos] as char;
                if c == '*' {
                    pos += 1;
                    continue;
                }
                if c.is_ascii_digit() {
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let k: BigInt = s[start..pos].parse().unwrap();
                    coeff *= k;
                    any = true;
                } else if c.is_ascii_alphabetic() || c == '_' {
                    let start = pos;
                    while pos < bytes.len() && ((bytes[pos] as char).is_ascii_alphanumeric() || bytes[pos] == b'_') {
                        pos += 1;
                    }
                    let name = &s[start..pos];
                    let v = names
                        .lookup(name)
                        .ok_or_else(|| ParseError::UnknownVar(name.to_string()))?;
                    let mut e = 1i32;
                    skip_ws(&mut pos);
                    if pos < bytes.len() && bytes[pos] == b'^' {
                        pos += 1;
                        skip_ws(&mut pos);
                        let estart = pos;
                        if pos < bytes.len() && bytes[pos] == b'-' {
                            pos += 1;
                        }
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        e = s[estart..pos].parse().map_err(|_| ParseError::Exponent(estart))?;
                    }
                    pairs.push((v, e));
                    any = true;
                } else if c == '+' || c == '-' {
                    break;
                } else {
                    return Err(ParseError::Unexpected(c, pos));
                }
            }
            if !any {
                return Err(ParseError::Empty);
            }
            out.add_term(Monomial::from_pairs(pairs), coeff);
            seen = true;
        }
        if !seen {
            return Err(ParseError::Empty);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&VarNames::default()))
    }
}

impl<'a> Add<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self + &rhs
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime via Fermat.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> LaurentPolynomial {
        LaurentPolynomial::var(Var::X(i - 1))
    }

    fn p(s: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, &VarNames::default()).unwrap()
    }

    #[test]
    fn inverse_monomials_cancel() {
        let a = x(1);
        let b = LaurentPolynomial::from_monomial(Monomial::x(0).inv());
        assert_eq!(&a * &b, LaurentPolynomial::one());
    }

    #[test]
    fn cancellation() {
        assert_eq!(&(&x(1) + &x(2)) + &(-&x(2)), x(1));
    }

    #[test]
    fn divide_by_monomial_shifts() {
        let q = p("x1^2 + x2").divide_by_monomial(&Monomial::x(0));
        assert_eq!(q, p("x1 + x2 * x1^-1"));
        let m = Monomial::from_pairs([(Var::X(0), 1), (Var::X(1), 1)]);
        assert_eq!(p("x1*x2").divide_by_monomial(&m), LaurentPolynomial::one());
    }

    #[test]
    fn exact_divide_examples() {
        assert_eq!(p("x1^2 - x2^2").exact_divide(&p("x1 - x2")).unwrap(), p("x1 + x2"));
        assert_eq!(p("x1 + x2").exact_divide(&x(3)).unwrap(), p("x1 * x3^-1 + x2 * x3^-1"));
        assert_eq!(p("x1 + x2").exact_divide(&p("x1 + 1")), Err(AlgebraError::NotDivisible));
        assert_eq!(p("2*x1").exact_divide(&p("3")), Err(AlgebraError::NotDivisible));
        assert_eq!(
            p("x1^-2 * x2 + x1^-1 * x3").exact_divide(&p("x2 + x1 * x3")).unwrap(),
            p("x1^-2")
        );
    }

    #[test]
    fn specialize_examples() {
        let mut a = HashMap::new();
        a.insert(Var::X(6), Subst::Int(BigInt::one()));
        assert_eq!(p("x1 * x7").specialize(&a).unwrap(), x(1));
        assert_eq!(p("x1 * x7").specialize(&HashMap::new()).unwrap(), p("x1*x7"));
        let mut b = HashMap::new();
        b.insert(Var::X(0), Subst::Int(BigInt::from(2)));
        assert!(p("x1^-1").specialize(&b).is_err());
        let mut c = HashMap::new();
        c.insert(Var::X(0), Subst::Int(BigInt::from(-1)));
        assert_eq!(p("x1^-1 * x2 + x1^2").specialize(&c).unwrap(), p("1 - x2"));
    }

    #[test]
    fn serialization_round_trip() {
        let s = "3 * x1^2 * y1 + 1 - 2 * x2^-1";
        let q = p(s);
        assert_eq!(q.to_string(), s);
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn lex_order_prefers_earlier_variables() {
        let a = Monomial::parse("x1", &VarNames::default()).unwrap();
        let b = Monomial::parse("x2^5", &VarNames::default()).unwrap();
        let c = Monomial::parse("x1 * y1", &VarNames::default()).unwrap();
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::one() > Monomial::x(1).inv());
    }

    #[test]
    fn named_variables() {
        let names = VarNames::new(vec!["x3".into(), "x10".into()], vec!["y3".into()]);
        let q = LaurentPolynomial::parse("x10^2 * y3 + x3", &names).unwrap();
        assert_eq!(q.to_string_with(&names), "1 * x3 + 1 * x10^2 * y3");
        assert_eq!(names.lookup("x1"), None);
    }

    #[test]
    fn eval_mod_matches_integer_evaluation() {
        let q = p("3 * x1^2 * x2^-1 + 5");
        let v = q.eval_mod(1_000_000_007, |v| match v {
            Var::X(0) => 4,
            _ => 2,
        });
        assert_eq!(v, 3 * 16 / 2 + 5);
    }
}
