//! Exact homogeneous multivariate polynomials.
//!
//! A [`Form`] keeps its terms in a `BTreeMap` keyed by [`Monomial`], whose
//! ordering is graded lexicographic with larger exponents first, so iteration
//! yields `x^2, x*y, y^2, ...` in that order. All coefficients are exact
//! rationals and stored coefficients are never zero.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::RatMatrix;

/// Arbitrary-precision exact rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// An exponent vector `(a_1, ..., a_n)` standing for `x_1^a_1 * ... * x_n^a_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("dimension mismatch: form has {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial is not homogeneous: found terms of degree {first} and {second}")]
    Inhomogeneous { first: u32, second: u32 },
    #[error("a form needs at least one variable")]
    NoVariables,
}

/// A homogeneous polynomial in `nvars` variables of total degree `degree`.
///
/// The zero form has an empty term map and keeps its declared shape.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Form {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

/// Validates that every monomial of `terms` has `nvars` exponents and all
/// share one total degree, dropping zero coefficients.
///
/// An empty (or all-zero) map gives the zero form of degree 0.
pub fn check_homogeneous(
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
) -> Result<Form, FormError> {
    if nvars == 0 {
        return Err(FormError::NoVariables);
    }
    let mut degree = None;
    let mut kept = BTreeMap::new();
    for (m, c) in terms {
        if m.nvars() != nvars {
            return Err(FormError::DimensionMismatch { expected: nvars, found: m.nvars() });
        }
        if c.is_zero() {
            continue;
        }
        let d = m.degree();
        match degree {
            None => degree = Some(d),
            Some(first) if first != d => {
                return Err(FormError::Inhomogeneous { first: first.max(d), second: first.min(d) })
            }
            _ => {}
        }
        kept.insert(m, c);
    }
    Ok(Form { nvars, degree: degree.unwrap_or(0), terms: kept })
}

impl Form {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Form { nvars, degree, terms: BTreeMap::new() }
    }

    /// Builds a form from `(coefficient, exponents)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Form, FormError>
    where
        I: IntoIterator<Item = (Rational, Vec<u32>)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (c, e) in terms {
            *map.entry(Monomial(e)).or_insert_with(Rational::zero) += c;
        }
        check_homogeneous(nvars, map)
    }

    /// Like [`Form::from_terms`] with integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Result<Form, FormError> {
        Self::from_terms(
            nvars,
            terms.iter().map(|(c, e)| (Rational::from_integer(BigInt::from(*c)), e.to_vec())),
        )
    }

    /// Constructs a form with an explicit degree, used when the term map is
    /// already known to be homogeneous of that degree (possibly empty).
    pub(crate) fn from_parts(nvars: usize, degree: u32, terms: BTreeMap<Monomial, Rational>) -> Form {
        debug_assert!(terms.iter().all(|(m, c)| m.degree() == degree && !c.is_zero()));
        Form { nvars, degree, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The stored coefficient of `m`, or zero.
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Exact value at `point`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, FormError> {
        if point.len() != self.nvars {
            return Err(FormError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let d = self.degree as usize;
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .map(|p| {
                let mut pw = Vec::with_capacity(d + 1);
                pw.push(Rational::one());
                for k in 1..=d {
                    let next = &pw[k - 1] * p;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term *= &powers[i][e as usize];
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Expands `F(V t)`, i.e. substitutes `x_i = sum_j v_ij t_j`.
    ///
    /// Powers of each linear image are computed once and shared by all terms.
    pub fn substitute_linear(&self, v: &RatMatrix) -> Result<Form, FormError> {
        if v.n() != self.nvars {
            return Err(FormError::DimensionMismatch { expected: self.nvars, found: v.n() });
        }
        let n = self.nvars;
        let mut max_exp = vec![0u32; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let images: Vec<TermMap> = (0..n)
            .map(|i| {
                let mut img = TermMap::new();
                for (j, c) in v.row(i).iter().enumerate() {
                    if !c.is_zero() {
                        img.insert(Monomial::var(n, j).0, c.clone());
                    }
                }
                img
            })
            .collect();
        let powers: Vec<Vec<TermMap>> = images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let mut pw = vec![unit(n)];
                for k in 1..=max_exp[i] as usize {
                    let next = poly_mul(&pw[k - 1], img);
                    pw.push(next);
                }
                pw
            })
            .collect();

        let mut out = TermMap::new();
        for (m, c) in &self.terms {
            let mut prod = unit(n);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    prod = poly_mul(&prod, &powers[i][e as usize]);
                }
            }
            for (mono, coeff) in prod {
                *out.entry(mono).or_insert_with(Rational::zero) += coeff * c;
            }
        }
        let terms = out
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Monomial(e), c))
            .collect();
        Ok(Form { nvars: n, degree: self.degree, terms })
    }

    /// True iff no coefficient is negative. The zero form qualifies.
    pub fn is_trivially_positive(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// True iff the value at the barycenter `(1/n, ..., 1/n)` is negative,
    /// which has the sign of the coefficient sum.
    pub fn is_trivially_negative(&self) -> bool {
        self.coefficient_sum().is_negative()
    }

    /// Rescales by a positive rational so the coefficients become coprime
    /// integers.
    pub fn normalize_content(&self) -> Form {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
            gcd = gcd.gcd(c.numer());
        }
        let scale = Rational::new(lcm, gcd);
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * &scale)).collect();
        Form { nvars: self.nvars, degree: self.degree, terms }
    }

    pub fn neg(&self) -> Form {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Form { nvars: self.nvars, degree: self.degree, terms }
    }

    pub fn scale(&self, factor: &Rational) -> Form {
        if factor.is_zero() {
            return Form::zero(self.nvars, self.degree);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect();
        Form { nvars: self.nvars, degree: self.degree, terms }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let ctx = crate::parser::VariableContext::new(names).map_err(|_| fmt::Error)?;
        f.write_str(&crate::parser::format_form(self, &ctx).map_err(|_| fmt::Error)?)
    }
}

type TermMap = HashMap<Vec<u32>, Rational>;

fn unit(n: usize) -> TermMap {
    let mut m = TermMap::new();
    m.insert(vec![0; n], Rational::one());
    m
}

fn poly_mul(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::with_capacity(a.len() * b.len());
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}
