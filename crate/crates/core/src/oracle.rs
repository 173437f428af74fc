//! Brute-force checks that do not go through the engine.
//!
//! Grid sampling evaluates a form at every point of `T_n` with coordinates in
//! `(1/D) Z`. A negative sample proves the form is not PSD; a clean grid is
//! only evidence.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::form::{Form, FormError, Monomial, Rational};
use crate::subdivision::{NormalizedMatrix, SchemeError};
use crate::rational;

/// All points `(a_1/D, ..., a_n/D)` with `a_i >= 0` and `sum a_i = D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub n: usize,
    pub denominator: u32,
}

impl GridSpec {
    pub fn new(n: usize, denominator: u32) -> Self {
        GridSpec { n, denominator }
    }

    /// Numerator vectors in lexicographically decreasing order.
    pub fn numerators(&self) -> Vec<Vec<u32>> {
        fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
            if left == 1 {
                prefix.push(remaining);
                out.push(prefix.clone());
                prefix.pop();
                return;
            }
            for a in (0..=remaining).rev() {
                prefix.push(a);
                rec(prefix, left - 1, remaining - a, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if self.n > 0 {
            rec(&mut Vec::with_capacity(self.n), self.n, self.denominator, &mut out);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.numerators().len()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridResult {
    pub min_value: Rational,
    pub argmin: Vec<Rational>,
    pub negative_found: bool,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("grid dimension {grid} does not match form with {form} variables")]
    DimensionMismatch { grid: usize, form: usize },
    #[error("grid denominator must be at least 1")]
    BadDenominator,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Integer value of `f` at an integer point, `f` having integer-scaled
/// coefficients `coeffs` over `monomials`.
fn eval_integer(monomials: &[(Vec<u32>, BigInt)], point: &[u32], d: usize) -> BigInt {
    let powers: Vec<Vec<BigInt>> = point
        .iter()
        .map(|&p| {
            let base = BigInt::from(p);
            let mut pw = vec![BigInt::one()];
            for k in 1..=d {
                let next = &pw[k - 1] * &base;
                pw.push(next);
            }
            pw
        })
        .collect();
    monomials.iter().fold(BigInt::zero(), |acc, (e, c)| {
        let mut term = c.clone();
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                term *= &powers[i][k as usize];
            }
        }
        acc + term
    })
}

/// Evaluates `f` exactly at every grid point and reports the minimum.
///
/// Ties keep the lexicographically smallest point.
pub fn grid_classify(f: &Form, grid: GridSpec) -> Result<GridResult, OracleError> {
    if grid.n != f.nvars() {
        return Err(OracleError::DimensionMismatch { grid: grid.n, form: f.nvars() });
    }
    if grid.denominator < 1 {
        return Err(OracleError::BadDenominator);
    }
    // f(a/D) = f(a) / D^d: compare integer values f(a) with cleared denominators.
    let lcm = f.terms().fold(BigInt::one(), |acc, (_, c)| num_integer::Integer::lcm(&acc, c.denom()));
    let monomials: Vec<(Vec<u32>, BigInt)> = f
        .terms()
        .map(|(m, c)| (m.exponents().to_vec(), c.numer() * (&lcm / c.denom())))
        .collect();
    let d = f.degree() as usize;
    let mut best: Option<(BigInt, Vec<u32>)> = None;
    let points = grid.numerators();
    for a in &points {
        let v = eval_integer(&monomials, a, d);
        let better = match &best {
            None => true,
            Some((bv, ba)) => v < *bv || (v == *bv && a < ba),
        };
        if better {
            best = Some((v, a.clone()));
        }
    }
    let (value, a) = best.expect("grid is nonempty");
    let scale = Rational::new(lcm * BigInt::from(grid.denominator).pow(f.degree()), BigInt::one());
    let min_value = Rational::from_integer(value) / scale;
    let den = grid.denominator as i64;
    Ok(GridResult {
        negative_found: min_value.is_negative(),
        min_value,
        argmin: a.iter().map(|&x| rational(x as i64, den)).collect(),
        points: points.len(),
    })
}

/// `A^m` for the first central-fan matrix `A = [[1,0,1/3],[0,1,1/3],[0,0,1/3]]`,
/// written in closed form: third column `((1-3^-m)/2, (1-3^-m)/2, 3^-m)`.
pub fn closed_form_central_power(m: u32) -> Result<NormalizedMatrix, SchemeError> {
    if m < 1 {
        return Err(SchemeError::BadPower(m));
    }
    let inv = Rational::new(BigInt::one(), BigInt::from(3).pow(m));
    let side = (Rational::one() - &inv) / rational(2, 1);
    let z = Rational::zero();
    let o = Rational::one();
    let m = crate::matrix::RatMatrix::from_rows(vec![
        vec![o.clone(), z.clone(), side.clone()],
        vec![z.clone(), o, side],
        vec![z.clone(), z, inv],
    ])?;
    NormalizedMatrix::new(m)
}

/// Stored coefficient of `monomial` in `f`, or zero.
pub fn coefficient_of(f: &Form, monomial: &Monomial) -> Rational {
    f.coefficient(monomial)
}
