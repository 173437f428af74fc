//! Dense integer forms and fast linear substitution.
//!
//! The engine only needs each substituted form up to a positive factor, since
//! both sign classifiers are invariant under positive scaling. Here a form is a
//! dense vector of integer coefficients over all monomials of its degree, and a
//! substitution matrix is factored into elementary steps (variable swap,
//! variable scaling, shear `x_i <- x_i + c*x_j`). A shear acts on each
//! `(x_i, x_j)` slice of the coefficient vector as a univariate Taylor shift,
//! which needs only additions and small multiplications.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::form::{Form, Monomial, Rational};
use crate::matrix::RatMatrix;

/// All exponent vectors of a fixed degree, in the canonical graded-lex order.
#[derive(Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// For each pair `i < j`: slices of indices with every other exponent
    /// fixed, ordered by the exponent of `x_i` from 0 upwards.
    pair_slices: Vec<Vec<Vec<usize>>>,
}

fn enumerate_exponents(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
    out
}

fn pair_id(nvars: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < nvars);
    i * nvars + j
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Arc<Self> {
        assert!(nvars >= 1);
        let exponents = enumerate_exponents(nvars, degree);
        let index: HashMap<Vec<u32>, usize> =
            exponents.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
        let mut pair_slices = vec![Vec::new(); nvars * nvars];
        for i in 0..nvars {
            for j in i + 1..nvars {
                let slices = exponents
                    .iter()
                    .filter(|e| e[i] == 0)
                    .map(|e| {
                        let s = e[j];
                        (0..=s)
                            .map(|a| {
                                let mut f = e.clone();
                                f[i] = a;
                                f[j] = s - a;
                                index[&f]
                            })
                            .collect()
                    })
                    .collect();
                pair_slices[pair_id(nvars, i, j)] = slices;
            }
        }
        Arc::new(MonomialBasis { nvars, degree, exponents, index, pair_slices })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self, k: usize) -> &[u32] {
        &self.exponents[k]
    }
}

/// A form with integer coefficients over a shared [`MonomialBasis`].
#[derive(Clone, Debug)]
pub struct DenseForm {
    basis: Arc<MonomialBasis>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for DenseForm {
    fn eq(&self, other: &Self) -> bool {
        self.basis.nvars == other.basis.nvars
            && self.basis.degree == other.basis.degree
            && self.coeffs == other.coeffs
    }
}

impl Eq for DenseForm {}

impl DenseForm {
    /// Clears denominators of `f`, returning the integer form and the positive
    /// multiplier `s` with `dense = s * f`.
    pub fn from_form(f: &Form, basis: &Arc<MonomialBasis>) -> (Self, BigInt) {
        assert_eq!(f.nvars(), basis.nvars);
        assert!(f.is_zero() || f.degree() == basis.degree);
        let lcm = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut coeffs = vec![BigInt::zero(); basis.len()];
        for (m, c) in f.terms() {
            let k = basis.index[m.exponents()];
            coeffs[k] = c.numer() * (&lcm / c.denom());
        }
        (DenseForm { basis: basis.clone(), coeffs }, lcm)
    }

    pub fn to_form(&self) -> Form {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Monomial::new(self.basis.exponents[k].clone()), Rational::from_integer(c.clone())))
            .collect();
        Form::from_parts(self.basis.nvars, self.basis.degree, terms)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_trivially_positive(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn is_trivially_negative(&self) -> bool {
        self.coeffs.iter().sum::<BigInt>().is_negative()
    }

    /// Divides by the gcd of all coefficients.
    pub fn normalize_content(&mut self) {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    return;
                }
            }
        }
        if g.is_zero() {
            return;
        }
        for c in &mut self.coeffs {
            if !c.is_zero() {
                *c /= &g;
            }
        }
    }

    fn swap_vars(&mut self, i: usize, j: usize) {
        let mut out = vec![BigInt::zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter_mut().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = self.basis.exponents[k].clone();
            e.swap(i, j);
            out[self.basis.index[&e]] = std::mem::take(c);
        }
        self.coeffs = out;
    }

    /// `G(x) -> q^d * G(..., (p/q) x_i, ...)`.
    fn scale_var(&mut self, i: usize, p: &BigInt, q: &BigInt) {
        let d = self.basis.degree as usize;
        let p_pow = powers(p, d);
        let q_pow = powers(q, d);
        let factors: Vec<BigInt> = (0..=d).map(|a| &p_pow[a] * &q_pow[d - a]).collect();
        for (k, c) in self.coeffs.iter_mut().enumerate() {
            if !c.is_zero() {
                *c *= &factors[self.basis.exponents[k][i] as usize];
            }
        }
    }

    /// `G(x) -> q^d * G(..., x_i + (p/q) x_j, ...)`.
    fn shear(&mut self, target: usize, source: usize, p: &BigInt, q: &BigInt) {
        let d = self.basis.degree as usize;
        let (lo, hi) = if target < source { (target, source) } else { (source, target) };
        let slices = &self.basis.pair_slices[pair_id(self.basis.nvars, lo, hi)];
        let q_pow = (!q.is_one()).then(|| powers(q, d));
        let mut buf: Vec<BigInt> = Vec::with_capacity(d + 1);
        for slice in slices {
            let s = slice.len() - 1;
            if slice.iter().all(|&k| self.coeffs[k].is_zero()) {
                continue;
            }
            // buf[a] is the coefficient of x_target^a x_source^(s-a)
            buf.clear();
            if target == lo {
                buf.extend(slice.iter().map(|&k| std::mem::take(&mut self.coeffs[k])));
            } else {
                buf.extend(slice.iter().rev().map(|&k| std::mem::take(&mut self.coeffs[k])));
            }
            if let Some(qp) = &q_pow {
                for (a, c) in buf.iter_mut().enumerate() {
                    if !c.is_zero() {
                        *c *= &qp[s - a];
                    }
                }
            }
            taylor_shift(&mut buf, p);
            if let Some(qp) = &q_pow {
                for (a, c) in buf.iter_mut().enumerate() {
                    if !c.is_zero() {
                        *c *= &qp[d - s + a];
                    }
                }
            }
            let iter: Box<dyn Iterator<Item = &usize>> =
                if target == lo { Box::new(slice.iter()) } else { Box::new(slice.iter().rev()) };
            for (&k, c) in iter.zip(buf.drain(..)) {
                self.coeffs[k] = c;
            }
        }
    }
}

fn powers(base: &BigInt, d: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(BigInt::one());
    for k in 1..=d {
        let next = &out[k - 1] * base;
        out.push(next);
    }
    out
}

/// Replaces the coefficients of `g(z)` by those of `g(z + p)`.
fn taylor_shift(c: &mut [BigInt], p: &BigInt) {
    let s = c.len() - 1;
    if p.is_zero() {
        return;
    }
    let unit = if p.is_one() {
        Some(true)
    } else if (-p).is_one() {
        Some(false)
    } else {
        None
    };
    for i in 0..s {
        for k in (i..s).rev() {
            let (left, right) = c.split_at_mut(k + 1);
            let next = &right[0];
            if next.is_zero() {
                continue;
            }
            match unit {
                Some(true) => left[k] += next,
                Some(false) => left[k] -= next,
                None => left[k] += next * p,
            }
        }
    }
}

/// One step of a factored substitution, acting as `G -> G o E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    /// Exchange variables `i` and `j`.
    Swap(usize, usize),
    /// `x_var <- (num/den) x_var`, `den > 0`.
    Scale { var: usize, num: BigInt, den: BigInt },
    /// `x_target <- x_target + (num/den) x_source`, `den > 0`.
    Shear { target: usize, source: usize, num: BigInt, den: BigInt },
}

impl ElementaryOp {
    /// The matrix `E` of this step.
    pub fn matrix(&self, n: usize) -> RatMatrix {
        let mut rows = RatMatrix::identity(n).rows();
        match self {
            ElementaryOp::Swap(i, j) => rows.swap(*i, *j),
            ElementaryOp::Scale { var, num, den } => {
                rows[*var][*var] = Rational::new(num.clone(), den.clone())
            }
            ElementaryOp::Shear { target, source, num, den } => {
                rows[*target][*source] = Rational::new(num.clone(), den.clone())
            }
        }
        RatMatrix::from_rows(rows).expect("square")
    }
}

/// A nonsingular matrix factored as `V = E_1 E_2 ... E_r`, so that
/// `F(V t)` is obtained by applying `E_1` first.
#[derive(Clone, Debug)]
pub struct Substitution {
    n: usize,
    ops: Vec<ElementaryOp>,
}

impl Substitution {
    /// Factors `v` by Gauss-Jordan row reduction. Returns `None` if `v` is
    /// singular.
    pub fn new(v: &RatMatrix) -> Option<Self> {
        let n = v.n();
        let mut a = v.rows();
        // row operations R_k with R_m ... R_1 V = I; V = R_1^-1 ... R_m^-1
        let mut ops = Vec::new();
        for k in 0..n {
            let pivot = (k..n)
                .find(|&r| a[r][k].is_one())
                .or_else(|| (k..n).find(|&r| !a[r][k].is_zero()))?;
            if pivot != k {
                a.swap(pivot, k);
                ops.push(ElementaryOp::Swap(pivot, k));
            }
            let pv = a[k][k].clone();
            if !pv.is_one() {
                for x in a[k].iter_mut() {
                    *x /= &pv;
                }
                // inverse of scaling row k by 1/pv
                let (num, den) = sign_split(&pv);
                ops.push(ElementaryOp::Scale { var: k, num, den });
            }
            for r in 0..n {
                if r == k || a[r][k].is_zero() {
                    continue;
                }
                let factor = a[r][k].clone();
                let pivot_row = a[k].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
                // inverse of adding -factor * row k to row r
                let (num, den) = sign_split(&factor);
                ops.push(ElementaryOp::Shear { target: r, source: k, num, den });
            }
        }
        Some(Substitution { n, ops })
    }

    pub fn ops(&self) -> &[ElementaryOp] {
        &self.ops
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies the substitution in place. The result equals a positive
    /// multiple of the exact `F(V t)`; the multiple is returned.
    pub fn apply(&self, form: &mut DenseForm) -> BigInt {
        assert_eq!(form.basis.nvars, self.n);
        let d = form.basis.degree;
        let mut scale = BigInt::one();
        for op in &self.ops {
            match op {
                ElementaryOp::Swap(i, j) => form.swap_vars(*i, *j),
                ElementaryOp::Scale { var, num, den } => {
                    form.scale_var(*var, num, den);
                    scale *= den.pow(d);
                }
                ElementaryOp::Shear { target, source, num, den } => {
                    form.shear(*target, *source, num, den);
                    scale *= den.pow(d);
                }
            }
        }
        scale
    }
}

fn sign_split(r: &Rational) -> (BigInt, BigInt) {
    (r.numer().clone(), r.denom().clone())
}
