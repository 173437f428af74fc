#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sls::{parse_form, rational, Form, Rational, VariableContext};

pub const EXAMPLE1: &str = "x*(x-y)^5 - y*(-z-y)^5 - z*(x-z)^5";
pub const EXAMPLE2: &str = "x^4*y^2 - 2*x^4*y*z + x^4*z^2 + 3*x^3*y^2*z - 2*x^3*y*z^2 \
                            - 2*x^2*y^4 - 2*x^2*y^3*z + x^2*y^2*z^2 + y^6";
pub const CENTRAL_FORM: &str = "(x-y+z)^2 + y^2";

const N3: &str = "(x^2*(z+x)*(x+y) + y^2*(x+y)*(y+z) + z^2*(y+z)*(z+x))";
const D3: &str = "((y+z)*(z+x)*(x+y))";

pub fn xyz() -> VariableContext {
    VariableContext::from_list("x,y,z").unwrap()
}

pub fn form(text: &str) -> Form {
    parse_form(text, &xyz()).unwrap()
}

pub fn example1() -> Form {
    form(EXAMPLE1)
}

pub fn example2() -> Form {
    form(EXAMPLE2)
}

/// `192 N^6 - 729 (x^6+y^6+z^6) D^6`, the cleared form of
/// `2/3 * sum x^2/(y+z) >= ((x^6+y^6+z^6)/3)^(1/6)`.
pub fn example3() -> Form {
    form(&format!("192*{N3}^6 - 729*(x^6+y^6+z^6)*{D3}^6"))
}

pub fn point(coords: &[(i64, i64)]) -> Vec<Rational> {
    coords.iter().map(|&(p, q)| rational(p, q)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every exponent vector of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// A nonzero form with every coefficient drawn from `[-c, c]`.
pub fn random_form<R: Rng>(rng: &mut R, n: usize, d: u32, c: i64) -> Form {
    loop {
        let terms: Vec<(Rational, Vec<u32>)> = monomials(n, d)
            .into_iter()
            .map(|e| (rational(rng.gen_range(-c..=c), 1), e))
            .collect();
        let f = Form::from_terms(n, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

/// A point of the simplex with coordinates `a_i / sum a`, `a_i` in `1..=den`.
pub fn random_simplex_point<R: Rng>(rng: &mut R, n: usize, den: i64) -> Vec<Rational> {
    let a: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=den)).collect();
    let s: i64 = a.iter().sum();
    a.iter().map(|&x| rational(x, s)).collect()
}

/// The 200-form corpus: `n = 3`, degree 1 to 4, coefficients in `[-5, 5]`.
pub fn corpus() -> Vec<Form> {
    let mut r = rng(0x5eed_2024);
    (0..200)
        .map(|_| {
            let d = r.gen_range(1..=4);
            random_form(&mut r, 3, d, 5)
        })
        .collect()
}
