//! Simplex subdivision schemes as sets of normalized matrices.
//!
//! A subsimplex of `T_n` with vertices `v_1, ..., v_n` is encoded as the matrix
//! whose column `j` is `v_j`. Substituting `x = V t` maps `T_n` onto that
//! subsimplex, so a scheme (a list of such matrices tiling `T_n`) is at the same
//! time one subdivision step and one set of linear substitutions. Applying the
//! scheme to every cell of the previous level gives cells `M * M_i`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::form::Rational;
use crate::matrix::{MatrixError, RatMatrix};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("column {column} sums to {sum}, expected 1")]
    ColumnSum { column: usize, sum: Rational },
    #[error("entry ({row}, {column}) = {value} is negative")]
    NegativeEntry { row: usize, column: usize, value: Rational },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("nothing to compose")]
    EmptyProduct,
    #[error("matrix power must be at least 1, got {0}")]
    BadPower(u32),
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("a scheme needs at least 2 matrices, got {0}")]
    TooFewMatrices(usize),
    #[error("scheme {name:?} failed validation: {summary}")]
    Invalid { name: String, summary: String },
    #[error("invalid point {point}: {reason}")]
    BadPoint { point: &'static str, reason: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An `n x n` matrix with nonnegative entries, unit column sums and nonzero
/// determinant: the vertex matrix of a genuine subsimplex of `T_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalizedMatrix(RatMatrix);

impl NormalizedMatrix {
    pub fn new(m: RatMatrix) -> Result<Self, SchemeError> {
        if let Some(err) = matrix_failures(&m).into_iter().next() {
            return Err(err);
        }
        Ok(NormalizedMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        NormalizedMatrix(RatMatrix::identity(n))
    }

    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Result<Self, SchemeError> {
        Self::new(RatMatrix::from_ratios(rows)?)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// Vertex `j` of the subsimplex.
    pub fn vertex(&self, j: usize) -> Vec<Rational> {
        self.0.column(j)
    }

    pub fn determinant(&self) -> Rational {
        self.0.determinant()
    }

    /// Product of two normalized matrices; normalization is closed under it.
    pub fn then(&self, other: &NormalizedMatrix) -> Result<NormalizedMatrix, SchemeError> {
        if self.n() != other.n() {
            return Err(SchemeError::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        Ok(NormalizedMatrix(self.0.mul(&other.0)?))
    }
}

impl fmt::Display for NormalizedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn matrix_failures(m: &RatMatrix) -> Vec<SchemeError> {
    let mut out = Vec::new();
    for (column, sum) in m.column_sums().into_iter().enumerate() {
        if !sum.is_one() {
            out.push(SchemeError::ColumnSum { column: column + 1, sum });
        }
    }
    for row in 0..m.n() {
        for column in 0..m.n() {
            let value = m.get(row, column);
            if value.is_negative() {
                out.push(SchemeError::NegativeEntry {
                    row: row + 1,
                    column: column + 1,
                    value: value.clone(),
                });
            }
        }
    }
    if m.determinant().is_zero() {
        out.push(SchemeError::Singular);
    }
    out
}

/// An ordered list of normalized matrices of one dimension describing one
/// subdivision step of `T_n`. Order is the search order of the engine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubdivisionScheme {
    name: String,
    n: usize,
    matrices: Vec<NormalizedMatrix>,
}

/// Unvalidated scheme data, as read from a file or built by hand.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SchemeSpec {
    pub name: String,
    pub n: usize,
    pub matrices: Vec<RatMatrix>,
}

/// Per-matrix check results plus the volume check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub matrices: Vec<MatrixReport>,
    /// Sum of `|det|` over all matrices; equals 1 for a tiling of `T_n`.
    pub volume_sum: Rational,
    pub volume_ok: bool,
    pub count_ok: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixReport {
    /// 1-based position in the scheme.
    pub index: usize,
    pub dimension_ok: bool,
    pub column_sums_ok: bool,
    pub nonnegative: bool,
    pub nonsingular: bool,
    pub abs_det: Rational,
    pub failures: Vec<SchemeError>,
}

impl MatrixReport {
    pub fn passed(&self) -> bool {
        self.dimension_ok && self.column_sums_ok && self.nonnegative && self.nonsingular
    }
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.count_ok && self.volume_ok && self.matrices.iter().all(MatrixReport::passed)
    }

    fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.count_ok {
            parts.push(format!("{} matrices (need at least 2)", self.matrices.len()));
        }
        for m in self.matrices.iter().filter(|m| !m.passed()) {
            if !m.dimension_ok {
                parts.push(format!("matrix {}: wrong dimension", m.index));
            }
            for e in &m.failures {
                parts.push(format!("matrix {}: {e}", m.index));
            }
        }
        if !self.volume_ok {
            parts.push(format!("sum of |det| is {}, expected 1", self.volume_sum));
        }
        parts.join("; ")
    }
}

impl SchemeSpec {
    /// Runs every check; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut volume_sum = Rational::zero();
        let matrices = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let dimension_ok = m.n() == self.n;
                let failures = matrix_failures(m);
                let abs_det = m.determinant().abs();
                volume_sum += &abs_det;
                MatrixReport {
                    index: i + 1,
                    dimension_ok,
                    column_sums_ok: !failures.iter().any(|e| matches!(e, SchemeError::ColumnSum { .. })),
                    nonnegative: !failures.iter().any(|e| matches!(e, SchemeError::NegativeEntry { .. })),
                    nonsingular: !failures.iter().any(|e| matches!(e, SchemeError::Singular)),
                    abs_det,
                    failures,
                }
            })
            .collect();
        ValidationReport {
            matrices,
            volume_ok: volume_sum.is_one(),
            volume_sum,
            count_ok: self.matrices.len() >= 2,
        }
    }

    /// Validates and converts; any failed check rejects the whole scheme.
    pub fn into_scheme(self) -> Result<SubdivisionScheme, SchemeError> {
        let report = self.validate();
        if !report.passed() {
            return Err(SchemeError::Invalid { name: self.name, summary: report.summary() });
        }
        Ok(SubdivisionScheme {
            name: self.name,
            n: self.n,
            matrices: self.matrices.into_iter().map(NormalizedMatrix).collect(),
        })
    }
}

impl SubdivisionScheme {
    pub fn new(name: impl Into<String>, matrices: Vec<RatMatrix>) -> Result<Self, SchemeError> {
        let n = matrices.first().map(RatMatrix::n).unwrap_or(0);
        SchemeSpec { name: name.into(), n, matrices }.into_scheme()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[NormalizedMatrix] {
        &self.matrices
    }

    /// Matrix at 1-based position `index`.
    pub fn matrix(&self, index: usize) -> Option<&NormalizedMatrix> {
        index.checked_sub(1).and_then(|i| self.matrices.get(i))
    }

    pub fn to_spec(&self) -> SchemeSpec {
        SchemeSpec {
            name: self.name.clone(),
            n: self.n,
            matrices: self.matrices.iter().map(|m| m.matrix().clone()).collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        self.to_spec().validate()
    }

    /// Selects a built-in scheme by name (`wds` uses `n`).
    pub fn builtin(name: &str, n: usize) -> Result<Self, SchemeError> {
        match name {
            "wds" => make_wds_scheme(n),
            "midpoint3" => Ok(make_midpoint3_scheme()),
            "trisection3" => Ok(make_trisection3_scheme()),
            "central3" => Ok(make_central3_scheme()),
            _ => Err(SchemeError::Invalid {
                name: name.to_string(),
                summary: "unknown built-in scheme".into(),
            }),
        }
    }
}

/// Permutations of `0..n` in reverse plain-changes order: the
/// Steinhaus-Johnson-Trotter cycle walked backwards from the identity, so
/// consecutive permutations differ by one adjacent transposition.
fn permutations_reverse_plain_changes(n: usize) -> Vec<Vec<usize>> {
    // Even's variant of plain changes: each element carries a direction.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut dir: Vec<isize> = vec![-1; n];
    let mut out = vec![perm.clone()];
    loop {
        let mobile = (0..n)
            .filter(|&i| {
                let j = i as isize + dir[perm[i]];
                j >= 0 && (j as usize) < n && perm[j as usize] < perm[i]
            })
            .max_by_key(|&i| perm[i]);
        let Some(i) = mobile else { break };
        let value = perm[i];
        let j = (i as isize + dir[value]) as usize;
        perm.swap(i, j);
        for (v, d) in dir.iter_mut().enumerate() {
            if v > value {
                *d = -*d;
            }
        }
        out.push(perm.clone());
    }
    out[1..].reverse();
    out
}

/// The weighted difference substitution set: barycentric subdivision of `T_n`.
///
/// One matrix per permutation `s` of the coordinates; column `j` is the average
/// of `e_s(1), ..., e_s(j)`. Matrix 1 belongs to the identity permutation.
pub fn make_wds_scheme(n: usize) -> Result<SubdivisionScheme, SchemeError> {
    if n < 2 {
        return Err(SchemeError::BadDimension(n));
    }
    let matrices = permutations_reverse_plain_changes(n)
        .into_iter()
        .map(|perm| {
            let columns: Vec<Vec<Rational>> = (0..n)
                .map(|j| {
                    let mut col = vec![Rational::zero(); n];
                    let w = rational(1, j as i64 + 1);
                    for &k in &perm[..=j] {
                        col[k] = w.clone();
                    }
                    col
                })
                .collect();
            RatMatrix::from_columns(&columns)
        })
        .collect::<Result<Vec<_>, _>>()?;
    SubdivisionScheme::new(format!("wds{n}"), matrices)
}

fn scheme_from_table(name: &str, table: &[[[(i64, i64); 3]; 3]]) -> SubdivisionScheme {
    let matrices = table
        .iter()
        .map(|m| {
            let rows: Vec<&[(i64, i64)]> = m.iter().map(|r| r.as_slice()).collect();
            RatMatrix::from_ratios(&rows).expect("3x3 table")
        })
        .collect();
    SubdivisionScheme::new(name, matrices).expect("built-in scheme is valid")
}

const Z: (i64, i64) = (0, 1);
const I: (i64, i64) = (1, 1);
const H: (i64, i64) = (1, 2);
const T1: (i64, i64) = (1, 3);
const T2: (i64, i64) = (2, 3);

/// Midpoint subdivision of `T_3` into four half-size triangles.
pub fn make_midpoint3_scheme() -> SubdivisionScheme {
    scheme_from_table(
        "midpoint3",
        &[
            [[I, H, H], [Z, H, Z], [Z, Z, H]],
            [[Z, Z, H], [I, H, H], [Z, H, Z]],
            [[Z, H, Z], [Z, Z, H], [I, H, H]],
            [[H, Z, H], [H, H, Z], [Z, H, H]],
        ],
    )
}

/// Trisection of `T_3` into nine third-size triangles.
pub fn make_trisection3_scheme() -> SubdivisionScheme {
    scheme_from_table(
        "trisection3",
        &[
            [[I, T2, T2], [Z, T1, Z], [Z, Z, T1]],
            [[T2, T1, T2], [T1, T1, Z], [Z, T1, T1]],
            [[T2, T1, T1], [T1, T2, T1], [Z, Z, T1]],
            [[T1, Z, T1], [T2, T2, T1], [Z, T1, T1]],
            [[T1, Z, Z], [T2, I, T2], [Z, Z, T1]],
            [[T2, T1, T1], [Z, T1, Z], [T1, T1, T2]],
            [[T1, Z, T1], [T1, T1, Z], [T1, T2, T2]],
            [[T1, Z, Z], [T1, T2, T1], [T1, T1, T2]],
            [[T1, Z, Z], [Z, T1, Z], [T2, T2, I]],
        ],
    )
}

/// Fan of `T_3` around its barycenter. Every cell keeps an edge of `T_3`, so
/// the scheme does not converge.
pub fn make_central3_scheme() -> SubdivisionScheme {
    scheme_from_table(
        "central3",
        &[
            [[I, Z, T1], [Z, I, T1], [Z, Z, T1]],
            [[Z, Z, T1], [I, Z, T1], [Z, I, T1]],
            [[Z, I, T1], [Z, Z, T1], [I, Z, T1]],
        ],
    )
}

/// Star subdivision of `T_3` through an interior point `o` and one point on
/// each edge: `a` on `T1T2`, `b` on `T2T3`, `c` on `T1T3`.
///
/// Cells in order: `T1 A O`, `T2 A O`, `T2 B O`, `T3 B O`, `T3 C O`, `T1 C O`.
pub fn make_star3_scheme(
    o: &[Rational],
    a: &[Rational],
    b: &[Rational],
    c: &[Rational],
) -> Result<SubdivisionScheme, SchemeError> {
    fn check(name: &'static str, p: &[Rational], zero_at: Option<usize>) -> Result<(), SchemeError> {
        let bad = |reason: String| Err(SchemeError::BadPoint { point: name, reason });
        if p.len() != 3 {
            return bad(format!("expected 3 coordinates, got {}", p.len()));
        }
        let sum = p.iter().fold(Rational::zero(), |acc, x| acc + x);
        if !sum.is_one() {
            return bad(format!("coordinates sum to {sum}"));
        }
        for (i, x) in p.iter().enumerate() {
            if Some(i) == zero_at {
                if !x.is_zero() {
                    return bad(format!("coordinate {} must be 0", i + 1));
                }
            } else if !x.is_positive() {
                return bad(format!("coordinate {} must be positive", i + 1));
            }
        }
        Ok(())
    }
    check("O", o, None)?;
    check("A", a, Some(2))?;
    check("B", b, Some(0))?;
    check("C", c, Some(1))?;
    let e = |k: usize| {
        let mut v = vec![Rational::zero(); 3];
        v[k] = Rational::one();
        v
    };
    let cells = [
        [e(0), a.to_vec(), o.to_vec()],
        [e(1), a.to_vec(), o.to_vec()],
        [e(1), b.to_vec(), o.to_vec()],
        [e(2), b.to_vec(), o.to_vec()],
        [e(2), c.to_vec(), o.to_vec()],
        [e(0), c.to_vec(), o.to_vec()],
    ];
    let matrices = cells
        .iter()
        .map(|cols| RatMatrix::from_columns(cols))
        .collect::<Result<Vec<_>, _>>()?;
    SubdivisionScheme::new("star3", matrices)
}

/// Largest squared Euclidean distance between two vertices of the cell.
pub fn diameter_sq(m: &NormalizedMatrix) -> Rational {
    let cols: Vec<Vec<Rational>> = (0..m.n()).map(|j| m.vertex(j)).collect();
    let mut best = Rational::zero();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let d = cols[i]
                .iter()
                .zip(&cols[j])
                .fold(Rational::zero(), |acc, (a, b)| {
                    let diff = a - b;
                    acc + &diff * &diff
                });
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// Largest half-L1 distance between two vertices of the cell. For any cell
/// `M`, `diam(M * N) <= max_half_l1(N) * diam(M)`.
pub fn max_half_l1(m: &NormalizedMatrix) -> Rational {
    let mut best = Rational::zero();
    for i in 0..m.n() {
        for j in i + 1..m.n() {
            let d = (0..m.n()).fold(Rational::zero(), |acc, r| {
                acc + (m.matrix().get(r, i) - m.matrix().get(r, j)).abs()
            }) / rational(2, 1);
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// A cell that shares an edge with `T_n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SharedEdge {
    /// 1-based matrix position in the scheme.
    pub matrix: usize,
    /// 1-based column pair; both columns are standard basis vectors.
    pub columns: (usize, usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvergenceReport {
    pub convergent: bool,
    pub shared_edges: Vec<SharedEdge>,
    /// `(max cell diameter / diameter of T_n)^2`, present iff convergent.
    pub contraction_ratio_sq: Option<Rational>,
}

fn is_unit_vector(col: &[Rational]) -> bool {
    col.iter().filter(|x| x.is_one()).count() == 1 && col.iter().all(|x| x.is_zero() || x.is_one())
}

/// Decides whether the self-similar sequence generated by `scheme` converges.
///
/// The sequence converges iff no cell has an edge that is also an edge of
/// `T_n`. Edges of `T_n` join two standard basis vectors, and cell vertices
/// are matrix columns, so the test is a column scan.
pub fn check_convergence(scheme: &SubdivisionScheme) -> ConvergenceReport {
    let mut shared_edges = Vec::new();
    for (k, m) in scheme.matrices().iter().enumerate() {
        let units: Vec<usize> = (0..m.n()).filter(|&j| is_unit_vector(&m.vertex(j))).collect();
        for a in 0..units.len() {
            for b in a + 1..units.len() {
                // distinct columns of a nonsingular matrix are distinct vertices
                shared_edges.push(SharedEdge { matrix: k + 1, columns: (units[a] + 1, units[b] + 1) });
            }
        }
    }
    let convergent = shared_edges.is_empty();
    let contraction_ratio_sq = convergent.then(|| {
        let max = scheme.matrices().iter().map(diameter_sq).max().unwrap_or_else(Rational::zero);
        let ratio = max / rational(2, 1);
        assert!(ratio < Rational::one() && ratio.is_positive(), "contraction ratio out of range");
        ratio
    });
    ConvergenceReport { convergent, shared_edges, contraction_ratio_sq }
}

/// Product `ms[0] * ms[1] * ... * ms[k-1]`.
pub fn compose(ms: &[NormalizedMatrix]) -> Result<NormalizedMatrix, SchemeError> {
    let (first, rest) = ms.split_first().ok_or(SchemeError::EmptyProduct)?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.then(m))
}

/// `m` multiplied by itself `k` times.
pub fn matrix_power(m: &NormalizedMatrix, k: u32) -> Result<NormalizedMatrix, SchemeError> {
    if k < 1 {
        return Err(SchemeError::BadPower(k));
    }
    let mut acc = m.clone();
    for _ in 1..k {
        acc = acc.then(m)?;
    }
    Ok(acc)
}
