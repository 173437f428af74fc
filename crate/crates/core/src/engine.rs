//! Breadth-first successive substitution search.
//!
//! Starting from `F`, every level substitutes each scheme matrix into each
//! surviving form. Children with no negative coefficient are nonnegative on
//! their cell and are dropped. A child whose coefficient sum is negative is
//! negative at the barycenter of its cell, which is an explicit point of
//! `T_n` where `F < 0`. If a whole level is dropped, `F` is nonnegative on
//! every cell of that level and therefore on `T_n`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::dense::{DenseForm, MonomialBasis, Substitution};
use crate::form::{Form, FormError, Rational};
use crate::rational;
use crate::subdivision::{compose, NormalizedMatrix, SchemeError, SubdivisionScheme};

pub const DEFAULT_MAX_DEPTH: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("the zero form cannot be decided")]
    ZeroForm,
    #[error("scheme has dimension {scheme} but the form has {form} variables")]
    DimensionMismatch { scheme: usize, form: usize },
    #[error("max depth must be at least 1")]
    BadDepth,
    #[error("index {index} is out of range for a scheme of {len} matrices")]
    BadIndex { index: usize, len: usize },
    #[error("internal error: witness value {0} is not negative")]
    WitnessNotNegative(Rational),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Scheme indices (1-based) in application order: the first index is the
/// leftmost factor of the composed matrix.
pub type IndexPath = Vec<usize>;

/// One element of the level-`m` substitution set: the content-normalized image
/// of `F` under the product of the scheme matrices along `path`.
#[derive(Clone, Debug)]
pub struct Branch {
    form: DenseForm,
    path: IndexPath,
}

impl Branch {
    pub fn root(f: &Form) -> Self {
        let basis = MonomialBasis::new(f.nvars(), f.degree());
        let (mut form, _) = DenseForm::from_form(f, &basis);
        form.normalize_content();
        Branch { form, path: Vec::new() }
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn form(&self) -> Form {
        self.form.to_form()
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

/// A scheme with every matrix pre-factored for fast substitution.
#[derive(Clone, Debug)]
pub struct CompiledScheme {
    n: usize,
    substitutions: Vec<Substitution>,
}

impl CompiledScheme {
    pub fn new(scheme: &SubdivisionScheme) -> Self {
        let substitutions = scheme
            .matrices()
            .iter()
            .map(|m| Substitution::new(m.matrix()).expect("scheme matrices are nonsingular"))
            .collect();
        CompiledScheme { n: scheme.n(), substitutions }
    }

    pub fn len(&self) -> usize {
        self.substitutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.substitutions.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct LevelOutcome {
    pub frontier: Vec<Branch>,
    pub pruned: usize,
    pub expanded: usize,
    pub duplicates: usize,
    pub negative: Option<Branch>,
}

/// Expands one level: every branch in order, every scheme matrix in order.
///
/// Trivially positive children are dropped and counted. The first trivially
/// negative child stops the expansion and is returned in `negative`.
pub fn expand_level(
    frontier: &[Branch],
    scheme: &CompiledScheme,
    dedup: bool,
) -> Result<LevelOutcome, EngineError> {
    let mut out = LevelOutcome::default();
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    for branch in frontier {
        if branch.form.basis().nvars() != scheme.n {
            return Err(EngineError::DimensionMismatch {
                scheme: scheme.n,
                form: branch.form.basis().nvars(),
            });
        }
        for (i, sub) in scheme.substitutions.iter().enumerate() {
            let mut form = branch.form.clone();
            sub.apply(&mut form);
            form.normalize_content();
            out.expanded += 1;
            let mut path = branch.path.clone();
            path.push(i + 1);
            if form.is_trivially_negative() {
                out.negative = Some(Branch { form, path });
                return Ok(out);
            }
            if form.is_trivially_positive() {
                out.pruned += 1;
                continue;
            }
            if dedup && !seen.insert(form.coeffs().to_vec()) {
                out.duplicates += 1;
                continue;
            }
            out.frontier.push(Branch { form, path });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub max_depth: usize,
    /// Drop children whose normalized form already appeared on the level.
    pub dedup: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { max_depth: DEFAULT_MAX_DEPTH, dedup: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub depth: usize,
    pub expanded: usize,
    pub pruned_positive: usize,
    pub duplicates: usize,
    /// Surviving branches at this depth (before a negative child, if any).
    pub frontier_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub branches_expanded: usize,
    pub branches_pruned_positive: usize,
    pub peak_frontier_size: usize,
    pub levels: Vec<LevelStats>,
}

/// An exact point of `T_n` where `F` is negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub path: IndexPath,
    pub point: Vec<Rational>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Every cell of some level carried a trivially positive form.
    Psd,
    /// A cell carried a trivially negative form.
    Indefinite(Witness),
    /// The depth limit was reached with undecided cells left.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub depth_reached: usize,
    pub stats: SearchStats,
}

impl Verdict {
    pub fn is_psd(&self) -> bool {
        matches!(self.outcome, Outcome::Psd)
    }

    pub fn is_indefinite(&self) -> bool {
        matches!(self.outcome, Outcome::Indefinite(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.outcome, Outcome::Inconclusive)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Indefinite(w) => Some(w),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.outcome {
            Outcome::Psd => "psd",
            Outcome::Indefinite(_) => "indefinite",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

/// The image of the barycenter under the product of the path's matrices.
pub fn witness_point(path: &[usize], scheme: &SubdivisionScheme) -> Result<Vec<Rational>, EngineError> {
    let n = scheme.n();
    let mut matrices: Vec<NormalizedMatrix> = Vec::with_capacity(path.len());
    for &index in path {
        let m = scheme.matrix(index).ok_or(EngineError::BadIndex { index, len: scheme.len() })?;
        matrices.push(m.clone());
    }
    let barycenter = vec![rational(1, n as i64); n];
    if matrices.is_empty() {
        return Ok(barycenter);
    }
    let product = compose(&matrices)?;
    Ok(product.matrix().mul_vec(&barycenter).expect("dimensions agree"))
}

/// Runs the search with the default options and the given depth limit.
pub fn decide(f: &Form, scheme: &SubdivisionScheme, max_depth: usize) -> Result<Verdict, EngineError> {
    decide_with(f, scheme, &DecideOptions { max_depth, ..DecideOptions::default() })
}

pub fn decide_with(
    f: &Form,
    scheme: &SubdivisionScheme,
    opts: &DecideOptions,
) -> Result<Verdict, EngineError> {
    if f.is_zero() {
        return Err(EngineError::ZeroForm);
    }
    if scheme.n() != f.nvars() {
        return Err(EngineError::DimensionMismatch { scheme: scheme.n(), form: f.nvars() });
    }
    if opts.max_depth < 1 {
        return Err(EngineError::BadDepth);
    }
    let mut stats = SearchStats { peak_frontier_size: 1, ..SearchStats::default() };
    let witness = |path: IndexPath| -> Result<Outcome, EngineError> {
        let point = witness_point(&path, scheme)?;
        let value = f.evaluate(&point)?;
        if !value.is_negative() {
            return Err(EngineError::WitnessNotNegative(value));
        }
        Ok(Outcome::Indefinite(Witness { path, point, value }))
    };

    if f.is_trivially_negative() {
        return Ok(Verdict { outcome: witness(Vec::new())?, depth_reached: 0, stats });
    }
    if f.is_trivially_positive() {
        return Ok(Verdict { outcome: Outcome::Psd, depth_reached: 0, stats });
    }

    let compiled = CompiledScheme::new(scheme);
    let mut frontier = vec![Branch::root(f)];
    for depth in 1..=opts.max_depth {
        let level = expand_level(&frontier, &compiled, opts.dedup)?;
        drop(std::mem::take(&mut frontier));
        stats.branches_expanded += level.expanded;
        stats.branches_pruned_positive += level.pruned;
        stats.peak_frontier_size = stats.peak_frontier_size.max(level.frontier.len());
        stats.levels.push(LevelStats {
            depth,
            expanded: level.expanded,
            pruned_positive: level.pruned,
            duplicates: level.duplicates,
            frontier_size: level.frontier.len(),
        });
        if let Some(neg) = level.negative {
            return Ok(Verdict { outcome: witness(neg.path)?, depth_reached: depth, stats });
        }
        if level.frontier.is_empty() {
            return Ok(Verdict { outcome: Outcome::Psd, depth_reached: depth, stats });
        }
        frontier = level.frontier;
    }
    Ok(Verdict { outcome: Outcome::Inconclusive, depth_reached: opts.max_depth, stats })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub path: Vec<usize>,
    pub point: Vec<String>,
    pub value: String,
}

/// Serializable summary of a [`Verdict`]; rationals are written `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub verdict: String,
    pub depth_reached: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub stats: SearchStats,
}

pub const INCONCLUSIVE_NOTE: &str =
    "not decided; form may be PSD-but-not-PD or depth too small";

pub fn run_report(verdict: &Verdict) -> RunReport {
    RunReport {
        verdict: verdict.kind().to_string(),
        depth_reached: verdict.depth_reached,
        witness: verdict.witness().map(|w| WitnessReport {
            path: w.path.clone(),
            point: w.point.iter().map(ToString::to_string).collect(),
            value: w.value.to_string(),
        }),
        note: verdict.is_inconclusive().then(|| INCONCLUSIVE_NOTE.to_string()),
        stats: verdict.stats.clone(),
    }
}

impl Verdict {
    pub fn report(&self) -> RunReport {
        run_report(self)
    }
}
