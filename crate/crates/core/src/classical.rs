//! Finite classical probability spaces and conditional expectation.
//!
//! Level sets of a real random variable are identified by exact equality of
//! the stored values.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real, C};

/// Finite set of labelled points with a probability weight on each.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteProbSpace<T> {
    points: Vec<i64>,
    weights: Vec<T>,
}

impl<T: Real> FiniteProbSpace<T> {
    pub fn new(points: Vec<i64>, weights: Vec<T>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidProbSpace(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w >= T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidProbSpace("negative or non-finite weight".into()));
        }
        let total = weights.iter().fold(T::zero(), |a, &w| a + w);
        let tol = lit::<T>(1e-12).max(T::epsilon() * lit(64.0));
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidProbSpace(format!("weights sum to {total}")));
        }
        Ok(FiniteProbSpace { points, weights })
    }

    /// Uniform weights on the given labels.
    pub fn uniform(points: Vec<i64>) -> Result<Self> {
        let n = T::from_usize(points.len()).unwrap();
        let w = vec![T::one() / n; points.len()];
        Self::new(points, w)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[i64] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `E_P(X)`
    pub fn expectation(&self, x: &ComplexVariable<T>) -> C<T> {
        self.weights
            .iter()
            .zip(&x.values)
            .fold(C::zero(), |acc, (&w, &v)| acc + v.scale(w))
    }
}

/// Function on the points of a [`FiniteProbSpace`], stored by point index.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomVariable<V> {
    pub values: Vec<V>,
}

pub type ComplexVariable<T> = RandomVariable<Complex<T>>;
pub type RealVariable<T> = RandomVariable<T>;

impl<V: Copy> RandomVariable<V> {
    pub fn new(values: Vec<V>) -> Self {
        RandomVariable { values }
    }

    pub fn from_fn(space_len: usize, f: impl FnMut(usize) -> V) -> Self {
        RandomVariable {
            values: (0..space_len).map(f).collect(),
        }
    }

    pub fn map<W>(&self, f: impl FnMut(&V) -> W) -> RandomVariable<W> {
        RandomVariable {
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Distinct values in order of first appearance.
    pub fn range(&self) -> Vec<V>
    where
        V: PartialEq,
    {
        let mut out: Vec<V> = Vec::new();
        for v in &self.values {
            if !out.contains(v) {
                out.push(*v);
            }
        }
        out
    }
}

impl<T: Real> RealVariable<T> {
    pub fn to_complex(&self) -> ComplexVariable<T> {
        self.map(|&y| Complex::new(y, T::zero()))
    }
}

impl<T: Real> ComplexVariable<T> {
    pub fn max_distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        RandomVariable {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn max_imaginary(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, z| acc.max(z.im.abs()))
    }
}

fn check_len<T: Real, V>(p: &FiniteProbSpace<T>, rv: &RandomVariable<V>) -> Result<()> {
    if rv.values.len() != p.len() {
        return Err(Error::DimensionMismatch(p.len(), rv.values.len()));
    }
    Ok(())
}

/// `P(Y = y)`
fn level_mass<T: Real>(p: &FiniteProbSpace<T>, y: &RealVariable<T>, level: T) -> T {
    p.weights
        .iter()
        .zip(&y.values)
        .filter(|(_, &v)| v == level)
        .fold(T::zero(), |acc, (&w, _)| acc + w)
}

/// True iff every level set of `y` carries positive probability.
pub fn in_d_y<T: Real>(p: &FiniteProbSpace<T>, y: &RealVariable<T>) -> bool {
    first_empty_level(p, y).is_none()
}

fn first_empty_level<T: Real>(p: &FiniteProbSpace<T>, y: &RealVariable<T>) -> Option<T> {
    y.range()
        .into_iter()
        .find(|&level| !(level_mass(p, y, level) > T::zero()))
}

fn require_d_y<T: Real>(p: &FiniteProbSpace<T>, y: &RealVariable<T>) -> Result<()> {
    check_len(p, y)?;
    match first_empty_level(p, y) {
        Some(level) => Err(Error::NotInDY(format!("{level}"))),
        None => Ok(()),
    }
}

/// `E_P(X | Y)`, evaluated from the joint law:
/// on `{Y = y}` it equals `sum_x x P(X = x, Y = y) / P(Y = y)`.
pub fn cond_exp<T: Real>(
    p: &FiniteProbSpace<T>,
    x: &ComplexVariable<T>,
    y: &RealVariable<T>,
) -> Result<ComplexVariable<T>> {
    require_d_y(p, y)?;
    check_len(p, x)?;
    let x_range = x.range();
    let per_level: Vec<(T, C<T>)> = y
        .range()
        .into_iter()
        .map(|level| {
            let mass = level_mass(p, y, level);
            let mut acc = C::zero();
            for &xv in &x_range {
                let joint = joint_mass(p, x, y, xv, level);
                acc += xv.scale(joint);
            }
            (level, acc.unscale(mass))
        })
        .collect();
    Ok(y.map(|v| {
        per_level
            .iter()
            .find(|(level, _)| level == v)
            .map(|(_, e)| *e)
            .expect("level present")
    }))
}

/// `P(X = x, Y = y)` by direct enumeration.
pub fn joint_mass<T: Real>(
    p: &FiniteProbSpace<T>,
    x: &ComplexVariable<T>,
    y: &RealVariable<T>,
    xv: C<T>,
    yv: T,
) -> T {
    p.weights
        .iter()
        .zip(x.values.iter().zip(&y.values))
        .filter(|(_, (a, b))| **a == xv && **b == yv)
        .fold(T::zero(), |acc, (&w, _)| acc + w)
}

/// Minimizer of `f -> E_P(|X - f(Y)|^2)` over functions of `Y`.
///
/// The quadratic form is diagonal in the level-set indicators, so the
/// normal equations reduce to `f(y) = E_P(X 1_y(Y)) / P(Y = y)`.
pub fn best_predictor<T: Real>(
    p: &FiniteProbSpace<T>,
    x: &ComplexVariable<T>,
    y: &RealVariable<T>,
) -> Result<ComplexVariable<T>> {
    require_d_y(p, y)?;
    check_len(p, x)?;
    let levels = y.range();
    let solution: Vec<C<T>> = levels
        .iter()
        .map(|&level| {
            let mut gram = T::zero();
            let mut rhs = C::zero();
            for ((&w, &yv), &xv) in p.weights.iter().zip(&y.values).zip(&x.values) {
                if yv == level {
                    gram += w;
                    rhs += xv.scale(w);
                }
            }
            rhs.unscale(gram)
        })
        .collect();
    Ok(y.map(|v| {
        let k = levels.iter().position(|l| l == v).expect("level present");
        solution[k]
    }))
}

/// `E_P[1_y(Y) E_P(1_x(X) | Y)]`, which recovers `P(X = x, Y = y)`.
pub fn joint_from_cond<T: Real>(
    p: &FiniteProbSpace<T>,
    x: &ComplexVariable<T>,
    y: &RealVariable<T>,
    xv: C<T>,
    yv: T,
) -> Result<T> {
    require_d_y(p, y)?;
    check_len(p, x)?;
    if !x.values.contains(&xv) {
        return Err(Error::LabelNotInRange(format!("x = {xv}")));
    }
    if !y.values.contains(&yv) {
        return Err(Error::LabelNotInRange(format!("y = {yv}")));
    }
    let indicator_x = x.map(|&v| if v == xv { C::new(T::one(), T::zero()) } else { C::zero() });
    let cond = cond_exp(p, &indicator_x, y)?;
    let indicator_y = y.map(|&v| if v == yv { C::new(T::one(), T::zero()) } else { C::zero() });
    Ok(p.expectation(&indicator_y.mul(&cond)).re)
}
