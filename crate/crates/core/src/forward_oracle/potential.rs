use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::scalar::{Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Smoothness {
    /// Continuously differentiable on `[0, L]`; required by the regrouped series.
    #[default]
    C1,
    /// Square integrable only.
    L2,
}

type EvalFn<T> = Arc<dyn Fn(T) -> Cx<T> + Send + Sync>;

/// A complex potential on `[0, L]`, immutable once built.
#[derive(Clone)]
pub struct PotentialSpec<T: Real> {
    length: T,
    eval: EvalFn<T>,
    smoothness: Smoothness,
    breakpoints: Vec<T>,
    // set only for constant potentials; the solvers then use closed forms
    constant: Option<Cx<T>>,
}

const PROBE_POINTS: usize = 257;

impl<T: Real> PotentialSpec<T> {
    /// Wraps a closed-form potential; probes it for finite values on `[0, L]`.
    pub fn new(length: T, eval: impl Fn(T) -> Cx<T> + Send + Sync + 'static) -> Result<Self> {
        if !(length > T::zero() && length.is_finite()) {
            return Err(invalid("interval length must be positive and finite"));
        }
        let spec = Self {
            length,
            eval: Arc::new(eval),
            smoothness: Smoothness::C1,
            breakpoints: Vec::new(),
            constant: None,
        };
        for x in spec.probe_grid(PROBE_POINTS) {
            let v = spec.eval(x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(invalid(format!("potential is not finite at x = {x}")));
            }
        }
        Ok(spec)
    }

    pub fn zero(length: T) -> Result<Self> {
        Self::constant(length, Cx::new(T::zero(), T::zero()))
    }

    /// Constant potential. Solutions are evaluated in closed form rather
    /// than integrated; build it with `new` to exercise the integrator.
    pub fn constant(length: T, c: Cx<T>) -> Result<Self> {
        let mut spec = Self::new(length, move |_| c)?;
        spec.constant = Some(c);
        Ok(spec)
    }

    pub fn constant_value(&self) -> Option<Cx<T>> {
        self.constant
    }

    /// Piecewise-cubic interpolant through values on a uniform grid covering
    /// `[0, L]` endpoints included.
    pub fn from_samples(length: T, values: Vec<Cx<T>>) -> Result<Self> {
        if values.len() < 4 {
            return Err(invalid("sampled potential needs at least 4 grid values"));
        }
        let n = values.len() - 1;
        let h = length / T::of_usize(n);
        let values = Arc::new(values);
        Self::new(length, move |x| {
            let t = (x / h).max(T::zero());
            let i = t.floor().to_usize().unwrap_or(0).min(n - 1);
            let base = i.saturating_sub(1).min(n - 3);
            let nodes: [T; 4] = std::array::from_fn(|k| T::of_usize(base + k));
            let mut acc = Cx::new(T::zero(), T::zero());
            for k in 0..4 {
                let mut w = T::one();
                for j in 0..4 {
                    if j != k {
                        w = w * (t - nodes[j]) / (nodes[k] - nodes[j]);
                    }
                }
                acc = acc + values[base + k] * w;
            }
            acc
        })
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    /// Interior points where the potential or a low derivative jumps; the
    /// integrators and quadratures never step across them.
    pub fn with_breakpoints(mut self, mut points: Vec<T>) -> Self {
        points.retain(|&p| p > T::zero() && p < self.length);
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        self.breakpoints = points;
        self
    }

    #[inline]
    pub fn eval(&self, x: T) -> Cx<T> {
        (self.eval)(x)
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    /// Mirror image `x -> q(L - x)`.
    pub fn flipped(&self) -> Self {
        let inner = self.eval.clone();
        let l = self.length;
        Self {
            length: l,
            eval: Arc::new(move |x| inner(l - x)),
            smoothness: self.smoothness,
            breakpoints: self.breakpoints.iter().rev().map(|&b| l - b).collect(),
            constant: self.constant,
        }
    }

    /// `q - shift` as a new potential.
    pub fn shifted(&self, shift: Cx<T>) -> Self {
        let inner = self.eval.clone();
        Self {
            length: self.length,
            eval: Arc::new(move |x| inner(x) - shift),
            smoothness: self.smoothness,
            breakpoints: self.breakpoints.clone(),
            constant: self.constant.map(|c| c - shift),
        }
    }

    pub(crate) fn probe_grid(&self, n: usize) -> impl Iterator<Item = T> + '_ {
        let step = self.length / T::of_usize(n - 1);
        (0..n).map(move |i| T::of_usize(i) * step)
    }

    /// Largest `|Im q|` over a probe grid.
    pub fn max_imaginary(&self) -> T {
        self.probe_grid(PROBE_POINTS * 4)
            .map(|x| self.eval(x).im.abs())
            .fold(T::zero(), T::max)
    }

    /// `(min Re q, max |q|)` over a probe grid.
    pub fn real_range(&self) -> (T, T) {
        self.probe_grid(PROBE_POINTS * 4).fold(
            (T::infinity(), T::zero()),
            |(lo, hi), x| {
                let v = self.eval(x);
                (lo.min(v.re), hi.max(v.norm()))
            },
        )
    }
}

impl<T: Real> fmt::Debug for PotentialSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("length", &self.length)
            .field("smoothness", &self.smoothness)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}
