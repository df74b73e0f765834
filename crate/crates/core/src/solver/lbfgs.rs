//! Limited-memory BFGS with backtracking, for smooth convex objectives.
//!
//! A trial step `α` is accepted when either the Armijo condition holds on the
//! computed values, or the directional derivative at the trial point is still
//! at most `c1` times the initial slope. For a convex objective the second
//! test implies the first exactly, and it stays reliable once objective
//! differences fall below rounding noise.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsOptions {
    /// Stop when `‖∇f‖∞` is at most this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Stop when `‖x‖∞` exceeds this.
    pub x_cap: f64,
    pub history: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    LambdaCap,
    MaxIterations,
    LineSearchStalled,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Tolerance => "tolerance",
            StopReason::LambdaCap => "lambda_cap",
            StopReason::MaxIterations => "max_iterations",
            StopReason::LineSearchStalled => "line_search_stalled",
        }
    }
}

/// Objective value, gradient and whatever the caller wants to keep.
pub struct Evaluation<T> {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub payload: T,
}

pub struct Minimization<T> {
    pub x: Vec<f64>,
    pub best: Evaluation<T>,
    pub iterations: usize,
    pub stop: StopReason,
    /// Objective at each accepted iterate, starting with `x0`.
    pub objective_trace: Vec<f64>,
}

const ARMIJO_C1: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
const CURVATURE_DAMPING: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

/// Two-loop recursion: returns `−H g`.
fn direction(history: &VecDeque<Pair>, g: &[f64]) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for pair in history.iter().rev() {
        let a = pair.rho * dot(&pair.s, &q);
        for (qi, yi) in q.iter_mut().zip(&pair.y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some(last) = history.back() {
        let gamma = dot(&last.s, &last.y) / dot(&last.y, &last.y);
        if gamma.is_finite() && gamma > 0.0 {
            q.iter_mut().for_each(|x| *x *= gamma);
        }
    }
    for (pair, a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = pair.rho * dot(&pair.y, &q);
        for (qi, si) in q.iter_mut().zip(&pair.s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|x| *x = -*x);
    q
}

fn evaluate<T>(f: &mut impl FnMut(&[f64]) -> Result<Evaluation<T>>, x: &[f64]) -> Result<Evaluation<T>> {
    let e = f(x)?;
    if !e.value.is_finite() || e.gradient.iter().any(|g| !g.is_finite()) {
        return Err(Error::NumericalFailure { max_abs_lambda: max_abs(x), lambdas: x.to_vec() });
    }
    Ok(e)
}

/// Minimizes `f` from `x0`.
pub fn minimize<T>(
    x0: Vec<f64>,
    options: &LbfgsOptions,
    mut f: impl FnMut(&[f64]) -> Result<Evaluation<T>>,
) -> Result<Minimization<T>> {
    let mut x = x0;
    let mut current = evaluate(&mut f, &x)?;
    let mut trace = alloc::vec![current.value];
    let mut history: VecDeque<Pair> = VecDeque::with_capacity(options.history);
    let mut iterations = 0;

    let stop = loop {
        if max_abs(&current.gradient) <= options.tolerance {
            break StopReason::Tolerance;
        }
        if max_abs(&x) > options.x_cap {
            break StopReason::LambdaCap;
        }
        if iterations >= options.max_iterations {
            break StopReason::MaxIterations;
        }

        let mut d = direction(&history, &current.gradient);
        if !(dot(&d, &current.gradient) < 0.0) {
            history.clear();
            d = current.gradient.iter().map(|g| -g).collect();
        }

        let accepted = match line_search(&mut f, &x, &current, &d)? {
            Some(step) => Some(step),
            None if !history.is_empty() => {
                history.clear();
                let steepest: Vec<f64> = current.gradient.iter().map(|g| -g).collect();
                line_search(&mut f, &x, &current, &steepest)?
            }
            None => None,
        };
        let Some((x_new, next)) = accepted else {
            break StopReason::LineSearchStalled;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.gradient.iter().zip(&current.gradient).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 0.0 {
            if history.len() == options.history {
                history.pop_front();
            }
            if options.history > 0 {
                history.push_back(Pair { rho: 1.0 / (sy + CURVATURE_DAMPING), s, y });
            }
        }
        x = x_new;
        current = next;
        trace.push(current.value);
        iterations += 1;
    };

    Ok(Minimization { x, best: current, iterations, stop, objective_trace: trace })
}

fn line_search<T>(
    f: &mut impl FnMut(&[f64]) -> Result<Evaluation<T>>,
    x: &[f64],
    current: &Evaluation<T>,
    d: &[f64],
) -> Result<Option<(Vec<f64>, Evaluation<T>)>> {
    let slope = dot(&current.gradient, d);
    let mut alpha = 1.0;
    for _ in 0..MAX_BACKTRACKS {
        let trial: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect();
        match evaluate(f, &trial) {
            Ok(e) => {
                let armijo = e.value <= current.value + ARMIJO_C1 * alpha * slope;
                let certified = dot(&e.gradient, d) <= ARMIJO_C1 * slope;
                if armijo || certified {
                    return Ok(Some((trial, e)));
                }
            }
            // Overflow on an aggressive trial step; shorten it.
            Err(Error::NumericalFailure { .. }) => {}
            Err(other) => return Err(other),
        }
        alpha *= BACKTRACK;
    }
    Ok(None)
}
