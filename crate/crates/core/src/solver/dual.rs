use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{shannon_entropy, DensityMatrix, HermitianOperator, Spectrum, SystemLayout};
use crate::linalg::operator::trace_product;
use crate::marginals::ConstraintSet;
use crate::{math, CMatrix, Error, Result, C64};

/// Operator basis `{O_i}` with targets `c_i`, as seen by the dual solver.
pub trait ConstraintFamily {
    fn layout(&self) -> &SystemLayout;

    fn targets(&self) -> &[f64];

    /// `out += Σ_i λ_i O_i`.
    fn accumulate(&self, lambdas: &[f64], out: &mut CMatrix);

    /// `tr(σ O_i)` for each `i`.
    fn expectations(&self, sigma: &CMatrix) -> Vec<f64>;

    /// Target marginals for [`crate::marginals::marginal_error`], when the
    /// family knows its regions.
    fn marginal_targets(&self) -> Option<Result<Vec<(Vec<usize>, DensityMatrix)>>> {
        None
    }
}

impl ConstraintFamily for ConstraintSet {
    fn layout(&self) -> &SystemLayout {
        ConstraintSet::layout(self)
    }

    fn targets(&self) -> &[f64] {
        ConstraintSet::targets(self)
    }

    fn accumulate(&self, lambdas: &[f64], out: &mut CMatrix) {
        for (m, &l) in self.masks().iter().zip(lambdas) {
            if l != 0.0 {
                m.accumulate(out, l);
            }
        }
    }

    fn expectations(&self, sigma: &CMatrix) -> Vec<f64> {
        self.masks().iter().map(|m| m.expectation(sigma)).collect()
    }

    fn marginal_targets(&self) -> Option<Result<Vec<(Vec<usize>, DensityMatrix)>>> {
        Some(self.region_states())
    }
}

/// Arbitrary dense Hermitian constraint operators.
#[derive(Debug, Clone)]
pub struct DenseConstraints {
    layout: SystemLayout,
    operators: Vec<HermitianOperator>,
    targets: Vec<f64>,
}

impl DenseConstraints {
    pub fn new(layout: SystemLayout, operators: Vec<HermitianOperator>, targets: Vec<f64>) -> Result<Self> {
        if operators.len() != targets.len() {
            return Err(Error::Layout(format!(
                "{} operators but {} targets",
                operators.len(),
                targets.len()
            )));
        }
        for op in &operators {
            layout.ensure_compatible(op.layout())?;
        }
        Ok(Self { layout, operators, targets })
    }

    /// Targets read off `rho`.
    pub fn from_state(rho: &DensityMatrix, operators: Vec<HermitianOperator>) -> Result<Self> {
        let targets = operators.iter().map(|o| rho.expectation(o)).collect::<Result<Vec<_>>>()?;
        Self::new(rho.layout().clone(), operators, targets)
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }
}

impl ConstraintFamily for DenseConstraints {
    fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    fn targets(&self) -> &[f64] {
        &self.targets
    }

    fn accumulate(&self, lambdas: &[f64], out: &mut CMatrix) {
        for (op, &l) in self.operators.iter().zip(lambdas) {
            if l != 0.0 {
                *out += op.matrix() * C64::new(l, 0.0);
            }
        }
    }

    fn expectations(&self, sigma: &CMatrix) -> Vec<f64> {
        self.operators.iter().map(|o| trace_product(sigma, o.matrix())).collect()
    }
}

/// `σ(λ) = exp(−Σ λ_i O_i) / Z` together with the dual quantities at `λ`.
#[derive(Debug, Clone)]
pub struct DualPoint {
    pub lambdas: Vec<f64>,
    pub sigma: DensityMatrix,
    pub log_z: f64,
    /// `⟨O_i⟩_σ`.
    pub expectations: Vec<f64>,
    /// `D(λ) = log Z + Σ λ_i c_i`.
    pub objective: f64,
    /// `∇D = c − ⟨O⟩_σ`.
    pub gradient: Vec<f64>,
    /// Entropy from the Boltzmann weights.
    pub entropy: f64,
}

impl DualPoint {
    /// `max_i |c_i − ⟨O_i⟩_σ|`.
    pub fn residual(&self) -> f64 {
        super::lbfgs::max_abs(&self.gradient)
    }
}

/// Evaluates the dual at `lambdas`. The exponent is shifted by its smallest
/// eigenvalue so that `exp` never overflows.
pub fn evaluate_dual<F: ConstraintFamily + ?Sized>(family: &F, lambdas: &[f64]) -> Result<DualPoint> {
    let targets = family.targets();
    if lambdas.len() != targets.len() {
        return Err(Error::Layout(format!(
            "{} multipliers for {} constraints",
            lambdas.len(),
            targets.len()
        )));
    }
    let layout = family.layout();
    let dim = layout.dim();
    let mut exponent = CMatrix::zeros(dim, dim);
    family.accumulate(lambdas, &mut exponent);
    let spectrum = Spectrum::of_hermitian(&exponent);
    let shift = spectrum.eigenvalues[0];
    let mut weights: Vec<f64> = spectrum.eigenvalues.iter().map(|&e| math::exp(-(e - shift))).collect();
    let partition: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= partition);
    let log_z = -shift + math::ln(partition);

    let sigma_matrix = spectrum.with_weights(&weights);
    let sigma = DensityMatrix::from_trusted(HermitianOperator::from_symmetrized(layout.clone(), sigma_matrix));
    let expectations = family.expectations(sigma.matrix());
    let objective = log_z + lambdas.iter().zip(targets).map(|(l, c)| l * c).sum::<f64>();
    let gradient: Vec<f64> = targets.iter().zip(&expectations).map(|(c, e)| c - e).collect();
    if !objective.is_finite() {
        let max_abs_lambda = super::lbfgs::max_abs(lambdas);
        return Err(Error::NumericalFailure { max_abs_lambda, lambdas: lambdas.to_vec() });
    }
    Ok(DualPoint {
        lambdas: lambdas.to_vec(),
        sigma,
        log_z,
        expectations,
        objective,
        gradient,
        entropy: shannon_entropy(weights),
    })
}

/// `(D(λ), ∇D(λ))`.
pub fn dual_objective<F: ConstraintFamily + ?Sized>(lambdas: &[f64], family: &F) -> Result<(f64, Vec<f64>)> {
    let p = evaluate_dual(family, lambdas)?;
    Ok((p.objective, p.gradient))
}
