use super::{assemble_forcing, finish, Method, ProblemSpec, Solution, VolterraOperator};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Neumann series for `v + K v = f`: `v_0 = f`, `v_{n+1} = f - K v_n`, stopped
/// on the sup-norm defect.
pub fn solve_picard<T: Scalar>(spec: &ProblemSpec<T>) -> Result<Solution<T>> {
    let op = VolterraOperator::new(spec)?;
    let f = assemble_forcing(spec)?;
    let tol = spec.params.tolerance;
    let mut v = f.clone();
    let mut history = Vec::new();
    for iteration in 1..=spec.params.max_iterations {
        let kv = op.apply(&v)?;
        let defect = VolterraOperator::defect(&v, &kv, &f);
        history.push(defect);
        if defect <= tol {
            return finish(spec, &op, &f, v, Method::Picard, iteration, history);
        }
        if !defect.is_finite() {
            break;
        }
        v = f.axpy(-T::one(), &kv)?;
    }
    Err(Error::NotConverged {
        tolerance: tol.as_f64(),
        history: history.into_iter().map(Scalar::as_f64).collect(),
    })
}
