//! Derivatives of polynomial iterates via `ψ_(m+1) = ψ ∘ ψ_m`.

use crate::faadibruno::{compose_jets_log, composite::identity_jet, polynomial_jet, JetEntry};
use crate::logvalue::LogValue;
use crate::polynomials::Polynomial;

/// `jets[m][n] = ψ_m^(n)(x)` for `m = 0..=m_max`, `n = 0..=n_max`.
pub fn iterate_jets(psi: &Polynomial, x: f64, n_max: usize, m_max: usize) -> Vec<Vec<JetEntry>> {
    let mut out = Vec::with_capacity(m_max + 1);
    let id: Vec<JetEntry> = identity_jet(x, n_max).into_iter().map(JetEntry::exact).collect();
    out.push(id);
    for m in 0..m_max {
        let inner: Vec<LogValue> = out[m].iter().map(|e| e.value).collect();
        let outer = polynomial_jet(psi, inner[0], n_max);
        out.push(compose_jets_log(&outer, &inner));
    }
    out
}

/// `ψ_m^(n)(x)` for `n = 0..=n_max`.
pub fn iterate_jets_values(psi: &Polynomial, x: f64, n_max: usize, m: usize) -> Vec<LogValue> {
    let mut cur = identity_jet(x, n_max);
    for _ in 0..m {
        let outer = polynomial_jet(psi, cur[0], n_max);
        cur = compose_jets_log(&outer, &cur).into_iter().map(|e| e.value).collect();
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::rational_to_f64;

    #[test]
    fn matches_symbolic_iterates() {
        let psi: Polynomial = "1/2,-1/3,1".parse().unwrap();
        let x = 0.37;
        let jets = iterate_jets(&psi, x, 10, 4);
        for m in 0..=4 {
            let q = psi.iterate(m).unwrap();
            for n in 0..=10 {
                let exact = rational_to_f64(&q.nth_derivative(n).eval(&num_rational::BigRational::from_float(x).unwrap()));
                let got = jets[m][n].value.to_f64();
                assert!((got - exact).abs() <= 1e-9 * exact.abs().max(1e-9), "m={m} n={n} {got} {exact}");
            }
        }
        let v = iterate_jets_values(&psi, x, 10, 4);
        for n in 0..=10 {
            assert_eq!(v[n], jets[4][n].value);
        }
    }
}
