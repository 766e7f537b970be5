//! Polynomial building blocks for user-defined systems and data fields.

use alloc::vec::Vec;

use crate::math::Real;

/// `coef · Π_m u_m^{powers[m]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<u32>,
}

/// A multivariate polynomial as a sum of monomials in `n` variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64, n: usize) -> Self {
        Self::from_terms([(c, alloc::vec![0; n])])
    }

    /// `c · u_var` in `n` variables.
    pub fn linear(c: f64, var: usize, n: usize) -> Self {
        let mut p = alloc::vec![0; n];
        p[var] = 1;
        Self::from_terms([(c, p)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (f64, Vec<u32>)>) -> Self {
        Self {
            terms: terms
                .into_iter()
                .filter(|(c, _)| *c != 0.0)
                .map(|(coef, powers)| Monomial { coef, powers })
                .collect(),
        }
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.powers
                    .iter()
                    .zip(u)
                    .fold(t.coef, |acc, (&p, &x)| if p == 0 { acc } else { acc * x.powi(p as i32) })
            })
            .sum()
    }

    /// `∂/∂u_var` evaluated at `u`.
    pub fn eval_partial(&self, var: usize, u: &[f64]) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.powers.get(var).copied().unwrap_or(0) > 0)
            .map(|t| {
                let mut acc = t.coef * t.powers[var] as f64;
                for (m, (&p, &x)) in t.powers.iter().zip(u).enumerate() {
                    let e = if m == var { p - 1 } else { p };
                    if e > 0 {
                        acc *= x.powi(e as i32);
                    }
                }
                acc
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A curve `ξ ↦ U(ξ) ∈ ℝⁿ` with polynomial components
/// `U_j(ξ) = Σ_p coeffs[j][p] ξ^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    pub coeffs: Vec<Vec<f64>>,
}

impl PolyField {
    pub fn identity() -> Self {
        Self { coeffs: alloc::vec![alloc::vec![0.0, 1.0]] }
    }

    /// `U(ξ) = ξ · direction`.
    pub fn linear(direction: &[f64]) -> Self {
        Self {
            coeffs: direction.iter().map(|&d| alloc::vec![0.0, d]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// True when `U(0) = 0`.
    pub fn vanishes_at_origin(&self) -> bool {
        self.coeffs.iter().all(|c| c.first().copied().unwrap_or(0.0) == 0.0)
    }

    /// Value and the first two derivatives of component `j` at `xi`.
    pub fn jet(&self, j: usize, xi: f64) -> [f64; 3] {
        let c = &self.coeffs[j];
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &a in c.iter().rev() {
            d2 = d2 * xi + 2.0 * d1;
            d1 = d1 * xi + v;
            v = v * xi + a;
        }
        [v, d1, d2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partials_match_hand_derivatives() {
        // 3 u0^2 u1 - 2 u1^3 + 5
        let p = Polynomial::from_terms([
            (3.0, alloc::vec![2, 1]),
            (-2.0, alloc::vec![0, 3]),
            (5.0, alloc::vec![0, 0]),
        ]);
        let u = [0.7, -1.3];
        assert!((p.eval(&u) - (3.0 * 0.49 * -1.3 - 2.0 * (-1.3f64).powi(3) + 5.0)).abs() < 1e-14);
        assert!((p.eval_partial(0, &u) - 6.0 * 0.7 * -1.3).abs() < 1e-14);
        assert!((p.eval_partial(1, &u) - (3.0 * 0.49 - 6.0 * 1.69)).abs() < 1e-13);
    }

    #[test]
    fn field_jet_is_horner_consistent() {
        let f = PolyField { coeffs: alloc::vec![alloc::vec![0.0, 2.0, -1.0, 0.5]] };
        let xi = 0.3;
        let [v, d1, d2] = f.jet(0, xi);
        assert!((v - (2.0 * xi - xi * xi + 0.5 * xi.powi(3))).abs() < 1e-15);
        assert!((d1 - (2.0 - 2.0 * xi + 1.5 * xi * xi)).abs() < 1e-15);
        assert!((d2 - (-2.0 + 3.0 * xi)).abs() < 1e-15);
        assert!(f.vanishes_at_origin());
    }
}
