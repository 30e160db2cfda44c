//! Fixtures shared by the benchmarks.

use jacobi_core::{CoefficientSequence, FamilySpec, JFraction, KreinPolynomial, SFraction, SRule, TruncatedJacobi};

/// Truncation sizes benchmarked for the eigensolver and the sweep.
pub const SIZES: [usize; 3] = [100, 400, 1600];

pub fn lommel() -> CoefficientSequence {
    FamilySpec::Lommel { nu: 1.0 }.build().expect("valid family")
}

pub fn natvig() -> CoefficientSequence {
    FamilySpec::Natvig { lambda: 1.0, mu: 2.0 }.build().expect("valid family")
}

pub fn section(c: &CoefficientSequence, n: usize) -> TruncatedJacobi {
    c.truncate(n).expect("positive size")
}

pub fn linear_sfraction() -> SFraction {
    SFraction::rule(SRule::Linear { offset: 1.0, slope: 1.0 }).expect("positive rule")
}

pub fn chebyshev_jfraction() -> JFraction {
    let c = FamilySpec::Chebyshev { a: 1.0, b: 0.0 }.build().expect("valid family");
    JFraction::from_sequence(1.0, &c)
}

/// `G(x) = x^2 - 1`.
pub fn krein_unit() -> KreinPolynomial {
    KreinPolynomial::new(vec![-1.0, 1.0]).expect("distinct roots")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(section(&lommel(), 10).n(), 10);
        assert_eq!(krein_unit().degree(), 2);
        let _ = (natvig(), linear_sfraction(), chebyshev_jfraction());
    }
}
