//! Independent replay of every certificate this crate produces.
//!
//! Each check rebuilds the claimed identity from scratch with plain
//! operator arithmetic — never through the machinery that produced the
//! certificate — and reports one line per claim. Series checks apply
//! operators to closed-form solution coefficients computed directly from
//! binomials and factorials, a second route that shares nothing with
//! reduction or elimination.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::eliminate::EliminationResult;
use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::reduce::{make_system, GapReport, ReducedForm};
use crate::weyl::WeylOperator;
use crate::{Operator, Rational, Series, System};

/// One verified claim.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A bundle of checks that passes only if every line passes.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.lines.push(CheckLine { name: name.into(), pass, detail });
    }

    /// Record that `lhs == rhs` must hold exactly.
    fn identity(&mut self, name: &str, lhs: &Operator, rhs: &Operator) {
        if lhs == rhs {
            self.push(name, true, "both sides replay to the same operator".into());
        } else {
            self.push(name, false, format!("sides differ by {}", lhs - rhs));
        }
    }

    pub fn pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(
                f,
                "[{}] {}: {}",
                if line.pass { " ok " } else { "FAIL" },
                line.name,
                line.detail
            )?;
        }
        Ok(())
    }
}

/// Replay a fully reduced certificate against its system.
///
/// Checks the identity `L^max(k,1) * Dx^alpha * Dy^beta = remainder +
/// U*A + V*B`, that the remainder sits under the stairs, the round bound
/// `k <= max(0, alpha+beta+1-min(m,n))`, and the coefficient degree bound
/// `max(k,1) * d`.
pub fn check_reduction(sys: &System, rf: &ReducedForm<Rational>) -> Report {
    let mut rep = Report::new();
    let lhs = WeylOperator::term(rf.alpha, rf.beta, sys.l().pow(rf.l_power()));
    let rhs = &(&rf.remainder + &(&rf.cofactor_a * sys.a())) + &(&rf.cofactor_b * sys.b());
    rep.identity("certificate-identity", &lhs, &rhs);

    let inside = rf
        .remainder
        .terms()
        .all(|(om, _)| om.i < sys.m() && om.j < sys.n());
    rep.push(
        "remainder-within-stairs",
        inside,
        format!("every term has Dx-order < {} and Dy-order < {}", sys.m(), sys.n()),
    );

    let bound = (rf.alpha as i64 + rf.beta as i64 + 1 - sys.m().min(sys.n()) as i64).max(0);
    rep.push(
        "round-count",
        i64::from(rf.k) <= bound,
        format!("k = {} against the proved bound {}", rf.k, bound),
    );

    let deg = rf.remainder.coeff_degree();
    let allowed = rf.l_power() * sys.d();
    rep.push(
        "coefficient-degree",
        deg <= allowed,
        format!("largest coefficient degree {deg}, allowed {allowed}"),
    );
    rep
}

/// Replay a single-pass reduction certificate.
///
/// The identity is the same as for the full reduction, but the shape claim
/// is weaker: at most one round, every remainder term either under the
/// stairs or of strictly smaller total order, coefficients of degree at
/// most `d`.
pub fn check_step_reduction(sys: &System, rf: &ReducedForm<Rational>) -> Report {
    let mut rep = Report::new();
    let lhs = WeylOperator::term(rf.alpha, rf.beta, sys.l().pow(rf.l_power()));
    let rhs = &(&rf.remainder + &(&rf.cofactor_a * sys.a())) + &(&rf.cofactor_b * sys.b());
    rep.identity("certificate-identity", &lhs, &rhs);

    rep.push(
        "single-round",
        rf.k <= 1,
        format!("k = {} after one pass", rf.k),
    );

    let shaped = rf.remainder.terms().all(|(om, _)| {
        (om.i < sys.m() && om.j < sys.n()) || om.i + om.j < rf.alpha + rf.beta
    });
    rep.push(
        "remainder-shape",
        shaped,
        "every term is under the stairs or of smaller total order".into(),
    );

    let deg = rf.remainder.coeff_degree();
    rep.push(
        "coefficient-degree",
        deg <= sys.d(),
        format!("largest coefficient degree {deg}, allowed {}", sys.d()),
    );
    rep
}

/// Replay an elimination certificate: `L^level * S = U*A + V*B` with `S`
/// nonzero and free of `y`.
pub fn check_elimination(sys: &System, res: &EliminationResult) -> Report {
    let mut rep = Report::new();
    let lhs = res.s.mul_poly_left(&sys.l().pow(res.level));
    let rhs = &(&res.cofactor_a * sys.a()) + &(&res.cofactor_b * sys.b());
    rep.identity("certificate-identity", &lhs, &rhs);
    rep.push(
        "s-nonzero",
        !res.s.is_zero(),
        "the eliminated operator must not collapse to zero".into(),
    );
    rep.push(
        "s-free-of-y",
        res.s.coeffs_free_of_y(),
        "coefficients of S must be polynomials in x alone".into(),
    );
    rep
}

/// Replay both congruences of the gap demonstration and their shape
/// claims, including that the obstruction flag matches dL/dy.
pub fn check_gap(sys: &System, gap: &GapReport<Rational>) -> Report {
    let mut rep = Report::new();
    for (label, cert) in [("single-l", &gap.single_l), ("double-l", &gap.double_l)] {
        let lhs = WeylOperator::term(sys.m(), 1, sys.l().pow(cert.l_power));
        let rhs = &cert.remainder + &(&cert.cofactor_a * sys.a());
        rep.identity(&format!("{label}-identity"), &lhs, &rhs);
    }
    let single_ok = gap
        .single_l
        .remainder
        .terms()
        .all(|(om, _)| om.i <= sys.m() && om.j <= 1);
    rep.push(
        "single-l-orders",
        single_ok,
        format!("one round keeps Dx-order <= {} and Dy-order <= 1", sys.m()),
    );
    let double_ok = gap
        .double_l
        .remainder
        .terms()
        .all(|(om, _)| om.i < sys.m() && om.j <= 1);
    rep.push(
        "double-l-within-stairs",
        double_ok,
        format!("two rounds push every Dx-order below {}", sys.m()),
    );
    let stranded = gap
        .single_l
        .remainder
        .terms()
        .any(|(om, _)| om.i >= sys.m());
    let flag_ok =
        gap.obstruction_present == stranded && gap.obstruction_present == !gap.l_y.is_zero();
    rep.push(
        "obstruction-flag",
        flag_ok,
        format!(
            "flag {} with dL/dy = {} and a stranded term {}",
            gap.obstruction_present,
            gap.l_y,
            if stranded { "present" } else { "absent" }
        ),
    );
    rep
}

/// Apply `op` to a truncated solution and report whether it vanishes
/// through the trustworthy order.
pub fn check_annihilates(label: &str, op: &Operator, sol: &Series) -> Result<Report> {
    let residual = op.apply(sol)?;
    let mut rep = Report::new();
    let name = format!("{label}-annihilates-solution");
    match residual.first_nonzero() {
        None => rep.push(
            &name,
            true,
            format!(
                "application vanishes on all terms of total degree < {}",
                residual.order()
            ),
        ),
        Some((mono, c)) => rep.push(
            &name,
            false,
            format!("first nonzero residual {} at x^{}*y^{}", c, mono.degx, mono.degy),
        ),
    }
    Ok(rep)
}

/// Built-in systems with closed-form solutions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SampleSystem {
    /// Annihilators of 1/(1-x-y).
    Geometric,
    /// Annihilators of exp(x+y).
    Exponential,
    /// Annihilators of (1-x-y)^(-1/2).
    InverseSqrt,
}

impl SampleSystem {
    pub const ALL: [SampleSystem; 3] =
        [SampleSystem::Geometric, SampleSystem::Exponential, SampleSystem::InverseSqrt];

    pub fn name(self) -> &'static str {
        match self {
            SampleSystem::Geometric => "geometric",
            SampleSystem::Exponential => "exp",
            SampleSystem::InverseSqrt => "sqrt",
        }
    }
}

impl FromStr for SampleSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SampleSystem::ALL
            .into_iter()
            .find(|sys| sys.name() == s)
            .ok_or_else(|| Error::UnknownSystem(s.into()))
    }
}

impl fmt::Display for SampleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// 1 - x - y.
fn one_minus_x_minus_y() -> BiPoly<Rational> {
    BiPoly::from_terms([(0, 0, int(1)), (1, 0, int(-1)), (0, 1, int(-1))])
}

/// The validated operator pair for a built-in system.
pub fn sample_system(which: SampleSystem) -> System {
    let (a, b) = match which {
        SampleSystem::Geometric => {
            let l = one_minus_x_minus_y();
            (
                &Operator::term(1, 0, l.clone()) - &Operator::one(),
                &Operator::term(0, 1, l) - &Operator::one(),
            )
        }
        SampleSystem::Exponential => (
            &Operator::dx() - &Operator::one(),
            &Operator::dy() - &Operator::one(),
        ),
        SampleSystem::InverseSqrt => {
            let twice = one_minus_x_minus_y().scale(&int(2));
            (
                &Operator::term(1, 0, twice.clone()) - &Operator::one(),
                &Operator::term(0, 1, twice) - &Operator::one(),
            )
        }
    };
    make_system(a, b).expect("built-in systems are valid")
}

fn binomial(n: u32, k: u32) -> Rational {
    Rational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, v| acc * v)
}

/// Solution coefficients through total degree < `order`, from closed
/// forms: binomials for the geometric system, reciprocal factorials for
/// the exponential one, central-binomial ratios for the inverse square
/// root.
pub fn sample_solution(which: SampleSystem, order: u32) -> Series {
    match which {
        SampleSystem::Geometric => Series::from_fn(order, |s, t| binomial(s + t, s)),
        SampleSystem::Exponential => Series::from_fn(order, |s, t| {
            Rational::new(BigInt::one(), factorial(s) * factorial(t))
        }),
        SampleSystem::InverseSqrt => {
            // c_0 = 1, c_{k+1} = c_k * (2k+1)/(2k+2); the coefficient of
            // x^s y^t in (1 - x - y)^(-1/2) is c_{s+t} * C(s+t, s).
            let mut central = Vec::with_capacity(order as usize);
            let mut c = int(1);
            for k in 0..order {
                central.push(c.clone());
                c = c * Rational::new(BigInt::from(2 * k + 1), BigInt::from(2 * k + 2));
            }
            Series::from_fn(order, |s, t| {
                &central[(s + t) as usize] * binomial(s + t, s)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eliminate::{eliminate, Mode};
    use crate::reduce::{claim_gap_demo, reduce_full, reduce_step};
    use crate::Poly;

    #[test]
    fn sample_solutions_are_annihilated() {
        for which in SampleSystem::ALL {
            let sys = sample_system(which);
            let sol = sample_solution(which, 12);
            for (label, op) in [("A", sys.a()), ("B", sys.b())] {
                let rep = check_annihilates(label, op, &sol).unwrap();
                assert!(rep.pass(), "{which}: {label} failed:\n{rep}");
            }
        }
    }

    #[test]
    fn annihilation_check_reports_residuals() {
        let sol = sample_solution(SampleSystem::Geometric, 10);
        let rep = check_annihilates("Dx", &Operator::dx(), &sol).unwrap();
        assert!(!rep.pass());
        assert!(rep.lines[0].detail.contains("first nonzero residual"));
    }

    #[test]
    fn annihilation_check_rejects_short_series() {
        let sys = sample_system(SampleSystem::Geometric);
        let sol = sample_solution(SampleSystem::Geometric, 2);
        assert!(check_annihilates("A", sys.a(), &sol).is_err());
    }

    #[test]
    fn reduction_reports_pass_for_honest_certificates() {
        let sys = sample_system(SampleSystem::Geometric);
        for (alpha, beta) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)] {
            let rep = check_reduction(&sys, &reduce_full(&sys, alpha, beta));
            assert!(rep.pass(), "({alpha}, {beta}):\n{rep}");
            let rep = check_step_reduction(&sys, &reduce_step(&sys, alpha, beta));
            assert!(rep.pass(), "step ({alpha}, {beta}):\n{rep}");
        }
    }

    #[test]
    fn reduction_reports_catch_tampering() {
        let sys = sample_system(SampleSystem::Geometric);
        let mut rf = reduce_full(&sys, 1, 1);
        rf.remainder = &rf.remainder + &Operator::one();
        let rep = check_reduction(&sys, &rf);
        assert!(!rep.pass());
        let line = rep.lines.iter().find(|l| l.name == "certificate-identity").unwrap();
        assert!(!line.pass);
        assert!(line.detail.contains("differ"));
    }

    #[test]
    fn elimination_reports_pass_and_catch_tampering() {
        let sys = sample_system(SampleSystem::Geometric);
        let good = eliminate(&sys, Mode::Search, None).unwrap();
        assert!(check_elimination(&sys, &good).pass());

        let mut bad = good.clone();
        bad.cofactor_a = &bad.cofactor_a + &Operator::dy();
        let rep = check_elimination(&sys, &bad);
        assert!(!rep.pass());

        let mut leaky = good;
        leaky.s = &leaky.s + &Operator::term(0, 0, Poly::monomial(0, 1, int(1)));
        let rep = check_elimination(&sys, &leaky);
        let line = rep.lines.iter().find(|l| l.name == "s-free-of-y").unwrap();
        assert!(!line.pass);
    }

    #[test]
    fn gap_reports_pass_for_all_samples() {
        for which in SampleSystem::ALL {
            let sys = sample_system(which);
            let rep = check_gap(&sys, &claim_gap_demo(&sys));
            assert!(rep.pass(), "{which}:\n{rep}");
        }
    }

    #[test]
    fn sqrt_solution_matches_the_binomial_square() {
        // (sum c_k u^k)^2 must reproduce the geometric series in u = x+y:
        // spot-check the diagonal coefficients directly.
        let sol = sample_solution(SampleSystem::InverseSqrt, 8);
        assert_eq!(sol.coeff(0, 0), int(1));
        assert_eq!(sol.coeff(1, 0), Rational::new(1.into(), 2.into()));
        assert_eq!(sol.coeff(1, 1), Rational::new(3.into(), 4.into()));
        assert_eq!(sol.coeff(2, 1), Rational::new(15.into(), 16.into()));
    }

    #[test]
    fn system_names_round_trip() {
        for which in SampleSystem::ALL {
            assert_eq!(which.name().parse::<SampleSystem>().unwrap(), which);
        }
        assert!(matches!(
            "fibonacci".parse::<SampleSystem>(),
            Err(Error::UnknownSystem(_))
        ));
    }
}
