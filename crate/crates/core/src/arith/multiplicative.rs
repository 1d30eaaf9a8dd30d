use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::factor::{factorize, FactoredInteger};
use super::primes::primes_up_to;
use super::{fmt_rational, parse_rational, pow_rational, Rational};
use crate::error::{Error, Result};

/// How `h(p^l)` is computed.
#[derive(Debug, Clone, PartialEq)]
pub enum PrimePowerRule {
    /// Divisor function: `l + 1`.
    Tau,
    /// Constant function 1.
    One,
    /// `2^omega(n)`: 2 at every prime power.
    TwoPowOmega,
    /// Closed-form rule over `(p, l)`; source text kept for serialisation.
    Expr { source: String, expr: Expr },
}

impl PrimePowerRule {
    pub fn builtin(id: &str) -> Option<Self> {
        match id {
            "tau" => Some(PrimePowerRule::Tau),
            "one" => Some(PrimePowerRule::One),
            "two_pow_omega" => Some(PrimePowerRule::TwoPowOmega),
            _ => None,
        }
    }

    pub fn expr(source: &str) -> Result<Self> {
        Ok(PrimePowerRule::Expr { source: source.to_string(), expr: Expr::parse(source)? })
    }
}

/// Parameters of the class `M(A, B)`.
///
/// `B` is a function of `epsilon`; at most one witness pair is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassParams {
    pub a: Rational,
    pub b_witness: Option<Rational>,
    pub epsilon_witness: Option<Rational>,
}

impl ClassParams {
    pub fn with_a(a: Rational) -> Self {
        ClassParams { a, b_witness: None, epsilon_witness: None }
    }
}

/// A non-negative multiplicative function given by its values on prime
/// powers, with `h(1) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeFunction {
    name: String,
    rule: PrimePowerRule,
    class_params: ClassParams,
}

impl MultiplicativeFunction {
    pub fn new(name: impl Into<String>, rule: PrimePowerRule, class_params: ClassParams) -> Self {
        MultiplicativeFunction { name: name.into(), rule, class_params }
    }

    pub fn tau() -> Self {
        Self::new("tau", PrimePowerRule::Tau, ClassParams::with_a(Rational::from_integer(2.into())))
    }

    pub fn one() -> Self {
        Self::new("one", PrimePowerRule::One, ClassParams::with_a(Rational::one()))
    }

    pub fn two_pow_omega() -> Self {
        Self::new(
            "two_pow_omega",
            PrimePowerRule::TwoPowOmega,
            ClassParams::with_a(Rational::from_integer(2.into())),
        )
    }

    pub fn from_builtin(id: &str) -> Result<Self> {
        match id {
            "tau" => Ok(Self::tau()),
            "one" => Ok(Self::one()),
            "two_pow_omega" => Ok(Self::two_pow_omega()),
            other => Err(Error::Parse(format!("unknown built-in function {other:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rule(&self) -> &PrimePowerRule {
        &self.rule
    }

    pub fn class_params(&self) -> &ClassParams {
        &self.class_params
    }

    /// True when every value is an integer and [`Self::eval_integer`] applies.
    pub fn is_integer_valued(&self) -> bool {
        !matches!(self.rule, PrimePowerRule::Expr { .. })
    }

    /// `h(p^l)` for `l >= 1`.
    pub fn at_prime_power(&self, p: u64, l: u32) -> Result<Rational> {
        debug_assert!(l >= 1);
        let v = match &self.rule {
            PrimePowerRule::Tau => Rational::from_integer(BigInt::from(l + 1)),
            PrimePowerRule::One => Rational::one(),
            PrimePowerRule::TwoPowOmega => Rational::from_integer(2.into()),
            PrimePowerRule::Expr { expr, source } => {
                let v = expr.eval(p, l)?;
                if v.is_negative() {
                    return Err(Error::Precondition(format!(
                        "rule {source:?} is negative at p={p}, l={l}"
                    )));
                }
                v
            }
        };
        Ok(v)
    }

    /// Fast path for the integer-valued built-ins.
    pub fn eval_integer(&self, n: &FactoredInteger) -> Option<u128> {
        match self.rule {
            PrimePowerRule::Tau => Some(n.factors().iter().map(|&(_, e)| e as u128 + 1).product()),
            PrimePowerRule::One => Some(1),
            PrimePowerRule::TwoPowOmega => Some(1u128 << n.factors().len()),
            PrimePowerRule::Expr { .. } => None,
        }
    }

    pub fn eval_factored(&self, n: &FactoredInteger) -> Result<Rational> {
        if let Some(v) = self.eval_integer(n) {
            return Ok(Rational::from_integer(v.into()));
        }
        n.factors()
            .iter()
            .try_fold(Rational::one(), |acc, &(p, e)| Ok(acc * self.at_prime_power(p, e)?))
    }

    pub fn eval(&self, n: u64) -> Result<Rational> {
        if n == 0 {
            return Err(Error::Zero("multiplicative function argument"));
        }
        self.eval_factored(&factorize(n)?)
    }
}

/// Result of a finite check of `h(p^l) <= A^l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub function: String,
    pub a: String,
    pub bound: u64,
    pub prime_powers_checked: u64,
    /// `(p, l, h(p^l))` for every violation.
    pub violations: Vec<(u64, u32, String)>,
    pub note: String,
}

impl MembershipReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every prime power `p^l <= bound` with `h(p^l) > A^l`.
///
/// Only the `A` condition can be certified on a finite range; the
/// `h(n) <= B(eps) n^eps` condition is not checked.
pub fn check_class_membership(
    h: &MultiplicativeFunction,
    a: &Rational,
    bound: u64,
) -> Result<MembershipReport> {
    if bound < 2 {
        return Err(Error::Precondition("bound must be at least 2".into()));
    }
    let mut violations = Vec::new();
    let mut checked = 0;
    for p in primes_up_to(bound) {
        let mut pl = p;
        let mut l = 1u32;
        loop {
            checked += 1;
            let v = h.at_prime_power(p, l)?;
            if v > pow_rational(a, l) {
                violations.push((p, l, fmt_rational(&v)));
            }
            match pl.checked_mul(p) {
                Some(next) if next <= bound => {
                    pl = next;
                    l += 1;
                }
                _ => break,
            }
        }
    }
    Ok(MembershipReport {
        function: h.name().to_string(),
        a: fmt_rational(a),
        bound,
        prime_powers_checked: checked,
        violations,
        note: "finite check of h(p^l) <= A^l only; the B(eps) growth condition is not certified"
            .into(),
    })
}

/// Configuration-file representation of a multiplicative function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "A")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "B")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
}

impl FunctionSpec {
    pub fn builtin(id: &str) -> Self {
        FunctionSpec {
            name: id.to_string(),
            builtin: Some(id.to_string()),
            rule: None,
            a: None,
            b: None,
            epsilon: None,
        }
    }

    pub fn build(&self) -> Result<MultiplicativeFunction> {
        let opt = |s: &Option<String>| s.as_deref().map(parse_rational).transpose();
        let mut h = match (&self.builtin, &self.rule) {
            (Some(id), None) => MultiplicativeFunction::from_builtin(id)?,
            (None, Some(src)) => {
                let a = opt(&self.a)?.ok_or_else(|| {
                    Error::Parse(format!("function {:?}: a rule needs an explicit A", self.name))
                })?;
                MultiplicativeFunction::new(
                    self.name.clone(),
                    PrimePowerRule::expr(src)?,
                    ClassParams::with_a(a),
                )
            }
            _ => {
                return Err(Error::Parse(format!(
                    "function {:?}: give exactly one of `builtin` or `rule`",
                    self.name
                )))
            }
        };
        h.name = self.name.clone();
        if let Some(a) = opt(&self.a)? {
            h.class_params.a = a;
        }
        h.class_params.b_witness = opt(&self.b)?;
        h.class_params.epsilon_witness = opt(&self.epsilon)?;
        Ok(h)
    }
}
