use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::euler::{euler_e, EulerProductSpec};
use super::nair::nair_rhs;
use super::{h_abs, s_sum, t_sum};
use crate::arith::{fmt_rational, rational_sig, rational_sum, Decimal, MultiplicativeFunction, Rational};
use crate::error::{Error, Result};
use crate::poly::{delta_f, shape_decompose, specialize, BinaryForm, UniPoly};
use crate::report::{rational_str, Table};

/// `max / min` of positive ratios; `None` if empty or some ratio is not
/// positive.
pub fn spread(ratios: &[Rational]) -> Option<Rational> {
    let min = ratios.iter().min()?;
    let max = ratios.iter().max()?;
    if !min.is_positive() {
        return None;
    }
    Some(max / min)
}

fn check_grid(grid: &[u64], least: u64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Precondition("grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be strictly increasing".into()));
    }
    if grid[0] < least {
        return Err(Error::Precondition(format!("grid values must be at least {least}")));
    }
    Ok(())
}

fn passes(spread: &Option<Rational>, threshold: &Rational) -> bool {
    spread.as_ref().is_some_and(|s| s < threshold)
}

fn opt_str(r: &Option<Rational>) -> String {
    r.as_ref().map(fmt_rational).unwrap_or_else(|| "undefined".into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub x1: u64,
    pub x2: u64,
    #[serde(with = "rational_str")]
    pub sum: Rational,
    pub zeros_skipped: u64,
    #[serde(with = "rational_str")]
    pub e: Rational,
    #[serde(with = "rational_str")]
    pub delta_f: Rational,
    #[serde(with = "rational_str")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub form: String,
    pub h: String,
    pub rows: Vec<BoundRow>,
    pub spread: String,
    #[serde(with = "rational_str")]
    pub threshold: Rational,
    pub passed: bool,
}

impl BoundReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["X1", "X2", "sum", "zeros_skipped", "E", "Delta_F", "ratio", "ratio_approx", "approx_sig_digits"]);
        for r in &self.rows {
            t.push(vec![
                r.x1.to_string(),
                r.x2.to_string(),
                fmt_rational(&r.sum),
                r.zeros_skipped.to_string(),
                fmt_rational(&r.e),
                fmt_rational(&r.delta_f),
                fmt_rational(&r.ratio),
                rational_sig(&r.ratio, 10),
                "10".into(),
            ]);
        }
        t
    }
}

/// `S(X, X; h, F) / (X^2 E)` along a square grid.
pub fn theorem1_harness(
    f: &BinaryForm,
    h: &MultiplicativeFunction,
    grid: &[u64],
    threshold: &Rational,
) -> Result<BoundReport> {
    check_grid(grid, 1)?;
    if !f.is_primitive() {
        return Err(Error::NotPrimitive(f.content().to_string()));
    }
    let shape = shape_decompose(f)?;
    let delta = delta_f(f)?;
    let mut rows = Vec::new();
    for &x in grid {
        let s = s_sum(x, x, h, f)?;
        let e = euler_e(&EulerProductSpec { shape: shape.clone(), h: h.clone(), x1: x, x2: x })?;
        let x2 = Rational::from_integer(BigInt::from(x) * BigInt::from(x));
        let ratio = &s.sum / (x2 * &e);
        rows.push(BoundRow { x1: x, x2: x, sum: s.sum, zeros_skipped: s.zeros_skipped, e, delta_f: delta.clone(), ratio });
    }
    let sp = spread(&rows.iter().map(|r| r.ratio.clone()).collect::<Vec<_>>());
    Ok(BoundReport {
        form: f.to_literal(),
        h: h.name().to_string(),
        passed: passes(&sp, threshold),
        spread: opt_str(&sp),
        threshold: threshold.clone(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogBoundRow {
    pub x: u64,
    #[serde(with = "rational_str")]
    pub sum: Rational,
    pub zeros_skipped: u64,
    /// `S / (X^2 ln X)` to ten significant digits.
    pub ratio: String,
}

/// Rows here are approximate: `ln X` is evaluated to `precision_digits`
/// decimal places.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogBoundReport {
    pub form: String,
    pub rows: Vec<LogBoundRow>,
    pub spread: String,
    #[serde(with = "rational_str")]
    pub threshold: Rational,
    pub precision_digits: u32,
    pub approximate: bool,
    pub passed: bool,
}

impl LogBoundReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["X", "sum", "zeros_skipped", "ratio", "precision_digits"]);
        for r in &self.rows {
            t.push(vec![
                r.x.to_string(),
                fmt_rational(&r.sum),
                r.zeros_skipped.to_string(),
                r.ratio.clone(),
                self.precision_digits.to_string(),
            ]);
        }
        t
    }
}

/// `S(X, X; tau, F) / (X^2 ln X)` along a grid.
pub fn corollary2_harness(f: &BinaryForm, grid: &[u64], threshold: &Rational, digits: u32) -> Result<LogBoundReport> {
    check_grid(grid, 2)?;
    let tau = MultiplicativeFunction::tau();
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for &x in grid {
        let s = s_sum(x, x, &tau, f)?;
        let scaled = &s.sum / Rational::from_integer(BigInt::from(x) * BigInt::from(x));
        let ln = Decimal::ln(&Rational::from_integer(x.into()), digits);
        let ratio = Decimal::from_rational(&scaled, digits).div(&ln);
        rows.push(LogBoundRow { x, sum: s.sum, zeros_skipped: s.zeros_skipped, ratio: ratio.to_sig_string(10) });
        ratios.push(ratio.to_rational());
    }
    let sp = spread(&ratios);
    Ok(LogBoundReport {
        form: f.to_literal(),
        rows,
        passed: passes(&sp, threshold),
        spread: sp.as_ref().map(|s| rational_sig(s, 10)).unwrap_or_else(|| "undefined".into()),
        threshold: threshold.clone(),
        precision_digits: digits,
        approximate: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NairRow {
    pub x: u64,
    #[serde(with = "rational_str")]
    pub sum: Rational,
    pub zeros_skipped: u64,
    #[serde(with = "rational_str")]
    pub rhs: Rational,
    #[serde(with = "rational_str")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NairReport {
    pub poly: String,
    pub h: String,
    pub rows: Vec<NairRow>,
    pub spread: String,
    #[serde(with = "rational_str")]
    pub threshold: Rational,
    pub passed: bool,
}

impl NairReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["X", "sum", "zeros_skipped", "rhs", "ratio", "ratio_approx", "approx_sig_digits"]);
        for r in &self.rows {
            t.push(vec![
                r.x.to_string(),
                fmt_rational(&r.sum),
                r.zeros_skipped.to_string(),
                fmt_rational(&r.rhs),
                fmt_rational(&r.ratio),
                rational_sig(&r.ratio, 10),
                "10".into(),
            ]);
        }
        t
    }
}

/// `T(X; h, f) / nair_rhs(X; h, f)` along a grid.
pub fn nair_harness(f: &UniPoly, h: &MultiplicativeFunction, grid: &[u64], threshold: &Rational) -> Result<NairReport> {
    check_grid(grid, 1)?;
    let mut rows = Vec::new();
    for &x in grid {
        let rhs = nair_rhs(x, h, f)?;
        let t = t_sum(x, h, f)?;
        let ratio = &t.sum / &rhs;
        rows.push(NairRow { x, sum: t.sum, zeros_skipped: t.zeros_skipped, rhs, ratio });
    }
    let sp = spread(&rows.iter().map(|r| r.ratio.clone()).collect::<Vec<_>>());
    Ok(NairReport {
        poly: f.to_literal(),
        h: h.name().to_string(),
        passed: passes(&sp, threshold),
        spread: opt_str(&sp),
        threshold: threshold.clone(),
        rows,
    })
}

/// Both sides of `S(X1, X2; h, F) <= sum_{n2 <= X2} h(n2^d2 q_n2) T(X1; h, f_n2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub x1: u64,
    pub x2: u64,
    #[serde(with = "rational_str")]
    pub lhs: Rational,
    #[serde(with = "rational_str")]
    pub rhs: Rational,
    pub holds: bool,
}

pub fn inequality_31(f: &BinaryForm, h: &MultiplicativeFunction, x1: u64, x2: u64) -> Result<InequalityCheck> {
    if !f.is_primitive() {
        return Err(Error::NotPrimitive(f.content().to_string()));
    }
    let shape = shape_decompose(f)?;
    let lhs = s_sum(x1, x2, h, f)?.sum;
    let mut terms = Vec::new();
    for n2 in 1..=x2 {
        let sp = specialize(&shape, n2)?;
        let weight = h_abs(h, &(num_traits::pow(BigInt::from(n2), shape.d2 as usize) * &sp.q))?;
        if weight.is_zero() {
            continue;
        }
        terms.push(weight * t_sum(x1, h, &sp.f)?.sum);
    }
    let rhs = rational_sum(terms);
    let holds = lhs <= rhs;
    Ok(InequalityCheck { x1, x2, lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64s(c).unwrap()
    }

    #[test]
    fn spread_basics() {
        assert_eq!(spread(&[rat(1, 2), rat(3, 4)]), Some(rat(3, 2)));
        assert_eq!(spread(&[rat(5, 3)]), Some(rat_int(1)));
        assert_eq!(spread(&[]), None);
        assert_eq!(spread(&[rat_int(0), rat_int(1)]), None);
    }

    #[test]
    fn theorem1_with_one_counts_nonzeros() {
        let r = theorem1_harness(&form(&[1, -1]), &MultiplicativeFunction::one(), &[4, 8], &rat_int(2)).unwrap();
        assert_eq!(r.rows[0].ratio, rat(12, 16));
        assert_eq!(r.rows[1].ratio, rat(56, 64));
        assert!(r.passed);
    }

    #[test]
    fn theorem1_small_cubic() {
        let r = theorem1_harness(&form(&[1, 0, 0, 2]), &MultiplicativeFunction::tau(), &[10, 20, 40], &rat_int(2)).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.rows[0].delta_f, rat_int(2));
    }

    #[test]
    fn grid_validation() {
        let tau = MultiplicativeFunction::tau();
        assert!(theorem1_harness(&form(&[1, 0, 1]), &tau, &[], &rat_int(2)).is_err());
        assert!(theorem1_harness(&form(&[1, 0, 1]), &tau, &[4, 4], &rat_int(2)).is_err());
        assert!(corollary2_harness(&form(&[1, 0, 1]), &[1, 4], &rat_int(2), 50).is_err());
    }

    #[test]
    fn corollary2_single_point() {
        let r = corollary2_harness(&form(&[1, 0, 1]), &[10], &rat_int(2), 50).unwrap();
        assert!(r.passed && r.approximate);
        assert_eq!(r.rows[0].ratio.len(), 11, "{}", r.rows[0].ratio);
    }

    #[test]
    fn nair_small() {
        let r = nair_harness(&UniPoly::from_i64s(&[1, 0, 1]), &MultiplicativeFunction::tau(), &[10, 100], &rat_int(2)).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio.is_positive()));
    }

    #[test]
    fn inequality_small() {
        for h in [MultiplicativeFunction::tau(), MultiplicativeFunction::one(), MultiplicativeFunction::two_pow_omega()] {
            let c = inequality_31(&form(&[0, 2, 3, 0]), &h, 12, 9).unwrap();
            assert!(c.holds, "{c:?}");
        }
        let c = inequality_31(&form(&[1, 0, 1]), &MultiplicativeFunction::one(), 5, 5).unwrap();
        assert_eq!(c.lhs, c.rhs);
    }
}
