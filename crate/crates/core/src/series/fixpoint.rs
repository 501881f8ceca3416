//! x-adic fixed-point iteration `u = phi(u)`.

use num_traits::Zero;

use super::Series;
use crate::error::{Error, Result};
use crate::rat::Rat;

const MAX_RESTARTS: usize = 6;

/// Solves `u = phi(u)` to `order` coefficients by iterating from `u = 0`.
///
/// `phi` receives the current iterate at some working order and may return
/// fewer coefficients (division by `x`); the working order is raised until
/// `order` coefficients survive. Each iteration of a contractive map fixes at
/// least one more coefficient, so at most `order + 2` iterations are run.
/// A converged solution is then probed: perturbing it at its leading index
/// must move `phi` only at strictly higher indices.
pub fn solve_fixpoint<F>(order: usize, mut phi: F) -> Result<Series>
where
    F: FnMut(&Series) -> Result<Series>,
{
    let mut work = order + 4;
    'restart: for _ in 0..MAX_RESTARTS {
        let mut u = Series::zero(work);
        for _ in 0..order + 2 {
            let next = phi(&u)?;
            if next.order() < order {
                work += order - next.order() + 2;
                continue 'restart;
            }
            let next = next.pad(work).truncate(work);
            let settled = u.coeffs()[..order] == next.coeffs()[..order];
            u = next;
            if settled {
                probe(&u, order, &mut phi)?;
                return Ok(u.truncate(order));
            }
        }
        let last = phi(&u)?;
        let fixed = u.coeffs().iter().zip(last.coeffs()).take_while(|(a, b)| a == b).count();
        return Err(Error::NotContractive(format!(
            "only {fixed} of {order} coefficients settled after {} iterations",
            order + 2
        )));
    }
    Err(Error::NotContractive(format!("coefficients keep being lost to division by x (working order {work})")))
}

fn probe<F>(u: &Series, order: usize, phi: &mut F) -> Result<()>
where
    F: FnMut(&Series) -> Result<Series>,
{
    let lead = u.valuation().unwrap_or(0);
    if lead >= order {
        return Ok(());
    }
    let base = phi(u)?;
    let mut bumped = u.clone();
    let mut c = bumped.coeffs()[lead].clone();
    c += Rat::from_integer(1.into());
    let mut coeffs = bumped.into_coeffs();
    coeffs[lead] = c;
    bumped = Series::from_coeffs(coeffs);
    let moved = phi(&bumped).map_err(|e| Error::NotContractive(format!("perturbed iterate: {e}")))?;
    let n = order.min(moved.order()).min(base.order());
    let first_change = (0..n).find(|&i| !(&moved.coeffs()[i] - &base.coeffs()[i]).is_zero());
    match first_change {
        Some(i) if i <= lead => {
            Err(Error::NotContractive(format!("a change at index {lead} moves the image at index {i}")))
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{parse_expr, Expr};

    fn solve(src: &str, order: usize) -> Result<Series> {
        let e: Expr = parse_expr(src).unwrap();
        solve_fixpoint(order, |u| {
            let v = u.clone();
            e.eval(u.order(), &move |s: &str| (s == "u").then(|| v.clone()))
        })
    }

    fn ints(s: &Series) -> Vec<i64> {
        s.to_integers().unwrap().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn ternary_numbers() {
        assert_eq!(ints(&solve("1 + x*u^3", 7).unwrap()), vec![1, 1, 3, 12, 55, 273, 1428]);
    }

    #[test]
    fn catalan_matches_closed_form() {
        let c = solve("1 + x*u^2", 16).unwrap();
        let closed = Series::parse("(1-sqrt(1-4*x))/(2*x)", 16).unwrap();
        assert_eq!(c, closed);
    }

    #[test]
    fn schroeder_from_division_by_x() {
        // u/x = 1 + u + u^2/x
        let u = solve("x*(1 + u + u^2/x)", 8).unwrap();
        assert_eq!(ints(&u), vec![0, 1, 2, 6, 22, 90, 394, 1806]);
    }

    #[test]
    fn cubic_with_negative_x_power() {
        // u/x = 1 + u + u^3/x^2
        let u = solve("x*(1 + u + u^3/x^2)", 9).unwrap();
        assert_eq!(ints(&u)[1..], [1, 2, 8, 44, 280, 1936, 14128, 107088]);
    }

    #[test]
    fn output_is_a_fixed_point() {
        let e = parse_expr("x*(1 + x*u + u^2/x)").unwrap();
        let u = solve("x*(1 + x*u + u^2/x)", 20).unwrap();
        let v = u.clone();
        let image = e.eval(24, &move |s: &str| (s == "u").then(|| v.pad(24))).unwrap();
        assert!(image.equal_to(&u, 18).unwrap());
    }

    #[test]
    fn identity_map_is_rejected() {
        assert!(matches!(solve("u", 6), Err(Error::NotContractive(_))));
        assert!(matches!(solve("2*u - u + 0*x", 6), Err(Error::NotContractive(_))));
    }

    #[test]
    fn expanding_map_is_rejected() {
        // u = 1 + 2u never settles
        assert!(matches!(solve("1 + 2*u", 6), Err(Error::NotContractive(_))));
    }
}
