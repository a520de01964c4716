//! Printing in the input grammar, so `parse(print(e))` evaluates like `e`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::expr::{Expr, Kind};
use super::rational::{fmt_rational, CRational};

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Sum,
    Product,
    Atom,
}

fn fmt_exponent(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        if r.is_negative() {
            write!(f, "({})", r.numer())
        } else {
            write!(f, "{}", r.numer())
        }
    } else {
        write!(f, "({}/{})", r.numer(), r.denom())
    }
}

fn fmt_coeff_term(c: &CRational, t: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_one() {
        write_prec(t, Prec::Product, f)
    } else if *c == CRational::int(-1) {
        write!(f, "-")?;
        write_prec(t, Prec::Atom, f)
    } else {
        write!(f, "{c}*")?;
        write_prec(t, Prec::Product, f)
    }
}

fn write_prec(e: &Expr, ctx: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match e.kind() {
        Kind::Sum { .. } => Prec::Sum,
        Kind::Product(_) => Prec::Product,
        _ => Prec::Atom,
    };
    let paren = own < ctx;
    if paren {
        write!(f, "(")?;
    }
    match e.kind() {
        Kind::Const(c) => write!(f, "{c}")?,
        Kind::Coord(c) => write!(f, "{c}")?,
        Kind::Param(p) => write!(f, "{p}")?,
        Kind::Sum { constant, terms } => {
            let mut first = true;
            if !constant.is_zero() {
                write!(f, "{constant}")?;
                first = false;
            }
            for (c, t) in terms {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                fmt_coeff_term(c, t, f)?;
            }
        }
        Kind::Product(factors) => {
            for (k, (b, x)) in factors.iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                if x.is_one() {
                    write_prec(b, Prec::Product, f)?;
                } else {
                    match b.kind() {
                        Kind::Const(c) if c.is_real() && !c.re.is_negative() && c.re.is_integer() => {
                            fmt_rational(&c.re, f)?
                        }
                        Kind::Coord(_) | Kind::Param(_) => write_prec(b, Prec::Atom, f)?,
                        _ => {
                            // keep the base atomic, including unary-minus bases
                            write!(f, "(")?;
                            write_prec(b, Prec::Sum, f)?;
                            write!(f, ")")?;
                        }
                    }
                    write!(f, "^")?;
                    fmt_exponent(x, f)?;
                }
            }
        }
        Kind::Exp(a) => {
            write!(f, "exp(")?;
            write_prec(a, Prec::Sum, f)?;
            write!(f, ")")?;
        }
        Kind::Log(a) => {
            write!(f, "log(")?;
            write_prec(a, Prec::Sum, f)?;
            write!(f, ")")?;
        }
    }
    if paren {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, Prec::Sum, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_readably() {
        let e = &Expr::x(1).powi(2) + &Expr::x(2).scale(&CRational::int(-3));
        assert_eq!(e.to_string(), "(-3)*x2 + x1^2");
        assert_eq!(Expr::x(1).sqrt().recip().to_string(), "x1^(-1/2)");
        assert_eq!((&Expr::x(1) + &Expr::one()).powi(3).to_string(), "(1 + x1)^3");
        assert_eq!(Expr::imag_unit().to_string(), "(i)");
    }
}
