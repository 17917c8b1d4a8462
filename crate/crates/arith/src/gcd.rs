//! Multivariate polynomial gcd.
//!
//! Content and monomial content are split off first, then variables that
//! occur in only one operand are eliminated through coefficient contents.
//! What remains goes to the heuristic integer-evaluation gcd, whose answer
//! is always confirmed by trial division; if it gives up, the recursive
//! content/primitive-part algorithm with a subresultant remainder sequence
//! takes over.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::monomial::Monomial;
use crate::mpoly::MPoly;

/// Stop the heuristic once evaluation images would exceed this many bits.
const HEURISTIC_BIT_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Strategy {
    Heuristic,
    Subresultant,
}

/// Greatest common divisor with positive leading coefficient. The integer
/// content of the result is the gcd of the operands' contents.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    gcd_with(a, b, Strategy::Heuristic)
}

/// Same contract as [`gcd`] but never uses the evaluation heuristic.
pub fn gcd_subresultant(a: &MPoly, b: &MPoly) -> MPoly {
    gcd_with(a, b, Strategy::Subresultant)
}

/// Least common multiple with positive leading coefficient.
pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    let l = a.div_exact(&g).expect("gcd divides").mul(b);
    positive(l)
}

fn positive(p: MPoly) -> MPoly {
    if p.leading_coeff().is_negative() {
        p.neg()
    } else {
        p
    }
}

fn gcd_with(a: &MPoly, b: &MPoly, strategy: Strategy) -> MPoly {
    if a.is_zero() {
        return positive(b.clone());
    }
    if b.is_zero() {
        return positive(a.clone());
    }
    let (ca, cb) = (a.content(), b.content());
    let c = ca.gcd(&cb);
    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    let m = ma.gcd(&mb);
    let pa = strip(a, &ca, &ma);
    let pb = strip(b, &cb, &mb);
    let g = gcd_primitive(&pa, &pb, strategy);
    g.mul_term(&m, &c)
}

/// Divides out integer content and monomial content; positive leading
/// coefficient.
fn strip(p: &MPoly, content: &BigInt, mono: &Monomial) -> MPoly {
    let c = if p.leading_coeff().is_negative() {
        -content
    } else {
        content.clone()
    };
    let terms = p
        .terms()
        .iter()
        .map(|(m, k)| {
            (
                mono.quotient_of(m).expect("monomial content divides"),
                k / &c,
            )
        })
        .collect();
    MPoly::from_sorted(terms)
}

fn gcd_primitive(a: &MPoly, b: &MPoly, strategy: Strategy) -> MPoly {
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.clone();
    }
    let (sa, sb) = (a.support(), b.support());
    if sa != sb {
        // A variable present in only one operand cannot divide the gcd.
        let (with, other, only) = if sa & !sb != 0 {
            (a, b, sa & !sb)
        } else {
            (b, a, sb & !sa)
        };
        let v = only.trailing_zeros() as usize;
        let mut g = other.clone();
        for c in with.coefficients_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd_with(&g, &c, strategy);
            if g.is_one() {
                break;
            }
        }
        return positive(g);
    }
    if a.len() <= b.len() {
        if b.div_exact(a).is_some() {
            return a.clone();
        }
    } else if a.div_exact(b).is_some() {
        return b.clone();
    }
    if strategy == Strategy::Heuristic {
        if let Some(g) = gcd_heuristic(a, b) {
            return g;
        }
    }
    gcd_prs(a, b, strategy)
}

fn main_variable(support: u16) -> usize {
    15 - support.leading_zeros() as usize
}

fn gcd_heuristic(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let v = main_variable(a.support() | b.support());
    let deg = a.degree_in(v).max(b.degree_in(v)) as u64;
    let mut xi: BigInt = a.max_norm().min(b.max_norm()) * 2 + 29;
    for _ in 0..6 {
        if xi.bits() * (deg + 1) > HEURISTIC_BIT_LIMIT {
            return None;
        }
        let ae = a.eval_var_int(v, &xi);
        let be = b.eval_var_int(v, &xi);
        if !ae.is_zero() && !be.is_zero() {
            let h = gcd(&ae, &be);
            let g = interpolate(h, v, &xi).primitive_part();
            if !g.is_zero() && a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                return Some(g);
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

/// Reads the base-`xi` digits (symmetric range) of an evaluation image as
/// the coefficients of successive powers of variable `v`.
fn interpolate(mut h: MPoly, v: usize, xi: &BigInt) -> MPoly {
    let half = xi / 2;
    let mut terms = Vec::new();
    let mut e: u16 = 0;
    while !h.is_zero() {
        let digit = MPoly::from_terms(h.terms().iter().map(|(m, c)| {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            (*m, r)
        }));
        for (m, c) in digit.terms() {
            terms.push((m.with_exponent(v, e), c.clone()));
        }
        h = h
            .sub(&digit)
            .div_int_exact(xi)
            .expect("digit removal leaves a multiple of xi");
        e = e.checked_add(1).expect("interpolation degree overflow");
    }
    MPoly::from_terms(terms)
}

// Univariate polynomials over the remaining variables; index = degree,
// no trailing zeros.
type UPoly = Vec<MPoly>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn gcd_prs(a: &MPoly, b: &MPoly, strategy: Strategy) -> MPoly {
    let v = main_variable(a.support() | b.support());
    let mut ua = a.coefficients_in(v);
    let mut ub = b.coefficients_in(v);
    trim(&mut ua);
    trim(&mut ub);
    let ca = upoly_content(&ua, strategy);
    let cb = upoly_content(&ub, strategy);
    let c = gcd_with(&ca, &cb, strategy);
    let ua = upoly_div(&ua, &ca);
    let ub = upoly_div(&ub, &cb);
    let (big, small) = if ua.len() >= ub.len() { (ua, ub) } else { (ub, ua) };
    let r = subresultant_last(big, small);
    if r.len() <= 1 {
        return c;
    }
    let rc = upoly_content(&r, strategy);
    let r = upoly_div(&r, &rc);
    positive(MPoly::from_coefficients_in(v, &r).mul(&c))
}

fn upoly_content(p: &UPoly, strategy: Strategy) -> MPoly {
    let mut g = MPoly::zero();
    for c in p {
        if c.is_zero() {
            continue;
        }
        g = gcd_with(&g, c, strategy);
        if g.is_one() {
            break;
        }
    }
    g
}

fn upoly_div(p: &UPoly, d: &MPoly) -> UPoly {
    if d.is_one() {
        return p.clone();
    }
    p.iter()
        .map(|c| c.div_exact(d).expect("content divides coefficient"))
        .collect()
}

fn pseudo_remainder(a: &UPoly, b: &UPoly) -> UPoly {
    let db = b.len() - 1;
    let lb = b.last().expect("nonzero divisor").clone();
    let mut r = a.clone();
    let mut steps = 0usize;
    let total = a.len() - b.len() + 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&bc.mul(&lr));
        }
        trim(&mut r);
        steps += 1;
    }
    if steps < total {
        let f = lb.pow((total - steps) as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

/// Last nonzero member of the subresultant remainder sequence.
fn subresultant_last(mut a: UPoly, mut b: UPoly) -> UPoly {
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = pseudo_remainder(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return r;
        }
        let denom = g.mul(&h.pow(delta));
        a = b;
        b = upoly_div(&r, &denom);
        g = a.last().expect("nonzero").clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d)
                .div_exact(&h.pow(d - 1))
                .expect("subresultant division is exact"),
        };
    }
}

/// Convenience: `true` when the two polynomials share no nonunit factor.
pub fn coprime(a: &MPoly, b: &MPoly) -> bool {
    let g = gcd(a, b);
    g.is_constant() && g.as_constant().is_some_and(|c| c.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Var;

    fn p(s: &str) -> MPoly {
        crate::parse::parse_poly(s).unwrap()
    }

    #[test]
    fn simple_gcds() {
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x - y")), p("y - x"));
        assert_eq!(gcd(&p("6*x"), &p("4*x^2")), p("2*x"));
        assert_eq!(gcd(&p("x + 1"), &p("y + 1")), MPoly::one());
        assert_eq!(gcd(&MPoly::zero(), &p("-3*x")), p("3*x"));
    }

    #[test]
    fn both_strategies_find_planted_factor() {
        let g = p("x^3*y - 2*x*y^2 + l + 7");
        let a = g.mul(&p("x^2 + y^3 - 1"));
        let b = g.mul(&p("x*y - l^2 + 3"));
        let expect = positive(g);
        assert_eq!(gcd(&a, &b), expect);
        assert_eq!(gcd_subresultant(&a, &b), expect);
    }

    #[test]
    fn one_sided_variables() {
        let a = p("(x + 1)*(y^2 + 3)").mul(&MPoly::var(Var::L));
        let b = p("(x + 1)*(x - 5)");
        assert_eq!(gcd(&a, &b), p("x + 1"));
        assert_eq!(gcd_subresultant(&a, &b), p("x + 1"));
    }

    #[test]
    fn lcm_of_overlapping() {
        assert_eq!(lcm(&p("x^2 - 1"), &p("x + 1")), p("x^2 - 1"));
        assert!(coprime(&p("x + y"), &p("x - y")));
    }
}
