//! The symmetric rational identity
//! `sum_i prod_{j != i} (1 - t w_j/w_i) / (1 - w_j/w_i) = (1 - t^r)/(1 - t)`.

use crate::error::{ArithError, Result};
use crate::monomial::{Var, MAX_W};
use crate::scalar::Scalar;

/// Left-hand side for `r` auxiliary variables `w1..wr`.
pub fn sum_identity_lhs(r: usize) -> Result<Scalar> {
    if r == 0 || r > MAX_W {
        return Err(ArithError::Domain(format!(
            "r must lie in 1..={MAX_W}, got {r}"
        )));
    }
    let t = Scalar::t();
    let w: Vec<Scalar> = (1..=r as u8).map(|i| Scalar::var(Var::W(i))).collect();
    let mut acc = Scalar::zero();
    for i in 0..r {
        let mut prod = Scalar::one();
        for j in 0..r {
            if j == i {
                continue;
            }
            // (1 - t w_j/w_i)/(1 - w_j/w_i) = (w_i - t w_j)/(w_i - w_j)
            let num = w[i].sub(&t.mul(&w[j]));
            let den = w[i].sub(&w[j]);
            prod = prod.mul(&num.div(&den)?);
        }
        acc = acc.add(&prod);
    }
    Ok(acc)
}

/// Right-hand side `(1 - t^r)/(1 - t)`.
pub fn sum_identity_rhs(r: usize) -> Scalar {
    let t = Scalar::t();
    Scalar::one()
        .sub(&t.pow(r as u32))
        .div(&Scalar::one().sub(&t))
        .expect("1 - t is nonzero")
}

/// Whether the identity holds exactly for `r` variables.
pub fn verify_sum_identity(r: usize) -> Result<bool> {
    Ok(sum_identity_lhs(r)? == sum_identity_rhs(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(sum_identity_lhs(1).unwrap(), Scalar::one());
        assert_eq!(sum_identity_lhs(2).unwrap(), "1 + t".parse().unwrap());
        for r in 1..=4 {
            assert!(verify_sum_identity(r).unwrap(), "r = {r}");
        }
        assert!(verify_sum_identity(0).is_err());
    }
}
