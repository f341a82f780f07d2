use crate::error::{Error, Result};
use crate::exact_algebra::ThetaPoly;

/// `{f,g} = sum_i (df/dy^i dg/dpi_i - df/dpi_i dg/dy^i)` on phase space.
pub fn canonical_bracket(f: &ThetaPoly, g: &ThetaPoly) -> Result<ThetaPoly> {
    if !f.space().momenta || !g.space().momenta {
        return Err(Error::MissingMomenta);
    }
    if f.space() != g.space() {
        return Err(Error::DimensionMismatch { expected: f.space().nvars(), found: g.space().nvars() });
    }
    let n = f.dim();
    let mut acc = ThetaPoly::zero(f.space()).with_trunc(f.trunc().min(g.trunc()));
    for i in 0..n {
        let (fy, gp) = (f.d(i), g.d(n + i));
        if !fy.is_zero() && !gp.is_zero() {
            acc.add_assign_ref(&(&fy * &gp));
        }
        let (fp, gy) = (f.d(n + i), g.d(i));
        if !fp.is_zero() && !gy.is_zero() {
            acc = &acc - &(&fp * &gy);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::VarSpace;

    #[test]
    fn canonical_pairs() {
        let s = VarSpace::phase(2);
        let y1 = ThetaPoly::coord(s, 0);
        let y2 = ThetaPoly::coord(s, 1);
        let p1 = ThetaPoly::momentum(s, 0);
        let p2 = ThetaPoly::momentum(s, 1);
        assert_eq!(canonical_bracket(&y1, &p1).unwrap(), ThetaPoly::one(s));
        assert_eq!(canonical_bracket(&(&y1 * &p2), &y2).unwrap(), -&y1);
        assert!(canonical_bracket(&ThetaPoly::coord(VarSpace::coords(2), 0), &y1).is_err());
    }
}
