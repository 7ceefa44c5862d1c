// SPDX-License-Identifier: Apache-2.0

//! Naive and canonical heights on `X² − ΔY² = 4`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive, Zero};

use crate::conic::{ConicPoint, PellConic};
use crate::error::{Error, Result};
use crate::ring::Exact;
use crate::{IntPoint, RatPoint};

/// Largest doubling count accepted by [`canonical_height_limit`].
pub const MAX_LIMIT_ITERATIONS: u32 = 12;

fn real<F: FromPrimitive>(v: f64) -> F {
    F::from_f64(v).expect("float conversion")
}

/// Natural logarithm of `|n|` for `n ≠ 0`, from its leading 60 bits.
pub fn ln_abs<F: Float + FromPrimitive>(n: &BigInt) -> F {
    let bits = n.bits();
    if bits <= 60 {
        return real::<F>(n.abs().to_f64().expect("small integer")).ln();
    }
    let shift = bits - 60;
    let top = (n.abs() >> shift).to_f64().expect("60-bit integer");
    real::<F>(top).ln() + real::<F>(shift as f64) * F::from_f64(std::f64::consts::LN_2).unwrap()
}

/// `H(m/n) = log max(|m|, |n|)`.
pub fn naive_height<F: Float + FromPrimitive>(q: &BigRational) -> F {
    if q.is_zero() {
        return F::zero();
    }
    let m = q.numer().abs();
    let n = q.denom().abs();
    ln_abs(if m > n { &m } else { &n })
}

/// `H(P) = H(x)`.
pub fn point_height<F: Float + FromPrimitive>(p: &RatPoint) -> F {
    naive_height(&p.x)
}

/// `(r, s, n)` with `x = r/n`, `y = s/n`, `n > 0` minimal.
pub fn common_denominator(p: &RatPoint) -> (BigInt, BigInt, BigInt) {
    let n = p.x.denom().lcm(p.y.denom());
    let r = p.x.numer() * (&n / p.x.denom());
    let s = p.y.numer() * (&n / p.y.denom());
    (r, s, n)
}

/// `ĥ(P) = log((|r| + |s|√Δ)/2)` for Δ > 0 and `log n` for Δ < 0.
pub fn canonical_height_closed<F: Float + FromPrimitive>(conic: &PellConic, p: &RatPoint) -> Result<F> {
    if !conic.on_curve(&Exact::<BigRational>::new(), p) {
        return Err(Error::NotOnCurve);
    }
    let (r, s, n) = common_denominator(p);
    if conic.delta() < 0 {
        return Ok(ln_abs(&n));
    }
    let ln2 = real::<F>(std::f64::consts::LN_2);
    if s.is_zero() {
        return Ok(ln_abs::<F>(&r) - ln2);
    }
    // ln|r| + ln(1 + |s|√Δ/|r|) − ln 2
    let half_ln_delta = real::<F>(conic.delta() as f64).ln() / real(2.0);
    let ln_ratio = ln_abs::<F>(&s) - ln_abs::<F>(&r) + half_ln_delta;
    Ok(ln_abs::<F>(&r) + ln_ratio.exp().ln_1p() - ln2)
}

/// `H(2^k P)/2^k`, with the doublings in exact rational arithmetic.
pub fn canonical_height_limit<F: Float + FromPrimitive>(conic: &PellConic, p: &RatPoint, k: u32) -> Result<F> {
    let ring = Exact::<BigRational>::new();
    if !conic.on_curve(&ring, p) {
        return Err(Error::NotOnCurve);
    }
    if k > MAX_LIMIT_ITERATIONS {
        return Err(Error::OutOfRange(format!("{k} doublings exceeds {MAX_LIMIT_ITERATIONS}")));
    }
    let mut q = p.clone();
    for _ in 0..k {
        q = conic.double(&ring, &q);
    }
    Ok(point_height::<F>(&q) / real((1u64 << k) as f64))
}

/// `R(C) = ĥ(η) = log((x1 + y1√Δ)/2)` for the fundamental point `η`.
pub fn regulator<F: Float + FromPrimitive>(conic: &PellConic) -> Result<F> {
    if conic.delta() < 0 {
        return Err(Error::NonPositiveDiscriminant(conic.delta()));
    }
    canonical_height_closed(conic, &conic.fundamental_point()?.to_rational())
}

/// Deterministic sample of `count` rational points.
///
/// For Δ > 0: `kη + T` for `k = 0, 1, −1, 2, −2, …` and `T ∈ {N, −N}`.
/// For Δ < 0: the torsion points, then the line through `N` with slopes
/// `u/v` ordered by `max(|u|, v)`.
pub fn sample_points(conic: &PellConic, count: usize) -> Result<Vec<RatPoint>> {
    let mut out: Vec<RatPoint> = Vec::with_capacity(count);
    if conic.delta() > 0 {
        let ring = Exact::<BigInt>::new();
        let eta = conic.fundamental_point()?;
        let torsion = conic.torsion_points();
        let mut q = conic.neutral(&ring);
        let mut q_neg = q.clone();
        for k in 0.. {
            for base in if k == 0 { vec![&q] } else { vec![&q, &q_neg] } {
                for t in &torsion {
                    if out.len() == count {
                        return Ok(out);
                    }
                    out.push(conic.add(&ring, base, t).to_rational());
                }
            }
            q = conic.add(&ring, &q, &eta);
            q_neg = conic.sub(&ring, &q_neg, &eta);
        }
        unreachable!()
    }
    out.extend(conic.torsion_points().iter().map(IntPoint::to_rational).take(count));
    let mut bound = 1i64;
    while out.len() < count {
        for v in 1..=bound {
            for u in -bound..=bound {
                if u == 0 || v.gcd(&u) != 1 || (u.abs() != bound && v != bound) {
                    continue;
                }
                let t = BigRational::new(u.into(), v.into());
                if let Some(p) = conic.point_from_slope(&t) {
                    if out.len() < count && !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        bound += 1;
    }
    Ok(out)
}

/// Whether a rational point is one of the torsion points.
pub fn is_torsion(conic: &PellConic, p: &RatPoint) -> bool {
    conic.torsion_points().iter().any(|t| &t.to_rational() == p)
}

/// The point `(r/n, s/n)`.
pub fn from_common_denominator(r: i64, s: i64, n: i64) -> RatPoint {
    ConicPoint::new(BigRational::new(r.into(), n.into()), BigRational::new(s.into(), n.into()))
}

/// Convenience for callers holding `f64` heights.
pub fn closed_f64(conic: &PellConic, p: &RatPoint) -> Result<f64> {
    canonical_height_closed::<f64>(conic, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic(delta: i64) -> PellConic {
        PellConic::from_discriminant(delta).unwrap()
    }

    fn q(m: i64, n: i64) -> BigRational {
        BigRational::new(m.into(), n.into())
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive_height::<f64>(&q(0, 1)), 0.0);
        assert!((naive_height::<f64>(&q(7, 3)) - 7f64.ln()).abs() < 1e-15);
        assert!((naive_height::<f64>(&q(-14, 25)) - 25f64.ln()).abs() < 1e-15);
        assert!((naive_height::<f64>(&q(14, 28)) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn big_logarithms() {
        let n = BigInt::from(3u8).pow(200);
        assert!((ln_abs::<f64>(&n) - 200.0 * 3f64.ln()).abs() < 1e-12);
        assert!((ln_abs::<f64>(&-n) - 200.0 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let c5 = conic(5);
        assert_eq!(closed_f64(&c5, &from_common_denominator(2, 0, 1)).unwrap(), 0.0);
        let h = closed_f64(&c5, &from_common_denominator(3, 1, 1)).unwrap();
        assert!((h - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
        assert!((h - 0.962424).abs() < 1e-6);
        let c4 = conic(-4);
        let p = from_common_denominator(6, 4, 5);
        assert!((closed_f64(&c4, &p).unwrap() - 5f64.ln()).abs() < 1e-15);
        assert_eq!(closed_f64(&c5, &from_common_denominator(3, 2, 1)), Err(Error::NotOnCurve));
    }

    #[test]
    fn limit_examples() {
        let c5 = conic(5);
        let p = from_common_denominator(3, 1, 1);
        let lim: f64 = canonical_height_limit(&c5, &p, 8).unwrap();
        assert!((lim - 0.962424).abs() < 1e-3);

        let c4 = conic(-4);
        let p = from_common_denominator(6, 4, 5);
        let two_p = c4.double(&Exact::<BigRational>::new(), &p);
        assert_eq!(two_p, from_common_denominator(-14, 24, 25));
        // 2^6 P has x = m/5^64 with |m| between 5^64 and 2·5^64
        let lim: f64 = canonical_height_limit(&c4, &p, 6).unwrap();
        assert!((lim - 1.619328549).abs() < 1e-8);
        assert!(lim >= 5f64.ln() && lim - 5f64.ln() <= 2f64.ln() / 64.0);

        let n = from_common_denominator(2, 0, 1);
        for k in 0..=MAX_LIMIT_ITERATIONS {
            let lim: f64 = canonical_height_limit(&c5, &n, k).unwrap();
            assert!((lim - 2f64.ln() / (1u64 << k) as f64).abs() < 1e-15);
        }
        assert!(canonical_height_limit::<f64>(&c5, &n, 13).is_err());
    }

    #[test]
    fn regulator_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((regulator::<f64>(&conic(5)).unwrap() - 2.0 * phi.ln()).abs() < 1e-12);
        assert!((regulator::<f64>(&conic(12)).unwrap() - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
        assert!((regulator::<f64>(&conic(8)).unwrap() - 2.0 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
        assert!(regulator::<f64>(&conic(-4)).is_err());
    }

    #[test]
    fn regulator_relation_to_field_unit() {
        for delta in (5..=2000).filter(|&d| crate::nt::is_fundamental(d)) {
            let f = crate::nt::pell4_fundamental(delta).unwrap();
            let (x, y) = f.unit();
            let field = ((x.to_f64().unwrap() + y.to_f64().unwrap() * (delta as f64).sqrt()) / 2.0).ln();
            let rc = regulator::<f64>(&conic(delta)).unwrap();
            let expect = field * 2f64.powi(1 - f.u as i32);
            assert!((rc - expect).abs() < 1e-9 * rc, "Δ = {delta}");
        }
    }

    #[test]
    fn sampling() {
        for delta in [5i64, 8, 12, 13, -4, -3] {
            let c = conic(delta);
            let pts = sample_points(&c, 200).unwrap();
            assert_eq!(pts.len(), 200);
            let ring = Exact::<BigRational>::new();
            for (i, p) in pts.iter().enumerate() {
                assert!(c.on_curve(&ring, p));
                assert!(!pts[..i].contains(p));
            }
        }
    }

    #[test]
    fn single_precision_works() {
        let h: f32 = canonical_height_closed(&conic(5), &from_common_denominator(3, 1, 1)).unwrap();
        assert!((h - 0.962424).abs() < 1e-5);
    }
}
