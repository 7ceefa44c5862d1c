// SPDX-License-Identifier: Apache-2.0

//! Pell conics `C: X² − ΔY² = 4` with neutral element `N = (2, 0)` and the
//! group law `(r,s) + (t,u) = ((rt + Δsu)/2, (ru + st)/2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nt;
use crate::ring::Ring;
use crate::{IntPoint, RatPoint};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConicPoint<E> {
    pub x: E,
    pub y: E,
}

impl<E> ConicPoint<E> {
    pub fn new(x: E, y: E) -> Self {
        ConicPoint { x, y }
    }
}

impl<E: std::fmt::Display> std::fmt::Display for ConicPoint<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for IntPoint {
    fn from((x, y): (i64, i64)) -> Self {
        ConicPoint::new(x.into(), y.into())
    }
}

impl IntPoint {
    pub fn to_rational(&self) -> RatPoint {
        ConicPoint::new(
            BigRational::from_integer(self.x.clone()),
            BigRational::from_integer(self.y.clone()),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PellConic {
    d: i64,
    delta: i64,
}

impl PellConic {
    /// The conic attached to `ℚ(√d)` for squarefree `d ∉ {0, 1}`.
    pub fn from_radicand(d: i64) -> Result<Self> {
        let delta = nt::discriminant_from(d)?;
        Ok(PellConic { d, delta })
    }

    /// The conic of a fundamental discriminant.
    pub fn from_discriminant(delta: i64) -> Result<Self> {
        let d = nt::radicand_of(delta)?;
        Ok(PellConic { d, delta })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn neutral<R: Ring>(&self, ring: &R) -> ConicPoint<R::Elem> {
        ConicPoint::new(ring.from_i64(2), ring.zero())
    }

    /// `x² − Δy²` evaluated in the ring.
    pub fn norm<R: Ring>(&self, ring: &R, p: &ConicPoint<R::Elem>) -> R::Elem {
        let dy2 = ring.mul(&ring.from_i64(self.delta), &ring.square(&p.y));
        ring.sub(&ring.square(&p.x), &dy2)
    }

    pub fn on_curve<R: Ring>(&self, ring: &R, p: &ConicPoint<R::Elem>) -> bool {
        self.norm(ring, p) == ring.from_i64(4)
    }

    /// Builds a point, checking the curve equation.
    pub fn point<R: Ring>(&self, ring: &R, x: R::Elem, y: R::Elem) -> Result<ConicPoint<R::Elem>> {
        let p = ConicPoint::new(x, y);
        if self.on_curve(ring, &p) {
            Ok(p)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn add<R: Ring>(
        &self,
        ring: &R,
        p: &ConicPoint<R::Elem>,
        q: &ConicPoint<R::Elem>,
    ) -> ConicPoint<R::Elem> {
        let delta = ring.from_i64(self.delta);
        let rt = ring.mul(&p.x, &q.x);
        let su = ring.mul(&ring.mul(&p.y, &q.y), &delta);
        let ru = ring.mul(&p.x, &q.y);
        let st = ring.mul(&p.y, &q.x);
        ConicPoint::new(ring.half(&ring.add(&rt, &su)), ring.half(&ring.add(&ru, &st)))
    }

    pub fn neg<R: Ring>(&self, ring: &R, p: &ConicPoint<R::Elem>) -> ConicPoint<R::Elem> {
        ConicPoint::new(p.x.clone(), ring.neg(&p.y))
    }

    pub fn sub<R: Ring>(
        &self,
        ring: &R,
        p: &ConicPoint<R::Elem>,
        q: &ConicPoint<R::Elem>,
    ) -> ConicPoint<R::Elem> {
        self.add(ring, p, &self.neg(ring, q))
    }

    pub fn double<R: Ring>(&self, ring: &R, p: &ConicPoint<R::Elem>) -> ConicPoint<R::Elem> {
        self.add(ring, p, p)
    }

    /// `k·P` by binary double-and-add; negative `k` goes through `−P`.
    pub fn scalar_mul<R: Ring>(&self, ring: &R, k: i128, p: &ConicPoint<R::Elem>) -> ConicPoint<R::Elem> {
        let base = if k < 0 { self.neg(ring, p) } else { p.clone() };
        let k = k.unsigned_abs();
        let mut acc = self.neutral(ring);
        for bit in (0..128 - k.leading_zeros()).rev() {
            acc = self.double(ring, &acc);
            if (k >> bit) & 1 == 1 {
                acc = self.add(ring, &acc, &base);
            }
        }
        acc
    }

    /// The integral torsion points; their number is the count of roots of
    /// unity in `ℚ(√Δ)`.
    pub fn torsion_points(&self) -> Vec<IntPoint> {
        let mut pts: Vec<IntPoint> = vec![(2, 0).into(), (-2, 0).into()];
        match self.delta {
            -3 => pts.extend([(1, 1), (1, -1), (-1, 1), (-1, -1)].map(IntPoint::from)),
            -4 => pts.extend([(0, 1), (0, -1)].map(IntPoint::from)),
            _ => {}
        }
        pts
    }

    pub fn torsion_order(&self) -> u32 {
        match self.delta {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// The generator `η = (x1, y1)` of the free part of `C(ℤ)`, for Δ > 0.
    pub fn fundamental_point(&self) -> Result<IntPoint> {
        let f = nt::pell4_fundamental(self.delta)?;
        Ok(ConicPoint::new(f.x1, f.y1))
    }

    /// Second intersection of `C` with the line through `N` of slope `t`:
    /// `(2(1 + Δt²)/(1 − Δt²), 4t/(1 − Δt²))`. Every rational point other
    /// than `(−2, 0)` arises this way.
    pub fn point_from_slope(&self, t: &BigRational) -> Option<RatPoint> {
        let dt2 = t * t * BigInt::from(self.delta);
        let den = BigRational::one() - &dt2;
        if den.is_zero() {
            return None;
        }
        let two = BigRational::from_integer(2.into());
        let x = &two * (BigRational::one() + dt2) / &den;
        let y = &two * &two * t / den;
        Some(ConicPoint::new(x, y))
    }
}

/// `x(2P) = x(P)² − 2`, using `Δy² = x² − 4`.
pub fn x_double<R: Ring>(ring: &R, x: &R::Elem) -> R::Elem {
    ring.sub(&ring.square(x), &ring.from_i64(2))
}

/// `x(kP)` from `x(P)` alone: a binary Lucas chain built on doubling and the
/// differential addition `x((m+n)P) = x(mP)·x(nP) − x((m−n)P)`.
pub fn x_mul<R: Ring>(ring: &R, x: &R::Elem, k: u128) -> R::Elem {
    // invariant: lo = x(jP), hi = x((j+1)P)
    let mut lo = ring.from_i64(2);
    let mut hi = x.clone();
    for bit in (0..128 - k.leading_zeros()).rev() {
        let cross = ring.sub(&ring.mul(&lo, &hi), x);
        if (k >> bit) & 1 == 1 {
            lo = cross;
            hi = x_double(ring, &hi);
        } else {
            hi = cross;
            lo = x_double(ring, &lo);
        }
    }
    lo
}

/// The conic `D_c: X² − ΔY² = 4c`, a principal homogeneous space for `C`
/// under `μ((u,v),(x,y)) = ((ux + Δvy)/2, (vx + uy)/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomogeneousSpace {
    conic: PellConic,
    c: i64,
}

impl HomogeneousSpace {
    pub fn new(conic: PellConic, c: i64) -> Result<Self> {
        if c == 0 {
            return Err(Error::Precondition("D_c needs c ≠ 0".into()));
        }
        Ok(HomogeneousSpace { conic, c })
    }

    pub fn conic(&self) -> &PellConic {
        &self.conic
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn contains<R: Ring>(&self, ring: &R, q: &ConicPoint<R::Elem>) -> bool {
        self.conic.norm(ring, q) == ring.from_i64(4 * self.c)
    }

    /// `μ(q, P)`.
    pub fn act<R: Ring>(
        &self,
        ring: &R,
        q: &ConicPoint<R::Elem>,
        p: &ConicPoint<R::Elem>,
    ) -> ConicPoint<R::Elem> {
        let delta = ring.from_i64(self.conic.delta());
        let ux = ring.mul(&q.x, &p.x);
        let dvy = ring.mul(&delta, &ring.mul(&q.y, &p.y));
        let vx = ring.mul(&q.y, &p.x);
        let uy = ring.mul(&q.x, &p.y);
        ConicPoint::new(ring.half(&ring.add(&ux, &dvy)), ring.half(&ring.add(&vx, &uy)))
    }

    /// The unique `P ∈ C` with `μ(from, P) = to`; needs `2c` invertible.
    ///
    /// Reading points as `(u + v√Δ)/2`, `P = to · conj(from) / c`.
    pub fn transporter<R: Ring>(
        &self,
        ring: &R,
        from: &ConicPoint<R::Elem>,
        to: &ConicPoint<R::Elem>,
    ) -> Result<ConicPoint<R::Elem>> {
        let delta = ring.from_i64(self.conic.delta());
        let two_c = ring
            .inv(&ring.from_i64(2 * self.c))
            .ok_or_else(|| Error::Precondition(format!("2c = {} is not invertible", 2 * self.c)))?;
        let au = ring.mul(&to.x, &from.x);
        let dbv = ring.mul(&delta, &ring.mul(&to.y, &from.y));
        let bu = ring.mul(&to.y, &from.x);
        let av = ring.mul(&to.x, &from.y);
        Ok(ConicPoint::new(
            ring.mul(&ring.sub(&au, &dbv), &two_c),
            ring.mul(&ring.sub(&bu, &av), &two_c),
        ))
    }
}
