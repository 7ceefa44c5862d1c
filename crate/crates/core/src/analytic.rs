// SPDX-License-Identifier: Apache-2.0

//! `L(1, χ_Δ)`, the class number formula, Tamagawa data and the two sides
//! of the BSD-type identity `2hR/w = Ω·#Sha·R(C)·∏c_p / #C(ℤ)_tors`.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::conic::PellConic;
use crate::descent::{self, forms::class_group_narrow};
use crate::error::{Error, Result};
use crate::heights::{self, ln_abs};
use crate::nt;

/// Smallest tolerance accepted by [`l_chi_1`].
pub const MIN_TOLERANCE: f64 = 1e-10;
/// Largest rounding residual tolerated by [`analytic_class_number`].
pub const MAX_ROUNDING_RESIDUAL: f64 = 0.01;
/// Largest discriminant accepted by [`bsd_report`].
pub const MAX_BSD_DISCRIMINANT: i64 = 10_000;

fn require_fundamental(delta: i64) -> Result<()> {
    nt::radicand_of(delta).map(|_| ())
}

/// `χ_Δ(n) = (Δ/n)`.
pub fn chi(delta: i64, n: u64) -> i32 {
    nt::kronecker(delta, n)
}

/// `L(1, χ_Δ)` from the finite character sums
/// `−π/|Δ|^{3/2}·Σ χ(a)a` (Δ < 0) and `−1/√Δ·Σ χ(a) log sin(πa/Δ)` (Δ > 0).
pub fn l_chi_1(delta: i64, tol: f64) -> Result<f64> {
    require_fundamental(delta)?;
    if !(tol >= MIN_TOLERANCE) {
        return Err(Error::Precondition(format!("tolerance {tol} below {MIN_TOLERANCE}")));
    }
    let q = delta.unsigned_abs();
    let qf = q as f64;
    if delta < 0 {
        let s: i64 = (1..q).map(|a| chi(delta, a) as i64 * a as i64).sum();
        Ok(-std::f64::consts::PI * s as f64 / qf.powf(1.5))
    } else {
        let s: f64 = (1..q)
            .map(|a| chi(delta, a) as f64 * (std::f64::consts::PI * a as f64 / qf).sin().ln())
            .sum();
        Ok(-s / qf.sqrt())
    }
}

/// The Dirichlet series `Σ χ(n)/n` averaged over the partial sums
/// `S_N, …, S_{N+|Δ|−1}`, with an error bound `4Δ²/N²`.
pub fn l_chi_1_partial_sums(delta: i64, terms: u64) -> Result<(f64, f64)> {
    require_fundamental(delta)?;
    let q = delta.unsigned_abs();
    let mut s = 0.0f64;
    for n in 1..=terms {
        s += chi(delta, n) as f64 / n as f64;
    }
    let mut acc = 0.0;
    for j in 0..q {
        acc += s;
        let n = terms + j + 1;
        s += chi(delta, n) as f64 / n as f64;
    }
    let bound = 4.0 * (q as f64).powi(2) / (terms as f64).powi(2);
    Ok((acc / q as f64, bound))
}

/// Number of roots of unity in `ℚ(√Δ)`.
pub fn roots_of_unity(delta: i64) -> u32 {
    match delta {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// `log((x + y√Δ)/2)` for `x, y > 0`.
fn log_half_unit(delta: i64, x: &BigInt, y: &BigInt) -> f64 {
    let ln_ratio = ln_abs::<f64>(y) - ln_abs::<f64>(x) + (delta as f64).ln() / 2.0;
    ln_abs::<f64>(x) + ln_ratio.exp().ln_1p() - std::f64::consts::LN_2
}

/// The field regulator `log ε` (Δ > 0) and `u` (1 iff `N(ε) = +1`).
pub fn field_regulator(delta: i64) -> Result<(f64, u8)> {
    require_fundamental(delta)?;
    let f = nt::pell4_fundamental(delta)?;
    let (x, y) = f.unit();
    Ok((log_half_unit(delta, x, y), f.u))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassNumber {
    pub h: u64,
    pub l_value: f64,
    pub w: u32,
    /// `|h_real − h|` before rounding.
    pub residual: f64,
}

/// `h` from `L(1, χ) = 2πh/(w√|Δ|)` (Δ < 0) or `2h log ε/√Δ` (Δ > 0).
pub fn analytic_class_number(delta: i64) -> Result<ClassNumber> {
    let l = l_chi_1(delta, 1e-10)?;
    let w = roots_of_unity(delta);
    let root = (delta.unsigned_abs() as f64).sqrt();
    let h_real = if delta < 0 {
        w as f64 * root * l / (2.0 * std::f64::consts::PI)
    } else {
        root * l / (2.0 * field_regulator(delta)?.0)
    };
    let h = h_real.round();
    let residual = (h_real - h).abs();
    if residual >= MAX_ROUNDING_RESIDUAL || h < 1.0 {
        return Err(Error::Inconsistent(format!("class number {h_real} for Δ = {delta} is not near an integer")));
    }
    Ok(ClassNumber { h: h as u64, l_value: l, w, residual })
}

/// `2hR/w`, with `R = 1` for Δ < 0.
pub fn s_zero_form(delta: i64) -> Result<f64> {
    let cn = analytic_class_number(delta)?;
    let r = if delta > 0 { field_regulator(delta)?.0 } else { 1.0 };
    Ok(2.0 * cn.h as f64 * r / cn.w as f64)
}

/// `c_p = 2` if `p | Δ`, else 1.
pub fn tamagawa(delta: i64, p: u64) -> Result<u32> {
    if !nt::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(if delta % p as i64 == 0 { 2 } else { 1 })
}

pub fn omega() -> f64 {
    0.5
}

/// A numeric comparison `lhs = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn relative(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = if lhs == rhs { 0.0 } else { (lhs - rhs).abs() / lhs.abs().max(rhs.abs()) };
        IdentityCheck { name, lhs, rhs, residual, pass: residual < tol }
    }
}

/// Tolerance for the main identity.
pub const BSD_TOLERANCE: f64 = 1e-6;
/// Tolerance for `R(C) = 2^{1−u}R`.
pub const REGULATOR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BsdReport {
    pub delta: i64,
    /// Class number from the analytic formula.
    pub h: u64,
    /// Class number from forms, `h⁺/2^u`.
    pub h_forms: u64,
    pub h_plus: u64,
    pub u: u8,
    pub w: u32,
    /// Field regulator `log ε`.
    pub regulator: f64,
    /// Conic regulator `log η`.
    pub conic_regulator: f64,
    pub sha2_order: u64,
    pub cl_squares_order: u64,
    /// `#Cl⁺²[2]`, compared with `sha2_order`.
    pub cl_squares_two_torsion: u64,
    pub tamagawa_product: u64,
    pub omega: f64,
    /// `2hR/w`.
    pub lhs: f64,
    /// `Ω·#Cl⁺²·R(C)·∏c_p / w`.
    pub rhs: f64,
    /// `|lhs − rhs| / lhs`.
    pub residual: f64,
}

impl BsdReport {
    pub fn checks(&self) -> Vec<IdentityCheck> {
        let exact = |name, l: u64, r: u64| IdentityCheck {
            name,
            lhs: l as f64,
            rhs: r as f64,
            residual: (l as f64 - r as f64).abs(),
            pass: l == r,
        };
        let t = nt::prime_divisors(self.delta).len() as u32;
        vec![
            IdentityCheck { name: "bsd identity", lhs: self.lhs, rhs: self.rhs, residual: self.residual, pass: self.residual < BSD_TOLERANCE },
            exact("h_plus = 2^u h", self.h_plus, (1u64 << self.u) * self.h),
            exact("analytic h = form h", self.h, self.h_forms),
            IdentityCheck::relative(
                "R_C = 2^(1-u) R",
                self.conic_regulator,
                self.regulator * 2f64.powi(1 - self.u as i32),
                REGULATOR_TOLERANCE,
            ),
            exact("tamagawa = 2^t", self.tamagawa_product, 1 << t),
            exact("omega cl_sq tamagawa = h_plus", self.cl_squares_order * self.tamagawa_product / 2, self.h_plus),
            exact("sha2 = |Cl+^2[2]|", self.sha2_order, self.cl_squares_two_torsion),
        ]
    }

    pub fn passes(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

/// Both sides of the identity for a real quadratic discriminant.
pub fn bsd_report(delta: i64) -> Result<BsdReport> {
    if delta <= 0 {
        return Err(Error::NonPositiveDiscriminant(delta));
    }
    if delta > MAX_BSD_DISCRIMINANT {
        return Err(Error::OutOfRange(format!("Δ = {delta} exceeds {MAX_BSD_DISCRIMINANT}")));
    }
    let conic = PellConic::from_discriminant(delta)?;
    let cn = analytic_class_number(delta)?;
    let (regulator, u) = field_regulator(delta)?;
    let conic_regulator = heights::regulator::<f64>(&conic)?;
    let cl = class_group_narrow(delta)?;
    let sha = descent::sha2(&conic)?;
    let tamagawa_product = nt::prime_divisors(delta)
        .into_iter()
        .map(|p| tamagawa(delta, p).map(u64::from))
        .product::<Result<u64>>()?;
    let w = conic.torsion_order();
    let lhs = 2.0 * cn.h as f64 * regulator / w as f64;
    let rhs = omega() * cl.squares_order as f64 * conic_regulator * tamagawa_product as f64 / w as f64;
    Ok(BsdReport {
        delta,
        h: cn.h,
        h_forms: cl.h_plus >> u,
        h_plus: cl.h_plus,
        u,
        w,
        regulator,
        conic_regulator,
        sha2_order: sha.order,
        cl_squares_order: cl.squares_order,
        cl_squares_two_torsion: cl.two_torsion_of_squares,
        tamagawa_product,
        omega: omega(),
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / lhs,
    })
}

/// [`bsd_report`] for every fundamental `0 < Δ ≤ max`, in parallel,
/// returned in ascending Δ.
pub fn bsd_sweep(max: i64) -> Result<Vec<BsdReport>> {
    nt::fundamental_discriminants(5, max).into_par_iter().map(bsd_report).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_value_examples() {
        assert!((l_chi_1(-4, 1e-10).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((l_chi_1(5, 1e-10).unwrap() - 2.0 * phi.ln() / 5f64.sqrt()).abs() < 1e-12);
        assert!((l_chi_1(5, 1e-10).unwrap() - 0.4304089).abs() < 1e-7);
        assert!((l_chi_1(8, 1e-10).unwrap() - 0.6232252).abs() < 1e-7);
        assert!(l_chi_1(12, 1e-12).is_err());
        assert!(matches!(l_chi_1(20, 1e-8), Err(Error::NotFundamental(20))));
    }

    #[test]
    fn partial_sum_oracle() {
        // Leibniz
        let (v, bound) = l_chi_1_partial_sums(-4, 1_000_000).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_4).abs() <= bound);
        for delta in [5i64, 8, -3, -23, 12, 13, -84] {
            let (v, bound) = l_chi_1_partial_sums(delta, 1_000_000).unwrap();
            assert!((v - l_chi_1(delta, 1e-8).unwrap()).abs() <= bound.max(1e-8), "Δ = {delta}");
        }
    }

    #[test]
    fn class_number_examples() {
        let c = analytic_class_number(-4).unwrap();
        assert_eq!((c.h, c.w), (1, 4));
        assert_eq!(analytic_class_number(5).unwrap().h, 1);
        assert_eq!(analytic_class_number(-23).unwrap().h, 3);
        assert_eq!(analytic_class_number(-3).unwrap().w, 6);
        assert_eq!(analytic_class_number(229).unwrap().h, 3);
    }

    #[test]
    fn s_zero_examples() {
        assert!((s_zero_form(-4).unwrap() - 0.5).abs() < 1e-12);
        assert!((s_zero_form(5).unwrap() - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
        assert!((s_zero_form(-3).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tamagawa_examples() {
        assert_eq!(tamagawa(40, 2).unwrap(), 2);
        assert_eq!(tamagawa(40, 3).unwrap(), 1);
        assert_eq!(tamagawa(5, 5).unwrap(), 2);
        assert!(tamagawa(5, 4).is_err());
        assert_eq!(omega(), 0.5);
    }

    #[test]
    fn bsd_examples() {
        let r = bsd_report(5).unwrap();
        let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((r.lhs - log_phi).abs() < 1e-12 && (r.rhs - log_phi).abs() < 1e-12);
        assert!(r.residual < 1e-6 && r.passes());
        assert!(bsd_report(8).unwrap().residual < 1e-6);
        let r12 = bsd_report(12).unwrap();
        assert_eq!((r12.u, r12.h, r12.h_plus), (1, 1, 2));
        assert!(r12.residual < 1e-6 && r12.passes());
        assert!(bsd_report(-4).is_err());
    }

    #[test]
    fn sweep_is_ordered() {
        let reports = bsd_sweep(120).unwrap();
        let deltas: Vec<i64> = reports.iter().map(|r| r.delta).collect();
        assert_eq!(deltas, nt::fundamental_discriminants(5, 120));
        assert!(reports.iter().all(BsdReport::passes));
    }

    #[test]
    fn analytic_matches_forms() {
        for delta in nt::fundamental_discriminants(-200, 200) {
            let cl = class_group_narrow(delta).unwrap();
            let u = if delta > 0 { field_regulator(delta).unwrap().1 } else { 0 };
            assert_eq!(analytic_class_number(delta).unwrap().h, cl.h_plus >> u, "Δ = {delta}");
        }
    }
}
