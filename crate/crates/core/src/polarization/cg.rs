//! Clebsch-Gordan coefficients (Condon-Shortley phase) from the Racah sum,
//! evaluated in exact rational arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A non-negative or negative multiple of ½, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub const ZERO: Self = Self(0);

    pub fn from_doubled(twice: i64) -> Self {
        Self(twice)
    }

    pub fn from_int(v: i64) -> Self {
        Self(2 * v)
    }

    /// Accepts only exact multiples of ½.
    pub fn from_f64(v: f64) -> Result<Self> {
        let twice = 2.0 * v;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > 1e15 {
            return Err(Error::InvalidAngularMomenta(format!(
                "{v} is not a multiple of 1/2"
            )));
        }
        Ok(Self(twice as i64))
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn factorial(k: i64) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, x| acc * x)
}

/// Integer value of a sum of half-integers known to be integral.
fn int_of(doubled: i64) -> i64 {
    debug_assert!(doubled % 2 == 0);
    doubled / 2
}

fn validate(j: HalfInteger, m: HalfInteger) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::InvalidAngularMomenta(format!("j = {j} is negative")));
    }
    if m.0.abs() > j.0 {
        return Err(Error::InvalidAngularMomenta(format!(
            "|m| = |{m}| exceeds j = {j}"
        )));
    }
    if (j.0 - m.0) % 2 != 0 {
        return Err(Error::InvalidAngularMomenta(format!(
            "j = {j} and m = {m} differ by a non-integer"
        )));
    }
    Ok(())
}

/// ⟨j1 m1; j2 m2 | j m⟩. Zero when the triangle rule or m1 + m2 = m fails.
pub fn clebsch_gordan(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> Result<f64> {
    validate(j1, m1)?;
    validate(j2, m2)?;
    validate(j, m)?;
    if m1.0 + m2.0 != m.0 {
        return Ok(0.0);
    }
    if j.0 > j1.0 + j2.0 || j.0 < (j1.0 - j2.0).abs() || (j1.0 + j2.0 - j.0) % 2 != 0 {
        return Ok(0.0);
    }

    let a = int_of(j.0 + j1.0 - j2.0);
    let b = int_of(j.0 - j1.0 + j2.0);
    let c = int_of(j1.0 + j2.0 - j.0);
    let d = int_of(j1.0 + j2.0 + j.0) + 1;
    let prefactor = BigRational::new(
        BigInt::from(j.0 + 1)
            * factorial(a)
            * factorial(b)
            * factorial(c)
            * factorial(int_of(j.0 + m.0))
            * factorial(int_of(j.0 - m.0))
            * factorial(int_of(j1.0 - m1.0))
            * factorial(int_of(j1.0 + m1.0))
            * factorial(int_of(j2.0 - m2.0))
            * factorial(int_of(j2.0 + m2.0)),
        factorial(d),
    );

    let t1 = int_of(j1.0 + j2.0 - j.0);
    let t2 = int_of(j1.0 - m1.0);
    let t3 = int_of(j2.0 + m2.0);
    let t4 = int_of(j.0 - j2.0 + m1.0);
    let t5 = int_of(j.0 - j1.0 - m2.0);
    let kmin = 0.max(-t4).max(-t5);
    let kmax = t1.min(t2).min(t3);
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(t1 - k)
            * factorial(t2 - k)
            * factorial(t3 - k)
            * factorial(t4 + k)
            * factorial(t5 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(0.0);
    }
    let sign = if sum.is_negative() { -1.0 } else { 1.0 };
    let squared = prefactor * &sum * &sum;
    let value = squared
        .to_f64()
        .ok_or_else(|| Error::InvalidAngularMomenta("coefficient outside double range".into()))?;
    Ok(sign * value.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInteger {
        HalfInteger::from_doubled(twice)
    }

    fn cg(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> f64 {
        clebsch_gordan(h(j1), h(m1), h(j2), h(m2), h(j), h(m)).unwrap()
    }

    #[test]
    fn coupling_to_zero_spin_is_trivial() {
        for twice_j in 0..6 {
            for twice_m in (-twice_j..=twice_j).step_by(2) {
                assert!((cg(twice_j, twice_m, 0, 0, twice_j, twice_m) - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn stretched_state() {
        assert!((cg(1, 1, 1, 1, 2, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_component() {
        // two-term Racah sum for ⟨½ ½; ½ −½ | 0 0⟩
        assert!((cg(1, 1, 1, -1, 0, 0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((cg(1, -1, 1, 1, 0, 0) + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn triplet_zero_component() {
        assert!((cg(1, 1, 1, -1, 2, 0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((cg(1, -1, 1, 1, 2, 0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn spin_one_times_half_table() {
        // ⟨1 0; ½ ½ | 3/2 ½⟩ = √(2/3), ⟨1 1; ½ −½ | ½ ½⟩ = √(2/3), ⟨1 0; ½ ½ | ½ ½⟩ = −√(1/3)
        assert!((cg(2, 0, 1, 1, 3, 1) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((cg(2, 2, 1, -1, 1, 1) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((cg(2, 0, 1, 1, 1, 1) + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn selection_rules_give_zero() {
        assert_eq!(cg(2, 2, 2, 0, 2, 0), 0.0);
        assert_eq!(cg(2, 0, 2, 0, 8, 0), 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(clebsch_gordan(h(1), h(3), h(0), h(0), h(1), h(3)).is_err());
        assert!(clebsch_gordan(h(2), h(1), h(0), h(0), h(2), h(1)).is_err());
        assert!(clebsch_gordan(h(-2), h(0), h(0), h(0), h(0), h(0)).is_err());
        assert!(HalfInteger::from_f64(0.3).is_err());
        assert_eq!(HalfInteger::from_f64(1.5).unwrap(), h(3));
    }

    #[test]
    fn orthogonality_in_coupled_basis() {
        // Σ_{m1,m2} ⟨j1 m1; j2 m2|J M⟩⟨j1 m1; j2 m2|J' M⟩ = δ_JJ'
        let (tj1, tj2) = (3, 4);
        for tm in (-7..=7).step_by(2) {
            for tj in (1..=7).step_by(2) {
                for tjp in (1..=7).step_by(2) {
                    if tm.abs() > tj || tm.abs() > tjp {
                        continue;
                    }
                    let mut s = 0.0;
                    for tm1 in (-tj1..=tj1).step_by(2) {
                        let tm2 = tm - tm1;
                        if tm2.abs() > tj2 {
                            continue;
                        }
                        s += cg(tj1, tm1, tj2, tm2, tj, tm) * cg(tj1, tm1, tj2, tm2, tjp, tm);
                    }
                    let e = if tj == tjp { 1.0 } else { 0.0 };
                    assert!((s - e).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn large_momenta_stay_normalized() {
        let (tj1, tj2, tj) = (40, 30, 50);
        let mut s = 0.0;
        for tm1 in (-tj1..=tj1).step_by(2) {
            let tm2 = 10 - tm1;
            if tm2.abs() <= tj2 {
                s += cg(tj1, tm1, tj2, tm2, tj, 10).powi(2);
            }
        }
        assert!((s - 1.0).abs() < 1e-12);
    }
}
