//! Exact evaluation of the recursive parameter schedule, in two modes:
//! "exact" (faithful worst-case formulas, big-integer / log2-domain arithmetic) and
//! "desk" (user-supplied small radii with the same derived formulas).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("eps values must be strictly increasing and positive")]
    BadEps,
    #[error("desk mode requires r and s overrides, one per eps entry")]
    MissingOverrides,
    #[error("desk override s_{0} = {1} below minimum 3")]
    SmallS(usize, u64),
    #[error("desk override r_{0} = {1} must be positive")]
    ZeroR(usize, u64),
    #[error("degree bound must be at least 2")]
    SmallDelta,
    #[error("log-domain exponent {0} exceeds representable range")]
    ExponentOverflow(BigInt),
    #[error("level {0} of the exact-mode schedule is not representable: {1}")]
    Unrepresentable(usize, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Desk,
}

/// An exact power of two 2^exp with a possibly negative (sub-unit) exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pow2 {
    pub exp: BigInt,
}

impl Pow2 {
    pub fn new(exp: BigInt) -> Pow2 {
        Pow2 { exp }
    }

    pub fn is_sub_unit(&self) -> bool {
        self.exp.is_negative()
    }

    /// Exact comparison 2^exp > rhs for rhs >= 1.
    pub fn gt_uint(&self, rhs: &BigUint) -> bool {
        assert!(!rhs.is_zero());
        if self.exp.is_negative() {
            return false;
        }
        // rhs < 2^bits(rhs), and rhs >= 2^(bits(rhs)-1)
        self.exp >= BigInt::from(rhs.bits())
    }

    /// Exact comparison 2^exp >= rhs for rhs >= 1.
    pub fn ge_uint(&self, rhs: &BigUint) -> bool {
        assert!(!rhs.is_zero());
        if self.exp.is_negative() {
            return false;
        }
        let bits = rhs.bits();
        if self.exp >= BigInt::from(bits) {
            return true;
        }
        if self.exp < BigInt::from(bits - 1) {
            return false;
        }
        // exp == bits-1: equal iff rhs is exactly a power of two
        rhs.count_ones() == 1
    }

    pub fn to_biguint(&self) -> Option<BigUint> {
        if self.exp.is_negative() {
            return None;
        }
        let e = self.exp.to_u64()?;
        if e > 10_000_000 {
            return None;
        }
        Some(BigUint::one() << e)
    }
}

/// A level degree bound that may be too large to materialize: either an
/// exact integer or the symbolic form coeff * base^exp.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegBound {
    Exact(BigInt),
    Pow { coeff: u32, base: BigInt, exp: BigInt },
}

impl DegBound {
    pub fn display(&self) -> String {
        match self {
            DegBound::Exact(v) => v.to_string(),
            DegBound::Pow { coeff, base, exp } => format!("{coeff}*{base}^{exp}"),
        }
    }
}

const MATERIALIZE_BIT_CAP: u64 = 10_000_000;

fn pow_bound(prev_minus_one: &DegBound, exp: &BigInt) -> DegBound {
    match prev_minus_one {
        DegBound::Exact(base) => {
            let bbits = base.bits();
            let fits = exp
                .to_u64()
                .map(|e| bbits.saturating_mul(e) <= MATERIALIZE_BIT_CAP)
                .unwrap_or(false);
            if base.is_one() {
                return DegBound::Exact(BigInt::from(4));
            }
            if fits {
                let e = exp.to_u64().unwrap() as u32;
                DegBound::Exact(BigInt::from(4) * base.pow(e))
            } else {
                DegBound::Pow { coeff: 4, base: base.clone(), exp: exp.clone() }
            }
        }
        DegBound::Pow { .. } => DegBound::Pow {
            coeff: 4,
            base: BigInt::from(-1), // placeholder meaning "previous bound - 1"
            exp: exp.clone(),
        },
    }
}

/// One level of the schedule. Fields that the mode cannot represent or that
/// need the next level's inputs are None.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelParams {
    pub n: usize,
    pub eps: BigInt,
    pub s: BigInt,
    pub r_hat: Option<BigInt>,
    pub r_bar: Option<BigInt>,
    /// the radius all derived values are instantiated at (desk override, or
    /// the worst-case r-bar in exact mode)
    pub r: BigInt,
    pub r_source: String,
    pub r_minus: BigInt,
    pub r_plus: BigInt,
    pub big_r_minus: BigInt,
    pub big_r_plus: BigInt,
    pub l: BigInt,
    pub big_l: BigInt,
    pub gamma_minus: BigInt,
    pub gamma_plus: BigInt,
    pub deg_bound: DegBound,
    pub k_bar: BigInt,
    pub k: Option<BigInt>,
    pub upsilon: BigInt,
    pub delta_sep: BigInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParameterSchedule {
    pub mode: Mode,
    pub delta: u32,
    pub eps: Vec<BigInt>,
    pub levels: Vec<LevelParams>,
    pub warnings: Vec<String>,
}

impl ParameterSchedule {
    pub fn level(&self, n: usize) -> &LevelParams {
        &self.levels[n]
    }
}

/// eta-bar_0(a) = 2^floor((a - Delta^11 - 1) / Delta^3), exactly, as a power
/// of two (sub-unit when the floor is negative).
pub fn eta_bar0(delta: u32, a: &BigInt) -> Pow2 {
    let d = BigInt::from(delta);
    let num: BigInt = a - d.pow(11) - 1;
    let den = d.pow(3);
    Pow2::new(num.div_floor(&den))
}

/// General eta with explicit numerator shift and divisor:
/// 2^floor((a - shift - 1) / divisor).
pub fn eta_general(a: &BigInt, shift: &BigInt, divisor: &BigInt) -> Pow2 {
    let num: BigInt = a - shift - 1;
    Pow2::new(num.div_floor(divisor))
}

trait DivFloor {
    fn div_floor(&self, other: &Self) -> Self;
}

impl DivFloor for BigInt {
    fn div_floor(&self, other: &BigInt) -> BigInt {
        num_integer::Integer::div_floor(self, other)
    }
}

/// Integer sqrt of 2^e (floor), for moderate exponents.
fn isqrt_pow2(e: &BigInt) -> Result<BigUint, ScheduleError> {
    let eu = e
        .to_u64()
        .filter(|&x| x <= MATERIALIZE_BIT_CAP)
        .ok_or_else(|| ScheduleError::ExponentOverflow(e.clone()))?;
    let v = BigUint::one() << eu;
    Ok(v.sqrt())
}

/// The defining inequality of the minimal radius at level 0:
///   eta0(sqrt(eta0(r)) - 6) > (4 (Delta-1)^(r s^2 (3s+1)) + 6)^2
/// evaluated without materializing the right side when Delta-1 is a power
/// of two (the interesting cases), with exact fallback otherwise.
fn r_hat0_predicate(delta: u32, s: &BigInt, r: &BigInt) -> Result<bool, ScheduleError> {
    let inner = eta_bar0(delta, r);
    if inner.is_sub_unit() {
        return Ok(false);
    }
    let m = BigInt::from(isqrt_pow2(&inner.exp)?);
    let lhs = eta_bar0(delta, &(m - 6));
    if lhs.is_sub_unit() {
        return Ok(false);
    }
    let e_l = lhs.exp;
    // rhs exponent of the base-(Delta-1) power
    let e_r: BigInt = r * s.pow(2) * (3 * s + 1);
    match delta - 1 {
        1 => Ok(e_l >= BigInt::from(7)), // rhs = (4+6)^2 = 100 < 128
        2 | 4 => {
            // base = 2^t, rhs = (2^(t e_r + 2) + 6)^2; strictly between
            // 2^(2 t e_r + 4) and 2^(2 t e_r + 5) once t*e_r >= 8
            let t: u32 = if delta - 1 == 2 { 1 } else { 2 };
            let te = t * e_r.clone();
            if te < BigInt::from(8) {
                let teu = te.to_u64().unwrap() as u32;
                let rhs: BigUint =
                    ((BigUint::one() << (teu + 2)) + 6u32) * ((BigUint::one() << (teu + 2)) + 6u32);
                return Ok(Pow2::new(e_l).gt_uint(&rhs));
            }
            Ok(e_l >= 2 * te + 5)
        }
        base => {
            // conservative bracketing by bit counts, exact fallback when
            // the bracket is inconclusive and the value fits
            let bbits = BigUint::from(base).bits(); // base < 2^bbits, base >= 2^(bbits-1)
            let hi: BigInt = BigInt::from(bbits) * &e_r + 5; // (4 base^e + 6)^2 < 2^(2(bbits e + 2) + 1) roughly
            let lo: BigInt = BigInt::from(bbits - 1) * &e_r + 4;
            if e_l >= 2 * hi {
                return Ok(true);
            }
            if e_l < 2 * lo {
                return Ok(false);
            }
            let eu = e_r
                .to_u64()
                .filter(|&x| x.saturating_mul(bbits) <= MATERIALIZE_BIT_CAP)
                .ok_or_else(|| ScheduleError::ExponentOverflow(e_r.clone()))?;
            let b = BigUint::from(base).pow(eu as u32);
            let rhs = (4u32 * &b + 6u32).pow(2);
            Ok(Pow2::new(e_l).gt_uint(&rhs))
        }
    }
}

/// Minimal positive integer satisfying the level-0 radius inequality, found
/// by doubling then bisection in the log2 domain, with minimality verified.
pub fn solve_r_hat0(delta: u32, s: &BigInt) -> Result<BigInt, ScheduleError> {
    let d = BigInt::from(delta);
    let mut lo: BigInt = d.pow(11) + 2; // below this the inner floor is negative
    let mut hi = lo.clone();
    let mut steps = 0;
    while !r_hat0_predicate(delta, s, &hi)? {
        lo = hi.clone();
        hi = &hi * 2;
        steps += 1;
        if steps > 200 {
            return Err(ScheduleError::ExponentOverflow(hi));
        }
    }
    // invariant: predicate false at lo (or lo is the initial point), true at hi
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        if r_hat0_predicate(delta, s, &mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // minimality guard against non-monotone floors near the boundary
    let mut res = hi;
    while res > BigInt::one() && r_hat0_predicate(delta, s, &(&res - 1))? {
        res -= 1;
    }
    debug_assert!(r_hat0_predicate(delta, s, &res)?);
    Ok(res)
}

struct Carry {
    big_l: BigInt,      // L_{n-1}
    gamma_plus: BigInt, // Gamma^+_{n-1}
    k: BigInt,          // K_{n-1}
    upsilon: BigInt,    // Upsilon_{n-1}
    deg: DegBound,      // Delta_{n-1}
}

fn derive_level(
    n: usize,
    eps: BigInt,
    s: BigInt,
    r: BigInt,
    r_hat: Option<BigInt>,
    r_bar: Option<BigInt>,
    r_source: &str,
    carry: &Carry,
) -> (LevelParams, Carry) {
    let r_minus = r.clone();
    let r_plus = &r * &s;
    let big_r_minus = 4 * &r - 1;
    let big_r_plus: BigInt = &r * (2 * &s + 3);
    let l = 2 * &big_r_plus + 1;
    let big_l = &carry.big_l * &l;
    let gamma_minus = &big_r_minus * &carry.big_l + &carry.gamma_plus;
    let gamma_plus = &big_r_plus * &carry.big_l + &carry.gamma_plus;
    let deg_bound = pow_bound(
        &match &carry.deg {
            DegBound::Exact(v) => DegBound::Exact(v - 1),
            p => p.clone(),
        },
        &(2 * &big_r_plus),
    );
    let k_bar: BigInt = &carry.k + &big_l * (&r * s.pow(2) + &r * (2 * &s + 1));
    let w: BigInt = if n == 0 { BigInt::from(10) } else { BigInt::from(2) };
    let upsilon: BigInt = &carry.upsilon
        + &carry.big_l * (&w + 3 * &big_r_plus + 1)
        + 2 * &gamma_plus
        + BigInt::from(n as u64) * &big_l;
    let delta_sep = 4 * &gamma_plus + &upsilon + 2 * &big_l;
    let params = LevelParams {
        n,
        eps,
        s,
        r_hat,
        r_bar,
        r,
        r_source: r_source.to_string(),
        r_minus,
        r_plus,
        big_r_minus,
        big_r_plus: big_r_plus.clone(),
        l,
        big_l: big_l.clone(),
        gamma_minus,
        gamma_plus: gamma_plus.clone(),
        deg_bound: deg_bound.clone(),
        k_bar: k_bar.clone(),
        k: None,
        upsilon: upsilon.clone(),
        delta_sep,
    };
    let carry = Carry {
        big_l,
        gamma_plus,
        k: k_bar, // provisional; K_n is patched once level n+1 is known
        upsilon,
        deg: deg_bound,
    };
    (params, carry)
}

/// K_n needs the next level's s and R^+; patch every level that has a
/// successor. The last level keeps k = None.
fn patch_k(levels: &mut [LevelParams]) {
    // K-bar of each level chains on the previous level's K, and K needs the
    // next level's s and R^+, so one forward pass fixes both in order. The
    // last level keeps k = None.
    let mut prev_k = BigInt::zero(); // K_{-1}
    for i in 0..levels.len() {
        {
            let lv = &mut levels[i];
            let own = &lv.big_l * (&lv.r * lv.s.pow(2) + &lv.r * (2 * &lv.s + 1));
            lv.k_bar = &prev_k + own;
        }
        if i + 1 == levels.len() {
            break;
        }
        let (s_next, rp_next) = (levels[i + 1].s.clone(), levels[i + 1].big_r_plus.clone());
        let lv = &mut levels[i];
        let k: BigInt =
            &lv.k_bar + &lv.big_l * (&s_next * &rp_next + &lv.gamma_plus + 2 * &lv.big_r_plus);
        lv.k = Some(k.clone());
        prev_k = k;
    }
}

pub fn build_schedule(
    mode: Mode,
    delta: u32,
    eps: &[u64],
    desk_r: Option<&[u64]>,
    desk_s: Option<&[u64]>,
) -> Result<ParameterSchedule, ScheduleError> {
    if delta < 2 {
        return Err(ScheduleError::SmallDelta);
    }
    if eps.is_empty() || eps.windows(2).any(|w| w[0] >= w[1]) || eps[0] == 0 {
        return Err(ScheduleError::BadEps);
    }
    let mut warnings = Vec::new();
    let mut levels: Vec<LevelParams> = Vec::new();
    let mut carry = Carry {
        big_l: BigInt::one(),
        gamma_plus: BigInt::zero(),
        k: BigInt::zero(),
        upsilon: BigInt::zero(),
        deg: DegBound::Exact(BigInt::from(delta)),
    };

    match mode {
        Mode::Desk => {
            let rs = desk_r.ok_or(ScheduleError::MissingOverrides)?;
            let ss = desk_s.ok_or(ScheduleError::MissingOverrides)?;
            if rs.len() != eps.len() || ss.len() != eps.len() {
                return Err(ScheduleError::MissingOverrides);
            }
            for (n, (&e, (&r, &s))) in eps.iter().zip(rs.iter().zip(ss.iter())).enumerate() {
                if s < 3 {
                    return Err(ScheduleError::SmallS(n, s));
                }
                if r == 0 {
                    return Err(ScheduleError::ZeroR(n, r));
                }
                if n == 0 && r < 12 {
                    warnings.push(format!(
                        "desk r_0 = {r} is below the coloring-stage minimum 12; \
                         the schedule is computed but marker construction will refuse"
                    ));
                }
                let (params, c) = derive_level(
                    n,
                    BigInt::from(e),
                    BigInt::from(s),
                    BigInt::from(r),
                    None,
                    None,
                    "desk-override",
                    &carry,
                );
                carry = c;
                levels.push(params);
            }
        }
        Mode::Exact => {
            for (n, &e) in eps.iter().enumerate() {
                let s: BigInt = BigInt::from(27)
                    + 10 * &carry.big_l * if n == 0 { BigInt::zero() } else { BigInt::one() }
                    + if n == 0 { BigInt::zero() } else { 2 * &carry.gamma_plus }
                    + e;
                // n = 0: s_0 = 27 + eps_0 exactly (L_{-1}, Gamma_{-1} terms absent)
                let s = if n == 0 { BigInt::from(27) + e } else { s };
                if n == 0 {
                    let r_hat = solve_r_hat0(delta, &s)?;
                    let r_bar: BigInt = &r_hat * (3 * &s + 1);
                    let (params, c) = derive_level(
                        n,
                        BigInt::from(e),
                        s,
                        r_bar.clone(),
                        Some(r_hat),
                        Some(r_bar),
                        "exact-worst-case-rbar",
                        &carry,
                    );
                    carry = c;
                    levels.push(params);
                } else {
                    warnings.push(format!(
                        "exact-mode level {n}: s_{n} = {s} is exact, but the minimal radius at \
                         this level is a tower of exponentials (its defining inequality divides \
                         by a power with exponent ~{} bits) and is not representable; levels >= 1 \
                         are reported only through s",
                        carry.big_l.bits()
                    ));
                    return Ok(ParameterSchedule {
                        mode,
                        delta,
                        eps: eps.iter().map(|&e| BigInt::from(e)).collect(),
                        levels,
                        warnings,
                    });
                }
            }
        }
    }
    patch_k(&mut levels);
    Ok(ParameterSchedule {
        mode,
        delta,
        eps: eps.iter().map(|&e| BigInt::from(e)).collect(),
        levels,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_bar0_hand_values() {
        // Delta = 2: divisor 8, shift 2^11 = 2048
        let e = eta_bar0(2, &BigInt::from(2058));
        assert_eq!(e.exp, BigInt::from(1)); // floor((2058-2049)/8) = 1 -> 2
        assert_eq!(e.to_biguint().unwrap(), BigUint::from(2u32));
        let e = eta_bar0(2, &BigInt::from(2049));
        assert_eq!(e.to_biguint().unwrap(), BigUint::one());
        // below the shift the value is a sub-unit power of two
        let e = eta_bar0(2, &BigInt::from(100));
        assert!(e.is_sub_unit());
        assert!(!e.gt_uint(&BigUint::from(1u32)));
        // monotone nondecreasing in a
        let mut last = eta_bar0(2, &BigInt::from(0)).exp;
        for a in 1..5000 {
            let cur = eta_bar0(2, &BigInt::from(a)).exp;
            assert!(cur >= last);
            last = cur;
        }
    }

    #[test]
    fn r_hat0_delta2() {
        // independent linear scan over the log-domain inequality
        let s = BigInt::from(28); // eps_0 = 1
        let solved = solve_r_hat0(2, &s).unwrap();
        assert!(solved > BigInt::from(2048)); // > 2^11
        let mut scan = BigInt::from(2050);
        loop {
            // direct evaluation with materialized values (all small for Delta=2)
            let inner = eta_bar0(2, &scan).to_biguint();
            let ok = match inner {
                None => false,
                Some(v) => {
                    let m = BigInt::from(v.sqrt()) - 6;
                    match eta_bar0(2, &m).to_biguint() {
                        None => false,
                        Some(lhs) => lhs > BigUint::from(100u32),
                    }
                }
            };
            if ok {
                break;
            }
            scan += 1;
        }
        assert_eq!(solved, scan);
        assert_eq!(solved, BigInt::from(2233)); // frozen from the scan oracle
        // minimality
        assert!(r_hat0_predicate(2, &s, &solved).unwrap());
        assert!(!r_hat0_predicate(2, &s, &(solved - 1)).unwrap());
    }

    #[test]
    fn r_hat0_delta3_minimal() {
        let s = BigInt::from(28);
        let solved = solve_r_hat0(3, &s).unwrap();
        assert!(r_hat0_predicate(3, &s, &solved).unwrap());
        assert!(!r_hat0_predicate(3, &s, &(solved.clone() - 1)).unwrap());
        assert!(solved > BigInt::from(3u32).pow(11));
    }

    #[test]
    fn desk_example_small_radii() {
        // r_0 = 3, s_0 = 28 -> R- = 11, R+ = 177, l = 355 (with a warning)
        let sch = build_schedule(Mode::Desk, 2, &[1], Some(&[3]), Some(&[28])).unwrap();
        let lv = sch.level(0);
        assert_eq!(lv.big_r_minus, BigInt::from(11));
        assert_eq!(lv.big_r_plus, BigInt::from(177));
        assert_eq!(lv.l, BigInt::from(355));
        assert_eq!(lv.big_l, BigInt::from(355));
        assert!(!sch.warnings.is_empty());
    }

    #[test]
    fn exact_s0_and_level_minus_one_seeds() {
        let sch = build_schedule(Mode::Exact, 2, &[1], None, None).unwrap();
        assert_eq!(sch.level(0).s, BigInt::from(28));
        assert_eq!(sch.level(0).r_bar.clone().unwrap(), BigInt::from(2233) * 85);
        // L_{-1} = 1, K_{-1} = 0 are the implicit seeds: level 0 uses them
        assert_eq!(
            sch.level(0).gamma_plus,
            sch.level(0).big_r_plus // R+ * L_{-1} + Gamma+_{-1}
        );
    }

    #[test]
    fn desk_recursions_vs_straight_line() {
        // independent spreadsheet-style evaluation for n <= 2
        for delta in [2u32, 3] {
            let (r, s) = ([12u64, 4, 4], [3u64, 3, 4]);
            let sch =
                build_schedule(Mode::Desk, delta, &[1, 2, 3], Some(&r), Some(&s)).unwrap();
            let b = |x: u64| BigInt::from(x);
            // level 0
            let rp0: BigInt = b(r[0]) * (2 * b(s[0]) + 3);
            let l0: BigInt = 2 * rp0.clone() + 1;
            assert_eq!(sch.level(0).r_plus, b(r[0]) * b(s[0]));
            assert_eq!(sch.level(0).big_r_minus, 4 * b(r[0]) - 1);
            assert_eq!(sch.level(0).big_r_plus, rp0);
            assert_eq!(sch.level(0).l, l0.clone());
            assert_eq!(sch.level(0).big_l, l0.clone());
            let g0 = sch.level(0).big_r_plus.clone();
            assert_eq!(sch.level(0).gamma_plus, g0);
            assert_eq!(
                sch.level(0).gamma_minus,
                sch.level(0).big_r_minus.clone()
            );
            // level 1
            let rp1: BigInt = b(r[1]) * (2 * b(s[1]) + 3);
            let l1: BigInt = 2 * rp1.clone() + 1;
            assert_eq!(sch.level(1).big_l, l0.clone() * l1.clone());
            assert_eq!(sch.level(1).gamma_plus, rp1.clone() * l0.clone() + g0.clone());
            // K-bar / K chain
            let kbar0: BigInt = l0.clone() * (b(r[0]) * b(s[0]) * b(s[0]) + b(r[0]) * (2 * b(s[0]) + 1));
            assert_eq!(sch.level(0).k_bar, kbar0.clone());
            let k0: BigInt = kbar0.clone()
                + l0.clone() * (b(s[1]) * rp1.clone() + g0.clone() + 2 * rp0_of(&sch));
            assert_eq!(sch.level(0).k.clone().unwrap(), k0.clone());
            let kbar1: BigInt =
                k0 + l0.clone() * l1.clone()
                    * (b(r[1]) * b(s[1]) * b(s[1]) + b(r[1]) * (2 * b(s[1]) + 1));
            assert_eq!(sch.level(1).k_bar, kbar1);
            // top level K is unavailable without level 3 inputs
            assert!(sch.level(2).k.is_none());
            // Upsilon / separation radius, level 0
            let ups0: BigInt = (BigInt::from(10) + 3 * rp0_of(&sch) + 1) + 2 * g0.clone();
            assert_eq!(sch.level(0).upsilon, ups0.clone());
            assert_eq!(
                sch.level(0).delta_sep,
                4 * g0.clone() + ups0 + 2 * l0.clone()
            );
            // positivity and monotonicity
            assert!(sch.level(0).big_l < sch.level(1).big_l.clone());
            assert!(sch.level(1).big_l < sch.level(2).big_l.clone());
            assert!(sch.level(0).delta_sep < sch.level(1).delta_sep.clone());
            // Gamma_n >= R_l for l <= n
            assert!(sch.level(2).gamma_plus >= sch.level(1).big_r_plus.clone());
            assert!(sch.level(2).gamma_plus >= sch.level(0).big_r_plus.clone());
            // r^pm <= R^pm
            for lv in &sch.levels {
                assert!(lv.r_minus <= lv.big_r_minus);
                assert!(lv.r_plus <= lv.big_r_plus);
            }
        }
    }

    fn rp0_of(sch: &ParameterSchedule) -> BigInt {
        sch.level(0).big_r_plus.clone()
    }

    #[test]
    fn gamma_bounds_exact_level0() {
        // a s >= 2 Gamma^-(a) + eps and a s^2 >= 2 Gamma^+(a) + eps for a <= r-bar,
        // checked at level 0 for small degree bounds
        for delta in [2u32, 3] {
            let sch = build_schedule(Mode::Exact, delta, &[1], None, None).unwrap();
            let lv = sch.level(0);
            let rbar = lv.r_bar.clone().unwrap();
            for a in [BigInt::one(), rbar.clone() / 2, rbar.clone()] {
                let gm = 4 * &a - 1; // Gamma^-_0(a) = R^-_0(a) since L_{-1}=1
                let gp = &a * (2 * &lv.s + 3);
                assert!(&a * &lv.s >= 2 * gm + &lv.eps);
                assert!(&a * &lv.s * &lv.s >= 2 * gp + &lv.eps);
            }
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(build_schedule(Mode::Exact, 2, &[], None, None).is_err());
        assert!(build_schedule(Mode::Exact, 2, &[2, 2], None, None).is_err());
        assert!(build_schedule(Mode::Desk, 2, &[1], None, None).is_err());
        assert!(build_schedule(Mode::Desk, 2, &[1], Some(&[12]), Some(&[2])).is_err());
        assert!(build_schedule(Mode::Exact, 1, &[1], None, None).is_err());
    }
}
