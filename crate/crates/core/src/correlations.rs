//! Closed-form correlation measures on the thermal X state.
//!
//! Each measure is the minimum of two branches; branch 0 is active in the
//! region r1 + r2 < 2|J_z| (Omega_0), branch 1 outside it. The W and M
//! eigenvalues are available both through the Bell probabilities (p-form) and
//! through explicit hyperbolic expressions; the two routes agree to ~1e-12
//! and the explicit route stays cheap and overflow-safe on sweeps.

use serde::Serialize;

use crate::model::{entropy_term, ln_add_exp, ln_cosh, ThermalXState};
use crate::model::{BellSpectrum, EffectiveParams};
use crate::{Result, SpinCorrError};

const LN_2: f64 = std::f64::consts::LN_2;
/// Two branches closer than this are reported as a tie.
pub const TIE_TOL: f64 = 1e-12;
/// Denominators p_m + p_n below this contribute nothing to M.
const LQFI_DENOM_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ActiveBranch {
    Zero,
    One,
    Tie,
}

impl std::fmt::Display for ActiveBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActiveBranch::Zero => write!(f, "0"),
            ActiveBranch::One => write!(f, "1"),
            ActiveBranch::Tie => write!(f, "tie"),
        }
    }
}

/// Both branches of a measure plus the active minimum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BranchPair {
    pub branch0: f64,
    pub branch1: f64,
    pub active: ActiveBranch,
    pub value: f64,
}

impl BranchPair {
    fn new(branch0: f64, branch1: f64) -> Self {
        let branch0 = branch0.clamp(0.0, 1.0);
        let branch1 = branch1.clamp(0.0, 1.0);
        let active = if (branch0 - branch1).abs() <= TIE_TOL {
            ActiveBranch::Tie
        } else if branch0 < branch1 {
            ActiveBranch::Zero
        } else {
            ActiveBranch::One
        };
        let value = match active {
            ActiveBranch::Tie => branch0,
            _ => branch0.min(branch1),
        };
        BranchPair { branch0, branch1, active, value }
    }
}

/// All three measures at one state, with the underlying W/M eigenvalues.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationResult {
    pub q: BranchPair,
    pub u: BranchPair,
    pub f: BranchPair,
    /// (W_xx, W_yy, W_zz)
    pub w_eigs: (f64, f64, f64),
    /// (M_xx, M_yy, M_zz)
    pub m_eigs: (f64, f64, f64),
    pub s_bits: f64,
    /// w = 2(|u| + |v|)
    pub w_param: f64,
}

impl CorrelationResult {
    pub fn evaluate(s: &ThermalXState) -> Self {
        let bp = s.bell_probs();
        let s_bits = bp.p.iter().map(|&p| entropy_term(p)).sum();
        let w_eigs = w_eigenvalues(s);
        let m_eigs = m_eigenvalues(s);
        let w_param = (2.0 * (s.u.norm() + s.v.norm())).min(1.0);
        CorrelationResult {
            q: discord_from(s, &bp, s_bits),
            u: BranchPair::new(1.0 - w_eigs.2, 1.0 - w_eigs.0),
            f: BranchPair::new(1.0 - m_eigs.2, 1.0 - m_eigs.0),
            w_eigs,
            m_eigs,
            s_bits,
            w_param,
        }
    }
}

fn discord_from(s: &ThermalXState, bp: &BellSpectrum, s_bits: f64) -> BranchPair {
    let q0 = -s_bits - 2.0 * (-entropy_term(s.a) - entropy_term(s.b));
    // (1 +/- w)/2 written through the Bell probabilities; this keeps the
    // 1 - w side accurate when w approaches 1.
    let hi = (bp.p1() + bp.p2()).min(1.0);
    let lo = (bp.p3() + bp.p4()).min(1.0);
    let q1 = 1.0 - s_bits + entropy_term(hi) + entropy_term(lo);
    BranchPair::new(q0, q1)
}

/// Entropic discord, Q = min{Q0, Q1}.
pub fn discord(s: &ThermalXState) -> BranchPair {
    let bp = s.bell_probs();
    let s_bits = bp.p.iter().map(|&p| entropy_term(p)).sum();
    discord_from(s, &bp, s_bits)
}

/// Local quantum uncertainty, U = min{1 - W_zz, 1 - W_xx}.
pub fn lqu(s: &ThermalXState) -> BranchPair {
    let (wxx, _, wzz) = w_eigenvalues(s);
    BranchPair::new(1.0 - wzz, 1.0 - wxx)
}

/// Local quantum Fisher information, F = min{1 - M_zz, 1 - M_xx}.
pub fn lqfi(s: &ThermalXState) -> BranchPair {
    let (mxx, _, mzz) = m_eigenvalues(s);
    BranchPair::new(1.0 - mzz, 1.0 - mxx)
}

/// (W_xx, W_yy, W_zz) via square-root products of Bell probabilities.
pub fn w_eigs_p_form(bp: &BellSpectrum) -> (f64, f64, f64) {
    let [p1, p2, p3, p4] = bp.p;
    (
        2.0 * ((p1 * p2).sqrt() + (p3 * p4).sqrt()),
        2.0 * ((p1 * p3).sqrt() + (p2 * p4).sqrt()),
        2.0 * ((p1 * p4).sqrt() + (p2 * p3).sqrt()),
    )
}

/// (W_xx, W_yy, W_zz) through the hyperbolic closed forms; requires a thermal
/// state.
pub fn w_eigs_explicit(s: &ThermalXState) -> Option<(f64, f64, f64)> {
    let p = s.params()?;
    let (bj, b1, b2) = (s.beta * p.jz, s.beta * p.r1, s.beta * p.r2);
    let ln4 = 2.0 * LN_2;
    Some((
        (ln4 + ln_cosh((b1 + b2) / 2.0) - s.log_z).exp(),
        (ln4 + ln_cosh((b1 - b2) / 2.0) - s.log_z).exp(),
        (ln4 + ln_cosh(bj) - s.log_z).exp(),
    ))
}

fn w_eigenvalues(s: &ThermalXState) -> (f64, f64, f64) {
    let p_form = w_eigs_p_form(&s.bell_probs());
    match w_eigs_explicit(s) {
        Some(explicit) => {
            debug_assert!(
                (explicit.0 - p_form.0).abs() < 1e-10
                    && (explicit.1 - p_form.1).abs() < 1e-10
                    && (explicit.2 - p_form.2).abs() < 1e-10,
                "W p-form and explicit form disagree: {p_form:?} vs {explicit:?}"
            );
            explicit
        }
        None => p_form,
    }
}

fn m_pair(pm: f64, pn: f64) -> f64 {
    let d = pm + pn;
    if d < LQFI_DENOM_FLOOR {
        0.0
    } else {
        4.0 * pm * pn / d
    }
}

/// (M_xx, M_yy, M_zz) from the Bell probabilities.
pub fn m_eigs_p_form(bp: &BellSpectrum) -> (f64, f64, f64) {
    let [p1, p2, p3, p4] = bp.p;
    (
        m_pair(p1, p2) + m_pair(p3, p4),
        m_pair(p1, p3) + m_pair(p2, p4),
        m_pair(p1, p4) + m_pair(p2, p3),
    )
}

/// (M_xx, M_yy, M_zz) through the hyperbolic closed forms.
pub fn m_eigs_explicit(s: &ThermalXState) -> Option<(f64, f64, f64)> {
    let p = s.params()?;
    let (bj, b1, b2) = (s.beta * p.jz, s.beta * p.r1, s.beta * p.r2);
    // shared numerator e^{beta Jz} cosh(beta r1) + e^{-beta Jz} cosh(beta r2)
    let ln_n = ln_add_exp(bj + ln_cosh(b1), -bj + ln_cosh(b2));
    let ln4 = 2.0 * LN_2;
    let mxx = (ln4 + ln_n - s.log_z - ln_add_exp(ln_cosh(2.0 * bj), ln_cosh(b1 - b2))).exp();
    let myy = (ln4 + ln_n - s.log_z - ln_add_exp(ln_cosh(2.0 * bj), ln_cosh(b1 + b2))).exp();
    let mzz = (LN_2 + ln_n - s.log_z - ln_cosh(b1) - ln_cosh(b2)).exp();
    Some((mxx, myy, mzz))
}

fn m_eigenvalues(s: &ThermalXState) -> (f64, f64, f64) {
    let p_form = m_eigs_p_form(&s.bell_probs());
    match m_eigs_explicit(s) {
        Some(explicit) => {
            debug_assert!(
                (explicit.0 - p_form.0).abs() < 1e-10
                    && (explicit.1 - p_form.1).abs() < 1e-10
                    && (explicit.2 - p_form.2).abs() < 1e-10,
                "M p-form and explicit form disagree: {p_form:?} vs {explicit:?}"
            );
            explicit
        }
        None => p_form,
    }
}

/// Values of the three measures and whether U <= Q <= F holds (with 1e-9
/// slack).
#[derive(Debug, Clone, Copy)]
pub struct OrderingCheck {
    pub u: f64,
    pub q: f64,
    pub f: f64,
    pub u_le_q: bool,
    pub q_le_f: bool,
}

pub fn ordering_check(s: &ThermalXState) -> OrderingCheck {
    let r = CorrelationResult::evaluate(s);
    OrderingCheck {
        u: r.u.value,
        q: r.q.value,
        f: r.f.value,
        u_le_q: r.u.value <= r.q.value + 1e-9,
        q_le_f: r.q.value <= r.f.value + 1e-9,
    }
}

/// Signed distance r1 + r2 - 2|J_z| to the branch boundary: negative in
/// Omega_0, positive in Omega_1.
pub fn branch_boundary(p: &EffectiveParams) -> f64 {
    p.r1 + p.r2 - 2.0 * p.jz.abs()
}

/// Left side of the transcendental branch-crossing equation for the discord;
/// its root coincides with r1 + r2 = 2|J_z|. Equals (Q1 - Q0) ln 2.
pub fn discord_boundary_residual(s: &ThermalXState) -> f64 {
    let bp = s.bell_probs();
    let nat = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    let hi = (bp.p1() + bp.p2()).min(1.0);
    let lo = (bp.p3() + bp.p4()).min(1.0);
    std::f64::consts::LN_2 + 2.0 * (nat(s.a) + nat(s.b)) - nat(hi) - nat(lo)
}

/// Leading high-temperature coefficients: measure = c2/T^2 + c3/T^3 + O(1/T^4).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HighTCoefficients {
    pub q0: (f64, f64),
    pub q1: (f64, f64),
    pub u0: (f64, f64),
    pub u1: (f64, f64),
    pub f0: (f64, f64),
    pub f1: (f64, f64),
}

impl HighTCoefficients {
    pub fn branches(&self) -> [(&'static str, (f64, f64)); 6] {
        [
            ("Q0", self.q0),
            ("Q1", self.q1),
            ("U0", self.u0),
            ("U1", self.u1),
            ("F0", self.f0),
            ("F1", self.f1),
        ]
    }
}

pub fn high_t_coefficients(p: &EffectiveParams) -> HighTCoefficients {
    let c2_0 = (p.r1 * p.r1 + p.r2 * p.r2) / 4.0;
    let c2_1 = (4.0 * p.jz * p.jz + (p.r1 - p.r2).powi(2)) / 8.0;
    let c3 = p.jz * (p.r2 * p.r2 - p.r1 * p.r1) / 4.0;
    HighTCoefficients {
        q0: (c2_0 / LN_2, c3 / LN_2),
        q1: (c2_1 / LN_2, c3 / LN_2),
        u0: (c2_0, c3),
        u1: (c2_1, c3),
        f0: (2.0 * c2_0, 2.0 * c3),
        f1: (2.0 * c2_1, 2.0 * c3),
    }
}

/// LQU and LQFI shortcuts at J_z = 0:
/// U = 1 - sech[(r1 - r2)/2T], F = tanh^2[(r1 - r2)/2T].
pub fn jz0_closed_forms(r1: f64, r2: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(SpinCorrError::Domain("temperature must be positive".into()));
    }
    let x = (r1 - r2) / (2.0 * t);
    let u = 1.0 - 1.0 / x.cosh();
    let f = x.tanh().powi(2);
    Ok((u, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Couplings, ThermalXState};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "expected {y}, got {x} (tol {tol})");
    }

    fn gibbs(jz: f64, r1: f64, r2: f64, t: f64) -> ThermalXState {
        ThermalXState::gibbs(&EffectiveParams::new(jz, r1, r2).unwrap(), t).unwrap()
    }

    fn bell_pure() -> ThermalXState {
        ThermalXState::from_entries(0.5, 0.0, Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0))
            .unwrap()
    }

    #[test]
    fn discord_vanishes_on_classical_states() {
        let s = gibbs(0.3, 0.0, 0.0, 1e12);
        let q = discord(&s);
        assert_close(q.branch0, 0.0, 1e-12);
        assert_close(q.branch1, 0.0, 1e-12);

        // Jz = 0, r1 = r2: classical at every temperature
        for &t in &[0.1, 0.7, 3.0] {
            let q = discord(&gibbs(0.0, 1.0, 1.0, t));
            assert_close(q.value, 0.0, 1e-11);
        }
    }

    #[test]
    fn discord_of_pure_bell_state_is_one() {
        assert_close(discord(&bell_pure()).value, 1.0, 1e-12);
    }

    #[test]
    fn lqu_examples() {
        let u = lqu(&gibbs(0.0, 1.0, 0.0, 1.0));
        assert_close(u.value, 1.0 - 1.0 / 0.5_f64.cosh(), 1e-12);

        // one-third plateau at r1 = 2|Jz|, r2 = 0
        let u = lqu(&gibbs(1.0, 2.0, 0.0, 1e-4));
        assert_close(u.value, 1.0 / 3.0, 1e-6);

        assert_close(lqu(&bell_pure()).value, 1.0, 1e-12);
    }

    #[test]
    fn lqfi_examples() {
        let f = lqfi(&gibbs(0.0, 1.0, 0.0, 1.0));
        assert_close(f.value, 0.5_f64.tanh().powi(2), 1e-12);

        let f = lqfi(&gibbs(0.4, 0.0, 0.0, 1e12));
        assert_close(f.value, 0.0, 1e-11);

        assert_close(lqfi(&bell_pure()).value, 1.0, 1e-12);
    }

    #[test]
    fn ordering_holds_on_random_sample() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let jz = rng.gen_range(-5.0..5.0);
            let r1 = rng.gen_range(0.0..5.0);
            let r2 = rng.gen_range(0.0..5.0);
            let t = 10f64.powf(rng.gen_range(-1.3f64..1.7f64));
            let c = ordering_check(&gibbs(jz, r1, r2, t));
            assert!(c.u_le_q && c.q_le_f, "ordering broken at jz={jz} r1={r1} r2={r2} t={t}");
        }
    }

    #[test]
    fn ordering_with_all_zero_measures() {
        let c = ordering_check(&gibbs(1.0, 0.0, 0.0, 0.5));
        assert!(c.u_le_q && c.q_le_f);
        assert_close(c.u, 0.0, 1e-12);
        assert_close(c.f, 0.0, 1e-12);
    }

    #[test]
    fn branch_boundary_examples() {
        let b = branch_boundary(&EffectiveParams::new(1.0, 1.6, 0.4).unwrap());
        assert_close(b, 0.0, 1e-15);
        let b = branch_boundary(&EffectiveParams::new(1.0, 0.5, 0.5).unwrap());
        assert_close(b, -1.0, 1e-15);
        assert!(branch_boundary(&EffectiveParams::new(0.0, 0.3, 0.1).unwrap()) > 0.0);
    }

    #[test]
    fn boundary_residual_vanishes_on_the_boundary() {
        for &t in &[0.3, 1.0, 4.0] {
            let s = gibbs(1.0, 1.6, 0.4, t);
            assert_close(discord_boundary_residual(&s), 0.0, 1e-9);
        }
        let mixed = gibbs(0.7, 0.0, 0.0, 1e12);
        assert_close(discord_boundary_residual(&mixed), 0.0, 1e-12);
    }

    #[test]
    fn boundary_residual_sign_tracks_branch_ordering() {
        let s = gibbs(1.0, 3.0, 1.0, 1.0);
        let res = discord_boundary_residual(&s);
        let q = discord(&s);
        assert!(res.abs() > 1e-6);
        assert_eq!(res > 0.0, q.branch1 > q.branch0);
    }

    #[test]
    fn high_t_coefficient_examples() {
        let c = high_t_coefficients(&EffectiveParams::new(0.0, 1.0, 1.0).unwrap());
        assert_close(c.q0.0, 0.5 / LN_2, 1e-15);
        assert_close(c.q0.1, 0.0, 1e-15);

        let c = high_t_coefficients(&EffectiveParams::new(1.0, 0.0, 0.0).unwrap());
        assert_close(c.q1.0, 0.5 / LN_2, 1e-15);
        assert_close(c.u1.0, 0.5, 1e-15);
        assert_close(c.f1.0, 1.0, 1e-15);
    }

    #[test]
    fn high_t_coefficient_relations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = EffectiveParams::new(
                rng.gen_range(-4.0..4.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.0..4.0),
            )
            .unwrap();
            let c = high_t_coefficients(&p);
            for ((_, q), (_, u), (_, f)) in [
                (("Q0", c.q0), ("U0", c.u0), ("F0", c.f0)),
                (("Q1", c.q1), ("U1", c.u1), ("F1", c.f1)),
            ] {
                assert_close(u.0, LN_2 * q.0, 1e-12);
                assert_close(u.1, LN_2 * q.1, 1e-12);
                assert_close(f.0, 2.0 * u.0, 1e-12);
                assert_close(f.1, 2.0 * u.1, 1e-12);
            }
        }
    }

    #[test]
    fn jz0_closed_forms_match_general_path() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let r1 = rng.gen_range(0.0..5.0);
            let r2 = rng.gen_range(0.0..5.0);
            let t = 10f64.powf(rng.gen_range(-1.0f64..1.5f64));
            let (u_cf, f_cf) = jz0_closed_forms(r1, r2, t).unwrap();
            let s = gibbs(0.0, r1, r2, t);
            assert_close(lqu(&s).value, u_cf, 1e-12);
            assert_close(lqfi(&s).value, f_cf, 1e-12);
        }
    }

    #[test]
    fn jz0_closed_forms_depend_on_distance_only() {
        let a = jz0_closed_forms(1.0, 3.0, 1.0).unwrap();
        let b = jz0_closed_forms(3.0, 1.0, 1.0).unwrap();
        assert_close(a.0, b.0, 1e-15);
        assert_close(a.1, b.1, 1e-15);

        let z = jz0_closed_forms(1.0, 1.0, 0.7).unwrap();
        assert_eq!(z, (0.0, 0.0));

        let v = jz0_closed_forms(1.0, 0.0, 1.0).unwrap();
        assert_close(v.0, 1.0 - 1.0 / 0.5_f64.cosh(), 1e-15);
        assert_close(v.1, 0.5_f64.tanh().powi(2), 1e-15);

        assert!(jz0_closed_forms(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn eigenvalue_order_and_branch_ranges() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let s = gibbs(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.0..5.0),
                rng.gen_range(0.0..5.0),
                10f64.powf(rng.gen_range(-2.0f64..1.7f64)),
            );
            let r = CorrelationResult::evaluate(&s);
            assert!(r.w_eigs.0 >= r.w_eigs.1 - 1e-12, "W_xx < W_yy");
            assert!(r.m_eigs.0 >= r.m_eigs.1 - 1e-12, "M_xx < M_yy");
            assert!((0.0..=1.0).contains(&r.w_param));
            for b in [r.q, r.u, r.f] {
                assert!((0.0..=1.0).contains(&b.branch0));
                assert!((0.0..=1.0).contains(&b.branch1));
                assert!((b.value - b.branch0.min(b.branch1)).abs() <= TIE_TOL);
            }
        }
    }

    #[test]
    fn p_form_matches_explicit_form() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..500 {
            let s = gibbs(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.0..5.0),
                rng.gen_range(0.0..5.0),
                10f64.powf(rng.gen_range(-1.3f64..1.7f64)),
            );
            let bp = s.bell_probs();
            let (wp, we) = (w_eigs_p_form(&bp), w_eigs_explicit(&s).unwrap());
            let (mp, me) = (m_eigs_p_form(&bp), m_eigs_explicit(&s).unwrap());
            for (p, e) in [(wp.0, we.0), (wp.1, we.1), (wp.2, we.2), (mp.0, me.0), (mp.1, me.1), (mp.2, me.2)] {
                assert_close(p, e, 1e-10);
            }
        }
    }

    #[test]
    fn branches_flip_together_at_the_boundary() {
        // cross r1 + r2 = 2|Jz| along r1 at jz=1, r2=0.4
        let mut prev: Option<(ActiveBranch, ActiveBranch, ActiveBranch)> = None;
        let mut flips = Vec::new();
        let steps = 3000;
        for i in 0..=steps {
            let r1 = 1.0 + 1.2 * i as f64 / steps as f64; // crosses 1.6
            let r = CorrelationResult::evaluate(&gibbs(1.0, r1, 0.4, 1.5));
            let act = (r.q.active, r.u.active, r.f.active);
            // on the boundary itself all branches tie; skip that grid point
            if act.0 == ActiveBranch::Tie || act.1 == ActiveBranch::Tie || act.2 == ActiveBranch::Tie {
                assert_eq!(act, (ActiveBranch::Tie, ActiveBranch::Tie, ActiveBranch::Tie));
                continue;
            }
            if let Some(p) = prev {
                if p != act {
                    flips.push((r1, p, act));
                }
            }
            prev = Some(act);
        }
        // all three flip in the same grid cell, at r1 = 1.6
        assert_eq!(flips.len(), 1, "flips: {flips:?}");
        assert!((flips[0].0 - 1.6).abs() <= 1.2 / steps as f64 + 1e-12);
        assert_eq!(flips[0].1, (ActiveBranch::Zero, ActiveBranch::Zero, ActiveBranch::Zero));
        assert_eq!(flips[0].2, (ActiveBranch::One, ActiveBranch::One, ActiveBranch::One));
    }

    #[test]
    fn measures_coincide_at_low_temperature() {
        // away from the vanishing lines, all measures tend to 1 together
        for (jz, r1, r2) in [(1.0, 3.0, 0.5), (1.0, 0.5, 3.0), (-2.0, 1.0, 1.0)] {
            let c = ordering_check(&gibbs(jz, r1, r2, 1e-3));
            assert!((c.u - c.q).abs() <= 1e-3 && (c.q - c.f).abs() <= 1e-3, "{c:?}");
            assert_close(c.q, 1.0, 1e-2);
        }
    }

    #[test]
    fn fig1_parameters_ordering_curve() {
        let c = Couplings::new(-1.0, -1.5, 2.0, 1.8, 0.3).unwrap();
        for i in 1..=40 {
            let t = 0.25 * i as f64;
            let s = ThermalXState::gibbs_raw(&c, t).unwrap();
            let chk = ordering_check(&s);
            assert!(chk.u_le_q && chk.q_le_f, "t={t}: {chk:?}");
        }
    }

    #[test]
    fn discord_branch_agrees_with_oracle_point() {
        let s = gibbs(1.0, 1.0, 0.5, 1.0);
        let q = discord(&s);
        let oracle = crate::oracle::discord_bruteforce(&s.dense_matrix(), (181, 72), 40);
        assert_close(q.value, oracle, 1e-6);
    }
}
