//! Power-series solutions of the coupled Bargmann system
//!
//! ```text
//! 2g φ₁'' + ωz φ₁' + (2gz² − E) φ₁ + (ω₀/2) φ₂ = 0
//! 2g φ₂'' − ωz φ₂' + (2gz² + E) φ₂ − (ω₀/2) φ₁ = 0
//! ```
//!
//! built by recurrence over an exact coefficient ring, plus the series
//! manipulations the G-function needs (z → iz, linear
//! combination, differentiation) and two residual computations:
//!
//! * [`system_residual`] substitutes a solution pair back into the system
//!   above through independent series operations; it is the oracle that keeps
//!   the recurrence honest.
//! * [`ode4_residual`] checks membership in the fourth-order equation
//!   16g²f⁗ + a₂f'' + a₁f' + a₀f = 0 satisfied by φ₁, φ₂(iz), and every
//!   combination of them.
//!
//! Residual series are reported only on their trustworthy window (order N−2
//! for the system, N−4 for the fourth-order equation); coefficients beyond it
//! would mix in unknown series terms and are never emitted.

use crate::exact::{rat_int, Coeff, EPoly, Energy, ExactError, GaussianRational, Rational};
use num_traits::{One, Zero};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series order {got} is too small; need at least {need}")]
    OrderTooSmall { got: usize, need: usize },
    #[error("coupling g must be nonzero: the recurrence divides by 2g(n+1)(n+2)")]
    SingularRecurrence,
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("derivative order {k} exceeds series order {order}")]
    DerivativeBeyondOrder { k: usize, order: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Exact model parameters of the system: coupling g, field frequency ω, level
/// splitting ω₀, and the energy E (bound rational or symbolic). No sign
/// constraints; g = 0 is representable but rejected by [`solve_system`], which
/// divides by 2g(n+1)(n+2).
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub g: Rational,
    pub omega: Rational,
    pub omega0: Rational,
    pub energy: Energy,
}

impl ModelParams {
    pub fn new(g: Rational, omega: Rational, omega0: Rational, energy: Energy) -> Self {
        ModelParams {
            g,
            omega,
            omega0,
            energy,
        }
    }

    /// The documented default parameter point (g, ω, ω₀) = (1/10, 1, 7/10).
    pub fn defaults(energy: Energy) -> Self {
        ModelParams::new(
            Rational::new(1.into(), 10.into()),
            Rational::one(),
            Rational::new(7.into(), 10.into()),
            energy,
        )
    }

    pub fn with_energy(&self, energy: Energy) -> Self {
        ModelParams {
            energy,
            ..self.clone()
        }
    }
}

/// Values and first derivatives of (φ₁, φ₂) at z = 0, in the active ring.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialConditions<R> {
    pub phi1_0: R,
    pub phi1_prime_0: R,
    pub phi2_0: R,
    pub phi2_prime_0: R,
}

impl<R: Coeff> InitialConditions<R> {
    pub fn new(phi1_0: R, phi1_prime_0: R, phi2_0: R, phi2_prime_0: R) -> Self {
        InitialConditions {
            phi1_0,
            phi1_prime_0,
            phi2_0,
            phi2_prime_0,
        }
    }

    /// The even canonical conditions φ₁(0) = φ₂(0) = 1, φ₁'(0) = φ₂'(0) = 0.
    pub fn even() -> Self {
        InitialConditions::new(R::one(), R::zero(), R::one(), R::zero())
    }

    /// The odd counterpart (0, 1, 0, 1).
    pub fn odd() -> Self {
        InitialConditions::new(R::zero(), R::one(), R::zero(), R::one())
    }

    pub fn zero() -> Self {
        InitialConditions::new(R::zero(), R::zero(), R::zero(), R::zero())
    }

    pub fn is_even_canonical(&self) -> bool {
        self == &Self::even()
    }

    pub fn is_odd_canonical(&self) -> bool {
        self == &Self::odd()
    }

    pub fn describe(&self) -> String {
        if self.is_even_canonical() {
            "even".into()
        } else if self.is_odd_canonical() {
            "odd".into()
        } else {
            format!(
                "({}, {}, {}, {})",
                self.phi1_0, self.phi1_prime_0, self.phi2_0, self.phi2_prime_0
            )
        }
    }
}

/// Truncated formal power series in z: coefficients for powers 0..=order.
/// Coefficients beyond the order are unknown, never assumed zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Coeff> PowerSeries<R> {
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least the constant term");
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![R::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order());
        PowerSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// s(z) → s(iz): coefficient n picks up a factor iⁿ. Order preserved.
    pub fn substitute_iz(&self) -> Self {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c.mul_i_pow(n))
                .collect(),
        }
    }

    /// k-th derivative; output order drops by k. Coefficient n of the result
    /// is (n+k)!/n! times coefficient n+k of the input.
    pub fn differentiate(&self, k: usize) -> Result<Self, SeriesError> {
        if k > self.order() {
            return Err(SeriesError::DerivativeBeyondOrder {
                k,
                order: self.order(),
            });
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let out_order = self.order() - k;
        let mut coeffs = Vec::with_capacity(out_order + 1);
        for n in 0..=out_order {
            coeffs.push(self.coeffs[n + k].scalar_mul(&falling_product(n, k)));
        }
        Ok(PowerSeries { coeffs })
    }

    /// ca·a + cb·b, coefficientwise; orders must agree.
    pub fn linear_combine(
        a: &PowerSeries<R>,
        b: &PowerSeries<R>,
        ca: &R,
        cb: &R,
    ) -> Result<PowerSeries<R>, SeriesError> {
        if a.order() != b.order() {
            return Err(SeriesError::OrderMismatch(a.order(), b.order()));
        }
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| ca.ring_mul(x).ring_add(&cb.ring_mul(y)))
            .collect();
        Ok(PowerSeries { coeffs })
    }

    pub fn add(&self, other: &PowerSeries<R>) -> Result<PowerSeries<R>, SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x.ring_add(y))
                .collect(),
        })
    }

    pub fn scale(&self, c: &R) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| c.ring_mul(x)).collect(),
        }
    }

    pub fn scale_rational(&self, s: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x.scalar_mul(s)).collect(),
        }
    }

    /// Multiply by z^k. Every output coefficient is known, so the order grows
    /// to order + k.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs }
    }

    /// Multiply by the z-polynomial Σ zp[k]·z^k, truncating to `out_order`,
    /// which must stay within this series' known window.
    pub fn mul_zpoly(&self, zp: &[R], out_order: usize) -> Self {
        assert!(out_order <= self.order());
        let mut coeffs = Vec::with_capacity(out_order + 1);
        for n in 0..=out_order {
            let mut acc = R::zero();
            for (k, c) in zp.iter().enumerate().take(n + 1) {
                if !c.is_zero() {
                    acc = acc.ring_add(&c.ring_mul(&self.coeffs[n - k]));
                }
            }
            coeffs.push(acc);
        }
        PowerSeries { coeffs }
    }

    /// Horner evaluation of the truncated polynomial at z.
    pub fn evaluate(&self, z: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.ring_mul(z).ring_add(c);
        }
        acc
    }

    pub fn is_zero_through(&self, order: usize) -> bool {
        self.coeffs[..=order.min(self.order())]
            .iter()
            .all(Coeff::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<(usize, &R)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
    }

    /// Exact printed coefficients, ascending powers of z.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.describe()).collect()
    }
}

impl PowerSeries<EPoly> {
    /// Evaluate every coefficient polynomial at E = e, landing in the scalar
    /// ring. Solving with E symbolic then binding commutes with solving at
    /// the bound value.
    pub fn bind_energy(&self, e: &GaussianRational) -> PowerSeries<GaussianRational> {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|p| p.evaluate(e)).collect(),
        }
    }
}

/// (n+1)(n+2)...(n+k) as a rational scalar.
fn falling_product(n: usize, k: usize) -> Rational {
    let mut acc = num_bigint::BigInt::from(1);
    for j in 1..=k {
        acc *= num_bigint::BigInt::from(n + j);
    }
    Rational::from_integer(acc)
}

/// A solved pair (φ₁, φ₂) with the inputs that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSolution<R> {
    pub phi1: PowerSeries<R>,
    pub phi2: PowerSeries<R>,
    pub params: ModelParams,
    pub ics: InitialConditions<R>,
}

/// Solve the system to the given order by the recurrences forced by matching
/// the coefficient of zⁿ in each row:
///
/// ```text
/// p_{n+2} = [(E − ωn)·pₙ − (ω₀/2)·qₙ − 2g·p_{n−2}] / (2g(n+1)(n+2))
/// q_{n+2} = [(ωn − E)·qₙ + (ω₀/2)·pₙ − 2g·q_{n−2}] / (2g(n+1)(n+2))
/// ```
///
/// with p₋₁ = p₋₂ = q₋₁ = q₋₂ = 0. [`system_residual`] re-derives the rows
/// without the recurrence and must vanish on the result.
pub fn solve_system<R: Coeff>(
    params: &ModelParams,
    ics: &InitialConditions<R>,
    order: usize,
) -> Result<SystemSolution<R>, SeriesError> {
    if order < 4 {
        return Err(SeriesError::OrderTooSmall {
            got: order,
            need: 4,
        });
    }
    if params.g.is_zero() {
        return Err(SeriesError::SingularRecurrence);
    }
    let e = R::from_energy(&params.energy)?;
    let two_g = &params.g * rat_int(2);
    let half_omega0 = &params.omega0 / rat_int(2);

    let mut p: Vec<R> = Vec::with_capacity(order + 1);
    let mut q: Vec<R> = Vec::with_capacity(order + 1);
    p.push(ics.phi1_0.clone());
    p.push(ics.phi1_prime_0.clone());
    q.push(ics.phi2_0.clone());
    q.push(ics.phi2_prime_0.clone());

    for n in 0..=(order - 2) {
        let omega_n = &params.omega * rat_int(n as i64);
        // E − ωn as a ring element; the q-row uses its negation
        let e_minus = e.ring_sub(&R::from_rational(&omega_n));
        let denom = &two_g * falling_product(n, 2);

        let mut num_p = e_minus.ring_mul(&p[n]).ring_sub(&q[n].scalar_mul(&half_omega0));
        let mut num_q = e_minus
            .ring_mul(&q[n])
            .ring_neg()
            .ring_add(&p[n].scalar_mul(&half_omega0));
        if n >= 2 {
            num_p = num_p.ring_sub(&p[n - 2].scalar_mul(&two_g));
            num_q = num_q.ring_sub(&q[n - 2].scalar_mul(&two_g));
        }
        p.push(num_p.scalar_div(&denom)?);
        q.push(num_q.scalar_div(&denom)?);
    }

    Ok(SystemSolution {
        phi1: PowerSeries { coeffs: p },
        phi2: PowerSeries { coeffs: q },
        params: params.clone(),
        ics: ics.clone(),
    })
}

/// Substitute a solution pair back into the two rows of the system, computed
/// from scratch with series operations (differentiation, z-shifts, scaling).
/// Returns both residual rows, trustworthy through order N−2. This is the
/// independent check on [`solve_system`]: on a genuine solution every
/// emitted coefficient is exactly zero.
pub fn system_residual<R: Coeff>(
    sol: &SystemSolution<R>,
) -> Result<(PowerSeries<R>, PowerSeries<R>), SeriesError> {
    let n = sol.phi1.order();
    if n < 2 || sol.phi2.order() < 2 {
        return Err(SeriesError::OrderTooSmall { got: n, need: 2 });
    }
    if sol.phi1.order() != sol.phi2.order() {
        return Err(SeriesError::OrderMismatch(
            sol.phi1.order(),
            sol.phi2.order(),
        ));
    }
    let out = n - 2;
    let e = R::from_energy(&sol.params.energy)?;
    let two_g = &sol.params.g * rat_int(2);
    let half_omega0 = &sol.params.omega0 / rat_int(2);

    let row = |a: &PowerSeries<R>, b: &PowerSeries<R>, sign_omega: i64, sign_e: i64, sign_spin: i64| -> Result<PowerSeries<R>, SeriesError> {
        // sign_omega·ωz·a' + 2g·a'' + 2g·z²·a + sign_e·E·a + sign_spin·(ω₀/2)·b
        let deriv2 = a.differentiate(2)?.truncated(out).scale_rational(&two_g);
        let z_deriv = a
            .differentiate(1)?
            .shift_up(1)
            .truncated(out)
            .scale_rational(&(&sol.params.omega * rat_int(sign_omega)));
        let z2 = a.shift_up(2).truncated(out).scale_rational(&two_g);
        let e_term = a
            .truncated(out)
            .scale(&e)
            .scale_rational(&rat_int(sign_e));
        let spin = b
            .truncated(out)
            .scale_rational(&(&half_omega0 * rat_int(sign_spin)));
        deriv2
            .add(&z_deriv)?
            .add(&z2)?
            .add(&e_term)?
            .add(&spin)
    };

    let r1 = row(&sol.phi1, &sol.phi2, 1, -1, 1)?;
    let r2 = row(&sol.phi2, &sol.phi1, -1, 1, -1)?;
    Ok((r1, r2))
}

/// Which completion of the a₁ coefficient to use. The printed source has an
/// unbalanced bracket; `Standard` is the completion under which φ₁ and φ₂(iz)
/// actually satisfy the fourth-order equation, `AltBracket` is the other
/// reading, kept as a diagnostic that the residual test rejects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum A1Form {
    /// a₁ = 4z·[16g² − ω(ω − 2E)]
    Standard,
    /// a₁ = 4z·(16g² − ω)·(ω − 2E)
    AltBracket,
}

/// Coefficients of the fourth-order companion equation
/// 16g²·f⁗ + a₂(z)·f'' + a₁(z)·f' + a₀(z)·f = 0, stored as z-polynomials
/// over the active ring (a₁ and a₀ involve E).
#[derive(Clone, Debug, PartialEq)]
pub struct Ode4Coefficients<R> {
    /// 16g², the constant leading coefficient; nonzero since g ≠ 0.
    pub leading: Rational,
    /// a₂ = −4(ω² − 8g²)z² + 16gω
    pub a2: [R; 3],
    /// a₁ = c₁·z (odd, degree ≤ 1 in the stored form [0, c₁])
    pub a1: [R; 2],
    /// a₀ = 16g²(z⁴ + 2) − 16gωz² − 4E² + ω₀²
    pub a0: [R; 5],
}

impl<R: Coeff> Ode4Coefficients<R> {
    pub fn new(params: &ModelParams) -> Result<Self, SeriesError> {
        Ode4Coefficients::with_a1(params, A1Form::Standard)
    }

    pub fn with_a1(params: &ModelParams, form: A1Form) -> Result<Self, SeriesError> {
        let g = &params.g;
        let om = &params.omega;
        let om0 = &params.omega0;
        let e = R::from_energy(&params.energy)?;
        let g2_16 = g * g * rat_int(16);

        let a2_0 = R::from_rational(&(g * om * rat_int(16)));
        let a2_2 = R::from_rational(&((om * om - g * g * rat_int(8)) * rat_int(-4)));

        let c1 = match form {
            // 4·[16g² − ω(ω − 2E)] = 4(16g² − ω²) + 8ωE
            A1Form::Standard => R::from_rational(&((&g2_16 - om * om) * rat_int(4)))
                .ring_add(&e.scalar_mul(&(om * rat_int(8)))),
            // 4·(16g² − ω)·(ω − 2E)
            A1Form::AltBracket => R::from_rational(om)
                .ring_sub(&e.scalar_mul(&rat_int(2)))
                .scalar_mul(&((&g2_16 - om) * rat_int(4))),
        };

        let a0_0 = R::from_rational(&(&g2_16 * rat_int(2) + om0 * om0))
            .ring_sub(&e.ring_mul(&e).scalar_mul(&rat_int(4)));
        let a0_2 = R::from_rational(&(g * om * rat_int(-16)));
        let a0_4 = R::from_rational(&g2_16);

        Ok(Ode4Coefficients {
            leading: g2_16,
            a2: [a2_0, R::zero(), a2_2],
            a1: [R::zero(), c1],
            a0: [a0_0, R::zero(), a0_2, R::zero(), a0_4],
        })
    }
}

/// Residual of f in the fourth-order equation, trustworthy through order
/// f.order − 4. Any series combined from φ₁ and φ₂(iz) has an identically
/// zero residual here, whatever the initial conditions.
pub fn ode4_residual<R: Coeff>(
    f: &PowerSeries<R>,
    params: &ModelParams,
) -> Result<PowerSeries<R>, SeriesError> {
    ode4_residual_with(f, params, A1Form::Standard)
}

/// [`ode4_residual`] with an explicit choice of the a₁ completion.
pub fn ode4_residual_with<R: Coeff>(
    f: &PowerSeries<R>,
    params: &ModelParams,
    form: A1Form,
) -> Result<PowerSeries<R>, SeriesError> {
    if f.order() < 4 {
        return Err(SeriesError::OrderTooSmall {
            got: f.order(),
            need: 4,
        });
    }
    let c = Ode4Coefficients::<R>::with_a1(params, form)?;
    let out = f.order() - 4;
    let lead = f
        .differentiate(4)?
        .truncated(out)
        .scale_rational(&c.leading);
    let term2 = f.differentiate(2)?.mul_zpoly(&c.a2, out);
    let term1 = f.differentiate(1)?.mul_zpoly(&c.a1, out);
    let term0 = f.mul_zpoly(&c.a0, out);
    lead.add(&term2)?.add(&term1)?.add(&term0)
}
