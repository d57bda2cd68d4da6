//! Floating-point oracle: an adaptive 8(5,3) Dormand-Prince integrator with
//! dense output and event location, displacement maps of perturbed
//! oscillators, limit-cycle search and Casimir drift.

#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;

use crate::averaging::PerturbedOscillator;
use crate::error::{Error, Result};

/// Tolerances and limits for [`integrate`] and the routines built on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    /// Longest integration span accepted.
    pub max_time: f64,
    /// Event times are located to this accuracy.
    pub event_tol: f64,
    pub max_steps: usize,
    /// Any component beyond this magnitude aborts the integration.
    pub escape_bound: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            max_time: 1e4,
            event_tol: 1e-13,
            max_steps: 1_000_000,
            escape_bound: f64::INFINITY,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        IntegratorConfig {
            rtol,
            atol,
            ..Default::default()
        }
    }

    /// The same configuration with both tolerances divided by `k`.
    pub fn tightened(&self, k: f64) -> Self {
        IntegratorConfig {
            rtol: self.rtol / k,
            atol: self.atol / k,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && !x.is_nan();
        if !(positive(self.rtol) && positive(self.atol) && positive(self.max_step) && positive(self.event_tol)) {
            return Err(Error::usage("integrator tolerances and step bound must be positive"));
        }
        if !positive(self.max_time) || !positive(self.escape_bound) || self.max_steps == 0 {
            return Err(Error::usage("integrator limits must be positive"));
        }
        Ok(())
    }
}

/// Dense-output polynomial over one accepted step.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 8],
}

impl<const N: usize> Segment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> [f64; N] {
        self.cont[0]
    }

    pub fn end(&self) -> [f64; N] {
        self.eval(self.t1())
    }

    /// Interpolated state at `t` inside the step.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        core::array::from_fn(|i| {
            let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s
        })
    }
}

/// An integrated trajectory with dense output.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub segments: Vec<Segment<N>>,
    pub t0: f64,
    pub y0: [f64; N],
    pub t_end: f64,
    pub y_end: [f64; N],
    pub evaluations: usize,
    pub rejected: usize,
}

impl<const N: usize> Trajectory<N> {
    /// State at any `t` in `[t0, t_end]`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.segments.is_empty() || t <= self.t0 {
            return self.y0;
        }
        let k = self
            .segments
            .partition_point(|s| s.t1() < t)
            .min(self.segments.len() - 1);
        self.segments[k].eval(t)
    }
}

/// What the driver callback wants after an accepted step.
enum Flow {
    Continue,
    Stop,
}

fn sq(x: f64) -> f64 {
    x * x
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    core::array::from_fn(|i| {
        let mut s = 0.0;
        for (a, k) in terms {
            s += a * k[i];
        }
        y[i] + h * s
    })
}

fn comb<const N: usize>(terms: &[(f64, &[f64; N])]) -> [f64; N] {
    axpy(&[0.0; N], 1.0, terms)
}

fn check_finite<const N: usize>(y: &[f64; N], bound: f64, t: f64) -> Result<()> {
    for v in y {
        if !v.is_finite() {
            return Err(Error::numeric(alloc::format!("non-finite state at t = {t}")));
        }
        if v.abs() > bound {
            return Err(Error::numeric(alloc::format!(
                "trajectory escaped |y| <= {bound} at t = {t}"
            )));
        }
    }
    Ok(())
}

fn initial_step<const N: usize, F>(f: &mut F, t0: f64, y0: &[f64; N], k1: &[f64; N], cfg: &IntegratorConfig) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let sk: [f64; N] = core::array::from_fn(|i| cfg.atol + cfg.rtol * y0[i].abs());
    let dnf: f64 = (0..N).map(|i| sq(k1[i] / sk[i])).sum();
    let dny: f64 = (0..N).map(|i| sq(y0[i] / sk[i])).sum();
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        libm::sqrt(dny / dnf) * 0.01
    };
    h = h.min(cfg.max_step);
    let y1 = axpy(y0, h, &[(1.0, k1)]);
    let k2 = f(t0 + h, &y1);
    let der2 = libm::sqrt((0..N).map(|i| sq((k2[i] - k1[i]) / sk[i])).sum::<f64>()) / h;
    let der12 = der2.abs().max(libm::sqrt(dnf));
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        libm::pow(0.01 / der12, 1.0 / 8.0)
    };
    (100.0 * h).min(h1).min(cfg.max_step)
}

/// Runs the integrator from `t0` to `t_end`, calling `on_step` after each
/// accepted step.
fn drive<const N: usize, F, C>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    cfg: &IntegratorConfig,
    mut on_step: C,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    C: FnMut(&Segment<N>) -> Result<Flow>,
{
    cfg.validate()?;
    if t_end.is_nan() || t0.is_nan() || t_end < t0 || t_end - t0 > cfg.max_time {
        return Err(Error::usage("integration span must be nonnegative and below max_time"));
    }
    check_finite(&y0, cfg.escape_bound, t0)?;
    let mut traj = Trajectory {
        segments: Vec::new(),
        t0,
        y0,
        t_end: t0,
        y_end: y0,
        evaluations: 0,
        rejected: 0,
    };
    if t_end == t0 {
        return Ok(traj);
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&mut f, t0, &y0, &k1, cfg).min(t_end - t0);
    traj.evaluations += 2;
    let mut last_rejected = false;
    let mut steps = 0;
    loop {
        if steps >= cfg.max_steps {
            return Err(Error::numeric(alloc::format!("step limit reached at t = {t}")));
        }
        steps += 1;
        if h.abs() <= f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::numeric(alloc::format!("step size underflow at t = {t}")));
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A43, &k3)]));
        let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + C6 * h, &axpy(&y, h, &[(A61, &k1), (A64, &k4), (A65, &k5)]));
        let k7 = f(
            t + C7 * h,
            &axpy(&y, h, &[(A71, &k1), (A74, &k4), (A75, &k5), (A76, &k6)]),
        );
        let k8 = f(
            t + C8 * h,
            &axpy(&y, h, &[(A81, &k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]),
        );
        let k9 = f(
            t + C9 * h,
            &axpy(
                &y,
                h,
                &[(A91, &k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)],
            ),
        );
        let k10 = f(
            t + C10 * h,
            &axpy(
                &y,
                h,
                &[
                    (A101, &k1),
                    (A104, &k4),
                    (A105, &k5),
                    (A106, &k6),
                    (A107, &k7),
                    (A108, &k8),
                    (A109, &k9),
                ],
            ),
        );
        let k11 = f(
            t + C11 * h,
            &axpy(
                &y,
                h,
                &[
                    (A111, &k1),
                    (A114, &k4),
                    (A115, &k5),
                    (A116, &k6),
                    (A117, &k7),
                    (A118, &k8),
                    (A119, &k9),
                    (A1110, &k10),
                ],
            ),
        );
        let t_new = if last { t_end } else { t + h };
        let yy1 = axpy(
            &y,
            h,
            &[
                (A121, &k1),
                (A124, &k4),
                (A125, &k5),
                (A126, &k6),
                (A127, &k7),
                (A128, &k8),
                (A129, &k9),
                (A1210, &k10),
                (A1211, &k11),
            ],
        );
        let k12 = f(t_new, &yy1);
        traj.evaluations += 11;
        let bsum = comb(&[
            (B1, &k1),
            (B6, &k6),
            (B7, &k7),
            (B8, &k8),
            (B9, &k9),
            (B10, &k10),
            (B11, &k11),
            (B12, &k12),
        ]);
        let y_new = axpy(&y, h, &[(1.0, &bsum)]);

        let mut err = 0.0;
        let mut err2 = 0.0;
        for i in 0..N {
            let sk = cfg.atol + cfg.rtol * y[i].abs().max(y_new[i].abs());
            let e2 = bsum[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
            err2 += sq(e2 / sk);
            let e = ER1 * k1[i]
                + ER6 * k6[i]
                + ER7 * k7[i]
                + ER8 * k8[i]
                + ER9 * k9[i]
                + ER10 * k10[i]
                + ER11 * k11[i]
                + ER12 * k12[i];
            err += sq(e / sk);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err * libm::sqrt(1.0 / (deno * N as f64));
        let fac11 = libm::pow(err, 1.0 / 8.0);
        let fac = (1.0 / 6.0f64).max((1.0 / 0.33f64).min(fac11 / 0.9));
        let mut h_new = h / fac;

        if err <= 1.0 && err.is_finite() {
            let f_new = f(t_new, &y_new);
            check_finite(&y_new, cfg.escape_bound, t_new)?;
            let ydiff: [f64; N] = core::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; N] = core::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let c4: [f64; N] = core::array::from_fn(|i| ydiff[i] - h * f_new[i] - bspl[i]);
            let dense_base = |d: [f64; 12]| {
                comb(&[
                    (d[0], &k1),
                    (d[1], &k6),
                    (d[2], &k7),
                    (d[3], &k8),
                    (d[4], &k9),
                    (d[5], &k10),
                    (d[6], &k11),
                    (d[7], &k12),
                ])
            };
            let k14 = f(
                t + C14 * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (A141, &k1),
                        (A147, &k7),
                        (A148, &k8),
                        (A149, &k9),
                        (A1410, &k10),
                        (A1411, &k11),
                        (A1412, &k12),
                        (A1413, &f_new),
                    ],
                ),
            );
            let k15 = f(
                t + C15 * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (A151, &k1),
                        (A156, &k6),
                        (A157, &k7),
                        (A158, &k8),
                        (A1511, &k11),
                        (A1512, &k12),
                        (A1513, &f_new),
                        (A1514, &k14),
                    ],
                ),
            );
            let k16 = f(
                t + C16 * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (A161, &k1),
                        (A166, &k6),
                        (A167, &k7),
                        (A168, &k8),
                        (A169, &k9),
                        (A1613, &f_new),
                        (A1614, &k14),
                        (A1615, &k15),
                    ],
                ),
            );
            traj.evaluations += 4;
            let finish = |d: [f64; 12]| {
                let base = dense_base(d);
                let tail = comb(&[(d[8], &f_new), (d[9], &k14), (d[10], &k15), (d[11], &k16)]);
                let out: [f64; N] = core::array::from_fn(|i| h * (base[i] + tail[i]));
                out
            };
            let seg = Segment {
                t0: t,
                h,
                cont: [y, ydiff, bspl, c4, finish(D4), finish(D5), finish(D6), finish(D7)],
            };
            let flow = on_step(&seg)?;
            traj.segments.push(seg);
            t = t_new;
            y = y_new;
            k1 = f_new;
            traj.t_end = t;
            traj.y_end = y;
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            if last || matches!(flow, Flow::Stop) {
                return Ok(traj);
            }
        } else {
            h_new = h / (1.0 / 0.33f64).min(fac11 / 0.9);
            last_rejected = true;
            traj.rejected += 1;
        }
        h = if h_new.is_finite() {
            h_new.min(cfg.max_step)
        } else {
            h * 0.1
        };
    }
}

/// Integrates `y' = f(t, y)` on `[t0, t_end]` with dense output.
pub fn integrate<const N: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    drive(f, t0, y0, t_end, cfg, |_| Ok(Flow::Continue))
}

/// A located zero of an event function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventHit<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
}

/// Integrates until the first zero of `g` after `t0` crossed in `direction`
/// (`+1` rising, `-1` falling, `0` either), or `t_max`.
pub fn integrate_to_event<const N: usize, F, G>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_max: f64,
    mut g: G,
    direction: i32,
    cfg: &IntegratorConfig,
) -> Result<Option<EventHit<N>>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    G: FnMut(f64, &[f64; N]) -> f64,
{
    let mut prev: Option<f64> = None;
    let g0 = g(t0, &y0);
    if g0 != 0.0 {
        prev = Some(g0);
    }
    let mut hit = None;
    let tol = cfg.event_tol;
    drive(f, t0, y0, t_max, cfg, |seg| {
        let g1 = g(seg.t1(), &seg.end());
        let g_prev = match prev {
            Some(v) => v,
            None => {
                prev = if g1 != 0.0 { Some(g1) } else { None };
                return Ok(Flow::Continue);
            }
        };
        let crossed = (g_prev < 0.0 && g1 >= 0.0 && direction >= 0) || (g_prev > 0.0 && g1 <= 0.0 && direction <= 0);
        if crossed {
            let (mut a, mut b) = (seg.t0, seg.t1());
            let (mut ga, mut gb) = (g_prev, g1);
            let mut side = 0;
            // Illinois false position on the dense output.
            for _ in 0..200 {
                if b - a <= tol {
                    break;
                }
                let mut m = b - gb * (b - a) / (gb - ga);
                if !(m > a && m < b) {
                    m = 0.5 * (a + b);
                }
                let gm = g(m, &seg.eval(m));
                if gm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if (gm < 0.0) == (ga < 0.0) {
                    a = m;
                    ga = gm;
                    if side == -1 {
                        gb *= 0.5;
                    }
                    side = -1;
                } else {
                    b = m;
                    gb = gm;
                    if side == 1 {
                        ga *= 0.5;
                    }
                    side = 1;
                }
            }
            let te = 0.5 * (a + b);
            hit = Some(EventHit { t: te, y: seg.eval(te) });
            return Ok(Flow::Stop);
        }
        if g1 != 0.0 {
            prev = Some(g1);
        }
        Ok(Flow::Continue)
    })?;
    Ok(hit)
}

/// One evaluation of the displacement map at radius `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisplacementSample {
    pub z: f64,
    pub eps: f64,
    /// `r(2π) - z` with the polar angle increasing; this is the quantity
    /// expanded by the averaged functions.
    pub value: f64,
    /// First return along the flow minus `z`.
    pub flow_value: f64,
    /// Difference from a rerun with tolerances divided by ten.
    pub error: f64,
    /// Sign of the angular velocity at the start point.
    pub rotation: i32,
}

/// `r(±2π) - z` from `dr/dθ = ṙ/θ̇` in the rotating frame. `rot` is the
/// unperturbed angular velocity sign and `pert(y)` returns the full
/// perturbation term of the field (already multiplied by `ε`).
fn polar_return<P>(rot: f64, pert: &P, z: f64, forward: bool, cfg: &IntegratorConfig) -> Result<f64>
where
    P: Fn([f64; 2]) -> [f64; 2],
{
    let sgn = if forward { 1.0 } else { -1.0 };
    let mut stalled = false;
    let rhs = |phi: f64, u: &[f64; 1]| {
        let th = sgn * phi;
        let r = z + u[0];
        let (s, c) = (libm::sin(th), libm::cos(th));
        let y = [r * c, r * s];
        let [p, q] = pert(y);
        let rdot = c * p + s * q;
        let thdot = rot + (c * q - s * p) / r;
        [sgn * rdot / thdot]
    };
    let check = |phi: f64, u: &[f64; 1]| -> f64 {
        let th = sgn * phi;
        let r = z + u[0];
        let (s, c) = (libm::sin(th), libm::cos(th));
        let [p, q] = pert([r * c, r * s]);
        rot * (rot + (c * q - s * p) / r)
    };
    let traj = drive(rhs, 0.0, [0.0], 2.0 * core::f64::consts::PI, cfg, |seg| {
        if check(seg.t1(), &seg.end()) <= 0.0 || z + seg.end()[0] <= 0.0 {
            stalled = true;
            return Ok(Flow::Stop);
        }
        Ok(Flow::Continue)
    })?;
    if stalled {
        return Err(Error::numeric(
            "angular velocity changes sign: no return to the section",
        ));
    }
    Ok(traj.y_end[0])
}

/// Displacement of a planar field `ẏ = rot·(y₂, -y₁)·(-1) + pert(y)`, i.e.
/// unperturbed rotation with angular velocity `rot` plus `pert`.
pub fn displacement_of_field<P>(
    rot: i32,
    pert: P,
    z: f64,
    eps: f64,
    cfg: &IntegratorConfig,
) -> Result<DisplacementSample>
where
    P: Fn([f64; 2]) -> [f64; 2],
{
    if z.is_nan() || z <= 0.0 {
        return Err(Error::usage("displacement needs z > 0"));
    }
    let rotf = rot as f64;
    let [_, q0] = pert([z, 0.0]);
    let thdot0 = rotf + q0 / z;
    let rotation = if thdot0 > 0.0 {
        1
    } else if thdot0 < 0.0 {
        -1
    } else {
        0
    };
    if rotation == 0 {
        return Err(Error::numeric("angular velocity vanishes at the start point"));
    }
    let fine = cfg.tightened(10.0);
    let coarse_up = polar_return(rotf, &pert, z, true, cfg)?;
    let value = polar_return(rotf, &pert, z, true, &fine)?;
    let flow_value = if rotation > 0 {
        value
    } else {
        polar_return(rotf, &pert, z, false, &fine)?
    };
    Ok(DisplacementSample {
        z,
        eps,
        value,
        flow_value,
        error: (value - coarse_up).abs(),
        rotation,
    })
}

/// Displacement map of a perturbed oscillator at fixed parameters.
pub fn displacement_numeric(
    sys: &PerturbedOscillator,
    params: &[f64],
    z: f64,
    eps: f64,
    cfg: &IntegratorConfig,
) -> Result<DisplacementSample> {
    let rot = sys.orientation().thetadot();
    displacement_of_field(rot, |y| sys.eval_perturbation(params, y, eps), z, eps, cfg)
}

/// Flow-direction displacement from a Cartesian integration in time with a
/// section event on `{y₂ = 0, y₁ > 0}`; an independent cross-check of
/// [`displacement_numeric`].
pub fn displacement_cartesian<F>(field: F, z: f64, cfg: &IntegratorConfig) -> Result<f64>
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    let v0 = field([z, 0.0]);
    let dir = if v0[1] > 0.0 {
        1
    } else if v0[1] < 0.0 {
        -1
    } else {
        0
    };
    if dir == 0 {
        return Err(Error::numeric("flow is tangent to the section at the start point"));
    }
    let rhs = |_t: f64, y: &[f64; 2]| field(*y);
    // Crossing in the flow direction with y1 > 0; the half-way crossing
    // has y1 < 0 and the opposite direction, so it is skipped.
    let g = |_t: f64, y: &[f64; 2]| {
        if y[0] > 0.0 {
            y[1]
        } else {
            -(dir as f64) * (1.0 + y[1].abs())
        }
    };
    let hit = integrate_to_event(rhs, 0.0, [z, 0.0], cfg.max_time, g, dir, cfg)?
        .ok_or_else(|| Error::numeric("no return to the section within max_time"))?;
    Ok(libm::hypot(hit.y[0], hit.y[1]) - z)
}

/// A periodic orbit located by a sign change of the displacement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitCycle {
    pub z: f64,
    /// Isolating bracket; `d` has opposite signs at its ends.
    pub lo: f64,
    pub hi: f64,
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleSearch {
    pub cycles: Vec<LimitCycle>,
    /// Grid brackets where `|d|` has a small local minimum without a sign
    /// change: possible tangential cycles.
    pub suspects: Vec<(f64, f64)>,
    /// `(z, d(z), error)` on the grid.
    pub scan: Vec<(f64, f64, f64)>,
    /// `d` vanished to within its error everywhere (a center-like case).
    pub degenerate: bool,
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Refines sign changes of a scanned displacement by bisection.
pub fn cycles_from_scan<D>(scan: Vec<(f64, f64, f64)>, mut d: D, z_tol: f64) -> Result<CycleSearch>
where
    D: FnMut(f64) -> Result<DisplacementSample>,
{
    let max_abs = scan.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let max_err = scan.iter().map(|s| s.2).fold(0.0, f64::max);
    let degenerate = max_abs <= 10.0 * max_err.max(1e-300) || max_abs == 0.0;
    let mut cycles = Vec::new();
    let mut suspects = Vec::new();
    if degenerate {
        return Ok(CycleSearch {
            cycles,
            suspects,
            scan,
            degenerate,
        });
    }
    for w in scan.windows(2) {
        let ((mut a, mut da, _), (mut b, db, _)) = (w[0], w[1]);
        if da == 0.0 {
            cycles.push(LimitCycle {
                z: a,
                lo: a,
                hi: a,
                error_bound: 0.0,
            });
            continue;
        }
        if (da < 0.0) == (db < 0.0) || db == 0.0 {
            continue;
        }
        while b - a > z_tol {
            let m = 0.5 * (a + b);
            let dm = d(m)?.value;
            if dm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if (dm < 0.0) == (da < 0.0) {
                a = m;
                da = dm;
            } else {
                b = m;
            }
        }
        cycles.push(LimitCycle {
            z: 0.5 * (a + b),
            lo: a,
            hi: b,
            error_bound: 0.5 * (b - a),
        });
    }
    for w in scan.windows(3) {
        let (l, m, r) = (w[0], w[1], w[2]);
        let same = (l.1 < 0.0) == (m.1 < 0.0) && (m.1 < 0.0) == (r.1 < 0.0);
        if same && m.1.abs() < l.1.abs() && m.1.abs() < r.1.abs() && m.1.abs() < 1e-2 * max_abs {
            suspects.push((l.0, r.0));
        }
    }
    Ok(CycleSearch {
        cycles,
        suspects,
        scan,
        degenerate,
    })
}

/// Scans `d` on a grid over `[z_min, z_max]` and refines every sign change.
pub fn find_limit_cycles<D>(mut d: D, z_min: f64, z_max: f64, grid: usize, z_tol: f64) -> Result<CycleSearch>
where
    D: FnMut(f64) -> Result<DisplacementSample>,
{
    if grid < 2 || !(z_min > 0.0 && z_max > z_min) {
        return Err(Error::usage(
            "cycle search needs 0 < z_min < z_max and at least two grid points",
        ));
    }
    let mut scan = Vec::with_capacity(grid);
    for z in linspace(z_min, z_max, grid) {
        let s = d(z)?;
        scan.push((z, s.value, s.error));
    }
    cycles_from_scan(scan, d, z_tol)
}

/// Largest `|D(x(t)) - D(x0)|` along the dense output on `[0, t_end]`.
pub fn casimir_drift<F, D>(field: F, casimir: D, x0: [f64; 3], t_end: f64, cfg: &IntegratorConfig) -> Result<f64>
where
    F: FnMut(f64, &[f64; 3]) -> [f64; 3],
    D: Fn(&[f64; 3]) -> f64,
{
    let d0 = casimir(&x0);
    let mut worst: f64 = 0.0;
    drive(field, 0.0, x0, t_end, cfg, |seg| {
        for k in 1..=4 {
            let t = seg.t0 + seg.h * k as f64 / 4.0;
            worst = worst.max((casimir(&seg.eval(t)) - d0).abs());
        }
        Ok(Flow::Continue)
    })?;
    Ok(worst)
}

// Coefficients of the 8(5,3) Dormand-Prince pair with its dense output,
// kept digit for digit as published.
const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

// Dense output rows: weights of k1, k6..k12, then f(t+h), k14, k15, k16.
const D4: [f64; 12] = [
    -0.84289382761090128651353491142E+01,
    0.56671495351937776962531783590E+00,
    -0.30689499459498916912797304727E+01,
    0.23846676565120698287728149680E+01,
    0.21170345824450282767155149946E+01,
    -0.87139158377797299206789907490E+00,
    0.22404374302607882758541771650E+01,
    0.63157877876946881815570249290E+00,
    -0.88990336451333310820698117400E-01,
    0.18148505520854727256656404962E+02,
    -0.91946323924783554000451984436E+01,
    -0.44360363875948939664310572000E+01,
];
const D5: [f64; 12] = [
    0.10427508642579134603413151009E+02,
    0.24228349177525818288430175319E+03,
    0.16520045171727028198505394887E+03,
    -0.37454675472269020279518312152E+03,
    -0.22113666853125306036270938578E+02,
    0.77334326684722638389603898808E+01,
    -0.30674084731089398182061213626E+02,
    -0.93321305264302278729567221706E+01,
    0.15697238121770843886131091075E+02,
    -0.31139403219565177677282850411E+02,
    -0.93529243588444783865713862664E+01,
    0.35816841486394083752465898540E+02,
];
const D6: [f64; 12] = [
    0.19985053242002433820987653617E+02,
    -0.38703730874935176555105901742E+03,
    -0.18917813819516756882830838328E+03,
    0.52780815920542364900561016686E+03,
    -0.11573902539959630126141871134E+02,
    0.68812326946963000169666922661E+01,
    -0.10006050966910838403183860980E+01,
    0.77771377980534432092869265740E+00,
    -0.27782057523535084065932004339E+01,
    -0.60196695231264120758267380846E+02,
    0.84320405506677161018159903784E+02,
    0.11992291136182789328035130030E+02,
];
const D7: [f64; 12] = [
    -0.25693933462703749003312586129E+02,
    -0.15418974869023643374053993627E+03,
    -0.23152937917604549567536039109E+03,
    0.35763911791061412378285349910E+03,
    0.93405324183624310003907691704E+02,
    -0.37458323136451633156875139351E+02,
    0.10409964950896230045147246184E+03,
    0.29840293426660503123344363579E+02,
    -0.43533456590011143754432175058E+02,
    0.96324553959188282948394950600E+02,
    -0.39177261675615439165231486172E+02,
    -0.14972683625798562581422125276E+03,
];
