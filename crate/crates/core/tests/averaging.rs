use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::time::Instant;

use melforge_core::averaging::{
    averaged_functions, bautin_at, bautin_family, Orientation, PerturbedOscillator, BAUTIN_PARAMS,
};
use melforge_core::bifurcate::quadratic_xi;
use melforge_core::numlab::{displacement_numeric, IntegratorConfig};
use melforge_core::poly::{MPoly, VarSet};
use melforge_core::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn yvars() -> VarSet {
    VarSet::new(&["y1", "y2"]).unwrap()
}

/// Random polynomial in `y1, y2` with total degrees in `2..=max_deg`.
fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> MPoly {
    let vars = yvars();
    let mut text = String::from("0");
    for _ in 0..terms {
        let d = rng.gen_range(2..=max_deg);
        let i = rng.gen_range(0..=d);
        let c = Rat::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        text.push_str(&format!(" + ({c})*y1^{i}*y2^{}", d - i));
    }
    MPoly::parse(&text, &vars).unwrap()
}

/// `σ ∫₀^{2π} (cosθ P + sinθ Q)(z cosθ, z sinθ) dθ` by the trapezoidal rule,
/// exact for trigonometric polynomials of degree below the node count.
fn first_order_quadrature(sys: &PerturbedOscillator, z: f64) -> f64 {
    let n = 64;
    let sigma = sys.orientation().thetadot() as f64;
    let mut s = 0.0;
    for k in 0..n {
        let t = TAU * k as f64 / n as f64;
        let y = [z * t.cos(), z * t.sin()];
        let p = sys.p()[0].eval_f64(&y);
        let q = sys.q()[0].eval_f64(&y);
        s += t.cos() * p + t.sin() * q;
    }
    sigma * s * TAU / n as f64
}

fn tight() -> IntegratorConfig {
    IntegratorConfig::with_tolerances(1e-13, 1e-18)
}

#[test]
fn first_order_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..20 {
        let o = if trial % 2 == 0 {
            Orientation::ThetadotPlusOne
        } else {
            Orientation::ThetadotMinusOne
        };
        let p = random_poly(&mut rng, 5, 4);
        let q = random_poly(&mut rng, 5, 4);
        let sys = PerturbedOscillator::new(&yvars(), o, vec![p], vec![q]).unwrap();
        let spec = averaged_functions(&sys, 1).unwrap();
        for z in [0.3, 0.8, 1.7] {
            let want = first_order_quadrature(&sys, z);
            let got = spec.eval_f64(1, &[], z);
            assert!(
                (got - want).abs() < 1e-12 * (1.0 + want.abs()),
                "trial {trial} z {z}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn third_order_matches_the_integrator() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..4 {
        let o = if trial % 2 == 0 {
            Orientation::ThetadotPlusOne
        } else {
            Orientation::ThetadotMinusOne
        };
        let p = random_poly(&mut rng, 3, 3);
        let q = random_poly(&mut rng, 3, 3);
        let sys = PerturbedOscillator::new(&yvars(), o, vec![p], vec![q]).unwrap();
        let spec = averaged_functions(&sys, 3).unwrap();
        for z in [0.5, 1.0] {
            let f: Vec<f64> = (1..=3).map(|i| spec.eval_f64(i, &[], z)).collect();
            // After two terms the residual is eps^3 f3 + O(eps^4).
            let mut r = Vec::new();
            for eps in [2e-3, 1e-3] {
                let d = displacement_numeric(&sys, &[], z, eps, &tight()).unwrap().value;
                r.push((d - eps * f[0] - eps * eps * f[1]) / eps.powi(3));
            }
            let scale = f[2].abs().max(1e-3);
            assert!(
                (r[1] - f[2]).abs() < 0.05 * scale + 2e-2,
                "trial {trial} z {z}: {r:?} vs f3 {}",
                f[2]
            );
        }
    }
}

fn bautin_xi20() -> MPoly {
    quadratic_xi()[0].1.clone()
}

#[test]
fn bautin_first_two_functions() {
    let t = Instant::now();
    let spec = averaged_functions(&bautin_family(), 2).unwrap();
    assert!(t.elapsed().as_secs_f64() < 10.0);
    assert!(spec.f(1).is_zero());
    let vars = spec.vars();
    let want = MPoly::parse(&format!("-1/4*pi*z^3*({})", bautin_xi20()), vars).unwrap();
    assert_eq!(spec.f(2), &want);
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// `A_i = a_{i0} + a_{i1} ε` as the pair of parameters.
type Coeffs = [[Rat; 2]; 5];

fn flatten(a: &Coeffs) -> [Rat; 10] {
    let v: Vec<Rat> = a.iter().flat_map(|c| c.iter().cloned()).collect();
    v.try_into().unwrap()
}

/// A random parameter point satisfying center condition `case`.
fn center_point(case: char, rng: &mut ChaCha8Rng) -> [Rat; 10] {
    let mut a: Coeffs = std::array::from_fn(|_| [random_rat(rng), random_rat(rng)]);
    let (a2, a3, a4, a5, a6) = (0, 1, 2, 3, 4);
    let zero = [Rat::zero(), Rat::zero()];
    match case {
        'a' => {
            a[a4] = zero.clone();
            a[a5] = zero;
        }
        'b' => a[a3] = a[a6].clone(),
        'c' => {
            let mut p = random_rat(rng);
            if p.is_zero() {
                p = Rat::one();
            }
            let q = &(&Rat::from_int(2) * &p) + &p.recip();
            a[a6] = [&p * &a[a2][0], &p * &a[a2][1]];
            a[a3] = [&q * &a[a2][0], &q * &a[a2][1]];
            let five = Rat::from_int(-5);
            a[a4] = [&five * &(&a[a3][0] - &a[a6][0]), &five * &(&a[a3][1] - &a[a6][1])];
            a[a5] = zero;
        }
        'd' => {
            a[a2] = zero.clone();
            a[a5] = zero;
        }
        _ => unreachable!(),
    }
    flatten(&a)
}

#[test]
fn center_points_have_vanishing_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in ['a', 'b', 'c', 'd'] {
        for _ in 0..3 {
            let lam = center_point(case, &mut rng);
            assert!(melforge_core::bifurcate::center_conditions(&lam).contains(&case));
            let spec = averaged_functions(&bautin_at(&lam), 6).unwrap();
            assert_eq!(spec.first_nonzero_order(), None, "case {case}: {lam:?}");
        }
    }
}

#[test]
fn a_generic_point_is_not_a_center() {
    let lam = [1, 0, 2, 0, 0, 0, 1, 0, 0, 0].map(Rat::from_int);
    let spec = averaged_functions(&bautin_at(&lam), 2).unwrap();
    assert_eq!(spec.first_nonzero_order(), Some(2));
}

#[test]
fn specialization_commutes_with_averaging() {
    let lam = [1, -1, 2, 3, -2, 1, 0, 2, 1, -3].map(Rat::from_int);
    let general = averaged_functions(&bautin_family(), 3).unwrap();
    let special = averaged_functions(&bautin_at(&lam), 3).unwrap();
    let point: BTreeMap<String, Rat> = BAUTIN_PARAMS
        .iter()
        .map(|s| s.to_string())
        .zip(lam.iter().cloned())
        .collect();
    let z = special.vars().require("z").unwrap();
    for i in 1..=3 {
        for zz in [Rat::new(1, 2), Rat::from_int(2)] {
            let mut pg = point.clone();
            pg.insert("z".into(), zz.clone());
            pg.insert("pi".into(), Rat::one());
            let a = general.f(i).eval_named(&pg).unwrap();
            let mut ps = BTreeMap::new();
            ps.insert(special.vars().name(z).to_string(), zz);
            ps.insert("pi".into(), Rat::one());
            let b = special.f(i).eval_named(&ps).unwrap();
            assert_eq!(a, b, "f{i}");
        }
    }
}
