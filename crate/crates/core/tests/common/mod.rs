//! Test-only oracles, written against closed forms and plain arrays so they
//! share no code path with the library routines they check.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type M2 = [[Complex64; 2]; 2];

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(-i a n̂·σ) = cos a · I - i sin a · n̂·σ` for a unit vector `n`.
pub fn su2_exp(a: f64, n: [f64; 3]) -> M2 {
    let (s, co) = a.sin_cos();
    let mi = c(0.0, -s);
    // n̂·σ = [[nz, nx - i ny], [nx + i ny, -nz]]
    [
        [c(co, 0.0) + mi * n[2], mi * c(n[0], -n[1])],
        [mi * c(n[0], n[1]), c(co, 0.0) - mi * n[2]],
    ]
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Field leg `exp(-i (area/2)(cos β σx + sin β σy))`.
pub fn field_leg(beta: f64, area: f64) -> M2 {
    su2_exp(area / 2.0, [beta.cos(), beta.sin(), 0.0])
}

/// `cos Δφ + i sin Δφ (m̂·σ)`, i.e. `exp(-i (-Δφ) m̂·σ)`.
pub fn rotation(theta: f64, phi: f64, dphi: f64) -> M2 {
    let m = [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ];
    su2_exp(-dphi, m)
}

/// Three-leg product computed from the leg formulas alone.
pub fn orange_slice(theta: f64, phi: f64, dphi: f64) -> M2 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let l1 = field_leg(phi - half_pi, theta);
    let l2 = field_leg(phi + dphi + half_pi, pi);
    let l3 = field_leg(phi - half_pi, pi - theta);
    mul2(&l3, &mul2(&l2, &l1))
}

/// `sqrt(1 - |tr(A†B)|/2)` via `‖A - e^{iα}B‖_F² / 4`.
pub fn m2_distance(a: &M2, b: &M2) -> f64 {
    let mut tr = c(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            tr += a[i][j].conj() * b[i][j];
        }
    }
    let align = if tr.norm() > 0.0 {
        tr.conj() / tr.norm()
    } else {
        c(1.0, 0.0)
    };
    let mut sq = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            sq += (a[i][j] - b[i][j] * align).norm_sqr();
        }
    }
    (sq / 4.0).sqrt()
}

pub fn m2_max_diff(a: &M2, b: &M2) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// Linear entropy of a two-qubit pure state `(c00, c01, c10, c11)` via
/// `1 - tr ρ_A² = 2 |c00 c11 - c01 c10|²` (half the squared concurrence).
pub fn linear_entropy_2q(v: &[Complex64; 4]) -> f64 {
    2.0 * (v[0] * v[3] - v[1] * v[2]).norm_sqr()
}

pub fn haar_qubit<R: Rng>(rng: &mut R) -> [Complex64; 2] {
    let mut g = || rng.sample::<f64, _>(StandardNormal);
    let a = c(g(), g());
    let b = c(g(), g());
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}

/// Monte Carlo estimate of the mean linear entropy produced by a 4×4
/// row-major unitary on Haar product inputs.
pub fn entangling_power_mc<R: Rng>(u: &[[Complex64; 4]; 4], samples: usize, rng: &mut R) -> f64 {
    let mut total = 0.0;
    for _ in 0..samples {
        let a = haar_qubit(rng);
        let b = haar_qubit(rng);
        let input = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        let mut out = [c(0.0, 0.0); 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i] += u[i][j] * input[j];
            }
        }
        total += linear_entropy_2q(&out);
    }
    total / samples as f64
}

/// Auxiliary-`|0⟩` block written out from its closed form.
pub fn dsc_u0(theta: f64) -> [[f64; 4]; 4] {
    let (s, co) = theta.sin_cos();
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, co, -s, 0.0],
        [0.0, -s, -co, 0.0],
        [0.0, 0.0, 0.0, -1.0],
    ]
}

pub fn dsc_u1(theta: f64) -> [[f64; 4]; 4] {
    let (s, co) = theta.sin_cos();
    [
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -co, -s, 0.0],
        [0.0, -s, co, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}
