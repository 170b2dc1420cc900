//! Shared generators and brute-force oracles for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::PathBuf;

use cuspkit::{CuspShape, Slope, Unimodular};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const BRUTE_FORCE_BOX: i64 = 64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn hex2() -> CuspShape {
    CuspShape::new([2.0, 0.0], [1.0, 3f64.sqrt()])
        .unwrap()
        .with_name("hex2")
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Random shape in general position.
pub fn random_shape(rng: &mut impl Rng) -> CuspShape {
    let phi = rng.gen_range(0.0..2.0 * PI);
    let theta = rng.gen_range(0.25..PI - 0.25);
    let r1 = rng.gen_range(0.5..3.0);
    let r2 = rng.gen_range(0.5..3.0);
    CuspShape::new(
        [r1 * phi.cos(), r1 * phi.sin()],
        [r2 * (phi + theta).cos(), r2 * (phi + theta).sin()],
    )
    .unwrap()
}

/// Random (shape, threshold) whose naive coefficient box fits in
/// `|a|, |b| <= BRUTE_FORCE_BOX`, so the brute force below is complete.
pub fn random_shape_and_threshold(rng: &mut impl Rng, max_threshold: f64) -> (CuspShape, f64) {
    loop {
        let shape = random_shape(rng);
        let threshold = rng.gen_range(0.05..max_threshold);
        let area = shape.area();
        let a_reach = threshold * shape.longitude().norm() / area;
        let b_reach = threshold * shape.meridian().norm() / area;
        if a_reach < BRUTE_FORCE_BOX as f64 && b_reach < BRUTE_FORCE_BOX as f64 {
            return (shape, threshold);
        }
    }
}

/// Naive enumeration over the full box `|a|, |b| <= bound`.
pub fn brute_force_short_slopes(shape: &CuspShape, threshold: f64, bound: i64) -> BTreeSet<Slope> {
    let (m, l) = (shape.meridian(), shape.longitude());
    let mut out = BTreeSet::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if gcd(a, b) != 1 {
                continue;
            }
            let x = a as f64 * m.x + b as f64 * l.x;
            let y = a as f64 * m.y + b as f64 * l.y;
            if x.hypot(y) <= threshold + 1e-12 {
                out.insert(Slope::new(a, b).unwrap());
            }
        }
    }
    out
}

pub fn random_slope(rng: &mut impl Rng, reach: i64) -> Slope {
    loop {
        let a = rng.gen_range(-reach..=reach);
        let b = rng.gen_range(-reach..=reach);
        if let Ok(s) = Slope::new(a, b) {
            return s;
        }
    }
}

/// Product of a few elementary matrices, occasionally orientation reversing.
pub fn random_unimodular(rng: &mut impl Rng) -> Unimodular {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(1..5) {
        let k = rng.gen_range(-3..=3);
        let e = if rng.gen_bool(0.5) {
            [[1, k], [0, 1]]
        } else {
            [[1, 0], [k, 1]]
        };
        m = [
            [
                m[0][0] * e[0][0] + m[0][1] * e[1][0],
                m[0][0] * e[0][1] + m[0][1] * e[1][1],
            ],
            [
                m[1][0] * e[0][0] + m[1][1] * e[1][0],
                m[1][0] * e[0][1] + m[1][1] * e[1][1],
            ],
        ];
    }
    if rng.gen_bool(0.25) {
        m.swap(0, 1);
    }
    Unimodular::new(m).unwrap()
}

/// Random set of distinct slopes with pairwise intersection numbers at most `r`,
/// grown greedily from random candidates.
pub fn random_delta_bounded_set(rng: &mut impl Rng, r: u64, max_len: usize, reach: i64) -> Vec<Slope> {
    let mut set: Vec<Slope> = Vec::new();
    for _ in 0..200 {
        if set.len() >= max_len {
            break;
        }
        let s = random_slope(rng, reach);
        if set.iter().all(|t| *t != s && t.intersection_number(s) <= r) {
            set.push(s);
        }
    }
    set
}
