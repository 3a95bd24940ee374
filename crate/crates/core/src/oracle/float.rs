//! Floating samplers on the hyperboloid, on spheres, and on Euclidean
//! circles.

use std::f64::consts::PI;

use serde::Serialize;

use super::TrialRng;

type V3 = [f64; 3];

/// Minkowski form `x1 y1 + x2 y2 - x3 y3`.
fn minkowski(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// Hyperbolic distance between hyperboloid points: `cosh d = -<p, q>`.
pub fn hyperbolic_distance(a: &V3, b: &V3) -> f64 {
    (-minkowski(a, b)).max(1.0).acosh()
}

/// Point at polar coordinates `(r, theta)` around the image of the origin
/// under a boost of rapidity `rho` along `x` followed by a rotation `phi`.
fn hyperboloid_point(rho: f64, phi: f64, r: f64, theta: f64) -> V3 {
    let local = [r.sinh() * theta.cos(), r.sinh() * theta.sin(), r.cosh()];
    let boosted = [
        local[0] * rho.cosh() + local[2] * rho.sinh(),
        local[1],
        local[0] * rho.sinh() + local[2] * rho.cosh(),
    ];
    [
        boosted[0] * phi.cos() - boosted[1] * phi.sin(),
        boosted[0] * phi.sin() + boosted[1] * phi.cos(),
        boosted[2],
    ]
}

fn distance_matrix<P>(points: &[P; 4], dist: impl Fn(&P, &P) -> f64) -> [[f64; 4]; 4] {
    let mut d = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                d[i][j] = dist(&points[i], &points[j]);
            }
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperbolicKind {
    Circle,
    Lambert,
    Generic,
}

/// Lambert quadrilateral `AOBF` with right angles at `A`, `O` and `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambertLengths {
    pub oa: f64,
    pub af: f64,
    pub ob: f64,
    pub bf: f64,
    pub of: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicSample {
    Circle { distances: [[f64; 4]; 4] },
    Lambert(LambertLengths),
    Generic { distances: [[f64; 4]; 4] },
}

/// Lambert quadrilateral in the hyperboloid model. With
/// `O = (0, 0, 1)`, `A = (sinh a, 0, cosh a)`, `B = (0, sinh b, cosh b)` the
/// fourth vertex is `F = z (tanh a, tanh b, 1)`, `z^2 = 1/(1 - tanh^2 a -
/// tanh^2 b)`: in the Klein model the sides `AF` and `BF` are the chords
/// perpendicular to the axes at `A` and `B`.
pub fn lambert_quadrilateral(a: f64, b: f64) -> Option<LambertLengths> {
    let (ta, tb) = (a.tanh(), b.tanh());
    let rest = 1.0 - ta * ta - tb * tb;
    if rest <= 0.0 {
        return None;
    }
    let z = 1.0 / rest.sqrt();
    let o = [0.0, 0.0, 1.0];
    let pa = [a.sinh(), 0.0, a.cosh()];
    let pb = [0.0, b.sinh(), b.cosh()];
    let f = [z * ta, z * tb, z];
    Some(LambertLengths {
        oa: hyperbolic_distance(&o, &pa),
        af: hyperbolic_distance(&pa, &f),
        ob: hyperbolic_distance(&o, &pb),
        bf: hyperbolic_distance(&pb, &f),
        of: hyperbolic_distance(&o, &f),
    })
}

pub fn hyperbolic_sampler(kind: HyperbolicKind, rng: &mut TrialRng) -> HyperbolicSample {
    match kind {
        HyperbolicKind::Circle => {
            let (rho, phi) = (rng.uniform(0.0, 1.5), rng.uniform(0.0, 2.0 * PI));
            let r = rng.uniform(0.2, 1.5);
            let pts = [0; 4].map(|_| hyperboloid_point(rho, phi, r, rng.uniform(0.0, 2.0 * PI)));
            HyperbolicSample::Circle {
                distances: distance_matrix(&pts, hyperbolic_distance),
            }
        }
        HyperbolicKind::Lambert => loop {
            if let Some(l) = lambert_quadrilateral(rng.uniform(0.1, 1.2), rng.uniform(0.1, 1.2)) {
                break HyperbolicSample::Lambert(l);
            }
        },
        HyperbolicKind::Generic => {
            let pts = [0; 4].map(|_| {
                hyperboloid_point(
                    rng.uniform(0.0, 1.5),
                    rng.uniform(0.0, 2.0 * PI),
                    0.0,
                    0.0,
                )
            });
            HyperbolicSample::Generic {
                distances: distance_matrix(&pts, hyperbolic_distance),
            }
        }
    }
}

fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &V3, b: &V3) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(a: V3) -> V3 {
    let n = dot(&a, &a).sqrt();
    a.map(|x| x / n)
}

/// Great-circle distance on the sphere of radius `rho` between unit vectors.
pub fn spherical_distance(a: &V3, b: &V3, rho: f64) -> f64 {
    let c = cross(a, b);
    rho * dot(&c, &c).sqrt().atan2(dot(a, b))
}

fn random_unit(rng: &mut TrialRng) -> V3 {
    let z = rng.uniform(-1.0, 1.0);
    let phi = rng.uniform(0.0, 2.0 * PI);
    let s = (1.0 - z * z).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphericalKind {
    GreatCircle,
    Random,
}

/// Pairwise distances of four points on the sphere of radius `rho`.
pub fn spherical_sampler(kind: SphericalKind, rho: f64, rng: &mut TrialRng) -> [[f64; 4]; 4] {
    let pts = match kind {
        SphericalKind::GreatCircle => {
            let u = random_unit(rng);
            let v = normalize(cross(&u, &random_unit(rng)));
            [0; 4].map(|_| {
                let t = rng.uniform(0.0, 2.0 * PI);
                [0, 1, 2].map(|i| t.cos() * u[i] + t.sin() * v[i])
            })
        }
        SphericalKind::Random => [0; 4].map(|_| random_unit(rng)),
    };
    distance_matrix(&pts, |a, b| spherical_distance(a, b, rho))
}

/// Sides `a = P1P2`, `b = P2P3`, `c = P3P4`, `d = P4P1` and diagonals
/// `e = P1P3`, `f = P2P4` of a quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrilateral {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

/// Convex quadrilateral inscribed in a circle of random radius, with
/// consecutive vertices at least `0.05` radians apart.
pub fn cyclic_quadrilateral(rng: &mut TrialRng) -> Quadrilateral {
    let radius = rng.uniform(0.5, 3.0);
    let mut angles = loop {
        let mut t = [0.0; 4].map(|_| rng.uniform(0.0, 2.0 * PI));
        t.sort_by(f64::total_cmp);
        let gaps = [t[1] - t[0], t[2] - t[1], t[3] - t[2], 2.0 * PI - t[3] + t[0]];
        if gaps.iter().all(|&g| g > 0.05) {
            break t;
        }
    };
    angles.rotate_left(rng.below(4));
    let p = angles.map(|t| (radius * t.cos(), radius * t.sin()));
    let dist = |i: usize, j: usize| ((p[i].0 - p[j].0).powi(2) + (p[i].1 - p[j].1).powi(2)).sqrt();
    Quadrilateral {
        a: dist(0, 1),
        b: dist(1, 2),
        c: dist(2, 3),
        d: dist(3, 0),
        e: dist(0, 2),
        f: dist(1, 3),
    }
}
