use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, RwLock};

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes per panel, for both `x` and `λ` integrals.
pub const NODES_PER_PANEL: usize = 16;

/// Shape of a [`BumpFunction`] on its support `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Profile {
    /// `exp(−1/(1−t²))` in the coordinate `t ∈ (−1, 1)`.
    Bump,
    /// Smooth step up on `[a, lo]`, equal to 1 on `[lo, hi]`, down on `[hi, b]`.
    Plateau { lo: f64, hi: f64 },
}

struct XGrid {
    xs: Vec<f64>,
    /// Quadrature weight times `φ(x)`.
    wphi: Vec<f64>,
}

/// A smooth compactly supported `φ`, optionally multiplied by a polynomial,
/// with its Fourier transform `φ̂(λ) = ∫ φ(x) e^{−iλx} dx`.
pub struct BumpFunction {
    a: f64,
    b: f64,
    profile: Profile,
    poly: Vec<f64>,
    rule: Vec<(f64, f64)>,
    grids: RwLock<Vec<Arc<XGrid>>>,
}

impl std::fmt::Debug for BumpFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BumpFunction")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("profile", &self.profile)
            .field("poly", &self.poly)
            .finish()
    }
}

pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(n).unwrap())
        .as_node_weight_pairs()
        .to_vec()
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let p = (-1.0 / t).exp();
        let q = (-1.0 / (1.0 - t)).exp();
        p / (p + q)
    }
}

impl BumpFunction {
    pub fn bump(a: f64, b: f64) -> Result<Self> {
        Self::build(a, b, Profile::Bump, vec![1.0])
    }

    pub fn plateau(a: f64, lo: f64, hi: f64, b: f64) -> Result<Self> {
        if !(a < lo && lo <= hi && hi < b) {
            return Err(Error::Precondition(format!(
                "plateau needs a < lo ≤ hi < b, got {a}, {lo}, {hi}, {b}"
            )));
        }
        Self::build(a, b, Profile::Plateau { lo, hi }, vec![1.0])
    }

    /// The same profile multiplied by `Σ_k coeffs[k]·x^k`.
    pub fn times_polynomial(&self, coeffs: &[f64]) -> Result<Self> {
        Self::build(self.a, self.b, self.profile.clone(), coeffs.to_vec())
    }

    fn build(a: f64, b: f64, profile: Profile, poly: Vec<f64>) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Precondition(format!("support [{a}, {b}] is empty")));
        }
        Ok(BumpFunction {
            a,
            b,
            profile,
            poly,
            rule: gauss_legendre(NODES_PER_PANEL),
            grids: RwLock::new(Vec::new()),
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.a || x >= self.b {
            return 0.0;
        }
        let shape = match self.profile {
            Profile::Bump => {
                let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
                (-1.0 / (1.0 - t * t)).exp()
            }
            Profile::Plateau { lo, hi } => {
                let up = if lo > self.a {
                    smooth_step((x - self.a) / (lo - self.a))
                } else {
                    1.0
                };
                let down = if hi < self.b {
                    smooth_step((self.b - x) / (self.b - hi))
                } else {
                    1.0
                };
                up * down
            }
        };
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
        shape * p
    }

    /// Narrowest feature the `x` quadrature has to resolve.
    fn feature_width(&self) -> f64 {
        match self.profile {
            Profile::Bump => self.b - self.a,
            Profile::Plateau { lo, hi } => (lo - self.a).min(self.b - hi).min(self.b - self.a),
        }
    }

    fn grid(&self, level: usize) -> Arc<XGrid> {
        if let Some(g) = self.grids.read().unwrap().get(level) {
            return g.clone();
        }
        let mut grids = self.grids.write().unwrap();
        let base = (32.0 * (self.b - self.a) / self.feature_width())
            .ceil()
            .max(32.0) as usize;
        while grids.len() <= level {
            let panels = base << grids.len();
            let h = (self.b - self.a) / panels as f64;
            let mut xs = Vec::with_capacity(panels * self.rule.len());
            let mut wphi = Vec::with_capacity(xs.capacity());
            for p in 0..panels {
                let x0 = self.a + p as f64 * h;
                for &(t, w) in &self.rule {
                    let x = x0 + 0.5 * h * (t + 1.0);
                    xs.push(x);
                    wphi.push(0.5 * h * w * self.eval(x));
                }
            }
            grids.push(Arc::new(XGrid { xs, wphi }));
        }
        grids[level].clone()
    }

    /// Grid level whose panels span at most one oscillation of `e^{−iλx}`.
    fn level_for(&self, lambda: f64) -> usize {
        let base = (32.0 * (self.b - self.a) / self.feature_width())
            .ceil()
            .max(32.0);
        let need = (self.b - self.a) * lambda.abs() / (2.0 * std::f64::consts::PI);
        let mut level = 0;
        while base * 2f64.powi(level as i32) < need {
            level += 1;
        }
        level
    }

    /// `φ̂(λ)` by composite Gauss–Legendre quadrature.
    pub fn hat(&self, lambda: f64) -> Complex64 {
        let g = self.grid(self.level_for(lambda));
        hat_on(&g, lambda)
    }

    /// `φ̂` at several `λ` sharing one grid fine enough for all of them.
    pub fn hat_many(&self, lambdas: &[f64]) -> Vec<Complex64> {
        let top = lambdas.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        let g = self.grid(self.level_for(top));
        lambdas.iter().map(|&l| hat_on(&g, l)).collect()
    }

    /// `φ̂(λ)` with the grid refined once more, for convergence checks.
    pub fn hat_refined(&self, lambda: f64) -> Complex64 {
        hat_on(&self.grid(self.level_for(lambda) + 1), lambda)
    }
}

/// `φ̂` on the nodes `λ₀ + o_j` of successive panels, reusing the factors
/// `w_k φ(x_k) e^{−i o_j x_k}` between panels.
pub(crate) struct PanelHats<'a> {
    phi: &'a BumpFunction,
    offsets: Vec<f64>,
    width: f64,
    factors: HashMap<usize, (Arc<XGrid>, Vec<Complex64>)>,
}

impl<'a> PanelHats<'a> {
    pub(crate) fn new(phi: &'a BumpFunction, offsets: Vec<f64>, width: f64) -> Self {
        PanelHats {
            phi,
            offsets,
            width,
            factors: HashMap::new(),
        }
    }

    /// `φ̂(λ₀ + o_j)` for every offset.
    pub(crate) fn at(&mut self, lambda0: f64) -> Vec<Complex64> {
        let top = lambda0.abs().max((lambda0 + self.width).abs());
        let level = self.phi.level_for(top);
        let (grid, factors) = self.factors.entry(level).or_insert_with(|| {
            let grid = self.phi.grid(level);
            let mut f = Vec::with_capacity(self.offsets.len() * grid.xs.len());
            for o in &self.offsets {
                for (x, w) in grid.xs.iter().zip(&grid.wphi) {
                    f.push(Complex64::from_polar(*w, -o * x));
                }
            }
            (grid, f)
        });
        let n = grid.xs.len();
        let base: Vec<Complex64> = grid
            .xs
            .iter()
            .map(|x| {
                let (s, c) = (lambda0 * x).sin_cos();
                Complex64::new(c, -s)
            })
            .collect();
        (0..self.offsets.len())
            .map(|j| {
                let row = &factors[j * n..(j + 1) * n];
                let (mut re, mut im) = (0.0, 0.0);
                for (b, f) in base.iter().zip(row) {
                    re += b.re * f.re - b.im * f.im;
                    im += b.re * f.im + b.im * f.re;
                }
                Complex64::new(re, im)
            })
            .collect()
    }
}

fn hat_on(g: &XGrid, lambda: f64) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (x, w) in g.xs.iter().zip(&g.wphi) {
        if *w != 0.0 {
            let (s, c) = (lambda * x).sin_cos();
            re += w * c;
            im -= w * s;
        }
    }
    Complex64::new(re, im)
}
