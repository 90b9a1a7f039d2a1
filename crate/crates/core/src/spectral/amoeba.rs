use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPoly2;
use super::roots::polynomial_roots;
use crate::error::{Error, Result};

/// Rectangle `[u_min, u_max] x [v_min, v_max]` in `(log|z|, log|w|)`,
/// sampled on a `width x height` pixel grid with `phases` values of `arg z`
/// per column.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmoebaWindow {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub width: usize,
    pub height: usize,
    pub phases: usize,
}

impl AmoebaWindow {
    pub fn square(radius: f64, pixels: usize) -> Self {
        AmoebaWindow { u_min: -radius, u_max: radius, v_min: -radius, v_max: radius, width: pixels, height: pixels, phases: 4 * pixels.max(64) }
    }

    fn u(&self, col: usize) -> f64 {
        self.u_min + (col as f64 + 0.5) * (self.u_max - self.u_min) / self.width as f64
    }

    fn v(&self, row: usize) -> f64 {
        self.v_min + (row as f64 + 0.5) * (self.v_max - self.v_min) / self.height as f64
    }
}

/// Pixel classification of the amoeba and its complement.
#[derive(Clone, Debug)]
pub struct AmoebaRaster {
    pub window: AmoebaWindow,
    /// Row-major, row 0 at `v_min`; `true` for pixels inside the amoeba.
    pub inside: Vec<bool>,
    /// Complement component label per pixel, `None` inside the amoeba.
    pub labels: Vec<Option<usize>>,
    /// Whether each complement component touches the window border.
    pub unbounded: Vec<bool>,
    /// Sampled `(log|z|, log|w|)` points on the curve.
    pub points: Vec<(f64, f64)>,
}

impl AmoebaRaster {
    pub fn bounded_components(&self) -> usize {
        self.unbounded.iter().filter(|u| !**u).count()
    }

    /// Pixel counts of the bounded components.
    pub fn bounded_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.unbounded.len()];
        for l in self.labels.iter().flatten() {
            sizes[*l] += 1;
        }
        sizes.into_iter().zip(&self.unbounded).filter(|(_, u)| !**u).map(|(s, _)| s).collect()
    }

    pub fn is_inside(&self, u: f64, v: f64) -> Option<bool> {
        self.pixel(u, v).map(|i| self.inside[i])
    }

    /// Whether `(u, v)` lies in a bounded complement component.
    pub fn in_bounded_component(&self, u: f64, v: f64) -> Option<bool> {
        self.pixel(u, v).map(|i| self.labels[i].is_some_and(|l| !self.unbounded[l]))
    }

    fn pixel(&self, u: f64, v: f64) -> Option<usize> {
        let w = &self.window;
        let c = ((u - w.u_min) / (w.u_max - w.u_min) * w.width as f64).floor();
        let r = ((v - w.v_min) / (w.v_max - w.v_min) * w.height as f64).floor();
        (c >= 0.0 && r >= 0.0 && (c as usize) < w.width && (r as usize) < w.height).then(|| r as usize * w.width + c as usize)
    }

    /// Amoeba in black, bounded holes in colour, the rest white; `v` grows upwards.
    pub fn write_png(&self, path: &Path) -> Result<()> {
        let w = &self.window;
        let mut img = image::RgbImage::new(w.width as u32, w.height as u32);
        for r in 0..w.height {
            for c in 0..w.width {
                let i = r * w.width + c;
                let px = match self.labels[i] {
                    None => [20, 20, 20],
                    Some(l) if !self.unbounded[l] => [200, 60, 60],
                    Some(_) => [255, 255, 255],
                };
                img.put_pixel(c as u32, (w.height - 1 - r) as u32, image::Rgb(px));
            }
        }
        img.save_with_format(path, image::ImageFormat::Png).map_err(|e| Error::Io(std::io::Error::other(e)))
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "log_abs_z,log_abs_w")?;
        for (u, v) in &self.points {
            writeln!(out, "{u},{v}")?;
        }
        Ok(())
    }
}

/// Rasterises the amoeba of `p`.
///
/// For each column `u` and phase `t`, the roots `w` of `P(e^{u + it}, w)` are
/// found. A pixel `(u, v)` lies outside the amoeba exactly when the number of
/// roots with `log|w| < v` does not depend on `t`; complement pixels are then
/// grouped into 4-connected components, and those not touching the border
/// are the bounded ones.
pub fn amoeba_raster(p: &LaurentPoly2, window: AmoebaWindow) -> Result<AmoebaRaster> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("polynomial is zero".into()));
    }
    if window.width == 0 || window.height == 0 || window.phases == 0 || !(window.u_max > window.u_min) || !(window.v_max > window.v_min) {
        return Err(Error::InvalidArgument("empty amoeba window".into()));
    }
    let columns: Vec<(Vec<bool>, Vec<(f64, f64)>)> = (0..window.width)
        .into_par_iter()
        .map(|col| {
            let u = window.u(col);
            let mut lo = vec![usize::MAX; window.height];
            let mut hi = vec![0usize; window.height];
            let mut pts = Vec::new();
            for t in 0..window.phases {
                let z = Complex64::from_polar(u.exp(), 2.0 * PI * t as f64 / window.phases as f64);
                let (_, coeffs) = p.w_coefficients(z);
                let mut logs: Vec<f64> = polynomial_roots(&coeffs).iter().map(|w| w.norm().ln()).collect();
                logs.sort_by(f64::total_cmp);
                for &v in &logs {
                    pts.push((u, v));
                }
                for (row, (l, h)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let n = logs.partition_point(|&x| x < window.v(row));
                    *l = (*l).min(n);
                    *h = (*h).max(n);
                }
            }
            (lo.iter().zip(&hi).map(|(l, h)| l != h).collect(), pts)
        })
        .collect();
    let (w, h) = (window.width, window.height);
    let mut inside = vec![false; w * h];
    let mut points = Vec::new();
    for (col, (mask, pts)) in columns.into_iter().enumerate() {
        for (row, m) in mask.into_iter().enumerate() {
            inside[row * w + col] = m;
        }
        points.extend(pts);
    }
    let (labels, unbounded) = label_components(&inside, w, h);
    Ok(AmoebaRaster { window, inside, labels, unbounded, points })
}

fn label_components(inside: &[bool], w: usize, h: usize) -> (Vec<Option<usize>>, Vec<bool>) {
    let mut labels = vec![None; w * h];
    let mut unbounded = Vec::new();
    for start in 0..w * h {
        if inside[start] || labels[start].is_some() {
            continue;
        }
        let id = unbounded.len();
        let mut touches = false;
        let mut stack = vec![start];
        labels[start] = Some(id);
        while let Some(i) = stack.pop() {
            let (r, c) = (i / w, i % w);
            touches |= r == 0 || c == 0 || r == h - 1 || c == w - 1;
            let mut push = |j: usize| {
                if !inside[j] && labels[j].is_none() {
                    labels[j] = Some(id);
                    stack.push(j);
                }
            };
            if r > 0 {
                push(i - w);
            }
            if r + 1 < h {
                push(i + w);
            }
            if c > 0 {
                push(i - 1);
            }
            if c + 1 < w {
                push(i + 1);
            }
        }
        unbounded.push(touches);
    }
    (labels, unbounded)
}
