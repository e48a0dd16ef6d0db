//! Periodograms of 2D point sets on the integer frequency grid
//! `[-res/2, res/2)^2`.

use crate::pgm;

/// Power spectrum samples on a square integer frequency grid.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    res: usize,
    values: Vec<f64>,
}

impl SpectrumGrid {
    pub fn res(&self) -> usize {
        self.res
    }

    /// Power at integer frequency `(fx, fy)`, each in `[-res/2, res/2)`.
    pub fn value(&self, fx: i32, fy: i32) -> f64 {
        let half = (self.res / 2) as i32;
        debug_assert!(fx >= -half && fx < half && fy >= -half && fy < half);
        self.values[(fy + half) as usize * self.res + (fx + half) as usize]
    }

    /// Row-major samples, `fy` then `fx`, most negative first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Log-mapped grayscale rendering; the DC sample can be excluded
    /// from the brightness scale (it dwarfs everything else).
    pub fn to_pgm(&self, exclude_dc: bool) -> Vec<u8> {
        let half = self.res / 2;
        let dc = half * self.res + half;
        let max = self
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| !(exclude_dc && i == dc))
            .map(|(_, &v)| v)
            .fold(0.0f64, f64::max);
        let scale = if max > 0.0 {
            255.0 / (1.0 + max).ln()
        } else {
            0.0
        };
        let pixels: Vec<u8> = self
            .values
            .iter()
            .map(|&v| (((1.0 + v).ln() * scale).min(255.0)) as u8)
            .collect();
        pgm::write_p5(self.res, self.res, &pixels)
    }
}

/// `P(f) = |sum_n exp(-2 pi i f . x_n)|^2 / N` for every grid frequency.
///
/// Per point, the two per-axis phase tables are outer-multiplied into the
/// accumulator, which keeps the cost at `O(N res^2)` multiplies instead
/// of `O(N res^2)` trig calls.
pub fn periodogram(points: &[[f64; 2]], res: usize) -> SpectrumGrid {
    assert!(res >= 2 && res % 2 == 0, "resolution must be even");
    assert!(!points.is_empty());
    let half = (res / 2) as i32;
    let mut re = vec![0.0f64; res * res];
    let mut im = vec![0.0f64; res * res];
    let mut tx = vec![(0.0f64, 0.0f64); res];
    let mut ty = vec![(0.0f64, 0.0f64); res];
    for p in points {
        for (k, f) in (-half..half).enumerate() {
            let ax = -std::f64::consts::TAU * f as f64 * p[0];
            let ay = -std::f64::consts::TAU * f as f64 * p[1];
            tx[k] = (ax.cos(), ax.sin());
            ty[k] = (ay.cos(), ay.sin());
        }
        for ky in 0..res {
            let (yr, yi) = ty[ky];
            let row_re = &mut re[ky * res..(ky + 1) * res];
            let row_im = &mut im[ky * res..(ky + 1) * res];
            for kx in 0..res {
                let (xr, xi) = tx[kx];
                row_re[kx] += xr * yr - xi * yi;
                row_im[kx] += xr * yi + xi * yr;
            }
        }
    }
    let n = points.len() as f64;
    let values = re
        .into_iter()
        .zip(im)
        .map(|(r, i)| (r * r + i * i) / n)
        .collect();
    SpectrumGrid { res, values }
}

/// Average the periodograms of `count` generated point sets.
///
/// Realizations are combined over a fixed binary split tree, so the
/// floating result is identical no matter how the work is scheduled.
pub fn average_periodogram<F>(res: usize, count: usize, make: F) -> SpectrumGrid
where
    F: Fn(u64) -> Vec<[f64; 2]> + Sync,
{
    assert!(count > 0);
    fn sum_range<F>(res: usize, lo: u64, hi: u64, make: &F) -> Vec<f64>
    where
        F: Fn(u64) -> Vec<[f64; 2]> + Sync,
    {
        if hi - lo == 1 {
            return periodogram(&make(lo), res).values;
        }
        let mid = lo + (hi - lo) / 2;
        let (mut left, right) = rayon::join(
            || sum_range(res, lo, mid, make),
            || sum_range(res, mid, hi, make),
        );
        for (a, b) in left.iter_mut().zip(right) {
            *a += b;
        }
        left
    }
    let mut values = sum_range(res, 0, count as u64, &make);
    for v in &mut values {
        *v /= count as f64;
    }
    SpectrumGrid { res, values }
}

/// Power averaged over annuli of integer radius, DC excluded.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    /// Mean power per radius bucket (0 where the bucket is empty).
    pub mean: Vec<f64>,
    /// Grid cells per bucket.
    pub count: Vec<usize>,
    half: usize,
}

impl RadialProfile {
    /// Buckets of annuli fully inside the grid, radii `1..=res/2`.
    pub fn inner(&self) -> &[f64] {
        &self.mean[1..=self.half]
    }
}

pub fn radial_average(grid: &SpectrumGrid) -> RadialProfile {
    let half = (grid.res / 2) as i32;
    let buckets = ((half as f64) * std::f64::consts::SQRT_2).round() as usize + 1;
    let mut sum = vec![0.0f64; buckets];
    let mut count = vec![0usize; buckets];
    for fy in -half..half {
        for fx in -half..half {
            if fx == 0 && fy == 0 {
                continue;
            }
            let r = ((fx * fx + fy * fy) as f64).sqrt().round() as usize;
            sum[r] += grid.value(fx, fy);
            count[r] += 1;
        }
    }
    let mean = sum
        .iter()
        .zip(&count)
        .map(|(&s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
        .collect();
    RadialProfile {
        mean,
        count,
        half: half as usize,
    }
}
