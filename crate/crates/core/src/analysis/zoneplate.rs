//! Zone plate test image: a radial chirp whose instantaneous frequency
//! grows past the pixel Nyquist rate, so sampling errors show up as
//! rings of structured aliasing.

use crate::error::Result;
use crate::pgm;
use crate::scramble::{enumerate_pixel_samples, ArtOwenScrambler};
use crate::sobol::{sobol_point, GeneratorMatrix};

/// Chirp value at image coordinates in `[0,1)^2`; the sweep constant
/// scales with the target resolution so the pattern always out-runs the
/// pixel grid near the far corner.
pub fn zoneplate_value(x: f64, y: f64, res: usize) -> f64 {
    let c = 0.25 * std::f64::consts::PI * (res * res) as f64;
    0.5 * (1.0 + (c * (x * x + y * y)).sin())
}

/// Average the chirp over each pixel's samples; pixels containing no
/// samples render as midtone. Row-major, `y * res + x`.
pub fn render_binned(points: &[[f64; 2]], res: usize) -> Vec<f64> {
    let mut sum = vec![0.0f64; res * res];
    let mut count = vec![0u32; res * res];
    for p in points {
        let px = ((p[0] * res as f64) as usize).min(res - 1);
        let py = ((p[1] * res as f64) as usize).min(res - 1);
        sum[py * res + px] += zoneplate_value(p[0], p[1], res);
        count[py * res + px] += 1;
    }
    sum.iter()
        .zip(&count)
        .map(|(&s, &c)| if c == 0 { 0.5 } else { s / c as f64 })
        .collect()
}

/// Same image computed the other way around: ask the inverted scrambler
/// which sample indices land in each pixel and average only those.
pub fn render_enumerated(
    scrambler: &ArtOwenScrambler,
    matrices: &[GeneratorMatrix],
    k: u32,
    n: u64,
) -> Result<Vec<f64>> {
    let res = 1usize << k;
    let mut image = vec![0.5f64; res * res];
    for py in 0..res as u32 {
        for px in 0..res as u32 {
            let indices = enumerate_pixel_samples(scrambler, matrices, px, py, k, n)?;
            if indices.is_empty() {
                continue;
            }
            let mut sum = 0.0;
            for &i in &indices {
                let p = scrambler.scramble_point(&sobol_point(i, matrices));
                let u = p.to_unit();
                sum += zoneplate_value(u[0], u[1], res);
            }
            image[py as usize * res + px as usize] = sum / indices.len() as f64;
        }
    }
    Ok(image)
}

/// Converged per-pixel means via `sub x sub` midpoint quadrature.
pub fn reference_image(res: usize, sub: usize) -> Vec<f64> {
    let mut image = vec![0.0f64; res * res];
    let step = 1.0 / (res * sub) as f64;
    for py in 0..res {
        for px in 0..res {
            let mut sum = 0.0;
            for sy in 0..sub {
                for sx in 0..sub {
                    let x = px as f64 / res as f64 + (sx as f64 + 0.5) * step;
                    let y = py as f64 / res as f64 + (sy as f64 + 0.5) * step;
                    sum += zoneplate_value(x, y, res);
                }
            }
            image[py * res + px] = sum / (sub * sub) as f64;
        }
    }
    image
}

/// Mean squared radial-band bias of `image` against `reference`.
///
/// Pixels are grouped into integer-radius bands around the chirp center
/// (the image corner at the origin); structured aliasing biases whole
/// bands while unstructured error averages out within them.
pub fn ring_metric(image: &[f64], reference: &[f64], res: usize) -> f64 {
    assert_eq!(image.len(), res * res);
    assert_eq!(reference.len(), res * res);
    let buckets = ((res as f64) * std::f64::consts::SQRT_2).ceil() as usize + 1;
    let mut sum = vec![0.0f64; buckets];
    let mut count = vec![0usize; buckets];
    for py in 0..res {
        for px in 0..res {
            let r =
                (((px as f64 + 0.5).powi(2) + (py as f64 + 0.5).powi(2)).sqrt()).round() as usize;
            sum[r] += image[py * res + px] - reference[py * res + px];
            count[r] += 1;
        }
    }
    let mut weighted = 0.0;
    let mut total = 0usize;
    for (s, &c) in sum.iter().zip(&count) {
        if c > 0 {
            let mean = s / c as f64;
            weighted += mean * mean * c as f64;
            total += c;
        }
    }
    weighted / total as f64
}

/// Render a unit-range image as 8-bit PGM.
pub fn to_pgm(image: &[f64], res: usize) -> Vec<u8> {
    assert_eq!(image.len(), res * res);
    let pixels: Vec<u8> = image
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    pgm::write_p5(res, res, &pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::build_tm_grammar;
    use crate::sobol::standard_pair;

    #[test]
    fn chirp_stays_in_unit_range_and_starts_at_midtone() {
        assert!((zoneplate_value(0.0, 0.0, 64) - 0.5).abs() < 1e-12);
        for i in 0..100 {
            for j in 0..100 {
                let v = zoneplate_value(i as f64 / 100.0, j as f64 / 100.0, 64);
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn binning_averages_per_pixel() {
        let pts = [[0.1, 0.1], [0.2, 0.3], [0.9, 0.9]];
        let img = render_binned(&pts, 2);
        let want00 = (zoneplate_value(0.1, 0.1, 2) + zoneplate_value(0.2, 0.3, 2)) / 2.0;
        assert!((img[0] - want00).abs() < 1e-12);
        assert!((img[3] - zoneplate_value(0.9, 0.9, 2)).abs() < 1e-12);
        assert_eq!(img[1], 0.5);
        assert_eq!(img[2], 0.5);
    }

    #[test]
    fn enumerated_image_is_bitwise_equal_to_binned() {
        let g = build_tm_grammar(2).unwrap();
        let s = ArtOwenScrambler::seeded(g, 2, 16, 32, 404).unwrap();
        let mats = standard_pair(32);
        let k = 3u32;
        let n = 1u64 << 10;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let p = s.scramble_point(&sobol_point(i, &mats));
                let u = p.to_unit();
                [u[0], u[1]]
            })
            .collect();
        let binned = render_binned(&pts, 1 << k);
        let enumerated = render_enumerated(&s, &mats, k, n).unwrap();
        assert_eq!(binned, enumerated);
    }

    #[test]
    fn ring_metric_is_zero_on_equal_images_and_sees_planted_rings() {
        let reference = reference_image(16, 4);
        assert_eq!(ring_metric(&reference, &reference, 16), 0.0);
        // bias one whole band and predict the metric exactly
        let mut image = reference.clone();
        let mut banded = 0usize;
        for py in 0..16 {
            for px in 0..16 {
                let r = (((px as f64 + 0.5).powi(2) + (py as f64 + 0.5).powi(2)).sqrt()).round()
                    as usize;
                if r == 5 {
                    image[py * 16 + px] += 0.1;
                    banded += 1;
                }
            }
        }
        let want = 0.1 * 0.1 * banded as f64 / 256.0;
        assert!((ring_metric(&image, &reference, 16) - want).abs() < 1e-12);
        // large perturbations that cancel pairwise inside every band are
        // invisible to the metric (zero base keeps the sums exact)
        let band_of = |px: usize, py: usize| {
            (((px as f64 + 0.5).powi(2) + (py as f64 + 0.5).powi(2)).sqrt()).round() as usize
        };
        let mut band_count = [0usize; 32];
        for py in 0..16 {
            for px in 0..16 {
                band_count[band_of(px, py)] += 1;
            }
        }
        let zeros = vec![0.0f64; 256];
        let mut scattered = zeros.clone();
        let mut seen = [0usize; 32];
        for py in 0..16 {
            for px in 0..16 {
                let r = band_of(px, py);
                let k = seen[r];
                seen[r] += 1;
                if band_count[r] % 2 == 1 && k == band_count[r] - 1 {
                    continue;
                }
                scattered[py * 16 + px] = if k % 2 == 0 { 0.1 } else { -0.1 };
            }
        }
        assert_eq!(ring_metric(&scattered, &zeros, 16), 0.0);
    }

    #[test]
    fn pgm_covers_unit_range() {
        let img = to_pgm(&[0.0, 1.0, 0.5, 0.25], 2);
        assert!(img.starts_with(b"P5\n2 2\n255\n"));
        assert_eq!(&img[img.len() - 4..], &[0, 255, 128, 64]);
    }
}
