//! Distance-based quality measures on the unit torus.

/// Squared toroidal distance between two points of `[0,1)^2`.
#[inline]
pub fn toroidal_dist_sq(a: [f64; 2], b: [f64; 2]) -> f64 {
    let mut dx = (a[0] - b[0]).abs();
    let mut dy = (a[1] - b[1]).abs();
    if dx > 0.5 {
        dx = 1.0 - dx;
    }
    if dy > 0.5 {
        dy = 1.0 - dy;
    }
    dx * dx + dy * dy
}

fn min_dist_sq_brute(points: &[[f64; 2]]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(toroidal_dist_sq(points[i], points[j]));
        }
    }
    best
}

/// Smallest pairwise toroidal distance.
///
/// Points are bucketed on a wrapping grid and compared against their
/// 3x3 neighborhoods; that covers every pair closer than a cell width,
/// so the bucketed minimum is exact whenever it is below one cell. The
/// rare remaining case falls back to the full pairwise scan.
pub fn min_toroidal_distance(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    assert!(n >= 2, "need at least two points");
    let g = (n as f64).sqrt().floor() as usize;
    if g < 4 {
        return min_dist_sq_brute(points).sqrt();
    }
    let cell = 1.0 / g as f64;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); g * g];
    for (i, p) in points.iter().enumerate() {
        debug_assert!((0.0..1.0).contains(&p[0]) && (0.0..1.0).contains(&p[1]));
        let bx = ((p[0] * g as f64) as usize).min(g - 1);
        let by = ((p[1] * g as f64) as usize).min(g - 1);
        buckets[by * g + bx].push(i);
    }
    let mut best = f64::INFINITY;
    for by in 0..g {
        for bx in 0..g {
            let home = &buckets[by * g + bx];
            for (k, &i) in home.iter().enumerate() {
                for &j in &home[k + 1..] {
                    best = best.min(toroidal_dist_sq(points[i], points[j]));
                }
            }
            // forward half of the neighborhood, so each cell pair is
            // visited once
            for (dy, dx) in [(0i64, 1i64), (1, -1), (1, 0), (1, 1)] {
                let ny = ((by as i64 + dy).rem_euclid(g as i64)) as usize;
                let nx = ((bx as i64 + dx).rem_euclid(g as i64)) as usize;
                let other = &buckets[ny * g + nx];
                if std::ptr::eq(home, other) {
                    continue;
                }
                for &i in home {
                    for &j in other {
                        best = best.min(toroidal_dist_sq(points[i], points[j]));
                    }
                }
            }
        }
    }
    if best < cell * cell {
        best.sqrt()
    } else {
        min_dist_sq_brute(points).sqrt()
    }
}

/// Minimum toroidal distance relative to the densest-packing bound
/// `sqrt(2 / (sqrt(3) N))`; 1 would be a perfect hexagonal lattice.
pub fn conflict_radius(points: &[[f64; 2]]) -> f64 {
    let n = points.len() as f64;
    min_toroidal_distance(points) / (2.0 / (3.0f64.sqrt() * n)).sqrt()
}

/// Gaussian pair energy `sum_{i<j} exp(-(d_ij sqrt(N))^2 / (2 sigma^2))`
/// with toroidal distances; lower is better spread.
pub fn blue_noise_energy(points: &[[f64; 2]], sigma: f64) -> f64 {
    let n = points.len() as f64;
    let inv = n / (2.0 * sigma * sigma);
    let mut total = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            total += (-toroidal_dist_sq(points[i], points[j]) * inv).exp();
        }
    }
    total
}
