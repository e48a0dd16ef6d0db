//! Dyadic stratification checks for 2D point sets with m-bit integer
//! coordinates.
//!
//! `2^t` points pass when for every split `a + b = t` the grid of
//! `2^a x 2^b` dyadic boxes holds exactly one point per box.

fn box_index(p: [u32; 2], m: u32, a: u32, b: u32) -> u64 {
    let hx = if a == 0 { 0 } else { (p[0] >> (m - a)) as u64 };
    let hy = if b == 0 { 0 } else { (p[1] >> (m - b)) as u64 };
    (hx << b) | hy
}

fn log2_exact(n: usize) -> Option<u32> {
    (n.is_power_of_two()).then(|| n.trailing_zeros())
}

/// Occupancy-count check: every split must fill each box exactly once.
pub fn net_check(points: &[[u32; 2]], m: u32) -> bool {
    let Some(t) = log2_exact(points.len()) else {
        return false;
    };
    assert!(t <= m && m <= 32, "need t <= m bits per coordinate");
    for a in 0..=t {
        let b = t - a;
        let mut counts = vec![0u32; 1 << t];
        for &p in points {
            counts[box_index(p, m, a, b) as usize] += 1;
        }
        if counts.iter().any(|&c| c != 1) {
            return false;
        }
    }
    true
}

/// Independent second implementation: the sorted box indices of every
/// split must be exactly `0..2^t`.
pub fn net_check_witness(points: &[[u32; 2]], m: u32) -> bool {
    let Some(t) = log2_exact(points.len()) else {
        return false;
    };
    assert!(t <= m && m <= 32, "need t <= m bits per coordinate");
    (0..=t).all(|a| {
        let b = t - a;
        let mut seen: Vec<u64> = points.iter().map(|&p| box_index(p, m, a, b)).collect();
        seen.sort_unstable();
        seen.iter().enumerate().all(|(i, &v)| v == i as u64)
    })
}
