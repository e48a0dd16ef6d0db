//! Binary PGM (P5) image writing.

/// Serialize an 8-bit grayscale image, row-major, as binary PGM.
pub fn write_p5(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height, "pixel buffer size mismatch");
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_raster() {
        let img = write_p5(3, 2, &[0, 128, 255, 1, 2, 3]);
        assert!(img.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(&img[img.len() - 6..], &[0, 128, 255, 1, 2, 3]);
    }

    #[test]
    #[should_panic]
    fn size_mismatch_panics() {
        write_p5(2, 2, &[0; 3]);
    }
}
