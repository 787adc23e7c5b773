//! Binary PGM (P5/P2) masks: any sample value above zero is foreground.

use std::path::Path;

use gcpoly::contour::RasterMask;

pub fn read_mask(path: &Path) -> Result<RasterMask, String> {
    let bytes =
        std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    #[cfg(feature = "png")]
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")) {
        return parse_png(&bytes);
    }
    parse_pgm(&bytes)
}

pub fn parse_pgm(bytes: &[u8]) -> Result<RasterMask, String> {
    let mut pos = 0usize;

    let next_token = |pos: &mut usize| -> Result<String, String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err("unexpected end of PGM header".into());
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };

    let magic = next_token(&mut pos)?;
    if magic != "P5" && magic != "P2" {
        return Err(format!("unsupported PGM magic {magic:?}"));
    }
    let width: usize = next_token(&mut pos)?.parse().map_err(|e| format!("bad width: {e}"))?;
    let height: usize = next_token(&mut pos)?.parse().map_err(|e| format!("bad height: {e}"))?;
    let maxval: u32 = next_token(&mut pos)?.parse().map_err(|e| format!("bad maxval: {e}"))?;
    if maxval == 0 || maxval > 65535 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| "mask dimensions overflow".to_string())?;

    let mut data = Vec::with_capacity(count);
    if magic == "P2" {
        for _ in 0..count {
            let v: u32 = next_token(&mut pos)?.parse().map_err(|e| format!("bad sample: {e}"))?;
            data.push((v > 0) as u8);
        }
    } else {
        // Exactly one whitespace byte separates the header from the raster.
        pos += 1;
        let wide = maxval > 255;
        let need = count * if wide { 2 } else { 1 };
        let raster = bytes
            .get(pos..pos + need)
            .ok_or_else(|| "truncated PGM raster".to_string())?;
        if wide {
            for pair in raster.chunks_exact(2) {
                let v = u16::from_be_bytes([pair[0], pair[1]]);
                data.push((v > 0) as u8);
            }
        } else {
            data.extend(raster.iter().map(|&v| (v > 0) as u8));
        }
    }

    RasterMask::new(width, height, data).map_err(|e| e.to_string())
}

#[cfg(feature = "png")]
fn parse_png(bytes: &[u8]) -> Result<RasterMask, String> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| format!("cannot decode PNG: {e}"))?
        .into_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img.into_raw().into_iter().map(|v| (v > 0) as u8).collect();
    RasterMask::new(w, h, data).map_err(|e| e.to_string())
}

pub fn write_pgm(mask: &RasterMask, path: &Path) -> std::io::Result<()> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    out.extend(mask.data().iter().map(|&v| if v != 0 { 255u8 } else { 0 }));
    std::fs::write(path, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ascii_and_binary() {
        let p2 = b"P2\n# comment\n3 2\n255\n0 255 0\n7 0 0\n";
        let m = parse_pgm(p2).unwrap();
        assert_eq!(m.width(), 3);
        assert_eq!(m.height(), 2);
        assert_eq!(m.data(), &[0, 1, 0, 1, 0, 0]);

        let mut p5 = b"P5\n3 2\n255\n".to_vec();
        p5.extend([0u8, 255, 0, 7, 0, 0]);
        assert_eq!(parse_pgm(&p5).unwrap(), m);
    }

    #[test]
    fn round_trips_through_writer() {
        let mask = RasterMask::from_fn(4, 3, |r, c| (r + c) % 2 == 0).unwrap();
        let dir = std::env::temp_dir().join(format!("gcpoly-pgm-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.pgm");
        write_pgm(&mask, &path).unwrap();
        assert_eq!(read_mask(&path).unwrap(), mask);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_pgm(b"P6\n1 1\n255\n\0").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\0").is_err());
    }
}
