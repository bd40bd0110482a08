//! Frame ingestion and emission: binary PPM (P6, 8-bit) read/write, PNG
//! decoding, lexicographically ordered sequence loading, ground-truth JSON
//! and annotated overlay dumps.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use pwot_core::quantize::{FramePixels, Rect};

use crate::error::{Error, Result};

/// Reads a binary PPM (P6, maxval 255). Header comments are honored.
pub fn read_ppm(path: &Path) -> Result<FramePixels> {
    let name = path.display().to_string();
    let bytes = fs::read(path).map_err(|e| Error::io(&name, e))?;
    let mut pos = 0usize;

    let mut token = |bytes: &[u8]| -> Result<String> {
        // skip whitespace and '#' comments
        while pos < bytes.len() {
            let b = bytes[pos];
            if b == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                pos += 1;
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Decode {
                file: name.clone(),
                reason: "truncated header".into(),
            });
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    let magic = token(&bytes)?;
    if magic != "P6" {
        return Err(Error::Decode {
            file: name,
            reason: format!("expected P6 magic, found {magic:?}"),
        });
    }
    let parse = |s: String, what: &str| -> Result<u32> {
        s.parse().map_err(|_| Error::Decode {
            file: name.clone(),
            reason: format!("bad {what} {s:?}"),
        })
    };
    let width = parse(token(&bytes)?, "width")?;
    let height = parse(token(&bytes)?, "height")?;
    let maxval = parse(token(&bytes)?, "maxval")?;
    if maxval != 255 {
        return Err(Error::Decode {
            file: name,
            reason: format!("unsupported maxval {maxval}; only 255 is supported"),
        });
    }
    pos += 1; // single whitespace after maxval
    let expected = width as usize * height as usize * 3;
    let data = bytes[pos.min(bytes.len())..].to_vec();
    if data.len() < expected {
        return Err(Error::Decode {
            file: name,
            reason: format!("pixel payload {} bytes, expected {expected}", data.len()),
        });
    }
    Ok(FramePixels::new(width, height, data[..expected].to_vec())?)
}

/// Writes a binary PPM (P6, maxval 255). Byte-identical over a
/// read/write round trip.
pub fn write_ppm(path: &Path, frame: &FramePixels) -> Result<()> {
    let name = path.display().to_string();
    let file = fs::File::create(path).map_err(|e| Error::io(&name, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| Error::io(&name, e);
    write!(out, "P6\n{} {}\n255\n", frame.width(), frame.height()).map_err(io)?;
    out.write_all(frame.data()).map_err(io)?;
    out.flush().map_err(io)?;
    Ok(())
}

fn read_png(path: &Path) -> Result<FramePixels> {
    let name = path.display().to_string();
    let img = image::open(path).map_err(|e| Error::Decode {
        file: name,
        reason: e.to_string(),
    })?;
    let rgb = img.to_rgb8();
    Ok(FramePixels::new(rgb.width(), rgb.height(), rgb.into_raw())?)
}

/// Loads a frame any of the supported formats decode.
pub fn read_frame(path: &Path) -> Result<FramePixels> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("ppm") => read_ppm(path),
        Some("png") => read_png(path),
        _ => Err(Error::Decode {
            file: path.display().to_string(),
            reason: "unsupported extension (expected .ppm or .png)".into(),
        }),
    }
}

/// Loads every `.ppm`/`.png` in `dir` in lexicographic name order. All
/// frames must share one resolution.
pub fn load_frame_sequence(dir: &Path) -> Result<Vec<FramePixels>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension()
                    .and_then(|e| e.to_str())
                    .map(|e| e.to_ascii_lowercase())
                    .as_deref(),
                Some("ppm") | Some("png")
            )
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::EmptyDirectory(dir.to_path_buf()));
    }
    let mut frames = Vec::with_capacity(paths.len());
    let mut first: Option<(String, u32, u32)> = None;
    for path in &paths {
        let frame = read_frame(path)?;
        match &first {
            None => first = Some((path.display().to_string(), frame.width(), frame.height())),
            Some((name, w, h)) => {
                if (frame.width(), frame.height()) != (*w, *h) {
                    return Err(Error::MixedDimensions {
                        first: name.clone(),
                        first_w: *w,
                        first_h: *h,
                        second: path.display().to_string(),
                        second_w: frame.width(),
                        second_h: frame.height(),
                    });
                }
            }
        }
        frames.push(frame);
    }
    Ok(frames)
}

/// Writes frames as `frame_0000.ppm`, `frame_0001.ppm`, ...
pub fn save_frames_ppm(dir: &Path, frames: &[FramePixels]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    for (i, frame) in frames.iter().enumerate() {
        write_ppm(&dir.join(format!("frame_{i:04}.ppm")), frame)?;
    }
    Ok(())
}

pub fn write_truth_json(path: &Path, boxes: &[Rect]) -> Result<()> {
    let name = path.display().to_string();
    let json = serde_json::to_string_pretty(boxes).expect("rects serialize");
    fs::write(path, json).map_err(|e| Error::io(name, e))
}

pub fn read_truth_json(path: &Path) -> Result<Vec<Rect>> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::io(&name, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Decode {
        file: name,
        reason: e.to_string(),
    })
}

/// Draws a 1-pixel rectangle outline, clipped to the frame.
pub fn draw_box(frame: &mut FramePixels, rect: Rect, rgb: [u8; 3]) {
    let (fw, fh) = (frame.width() as i64, frame.height() as i64);
    let mut put = |x: i64, y: i64| {
        if x >= 0 && x < fw && y >= 0 && y < fh {
            frame.set_rgb(x as u32, y as u32, rgb);
        }
    };
    for x in rect.x as i64..rect.right() {
        put(x, rect.y as i64);
        put(x, rect.bottom() - 1);
    }
    for y in rect.y as i64..rect.bottom() {
        put(rect.x as i64, y);
        put(rect.right() - 1, y);
    }
}

/// Writes annotated copies of the frames: reported boxes in red, truth
/// boxes (when known) in green.
pub fn write_overlays(
    dir: &Path,
    frames: &[FramePixels],
    reported: &[(usize, Rect)],
    truth: Option<&[Rect]>,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let mut annotated: Vec<FramePixels> = frames.to_vec();
    if let Some(truth) = truth {
        for (i, frame) in annotated.iter_mut().enumerate() {
            if let Some(&b) = truth.get(i) {
                draw_box(frame, b, [40, 220, 40]);
            }
        }
    }
    for &(i, b) in reported {
        if let Some(frame) = annotated.get_mut(i) {
            draw_box(frame, b, [230, 30, 30]);
        }
    }
    for (i, frame) in annotated.iter().enumerate() {
        write_ppm(&dir.join(format!("overlay_{i:04}.ppm")), frame)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_frame(seed: u64) -> FramePixels {
        let mut rng = pwot_core::SplitMix64::new(seed);
        let data: Vec<u8> = (0..30 * 20 * 3).map(|_| rng.next_below(256) as u8).collect();
        FramePixels::new(30, 20, data).unwrap()
    }

    #[test]
    fn ppm_roundtrip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let frame = sample_frame(1);
        let path = dir.path().join("a.ppm");
        write_ppm(&path, &frame).unwrap();
        let loaded = read_ppm(&path).unwrap();
        assert_eq!(loaded, frame);
        // writing the loaded frame reproduces the exact bytes
        let path2 = dir.path().join("b.ppm");
        write_ppm(&path2, &loaded).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
    }

    #[test]
    fn ppm_header_comments_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.ppm");
        let mut payload = b"P6\n# a comment\n2 1\n# another\n255\n".to_vec();
        payload.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        fs::write(&path, payload).unwrap();
        let frame = read_ppm(&path).unwrap();
        assert_eq!((frame.width(), frame.height()), (2, 1));
        assert_eq!(frame.rgb(1, 0), [4, 5, 6]);
    }

    #[test]
    fn sequence_loads_in_name_order() {
        let dir = tempfile::tempdir().unwrap();
        for (name, seed) in [("b.ppm", 2u64), ("a.ppm", 1), ("c.ppm", 3)] {
            write_ppm(&dir.path().join(name), &sample_frame(seed)).unwrap();
        }
        fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        let frames = load_frame_sequence(dir.path()).unwrap();
        assert_eq!(frames.len(), 3);
        assert_eq!(frames[0], sample_frame(1));
        assert_eq!(frames[2], sample_frame(3));
    }

    #[test]
    fn empty_directory_is_its_own_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_frame_sequence(dir.path()),
            Err(Error::EmptyDirectory(_))
        ));
    }

    #[test]
    fn mixed_dimensions_name_both_files() {
        let dir = tempfile::tempdir().unwrap();
        write_ppm(&dir.path().join("a.ppm"), &sample_frame(1)).unwrap();
        write_ppm(
            &dir.path().join("b.ppm"),
            &FramePixels::solid(10, 10, [1, 2, 3]),
        )
        .unwrap();
        let err = load_frame_sequence(dir.path()).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("a.ppm") && text.contains("b.ppm"), "{text}");
    }

    #[test]
    fn truth_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("truth.json");
        let boxes = vec![Rect::new(1, 2, 3, 4), Rect::new(-5, 0, 10, 10)];
        write_truth_json(&path, &boxes).unwrap();
        assert_eq!(read_truth_json(&path).unwrap(), boxes);
    }

    #[test]
    fn overlay_draws_clipped_outline() {
        let mut frame = FramePixels::solid(10, 10, [0, 0, 0]);
        draw_box(&mut frame, Rect::new(-2, -2, 6, 6), [255, 0, 0]);
        assert_eq!(frame.rgb(3, 0), [255, 0, 0]); // right edge column inside
        assert_eq!(frame.rgb(0, 3), [255, 0, 0]);
        assert_eq!(frame.rgb(5, 5), [0, 0, 0]);
    }
}
