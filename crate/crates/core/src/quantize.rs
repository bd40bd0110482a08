//! Pixel-to-bit quantization.
//!
//! The target model is built from the first frame only: four border points
//! found by sliding a Prewitt edge detector out of the selection-window
//! center give two thin pixel bands across the target (`pf`), a ring just
//! outside the window samples the background (`pw`), and per-channel
//! statistics of those samples define six thresholds — a (lower, upper) pair
//! per channel. A pixel quantizes to 1 iff all three of its channel values
//! fall inside their pair. Thresholding runs in RGB or, with fixed scales
//! (3, 3, 1.5) on (Cr, Y, Cb), in YCbCr.
//!
//! [`corrupt_bits`] flips an exact seeded fraction of a pattern's bits; the
//! robustness experiments use it to degrade quantization on purpose.

use serde::{Deserialize, Serialize};

use crate::bits::BitPattern;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorSpace {
    Rgb,
    YCbCr,
}

/// An 8-bit RGB frame, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramePixels {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl FramePixels {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: data.len(),
            });
        }
        Ok(FramePixels {
            width,
            height,
            data,
        })
    }

    pub fn solid(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(width as usize * height as usize * 3);
        for _ in 0..width as usize * height as usize {
            data.extend_from_slice(&rgb);
        }
        FramePixels {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn rgb(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_rgb(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn contains(&self, rect: Rect) -> bool {
        rect.x >= 0
            && rect.y >= 0
            && rect.right() <= self.width as i64
            && rect.bottom() <= self.height as i64
    }
}

/// Axis-aligned pixel rectangle: top-left corner plus extents. Clipping to a
/// frame is always explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: i32,
    pub y: i32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub fn new(x: i32, y: i32, w: u32, h: u32) -> Self {
        Rect { x, y, w, h }
    }

    /// Rectangle of size `w × h` whose [`center`](Self::center) is `(cx, cy)`.
    pub fn centered_at(cx: i32, cy: i32, w: u32, h: u32) -> Self {
        Rect {
            x: cx - (w / 2) as i32,
            y: cy - (h / 2) as i32,
            w,
            h,
        }
    }

    pub fn center(&self) -> (i32, i32) {
        (self.x + (self.w / 2) as i32, self.y + (self.h / 2) as i32)
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    /// One past the right edge.
    pub fn right(&self) -> i64 {
        self.x as i64 + self.w as i64
    }

    /// One past the bottom edge.
    pub fn bottom(&self) -> i64 {
        self.y as i64 + self.h as i64
    }

    pub fn inflate(&self, margin: u32) -> Rect {
        Rect {
            x: self.x - margin as i32,
            y: self.y - margin as i32,
            w: self.w + 2 * margin,
            h: self.h + 2 * margin,
        }
    }

    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x.max(other.x) as i64;
        let y0 = self.y.max(other.y) as i64;
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        if x1 > x0 && y1 > y0 {
            Some(Rect {
                x: x0 as i32,
                y: y0 as i32,
                w: (x1 - x0) as u32,
                h: (y1 - y0) as u32,
            })
        } else {
            None
        }
    }

    /// Smallest rectangle containing both.
    pub fn union_bounds(&self, other: &Rect) -> Rect {
        let x0 = self.x.min(other.x);
        let y0 = self.y.min(other.y);
        let x1 = self.right().max(other.right());
        let y1 = self.bottom().max(other.bottom());
        Rect {
            x: x0,
            y: y0,
            w: (x1 - x0 as i64) as u32,
            h: (y1 - y0 as i64) as u32,
        }
    }

    pub fn clip_to_frame(&self, frame_w: u32, frame_h: u32) -> Option<Rect> {
        self.intersect(&Rect::new(0, 0, frame_w, frame_h))
    }

    /// Translates the rectangle the minimal amount that puts it fully inside
    /// the frame. Requires `w ≤ frame_w` and `h ≤ frame_h`.
    pub fn shift_inside_frame(&self, frame_w: u32, frame_h: u32) -> Rect {
        debug_assert!(self.w <= frame_w && self.h <= frame_h);
        Rect {
            x: self.x.clamp(0, (frame_w - self.w) as i32),
            y: self.y.clamp(0, (frame_h - self.h) as i32),
            w: self.w,
            h: self.h,
        }
    }
}

fn round_channel(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// BT.601 full-range RGB → YCbCr, rounded to nearest and clamped. Returns
/// `[Y, Cb, Cr]`.
pub fn rgb_to_ycbcr([r, g, b]: [u8; 3]) -> [u8; 3] {
    let (r, g, b) = (r as f64, g as f64, b as f64);
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    let cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    [round_channel(y), round_channel(cb), round_channel(cr)]
}

/// Inverse of [`rgb_to_ycbcr`]; recovers each channel within ±1.
pub fn ycbcr_to_rgb([y, cb, cr]: [u8; 3]) -> [u8; 3] {
    let (y, cb, cr) = (y as f64, cb as f64 - 128.0, cr as f64 - 128.0);
    let r = y + 1.402 * cr;
    let g = y - 0.344136 * cb - 0.714136 * cr;
    let b = y + 1.772 * cb;
    [round_channel(r), round_channel(g), round_channel(b)]
}

/// Converts an RGB triple into `colorspace` channel order: `[R, G, B]` or
/// `[Y, Cb, Cr]`.
pub fn convert_pixel(rgb: [u8; 3], colorspace: ColorSpace) -> [u8; 3] {
    match colorspace {
        ColorSpace::Rgb => rgb,
        ColorSpace::YCbCr => rgb_to_ycbcr(rgb),
    }
}

/// Per-channel mean and population standard deviation of a pixel sample, in
/// the channel order of its colorspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats<F> {
    pub colorspace: ColorSpace,
    pub mean: [F; 3],
    pub std: [F; 3],
}

/// Mean and population standard deviation per channel; `pixels` are RGB and
/// are converted first when `colorspace` says so.
pub fn channel_stats<F: Real>(pixels: &[[u8; 3]], colorspace: ColorSpace) -> Result<ChannelStats<F>> {
    if pixels.is_empty() {
        return Err(Error::EmptySample("channel statistics"));
    }
    let n = F::from_count(pixels.len());
    let mut mean = [F::zero(); 3];
    for &px in pixels {
        let v = convert_pixel(px, colorspace);
        for c in 0..3 {
            mean[c] = mean[c] + F::from_channel(v[c]);
        }
    }
    for m in &mut mean {
        *m = *m / n;
    }
    let mut var = [F::zero(); 3];
    for &px in pixels {
        let v = convert_pixel(px, colorspace);
        for c in 0..3 {
            let d = F::from_channel(v[c]) - mean[c];
            var[c] = var[c] + d * d;
        }
    }
    let mut std = [F::zero(); 3];
    for c in 0..3 {
        std[c] = (var[c] / n).sqrt();
    }
    Ok(ChannelStats {
        colorspace,
        mean,
        std,
    })
}

/// Six thresholds: a `(lower, upper)` pair per channel, in the channel order
/// of `colorspace`, plus the per-channel scales that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet<F> {
    pub colorspace: ColorSpace,
    /// `(lower, upper)` per channel; upper ≥ lower always holds.
    pub bounds: [(F, F); 3],
    /// Scales in equation order: RGB → (R, G, B); YCbCr → (Cr, Y, Cb).
    pub scales: (F, F, F),
}

impl<F: Real> ThresholdSet<F> {
    /// True iff every channel of the (already converted) pixel lies inside
    /// its pair, inclusive.
    #[inline]
    pub fn contains(&self, converted: [u8; 3]) -> bool {
        for c in 0..3 {
            let v = F::from_channel(converted[c]);
            let (lo, hi) = self.bounds[c];
            if v < lo || v > hi {
                return false;
            }
        }
        true
    }
}

fn pair<F: Real>(mean: F, std: F, scale: F) -> (F, F) {
    (mean - scale * std, mean + scale * std)
}

/// The scale grid searched by [`thresholds_rgb`]: 0.5 to 4.0 in steps of 0.5.
pub fn default_scale_grid<F: Real>() -> Vec<F> {
    (1..=8).map(|i| F::from_config(i as f64 * 0.5)).collect()
}

/// Default YCbCr scales `(x, y, z)` applied to (Cr, Y, Cb).
pub fn ycbcr_default_scales<F: Real>() -> (F, F, F) {
    (
        F::from_config(3.0),
        F::from_config(3.0),
        F::from_config(1.5),
    )
}

fn fraction_inside<F: Real>(set: &ThresholdSet<F>, pixels: &[[u8; 3]]) -> F {
    let hits = pixels
        .iter()
        .filter(|&&px| set.contains(convert_pixel(px, set.colorspace)))
        .count();
    F::from_count(hits) / F::from_count(pixels.len())
}

/// RGB six-threshold rule: per-channel bounds `mean ± scale·std` of the
/// target band `pf`, with scales `(x, y, z)` for (R, G, B) chosen by
/// exhaustive grid search maximizing (fraction of `pf` inside) − (fraction
/// of the background sample `pw` inside). Ties go to the smaller scales.
pub fn thresholds_rgb<F: Real>(
    pf: &[[u8; 3]],
    pw: &[[u8; 3]],
    grid: &[F],
) -> Result<ThresholdSet<F>> {
    if pf.is_empty() {
        return Err(Error::EmptySample("target band pf"));
    }
    if pw.is_empty() {
        return Err(Error::EmptySample("background sample pw"));
    }
    if grid.is_empty() {
        return Err(Error::Config("scale grid must not be empty".into()));
    }
    let stats = channel_stats::<F>(pf, ColorSpace::Rgb)?;
    let mut best: Option<(F, ThresholdSet<F>)> = None;
    for &x in grid {
        for &y in grid {
            for &z in grid {
                let candidate = ThresholdSet {
                    colorspace: ColorSpace::Rgb,
                    bounds: [
                        pair(stats.mean[0], stats.std[0], x),
                        pair(stats.mean[1], stats.std[1], y),
                        pair(stats.mean[2], stats.std[2], z),
                    ],
                    scales: (x, y, z),
                };
                let score = fraction_inside(&candidate, pf) - fraction_inside(&candidate, pw);
                // strict improvement only: ascending iteration keeps the
                // smallest scales on ties
                if best.as_ref().map_or(true, |(s, _)| score > *s) {
                    best = Some((score, candidate));
                }
            }
        }
    }
    Ok(best.expect("grid is nonempty").1)
}

/// YCbCr six-threshold rule with fixed scales `(x, y, z)` applied to
/// (Cr, Y, Cb): Cr gets `mean ± x·std`, Y `± y·std`, Cb `± z·std`.
pub fn thresholds_ycbcr<F: Real>(
    stats: &ChannelStats<F>,
    scales: (F, F, F),
) -> Result<ThresholdSet<F>> {
    if stats.colorspace != ColorSpace::YCbCr {
        return Err(Error::Config(
            "YCbCr thresholds need YCbCr channel statistics".into(),
        ));
    }
    let (x, y, z) = scales;
    Ok(ThresholdSet {
        colorspace: ColorSpace::YCbCr,
        bounds: [
            pair(stats.mean[0], stats.std[0], y), // Y
            pair(stats.mean[1], stats.std[1], z), // Cb
            pair(stats.mean[2], stats.std[2], x), // Cr
        ],
        scales,
    })
}

/// Rec. 601 luma of an RGB pixel.
pub fn luma([r, g, b]: [u8; 3]) -> f64 {
    0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
}

fn luma_clamped(frame: &FramePixels, x: i64, y: i64) -> f64 {
    let xc = x.clamp(0, frame.width as i64 - 1) as u32;
    let yc = y.clamp(0, frame.height as i64 - 1) as u32;
    luma(frame.rgb(xc, yc))
}

/// 3×3 Prewitt gradient magnitude on the luma channel, with border
/// replication at the frame edges.
pub fn prewitt_magnitude(frame: &FramePixels, x: u32, y: u32) -> f64 {
    let (x, y) = (x as i64, y as i64);
    let p = |dx: i64, dy: i64| luma_clamped(frame, x + dx, y + dy);
    let gx = (p(-1, -1) + p(-1, 0) + p(-1, 1)) - (p(1, -1) + p(1, 0) + p(1, 1));
    let gy = (p(-1, -1) + p(0, -1) + p(1, -1)) - (p(-1, 1) + p(0, 1) + p(1, 1));
    (gx * gx + gy * gy).sqrt()
}

/// Four target-border points found by scanning the Prewitt gradient along
/// the selection window's center row (left, right of center) and center
/// column (above, below): `[p1, p2, p3, p4]`. Ties resolve toward the
/// center, and all points stay inside the window.
pub fn prewitt_border_points(frame: &FramePixels, slw: Rect) -> Result<[(u32, u32); 4]> {
    if !frame.contains(slw) {
        return Err(Error::RegionOutsideFrame {
            x: slw.x,
            y: slw.y,
            w: slw.w,
            h: slw.h,
            frame_w: frame.width,
            frame_h: frame.height,
        });
    }
    if slw.w < 5 || slw.h < 5 {
        return Err(Error::Config(format!(
            "selection window {}x{} too small for border detection; need at least 5x5",
            slw.w, slw.h
        )));
    }
    let (cx, cy) = slw.center();
    let (cx, cy) = (cx as u32, cy as u32);
    let x_lo = slw.x as u32;
    let x_hi = (slw.right() - 1) as u32;
    let y_lo = slw.y as u32;
    let y_hi = (slw.bottom() - 1) as u32;

    // walk outward from the center; strict improvement keeps the
    // nearest-to-center pixel on ties
    let scan = |points: &mut dyn Iterator<Item = (u32, u32)>| -> (u32, u32) {
        let mut best = (cx, cy);
        let mut best_mag = f64::NEG_INFINITY;
        for (x, y) in points {
            let mag = prewitt_magnitude(frame, x, y);
            if mag > best_mag {
                best_mag = mag;
                best = (x, y);
            }
        }
        best
    };
    let p1 = scan(&mut (x_lo..=cx).rev().map(|x| (x, cy)));
    let p2 = scan(&mut (cx..=x_hi).map(|x| (x, cy)));
    let p3 = scan(&mut (y_lo..=cy).rev().map(|y| (cx, y)));
    let p4 = scan(&mut (cy..=y_hi).map(|y| (cx, y)));
    Ok([p1, p2, p3, p4])
}

/// Pixel samples feeding the threshold statistics: the two 1-pixel-wide
/// bands between opposite border points (`pf`, on the target) and a
/// 3-pixel ring just outside the selection window (`pw`, background).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBands {
    pub points: [(u32, u32); 4],
    pub pf: Vec<(u32, u32)>,
    pub pw: Vec<(u32, u32)>,
}

impl SampleBands {
    pub fn pf_colors(&self, frame: &FramePixels) -> Vec<[u8; 3]> {
        self.pf.iter().map(|&(x, y)| frame.rgb(x, y)).collect()
    }

    pub fn pw_colors(&self, frame: &FramePixels) -> Vec<[u8; 3]> {
        self.pw.iter().map(|&(x, y)| frame.rgb(x, y)).collect()
    }
}

/// All integer points of the segment `a → b` (Bresenham), endpoints included.
fn line_points(a: (u32, u32), b: (u32, u32)) -> Vec<(u32, u32)> {
    let (mut x0, mut y0) = (a.0 as i64, a.1 as i64);
    let (x1, y1) = (b.0 as i64, b.1 as i64);
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::new();
    loop {
        out.push((x0 as u32, y0 as u32));
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
    out
}

fn shrink_segment(points: &[(u32, u32)]) -> &[(u32, u32)] {
    if points.len() > 4 {
        &points[2..points.len() - 2]
    } else {
        &[]
    }
}

/// Collects the target band `pf` (segments p1→p2 and p3→p4, each shrunk by
/// a 2-pixel margin at both ends) and the background ring `pw` (3 pixels
/// thick, immediately outside the window, clipped to the frame). Falls back
/// to unshrunk segments if shrinking empties `pf`.
pub fn sample_bands(
    frame: &FramePixels,
    slw: Rect,
    points: [(u32, u32); 4],
) -> Result<SampleBands> {
    for &(x, y) in &points {
        let inside = (x as i64) >= slw.x as i64
            && (x as i64) < slw.right()
            && (y as i64) >= slw.y as i64
            && (y as i64) < slw.bottom();
        if !inside {
            return Err(Error::Config(format!(
                "border point ({x},{y}) outside the selection window"
            )));
        }
    }
    let seg1 = line_points(points[0], points[1]);
    let seg2 = line_points(points[2], points[3]);
    let mut pf: Vec<(u32, u32)> = shrink_segment(&seg1)
        .iter()
        .chain(shrink_segment(&seg2).iter())
        .copied()
        .collect();
    if pf.is_empty() {
        pf = seg1.iter().chain(seg2.iter()).copied().collect();
    }
    // the two bands cross once; drop exact duplicates
    let mut seen = std::collections::HashSet::new();
    pf.retain(|p| seen.insert(*p));
    if pf.is_empty() {
        return Err(Error::EmptySample("target band pf"));
    }

    let ring_outer = slw.inflate(3);
    let mut pw = Vec::new();
    for y in ring_outer.y.max(0)..(ring_outer.bottom().min(frame.height as i64)) as i32 {
        for x in ring_outer.x.max(0)..(ring_outer.right().min(frame.width as i64)) as i32 {
            let in_slw = x >= slw.x
                && (x as i64) < slw.right()
                && y >= slw.y
                && (y as i64) < slw.bottom();
            if !in_slw {
                pw.push((x as u32, y as u32));
            }
        }
    }
    if pw.is_empty() {
        return Err(Error::EmptySample("background ring pw"));
    }
    Ok(SampleBands { points, pf, pw })
}

/// Quantizes a region to one bit per pixel, row-major: 1 iff every channel
/// of the converted pixel lies inside its threshold pair.
pub fn quantize_region<F: Real>(
    frame: &FramePixels,
    region: Rect,
    thresholds: &ThresholdSet<F>,
) -> Result<BitPattern> {
    if !frame.contains(region) {
        return Err(Error::RegionOutsideFrame {
            x: region.x,
            y: region.y,
            w: region.w,
            h: region.h,
            frame_w: frame.width,
            frame_h: frame.height,
        });
    }
    let mut pattern = BitPattern::zeros(region.w, region.h);
    let mut i = 0;
    for y in region.y as u32..(region.y as u32 + region.h) {
        for x in region.x as u32..(region.x as u32 + region.w) {
            let px = convert_pixel(frame.rgb(x, y), thresholds.colorspace);
            if thresholds.contains(px) {
                pattern.set(i, true);
            }
            i += 1;
        }
    }
    Ok(pattern)
}

/// A region quantized once so that many overlapping sub-windows can be
/// extracted without re-thresholding shared pixels.
#[derive(Debug, Clone)]
pub struct QuantizedMask {
    rect: Rect,
    bits: BitPattern,
}

impl QuantizedMask {
    pub fn build<F: Real>(
        frame: &FramePixels,
        rect: Rect,
        thresholds: &ThresholdSet<F>,
    ) -> Result<Self> {
        Ok(QuantizedMask {
            rect,
            bits: quantize_region(frame, rect, thresholds)?,
        })
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    /// Extracts the sub-window's bits; `None` if it is not fully covered.
    pub fn extract(&self, region: Rect) -> Option<BitPattern> {
        if region.x < self.rect.x
            || region.y < self.rect.y
            || region.right() > self.rect.right()
            || region.bottom() > self.rect.bottom()
        {
            return None;
        }
        let mut out = BitPattern::zeros(region.w, region.h);
        let mask_w = self.rect.w as usize;
        let off_x = (region.x - self.rect.x) as usize;
        let off_y = (region.y - self.rect.y) as usize;
        let mut i = 0;
        for row in 0..region.h as usize {
            let base = (off_y + row) * mask_w + off_x;
            for col in 0..region.w as usize {
                if self.bits.get(base + col) {
                    out.set(i, true);
                }
                i += 1;
            }
        }
        Some(out)
    }
}

/// Exact seeded corruption: flips `round(flip_fraction · len)` distinct bit
/// positions chosen by the seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorruptionSpec {
    pub flip_fraction: f64,
    pub seed: u64,
}

/// Flips exactly `round(flip_fraction × len)` distinct positions. The chosen
/// positions depend only on the pattern length and the seed.
pub fn corrupt_bits(pattern: &BitPattern, spec: &CorruptionSpec) -> BitPattern {
    let len = pattern.len();
    let fraction = spec.flip_fraction.clamp(0.0, 1.0);
    let flips = (fraction * len as f64).round() as usize;
    let mut out = pattern.clone();
    if flips == 0 || len == 0 {
        return out;
    }
    // partial Fisher-Yates: the first `flips` entries are a uniform sample
    let mut rng = SplitMix64::new(spec.seed);
    let mut indices: Vec<u32> = (0..len as u32).collect();
    for i in 0..flips.min(len - 1) {
        let j = i + rng.next_below((len - i) as u64) as usize;
        indices.swap(i, j);
    }
    for &i in &indices[..flips] {
        out.flip(i as usize);
    }
    out
}
