//! Discriminator grid geometry.
//!
//! Search-region centers form axis-aligned lattices ("layers"). Layer 1 is
//! the coarse layer anchored at the predicted target position; optional
//! dense layers anchor either there too or at the positions of the top
//! coarse responses. The GP1–GP11 presets reproduce the published grid
//! settings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantize::{ColorSpace, Rect};

/// What a layer's lattice is centered on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// The position predictor's estimate for this frame (the last reported
    /// position when the predictor is disabled).
    PredictedPosition,
    /// The center of the rank-th highest coarse-layer response (1..=3).
    TopResponse(u8),
}

/// One lattice of `rows × cols` search-region centers spaced `(sxp, syp)`
/// pixels apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub rows: u32,
    pub cols: u32,
    pub sxp: u32,
    pub syp: u32,
    pub anchor: Anchor,
}

impl LayerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows < 1 || self.cols < 1 {
            return Err(Error::Config("layer needs at least one discriminator".into()));
        }
        if self.sxp < 1 || self.syp < 1 {
            return Err(Error::Config("layer spacing must be at least 1 pixel".into()));
        }
        if let Anchor::TopResponse(rank) = self.anchor {
            if !(1..=3).contains(&rank) {
                return Err(Error::Config(format!(
                    "top-response anchor rank {rank} outside 1..=3"
                )));
            }
        }
        Ok(())
    }

    pub fn center_count(&self) -> usize {
        self.rows as usize * self.cols as usize
    }

    /// Lattice extents in pixels: `((cols−1)·sxp, (rows−1)·syp)`.
    pub fn span(&self) -> (u32, u32) {
        ((self.cols - 1) * self.sxp, (self.rows - 1) * self.syp)
    }
}

/// A named multi-layer grid. Layer 0 is the coarse layer; later layers are
/// the dense ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSpec {
    pub name: String,
    /// Whether the tracker runs the position predictor for this layout.
    pub predictor: bool,
    /// Colorspace the preset was published with, if any; a tracker config
    /// may override it.
    pub quantizer_hint: Option<ColorSpace>,
    pub layers: Vec<LayerSpec>,
}

impl LayoutSpec {
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::Config("layout needs at least one layer".into()));
        }
        if self.layers[0].anchor != Anchor::PredictedPosition {
            return Err(Error::Config(
                "the coarse layer must anchor at the predicted position".into(),
            ));
        }
        for layer in &self.layers {
            layer.validate()?;
        }
        Ok(())
    }

    pub fn total_centers(&self) -> usize {
        self.layers.iter().map(LayerSpec::center_count).sum()
    }
}

/// A search-region center with the layer it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Center {
    pub x: i32,
    pub y: i32,
    pub layer: usize,
}

/// Centers produced by instantiating one or more layers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CenterSet {
    pub centers: Vec<Center>,
}

pub const PRESET_NAMES: [&str; 11] = [
    "GP1", "GP2", "GP3", "GP4", "GP5", "GP6", "GP7", "GP8", "GP9", "GP10", "GP11",
];

fn layer(rows: u32, cols: u32, sxp: u32, syp: u32, anchor: Anchor) -> LayerSpec {
    LayerSpec {
        rows,
        cols,
        sxp,
        syp,
        anchor,
    }
}

// The 20 x 20, 5-pixel-spaced coarse layer shared by GP5..GP11.
fn gp_coarse() -> LayerSpec {
    layer(20, 20, 5, 5, Anchor::PredictedPosition)
}

fn four_dense(rows_cols: u32, spacing: u32) -> Vec<LayerSpec> {
    vec![
        layer(rows_cols, rows_cols, spacing, spacing, Anchor::PredictedPosition),
        layer(rows_cols, rows_cols, spacing, spacing, Anchor::TopResponse(1)),
        layer(rows_cols, rows_cols, spacing, spacing, Anchor::TopResponse(2)),
        layer(rows_cols, rows_cols, spacing, spacing, Anchor::TopResponse(3)),
    ]
}

/// Builds one of the published grid presets GP1..GP11.
pub fn preset(name: &str) -> Result<LayoutSpec> {
    let spec = |predictor, hint, layers| LayoutSpec {
        name: name.to_uppercase(),
        predictor,
        quantizer_hint: hint,
        layers,
    };
    let layout = match name.to_uppercase().as_str() {
        "GP1" => spec(false, None, vec![layer(12, 12, 2, 2, Anchor::PredictedPosition)]),
        "GP2" => spec(false, None, vec![layer(20, 20, 2, 2, Anchor::PredictedPosition)]),
        "GP3" => spec(false, None, vec![layer(30, 30, 2, 2, Anchor::PredictedPosition)]),
        "GP4" => spec(false, None, vec![layer(20, 20, 5, 5, Anchor::PredictedPosition)]),
        "GP5" => spec(true, None, vec![gp_coarse()]),
        "GP6" => spec(
            true,
            Some(ColorSpace::Rgb),
            vec![gp_coarse(), layer(10, 10, 2, 2, Anchor::PredictedPosition)],
        ),
        "GP7" => spec(
            true,
            Some(ColorSpace::YCbCr),
            vec![gp_coarse(), layer(10, 10, 2, 2, Anchor::PredictedPosition)],
        ),
        "GP8" => spec(
            true,
            None,
            vec![gp_coarse(), layer(10, 10, 2, 2, Anchor::PredictedPosition)],
        ),
        "GP9" => spec(
            true,
            None,
            vec![gp_coarse(), layer(5, 5, 1, 1, Anchor::PredictedPosition)],
        ),
        "GP10" => {
            let mut layers = vec![gp_coarse()];
            layers.extend(four_dense(10, 2));
            spec(true, None, layers)
        }
        "GP11" => {
            let mut layers = vec![gp_coarse()];
            layers.extend(four_dense(5, 1));
            spec(true, None, layers)
        }
        _ => {
            return Err(Error::Config(format!(
                "unknown grid preset {name:?}; valid presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(layout)
}

/// Lays a layer's lattice out so its centroid coincides with `anchor`
/// (half-pixel offsets rounded toward negative infinity). Centers are
/// emitted row-major.
pub fn instantiate_layer(layer: &LayerSpec, anchor: (i32, i32), layer_id: usize) -> CenterSet {
    let (span_x, span_y) = layer.span();
    let x0 = anchor.0 - (span_x / 2) as i32;
    let y0 = anchor.1 - (span_y / 2) as i32;
    let mut centers = Vec::with_capacity(layer.center_count());
    for row in 0..layer.rows {
        for col in 0..layer.cols {
            centers.push(Center {
                x: x0 + (col * layer.sxp) as i32,
                y: y0 + (row * layer.syp) as i32,
                layer: layer_id,
            });
        }
    }
    CenterSet { centers }
}

/// Bounding rectangle of the union of all search regions: one `slw`-sized
/// rectangle centered on every center. Clipping to the frame is the
/// caller's business.
pub fn roi_of(centers: &CenterSet, slw: (u32, u32)) -> Rect {
    assert!(!centers.centers.is_empty(), "roi_of needs at least one center");
    let (w, h) = slw;
    let mut bounds: Option<Rect> = None;
    for c in &centers.centers {
        let region = Rect::centered_at(c.x, c.y, w, h);
        bounds = Some(match bounds {
            None => region,
            Some(b) => b.union_bounds(&region),
        });
    }
    bounds.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_center_counts_match_published_tables() {
        let expected = [
            ("GP1", 144),
            ("GP2", 400),
            ("GP3", 900),
            ("GP4", 400),
            ("GP5", 400),
            ("GP6", 500),
            ("GP7", 500),
            ("GP8", 500),
            ("GP9", 425),
            ("GP10", 800),
            ("GP11", 500),
        ];
        for (name, count) in expected {
            let layout = preset(name).unwrap();
            layout.validate().unwrap();
            assert_eq!(layout.total_centers(), count, "{name}");
        }
    }

    #[test]
    fn preset_predictor_flags_and_hints() {
        assert!(!preset("GP4").unwrap().predictor);
        assert!(preset("GP5").unwrap().predictor);
        assert_eq!(preset("GP6").unwrap().quantizer_hint, Some(ColorSpace::Rgb));
        assert_eq!(preset("GP7").unwrap().quantizer_hint, Some(ColorSpace::YCbCr));
        assert_eq!(preset("GP7").unwrap().layers.len(), 2);
        assert_eq!(preset("GP11").unwrap().layers.len(), 5);
    }

    #[test]
    fn unknown_preset_lists_the_valid_names() {
        let err = preset("GP12").unwrap_err().to_string();
        assert!(err.contains("GP1") && err.contains("GP11"), "{err}");
    }

    #[test]
    fn single_center_lattice_sits_on_the_anchor() {
        let l = layer(1, 1, 7, 9, Anchor::PredictedPosition);
        let set = instantiate_layer(&l, (50, 60), 0);
        assert_eq!(set.centers, vec![Center { x: 50, y: 60, layer: 0 }]);
    }

    #[test]
    fn three_by_three_lattice_arithmetic() {
        let l = layer(3, 3, 2, 2, Anchor::PredictedPosition);
        let set = instantiate_layer(&l, (10, 10), 1);
        let xs: Vec<i32> = set.centers.iter().map(|c| c.x).collect();
        let ys: Vec<i32> = set.centers.iter().map(|c| c.y).collect();
        for v in [8, 10, 12] {
            assert!(xs.contains(&v) && ys.contains(&v));
        }
        assert_eq!(set.centers.len(), 9);
        assert!(set.centers.iter().all(|c| c.layer == 1));
    }

    #[test]
    fn coarse_lattice_spans_95_pixels() {
        let l = gp_coarse();
        assert_eq!(l.span(), (95, 95));
        let set = instantiate_layer(&l, (100, 100), 0);
        let min_x = set.centers.iter().map(|c| c.x).min().unwrap();
        let max_x = set.centers.iter().map(|c| c.x).max().unwrap();
        assert_eq!(max_x - min_x, 95);
    }

    #[test]
    fn anchoring_is_translation_equivariant() {
        let l = layer(4, 6, 3, 2, Anchor::PredictedPosition);
        let base = instantiate_layer(&l, (30, 40), 0);
        let moved = instantiate_layer(&l, (30 + 17, 40 - 5), 0);
        for (a, b) in base.centers.iter().zip(&moved.centers) {
            assert_eq!((b.x - a.x, b.y - a.y), (17, -5));
        }
    }

    #[test]
    fn roi_of_single_center_is_the_search_region() {
        let set = CenterSet {
            centers: vec![Center { x: 50, y: 60, layer: 0 }],
        };
        assert_eq!(roi_of(&set, (40, 20)), Rect::centered_at(50, 60, 40, 20));
    }

    #[test]
    fn roi_of_coarse_layer_with_slw() {
        // span 95 per axis + SLW extents
        let set = instantiate_layer(&gp_coarse(), (200, 200), 0);
        let roi = roi_of(&set, (40, 17));
        assert_eq!((roi.w, roi.h), (135, 112));
    }

    #[test]
    fn roi_union_of_coincident_layers() {
        let small = instantiate_layer(&layer(5, 5, 1, 1, Anchor::PredictedPosition), (100, 100), 1);
        let large = instantiate_layer(&gp_coarse(), (100, 100), 0);
        let mut all = large.clone();
        all.centers.extend(small.centers.iter().copied());
        assert_eq!(roi_of(&all, (40, 17)), roi_of(&large, (40, 17)));
    }

    #[test]
    fn neighbor_regions_overlap_iff_spacing_below_extent() {
        let slw = (40u32, 17u32);
        // spacing 5 < 40: horizontally adjacent regions intersect
        let a = Rect::centered_at(100, 100, slw.0, slw.1);
        let b = Rect::centered_at(105, 100, slw.0, slw.1);
        assert!(a.intersect(&b).is_some());
        // spacing >= extent: no intersection
        let c = Rect::centered_at(140, 100, slw.0, slw.1);
        assert!(a.intersect(&c).is_none());
    }
}
