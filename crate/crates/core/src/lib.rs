//! Grayscale contrast enhancement by histogram equalization.
//!
//! Five enhancement methods share one equalization kernel:
//!
//! * [`che`]: classical histogram equalization over the full `[0, 255]` range.
//! * [`ahe`]: adaptive equalization, one histogram per tile, with an optional
//!   clip limit.
//! * [`bhe`]: bi-histogram equalization, split at the mean gray level.
//! * [`rmshe`]: recursive mean-separate equalization, `2^r` sub-ranges.
//! * [`mdhe`]: multi-decomposition equalization. The image is cut into a tile
//!   grid, every tile is equalized, the tiles are put back in place and the
//!   global brightness is pulled back toward the input mean.
//!
//! The [`metrics`] module holds the full-reference quality measures used to
//! compare the methods and [`io`] reads and writes PGM and PNG files.
//!
//! ```
//! use mdhe_core::{che, GrayImage};
//!
//! let img = GrayImage::new(2, 2, vec![0, 0, 255, 255]).unwrap();
//! let out = che(&img);
//! assert_eq!(out.pixels(), &[127, 127, 255, 255]);
//! ```

mod error;
pub mod equalize;
pub mod image;
pub mod io;
pub mod metrics;

pub use crate::equalize::{
    ahe, bhe, che, mdhe, preserve_brightness, range_equalize, rmshe, AheConfig, MdheConfig, Method,
    MethodKind, RmsheDepth,
};
pub use crate::error::{Error, Result};
pub use crate::image::{
    apply_map, compute_cdf, compute_histogram, decompose, mean_intensity, reassemble, Cdf,
    GrayImage, Histogram, IntensityMap, TileGrid, LEVELS,
};
pub use crate::metrics::{full_report, MetricReport, MetricValue};
