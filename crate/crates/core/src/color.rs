//! Order-of-magnitude color (OMC) scheme and band palettes.
//!
//! Colors are handled as HSL triples with hue in degrees and saturation and
//! lightness in [0, 1]. Tones inside a decade vary only the lightness channel,
//! so the hue of a value identifies its exponent.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::{MagnitudeRange, MagnitudeValue};
use crate::math;

/// Hue used by the classic horizon graph ramp.
pub const HORIZON_HUE: f64 = 212.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hsl {
    pub hue: f64,
    pub saturation: f64,
    pub lightness: f64,
}

impl Hsl {
    pub fn new(hue: f64, saturation: f64, lightness: f64) -> Self {
        Self {
            hue,
            saturation,
            lightness,
        }
    }

    pub fn to_rgb(&self) -> [u8; 3] {
        let h = math::rem_euclid(self.hue, 360.0) / 60.0;
        let s = self.saturation.clamp(0.0, 1.0);
        let l = self.lightness.clamp(0.0, 1.0);
        let chroma = (1.0 - math::abs(2.0 * l - 1.0)) * s;
        let x = chroma * (1.0 - math::abs(math::rem_euclid(h, 2.0) - 1.0));
        let (r, g, b) = match h as u32 {
            0 => (chroma, x, 0.0),
            1 => (x, chroma, 0.0),
            2 => (0.0, chroma, x),
            3 => (0.0, x, chroma),
            4 => (x, 0.0, chroma),
            _ => (chroma, 0.0, x),
        };
        let m = l - chroma / 2.0;
        let channel = |c: f64| math::round((c + m) * 255.0).clamp(0.0, 255.0) as u8;
        [channel(r), channel(g), channel(b)]
    }

    /// `#rrggbb`, the form written into SVG documents and legends.
    pub fn to_hex(&self) -> String {
        let [r, g, b] = self.to_rgb();
        let mut out = String::with_capacity(7);
        let _ = write!(out, "#{r:02x}{g:02x}{b:02x}");
        out
    }
}

/// Hues, tones and saturation ramp for the OMC scheme and the OMH bands.
///
/// `hues[i]` belongs to exponent `e_min + i` of the target range. The default
/// covers five decades with hues 60 degrees apart running from purple to
/// orange, which keeps pure red and green out of the same palette.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmcPalette {
    pub hues: Vec<f64>,
    /// `(lightest, darkest)` lightness for mantissa 1 and mantissa 10.
    pub tone_range: (f64, f64),
    /// Saturation of each OMH band, strictly increasing with magnitude.
    pub saturation_ramp: Vec<f64>,
    /// Saturation used for OMC fills.
    #[serde(default = "default_omc_saturation")]
    pub saturation: f64,
}

fn default_omc_saturation() -> f64 {
    0.7
}

impl Default for OmcPalette {
    fn default() -> Self {
        Self {
            hues: alloc::vec![280.0, 220.0, 160.0, 100.0, 40.0],
            tone_range: (0.85, 0.35),
            saturation_ramp: alloc::vec![0.25, 0.4, 0.55, 0.7, 0.85],
            saturation: default_omc_saturation(),
        }
    }
}

impl OmcPalette {
    /// Palette for `n` decades: hues evenly spaced over the 280..40 degree arc
    /// and a linear saturation ramp from 0.25 to 0.85.
    pub fn evenly_spaced(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPalette("palette needs at least one hue"));
        }
        let step = |i: usize| {
            if n == 1 {
                0.0
            } else {
                i as f64 / (n - 1) as f64
            }
        };
        Ok(Self {
            hues: (0..n)
                .map(|i| math::rem_euclid(280.0 - 240.0 * step(i), 360.0))
                .collect(),
            saturation_ramp: (0..n).map(|i| 0.25 + 0.6 * step(i)).collect(),
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.hues.is_empty() {
            return Err(Error::InvalidPalette("palette needs at least one hue"));
        }
        if self.hues.len() != self.saturation_ramp.len() {
            return Err(Error::InvalidPalette(
                "hues and saturation ramp must have the same length",
            ));
        }
        if self.hues.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidPalette("hues must be finite"));
        }
        for (i, a) in self.hues.iter().enumerate() {
            if self.hues[i + 1..]
                .iter()
                .any(|b| math::rem_euclid(*a, 360.0) == math::rem_euclid(*b, 360.0))
            {
                return Err(Error::InvalidPalette("hues must be pairwise distinct"));
            }
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !self.saturation_ramp.iter().all(|&s| unit(s)) || !unit(self.saturation) {
            return Err(Error::InvalidPalette(
                "saturation values must lie in [0, 1]",
            ));
        }
        if self.saturation_ramp.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPalette(
                "saturation ramp must be strictly increasing",
            ));
        }
        let (lightest, darkest) = self.tone_range;
        if !(unit(lightest) && unit(darkest) && lightest > darkest) {
            return Err(Error::InvalidPalette(
                "tone range must satisfy 1 >= lightest > darkest >= 0",
            ));
        }
        Ok(())
    }

    /// Number of decades the palette can color.
    pub fn len(&self) -> usize {
        self.hues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hues.is_empty()
    }

    pub fn covers(&self, range: MagnitudeRange) -> bool {
        self.hues.len() >= range.decades()
    }

    /// Lightness at mantissa fraction `t` (0 at m = 1, 1 at m = 10).
    fn tone(&self, t: f64) -> f64 {
        let (lightest, darkest) = self.tone_range;
        lightest + (darkest - lightest) * t.clamp(0.0, 1.0)
    }
}

/// OMC color of a decomposed value: exponent picks the hue, mantissa the tone.
pub fn omc_color(mv: &MagnitudeValue, palette: &OmcPalette, range: MagnitudeRange) -> Result<Hsl> {
    let slot = mv.exponent - range.e_min();
    if mv.exponent > range.e_max() || slot < 0 || slot as usize >= palette.hues.len() {
        return Err(Error::ExponentOutOfPalette {
            exponent: mv.exponent,
        });
    }
    Ok(Hsl::new(
        palette.hues[slot as usize],
        palette.saturation,
        palette.tone(mv.mantissa_fraction()),
    ))
}

/// Flat fill of OMH band `band_index`; higher bands are more saturated.
pub fn omh_band_color(band_index: usize, palette: &OmcPalette) -> Result<Hsl> {
    let bands = palette.saturation_ramp.len().min(palette.hues.len());
    if band_index >= bands {
        return Err(Error::BandOutOfRange {
            index: band_index,
            bands,
        });
    }
    let (lightest, darkest) = palette.tone_range;
    Ok(Hsl::new(
        palette.hues[band_index],
        palette.saturation_ramp[band_index],
        (lightest + darkest) / 2.0,
    ))
}

/// Single-hue blue ramp for the classic horizon graph, light to dark.
pub fn horizon_band_color(band_index: usize, n_bands: usize) -> Result<Hsl> {
    if band_index >= n_bands {
        return Err(Error::BandOutOfRange {
            index: band_index,
            bands: n_bands,
        });
    }
    let t = if n_bands == 1 {
        1.0
    } else {
        band_index as f64 / (n_bands - 1) as f64
    };
    Ok(Hsl::new(HORIZON_HUE, 0.35 + 0.5 * t, 0.78 - 0.42 * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnitude::decompose;

    fn mv(m: f64, e: i32) -> MagnitudeValue {
        MagnitudeValue {
            value: m * 10f64.powi(e),
            mantissa: m,
            exponent: e,
        }
    }

    #[test]
    fn default_palette_is_valid() {
        let p = OmcPalette::default();
        p.validate().unwrap();
        assert!(p.covers(MagnitudeRange::STUDY));
        OmcPalette::evenly_spaced(7).unwrap().validate().unwrap();
        OmcPalette::evenly_spaced(1).unwrap().validate().unwrap();
    }

    #[test]
    fn omc_endpoints_and_midpoint() {
        let p = OmcPalette::default();
        let r = MagnitudeRange::STUDY;
        let low = omc_color(&mv(1.0, 0), &p, r).unwrap();
        assert_eq!(low.hue, p.hues[0]);
        assert_eq!(low.lightness, p.tone_range.0);

        let high = omc_color(&mv(10.0, 4), &p, r).unwrap();
        assert_eq!(high.hue, p.hues[4]);
        assert_eq!(high.lightness, p.tone_range.1);

        let mid = omc_color(&mv(5.5, 2), &p, r).unwrap();
        assert_eq!(mid.hue, p.hues[2]);
        let expected = (p.tone_range.0 + p.tone_range.1) / 2.0;
        assert!((mid.lightness - expected).abs() < 1e-15);
    }

    #[test]
    fn omc_rejects_exponent_outside_range() {
        let p = OmcPalette::default();
        let r = MagnitudeRange::STUDY;
        assert!(omc_color(&decompose(100_000.0).unwrap(), &p, r).is_err());
        assert!(omc_color(&decompose(0.5).unwrap(), &p, r).is_err());
        let wide = MagnitudeRange::new(0, 6).unwrap();
        assert!(omc_color(&mv(2.0, 6), &p, wide).is_err());
    }

    #[test]
    fn omh_band_saturation_increases() {
        let p = OmcPalette::default();
        let colors: Vec<_> = (0..5).map(|i| omh_band_color(i, &p).unwrap()).collect();
        assert!(colors.windows(2).all(|w| w[0].saturation < w[1].saturation));
        assert_eq!(colors[0].saturation, 0.25);
        assert_eq!(colors[4].saturation, 0.85);
        assert!(matches!(
            omh_band_color(5, &p),
            Err(Error::BandOutOfRange { index: 5, bands: 5 })
        ));
    }

    #[test]
    fn horizon_ramp_is_light_to_dark_and_distinct() {
        let c: Vec<_> = (0..3).map(|i| horizon_band_color(i, 3).unwrap()).collect();
        assert!(c[0].lightness > c[1].lightness && c[1].lightness > c[2].lightness);
        assert!(c.iter().all(|x| x.hue == HORIZON_HUE));
        assert_ne!(c[0].to_hex(), c[1].to_hex());
        assert_ne!(c[1].to_hex(), c[2].to_hex());
        assert_ne!(c[0].to_hex(), c[2].to_hex());
        assert!(horizon_band_color(3, 3).is_err());
    }

    #[test]
    fn hex_conversion() {
        assert_eq!(Hsl::new(0.0, 1.0, 0.5).to_hex(), "#ff0000");
        assert_eq!(Hsl::new(120.0, 1.0, 0.5).to_hex(), "#00ff00");
        assert_eq!(Hsl::new(240.0, 1.0, 0.5).to_hex(), "#0000ff");
        assert_eq!(Hsl::new(0.0, 0.0, 1.0).to_hex(), "#ffffff");
        assert_eq!(Hsl::new(200.0, 0.0, 0.0).to_hex(), "#000000");
    }

    #[test]
    fn palette_validation_failures() {
        let mut p = OmcPalette::default();
        p.hues[1] = p.hues[0];
        assert!(p.validate().is_err());

        let mut p = OmcPalette::default();
        p.saturation_ramp[2] = 0.1;
        assert!(p.validate().is_err());

        let p = OmcPalette {
            tone_range: (0.3, 0.6),
            ..OmcPalette::default()
        };
        assert!(p.validate().is_err());
    }
}
