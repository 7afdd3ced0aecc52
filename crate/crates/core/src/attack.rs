//! Region-overwrite attack simulation.
//!
//! An attack overwrites a rectangular region of one channel, either with a
//! constant or with the co-located samples of another channel. Coordinates
//! are 1-based and inclusive on both ends, matching how such edits are
//! usually described ("rows 238-241, columns 300-303" = a 4x4 patch).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_model::{merge_channels, split_channels, RgbImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Red => "red",
            Channel::Green => "green",
            Channel::Blue => "blue",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "red" => Ok(Channel::Red),
            "green" => Ok(Channel::Green),
            "blue" => Ok(Channel::Blue),
            other => Err(Error::InvalidAttackSpec(format!(
                "unknown channel {other:?} (expected red, green or blue)"
            ))),
        }
    }
}

/// How the region is overwritten.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackMode {
    /// Set every sample in the region to a constant.
    #[serde(rename = "fill")]
    ConstantFill { value: u8 },
    /// Copy the co-located samples of another channel.
    #[serde(rename = "copy")]
    CopyChannel { source: Channel },
}

/// A validated attack description. Row/column ranges are 1-based inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub target: Channel,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub mode: AttackMode,
}

impl AttackSpec {
    pub fn new(
        target: Channel,
        rows: (usize, usize),
        cols: (usize, usize),
        mode: AttackMode,
    ) -> Result<Self> {
        if rows.0 == 0 || cols.0 == 0 {
            return Err(Error::InvalidAttackSpec(
                "coordinates are 1-based; 0 is not a valid row or column".into(),
            ));
        }
        if rows.0 > rows.1 || cols.0 > cols.1 {
            return Err(Error::InvalidAttackSpec(format!(
                "range start exceeds end: rows {}..={}, cols {}..={}",
                rows.0, rows.1, cols.0, cols.1
            )));
        }
        if let AttackMode::CopyChannel { source } = mode {
            if source == target {
                return Err(Error::InvalidAttackSpec(format!(
                    "copy source and target are both {target}"
                )));
            }
        }
        Ok(Self { target, rows, cols, mode })
    }

    /// Parses the declarative spec-file format:
    ///
    /// ```text
    /// # overwrite a 4x4 patch of the blue channel
    /// target = blue
    /// mode   = fill:255        # or copy:green
    /// rows   = 238..241        # 1-based inclusive; 238:241 also accepted
    /// cols   = 300..303
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        fn set_once<T>(slot: &mut Option<T>, value: T, key: &str) -> Result<()> {
            if slot.is_some() {
                return Err(Error::InvalidAttackSpec(format!("duplicate key {key:?}")));
            }
            *slot = Some(value);
            Ok(())
        }

        let mut target = None;
        let mut mode = None;
        let mut rows = None;
        let mut cols = None;
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidAttackSpec(format!("line {}: expected key = value", index + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "target" => set_once(&mut target, value.parse::<Channel>()?, key)?,
                "mode" => set_once(&mut mode, parse_mode(value)?, key)?,
                "rows" => set_once(&mut rows, parse_range(value)?, key)?,
                "cols" => set_once(&mut cols, parse_range(value)?, key)?,
                other => {
                    return Err(Error::InvalidAttackSpec(format!("unknown key {other:?}")));
                }
            }
        }

        let missing = |key: &str| Error::InvalidAttackSpec(format!("missing key {key:?}"));
        Self::new(
            target.ok_or_else(|| missing("target"))?,
            rows.ok_or_else(|| missing("rows"))?,
            cols.ok_or_else(|| missing("cols"))?,
            mode.ok_or_else(|| missing("mode"))?,
        )
    }

    /// Errors unless the region lies fully inside a `height x width` image.
    pub fn validate_within(&self, height: usize, width: usize) -> Result<()> {
        if self.rows.1 > height || self.cols.1 > width {
            return Err(Error::RegionOutOfBounds {
                r1: self.rows.0,
                r2: self.rows.1,
                c1: self.cols.0,
                c2: self.cols.1,
                rows: height,
                cols: width,
            });
        }
        Ok(())
    }

    /// Intersects the region with the image bounds, erroring when nothing is
    /// left. Used for presets, whose fixed coordinates may exceed a small
    /// image.
    pub fn clipped_to(&self, height: usize, width: usize) -> Result<Self> {
        let rows = (self.rows.0, self.rows.1.min(height));
        let cols = (self.cols.0, self.cols.1.min(width));
        if rows.0 > rows.1 || cols.0 > cols.1 {
            return Err(Error::RegionOutOfBounds {
                r1: self.rows.0,
                r2: self.rows.1,
                c1: self.cols.0,
                c2: self.cols.1,
                rows: height,
                cols: width,
            });
        }
        Self::new(self.target, rows, cols, self.mode)
    }
}

fn parse_mode(value: &str) -> Result<AttackMode> {
    let (kind, arg) = value.split_once(':').ok_or_else(|| {
        Error::InvalidAttackSpec(format!(
            "mode {value:?} must be fill:<0-255> or copy:<channel>"
        ))
    })?;
    match kind.trim() {
        "fill" => {
            let value = arg.trim().parse::<u8>().map_err(|_| {
                Error::InvalidAttackSpec(format!("fill value {arg:?} must be 0-255"))
            })?;
            Ok(AttackMode::ConstantFill { value })
        }
        "copy" => Ok(AttackMode::CopyChannel { source: arg.trim().parse()? }),
        other => Err(Error::InvalidAttackSpec(format!(
            "unknown mode {other:?} (expected fill or copy)"
        ))),
    }
}

fn parse_range(value: &str) -> Result<(usize, usize)> {
    let parts = value
        .split_once("..")
        .or_else(|| value.split_once(':'))
        .ok_or_else(|| {
            Error::InvalidAttackSpec(format!("range {value:?} must look like 238..241 or 238:241"))
        })?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidAttackSpec(format!("bad range bound {s:?}")))
    };
    Ok((parse(parts.0)?, parse(parts.1)?))
}

/// Overwrites the region described by `spec`, leaving every other sample
/// bit-identical. The region must lie inside the image.
pub fn apply_attack(image: &RgbImage, spec: &AttackSpec) -> Result<RgbImage> {
    spec.validate_within(image.height(), image.width())?;
    let (mut red, mut green, mut blue) = split_channels(image);
    {
        let target = match spec.target {
            Channel::Red => &mut red,
            Channel::Green => &mut green,
            Channel::Blue => &mut blue,
        };
        for r in spec.rows.0 - 1..spec.rows.1 {
            for c in spec.cols.0 - 1..spec.cols.1 {
                let value = match spec.mode {
                    AttackMode::ConstantFill { value } => value,
                    AttackMode::CopyChannel { source } => match source {
                        Channel::Red => image.red().get(r, c),
                        Channel::Green => image.green().get(r, c),
                        Channel::Blue => image.blue().get(r, c),
                    },
                };
                target.set(r, c, value);
            }
        }
    }
    merge_channels(red, green, blue)
}

/// Names of the built-in demonstration attacks, each a 4x4 overwrite of the
/// red or blue channel.
pub const PRESET_NAMES: [&str; 6] = ["fig9a", "fig10a", "fig10b", "fig11a", "fig12b", "fig13b"];

/// Looks up a built-in attack by name. Returns the canonical (unclipped)
/// spec; combine with [`AttackSpec::clipped_to`] for small images.
pub fn preset(name: &str) -> Option<AttackSpec> {
    let spec = match name {
        "fig9a" => AttackSpec::new(
            Channel::Red,
            (238, 241),
            (300, 303),
            AttackMode::CopyChannel { source: Channel::Blue },
        ),
        "fig10a" => AttackSpec::new(
            Channel::Blue,
            (238, 241),
            (300, 303),
            AttackMode::ConstantFill { value: 255 },
        ),
        "fig10b" => AttackSpec::new(
            Channel::Blue,
            (238, 241),
            (300, 303),
            AttackMode::CopyChannel { source: Channel::Green },
        ),
        "fig11a" => AttackSpec::new(
            Channel::Blue,
            (138, 141),
            (200, 203),
            AttackMode::CopyChannel { source: Channel::Green },
        ),
        "fig12b" => AttackSpec::new(
            Channel::Red,
            (238, 241),
            (300, 303),
            AttackMode::ConstantFill { value: 255 },
        ),
        "fig13b" => AttackSpec::new(
            Channel::Blue,
            (238, 241),
            (200, 203),
            AttackMode::ConstantFill { value: 255 },
        ),
        _ => return None,
    };
    Some(spec.expect("built-in presets are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image() -> RgbImage {
        RgbImage::from_fn(8, 8, |r, c| ((r * 8 + c) as u8, 100, (c * 10) as u8)).unwrap()
    }

    #[test]
    fn constructor_validates() {
        let fill = AttackMode::ConstantFill { value: 0 };
        assert!(AttackSpec::new(Channel::Red, (0, 4), (1, 4), fill).is_err());
        assert!(AttackSpec::new(Channel::Red, (1, 4), (0, 4), fill).is_err());
        assert!(AttackSpec::new(Channel::Red, (4, 1), (1, 4), fill).is_err());
        assert!(AttackSpec::new(
            Channel::Red,
            (1, 4),
            (1, 4),
            AttackMode::CopyChannel { source: Channel::Red }
        )
        .is_err());
        assert!(AttackSpec::new(Channel::Red, (1, 1), (1, 1), fill).is_ok());
    }

    #[test]
    fn fill_changes_exactly_the_region() {
        let img = image();
        let spec =
            AttackSpec::new(Channel::Blue, (1, 4), (1, 4), AttackMode::ConstantFill { value: 255 })
                .unwrap();
        let out = apply_attack(&img, &spec).unwrap();
        assert_eq!(out.red(), img.red());
        assert_eq!(out.green(), img.green());
        let mut changed = 0;
        for r in 0..8 {
            for c in 0..8 {
                if r < 4 && c < 4 {
                    assert_eq!(out.blue().get(r, c), 255);
                    if img.blue().get(r, c) != 255 {
                        changed += 1;
                    }
                } else {
                    assert_eq!(out.blue().get(r, c), img.blue().get(r, c));
                }
            }
        }
        assert!(changed > 0 && changed <= 16);
    }

    #[test]
    fn copy_takes_co_located_source_samples() {
        let img = image();
        let spec = AttackSpec::new(
            Channel::Red,
            (3, 5),
            (2, 7),
            AttackMode::CopyChannel { source: Channel::Blue },
        )
        .unwrap();
        let out = apply_attack(&img, &spec).unwrap();
        for r in 2..5 {
            for c in 1..7 {
                assert_eq!(out.red().get(r, c), img.blue().get(r, c));
            }
        }
        assert_eq!(out.red().get(0, 0), img.red().get(0, 0));
        assert_eq!(out.blue(), img.blue());
    }

    #[test]
    fn constant_fill_is_idempotent() {
        let img = image();
        let spec =
            AttackSpec::new(Channel::Green, (2, 6), (2, 6), AttackMode::ConstantFill { value: 7 })
                .unwrap();
        let once = apply_attack(&img, &spec).unwrap();
        let twice = apply_attack(&once, &spec).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn noop_fill_leaves_image_unchanged() {
        let img = RgbImage::from_fn(8, 8, |_, _| (1, 2, 3)).unwrap();
        let spec =
            AttackSpec::new(Channel::Blue, (1, 8), (1, 8), AttackMode::ConstantFill { value: 3 })
                .unwrap();
        assert_eq!(apply_attack(&img, &spec).unwrap(), img);
    }

    #[test]
    fn out_of_bounds_region_errors() {
        let img = image();
        let spec =
            AttackSpec::new(Channel::Red, (1, 9), (1, 4), AttackMode::ConstantFill { value: 0 })
                .unwrap();
        assert!(matches!(
            apply_attack(&img, &spec),
            Err(Error::RegionOutOfBounds { .. })
        ));
    }

    #[test]
    fn single_pixel_region_is_one_based() {
        let img = image();
        let spec =
            AttackSpec::new(Channel::Red, (1, 1), (1, 1), AttackMode::ConstantFill { value: 200 })
                .unwrap();
        let out = apply_attack(&img, &spec).unwrap();
        assert_eq!(out.red().get(0, 0), 200);
        assert_eq!(out.red().get(0, 1), img.red().get(0, 1));
        assert_eq!(out.red().get(1, 0), img.red().get(1, 0));
    }

    #[test]
    fn parse_accepts_both_range_separators_and_comments() {
        let text = "\
# blue patch
target = blue
mode   = fill:255   # saturate
rows   = 238..241
cols   = 300:303
";
        let spec = AttackSpec::parse(text).unwrap();
        assert_eq!(
            spec,
            AttackSpec::new(
                Channel::Blue,
                (238, 241),
                (300, 303),
                AttackMode::ConstantFill { value: 255 }
            )
            .unwrap()
        );
    }

    #[test]
    fn parse_copy_mode() {
        let spec = AttackSpec::parse("target=red\nmode=copy:blue\nrows=1:2\ncols=3:4").unwrap();
        assert_eq!(spec.mode, AttackMode::CopyChannel { source: Channel::Blue });
    }

    #[test]
    fn parse_rejects_malformed_input() {
        let cases = [
            "target=blue\nmode=fill:255\nrows=1..2",               // missing cols
            "target=blue\nmode=fill:255\nrows=1..2\ncols=3..4\ntarget=red", // duplicate
            "target=blue\nmode=fill:256\nrows=1..2\ncols=3..4",    // fill out of range
            "target=blue\nmode=fill\nrows=1..2\ncols=3..4",        // no mode argument
            "target=blue\nmode=copy:blue\nrows=1..2\ncols=3..4",   // copy onto itself
            "target=cyan\nmode=fill:0\nrows=1..2\ncols=3..4",      // unknown channel
            "target=blue\nmode=fill:0\nrows=2..1\ncols=3..4",      // reversed range
            "target=blue\nmode=fill:0\nrows=1..2\ncols=3..4\nxyz=1", // unknown key
            "just some words",                                      // not key=value
            "target=blue\nmode=fill:0\nrows=a..b\ncols=3..4",      // non-numeric
        ];
        for text in cases {
            assert!(AttackSpec::parse(text).is_err(), "accepted: {text:?}");
        }
    }

    #[test]
    fn clipping_respects_bounds() {
        let spec = preset("fig10a").unwrap();
        let same = spec.clipped_to(480, 640).unwrap();
        assert_eq!(same, spec);
        let clipped = spec.clipped_to(240, 640).unwrap();
        assert_eq!(clipped.rows, (238, 240));
        assert_eq!(clipped.cols, (300, 303));
        assert!(spec.clipped_to(100, 100).is_err());
    }

    #[test]
    fn presets_cover_the_catalog() {
        for name in PRESET_NAMES {
            let spec = preset(name).unwrap_or_else(|| panic!("missing preset {name}"));
            assert!(spec.validate_within(480, 640).is_ok(), "{name} exceeds 480x640");
            assert_ne!(spec.target, Channel::Green, "{name} must touch a covered channel");
        }
        assert!(preset("fig99z").is_none());

        let fig10a = preset("fig10a").unwrap();
        assert_eq!(fig10a.target, Channel::Blue);
        assert_eq!(fig10a.mode, AttackMode::ConstantFill { value: 255 });
        assert_eq!((fig10a.rows, fig10a.cols), ((238, 241), (300, 303)));

        let fig11a = preset("fig11a").unwrap();
        assert_eq!(fig11a.mode, AttackMode::CopyChannel { source: Channel::Green });
        assert_eq!((fig11a.rows, fig11a.cols), ((138, 141), (200, 203)));
    }
}
