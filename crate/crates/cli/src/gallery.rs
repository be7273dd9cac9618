//! Bundled example configurations, runnable by name.

use crate::config::JobConfig;
use crate::CliError;

const GALLERY: &[(&str, &str)] = &[
    ("gf4-unitary", include_str!("../gallery/gf4-unitary.json")),
    ("m2f2-gl-rank-one", include_str!("../gallery/m2f2-gl-rank-one.json")),
    ("m2f2-gl-unitary", include_str!("../gallery/m2f2-gl-unitary.json")),
    ("m2f2-perm-c4", include_str!("../gallery/m2f2-perm-c4.json")),
    ("m2f3-gl-gcd", include_str!("../gallery/m2f3-gl-gcd.json")),
    ("m2f3-sl-unitary", include_str!("../gallery/m2f3-sl-unitary.json")),
    ("m2f5-sl-unitary", include_str!("../gallery/m2f5-sl-unitary.json")),
    ("m2f7-sl-unitary", include_str!("../gallery/m2f7-sl-unitary.json")),
    ("m2gf4-gl-units", include_str!("../gallery/m2gf4-gl-units.json")),
    ("m2z4-gcd-charpoly", include_str!("../gallery/m2z4-gcd-charpoly.json")),
    ("m3f2-gl-classes", include_str!("../gallery/m3f2-gl-classes.json")),
    ("z2xf3-unitary", include_str!("../gallery/z2xf3-unitary.json")),
    ("z2xz2-unitary", include_str!("../gallery/z2xz2-unitary.json")),
    ("z4-c4-pst", include_str!("../gallery/z4-c4-pst.json")),
    ("z4-units", include_str!("../gallery/z4-units.json")),
    ("z5-pm1-cyclotomic", include_str!("../gallery/z5-pm1-cyclotomic.json")),
];

#[derive(Clone, Copy, Debug)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub source: &'static str,
}

impl GalleryEntry {
    pub fn config(&self) -> JobConfig {
        JobConfig::parse(self.source).unwrap_or_else(|e| panic!("bundled config {} is invalid: {e}", self.name))
    }

    pub fn description(&self) -> String {
        self.config().description.unwrap_or_default()
    }
}

pub fn entries() -> impl Iterator<Item = GalleryEntry> {
    GALLERY.iter().map(|&(name, source)| GalleryEntry { name, source })
}

pub fn find(name: &str) -> Result<GalleryEntry, CliError> {
    entries().find(|e| e.name == name).ok_or_else(|| CliError::Validation {
        field: "name".into(),
        message: format!("no bundled example named {name}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_match_configs() {
        assert!(entries().count() >= 10);
        for e in entries() {
            assert_eq!(e.config().name.as_deref(), Some(e.name));
            assert!(!e.description().is_empty());
        }
    }

    #[test]
    fn configs_round_trip() {
        for e in entries() {
            let c = e.config();
            assert_eq!(JobConfig::parse(&c.to_json()).unwrap(), c, "{}", e.name);
        }
    }
}
