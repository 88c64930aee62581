//! The fixed 13-class sound event vocabulary.
//!
//! Class indices are the dataset convention; every module that needs a
//! class id or name goes through this table so the mapping lives in one
//! place.

pub const NUM_CLASSES: usize = 13;

pub const CLASS_NAMES: [&str; NUM_CLASSES] = [
    "female_speech",
    "male_speech",
    "clapping",
    "telephone",
    "laughter",
    "domestic_sounds",
    "footsteps",
    "door",
    "music",
    "musical_instrument",
    "water_tap",
    "bell",
    "knock",
];

pub fn class_name(class_id: usize) -> Option<&'static str> {
    CLASS_NAMES.get(class_id).copied()
}

/// Look up a class id by name. Matching ignores case, spaces, underscores
/// and hyphens, so `"Water tap"`, `"water_tap"` and `"watertap"` all
/// resolve to the same id.
pub fn class_id_by_name(name: &str) -> Option<usize> {
    let needle = normalize(name);
    CLASS_NAMES.iter().position(|n| normalize(n) == needle)
}

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, ' ' | '_' | '-'))
        .map(|c| c.to_ascii_lowercase())
        .collect()
}
