//! Scenario files shipped with the binary.

pub struct Entry {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal) => {
        Entry { name: $name, text: include_str!(concat!("../examples/", $name, ".toml")) }
    };
}

pub const GALLERY: &[Entry] = &[
    entry!("theorem1-dyadic"),
    entry!("corollary1-geometric-box"),
    entry!("parabola-shear-image"),
    entry!("parabola-radial-segment"),
    entry!("parabola-radial-triangle"),
    entry!("remark2-square-ball"),
    entry!("gustin-sharpness"),
];

pub fn find(name: &str) -> Option<&'static Entry> {
    let name = name.strip_suffix(".toml").unwrap_or(name);
    GALLERY.iter().find(|e| e.name == name)
}
