//! Lowercase slug identifiers used as stable keys for classes, properties
//! and individuals.

/// Turns a display label into a slug: ASCII alphanumerics are lowercased,
/// every other run of characters collapses into a single hyphen.
///
/// Returns an empty string when the label has no ASCII alphanumerics.
pub fn slugify(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut pending_hyphen = false;
    for ch in label.chars() {
        if ch.is_ascii_alphanumeric() {
            if pending_hyphen && !out.is_empty() {
                out.push('-');
            }
            pending_hyphen = false;
            out.push(ch.to_ascii_lowercase());
        } else {
            pending_hyphen = true;
        }
    }
    out
}

/// `true` when `id` is non-empty and made only of `[a-z0-9-]`.
pub fn is_valid_slug(id: &str) -> bool {
    !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}
