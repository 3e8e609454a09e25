//! Text normalization: Turkish-aware lowercasing and the tweet cleaning pass.

use unicode_normalization::UnicodeNormalization;

use super::scan::{hashtag_spans, mention_spans, remove_spans, url_spans};

/// Lowercases with the Turkish dotted/dotless rule: `I` → `ı`, `İ` → `i`.
pub fn turkish_lowercase(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'I' => out.push('ı'),
            'İ' => out.push('i'),
            _ => out.extend(c.to_lowercase()),
        }
    }
    out
}

/// Case-folds a hashtag or query tag: both `I` and `İ` become `i`, all else
/// lowercases normally. Tags are matching keys, so ASCII-typed and
/// Turkish-typed capitals must land on the same key.
pub fn fold_tag_case(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'I' | 'İ' => out.push('i'),
            _ => out.extend(c.to_lowercase()),
        }
    }
    out
}

/// Characters that make up emoji and emoji presentation sequences.
fn is_emoji_component(c: char) -> bool {
    matches!(c as u32,
        0x1F000..=0x1FAFF   // pictographs, emoticons, flags, skin tones
        | 0x2190..=0x21FF   // arrows
        | 0x2300..=0x23FF
        | 0x2460..=0x24FF   // enclosed alphanumerics
        | 0x25A0..=0x27BF   // shapes, misc symbols, dingbats
        | 0x2900..=0x297F
        | 0x2B00..=0x2BFF
        | 0x3030 | 0x303D | 0x3297 | 0x3299
        | 0x200D            // zero-width joiner
        | 0x20E3            // combining keycap
        | 0xFE00..=0xFE0F   // variation selectors
        | 0xE0020..=0xE007F // tag characters
    )
}

/// Removes keycap sequences such as `1️⃣` whole so the base digit goes too.
fn drop_keycaps(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if matches!(c, '0'..='9' | '#' | '*') {
            let mut j = i + 1;
            if chars.get(j) == Some(&'\u{FE0F}') {
                j += 1;
            }
            if chars.get(j) == Some(&'\u{20E3}') {
                i = j + 1;
                continue;
            }
        }
        out.push(c);
        i += 1;
    }
    out
}

fn keep_in_clean_text(c: char) -> bool {
    c.is_whitespace() || (c.is_alphanumeric() && !c.is_uppercase())
}

/// Cleans raw tweet text.
///
/// In order: URLs are removed, `@`-mentions are removed, `#` is stripped from
/// hashtags (the word is kept), emoji are removed, Turkish lowercasing is
/// applied, every remaining punctuation or symbol character is deleted, and
/// whitespace is collapsed to single spaces.
///
/// Removals delete characters rather than substituting spaces, so the
/// whitespace-token count of the result never exceeds that of the input.
pub fn clean_text(raw: &str) -> String {
    let text: String = raw.nfc().collect();

    let text = remove_spans(&text, url_spans(&text));
    let text = remove_spans(&text, mention_spans(&text).into_iter().map(|m| m.span));
    let text = remove_spans(
        &text,
        hashtag_spans(&text).into_iter().map(|h| h.span.start..h.span.start + 1),
    );

    let text = drop_keycaps(&text);
    let text: String = text.chars().filter(|c| !is_emoji_component(*c)).collect();

    let text: String = turkish_lowercase(&text).nfc().collect();
    let text: String = text.chars().filter(|c| keep_in_clean_text(*c)).collect();

    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
