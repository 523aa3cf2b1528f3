//! Editorial prompts for cross-attention editing.
//!
//! The editorial prompt is the initial prompt with the culture keyword
//! inserted immediately before every common noun in the body — each
//! element of a noun compound separately — while proper nouns, pronouns,
//! and the style prefix stay untouched. Deleting the inserted tokens
//! recovers the initial prompt exactly, which the attention controller
//! relies on to align the two token sequences.

use serde::{Deserialize, Serialize};

use super::process::STYLE_SUFFIX;
use super::tagger::tag_pos;
use super::{CultureProfile, PromptError};

/// An initial/editorial prompt pair with the inserted token positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditorialPrompt {
    pub initial: String,
    pub editorial: String,
    /// Whitespace-token indices (into `editorial`) of inserted keyword
    /// tokens; removing them reproduces `initial`.
    pub insertions: Vec<usize>,
}

/// Builds the editorial prompt for a keyword-augmented initial prompt.
///
/// The body is everything after the `childrens book style,` marker; a
/// prompt without the marker is treated as all body. Errors with
/// [`PromptError::NoNouns`] when there is no insertion site, in which case
/// callers fall back to plain keyword generation.
pub fn build_editorial_prompt(
    initial: &str,
    culture: &CultureProfile,
) -> Result<EditorialPrompt, PromptError> {
    let marker = format!("{STYLE_SUFFIX},");
    let (prefix, body) = match initial.find(&marker) {
        Some(pos) => {
            let split = pos + marker.len();
            (&initial[..split], initial[split..].trim_start())
        }
        None => ("", initial),
    };

    let noun_starts: Vec<usize> = tag_pos(body)
        .into_iter()
        .filter(|t| t.tag.is_common_noun())
        .map(|t| t.char_span.start)
        .collect();
    if noun_starts.is_empty() {
        return Err(PromptError::NoNouns);
    }

    let keyword_tokens: Vec<&str> = culture.editorial_keyword.split_whitespace().collect();
    let mut out_tokens: Vec<&str> = prefix.split_whitespace().collect();
    let mut insertions = Vec::new();

    for token in body.split_whitespace() {
        let start = token.as_ptr() as usize - body.as_ptr() as usize;
        let end = start + token.len();
        if noun_starts.iter().any(|s| (start..end).contains(s)) {
            for kw in &keyword_tokens {
                insertions.push(out_tokens.len());
                out_tokens.push(kw);
            }
        }
        out_tokens.push(token);
    }

    Ok(EditorialPrompt {
        initial: initial.to_string(),
        editorial: out_tokens.join(" "),
        insertions,
    })
}

impl EditorialPrompt {
    /// Deletes the inserted tokens, reproducing the initial prompt modulo
    /// whitespace normalization.
    pub fn strip_insertions(&self) -> String {
        self.editorial
            .split_whitespace()
            .enumerate()
            .filter(|(i, _)| !self.insertions.contains(i))
            .map(|(_, t)| t)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(keyword: &str) -> CultureProfile {
        CultureProfile {
            name: "test".into(),
            prompt_keyword: String::new(),
            editorial_keyword: keyword.into(),
            mask_text: "test".into(),
            mask_multiplier: 1.0,
        }
    }

    #[test]
    fn inserts_before_common_nouns_only() {
        let e = build_editorial_prompt("childrens book style, I can see birds.", &profile("English"))
            .unwrap();
        assert_eq!(e.editorial, "childrens book style, I can see English birds.");
        assert_eq!(e.insertions, vec![6]);
    }

    #[test]
    fn skips_proper_nouns_and_pronouns() {
        let e = build_editorial_prompt(
            "indian childrens book style, He added red bows.",
            &profile("Indian"),
        )
        .unwrap();
        assert_eq!(
            e.editorial,
            "indian childrens book style, He added red Indian bows."
        );
    }

    #[test]
    fn multi_word_keywords_insert_every_token() {
        let e = build_editorial_prompt(
            "middle eastern childrens book style, The wind did not blow.",
            &profile("middle eastern"),
        )
        .unwrap();
        assert_eq!(
            e.editorial,
            "middle eastern childrens book style, The middle eastern wind did not blow."
        );
        assert_eq!(e.insertions, vec![6, 7]);
    }

    #[test]
    fn compound_nouns_take_one_keyword_per_element() {
        let e = build_editorial_prompt(
            "childrens book style, big sea bream got caught.",
            &profile("Japanese"),
        )
        .unwrap();
        assert_eq!(
            e.editorial,
            "childrens book style, big Japanese sea Japanese bream got caught."
        );
    }

    #[test]
    fn no_insertion_site_is_an_error() {
        let err = build_editorial_prompt("childrens book style, He ran.", &profile("Indian"))
            .unwrap_err();
        assert!(matches!(err, PromptError::NoNouns));
    }

    #[test]
    fn round_trip_recovers_the_initial_prompt() {
        for initial in [
            "childrens book style, I can see birds.",
            "indian childrens book style, He added red bows.",
            "middle eastern childrens book style, The wind did not blow.",
            "indian childrens book style, He needed place without trees, he needed breeze.",
        ] {
            let e = build_editorial_prompt(initial, &profile("middle eastern")).unwrap();
            let normalized: String = initial.split_whitespace().collect::<Vec<_>>().join(" ");
            assert_eq!(e.strip_insertions(), normalized);
        }
    }

    #[test]
    fn prompts_without_style_marker_are_all_body() {
        let e = build_editorial_prompt("A photo of an old man sitting", &profile("Indian")).unwrap();
        assert_eq!(e.editorial, "A Indian photo of an old Indian man sitting");
    }
}
