//! Page-text suitability lints.
//!
//! Story text works best for generation when each page describes its scene
//! on its own: no questions or dialogue, no first-person narration, no
//! unresolved backward references, English only, within the prompt token
//! budget, and with human rather than animal protagonists. The lints flag
//! violations of these criteria. They are advisory: a flagged page still
//! loads and translates.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::prompt::tagger::{is_adjective_word, is_determiner_word};

/// Lint categories, one per suitability criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LintCode {
    Question,
    Dialogue,
    FirstPerson,
    UnresolvedPronoun,
    NonEnglish,
    TooLong,
    NonHumanHint,
}

impl LintCode {
    pub fn as_str(self) -> &'static str {
        match self {
            LintCode::Question => "QUESTION",
            LintCode::Dialogue => "DIALOGUE",
            LintCode::FirstPerson => "FIRST_PERSON",
            LintCode::UnresolvedPronoun => "UNRESOLVED_PRONOUN",
            LintCode::NonEnglish => "NON_ENGLISH",
            LintCode::TooLong => "TOO_LONG",
            LintCode::NonHumanHint => "NON_HUMAN_HINT",
        }
    }
}

/// A single lint hit within a page's text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    /// Page the finding belongs to; 0 when produced by [`lint_page`] on bare
    /// text, filled in by [`lint_book`].
    pub page_index: u32,
    pub code: LintCode,
    /// Byte range in the page text containing the triggering token.
    pub span: Range<usize>,
    pub message: String,
}

/// Lints a single page text. Pure and deterministic; findings are reported
/// per occurrence in text order.
pub fn lint_page(text: &str, token_budget: usize) -> Vec<LintFinding> {
    let mut findings = Vec::new();
    find_questions(text, &mut findings);
    find_dialogue(text, &mut findings);
    find_first_person(text, &mut findings);
    find_unresolved_pronoun(text, &mut findings);
    find_non_english(text, &mut findings);
    find_too_long(text, token_budget, &mut findings);
    find_non_human_hint(text, &mut findings);
    findings.sort_by(|a, b| (a.span.start, a.code.as_str()).cmp(&(b.span.start, b.code.as_str())));
    findings
}

/// Lints every page of a book, tagging findings with page indices.
pub fn lint_book(book: &crate::corpus::Book, token_budget: usize) -> Vec<LintFinding> {
    let mut all = Vec::new();
    for page in &book.pages {
        for mut finding in lint_page(&page.text, token_budget) {
            finding.page_index = page.index;
            all.push(finding);
        }
    }
    all
}

fn finding(code: LintCode, span: Range<usize>, message: impl Into<String>) -> LintFinding {
    LintFinding {
        page_index: 0,
        code,
        span,
        message: message.into(),
    }
}

fn find_questions(text: &str, out: &mut Vec<LintFinding>) {
    for (pos, _) in text.match_indices('?') {
        out.push(finding(
            LintCode::Question,
            pos..pos + 1,
            "question mark in page text",
        ));
    }
}

const QUOTE_CHARS: [char; 3] = ['"', '\u{201c}', '\u{201d}'];

fn find_dialogue(text: &str, out: &mut Vec<LintFinding>) {
    let mut open: Option<usize> = None;
    for (pos, ch) in text.char_indices() {
        if !QUOTE_CHARS.contains(&ch) {
            continue;
        }
        match open.take() {
            Some(start) => out.push(finding(
                LintCode::Dialogue,
                start..pos + ch.len_utf8(),
                "quoted dialogue in page text",
            )),
            None => open = Some(pos),
        }
    }
}

fn find_first_person(text: &str, out: &mut Vec<LintFinding>) {
    for (word, span) in words_with_spans(text) {
        let is_first_person = word == "I"
            || matches!(
                word.to_ascii_lowercase().as_str(),
                "my" | "me" | "we" | "our"
            );
        if is_first_person {
            out.push(finding(
                LintCode::FirstPerson,
                span,
                format!("first-person token \"{word}\""),
            ));
        }
    }
}

const THIRD_PERSON_OPENERS: [&str; 6] = ["he", "she", "it", "they", "his", "her"];

fn find_unresolved_pronoun(text: &str, out: &mut Vec<LintFinding>) {
    let Some((word, span)) = words_with_spans(first_sentence(text)).next() else {
        return;
    };
    if THIRD_PERSON_OPENERS.contains(&word.to_ascii_lowercase().as_str()) {
        out.push(finding(
            LintCode::UnresolvedPronoun,
            span,
            format!("page opens with third-person pronoun \"{word}\" whose referent is off-page"),
        ));
    }
}

fn find_non_english(text: &str, out: &mut Vec<LintFinding>) {
    let mut run: Option<Range<usize>> = None;
    for (pos, ch) in text.char_indices() {
        if ch.is_alphabetic() && !ch.is_ascii() {
            let end = pos + ch.len_utf8();
            run = match run.take() {
                Some(r) if r.end == pos => Some(r.start..end),
                Some(r) => {
                    out.push(finding(
                        LintCode::NonEnglish,
                        r,
                        "letters outside basic Latin",
                    ));
                    Some(pos..end)
                }
                None => Some(pos..end),
            };
        }
    }
    if let Some(r) = run {
        out.push(finding(
            LintCode::NonEnglish,
            r,
            "letters outside basic Latin",
        ));
    }
}

fn find_too_long(text: &str, token_budget: usize, out: &mut Vec<LintFinding>) {
    let mut tokens = text.split_whitespace();
    let count = text.split_whitespace().count();
    if count <= token_budget {
        return;
    }
    let overflow_token = tokens.nth(token_budget).unwrap();
    let start = overflow_token.as_ptr() as usize - text.as_ptr() as usize;
    out.push(finding(
        LintCode::TooLong,
        start..text.len(),
        format!("{count} tokens exceed the budget of {token_budget}"),
    ));
}

/// Animal nouns that hint at a non-human protagonist.
const ANIMAL_NOUNS: [&str; 40] = [
    "bear", "bee", "bees", "bird", "birds", "bunny", "cat", "chicken", "cow", "dog", "dragon",
    "duck", "elephant", "fish", "fox", "frog", "giraffe", "hen", "horse", "kitten", "lion",
    "monkey", "mouse", "owl", "pig", "pony", "puppy", "rabbit", "seal", "sheep", "snake",
    "spider", "squirrel", "tiger", "turtle", "whale", "wolf", "zebra", "bream", "crab",
];

fn find_non_human_hint(text: &str, out: &mut Vec<LintFinding>) {
    // Subject heuristic: the first sentence's head noun, after skipping
    // determiners, possessives, adjectives, and question/modal openers.
    for (word, span) in words_with_spans(first_sentence(text)) {
        let lower = word.to_ascii_lowercase();
        if is_determiner_word(&lower)
            || is_adjective_word(&lower)
            || matches!(
                lower.as_str(),
                "where" | "when" | "why" | "how" | "what" | "who" | "could" | "can" | "will"
                    | "would" | "there" | "here" | "once"
            )
        {
            continue;
        }
        if ANIMAL_NOUNS.contains(&lower.as_str()) {
            out.push(finding(
                LintCode::NonHumanHint,
                span,
                format!("animal noun \"{word}\" as sentence subject"),
            ));
        }
        return;
    }
}

fn first_sentence(text: &str) -> &str {
    match text.find(['.', '!', '?']) {
        Some(end) => &text[..=end],
        None => text,
    }
}

fn words_with_spans(text: &str) -> impl Iterator<Item = (&str, Range<usize>)> {
    text.split_whitespace().map(move |raw| {
        let start = raw.as_ptr() as usize - text.as_ptr() as usize;
        let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'');
        if trimmed.is_empty() {
            (raw, start..start + raw.len())
        } else {
            let offset = raw.find(trimmed).unwrap_or(0);
            (
                trimmed,
                start + offset..start + offset + trimmed.len(),
            )
        }
    })
}
