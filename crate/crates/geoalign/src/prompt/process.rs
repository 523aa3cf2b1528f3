//! The page-text processing pipeline.
//!
//! Raw story text makes a poor prompt: question and exclamation marks skew
//! token weighting, brackets de-weight their contents, coordinating
//! conjunctions waste tokens, and determiners add nothing the generator
//! uses. The pipeline therefore, in order:
//!
//! 1. strips `?` `!` `(` `)` (commas and periods are kept — they separate
//!    ideas in prompts exactly as in prose),
//! 2. replaces the coordinating conjunctions `and`, `but`, `yet` with
//!    commas, collapsing any duplicates this creates,
//! 3. POS-tags the text,
//! 4. removes the determiners `the`, `a`, `an` while retaining possessive
//!    pronouns, which carry character information the prompt needs,
//! 5. enforces the token budget, truncating at the latest sentence
//!    boundary that fits, else the latest clause boundary.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::tagger::{tag_pos, PennTag};
use super::{CultureProfile, PromptError};

/// The generator's text encoder accepts 75 content tokens.
pub const DEFAULT_TOKEN_BUDGET: usize = 75;

/// Fixed style suffix following the culture keyword in every prompt.
pub const STYLE_SUFFIX: &str = "childrens book style";

/// Counts prompt tokens against the budget. Generation backends expose
/// their own tokenizer through this trait; the fallback counts whitespace
/// tokens.
pub trait TokenCounter {
    fn count_tokens(&self, text: &str) -> usize;
}

/// Budget counting by whitespace tokens.
#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceTokenCounter;

impl TokenCounter for WhitespaceTokenCounter {
    fn count_tokens(&self, text: &str) -> usize {
        text.split_whitespace().count()
    }
}

/// Output of the processing pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessedPrompt {
    pub body: String,
    pub token_count: usize,
    /// Determiners removed and conjunctions replaced, with their tags.
    pub removed_tokens: Vec<(String, PennTag)>,
    pub truncated: bool,
}

static BANNED: [char; 4] = ['?', '!', '(', ')'];

static CONJUNCTIONS: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(and|but|yet)\b").unwrap());
static WHITESPACE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+").unwrap());
static SPACE_BEFORE_COMMA: LazyLock<Regex> = LazyLock::new(|| Regex::new(r" +,").unwrap());
static DUP_COMMAS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r",( *,)+").unwrap());
static COMMA_PERIOD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r", *\.").unwrap());
static PERIOD_COMMA: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\. *, *").unwrap());
static LEADING_COMMA: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^ *, *").unwrap());
static TRAILING_COMMA: LazyLock<Regex> = LazyLock::new(|| Regex::new(r", *$").unwrap());

/// Runs the pipeline with whitespace token counting.
pub fn process_page_text(text: &str, budget: usize) -> Result<ProcessedPrompt, PromptError> {
    process_page_text_with(text, budget, &WhitespaceTokenCounter)
}

/// Runs the pipeline with the given token counter.
pub fn process_page_text_with(
    text: &str,
    budget: usize,
    counter: &dyn TokenCounter,
) -> Result<ProcessedPrompt, PromptError> {
    let mut removed_tokens = Vec::new();

    // 1. Banned punctuation.
    let stripped: String = text.chars().filter(|c| !BANNED.contains(c)).collect();

    // 2. Conjunction replacement and comma tidying.
    for m in CONJUNCTIONS.find_iter(&stripped) {
        removed_tokens.push((m.as_str().to_string(), PennTag::CC));
    }
    let replaced = CONJUNCTIONS.replace_all(&stripped, ",");
    let cleaned = normalize_punctuation(&replaced);

    // 3-4. Tag and drop articles.
    let tagged = tag_pos(&cleaned);
    let mut body = String::with_capacity(cleaned.len());
    let mut cursor = 0;
    for token in &tagged {
        if token.tag == PennTag::DT
            && matches!(token.text.to_lowercase().as_str(), "the" | "a" | "an")
        {
            body.push_str(&cleaned[cursor..token.char_span.start]);
            cursor = token.char_span.end;
            // Swallow the following space so deletion leaves no gap.
            if cleaned[cursor..].starts_with(' ') {
                cursor += 1;
            }
            removed_tokens.push((token.text.clone(), PennTag::DT));
        }
    }
    body.push_str(&cleaned[cursor..]);
    let body = normalize_punctuation(&body);

    // 5. Budget.
    let count = counter.count_tokens(&body);
    if count <= budget {
        return Ok(ProcessedPrompt {
            body,
            token_count: count,
            removed_tokens,
            truncated: false,
        });
    }
    let truncated_body = truncate_to_budget(&body, budget, counter)
        .ok_or(PromptError::BudgetUnsatisfiable { budget })?;
    let token_count = counter.count_tokens(&truncated_body);
    Ok(ProcessedPrompt {
        body: truncated_body,
        token_count,
        removed_tokens,
        truncated: true,
    })
}

fn normalize_punctuation(s: &str) -> String {
    let s = WHITESPACE.replace_all(s, " ");
    let s = SPACE_BEFORE_COMMA.replace_all(&s, ",");
    let s = DUP_COMMAS.replace_all(&s, ",");
    let s = COMMA_PERIOD.replace_all(&s, ".");
    let s = PERIOD_COMMA.replace_all(&s, ". ");
    let s = LEADING_COMMA.replace_all(&s, "");
    let s = TRAILING_COMMA.replace_all(&s, "");
    s.trim().to_string()
}

/// Cuts at the latest sentence boundary that fits the budget, else the
/// latest clause boundary. Returns `None` when not even one clause fits.
fn truncate_to_budget(body: &str, budget: usize, counter: &dyn TokenCounter) -> Option<String> {
    let sentence_cuts: Vec<usize> = body
        .match_indices('.')
        .map(|(i, _)| i + 1)
        .filter(|end| *end < body.len())
        .collect();
    for cut in sentence_cuts.iter().rev() {
        let candidate = body[..*cut].trim();
        if counter.count_tokens(candidate) <= budget {
            return Some(candidate.to_string());
        }
    }
    let clause_cuts: Vec<usize> = body.match_indices(',').map(|(i, _)| i).collect();
    for cut in clause_cuts.iter().rev() {
        let candidate = body[..*cut].trim();
        if !candidate.is_empty() && counter.count_tokens(candidate) <= budget {
            return Some(candidate.to_string());
        }
    }
    None
}

/// Builds the final keyword-augmented prompt: `<keyword> childrens book
/// style, <body>`. An empty keyword collapses to the bare style prefix.
/// Prefix tokens count against the budget and are never truncated.
pub fn build_method1_prompt(
    processed: &ProcessedPrompt,
    culture: &CultureProfile,
    budget: usize,
) -> Result<String, PromptError> {
    build_method1_prompt_with(processed, culture, budget, &WhitespaceTokenCounter)
}

pub fn build_method1_prompt_with(
    processed: &ProcessedPrompt,
    culture: &CultureProfile,
    budget: usize,
    counter: &dyn TokenCounter,
) -> Result<String, PromptError> {
    let prefix = style_prefix(culture);
    let prompt = if processed.body.is_empty() {
        prefix
    } else {
        format!("{prefix}, {}", processed.body)
    };
    let count = counter.count_tokens(&prompt);
    if count > budget {
        return Err(PromptError::BudgetExceeded { budget, count });
    }
    Ok(prompt)
}

/// `<keyword> childrens book style`, or the bare suffix for an empty
/// keyword.
pub fn style_prefix(culture: &CultureProfile) -> String {
    let keyword = culture.prompt_keyword.trim();
    if keyword.is_empty() {
        STYLE_SUFFIX.to_string()
    } else {
        format!("{keyword} {STYLE_SUFFIX}")
    }
}
