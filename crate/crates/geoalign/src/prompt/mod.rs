//! Prompt construction: POS tagging, page-text processing, keyword
//! augmentation, and editorial prompts for cross-attention editing.

mod editorial;
mod process;
pub mod tagger;

pub use editorial::{build_editorial_prompt, EditorialPrompt};
pub use process::{
    build_method1_prompt, process_page_text, process_page_text_with, ProcessedPrompt,
    TokenCounter, WhitespaceTokenCounter, DEFAULT_TOKEN_BUDGET, STYLE_SUFFIX,
};
pub use tagger::{tag_pos, PennTag, TaggedToken};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-culture configuration for the three generation pathways.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CultureProfile {
    pub name: String,
    /// Keyword prefixed to prompts; empty means the bare style prefix is
    /// used (the generator's native language needs no locale keyword).
    #[serde(default)]
    pub prompt_keyword: String,
    /// Keyword inserted before common nouns in editorial prompts.
    pub editorial_keyword: String,
    /// Text embedded to build the culture mask; may be non-Latin script.
    pub mask_text: String,
    pub mask_multiplier: f64,
}

impl CultureProfile {
    /// Profiles shipped with the tool.
    pub fn defaults() -> Vec<CultureProfile> {
        vec![
            CultureProfile {
                name: "indian".into(),
                prompt_keyword: "indian".into(),
                editorial_keyword: "Indian".into(),
                mask_text: "\u{092d}\u{093e}\u{0930}\u{0924}\u{0940}\u{092f} \u{0915}\u{093e}\u{0930}\u{094d}\u{091f}\u{0942}\u{0928} style".into(),
                mask_multiplier: 3.0,
            },
            CultureProfile {
                name: "japanese".into(),
                prompt_keyword: "japanese".into(),
                editorial_keyword: "Japanese".into(),
                mask_text: "\u{65e5}\u{672c}\u{753b}".into(),
                mask_multiplier: 0.2,
            },
            CultureProfile {
                name: "middle_eastern".into(),
                prompt_keyword: "middle eastern".into(),
                editorial_keyword: "middle eastern".into(),
                mask_text: "\u{0643}\u{0627}\u{0631}\u{062a}\u{0648}\u{0646} \u{0639}\u{0631}\u{0628}\u{064a}".into(),
                mask_multiplier: 0.3,
            },
            CultureProfile {
                name: "uk".into(),
                prompt_keyword: String::new(),
                editorial_keyword: "English".into(),
                mask_text: "english cartoon".into(),
                mask_multiplier: 0.2,
            },
        ]
    }

    pub fn validate(&self) -> Result<(), PromptError> {
        if self.name.trim().is_empty() {
            return Err(PromptError::InvalidProfile("name must be non-empty".into()));
        }
        if !self.mask_multiplier.is_finite() {
            return Err(PromptError::InvalidProfile(format!(
                "profile {}: mask_multiplier must be finite",
                self.name
            )));
        }
        Ok(())
    }
}

/// Loads culture profiles from a YAML or JSON file (a list of records).
pub fn load_profiles(path: &Path) -> Result<Vec<CultureProfile>, PromptError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| PromptError::InvalidProfile(format!("{}: {e}", path.display())))?;
    let profiles: Vec<CultureProfile> = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&raw)
            .map_err(|e| PromptError::InvalidProfile(format!("{}: {e}", path.display())))?
    } else {
        serde_yaml::from_str(&raw)
            .map_err(|e| PromptError::InvalidProfile(format!("{}: {e}", path.display())))?
    };
    let mut seen = std::collections::HashSet::new();
    for profile in &profiles {
        profile.validate()?;
        if !seen.insert(profile.name.clone()) {
            return Err(PromptError::InvalidProfile(format!(
                "duplicate profile name {}",
                profile.name
            )));
        }
    }
    Ok(profiles)
}

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("no prefix of even one clause fits the token budget of {budget}")]
    BudgetUnsatisfiable { budget: usize },
    #[error("prompt needs {count} tokens, exceeding the budget of {budget}")]
    BudgetExceeded { budget: usize, count: usize },
    #[error("no common-noun insertion site in prompt")]
    NoNouns,
    #[error("invalid culture profile: {0}")]
    InvalidProfile(String),
}
