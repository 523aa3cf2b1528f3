//! A compact Penn Treebank part-of-speech tagger.
//!
//! Prompt pruning only needs reliable separation of determiners, pronouns,
//! and nouns in short descriptive sentences, so this tagger combines a
//! closed-class lexicon, a modest open-class lexicon, suffix heuristics,
//! and a handful of contextual patch rules. Unknown words default to `NN`.
//!
//! The tagger is pure and deterministic; one instance can be shared freely
//! across threads.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

/// Penn Treebank tag set (36 word tags) plus punctuation tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum PennTag {
    CC,
    CD,
    DT,
    EX,
    FW,
    IN,
    JJ,
    JJR,
    JJS,
    LS,
    MD,
    NN,
    NNS,
    NNP,
    NNPS,
    PDT,
    POS,
    PRP,
    /// Possessive pronoun, rendered `PRP$`.
    PRPS,
    RB,
    RBR,
    RBS,
    RP,
    SYM,
    TO,
    UH,
    VB,
    VBD,
    VBG,
    VBN,
    VBP,
    VBZ,
    WDT,
    WP,
    /// Possessive wh-pronoun, rendered `WP$`.
    WPS,
    WRB,
    /// Sentence-final punctuation: `.` `!` `?`
    SentFinal,
    Comma,
    Colon,
    LeftParen,
    RightParen,
    Quote,
}

impl PennTag {
    pub fn as_str(self) -> &'static str {
        use PennTag::*;
        match self {
            CC => "CC",
            CD => "CD",
            DT => "DT",
            EX => "EX",
            FW => "FW",
            IN => "IN",
            JJ => "JJ",
            JJR => "JJR",
            JJS => "JJS",
            LS => "LS",
            MD => "MD",
            NN => "NN",
            NNS => "NNS",
            NNP => "NNP",
            NNPS => "NNPS",
            PDT => "PDT",
            POS => "POS",
            PRP => "PRP",
            PRPS => "PRP$",
            RB => "RB",
            RBR => "RBR",
            RBS => "RBS",
            RP => "RP",
            SYM => "SYM",
            TO => "TO",
            UH => "UH",
            VB => "VB",
            VBD => "VBD",
            VBG => "VBG",
            VBN => "VBN",
            VBP => "VBP",
            VBZ => "VBZ",
            WDT => "WDT",
            WP => "WP",
            WPS => "WP$",
            WRB => "WRB",
            SentFinal => ".",
            Comma => ",",
            Colon => ":",
            LeftParen => "(",
            RightParen => ")",
            Quote => "''",
        }
    }

    /// Common noun (`NN`/`NNS`): the insertion sites for editorial prompts.
    pub fn is_common_noun(self) -> bool {
        matches!(self, PennTag::NN | PennTag::NNS)
    }

    pub fn is_punctuation(self) -> bool {
        matches!(
            self,
            PennTag::SentFinal
                | PennTag::Comma
                | PennTag::Colon
                | PennTag::LeftParen
                | PennTag::RightParen
                | PennTag::Quote
        )
    }

    fn is_verb(self) -> bool {
        matches!(
            self,
            PennTag::VB | PennTag::VBD | PennTag::VBG | PennTag::VBN | PennTag::VBP | PennTag::VBZ
        )
    }
}

impl std::fmt::Display for PennTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A token with its tag and byte span in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub text: String,
    pub tag: PennTag,
    pub char_span: Range<usize>,
}

// --- lexicons ---------------------------------------------------------------

static CLOSED_CLASS: LazyLock<HashMap<&'static str, PennTag>> = LazyLock::new(|| {
    use PennTag::*;
    let mut m = HashMap::new();
    let mut add = |tag: PennTag, words: &[&'static str]| {
        for w in words {
            m.insert(*w, tag);
        }
    };
    add(
        DT,
        &[
            "the", "a", "an", "this", "that", "these", "those", "each", "every", "some", "any",
            "no", "another", "either", "neither",
        ],
    );
    add(
        PRP,
        &[
            "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "himself",
            "herself", "itself", "myself", "yourself", "ourselves", "themselves", "someone",
            "anyone", "everyone", "nobody", "everybody", "somebody",
        ],
    );
    add(PRPS, &["my", "your", "his", "its", "our", "their"]);
    add(
        MD,
        &[
            "can", "could", "will", "would", "shall", "should", "may", "might", "must", "cannot",
        ],
    );
    add(
        IN,
        &[
            "in", "on", "at", "by", "for", "with", "without", "of", "from", "into", "onto",
            "over", "under", "near", "after", "before", "behind", "during", "through", "around",
            "about", "above", "below", "between", "beside", "against", "along", "across", "upon",
            "as", "than", "until", "while", "because", "if", "although", "though", "toward",
            "towards", "inside", "outside", "within",
        ],
    );
    add(TO, &["to"]);
    add(CC, &["and", "but", "or", "nor"]);
    add(WRB, &["where", "when", "why", "how"]);
    add(WDT, &["which"]);
    add(WP, &["who", "whom", "what"]);
    add(WPS, &["whose"]);
    add(
        RB,
        &[
            "not", "n't", "very", "too", "so", "right", "away", "here", "now", "then", "never",
            "always", "soon", "again", "also", "just", "still", "often", "once", "twice",
            "instead", "maybe", "perhaps", "quite", "really", "even", "yet", "already", "almost",
            "together", "everywhere", "somewhere", "anywhere", "up", "down", "out", "off",
            "back", "far", "well",
        ],
    );
    add(UH, &["oh", "ah", "wow", "ouch", "hey", "hello", "yes", "hooray"]);
    add(
        CD,
        &[
            "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
            "eleven", "twelve", "twenty", "thirty", "fifty", "hundred", "thousand",
        ],
    );
    add(EX, &["there"]);
    // Copulas and auxiliaries with fixed tags.
    add(VBZ, &["is", "has", "does", "goes", "says"]);
    add(VBP, &["am", "are"]);
    add(VBD, &["was", "were", "had", "did"]);
    add(VB, &["be"]);
    add(VBN, &["been"]);
    add(VBG, &["being"]);
    m
});

/// Irregular simple-past forms; read as VBN after have/be/get auxiliaries.
static IRREGULAR_PAST: LazyLock<std::collections::HashSet<&'static str>> = LazyLock::new(|| {
    [
        "went", "took", "made", "saw", "said", "got", "came", "knew", "thought", "found",
        "told", "left", "flew", "ran", "sat", "stood", "ate", "slept", "swam", "hid", "caught",
        "threw", "heard", "wore", "bought", "brought", "held", "kept", "began", "blew", "drew",
        "gave", "grew", "put", "let", "read", "wrote", "sang", "drank", "fell", "broke",
        "spoke", "rode", "drove", "built", "sent", "lost", "met", "felt", "woke", "slid",
    ]
    .into_iter()
    .collect()
});

/// Participle-only irregular forms.
static IRREGULAR_PARTICIPLE: LazyLock<std::collections::HashSet<&'static str>> =
    LazyLock::new(|| {
        [
            "gone", "taken", "seen", "known", "flown", "thrown", "worn", "given", "grown",
            "written", "sung", "drunk", "fallen", "broken", "spoken", "ridden", "driven",
            "done", "stuck", "hidden", "eaten", "woken", "gotten",
        ]
        .into_iter()
        .collect()
    });

/// Base forms of verbs common in story text; used by the expect-verb rule
/// and for `-s` / `-ed` / `-ing` suffix stemming.
static VERB_BASES: LazyLock<std::collections::HashSet<&'static str>> = LazyLock::new(|| {
    [
        "be", "have", "do", "go", "take", "make", "see", "say", "get", "come", "know", "think",
        "look", "want", "give", "use", "find", "tell", "ask", "work", "seem", "feel", "try",
        "leave", "call", "fly", "run", "walk", "jump", "play", "read", "write", "sit", "stand",
        "eat", "drink", "sleep", "swim", "climb", "hide", "catch", "throw", "put", "let", "hear",
        "visit", "help", "like", "love", "need", "add", "paint", "tie", "blow", "draw", "carry",
        "drop", "wear", "buy", "bring", "hold", "keep", "begin", "start", "stop", "open",
        "close", "turn", "move", "live", "grow", "show", "smile", "laugh", "cry", "sing",
        "dance", "wave", "wait", "watch", "listen", "talk", "speak", "ride", "drive", "build",
        "send", "lose", "meet", "wake", "slide", "happen",
    ]
    .into_iter()
    .collect()
});

static ADJECTIVES: LazyLock<std::collections::HashSet<&'static str>> = LazyLock::new(|| {
    [
        "red", "blue", "green", "yellow", "brown", "black", "white", "grey", "gray", "pink",
        "purple", "orange", "golden", "big", "small", "little", "large", "tall", "short",
        "long", "old", "young", "new", "good", "bad", "great", "happy", "sad", "fine", "nice",
        "perfect", "many", "few", "much", "such", "middle", "eastern", "western", "northern",
        "southern", "polar", "bright", "dark", "warm", "cold", "hot", "windy", "sunny", "rainy",
        "high", "low", "deep", "wide", "full", "empty", "clean", "dirty", "soft", "hard",
        "loud", "quiet", "fast", "slow", "strange", "pretty", "beautiful", "tiny", "huge",
        "same", "other", "own", "next", "last", "first", "second", "whole", "wooden", "paper",
        "favorite", "favourite", "hungry", "tired", "afraid", "ready", "traditional",
    ]
    .into_iter()
    .collect()
});

/// Common nouns frequent in the story corpus; anything here tags as a noun
/// even when the word doubles as a verb.
static NOUNS: LazyLock<std::collections::HashSet<&'static str>> = LazyLock::new(|| {
    [
        "dad", "mum", "mom", "father", "mother", "boy", "girl", "child", "children", "kid",
        "man", "woman", "people", "friend", "family", "village", "house", "home", "garden",
        "tree", "trees", "mango", "kite", "park", "place", "breeze", "wind", "pole",
        "shoulder", "bow", "bows", "star", "stars", "string", "tail", "backyard", "idea",
        "field", "school", "football", "bird", "birds", "bee", "bees", "butterfly",
        "butterflies", "flower", "flowers", "dog", "cat", "fish", "sea", "bream", "boat",
        "line", "water", "coin", "coins", "gold", "hook", "well", "cowshed", "hug", "book",
        "books", "style", "page", "story", "picture", "image", "hat", "dress", "sari",
        "hijab", "hair", "eye", "eyes", "face", "hand", "hands", "skin", "sun", "sky",
        "cloud", "clouds", "grass", "day", "night", "morning", "evening", "time", "year",
        "way", "thing", "things", "word", "words", "name", "door", "window", "room", "table",
        "chair", "floor", "wall", "road", "street", "town", "city", "country", "world",
        "paper", "color", "colour", "art", "kanji", "cartoon", "fisherman", "grandmother",
        "grandma", "grandpa", "pond", "river", "mountain", "forest", "beach", "swing",
        "playground", "ball", "toy", "toys", "food", "fruit", "fruits", "leaf", "leaves",
        "branch", "branches",
    ]
    .into_iter()
    .collect()
});

pub(crate) fn is_adjective_word(word: &str) -> bool {
    ADJECTIVES.contains(word)
}

pub(crate) fn is_determiner_word(word: &str) -> bool {
    matches!(CLOSED_CLASS.get(word), Some(PennTag::DT | PennTag::PRPS))
}

// --- tokenizer --------------------------------------------------------------

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Splits text into word and punctuation tokens with byte spans.
/// Possessive/contraction suffixes (`'s`, `n't`) become their own tokens,
/// matching treebank conventions; hyphenated compounds stay whole.
pub fn tokenize(text: &str) -> Vec<(String, Range<usize>)> {
    let mut tokens = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_word_char(c) {
            let mut j = i + 1;
            while j < chars.len() {
                let (_, cj) = chars[j];
                let internal_mark = (cj == '\'' || cj == '\u{2019}' || cj == '-')
                    && j + 1 < chars.len()
                    && is_word_char(chars[j + 1].1);
                if is_word_char(cj) || internal_mark {
                    j += 1;
                } else {
                    break;
                }
            }
            let end = if j < chars.len() { chars[j].0 } else { text.len() };
            let word = &text[start..end];
            for (piece, span) in split_clitics(word, start) {
                tokens.push((piece, span));
            }
            i = j;
        } else {
            let end = start + c.len_utf8();
            tokens.push((c.to_string(), start..end));
            i += 1;
        }
    }
    tokens
}

fn split_clitics(word: &str, start: usize) -> Vec<(String, Range<usize>)> {
    for apostrophe in ['\'', '\u{2019}'] {
        let possessive = format!("{apostrophe}s");
        if let Some(stem) = word.strip_suffix(&possessive) {
            if !stem.is_empty() {
                let cut = start + stem.len();
                return vec![
                    (stem.to_string(), start..cut),
                    (word[stem.len()..].to_string(), cut..start + word.len()),
                ];
            }
        }
        let negation = format!("n{apostrophe}t");
        if let Some(stem) = word.strip_suffix(&negation) {
            if !stem.is_empty() {
                let cut = start + stem.len();
                return vec![
                    (stem.to_string(), start..cut),
                    (word[stem.len()..].to_string(), cut..start + word.len()),
                ];
            }
        }
    }
    vec![(word.to_string(), start..start + word.len())]
}

// --- tagging ----------------------------------------------------------------

/// Assigns one Penn Treebank tag per token. Offsets cover the input text.
pub fn tag_pos(text: &str) -> Vec<TaggedToken> {
    let tokens = tokenize(text);
    let mut tagged: Vec<TaggedToken> = Vec::with_capacity(tokens.len());
    let mut sentence_start = true;
    // Pending "a verb should follow" evidence from modals, `to`, and
    // do-support; survives intervening adverbs and subject pronouns to
    // handle questions ("could Riley fly").
    let mut expect_verb = false;

    for (idx, (raw, span)) in tokens.iter().enumerate() {
        let tag = tag_one(raw, idx, &tokens, &tagged, sentence_start, &mut expect_verb);
        let lower = raw.to_lowercase();
        match tag {
            PennTag::MD | PennTag::TO => expect_verb = true,
            PennTag::RB | PennTag::NNP | PennTag::PRP => {} // carried across
            _ if matches!(lower.as_str(), "do" | "does" | "did") => expect_verb = true,
            _ => expect_verb = false,
        }
        sentence_start = tag == PennTag::SentFinal;
        tagged.push(TaggedToken {
            text: raw.clone(),
            tag,
            char_span: span.clone(),
        });
    }
    tagged
}

fn tag_one(
    raw: &str,
    idx: usize,
    tokens: &[(String, Range<usize>)],
    tagged: &[TaggedToken],
    sentence_start: bool,
    expect_verb: &mut bool,
) -> PennTag {
    // Punctuation.
    if let Some(tag) = punct_tag(raw) {
        return tag;
    }
    let lower = raw.to_lowercase();

    if raw.chars().all(|c| c.is_ascii_digit()) {
        return PennTag::CD;
    }
    if lower == "'s" || lower == "\u{2019}s" {
        // Pronoun + 's is a contraction of "is"; otherwise possessive.
        let after_pronoun = matches!(tagged.last().map(|t| t.tag), Some(PennTag::PRP));
        return if after_pronoun { PennTag::VBZ } else { PennTag::POS };
    }
    if lower == "n't" || lower == "n\u{2019}t" {
        return PennTag::RB;
    }

    let prev_tag = tagged.last().map(|t| t.tag);
    let noun_context = matches!(
        prev_tag,
        Some(PennTag::DT | PennTag::PRPS | PennTag::JJ | PennTag::CD | PennTag::POS)
    );

    // Contextual refinements of ambiguous closed-class words.
    if lower == "her" {
        let next_is_nounish = tokens
            .get(idx + 1)
            .map(|(w, _)| {
                let wl = w.to_lowercase();
                punct_tag(w).is_none()
                    && !IRREGULAR_PAST.contains(wl.as_str())
                    && !matches!(
                        CLOSED_CLASS.get(wl.as_str()),
                        Some(t) if t.is_verb() || *t == PennTag::MD
                    )
            })
            .unwrap_or(false);
        return if next_is_nounish { PennTag::PRPS } else { PennTag::PRP };
    }
    if lower == "there" {
        let next_is_be = tokens
            .get(idx + 1)
            .map(|(w, _)| matches!(w.to_lowercase().as_str(), "is" | "are" | "was" | "were"))
            .unwrap_or(false);
        return if next_is_be { PennTag::EX } else { PennTag::RB };
    }
    if lower == "one" && matches!(prev_tag, Some(PennTag::DT)) {
        // "no one", "that one": pronoun-like head.
        return PennTag::PRP;
    }
    if lower == "well" {
        // "the well" vs "sang well".
        return if noun_context { PennTag::NN } else { PennTag::RB };
    }
    if matches!(lower.as_str(), "up" | "down" | "out" | "off" | "back")
        && tagged.last().map(|t| t.tag.is_verb()).unwrap_or(false)
    {
        return PennTag::RP;
    }

    // Proper nouns: open-class words capitalized mid-sentence, or
    // sentence-initial capitals unknown to every lexicon.
    let capitalized = raw.chars().next().is_some_and(|c| c.is_uppercase());
    let known = CLOSED_CLASS.contains_key(lower.as_str())
        || IRREGULAR_PAST.contains(lower.as_str())
        || IRREGULAR_PARTICIPLE.contains(lower.as_str())
        || VERB_BASES.contains(lower.as_str())
        || ADJECTIVES.contains(lower.as_str())
        || NOUNS.contains(lower.as_str());
    if capitalized && !sentence_start && !CLOSED_CLASS.contains_key(lower.as_str()) {
        return PennTag::NNP;
    }

    if let Some(tag) = CLOSED_CLASS.get(lower.as_str()) {
        return *tag;
    }

    // Nominal contexts win over verb readings: "the park", "his line".
    if noun_context {
        if ADJECTIVES.contains(lower.as_str()) {
            return PennTag::JJ;
        }
        if !lower.ends_with("ing") || NOUNS.contains(lower.as_str()) {
            return noun_tag(&lower);
        }
    }

    if ADJECTIVES.contains(lower.as_str()) {
        return PennTag::JJ;
    }

    // Expect-verb: modals, `to`, and do-support call for a base form next.
    if *expect_verb && (VERB_BASES.contains(lower.as_str()) || !known) {
        *expect_verb = false;
        if VERB_BASES.contains(lower.as_str()) || looks_verbal(&lower) {
            return PennTag::VB;
        }
    }

    if IRREGULAR_PARTICIPLE.contains(lower.as_str()) {
        return PennTag::VBN;
    }
    if IRREGULAR_PAST.contains(lower.as_str()) {
        return if participle_context(tagged) {
            PennTag::VBN
        } else {
            PennTag::VBD
        };
    }

    if NOUNS.contains(lower.as_str()) {
        return noun_tag(&lower);
    }

    if VERB_BASES.contains(lower.as_str()) {
        // Plural or pronoun subjects take VBP; bare contexts keep VB.
        return match prev_tag {
            Some(PennTag::NNS | PennTag::PRP | PennTag::NNPS) => PennTag::VBP,
            _ => PennTag::VB,
        };
    }

    // Suffix heuristics.
    if let Some(tag) = suffix_tag(&lower, tagged) {
        return tag;
    }

    if capitalized && sentence_start && !known {
        return PennTag::NNP;
    }

    PennTag::NN
}

fn punct_tag(raw: &str) -> Option<PennTag> {
    let mut chars = raw.chars();
    let c = chars.next()?;
    if chars.next().is_some() {
        return None;
    }
    Some(match c {
        '.' | '!' | '?' => PennTag::SentFinal,
        ',' => PennTag::Comma,
        ':' | ';' | '\u{2014}' | '\u{2013}' => PennTag::Colon,
        '(' | '[' => PennTag::LeftParen,
        ')' | ']' => PennTag::RightParen,
        '"' | '\u{201c}' | '\u{201d}' | '\'' | '\u{2018}' | '\u{2019}' | '`' => PennTag::Quote,
        _ if !is_word_char(c) => PennTag::SYM,
        _ => return None,
    })
}

fn noun_tag(lower: &str) -> PennTag {
    if is_plural_form(lower) {
        PennTag::NNS
    } else {
        PennTag::NN
    }
}

fn is_plural_form(lower: &str) -> bool {
    if lower == "children" || lower == "people" || lower == "childrens" {
        return true;
    }
    if !lower.ends_with('s') || lower.len() < 3 {
        return false;
    }
    // -ss nouns (grass, dress) are singular.
    !lower.ends_with("ss")
}

fn looks_verbal(lower: &str) -> bool {
    !lower.ends_with("ness") && !lower.ends_with("tion") && !lower.ends_with("ly")
}

fn participle_context(tagged: &[TaggedToken]) -> bool {
    tagged.iter().rev().take(2).any(|t| {
        t.tag.is_verb()
            && matches!(
                t.text.to_lowercase().as_str(),
                "has" | "have" | "had" | "is" | "are" | "was" | "were" | "got" | "gets" | "get"
            )
    })
}

fn suffix_tag(lower: &str, tagged: &[TaggedToken]) -> Option<PennTag> {
    if lower.ends_with("ly") && lower.len() > 3 {
        return Some(PennTag::RB);
    }
    if lower.ends_with("ing") && lower.len() > 4 {
        return Some(PennTag::VBG);
    }
    if lower.ends_with("ed") && lower.len() > 3 {
        return Some(if participle_context(tagged) {
            PennTag::VBN
        } else {
            PennTag::VBD
        });
    }
    if lower.ends_with("est") && lower.len() > 4 {
        return Some(PennTag::JJS);
    }
    if lower.ends_with("er") && lower.len() > 4 && ADJECTIVES.contains(&lower[..lower.len() - 2]) {
        return Some(PennTag::JJR);
    }
    if lower.ends_with('s') && lower.len() > 2 && !lower.ends_with("ss") {
        let stem = &lower[..lower.len() - 1];
        let stem_es = lower.strip_suffix("es").unwrap_or(stem);
        if VERB_BASES.contains(stem) || VERB_BASES.contains(stem_es) {
            // Verb with a subject to its left reads as VBZ ("Father looks").
            let prev = tagged.last().map(|t| t.tag);
            if matches!(prev, Some(PennTag::NN | PennTag::NNP | PennTag::PRP)) {
                return Some(PennTag::VBZ);
            }
        }
        return Some(PennTag::NNS);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(text: &str) -> Vec<&'static str> {
        tag_pos(text).into_iter().map(|t| t.tag.as_str()).collect()
    }

    fn word_tags(text: &str) -> Vec<&'static str> {
        tag_pos(text)
            .into_iter()
            .filter(|t| !t.tag.is_punctuation())
            .map(|t| t.tag.as_str())
            .collect()
    }

    #[test]
    fn reference_sequences() {
        assert_eq!(word_tags("He added red bows"), vec!["PRP", "VBD", "JJ", "NNS"]);
        assert_eq!(word_tags("the big mango tree"), vec!["DT", "JJ", "NN", "NN"]);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert!(tag_pos("").is_empty());
    }

    #[test]
    fn story_sentences() {
        assert_eq!(
            word_tags("Riley made a paper kite."),
            vec!["NNP", "VBD", "DT", "JJ", "NN"]
        );
        assert_eq!(
            word_tags("The kite got stuck in a tree."),
            vec!["DT", "NN", "VBD", "VBN", "IN", "DT", "NN"]
        );
        assert_eq!(
            word_tags("I can see birds."),
            vec!["PRP", "MD", "VB", "NNS"]
        );
        assert_eq!(
            word_tags("The wind did not blow."),
            vec!["DT", "NN", "VBD", "RB", "VB"]
        );
        assert_eq!(
            word_tags("Where could Riley fly this kite"),
            vec!["WRB", "MD", "NNP", "VB", "DT", "NN"]
        );
        assert_eq!(
            word_tags("Grandma has a big mango tree in her garden."),
            vec!["NNP", "VBZ", "DT", "JJ", "NN", "NN", "IN", "PRP$", "NN"]
        );
        assert_eq!(
            word_tags("Many birds come there."),
            vec!["JJ", "NNS", "VBP", "RB"]
        );
        assert_eq!(
            word_tags("Father looks for me near the well."),
            vec!["NN", "VBZ", "IN", "PRP", "IN", "DT", "NN"]
        );
    }

    #[test]
    fn possessives_split_as_clitics() {
        let toks = tag_pos("We like to visit Grandma's village.");
        let pairs: Vec<(&str, &str)> = toks
            .iter()
            .map(|t| (t.text.as_str(), t.tag.as_str()))
            .collect();
        assert!(pairs.contains(&("Grandma", "NNP")));
        assert!(pairs.contains(&("'s", "POS")));
        assert!(pairs.contains(&("village", "NN")));
        // "to visit" takes the verb reading.
        assert!(pairs.contains(&("visit", "VB")));
    }

    #[test]
    fn spans_cover_the_input() {
        let text = "So he left home right away, carrying a fishing pole on his shoulder.";
        for token in tag_pos(text) {
            assert_eq!(&text[token.char_span.clone()], token.text);
        }
    }

    #[test]
    fn pronoun_contraction_is_a_verb() {
        let toks = tag_pos("It's a kite.");
        let pairs: Vec<(&str, &str)> = toks
            .iter()
            .map(|t| (t.text.as_str(), t.tag.as_str()))
            .collect();
        assert!(pairs.contains(&("It", "PRP")));
        assert!(pairs.contains(&("'s", "VBZ")));
    }

    #[test]
    fn her_disambiguates_on_lookahead() {
        assert_eq!(word_tags("her garden"), vec!["PRP$", "NN"]);
        assert_eq!(
            word_tags("The dog finds her."),
            vec!["DT", "NN", "VBZ", "PRP"]
        );
    }

    #[test]
    fn there_disambiguates_on_lookahead() {
        assert_eq!(word_tags("there is a tree"), vec!["EX", "VBZ", "DT", "NN"]);
        assert_eq!(word_tags("birds come there"), vec!["NNS", "VBP", "RB"]);
    }

    #[test]
    fn punctuation_tags() {
        assert_eq!(tags("(see, kite!)"), vec!["(", "VB", ",", "NN", ".", ")"]);
    }

    #[test]
    fn unknown_words_default_to_noun() {
        assert_eq!(word_tags("the zvorble"), vec!["DT", "NN"]);
        assert_eq!(word_tags("zvorbles"), vec!["NNS"]);
    }
}
