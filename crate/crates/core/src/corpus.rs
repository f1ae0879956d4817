//! Corpus ingestion and generation.
//!
//! The on-disk format is a plain UTF-8 text file, hand-writable and
//! diff-friendly:
//!
//! ```text
//! # comment
//! @doc <name>
//! <surface> <senseCount> <sentenceIndex> <gold>
//! ```
//!
//! Fields on a word line are separated by single ASCII spaces; `<gold>` is a
//! 0-based sense index or `-` for an unannotated word. Sense indices are
//! 0-based everywhere. Blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::document::{Document, WordSlot};
use crate::error::{Error, Result};
use crate::rng::seed_rng;
use crate::scorer::GoldStandard;

/// A set of documents with their gold annotations, aligned by index.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusFile {
    pub documents: Vec<Document>,
    pub golds: Vec<GoldStandard>,
}

impl CorpusFile {
    pub fn new(documents: Vec<Document>, golds: Vec<GoldStandard>) -> Result<Self> {
        if documents.len() != golds.len() {
            return Err(Error::Validation(format!(
                "{} documents but {} gold standards",
                documents.len(),
                golds.len()
            )));
        }
        for (doc, gold) in documents.iter().zip(&golds) {
            gold.validate(doc)?;
        }
        Ok(Self { documents, golds })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut documents = Vec::new();
        let mut golds = Vec::new();
        let mut current_name: Option<String> = None;
        let mut words: Vec<WordSlot> = Vec::new();
        let mut gold: Vec<Option<usize>> = Vec::new();

        let close_doc = |name: Option<String>,
                             words: &mut Vec<WordSlot>,
                             gold: &mut Vec<Option<usize>>,
                             documents: &mut Vec<Document>,
                             golds: &mut Vec<GoldStandard>|
         -> Result<()> {
            if let Some(name) = name {
                let doc = Document::new(name, std::mem::take(words))?;
                let gold = GoldStandard::new(std::mem::take(gold));
                gold.validate(&doc)?;
                documents.push(doc);
                golds.push(gold);
            }
            Ok(())
        };

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix("@doc ") {
                close_doc(
                    current_name.take(),
                    &mut words,
                    &mut gold,
                    &mut documents,
                    &mut golds,
                )?;
                current_name = Some(name.to_string());
                continue;
            }
            if line == "@doc" {
                return Err(Error::Parse {
                    line: line_no,
                    message: "@doc requires a name".into(),
                });
            }
            if current_name.is_none() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "word line before any @doc header".into(),
                });
            }
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "expected `surface senseCount sentenceIndex gold`, got {} fields",
                        fields.len()
                    ),
                });
            }
            let sense_count: usize = fields[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad sense count {:?}", fields[1]),
            })?;
            let sentence_index: usize = fields[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad sentence index {:?}", fields[2]),
            })?;
            let gold_entry = if fields[3] == "-" {
                None
            } else {
                Some(fields[3].parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad gold sense {:?}", fields[3]),
                })?)
            };
            words.push(WordSlot {
                surface: fields[0].to_string(),
                sense_count,
                sentence_index,
            });
            gold.push(gold_entry);
        }
        close_doc(
            current_name.take(),
            &mut words,
            &mut gold,
            &mut documents,
            &mut golds,
        )?;
        CorpusFile::new(documents, golds)
    }

    /// Serializes to the exact on-disk format; `load(save(c)) == c`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (doc, gold) in self.documents.iter().zip(&self.golds) {
            writeln!(out, "@doc {}", doc.name()).unwrap();
            for (slot, entry) in doc.words().iter().zip(gold.assignments()) {
                match entry {
                    Some(sense) => writeln!(
                        out,
                        "{} {} {} {}",
                        slot.surface, slot.sense_count, slot.sentence_index, sense
                    )
                    .unwrap(),
                    None => writeln!(
                        out,
                        "{} {} {} -",
                        slot.surface, slot.sense_count, slot.sentence_index
                    )
                    .unwrap(),
                }
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.serialize())?;
        Ok(())
    }

    /// Total word count across documents.
    pub fn word_count(&self) -> usize {
        self.documents.iter().map(Document::len).sum()
    }
}

/// Generates a seeded synthetic corpus: per word, a sense count uniform in
/// `[1, max_senses]`, a gold sense uniform in its range, and sentence indices
/// in blocks of `sentence_length` words.
pub fn generate_corpus(
    doc_count: usize,
    words_per_doc: usize,
    max_senses: usize,
    sentence_length: usize,
    seed: u64,
) -> Result<CorpusFile> {
    if doc_count == 0 || words_per_doc == 0 || max_senses == 0 || sentence_length == 0 {
        return Err(Error::InvalidInput(
            "corpus generation requires positive counts".into(),
        ));
    }
    let mut rng = seed_rng(seed);
    let mut documents = Vec::with_capacity(doc_count);
    let mut golds = Vec::with_capacity(doc_count);
    for d in 0..doc_count {
        let mut words = Vec::with_capacity(words_per_doc);
        let mut gold = Vec::with_capacity(words_per_doc);
        for w in 0..words_per_doc {
            let sense_count = rng.random_range(1..=max_senses);
            let gold_sense = rng.random_range(0..sense_count);
            words.push(WordSlot {
                surface: format!("w{w}"),
                sense_count,
                sentence_index: w / sentence_length,
            });
            gold.push(Some(gold_sense));
        }
        documents.push(Document::new(format!("doc{d}"), words)?);
        golds.push(GoldStandard::new(gold));
    }
    CorpusFile::new(documents, golds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_file_parses() {
        let corpus = CorpusFile::parse("@doc tiny\ndog 3 0 1\n").unwrap();
        assert_eq!(corpus.documents.len(), 1);
        let doc = &corpus.documents[0];
        assert_eq!(doc.name(), "tiny");
        assert_eq!(doc.len(), 1);
        assert_eq!(doc.words()[0].surface, "dog");
        assert_eq!(doc.words()[0].sense_count, 3);
        assert_eq!(doc.words()[0].sentence_index, 0);
        assert_eq!(corpus.golds[0].assignments(), &[Some(1)]);
    }

    #[test]
    fn dash_marks_unannotated() {
        let corpus = CorpusFile::parse("@doc d\ncat 2 0 -\n").unwrap();
        assert_eq!(corpus.golds[0].assignments(), &[None]);
        assert_eq!(corpus.golds[0].annotated(), 0);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a comment\n\n@doc d\n# another\nrun 2 0 0\n\n";
        let corpus = CorpusFile::parse(text).unwrap();
        assert_eq!(corpus.documents[0].len(), 1);
    }

    #[test]
    fn out_of_range_gold_names_the_word() {
        let err = CorpusFile::parse("@doc d\ndog 3 0 3\n").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("word 0"), "unexpected message: {message}");
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let err = CorpusFile::parse("@doc d\ndog 3 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = CorpusFile::parse("dog 3 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = CorpusFile::parse("@doc d\ndog x 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn zero_sense_count_is_rejected() {
        assert!(CorpusFile::parse("@doc d\ndog 0 0 -\n").is_err());
    }

    #[test]
    fn decreasing_sentence_indices_are_rejected() {
        assert!(CorpusFile::parse("@doc d\na 2 1 0\nb 2 0 0\n").is_err());
    }

    #[test]
    fn generation_is_deterministic_and_byte_stable() {
        let a = generate_corpus(2, 30, 5, 7, 99).unwrap();
        let b = generate_corpus(2, 30, 5, 7, 99).unwrap();
        assert_eq!(a.serialize(), b.serialize());
        let c = generate_corpus(2, 30, 5, 7, 100).unwrap();
        assert_ne!(a.serialize(), c.serialize());
    }

    #[test]
    fn generated_corpora_respect_requested_shape() {
        let corpus = generate_corpus(1, 500, 5, 10, 1).unwrap();
        let doc = &corpus.documents[0];
        assert_eq!(doc.len(), 500);
        assert!(doc.words().iter().all(|w| (1..=5).contains(&w.sense_count)));
        assert_eq!(doc.sentence_count(), 50);
        assert_eq!(corpus.golds[0].annotated(), 500);
    }

    #[test]
    fn degenerate_single_configuration_space() {
        let corpus = generate_corpus(1, 1, 1, 1, 5).unwrap();
        assert_eq!(corpus.documents[0].space_size(), 1);
        let cfg = crate::document::Configuration::new(vec![0]);
        assert_eq!(crate::scorer::f1(&cfg, &corpus.golds[0]).unwrap(), 1.0);
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(
            doc_count in 1usize..4,
            words in 1usize..40,
            max_senses in 1usize..7,
            sentence_length in 1usize..9,
            seed in 0u64..500,
        ) {
            let corpus =
                generate_corpus(doc_count, words, max_senses, sentence_length, seed).unwrap();
            let parsed = CorpusFile::parse(&corpus.serialize()).unwrap();
            prop_assert_eq!(parsed, corpus);
        }
    }
}
