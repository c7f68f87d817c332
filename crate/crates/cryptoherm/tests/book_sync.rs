//! The guide's code is the library's code.
//!
//! Every `rust` snippet in the book is required to be a verbatim copy
//! (up to whitespace) of a doc-test in the library sources. Doc-tests
//! compile and run on every `cargo test`, so this containment check is what
//! keeps the book's examples guaranteed-correct without compiling the book
//! separately.

use std::fs;
use std::path::{Path, PathBuf};

fn book_src() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src")
}

fn crate_src() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("src")
}

/// All ```rust fenced blocks in a markdown file, fences excluded.
fn rust_blocks(markdown: &str) -> Vec<String> {
    let mut blocks = Vec::new();
    let mut current: Option<String> = None;
    for line in markdown.lines() {
        let trimmed = line.trim();
        match &mut current {
            None if trimmed.starts_with("```rust") => current = Some(String::new()),
            None => {}
            Some(block) => {
                if trimmed.starts_with("```") {
                    blocks.push(std::mem::take(block));
                    current = None;
                } else {
                    block.push_str(line);
                    block.push('\n');
                }
            }
        }
    }
    assert!(current.is_none(), "unterminated code fence");
    blocks
}

/// Concatenated doc-comment text of one source file, comment markers
/// stripped.
fn doc_comment_text(source: &str) -> String {
    let mut text = String::new();
    for line in source.lines() {
        let trimmed = line.trim_start();
        for marker in ["//!", "///"] {
            if let Some(rest) = trimmed.strip_prefix(marker) {
                text.push_str(rest.strip_prefix(' ').unwrap_or(rest));
                text.push('\n');
                break;
            }
        }
    }
    text
}

fn without_whitespace(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[test]
fn every_book_snippet_is_a_library_doc_test() {
    let mut corpus = String::new();
    for entry in fs::read_dir(crate_src()).expect("library source directory") {
        let path = entry.expect("directory entry").path();
        if path.extension().is_some_and(|e| e == "rs") {
            let source = fs::read_to_string(&path).expect("readable source file");
            corpus.push_str(&doc_comment_text(&source));
        }
    }
    let corpus = without_whitespace(&corpus);
    assert!(!corpus.is_empty(), "no doc comments found");

    let mut snippets = 0usize;
    for entry in fs::read_dir(book_src()).expect("book source directory") {
        let path = entry.expect("directory entry").path();
        if !path.extension().is_some_and(|e| e == "md") {
            continue;
        }
        let chapter = fs::read_to_string(&path).expect("readable chapter");
        for block in rust_blocks(&chapter) {
            let needle = without_whitespace(&block);
            assert!(
                corpus.contains(&needle),
                "snippet in {} is not a doc-test in the library sources:\n{block}",
                path.display()
            );
            snippets += 1;
        }
    }
    assert!(
        snippets >= 6,
        "expected the book to carry at least 6 rust snippets, found {snippets}"
    );
}

#[test]
fn every_summary_chapter_exists() {
    let summary = fs::read_to_string(book_src().join("SUMMARY.md")).expect("SUMMARY.md");
    let mut chapters = 0usize;
    for line in summary.lines() {
        let Some(open) = line.find("](") else { continue };
        let rest = &line[open + 2..];
        let Some(close) = rest.find(')') else { continue };
        let target = book_src().join(&rest[..close]);
        assert!(target.is_file(), "SUMMARY.md links to missing {}", target.display());
        chapters += 1;
    }
    assert!(chapters >= 6, "SUMMARY.md lists only {chapters} chapters");
}
