//! Source positions for diagnostics and constraint provenance.

use serde::Serialize;
use std::fmt;

/// Identifies a source file within a checking session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FileId(pub u32);

/// A byte range in a source file, with the line/column of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub file: FileId,
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(file: FileId, start: usize, end: usize, line: u32, col: u32) -> Span {
        debug_assert!(start <= end);
        Span { file, start, end, line, col }
    }

    /// A span for nodes synthesized by the compiler itself.
    pub fn synthetic() -> Span {
        Span { file: FileId(u32::MAX), start: 0, end: 0, line: 0, col: 0 }
    }

    pub fn is_synthetic(&self) -> bool {
        self.file.0 == u32::MAX
    }

    /// Smallest span covering both `self` and `other`.
    pub fn merge(self, other: Span) -> Span {
        if self.is_synthetic() {
            return other;
        }
        if other.is_synthetic() || self.file != other.file {
            return self;
        }
        let (line, col) = if self.start <= other.start {
            (self.line, self.col)
        } else {
            (other.line, other.col)
        };
        Span {
            file: self.file,
            start: self.start.min(other.start),
            end: self.end.max(other.end),
            line,
            col,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_synthetic() {
            write!(f, "<builtin>")
        } else {
            write!(f, "{}:{}", self.line, self.col)
        }
    }
}

/// Tracks line starts so byte offsets can be rendered as `line:col`.
#[derive(Debug, Clone)]
pub struct LineMap {
    line_starts: Vec<usize>,
}

impl LineMap {
    pub fn new(text: &str) -> LineMap {
        let mut line_starts = vec![0];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                line_starts.push(i + 1);
            }
        }
        LineMap { line_starts }
    }

    /// 1-based (line, column) of a byte offset.
    pub fn locate(&self, offset: usize) -> (u32, u32) {
        let line = match self.line_starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let col = offset - self.line_starts[line];
        (line as u32 + 1, col as u32 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_map_locates_offsets() {
        let lm = LineMap::new("ab\ncd\n");
        assert_eq!(lm.locate(0), (1, 1));
        assert_eq!(lm.locate(1), (1, 2));
        assert_eq!(lm.locate(3), (2, 1));
        assert_eq!(lm.locate(5), (2, 3));
    }

    #[test]
    fn merge_prefers_real_spans() {
        let s = Span::new(FileId(0), 3, 7, 1, 4);
        assert_eq!(Span::synthetic().merge(s), s);
        assert_eq!(s.merge(Span::synthetic()), s);
    }
}
