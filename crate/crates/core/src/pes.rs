//! Frames of discernment, permutation events and the permutation event space.
//!
//! Events carry element *indices* into their frame; labels only come back at
//! I/O boundaries. Both [`PermutationEvent`] and [`Subset`] order by
//! cardinality first and lexicographically within a cardinality, which is
//! the order [`enumerate`] yields and the order every serialized
//! distribution uses.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::combinatorics::{self, BigCount};
use crate::error::{Error, Result};

/// A finite, ordered set of mutually exclusive and exhaustive element labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidFrame("a frame needs at least one element".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if label.is_empty() {
                return Err(Error::InvalidFrame("element labels must be non-empty".into()));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidFrame(format!("duplicate element label {label:?}")));
            }
        }
        Ok(Frame { labels })
    }

    /// A frame of `n` generated labels `t1..tn`.
    pub fn generated(n: usize) -> Result<Self> {
        Frame::new((1..=n).map(|k| format!("t{k}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always `false`; frames are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Resolves labels to indices; fails on the first unknown label.
    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                self.index_of(l)
                    .ok_or_else(|| Error::Load(format!("unknown element label {l:?}")))
            })
            .collect()
    }
}

fn cardinality_then_lex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn has_duplicates(indices: &[usize]) -> bool {
    let mut seen = HashSet::with_capacity(indices.len());
    !indices.iter().all(|i| seen.insert(*i))
}

/// An ordered tuple of distinct element indices; `(X, Y)` and `(Y, X)` differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationEvent(Vec<usize>);

impl PermutationEvent {
    /// Builds an event valid for `frame`.
    pub fn new(indices: Vec<usize>, frame: &Frame) -> Result<Self> {
        let event = PermutationEvent(indices);
        if !event.is_valid_for(frame) {
            return Err(Error::domain(format!(
                "event {event:?} is not a tuple of distinct indices below {}",
                frame.len()
            )));
        }
        Ok(event)
    }

    /// Builds an event without checking it against any frame.
    pub fn from_indices(indices: Vec<usize>) -> Self {
        PermutationEvent(indices)
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S], frame: &Frame) -> Result<Self> {
        let indices = frame.indices_of(labels)?;
        if has_duplicates(&indices) {
            return Err(Error::Load(format!(
                "event {:?} repeats an element",
                labels.iter().map(AsRef::as_ref).collect::<Vec<_>>()
            )));
        }
        Ok(PermutationEvent(indices))
    }

    pub fn empty() -> Self {
        PermutationEvent(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn cardinality(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid_for(&self, frame: &Frame) -> bool {
        self.0.iter().all(|&i| i < frame.len()) && !has_duplicates(&self.0)
    }

    /// The underlying unordered subset.
    pub fn forget_order(&self) -> Subset {
        Subset::from_indices(self.0.clone())
    }

    pub fn labels<'f>(&self, frame: &'f Frame) -> Vec<&'f str> {
        self.0.iter().filter_map(|&i| frame.label(i)).collect()
    }

    /// Tuple notation: `(R,B)`, or `∅` for the empty event.
    pub fn display<'a>(&'a self, frame: &'a Frame) -> EventDisplay<'a> {
        EventDisplay {
            indices: &self.0,
            frame,
            open: '(',
            close: ')',
        }
    }
}

impl Ord for PermutationEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        cardinality_then_lex(&self.0, &other.0)
    }
}

impl PartialOrd for PermutationEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sorted set of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset(Vec<usize>);

impl Subset {
    /// Sorts and deduplicates `indices`.
    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Subset(indices)
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S], frame: &Frame) -> Result<Self> {
        let indices = frame.indices_of(labels)?;
        if has_duplicates(&indices) {
            return Err(Error::Load(format!(
                "set {:?} repeats an element",
                labels.iter().map(AsRef::as_ref).collect::<Vec<_>>()
            )));
        }
        Ok(Subset::from_indices(indices))
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn cardinality(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid_for(&self, frame: &Frame) -> bool {
        self.0.iter().all(|&i| i < frame.len())
    }

    pub fn labels<'f>(&self, frame: &'f Frame) -> Vec<&'f str> {
        self.0.iter().filter_map(|&i| frame.label(i)).collect()
    }

    /// Set notation: `{R,B}`, or `∅`.
    pub fn display<'a>(&'a self, frame: &'a Frame) -> EventDisplay<'a> {
        EventDisplay {
            indices: &self.0,
            frame,
            open: '{',
            close: '}',
        }
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        cardinality_then_lex(&self.0, &other.0)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct EventDisplay<'a> {
    indices: &'a [usize],
    frame: &'a Frame,
    open: char,
    close: char,
}

impl fmt::Display for EventDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return f.write_str("∅");
        }
        write!(f, "{}", self.open)?;
        for (k, &i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            match self.frame.label(i) {
                Some(label) => f.write_str(label)?,
                None => write!(f, "#{i}")?,
            }
        }
        write!(f, "{}", self.close)
    }
}

/// Lazily walks the permutation event space of a frame.
///
/// Yields events by ascending cardinality and lexicographically by index
/// tuple within each cardinality. Each cursor is single-consumer.
#[derive(Debug, Clone)]
pub struct Events {
    n: usize,
    current: Option<Vec<usize>>,
    used: Vec<bool>,
}

/// Enumerates `PES(frame)`, with or without the empty event.
pub fn enumerate(frame: &Frame, include_empty: bool) -> Events {
    Events::new(frame.len(), include_empty)
}

impl Events {
    fn new(n: usize, include_empty: bool) -> Self {
        let start = if include_empty {
            Some(Vec::new())
        } else if n >= 1 {
            Some(vec![0])
        } else {
            None
        };
        let mut used = vec![false; n];
        if let Some(s) = &start {
            for &i in s {
                used[i] = true;
            }
        }
        Events {
            n,
            current: start,
            used,
        }
    }

    fn smallest_unused_above(&self, floor: Option<usize>) -> Option<usize> {
        let from = floor.map_or(0, |f| f + 1);
        (from..self.n).find(|&i| !self.used[i])
    }

    // Moves `cur` to its lexicographic successor of the same length, or
    // returns false when it is the last one.
    fn advance_same_length(&mut self, cur: &mut Vec<usize>) -> bool {
        let k = cur.len();
        for pos in (0..k).rev() {
            let old = cur[pos];
            self.used[old] = false;
            // Drop the tail after `pos`.
            for &i in &cur[pos + 1..] {
                self.used[i] = false;
            }
            cur.truncate(pos + 1);
            if let Some(next) = self.smallest_unused_above(Some(old)) {
                cur[pos] = next;
                self.used[next] = true;
                while cur.len() < k {
                    let fill = self
                        .smallest_unused_above(None)
                        .expect("enough unused elements to refill the tail");
                    self.used[fill] = true;
                    cur.push(fill);
                }
                return true;
            }
            cur.truncate(pos);
        }
        false
    }
}

impl Iterator for Events {
    type Item = PermutationEvent;

    fn next(&mut self) -> Option<PermutationEvent> {
        let mut cur = self.current.take()?;
        let out = PermutationEvent(cur.clone());
        let k = cur.len();
        if self.advance_same_length(&mut cur) {
            self.current = Some(cur);
        } else if k < self.n {
            // `used` is all false again; start the next cardinality at (0, 1, ..., k).
            let next: Vec<usize> = (0..=k).collect();
            for &i in &next {
                self.used[i] = true;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// `Σ P(n, i)` over `i = 0..=n` (or `1..=n` without the empty event).
pub fn pes_size(n: usize, include_empty: bool) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::domain("pes_size requires n >= 1"));
    }
    let start = if include_empty { 0 } else { 1 };
    let mut total = BigCount::zero();
    for i in start..=n {
        total = total + combinatorics::permutation_count(n, i)?;
    }
    Ok(total)
}

/// Every non-empty subset of the frame, in cardinality-then-lexicographic order.
pub fn subsets(frame: &Frame) -> impl Iterator<Item = Subset> {
    use itertools::Itertools;
    let n = frame.len();
    (1..=n).flat_map(move |k| (0..n).combinations(k).map(Subset))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(labels: &[&str]) -> Frame {
        Frame::new(labels.iter().copied()).unwrap()
    }

    fn render(frame: &Frame, include_empty: bool) -> Vec<String> {
        enumerate(frame, include_empty)
            .map(|e| e.display(frame).to_string())
            .collect()
    }

    #[test]
    fn two_element_space() {
        let f = frame(&["X", "Y"]);
        assert_eq!(render(&f, true), ["∅", "(X)", "(Y)", "(X,Y)", "(Y,X)"]);
    }

    #[test]
    fn three_element_space_has_sixteen_events() {
        let f = frame(&["R", "B", "G"]);
        let events = render(&f, true);
        assert_eq!(events.len(), 16);
        assert_eq!(&events[4..10], ["(R,B)", "(R,G)", "(B,R)", "(B,G)", "(G,R)", "(G,B)"]);
        assert_eq!(events.last().unwrap(), "(G,B,R)");
    }

    #[test]
    fn single_element_without_empty() {
        let f = frame(&["a"]);
        assert_eq!(render(&f, false), ["(a)"]);
        assert_eq!(render(&f, true), ["∅", "(a)"]);
    }

    #[test]
    fn pes_size_examples() {
        assert_eq!(pes_size(3, true).unwrap(), 16);
        assert_eq!(pes_size(2, true).unwrap(), 5);
        assert_eq!(pes_size(2, false).unwrap(), 4);
        assert!(pes_size(0, true).is_err());
    }

    #[test]
    fn pes_size_ten_matches_independent_sum() {
        // Σ_{i=0}^{10} 10!/(10−i)! with plain u64 arithmetic.
        let mut total = 0u64;
        for i in 0..=10u64 {
            total += (10 - i + 1..=10).product::<u64>();
        }
        assert_eq!(total, 9_864_101);
        assert_eq!(pes_size(10, true).unwrap(), total);
    }

    #[test]
    fn forget_order_examples() {
        let f = frame(&["R", "B", "G"]);
        let bgr = PermutationEvent::from_labels(&["B", "G", "R"], &f).unwrap();
        assert_eq!(bgr.forget_order(), Subset::from_labels(&["R", "B", "G"], &f).unwrap());
        assert_eq!(bgr.forget_order().display(&f).to_string(), "{R,B,G}");
        assert!(PermutationEvent::empty().forget_order().is_empty());

        let xy = frame(&["X", "Y"]);
        let yx = PermutationEvent::from_labels(&["Y", "X"], &xy).unwrap();
        let xy_event = PermutationEvent::from_labels(&["X", "Y"], &xy).unwrap();
        assert_ne!(yx, xy_event);
        assert_eq!(yx.forget_order(), xy_event.forget_order());
    }

    #[test]
    fn frame_rejects_bad_labels() {
        assert!(Frame::new(Vec::<String>::new()).is_err());
        assert!(Frame::new(["a", "a"]).is_err());
        assert!(Frame::new(["a", ""]).is_err());
        assert_eq!(Frame::generated(3).unwrap().labels(), ["t1", "t2", "t3"]);
    }

    #[test]
    fn event_validation() {
        let f = frame(&["X", "Y"]);
        assert!(PermutationEvent::new(vec![0, 1], &f).is_ok());
        assert!(PermutationEvent::new(vec![0, 0], &f).is_err());
        assert!(PermutationEvent::new(vec![2], &f).is_err());
        assert!(PermutationEvent::from_labels(&["Z"], &f).is_err());
        assert!(PermutationEvent::from_labels(&["X", "X"], &f).is_err());
    }

    #[test]
    fn subsets_in_canonical_order() {
        let f = frame(&["R", "B", "G"]);
        let rendered: Vec<String> = subsets(&f).map(|s| s.display(&f).to_string()).collect();
        assert_eq!(rendered, ["{R}", "{B}", "{G}", "{R,B}", "{R,G}", "{B,G}", "{R,B,G}"]);
    }

    #[test]
    fn independent_cursors() {
        let f = frame(&["a", "b", "c"]);
        let mut a = enumerate(&f, false);
        let b = enumerate(&f, false);
        a.next();
        assert_eq!(a.count() + 1, b.count());
    }
}
