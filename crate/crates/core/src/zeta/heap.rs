use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::monoid::{ExponentVector, StrongAtom};

use super::scale::Scale;

/// One element of ⟨S(M)⟩: a non-decreasing sequence of indices into the
/// σ-sorted atom list.
#[derive(Debug, Clone)]
pub struct HeapTerm {
    pub value: f64,
    pub indices: Vec<u32>,
}

#[derive(Debug)]
struct Node {
    value: f64,
    /// σ of the sequence without its last index.
    prefix: f64,
    indices: Vec<u32>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then_with(|| self.indices.cmp(&other.indices))
    }
}

/// Enumerates ⟨S(M)⟩ in non-decreasing σ order, identity first.
///
/// Each sequence (i₁ ≤ … ≤ i_r) has exactly one parent: drop the last
/// index when i_{r−1} = i_r, otherwise decrement it. A popped node pushes
/// its two children, so no history is needed to avoid duplicates.
pub struct HeapEnumerator {
    atoms: Vec<(StrongAtom, f64)>,
    heap: BinaryHeap<Reverse<Node>>,
    started: bool,
}

impl HeapEnumerator {
    pub fn new(scale: &Scale) -> Self {
        Self { atoms: super::atoms_by_value(scale), heap: BinaryHeap::new(), started: false }
    }

    /// Atoms in the order the indices refer to.
    pub fn atoms(&self) -> &[(StrongAtom, f64)] {
        &self.atoms
    }

    pub fn element(&self, term: &HeapTerm) -> ExponentVector {
        term.indices.iter().fold(ExponentVector::identity(), |acc, &i| acc.add(&self.atoms[i as usize].0.element()))
    }
}

impl Iterator for HeapEnumerator {
    type Item = HeapTerm;

    fn next(&mut self) -> Option<HeapTerm> {
        if !self.started {
            self.started = true;
            if let Some((_, v)) = self.atoms.first() {
                self.heap.push(Reverse(Node { value: *v, prefix: 1.0, indices: vec![0] }));
            }
            return Some(HeapTerm { value: 1.0, indices: Vec::new() });
        }
        let Reverse(node) = self.heap.pop()?;
        let last = *node.indices.last()? as usize;
        let mut child = node.indices.clone();
        child.push(last as u32);
        self.heap.push(Reverse(Node { value: node.value * self.atoms[last].1, prefix: node.value, indices: child }));
        if last + 1 < self.atoms.len() {
            let mut sibling = node.indices.clone();
            *sibling.last_mut()? = (last + 1) as u32;
            self.heap.push(Reverse(Node {
                value: node.prefix * self.atoms[last + 1].1,
                prefix: node.prefix,
                indices: sibling,
            }));
        }
        Some(HeapTerm { value: node.value, indices: node.indices })
    }
}
