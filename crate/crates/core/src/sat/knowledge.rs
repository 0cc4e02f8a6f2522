use std::fmt;

use serde::{Deserialize, Serialize};

use super::{complement, SatInstance, MAX_TABLE_VARIABLES};
use crate::error::{Error, Result};

/// The two linked lists of the knowledge structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListId {
    /// 𝕊: values not yet translated or blocked.
    Free,
    /// M: translated clause values and the values they block.
    Blocked,
}

impl ListId {
    fn index(self) -> usize {
        match self {
            ListId::Free => 0,
            ListId::Blocked => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ListId::Free => "free",
            ListId::Blocked => "blocked",
        }
    }
}

impl fmt::Display for ListId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A `(prev, next)` pair of 1-based slots; 0 is the null link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Link {
    pub prev: u32,
    pub next: u32,
}

impl Link {
    pub const EMPTY: Link = Link { prev: 0, next: 0 };

    pub fn new(prev: u32, next: u32) -> Self {
        Link { prev, next }
    }
}

/// Every value of `[0, 2^n)` lives in exactly one of two circular doubly
/// linked lists, addressed by slot `value + 1`. A list header holds
/// `(prev, next)` = (tail, head); an empty list has header `(0, 0)`.
/// Moves touch a constant number of links. Values found to satisfy the
/// instance are also recorded in `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Knowledge {
    n: usize,
    /// Slot 0 is unused so that slot numbers match the link values.
    links: Vec<Link>,
    owner: Vec<u8>,
    headers: [Link; 2],
    lens: [u64; 2],
    solutions: Vec<u64>,
    in_solutions: Vec<bool>,
}

impl Knowledge {
    /// All values in 𝕊 in increasing order, M empty.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_VARIABLES {
            return Err(Error::MemoryLimit { n, limit: MAX_TABLE_VARIABLES });
        }
        let size = 1usize << n;
        let mut links = vec![Link::EMPTY; size + 1];
        for (slot, link) in links.iter_mut().enumerate().skip(1) {
            let prev = if slot == 1 { size } else { slot - 1 };
            let next = if slot == size { 1 } else { slot + 1 };
            *link = Link::new(prev as u32, next as u32);
        }
        let mut owner = vec![ListId::Free.index() as u8; size + 1];
        owner[0] = u8::MAX;
        Ok(Knowledge {
            n,
            links,
            owner,
            headers: [Link::new(size as u32, 1), Link::EMPTY],
            lens: [size as u64, 0],
            solutions: Vec::new(),
            in_solutions: vec![false; size],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn len(&self, list: ListId) -> u64 {
        self.lens[list.index()]
    }

    pub fn header(&self, list: ListId) -> Link {
        self.headers[list.index()]
    }

    fn slot(&self, value: u64) -> Result<usize> {
        if value >= self.size() {
            return Err(Error::OutOfRange { value, bits: self.n });
        }
        Ok(value as usize + 1)
    }

    pub fn contains(&self, list: ListId, value: u64) -> bool {
        self.slot(value).is_ok_and(|s| self.owner[s] == list.index() as u8)
    }

    pub fn list_of(&self, value: u64) -> Result<ListId> {
        let s = self.slot(value)?;
        Ok(if self.owner[s] == ListId::Free.index() as u8 { ListId::Free } else { ListId::Blocked })
    }

    /// Links of a value's slot as seen from `list`: the empty marker when the
    /// value lives in the other list.
    pub fn link(&self, list: ListId, value: u64) -> Result<Link> {
        let s = self.slot(value)?;
        Ok(if self.owner[s] == list.index() as u8 { self.links[s] } else { Link::EMPTY })
    }

    /// The table of `list`, one entry per slot `1..=2^n` (index 0 holds the
    /// header).
    pub fn table(&self, list: ListId) -> Vec<Link> {
        let mut t = Vec::with_capacity(self.links.len());
        t.push(self.header(list));
        for s in 1..self.links.len() {
            t.push(if self.owner[s] == list.index() as u8 { self.links[s] } else { Link::EMPTY });
        }
        t
    }

    fn unlink(&mut self, list: ListId, s: usize) {
        let li = list.index();
        let Link { prev, next } = self.links[s];
        if prev as usize == s {
            self.headers[li] = Link::EMPTY;
        } else {
            self.links[prev as usize].next = next;
            self.links[next as usize].prev = prev;
            let h = &mut self.headers[li];
            if h.next as usize == s {
                h.next = next;
            }
            if h.prev as usize == s {
                h.prev = prev;
            }
        }
        self.links[s] = Link::EMPTY;
        self.lens[li] -= 1;
    }

    /// Inserts at the head of `list`.
    fn push_front(&mut self, list: ListId, s: usize) {
        let li = list.index();
        let slot = s as u32;
        let h = self.headers[li];
        if h.next == 0 {
            self.links[s] = Link::new(slot, slot);
            self.headers[li] = Link::new(slot, slot);
        } else {
            self.links[s] = Link::new(h.prev, h.next);
            self.links[h.next as usize].prev = slot;
            self.links[h.prev as usize].next = slot;
            self.headers[li].next = slot;
        }
        self.owner[s] = li as u8;
        self.lens[li] += 1;
    }

    /// Moves `value` from the list `from` to the head of `to`.
    pub fn ks_move(&mut self, value: u64, from: ListId, to: ListId) -> Result<()> {
        let s = self.slot(value)?;
        if self.owner[s] != from.index() as u8 {
            return Err(Error::NotInList { value, list: from.name() });
        }
        self.unlink(from, s);
        self.push_front(to, s);
        Ok(())
    }

    /// Values from head to tail.
    pub fn forward(&self, list: ListId) -> Vec<u64> {
        self.walk(list, |l| l.next, self.header(list).next)
    }

    /// Values from tail to head.
    pub fn backward(&self, list: ListId) -> Vec<u64> {
        self.walk(list, |l| l.prev, self.header(list).prev)
    }

    fn walk(&self, list: ListId, step: impl Fn(&Link) -> u32, start: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len(list) as usize);
        if start == 0 {
            return out;
        }
        let mut s = start;
        loop {
            out.push(s as u64 - 1);
            s = step(&self.links[s as usize]);
            if s == start || out.len() as u64 > self.len(list) {
                break;
            }
        }
        out
    }

    /// Y: values that satisfied the instance when translated, in discovery
    /// order.
    pub fn solutions(&self) -> &[u64] {
        &self.solutions
    }

    pub fn is_solution(&self, value: u64) -> bool {
        self.in_solutions.get(value as usize).copied().unwrap_or(false)
    }

    fn record_solution(&mut self, value: u64) {
        if !self.in_solutions[value as usize] {
            self.in_solutions[value as usize] = true;
            self.solutions.push(value);
        }
    }

    /// Checks list membership, lengths, header consistency and that forward
    /// and backward walks visit the same values.
    pub fn check_integrity(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(format!("knowledge integrity: {msg}")));
        let mut total = 0;
        for list in [ListId::Free, ListId::Blocked] {
            let fwd = self.forward(list);
            let mut bwd = self.backward(list);
            bwd.reverse();
            if fwd != bwd {
                return bad(format!("{list} walks disagree"));
            }
            if fwd.len() as u64 != self.len(list) {
                return bad(format!("{list} walk has {} values, length is {}", fwd.len(), self.len(list)));
            }
            if fwd.iter().any(|&v| !self.contains(list, v)) {
                return bad(format!("{list} walk reaches a foreign slot"));
            }
            let h = self.header(list);
            if (h.next == 0) != (h.prev == 0) || (h.next == 0) != fwd.is_empty() {
                return bad(format!("{list} header {h:?} inconsistent"));
            }
            total += fwd.len() as u64;
        }
        if total != self.size() {
            return bad(format!("lists hold {total} of {} values", self.size()));
        }
        if self.solutions.iter().any(|&y| !self.contains(ListId::Blocked, y)) {
            return bad("a solution is outside the blocked list".into());
        }
        Ok(())
    }
}

/// Translates each clause value `k` still free: a satisfying `k` joins Y.
/// Either way `k` and `complement(k)` (the assignment `k` blocks) move to
/// M, so that every value left free satisfies the instance.
pub fn build_knowledge(instance: &SatInstance) -> Result<Knowledge> {
    instance.check_table_size()?;
    let n = instance.n();
    let mut k = Knowledge::new(n)?;
    for value in instance.values()? {
        if !k.contains(ListId::Free, value) {
            continue;
        }
        if instance.evaluate(value)? {
            k.record_solution(value);
        }
        k.ks_move(value, ListId::Free, ListId::Blocked)?;
        let blocked = complement(value, n)?;
        if k.contains(ListId::Free, blocked) {
            k.ks_move(blocked, ListId::Free, ListId::Blocked)?;
        }
    }
    Ok(k)
}
