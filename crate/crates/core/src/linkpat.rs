//! Link patterns on `L` sites, insertion maps, and a small strand-diagram
//! tracer used for gluing patterns and contracting transfer rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sign given to a left-to-right path crossing a column edge downward.
/// Upward crossings get the opposite sign; an eastward crossing of a
/// horizontal edge counts like an upward one.
pub const CROSS_SIGN: i32 = -1;

/// Largest supported width (patterns are stored as `u32` bit words).
pub const MAX_SIZE: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Boundary {
    Left,
    Right,
}

/// Where the strand leaving a site ends up.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum End {
    Site(usize),
    Boundary(Boundary),
}

/// A word over `(`/`)`. Bit `size-1-i` holds site `i` (0-based, leftmost is
/// the most significant bit) and is set for `(`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LinkPattern {
    size: u8,
    bits: u32,
}

/// Where `phi_insert` puts the new strands.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Insertion {
    /// `)` in front, attached to the left boundary.
    Left,
    /// a small arc on sites `i, i+1` (1-based) of the result.
    Bulk(usize),
    /// `(` at the end, attached to the right boundary.
    Right,
}

impl LinkPattern {
    pub fn new(size: usize, bits: u32) -> Self {
        assert!(size <= MAX_SIZE);
        assert!(size == 32 || bits >> size == 0, "bits beyond pattern size");
        LinkPattern { size: size as u8, bits }
    }

    pub fn from_index(size: usize, index: usize) -> Self {
        LinkPattern::new(size, index as u32)
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn count(size: usize) -> usize {
        1 << size
    }

    /// All `2^L` patterns in index order.
    pub fn all(size: usize) -> impl Iterator<Item = LinkPattern> {
        (0..1u32 << size).map(move |b| LinkPattern::new(size, b))
    }

    pub fn is_open(&self, i: usize) -> bool {
        (self.bits >> (self.size() - 1 - i)) & 1 == 1
    }

    pub fn word(&self) -> String {
        (0..self.size()).map(|i| if self.is_open(i) { '(' } else { ')' }).collect()
    }

    /// Stack matching: closes that find the stack empty go left, leftover opens go right.
    pub fn partners(&self) -> Vec<End> {
        let n = self.size();
        let mut out = vec![End::Boundary(Boundary::Left); n];
        let mut stack = Vec::with_capacity(n);
        for i in 0..n {
            if self.is_open(i) {
                stack.push(i);
            } else if let Some(j) = stack.pop() {
                out[i] = End::Site(j);
                out[j] = End::Site(i);
            }
        }
        for j in stack {
            out[j] = End::Boundary(Boundary::Right);
        }
        out
    }

    /// Inverse of [`LinkPattern::partners`]. Assumes a planar pairing.
    pub fn from_partners(p: &[End]) -> Self {
        let n = p.len();
        let mut bits = 0u32;
        for (i, e) in p.iter().enumerate() {
            let open = match *e {
                End::Boundary(Boundary::Right) => true,
                End::Boundary(Boundary::Left) => false,
                End::Site(j) => j > i,
            };
            if open {
                bits |= 1 << (n - 1 - i);
            }
        }
        LinkPattern::new(n, bits)
    }

    fn with_word(word: &str) -> Self {
        word.parse().expect("internal word is valid")
    }

    /// `φ_i` for `1 ≤ i ≤ size+1`: inserts `()` so that it occupies sites `i, i+1` of the result.
    pub fn phi_bulk(&self, i: usize) -> Result<Self> {
        if i < 1 || i > self.size() + 1 || self.size() + 2 > MAX_SIZE {
            return Err(Error::Size(format!("bulk insertion at {i} into size {}", self.size())));
        }
        let w = self.word();
        Ok(Self::with_word(&format!("{}(){}", &w[..i - 1], &w[i - 1..])))
    }

    /// `φ_0`: prepends `)`.
    pub fn phi_left(&self) -> Self {
        Self::with_word(&format!("){}", self.word()))
    }

    /// `φ_L`: appends `(`.
    pub fn phi_right(&self) -> Self {
        Self::with_word(&format!("{}(", self.word()))
    }

    pub fn phi_insert(&self, at: Insertion) -> Result<Self> {
        match at {
            Insertion::Left => Ok(self.phi_left()),
            Insertion::Right => Ok(self.phi_right()),
            Insertion::Bulk(i) => self.phi_bulk(i),
        }
    }

    /// Mirror image: reverse the word and swap `(` with `)`.
    pub fn reflect(&self) -> Self {
        let n = self.size();
        let mut bits = 0u32;
        for i in 0..n {
            if !self.is_open(n - 1 - i) {
                bits |= 1 << (n - 1 - i);
            }
        }
        LinkPattern::new(n, bits)
    }

    /// Closes sites `i, i+1` (1-based) of an upward pattern with a small arc
    /// from below. Returns the pattern on the remaining sites and whether a
    /// closed loop was formed.
    pub fn cap_off(&self, i: usize) -> Result<(Self, bool)> {
        let n = self.size();
        if i < 1 || i + 1 > n {
            return Err(Error::Size(format!("cap at {i} on size {n}")));
        }
        let p = self.partners();
        let (a, b) = (p[i - 1], p[i]);
        if a == End::Site(i) {
            let rest: String = self.word().chars().enumerate().filter(|&(j, _)| j != i - 1 && j != i).map(|(_, c)| c).collect();
            return Ok((Self::with_word(&rest), true));
        }
        let mut q = p.clone();
        if let End::Site(x) = a {
            q[x] = b;
        }
        if let End::Site(y) = b {
            q[y] = a;
        }
        let renumber = |e: End| match e {
            End::Site(j) if j > i => End::Site(j - 2),
            other => other,
        };
        let kept: Vec<End> = (0..n).filter(|&j| j != i - 1 && j != i).map(|j| renumber(q[j])).collect();
        Ok((Self::from_partners(&kept), false))
    }
}

impl fmt::Display for LinkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl FromStr for LinkPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_SIZE {
            return Err(Error::Size(format!("pattern longer than {MAX_SIZE}")));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '(' => bits |= 1 << (s.len() - 1 - i),
                ')' => {}
                _ => return Err(Error::Parse { input: s.into(), reason: "expected ( or )".into() }),
            }
        }
        Ok(LinkPattern::new(s.len(), bits))
    }
}

impl Serialize for LinkPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.word())
    }
}

impl<'de> Deserialize<'de> for LinkPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ------------------------------------------------------------ diagrams

/// Horizontal lines of sites in a double row: the input line, the line
/// between the two rows, and the output line; plus the auxiliary edges of the
/// lower and upper rows (`L+1` each, numbered from the left boundary).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Line {
    Bottom,
    Middle,
    Top,
    AuxLower,
    AuxUpper,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Node {
    pub line: Line,
    pub pos: usize,
}

impl Node {
    pub fn new(line: Line, pos: usize) -> Self {
        Node { line, pos }
    }
}

/// Side 0 is below (site lines) or west (auxiliary edges); side 1 above or east.
pub type Side = usize;
pub const BELOW: Side = 0;
pub const ABOVE: Side = 1;
pub const WEST: Side = 0;
pub const EAST: Side = 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EdgeKind {
    Column,
    Horizontal,
}

/// A pair of markers: a column edge at site `k` on a site line, or a
/// horizontal edge at position `k` (1..=L+1) in one of the rows.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MarkedEdge {
    pub kind: EdgeKind,
    pub k: usize,
    pub line: Line,
}

impl MarkedEdge {
    /// Column edge at site `k` on the input line (the gluing line when no row is present).
    pub fn column(k: usize) -> Self {
        MarkedEdge { kind: EdgeKind::Column, k, line: Line::Bottom }
    }

    pub fn column_on(k: usize, line: Line) -> Self {
        assert!(matches!(line, Line::Bottom | Line::Middle | Line::Top));
        MarkedEdge { kind: EdgeKind::Column, k, line }
    }

    /// Horizontal edge of the lower row at position `k`.
    pub fn horizontal(k: usize) -> Self {
        MarkedEdge { kind: EdgeKind::Horizontal, k, line: Line::AuxLower }
    }

    pub fn node(&self) -> Node {
        Node::new(self.line, self.k - 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    /// upward, or eastward on an auxiliary edge
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Forward => -CROSS_SIGN,
            Direction::Backward => CROSS_SIGN,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Path {
    pub from: Boundary,
    pub to: Boundary,
    pub crossings: Vec<(Node, Direction)>,
}

/// Result of tracing a closed-up diagram.
#[derive(Clone, PartialEq, Debug)]
pub struct Connectivity {
    pub size: usize,
    /// strands with both ends on boundaries; left-to-right ones oriented from the left
    pub paths: Vec<Path>,
    pub loops: usize,
}

impl Connectivity {
    pub fn left_right_paths(&self) -> impl Iterator<Item = &Path> {
        self.paths.iter().filter(|p| p.from == Boundary::Left && p.to == Boundary::Right)
    }
}

/// Net signed crossings of the marked edge by left-to-right paths.
pub fn signed_crossings(c: &Connectivity, e: &MarkedEdge) -> i32 {
    let node = e.node();
    c.left_right_paths()
        .flat_map(|p| p.crossings.iter())
        .filter(|(n, _)| *n == node)
        .map(|(_, d)| d.sign())
        .sum()
}

const NONE: u32 = u32::MAX;

/// Strand graph on the nodes of a double row of width `L`. Every node has two
/// endpoints; boundary terminals are extra endpoints after the nodes.
#[derive(Clone, Debug)]
pub struct Diagram {
    size: usize,
    link: Vec<u32>,
    terminals: Vec<Boundary>,
}

impl Diagram {
    pub fn new(size: usize) -> Self {
        let nodes = 3 * size + 2 * (size + 1);
        Diagram { size, link: vec![NONE; 2 * nodes], terminals: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn node_count(&self) -> usize {
        3 * self.size + 2 * (self.size + 1)
    }

    fn id(&self, n: Node) -> usize {
        let l = self.size;
        match n.line {
            Line::Bottom => n.pos,
            Line::Middle => l + n.pos,
            Line::Top => 2 * l + n.pos,
            Line::AuxLower => 3 * l + n.pos,
            Line::AuxUpper => 4 * l + 1 + n.pos,
        }
    }

    fn node_of(&self, id: usize) -> Node {
        let l = self.size;
        match id {
            i if i < l => Node::new(Line::Bottom, i),
            i if i < 2 * l => Node::new(Line::Middle, i - l),
            i if i < 3 * l => Node::new(Line::Top, i - 2 * l),
            i if i < 4 * l + 1 => Node::new(Line::AuxLower, i - 3 * l),
            i => Node::new(Line::AuxUpper, i - 4 * l - 1),
        }
    }

    fn ep(&self, n: Node, side: Side) -> usize {
        2 * self.id(n) + side
    }

    pub fn connect(&mut self, a: Node, sa: Side, b: Node, sb: Side) {
        let (x, y) = (self.ep(a, sa), self.ep(b, sb));
        debug_assert!(self.link[x] == NONE && self.link[y] == NONE, "endpoint reused");
        self.link[x] = y as u32;
        self.link[y] = x as u32;
    }

    pub fn attach(&mut self, a: Node, sa: Side, b: Boundary) {
        let x = self.ep(a, sa);
        let t = self.link.len();
        self.terminals.push(b);
        self.link.push(x as u32);
        self.link[x] = t as u32;
    }

    /// Arcs of a downward pattern hanging below `line`.
    pub fn add_below(&mut self, line: Line, beta: &LinkPattern) {
        self.add_pattern(line, beta, BELOW);
    }

    /// Arcs of an upward pattern standing above `line`.
    pub fn add_above(&mut self, line: Line, alpha: &LinkPattern) {
        self.add_pattern(line, alpha, ABOVE);
    }

    fn add_pattern(&mut self, line: Line, p: &LinkPattern, side: Side) {
        for (i, e) in p.partners().into_iter().enumerate() {
            match e {
                End::Site(j) if j > i => self.connect(Node::new(line, i), side, Node::new(line, j), side),
                End::Site(_) => {}
                End::Boundary(b) => self.attach(Node::new(line, i), side, b),
            }
        }
    }

    fn is_terminal(&self, ep: usize) -> bool {
        ep >= 2 * self.node_count()
    }

    /// Follows a strand leaving through endpoint `start`; calls `visit` at each
    /// node passed and returns the endpoint where the strand stops (a terminal
    /// or an endpoint with nothing attached).
    fn follow(&self, start: usize, mut visit: impl FnMut(usize, Direction)) -> usize {
        let mut cur = start;
        loop {
            let nxt = self.link[cur];
            if nxt == NONE {
                return cur;
            }
            let nxt = nxt as usize;
            if self.is_terminal(nxt) {
                return nxt;
            }
            let (node, side) = (nxt / 2, nxt % 2);
            visit(node, if side == BELOW { Direction::Forward } else { Direction::Backward });
            cur = 2 * node + (1 - side);
        }
    }

    fn terminal_kind(&self, ep: usize) -> Boundary {
        self.terminals[ep - 2 * self.node_count()]
    }

    fn used(&self, node: usize) -> bool {
        self.link[2 * node] != NONE || self.link[2 * node + 1] != NONE
    }

    /// Pattern read on the free endpoints (on side `free`) of `line`, plus the
    /// number of closed loops. Every node of `line` must have that endpoint free.
    pub fn output(&self, line: Line, free: Side) -> (LinkPattern, usize) {
        let l = self.size;
        let mut seen = vec![false; self.node_count()];
        let mut out = vec![End::Boundary(Boundary::Left); l];
        let mut done = vec![false; l];
        for i in 0..l {
            if done[i] {
                continue;
            }
            let id = self.id(Node::new(line, i));
            seen[id] = true;
            let stop = self.follow(2 * id + (1 - free), |n, _| seen[n] = true);
            done[i] = true;
            if self.is_terminal(stop) {
                out[i] = End::Boundary(self.terminal_kind(stop));
            } else {
                let n = self.node_of(stop / 2);
                debug_assert!(n.line == line && stop % 2 == free);
                out[i] = End::Site(n.pos);
                out[n.pos] = End::Site(i);
                done[n.pos] = true;
            }
        }
        for t in 0..self.terminals.len() {
            let ep = 2 * self.node_count() + t;
            self.follow(ep, |n, _| seen[n] = true);
        }
        (LinkPattern::from_partners(&out), self.count_loops(&mut seen))
    }

    fn count_loops(&self, seen: &mut [bool]) -> usize {
        let mut loops = 0;
        for n in 0..self.node_count() {
            if seen[n] || !self.used(n) {
                continue;
            }
            loops += 1;
            seen[n] = true;
            let mut cur = 2 * n + 1;
            loop {
                let nxt = self.link[cur] as usize;
                let m = nxt / 2;
                if m == n {
                    break;
                }
                seen[m] = true;
                cur = 2 * m + (1 - nxt % 2);
            }
        }
        loops
    }

    /// Adds the signed crossings of every left-to-right strand into `acc`,
    /// indexed like [`Diagram::node_index`].
    pub fn accumulate_crossings(&self, acc: &mut [i32]) {
        for t in 0..self.terminals.len() {
            if self.terminals[t] != Boundary::Left {
                continue;
            }
            let ep = 2 * self.node_count() + t;
            let mut local: Vec<(usize, i32)> = Vec::new();
            let stop = self.follow(ep, |n, d| local.push((n, d.sign())));
            if self.is_terminal(stop) && self.terminal_kind(stop) == Boundary::Right {
                for (n, s) in local {
                    acc[n] += s;
                }
            }
        }
    }

    pub fn node_index(&self, n: Node) -> usize {
        self.id(n)
    }

    pub fn node_total(&self) -> usize {
        self.node_count()
    }

    /// Signed crossings at one node summed over left-to-right strands.
    pub fn crossings_at(&self, n: Node) -> i32 {
        let target = self.id(n);
        let mut total = 0;
        for t in 0..self.terminals.len() {
            if self.terminals[t] != Boundary::Left {
                continue;
            }
            let mut here = 0;
            let stop = self.follow(2 * self.node_count() + t, |m, d| {
                if m == target {
                    here += d.sign();
                }
            });
            if self.is_terminal(stop) && self.terminal_kind(stop) == Boundary::Right {
                total += here;
            }
        }
        total
    }

    /// Full trace of a diagram in which every strand is closed or ends on a boundary.
    pub fn connectivity(&self) -> Connectivity {
        let mut seen = vec![false; self.node_count()];
        let mut used_terminal = vec![false; self.terminals.len()];
        let mut paths = Vec::new();
        // start from left terminals first so left-right paths come out oriented
        let mut order: Vec<usize> = (0..self.terminals.len()).collect();
        order.sort_by_key(|&t| self.terminals[t] != Boundary::Left);
        for t in order {
            if used_terminal[t] {
                continue;
            }
            let ep = 2 * self.node_count() + t;
            let mut crossings = Vec::new();
            let stop = self.follow(ep, |n, d| {
                seen[n] = true;
                crossings.push((self.node_of(n), d));
            });
            used_terminal[t] = true;
            assert!(self.is_terminal(stop), "open strand in a closed diagram");
            let u = stop - 2 * self.node_count();
            used_terminal[u] = true;
            paths.push(Path { from: self.terminals[t], to: self.terminals[u], crossings });
        }
        let loops = self.count_loops(&mut seen);
        Connectivity { size: self.size, paths, loops }
    }
}

/// Joins an upward pattern `alpha` above a downward pattern `beta` on one line.
pub fn glue(alpha: &LinkPattern, beta: &LinkPattern) -> Result<Connectivity> {
    if alpha.size() != beta.size() {
        return Err(Error::Size(format!("glue sizes {} and {}", alpha.size(), beta.size())));
    }
    let mut d = Diagram::new(alpha.size());
    d.add_below(Line::Bottom, beta);
    d.add_above(Line::Bottom, alpha);
    Ok(d.connectivity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LinkPattern {
        s.parse().unwrap()
    }

    #[test]
    fn insertion_examples() {
        assert_eq!(p(")(()((").phi_bulk(3).unwrap(), p(")(()()(("));
        assert_eq!(p("()").phi_left(), p(")()"));
        assert_eq!(p("").phi_bulk(1).unwrap(), p("()"));
        assert_eq!(p("((").phi_right(), p("(((",));
        assert!(p("()").phi_bulk(4).is_err());
        assert!(p("()").phi_bulk(0).is_err());
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(p(")(()()").reflect(), p("()())("));
        assert_eq!(p("()").reflect(), p("()"));
        for a in LinkPattern::all(4) {
            assert_eq!(a.reflect().reflect(), a);
        }
    }

    #[test]
    fn index_convention() {
        assert_eq!(p("(()").index(), 0b110);
        assert_eq!(LinkPattern::all(3).count(), 8);
        assert_eq!(p(")((").partners(), vec![
            End::Boundary(Boundary::Left),
            End::Boundary(Boundary::Right),
            End::Boundary(Boundary::Right)
        ]);
    }

    #[test]
    fn glue_examples() {
        let c = glue(&p("()"), &p("()")).unwrap();
        assert_eq!((c.loops, c.paths.len()), (1, 0));

        let c = glue(&p(")("), &p(")(")).unwrap();
        assert_eq!(c.loops, 0);
        let mut ends: Vec<_> = c.paths.iter().map(|x| (x.from, x.to)).collect();
        ends.sort();
        assert_eq!(ends, vec![(Boundary::Left, Boundary::Left), (Boundary::Right, Boundary::Right)]);

        let c = glue(&p(")("), &p("()")).unwrap();
        assert_eq!(c.loops, 0);
        assert_eq!(c.left_right_paths().count(), 1);
        let path = c.left_right_paths().next().unwrap();
        let sites: Vec<usize> = path.crossings.iter().map(|(n, _)| n.pos).collect();
        assert_eq!(sites, vec![0, 1]);
    }

    #[test]
    fn crossing_signs() {
        // from the left boundary the path enters site 1 from above, leaves at site 2 upward
        let c = glue(&p(")("), &p("()")).unwrap();
        assert_eq!(signed_crossings(&c, &MarkedEdge::column(1)), CROSS_SIGN);
        assert_eq!(signed_crossings(&c, &MarkedEdge::column(2)), -CROSS_SIGN);
        let none = glue(&p("()"), &p("()")).unwrap();
        assert_eq!(signed_crossings(&none, &MarkedEdge::column(1)), 0);
    }

    #[test]
    fn cap_off_cases() {
        assert_eq!(p("()").cap_off(1).unwrap(), (p(""), true));
        assert_eq!(p(")(").cap_off(1).unwrap(), (p(""), false));
        assert_eq!(p("(())").cap_off(2).unwrap(), (p("()"), true));
        assert_eq!(p("()()").cap_off(2).unwrap(), (p("()"), false));
        assert_eq!(p(")()(").cap_off(1).unwrap(), (p(")("), false));
    }

    /// Independent tracer: union-find over strand ends.
    fn loops_by_union_find(alpha: &LinkPattern, beta: &LinkPattern) -> usize {
        let n = alpha.size();
        let mut parent: Vec<usize> = (0..n + 2).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let unite = |a: usize, b: usize, parent: &mut Vec<usize>| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            parent[ra] = rb;
        };
        for pat in [alpha, beta] {
            for (i, e) in pat.partners().into_iter().enumerate() {
                match e {
                    End::Site(j) => unite(i, j, &mut parent),
                    End::Boundary(Boundary::Left) => unite(i, n, &mut parent),
                    End::Boundary(Boundary::Right) => unite(i, n + 1, &mut parent),
                }
            }
        }
        let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        let (bl, br) = (find(&mut parent, n), find(&mut parent, n + 1));
        roots.retain(|&r| r != bl && r != br);
        roots.sort();
        roots.dedup();
        roots.len()
    }

    #[test]
    fn self_glue_loop_total_is_frozen() {
        // every arc of α closes against its own mirror image; totals cross-checked by union-find
        let expected = [0usize, 1, 4, 13, 36, 94];
        for (l, want) in (1..=6).zip(expected) {
            let total: usize = LinkPattern::all(l).map(|a| glue(&a, &a).unwrap().loops).sum();
            let uf: usize = LinkPattern::all(l).map(|a| loops_by_union_find(&a, &a)).sum();
            assert_eq!(total, uf);
            assert_eq!(total, want, "L={l} total={total}");
        }
    }

    proptest! {
        #[test]
        fn strand_ends_conserved(l in 1usize..7, x in 0u32..64, y in 0u32..64) {
            let a = LinkPattern::new(l, x % (1 << l));
            let b = LinkPattern::new(l, y % (1 << l));
            let c = glue(&a, &b).unwrap();
            prop_assert_eq!(c.loops, loops_by_union_find(&a, &b));
            let boundary_ends = a.partners().iter().chain(b.partners().iter()).filter(|e| matches!(e, End::Boundary(_))).count();
            prop_assert_eq!(2 * c.paths.len(), boundary_ends);
            let mut sites: Vec<usize> = c.paths.iter().flat_map(|p| p.crossings.iter().map(|(n, _)| n.pos)).collect();
            let on_paths = sites.len();
            sites.sort();
            sites.dedup();
            prop_assert_eq!(sites.len(), on_paths);
            prop_assert_eq!(on_paths == l, c.loops == 0);
        }

        #[test]
        fn column_crossings_are_unit(l in 1usize..7, x in 0u32..64, y in 0u32..64) {
            let a = LinkPattern::new(l, x % (1 << l));
            let b = LinkPattern::new(l, y % (1 << l));
            let c = glue(&a, &b).unwrap();
            for path in c.left_right_paths() {
                for k in 1..=l {
                    let here: i32 = path.crossings.iter().filter(|(n, _)| n.pos == k - 1).map(|(_, d)| d.sign()).sum();
                    prop_assert!((-1..=1).contains(&here));
                }
            }
        }

        #[test]
        fn reflection_is_involution(l in 0usize..10, x in 0u32..1024) {
            let a = LinkPattern::new(l, x % (1 << l));
            prop_assert_eq!(a.reflect().reflect(), a);
            prop_assert_eq!(LinkPattern::from_partners(&a.partners()), a);
        }

        #[test]
        fn insertion_then_cap_returns(l in 0usize..8, x in 0u32..256, i in 1usize..10) {
            let a = LinkPattern::new(l, x % (1 << l));
            let i = 1 + (i - 1) % (l + 1);
            let b = a.phi_bulk(i).unwrap();
            prop_assert_eq!(b.size(), l + 2);
            prop_assert!(b.partners()[i - 1] == End::Site(i));
        }
    }
}
