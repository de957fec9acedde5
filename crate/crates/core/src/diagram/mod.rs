//! Oriented link diagrams in planar-code form and the saddle-move calculus.
//!
//! Every crossing has four slots numbered counterclockwise. Slot 0 is where the
//! under strand enters and slot 2 where it leaves. The over strand uses slots 3→1
//! at a positive crossing and 1→3 at a negative one. Edges are oriented arcs from
//! an outgoing slot to an incoming slot. Components without crossings are kept as
//! a count of free loops. The planar embedding is the one encoded by the slot
//! rotation at each crossing.

mod moves;
mod vogel;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{BraidWord, Sign};

pub use moves::{reduce_to_unknot, replay, split_knm, SaddleMove, SaddleSchedule};
pub use vogel::{vogel, vogel_braid, VogelReport};

pub type CrossingId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("unknown crossing {0}")]
    UnknownCrossing(CrossingId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown component {0}")]
    UnknownComponent(usize),
    #[error("cannot join a component with itself")]
    SameComponent,
    #[error("edges {0} and {1} do not bound a common face coherently")]
    NoCoherentBand(EdgeId, EdgeId),
    #[error("diagram is not connected")]
    Disconnected,
    #[error("diagram is empty")]
    Empty,
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("braiding did not finish within {0} moves")]
    BraidingCap(usize),
}

/// A crossing slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct End {
    pub crossing: CrossingId,
    pub slot: u8,
}

impl End {
    pub fn new(crossing: CrossingId, slot: u8) -> End {
        End { crossing, slot }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub sign: Sign,
    /// Edge attached at each slot, counterclockwise from the under strand's entry.
    pub edges: [EdgeId; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: End,
    pub to: End,
}

/// An edge traversed along (`forward`) or against its orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: EdgeId,
    pub forward: bool,
}

/// A link component: the edges met in order, or a crossing-free loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Strand(Vec<EdgeId>),
    FreeLoop,
}

pub fn over_in(sign: Sign) -> u8 {
    match sign {
        Sign::Positive => 3,
        Sign::Negative => 1,
    }
}

pub fn over_out(sign: Sign) -> u8 {
    (over_in(sign) + 2) % 4
}

pub fn is_incoming(sign: Sign, slot: u8) -> bool {
    slot == 0 || slot == over_in(sign)
}

/// Outgoing slot paired with an incoming one by the oriented smoothing.
pub fn smoothing_exit(sign: Sign, slot: u8) -> u8 {
    match (sign, slot) {
        (Sign::Positive, 0) => 1,
        (Sign::Positive, 3) => 2,
        (Sign::Negative, 0) => 3,
        (Sign::Negative, 1) => 2,
        _ => panic!("slot {slot} is not incoming"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    crossings: BTreeMap<CrossingId, Crossing>,
    edges: BTreeMap<EdgeId, Edge>,
    free_loops: usize,
    next_crossing: CrossingId,
    next_edge: EdgeId,
}

impl Diagram {
    pub fn unlink(loops: usize) -> Diagram {
        Diagram { free_loops: loops, ..Diagram::default() }
    }

    pub fn crossings(&self) -> &BTreeMap<CrossingId, Crossing> {
        &self.crossings
    }

    pub fn edges(&self) -> &BTreeMap<EdgeId, Edge> {
        &self.edges
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.values().map(|c| c.sign.value()).sum()
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, DiagramError> {
        self.edges.get(&id).ok_or(DiagramError::UnknownEdge(id))
    }

    fn edge_at(&self, end: End) -> EdgeId {
        self.crossings[&end.crossing].edges[end.slot as usize]
    }

    fn set_edge_at(&mut self, end: End, e: EdgeId) {
        self.crossings.get_mut(&end.crossing).expect("crossing exists").edges[end.slot as usize] = e;
    }

    fn fresh_edge(&mut self, from: End, to: End) -> EdgeId {
        let id = self.next_edge;
        self.next_edge += 1;
        self.edges.insert(id, Edge { from, to });
        id
    }

    fn fresh_crossing(&mut self, sign: Sign) -> CrossingId {
        let id = self.next_crossing;
        self.next_crossing += 1;
        self.crossings.insert(id, Crossing { sign, edges: [usize::MAX; 4] });
        id
    }

    /// Diagram of a braid closure. Crossing `t` is the `t`-th letter.
    ///
    /// Strands run downwards with position 1 on the left and the closing arcs on
    /// the right, so position k is next to the braid axis.
    pub fn from_braid(b: &BraidWord) -> Diagram {
        let k = b.strands();
        let mut d = Diagram::default();
        let mut pending: Vec<Option<End>> = vec![None; k + 1];
        let mut first: Vec<Option<End>> = vec![None; k + 1];
        for l in b.letters() {
            let c = d.fresh_crossing(l.sign);
            let (i, j) = (l.index, l.index + 1);
            for (pos, slot_in, slot_out) in [(i, braid_slot(l.sign, false, true), braid_slot(l.sign, false, false)), (j, braid_slot(l.sign, true, true), braid_slot(l.sign, true, false))] {
                let to = End::new(c, slot_in);
                match pending[pos] {
                    Some(from) => {
                        let e = d.fresh_edge(from, to);
                        d.set_edge_at(from, e);
                        d.set_edge_at(to, e);
                    }
                    None => first[pos] = Some(to),
                }
                pending[pos] = Some(End::new(c, slot_out));
            }
        }
        for pos in 1..=k {
            match (pending[pos], first[pos]) {
                (Some(from), Some(to)) => {
                    let e = d.fresh_edge(from, to);
                    d.set_edge_at(from, e);
                    d.set_edge_at(to, e);
                }
                _ => d.free_loops += 1,
            }
        }
        d
    }

    /// Diagram from a signed Gauss code: each component lists its crossing passes
    /// in order as `(crossing, over)`. An empty component is a free loop.
    ///
    /// Every crossing must be passed once over and once under, and the result
    /// must be planar.
    pub fn from_gauss(signs: &[Sign], components: &[Vec<(CrossingId, bool)>]) -> Result<Diagram, DiagramError> {
        let mut d = Diagram::default();
        for &s in signs {
            d.fresh_crossing(s);
        }
        let mut seen = vec![[false; 2]; signs.len()];
        for comp in components {
            if comp.is_empty() {
                d.free_loops += 1;
                continue;
            }
            let slots = |&(c, over): &(CrossingId, bool)| -> (u8, u8) {
                if over {
                    (over_in(signs[c]), over_out(signs[c]))
                } else {
                    (0, 2)
                }
            };
            for (i, pass) in comp.iter().enumerate() {
                let (c, over) = *pass;
                if c >= signs.len() || std::mem::replace(&mut seen[c][over as usize], true) {
                    return Err(DiagramError::Invalid(format!("crossing {c} passed twice the same way")));
                }
                let next = &comp[(i + 1) % comp.len()];
                let from = End::new(c, slots(pass).1);
                let to = End::new(next.0, slots(next).0);
                let e = d.fresh_edge(from, to);
                d.set_edge_at(from, e);
                d.set_edge_at(to, e);
            }
        }
        if let Some(c) = seen.iter().position(|s| !s[0] || !s[1]) {
            return Err(DiagramError::Invalid(format!("crossing {c} is not passed both over and under")));
        }
        let (v, e, f) = (d.crossings.len(), d.edges.len(), d.faces().len());
        if v > 0 && v + f != e + 2 * d.pieces().len() {
            return Err(DiagramError::Invalid("Gauss code is not planar".into()));
        }
        Ok(d)
    }

    /// Checks slot/edge consistency. Producers in this crate maintain it by construction.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let bad = |m: String| Err(DiagramError::Invalid(m));
        if self.edges.len() != 2 * self.crossings.len() {
            return bad(format!("{} edges for {} crossings", self.edges.len(), self.crossings.len()));
        }
        for (&id, e) in &self.edges {
            for (end, incoming) in [(e.from, false), (e.to, true)] {
                let Some(c) = self.crossings.get(&end.crossing) else {
                    return bad(format!("edge {id} references missing crossing {}", end.crossing));
                };
                if end.slot > 3 {
                    return bad(format!("edge {id} uses slot {}", end.slot));
                }
                if is_incoming(c.sign, end.slot) != incoming {
                    return bad(format!("edge {id} has wrong direction at crossing {}", end.crossing));
                }
                if c.edges[end.slot as usize] != id {
                    return bad(format!("crossing {} slot {} does not point back to edge {id}", end.crossing, end.slot));
                }
            }
        }
        for (&cid, c) in &self.crossings {
            for (s, &e) in c.edges.iter().enumerate() {
                let Some(edge) = self.edges.get(&e) else {
                    return bad(format!("crossing {cid} slot {s} references missing edge {e}"));
                };
                let end = End::new(cid, s as u8);
                if edge.from != end && edge.to != end {
                    return bad(format!("crossing {cid} slot {s} is not an end of edge {e}"));
                }
            }
        }
        Ok(())
    }

    /// Components in a deterministic order: strands by smallest edge id, then free loops.
    pub fn components(&self) -> Vec<Component> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.edges.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut path = Vec::new();
            let mut e = start;
            loop {
                seen.insert(e);
                path.push(e);
                let to = self.edges[&e].to;
                e = self.edge_at(End::new(to.crossing, (to.slot + 2) % 4));
                if e == start {
                    break;
                }
            }
            out.push(Component::Strand(path));
        }
        out.extend((0..self.free_loops).map(|_| Component::FreeLoop));
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Map from edge to the index of its component in [`Diagram::components`].
    pub fn component_of_edges(&self) -> HashMap<EdgeId, usize> {
        let mut map = HashMap::new();
        for (i, c) in self.components().into_iter().enumerate() {
            if let Component::Strand(es) = c {
                for e in es {
                    map.insert(e, i);
                }
            }
        }
        map
    }

    /// Seifert circles: cycles of edges joined by the oriented smoothing.
    pub fn seifert_circles(&self) -> Vec<Vec<EdgeId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.edges.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut e = start;
            loop {
                seen.insert(e);
                cycle.push(e);
                e = self.smoothing_next(e);
                if e == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    /// Edge following `e` along its Seifert circle.
    pub fn smoothing_next(&self, e: EdgeId) -> EdgeId {
        let to = self.edges[&e].to;
        let sign = self.crossings[&to.crossing].sign;
        self.edge_at(End::new(to.crossing, smoothing_exit(sign, to.slot)))
    }

    fn dart_head(&self, d: Dart) -> End {
        let e = &self.edges[&d.edge];
        if d.forward {
            e.to
        } else {
            e.from
        }
    }

    /// Next dart around the face lying to the left of `d`.
    fn face_next(&self, d: Dart) -> Dart {
        let head = self.dart_head(d);
        let exit = End::new(head.crossing, (head.slot + 3) % 4);
        let e = self.edge_at(exit);
        Dart { edge: e, forward: self.edges[&e].from == exit }
    }

    /// Faces as cycles of darts; a forward dart agrees with the face orientation.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &e in self.edges.keys() {
            for forward in [true, false] {
                let start = Dart { edge: e, forward };
                if seen.contains(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = start;
                loop {
                    seen.insert(d);
                    face.push(d);
                    d = self.face_next(d);
                    if d == start {
                        break;
                    }
                }
                out.push(face);
            }
        }
        out
    }

    /// Crossing sets of the connected pieces, in order of smallest crossing id.
    pub fn pieces(&self) -> Vec<BTreeSet<CrossingId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.crossings.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut piece = BTreeSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(c) = stack.pop() {
                piece.insert(c);
                for &e in &self.crossings[&c].edges {
                    let edge = &self.edges[&e];
                    for nb in [edge.from.crossing, edge.to.crossing] {
                        if seen.insert(nb) {
                            stack.push(nb);
                        }
                    }
                }
            }
            out.push(piece);
        }
        out
    }

    /// True when the diagram is a single connected piece (or a single free loop).
    pub fn is_connected(&self) -> bool {
        match self.crossings.len() {
            0 => self.free_loops == 1,
            _ => self.free_loops == 0 && self.pieces().len() == 1,
        }
    }

    /// The sub-diagram on a set of crossings; ids are preserved.
    pub fn restrict(&self, piece: &BTreeSet<CrossingId>) -> Diagram {
        let crossings: BTreeMap<_, _> = piece.iter().map(|&c| (c, self.crossings[&c].clone())).collect();
        let edges = self
            .edges
            .iter()
            .filter(|(_, e)| piece.contains(&e.from.crossing))
            .map(|(&id, e)| (id, *e))
            .collect();
        Diagram { crossings, edges, free_loops: 0, next_crossing: self.next_crossing, next_edge: self.next_edge }
    }

    /// A braid whose closure is this diagram: each piece is braided separately
    /// and the results are placed side by side, free loops as idle strands.
    pub fn to_braid(&self) -> Result<BraidWord, DiagramError> {
        let mut out: Option<BraidWord> = None;
        let mut push = |b: BraidWord| {
            out = Some(match out.take() {
                None => b,
                Some(acc) => acc.block_sum(&b),
            });
        };
        for piece in self.pieces() {
            push(vogel_braid(&self.restrict(&piece))?);
        }
        for _ in 0..self.free_loops {
            push(BraidWord::new(1, vec![]).expect("one strand"));
        }
        out.ok_or(DiagramError::Empty)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DiagramRecord::from(self)).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<Diagram, DiagramError> {
        let rec: DiagramRecord = serde_json::from_str(text).map_err(|e| DiagramError::Invalid(e.to_string()))?;
        Diagram::try_from(rec)
    }
}

/// Slot used by a braid letter for the strand at the left (`right = false`) or
/// right position, on the incoming (top) or outgoing (bottom) side.
fn braid_slot(sign: Sign, right: bool, incoming: bool) -> u8 {
    // Positive: 0 = top-left, 1 = bottom-left, 2 = bottom-right, 3 = top-right.
    // Negative: 0 = top-right, 1 = top-left, 2 = bottom-left, 3 = bottom-right.
    match (sign, right, incoming) {
        (Sign::Positive, false, true) => 0,
        (Sign::Positive, false, false) => 1,
        (Sign::Positive, true, false) => 2,
        (Sign::Positive, true, true) => 3,
        (Sign::Negative, true, true) => 0,
        (Sign::Negative, false, true) => 1,
        (Sign::Negative, false, false) => 2,
        (Sign::Negative, true, false) => 3,
    }
}

#[derive(Serialize, Deserialize)]
struct CrossingRecord {
    id: CrossingId,
    sign: i64,
    /// Edge ids at slots 0..3, counterclockwise.
    edges: [EdgeId; 4],
    /// Slots of the under strand (in, out) and of the over strand (in, out).
    under: [u8; 2],
    over: [u8; 2],
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    id: EdgeId,
    from: End,
    to: End,
}

#[derive(Serialize, Deserialize)]
struct DiagramRecord {
    crossings: Vec<CrossingRecord>,
    edges: Vec<EdgeRecord>,
    free_loops: usize,
}

impl From<&Diagram> for DiagramRecord {
    fn from(d: &Diagram) -> Self {
        DiagramRecord {
            crossings: d
                .crossings
                .iter()
                .map(|(&id, c)| CrossingRecord {
                    id,
                    sign: c.sign.value(),
                    edges: c.edges,
                    under: [0, 2],
                    over: [over_in(c.sign), over_out(c.sign)],
                })
                .collect(),
            edges: d.edges.iter().map(|(&id, e)| EdgeRecord { id, from: e.from, to: e.to }).collect(),
            free_loops: d.free_loops,
        }
    }
}

impl TryFrom<DiagramRecord> for Diagram {
    type Error = DiagramError;

    fn try_from(r: DiagramRecord) -> Result<Self, Self::Error> {
        let mut d = Diagram { free_loops: r.free_loops, ..Diagram::default() };
        for c in r.crossings {
            let sign = Sign::from_value(c.sign).ok_or_else(|| DiagramError::Invalid(format!("crossing {} has sign {}", c.id, c.sign)))?;
            if c.under != [0, 2] || c.over != [over_in(sign), over_out(sign)] {
                return Err(DiagramError::Invalid(format!("crossing {} has over/under slots inconsistent with its sign", c.id)));
            }
            if d.crossings.insert(c.id, Crossing { sign, edges: c.edges }).is_some() {
                return Err(DiagramError::Invalid(format!("duplicate crossing {}", c.id)));
            }
        }
        for e in r.edges {
            if d.edges.insert(e.id, Edge { from: e.from, to: e.to }).is_some() {
                return Err(DiagramError::Invalid(format!("duplicate edge {}", e.id)));
            }
        }
        d.validate()?;
        d.next_crossing = d.crossings.keys().next_back().map_or(0, |&c| c + 1);
        d.next_edge = d.edges.keys().next_back().map_or(0, |&e| e + 1);
        Ok(d)
    }
}
