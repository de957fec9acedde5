//! Saddle moves: oriented smoothings, bands between coherent arcs, and joins.
//!
//! Each move attaches one band, i.e. a cobordism of Euler characteristic −1.

use serde::{Deserialize, Serialize};

use super::{braid_slot, smoothing_exit, Component, Dart, Diagram, DiagramError, EdgeId, End};
use crate::braid::knm_braid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum SaddleMove {
    SmoothCrossing { crossing: usize },
    /// Components are indexed as in [`Diagram::components`] at the time of the move.
    JoinComponents { a: usize, b: usize },
    /// Band between two edges bounding a common face with the same orientation.
    Band { first: EdgeId, second: EdgeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaddleSchedule {
    pub moves: Vec<SaddleMove>,
    pub declared_bound: usize,
}

impl SaddleSchedule {
    pub fn replay(&self, start: &Diagram) -> Result<Diagram, DiagramError> {
        replay(start, self)
    }
}

pub fn replay(start: &Diagram, schedule: &SaddleSchedule) -> Result<Diagram, DiagramError> {
    let mut d = start.clone();
    for mv in &schedule.moves {
        d = d.apply(*mv)?;
    }
    Ok(d)
}

impl Diagram {
    pub fn apply(&self, mv: SaddleMove) -> Result<Diagram, DiagramError> {
        match mv {
            SaddleMove::SmoothCrossing { crossing } => self.smooth_crossing(crossing),
            SaddleMove::JoinComponents { a, b } => self.join_components(a, b),
            SaddleMove::Band { first, second } => self.band(first, second),
        }
    }

    /// Replaces a crossing by its oriented smoothing.
    pub fn smooth_crossing(&self, id: usize) -> Result<Diagram, DiagramError> {
        let c = self.crossings.get(&id).ok_or(DiagramError::UnknownCrossing(id))?;
        let sign = c.sign;
        let mut d = self.clone();
        for slot_in in [0, super::over_in(sign)] {
            let exit = smoothing_exit(sign, slot_in);
            let x = d.edge_at(End::new(id, slot_in));
            let y = d.edge_at(End::new(id, exit));
            if x == y {
                d.edges.remove(&x);
                d.free_loops += 1;
            } else {
                let target = d.edges[&y].to;
                d.edges.get_mut(&x).expect("edge exists").to = target;
                d.set_edge_at(target, x);
                d.edges.remove(&y);
            }
        }
        d.crossings.remove(&id);
        Ok(d)
    }

    /// Band move between two distinct edges that bound a common face with the
    /// same orientation relative to it; `A→B, C→D` become `A→D, C→B`.
    pub fn band(&self, first: EdgeId, second: EdgeId) -> Result<Diagram, DiagramError> {
        self.edge(first)?;
        self.edge(second)?;
        if first == second || !self.coherent_pair(first, second) {
            return Err(DiagramError::NoCoherentBand(first, second));
        }
        Ok(self.reconnect(first, second))
    }

    fn reconnect(&self, first: EdgeId, second: EdgeId) -> Diagram {
        let mut d = self.clone();
        let b = d.edges[&first].to;
        let dd = d.edges[&second].to;
        d.edges.get_mut(&first).expect("edge exists").to = dd;
        d.edges.get_mut(&second).expect("edge exists").to = b;
        d.set_edge_at(dd, first);
        d.set_edge_at(b, second);
        d
    }

    fn coherent_pair(&self, e1: EdgeId, e2: EdgeId) -> bool {
        self.faces().iter().any(|f| {
            [true, false]
                .iter()
                .any(|&fw| f.contains(&Dart { edge: e1, forward: fw }) && f.contains(&Dart { edge: e2, forward: fw }))
        })
    }

    /// Merges two components with one band.
    ///
    /// Free loops are absorbed directly. Components in different connected
    /// pieces are joined by a connected sum; components in the same piece need a
    /// face on which arcs of both run with the same orientation.
    pub fn join_components(&self, a: usize, b: usize) -> Result<Diagram, DiagramError> {
        if a == b {
            return Err(DiagramError::SameComponent);
        }
        let comps = self.components();
        let ca = comps.get(a).ok_or(DiagramError::UnknownComponent(a))?;
        let cb = comps.get(b).ok_or(DiagramError::UnknownComponent(b))?;
        let (ea, eb) = match (ca, cb) {
            (Component::FreeLoop, _) | (_, Component::FreeLoop) => {
                let mut d = self.clone();
                d.free_loops -= 1;
                return Ok(d);
            }
            (Component::Strand(ea), Component::Strand(eb)) => (ea, eb),
        };
        let pieces = self.pieces();
        let piece_of = |e: EdgeId| pieces.iter().position(|p| p.contains(&self.edges[&e].from.crossing));
        if piece_of(ea[0]) != piece_of(eb[0]) {
            let (x, y) = (*ea.iter().min().expect("nonempty"), *eb.iter().min().expect("nonempty"));
            return Ok(self.reconnect(x, y));
        }
        let comp = self.component_of_edges();
        for face in self.faces() {
            for (i, d1) in face.iter().enumerate() {
                if comp[&d1.edge] != a {
                    continue;
                }
                if let Some(d2) = face[i + 1..].iter().chain(&face[..i]).find(|d2| comp[&d2.edge] == b && d2.forward == d1.forward) {
                    return Ok(self.reconnect(d1.edge, d2.edge));
                }
            }
        }
        Err(DiagramError::NoCoherentBand(ea[0], eb[0]))
    }
}

/// Smooths every crossing, then joins the resulting loops into one.
pub fn reduce_to_unknot(d: &Diagram) -> SaddleSchedule {
    let mut moves: Vec<SaddleMove> = d.crossings.keys().map(|&c| SaddleMove::SmoothCrossing { crossing: c }).collect();
    let mut current = d.clone();
    for mv in &moves {
        current = current.apply(*mv).expect("crossing ids are stable");
    }
    for _ in 1..current.component_count() {
        moves.push(SaddleMove::JoinComponents { a: 0, b: 1 });
    }
    let bound = 2 * d.crossing_count() + d.component_count().saturating_sub(1);
    SaddleSchedule { moves, declared_bound: bound }
}

/// Bands carrying the closure of K(n1+n2, m) to K(n1, m) ⊔ K(n2, m).
///
/// Commuting distant letters rewrites the K(n1+n2, m) word as a product of a
/// shifted K(n2, m) word (the first n2 letters of each block) followed by the
/// K(n1, m) word, without changing the diagram. The two factors share the m
/// strand positions n1+1..n1+m. For each shared position, innermost first, one
/// band joins the arc entering the first factor to the arc leaving it, which
/// detaches the two factors there. After m bands the closures separate.
pub fn split_knm(n1: usize, n2: usize, m: usize) -> Result<SaddleSchedule, DiagramError> {
    if n1 == 0 || n2 == 0 || m == 0 {
        return Err(DiagramError::Invalid(format!("split_knm({n1},{n2},{m}) needs positive parameters")));
    }
    let n = n1 + n2;
    let word = knm_braid(n, m).map_err(|e| DiagramError::Invalid(e.to_string()))?;
    let d = Diagram::from_braid(&word);
    let letters = word.letters();
    let in_first_factor = |t: usize| t % n < n2;
    let mut moves = Vec::with_capacity(m);
    for r in n1 + 1..=n1 + m {
        let touching: Vec<usize> =
            (0..letters.len()).filter(|&t| in_first_factor(t) && (letters[t].index == r || letters[t].index + 1 == r)).collect();
        let (&first, &last) = (touching.first().expect("factor meets r"), touching.last().expect("factor meets r"));
        let edge_at = |t: usize, incoming: bool| {
            let right = letters[t].index + 1 == r;
            d.crossings[&t].edges[braid_slot(letters[t].sign, right, incoming) as usize]
        };
        moves.push(SaddleMove::Band { first: edge_at(last, false), second: edge_at(first, true) });
    }
    Ok(SaddleSchedule { moves, declared_bound: m })
}
