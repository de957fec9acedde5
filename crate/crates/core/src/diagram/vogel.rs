//! Vogel's algorithm: braid a connected diagram by Reidemeister II moves.
//!
//! A face whose boundary contains arcs of two different Seifert circles running
//! the same way around it is a defect. Pushing one arc over the other across the
//! face removes it without changing the number of Seifert circles. With no
//! defects left the circles are nested coherently and the braid can be read off
//! along a ray from the axis.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use super::{Crossing, Diagram, DiagramError, Edge, EdgeId, End};
use crate::braid::{BraidWord, Letter, Sign};

#[derive(Debug, Clone)]
pub struct VogelReport {
    pub braid: BraidWord,
    pub moves: usize,
    /// The braided diagram the word was read from.
    pub diagram: Diagram,
}

pub fn vogel_braid(d: &Diagram) -> Result<BraidWord, DiagramError> {
    vogel(d).map(|r| r.braid)
}

pub fn vogel(d: &Diagram) -> Result<VogelReport, DiagramError> {
    if !d.is_connected() {
        return Err(if d.crossing_count() == 0 && d.free_loops() == 0 { DiagramError::Empty } else { DiagramError::Disconnected });
    }
    if d.crossing_count() == 0 {
        let braid = BraidWord::new(1, vec![]).expect("one strand");
        return Ok(VogelReport { braid, moves: 0, diagram: d.clone() });
    }
    let cap = 10 * d.crossing_count() * d.crossing_count();
    let mut cur = d.clone();
    let mut moves = 0;
    while let Some((e1, e2, forward)) = find_defect(&cur) {
        if moves >= cap {
            return Err(DiagramError::BraidingCap(cap));
        }
        cur = cur.reidemeister_two(e1, e2, forward);
        moves += 1;
    }
    let braid = read_braid(&cur)?;
    Ok(VogelReport { braid, moves, diagram: cur })
}

fn circle_index(d: &Diagram) -> (Vec<Vec<EdgeId>>, HashMap<EdgeId, usize>) {
    let circles = d.seifert_circles();
    let mut of = HashMap::new();
    for (i, c) in circles.iter().enumerate() {
        for &e in c {
            of.insert(e, i);
        }
    }
    (circles, of)
}

fn find_defect(d: &Diagram) -> Option<(EdgeId, EdgeId, bool)> {
    let (_, circle) = circle_index(d);
    let mut faces = d.faces();
    // Small faces first keeps the inflation local.
    faces.sort_by_key(|f| f.len());
    for face in &faces {
        for (i, a) in face.iter().enumerate() {
            for b in &face[i + 1..] {
                if a.forward == b.forward && circle[&a.edge] != circle[&b.edge] {
                    return Some((a.edge, b.edge, a.forward));
                }
            }
        }
    }
    None
}

impl Diagram {
    /// Pushes `e1` over `e2` across the face they share, creating two crossings.
    ///
    /// `forward` says whether both edges run along the face's orientation.
    fn reidemeister_two(&self, e1: EdgeId, e2: EdgeId, forward: bool) -> Diagram {
        let mut d = self.clone();
        let Edge { to: b, .. } = d.edges[&e1];
        let Edge { to: dd, .. } = d.edges[&e2];
        let (s1, s2) = if forward { (Sign::Positive, Sign::Negative) } else { (Sign::Negative, Sign::Positive) };
        let x1 = d.fresh_crossing(s1);
        let x2 = d.fresh_crossing(s2);
        let f = |c, s| End::new(c, s);
        // Slots of the new edges, read off the local picture of the finger move.
        let (e1_to, f1, f2, e2_to, f3, f4) = if forward {
            (f(x1, 3), (f(x1, 1), f(x2, 1)), (f(x2, 3), b), f(x2, 0), (f(x2, 2), f(x1, 0)), (f(x1, 2), dd))
        } else {
            (f(x1, 1), (f(x1, 3), f(x2, 3)), (f(x2, 1), b), f(x2, 0), (f(x2, 2), f(x1, 0)), (f(x1, 2), dd))
        };
        d.edges.get_mut(&e1).expect("edge exists").to = e1_to;
        d.edges.get_mut(&e2).expect("edge exists").to = e2_to;
        d.set_edge_at(e1_to, e1);
        d.set_edge_at(e2_to, e2);
        for (from, to) in [f1, f2, f3, f4] {
            let id = d.fresh_edge(from, to);
            d.set_edge_at(from, id);
            d.set_edge_at(to, id);
        }
        debug_assert!(d.validate().is_ok());
        d
    }
}

fn read_braid(d: &Diagram) -> Result<BraidWord, DiagramError> {
    let bug = |m: &str| DiagramError::Invalid(format!("braid readout: {m}"));
    let (circles, circle) = circle_index(d);
    let s = circles.len();
    // Each crossing joins the circles of its two incoming edges.
    let mut joins: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut nbrs = vec![BTreeSet::new(); s];
    for (&id, c) in &d.crossings {
        let (a, b) = (circle[&c.edges[0]], circle[&c.edges[super::over_in(c.sign) as usize]]);
        if a == b {
            return Err(bug("crossing joins a circle to itself"));
        }
        joins.insert(id, (a, b));
        nbrs[a].insert(b);
        nbrs[b].insert(a);
    }
    if nbrs.iter().any(|n| n.len() > 2) {
        return Err(bug("Seifert circles are not nested"));
    }
    let ends: Vec<usize> = (0..s).filter(|&i| nbrs[i].len() == 1).collect();
    if ends.len() != 2 {
        return Err(bug("Seifert circles do not form a chain"));
    }
    let faces = d.faces();
    // The axis lies in the face bounded by an end circle alone, traversed along
    // the circle's orientation.
    let axis = ends.iter().find_map(|&e| {
        faces
            .iter()
            .find(|f| f.iter().all(|x| circle[&x.edge] == e && x.forward) && f.len() == circles[e].len())
            .map(|f| (e, f.clone()))
    });
    let (inner, _) = axis.ok_or_else(|| bug("no axis face"))?;
    let mut order = vec![inner];
    while order.len() < s {
        let last = *order.last().expect("nonempty");
        let next = nbrs[last].iter().copied().find(|c| !order.contains(c)).ok_or_else(|| bug("chain broken"))?;
        order.push(next);
    }
    let mut level = vec![0; s];
    for (l, &c) in order.iter().enumerate() {
        level[c] = l;
    }
    // A ray from the axis: cross each circle once, moving outwards face by face.
    let face_of: HashMap<super::Dart, usize> =
        faces.iter().enumerate().flat_map(|(i, f)| f.iter().map(move |&x| (x, i))).collect();
    let mut current = faces.iter().position(|f| f.iter().all(|x| circle[&x.edge] == inner && x.forward)).expect("axis face");
    let mut cut = vec![0; s];
    for l in 0..s {
        let c = order[l];
        let dart = *faces[current].iter().find(|x| circle[&x.edge] == c).ok_or_else(|| bug("ray lost"))?;
        cut[l] = dart.edge;
        current = face_of[&super::Dart { edge: dart.edge, forward: !dart.forward }];
    }
    // Crossing order along each circle from its cut gives a partial order.
    let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut indeg: HashMap<usize, usize> = d.crossings.keys().map(|&c| (c, 0)).collect();
    for l in 0..s {
        let start = cut[l];
        let mut seq = Vec::new();
        let mut e = start;
        loop {
            seq.push(d.edges[&e].to.crossing);
            e = d.smoothing_next(e);
            if e == start {
                break;
            }
        }
        for w in seq.windows(2) {
            succ.entry(w[0]).or_default().push(w[1]);
            *indeg.get_mut(&w[1]).expect("crossing") += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = indeg.iter().filter(|(_, &v)| v == 0).map(|(&c, _)| Reverse(c)).collect();
    let mut letters = Vec::with_capacity(d.crossings.len());
    while let Some(Reverse(c)) = heap.pop() {
        let Crossing { sign, .. } = d.crossings[&c];
        let (a, b) = joins[&c];
        let lo = level[a].min(level[b]);
        if level[a].max(level[b]) != lo + 1 {
            return Err(bug("crossing between non-adjacent circles"));
        }
        // Level 0 is next to the axis, which is strand position s.
        letters.push(Letter { index: s - 1 - lo, sign });
        for &n in succ.get(&c).map(|v| v.as_slice()).unwrap_or(&[]) {
            let v = indeg.get_mut(&n).expect("crossing");
            *v -= 1;
            if *v == 0 {
                heap.push(Reverse(n));
            }
        }
    }
    if letters.len() != d.crossings.len() {
        return Err(bug("cyclic crossing order"));
    }
    BraidWord::new(s, letters).map_err(|e| bug(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{closure_info, knm_braid, torus_braid};

    #[test]
    fn braided_input_reads_back() {
        for b in [torus_braid(2, 3).unwrap(), knm_braid(3, 2).unwrap(), BraidWord::from_signed(3, &[1, -2, 1, -2]).unwrap()] {
            let r = vogel(&Diagram::from_braid(&b)).unwrap();
            assert_eq!(r.moves, 0);
            assert_eq!(r.braid.strands(), b.strands());
            let mut got: Vec<i64> = r.braid.letters().iter().map(|l| l.signed()).collect();
            let mut want: Vec<i64> = b.letters().iter().map(|l| l.signed()).collect();
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn single_loop_and_disconnected() {
        let b = vogel_braid(&Diagram::unlink(1)).unwrap();
        assert_eq!((b.strands(), b.len()), (1, 0));
        assert_eq!(vogel_braid(&Diagram::unlink(2)), Err(DiagramError::Disconnected));
        let split = Diagram::from_braid(&BraidWord::from_signed(4, &[1, 1, 1, 3, 3]).unwrap());
        assert_eq!(vogel_braid(&split), Err(DiagramError::Disconnected));
    }

    #[test]
    fn joined_hopf_needs_braiding() {
        let hopf = Diagram::from_braid(&torus_braid(2, 2).unwrap());
        let j = hopf.join_components(0, 1).unwrap();
        let r = vogel(&j).unwrap();
        let info = closure_info(&r.braid);
        assert_eq!(info.components, 1);
        assert_eq!(info.writhe, j.writhe());
    }
}
