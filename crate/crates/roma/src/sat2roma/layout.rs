//! Rectilinear layout of a formula: variables on the horizontal axis,
//! clauses on the vertical axis, one polyline per incidence, and the
//! crossover expansion that removes every crossing.

use super::cnf::{Cnf, Literal};

/// Integer point of the layout plane.
pub type Point = (i64, i64);

/// Axis-parallel connection from a variable to a clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    /// 1-indexed variable.
    pub var: usize,
    /// 0-indexed clause.
    pub clause: usize,
    pub points: Vec<Point>,
}

/// Proper transversal intersection of a vertical and a horizontal segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub at: Point,
    /// Index of the polyline running vertically through `at`.
    pub vertical: usize,
    /// Index of the polyline running horizontally through `at`.
    pub horizontal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarLayout {
    /// Position of variable `v` at index `v - 1`.
    pub var_pos: Vec<Point>,
    /// Position of each clause.
    pub clause_pos: Vec<Point>,
    pub polylines: Vec<Polyline>,
    /// Sorted by `x`, then `y`.
    pub crossings: Vec<Crossing>,
    /// Spine through the variable positions, left to right, then through the
    /// crossover sites.
    pub core_path: Vec<Point>,
}

/// Every proper crossing between segments of different polylines. Segments
/// that only touch at an endpoint, or overlap collinearly, do not count.
pub fn find_crossings(polylines: &[Polyline]) -> Vec<Crossing> {
    let mut out = Vec::new();
    for (vi, pv) in polylines.iter().enumerate() {
        for sv in pv.points.windows(2) {
            let (a, b) = (sv[0], sv[1]);
            if a.0 != b.0 || a.1 == b.1 {
                continue;
            }
            let x = a.0;
            let (ylo, yhi) = (a.1.min(b.1), a.1.max(b.1));
            for (hi, ph) in polylines.iter().enumerate() {
                if hi == vi {
                    continue;
                }
                for sh in ph.points.windows(2) {
                    let (c, d) = (sh[0], sh[1]);
                    if c.1 != d.1 || c.0 == d.0 {
                        continue;
                    }
                    let y = c.1;
                    let (xlo, xhi) = (c.0.min(d.0), c.0.max(d.0));
                    if xlo < x && x < xhi && ylo < y && y < yhi {
                        out.push(Crossing { at: (x, y), vertical: vi, horizontal: hi });
                    }
                }
            }
        }
    }
    out.sort_by_key(|c| (c.at.0, c.at.1, c.vertical, c.horizontal));
    out
}

/// Variable `v` sits at `(v, 0)`, clause `j` at `(0, j + 1)`. The incidence
/// of `v` in clause `j` rises from the variable to the clause's height and
/// then runs left to the clause column. A variable occurring twice in one
/// clause gets a single polyline.
pub fn layout(cnf: &Cnf) -> PlanarLayout {
    let var_pos: Vec<Point> = (1..=cnf.num_vars()).map(|v| (v as i64, 0)).collect();
    let clause_pos: Vec<Point> = (0..cnf.clauses().len()).map(|j| (0, j as i64 + 1)).collect();
    let mut polylines = Vec::new();
    for (j, c) in cnf.clauses().iter().enumerate() {
        let mut vars: Vec<usize> = c.iter().map(|l| l.var).collect();
        vars.sort_unstable();
        vars.dedup();
        for v in vars {
            let y = j as i64 + 1;
            polylines.push(Polyline { var: v, clause: j, points: vec![(v as i64, 0), (v as i64, y), (0, y)] });
        }
    }
    let crossings = find_crossings(&polylines);
    let core_path = var_pos.clone();
    PlanarLayout { var_pos, clause_pos, polylines, crossings, core_path }
}

/// The 18 crossover clauses over the crossing signals `a` and `b` and the
/// auxiliaries `[alpha, beta, gamma, delta, xi]`. The copies `a2`, `b2` of the
/// original construction are the signals themselves.
pub fn crossover_clauses(a: usize, b: usize, aux: [usize; 5]) -> Vec<Vec<Literal>> {
    let [al, be, ga, de, xi] = aux;
    let p = Literal::pos;
    let n = Literal::neg;
    vec![
        vec![n(a), n(ga)],
        vec![p(a), p(b), p(ga)],
        vec![p(b), n(de)],
        vec![p(b), n(al)],
        vec![n(de), n(al)],
        vec![p(al), p(be), p(xi)],
        vec![n(al), n(be)],
        vec![p(a), n(be)],
        vec![n(a), p(b), p(be)],
        vec![p(a), n(al)],
        vec![n(a), n(b), p(al)],
        vec![n(b), n(be)],
        vec![n(b), n(ga)],
        vec![n(be), n(ga)],
        vec![p(ga), p(de), n(xi)],
        vec![n(ga), n(de)],
        vec![n(a), n(de)],
        vec![p(a), n(b), p(de)],
    ]
}

/// Replaces every crossing by a crossover site: five fresh variables and the
/// 18 crossover clauses, with the vertical polyline's variable as `a` and the
/// horizontal one's as `b`. Polylines are cut at each site, so the pieces
/// only meet at endpoints and the returned layout has no crossings. The new
/// variables and clauses are placed at the site; their wiring stays inside it.
pub fn insert_crossovers(lay: &PlanarLayout, cnf: &Cnf) -> (PlanarLayout, Cnf) {
    let mut clauses = cnf.clauses().to_vec();
    let mut num_vars = cnf.num_vars();
    let mut var_pos = lay.var_pos.clone();
    let mut clause_pos = lay.clause_pos.clone();
    let mut cuts: Vec<Vec<Point>> = vec![Vec::new(); lay.polylines.len()];
    for x in &lay.crossings {
        let a = lay.polylines[x.vertical].var;
        let b = lay.polylines[x.horizontal].var;
        let aux = [num_vars + 1, num_vars + 2, num_vars + 3, num_vars + 4, num_vars + 5];
        num_vars += 5;
        var_pos.extend(std::iter::repeat(x.at).take(5));
        let extra = crossover_clauses(a, b, aux);
        clause_pos.extend(std::iter::repeat(x.at).take(extra.len()));
        clauses.extend(extra);
        cuts[x.vertical].push(x.at);
        cuts[x.horizontal].push(x.at);
    }
    let mut polylines = Vec::new();
    for (pl, cut) in lay.polylines.iter().zip(&cuts) {
        polylines.extend(split_polyline(pl, cut));
    }
    let crossings = find_crossings(&polylines);
    let mut core_path = lay.core_path.clone();
    // snake through the sites: one pass per height, alternating direction
    let mut sites: Vec<Point> = lay.crossings.iter().map(|c| c.at).collect();
    sites.sort_by_key(|p| (p.1, p.0));
    sites.dedup();
    let mut rows: Vec<Vec<Point>> = Vec::new();
    for p in sites {
        match rows.last_mut() {
            Some(r) if r[0].1 == p.1 => r.push(p),
            _ => rows.push(vec![p]),
        }
    }
    for (i, mut r) in rows.into_iter().enumerate() {
        if i % 2 == 0 {
            r.reverse();
        }
        core_path.extend(r);
    }
    let out = PlanarLayout { var_pos, clause_pos, polylines, crossings, core_path };
    (out, Cnf::new(num_vars, clauses).expect("crossover clauses are well formed"))
}

/// Cuts `pl` at the given interior points, keeping the order along the line.
fn split_polyline(pl: &Polyline, cuts: &[Point]) -> Vec<Polyline> {
    if cuts.is_empty() {
        return vec![pl.clone()];
    }
    let mut pieces = Vec::new();
    let mut cur = vec![pl.points[0]];
    for seg in pl.points.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let mut inner: Vec<Point> = cuts.iter().copied().filter(|&p| strictly_inside(a, b, p)).collect();
        let dist = |p: &Point| (p.0 - a.0).abs() + (p.1 - a.1).abs();
        inner.sort_by_key(dist);
        for p in inner {
            cur.push(p);
            pieces.push(Polyline { var: pl.var, clause: pl.clause, points: std::mem::take(&mut cur) });
            cur.push(p);
        }
        cur.push(b);
    }
    pieces.push(Polyline { var: pl.var, clause: pl.clause, points: cur });
    pieces
}

fn strictly_inside(a: Point, b: Point, p: Point) -> bool {
    if a.0 == b.0 && p.0 == a.0 {
        a.1.min(b.1) < p.1 && p.1 < a.1.max(b.1)
    } else if a.1 == b.1 && p.1 == a.1 {
        a.0.min(b.0) < p.0 && p.0 < a.0.max(b.0)
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_incidence_has_no_crossing() {
        let f = Cnf::from_ints(1, &[&[1]]).unwrap();
        let l = layout(&f);
        assert!(l.crossings.is_empty());
        assert_eq!(l.polylines.len(), 1);
    }

    #[test]
    fn formula_without_clauses_keeps_the_core_path() {
        let f = Cnf::new(3, vec![]).unwrap();
        let l = layout(&f);
        assert!(l.polylines.is_empty());
        assert_eq!(l.core_path, vec![(1, 0), (2, 0), (3, 0)]);
    }

    #[test]
    fn polylines_are_axis_parallel() {
        let f = Cnf::from_ints(3, &[&[1, -2, 3], &[2, 3], &[-1, 2]]).unwrap();
        for p in layout(&f).polylines {
            for s in p.points.windows(2) {
                assert!(s[0].0 == s[1].0 || s[0].1 == s[1].1);
            }
        }
    }

    #[test]
    fn crossing_count_matches_the_closed_form() {
        // horizontal of (v, j) meets vertical of (v', j') iff v' < v and j < j'
        let f = Cnf::from_ints(4, &[&[3], &[2, 4], &[1], &[1, -3, 4]]).unwrap();
        let l = layout(&f);
        let inc: Vec<(i64, i64)> = l.polylines.iter().map(|p| (p.var as i64, p.clause as i64)).collect();
        let mut want = 0;
        for &(v, j) in &inc {
            for &(w, k) in &inc {
                if w < v && j < k {
                    want += 1;
                }
            }
        }
        assert_eq!(l.crossings.len(), want);
        let sorted = l.crossings.windows(2).all(|w| w[0].at <= w[1].at);
        assert!(sorted);
    }

    #[test]
    fn crossing_free_input_is_unchanged() {
        let f = Cnf::from_ints(2, &[&[1, 2]]).unwrap();
        let l = layout(&f);
        let (l2, f2) = insert_crossovers(&l, &f);
        assert_eq!(f2, f);
        assert_eq!(l2, l);
    }

    #[test]
    fn expansion_removes_crossings() {
        let f = Cnf::from_ints(3, &[&[3], &[2], &[1]]).unwrap();
        let l = layout(&f);
        assert_eq!(l.crossings.len(), 3);
        let (l2, f2) = insert_crossovers(&l, &f);
        assert!(l2.crossings.is_empty());
        assert_eq!(f2.num_vars(), 3 + 15);
        assert_eq!(f2.clauses().len(), 3 + 54);
        assert_eq!(l2.core_path.len(), 3 + 3);
    }
}
