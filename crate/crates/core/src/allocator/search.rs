use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check::Assignment;
use super::constraints::{detuning_affine, row_strength, ConstraintKind, ConstraintSet};
use super::expr::{Affine, Interval};
use super::problem::AllocationProblem;
use crate::error::Error;
use crate::statics::{static_zz, ZzMethod};

/// A strength or margin row written over the decision variables alone,
/// with each ω_p replaced by its resonance expression.
struct Row {
    index: usize,
    lhs: Affine,
    /// Parametric-limit rows compare a signed ω_p, margin rows |Δ + mω_p|.
    signed: bool,
}

enum Status {
    Sure,
    Violated,
    Unknown,
}

pub(crate) enum Outcome {
    Found(Vec<f64>),
    Infeasible(Vec<usize>),
    Exhausted,
}

/// Branch-and-prune over the decision box.
pub(crate) struct Searcher<'a> {
    problem: &'a AllocationProblem,
    set: &'a ConstraintSet,
    rows: Vec<Row>,
    /// ω_p of each target as an affine form over the decision variables.
    drives: Vec<Affine>,
    domain: Vec<Interval>,
    rng: ChaCha8Rng,
    pub(crate) boxes: usize,
    varying: bool,
}

impl<'a> Searcher<'a> {
    /// `offsets[k][i]` is added to the bare detuning of catalog row i under target k.
    pub(crate) fn new(
        problem: &'a AllocationProblem,
        set: &'a ConstraintSet,
        domain: Vec<Interval>,
        offsets: Option<&[Vec<f64>]>,
    ) -> Self {
        let nv = problem.variables.len();
        let restrict = |a: &Affine| Affine {
            constant: a.constant,
            coefficients: a.coefficients[..nv].to_vec(),
        };
        let offset = |k: usize, i: usize| offsets.map_or(0.0, |o| o[k][i]);
        let det = |k: usize, i: usize| restrict(&detuning_affine(problem, &set.catalog[i], set.width)).shifted(offset(k, i));
        let drives: Vec<Affine> = problem
            .targets
            .iter()
            .enumerate()
            .map(|(k, t)| det(k, set.target_rows[k]).scaled(-1.0 / t.harmonic as f64))
            .collect();
        let mut rows = Vec::new();
        let mut varying = false;
        for (index, c) in set.constraints.iter().enumerate() {
            match c.kind {
                ConstraintKind::ParametricLimit => rows.push(Row {
                    index,
                    lhs: drives[c.target.expect("target")].clone(),
                    signed: true,
                }),
                ConstraintKind::DetuningMargin => {
                    let k = c.target.expect("target");
                    let m = c.harmonic.expect("harmonic") as f64;
                    rows.push(Row {
                        index,
                        lhs: det(k, c.transition.expect("transition")).plus(&drives[k].scaled(m)),
                        signed: false,
                    });
                }
                ConstraintKind::ZzCap => varying = true,
                _ => {}
            }
            if matches!(c.kind, ConstraintKind::ParametricLimit | ConstraintKind::DetuningMargin) && c.fixed_strength.is_none() {
                varying = true;
            }
        }
        Searcher {
            problem,
            set,
            rows,
            drives,
            domain,
            rng: ChaCha8Rng::seed_from_u64(problem.seed),
            boxes: 0,
            varying,
        }
    }

    pub(crate) fn drive_frequencies(&self, x: &[f64]) -> Vec<f64> {
        self.drives.iter().map(|d| d.eval(x)).collect()
    }

    pub(crate) fn assignment(&self, x: Vec<f64>) -> Assignment {
        let drive_frequencies = self.drive_frequencies(&x);
        Assignment {
            values: x,
            drive_frequencies,
        }
    }

    /// Row strengths at a point. Strengths that depend on the variables are
    /// evaluated there; a failed evaluation yields infinity.
    fn strengths(&self, x: &[f64]) -> Vec<f64> {
        let fixed = |r: &Row| self.set.constraints[r.index].fixed_strength;
        if !self.varying || self.rows.iter().all(|r| fixed(r).is_some()) {
            return self.rows.iter().map(|r| fixed(r).unwrap_or(f64::INFINITY)).collect();
        }
        let wp = self.drive_frequencies(x);
        let system = self.problem.system_at(x);
        let entries = system.as_ref().ok().and_then(|s| self.problem.catalog(s).ok());
        self.rows
            .iter()
            .map(|r| {
                if let Some(g) = fixed(r) {
                    return g;
                }
                match (&system, &entries) {
                    (Ok(s), Some(e)) => row_strength(self.problem, self.set, &self.set.constraints[r.index], s, e, &wp)
                        .unwrap_or(f64::INFINITY),
                    _ => f64::INFINITY,
                }
            })
            .collect()
    }

    fn value(r: &Row, x: &[f64]) -> f64 {
        let v = r.lhs.eval(x);
        if r.signed {
            v
        } else {
            v.abs()
        }
    }

    fn classify(&self, r: &Row, bx: &[Interval], need: f64, exact: bool) -> Status {
        let range = r.lhs.range(bx);
        let (lo, hi) = if r.signed { (range.lo, range.hi) } else { (range.mig(), range.mag()) };
        // strengths taken at the box center get a band before they prune
        let (sure, bad) = if exact { (need, need) } else { (1.25 * need, 0.75 * need) };
        if lo >= sure {
            Status::Sure
        } else if hi < bad {
            Status::Violated
        } else {
            Status::Unknown
        }
    }

    fn zz_ok(&self, x: &[f64]) -> bool {
        match self.problem.zz_cap {
            None => true,
            Some(cap) => self
                .problem
                .system_at(x)
                .and_then(|s| static_zz(&s, ZzMethod::Exact))
                .map(|z| z.abs() <= cap)
                .unwrap_or(false),
        }
    }

    /// Smallest value/strength ratio at a point.
    pub(crate) fn worst_ratio(&self, x: &[f64]) -> f64 {
        let g = self.strengths(x);
        self.rows
            .iter()
            .zip(&g)
            .map(|(r, g)| if *g > 0.0 { Self::value(r, x) / g } else { f64::INFINITY })
            .fold(f64::INFINITY, f64::min)
    }

    fn point_ok(&self, x: &[f64], margin: f64) -> bool {
        self.worst_ratio(x) >= margin && self.zz_ok(x)
    }

    fn center(bx: &[Interval]) -> Vec<f64> {
        bx.iter().map(|i| i.mid()).collect()
    }

    fn split_dimension(&self, bx: &[Interval], dims: &[bool]) -> Option<usize> {
        let res = self.problem.resolution;
        (0..bx.len())
            .filter(|&k| dims[k] && bx[k].width() > res)
            .max_by(|&a, &b| bx[a].width().partial_cmp(&bx[b].width()).unwrap_or(Ordering::Equal))
    }

    /// Normalized slack of the tightest row at a point.
    fn score(&self, x: &[f64], g: &[f64], margin: f64) -> f64 {
        self.rows
            .iter()
            .zip(g)
            .map(|(r, g)| {
                let need = margin * g;
                if need.is_finite() && need > 0.0 {
                    (Self::value(r, x) - need) / need
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn children(&mut self, bx: &[Interval], k: usize, g: &[f64], margin: f64) -> [Vec<Interval>; 2] {
        let (a, b) = bx[k].bisect();
        let mut left = bx.to_vec();
        left[k] = a;
        let mut right = bx.to_vec();
        right[k] = b;
        let sl = self.score(&Self::center(&left), g, margin);
        let sr = self.score(&Self::center(&right), g, margin);
        let left_first = if sl == sr { self.rng.gen_bool(0.5) } else { sl > sr };
        if left_first {
            [left, right]
        } else {
            [right, left]
        }
    }

    /// Depth-first search for a point where every row holds at `margin`.
    pub(crate) fn feasible(&mut self, margin: f64) -> Outcome {
        let n = self.domain.len();
        let mut stack = vec![self.domain.clone()];
        let mut blame = vec![0usize; self.set.constraints.len()];
        let mut start = 0;
        while let Some(bx) = stack.pop() {
            self.boxes += 1;
            start += 1;
            if start > self.problem.max_boxes {
                return Outcome::Exhausted;
            }
            let c = Self::center(&bx);
            let g = self.strengths(&c);
            let mut dims = vec![false; n];
            let mut all_sure = true;
            let mut dead = None;
            for (r, g) in self.rows.iter().zip(&g) {
                let exact = self.set.constraints[r.index].fixed_strength.is_some();
                match self.classify(r, &bx, margin * g, exact) {
                    Status::Sure => {}
                    Status::Violated => {
                        dead = Some(r.index);
                        break;
                    }
                    Status::Unknown => {
                        all_sure = false;
                        for k in r.lhs.support() {
                            dims[k] = true;
                        }
                    }
                }
            }
            if let Some(i) = dead {
                blame[i] += 1;
                continue;
            }
            if all_sure || self.split_dimension(&bx, &dims).is_none() {
                if self.point_ok(&c, margin) {
                    return Outcome::Found(c);
                }
                dims = vec![true; n];
            }
            if let Some(k) = self.split_dimension(&bx, &dims) {
                let [first, second] = self.children(&bx, k, &g, margin);
                stack.push(second);
                stack.push(first);
            }
        }
        let mut order: Vec<usize> = (0..blame.len()).filter(|&i| blame[i] > 0).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(blame[i]));
        order.truncate(5);
        Outcome::Infeasible(order)
    }

    /// Upper bound of the worst ratio over the whole domain.
    pub(crate) fn ratio_ceiling(&self) -> f64 {
        let g = self.strengths(&Self::center(&self.domain));
        self.rows
            .iter()
            .zip(&g)
            .map(|(r, g)| {
                let range = r.lhs.range(&self.domain);
                let top = if r.signed { range.hi } else { range.mag() };
                if *g > 0.0 {
                    top / g
                } else {
                    f64::INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Σ (2g)²/((2g)² + Δ²) over the margin rows at a point.
    fn bound_sum(&self, x: &[f64], g: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(g)
            .filter(|(r, _)| !r.signed)
            .map(|(r, g)| lorentzian(*g, Self::value(r, x)))
            .sum()
    }

    fn bound_floor(&self, bx: &[Interval], g: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(g)
            .filter(|(r, _)| !r.signed)
            .map(|(r, g)| lorentzian(*g, r.lhs.range(bx).mag()))
            .sum()
    }

    /// Best-first branch-and-bound on the summed bound, starting from a
    /// feasible incumbent.
    pub(crate) fn min_bound(&mut self, margin: f64, incumbent: Vec<f64>) -> Vec<f64> {
        let n = self.domain.len();
        let g0 = self.strengths(&incumbent);
        let mut best_val = self.bound_sum(&incumbent, &g0);
        let mut best = incumbent;
        let mut heap = BinaryHeap::new();
        let g = self.strengths(&Self::center(&self.domain));
        heap.push(Node {
            floor: self.bound_floor(&self.domain, &g),
            bx: self.domain.clone(),
        });
        let mut count = 0;
        while let Some(node) = heap.pop() {
            if node.floor >= best_val * (1.0 - 1e-3) {
                break;
            }
            count += 1;
            self.boxes += 1;
            if count > self.problem.max_boxes {
                break;
            }
            let c = Self::center(&node.bx);
            let g = self.strengths(&c);
            let exact_all = self.rows.iter().all(|r| self.set.constraints[r.index].fixed_strength.is_some());
            if self.rows.iter().zip(&g).any(|(r, g)| {
                let exact = self.set.constraints[r.index].fixed_strength.is_some();
                matches!(self.classify(r, &node.bx, margin * g, exact), Status::Violated)
            }) {
                continue;
            }
            if self.point_ok(&c, margin) {
                let v = self.bound_sum(&c, &g);
                if v < best_val {
                    best_val = v;
                    best = c.clone();
                }
            }
            let dims = vec![true; n];
            if let Some(k) = self.split_dimension(&node.bx, &dims) {
                let (a, b) = node.bx[k].bisect();
                for half in [a, b] {
                    let mut bx = node.bx.clone();
                    bx[k] = half;
                    let gc = if exact_all { g.clone() } else { self.strengths(&Self::center(&bx)) };
                    heap.push(Node {
                        floor: self.bound_floor(&bx, &gc),
                        bx,
                    });
                }
            }
        }
        best
    }
}

fn lorentzian(g: f64, detuning: f64) -> f64 {
    if !g.is_finite() {
        return 0.0;
    }
    let g2 = (2.0 * g).powi(2);
    if g2 + detuning * detuning == 0.0 {
        return 0.0;
    }
    g2 / (g2 + detuning * detuning)
}

struct Node {
    floor: f64,
    bx: Vec<Interval>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.floor == other.floor
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // min-heap on the floor
    fn cmp(&self, other: &Self) -> Ordering {
        other.floor.partial_cmp(&self.floor).unwrap_or(Ordering::Equal)
    }
}

pub(crate) fn unsatisfiable(problem: &AllocationProblem, set: &ConstraintSet, outcome: Outcome) -> Error {
    match outcome {
        Outcome::Exhausted => Error::Unsatisfiable(format!(
            "search budget of {} boxes exhausted before a feasible point was found",
            problem.max_boxes
        )),
        Outcome::Infeasible(rows) => {
            let names: Vec<String> = rows.iter().map(|&i| set.constraints[i].label.clone()).collect();
            Error::Unsatisfiable(format!(
                "no point within bounds and resolution; tightest rows: {}",
                if names.is_empty() { "none".to_string() } else { names.join("; ") }
            ))
        }
        Outcome::Found(_) => unreachable!("a found point is not an error"),
    }
}
