//! Equational proof search modulo interchange.
//!
//! A rule side matches a diagram when, in some linearization of the
//! diagram's interchange class, a contiguous block of slices equals the side
//! shifted right by a whisker width `k`, and the word at the start of the
//! block contains the side's input at `k`. Rewriting replaces that block by
//! the other side, shifted by the same `k`.
//!
//! [`prove_equal`] runs a breadth-first search from both ends at once, over
//! canonical forms, applying every rule in both orientations. Each side is
//! explored independently, one level per round, which makes the outcome
//! symmetric in `lhs` and `rhs` and independent of the execution mode.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exchange::{self, InterchangeClass, DEFAULT_LINEARIZATION_CAP};
use crate::exec::{self, Exec};
use crate::moncat::{Diagram, ObjectWord, Signature, Slice};

/// Largest number of slices allowed on either side of a rule.
pub const MAX_RULE_SIDE: usize = 6;

/// An undirected equation between two diagrams with identical boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: Diagram,
    pub rhs: Diagram,
}

impl RewriteRule {
    pub fn new(name: impl Into<String>, lhs: Diagram, rhs: Diagram) -> Result<RewriteRule> {
        let name = name.into();
        if lhs.input() != rhs.input() {
            return Err(Error::BoundaryMismatch {
                left: lhs.input().clone(),
                right: rhs.input().clone(),
            });
        }
        if lhs.output() != rhs.output() {
            return Err(Error::BoundaryMismatch {
                left: lhs.output().clone(),
                right: rhs.output().clone(),
            });
        }
        if lhs.len() > MAX_RULE_SIDE || rhs.len() > MAX_RULE_SIDE {
            return Err(Error::Signature(format!(
                "rule `{name}` has a side longer than {MAX_RULE_SIDE} slices"
            )));
        }
        Ok(RewriteRule { name, lhs, rhs })
    }

    /// `(source, target)` for the given orientation.
    pub fn oriented(&self, direction: Direction) -> (&Diagram, &Diagram) {
        match direction {
            Direction::Forward => (&self.lhs, &self.rhs),
            Direction::Backward => (&self.rhs, &self.lhs),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An occurrence of a rule side: slices `start..end` of the given
/// linearization (index into the sorted interchange class).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Match {
    pub linearization: usize,
    pub start: usize,
    pub end: usize,
    pub left_whisker: usize,
    pub right_whisker: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub direction: Direction,
    pub at: Match,
}

/// A replayable equational proof from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub start: Diagram,
    pub steps: Vec<TraceStep>,
    pub end: Diagram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_depth_per_side: usize,
    pub max_nodes: usize,
    pub linearization_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth_per_side: 8,
            max_nodes: 50_000,
            linearization_cap: DEFAULT_LINEARIZATION_CAP,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth_per_side == 0 || self.max_nodes == 0 || self.linearization_cap == 0 {
            return Err(Error::Signature("search budget fields must be positive".into()));
        }
        Ok(())
    }
}

/// Where a failed search stopped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub rounds: usize,
    pub forward_nodes: usize,
    pub backward_nodes: usize,
    pub forward_frontier: usize,
    pub backward_frontier: usize,
    /// Rewrite results dropped because their class exceeded the linearization cap.
    pub skipped: usize,
    /// Both frontiers emptied before any budget limit was reached.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveError {
    Typing(Error),
    /// Not a disproof: the budget ran out before the two searches met.
    Exhausted(SearchStats),
}

impl fmt::Display for ProveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProveError::Typing(e) => write!(f, "{e}"),
            ProveError::Exhausted(s) => write!(
                f,
                "budget exhausted after {} rounds ({} forward / {} backward nodes, frontiers {} / {}{})",
                s.rounds,
                s.forward_nodes,
                s.backward_nodes,
                s.forward_frontier,
                s.backward_frontier,
                if s.complete { ", search space closed" } else { "" }
            ),
        }
    }
}

impl std::error::Error for ProveError {}

/// `(start, k)` pairs where `side` occurs in `lin`.
fn block_matches(lin: &Diagram, words: &[ObjectWord], side: &Diagram) -> Vec<(usize, usize)> {
    let n = lin.len();
    let m = side.len();
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let pattern = side.input();
    for (start, w) in words.iter().enumerate().take(n - m + 1) {
        if w.len() < pattern.len() {
            continue;
        }
        if m == 0 {
            for k in 0..=w.len() - pattern.len() {
                if w.embeds_at(pattern, k) {
                    out.push((start, k));
                }
            }
            continue;
        }
        let first = lin.slices()[start];
        let Some(k) = first.offset.checked_sub(side.slices()[0].offset) else {
            continue;
        };
        let block = &lin.slices()[start..start + m];
        let same = block
            .iter()
            .zip(side.slices())
            .all(|(a, b)| a.gen == b.gen && a.offset == b.offset + k);
        if same && w.embeds_at(pattern, k) {
            out.push((start, k));
        }
    }
    out
}

fn splice_block(lin: &Diagram, start: usize, end: usize, k: usize, replacement: &Diagram) -> Diagram {
    let mut slices: Vec<Slice> = Vec::with_capacity(lin.len() - (end - start) + replacement.len());
    slices.extend_from_slice(&lin.slices()[..start]);
    slices.extend(replacement.shifted_slices(k));
    slices.extend_from_slice(&lin.slices()[end..]);
    Diagram::from_parts_unchecked(lin.input().clone(), slices, lin.output().clone())
}

/// All occurrences of `side` in any linearization of `d`, with identical
/// rewrite contexts reported once.
pub fn find_matches(sig: &Signature, d: &Diagram, side: &Diagram, cap: usize) -> Result<Vec<Match>> {
    let class = exchange::interchange_class(sig, d, cap)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (li, lin) in class.diagrams().enumerate() {
        let words = lin.words(sig);
        for (start, k) in block_matches(lin, &words, side) {
            let end = start + side.len();
            let context = (
                lin.slices()[..start].to_vec(),
                lin.slices()[end..].to_vec(),
                k,
                words[start].clone(),
            );
            if !seen.insert(context) {
                continue;
            }
            out.push(Match {
                linearization: li,
                start,
                end,
                left_whisker: k,
                right_whisker: words[start].len() - k - side.input().len(),
            });
        }
    }
    Ok(out)
}

fn validate_match(sig: &Signature, lin: &Diagram, side: &Diagram, m: &Match) -> Result<()> {
    let bad = |why: &str| Err(Error::MatchInvalid(why.to_string()));
    if m.end < m.start || m.end > lin.len() || m.end - m.start != side.len() {
        return bad("slice range does not fit the rule side");
    }
    let words = lin.words(sig);
    let w = &words[m.start];
    if !w.embeds_at(side.input(), m.left_whisker) || w.len() != m.left_whisker + side.input().len() + m.right_whisker {
        return bad("whisker widths do not factor the boundary word");
    }
    let block = &lin.slices()[m.start..m.end];
    let same = block
        .iter()
        .zip(side.slices())
        .all(|(a, b)| a.gen == b.gen && a.offset == b.offset + m.left_whisker);
    if !same {
        return bad("slices differ from the rule side");
    }
    Ok(())
}

/// Replace the matched occurrence of the direction's source side by its
/// target side.
pub fn apply_rule(
    sig: &Signature,
    d: &Diagram,
    rule: &RewriteRule,
    m: &Match,
    direction: Direction,
    cap: usize,
) -> Result<Diagram> {
    let class = exchange::interchange_class(sig, d, cap)?;
    let lin = class
        .get(m.linearization)
        .ok_or_else(|| Error::MatchInvalid(format!("no linearization {}", m.linearization)))?;
    let (src, tgt) = rule.oriented(direction);
    validate_match(sig, lin, src, m)?;
    Ok(splice_block(lin, m.start, m.end, m.left_whisker, tgt))
}

/// Replay against the signature's registered equations.
pub fn replay(sig: &Signature, trace: &ProofTrace) -> Result<bool> {
    replay_with(sig, sig.equations(), trace, DEFAULT_LINEARIZATION_CAP)
}

/// Step through a trace. Unknown rule names are errors; an illegal step or
/// a wrong end point makes the trace invalid (`Ok(false)`).
pub fn replay_with(sig: &Signature, rules: &[RewriteRule], trace: &ProofTrace, cap: usize) -> Result<bool> {
    if !trace.start.same_boundaries(&trace.end) {
        return Ok(false);
    }
    let mut current = trace.start.clone();
    for step in &trace.steps {
        let rule = rules
            .iter()
            .find(|r| r.name == step.rule)
            .ok_or_else(|| Error::Signature(format!("unknown rule `{}`", step.rule)))?;
        match apply_rule(sig, &current, rule, &step.at, step.direction, cap) {
            Ok(next) => current = next,
            Err(Error::MatchInvalid(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
        if !current.same_boundaries(&trace.start) {
            return Ok(false);
        }
    }
    Ok(exchange::interchange_equal(sig, &current, &trace.end))
}

struct Edge {
    target: Diagram,
    forward: TraceStep,
    reverse: TraceStep,
}

struct Expansion {
    edges: Vec<Edge>,
    skipped: usize,
}

struct Node {
    diagram: Diagram,
    depth: usize,
    /// Forward tree: step parent -> node. Backward tree: step node -> parent.
    parent: Option<(usize, TraceStep)>,
}

struct Tree {
    nodes: Vec<Node>,
    index: HashMap<Diagram, usize>,
    frontier: Vec<usize>,
    limit: usize,
}

impl Tree {
    fn new(root: Diagram, limit: usize) -> Tree {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Tree {
            nodes: vec![Node {
                diagram: root,
                depth: 0,
                parent: None,
            }],
            index,
            frontier: vec![0],
            limit,
        }
    }
}

/// Bidirectional search configuration.
pub struct Prover<'a> {
    sig: &'a Signature,
    rules: &'a [RewriteRule],
    budget: SearchBudget,
    exec: Exec,
}

impl<'a> Prover<'a> {
    pub fn new(sig: &'a Signature, rules: &'a [RewriteRule], budget: SearchBudget) -> Self {
        Prover {
            sig,
            rules,
            budget,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    fn class(&self, d: &Diagram) -> Result<InterchangeClass> {
        exchange::interchange_class(self.sig, d, self.budget.linearization_cap)
    }

    fn expand(&self, node: &Diagram) -> Expansion {
        let mut edges = Vec::new();
        let mut skipped = 0;
        let Ok(class) = self.class(node) else {
            return Expansion { edges, skipped: 1 };
        };
        let mut targets: HashSet<Diagram> = HashSet::new();
        // raw rewrite result -> (canonical form, index in its class)
        let mut known: HashMap<Vec<Slice>, Option<(Diagram, usize)>> = HashMap::new();
        for (li, lin) in class.diagrams().enumerate() {
            let words = lin.words(self.sig);
            for rule in self.rules {
                for direction in [Direction::Forward, Direction::Backward] {
                    let (src, tgt) = rule.oriented(direction);
                    for (start, k) in block_matches(lin, &words, src) {
                        let end = start + src.len();
                        let raw = splice_block(lin, start, end, k, tgt);
                        let resolved = match known.get(raw.slices()) {
                            Some(r) => r.clone(),
                            None => match exchange::closure(self.sig, &raw, self.budget.linearization_cap) {
                                Ok(rc) => {
                                    let canon = rc.canonical().clone();
                                    for (i, member) in rc.diagrams().enumerate() {
                                        known.insert(member.slices().to_vec(), Some((canon.clone(), i)));
                                    }
                                    known[raw.slices()].clone()
                                }
                                // every member seen belongs to the same oversized class
                                Err(partial) => {
                                    for member in partial {
                                        known.insert(member, None);
                                    }
                                    None
                                }
                            },
                        };
                        let Some((canon, ri)) = resolved else {
                            skipped += 1;
                            continue;
                        };
                        if !targets.insert(canon.clone()) {
                            continue;
                        }
                        let right = words[start].len() - k - src.input().len();
                        edges.push(Edge {
                            target: canon,
                            forward: TraceStep {
                                rule: rule.name.clone(),
                                direction,
                                at: Match {
                                    linearization: li,
                                    start,
                                    end,
                                    left_whisker: k,
                                    right_whisker: right,
                                },
                            },
                            reverse: TraceStep {
                                rule: rule.name.clone(),
                                direction: direction.flip(),
                                at: Match {
                                    linearization: ri,
                                    start,
                                    end: start + tgt.len(),
                                    left_whisker: k,
                                    right_whisker: right,
                                },
                            },
                        });
                    }
                }
            }
        }
        Expansion { edges, skipped }
    }

    fn expand_level(&self, tree: &mut Tree, forward: bool, skipped: &mut usize) {
        let frontier: Vec<(usize, Diagram)> = tree
            .frontier
            .iter()
            .map(|&i| (i, tree.nodes[i].diagram.clone()))
            .collect();
        let expansions = exec::map(self.exec, &frontier, |(_, d)| self.expand(d));
        let mut next = Vec::new();
        'merge: for ((parent, _), exp) in frontier.iter().zip(expansions) {
            *skipped += exp.skipped;
            let depth = tree.nodes[*parent].depth + 1;
            for edge in exp.edges {
                if tree.index.contains_key(&edge.target) {
                    continue;
                }
                if tree.nodes.len() >= tree.limit {
                    break 'merge;
                }
                let step = if forward { edge.forward } else { edge.reverse };
                let id = tree.nodes.len();
                tree.index.insert(edge.target.clone(), id);
                tree.nodes.push(Node {
                    diagram: edge.target,
                    depth,
                    parent: Some((*parent, step)),
                });
                next.push(id);
            }
        }
        tree.frontier = next;
    }

    fn meeting(&self, fwd: &Tree, bwd: &Tree) -> Option<(usize, usize)> {
        fwd.nodes
            .iter()
            .enumerate()
            .filter_map(|(fi, n)| bwd.index.get(&n.diagram).map(|&bi| (fi, bi)))
            .min_by(|&(fa, ba), &(fb, bb)| {
                let ka = fwd.nodes[fa].depth + bwd.nodes[ba].depth;
                let kb = fwd.nodes[fb].depth + bwd.nodes[bb].depth;
                ka.cmp(&kb)
                    .then_with(|| fwd.nodes[fa].diagram.cmp(&fwd.nodes[fb].diagram))
            })
    }

    fn assemble(&self, lhs: &Diagram, rhs: &Diagram, fwd: &Tree, bwd: &Tree, fi: usize, bi: usize) -> ProofTrace {
        let mut head = Vec::new();
        let mut cur = fi;
        while let Some((p, step)) = &fwd.nodes[cur].parent {
            head.push(step.clone());
            cur = *p;
        }
        head.reverse();
        let mut cur = bi;
        while let Some((p, step)) = &bwd.nodes[cur].parent {
            head.push(step.clone());
            cur = *p;
        }
        ProofTrace {
            start: lhs.clone(),
            steps: head,
            end: rhs.clone(),
        }
    }

    /// Search for a trace from `lhs` to `rhs`.
    pub fn prove(&self, lhs: &Diagram, rhs: &Diagram) -> Result<ProofTrace, ProveError> {
        self.budget.validate().map_err(ProveError::Typing)?;
        if !lhs.same_boundaries(rhs) {
            let (left, right) = if lhs.input() != rhs.input() {
                (lhs.input().clone(), rhs.input().clone())
            } else {
                (lhs.output().clone(), rhs.output().clone())
            };
            return Err(ProveError::Typing(Error::BoundaryMismatch { left, right }));
        }
        let mut stats = SearchStats::default();
        let start = self.class(lhs).map_err(|_| ProveError::Exhausted(stats))?;
        let goal = self.class(rhs).map_err(|_| ProveError::Exhausted(stats))?;
        let limit = self.budget.max_nodes.div_ceil(2);
        let mut fwd = Tree::new(start.canonical().clone(), limit);
        let mut bwd = Tree::new(goal.canonical().clone(), limit);

        let mut found = self.meeting(&fwd, &bwd);
        let mut skipped = 0;
        while found.is_none() {
            if stats.rounds == self.budget.max_depth_per_side || (fwd.frontier.is_empty() && bwd.frontier.is_empty()) {
                break;
            }
            stats.rounds += 1;
            self.expand_level(&mut fwd, true, &mut skipped);
            self.expand_level(&mut bwd, false, &mut skipped);
            found = self.meeting(&fwd, &bwd);
        }
        let Some((fi, bi)) = found else {
            stats.forward_nodes = fwd.nodes.len();
            stats.backward_nodes = bwd.nodes.len();
            stats.forward_frontier = fwd.frontier.len();
            stats.backward_frontier = bwd.frontier.len();
            stats.skipped = skipped;
            stats.complete = fwd.frontier.is_empty()
                && bwd.frontier.is_empty()
                && skipped == 0
                && fwd.nodes.len() < limit
                && bwd.nodes.len() < limit;
            return Err(ProveError::Exhausted(stats));
        };
        let trace = self.assemble(lhs, rhs, &fwd, &bwd, fi, bi);
        let ok = replay_with(self.sig, self.rules, &trace, self.budget.linearization_cap)
            .expect("trace rules come from the prover's rule set");
        assert!(ok, "prover emitted a trace that does not replay");
        Ok(trace)
    }
}

/// Prove `lhs = rhs` from `rules` (both orientations) modulo interchange.
pub fn prove_equal(
    sig: &Signature,
    lhs: &Diagram,
    rhs: &Diagram,
    rules: &[RewriteRule],
    budget: SearchBudget,
) -> Result<ProofTrace, ProveError> {
    Prover::new(sig, rules, budget).prove(lhs, rhs)
}

/// Diagrams visited by replaying a trace, starting with `trace.start`.
pub fn replay_states(sig: &Signature, rules: &[RewriteRule], trace: &ProofTrace, cap: usize) -> Result<Vec<Diagram>> {
    let mut states = vec![trace.start.clone()];
    let mut current = trace.start.clone();
    for step in &trace.steps {
        let rule = rules
            .iter()
            .find(|r| r.name == step.rule)
            .ok_or_else(|| Error::Signature(format!("unknown rule `{}`", step.rule)))?;
        current = apply_rule(sig, &current, rule, &step.at, step.direction, cap)?;
        states.push(current.clone());
    }
    Ok(states)
}
