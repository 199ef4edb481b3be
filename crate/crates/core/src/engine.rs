//! Abstract iteration over the product of occurrence counting and
//! control flow.

use std::collections::BTreeMap;

use crate::cflow::{cf_transfer, Atom, CfState};
use crate::numeric::{CountVar, Interval, OccCount};
use crate::semantics::{
    Configuration, Consumption, FormalRule, InteractionName, PointKind, Program, Reached, RuleKind,
};
use crate::syntax::Point;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub max_iter: usize,
    /// Iterations that join instead of widening.
    pub widen_delay: usize,
    pub narrow: bool,
    /// Apply each transition as soon as it is computed within a sweep.
    pub chaotic: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { max_iter: 1000, widen_delay: 2, narrow: true, chaotic: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("no post-fixpoint after {limit} iterations")]
    IterationLimit { limit: usize },
}

/// A syntactically possible transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractTransition {
    pub rule: RuleKind,
    pub points: Vec<Point>,
    pub choices: Vec<usize>,
    pub branch: Point,
    pub message: Point,
    /// Index of the `comm(branch, message)` counter.
    pub counter: usize,
}

impl AbstractTransition {
    pub fn formal_rule(&self) -> FormalRule {
        match self.rule {
            RuleKind::Static => FormalRule::static_trans(),
            RuleKind::Dynamic => FormalRule::dynamic_trans(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractConfig {
    pub occ: OccCount,
    pub cf: CfState,
}

impl AbstractConfig {
    pub fn leq(&self, other: &AbstractConfig) -> bool {
        self.occ.leq(&other.occ) && self.cf.leq(&other.cf)
    }

    pub fn join(&self, other: &AbstractConfig) -> AbstractConfig {
        AbstractConfig { occ: self.occ.join(&other.occ), cf: self.cf.join(&other.cf) }
    }

    /// The control-flow lattice is finite, so it only joins.
    pub fn widen(&self, next: &AbstractConfig) -> AbstractConfig {
        AbstractConfig { occ: self.occ.widen(&next.occ), cf: self.cf.join(&next.cf) }
    }
}

/// The counting variables, candidates and initial state of one term.
#[derive(Clone, Debug)]
pub struct Analyzer {
    program: Program,
    vars: Vec<CountVar>,
    index: BTreeMap<CountVar, usize>,
    candidates: Vec<AbstractTransition>,
    init: AbstractConfig,
}

impl Analyzer {
    pub fn new(program: &Program) -> Analyzer {
        let raw = raw_candidates(program);
        let mut vars: Vec<CountVar> = raw
            .iter()
            .map(|(_, _, _, branch, message)| CountVar::Comm { branch: *branch, message: *message })
            .chain(
                program
                    .points()
                    .filter(|i| !matches!(i.kind, PointKind::InlineSet { .. }))
                    .map(|i| CountVar::Point { point: i.point }),
            )
            .collect();
        vars.sort();
        vars.dedup();
        let index: BTreeMap<CountVar, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let candidates = raw
            .into_iter()
            .map(|(rule, points, choices, branch, message)| AbstractTransition {
                counter: index[&CountVar::Comm { branch, message }],
                rule,
                points,
                choices,
                branch,
                message,
            })
            .collect();
        let mut counts = vec![0u64; vars.len()];
        for l in program.init() {
            counts[index[&CountVar::Point { point: l.point }]] += 1;
        }
        let init = AbstractConfig { occ: OccCount::exact(&counts), cf: CfState::init(program) };
        Analyzer { program: program.clone(), vars, index, candidates, init }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn vars(&self) -> &[CountVar] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.to_string()).collect()
    }

    pub fn index(&self, v: CountVar) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn point_index(&self, p: Point) -> Option<usize> {
        self.index(CountVar::Point { point: p })
    }

    pub fn candidates(&self) -> &[AbstractTransition] {
        &self.candidates
    }

    pub fn initial(&self) -> &AbstractConfig {
        &self.init
    }

    /// The count vector of a concrete configuration reached by `trace`.
    pub fn count_vector(&self, reached: &Reached) -> Vec<u64> {
        let mut x = self.point_counts(&reached.config);
        for ((branch, message), k) in reached.comm_counts() {
            let i = self.index(CountVar::Comm { branch, message }).expect("fired transition is a candidate");
            x[i] += k as u64;
        }
        x
    }

    fn point_counts(&self, c: &Configuration) -> Vec<u64> {
        let mut x = vec![0u64; self.vars.len()];
        for (p, k) in c.counts() {
            x[self.point_index(p).expect("thread point is counted")] += k as u64;
        }
        x
    }

    /// One abstract transition from `c`; `None` when blocked.
    pub fn abstract_step(&self, c: &AbstractConfig, t: &AbstractTransition) -> Option<(OccCount, Vec<(Point, Atom)>)> {
        let idx = |p: Point| self.point_index(p).expect("interacting point is counted");
        let sync: Vec<(usize, u64)> = t.points.iter().map(|&p| (idx(p), 1)).collect();
        let synced = c.occ.sync(&sync);
        if synced.is_bottom() {
            return None;
        }
        let rule = t.formal_rule();
        let launched = cf_transfer(&self.program, &rule, &t.points, &t.choices, &c.cf)?;
        let mut delta: BTreeMap<usize, i64> = BTreeMap::new();
        *delta.entry(t.counter).or_default() += 1;
        for (p, _) in &launched {
            *delta.entry(idx(*p)).or_default() += 1;
        }
        for (&p, &j) in t.points.iter().zip(&t.choices) {
            if self.program.point(p).interactions[j].name.consumption() == Consumption::Consumed {
                *delta.entry(idx(p)).or_default() -= 1;
            }
        }
        let delta: Vec<(usize, i64)> = delta.into_iter().collect();
        let occ = synced.step(&delta);
        if occ.is_bottom() {
            return None;
        }
        Some((occ, launched))
    }

    /// `C0 ⊔ posts(c)`, plus `c` itself when `include_self`.
    fn collect(&self, c: &AbstractConfig, include_self: bool) -> AbstractConfig {
        let dim = self.vars.len();
        let mut occs: Vec<OccCount> = vec![self.init.occ.clone()];
        let mut cf = self.init.cf.clone();
        if include_self {
            occs.push(c.occ.clone());
            cf = cf.join(&c.cf);
        }
        for t in &self.candidates {
            if let Some((occ, launched)) = self.abstract_step(c, t) {
                occs.push(occ);
                for (p, a) in launched {
                    cf.join_at(p, &a);
                }
            }
        }
        AbstractConfig { occ: OccCount::join_all(dim, occs.iter()), cf }
    }

    /// The abstract semantic function.
    pub fn f_sharp(&self, c: &AbstractConfig) -> AbstractConfig {
        self.collect(c, true)
    }

    fn chaotic_sweep(&self, c: &AbstractConfig) -> AbstractConfig {
        let mut cur = c.join(&self.init);
        for t in &self.candidates {
            if let Some((occ, launched)) = self.abstract_step(&cur, t) {
                let mut cf = cur.cf.clone();
                for (p, a) in launched {
                    cf.join_at(p, &a);
                }
                cur = AbstractConfig { occ: cur.occ.join(&occ), cf };
            }
        }
        cur
    }

    pub fn analyze(&self, opts: &AnalysisOptions) -> Result<Analysis, EngineError> {
        let mut c = self.init.clone();
        let mut iterations = 0;
        loop {
            iterations += 1;
            if iterations > opts.max_iter {
                return Err(EngineError::IterationLimit { limit: opts.max_iter });
            }
            let f = self.f_sharp(&c);
            if f.leq(&c) {
                break;
            }
            let next = if opts.chaotic { self.chaotic_sweep(&c).join(&f) } else { f };
            let joined = c.join(&next);
            c = if iterations <= opts.widen_delay { joined } else { c.widen(&joined) };
        }
        let mut narrowed = false;
        if opts.narrow {
            let g = self.collect(&c, false);
            if g != c && self.f_sharp(&g).leq(&g) {
                c = g;
                narrowed = true;
            }
        }
        Ok(Analysis { analyzer: self.clone(), result: c, iterations, narrowed })
    }
}

#[allow(clippy::type_complexity)]
fn raw_candidates(program: &Program) -> Vec<(RuleKind, Vec<Point>, Vec<usize>, Point, Point)> {
    let messages: Vec<(Point, usize, &str)> = program
        .points()
        .filter_map(|i| match (&i.kind, i.interactions.first()) {
            (PointKind::Message { label, .. }, Some(pi)) => Some((i.point, pi.name.message_arity()?, label.as_str())),
            _ => None,
        })
        .collect();
    let dynamic_actors: Vec<Point> =
        program.points().filter(|i| matches!(i.kind, PointKind::DynamicActor { .. })).map(|i| i.point).collect();
    let mut out = Vec::new();
    for info in program.points() {
        match &info.kind {
            PointKind::StaticActor { branches, .. } => {
                for (j, pi) in info.interactions.iter().enumerate() {
                    let InteractionName::StaticActor(n) = pi.name else { continue };
                    let label = pi.message_label();
                    for &(m, mn, ml) in &messages {
                        if mn == n && Some(ml) == label {
                            out.push((RuleKind::Static, vec![info.point, m], vec![j, 0], branches[j], m));
                        }
                    }
                }
            }
            PointKind::Branch { .. } => {
                let pi = &info.interactions[0];
                let InteractionName::Behavior(n) = pi.name else { continue };
                let label = pi.message_label();
                for &d in &dynamic_actors {
                    for &(m, mn, ml) in &messages {
                        if mn == n && Some(ml) == label {
                            out.push((RuleKind::Dynamic, vec![info.point, d, m], vec![0, 0, 0], info.point, m));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// The outcome of [`Analyzer::analyze`].
#[derive(Clone, Debug)]
pub struct Analysis {
    pub analyzer: Analyzer,
    pub result: AbstractConfig,
    pub iterations: usize,
    pub narrowed: bool,
}

impl Analysis {
    pub fn program(&self) -> &Program {
        self.analyzer.program()
    }

    pub fn interval(&self, v: CountVar) -> Option<Interval> {
        self.analyzer.index(v).map(|i| self.result.occ.interval(i))
    }

    pub fn point_interval(&self, p: Point) -> Option<Interval> {
        self.interval(CountVar::Point { point: p })
    }

    pub fn is_post_fixpoint(&self) -> bool {
        self.analyzer.f_sharp(&self.result).leq(&self.result)
    }
}

/// Parse, label, extract and analyze in one go.
pub fn analyze_source(source: &str, opts: &AnalysisOptions) -> Result<Analysis, crate::Error> {
    let term = crate::syntax::parse_labeled(source)?;
    let program = Program::extract(&term);
    Ok(Analyzer::new(&program).analyze(opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Bound;
    use crate::syntax::parse_labeled;

    fn analyzer(src: &str) -> Analyzer {
        Analyzer::new(&Program::extract(&parse_labeled(src).unwrap()))
    }

    const EXAMPLE: &str = "nu a, b. a |> [m() = zeta(e,s)(a |> s), send(x) = zeta(e,s)(x <| beh(s))] \
                           || a <| send(b) || b |> [beh(x) = zeta(e,s)(e |> x)] || b <| m()";

    const PINGPONG: &str = "nu a, b. a |> [ping() = zeta(e,s)(b <| pong() || e |> s)] \
                            || b |> [pong() = zeta(e,s)(a <| ping() || e |> s)] || a <| ping()";

    #[test]
    fn example_candidates() {
        let az = analyzer(EXAMPLE);
        let shown: Vec<(RuleKind, Vec<u32>)> = az
            .candidates()
            .iter()
            .map(|t| {
                let mut pts: Vec<u32> = t.points.iter().map(|p| p.0).collect();
                if t.rule == RuleKind::Static {
                    pts[0] = t.branch.0;
                }
                (t.rule, pts)
            })
            .collect();
        assert!(shown.contains(&(RuleKind::Static, vec![2, 10])));
        assert!(shown.contains(&(RuleKind::Static, vec![4, 6])));
        assert!(shown.contains(&(RuleKind::Dynamic, vec![2, 9, 10])));
        assert!(shown.contains(&(RuleKind::Dynamic, vec![4, 9, 6])));
        assert!(shown.contains(&(RuleKind::Dynamic, vec![8, 9, 5])));
    }

    #[test]
    fn pingpong_static_candidates() {
        let az = analyzer(PINGPONG);
        let mut st: Vec<(u32, u32)> =
            az.candidates().iter().filter(|t| t.rule == RuleKind::Static).map(|t| (t.branch.0, t.message.0)).collect();
        st.sort();
        assert_eq!(st, vec![(2, 7), (2, 9), (6, 3)]);
    }

    #[test]
    fn no_messages_no_candidates() {
        assert!(analyzer("nu a. a |> [m() = zeta(e,s)(0)]").candidates().is_empty());
    }

    #[test]
    fn first_abstract_step() {
        let az = analyzer(EXAMPLE);
        let t = az.candidates().iter().find(|t| t.branch == Point(4) && t.message == Point(6)).unwrap();
        let (occ, launched) = az.abstract_step(az.initial(), t).unwrap();
        let itv = |p: u32| occ.interval(az.point_index(Point(p)).unwrap());
        assert_eq!(itv(1), Interval::constant(0));
        assert_eq!(itv(5), Interval::constant(1));
        assert_eq!(itv(6), Interval::constant(0));
        assert_eq!(launched[0].0, Point(5));
        let blocked = az.candidates().iter().find(|t| t.branch == Point(2) && t.message == Point(10)).unwrap();
        assert!(blocked.rule == RuleKind::Static);
        assert!(az.abstract_step(az.initial(), blocked).is_none());
    }

    #[test]
    fn pingpong_analysis() {
        let a = analyzer(PINGPONG).analyze(&AnalysisOptions::default()).unwrap();
        for p in [3, 7, 9] {
            assert_eq!(a.point_interval(Point(p)), Some(Interval::finite(0, 1)), "point {p}");
        }
        for p in [2, 6] {
            assert_eq!(a.point_interval(Point(p)), Some(Interval::constant(1)), "point {p}");
        }
        assert!(a.is_post_fixpoint());
    }

    #[test]
    fn flood_widens_to_infinity() {
        let src = "nu a. a <| m() || a |> [m() = zeta(e,s)(e |> s || a <| m() || a <| m())]";
        let a = analyzer(src).analyze(&AnalysisOptions::default()).unwrap();
        assert_eq!(a.point_interval(Point(5)).and_then(|i| i.hi()), Some(Bound::Inf));
        assert!(a.is_post_fixpoint());
    }

    #[test]
    fn chaotic_reaches_a_post_fixpoint() {
        let opts = AnalysisOptions { chaotic: true, ..Default::default() };
        let a = analyzer(PINGPONG).analyze(&opts).unwrap();
        assert!(a.is_post_fixpoint());
    }

    #[test]
    fn iteration_limit_is_reported() {
        let src = "nu a. a <| m() || a |> [m() = zeta(e,s)(e |> s || a <| m() || a <| m())]";
        let opts = AnalysisOptions { max_iter: 1, ..Default::default() };
        assert_eq!(analyzer(src).analyze(&opts).unwrap_err(), EngineError::IterationLimit { limit: 1 });
    }
}
