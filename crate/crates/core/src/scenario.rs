//! Correlation experiments described as tests, outcomes and jointly
//! measurable contexts, compiled into exclusivity graphs.
//!
//! Events are partial outcome assignments whose domain lies inside a context.
//! Two events are exclusive when some test they share receives different
//! outcomes. Equivalent events are identified by syntactic equality of their
//! assignments.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSpec {
    pub id: String,
    pub outcomes: Vec<String>,
}

/// `{"tests": [{"id": .., "outcomes": [..]}, ..], "contexts": [[id, ..], ..]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub tests: Vec<TestSpec>,
    pub contexts: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    tests: Vec<TestSpec>,
    contexts: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

/// Test index → outcome index, ordered by test.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    assignment: BTreeMap<usize, usize>,
}

impl Event {
    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }
}

impl Scenario {
    pub fn new(tests: Vec<TestSpec>, contexts: Vec<Vec<String>>) -> Result<Scenario> {
        let mut index = HashMap::new();
        for (k, t) in tests.iter().enumerate() {
            if t.outcomes.len() < 2 {
                return Err(Error::Scenario(format!("test {:?} needs at least two outcomes", t.id)));
            }
            let mut seen = t.outcomes.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != t.outcomes.len() {
                return Err(Error::Scenario(format!("test {:?} repeats an outcome label", t.id)));
            }
            if index.insert(t.id.clone(), k).is_some() {
                return Err(Error::Scenario(format!("duplicate test id {:?}", t.id)));
            }
        }
        let contexts = contexts
            .iter()
            .map(|ctx| {
                if ctx.is_empty() {
                    return Err(Error::Scenario("empty context".into()));
                }
                let mut ids = ctx
                    .iter()
                    .map(|id| {
                        index
                            .get(id)
                            .copied()
                            .ok_or_else(|| Error::Scenario(format!("unknown test id {id:?} in context")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let len = ids.len();
                ids.sort_unstable();
                ids.dedup();
                if ids.len() != len {
                    return Err(Error::Scenario("context lists a test twice".into()));
                }
                Ok(ctx.iter().map(|id| index[id]).collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Ok(Scenario { tests, contexts, index })
    }

    pub fn from_json(text: &str) -> Result<Scenario> {
        let raw: ScenarioJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        Scenario::new(raw.tests, raw.contexts)
    }

    pub fn to_json(&self) -> ScenarioJson {
        ScenarioJson {
            tests: self.tests.clone(),
            contexts: self
                .contexts
                .iter()
                .map(|c| c.iter().map(|&t| self.tests[t].id.clone()).collect())
                .collect(),
        }
    }

    pub fn tests(&self) -> &[TestSpec] {
        &self.tests
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    /// Single test with the given number of outcomes, forming its own context.
    pub fn single_test(outcomes: usize) -> Result<Scenario> {
        let test = TestSpec {
            id: "0".into(),
            outcomes: (0..outcomes).map(|o| o.to_string()).collect(),
        };
        Scenario::new(vec![test], vec![vec!["0".into()]])
    }

    /// `n` binary tests "0".."n-1" with contexts `(i, i+1 mod n)`.
    pub fn binary_cycle(n: usize) -> Result<Scenario> {
        if n < 3 {
            return Err(Error::Scenario(format!("cyclic scenario needs n >= 3, got {n}")));
        }
        let tests = (0..n)
            .map(|i| TestSpec {
                id: i.to_string(),
                outcomes: vec!["0".into(), "1".into()],
            })
            .collect();
        let contexts = (0..n)
            .map(|i| vec![i.to_string(), ((i + 1) % n).to_string()])
            .collect();
        Scenario::new(tests, contexts)
    }

    /// Builds an event from `(test id, outcome label)` pairs.
    pub fn event(&self, pairs: &[(&str, &str)]) -> Result<Event> {
        let mut assignment = BTreeMap::new();
        for &(id, outcome) in pairs {
            let t = *self
                .index
                .get(id)
                .ok_or_else(|| Error::InvalidEvent(format!("unknown test {id:?}")))?;
            let o = self.tests[t]
                .outcomes
                .iter()
                .position(|x| x == outcome)
                .ok_or_else(|| Error::InvalidEvent(format!("test {id:?} has no outcome {outcome:?}")))?;
            if assignment.insert(t, o).is_some() {
                return Err(Error::InvalidEvent(format!("test {id:?} assigned twice")));
            }
        }
        let e = Event { assignment };
        self.validate(&e)?;
        Ok(e)
    }

    /// Nonempty, in range, and jointly measurable (inside some context).
    pub fn validate(&self, e: &Event) -> Result<()> {
        if e.assignment.is_empty() {
            return Err(Error::InvalidEvent("empty assignment".into()));
        }
        for (&t, &o) in &e.assignment {
            let test = self
                .tests
                .get(t)
                .ok_or_else(|| Error::InvalidEvent(format!("test index {t} out of range")))?;
            if o >= test.outcomes.len() {
                return Err(Error::InvalidEvent(format!("outcome index {o} out of range for test {:?}", test.id)));
            }
        }
        let measurable = self
            .contexts
            .iter()
            .any(|ctx| e.assignment.keys().all(|t| ctx.contains(t)));
        if !measurable {
            return Err(Error::InvalidEvent(format!(
                "{} is not contained in any context",
                self.label(e)
            )));
        }
        Ok(())
    }

    /// Both events must be valid here; exclusive iff a shared test gets
    /// different outcomes.
    pub fn events_exclusive(&self, a: &Event, b: &Event) -> Result<bool> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(exclusive(a, b))
    }

    /// `"a,b|x,y"`: outcomes, then test ids, in test order.
    pub fn label(&self, e: &Event) -> String {
        let outcomes: Vec<&str> = e
            .assignment
            .iter()
            .map(|(&t, &o)| self.tests.get(t).and_then(|x| x.outcomes.get(o)).map_or("?", String::as_str))
            .collect();
        let tests: Vec<&str> = e
            .assignment
            .keys()
            .map(|&t| self.tests.get(t).map_or("?", |x| x.id.as_str()))
            .collect();
        format!("{}|{}", outcomes.join(","), tests.join(","))
    }

    /// `{test id: outcome label}`
    pub fn event_json(&self, e: &Event) -> BTreeMap<String, String> {
        e.assignment
            .iter()
            .map(|(&t, &o)| (self.tests[t].id.clone(), self.tests[t].outcomes[o].clone()))
            .collect()
    }

    /// Exclusivity graph of the whole experiment: one vertex per outcome
    /// tuple of each context (contexts in declaration order, tuples in
    /// lexicographic order, repeats merged), unit weights.
    pub fn experiment_graph(&self) -> (Graph, Vec<Event>) {
        let mut events: Vec<Event> = Vec::new();
        let mut seen = HashMap::new();
        for ctx in &self.contexts {
            let sizes: Vec<usize> = ctx.iter().map(|&t| self.tests[t].outcomes.len()).collect();
            let mut digits = vec![0usize; ctx.len()];
            'tuples: loop {
                let e = Event {
                    assignment: ctx.iter().copied().zip(digits.iter().copied()).collect(),
                };
                if !seen.contains_key(&e) {
                    seen.insert(e.clone(), events.len());
                    events.push(e);
                }
                // odometer, last test fastest
                let mut k = ctx.len();
                loop {
                    if k == 0 {
                        break 'tuples;
                    }
                    k -= 1;
                    digits[k] += 1;
                    if digits[k] < sizes[k] {
                        break;
                    }
                    digits[k] = 0;
                }
            }
        }
        (graph_on(&events, None), events)
    }

    /// Weighted exclusivity graph of `S`: one vertex per term, in term order.
    pub fn exclusivity_subgraph(&self, expr: &SExpression) -> Result<Graph> {
        for (_, e) in expr.terms() {
            self.validate(e)?;
        }
        let events: Vec<Event> = expr.terms().iter().map(|(_, e)| e.clone()).collect();
        let weights = expr.terms().iter().map(|(w, _)| w.clone()).collect();
        Ok(graph_on(&events, Some(weights)))
    }

    pub fn expression_from_json(&self, text: &str) -> Result<SExpression> {
        let raw: SExpressionJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let terms = raw
            .terms
            .iter()
            .map(|t| {
                let pairs: Vec<(&str, &str)> = t.event.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
                Ok((rational::parse(&t.weight)?, self.event(&pairs)?))
            })
            .collect::<Result<Vec<_>>>()?;
        SExpression::new(terms)
    }

    pub fn expression_to_json(&self, expr: &SExpression) -> SExpressionJson {
        SExpressionJson {
            terms: expr
                .terms()
                .iter()
                .map(|(w, e)| TermJson {
                    weight: rational::format(w),
                    event: self.event_json(e),
                })
                .collect(),
        }
    }
}

fn exclusive(a: &Event, b: &Event) -> bool {
    a.assignment
        .iter()
        .any(|(t, o)| b.assignment.get(t).is_some_and(|p| p != o))
}

fn graph_on(events: &[Event], weights: Option<Vec<Rational>>) -> Graph {
    let n = events.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if exclusive(&events[i], &events[j]) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edge_list(n, &edges, weights).expect("event graph is well formed")
}

/// `S = Σ wᵢ P(eᵢ)` with strictly positive weights and distinct events.
#[derive(Debug, Clone, PartialEq)]
pub struct SExpression {
    terms: Vec<(Rational, Event)>,
}

impl SExpression {
    /// Repeated events are merged (weights summed, first position kept).
    pub fn new(terms: Vec<(Rational, Event)>) -> Result<SExpression> {
        let mut merged: Vec<(Rational, Event)> = Vec::new();
        for (w, e) in terms {
            if !rational::is_positive(&w) {
                return Err(Error::NonPositiveWeight {
                    vertex: merged.len(),
                    weight: rational::format(&w),
                });
            }
            match merged.iter_mut().find(|(_, x)| *x == e) {
                Some((acc, _)) => *acc += w,
                None => merged.push((w, e)),
            }
        }
        Ok(SExpression { terms: merged })
    }

    pub fn terms(&self) -> &[(Rational, Event)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub weight: String,
    pub event: BTreeMap<String, String>,
}

/// `{"terms": [{"weight": "p/q", "event": {id: outcome, ..}}, ..]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SExpressionJson {
    pub terms: Vec<TermJson>,
}

/// CHSH: four binary tests, contexts (0,1),(1,2),(2,3),(3,0); terms
/// `P(a,b|i,i+1)` with `a = b` for `i ≠ 2` and `a ≠ b` for `i = 2`.
pub fn chsh_expression() -> (Scenario, SExpression) {
    let s = Scenario::binary_cycle(4).expect("valid");
    let mut terms = Vec::new();
    for i in 0..4 {
        let pairs: [(&str, &str); 2] = if i == 2 { [("0", "1"), ("1", "0")] } else { [("0", "0"), ("1", "1")] };
        for (a, b) in pairs {
            let (x, y) = (i.to_string(), ((i + 1) % 4).to_string());
            terms.push((rational::one(), s.event(&[(&x, a), (&y, b)]).expect("valid")));
        }
    }
    let expr = SExpression::new(terms).expect("valid");
    (s, expr)
}

/// KCBS: five binary tests in a cycle, terms `P(0,1|i,i+1)`.
pub fn kcbs_expression() -> (Scenario, SExpression) {
    ncycle_expression(5).expect("5 is a valid cycle length")
}

/// Odd `n ≥ 5` binary tests in a cycle, terms `P(0,1|i,i+1)` for `i` mod `n`.
pub fn ncycle_expression(n: usize) -> Result<(Scenario, SExpression)> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::Generator(format!("n-cycle expression needs odd n >= 5, got {n}")));
    }
    let s = Scenario::binary_cycle(n)?;
    let terms = (0..n)
        .map(|i| {
            let (x, y) = (i.to_string(), ((i + 1) % n).to_string());
            s.event(&[(&x, "0"), (&y, "1")]).map(|e| (rational::one(), e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((s, SExpression::new(terms)?))
}

/// Position of each term's event among the experiment-graph vertices.
pub fn locate_terms(events: &[Event], expr: &SExpression) -> Option<Vec<usize>> {
    expr.terms()
        .iter()
        .map(|(_, e)| events.iter().position(|x| x == e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_maximal_cliques, is_isomorphic};
    use crate::rational::int;

    #[test]
    fn exclusivity_examples() {
        let (s, _) = chsh_expression();
        let a = s.event(&[("0", "0"), ("1", "1")]).unwrap();
        let b = s.event(&[("0", "1"), ("1", "1")]).unwrap();
        assert!(s.events_exclusive(&a, &b).unwrap());
        let c = s.event(&[("0", "0"), ("1", "0")]).unwrap();
        let d = s.event(&[("2", "0"), ("3", "0")]).unwrap();
        assert!(!s.events_exclusive(&c, &d).unwrap());

        let (k, _) = kcbs_expression();
        let e = k.event(&[("0", "0"), ("1", "1")]).unwrap();
        let f = k.event(&[("1", "0"), ("2", "1")]).unwrap();
        assert!(k.events_exclusive(&e, &f).unwrap());
    }

    #[test]
    fn events_from_another_scenario_are_rejected() {
        let (chsh, _) = chsh_expression();
        let (kcbs, _) = kcbs_expression();
        let foreign = kcbs.event(&[("3", "0"), ("4", "1")]).unwrap();
        let local = chsh.event(&[("0", "0")]).unwrap();
        assert!(chsh.events_exclusive(&local, &foreign).is_err());
        assert!(chsh.event(&[("0", "0"), ("2", "0")]).is_err(), "0 and 2 share no context");
        assert!(chsh.event(&[("9", "0")]).is_err());
        assert!(chsh.event(&[("0", "7")]).is_err());
        assert!(chsh.event(&[]).is_err());
    }

    #[test]
    fn experiment_graph_counts() {
        let (s, _) = chsh_expression();
        let (g, events) = s.experiment_graph();
        assert_eq!(g.order(), 16);
        assert_eq!(events.len(), 16);
        let fours = enumerate_maximal_cliques(&g).iter().filter(|c| c.len() == 4).count();
        assert_eq!(fours, 12);

        let (s, _) = kcbs_expression();
        let (g, _) = s.experiment_graph();
        assert_eq!(g.order(), 20);
        let fours = enumerate_maximal_cliques(&g).iter().filter(|c| c.len() == 4).count();
        assert_eq!(fours, 15);

        let (g, _) = Scenario::single_test(4).unwrap().experiment_graph();
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn s_subgraphs() {
        let (s, expr) = chsh_expression();
        assert_eq!(expr.len(), 8);
        let g = s.exclusivity_subgraph(&expr).unwrap();
        assert!(is_isomorphic(&g, &Graph::circulant(8, &[1, 4]).unwrap()).unwrap().is_some());

        let (s, expr) = kcbs_expression();
        assert_eq!(expr.len(), 5);
        let g = s.exclusivity_subgraph(&expr).unwrap();
        assert!(is_isomorphic(&g, &Graph::cycle(5).unwrap()).unwrap().is_some());

        let (s, expr) = ncycle_expression(7).unwrap();
        assert_eq!(expr.len(), 7);
        assert_eq!(s.exclusivity_subgraph(&expr).unwrap(), Graph::cycle(7).unwrap());
        assert!(ncycle_expression(6).is_err());
        assert!(ncycle_expression(3).is_err());
    }

    #[test]
    fn subgraph_is_induced_in_experiment_graph() {
        for (s, expr) in [chsh_expression(), kcbs_expression()] {
            let (g, events) = s.experiment_graph();
            let idx = locate_terms(&events, &expr).unwrap();
            let induced = g.induced_on(&idx).unwrap();
            assert_eq!(induced, s.exclusivity_subgraph(&expr).unwrap());
        }
    }

    #[test]
    fn single_term_expression() {
        let s = Scenario::single_test(3).unwrap();
        let e = s.event(&[("0", "2")]).unwrap();
        let expr = SExpression::new(vec![(int(7), e)]).unwrap();
        let g = s.exclusivity_subgraph(&expr).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(*g.weight(0), int(7));
    }

    #[test]
    fn expression_merges_duplicates_and_rejects_nonpositive() {
        let s = Scenario::single_test(2).unwrap();
        let e = s.event(&[("0", "1")]).unwrap();
        let expr = SExpression::new(vec![(int(1), e.clone()), (int(2), e.clone())]).unwrap();
        assert_eq!(expr.terms(), &[(int(3), e.clone())]);
        assert!(SExpression::new(vec![(int(0), e)]).is_err());
    }

    #[test]
    fn scenario_validation() {
        let bin = |id: &str| TestSpec { id: id.into(), outcomes: vec!["0".into(), "1".into()] };
        assert!(Scenario::new(vec![TestSpec { id: "a".into(), outcomes: vec!["0".into()] }], vec![]).is_err());
        assert!(Scenario::new(vec![bin("a"), bin("a")], vec![]).is_err());
        assert!(Scenario::new(vec![bin("a")], vec![vec!["b".into()]]).is_err());
        assert!(Scenario::new(vec![bin("a")], vec![vec!["a".into(), "a".into()]]).is_err());
    }

    #[test]
    fn json_forms() {
        let text = r#"{"tests": [{"id": "x", "outcomes": ["+", "-"]}, {"id": "y", "outcomes": ["+", "-"]}],
                       "contexts": [["x", "y"]]}"#;
        let s = Scenario::from_json(text).unwrap();
        let (g, _) = s.experiment_graph();
        assert_eq!(g, Graph::complete(4));
        let expr = s
            .expression_from_json(r#"{"terms": [{"weight": "1/2", "event": {"x": "+", "y": "-"}}, {"weight": "1", "event": {"x": "-"}}]}"#)
            .unwrap();
        let g = s.exclusivity_subgraph(&expr).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
        let round = s.expression_from_json(&serde_json::to_string(&s.expression_to_json(&expr)).unwrap()).unwrap();
        assert_eq!(round, expr);
        assert!(s.expression_from_json(r#"{"terms": [{"weight": "1", "event": {"z": "+"}}]}"#).is_err());
        assert_eq!(Scenario::from_json(&serde_json::to_string(&s.to_json()).unwrap()).unwrap(), s);
    }
}
