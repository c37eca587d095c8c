//! Exact deterministic query complexity by minimax search.
//!
//! The depth of a setting subset is the worst-case number of oracle queries
//! an optimal classical player needs before the solution is pinned down,
//! assuming an adversary picks the answers.  Two evaluators compute it: a
//! memoized, pruning solver used everywhere, and a deliberately naive
//! recursion ([`cell_depth_plain`]) kept as an independent cross-check for
//! small subsets.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::oracle::{OracleProblem, SettingSet};

/// Partitions the solver may evaluate before giving up.  Unstructured
/// searches (one probe eliminates one setting) visit every subset of the
/// settings they start from, so full-set depths stop being enumerable
/// somewhere past 20 settings; structured families split fast and stay far
/// below this.
pub const SOLVER_WORK_LIMIT: usize = 1 << 23;

/// A subset of the problem's settings, by index into the declared order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSubset {
    words: Vec<u64>,
    universe: usize,
}

impl IndexSubset {
    pub fn empty(universe: usize) -> Self {
        IndexSubset { words: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = IndexSubset::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = IndexSubset::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(|i| self.contains(*i))
    }
}

/// An optimal classical strategy: internal nodes query, leaves answer.
#[derive(Debug, Clone, Serialize)]
pub struct QueryPlan {
    /// Argument queried at this node; `None` at leaves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argument: Option<BitString>,
    /// Solution announced at a leaf.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<BitString>,
    /// Children by oracle answer, present only under a queried argument.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub branches: BTreeMap<BitString, QueryPlan>,
}

impl QueryPlan {
    /// Longest query chain in the tree.
    pub fn depth(&self) -> u32 {
        self.branches.values().map(|p| 1 + p.depth()).max().unwrap_or(0)
    }

    /// The tree as indented text, one query or verdict per line.
    pub fn render_indented(&self) -> String {
        fn walk(node: &QueryPlan, pad: usize, out: &mut String) {
            match (&node.argument, &node.solution) {
                (Some(a), _) => {
                    let _ = writeln!(out, "{:pad$}query {a}", "");
                    for (answer, child) in &node.branches {
                        let _ = writeln!(out, "{:pad$}answer {answer} ->", "", pad = pad + 2);
                        walk(child, pad + 4, out);
                    }
                }
                (_, Some(s)) => {
                    let _ = writeln!(out, "{:pad$}solution {s}", "");
                }
                _ => unreachable!("plan node with neither argument nor solution"),
            }
        }
        let mut out = String::new();
        walk(self, 0, &mut out);
        out.pop();
        out
    }
}

/// Follows the plan against the true oracle of `b`; returns the announced
/// solution and the number of queries spent.
pub fn replay(problem: &OracleProblem, plan: &QueryPlan, b: &BitString) -> Result<(BitString, u32)> {
    let mut node = plan;
    let mut queries = 0;
    loop {
        match (&node.argument, &node.solution) {
            (Some(a), _) => {
                queries += 1;
                let ans = problem.answer(b, a);
                node = node.branches.get(&ans).ok_or_else(|| Error::UnknownOutcome {
                    outcome: ans.to_string(),
                    spec: format!("plan branch after querying {a}"),
                })?;
            }
            (None, Some(s)) => return Ok((*s, queries)),
            (None, None) => unreachable!("plan node with neither argument nor solution"),
        }
    }
}

struct Solver<'a> {
    problem: &'a OracleProblem,
    settings: Vec<u32>,
    solutions: Vec<u32>,
    domain: Vec<u32>,
    memo: HashMap<IndexSubset, u32>,
    work: usize,
}

impl<'a> Solver<'a> {
    fn new(problem: &'a OracleProblem) -> Self {
        let settings: Vec<u32> = problem.sigma().iter().map(|b| b.value()).collect();
        let solutions = settings.iter().map(|b| problem.solution_value(*b)).collect();
        let domain = problem.query_domain().iter().map(|a| a.value()).collect();
        Solver { problem, settings, solutions, domain, memo: HashMap::new(), work: 0 }
    }

    fn solved(&self, subset: &IndexSubset) -> bool {
        let mut iter = subset.iter();
        match iter.next() {
            None => true,
            Some(first) => {
                let want = self.solutions[first];
                iter.all(|i| self.solutions[i] == want)
            }
        }
    }

    /// Answer classes of `subset` under argument `a`, ordered by answer.
    fn partition(&self, subset: &IndexSubset, a: u32) -> Vec<(u32, IndexSubset)> {
        let mut cells: Vec<(u32, IndexSubset)> = Vec::new();
        for i in subset.iter() {
            let ans = self.problem.answer_value(self.settings[i], a);
            match cells.binary_search_by_key(&ans, |(k, _)| *k) {
                Ok(pos) => cells[pos].1.insert(i),
                Err(pos) => {
                    let mut cell = IndexSubset::empty(subset.universe);
                    cell.insert(i);
                    cells.insert(pos, (ans, cell));
                }
            }
        }
        cells
    }

    fn undetermined(&self, subset: &IndexSubset) -> Error {
        let members: Vec<String> =
            subset.iter().map(|i| BitString::new(self.settings[i], self.problem.setting_width()).to_string()).collect();
        Error::Undetermined { subset: format!("{{{}}}", members.join(",")) }
    }

    /// Memoized minimax depth with early cutoff once an argument cannot beat
    /// the best one found so far.
    fn depth(&mut self, subset: &IndexSubset) -> Result<u32> {
        if self.solved(subset) {
            return Ok(0);
        }
        if let Some(d) = self.memo.get(subset) {
            return Ok(*d);
        }
        let mut best: Option<u32> = None;
        for ai in 0..self.domain.len() {
            let a = self.domain[ai];
            self.work += 1;
            if self.work > SOLVER_WORK_LIMIT {
                return Err(Error::SizeLimit { qubits: self.work, limit: SOLVER_WORK_LIMIT });
            }
            let cells = self.partition(subset, a);
            if cells.len() < 2 {
                continue; // the answer is forced, the query teaches nothing
            }
            let mut worst = 0u32;
            let mut viable = true;
            for (_, cell) in &cells {
                let d = 1 + self.depth(cell)?;
                worst = worst.max(d);
                if best.is_some_and(|b| worst >= b) {
                    viable = false;
                    break;
                }
            }
            if viable {
                best = Some(best.map_or(worst, |b| b.min(worst)));
            }
        }
        match best {
            Some(d) => {
                self.memo.insert(subset.clone(), d);
                Ok(d)
            }
            None => Err(self.undetermined(subset)),
        }
    }

    /// Rebuilds an optimal tree after `depth` has warmed the memo; ties break
    /// toward the smallest argument.
    fn strategy(&mut self, subset: &IndexSubset) -> Result<QueryPlan> {
        if self.solved(subset) {
            let i = subset.iter().next().expect("strategy of an empty subset");
            return Ok(QueryPlan {
                argument: None,
                solution: Some(BitString::new(self.solutions[i], self.problem.solution_width())),
                branches: BTreeMap::new(),
            });
        }
        let target = self.depth(subset)?;
        for ai in 0..self.domain.len() {
            let a = self.domain[ai];
            let cells = self.partition(subset, a);
            if cells.len() < 2 {
                continue;
            }
            let mut worst = 0u32;
            for (_, cell) in &cells {
                worst = worst.max(1 + self.depth(cell)?);
            }
            if worst == target {
                let mut branches = BTreeMap::new();
                for (ans, cell) in &cells {
                    branches.insert(
                        BitString::new(*ans, self.problem.answer_width()),
                        self.strategy(cell)?,
                    );
                }
                return Ok(QueryPlan {
                    argument: Some(BitString::new(a, self.problem.domain_width())),
                    solution: None,
                    branches,
                });
            }
        }
        unreachable!("some argument must realize the minimax depth")
    }
}

/// A solver whose memo survives across calls, for callers that evaluate many
/// overlapping cells of one problem.
pub struct DepthOracle<'a> {
    solver: Solver<'a>,
}

impl<'a> DepthOracle<'a> {
    pub fn new(problem: &'a OracleProblem) -> Self {
        DepthOracle { solver: Solver::new(problem) }
    }

    /// Worst-case classical queries when the setting is known to lie in `cell`.
    pub fn depth(&mut self, cell: &SettingSet) -> Result<u32> {
        let subset = indices_of(self.solver.problem, cell)?;
        self.solver.depth(&subset)
    }
}

fn indices_of(problem: &OracleProblem, cell: &SettingSet) -> Result<IndexSubset> {
    let mut subset = IndexSubset::empty(problem.sigma().len());
    for b in cell.iter() {
        match problem.sigma().index_of(b) {
            Some(i) => subset.insert(i),
            None => {
                return Err(Error::InvalidSubset {
                    detail: format!("{b} is not a setting of {}", problem.name()),
                })
            }
        }
    }
    Ok(subset)
}

/// Worst-case classical queries over the whole setting set.
pub fn classical_depth(problem: &OracleProblem) -> Result<u32> {
    Solver::new(problem).depth(&IndexSubset::full(problem.sigma().len()))
}

/// Worst-case classical queries when the setting is known to lie in `cell`.
pub fn cell_depth(problem: &OracleProblem, cell: &SettingSet) -> Result<u32> {
    Solver::new(problem).depth(&indices_of(problem, cell)?)
}

/// Same value as [`cell_depth`], computed by bare recursion with no memo and
/// no pruning.  Exponential; reserve it for small cells.
pub fn cell_depth_plain(problem: &OracleProblem, cell: &SettingSet) -> Result<u32> {
    fn recurse(solver: &Solver<'_>, subset: &IndexSubset) -> Result<u32> {
        if solver.solved(subset) {
            return Ok(0);
        }
        let mut best: Option<u32> = None;
        for a in &solver.domain {
            let cells = solver.partition(subset, *a);
            if cells.len() < 2 {
                continue;
            }
            let mut worst = 0u32;
            for (_, cell) in &cells {
                worst = worst.max(1 + recurse(solver, cell)?);
            }
            best = Some(best.map_or(worst, |b| b.min(worst)));
        }
        best.ok_or_else(|| solver.undetermined(subset))
    }
    let solver = Solver::new(problem);
    recurse(&solver, &indices_of(problem, cell)?)
}

/// Optimal strategy tree for `cell`, replayable against the real oracle.
pub fn cell_strategy(problem: &OracleProblem, cell: &SettingSet) -> Result<QueryPlan> {
    Solver::new(problem).strategy(&indices_of(problem, cell)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{make_bernstein_vazirani, make_deutsch_jozsa, make_grover, make_simon};

    fn cell(problem: &OracleProblem, members: &[&str]) -> SettingSet {
        let w = problem.setting_width();
        SettingSet::new(
            w,
            members.iter().map(|m| BitString::parse(m, Some(w)).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn drawer_search_needs_all_but_one_probe() {
        // opening k drawers rules out k settings, so 2^n - 1 probes
        for n in 1..=3usize {
            let p = make_grover(n).unwrap();
            assert_eq!(classical_depth(&p).unwrap(), (1 << n) - 1);
        }
    }

    #[test]
    fn frozen_full_depths() {
        assert_eq!(classical_depth(&make_deutsch_jozsa(2).unwrap()).unwrap(), 3);
        assert_eq!(classical_depth(&make_simon(2).unwrap()).unwrap(), 3);
        assert_eq!(classical_depth(&make_deutsch_jozsa(1).unwrap()).unwrap(), 2);
        assert_eq!(classical_depth(&make_bernstein_vazirani(2).unwrap()).unwrap(), 2);
    }

    #[test]
    fn two_element_cells_need_one_query() {
        let p = make_grover(2).unwrap();
        assert_eq!(cell_depth(&p, &cell(&p, &["01", "11"])).unwrap(), 1);
        let dj = make_deutsch_jozsa(2).unwrap();
        assert_eq!(cell_depth(&dj, &cell(&dj, &["0011", "1111"])).unwrap(), 1);
    }

    #[test]
    fn plain_recursion_agrees_on_every_drawer_subset() {
        let p = make_grover(2).unwrap();
        let all = p.sigma().members().to_vec();
        let full_depth = classical_depth(&p).unwrap();
        for mask in 1u32..16 {
            let members: Vec<_> =
                all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, b)| *b).collect();
            let s = SettingSet::new(2, members).unwrap();
            let fast = cell_depth(&p, &s).unwrap();
            let slow = cell_depth_plain(&p, &s).unwrap();
            assert_eq!(fast, slow);
            assert!(fast <= full_depth, "restriction can only get easier");
        }
    }

    #[test]
    fn plain_recursion_agrees_on_every_table_subset() {
        let p = make_deutsch_jozsa(2).unwrap();
        let all = p.sigma().members().to_vec();
        for mask in 1u32..256 {
            let members: Vec<_> =
                all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, b)| *b).collect();
            let s = SettingSet::new(4, members).unwrap();
            assert_eq!(cell_depth(&p, &s).unwrap(), cell_depth_plain(&p, &s).unwrap());
        }
    }

    #[test]
    fn strategy_replays_soundly_within_budget() {
        for p in [make_grover(2).unwrap(), make_deutsch_jozsa(2).unwrap(), make_simon(2).unwrap()]
        {
            let full = SettingSet::new(p.setting_width(), p.sigma().members().to_vec()).unwrap();
            let plan = cell_strategy(&p, &full).unwrap();
            let depth = cell_depth(&p, &full).unwrap();
            assert_eq!(plan.depth(), depth);
            for b in p.sigma().iter() {
                let (claimed, queries) = replay(&p, &plan, b).unwrap();
                assert_eq!(claimed, p.solution(b), "setting {b}");
                assert!(queries <= depth);
            }
        }
    }

    #[test]
    fn foreign_cell_is_rejected() {
        let p = make_grover(2).unwrap();
        let bad = SettingSet::new(3, vec![BitString::parse("000", None).unwrap()]).unwrap();
        assert_eq!(cell_depth(&p, &bad).unwrap_err().contract(), "INVALID_SUBSET");
    }

    #[test]
    fn indistinguishable_settings_with_distinct_solutions_are_undetermined() {
        let p = OracleProblem::from_json_str(
            r#"{
                "name": "stuck",
                "setting_width": 1,
                "encoding": "compact",
                "settings": ["0", "1"],
                "domain": ["0"],
                "answers": { "0": ["0"], "1": ["0"] },
                "solutions": { "0": "0", "1": "1" }
            }"#,
        )
        .unwrap();
        let full = SettingSet::new(1, p.sigma().members().to_vec()).unwrap();
        assert_eq!(cell_depth(&p, &full).unwrap_err().contract(), "UNDETERMINED");
        assert_eq!(cell_depth_plain(&p, &full).unwrap_err().contract(), "UNDETERMINED");
    }
}
