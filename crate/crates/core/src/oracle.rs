//! Oracle problems as two-player games.
//!
//! One player fixes a *setting* `b` from a finite set `sigma`; the other may
//! only evaluate the query map `a -> answer(b, a)` and must name `solution(b)`.
//! A problem is a plain value: the setting set, the query domain, and two
//! total maps.  Settings either name a hidden datum directly (`Compact`
//! encoding) or spell out the whole function table of the query map in
//! lexicographic argument order (`Table` encoding).
//!
//! Builtin families: hidden-drawer search, constant-vs-balanced tables,
//! hidden-mask parity, and hidden-period tables.  Arbitrary problems can be
//! loaded from a JSON description; see [`OracleProblem::from_json_str`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::{all_strings, BitString};
use crate::error::{Error, Result};

/// How the setting strings are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SettingEncoding {
    /// The setting is the hidden datum itself (drawer number, mask, ...).
    Compact,
    /// The setting is the concatenated function table of the query map.
    Table,
}

/// An immutable, sorted, duplicate-free set of equal-width settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SettingSet {
    width: usize,
    members: Vec<BitString>,
}

impl SettingSet {
    pub fn new(width: usize, mut members: Vec<BitString>) -> Result<Self> {
        for m in &members {
            if m.width() != width {
                return Err(Error::LengthMismatch {
                    what: format!("setting {m}"),
                    expected: width,
                    found: m.width(),
                });
            }
        }
        members.sort();
        members.dedup();
        Ok(Self { width, members })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn contains(&self, b: &BitString) -> bool {
        b.width() == self.width && self.members.binary_search(b).is_ok()
    }

    /// Position of `b` in the sorted member list.
    pub fn index_of(&self, b: &BitString) -> Option<usize> {
        if b.width() != self.width {
            return None;
        }
        self.members.binary_search(b).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.members.iter()
    }

    pub fn is_subset_of(&self, other: &SettingSet) -> bool {
        self.width == other.width && self.members.iter().all(|m| other.contains(m))
    }

    pub fn intersect(&self, other: &SettingSet) -> SettingSet {
        let members = self.members.iter().filter(|m| other.contains(m)).copied().collect();
        SettingSet { width: self.width, members }
    }
}

impl fmt::Display for SettingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// Rule computing `answer(b, a)`.
#[derive(Debug, Clone)]
enum AnswerMap {
    /// 1 exactly when `a = b` (hidden-drawer search).
    Kronecker,
    /// Parity of the bitwise overlap of `a` and `b` (hidden-mask parity).
    DotParity,
    /// The setting is a function table; the answer is its chunk at `a`'s
    /// lexicographic index.
    TableChunks,
    /// Arbitrary table keyed by `(b, a)` values; used for loaded problems.
    Explicit(BTreeMap<(u32, u32), u32>),
}

/// Rule computing `solution(b)`.
#[derive(Debug, Clone)]
enum SolutionMap {
    /// The setting is its own solution.
    Identity,
    /// Arbitrary map keyed by the setting value.
    Explicit(BTreeMap<u32, u32>),
}

/// A complete two-player oracle problem.
#[derive(Debug, Clone)]
pub struct OracleProblem {
    name: String,
    sigma: SettingSet,
    query_domain: Vec<BitString>,
    answer_width: usize,
    solution_width: usize,
    encoding: SettingEncoding,
    answers: AnswerMap,
    solutions: SolutionMap,
    /// Lexicographic rank of each domain element, for table-chunk lookups.
    domain_index: BTreeMap<u32, usize>,
}

impl OracleProblem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sigma(&self) -> &SettingSet {
        &self.sigma
    }

    pub fn setting_width(&self) -> usize {
        self.sigma.width()
    }

    pub fn query_domain(&self) -> &[BitString] {
        &self.query_domain
    }

    pub fn domain_width(&self) -> usize {
        self.query_domain[0].width()
    }

    pub fn answer_width(&self) -> usize {
        self.answer_width
    }

    pub fn solution_width(&self) -> usize {
        self.solution_width
    }

    pub fn encoding(&self) -> SettingEncoding {
        self.encoding
    }

    /// The answer map; total over `sigma x query_domain`.
    pub fn answer(&self, b: &BitString, a: &BitString) -> BitString {
        assert!(self.sigma.contains(b), "setting {b} outside the setting set");
        assert!(
            self.domain_index.contains_key(&a.value()) && a.width() == self.domain_width(),
            "argument {a} outside the query domain"
        );
        BitString::new(self.answer_value(b.value(), a.value()), self.answer_width)
    }

    /// The solution map; total over `sigma`.
    pub fn solution(&self, b: &BitString) -> BitString {
        assert!(self.sigma.contains(b), "setting {b} outside the setting set");
        BitString::new(self.solution_value(b.value()), self.solution_width)
    }

    /// Raw answer lookup used by the oracle operators, which must stay total
    /// over every basis state of the setting register: values outside the
    /// game resolve to zero, where no amplitude ever lives.
    pub(crate) fn answer_value(&self, b: u32, a: u32) -> u32 {
        match &self.answers {
            AnswerMap::Kronecker => u32::from(b == a),
            AnswerMap::DotParity => (b & a).count_ones() % 2,
            AnswerMap::TableChunks => match self.domain_index.get(&a) {
                Some(&i) => BitString::new(b, self.setting_width()).chunk(i, self.answer_width).value(),
                None => 0,
            },
            AnswerMap::Explicit(map) => map.get(&(b, a)).copied().unwrap_or(0),
        }
    }

    pub(crate) fn solution_value(&self, b: u32) -> u32 {
        match &self.solutions {
            SolutionMap::Identity => b,
            SolutionMap::Explicit(map) => *map.get(&b).expect("solution map is total over sigma"),
        }
    }

    /// Set of solutions taken over `subset` (the image of the solution map).
    pub fn solution_image(&self, subset: &SettingSet) -> BTreeSet<BitString> {
        subset.iter().map(|b| self.solution(b)).collect()
    }

    /// Restricts the game to a subset of settings, inheriting both maps.
    ///
    /// The subset must be non-empty and contained in `sigma`.
    pub fn restrict(self: &Arc<Self>, subset: SettingSet) -> Result<ReducedProblem> {
        if subset.is_empty() {
            return Err(Error::InvalidSubset { detail: "subset is empty".into() });
        }
        if !subset.is_subset_of(&self.sigma) {
            return Err(Error::InvalidSubset {
                detail: format!("{subset} is not contained in the setting set"),
            });
        }
        Ok(ReducedProblem { base: Arc::clone(self), subset })
    }

    /// Checks internal consistency; called by every constructor.
    fn validate(&self) -> Result<()> {
        if self.sigma.is_empty() {
            return Err(Error::InvalidSubset { detail: "setting set is empty".into() });
        }
        if self.query_domain.is_empty() {
            return Err(Error::LengthMismatch {
                what: "query domain".into(),
                expected: 1,
                found: 0,
            });
        }
        let dw = self.domain_width();
        for a in &self.query_domain {
            if a.width() != dw {
                return Err(Error::LengthMismatch {
                    what: format!("query argument {a}"),
                    expected: dw,
                    found: a.width(),
                });
            }
        }
        if self.encoding == SettingEncoding::Table {
            let expected = self.query_domain.len() * self.answer_width;
            if self.setting_width() != expected {
                return Err(Error::LengthMismatch {
                    what: "table-encoded setting width".into(),
                    expected,
                    found: self.setting_width(),
                });
            }
            // a table-encoded answer map must agree with reading the chunks
            for b in self.sigma.iter() {
                for (i, a) in self.query_domain.iter().enumerate() {
                    let from_map = self.answer_value(b.value(), a.value());
                    let from_chunk = b.chunk(i, self.answer_width).value();
                    if from_map != from_chunk {
                        return Err(Error::ProblemFile {
                            key: format!("answers.{b}[{i}]"),
                            reason: format!(
                                "table encoding requires answer {from_chunk:0w$b}, found {from_map:0w$b}",
                                w = self.answer_width
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// A problem restricted to a subset of its settings.
///
/// Both maps are inherited unchanged; only the setting set shrinks.  This is
/// what "advanced knowledge of a measurement outcome" leaves on the table.
#[derive(Debug, Clone)]
pub struct ReducedProblem {
    base: Arc<OracleProblem>,
    subset: SettingSet,
}

impl ReducedProblem {
    pub fn base(&self) -> &Arc<OracleProblem> {
        &self.base
    }

    pub fn subset(&self) -> &SettingSet {
        &self.subset
    }

    pub fn answer(&self, b: &BitString, a: &BitString) -> BitString {
        assert!(self.subset.contains(b), "setting {b} outside the restricted set");
        self.base.answer(b, a)
    }

    pub fn solution(&self, b: &BitString) -> BitString {
        assert!(self.subset.contains(b), "setting {b} outside the restricted set");
        self.base.solution(b)
    }

    pub fn solution_image(&self) -> BTreeSet<BitString> {
        self.base.solution_image(&self.subset)
    }
}

// ---------------------------------------------------------------------------
// builtin families
// ---------------------------------------------------------------------------

/// The builtin problem families the workbench knows by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    /// Find the one drawer holding the ball: `answer(b, a) = [a = b]`.
    Grover,
    /// Decide whether a one-bit table is constant or balanced.
    DeutschJozsa,
    /// Recover a hidden mask from parity queries: `answer(b, a) = parity(a & b)`.
    BernsteinVazirani,
    /// Recover the hidden period `p` of a two-to-one table `f(a) = f(a xor p)`.
    Simon,
}

impl ProblemKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProblemKind::Grover => "grover",
            ProblemKind::DeutschJozsa => "dj",
            ProblemKind::BernsteinVazirani => "bv",
            ProblemKind::Simon => "simon",
        }
    }

    /// Inclusive range of supported `n`.
    pub fn supported_n(&self) -> (usize, usize) {
        match self {
            ProblemKind::Grover => (1, 12),
            ProblemKind::DeutschJozsa => (1, 3),
            ProblemKind::BernsteinVazirani => (1, 10),
            ProblemKind::Simon => (2, 3),
        }
    }

    pub fn build(&self, n: usize) -> Result<Arc<OracleProblem>> {
        match self {
            ProblemKind::Grover => make_grover(n),
            ProblemKind::DeutschJozsa => make_deutsch_jozsa(n),
            ProblemKind::BernsteinVazirani => make_bernstein_vazirani(n),
            ProblemKind::Simon => make_simon(n),
        }
    }
}

fn check_range(kind: ProblemKind, n: usize) -> Result<()> {
    let (lo, hi) = kind.supported_n();
    if n < lo || n > hi {
        return Err(Error::SizeLimit { qubits: n, limit: hi });
    }
    Ok(())
}

/// Hidden-drawer search over `2^n` drawers.
pub fn make_grover(n: usize) -> Result<Arc<OracleProblem>> {
    check_range(ProblemKind::Grover, n)?;
    let sigma = SettingSet::new(n, all_strings(n))?;
    let problem = OracleProblem {
        name: format!("grover[n={n}]"),
        query_domain: all_strings(n),
        domain_index: index_map(&all_strings(n)),
        sigma,
        answer_width: 1,
        solution_width: n,
        encoding: SettingEncoding::Compact,
        answers: AnswerMap::Kronecker,
        solutions: SolutionMap::Identity,
    };
    problem.validate()?;
    Ok(Arc::new(problem))
}

/// Constant-vs-balanced decision over `n`-bit tables (setting = the table).
///
/// Solution encoding: `0` = constant, `1` = balanced.
pub fn make_deutsch_jozsa(n: usize) -> Result<Arc<OracleProblem>> {
    check_range(ProblemKind::DeutschJozsa, n)?;
    let entries = 1usize << n;
    let mut settings = Vec::new();
    let mut solutions = BTreeMap::new();
    for t in 0..(1u32 << entries) {
        let ones = t.count_ones() as usize;
        let constant = ones == 0 || ones == entries;
        let balanced = ones == entries / 2;
        if constant || balanced {
            settings.push(BitString::new(t, entries));
            solutions.insert(t, u32::from(balanced));
        }
    }
    let problem = OracleProblem {
        name: format!("dj[n={n}]"),
        sigma: SettingSet::new(entries, settings)?,
        query_domain: all_strings(n),
        domain_index: index_map(&all_strings(n)),
        answer_width: 1,
        solution_width: 1,
        encoding: SettingEncoding::Table,
        answers: AnswerMap::TableChunks,
        solutions: SolutionMap::Explicit(solutions),
    };
    problem.validate()?;
    Ok(Arc::new(problem))
}

/// Hidden-mask parity over `n` bits.
pub fn make_bernstein_vazirani(n: usize) -> Result<Arc<OracleProblem>> {
    check_range(ProblemKind::BernsteinVazirani, n)?;
    let problem = OracleProblem {
        name: format!("bv[n={n}]"),
        sigma: SettingSet::new(n, all_strings(n))?,
        query_domain: all_strings(n),
        domain_index: index_map(&all_strings(n)),
        answer_width: 1,
        solution_width: n,
        encoding: SettingEncoding::Compact,
        answers: AnswerMap::DotParity,
        solutions: SolutionMap::Identity,
    };
    problem.validate()?;
    Ok(Arc::new(problem))
}

/// Hidden-period tables: all `f : {0,1}^n -> {0,1}^n` with `f(a) = f(a')`
/// exactly when `a' = a xor p` for a fixed nonzero period `p`, taking distinct
/// values on distinct cosets.  The setting is the concatenated table, the
/// solution is `p`.
pub fn make_simon(n: usize) -> Result<Arc<OracleProblem>> {
    check_range(ProblemKind::Simon, n)?;
    let args = all_strings(n);
    let table_width = args.len() * n;
    let mut settings = Vec::new();
    let mut solutions = BTreeMap::new();
    for p in 1..(1u32 << n) {
        // cosets of {0, p}, ordered by their smallest member
        let mut cosets: Vec<[u32; 2]> = Vec::new();
        let mut seen = vec![false; args.len()];
        for a in 0..(1u32 << n) {
            if !seen[a as usize] {
                seen[a as usize] = true;
                seen[(a ^ p) as usize] = true;
                cosets.push([a, a ^ p]);
            }
        }
        let mut values = Vec::new();
        assign_distinct_values(&cosets, 1u32 << n, &mut values, &mut |values| {
            let mut chunks = Vec::with_capacity(args.len());
            for a in 0..(1u32 << n) {
                let coset = cosets.iter().position(|c| c.contains(&a)).unwrap();
                chunks.push(BitString::new(values[coset], n));
            }
            let table = BitString::concat(&chunks);
            settings.push(table);
            solutions.insert(table.value(), p);
        });
    }
    let problem = OracleProblem {
        name: format!("simon[n={n}]"),
        sigma: SettingSet::new(table_width, settings)?,
        query_domain: args.clone(),
        domain_index: index_map(&args),
        answer_width: n,
        solution_width: n,
        encoding: SettingEncoding::Table,
        answers: AnswerMap::TableChunks,
        solutions: SolutionMap::Explicit(solutions),
    };
    problem.validate()?;
    Ok(Arc::new(problem))
}

/// Visits every injective assignment of values `0..range` to the cosets.
fn assign_distinct_values(
    cosets: &[[u32; 2]],
    range: u32,
    chosen: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u32]),
) {
    if chosen.len() == cosets.len() {
        visit(chosen);
        return;
    }
    for v in 0..range {
        if !chosen.contains(&v) {
            chosen.push(v);
            assign_distinct_values(cosets, range, chosen, visit);
            chosen.pop();
        }
    }
}

fn index_map(domain: &[BitString]) -> BTreeMap<u32, usize> {
    let mut sorted = domain.to_vec();
    sorted.sort();
    sorted.iter().enumerate().map(|(i, a)| (a.value(), i)).collect()
}

// ---------------------------------------------------------------------------
// problem files
// ---------------------------------------------------------------------------

/// On-disk description of a custom problem.
#[derive(Debug, Deserialize)]
struct ProblemFileRepr {
    name: String,
    setting_width: usize,
    encoding: String,
    settings: Vec<String>,
    domain: Vec<String>,
    answers: BTreeMap<String, Vec<String>>,
    solutions: BTreeMap<String, String>,
}

impl OracleProblem {
    /// Loads a problem from its JSON description.
    ///
    /// Expected shape:
    ///
    /// ```json
    /// {
    ///   "name": "tiny-search",
    ///   "setting_width": 2,
    ///   "encoding": "compact",
    ///   "settings": ["00", "01", "10", "11"],
    ///   "domain": ["00", "01", "10", "11"],
    ///   "answers": { "00": ["1","0","0","0"], "01": ["0","1","0","0"], ... },
    ///   "solutions": { "00": "00", "01": "01", ... }
    /// }
    /// ```
    ///
    /// Settings accept binary (`0101`, `0b0101`) or hex (`0x5`) spellings.
    /// Validation failures name the offending key.
    pub fn from_json_str(text: &str) -> Result<Arc<OracleProblem>> {
        let repr: ProblemFileRepr = serde_json::from_str(text).map_err(|e| Error::ProblemFile {
            key: "<root>".into(),
            reason: e.to_string(),
        })?;
        repr.build()
    }
}

impl ProblemFileRepr {
    fn build(self) -> Result<Arc<OracleProblem>> {
        let fail = |key: &str, reason: String| Error::ProblemFile { key: key.into(), reason };
        let encoding = match self.encoding.as_str() {
            "compact" => SettingEncoding::Compact,
            "table" => SettingEncoding::Table,
            other => return Err(fail("encoding", format!("unknown encoding `{other}`"))),
        };
        if self.settings.is_empty() {
            return Err(fail("settings", "at least one setting is required".into()));
        }
        let mut settings = Vec::new();
        for s in &self.settings {
            settings.push(BitString::parse(s, Some(self.setting_width))?);
        }
        let sigma = SettingSet::new(self.setting_width, settings)?;
        if self.domain.is_empty() {
            return Err(fail("domain", "at least one query argument is required".into()));
        }
        let mut domain = Vec::new();
        for d in &self.domain {
            let a = BitString::parse(d, None)?;
            if a.width() != domain.first().map_or(a.width(), BitString::width) {
                return Err(fail("domain", format!("argument {d} has a different width")));
            }
            domain.push(a);
        }
        domain.sort();
        domain.dedup();
        if domain.len() != self.domain.len() {
            return Err(fail("domain", "duplicate query arguments".into()));
        }
        let domain_index = index_map(&domain);

        let mut answer_width = None;
        let mut answers = BTreeMap::new();
        for (key, row) in &self.answers {
            let b = BitString::parse(key, Some(self.setting_width))?;
            if !sigma.contains(&b) {
                return Err(fail(&format!("answers.{key}"), "not a declared setting".into()));
            }
            if row.len() != domain.len() {
                return Err(fail(
                    &format!("answers.{key}"),
                    format!("expected {} entries, found {}", domain.len(), row.len()),
                ));
            }
            for (i, entry) in row.iter().enumerate() {
                let v = BitString::parse(entry, None)?;
                match answer_width {
                    None => answer_width = Some(v.width()),
                    Some(w) if w != v.width() => {
                        return Err(fail(
                            &format!("answers.{key}[{i}]"),
                            format!("answer width {} disagrees with {w}", v.width()),
                        ))
                    }
                    _ => {}
                }
                answers.insert((b.value(), domain[i].value()), v.value());
            }
        }
        for b in sigma.iter() {
            if !answers.contains_key(&(b.value(), domain[0].value())) {
                return Err(fail(&format!("answers.{b}"), "missing answer row".into()));
            }
        }
        let answer_width = answer_width.expect("at least one answer row exists");

        let mut solution_width = None;
        let mut solutions = BTreeMap::new();
        for (key, entry) in &self.solutions {
            let b = BitString::parse(key, Some(self.setting_width))?;
            if !sigma.contains(&b) {
                return Err(fail(&format!("solutions.{key}"), "not a declared setting".into()));
            }
            let v = BitString::parse(entry, None)?;
            match solution_width {
                None => solution_width = Some(v.width()),
                Some(w) if w != v.width() => {
                    return Err(fail(
                        &format!("solutions.{key}"),
                        format!("solution width {} disagrees with {w}", v.width()),
                    ))
                }
                _ => {}
            }
            solutions.insert(b.value(), v.value());
        }
        for b in sigma.iter() {
            if !solutions.contains_key(&b.value()) {
                return Err(fail(&format!("solutions.{b}"), "missing solution".into()));
            }
        }

        let problem = OracleProblem {
            name: self.name,
            sigma,
            query_domain: domain,
            domain_index,
            answer_width,
            solution_width: solution_width.expect("at least one solution exists"),
            encoding,
            answers: AnswerMap::Explicit(answers),
            solutions: SolutionMap::Explicit(solutions),
        };
        problem.validate()?;
        Ok(Arc::new(problem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grover_answers_hit_exactly_once() {
        let p = make_grover(2).unwrap();
        assert_eq!(p.sigma().len(), 4);
        for b in p.sigma().iter() {
            let hits: u32 = p.query_domain().iter().map(|a| p.answer(b, a).value()).sum();
            assert_eq!(hits, 1);
            assert_eq!(p.answer(b, b).value(), 1);
            assert_eq!(p.solution(b), *b);
        }
    }

    #[test]
    fn dj_has_two_constants_and_six_balanced_at_n2() {
        let p = make_deutsch_jozsa(2).unwrap();
        assert_eq!(p.sigma().len(), 8);
        let balanced: Vec<_> =
            p.sigma().iter().filter(|b| p.solution(b).value() == 1).collect();
        assert_eq!(balanced.len(), 6);
        // the table 0011 maps arguments 00,01 -> 0 and 10,11 -> 1
        let b = BitString::parse("0011", None).unwrap();
        let answers: Vec<u32> =
            p.query_domain().iter().map(|a| p.answer(&b, a).value()).collect();
        assert_eq!(answers, [0, 0, 1, 1]);
        assert_eq!(p.solution(&b).value(), 1);
    }

    #[test]
    fn simon_setting_count_at_n2() {
        let p = make_simon(2).unwrap();
        assert_eq!(p.sigma().len(), 36);
        // every table is two-to-one with the advertised period
        for b in p.sigma().iter() {
            let pval = p.solution(b);
            assert_ne!(pval.value(), 0);
            for a in p.query_domain() {
                let mate = a.xor(&BitString::new(pval.value(), 2));
                assert_eq!(p.answer(b, a), p.answer(b, &mate));
            }
        }
    }

    #[test]
    fn simon_setting_count_at_n3() {
        let p = make_simon(3).unwrap();
        assert_eq!(p.sigma().len(), 7 * 8 * 7 * 6 * 5);
    }

    #[test]
    fn bv_answer_is_overlap_parity() {
        let p = make_bernstein_vazirani(3).unwrap();
        let b = BitString::parse("101", None).unwrap();
        let a = BitString::parse("100", None).unwrap();
        assert_eq!(p.answer(&b, &a).value(), 1);
    }

    #[test]
    fn out_of_range_sizes_are_rejected() {
        assert_eq!(make_grover(13).unwrap_err().contract(), "SIZE_LIMIT");
        assert_eq!(make_deutsch_jozsa(4).unwrap_err().contract(), "SIZE_LIMIT");
        assert_eq!(make_simon(4).unwrap_err().contract(), "SIZE_LIMIT");
        assert_eq!(make_simon(1).unwrap_err().contract(), "SIZE_LIMIT");
    }

    #[test]
    fn restrict_rejects_foreign_and_empty_subsets() {
        let p = make_grover(2).unwrap();
        let foreign = SettingSet::new(2, vec![BitString::new(1, 2)]).unwrap();
        assert!(p.restrict(foreign).is_ok());
        let empty = SettingSet::new(2, vec![]).unwrap();
        assert_eq!(p.restrict(empty).unwrap_err().contract(), "INVALID_SUBSET");
        let wrong_width = SettingSet::new(3, vec![BitString::new(1, 3)]).unwrap();
        assert_eq!(p.restrict(wrong_width).unwrap_err().contract(), "INVALID_SUBSET");
    }

    #[test]
    fn restrict_to_everything_changes_nothing() {
        let p = make_deutsch_jozsa(1).unwrap();
        let r = p.restrict(p.sigma().clone()).unwrap();
        assert_eq!(r.subset(), p.sigma());
        for b in p.sigma().iter() {
            for a in p.query_domain() {
                assert_eq!(r.answer(b, a), p.answer(b, a));
            }
            assert_eq!(r.solution(b), p.solution(b));
        }
    }

    #[test]
    fn problem_file_round_trip() {
        let text = r#"{
            "name": "tiny-search",
            "setting_width": 1,
            "encoding": "compact",
            "settings": ["0", "1"],
            "domain": ["0", "1"],
            "answers": { "0": ["1", "0"], "1": ["0", "1"] },
            "solutions": { "0": "0", "1": "1" }
        }"#;
        let p = OracleProblem::from_json_str(text).unwrap();
        assert_eq!(p.sigma().len(), 2);
        assert_eq!(p.answer(&BitString::new(1, 1), &BitString::new(1, 1)).value(), 1);
    }

    #[test]
    fn problem_file_errors_name_the_key() {
        let text = r#"{
            "name": "broken",
            "setting_width": 1,
            "encoding": "compact",
            "settings": ["0", "1"],
            "domain": ["0", "1"],
            "answers": { "0": ["1", "0"], "1": ["0"] },
            "solutions": { "0": "0", "1": "1" }
        }"#;
        let err = OracleProblem::from_json_str(text).unwrap_err();
        assert!(err.to_string().contains("answers.1"), "got: {err}");
    }

    #[test]
    fn table_encoding_must_match_chunks() {
        let text = r#"{
            "name": "lying-table",
            "setting_width": 2,
            "encoding": "table",
            "settings": ["01"],
            "domain": ["0", "1"],
            "answers": { "01": ["1", "1"] },
            "solutions": { "01": "1" }
        }"#;
        let err = OracleProblem::from_json_str(text).unwrap_err();
        assert_eq!(err.contract(), "PROBLEM_FILE");
        assert!(err.to_string().contains("answers.01[0]"), "got: {err}");
    }
}
