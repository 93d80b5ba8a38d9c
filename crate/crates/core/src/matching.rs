//! Standard matchings on `Γ_n`, alternating paths, the path constructor
//! toward the hub pair `ρ = ([n])`, `ν = (n|[n-1])`, and conducting-graph
//! certificates backed by Hopcroft-Karp.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flip::{flip_osp, flippable_osp, SubgraphSpec};
use crate::osp::{enumerate_osps, level, Color, ColorSet, Osp};

/// A matching given as a partner rule: the matched neighbor and the color of
/// the shared facet, or `None` for a critical vertex.
pub trait Partner<V> {
    fn partner(&self, v: &V) -> Option<(V, Color)>;
}

/// `M_Σ`: flip at `level(σ, Σ)`.
#[derive(Clone, Debug)]
pub struct StandardMatching {
    pub sigma: Vec<Color>,
}

impl StandardMatching {
    pub fn new(sigma: &[Color]) -> StandardMatching {
        StandardMatching { sigma: sigma.to_vec() }
    }

    pub fn ascending(colors: ColorSet) -> StandardMatching {
        StandardMatching { sigma: colors.to_vec() }
    }
}

impl Partner<Osp> for StandardMatching {
    fn partner(&self, v: &Osp) -> Option<(Osp, Color)> {
        standard_match(v, &self.sigma).map(|u| (u, level(v, &self.sigma).expect("level")))
    }
}

pub fn standard_match(osp: &Osp, sigma: &[Color]) -> Option<Osp> {
    level(osp, sigma).map(|k| flip_osp(osp, k))
}

/// A matching obtained by toggling edges of a base matching.
#[derive(Clone, Debug)]
pub struct Deformed<V, M> {
    pub base: M,
    pub overrides: HashMap<V, Option<(V, Color)>>,
}

impl<V: Clone + Eq + Hash, M: Partner<V>> Partner<V> for Deformed<V, M> {
    fn partner(&self, v: &V) -> Option<(V, Color)> {
        match self.overrides.get(v) {
            Some(p) => p.clone(),
            None => self.base.partner(v),
        }
    }
}

impl<V, M: Partner<V>> Partner<V> for &M {
    fn partner(&self, v: &V) -> Option<(V, Color)> {
        (**self).partner(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternatingPath<V> {
    pub vertices: Vec<V>,
    /// `colors[i]` is the facet color between `vertices[i]` and `vertices[i+1]`.
    pub colors: Vec<Color>,
    pub matched: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PathClass {
    Empty,
    NotAlternating,
    Augmenting,
    SemiAugmenting,
    WeaklySemiAugmenting,
    /// Semi-augmenting when read from the other end.
    ReverseSemiAugmenting,
    ReverseWeaklySemiAugmenting,
    NonAugmenting,
    /// Alternating, starting and ending with non-matching edges, but some
    /// endpoint is matched off the path.
    Alternating,
}

impl<V: Clone + Eq + Hash> AlternatingPath<V> {
    pub fn empty(start: V) -> Self {
        AlternatingPath {
            vertices: vec![start],
            colors: Vec::new(),
            matched: Vec::new(),
        }
    }

    pub fn start(&self) -> &V {
        &self.vertices[0]
    }

    pub fn end(&self) -> &V {
        self.vertices.last().expect("nonempty path")
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn push(&mut self, v: V, color: Color, matched: bool) {
        self.vertices.push(v);
        self.colors.push(color);
        self.matched.push(matched);
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.vertices.iter().all(|v| seen.insert(v))
    }

    /// Drop closed sub-walks until no vertex repeats.
    pub fn remove_loops(&self) -> Self {
        let mut out = AlternatingPath::empty(self.vertices[0].clone());
        let mut pos: HashMap<V, usize> = HashMap::new();
        pos.insert(self.vertices[0].clone(), 0);
        for i in 0..self.colors.len() {
            let v = &self.vertices[i + 1];
            if let Some(&k) = pos.get(v) {
                for u in out.vertices.drain(k + 1..) {
                    pos.remove(&u);
                }
                out.colors.truncate(k);
                out.matched.truncate(k);
            } else {
                pos.insert(v.clone(), out.vertices.len());
                out.push(v.clone(), self.colors[i], self.matched[i]);
            }
        }
        out
    }

    /// Check adjacency and flags against a matching, then classify.
    ///
    /// `step(v, c)` returns the neighbor of `v` across the facet of color `c`.
    pub fn classify<M, S>(&self, m: &M, step: S) -> PathClass
    where
        M: Partner<V>,
        S: Fn(&V, Color) -> Option<V>,
    {
        if self.colors.is_empty() {
            return PathClass::Empty;
        }
        if self.vertices.len() != self.colors.len() + 1 || self.matched.len() != self.colors.len() {
            return PathClass::NotAlternating;
        }
        for i in 0..self.colors.len() {
            let (u, w) = (&self.vertices[i], &self.vertices[i + 1]);
            if step(u, self.colors[i]).as_ref() != Some(w) {
                return PathClass::NotAlternating;
            }
            let is_m = m.partner(u).map(|(p, _)| p) == Some(w.clone());
            if is_m != self.matched[i] {
                return PathClass::NotAlternating;
            }
            if i > 0 && self.matched[i] == self.matched[i - 1] {
                return PathClass::NotAlternating;
            }
        }
        let first = self.matched[0];
        let last = *self.matched.last().unwrap();
        let critical = |v: &V| m.partner(v).is_none();
        let start_ok = first || critical(self.start());
        let end_ok = last || critical(self.end());
        let properly = start_ok && end_ok;
        match (first, last) {
            (false, false) if properly => PathClass::Augmenting,
            (false, false) => PathClass::Alternating,
            (true, false) if properly => PathClass::SemiAugmenting,
            (true, false) => PathClass::WeaklySemiAugmenting,
            (false, true) if properly => PathClass::ReverseSemiAugmenting,
            (false, true) => PathClass::ReverseWeaklySemiAugmenting,
            (true, true) => PathClass::NonAugmenting,
        }
    }
}

/// Toggle a matching along a properly alternating path, removing loops first.
pub fn deform<V, M, S>(m: M, path: &AlternatingPath<V>, step: S) -> Result<Deformed<V, M>>
where
    V: Clone + Eq + Hash,
    M: Partner<V>,
    S: Fn(&V, Color) -> Option<V>,
{
    let path = path.remove_loops();
    let class = path.classify(&m, &step);
    let proper = matches!(
        class,
        PathClass::Empty
            | PathClass::Augmenting
            | PathClass::SemiAugmenting
            | PathClass::ReverseSemiAugmenting
            | PathClass::NonAugmenting
    );
    if !proper {
        return Err(Error::Domain(format!("path is not properly alternating ({class:?})")));
    }
    let mut overrides = HashMap::new();
    let l = path.colors.len();
    if l == 0 {
        return Ok(Deformed { base: m, overrides });
    }
    for i in 0..=l {
        let v = path.vertices[i].clone();
        let before = (i > 0 && !path.matched[i - 1]).then(|| (path.vertices[i - 1].clone(), path.colors[i - 1]));
        let after = (i < l && !path.matched[i]).then(|| (path.vertices[i + 1].clone(), path.colors[i]));
        overrides.insert(v, before.or(after));
    }
    Ok(Deformed { base: m, overrides })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MatchingReport {
    pub domain_size: usize,
    pub critical: Vec<String>,
    pub violations: Vec<String>,
}

impl MatchingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Involution, facet sharing and domain closure of a partner rule.
pub fn verify_matching<V, M, S>(domain: &[V], m: &M, step: S) -> MatchingReport
where
    V: Clone + Eq + Hash + std::fmt::Display,
    M: Partner<V>,
    S: Fn(&V, Color) -> Option<V>,
{
    let set: HashSet<&V> = domain.iter().collect();
    let mut report = MatchingReport {
        domain_size: domain.len(),
        ..Default::default()
    };
    for v in domain {
        match m.partner(v) {
            None => report.critical.push(v.to_string()),
            Some((u, c)) => {
                if step(v, c).as_ref() != Some(&u) {
                    report.violations.push(format!("{v}: partner {u} does not share facet {c}"));
                }
                if !set.contains(&u) {
                    report.violations.push(format!("{v}: partner {u} outside domain"));
                }
                match m.partner(&u) {
                    Some((w, c2)) if &w == v && c2 == c => {}
                    _ => report.violations.push(format!("{v}: partner {u} is not matched back")),
                }
            }
        }
    }
    report
}

/// Neighbor across a facet in `Γ_n`.
pub fn osp_step(v: &Osp, c: Color) -> Option<Osp> {
    flippable_osp(v).contains(c).then(|| flip_osp(v, c))
}

/// How generic splits pick the color to split off.
#[derive(Clone, Debug)]
pub enum SplitChooser {
    Smallest,
    /// Smallest color whose split stays inside the graph, else smallest.
    StayIn(SubgraphSpec),
}

impl SplitChooser {
    fn choose(&self, cur: &Osp, candidates: ColorSet) -> Color {
        match self {
            SplitChooser::Smallest => candidates.min().expect("nonempty"),
            SplitChooser::StayIn(spec) => candidates
                .iter()
                .find(|&x| spec.contains(&flip_osp(cur, x)))
                .unwrap_or_else(|| candidates.min().expect("nonempty")),
        }
    }
}

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// The pair `(ρ, ν)` for the order `Σ`: `([n])` and `(Σ_last | rest)`.
pub fn hubs(n: Color, sigma: &[Color]) -> (Osp, Osp) {
    let all = ColorSet::full(n);
    let last = *sigma.last().expect("nonempty order");
    let rho = Osp::from_blocks(&[all]);
    let nu = Osp::from_blocks(&[ColorSet::single(last), all.without(last)]);
    (rho, nu)
}

/// Weakly semi-augmenting path from a non-critical `σ` to `ρ` or `ν` with
/// respect to `M_Σ`.
///
/// `Σ` is a sequence of distinct colors; missing colors are treated as
/// coming first in ascending order, which leaves levels unchanged on every
/// simplex that is non-critical for `Σ` itself.
pub fn path_to_hub(osp: &Osp, sigma: &[Color], chooser: &SplitChooser) -> Result<AlternatingPath<Osp>> {
    path_to_hub_budget(osp, sigma, chooser, DEFAULT_STEP_BUDGET)
}

pub fn path_to_hub_budget(
    osp: &Osp,
    sigma: &[Color],
    chooser: &SplitChooser,
    budget: usize,
) -> Result<AlternatingPath<Osp>> {
    let ground = osp.ground();
    let n = ground.max().unwrap_or(0);
    if ColorSet::full(n) != ground {
        return Err(Error::Domain("simplex must be a full partition of [n]".into()));
    }
    if n <= 2 {
        return Err(Error::Guard(format!("the hub path construction needs n >= 3, got n = {n}")));
    }
    let sset = ColorSet::from_colors(sigma);
    if sset.len() != sigma.len() || sigma.is_empty() || !sset.is_subset(ground) {
        return Err(Error::Domain("Σ must be a nonempty sequence of distinct colors of [n]".into()));
    }
    if level(osp, sigma).is_none() {
        return Err(Error::Domain(format!("{osp} is critical")));
    }
    let mut full: Vec<Color> = ground.minus(sset).to_vec();
    full.extend_from_slice(sigma);
    let mut fwd = [0u8; 16];
    let mut back = [0u8; 16];
    for (i, &c) in full.iter().enumerate() {
        fwd[c as usize] = i as Color;
        back[i] = c;
    }
    let canon: Vec<Color> = (0..=n).collect();
    let mut walk = Walk {
        n,
        sigma: &canon,
        cur: osp.map(&fwd),
        path: AlternatingPath::empty(osp.map(&fwd)),
        chooser,
        back,
        fwd,
        budget,
    };
    walk.run()?;
    let p = walk.path;
    Ok(AlternatingPath {
        vertices: p.vertices.iter().map(|v| v.map(&back)).collect(),
        colors: p.colors.iter().map(|&c| back[c as usize]).collect(),
        matched: p.matched,
    })
}

/// Constructor state, in labels where `Σ = (0, …, n)`.
struct Walk<'a> {
    n: Color,
    sigma: &'a [Color],
    cur: Osp,
    path: AlternatingPath<Osp>,
    chooser: &'a SplitChooser,
    fwd: [Color; 16],
    back: [Color; 16],
    budget: usize,
}

impl Walk<'_> {
    fn is_hub(&self) -> bool {
        let b = self.cur.blocks();
        b.len() == 1 || (b.len() == 2 && b[0] == ColorSet::single(self.n))
    }

    fn tick(&mut self) -> Result<()> {
        if self.path.len() >= self.budget {
            return Err(Error::Verification(format!(
                "hub path exceeded the step budget of {}",
                self.budget
            )));
        }
        Ok(())
    }

    /// Matching edge.
    fn m(&mut self) -> Result<()> {
        self.tick()?;
        let k = level(&self.cur, self.sigma)
            .ok_or_else(|| Error::Verification(format!("hub path reached critical {}", self.cur)))?;
        self.cur = flip_osp(&self.cur, k);
        self.path.push(self.cur, k, true);
        Ok(())
    }

    /// Non-matching edge of color `x`; true once a hub is reached.
    fn e(&mut self, x: Color) -> Result<bool> {
        self.tick()?;
        let k = level(&self.cur, self.sigma);
        if Some(x) == k || !flippable_osp(&self.cur).contains(x) {
            return Err(Error::Verification(format!("move flips {x} at {}, not a free edge", self.cur)));
        }
        self.cur = flip_osp(&self.cur, x);
        self.path.push(self.cur, x, false);
        Ok(self.is_hub())
    }

    /// Generic split of a block.
    fn split(&mut self, block: ColorSet) -> Result<bool> {
        let k = level(&self.cur, self.sigma).map(ColorSet::single).unwrap_or(ColorSet::EMPTY);
        let cands = block.minus(k);
        if cands.is_empty() || block.len() < 2 {
            return Err(Error::Verification(format!("no generic split of {block} at {}", self.cur)));
        }
        let orig = self.cur.map(&self.back);
        let x = self.chooser.choose(&orig, cands.map(&self.back));
        let x = self.fwd[x as usize];
        self.e(x)
    }

    fn run(&mut self) -> Result<()> {
        while !self.is_hub() {
            let k = level(&self.cur, self.sigma)
                .ok_or_else(|| Error::Verification(format!("hub path reached critical {}", self.cur)))?;
            if k == self.n {
                self.case_top()?;
            } else if k == self.n - 1 {
                self.case_penultimate()?;
            } else {
                // level <= n-2: flip below, then merge n-1 into {n}
                self.m()?;
                self.e(self.n - 1)?;
            }
        }
        Ok(())
    }

    /// Level `n`.
    fn case_top(&mut self) -> Result<()> {
        let n = self.n;
        let b: Vec<ColorSet> = self.cur.blocks().to_vec();
        let t = b.len();
        let i = self.cur.block_index(n).expect("n present");
        if i >= 1 {
            // move n one block toward the front
            let prev = b[i - 1];
            self.m()?;
            if let Some(a) = prev.as_single() {
                self.e(a)?;
            } else {
                self.split(prev)?;
            }
            return Ok(());
        }
        let a1 = b[0];
        if a1.len() >= 3 {
            self.m()?;
            self.split(a1.without(n))?;
            return Ok(());
        }
        if a1.len() == 1 && b[1].len() >= 2 {
            let a3 = b[2];
            if a3.len() >= 2 {
                self.m()?;
                self.split(a3)?;
            } else if t >= 4 {
                self.m()?;
                self.e(a3.as_single().unwrap())?;
            } else {
                let pick = b[1].inter(ColorSet::from_colors(&[n - 1, n - 2]));
                let a = pick.max().expect("n-1 or n-2 in the middle block");
                self.m()?;
                if self.e(a)? {
                    return Ok(());
                }
                self.m()?;
                self.e(a)?;
            }
            return Ok(());
        }
        // normal form: (n|a1|...) or ({n,a1}|...)
        let mid = if a1.len() == 1 { 2 } else { 1 };
        if let Some(&big) = b[mid..t - 1].iter().find(|s| s.len() >= 2) {
            self.m()?;
            self.split(big)?;
            return Ok(());
        }
        if t - 1 > mid {
            self.m()?;
            self.e(b[t - 2].as_single().unwrap())?;
            return Ok(());
        }
        if a1.len() == 2 {
            // ({n,a}|A) to ν
            self.m()?;
            self.e(a1.without(n).as_single().unwrap())?;
            return Ok(());
        }
        let a = b[1].as_single().unwrap();
        if a == n - 1 {
            // (n|n-1|A) to ρ
            self.m()?;
            if self.e(n - 1)? {
                return Ok(());
            }
            self.m()?;
            self.e(n - 1)?;
            return Ok(());
        }
        // (n|a|A) to (n|n-1|a∪B)
        for (matched_first, x) in [(true, n - 1), (true, a), (true, n - 1), (true, n - 1), (true, a)] {
            if matched_first {
                self.m()?;
            }
            if self.e(x)? {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Level `n-1`: last block is `{n}`.
    fn case_penultimate(&mut self) -> Result<()> {
        let n = self.n;
        let b: Vec<ColorSet> = self.cur.blocks().to_vec();
        let t = b.len();
        let j = self.cur.block_index(n - 1).expect("n-1 present");
        let pen = b[t - 2];
        if j == t - 2 {
            let a = pen.without(n - 1);
            self.m()?;
            match a.as_single() {
                Some(x) => self.e(x)?,
                None => self.split(a)?,
            };
            return Ok(());
        }
        if b[j].len() >= 2 || j + 4 <= t {
            // shrink the penultimate block, then merge it into {n}
            self.m()?;
            match pen.as_single() {
                Some(x) => self.e(x)?,
                None => self.split(pen)?,
            };
            return Ok(());
        }
        // (…|B|n-1|A|n)
        if j == 0 {
            self.m()?;
            self.e(n - 2)?;
            return Ok(());
        }
        let prev = b[j - 1];
        self.m()?;
        match prev.as_single() {
            Some(x) => self.e(x)?,
            None => self.split(prev)?,
        };
        Ok(())
    }
}

/// Search for a weakly semi-augmenting path from `start` to one of the
/// targets in `Γ_n`, by breadth-first search over alternating walks.
pub fn search_hub_path<M: Partner<Osp>>(start: &Osp, m: &M, targets: &[Osp]) -> Option<AlternatingPath<Osp>> {
    alternating_bfs(
        start,
        true,
        |v, last_matched| !last_matched && targets.contains(v),
        m,
        |v| flippable_osp(v).iter().map(|c| (flip_osp(v, c), c)).collect(),
        |_| true,
    )
}

/// Breadth-first search for an alternating walk.
///
/// The walk starts with a matched edge iff `first_matched`, stays in
/// `allowed`, and stops at the first `v` with `accept(v, last_edge_matched)`.
/// The returned walk is simple.
pub fn alternating_bfs<V, M, N, A, P>(
    start: &V,
    first_matched: bool,
    accept: A,
    m: &M,
    neighbors: N,
    allowed: P,
) -> Option<AlternatingPath<V>>
where
    V: Clone + Eq + Hash,
    M: Partner<V>,
    N: Fn(&V) -> Vec<(V, Color)>,
    A: Fn(&V, bool) -> bool,
    P: Fn(&V) -> bool,
{
    type State<V> = (V, bool);
    let mut prev: HashMap<State<V>, Option<(State<V>, Color)>> = HashMap::new();
    let s0 = (start.clone(), !first_matched);
    prev.insert(s0.clone(), None);
    let mut queue = VecDeque::from([s0]);
    while let Some(state) = queue.pop_front() {
        let (v, last) = state.clone();
        let want_matched = !last;
        let mut next: Vec<(V, Color)> = Vec::new();
        let partner = m.partner(&v);
        if want_matched {
            if let Some(p) = partner {
                next.push(p);
            }
        } else {
            let pv = partner.map(|(p, _)| p);
            next.extend(neighbors(&v).into_iter().filter(|(u, _)| Some(u) != pv.as_ref()));
        }
        for (u, c) in next {
            if !allowed(&u) {
                continue;
            }
            let s = (u.clone(), want_matched);
            if prev.contains_key(&s) {
                continue;
            }
            prev.insert(s.clone(), Some((state.clone(), c)));
            if accept(&u, want_matched) {
                let mut rev = vec![(s.clone(), c)];
                let mut cur = state.clone();
                while let Some(Some((p, c))) = prev.get(&cur) {
                    rev.push((cur.clone(), *c));
                    cur = p.clone();
                }
                let mut path = AlternatingPath::empty(start.clone());
                for ((v, matched), c) in rev.into_iter().rev() {
                    path.push(v, c, matched);
                }
                return Some(path.remove_loops());
            }
            queue.push_back(s);
        }
    }
    None
}

/// Maximum matching on a bipartite graph with left side `0..adj.len()` and
/// right side `0..n_right`.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> (usize, Vec<Option<usize>>, Vec<Option<usize>>) {
    let n_left = adj.len();
    let mut ml: Vec<Option<usize>> = vec![None; n_left];
    let mut mr: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![u32::MAX; n_left];
    let mut size = 0;
    loop {
        let mut q = VecDeque::new();
        for u in 0..n_left {
            if ml[u].is_none() {
                dist[u] = 0;
                q.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                match mr[w] {
                    None => found = true,
                    Some(u2) if dist[u2] == u32::MAX => {
                        dist[u2] = dist[u] + 1;
                        q.push_back(u2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        fn dfs(u: usize, adj: &[Vec<usize>], ml: &mut [Option<usize>], mr: &mut [Option<usize>], dist: &mut [u32]) -> bool {
            for &w in &adj[u] {
                let ok = match mr[w] {
                    None => true,
                    Some(u2) => dist[u2] == dist[u] + 1 && dfs(u2, adj, ml, mr, dist),
                };
                if ok {
                    ml[u] = Some(w);
                    mr[w] = Some(u);
                    return true;
                }
            }
            dist[u] = u32::MAX;
            false
        }
        for u in 0..n_left {
            if ml[u].is_none() && dfs(u, adj, &mut ml, &mut mr, &mut dist) {
                size += 1;
            }
        }
    }
    (size, ml, mr)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConductingType {
    First,
    Second,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConductingCertificate {
    pub graph: SubgraphSpec,
    pub kind: ConductingType,
    pub larger_side: usize,
    pub smaller_side: usize,
    pub edges: usize,
    /// Vertices (first type) or pairs (second type) checked.
    pub queries: u64,
    /// Queries also answered by a fresh maximum matching on the deleted graph.
    pub direct_checks: usize,
    /// Sample of explicit witness matchings verified edge by edge.
    pub witnesses_verified: usize,
    pub failures: Vec<String>,
}

impl ConductingCertificate {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const DEFAULT_VERTEX_GUARD: usize = 10_000;

/// Certify that a subgraph of `Γ_n` is conducting of the expected type.
///
/// A base maximum matching comes from Hopcroft-Karp. Every query is then
/// answered by alternating reachability from it (a matching with the
/// requested criticals exists iff the corresponding alternating path does),
/// and a sample of queries is re-answered by Hopcroft-Karp on the graph with
/// the requested vertices deleted.
pub fn conducting_certificate(n: Color, spec: &SubgraphSpec, expected: ConductingType) -> Result<ConductingCertificate> {
    conducting_certificate_guarded(n, spec, expected, DEFAULT_VERTEX_GUARD, 64)
}

pub fn conducting_certificate_guarded(
    n: Color,
    spec: &SubgraphSpec,
    expected: ConductingType,
    guard: usize,
    direct_samples: usize,
) -> Result<ConductingCertificate> {
    spec.validate(n)?;
    let verts: Vec<Osp> = enumerate_osps(ColorSet::full(n))?
        .into_iter()
        .filter(|o| spec.contains(o))
        .collect();
    if verts.len() > guard {
        return Err(Error::Guard(format!(
            "graph has {} vertices, above the limit of {guard}",
            verts.len()
        )));
    }
    let (pos, neg): (Vec<Osp>, Vec<Osp>) = verts.iter().partition(|o| o.orientation() > 0);
    let (big, small) = if pos.len() >= neg.len() { (pos, neg) } else { (neg, pos) };
    let diff = big.len() - small.len();
    let want = match expected {
        ConductingType::First => 1,
        ConductingType::Second => 0,
    };
    if diff != want {
        return Err(Error::Domain(format!(
            "sides have sizes {} and {}, which does not fit the {expected:?} type",
            big.len(),
            small.len()
        )));
    }
    let sidx: HashMap<Osp, usize> = small.iter().enumerate().map(|(i, o)| (*o, i)).collect();
    let adj: Vec<Vec<usize>> = big
        .iter()
        .map(|o| {
            flippable_osp(o)
                .iter()
                .filter_map(|c| sidx.get(&flip_osp(o, c)).copied())
                .collect()
        })
        .collect();
    let edges = adj.iter().map(Vec::len).sum();
    let mut cert = ConductingCertificate {
        graph: spec.clone(),
        kind: expected,
        larger_side: big.len(),
        smaller_side: small.len(),
        edges,
        queries: 0,
        direct_checks: 0,
        witnesses_verified: 0,
        failures: Vec::new(),
    };
    let (size, ml, mr) = hopcroft_karp(&adj, small.len());
    if size != small.len() {
        cert.failures.push(format!("maximum matching has size {size}, expected {}", small.len()));
        return Ok(cert);
    }
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); small.len()];
    for (a, ws) in adj.iter().enumerate() {
        for &w in ws {
            radj[w].push(a);
        }
    }
    // Alternating reachability on the larger side. First type: from the
    // uncovered vertex, a -non- w -M- mr[w]. Second type: from v,
    // a -M- ml[a] -non- a2.
    let reach = |from: usize| -> (Vec<bool>, Vec<Option<usize>>) {
        let mut seen = vec![false; big.len()];
        let mut par = vec![None; big.len()];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(a) = q.pop_front() {
            let mut visit = |a2: usize| {
                if !seen[a2] {
                    seen[a2] = true;
                    par[a2] = Some(a);
                    q.push_back(a2);
                }
            };
            match expected {
                ConductingType::First => adj[a].iter().filter_map(|&w| mr[w]).for_each(&mut visit),
                ConductingType::Second => {
                    let w = ml[a].expect("perfect");
                    radj[w].iter().copied().filter(|&a2| a2 != a).for_each(&mut visit)
                }
            }
        }
        (seen, par)
    };
    let mut sample_left = direct_samples;
    match expected {
        ConductingType::First => {
            let c = (0..big.len()).find(|&a| ml[a].is_none()).expect("one uncovered vertex");
            let (seen, par) = reach(c);
            let stride = (big.len() / direct_samples.max(1)).max(1);
            for v in 0..big.len() {
                cert.queries += 1;
                if !seen[v] {
                    cert.failures.push(format!("no near-perfect matching with critical {}", big[v]));
                    continue;
                }
                if v % stride != 0 || sample_left == 0 {
                    continue;
                }
                sample_left -= 1;
                let mut m2 = ml.clone();
                m2[v] = None;
                let mut a = v;
                while let Some(p) = par[a] {
                    m2[p] = ml[a];
                    a = p;
                }
                if check_witness(&adj, small.len(), &m2, v, None) {
                    cert.witnesses_verified += 1;
                } else {
                    cert.failures.push(format!("witness for {} is not valid", big[v]));
                }
                let sub: Vec<Vec<usize>> = (0..big.len())
                    .map(|u| if u == v { Vec::new() } else { adj[u].clone() })
                    .collect();
                cert.direct_checks += 1;
                if hopcroft_karp(&sub, small.len()).0 != small.len() {
                    cert.failures.push(format!("direct check disagrees at {}", big[v]));
                }
            }
        }
        ConductingType::Second => {
            let total = big.len() * small.len();
            let stride = (total / direct_samples.max(1)).max(1);
            for v in 0..big.len() {
                let (seen, par) = reach(v);
                for w in 0..small.len() {
                    cert.queries += 1;
                    let a = mr[w].expect("perfect");
                    if !seen[a] {
                        cert.failures.push(format!("no matching with criticals {} and {}", big[v], small[w]));
                        continue;
                    }
                    if (v * small.len() + w) % stride != 0 || sample_left == 0 {
                        continue;
                    }
                    sample_left -= 1;
                    let mut m2 = ml.clone();
                    let mut x = a;
                    while let Some(p) = par[x] {
                        m2[x] = ml[p];
                        x = p;
                    }
                    m2[v] = None;
                    if check_witness(&adj, small.len(), &m2, v, Some(w)) {
                        cert.witnesses_verified += 1;
                    } else {
                        cert.failures.push(format!("witness for {} / {} is not valid", big[v], small[w]));
                    }
                    let sub: Vec<Vec<usize>> = (0..big.len())
                        .map(|u| {
                            if u == v {
                                Vec::new()
                            } else {
                                adj[u].iter().copied().filter(|&x| x != w).collect()
                            }
                        })
                        .collect();
                    cert.direct_checks += 1;
                    if hopcroft_karp(&sub, small.len()).0 + 1 != small.len() {
                        cert.failures.push(format!("direct check disagrees at {} / {}", big[v], small[w]));
                    }
                }
            }
        }
    }
    Ok(cert)
}

/// `m` is a matching along `adj` leaving exactly `v` (and `w`, if given)
/// uncovered.
fn check_witness(adj: &[Vec<usize>], n_right: usize, m: &[Option<usize>], v: usize, w: Option<usize>) -> bool {
    let mut used = vec![false; n_right];
    for (u, p) in m.iter().enumerate() {
        match p {
            None if u != v => return false,
            None => {}
            Some(_) if u == v => return false,
            Some(x) => {
                if !adj[u].contains(x) || used[*x] {
                    return false;
                }
                used[*x] = true;
            }
        }
    }
    (0..n_right).all(|x| used[x] != (Some(x) == w))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StandardCensus {
    pub n: Color,
    pub vertices: usize,
    pub full_critical: Vec<String>,
    pub subsets_checked: usize,
    pub prefix_classes: usize,
    pub full_prefix_classes: usize,
    pub violations: Vec<String>,
}

impl StandardCensus {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of the standard matchings on `Γ_n`, on every `Γ_n(V)`
/// and on every `Γ_n(V, 𝒜)`, with `Σ = [n] \ V` ascending.
pub fn standard_matching_census(n: Color) -> Result<StandardCensus> {
    let all = ColorSet::full(n);
    let verts = enumerate_osps(all)?;
    let mut c = StandardCensus {
        n,
        vertices: verts.len(),
        ..Default::default()
    };
    let sigma: Vec<Color> = all.to_vec();
    let m = StandardMatching::new(&sigma);
    let r = verify_matching(&verts, &m, osp_step);
    c.violations.extend(r.violations);
    c.full_critical = r.critical;
    let hat = Osp::singletons(&sigma).to_string();
    if c.full_critical != [hat.clone()] {
        c.violations.push(format!("Γ_{n}: criticals {:?}, expected [{hat}]", c.full_critical));
    }
    for v in verts.iter() {
        if let Some(u) = standard_match(v, &sigma) {
            if level(&u, &sigma) != level(v, &sigma) {
                c.violations.push(format!("level not preserved at {v}"));
            }
        }
    }
    for vset in all.subsets().filter(|&s| s != all) {
        c.subsets_checked += 1;
        let sigma: Vec<Color> = all.minus(vset).to_vec();
        let m = StandardMatching::new(&sigma);
        // class of each vertex: length of its prefix inside V
        let mut classes: HashMap<Vec<ColorSet>, Vec<Osp>> = HashMap::new();
        for v in &verts {
            let k = v.blocks().iter().take_while(|b| b.is_subset(vset)).count();
            if k < v.len() {
                classes.entry(v.blocks()[..k].to_vec()).or_default().push(*v);
            }
        }
        let sub: Vec<Osp> = classes.get(&Vec::new()).cloned().unwrap_or_default();
        let r = verify_matching(&sub, &m, osp_step);
        if !r.ok() || !r.critical.is_empty() {
            c.violations.push(format!(
                "Γ_{n}({vset}): {} violations, criticals {:?}",
                r.violations.len(),
                r.critical
            ));
        }
        for (prefix, members) in &classes {
            c.prefix_classes += 1;
            let r = verify_matching(members, &m, osp_step);
            let full = prefix.iter().fold(ColorSet::EMPTY, |a, &b| a.union(b)) == vset;
            let expected: Vec<String> = if full {
                c.full_prefix_classes += 1;
                let mut blocks = prefix.clone();
                blocks.extend(sigma.iter().map(|&x| ColorSet::single(x)));
                vec![Osp::from_blocks(&blocks).to_string()]
            } else {
                Vec::new()
            };
            if !r.ok() || r.critical != expected {
                c.violations.push(format!(
                    "Γ_{n}({vset}, {}): {} violations, criticals {:?}, expected {expected:?}",
                    crate::osp::Prefix(prefix.clone()),
                    r.violations.len(),
                    r.critical
                ));
            }
        }
    }
    Ok(c)
}
