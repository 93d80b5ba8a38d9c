//! Weak symmetry breaking for six processes: the initial labeling of
//! `χ^2(Δ^5)`, the 1-monochromatic census, the modified matchings and the
//! labeling of `χ^3(Δ^5)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};
use crate::flip::{flip_osp, flippable_osp, in_prefix_part};
use crate::matching::{alternating_bfs, AlternatingPath, PathClass, Partner};
use crate::osp::{enumerate_osps, enumerate_partial_osps, level, Color, ColorSet, Osp, PartialOsp};
use crate::subdivision::{SimplexIndex, Vertex};

pub const N: Color = 5;

fn full() -> ColorSet {
    ColorSet::full(N)
}

/// A top simplex `(σ ∥ τ)` of `χ^2(Δ^5)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Top2 {
    pub sigma: Osp,
    pub tau: Osp,
}

impl Top2 {
    pub fn new(sigma: Osp, tau: Osp) -> Result<Top2> {
        if sigma.ground() != full() || tau.ground() != full() {
            return domain("both levels must be full partitions of [5]");
        }
        Ok(Top2 { sigma, tau })
    }

    pub fn simplex(&self) -> SimplexIndex {
        SimplexIndex::top(&[self.sigma, self.tau])
    }

    pub fn orientation(&self) -> i8 {
        self.sigma.orientation() * self.tau.orientation()
    }

    /// Neighbor across the facet of color `x` in `Γ_5^2`.
    pub fn flip(&self, x: Color) -> Option<Top2> {
        if flippable_osp(&self.tau).contains(x) {
            Some(Top2 {
                sigma: self.sigma,
                tau: flip_osp(&self.tau, x),
            })
        } else if flippable_osp(&self.sigma).contains(x) {
            Some(Top2 {
                sigma: flip_osp(&self.sigma, x),
                tau: self.tau,
            })
        } else {
            None
        }
    }
}

impl fmt::Display for Top2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}||{}", self.sigma, self.tau)
    }
}

impl fmt::Debug for Top2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Top2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Top2> {
        let (a, b) = s
            .split_once("||")
            .ok_or_else(|| Error::Parse(format!("expected sigma||tau, got {s:?}")))?;
        Top2::new(a.parse()?, b.parse()?)
    }
}

impl Serialize for Top2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// ---------------------------------------------------------------------------
// Initial labeling

/// Boundary vertices of `χ^2(Δ^5)` labeled 1.
///
/// With a single level-1 block `U/L` (`U` sorted as `a < b < c`) and
/// color `x`, the patterns are
/// `a/a: a`, `ab/a: a`, `ab/ab: b`, `abc/a: a`, `abc/ab: a, b`,
/// `abc/abc: b, c`.
pub fn is_exceptional_vertex(v: &Vertex) -> bool {
    let l = v.levels();
    if l.len() != 2 || l[0].len() != 1 {
        return false;
    }
    let u = l[0].upper()[0];
    let low = l[0].lower()[0];
    let x = v.color();
    let s = u.to_vec();
    let set = |xs: &[Color]| ColorSet::from_colors(xs);
    match s.len() {
        1 => low == u && x == s[0],
        2 => {
            let (a, b) = (s[0], s[1]);
            (low == set(&[a]) && x == a) || (low == u && x == b)
        }
        3 => {
            let (a, b, c) = (s[0], s[1], s[2]);
            (low == set(&[a]) && x == a)
                || (low == set(&[a, b]) && (x == a || x == b))
                || (low == u && (x == b || x == c))
        }
        _ => false,
    }
}

/// Every exceptional vertex over `[5]`.
pub fn exceptional_vertices() -> Vec<Vertex> {
    let mut out = Vec::new();
    for u in full().subsets().filter(|u| u.len() <= 3) {
        for low in u.subsets() {
            let p1 = PartialOsp::from_rows(&[u], &[low]);
            for x in low.iter() {
                let v = Vertex::new(SimplexIndex::from_levels(
                    [p1, PartialOsp::node(low, x)].into_iter().collect(),
                ))
                .expect("vertex");
                if is_exceptional_vertex(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// `I`: 1 on internal and exceptional vertices of `χ^2(Δ^5)`, else 0.
pub fn initial_label(v: &Vertex) -> u8 {
    (v.is_internal(N) || is_exceptional_vertex(v)) as u8
}

/// Direct test: all six vertices of `(σ ∥ τ)` carry `I = 1`.
pub fn is_mono_oracle(t: &Top2) -> bool {
    t.simplex().vertices().iter().all(|v| initial_label(v) == 1)
}

// ---------------------------------------------------------------------------
// The 1-monochromatic census

/// Types of `σ` (leading blocks over letters `a < b < c`) and their prefixes.
const TYPES: [(&str, &[&str]); 17] = [
    ("a", &["a"]),
    ("ab", &["a", "a|b"]),
    ("abc", &["a", "a|b", "ab", "ab|c", "a|bc", "a|b|c"]),
    ("a|b", &["a"]),
    ("b|a", &["a", "b"]),
    ("ab|c", &["a", "a|b"]),
    ("ac|b", &["a", "a|c"]),
    ("bc|a", &["a", "b", "b|c"]),
    ("a|bc", &["a"]),
    ("b|ac", &["a", "b"]),
    ("c|ab", &["a", "c", "ab", "a|b"]),
    ("a|b|c", &["a"]),
    ("a|c|b", &["a"]),
    ("b|a|c", &["a", "b"]),
    ("b|c|a", &["a", "b"]),
    ("c|a|b", &["a", "c"]),
    ("c|b|a", &["a", "b", "c"]),
];

fn letters(block: &str, assign: &[Color; 3]) -> ColorSet {
    block
        .bytes()
        .fold(ColorSet::EMPTY, |s, l| s.with(assign[(l - b'a') as usize]))
}

fn match_type(sigma: &Osp, pattern: &str) -> Option<[Color; 3]> {
    let pat: Vec<&str> = pattern.split('|').collect();
    if sigma.len() <= pat.len() {
        return None;
    }
    let lead = &sigma.blocks()[..pat.len()];
    let xs = lead.iter().fold(ColorSet::EMPTY, |s, &b| s.union(b)).to_vec();
    if xs.len() != pattern.bytes().filter(u8::is_ascii_lowercase).count() {
        return None;
    }
    let mut assign = [0; 3];
    assign[..xs.len()].copy_from_slice(&xs);
    lead.iter()
        .zip(&pat)
        .all(|(&b, p)| b == letters(p, &assign))
        .then_some(assign)
}

/// Prefix family of `Λ` for `σ`: union over every row whose type `σ` has.
pub fn prefix_family(sigma: &Osp) -> Vec<Vec<ColorSet>> {
    let mut out: Vec<Vec<ColorSet>> = Vec::new();
    for (pattern, prefixes) in TYPES {
        if let Some(assign) = match_type(sigma, pattern) {
            for p in prefixes {
                let a: Vec<ColorSet> = p.split('|').map(|b| letters(b, &assign)).collect();
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct SigmaInfo {
    v: ColorSet,
    prefixes: Vec<Vec<ColorSet>>,
}

impl SigmaInfo {
    fn new(sigma: &Osp) -> SigmaInfo {
        SigmaInfo {
            v: full().minus(sigma.last()),
            prefixes: prefix_family(sigma),
        }
    }

    #[inline]
    fn contains(&self, tau: &Osp) -> bool {
        self.v.is_empty()
            || !tau.blocks()[0].is_subset(self.v)
            || self.prefixes.iter().any(|a| in_prefix_part(tau, self.v, a))
    }
}

/// Is `(σ ∥ τ)` 1-monochromatic: `τ ∈ Γ_5(V) ∪ Λ` with `V = [5] \ S_p`.
pub fn mono_membership(sigma: &Osp, tau: &Osp) -> bool {
    match gamma5().index(sigma) {
        Some(i) => gamma5().info[i].contains(tau),
        None => false,
    }
}

/// `Γ_5` with its flip table and per-`σ` census data.
pub struct Gamma5 {
    pub osps: Vec<Osp>,
    index: HashMap<Osp, usize>,
    info: Vec<SigmaInfo>,
}

impl Gamma5 {
    fn build() -> Gamma5 {
        let osps = enumerate_osps(full()).expect("nonempty");
        let index = osps.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        let info = osps.iter().map(SigmaInfo::new).collect();
        Gamma5 { osps, index, info }
    }

    pub fn index(&self, o: &Osp) -> Option<usize> {
        self.index.get(o).copied()
    }

    pub fn len(&self) -> usize {
        self.osps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.osps.is_empty()
    }
}

pub fn gamma5() -> &'static Gamma5 {
    static G: OnceLock<Gamma5> = OnceLock::new();
    G.get_or_init(Gamma5::build)
}

// ---------------------------------------------------------------------------
// Exceptional simplices and the matchings on each 𝒩(σ)

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WClass {
    Central,
    W1,
    W2,
    W3,
}

pub fn w_class(sigma: &Osp) -> Option<WClass> {
    match (sigma.len(), sigma.blocks()[0].len()) {
        (1, _) => Some(WClass::Central),
        (2, 1) => Some(WClass::W1),
        (2, 2) => Some(WClass::W2),
        (2, 3) => Some(WClass::W3),
        _ => None,
    }
}

/// All 42 elements of `𝒲`.
pub fn w_set() -> Vec<Osp> {
    gamma5()
        .osps
        .iter()
        .filter(|o| w_class(o).is_some())
        .copied()
        .collect()
}

/// The simplex of `𝒩(σ)` left unmatched by `M̃_σ`, for `σ ∈ 𝒲`.
pub fn critical(sigma: &Osp) -> Option<Osp> {
    let class = w_class(sigma)?;
    let head = sigma.blocks()[0].to_vec();
    let rest = full().minus(sigma.blocks()[0]).to_vec();
    Some(match class {
        WClass::Central => Osp::singletons(&head),
        WClass::W1 | WClass::W2 => {
            let order: Vec<Color> = head.iter().chain(&rest).copied().collect();
            Osp::singletons(&order)
        }
        WClass::W3 => {
            let mut b = vec![ColorSet::from_colors(&head[..2]), ColorSet::single(head[2])];
            b.extend(rest.iter().map(|&x| ColorSet::single(x)));
            Osp::from_blocks(&b)
        }
    })
}

/// `R(σ)`: orientation of the critical simplex of `𝒩(σ)`.
pub fn r_sign(sigma: &Osp) -> Option<i8> {
    critical(sigma).map(|c| sigma.orientation() * c.orientation())
}

/// The two simplices `(a|b|c|d|e|f)` and `(a|bc|d|e|f)` joined by the extra
/// edge (color `b`) when `σ = (abc|def)`.
fn w3_extra(sigma: &Osp, tau: &Osp) -> Option<(Osp, Color)> {
    if w_class(sigma) != Some(WClass::W3) {
        return None;
    }
    let abc = sigma.blocks()[0].to_vec();
    let def = sigma.blocks()[1].to_vec();
    let t2 = Osp::singletons(&[abc[0], abc[1], abc[2], def[0], def[1], def[2]]);
    let mut b = vec![ColorSet::single(abc[0]), ColorSet::from_colors(&abc[1..])];
    b.extend(def.iter().map(|&x| ColorSet::single(x)));
    let t3 = Osp::from_blocks(&b);
    if *tau == t2 {
        Some((t3, abc[1]))
    } else if *tau == t3 {
        Some((t2, abc[1]))
    } else {
        None
    }
}

fn tilde_raw(t: &Top2) -> Option<(Top2, Color)> {
    let (tau, x) = match w3_extra(&t.sigma, &t.tau) {
        Some(p) => p,
        None => {
            let x = level(&t.tau, &t.sigma.st())?;
            (flip_osp(&t.tau, x), x)
        }
    };
    Some((Top2 { sigma: t.sigma, tau }, x))
}

/// `M̃`: partner of a 1-monochromatic simplex, `None` when critical.
pub fn tilde_match(t: &Top2) -> Result<Option<(Top2, Color)>> {
    if !mono_membership(&t.sigma, &t.tau) {
        return domain(format!("{t} is not 1-monochromatic"));
    }
    Ok(tilde_raw(t))
}

/// `M̃` without the membership check.
pub fn tilde_match_unchecked(t: &Top2) -> Option<(Top2, Color)> {
    tilde_raw(t)
}

/// `M̃` as a partial matching on `Γ_5^2`.
pub struct TildeMatching;

impl Partner<Top2> for TildeMatching {
    fn partner(&self, v: &Top2) -> Option<(Top2, Color)> {
        tilde_raw(v)
    }
}

// ---------------------------------------------------------------------------
// The 21 paths in Γ_5 and their lifts

/// Rows of leading blocks; the complement in `[5]` is the last block.
pub const PATH_TABLE: [&str; 21] = [
    "012 0|12 0|1|2 0|1 01",
    "013 0|13 0|3|1 0|3 03",
    "014 0|14 0|4|1 0|4 04",
    "015 0|15 0|5|1 0|5 05",
    "023 0|23 0|2|3 0|2 02",
    "024 4|02 4|2|0 4|2 24",
    "025 2|05 2|5|0 2|5 25",
    "034 3|04 3|4|0 3|4 34",
    "035 3|05 3|5|0 3|5 35",
    "045 4|05 4|5|0 4|5 45",
    "123 1|23 1|2|3 1|2 12",
    "124 1|24 1|4|2 1|4 14",
    "125 1|25 1|5|2 1|5 15",
    "134 3|14 3|1|4 3|1 13",
    "234 2|34 2|3|4 2|3 23",
    "135 1|35 1|3|5 1|3 1",
    "145 4|15 4|1|5 4|1 4",
    "235 3|25 3|2|5 3|2 3",
    "245 2|45 2|4|5 2|4 2",
    "345 5|34 5|3|4 5|3 5",
    "0 012345",
];

fn parse_entry(s: &str) -> Result<Osp> {
    let mut blocks = Vec::new();
    for b in s.split('|') {
        let mut set = ColorSet::EMPTY;
        for ch in b.chars() {
            let x = ch
                .to_digit(10)
                .filter(|&d| d <= N as u32)
                .ok_or_else(|| Error::Parse(format!("bad path entry {s:?}")))?;
            set = set.with(x as Color);
        }
        blocks.push(set);
    }
    let rest = full().minus(blocks.iter().fold(ColorSet::EMPTY, |s, &b| s.union(b)));
    if !rest.is_empty() {
        blocks.push(rest);
    }
    Osp::new(&blocks)
}

pub fn path_table() -> Result<Vec<Vec<Osp>>> {
    PATH_TABLE
        .iter()
        .map(|row| row.split_whitespace().map(parse_entry).collect())
        .collect()
}

fn flip_color(a: &Osp, b: &Osp) -> Option<Color> {
    flippable_osp(a).iter().find(|&x| flip_osp(a, x) == *b)
}

/// Candidates `(C_1 | ... | C_r | x)` with `y ∈ C_1`, in canonical text order.
fn bridge_candidates(x: Color, y: Color) -> Vec<Osp> {
    let mut out: Vec<Osp> = enumerate_osps(full().without(x))
        .expect("nonempty")
        .into_iter()
        .filter(|o| o.blocks()[0].contains(y))
        .map(|o| {
            let mut b = o.blocks().to_vec();
            b.push(ColorSet::single(x));
            Osp::from_blocks(&b)
        })
        .collect();
    out.sort_by_cached_key(|o| o.to_string());
    out
}

fn level2_neighbors(v: &Top2) -> Vec<(Top2, Color)> {
    flippable_osp(&v.tau)
        .iter()
        .map(|x| {
            (
                Top2 {
                    sigma: v.sigma,
                    tau: flip_osp(&v.tau, x),
                },
                x,
            )
        })
        .collect()
}

/// Lift a path of `Γ_5` between two exceptional simplices of opposite
/// `R` to an `M̃`-augmenting path of `Γ_5^2` joining their criticals.
pub fn lift_path(q: &[Osp]) -> Result<AlternatingPath<Top2>> {
    let t = q.len();
    if t < 2 {
        return domain("a path needs two vertices");
    }
    let (first, last) = (q[0], q[t - 1]);
    let (r1, rt) = match (r_sign(&first), r_sign(&last)) {
        (Some(a), Some(b)) => (a, b),
        _ => return domain(format!("endpoints of {first} .. {last} must be exceptional")),
    };
    if r1 != -rt {
        return domain(format!("endpoints {first} and {last} have equal R"));
    }
    for g in &q[1..t - 1] {
        if w_class(g).is_some() {
            return domain(format!("interior vertex {g} is exceptional"));
        }
    }
    let mono = |v: &Top2| mono_membership(&v.sigma, &v.tau);

    let mut bridges: Vec<(Top2, Top2, Color)> = Vec::with_capacity(t - 1);
    for w in q.windows(2) {
        let (a, b) = (w[0], w[1]);
        let x = flip_color(&a, &b).ok_or_else(|| Error::Domain(format!("{a} and {b} are not adjacent")))?;
        let y = a
            .last()
            .inter(b.last())
            .min()
            .ok_or_else(|| Error::Domain(format!("last blocks of {a} and {b} are disjoint")))?;
        let rho = bridge_candidates(x, y)
            .into_iter()
            .find(|rho| {
                a.orientation() * rho.orientation() == r1
                    && mono(&Top2 { sigma: a, tau: *rho })
                    && mono(&Top2 { sigma: b, tau: *rho })
            })
            .ok_or_else(|| Error::Domain(format!("no bridge between {a} and {b}")))?;
        bridges.push((Top2 { sigma: a, tau: rho }, Top2 { sigma: b, tau: rho }, x));
    }

    let mut path = AlternatingPath::empty(Top2 {
        sigma: first,
        tau: critical(&first).expect("exceptional"),
    });
    for i in 0..t {
        let start = *path.end();
        let end = if i + 1 == t {
            Top2 {
                sigma: last,
                tau: critical(&last).expect("exceptional"),
            }
        } else {
            bridges[i].0
        };
        let first_matched = i != 0;
        let last_matched = i + 1 != t;
        if start != end {
            let gamma = q[i];
            let seg = alternating_bfs(
                &start,
                first_matched,
                |v, lm| *v == end && lm == last_matched,
                &TildeMatching,
                level2_neighbors,
                |v| v.sigma == gamma && mono(v),
            )
            .ok_or_else(|| Error::Domain(format!("no alternating segment from {start} to {end} in N({gamma})")))?;
            for k in 0..seg.len() {
                path.push(seg.vertices[k + 1], seg.colors[k], seg.matched[k]);
            }
        } else if i != 0 && i + 1 != t {
            return domain(format!("degenerate segment at {start}"));
        }
        if i + 1 < t {
            let (_, psi, x) = bridges[i];
            path.push(psi, x, false);
        }
    }
    if !path.is_simple() {
        return Err(Error::Verification(format!("lifted path from {first} is not simple")));
    }
    match path.classify(&TildeMatching, |v, c| v.flip(c)) {
        PathClass::Augmenting => {}
        other => {
            return Err(Error::Verification(format!(
                "lifted path from {first} classified {other:?}"
            )))
        }
    }
    if let Some(v) = path.vertices.iter().find(|v| !mono(v)) {
        return Err(Error::Verification(format!("{v} on lifted path is not 1-monochromatic")));
    }
    Ok(path)
}

// ---------------------------------------------------------------------------
// ExSimp and the final matching

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExSimpRecord {
    pub sigma: Osp,
    pub xi: Osp,
    pub c: Color,
}

#[derive(Clone, Debug)]
pub struct ExSimp {
    pub records: Vec<ExSimpRecord>,
    pub paths: Vec<AlternatingPath<Top2>>,
    map: HashMap<Top2, Color>,
}

impl ExSimp {
    pub fn get(&self, t: &Top2) -> Option<Color> {
        self.map.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&serde_json::to_string(r).expect("serializable"));
            s.push('\n');
        }
        s
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.to_jsonl().as_bytes()))
    }
}

/// Lift all 21 paths and record the toggled edge color at every simplex.
pub fn build_exsimp() -> Result<ExSimp> {
    let mut map: HashMap<Top2, Color> = HashMap::new();
    let mut paths = Vec::new();
    for q in path_table()? {
        let p = lift_path(&q)?;
        for (k, v) in p.vertices.iter().enumerate() {
            let c = p.colors[k - k % 2];
            if map.insert(*v, c).is_some() {
                return Err(Error::Verification(format!("lifted paths overlap at {v}")));
            }
        }
        paths.push(p);
    }
    let mut records: Vec<(String, String, ExSimpRecord)> = map
        .iter()
        .map(|(t, &c)| {
            (
                t.sigma.to_string(),
                t.tau.to_string(),
                ExSimpRecord {
                    sigma: t.sigma,
                    xi: t.tau,
                    c,
                },
            )
        })
        .collect();
    records.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(ExSimp {
        records: records.into_iter().map(|r| r.2).collect(),
        paths,
        map,
    })
}

/// The frozen table; building it is deterministic and checked by tests.
pub fn exsimp() -> &'static ExSimp {
    static T: OnceLock<ExSimp> = OnceLock::new();
    T.get_or_init(|| build_exsimp().expect("the path table lifts"))
}

/// `ℳ`: flip at the ExSimp color when listed, otherwise `M̃`.
pub fn final_match(t: &Top2) -> Option<(Top2, Color)> {
    match exsimp().get(t) {
        Some(c) => t.flip(c).map(|u| (u, c)),
        None => tilde_raw(t),
    }
}

pub struct FinalMatching;

impl Partner<Top2> for FinalMatching {
    fn partner(&self, v: &Top2) -> Option<(Top2, Color)> {
        final_match(v)
    }
}

// ---------------------------------------------------------------------------
// The labeling of χ^3(Δ^5)

/// Top simplices of `χ^2(Δ^5)` containing a 4-simplex `τ = (σ_1 ∥ σ_2)`.
pub fn containing_tops(tau: &SimplexIndex) -> Result<Vec<Top2>> {
    if tau.depth() != 2 || tau.dim() != 4 || !tau.supp().is_subset(full()) {
        return domain("expected a 4-simplex of chi^2(Delta^5)");
    }
    let missing = full().minus(tau.colors());
    let q = match missing.as_single() {
        Some(q) => q,
        None => return domain("expected colors [5] minus one"),
    };
    let (s1, s2) = (tau.levels()[0], tau.levels()[1]);
    let insert = |p: &PartialOsp| -> Osp {
        let b: Vec<ColorSet> = p
            .upper()
            .iter()
            .zip(p.lower())
            .map(|(&u, &l)| if u.contains(q) { l.with(q) } else { l })
            .collect();
        Osp::from_blocks(&b)
    };
    let append = |p: &PartialOsp| -> Osp {
        let mut b = p.lower().to_vec();
        b.push(ColorSet::single(q));
        Osp::from_blocks(&b)
    };
    let mut cands: Vec<Top2> = Vec::new();
    if s2.carrier().contains(q) {
        if let Some(rho1) = s1.as_osp().filter(|o| o.ground() == full()) {
            let rho2 = insert(&s2);
            cands.push(Top2 { sigma: rho1, tau: rho2 });
            cands.push(Top2 {
                sigma: rho1,
                tau: flip_osp(&rho2, q),
            });
        }
    } else {
        let rho2 = append(&s2);
        if s1.carrier().contains(q) {
            let rho1 = insert(&s1);
            cands.push(Top2 { sigma: rho1, tau: rho2 });
            cands.push(Top2 {
                sigma: flip_osp(&rho1, q),
                tau: rho2,
            });
        } else {
            cands.push(Top2 {
                sigma: append(&s1),
                tau: rho2,
            });
        }
    }
    cands.retain(|t| t.simplex().face_unchecked(ColorSet::single(q)) == *tau);
    Ok(cands)
}

/// `L` on a vertex `(σ_1 ∥ σ_2 ∥ σ_3)` of `χ^3(Δ^5)`.
pub fn label_l(w: &Vertex) -> Result<u8> {
    if w.levels().len() != 3 || !w.supp().is_subset(full()) {
        return domain("expected a vertex of chi^3(Delta^5)");
    }
    let tau = SimplexIndex::from_levels(w.levels()[..2].iter().copied().collect());
    let default = initial_label(&w.pred()?);
    match tau.dim() {
        0..=3 => Ok(default),
        4 => {
            let tops = containing_tops(&tau)?;
            let matched = tops.len() == 2
                && tops.iter().all(|t| mono_membership(&t.sigma, &t.tau))
                && final_match(&tops[0]).map(|p| p.0) == Some(tops[1]);
            Ok(if matched { 0 } else { default })
        }
        _ => {
            let top = tau.as_top().expect("dimension 5 at depth 2 is a top");
            let t = Top2 {
                sigma: top[0],
                tau: top[1],
            };
            if !mono_membership(&t.sigma, &t.tau) {
                return Ok(default);
            }
            let (_, c) = final_match(&t).ok_or_else(|| Error::Verification(format!("{t} unmatched")))?;
            Ok((c == w.color()) as u8)
        }
    }
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOptions {
    /// Random top simplices of `χ^3(Δ^5)` for the direct check.
    pub samples: u64,
    pub seed: u64,
    /// Compare the census with the per-vertex oracle on every pair.
    pub oracle: bool,
    /// Random 1-monochromatic simplices for the proof replay.
    pub replay: u64,
    /// Range of level-1 indices scanned by the census; `None` for all.
    pub shards: Option<std::ops::Range<usize>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 1_000_000,
            seed: 0,
            oracle: true,
            replay: 200,
            shards: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Wsb6Report {
    /// False when the census covered only part of the level-1 range.
    pub complete: bool,
    pub shard_start: usize,
    pub shard_end: usize,
    pub exsimp_records: usize,
    pub exsimp_sha256: String,
    pub pairs: u64,
    pub mono: u64,
    pub oracle_checked: bool,
    pub oracle_mismatches: u64,
    /// Top simplices of `χ^2(Δ^5)` labeled 0 everywhere by `I`.
    pub zero_tops: u64,
    pub tilde_criticals: u64,
    pub tilde_critical_mismatches: u64,
    pub tilde_violations: u64,
    pub final_criticals: u64,
    pub final_violations: u64,
    pub facet_rule_violations: u64,
    /// 1-monochromatic simplices replayed against every third level.
    pub replay_simplices: u64,
    pub replay_failures: u64,
    pub compliance_vertices: u64,
    pub compliance_failures: u64,
    pub boundary_facets: u64,
    pub boundary_facet_failures: u64,
    pub samples: u64,
    pub sample_seed: u64,
    pub monochromatic_samples: u64,
    pub boundary_transports: u64,
    pub boundary_transport_failures: u64,
    pub witnesses: Vec<String>,
}

impl Wsb6Report {
    pub fn ok(&self) -> bool {
        let crit_ok = if self.complete {
            self.tilde_criticals == 42 && self.mono.is_multiple_of(2)
        } else {
            true
        };
        crit_ok
            && self.oracle_mismatches == 0
            && self.tilde_critical_mismatches == 0
            && self.tilde_violations == 0
            && self.final_criticals == 0
            && self.final_violations == 0
            && self.facet_rule_violations == 0
            && self.zero_tops == 0
            && self.replay_failures == 0
            && self.compliance_failures == 0
            && self.boundary_facet_failures == 0
            && self.monochromatic_samples == 0
            && self.boundary_transport_failures == 0
    }
}

#[derive(Default)]
struct Tally {
    mono: u64,
    zero_tops: u64,
    oracle_mismatches: u64,
    tilde_criticals: u64,
    tilde_critical_mismatches: u64,
    tilde_violations: u64,
    final_criticals: u64,
    final_violations: u64,
    facet_rule_violations: u64,
    witnesses: Vec<String>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.mono += o.mono;
        self.zero_tops += o.zero_tops;
        self.oracle_mismatches += o.oracle_mismatches;
        self.tilde_criticals += o.tilde_criticals;
        self.tilde_critical_mismatches += o.tilde_critical_mismatches;
        self.tilde_violations += o.tilde_violations;
        self.final_criticals += o.final_criticals;
        self.final_violations += o.final_violations;
        self.facet_rule_violations += o.facet_rule_violations;
        self.witnesses.extend(o.witnesses);
        self.witnesses.truncate(16);
        self
    }

    fn witness(&mut self, s: String) {
        if self.witnesses.len() < 16 {
            self.witnesses.push(s);
        }
    }
}

fn scan_sigma(si: usize, oracle: bool) -> Tally {
    let g = gamma5();
    let sigma = g.osps[si];
    let info = &g.info[si];
    let crit = critical(&sigma);
    let mut t = Tally::default();
    for tau in &g.osps {
        let top = Top2 { sigma, tau: *tau };
        let mono = info.contains(tau);
        if oracle {
            let labels: Vec<u8> = top.simplex().vertices().iter().map(initial_label).collect();
            if mono != labels.iter().all(|&l| l == 1) {
                t.oracle_mismatches += 1;
                t.witness(format!("census disagrees with oracle at {top}"));
            }
            if labels.iter().all(|&l| l == 0) {
                t.zero_tops += 1;
                t.witness(format!("{top} has no vertex labeled 1"));
            }
        }
        if !mono {
            continue;
        }
        t.mono += 1;
        match tilde_raw(&top) {
            None => {
                t.tilde_criticals += 1;
                if crit != Some(*tau) {
                    t.tilde_critical_mismatches += 1;
                    t.witness(format!("unexpected critical {top}"));
                }
            }
            Some((p, c)) => {
                let back = tilde_raw(&p).map(|b| b.0);
                if p.sigma != sigma || !info.contains(&p.tau) || back != Some(top) || top.flip(c) != Some(p) {
                    t.tilde_violations += 1;
                    t.witness(format!("tilde matching breaks at {top}"));
                }
            }
        }
        match final_match(&top) {
            None => {
                t.final_criticals += 1;
                t.witness(format!("final matching leaves {top} critical"));
            }
            Some((p, c)) => {
                let back = final_match(&p);
                if !mono_membership(&p.sigma, &p.tau)
                    || back.map(|b| b.0) != Some(top)
                    || back.map(|b| b.1) != Some(c)
                    || top.flip(c) != Some(p)
                {
                    t.final_violations += 1;
                    t.witness(format!("final matching breaks at {top}"));
                    continue;
                }
                // the shared facet is where the 3rd-level rule puts its 0
                let face = top.simplex().face_unchecked(ColorSet::single(c));
                let tops = containing_tops(&face).unwrap_or_default();
                if tops.len() != 2 || !tops.contains(&top) || !tops.contains(&p) {
                    t.facet_rule_violations += 1;
                    t.witness(format!("facet of {top} at color {c} is not shared with its partner"));
                }
            }
        }
    }
    t
}

/// Exhaustive compliance of `I` on the boundary of `χ^2(Δ^5)`.
pub fn initial_label_compliance() -> (u64, u64, Vec<String>) {
    let mut checked = 0;
    let mut failures = 0;
    let mut witnesses = Vec::new();
    for p1 in enumerate_partial_osps(N) {
        let i = p1.carrier();
        if i == full() {
            continue;
        }
        for x in p1.colors().iter() {
            let v = Vertex::new(SimplexIndex::from_levels(
                [p1, PartialOsp::node(p1.colors(), x)].into_iter().collect(),
            ))
            .expect("vertex");
            let lv = initial_label(&v);
            for j in full().subsets().filter(|j| j.len() == i.len()) {
                checked += 1;
                let u = v.transport(i, j).expect("equicardinal");
                if initial_label(&u) != lv {
                    failures += 1;
                    if witnesses.len() < 16 {
                        witnesses.push(format!("I({v}) differs from I({u})"));
                    }
                }
            }
        }
    }
    (checked, failures, witnesses)
}

/// Every 4-simplex of `χ^2(Δ^5)` on a boundary face lies in exactly one top
/// simplex, so `L` takes its default value on the boundary of `χ^3(Δ^5)`.
pub fn boundary_facets_single() -> Result<(u64, u64, Vec<String>)> {
    let mut checked = 0;
    let mut fails = 0;
    let mut wit = Vec::new();
    for q in full().iter() {
        let face = enumerate_osps(full().without(q))?;
        let per: Vec<(u64, Vec<String>)> = face
            .par_iter()
            .map(|a| {
                let mut f = 0;
                let mut w = Vec::new();
                for b in &face {
                    let tau = SimplexIndex::top(&[*a, *b]);
                    let n = containing_tops(&tau).map(|t| t.len()).unwrap_or(0);
                    if n != 1 {
                        f += 1;
                        if w.len() < 4 {
                            w.push(format!("boundary 4-simplex {tau} lies in {n} tops"));
                        }
                    }
                }
                (f, w)
            })
            .collect();
        for (f, w) in per {
            checked += face.len() as u64;
            fails += f;
            wit.extend(w);
        }
    }
    wit.truncate(16);
    Ok((checked, fails, wit))
}

fn random_subset_of_size(rng: &mut ChaCha8Rng, k: usize) -> ColorSet {
    let mut all: Vec<Color> = full().to_vec();
    for i in 0..k {
        let j = rng.gen_range(i..all.len());
        all.swap(i, j);
    }
    ColorSet::from_colors(&all[..k])
}

struct SampleTally {
    mono: u64,
    transports: u64,
    transport_failures: u64,
    witnesses: Vec<String>,
}

fn sample_chi3(samples: u64, seed: u64) -> Result<SampleTally> {
    let g = gamma5();
    let n = g.len();
    let chunks: u64 = 64;
    let per = samples.div_ceil(chunks);
    let parts: Vec<Result<SampleTally>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut t = SampleTally {
                mono: 0,
                transports: 0,
                transport_failures: 0,
                witnesses: Vec::new(),
            };
            let count = per.min(samples.saturating_sub(k * per));
            for _ in 0..count {
                let o = [
                    g.osps[rng.gen_range(0..n)],
                    g.osps[rng.gen_range(0..n)],
                    g.osps[rng.gen_range(0..n)],
                ];
                let s = SimplexIndex::top(&o);
                let vs = s.vertices();
                let labels = vs.iter().map(label_l).collect::<Result<Vec<u8>>>()?;
                if labels.iter().all(|&l| l == labels[0]) {
                    t.mono += 1;
                    if t.witnesses.len() < 16 {
                        t.witnesses.push(format!("monochromatic {s}"));
                    }
                }
                for v in vs.iter().filter(|v| !v.is_internal(N)) {
                    let i = v.supp();
                    let j = random_subset_of_size(&mut rng, i.len());
                    let u = v.transport(i, j)?;
                    t.transports += 1;
                    if label_l(&u)? != label_l(v)? {
                        t.transport_failures += 1;
                        if t.witnesses.len() < 16 {
                            t.witnesses.push(format!("L({v}) differs from L({u})"));
                        }
                    }
                }
            }
            Ok(t)
        })
        .collect();
    let mut out = SampleTally {
        mono: 0,
        transports: 0,
        transport_failures: 0,
        witnesses: Vec::new(),
    };
    for p in parts {
        let p = p?;
        out.mono += p.mono;
        out.transports += p.transports;
        out.transport_failures += p.transport_failures;
        out.witnesses.extend(p.witnesses);
    }
    out.witnesses.truncate(16);
    Ok(out)
}

/// For 1-monochromatic `τ` matched across `c` and every third level `σ_3`:
/// the vertex colored `c` gets 1, and an almost maximal `d ≠ c` gets 0
/// (from the last block of `σ_3`, or the block before when that is `{c}`).
pub fn proof_replay(count: u64, seed: u64) -> Result<(u64, u64, Vec<String>)> {
    let g = gamma5();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut picked = Vec::new();
    while (picked.len() as u64) < count {
        let t = Top2 {
            sigma: g.osps[rng.gen_range(0..g.len())],
            tau: g.osps[rng.gen_range(0..g.len())],
        };
        if mono_membership(&t.sigma, &t.tau) {
            picked.push(t);
        }
    }
    let parts: Vec<Result<(u64, Vec<String>)>> = picked
        .par_iter()
        .map(|t| {
            let (_, c) = final_match(t).ok_or_else(|| Error::Verification(format!("{t} unmatched")))?;
            let mut fails = 0;
            let mut wit = Vec::new();
            for s3 in &g.osps {
                let amax = crate::osp::almost_maximal(s3).without(c);
                let last = s3.last();
                let d = if last != ColorSet::single(c) {
                    last.without(c).min()
                } else {
                    s3.blocks()[s3.len() - 2].min()
                };
                let top = SimplexIndex::top(&[t.sigma, t.tau, *s3]);
                let ok = match d {
                    Some(d) => {
                        amax.contains(d) && label_l(&top.vertex(c)?)? == 1 && label_l(&top.vertex(d)?)? == 0
                    }
                    None => false,
                };
                if !ok {
                    fails += 1;
                    if wit.len() < 4 {
                        wit.push(format!("proof replay fails at {top}"));
                    }
                }
            }
            Ok((fails, wit))
        })
        .collect();
    let mut fails = 0;
    let mut wit = Vec::new();
    for p in parts {
        let (f, w) = p?;
        fails += f;
        wit.extend(w);
    }
    wit.truncate(16);
    Ok((count * g.len() as u64, fails, wit))
}

/// The whole pipeline: census, matchings, compliance and sampling.
pub fn verify_theorem(opts: &VerifyOptions) -> Result<Wsb6Report> {
    let table = build_exsimp()?;
    let g = gamma5();
    let range = opts.shards.clone().unwrap_or(0..g.len());
    if range.start > range.end || range.end > g.len() {
        return domain(format!("shard range must lie in 0..{}", g.len()));
    }
    let complete = range == (0..g.len());
    let tally = range
        .clone()
        .into_par_iter()
        .map(|si| scan_sigma(si, opts.oracle))
        .reduce(Tally::default, Tally::merge);
    let (compliance_vertices, compliance_failures, cw) = initial_label_compliance();
    let samples = sample_chi3(opts.samples, opts.seed)?;
    let replay = proof_replay(opts.replay, opts.seed)?;
    let (boundary_facets, boundary_facet_failures, bw) = boundary_facets_single()?;
    let mut witnesses = tally.witnesses;
    witnesses.extend(replay.2);
    witnesses.extend(bw);
    witnesses.extend(cw);
    witnesses.extend(samples.witnesses);
    witnesses.truncate(16);
    Ok(Wsb6Report {
        complete,
        shard_start: range.start,
        shard_end: range.end,
        exsimp_records: table.len(),
        exsimp_sha256: table.sha256(),
        pairs: (range.len() * g.len()) as u64,
        mono: tally.mono,
        oracle_checked: opts.oracle,
        oracle_mismatches: tally.oracle_mismatches,
        zero_tops: tally.zero_tops,
        tilde_criticals: tally.tilde_criticals,
        tilde_critical_mismatches: tally.tilde_critical_mismatches,
        tilde_violations: tally.tilde_violations,
        final_criticals: tally.final_criticals,
        final_violations: tally.final_violations,
        facet_rule_violations: tally.facet_rule_violations,
        replay_simplices: replay.0,
        replay_failures: replay.1,
        compliance_vertices,
        compliance_failures,
        boundary_facets,
        boundary_facet_failures,
        samples: opts.samples,
        sample_seed: opts.seed,
        monochromatic_samples: samples.mono,
        boundary_transports: samples.transports,
        boundary_transport_failures: samples.transport_failures,
        witnesses,
    })
}

/// Pairs `(σ, τ)` of the census restricted to one `σ`, for diagnostics.
pub fn census_of(sigma: &Osp) -> Vec<Osp> {
    let g = gamma5();
    match g.index(sigma) {
        Some(i) => g.osps.iter().filter(|t| g.info[i].contains(t)).copied().collect(),
        None => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Osp {
        s.parse().unwrap()
    }

    fn cs(xs: &[Color]) -> ColorSet {
        ColorSet::from_colors(xs)
    }

    fn v2(s: &str) -> Vertex {
        Vertex::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn exceptional_patterns() {
        assert!(is_exceptional_vertex(&v2("3/3||3/3")));
        assert!(is_exceptional_vertex(&v2("1,4/1,4||1,4/4")));
        assert!(!is_exceptional_vertex(&v2("1,4/1,4||1,4/1")));
        assert!(is_exceptional_vertex(&v2("1,4/1||1/1")));
        assert!(!is_exceptional_vertex(&v2("1,4/4||4/4")));
        let all = exceptional_vertices();
        assert_eq!(all.len(), 136);
        assert!(all.iter().all(|v| v.supp().len() <= 3 && !v.is_internal(N)));
        // independent count: one pattern per size-1 support, two per pair,
        // five per triple
        assert_eq!(all.len(), 6 + 2 * 15 + 5 * 20);
    }

    #[test]
    fn initial_label_examples() {
        assert_eq!(initial_label(&v2("0,1,2,3,4,5/0||0/0")), 1);
        assert_eq!(initial_label(&v2("2/2||2/2")), 1);
        assert_eq!(initial_label(&v2("2,3,4,5/2||2/2")), 0);
        assert_eq!(initial_label(&v2("0|1/0|1||0,1/1")), 0);
    }

    #[test]
    fn membership_examples() {
        let g = gamma5();
        assert_eq!(g.len(), 4683);
        for tau in g.osps.iter().step_by(7) {
            assert!(mono_membership(&Osp::whole(N), tau));
            assert!(mono_membership(&o("0|1,2,3,4,5"), tau));
        }
        let mut fam = prefix_family(&o("3|1|0,2,4,5"));
        fam.sort();
        assert_eq!(fam, vec![vec![cs(&[1])], vec![cs(&[3])]]);
        assert!(prefix_family(&o("0,1,2,3|4,5")).is_empty());
    }

    #[test]
    fn membership_matches_oracle_on_a_stride() {
        let g = gamma5();
        let mut mono = 0;
        for (i, s) in g.osps.iter().enumerate() {
            for t in g.osps.iter().skip(i % 13).step_by(13) {
                let top = Top2 { sigma: *s, tau: *t };
                let m = mono_membership(s, t);
                assert_eq!(m, is_mono_oracle(&top), "{top}");
                mono += m as u32;
            }
        }
        assert!(mono > 0);
    }

    #[test]
    fn exceptional_set_and_signs() {
        let w = w_set();
        assert_eq!(w.len(), 42);
        for s in &w {
            let expected = match w_class(s).unwrap() {
                WClass::W1 | WClass::W2 => 1,
                WClass::W3 | WClass::Central => -1,
            };
            assert_eq!(r_sign(s), Some(expected), "{s}");
        }
        assert_eq!(critical(&Osp::whole(N)), Some(Osp::singletons(&[0, 1, 2, 3, 4, 5])));
        assert_eq!(critical(&o("0,1,2|3,4,5")), Some(o("0,1|2|3|4|5")));
        assert_eq!(critical(&o("2,4|0,1,3,5")), Some(o("2|4|0|1|3|5")));
        assert_eq!(critical(&o("0|1|2,3,4,5")), None);
    }

    #[test]
    fn tilde_criticals_in_w() {
        for s in w_set() {
            let crits: Vec<Osp> = census_of(&s)
                .into_iter()
                .filter(|t| tilde_raw(&Top2 { sigma: s, tau: *t }).is_none())
                .collect();
            assert_eq!(crits, vec![critical(&s).unwrap()], "{s}");
        }
        let w3 = o("0,1,2|3,4,5");
        let t2 = Top2 { sigma: w3, tau: o("0|1|2|3|4|5") };
        assert_eq!(tilde_match(&t2).unwrap(), Some((Top2 { sigma: w3, tau: o("0|1,2|3|4|5") }, 1)));
        assert!(tilde_match(&Top2 { sigma: o("0|1|2|3|4|5"), tau: o("0|1|2|3|4|5") }).is_err());
    }

    #[test]
    fn path_table_shape() {
        let rows = path_table().unwrap();
        assert_eq!(rows.len(), 21);
        let mut ends = HashMap::new();
        for q in &rows {
            for w in q.windows(2) {
                assert!(flip_color(&w[0], &w[1]).is_some(), "{} {}", w[0], w[1]);
            }
            let (a, b) = (q[0], *q.last().unwrap());
            assert_eq!(r_sign(&a).unwrap(), -r_sign(&b).unwrap());
            assert!(q[1..q.len() - 1].iter().all(|g| w_class(g).is_none()));
            for g in q {
                assert!(ends.insert(*g, ()).is_none(), "{g} on two rows");
            }
        }
        let w = w_set();
        assert!(w.iter().all(|s| ends.contains_key(s)));
        assert_eq!(rows[20], vec![o("0|1,2,3,4,5"), Osp::whole(N)]);
    }

    #[test]
    fn bridge_candidate_count() {
        // partitions of five colors with a given color in the first block
        let five = enumerate_osps(cs(&[0, 1, 2, 3, 4])).unwrap();
        let by_hand = five.iter().filter(|o| o.blocks()[0].contains(0)).count();
        assert_eq!(bridge_candidates(5, 0).len(), by_hand);
        // first block of size k holding the color: C(4, k-1) times the
        // ordered Bell number of the remaining 5 - k colors
        let fubini = [1, 1, 3, 13, 75];
        let binom4 = [1, 4, 6, 4, 1];
        let formula: usize = (1..=5).map(|k| binom4[k - 1] * fubini[5 - k]).sum();
        assert_eq!(by_hand, formula);
        assert_eq!(formula, 150);
        let c = bridge_candidates(5, 0);
        assert_eq!(c.iter().filter(|o| o.orientation() == 1).count(), c.len() / 2);
    }

    #[test]
    fn lifted_short_path() {
        let p = lift_path(&[o("0|1,2,3,4,5"), Osp::whole(N)]).unwrap();
        let crit = o("0|1|2|3|4|5");
        assert_eq!(*p.start(), Top2 { sigma: o("0|1,2,3,4,5"), tau: crit });
        assert_eq!(*p.end(), Top2 { sigma: Osp::whole(N), tau: crit });
        assert_eq!(p.len() % 2, 1);
        for w in p.vertices.windows(2) {
            assert_eq!(w[0].orientation(), -w[1].orientation());
        }
    }

    #[test]
    fn lift_rejects_bad_paths() {
        assert!(lift_path(&[o("0|1,2,3,4,5"), o("0,1|2,3,4,5")]).is_err());
        assert!(lift_path(&[o("0|1|2,3,4,5"), Osp::whole(N)]).is_err());
        assert!(lift_path(&[o("0|1,2,3,4,5")]).is_err());
    }

    #[test]
    fn exsimp_table() {
        let t = build_exsimp().unwrap();
        assert_eq!(t.paths.len(), 21);
        assert_eq!(t.len(), t.paths.iter().map(|p| p.vertices.len()).sum::<usize>());
        for p in &t.paths {
            assert_eq!(p.vertices.len() % 2, 0);
            assert_eq!(p.classify(&TildeMatching, |v, c| v.flip(c)), PathClass::Augmenting);
        }
        for s in w_set() {
            let c = Top2 { sigma: s, tau: critical(&s).unwrap() };
            assert!(t.get(&c).is_some(), "{c}");
            assert!(final_match(&c).is_some());
        }
        let text = t.to_jsonl();
        assert_eq!(text.lines().count(), t.len());
        let keys: Vec<(String, String)> = t
            .records
            .iter()
            .map(|r| (r.sigma.to_string(), r.xi.to_string()))
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(build_exsimp().unwrap().sha256(), t.sha256());
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert!(first["sigma"].is_string() && first["xi"].is_string() && first["c"].is_u64());
    }

    #[test]
    fn final_matching_off_paths_is_tilde() {
        let t = Top2 { sigma: o("0|1|2,3,4,5"), tau: o("2,3|0,1,4,5") };
        assert!(mono_membership(&t.sigma, &t.tau));
        assert!(exsimp().get(&t).is_none());
        assert_eq!(final_match(&t), tilde_raw(&t));
    }

    fn brute_containing(face: &SimplexIndex) -> Vec<Top2> {
        let q = full().minus(face.colors()).min().unwrap();
        let l1 = face.levels()[0];
        let gone = full().minus(l1.colors());
        let g = gamma5();
        let mut out = Vec::new();
        // the level-1 deletion set of any containing top is [5] minus C(l1)
        for s in g.osps.iter().filter(|s| PartialOsp::from_osp(s).dl(gone) == l1) {
            for t in &g.osps {
                let top = Top2 { sigma: *s, tau: *t };
                if top.simplex().face_unchecked(ColorSet::single(q)) == *face {
                    out.push(top);
                }
            }
        }
        out
    }

    #[test]
    fn containing_tops_against_brute_force() {
        let g = gamma5();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = [0usize; 3];
        for _ in 0..40 {
            let top = Top2 {
                sigma: g.osps[rng.gen_range(0..g.len())],
                tau: g.osps[rng.gen_range(0..g.len())],
            };
            for q in full().iter() {
                let face = top.simplex().face_unchecked(ColorSet::single(q));
                let mut a = containing_tops(&face).unwrap();
                let mut b = brute_containing(&face);
                a.sort();
                b.sort();
                assert_eq!(a, b, "{face}");
                seen[a.len()] += 1;
            }
        }
        assert!(seen[1] > 0 && seen[2] > 0 && seen[0] == 0);
    }

    #[test]
    fn label_l_examples() {
        let w: Vertex = Vertex::new("3/3||3/3||3/3".parse().unwrap()).unwrap();
        assert_eq!(label_l(&w).unwrap(), 1);
        let t = Top2 { sigma: o("0|1|2,3,4,5"), tau: o("2,3|0,1,4,5") };
        let (_, c) = final_match(&t).unwrap();
        // third level whose last block holds every color: each vertex sees τ
        let s = SimplexIndex::top(&[t.sigma, t.tau, Osp::whole(N)]);
        for v in s.vertices() {
            assert_eq!(label_l(&v).unwrap(), (v.color() == c) as u8);
        }
        // third level ending in {c}: the almost maximal d sit in the block before
        let rest = full().without(c);
        let s = SimplexIndex::top(&[t.sigma, t.tau, Osp::new(&[rest, ColorSet::single(c)]).unwrap()]);
        for v in s.vertices() {
            assert_eq!(label_l(&v).unwrap(), (v.color() == c) as u8, "{v}");
        }
    }

    #[test]
    fn initial_label_is_compliant() {
        let (checked, failures, _) = initial_label_compliance();
        assert!(checked > 0);
        assert_eq!(failures, 0);
    }

    #[test]
    fn small_sample_has_no_monochromatic_simplex() {
        let s = sample_chi3(2000, 3).unwrap();
        assert_eq!(s.mono, 0, "{:?}", s.witnesses);
        assert_eq!(s.transport_failures, 0, "{:?}", s.witnesses);
        assert!(s.transports > 0);
    }
}
