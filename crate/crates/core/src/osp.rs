//! Ordered and partial ordered set partitions of small color sets.
//!
//! Colors are integers `0..=15`, sets are bitmasks. All types here are
//! `Copy` and fixed size so that hot loops never allocate.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

pub type Color = u8;

/// Largest supported color.
pub const MAX_COLOR: Color = 15;
pub const MAX_BLOCKS: usize = 16;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(pub u16);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// The ground set `[n] = {0, ..., n}`.
    pub fn full(n: Color) -> ColorSet {
        ColorSet(((1u32 << (n as u32 + 1)) - 1) as u16)
    }

    pub fn single(x: Color) -> ColorSet {
        ColorSet(1 << x)
    }

    pub fn from_colors(xs: &[Color]) -> ColorSet {
        xs.iter().fold(ColorSet::EMPTY, |s, &x| s.with(x))
    }

    #[inline]
    pub fn contains(self, x: Color) -> bool {
        self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn with(self, x: Color) -> ColorSet {
        ColorSet(self.0 | 1 << x)
    }

    #[inline]
    pub fn without(self, x: Color) -> ColorSet {
        ColorSet(self.0 & !(1 << x))
    }

    #[inline]
    pub fn union(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 | o.0)
    }

    #[inline]
    pub fn inter(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 & o.0)
    }

    #[inline]
    pub fn minus(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 & !o.0)
    }

    #[inline]
    pub fn is_subset(self, o: ColorSet) -> bool {
        self.0 & !o.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn min(self) -> Option<Color> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as Color)
    }

    pub fn max(self) -> Option<Color> {
        (!self.is_empty()).then(|| 15 - self.0.leading_zeros() as Color)
    }

    /// Single element, if the set is a singleton.
    pub fn as_single(self) -> Option<Color> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as Color)
    }

    /// Ascending iteration.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let x = bits.trailing_zeros() as Color;
            bits &= bits - 1;
            Some(x)
        })
    }

    pub fn to_vec(self) -> Vec<Color> {
        self.iter().collect()
    }

    /// All nonempty subsets, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = ColorSet> {
        let m = self.0;
        let mut s: u16 = 0;
        let mut done = m == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            s = s.wrapping_sub(m) & m;
            if s == 0 {
                done = true;
                return None;
            }
            Some(ColorSet(s))
        })
    }

    /// Relabel through a color map.
    pub fn map(self, f: &[Color; 16]) -> ColorSet {
        self.iter().fold(ColorSet::EMPTY, |s, x| s.with(f[x as usize]))
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for ColorSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<ColorSet> {
        let mut set = ColorSet::EMPTY;
        for part in s.split(',') {
            let x: Color = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad color {part:?}")))?;
            if x > MAX_COLOR {
                return Err(Error::ColorRange(x));
            }
            if set.contains(x) {
                return Err(Error::Overlap(x));
            }
            set = set.with(x);
        }
        Ok(set)
    }
}

/// A node `(A, x)` with `x ∈ A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub carrier: ColorSet,
    pub color: Color,
}

/// Ordered set partition: a sequence of disjoint nonempty blocks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Osp {
    len: u8,
    blocks: [ColorSet; MAX_BLOCKS],
}

fn check_blocks(blocks: &[ColorSet]) -> Result<()> {
    if blocks.len() > MAX_BLOCKS {
        return Err(Error::TooManyBlocks);
    }
    let mut seen = ColorSet::EMPTY;
    for &b in blocks {
        if b.is_empty() {
            return Err(Error::EmptyBlock);
        }
        if let Some(x) = b.inter(seen).min() {
            return Err(Error::Overlap(x));
        }
        seen = seen.union(b);
    }
    Ok(())
}

impl Osp {
    /// Validating constructor (the canonical form is the only form).
    pub fn new(blocks: &[ColorSet]) -> Result<Osp> {
        check_blocks(blocks)?;
        Ok(Osp::from_blocks(blocks))
    }

    pub(crate) fn from_blocks(blocks: &[ColorSet]) -> Osp {
        let mut a = [ColorSet::EMPTY; MAX_BLOCKS];
        a[..blocks.len()].copy_from_slice(blocks);
        Osp {
            len: blocks.len() as u8,
            blocks: a,
        }
    }

    /// `([n])`, the central simplex.
    pub fn whole(n: Color) -> Osp {
        Osp::from_blocks(&[ColorSet::full(n)])
    }

    /// `(x_0 | ... | x_k)`, the partition associated to an order.
    pub fn singletons(order: &[Color]) -> Osp {
        let b: Vec<ColorSet> = order.iter().map(|&x| ColorSet::single(x)).collect();
        Osp::from_blocks(&b)
    }

    #[inline]
    pub fn blocks(&self) -> &[ColorSet] {
        &self.blocks[..self.len as usize]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ground(&self) -> ColorSet {
        self.blocks().iter().fold(ColorSet::EMPTY, |s, &b| s.union(b))
    }

    #[inline]
    pub fn last(&self) -> ColorSet {
        self.blocks[self.len as usize - 1]
    }

    pub fn block_index(&self, x: Color) -> Option<usize> {
        self.blocks().iter().position(|b| b.contains(x))
    }

    /// `+1` for an even number of blocks, `-1` for odd.
    pub fn orientation(&self) -> i8 {
        if self.len.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The last block in ascending order.
    pub fn st(&self) -> Vec<Color> {
        self.last().to_vec()
    }

    /// Split `x` off its block, placing `{x}` directly in front.
    pub(crate) fn split_off(&self, x: Color) -> Osp {
        let k = self.block_index(x).expect("color present");
        debug_assert!(self.blocks[k].len() >= 2);
        let mut out = Vec::with_capacity(self.len() + 1);
        out.extend_from_slice(&self.blocks()[..k]);
        out.push(ColorSet::single(x));
        out.push(self.blocks[k].without(x));
        out.extend_from_slice(&self.blocks()[k + 1..]);
        Osp::from_blocks(&out)
    }

    /// Merge block `k` into block `k + 1`.
    pub(crate) fn merge_next(&self, k: usize) -> Osp {
        debug_assert!(k + 1 < self.len());
        let mut out = Vec::with_capacity(self.len());
        out.extend_from_slice(&self.blocks()[..k]);
        out.push(self.blocks[k].union(self.blocks[k + 1]));
        out.extend_from_slice(&self.blocks()[k + 2..]);
        Osp::from_blocks(&out)
    }

    /// Relabel every color through `f`.
    pub fn map(&self, f: &[Color; 16]) -> Osp {
        let b: Vec<ColorSet> = self.blocks().iter().map(|s| s.map(f)).collect();
        Osp::from_blocks(&b)
    }
}

impl fmt::Display for Osp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Osp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Osp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Osp> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty partition".into()));
        }
        let blocks = s
            .split('|')
            .map(|b| b.parse::<ColorSet>())
            .collect::<Result<Vec<_>>>()?;
        Osp::new(&blocks)
    }
}

impl serde::Serialize for Osp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Level of `osp` with respect to the order `sigma = (x_0, ..., x_k)`.
///
/// `None` when `osp` ends with the singleton tail `x_0 | ... | x_k`.
pub fn level(osp: &Osp, sigma: &[Color]) -> Option<Color> {
    let t = osp.len();
    for (m, &x) in sigma.iter().enumerate().rev() {
        let back = sigma.len() - 1 - m;
        if back >= t || osp.blocks[t - 1 - back] != ColorSet::single(x) {
            return Some(x);
        }
    }
    None
}

/// Colors whose node carrier misses at most one element of the ground set.
pub fn almost_maximal(osp: &Osp) -> ColorSet {
    let total = osp.ground().len();
    let mut acc = ColorSet::EMPTY;
    let mut out = ColorSet::EMPTY;
    for &b in osp.blocks() {
        acc = acc.union(b);
        if acc.len() + 1 >= total {
            out = out.union(b);
        }
    }
    out
}

/// All ordered set partitions of `ground`, ordered by block count and then
/// by canonical text.
pub fn enumerate_osps(ground: ColorSet) -> Result<Vec<Osp>> {
    if ground.is_empty() {
        return domain("empty ground set");
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(rest: ColorSet, stack: &mut Vec<ColorSet>, out: &mut Vec<Osp>) {
        if rest.is_empty() {
            out.push(Osp::from_blocks(stack));
            return;
        }
        for b in rest.subsets() {
            stack.push(b);
            rec(rest.minus(b), stack, out);
            stack.pop();
        }
    }
    rec(ground, &mut stack, &mut out);
    let mut keyed: Vec<(usize, String, Osp)> =
        out.into_iter().map(|o| (o.len(), o.to_string(), o)).collect();
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, _, o)| o).collect())
}

/// Number of ordered set partitions of `[n]` from the binomial recursion
/// `f_n = sum_{j=1}^{n+1} C(n+1, j) f_{n-j}`, `f_{-1} = 1`.
pub fn osp_count(n: usize) -> u64 {
    // g[m] counts partitions of an m-element set
    let mut g = vec![1u64];
    for m in 1..=n + 1 {
        let mut binom = 1u64;
        let mut sum = 0u64;
        for j in 1..=m {
            binom = binom * (m - j + 1) as u64 / j as u64;
            sum += binom * g[m - j];
        }
        g.push(sum);
    }
    g[n + 1]
}

/// Partial ordered set partition: aligned rows `(A_i)` and `(B_i ⊆ A_i)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialOsp {
    len: u8,
    upper: [ColorSet; MAX_BLOCKS],
    lower: [ColorSet; MAX_BLOCKS],
}

impl PartialOsp {
    pub fn new(upper: &[ColorSet], lower: &[ColorSet]) -> Result<PartialOsp> {
        if upper.len() != lower.len() || upper.is_empty() {
            return Err(Error::RowLength);
        }
        check_blocks(upper)?;
        for (i, (a, b)) in upper.iter().zip(lower).enumerate() {
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            if !b.is_subset(*a) {
                return Err(Error::NotContained(i));
            }
        }
        Ok(PartialOsp::from_rows(upper, lower))
    }

    pub(crate) fn from_rows(upper: &[ColorSet], lower: &[ColorSet]) -> PartialOsp {
        let mut u = [ColorSet::EMPTY; MAX_BLOCKS];
        let mut l = [ColorSet::EMPTY; MAX_BLOCKS];
        u[..upper.len()].copy_from_slice(upper);
        l[..lower.len()].copy_from_slice(lower);
        PartialOsp {
            len: upper.len() as u8,
            upper: u,
            lower: l,
        }
    }

    pub fn from_osp(osp: &Osp) -> PartialOsp {
        PartialOsp::from_rows(osp.blocks(), osp.blocks())
    }

    /// The single-column partial partition of a node.
    pub fn node(carrier: ColorSet, x: Color) -> PartialOsp {
        PartialOsp::from_rows(&[carrier], &[ColorSet::single(x)])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn upper(&self) -> &[ColorSet] {
        &self.upper[..self.len as usize]
    }

    #[inline]
    pub fn lower(&self) -> &[ColorSet] {
        &self.lower[..self.len as usize]
    }

    pub fn carrier(&self) -> ColorSet {
        self.upper().iter().fold(ColorSet::EMPTY, |s, &b| s.union(b))
    }

    pub fn colors(&self) -> ColorSet {
        self.lower().iter().fold(ColorSet::EMPTY, |s, &b| s.union(b))
    }

    pub fn dim(&self) -> usize {
        self.colors().len() - 1
    }

    /// The full partition, if both rows agree.
    pub fn as_osp(&self) -> Option<Osp> {
        (self.upper() == self.lower()).then(|| Osp::from_blocks(self.upper()))
    }

    pub fn nodes(&self) -> Vec<Node> {
        let mut acc = ColorSet::EMPTY;
        let mut out = Vec::with_capacity(self.colors().len());
        for i in 0..self.len() {
            acc = acc.union(self.upper[i]);
            for x in self.lower[i].iter() {
                out.push(Node { carrier: acc, color: x });
            }
        }
        out.sort();
        out
    }

    /// Deletion of a single color.
    pub fn delete_color(&self, x: Color) -> Result<PartialOsp> {
        if !self.colors().contains(x) {
            return domain(format!("color {x} not in the color set"));
        }
        if self.dim() == 0 {
            return domain("cannot delete from a vertex");
        }
        let k = self
            .lower()
            .iter()
            .position(|b| b.contains(x))
            .expect("color present");
        let t = self.len();
        if self.lower[k].len() >= 2 {
            let mut out = *self;
            out.lower[k] = out.lower[k].without(x);
            return Ok(out);
        }
        let mut up: Vec<ColorSet> = Vec::with_capacity(t);
        let mut lo: Vec<ColorSet> = Vec::with_capacity(t);
        for i in 0..t {
            if i == k {
                continue;
            }
            if i == k + 1 {
                up.push(self.upper[k].union(self.upper[i]));
            } else {
                up.push(self.upper[i]);
            }
            lo.push(self.lower[i]);
        }
        Ok(PartialOsp::from_rows(&up, &lo))
    }

    /// Deletion of a nonempty proper subset of the color set.
    pub fn delete_set(&self, s: ColorSet) -> Result<PartialOsp> {
        if s.is_empty() {
            return domain("empty deletion set");
        }
        if !s.is_subset(self.colors()) || s == self.colors() {
            return domain("deletion set must be a proper subset of the color set");
        }
        Ok(self.dl(s))
    }

    /// Unchecked deletion; `s` may be empty (identity).
    pub(crate) fn dl(&self, s: ColorSet) -> PartialOsp {
        let mut out = PartialOsp {
            len: 0,
            upper: [ColorSet::EMPTY; MAX_BLOCKS],
            lower: [ColorSet::EMPTY; MAX_BLOCKS],
        };
        let mut acc = ColorSet::EMPTY;
        for i in 0..self.len() {
            acc = acc.union(self.upper[i]);
            let rest = self.lower[i].minus(s);
            if !rest.is_empty() {
                let m = out.len as usize;
                out.upper[m] = acc;
                out.lower[m] = rest;
                out.len += 1;
                acc = ColorSet::EMPTY;
            }
        }
        out
    }

    /// `D(σ, S)`: union of the upper tail `A_i ∪ ... ∪ A_t` for the minimal
    /// `i` whose lower tail lies in `S`; empty when no such `i` exists.
    pub fn tail_carrier(&self, s: ColorSet) -> ColorSet {
        let mut d = ColorSet::EMPTY;
        for i in (0..self.len()).rev() {
            if !self.lower[i].is_subset(s) {
                break;
            }
            d = d.union(self.upper[i]);
        }
        d
    }

    pub fn map(&self, f: &[Color; 16]) -> PartialOsp {
        let up: Vec<ColorSet> = self.upper().iter().map(|s| s.map(f)).collect();
        let lo: Vec<ColorSet> = self.lower().iter().map(|s| s.map(f)).collect();
        PartialOsp::from_rows(&up, &lo)
    }
}

impl fmt::Display for PartialOsp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let up = Osp::from_blocks(self.upper());
        let lo = Osp::from_blocks(self.lower());
        write!(f, "{up}/{lo}")
    }
}

impl fmt::Debug for PartialOsp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for PartialOsp {
    type Err = Error;

    fn from_str(s: &str) -> Result<PartialOsp> {
        let (u, l) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("missing '/' in {s:?}")))?;
        let parse_row = |r: &str| -> Result<Vec<ColorSet>> {
            r.trim().split('|').map(|b| b.parse::<ColorSet>()).collect()
        };
        PartialOsp::new(&parse_row(u)?, &parse_row(l)?)
    }
}

/// All partial ordered set partitions whose carrier lies in `[n]`.
pub fn enumerate_partial_osps(n: Color) -> Vec<PartialOsp> {
    let mut out = Vec::new();
    for carrier in ColorSet::full(n).subsets() {
        for osp in enumerate_osps(carrier).expect("nonempty") {
            let mut lower = Vec::with_capacity(osp.len());
            choose_lower(osp.blocks(), &mut lower, &mut out);
        }
    }
    out
}

fn choose_lower(upper: &[ColorSet], lower: &mut Vec<ColorSet>, out: &mut Vec<PartialOsp>) {
    if lower.len() == upper.len() {
        out.push(PartialOsp::from_rows(upper, lower));
        return;
    }
    for b in upper[lower.len()].subsets() {
        lower.push(b);
        choose_lower(upper, lower, out);
        lower.pop();
    }
}

/// Exhaustive `dl(dl(σ, A), B) = dl(σ, A ∪ B)` over partial partitions of
/// `[n]`; returns the number of instances and the failures.
pub fn deletion_composition_check(n: Color) -> (u64, Vec<String>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in enumerate_partial_osps(n) {
        let c = s.colors();
        for a in c.subsets() {
            for b in c.minus(a).subsets() {
                if a.union(b) == c {
                    continue;
                }
                checked += 1;
                let lhs = s.delete_set(a).and_then(|t| t.delete_set(b));
                if lhs != s.delete_set(a.union(b)) && bad.len() < 16 {
                    bad.push(format!("{s}: deleting {a:?} then {b:?}"));
                }
            }
        }
    }
    (checked, bad)
}

/// A sequence of disjoint nonempty blocks inside a set `V`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prefix(pub Vec<ColorSet>);

impl Prefix {
    pub fn empty() -> Prefix {
        Prefix(Vec::new())
    }

    pub fn union(&self) -> ColorSet {
        self.0.iter().fold(ColorSet::EMPTY, |s, &b| s.union(b))
    }

    pub fn is_prefix_in(&self, v: ColorSet) -> bool {
        check_blocks(&self.0).is_ok() && self.0.iter().all(|b| b.is_subset(v))
    }

    pub fn is_full(&self, v: ColorSet) -> bool {
        self.union() == v
    }

    /// Does `osp` start with exactly these blocks?
    pub fn starts(&self, osp: &Osp) -> bool {
        osp.len() >= self.0.len() && osp.blocks()[..self.0.len()] == self.0[..]
    }

    pub fn map(&self, f: &[Color; 16]) -> Prefix {
        Prefix(self.0.iter().map(|s| s.map(f)).collect())
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        write!(f, "({})", Osp::from_blocks(&self.0))
    }
}
