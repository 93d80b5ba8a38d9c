//! Simplices of the iterated chromatic subdivision `χ^d(Δ^n)` as linked
//! tuples of partial ordered set partitions.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{domain, Error, Result};
use crate::osp::{enumerate_osps, Color, ColorSet, Osp, PartialOsp};

pub type Levels = SmallVec<[PartialOsp; 3]>;

/// Linked tuple `(σ_1, ..., σ_d)` with `C(σ_i) = carrier(σ_{i+1})`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexIndex {
    levels: Levels,
}

/// A simplex of dimension zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(SimplexIndex);

impl SimplexIndex {
    /// Checks the linking condition at every junction.
    pub fn new(levels: Vec<PartialOsp>) -> Result<SimplexIndex> {
        if levels.is_empty() {
            return domain("a simplex needs at least one level");
        }
        for i in 0..levels.len() - 1 {
            if levels[i].colors() != levels[i + 1].carrier() {
                return Err(Error::NotLinked(i + 1, i + 2));
            }
        }
        Ok(SimplexIndex {
            levels: levels.into_iter().collect(),
        })
    }

    pub(crate) fn from_levels(levels: Levels) -> SimplexIndex {
        SimplexIndex { levels }
    }

    /// Top simplex from full partitions of a common ground set.
    pub fn top(osps: &[Osp]) -> SimplexIndex {
        SimplexIndex {
            levels: osps.iter().map(PartialOsp::from_osp).collect(),
        }
    }

    pub fn levels(&self) -> &[PartialOsp] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn last(&self) -> &PartialOsp {
        self.levels.last().expect("nonempty")
    }

    pub fn dim(&self) -> usize {
        self.last().dim()
    }

    pub fn colors(&self) -> ColorSet {
        self.last().colors()
    }

    /// `supp = carrier(σ_1)`.
    pub fn supp(&self) -> ColorSet {
        self.levels[0].carrier()
    }

    /// Full partitions at every level, if this is a top simplex.
    pub fn as_top(&self) -> Option<SmallVec<[Osp; 3]>> {
        self.levels.iter().map(|l| l.as_osp()).collect()
    }

    /// Face obtained by deleting the colors `s` from the last level and
    /// cascading the removed carrier down through the levels.
    pub fn face(&self, s: ColorSet) -> Result<SimplexIndex> {
        let c = self.colors();
        if !s.is_subset(c) || s == c {
            return domain("face set must be a proper subset of the color set");
        }
        Ok(self.face_unchecked(s))
    }

    pub(crate) fn face_unchecked(&self, s: ColorSet) -> SimplexIndex {
        let mut levels = self.levels.clone();
        let mut cur = s;
        for l in levels.iter_mut().rev() {
            if cur.is_empty() {
                break;
            }
            let next = l.tail_carrier(cur);
            *l = l.dl(cur);
            cur = next;
        }
        SimplexIndex { levels }
    }

    pub fn vertex(&self, x: Color) -> Result<Vertex> {
        let c = self.colors();
        if !c.contains(x) {
            return domain(format!("color {x} not in simplex"));
        }
        Ok(Vertex(self.face_unchecked(c.without(x))))
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let c = self.colors();
        c.iter()
            .map(|x| Vertex(self.face_unchecked(c.without(x))))
            .collect()
    }

    pub fn map(&self, f: &[Color; 16]) -> SimplexIndex {
        SimplexIndex {
            levels: self.levels.iter().map(|l| l.map(f)).collect(),
        }
    }
}

impl fmt::Display for SimplexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str("||")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SimplexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for SimplexIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<SimplexIndex> {
        let levels = s
            .split("||")
            .map(|l| l.parse::<PartialOsp>())
            .collect::<Result<Vec<_>>>()?;
        SimplexIndex::new(levels)
    }
}

impl Vertex {
    pub fn new(simplex: SimplexIndex) -> Result<Vertex> {
        if simplex.dim() != 0 {
            return domain("not a vertex");
        }
        Ok(Vertex(simplex))
    }

    pub fn simplex(&self) -> &SimplexIndex {
        &self.0
    }

    pub fn levels(&self) -> &[PartialOsp] {
        self.0.levels()
    }

    pub fn color(&self) -> Color {
        self.0.colors().min().expect("one color")
    }

    pub fn supp(&self) -> ColorSet {
        self.0.supp()
    }

    /// Internal when the support is all of `[n]`.
    pub fn is_internal(&self, n: Color) -> bool {
        self.supp() == ColorSet::full(n)
    }

    /// The same-colored vertex one subdivision level down.
    pub fn pred(&self) -> Result<Vertex> {
        let d = self.0.depth();
        if d < 2 {
            return domain("predecessor needs depth at least 2");
        }
        let lower = SimplexIndex::from_levels(self.0.levels[..d - 1].iter().copied().collect());
        lower.vertex(self.color())
    }

    /// Relabel through the order-preserving bijection `i -> j`.
    pub fn transport(&self, i: ColorSet, j: ColorSet) -> Result<Vertex> {
        Ok(Vertex(self.0.map(&transport_map(self.supp(), i, j)?)))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Color map of the order-preserving bijection `i -> j`, identity elsewhere.
/// `supp` must lie inside `i`.
pub fn transport_map(supp: ColorSet, i: ColorSet, j: ColorSet) -> Result<[Color; 16]> {
    if i.len() != j.len() {
        return domain("transport between sets of different size");
    }
    if !supp.is_subset(i) {
        return domain("support is not inside the source face");
    }
    let mut f = [0u8; 16];
    for (k, slot) in f.iter_mut().enumerate() {
        *slot = k as Color;
    }
    for (a, b) in i.iter().zip(j.iter()) {
        f[a as usize] = b;
    }
    Ok(f)
}

/// Colors of the boundary vertices of a top simplex `(σ ∥ τ)` of
/// `χ^2(Δ^n)`.
pub fn boundary_colors(top: &SimplexIndex) -> Result<ColorSet> {
    let osps = top
        .as_top()
        .filter(|o| o.len() == 2)
        .ok_or_else(|| Error::Domain("expected a top simplex of depth 2".into()))?;
    Ok(boundary_colors_pair(&osps[0], &osps[1]))
}

pub fn boundary_colors_pair(sigma: &Osp, tau: &Osp) -> ColorSet {
    let ak = sigma.last();
    let mut out = ColorSet::EMPTY;
    for &b in tau.blocks() {
        if !ak.inter(b).is_empty() {
            break;
        }
        out = out.union(b);
    }
    out
}

/// Streams all `d`-tuples of full partitions of `[n]` whose first level has
/// its index (in canonical enumeration order) inside `first`.
pub struct TopStream {
    osps: Vec<Osp>,
    idx: Vec<usize>,
    end_first: usize,
    done: bool,
}

impl Iterator for TopStream {
    type Item = SimplexIndex;

    fn next(&mut self) -> Option<SimplexIndex> {
        if self.done {
            return None;
        }
        let item = SimplexIndex::top(
            &self.idx.iter().map(|&i| self.osps[i]).collect::<Vec<_>>(),
        );
        let m = self.osps.len();
        let mut k = self.idx.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            let limit = if k == 0 { self.end_first } else { m };
            if self.idx[k] < limit {
                break;
            }
            if k == 0 {
                self.done = true;
                break;
            }
            self.idx[k] = 0;
        }
        Some(item)
    }
}

pub fn stream_top(n: Color, d: usize) -> TopStream {
    let total = crate::osp::osp_count(n as usize) as usize;
    stream_top_range(n, d, 0..total)
}

pub fn stream_top_range(n: Color, d: usize, first: Range<usize>) -> TopStream {
    let osps = enumerate_osps(ColorSet::full(n)).expect("nonempty");
    let end_first = first.end.min(osps.len());
    let mut idx = vec![0; d.max(1)];
    idx[0] = first.start;
    TopStream {
        done: first.start >= end_first,
        osps,
        idx,
        end_first,
    }
}
