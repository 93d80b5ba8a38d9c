//! The flip graphs `Γ_n^d` on top simplices and their restricted subgraphs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::osp::{Color, ColorSet, Osp, Prefix};
use crate::subdivision::{stream_top, SimplexIndex};

/// Colors that can be flipped in a single full partition.
#[inline]
pub fn flippable_osp(osp: &Osp) -> ColorSet {
    let last = osp.last();
    if last.len() == 1 {
        osp.ground().minus(last)
    } else {
        osp.ground()
    }
}

/// Flip of a full partition; `x` must be flippable.
///
/// A non-singleton block containing `x` is split as `x | A_k \ x`; a
/// singleton `{x}` is merged into the next block.
#[inline]
pub fn flip_osp(osp: &Osp, x: Color) -> Osp {
    let k = osp.block_index(x).expect("color present");
    if osp.blocks()[k].len() >= 2 {
        osp.split_off(x)
    } else {
        osp.merge_next(k)
    }
}

pub fn flippable(s: &SimplexIndex) -> ColorSet {
    s.levels()
        .iter()
        .map(|l| flippable_osp(&l.as_osp().expect("top simplex")))
        .fold(ColorSet::EMPTY, ColorSet::union)
}

/// Flip at the highest level where `x` is flippable.
pub fn flip(s: &SimplexIndex, x: Color) -> Result<SimplexIndex> {
    let tops = s
        .as_top()
        .ok_or_else(|| Error::Domain("flip needs a top simplex".into()))?;
    for k in (0..tops.len()).rev() {
        if flippable_osp(&tops[k]).contains(x) {
            let mut out = tops.clone();
            out[k] = flip_osp(&tops[k], x);
            return Ok(SimplexIndex::top(&out));
        }
    }
    domain(format!("color {x} is not flippable"))
}

/// Orientation of a top simplex: product of the level orientations.
pub fn orientation(s: &SimplexIndex) -> i8 {
    s.levels()
        .iter()
        .map(|l| if l.len() % 2 == 0 { 1 } else { -1 })
        .product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipEdge {
    pub from: SimplexIndex,
    pub to: SimplexIndex,
    pub color: Color,
}

pub fn neighbors(s: &SimplexIndex) -> Vec<FlipEdge> {
    flippable(s)
        .iter()
        .map(|x| FlipEdge {
            from: s.clone(),
            to: flip(s, x).expect("flippable"),
            color: x,
        })
        .collect()
}

/// Which top simplices of `Γ_n` a graph contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgraphSpec {
    Full,
    /// First block not inside `V`.
    RestrictedV(ColorSet),
    /// Starts with the prefix, and the next block is not inside `V`.
    RestrictedPrefix(ColorSet, Prefix),
    /// Union over a prefix family.
    RestrictedFamily(ColorSet, Vec<Prefix>),
}

impl SubgraphSpec {
    pub fn validate(&self, n: Color) -> Result<()> {
        let check_v = |v: &ColorSet| -> Result<()> {
            if v.is_empty() || !v.is_subset(ColorSet::full(n)) || *v == ColorSet::full(n) {
                return domain("V must be a nonempty proper subset of [n]");
            }
            Ok(())
        };
        match self {
            SubgraphSpec::Full => Ok(()),
            SubgraphSpec::RestrictedV(v) => check_v(v),
            SubgraphSpec::RestrictedPrefix(v, a) => {
                check_v(v)?;
                if !a.is_prefix_in(*v) {
                    return domain(format!("{a} is not a prefix in {v}"));
                }
                Ok(())
            }
            SubgraphSpec::RestrictedFamily(v, fam) => {
                check_v(v)?;
                for a in fam {
                    if !a.is_prefix_in(*v) {
                        return domain(format!("{a} is not a prefix in {v}"));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn contains(&self, osp: &Osp) -> bool {
        match self {
            SubgraphSpec::Full => true,
            SubgraphSpec::RestrictedV(v) => in_prefix_part(osp, *v, &[]),
            SubgraphSpec::RestrictedPrefix(v, a) => in_prefix_part(osp, *v, &a.0),
            SubgraphSpec::RestrictedFamily(v, fam) => {
                fam.iter().any(|a| in_prefix_part(osp, *v, &a.0))
            }
        }
    }

    /// All top simplices of `Γ_n` in this graph.
    pub fn members(&self, n: Color) -> Vec<Osp> {
        crate::osp::enumerate_osps(ColorSet::full(n))
            .expect("nonempty")
            .into_iter()
            .filter(|o| self.contains(o))
            .collect()
    }
}

#[inline]
pub(crate) fn in_prefix_part(osp: &Osp, v: ColorSet, prefix: &[ColorSet]) -> bool {
    let k = prefix.len();
    osp.len() > k && osp.blocks()[..k] == *prefix && !osp.blocks()[k].is_subset(v)
}

pub fn in_subgraph(osp: &Osp, spec: &SubgraphSpec) -> Result<bool> {
    let n = osp.ground().max().unwrap_or(0);
    spec.validate(n)?;
    Ok(spec.contains(osp))
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    v: Option<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prefixes: Option<Vec<Vec<String>>>,
}

impl Serialize for SubgraphSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pre = |a: &Prefix| a.0.iter().map(|b| b.to_string()).collect::<Vec<_>>();
        let j = match self {
            SubgraphSpec::Full => SpecJson { v: None, prefixes: None },
            SubgraphSpec::RestrictedV(v) => SpecJson {
                v: Some(v.to_vec()),
                prefixes: None,
            },
            SubgraphSpec::RestrictedPrefix(v, a) => SpecJson {
                v: Some(v.to_vec()),
                prefixes: Some(vec![pre(a)]),
            },
            SubgraphSpec::RestrictedFamily(v, fam) => SpecJson {
                v: Some(v.to_vec()),
                prefixes: Some(fam.iter().map(pre).collect()),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubgraphSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SpecJson::deserialize(d)?;
        let Some(v) = j.v else {
            return Ok(SubgraphSpec::Full);
        };
        let v = ColorSet::from_colors(&v);
        let Some(prefixes) = j.prefixes else {
            return Ok(SubgraphSpec::RestrictedV(v));
        };
        let fam = prefixes
            .iter()
            .map(|p| {
                p.iter()
                    .map(|b| b.parse::<ColorSet>())
                    .collect::<Result<Vec<_>>>()
                    .map(Prefix)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(SubgraphSpec::RestrictedFamily(v, fam))
    }
}

/// Closure conditions on a family of prefixes of `V`.
pub fn is_closed_family(family: &[Prefix], v: ColorSet) -> bool {
    if !family.contains(&Prefix::empty()) {
        return false;
    }
    for a in family {
        if !a.is_prefix_in(v) {
            return false;
        }
        let k = a.0.len();
        if k > 0 && a.0[k - 1].len() == 1 {
            let shorter = Prefix(a.0[..k - 1].to_vec());
            if !family.contains(&shorter) {
                return false;
            }
        }
        for m in 0..k {
            if a.0[m].len() < 2 {
                continue;
            }
            let ok = a.0[m].iter().any(|x| {
                let mut b = a.0[..m].to_vec();
                b.push(ColorSet::single(x));
                b.push(a.0[m].without(x));
                b.extend_from_slice(&a.0[m + 1..]);
                family.contains(&Prefix(b))
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PseudomanifoldReport {
    pub n: Color,
    pub d: usize,
    pub top_simplices: usize,
    pub facets: usize,
    pub interior_facets: usize,
    pub boundary_facets: usize,
    pub max_multiplicity: usize,
    pub connected: bool,
    /// Every flip crosses a facet shared by exactly the two simplices.
    pub flips_consistent: bool,
}

impl PseudomanifoldReport {
    pub fn ok(&self) -> bool {
        self.max_multiplicity <= 2 && self.connected && self.flips_consistent
    }
}

/// Facet census of `χ^d(Δ^n)` computed from faces alone, compared with the
/// flip adjacency. Limited to `n <= 3`, `d <= 2`.
pub fn pseudomanifold_check(n: Color, d: usize) -> Result<PseudomanifoldReport> {
    if n > 3 || d > 2 || d == 0 {
        return Err(Error::Guard(format!(
            "pseudomanifold check is limited to n <= 3 and 1 <= d <= 2, got n = {n}, d = {d}"
        )));
    }
    let tops: Vec<SimplexIndex> = stream_top(n, d).collect();
    let index: HashMap<&SimplexIndex, usize> = tops.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut holders: HashMap<SimplexIndex, Vec<usize>> = HashMap::new();
    for (i, t) in tops.iter().enumerate() {
        for x in t.colors().iter() {
            holders.entry(t.face_unchecked(ColorSet::single(x))).or_default().push(i);
        }
    }
    let max_multiplicity = holders.values().map(|h| h.len()).max().unwrap_or(0);
    let interior_facets = holders.values().filter(|h| h.len() == 2).count();
    let boundary_facets = holders.values().filter(|h| h.len() == 1).count();

    let mut parent: Vec<usize> = (0..tops.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for h in holders.values() {
        for w in h.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    let connected = (0..tops.len()).all(|i| find(&mut parent, i) == root);

    let mut flips_consistent = true;
    for (i, t) in tops.iter().enumerate() {
        let fl = flippable(t);
        for x in t.colors().iter() {
            let facet = t.face_unchecked(ColorSet::single(x));
            let h = &holders[&facet];
            if fl.contains(x) {
                let u = flip(t, x)?;
                let j = index[&u];
                let shared = u.face_unchecked(ColorSet::single(x)) == facet;
                flips_consistent &= shared && h.len() == 2 && h.contains(&j) && j != i;
            } else {
                flips_consistent &= h.len() == 1;
            }
        }
    }
    Ok(PseudomanifoldReport {
        n,
        d,
        top_simplices: tops.len(),
        facets: holders.len(),
        interior_facets,
        boundary_facets,
        max_multiplicity,
        connected,
        flips_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osp::enumerate_osps;

    fn o(s: &str) -> Osp {
        s.parse().unwrap()
    }

    fn cs(xs: &[Color]) -> ColorSet {
        ColorSet::from_colors(xs)
    }

    fn top(s: &str) -> SimplexIndex {
        SimplexIndex::top(&s.split("||").map(o).collect::<Vec<_>>())
    }

    #[test]
    fn flippable_examples() {
        assert_eq!(flippable(&top("0|1|2")), cs(&[0, 1]));
        assert_eq!(flippable(&top("0,1,2")), cs(&[0, 1, 2]));
        assert_eq!(flippable(&top("0,1|2||0,1|2")), cs(&[0, 1]));
        assert_eq!(flippable(&top("0,1|2||2|0,1")), cs(&[0, 1, 2]));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip_osp(&o("0|1|2"), 1), o("0|1,2"));
        assert_eq!(flip_osp(&o("0,1,2"), 0), o("0|1,2"));
        assert_eq!(flip(&top("0|1|2||0|1|2"), 1).unwrap(), top("0|1|2||0|1,2"));
        assert_eq!(flip(&top("0|1|2||2|0|1"), 1).unwrap(), top("0|1,2||2|0|1"));
        assert!(flip(&top("0|1|2||0|1|2"), 2).is_err());
    }

    #[test]
    fn degrees_and_edge_count() {
        assert_eq!(neighbors(&top("0,1,2")).len(), 3);
        assert_eq!(neighbors(&top("0|1|2")).len(), 2);
        // by type: ([2]) 3, (a|bc) 3 each, (ab|c) 2 each, (a|b|c) 2 each
        let by_hand = 3 + 3 * 3 + 3 * 2 + 6 * 2;
        let total: usize = stream_top(2, 1).map(|t| neighbors(&t).len()).sum();
        assert_eq!(total, by_hand);
        assert_eq!(total / 2, 15);
    }

    #[test]
    fn involution_and_facet_witness() {
        for n in 1..=3 {
            for d in 1..=2 {
                for t in stream_top(n, d) {
                    for e in neighbors(&t) {
                        assert_eq!(flip(&e.to, e.color).unwrap(), t);
                        let c = ColorSet::single(e.color);
                        assert_eq!(t.face_unchecked(c), e.to.face_unchecked(c));
                        assert_ne!(orientation(&t), orientation(&e.to));
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_n_bipartite() {
        for n in 1..=5 {
            for s in enumerate_osps(ColorSet::full(n)).unwrap() {
                for x in flippable_osp(&s).iter() {
                    assert_ne!(s.orientation(), flip_osp(&s, x).orientation());
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let v = cs(&[0, 1]);
        assert!(in_subgraph(&o("2|0|1"), &SubgraphSpec::RestrictedV(v)).unwrap());
        assert!(!in_subgraph(&o("0|1|2"), &SubgraphSpec::RestrictedV(v)).unwrap());
        let a = Prefix(vec![cs(&[0])]);
        assert!(in_subgraph(&o("0|2|1"), &SubgraphSpec::RestrictedPrefix(v, a)).unwrap());
        let bad = SubgraphSpec::RestrictedPrefix(v, Prefix(vec![cs(&[2])]));
        assert!(in_subgraph(&o("0|2|1"), &bad).is_err());
        assert!(in_subgraph(&o("0|2|1"), &SubgraphSpec::RestrictedV(ColorSet::full(2))).is_err());
    }

    #[test]
    fn prefix_parts_partition_vertices() {
        fn prefixes(v: ColorSet, acc: &mut Vec<ColorSet>, out: &mut Vec<Prefix>) {
            out.push(Prefix(acc.clone()));
            let used = acc.iter().fold(ColorSet::EMPTY, |s, &b| s.union(b));
            for b in v.minus(used).subsets() {
                acc.push(b);
                prefixes(v, acc, out);
                acc.pop();
            }
        }
        for n in 1..=4u8 {
            let all = enumerate_osps(ColorSet::full(n)).unwrap();
            for v in ColorSet::full(n).subsets() {
                if v == ColorSet::full(n) {
                    continue;
                }
                let mut fam = Vec::new();
                prefixes(v, &mut Vec::new(), &mut fam);
                for s in &all {
                    let hits = fam.iter().filter(|a| in_prefix_part(s, v, &a.0)).count();
                    assert_eq!(hits, 1, "{s} V={v}");
                }
            }
        }
    }

    #[test]
    fn closed_families() {
        let v = cs(&[0, 1, 2]);
        let p = |blocks: &[&[Color]]| Prefix(blocks.iter().map(|b| cs(b)).collect());
        assert!(is_closed_family(&[Prefix::empty(), p(&[&[0]])], v));
        assert!(!is_closed_family(&[Prefix::empty(), p(&[&[0], &[1]])], v));
        assert!(!is_closed_family(&[p(&[&[0]])], v));
        assert!(!is_closed_family(&[Prefix::empty(), p(&[&[0, 1]])], v));
        assert!(is_closed_family(&[Prefix::empty(), p(&[&[0, 1]]), p(&[&[0], &[1]]), p(&[&[0]])], v));
    }

    #[test]
    fn spec_json_roundtrip() {
        let v = cs(&[0, 1]);
        let fam = vec![Prefix::empty(), Prefix(vec![cs(&[0])]), Prefix(vec![cs(&[0]), cs(&[1])])];
        let spec = SubgraphSpec::RestrictedFamily(v, fam);
        let j = serde_json::to_string(&spec).unwrap();
        assert_eq!(j, r#"{"V":[0,1],"prefixes":[[],["0"],["0","1"]]}"#);
        let back: SubgraphSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, spec);
        let full: SubgraphSpec = serde_json::from_str("{}").unwrap();
        assert_eq!(full, SubgraphSpec::Full);
    }

    #[test]
    fn pseudomanifold_small() {
        let r = pseudomanifold_check(1, 1).unwrap();
        assert_eq!((r.top_simplices, r.interior_facets, r.boundary_facets), (3, 2, 2));
        assert!(r.ok());
        let r = pseudomanifold_check(2, 1).unwrap();
        assert_eq!(r.top_simplices, 13);
        // 39 edge incidences, 9 boundary edges
        assert_eq!((r.interior_facets, r.boundary_facets), (15, 9));
        assert!(r.ok());
        let r = pseudomanifold_check(2, 2).unwrap();
        assert_eq!(r.top_simplices, 169);
        assert!(r.ok());
        assert!(pseudomanifold_check(4, 1).is_err());
    }
}
