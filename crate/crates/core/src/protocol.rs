//! Layered immediate snapshot executions, the 3-round weak symmetry
//! breaking protocol for six processes, and the one-round adversary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::osp::{enumerate_osps, level, Color, ColorSet, Osp, PartialOsp};
use crate::subdivision::{SimplexIndex, Vertex};
use crate::wsb6::{self, exsimp, final_match, is_exceptional_vertex, label_l, mono_membership, Top2};

/// Number of processes the protocol is written for.
pub const PROCESSES: usize = 6;

/// A failure-free layered execution: one partition of the participants per
/// round, blocks in activation order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schedule {
    rounds: Vec<Osp>,
}

impl Schedule {
    pub fn new(rounds: Vec<Osp>) -> Result<Schedule> {
        let first = rounds.first().ok_or_else(|| Error::Domain("a schedule needs a round".into()))?;
        let ids = first.ground();
        if rounds.iter().any(|r| r.ground() != ids) {
            return domain("every round must partition the same participant set");
        }
        Ok(Schedule { rounds })
    }

    pub fn rounds(&self) -> &[Osp] {
        &self.rounds
    }

    pub fn ids(&self) -> ColorSet {
        self.rounds[0].ground()
    }

    pub fn map(&self, f: &[Color; 16]) -> Schedule {
        Schedule {
            rounds: self.rounds.iter().map(|r| r.map(f)).collect(),
        }
    }

    pub fn simplex(&self) -> SimplexIndex {
        SimplexIndex::top(&self.rounds)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rounds.iter().enumerate() {
            if i > 0 {
                f.write_str("||")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Schedule> {
        let rounds = s
            .trim()
            .split("||")
            .map(|r| r.parse::<Osp>())
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(rounds)
    }
}

impl Serialize for Schedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Views after the last round, one per process, as subdivision vertices.
pub fn simulate_views(schedule: &Schedule) -> Vec<(Color, Vertex)> {
    let s = schedule.simplex();
    s.colors().iter().zip(s.vertices()).collect()
}

/// Full-information state: own id and the states read in the last snapshot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NestedView {
    pub id: Color,
    pub seen: Vec<NestedView>,
}

/// Operational run: in every round a block writes, then snapshots everything
/// written so far in that round.
pub fn simulate_nested(schedule: &Schedule) -> BTreeMap<Color, NestedView> {
    let mut state: BTreeMap<Color, NestedView> = schedule
        .ids()
        .iter()
        .map(|p| (p, NestedView { id: p, seen: Vec::new() }))
        .collect();
    for round in schedule.rounds() {
        let mut memory: Vec<NestedView> = Vec::new();
        let mut next = BTreeMap::new();
        for block in round.blocks() {
            memory.extend(block.iter().map(|p| state[&p].clone()));
            memory.sort();
            for p in block.iter() {
                next.insert(p, NestedView { id: p, seen: memory.clone() });
            }
        }
        state = next;
    }
    state
}

/// Read a vertex back as a full-information state.
pub fn vertex_to_view(v: &Vertex) -> NestedView {
    let p = v.color();
    let d = v.levels().len();
    let seen_ids = v.levels()[d - 1].carrier();
    let seen = if d == 1 {
        seen_ids
            .iter()
            .map(|q| NestedView { id: q, seen: Vec::new() })
            .collect()
    } else {
        let below = SimplexIndex::new(v.levels()[..d - 1].to_vec()).expect("linked");
        let mut s: Vec<NestedView> = seen_ids
            .iter()
            .map(|q| vertex_to_view(&below.vertex(q).expect("seen color present")))
            .collect();
        s.sort();
        s
    };
    NestedView { id: p, seen }
}

/// Order-preserving relabeling of `ids` onto `0..|ids|`.
fn rank_map(ids: ColorSet) -> [Color; 16] {
    let mut f = [0u8; 16];
    for (k, slot) in f.iter_mut().enumerate() {
        *slot = k as Color;
    }
    for (r, x) in ids.iter().enumerate() {
        f[x as usize] = r as Color;
    }
    f
}

/// `Match(σ, ξ)` on rank-normalized partitions of `[5]`, as printed: the
/// table color, else the level rule.
pub fn match_fn(sigma: &Osp, xi: &Osp) -> Result<Color> {
    let t = Top2::new(*sigma, *xi)?;
    if let Some(c) = exsimp().get(&t) {
        return Ok(c);
    }
    level(xi, &sigma.st())
        .ok_or_else(|| Error::Verification(format!("level of {xi} undefined for {sigma} outside the table")))
}

/// Color of the facet across which `ℳ` matches a 1-monochromatic simplex.
fn matched_color(sigma: &Osp, xi: &Osp) -> Option<Color> {
    let t = Top2::new(*sigma, *xi).ok()?;
    if !mono_membership(sigma, xi) {
        return None;
    }
    final_match(&t).map(|(_, c)| c)
}

fn insert_missing(p: &PartialOsp, q: Color) -> Osp {
    let b: Vec<ColorSet> = p
        .upper()
        .iter()
        .zip(p.lower())
        .map(|(&u, &l)| if u.contains(q) { l.with(q) } else { l })
        .collect();
    Osp::new(&b).expect("blocks of a partial partition")
}

fn split_before(p: &PartialOsp, q: Color) -> Result<Osp> {
    let up = p.upper();
    let k = up.iter().position(|b| b.contains(q)).expect("q in carrier");
    let mut b = up[..k].to_vec();
    b.push(ColorSet::single(q));
    b.push(up[k].without(q));
    b.extend_from_slice(&up[k + 1..]);
    Osp::new(&b)
}

/// Steps 1 and 2 of the protocol: an early decision, or the 3-round view.
fn early(view: &Vertex) -> Result<Option<u8>> {
    if view.levels().len() != 3 {
        return domain("the protocol decides on 3-round views");
    }
    let v2 = view.pred()?;
    if v2.supp().len() < PROCESSES && !is_exceptional_vertex(&v2) {
        return Ok(Some(0));
    }
    if view.levels()[2].carrier().len() + 2 <= PROCESSES {
        return Ok(Some(1));
    }
    Ok(None)
}

/// The protocol decision of the process owning a 3-round view.
///
/// Steps 1 and 2 are as printed. Step 3 decides only from the last two
/// rounds' 1-monochromatic simplices and their matched facets:
/// * everybody seen in round 3: `1` iff `(σ ∥ τ)` is not 1-monochromatic
///   or is matched across the own color;
/// * one id `q` missing in round 3: `0` iff the two simplices obtained by
///   putting `q` back are 1-monochromatic and matched across `q`.
pub fn wsb6_decide(view: &Vertex) -> Result<u8> {
    if let Some(d) = early(view)? {
        return Ok(d);
    }
    let lv = view.levels();
    let p = view.color();
    let (s1, s2) = (lv[0], lv[1]);
    let supp = s1.carrier();
    if supp.len() < PROCESSES {
        // only exceptional views get here; they see no full simplex
        return Ok(1);
    }
    let f = rank_map(supp);
    let (s1, s2) = (s1.map(&f), s2.map(&f));
    if lv[2].carrier().len() == PROCESSES {
        let sigma = s1.as_osp().ok_or_else(|| Error::Verification("round-1 level is not full".into()))?;
        let tau = s2.as_osp().ok_or_else(|| Error::Verification("round-2 level is not full".into()))?;
        return Ok(match matched_color(&sigma, &tau) {
            Some(c) => (c == f[p as usize]) as u8,
            None => 1,
        });
    }
    let q = ColorSet::full(5).minus(s2.colors()).min().expect("one id missing");
    let (a, b) = if s2.carrier().contains(q) {
        let sigma = s1.as_osp().ok_or_else(|| Error::Verification("round-1 level is not full".into()))?;
        (Top2::new(sigma, insert_missing(&s2, q))?, Top2::new(sigma, split_before(&s2, q)?)?)
    } else if s1.carrier().contains(q) {
        let mut tb = s2.lower().to_vec();
        tb.push(ColorSet::single(q));
        let tau = Osp::new(&tb)?;
        let rho = insert_missing(&s1, q);
        (Top2::new(rho, tau)?, Top2::new(crate::flip::flip_osp(&rho, q), tau)?)
    } else {
        return Ok(1);
    };
    let matched = mono_membership(&a.sigma, &a.tau)
        && mono_membership(&b.sigma, &b.tau)
        && matched_color(&a.sigma, &a.tau) == Some(q);
    Ok(if matched { 0 } else { 1 })
}

/// The protocol exactly as printed; kept for comparison.
pub fn wsb6_decide_literal(view: &Vertex) -> Result<u8> {
    if let Some(d) = early(view)? {
        return Ok(d);
    }
    let lv = view.levels();
    let p = view.color();
    let (s1, s2) = (lv[0], lv[1]);
    let xi = if lv[2].carrier().len() == PROCESSES {
        s2.as_osp().ok_or_else(|| Error::Verification("round-2 level is not full".into()))?
    } else {
        let a = s2.carrier();
        if a.len() < PROCESSES {
            return Ok(1);
        }
        split_before(&s2, a.minus(s2.colors()).min().expect("one id missing"))?
    };
    let sigma = s1
        .as_osp()
        .ok_or_else(|| Error::Verification("round-1 level is not full".into()))?;
    let f = rank_map(sigma.ground());
    let c = match_fn(&sigma.map(&f), &xi.map(&f))?;
    Ok((f[p as usize] == c) as u8)
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub schedule: Schedule,
    pub decisions: Vec<(Color, u8)>,
    pub pass: bool,
}

/// Run all processes; pass iff both outputs occur.
pub fn check_wsb_execution(schedule: &Schedule) -> Result<Verdict> {
    if schedule.rounds().len() != 3 || schedule.ids().len() != PROCESSES {
        return domain("expected a 3-round schedule of six processes");
    }
    let decisions = simulate_views(schedule)
        .into_iter()
        .map(|(p, v)| wsb6_decide(&v).map(|d| (p, d)))
        .collect::<Result<Vec<_>>>()?;
    let ones = decisions.iter().filter(|d| d.1 == 1).count();
    Ok(Verdict {
        schedule: schedule.clone(),
        pass: ones > 0 && ones < decisions.len(),
        decisions,
    })
}

pub fn random_schedule(rng: &mut ChaCha8Rng) -> Schedule {
    let g = wsb6::gamma5();
    let rounds = (0..3).map(|_| g.osps[rng.gen_range(0..g.len())]).collect();
    Schedule { rounds }
}

/// Injective relabeling of `[5]` into the id space `0..16`.
fn random_ids(rng: &mut ChaCha8Rng) -> [Color; 16] {
    let mut pool: Vec<Color> = (0..16).collect();
    for i in 0..PROCESSES {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    let mut f = [0u8; 16];
    for (k, slot) in f.iter_mut().enumerate() {
        *slot = k as Color;
    }
    f[..PROCESSES].copy_from_slice(&pool[..PROCESSES]);
    f
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub schedules: u64,
    pub passes: u64,
    pub failures: u64,
    pub errors: u64,
    /// Decisions differing from the labeling of the subdivision.
    pub label_mismatches: u64,
    /// Schedules where some decision differs from the labeling.
    pub label_mismatch_schedules: u64,
    /// Runs under relabeled ids that differ from the rank-level run.
    pub relabel_mismatches: u64,
    /// The printed protocol on the same schedules: schedules with an
    /// undefined level, schedules without both outputs, and decisions
    /// differing from the labeling.
    pub literal_errors: u64,
    pub literal_failures: u64,
    pub literal_label_mismatches: u64,
    pub witnesses: Vec<String>,
}

impl CampaignReport {
    pub fn ok(&self) -> bool {
        self.failures == 0 && self.errors == 0 && self.relabel_mismatches == 0 && self.label_mismatches == 0
    }

    fn merge(mut self, o: CampaignReport) -> CampaignReport {
        self.schedules += o.schedules;
        self.passes += o.passes;
        self.failures += o.failures;
        self.errors += o.errors;
        self.label_mismatches += o.label_mismatches;
        self.label_mismatch_schedules += o.label_mismatch_schedules;
        self.relabel_mismatches += o.relabel_mismatches;
        self.literal_errors += o.literal_errors;
        self.literal_failures += o.literal_failures;
        self.literal_label_mismatches += o.literal_label_mismatches;
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

fn run_one(schedule: &Schedule, ids: &[Color; 16], out: &mut CampaignReport) {
    out.schedules += 1;
    let verdict = match check_wsb_execution(schedule) {
        Ok(v) => v,
        Err(e) => {
            out.errors += 1;
            out.witness(format!("{schedule}: {e}"));
            return;
        }
    };
    if verdict.pass {
        out.passes += 1;
    } else {
        out.failures += 1;
        out.witness(format!("{schedule}: all decide {}", verdict.decisions[0].1));
    }
    let views = simulate_views(schedule);
    match views.iter().map(|(_, v)| wsb6_decide_literal(v)).collect::<Result<Vec<u8>>>() {
        Ok(lit) => {
            let ones = lit.iter().filter(|&&d| d == 1).count();
            out.literal_failures += (ones == 0 || ones == lit.len()) as u64;
            for ((_, v), d) in views.iter().zip(&lit) {
                out.literal_label_mismatches += (label_l(v).ok() != Some(*d)) as u64;
            }
        }
        Err(_) => out.literal_errors += 1,
    }
    let mut bad = 0;
    for (p, v) in views {
        let d = verdict.decisions.iter().find(|x| x.0 == p).expect("decided").1;
        match label_l(&v) {
            Ok(l) if l == d => {}
            Ok(l) => {
                bad += 1;
                out.witness(format!("{schedule}: process {p} decides {d}, labeling gives {l}"));
            }
            Err(e) => {
                out.errors += 1;
                out.witness(format!("{schedule}: {e}"));
            }
        }
    }
    out.label_mismatches += bad;
    out.label_mismatch_schedules += (bad > 0) as u64;
    let relabeled = schedule.map(ids);
    match check_wsb_execution(&relabeled) {
        Ok(r) => {
            // the relabeling need not preserve order, so compare with the
            // run on the ranks of the new ids
            let f = rank_map(relabeled.ids());
            let consistent = match check_wsb_execution(&relabeled.map(&f)) {
                Ok(k) => r
                    .decisions
                    .iter()
                    .all(|&(q, e)| k.decisions.iter().any(|&(x, y)| x == f[q as usize] && y == e)),
                Err(_) => false,
            };
            if !consistent {
                out.relabel_mismatches += 1;
                out.witness(format!("{relabeled}: decisions depend on more than ranks"));
            }
        }
        Err(e) => {
            out.errors += 1;
            out.witness(format!("{relabeled}: {e}"));
        }
    }
}

/// Seeded campaign over uniformly random 3-round schedules.
pub fn campaign(count: u64, seed: u64) -> CampaignReport {
    let chunks: u64 = 64;
    let per = count.div_ceil(chunks);
    let mut r = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut out = CampaignReport::default();
            let n = per.min(count.saturating_sub(k * per));
            for _ in 0..n {
                let s = random_schedule(&mut rng);
                let ids = random_ids(&mut rng);
                run_one(&s, &ids, &mut out);
            }
            out
        })
        .reduce(CampaignReport::default, CampaignReport::merge);
    r.seed = seed;
    r
}

/// Campaign over given schedules.
pub fn run_schedules(schedules: &[Schedule], seed: u64) -> CampaignReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CampaignReport { seed, ..Default::default() };
    for s in schedules {
        let ids = random_ids(&mut rng);
        run_one(s, &ids, &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// One round

/// `δ` on `{(r, p) : 1 <= p <= r <= n}`: a process that saw `r` processes,
/// itself ranked `p`-th among them, decides `δ(r, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneRoundDecision {
    n: usize,
    bits: Vec<u8>,
}

impl OneRoundDecision {
    pub fn new(n: usize, f: impl Fn(usize, usize) -> u8) -> OneRoundDecision {
        let mut bits = Vec::with_capacity(n * (n + 1) / 2);
        for r in 1..=n {
            for p in 1..=r {
                bits.push(f(r, p) & 1);
            }
        }
        OneRoundDecision { n, bits }
    }

    /// The map whose bit `r(r-1)/2 + p - 1` is taken from `mask`.
    pub fn from_mask(n: usize, mask: u64) -> OneRoundDecision {
        OneRoundDecision::new(n, |r, p| ((mask >> (r * (r - 1) / 2 + p - 1)) & 1) as u8)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, p: usize) -> u8 {
        self.bits[r * (r - 1) / 2 + p - 1]
    }
}

/// Decisions of processes `1..=n` in the one-round execution `schedule`.
pub fn one_round_decisions(delta: &OneRoundDecision, schedule: &Osp) -> Vec<(Color, u8)> {
    let mut seen = ColorSet::EMPTY;
    let mut out = Vec::new();
    for b in schedule.blocks() {
        seen = seen.union(*b);
        for x in b.iter() {
            let rank = seen.iter().position(|y| y == x).expect("seen") + 1;
            out.push((x, delta.get(seen.len(), rank)));
        }
    }
    out.sort();
    out
}

/// A one-round execution of processes `1..=n` on which everybody decides
/// the same value. First `k` processes together, then one at a time.
pub fn one_round_adversary(delta: &OneRoundDecision) -> Osp {
    let n = delta.n();
    let constant = |i: usize| (1..=i).all(|p| delta.get(i, p) == delta.get(i, 1));
    let k = (1..=n).rev().find(|&i| constant(i)).expect("level 1 is constant");
    let v = delta.get(k, 1);
    let mut rest: Vec<Color> = (1..=n as Color).collect();
    let mut tail: Vec<Color> = Vec::new();
    for i in (k + 1..=n).rev() {
        // the process activated i-th sees i processes and must rank alpha
        let alpha = (1..=i).find(|&p| delta.get(i, p) == v).expect("level i is not constant");
        tail.push(rest.remove(alpha - 1));
    }
    let mut blocks = vec![ColorSet::from_colors(&rest)];
    blocks.extend(tail.into_iter().rev().map(ColorSet::single));
    Osp::new(&blocks).expect("disjoint blocks")
}

#[derive(Clone, Debug, Serialize)]
pub struct OneRoundReport {
    pub n: usize,
    pub maps: u64,
    pub defeated: u64,
    pub exhaustive: bool,
    pub schedules: u64,
    /// Maps with no constant-decision execution in the exhaustive scan.
    pub solvers: u64,
    pub witnesses: Vec<String>,
}

impl OneRoundReport {
    pub fn ok(&self) -> bool {
        self.defeated == self.maps && self.solvers == 0
    }
}

/// Every decision map on `n` processes is defeated in one round.
pub fn brute_force_one_round(n: usize) -> Result<OneRoundReport> {
    if n < 2 {
        return domain("need at least two processes");
    }
    if n > 5 {
        return Err(Error::Guard(format!("2^{} decision maps is too many", n * (n + 1) / 2)));
    }
    let maps = 1u64 << (n * (n + 1) / 2);
    let exhaustive = n <= 4;
    let schedules = if exhaustive {
        enumerate_osps(ColorSet::from_colors(&(1..=n as Color).collect::<Vec<_>>()))?
    } else {
        Vec::new()
    };
    let mut defeated = 0;
    let mut solvers = 0;
    let mut witnesses = Vec::new();
    for mask in 0..maps {
        let delta = OneRoundDecision::from_mask(n, mask);
        let s = one_round_adversary(&delta);
        let d = one_round_decisions(&delta, &s);
        if d.iter().all(|x| x.1 == d[0].1) {
            defeated += 1;
        } else if witnesses.len() < 16 {
            witnesses.push(format!("map {mask:#x}: adversary schedule {s} is not constant"));
        }
        if exhaustive {
            let beaten = schedules.iter().any(|s| {
                let d = one_round_decisions(&delta, s);
                d.iter().all(|x| x.1 == d[0].1)
            });
            if !beaten {
                solvers += 1;
                if witnesses.len() < 16 {
                    witnesses.push(format!("map {mask:#x} survives every schedule"));
                }
            }
        }
    }
    Ok(OneRoundReport {
        n,
        maps,
        defeated,
        exhaustive,
        schedules: schedules.len() as u64,
        solvers,
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub sb_upper_6: u32,
    pub sb_lower_all: u32,
    pub sources: Vec<String>,
}

pub fn bounds() -> BoundsReport {
    BoundsReport {
        sb_upper_6: 3,
        sb_lower_all: 2,
        sources: vec![
            "upper: the 3-round protocol for six processes (verify-wsb6, simulate)".into(),
            "lower: the one-round adversary (impossibility)".into(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Osp {
        s.parse().unwrap()
    }

    #[test]
    fn views_match_vertices_small() {
        for m in 1..=3u8 {
            let ids = ColorSet::full(m);
            let osps = enumerate_osps(ids).unwrap();
            for a in &osps {
                let one = Schedule::new(vec![*a]).unwrap();
                let nested = simulate_nested(&one);
                for (p, v) in simulate_views(&one) {
                    assert_eq!(vertex_to_view(&v), nested[&p], "{one}");
                }
                for b in &osps {
                    let two = Schedule::new(vec![*a, *b]).unwrap();
                    let nested = simulate_nested(&two);
                    for (p, v) in simulate_views(&two) {
                        assert_eq!(vertex_to_view(&v), nested[&p], "{two}");
                    }
                }
            }
        }
    }

    #[test]
    fn schedule_parsing() {
        let s: Schedule = "0,1,2,3,4,5||0|1,2,3,4,5||5|0,1,2,3,4".parse().unwrap();
        assert_eq!(s.rounds().len(), 3);
        assert_eq!(s.to_string().parse::<Schedule>().unwrap(), s);
        assert!("0,1||0".parse::<Schedule>().is_err());
        assert!("".parse::<Schedule>().is_err());
    }

    #[test]
    fn symmetric_and_solo_executions() {
        let all: Schedule = "0,1,2,3,4,5||0,1,2,3,4,5||0,1,2,3,4,5".parse().unwrap();
        assert!(simulate_views(&all).iter().all(|(_, v)| v.is_internal(5)));
        assert!(check_wsb_execution(&all).unwrap().pass);

        let solo: Schedule = "2|0,1,3,4,5||2|0,1,3,4,5||2|0,1,3,4,5".parse().unwrap();
        let views = simulate_views(&solo);
        let v2 = &views.iter().find(|x| x.0 == 2).unwrap().1;
        assert!(is_exceptional_vertex(&v2.pred().unwrap()));
        assert_eq!(v2.pred().unwrap().to_string(), "2/2||2/2");
        assert_eq!(wsb6_decide(v2).unwrap(), 1);
    }

    #[test]
    fn regular_boundary_decides_zero() {
        // process 1 sees {0, 1} in round 1 and only itself afterwards
        let s: Schedule = "0|1|2,3,4,5||1|0,2,3,4,5||1|0,2,3,4,5".parse().unwrap();
        let views = simulate_views(&s);
        let v = &views.iter().find(|x| x.0 == 1).unwrap().1;
        assert!(!is_exceptional_vertex(&v.pred().unwrap()));
        assert_eq!(wsb6_decide(v).unwrap(), 0);
        assert!(wsb6_decide(&v.pred().unwrap()).is_err());
    }

    #[test]
    fn match_examples() {
        let whole = Osp::whole(5);
        assert_eq!(match_fn(&whole, &whole).unwrap(), 5);
        let crit = o("0|1|2|3|4|5");
        let c = match_fn(&o("0|1,2,3,4,5"), &crit).unwrap();
        assert_eq!(Some(c), exsimp().get(&Top2::new(o("0|1,2,3,4,5"), crit).unwrap()));
        assert!(match_fn(&o("0|1,2,3,4"), &whole).is_err());
    }

    #[test]
    fn relabeling_permutes_views() {
        let s: Schedule = "0,3|1|2,4,5||5|0,1,2,3,4||1,2|0,3,4,5".parse().unwrap();
        let mut f = [0u8; 16];
        for (k, x) in f.iter_mut().enumerate() {
            *x = k as Color;
        }
        f[..6].copy_from_slice(&[9, 2, 14, 0, 7, 3]);
        let a = simulate_views(&s);
        let b = simulate_views(&s.map(&f));
        for (p, v) in &a {
            let (_, w) = b.iter().find(|x| x.0 == f[*p as usize]).unwrap();
            assert_eq!(w.simplex(), &v.simplex().map(&f));
        }
    }

    #[test]
    fn adversary_examples() {
        let zero = OneRoundDecision::new(2, |_, _| 0);
        assert_eq!(one_round_adversary(&zero), o("1,2"));
        let d = OneRoundDecision::new(2, |r, p| (r == 2 && p == 2) as u8);
        let s = one_round_adversary(&d);
        assert_eq!(s, o("2|1"));
        assert_eq!(one_round_decisions(&d, &s), vec![(1, 0), (2, 0)]);
        let ones = OneRoundDecision::new(4, |_, _| 1);
        assert_eq!(one_round_adversary(&ones), o("1,2,3,4"));
    }

    #[test]
    fn adversary_ranks() {
        // the process activated i-th sees i processes at the chosen rank
        for mask in 0..(1u64 << 10) {
            let d = OneRoundDecision::from_mask(4, mask);
            let s = one_round_adversary(&d);
            let k = s.blocks()[0].len();
            let v = d.get(k, 1);
            let mut seen = s.blocks()[0];
            for b in &s.blocks()[1..] {
                seen = seen.union(*b);
                let x = b.as_single().unwrap();
                let r = seen.iter().position(|y| y == x).unwrap() + 1;
                assert_eq!(d.get(seen.len(), r), v);
            }
        }
    }

    #[test]
    fn one_round_brute_force() {
        let r2 = brute_force_one_round(2).unwrap();
        assert_eq!((r2.maps, r2.defeated, r2.schedules), (8, 8, 3));
        assert!(r2.ok());
        let r3 = brute_force_one_round(3).unwrap();
        assert_eq!((r3.maps, r3.schedules), (64, 13));
        assert!(r3.ok());
        assert!(brute_force_one_round(6).is_err());
        assert!(brute_force_one_round(1).is_err());
    }

    #[test]
    fn bounds_table() {
        let b = bounds();
        assert_eq!((b.sb_upper_6, b.sb_lower_all), (3, 2));
    }

    #[test]
    fn small_campaign() {
        let r = campaign(300, 11);
        assert_eq!(r.schedules, 300);
        assert_eq!(r.failures, 0, "{:?}", r.witnesses);
        assert_eq!(r.errors, 0, "{:?}", r.witnesses);
        assert_eq!(r.relabel_mismatches, 0, "{:?}", r.witnesses);
        assert_eq!(r.label_mismatches, 0, "{:?}", r.witnesses);
        assert!(r.ok());
    }

    #[test]
    fn printed_match_has_no_level_on_a_reachable_input() {
        // ξ ends with the singleton last block of σ and (σ ∥ ξ) is not
        // 1-monochromatic, so the level rule has nothing to return
        let (sigma, xi) = (o("4|0|3|5|2|1"), o("2|3|0|5|4|1"));
        assert!(!mono_membership(&sigma, &xi));
        assert!(match_fn(&sigma, &xi).is_err());
        let s = Schedule::new(vec![sigma, xi, Osp::whole(5)]).unwrap();
        assert!(simulate_views(&s).iter().any(|(_, v)| wsb6_decide_literal(v).is_err()));
        let v = check_wsb_execution(&s).unwrap();
        assert!(v.pass);
        for (p, w) in simulate_views(&s) {
            assert_eq!(v.decisions.iter().find(|d| d.0 == p).unwrap().1, label_l(&w).unwrap());
        }
    }
}
