//! Strategic-form games with unawareness.
//!
//! A [`GameFamily`] assigns a game `G_v` to every canonical view `v` (a
//! sequence of players with no immediate repetition). Finitely many views are
//! listed explicitly and every other view resolves to a fallback game, which
//! matches the eventually-constant families used in practice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gamecore::{
    expected_payoff, is_nash, nash_support_enumeration, pure_strategy_payoffs, MixedStrategy,
    PlayerId, Profile, StrategicGame, EQUIVALENCE_TOL,
};

/// Weight tolerance when comparing strategies across views.
pub const PROFILE_TOL: f64 = 1e-9;

/// Largest number of pure profiles searched by the payoff-completion check.
pub const COMPLETION_LIMIT: usize = 10_000;

/// A finite sequence of players; `∅` is the modeler's view.
///
/// Ordered by length, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct View(Vec<PlayerId>);

impl View {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Wraps a sequence as is; see [`canonical_view`] for the checked form.
    pub fn raw(ids: Vec<PlayerId>) -> Self {
        Self(ids)
    }

    pub fn ids(&self) -> &[PlayerId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<PlayerId> {
        self.0.last().copied()
    }

    /// No two consecutive ids are equal.
    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Collapses runs of equal ids.
    pub fn canonical(&self) -> Self {
        let mut out: Vec<PlayerId> = Vec::with_capacity(self.0.len());
        for &p in &self.0 {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        Self(out)
    }

    /// Canonical form of `self ^ other`.
    pub fn concat(&self, other: &View) -> Self {
        let mut ids = self.0.clone();
        ids.extend_from_slice(&other.0);
        Self(ids).canonical()
    }

    /// Canonical form of `self ^ player`.
    pub fn then(&self, player: PlayerId) -> Self {
        let mut ids = self.0.clone();
        if self.last() != Some(player) {
            ids.push(player);
        }
        Self(ids)
    }

    pub fn parent(&self) -> Option<Self> {
        (!self.0.is_empty()).then(|| Self(self.0[..self.0.len() - 1].to_vec()))
    }

    /// `∅` for the empty view, otherwise the ids written out (`121`).
    pub fn symbol(&self) -> String {
        if self.0.is_empty() {
            "∅".into()
        } else {
            self.to_string()
        }
    }
}

impl Ord for View {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for View {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses a string of single-digit player ids; `""` is the empty view.
impl FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d > 0)
                    .map(|d| d as PlayerId)
                    .ok_or_else(|| Error::Domain(format!("invalid player id {c:?} in view {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(View)
    }
}

/// Canonical view of a raw id sequence over the given players.
pub fn canonical_view(raw: &[PlayerId], players: &[PlayerId]) -> Result<View> {
    if let Some(&p) = raw.iter().find(|p| !players.contains(p)) {
        return Err(Error::UnknownPlayer(p));
    }
    Ok(View(raw.to_vec()).canonical())
}

/// A game with unawareness: explicit games for finitely many views and a
/// fallback for every other view.
#[derive(Debug, Clone, PartialEq)]
pub struct GameFamily {
    players: Vec<PlayerId>,
    depth: usize,
    explicit: BTreeMap<View, StrategicGame>,
    fallback: StrategicGame,
}

impl GameFamily {
    /// Structural checks only: keys are canonical views over `players` of
    /// length at most `depth`. Use [`validate_family`] for the axioms.
    pub fn new(
        players: Vec<PlayerId>,
        depth: usize,
        explicit: BTreeMap<View, StrategicGame>,
        fallback: StrategicGame,
    ) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Structure("family has no players".into()));
        }
        for v in explicit.keys() {
            if !v.is_canonical() {
                return Err(Error::Structure(format!("view {v} is not canonical")));
            }
            if v.len() > depth {
                return Err(Error::Structure(format!(
                    "view {v} is longer than the family depth {depth}"
                )));
            }
            if let Some(&p) = v.ids().iter().find(|p| !players.contains(p)) {
                return Err(Error::UnknownPlayer(p));
            }
        }
        Ok(Self {
            players,
            depth,
            explicit,
            fallback,
        })
    }

    /// The same game at every view.
    pub fn constant(game: StrategicGame) -> Self {
        Self {
            players: game.players().to_vec(),
            depth: 0,
            explicit: BTreeMap::new(),
            fallback: game,
        }
    }

    /// `G` at each listed view, `otherwise` elsewhere; depth is the longest
    /// listed view.
    pub fn from_cases(
        players: Vec<PlayerId>,
        cases: impl IntoIterator<Item = (View, StrategicGame)>,
        otherwise: StrategicGame,
    ) -> Result<Self> {
        let explicit: BTreeMap<View, StrategicGame> = cases.into_iter().collect();
        let depth = explicit.keys().map(View::len).max().unwrap_or(0);
        Self::new(players, depth, explicit, otherwise)
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn explicit(&self) -> &BTreeMap<View, StrategicGame> {
        &self.explicit
    }

    pub fn fallback(&self) -> &StrategicGame {
        &self.fallback
    }

    /// `G_v` for the canonical form of `v`.
    pub fn game_at(&self, v: &View) -> &StrategicGame {
        let v = v.canonical();
        self.explicit.get(&v).unwrap_or(&self.fallback)
    }

    /// `v` is relevant when each appended player belongs to the game of the
    /// preceding prefix.
    pub fn is_relevant(&self, v: &View) -> bool {
        let v = v.canonical();
        (0..v.len()).all(|k| {
            let prefix = View(v.ids()[..k].to_vec());
            self.game_at(&prefix).players().contains(&v.ids()[k])
        })
    }

    /// Relevant canonical views of length at most `max_len`, in view order.
    pub fn relevant_views(&self, max_len: usize) -> Vec<View> {
        let mut out = vec![View::empty()];
        let mut frontier = vec![View::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for v in &frontier {
                for &p in self.game_at(v).players() {
                    if v.last() != Some(p) {
                        next.push(v.then(p));
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// One itemised failure of the family axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Axiom number, 1 to 4.
    pub property: u8,
    pub views: Vec<View>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let views: Vec<String> = self.views.iter().map(View::symbol).collect();
        write!(
            f,
            "property {} at [{}]: {}",
            self.property,
            views.join(", "),
            self.message
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Checks that were skipped, with the reason.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_property(&self, property: u8) -> bool {
        self.violations.iter().any(|v| v.property == property)
    }
}

/// Checks the four axioms of a game with unawareness over every explicit
/// view and its children.
pub fn validate_family(f: &GameFamily) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut push = |property: u8, views: Vec<View>, message: String| {
        report.violations.push(Violation {
            property,
            views,
            message,
        })
    };

    let root_players = f.game_at(&View::empty()).players();
    if root_players.iter().any(|p| !f.players.contains(p)) {
        push(
            1,
            vec![View::empty()],
            format!("modeler's game has players outside {:?}", f.players),
        );
    }

    // 3: canonical keys, and duplication resolves to the same game
    for v in f.explicit.keys() {
        if !v.is_canonical() {
            push(3, vec![v.clone()], "view is not canonical".into());
            continue;
        }
        for k in 0..v.len() {
            let mut ids = v.ids().to_vec();
            ids.insert(k, ids[k]);
            let dup = View(ids);
            if !f.game_at(&dup).same_as(f.game_at(v), 0.0) {
                push(
                    3,
                    vec![v.clone(), dup],
                    "duplicated view resolves to a different game".into(),
                );
            }
        }
    }

    for v in f.explicit.keys() {
        let Some(parent) = v.parent() else { continue };
        // 2: prefix closure
        if !parent.is_empty() && !f.explicit.contains_key(&parent) {
            push(
                2,
                vec![v.clone(), parent.clone()],
                format!(
                    "prefix {} of listed view {} is not listed",
                    parent.symbol(),
                    v.symbol()
                ),
            );
        }
        // 1: the appended player must be in the parent's player set
        let last = v.last().expect("non-empty view");
        if !f.game_at(&parent).players().contains(&last) {
            push(
                1,
                vec![v.clone(), parent.clone()],
                format!("player {last} is not a player of G_{}", parent.symbol()),
            );
        }
    }

    // 2 and 4 along every parent-child edge reachable within depth + 1
    let mut completion_skipped = false;
    for v in f.relevant_views(f.depth + 1) {
        let Some(parent) = v.parent() else { continue };
        let child_game = f.game_at(&v);
        let parent_game = f.game_at(&parent);
        if !nesting_ok(child_game, parent_game, &v, &parent, &mut push) {
            continue;
        }
        if parent_game.profile_count() > COMPLETION_LIMIT {
            completion_skipped = true;
            continue;
        }
        if let Some(message) = completion_failure(child_game, parent_game) {
            push(4, vec![v.clone(), parent.clone()], message);
        }
    }
    if completion_skipped {
        report.notes.push(format!(
            "payoff completion not checked for games with more than {COMPLETION_LIMIT} profiles"
        ));
    }
    report
}

fn nesting_ok(
    child: &StrategicGame,
    parent: &StrategicGame,
    v: &View,
    parent_view: &View,
    push: &mut impl FnMut(u8, Vec<View>, String),
) -> bool {
    let mut ok = true;
    for (pos, &p) in child.players().iter().enumerate() {
        let Some(ppos) = parent.position(p) else {
            push(
                2,
                vec![v.clone(), parent_view.clone()],
                format!(
                    "player {p} of G_{} is not a player of G_{}",
                    v.symbol(),
                    parent_view.symbol()
                ),
            );
            ok = false;
            continue;
        };
        let missing: Vec<&str> = child
            .labels(pos)
            .iter()
            .filter(|l| parent.label_index(ppos, l).is_none())
            .map(String::as_str)
            .collect();
        if !missing.is_empty() {
            push(
                2,
                vec![v.clone(), parent_view.clone()],
                format!(
                    "strategies {missing:?} of player {p} in G_{} are absent from G_{}",
                    v.symbol(),
                    parent_view.symbol()
                ),
            );
            ok = false;
        }
    }
    ok
}

/// First pure profile of `child` without a payoff-preserving completion in
/// `parent`, described as a message.
fn completion_failure(child: &StrategicGame, parent: &StrategicGame) -> Option<String> {
    let map: Vec<(usize, Vec<usize>)> = child
        .players()
        .iter()
        .enumerate()
        .map(|(pos, &p)| {
            let ppos = parent.position(p).expect("nesting checked");
            let idx = child
                .labels(pos)
                .iter()
                .map(|l| parent.label_index(ppos, l).expect("nesting checked"))
                .collect();
            (ppos, idx)
        })
        .collect();
    'profiles: for pure in child.pure_profiles() {
        let u = child.payoff(&pure);
        for candidate in parent.pure_profiles() {
            let fixed = map
                .iter()
                .zip(&pure)
                .all(|((ppos, idx), &s)| candidate[*ppos] == idx[s]);
            if !fixed {
                continue;
            }
            let pu = parent.payoff(&candidate);
            let equal = map
                .iter()
                .zip(u)
                .all(|((ppos, _), x)| (pu[*ppos] - x).abs() <= EQUIVALENCE_TOL);
            if equal {
                continue 'profiles;
            }
        }
        let labels: Vec<&str> = pure
            .iter()
            .enumerate()
            .map(|(p, &s)| child.labels(p)[s].as_str())
            .collect();
        return Some(format!(
            "profile {labels:?} has no completion with equal payoffs"
        ));
    }
    None
}

/// The family as seen from `v`: `G^v_ṽ = G_{v^ṽ}`.
pub fn subjective_family(f: &GameFamily, v: &View) -> Result<GameFamily> {
    let v = v.canonical();
    if !f.is_relevant(&v) {
        return Err(Error::IrrelevantView(v.symbol()));
    }
    let mut explicit = BTreeMap::new();
    let players = f.game_at(&v).players().to_vec();
    // every ṽ longer than the depth lands beyond the explicit views
    for w in all_views(&f.players, f.depth) {
        let target = v.concat(&w);
        if let Some(g) = f.explicit.get(&target) {
            explicit.insert(w, g.clone());
        }
    }
    Ok(GameFamily {
        players,
        depth: f.depth,
        explicit,
        fallback: f.fallback.clone(),
    })
}

/// All canonical views over `players` up to `max_len`.
fn all_views(players: &[PlayerId], max_len: usize) -> Vec<View> {
    let mut out = vec![View::empty()];
    let mut frontier = vec![View::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for v in &frontier {
            for &p in players {
                if v.last() != Some(p) {
                    next.push(v.then(p));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

/// Subjective families of `v` and `w` agree at every view up to depth + 1 and
/// share the fallback.
pub fn same_subjective_family(f: &GameFamily, v: &View, w: &View) -> bool {
    let (v, w) = (v.canonical(), w.canonical());
    if !f.game_at(&v).same_as(f.game_at(&w), EQUIVALENCE_TOL) {
        return false;
    }
    all_views(&f.players, f.depth + 1).iter().all(|u| {
        f.game_at(&v.concat(u))
            .same_as(f.game_at(&w.concat(u)), EQUIVALENCE_TOL)
    })
}

/// Label-keyed weights of one player's strategy; absent labels weigh zero.
pub type LabelWeights = BTreeMap<String, f64>;

fn label_weights(game: &StrategicGame, pos: usize, s: &MixedStrategy) -> LabelWeights {
    game.labels(pos)
        .iter()
        .zip(s.weights())
        .filter(|(_, &w)| w.abs() > 1e-15)
        .map(|(l, &w)| (l.clone(), w))
        .collect()
}

/// Re-expresses label weights over the strategies of `game`; `None` when
/// some weight sits on a label the game lacks.
fn mixed_from_labels(game: &StrategicGame, pos: usize, w: &LabelWeights) -> Option<MixedStrategy> {
    let mut out = vec![0.0; game.strategy_count(pos)];
    for (label, &x) in w {
        match game.label_index(pos, label) {
            Some(k) => out[k] = x,
            None if x.abs() <= PROFILE_TOL => {}
            None => return None,
        }
    }
    MixedStrategy::new(out).ok()
}

fn weights_close(a: &LabelWeights, b: &LabelWeights, tol: f64) -> bool {
    a.keys()
        .chain(b.keys())
        .all(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs() <= tol)
}

/// An assignment of a profile `(σ)_v` in `G_v` to every view: explicit
/// entries plus a fallback for all other views.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedProfile {
    explicit: BTreeMap<View, Profile>,
    fallback: Profile,
}

impl ExtendedProfile {
    pub fn new(explicit: BTreeMap<View, Profile>, fallback: Profile) -> Self {
        let explicit = explicit
            .into_iter()
            .map(|(v, p)| (v.canonical(), p))
            .collect();
        Self { explicit, fallback }
    }

    pub fn constant(profile: Profile) -> Self {
        Self {
            explicit: BTreeMap::new(),
            fallback: profile,
        }
    }

    pub fn profile_at(&self, v: &View) -> &Profile {
        self.explicit.get(&v.canonical()).unwrap_or(&self.fallback)
    }

    pub fn explicit(&self) -> &BTreeMap<View, Profile> {
        &self.explicit
    }

    pub fn fallback(&self) -> &Profile {
        &self.fallback
    }

    fn depth(&self) -> usize {
        self.explicit.keys().map(View::len).max().unwrap_or(0)
    }

    /// Player `p`'s strategy at `v` as label weights.
    pub fn weights_at(&self, f: &GameFamily, v: &View, p: PlayerId) -> Option<LabelWeights> {
        let g = f.game_at(v);
        let pos = g.position(p)?;
        let profile = self.profile_at(v);
        (profile.strategies().len() == g.player_count())
            .then(|| label_weights(g, pos, profile.strategy(pos)))
    }

    /// Every profile fits the game of its view.
    pub fn check(&self, f: &GameFamily) -> Result<()> {
        for v in f.relevant_views(check_len(f, self)) {
            self.profile_at(&v).check(f.game_at(&v)).map_err(|e| {
                Error::DimensionMismatch(format!("profile at view {}: {e}", v.symbol()))
            })?;
        }
        Ok(())
    }

    /// Expected payoffs in the modeler's game.
    pub fn modeler_payoff(&self, f: &GameFamily) -> Result<Vec<f64>> {
        expected_payoff(f.game_at(&View::empty()), self.profile_at(&View::empty()))
    }
}

/// Views beyond this length see only fallback games and fallback profiles.
fn check_len(f: &GameFamily, e: &ExtendedProfile) -> usize {
    f.depth.max(e.depth()) + 1
}

/// `(σ_i)_v = (σ_i)_{v^i}` for every relevant `v^i`.
pub fn is_esp(f: &GameFamily, e: &ExtendedProfile) -> bool {
    if e.check(f).is_err() {
        return false;
    }
    f.relevant_views(check_len(f, e)).iter().all(|v| {
        f.game_at(v).players().iter().all(|&i| {
            let w = v.then(i);
            match (e.weights_at(f, v, i), e.weights_at(f, &w, i)) {
                (Some(a), Some(b)) => weights_close(&a, &b, PROFILE_TOL),
                _ => false,
            }
        })
    })
}

/// Payoff shortfall of `(σ_i)_v` against the best reply to `(σ_{−i})_{v^i}`
/// in `G_{v^i}`; `None` if `(σ_i)_v` uses strategies outside `G_{v^i}`.
fn best_reply_gap(f: &GameFamily, e: &ExtendedProfile, v: &View, i: PlayerId) -> Option<f64> {
    let w = v.then(i);
    let g = f.game_at(&w);
    let pos = g.position(i)?;
    let own = mixed_from_labels(g, pos, &e.weights_at(f, v, i)?)?;
    let mut strategies = e.profile_at(&w).strategies().to_vec();
    strategies[pos] = own.clone();
    let profile = Profile::from_strategies(strategies);
    let payoffs = pure_strategy_payoffs(g, pos, &profile).ok()?;
    let best = payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let achieved: f64 = payoffs.iter().zip(own.weights()).map(|(u, w)| u * w).sum();
    Some(best - achieved)
}

/// ESP in which each `(σ_i)_v` best-replies to `(σ_{−i})_{v^i}` in `G_{v^i}`.
pub fn is_extended_rationalizable(f: &GameFamily, e: &ExtendedProfile, tol: f64) -> bool {
    is_esp(f, e)
        && f.relevant_views(check_len(f, e)).iter().all(|v| {
            f.game_at(v)
                .players()
                .iter()
                .all(|&i| best_reply_gap(f, e, v, i).is_some_and(|gap| gap <= tol))
        })
}

/// Extended rationalizable, and views with equal subjective families carry
/// equal profiles.
pub fn is_ene(f: &GameFamily, e: &ExtendedProfile, tol: f64) -> bool {
    if !is_extended_rationalizable(f, e, tol) {
        return false;
    }
    let views = f.relevant_views(check_len(f, e));
    for (k, v) in views.iter().enumerate() {
        for w in &views[k + 1..] {
            if same_subjective_family(f, v, w) && !same_profile(f, e, v, w) {
                return false;
            }
        }
    }
    true
}

fn same_profile(f: &GameFamily, e: &ExtendedProfile, v: &View, w: &View) -> bool {
    f.game_at(v)
        .players()
        .iter()
        .all(|&p| match (e.weights_at(f, v, p), e.weights_at(f, w, p)) {
            (Some(a), Some(b)) => weights_close(&a, &b, PROFILE_TOL),
            _ => false,
        })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_solutions: usize,
    /// Upper bound on search nodes before the search stops early.
    pub node_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_solutions: 64,
            node_budget: 200_000,
        }
    }
}

/// Views sharing one subjective family, and therefore one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewClass {
    /// Members up to depth + 1, in view order.
    pub views: Vec<View>,
    /// Also contains every view longer than depth + 1.
    pub is_tail: bool,
}

#[derive(Debug, Clone, Default)]
pub struct EneSolution {
    pub equilibria: Vec<ExtendedProfile>,
    pub classes: Vec<ViewClass>,
    pub diagnostics: Vec<String>,
}

/// Searches for extended Nash equilibria.
///
/// Views are grouped into classes with equal subjective families; one
/// strategy variable per (class, player) is linked across classes by the ESP
/// equalities. Self-referential classes (such as the constant tail) are seeded
/// with Nash equilibria of their game; the remaining variables are filled by
/// pure best replies, branching over ties in label order. Every candidate is
/// confirmed by [`is_ene`].
pub fn solve_ene(f: &GameFamily, options: &SolveOptions) -> EneSolution {
    let mut solver = Solver::new(f, options);
    solver.run();
    solver.finish()
}

struct Constraint {
    /// Variable that must best-reply.
    own: usize,
    /// Class whose game and opponent strategies apply.
    class: usize,
    player: PlayerId,
}

struct Solver<'a> {
    f: &'a GameFamily,
    options: &'a SolveOptions,
    views: Vec<View>,
    class_of: Vec<usize>,
    classes: Vec<ViewClass>,
    tail: usize,
    /// (class, player) -> variable root
    var_of: BTreeMap<(usize, PlayerId), usize>,
    var_count: usize,
    /// Candidate labels per variable: those present in every member game.
    var_labels: Vec<Vec<String>>,
    constraints: Vec<Constraint>,
    /// Classes whose players all best-reply within the class itself.
    seedable: Vec<usize>,
    found: Vec<ExtendedProfile>,
    diagnostics: Vec<String>,
    nodes: usize,
    exhausted: bool,
}

impl<'a> Solver<'a> {
    fn new(f: &'a GameFamily, options: &'a SolveOptions) -> Self {
        let len = f.depth + 1;
        let views = f.relevant_views(len);
        let mut class_of = vec![usize::MAX; views.len()];
        let mut classes: Vec<ViewClass> = Vec::new();
        for k in 0..views.len() {
            if class_of[k] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = Vec::new();
            for j in k..views.len() {
                if class_of[j] == usize::MAX && same_subjective_family(f, &views[k], &views[j]) {
                    class_of[j] = c;
                    members.push(views[j].clone());
                }
            }
            classes.push(ViewClass {
                views: members,
                is_tail: false,
            });
        }
        // any view of maximal length sees only the fallback
        let tail = views
            .iter()
            .position(|v| v.len() == len)
            .map(|k| class_of[k])
            .unwrap_or(class_of[views.len() - 1]);
        classes[tail].is_tail = true;

        let mut solver = Self {
            f,
            options,
            views,
            class_of,
            classes,
            tail,
            var_of: BTreeMap::new(),
            var_count: 0,
            var_labels: Vec::new(),
            constraints: Vec::new(),
            seedable: Vec::new(),
            found: Vec::new(),
            diagnostics: Vec::new(),
            nodes: 0,
            exhausted: false,
        };
        solver.build_variables();
        solver
    }

    fn class_of_view(&self, v: &View) -> usize {
        match self.views.binary_search(v) {
            Ok(k) => self.class_of[k],
            Err(_) => self.tail,
        }
    }

    fn class_game(&self, c: usize) -> &'a StrategicGame {
        self.f.game_at(&self.classes[c].views[0])
    }

    fn build_variables(&mut self) {
        // union-find over (class, player)
        let keys: Vec<(usize, PlayerId)> = (0..self.classes.len())
            .flat_map(|c| {
                self.class_game(c)
                    .players()
                    .iter()
                    .map(move |&p| (c, p))
                    .collect::<Vec<_>>()
            })
            .collect();
        let index: BTreeMap<(usize, PlayerId), usize> =
            keys.iter().enumerate().map(|(k, &key)| (key, k)).collect();
        let mut parent: Vec<usize> = (0..keys.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for v in &self.views {
            for &i in self.f.game_at(v).players() {
                let a = index[&(self.class_of_view(v), i)];
                let Some(&b) = index.get(&(self.class_of_view(&v.then(i)), i)) else {
                    continue;
                };
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut root_id: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, &key) in keys.iter().enumerate() {
            let r = find(&mut parent, k);
            let next = root_id.len();
            let id = *root_id.entry(r).or_insert(next);
            self.var_of.insert(key, id);
        }
        self.var_count = root_id.len();

        let mut labels: Vec<Option<Vec<String>>> = vec![None; self.var_count];
        for (&(c, p), &var) in &self.var_of {
            let g = self.class_game(c);
            let own: Vec<String> = g
                .labels(g.position(p).expect("player of class game"))
                .to_vec();
            labels[var] = Some(match labels[var].take() {
                None => own,
                Some(prev) => prev.into_iter().filter(|l| own.contains(l)).collect(),
            });
        }
        self.var_labels = labels
            .into_iter()
            .map(|l| {
                let mut l = l.unwrap_or_default();
                l.sort();
                l
            })
            .collect();

        let mut seen = BTreeSet::new();
        for v in &self.views {
            for &i in self.f.game_at(v).players() {
                let own = self.var_of[&(self.class_of_view(v), i)];
                let class = self.class_of_view(&v.then(i));
                if seen.insert((own, class, i)) {
                    self.constraints.push(Constraint {
                        own,
                        class,
                        player: i,
                    });
                }
            }
        }

        let mut order: Vec<usize> = vec![self.tail];
        order.extend((0..self.classes.len()).filter(|&c| c != self.tail));
        for c in order {
            let g = self.class_game(c);
            let self_contained = g.players().iter().all(|&p| {
                let var = self.var_of[&(c, p)];
                self.constraints
                    .iter()
                    .any(|k| k.own == var && k.class == c && k.player == p)
            });
            if self_contained {
                self.seedable.push(c);
            }
        }
    }

    fn run(&mut self) {
        let assignment = vec![None; self.var_count];
        self.search(assignment);
        if self.exhausted {
            self.diagnostics.push(format!(
                "search stopped after {} nodes; the list may be incomplete",
                self.options.node_budget
            ));
        }
    }

    fn done(&self) -> bool {
        self.found.len() >= self.options.max_solutions || self.exhausted
    }

    fn search(&mut self, assignment: Vec<Option<LabelWeights>>) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.options.node_budget {
            self.exhausted = true;
            return;
        }
        // check fully determined constraints, find one to propagate
        let mut propagate: Option<usize> = None;
        for (k, c) in self.constraints.iter().enumerate() {
            let g = self.class_game(c.class);
            let opponents_ready = g
                .players()
                .iter()
                .filter(|&&p| p != c.player)
                .all(|&p| assignment[self.var_of[&(c.class, p)]].is_some());
            if !opponents_ready {
                continue;
            }
            match &assignment[c.own] {
                Some(own) => {
                    if !self.satisfies(c, own, &assignment) {
                        return;
                    }
                }
                None => {
                    if propagate.is_none() {
                        propagate = Some(k);
                    }
                }
            }
        }
        if let Some(k) = propagate {
            let c = &self.constraints[k];
            let (own, class, player) = (c.own, c.class, c.player);
            for label in self.pure_best_replies(class, player, own, &assignment) {
                let mut next = assignment.clone();
                next[own] = Some(LabelWeights::from([(label, 1.0)]));
                self.search(next);
                if self.done() {
                    return;
                }
            }
            return;
        }
        if assignment.iter().all(Option::is_some) {
            self.accept(&assignment);
            return;
        }
        // seed a self-contained class with the Nash equilibria of its game
        let seed = self.seedable.iter().copied().find(|&c| {
            self.class_game(c)
                .players()
                .iter()
                .all(|&p| assignment[self.var_of[&(c, p)]].is_none())
        });
        if let Some(c) = seed {
            let g = self.class_game(c);
            for profile in self.nash_equilibria(c) {
                let mut next = assignment.clone();
                for (pos, &p) in g.players().iter().enumerate() {
                    next[self.var_of[&(c, p)]] = Some(label_weights(g, pos, profile.strategy(pos)));
                }
                self.search(next);
                if self.done() {
                    return;
                }
            }
            return;
        }
        let var = assignment
            .iter()
            .position(Option::is_none)
            .expect("some variable unassigned");
        for label in self.var_labels[var].clone() {
            let mut next = assignment.clone();
            next[var] = Some(LabelWeights::from([(label, 1.0)]));
            self.search(next);
            if self.done() {
                return;
            }
        }
    }

    fn opponent_profile(
        &self,
        c: &Constraint,
        own: Option<&LabelWeights>,
        assignment: &[Option<LabelWeights>],
    ) -> Option<(Profile, usize)> {
        let g = self.class_game(c.class);
        let pos = g.position(c.player)?;
        let mut strategies = Vec::with_capacity(g.player_count());
        for (q, &p) in g.players().iter().enumerate() {
            if q == pos {
                strategies.push(match own {
                    Some(w) => mixed_from_labels(g, q, w)?,
                    None => MixedStrategy::uniform(g.strategy_count(q)),
                });
            } else {
                let w = assignment[self.var_of[&(c.class, p)]].as_ref()?;
                strategies.push(mixed_from_labels(g, q, w)?);
            }
        }
        Some((Profile::from_strategies(strategies), pos))
    }

    fn satisfies(
        &self,
        c: &Constraint,
        own: &LabelWeights,
        assignment: &[Option<LabelWeights>],
    ) -> bool {
        let Some((profile, pos)) = self.opponent_profile(c, Some(own), assignment) else {
            return false;
        };
        let g = self.class_game(c.class);
        let Ok(payoffs) = pure_strategy_payoffs(g, pos, &profile) else {
            return false;
        };
        let best = payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let achieved: f64 = payoffs
            .iter()
            .zip(profile.strategy(pos).weights())
            .map(|(u, w)| u * w)
            .sum();
        achieved >= best - self.options.tol
    }

    /// Pure best replies usable by variable `var`, in label order.
    fn pure_best_replies(
        &self,
        class: usize,
        player: PlayerId,
        var: usize,
        assignment: &[Option<LabelWeights>],
    ) -> Vec<String> {
        let c = Constraint {
            own: var,
            class,
            player,
        };
        let Some((profile, pos)) = self.opponent_profile(&c, None, assignment) else {
            return Vec::new();
        };
        let g = self.class_game(class);
        let Ok(payoffs) = pure_strategy_payoffs(g, pos, &profile) else {
            return Vec::new();
        };
        let best = payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.var_labels[var]
            .iter()
            .filter(|l| {
                g.label_index(pos, l)
                    .is_some_and(|k| payoffs[k] >= best - self.options.tol)
            })
            .cloned()
            .collect()
    }

    fn nash_equilibria(&mut self, c: usize) -> Vec<Profile> {
        let g = self.class_game(c);
        let symbol = self.classes[c].views[0].symbol();
        if g.player_count() == 2 {
            match nash_support_enumeration(g) {
                Ok(found) => {
                    if !found.skipped.is_empty() {
                        self.diagnostics.push(format!(
                            "class of {symbol}: {} degenerate support pairs skipped",
                            found.skipped.len()
                        ));
                    }
                    return found.equilibria;
                }
                Err(e) => self.diagnostics.push(format!(
                    "class of {symbol}: {e}; falling back to pure equilibria"
                )),
            }
        }
        g.pure_profiles()
            .filter_map(|pure| Profile::pure(g, &pure).ok())
            .filter(|p| is_nash(g, p, self.options.tol))
            .collect()
    }

    fn accept(&mut self, assignment: &[Option<LabelWeights>]) {
        let Some(candidate) = self.build_profile(assignment) else {
            return;
        };
        if !is_ene(self.f, &candidate, self.options.tol) {
            return;
        }
        let duplicate = self
            .found
            .iter()
            .any(|e| self.profiles_close(e, &candidate));
        if !duplicate {
            self.found.push(candidate);
        }
    }

    fn build_profile(&self, assignment: &[Option<LabelWeights>]) -> Option<ExtendedProfile> {
        let class_profile = |c: usize| -> Option<Profile> {
            let g = self.class_game(c);
            let strategies = g
                .players()
                .iter()
                .enumerate()
                .map(|(pos, &p)| {
                    let w = assignment[self.var_of[&(c, p)]].as_ref()?;
                    mixed_from_labels(g, pos, w)
                })
                .collect::<Option<Vec<_>>>()?;
            Some(Profile::from_strategies(strategies))
        };
        let fallback = class_profile(self.tail)?;
        let mut explicit = BTreeMap::new();
        for (k, v) in self.views.iter().enumerate() {
            let c = self.class_of[k];
            if c != self.tail && v.len() <= self.f.depth {
                explicit.insert(v.clone(), class_profile(c)?);
            }
        }
        Some(ExtendedProfile::new(explicit, fallback))
    }

    fn profiles_close(&self, a: &ExtendedProfile, b: &ExtendedProfile) -> bool {
        self.views.iter().all(|v| {
            self.f.game_at(v).players().iter().all(|&p| {
                match (a.weights_at(self.f, v, p), b.weights_at(self.f, v, p)) {
                    (Some(x), Some(y)) => weights_close(&x, &y, PROFILE_TOL),
                    _ => false,
                }
            })
        })
    }

    fn finish(self) -> EneSolution {
        let mut diagnostics = self.diagnostics;
        if self.found.is_empty() {
            diagnostics.push("no extended Nash equilibrium found".into());
        }
        EneSolution {
            equilibria: self.found,
            classes: self.classes,
            diagnostics,
        }
    }
}
