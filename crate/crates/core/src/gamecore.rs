//! Finite games: extensive trees with information sets, strategic forms,
//! reduced strategic forms, mixed strategies, best replies, zero-sum values
//! and bimatrix Nash equilibria by support enumeration.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;

/// Players are identified by small positive integers; views are written as
/// strings of these ids.
pub type PlayerId = u8;

/// Payoff entries closer than this are treated as equal when merging
/// equivalent strategies.
pub const EQUIVALENCE_TOL: f64 = 1e-12;

/// Largest per-player strategy count accepted by support enumeration.
pub const SUPPORT_ENUMERATION_LIMIT: usize = 12;

/// A finite strategic-form game `(N, ∏ Sᵢ, (uᵢ))`.
///
/// Payoffs are stored per pure profile in row-major order over the players
/// (the first player's strategy index varies slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct StrategicGame {
    players: Vec<PlayerId>,
    labels: Vec<Vec<String>>,
    payoffs: Vec<Vec<f64>>,
}

impl StrategicGame {
    /// `payoffs[profile][player]`, profiles in row-major order.
    pub fn new(
        players: Vec<PlayerId>,
        labels: Vec<Vec<String>>,
        payoffs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Structure("game has no players".into()));
        }
        if labels.len() != players.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} players but {} strategy lists",
                players.len(),
                labels.len()
            )));
        }
        let mut sorted = players.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != players.len() || sorted[0] == 0 {
            return Err(Error::Structure(format!("invalid player ids {players:?}")));
        }
        for (p, list) in players.iter().zip(&labels) {
            if list.is_empty() {
                return Err(Error::Structure(format!("player {p} has no strategies")));
            }
            let mut uniq = list.clone();
            uniq.sort();
            uniq.dedup();
            if uniq.len() != list.len() {
                return Err(Error::Structure(format!(
                    "player {p} has duplicate strategy labels"
                )));
            }
        }
        let count: usize = labels.iter().map(Vec::len).product();
        if payoffs.len() != count {
            return Err(Error::DimensionMismatch(format!(
                "expected {count} payoff vectors, got {}",
                payoffs.len()
            )));
        }
        for u in &payoffs {
            if u.len() != players.len() {
                return Err(Error::DimensionMismatch(format!(
                    "payoff vector of length {} for {} players",
                    u.len(),
                    players.len()
                )));
            }
            if u.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            players,
            labels,
            payoffs,
        })
    }

    /// Two-player game from rows of `(u1, u2)` cells.
    pub fn bimatrix(
        row_labels: &[&str],
        col_labels: &[&str],
        cells: &[Vec<(f64, f64)>],
    ) -> Result<Self> {
        if cells.len() != row_labels.len() || cells.iter().any(|r| r.len() != col_labels.len()) {
            return Err(Error::DimensionMismatch("bimatrix cells".into()));
        }
        let payoffs = cells
            .iter()
            .flat_map(|r| r.iter().map(|&(a, b)| vec![a, b]))
            .collect();
        Self::new(
            vec![1, 2],
            vec![to_strings(row_labels), to_strings(col_labels)],
            payoffs,
        )
    }

    /// Two-player zero-sum game from player 1's payoff matrix.
    pub fn zero_sum(row_labels: &[String], col_labels: &[String], a: &[Vec<f64>]) -> Result<Self> {
        if a.len() != row_labels.len() || a.iter().any(|r| r.len() != col_labels.len()) {
            return Err(Error::DimensionMismatch("zero-sum matrix".into()));
        }
        let payoffs = a
            .iter()
            .flat_map(|r| r.iter().map(|&x| vec![x, -x]))
            .collect();
        Self::new(
            vec![1, 2],
            vec![row_labels.to_vec(), col_labels.to_vec()],
            payoffs,
        )
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    /// Position of `player` in [`Self::players`].
    pub fn position(&self, player: PlayerId) -> Option<usize> {
        self.players.iter().position(|&p| p == player)
    }

    pub fn position_of(&self, player: PlayerId) -> Result<usize> {
        self.position(player).ok_or(Error::UnknownPlayer(player))
    }

    pub fn labels(&self, pos: usize) -> &[String] {
        &self.labels[pos]
    }

    pub fn all_labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn strategy_count(&self, pos: usize) -> usize {
        self.labels[pos].len()
    }

    pub fn label_index(&self, pos: usize, label: &str) -> Option<usize> {
        self.labels[pos].iter().position(|l| l == label)
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs.len()
    }

    pub fn payoff_table(&self) -> &[Vec<f64>] {
        &self.payoffs
    }

    /// Flat index of a pure profile.
    pub fn flat_index(&self, pure: &[usize]) -> usize {
        pure.iter()
            .zip(&self.labels)
            .fold(0, |acc, (&s, l)| acc * l.len() + s)
    }

    /// Payoff vector of a pure profile.
    pub fn payoff(&self, pure: &[usize]) -> &[f64] {
        &self.payoffs[self.flat_index(pure)]
    }

    /// Iterates over all pure profiles in row-major order.
    pub fn pure_profiles(&self) -> PureProfiles {
        PureProfiles::new(self.labels.iter().map(Vec::len).collect())
    }

    /// Player-1 payoff matrix of a two-player game.
    pub fn row_matrix(&self) -> Vec<Vec<f64>> {
        self.matrix_for(0)
    }

    /// Payoff matrix of the player at `pos` in a two-player game, indexed by
    /// (player-1 strategy, player-2 strategy).
    pub fn matrix_for(&self, pos: usize) -> Vec<Vec<f64>> {
        let cols = self.labels[1].len();
        self.payoffs
            .chunks(cols)
            .map(|row| row.iter().map(|u| u[pos]).collect())
            .collect()
    }

    /// Same players, labels and payoffs up to `tol`.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        self.players == other.players
            && self.labels == other.labels
            && self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol))
    }

    /// Largest `|u₁ + u₂|` over all profiles of a two-player game.
    pub fn zero_sum_defect(&self) -> f64 {
        self.payoffs
            .iter()
            .map(|u| u.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for StrategicGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.players.len() != 2 {
            for (k, pure) in self.pure_profiles().enumerate() {
                let names: Vec<&str> = pure
                    .iter()
                    .enumerate()
                    .map(|(p, &s)| self.labels[p][s].as_str())
                    .collect();
                writeln!(f, "{names:?} -> {:?}", self.payoffs[k])?;
            }
            return Ok(());
        }
        let width = self
            .labels
            .iter()
            .flatten()
            .map(String::len)
            .max()
            .unwrap_or(1)
            .max(8);
        write!(f, "{:width$}", "")?;
        for c in &self.labels[1] {
            write!(f, " {c:>width$}")?;
        }
        writeln!(f)?;
        for (r, row_label) in self.labels[0].iter().enumerate() {
            write!(f, "{row_label:width$}")?;
            for c in 0..self.labels[1].len() {
                let u = self.payoff(&[r, c]);
                let cell = format!("({}, {})", fmt_num(u[0]), fmt_num(u[1]));
                write!(f, " {cell:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn fmt_num(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        format!("{}", r as i64)
    } else {
        format!("{x:.4}")
    }
}

fn to_strings(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

/// Mixed-radix counter over pure profiles.
#[derive(Debug, Clone)]
pub struct PureProfiles {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl PureProfiles {
    fn new(radices: Vec<usize>) -> Self {
        let next = if radices.iter().all(|&r| r > 0) {
            Some(vec![0; radices.len()])
        } else {
            None
        };
        Self { radices, next }
    }
}

impl Iterator for PureProfiles {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.radices[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// A probability vector over one player's strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    /// Accepts weights `≥ −1e-12` that sum to 1 within `1e-9`.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < -1e-12) {
            return Err(Error::InvalidDistribution(format!(
                "negative or non-finite weight in {weights:?}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Self(weights))
    }

    pub fn pure(n: usize, k: usize) -> Self {
        let mut w = vec![0.0; n];
        w[k] = 1.0;
        Self(w)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// Uniform over the listed strategies.
    pub fn uniform_over(n: usize, support: &[usize]) -> Self {
        let mut w = vec![0.0; n];
        for &k in support {
            w[k] = 1.0 / support.len() as f64;
        }
        Self(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices with weight above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.0.len()).filter(|&k| self.0[k] > tol).collect()
    }

    /// `Some(k)` if all mass (within `tol`) sits on strategy `k`.
    pub fn as_pure(&self, tol: f64) -> Option<usize> {
        self.0.iter().position(|&w| (w - 1.0).abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.0.len() != other.0.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// One mixed strategy per player, in the game's player order.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile(Vec<MixedStrategy>);

impl Profile {
    pub fn new(game: &StrategicGame, strategies: Vec<MixedStrategy>) -> Result<Self> {
        let p = Self(strategies);
        p.check(game)?;
        Ok(p)
    }

    /// Profile without a compatibility check; see [`Profile::check`].
    pub fn from_strategies(strategies: Vec<MixedStrategy>) -> Self {
        Self(strategies)
    }

    pub fn pure(game: &StrategicGame, pure: &[usize]) -> Result<Self> {
        if pure.len() != game.player_count() {
            return Err(Error::DimensionMismatch("pure profile length".into()));
        }
        let strategies = pure
            .iter()
            .enumerate()
            .map(|(p, &s)| {
                if s < game.strategy_count(p) {
                    Ok(MixedStrategy::pure(game.strategy_count(p), s))
                } else {
                    Err(Error::DimensionMismatch(format!("strategy index {s}")))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self(strategies))
    }

    /// Pure profile from strategy labels.
    pub fn pure_labels(game: &StrategicGame, labels: &[&str]) -> Result<Self> {
        let idx = labels
            .iter()
            .enumerate()
            .map(|(p, l)| {
                game.label_index(p, l)
                    .ok_or_else(|| Error::Structure(format!("unknown strategy {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::pure(game, &idx)
    }

    pub fn check(&self, game: &StrategicGame) -> Result<()> {
        if self.0.len() != game.player_count() {
            return Err(Error::DimensionMismatch(format!(
                "profile has {} strategies, game has {} players",
                self.0.len(),
                game.player_count()
            )));
        }
        for (p, s) in self.0.iter().enumerate() {
            if s.len() != game.strategy_count(p) {
                return Err(Error::DimensionMismatch(format!(
                    "player {} strategy has {} weights, expected {}",
                    game.players()[p],
                    s.len(),
                    game.strategy_count(p)
                )));
            }
        }
        Ok(())
    }

    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.0
    }

    pub fn strategy(&self, pos: usize) -> &MixedStrategy {
        &self.0[pos]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.0.len() != other.0.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Expected payoff of every player under a mixed profile.
pub fn expected_payoff(game: &StrategicGame, profile: &Profile) -> Result<Vec<f64>> {
    profile.check(game)?;
    let mut total = vec![0.0; game.player_count()];
    for pure in game.pure_profiles() {
        let w: f64 = pure
            .iter()
            .enumerate()
            .map(|(p, &s)| profile.strategy(p).weights()[s])
            .product();
        if w == 0.0 {
            continue;
        }
        for (t, u) in total.iter_mut().zip(game.payoff(&pure)) {
            *t += w * u;
        }
    }
    Ok(total)
}

/// Payoff to the player at `pos` for each of their pure strategies while
/// everyone else follows `profile` (the player's own entry is ignored).
pub fn pure_strategy_payoffs(
    game: &StrategicGame,
    pos: usize,
    profile: &Profile,
) -> Result<Vec<f64>> {
    profile.check(game)?;
    let mut out = vec![0.0; game.strategy_count(pos)];
    for pure in game.pure_profiles() {
        let w: f64 = pure
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != pos)
            .map(|(p, &s)| profile.strategy(p).weights()[s])
            .product();
        if w != 0.0 {
            out[pure[pos]] += w * game.payoff(&pure)[pos];
        }
    }
    Ok(out)
}

/// Best-reply value and the pure best replies, sorted by label.
#[derive(Debug, Clone, PartialEq)]
pub struct BestReplies {
    pub value: f64,
    pub strategies: Vec<usize>,
}

/// Tolerance for treating two pure payoffs as tied best replies.
pub const TIE_TOL: f64 = 1e-9;

/// Best replies of `player` to the other players' strategies in `profile`.
pub fn best_responses(
    game: &StrategicGame,
    player: PlayerId,
    profile: &Profile,
) -> Result<BestReplies> {
    let pos = game.position_of(player)?;
    let payoffs = pure_strategy_payoffs(game, pos, profile)?;
    let value = payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut strategies: Vec<usize> = (0..payoffs.len())
        .filter(|&k| payoffs[k] >= value - TIE_TOL)
        .collect();
    strategies.sort_by(|&a, &b| game.labels(pos)[a].cmp(&game.labels(pos)[b]));
    Ok(BestReplies { value, strategies })
}

/// No player can gain more than `tol` by a pure deviation.
pub fn is_nash(game: &StrategicGame, profile: &Profile, tol: f64) -> bool {
    let Ok(current) = expected_payoff(game, profile) else {
        return false;
    };
    (0..game.player_count()).all(|pos| {
        pure_strategy_payoffs(game, pos, profile)
            .map(|alts| alts.iter().all(|&u| u <= current[pos] + tol))
            .unwrap_or(false)
    })
}

/// Solution of a two-player zero-sum game.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSumSolution {
    /// Value to player 1.
    pub value: f64,
    pub row_strategy: MixedStrategy,
    pub col_strategy: MixedStrategy,
    /// `min_j (pᵀA)_j`: what the row strategy guarantees player 1.
    pub row_guarantee: f64,
    /// `max_i (Aq)_i`: the most player 1 can get against the column strategy.
    pub col_guarantee: f64,
}

/// Minimax value and one optimal strategy per player via linear programming.
pub fn zero_sum_value(game: &StrategicGame) -> Result<ZeroSumSolution> {
    if game.player_count() != 2 {
        return Err(Error::Structure("zero-sum value needs two players".into()));
    }
    let defect = game.zero_sum_defect();
    if defect > 1e-9 {
        return Err(Error::NotZeroSum(defect));
    }
    let a = game.row_matrix();
    let min = a.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - min;
    let shifted: Vec<Vec<f64>> = a
        .iter()
        .map(|r| r.iter().map(|x| x + shift).collect())
        .collect();
    let lp = linalg::solve_packing_lp(&shifted);
    let normalise = |v: &[f64]| -> Vec<f64> {
        let s: f64 = v.iter().sum();
        v.iter().map(|x| x / s).collect()
    };
    let p = normalise(&lp.dual);
    let q = normalise(&lp.primal);
    let value = 1.0 / lp.objective - shift;
    let rows = a.len();
    let cols = a[0].len();
    let row_guarantee = (0..cols)
        .map(|j| (0..rows).map(|i| p[i] * a[i][j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let col_guarantee = a
        .iter()
        .map(|r| r.iter().zip(&q).map(|(x, y)| x * y).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ZeroSumSolution {
        value,
        row_strategy: MixedStrategy::new(p)?,
        col_strategy: MixedStrategy::new(q)?,
        row_guarantee,
        col_guarantee,
    })
}

/// Result of support enumeration.
#[derive(Debug, Clone, Default)]
pub struct NashEnumeration {
    pub equilibria: Vec<Profile>,
    /// Support pairs `(rows, cols)` whose indifference system was singular.
    pub skipped: Vec<(Vec<usize>, Vec<usize>)>,
}

/// All equilibria reachable by equal-size support enumeration of a
/// two-player game. Degenerate support pairs are skipped and listed.
pub fn nash_support_enumeration(game: &StrategicGame) -> Result<NashEnumeration> {
    const TOL: f64 = 1e-9;
    if game.player_count() != 2 {
        return Err(Error::Structure(
            "support enumeration needs two players".into(),
        ));
    }
    let (m, n) = (game.strategy_count(0), game.strategy_count(1));
    if m > SUPPORT_ENUMERATION_LIMIT || n > SUPPORT_ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!(
            "{m}x{n} game exceeds {SUPPORT_ENUMERATION_LIMIT} strategies per player"
        )));
    }
    let a = game.matrix_for(0);
    let b = game.matrix_for(1);
    let mut out = NashEnumeration::default();

    for k in 1..=m.min(n) {
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                // q makes every row in `rows` earn the same against it
                let q = indifference(&rows, &cols, |i, j| a[i][j]);
                // x makes every column in `cols` earn the same against it
                let x = indifference(&cols, &rows, |j, i| b[i][j]);
                let (Some((q, v)), Some((x, w))) = (q, x) else {
                    out.skipped.push((rows.clone(), cols.clone()));
                    continue;
                };
                if q.iter().chain(&x).any(|&t| t < -TOL) {
                    continue;
                }
                let mut row_w = vec![0.0; m];
                for (&i, &t) in rows.iter().zip(&x) {
                    row_w[i] = t.max(0.0);
                }
                let mut col_w = vec![0.0; n];
                for (&j, &t) in cols.iter().zip(&q) {
                    col_w[j] = t.max(0.0);
                }
                renormalise(&mut row_w);
                renormalise(&mut col_w);
                let row_ok =
                    (0..m).all(|i| (0..n).map(|j| a[i][j] * col_w[j]).sum::<f64>() <= v + TOL);
                let col_ok =
                    (0..n).all(|j| (0..m).map(|i| b[i][j] * row_w[i]).sum::<f64>() <= w + TOL);
                if !(row_ok && col_ok) {
                    continue;
                }
                let profile =
                    Profile::from_strategies(vec![MixedStrategy(row_w), MixedStrategy(col_w)]);
                if !out
                    .equilibria
                    .iter()
                    .any(|e| e.max_abs_diff(&profile) < TOL)
                {
                    out.equilibria.push(profile);
                }
            }
        }
    }
    Ok(out)
}

fn renormalise(w: &mut [f64]) {
    let s: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= s;
    }
}

/// Solves `Σ_{j∈cols} payoff(i, j)·y_j = v  (i ∈ rows)`, `Σ y_j = 1` for
/// `(y, v)`.
fn indifference(
    rows: &[usize],
    cols: &[usize],
    payoff: impl Fn(usize, usize) -> f64,
) -> Option<(Vec<f64>, f64)> {
    let k = cols.len();
    let mut mat = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for &i in rows {
        let mut r: Vec<f64> = cols.iter().map(|&j| payoff(i, j)).collect();
        r.push(-1.0);
        mat.push(r);
        rhs.push(0.0);
    }
    let mut sum = vec![1.0; k];
    sum.push(0.0);
    mat.push(sum);
    rhs.push(1.0);
    let mut sol = linalg::solve(mat, rhs)?;
    let v = sol.pop()?;
    Some((sol, v))
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A strategic game with its strategy equivalence classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub game: StrategicGame,
    /// `classes[player][r]` lists the original strategies merged into
    /// reduced strategy `r`, in original order.
    pub classes: Vec<Vec<Vec<usize>>>,
}

/// Merges payoff-equivalent strategies (identical payoffs for every player
/// against every opponent profile). Classes keep first-occurrence order; a
/// merged class is labelled `{a, b, ...}`.
pub fn reduce_strategic(game: &StrategicGame) -> StrategicGame {
    reduce_with_classes(game).game
}

pub fn reduce_with_classes(game: &StrategicGame) -> Reduction {
    let np = game.player_count();
    let mut classes: Vec<Vec<Vec<usize>>> = Vec::with_capacity(np);
    for pos in 0..np {
        let slices: Vec<Vec<&[f64]>> = (0..game.strategy_count(pos))
            .map(|s| {
                game.pure_profiles()
                    .filter(|pure| pure[pos] == s)
                    .map(|pure| game.payoff(&pure))
                    .collect()
            })
            .collect();
        let mut cls: Vec<Vec<usize>> = Vec::new();
        for s in 0..slices.len() {
            let same = |t: usize| {
                slices[s].iter().zip(&slices[t]).all(|(x, y)| {
                    x.iter()
                        .zip(y.iter())
                        .all(|(a, b)| (a - b).abs() <= EQUIVALENCE_TOL)
                })
            };
            match cls.iter_mut().find(|c| same(c[0])) {
                Some(c) => c.push(s),
                None => cls.push(vec![s]),
            }
        }
        classes.push(cls);
    }
    let labels: Vec<Vec<String>> = classes
        .iter()
        .enumerate()
        .map(|(pos, cls)| {
            cls.iter()
                .map(|c| {
                    if c.len() == 1 {
                        game.labels(pos)[c[0]].clone()
                    } else {
                        let names: Vec<&str> =
                            c.iter().map(|&s| game.labels(pos)[s].as_str()).collect();
                        format!("{{{}}}", names.join(", "))
                    }
                })
                .collect()
        })
        .collect();
    let reps = PureProfiles::new(classes.iter().map(Vec::len).collect());
    let payoffs = reps
        .map(|r| {
            let original: Vec<usize> = r
                .iter()
                .enumerate()
                .map(|(p, &c)| classes[p][c][0])
                .collect();
            game.payoff(&original).to_vec()
        })
        .collect();
    let reduced = StrategicGame::new(game.players.clone(), labels, payoffs)
        .expect("reduction preserves game structure");
    Reduction {
        game: reduced,
        classes,
    }
}

/// An information set: decision nodes of one player that share an action list.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSet {
    pub id: String,
    pub player: PlayerId,
    pub actions: Vec<String>,
}

/// A node of a game tree without chance moves.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Decision {
        label: String,
        info_set: usize,
        children: Vec<Node>,
    },
    Leaf {
        label: String,
        payoffs: Vec<f64>,
    },
}

/// A finite extensive-form game with information sets.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensiveGame {
    players: Vec<PlayerId>,
    info_sets: Vec<InfoSet>,
    root: Node,
}

impl ExtensiveGame {
    pub fn new(players: Vec<PlayerId>, info_sets: Vec<InfoSet>, root: Node) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Structure("game has no players".into()));
        }
        for s in &info_sets {
            if !players.contains(&s.player) {
                return Err(Error::Structure(format!(
                    "information set {} belongs to unknown player {}",
                    s.id, s.player
                )));
            }
            if s.actions.is_empty() {
                return Err(Error::Structure(format!(
                    "information set {} has no actions",
                    s.id
                )));
            }
        }
        let mut used = vec![false; info_sets.len()];
        check_node(&root, &info_sets, players.len(), &mut used)?;
        if let Some(k) = used.iter().position(|u| !u) {
            return Err(Error::Structure(format!(
                "information set {} contains no node",
                info_sets[k].id
            )));
        }
        Ok(Self {
            players,
            info_sets,
            root,
        })
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn info_sets(&self) -> &[InfoSet] {
        &self.info_sets
    }

    pub fn root(&self) -> &Node {
        &self.root
    }
}

fn check_node(node: &Node, sets: &[InfoSet], players: usize, used: &mut [bool]) -> Result<()> {
    match node {
        Node::Leaf { label, payoffs } => {
            if payoffs.len() != players {
                return Err(Error::Structure(format!(
                    "leaf {label} has {} payoffs for {players} players",
                    payoffs.len()
                )));
            }
            if payoffs.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
            Ok(())
        }
        Node::Decision {
            label,
            info_set,
            children,
        } => {
            let set = sets.get(*info_set).ok_or_else(|| {
                Error::Structure(format!("node {label} refers to missing information set"))
            })?;
            if children.len() != set.actions.len() {
                return Err(Error::Structure(format!(
                    "node {label} has {} children but information set {} has {} actions",
                    children.len(),
                    set.id,
                    set.actions.len()
                )));
            }
            used[*info_set] = true;
            children
                .iter()
                .try_for_each(|c| check_node(c, sets, players, used))
        }
    }
}

/// Strategic form: a pure strategy picks one action per information set of
/// its owner (sets in declaration order, labels concatenated).
pub fn strategic_from_extensive(ext: &ExtensiveGame) -> Result<StrategicGame> {
    // for each player: the indices of their information sets
    let owned: Vec<Vec<usize>> = ext
        .players
        .iter()
        .map(|&p| {
            (0..ext.info_sets.len())
                .filter(|&s| ext.info_sets[s].player == p)
                .collect()
        })
        .collect();
    let plans: Vec<Vec<Vec<usize>>> = owned
        .iter()
        .map(|sets| {
            PureProfiles::new(
                sets.iter()
                    .map(|&s| ext.info_sets[s].actions.len())
                    .collect(),
            )
            .collect()
        })
        .collect();
    let labels: Vec<Vec<String>> = owned
        .iter()
        .zip(&plans)
        .map(|(sets, plans)| {
            plans
                .iter()
                .map(|plan| {
                    if sets.is_empty() {
                        "-".to_string()
                    } else {
                        sets.iter()
                            .zip(plan)
                            .map(|(&s, &a)| ext.info_sets[s].actions[a].as_str())
                            .collect()
                    }
                })
                .collect()
        })
        .collect();
    // info set -> (player position, slot in that player's plan)
    let mut slot = vec![(0, 0); ext.info_sets.len()];
    for (pos, sets) in owned.iter().enumerate() {
        for (k, &s) in sets.iter().enumerate() {
            slot[s] = (pos, k);
        }
    }
    let radices: Vec<usize> = plans.iter().map(Vec::len).collect();
    let mut payoffs = Vec::new();
    for pure in PureProfiles::new(radices) {
        let mut node = &ext.root;
        loop {
            match node {
                Node::Leaf { payoffs: u, .. } => {
                    payoffs.push(u.clone());
                    break;
                }
                Node::Decision {
                    info_set, children, ..
                } => {
                    let (pos, k) = slot[*info_set];
                    node = &children[plans[pos][pure[pos]][k]];
                }
            }
        }
    }
    StrategicGame::new(ext.players.clone(), labels, payoffs)
}
