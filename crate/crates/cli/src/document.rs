//! JSON documents: families (`family/v1`), single games (`game/v1`) and
//! game trees (`extensive/v1`).

use std::collections::BTreeMap;

use qpfu_core::gamecore::{ExtensiveGame, InfoSet, Node, PlayerId, StrategicGame};
use qpfu_core::gate::GateExpr;
use qpfu_core::pennyflip::{self, discretize, Gate, Variant};
use qpfu_core::unaware::{validate_family, GameFamily, View};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FAMILY_SCHEMA: &str = "family/v1";
pub const GAME_SCHEMA: &str = "game/v1";
pub const EXTENSIVE_SCHEMA: &str = "extensive/v1";

/// Names accepted wherever a game is referenced and not found in the
/// document's own `games` table.
pub const PRESET_GAMES: [&str; 7] = ["CC", "QC", "CQ", "QQ", "example3", "gamma1", "gamma2"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub schema: String,
    pub players: Vec<PlayerId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub games: BTreeMap<String, GameSpec>,
    pub views: Vec<ViewEntry>,
    pub otherwise: GameRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewEntry {
    pub view: String,
    pub game: GameRef,
}

/// A game given inline or by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameRef {
    Name(String),
    Inline(GameSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameSpec {
    Matrix(MatrixSpec),
    Quantum(QuantumSpec),
}

/// Two-player game as a payoff table, rows for the first player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    #[serde(default = "default_players")]
    pub players: Vec<PlayerId>,
    pub strategies: Vec<Vec<String>>,
    pub payoffs: Vec<Vec<Cell>>,
}

fn default_players() -> Vec<PlayerId> {
    vec![1, 2]
}

/// A bare number `x` stands for `(x, −x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    ZeroSum(f64),
    Payoffs(Vec<f64>),
}

/// Penny-flip game over gate lists. Player 1's actions are all ordered pairs
/// of `gates1` unless `pairs1` lists them explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSpec {
    pub variant: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gates1: Vec<GateEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs1: Vec<[GateEntry; 2]>,
    pub gates2: Vec<GateEntry>,
}

/// A gate expression, optionally with a short label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateEntry {
    Expr(String),
    Named { name: String, gate: String },
}

impl GateEntry {
    fn to_gate(&self) -> Result<Gate, CliError> {
        let (name, expr) = match self {
            Self::Expr(e) => (e.trim(), e.as_str()),
            Self::Named { name, gate } => (name.as_str(), gate.as_str()),
        };
        let parsed: GateExpr = expr
            .parse()
            .map_err(|e| CliError::Invalid(format!("gate {expr:?}: {e}")))?;
        Ok(Gate::new(name, parsed.unitary()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensiveDocument {
    pub schema: String,
    pub players: Vec<PlayerId>,
    pub info_sets: Vec<InfoSetDoc>,
    pub root: NodeDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoSetDoc {
    pub id: String,
    pub player: PlayerId,
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeDoc {
    Decision {
        label: String,
        info_set: String,
        children: Vec<NodeDoc>,
    },
    Leaf {
        label: String,
        payoffs: Vec<f64>,
    },
}

fn check_schema(found: &str, expected: &str) -> Result<(), CliError> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "schema is {found:?}, expected {expected:?}"
        )))
    }
}

impl GameSpec {
    pub fn build(&self) -> Result<StrategicGame, CliError> {
        match self {
            Self::Matrix(m) => m.build(),
            Self::Quantum(q) => q.build(),
        }
    }

    pub fn from_game(game: &StrategicGame) -> Result<Self, CliError> {
        if game.player_count() != 2 {
            return Err(CliError::Invalid(format!(
                "only two-player games can be written, this one has {}",
                game.player_count()
            )));
        }
        let payoffs = (0..game.strategy_count(0))
            .map(|r| {
                (0..game.strategy_count(1))
                    .map(|c| match game.payoff(&[r, c]) {
                        [a, b] if *b == -*a => Cell::ZeroSum(*a),
                        u => Cell::Payoffs(u.to_vec()),
                    })
                    .collect()
            })
            .collect();
        Ok(Self::Matrix(MatrixSpec {
            players: game.players().to_vec(),
            strategies: game.all_labels().to_vec(),
            payoffs,
        }))
    }
}

impl MatrixSpec {
    fn build(&self) -> Result<StrategicGame, CliError> {
        if self.players.len() != 2 || self.strategies.len() != 2 {
            return Err(CliError::Invalid(
                "matrix games need exactly two players and two strategy lists".into(),
            ));
        }
        let (rows, cols) = (self.strategies[0].len(), self.strategies[1].len());
        if self.payoffs.len() != rows || self.payoffs.iter().any(|r| r.len() != cols) {
            return Err(CliError::Invalid(format!(
                "payoff table must be {rows} rows of {cols} cells"
            )));
        }
        let mut table = Vec::with_capacity(rows * cols);
        for row in &self.payoffs {
            for cell in row {
                table.push(match cell {
                    Cell::ZeroSum(x) => vec![*x, -*x],
                    Cell::Payoffs(u) if u.len() == 2 => u.clone(),
                    Cell::Payoffs(u) => {
                        return Err(CliError::Invalid(format!(
                            "payoff cell {u:?} must hold one value per player"
                        )))
                    }
                });
            }
        }
        Ok(StrategicGame::new(
            self.players.clone(),
            self.strategies.clone(),
            table,
        )?)
    }
}

impl QuantumSpec {
    fn build(&self) -> Result<StrategicGame, CliError> {
        let variant: Variant = self.variant.parse()?;
        let gates = |list: &[GateEntry]| {
            list.iter()
                .map(GateEntry::to_gate)
                .collect::<Result<Vec<_>, _>>()
        };
        let first = match (self.gates1.is_empty(), self.pairs1.is_empty()) {
            (false, true) => pennyflip::all_pairs(&gates(&self.gates1)?),
            (true, false) => self
                .pairs1
                .iter()
                .map(|[a, b]| Ok((a.to_gate()?, b.to_gate()?)))
                .collect::<Result<Vec<_>, CliError>>()?,
            _ => {
                return Err(CliError::Invalid(
                    "quantum games need exactly one of gates1 and pairs1".into(),
                ))
            }
        };
        Ok(discretize(variant, &first, &gates(&self.gates2)?)?)
    }
}

/// Game registered under a preset name.
pub fn preset_game(name: &str) -> Option<StrategicGame> {
    Some(match name {
        "example3" => pennyflip::example3_matrix(),
        "gamma1" => pennyflip::gamma1(),
        "gamma2" => pennyflip::gamma2(),
        _ => pennyflip::grid_game(name.parse().ok()?),
    })
}

/// Parses a canonical view string over `players`.
pub fn parse_view(s: &str, players: &[PlayerId]) -> Result<View, CliError> {
    let v: View = s.parse().map_err(|e| CliError::Invalid(format!("{e}")))?;
    if let Some(p) = v.ids().iter().find(|p| !players.contains(p)) {
        return Err(CliError::Invalid(format!(
            "view {s:?} names player {p}, who is not in the family"
        )));
    }
    if !v.is_canonical() {
        return Err(CliError::Invalid(format!(
            "view {s:?} repeats a player consecutively; its canonical form is {:?}",
            v.canonical().to_string()
        )));
    }
    Ok(v)
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(CliError::from_json)
}

impl FamilyDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Self = parse_json(text)?;
        check_schema(&doc.schema, FAMILY_SCHEMA)?;
        Ok(doc)
    }

    fn resolve(
        &self,
        r: &GameRef,
        cache: &mut BTreeMap<String, StrategicGame>,
    ) -> Result<StrategicGame, CliError> {
        match r {
            GameRef::Inline(spec) => spec.build(),
            GameRef::Name(name) => {
                if let Some(g) = cache.get(name) {
                    return Ok(g.clone());
                }
                let game = match self.games.get(name) {
                    Some(spec) => spec.build()?,
                    None => preset_game(name).ok_or_else(|| {
                        CliError::Invalid(format!(
                            "unknown game reference {name:?}; presets are {}",
                            PRESET_GAMES.join(", ")
                        ))
                    })?,
                };
                cache.insert(name.clone(), game.clone());
                Ok(game)
            }
        }
    }

    /// Builds the family without checking the axioms.
    pub fn to_family(&self) -> Result<GameFamily, CliError> {
        let mut cache = BTreeMap::new();
        let mut explicit = BTreeMap::new();
        for entry in &self.views {
            let v = parse_view(&entry.view, &self.players)?;
            let game = self.resolve(&entry.game, &mut cache)?;
            if explicit.insert(v, game).is_some() {
                return Err(CliError::Invalid(format!(
                    "view {:?} is listed twice",
                    entry.view
                )));
            }
        }
        let longest = explicit.keys().map(View::len).max().unwrap_or(0);
        let depth = self.depth.unwrap_or(longest);
        let fallback = self.resolve(&self.otherwise, &mut cache)?;
        Ok(GameFamily::new(
            self.players.clone(),
            depth,
            explicit,
            fallback,
        )?)
    }

    /// Document listing each distinct game once in the `games` table.
    pub fn from_family(f: &GameFamily) -> Result<Self, CliError> {
        let mut distinct: Vec<&StrategicGame> = Vec::new();
        let mut name = |g| {
            let k = distinct.iter().position(|d| *d == g).unwrap_or_else(|| {
                distinct.push(g);
                distinct.len() - 1
            });
            GameRef::Name(format!("g{}", k + 1))
        };
        let views: Vec<ViewEntry> = f
            .explicit()
            .iter()
            .map(|(v, g)| ViewEntry {
                view: v.to_string(),
                game: name(g),
            })
            .collect();
        let otherwise = name(f.fallback());
        let games = distinct
            .iter()
            .enumerate()
            .map(|(k, g)| Ok((format!("g{}", k + 1), GameSpec::from_game(g)?)))
            .collect::<Result<BTreeMap<_, _>, CliError>>()?;
        Ok(Self {
            schema: FAMILY_SCHEMA.into(),
            players: f.players().to_vec(),
            depth: Some(f.depth()),
            games,
            views,
            otherwise,
        })
    }
}

/// Parses a family document and checks the axioms.
pub fn parse_family(text: &str) -> Result<GameFamily, CliError> {
    let f = FamilyDocument::parse(text)?.to_family()?;
    let report = validate_family(&f);
    if report.is_valid() {
        Ok(f)
    } else {
        Err(CliError::Validation(
            report.violations.iter().map(ToString::to_string).collect(),
        ))
    }
}

pub fn serialize_family(f: &GameFamily) -> Result<String, CliError> {
    let doc = FamilyDocument::from_family(f)?;
    Ok(serde_json::to_string_pretty(&doc).expect("documents serialize"))
}

/// Parses a `game/v1` document.
pub fn parse_game(text: &str) -> Result<StrategicGame, CliError> {
    let mut value: serde_json::Value = parse_json(text)?;
    let schema = value
        .as_object_mut()
        .and_then(|o| o.remove("schema"))
        .ok_or_else(|| CliError::Invalid("missing schema".into()))?;
    check_schema(schema.as_str().unwrap_or_default(), GAME_SCHEMA)?;
    let spec: GameSpec = serde_json::from_value(value)
        .map_err(|e| CliError::Invalid(format!("not a matrix or quantum game: {e}")))?;
    spec.build()
}

impl ExtensiveDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Self = parse_json(text)?;
        check_schema(&doc.schema, EXTENSIVE_SCHEMA)?;
        Ok(doc)
    }

    pub fn to_game(&self) -> Result<ExtensiveGame, CliError> {
        let index: BTreeMap<&str, usize> = self
            .info_sets
            .iter()
            .enumerate()
            .map(|(k, s)| (s.id.as_str(), k))
            .collect();
        if index.len() != self.info_sets.len() {
            return Err(CliError::Invalid(
                "information set ids must be unique".into(),
            ));
        }
        let sets = self
            .info_sets
            .iter()
            .map(|s| InfoSet {
                id: s.id.clone(),
                player: s.player,
                actions: s.actions.clone(),
            })
            .collect();
        let root = node(&self.root, &index)?;
        Ok(ExtensiveGame::new(self.players.clone(), sets, root)?)
    }
}

fn node(doc: &NodeDoc, index: &BTreeMap<&str, usize>) -> Result<Node, CliError> {
    Ok(match doc {
        NodeDoc::Leaf { label, payoffs } => Node::Leaf {
            label: label.clone(),
            payoffs: payoffs.clone(),
        },
        NodeDoc::Decision {
            label,
            info_set,
            children,
        } => Node::Decision {
            label: label.clone(),
            info_set: *index.get(info_set.as_str()).ok_or_else(|| {
                CliError::Invalid(format!(
                    "node {label} refers to unknown information set {info_set:?}"
                ))
            })?,
            children: children
                .iter()
                .map(|c| node(c, index))
                .collect::<Result<_, _>>()?,
        },
    })
}

/// A game read from either a `game/v1` or an `extensive/v1` document.
pub enum GameInput {
    Strategic(StrategicGame),
    Extensive(ExtensiveGame),
}

pub fn parse_game_input(text: &str) -> Result<GameInput, CliError> {
    let value: serde_json::Value = parse_json(text)?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(EXTENSIVE_SCHEMA) => Ok(GameInput::Extensive(
            ExtensiveDocument::parse(text)?.to_game()?,
        )),
        Some(GAME_SCHEMA) => Ok(GameInput::Strategic(parse_game(text)?)),
        Some(other) => Err(CliError::Invalid(format!(
            "schema {other:?} is neither {GAME_SCHEMA:?} nor {EXTENSIVE_SCHEMA:?}"
        ))),
        None => Err(CliError::Invalid("missing schema".into())),
    }
}
