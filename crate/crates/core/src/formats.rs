//! Text formats for digraphs and games, and JSON certificates that can be
//! re-verified from their own contents.
//!
//! Digraph: a header line `n m`, then `m` lines `u v` (0-based, one arc
//! each, written in lexicographic order). Lines starting with `#` and blank
//! lines are ignored.
//!
//! Game: a header line `m n`, `m` lines of `n` characters from `{0,1}` for
//! `A`, one blank line, then `m` lines for `B`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::digraph::{certify_kl, Digraph, KlVerdict};
use crate::error::{Error, Result};
use crate::game::WinLoseGame;
use crate::residues::{HaightCertificate, ResidueSet};
use crate::scalar::{parse_rational, ExactScalar};
use crate::wsne::{check_wsne, exhaustive_search, ExhaustiveOutcome, MixedStrategy};
use crate::Rational;

pub const SCHEMA: &str = "wsne-forge/certificate/v1";

pub fn toolchain() -> String {
    format!("wsne-forge {}", env!("CARGO_PKG_VERSION"))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut out = format!("{} {}\n", d.vertex_count(), d.arc_count());
    for (u, v) in d.arcs() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut field = || {
        it.next()
            .ok_or_else(|| parse_err(line, format!("expected two integers, got `{text}`")))?
            .parse::<usize>()
            .map_err(|e| parse_err(line, format!("`{text}`: {e}")))
    };
    let pair = (field()?, field()?);
    if it.next().is_some() {
        return Err(parse_err(line, format!("trailing fields in `{text}`")));
    }
    Ok(pair)
}

pub fn read_digraph(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let (n, m) = parse_pair(hline, header)?;
    let mut d = Digraph::new(n);
    let mut seen = 0;
    for (line, body) in lines {
        let (u, v) = parse_pair(line, body)?;
        if u >= n || v >= n {
            return Err(parse_err(line, format!("arc {u} {v} leaves the {n} vertices")));
        }
        if d.has_arc(u, v) {
            return Err(parse_err(line, format!("duplicate arc {u} {v}")));
        }
        d.add_arc(u, v)?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(hline, format!("header announces {m} arcs, found {seen}")));
    }
    Ok(d)
}

fn matrix_lines(g: &WinLoseGame, get: impl Fn(usize, usize) -> bool) -> Vec<String> {
    (0..g.rows())
        .map(|i| (0..g.cols()).map(|j| if get(i, j) { '1' } else { '0' }).collect())
        .collect()
}

pub fn write_game(g: &WinLoseGame) -> String {
    let mut out = format!("{} {}\n", g.rows(), g.cols());
    for row in matrix_lines(g, |i, j| g.a(i, j)) {
        out.push_str(&row);
        out.push('\n');
    }
    out.push('\n');
    for row in matrix_lines(g, |i, j| g.b(i, j)) {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn parse_matrix_row(line: usize, text: &str, cols: usize) -> Result<Vec<u8>> {
    if text.chars().count() != cols {
        return Err(parse_err(line, format!("expected {cols} entries, got `{text}`")));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(parse_err(line, format!("illegal character `{other}`"))),
        })
        .collect()
}

pub fn read_game(text: &str) -> Result<WinLoseGame> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.first().ok_or_else(|| parse_err(1, "missing header `m n`"))?;
    let (m, n) = parse_pair(1, header)?;
    if m == 0 || n == 0 {
        return Err(parse_err(1, "games need at least one row and one column"));
    }
    let row_at = |idx: usize| -> Result<Vec<u8>> {
        let text = lines
            .get(idx)
            .ok_or_else(|| parse_err(idx + 1, "unexpected end of input"))?;
        parse_matrix_row(idx + 1, text, n)
    };
    let a = (1..=m).map(row_at).collect::<Result<Vec<_>>>()?;
    match lines.get(m + 1) {
        Some(&"") => {}
        Some(l) => return Err(parse_err(m + 2, format!("expected blank separator, got `{l}`"))),
        None => return Err(parse_err(m + 2, "missing B matrix")),
    }
    let b = (m + 2..2 * m + 2).map(row_at).collect::<Result<Vec<_>>>()?;
    if let Some((i, l)) = lines.iter().enumerate().skip(2 * m + 2).find(|(_, l)| !l.is_empty()) {
        return Err(parse_err(i + 1, format!("trailing content `{l}`")));
    }
    WinLoseGame::from_matrices(&a, &b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphPayload {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GamePayload {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaightPayload {
    pub modulus: usize,
    pub set: Vec<usize>,
    pub kappa: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KlPayload {
    pub k: usize,
    pub l: usize,
    /// `null` when acyclic.
    pub girth: Option<usize>,
    pub digraph: DigraphPayload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessPayload {
    pub game: GamePayload,
    pub eps: String,
    pub p: Vec<String>,
    pub q: Vec<String>,
}

/// How a nonexistence game was built: `game = bipartify(base^power)` where
/// `base` is a `(base_k, base_l)`-digraph, optionally the Cayley digraph of
/// a recorded residue set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Derivation {
    pub haight: Option<HaightPayload>,
    pub base: DigraphPayload,
    pub base_k: usize,
    pub base_l: usize,
    pub power: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonexistencePayload {
    pub game: GamePayload,
    pub k: usize,
    pub eps: String,
    pub pairs_refuted: u64,
    /// Whether the combinatorial decision was also run and found neither a
    /// short cycle nor an undominated set.
    pub characterization_checked: bool,
    pub derivation: Option<Derivation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Haight(HaightPayload),
    KlDigraph(KlPayload),
    WsneWitness(WitnessPayload),
    Nonexistence(NonexistencePayload),
}

impl Claim {
    pub fn kind(&self) -> &'static str {
        match self {
            Claim::Haight(_) => "haight",
            Claim::KlDigraph(_) => "kl_digraph",
            Claim::WsneWitness(_) => "wsne_witness",
            Claim::Nonexistence(_) => "nonexistence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEnvelope {
    pub toolchain: String,
    pub replay: String,
    pub claim: Claim,
}

impl CertificateEnvelope {
    pub fn new(replay: impl Into<String>, claim: Claim) -> Self {
        CertificateEnvelope {
            toolchain: toolchain(),
            replay: replay.into(),
            claim,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnvelope {
    schema: String,
    kind: String,
    toolchain: String,
    replay: String,
    payload: Value,
}

pub fn digraph_payload(d: &Digraph) -> DigraphPayload {
    DigraphPayload {
        n: d.vertex_count(),
        arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
    }
}

pub fn game_payload(g: &WinLoseGame) -> GamePayload {
    GamePayload {
        rows: g.rows(),
        cols: g.cols(),
        a: matrix_lines(g, |i, j| g.a(i, j)),
        b: matrix_lines(g, |i, j| g.b(i, j)),
    }
}

pub fn haight_payload(c: &HaightCertificate) -> HaightPayload {
    HaightPayload {
        modulus: c.modulus(),
        set: c.set().to_vec(),
        kappa: c.kappa(),
    }
}

pub fn rational_strings<S: ExactScalar>(values: &[S]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn schema_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

impl DigraphPayload {
    pub fn to_digraph(&self, path: &str) -> Result<Digraph> {
        let mut d = Digraph::new(self.n);
        for (i, &[u, v]) in self.arcs.iter().enumerate() {
            let at = format!("{path}.arcs[{i}]");
            if u >= self.n || v >= self.n {
                return Err(schema_err(at, format!("arc {u} {v} out of range")));
            }
            if d.has_arc(u, v) {
                return Err(schema_err(at, format!("duplicate arc {u} {v}")));
            }
            d.add_arc(u, v)?;
        }
        Ok(d)
    }
}

impl GamePayload {
    pub fn to_game(&self, path: &str) -> Result<WinLoseGame> {
        let mut mats = Vec::new();
        for (name, lines) in [("a", &self.a), ("b", &self.b)] {
            if lines.len() != self.rows {
                return Err(schema_err(
                    format!("{path}.{name}"),
                    format!("expected {} rows, got {}", self.rows, lines.len()),
                ));
            }
            let rows = lines
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    parse_matrix_row(i + 1, l, self.cols)
                        .map_err(|e| schema_err(format!("{path}.{name}[{i}]"), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            mats.push(rows);
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(schema_err(path, "empty game"));
        }
        WinLoseGame::from_matrices(&mats[0], &mats[1])
    }
}

impl HaightPayload {
    pub fn to_set(&self, path: &str) -> Result<ResidueSet> {
        ResidueSet::new(self.modulus, self.set.iter().copied())
            .map_err(|e| schema_err(format!("{path}.set"), e.to_string()))
    }
}

fn parse_scalar_at<S: ExactScalar>(path: String, text: &str) -> Result<S> {
    parse_rational(text).map_err(|e| schema_err(path, e.to_string()))
}

fn parse_strategy<S: ExactScalar>(path: &str, values: &[String]) -> Result<MixedStrategy<S>> {
    let probs = values
        .iter()
        .enumerate()
        .map(|(i, v)| parse_scalar_at(format!("{path}[{i}]"), v))
        .collect::<Result<Vec<S>>>()?;
    MixedStrategy::new(probs).map_err(|e| schema_err(path, e.to_string()))
}

impl WitnessPayload {
    pub fn decode<S: ExactScalar>(&self) -> Result<(WinLoseGame, MixedStrategy<S>, MixedStrategy<S>, S)> {
        let g = self.game.to_game("payload.game")?;
        let eps = parse_scalar_at("payload.eps".into(), &self.eps)?;
        let p = parse_strategy("payload.p", &self.p)?;
        let q = parse_strategy("payload.q", &self.q)?;
        Ok((g, p, q, eps))
    }
}

fn decode_payload<T: for<'de> Deserialize<'de>>(payload: Value) -> Result<T> {
    if payload.as_object().is_some_and(|m| m.is_empty()) {
        return Err(schema_err("payload", "empty payload"));
    }
    serde_path_to_error::deserialize(payload).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { "payload".to_string() } else { format!("payload.{inner}") };
        schema_err(path, e.inner().to_string())
    })
}

#[derive(Serialize)]
struct OutEnvelope<'a, P> {
    schema: &'a str,
    kind: &'a str,
    toolchain: &'a str,
    replay: &'a str,
    payload: &'a P,
}

fn render<P: Serialize>(env: &CertificateEnvelope, payload: &P) -> String {
    let out = OutEnvelope {
        schema: SCHEMA,
        kind: env.claim.kind(),
        toolchain: &env.toolchain,
        replay: &env.replay,
        payload,
    };
    let mut text = serde_json::to_string_pretty(&out).expect("envelope serializes");
    text.push('\n');
    text
}

pub fn write_certificate(env: &CertificateEnvelope) -> String {
    match &env.claim {
        Claim::Haight(p) => render(env, p),
        Claim::KlDigraph(p) => render(env, p),
        Claim::WsneWitness(p) => render(env, p),
        Claim::Nonexistence(p) => render(env, p),
    }
}

/// Parses a certificate and checks that every embedded value decodes.
pub fn read_certificate(text: &str) -> Result<CertificateEnvelope> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawEnvelope = serde_path_to_error::deserialize(de)
        .map_err(|e| schema_err(e.path().to_string(), e.inner().to_string()))?;
    if raw.schema != SCHEMA {
        return Err(schema_err("schema", format!("unsupported schema `{}`", raw.schema)));
    }
    let claim = match raw.kind.as_str() {
        "haight" => Claim::Haight(decode_payload(raw.payload)?),
        "kl_digraph" => Claim::KlDigraph(decode_payload(raw.payload)?),
        "wsne_witness" => Claim::WsneWitness(decode_payload(raw.payload)?),
        "nonexistence" => Claim::Nonexistence(decode_payload(raw.payload)?),
        other => return Err(schema_err("kind", format!("unknown kind `{other}`"))),
    };
    let env = CertificateEnvelope {
        toolchain: raw.toolchain,
        replay: raw.replay,
        claim,
    };
    validate_fields(&env.claim)?;
    Ok(env)
}

fn validate_fields(claim: &Claim) -> Result<()> {
    match claim {
        Claim::Haight(h) => h.to_set("payload").map(drop),
        Claim::KlDigraph(kl) => kl.digraph.to_digraph("payload.digraph").map(drop),
        Claim::WsneWitness(w) => w.decode::<Rational>().map(drop),
        Claim::Nonexistence(n) => {
            n.game.to_game("payload.game")?;
            parse_scalar_at::<Rational>("payload.eps".into(), &n.eps)?;
            if let Some(d) = &n.derivation {
                d.base.to_digraph("payload.derivation.base")?;
                if let Some(h) = &d.haight {
                    h.to_set("payload.derivation.haight")?;
                }
            }
            Ok(())
        }
    }
}

/// Outcome of re-running a certificate's defining checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reverification {
    pub verified: bool,
    pub detail: String,
}

impl Reverification {
    fn pass(detail: impl Into<String>) -> Self {
        Reverification {
            verified: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Reverification {
            verified: false,
            detail: detail.into(),
        }
    }
}

/// Re-runs the defining checks of any certificate from its embedded data.
pub fn reverify(env: &CertificateEnvelope) -> Result<Reverification> {
    match &env.claim {
        Claim::Haight(h) => {
            let set = h.to_set("payload")?;
            Ok(match HaightCertificate::certify(set, h.kappa) {
                Some(_) => Reverification::pass(format!(
                    "Y - Y = Z_{} and no zero sum of fewer than {} elements",
                    h.modulus, h.kappa
                )),
                None => Reverification::fail("residue set fails the difference or sumset condition"),
            })
        }
        Claim::KlDigraph(kl) => {
            let d = kl.digraph.to_digraph("payload.digraph")?;
            if kl.l == 0 || kl.l > d.vertex_count() || kl.k == 0 {
                return Err(schema_err("payload.l", "k and l must satisfy 1 <= l <= n, k >= 1"));
            }
            Ok(match certify_kl(&d, kl.k, kl.l)? {
                KlVerdict::Verified(c) if c.girth.length() == kl.girth => {
                    Reverification::pass(format!("({}, {})-digraph, girth {:?}", kl.k, kl.l, c.girth))
                }
                KlVerdict::Verified(c) => Reverification::fail(format!(
                    "recorded girth {:?} but recomputed {:?}",
                    kl.girth, c.girth
                )),
                KlVerdict::Failed(f) => Reverification::fail(format!("{f:?}")),
            })
        }
        Claim::WsneWitness(w) => {
            let (g, p, q, eps) = w.decode::<Rational>()?;
            let v = check_wsne(&g, &p, &q, &eps)?;
            Ok(if v.valid {
                Reverification::pass(format!("valid {eps}-WSNE"))
            } else {
                Reverification::fail(format!("violations: {:?}", v.violations))
            })
        }
        Claim::Nonexistence(n) => reverify_nonexistence(n),
    }
}

fn reverify_nonexistence(n: &NonexistencePayload) -> Result<Reverification> {
    let g = n.game.to_game("payload.game")?;
    let eps: Rational = parse_scalar_at("payload.eps".into(), &n.eps)?;
    if let Some(d) = &n.derivation {
        if let Some(fail) = check_derivation(d, &g)? {
            return Ok(Reverification::fail(fail));
        }
    }
    if n.characterization_checked {
        let c = g.char_decision(n.k)?;
        if !c.is_neither() {
            return Ok(Reverification::fail(format!("characterization witness {c:?}")));
        }
    }
    Ok(match exhaustive_search(&g, n.k, &eps)? {
        ExhaustiveOutcome::NoneExists { pairs_refuted } if pairs_refuted == n.pairs_refuted => {
            Reverification::pass(format!(
                "no {eps}-WSNE with supports of size <= {} ({pairs_refuted} support pairs refuted)",
                n.k
            ))
        }
        ExhaustiveOutcome::NoneExists { pairs_refuted } => Reverification::fail(format!(
            "recorded {} refuted pairs, recomputed {pairs_refuted}",
            n.pairs_refuted
        )),
        ExhaustiveOutcome::Witness { supports, .. } => {
            Reverification::fail(format!("WSNE exists on supports {supports:?}"))
        }
    })
}

fn check_derivation(d: &Derivation, g: &WinLoseGame) -> Result<Option<String>> {
    let base = d.base.to_digraph("payload.derivation.base")?;
    if let Some(h) = &d.haight {
        let set = h.to_set("payload.derivation.haight")?;
        if !set.satisfies_haight(h.kappa) {
            return Ok(Some("recorded residue set fails its conditions".into()));
        }
        if Digraph::cayley(h.modulus, &set)? != base {
            return Ok(Some("base digraph is not the Cayley digraph of the residue set".into()));
        }
    }
    if d.base_l == 0 || d.base_l > base.vertex_count() || d.base_k == 0 {
        return Err(schema_err("payload.derivation.base_l", "out of range"));
    }
    if !certify_kl(&base, d.base_k, d.base_l)?.is_verified() {
        return Ok(Some(format!("base is not a ({}, {})-digraph", d.base_k, d.base_l)));
    }
    let top = if d.power == 0 { base } else { base.power(d.power)? };
    if WinLoseGame::bipartify(&top) != *g {
        return Ok(Some("game is not the bipartification of the powered base".into()));
    }
    Ok(None)
}
