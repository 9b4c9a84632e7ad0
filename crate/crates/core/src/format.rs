//! Text formats: graph files, rotation lines and contraction sidecars.
//!
//! ```text
//! c comment
//! p mimick <n> <m> <k>
//! t <v1> ... <vk>
//! e <u> <v> <num>/<den>      (edge ids follow file order)
//! r <v> <edge>:<0|1> ...     (optional counterclockwise rotation at v)
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::network::{ContractionMap, Edge, Network, Rational};
use crate::planar::PlaneEmbedding;

/// Parses `num/den` or a plain integer.
pub fn parse_rational(token: &str) -> std::result::Result<Rational, String> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("bad numerator in `{token}`"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("bad denominator in `{token}`"))?;
    if den.is_zero() || den.is_negative() {
        return Err(format!("denominator must be positive in `{token}`"));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A parsed graph file; `rotation` is present when any `r` line was given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub network: Network,
    pub rotation: Option<Vec<Vec<usize>>>,
}

impl GraphFile {
    pub fn embedding(&self) -> Result<Option<PlaneEmbedding>> {
        self.rotation
            .as_ref()
            .map(|rot| PlaneEmbedding::new(self.network.clone(), rot.clone()))
            .transpose()
    }

    pub fn to_text(&self) -> String {
        write_graph(&self.network, self.rotation.as_deref())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<T> {
    token
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut terminals: Option<Vec<usize>> = None;
    let mut edges = Vec::new();
    let mut rotation: Option<Vec<Option<Vec<usize>>>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        if kind == "c" {
            continue;
        }
        if kind != "p" && header.is_none() {
            return Err(parse_err(ln, "`p` line must come first"));
        }
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(ln, "duplicate `p` line"));
                }
                if tok.next() != Some("mimick") {
                    return Err(parse_err(ln, "expected `p mimick <n> <m> <k>`"));
                }
                let n = number(ln, tok.next(), "vertex count")?;
                let m = number(ln, tok.next(), "edge count")?;
                let k = number(ln, tok.next(), "terminal count")?;
                header = Some((n, m, k));
            }
            "t" => {
                if terminals.is_some() {
                    return Err(parse_err(ln, "duplicate `t` line"));
                }
                let ts = tok
                    .by_ref()
                    .map(|t| t.parse().map_err(|_| parse_err(ln, "bad terminal")))
                    .collect::<Result<Vec<usize>>>()?;
                terminals = Some(ts);
            }
            "e" => {
                let u = number(ln, tok.next(), "endpoint")?;
                let v = number(ln, tok.next(), "endpoint")?;
                let cost = parse_rational(tok.next().ok_or_else(|| parse_err(ln, "missing cost"))?)
                    .map_err(|m| parse_err(ln, m))?;
                edges.push(Edge::new(u, v, cost));
            }
            "r" => {
                let n = header.map(|h| h.0).unwrap_or(0);
                let v: usize = number(ln, tok.next(), "vertex")?;
                if v >= n {
                    return Err(parse_err(ln, format!("vertex {v} out of range")));
                }
                let darts = tok
                    .by_ref()
                    .map(|d| {
                        let (e, end) = d.split_once(':').ok_or_else(|| parse_err(ln, "dart must be `edge:end`"))?;
                        let e: usize = e.parse().map_err(|_| parse_err(ln, "bad dart edge"))?;
                        match end {
                            "0" => Ok(2 * e),
                            "1" => Ok(2 * e + 1),
                            _ => Err(parse_err(ln, "dart end must be 0 or 1")),
                        }
                    })
                    .collect::<Result<Vec<usize>>>()?;
                let rot = rotation.get_or_insert_with(|| vec![None; n]);
                if rot[v].replace(darts).is_some() {
                    return Err(parse_err(ln, format!("duplicate rotation for vertex {v}")));
                }
            }
            other => return Err(parse_err(ln, format!("unknown line type `{other}`"))),
        }
        if tok.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
    }
    let (n, m, k) = header.ok_or_else(|| parse_err(0, "missing `p` line"))?;
    let terminals = terminals.ok_or_else(|| parse_err(0, "missing `t` line"))?;
    if terminals.len() != k {
        return Err(parse_err(0, format!("header says {k} terminals, `t` line has {}", terminals.len())));
    }
    if edges.len() != m {
        return Err(parse_err(0, format!("header says {m} edges, found {}", edges.len())));
    }
    let network = Network::new(n, edges, terminals)?;
    let rotation = rotation.map(|r| r.into_iter().map(Option::unwrap_or_default).collect());
    Ok(GraphFile { network, rotation })
}

pub fn write_graph(net: &Network, rotation: Option<&[Vec<usize>]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p mimick {} {} {}", net.n(), net.edge_count(), net.k());
    let ts: Vec<String> = net.terminals().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "t {}", ts.join(" "));
    for e in net.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, format_rational(&e.cost));
    }
    if let Some(rot) = rotation {
        for (v, darts) in rot.iter().enumerate() {
            let _ = write!(out, "r {v}");
            for d in darts {
                let _ = write!(out, " {}:{}", d / 2, d & 1);
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_embedding(emb: &PlaneEmbedding) -> String {
    write_graph(emb.network(), Some(emb.rotation()))
}

/// One `class <id> <v>...` line per contraction class.
pub fn write_sidecar(map: &ContractionMap) -> String {
    let mut out = String::new();
    for (c, members) in map.classes().iter().enumerate() {
        let vs: Vec<String> = members.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "class {c} {}", vs.join(" "));
    }
    out
}

pub fn parse_sidecar(net: &Network, text: &str) -> Result<ContractionMap> {
    let mut classes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let mut tok = raw.split_whitespace();
        match tok.next() {
            None | Some("c") => continue,
            Some("class") => {}
            Some(other) => return Err(parse_err(ln, format!("unknown line type `{other}`"))),
        }
        let id: usize = number(ln, tok.next(), "class id")?;
        if id != classes.len() {
            return Err(parse_err(ln, "class ids must be consecutive from 0"));
        }
        let members = tok
            .map(|t| t.parse().map_err(|_| parse_err(ln, "bad vertex")))
            .collect::<Result<Vec<usize>>>()?;
        classes.push(members);
    }
    ContractionMap::from_classes(net, classes)
}
