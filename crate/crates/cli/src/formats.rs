//! Text formats: explicit DFAs, DOT, traces.
//!
//! Explicit DFA files look like
//!
//! ```text
//! # atoms: a b
//! dfa 3 2 0
//! acc: 1
//! 0 00 2
//! 0 01 2
//! ...
//! ```
//!
//! A bitvector lists atoms in alphabet order, atom 0 first. Transition lines
//! are sorted by source state, then bitvector; with no atoms the single
//! letter is written `-`. The `# atoms:` comment is
//! optional on input; without it atoms are named `p0, p1, ...`.

use std::fmt::Write as _;

use ltlf_core::bdd::{Bdd, NodeId};
use ltlf_core::{Alphabet, Dfa, Letter, Trace};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Automaton(#[from] ltlf_core::Error),
    #[error("unknown atom `{0}` in trace")]
    UnknownAtom(String),
}

fn bits(letter: Letter, atoms: usize) -> String {
    if atoms == 0 {
        return "-".to_string();
    }
    (0..atoms).map(|i| if letter >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn write_explicit(d: &Dfa) -> String {
    let atoms = d.alphabet().len();
    let mut out = String::new();
    if atoms > 0 {
        let names: Vec<&str> = d.alphabet().names().iter().map(|n| &**n).collect();
        writeln!(out, "# atoms: {}", names.join(" ")).unwrap();
    }
    writeln!(out, "dfa {} {} {}", d.num_states(), atoms, d.initial()).unwrap();
    let acc: Vec<String> = d.accepting_states().map(|s| s.to_string()).collect();
    if acc.is_empty() {
        out.push_str("acc:\n");
    } else {
        writeln!(out, "acc: {}", acc.join(" ")).unwrap();
    }
    for s in 0..d.num_states() as u32 {
        let mut rows: Vec<(String, u32)> =
            (0..d.num_letters() as Letter).map(|l| (bits(l, atoms), d.next(s, l))).collect();
        rows.sort();
        for (b, t) in rows {
            writeln!(out, "{s} {b} {t}").unwrap();
        }
    }
    out
}

pub fn read_explicit(text: &str) -> Result<Dfa, FormatError> {
    let err = |line: usize, msg: &str| FormatError::Syntax { line, msg: msg.to_string() };
    let mut atom_names: Option<Vec<String>> = None;
    let mut header: Option<(usize, usize, u32)> = None;
    let mut accepting: Option<Vec<bool>> = None;
    let mut delta: Vec<Option<u32>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("# atoms:") {
            atom_names = Some(rest.split_whitespace().map(String::from).collect());
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((states, atoms, _)) = header else {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 || f[0] != "dfa" {
                return Err(err(n, "expected `dfa <states> <atoms> <initial>`"));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(n, "bad number"));
            let (states, atoms, init) = (num(f[1])?, num(f[2])?, num(f[3])?);
            if states == 0 || init >= states {
                return Err(err(n, "initial state out of range"));
            }
            if atoms > 16 {
                return Err(err(n, "too many atoms"));
            }
            header = Some((states, atoms, init as u32));
            delta = vec![None; states << atoms];
            continue;
        };
        if let Some(rest) = line.strip_prefix("acc:") {
            let mut acc = vec![false; states];
            for tok in rest.split_whitespace() {
                let s: usize = tok.parse().map_err(|_| err(n, "bad state"))?;
                *acc.get_mut(s).ok_or_else(|| err(n, "state out of range"))? = true;
            }
            accepting = Some(acc);
            continue;
        }
        let mut f: Vec<&str> = line.split_whitespace().collect();
        if atoms == 0 && f.len() == 3 && f[1] == "-" {
            f[1] = "";
        }
        if f.len() != 3 || f[1].len() != atoms || !f[1].bytes().all(|b| b == b'0' || b == b'1') {
            return Err(err(n, "expected `<state> <bitvector> <state>`"));
        }
        let from: usize = f[0].parse().map_err(|_| err(n, "bad state"))?;
        let to: u32 = f[2].parse().map_err(|_| err(n, "bad state"))?;
        if from >= states || to as usize >= states {
            return Err(err(n, "state out of range"));
        }
        let letter = f[1].bytes().enumerate().fold(0, |acc, (i, b)| acc | (u32::from(b == b'1') << i));
        let slot = &mut delta[(from << atoms) | letter as usize];
        if slot.replace(to).is_some() {
            return Err(err(n, "duplicate transition"));
        }
    }
    let (_, atoms, init) = header.ok_or_else(|| err(0, "missing header"))?;
    let accepting = accepting.ok_or_else(|| err(0, "missing `acc:` line"))?;
    let delta: Vec<u32> = delta.into_iter().collect::<Option<_>>().ok_or_else(|| err(0, "missing transitions"))?;
    let names = match atom_names {
        Some(v) if v.len() == atoms => v,
        Some(_) => return Err(err(0, "`# atoms:` does not match the header")),
        None => (0..atoms).map(|i| format!("p{i}")).collect(),
    };
    let alphabet = Alphabet::new(names.iter().map(|s| s.as_str().into()).collect());
    if alphabet.names().iter().map(|n| &**n).ne(names.iter().map(String::as_str)) {
        return Err(err(0, "atoms must be listed in sorted order without repeats"));
    }
    Ok(Dfa::new(alphabet, init, delta, accepting)?)
}

fn letter_label(letter: Letter, alphabet: &Alphabet) -> String {
    let set: Vec<&str> =
        alphabet.names().iter().enumerate().filter(|(i, _)| letter >> i & 1 == 1).map(|(_, n)| &**n).collect();
    format!("{{{}}}", set.join(","))
}

/// DOT with one edge per state pair, labelled by its letters.
pub fn dfa_dot(d: &Dfa) -> String {
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n");
    for s in 0..d.num_states() as u32 {
        let shape = if d.is_accepting(s) { "doublecircle" } else { "circle" };
        writeln!(out, "  {s} [shape={shape}];").unwrap();
    }
    writeln!(out, "  init -> {};", d.initial()).unwrap();
    for s in 0..d.num_states() as u32 {
        let mut by_target: std::collections::BTreeMap<u32, Vec<String>> = Default::default();
        for l in ltlf_core::semantics::letters_in_order(d.alphabet().len()) {
            by_target.entry(d.next(s, l)).or_default().push(letter_label(l, d.alphabet()));
        }
        for (t, labels) in by_target {
            writeln!(out, "  {s} -> {t} [label=\"{}\"];", labels.join("\\n")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// DOT of the diagrams under `roots`; low edges dashed.
pub fn bdd_dot(bdd: &Bdd, roots: &[(String, NodeId)], var_name: &dyn Fn(u32) -> String) -> String {
    let mut out = String::from("digraph bdd {\n  f [shape=box,label=\"0\"];\n  t [shape=box,label=\"1\"];\n");
    let id = |n: NodeId| match n {
        NodeId::FALSE => "f".to_string(),
        NodeId::TRUE => "t".to_string(),
        n => format!("n{}", n.index()),
    };
    let nodes: Vec<NodeId> = roots.iter().map(|r| r.1).collect();
    bdd.for_each_node(&nodes, |n, var, low, high| {
        writeln!(out, "  {} [label=\"{}\"];", id(n), var_name(var)).unwrap();
        writeln!(out, "  {} -> {} [style=dashed];", id(n), id(low)).unwrap();
        writeln!(out, "  {} -> {};", id(n), id(high)).unwrap();
    });
    for (i, (name, root)) in roots.iter().enumerate() {
        writeln!(out, "  r{i} [shape=plaintext,label=\"{name}\"];\n  r{i} -> {};", id(*root)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Parses `a;a,b;-`: letters separated by `;`, atoms by `,`, `-` for the
/// empty letter. A trailing `;` is allowed.
pub fn parse_trace(text: &str, alphabet: &Alphabet) -> Result<Trace, FormatError> {
    let text = text.trim();
    let text = text.strip_suffix(';').unwrap_or(text);
    let mut letters = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        let mut letter = 0;
        if part != "-" && !part.is_empty() {
            for atom in part.split(',') {
                let atom = atom.trim();
                let i = alphabet.index_of(atom).ok_or_else(|| FormatError::UnknownAtom(atom.to_string()))?;
                letter |= 1 << i;
            }
        } else if part.is_empty() {
            return Err(FormatError::Syntax { line: 1, msg: "empty letter; write `-`".into() });
        }
        letters.push(letter);
    }
    Ok(Trace::new(letters))
}

pub fn format_trace(trace: &Trace, alphabet: &Alphabet) -> String {
    let parts: Vec<String> = trace
        .letters
        .iter()
        .map(|&l| {
            let set: Vec<&str> =
                alphabet.names().iter().enumerate().filter(|(i, _)| l >> i & 1 == 1).map(|(_, n)| &**n).collect();
            if set.is_empty() {
                "-".to_string()
            } else {
                set.join(",")
            }
        })
        .collect();
    parts.join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltlf_core::parse::parse_ltlf;
    use ltlf_core::pipeline::{translate, Pipeline};
    use ltlf_core::Limits;

    #[test]
    fn explicit_round_trip() {
        for src in ["a", "F a", "a U b", "G (a -> X b)", "true", "false"] {
            let f = parse_ltlf(src).unwrap();
            let d = translate(&f, Pipeline::Reverse, &Limits::default()).unwrap().dfa;
            let text = write_explicit(&d);
            assert_eq!(read_explicit(&text).unwrap(), d, "{src}\n{text}");
        }
    }

    #[test]
    fn explicit_layout() {
        let f = parse_ltlf("a").unwrap();
        let d = translate(&f, Pipeline::Reverse, &Limits::default()).unwrap().dfa;
        let text = write_explicit(&d);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# atoms: a");
        assert_eq!(lines[1], "dfa 3 1 0");
        assert_eq!(lines.len(), 3 + 3 * 2);
        assert_eq!(&lines[3][..4], "0 0 ");
        assert_eq!(&lines[4][..4], "0 1 ");
    }

    #[test]
    fn explicit_rejects_garbage() {
        assert!(read_explicit("dfa 1 1 0\nacc: 0\n0 0 0\n").is_err());
        assert!(read_explicit("dfa 1 1 3\n").is_err());
        assert!(read_explicit("dfa 1 0 0\nacc: 0\n0  0\n").is_err());
        assert!(read_explicit("dfa 1 1 0\nacc: 0\n0 0 0\n0 1 0\n0 1 0\n").is_err());
    }

    #[test]
    fn traces() {
        let al = Alphabet::from_strs(["a", "b"]);
        let t = parse_trace("a;a,b;-;", &al).unwrap();
        assert_eq!(t.letters, vec![1, 3, 0]);
        assert_eq!(format_trace(&t, &al), "a;a,b;-");
        assert_eq!(parse_trace("c", &al), Err(FormatError::UnknownAtom("c".into())));
    }

    #[test]
    fn dot_mentions_every_state() {
        let d = translate(&parse_ltlf("F a").unwrap(), Pipeline::Reverse, &Limits::default()).unwrap().dfa;
        let dot = dfa_dot(&d);
        assert!(dot.starts_with("digraph dfa {"));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("label=\"{a}\""));
    }
}
