use std::fmt;
use std::str::FromStr;

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::instance::{parse_id, parse_num};

impl fmt::Display for TreeDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "s td {} {} {}", self.bags.len(), self.max_bag_size(), self.n)?;
        for (i, bag) in self.bags.iter().enumerate() {
            write!(f, "b {}", i + 1)?;
            for v in bag {
                write!(f, " {}", v + 1)?;
            }
            writeln!(f)?;
        }
        for &(a, b) in &self.edges {
            writeln!(f, "{} {}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

impl FromStr for TreeDecomposition {
    type Err = Error;

    /// Reads the PACE `.td` format; bag and vertex ids are 1-based.
    fn from_str(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let mut toks = raw.split_whitespace();
            let Some(first) = toks.next() else { continue };
            match first {
                "c" => continue,
                "s" => {
                    if header.is_some() {
                        return Err(Error::parse(line, "duplicate header"));
                    }
                    if toks.next() != Some("td") {
                        return Err(Error::parse(line, "expected `s td`"));
                    }
                    let nb: usize = parse_num(toks.next(), line, "bag count")?;
                    let _max: usize = parse_num(toks.next(), line, "max bag size")?;
                    let n: usize = parse_num(toks.next(), line, "vertex count")?;
                    if toks.next().is_some() {
                        return Err(Error::parse(line, "trailing tokens"));
                    }
                    header = Some((nb, n));
                    bags = vec![None; nb];
                }
                _ => {
                    let (nb, n) = header.ok_or_else(|| Error::parse(line, "missing header"))?;
                    if first == "b" {
                        let id = parse_id(toks.next(), nb, line, "bag")?;
                        if bags[id].is_some() {
                            return Err(Error::parse(line, format!("duplicate bag {}", id + 1)));
                        }
                        let mut bag = toks
                            .map(|t| parse_id(Some(t), n, line, "vertex"))
                            .collect::<Result<Vec<_>>>()?;
                        bag.sort_unstable();
                        bag.dedup();
                        bags[id] = Some(bag);
                    } else {
                        let a = parse_id(Some(first), nb, line, "bag")?;
                        let b = parse_id(toks.next(), nb, line, "bag")?;
                        if toks.next().is_some() {
                            return Err(Error::parse(line, "trailing tokens"));
                        }
                        edges.push((a, b));
                    }
                }
            }
        }
        let (_, n) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
        let bags = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| Error::parse(0, format!("bag {} missing", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Ok(TreeDecomposition { n, bags, edges })
    }
}
