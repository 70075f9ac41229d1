use cmzv::relations::Symbol;
use cmzv::{CmzvError, Index, Result};

/// Parses `zeta 1,2`, `zetastar 1,2` or `cyc [(2),(1)]`. The serialized
/// kinds `mzv`, `mzsv` are accepted as synonyms.
pub fn parse_symbol(s: &str) -> Result<Symbol> {
    let s = s.trim();
    let (kind, rest) = s
        .split_once(char::is_whitespace)
        .ok_or_else(|| CmzvError::Parse(format!("expected `<kind> <index>`, got `{s}`")))?;
    let rest = rest.trim();
    let index = || -> Result<Index> {
        let k: Index = rest.parse()?;
        if k.is_empty() {
            return Err(CmzvError::Parse(format!("empty index in `{s}`")));
        }
        Ok(k)
    };
    match kind {
        "zeta" | "mzv" => Ok(Symbol::Mzv(index()?)),
        "zetastar" | "mzsv" => Ok(Symbol::Mzsv(index()?)),
        "cyc" => Ok(Symbol::Cyc(rest.parse()?)),
        _ => Err(CmzvError::Parse(format!("unknown symbol kind `{kind}`"))),
    }
}
