use std::fs;
use std::io::{self, Read};
use std::path::Path;

use powerindex::{QuotaRule, WeightedGame};

use crate::failure::Failure;

/// Game text from `--game` if given, else from `path` (standard input for `-` or none).
pub fn load(path: Option<&Path>, inline: Option<&str>) -> Result<WeightedGame, Failure> {
    let text = match (inline, path) {
        (Some(game), _) => game.replace('/', "\n"),
        (None, Some(p)) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure::io(p, e))?
        }
        _ => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::other(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    parse_game(&text)
}

/// JSON when the first non-blank character is `{`, the text format otherwise.
pub fn parse_game(text: &str) -> Result<WeightedGame, Failure> {
    if text.trim_start().starts_with('{') {
        let game: WeightedGame = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            let msg = msg.strip_suffix(&suffix).unwrap_or(&msg);
            Failure::parse(format!("line {}, column {}: {msg}", e.line(), e.column()))
        })?;
        game.validate().map_err(|e| Failure::parse(e.to_string()))?;
        Ok(game)
    } else {
        WeightedGame::parse_text(text).map_err(|e| Failure::parse(e.to_string()))
    }
}

/// `"num/den"` as a quota rule.
pub fn parse_fraction(s: &str) -> Result<QuotaRule, Failure> {
    let bad = || Failure::parse(format!("quota fraction {s:?} is not of the form num/den"));
    let (num, den) = s.split_once('/').ok_or_else(bad)?;
    let num = num.trim().parse().map_err(|_| bad())?;
    let den: u64 = den.trim().parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(QuotaRule::Fraction { num, den })
}
