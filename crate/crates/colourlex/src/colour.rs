//! The eleven basic colour terms and their cross-linguistic rank.

use std::fmt;

use serde::Serialize;

use crate::error::Error;

/// One of the eleven basic colour terms.
///
/// The derived `Ord` follows the Berlin-Kay rank, i.e. the order in which
/// basic colour terms enter languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    White,
    Black,
    Red,
    Green,
    Yellow,
    Blue,
    Brown,
    Pink,
    Purple,
    Orange,
    Grey,
}

impl Colour {
    /// All colours in Berlin-Kay order.
    pub const ALL: [Colour; 11] = [
        Colour::White,
        Colour::Black,
        Colour::Red,
        Colour::Green,
        Colour::Yellow,
        Colour::Blue,
        Colour::Brown,
        Colour::Pink,
        Colour::Purple,
        Colour::Orange,
        Colour::Grey,
    ];

    /// Berlin-Kay rank, 1 (white) through 11 (grey).
    pub fn bk_rank(self) -> u8 {
        self as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Colour::White => "white",
            Colour::Black => "black",
            Colour::Red => "red",
            Colour::Green => "green",
            Colour::Yellow => "yellow",
            Colour::Blue => "blue",
            Colour::Brown => "brown",
            Colour::Pink => "pink",
            Colour::Purple => "purple",
            Colour::Orange => "orange",
            Colour::Grey => "grey",
        }
    }

    /// Parse a colour token. Case-insensitive; "gray" normalizes to grey.
    pub fn parse(token: &str) -> Result<Colour, Error> {
        let lower = token.trim().to_lowercase();
        match lower.as_str() {
            "white" => Ok(Colour::White),
            "black" => Ok(Colour::Black),
            "red" => Ok(Colour::Red),
            "green" => Ok(Colour::Green),
            "yellow" => Ok(Colour::Yellow),
            "blue" => Ok(Colour::Blue),
            "brown" => Ok(Colour::Brown),
            "pink" => Ok(Colour::Pink),
            "purple" => Ok(Colour::Purple),
            "orange" => Ok(Colour::Orange),
            "grey" | "gray" => Ok(Colour::Grey),
            _ => Err(Error::UnknownColour(token.to_string())),
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Colour {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Colour::parse(s)
    }
}
