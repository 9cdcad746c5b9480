//! Turtle-graphics generator for the 3D Hilbert curve.
//!
//! The curve is drawn by rewriting the nonterminal `X` with [`HILBERT_RULE`]
//! and walking a turtle over the resulting terminals. It shares no code with
//! the digit algorithms in [`crate::curve`] and serves as their oracle.
//!
//! The turtle carries an orientation matrix whose columns are its body axes
//! `(heading, left, up)` in world coordinates. Every rotation symbol
//! post-multiplies the orientation by a quarter turn in the body frame:
//!
//! | symbol | turn  | body axis | heading moves toward |
//! |--------|-------|-----------|----------------------|
//! | `+`    | yaw   | up        | left                 |
//! | `-`    | yaw   | up        | right                |
//! | `^`    | pitch | left      | up                   |
//! | `&`    | pitch | left      | down                 |
//! | `<`    | roll  | heading   | (up moves to left)   |
//! | `>`    | roll  | heading   | (up moves to right)  |
//!
//! `F` moves one cell along the heading. The initial orientation is not
//! implied by the rule; [`calibrate_initial_orientation`] recovers it by trying
//! all 24 proper orientations and keeping the one whose depth-1 walk is the
//! base ordering. The result is frozen in [`INITIAL_ORIENTATION`].

use std::sync::OnceLock;

use crate::curve::{Point3, BASE_ORDERING};
use crate::error::{HilbertError, Result};
use crate::geometry::RotationMatrix;

/// Rewrite rule for `X`. `&` is pitch down; whitespace separates groups.
pub const HILBERT_RULE: &str = "^<XF ^<XFX-F ^>>XFX&F +>>XFX-F>X->";

/// Largest depth the generator accepts; `8^7` cells.
pub const MAX_WALK_DEPTH: u8 = 7;

/// Heading `+y`, left `+z`, up `+x`.
pub const INITIAL_ORIENTATION: RotationMatrix = RotationMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LSymbol {
    /// Nonterminal; no effect on the turtle.
    X,
    Forward,
    YawLeft,
    YawRight,
    PitchUp,
    PitchDown,
    RollLeft,
    RollRight,
}

impl LSymbol {
    /// Parses one rule character. Accepts the wedge/vee and minus-sign forms.
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'X' => LSymbol::X,
            'F' => LSymbol::Forward,
            '+' => LSymbol::YawLeft,
            '-' | '\u{2212}' => LSymbol::YawRight,
            '^' | '\u{2227}' => LSymbol::PitchUp,
            '&' | '\u{2228}' => LSymbol::PitchDown,
            '<' => LSymbol::RollLeft,
            '>' => LSymbol::RollRight,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            LSymbol::X => 'X',
            LSymbol::Forward => 'F',
            LSymbol::YawLeft => '+',
            LSymbol::YawRight => '-',
            LSymbol::PitchUp => '^',
            LSymbol::PitchDown => '&',
            LSymbol::RollLeft => '<',
            LSymbol::RollRight => '>',
        }
    }

    /// Body-frame quarter turn for rotation symbols.
    pub fn rotation(self) -> Option<RotationMatrix> {
        use RotationMatrix as R;
        // Body axes are (heading, left, up) = (e1, e2, e3), so the world
        // quarter turns X, Y, Z act on heading, left and up respectively.
        Some(match self {
            LSymbol::YawLeft => R::Z,
            LSymbol::YawRight => R::Z.transpose(),
            LSymbol::PitchUp => R::Y.transpose(),
            LSymbol::PitchDown => R::Y,
            LSymbol::RollLeft => R::X.transpose(),
            LSymbol::RollRight => R::X,
            LSymbol::X | LSymbol::Forward => return None,
        })
    }
}

/// Parses a rule string, skipping whitespace. Returns the offending character
/// on failure.
pub fn parse_rule(rule: &str) -> std::result::Result<Vec<LSymbol>, char> {
    rule.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| LSymbol::from_char(c).ok_or(c))
        .collect()
}

/// The parsed body of [`HILBERT_RULE`].
pub fn rule_body() -> &'static [LSymbol] {
    static BODY: OnceLock<Vec<LSymbol>> = OnceLock::new();
    BODY.get_or_init(|| parse_rule(HILBERT_RULE).expect("built-in rule parses"))
}

fn check_depth(depth: u8) -> Result<()> {
    if (1..=MAX_WALK_DEPTH).contains(&depth) {
        Ok(())
    } else {
        Err(HilbertError::DepthOutOfRange {
            depth: depth as u64,
            min: 1,
            max: MAX_WALK_DEPTH,
        })
    }
}

/// Applies the rule `depth` times to the axiom `X`, keeping the remaining
/// nonterminals.
pub fn rewrite(depth: u8) -> Result<Vec<LSymbol>> {
    check_depth(depth)?;
    let body = rule_body();
    let mut current = vec![LSymbol::X];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(current.len() * body.len());
        for &s in &current {
            if s == LSymbol::X {
                next.extend_from_slice(body);
            } else {
                next.push(s);
            }
        }
        current = next;
    }
    Ok(current)
}

/// Streams the terminal symbols of the depth-`n` expansion, depth first,
/// holding one cursor per nesting level.
#[derive(Clone, Debug)]
pub struct Expansion {
    depth: usize,
    cursors: Vec<usize>,
}

impl Expansion {
    pub fn new(depth: u8) -> Result<Self> {
        check_depth(depth)?;
        Ok(Expansion {
            depth: depth as usize,
            cursors: vec![0],
        })
    }
}

impl Iterator for Expansion {
    type Item = LSymbol;

    fn next(&mut self) -> Option<LSymbol> {
        let body = rule_body();
        loop {
            let level = self.cursors.len();
            let cursor = self.cursors.last_mut()?;
            let Some(&sym) = body.get(*cursor) else {
                self.cursors.pop();
                continue;
            };
            *cursor += 1;
            if sym != LSymbol::X {
                return Some(sym);
            }
            if level < self.depth {
                self.cursors.push(0);
            }
        }
    }
}

/// Turtle position and orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TurtleState {
    pub position: [i64; 3],
    pub orientation: RotationMatrix,
}

impl TurtleState {
    pub fn new(orientation: RotationMatrix) -> Self {
        TurtleState {
            position: [0; 3],
            orientation,
        }
    }

    pub fn heading(&self) -> [i8; 3] {
        self.orientation.column(0)
    }

    /// Interprets one symbol. Returns true when the turtle moved.
    pub fn apply(&mut self, sym: LSymbol) -> bool {
        if let Some(turn) = sym.rotation() {
            self.orientation = self.orientation * turn;
            return false;
        }
        if sym == LSymbol::Forward {
            let heading = self.heading();
            for (p, h) in self.position.iter_mut().zip(heading) {
                *p += h as i64;
            }
            return true;
        }
        false
    }
}

impl Default for TurtleState {
    fn default() -> Self {
        TurtleState::new(INITIAL_ORIENTATION)
    }
}

/// Iterator over the cells of a depth-`n` curve in path order, starting at
/// the origin. Memory use is O(depth).
#[derive(Clone, Debug)]
pub struct Walk {
    symbols: Expansion,
    turtle: TurtleState,
    started: bool,
}

impl Walk {
    pub fn new(depth: u8) -> Result<Self> {
        Self::with_orientation(depth, INITIAL_ORIENTATION)
    }

    pub fn with_orientation(depth: u8, orientation: RotationMatrix) -> Result<Self> {
        Ok(Walk {
            symbols: Expansion::new(depth)?,
            turtle: TurtleState::new(orientation),
            started: false,
        })
    }

    pub fn turtle(&self) -> &TurtleState {
        &self.turtle
    }

    /// Next position, which may leave the positive octant for a
    /// miscalibrated orientation.
    pub fn next_raw(&mut self) -> Option<[i64; 3]> {
        if !self.started {
            self.started = true;
            return Some(self.turtle.position);
        }
        for sym in self.symbols.by_ref() {
            if self.turtle.apply(sym) {
                return Some(self.turtle.position);
            }
        }
        None
    }
}

impl Iterator for Walk {
    type Item = Point3;

    fn next(&mut self) -> Option<Point3> {
        let [x, y, z] = self.next_raw()?;
        let c = |v: i64| u32::try_from(v).expect("calibrated walk stays in the positive octant");
        Some(Point3::new(c(x), c(y), c(z)))
    }
}

/// All `8^depth` cells of the curve in order.
pub fn walk(depth: u8) -> Result<Vec<Point3>> {
    Ok(Walk::new(depth)?.collect())
}

/// Searches the 24 proper orientations for the one whose depth-1 walk visits
/// the base ordering. Returns `None` unless exactly one matches.
pub fn calibrate_initial_orientation() -> Option<RotationMatrix> {
    let target: Vec<[i64; 3]> = BASE_ORDERING
        .iter()
        .map(|p| [p.x as i64, p.y as i64, p.z as i64])
        .collect();
    let mut matches = RotationMatrix::proper_rotations().into_iter().filter(|&m| {
        let mut w = Walk::with_orientation(1, m).expect("depth 1 is valid");
        std::iter::from_fn(|| w.next_raw()).eq(target.iter().copied())
    });
    let first = matches.next()?;
    matches.next().is_none().then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forward_count(syms: &[LSymbol]) -> usize {
        syms.iter().filter(|&&s| s == LSymbol::Forward).count()
    }

    #[test]
    fn depth_one_is_rule_body() {
        assert_eq!(rewrite(1).unwrap(), rule_body());
        let text: String = rule_body().iter().map(|s| s.to_char()).collect();
        assert_eq!(text, HILBERT_RULE.replace(' ', ""));
        assert_eq!(forward_count(&rewrite(1).unwrap()), 7);
    }

    #[test]
    fn forward_counts() {
        // 8 copies of the previous level plus the 7 connecting moves.
        let mut expected = 7usize;
        for d in 2..=4 {
            expected = 8 * expected + 7;
            assert_eq!(forward_count(&rewrite(d).unwrap()), expected);
        }
        assert_eq!(forward_count(&rewrite(2).unwrap()), 63);
    }

    #[test]
    fn depth_limits() {
        assert!(rewrite(0).is_err());
        assert!(Walk::new(0).is_err());
        assert!(Walk::new(MAX_WALK_DEPTH + 1).is_err());
    }

    #[test]
    fn unicode_rule_form_parses_identically() {
        let unicode =
            "\u{2227}<XF \u{2227}<XFX\u{2212}F \u{2227}>>XFX\u{2228}F +>>XFX\u{2212}F>X\u{2212}>";
        assert_eq!(parse_rule(unicode).unwrap(), rule_body());
        assert_eq!(parse_rule("XQ"), Err('Q'));
    }

    #[test]
    fn expansion_streams_terminals_of_rewrite() {
        for d in 1..=3 {
            let materialised: Vec<_> = rewrite(d)
                .unwrap()
                .into_iter()
                .filter(|&s| s != LSymbol::X)
                .collect();
            let streamed: Vec<_> = Expansion::new(d).unwrap().collect();
            assert_eq!(streamed, materialised);
        }
    }

    #[test]
    fn calibration_is_unique_and_frozen() {
        assert_eq!(calibrate_initial_orientation(), Some(INITIAL_ORIENTATION));
        assert!(INITIAL_ORIENTATION.is_proper_rotation());
    }

    #[test]
    fn depth_one_walk_is_base_ordering() {
        assert_eq!(walk(1).unwrap(), BASE_ORDERING.to_vec());
    }

    #[test]
    fn depth_two_ends_at_top_corner() {
        let w = walk(2).unwrap();
        assert_eq!(w.len(), 64);
        assert_eq!(w[63], Point3::new(0, 3, 0));
    }

    #[test]
    fn orientation_stays_proper() {
        let mut t = TurtleState::default();
        for sym in rewrite(3).unwrap() {
            t.apply(sym);
            assert!(t.orientation.is_proper_rotation());
        }
    }

    #[test]
    fn symbol_rotations_are_quarter_turns() {
        for c in "+-^&<>".chars() {
            let m = LSymbol::from_char(c).unwrap().rotation().unwrap();
            assert!(m.is_proper_rotation());
            assert_eq!(m * m * m * m, RotationMatrix::IDENTITY);
        }
        let yaw = LSymbol::YawLeft.rotation().unwrap();
        // heading (e1) turns to left (e2)
        assert_eq!(yaw.column(0), [0, 1, 0]);
        let pitch = LSymbol::PitchUp.rotation().unwrap();
        assert_eq!(pitch.column(0), [0, 0, 1]);
    }
}
