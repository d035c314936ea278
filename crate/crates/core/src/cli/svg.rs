//! SVG drawings of finite origamis and of balls in countable ones.
//!
//! Squares are placed on the integer grid by breadth-first search from
//! square 1: a right gluing moves one unit in x, an up gluing one unit in
//! y. Rightward and upward gluings are followed first, then the reverse
//! ones. A square whose cell is already taken waits, and squares that
//! cannot be placed next to a neighbour start a new component. Every side
//! whose partner is not drawn next to it is dashed and labelled with the
//! partner's number.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::perm::SquareId;
use crate::surface::{Ball, Move, Origami, SquareTiled};

const CELL: i64 = 60;
const MARGIN: i64 = 30;
const GAP: i64 = 1;

/// Placement of squares on the grid, per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub cells: BTreeMap<SquareId, (i64, i64)>,
    pub components: usize,
}

fn offset(m: Move) -> (i64, i64) {
    match m {
        Move::Right => (1, 0),
        Move::Left => (-1, 0),
        Move::Up => (0, 1),
        Move::Down => (0, -1),
    }
}

/// Lays out `squares` (in the given order, first one is the root) using
/// the gluings of `o`. Neighbours outside `squares` are ignored.
pub fn layout(o: &Origami, squares: &[SquareId]) -> Layout {
    let member: HashSet<SquareId> = squares.iter().copied().collect();
    let mut cells: BTreeMap<SquareId, (i64, i64)> = BTreeMap::new();
    let mut components = 0;
    let mut x_origin = 0;
    while let Some(root) = squares.iter().find(|s| !cells.contains_key(s)) {
        components += 1;
        let mut occupied: HashMap<(i64, i64), SquareId> = HashMap::new();
        let mut placed = vec![*root];
        occupied.insert((0, 0), *root);
        cells.insert(*root, (0, 0));
        let passes: [&[Move]; 2] = [
            &[Move::Right, Move::Up],
            &[Move::Right, Move::Up, Move::Left, Move::Down],
        ];
        for moves in passes {
            let mut queue: VecDeque<SquareId> = placed.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                let (px, py) = cells[&x];
                for &m in moves {
                    let y = o.step(&x, m);
                    if !member.contains(&y) || cells.contains_key(&y) {
                        continue;
                    }
                    let (dx, dy) = offset(m);
                    let cell = (px + dx, py + dy);
                    if occupied.contains_key(&cell) {
                        continue;
                    }
                    occupied.insert(cell, y);
                    cells.insert(y, cell);
                    placed.push(y);
                    queue.push_back(y);
                }
            }
        }
        if components > 1 {
            let min_x = placed.iter().map(|s| cells[s].0).min().unwrap_or(x_origin);
            for s in &placed {
                cells.get_mut(s).expect("placed").0 += x_origin - min_x;
            }
        }
        let max_x = placed.iter().map(|s| cells[s].0).max().unwrap_or(x_origin);
        x_origin = max_x + 1 + GAP;
    }
    Layout { cells, components }
}

/// Renders every square of a finite origami.
pub fn render_svg(o: &Origami) -> String {
    let n = o.square_count().expect("render_svg needs a finite origami");
    let squares: Vec<SquareId> = (0..n).map(SquareId::from_index).collect();
    render_squares(o, &squares)
}

/// Renders the squares of a ball; the ball's base is the layout root.
pub fn render_ball_svg(o: &Origami, b: &Ball<SquareId>) -> String {
    let squares: Vec<SquareId> = b.iter().copied().collect();
    render_squares(o, &squares)
}

fn render_squares(o: &Origami, squares: &[SquareId]) -> String {
    let lay = layout(o, squares);
    let min_x = lay.cells.values().map(|c| c.0).min().unwrap_or(0);
    let max_x = lay.cells.values().map(|c| c.0).max().unwrap_or(0);
    let min_y = lay.cells.values().map(|c| c.1).min().unwrap_or(0);
    let max_y = lay.cells.values().map(|c| c.1).max().unwrap_or(0);
    let width = (max_x - min_x + 1) * CELL + 2 * MARGIN;
    let height = (max_y - min_y + 1) * CELL + 2 * MARGIN;
    // svg y grows downwards; this gives the upper-left corner of a cell
    let corner = |(x, y): (i64, i64)| ((x - min_x) * CELL + MARGIN, (max_y - y) * CELL + MARGIN);
    let at: HashMap<(i64, i64), SquareId> = lay.cells.iter().map(|(s, c)| (*c, *s)).collect();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    out.push_str("<style>.sq{fill:#f4f1e8;stroke:#222;stroke-width:2}.glue{stroke:#b03030;stroke-width:2;stroke-dasharray:6,4}.id{font:16px sans-serif;text-anchor:middle;dominant-baseline:central}.partner{font:10px sans-serif;fill:#b03030;text-anchor:middle;dominant-baseline:central}</style>\n");
    for (s, &cell) in &lay.cells {
        let (x, y) = corner(cell);
        let _ = writeln!(
            out,
            "<rect class=\"sq\" x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\"/>"
        );
        let _ = writeln!(
            out,
            "<text class=\"id\" x=\"{}\" y=\"{}\">{s}</text>",
            x + CELL / 2,
            y + CELL / 2
        );
    }
    for (s, &cell) in &lay.cells {
        let (x, y) = corner(cell);
        for m in Move::ALL {
            let partner = o.step(s, m);
            let (dx, dy) = offset(m);
            if at.get(&(cell.0 + dx, cell.1 + dy)) == Some(&partner) {
                continue;
            }
            let (x1, y1, x2, y2, lx, ly) = match m {
                Move::Right => (x + CELL, y, x + CELL, y + CELL, x + CELL - 9, y + CELL / 2),
                Move::Left => (x, y, x, y + CELL, x + 9, y + CELL / 2),
                Move::Up => (x, y, x + CELL, y, x + CELL / 2, y + 9),
                Move::Down => (x, y + CELL, x + CELL, y + CELL, x + CELL / 2, y + CELL - 9),
            };
            let _ = writeln!(
                out,
                "<line class=\"glue\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"/>"
            );
            let _ = writeln!(
                out,
                "<text class=\"partner\" x=\"{lx}\" y=\"{ly}\">{partner}</text>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::FinitePerm;
    use crate::surface::{ball, lemma1_origami};

    fn sq(i: u32) -> SquareId {
        SquareId::new(i)
    }

    #[test]
    fn l_shape_layout() {
        let s = FinitePerm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let t = FinitePerm::from_cycles(3, &[vec![1, 3]]).unwrap();
        let l = Origami::finite(s, t).unwrap();
        let lay = layout(&l, &[sq(1), sq(2), sq(3)]);
        assert_eq!(lay.cells[&sq(2)], (1, 0));
        assert_eq!(lay.cells[&sq(3)], (0, 1));
        assert_eq!(lay.components, 1);
    }

    #[test]
    fn staircase_ball_layout() {
        let o = lemma1_origami();
        let b = ball(&o, &sq(1), 4);
        let squares: Vec<SquareId> = b.iter().copied().collect();
        let lay = layout(&o, &squares);
        let expected = [
            (1, (0, 0)),
            (2, (0, 1)),
            (3, (0, 2)),
            (4, (1, 2)),
            (5, (1, 3)),
            (6, (1, 4)),
            (7, (2, 4)),
        ];
        for (s, cell) in expected {
            assert_eq!(lay.cells[&sq(s)], cell, "square {s}");
        }
        assert_eq!(lay.cells.len(), 7);
    }

    #[test]
    fn torus_has_four_dashed_sides() {
        let t = Origami::finite(FinitePerm::identity(1), FinitePerm::identity(1)).unwrap();
        let svg = render_svg(&t);
        assert_eq!(svg.matches("class=\"glue\"").count(), 4);
        assert_eq!(svg.matches("<rect").count(), 1);
    }

    #[test]
    fn collisions_split_components() {
        let s = FinitePerm::from_images(&[5, 1, 4, 2, 3]).unwrap();
        let t = FinitePerm::from_images(&[3, 1, 5, 4, 2]).unwrap();
        let o = Origami::finite(s, t).unwrap();
        let squares: Vec<SquareId> = (1..=5).map(sq).collect();
        let lay = layout(&o, &squares);
        assert_eq!(lay.components, 2);
        assert_eq!(lay.cells.len(), 5);
        let distinct: std::collections::HashSet<_> = lay.cells.values().collect();
        assert_eq!(distinct.len(), 5);
    }
}
