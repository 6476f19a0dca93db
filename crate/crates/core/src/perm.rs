//! Permutations on `{1..n}`, stored 0-based as an image table.
//!
//! Composition is left-to-right: `a.compose(&b)` applies `a` first, then `b`,
//! matching the right-action convention `x^(ab) = (x^a)^b`.

use std::fmt;

use crate::error::{Error, Result};

/// Internal point type. Degrees stay small (tens of points) at desk scale.
pub type Point = u16;

/// A bijection on `{0..degree-1}`. External notation (parsing, display) is 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    /// Identity on `degree` points.
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= Point::MAX as usize, "degree {degree} too large");
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    /// Builds a permutation from an image table; rejects non-bijections.
    pub fn from_images(images: Vec<Point>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            let i = im as usize;
            if i >= n {
                return Err(Error::PointOutOfRange {
                    point: i + 1,
                    degree: n,
                });
            }
            if seen[i] {
                return Err(Error::MalformedCycle(format!(
                    "image {} repeated in image table",
                    i + 1
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: Point) -> Point {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im as usize)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&im| other.images[im as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0 as Point; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im as usize] = i as Point;
        }
        Permutation { images: inv }
    }

    /// `g⁻¹ · self · g` in the right-action convention: `x^(p^g) = ((x^(g⁻¹))^p)^g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let ginv = g.inverse();
        ginv.compose(self).compose(g)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    /// Smallest point not fixed, if any.
    pub fn smallest_moved_point(&self) -> Option<Point> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &im)| i != im as usize)
            .map(|(i, _)| i as Point)
    }

    /// Least `m ≥ 1` with `self^m = identity`; the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.images.len()];
        let mut ord: u64 = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    /// Disjoint cycles, each rotated to start at its least point, sorted by
    /// least moved point. Fixed points are omitted.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as Point);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Parses whitespace-tolerant disjoint cycle notation, e.g. `"(1 2)(3 4)"`.
    /// `"()"` is the identity. Points are 1-based and must not exceed `degree`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        if degree > Point::MAX as usize {
            return Err(Error::PointOutOfRange {
                point: degree,
                degree: Point::MAX as usize,
            });
        }
        let mut images: Vec<Point> = (0..degree as Point).collect();
        let mut used = vec![false; degree];
        let mut chars = text.chars().peekable();
        let mut saw_cycle = false;

        loop {
            while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                chars.next();
            }
            match chars.next() {
                None => break,
                Some('(') => {}
                Some(c) => {
                    return Err(Error::MalformedCycle(format!(
                        "expected '(' but found {c:?} in {text:?}"
                    )))
                }
            }
            saw_cycle = true;
            let mut cycle: Vec<usize> = Vec::new();
            let mut num = String::new();
            loop {
                match chars.next() {
                    None => {
                        return Err(Error::MalformedCycle(format!(
                            "unbalanced parentheses in {text:?}"
                        )))
                    }
                    Some(')') => {
                        if !num.is_empty() {
                            cycle.push(parse_point(&num, degree)?);
                        }
                        break;
                    }
                    Some(c) if c.is_ascii_digit() => num.push(c),
                    Some(c) if c.is_whitespace() || c == ',' => {
                        if !num.is_empty() {
                            cycle.push(parse_point(&num, degree)?);
                            num.clear();
                        }
                    }
                    Some(c) => {
                        return Err(Error::MalformedCycle(format!(
                            "unexpected character {c:?} in {text:?}"
                        )))
                    }
                }
            }
            for &p in &cycle {
                if used[p] {
                    return Err(Error::MalformedCycle(format!(
                        "point {} appears twice in {text:?}",
                        p + 1
                    )));
                }
                used[p] = true;
            }
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                images[from] = to as Point;
            }
        }

        if !saw_cycle {
            return Err(Error::MalformedCycle(format!(
                "no cycles found in {text:?}"
            )));
        }
        Ok(Permutation { images })
    }
}

fn parse_point(num: &str, degree: usize) -> Result<usize> {
    let v: usize = num
        .parse()
        .map_err(|_| Error::MalformedCycle(format!("bad point {num:?}")))?;
    if v == 0 || v > degree {
        return Err(Error::PointOutOfRange {
            point: v,
            degree,
        });
    }
    Ok(v - 1)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    /// Canonical disjoint-cycle form, 1-based, cycles sorted by least moved point.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    #[test]
    fn parse_transposition() {
        assert_eq!(p("(1 2)", 4).images(), &[1, 0, 2, 3]);
    }

    #[test]
    fn parse_identity() {
        let id = p("()", 3);
        assert!(id.is_identity());
        assert_eq!(id.degree(), 3);
    }

    #[test]
    fn parse_two_cycles() {
        assert_eq!(p("(1 2 3)(4 5)", 5).images(), &[1, 2, 0, 4, 3]);
    }

    #[test]
    fn parse_rejects_repeated_point() {
        assert!(matches!(
            Permutation::parse("(1 2)(2 3)", 4),
            Err(Error::MalformedCycle(_))
        ));
    }

    #[test]
    fn parse_rejects_out_of_range() {
        assert!(matches!(
            Permutation::parse("(1 5)", 4),
            Err(Error::PointOutOfRange { point: 5, degree: 4 })
        ));
    }

    #[test]
    fn parse_rejects_unbalanced() {
        assert!(matches!(
            Permutation::parse("(1 2", 4),
            Err(Error::MalformedCycle(_))
        ));
    }

    #[test]
    fn compose_is_left_to_right() {
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        // 1 -> 2 under a, 2 -> 3 under b.
        assert_eq!(a.compose(&b).apply(0), 2);
    }

    #[test]
    fn inverse_cancels() {
        let a = p("(1 2 3)(4 5)", 6);
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(a.inverse().compose(&a).is_identity());
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let a = p("(1 2)", 3);
        let g = p("(1 3)", 3);
        assert_eq!(a.conjugate_by(&g), p("(2 3)", 3));
    }

    #[test]
    fn order_via_cycle_lcm() {
        assert_eq!(p("(1 2)(3 4 5)", 5).order(), 6);
        assert_eq!(Permutation::identity(4).order(), 1);
        assert_eq!(p("(1 2 3 4 5 6 7)", 7).order(), 7);
    }

    #[test]
    fn display_is_canonical() {
        let q = p("(4 5)(1 2 3)", 5);
        assert_eq!(q.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        // Cycle rotated to start at its least point: 3 -> 1 -> 2 -> 3.
        assert_eq!(p("(3 1 2)", 3).to_string(), "(1 2 3)");
    }
}
