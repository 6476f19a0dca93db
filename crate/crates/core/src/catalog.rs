//! Constructors for the verification corpus: symmetric, alternating, cyclic,
//! and dihedral groups, PSL(2,p), small matrix groups as permutation groups,
//! direct products, one wreath shape, and a text file format. Every
//! constructor checks the built order against the closed form, so a wrong
//! action trips immediately.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};

/// Parsed description of a corpus group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Sym(usize),
    Alt(usize),
    Cyclic(usize),
    Dihedral(usize),
    Psl2(u64),
    Frobenius20,
    Sl23,
    Gl23,
    Direct(Box<GroupSpec>, Box<GroupSpec>),
    WreathSmall(Box<GroupSpec>, Box<GroupSpec>),
    File(String),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Sym(n) => write!(f, "sym:{n}"),
            GroupSpec::Alt(n) => write!(f, "alt:{n}"),
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Psl2(p) => write!(f, "psl2:{p}"),
            GroupSpec::Frobenius20 => write!(f, "frobenius20"),
            GroupSpec::Sl23 => write!(f, "sl23"),
            GroupSpec::Gl23 => write!(f, "gl23"),
            GroupSpec::Direct(a, b) => write!(f, "direct:{a},{b}"),
            GroupSpec::WreathSmall(a, b) => write!(f, "wreath_small:{a},{b}"),
            GroupSpec::File(path) => write!(f, "file:{path}"),
        }
    }
}

impl GroupSpec {
    /// Parses CLI strings such as `sym:5`, `psl2:7`, `direct:sym:3,alt:5`,
    /// `file:path.grp`. Product arguments must themselves be non-product specs.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let text = text.trim();
        let (kind, rest) = match text.split_once(':') {
            Some((k, r)) => (k, r),
            None => (text, ""),
        };
        let unexpected = |what: &str| Error::UnknownSpec(format!("{text}: {what}"));
        let parse_n = |rest: &str| -> Result<usize> {
            rest.parse()
                .map_err(|_| unexpected("expected a numeric parameter"))
        };
        match kind {
            "sym" => Ok(GroupSpec::Sym(parse_n(rest)?)),
            "alt" => Ok(GroupSpec::Alt(parse_n(rest)?)),
            "cyclic" => Ok(GroupSpec::Cyclic(parse_n(rest)?)),
            "dihedral" => Ok(GroupSpec::Dihedral(parse_n(rest)?)),
            "psl2" => Ok(GroupSpec::Psl2(parse_n(rest)? as u64)),
            "frobenius20" => Ok(GroupSpec::Frobenius20),
            "sl23" => Ok(GroupSpec::Sl23),
            "gl23" => Ok(GroupSpec::Gl23),
            "direct" | "wreath_small" => {
                let (left, right) = rest
                    .split_once(',')
                    .ok_or_else(|| unexpected("expected two comma-separated factors"))?;
                let a = Box::new(GroupSpec::parse(left)?);
                let b = Box::new(GroupSpec::parse(right)?);
                if matches!(
                    (a.as_ref(), b.as_ref()),
                    (GroupSpec::Direct(..) | GroupSpec::WreathSmall(..), _)
                        | (_, GroupSpec::Direct(..) | GroupSpec::WreathSmall(..))
                ) {
                    return Err(unexpected("nested products are not supported"));
                }
                if kind == "direct" {
                    Ok(GroupSpec::Direct(a, b))
                } else {
                    Ok(GroupSpec::WreathSmall(a, b))
                }
            }
            "file" => Ok(GroupSpec::File(rest.to_string())),
            _ => Err(Error::UnknownSpec(text.to_string())),
        }
    }

    /// Closed-form order used as the construction tripwire.
    pub fn expected_order(&self) -> Result<u64> {
        Ok(match self {
            GroupSpec::Sym(n) => factorial(*n as u64),
            GroupSpec::Alt(n) => {
                if *n < 3 {
                    1.max(factorial(*n as u64) / 2)
                } else {
                    factorial(*n as u64) / 2
                }
            }
            GroupSpec::Cyclic(n) => *n as u64,
            GroupSpec::Dihedral(n) => 2 * *n as u64,
            GroupSpec::Psl2(p) => p * (p * p - 1) / 2,
            GroupSpec::Frobenius20 => 20,
            GroupSpec::Sl23 => 24,
            GroupSpec::Gl23 => 48,
            GroupSpec::Direct(a, b) => a.expected_order()? * b.expected_order()?,
            GroupSpec::WreathSmall(a, b) => {
                let base = a.expected_order()?;
                let top_degree = b.build()?.degree() as u32;
                base.pow(top_degree) * b.expected_order()?
            }
            GroupSpec::File(_) => return Err(Error::ParameterOutOfRange(
                "file specs have no closed-form order".into(),
            )),
        })
    }

    /// Builds the faithful permutation group and verifies its order.
    pub fn build(&self) -> Result<PermGroup> {
        let group = match self {
            GroupSpec::Sym(n) => build_sym(*n)?,
            GroupSpec::Alt(n) => build_alt(*n)?,
            GroupSpec::Cyclic(n) => build_cyclic(*n)?,
            GroupSpec::Dihedral(n) => build_dihedral(*n)?,
            GroupSpec::Psl2(p) => build_psl2(*p)?,
            GroupSpec::Frobenius20 => build_frobenius20(),
            GroupSpec::Sl23 => build_gf3_matrix_group(false),
            GroupSpec::Gl23 => build_gf3_matrix_group(true),
            GroupSpec::Direct(a, b) => build_direct(&a.build()?, &b.build()?)?,
            GroupSpec::WreathSmall(a, b) => build_wreath(&a.build()?, &b.build()?)?,
            GroupSpec::File(path) => return load_group_file(path),
        };
        let expected = self.expected_order()?;
        let built = group.order();
        if built != expected {
            return Err(Error::OrderMismatch { built, expected });
        }
        Ok(group)
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product::<u64>().max(1)
}

fn cycle(degree: usize, points: &[usize]) -> Permutation {
    let mut images: Vec<Point> = (0..degree as Point).collect();
    for w in 0..points.len() {
        images[points[w]] = points[(w + 1) % points.len()] as Point;
    }
    Permutation::from_images(images).expect("cycle is a bijection")
}

fn build_sym(n: usize) -> Result<PermGroup> {
    if n == 0 || n > 8 {
        return Err(Error::ParameterOutOfRange(format!("sym:{n} (want 1..=8)")));
    }
    let gens = match n {
        1 => vec![Permutation::identity(1)],
        2 => vec![cycle(2, &[0, 1])],
        _ => vec![cycle(n, &[0, 1]), cycle(n, &(0..n).collect::<Vec<_>>())],
    };
    PermGroup::from_generators(gens)
}

fn build_alt(n: usize) -> Result<PermGroup> {
    if !(3..=8).contains(&n) {
        return Err(Error::ParameterOutOfRange(format!("alt:{n} (want 3..=8)")));
    }
    let gens = if n == 3 {
        vec![cycle(3, &[0, 1, 2])]
    } else if n % 2 == 1 {
        vec![cycle(n, &[0, 1, 2]), cycle(n, &(0..n).collect::<Vec<_>>())]
    } else {
        vec![cycle(n, &[0, 1, 2]), cycle(n, &(1..n).collect::<Vec<_>>())]
    };
    PermGroup::from_generators(gens)
}

fn build_cyclic(n: usize) -> Result<PermGroup> {
    if n == 0 || n > 64 {
        return Err(Error::ParameterOutOfRange(format!(
            "cyclic:{n} (want 1..=64)"
        )));
    }
    if n == 1 {
        return Ok(PermGroup::trivial(1));
    }
    PermGroup::from_generators(vec![cycle(n, &(0..n).collect::<Vec<_>>())])
}

fn build_dihedral(n: usize) -> Result<PermGroup> {
    if !(3..=32).contains(&n) {
        return Err(Error::ParameterOutOfRange(format!(
            "dihedral:{n} (want 3..=32)"
        )));
    }
    let rotation = cycle(n, &(0..n).collect::<Vec<_>>());
    // Reflection fixing point 0: i -> n - i.
    let mut images: Vec<Point> = vec![0; n];
    for i in 1..n {
        images[i] = (n - i) as Point;
    }
    let reflection = Permutation::from_images(images).expect("reflection is a bijection");
    PermGroup::from_generators(vec![rotation, reflection])
}

/// PSL(2,p) on the p+1 projective points 0, 1, …, p−1, ∞ (point index p is ∞),
/// generated by the images of the standard unipotent z ↦ z+1 and Weyl
/// element z ↦ −1/z.
fn build_psl2(p: u64) -> Result<PermGroup> {
    if ![5, 7, 11, 13].contains(&p) {
        return Err(Error::ParameterOutOfRange(format!(
            "psl2:{p} (want p in {{5,7,11,13}})"
        )));
    }
    let n = (p + 1) as usize;
    let inf = p as usize;
    let mut unipotent = vec![0 as Point; n];
    for z in 0..p {
        unipotent[z as usize] = ((z + 1) % p) as Point;
    }
    unipotent[inf] = inf as Point;
    let mut weyl = vec![0 as Point; n];
    weyl[0] = inf as Point;
    weyl[inf] = 0;
    for z in 1..p {
        weyl[z as usize] = ((p - mod_inverse(z, p)) % p) as Point;
    }
    PermGroup::from_generators(vec![
        Permutation::from_images(unipotent).expect("translation is a bijection"),
        Permutation::from_images(weyl).expect("inversion is a bijection"),
    ])
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: p is prime and a ≠ 0 mod p.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// AGL(1,5) = C5 ⋊ C4 on 5 points: x ↦ x+1 and x ↦ 2x over GF(5).
fn build_frobenius20() -> PermGroup {
    let shift = cycle(5, &[0, 1, 2, 3, 4]);
    let mut images = vec![0 as Point; 5];
    for x in 0..5u64 {
        images[x as usize] = ((2 * x) % 5) as Point;
    }
    let scale = Permutation::from_images(images).expect("scaling is a bijection");
    PermGroup::from_generators(vec![shift, scale]).expect("two generators of degree 5")
}

/// SL(2,3) or GL(2,3) acting on the 8 nonzero vectors of GF(3)².
fn build_gf3_matrix_group(full_gl: bool) -> PermGroup {
    let vectors: Vec<(u64, u64)> = (0..3u64)
        .flat_map(|a| (0..3u64).map(move |b| (a, b)))
        .filter(|&(a, b)| (a, b) != (0, 0))
        .collect();
    let index = |v: (u64, u64)| vectors.iter().position(|&w| w == v).unwrap();
    let act = |m: [[u64; 2]; 2]| -> Permutation {
        let mut images = vec![0 as Point; 8];
        for (i, &(a, b)) in vectors.iter().enumerate() {
            let v = (
                (m[0][0] * a + m[0][1] * b) % 3,
                (m[1][0] * a + m[1][1] * b) % 3,
            );
            images[i] = index(v) as Point;
        }
        Permutation::from_images(images).expect("invertible matrix acts bijectively")
    };
    let mut gens = vec![act([[1, 1], [0, 1]]), act([[0, 2], [1, 0]])];
    if full_gl {
        gens.push(act([[2, 0], [0, 1]]));
    }
    PermGroup::from_generators(gens).expect("matrix generators of degree 8")
}

/// Direct product acting on the disjoint union of the factors' points.
fn build_direct(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let degree = a.degree() + b.degree();
    let mut gens = Vec::new();
    for g in a.generators() {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        for i in 0..a.degree() {
            images[i] = g.apply(i as Point);
        }
        gens.push(Permutation::from_images(images)?);
    }
    for g in b.generators() {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        for i in 0..b.degree() {
            images[a.degree() + i] = a.degree() as Point + g.apply(i as Point);
        }
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::from_generators(gens)
}

/// Imprimitive wreath product `A wr B` on deg(A)·deg(B) points: one copy of A
/// on the first block plus B permuting the blocks. B must be transitive, which
/// holds for the corpus shapes; the order tripwire rejects anything else.
fn build_wreath(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let block = a.degree();
    let degree = block * b.degree();
    if degree == 0 || degree > 1000 {
        return Err(Error::ParameterOutOfRange(format!(
            "wreath degree {degree}"
        )));
    }
    let mut gens = Vec::new();
    for g in a.generators() {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        for i in 0..block {
            images[i] = g.apply(i as Point);
        }
        gens.push(Permutation::from_images(images)?);
    }
    for g in b.generators() {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        for j in 0..b.degree() {
            let jj = g.apply(j as Point) as usize;
            for i in 0..block {
                images[j * block + i] = (jj * block + i) as Point;
            }
        }
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::from_generators(gens)
}

/// Loads the text format: line 1 `degree N`, then one generator per
/// non-empty, non-`#` line in cycle notation.
pub fn load_group_file<P: AsRef<Path>>(path: P) -> Result<PermGroup> {
    let content = std::fs::read_to_string(path)?;
    parse_group_text(&content)
}

pub fn parse_group_text(content: &str) -> Result<PermGroup> {
    let mut degree: Option<usize> = None;
    let mut gens: Vec<Permutation> = Vec::new();
    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match degree {
            None => {
                let rest = line.strip_prefix("degree").ok_or(Error::MalformedFile {
                    line: lineno + 1,
                    msg: "expected 'degree N' header".into(),
                })?;
                degree = Some(rest.trim().parse().map_err(|_| Error::MalformedFile {
                    line: lineno + 1,
                    msg: format!("bad degree {:?}", rest.trim()),
                })?);
            }
            Some(n) => {
                let g = Permutation::parse(line, n).map_err(|e| Error::MalformedFile {
                    line: lineno + 1,
                    msg: e.to_string(),
                })?;
                gens.push(g);
            }
        }
    }
    if degree.is_none() {
        return Err(Error::MalformedFile {
            line: 0,
            msg: "missing 'degree N' header".into(),
        });
    }
    if gens.is_empty() {
        return Err(Error::EmptyGeneratorList);
    }
    PermGroup::from_generators(gens)
}

/// Serializes a group to the text file format in canonical cycle notation.
pub fn format_group_text(group: &PermGroup) -> String {
    let mut out = format!("degree {}\n", group.degree());
    for g in group.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

/// The fixed corpus the acceptance suites sweep.
pub fn default_corpus() -> Vec<GroupSpec> {
    let mut corpus = Vec::new();
    for n in 3..=6 {
        corpus.push(GroupSpec::Sym(n));
    }
    for n in 4..=6 {
        corpus.push(GroupSpec::Alt(n));
    }
    for n in 2..=12 {
        corpus.push(GroupSpec::Cyclic(n));
    }
    for n in 3..=8 {
        corpus.push(GroupSpec::Dihedral(n));
    }
    corpus.push(GroupSpec::Frobenius20);
    corpus.push(GroupSpec::Sl23);
    corpus.push(GroupSpec::Gl23);
    for p in [5, 7, 11, 13] {
        corpus.push(GroupSpec::Psl2(p));
    }
    corpus.push(GroupSpec::Direct(
        Box::new(GroupSpec::Sym(3)),
        Box::new(GroupSpec::Alt(5)),
    ));
    corpus.push(GroupSpec::Direct(
        Box::new(GroupSpec::Sym(4)),
        Box::new(GroupSpec::Sym(3)),
    ));
    corpus.push(GroupSpec::WreathSmall(
        Box::new(GroupSpec::Sym(3)),
        Box::new(GroupSpec::Cyclic(2)),
    ));
    corpus
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive;

    #[test]
    fn corpus_orders_pass_tripwire() {
        for spec in default_corpus() {
            let g = spec.build().unwrap_or_else(|e| panic!("{spec}: {e}"));
            assert_eq!(g.order(), spec.expected_order().unwrap(), "{spec}");
        }
    }

    #[test]
    fn constructors_are_deterministic() {
        let a = GroupSpec::parse("psl2:7").unwrap().build().unwrap();
        let b = GroupSpec::parse("psl2:7").unwrap().build().unwrap();
        assert_eq!(a.generators(), b.generators());
    }

    #[test]
    fn sym5_and_psl27() {
        assert_eq!(GroupSpec::Sym(5).build().unwrap().order(), 120);
        let psl = GroupSpec::Psl2(7).build().unwrap();
        assert_eq!(psl.degree(), 8);
        assert_eq!(psl.order(), 168);
        // Exhaustive closure confirms the chain order.
        assert_eq!(naive::order_by_closure(8, psl.generators()), 168);
    }

    #[test]
    fn direct_product_of_s3_and_a5() {
        let g = GroupSpec::parse("direct:sym:3,alt:5").unwrap().build().unwrap();
        assert_eq!(g.degree(), 8);
        assert_eq!(g.order(), 360);
    }

    #[test]
    fn wreath_s3_c2() {
        let g = GroupSpec::parse("wreath_small:sym:3,cyclic:2")
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(g.degree(), 6);
        assert_eq!(g.order(), 72);
    }

    #[test]
    fn matrix_groups_over_gf3() {
        assert_eq!(GroupSpec::Sl23.build().unwrap().order(), 24);
        assert_eq!(GroupSpec::Gl23.build().unwrap().order(), 48);
    }

    #[test]
    fn spec_strings_round_trip() {
        for text in [
            "sym:5",
            "alt:6",
            "cyclic:12",
            "dihedral:8",
            "psl2:13",
            "frobenius20",
            "sl23",
            "gl23",
            "direct:sym:3,alt:5",
            "wreath_small:sym:3,cyclic:2",
        ] {
            let spec = GroupSpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!(GroupSpec::parse("nonsense:3").is_err());
        assert!(GroupSpec::parse("sym:99").unwrap().build().is_err());
    }

    #[test]
    fn group_file_round_trip() {
        let g = parse_group_text("degree 4\n# comment\n(1 2)\n(1 2 3 4)\n").unwrap();
        assert_eq!(g.order(), 24);
        let text = format_group_text(&g);
        assert_eq!(text, "degree 4\n(1 2)\n(1 2 3 4)\n");
        let again = parse_group_text(&text).unwrap();
        assert_eq!(again.order(), 24);
    }

    #[test]
    fn group_file_errors() {
        assert!(matches!(
            parse_group_text("degree 3\n"),
            Err(Error::EmptyGeneratorList)
        ));
        assert!(matches!(
            parse_group_text("degree 5\n(1 2 9)\n"),
            Err(Error::MalformedFile { line: 2, .. })
        ));
        let a5 = parse_group_text("degree 5\n(1 2 3)\n(3 4 5)\n").unwrap();
        assert_eq!(a5.order(), 60);
    }
}
