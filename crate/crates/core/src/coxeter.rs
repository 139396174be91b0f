//! Crystallographic Coxeter systems and exact element arithmetic.
//!
//! A system is constructed from a preset name ("A3", "B4", "C2~", ...) or an
//! explicit generalized Cartan matrix. Group elements are stored as the
//! integer matrices of the reflection action on the root lattice in
//! simple-root coordinates; this representation is faithful for
//! crystallographic systems, so the row-major entry sequence serves as the
//! canonical key of an element.
//!
//! Conventions, fixed here and used by all word I/O:
//! - library indices for generators are 0-based; word strings are
//!   comma-separated 1-based indices and the empty string denotes the
//!   identity;
//! - affine presets place the affine node at generator 1 (index 0), followed
//!   by the nodes of the underlying finite diagram in Bourbaki order.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Default hard cap on the number of elements any single enumeration may
/// produce (infinite groups make a cap mandatory).
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Which side a generator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An irreducible finite crystallographic type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrreducibleType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl IrreducibleType {
    pub fn order(&self) -> u64 {
        fn factorial(n: usize) -> u64 {
            (1..=n as u64).product()
        }
        match *self {
            IrreducibleType::A(n) => factorial(n + 1),
            IrreducibleType::B(n) => (1u64 << n) * factorial(n),
            IrreducibleType::D(n) => (1u64 << (n - 1)) * factorial(n),
            IrreducibleType::E(6) => 51_840,
            IrreducibleType::E(7) => 2_903_040,
            IrreducibleType::E(8) => 696_729_600,
            IrreducibleType::E(_) => unreachable!("E rank is 6, 7 or 8"),
            IrreducibleType::F4 => 1152,
            IrreducibleType::G2 => 12,
        }
    }

    pub fn positive_roots(&self) -> usize {
        match *self {
            IrreducibleType::A(n) => n * (n + 1) / 2,
            IrreducibleType::B(n) => n * n,
            IrreducibleType::D(n) => n * (n - 1),
            IrreducibleType::E(6) => 36,
            IrreducibleType::E(7) => 63,
            IrreducibleType::E(8) => 120,
            IrreducibleType::E(_) => unreachable!("E rank is 6, 7 or 8"),
            IrreducibleType::F4 => 24,
            IrreducibleType::G2 => 6,
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            IrreducibleType::A(n) | IrreducibleType::B(n) | IrreducibleType::D(n) => n,
            IrreducibleType::E(n) => n,
            IrreducibleType::F4 => 4,
            IrreducibleType::G2 => 2,
        }
    }
}

impl fmt::Display for IrreducibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IrreducibleType::A(n) => write!(f, "A{n}"),
            IrreducibleType::B(n) => write!(f, "B{n}"),
            IrreducibleType::D(n) => write!(f, "D{n}"),
            IrreducibleType::E(n) => write!(f, "E{n}"),
            IrreducibleType::F4 => write!(f, "F4"),
            IrreducibleType::G2 => write!(f, "G2"),
        }
    }
}

/// A crystallographic Coxeter system realized by an integer generalized
/// Cartan matrix. Immutable after construction; share via `Arc`.
#[derive(Debug)]
pub struct CoxeterSystem {
    rank: usize,
    cartan: SquareMatrix,
    /// Coxeter matrix entries m_ij, row-major; 0 encodes infinity.
    coxeter: Vec<u32>,
    descriptor: String,
    /// Finite irreducible components; `None` means the group is infinite.
    components: Option<Vec<IrreducibleType>>,
    order: Option<u64>,
    longest_length: Option<usize>,
    digest_hex: String,
}

impl CoxeterSystem {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &SquareMatrix {
        &self.cartan
    }

    /// The order of s_i s_j; `None` means infinite.
    pub fn coxeter_order(&self, i: usize, j: usize) -> Option<u32> {
        match self.coxeter[i * self.rank + j] {
            0 => None,
            m => Some(m),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components.is_some()
    }

    pub fn order(&self) -> Option<u64> {
        self.order
    }

    pub fn longest_length(&self) -> Option<usize> {
        self.longest_length
    }

    /// Irreducible components when the group is finite.
    pub fn finite_components(&self) -> Option<&[IrreducibleType]> {
        self.components.as_deref()
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// 1-based generator labels, as used in word I/O.
    pub fn generator_labels(&self) -> Vec<usize> {
        (1..=self.rank).collect()
    }

    /// SHA-256 hex of the canonical Cartan matrix serialization. This is the
    /// system identity used by caches and element binding.
    pub fn digest_hex(&self) -> &str {
        &self.digest_hex
    }

    pub fn identity(self: &Arc<Self>) -> GroupElement {
        GroupElement {
            system: Arc::clone(self),
            matrix: SquareMatrix::identity(self.rank),
            inverse: SquareMatrix::identity(self.rank),
            length: 0,
        }
    }

    pub fn generator(self: &Arc<Self>, s: usize) -> Result<GroupElement> {
        self.identity().apply_generator(s, Side::Right)
    }

    fn check_generator(&self, s: usize) -> Result<()> {
        if s >= self.rank {
            return Err(Error::BadGenerator {
                index: s,
                rank: self.rank,
            });
        }
        Ok(())
    }
}

fn canonical_cartan_serialization(cartan: &SquareMatrix) -> String {
    let n = cartan.size();
    let rows: Vec<String> = (0..n)
        .map(|r| {
            cartan
                .row(r)
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("cartan:{n}:{}", rows.join(";"))
}

/// SHA-256 hex digest of a Cartan matrix in canonical serialization.
pub fn cartan_digest_hex(cartan: &SquareMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical_cartan_serialization(cartan).as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Derive the Coxeter matrix from a validated generalized Cartan matrix.
/// Entry products map as 0 -> m=2, 1 -> 3, 2 -> 4, 3 -> 6, >=4 -> infinity.
fn derive_coxeter_matrix(cartan: &SquareMatrix) -> Result<Vec<u32>> {
    let n = cartan.size();
    let mut m = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                if cartan.get(i, i) != 2 {
                    return Err(Error::InvalidCartanMatrix(format!(
                        "diagonal entry A[{}][{}] = {} (must be 2)",
                        i + 1,
                        i + 1,
                        cartan.get(i, i)
                    )));
                }
                m[i * n + j] = 1;
                continue;
            }
            let a = cartan.get(i, j);
            let b = cartan.get(j, i);
            if a > 0 || b > 0 {
                return Err(Error::InvalidCartanMatrix(format!(
                    "off-diagonal entry A[{}][{}] must be <= 0",
                    i + 1,
                    j + 1
                )));
            }
            if (a == 0) != (b == 0) {
                return Err(Error::InvalidCartanMatrix(format!(
                    "A[{}][{}] = 0 requires A[{}][{}] = 0",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
            let prod = a.checked_mul(b).ok_or(Error::Overflow("Cartan product"))?;
            m[i * n + j] = match prod {
                0 => 2,
                1 => 3,
                2 => 4,
                3 => 6,
                _ => 0, // infinite order
            };
        }
    }
    Ok(m)
}

/// Classify one connected diagram component; `None` means infinite type.
fn classify_component(nodes: &[usize], coxeter: &[u32], rank: usize) -> Option<IrreducibleType> {
    let n = nodes.len();
    if n == 1 {
        return Some(IrreducibleType::A(1));
    }
    let m = |i: usize, j: usize| coxeter[i * rank + j];
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    for (a, &i) in nodes.iter().enumerate() {
        for &j in &nodes[a + 1..] {
            let mij = m(i, j);
            if mij == 0 {
                return None; // an infinite bond
            }
            if mij >= 3 {
                edges.push((i, j, mij));
            }
        }
    }
    if edges.len() != n - 1 {
        return None; // a cycle (the component is connected by construction)
    }
    let mut degree = vec![0usize; rank];
    for &(i, j, _) in &edges {
        degree[i] += 1;
        degree[j] += 1;
    }
    if nodes.iter().any(|&v| degree[v] >= 4) {
        return None;
    }
    let branch_nodes: Vec<usize> = nodes.iter().copied().filter(|&v| degree[v] == 3).collect();
    if branch_nodes.len() >= 2 {
        return None;
    }
    let c4 = edges.iter().filter(|e| e.2 == 4).count();
    let c6 = edges.iter().filter(|e| e.2 == 6).count();
    if c6 > 0 {
        return if n == 2 && c6 == 1 && c4 == 0 {
            Some(IrreducibleType::G2)
        } else {
            None
        };
    }
    let neighbors = |v: usize| -> Vec<usize> {
        edges
            .iter()
            .filter_map(|&(i, j, _)| {
                if i == v {
                    Some(j)
                } else if j == v {
                    Some(i)
                } else {
                    None
                }
            })
            .collect()
    };
    if let Some(&center) = branch_nodes.first() {
        if c4 > 0 {
            return None;
        }
        // Walk each of the three arms to its leaf.
        let mut arms: Vec<usize> = neighbors(center)
            .into_iter()
            .map(|first| {
                let mut len = 1;
                let mut prev = center;
                let mut cur = first;
                loop {
                    let next: Vec<usize> =
                        neighbors(cur).into_iter().filter(|&v| v != prev).collect();
                    match next.as_slice() {
                        [] => break,
                        [only] => {
                            prev = cur;
                            cur = *only;
                            len += 1;
                        }
                        _ => unreachable!("single branch node"),
                    }
                }
                len
            })
            .collect();
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, k] => Some(IrreducibleType::D(k + 3)),
            [1, 2, 2] => Some(IrreducibleType::E(6)),
            [1, 2, 3] => Some(IrreducibleType::E(7)),
            [1, 2, 4] => Some(IrreducibleType::E(8)),
            _ => None,
        };
    }
    // A path.
    match c4 {
        0 => Some(IrreducibleType::A(n)),
        1 => {
            let &(i, j, _) = edges.iter().find(|e| e.2 == 4).unwrap();
            if degree[i] == 1 || degree[j] == 1 {
                Some(IrreducibleType::B(n))
            } else if n == 4 {
                Some(IrreducibleType::F4)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn classify(cartan: &SquareMatrix, coxeter: &[u32]) -> Option<Vec<IrreducibleType>> {
    let rank = cartan.size();
    let mut seen = vec![false; rank];
    let mut components = Vec::new();
    for start in 0..rank {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut nodes = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            nodes.push(v);
            for u in 0..rank {
                if !seen[u] && coxeter[v * rank + u] != 2 && u != v {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        nodes.sort_unstable();
        components.push(classify_component(&nodes, coxeter, rank)?);
    }
    Some(components)
}

/// Build a system from an explicit generalized Cartan matrix.
pub fn build_system_from_cartan(rows: &[Vec<i64>]) -> Result<Arc<CoxeterSystem>> {
    build_named_system_from_cartan(rows, None)
}

fn build_named_system_from_cartan(
    rows: &[Vec<i64>],
    name: Option<&str>,
) -> Result<Arc<CoxeterSystem>> {
    if rows.is_empty() {
        return Err(Error::InvalidCartanMatrix("matrix is empty".into()));
    }
    let cartan = SquareMatrix::from_rows(rows)?;
    let coxeter = derive_coxeter_matrix(&cartan)?;
    let components = classify(&cartan, &coxeter);
    let (order, longest_length) = match &components {
        Some(comps) => {
            let mut order: u64 = 1;
            let mut longest = 0usize;
            for c in comps {
                order = order
                    .checked_mul(c.order())
                    .ok_or(Error::Overflow("group order"))?;
                longest += c.positive_roots();
            }
            (Some(order), Some(longest))
        }
        None => (None, None),
    };
    let digest_hex = cartan_digest_hex(&cartan);
    let descriptor = name
        .map(str::to_owned)
        .unwrap_or_else(|| format!("cartan:{}", &digest_hex[..12]));
    Ok(Arc::new(CoxeterSystem {
        rank: cartan.size(),
        cartan,
        coxeter,
        descriptor,
        components,
        order,
        longest_length,
        digest_hex,
    }))
}

struct CartanBuilder {
    rows: Vec<Vec<i64>>,
}

impl CartanBuilder {
    fn new(n: usize) -> Self {
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
        }
        CartanBuilder { rows }
    }

    fn bond(&mut self, i: usize, j: usize, aij: i64, aji: i64) -> &mut Self {
        self.rows[i][j] = aij;
        self.rows[j][i] = aji;
        self
    }

    fn single(&mut self, i: usize, j: usize) -> &mut Self {
        self.bond(i, j, -1, -1)
    }
}

fn preset_cartan(family: char, n: usize, affine: bool) -> Result<Vec<Vec<i64>>> {
    let unsupported = |msg: &str| -> Error {
        Error::UnsupportedPreset(format!(
            "{family}{n}{}: {msg}",
            if affine { "~" } else { "" }
        ))
    };
    if affine {
        // Affine node first (generator 1), then the finite diagram nodes.
        let b = match (family, n) {
            ('A', 1) => {
                let mut b = CartanBuilder::new(2);
                b.bond(0, 1, -2, -2);
                b
            }
            ('A', 2..=8) => {
                let mut b = CartanBuilder::new(n + 1);
                for i in 0..n {
                    b.single(i, i + 1);
                }
                b.single(0, n);
                b
            }
            ('B', 3..=8) => {
                let mut b = CartanBuilder::new(n + 1);
                b.single(0, 2).single(1, 2);
                for i in 2..n - 1 {
                    b.single(i, i + 1);
                }
                b.bond(n - 1, n, -2, -1);
                b
            }
            ('C', 2..=8) => {
                let mut b = CartanBuilder::new(n + 1);
                b.bond(0, 1, -1, -2);
                for i in 1..n - 1 {
                    b.single(i, i + 1);
                }
                b.bond(n - 1, n, -2, -1);
                b
            }
            ('D', 4..=8) => {
                let mut b = CartanBuilder::new(n + 1);
                b.single(0, 2).single(1, 2);
                for i in 2..n - 2 {
                    b.single(i, i + 1);
                }
                b.single(n - 2, n - 1).single(n - 2, n);
                b
            }
            ('G', 2) => {
                let mut b = CartanBuilder::new(3);
                b.single(0, 1).bond(1, 2, -1, -3);
                b
            }
            ('F', 4) => {
                let mut b = CartanBuilder::new(5);
                b.single(0, 1).single(1, 2).bond(2, 3, -2, -1).single(3, 4);
                b
            }
            _ => return Err(unsupported("no such affine preset")),
        };
        return Ok(b.rows);
    }
    let b = match (family, n) {
        ('A', 1..=8) => {
            let mut b = CartanBuilder::new(n);
            for i in 0..n - 1 {
                b.single(i, i + 1);
            }
            b
        }
        ('B', 2..=8) => {
            let mut b = CartanBuilder::new(n);
            for i in 0..n.saturating_sub(2) {
                b.single(i, i + 1);
            }
            b.bond(n - 2, n - 1, -2, -1);
            b
        }
        ('C', 2..=8) => {
            let mut b = CartanBuilder::new(n);
            for i in 0..n.saturating_sub(2) {
                b.single(i, i + 1);
            }
            b.bond(n - 2, n - 1, -1, -2);
            b
        }
        ('D', 4..=8) => {
            let mut b = CartanBuilder::new(n);
            for i in 0..n - 3 {
                b.single(i, i + 1);
            }
            b.single(n - 3, n - 2).single(n - 3, n - 1);
            b
        }
        ('E', 6..=8) => {
            let mut b = CartanBuilder::new(n);
            b.single(0, 2).single(1, 3);
            for i in 2..n - 1 {
                b.single(i, i + 1);
            }
            b
        }
        ('F', 4) => {
            let mut b = CartanBuilder::new(4);
            b.single(0, 1).bond(1, 2, -2, -1).single(2, 3);
            b
        }
        ('G', 2) => {
            let mut b = CartanBuilder::new(2);
            b.bond(0, 1, -1, -3);
            b
        }
        _ => return Err(unsupported("no such finite preset")),
    };
    Ok(b.rows)
}

/// Build a system from a preset name such as "A3", "B4" or "C2~".
pub fn build_system(descriptor: &str) -> Result<Arc<CoxeterSystem>> {
    let name = descriptor.trim();
    let upper = name.to_ascii_uppercase();
    let affine = upper.ends_with('~');
    let stem = if affine { &upper[..upper.len() - 1] } else { &upper };
    let mut chars = stem.chars();
    let family = chars
        .next()
        .ok_or_else(|| Error::UnsupportedPreset(name.to_string()))?;
    let digits: String = chars.collect();
    if matches!(family, 'H' | 'I') {
        return Err(Error::NonCrystallographic(format!(
            "{name} has a bond order outside {{2,3,4,6,infinity}}"
        )));
    }
    let n: usize = digits
        .parse()
        .map_err(|_| Error::UnsupportedPreset(name.to_string()))?;
    let rows = preset_cartan(family, n, affine)?;
    let canonical = format!("{family}{n}{}", if affine { "~" } else { "" });
    let system = build_named_system_from_cartan(&rows, Some(&canonical))?;
    // Presets must classify as expected; a mismatch would mean a bad table.
    if affine {
        debug_assert!(!system.is_finite(), "affine preset classified finite");
    } else {
        debug_assert!(system.is_finite(), "finite preset classified infinite");
    }
    Ok(system)
}

/// A group element: the matrix of its action on the root lattice, the matrix
/// of the inverse action (kept for O(rank) left-descent tests), and the
/// cached length.
#[derive(Clone)]
pub struct GroupElement {
    system: Arc<CoxeterSystem>,
    matrix: SquareMatrix,
    inverse: SquareMatrix,
    length: usize,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupElement({} in {}, len {})",
            format_word(&self.reduced_word()),
            self.system.descriptor(),
            self.length
        )
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.system.digest_hex == other.system.digest_hex && self.matrix == other.matrix
    }
}

impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    /// Canonical order: by length, then by row-major matrix entries.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.system
            .digest_hex
            .cmp(&other.system.digest_hex)
            .then_with(|| self.length.cmp(&other.length))
            .then_with(|| self.matrix.cmp(&other.matrix))
    }
}

impl GroupElement {
    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.system
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn same_system(&self, other: &GroupElement) -> bool {
        self.system.digest_hex == other.system.digest_hex
    }

    /// True if s is a descent on the given side, i.e. multiplication by s on
    /// that side shortens the element. Right descent: the image of alpha_s
    /// under the element has all coordinates <= 0; left descent: same test
    /// on the inverse action.
    pub fn is_descent(&self, s: usize, side: Side) -> bool {
        match side {
            Side::Right => self.matrix.column_nonpositive(s),
            Side::Left => self.inverse.column_nonpositive(s),
        }
    }

    /// The set of descent generators on the given side.
    pub fn descents(&self, side: Side) -> Vec<usize> {
        (0..self.system.rank)
            .filter(|&s| self.is_descent(s, side))
            .collect()
    }

    /// Descents as a bitmask over generator indices.
    pub fn descent_mask(&self, side: Side) -> u32 {
        let mut mask = 0u32;
        for s in 0..self.system.rank {
            if self.is_descent(s, side) {
                mask |= 1 << s;
            }
        }
        mask
    }

    /// Multiply by generator s on the given side. The length changes by
    /// exactly one, with the direction decided by the descent test.
    pub fn apply_generator(&self, s: usize, side: Side) -> Result<GroupElement> {
        self.system.check_generator(s)?;
        let shortens = self.is_descent(s, side);
        let mut matrix = self.matrix.clone();
        let mut inverse = self.inverse.clone();
        let row = self.system.cartan.row(s);
        match side {
            Side::Right => {
                matrix.mul_reflection_right(s, row)?;
                inverse.mul_reflection_left(s, row)?;
            }
            Side::Left => {
                matrix.mul_reflection_left(s, row)?;
                inverse.mul_reflection_right(s, row)?;
            }
        }
        let length = if shortens {
            self.length - 1
        } else {
            self.length + 1
        };
        Ok(GroupElement {
            system: Arc::clone(&self.system),
            matrix,
            inverse,
            length,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            system: Arc::clone(&self.system),
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            length: self.length,
        }
    }

    /// The ShortLex-minimal reduced word (0-based generator indices),
    /// obtained by repeatedly stripping the smallest left descent.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length);
        let mut cur = self.clone();
        while cur.length > 0 {
            let s = (0..self.system.rank)
                .find(|&s| cur.is_descent(s, Side::Left))
                .expect("a non-identity element has a left descent");
            word.push(s);
            cur = cur
                .apply_generator(s, Side::Left)
                .expect("stripping a descent cannot overflow");
        }
        word
    }

    pub fn product(&self, other: &GroupElement) -> Result<GroupElement> {
        if !self.same_system(other) {
            return Err(Error::SystemMismatch);
        }
        let mut out = self.clone();
        for &s in &other.reduced_word() {
            out = out.apply_generator(s, Side::Right)?;
        }
        Ok(out)
    }
}

/// Multiply out a word (0-based generator indices) left to right.
pub fn word_to_element(system: &Arc<CoxeterSystem>, word: &[usize]) -> Result<GroupElement> {
    let mut out = system.identity();
    for &s in word {
        out = out.apply_generator(s, Side::Right)?;
    }
    Ok(out)
}

/// Parse a word string of comma-separated 1-based generator indices into
/// 0-based indices. The empty string denotes the identity.
pub fn parse_word(text: &str) -> Result<Vec<usize>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|tok| {
            let v: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::InvalidWord(format!("bad generator index `{tok}`")))?;
            if v == 0 {
                return Err(Error::InvalidWord(
                    "generator indices are 1-based; 0 is not valid".into(),
                ));
            }
            Ok(v - 1)
        })
        .collect()
}

/// Format a 0-based word as comma-separated 1-based indices.
pub fn format_word(word: &[usize]) -> String {
    word.iter()
        .map(|s| (s + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// All elements of length <= max_len, grouped by length. Level k is sorted
/// by canonical matrix key, so enumeration order is deterministic.
#[derive(Debug, Clone)]
pub struct Ball {
    pub levels: Vec<Vec<GroupElement>>,
    /// True when the group was exhausted before reaching max_len.
    pub saturated: bool,
}

impl Ball {
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn total(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.levels.iter().flatten()
    }
}

/// Breadth-first ball enumeration with deduplication by canonical matrix.
pub fn ball_capped(system: &Arc<CoxeterSystem>, max_len: usize, cap: usize) -> Result<Ball> {
    let exhausted_at = |len: usize| system.longest_length().is_some_and(|l| len >= l);
    let mut levels: Vec<Vec<GroupElement>> = vec![vec![system.identity()]];
    let mut total = 1usize;
    for len in 0..max_len {
        if exhausted_at(len) {
            break;
        }
        let mut seen: HashSet<SquareMatrix> = HashSet::new();
        let mut next: Vec<GroupElement> = Vec::new();
        for u in &levels[len] {
            for s in 0..system.rank() {
                if u.is_descent(s, Side::Right) {
                    continue;
                }
                let v = u.apply_generator(s, Side::Right)?;
                if seen.insert(v.matrix.clone()) {
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            return Ok(Ball {
                levels,
                saturated: true,
            });
        }
        total += next.len();
        if total > cap {
            return Err(Error::ResourceLimit { cap });
        }
        next.sort();
        levels.push(next);
    }
    let saturated = exhausted_at(levels.len() - 1);
    Ok(Ball { levels, saturated })
}

/// `ball_capped` with the default element cap.
pub fn ball(system: &Arc<CoxeterSystem>, max_len: usize) -> Result<Ball> {
    ball_capped(system, max_len, DEFAULT_ELEMENT_CAP)
}

/// The longest element w_0 of a finite system, found by greedily ascending
/// through non-descents.
pub fn longest_element(system: &Arc<CoxeterSystem>) -> Result<GroupElement> {
    if !system.is_finite() {
        return Err(Error::InfiniteGroup);
    }
    let mut w = system.identity();
    'ascend: loop {
        for s in 0..system.rank() {
            if !w.is_descent(s, Side::Right) {
                w = w.apply_generator(s, Side::Right)?;
                continue 'ascend;
            }
        }
        break;
    }
    debug_assert_eq!(Some(w.length), system.longest_length());
    Ok(w)
}
