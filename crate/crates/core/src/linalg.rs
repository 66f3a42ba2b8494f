//! Dense bit-packed vectors over F2 and incremental row echelon forms.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i);
        v
    }

    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1 << (i & 63);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// First set bit at position `>= from`.
    #[inline]
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from >> 6;
        let mut w = self.words[wi] & (!0u64 << (from & 63));
        loop {
            if w != 0 {
                let i = (wi << 6) + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn ones(&self) -> Ones<'_> {
        Ones { v: self, next: 0 }
    }

    /// Extend with zeros to a new length.
    pub fn resized(&self, len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for i in self.ones() {
            if i < len {
                v.set(i);
            }
        }
        v
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

pub struct Ones<'a> {
    v: &'a BitVec,
    next: usize,
}

impl Iterator for Ones<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        let i = self.v.next_one(self.next)?;
        self.next = i + 1;
        Some(i)
    }
}

/// Row echelon form built incrementally. Each row's lowest set bit is its
/// pivot and no two rows share a pivot. Rows optionally carry a tag vector
/// that is combined alongside, which records how a row was obtained.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    tag_dim: usize,
    rows: Vec<BitVec>,
    tags: Vec<BitVec>,
    pivot_row: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Echelon {
    pub fn new(dim: usize, tag_dim: usize) -> Self {
        Echelon { dim, tag_dim, rows: Vec::new(), tags: Vec::new(), pivot_row: vec![NONE; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag_dim(&self) -> usize {
        self.tag_dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn tags(&self) -> &[BitVec] {
        &self.tags
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.next_one(0).unwrap())
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NONE
    }

    /// Reduce `v` in place, accumulating row tags into `tag`.
    pub fn reduce_tagged(&self, v: &mut BitVec, tag: &mut BitVec) {
        let mut i = 0;
        while let Some(p) = v.next_one(i) {
            let r = self.pivot_row[p];
            if r == NONE {
                i = p + 1;
            } else {
                v.xor_assign(&self.rows[r as usize]);
                tag.xor_assign(&self.tags[r as usize]);
            }
        }
    }

    pub fn reduce(&self, v: &mut BitVec) {
        let mut i = 0;
        while let Some(p) = v.next_one(i) {
            let r = self.pivot_row[p];
            if r == NONE {
                i = p + 1;
            } else {
                v.xor_assign(&self.rows[r as usize]);
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        self.reduce(&mut v);
        v.is_zero()
    }

    /// Insert a row after reduction. When `v` is dependent on existing rows
    /// nothing is added and the accumulated tag (a kernel relation when tags
    /// track sources) is returned in `Err`.
    pub fn insert_tagged(&mut self, mut v: BitVec, mut tag: BitVec) -> Result<(), BitVec> {
        self.reduce_tagged(&mut v, &mut tag);
        match v.next_one(0) {
            None => Err(tag),
            Some(p) => {
                self.pivot_row[p] = self.rows.len() as u32;
                self.rows.push(v);
                self.tags.push(tag);
                Ok(())
            }
        }
    }

    pub fn insert(&mut self, v: BitVec) -> bool {
        let tag = BitVec::zeros(self.tag_dim);
        self.insert_tagged(v, tag).is_ok()
    }

    /// Widen the tag space, keeping existing tags.
    pub fn grow_tags(&mut self, tag_dim: usize) {
        if tag_dim == self.tag_dim {
            return;
        }
        self.tag_dim = tag_dim;
        for t in &mut self.tags {
            *t = t.resized(tag_dim);
        }
    }

    /// Tag combination expressing `v` in terms of inserted rows, if `v` lies
    /// in the span.
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let mut v = v.clone();
        let mut tag = BitVec::zeros(self.tag_dim);
        self.reduce_tagged(&mut v, &mut tag);
        v.is_zero().then_some(tag)
    }
}

/// Kernel of the linear map whose columns are `images`, with the image
/// echelon (tagged by source coordinates) returned alongside.
pub fn kernel_and_image(images: &[BitVec], target_dim: usize) -> (Vec<BitVec>, Echelon) {
    let n = images.len();
    let mut ech = Echelon::new(target_dim, n);
    let mut kernel = Vec::new();
    for (j, img) in images.iter().enumerate() {
        if let Err(tag) = ech.insert_tagged(img.clone(), BitVec::unit(n, j)) {
            kernel.push(tag);
        }
    }
    (kernel, ech)
}

pub fn rank(vectors: &[BitVec], dim: usize) -> usize {
    let mut ech = Echelon::new(dim, 0);
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}

/// Apply a map given by column images to a vector.
pub fn apply(images: &[BitVec], target_dim: usize, v: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(target_dim);
    for j in v.ones() {
        out.xor_assign(&images[j]);
    }
    out
}

/// A subquotient `Z / B` with `B ⊆ Z ⊆ F2^dim`. Coordinates of elements of `Z`
/// are taken with respect to a fixed set of representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    dim: usize,
    reps: Vec<BitVec>,
    reducer: Echelon,
}

impl Subquotient {
    pub fn new(dim: usize, boundaries: &Echelon, cycles: &[BitVec]) -> Self {
        let mut probe = Echelon::new(dim, 0);
        for r in boundaries.rows() {
            probe.insert(r.clone());
        }
        let mut reps = Vec::new();
        for z in cycles {
            let mut v = z.clone();
            probe.reduce(&mut v);
            if !v.is_zero() {
                probe.insert(v);
                reps.push(z.clone());
            }
        }
        Self::from_parts(dim, boundaries.rows(), reps)
    }

    pub fn from_parts(dim: usize, boundary_rows: &[BitVec], reps: Vec<BitVec>) -> Self {
        let n = reps.len();
        let mut reducer = Echelon::new(dim, n);
        for r in boundary_rows {
            let _ = reducer.insert_tagged(r.clone(), BitVec::zeros(n));
        }
        for (i, z) in reps.iter().enumerate() {
            let ok = reducer.insert_tagged(z.clone(), BitVec::unit(n, i));
            debug_assert!(ok.is_ok());
        }
        Subquotient { dim, reps, reducer }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn reps(&self) -> &[BitVec] {
        &self.reps
    }

    /// Coordinates of `z`, or `None` if `z` is not in `Z`.
    pub fn coords(&self, z: &BitVec) -> Option<BitVec> {
        self.reducer.solve(z)
    }
}
