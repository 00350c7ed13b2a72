//! Enumeration of the finite congruence image and its Cayley graph.
//!
//! The image group is enumerated by breadth-first search from the
//! identity over the generator images and their inverses, up to a hard
//! element cap. Elements are stored as packed coefficient keys; the BFS
//! spanning tree and the full element-times-generator edge table are kept
//! for presentation building.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::matrix::Matrix;

pub mod presentation;
pub mod structure;
pub mod word;

pub use presentation::{cayley_presentation, normal_generators, Presentation};
pub use structure::{is_solvable_finite, solvable_radical_index};
pub use word::Word;

/// Compact fixed-stride representation of matrices over GF(p^d):
/// n*n*d coefficients in [0, p), packed to 1, 2, or 4 bytes each.
#[derive(Debug, Clone)]
struct FinRep {
    n: usize,
    d: usize,
    p: u64,
    min_poly: Vec<u64>,
    width: usize,
}

impl FinRep {
    fn new(n: usize, field: &FieldDescriptor) -> Result<Self> {
        let (p, min_poly) = match field {
            FieldDescriptor::FiniteField { p, min_poly } => (*p, min_poly.clone()),
            _ => {
                return Err(Error::InvalidInput(
                    "image enumeration requires matrices over a finite field".into(),
                ))
            }
        };
        let width = if p <= 0x100 {
            1
        } else if p <= 0x1_0000 {
            2
        } else {
            4
        };
        Ok(FinRep {
            n,
            d: min_poly.len() - 1,
            p,
            min_poly,
            width,
        })
    }

    fn stride(&self) -> usize {
        self.n * self.n * self.d * self.width
    }

    fn coords_len(&self) -> usize {
        self.n * self.n * self.d
    }

    fn pack(&self, coords: &[u64], out: &mut Vec<u8>) {
        for &c in coords {
            match self.width {
                1 => out.push(c as u8),
                2 => out.extend_from_slice(&(c as u16).to_le_bytes()),
                _ => out.extend_from_slice(&(c as u32).to_le_bytes()),
            }
        }
    }

    fn unpack(&self, bytes: &[u8]) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.coords_len());
        match self.width {
            1 => out.extend(bytes.iter().map(|&b| b as u64)),
            2 => {
                for ch in bytes.chunks_exact(2) {
                    out.push(u16::from_le_bytes([ch[0], ch[1]]) as u64);
                }
            }
            _ => {
                for ch in bytes.chunks_exact(4) {
                    out.push(u32::from_le_bytes([ch[0], ch[1], ch[2], ch[3]]) as u64);
                }
            }
        }
        out
    }

    fn from_matrix(&self, m: &Matrix) -> Vec<u64> {
        let mut coords = Vec::with_capacity(self.coords_len());
        for e in m.entries() {
            match e {
                FieldElement::Fin(c) => coords.extend_from_slice(c),
                _ => unreachable!("finite-field matrix"),
            }
        }
        coords
    }

    fn to_matrix(&self, coords: &[u64], field: &Arc<FieldDescriptor>) -> Matrix {
        let entries = coords
            .chunks_exact(self.d)
            .map(|c| FieldElement::Fin(c.to_vec()))
            .collect();
        Matrix::from_entries(self.n, entries, field.clone()).expect("square")
    }

    /// Matrix product on flat coordinate vectors.
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.n;
        let d = self.d;
        let p = self.p;
        let mut out = vec![0u64; self.coords_len()];
        if d == 1 {
            for i in 0..n {
                for k in 0..n {
                    let aik = a[i * n + k];
                    if aik == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let prod = (aik as u128 * b[k * n + j] as u128) % p as u128;
                        out[i * n + j] = ((out[i * n + j] as u128 + prod) % p as u128) as u64;
                    }
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    let cell = &mut out[(i * n + j) * d..(i * n + j + 1) * d];
                    for k in 0..n {
                        let x = &a[(i * n + k) * d..(i * n + k + 1) * d];
                        let y = &b[(k * n + j) * d..(k * n + j + 1) * d];
                        let prod = crate::field::finite::elt_mul(x, y, p, &self.min_poly);
                        for (c, v) in cell.iter_mut().zip(prod) {
                            *c = (*c + v) % p;
                        }
                    }
                }
            }
        }
        out
    }

    fn identity(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.coords_len()];
        for i in 0..self.n {
            out[(i * self.n + i) * self.d] = 1;
        }
        out
    }
}

/// A fully enumerated finite matrix group with Cayley data.
pub struct EnumeratedGroup {
    pub field: Arc<FieldDescriptor>,
    pub n: usize,
    rep: FinRep,
    /// Packed element keys in discovery order; index 0 is the identity.
    data: Vec<u8>,
    index: HashMap<Vec<u8>, u32>,
    /// BFS tree: parent index and signed generator label per element.
    parents: Vec<u32>,
    labels: Vec<i32>,
    /// Edge tables: element x generator -> element, and the reverse.
    table: Vec<u32>,
    inverse_table: Vec<u32>,
    pub gen_images: Vec<Matrix>,
    pub cap: usize,
}

impl EnumeratedGroup {
    pub fn order(&self) -> usize {
        self.parents.len()
    }

    pub fn generator_count(&self) -> usize {
        self.gen_images.len()
    }

    fn key(&self, i: u32) -> &[u8] {
        let s = self.rep.stride();
        &self.data[i as usize * s..(i as usize + 1) * s]
    }

    pub fn matrix(&self, i: u32) -> Matrix {
        let coords = self.rep.unpack(self.key(i));
        self.rep.to_matrix(&coords, &self.field)
    }

    pub fn index_of(&self, m: &Matrix) -> Option<u32> {
        let coords = self.rep.from_matrix(m);
        let mut key = Vec::with_capacity(self.rep.stride());
        self.rep.pack(&coords, &mut key);
        self.index.get(&key).copied()
    }

    /// The spanning-tree word from the identity to element `i`.
    pub fn word(&self, i: u32) -> Word {
        let mut letters = Vec::new();
        let mut cur = i;
        while cur != 0 {
            letters.push(self.labels[cur as usize]);
            cur = self.parents[cur as usize];
        }
        letters.reverse();
        Word::from_letters(letters)
    }

    /// Evaluates a word by walking the edge tables.
    pub fn evaluate_word(&self, w: &Word) -> u32 {
        let r = self.generator_count();
        let mut cur = 0u32;
        for &l in w.letters() {
            cur = if l > 0 {
                self.table[cur as usize * r + (l - 1) as usize]
            } else {
                self.inverse_table[cur as usize * r + (-l - 1) as usize]
            };
        }
        cur
    }

    pub fn step(&self, i: u32, gen: usize) -> u32 {
        self.table[i as usize * self.generator_count() + gen]
    }

    /// True when the directed edge (u, gen, u*gen) lies on the BFS tree in
    /// either orientation.
    pub fn is_tree_edge(&self, u: u32, gen: usize) -> bool {
        let v = self.step(u, gen);
        let l = (gen + 1) as i32;
        (v != 0 && self.parents[v as usize] == u && self.labels[v as usize] == l)
            || (u != 0 && self.parents[u as usize] == v && self.labels[u as usize] == -l)
    }

    /// Index of the inverse of element `i`, by tree-word inversion.
    pub fn inverse_of(&self, i: u32) -> u32 {
        let w = self.word(i).inverse();
        self.evaluate_word(&w)
    }
}

/// Breadth-first enumeration of the group generated by finite-field
/// matrices. Fails once more than `cap` elements are discovered, reporting
/// the partial count.
pub fn enumerate_image(gens: &[Matrix], cap: usize) -> Result<EnumeratedGroup> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("empty generating set".into()));
    }
    if cap == 0 {
        return Err(Error::InvalidInput("cap must be at least 1".into()));
    }
    let field = gens[0].field().clone();
    let n = gens[0].n();
    let rep = FinRep::new(n, &field)?;
    let r = gens.len();

    let mut gen_coords = Vec::with_capacity(2 * r);
    for g in gens {
        gen_coords.push(rep.from_matrix(g));
    }
    for g in gens {
        let inv = g.inverse().map_err(|_| Error::SingularMatrix)?;
        gen_coords.push(rep.from_matrix(&inv));
    }

    let stride = rep.stride();
    let mut data: Vec<u8> = Vec::with_capacity(1024 * stride);
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut parents: Vec<u32> = Vec::new();
    let mut labels: Vec<i32> = Vec::new();

    let ident = rep.identity();
    let mut key = Vec::with_capacity(stride);
    rep.pack(&ident, &mut key);
    index.insert(key.clone(), 0);
    data.extend_from_slice(&key);
    parents.push(0);
    labels.push(0);

    let mut table: Vec<u32> = Vec::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(0);

    while let Some(u) = queue.pop_front() {
        let u_coords = rep.unpack(&data[u as usize * stride..(u as usize + 1) * stride]);
        // positive generators first, then inverses; the positive edges feed
        // the Cayley table
        for dir in 0..2 * r {
            let prod = rep.mul(&u_coords, &gen_coords[dir]);
            let mut k = Vec::with_capacity(stride);
            rep.pack(&prod, &mut k);
            let v = match index.get(&k) {
                Some(&v) => v,
                None => {
                    let v = parents.len() as u32;
                    if parents.len() >= cap {
                        return Err(Error::ImageTooLarge {
                            cap,
                            partial: parents.len(),
                        });
                    }
                    index.insert(k, v);
                    data.extend_from_slice(&data[0..0].to_vec());
                    data.extend_from_slice(&prod_key_placeholder());
                    parents.push(u);
                    labels.push(if dir < r {
                        (dir + 1) as i32
                    } else {
                        -((dir - r + 1) as i32)
                    });
                    queue.push_back(v);
                    v
                }
            };
            if dir < r {
                let slot = u as usize * r + dir;
                if table.len() <= slot {
                    table.resize(slot + 1, u32::MAX);
                }
                table[slot] = v;
            }
        }
    }

    let order = parents.len();
    table.resize(order * r, u32::MAX);
    debug_assert!(table.iter().all(|&v| v != u32::MAX));
    let mut inverse_table = vec![u32::MAX; order * r];
    for u in 0..order {
        for g in 0..r {
            let v = table[u * r + g] as usize;
            inverse_table[v * r + g] = u as u32;
        }
    }

    Ok(EnumeratedGroup {
        field,
        n,
        rep,
        data,
        index,
        parents,
        labels,
        table,
        inverse_table,
        gen_images: gens.to_vec(),
        cap,
    })
}
