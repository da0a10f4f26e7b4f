//! Regular (3,6) LDPC code of length 1024 and rate 1/2, with a systematic
//! encoder and a sum-product belief propagation decoder.
//!
//! The XOR of two codewords of a linear code is again a codeword, so the
//! relay decodes the soft XOR information directly with the same code.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Seed of the published parity-check construction.
pub const CONSTRUCTION_SEED: u64 = 0x0A9C_1024;
pub const CODE_N: usize = 1024;
pub const CODE_K: usize = 512;
pub const DEFAULT_MAX_ITERS: usize = 50;
const COL_WEIGHT: usize = 3;
const ROW_WEIGHT: usize = 6;
/// Largest magnitude a check-to-variable message can take.
const MSG_CLAMP: f64 = 1.0 - 1e-15;

/// Sparse binary parity-check matrix with a systematic generator.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcCode {
    n: usize,
    k: usize,
    /// Column indices of the ones in each row.
    rows: Vec<Vec<usize>>,
    /// Row indices of the ones in each column.
    cols: Vec<Vec<usize>>,
    /// Codeword positions carrying the message, ascending.
    info_pos: Vec<usize>,
    /// Codeword positions carrying parity, one per generator row.
    parity_pos: Vec<usize>,
    /// `parity[i]` = XOR of message bits selected by `parity_rows[i]`.
    parity_rows: Vec<Vec<u64>>,
}

/// Output of belief propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct BpOutput {
    /// Message bits read from the information positions.
    pub bits: Vec<u8>,
    pub codeword: Vec<u8>,
    /// All checks satisfied with every bit decided.
    pub converged: bool,
    pub iterations: usize,
}

impl LdpcCode {
    /// The (1024, 512) code built from [`CONSTRUCTION_SEED`].
    pub fn standard() -> Self {
        Self::regular(CODE_N, CODE_K, CONSTRUCTION_SEED).expect("standard code construction")
    }

    /// Seeded pseudo-random column-weight-3, row-weight-6 code without
    /// 4-cycles. Rank-deficient draws are rejected and redrawn.
    pub fn regular(n: usize, k: usize, seed: u64) -> Result<Self> {
        let m = n - k;
        if n == 0 || k == 0 || k >= n || n * COL_WEIGHT != m * ROW_WEIGHT {
            return Err(Error::Config(format!(
                "({n}, {k}) does not admit a regular ({COL_WEIGHT},{ROW_WEIGHT}) code"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            if let Some(cols) = draw_columns(n, m, &mut rng) {
                if let Ok(code) = Self::from_columns(n, m, cols) {
                    if code.k == k {
                        return Ok(code);
                    }
                }
            }
        }
        Err(Error::Config(format!(
            "no full-rank 4-cycle-free code found for seed {seed}"
        )))
    }

    /// Builds the code from the row indices of each column.
    pub fn from_columns(n: usize, m: usize, cols: Vec<Vec<usize>>) -> Result<Self> {
        if cols.len() != n {
            return Err(Error::Input(format!("expected {n} columns, got {}", cols.len())));
        }
        let mut rows = vec![Vec::new(); m];
        for (j, c) in cols.iter().enumerate() {
            for &r in c {
                if r >= m {
                    return Err(Error::Input(format!("row index {r} out of range in column {j}")));
                }
                rows[r].push(j);
            }
        }
        let mut cols = cols;
        for c in &mut cols {
            c.sort_unstable();
            c.dedup();
        }
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
        }
        let (info_pos, parity_pos, parity_rows) = systematic_form(n, &rows);
        Ok(Self {
            n,
            k: info_pos.len(),
            rows,
            cols,
            info_pos,
            parity_pos,
            parity_rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_checks(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_pos
    }

    /// Systematic encoding: message bits land on the information positions.
    pub fn encode(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.k {
            return Err(Error::Input(format!(
                "message has {} bits, expected {}",
                bits.len(),
                self.k
            )));
        }
        let mut packed = vec![0u64; self.k.div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::Input(format!("message bit {i} is {b}, not 0 or 1")));
            }
            packed[i / 64] |= u64::from(b) << (i % 64);
        }
        let mut c = vec![0u8; self.n];
        for (&p, &b) in self.info_pos.iter().zip(bits) {
            c[p] = b;
        }
        for (&p, row) in self.parity_pos.iter().zip(&self.parity_rows) {
            let ones: u32 = row.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            c[p] = (ones & 1) as u8;
        }
        Ok(c)
    }

    /// Indices of the unsatisfied checks.
    pub fn syndrome(&self, word: &[u8]) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.iter().map(|&j| word[j]).fold(0, |a, b| a ^ b) == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.syndrome(word).is_empty()
    }

    /// Message bits of a codeword.
    pub fn extract(&self, word: &[u8]) -> Vec<u8> {
        self.info_pos.iter().map(|&p| word[p]).collect()
    }

    /// Flooding sum-product decoding. Positive LLR favours bit 0. Stops as
    /// soon as the hard decision satisfies every check; a bit whose
    /// posterior LLR is exactly zero counts as undecided.
    pub fn bp_decode(&self, llr: &[f64], max_iters: usize) -> Result<BpOutput> {
        if llr.len() != self.n {
            return Err(Error::Input(format!("expected {} LLRs, got {}", self.n, llr.len())));
        }
        if let Some(i) = llr.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("LLR {i} is not finite")));
        }
        // Edges are stored row by row; var_edges maps each column to its edges.
        let edge_var: Vec<usize> = self.rows.iter().flatten().copied().collect();
        let mut var_edges = vec![Vec::with_capacity(COL_WEIGHT); self.n];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[v].push(e);
        }
        let mut row_start = Vec::with_capacity(self.rows.len() + 1);
        row_start.push(0);
        for r in &self.rows {
            row_start.push(row_start.last().unwrap() + r.len());
        }
        let mut v2c: Vec<f64> = edge_var.iter().map(|&v| llr[v]).collect();
        let mut c2v = vec![0.0; edge_var.len()];
        let mut post = llr.to_vec();
        let mut hard = vec![0u8; self.n];
        let mut prefix = Vec::new();

        let decide = |post: &[f64], hard: &mut [u8]| -> bool {
            let mut decided = true;
            for (h, &p) in hard.iter_mut().zip(post) {
                *h = u8::from(p < 0.0);
                decided &= p != 0.0;
            }
            decided
        };
        if decide(&post, &mut hard) && self.syndrome(&hard).is_empty() {
            return Ok(self.output(hard, true, 0));
        }
        for iter in 1..=max_iters {
            for r in 0..self.rows.len() {
                let (s, e) = (row_start[r], row_start[r + 1]);
                let t: Vec<f64> = v2c[s..e].iter().map(|&x| (0.5 * x).tanh()).collect();
                prefix.clear();
                let mut acc = 1.0;
                for &x in &t {
                    prefix.push(acc);
                    acc *= x;
                }
                let mut suffix = 1.0;
                for i in (0..t.len()).rev() {
                    let p = (prefix[i] * suffix).clamp(-MSG_CLAMP, MSG_CLAMP);
                    c2v[s + i] = 2.0 * p.atanh();
                    suffix *= t[i];
                }
            }
            for (v, edges) in var_edges.iter().enumerate() {
                let total = llr[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                post[v] = total;
                for &e in edges {
                    v2c[e] = total - c2v[e];
                }
            }
            if decide(&post, &mut hard) && self.syndrome(&hard).is_empty() {
                return Ok(self.output(hard, true, iter));
            }
        }
        Ok(self.output(hard, false, max_iters))
    }

    fn output(&self, codeword: Vec<u8>, converged: bool, iterations: usize) -> BpOutput {
        BpOutput {
            bits: self.extract(&codeword),
            codeword,
            converged,
            iterations,
        }
    }

    /// Parity-check matrix in alist format, indices 1-based.
    pub fn to_alist(&self) -> String {
        let max_col = self.cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut s = String::new();
        let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "{} {}", self.n, self.rows.len());
        let _ = writeln!(s, "{max_col} {max_row}");
        let _ = writeln!(s, "{}", join(&mut self.cols.iter().map(Vec::len)));
        let _ = writeln!(s, "{}", join(&mut self.rows.iter().map(Vec::len)));
        for c in &self.cols {
            let padded = c.iter().map(|r| r + 1).chain(std::iter::repeat(0)).take(max_col);
            let _ = writeln!(s, "{}", join(&mut padded.into_iter()));
        }
        for r in &self.rows {
            let padded = r.iter().map(|c| c + 1).chain(std::iter::repeat(0)).take(max_row);
            let _ = writeln!(s, "{}", join(&mut padded.into_iter()));
        }
        s
    }

    /// Parses an alist description. Row lists must agree with column lists.
    pub fn from_alist(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Input(format!("alist: {msg}"));
        let mut it = text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad("non-integer token")));
        let mut next = || it.next().unwrap_or_else(|| Err(bad("unexpected end of input")));
        let n = next()?;
        let m = next()?;
        let max_col = next()?;
        let max_row = next()?;
        let col_deg: Vec<usize> = (0..n).map(|_| next()).collect::<Result<_>>()?;
        let row_deg: Vec<usize> = (0..m).map(|_| next()).collect::<Result<_>>()?;
        let mut cols = Vec::with_capacity(n);
        for &d in &col_deg {
            let entries: Vec<usize> = (0..max_col).map(|_| next()).collect::<Result<_>>()?;
            let c: Vec<usize> = entries.iter().filter(|&&x| x > 0).map(|x| x - 1).collect();
            if c.len() != d {
                return Err(bad("column degree mismatch"));
            }
            cols.push(c);
        }
        let code = Self::from_columns(n, m, cols)?;
        for (r, &d) in row_deg.iter().enumerate() {
            let entries: Vec<usize> = (0..max_row).map(|_| next()).collect::<Result<_>>()?;
            let mut row: Vec<usize> = entries.iter().filter(|&&x| x > 0).map(|x| x - 1).collect();
            row.sort_unstable();
            if row.len() != d || row != code.rows[r] {
                return Err(bad("row lists disagree with column lists"));
            }
        }
        Ok(code)
    }

    pub fn write_alist(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_alist())?;
        Ok(())
    }

    pub fn read_alist(path: &Path) -> Result<Self> {
        Self::from_alist(&std::fs::read_to_string(path)?)
    }
}

/// One attempt at placing `COL_WEIGHT` ones per column. Rows are picked
/// among those with the most free sockets, avoiding any row pair already
/// shared by an earlier column (which would close a 4-cycle).
fn draw_columns<R: Rng>(n: usize, m: usize, rng: &mut R) -> Option<Vec<Vec<usize>>> {
    let mut free = vec![ROW_WEIGHT; m];
    let mut pair = vec![false; m * m];
    let mut order: Vec<usize> = (0..m).collect();
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        order.shuffle(rng);
        // stable sort keeps the shuffle as the tie-break
        order.sort_by(|&a, &b| free[b].cmp(&free[a]));
        let mut chosen: Vec<usize> = Vec::with_capacity(COL_WEIGHT);
        for &r in &order {
            if free[r] == 0 {
                break;
            }
            if chosen.iter().all(|&c| !pair[c * m + r]) {
                chosen.push(r);
                if chosen.len() == COL_WEIGHT {
                    break;
                }
            }
        }
        if chosen.len() < COL_WEIGHT {
            return None;
        }
        for &a in &chosen {
            free[a] -= 1;
            for &b in &chosen {
                pair[a * m + b] = true;
            }
        }
        cols.push(chosen);
    }
    Some(cols)
}

/// Gaussian elimination over GF(2). Pivots are taken from the rightmost
/// columns first so the message occupies the leading positions when
/// possible. Returns (information positions, parity positions, and for each
/// parity position the message bits it sums).
fn systematic_form(n: usize, rows: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let words = n.div_ceil(64);
    let mut mat: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut w = vec![0u64; words];
            for &j in r {
                w[j / 64] |= 1 << (j % 64);
            }
            w
        })
        .collect();
    let bit = |w: &[u64], j: usize| (w[j / 64] >> (j % 64)) & 1 == 1;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0;
    for j in (0..n).rev() {
        if next_row == mat.len() {
            break;
        }
        let Some(p) = (next_row..mat.len()).find(|&r| bit(&mat[r], j)) else {
            continue;
        };
        mat.swap(next_row, p);
        let pivot = mat[next_row].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != next_row && bit(row, j) {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push((next_row, j));
        next_row += 1;
    }
    let mut is_pivot = vec![false; n];
    for &(_, j) in &pivots {
        is_pivot[j] = true;
    }
    let info_pos: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let k = info_pos.len();
    let mut parity_pos = Vec::with_capacity(pivots.len());
    let mut parity_rows = Vec::with_capacity(pivots.len());
    for &(r, j) in &pivots {
        let mut sel = vec![0u64; k.div_ceil(64)];
        for (i, &p) in info_pos.iter().enumerate() {
            if bit(&mat[r], p) {
                sel[i / 64] |= 1 << (i % 64);
            }
        }
        parity_pos.push(j);
        parity_rows.push(sel);
    }
    (info_pos, parity_pos, parity_rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};
    use std::sync::OnceLock;

    fn code() -> &'static LdpcCode {
        static CODE: OnceLock<LdpcCode> = OnceLock::new();
        CODE.get_or_init(LdpcCode::standard)
    }

    fn random_bits(k: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
        (0..k).map(|_| rng.random_range(0..2)).collect()
    }

    fn to_llr(c: &[u8], mag: f64) -> Vec<f64> {
        c.iter().map(|&b| if b == 0 { mag } else { -mag }).collect()
    }

    #[test]
    fn shape_and_weights() {
        let c = code();
        assert_eq!((c.n(), c.k(), c.num_checks()), (1024, 512, 512));
        assert!((0..1024).all(|j| c.column(j).len() == 3));
        assert!((0..512).all(|r| c.row(r).len() == 6));
        assert_eq!(c.info_positions().len(), 512);
    }

    #[test]
    fn girth_is_at_least_six() {
        let c = code();
        let mut seen = std::collections::HashSet::new();
        for j in 0..c.n() {
            let col = c.column(j);
            for a in 0..col.len() {
                for b in a + 1..col.len() {
                    assert!(
                        seen.insert((col[a], col[b])),
                        "4-cycle through rows {} {}",
                        col[a],
                        col[b]
                    );
                }
            }
        }
    }

    #[test]
    fn encoding_satisfies_every_check() {
        let c = code();
        assert_eq!(c.encode(&vec![0; 512]).unwrap(), vec![0; 1024]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let m = random_bits(512, &mut rng);
            let w = c.encode(&m).unwrap();
            assert!(c.is_codeword(&w));
            assert_eq!(c.extract(&w), m);
        }
    }

    #[test]
    fn xor_of_codewords_is_a_codeword() {
        let c = code();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let a = c.encode(&random_bits(512, &mut rng)).unwrap();
            let b = c.encode(&random_bits(512, &mut rng)).unwrap();
            let x: Vec<u8> = a.iter().zip(&b).map(|(p, q)| p ^ q).collect();
            assert!(c.is_codeword(&x));
        }
    }

    #[test]
    fn encode_rejects_bad_input() {
        assert!(code().encode(&[0; 511]).is_err());
        let mut m = vec![0; 512];
        m[3] = 2;
        assert!(code().encode(&m).is_err());
    }

    #[test]
    fn noiseless_llrs_decode_immediately() {
        let c = code();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_bits(512, &mut rng);
        let out = c.bp_decode(&to_llr(&c.encode(&m).unwrap(), 40.0), 50).unwrap();
        assert!(out.converged && out.iterations <= 2);
        assert_eq!(out.bits, m);
    }

    #[test]
    fn zero_llrs_do_not_converge() {
        let out = code().bp_decode(&vec![0.0; 1024], 50).unwrap();
        assert!(!out.converged);
        assert!(code().bp_decode(&[0.0; 10], 50).is_err());
        let mut bad = vec![1.0; 1024];
        bad[7] = f64::NAN;
        assert!(code().bp_decode(&bad, 50).is_err());
    }

    #[test]
    fn five_flips_are_corrected() {
        let c = code();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut ok = 0;
        for _ in 0..1000 {
            let m = random_bits(512, &mut rng);
            let mut llr = to_llr(&c.encode(&m).unwrap(), 8.0);
            for i in rand::seq::index::sample(&mut rng, 1024, 5) {
                llr[i] = -llr[i];
            }
            let out = c.bp_decode(&llr, 50).unwrap();
            ok += usize::from(out.converged && out.bits == m);
        }
        assert!(ok >= 990, "{ok}/1000");
    }

    #[test]
    fn waterfall_at_three_db() {
        let c = code();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        // BPSK, Es = 1, Eb = 2 at rate 1/2; real noise variance N0/2.
        let n0 = 2.0 / 10f64.powf(0.3);
        let noise = Normal::new(0.0, (n0 / 2.0).sqrt()).unwrap();
        let mut errors = 0;
        for _ in 0..200 {
            let m = random_bits(512, &mut rng);
            let w = c.encode(&m).unwrap();
            let llr: Vec<f64> = w
                .iter()
                .map(|&b| {
                    let y = if b == 0 { 1.0 } else { -1.0 } + noise.sample(&mut rng);
                    4.0 * y / n0
                })
                .collect();
            let out = c.bp_decode(&llr, 50).unwrap();
            errors += out.bits.iter().zip(&m).filter(|(a, b)| a != b).count();
        }
        let ber = errors as f64 / (200.0 * 512.0);
        assert!(ber < 1e-4, "BER {ber}");
    }

    #[test]
    fn alist_round_trip() {
        let c = code();
        let text = c.to_alist();
        assert!(text.starts_with("1024 512\n3 6\n"));
        assert_eq!(&LdpcCode::from_alist(&text).unwrap(), c);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.alist");
        c.write_alist(&p).unwrap();
        assert_eq!(&LdpcCode::read_alist(&p).unwrap(), c);
        assert!(LdpcCode::from_alist("4 2\n3").is_err());
    }

    #[test]
    fn small_code_from_columns() {
        // Hamming (7,4): three checks.
        let cols = vec![
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
            vec![0],
            vec![1],
            vec![2],
        ];
        let h = LdpcCode::from_columns(7, 3, cols).unwrap();
        assert_eq!(h.k(), 4);
        for v in 0..16u8 {
            let m: Vec<u8> = (0..4).map(|i| (v >> i) & 1).collect();
            let w = h.encode(&m).unwrap();
            assert!(h.is_codeword(&w));
            assert_eq!(h.extract(&w), m);
        }
    }
}
