//! Length-7 Gold codes.

use crate::matrix::SymmetricSparseMatrix;

/// A family of ±1 spreading codes of common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadingCodeSet {
    pub length: usize,
    pub codes: Vec<Vec<i8>>,
}

impl SpreadingCodeSet {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Every code together with its `length` cyclic shifts, code-major.
    pub fn with_cyclic_shifts(&self) -> SpreadingCodeSet {
        let codes = self
            .codes
            .iter()
            .flat_map(|c| (0..self.length).map(move |k| rotate(c, k)))
            .collect();
        SpreadingCodeSet { length: self.length, codes }
    }
}

fn rotate<T: Copy>(c: &[T], k: usize) -> Vec<T> {
    let mut r = c.to_vec();
    r.rotate_left(k);
    r
}

/// One period of the binary m-sequence with `a_{k+3} = a_{k+1+t} ⊕ a_k`,
/// starting from state `001`. `t = 0` is `x³+x+1`, `t = 1` is `x³+x²+1`.
fn m_sequence(taps: [usize; 2]) -> Vec<u8> {
    let mut a = vec![0u8, 0, 1];
    while a.len() < 7 {
        let k = a.len() - 3;
        a.push(a[k + taps[0]] ^ a[k + taps[1]]);
    }
    a
}

fn chips(bits: &[u8]) -> Vec<i8> {
    bits.iter().map(|&b| if b == 0 { 1 } else { -1 }).collect()
}

/// The nine Gold codes from the preferred pair `x³+x+1`, `x³+x²+1`:
/// both m-sequences, then `u ⊕ Tᵏv` for `k = 0..7`, with `0 → +1`, `1 → −1`.
pub fn gold_codes_n7() -> SpreadingCodeSet {
    let u = m_sequence([0, 1]);
    let v = m_sequence([0, 2]);
    let mut codes = vec![chips(&u), chips(&v)];
    for k in 0..7 {
        let shifted = rotate(&v, k);
        let xor: Vec<u8> = u.iter().zip(&shifted).map(|(a, b)| a ^ b).collect();
        codes.push(chips(&xor));
    }
    SpreadingCodeSet { length: 7, codes }
}

/// Normalized correlation `sᵢᵀsⱼ / N`.
pub fn correlation(a: &[i8], b: &[i8]) -> f64 {
    let dot: i32 = a.iter().zip(b).map(|(&x, &y)| i32::from(x) * i32::from(y)).sum();
    f64::from(dot) / a.len() as f64
}

/// `R_ij = sᵢᵀsⱼ / N` over the given codes.
pub fn correlation_matrix(codes: &[Vec<i8>]) -> crate::Result<SymmetricSparseMatrix> {
    let dense: Vec<Vec<f64>> = codes.iter().map(|a| codes.iter().map(|b| correlation(a, b)).collect()).collect();
    SymmetricSparseMatrix::from_dense(&dense)
}

/// Indices into `set` whose ordered correlation matrix equals `target`
/// entrywise within `tol`, found by depth-first search.
pub fn find_code_subset(set: &SpreadingCodeSet, target: &SymmetricSparseMatrix, tol: f64) -> Option<Vec<usize>> {
    fn extend(
        set: &SpreadingCodeSet,
        target: &SymmetricSparseMatrix,
        tol: f64,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let depth = chosen.len();
        if depth == target.dim() {
            return true;
        }
        for cand in 0..set.len() {
            if chosen.contains(&cand) {
                continue;
            }
            let c = &set.codes[cand];
            let fits = (correlation(c, c) - target.get(depth, depth)).abs() <= tol
                && chosen
                    .iter()
                    .enumerate()
                    .all(|(k, &p)| (correlation(&set.codes[p], c) - target.get(k, depth)).abs() <= tol);
            if fits {
                chosen.push(cand);
                if extend(set, target, tol, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(target.dim());
    extend(set, target, tol, &mut chosen).then_some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_sequences_match_hand_recursion() {
        assert_eq!(m_sequence([0, 1]), vec![0, 0, 1, 0, 1, 1, 1]);
        assert_eq!(m_sequence([0, 2]), vec![0, 0, 1, 1, 1, 0, 1]);
    }

    #[test]
    fn family_has_nine_distinct_codes() {
        let set = gold_codes_n7();
        assert_eq!(set.len(), 9);
        assert!(set.codes.iter().all(|c| c.len() == 7 && c.iter().all(|&x| x == 1 || x == -1)));
        for i in 0..9 {
            for j in 0..i {
                assert_ne!(set.codes[i], set.codes[j]);
            }
        }
    }

    #[test]
    fn single_code_gives_unit_matrix() {
        let set = gold_codes_n7();
        let r = correlation_matrix(&set.codes[..1]).unwrap();
        assert_eq!(r.to_dense(), vec![vec![1.0]]);
    }

    #[test]
    fn orthogonal_vectors_give_identity() {
        let w = vec![vec![1i8, 1, 1, 1], vec![1, -1, 1, -1], vec![1, 1, -1, -1]];
        assert_eq!(correlation_matrix(&w).unwrap(), SymmetricSparseMatrix::identity(3).unwrap());
    }
}
