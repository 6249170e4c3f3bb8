/// Eigenvalues of a small symmetric matrix from its characteristic
/// polynomial (Faddeev-LeVerrier), located by sign changes on a fine grid
/// and refined by bisection.
pub fn brute_force_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mul = |a: &[Vec<f64>], b: &[Vec<f64>]| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    // p(λ) = λⁿ + c[1]λⁿ⁻¹ + … + c[n]
    let mut c = vec![1.0; n + 1];
    let mut mk: Vec<Vec<f64>> = vec![vec![0.0; n]; n];
    for k in 1..=n {
        let mut next = mul(m, &mk);
        for i in 0..n {
            next[i][i] += c[k - 1];
        }
        mk = next;
        let am = mul(m, &mk);
        let trace: f64 = (0..n).map(|i| am[i][i]).sum();
        c[k] = -trace / k as f64;
    }
    let p = |x: f64| c.iter().fold(0.0, |acc, &ck| acc * x + ck);
    let bound = 1.0 + m.iter().flatten().map(|v| v.abs()).sum::<f64>();
    let steps = 200_000;
    let h = 2.0 * bound / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -bound;
    let mut p0 = p(x0);
    for s in 1..=steps {
        let x1 = -bound + s as f64 * h;
        let p1 = p(x1);
        if p0 == 0.0 {
            roots.push(x0);
        } else if p0 * p1 < 0.0 {
            let (mut lo, mut hi) = (x0, x1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if p(lo) * p(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        p0 = p1;
    }
    roots
}
