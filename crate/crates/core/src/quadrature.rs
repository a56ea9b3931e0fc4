//! Gauss-Legendre and periodic trapezoid rules, and order-stable summation.

use crate::scalar::Scalar;

/// Nodes and weights of the n-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guess
/// `cos(π(i + 3/4)/(n + 1/2))`; weights `2 / ((1 − x²) P_n'(x)²)`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_count(n);
    let two = T::lit(2.0);
    for i in 0..n.div_ceil(2) {
        let guess = T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + T::half());
        let mut x = guess.cos();
        let mut derivative = T::one();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            derivative = dp;
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                let (_, dp) = legendre_with_derivative(n, x);
                derivative = dp;
                break;
            }
        }
        let w = two / ((T::one() - x * x) * derivative * derivative);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    for k in 2..=n {
        let kf = T::from_count(k);
        let next = ((kf + kf - T::one()) * x * p - (kf - T::one()) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_count(n);
    let dp = nf * (x * p - p_prev) / (x * x - T::one());
    (p, dp)
}

/// Gauss-Legendre rule mapped to `[lo, hi]`.
pub fn gauss_legendre_on<T: Scalar>(n: usize, lo: T, hi: T) -> Vec<(T, T)> {
    let (nodes, weights) = gauss_legendre::<T>(n);
    let half = (hi - lo) * T::half();
    let mid = (hi + lo) * T::half();
    nodes
        .into_iter()
        .zip(weights)
        .map(|(x, w)| (mid + half * x, w * half))
        .collect()
}

/// Trapezoid rule for a periodic integrand on `[0, period)`.
pub fn periodic_trapezoid<T: Scalar>(n: usize, period: T) -> Vec<(T, T)> {
    let h = period / T::from_count(n);
    (0..n).map(|i| (h * T::from_count(i), h)).collect()
}

/// Pairwise (tree) summation; the result depends only on the input order.
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    match values.len() {
        0 => T::zero(),
        1 => values[0],
        n if n <= 8 => values.iter().fold(T::zero(), |acc, &v| acc + v),
        n => {
            let (left, right) = values.split_at(n / 2);
            pairwise_sum(left) + pairwise_sum(right)
        }
    }
}
