//! Small exact integer helpers shared by the enumeration code.

/// `n!` as a `u128`. Overflows past `n = 34`, far beyond anything enumerated here.
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Multinomial coefficient `(Σk)! / Π k!`.
pub fn multinomial(parts: &[usize]) -> u128 {
    // Build it as a product of binomials to keep intermediates small.
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &k in parts {
        for i in 1..=k {
            total += 1;
            acc = acc * total as u128 / i as u128;
        }
    }
    acc
}

/// Little Schröder numbers: partitions of a convex polygon with `vertices` corners
/// into faces by noncrossing diagonals. Used only as a cross-check.
pub fn little_schroeder(vertices: usize) -> u128 {
    // s(n) for an (n+1)-gon, via (n+1) s(n+1) = 3(2n-1) s(n) - (n-2) s(n-1).
    if vertices < 3 {
        return if vertices == 2 { 1 } else { 0 };
    }
    let n = vertices - 1;
    let mut s = vec![0i128; n + 2];
    s[1] = 1;
    s[2] = 1;
    for k in 2..n {
        let kk = k as i128;
        s[k + 1] = (3 * (2 * kk - 1) * s[k] - (kk - 2) * s[k - 1]) / (kk + 1);
    }
    s[n] as u128
}
