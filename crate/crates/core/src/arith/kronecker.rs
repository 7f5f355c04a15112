/// Kronecker symbol `(a / n)`, extending the Jacobi symbol to all `n`.
///
/// `(a / 0)` is 1 for `a = ±1` and 0 otherwise.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let (mut a, mut n) = (a as i128, n as i128);
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut sign = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a / 2) = 1 for a = ±1 mod 8, -1 for a = ±3 mod 8.
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        n >>= twos;
    }
    // Jacobi symbol for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Legendre symbol by Euler's criterion `a^((p-1)/2) mod p`, for odd prime `p`.
pub fn euler_criterion(a: i64, p: u64) -> i8 {
    let m = p as u128;
    let mut base = a.rem_euclid(p as i64) as u128;
    let mut e = (p - 1) / 2;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    match acc {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}
