//! Prime sieves and exact factorization of 64-bit integers.

/// All primes `<= n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Smallest-prime-factor table for `0..=n`; entries 0 and 1 are 0 and 1.
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    if n >= 1 {
        spf[1] = 1;
    }
    for i in 2..=n {
        if spf[i] != 0 {
            continue;
        }
        spf[i] = i as u32;
        let mut j = i.saturating_mul(i);
        while j <= n {
            if spf[j] == 0 {
                spf[j] = i as u32;
            }
            j += i;
        }
    }
    spf
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

const SMALL_SIEVE_LIMIT: u64 = 1 << 16;

/// Prime factorization `n = prod p^e`, primes ascending. `factorize(1)` is empty.
///
/// Trial division by sieved primes below 2^16, then a 6k +/- 1 wheel; a
/// Miller-Rabin test on the remaining cofactor stops the search early.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0) is undefined");
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    thread_local! {
        static SMALL: Vec<u64> = primes_up_to(SMALL_SIEVE_LIMIT);
    }
    SMALL.with(|small| {
        for &p in small {
            if p * p > n {
                break;
            }
            push(p, &mut n);
        }
    });
    if n >= SMALL_SIEVE_LIMIT * SMALL_SIEVE_LIMIT && !is_prime(n) {
        // Wheel continues past the sieve; candidates are 6k +/- 1.
        let mut d = SMALL_SIEVE_LIMIT / 6 * 6 + 5;
        while (d as u128) * (d as u128) <= n as u128 {
            push(d, &mut n);
            push(d + 2, &mut n);
            if n > 1 && is_prime(n) {
                break;
            }
            d += 6;
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
