use num_integer::Integer;

/// Prime factorization by trial division; fine for group orders.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `p`-adic valuation of a nonzero `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= 1 << 32 && a < m && b < m {
        return a * b % m;
    }
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Reduces `v` into `[0, m)`; `m == 0` means no reduction.
pub fn reduce(v: i64, m: u64) -> i64 {
    if m == 0 {
        v
    } else {
        v.rem_euclid(m as i64)
    }
}

/// Chinese remaindering for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, n) in residues {
        if n == 1 {
            continue;
        }
        // find t with x + m t = r mod n
        let mm = (m % n as u128) as u64;
        let inv = mod_inverse(mm, n).expect("moduli must be coprime");
        let diff = ((r as i128 - (x % n as u128) as i128).rem_euclid(n as i128)) as u64;
        let t = mul_mod(diff, inv, n);
        x += m * t as u128;
        m *= n as u128;
        x %= m;
    }
    x as u64
}

pub fn lcm_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1, |a, b| a.lcm(&b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(1024), vec![(2, 10)]);
    }

    #[test]
    fn inverses_and_crt() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(crt(&[(1, 4), (2, 3)]), 5);
        assert_eq!(crt(&[(0, 2), (0, 9), (4, 5)]), 54);
    }
}
