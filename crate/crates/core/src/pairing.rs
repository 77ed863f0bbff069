//! The fixed Cantor pairing π(n,m) = (n+m)(n+m+1)/2 + m used for the
//! bijection ℕ ↔ ℕ×ℕ and for enumerating product domains.

use crate::error::{Error, Result};

/// π(n, m), erroring on u64 overflow.
pub fn pair(n: u64, m: u64) -> Result<u64> {
    let s = (n as u128) + (m as u128);
    let code = s
        .checked_mul(s + 1)
        .map(|t| t / 2 + (m as u128))
        .ok_or(Error::Overflow("cantor pairing"))?;
    u64::try_from(code).map_err(|_| Error::Overflow("cantor pairing"))
}

/// π⁻¹(k) = (n, m).
pub fn unpair(k: u64) -> (u64, u64) {
    // Largest w with w(w+1)/2 <= k.
    let kk = k as u128;
    let mut w = (((8.0 * k as f64 + 1.0).sqrt() - 1.0) / 2.0) as u128;
    while (w + 1) * (w + 2) / 2 <= kk {
        w += 1;
    }
    while w * (w + 1) / 2 > kk {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let m = kk - t;
    let n = w - m;
    (n as u64, m as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_codes() {
        assert_eq!(pair(0, 0).unwrap(), 0);
        assert_eq!(pair(1, 0).unwrap(), 1);
        assert_eq!(pair(0, 1).unwrap(), 2);
        assert_eq!(pair(2, 0).unwrap(), 3);
        assert_eq!(pair(1, 1).unwrap(), 4);
        assert_eq!(pair(0, 2).unwrap(), 5);
    }

    #[test]
    fn round_trip() {
        for k in 0..5000u64 {
            let (n, m) = unpair(k);
            assert_eq!(pair(n, m).unwrap(), k);
        }
        for n in 0..60u64 {
            for m in 0..60u64 {
                let (a, b) = unpair(pair(n, m).unwrap());
                assert_eq!((a, b), (n, m));
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(pair(u64::MAX, u64::MAX).is_err());
    }
}
