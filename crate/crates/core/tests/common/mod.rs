#![allow(dead_code)]

use cyclovhs::cover::CoverFamily;
use num_integer::Integer;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly drawn valid family with `2 <= m <= m_max` and `4 <= N <= n_max`.
pub fn random_family(rng: &mut impl Rng, m_max: u64, n_max: usize) -> CoverFamily {
    loop {
        let m = rng.gen_range(2..=m_max);
        let n = rng.gen_range(4..=n_max);
        let mut d: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(1..m)).collect();
        let last = (m - d.iter().sum::<u64>() % m) % m;
        if last == 0 {
            continue;
        }
        d.push(last);
        if d.iter().fold(m, |g, x| g.gcd(x)) != 1 {
            continue;
        }
        return CoverFamily::new(m, d).expect("constructed valid");
    }
}
