use canoma_core::sampler::joint_survival;
use canoma_core::{ChannelSampler, SamplerSeed, SystemParams};

fn params() -> SystemParams {
    SystemParams::new(100.0, 2.0, 2.0).unwrap()
}

#[test]
fn moments_of_ordered_pair() {
    let p = params();
    let n = 1_000_000;
    let (mut sum, mut sum1, mut both) = (0.0, 0.0, 0u64);
    for pair in ChannelSampler::new(&p, SamplerSeed::new(101, 0)).take(n) {
        sum += pair.g1() + pair.g2();
        sum1 += pair.g1();
        both += u64::from(pair.g1() >= 0.15 && pair.g2() >= 0.15);
    }
    let n = n as f64;
    assert!((sum / n - 4.0).abs() < 0.01, "mean g1+g2 = {}", sum / n);
    assert!((sum1 / n - 1.0).abs() < 0.01, "mean g1 = {}", sum1 / n);
    let freq = both as f64 / n;
    assert!((freq - (-0.15f64).exp()).abs() < 0.003, "{freq}");
}

#[test]
fn frequencies_match_joint_survival() {
    let p = params();
    let n = 100_000;
    let pairs: Vec<_> = ChannelSampler::new(&p, SamplerSeed::new(202, 5))
        .take(n)
        .collect();
    for &t1 in &[0.0, 0.1, 0.5, 1.5] {
        for &t2 in &[0.0, 0.2, 1.0, 3.0] {
            let hits = pairs
                .iter()
                .filter(|c| c.g1() >= t1 && c.g2() >= t2)
                .count();
            let freq = hits as f64 / n as f64;
            let exact = joint_survival(&p, t1, t2).unwrap();
            let se = (exact * (1.0 - exact) / n as f64).sqrt();
            assert!(
                (freq - exact).abs() <= 3.0 * se + 1e-12,
                "({t1},{t2}): {freq} vs {exact}"
            );
        }
    }
}

#[test]
fn identical_seeds_give_bit_identical_gains() {
    let p = params();
    let bits = |seed| -> Vec<u64> {
        ChannelSampler::new(&p, seed)
            .take(10_000)
            .flat_map(|c| [c.g1().to_bits(), c.g2().to_bits()])
            .collect()
    };
    assert_eq!(bits(SamplerSeed::new(9, 2)), bits(SamplerSeed::new(9, 2)));
}
