//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so every criterion reports even when an earlier one fails; the
//! process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ud_cdma::codebook::max_ud_columns;
use ud_cdma::complexity::{
    analytic_t, empirical_avg_comparisons, enumerate, SampleMode, PUBLISHED_CENSUS,
};
use ud_cdma::decoder::residual;
use ud_cdma::harness::emit::to_csv;
use ud_cdma::harness::{crossing, run_ber_sweep, DecoderKind, SimConfig};
use ud_cdma::{
    add_awgn, build_codebook, fda_decode, spread, verify_ud, AntipodalWord, ChannelConfig,
    MlDecoder, NoiseStream, TernaryMatrix,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn construction() -> Check {
    let seed = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 1, 0, -1, -1, -1],
        [1, 1, 0, -1, 0, 1, 0, -1],
        [1, 0, 0, -1, 0, -1, 0, 1],
    ];
    let c2 = build_codebook(2).map_err(|e| e.to_string())?;
    let rows2: Vec<Vec<i8>> = seed.iter().map(|r| r.to_vec()).collect();
    if c2.matrix().to_rows() != rows2 {
        return Err("level-2 seed differs".into());
    }
    let mut prev = rows2;
    for level in 3..=6u32 {
        let c = build_codebook(level).map_err(|e| e.to_string())?;
        let (l, k) = (c.rows(), c.cols());
        let want_k = (1usize << (level + 1)) + (1 << (level - 2)) - 1;
        if (l, k) != (1 << level, want_k) {
            return Err(format!("level {level} has shape {l}x{k}"));
        }
        let kh = prev[0].len();
        let mut rows = vec![vec![1i8; k]];
        rows.push(
            (0..k)
                .map(|j| (kh as i64 - j as i64).signum() as i8)
                .collect(),
        );
        for r in &prev[1..] {
            let mut row = r.clone();
            row.resize(k, 0);
            rows.push(row);
        }
        for r in &prev[1..] {
            let mut row = vec![0i8; kh + 1];
            row.extend_from_slice(r);
            rows.push(row);
        }
        let got = c.matrix().to_rows();
        if got != rows {
            return Err(format!("level {level} differs from block form"));
        }
        prev = got;
    }
    Ok("levels 2..6 match seed and block recursion".into())
}

fn ud_certification() -> Check {
    for level in [2, 3] {
        let w = verify_ud(build_codebook(level).unwrap().matrix()).map_err(|e| e.to_string())?;
        if !w.verdict {
            return Err(format!("level {level} reported not UD"));
        }
    }
    let m = TernaryMatrix::from_rows(&[vec![1, 1, 0], vec![1, 1, 1]]).unwrap();
    let w = verify_ud(&m).unwrap();
    let d: Vec<i32> = w
        .counterexample
        .clone()
        .unwrap_or_default()
        .iter()
        .map(|&v| v as i32)
        .collect();
    let null = !d.is_empty()
        && d.iter().any(|&v| v != 0)
        && m.mul_vec(&d).unwrap().iter().all(|&v| v == 0);
    ensure(
        !w.verdict && null,
        format!("levels 2,3 UD; witness {d:?} for a repeated column"),
    )
}

fn ft_values() -> Check {
    let got: Vec<usize> = (2..=4)
        .map(|l| max_ud_columns(l).map(|r| r.max_columns))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(got == [3, 5, 8], format!("f_t(2,3,4) = {got:?}"))
}

fn noiseless_round_trip() -> Check {
    let mut counts = Vec::new();
    for level in [2u32, 3] {
        let c = build_codebook(level).unwrap();
        let k = c.cols();
        for i in 0..1u64 << k {
            let x = AntipodalWord::from_index(k, i);
            let y = spread(&c, &x, 1.0f64).unwrap();
            if fda_decode(&c, &y, 1.0).unwrap().word != x {
                return Err(format!("level {level} word {i} misdecoded"));
            }
        }
        counts.push(1u64 << k);
    }
    let c = build_codebook(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100_000 {
        let x = AntipodalWord::from_index(35, rng.random_range(0..1u64 << 35));
        let y = spread(&c, &x, 1.0f64).unwrap();
        if fda_decode(&c, &y, 1.0).unwrap().word != x {
            return Err(format!("level-4 word {:?} misdecoded", x.to_index()));
        }
    }
    Ok(format!(
        "{} + {} exhaustive, 100000 random level-4 words",
        counts[0], counts[1]
    ))
}

fn census() -> Check {
    let e = enumerate(&build_codebook(2).unwrap()).map_err(|e| e.to_string())?;
    let got = e.comparisons.clone();
    ensure(
        got == PUBLISHED_CENSUS && e.failures == 0,
        format!(
            "per-n totals {got:?} (sum {}), expected {PUBLISHED_CENSUS:?} (sum 1500)",
            e.total_comparisons()
        ),
    )
}

fn average_complexity() -> Check {
    let t3 = analytic_t(3).map_err(|e| e.to_string())?;
    let t4 = analytic_t(4).map_err(|e| e.to_string())?;
    let emp = empirical_avg_comparisons(&build_codebook(3).unwrap(), SampleMode::Exhaustive)
        .map_err(|e| e.to_string())?;
    let a = (t3 - 17.98).abs() <= 0.01;
    let b = (t4 - 50.24).abs() <= 0.01;
    let c = (emp - t3).abs() <= 0.01;
    ensure(
        a && b && c,
        format!(
            "T3 = {t3:.5} [{}], T4 = {t4:.5} [{}], exhaustive level-3 mean {emp:.5} vs T3 [{}]",
            tag(a),
            tag(b),
            tag(c)
        ),
    )
}

fn ml_agreement() -> Check {
    for level in [2u32, 3] {
        let c = build_codebook(level).unwrap();
        let ml = MlDecoder::new(&c).map_err(|e| e.to_string())?;
        let k = c.cols();
        for i in 0..1u64 << k {
            let x = AntipodalWord::from_index(k, i);
            let y = spread(&c, &x, 1.0f64).unwrap();
            let m = ml.decode(&y, 1.0).unwrap().word;
            if m != fda_decode(&c, &y, 1.0).unwrap().word || m != x {
                return Err(format!("level {level} word {i}: ML and FDA disagree"));
            }
        }
    }
    let c = build_codebook(2).unwrap();
    let ml = MlDecoder::new(&c).unwrap();
    let cfg = ChannelConfig::new(1.0, 0.8, 99).unwrap();
    for t in 0..10_000u64 {
        let x = AntipodalWord::from_index(8, t % 256);
        let y = add_awgn(
            &spread(&c, &x, 1.0f64).unwrap(),
            &cfg,
            NoiseStream::new(1, t),
        );
        let f = fda_decode(&c, &y, 1.0).unwrap().word;
        let m = ml.decode(&y, 1.0).unwrap().word;
        if residual(&c, &y, &m, 1.0).unwrap() > residual(&c, &y, &f, 1.0).unwrap() + 1e-9 {
            return Err(format!("trial {t}: ML residual exceeds FDA"));
        }
    }
    Ok("all 256 + 131072 noiseless words agree; ML residual <= FDA on 10000 noisy vectors".into())
}

fn ber_gap() -> Check {
    let grid: Vec<f64> = (0..8).map(|i| 11.0 + 0.25 * i as f64).collect();
    let mut cfg = SimConfig::new(2, grid, 1_000_000, 7);
    cfg.decoders = vec![DecoderKind::Fda, DecoderKind::Ml];
    let curve = run_ber_sweep(&cfg).map_err(|e| e.to_string())?;
    let at = |d: DecoderKind| -> Option<f64> {
        let pts: Vec<(f64, f64)> = curve
            .points
            .iter()
            .filter(|p| p.decoder == d)
            .map(|p| (p.snr_db.unwrap(), p.ber))
            .collect();
        crossing(&pts, 1e-3)
    };
    let (Some(f), Some(m)) = (at(DecoderKind::Fda), at(DecoderKind::Ml)) else {
        return Err("a curve never crosses 1e-3 on the grid".into());
    };
    let gap = f - m;
    ensure(
        (0.3..=2.0).contains(&gap),
        format!("BER 1e-3 at FDA {f:.3} dB, ML {m:.3} dB, gap {gap:.3} dB"),
    )
}

fn determinism() -> Check {
    let run = |workers| {
        let mut cfg = SimConfig::new(3, vec![4.0, 8.0], 20_000, 123);
        cfg.decoders = vec![DecoderKind::Fda];
        cfg.workers = workers;
        run_ber_sweep(&cfg)
            .map(|c| to_csv(&c))
            .map_err(|e| e.to_string())
    };
    let one = run(1)?;
    let four = run(4)?;
    ensure(
        one == four,
        format!("CSV with 1 and 4 workers identical ({} bytes)", one.len()),
    )
}

fn tag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "off"
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("construction fidelity", construction),
        ("UD certification", ud_certification),
        ("f_t for lengths 2..4", ft_values),
        ("noiseless round trip", noiseless_round_trip),
        ("level-2 comparison census", census),
        ("average complexity", average_complexity),
        ("ML agreement", ml_agreement),
        ("BER gap at 1e-3", ber_gap),
        ("determinism across workers", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
