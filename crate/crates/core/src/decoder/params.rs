/// Search-window parameters shared by the left and joint leaf decoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaParams {
    pub delta_min: i64,
    pub delta_max: i64,
    pub beta_min: i64,
    pub beta_max: i64,
    pub eta: i64,
    pub lambda: i64,
}

/// Round half away from zero.
pub fn rnd(v: f64) -> i64 {
    v.round() as i64
}

fn sgn(v: f64) -> i64 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// `delta_min = -rnd(3(n_l+1)/5)` and `delta_max = rnd(3 n_l / 5) mod 2`.
pub fn delta_range(n_l: u32) -> (i64, i64) {
    let n = n_l as f64;
    (
        -rnd(3.0 * (n + 1.0) / 5.0),
        rnd(3.0 * n / 5.0).rem_euclid(2),
    )
}

/// Window parameters for a quantizer hit at position `zeta`, counted from
/// the low end of the grid.
///
/// The `delta_3` loop of the joint decoder runs over
/// `-1 + beta_min ..= -1 + beta_max`, which equals
/// `max(-1, z - delta_max) ..= min(1, z - delta_min)`.
pub fn delta_params(n_l: u32, zeta: u32) -> DeltaParams {
    let (delta_min, delta_max) = delta_range(n_l);
    let zeta = zeta as i64;
    let eta = zeta + delta_min - delta_max - 1;
    let lambda = sgn(3.1 - zeta as f64) + 1;
    let beta_min = (sgn(eta as f64 - 0.1) + 1) * eta / 2;
    let beta_max = lambda * (zeta - 3) / 2 + 2;
    DeltaParams {
        delta_min,
        delta_max,
        beta_min,
        beta_max,
        eta,
        lambda,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        assert_eq!(delta_range(0), (-1, 0));
        assert_eq!(delta_range(1), (-1, 1));
        assert_eq!(delta_range(2), (-2, 1));
        assert_eq!(delta_range(3), (-2, 0));
        assert_eq!(delta_range(4), (-3, 0));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(delta_params(1, 1).lambda, 2);
        assert_eq!(delta_params(1, 3).lambda, 2);
        assert_eq!(delta_params(1, 4).lambda, 0);
    }

    #[test]
    fn beta_min_is_gated() {
        for n_l in 0..=4 {
            for zeta in 1..=6 {
                let p = delta_params(n_l, zeta);
                if p.eta <= 0 {
                    assert_eq!(p.beta_min, 0);
                } else {
                    assert_eq!(p.beta_min, p.eta);
                }
            }
        }
    }

    #[test]
    fn loop_window_matches_closed_form() {
        for n_l in 1..=3 {
            let (dmin, dmax) = delta_range(n_l);
            let m = (dmax - dmin + 3) as u32;
            for zeta in 1..=m {
                let z = dmin - 1 + zeta as i64 - 1;
                let p = delta_params(n_l, zeta);
                assert_eq!(-1 + p.beta_min, (-1i64).max(z - dmax));
                assert_eq!(-1 + p.beta_max, 1i64.min(z - dmin));
                assert!(p.beta_min <= p.beta_max);
            }
        }
    }

    #[test]
    fn rnd_is_half_away_from_zero() {
        assert_eq!(rnd(0.5), 1);
        assert_eq!(rnd(-0.5), -1);
        assert_eq!(rnd(2.4), 2);
        assert_eq!(rnd(0.6), 1);
    }
}
