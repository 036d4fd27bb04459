use crate::{Error, Result, Scalar};

/// Integer grid `hi, hi - step, ..., lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constellation {
    pub lo: i64,
    pub hi: i64,
    pub step: i64,
}

impl Constellation {
    pub fn new(lo: i64, hi: i64, step: i64) -> Result<Self> {
        if !(step == 1 || step == 2) || lo > hi || (hi - lo) % step != 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid constellation lo={lo} hi={hi} step={step}"
            )));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points in descending order.
    pub fn points(&self) -> Vec<i64> {
        (0..self.len() as i64)
            .map(|i| self.hi - i * self.step)
            .collect()
    }

    /// Nearest point to `y`, clamped to the range; exact midpoints go to the
    /// upper neighbour.
    ///
    /// Cost model: thresholds are scanned from whichever end of the grid is
    /// closer to the answer, so point `zeta` (1-based from `hi`) of `M`
    /// costs `min(zeta, M - zeta + 1)` comparisons. Both extremes cost one,
    /// and a value `j` steps below `hi` in the upper half costs `j + 1`.
    pub fn quantize<T: Scalar>(&self, y: T) -> QuantizeResult {
        let m = self.len() as i64;
        let t = (T::of(self.hi as f64) - y) / T::of(self.step as f64);
        // ceil(t - 1/2) sends exact halves upwards in value
        let idx = (t - T::of(0.5)).ceil();
        let idx = if idx.is_nan() {
            0
        } else {
            idx.max(T::zero())
                .min(T::of((m - 1) as f64))
                .to_i64()
                .unwrap_or(0)
        };
        let zeta = idx + 1;
        QuantizeResult {
            z: self.hi - idx * self.step,
            zeta: zeta as u32,
            comparisons: zeta.min(m - zeta + 1) as u32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizeResult {
    /// Chosen point.
    pub z: i64,
    /// 1-based position of `z` counted from the `hi` end.
    pub zeta: u32,
    pub comparisons: u32,
}

/// Nearest point of `{lo, lo + step, ..., hi}` to `y`.
pub fn quantize<T: Scalar>(y: T, lo: i64, hi: i64, step: i64) -> Result<QuantizeResult> {
    Ok(Constellation::new(lo, hi, step)?.quantize(y))
}
