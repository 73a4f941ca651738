//! Gauss-Kronrod (7, 15) quadrature for complex-valued integrands, on real
//! intervals (globally adaptive) and on straight segments in the plane.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One panel estimate: Kronrod value and `|K15 - G7|`.
#[derive(Debug, Clone, Copy)]
pub struct PanelEstimate {
    pub value: Complex64,
    pub error: f64,
}

/// GK15 on the straight segment from `a` to `b` in the complex plane.
pub fn gk15_segment<F>(f: &mut F, a: Complex64, b: Complex64) -> PanelEstimate
where
    F: FnMut(Complex64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    PanelEstimate {
        value: kron * half,
        error: ((kron - gauss) * half).norm(),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    /// Requested error relative to the magnitude of the integral.
    pub rel_tol: f64,
    /// Absolute error floor.
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_panels: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    est: PanelEstimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive GK15 over `[a, b]`, starting from `initial` equal panels.
///
/// Bisects the panel with the largest error estimate until the summed
/// estimate meets `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    initial: usize,
    opts: AdaptiveOptions,
) -> Result<Integral>
where
    F: FnMut(f64) -> Complex64,
{
    let mut g = |s: Complex64| f(s.re);
    let initial = initial.max(1);
    let width = (b - a) / initial as f64;
    let mut heap = BinaryHeap::with_capacity(2 * initial);
    for i in 0..initial {
        let pa = a + width * i as f64;
        let pb = if i + 1 == initial { b } else { pa + width };
        let est = gk15_segment(&mut g, pa.into(), pb.into());
        heap.push(Panel { a: pa, b: pb, est });
    }
    loop {
        let value: Complex64 = heap.iter().map(|p| p.est.value).sum();
        let error: f64 = heap.iter().map(|p| p.est.error).sum();
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Quadrature {
                requested: opts.rel_tol,
                achieved: f64::INFINITY,
            });
        }
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        if error <= target {
            return Ok(Integral {
                value,
                error,
                panels: heap.len(),
            });
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::Quadrature {
                requested: opts.rel_tol,
                achieved: error / value.norm(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15_segment(&mut g, worst.a.into(), mid.into());
        let right = gk15_segment(&mut g, mid.into(), worst.b.into());
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
        });
    }
}
