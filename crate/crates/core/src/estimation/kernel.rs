/// `√5`, the half-width of the Epanechnikov kernel's support.
const SQRT_5: f64 = 2.236_067_977_499_789_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelKind {
    /// `k(u) = (3 / (4√5)) (1 − u²/5)` on `[−√5, √5]`; unit variance.
    #[default]
    Epanechnikov,
}

/// A bounded, even probability density used as a smoothing kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KernelSpec {
    pub kind: KernelKind,
}

impl KernelSpec {
    pub const EPANECHNIKOV: Self = Self {
        kind: KernelKind::Epanechnikov,
    };

    /// `k(u)`.
    #[inline]
    pub fn density(&self, u: f64) -> f64 {
        match self.kind {
            KernelKind::Epanechnikov => {
                if u.abs() >= SQRT_5 {
                    0.0
                } else {
                    (0.75 / SQRT_5 * (1.0 - u * u / 5.0)).max(0.0)
                }
            }
        }
    }

    /// `K(u) = ∫_{−∞}^u k`.
    #[inline]
    pub fn cdf(&self, u: f64) -> f64 {
        match self.kind {
            KernelKind::Epanechnikov => {
                if u <= -SQRT_5 {
                    0.0
                } else if u >= SQRT_5 {
                    1.0
                } else {
                    0.5 + 0.75 / SQRT_5 * (u - u * u * u / 15.0)
                }
            }
        }
    }

    /// Half-width of the support.
    pub fn support_radius(&self) -> f64 {
        match self.kind {
            KernelKind::Epanechnikov => SQRT_5,
        }
    }

    /// `𝒦 = ∫ k²`.
    pub fn l2_constant(&self) -> f64 {
        match self.kind {
            KernelKind::Epanechnikov => 3.0 * SQRT_5 / 25.0,
        }
    }
}

/// `∫ k²(u) du` for `kernel`.
pub fn kernel_l2_constant(kernel: &KernelSpec) -> f64 {
    kernel.l2_constant()
}
