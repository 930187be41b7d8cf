#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace genfunc {

/// Maximum derivative order handled by the closed-form jet machinery.
inline constexpr int kMaxJet = 12;

/// Jet of a scalar function at a point: value and derivatives 0..order.
using Jet = std::array<double, kMaxJet + 1>;

/// The reference bump b(s) = exp(1 - 1/(1 - (2s-1)^2)^q) on (0,1), extended
/// by zero outside. b(1/2) = 1 and all derivatives vanish at s = 0, 1.
/// Larger sharpness q flattens the junctions further, which steepens the
/// far-field decay of the transition's Fourier transform.
double bump01(double s, int sharpness = 1);

/// Derivatives b^(j)(s) for j = 0..order, computed by Taylor-mode series
/// arithmetic (exact up to rounding; no finite differences).
Jet bump01_jet(double s, int order, int sharpness = 1);

/// Smooth step T with T = 1 on t <= 0, T = 0 on t >= 1, realized as the
/// normalized upper integral of bump01. All derivatives vanish at the
/// junctions, so plateau functions assembled from T are C^infinity.
class SmoothStep {
public:
    explicit SmoothStep(int sharpness = 1);

    double value(double t) const;
    /// T^(j)(t) for j = 0..order (T' = -bump01/normalization).
    Jet jet(double t, int order) const;
    /// Integral of T over [0,1]; equals 1/2 by symmetry (kept for tests).
    double mean() const { return 0.5; }

private:
    std::vector<double> table_;   // T on a uniform grid over [0,1]
    std::vector<double> deriv_;   // T' at the same nodes
    double dt_ = 0.0;
    double norm_ = 0.0;           // integral of bump01 over [0,1]
    int sharpness_ = 1;
};

/// Radially symmetric plateau profile: 1 for |x| <= r1, smooth descent to 0
/// at |x| >= r2. Backs the mollifier symbol psi, the embedding cutoff chi
/// and the microlocal space cutoffs.
class PlateauProfile {
public:
    PlateauProfile(double r1, double r2, int sharpness = 1);

    double r1() const { return r1_; }
    double r2() const { return r2_; }
    double value(double x) const;
    /// d^j/dx^j of the profile, j = 0..order.
    Jet jet(double x, int order) const;

private:
    double r1_, r2_, inv_width_;
    SmoothStep step_;
};

/// Compactly supported bump: exp(1 - 1/(1 - (x/w)^2)) on (-w, w), zero
/// outside; value 1 at the center.
class BumpFunction {
public:
    explicit BumpFunction(double halfwidth, double center = 0.0);

    double halfwidth() const { return w_; }
    double center() const { return c_; }
    double value(double x) const;
    Jet jet(double x, int order) const;

private:
    double w_, c_;
};

}  // namespace genfunc
