#include "genfunc/bump.hpp"

#include <cmath>
#include <stdexcept>

namespace genfunc {

namespace {

// Truncated Taylor series in (s - s0), coefficients c[k] = f^(k)(s0)/k!.
struct Series {
    std::array<double, kMaxJet + 1> c{};
    int order = 0;
};

Series series_mul(const Series& a, const Series& b) {
    Series r;
    r.order = a.order;
    for (int k = 0; k <= r.order; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
        r.c[k] = s;
    }
    return r;
}

// 1/a with a.c[0] != 0.
Series series_recip(const Series& a) {
    Series r;
    r.order = a.order;
    r.c[0] = 1.0 / a.c[0];
    for (int k = 1; k <= r.order; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
        r.c[k] = -s / a.c[0];
    }
    return r;
}

// exp(a) via g' = a' g.
Series series_exp(const Series& a) {
    Series r;
    r.order = a.order;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= r.order; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * a.c[j] * r.c[k - j];
        r.c[k] = s / k;
    }
    return r;
}

constexpr double kSupportEps = 1e-12;

}  // namespace

double bump01(double s, int sharpness) {
    if (s <= kSupportEps || s >= 1.0 - kSupportEps) return 0.0;
    const double u = 2.0 * s - 1.0;
    const double w = 1.0 - u * u;
    double wq = 1.0;
    for (int i = 0; i < sharpness; ++i) wq *= w;
    return std::exp(1.0 - 1.0 / wq);
}

Jet bump01_jet(double s, int order, int sharpness) {
    if (order > kMaxJet) throw std::invalid_argument("bump01_jet: order too large");
    Jet out{};
    if (s <= kSupportEps || s >= 1.0 - kSupportEps) return out;
    // w(t) = 1 - (2(s+t) - 1)^2 as a degree-2 series in t.
    const double u = 2.0 * s - 1.0;
    Series w;
    w.order = order;
    w.c[0] = 1.0 - u * u;
    if (order >= 1) w.c[1] = -4.0 * u;
    if (order >= 2) w.c[2] = -4.0;
    if (w.c[0] < 1e-6) return out;  // exp(-1/w^q) underflows to zero anyway
    Series wq = w;
    for (int i = 1; i < sharpness; ++i) wq = series_mul(wq, w);
    Series arg = series_recip(wq);
    for (int k = 0; k <= order; ++k) arg.c[k] = -arg.c[k];
    arg.c[0] += 1.0;
    const Series e = series_exp(arg);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        out[static_cast<std::size_t>(k)] = e.c[k] * fact;
        fact *= (k + 1);
    }
    return out;
}

SmoothStep::SmoothStep(int sharpness) : sharpness_(sharpness) {
    // Composite Simpson of bump01 on a fine uniform grid; the integrand is
    // smooth and flat at both endpoints, so the rule converges fast.
    const std::size_t cells = 1 << 16;
    dt_ = 1.0 / static_cast<double>(cells);
    std::vector<double> b(cells + 1), bmid(cells);
    for (std::size_t i = 0; i <= cells; ++i)
        b[i] = bump01(static_cast<double>(i) * dt_, sharpness_);
    for (std::size_t i = 0; i < cells; ++i)
        bmid[i] = bump01((static_cast<double>(i) + 0.5) * dt_, sharpness_);
    std::vector<double> cum(cells + 1, 0.0);
    for (std::size_t i = 0; i < cells; ++i)
        cum[i + 1] = cum[i] + dt_ / 6.0 * (b[i] + 4.0 * bmid[i] + b[i + 1]);
    norm_ = cum[cells];
    table_.resize(cells + 1);
    deriv_.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        table_[i] = 1.0 - cum[i] / norm_;
        deriv_[i] = -b[i] / norm_;
    }
}

double SmoothStep::value(double t) const {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    const double pos = t / dt_;
    const std::size_t i =
        std::min(table_.size() - 2, static_cast<std::size_t>(pos));
    const double u = pos - static_cast<double>(i);
    // Cubic Hermite with the analytic slope at both nodes.
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * table_[i] + h10 * dt_ * deriv_[i] + h01 * table_[i + 1] +
           h11 * dt_ * deriv_[i + 1];
}

Jet SmoothStep::jet(double t, int order) const {
    Jet out{};
    out[0] = value(t);
    if (order >= 1) {
        const Jet bj = bump01_jet(t, order - 1, sharpness_);
        for (int j = 1; j <= order; ++j)
            out[static_cast<std::size_t>(j)] =
                -bj[static_cast<std::size_t>(j - 1)] / norm_;
    }
    return out;
}

PlateauProfile::PlateauProfile(double r1, double r2, int sharpness)
    : r1_(r1), r2_(r2), step_(sharpness) {
    if (!(r1 > 0.0) || !(r2 > r1))
        throw std::invalid_argument("plateau: need 0 < r1 < r2");
    inv_width_ = 1.0 / (r2 - r1);
}

double PlateauProfile::value(double x) const {
    const double r = std::abs(x);
    if (r <= r1_) return 1.0;
    if (r >= r2_) return 0.0;
    return step_.value((r - r1_) * inv_width_);
}

Jet PlateauProfile::jet(double x, int order) const {
    const double r = std::abs(x);
    Jet out{};
    if (r <= r1_ || r >= r2_) {
        out[0] = (r <= r1_) ? 1.0 : 0.0;
        return out;
    }
    Jet tj = step_.jet((r - r1_) * inv_width_, order);
    double scale = 1.0;
    const double sign = (x < 0.0) ? -1.0 : 1.0;
    double sgn_pow = 1.0;
    for (int j = 0; j <= order; ++j) {
        out[static_cast<std::size_t>(j)] =
            tj[static_cast<std::size_t>(j)] * scale * sgn_pow;
        scale *= inv_width_;
        sgn_pow *= sign;
    }
    return out;
}

BumpFunction::BumpFunction(double halfwidth, double center)
    : w_(halfwidth), c_(center) {
    if (!(halfwidth > 0.0))
        throw std::invalid_argument("bump: halfwidth must be positive");
}

double BumpFunction::value(double x) const {
    return bump01(((x - c_) / w_ + 1.0) * 0.5);
}

Jet BumpFunction::jet(double x, int order) const {
    Jet bj = bump01_jet(((x - c_) / w_ + 1.0) * 0.5, order);
    Jet out{};
    double scale = 1.0;
    for (int j = 0; j <= order; ++j) {
        out[static_cast<std::size_t>(j)] = bj[static_cast<std::size_t>(j)] * scale;
        scale *= 0.5 / w_;
    }
    return out;
}

}  // namespace genfunc
