#include "genfunc/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "genfunc/errors.hpp"
#include "genfunc/parallel.hpp"

namespace genfunc {

namespace {
constexpr double kBoundaryRel = 1e-10;
// A transformed frame is grid-faithful while its spectrum has died off at
// the frequency-window edge.
constexpr double kSpectrumEdgeRel = 1e-6;
}  // namespace

FrequencyGrid frequency_grid(const Box& space_box) {
    FrequencyGrid fg;
    fg.nyquist = std::numbers::pi / space_box.h(0);
    fg.dxi = 2.0 * std::numbers::pi /
             (space_box.hi[0] - space_box.lo[0]);
    if (space_box.dim == 1) {
        fg.xi_box = Box::make1d(-fg.nyquist, fg.nyquist, space_box.n);
    } else {
        const double ny1 = std::numbers::pi / space_box.h(1);
        fg.xi_box = Box::make2d(-fg.nyquist, fg.nyquist, -ny1, ny1,
                                space_box.n);
    }
    return fg;
}

namespace {

// u-hat(xi_m) = h e^{-i lo xi_m} DFT_m[u_j (-1)^j] with xi ascending.
void ft_line(std::vector<cplx>& line, double lo, double h) {
    const std::size_t n = line.size();
    for (std::size_t j = 1; j < n; j += 2) line[j] = -line[j];
    fft_inplace(line, -1);
    const double dxi = 2.0 * std::numbers::pi / (h * static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
        const double xi =
            (static_cast<double>(m) - static_cast<double>(n) / 2.0) * dxi;
        line[m] *= h * std::polar(1.0, -lo * xi);
    }
}

// Exact algebraic inverse of ft_line with the (2 pi)^{-1} factor.
void ift_line(std::vector<cplx>& line, double lo, double h) {
    const std::size_t n = line.size();
    const double dxi = 2.0 * std::numbers::pi / (h * static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
        const double xi =
            (static_cast<double>(m) - static_cast<double>(n) / 2.0) * dxi;
        line[m] *= std::polar(1.0, lo * xi) / h;
    }
    fft_inplace(line, +1);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        line[j] *= inv;
        if (j % 2 == 1) line[j] = -line[j];
    }
}

template <typename LineFn>
GridFunction transform_frame(const GridFunction& g, const Box& out_box,
                             LineFn&& fn_axis0, LineFn&& fn_axis1) {
    const Box& box = g.box();
    std::vector<cplx> data = g.samples();
    const std::size_t n = box.n;
    if (box.dim == 1) {
        fn_axis0(data);
        return GridFunction(out_box, std::move(data));
    }
    std::vector<cplx> line(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(r * n), n,
                    line.begin());
        fn_axis1(line);
        std::copy_n(line.begin(), n,
                    data.begin() + static_cast<std::ptrdiff_t>(r * n));
    }
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) line[r] = data[r * n + c];
        fn_axis0(line);
        for (std::size_t r = 0; r < n; ++r) data[r * n + c] = line[r];
    }
    return GridFunction(out_box, std::move(data));
}

}  // namespace

GridFunction ft_frame(const GridFunction& g) {
    const Box& box = g.box();
    const FrequencyGrid fg = frequency_grid(box);
    auto ax0 = [&](std::vector<cplx>& line) { ft_line(line, box.lo[0], box.h(0)); };
    auto ax1 = [&](std::vector<cplx>& line) { ft_line(line, box.lo[1], box.h(1)); };
    return transform_frame(g, fg.xi_box, ax0, ax1);
}

GridFunction ift_frame(const GridFunction& g) {
    // Recover the space box this frequency box came from.
    const Box& fb = g.box();
    const double h0 = 2.0 * std::numbers::pi /
                      (fb.hi[0] - fb.lo[0]);
    const double w0 = h0 * static_cast<double>(fb.n);
    Box space = fb.dim == 1
                    ? Box::make1d(-w0 / 2.0, w0 / 2.0, fb.n)
                    : Box::make2d(-w0 / 2.0, w0 / 2.0, -w0 / 2.0, w0 / 2.0,
                                  fb.n);
    // ift_line already carries the (2 pi)^{-1} dxi factor for its axis.
    auto ax0 = [&](std::vector<cplx>& line) {
        ift_line(line, space.lo[0], space.h(0));
    };
    auto ax1 = [&](std::vector<cplx>& line) {
        ift_line(line, space.lo[1], space.h(1));
    };
    return transform_frame(g, space, ax0, ax1);
}

namespace {

std::size_t spectral_trust(const std::vector<GridFunction>& freq_frames) {
    std::size_t p = 0;
    for (const auto& f : freq_frames) {
        if (f.boundary_abs() > kSpectrumEdgeRel * std::max(1.0, f.sup_abs()))
            break;
        ++p;
    }
    return p;
}

}  // namespace

EpsilonNet ft_net(const EpsilonNet& net, unsigned jobs) {
    if (net.side() != Side::space)
        throw PreconditionError("ft_net: net must be space-side");
    for (std::size_t k = 0; k < net.size(); ++k) {
        const auto& f = net.frame(k);
        if (f.boundary_abs() > kBoundaryRel * std::max(1.0, f.sup_abs()))
            throw PreconditionError(
                "boundary-decay: frames do not decay at the box boundary");
    }
    std::vector<GridFunction> frames(net.size());
    parallel_for(net.size(), jobs,
                 [&](std::size_t k) { frames[k] = ft_frame(net.frame(k)); });
    const Box out_box = frames.front().box();
    const std::size_t trust =
        std::min(net.trusted_prefix(), spectral_trust(frames));
    EpsilonNet out(out_box, net.ladder(), std::move(frames), Side::frequency);
    out.set_trusted_prefix(trust);
    return out;
}

EpsilonNet ift_net(const EpsilonNet& net, unsigned jobs) {
    if (net.side() != Side::frequency)
        throw PreconditionError("ift_net: net must be frequency-side");
    std::vector<GridFunction> frames(net.size());
    parallel_for(net.size(), jobs,
                 [&](std::size_t k) { frames[k] = ift_frame(net.frame(k)); });
    const Box out_box = frames.front().box();
    EpsilonNet out(out_box, net.ladder(), std::move(frames), Side::space);
    out.set_trusted_prefix(net.trusted_prefix());
    return out;
}

double plancherel_defect(const GridFunction& space_frame,
                         const GridFunction& freq_frame) {
    const Box& sb = space_frame.box();
    const Box& fb = freq_frame.box();
    double es = 0.0, ef = 0.0;
    for (const auto& v : space_frame.samples()) es += std::norm(v);
    for (const auto& v : freq_frame.samples()) ef += std::norm(v);
    double hs = sb.h(0), hf = fb.h(0);
    if (sb.dim == 2) {
        hs *= sb.h(1);
        hf *= fb.h(1);
    }
    const double pi2d = std::pow(2.0 * std::numbers::pi, sb.dim);
    es *= hs;
    ef *= hf / pi2d;
    return std::abs(es - ef) / std::max({es, ef, 1e-300});
}

LemmaBoundReport check_lemma_bound(const EpsilonNet& net, int Q, int L,
                                   DerivScheme scheme, double envelope_cap,
                                   unsigned jobs) {
    LemmaBoundReport rep;
    rep.envelope_cap = envelope_cap;
    EpsilonNet hat = ft_net(net, jobs);
    // Both sides must be grid-faithful at the rungs we compare.
    const std::size_t hi =
        std::min({net.trusted_prefix(), hat.trusted_prefix(), net.size()});
    if (hi < 2)
        throw PreconditionError(
            "check_lemma_bound: fewer than 2 grid-faithful rungs");
    rep.ladder_lo = 0;
    rep.ladder_hi = hi;
    const int d = net.box().dim;
    rep.pass = true;
    for (int q = 0; q <= Q; ++q) {
        for (int l = 0; l <= L; ++l) {
            LemmaBoundRow row;
            row.q = q;
            row.l = l;
            for (std::size_t k = 0; k < hi; ++k) {
                const double num = net_seminorm_mu(hat, k, q, l, scheme);
                const double den =
                    net_seminorm_mu(net, k, l + d + 1, q, scheme);
                if (den <= 1e-300)
                    throw PreconditionError(
                        "division-by-floor: denominator seminorm vanishes");
                row.ratios.push_back(num / den);
            }
            const auto [mn, mx] =
                std::minmax_element(row.ratios.begin(), row.ratios.end());
            row.envelope = *mx / *mn;
            row.pass = std::isfinite(*mx) && row.envelope <= envelope_cap;
            rep.pass = rep.pass && row.pass;
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

std::string signature_str(TwoIndexSignature s) {
    switch (s) {
        case TwoIndexSignature::r_u: return "R_u";
        case TwoIndexSignature::r_partial: return "R_partial";
        case TwoIndexSignature::both: return "both";
        case TwoIndexSignature::neither: return "neither";
    }
    return "?";
}

namespace {

// Sentinel entries (below-floor seminorm series) count as uniform.
std::vector<double> clamp_sentinels(std::vector<double> exps) {
    for (double& e : exps)
        if (e == negligible_sentinel()) e = -1e3;
    return exps;
}

TwoIndexSignature measure_signature(const GrowthProfile& prof, int Q, int L,
                                    double tol, double* qvar, double* lvar) {
    const auto exps = clamp_sentinels(prof.exponents());
    const double qv = q_variation(exps, Q, L);
    const double lv = l_variation(exps, Q, L);
    if (qvar) *qvar = qv;
    if (lvar) *lvar = lv;
    const bool u = qv <= tol;
    const bool d = lv <= tol;
    if (u && d) return TwoIndexSignature::both;
    if (u) return TwoIndexSignature::r_u;
    if (d) return TwoIndexSignature::r_partial;
    return TwoIndexSignature::neither;
}

}  // namespace

ExchangeReport check_exchange(const EpsilonNet& net, int Q, int L, double tol,
                              unsigned jobs) {
    ExchangeReport rep;
    rep.input_profile =
        profile_decay(net, Q, L, DerivScheme::fd4, {}, 1e-13, jobs);
    EpsilonNet hat = ft_net(net, jobs);
    rep.output_profile =
        profile_decay(hat, Q, L, DerivScheme::fd4, {}, 1e-13, jobs);
    double in_lv = 0.0, out_qv = 0.0;
    rep.input = measure_signature(rep.input_profile, Q, L, tol,
                                  &rep.input_q_variation, &in_lv);
    rep.output = measure_signature(rep.output_profile, Q, L, tol, &out_qv,
                                   &rep.output_l_variation);
    auto has_u = [](TwoIndexSignature s) {
        return s == TwoIndexSignature::r_u || s == TwoIndexSignature::both;
    };
    auto has_d = [](TwoIndexSignature s) {
        return s == TwoIndexSignature::r_partial ||
               s == TwoIndexSignature::both;
    };
    const bool any = has_u(rep.input) || has_d(rep.input);
    rep.pass = any && (!has_u(rep.input) || has_d(rep.output)) &&
               (!has_d(rep.input) || has_u(rep.output));
    return rep;
}

GrowthProfile rough_profile(const EpsilonNet& freq_net, int Q, FitWindow window,
                            double floor, unsigned jobs) {
    if (freq_net.side() != Side::frequency)
        throw PreconditionError("rough_profile: net must be frequency-side");
    GrowthProfile two =
        profile_decay(freq_net, Q, 0, DerivScheme::fd4, window, floor, jobs);
    GrowthProfile rough;
    rough.axis = ProfileAxis::weight_q;
    rough.Q = Q;
    rough.L = 0;
    rough.entries = two.entries;
    rough.ladder_lo = two.ladder_lo;
    rough.ladder_hi = two.ladder_hi;
    return rough;
}

GlobalReport classify_global(const EpsilonNet& u, const EpsilonNet& cut,
                             const Box& K, int Q, int L,
                             const ClassifyOptions& opt, unsigned jobs) {
    GlobalReport rep;
    rep.space_profile = profile_space(u, K, L, DerivScheme::fd4, {}, 1e-13,
                                      jobs);
    rep.space_side = classify_profile(rep.space_profile.exponents(),
                                      rep.space_profile.residuals(), opt);
    EpsilonNet hat = ft_net(cut, jobs);
    rep.fourier_profile = rough_profile(hat, Q, {}, 1e-13, jobs);
    rep.fourier_side = classify_profile(rep.fourier_profile.exponents(),
                                        rep.fourier_profile.residuals(), opt);
    rep.agree = rep.space_side.family == rep.fourier_side.family &&
                (rep.space_side.family != FamilyName::ra ||
                 rep.space_side.a == rep.fourier_side.a);
    return rep;
}

bool check_regularity_theorem(const EpsilonNet& net, int Q, int L, double tol,
                              unsigned jobs) {
    auto flat = [&](const GrowthProfile& prof) {
        const auto exps = clamp_sentinels(prof.exponents());
        double lo = exps[0], hi = exps[0];
        for (double e : exps) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        if (lo <= -999.0) return true;  // numerically dead net
        return hi - lo <= tol;
    };
    GrowthProfile in =
        profile_decay(net, Q, L, DerivScheme::fd4, {}, 1e-13, jobs);
    if (!flat(in))
        throw PreconditionError(
            "precondition-violated: input profile is not flat (net is not in "
            "the uniform class)");
    EpsilonNet hat = ft_net(net, jobs);
    GrowthProfile out =
        profile_decay(hat, Q, L, DerivScheme::fd4, {}, 1e-13, jobs);
    return flat(out);
}

}  // namespace genfunc
