#include "genfunc/embed.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "genfunc/errors.hpp"
#include "genfunc/parallel.hpp"

namespace genfunc {

namespace {
// |rho^(j)| falls below ~1e-6 of its sup past this radius, so positions
// farther out cannot carry the sup of a jet.
constexpr double kAdaptedRadius = 64.0;
constexpr double kBoundaryRel = 1e-10;
}  // namespace

SmoothFunction::SmoothFunction(DistributionSpec::Base base)
    : base_(base), bump_(2.0) {
    switch (base) {
        case DistributionSpec::Base::gaussian: radius_ = 7.0; break;
        case DistributionSpec::Base::bump: radius_ = 2.0; break;
        case DistributionSpec::Base::zero: radius_ = 0.0; break;
        case DistributionSpec::Base::exp_kink: radius_ = 42.0; break;
        default: radius_ = std::numeric_limits<double>::infinity(); break;
    }
}

double SmoothFunction::jet(int order, double x) const {
    switch (base_) {
        case DistributionSpec::Base::gaussian: {
            // f^(n) = -2x f^(n-1) - 2(n-1) f^(n-2)
            const double f0 = std::exp(-x * x);
            if (order == 0) return f0;
            double fm1 = f0, fm2 = 0.0;
            for (int n = 1; n <= order; ++n) {
                const double fn = -2.0 * x * fm1 - 2.0 * (n - 1) * fm2;
                fm2 = fm1;
                fm1 = fn;
            }
            return fm1;
        }
        case DistributionSpec::Base::bump:
            return bump_.jet(x, order)[static_cast<std::size_t>(order)];
        case DistributionSpec::Base::square:
            if (order == 0) return x * x;
            if (order == 1) return 2.0 * x;
            return order == 2 ? 2.0 : 0.0;
        case DistributionSpec::Base::zero:
            return 0.0;
        case DistributionSpec::Base::ramp:
            if (order == 0) return std::max(x, 0.0);
            if (order == 1) return x > 0.0 ? 1.0 : 0.0;
            return 0.0;
        case DistributionSpec::Base::absval:
            if (order == 0) return std::abs(x);
            if (order == 1) return x > 0.0 ? 1.0 : -1.0;
            return 0.0;
        case DistributionSpec::Base::exp_kink: {
            const double v = std::exp(-std::abs(x));
            if (order == 0) return v;
            const double s = (x > 0.0) ? -1.0 : 1.0;
            return std::pow(s, order) * v;
        }
        case DistributionSpec::Base::none: break;
    }
    throw PreconditionError("smooth-function: no base");
}

DistributionSpec DistributionSpec::delta(int k, double shift) {
    if (k < 0 || k > 3)
        throw PreconditionError("delta_deriv: order must be in 0..3");
    DistributionSpec s;
    s.tag = Tag::delta_deriv;
    s.k = k;
    s.shift = shift;
    s.cls = {true, true, true, true, false, false};
    return s;
}

DistributionSpec DistributionSpec::heaviside(double shift) {
    DistributionSpec s;
    s.tag = Tag::heaviside;
    s.shift = shift;
    s.cls = {false, false, false, true, false, false};
    return s;
}

DistributionSpec DistributionSpec::smooth(Base base) {
    DistributionSpec s;
    s.tag = Tag::smooth;
    s.base = base;
    switch (base) {
        case Base::gaussian: s.cls = {false, true, true, true, true, true}; break;
        case Base::bump: s.cls = {true, true, true, true, true, true}; break;
        case Base::square: s.cls = {false, false, false, true, false, true}; break;
        case Base::zero: s.cls = {true, true, true, true, true, true}; break;
        default:
            throw PreconditionError("smooth: base must be C^infinity");
    }
    return s;
}

DistributionSpec DistributionSpec::cont_deriv(Base base, int alpha) {
    if (base != Base::ramp && base != Base::absval)
        throw PreconditionError("cont_deriv: base must be ramp or absval");
    if (alpha < 1 || alpha > 4)
        throw PreconditionError("cont_deriv: alpha must be in 1..4");
    DistributionSpec s;
    s.tag = Tag::cont_deriv;
    s.base = base;
    s.alpha = alpha;
    s.cls = {false, false, false, true, false, false};
    return s;
}

DistributionSpec DistributionSpec::weighted_poly(int alpha) {
    if (alpha < 0 || alpha > 4)
        throw PreconditionError("weighted_poly: alpha must be in 0..4");
    DistributionSpec s;
    s.tag = Tag::weighted_poly;
    s.base = Base::exp_kink;
    s.alpha = alpha;
    s.cls = {false, true, true, true, false, false};
    return s;
}

std::string DistributionSpec::describe() const {
    auto base_str = [&] {
        switch (base) {
            case Base::gaussian: return "gaussian";
            case Base::bump: return "bump";
            case Base::square: return "square";
            case Base::zero: return "zero";
            case Base::ramp: return "ramp";
            case Base::absval: return "abs";
            case Base::exp_kink: return "exp_kink";
            case Base::none: return "?";
        }
        return "?";
    };
    std::string out;
    switch (tag) {
        case Tag::delta_deriv:
            out = "delta";
            if (k > 0) out += "^(" + std::to_string(k) + ")";
            break;
        case Tag::heaviside: out = "heaviside"; break;
        case Tag::smooth: out = base_str(); break;
        case Tag::cont_deriv:
            out = "d^" + std::to_string(alpha) + "(" + base_str() + ")";
            break;
        case Tag::weighted_poly:
            out = "d^" + std::to_string(alpha) + "(exp_kink)";
            break;
    }
    if (shift != 0.0) out += "@" + std::to_string(shift);
    return out;
}

DistributionSpec parse_spec(const std::string& name) {
    if (name == "delta") return DistributionSpec::delta(0);
    if (name == "delta1") return DistributionSpec::delta(1);
    if (name == "delta2") return DistributionSpec::delta(2);
    if (name == "delta3") return DistributionSpec::delta(3);
    if (name == "heaviside") return DistributionSpec::heaviside();
    if (name == "gaussian")
        return DistributionSpec::smooth(DistributionSpec::Base::gaussian);
    if (name == "bump")
        return DistributionSpec::smooth(DistributionSpec::Base::bump);
    if (name == "square")
        return DistributionSpec::smooth(DistributionSpec::Base::square);
    if (name == "zero")
        return DistributionSpec::smooth(DistributionSpec::Base::zero);
    if (name == "ramp2")
        return DistributionSpec::cont_deriv(DistributionSpec::Base::ramp, 2);
    if (name == "abs2")
        return DistributionSpec::cont_deriv(DistributionSpec::Base::absval, 2);
    if (name == "wpoly1") return DistributionSpec::weighted_poly(1);
    throw PreconditionError("convolution-rule-missing: unknown spec '" + name +
                            "'");
}

std::string embed_kind_str(EmbedKind k) {
    switch (k) {
        case EmbedKind::sigma: return "sigma";
        case EmbedKind::iota: return "iota";
        case EmbedKind::iota_S: return "iota_S";
        case EmbedKind::iota_Sprime: return "iota_Sprime";
        case EmbedKind::iota_CS: return "iota_CS";
    }
    return "?";
}

/// --- 1-d evaluators ---------------------------------------------------------

namespace {

class SigmaEval final : public Evaluator1D {
public:
    explicit SigmaEval(DistributionSpec::Base base) : f_(base) {}
    cplx jet(std::size_t, int order, double x) const override {
        return f_.jet(order, x);
    }

private:
    SmoothFunction f_;
};

// Frames theta^{(k)}_eps(x - shift) (delta derivatives through the mollifier)
// or rho_eps^{(k)} without the cutoff.
class DeltaEval final : public Evaluator1D {
public:
    DeltaEval(const Mollifier& mol, int k, double shift,
              std::vector<double> ladder, bool with_chi)
        : mol_(mol), k_(k), shift_(shift), ladder_(std::move(ladder)),
          with_chi_(with_chi) {}

    cplx jet(std::size_t frame, int order, double x) const override {
        const double eps = ladder_[frame];
        return with_chi_ ? mol_.theta_deriv(k_ + order, eps, x - shift_)
                         : mol_.rho_eps_deriv(k_ + order, eps, x - shift_);
    }

    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        const double eps = ladder_[frame];
        std::vector<double> out;
        for (double v : mol_.ref_nodes()) {
            if (std::abs(v) > kAdaptedRadius) continue;
            const double x = shift_ + eps * v;
            if (x >= a && x <= b) out.push_back(x);
        }
        return out;
    }

private:
    const Mollifier& mol_;
    int k_;
    double shift_;
    std::vector<double> ladder_;
    bool with_chi_;
};

// Heaviside: cumulative quadrature of theta_eps (resp. rho_eps) for the
// value; derivative jets reduce to theta itself.
class HeavisideEval final : public Evaluator1D {
public:
    HeavisideEval(const Mollifier& mol, double shift,
                  std::vector<double> ladder, bool with_chi)
        : mol_(mol), shift_(shift), ladder_(std::move(ladder)),
          with_chi_(with_chi) {
        const auto& nodes = mol_.ref_nodes();
        const auto& rho = mol_.rho_ref();
        weights_.resize(ladder_.size());
        prefix_.resize(ladder_.size());
        for (std::size_t k = 0; k < ladder_.size(); ++k) {
            const double lg = std::abs(std::log(ladder_[k]));
            auto& w = weights_[k];
            auto& p = prefix_[k];
            w.resize(nodes.size());
            p.resize(nodes.size() + 1, 0.0);
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                w[i] = rho[i];
                if (with_chi_) w[i] *= mol_.chi(lg * ladder_[k] * nodes[i]);
                p[i + 1] = p[i] + w[i] * mol_.ref_h();
            }
        }
    }

    cplx jet(std::size_t frame, int order, double x) const override {
        const double eps = ladder_[frame];
        if (order >= 1) {
            return with_chi_ ? mol_.theta_deriv(order - 1, eps, x - shift_)
                             : mol_.rho_eps_deriv(order - 1, eps, x - shift_);
        }
        const double R = mol_.params().ref_halfwidth;
        const double v = (x - shift_) / eps;
        const auto& p = prefix_[frame];
        if (v <= -R) return 0.0;
        if (v >= R) return p.back();
        const double pos = (v + R) / mol_.ref_h();
        const auto i = std::min(p.size() - 2, static_cast<std::size_t>(pos));
        const double frac = pos - static_cast<double>(i);
        return p[i] + weights_[frame][i] * mol_.ref_h() * frac;
    }

    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        const double eps = ladder_[frame];
        std::vector<double> out;
        for (double v : mol_.ref_nodes()) {
            if (std::abs(v) > kAdaptedRadius) continue;
            const double x = shift_ + eps * v;
            if (x >= a && x <= b) out.push_back(x);
        }
        return out;
    }

private:
    const Mollifier& mol_;
    double shift_;
    std::vector<double> ladder_;
    bool with_chi_;
    std::vector<std::vector<double>> weights_;
    std::vector<std::vector<double>> prefix_;
};

// T = d^alpha0 f with f a catalog function: frames f * theta^{(alpha0)}_eps
// by reference-grid quadrature. Covers smooth entries (alpha0 = 0), the
// local-structure forms d^alpha(continuous f), and the O'_M realization.
class ConvEval final : public Evaluator1D {
public:
    ConvEval(const Mollifier& mol, DistributionSpec::Base base, int alpha0,
             double shift, std::vector<double> ladder, bool with_chi)
        : mol_(mol), f_(base), alpha0_(alpha0), shift_(shift),
          ladder_(std::move(ladder)), with_chi_(with_chi) {
        tables_.resize(ladder_.size());
    }

    cplx jet(std::size_t frame, int order, double x) const override {
        const int J = alpha0_ == 0 ? 0 : alpha0_ + order;
        if (alpha0_ + order > kMaxJet)
            throw PreconditionError("derivative order beyond jet limit");
        const double eps = ladder_[frame];
        const auto& W = weight_table(frame, J);
        const auto& nodes = mol_.ref_nodes();
        // Prune to where f is alive: |x - shift - eps v| <= radius.
        std::size_t i0 = 0, i1 = nodes.size();
        const double rf = f_.support_radius();
        if (std::isfinite(rf)) {
            const double R = mol_.params().ref_halfwidth;
            const double h = mol_.ref_h();
            const double vlo = (x - shift_ - rf) / eps;
            const double vhi = (x - shift_ + rf) / eps;
            i0 = static_cast<std::size_t>(std::clamp(
                (vlo + R) / h, 0.0, static_cast<double>(nodes.size())));
            i1 = static_cast<std::size_t>(std::clamp(
                (vhi + R) / h + 1.0, 0.0, static_cast<double>(nodes.size())));
        }
        double acc = 0.0;
        const int fo = (alpha0_ == 0) ? order : 0;
        for (std::size_t i = i0; i < i1; ++i) {
            if (W[i] == 0.0) continue;
            acc += f_.jet(fo, x - shift_ - eps * nodes[i]) * W[i];
        }
        return acc;
    }

    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        if (alpha0_ == 0) return {};  // output is as smooth as f
        // d^alpha f concentrates a spike at the kink of f.
        const double eps = ladder_[frame];
        std::vector<double> out;
        for (double v : mol_.ref_nodes()) {
            if (std::abs(v) > kAdaptedRadius) continue;
            const double x = shift_ + eps * v;
            if (x >= a && x <= b) out.push_back(x);
        }
        return out;
    }

private:
    // W[i] = theta^{(J)}_eps(eps v_i) * eps * h_ref; for alpha0 = 0 only
    // J = 0 is ever used (the derivative goes on f instead).
    const std::vector<double>& weight_table(std::size_t frame, int J) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& per_frame = tables_[frame];
        if (per_frame.size() <= static_cast<std::size_t>(J))
            per_frame.resize(static_cast<std::size_t>(J) + 1);
        auto& W = per_frame[static_cast<std::size_t>(J)];
        if (!W.empty()) return W;
        const auto& nodes = mol_.ref_nodes();
        const double eps = ladder_[frame];
        const double lg = std::abs(std::log(eps));
        W.resize(nodes.size(), 0.0);
        // theta^{(J)}(eps v) * eps = sum_i C(J,i) eps^{-i} rho^{(i)}(v)
        //                            * lg^{J-i} chi^{(J-i)}(lg eps v)
        std::vector<const std::vector<double>*> rtab;
        for (int i = 0; i <= J; ++i) rtab.push_back(&mol_.rho_deriv_table(i));
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            const double v = nodes[n];
            double acc = 0.0;
            if (!with_chi_) {
                acc = (*rtab[static_cast<std::size_t>(J)])[n] *
                      std::pow(eps, -J);
            } else {
                const double carg = lg * eps * v;
                if (std::abs(carg) >= 2.0) {
                    W[n] = 0.0;
                    continue;
                }
                if (std::abs(carg) <= 1.0) {
                    acc = (*rtab[static_cast<std::size_t>(J)])[n] *
                          std::pow(eps, -J);
                } else {
                    const Jet cj = mol_.chi_jet(carg, J);
                    double binom = 1.0;
                    for (int i = J; i >= 0; --i) {
                        acc += binom * std::pow(eps, -i) *
                               (*rtab[static_cast<std::size_t>(i)])[n] *
                               std::pow(lg, J - i) *
                               cj[static_cast<std::size_t>(J - i)];
                        binom = binom * i / (J - i + 1);
                    }
                }
            }
            W[n] = acc * mol_.ref_h();
        }
        return W;
    }

    const Mollifier& mol_;
    SmoothFunction f_;
    int alpha0_;
    double shift_;
    std::vector<double> ladder_;
    bool with_chi_;
    mutable std::mutex mutex_;
    mutable std::vector<std::vector<std::vector<double>>> tables_;
};

// (u * rho_eps)(x) * psi(eps x): the tempered embedding's symbol factor.
class SprimeEval final : public Evaluator1D {
public:
    SprimeEval(std::shared_ptr<const Evaluator1D> inner, const Mollifier& mol,
               std::vector<double> ladder)
        : inner_(std::move(inner)), mol_(mol), ladder_(std::move(ladder)) {}

    cplx jet(std::size_t frame, int order, double x) const override {
        const double eps = ladder_[frame];
        const Jet pj = mol_.psi_jet(eps * x, order);
        cplx acc = 0.0;
        double binom = 1.0;
        for (int i = order; i >= 0; --i) {
            acc += binom * inner_->jet(frame, i, x) *
                   std::pow(eps, order - i) *
                   pj[static_cast<std::size_t>(order - i)];
            binom = binom * i / (order - i + 1);
        }
        return acc;
    }

    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        return inner_->adapted_nodes(frame, a, b);
    }

private:
    std::shared_ptr<const Evaluator1D> inner_;
    const Mollifier& mol_;
    std::vector<double> ladder_;
};

// g(x) * inner with g an analytic envelope (cutoffs kappa and phi).
class EnvelopeEval final : public Evaluator1D {
public:
    EnvelopeEval(std::function<Jet(double, int)> g,
                 std::shared_ptr<const Evaluator1D> inner, double g_center,
                 double g_radius)
        : g_(std::move(g)), inner_(std::move(inner)), center_(g_center),
          radius_(g_radius) {}

    cplx jet(std::size_t frame, int order, double x) const override {
        const Jet gj = g_(x, order);
        cplx acc = 0.0;
        double binom = 1.0;
        for (int i = order; i >= 0; --i) {
            acc += binom * inner_->jet(frame, i, x) *
                   gj[static_cast<std::size_t>(order - i)];
            binom = binom * i / (order - i + 1);
        }
        return acc;
    }

    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        auto out = inner_->adapted_nodes(frame, a, b);
        // Resolve the envelope's transition region too.
        const double lo = std::max(a, center_ - radius_);
        const double hi = std::min(b, center_ + radius_);
        if (lo < hi) {
            const double step = radius_ / 64.0;
            for (double x = lo; x <= hi; x += step) out.push_back(x);
        }
        return out;
    }

private:
    std::function<Jet(double, int)> g_;
    std::shared_ptr<const Evaluator1D> inner_;
    double center_, radius_;
};

class DerivEval final : public Evaluator1D {
public:
    DerivEval(std::shared_ptr<const Evaluator1D> inner, int extra)
        : inner_(std::move(inner)), extra_(extra) {}
    cplx jet(std::size_t frame, int order, double x) const override {
        return inner_->jet(frame, order + extra_, x);
    }
    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        return inner_->adapted_nodes(frame, a, b);
    }

private:
    std::shared_ptr<const Evaluator1D> inner_;
    int extra_;
};

class LinCombEval final : public Evaluator1D {
public:
    explicit LinCombEval(
        std::vector<std::pair<cplx, std::shared_ptr<const Evaluator1D>>> terms)
        : terms_(std::move(terms)) {}
    cplx jet(std::size_t frame, int order, double x) const override {
        cplx acc = 0.0;
        for (const auto& [c, ev] : terms_) acc += c * ev->jet(frame, order, x);
        return acc;
    }
    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        std::vector<double> out;
        for (const auto& [c, ev] : terms_) {
            auto part = ev->adapted_nodes(frame, a, b);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }

private:
    std::vector<std::pair<cplx, std::shared_ptr<const Evaluator1D>>> terms_;
};

class ScaledEval final : public Evaluator1D {
public:
    ScaledEval(std::shared_ptr<const Evaluator1D> inner,
               std::vector<cplx> factors)
        : inner_(std::move(inner)), factors_(std::move(factors)) {}
    cplx jet(std::size_t frame, int order, double x) const override {
        return factors_[frame] * inner_->jet(frame, order, x);
    }
    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        return inner_->adapted_nodes(frame, a, b);
    }

private:
    std::shared_ptr<const Evaluator1D> inner_;
    std::vector<cplx> factors_;
};

// f(x / s_k): synthetic nets whose l-th derivative grows like s_k^{-l}.
class DilatedEval final : public Evaluator1D {
public:
    DilatedEval(DistributionSpec::Base base, std::vector<double> scales)
        : f_(base), scales_(std::move(scales)) {}
    cplx jet(std::size_t frame, int order, double x) const override {
        const double s = scales_[frame];
        return std::pow(s, -order) * f_.jet(order, x / s);
    }
    std::vector<double> adapted_nodes(std::size_t frame, double a,
                                      double b) const override {
        const double s = scales_[frame];
        const double r =
            std::isfinite(f_.support_radius()) ? f_.support_radius() : 8.0;
        std::vector<double> out;
        const double lo = std::max(a, -r * s), hi = std::min(b, r * s);
        const double step = r * s / 512.0;
        if (lo < hi && step > 0.0)
            for (double x = lo; x <= hi; x += step) out.push_back(x);
        return out;
    }

private:
    SmoothFunction f_;
    std::vector<double> scales_;
};

std::shared_ptr<const Evaluator1D> conv_evaluator(
    const DistributionSpec& T, const Mollifier& mol,
    const std::vector<double>& ladder, bool with_chi) {
    switch (T.tag) {
        case DistributionSpec::Tag::delta_deriv:
            return std::make_shared<DeltaEval>(mol, T.k, T.shift, ladder,
                                               with_chi);
        case DistributionSpec::Tag::heaviside:
            return std::make_shared<HeavisideEval>(mol, T.shift, ladder,
                                                   with_chi);
        case DistributionSpec::Tag::smooth:
            return std::make_shared<ConvEval>(mol, T.base, 0, T.shift, ladder,
                                              with_chi);
        case DistributionSpec::Tag::cont_deriv:
        case DistributionSpec::Tag::weighted_poly:
            return std::make_shared<ConvEval>(mol, T.base, T.alpha, T.shift,
                                              ladder, with_chi);
    }
    throw PreconditionError("convolution-rule-missing");
}

void require_dim(const Box& box, int dim, const char* op) {
    if (box.dim != dim)
        throw PreconditionError(std::string(op) +
                                ": box dimension mismatch for this overload");
}

void check_s_regime(const EpsilonNet& net, const char* what) {
    for (std::size_t k = 0; k < net.size(); ++k) {
        const auto& f = net.frame(k);
        if (f.boundary_abs() > kBoundaryRel * std::max(1.0, f.sup_abs()))
            throw PreconditionError(
                std::string("boundary-decay: ") + what +
                " frames do not decay on this box (box too small)");
    }
}

}  // namespace

EmbeddingResult embed_sigma(const DistributionSpec& f,
                            const std::vector<double>& ladder, const Box& box,
                            unsigned jobs) {
    require_dim(box, 1, "embed_sigma");
    if (f.tag != DistributionSpec::Tag::smooth)
        throw PreconditionError("embed_sigma: entry must be smooth");
    auto ev = std::make_shared<NetEvaluator>();
    ev->fx = std::make_shared<SigmaEval>(f.base);
    EpsilonNet net =
        net_from_evaluator(box, ladder, std::move(ev), Side::space, jobs);
    return {std::move(net), EmbedKind::sigma, "sigma(" + f.describe() + ")"};
}

EmbeddingResult embed_iota(const DistributionSpec& T, const Mollifier& mol,
                           const std::vector<double>& ladder, const Box& box,
                           unsigned jobs) {
    require_dim(box, 1, "embed_iota");
    auto ev = std::make_shared<NetEvaluator>();
    ev->fx = conv_evaluator(T, mol, ladder, /*with_chi=*/true);
    EpsilonNet net =
        net_from_evaluator(box, ladder, std::move(ev), Side::space, jobs);
    return {std::move(net), EmbedKind::iota, "iota(" + T.describe() + ")"};
}

EmbeddingResult embed_iota_S(const DistributionSpec& u, const Mollifier& mol,
                             const std::vector<double>& ladder, const Box& box,
                             unsigned jobs) {
    require_dim(box, 1, "embed_iota_S");
    if (!u.cls.oc)
        throw PreconditionError("embed_iota_S: entry is not tagged O'_C");
    auto ev = std::make_shared<NetEvaluator>();
    ev->fx = conv_evaluator(u, mol, ladder, /*with_chi=*/false);
    EpsilonNet net =
        net_from_evaluator(box, ladder, std::move(ev), Side::space, jobs);
    check_s_regime(net, "iota_S");
    return {std::move(net), EmbedKind::iota_S, "iota_S(" + u.describe() + ")"};
}

EmbeddingResult embed_iota_Sprime(const DistributionSpec& u,
                                  const Mollifier& mol,
                                  const std::vector<double>& ladder,
                                  const Box& box, unsigned jobs) {
    require_dim(box, 1, "embed_iota_Sprime");
    if (!u.cls.tempered)
        throw PreconditionError("embed_iota_Sprime: entry is not tagged S'");
    auto ev = std::make_shared<NetEvaluator>();
    ev->fx = std::make_shared<SprimeEval>(
        conv_evaluator(u, mol, ladder, /*with_chi=*/false), mol, ladder);
    EpsilonNet net =
        net_from_evaluator(box, ladder, std::move(ev), Side::space, jobs);
    check_s_regime(net, "iota_Sprime");
    return {std::move(net), EmbedKind::iota_Sprime,
            "iota_S'(" + u.describe() + ")"};
}

EmbeddingResult embed_sigma2(const DistributionSpec& fx,
                             const DistributionSpec& fy,
                             const std::vector<double>& ladder, const Box& box,
                             unsigned jobs) {
    require_dim(box, 2, "embed_sigma2");
    if (fx.tag != DistributionSpec::Tag::smooth ||
        fy.tag != DistributionSpec::Tag::smooth)
        throw PreconditionError("embed_sigma2: entries must be smooth");
    auto ev = std::make_shared<NetEvaluator>();
    ev->fx = std::make_shared<SigmaEval>(fx.base);
    ev->fy = std::make_shared<SigmaEval>(fy.base);
    EpsilonNet net =
        net_from_evaluator(box, ladder, std::move(ev), Side::space, jobs);
    return {std::move(net), EmbedKind::sigma,
            "sigma(" + fx.describe() + " x " + fy.describe() + ")"};
}

EmbeddingResult embed_iota2(const DistributionSpec& Tx,
                            const DistributionSpec& Ty, const Mollifier& mol,
                            const std::vector<double>& ladder, const Box& box,
                            unsigned jobs) {
    require_dim(box, 2, "embed_iota2");
    auto ev = std::make_shared<NetEvaluator>();
    ev->fx = conv_evaluator(Tx, mol, ladder, /*with_chi=*/true);
    ev->fy = conv_evaluator(Ty, mol, ladder, /*with_chi=*/true);
    EpsilonNet net =
        net_from_evaluator(box, ladder, std::move(ev), Side::space, jobs);
    return {std::move(net), EmbedKind::iota,
            "iota(" + Tx.describe() + " x " + Ty.describe() + ")"};
}

EmbeddingResult embed_iota_CS(const EmbeddingResult& u,
                              const PlateauProfile& kappa, unsigned jobs,
                              double floor) {
    const EpsilonNet& in = u.net;
    const Box& box = in.box();
    // Frames must live inside the plateau.
    for (std::size_t k = 0; k < in.size(); ++k) {
        const auto& f = in.frame(k);
        const double sup = std::max(1.0, f.sup_abs());
        double outside = 0.0;
        if (box.dim == 1) {
            for (std::size_t j = 0; j < box.n; ++j)
                if (std::abs(box.node(0, j)) > kappa.r1())
                    outside = std::max(outside, std::abs(f.samples()[j]));
        } else {
            for (std::size_t i = 0; i < box.n; ++i)
                for (std::size_t j = 0; j < box.n; ++j) {
                    if (std::max(std::abs(box.node(0, i)),
                                 std::abs(box.node(1, j))) > kappa.r1())
                        outside = std::max(
                            outside, std::abs(f.samples()[i * box.n + j]));
                }
        }
        if (outside > floor * sup)
            throw PreconditionError(
                "support-not-contained: frames exceed kappa's plateau");
    }
    std::vector<GridFunction> frames;
    frames.reserve(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) {
        std::vector<cplx> s = in.frame(k).samples();
        if (box.dim == 1) {
            for (std::size_t j = 0; j < box.n; ++j)
                s[j] *= kappa.value(box.node(0, j));
        } else {
            for (std::size_t i = 0; i < box.n; ++i)
                for (std::size_t j = 0; j < box.n; ++j)
                    s[i * box.n + j] *= kappa.value(box.node(0, i)) *
                                        kappa.value(box.node(1, j));
        }
        frames.emplace_back(box, std::move(s));
    }
    (void)jobs;
    EpsilonNet net(box, in.ladder(), std::move(frames), Side::space);
    net.set_trusted_prefix(in.trusted_prefix());
    if (in.evaluator()) {
        auto ev = std::make_shared<NetEvaluator>();
        auto wrap = [&kappa](std::shared_ptr<const Evaluator1D> inner) {
            return std::make_shared<EnvelopeEval>(
                [&kappa](double x, int order) { return kappa.jet(x, order); },
                std::move(inner), 0.0, kappa.r2());
        };
        ev->fx = wrap(in.evaluator()->fx);
        if (in.evaluator()->fy) ev->fy = wrap(in.evaluator()->fy);
        net.set_evaluator(std::move(ev));
    }
    return {std::move(net), EmbedKind::iota_CS, "iota_CS(" + u.source + ")"};
}

EmbeddingResult embed_combination(const EmbeddingResult& A,
                                  const EmbeddingResult& B, cplx a, cplx b) {
    EpsilonNet net = A.net.combine(B.net, a, b);
    if (A.net.evaluator() && B.net.evaluator() && net.box().dim == 1) {
        auto ev = std::make_shared<NetEvaluator>();
        ev->fx = std::make_shared<LinCombEval>(
            std::vector<std::pair<cplx, std::shared_ptr<const Evaluator1D>>>{
                {a, A.net.evaluator()->fx}, {b, B.net.evaluator()->fx}});
        net.set_evaluator(std::move(ev));
    }
    return {std::move(net), A.which, A.source + " + " + B.source};
}

EpsilonNet net_derivative(const EpsilonNet& net, int axis, int order,
                          DerivScheme scheme, unsigned jobs) {
    if (net.evaluator()) {
        auto ev = std::make_shared<NetEvaluator>();
        const auto& in = *net.evaluator();
        ev->fx = (axis == 0 && order > 0)
                     ? std::make_shared<DerivEval>(in.fx, order)
                     : in.fx;
        if (in.fy)
            ev->fy = (axis == 1 && order > 0)
                         ? std::make_shared<DerivEval>(in.fy, order)
                         : in.fy;
        EpsilonNet out = net_from_evaluator(net.box(), net.ladder(),
                                            std::move(ev), net.side(), jobs);
        out.set_trusted_prefix(net.trusted_prefix());
        return out;
    }
    std::vector<GridFunction> frames;
    frames.reserve(net.size());
    for (std::size_t k = 0; k < net.size(); ++k)
        frames.push_back(derivative(net.frame(k), axis, order, scheme));
    EpsilonNet out(net.box(), net.ladder(), std::move(frames), net.side());
    out.set_trusted_prefix(net.trusted_prefix());
    return out;
}

EpsilonNet net_power_scaled(const EpsilonNet& net, double c) {
    std::vector<cplx> factors;
    factors.reserve(net.size());
    for (double eps : net.ladder())
        factors.emplace_back(std::pow(eps, -c), 0.0);
    EpsilonNet out = net.scaled(factors);
    if (net.evaluator()) {
        auto ev = std::make_shared<NetEvaluator>();
        ev->fx = std::make_shared<ScaledEval>(net.evaluator()->fx, factors);
        if (net.evaluator()->fy) ev->fy = net.evaluator()->fy;
        out.set_evaluator(std::move(ev));
    }
    return out;
}

EpsilonNet net_dilated(DistributionSpec::Base base,
                       const std::vector<double>& ladder, const Box& box,
                       double p, unsigned jobs) {
    require_dim(box, 1, "net_dilated");
    std::vector<double> scales;
    scales.reserve(ladder.size());
    for (double eps : ladder) scales.push_back(std::pow(eps, p));
    auto ev = std::make_shared<NetEvaluator>();
    ev->fx = std::make_shared<DilatedEval>(base, std::move(scales));
    return net_from_evaluator(box, ladder, std::move(ev), Side::space, jobs);
}

G1Report check_G1(const EmbeddingResult& result, const Box& K, int L,
                  double b_max, FitWindow window, unsigned jobs) {
    G1Report rep;
    rep.profile = profile_space(result.net, K, L, DerivScheme::fd4, window,
                                1e-13, jobs);
    const auto exps = rep.profile.exponents();
    double b_hat = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < exps.size(); ++l)
        b_hat = std::max(b_hat, exps[l] - static_cast<double>(l));
    rep.b_hat = b_hat;
    const auto n = static_cast<double>(exps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        sx += static_cast<double>(i);
        sy += exps[i];
        sxx += static_cast<double>(i) * static_cast<double>(i);
        sxy += static_cast<double>(i) * exps[i];
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.pass = b_hat <= b_max && rep.slope <= 1.25;
    return rep;
}

}  // namespace genfunc
