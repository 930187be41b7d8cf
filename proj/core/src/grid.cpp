#include "genfunc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "genfunc/errors.hpp"
#include "genfunc/parallel.hpp"

namespace genfunc {

namespace {
constexpr double kBoundaryRelFloor = 1e-10;
constexpr std::size_t kAxisCap1d = 6000;
constexpr std::size_t kAxisCap2d = 700;
}  // namespace

Box Box::make1d(double lo, double hi, std::size_t n) {
    Box b;
    b.dim = 1;
    b.lo = {lo, 0.0};
    b.hi = {hi, 0.0};
    b.n = n;
    if (!(lo < hi)) throw PreconditionError("box: lo must be < hi");
    if (n < 64 || !is_power_of_two(n))
        throw PreconditionError("box: n must be a power of two >= 64");
    return b;
}

Box Box::make2d(double lo0, double hi0, double lo1, double hi1, std::size_t n) {
    Box b;
    b.dim = 2;
    b.lo = {lo0, lo1};
    b.hi = {hi0, hi1};
    b.n = n;
    if (!(lo0 < hi0) || !(lo1 < hi1))
        throw PreconditionError("box: lo must be < hi");
    if (n < 64 || !is_power_of_two(n))
        throw PreconditionError("box: n must be a power of two >= 64");
    return b;
}

Box Box::symmetric(int dim, double half, std::size_t n) {
    return dim == 1 ? make1d(-half, half, n)
                    : make2d(-half, half, -half, half, n);
}

bool Box::contains(const Box& sub) const {
    if (sub.dim != dim) return false;
    for (int ax = 0; ax < dim; ++ax) {
        const auto a = static_cast<std::size_t>(ax);
        if (sub.lo[a] < lo[a] - 1e-12 || sub.hi[a] > hi[a] + 1e-12) return false;
    }
    return true;
}

std::pair<std::size_t, std::size_t> Box::node_range(int axis, double a,
                                                    double b) const {
    const double step = h(axis);
    const double origin = lo[static_cast<std::size_t>(axis)];
    const double tol = 1e-9 * step;
    long first = static_cast<long>(std::ceil((a - origin) / step - tol));
    long last = static_cast<long>(std::floor((b - origin) / step + tol));
    first = std::max(first, 0L);
    last = std::min(last, static_cast<long>(n) - 1);
    if (first > last) return {1, 0};  // empty
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

bool Box::operator==(const Box& other) const {
    return dim == other.dim && n == other.n && lo == other.lo && hi == other.hi;
}

Box Box::central_half() const {
    Box b = *this;
    for (int ax = 0; ax < dim; ++ax) {
        const auto a = static_cast<std::size_t>(ax);
        const double mid = 0.5 * (lo[a] + hi[a]);
        const double quarter = 0.25 * (hi[a] - lo[a]);
        b.lo[a] = mid - quarter;
        b.hi[a] = mid + quarter;
    }
    return b;
}

GridFunction::GridFunction(Box box, std::vector<cplx> samples)
    : box_(box), samples_(std::move(samples)) {
    if (samples_.size() != box_.total())
        throw PreconditionError("grid-function: sample count mismatch");
}

GridFunction::GridFunction(Box box) : box_(box), samples_(box.total(), cplx{}) {}

double GridFunction::sup_abs() const {
    double m = 0.0;
    for (const auto& v : samples_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::boundary_abs() const {
    double m = 0.0;
    const std::size_t n = box_.n;
    if (box_.dim == 1) {
        m = std::max(std::abs(samples_.front()), std::abs(samples_.back()));
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            m = std::max(m, std::abs(samples_[j]));                  // row 0
            m = std::max(m, std::abs(samples_[(n - 1) * n + j]));    // row n-1
            m = std::max(m, std::abs(samples_[j * n]));              // col 0
            m = std::max(m, std::abs(samples_[j * n + n - 1]));      // col n-1
        }
    }
    return m;
}

namespace {

bool decays_at_boundary(const GridFunction& g) {
    return g.boundary_abs() <= kBoundaryRelFloor * std::max(1.0, g.sup_abs());
}

// 4th-order first derivative along one line of values.
void fd4_line(const std::vector<cplx>& in, std::vector<cplx>& out, double h) {
    const std::size_t n = in.size();
    const double ih = 1.0 / h;
    auto at = [&](std::size_t i) { return in[i]; };
    out.resize(n);
    // one-sided closures
    out[0] = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) -
              3.0 * at(4)) /
             12.0 * ih;
    out[1] = (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) +
              at(4)) /
             12.0 * ih;
    out[n - 2] = (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) +
                  6.0 * at(n - 4) - at(n - 5)) /
                 12.0 * ih;
    out[n - 1] = (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) -
                  16.0 * at(n - 4) + 3.0 * at(n - 5)) /
                 12.0 * ih;
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) /
                 12.0 * ih;
}

void spectral_line(std::vector<cplx>& line, double width, int order) {
    const std::size_t n = line.size();
    fft_inplace(line, -1);
    const double dxi = 2.0 * std::numbers::pi / width;
    for (std::size_t m = 0; m < n; ++m) {
        const long sm = (m < n / 2) ? static_cast<long>(m)
                                    : static_cast<long>(m) - static_cast<long>(n);
        if (order % 2 == 1 && m == n / 2) {
            line[m] = 0.0;  // unmatched Nyquist mode
            continue;
        }
        const cplx ix(0.0, dxi * static_cast<double>(sm));
        cplx f(1.0, 0.0);
        for (int o = 0; o < order; ++o) f *= ix;
        line[m] *= f;
    }
    fft_inplace(line, +1);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : line) v *= inv;
}

template <typename LineFn>
void apply_along_axis(const Box& box, std::vector<cplx>& data, int axis,
                      LineFn&& fn) {
    const std::size_t n = box.n;
    if (box.dim == 1) {
        fn(data);
        return;
    }
    std::vector<cplx> line(n);
    if (axis == 1) {
        for (std::size_t r = 0; r < n; ++r) {
            std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(r * n), n,
                        line.begin());
            fn(line);
            std::copy_n(line.begin(), n,
                        data.begin() + static_cast<std::ptrdiff_t>(r * n));
        }
    } else {
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t r = 0; r < n; ++r) line[r] = data[r * n + c];
            fn(line);
            for (std::size_t r = 0; r < n; ++r) data[r * n + c] = line[r];
        }
    }
}

}  // namespace

GridFunction derivative(const GridFunction& g, int axis, int order,
                        DerivScheme scheme) {
    if (order < 0 || order > 6)
        throw PreconditionError("derivative: order must be in 0..6");
    if (axis < 0 || axis >= g.box().dim)
        throw PreconditionError("derivative: axis out of range");
    if (order == 0) return g;

    const Box& box = g.box();
    std::vector<cplx> data = g.samples();
    if (scheme == DerivScheme::fd4) {
        const double h = box.h(axis);
        std::vector<cplx> out;
        for (int o = 0; o < order; ++o) {
            apply_along_axis(box, data, axis, [&](std::vector<cplx>& line) {
                fd4_line(line, out, h);
                line = out;
            });
        }
    } else {
        if (!decays_at_boundary(g))
            throw PreconditionError(
                "boundary-decay: spectral derivative needs decaying frames");
        const double width = box.hi[static_cast<std::size_t>(axis)] -
                             box.lo[static_cast<std::size_t>(axis)];
        apply_along_axis(box, data, axis, [&](std::vector<cplx>& line) {
            spectral_line(line, width, order);
        });
    }
    return GridFunction(box, std::move(data));
}

EpsilonNet::EpsilonNet(Box box, std::vector<double> ladder,
                       std::vector<GridFunction> frames, Side side)
    : box_(box), ladder_(std::move(ladder)), frames_(std::move(frames)),
      side_(side) {
    if (ladder_.size() < 6)
        throw PreconditionError("epsilon-net: ladder length must be >= 6");
    if (frames_.size() != ladder_.size())
        throw PreconditionError("epsilon-net: one frame per ladder entry");
    for (std::size_t i = 0; i < ladder_.size(); ++i) {
        if (!(ladder_[i] > 0.0) || ladder_[i] > 1.0)
            throw PreconditionError("epsilon-net: ladder values must be in (0,1]");
        if (i > 0 && !(ladder_[i] < ladder_[i - 1]))
            throw PreconditionError("epsilon-net: ladder must be strictly decreasing");
    }
    for (const auto& f : frames_) {
        if (!(f.box() == box_))
            throw PreconditionError("epsilon-net: frames must share the box");
        for (const auto& v : f.samples())
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw PreconditionError("epsilon-net: non-finite sample");
    }
    trusted_prefix_ = ladder_.size();
}

void EpsilonNet::set_trusted_prefix(std::size_t p) {
    trusted_prefix_ = std::min(p, ladder_.size());
}

EpsilonNet EpsilonNet::combine(const EpsilonNet& other, cplx a, cplx b) const {
    if (!(box_ == other.box_) || ladder_ != other.ladder_ || side_ != other.side_)
        throw PreconditionError("combine: nets must share box, ladder and side");
    std::vector<GridFunction> frames;
    frames.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) {
        std::vector<cplx> s(box_.total());
        const auto& u = frames_[k].samples();
        const auto& v = other.frames_[k].samples();
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = a * u[i] + b * v[i];
        frames.emplace_back(box_, std::move(s));
    }
    EpsilonNet out(box_, ladder_, std::move(frames), side_);
    out.set_trusted_prefix(std::min(trusted_prefix_, other.trusted_prefix_));
    return out;
}

EpsilonNet EpsilonNet::scaled(const std::vector<cplx>& factors) const {
    if (factors.size() != size())
        throw PreconditionError("scaled: one factor per ladder entry");
    std::vector<GridFunction> frames;
    frames.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) {
        std::vector<cplx> s = frames_[k].samples();
        for (auto& v : s) v *= factors[k];
        frames.emplace_back(box_, std::move(s));
    }
    EpsilonNet out(box_, ladder_, std::move(frames), side_);
    out.set_trusted_prefix(trusted_prefix_);
    return out;
}

std::vector<double> dyadic_ladder(int k_min, int k_max) {
    if (k_min < 1 || k_max <= k_min)
        throw PreconditionError("ladder: need 1 <= k_min < k_max");
    std::vector<double> out;
    for (int k = k_min; k <= k_max; ++k) out.push_back(std::pow(2.0, -k));
    return out;
}

EpsilonNet net_from_evaluator(const Box& box, std::vector<double> ladder,
                              std::shared_ptr<const NetEvaluator> ev, Side side,
                              unsigned jobs) {
    const std::size_t count = ladder.size();
    std::vector<GridFunction> frames(count, GridFunction(box));
    parallel_for(count, jobs, [&](std::size_t k) {
        if (box.dim == 1) {
            std::vector<cplx> s(box.n);
            for (std::size_t j = 0; j < box.n; ++j)
                s[j] = ev->fx->jet(k, 0, box.node(0, j));
            frames[k] = GridFunction(box, std::move(s));
        } else {
            std::vector<cplx> ax(box.n), ay(box.n);
            for (std::size_t j = 0; j < box.n; ++j) {
                ax[j] = ev->fx->jet(k, 0, box.node(0, j));
                ay[j] = ev->fy->jet(k, 0, box.node(1, j));
            }
            std::vector<cplx> s(box.total());
            for (std::size_t i = 0; i < box.n; ++i)
                for (std::size_t j = 0; j < box.n; ++j)
                    s[i * box.n + j] = ax[i] * ay[j];
            frames[k] = GridFunction(box, std::move(s));
        }
    });
    EpsilonNet net(box, std::move(ladder), std::move(frames), side);
    net.set_evaluator(std::move(ev));
    return net;
}

/// --- seminorm engine --------------------------------------------------------

namespace {

std::vector<double> axis_positions(const Box& box, int axis, double a, double b,
                                   const Evaluator1D* ev, std::size_t k,
                                   std::size_t cap) {
    std::vector<double> xs;
    auto [first, last] = box.node_range(axis, a, b);
    if (first <= last)
        for (std::size_t j = first; j <= last; ++j)
            xs.push_back(box.node(axis, j));
    if (ev) {
        auto extra = ev->adapted_nodes(k, a, b);
        xs.insert(xs.end(), extra.begin(), extra.end());
    }
    if (xs.size() > cap) {
        std::sort(xs.begin(), xs.end());
        std::vector<double> strided;
        const double step =
            static_cast<double>(xs.size()) / static_cast<double>(cap);
        for (std::size_t i = 0; i < cap; ++i)
            strided.push_back(xs[static_cast<std::size_t>(
                static_cast<double>(i) * step)]);
        xs = std::move(strided);
    }
    return xs;
}

// |d^o factor| for o = 0..L at each position.
std::vector<std::vector<double>> axis_jet_abs(const Evaluator1D& ev,
                                              std::size_t k, int L,
                                              const std::vector<double>& xs) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(L) + 1);
    for (auto& row : out) row.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (int o = 0; o <= L; ++o)
            out[static_cast<std::size_t>(o)][i] = std::abs(ev.jet(k, o, xs[i]));
    return out;
}

// p_{K,l} for l = 0..L via the analytic evaluator.
std::vector<double> eval_space_row(const EpsilonNet& net, std::size_t k,
                                   const Box& K, int L) {
    const auto& ev = *net.evaluator();
    const Box& box = net.box();
    std::vector<double> row(static_cast<std::size_t>(L) + 1, 0.0);
    if (box.dim == 1) {
        const auto xs = axis_positions(box, 0, K.lo[0], K.hi[0], ev.fx.get(), k,
                                       kAxisCap1d);
        const auto jets = axis_jet_abs(*ev.fx, k, L, xs);
        double running = 0.0;
        for (int l = 0; l <= L; ++l) {
            for (double v : jets[static_cast<std::size_t>(l)])
                running = std::max(running, v);
            row[static_cast<std::size_t>(l)] = running;
        }
    } else {
        const auto xs0 = axis_positions(box, 0, K.lo[0], K.hi[0], ev.fx.get(),
                                        k, kAxisCap2d);
        const auto xs1 = axis_positions(box, 1, K.lo[1], K.hi[1], ev.fy.get(),
                                        k, kAxisCap2d);
        const auto ja = axis_jet_abs(*ev.fx, k, L, xs0);
        const auto jb = axis_jet_abs(*ev.fy, k, L, xs1);
        std::vector<double> sa(static_cast<std::size_t>(L) + 1, 0.0);
        std::vector<double> sb(static_cast<std::size_t>(L) + 1, 0.0);
        for (int o = 0; o <= L; ++o) {
            for (double v : ja[static_cast<std::size_t>(o)])
                sa[static_cast<std::size_t>(o)] =
                    std::max(sa[static_cast<std::size_t>(o)], v);
            for (double v : jb[static_cast<std::size_t>(o)])
                sb[static_cast<std::size_t>(o)] =
                    std::max(sb[static_cast<std::size_t>(o)], v);
        }
        for (int l = 0; l <= L; ++l) {
            double m = (l > 0) ? row[static_cast<std::size_t>(l - 1)] : 0.0;
            for (int a = 0; a <= l; ++a)
                m = std::max(m, sa[static_cast<std::size_t>(a)] *
                                    sb[static_cast<std::size_t>(l - a)]);
            row[static_cast<std::size_t>(l)] = m;
        }
    }
    return row;
}

// mu_{q,l} table, row-major (Q+1)x(L+1), via the analytic evaluator.
std::vector<double> eval_mu_table(const EpsilonNet& net, std::size_t k, int Q,
                                  int L) {
    const auto& ev = *net.evaluator();
    const Box& box = net.box();
    std::vector<double> table(static_cast<std::size_t>((Q + 1) * (L + 1)), 0.0);
    auto put = [&](int q, int l, double v) {
        auto& cell = table[static_cast<std::size_t>(q * (L + 1) + l)];
        cell = std::max(cell, v);
    };
    if (box.dim == 1) {
        const auto xs = axis_positions(box, 0, box.lo[0], box.hi[0],
                                       ev.fx.get(), k, kAxisCap1d);
        const auto jets = axis_jet_abs(*ev.fx, k, L, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double w = 1.0 + std::abs(xs[i]);
            double ml = 0.0;
            for (int l = 0; l <= L; ++l) {
                ml = std::max(ml, jets[static_cast<std::size_t>(l)][i]);
                double wq = 1.0;
                for (int q = 0; q <= Q; ++q) {
                    put(q, l, wq * ml);
                    wq *= w;
                }
            }
        }
    } else {
        const auto xs0 = axis_positions(box, 0, box.lo[0], box.hi[0],
                                        ev.fx.get(), k, kAxisCap2d);
        const auto xs1 = axis_positions(box, 1, box.lo[1], box.hi[1],
                                        ev.fy.get(), k, kAxisCap2d);
        const auto ja = axis_jet_abs(*ev.fx, k, L, xs0);
        const auto jb = axis_jet_abs(*ev.fy, k, L, xs1);
        for (std::size_t i = 0; i < xs0.size(); ++i) {
            for (std::size_t j = 0; j < xs1.size(); ++j) {
                const double w =
                    1.0 + std::hypot(xs0[i], xs1[j]);
                double ml = 0.0;
                for (int l = 0; l <= L; ++l) {
                    for (int a = 0; a <= l; ++a)
                        ml = std::max(ml, ja[static_cast<std::size_t>(a)][i] *
                                              jb[static_cast<std::size_t>(l - a)][j]);
                    double wq = 1.0;
                    for (int q = 0; q <= Q; ++q) {
                        put(q, l, wq * ml);
                        wq *= w;
                    }
                }
            }
        }
    }
    return table;
}

// Derivative grids |alpha| <= L for the grid path (d=1: index = order;
// d=2: index = a0*(L+1)+a1 for a0+a1 <= L).
std::vector<GridFunction> derivative_grids(const GridFunction& g, int L,
                                           DerivScheme scheme) {
    const int dim = g.box().dim;
    if (dim == 1) {
        std::vector<GridFunction> out;
        out.push_back(g);
        for (int o = 1; o <= L; ++o)
            out.push_back(derivative(out.back(), 0, 1, scheme));
        return out;
    }
    std::vector<GridFunction> out(
        static_cast<std::size_t>((L + 1) * (L + 1)), GridFunction(g.box()));
    std::vector<GridFunction> dxs;
    dxs.push_back(g);
    for (int a0 = 0; a0 <= L; ++a0) {
        if (a0 > 0) dxs.push_back(derivative(dxs.back(), 0, 1, scheme));
        GridFunction cur = dxs[static_cast<std::size_t>(a0)];
        out[static_cast<std::size_t>(a0 * (L + 1))] = cur;
        for (int a1 = 1; a0 + a1 <= L; ++a1) {
            cur = derivative(cur, 1, 1, scheme);
            out[static_cast<std::size_t>(a0 * (L + 1) + a1)] = cur;
        }
    }
    return out;
}

std::vector<double> grid_space_row(const GridFunction& g, const Box& K, int L,
                                   DerivScheme scheme) {
    const Box& box = g.box();
    if (!box.contains(K)) throw PreconditionError("subbox-out-of-range");
    const auto grids = derivative_grids(g, L, scheme);
    std::vector<double> row(static_cast<std::size_t>(L) + 1, 0.0);
    const auto [i0, i1] = box.node_range(0, K.lo[0], K.hi[0]);
    if (box.dim == 1) {
        double running = 0.0;
        for (int l = 0; l <= L; ++l) {
            if (i0 <= i1)
                for (std::size_t j = i0; j <= i1; ++j)
                    running = std::max(
                        running, std::abs(grids[static_cast<std::size_t>(l)]
                                              .samples()[j]));
            row[static_cast<std::size_t>(l)] = running;
        }
    } else {
        const auto [j0, j1] = box.node_range(1, K.lo[1], K.hi[1]);
        std::vector<double> per_alpha(grids.size(), 0.0);
        for (int a0 = 0; a0 <= L; ++a0)
            for (int a1 = 0; a0 + a1 <= L; ++a1) {
                const auto& s =
                    grids[static_cast<std::size_t>(a0 * (L + 1) + a1)].samples();
                double m = 0.0;
                if (i0 <= i1 && j0 <= j1)
                    for (std::size_t i = i0; i <= i1; ++i)
                        for (std::size_t j = j0; j <= j1; ++j)
                            m = std::max(m, std::abs(s[i * box.n + j]));
                per_alpha[static_cast<std::size_t>(a0 * (L + 1) + a1)] = m;
            }
        for (int l = 0; l <= L; ++l) {
            double m = (l > 0) ? row[static_cast<std::size_t>(l - 1)] : 0.0;
            for (int a0 = 0; a0 <= l; ++a0)
                m = std::max(m, per_alpha[static_cast<std::size_t>(
                                    a0 * (L + 1) + (l - a0))]);
            row[static_cast<std::size_t>(l)] = m;
        }
    }
    return row;
}

std::vector<double> grid_mu_table(const GridFunction& g, int Q, int L,
                                  DerivScheme scheme) {
    const Box& box = g.box();
    const auto grids = derivative_grids(g, L, scheme);
    std::vector<double> table(static_cast<std::size_t>((Q + 1) * (L + 1)), 0.0);
    auto accumulate = [&](double w, double ml, int l) {
        double wq = 1.0;
        for (int q = 0; q <= Q; ++q) {
            auto& cell = table[static_cast<std::size_t>(q * (L + 1) + l)];
            cell = std::max(cell, wq * ml);
            wq *= w;
        }
    };
    if (box.dim == 1) {
        for (std::size_t j = 0; j < box.n; ++j) {
            const double w = 1.0 + std::abs(box.node(0, j));
            double ml = 0.0;
            for (int l = 0; l <= L; ++l) {
                ml = std::max(ml,
                              std::abs(grids[static_cast<std::size_t>(l)]
                                           .samples()[j]));
                accumulate(w, ml, l);
            }
        }
    } else {
        for (std::size_t i = 0; i < box.n; ++i) {
            for (std::size_t j = 0; j < box.n; ++j) {
                const double w =
                    1.0 + std::hypot(box.node(0, i), box.node(1, j));
                double ml = 0.0;
                for (int l = 0; l <= L; ++l) {
                    for (int a0 = 0; a0 <= l; ++a0) {
                        const auto& s = grids[static_cast<std::size_t>(
                                                  a0 * (L + 1) + (l - a0))]
                                            .samples();
                        ml = std::max(ml, std::abs(s[i * box.n + j]));
                    }
                    accumulate(w, ml, l);
                }
            }
        }
    }
    return table;
}

std::vector<double> space_row(const EpsilonNet& net, std::size_t k,
                              const Box& K, int L, DerivScheme scheme) {
    if (net.evaluator()) return eval_space_row(net, k, K, L);
    return grid_space_row(net.frame(k), K, L, scheme);
}

std::vector<double> mu_table(const EpsilonNet& net, std::size_t k, int Q, int L,
                             DerivScheme scheme) {
    if (net.evaluator()) return eval_mu_table(net, k, Q, L);
    return grid_mu_table(net.frame(k), Q, L, scheme);
}

}  // namespace

double seminorm_p(const GridFunction& g, const Box& K, int l,
                  DerivScheme scheme) {
    if (l < 0 || l > 6) throw PreconditionError("seminorm_p: l must be in 0..6");
    return grid_space_row(g, K, l, scheme).back();
}

double seminorm_mu(const GridFunction& g, int q, int l, DerivScheme scheme) {
    if (l < 0 || l > 6) throw PreconditionError("seminorm_mu: l must be in 0..6");
    if (q < 0 || q > 12)
        throw PreconditionError("seminorm_mu: q must be in 0..12");
    return grid_mu_table(g, q, l, scheme).back();
}

double net_seminorm_p(const EpsilonNet& net, std::size_t k, const Box& K, int l,
                      DerivScheme scheme) {
    if (l < 0 || l > 6) throw PreconditionError("seminorm_p: l must be in 0..6");
    if (!net.box().contains(K)) throw PreconditionError("subbox-out-of-range");
    return space_row(net, k, K, l, scheme).back();
}

double net_seminorm_mu(const EpsilonNet& net, std::size_t k, int q, int l,
                       DerivScheme scheme) {
    if (l < 0 || l > 6) throw PreconditionError("seminorm_mu: l must be in 0..6");
    if (q < 0 || q > 12)
        throw PreconditionError("seminorm_mu: q must be in 0..12");
    return mu_table(net, k, q, l, scheme).back();
}

double negligible_sentinel() {
    return -std::numeric_limits<double>::infinity();
}

FitResult fit_growth(const std::vector<double>& values,
                     const std::vector<double>& ladder, double floor) {
    if (values.size() != ladder.size())
        throw PreconditionError("fit_growth: values/ladder size mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > floor)) continue;
        xs.push_back(std::log(1.0 / ladder[i]));
        ys.push_back(std::log(values[i]));
    }
    if (xs.size() * 2 < values.size()) {
        FitResult r;
        r.exponent = negligible_sentinel();
        r.log_c = negligible_sentinel();
        r.residual = 0.0;
        return r;
    }
    if (xs.size() < 4)
        throw PreconditionError("insufficient-points: need >= 4 usable pairs");
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    FitResult r;
    const double denom = n * sxx - sx * sx;
    r.exponent = (n * sxy - sx * sy) / denom;
    r.log_c = (sy - r.exponent * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (r.exponent * xs[i] + r.log_c);
        ss += e * e;
    }
    r.residual = std::sqrt(ss / n);
    return r;
}

FitWindow resolve_window(const EpsilonNet& net, FitWindow requested) {
    FitWindow w;
    if (!requested.automatic()) {
        w.lo = std::min(requested.lo, net.size());
        w.hi = std::min(requested.hi, net.size());
        if (w.lo >= w.hi) throw PreconditionError("fit-window: empty range");
        return w;
    }
    w.lo = 0;
    w.hi = std::min(net.size(), std::max<std::size_t>(4, net.trusted_prefix()));
    return w;
}

std::vector<double> GrowthProfile::exponents() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.exponent);
    return out;
}

std::vector<double> GrowthProfile::residuals() const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.residual);
    return out;
}

GrowthProfile profile_space(const EpsilonNet& net, const Box& K, int L,
                            DerivScheme scheme, FitWindow window, double floor,
                            unsigned jobs) {
    if (net.side() != Side::space)
        throw PreconditionError("profile_space: net must be space-side");
    if (!net.box().contains(K)) throw PreconditionError("subbox-out-of-range");
    const FitWindow w = resolve_window(net, window);
    const std::size_t count = w.hi - w.lo;
    std::vector<std::vector<double>> rows(count);
    parallel_for(count, jobs, [&](std::size_t i) {
        rows[i] = space_row(net, w.lo + i, K, L, scheme);
    });
    std::vector<double> ladder(net.ladder().begin() + static_cast<long>(w.lo),
                               net.ladder().begin() + static_cast<long>(w.hi));
    GrowthProfile prof;
    prof.axis = ProfileAxis::space_l;
    prof.L = L;
    prof.ladder_lo = w.lo;
    prof.ladder_hi = w.hi;
    for (int l = 0; l <= L; ++l) {
        std::vector<double> series(count);
        for (std::size_t i = 0; i < count; ++i)
            series[i] = rows[i][static_cast<std::size_t>(l)];
        prof.entries.push_back(fit_growth(series, ladder, floor));
    }
    return prof;
}

GrowthProfile profile_decay(const EpsilonNet& net, int Q, int L,
                            DerivScheme scheme, FitWindow window, double floor,
                            unsigned jobs) {
    const FitWindow w = resolve_window(net, window);
    // S-regime gate, applied to the grid-faithful frames in the window (the
    // min-4 extension past the trusted prefix is exempt).
    const std::size_t gate = std::min(w.hi, net.trusted_prefix());
    for (std::size_t k = w.lo; k < gate; ++k)
        if (!decays_at_boundary(net.frame(k)))
            throw PreconditionError(
                "boundary-decay: net is not in the S-regime on this box");
    const std::size_t count = w.hi - w.lo;
    std::vector<std::vector<double>> tables(count);
    parallel_for(count, jobs, [&](std::size_t i) {
        tables[i] = mu_table(net, w.lo + i, Q, L, scheme);
    });
    std::vector<double> ladder(net.ladder().begin() + static_cast<long>(w.lo),
                               net.ladder().begin() + static_cast<long>(w.hi));
    GrowthProfile prof;
    prof.axis = ProfileAxis::two_index;
    prof.Q = Q;
    prof.L = L;
    prof.ladder_lo = w.lo;
    prof.ladder_hi = w.hi;
    for (int q = 0; q <= Q; ++q) {
        for (int l = 0; l <= L; ++l) {
            std::vector<double> series(count);
            for (std::size_t i = 0; i < count; ++i)
                series[i] =
                    tables[i][static_cast<std::size_t>(q * (L + 1) + l)];
            prof.entries.push_back(fit_growth(series, ladder, floor));
        }
    }
    return prof;
}

NegligibilityMode NegligibilityMode::space(Box K) {
    NegligibilityMode m;
    m.kind = Kind::space;
    m.K = K;
    return m;
}

NegligibilityMode NegligibilityMode::decay(int Q) {
    NegligibilityMode m;
    m.kind = Kind::decay;
    m.Q = Q;
    return m;
}

bool is_negligible(const EpsilonNet& net, const NegligibilityMode& mode,
                   int m_max, double floor, DerivScheme scheme,
                   FitWindow window) {
    const FitWindow w = resolve_window(net, window);
    const std::size_t count = w.hi - w.lo;
    std::vector<double> ladder(net.ladder().begin() + static_cast<long>(w.lo),
                               net.ladder().begin() + static_cast<long>(w.hi));
    auto series_ok = [&](const std::vector<double>& series) {
        const FitResult fit = fit_growth(series, ladder, floor);
        if (fit.exponent == negligible_sentinel()) return true;
        return -fit.exponent >= static_cast<double>(m_max);
    };
    if (mode.kind == NegligibilityMode::Kind::space) {
        std::vector<double> series(count);
        for (std::size_t i = 0; i < count; ++i)
            series[i] = space_row(net, w.lo + i, mode.K, 0, scheme)[0];
        return series_ok(series);
    }
    std::vector<std::vector<double>> tables(count);
    for (std::size_t i = 0; i < count; ++i)
        tables[i] = mu_table(net, w.lo + i, mode.Q, 0, scheme);
    for (int q = 0; q <= mode.Q; ++q) {
        std::vector<double> series(count);
        for (std::size_t i = 0; i < count; ++i)
            series[i] = tables[i][static_cast<std::size_t>(q)];
        if (!series_ok(series)) return false;
    }
    return true;
}

}  // namespace genfunc
