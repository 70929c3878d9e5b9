#include "wlab/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/kernels.hpp"

namespace wlab {

GridFunction::GridFunction(Window w, std::vector<double> values)
    : win_(w), v_(std::move(values)) {
    if (static_cast<std::int64_t>(v_.size()) != win_.cell_count())
        throw DimensionMismatch("value count does not match window cells");
    for (double& x : v_) {
        if (!std::isfinite(x)) throw ConfigError("non-finite cell value");
        x = std::abs(x);
    }
}

GridFunction::GridFunction(Window w, double fill)
    : win_(w), v_(static_cast<std::size_t>(w.cell_count()), fill) {
    if (!std::isfinite(fill) || fill < 0)
        throw ConfigError("invalid fill value");
}

bool GridFunction::positive() const {
    for (double x : v_)
        if (!(x > 0)) return false;
    return true;
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
    std::vector<double> out(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) out[i] = fn(v_[i]);
    return GridFunction(win_, std::move(out));
}

GridFunction GridFunction::multiply(const GridFunction& a, const GridFunction& b) {
    require_same_window(a, b);
    std::vector<double> out(a.v_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.v_[i] * b.v_[i];
    return GridFunction(a.win_, std::move(out));
}

GridFunction GridFunction::pow(double e) const {
    if (e < 0 && !positive())
        throw BadExponent("negative power of a non-positive function");
    return map([e](double x) { return std::pow(x, e); });
}

void require_same_window(const GridFunction& a, const GridFunction& b) {
    if (!(a.window() == b.window()))
        throw DimensionMismatch("grid functions live on different windows");
}

PrefixTable::PrefixTable(const GridFunction& f)
    : win_(f.window()), m_(f.window().axis_cells()) {
    auto v = f.values();
    cellv_.assign(v.begin(), v.end());
    if (win_.n == 1) {
        hi_.assign(static_cast<std::size_t>(m_) + 1, 0.0);
        lo_.assign(static_cast<std::size_t>(m_) + 1, 0.0);
        dd acc{};
        for (std::int64_t i = 0; i < m_; ++i) {
            acc = dd_add(acc, v[static_cast<std::size_t>(i)]);
            hi_[static_cast<std::size_t>(i + 1)] = acc.hi;
            lo_[static_cast<std::size_t>(i + 1)] = acc.lo;
        }
    } else {
        std::size_t w = static_cast<std::size_t>(m_) + 1;
        hi_.assign(w * w, 0.0);
        lo_.assign(w * w, 0.0);
        for (std::int64_t y = 0; y < m_; ++y) {
            dd row{};
            for (std::int64_t x = 0; x < m_; ++x) {
                row = dd_add(row, v[static_cast<std::size_t>(y * m_ + x)]);
                std::size_t up = static_cast<std::size_t>(y) * w +
                                 static_cast<std::size_t>(x) + 1;
                dd total = dd_add(dd{hi_[up], lo_[up]}, row);
                std::size_t at = up + w;
                hi_[at] = total.hi;
                lo_[at] = total.lo;
            }
        }
    }
}

dd PrefixTable::dsum1(std::int64_t a, std::int64_t b) const {
    std::int64_t h = win_.half();
    a = std::clamp(a + h, std::int64_t(0), m_);
    b = std::clamp(b + h, std::int64_t(0), m_);
    if (b <= a) return {};
    return dd_sub(dd{hi_[static_cast<std::size_t>(b)], lo_[static_cast<std::size_t>(b)]},
                  dd{hi_[static_cast<std::size_t>(a)], lo_[static_cast<std::size_t>(a)]});
}

dd PrefixTable::cum2(std::int64_t x, std::int64_t y) const {
    std::size_t w = static_cast<std::size_t>(m_) + 1;
    std::size_t at = static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x);
    return {hi_[at], lo_[at]};
}

dd PrefixTable::drect(std::int64_t ax, std::int64_t bx, std::int64_t ay,
                      std::int64_t by) const {
    std::int64_t h = win_.half();
    ax = std::clamp(ax + h, std::int64_t(0), m_);
    bx = std::clamp(bx + h, std::int64_t(0), m_);
    ay = std::clamp(ay + h, std::int64_t(0), m_);
    by = std::clamp(by + h, std::int64_t(0), m_);
    if (bx <= ax || by <= ay) return {};
    dd s = dd_sub(cum2(bx, by), cum2(ax, by));
    s = dd_sub(s, dd_sub(cum2(bx, ay), cum2(ax, ay)));
    return s;
}

double PrefixTable::cube_sum(const LatticeCube& q) const {
    if (win_.n == 1) return sum1(q.corner[0], q.corner[0] + q.side);
    return rect(q.corner[0], q.corner[0] + q.side, q.corner[1],
                q.corner[1] + q.side);
}

double PrefixTable::cube_avg(const LatticeCube& q) const {
    double cells = static_cast<double>(q.side);
    double div = win_.n == 1 ? cells : cells * cells;
    return cube_sum(q) / div;
}

// Cumulative tricell-weighted sum up to tricell index t (0..3m): full cells
// count 3 per axis, the boundary cell its covered remainder.
dd PrefixTable::tri_cum(std::int64_t tx, std::int64_t ty) const {
    std::int64_t ix = tx / 3, rx = tx % 3;
    if (win_.n == 1) {
        dd g = dd_mul_small_int(dd{hi_[static_cast<std::size_t>(ix)],
                                   lo_[static_cast<std::size_t>(ix)]},
                                3);
        if (rx != 0)
            g = dd_add(g, static_cast<double>(rx) *
                              cellv_[static_cast<std::size_t>(ix)]);
        return g;
    }
    auto rect_idx = [this](std::int64_t ax, std::int64_t bx, std::int64_t ay,
                           std::int64_t by) {
        if (bx <= ax || by <= ay) return dd{};
        dd s = dd_sub(cum2(bx, by), cum2(ax, by));
        return dd_sub(s, dd_sub(cum2(bx, ay), cum2(ax, ay)));
    };
    std::int64_t iy = ty / 3, ry = ty % 3;
    dd g = dd_mul_small_int(cum2(ix, iy), 9);
    if (rx != 0)
        g = dd_add(g, dd_mul_small_int(rect_idx(ix, ix + 1, 0, iy),
                                       3 * static_cast<int>(rx)));
    if (ry != 0)
        g = dd_add(g, dd_mul_small_int(rect_idx(0, ix, iy, iy + 1),
                                       3 * static_cast<int>(ry)));
    if (rx != 0 && ry != 0)
        g = dd_add(g, static_cast<double>(rx * ry) *
                          cellv_[static_cast<std::size_t>(iy * m_ + ix)]);
    return g;
}

double PrefixTable::tri_sum(std::array<std::int64_t, 2> lo,
                            std::array<std::int64_t, 2> hi) const {
    std::int64_t tmax = 3 * m_;
    std::int64_t th = 3 * win_.half();
    std::int64_t ax = std::clamp(lo[0] + th, std::int64_t(0), tmax);
    std::int64_t bx = std::clamp(hi[0] + th, std::int64_t(0), tmax);
    if (bx <= ax) return 0.0;
    if (win_.n == 1) return dd_round(dd_sub(tri_cum(bx, 0), tri_cum(ax, 0)));
    std::int64_t ay = std::clamp(lo[1] + th, std::int64_t(0), tmax);
    std::int64_t by = std::clamp(hi[1] + th, std::int64_t(0), tmax);
    if (by <= ay) return 0.0;
    dd s = dd_sub(tri_cum(bx, by), tri_cum(ax, by));
    s = dd_sub(s, dd_sub(tri_cum(bx, ay), tri_cum(ax, ay)));
    return dd_round(s);
}

double PrefixTable::dyadic_sum(const DyadicCube& c) const {
    std::array<std::int64_t, 2> lo = {c.lo_tri(win_, 0),
                                      win_.n == 2 ? c.lo_tri(win_, 1) : 0};
    std::array<std::int64_t, 2> hi = {c.hi_tri(win_, 0),
                                      win_.n == 2 ? c.hi_tri(win_, 1) : 0};
    double t = tri_sum(lo, hi);
    return win_.n == 1 ? t / 3.0 : t / 9.0;
}

double PrefixTable::dyadic_avg(const DyadicCube& c) const {
    std::array<std::int64_t, 2> lo = {c.lo_tri(win_, 0),
                                      win_.n == 2 ? c.lo_tri(win_, 1) : 0};
    std::array<std::int64_t, 2> hi = {c.hi_tri(win_, 0),
                                      win_.n == 2 ? c.hi_tri(win_, 1) : 0};
    double t = tri_sum(lo, hi);
    double side = static_cast<double>(c.side_tri(win_));
    return win_.n == 1 ? t / side : t / (side * side);
}

void PrefixTable::window_avgs(std::int64_t lo, std::size_t count, std::size_t s,
                              double div, double* out) const {
    std::size_t base = static_cast<std::size_t>(lo + win_.half());
    kern::ops().window_avg(hi_.data() + base, lo_.data() + base, count, s, div,
                           out);
}

}  // namespace wlab
