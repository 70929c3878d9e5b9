#include "wlab/operators.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/detail/sweep.hpp"
#include "wlab/kernels.hpp"
#include "wlab/lorentz.hpp"

namespace wlab {

namespace {

using detail::floor_div;
using detail::touching_window_max;

// Per-scale sweep over all lattice cubes, 1D: averages by prefix kernel, then
// a monotone-deque pass per scale.
void sweep_uncentered_1d(const PrefixTable& num, const PrefixTable* den,
                         std::vector<double>& out) {
    const Window& w = num.window();
    std::int64_t m = w.axis_cells();
    std::vector<double> A(static_cast<std::size_t>(m));
    std::vector<double> B;
    if (den != nullptr) B.resize(static_cast<std::size_t>(m));
    for (std::int64_t s = 1; s <= m; ++s) {
        std::int64_t count = m - s + 1;
        if (den == nullptr) {
            num.window_avgs(-w.half(), static_cast<std::size_t>(count),
                            static_cast<std::size_t>(s),
                            static_cast<double>(s), A.data());
        } else {
            num.window_avgs(-w.half(), static_cast<std::size_t>(count),
                            static_cast<std::size_t>(s), 1.0, A.data());
            den->window_avgs(-w.half(), static_cast<std::size_t>(count),
                             static_cast<std::size_t>(s), 1.0, B.data());
            for (std::int64_t i = 0; i < count; ++i)
                A[static_cast<std::size_t>(i)] /= B[static_cast<std::size_t>(i)];
        }
        touching_window_max(A.data(), count, s, m, out.data());
    }
}

void sweep_uncentered_2d(const PrefixTable& num, const PrefixTable* den,
                         std::vector<double>& out) {
    const Window& w = num.window();
    std::int64_t m = w.axis_cells();
    std::int64_t h = w.half();
    std::vector<double> A, rowmax(static_cast<std::size_t>(m));
    std::vector<double> colin(static_cast<std::size_t>(m));
    for (std::int64_t s = 1; s <= m; ++s) {
        std::int64_t count = m - s + 1;
        A.assign(static_cast<std::size_t>(count * m), 0.0);
        double div = static_cast<double>(s) * static_cast<double>(s);
        // Row pass: averages per corner, then horizontal touching max.
        std::vector<double> row(static_cast<std::size_t>(count));
        for (std::int64_t ay = 0; ay < count; ++ay) {
            for (std::int64_t ax = 0; ax < count; ++ax) {
                double v = num.rect(ax - h, ax - h + s, ay - h, ay - h + s);
                if (den != nullptr)
                    v /= den->rect(ax - h, ax - h + s, ay - h, ay - h + s);
                else
                    v /= div;
                row[static_cast<std::size_t>(ax)] = v;
            }
            double* dst = A.data() + ay * m;
            std::fill(dst, dst + m, 0.0);
            touching_window_max(row.data(), count, s, m, dst);
        }
        // Column pass.
        for (std::int64_t cx = 0; cx < m; ++cx) {
            for (std::int64_t ay = 0; ay < count; ++ay)
                colin[static_cast<std::size_t>(ay)] = A[static_cast<std::size_t>(ay * m + cx)];
            std::fill(rowmax.begin(), rowmax.end(), 0.0);
            touching_window_max(colin.data(), count, s, m, rowmax.data());
            for (std::int64_t cy = 0; cy < m; ++cy) {
                double v = rowmax[static_cast<std::size_t>(cy)];
                double& o = out[static_cast<std::size_t>(cy * m + cx)];
                if (v > o) o = v;
            }
        }
    }
}

void sweep_centered(const PrefixTable& num, const PrefixTable* den,
                    std::vector<double>& out) {
    const Window& w = num.window();
    std::int64_t m = w.axis_cells();
    std::int64_t h = w.half();
    for (std::int64_t t = 0; t <= m; ++t) {
        double side = static_cast<double>(2 * t + 1);
        if (w.n == 1) {
            for (std::int64_t c = -h; c < h; ++c) {
                double v = num.sum1(c - t, c + t + 1);
                v = den != nullptr ? v / den->sum1(c - t, c + t + 1) : v / side;
                double& o = out[static_cast<std::size_t>(c + h)];
                if (v > o) o = v;
            }
        } else {
            double div = side * side;
            for (std::int64_t cy = -h; cy < h; ++cy)
                for (std::int64_t cx = -h; cx < h; ++cx) {
                    double v = num.rect(cx - t, cx + t + 1, cy - t, cy + t + 1);
                    v = den != nullptr
                            ? v / den->rect(cx - t, cx + t + 1, cy - t, cy + t + 1)
                            : v / div;
                    double& o = out[static_cast<std::size_t>((cy + h) * m + cx + h)];
                    if (v > o) o = v;
                }
        }
    }
}

// Dyadic sweep: for every scale, each cell overlaps at most two grid cubes
// per axis; averages are memoized per scale.
void sweep_dyadic(const PrefixTable& num, const PrefixTable* den,
                  std::array<std::uint8_t, 2> alpha, std::vector<double>& out) {
    const Window& w = num.window();
    std::int64_t m = w.axis_cells();
    std::int64_t h = w.half();
    for (int k = -w.K; k <= w.L + 2; ++k) {
        DyadicCube proto;
        proto.third = alpha;
        proto.k = k;
        std::int64_t side = proto.side_tri(w);
        std::array<std::int64_t, 2> off{};
        std::array<std::int64_t, 2> jlo{}, jcount{};
        for (int axis = 0; axis < w.n; ++axis) {
            off[axis] = alpha[axis] ? proto.shift_tri(w) : 0;
            jlo[axis] = floor_div(-3 * h - off[axis], side);
            jcount[axis] = floor_div(3 * h - 1 - off[axis], side) - jlo[axis] + 1;
        }
        auto cubes_of_cell = [&](std::int64_t coord, int axis,
                                 std::int64_t* js) {
            std::int64_t t0 = 3 * coord, t1 = 3 * coord + 2;
            js[0] = floor_div(t0 - off[axis], side);
            js[1] = floor_div(t1 - off[axis], side);
            return js[0] == js[1] ? 1 : 2;
        };
        if (w.n == 1) {
            std::vector<double> cache(static_cast<std::size_t>(jcount[0]),
                                      -1.0);
            auto value = [&](std::int64_t j) {
                double& slot = cache[static_cast<std::size_t>(j - jlo[0])];
                if (slot < 0) {
                    proto.j = {j, 0};
                    if (den == nullptr) {
                        slot = num.dyadic_avg(proto);
                    } else {
                        double d = den->dyadic_sum(proto);
                        slot = d > 0 ? num.dyadic_sum(proto) / d : 0.0;
                    }
                }
                return slot;
            };
            for (std::int64_t c = -h; c < h; ++c) {
                std::int64_t js[2];
                int cnt = cubes_of_cell(c, 0, js);
                double& o = out[static_cast<std::size_t>(c + h)];
                for (int i = 0; i < cnt; ++i) {
                    double v = value(js[i]);
                    if (v > o) o = v;
                }
            }
        } else {
            std::vector<double> cache(
                static_cast<std::size_t>(jcount[0] * jcount[1]), -1.0);
            auto value = [&](std::int64_t jx, std::int64_t jy) {
                std::size_t at = static_cast<std::size_t>(
                    (jy - jlo[1]) * jcount[0] + (jx - jlo[0]));
                double& slot = cache[at];
                if (slot < 0) {
                    proto.j = {jx, jy};
                    if (den == nullptr) {
                        slot = num.dyadic_avg(proto);
                    } else {
                        double d = den->dyadic_sum(proto);
                        slot = d > 0 ? num.dyadic_sum(proto) / d : 0.0;
                    }
                }
                return slot;
            };
            for (std::int64_t cy = -h; cy < h; ++cy)
                for (std::int64_t cx = -h; cx < h; ++cx) {
                    std::int64_t jx[2], jy[2];
                    int cx_n = cubes_of_cell(cx, 0, jx);
                    int cy_n = cubes_of_cell(cy, 1, jy);
                    double& o =
                        out[static_cast<std::size_t>((cy + h) * m + cx + h)];
                    for (int a = 0; a < cx_n; ++a)
                        for (int b = 0; b < cy_n; ++b) {
                            double v = value(jx[a], jy[b]);
                            if (v > o) o = v;
                        }
                }
        }
    }
}

}  // namespace

GridFunction maximal(const GridFunction& f, const MaximalVariant& variant) {
    const Window& w = f.window();
    bool weighted = variant.kind == MaxKind::WeightedUncentered ||
                    variant.kind == MaxKind::WeightedCentered ||
                    variant.kind == MaxKind::WeightedDyadic;
    const GridFunction* u = variant.base;
    if (weighted) {
        if (u == nullptr) throw MissingInput("weighted maximal without base weight");
        require_same_window(f, *u);
        if (!u->positive()) throw ConfigError("base weight must be positive");
    }

    std::vector<double> out(static_cast<std::size_t>(w.cell_count()), 0.0);
    if (!weighted) {
        PrefixTable P(f);
        switch (variant.kind) {
            case MaxKind::Uncentered:
                if (w.n == 1)
                    sweep_uncentered_1d(P, nullptr, out);
                else
                    sweep_uncentered_2d(P, nullptr, out);
                break;
            case MaxKind::Centered:
                sweep_centered(P, nullptr, out);
                break;
            case MaxKind::Dyadic:
                sweep_dyadic(P, nullptr, variant.alpha, out);
                break;
            default:
                break;
        }
    } else {
        PrefixTable num(GridFunction::multiply(f, *u));
        PrefixTable den(*u);
        switch (variant.kind) {
            case MaxKind::WeightedUncentered:
                if (w.n == 1)
                    sweep_uncentered_1d(num, &den, out);
                else
                    sweep_uncentered_2d(num, &den, out);
                break;
            case MaxKind::WeightedCentered:
                sweep_centered(num, &den, out);
                break;
            case MaxKind::WeightedDyadic:
                sweep_dyadic(num, &den, variant.alpha, out);
                break;
            default:
                break;
        }
    }
    return GridFunction(w, std::move(out));
}

GridFunction product_maximal(std::span<const GridFunction> fs) {
    if (fs.empty()) throw DimensionMismatch("empty function tuple");
    GridFunction out = maximal(fs[0], MaximalVariant::uncentered());
    for (std::size_t i = 1; i < fs.size(); ++i)
        out = GridFunction::multiply(out, maximal(fs[i], MaximalVariant::uncentered()));
    return out;
}

GridFunction multilinear_maximal(std::span<const GridFunction> fs,
                                 bool centered) {
    if (fs.empty()) throw DimensionMismatch("empty function tuple");
    const Window& w = fs[0].window();
    for (const auto& f : fs) require_same_window(fs[0], f);
    std::int64_t m = w.axis_cells();
    std::int64_t h = w.half();
    std::vector<PrefixTable> tabs;
    tabs.reserve(fs.size());
    for (const auto& f : fs) tabs.emplace_back(f);

    std::vector<double> out(static_cast<std::size_t>(w.cell_count()), 0.0);
    if (centered) {
        for (std::int64_t t = 0; t <= m; ++t) {
            double side = static_cast<double>(2 * t + 1);
            if (w.n == 1) {
                for (std::int64_t c = -h; c < h; ++c) {
                    double v = 1.0;
                    for (const auto& tab : tabs)
                        v *= tab.sum1(c - t, c + t + 1) / side;
                    double& o = out[static_cast<std::size_t>(c + h)];
                    if (v > o) o = v;
                }
            } else {
                double div = side * side;
                for (std::int64_t cy = -h; cy < h; ++cy)
                    for (std::int64_t cx = -h; cx < h; ++cx) {
                        double v = 1.0;
                        for (const auto& tab : tabs)
                            v *= tab.rect(cx - t, cx + t + 1, cy - t, cy + t + 1) /
                                 div;
                        double& o =
                            out[static_cast<std::size_t>((cy + h) * m + cx + h)];
                        if (v > o) o = v;
                    }
            }
        }
        return GridFunction(w, std::move(out));
    }

    if (w.n == 1) {
        std::vector<double> A(static_cast<std::size_t>(m)),
            tmp(static_cast<std::size_t>(m));
        for (std::int64_t s = 1; s <= m; ++s) {
            std::int64_t count = m - s + 1;
            std::fill(A.begin(), A.begin() + count, 1.0);
            for (const auto& tab : tabs) {
                tab.window_avgs(-h, static_cast<std::size_t>(count),
                                static_cast<std::size_t>(s),
                                static_cast<double>(s), tmp.data());
                for (std::int64_t i = 0; i < count; ++i)
                    A[static_cast<std::size_t>(i)] *= tmp[static_cast<std::size_t>(i)];
            }
            touching_window_max(A.data(), count, s, m, out.data());
        }
    } else {
        std::vector<double> row, colin(static_cast<std::size_t>(m)),
            rowmax(static_cast<std::size_t>(m)), A;
        for (std::int64_t s = 1; s <= m; ++s) {
            std::int64_t count = m - s + 1;
            double div = static_cast<double>(s) * static_cast<double>(s);
            A.assign(static_cast<std::size_t>(count * m), 0.0);
            row.assign(static_cast<std::size_t>(count), 0.0);
            for (std::int64_t ay = 0; ay < count; ++ay) {
                for (std::int64_t ax = 0; ax < count; ++ax) {
                    double v = 1.0;
                    for (const auto& tab : tabs)
                        v *= tab.rect(ax - h, ax - h + s, ay - h, ay - h + s) / div;
                    row[static_cast<std::size_t>(ax)] = v;
                }
                double* dst = A.data() + ay * m;
                std::fill(dst, dst + m, 0.0);
                touching_window_max(row.data(), count, s, m, dst);
            }
            for (std::int64_t cx = 0; cx < m; ++cx) {
                for (std::int64_t ay = 0; ay < count; ++ay)
                    colin[static_cast<std::size_t>(ay)] =
                        A[static_cast<std::size_t>(ay * m + cx)];
                std::fill(rowmax.begin(), rowmax.end(), 0.0);
                touching_window_max(colin.data(), count, s, m, rowmax.data());
                for (std::int64_t cy = 0; cy < m; ++cy) {
                    double v = rowmax[static_cast<std::size_t>(cy)];
                    double& o = out[static_cast<std::size_t>(cy * m + cx)];
                    if (v > o) o = v;
                }
            }
        }
    }
    return GridFunction(w, std::move(out));
}

GridFunction n_theta(std::span<const GridFunction> fs, const WeightVector& wv,
                     const ExponentTuple& P, double theta) {
    if (!(theta > 0)) throw BadExponent("n_theta requires theta > 0");
    if (fs.size() != P.m() || wv.weights.size() != P.m())
        throw DimensionMismatch("tuple sizes disagree");
    const Window& w = fs[0].window();
    GridFunction nu = wv.nu_or_default(P);
    PrefixTable nutab(nu);
    double p = P.p();
    double vol = w.cell_volume();
    std::int64_t m = w.axis_cells();
    std::int64_t h = w.half();

    std::vector<double> best(static_cast<std::size_t>(w.cell_count()), 0.0);
    auto consider = [&](const LatticeCube& q) {
        double numass = nutab.cube_sum(q) * vol;
        if (!(numass > 0)) return;
        double val = std::pow(numass, -1.0 / p);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            std::vector<std::pair<double, double>> cells;
            cells.reserve(static_cast<std::size_t>(q.side * q.side));
            for (std::int64_t dy = 0; dy < (w.n == 2 ? q.side : 1); ++dy)
                for (std::int64_t dx = 0; dx < q.side; ++dx) {
                    std::array<std::int64_t, 2> cc = {q.corner[0] + dx,
                                                      q.corner[1] + dy};
                    std::int64_t idx = w.cell_index(cc);
                    double fv = fs[i][idx];
                    if (fv > 0) cells.emplace_back(fv, wv.weights[i][idx] * vol);
                }
            StepProfile pr = make_profile(std::move(cells));
            val *= norm_p1(pr, P.p_list[i]);
        }
        // Distribute over touched cells.
        std::int64_t x0 = std::max(q.corner[0] - 1, -h);
        std::int64_t x1 = std::min(q.corner[0] + q.side, h - 1);
        if (w.n == 1) {
            for (std::int64_t c = x0; c <= x1; ++c) {
                double& o = best[static_cast<std::size_t>(c + h)];
                if (val > o) o = val;
            }
        } else {
            std::int64_t y0 = std::max(q.corner[1] - 1, -h);
            std::int64_t y1 = std::min(q.corner[1] + q.side, h - 1);
            for (std::int64_t cy = y0; cy <= y1; ++cy)
                for (std::int64_t cx = x0; cx <= x1; ++cx) {
                    double& o = best[static_cast<std::size_t>((cy + h) * m + cx + h)];
                    if (val > o) o = val;
                }
        }
    };
    for (std::int64_t s = 1; s <= m; ++s) {
        if (w.n == 1) {
            for (std::int64_t a = -h; a + s <= h; ++a) consider({{a, 0}, s});
        } else {
            for (std::int64_t ay = -h; ay + s <= h; ++ay)
                for (std::int64_t ax = -h; ax + s <= h; ++ax)
                    consider({{ax, ay}, s});
        }
    }
    std::vector<double> out(best.size());
    for (std::size_t i = 0; i < best.size(); ++i)
        out[i] = std::pow(best[i], theta);
    return GridFunction(w, std::move(out));
}

}  // namespace wlab
