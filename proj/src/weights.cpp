#include "wlab/weights.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "wlab/dd.hpp"
#include "wlab/detail/sweep.hpp"
#include "wlab/parallel.hpp"

namespace wlab {

namespace detail {

std::vector<double> local_maximal_1d(std::span<const double> v) {
    std::int64_t m = static_cast<std::int64_t>(v.size());
    std::vector<double> hi(static_cast<std::size_t>(m + 1)),
        lo(static_cast<std::size_t>(m + 1));
    dd acc{};
    hi[0] = lo[0] = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        acc = dd_add(acc, v[static_cast<std::size_t>(i)]);
        hi[static_cast<std::size_t>(i + 1)] = acc.hi;
        lo[static_cast<std::size_t>(i + 1)] = acc.lo;
    }
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    std::vector<double> A(static_cast<std::size_t>(m));
    for (std::int64_t s = 1; s <= m; ++s) {
        std::int64_t count = m - s + 1;
        for (std::int64_t a = 0; a < count; ++a) {
            dd d = two_sum(hi[static_cast<std::size_t>(a + s)],
                           -hi[static_cast<std::size_t>(a)]);
            A[static_cast<std::size_t>(a)] =
                (d.hi + (d.lo + (lo[static_cast<std::size_t>(a + s)] -
                                 lo[static_cast<std::size_t>(a)]))) /
                static_cast<double>(s);
        }
        touching_window_max(A.data(), count, s, m, out.data());
    }
    return out;
}

std::vector<double> local_maximal_2d(std::span<const double> v,
                                     std::int64_t side) {
    // Summed-area table, plain double (local cubes are small).
    std::int64_t w = side + 1;
    std::vector<double> S(static_cast<std::size_t>(w * w), 0.0);
    for (std::int64_t y = 0; y < side; ++y) {
        double row = 0.0;
        for (std::int64_t x = 0; x < side; ++x) {
            row += v[static_cast<std::size_t>(y * side + x)];
            S[static_cast<std::size_t>((y + 1) * w + x + 1)] =
                S[static_cast<std::size_t>(y * w + x + 1)] + row;
        }
    }
    auto rect = [&](std::int64_t ax, std::int64_t bx, std::int64_t ay,
                    std::int64_t by) {
        return S[static_cast<std::size_t>(by * w + bx)] -
               S[static_cast<std::size_t>(ay * w + bx)] -
               S[static_cast<std::size_t>(by * w + ax)] +
               S[static_cast<std::size_t>(ay * w + ax)];
    };
    std::vector<double> out(static_cast<std::size_t>(side * side), 0.0);
    std::vector<double> A, row(static_cast<std::size_t>(side)),
        colin(static_cast<std::size_t>(side)),
        colmax(static_cast<std::size_t>(side));
    for (std::int64_t s = 1; s <= side; ++s) {
        std::int64_t count = side - s + 1;
        double div = static_cast<double>(s) * static_cast<double>(s);
        A.assign(static_cast<std::size_t>(count * side), 0.0);
        for (std::int64_t ay = 0; ay < count; ++ay) {
            for (std::int64_t ax = 0; ax < count; ++ax)
                row[static_cast<std::size_t>(ax)] =
                    rect(ax, ax + s, ay, ay + s) / div;
            double* dst = A.data() + ay * side;
            touching_window_max(row.data(), count, s, side, dst);
        }
        for (std::int64_t cx = 0; cx < side; ++cx) {
            for (std::int64_t ay = 0; ay < count; ++ay)
                colin[static_cast<std::size_t>(ay)] =
                    A[static_cast<std::size_t>(ay * side + cx)];
            std::fill(colmax.begin(), colmax.end(), 0.0);
            touching_window_max(colin.data(), count, s, side, colmax.data());
            for (std::int64_t cy = 0; cy < side; ++cy) {
                double& o = out[static_cast<std::size_t>(cy * side + cx)];
                if (colmax[static_cast<std::size_t>(cy)] > o)
                    o = colmax[static_cast<std::size_t>(cy)];
            }
        }
    }
    return out;
}

}  // namespace detail

namespace {

template <class Fn>
void for_all_cubes(const Window& w, Fn fn) {
    std::int64_t m = w.axis_cells();
    std::int64_t h = w.half();
    for (std::int64_t s = 1; s <= m; ++s) {
        if (w.n == 1) {
            for (std::int64_t a = -h; a + s <= h; ++a)
                fn(LatticeCube{{a, 0}, s});
        } else {
            for (std::int64_t ay = -h; ay + s <= h; ++ay)
                for (std::int64_t ax = -h; ax + s <= h; ++ax)
                    fn(LatticeCube{{ax, ay}, s});
        }
    }
}

std::vector<double> gather_cells(const GridFunction& g, const LatticeCube& q) {
    const Window& w = g.window();
    std::vector<double> out;
    if (w.n == 1) {
        out.reserve(static_cast<std::size_t>(q.side));
        for (std::int64_t x = 0; x < q.side; ++x)
            out.push_back(g.at_cell({q.corner[0] + x, 0}));
    } else {
        out.reserve(static_cast<std::size_t>(q.side * q.side));
        for (std::int64_t y = 0; y < q.side; ++y)
            for (std::int64_t x = 0; x < q.side; ++x)
                out.push_back(g.at_cell({q.corner[0] + x, q.corner[1] + y}));
    }
    return out;
}

double cube_cells(const Window& w, const LatticeCube& q) {
    double s = static_cast<double>(q.side);
    return w.n == 1 ? s : s * s;
}

void check_weight(const GridFunction& w) {
    if (!w.positive()) throw ConfigError("weight must be strictly positive");
}

// Parallel max over left endpoints (1D) or a plain serial loop elsewhere.
// Max-reduction over doubles is exact and order-free.
template <class PerRange>
double parallel_max_1d(std::int64_t n, PerRange fn) {
    std::vector<double> partial;
    std::mutex mu;
    parallel_ranges(n, [&](std::int64_t b, std::int64_t e) {
        double best = fn(b, e);
        std::lock_guard<std::mutex> lk(mu);
        partial.push_back(best);
    });
    double best = 0.0;
    for (double v : partial) best = std::max(best, v);
    return best;
}

// Sorted-prefix scan state for the restricted weak type constants.
struct Ent {
    double val;
    double tp;  // val^(-p'), precomputed
};

}  // namespace

double a1_constant(const GridFunction& w) {
    check_weight(w);
    const Window& win = w.window();
    PrefixTable T(w);
    if (win.n == 1) {
        std::int64_t m = win.axis_cells(), h = win.half();
        return parallel_max_1d(m, [&](std::int64_t b, std::int64_t e) {
            double best = 0.0;
            for (std::int64_t ia = b; ia < e; ++ia) {
                std::int64_t a = ia - h;
                double mn = std::numeric_limits<double>::infinity();
                for (std::int64_t bb = a + 1; bb <= h; ++bb) {
                    mn = std::min(mn, w.at_cell({bb - 1, 0}));
                    double avg = T.sum1(a, bb) / static_cast<double>(bb - a);
                    best = std::max(best, avg / mn);
                }
            }
            return best;
        });
    }
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        auto cells = gather_cells(w, q);
        double mn = *std::min_element(cells.begin(), cells.end());
        best = std::max(best, T.cube_avg(q) / mn);
    });
    return best;
}

double ap_constant(const GridFunction& w, double p) {
    check_weight(w);
    if (!(p > 1)) throw BadExponent("ap_constant requires p > 1");
    double pc = conjugate_exponent(p);
    PrefixTable T(w);
    PrefixTable Td(w.pow(1.0 - pc));
    const Window& win = w.window();
    if (win.n == 1) {
        std::int64_t m = win.axis_cells(), h = win.half();
        return parallel_max_1d(m, [&](std::int64_t b, std::int64_t e) {
            double best = 0.0;
            for (std::int64_t ia = b; ia < e; ++ia) {
                std::int64_t a = ia - h;
                for (std::int64_t bb = a + 1; bb <= h; ++bb) {
                    double len = static_cast<double>(bb - a);
                    double v = (T.sum1(a, bb) / len) *
                               std::pow(Td.sum1(a, bb) / len, p - 1.0);
                    best = std::max(best, v);
                }
            }
            return best;
        });
    }
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        best = std::max(best,
                        T.cube_avg(q) * std::pow(Td.cube_avg(q), p - 1.0));
    });
    return best;
}

namespace {

// Bracket factor of a cube from its cells sorted ascending by value:
// max over level-set prefixes of (W_{<=t})^(1/p') / t, via the monotone
// transform W * t^(-p').  Returns the transformed max; caller applies
// pow(., 1/p') and volume units.
double bracket_scan(const std::vector<Ent>& ents) {
    double best = 0.0;
    KahanSum wsum;
    for (std::size_t i = 0; i < ents.size(); ++i) {
        wsum.add(ents[i].val);
        if (i + 1 == ents.size() || ents[i + 1].val != ents[i].val)
            best = std::max(best, wsum.value() * ents[i].tp);
    }
    return best;
}

// Double-bar inner factor: max over prefixes of count^p / W, returned as the
// winning (count_pow, W) pair compared by cross-multiplication.
std::pair<double, double> doublebar_scan(const std::vector<Ent>& ents,
                                         std::span<const double> cnt_pow) {
    double bn = 0.0, bd = 1.0;
    KahanSum wsum;
    std::size_t k = 0;
    for (std::size_t i = 0; i < ents.size(); ++i) {
        wsum.add(ents[i].val);
        ++k;
        if (i + 1 == ents.size() || ents[i + 1].val != ents[i].val) {
            double num = cnt_pow[k];
            double den = wsum.value();
            if (num * bd > bn * den) {
                bn = num;
                bd = den;
            }
        }
    }
    return {bn, bd};
}

void sorted_insert(std::vector<Ent>& ents, Ent e) {
    auto it = std::upper_bound(
        ents.begin(), ents.end(), e,
        [](const Ent& a, const Ent& b) { return a.val < b.val; });
    ents.insert(it, e);
}

struct AprAccum {
    double bracket = 0.0;
    double double_bar = 0.0;
};

AprAccum apr_sweep(const GridFunction& w, double p, bool want_bracket,
                   bool want_double) {
    const Window& win = w.window();
    double pc = want_bracket ? conjugate_exponent(p) : 2.0;
    double vol = win.cell_volume();
    std::int64_t m = win.axis_cells(), h = win.half();
    std::vector<double> tp(w.values().size());
    if (want_bracket)
        for (std::size_t i = 0; i < tp.size(); ++i)
            tp[i] = std::pow(w.values()[i], -pc);
    std::vector<double> cnt_pow;
    if (want_double) {
        cnt_pow.resize(static_cast<std::size_t>(win.cell_count()) + 1, 0.0);
        for (std::size_t c = 1; c < cnt_pow.size(); ++c)
            cnt_pow[c] = std::pow(static_cast<double>(c), p);
    }
    PrefixTable T(w);

    AprAccum total;
    std::mutex mu;
    auto fold = [&](const AprAccum& part) {
        std::lock_guard<std::mutex> lk(mu);
        total.bracket = std::max(total.bracket, part.bracket);
        total.double_bar = std::max(total.double_bar, part.double_bar);
    };

    if (win.n == 1) {
        parallel_ranges(m, [&](std::int64_t rb, std::int64_t re) {
            AprAccum part;
            std::vector<Ent> ents;
            for (std::int64_t ia = rb; ia < re; ++ia) {
                std::int64_t a = ia - h;
                ents.clear();
                for (std::int64_t bb = a + 1; bb <= h; ++bb) {
                    std::int64_t idx = win.cell_index({bb - 1, 0});
                    sorted_insert(ents,
                                  {w[idx], want_bracket
                                               ? tp[static_cast<std::size_t>(idx)]
                                               : 0.0});
                    double s = static_cast<double>(bb - a);
                    double volQ = s * win.cell_side();
                    double wQ = T.sum1(a, bb) * vol;
                    if (want_bracket) {
                        double g = bracket_scan(ents);
                        double factor =
                            std::pow(g * vol, 1.0 / pc);  // ||chi_Q w^-1||
                        part.bracket = std::max(
                            part.bracket, std::pow(wQ, 1.0 / p) * factor / volQ);
                    }
                    if (want_double) {
                        auto [bn, bd] = doublebar_scan(ents, cnt_pow);
                        double inner =
                            std::pow(bn / bd * (wQ / vol), 1.0 / p) * vol / volQ;
                        part.double_bar = std::max(part.double_bar, inner);
                    }
                }
            }
            fold(part);
        });
        return total;
    }

    AprAccum part;
    for_all_cubes(win, [&](const LatticeCube& q) {
        auto cells = gather_cells(w, q);
        std::vector<Ent> ents(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
            ents[i] = {cells[i], want_bracket ? std::pow(cells[i], -pc) : 0.0};
        std::sort(ents.begin(), ents.end(),
                  [](const Ent& a, const Ent& b) { return a.val < b.val; });
        double volQ = std::pow(static_cast<double>(q.side) * win.cell_side(),
                               static_cast<double>(win.n));
        double wQ = T.cube_sum(q) * vol;
        if (want_bracket) {
            double g = bracket_scan(ents);
            double factor = std::pow(g * vol, 1.0 / pc);
            part.bracket =
                std::max(part.bracket, std::pow(wQ, 1.0 / p) * factor / volQ);
        }
        if (want_double) {
            auto [bn, bd] = doublebar_scan(ents, cnt_pow);
            double inner = std::pow(bn / bd * (wQ / vol), 1.0 / p) * vol / volQ;
            part.double_bar = std::max(part.double_bar, inner);
        }
    });
    fold(part);
    return total;
}

}  // namespace

double apr_bracket(const GridFunction& w, double p) {
    check_weight(w);
    if (!(p >= 1)) throw BadExponent("apr_bracket requires p >= 1");
    if (p == 1) return a1_constant(w);
    return apr_sweep(w, p, true, false).bracket;
}

double apr_double(const GridFunction& w, double p) {
    check_weight(w);
    if (!(p >= 1)) throw BadExponent("apr_double requires p >= 1");
    return apr_sweep(w, p, false, true).double_bar;
}

AprPair apr_both(const GridFunction& w, double p) {
    check_weight(w);
    if (!(p >= 1)) throw BadExponent("apr_both requires p >= 1");
    if (p == 1) return {a1_constant(w), apr_sweep(w, p, false, true).double_bar};
    AprAccum acc = apr_sweep(w, p, true, true);
    return {acc.bracket, acc.double_bar};
}

CubeArgmax apr_bracket_argmax(const GridFunction& w, double p) {
    check_weight(w);
    if (!(p > 1)) throw BadExponent("apr_bracket_argmax requires p > 1");
    double pc = conjugate_exponent(p);
    double vol = w.window().cell_volume();
    PrefixTable T(w);
    CubeArgmax best{0.0, {{0, 0}, 1}};
    for_all_cubes(w.window(), [&](const LatticeCube& q) {
        auto cells = gather_cells(w, q);
        std::vector<Ent> ents(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
            ents[i] = {cells[i], std::pow(cells[i], -pc)};
        std::sort(ents.begin(), ents.end(),
                  [](const Ent& a, const Ent& b) { return a.val < b.val; });
        double volQ = std::pow(static_cast<double>(q.side) * w.window().cell_side(),
                               static_cast<double>(w.window().n));
        double wQ = T.cube_sum(q) * vol;
        double v = std::pow(wQ, 1.0 / p) *
                   std::pow(bracket_scan(ents) * vol, 1.0 / pc) / volQ;
        if (v > best.value) best = {v, q};
    });
    return best;
}

double fujii_wilson(const GridFunction& w) {
    check_weight(w);
    const Window& win = w.window();
    PrefixTable T(w);
    if (win.n == 1) {
        std::int64_t m = win.axis_cells(), h = win.half();
        return parallel_max_1d(m, [&](std::int64_t rb, std::int64_t re) {
            double best = 0.0;
            for (std::int64_t ia = rb; ia < re; ++ia) {
                std::int64_t a = ia - h;
                std::vector<double> cells;
                for (std::int64_t bb = a + 1; bb <= h; ++bb) {
                    cells.push_back(w.at_cell({bb - 1, 0}));
                    auto mx = detail::local_maximal_1d(cells);
                    KahanSum s;
                    for (double x : mx) s.add(x);
                    best = std::max(best, s.value() / T.sum1(a, bb));
                }
            }
            return best;
        });
    }
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        auto cells = gather_cells(w, q);
        auto mx = detail::local_maximal_2d(cells, q.side);
        KahanSum s;
        for (double x : mx) s.add(x);
        best = std::max(best, s.value() / T.cube_sum(q));
    });
    return best;
}

double rh_constant(const GridFunction& w, double s) {
    check_weight(w);
    if (!(s > 1)) throw BadExponent("rh_constant requires s > 1");
    PrefixTable T(w);
    PrefixTable Ts(w.pow(s));
    const Window& win = w.window();
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        double cells = cube_cells(win, q);
        double v = std::pow(Ts.cube_sum(q) / cells, 1.0 / s) /
                   (T.cube_sum(q) / cells);
        best = std::max(best, v);
    });
    return best;
}

double rh_inf(const GridFunction& w) {
    check_weight(w);
    const Window& win = w.window();
    PrefixTable T(w);
    if (win.n == 1) {
        std::int64_t m = win.axis_cells(), h = win.half();
        return parallel_max_1d(m, [&](std::int64_t rb, std::int64_t re) {
            double best = 0.0;
            for (std::int64_t ia = rb; ia < re; ++ia) {
                std::int64_t a = ia - h;
                double mx = 0.0;
                for (std::int64_t bb = a + 1; bb <= h; ++bb) {
                    mx = std::max(mx, w.at_cell({bb - 1, 0}));
                    best = std::max(
                        best, mx / (T.sum1(a, bb) / static_cast<double>(bb - a)));
                }
            }
            return best;
        });
    }
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        auto cells = gather_cells(w, q);
        double mx = *std::max_element(cells.begin(), cells.end());
        best = std::max(best, mx / T.cube_avg(q));
    });
    return best;
}

double rh_inf_weighted(const GridFunction& g, const GridFunction& w) {
    check_weight(w);
    require_same_window(g, w);
    PrefixTable Tw(w);
    PrefixTable Tgw(GridFunction::multiply(g, w));
    const Window& win = w.window();
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        auto cells = gather_cells(g, q);
        double mx = *std::max_element(cells.begin(), cells.end());
        double den = Tgw.cube_sum(q);
        if (den > 0) best = std::max(best, Tw.cube_sum(q) / den * mx);
    });
    return best;
}

double base_weighted_constant(const GridFunction& v, const GridFunction& u,
                              double p) {
    check_weight(v);
    check_weight(u);
    require_same_window(v, u);
    if (!(p >= 1)) throw BadExponent("base_weighted_constant requires p >= 1");
    const Window& win = v.window();
    PrefixTable Tu(u);
    PrefixTable Tvu(GridFunction::multiply(v, u));
    if (p == 1) {
        double best = 0.0;
        for_all_cubes(win, [&](const LatticeCube& q) {
            auto cells = gather_cells(v, q);
            double mn = *std::min_element(cells.begin(), cells.end());
            best = std::max(best, Tvu.cube_sum(q) / Tu.cube_sum(q) / mn);
        });
        return best;
    }
    double pc = conjugate_exponent(p);
    PrefixTable Tdu(GridFunction::multiply(v.pow(1.0 - pc), u));
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        double uq = Tu.cube_sum(q);
        double x = Tvu.cube_sum(q) / uq;
        double y = Tdu.cube_sum(q) / uq;
        best = std::max(best, x * std::pow(y, p - 1.0));
    });
    return best;
}

namespace {

struct MultiCtx {
    const WeightVector* wv;
    const ExponentTuple* P;
    GridFunction nu;
    std::vector<double> pcs;  // conjugates (inf at p_i = 1)
};

double multi_cube_value(const MultiCtx& ctx, const LatticeCube& q,
                        const PrefixTable& nut, MultilinearVariant variant,
                        std::span<const std::vector<double>> cnt_pows) {
    const Window& win = ctx.nu.window();
    double vol = win.cell_volume();
    double volQ = std::pow(static_cast<double>(q.side) * win.cell_side(),
                           static_cast<double>(win.n));
    double nuQ = nut.cube_sum(q) * vol;
    if (!(nuQ > 0)) return 0.0;
    double val = std::pow(nuQ, 1.0 / ctx.P->p());
    for (std::size_t i = 0; i < ctx.wv->weights.size(); ++i) {
        const GridFunction& wi = ctx.wv->weights[i];
        auto cells = gather_cells(wi, q);
        double pi = ctx.P->p_list[i];
        if (variant == MultilinearVariant::Bracket) {
            double factor;
            if (pi == 1.0) {
                factor = 1.0 / *std::min_element(cells.begin(), cells.end());
            } else {
                double pc = ctx.pcs[i];
                std::vector<Ent> ents(cells.size());
                for (std::size_t j = 0; j < cells.size(); ++j)
                    ents[j] = {cells[j], std::pow(cells[j], -pc)};
                std::sort(ents.begin(), ents.end(),
                          [](const Ent& a, const Ent& b) { return a.val < b.val; });
                factor = std::pow(bracket_scan(ents) * vol, 1.0 / pc);
            }
            val *= factor / volQ;
        } else {
            std::vector<Ent> ents(cells.size());
            for (std::size_t j = 0; j < cells.size(); ++j) ents[j] = {cells[j], 0.0};
            std::sort(ents.begin(), ents.end(),
                      [](const Ent& a, const Ent& b) { return a.val < b.val; });
            auto [bn, bd] = doublebar_scan(ents, cnt_pows[i]);
            // sup_E (|E|/|Q|) w_i(E)^(-1/p_i): bn/bd = max count^p_i / W_raw.
            double inner = std::pow(bn / (bd * vol), 1.0 / pi) * vol / volQ;
            val *= inner;
        }
    }
    return val;
}

}  // namespace

double multilinear_apr(const WeightVector& wv, const ExponentTuple& P,
                       MultilinearVariant variant) {
    if (wv.weights.size() != P.m())
        throw DimensionMismatch("weight count != exponent count");
    for (const auto& w : wv.weights) check_weight(w);
    MultiCtx ctx{&wv, &P, wv.nu_or_default(P), {}};
    for (std::size_t i = 0; i < P.m(); ++i)
        ctx.pcs.push_back(P.p_list[i] == 1.0 ? 0.0
                                             : conjugate_exponent(P.p_list[i]));
    PrefixTable nut(ctx.nu);
    std::vector<std::vector<double>> cnt_pows(P.m());
    if (variant == MultilinearVariant::DoubleBar) {
        std::size_t n = static_cast<std::size_t>(ctx.nu.window().cell_count());
        for (std::size_t i = 0; i < P.m(); ++i) {
            cnt_pows[i].resize(n + 1, 0.0);
            for (std::size_t c = 1; c <= n; ++c)
                cnt_pows[i][c] =
                    std::pow(static_cast<double>(c), P.p_list[i]);
        }
    }
    double best = 0.0;
    for_all_cubes(ctx.nu.window(), [&](const LatticeCube& q) {
        best = std::max(best, multi_cube_value(ctx, q, nut, variant, cnt_pows));
    });
    return best;
}

CubeArgmax multilinear_apr_argmax(const WeightVector& wv,
                                  const ExponentTuple& P) {
    if (wv.weights.size() != P.m())
        throw DimensionMismatch("weight count != exponent count");
    for (const auto& w : wv.weights) check_weight(w);
    MultiCtx ctx{&wv, &P, wv.nu_or_default(P), {}};
    for (std::size_t i = 0; i < P.m(); ++i)
        ctx.pcs.push_back(P.p_list[i] == 1.0 ? 0.0
                                             : conjugate_exponent(P.p_list[i]));
    PrefixTable nut(ctx.nu);
    CubeArgmax best{0.0, {{0, 0}, 1}};
    for_all_cubes(ctx.nu.window(), [&](const LatticeCube& q) {
        double v = multi_cube_value(ctx, q, nut, MultilinearVariant::Bracket, {});
        if (v > best.value) best = {v, q};
    });
    return best;
}

double multilinear_ap(const WeightVector& wv, const ExponentTuple& P) {
    if (wv.weights.size() != P.m())
        throw DimensionMismatch("weight count != exponent count");
    for (const auto& w : wv.weights) check_weight(w);
    GridFunction nu = wv.nu_or_default(P);
    const Window& win = nu.window();
    PrefixTable nut(nu);
    std::vector<PrefixTable> dtabs;
    std::vector<int> dual_kind;  // 0: essinf (p_i = 1), 1: power table
    for (std::size_t i = 0; i < P.m(); ++i) {
        if (P.p_list[i] == 1.0) {
            dual_kind.push_back(0);
            dtabs.emplace_back(wv.weights[i]);  // placeholder, unused
        } else {
            dual_kind.push_back(1);
            dtabs.emplace_back(
                wv.weights[i].pow(1.0 - conjugate_exponent(P.p_list[i])));
        }
    }
    double best = 0.0;
    for_all_cubes(win, [&](const LatticeCube& q) {
        double cells = cube_cells(win, q);
        double v = std::pow(nut.cube_sum(q) / cells, 1.0 / P.p());
        for (std::size_t i = 0; i < P.m(); ++i) {
            if (dual_kind[i] == 0) {
                auto cs = gather_cells(wv.weights[i], q);
                v /= *std::min_element(cs.begin(), cs.end());
            } else {
                double pc = conjugate_exponent(P.p_list[i]);
                v *= std::pow(dtabs[i].cube_sum(q) / cells, 1.0 / pc);
            }
        }
        best = std::max(best, v);
    });
    return best;
}

ApExponentScan smallest_ap_exponent(const GridFunction& w,
                                    std::span<const double> grid, double cap) {
    for (double r : grid) {
        if (!(r > 1)) continue;
        double v = ap_constant(w, r);
        if (v <= cap) return {r, v, true};
    }
    return {};
}

}  // namespace wlab
