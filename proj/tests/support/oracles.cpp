#include "support/oracles.hpp"

#include <algorithm>

namespace oracle {

using wlab::GridFunction;
using wlab::Rng;
using wlab::Window;

double triple_norm_subsets(const GridFunction& f, const GridFunction& nu,
                           double p, double r) {
    std::int64_t n = f.size();
    double vol = f.window().cell_volume();
    double best = 0.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        double mass = 0.0, integral = 0.0;
        for (std::int64_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                mass += nu[i] * vol;
                integral += std::pow(f[i], r) * nu[i] * vol;
            }
        if (mass > 0)
            best = std::max(best, std::pow(mass, 1.0 / p - 1.0 / r) *
                                      std::pow(integral, 1.0 / r));
    }
    return best;
}

double doublebar_inner_subsets(const std::vector<double>& w, double p) {
    std::size_t n = w.size();
    double wq = 0.0;
    for (double x : w) wq += x;
    double best = 0.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        double cnt = 0.0, we = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                cnt += 1.0;
                we += w[i];
            }
        best = std::max(best, cnt / double(n) * std::pow(wq / we, 1.0 / p));
    }
    return best;
}

namespace {

std::int64_t fdiv(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

std::vector<double> maximal_uncentered_1d(const GridFunction& f) {
    const Window& w = f.window();
    std::int64_t m = w.axis_cells(), h = w.half();
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t s = 1; s <= m; ++s)
        for (std::int64_t a = -h; a + s <= h; ++a) {
            double sum = 0.0;
            for (std::int64_t x = a; x < a + s; ++x) sum += f.at_cell({x, 0});
            double avg = sum / static_cast<double>(s);
            for (std::int64_t c = std::max(a - 1, -h);
                 c <= std::min(a + s, h - 1); ++c) {
                double& o = out[static_cast<std::size_t>(c + h)];
                if (avg > o) o = avg;
            }
        }
    return out;
}

std::vector<double> maximal_weighted_1d(const GridFunction& f,
                                        const GridFunction& u) {
    const Window& w = f.window();
    std::int64_t m = w.axis_cells(), h = w.half();
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t s = 1; s <= m; ++s)
        for (std::int64_t a = -h; a + s <= h; ++a) {
            double num = 0.0, den = 0.0;
            for (std::int64_t x = a; x < a + s; ++x) {
                num += f.at_cell({x, 0}) * u.at_cell({x, 0});
                den += u.at_cell({x, 0});
            }
            double avg = num / den;
            for (std::int64_t c = std::max(a - 1, -h);
                 c <= std::min(a + s, h - 1); ++c) {
                double& o = out[static_cast<std::size_t>(c + h)];
                if (avg > o) o = avg;
            }
        }
    return out;
}

std::vector<double> maximal_dyadic_1d(const GridFunction& f, bool third) {
    const Window& w = f.window();
    std::int64_t m = w.axis_cells(), h = w.half();
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (int k = -w.K; k <= w.L + 2; ++k) {
        std::int64_t u = std::int64_t(1) << (k + w.K);
        std::int64_t side = 3 * u;
        std::int64_t off = third ? ((k & 1) ? 2 * u : u) : 0;
        std::int64_t jspan = (3 * h) / side + 2;
        for (std::int64_t j = -jspan; j <= jspan; ++j) {
            std::int64_t lo = side * j + off, hi = lo + side;
            if (lo >= 3 * h || hi <= -3 * h) continue;
            // Clipped mass over the full cube volume, summed per tricell.
            double mass = 0.0;
            for (std::int64_t t = std::max(lo, -3 * h);
                 t < std::min(hi, 3 * h); ++t)
                mass += f.at_cell({fdiv(t, 3), 0});
            double avg = mass / static_cast<double>(side);
            for (std::int64_t c = -h; c < h; ++c) {
                std::int64_t clo = 3 * c, chi = 3 * c + 3;
                if (clo < hi && chi > lo) {
                    double& o = out[static_cast<std::size_t>(c + h)];
                    if (avg > o) o = avg;
                }
            }
        }
    }
    return out;
}

std::vector<double> maximal_uncentered_2d(const GridFunction& f) {
    const Window& w = f.window();
    std::int64_t m = w.axis_cells(), h = w.half();
    std::vector<double> out(static_cast<std::size_t>(m * m), 0.0);
    for (std::int64_t s = 1; s <= m; ++s)
        for (std::int64_t ay = -h; ay + s <= h; ++ay)
            for (std::int64_t ax = -h; ax + s <= h; ++ax) {
                double sum = 0.0;
                for (std::int64_t y = ay; y < ay + s; ++y)
                    for (std::int64_t x = ax; x < ax + s; ++x)
                        sum += f.at_cell({x, y});
                double avg = sum / (static_cast<double>(s) * static_cast<double>(s));
                for (std::int64_t cy = std::max(ay - 1, -h);
                     cy <= std::min(ay + s, h - 1); ++cy)
                    for (std::int64_t cx = std::max(ax - 1, -h);
                         cx <= std::min(ax + s, h - 1); ++cx) {
                        double& o = out[static_cast<std::size_t>((cy + h) * m +
                                                                 cx + h)];
                        if (avg > o) o = avg;
                    }
            }
    return out;
}

GridFunction random_quantized(const Window& w, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()));
    for (auto& x : v) x = rng.quantized();
    return GridFunction(w, std::move(v));
}

GridFunction random_positive(const Window& w, Rng& rng, double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()));
    for (auto& x : v) x = rng.log_uniform(lo, hi);
    return GridFunction(w, std::move(v));
}

GridFunction random_characteristic(const Window& w, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(w.cell_count()), 0.0);
    std::size_t runs = 1 + rng.below(4);
    for (std::size_t r = 0; r < runs; ++r) {
        std::size_t start = rng.below(v.size());
        std::size_t len = 1 + rng.below(std::max<std::size_t>(v.size() / 4, 1));
        for (std::size_t i = start; i < std::min(start + len, v.size()); ++i)
            v[i] = 1.0;
    }
    if (std::count(v.begin(), v.end(), 1.0) == 0) v[0] = 1.0;
    return GridFunction(w, std::move(v));
}

}  // namespace oracle
