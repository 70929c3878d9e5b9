#include "wlab/grid.hpp"

#include <cmath>

namespace wlab {

Window::Window(int n_, int K_, int L_, std::int64_t max_cells)
    : n(n_), K(K_), L(L_) {
    if (n != 1 && n != 2) throw ConfigError("window dimension must be 1 or 2");
    if (K < 0 || L < 0) throw ConfigError("window exponents must be >= 0");
    if (L + 1 + K > 40) throw ConfigError("window resolution out of range");
    if (cell_count() > max_cells)
        throw ConfigError("window exceeds the configured cell limit");
}

double Window::cell_side() const { return std::ldexp(1.0, -K); }
double Window::cell_volume() const { return std::ldexp(1.0, -K * n); }

double DyadicCube::side_len() const { return std::ldexp(1.0, k); }

std::vector<LatticeCube> cells(const Window& w) {
    std::vector<LatticeCube> out;
    out.reserve(static_cast<std::size_t>(w.cell_count()));
    std::int64_t h = w.half();
    if (w.n == 1) {
        for (std::int64_t x = -h; x < h; ++x) out.push_back({{x, 0}, 1});
    } else {
        for (std::int64_t y = -h; y < h; ++y)
            for (std::int64_t x = -h; x < h; ++x) out.push_back({{x, y}, 1});
    }
    return out;
}

namespace {

// j-range of scale-k cubes of D_alpha meeting the window on one axis,
// half-open in j.
std::pair<std::int64_t, std::int64_t> scale_range(const Window& w, int k,
                                                  bool third) {
    std::int64_t u = std::int64_t(1) << (k + w.K);  // 2^(k+K), tricells / 3
    std::int64_t side = 3 * u;
    std::int64_t wlo = -3 * w.half(), whi = 3 * w.half();
    std::int64_t off = third ? ((k & 1) ? 2 * u : u) : 0;
    // need 3*u*j + off < whi  and  3*u*j + off + side > wlo
    auto floor_div = [](std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
    };
    std::int64_t jlo = floor_div(wlo - off - side, side) + 1;
    std::int64_t jhi = floor_div(whi - off - 1, side) + 1;
    return {jlo, jhi};
}

}  // namespace

std::vector<DyadicCube> dyadic_scale(const Window& w,
                                     std::array<std::uint8_t, 2> alpha, int k) {
    std::vector<DyadicCube> out;
    auto [x0, x1] = scale_range(w, k, alpha[0] != 0);
    if (w.n == 1) {
        for (std::int64_t j = x0; j < x1; ++j)
            out.push_back({{alpha[0], 0}, k, {j, 0}});
    } else {
        auto [y0, y1] = scale_range(w, k, alpha[1] != 0);
        for (std::int64_t jy = y0; jy < y1; ++jy)
            for (std::int64_t jx = x0; jx < x1; ++jx)
                out.push_back({{alpha[0], alpha[1]}, k, {jx, jy}});
    }
    return out;
}

std::vector<DyadicCube> enumerate_dyadic(const Window& w,
                                         std::array<std::uint8_t, 2> alpha) {
    std::vector<DyadicCube> out;
    for (int k = -w.K; k <= w.L + 2; ++k) {
        auto slice = dyadic_scale(w, alpha, k);
        out.insert(out.end(), slice.begin(), slice.end());
    }
    return out;
}

std::vector<DyadicCube> dyadic_children(const Window& w, const DyadicCube& c) {
    std::vector<DyadicCube> out;
    if (c.k <= -w.K) return out;
    DyadicCube proto;
    proto.third = c.third;
    proto.k = c.k - 1;
    std::array<std::array<std::int64_t, 2>, 2> js{};
    for (int axis = 0; axis < w.n; ++axis) {
        std::int64_t plo = c.lo_tri(w, axis);
        std::int64_t side2 = std::int64_t(3) << (proto.k + w.K);
        std::int64_t off = c.third[axis]
                               ? ((proto.k & 1) ? 2 * (side2 / 3) : side2 / 3)
                               : 0;
        std::int64_t j0 = (plo - off) / side2;
        while (side2 * j0 + off < plo) ++j0;
        js[axis] = {j0, j0 + 1};
    }
    if (w.n == 1) {
        for (int a = 0; a < 2; ++a) {
            proto.j = {js[0][a], 0};
            out.push_back(proto);
        }
    } else {
        for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a) {
                proto.j = {js[0][a], js[1][b]};
                out.push_back(proto);
            }
    }
    return out;
}

std::optional<ThirdTrickCover> third_trick_cover(const Window& w,
                                                 const LatticeCube& q) {
    std::vector<std::array<std::uint8_t, 2>> alphas;
    if (w.n == 1)
        alphas = {{0, 0}, {1, 0}};
    else
        alphas = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};

    auto floor_div = [](std::int64_t a, std::int64_t b) {
        std::int64_t q_ = a / b;
        return (a % b != 0 && ((a < 0) != (b < 0))) ? q_ - 1 : q_;
    };

    for (int k = -w.K; k <= w.L + 2; ++k) {
        std::int64_t u = std::int64_t(1) << (k + w.K);
        std::int64_t side = 3 * u;
        if (side < 3 * q.side) continue;  // cube smaller than Q
        for (const auto& a : alphas) {
            DyadicCube c;
            c.k = k;
            c.third = a;
            bool ok = true;
            for (int axis = 0; axis < w.n; ++axis) {
                std::int64_t qlo = 3 * q.corner[axis];
                std::int64_t qhi = qlo + 3 * q.side;
                std::int64_t off = a[axis] ? ((k & 1) ? 2 * u : u) : 0;
                // Smallest j whose cube still reaches qhi; admissible iff it
                // also starts at or before qlo.
                std::int64_t j = floor_div(qhi - off - 1, side);
                if (3 * u * j + off > qlo) {
                    ok = false;
                    break;
                }
                c.j[axis] = j;
            }
            if (ok) return ThirdTrickCover{a, c};
        }
    }
    return std::nullopt;
}

}  // namespace wlab
