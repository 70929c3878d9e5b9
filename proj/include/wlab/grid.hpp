#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "wlab/errors.hpp"

namespace wlab {

// Finite computational window [-2^L, 2^L)^n split into cells of side 2^-K.
// Every quantity in the project lives on this lattice; all suprema over
// "all cubes" become finite maxima over cubes drawn from it.
//
// Positions are kept as integers.  Cell coordinates are in units of 2^-K
// ("cell units", axis range [-half, half)); shifted dyadic cubes use units
// of 2^-K/3 ("tricell units") so that alpha = 1/3 endpoints stay exact.
struct Window {
    int n;  // dimension, 1 or 2
    int K;  // resolution exponent, cells have side 2^-K
    int L;  // half-extent exponent

    Window(int n_, int K_, int L_, std::int64_t max_cells = std::int64_t(1) << 22);

    std::int64_t axis_cells() const { return std::int64_t(1) << (L + 1 + K); }
    std::int64_t half() const { return std::int64_t(1) << (L + K); }
    std::int64_t cell_count() const {
        std::int64_t m = axis_cells();
        return n == 1 ? m : m * m;
    }
    double cell_side() const;    // 2^-K
    double cell_volume() const;  // 2^-(K n)

    // Linear index of the cell with integer corner coordinates c (cell
    // units); x varies fastest in 2D.
    std::int64_t cell_index(std::array<std::int64_t, 2> c) const {
        std::int64_t ix = c[0] + half();
        return n == 1 ? ix : (c[1] + half()) * axis_cells() + ix;
    }
    std::array<std::int64_t, 2> cell_coords(std::int64_t index) const {
        std::int64_t m = axis_cells();
        if (n == 1) return {index - half(), 0};
        return {index % m - half(), index / m - half()};
    }

    bool operator==(const Window&) const = default;
};

// Axis-aligned cube of the cell lattice, inside the window.
struct LatticeCube {
    std::array<std::int64_t, 2> corner;  // cell units
    std::int64_t side = 1;               // in cells, >= 1

    bool operator==(const LatticeCube&) const = default;
};

// Cube of a (possibly 1/3-shifted) dyadic grid.  A shifted axis uses the
// alternating offset 2^k/3 at even scales and 2^k*2/3 at odd scales, which
// keeps the system nested across scales while boundary sets of the two grids
// at scale k stay 2^k/3 apart (so every cube has a cover of side <= 6x).
struct DyadicCube {
    std::array<std::uint8_t, 2> third = {0, 0};  // axis uses the 1/3 shift?
    int k = 0;                                   // side 2^k
    std::array<std::int64_t, 2> j = {0, 0};

    // Geometry in tricell units of a window (side 2^-K/3).
    std::int64_t side_tri(const Window& w) const {
        return std::int64_t(3) << (k + w.K);
    }
    std::int64_t shift_tri(const Window& w) const {
        std::int64_t u = std::int64_t(1) << (k + w.K);
        return (k & 1) ? 2 * u : u;
    }
    std::int64_t lo_tri(const Window& w, int axis) const {
        return side_tri(w) * j[axis] + (third[axis] ? shift_tri(w) : 0);
    }
    std::int64_t hi_tri(const Window& w, int axis) const {
        return lo_tri(w, axis) + side_tri(w);
    }
    double side_len() const;

    bool operator==(const DyadicCube&) const = default;
};

// One cell per entry, lexicographically ordered, tiling the window.
std::vector<LatticeCube> cells(const Window& w);

// All cubes of D_alpha with side in [2^-K, 2^(L+2)] that intersect the
// window, ordered by scale then index.  alpha entries: 0 or 1 (meaning 1/3).
std::vector<DyadicCube> enumerate_dyadic(const Window& w,
                                         std::array<std::uint8_t, 2> alpha);

// The scale-k slice of the same enumeration.
std::vector<DyadicCube> dyadic_scale(const Window& w,
                                     std::array<std::uint8_t, 2> alpha, int k);

// The 2^n scale-(k-1) cubes tiling c.
std::vector<DyadicCube> dyadic_children(const Window& w, const DyadicCube& c);

struct ThirdTrickCover {
    std::array<std::uint8_t, 2> alpha;
    DyadicCube cube;
};

// Smallest enumerated dyadic cube containing Q, scanning scales upward with
// alpha = 0 preferred on ties.  Empty when the window cannot hold a cover.
std::optional<ThirdTrickCover> third_trick_cover(const Window& w,
                                                 const LatticeCube& q);

}  // namespace wlab
