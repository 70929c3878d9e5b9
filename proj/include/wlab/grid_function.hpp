#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wlab/dd.hpp"
#include "wlab/grid.hpp"

namespace wlab {

// Piecewise-constant non-negative function on a window: one value per cell.
// Holds both the functions f and every weight; signed data enters as
// absolute values.
class GridFunction {
public:
    GridFunction(Window w, std::vector<double> values);
    GridFunction(Window w, double fill);

    const Window& window() const { return win_; }
    std::span<const double> values() const { return v_; }

    double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }
    double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

    double at_cell(std::array<std::int64_t, 2> c) const {
        return v_[static_cast<std::size_t>(win_.cell_index(c))];
    }

    // nu-mass of one cell: value times cell volume (exact: the volume is a
    // power of two).
    double cell_mass(std::int64_t i) const { return v_[static_cast<std::size_t>(i)] * win_.cell_volume(); }

    bool positive() const;  // strictly positive everywhere (weight check)

    GridFunction map(const std::function<double(double)>& fn) const;
    static GridFunction multiply(const GridFunction& a, const GridFunction& b);
    GridFunction pow(double e) const;  // cellwise power, requires positivity if e < 0

private:
    Window win_;
    std::vector<double> v_;
};

void require_same_window(const GridFunction& a, const GridFunction& b);

// Double-double prefix table over the cells of a GridFunction.  1D stores a
// prefix array, 2D a summed-area table.  Raw sums are in value units (no
// cell-volume factor); averages divide by the cell count of the cube.
class PrefixTable {
public:
    explicit PrefixTable(const GridFunction& f);

    const Window& window() const { return win_; }

    // Sum of cell values over half-open cell-coordinate ranges, window-clipped.
    double sum1(std::int64_t a, std::int64_t b) const { return dd_round(dsum1(a, b)); }
    double rect(std::int64_t ax, std::int64_t bx, std::int64_t ay, std::int64_t by) const {
        return dd_round(drect(ax, bx, ay, by));
    }
    double cube_sum(const LatticeCube& q) const;

    // Tricell-weighted sum over a half-open tricell range: every cell value
    // counts once per covered tricell (per axis), so the result is in units
    // of value * (1/3)^n cells.  Exact for 1/3-shifted dyadic cubes.
    double tri_sum(std::array<std::int64_t, 2> lo, std::array<std::int64_t, 2> hi) const;
    double dyadic_sum(const DyadicCube& c) const;   // value*cell units, clipped
    double dyadic_avg(const DyadicCube& c) const;   // mean over the full cube

    // Average over a lattice cube (mass / volume in real units).
    double cube_avg(const LatticeCube& q) const;

    // Per-scale sweep support (1D): out[i] = sum over [lo+i, lo+i+s) / div.
    void window_avgs(std::int64_t lo, std::size_t count, std::size_t s,
                     double div, double* out) const;

    // 2D helper: raw dd rectangle sum in cell units.
    dd drect(std::int64_t ax, std::int64_t bx, std::int64_t ay, std::int64_t by) const;
    dd dsum1(std::int64_t a, std::int64_t b) const;

private:
    dd cum2(std::int64_t x, std::int64_t y) const;  // SAT entry, clamped
    dd tri_cum(std::int64_t tx, std::int64_t ty) const;

    Window win_;
    std::int64_t m_;
    std::vector<double> hi_, lo_;  // 1D: m+1 entries; 2D: (m+1)^2 row-major
    std::vector<double> cellv_;    // cell values, for tricell boundary terms
};

}  // namespace wlab
