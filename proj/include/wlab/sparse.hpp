#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wlab/grid_function.hpp"

namespace wlab {

// A finite collection of dyadic cubes with sparsity parameter eta.  The
// stopping-time construction also records, per cube, the measure of
// E_Q = Q minus its stopping children; explicit region runs are kept in 1D.
struct SparseFamily {
    std::array<std::uint8_t, 2> alpha = {0, 0};
    double eta = 0.5;
    std::vector<DyadicCube> cubes;
    // Indices into `cubes` of each cube's stopping children.
    std::vector<std::vector<std::size_t>> children;
    // 1D only: E_Q as half-open runs in tricell coordinates; empty when the
    // construction did not provide one.
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> runs;

    bool has_assignment() const { return !runs.empty(); }
};

// Calderon-Zygmund stopping-time decomposition of f over the grid D_alpha:
// children of Q are the maximal dyadic sub-cubes R with avg_R f > lambda *
// avg_Q f; roots are the top-scale positive-mass cubes, so every dyadic cube
// with positive average sits under some root.  (1 - 1/lambda)-sparse by
// construction.
SparseFamily cz_sparse_decompose(const GridFunction& f,
                                 std::array<std::uint8_t, 2> alpha,
                                 double lambda = 2.0);

// A_S(f_vec) = sum_Q (prod_i avg_Q f_i) chi_Q.  Cell values take the max
// over the cell's tricells, i.e. the sup over the cell of the exact sum, so
// pointwise domination statements stay valid cellwise.
GridFunction sparse_operator(const SparseFamily& S,
                             std::span<const GridFunction> fs);

// M_S: sup instead of sum over the family.
GridFunction sparse_maximal(const SparseFamily& S,
                            std::span<const GridFunction> fs);

// Max-flow certification of eta-sparseness.  Capacities are exact integers
// in tricell^n units; the universe is the cube arrangement itself, so cubes
// may stick out of the window.
struct SparseRun {
    std::size_t cube;                       // index into family
    std::array<std::int64_t, 2> lo, hi;     // tricell box, half-open
    std::int64_t units;                     // allocated measure, tricell^n
};
struct SparseCertificate {
    std::vector<SparseRun> assignment;
};
struct SparseRefutation {
    std::vector<std::size_t> cube_cut;  // Hall violator
    double demand;                      // eta * sum |Q| over the cut, real units
    double capacity;                    // |union of the cut|, real units
};
using SparseVerdict = std::variant<SparseCertificate, SparseRefutation>;

SparseVerdict verify_sparse(const Window& w, const SparseFamily& S, double eta);

bool is_certificate(const SparseVerdict& v);

// Documented JSON shape: alpha, eta, units marker, cubes with scale/index
// and optional assignment runs.
std::string sparse_to_json(const Window& w, const SparseFamily& S);
SparseFamily sparse_from_json(const Window& w, const std::string& text);

}  // namespace wlab
