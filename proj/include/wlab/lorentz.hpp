#pragma once

#include <vector>

#include "wlab/grid_function.hpp"

namespace wlab {

// Exact representation of the distribution function lambda_f^nu: levels are
// the distinct positive values of f in decreasing order, masses[j] is the
// nu-mass of {f >= levels[j]} (strictly increasing).  lambda(y) = masses[j]
// for y in [levels[j+1], levels[j]), 0 for y >= levels[0].
struct StepProfile {
    std::vector<double> levels;
    std::vector<double> masses;

    // Decreasing rearrangement at mass t.
    double value_at(double t) const;
    double total_mass() const { return masses.empty() ? 0.0 : masses.back(); }
};

// Profile from raw (value, mass) atoms; zero values are dropped, equal
// values merged, masses accumulated in compensated arithmetic.
StepProfile make_profile(std::vector<std::pair<double, double>> value_and_mass);

// nu({f > t}), strict inequality.  Throws NegativeLevel for t < 0.
double distribution(const GridFunction& f, const GridFunction& nu, double t);

StepProfile rearrangement(const GridFunction& f, const GridFunction& nu);

// L^{p,1} norm: p * integral of lambda(y)^{1/p} dy, evaluated exactly over
// the finitely many level intervals.
double norm_p1(const GridFunction& f, const GridFunction& nu, double p);

// L^{p,infty} quasi-norm: max over distinct values v of v * nu({f >= v})^{1/p}.
double norm_pinf(const GridFunction& f, const GridFunction& nu, double p);

// Lebesgue norm; p = infinity gives the nu-essential sup.
double norm_lebesgue(const GridFunction& f, const GridFunction& nu, double p);

// The ||| . ||| quasi-norm: sup over sets E of nu(E)^{1/p-1/r} (int_E f^r)^{1/r},
// 0 < r < p.  The sup over measurable E is attained at a complete level-set
// prefix of the decreasing rearrangement, so a sorted scan is exact.
double norm_triple(const GridFunction& f, const GridFunction& nu, double p,
                   double r);

// Kolmogorov constant (p/(p-r))^{1/r} sandwiching norm_pinf and norm_triple.
double kolmogorov_factor(double p, double r);

// Profile variants for callers that already paid for the sort.
double norm_p1(const StepProfile& pr, double p);
double norm_pinf(const StepProfile& pr, double p);

}  // namespace wlab
