#include "wlab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wlab/kernels.hpp"

namespace wlab {

double StepProfile::value_at(double t) const {
    for (std::size_t j = 0; j < masses.size(); ++j)
        if (t < masses[j]) return levels[j];
    return 0.0;
}

double distribution(const GridFunction& f, const GridFunction& nu, double t) {
    require_same_window(f, nu);
    if (t < 0) throw NegativeLevel("distribution level must be >= 0");
    double raw = kern::ops().mass_above(f.values().data(), nu.values().data(),
                                        f.values().size(), t);
    return raw * f.window().cell_volume();
}

StepProfile make_profile(std::vector<std::pair<double, double>> cells) {
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    StepProfile pr;
    dd acc{};
    std::size_t i = 0;
    while (i < cells.size()) {
        double v = cells[i].first;
        if (!(v > 0)) break;  // sorted: the rest are zeros
        while (i < cells.size() && cells[i].first == v) {
            acc = dd_add(acc, cells[i].second);
            ++i;
        }
        pr.levels.push_back(v);
        pr.masses.push_back(dd_round(acc));
    }
    return pr;
}

StepProfile rearrangement(const GridFunction& f, const GridFunction& nu) {
    require_same_window(f, nu);
    auto fv = f.values();
    auto nv = nu.values();
    double vol = f.window().cell_volume();
    std::vector<std::pair<double, double>> cells;  // (value, nu mass)
    cells.reserve(fv.size());
    for (std::size_t i = 0; i < fv.size(); ++i)
        if (fv[i] > 0) cells.emplace_back(fv[i], nv[i] * vol);
    return make_profile(std::move(cells));
}

namespace {

void check_p(double p) {
    if (!(p > 0) || !std::isfinite(p))
        throw BadExponent("exponent must be finite and positive");
}

}  // namespace

double norm_p1(const StepProfile& pr, double p) {
    check_p(p);
    KahanSum s;
    double inv = 1.0 / p;
    for (std::size_t j = 0; j < pr.levels.size(); ++j) {
        double next = j + 1 < pr.levels.size() ? pr.levels[j + 1] : 0.0;
        s.add(std::pow(pr.masses[j], inv) * (pr.levels[j] - next));
    }
    return p * s.value();
}

double norm_pinf(const StepProfile& pr, double p) {
    check_p(p);
    double best = 0.0;
    double inv = 1.0 / p;
    for (std::size_t j = 0; j < pr.levels.size(); ++j)
        best = std::max(best, pr.levels[j] * std::pow(pr.masses[j], inv));
    return best;
}

double norm_p1(const GridFunction& f, const GridFunction& nu, double p) {
    return norm_p1(rearrangement(f, nu), p);
}

double norm_pinf(const GridFunction& f, const GridFunction& nu, double p) {
    return norm_pinf(rearrangement(f, nu), p);
}

double norm_lebesgue(const GridFunction& f, const GridFunction& nu, double p) {
    require_same_window(f, nu);
    auto fv = f.values();
    auto nv = nu.values();
    if (std::isinf(p)) {
        double best = 0.0;
        for (std::size_t i = 0; i < fv.size(); ++i)
            if (nv[i] > 0) best = std::max(best, fv[i]);
        return best;
    }
    check_p(p);
    KahanSum s;
    for (std::size_t i = 0; i < fv.size(); ++i)
        if (fv[i] > 0) s.add(nv[i] * std::pow(fv[i], p));
    return std::pow(s.value() * f.window().cell_volume(), 1.0 / p);
}

double norm_triple(const GridFunction& f, const GridFunction& nu, double p,
                   double r) {
    check_p(p);
    if (!(r > 0) || r >= p)
        throw BadExponent("norm_triple requires 0 < r < p");
    StepProfile pr = rearrangement(f, nu);
    double best = 0.0;
    double e1 = 1.0 / p - 1.0 / r;
    KahanSum integral;  // int_0^{masses[j]} (f*)^r
    double prev_mass = 0.0;
    for (std::size_t j = 0; j < pr.levels.size(); ++j) {
        integral.add(std::pow(pr.levels[j], r) * (pr.masses[j] - prev_mass));
        prev_mass = pr.masses[j];
        best = std::max(best, std::pow(pr.masses[j], e1) *
                                  std::pow(integral.value(), 1.0 / r));
    }
    return best;
}

double kolmogorov_factor(double p, double r) {
    return std::pow(p / (p - r), 1.0 / r);
}

}  // namespace wlab
