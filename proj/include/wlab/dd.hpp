#pragma once

#include <cmath>

namespace wlab {

// Double-double value: hi + lo with |lo| <= ulp(hi)/2.  Prefix tables store
// one of these per position so that differences of far-apart entries keep
// ~106 significant bits; a rounded cube sum is then accurate to the last few
// ulps even when the cube mass is tiny relative to the window total.
struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

// Error-free transformations (Knuth / Dekker).
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd fast_two_sum(double a, double b) {  // requires |a| >= |b| or a == 0
    double s = a + b;
    double err = b - (s - a);
    return {s, err};
}

inline dd dd_add(dd a, double b) {
    dd s = two_sum(a.hi, b);
    return fast_two_sum(s.hi, s.lo + a.lo);
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    return fast_two_sum(s.hi, s.lo + (a.lo + b.lo));
}

inline dd dd_sub(dd a, dd b) {
    dd s = two_sum(a.hi, -b.hi);
    return fast_two_sum(s.hi, s.lo + (a.lo - b.lo));
}

inline dd dd_mul_small_int(dd a, int k) {  // exact-ish scaling by 3, 9, ...
    double p = a.hi * static_cast<double>(k);
    double err = std::fma(a.hi, static_cast<double>(k), -p);
    return fast_two_sum(p, err + a.lo * static_cast<double>(k));
}

inline double dd_round(dd a) { return a.hi + a.lo; }

// Running compensated sum (Neumaier).  Cheap enough for inner scan loops
// where a dd accumulator would be overkill.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

}  // namespace wlab
