#pragma once
// Double-double real: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// about 32 significant digits. Only the operations the eigensolver needs.

#include <cmath>

namespace nhring {

struct DDReal {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DDReal() = default;
    constexpr DDReal(double h) : hi(h), lo(0.0) {}
    constexpr DDReal(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DDReal quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DDReal two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DDReal two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline DDReal operator-(const DDReal& a) { return {-a.hi, -a.lo}; }

inline DDReal operator+(const DDReal& a, const DDReal& b) {
    DDReal s = dd_detail::two_sum(a.hi, b.hi);
    DDReal t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DDReal operator-(const DDReal& a, const DDReal& b) { return a + (-b); }

inline DDReal operator*(const DDReal& a, const DDReal& b) {
    DDReal p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DDReal operator*(const DDReal& a, double b) {
    DDReal p = dd_detail::two_prod(a.hi, b);
    p.lo += a.lo * b;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DDReal operator/(const DDReal& a, const DDReal& b) {
    double q1 = a.hi / b.hi;
    DDReal r = a - b * q1;
    double q2 = r.hi / b.hi;
    r = r - b * q2;
    double q3 = r.hi / b.hi;
    DDReal q = dd_detail::quick_two_sum(q1, q2);
    return q + DDReal(q3);
}

inline DDReal& operator+=(DDReal& a, const DDReal& b) { return a = a + b; }
inline DDReal& operator-=(DDReal& a, const DDReal& b) { return a = a - b; }
inline DDReal& operator*=(DDReal& a, const DDReal& b) { return a = a * b; }
inline DDReal& operator/=(DDReal& a, const DDReal& b) { return a = a / b; }

inline bool operator<(const DDReal& a, const DDReal& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DDReal& a, const DDReal& b) { return b < a; }
inline bool operator<=(const DDReal& a, const DDReal& b) { return !(b < a); }
inline bool operator>=(const DDReal& a, const DDReal& b) { return !(a < b); }
inline bool operator==(const DDReal& a, const DDReal& b) { return a.hi == b.hi && a.lo == b.lo; }

inline DDReal abs(const DDReal& a) { return a.hi < 0.0 ? -a : a; }

inline DDReal sqrt(const DDReal& a) {
    if (a.hi <= 0.0) return DDReal(0.0);
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    DDReal d = a - dd_detail::two_prod(ax, ax);
    return dd_detail::two_sum(ax, d.hi * (x * 0.5));
}

inline double to_double(const DDReal& a) { return a.hi + a.lo; }
inline double to_double(double a) { return a; }
inline double to_double(long double a) { return static_cast<double>(a); }

} // namespace nhring
