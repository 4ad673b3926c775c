#pragma once

#include <cmath>

namespace ponzi {

// Forward-mode dual number: value + first derivative. Comparisons act on the
// value part so branchy code (rank tests, sign picks) takes the same path as
// the plain double computation.
struct Dual {
    double v = 0.0;  // value
    double d = 0.0;  // derivative

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value), d(0.0) {}
    constexpr Dual(double value, double deriv) : v(value), d(deriv) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) { d = (d * o.v - v * o.d) / (o.v * o.v); v /= o.v; return *this; }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator+(const Dual& a) { return a; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
inline bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
inline bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }

inline Dual sqrt(const Dual& x) {
    double r = std::sqrt(x.v);
    return {r, r > 0.0 ? x.d / (2.0 * r) : 0.0};
}

inline Dual abs(const Dual& x) { return x.v < 0.0 ? -x : x; }

inline Dual exp(const Dual& x) {
    double e = std::exp(x.v);
    return {e, e * x.d};
}

inline Dual log(const Dual& x) { return {std::log(x.v), x.d / x.v}; }

// Scalar-access shims so numeric code can be written once for double and Dual.
inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

}  // namespace ponzi
