#pragma once
// Dense complex eigensolver: diagonal balancing, Householder reduction to
// Hessenberg form, single-shift complex QR to Schur form, eigenvectors by
// back-substitution. Templated on the real type so the same code runs in
// double and in double-double.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhring/ddreal.hpp"

namespace nhring::qr {

inline double abs(double x) { return std::fabs(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline long double abs(long double x) { return std::fabs(x); }
inline long double sqrt(long double x) { return std::sqrt(x); }
using nhring::abs;
using nhring::sqrt;

template <class R>
struct Cx {
    R re{};
    R im{};
    Cx() = default;
    Cx(R r) : re(r), im(0.0) {}
    Cx(R r, R i) : re(r), im(i) {}
};

template <class R> inline Cx<R> operator+(const Cx<R>& a, const Cx<R>& b) { return {a.re + b.re, a.im + b.im}; }
template <class R> inline Cx<R> operator-(const Cx<R>& a, const Cx<R>& b) { return {a.re - b.re, a.im - b.im}; }
template <class R> inline Cx<R> operator-(const Cx<R>& a) { return {-a.re, -a.im}; }
template <class R> inline Cx<R> operator*(const Cx<R>& a, const Cx<R>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> inline Cx<R> operator*(const Cx<R>& a, const R& s) { return {a.re * s, a.im * s}; }
template <class R> inline Cx<R> conj(const Cx<R>& a) { return {a.re, -a.im}; }
template <class R> inline R norm1(const Cx<R>& a) { return abs(a.re) + abs(a.im); }
template <class R> inline R abs2(const Cx<R>& a) { return a.re * a.re + a.im * a.im; }

template <class R> inline R cabs(const Cx<R>& a) {
    // scaled to keep the squares in range
    R m = std::max(abs(a.re), abs(a.im));
    if (m == R(0.0)) return R(0.0);
    R x = a.re / m, y = a.im / m;
    return m * sqrt(x * x + y * y);
}

template <class R> inline Cx<R> operator/(const Cx<R>& a, const Cx<R>& b) {
    // Smith's algorithm
    if (abs(b.re) >= abs(b.im)) {
        R r = b.im / b.re;
        R d = b.re + b.im * r;
        return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
    }
    R r = b.re / b.im;
    R d = b.re * r + b.im;
    return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}

template <class R> inline Cx<R> csqrt(const Cx<R>& z) {
    R m = cabs(z);
    if (m == R(0.0)) return {R(0.0), R(0.0)};
    R t = sqrt((m + abs(z.re)) * 0.5);
    if (z.re >= R(0.0)) return {t, z.im / (t * 2.0)};
    R u = z.im < R(0.0) ? -t : t;
    return {abs(z.im) / (t * 2.0), u};
}

template <class R> inline double eps_of() {
    if constexpr (std::is_floating_point_v<R>) return double(std::numeric_limits<R>::epsilon());
    else return 4.93038065763132e-32;  // 2^-104
}

/// Row-major dense square matrix of Cx<R>.
template <class R>
struct Dense {
    std::size_t n = 0;
    std::vector<Cx<R>> a;
    explicit Dense(std::size_t n_ = 0) : n(n_), a(n_ * n_) {}
    Cx<R>& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const Cx<R>& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parlett-Reinsch balancing with power-of-two factors; A <- D^-1 A D.
template <class R>
std::vector<double> balance(Dense<R>& A) {
    const std::size_t n = A.n;
    std::vector<double> d(n, 1.0);
    bool changed = true;
    int sweeps = 0;
    while (changed && sweeps++ < 100) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += to_double(norm1(A(j, i)));
                r += to_double(norm1(A(i, j)));
            }
            if (c == 0.0 || r == 0.0) continue;
            double s = c + r;
            double f = 1.0;
            while (c < r / 2.0) { c *= 4.0; r /= 4.0; f *= 2.0; }
            while (c >= r * 2.0) { c /= 4.0; r *= 4.0; f /= 2.0; }
            if (c + r < 0.95 * s * 1.0 && f != 1.0) {
                changed = true;
                d[i] *= f;
                for (std::size_t j = 0; j < n; ++j) A(i, j) = A(i, j) * R(1.0 / f);
                for (std::size_t j = 0; j < n; ++j) A(j, i) = A(j, i) * R(f);
            }
        }
    }
    return d;
}

/// Householder reduction to upper Hessenberg form. Q accumulated if wanted.
template <class R>
void hessenberg(Dense<R>& A, Dense<R>* Q) {
    const std::size_t n = A.n;
    if (Q) {
        *Q = Dense<R>(n);
        for (std::size_t i = 0; i < n; ++i) (*Q)(i, i) = Cx<R>(R(1.0));
    }
    std::vector<Cx<R>> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        R scale(0.0);
        for (std::size_t i = k + 1; i < n; ++i) scale += norm1(A(i, k));
        if (scale == R(0.0)) continue;
        R h(0.0);
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = A(i, k) * (R(1.0) / scale);
            h += abs2(v[i]);
        }
        R xnorm = sqrt(h);
        R a0 = cabs(v[k + 1]);
        Cx<R> phase = a0 == R(0.0) ? Cx<R>(R(1.0)) : v[k + 1] * (R(1.0) / a0);
        // v = x + phase*|x| e1, H = I - 2 v v^H / (v^H v)
        v[k + 1] = v[k + 1] + phase * xnorm;
        R vv(0.0);
        for (std::size_t i = k + 1; i < n; ++i) vv += abs2(v[i]);
        if (vv == R(0.0)) continue;
        R beta = R(2.0) / vv;
        // left: A <- (I - beta v v^H) A
        for (std::size_t j = k; j < n; ++j) {
            Cx<R> s(R(0.0));
            for (std::size_t i = k + 1; i < n; ++i) s = s + conj(v[i]) * A(i, j);
            s = s * beta;
            for (std::size_t i = k + 1; i < n; ++i) A(i, j) = A(i, j) - v[i] * s;
        }
        // right: A <- A (I - beta v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            Cx<R> s(R(0.0));
            for (std::size_t j = k + 1; j < n; ++j) s = s + A(i, j) * v[j];
            s = s * beta;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) = A(i, j) - s * conj(v[j]);
        }
        if (Q) {
            for (std::size_t i = 0; i < n; ++i) {
                Cx<R> s(R(0.0));
                for (std::size_t j = k + 1; j < n; ++j) s = s + (*Q)(i, j) * v[j];
                s = s * beta;
                for (std::size_t j = k + 1; j < n; ++j) (*Q)(i, j) = (*Q)(i, j) - s * conj(v[j]);
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) A(i, k) = Cx<R>(R(0.0));
    }
}

template <class R>
struct Givens {
    R c;
    Cx<R> s;
};

// G = [[c, s], [-conj(s), c]] with G * (a, b)^T = (r, 0)^T
template <class R>
Givens<R> make_givens(const Cx<R>& a, const Cx<R>& b) {
    R nb = cabs(b);
    if (nb == R(0.0)) return {R(1.0), Cx<R>(R(0.0))};
    R na = cabs(a);
    if (na == R(0.0)) return {R(0.0), conj(b) * (R(1.0) / nb)};
    R m = std::max(na, nb);
    R x = na / m, y = nb / m;
    R nrm = m * sqrt(x * x + y * y);
    R c = na / nrm;
    Cx<R> s = (a * (R(1.0) / na)) * conj(b) * (R(1.0) / nrm);
    return {c, s};
}

/// Complex Schur form of an upper Hessenberg matrix by single-shift QR.
/// With Q non-null the full triangular factor and the Schur vectors are
/// produced; otherwise only the active window is updated and the diagonal
/// holds the eigenvalues on exit.
template <class R>
void schur(Dense<R>& H, Dense<R>* Q, int max_iter_per_value = 60) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(H.n);
    const bool full = Q != nullptr;
    const R eps(eps_of<R>());
    std::ptrdiff_t iu = n - 1;
    int iter = 0;
    while (iu > 0) {
        std::ptrdiff_t il = iu;
        while (il > 0) {
            R off = norm1(H(il, il - 1));
            R diag = norm1(H(il, il)) + norm1(H(il - 1, il - 1));
            if (off <= eps * diag || off == R(0.0)) {
                H(il, il - 1) = Cx<R>(R(0.0));
                break;
            }
            --il;
        }
        if (il == iu) {
            --iu;
            iter = 0;
            continue;
        }
        ++iter;
        if (iter > max_iter_per_value) {
            throw ConvergenceError("QR iteration did not converge (dimension " + std::to_string(n) +
                                   ", active block ending at " + std::to_string(iu) + ")");
        }
        Cx<R> shift;
        if (iter == 10 || iter == 30) {
            R e = abs(H(iu, iu - 1).re);
            if (iu >= 2) e += abs(H(iu - 1, iu - 2).re);
            shift = H(iu, iu) + Cx<R>(e);
        } else {
            // Wilkinson: eigenvalue of the trailing 2x2 closer to H(iu,iu)
            Cx<R> a = H(iu - 1, iu - 1), b = H(iu - 1, iu), c = H(iu, iu - 1), d = H(iu, iu);
            Cx<R> tr = a + d;
            Cx<R> det = a * d - b * c;
            Cx<R> half = tr * R(0.5);
            Cx<R> disc = csqrt(half * half - det);
            Cx<R> l1 = half + disc, l2 = half - disc;
            shift = norm1(l1 - d) < norm1(l2 - d) ? l1 : l2;
        }
        const std::ptrdiff_t col_end = full ? n : iu + 1;
        const std::ptrdiff_t row_beg = full ? 0 : il;
        for (std::ptrdiff_t k = il; k < iu; ++k) {
            Givens<R> g = k == il ? make_givens(H(il, il) - shift, H(il + 1, il))
                                  : make_givens(H(k, k - 1), H(k + 1, k - 1));
            const Cx<R> ms = -conj(g.s);
            // rows k, k+1
            std::ptrdiff_t j0 = k == il ? k : k - 1;
            for (std::ptrdiff_t j = j0; j < col_end; ++j) {
                Cx<R> x = H(k, j), y = H(k + 1, j);
                H(k, j) = x * g.c + g.s * y;
                H(k + 1, j) = ms * x + y * g.c;
            }
            if (k > il) H(k + 1, k - 1) = Cx<R>(R(0.0));
            // columns k, k+1 (multiply by G^H)
            const Cx<R> cs = conj(g.s);
            const Cx<R> ns = -g.s;
            std::ptrdiff_t i1 = std::min(k + 2, iu);
            for (std::ptrdiff_t i = row_beg; i <= i1; ++i) {
                Cx<R> x = H(i, k), y = H(i, k + 1);
                H(i, k) = x * g.c + y * cs;
                H(i, k + 1) = x * ns + y * g.c;
            }
            if (full) {
                for (std::ptrdiff_t i = 0; i < n; ++i) {
                    Cx<R> x = (*Q)(i, k), y = (*Q)(i, k + 1);
                    (*Q)(i, k) = x * g.c + y * cs;
                    (*Q)(i, k + 1) = x * ns + y * g.c;
                }
            }
        }
    }
}

/// Eigenvectors of the upper triangular T, returned as columns of Q*X.
template <class R>
Dense<R> triangular_eigenvectors(const Dense<R>& T, const Dense<R>& Q) {
    const std::size_t n = T.n;
    R tnorm(0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) tnorm = std::max(tnorm, norm1(T(i, j)));
    const R small = tnorm * R(eps_of<R>());
    const R tiny = small == R(0.0) ? R(std::numeric_limits<double>::min()) : small;
    Dense<R> V(n);
    std::vector<Cx<R>> x(n);
    for (std::size_t k = n; k-- > 0;) {
        const Cx<R> lam = T(k, k);
        std::fill(x.begin(), x.end(), Cx<R>(R(0.0)));
        x[k] = Cx<R>(R(1.0));
        for (std::size_t i = k; i-- > 0;) {
            Cx<R> s(R(0.0));
            for (std::size_t j = i + 1; j <= k; ++j) s = s + T(i, j) * x[j];
            Cx<R> d = T(i, i) - lam;
            if (norm1(d) < tiny) d = Cx<R>(tiny);
            x[i] = -(s / d);
            R m = norm1(x[i]);
            if (m > R(1e100)) {
                R f = R(1.0) / m;
                for (std::size_t j = i; j <= k; ++j) x[j] = x[j] * f;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            Cx<R> s(R(0.0));
            for (std::size_t j = 0; j <= k; ++j) s = s + Q(i, j) * x[j];
            V(i, k) = s;
        }
    }
    return V;
}

template <class R>
Dense<R> to_dense(const std::complex<double>* rowmajor, std::size_t n) {
    Dense<R> A(n);
    for (std::size_t i = 0; i < n * n; ++i) A.a[i] = Cx<R>(R(rowmajor[i].real()), R(rowmajor[i].imag()));
    return A;
}

/// Eigenvalues of A (taken by value, destroyed).
template <class R>
std::vector<Cx<R>> eigenvalues(Dense<R> A) {
    balance(A);
    hessenberg<R>(A, nullptr);
    schur<R>(A, nullptr);
    std::vector<Cx<R>> w(A.n);
    for (std::size_t i = 0; i < A.n; ++i) w[i] = A(i, i);
    return w;
}

/// Eigenvalues and unit-norm right eigenvectors (columns of V) via the
/// Schur form.
template <class R>
void eigensystem(Dense<R> A, std::vector<Cx<R>>& values, Dense<R>& V) {
    const std::size_t n = A.n;
    std::vector<double> d = balance(A);
    Dense<R> Q;
    hessenberg<R>(A, &Q);
    schur<R>(A, &Q);
    V = triangular_eigenvectors(A, Q);
    values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = A(k, k);
        R big(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            V(i, k) = V(i, k) * R(d[i]);
            big = std::max(big, norm1(V(i, k)));
        }
        if (big == R(0.0)) big = R(1.0);
        R nrm(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            V(i, k) = V(i, k) * (R(1.0) / big);
            nrm += abs2(V(i, k));
        }
        R inv = R(1.0) / sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) V(i, k) = V(i, k) * inv;
    }
}

} // namespace nhring::qr
