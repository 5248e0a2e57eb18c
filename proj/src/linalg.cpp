#include "dnr/linalg.hpp"

#include "dnr/config.hpp"
#include "dnr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dnr {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotUnit: return "NotUnit";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::ZeroMatrix: return "ZeroMatrix";
        case ErrorKind::EmptyCloud: return "EmptyCloud";
        case ErrorKind::EmptyRegion: return "EmptyRegion";
        case ErrorKind::OutsideDomain: return "OutsideDomain";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::SingularResolvent: return "SingularResolvent";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::RhoOutOfRange: return "RhoOutOfRange";
        case ErrorKind::QOutOfRange: return "QOutOfRange";
        case ErrorKind::DegenerateRegion: return "DegenerateRegion";
        case ErrorKind::ZeroNotInterior: return "ZeroNotInterior";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : n_(rows.size()), data_(n_ * n_) {
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n_) throw Error(ErrorKind::InvalidInput, "matrix must be square");
        std::size_t j = 0;
        for (const auto& v : row) (*this)(i, j++) = v;
        ++i;
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool ComplexMatrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.size();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x) {
    const std::size_t n = a.size();
    ComplexVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s{};
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.size(), nb = b.size();
    ComplexMatrix k(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t p = 0; p < nb; ++p)
                for (std::size_t q = 0; q < nb; ++q) k(i * nb + p, j * nb + q) = a(i, j) * b(p, q);
    return k;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
    Complex s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

double norm(std::span<const Complex> x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

void normalize(ComplexVector& x) {
    const double nx = norm(x);
    if (nx > 0.0)
        for (auto& v : x) v /= nx;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver

namespace {

double off_diagonal(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation annihilating A(p,q); V accumulates the rotations.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex b = a(p, q);
    const double mag = std::abs(b);
    if (mag == 0.0) return;
    const Complex e = std::conj(b) / mag;  // exp(-i arg b)
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const std::size_t n = a.size();

    for (std::size_t i = 0; i < n; ++i) {
        const Complex aip = a(i, p), aiq = a(i, q);
        a(i, p) = c * aip - s * e * aiq;
        a(i, q) = s * aip + c * e * aiq;
        const Complex vip = v(i, p), viq = v(i, q);
        v(i, p) = c * vip - s * e * viq;
        v(i, q) = s * vip + c * e * viq;
    }
    const Complex ec = std::conj(e);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex apj = a(p, j), aqj = a(q, j);
        a(p, j) = c * apj - s * ec * aqj;
        a(q, j) = s * apj + c * ec * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

}  // namespace

HermitianEigensystem hermitian_eigs(const ComplexMatrix& input) {
    const std::size_t n = input.size();
    if (n == 0) throw Error(ErrorKind::InvalidInput, "empty matrix");
    const double scale = input.max_abs();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            asym = std::max(asym, std::abs(input(i, j) - std::conj(input(j, i))));
    if (asym > kConfig.hermitian_tol * std::max(scale, 1e-300) && asym > 0.0)
        throw Error(ErrorKind::NotHermitian, "asymmetry " + std::to_string(asym));

    ComplexMatrix a = input.hermitian_part();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double fro = a.frobenius_norm();
    const double target = 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * fro;

    int sweep = 0;
    while (off_diagonal(a) > target) {
        if (++sweep > kConfig.jacobi_max_sweeps)
            throw Error(ErrorKind::ConvergenceFailure, "Jacobi sweep cap exceeded");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigensystem out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t k : order) {
        out.values.push_back(a(k, k).real());
        ComplexVector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = v(i, k);
        out.vectors.push_back(std::move(col));
    }
    return out;
}

TopEigenpair hermitian_top(const ComplexMatrix& a) {
    auto es = hermitian_eigs(a);
    return {es.values.back(), std::move(es.vectors.back())};
}

// ---------------------------------------------------------------------------
// General eigenvalues

namespace {

void reduce_to_hessenberg(ComplexMatrix& h) {
    const std::size_t n = h.size();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;
        ComplexVector v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = h(k + 1 + i, k);
        const double xnorm = norm(v);
        if (xnorm == 0.0) continue;
        const Complex phase = std::abs(v[0]) > 0.0 ? v[0] / std::abs(v[0]) : Complex(1.0);
        v[0] += phase * xnorm;
        double v2 = 0.0;
        for (const auto& x : v) v2 += std::norm(x);
        if (v2 == 0.0) continue;
        const double beta = 2.0 / v2;
        for (std::size_t j = 0; j < n; ++j) {
            Complex s{};
            for (std::size_t i = 0; i < m; ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
            s *= beta;
            for (std::size_t i = 0; i < m; ++i) h(k + 1 + i, j) -= v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex s{};
            for (std::size_t j = 0; j < m; ++j) s += h(i, k + 1 + j) * v[j];
            s *= beta;
            for (std::size_t j = 0; j < m; ++j) h(i, k + 1 + j) -= s * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

std::pair<Complex, Complex> eig2x2(Complex a, Complex b, Complex c, Complex d) {
    const Complex half_tr = 0.5 * (a + d);
    const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    return {half_tr + disc, half_tr - disc};
}

}  // namespace

Spectrum spectrum(const ComplexMatrix& t) {
    const std::size_t n = t.size();
    if (n == 0) throw Error(ErrorKind::InvalidInput, "empty matrix");
    ComplexMatrix h = t;
    reduce_to_hessenberg(h);
    const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<Complex> eig;
    eig.reserve(n);
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    int iter = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig.push_back(h(0, 0));
            break;
        }
        std::ptrdiff_t l = hi;
        while (l > 0) {
            double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (s == 0.0) s = hnorm;
            if (std::abs(h(l, l - 1)) <= eps * s) {
                h(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == hi) {
            eig.push_back(h(hi, hi));
            --hi;
            iter = 0;
            continue;
        }
        if (l == hi - 1) {
            auto [e1, e2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            eig.push_back(e1);
            eig.push_back(e2);
            hi -= 2;
            iter = 0;
            continue;
        }
        if (++iter > kConfig.qr_max_iterations_per_eigenvalue)
            throw Error(ErrorKind::ConvergenceFailure, "QR iteration cap exceeded");

        Complex mu;
        if (iter % 11 == 0) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
        } else {
            auto [e1, e2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            mu = std::abs(e1 - h(hi, hi)) < std::abs(e2 - h(hi, hi)) ? e1 : e2;
        }

        for (std::ptrdiff_t k = l; k <= hi; ++k) h(k, k) -= mu;
        std::vector<std::pair<Complex, Complex>> rot;
        rot.reserve(hi - l);
        for (std::ptrdiff_t k = l; k < hi; ++k) {
            const Complex a = h(k, k), b = h(k + 1, k);
            const double r = std::hypot(std::abs(a), std::abs(b));
            Complex c = 1.0, s = 0.0;
            if (r > 0.0) {
                c = a / r;
                s = b / r;
            }
            for (std::ptrdiff_t j = k; j <= hi; ++j) {
                const Complex x = h(k, j), y = h(k + 1, j);
                h(k, j) = std::conj(c) * x + std::conj(s) * y;
                h(k + 1, j) = -s * x + c * y;
            }
            rot.emplace_back(c, s);
        }
        for (std::ptrdiff_t k = l; k < hi; ++k) {
            const auto [c, s] = rot[k - l];
            const std::ptrdiff_t last = std::min(k + 2, hi);
            for (std::ptrdiff_t i = l; i <= last; ++i) {
                const Complex x = h(i, k), y = h(i, k + 1);
                h(i, k) = c * x + s * y;
                h(i, k + 1) = -std::conj(s) * x + std::conj(c) * y;
            }
        }
        for (std::ptrdiff_t k = l; k <= hi; ++k) h(k, k) += mu;
    }

    std::sort(eig.begin(), eig.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });

    Spectrum out;
    out.eigenvalues = std::move(eig);
    for (const auto& lambda : out.eigenvalues) {
        const ComplexVector v = eigenvector(t, lambda);
        ComplexVector r = t * v;
        for (std::size_t i = 0; i < n; ++i) r[i] -= lambda * v[i];
        out.residual = std::max(out.residual, norm(r));
    }
    return out;
}

namespace {

// LU factorisation with partial pivoting; tiny pivots are replaced by `floor`.
struct Lu {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
    double min_pivot = std::numeric_limits<double>::infinity();
};

Lu lu_factor(const ComplexMatrix& a, double floor) {
    const std::size_t n = a.size();
    Lu f{a, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    auto& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        f.min_pivot = std::min(f.min_pivot, std::abs(m(k, k)));
        if (std::abs(m(k, k)) < floor) m(k, k) = floor;
        if (m(k, k) == Complex{}) continue;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex l = m(i, k) / m(k, k);
            m(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    return f;
}

ComplexVector lu_solve(const Lu& f, std::span<const Complex> b) {
    const std::size_t n = f.lu.size();
    ComplexVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

}  // namespace

ComplexVector eigenvector(const ComplexMatrix& t, Complex lambda) {
    const std::size_t n = t.size();
    ComplexMatrix a = t;
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= lambda;
    const double scale = std::max({t.max_abs(), std::abs(lambda), 1e-300});
    const Lu f = lu_factor(a, 1e-14 * scale);
    ComplexVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = Complex(1.0 + 0.1 * i, 0.01 * i);
    normalize(x);
    for (int it = 0; it < 3; ++it) {
        x = lu_solve(f, x);
        normalize(x);
        bool finite = std::all_of(x.begin(), x.end(), [](const Complex& v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        });
        if (!finite) throw Error(ErrorKind::ConvergenceFailure, "inverse iteration diverged");
    }
    // Fix the phase so the largest component is real positive.
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[big])) big = i;
    const Complex ph = std::conj(x[big]) / std::abs(x[big]);
    for (auto& v : x) v *= ph;
    return x;
}

std::vector<double> singular_values(const ComplexMatrix& t) {
    const auto es = hermitian_eigs(t.adjoint() * t);
    std::vector<double> s;
    s.reserve(es.values.size());
    for (auto it = es.values.rbegin(); it != es.values.rend(); ++it) s.push_back(std::sqrt(std::max(*it, 0.0)));
    return s;
}

double operator_norm(const ComplexMatrix& t) { return singular_values(t).front(); }

double spectral_radius(const ComplexMatrix& t) {
    double r = 0.0;
    for (const auto& l : spectrum(t).eigenvalues) r = std::max(r, std::abs(l));
    return r;
}

bool try_inverse(const ComplexMatrix& a, ComplexMatrix& out, double pivot_tol) {
    const std::size_t n = a.size();
    const Lu f = lu_factor(a, 0.0);
    if (!(f.min_pivot > pivot_tol)) return false;
    out = ComplexMatrix(n);
    ComplexVector e(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), Complex{});
        e[j] = 1.0;
        const ComplexVector col = lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
    }
    return true;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    ComplexMatrix out;
    if (!try_inverse(a, out, 0.0)) throw Error(ErrorKind::SingularResolvent, "singular matrix");
    return out;
}

// ---------------------------------------------------------------------------
// Polynomials

Polynomial::Polynomial(std::vector<Complex> coefficients) : c_(std::move(coefficients)) {
    if (static_cast<int>(c_.size()) > kMaxPolynomialDegree + 1)
        throw Error(ErrorKind::InvalidInput, "polynomial degree exceeds 64");
}

Polynomial Polynomial::monomial(int k, Complex c) {
    std::vector<Complex> coef(static_cast<std::size_t>(k) + 1);
    coef.back() = c;
    return Polynomial(std::move(coef));
}

int Polynomial::degree() const {
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
        if (c_[k] != Complex{}) return k;
    return -1;
}

Complex Polynomial::operator()(Complex z) const {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Polynomial(std::move(c));
}

ComplexMatrix matrix_polynomial(const Polynomial& p, const ComplexMatrix& t) {
    const std::size_t n = t.size();
    const auto& c = p.coefficients();
    ComplexMatrix acc(n);
    if (c.empty()) return acc;
    if (c.size() == 2 && c[0] == Complex{} && c[1] == Complex(1.0)) return t;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * t;
        for (std::size_t i = 0; i < n; ++i) acc(i, i) += *it;
    }
    return acc;
}

}  // namespace dnr
