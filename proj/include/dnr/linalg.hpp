#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dnr {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense square complex matrix, row-major. Sized for desk-scale work (n <= 64).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> d);

    std::size_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const Complex> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    /// (M + M*) / 2
    ComplexMatrix hermitian_part() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    double frobenius_norm() const;
    double max_abs() const;
    bool is_finite() const;
    bool is_zero() const { return max_abs() == 0.0; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x);

/// Kronecker product A (x) B.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// <x, y> = sum_i x_i conj(y_i), linear in the first slot.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double norm(std::span<const Complex> x);
void normalize(ComplexVector& x);

/// Hermitian eigensystem with ascending eigenvalues and orthonormal eigenvectors.
struct HermitianEigensystem {
    std::vector<double> values;
    std::vector<ComplexVector> vectors;
};

/// Cyclic complex Jacobi. Throws NotHermitian or ConvergenceFailure.
HermitianEigensystem hermitian_eigs(const ComplexMatrix& a);

/// Largest eigenvalue of a Hermitian matrix with its eigenvector.
struct TopEigenpair {
    double value;
    ComplexVector vector;
};
TopEigenpair hermitian_top(const ComplexMatrix& a);

struct Spectrum {
    std::vector<Complex> eigenvalues;  // lexicographic by (Re, Im)
    double residual = 0.0;             // max ||Tv - lambda v|| over computed pairs
};

/// Eigenvalues via Householder-Hessenberg reduction and shifted complex QR.
Spectrum spectrum(const ComplexMatrix& t);

/// Unit vector v minimizing ||(T - lambda I) v||, by inverse iteration.
ComplexVector eigenvector(const ComplexMatrix& t, Complex lambda);

/// Descending singular values (square roots of the eigenvalues of T*T).
std::vector<double> singular_values(const ComplexMatrix& t);
double operator_norm(const ComplexMatrix& t);
double spectral_radius(const ComplexMatrix& t);

/// LU with partial pivoting. Returns false when a pivot underflows `pivot_tol`.
bool try_inverse(const ComplexMatrix& a, ComplexMatrix& out, double pivot_tol = 0.0);
ComplexMatrix inverse(const ComplexMatrix& a);

/// Polynomial with complex coefficients, constant term first.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coefficients);

    static Polynomial monomial(int k, Complex c = 1.0);

    /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
    int degree() const;
    const std::vector<Complex>& coefficients() const noexcept { return c_; }
    Complex operator()(Complex z) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);

private:
    std::vector<Complex> c_;
};

inline constexpr int kMaxPolynomialDegree = 64;

/// Horner evaluation of p(T).
ComplexMatrix matrix_polynomial(const Polynomial& p, const ComplexMatrix& t);

}  // namespace dnr
