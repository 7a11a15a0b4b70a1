#pragma once

#include <cstddef>
#include <vector>

namespace mlebound {

using Vec = std::vector<double>;

// Row-major dense matrix, small sizes only.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t d);
    static Matrix diagonal(const Vec& diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<double>& data() const { return a_; }

    Matrix transpose() const;
    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Vec operator*(const Matrix& a, const Vec& x);
double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Symmetric positive definite matrix. Only the upper triangle is stored, so
// (i,j) and (j,i) read the same cell.
class SymmetricPD {
public:
    // Uses the upper triangle of m. Throws NotPD when the smallest eigenvalue
    // is not above eig_floor.
    explicit SymmetricPD(const Matrix& m);

    std::size_t dim() const { return d_; }
    double operator()(std::size_t i, std::size_t j) const {
        return i <= j ? u_[index(i, j)] : u_[index(j, i)];
    }
    Matrix to_matrix() const;
    double min_eigenvalue() const { return min_eig_; }

private:
    SymmetricPD() = default;
    std::size_t index(std::size_t i, std::size_t j) const { return i * d_ - i * (i + 1) / 2 + j; }
    std::size_t d_ = 0;
    std::vector<double> u_;
    double min_eig_ = 0.0;
    friend SymmetricPD from_eigen(const Vec&, const Matrix&, double (*)(double));
};

struct EigenSystem {
    Vec values;      // ascending
    Matrix vectors;  // columns; first nonzero component of each is positive
};

// Cyclic Jacobi on the upper triangle of s.
EigenSystem eigendecompose_symmetric(const Matrix& s);
EigenSystem eigendecompose_symmetric(const SymmetricPD& s);

double eig_floor(const Matrix& s);

SymmetricPD spd_sqrt(const SymmetricPD& s);
SymmetricPD spd_invsqrt(const SymmetricPD& s);
SymmetricPD spd_inverse(const SymmetricPD& s);

// Cholesky solve of S x = b.
Vec spd_solve(const SymmetricPD& s, const Vec& b);

}  // namespace mlebound
