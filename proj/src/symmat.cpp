#include "mlebound/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlebound/errors.hpp"

namespace mlebound {

Matrix Matrix::identity(std::size_t d) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vec& diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Vec operator*(const Matrix& a, const Vec& x) {
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::fabs(a.data()[k] - b.data()[k]));
    return m;
}

double eig_floor(const Matrix& s) { return 1e-12 * std::max(1.0, frobenius_norm(s)); }

EigenSystem eigendecompose_symmetric(const Matrix& s) {
    const std::size_t d = s.rows();
    if (s.cols() != d) throw Error(ErrorKind::Domain, "eigendecompose: matrix not square");
    Matrix a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) a(i, j) = a(j, i) = s(i, j);
    Matrix v = Matrix::identity(d);

    const double scale = std::max(frobenius_norm(a), 1e-300);
    const int max_sweeps = 100;
    bool converged = d < 2;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-17 * scale) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) > 1e-14 * scale)
            throw Error(ErrorKind::NoConvergence, "Jacobi iteration cap reached");
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
    EigenSystem es{Vec(d), Matrix(d, d)};
    for (std::size_t c = 0; c < d; ++c) {
        const std::size_t src = order[c];
        es.values[c] = a(src, src);
        double sign = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            if (v(k, src) != 0.0) {
                sign = v(k, src) > 0 ? 1.0 : -1.0;
                break;
            }
        }
        for (std::size_t k = 0; k < d; ++k) es.vectors(k, c) = sign * v(k, src);
    }
    return es;
}

SymmetricPD::SymmetricPD(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorKind::Domain, "SymmetricPD needs a nonempty square matrix");
    d_ = m.rows();
    u_.resize(d_ * (d_ + 1) / 2);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = i; j < d_; ++j) u_[index(i, j)] = m(i, j);
    for (double x : u_)
        if (!std::isfinite(x)) throw Error(ErrorKind::NotPD, "non-finite entry");
    Matrix full = to_matrix();
    EigenSystem es = eigendecompose_symmetric(full);
    min_eig_ = es.values.front();
    if (!(min_eig_ > eig_floor(full)))
        throw Error(ErrorKind::NotPD, "smallest eigenvalue " + std::to_string(min_eig_) +
                                          " not above floor");
}

Matrix SymmetricPD::to_matrix() const {
    Matrix m(d_, d_);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

EigenSystem eigendecompose_symmetric(const SymmetricPD& s) {
    return eigendecompose_symmetric(s.to_matrix());
}

SymmetricPD from_eigen(const Vec& values, const Matrix& v, double (*f)(double)) {
    const std::size_t d = values.size();
    SymmetricPD r;
    r.d_ = d;
    r.u_.assign(d * (d + 1) / 2, 0.0);
    Vec fv(d);
    for (std::size_t k = 0; k < d; ++k) fv[k] = f(values[k]);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += v(i, k) * fv[k] * v(j, k);
            r.u_[r.index(i, j)] = s;
        }
    r.min_eig_ = *std::min_element(fv.begin(), fv.end());
    return r;
}

namespace {
double f_sqrt(double x) { return std::sqrt(x); }
double f_invsqrt(double x) { return 1.0 / std::sqrt(x); }
double f_inv(double x) { return 1.0 / x; }
}  // namespace

SymmetricPD spd_sqrt(const SymmetricPD& s) {
    EigenSystem es = eigendecompose_symmetric(s);
    return from_eigen(es.values, es.vectors, f_sqrt);
}

SymmetricPD spd_invsqrt(const SymmetricPD& s) {
    EigenSystem es = eigendecompose_symmetric(s);
    return from_eigen(es.values, es.vectors, f_invsqrt);
}

SymmetricPD spd_inverse(const SymmetricPD& s) {
    EigenSystem es = eigendecompose_symmetric(s);
    return from_eigen(es.values, es.vectors, f_inv);
}

Vec spd_solve(const SymmetricPD& s, const Vec& b) {
    const std::size_t d = s.dim();
    Matrix l(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        double diag = s(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) throw Error(ErrorKind::NotPD, "Cholesky pivot not positive");
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = s(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    Vec y(b);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
        y[i] /= l(i, i);
    }
    for (std::size_t i = d; i-- > 0;) {
        for (std::size_t k = i + 1; k < d; ++k) y[i] -= l(k, i) * y[k];
        y[i] /= l(i, i);
    }
    return y;
}

}  // namespace mlebound
