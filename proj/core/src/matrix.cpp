#include "vdm/matrix.hpp"

#include "vdm/errors.hpp"
#include "vdm/summation.hpp"

#include <algorithm>
#include <cmath>

namespace vdm {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) out.at(c, r) = std::conj(at(r, c));
    }
    return out;
}

ComplexMatrix ComplexMatrix::multiply(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw domain_error("matrix product dimension mismatch");
    ComplexMatrix out(rows_, rhs.cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int k = 0; k < cols_; ++k) {
            cplx a = at(r, k);
            if (a == cplx(0.0, 0.0)) continue;
            const cplx* rhs_row = &rhs.data_[static_cast<std::size_t>(k) * rhs.cols_];
            cplx* out_row = &out.data_[static_cast<std::size_t>(r) * out.cols_];
            for (int c = 0; c < rhs.cols_; ++c) out_row[c] += a * rhs_row[c];
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::gram() const {
    ComplexMatrix out(cols_, cols_);
    for (int a = 0; a < cols_; ++a) {
        for (int b = a; b < cols_; ++b) {
            cplx acc(0.0, 0.0);
            for (int r = 0; r < rows_; ++r) acc += std::conj(at(r, a)) * at(r, b);
            out.at(a, b) = acc;
            out.at(b, a) = std::conj(acc);
        }
    }
    return out;
}

void ComplexMatrix::scale(double factor) {
    for (auto& v : data_) v *= factor;
}

void ComplexMatrix::scale_columns(const std::vector<double>& d) {
    if (static_cast<int>(d.size()) != cols_) throw domain_error("column scale dimension mismatch");
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) at(r, c) *= d[static_cast<std::size_t>(c)];
    }
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    double scale = 0.0;
    for (const auto& v : data_) scale = std::max(scale, std::abs(v));
    scale = std::max(scale, 1.0);
    for (int r = 0; r < rows_; ++r) {
        for (int c = r; c < cols_; ++c) {
            if (std::abs(at(r, c) - std::conj(at(c, r))) > tol * scale) return false;
        }
    }
    return true;
}

double ComplexMatrix::trace_real() const {
    NeumaierSum acc;
    int n = std::min(rows_, cols_);
    for (int i = 0; i < n; ++i) acc.add(at(i, i).real());
    return acc.value();
}

double ComplexMatrix::frobenius_inner(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw domain_error("frobenius inner dimension mismatch");
    NeumaierSum acc;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        acc.add((std::conj(data_[i]) * rhs.data_[i]).real());
    }
    return acc.value();
}

bool ComplexMatrix::finite() const {
    for (const auto& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix a, double tol) {
    if (a.rows() != a.cols()) throw domain_error("eigenvalues need a square matrix");
    if (a.rows() > 512) throw size_error("hermitian_eigenvalues supports dim <= 512");
    if (!a.is_hermitian(1e-8)) throw domain_error("hermitian_eigenvalues needs a Hermitian matrix");
    const int n = a.rows();
    if (n == 1) return {a.at(0, 0).real()};

    double norm = 0.0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) norm += std::norm(a.at(r, c));
    }
    norm = std::sqrt(norm);
    const double threshold = tol * std::max(norm, 1e-300);

    auto off_norm = [&] {
        double s = 0.0;
        for (int r = 0; r < n; ++r) {
            for (int c = r + 1; c < n; ++c) s += std::norm(a.at(r, c));
        }
        return std::sqrt(2.0 * s);
    };

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > threshold; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                cplx apq = a.at(p, q);
                if (std::abs(apq) == 0.0) continue;
                double app = a.at(p, p).real();
                double aqq = a.at(q, q).real();

                // Unitary rotation J (identity except J(p,p)=J(q,q)=c,
                // J(q,p)=s, J(p,q)=-conj(s)) with s = t*c*exp(-i arg(a_pq));
                // t solves t^2 - 2 tau t - 1 = 0, tau = (a_qq-a_pp)/(2|a_pq|),
                // smaller-magnitude root for stability. Then (J^H A J)(p,q) = 0.
                double abs_apq = std::abs(apq);
                cplx phase = apq / abs_apq;
                double tau = (aqq - app) / (2.0 * abs_apq);
                double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                double cth = 1.0 / std::sqrt(1.0 + t * t);
                cplx s_rot = t * cth * std::conj(phase);

                // A <- J^H A J: columns then rows of the updated matrix.
                for (int k = 0; k < n; ++k) {
                    cplx akp = a.at(k, p);
                    cplx akq = a.at(k, q);
                    a.at(k, p) = cth * akp + s_rot * akq;
                    a.at(k, q) = -std::conj(s_rot) * akp + cth * akq;
                }
                for (int k = 0; k < n; ++k) {
                    cplx apk = a.at(p, k);
                    cplx aqk = a.at(q, k);
                    a.at(p, k) = cth * apk + std::conj(s_rot) * aqk;
                    a.at(q, k) = -s_rot * apk + cth * aqk;
                }
                a.at(p, q) = cplx(0.0, 0.0);
                a.at(q, p) = cplx(0.0, 0.0);
            }
        }
    }

    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a.at(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace vdm
