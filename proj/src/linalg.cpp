#include "pdsq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace pdsq::linalg {

namespace {

constexpr double kStepNorm = 2.0;
constexpr int kMaxTerms = 40;
// Relative squared weight below which trailing components are treated as zero.
constexpr double kSupportCut = 1e-32;

Eigen::Index bandwidth(const SparseMatrix& g) {
    Eigen::Index band = 0;
    for (Eigen::Index c = 0; c < g.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(g, c); it; ++it)
            band = std::max(band, std::abs(it.row() - it.col()));
    return band;
}

// Smallest m <= hint with |v(m:)|^2 <= kSupportCut |v|^2.
Eigen::Index support(const Eigen::VectorXcd& v, Eigen::Index hint) {
    const double total = v.head(hint).squaredNorm();
    double tail = 0.0;
    Eigen::Index m = hint;
    while (m > 0) {
        const double w = std::norm(v(m - 1));
        if (tail + w > kSupportCut * total)
            break;
        tail += w;
        --m;
    }
    return m;
}

// y(0:rows) = G(:, 0:cols) x(0:cols)
void restricted_product(const SparseMatrix& g, const Eigen::VectorXcd& x, Eigen::Index cols, Eigen::Index rows,
                        Eigen::VectorXcd& y) {
    y.head(rows).setZero();
    for (Eigen::Index c = 0; c < cols; ++c) {
        const cplx xc = x(c);
        if (xc == cplx{0.0, 0.0})
            continue;
        for (SparseMatrix::InnerIterator it(g, c); it; ++it)
            y(it.row()) += it.value() * xc;
    }
}

double restricted_norm1(const SparseMatrix& g, Eigen::Index cols) {
    double best = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(g, c); it; ++it)
            sum += std::abs(it.value());
        best = std::max(best, sum);
    }
    return best;
}

} // namespace

double norm1(const SparseMatrix& g) { return restricted_norm1(g, g.outerSize()); }

Eigen::VectorXcd expm_multiply(const SparseMatrix& g, const Eigen::VectorXcd& v) {
    const Eigen::Index n = v.size();
    const Eigen::Index band = std::max<Eigen::Index>(1, bandwidth(g));
    Eigen::VectorXcd out = v;
    Eigen::VectorXcd term(n);
    Eigen::VectorXcd next(n);
    Eigen::Index top = n;
    double t = 0.0;
    while (t < 1.0) {
        top = support(out, top);
        if (top == 0)
            return out;
        // Every Taylor term widens the support by at most `band`.
        const Eigen::Index reach = std::min(n, top + band * kMaxTerms);
        const double nrm = restricted_norm1(g, reach);
        if (nrm == 0.0)
            return out;
        const double tau = std::min(1.0 - t, kStepNorm / nrm);
        const double acc_norm = out.head(top).norm();
        term.head(top) = out.head(top);
        Eigen::Index sup = top;
        for (int k = 1; k <= kMaxTerms; ++k) {
            const Eigen::Index rows = std::min(n, sup + band);
            restricted_product(g, term, sup, rows, next);
            next.head(rows) *= tau / k;
            out.head(rows) += next.head(rows);
            std::swap(term, next);
            sup = rows;
            if (term.head(sup).norm() <= 1e-18 * acc_norm)
                break;
        }
        top = std::min(n, std::max(top, sup));
        t = (tau == 1.0 - t) ? 1.0 : t + tau;
    }
    return out;
}

} // namespace pdsq::linalg
