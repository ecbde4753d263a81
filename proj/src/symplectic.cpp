#include "corrtomo/symplectic.hpp"
#include <unsupported/Eigen/MatrixFunctions>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace corrtomo {

Eigen::MatrixXd symplectic_form(int N) {
    if (N < 1) throw std::invalid_argument("symplectic_form: N must be >= 1");
    Eigen::MatrixXd O = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    O.topRightCorner(N, N).setIdentity();
    O.bottomLeftCorner(N, N) = -Eigen::MatrixXd::Identity(N, N);
    return O;
}

double symplectic_residual(const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    if (n % 2 != 0 || M.cols() != n)
        throw std::invalid_argument("symplectic_residual: matrix must be square of even size");
    Eigen::MatrixXd O = symplectic_form(n / 2);
    return (M.transpose() * O * M - O).cwiseAbs().maxCoeff();
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd M, double tol) : m_(std::move(M)) {
    double r = symplectic_residual(m_);
    if (!(r < tol))
        throw NumericalError("symplectic check failed: residual " + std::to_string(r));
}

SymplecticMatrix exp_generator(const Eigen::MatrixXd& G, double gen_tol) {
    const int n = static_cast<int>(G.rows());
    if (n % 2 != 0 || G.cols() != n)
        throw std::invalid_argument("exp_generator: generator must be square of even size");
    Eigen::MatrixXd O = symplectic_form(n / 2);
    Eigen::MatrixXd OG = O * G;
    double scale = std::max(1.0, OG.cwiseAbs().maxCoeff());
    double asym = (OG - OG.transpose()).cwiseAbs().maxCoeff() / scale;
    if (!(asym < gen_tol))
        throw std::invalid_argument("exp_generator: Omega*G not symmetric (residual " + std::to_string(asym) + ")");
    Eigen::MatrixXd E = G.exp();
    if (!E.allFinite()) throw NumericalError("exp_generator: exponential did not converge");
    // Representation error of exp grows with the squeezing strength; scale the
    // acceptance accordingly rather than rejecting legitimately large maps.
    double tol = 1e-9 * std::max(1.0, E.squaredNorm() / E.rows());
    return SymplecticMatrix(E, tol);
}

bool is_physical_covariance(const Eigen::MatrixXd& Sigma, double tol) {
    const int n = static_cast<int>(Sigma.rows());
    Eigen::MatrixXcd H = Sigma.cast<std::complex<double>>() +
                         std::complex<double>(0.0, 0.5) * symplectic_form(n / 2).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    return es.eigenvalues().minCoeff() > -tol * std::max(1.0, Sigma.cwiseAbs().maxCoeff());
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& Sigma) {
    const int n = static_cast<int>(Sigma.rows());
    if (n % 2 != 0 || Sigma.cols() != n)
        throw std::invalid_argument("symplectic_eigenvalues: matrix must be square of even size");
    Eigen::MatrixXd S = 0.5 * (Sigma + Sigma.transpose());
    Eigen::MatrixXd A = symplectic_form(n / 2) * S;
    Eigen::MatrixXd A2 = -(A * A); // eigenvalues nu^2, each doubled
    Eigen::EigenSolver<Eigen::MatrixXd> es(A2);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i].real()));
    std::sort(v.begin(), v.end());
    Eigen::VectorXd nu(n / 2);
    for (int i = 0; i < n / 2; ++i) nu[i] = 0.5 * (v[2 * i] + v[2 * i + 1]);
    return nu;
}

BlochMessiah bloch_messiah(const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    if (n % 2 != 0 || M.cols() != n)
        throw std::invalid_argument("bloch_messiah: matrix must be square of even size");
    const int N = n / 2;
    Eigen::MatrixXd Om = symplectic_form(N);

    // polar decomposition M = P * O with P symmetric positive symplectic
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(M * M.transpose());
    Eigen::MatrixXd P = eg.eigenvectors() *
                        eg.eigenvalues().cwiseSqrt().asDiagonal() *
                        eg.eigenvectors().transpose();
    Eigen::MatrixXd Orth = eg.eigenvectors() *
                           eg.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           eg.eigenvectors().transpose() * M;

    // eigenpairs of P come as (d, v) and (1/d, Omega v); build the symplectic
    // orthogonal diagonalizer U = [V | -Omega V] from the d >= 1 half.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(P);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ep.eigenvalues()[a] > ep.eigenvalues()[b];
    });

    const double one_tol = 1e-10;
    Eigen::MatrixXd V(n, N);
    Eigen::VectorXd d(N);
    int filled = 0;
    for (int idx : order) {
        if (filled == N) break;
        if (ep.eigenvalues()[idx] > 1.0 + one_tol) {
            V.col(filled) = ep.eigenvectors().col(idx);
            d[filled] = ep.eigenvalues()[idx];
            ++filled;
        }
    }
    // remaining slots: the (even-dimensional) d ~ 1 subspace; pick pairwise
    // symplectic-orthogonal representatives by Gram-Schmidt against the
    // already-chosen vectors and their Omega-partners.
    for (int idx : order) {
        if (filled == N) break;
        double dv = ep.eigenvalues()[idx];
        if (dv > 1.0 + one_tol || dv < 1.0 - one_tol) continue;
        Eigen::VectorXd c = ep.eigenvectors().col(idx);
        for (int j = 0; j < filled; ++j) {
            c -= V.col(j) * (V.col(j).dot(c));
            Eigen::VectorXd w = Om * V.col(j);
            c -= w * (w.dot(c));
        }
        double nc = c.norm();
        if (nc < 1e-8) continue;
        V.col(filled) = c / nc;
        d[filled] = 1.0;
        ++filled;
    }
    if (filled != N)
        throw NumericalError("bloch_messiah: failed to assemble symplectic eigenbasis (pairing failure)");

    Eigen::MatrixXd U(n, n);
    U.leftCols(N) = V;
    U.rightCols(N) = -Om * V;

    BlochMessiah out;
    out.U = U;
    out.D.resize(n);
    out.D.head(N) = d;
    out.D.tail(N) = d.cwiseInverse();
    out.V = Orth.transpose() * U;

    double pr = (U * out.D.asDiagonal() * out.V.transpose() - M).cwiseAbs().maxCoeff();
    out.pairing_residual = pr;
    if (!(pr < 1e-6 * std::max(1.0, M.cwiseAbs().maxCoeff())))
        throw NumericalError("bloch_messiah: reconstruction residual " + std::to_string(pr));
    return out;
}

namespace {

struct SchurBlocks {
    std::vector<int> start;
    std::vector<int> size;
};

SchurBlocks find_blocks(const Eigen::MatrixXd& T) {
    SchurBlocks b;
    const int n = static_cast<int>(T.rows());
    int i = 0;
    while (i < n) {
        int sz = (i + 1 < n && T(i + 1, i) != 0.0) ? 2 : 1;
        b.start.push_back(i);
        b.size.push_back(sz);
        i += sz;
    }
    return b;
}

double block_re(const Eigen::MatrixXd& T, int s, int sz) {
    return sz == 1 ? T(s, s) : 0.5 * (T(s, s) + T(s + 1, s + 1));
}

} // namespace

RealSchurSorted sorted_real_schur(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw std::invalid_argument("sorted_real_schur: matrix must be square");
    Eigen::RealSchur<Eigen::MatrixXd> schur(A);
    if (schur.info() != Eigen::Success)
        throw NumericalError("sorted_real_schur: Schur iteration failed");
    Eigen::MatrixXd T = schur.matrixT();
    Eigen::MatrixXd Q = schur.matrixU();

    int pos = 0;
    while (pos < n) {
        SchurBlocks b = find_blocks(T);
        int best = -1;
        double best_re = -std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < b.start.size(); ++k) {
            if (b.start[k] < pos) continue;
            double re = block_re(T, b.start[k], b.size[k]);
            if (re > best_re) {
                best_re = re;
                best = static_cast<int>(k);
            }
        }
        if (best < 0) break;
        if (b.start[best] != pos) {
            lapack_int ifst = b.start[best] + 1;
            lapack_int ilst = pos + 1;
            lapack_int info = LAPACKE_dtrexc(LAPACK_COL_MAJOR, 'V', n, T.data(), n, Q.data(), n, &ifst, &ilst);
            if (info != 0)
                throw NumericalError("sorted_real_schur: eigenvalue reordering failed (info " + std::to_string(info) + ")");
        }
        pos += (pos + 1 < n && T(pos + 1, pos) != 0.0) ? 2 : 1;
    }
    return {Q, T};
}

SchurBlock schur_block(const Eigen::MatrixXd& G, PhaseBlock block, int n_keep) {
    const int n = static_cast<int>(G.rows());
    if (n % 2 != 0 || G.cols() != n)
        throw std::invalid_argument("schur_block: generator must be square of even size");
    const int N = n / 2;
    if (n_keep < 1 || n_keep > N) throw std::invalid_argument("schur_block: n_keep out of range");
    Eigen::MatrixXd offdiag_x = G.topRightCorner(N, N);
    Eigen::MatrixXd offdiag_p = G.bottomLeftCorner(N, N);
    double off = std::max(offdiag_x.cwiseAbs().maxCoeff(), offdiag_p.cwiseAbs().maxCoeff());
    if (off > 1e-8 * std::max(1.0, G.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("schur_block: generator not block-diagonal (complex probe amplitude unsupported)");
    Eigen::MatrixXd A = (block == PhaseBlock::x) ? G.topLeftCorner(N, N) : G.bottomRightCorner(N, N);
    RealSchurSorted rs = sorted_real_schur(A);
    return {rs.O, rs.T, n_keep};
}

} // namespace corrtomo
