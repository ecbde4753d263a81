#pragma once
#include <Eigen/Dense>
#include <stdexcept>

namespace corrtomo {

// Phase-space ordering convention: (x_0..x_{N-1}, p_0..p_{N-1}).

Eigen::MatrixXd symplectic_form(int N);

// max-norm of M^T Omega M - Omega
double symplectic_residual(const Eigen::MatrixXd& M);

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thin checked wrapper: construction verifies the symplectic condition.
class SymplecticMatrix {
public:
    explicit SymplecticMatrix(Eigen::MatrixXd M, double tol = 1e-9);
    const Eigen::MatrixXd& mat() const { return m_; }
    operator const Eigen::MatrixXd&() const { return m_; }
    int size() const { return static_cast<int>(m_.rows()); }

private:
    Eigen::MatrixXd m_;
};

// Exponential of a Hamiltonian generator (Omega*G symmetric); the result is
// checked symplectic.
SymplecticMatrix exp_generator(const Eigen::MatrixXd& G, double gen_tol = 1e-8);

// Physicality check: Sigma + i Omega/2 positive semidefinite within tol.
bool is_physical_covariance(const Eigen::MatrixXd& Sigma, double tol = 1e-9);

// Symplectic (Williamson) eigenvalues, ascending; vacuum convention nu = 1/2.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& Sigma);

// M = U * diag(D) * V^T with U, V orthogonal symplectic and D paired as
// (d_0..d_{N-1}, 1/d_0..1/d_{N-1}), d_i >= 1 descending.
struct BlochMessiah {
    Eigen::MatrixXd U;
    Eigen::VectorXd D;
    Eigen::MatrixXd V;
    double pairing_residual;
};
BlochMessiah bloch_messiah(const Eigen::MatrixXd& M);

// Real Schur decomposition A = O T O^T with eigenvalue blocks sorted by
// descending real part.
struct RealSchurSorted {
    Eigen::MatrixXd O;
    Eigen::MatrixXd T;
};
RealSchurSorted sorted_real_schur(const Eigen::MatrixXd& A);

// Schur decomposition of the x (upper-left) or p (lower-right) N x N block of
// a block-diagonal phase-space generator. The same orthogonal map serves both
// blocks: with G = diag(A_x, A_p) and A_p = -A_x^T, O triangularizes A_x and
// triangularizes A_p lower-quasi-triangularly with negated diagonal.
enum class PhaseBlock { x, p };
struct SchurBlock {
    Eigen::MatrixXd O;      // N x N orthogonal
    Eigen::MatrixXd T;      // N x N quasi-triangular, sorted descending Re
    int n_keep;             // leading Schur modes retained
};
SchurBlock schur_block(const Eigen::MatrixXd& G, PhaseBlock block, int n_keep);

} // namespace corrtomo
