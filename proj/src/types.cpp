#include "dmkr/types.hpp"

#include <sstream>

namespace dmkr {

bool is_hermitian(const Matrix& X, double tol) {
    if (X.rows() != X.cols()) return false;
    return (X - X.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& X, double tol) {
    if (X.rows() != X.cols()) return false;
    Matrix d = X * X.adjoint();
    d.diagonal().array() -= 1.0;
    return d.cwiseAbs().maxCoeff() <= tol;
}

void validate_state(const Matrix& rho, double herm_tol, double trace_tol, double psd_tol) {
    auto fail = [](const std::string& what) { throw std::runtime_error("invalid state: " + what); };
    if (rho.rows() != rho.cols()) fail("not square");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol) {
        std::ostringstream os;
        os << "hermiticity violation " << herm;
        fail(os.str());
    }
    const double tr_err = std::abs(rho.trace() - Cplx(1.0, 0.0));
    if (tr_err > trace_tol) {
        std::ostringstream os;
        os << "trace deviates from 1 by " << tr_err;
        fail(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -psd_tol) {
        std::ostringstream os;
        os << "negative eigenvalue " << min_eig;
        fail(os.str());
    }
}

}  // namespace dmkr
