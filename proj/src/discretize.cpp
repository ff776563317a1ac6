#include "greybox/discretize.hpp"

#include <cmath>
#include <stdexcept>

#include "greybox/errors.hpp"

namespace greybox {

namespace {

// Pade [13/13] numerator coefficients (Higham 2005); theta_13 is the
// 1-norm threshold below which the approximant is accurate to double
// precision without further scaling.
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

// Gaussian elimination with partial pivoting, dividing by the pivot rather
// than multiplying by its reciprocal (Eigen's triangular solve does the
// latter), so fixed points like exp(0) = I come out bit-exact.
Eigen::MatrixXd solve_linear(Eigen::MatrixXd a, Eigen::MatrixXd b) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = k;
        for (Eigen::Index r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        if (a(piv, k) == 0.0)
            throw NumericError("matrix_exponential: singular Pade denominator");
        if (piv != k) {
            a.row(piv).swap(a.row(k));
            b.row(piv).swap(b.row(k));
        }
        for (Eigen::Index r = k + 1; r < n; ++r) {
            const double f = a(r, k) / a(k, k);
            if (f == 0.0) continue;
            a.row(r).tail(n - k - 1) -= f * a.row(k).tail(n - k - 1);
            b.row(r) -= f * b.row(k);
        }
    }
    for (Eigen::Index k = n; k-- > 0;) {
        for (Eigen::Index r = k + 1; r < n; ++r) b.row(k) -= a(k, r) * b.row(r);
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(k, j) /= a(k, k);
    }
    return b;
}

Eigen::MatrixXd expm_pade13(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a4 * a2;

    Eigen::MatrixXd u = a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
                             kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
                             kPade13[1] * ident);
    Eigen::MatrixXd v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
                        kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 +
                        kPade13[0] * ident;

    // (v - u) x = (v + u)
    return solve_linear(v - u, v + u);
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("matrix_exponential: matrix must be square");
    if (!m.allFinite())
        throw std::invalid_argument("matrix_exponential: matrix has non-finite entries");
    if (m.rows() == 0) return Eigen::MatrixXd(0, 0);

    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    }

    Eigen::MatrixXd scaled = m / std::exp2(squarings);
    Eigen::MatrixXd e = expm_pade13(scaled);
    for (int i = 0; i < squarings; ++i) e = e * e;
    return e;
}

DiscreteModel discretize_zoh(const StateSpaceModel& model, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("discretize_zoh: dt must be > 0");

    const Eigen::Index n = model.n_states();
    const Eigen::Index m = model.n_inputs();

    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = model.a * dt;
    aug.topRightCorner(n, m) = model.b * dt;

    const Eigen::MatrixXd e = matrix_exponential(aug);

    DiscreteModel d;
    d.ad = e.topLeftCorner(n, n);
    d.bd = e.topRightCorner(n, m);
    d.c = model.c;
    d.d = model.d;
    d.dt = dt;
    return d;
}

}  // namespace greybox
