// Independent reference implementations used to cross-check the library.
// Nothing here may call the production code paths it verifies.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Scaled 200-term Taylor series for exp(M). Deliberately naive: scale until
// the 1-norm is below 1/2, sum the series, square back up.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    while (norm > 0.5) {
        norm /= 2.0;
        ++squarings;
    }
    const Eigen::MatrixXd scaled = m / std::pow(2.0, squarings);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 200; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline double max_eigenvalue_real_part(const Eigen::MatrixXd& a) {
    const Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    return es.eigenvalues().real().maxCoeff();
}

// Closed-form LTI trajectory for a constant input: x(t) = x_ss + e^{At}(x0 - x_ss)
// with the matrix exponential taken through the eigendecomposition, a route
// disjoint from the library's Pade core.
inline Eigen::MatrixXd closed_form_constant_input(const Eigen::MatrixXd& a,
                                                  const Eigen::MatrixXd& b,
                                                  const Eigen::VectorXd& x0,
                                                  const Eigen::VectorXd& u,
                                                  const std::vector<double>& times) {
    const Eigen::VectorXd x_ss = a.partialPivLu().solve(-(b * u));
    const Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::VectorXcd lambda = es.eigenvalues();
    const Eigen::VectorXcd w = v.partialPivLu().solve((x0 - x_ss).cast<std::complex<double>>());

    Eigen::MatrixXd states(a.rows(), static_cast<Eigen::Index>(times.size()));
    for (size_t k = 0; k < times.size(); ++k) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(a.rows());
        for (Eigen::Index i = 0; i < lambda.size(); ++i)
            acc += w(i) * std::exp(lambda(i) * times[k]) * v.col(i);
        states.col(static_cast<Eigen::Index>(k)) = x_ss + acc.real();
    }
    return states;
}

struct GridMinimum {
    std::vector<double> x;
    double value = 0.0;
};

// Brute-force minimum of a 2-D function on [lo, hi]^2 over an n x n grid.
inline GridMinimum grid_min_2d(const std::function<double(double, double)>& f, double lo,
                               double hi, int n) {
    GridMinimum best;
    best.value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = lo + (hi - lo) * i / (n - 1.0);
            const double y = lo + (hi - lo) * j / (n - 1.0);
            const double v = f(x, y);
            if (v < best.value) {
                best.value = v;
                best.x = {x, y};
            }
        }
    }
    return best;
}

// Bisection root of a monotone-bracketed scalar function.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Dense 1-D scan refined by bisection on the numerical derivative.
inline double line_min(const std::function<double(double)>& f, double lo, double hi,
                       int n = 20001) {
    double best_x = lo;
    double best_v = f(lo);
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1.0);
        const double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    const double h = (hi - lo) / (n - 1.0);
    const auto deriv = [&](double x) { return (f(x + 1e-7) - f(x - 1e-7)) / 2e-7; };
    const double a = std::max(lo, best_x - 2.0 * h);
    const double b = std::min(hi, best_x + 2.0 * h);
    if (deriv(a) < 0.0 && deriv(b) > 0.0) return bisect(deriv, a, b);
    return best_x;
}

inline double rosenbrock(double x, double y) {
    return 100.0 * (y - x * x) * (y - x * x) + (1.0 - x) * (1.0 - x);
}

inline double rastrigin2(double x, double y) {
    constexpr double kPi = 3.14159265358979323846;
    return 20.0 + x * x - 10.0 * std::cos(2.0 * kPi * x) + y * y -
           10.0 * std::cos(2.0 * kPi * y);
}

// Two well-separated minima, the left one deeper.
inline double two_well(double x) { return (x * x - 1.0) * (x * x - 1.0) + 0.2 * x; }

}  // namespace oracles
