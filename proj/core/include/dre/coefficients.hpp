#ifndef DRE_COEFFICIENTS_HPP
#define DRE_COEFFICIENTS_HPP

#include <Eigen/Dense>
#include <string>

namespace dre {

/// Coefficient set of a two-step peer method.  For one-step implicit schemes
/// A is zero; for Rosenbrock-type schemes all diagonal entries of G equal
/// gamma.
struct PeerCoefficients {
    enum class Kind { Implicit, Rosenbrock };

    Kind kind = Kind::Implicit;
    int s = 0;
    int order = 0;
    Eigen::VectorXd c;  // nodes, c[s-1] == 1
    Eigen::MatrixXd B;
    Eigen::MatrixXd A;
    Eigen::MatrixXd G;  // lower triangular, nonzero diagonal
    double gamma = 0.0;

    /// Throws std::invalid_argument naming the violated rule.
    void validate() const;
};

/// Transformed coefficients of the auxiliary-variable scheme:
/// Ginv = G^{-1}, boldA = A G^{-1}, boldB = B G^{-1}.
struct TransformedCoefficients {
    Eigen::MatrixXd Ginv;
    Eigen::MatrixXd boldA;
    Eigen::MatrixXd boldB;
};

/// Built-in sets: "implicit-1", "implicit-2", "rosenbrock-1".
PeerCoefficients builtin_coefficients(const std::string& name);

/// Two-stage second-order Rosenbrock-type set (c1 = sqrt(2)-1,
/// gamma = 1 - 1/sqrt(2)), used by the dense reference integrator and
/// available to the harness as "rosenbrock-2".
PeerCoefficients rosenbrock2_coefficients();

/// Loads and validates a coefficient file (line-oriented text format).
PeerCoefficients load_coefficients(const std::string& path);

void save_coefficients(const std::string& path, const PeerCoefficients& p);

TransformedCoefficients transform(const PeerCoefficients& p);

}  // namespace dre

#endif
