#include "dre/coefficients.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dre {

namespace {

void require(bool cond, const std::string& rule) {
    if (!cond) throw std::invalid_argument("coefficients: " + rule);
}

}  // namespace

void PeerCoefficients::validate() const {
    require(s >= 1, "stage count must be positive");
    require(c.size() == s && B.rows() == s && B.cols() == s && A.rows() == s &&
                A.cols() == s && G.rows() == s && G.cols() == s,
            "dimension mismatch against stage count");
    require(c[s - 1] == 1.0, "last node c_s must equal 1");
    for (int i = 0; i < s; ++i) {
        require(G(i, i) != 0.0, "G must have nonzero diagonal");
        for (int j = i + 1; j < s; ++j)
            require(G(i, j) == 0.0, "G must be lower triangular");
    }
    if (kind == Kind::Rosenbrock) {
        for (int i = 0; i < s; ++i)
            require(std::abs(G(i, i) - gamma) <= 1e-14,
                    "Rosenbrock-type G diagonal must equal gamma");
    }
}

PeerCoefficients builtin_coefficients(const std::string& name) {
    PeerCoefficients p;
    if (name == "implicit-1") {
        p.kind = PeerCoefficients::Kind::Implicit;
        p.s = 1;
        p.order = 1;
        p.c = Eigen::VectorXd::Ones(1);
        p.B = Eigen::MatrixXd::Ones(1, 1);
        p.A = Eigen::MatrixXd::Zero(1, 1);
        p.G = Eigen::MatrixXd::Ones(1, 1);
        p.gamma = 1.0;
    } else if (name == "implicit-2") {
        p.kind = PeerCoefficients::Kind::Implicit;
        p.s = 2;
        p.order = 2;
        p.c = Eigen::Vector2d(0.4831632475943920, 1.0);
        p.B.resize(2, 2);
        p.B << -0.3045407685048590, 1.3045407685048591,
               -0.3045407685048590, 1.3045407685048591;
        // previous-step slope weights completing the two-step set; fixed
        // uniquely by polynomial exactness up to degree 2 given c, B, G
        p.A.resize(2, 2);
        p.A << -0.0629591447076631, 0.1303061543300917,
               -0.1370332187817362, 0.2836168095648978;
        p.G.resize(2, 2);
        p.G << 0.2584183762028040, 0.0,
               0.4376001712448750, 0.2584183762028040;
        p.gamma = 0.2584183762028040;
    } else if (name == "rosenbrock-1") {
        p.kind = PeerCoefficients::Kind::Rosenbrock;
        p.s = 1;
        p.order = 1;
        p.c = Eigen::VectorXd::Ones(1);
        p.B = Eigen::MatrixXd::Ones(1, 1);
        p.A = Eigen::MatrixXd::Ones(1, 1);
        p.G = Eigen::MatrixXd::Ones(1, 1);
        p.gamma = 1.0;
    } else if (name == "rosenbrock-2") {
        return rosenbrock2_coefficients();
    } else {
        throw std::invalid_argument("unknown coefficient set: " + name);
    }
    p.validate();
    return p;
}

PeerCoefficients rosenbrock2_coefficients() {
    const double r2 = std::sqrt(2.0);
    PeerCoefficients p;
    p.kind = PeerCoefficients::Kind::Rosenbrock;
    p.s = 2;
    p.order = 2;
    p.gamma = 1.0 - 1.0 / r2;
    p.c = Eigen::Vector2d(r2 - 1.0, 1.0);
    p.B.resize(2, 2);
    p.B << (1.0 - r2) / 2.0, (1.0 + r2) / 2.0,
           (1.0 - r2) / 2.0, (1.0 + r2) / 2.0;
    p.A.resize(2, 2);
    p.A << (1.0 - r2) / 2.0, 0.5,
           0.5 - r2, (5.0 - r2) / 2.0;
    p.G.resize(2, 2);
    p.G << p.gamma, 0.0,
           2.0 - r2, p.gamma;
    p.validate();
    return p;
}

PeerCoefficients load_coefficients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || line != "peer-coefficients 1")
        throw std::runtime_error(path + ": missing format line");
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": missing descriptor line");

    PeerCoefficients p;
    {
        std::istringstream ls(line);
        std::string tok;
        bool have_kind = false, have_s = false;
        while (ls >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(path + ": malformed descriptor token " + tok);
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "kind") {
                if (val == "implicit")
                    p.kind = PeerCoefficients::Kind::Implicit;
                else if (val == "rosenbrock")
                    p.kind = PeerCoefficients::Kind::Rosenbrock;
                else
                    throw std::runtime_error(path + ": unknown kind " + val);
                have_kind = true;
            } else if (key == "s") {
                p.s = std::stoi(val);
                have_s = true;
            } else if (key == "order") {
                p.order = std::stoi(val);
            } else {
                throw std::runtime_error(path + ": unknown key " + key);
            }
        }
        if (!have_kind || !have_s)
            throw std::runtime_error(path + ": descriptor must set kind and s");
    }
    if (p.s < 1) throw std::runtime_error(path + ": invalid stage count");

    p.c = Eigen::VectorXd::Zero(p.s);
    p.B = Eigen::MatrixXd::Zero(p.s, p.s);
    p.A = Eigen::MatrixXd::Zero(p.s, p.s);
    p.G = Eigen::MatrixXd::Zero(p.s, p.s);
    bool have_c = false, have_b = false, have_g = false;

    auto read_values = [&](double* dst, int count) {
        int got = 0;
        while (got < count) {
            double v;
            if (in >> v) {
                dst[got++] = v;
            } else {
                throw std::runtime_error(path + ": truncated value block");
            }
        }
    };

    std::string label;
    while (in >> label) {
        std::vector<double> buf(static_cast<size_t>(p.s) * p.s);
        if (label == "c:") {
            read_values(buf.data(), p.s);
            for (int i = 0; i < p.s; ++i) p.c[i] = buf[i];
            have_c = true;
        } else if (label == "b:") {
            read_values(buf.data(), p.s * p.s);
            for (int i = 0; i < p.s; ++i)
                for (int j = 0; j < p.s; ++j) p.B(i, j) = buf[i * p.s + j];
            have_b = true;
        } else if (label == "a:") {
            read_values(buf.data(), p.s * p.s);
            for (int i = 0; i < p.s; ++i)
                for (int j = 0; j < p.s; ++j) p.A(i, j) = buf[i * p.s + j];
        } else if (label == "g:") {
            read_values(buf.data(), p.s * p.s);
            for (int i = 0; i < p.s; ++i)
                for (int j = 0; j < p.s; ++j) p.G(i, j) = buf[i * p.s + j];
            have_g = true;
        } else {
            throw std::runtime_error(path + ": unknown block label " + label);
        }
    }
    if (!have_c || !have_b || !have_g)
        throw std::runtime_error(path + ": c:, b: and g: blocks are required");

    p.gamma = p.G(0, 0);
    p.validate();
    return p;
}

void save_coefficients(const std::string& path, const PeerCoefficients& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(17);
    out << "peer-coefficients 1\n";
    out << "kind="
        << (p.kind == PeerCoefficients::Kind::Implicit ? "implicit"
                                                       : "rosenbrock")
        << " s=" << p.s << " order=" << p.order << "\n";
    out << "c:\n";
    for (int i = 0; i < p.s; ++i) out << p.c[i] << (i + 1 == p.s ? "\n" : " ");
    auto dump = [&](const char* label, const Eigen::MatrixXd& m) {
        out << label << "\n";
        for (int i = 0; i < p.s; ++i) {
            for (int j = 0; j < p.s; ++j)
                out << m(i, j) << (j + 1 == p.s ? "\n" : " ");
        }
    };
    dump("b:", p.B);
    if (!p.A.isZero(0.0)) dump("a:", p.A);
    dump("g:", p.G);
}

TransformedCoefficients transform(const PeerCoefficients& p) {
    p.validate();
    TransformedCoefficients t;
    t.Ginv = p.G.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(p.s, p.s));
    t.boldA = p.A * t.Ginv;
    t.boldB = p.B * t.Ginv;
    return t;
}

}  // namespace dre
