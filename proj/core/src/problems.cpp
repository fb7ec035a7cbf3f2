#include "dre/problems.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dre/matrix_market.hpp"

namespace dre {

void DreProblem::validate() const {
    if (B.rows() != A.A0.rows() || C.cols() != A.A0.rows())
        throw std::invalid_argument("problem: B/C dimensions do not match A");
    if (X0.rank() > 0 && X0.rows() != A.A0.rows())
        throw std::invalid_argument("problem: X0 dimension does not match A");
    if (tau <= 0 || tf <= t0)
        throw std::invalid_argument("problem: invalid time grid");
    const double steps = (tf - t0) / tau;
    if (std::abs(steps - std::round(steps)) > 1e-8 * steps)
        throw std::invalid_argument("problem: tau must divide tf - t0");
}

DreProblem fdm_generate(const FdmSpec& spec) {
    if (spec.n0 < 2) throw std::invalid_argument("fdm_generate: n0 < 2");
    const int n0 = spec.n0;
    const Eigen::Index n = static_cast<Eigen::Index>(n0) * n0;
    const double h = spec.h();
    const double diff = 1.0 / (h * h);
    const double con1 = spec.f1 / (2.0 * h);
    const double con2 = spec.f2 / (2.0 * h);

    auto idx = [n0](int i, int j) {
        return static_cast<Eigen::Index>(j) * n0 + i;  // xi_1 fastest
    };

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * static_cast<size_t>(n));
    for (int j = 0; j < n0; ++j)
        for (int i = 0; i < n0; ++i) {
            const Eigen::Index row = idx(i, j);
            trips.emplace_back(row, row, -4.0 * diff - spec.f3);
            if (i > 0) trips.emplace_back(row, idx(i - 1, j), diff + con1);
            if (i < n0 - 1) trips.emplace_back(row, idx(i + 1, j), diff - con1);
            if (j > 0) trips.emplace_back(row, idx(i, j - 1), diff + con2);
            if (j < n0 - 1) trips.emplace_back(row, idx(i, j + 1), diff - con2);
        }
    SparseMatrix a0(n, n);
    a0.setFromTriplets(trips.begin(), trips.end());
    a0.makeCompressed();

    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(n);
    for (int j = 0; j < n0; ++j)
        for (int i = 0; i < n0; ++i) {
            const double x1 = (i + 1) * h, x2 = (j + 1) * h;
            if (spec.input.contains(x1, x2)) b[idx(i, j)] = 1.0;
            if (spec.output.contains(x1, x2)) c[idx(i, j)] = 1.0;
        }
    if (b.isZero(0.0))
        throw std::invalid_argument("fdm_generate: input region is empty");
    if (c.isZero(0.0))
        throw std::invalid_argument("fdm_generate: output region is empty");

    DreProblem p;
    p.A.A0 = std::move(a0);
    p.B = b;
    p.C = c;
    p.X0 = LdlPair::zero(n);
    p.validate();
    return p;
}

DreProblem make_ltv(DreProblem p, double amplitude, double frequency) {
    p.A.mode = TimeVaryingOperator::Mode::ScalarScaled;
    p.A.mu = [amplitude, frequency](double t) {
        return amplitude * std::sin(frequency * M_PI * t) + 1.0;
    };
    return p;
}

DreProblem load_problem(const std::string& dir) {
    namespace fs = std::filesystem;
    auto need = [&](const std::string& name) {
        fs::path f = fs::path(dir) / name;
        if (!fs::exists(f))
            throw std::runtime_error("load_problem: missing " + f.string());
        return f.string();
    };

    DreProblem p;
    p.A.A0 = read_matrix_market_sparse(need("A.mtx"));
    p.B = read_matrix_market_dense(need("B.mtx"));
    p.C = read_matrix_market_dense(need("C.mtx"));

    fs::path l = fs::path(dir) / "X0_L.mtx", d = fs::path(dir) / "X0_D.mtx";
    if (fs::exists(l) != fs::exists(d))
        throw std::runtime_error("load_problem: X0_L.mtx and X0_D.mtx must "
                                 "come together");
    p.X0 = fs::exists(l) ? LdlPair(read_matrix_market_dense(l.string()),
                                   read_matrix_market_dense(d.string()))
                         : LdlPair::zero(p.A.A0.rows());

    double amplitude = 0.75, frequency = 8.0;
    bool ltv = false;
    std::ifstream cfg(need("problem.cfg"));
    std::string line;
    while (std::getline(cfg, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("load_problem: malformed line: " + line);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "t0") p.t0 = std::stod(val);
        else if (key == "tf") p.tf = std::stod(val);
        else if (key == "tau") p.tau = std::stod(val);
        else if (key == "mu") {
            if (val == "sin") ltv = true;
            else if (val != "constant")
                throw std::runtime_error("load_problem: unknown mu " + val);
        } else if (key == "amplitude") amplitude = std::stod(val);
        else if (key == "frequency") frequency = std::stod(val);
        else throw std::runtime_error("load_problem: unknown key " + key);
    }
    if (ltv) p = make_ltv(std::move(p), amplitude, frequency);
    p.validate();
    return p;
}

void save_problem(const std::string& dir, const DreProblem& p) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_matrix_market_sparse((fs::path(dir) / "A.mtx").string(), p.A.A0);
    write_matrix_market_dense((fs::path(dir) / "B.mtx").string(), p.B);
    write_matrix_market_dense((fs::path(dir) / "C.mtx").string(), p.C);
    if (p.X0.rank() > 0) {
        write_matrix_market_dense((fs::path(dir) / "X0_L.mtx").string(),
                                  p.X0.L);
        write_matrix_market_dense((fs::path(dir) / "X0_D.mtx").string(),
                                  p.X0.D);
    }
    std::ofstream cfg(fs::path(dir) / "problem.cfg");
    cfg.precision(17);
    cfg << "t0=" << p.t0 << "\ntf=" << p.tf << "\ntau=" << p.tau << "\n";
    cfg << "mu=" << (p.A.autonomous() ? "constant" : "sin") << "\n";
}

}  // namespace dre
