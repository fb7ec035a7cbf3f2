#include "dre/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dre {

namespace {

struct MmHeader {
    bool coordinate = false;
    bool symmetric = false;
};

MmHeader read_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw std::runtime_error(path + ": missing MatrixMarket banner");
    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    MmHeader h;
    h.coordinate = lower.find("coordinate") != std::string::npos;
    if (!h.coordinate && lower.find("array") == std::string::npos)
        throw std::runtime_error(path + ": unsupported MatrixMarket format");
    if (lower.find("real") == std::string::npos &&
        lower.find("integer") == std::string::npos)
        throw std::runtime_error(path + ": only real matrices supported");
    h.symmetric = lower.find("symmetric") != std::string::npos;
    return h;
}

std::string next_data_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '%') continue;
        return line;
    }
    return {};
}

}  // namespace

SparseMatrix read_matrix_market_sparse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    MmHeader h = read_header(in, path);
    if (!h.coordinate)
        throw std::runtime_error(path + ": expected coordinate format");

    std::istringstream sz(next_data_line(in));
    Eigen::Index rows, cols;
    long nnz;
    if (!(sz >> rows >> cols >> nnz))
        throw std::runtime_error(path + ": malformed size line");

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(h.symmetric ? 2 * nnz : nnz));
    for (long e = 0; e < nnz; ++e) {
        std::istringstream ls(next_data_line(in));
        Eigen::Index i, j;
        double v;
        if (!(ls >> i >> j >> v))
            throw std::runtime_error(path + ": malformed entry line");
        trips.emplace_back(i - 1, j - 1, v);
        if (h.symmetric && i != j) trips.emplace_back(j - 1, i - 1, v);
    }
    SparseMatrix a(rows, cols);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();
    return a;
}

Eigen::MatrixXd read_matrix_market_dense(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    MmHeader h = read_header(in, path);
    if (h.coordinate)
        throw std::runtime_error(path + ": expected array format");

    std::istringstream sz(next_data_line(in));
    Eigen::Index rows, cols;
    if (!(sz >> rows >> cols))
        throw std::runtime_error(path + ": malformed size line");
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        // symmetric array files store the lower triangle only
        for (Eigen::Index i = h.symmetric ? j : 0; i < rows; ++i) {
            std::istringstream ls(next_data_line(in));
            if (!(ls >> a(i, j)))
                throw std::runtime_error(path + ": malformed value line");
            if (h.symmetric && i != j) a(j, i) = a(i, j);
        }
    return a;
}

void write_matrix_market_sparse(const std::string& path, const SparseMatrix& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << " " << a.cols() << " " << a.nonZeros() << "\n";
    out.precision(17);
    for (Eigen::Index r = 0; r < a.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a, r); it; ++it)
            out << it.row() + 1 << " " << it.col() + 1 << " " << it.value()
                << "\n";
}

void write_matrix_market_dense(const std::string& path,
                               const Eigen::MatrixXd& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << " " << a.cols() << "\n";
    out.precision(17);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) out << a(i, j) << "\n";
}

}  // namespace dre
