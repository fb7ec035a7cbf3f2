#ifndef DRE_MATRIX_MARKET_HPP
#define DRE_MATRIX_MARKET_HPP

#include <string>

#include "dre/operators.hpp"

namespace dre {

/// Reads a Matrix Market coordinate file (real, general or symmetric).
SparseMatrix read_matrix_market_sparse(const std::string& path);

/// Reads a Matrix Market array file (real, general, column-major).
Eigen::MatrixXd read_matrix_market_dense(const std::string& path);

void write_matrix_market_sparse(const std::string& path, const SparseMatrix& a);
void write_matrix_market_dense(const std::string& path, const Eigen::MatrixXd& a);

}  // namespace dre

#endif
