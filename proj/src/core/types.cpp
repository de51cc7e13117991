#include "delayrep/core/types.hpp"

namespace delayrep {

Matrix block_diag(const std::vector<Matrix>& blocks) {
    Index rows = 0;
    Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out = Matrix::Zero(rows, cols);
    Index r = 0;
    Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

Matrix vstack(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) return Matrix(0, 0);
    const Index cols = blocks.front().cols();
    Index rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) throw DimensionError("vstack: column mismatch " + shape_str(b));
        rows += b.rows();
    }
    Matrix out(rows, cols);
    Index r = 0;
    for (const auto& b : blocks) {
        out.middleRows(r, b.rows()) = b;
        r += b.rows();
    }
    return out;
}

Matrix hstack(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) return Matrix(0, 0);
    const Index rows = blocks.front().rows();
    Index cols = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows) throw DimensionError("hstack: row mismatch " + shape_str(b));
        cols += b.cols();
    }
    Matrix out(rows, cols);
    Index c = 0;
    for (const auto& b : blocks) {
        out.middleCols(c, b.cols()) = b;
        c += b.cols();
    }
    return out;
}

}  // namespace delayrep
