#include "krs/rational.hpp"

namespace krs {

Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(boost::multiprecision::cpp_int(s));
        }
        boost::multiprecision::cpp_int p(s.substr(0, slash));
        boost::multiprecision::cpp_int q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rat(p, q);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse rational: '" + s + "'");
    }
}

std::string format_rational(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

bool solve_linear(RatMat A, RatVec b, RatVec& x) {
    const int n = static_cast<int>(A.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row) {
            if (A[row][col] != 0) { pivot = row; break; }
        }
        if (pivot < 0) return false;
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = 0; row < n; ++row) {
            if (row == col || A[row][col] == 0) continue;
            Rat factor = A[row][col] / A[col][col];
            for (int k = col; k < n; ++k) A[row][k] -= factor * A[col][k];
            b[row] -= factor * b[col];
        }
    }
    x.assign(n, Rat(0));
    for (int i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return true;
}

int rank(RatMat A) {
    if (A.empty()) return 0;
    const int rows = static_cast<int>(A.size());
    const int cols = static_cast<int>(A[0].size());
    int r = 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int pivot = -1;
        for (int row = r; row < rows; ++row) {
            if (A[row][col] != 0) { pivot = row; break; }
        }
        if (pivot < 0) continue;
        std::swap(A[r], A[pivot]);
        for (int row = r + 1; row < rows; ++row) {
            if (A[row][col] == 0) continue;
            Rat factor = A[row][col] / A[r][col];
            for (int k = col; k < cols; ++k) A[row][k] -= factor * A[r][k];
        }
        ++r;
    }
    return r;
}

int affine_rank(const std::vector<RatVec>& points) {
    if (points.empty()) return -1;
    RatMat diffs;
    for (size_t i = 1; i < points.size(); ++i) {
        RatVec d(points[i].size());
        for (size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
        diffs.push_back(std::move(d));
    }
    return rank(std::move(diffs));
}

RatVec kernel_direction(const RatMat& A, int n) {
    // Row-reduce and read off the single free variable.
    RatMat M = A;
    const int rows = static_cast<int>(M.size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < n && r < rows; ++col) {
        int pivot = -1;
        for (int row = r; row < rows; ++row) {
            if (M[row][col] != 0) { pivot = row; break; }
        }
        if (pivot < 0) continue;
        std::swap(M[r], M[pivot]);
        for (int row = 0; row < rows; ++row) {
            if (row == r || M[row][col] == 0) continue;
            Rat factor = M[row][col] / M[r][col];
            for (int k = col; k < n; ++k) M[row][k] -= factor * M[r][k];
        }
        pivot_col.push_back(col);
        ++r;
    }
    if (r != n - 1) return {};
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = -1;
    for (int c = 0; c < n; ++c) {
        if (!is_pivot[c]) { free_col = c; break; }
    }
    RatVec x(n, Rat(0));
    x[free_col] = 1;
    for (int i = r - 1; i >= 0; --i) {
        int pc = pivot_col[i];
        Rat s = 0;
        for (int c = pc + 1; c < n; ++c) s += M[i][c] * x[c];
        x[pc] = -s / M[i][pc];
    }
    return x;
}

}  // namespace krs
