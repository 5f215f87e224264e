#include "torheight/linalg.hpp"

#include <algorithm>

namespace torheight {

namespace {

size_t cols(const QMat& m) { return m.empty() ? 0 : m[0].size(); }

// Row echelon reduction in place; returns pivot columns.
std::vector<size_t> rowReduce(QMat& m) {
    std::vector<size_t> pivots;
    size_t nrows = m.size(), ncols = cols(m);
    size_t row = 0;
    for (size_t col = 0; col < ncols && row < nrows; ++col) {
        size_t sel = row;
        while (sel < nrows && m[sel][col] == 0) ++sel;
        if (sel == nrows) continue;
        std::swap(m[row], m[sel]);
        Rat inv = 1 / m[row][col];
        for (size_t j = col; j < ncols; ++j) m[row][j] *= inv;
        for (size_t i = 0; i < nrows; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Rat f = m[i][col];
            for (size_t j = col; j < ncols; ++j) m[i][j] -= f * m[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

size_t rankOf(QMat m) { return rowReduce(m).size(); }

size_t affineRank(const QMat& points) {
    if (points.size() <= 1) return 0;
    QMat diffs;
    for (size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
    return rankOf(std::move(diffs));
}

Rat determinant(QMat m) {
    size_t n = m.size();
    if (n == 0) return 1;
    if (cols(m) != n) throw std::invalid_argument("determinant of non-square matrix");
    Rat det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && m[sel][col] == 0) ++sel;
        if (sel == n) return 0;
        if (sel != col) {
            std::swap(m[sel], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rat inv = 1 / m[col][col];
        for (size_t i = col + 1; i < n; ++i) {
            if (m[i][col] == 0) continue;
            Rat f = m[i][col] * inv;
            for (size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
        }
    }
    return det;
}

QMat kernelBasis(const QMat& m) {
    size_t ncols = cols(m);
    QMat r = m;
    std::vector<size_t> pivots = rowReduce(r);
    std::vector<bool> isPivot(ncols, false);
    for (size_t p : pivots) isPivot[p] = true;
    QMat basis;
    for (size_t freeCol = 0; freeCol < ncols; ++freeCol) {
        if (isPivot[freeCol]) continue;
        QVec v(ncols, Rat(0));
        v[freeCol] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][freeCol];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVec> solveLinear(const QMat& m, const QVec& rhs) {
    if (m.size() != rhs.size()) throw std::invalid_argument("solveLinear: size mismatch");
    size_t ncols = cols(m);
    QMat aug = m;
    for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
    std::vector<size_t> pivots;
    {
        // reduce but keep the augmented column out of the pivot set
        size_t nrows = aug.size();
        size_t row = 0;
        for (size_t col = 0; col < ncols && row < nrows; ++col) {
            size_t sel = row;
            while (sel < nrows && aug[sel][col] == 0) ++sel;
            if (sel == nrows) continue;
            std::swap(aug[row], aug[sel]);
            Rat inv = 1 / aug[row][col];
            for (size_t j = col; j <= ncols; ++j) aug[row][j] *= inv;
            for (size_t i = 0; i < nrows; ++i) {
                if (i == row || aug[i][col] == 0) continue;
                Rat f = aug[i][col];
                for (size_t j = col; j <= ncols; ++j) aug[i][j] -= f * aug[row][j];
            }
            pivots.push_back(col);
            ++row;
        }
        for (size_t i = row; i < nrows; ++i)
            if (aug[i][ncols] != 0) return std::nullopt;
    }
    QVec x(ncols, Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][ncols];
    return x;
}

ZVec primitiveVector(const ZVec& v) {
    Int g = 0;
    for (const auto& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    if (g == 0) throw std::invalid_argument("zero has no primitive representative");
    ZVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
    return out;
}

ZVec primitiveOfRational(const QVec& v) {
    Int lcm = 1;
    for (const auto& e : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.get_den().get_mpz_t());
    ZVec scaled(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        Rat q = v[i] * Rat(lcm);
        scaled[i] = q.get_num();
    }
    return primitiveVector(scaled);
}

ZMat integerKernelBasis(const ZMat& m, size_t ncols) {
    // Unimodular column elimination; columns of V paired with zero columns
    // of the work matrix form a basis of the integer kernel.
    ZMat work(m.begin(), m.end());
    for (auto& row : work)
        if (row.size() != ncols) throw std::invalid_argument("integerKernelBasis: bad row size");
    // V as list of columns
    std::vector<ZVec> V(ncols, ZVec(ncols, Int(0)));
    for (size_t j = 0; j < ncols; ++j) V[j][j] = 1;

    auto colEntry = [&](size_t i, size_t j) -> Int& { return work[i][j]; };
    auto swapCols = [&](size_t a, size_t b) {
        for (auto& row : work) std::swap(row[a], row[b]);
        std::swap(V[a], V[b]);
    };
    auto addColMultiple = [&](size_t dst, size_t src, const Int& q) {
        for (auto& row : work) row[dst] -= q * row[src];
        for (size_t i = 0; i < ncols; ++i) V[dst][i] -= q * V[src][i];
    };

    size_t pivotCol = 0;
    for (size_t row = 0; row < work.size() && pivotCol < ncols; ++row) {
        // any nonzero entry in this row among columns >= pivotCol?
        bool any = false;
        for (size_t j = pivotCol; j < ncols; ++j)
            if (colEntry(row, j) != 0) { any = true; break; }
        if (!any) continue;
        // gcd elimination across the row
        while (true) {
            size_t best = ncols;
            for (size_t j = pivotCol; j < ncols; ++j) {
                if (colEntry(row, j) == 0) continue;
                if (best == ncols || cmp(abs(colEntry(row, j)), abs(colEntry(row, best))) < 0) best = j;
            }
            if (best != pivotCol) swapCols(pivotCol, best);
            bool done = true;
            for (size_t j = pivotCol + 1; j < ncols; ++j) {
                if (colEntry(row, j) == 0) continue;
                Int q = colEntry(row, j) / colEntry(row, pivotCol);  // truncated division
                addColMultiple(j, pivotCol, q);
                if (colEntry(row, j) != 0) done = false;
            }
            if (done) break;
        }
        ++pivotCol;
    }
    ZMat kernel;
    for (size_t j = pivotCol; j < ncols; ++j) kernel.push_back(V[j]);
    return kernel;
}

ZMat saturatedLatticeBasis(const QMat& spanRows, size_t ambientRank) {
    QMat nonzero;
    for (const auto& r : spanRows) {
        if (r.size() != ambientRank) throw std::invalid_argument("saturatedLatticeBasis: rank mismatch");
        if (!isZero(r)) nonzero.push_back(r);
    }
    if (nonzero.empty()) return {};
    QMat ker = kernelBasis(nonzero);
    if (ker.empty()) {
        ZMat id(ambientRank, ZVec(ambientRank, Int(0)));
        for (size_t i = 0; i < ambientRank; ++i) id[i][i] = 1;
        return id;
    }
    ZMat kz;
    for (const auto& k : ker) kz.push_back(primitiveOfRational(k));
    return integerKernelBasis(kz, ambientRank);
}

std::optional<Int> hermiteIndex(ZMat rows, size_t ambientRank) {
    // Integer row elimination to (lower) echelon form; index = product of pivots.
    Int index = 1;
    size_t row = 0;
    for (size_t col = 0; col < ambientRank; ++col) {
        while (true) {
            size_t best = rows.size();
            for (size_t i = row; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                if (best == rows.size() || cmp(abs(rows[i][col]), abs(rows[best][col])) < 0) best = i;
            }
            if (best == rows.size()) break;  // column clear below
            std::swap(rows[row], rows[best]);
            bool clean = true;
            for (size_t i = row + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                Int q = rows[i][col] / rows[row][col];
                for (size_t j = 0; j < ambientRank; ++j) rows[i][j] -= q * rows[row][j];
                if (rows[i][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (row < rows.size() && rows[row][col] != 0) {
            index *= abs(rows[row][col]);
            ++row;
        } else if (row >= rows.size() || rows[row][col] == 0) {
            // no pivot in this column: rank deficient
            return std::nullopt;
        }
    }
    return index;
}

std::optional<Int> latticeIndex(const ZMat& generators, size_t ambientRank) {
    for (const auto& g : generators)
        if (g.size() != ambientRank) throw std::invalid_argument("latticeIndex: rank mismatch");
    return hermiteIndex(generators, ambientRank);
}

std::optional<Int> latticeIndexInBasis(const ZMat& latticeBasis, const QMat& generators) {
    size_t r = latticeBasis.size();
    if (r == 0) return Int(1);
    size_t n = latticeBasis[0].size();
    // coordinates of each generator w.r.t. the basis: solve B^T x = g
    QMat bt(n, QVec(r));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < n; ++j) bt[j][i] = Rat(latticeBasis[i][j]);
    ZMat coords;
    for (const auto& g : generators) {
        auto x = solveLinear(bt, g);
        if (!x) throw std::invalid_argument("generator outside the target lattice span");
        ZVec row(r);
        for (size_t i = 0; i < r; ++i) {
            if ((*x)[i].get_den() != 1)
                throw std::invalid_argument("generator not in the target lattice");
            row[i] = (*x)[i].get_num();
        }
        coords.push_back(std::move(row));
    }
    return hermiteIndex(std::move(coords), r);
}

}  // namespace torheight
