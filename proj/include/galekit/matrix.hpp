#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace galekit {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int abs(const Int& a) { return boost::multiprecision::abs(a); }

// floor division, denominator must be nonzero
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

// gcd of all entries, nonnegative; 0 for the zero vector
inline Int content(const IntVec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    return g;
}

// divide by the content; primitive vector keeps the direction
inline IntVec make_primitive(IntVec v) {
    Int g = content(v);
    if (g > 1)
        for (Int& x : v) x /= g;
    return v;
}

inline bool is_zero_vec(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

// Dense exact integer matrix, row-major.
class IntMat {
public:
    IntMat() = default;
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, Int(0)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("IntMat: negative dimension");
    }
    IntMat(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = int(init.size());
        cols_ = rows_ ? int(init.begin()->size()) : 0;
        a_.reserve(size_t(rows_) * cols_);
        for (const auto& row : init) {
            if (int(row.size()) != cols_) throw std::invalid_argument("IntMat: ragged initializer");
            for (long long x : row) a_.emplace_back(x);
        }
    }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Int& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const IntMat& o) const { return !(*this == o); }

    IntVec row(int i) const {
        IntVec v(cols_);
        for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
        return v;
    }
    IntVec col(int j) const {
        IntVec v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_row(int i, const IntVec& v) {
        for (int j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }

    IntMat transpose() const {
        IntMat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMat mul(const IntMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("IntMat::mul: shape mismatch");
        IntMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Int& x = (*this)(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }

    IntVec mul_vec(const IntVec& v) const {
        if (int(v.size()) != cols_) throw std::invalid_argument("IntMat::mul_vec: shape mismatch");
        IntVec r(rows_, Int(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    // submatrix of the columns indexed by I
    IntMat cols_selected(const std::vector<int>& idx) const {
        IntMat r(rows_, int(idx.size()));
        for (int i = 0; i < rows_; ++i)
            for (size_t j = 0; j < idx.size(); ++j) r(i, int(j)) = (*this)(i, idx[j]);
        return r;
    }

    // submatrix of the complementary columns
    IntMat cols_dropped(const std::vector<int>& idx) const {
        std::vector<char> drop(cols_, 0);
        for (int j : idx) drop[j] = 1;
        std::vector<int> keep;
        for (int j = 0; j < cols_; ++j)
            if (!drop[j]) keep.push_back(j);
        return cols_selected(keep);
    }

    // upper s rows
    IntMat top_rows(int s) const {
        IntMat r(s, cols_);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
        return r;
    }

    // lower s rows
    IntMat bottom_rows(int s) const {
        IntMat r(s, cols_);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(rows_ - s + i, j);
        return r;
    }

    std::vector<IntVec> columns() const {
        std::vector<IntVec> v;
        v.reserve(cols_);
        for (int j = 0; j < cols_; ++j) v.push_back(col(j));
        return v;
    }

    std::string to_string() const {
        std::string s;
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) {
                if (j) s += ' ';
                s += (*this)(i, j).str();
            }
            s += '\n';
        }
        return s;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

inline IntMat from_columns(int ambient, const std::vector<IntVec>& cols) {
    IntMat m(ambient, int(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < ambient; ++i) m(i, int(j)) = cols[j][i];
    return m;
}

inline IntMat from_rows(const std::vector<IntVec>& rows, int cols) {
    IntMat m(int(rows.size()), cols);
    for (size_t i = 0; i < rows.size(); ++i) m.set_row(int(i), rows[i]);
    return m;
}

// Dense exact rational matrix.
class RatMat {
public:
    RatMat() = default;
    RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, Rat(0)) {}

    static RatMat identity(int n) {
        RatMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static RatMat from_int(const IntMat& m) {
        RatMat r(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
        return r;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Rat& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
    bool operator==(const RatMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    RatMat mul(const RatMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("RatMat::mul: shape mismatch");
        RatMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rat& x = (*this)(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }

    IntMat mul_int(const IntMat& o) const {
        RatMat r = mul(RatMat::from_int(o));
        IntMat z(r.rows(), r.cols());
        for (int i = 0; i < r.rows(); ++i)
            for (int j = 0; j < r.cols(); ++j) {
                if (boost::multiprecision::denominator(r(i, j)) != 1)
                    throw std::runtime_error("RatMat::mul_int: non-integer result");
                z(i, j) = boost::multiprecision::numerator(r(i, j));
            }
        return z;
    }

    bool is_integral() const {
        for (const Rat& x : a_)
            if (boost::multiprecision::denominator(x) != 1) return false;
        return true;
    }

    IntMat to_int() const {
        IntMat z(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) {
                if (boost::multiprecision::denominator((*this)(i, j)) != 1)
                    throw std::runtime_error("RatMat::to_int: non-integer entry");
                z(i, j) = boost::multiprecision::numerator((*this)(i, j));
            }
        return z;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

// |det| computed fraction-free (Bareiss); exact for any size we meet
inline Int det(const IntMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: non-square matrix");
    int n = m.rows();
    if (n == 0) return 1;
    IntMat a = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

inline Int det_abs(const IntMat& m) { return abs(det(m)); }

inline int rank(const IntMat& m) {
    RatMat a = RatMat::from_int(m);
    int r = 0;
    for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
        int p = -1;
        for (int i = r; i < a.rows(); ++i)
            if (a(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        for (int j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(p, j));
        for (int i = r + 1; i < a.rows(); ++i) {
            if (a(i, c) == 0) continue;
            Rat f = a(i, c) / a(r, c);
            for (int j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return r;
}

// Solve A x = b exactly, A square nonsingular.
inline RatVec solve_rational(const IntMat& A, const RatVec& b) {
    if (A.rows() != A.cols() || int(b.size()) != A.rows())
        throw std::invalid_argument("solve_rational: shape mismatch");
    int n = A.rows();
    RatMat a = RatMat::from_int(A);
    RatVec x = b;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (a(i, c) != 0) { p = i; break; }
        if (p < 0) throw std::runtime_error("solve_rational: singular matrix");
        for (int j = 0; j < n; ++j) std::swap(a(c, j), a(p, j));
        std::swap(x[c], x[p]);
        for (int i = c + 1; i < n; ++i) {
            if (a(i, c) == 0) continue;
            Rat f = a(i, c) / a(c, c);
            for (int j = c; j < n; ++j) a(i, j) -= f * a(c, j);
            x[i] -= f * x[c];
        }
    }
    RatVec out(n);
    for (int i = n - 1; i >= 0; --i) {
        Rat s = x[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * out[j];
        out[i] = s / a(i, i);
    }
    return out;
}

inline RatMat inverse(const IntMat& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("inverse: non-square matrix");
    int n = A.rows();
    RatMat inv(n, n);
    for (int j = 0; j < n; ++j) {
        RatVec e(n, Rat(0));
        e[j] = 1;
        RatVec x = solve_rational(A, e);
        for (int i = 0; i < n; ++i) inv(i, j) = x[i];
    }
    return inv;
}

// Inverse of a unimodular matrix stays integral.
inline IntMat inverse_unimodular(const IntMat& A) {
    RatMat inv = inverse(A);
    if (!inv.is_integral()) throw std::runtime_error("inverse_unimodular: matrix not unimodular");
    return inv.to_int();
}

}  // namespace galekit
