#pragma once

// Bit-packed linear algebra over F_2: vectors, matrices, rank/solve/nullspace,
// alternating forms with symplectic normal form, and quadratic-form utilities.
//
// Conventions: vectors are rows and maps act on the right, so a system reads
// x * M = b where x has one coordinate per row of M.  Gaussian elimination
// always picks the first nonzero pivot, so every reduction is deterministic.

#include <algorithm>
#include <cassert>
#include <optional>
#include <utility>
#include <vector>

#include "common.hpp"

namespace bwlab::gf2 {

class Vec {
public:
    Vec() = default;
    explicit Vec(int n) : n_(n), w_((n + 63) / 64, 0) {}

    static Vec unit(int n, int i) {
        Vec v(n);
        v.set(i, true);
        return v;
    }
    // Bits 0..n-1 of `bits`.
    static Vec from_bits(int n, std::uint64_t bits) {
        assert(n <= 64);
        Vec v(n);
        if (n > 0) v.w_[0] = n == 64 ? bits : (bits & ((1ull << n) - 1));
        return v;
    }

    int size() const { return n_; }

    bool get(int i) const {
        assert(0 <= i && i < n_);
        return (w_[i >> 6] >> (i & 63)) & 1;
    }
    void set(int i, bool b) {
        assert(0 <= i && i < n_);
        std::uint64_t m = 1ull << (i & 63);
        if (b)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(int i) { set(i, !get(i)); }

    Vec& operator^=(const Vec& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    friend Vec operator^(Vec a, const Vec& b) { return a ^= b; }

    Vec& operator&=(const Vec& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }
    friend Vec operator&(Vec a, const Vec& b) { return a &= b; }

    bool operator==(const Vec& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const Vec& o) const { return !(*this == o); }
    // Lexicographic-by-words; used only to make containers deterministic.
    bool operator<(const Vec& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        return w_ < o.w_;
    }

    bool is_zero() const {
        for (auto x : w_)
            if (x) return false;
        return true;
    }
    int popcount() const {
        int c = 0;
        for (auto x : w_) c += popcount64(x);
        return c;
    }
    // <a,b> = parity of the intersection.
    bool dot(const Vec& o) const {
        assert(n_ == o.n_);
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
        return parity64(acc);
    }
    int first_set() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return int(k) * 64 + __builtin_ctzll(w_[k]);
        return -1;
    }

    // Low word, for n <= 64 fast paths.
    std::uint64_t low() const { return w_.empty() ? 0 : w_[0]; }

    const std::vector<std::uint64_t>& words() const { return w_; }

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : cols_(cols), rows_(rows, Vec(cols)) {}
    explicit Mat(std::vector<Vec> rows) : rows_(std::move(rows)) {
        cols_ = rows_.empty() ? 0 : rows_[0].size();
        for (auto& r : rows_) assert(r.size() == cols_);
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.rows_[i].set(i, true);
        return m;
    }
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int row_count() const { return int(rows_.size()); }
    int col_count() const { return cols_; }
    bool empty() const { return rows_.empty(); }

    Vec& row(int i) { return rows_[i]; }
    const Vec& row(int i) const { return rows_[i]; }
    bool at(int i, int j) const { return rows_[i].get(j); }
    void set(int i, int j, bool b) { rows_[i].set(j, b); }

    void append_row(const Vec& v) {
        assert(empty() || v.size() == cols_);
        if (empty()) cols_ = v.size();
        rows_.push_back(v);
    }

    bool operator==(const Mat& o) const { return cols_ == o.cols_ && rows_ == o.rows_; }

    Mat transpose() const {
        Mat t(cols_, row_count());
        for (int i = 0; i < row_count(); ++i)
            for (int j = 0; j < cols_; ++j)
                if (at(i, j)) t.set(j, i, true);
        return t;
    }

    // v * M, v indexed by rows.
    Vec apply(const Vec& v) const {
        assert(v.size() == row_count());
        Vec out(cols_);
        for (int i = 0; i < row_count(); ++i)
            if (v.get(i)) out ^= rows_[i];
        return out;
    }

    // this * other (rows of the product are rows of `this` pushed through `other`).
    Mat mul(const Mat& o) const {
        assert(cols_ == o.row_count());
        Mat out(row_count(), o.col_count());
        for (int i = 0; i < row_count(); ++i) out.rows_[i] = o.apply(rows_[i]);
        return out;
    }

    Mat operator^(const Mat& o) const {
        assert(row_count() == o.row_count() && cols_ == o.cols_);
        Mat out = *this;
        for (int i = 0; i < row_count(); ++i) out.rows_[i] ^= o.rows_[i];
        return out;
    }

    bool is_symmetric() const {
        if (row_count() != cols_) return false;
        for (int i = 0; i < cols_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }
    bool is_zero() const {
        for (auto& r : rows_)
            if (!r.is_zero()) return false;
        return true;
    }

private:
    int cols_ = 0;
    std::vector<Vec> rows_;
};

// Row echelon form; returns reduced copies of the rows (zero rows kept at the
// end) together with the transformation back to the original rows, so both
// solve() and nullspace() fall out of one elimination.
struct Echelon {
    Mat reduced;      // same row count as input
    Mat transform;    // transform * input == reduced
    std::vector<int> pivot_col;  // one entry per nonzero reduced row
};

inline Echelon echelonize(const Mat& m) {
    Echelon e{m, Mat::identity(m.row_count()), {}};
    int r = 0;
    for (int c = 0; c < m.col_count() && r < m.row_count(); ++c) {
        int p = -1;
        for (int i = r; i < m.row_count(); ++i)
            if (e.reduced.at(i, c)) { p = i; break; }
        if (p < 0) continue;
        std::swap(e.reduced.row(r), e.reduced.row(p));
        std::swap(e.transform.row(r), e.transform.row(p));
        for (int i = 0; i < m.row_count(); ++i) {
            if (i != r && e.reduced.at(i, c)) {
                e.reduced.row(i) ^= e.reduced.row(r);
                e.transform.row(i) ^= e.transform.row(r);
            }
        }
        e.pivot_col.push_back(c);
        ++r;
    }
    return e;
}

inline int rank(const Mat& m) { return int(echelonize(m).pivot_col.size()); }

// Some x with x * m = b, if the system is consistent.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
    if (b.size() != m.col_count()) throw invalid_input("solve: length mismatch");
    Echelon e = echelonize(m);
    Vec residual = b;
    Vec x(m.row_count());
    for (std::size_t k = 0; k < e.pivot_col.size(); ++k) {
        if (residual.get(e.pivot_col[k])) {
            residual ^= e.reduced.row(int(k));
            x ^= e.transform.row(int(k));
        }
    }
    if (!residual.is_zero()) return std::nullopt;
    return x;
}

// Basis of {x : x * m = 0}; dimension is rows - rank.
inline Mat nullspace(const Mat& m) {
    Echelon e = echelonize(m);
    Mat basis(0, m.row_count());
    for (int i = int(e.pivot_col.size()); i < m.row_count(); ++i)
        basis.append_row(e.transform.row(i));
    return basis;
}

inline bool invertible(const Mat& m) {
    return m.row_count() == m.col_count() && rank(m) == m.col_count();
}

inline Mat inverse(const Mat& m) {
    if (!invertible(m)) throw invalid_input("inverse: matrix is singular");
    Echelon e = echelonize(m);
    // reduced is a row permutation of the identity; undo it.
    Mat inv(m.row_count(), m.row_count());
    for (int i = 0; i < m.row_count(); ++i) inv.row(e.pivot_col[i]) = e.transform.row(i);
    return inv;
}

// Span helpers -----------------------------------------------------------

// Row space basis in echelon form (zero rows dropped).
inline Mat row_basis(const Mat& m) {
    Echelon e = echelonize(m);
    Mat b(0, m.col_count());
    for (std::size_t k = 0; k < e.pivot_col.size(); ++k) b.append_row(e.reduced.row(int(k)));
    return b;
}

inline bool in_span(const Mat& basis, const Vec& v) {
    if (basis.row_count() == 0) return v.is_zero();
    Mat aug = basis;
    aug.append_row(v);
    return rank(aug) == rank(basis);
}

inline int span_intersection_dim(const Mat& a, const Mat& b) {
    Mat ab = a;
    for (int i = 0; i < b.row_count(); ++i) ab.append_row(b.row(i));
    return rank(a) + rank(b) - rank(ab);
}

// Symplectic machinery ----------------------------------------------------

struct SymplecticBasis {
    std::vector<std::pair<Vec, Vec>> pairs;  // b(a_i,b_i)=1, everything else 0
    Mat radical;                             // basis of the kernel of the form
};

inline bool is_alternating(const Mat& b) {
    if (b.row_count() != b.col_count() || !b.is_symmetric()) return false;
    for (int i = 0; i < b.col_count(); ++i)
        if (b.at(i, i)) return false;
    return true;
}

// Hyperbolic pairs plus radical for an alternating form, by symplectic
// Gram-Schmidt with first-nonzero selection.
inline SymplecticBasis symplectic_basis(const Mat& b) {
    if (!is_alternating(b)) throw invalid_input("symplectic_basis: form is not alternating");
    const int n = b.col_count();
    SymplecticBasis out;
    std::vector<Vec> space;  // current complement basis
    for (int i = 0; i < n; ++i) space.push_back(Vec::unit(n, i));

    auto form = [&](const Vec& x, const Vec& y) { return b.apply(x).dot(y); };

    while (true) {
        // First vector pairing nontrivially with something later.
        int ia = -1, ib = -1;
        for (std::size_t i = 0; i < space.size() && ia < 0; ++i)
            for (std::size_t j = i + 1; j < space.size(); ++j)
                if (form(space[i], space[j])) { ia = int(i); ib = int(j); break; }
        if (ia < 0) break;
        Vec a = space[ia], bb = space[ib];
        std::vector<Vec> next;
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (int(i) == ia || int(i) == ib) continue;
            Vec v = space[i];
            if (form(v, bb)) v ^= a;
            if (form(v, a)) v ^= bb;
            next.push_back(v);
        }
        out.pairs.emplace_back(a, bb);
        space = std::move(next);
    }
    out.radical = Mat(0, n);
    for (auto& v : space) out.radical.append_row(v);
    return out;
}

// Quadratic forms on F_2^n ------------------------------------------------
//
// q(x) = sum over i<=j of q_ij x_i x_j, stored as an upper-triangular matrix
// (diagonal allowed).  The polar form is <x,y> = q(x+y)+q(x)+q(y).

class QuadForm {
public:
    QuadForm() = default;
    explicit QuadForm(Mat upper) : m_(std::move(upper)) {
        if (m_.row_count() != m_.col_count()) throw invalid_input("QuadForm: square matrix required");
        for (int i = 0; i < m_.row_count(); ++i)
            for (int j = 0; j < i; ++j)
                if (m_.at(i, j)) throw invalid_input("QuadForm: matrix must be upper-triangular");
    }

    // Standard plus-type form on F_2^{2d}: q(x) = sum x_i x_{d+i}.
    static QuadForm hyperbolic(int two_d) {
        assert(two_d % 2 == 0);
        int d = two_d / 2;
        Mat u(two_d, two_d);
        for (int i = 0; i < d; ++i) u.set(i, d + i, true);
        return QuadForm(u);
    }

    int dim() const { return m_.col_count(); }

    bool eval(const Vec& x) const {
        bool acc = false;
        for (int i = 0; i < dim(); ++i)
            if (x.get(i)) acc ^= m_.row(i).dot(x) ^ (m_.at(i, i) ? false : false);
        // row(i).dot(x) counts j>=i terms plus nothing below the diagonal
        return acc;
    }

    bool bilinear(const Vec& x, const Vec& y) const {
        Vec s = x ^ y;
        return eval(s) ^ eval(x) ^ eval(y);
    }

    // Polar form as an alternating matrix.
    Mat polar() const { return m_ ^ m_.transpose(); }

    const Mat& upper() const { return m_; }

private:
    Mat m_;
};

// Number of nonzero singular vectors of a nondegenerate 2m-dim form of type
// eps (+1/-1): (2^m - eps)(2^{m-1} + eps).
inline long singular_vector_count(int m, int eps) {
    long p = 1l << m, h = 1l << (m - 1);
    return (p - eps) * (h + eps);
}
inline long nonsingular_vector_count(int m, int eps) {
    long p = 1l << m, h = 1l << (m - 1);
    return (p - eps) * h;
}

// Type (+1 or -1) of a nondegenerate even-dimensional quadratic space given by
// q restricted to the span of `basis`; decided by counting singular vectors.
inline int quadratic_type(const QuadForm& q, const Mat& basis) {
    int dim = basis.row_count();
    if (dim % 2 != 0) throw invalid_input("quadratic_type: odd dimension");
    if (dim == 0) return +1;
    if (dim > 24) throw resource_guard("quadratic_type: dimension too large for enumeration");
    long singular = 0;
    for (std::uint64_t mask = 1; mask < (1ull << dim); ++mask) {
        Vec v(basis.col_count());
        for (int i = 0; i < dim; ++i)
            if ((mask >> i) & 1) v ^= basis.row(i);
        if (!q.eval(v)) ++singular;
    }
    if (singular == singular_vector_count(dim / 2, +1)) return +1;
    if (singular == singular_vector_count(dim / 2, -1)) return -1;
    throw verification_error("quadratic_type: restriction is degenerate");
}

// Hyperbolic basis of a nondegenerate plus-type quadratic space: singular
// vectors x_1..x_m, y_1..y_m with (x_i,y_j) = delta_ij.  Constructive Witt
// decomposition; throws if the space is not plus-type nondegenerate.
inline std::vector<std::pair<Vec, Vec>> hyperbolic_basis(const QuadForm& q, Mat space) {
    std::vector<std::pair<Vec, Vec>> pairs;
    while (space.row_count() > 0) {
        const int dim = space.row_count();
        if (dim > 24) throw resource_guard("hyperbolic_basis: dimension too large");
        // find a singular x and a partner y with (x,y)=1, y singular
        bool found = false;
        Vec x(space.col_count()), y(space.col_count());
        for (std::uint64_t mx = 1; mx < (1ull << dim) && !found; ++mx) {
            Vec cx(space.col_count());
            for (int i = 0; i < dim; ++i)
                if ((mx >> i) & 1) cx ^= space.row(i);
            if (q.eval(cx)) continue;
            for (std::uint64_t my = 1; my < (1ull << dim); ++my) {
                Vec cy(space.col_count());
                for (int i = 0; i < dim; ++i)
                    if ((my >> i) & 1) cy ^= space.row(i);
                if (!q.bilinear(cx, cy)) continue;
                if (q.eval(cy)) cy ^= cx;  // y := x+y is singular and still pairs with x
                x = cx;
                y = cy;
                found = true;
                break;
            }
        }
        if (!found) throw verification_error("hyperbolic_basis: space is not plus-type nondegenerate");
        pairs.emplace_back(x, y);
        // restrict to the perp of {x,y} inside `space`
        Mat next(0, space.col_count());
        std::vector<Vec> kept;
        for (int i = 0; i < dim; ++i) {
            Vec v = space.row(i);
            if (q.bilinear(v, y)) v ^= x;
            if (q.bilinear(v, x)) v ^= y;
            kept.push_back(v);
        }
        Mat reduced = row_basis(Mat(kept));
        for (int i = 0; i < reduced.row_count(); ++i) {
            const Vec& v = reduced.row(i);
            if (in_span(Mat(std::vector<Vec>{x, y}), v)) continue;
            next.append_row(v);
        }
        space = row_basis(next);
        if (space.row_count() != dim - 2)
            throw verification_error("hyperbolic_basis: perp did not drop by 2");
    }
    return pairs;
}

struct InvolutionHyperbolicBasis {
    // Singular x_1..x_m, y_1..y_m with (x_i,y_j)=delta, u swapping the first
    // r pairs and fixing the rest.
    std::vector<std::pair<Vec, Vec>> pairs;
    int swapped = 0;
};

// Basis adapted to an isometric involution u whose commutator space [V,u]
// contains nonsingular vectors and has dimension r >= 2.
inline InvolutionHyperbolicBasis hyperbolic_basis_for_involution(const Mat& u, const QuadForm& q) {
    const int n = q.dim();
    if (u.row_count() != n || u.col_count() != n)
        throw invalid_input("hyperbolic_basis_for_involution: dimension mismatch");
    if (!(u.mul(u) == Mat::identity(n)))
        throw invalid_input("hyperbolic_basis_for_involution: u is not an involution");
    for (int i = 0; i < 64 && i < 2 * n; ++i) {
        // spot-check isometry on a deterministic sample of vectors
        Vec v(n);
        for (int j = 0; j < n; ++j) v.set(j, ((i * 2654435761u) >> j) & 1);
        if (q.eval(v) != q.eval(u.apply(v)))
            throw invalid_input("hyperbolic_basis_for_involution: u does not preserve q");
    }

    Mat c = u ^ Mat::identity(n);  // v -> v(u+1) = [v,u]
    Mat comm = row_basis(c);
    const int r = comm.row_count();
    if (r < 2) throw invalid_input("hyperbolic_basis_for_involution: commutator dimension r must exceed 1");
    bool has_nonsingular = false;
    if (comm.row_count() <= 24) {
        for (std::uint64_t m = 1; m < (1ull << r) && !has_nonsingular; ++m) {
            Vec v(n);
            for (int i = 0; i < r; ++i)
                if ((m >> i) & 1) v ^= comm.row(i);
            has_nonsingular = q.eval(v);
        }
    }
    if (!has_nonsingular)
        throw invalid_input("hyperbolic_basis_for_involution: [V,u] is totally singular");

    InvolutionHyperbolicBasis out;
    out.swapped = r;
    Mat space = Mat::identity(n);  // current ambient complement, u-invariant
    Mat cur_comm = comm;

    for (int step = 0; step < r; ++step) {
        // pick a nonsingular w in the current commutator space, then a
        // singular x with x(u-1) = w; y := xu gives a swapped singular pair.
        const int cd = cur_comm.row_count();
        bool found = false;
        Vec x(n), y(n);
        for (std::uint64_t mw = 1; mw < (1ull << cd) && !found; ++mw) {
            Vec w(n);
            for (int i = 0; i < cd; ++i)
                if ((mw >> i) & 1) w ^= cur_comm.row(i);
            if (!q.eval(w)) continue;
            // solutions of v(u+1) = w within `space`
            const int sd = space.row_count();
            for (std::uint64_t mv = 1; mv < (1ull << sd); ++mv) {
                Vec v(n);
                for (int i = 0; i < sd; ++i)
                    if ((mv >> i) & 1) v ^= space.row(i);
                if (!(c.apply(v) == w)) continue;
                if (q.eval(v)) continue;  // need singular x
                x = v;
                y = u.apply(v);
                if (!q.bilinear(x, y)) continue;
                found = true;
                break;
            }
        }
        if (!found)
            throw verification_error("hyperbolic_basis_for_involution: no singular preimage found");
        out.pairs.emplace_back(x, y);
        // pass to {x,y}^perp inside `space`
        std::vector<Vec> kept;
        for (int i = 0; i < space.row_count(); ++i) {
            Vec v = space.row(i);
            if (q.bilinear(v, y)) v ^= x;
            if (q.bilinear(v, x)) v ^= y;
            kept.push_back(v);
        }
        Mat reduced = row_basis(Mat(kept));
        Mat next(0, n);
        for (int i = 0; i < reduced.row_count(); ++i)
            if (!in_span(Mat(std::vector<Vec>{x, y}), reduced.row(i))) next.append_row(reduced.row(i));
        space = row_basis(next);
        // commutator space inside the reduced ambient
        Mat cc(0, n);
        for (int i = 0; i < space.row_count(); ++i) {
            Vec w = c.apply(space.row(i));
            if (!w.is_zero()) cc.append_row(w);
        }
        cur_comm = row_basis(cc);
    }

    // u is trivial on what is left; fill with a hyperbolic basis of it.
    for (auto& p : hyperbolic_basis(q, space)) out.pairs.push_back(p);
    return out;
}

} // namespace bwlab::gf2
