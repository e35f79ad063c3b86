#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace secdss {

/// Dense row-major matrix over a finite field. F is the field type (Field or
/// Tower); entries are canonical encodings of type F::Elem with the field
/// held once per matrix. Values are immutable in all the operations below;
/// mutation is limited to explicit element assignment while building.
template <class F>
class Mat {
public:
    using FieldT = F;
    using Elem = typename F::Elem;
    using Ptr = std::shared_ptr<const F>;

    Mat() = default;
    Mat(Ptr f, int rows, int cols)
        : f_(std::move(f)), r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, Elem(0)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static Mat identity(Ptr f, int n) {
        Mat m(std::move(f), n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Elem(1);
        return m;
    }

    static Mat from_rows(Ptr f, const std::vector<std::vector<Elem>>& rows) {
        int rc = static_cast<int>(rows.size());
        int cc = rc == 0 ? 0 : static_cast<int>(rows[0].size());
        Mat m(std::move(f), rc, cc);
        for (int i = 0; i < rc; ++i) {
            if (static_cast<int>(rows[i].size()) != cc)
                throw std::invalid_argument("ragged rows");
            for (int j = 0; j < cc; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    bool empty() const { return r_ == 0 || c_ == 0; }
    const Ptr& field() const { return f_; }

    Elem operator()(int r, int c) const { return a_[static_cast<size_t>(r) * c_ + c]; }
    Elem& operator()(int r, int c) { return a_[static_cast<size_t>(r) * c_ + c]; }

    bool operator==(const Mat& o) const {
        return r_ == o.r_ && c_ == o.c_ && a_ == o.a_ && same_field(o);
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](Elem e) { return e == Elem(0); });
    }

    Mat operator+(const Mat& o) const {
        require_same_field(o);
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("shape mismatch in add");
        Mat out(f_, r_, c_);
        for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = f_->add(a_[i], o.a_[i]);
        return out;
    }

    Mat operator-(const Mat& o) const {
        require_same_field(o);
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("shape mismatch in sub");
        Mat out(f_, r_, c_);
        for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = f_->sub(a_[i], o.a_[i]);
        return out;
    }

    Mat operator*(const Mat& o) const {
        require_same_field(o);
        if (c_ != o.r_) throw std::invalid_argument("shape mismatch in mul");
        Mat out(f_, r_, o.c_);
        for (int i = 0; i < r_; ++i) {
            for (int t = 0; t < c_; ++t) {
                Elem v = (*this)(i, t);
                if (v == Elem(0)) continue;
                for (int j = 0; j < o.c_; ++j) {
                    Elem w = o(t, j);
                    if (w == Elem(0)) continue;
                    out(i, j) = f_->add(out(i, j), f_->mul(v, w));
                }
            }
        }
        return out;
    }

    Mat scaled(Elem c) const {
        Mat out(f_, r_, c_);
        for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = f_->mul(a_[i], c);
        return out;
    }

    std::vector<Elem> apply(const std::vector<Elem>& x) const {
        if (static_cast<int>(x.size()) != c_) throw std::invalid_argument("vector length mismatch");
        std::vector<Elem> y(r_, Elem(0));
        for (int i = 0; i < r_; ++i) {
            Elem acc = Elem(0);
            for (int j = 0; j < c_; ++j) acc = f_->add(acc, f_->mul((*this)(i, j), x[j]));
            y[i] = acc;
        }
        return y;
    }

    Mat transpose() const {
        Mat out(f_, c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Mat vstack(const Mat& o) const {
        require_same_field(o);
        if (c_ != o.c_) throw std::invalid_argument("column mismatch in vstack");
        Mat out(f_, r_ + o.r_, c_);
        std::copy(a_.begin(), a_.end(), out.a_.begin());
        std::copy(o.a_.begin(), o.a_.end(), out.a_.begin() + a_.size());
        return out;
    }

    Mat hstack(const Mat& o) const {
        require_same_field(o);
        if (r_ != o.r_) throw std::invalid_argument("row mismatch in hstack");
        Mat out(f_, r_, c_ + o.c_);
        for (int i = 0; i < r_; ++i) {
            for (int j = 0; j < c_; ++j) out(i, j) = (*this)(i, j);
            for (int j = 0; j < o.c_; ++j) out(i, c_ + j) = o(i, j);
        }
        return out;
    }

    static Mat vstack_all(const std::vector<Mat>& parts) {
        if (parts.empty()) throw std::invalid_argument("vstack_all of nothing");
        Mat out = parts[0];
        for (size_t i = 1; i < parts.size(); ++i) out = out.vstack(parts[i]);
        return out;
    }

    Mat row_slice(int r0, int r1) const {
        Mat out(f_, r1 - r0, c_);
        for (int i = r0; i < r1; ++i)
            for (int j = 0; j < c_; ++j) out(i - r0, j) = (*this)(i, j);
        return out;
    }

    Mat col_slice(int c0, int c1) const {
        Mat out(f_, r_, c1 - c0);
        for (int i = 0; i < r_; ++i)
            for (int j = c0; j < c1; ++j) out(i, j - c0) = (*this)(i, j);
        return out;
    }

    Mat select_rows(const std::vector<int>& idx) const {
        Mat out(f_, static_cast<int>(idx.size()), c_);
        for (size_t i = 0; i < idx.size(); ++i)
            for (int j = 0; j < c_; ++j) out(static_cast<int>(i), j) = (*this)(idx[i], j);
        return out;
    }

    Mat select_cols(const std::vector<int>& idx) const {
        Mat out(f_, r_, static_cast<int>(idx.size()));
        for (int i = 0; i < r_; ++i)
            for (size_t j = 0; j < idx.size(); ++j) out(i, static_cast<int>(j)) = (*this)(i, idx[j]);
        return out;
    }

    bool same_field(const Mat& o) const { return f_ && o.f_ && f_->same(*o.f_); }

private:
    void require_same_field(const Mat& o) const {
        if (!same_field(o)) throw std::invalid_argument("field mismatch between matrices");
    }

    Ptr f_;
    int r_ = 0, c_ = 0;
    std::vector<Elem> a_;
};

template <class F>
struct RrefResult {
    Mat<F> reduced;
    int rank = 0;
    std::vector<int> pivots;  // pivot column per pivot row
    Mat<F> transform;         // transform * input == reduced (when requested)
};

/// Reduced row echelon form. Deterministic: leftmost nonzero column, topmost
/// available row, pivot scaled to one, eliminated everywhere, giving the
/// unique canonical representative of the row space.
template <class F>
RrefResult<F> rref(const Mat<F>& m, bool with_transform = false) {
    using Elem = typename F::Elem;
    const auto& f = m.field();
    RrefResult<F> res;
    res.reduced = m;
    if (with_transform) res.transform = Mat<F>::identity(f, m.rows());
    Mat<F>& a = res.reduced;
    int pr = 0;
    for (int col = 0; col < m.cols() && pr < m.rows(); ++col) {
        int sel = -1;
        for (int r = pr; r < m.rows(); ++r) {
            if (a(r, col) != Elem(0)) {
                sel = r;
                break;
            }
        }
        if (sel < 0) continue;
        if (sel != pr) {
            for (int j = 0; j < m.cols(); ++j) std::swap(a(sel, j), a(pr, j));
            if (with_transform)
                for (int j = 0; j < m.rows(); ++j)
                    std::swap(res.transform(sel, j), res.transform(pr, j));
        }
        Elem s = f->inv(a(pr, col));
        if (s != Elem(1)) {
            for (int j = 0; j < m.cols(); ++j) a(pr, j) = f->mul(a(pr, j), s);
            if (with_transform)
                for (int j = 0; j < m.rows(); ++j)
                    res.transform(pr, j) = f->mul(res.transform(pr, j), s);
        }
        for (int r = 0; r < m.rows(); ++r) {
            if (r == pr) continue;
            Elem c = a(r, col);
            if (c == Elem(0)) continue;
            for (int j = 0; j < m.cols(); ++j)
                a(r, j) = f->sub(a(r, j), f->mul(c, a(pr, j)));
            if (with_transform)
                for (int j = 0; j < m.rows(); ++j)
                    res.transform(r, j) = f->sub(res.transform(r, j), f->mul(c, res.transform(pr, j)));
        }
        res.pivots.push_back(col);
        ++pr;
    }
    res.rank = pr;
    return res;
}

template <class F>
int rank(const Mat<F>& m) {
    return rref(m).rank;
}

/// Basis of the right kernel {x : m x = 0}, one basis vector per row.
template <class F>
Mat<F> kernel(const Mat<F>& m) {
    using Elem = typename F::Elem;
    auto r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : r.pivots) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat<F> out(m.field(), static_cast<int>(free_cols.size()), m.cols());
    for (size_t i = 0; i < free_cols.size(); ++i) {
        int fc = free_cols[i];
        out(static_cast<int>(i), fc) = Elem(1);
        for (int p = 0; p < r.rank; ++p)
            out(static_cast<int>(i), r.pivots[p]) = m.field()->neg(r.reduced(p, fc));
    }
    return out;
}

template <class F>
struct SolveResult {
    bool consistent = false;
    std::vector<typename F::Elem> solution;          // one particular solution
    Mat<F> kernel;                                   // rows span the solution space offset
    std::vector<typename F::Elem> left_certificate;  // y with yA = 0, y b != 0 when inconsistent
};

/// Solves A x = b, returning a particular solution plus a kernel basis, or an
/// inconsistency report certified by a left-kernel witness.
template <class F>
SolveResult<F> solve(const Mat<F>& a, const std::vector<typename F::Elem>& b) {
    using Elem = typename F::Elem;
    if (static_cast<int>(b.size()) != a.rows())
        throw std::invalid_argument("rhs length mismatch");
    auto r = rref(a, true);
    std::vector<Elem> y = r.transform.apply(b);
    SolveResult<F> res;
    for (int row = r.rank; row < a.rows(); ++row) {
        if (y[row] != Elem(0)) {
            res.consistent = false;
            res.left_certificate.resize(a.rows());
            for (int j = 0; j < a.rows(); ++j) res.left_certificate[j] = r.transform(row, j);
            return res;
        }
    }
    res.consistent = true;
    res.solution.assign(a.cols(), Elem(0));
    for (int p = 0; p < r.rank; ++p) res.solution[r.pivots[p]] = y[p];
    res.kernel = kernel(a);
    return res;
}

/// Inverse of a square matrix; throws std::domain_error if singular.
template <class F>
Mat<F> inverse(const Mat<F>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    auto r = rref(m, true);
    if (r.rank != m.rows()) throw std::domain_error("singular matrix");
    return r.transform;
}

/// dim of the sum of row spaces; all parts must share the ambient width.
template <class F>
int subspace_sum_dim(const std::vector<Mat<F>>& parts) {
    if (parts.empty()) throw std::invalid_argument("subspace sum of nothing");
    for (const auto& p : parts) {
        if (p.cols() != parts[0].cols()) throw std::invalid_argument("ambient mismatch");
        if (!p.same_field(parts[0])) throw std::invalid_argument("field mismatch");
    }
    return rank(Mat<F>::vstack_all(parts));
}

/// dim(A) + dim(B) - dim(A+B), via the modular identity.
template <class F>
int subspace_intersection_dim(const Mat<F>& a, const Mat<F>& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("ambient mismatch");
    return rank(a) + rank(b) - subspace_sum_dim<F>({a, b});
}

/// Intersection basis computed from the left kernel of the stacked matrix.
/// Slower than the modular identity; kept as an independent route for tests.
template <class F>
Mat<F> intersection_basis_by_kernel(const Mat<F>& a, const Mat<F>& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("ambient mismatch");
    Mat<F> stacked = a.vstack(b);
    Mat<F> left = kernel(stacked.transpose());  // rows (y_a | y_b) with y_a A + y_b B = 0
    Mat<F> ya = left.col_slice(0, a.rows());
    Mat<F> span = ya * a;  // y_a A = -y_b B lies in both row spaces
    auto r = rref(span);
    return r.reduced.row_slice(0, r.rank);
}

/// span(inner) contained in span(outer)?
template <class F>
bool rowspace_contains(const Mat<F>& outer, const Mat<F>& inner) {
    if (outer.cols() != inner.cols()) throw std::invalid_argument("ambient mismatch");
    return rank(outer) == subspace_sum_dim<F>({outer, inner});
}

template <class F>
bool same_rowspace(const Mat<F>& a, const Mat<F>& b) {
    return rowspace_contains(a, b) && rowspace_contains(b, a);
}

/// Subspace of F^ambient held by its canonical RREF basis, which is a unique
/// representative: two subspaces are equal iff their bases compare equal.
template <class F>
struct Subspace {
    int ambient = 0;
    Mat<F> basis;  // RREF, no zero rows

    static Subspace from_rows(const Mat<F>& m) {
        auto r = rref(m);
        return Subspace{m.cols(), r.reduced.row_slice(0, r.rank)};
    }
    int dim() const { return basis.rows(); }
    bool operator==(const Subspace& o) const { return ambient == o.ambient && basis == o.basis; }
};

}  // namespace secdss
