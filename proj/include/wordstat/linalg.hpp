/**
 * Exact rational linear algebra.
 *
 * Dense matrices/vectors of mpq_class: Gauss-Jordan RREF, rank, kernel,
 * linear solve, subspaces with canonical RREF bases (decidable equality),
 * sums/intersections/orthogonal complements under a diagonal bilinear form,
 * Gram-Schmidt without normalization, orthogonal projectors, and exact
 * eigenspace splitting with a characteristic-polynomial fallback.
 */
#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace wordstat {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;  // row-major

inline Mat mat_zero(size_t r, size_t c) { return Mat(r, Vec(c, 0)); }

inline Mat mat_identity(size_t n) {
    Mat m = mat_zero(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Mat mat_transpose(const Mat& a) {
    if (a.empty()) return {};
    Mat t = mat_zero(a[0].size(), a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.empty() || b.empty()) return {};
    if (a[0].size() != b.size()) throw std::invalid_argument("mat_mul: shape mismatch");
    Mat c = mat_zero(a.size(), b[0].size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < b[0].size(); ++j)
                if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

inline Vec mat_vec(const Mat& a, const Vec& x) {
    if (!a.empty() && a[0].size() != x.size())
        throw std::invalid_argument("mat_vec: shape mismatch");
    Vec y(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
            if (a[i][j] != 0 && x[j] != 0) y[i] += a[i][j] * x[j];
    return y;
}

inline Vec vec_add(Vec a, const Vec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline Vec vec_sub(Vec a, const Vec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline Vec vec_scale(Vec a, const Rat& s) {
    for (auto& x : a) x *= s;
    return a;
}
inline bool vec_is_zero(const Vec& a) {
    for (auto& x : a) if (x != 0) return false;
    return true;
}

/** Standard dot product. */
inline Rat dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

/** Weighted dot product  sum_i w_i a_i b_i  (diagonal bilinear form). */
inline Rat dot_weighted(const Vec& a, const Vec& b, const Vec& w) {
    if (a.size() != b.size() || a.size() != w.size())
        throw std::invalid_argument("dot_weighted: size mismatch");
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0 && w[i] != 0) s += w[i] * a[i] * b[i];
    return s;
}

/**
 * In-place reduced row echelon form; returns the pivot column indices
 * (their count is the rank).  Zero rows are removed.
 */
inline std::vector<size_t> rref(Mat& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    const size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        Rat inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

inline size_t rank(Mat m) { return rref(m).size(); }

/** Basis (as rows) of the right kernel { x : A x = 0 }. */
inline Mat kernel(Mat a) {
    if (a.empty()) return {};
    const size_t cols = a[0].size();
    std::vector<size_t> pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    Mat basis;
    for (size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        Vec v(cols, 0);
        v[c] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

/** One solution of A x = b, or nullopt if inconsistent. */
inline std::optional<Vec> solve(const Mat& a, const Vec& b) {
    if (a.empty()) return vec_is_zero(b) ? std::optional<Vec>(Vec{}) : std::nullopt;
    const size_t cols = a[0].size();
    Mat aug = a;
    for (size_t i = 0; i < a.size(); ++i) aug[i].push_back(b[i]);
    std::vector<size_t> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    Vec x(cols, 0);
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
    return x;
}

/**
 * A linear subspace of Q^n stored by its canonical RREF basis, so that two
 * Subspace objects are equal iff they span the same space.
 */
class Subspace {
public:
    Subspace() = default;
    /** Span of the given rows inside Q^ambient_dim. */
    Subspace(Mat spanning_rows, size_t ambient_dim)
        : ambient_(ambient_dim), basis_(std::move(spanning_rows)) {
        for (auto& row : basis_)
            if (row.size() != ambient_)
                throw std::invalid_argument("Subspace: row length != ambient dim");
        rref(basis_);
    }

    size_t ambient_dim() const { return ambient_; }
    size_t dim() const { return basis_.size(); }
    /** Canonical RREF basis rows. */
    const Mat& basis() const { return basis_; }

    bool contains(const Vec& v) const {
        Vec r = v;
        for (const auto& row : basis_) {
            size_t p = 0;
            while (p < r.size() && row[p] == 0) ++p;
            if (p < r.size() && r[p] != 0) {
                Rat f = r[p];  // row has unit pivot at p
                for (size_t j = 0; j < r.size(); ++j) r[j] -= f * row[j];
            }
        }
        return vec_is_zero(r);
    }
    bool contains(const Subspace& o) const {
        for (const auto& row : o.basis_)
            if (!contains(row)) return false;
        return true;
    }
    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    Subspace sum(const Subspace& o) const {
        check_same_ambient(o);
        Mat rows = basis_;
        rows.insert(rows.end(), o.basis_.begin(), o.basis_.end());
        return Subspace(std::move(rows), ambient_);
    }

    Subspace intersect(const Subspace& o) const {
        check_same_ambient(o);
        if (basis_.empty() || o.basis_.empty()) return Subspace({}, ambient_);
        // v = x^T A = y^T B  <=>  (x, y) in ker [A^T | -B^T]
        Mat m = mat_zero(ambient_, basis_.size() + o.basis_.size());
        for (size_t j = 0; j < basis_.size(); ++j)
            for (size_t i = 0; i < ambient_; ++i) m[i][j] = basis_[j][i];
        for (size_t j = 0; j < o.basis_.size(); ++j)
            for (size_t i = 0; i < ambient_; ++i)
                m[i][basis_.size() + j] = -o.basis_[j][i];
        Mat rows;
        for (const Vec& xy : kernel(m)) {
            Vec v(ambient_, 0);
            for (size_t j = 0; j < basis_.size(); ++j)
                if (xy[j] != 0) v = vec_add(std::move(v), vec_scale(basis_[j], xy[j]));
            rows.push_back(std::move(v));
        }
        return Subspace(std::move(rows), ambient_);
    }

    /** { v : <v, b>_w = 0 for all basis rows b }, w a diagonal form. */
    Subspace orthogonal_complement(const Vec& weights) const {
        if (weights.size() != ambient_)
            throw std::invalid_argument("orthogonal_complement: weight size");
        Mat m;
        for (const auto& row : basis_) {
            Vec r(ambient_);
            for (size_t j = 0; j < ambient_; ++j) r[j] = row[j] * weights[j];
            m.push_back(std::move(r));
        }
        if (m.empty()) return Subspace(mat_identity(ambient_), ambient_);
        return Subspace(kernel(std::move(m)), ambient_);
    }
    /** Complement under the standard dot product. */
    Subspace orthogonal_complement() const {
        return orthogonal_complement(Vec(ambient_, 1));
    }

private:
    void check_same_ambient(const Subspace& o) const {
        if (ambient_ != o.ambient_)
            throw std::invalid_argument("Subspace: ambient dim mismatch");
    }
    size_t ambient_ = 0;
    Mat basis_;
};

/** Symmetric bilinear form given by its Gram matrix. */
class BilinearForm {
public:
    explicit BilinearForm(Mat gram) : g_(std::move(gram)) {
        if (g_ != mat_transpose(g_))
            throw std::invalid_argument("BilinearForm: Gram matrix not symmetric");
    }
    static BilinearForm standard(size_t n) { return BilinearForm(mat_identity(n)); }
    static BilinearForm diagonal(const Vec& w) {
        Mat g = mat_zero(w.size(), w.size());
        for (size_t i = 0; i < w.size(); ++i) g[i][i] = w[i];
        return BilinearForm(std::move(g));
    }

    size_t dim() const { return g_.size(); }
    const Mat& gram() const { return g_; }

    Rat operator()(const Vec& u, const Vec& v) const {
        return dot(u, mat_vec(g_, v));
    }

    /** Exact LDL^T with all pivots positive. */
    bool positive_definite() const {
        Mat a = g_;
        const size_t n = a.size();
        for (size_t k = 0; k < n; ++k) {
            if (a[k][k] <= 0) return false;
            for (size_t i = k + 1; i < n; ++i) {
                Rat f = a[i][k] / a[k][k];
                for (size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            }
        }
        return true;
    }

private:
    Mat g_;
};

/**
 * Complement of S inside `within`, orthogonal under `form`:
 * T with S + T = within, S ∩ T = 0, form(s, t) = 0 throughout.
 * Requires S ⊆ within and the form positive definite on `within`.
 */
inline Subspace orthogonal_complement_within(const Subspace& s, const Subspace& within,
                                             const BilinearForm& form) {
    if (!within.contains(s))
        throw std::invalid_argument("orthogonal_complement_within: S not inside the ambient subspace");
    const Mat& b = within.basis();
    if (s.dim() == 0) return within;
    // v = c^T B with form(v, a_j) = 0 for all basis rows a_j of S
    Mat m = mat_zero(s.dim(), within.dim());
    for (size_t j = 0; j < s.dim(); ++j)
        for (size_t i = 0; i < within.dim(); ++i) m[j][i] = form(b[i], s.basis()[j]);
    Mat rows;
    for (const Vec& c : kernel(std::move(m))) {
        Vec v(within.ambient_dim(), 0);
        for (size_t i = 0; i < within.dim(); ++i)
            if (c[i] != 0) v = vec_add(std::move(v), vec_scale(b[i], c[i]));
        rows.push_back(std::move(v));
    }
    Subspace t(std::move(rows), within.ambient_dim());
    if (t.dim() + s.dim() != within.dim())
        throw std::runtime_error("orthogonal_complement_within: form degenerate on subspace");
    return t;
}

/**
 * Gram-Schmidt without normalization under a diagonal bilinear form.
 * Returns the orthogonalized rows (dependent inputs dropped) and their
 * squared norms <v_i, v_i>_w.
 */
struct OrthoBasis {
    Mat vectors;
    std::vector<Rat> norms2;
};

inline OrthoBasis gram_schmidt(const Mat& rows, const Vec& weights) {
    OrthoBasis out;
    for (const Vec& r : rows) {
        Vec v = r;
        for (size_t i = 0; i < out.vectors.size(); ++i) {
            Rat c = dot_weighted(v, out.vectors[i], weights) / out.norms2[i];
            if (c != 0) v = vec_sub(std::move(v), vec_scale(out.vectors[i], c));
        }
        Rat n2 = dot_weighted(v, v, weights);
        if (n2 == 0) {
            if (!vec_is_zero(v))
                throw std::invalid_argument("gram_schmidt: isotropic vector (form not definite)");
            continue;  // linearly dependent input
        }
        out.vectors.push_back(std::move(v));
        out.norms2.push_back(std::move(n2));
    }
    return out;
}

inline OrthoBasis gram_schmidt(const Mat& rows) {
    if (rows.empty()) return {};
    return gram_schmidt(rows, Vec(rows[0].size(), 1));
}

/** Gram-Schmidt under a general symmetric form. */
inline OrthoBasis gram_schmidt(const Mat& rows, const BilinearForm& form) {
    OrthoBasis out;
    for (const Vec& r : rows) {
        Vec v = r;
        for (size_t i = 0; i < out.vectors.size(); ++i) {
            Rat c = form(v, out.vectors[i]) / out.norms2[i];
            if (c != 0) v = vec_sub(std::move(v), vec_scale(out.vectors[i], c));
        }
        Rat n2 = form(v, v);
        if (n2 == 0) {
            if (!vec_is_zero(v))
                throw std::invalid_argument("gram_schmidt: isotropic vector (form not definite)");
            continue;
        }
        out.vectors.push_back(std::move(v));
        out.norms2.push_back(std::move(n2));
    }
    return out;
}

/** Orthogonal projection of v onto S under the given form. */
inline Vec project(const Vec& v, const Subspace& s, const BilinearForm& form) {
    OrthoBasis ob = gram_schmidt(s.basis(), form);
    Vec out(v.size(), 0);
    for (size_t i = 0; i < ob.vectors.size(); ++i) {
        Rat c = form(v, ob.vectors[i]) / ob.norms2[i];
        if (c != 0) out = vec_add(std::move(out), vec_scale(ob.vectors[i], c));
    }
    return out;
}

/**
 * Matrix of the orthogonal projector onto span(rows of B) under a diagonal
 * form w:  P = B^T (B W B^T)^{-1} B W, acting on column vectors.
 */
inline Mat projector(const Mat& b, const Vec& weights) {
    if (b.empty()) throw std::invalid_argument("projector: empty basis");
    const size_t n = b[0].size();
    OrthoBasis ob = gram_schmidt(b, weights);
    Mat p = mat_zero(n, n);
    for (size_t i = 0; i < ob.vectors.size(); ++i) {
        const Vec& v = ob.vectors[i];
        for (size_t r = 0; r < n; ++r) {
            if (v[r] == 0) continue;
            Rat f = v[r] / ob.norms2[i];
            for (size_t c = 0; c < n; ++c)
                if (v[c] != 0 && weights[c] != 0) p[r][c] += f * v[c] * weights[c];
        }
    }
    return p;
}

inline Mat projector(const Mat& b) {
    if (b.empty()) throw std::invalid_argument("projector: empty basis");
    return projector(b, Vec(b[0].size(), 1));
}

/** Characteristic polynomial coefficients c_0..c_n of det(xI - M), c_n = 1,
 *  by the Faddeev-LeVerrier recurrence (exact). */
inline std::vector<Rat> char_poly(const Mat& m) {
    const size_t n = m.size();
    std::vector<Rat> c(n + 1, 0);
    c[n] = 1;
    Mat mk = mat_identity(n);  // M^0 adjusted each step
    for (size_t k = 1; k <= n; ++k) {
        mk = mat_mul(m, mk);
        Rat tr = 0;
        for (size_t i = 0; i < n; ++i) tr += mk[i][i];
        c[n - k] = -tr / Rat((long)k);
        for (size_t i = 0; i < n; ++i) mk[i][i] += c[n - k];
    }
    return c;
}

struct EigenPair {
    Rat value;
    Subspace space;
};

/** Eigenspace ker(M - lambda I) for one candidate value. */
inline Subspace eigenspace(const Mat& m, const Rat& lambda) {
    Mat a = m;
    for (size_t i = 0; i < a.size(); ++i) a[i][i] -= lambda;
    return Subspace(kernel(std::move(a)), m.size());
}

/**
 * Split Q^n into eigenspaces of M.  Tries the caller-supplied candidate
 * eigenvalues first; if they do not exhaust the space, finds the remaining
 * rational eigenvalues from the exact characteristic polynomial (rational
 * root search).  Throws if M is not diagonalizable over Q, naming the
 * uncovered dimension.
 */
inline std::vector<EigenPair> eigen_split(const Mat& m, std::vector<Rat> candidates = {}) {
    const size_t n = m.size();
    std::vector<EigenPair> out;
    size_t covered = 0;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const Rat& lam : candidates) {
        Subspace s = eigenspace(m, lam);
        if (s.dim() > 0) {
            covered += s.dim();
            out.push_back({lam, std::move(s)});
        }
    }
    if (covered < n) {
        // rational roots p/q of the char poly: q | lcm of denominators after
        // clearing, p | constant term.  Clear denominators of M to an integer
        // matrix M' = s*M; eigenvalues of M' are integers dividing det-term.
        Int s = 1;
        for (const auto& row : m)
            for (const auto& x : row) {
                Int d = x.get_den();
                Int g;
                mpz_gcd(g.get_mpz_t(), s.get_mpz_t(), d.get_mpz_t());
                s = s / g * d;
            }
        Mat mi = m;
        for (auto& row : mi)
            for (auto& x : row) x *= Rat(s);
        std::vector<Rat> cp = char_poly(mi);
        // strip factors of x, collect integer divisors of the constant term
        size_t low = 0;
        while (low < cp.size() && cp[low] == 0) ++low;
        std::vector<Rat> roots;
        if (low > 0) roots.push_back(0);
        Int c0 = cp[low].get_num();  // cp of integer matrix has integer coeffs
        c0 = abs(c0);
        auto is_root = [&](const Rat& r) {
            Rat v = 0;
            for (size_t i = cp.size(); i-- > 0;) v = v * r + cp[i];
            return v == 0;
        };
        for (Int d = 1; d * d <= c0; ++d) {
            if (c0 % d != 0) continue;
            for (Int cand : {Int(d), Int(c0 / d)}) {
                if (is_root(Rat(cand))) roots.push_back(Rat(cand));
                if (is_root(Rat(-cand))) roots.push_back(Rat(-cand));
            }
        }
        for (const Rat& r : roots) {
            Rat lam = r / Rat(s);
            bool seen = false;
            for (const auto& ep : out)
                if (ep.value == lam) { seen = true; break; }
            if (seen) continue;
            Subspace sp = eigenspace(m, lam);
            if (sp.dim() > 0) {
                covered += sp.dim();
                out.push_back({lam, std::move(sp)});
            }
        }
    }
    if (covered != n)
        throw std::runtime_error("eigen_split: matrix not diagonalizable over Q; " +
                                 std::to_string(n - covered) +
                                 " dimension(s) uncovered by rational eigenvalues");
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    return out;
}

}  // namespace wordstat
