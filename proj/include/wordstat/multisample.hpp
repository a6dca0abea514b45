/**
 * The multi-sample random-word model: words drawn uniformly from all
 * arrangements of a fixed letter multiset n = (n_x).
 *
 * Provides the normalized embeddings between composition spaces, Specht
 * subspaces and the Young-rule decomposition of a composition space, the
 * grading by the first-row deficit, the rank of a statistic, the merging
 * coefficients m_r and exact finite-n moments, the asymptotic covariance
 * constant, and the full two-sample spectral components with their
 * eigenvalues.
 */
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "onesample.hpp"
#include "operators.hpp"
#include "words.hpp"

namespace wordstat {

/** Normalized embedding: raise the composition of f to kappa_target by
 *  iterating (1/(k_x+1)) sha_x; the result is order-independent. */
inline WordCombination embed(const WordCombination& f, const Composition& target) {
    if (f.is_zero()) return f;
    Composition cur = f.composition();
    if (!(cur <= target))
        throw std::invalid_argument("embed: target composition below the current one");
    WordCombination out = f;
    for (size_t x = 0; x < target.counts.size(); ++x)
        for (long t = cur.counts[x]; t < target.counts[x]; ++t)
            out = Rat(1, t + 1) * shuffle_insert(Word(1, f.alphabet().letter(x)), out);
    return out;
}

/** Coordinates of f over the sorted words of its composition class. */
inline Vec composition_coordinates(const WordCombination& f, const Composition& kappa) {
    std::vector<Word> basis = enumerate_by_composition(f.alphabet(), kappa);
    Vec v(basis.size(), 0);
    for (size_t i = 0; i < basis.size(); ++i) v[i] = f.coeff(basis[i]);
    return v;
}

/** Rebuild a combination from composition-class coordinates. */
inline WordCombination from_composition_coordinates(const Alphabet& a, const Composition& kappa,
                                                    const Vec& v) {
    std::vector<Word> basis = enumerate_by_composition(a, kappa);
    WordCombination f(a);
    for (size_t i = 0; i < basis.size(); ++i) f.add(basis[i], v[i]);
    return f;
}

/**
 * The top Specht subspace of the composition space of lambda (a partition):
 * the joint kernel of the raising replacements Theta_{x_{i+1} x_i}.
 */
inline Subspace specht_subspace(const Alphabet& a, const Composition& lambda) {
    if (!lambda.is_partition())
        throw std::invalid_argument("specht_subspace: shape must be a partition");
    std::vector<Word> basis = enumerate_by_composition(a, lambda);
    Subspace cur(mat_identity(basis.size()), basis.size());
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        if (lambda.counts[i + 1] == 0) continue;
        char hi = a.letter(i + 1), lo = a.letter(i);
        Composition out_comp = lambda;
        out_comp.counts[i + 1] -= 1;
        out_comp.counts[i] += 1;
        auto op = [&](const WordCombination& f) { return theta(hi, lo, f); };
        Mat m = matrix_of(op, a, basis, enumerate_by_composition(a, out_comp));
        cur = cur.intersect(Subspace(kernel(m), basis.size()));
    }
    return cur;
}

/** A Young-rule component: a semistandard table and the subspace it spans. */
struct YoungComponent {
    ReplacementTable table;
    Composition shape;
    Subspace space;  // inside the composition space of kappa
};

/** All semistandard tables with the given content, i.e. SSYT fillings. */
inline std::vector<ReplacementTable> semistandard_tables(const Alphabet& a,
                                                         const Composition& kappa) {
    if (!kappa.is_partition())
        throw std::invalid_argument("semistandard_tables: content must be a partition");
    const size_t d = a.size();
    long k = kappa.total();
    std::vector<ReplacementTable> out;
    // enumerate partition shapes with at most d rows, then fill row by row
    std::vector<long> shape;
    auto fill = [&](auto&& self, std::vector<Word>& rows, std::vector<long>& used,
                    size_t row, size_t col) -> void {
        if (row == shape.size()) {
            std::vector<Word> padded = rows;
            padded.resize(d);
            ReplacementTable t(a, padded);
            if (t.semistandard()) out.push_back(t);
            return;
        }
        if (col == static_cast<size_t>(shape[row])) {
            self(self, rows, used, row + 1, 0);
            return;
        }
        for (size_t x = 0; x < d; ++x) {
            if (used[x] >= kappa.counts[x]) continue;
            char c = a.letter(x);
            if (col > 0 && a.index(rows[row][col - 1]) > x) continue;
            if (row > 0 && (rows[row - 1].size() <= col ||
                            a.index(rows[row - 1][col]) >= x))
                continue;
            rows[row].push_back(c);
            used[x]++;
            self(self, rows, used, row, col + 1);
            used[x]--;
            rows[row].pop_back();
        }
    };
    auto shapes = [&](auto&& self, long left, long maxpart) -> void {
        if (left == 0) {
            if (shape.size() > d) return;
            std::vector<Word> rows(shape.size());
            std::vector<long> used(d, 0);
            fill(fill, rows, used, 0, 0);
            return;
        }
        for (long p = std::min(left, maxpart); p >= 1; --p) {
            shape.push_back(p);
            self(self, left - p, p);
            shape.pop_back();
        }
    };
    shapes(shapes, k, k);
    return out;
}

/**
 * Young-rule decomposition of the composition space of kappa: one component
 * Theta[T] S^{lambda(T)} per semistandard table T of content kappa.  Within
 * an isotypic block the raw copies need not be orthogonal; each copy is
 * replaced by its part orthogonal to the earlier copies of the same shape,
 * which is again an equivariant realization.
 */
inline std::vector<YoungComponent> young_decomposition(const Alphabet& a,
                                                       const Composition& kappa) {
    std::vector<Word> ambient = enumerate_by_composition(a, kappa);
    std::vector<YoungComponent> out;
    for (const ReplacementTable& t : semistandard_tables(a, kappa)) {
        Composition lambda = t.shape();
        Subspace s = specht_subspace(a, lambda);
        std::vector<Word> dom = enumerate_by_composition(a, lambda);
        Mat rows;
        for (const Vec& v : s.basis()) {
            WordCombination f(a);
            for (size_t i = 0; i < dom.size(); ++i) f.add(dom[i], v[i]);
            rows.push_back(composition_coordinates(replace(t, f), kappa));
        }
        Subspace realized(rows, ambient.size());
        // orthogonalize against earlier copies of the same shape
        for (const YoungComponent& prev : out) {
            if (!(prev.shape == lambda)) continue;
            Subspace joint = realized.sum(prev.space);
            realized = orthogonal_complement_within(prev.space, joint,
                                                    BilinearForm::standard(ambient.size()));
        }
        out.push_back(YoungComponent{t, lambda, std::move(realized)});
    }
    return out;
}

/** Grade of a Young component: the first-row deficit r = k - lambda_0. */
inline long young_grade(const YoungComponent& c) {
    return c.shape.total() - c.shape.counts[0];
}

/**
 * Grading of a multi-sample statistic: f = sum_r f_r where f_r collects the
 * Young components whose first row has length k - r.  Indexed r = 0..k.
 */
inline std::vector<WordCombination> grade_multi(const WordCombination& f) {
    if (f.is_zero()) return {};
    Composition kappa = f.composition();
    long k = kappa.total();
    // sort kappa into a partition by relabeling is not needed: Young's rule
    // requires a partition content, so validate here
    if (!kappa.is_partition())
        throw std::invalid_argument(
            "grade_multi: composition must be weakly decreasing in the letter order");
    const Alphabet& a = f.alphabet();
    std::vector<YoungComponent> comps = young_decomposition(a, kappa);
    // assemble the full change of basis and solve for the coordinates of f
    std::vector<Word> ambient = enumerate_by_composition(a, kappa);
    Mat columns;  // ambient x total-dim
    std::vector<long> col_grade;
    for (const YoungComponent& c : comps)
        for (const Vec& v : c.space.basis()) {
            columns.push_back(v);
            col_grade.push_back(young_grade(c));
        }
    Mat system = mat_transpose(columns);
    auto x = solve(system, composition_coordinates(f, kappa));
    if (!x)
        throw std::runtime_error("grade_multi: Young components do not span the space");
    std::vector<Vec> parts(static_cast<size_t>(k - kappa.counts[0]) + 1,
                           Vec(ambient.size(), 0));
    for (size_t j = 0; j < columns.size(); ++j)
        if ((*x)[j] != 0)
            parts[col_grade[j]] =
                vec_add(std::move(parts[col_grade[j]]), vec_scale(columns[j], (*x)[j]));
    std::vector<WordCombination> out;
    for (auto& v : parts) out.push_back(from_composition_coordinates(a, kappa, v));
    return out;
}

/** Rank: the smallest r with a nonzero grade-r component. */
inline long rank_multi(const WordCombination& f) {
    if (f.is_zero()) throw std::invalid_argument("rank_multi: zero statistic");
    auto parts = grade_multi(f);
    for (size_t r = 0; r < parts.size(); ++r)
        if (!parts[r].is_zero()) return static_cast<long>(r);
    throw std::runtime_error("rank_multi: decomposition lost the statistic");
}

/** Replace all but r_x occurrences of every letter by the fresh trivial
 *  letter '1', normalized by the multiplicities: prod Theta_x1^{k_x-r_x}/(k_x-r_x)!. */
inline WordCombination theta_to_trivial(const WordCombination& f, const Composition& r) {
    const Alphabet& a = f.alphabet();
    if (a.contains('1'))
        throw std::invalid_argument("theta_to_trivial: alphabet already uses '1'");
    Alphabet ext(std::string("1") + a.letters());
    WordCombination g(ext);
    for (auto& [w, c] : f.terms()) g.add(w, c);
    Composition kappa = f.composition();
    for (size_t x = 0; x < a.size(); ++x) {
        long reps = kappa.counts[x] - r.counts[x];
        if (reps < 0) throw std::invalid_argument("theta_to_trivial: r exceeds kappa");
        g = theta_power(a.letter(x), '1', reps, std::move(g));
        g = Rat(1, 1) / Rat(factorial(reps)) * g;
    }
    return g;
}

/**
 * The merging coefficient m_r(f, f'): the coefficient of
 * prod_x C(n_x, r_x) C(n_x - r_x, k_x - r_x) C(n_x - k_x, k_x - r_x)
 * in the exact second moment.  Computed by replacing letters with the
 * trivial one and enumerating maximal-length mergings.
 */
inline Rat m_r_coefficient(const WordCombination& f, const WordCombination& fp,
                           const Composition& r) {
    if (f.is_zero() || fp.is_zero()) return 0;
    Composition kappa = f.composition();
    if (!(fp.composition() == kappa))
        throw std::invalid_argument("m_r_coefficient: compositions differ");
    long k = kappa.total();
    if (k > 8) throw std::invalid_argument("m_r_coefficient: statistics longer than 8 unsupported");
    long rtot = r.total();
    long l = 2 * k - rtot;
    WordCombination tf = theta_to_trivial(f, r), tfp = theta_to_trivial(fp, r);
    Rat merge = 0;
    for (auto& [u, c] : tf.terms())
        for (auto& [up, cp] : tfp.terms())
            merge += c * cp * Rat(merging_coefficient(u, up, l));
    Rat pref = 1;
    for (size_t x = 0; x < kappa.counts.size(); ++x) {
        long kx = kappa.counts[x], rx = r.counts[x];
        pref *= Rat(factorial(rx)) * Rat(factorial(kx - rx)) * Rat(factorial(kx - rx));
    }
    return pref / Rat(factorial(l)) * merge;
}

/** All compositions r with 0 <= r <= kappa pointwise. */
inline std::vector<Composition> compositions_below(const Composition& kappa) {
    std::vector<Composition> out{Composition{std::vector<long>{}}};
    for (long kx : kappa.counts) {
        std::vector<Composition> next;
        for (const Composition& c : out)
            for (long v = 0; v <= kx; ++v) {
                Composition e = c;
                e.counts.push_back(v);
                next.push_back(std::move(e));
            }
        out = std::move(next);
    }
    return out;
}

/** Exact E[#f #f'] when w is a uniformly random arrangement of the
 *  letter multiset n. */
inline Rat exact_moment_multi(const WordCombination& f, const WordCombination& fp,
                              const Composition& n) {
    if (f.is_zero() || fp.is_zero()) return 0;
    Composition kappa = f.composition();
    if (!(fp.composition() == kappa))
        throw std::invalid_argument("exact_moment_multi: compositions differ");
    if (!(kappa <= n))
        throw std::invalid_argument("exact_moment_multi: n below the composition");
    Rat total = 0;
    for (const Composition& r : compositions_below(kappa)) {
        Rat m = m_r_coefficient(f, fp, r);
        if (m == 0) continue;
        Rat w = 1;
        for (size_t x = 0; x < kappa.counts.size(); ++x) {
            long nx = n.counts[x], kx = kappa.counts[x], rx = r.counts[x];
            w *= Rat(binom(nx, rx)) * Rat(binom(nx - rx, kx - rx)) *
                 Rat(binom(nx - kx, kx - rx));
        }
        total += m * w;
    }
    return total;
}

/**
 * Asymptotic covariance constant: the limit of n^rank E[tilde#f tilde#f']
 * when the sample fractions converge to p.  Zero when the ranks differ.
 */
inline Rat asymptotic_covariance_multi(const WordCombination& f, const WordCombination& fp,
                                       const std::vector<Rat>& p) {
    long rank = rank_multi(f);
    if (rank_multi(fp) != rank) return 0;
    if (rank == 0)
        throw std::invalid_argument("asymptotic_covariance_multi: rank-0 statistic");
    Composition kappa = f.composition();
    if (p.size() != kappa.counts.size())
        throw std::invalid_argument("asymptotic_covariance_multi: fraction arity");
    Rat total = 0;
    for (const Composition& r : compositions_below(kappa)) {
        if (r.total() != rank) continue;
        Rat m = m_r_coefficient(f, fp, r);
        if (m == 0) continue;
        Rat w = 1;
        for (size_t x = 0; x < kappa.counts.size(); ++x) {
            long kx = kappa.counts[x], rx = r.counts[x];
            w *= Rat(factorial(kx)) * Rat(factorial(kx));
            w /= Rat(factorial(rx)) * Rat(factorial(kx - rx)) * Rat(factorial(kx - rx));
            for (long t = 0; t < rx; ++t) w /= p[x];
        }
        total += m * w;
    }
    return total;
}

/** The grade-r component of a two-letter composition space as a subspace:
 *  Theta_ab^{k_b - r} applied to the top Specht space of (k-r, r). */
inline Subspace two_letter_grade_space(const Alphabet& a, const Composition& kappa, long r) {
    if (kappa.counts.size() != 2)
        throw std::invalid_argument("two_letter_grade_space: need two letters");
    long kb = kappa.counts[1];
    std::vector<Word> ambient = enumerate_by_composition(a, kappa);
    Composition top{{kappa.counts[0] + kappa.counts[1] - r, r}};
    if (r < 0 || r > kb || !top.is_partition()) return Subspace({}, ambient.size());
    Subspace s = specht_subspace(a, top);
    std::vector<Word> dom = enumerate_by_composition(a, top);
    Mat rows;
    for (const Vec& v : s.basis()) {
        WordCombination g(a);
        for (size_t i = 0; i < dom.size(); ++i) g.add(dom[i], v[i]);
        g = theta_power(a.letter(0), a.letter(1), kb - r, std::move(g));
        rows.push_back(composition_coordinates(g, kappa));
    }
    return Subspace(rows, ambient.size());
}

/**
 * Two-sample spectral component W_{kappa r i j}: apply sha_a^i, the lift
 * L_b^j and Theta_ab^{k_b - r} to ker(del_a) inside the top Specht space of
 * (k-r-i, r-j).  Subspace of the composition space of kappa.
 */
inline Subspace two_sample_component(const Alphabet& a, const Composition& kappa, long r,
                                     long i, long j) {
    if (kappa.counts.size() != 2)
        throw std::invalid_argument("two_sample_component: need two letters");
    long ka = kappa.counts[0], kb = kappa.counts[1], k = ka + kb;
    if (ka < kb) throw std::invalid_argument("two_sample_component: need k_a >= k_b");
    if (r < 1 || r > kb || i < 0 || i > k - 2 * r || j < 0 || j > r - 1)
        throw std::invalid_argument("two_sample_component: index out of range");
    Composition src{{k - r - i, r - j}};
    std::vector<Word> dom = enumerate_by_composition(a, src);
    Subspace s = specht_subspace(a, src);
    // intersect with ker del_a
    Composition down = src;
    down.counts[0] -= 1;
    auto dela = [&](const WordCombination& g) { return delete_word(Word(1, a.letter(0)), g); };
    Mat dm = matrix_of(dela, a, dom, enumerate_by_composition(a, down));
    Subspace domspace = s.intersect(Subspace(kernel(dm), dom.size()));
    std::vector<Word> ambient = enumerate_by_composition(a, kappa);
    Mat rows;
    for (const Vec& v : domspace.basis()) {
        WordCombination g(a);
        for (size_t t = 0; t < dom.size(); ++t) g.add(dom[t], v[t]);
        for (long t = 0; t < i; ++t) g = shuffle_insert(Word(1, a.letter(0)), g);
        for (long t = 0; t < j; ++t) g = lift_b(g);
        g = theta_power(a.letter(0), a.letter(1), kb - r, std::move(g));
        if (g.is_zero()) continue;
        rows.push_back(composition_coordinates(g, kappa));
    }
    return Subspace(rows, ambient.size());
}

/** Dimension formula of the two-sample component. */
inline Int two_sample_component_dim(const Composition& kappa, long r, long i, long j) {
    long k = kappa.total();
    Int num = Int(k - 2 * r - i + j + 1) * factorial(k - i - j - 2);
    return num / (factorial(k - i - r) * factorial(r - j - 1));
}

/** Eigenvalue constant of the two-sample limit theorem. */
inline Rat lambda_eigenvalue(const Composition& kappa, long r, long i, long j) {
    long ka = kappa.counts[0], kb = kappa.counts[1], k = ka + kb;
    Rat num = Rat(factorial(ka)) * Rat(factorial(ka)) * Rat(factorial(kb)) *
              Rat(factorial(kb)) * Rat(factorial(k - 2 * r)) * Rat(factorial(k - 2 * r + 1));
    Rat den = Rat(factorial(ka - r)) * Rat(factorial(kb - r)) * Rat(factorial(i)) *
              Rat(factorial(2 * k - r - i - j)) * Rat(factorial(k - 2 * r + 1 + j));
    return num / den;
}

/** The (kappa, r)-merging matrix pair over the words of composition kappa:
 *  N with entries m_{2k-|r|} of the trivialized words, and its compression
 *  M = P N P onto the grade-|r| subspace. */
struct MomentMatrixPair {
    Mat n;
    Mat m;
};

inline MomentMatrixPair moment_matrices(const Alphabet& a, const Composition& kappa,
                                        const Composition& r) {
    std::vector<Word> basis = enumerate_by_composition(a, kappa);
    long k = kappa.total(), l = 2 * k - r.total();
    Mat n = mat_zero(basis.size(), basis.size());
    std::vector<WordCombination> trivialized;
    for (const Word& w : basis) {
        WordCombination f(a);
        f.add(w, 1);
        trivialized.push_back(theta_to_trivial(f, r));
    }
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i; j < basis.size(); ++j) {
            Rat s = 0;
            for (auto& [u, c] : trivialized[i].terms())
                for (auto& [up, cp] : trivialized[j].terms())
                    s += c * cp * Rat(merging_coefficient(u, up, l));
            n[i][j] = s;
            n[j][i] = s;
        }
    Subspace target = two_letter_grade_space(a, kappa, r.total());
    Mat p = projector(target.basis());
    MomentMatrixPair out;
    out.m = mat_mul(p, mat_mul(n, p));
    out.n = std::move(n);
    return out;
}

}  // namespace wordstat
