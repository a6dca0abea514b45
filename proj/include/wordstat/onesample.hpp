/**
 * The one-sample random-word model: words of length n with i.i.d. letters
 * drawn from a probability vector p.
 *
 * Provides the p-inner product on word combinations, the rational orthogonal
 * D basis of R^Sigma (first vector all-ones, the rest spanning its
 * p-orthogonal complement), the grading of a statistic by the number of
 * non-trivial tensor factors, the finer spectral components W_krm, merging
 * coefficients and matrices, exact finite-n second moments, and the leading
 * asymptotic covariance constants.
 *
 * The D basis is orthogonal but not orthonormal, keeping every entry
 * rational; second-moment formulas weight each matched non-trivial letter of
 * a merging pair by that letter's squared p-norm.
 */
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "operators.hpp"
#include "words.hpp"

namespace wordstat {

/** Strictly positive rational letter probabilities summing to one. */
struct ProbabilityVector {
    Alphabet alpha;
    std::vector<Rat> p;

    ProbabilityVector(Alphabet a, std::vector<Rat> probs)
        : alpha(std::move(a)), p(std::move(probs)) {
        if (p.size() != alpha.size())
            throw std::invalid_argument("ProbabilityVector: one probability per letter");
        Rat s = 0;
        for (const Rat& x : p) {
            if (x <= 0) throw std::invalid_argument("ProbabilityVector: probabilities must be > 0");
            s += x;
        }
        if (s != 1) throw std::invalid_argument("ProbabilityVector: probabilities must sum to 1");
    }

    static ProbabilityVector uniform(Alphabet a) {
        size_t d = a.size();
        return ProbabilityVector(std::move(a), std::vector<Rat>(d, Rat(1, (long)d)));
    }
};

/** Probability of a fixed word under i.i.d. letters: prod p_{x_i}. */
inline Rat word_probability(const ProbabilityVector& p, const Word& w) {
    Rat r = 1;
    for (char c : w) r *= p.p[p.alpha.index(c)];
    return r;
}

/** <f, g>_p = sum_u p_u f_u g_u over words of one common length. */
inline Rat inner_product_p(const WordCombination& f, const WordCombination& g,
                           const ProbabilityVector& p) {
    if (!f.is_zero() && !g.is_zero() && f.length() != g.length())
        throw std::invalid_argument("inner_product_p: length mismatch");
    Rat s = 0;
    for (auto& [u, c] : f.terms()) {
        Rat gc = g.coeff(u);
        if (gc != 0) s += word_probability(p, u) * c * gc;
    }
    return s;
}

/** Digit alphabet "12...d" used to index D-basis tensor words. */
inline Alphabet d_alphabet(size_t d) {
    if (d < 1 || d > 9)
        throw std::invalid_argument("d_alphabet: alphabet size must be in 1..9");
    std::string s;
    for (size_t i = 1; i <= d; ++i) s.push_back(static_cast<char>('0' + i));
    return Alphabet(s);
}

/**
 * Rational orthogonal basis of R^Sigma under <.,.>_p.  Vector 1 is the
 * all-ones vector; vectors 2..d span its p-orthogonal complement.  Each is
 * scaled to a primitive integer vector with positive leading entry; squared
 * p-norms are stored.
 */
class DBasis {
public:
    explicit DBasis(ProbabilityVector p) : p_(std::move(p)) {
        const size_t d = p_.alpha.size();
        Mat seed;
        for (size_t x = 1; x < d; ++x) {
            // x - (p_x / p_a) a is p-orthogonal to the all-ones vector
            Vec v(d, 0);
            v[x] = 1;
            v[0] = -p_.p[x] / p_.p[0];
            seed.push_back(std::move(v));
        }
        OrthoBasis ob = gram_schmidt(seed, BilinearForm::diagonal(p_.p));
        vectors_.push_back(Vec(d, 1));
        norms2_.push_back(1);  // <1,1>_p = sum p_x = 1
        for (Vec v : ob.vectors) {
            // rescale to primitive integer entries, leading entry positive
            Int num_gcd = 0, den_lcm = 1;
            for (const Rat& x : v) {
                if (x == 0) continue;
                Int g;
                mpz_gcd(g.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
                den_lcm = den_lcm / g * x.get_den();
            }
            for (Rat& x : v) x *= Rat(den_lcm);
            for (const Rat& x : v) {
                Int g;
                mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num().get_mpz_t());
                num_gcd = g;
            }
            if (num_gcd != 0)
                for (Rat& x : v) x /= Rat(num_gcd);
            for (const Rat& x : v) {
                if (x == 0) continue;
                if (x < 0)
                    for (Rat& y : v) y = -y;
                break;
            }
            norms2_.push_back(dot_weighted(v, v, p_.p));
            vectors_.push_back(std::move(v));
        }
    }

    const ProbabilityVector& prob() const { return p_; }
    size_t dim() const { return vectors_.size(); }
    /** Basis vector i (0-based; index 0 is the all-ones vector). */
    const Vec& vector(size_t i) const { return vectors_.at(i); }
    const Rat& norm2(size_t i) const { return norms2_.at(i); }

    /** Expansion coefficient of letter x over basis vector i:
     *  alpha_{x,i} = p_x v_i[x] / <v_i, v_i>_p. */
    Rat letter_coefficient(size_t x, size_t i) const {
        return p_.p[x] * vectors_[i][x] / norms2_[i];
    }

    /** Squared p-norm of a D-word (product over its digits). */
    Rat word_norm2(const Word& e) const {
        Rat r = 1;
        for (char c : e) r *= norms2_[static_cast<size_t>(c - '1')];
        return r;
    }

private:
    ProbabilityVector p_;
    Mat vectors_;
    std::vector<Rat> norms2_;
};

/** Rewrite a statistic over letter words as a combination of D-words. */
inline WordCombination to_d_basis(const WordCombination& f, const DBasis& b) {
    const size_t d = b.dim();
    Alphabet da = d_alphabet(d);
    WordCombination out(da);
    for (auto& [u, c] : f.terms()) {
        std::vector<Word> cur{Word()};
        std::vector<Rat> coef{c};
        for (char ch : u) {
            size_t x = b.prob().alpha.index(ch);
            std::vector<Word> nw;
            std::vector<Rat> nc;
            for (size_t t = 0; t < cur.size(); ++t)
                for (size_t i = 0; i < d; ++i) {
                    Rat a = b.letter_coefficient(x, i);
                    if (a == 0) continue;
                    nw.push_back(cur[t] + da.letter(i));
                    nc.push_back(coef[t] * a);
                }
            cur = std::move(nw);
            coef = std::move(nc);
        }
        for (size_t t = 0; t < cur.size(); ++t) out.add(cur[t], coef[t]);
    }
    return out;
}

/** Inverse of to_d_basis: expand D-words back into letter words. */
inline WordCombination from_d_basis(const WordCombination& fd, const DBasis& b) {
    const Alphabet& sigma = b.prob().alpha;
    WordCombination out(sigma);
    for (auto& [e, c] : fd.terms()) {
        std::vector<Word> cur{Word()};
        std::vector<Rat> coef{c};
        for (char ch : e) {
            size_t i = static_cast<size_t>(ch - '1');
            std::vector<Word> nw;
            std::vector<Rat> nc;
            for (size_t t = 0; t < cur.size(); ++t)
                for (size_t x = 0; x < sigma.size(); ++x) {
                    const Rat& v = b.vector(i)[x];
                    if (v == 0) continue;
                    nw.push_back(cur[t] + sigma.letter(x));
                    nc.push_back(coef[t] * v);
                }
            cur = std::move(nw);
            coef = std::move(nc);
        }
        for (size_t t = 0; t < cur.size(); ++t) out.add(cur[t], coef[t]);
    }
    return out;
}

/** Number of non-trivial (non-1) digits of a D-word. */
inline long d_rank(const Word& e) {
    long r = 0;
    for (char c : e)
        if (c != '1') ++r;
    return r;
}

/**
 * Grading of a length-k statistic: f = sum_r f_r with f_r spanned by
 * D-words carrying exactly r non-trivial letters.  Returned over the
 * original letter alphabet, indexed by r = 0..k.
 */
inline std::vector<WordCombination> grade(const WordCombination& f, const DBasis& b) {
    long k = f.length() < 0 ? 0 : f.length();
    WordCombination fd = to_d_basis(f, b);
    std::vector<WordCombination> parts(static_cast<size_t>(k) + 1,
                                       WordCombination(d_alphabet(b.dim())));
    for (auto& [e, c] : fd.terms()) parts[d_rank(e)].add(e, c);
    std::vector<WordCombination> out;
    for (auto& pd : parts) out.push_back(from_d_basis(pd, b));
    return out;
}

/** All D-words of length k with exactly r non-trivial digits, sorted. */
inline std::vector<Word> d_words_kr(size_t d, long k, long r) {
    std::vector<Word> out;
    for (const Word& e : enumerate_words(d_alphabet(d), k))
        if (d_rank(e) == r) out.push_back(e);
    return out;
}

/** Coordinates of a D-word combination in the lexicographic D^k basis. */
inline Vec d_coordinates(const WordCombination& fd, size_t d, long k) {
    std::vector<Word> all = enumerate_words(d_alphabet(d), k);
    Vec v(all.size(), 0);
    for (size_t i = 0; i < all.size(); ++i) v[i] = fd.coeff(all[i]);
    return v;
}

/** Diagonal p-form weights of the D^k basis (squared norms per D-word). */
inline Vec d_form_weights(const DBasis& b, long k) {
    std::vector<Word> all = enumerate_words(d_alphabet(b.dim()), k);
    Vec w;
    w.reserve(all.size());
    for (const Word& e : all) w.push_back(b.word_norm2(e));
    return w;
}

/**
 * Spectral component W_krm inside the grade-r space:
 * ker(del^{k-r-m+1}) cap (ker del^{k-r-m})^perp, del deleting the trivial
 * letter, orthogonality under the p-form.  Ambient: D^k lexicographic basis.
 */
inline Subspace component_basis(long k, long r, long m, const DBasis& b) {
    const size_t d = b.dim();
    if (r < 0 || r > k || m < 0 || m > k - r)
        throw std::invalid_argument("component_basis: need 0 <= r <= k, 0 <= m <= k-r");
    Alphabet da = d_alphabet(d);
    std::vector<Word> wkr = d_words_kr(d, k, r);
    size_t ambient = enumerate_words(da, k).size();
    std::map<Word, size_t> pos;
    {
        std::vector<Word> all = enumerate_words(da, k);
        for (size_t i = 0; i < all.size(); ++i) pos[all[i]] = i;
    }
    auto embed = [&](const Mat& coords) {
        Mat rows;
        for (const Vec& c : coords) {
            Vec v(ambient, 0);
            for (size_t j = 0; j < wkr.size(); ++j) v[pos[wkr[j]]] = c[j];
            rows.push_back(std::move(v));
        }
        return Subspace(std::move(rows), ambient);
    };
    // kernel of del^j restricted to the grade-r words
    auto ker_del = [&](long j) {
        if (j <= 0) return Subspace({}, ambient);  // ker of the identity
        if (j > k - r) {
            Mat id = mat_identity(wkr.size());
            return embed(id);  // del^j annihilates everything in grade r
        }
        auto op = [&](const WordCombination& f) {
            WordCombination g = f;
            for (long t = 0; t < j; ++t) g = delete_word("1", g);
            return g;
        };
        Mat mj = matrix_of(op, da, wkr, enumerate_words(da, k - j));
        return embed(kernel(mj));
    };
    Subspace wkr_space = embed(mat_identity(wkr.size()));
    BilinearForm form = BilinearForm::diagonal(d_form_weights(b, k));
    Subspace a = ker_del(k - r - m + 1);
    Subspace bperp = orthogonal_complement_within(ker_del(k - r - m), wkr_space, form);
    return a.intersect(bperp);
}

/**
 * Weighted merging sums: result[s] is the total weight of mergings of e and
 * e' with exactly s shared positions.  A shared position must carry equal
 * digits and contributes that digit's squared norm (1 for the trivial
 * digit); unshared positions must carry the trivial digit.  With all
 * weights 1 this counts the merging sets |M_l| at l = |e|+|e'|-s.
 */
inline std::vector<Rat> merging_by_shared(const Word& e, const Word& ep,
                                          const std::vector<Rat>& digit_weight) {
    const size_t k = e.size(), kp = ep.size();
    const size_t smax = std::min(k, kp);
    // dp[i][j][s]: weighted count of interleavings consuming i of e, j of e'
    std::vector<std::vector<std::vector<Rat>>> dp(
        k + 1, std::vector<std::vector<Rat>>(kp + 1, std::vector<Rat>(smax + 1, 0)));
    dp[0][0][0] = 1;
    for (size_t i = 0; i <= k; ++i)
        for (size_t j = 0; j <= kp; ++j)
            for (size_t s = 0; s <= smax; ++s) {
                const Rat& cur = dp[i][j][s];
                if (cur == 0) continue;
                if (i < k && e[i] == '1') dp[i + 1][j][s] += cur;
                if (j < kp && ep[j] == '1') dp[i][j + 1][s] += cur;
                if (i < k && j < kp && e[i] == ep[j] && s < smax) {
                    Rat w = digit_weight.empty()
                                ? Rat(1)
                                : digit_weight[static_cast<size_t>(e[i] - '1')];
                    dp[i + 1][j + 1][s + 1] += cur * w;
                }
            }
    return dp[k][kp];
}

/** m_l(e, e'): size of the l-th merging set of two D-words. */
inline Int merging_coefficient(const Word& e, const Word& ep, long l) {
    long k = (long)e.size(), kp = (long)ep.size();
    long s = k + kp - l;
    if (s < 0 || s > std::min(k, kp)) return 0;
    std::vector<Rat> by_s = merging_by_shared(e, ep, {});
    return by_s[s].get_num();
}

/** Exact E[#e(w) #e'(w)] over W(n,p) for D-words, using the stored norms. */
inline Rat exact_moment_d_words(const Word& e, const Word& ep, long n, const DBasis& b) {
    std::vector<Rat> weights;
    for (size_t i = 0; i < b.dim(); ++i) weights.push_back(b.norm2(i));
    std::vector<Rat> by_s = merging_by_shared(e, ep, weights);
    long k = (long)e.size(), kp = (long)ep.size();
    Rat total = 0;
    for (size_t s = 0; s < by_s.size(); ++s)
        if (by_s[s] != 0) total += by_s[s] * Rat(binom(n, k + kp - (long)s));
    return total;
}

/** Exact second moment E[#f(w) #f'(w)] over W(n,p). */
inline Rat exact_moment_one_sample(const WordCombination& f, const WordCombination& fp,
                                   long n, const DBasis& b) {
    if (f.length() > n || fp.length() > n)
        throw std::invalid_argument("exact_moment_one_sample: n shorter than the statistic");
    WordCombination fd = to_d_basis(f, b), fpd = to_d_basis(fp, b);
    Rat total = 0;
    for (auto& [e, c] : fd.terms())
        for (auto& [ep, cp] : fpd.terms())
            total += c * cp * exact_moment_d_words(e, ep, n, b);
    return total;
}

/** Merging matrix M_kr over the grade-r two-digit words, entries m_{2k-r}. */
inline Mat merging_matrix(long k, long r) {
    if (r < 0 || r > k) throw std::invalid_argument("merging_matrix: need 0 <= r <= k");
    std::vector<Word> basis = d_words_kr(2, k, r);
    Mat m = mat_zero(basis.size(), basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j)
            m[i][j] = Rat(merging_coefficient(basis[i], basis[j], 2 * k - r));
    return m;
}

/**
 * Spectral decomposition of M_kr: eigenvalues mu_krm = C(2k-r, k+m) with
 * eigenspaces matching the two-letter components, m = 0..k-r.  The returned
 * subspaces live in the grade-r coordinate space of d_words_kr(2, k, r).
 */
inline std::vector<EigenPair> spectrum_M(long k, long r) {
    Mat m = merging_matrix(k, r);
    std::vector<Rat> candidates;
    for (long mm = 0; mm <= k - r; ++mm) candidates.push_back(Rat(binom(2 * k - r, k + mm)));
    return eigen_split(m, candidates);
}

/**
 * Leading covariance constant of Theorem-2 type: for f, f' of common length
 * k lying in one spectral component (k, r, m) each, the limit of
 * n^r E[bar#f bar#f'] is (k!)^2 <f,f'>_p / ((k+m)! (k-r-m)!), and 0 when the
 * components differ.  Inputs mixing several r or several m are rejected.
 */
inline Rat asymptotic_covariance_one_sample(const WordCombination& f,
                                            const WordCombination& fp, const DBasis& b) {
    if (f.is_zero() || fp.is_zero()) return 0;
    if (f.length() != fp.length())
        throw std::invalid_argument("asymptotic_covariance_one_sample: length mismatch");
    const long k = f.length();
    auto locate = [&](const WordCombination& g) {
        WordCombination gd = to_d_basis(g, b);
        long r = -1;
        for (auto& [e, c] : gd.terms()) {
            long re = d_rank(e);
            if (r < 0) r = re;
            else if (r != re)
                throw std::invalid_argument(
                    "asymptotic_covariance_one_sample: input mixes grades; grade() first");
        }
        Vec coords = d_coordinates(gd, b.dim(), k);
        for (long m = 0; m <= k - r; ++m)
            if (component_basis(k, r, m, b).contains(coords)) return std::pair<long, long>{r, m};
        throw std::invalid_argument(
            "asymptotic_covariance_one_sample: input mixes spectral components");
    };
    auto [r, m] = locate(f);
    auto [rp, mp] = locate(fp);
    if (r != rp || m != mp) return 0;
    Rat num = Rat(factorial(k)) * Rat(factorial(k)) * inner_product_p(f, fp, b.prob());
    return num / (Rat(factorial(k + m)) * Rat(factorial(k - r - m)));
}

}  // namespace wordstat
