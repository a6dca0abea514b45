/**
 * The word-operator algebra: shuffle insertion sha_v, deletion del_v,
 * the right symmetric-group action, position-set averaging, letter
 * replacement tables Theta[T] and single-letter replacement Theta_xy,
 * lifting L_b, and the random-to-random operator R.
 *
 * All operators act on WordCombination and are extended linearly from
 * their action on single words.
 */
#pragma once

#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "words.hpp"

namespace wordstat {

/** u shuffle v: all interleavings, with multiplicity. */
inline void shuffle_words_into(const Word& u, const Word& v, const Word& prefix,
                               std::map<Word, Int>& out) {
    if (u.empty()) { out[prefix + v] += 1; return; }
    if (v.empty()) { out[prefix + u] += 1; return; }
    shuffle_words_into(u.substr(1), v, prefix + u[0], out);
    shuffle_words_into(u, v.substr(1), prefix + v[0], out);
}

/** sha_v f = f shuffle v, extended bilinearly. */
inline WordCombination shuffle_insert(const Word& v, const WordCombination& f) {
    WordCombination out(f.alphabet());
    f.alphabet().check_word(v);
    for (auto& [u, c] : f.terms()) {
        std::map<Word, Int> sh;
        shuffle_words_into(u, v, "", sh);
        for (auto& [w, m] : sh) out.add(w, c * Rat(m));
    }
    return out;
}

/** del_v u: sum over occurrences of v as a subsequence of u, removing it. */
inline void delete_occurrences_into(const Word& u, const Word& v, size_t ui, size_t vi,
                                    const Word& kept, std::map<Word, Int>& out) {
    if (vi == v.size()) { out[kept + u.substr(ui)] += 1; return; }
    if (u.size() - ui < v.size() - vi) return;
    // either position ui is kept, or it matches v[vi] and is removed
    delete_occurrences_into(u, v, ui + 1, vi, kept + u[ui], out);
    if (u[ui] == v[vi]) delete_occurrences_into(u, v, ui + 1, vi + 1, kept, out);
}

/** del_v f (0 when no occurrence of v). */
inline WordCombination delete_word(const Word& v, const WordCombination& f) {
    WordCombination out(f.alphabet());
    f.alphabet().check_word(v);
    for (auto& [u, c] : f.terms()) {
        std::map<Word, Int> del;
        delete_occurrences_into(u, v, 0, 0, "", del);
        for (auto& [w, m] : del) out.add(w, c * Rat(m));
    }
    return out;
}

/** Permutation of {1..k} in one-line notation (0-based internally). */
using Permutation = std::vector<int>;

inline Permutation identity_permutation(int k) {
    Permutation p(k);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

/** Finite rational combination of permutations of one common degree. */
class GroupAlgebraElement {
public:
    GroupAlgebraElement() = default;
    explicit GroupAlgebraElement(int degree) : k_(degree) {}

    int degree() const { return k_; }
    const std::map<Permutation, Rat>& terms() const { return terms_; }

    void add(const Permutation& p, const Rat& c) {
        if (static_cast<int>(p.size()) != k_)
            throw std::invalid_argument("GroupAlgebraElement: degree mismatch");
        if (c == 0) return;
        Rat& slot = terms_[p];
        slot += c;
        if (slot == 0) terms_.erase(p);
    }

private:
    int k_ = 0;
    std::map<Permutation, Rat> terms_;
};

/** Right action u tau = u_{tau(1)} ... u_{tau(k)}, extended bilinearly. */
inline WordCombination act(const WordCombination& f, const GroupAlgebraElement& g) {
    WordCombination out(f.alphabet());
    if (!f.is_zero() && f.length() != g.degree())
        throw std::invalid_argument("act: word length != permutation degree");
    for (auto& [u, c] : f.terms())
        for (auto& [p, gc] : g.terms()) {
            Word w(u.size(), ' ');
            for (size_t i = 0; i < u.size(); ++i) w[i] = u[p[i]];
            out.add(w, c * gc);
        }
    return out;
}

/** a_I: sum of the (k-|I|)! permutations fixing each position of I. */
inline GroupAlgebraElement averaging_element(const std::set<int>& fixed, int k) {
    for (int i : fixed)
        if (i < 1 || i > k)
            throw std::invalid_argument("averaging_element: index outside 1..k");
    std::vector<int> free_pos;
    for (int i = 0; i < k; ++i)
        if (!fixed.count(i + 1)) free_pos.push_back(i);
    GroupAlgebraElement out(k);
    std::vector<int> perm(free_pos);
    std::sort(perm.begin(), perm.end());
    do {
        Permutation p = identity_permutation(k);
        for (size_t j = 0; j < free_pos.size(); ++j) p[free_pos[j]] = perm[j];
        out.add(p, 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/**
 * f * a_I computed combinatorially: for each word, the letters on the free
 * positions are rearranged; each distinct arrangement of their multiset
 * appears with coefficient prod_x (free multiplicity of x)!.
 */
inline WordCombination act_averaging(const WordCombination& f, const std::set<int>& fixed) {
    WordCombination out(f.alphabet());
    for (auto& [u, c] : f.terms()) {
        const int k = static_cast<int>(u.size());
        std::vector<int> free_pos;
        for (int i = 0; i < k; ++i)
            if (!fixed.count(i + 1)) free_pos.push_back(i);
        std::string letters;
        for (int i : free_pos) letters.push_back(u[i]);
        std::sort(letters.begin(), letters.end());
        Rat mult = 1;
        for (size_t i = 0; i < letters.size();) {
            size_t j = i;
            while (j < letters.size() && letters[j] == letters[i]) ++j;
            mult *= Rat(factorial(static_cast<long>(j - i)));
            i = j;
        }
        do {
            Word w = u;
            for (size_t j = 0; j < free_pos.size(); ++j) w[free_pos[j]] = letters[j];
            out.add(w, c * mult);
        } while (std::next_permutation(letters.begin(), letters.end()));
    }
    return out;
}

/**
 * Replacement table: one word t_x per alphabet letter x.  Acting on a word
 * whose letter counts match the table's shape, the occurrences of each x are
 * replaced by the letters of t_x, summed over distinct arrangements.
 */
class ReplacementTable {
public:
    ReplacementTable(Alphabet a, std::vector<Word> rows)
        : alpha_(std::move(a)), rows_(std::move(rows)) {
        if (rows_.size() != alpha_.size())
            throw std::invalid_argument("ReplacementTable: one row per letter required");
        for (const Word& t : rows_) alpha_.check_word(t);
    }

    const Alphabet& alphabet() const { return alpha_; }
    const Word& row(size_t x) const { return rows_[x]; }

    /** shape: lambda_x = |t_x| (letter counts of valid inputs). */
    Composition shape() const {
        Composition s;
        for (const Word& t : rows_) s.counts.push_back(static_cast<long>(t.size()));
        return s;
    }
    /** content: kappa_x = total occurrences of x across all rows (output counts). */
    Composition content() const {
        Composition s;
        s.counts.assign(alpha_.size(), 0);
        for (const Word& t : rows_)
            for (char ch : t) s.counts[alpha_.index(ch)]++;
        return s;
    }

    /** Rows weakly increasing, columns strictly increasing, shape and content
     *  both partitions (letters ordered by alphabet position). */
    bool semistandard() const {
        if (!shape().is_partition() || !content().is_partition()) return false;
        for (const Word& t : rows_)
            for (size_t j = 0; j + 1 < t.size(); ++j)
                if (alpha_.index(t[j]) > alpha_.index(t[j + 1])) return false;
        for (size_t x = 0; x + 1 < rows_.size(); ++x)
            for (size_t j = 0; j < rows_[x + 1].size(); ++j) {
                if (j >= rows_[x].size()) return false;  // shape not a partition rowwise
                if (alpha_.index(rows_[x][j]) >= alpha_.index(rows_[x + 1][j])) return false;
            }
        return true;
    }

private:
    Alphabet alpha_;
    std::vector<Word> rows_;
};

/** Theta[T] f: per-letter multiset arrangements into that letter's positions. */
inline WordCombination replace(const ReplacementTable& t, const WordCombination& f) {
    WordCombination out(f.alphabet());
    if (f.is_zero()) return out;
    if (f.alphabet() != t.alphabet())
        throw std::invalid_argument("replace: alphabet mismatch");
    if (!(f.composition() == t.shape()))
        throw std::invalid_argument("replace: input composition differs from table shape");
    const Alphabet& a = f.alphabet();
    for (auto& [u, c] : f.terms()) {
        // positions of each letter, and the sorted multiset that will fill them
        std::vector<std::vector<int>> pos(a.size());
        for (size_t i = 0; i < u.size(); ++i)
            pos[a.index(u[i])].push_back(static_cast<int>(i));
        std::vector<Word> fill(a.size());
        for (size_t x = 0; x < a.size(); ++x) {
            fill[x] = t.row(x);
            std::sort(fill[x].begin(), fill[x].end());
        }
        // iterate over the product of distinct arrangements per letter
        Word w = u;
        std::function<void(size_t)> rec = [&](size_t x) {
            if (x == a.size()) { out.add(w, c); return; }
            if (pos[x].empty()) { rec(x + 1); return; }
            Word arr = fill[x];
            do {
                for (size_t j = 0; j < arr.size(); ++j) w[pos[x][j]] = arr[j];
                rec(x + 1);
            } while (std::next_permutation(arr.begin(), arr.end()));
            for (size_t j = 0; j < fill[x].size(); ++j) w[pos[x][j]] = u[pos[x][j]];
        };
        rec(0);
    }
    return out;
}

/** Theta_xy f: replace one occurrence of x by y (0 on words without x). */
inline WordCombination theta(char x, char y, const WordCombination& f) {
    WordCombination out(f.alphabet());
    f.alphabet().index(x);
    f.alphabet().index(y);
    for (auto& [u, c] : f.terms())
        for (size_t i = 0; i < u.size(); ++i)
            if (u[i] == x) {
                Word w = u;
                w[i] = y;
                out.add(w, c);
            }
    return out;
}

/** Repeated single-letter replacement Theta_xy^power. */
inline WordCombination theta_power(char x, char y, long power, WordCombination f) {
    for (long i = 0; i < power; ++i) f = theta(x, y, f);
    return f;
}

/**
 * Lift L_b f = sha_b f - 1/(k_a - k_b + 1) Theta_ab sha_a f for a combination
 * of two-letter composition (k_a, k_b); raises k_b by one.
 */
inline WordCombination lift_b(const WordCombination& f) {
    Composition kappa = f.composition();
    if (kappa.counts.size() < 2)
        throw std::invalid_argument("lift_b: needs a two-letter alphabet");
    long ka = kappa.counts[0], kb = kappa.counts[1];
    if (ka - kb + 1 == 0) throw std::invalid_argument("lift_b: k_a - k_b + 1 = 0");
    char a = f.alphabet().letter(0), b = f.alphabet().letter(1);
    WordCombination out = shuffle_insert(Word(1, b), f);
    out -= Rat(1, ka - kb + 1) * theta(a, b, shuffle_insert(Word(1, a), f));
    return out;
}

/** Rename letters via a bijection of the alphabet onto itself. */
inline WordCombination relabel(const WordCombination& f, const std::map<char, char>& sigma) {
    WordCombination out(f.alphabet());
    for (auto& [u, c] : f.terms()) {
        Word w = u;
        for (char& ch : w) {
            auto it = sigma.find(ch);
            if (it != sigma.end()) ch = it->second;
        }
        out.add(w, c);
    }
    return out;
}

/** Random-to-random operator R = sum_x sha_x del_x. */
inline WordCombination random_to_random(const WordCombination& f) {
    WordCombination out(f.alphabet());
    for (size_t x = 0; x < f.alphabet().size(); ++x) {
        Word v(1, f.alphabet().letter(x));
        out += shuffle_insert(v, delete_word(v, f));
    }
    return out;
}

/**
 * Exact matrix of a linear word operator in given word bases: column j holds
 * the expansion of op(domain[j]) over the codomain words.  Errors if the
 * image leaves the codomain span.
 */
inline Mat matrix_of(const std::function<WordCombination(const WordCombination&)>& op,
                     const Alphabet& a, const std::vector<Word>& domain,
                     const std::vector<Word>& codomain) {
    std::map<Word, size_t> index;
    for (size_t i = 0; i < codomain.size(); ++i) index[codomain[i]] = i;
    Mat m = mat_zero(codomain.size(), domain.size());
    for (size_t j = 0; j < domain.size(); ++j) {
        WordCombination e(a);
        e.add(domain[j], 1);
        WordCombination img = op(e);
        for (auto& [w, c] : img.terms()) {
            auto it = index.find(w);
            if (it == index.end())
                throw std::invalid_argument("matrix_of: image word '" + w +
                                            "' outside codomain basis");
            m[it->second][j] = c;
        }
    }
    return m;
}

}  // namespace wordstat
