/**
 * Alphabets, words, compositions, subsequence counting, and formal rational
 * linear combinations of words.
 *
 * A Word is a plain std::string over a declared Alphabet (one char per
 * letter).  #u(w) counts occurrences of u as a (not necessarily contiguous)
 * subsequence of w.  A WordCombination is a sparse map word -> rational, all
 * words of one common length; it induces the statistic #f(w) by linearity.
 */
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace wordstat {

using Word = std::string;

/** Ordered finite alphabet; letter order is fixed and meaningful. */
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::string letters) : letters_(std::move(letters)) {
        for (size_t i = 0; i < letters_.size(); ++i)
            for (size_t j = i + 1; j < letters_.size(); ++j)
                if (letters_[i] == letters_[j])
                    throw std::invalid_argument("Alphabet: duplicate letter");
        if (letters_.empty())
            throw std::invalid_argument("Alphabet: empty");
    }

    size_t size() const { return letters_.size(); }
    char letter(size_t i) const { return letters_.at(i); }
    const std::string& letters() const { return letters_; }

    bool contains(char c) const {
        return letters_.find(c) != std::string::npos;
    }
    size_t index(char c) const {
        auto p = letters_.find(c);
        if (p == std::string::npos)
            throw std::invalid_argument(std::string("Alphabet: unknown letter '") + c + "'");
        return p;
    }
    void check_word(const Word& w) const {
        for (char c : w)
            if (!contains(c))
                throw std::invalid_argument(std::string("word uses letter '") + c +
                                            "' outside alphabet " + letters_);
    }
    bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }
    bool operator!=(const Alphabet& o) const { return !(*this == o); }

private:
    std::string letters_;
};

/** Letter-count vector aligned with an alphabet's letter order. */
struct Composition {
    std::vector<long> counts;

    long total() const {
        long s = 0;
        for (long c : counts) s += c;
        return s;
    }
    bool operator==(const Composition& o) const { return counts == o.counts; }
    bool operator<=(const Composition& o) const {
        if (counts.size() != o.counts.size()) return false;
        for (size_t i = 0; i < counts.size(); ++i)
            if (counts[i] > o.counts[i]) return false;
        return true;
    }
    /** Weakly decreasing in letter order. */
    bool is_partition() const {
        for (size_t i = 0; i + 1 < counts.size(); ++i)
            if (counts[i] < counts[i + 1]) return false;
        return true;
    }
};

/** Composition (letter counts) of a word. */
inline Composition composition_of(const Alphabet& a, const Word& w) {
    Composition c;
    c.counts.assign(a.size(), 0);
    for (char ch : w) c.counts[a.index(ch)]++;
    return c;
}

/** #u(w): occurrences of u as a subsequence of w, by the O(|u||w|) prefix DP. */
inline Int count_subword(const Word& u, const Word& w) {
    const size_t k = u.size(), n = w.size();
    // dp[j] = number of occurrences of u[0..j) in the scanned prefix of w
    std::vector<Int> dp(k + 1, 0);
    dp[0] = 1;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = std::min(k, i + 1); j >= 1; --j)
            if (u[j - 1] == w[i]) dp[j] += dp[j - 1];
    return dp[k];
}

/**
 * Formal finite sum  f = sum_u f_u * u  of equal-length words with exact
 * rational coefficients.  Zero coefficients are never stored.  When
 * constructed in composition mode, all words must additionally share one
 * letter-count vector.
 */
class WordCombination {
public:
    WordCombination() = default;
    explicit WordCombination(Alphabet a) : alpha_(std::move(a)) {}

    const Alphabet& alphabet() const { return alpha_; }
    const std::map<Word, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /** Common word length; -1 for the zero combination. */
    long length() const { return k_; }

    void add(const Word& w, const Rat& c) {
        if (c == 0) return;
        alpha_.check_word(w);
        if (k_ < 0) k_ = static_cast<long>(w.size());
        else if (k_ != static_cast<long>(w.size()))
            throw std::invalid_argument("WordCombination: mixed word lengths");
        Rat& slot = terms_[w];
        slot += c;
        if (slot == 0) terms_.erase(w);
        if (terms_.empty()) k_ = -1;
    }

    Rat coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    WordCombination& operator+=(const WordCombination& o) {
        for (auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }
    WordCombination& operator-=(const WordCombination& o) {
        for (auto& [w, c] : o.terms_) add(w, -c);
        return *this;
    }
    WordCombination& operator*=(const Rat& s) {
        if (s == 0) { terms_.clear(); k_ = -1; return *this; }
        for (auto& [w, c] : terms_) c *= s;
        return *this;
    }
    friend WordCombination operator+(WordCombination a, const WordCombination& b) { a += b; return a; }
    friend WordCombination operator-(WordCombination a, const WordCombination& b) { a -= b; return a; }
    friend WordCombination operator*(const Rat& s, WordCombination f) { f *= s; return f; }
    bool operator==(const WordCombination& o) const {
        return alpha_ == o.alpha_ && terms_ == o.terms_;
    }

    /** True when every stored word has the same letter counts. */
    bool homogeneous_composition() const {
        if (terms_.empty()) return true;
        Composition c0 = composition_of(alpha_, terms_.begin()->first);
        for (auto& [w, c] : terms_)
            if (!(composition_of(alpha_, w) == c0)) return false;
        return true;
    }
    /** The common composition (composition mode); throws if mixed. */
    Composition composition() const {
        if (terms_.empty())
            throw std::invalid_argument("composition(): zero combination");
        if (!homogeneous_composition())
            throw std::invalid_argument("composition(): mixed compositions; embed first");
        return composition_of(alpha_, terms_.begin()->first);
    }

private:
    Alphabet alpha_;
    long k_ = -1;
    std::map<Word, Rat> terms_;
};

/** #f(w) = sum_u f_u #u(w). */
inline Rat count_combination(const WordCombination& f, const Word& w) {
    if (f.is_zero()) return 0;
    f.alphabet().check_word(w);
    Rat s = 0;
    for (auto& [u, c] : f.terms()) s += c * Rat(count_subword(u, w));
    return s;
}

/** bar#f(w) = #f(w) / C(n, k). */
inline Rat normalize_one_sample(const WordCombination& f, const Word& w) {
    long k = f.length(), n = static_cast<long>(w.size());
    if (k < 0) return 0;
    if (n < k) throw std::invalid_argument("normalize_one_sample: |w| < k");
    return count_combination(f, w) / Rat(binom(n, k));
}

/** tilde#f(w) = #f(w) / prod_x C(n_x, k_x)  (composition mode). */
inline Rat normalize_multi(const WordCombination& f, const Word& w) {
    if (f.is_zero()) return 0;
    Composition kappa = f.composition();
    Composition n = composition_of(f.alphabet(), w);
    if (!(kappa <= n))
        throw std::invalid_argument("normalize_multi: word composition below kappa");
    Rat denom = 1;
    for (size_t x = 0; x < kappa.counts.size(); ++x)
        denom *= Rat(binom(n.counts[x], kappa.counts[x]));
    return count_combination(f, w) / denom;
}

/** All d^k words of length k, lexicographically sorted in alphabet order. */
inline std::vector<Word> enumerate_words(const Alphabet& a, long k) {
    if (k < 0) throw std::invalid_argument("enumerate_words: k < 0");
    std::vector<Word> out{Word()};
    for (long i = 0; i < k; ++i) {
        std::vector<Word> next;
        next.reserve(out.size() * a.size());
        for (auto& w : out)
            for (size_t x = 0; x < a.size(); ++x) next.push_back(w + a.letter(x));
        out = std::move(next);
    }
    return out;
}

/** All (|kappa| choose kappa) words with the given letter counts, sorted. */
inline std::vector<Word> enumerate_by_composition(const Alphabet& a,
                                                  const Composition& kappa) {
    if (kappa.counts.size() != a.size())
        throw std::invalid_argument("enumerate_by_composition: size mismatch");
    std::vector<Word> out;
    Word cur;
    std::vector<long> left = kappa.counts;
    long total = kappa.total();
    auto rec = [&](auto&& self) -> void {
        if (static_cast<long>(cur.size()) == total) { out.push_back(cur); return; }
        for (size_t x = 0; x < a.size(); ++x)
            if (left[x] > 0) {
                left[x]--; cur.push_back(a.letter(x));
                self(self);
                cur.pop_back(); left[x]++;
            }
    };
    rec(rec);
    return out;
}

/**
 * Parse a combination in the text form "1/2*ba - 1/2*ab + ab".  Terms are
 * rationals (or bare words with implicit coefficient 1) joined by + and -.
 */
inline WordCombination parse_combination(const Alphabet& a, const std::string& text) {
    WordCombination f(a);
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s.push_back(c);
    size_t i = 0;
    while (i < s.size()) {
        Rat sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string term = s.substr(i, j - i);
        if (term.empty()) throw std::invalid_argument("parse_combination: empty term");
        Rat coef = sign;
        std::string word = term;
        auto star = term.find('*');
        if (star != std::string::npos) {
            coef = sign * rat_parse(term.substr(0, star));
            word = term.substr(star + 1);
        } else if (!term.empty() && (isdigit(static_cast<unsigned char>(term[0])) &&
                                     !a.contains(term[0]))) {
            throw std::invalid_argument("parse_combination: missing '*' in term " + term);
        }
        f.add(word, coef);
        i = j;
    }
    return f;
}

/** Inverse of parse_combination: "c1*w1 + c2*w2 - ...". */
inline std::string format_combination(const WordCombination& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [w, c] : f.terms()) {
        Rat a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (a != 1) os << rat_str(a) << "*";
        os << w;
    }
    return os.str();
}

}  // namespace wordstat
