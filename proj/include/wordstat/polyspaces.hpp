/**
 * Discrete orthogonal polynomial structure on the simplex of gap vectors.
 *
 * Delta_kr = { (d_0,...,d_r) >= 0 : sum = k-r } indexes the two-digit words
 * with r non-trivial digits by their runs of trivial digits.  Polynomials
 * are paired by summing products of evaluations over the simplex; graded
 * Gram-Schmidt yields the orthogonal spaces U_krm; Psi_kr turns polynomials
 * into word combinations; Phi_kr factors a D-word into its two-digit
 * pattern and its residual non-trivial letters; homogenization produces the
 * degree-homogeneous models H_krm in x_0..x_r.
 */
#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "words.hpp"

namespace wordstat {

using Exponents = std::vector<long>;

/** Sparse exact-rational polynomial in variables x_0..x_{nvars-1}. */
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(size_t nvars) : nvars_(nvars) {}

    static Polynomial constant(size_t nvars, const Rat& c) {
        Polynomial p(nvars);
        p.add_term(Exponents(nvars, 0), c);
        return p;
    }
    static Polynomial variable(size_t nvars, size_t i) {
        Polynomial p(nvars);
        Exponents e(nvars, 0);
        e.at(i) = 1;
        p.add_term(e, 1);
        return p;
    }

    size_t nvars() const { return nvars_; }
    const std::map<Exponents, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponents& e, const Rat& c) {
        if (e.size() != nvars_)
            throw std::invalid_argument("Polynomial: exponent arity mismatch");
        if (c == 0) return;
        Rat& slot = terms_[e];
        slot += c;
        if (slot == 0) terms_.erase(e);
    }

    long degree() const {
        long d = 0;
        for (auto& [e, c] : terms_) {
            long t = 0;
            for (long x : e) t += x;
            d = std::max(d, t);
        }
        return d;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Polynomial& operator*=(const Rat& s) {
        if (s == 0) { terms_.clear(); return *this; }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { a += b; return a; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { a -= b; return a; }
    friend Polynomial operator*(const Rat& s, Polynomial p) { p *= s; return p; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out(a.nvars_);
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                Exponents e = ea;
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }
    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    Rat eval(const std::vector<Rat>& x) const {
        if (x.size() != nvars_) throw std::invalid_argument("Polynomial::eval: arity");
        Rat s = 0;
        for (auto& [e, c] : terms_) {
            Rat t = c;
            for (size_t i = 0; i < nvars_; ++i)
                for (long j = 0; j < e[i]; ++j) t *= x[i];
            s += t;
        }
        return s;
    }

    /** Substitute variable i by the given polynomial (same arity). */
    Polynomial substitute(size_t i, const Polynomial& rep) const {
        Polynomial out(nvars_);
        for (auto& [e, c] : terms_) {
            Exponents rest = e;
            long pw = rest[i];
            rest[i] = 0;
            Polynomial t(nvars_);
            t.add_term(rest, c);
            for (long j = 0; j < pw; ++j) t = t * rep;
            out += t;
        }
        return out;
    }

    /** Graded-lexicographic comparison key: total degree, then exponents. */
    static bool grlex_less(const Exponents& a, const Exponents& b) {
        long da = 0, db = 0;
        for (long x : a) da += x;
        for (long x : b) db += x;
        if (da != db) return da < db;
        return a < b;
    }

    /** Rescale to primitive integer coefficients, leading term positive. */
    Polynomial primitive() const {
        if (terms_.empty()) return *this;
        Int den_lcm = 1, num_gcd = 0;
        for (auto& [e, c] : terms_) {
            Int g;
            mpz_gcd(g.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
            den_lcm = den_lcm / g * c.get_den();
        }
        for (auto& [e, c] : terms_) {
            Rat x = c * Rat(den_lcm);
            Int g;
            mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num().get_mpz_t());
            num_gcd = g;
        }
        Rat scale = Rat(den_lcm) / Rat(num_gcd);
        const Exponents* lead = nullptr;
        for (auto& [e, c] : terms_)
            if (!lead || grlex_less(*lead, e)) lead = &e;
        if (terms_.at(*lead) * scale < 0) scale = -scale;
        Polynomial out = *this;
        out *= scale;
        return out;
    }

private:
    size_t nvars_ = 0;
    std::map<Exponents, Rat> terms_;
};

/** Parse "3*x1^2 - 6*x1 + 1" into a polynomial with the given arity. */
inline Polynomial parse_polynomial(size_t nvars, const std::string& text) {
    Polynomial out(nvars);
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
        if (term.empty()) throw std::invalid_argument("parse_polynomial: empty term");
        Rat coef = sign;
        Exponents e(nvars, 0);
        size_t t = 0;
        bool saw_factor = false;
        while (t < term.size()) {
            size_t u = term.find('*', t);
            std::string factor = term.substr(t, u == std::string::npos ? u : u - t);
            if (factor.empty()) throw std::invalid_argument("parse_polynomial: empty factor");
            if (factor[0] == 'x') {
                size_t caret = factor.find('^');
                size_t var = std::stoul(factor.substr(1, caret - 1));
                long pw = caret == std::string::npos ? 1 : std::stol(factor.substr(caret + 1));
                if (var >= nvars)
                    throw std::invalid_argument("parse_polynomial: variable index too large");
                e[var] += pw;
            } else {
                coef *= rat_parse(factor);
            }
            saw_factor = true;
            t = u == std::string::npos ? term.size() : u + 1;
        }
        if (!saw_factor) throw std::invalid_argument("parse_polynomial: bad term " + term);
        out.add_term(e, coef);
        i = j;
    }
    return out;
}

/** Inverse of parse_polynomial, terms in descending graded-lex order. */
inline std::string format_polynomial(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::vector<const Exponents*> keys;
    for (auto& [e, c] : p.terms()) keys.push_back(&e);
    std::sort(keys.begin(), keys.end(), [](const Exponents* a, const Exponents* b) {
        return Polynomial::grlex_less(*b, *a);
    });
    std::ostringstream os;
    bool first = true;
    for (const Exponents* e : keys) {
        Rat c = p.terms().at(*e);
        Rat a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool printed = false;
        if (a != 1) {
            os << rat_str(a);
            printed = true;
        }
        for (size_t i = 0; i < e->size(); ++i) {
            if ((*e)[i] == 0) continue;
            if (printed) os << "*";
            os << "x" << i;
            if ((*e)[i] > 1) os << "^" << (*e)[i];
            printed = true;
        }
        if (!printed) os << "1";
    }
    return os.str();
}

/** Gap-vector simplex: all (d_0..d_r) >= 0 summing to k-r, lex ascending. */
inline std::vector<std::vector<long>> simplex(long k, long r) {
    if (r < 0 || r > k) throw std::invalid_argument("simplex: need 0 <= r <= k");
    std::vector<std::vector<long>> out;
    std::vector<long> cur(r + 1, 0);
    auto rec = [&](auto&& self, long pos, long left) -> void {
        if (pos == r) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (long v = 0; v <= left; ++v) {
            cur[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, k - r);
    return out;
}

/** Evaluate at a simplex point: variable x_i takes the value d_i. */
inline Rat eval_at_point(const Polynomial& p, const std::vector<long>& d) {
    std::vector<Rat> x;
    x.reserve(p.nvars());
    for (size_t i = 0; i < p.nvars(); ++i)
        x.push_back(i < d.size() ? Rat(d[i]) : Rat(0));
    return p.eval(x);
}

/** <P, Q>_kr = sum over the simplex of P(d) Q(d). */
inline Rat pairing(const Polynomial& p, const Polynomial& q, long k, long r) {
    Rat s = 0;
    for (const auto& d : simplex(k, r)) s += eval_at_point(p, d) * eval_at_point(q, d);
    return s;
}

/**
 * Orthogonal polynomial spaces U_krm, m = 0..k-r: graded Gram-Schmidt of the
 * monomials in x_1..x_r (graded-lex order) under the simplex pairing,
 * grouped by source degree; bases rescaled to primitive integer form.
 */
inline std::vector<std::vector<Polynomial>> orthogonal_poly_spaces(long k, long r) {
    if (r < 1 || r > k) throw std::invalid_argument("orthogonal_poly_spaces: need 1 <= r <= k");
    const size_t nv = static_cast<size_t>(r) + 1;
    std::vector<std::vector<Polynomial>> out(static_cast<size_t>(k - r) + 1);
    std::vector<Polynomial> ortho;
    std::vector<Rat> norms;
    for (long m = 0; m <= k - r; ++m) {
        // monomials of total degree m in x_1..x_r, graded-lex descending start
        std::vector<Exponents> mons;
        Exponents e(nv, 0);
        auto rec = [&](auto&& self, size_t var, long left) -> void {
            if (var == nv - 1) {
                e[var] = left;
                mons.push_back(e);
                return;
            }
            for (long v = left; v >= 0; --v) {
                e[var] = v;
                self(self, var + 1, left - v);
            }
        };
        rec(rec, 1, m);
        for (const Exponents& me : mons) {
            Polynomial p(nv);
            p.add_term(me, 1);
            for (size_t i = 0; i < ortho.size(); ++i) {
                Rat c = pairing(p, ortho[i], k, r) / norms[i];
                if (c != 0) p -= c * ortho[i];
            }
            Rat n2 = pairing(p, p, k, r);
            if (n2 == 0) continue;  // dependent on the flat
            Polynomial prim = p.primitive();
            out[m].push_back(prim);
            ortho.push_back(prim);
            norms.push_back(pairing(prim, prim, k, r));
        }
    }
    return out;
}

/** Psi_kr(P) = sum over the simplex of P(d) * 1^{d_0} 2 1^{d_1} ... 2 1^{d_r}. */
inline WordCombination psi(const Polynomial& p, long k, long r) {
    WordCombination out(Alphabet("12"));
    for (const auto& d : simplex(k, r)) {
        Rat c = eval_at_point(p, d);
        if (c == 0) continue;
        Word w;
        for (long i = 0; i <= r; ++i) {
            w.append(static_cast<size_t>(d[i]), '1');
            if (i < r) w.push_back('2');
        }
        out.add(w, c);
    }
    return out;
}

/** Phi_kr: split a D-word with k-r trivial digits into its two-digit
 *  pattern (non-trivial digits become '2') and its residual word. */
inline std::pair<Word, Word> phi(const Word& e, long k, long r) {
    if ((long)e.size() != k) throw std::invalid_argument("phi: wrong length");
    Word pattern, residual;
    for (char c : e) {
        if (c == '1') {
            pattern.push_back('1');
        } else {
            pattern.push_back('2');
            residual.push_back(c);
        }
    }
    if ((long)residual.size() != r) throw std::invalid_argument("phi: wrong trivial-digit count");
    return {pattern, residual};
}

/** Inverse of phi: fill the '2' slots of the pattern with the residual. */
inline Word phi_inverse(const Word& pattern, const Word& residual) {
    Word e;
    size_t j = 0;
    for (char c : pattern) {
        if (c == '1') {
            e.push_back('1');
        } else {
            if (j >= residual.size()) throw std::invalid_argument("phi_inverse: residual too short");
            e.push_back(residual[j++]);
        }
    }
    if (j != residual.size()) throw std::invalid_argument("phi_inverse: residual too long");
    return e;
}

/**
 * Homogenize a polynomial in x_1..x_r to total degree equal to its own
 * degree, multiplying each term by powers of (x_0+...+x_r)/(k-r).  On the
 * simplex the inserted factor is 1, so Psi and the pairing are unchanged.
 */
inline Polynomial homogenize(const Polynomial& p, long k, long r) {
    if (k == r && p.degree() > 0)
        throw std::invalid_argument("homogenize: k = r admits only constants");
    const size_t nv = p.nvars();
    Polynomial lin(nv);
    for (size_t i = 0; i < nv; ++i) lin += Polynomial::variable(nv, i);
    if (k > r) lin *= Rat(1, k - r);
    long m = p.degree();
    Polynomial out(nv);
    for (auto& [e, c] : p.terms()) {
        long t = 0;
        for (long x : e) t += x;
        Polynomial term(nv);
        term.add_term(e, c);
        for (long j = 0; j < m - t; ++j) term = term * lin;
        out += term;
    }
    return out;
}

/** Inverse of homogenize: substitute x_0 -> (k-r) - (x_1+...+x_r). */
inline Polynomial dehomogenize(const Polynomial& p, long k, long r) {
    const size_t nv = p.nvars();
    Polynomial rep = Polynomial::constant(nv, Rat(k - r));
    for (size_t i = 1; i < nv; ++i) rep -= Polynomial::variable(nv, i);
    return p.substitute(0, rep);
}

/** Primitive-normalized homogeneous bases H_krm, m = 0..k-r. */
inline std::vector<std::vector<Polynomial>> homogeneous_poly_spaces(long k, long r) {
    std::vector<std::vector<Polynomial>> u = orthogonal_poly_spaces(k, r);
    std::vector<std::vector<Polynomial>> out(u.size());
    for (size_t m = 0; m < u.size(); ++m)
        for (const Polynomial& p : u[m])
            out[m].push_back(homogenize(p, k, r).primitive());
    return out;
}

/** Dual shuffle on polynomials: (1+k-r-sum x_i) P(x) + sum x_i P(x - e_i),
 *  matching the insertion of one trivial digit on the word side. */
inline Polynomial poly_dual_shuffle(const Polynomial& p, long k, long r) {
    const size_t nv = p.nvars();
    Polynomial out = Rat(1 + k - r) * p;
    for (size_t i = 1; i <= static_cast<size_t>(r); ++i) {
        Polynomial xi = Polynomial::variable(nv, i);
        out -= xi * p;
        // P(x - e_i): substitute x_i -> x_i - 1
        Polynomial shifted = p.substitute(i, xi - Polynomial::constant(nv, 1));
        out += xi * shifted;
    }
    return out;
}

}  // namespace wordstat
