/**
 * Catalog of named subword statistics: classical test statistics and
 * combinatorial quantities expressed as exact word combinations, together
 * with automatic classification (grading, spectral component membership,
 * rank) and asymptotic variance constants under the null models.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "multisample.hpp"
#include "onesample.hpp"
#include "words.hpp"

namespace wordstat {

enum class Model { one_sample, multi_sample };

/** A named statistic: its model, alphabet, exact combination, and the
 *  null-model letter distribution (probabilities or sample fractions). */
struct NamedStatistic {
    std::string name;
    Model model;
    Alphabet alphabet;
    WordCombination combination;
    std::vector<Rat> probabilities;
};

/** Pearson's goodness-of-fit direction: sum_x xx/p_x minus the constant. */
inline WordCombination pearson_statistic(const ProbabilityVector& p) {
    WordCombination f(p.alpha);
    for (size_t x = 0; x < p.alpha.size(); ++x) {
        Word w(2, p.alpha.letter(x));
        f.add(w, Rat(1) / p.p[x]);
    }
    for (const Word& w : enumerate_words(p.alpha, 2)) f.add(w, -1);
    return f;
}

/** Parity of k-bit subwords of a fair binary stream: the expansion of
 *  ((0 - 1)/2)^k over the alphabet "01". */
inline WordCombination boolean_parity(long k) {
    if (k < 1) throw std::invalid_argument("boolean_parity: k >= 1 required");
    Alphabet a01("01");
    WordCombination f(a01);
    Rat scale(1, Int(1) << k);
    for (const Word& w : enumerate_words(a01, k)) {
        long ones = 0;
        for (char c : w)
            if (c == '1') ++ones;
        f.add(w, (ones % 2 == 0 ? scale : -scale));
    }
    return f;
}

inline std::vector<std::string> statistic_names() {
    return {"coin_bias",   "pearson_chi2", "boolean_parity_3", "levy_area",
            "levy_area_closed", "mann_whitney", "cvm",          "watson_s",
            "watson_v",    "dice_bias_ab", "dice_bias_bc",     "dice_bias_ca",
            "gepner"};
}

inline NamedStatistic build_statistic(const std::string& name) {
    auto uniform = [](const Alphabet& a) {
        return std::vector<Rat>(a.size(), Rat(1, (long)a.size()));
    };
    if (name == "coin_bias") {
        Alphabet ht("HT");
        return {name, Model::one_sample, ht, parse_combination(ht, "HT - TH"),
                uniform(ht)};
    }
    if (name == "pearson_chi2") {
        Alphabet ht("HT");
        return {name, Model::one_sample, ht,
                pearson_statistic(ProbabilityVector::uniform(ht)), uniform(ht)};
    }
    if (name.rfind("boolean_parity_", 0) == 0) {
        std::string suffix = name.substr(15);
        long k = suffix == "k" ? 3 : std::stol(suffix);
        Alphabet a01("01");
        return {name, Model::one_sample, a01, boolean_parity(k), uniform(a01)};
    }
    if (name == "levy_area") {
        Alphabet winds("ENWS");
        return {name, Model::one_sample, winds,
                parse_combination(winds, "EN - WN + WS - ES - NE + NW - SW + SE"),
                uniform(winds)};
    }
    if (name == "levy_area_closed") {
        // half the signed area, embedded into the common composition (1,1,1,1)
        Alphabet winds("ENWS");
        Composition target{{1, 1, 1, 1}};
        WordCombination f(winds);
        for (auto [w, s] : std::vector<std::pair<Word, long>>{
                 {"EN", 1}, {"WN", -1}, {"WS", 1}, {"ES", -1}}) {
            WordCombination term(winds);
            term.add(w, s);
            f += embed(term, target);
        }
        return {name, Model::multi_sample, winds, f, uniform(winds)};
    }
    if (name == "mann_whitney") {
        Alphabet xy("xy");
        return {name, Model::multi_sample, xy,
                parse_combination(xy, "1/2*yx - 1/2*xy"), uniform(xy)};
    }
    if (name == "cvm") {
        Alphabet xy("xy");
        return {name, Model::multi_sample, xy,
                parse_combination(xy,
                                  "1/3*xxyy + 1/3*yyxx - 1/6*xyyx - 1/6*yxxy "
                                  "- 1/6*xyxy - 1/6*yxyx"),
                uniform(xy)};
    }
    if (name == "watson_s") {
        Alphabet xy("xy");
        return {name, Model::multi_sample, xy,
                parse_combination(xy,
                                  "1/12*xxyy + 1/12*yyxx + 1/12*xyyx + 1/12*yxxy "
                                  "- 1/6*xyxy - 1/6*yxyx"),
                uniform(xy)};
    }
    if (name == "watson_v") {
        NamedStatistic s = build_statistic("watson_s");
        NamedStatistic t = build_statistic("cvm");
        s.name = name;
        s.combination -= Rat(1, 4) * t.combination;
        return s;
    }
    if (name.rfind("dice_bias_", 0) == 0) {
        Alphabet abc("abc");
        std::string pair = name.substr(10);
        WordCombination f(abc);
        if (pair == "ab")
            f = parse_combination(abc, "ba - ab");
        else if (pair == "bc")
            f = parse_combination(abc, "cb - bc");
        else if (pair == "ca")
            f = parse_combination(abc, "ac - ca");
        else
            throw std::invalid_argument("unknown statistic: " + name);
        return {name, Model::multi_sample, abc, embed(f, Composition{{1, 1, 1}}),
                uniform(abc)};
    }
    if (name == "gepner") {
        Alphabet abc("abc");
        return {name, Model::multi_sample, abc,
                parse_combination(abc, "cba + bac + acb - abc - bca - cab"),
                uniform(abc)};
    }
    throw std::invalid_argument("unknown statistic: " + name);
}

/**
 * Classification of a statistic under its null model: the nonzero grades,
 * the rank, the spectral components carrying the statistic, and the limit
 * constant of the rank-scaled second moment.  One-sample components are
 * (r, m) pairs; two-letter multi-sample components are (r, i, j) triples;
 * multi-sample with three or more letters reports grades only.
 */
struct ClassificationReport {
    Model model;
    long k = 0;
    long rank = 0;
    std::vector<long> grades;
    std::vector<std::vector<long>> components;
    Rat variance_constant;
};

inline ClassificationReport classify_one_sample(const WordCombination& f,
                                                const ProbabilityVector& p) {
    if (f.is_zero()) throw std::invalid_argument("classify: zero statistic");
    DBasis b(p);
    const size_t d = b.dim();
    const long k = f.length();
    ClassificationReport rep;
    rep.model = Model::one_sample;
    rep.k = k;
    rep.rank = -1;
    std::vector<WordCombination> parts = grade(f, b);
    BilinearForm form = BilinearForm::diagonal(d_form_weights(b, k));
    Alphabet da = d_alphabet(d);
    std::vector<Word> ambient = enumerate_words(da, k);
    rep.variance_constant = 0;
    for (long r = 0; r <= k; ++r) {
        if (parts[r].is_zero()) continue;
        rep.grades.push_back(r);
        if (rep.rank < 0) rep.rank = r;
        Vec coords = d_coordinates(to_d_basis(parts[r], b), d, k);
        for (long m = 0; m <= k - r; ++m) {
            Subspace comp = component_basis(k, r, m, b);
            Vec proj = project(coords, comp, form);
            if (vec_is_zero(proj)) continue;
            rep.components.push_back({r, m});
            if (r == rep.rank) {
                WordCombination fd(da);
                for (size_t i = 0; i < ambient.size(); ++i) fd.add(ambient[i], proj[i]);
                WordCombination frm = from_d_basis(fd, b);
                rep.variance_constant +=
                    asymptotic_covariance_one_sample(frm, frm, b);
            }
        }
    }
    return rep;
}

inline ClassificationReport classify_multi(const WordCombination& f,
                                           const std::vector<Rat>& fractions) {
    if (f.is_zero()) throw std::invalid_argument("classify: zero statistic");
    Composition kappa = f.composition();
    ClassificationReport rep;
    rep.model = Model::multi_sample;
    rep.k = kappa.total();
    std::vector<WordCombination> parts = grade_multi(f);
    rep.rank = rank_multi(f);
    for (size_t r = 0; r < parts.size(); ++r) {
        if (parts[r].is_zero()) continue;
        rep.grades.push_back((long)r);
        if (kappa.counts.size() == 2 && r >= 1) {
            Vec coords = composition_coordinates(parts[r], kappa);
            long k = rep.k;
            for (long i = 0; i <= k - 2 * (long)r; ++i)
                for (long j = 0; j <= (long)r - 1; ++j) {
                    Subspace w = two_sample_component(f.alphabet(), kappa, (long)r, i, j);
                    Vec proj = project(coords, w, BilinearForm::standard(coords.size()));
                    if (!vec_is_zero(proj)) rep.components.push_back({(long)r, i, j});
                }
        } else {
            rep.components.push_back({(long)r});
        }
    }
    rep.variance_constant =
        rep.rank > 0 ? asymptotic_covariance_multi(f, f, fractions) : Rat(0);
    return rep;
}

inline ClassificationReport classify(const NamedStatistic& s) {
    if (s.model == Model::one_sample) {
        ProbabilityVector p{s.alphabet, s.probabilities};
        return classify_one_sample(s.combination, p);
    }
    return classify_multi(s.combination, s.probabilities);
}

}  // namespace wordstat
