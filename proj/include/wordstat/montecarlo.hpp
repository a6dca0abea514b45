/**
 * Monte Carlo samplers for both random-word models, with deterministic
 * counter-based streams, scaled-moment estimation, and CSV reporting.
 *
 * The random words of the i.i.d. model draw each letter by inverse CDF on
 * the letter probabilities; the fixed-composition model draws a uniform
 * permutation of the letter multiset by Fisher-Yates.  Every sample owns
 * its own RNG substream derived from (master seed, sample index), so the
 * estimates are bit-identical regardless of how samples are distributed
 * across worker threads; reduction uses pairwise summation over the full
 * per-sample value array, which is order-independent by construction.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "statistics.hpp"

namespace wordstat {

/**
 * Counter-mode SplitMix64: output i of a stream is the SplitMix64
 * finalizer applied to key + i * golden-gamma, with the key mixed down
 * from (master seed, stream index).  Splittable and jump-free: any
 * sample's stream is reconstructed from its index alone.
 */
class CounterRng {
public:
    static constexpr const char* algorithm = "splitmix64-counter";

    CounterRng(std::uint64_t master_seed, std::uint64_t stream)
        : key_(mix(mix(master_seed) + stream)) {}

    std::uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /** Uniform double in [0, 1), 53 random bits. */
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /** Uniform integer in [0, m), unbiased by rejection. */
    std::uint64_t below(std::uint64_t m) {
        std::uint64_t threshold = (-m) % m;  // 2^64 mod m
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % m;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/** One i.i.d. word of length n: each letter independently by inverse CDF. */
inline Word sample_one(long n, const ProbabilityVector& p, CounterRng& rng) {
    std::vector<double> cdf(p.p.size());
    double acc = 0;
    for (size_t x = 0; x < p.p.size(); ++x) {
        acc += p.p[x].get_d();
        cdf[x] = acc;
    }
    Word w(static_cast<size_t>(n), p.alpha.letter(0));
    for (long i = 0; i < n; ++i) {
        double u = rng.uniform();
        size_t x = 0;
        while (x + 1 < cdf.size() && u >= cdf[x]) ++x;
        w[static_cast<size_t>(i)] = p.alpha.letter(x);
    }
    return w;
}

/** One uniform word with the exact letter counts n: Fisher-Yates shuffle
 *  of the letter multiset. */
inline Word sample_multi(const Composition& n, const Alphabet& a, CounterRng& rng) {
    if (n.counts.size() != a.size())
        throw std::invalid_argument("sample_multi: composition length != alphabet size");
    Word w;
    for (size_t x = 0; x < a.size(); ++x)
        w.append(static_cast<size_t>(n.counts[x]), a.letter(x));
    for (size_t i = w.size(); i > 1; --i)
        std::swap(w[i - 1], w[rng.below(i)]);
    return w;
}

/** Simulation request: which model, which statistics (all over one common
 *  alphabet), word length(s), sample count, and the master seed. */
struct SimulationConfig {
    Model model = Model::one_sample;
    Alphabet alphabet;
    std::vector<Rat> probabilities;  // one-sample letter distribution
    long n = 0;                      // one-sample word length
    Composition nvec;                // fixed-model letter counts
    std::vector<NamedStatistic> statistics;
    long samples = 1;
    std::uint64_t seed = 0;
    std::string output_path;
};

/** Empirical moments of the rank-scaled statistics with standard errors. */
struct MomentEstimate {
    std::vector<std::string> names;
    std::vector<long> ranks;
    std::vector<double> mean;
    std::vector<double> mean_stderr;
    std::vector<std::vector<double>> covariance;
    std::vector<std::vector<double>> cov_stderr;
    long samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

/** #u(w) in double arithmetic (exact while below 2^53). */
inline double count_subword_d(const Word& u, const Word& w) {
    std::vector<double> dp(u.size() + 1, 0.0);
    dp[0] = 1.0;
    for (char c : w)
        for (size_t i = u.size(); i >= 1; --i)
            if (u[i - 1] == c) dp[i] += dp[i - 1];
    return dp[u.size()];
}

/** A statistic compiled for fast evaluation: terms as doubles, the
 *  normalizing denominator, and the rank scaling n_total^{r/2}. */
struct CompiledStatistic {
    std::vector<std::pair<Word, double>> terms;
    double scale = 1.0;  // rank scaling / count normalization, combined
    long rank = 0;
};

inline CompiledStatistic compile_statistic(const NamedStatistic& s,
                                           const SimulationConfig& cfg) {
    CompiledStatistic out;
    for (auto& [u, c] : s.combination.terms()) out.terms.push_back({u, c.get_d()});
    double denom = 1.0;
    if (cfg.model == Model::one_sample) {
        long k = s.combination.length();
        if (k > cfg.n)
            throw std::invalid_argument("simulate: word length below statistic length");
        DBasis b(ProbabilityVector(cfg.alphabet, cfg.probabilities));
        for (const WordCombination& part : grade(s.combination, b)) {
            if (!part.is_zero()) break;
            ++out.rank;
        }
        denom = Rat(binom(cfg.n, k)).get_d();
        out.scale = std::pow(double(cfg.n), out.rank / 2.0) / denom;
    } else {
        Composition kappa = s.combination.composition();
        if (!(kappa <= cfg.nvec))
            throw std::invalid_argument("simulate: letter counts below statistic counts");
        out.rank = rank_multi(s.combination);
        for (size_t x = 0; x < kappa.counts.size(); ++x)
            denom *= Rat(binom(cfg.nvec.counts[x], kappa.counts[x])).get_d();
        out.scale = std::pow(double(cfg.nvec.total()), out.rank / 2.0) / denom;
    }
    return out;
}

/** Order-independent deterministic sum: fixed binary-tree pairwise order. */
inline double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
    if (hi - lo <= 8) {
        double s = 0;
        for (size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v, 0, v.size());
}

}  // namespace detail

/** All scaled statistic values, one row per sample; sample i always uses
 *  RNG stream i, so the table is independent of the worker count. */
inline std::vector<std::vector<double>> simulate_values(const SimulationConfig& cfg,
                                                        int workers = 1) {
    if (cfg.samples < 1) throw std::invalid_argument("simulate: need samples >= 1");
    if (cfg.statistics.empty()) throw std::invalid_argument("simulate: no statistics");
    for (const NamedStatistic& s : cfg.statistics) {
        if (s.model != cfg.model) throw std::invalid_argument("simulate: model mismatch");
        if (s.alphabet != cfg.alphabet)
            throw std::invalid_argument("simulate: alphabet mismatch");
    }
    std::vector<detail::CompiledStatistic> compiled;
    for (const NamedStatistic& s : cfg.statistics)
        compiled.push_back(detail::compile_statistic(s, cfg));

    const size_t nstat = compiled.size();
    const size_t nsamp = static_cast<size_t>(cfg.samples);
    std::vector<std::vector<double>> values(nstat, std::vector<double>(nsamp));
    ProbabilityVector p = cfg.model == Model::one_sample
                              ? ProbabilityVector(cfg.alphabet, cfg.probabilities)
                              : ProbabilityVector::uniform(cfg.alphabet);

    auto run = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            CounterRng rng(cfg.seed, i);
            Word w = cfg.model == Model::one_sample
                         ? sample_one(cfg.n, p, rng)
                         : sample_multi(cfg.nvec, cfg.alphabet, rng);
            for (size_t s = 0; s < nstat; ++s) {
                double v = 0;
                for (auto& [u, c] : compiled[s].terms)
                    v += c * detail::count_subword_d(u, w);
                values[s][i] = v * compiled[s].scale;
            }
        }
    };

    if (workers <= 1) {
        run(0, nsamp);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (nsamp + workers - 1) / static_cast<size_t>(workers);
        for (int t = 0; t < workers; ++t) {
            size_t b = std::min(nsamp, static_cast<size_t>(t) * chunk);
            size_t e = std::min(nsamp, b + chunk);
            if (b < e) pool.emplace_back(run, b, e);
        }
        for (auto& t : pool) t.join();
    }
    return values;
}

/** Empirical means and covariances of the rank-scaled statistics.  The
 *  covariance standard error is the sampling error of each entry, from the
 *  empirical variance of the centered products. */
inline MomentEstimate estimate_covariance(const SimulationConfig& cfg, int workers = 1) {
    std::vector<std::vector<double>> values = simulate_values(cfg, workers);
    const size_t nstat = values.size();
    const double N = double(cfg.samples);

    MomentEstimate est;
    est.samples = cfg.samples;
    est.seed = cfg.seed;
    for (size_t s = 0; s < nstat; ++s) {
        est.names.push_back(cfg.statistics[s].name);
        est.ranks.push_back(detail::compile_statistic(cfg.statistics[s], cfg).rank);
        est.mean.push_back(detail::pairwise_sum(values[s]) / N);
    }
    est.covariance.assign(nstat, std::vector<double>(nstat, 0.0));
    est.cov_stderr.assign(nstat, std::vector<double>(nstat, 0.0));
    std::vector<double> prod(values.empty() ? 0 : values[0].size());
    for (size_t a = 0; a < nstat; ++a)
        for (size_t b = a; b < nstat; ++b) {
            for (size_t i = 0; i < prod.size(); ++i)
                prod[i] = (values[a][i] - est.mean[a]) * (values[b][i] - est.mean[b]);
            double cov = detail::pairwise_sum(prod) / N;
            for (size_t i = 0; i < prod.size(); ++i)
                prod[i] = (prod[i] - cov) * (prod[i] - cov);
            double varcov = detail::pairwise_sum(prod) / N;
            est.covariance[a][b] = est.covariance[b][a] = cov;
            est.cov_stderr[a][b] = est.cov_stderr[b][a] = std::sqrt(varcov / N);
        }
    for (size_t s = 0; s < nstat; ++s)
        est.mean_stderr.push_back(std::sqrt(est.covariance[s][s] / N));
    return est;
}

namespace detail {
inline std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}
}  // namespace detail

/** CSV report: two comment header rows, then one row per statistic (mean)
 *  and per unordered statistic pair (covariance), 12 significant digits. */
inline std::string format_csv(const SimulationConfig& cfg, const MomentEstimate& est) {
    std::string lengths;
    if (cfg.model == Model::one_sample) {
        lengths = "n=" + std::to_string(cfg.n);
    } else {
        lengths = "nvec=";
        for (size_t x = 0; x < cfg.nvec.counts.size(); ++x)
            lengths += (x ? "|" : "") + std::to_string(cfg.nvec.counts[x]);
    }
    std::string out;
    out += std::string("# model=") +
           (cfg.model == Model::one_sample ? "one_sample" : "multi_sample") +
           ", seed=" + std::to_string(cfg.seed) + ", N=" + std::to_string(cfg.samples) +
           "\n";
    out += std::string("# rng=") + CounterRng::algorithm + ", " + lengths +
           ", scaling=total_length^(rank/2)\n";
    out += "kind,statistic_a,statistic_b,estimate,stderr\n";
    for (size_t s = 0; s < est.names.size(); ++s)
        out += "mean," + est.names[s] + ",," + detail::fmt12(est.mean[s]) + "," +
               detail::fmt12(est.mean_stderr[s]) + "\n";
    for (size_t a = 0; a < est.names.size(); ++a)
        for (size_t b = a; b < est.names.size(); ++b)
            out += "cov," + est.names[a] + "," + est.names[b] + "," +
                   detail::fmt12(est.covariance[a][b]) + "," +
                   detail::fmt12(est.cov_stderr[a][b]) + "\n";
    return out;
}

/** Kolmogorov-Smirnov distance between the empirical CDF of the samples
 *  and a reference CDF. */
template <class Cdf>
inline double ks_distance(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double N = double(samples.size());
    double d = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - double(i) / N));
        d = std::max(d, std::abs(double(i + 1) / N - f));
    }
    return d;
}

/** CDF of the logistic limit law with density pi/(4 sqrt3) sech^2(pi x / (2 sqrt3)). */
inline double logistic_limit_cdf(double x) {
    return 1.0 / (1.0 + std::exp(-3.14159265358979323846 * x / 1.7320508075688772));
}

}  // namespace wordstat
