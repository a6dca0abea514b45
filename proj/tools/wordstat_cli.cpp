/**
 * Command-line surface of the library: exact subsequence counts, spectral
 * decompositions, statistic classification, exact moments, eigenvalue
 * tables, and Monte Carlo simulation with CSV output.
 *
 * Exit codes: 0 success, 1 domain error (invalid mathematical input, with
 * a message naming the violated precondition), 2 usage error.
 */
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <wordstat/montecarlo.hpp>

using namespace wordstat;
using nlohmann::json;

namespace {

/** Canonical rational serialization: always "p/q" in lowest terms. */
std::string rat_str(const Rat& x) {
    Rat c = x;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat parse_rat(const std::string& s) {
    Rat x(s);
    x.canonicalize();
    return x;
}

std::vector<Rat> parse_rat_list(const std::string& s) {
    std::vector<Rat> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rat(item));
    return out;
}

Composition parse_composition(const std::string& s) {
    Composition c;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) c.counts.push_back(std::stol(item));
    return c;
}

std::vector<Rat> probabilities_or_uniform(const std::string& pflag, const Alphabet& a) {
    if (pflag.empty()) return std::vector<Rat>(a.size(), Rat(1, (long)a.size()));
    std::vector<Rat> p = parse_rat_list(pflag);
    if (p.size() != a.size())
        throw std::invalid_argument("probability list arity != alphabet size");
    return p;
}

/** A named catalog entry, or an inline expression over --alphabet. */
NamedStatistic resolve_statistic(const std::string& stat, const std::string& model,
                                 const std::string& alphabet, const std::string& pflag) {
    for (const std::string& name : statistic_names())
        if (name == stat) return build_statistic(stat);
    if (stat.rfind("boolean_parity_", 0) == 0) return build_statistic(stat);
    if (stat.rfind("dice_bias_", 0) == 0) return build_statistic(stat);
    if (alphabet.empty())
        throw std::invalid_argument("expression statistic requires --alphabet");
    Alphabet a(alphabet);
    NamedStatistic s;
    s.name = "expression";
    s.model = model == "fixed" ? Model::multi_sample : Model::one_sample;
    s.alphabet = a;
    s.combination = parse_combination(a, stat);
    s.probabilities = probabilities_or_uniform(pflag, a);
    return s;
}

json classification_json(const ClassificationReport& r) {
    json out;
    out["model"] = r.model == Model::one_sample ? "iid" : "fixed";
    out["k"] = r.k;
    out["rank"] = r.rank;
    out["grades"] = r.grades;
    out["components"] = r.components;
    out["variance_constant"] = rat_str(r.variance_constant);
    return out;
}

void emit(const json& j, const std::string& format) {
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    // plain table: one "key: value" or aligned row rendering
    std::function<void(const json&, const std::string&)> walk =
        [&](const json& node, const std::string& prefix) {
            if (node.is_object()) {
                for (auto it = node.begin(); it != node.end(); ++it)
                    walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
            } else if (node.is_array() && !node.empty() && node.front().is_object()) {
                for (size_t i = 0; i < node.size(); ++i)
                    walk(node[i], prefix + "[" + std::to_string(i) + "]");
            } else {
                std::cout << prefix << ": " << (node.is_string() ? node.get<std::string>()
                                                                 : node.dump())
                          << "\n";
            }
        };
    walk(j, "");
}

int cmd_count(const std::string& pattern, std::string text, const std::string& file) {
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw std::invalid_argument("cannot open text file: " + file);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else if (text == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    }
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    std::cout << count_subword(pattern, text).get_str() << "\n";
    return 0;
}

int cmd_decompose(const std::string& model, const std::string& alphabet,
                  const std::string& pflag, const std::string& kappa_flag, long k,
                  const std::string& format) {
    json out;
    if (model == "iid") {
        if (alphabet.empty()) throw std::invalid_argument("decompose iid needs --alphabet");
        if (k < 1) throw std::invalid_argument("decompose iid needs --k >= 1");
        Alphabet a(alphabet);
        ProbabilityVector p(a, probabilities_or_uniform(pflag, a));
        DBasis b(p);
        out["model"] = "iid";
        out["k"] = k;
        json comps = json::array();
        for (long r = 0; r <= k; ++r)
            for (long m = 0; m <= k - r; ++m) {
                Subspace comp = component_basis(k, r, m, b);
                if (comp.dim() == 0) continue;
                json c;
                c["r"] = r;
                c["m"] = m;
                c["dim"] = (long)comp.dim();
                c["eigenvalue"] = rat_str(Rat(binom(2 * k - r, k + m)));
                c["variance_constant"] = rat_str(Rat(factorial(k)) * Rat(factorial(k)) /
                                                 (Rat(factorial(k + m)) *
                                                  Rat(factorial(k - r - m))));
                comps.push_back(c);
            }
        out["components"] = comps;
    } else if (model == "fixed") {
        Composition kappa = parse_composition(kappa_flag);
        if (kappa.counts.size() != 2 || !kappa.is_partition())
            throw std::invalid_argument(
                "decompose fixed needs --kappa ka,kb with ka >= kb >= 0");
        out["model"] = "fixed";
        out["kappa"] = kappa.counts;
        json comps = json::array();
        for (long r = 1; r <= kappa.counts[1]; ++r)
            for (long i = 0; i <= kappa.total() - 2 * r; ++i)
                for (long j = 0; j <= r - 1; ++j) {
                    json c;
                    c["r"] = r;
                    c["i"] = i;
                    c["j"] = j;
                    c["dim"] = two_sample_component_dim(kappa, r, i, j).get_str();
                    c["lambda"] = rat_str(lambda_eigenvalue(kappa, r, i, j));
                    comps.push_back(c);
                }
        out["components"] = comps;
    } else {
        throw std::invalid_argument("decompose: --model must be iid or fixed");
    }
    emit(out, format);
    return 0;
}

int cmd_classify(const std::string& stat, const std::string& model,
                 const std::string& alphabet, const std::string& pflag,
                 const std::string& format) {
    NamedStatistic s = resolve_statistic(stat, model, alphabet, pflag);
    json out = classification_json(classify(s));
    out["statistic"] = s.name == "expression" ? stat : s.name;
    emit(out, format);
    return 0;
}

int cmd_moments(const std::vector<std::string>& stats, long n, const std::string& nvec_flag,
                const std::string& alphabet, const std::string& pflag,
                const std::string& format) {
    if (stats.empty()) throw std::invalid_argument("moments: need --stats");
    std::vector<NamedStatistic> list;
    std::string model = nvec_flag.empty() ? "iid" : "fixed";
    for (auto& name : stats) list.push_back(resolve_statistic(name, model, alphabet, pflag));
    for (auto& s : list)
        if (s.alphabet != list[0].alphabet)
            throw std::invalid_argument("moments: statistics use different alphabets");
    json out;
    json rows = json::array();
    if (!nvec_flag.empty()) {
        Composition nvec = parse_composition(nvec_flag);
        out["model"] = "fixed";
        out["nvec"] = nvec.counts;
        for (size_t a = 0; a < list.size(); ++a)
            for (size_t b = a; b < list.size(); ++b) {
                json row;
                row["statistic_a"] = list[a].name == "expression" ? stats[a] : list[a].name;
                row["statistic_b"] = list[b].name == "expression" ? stats[b] : list[b].name;
                row["moment"] = rat_str(
                    exact_moment_multi(list[a].combination, list[b].combination, nvec));
                rows.push_back(row);
            }
    } else {
        if (n < 1) throw std::invalid_argument("moments: need --n or --nvec");
        out["model"] = "iid";
        out["n"] = n;
        ProbabilityVector p(list[0].alphabet,
                            pflag.empty() ? list[0].probabilities
                                          : probabilities_or_uniform(pflag, list[0].alphabet));
        DBasis b(p);
        for (size_t a = 0; a < list.size(); ++a)
            for (size_t c = a; c < list.size(); ++c) {
                json row;
                row["statistic_a"] = list[a].name == "expression" ? stats[a] : list[a].name;
                row["statistic_b"] = list[c].name == "expression" ? stats[c] : list[c].name;
                row["moment"] = rat_str(
                    exact_moment_one_sample(list[a].combination, list[c].combination, n, b));
                rows.push_back(row);
            }
    }
    out["moments"] = rows;
    emit(out, format);
    return 0;
}

int cmd_spectrum(long k, long r, const std::string& kappa_flag, const std::string& format) {
    json out;
    if (!kappa_flag.empty()) {
        Composition kappa = parse_composition(kappa_flag);
        if (kappa.counts.size() != 2 || !kappa.is_partition())
            throw std::invalid_argument("spectrum: --kappa needs ka,kb with ka >= kb");
        Alphabet ab("ab");
        out["kappa"] = kappa.counts;
        json shells = json::array();
        for (long ra = 0; ra <= kappa.counts[0]; ++ra)
            for (long rb = 0; rb <= kappa.counts[1]; ++rb) {
                if (ra + rb < 1 || ra + rb > kappa.counts[1]) continue;
                Composition rvec{{ra, rb}};
                MomentMatrixPair mm = moment_matrices(ab, kappa, rvec);
                json shell;
                shell["r"] = rvec.counts;
                json eigs = json::array();
                for (const EigenPair& e : eigen_split(mm.m)) {
                    if (e.value == 0) continue;
                    json row;
                    row["eigenvalue"] = rat_str(e.value);
                    row["dim"] = (long)e.space.dim();
                    eigs.push_back(row);
                }
                shell["eigenvalues"] = eigs;
                shells.push_back(shell);
            }
        out["shells"] = shells;
    } else {
        if (k < 1 || r < 0 || r > k)
            throw std::invalid_argument("spectrum: need --k >= 1 and 0 <= --r <= k");
        out["k"] = k;
        out["r"] = r;
        json eigs = json::array();
        std::vector<EigenPair> pairs = spectrum_M(k, r);
        std::sort(pairs.begin(), pairs.end(),
                  [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
        for (const EigenPair& e : pairs) {
            json row;
            row["eigenvalue"] = rat_str(e.value);
            row["dim"] = (long)e.space.dim();
            eigs.push_back(row);
        }
        out["eigenvalues"] = eigs;
    }
    emit(out, format);
    return 0;
}

int cmd_simulate(const std::string& model, const std::vector<std::string>& stats, long n,
                 const std::string& nvec_flag, const std::string& pflag, long samples,
                 std::uint64_t seed, const std::string& out_path, int workers) {
    if (stats.empty()) throw std::invalid_argument("simulate: need --stats");
    SimulationConfig cfg;
    cfg.model = model == "fixed" ? Model::multi_sample : Model::one_sample;
    for (auto& name : stats) cfg.statistics.push_back(build_statistic(name));
    cfg.alphabet = cfg.statistics[0].alphabet;
    cfg.samples = samples;
    cfg.seed = seed;
    if (cfg.model == Model::one_sample) {
        if (n < 1) throw std::invalid_argument("simulate: iid model needs --n >= 1");
        cfg.n = n;
        cfg.probabilities = pflag.empty() ? cfg.statistics[0].probabilities
                                          : probabilities_or_uniform(pflag, cfg.alphabet);
    } else {
        if (nvec_flag.empty()) throw std::invalid_argument("simulate: fixed model needs --nvec");
        cfg.nvec = parse_composition(nvec_flag);
        if (cfg.nvec.counts.size() != cfg.alphabet.size())
            throw std::invalid_argument("simulate: --nvec arity != statistic alphabet size");
    }
    std::string csv = format_csv(cfg, estimate_covariance(cfg, workers));
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        out << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subsequence-statistics toolkit"};
    app.require_subcommand(1);

    std::string pattern, text, text_file;
    auto* count = app.add_subcommand("count", "exact subsequence occurrence count");
    count->add_option("--pattern", pattern, "pattern word")->required();
    auto* topt = count->add_option("--text", text, "text word, or - for stdin");
    auto* fopt = count->add_option("--text-file", text_file, "file holding the text");
    topt->excludes(fopt);

    std::string model = "iid", alphabet, pflag, kappa_flag, format = "table";
    long k = 0, r = -1, n = 0;
    auto* decompose = app.add_subcommand("decompose", "spectral component table");
    decompose->add_option("--model", model, "iid or fixed")->required();
    decompose->add_option("--alphabet", alphabet, "alphabet letters, e.g. ab");
    decompose->add_option("--p", pflag, "comma-separated rationals, e.g. 1/2,1/2");
    decompose->add_option("--kappa", kappa_flag, "composition ka,kb (fixed model)");
    decompose->add_option("--k", k, "statistic length (iid model)");
    decompose->add_option("--format", format, "json or table");

    std::string stat;
    auto* classify_cmd = app.add_subcommand("classify", "classify a statistic");
    classify_cmd->add_option("--stat", stat, "catalog name or expression")->required();
    classify_cmd->add_option("--model", model, "iid or fixed (for expressions)");
    classify_cmd->add_option("--alphabet", alphabet, "alphabet (for expressions)");
    classify_cmd->add_option("--p", pflag, "letter probabilities");
    classify_cmd->add_option("--format", format, "json or table");

    std::vector<std::string> stats;
    std::string nvec_flag;
    bool exact = false;
    auto* moments = app.add_subcommand("moments", "exact rational moments");
    moments->add_flag("--exact", exact, "exact mode (always on)");
    moments->add_option("--stats", stats, "statistic names or expressions")->required();
    moments->add_option("--n", n, "word length (iid model)");
    moments->add_option("--nvec", nvec_flag, "letter counts (fixed model)");
    moments->add_option("--alphabet", alphabet, "alphabet (for expressions)");
    moments->add_option("--p", pflag, "letter probabilities (iid model)");
    moments->add_option("--format", format, "json or table");

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue tables");
    spectrum->add_option("--k", k, "statistic length (iid two-letter)");
    spectrum->add_option("--r", r, "grade");
    spectrum->add_option("--kappa", kappa_flag, "two-letter composition ka,kb");
    spectrum->add_option("--format", format, "json or table");

    long samples = 1000;
    std::uint64_t seed = 0;
    std::string out_path;
    int workers = 1;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo CSV report");
    simulate->add_option("--model", model, "iid or fixed")->required();
    simulate->add_option("--stats", stats, "catalog statistic names")->required();
    simulate->add_option("--n", n, "word length (iid model)");
    simulate->add_option("--nvec", nvec_flag, "letter counts (fixed model)");
    simulate->add_option("--p", pflag, "letter probabilities (iid model)");
    simulate->add_option("--samples", samples, "number of samples");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_option("--out", out_path, "output path, default stdout");
    simulate->add_option("--workers", workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (count->parsed() && text.empty() && text_file.empty()) {
        std::cerr << "count: one of --text or --text-file is required\n";
        return 2;
    }

    try {
        if (count->parsed()) return cmd_count(pattern, text, text_file);
        if (decompose->parsed())
            return cmd_decompose(model, alphabet, pflag, kappa_flag, k, format);
        if (classify_cmd->parsed())
            return cmd_classify(stat, model, alphabet, pflag, format);
        if (moments->parsed())
            return cmd_moments(stats, n, nvec_flag, alphabet, pflag, format);
        if (spectrum->parsed()) return cmd_spectrum(k, r, kappa_flag, format);
        if (simulate->parsed())
            return cmd_simulate(model, stats, n, nvec_flag, pflag, samples, seed, out_path,
                                workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
